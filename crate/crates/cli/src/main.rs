use std::fs::File;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::{DateTime, Utc};
use clap::{Args, Parser, Subcommand};
use eticket::scheme::TicketTerms;
use eticket_cli::bench::{run_bench, write_csv, BenchOptions};
use eticket_cli::commands::{self, Context, Showing};
use eticket_cli::config::DemoConfig;
use eticket_cli::demo::run_demo;
use eticket_cli::store::Store;
use eticket_cli::{with_group, Backend, CliError, DEFAULT_PRIME};

#[derive(Parser)]
#[command(name = "eticket", version, about = "Privacy-preserving attribute-based e-tickets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StateArgs {
    /// Directory holding parameters, party state and verifier logs.
    #[arg(long, default_value = ".")]
    dir: PathBuf,
    /// File stem of the parameter and authority files.
    #[arg(long, default_value = "eticket")]
    system: String,
    /// Derive randomness from this seed and the input state.
    #[arg(long)]
    seed: Option<u64>,
}

impl StateArgs {
    fn context(&self) -> Result<Context, CliError> {
        Ok(Context {
            store: Store::new(&self.dir, &self.system)?,
            seed: self.seed,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate public parameters and the authority's key from a policy file.
    Setup {
        #[command(flatten)]
        state: StateArgs,
        /// TOML file with `[[range]]` and `[[set]]` tables.
        #[arg(long)]
        policy: PathBuf,
        #[arg(long, value_enum, default_value_t = Backend::Pairing)]
        backend: Backend,
        /// Group order of the exponent backend.
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
    },
    /// Register a seller with the authority.
    RegisterSeller {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        id: String,
        /// Validity period of the credential.
        #[arg(long)]
        vp: String,
    },
    /// Register a user and their attributes with the authority.
    RegisterUser {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        id: String,
        /// TOML file with `[range_values]` and `[set_items]` tables.
        #[arg(long)]
        attributes: PathBuf,
        #[arg(long)]
        vp: String,
    },
    /// Buy a ticket, proving the requested policies.
    Issue {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        seller: String,
        #[arg(long)]
        user: String,
        /// Comma-separated policy names to prove.
        #[arg(long, value_delimiter = ',')]
        request: Vec<String>,
        #[arg(long)]
        price: String,
        #[arg(long)]
        serv: String,
        /// Validity period of the ticket.
        #[arg(long)]
        vp: String,
    },
    /// Show a ticket to a verifier and log the result.
    Validate {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        user: String,
        #[arg(long)]
        verifier: String,
        /// Seller whose published key the verifier checks against.
        #[arg(long)]
        seller: String,
        /// Ticket index; the newest by default.
        #[arg(long)]
        ticket: Option<usize>,
        /// Validation time (RFC 3339); now by default.
        #[arg(long)]
        at: Option<DateTime<Utc>>,
        /// Forget earlier showings, as a cheating user would.
        #[arg(long)]
        forget_shown: bool,
    },
    /// Scan verifier logs for tickets shown twice and identify the culprits.
    Detect {
        #[command(flatten)]
        state: StateArgs,
        /// Verifier names whose logs are merged.
        #[arg(required = true)]
        verifiers: Vec<String>,
    },
    /// Run the whole scenario in memory and print a trace.
    Demo {
        /// Scenario file; the built-in two-range, four-set scenario by default.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the backend named in the scenario.
        #[arg(long, value_enum)]
        backend: Option<Backend>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time each protocol phase and the range/set proof sweeps; CSV output.
    Bench {
        #[arg(long, default_value_t = 2)]
        ranges: usize,
        #[arg(long, default_value_t = 4)]
        sets: usize,
        /// Digits per range, each range being `[0, 2^k)`.
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, default_value_t = 10)]
        set_size: usize,
        #[arg(long, default_value_t = 20)]
        iters: usize,
        #[arg(long, value_enum, default_value_t = Backend::Pairing)]
        backend: Backend,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        /// Skip the range-width and set-size sweeps.
        #[arg(long)]
        no_sweeps: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination; standard output by default.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Vec<String>, CliError> {
    match cli.command {
        Command::Setup {
            state,
            policy,
            backend,
            prime,
        } => commands::setup(&state.context()?, &policy, backend, prime),
        Command::RegisterSeller { state, id, vp } => commands::register_seller(&state.context()?, &id, &vp),
        Command::RegisterUser {
            state,
            id,
            attributes,
            vp,
        } => commands::register_user(&state.context()?, &id, &attributes, &vp),
        Command::Issue {
            state,
            seller,
            user,
            request,
            price,
            serv,
            vp,
        } => {
            let terms = TicketTerms { price, serv, vp };
            commands::issue(&state.context()?, &seller, &user, &request, &terms)
        }
        Command::Validate {
            state,
            user,
            verifier,
            seller,
            ticket,
            at,
            forget_shown,
        } => {
            let showing = Showing {
                user,
                verifier,
                seller,
                ticket,
                at: at.unwrap_or_else(Utc::now),
                forget_shown,
            };
            commands::validate(&state.context()?, &showing)
        }
        Command::Detect { state, verifiers } => commands::detect(&state.context()?, &verifiers),
        Command::Demo { config, backend, seed } => {
            let cfg = match config {
                Some(path) => DemoConfig::load(&path)?,
                None => DemoConfig::default(),
            };
            match run_demo(&cfg, backend, seed) {
                Ok(report) => Ok(vec![report.to_string()]),
                Err(failure) => {
                    for line in &failure.lines {
                        println!("{line}");
                    }
                    Err(CliError::Check(failure.to_string()))
                }
            }
        }
        Command::Bench {
            ranges,
            sets,
            k,
            set_size,
            iters,
            backend,
            prime,
            no_sweeps,
            seed,
            out,
        } => {
            let opts = BenchOptions {
                ranges,
                sets,
                k,
                set_size,
                iters,
                sweeps: !no_sweeps,
                seed,
            };
            let rows = with_group!(backend, prime, |grp| run_bench(grp, &opts)?);
            match out {
                Some(path) => {
                    let file = File::create(&path).map_err(|source| CliError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    write_csv(&rows, file)?;
                    Ok(vec![format!("{} rows written to {}", rows.len(), path.display())])
                }
                None => {
                    write_csv(&rows, io::stdout().lock())?;
                    Ok(Vec::new())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
