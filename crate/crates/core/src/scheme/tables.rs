use std::collections::{BTreeMap, HashMap};

use eticket_groups::{PairingGroup, Scalar};

use super::SchemeError;
use crate::params::Params;

/// The user's record of verifiers already shown a ticket, keyed by
/// `H(ID_V)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UserTable {
    entries: BTreeMap<Scalar, Scalar>,
}

impl UserTable {
    pub fn contains(&self, id_hash: &Scalar) -> bool {
        self.entries.contains_key(id_hash)
    }

    pub fn record(&mut self, id_hash: Scalar, nonce: Scalar) {
        self.entries.insert(id_hash, nonce);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Scalar, &Scalar)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One accepted validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifierEntry<B: PairingGroup> {
    pub verifier_id: String,
    pub nonce: Scalar,
    /// `D = g^s_u`
    pub serial_commit: B::G,
    /// `E = xi^x_u H'(ID_V)^(r s_u)`
    pub spend_tag: B::G,
    pub blinded_ticket: B::G,
    pub blinding_commit: B::G,
    pub policy_hash: Scalar,
}

/// Append-only log of accepted validations, indexed by serial commitment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifierTable<B: PairingGroup> {
    grp: B,
    entries: Vec<VerifierEntry<B>>,
    index: HashMap<Vec<u8>, Vec<usize>>,
}

impl<B: PairingGroup> VerifierTable<B> {
    pub fn new(grp: B) -> Self {
        Self {
            grp,
            entries: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn push(&mut self, entry: VerifierEntry<B>) {
        let key = self.grp.encode_g(&entry.serial_commit);
        self.index.entry(key).or_default().push(self.entries.len());
        self.entries.push(entry);
    }

    /// Appends every entry of `other`.
    pub fn extend(&mut self, other: &VerifierTable<B>) {
        for e in &other.entries {
            self.push(e.clone());
        }
    }

    pub fn entries(&self) -> &[VerifierEntry<B>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Positions of the entries with serial commitment `d`.
    pub fn by_serial(&self, d: &B::G) -> &[usize] {
        self.index.get(&self.grp.encode_g(d)).map_or(&[], Vec::as_slice)
    }

    /// Checks the index against the entries.
    pub fn index_consistent(&self) -> bool {
        let listed: usize = self.index.values().map(Vec::len).sum();
        listed == self.entries.len()
            && self.index.iter().all(|(k, ids)| {
                ids.iter()
                    .all(|&i| self.grp.encode_g(&self.entries[i].serial_commit) == *k)
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpendKind {
    /// Both showings at one verifier: the user can be identified.
    SameVerifier,
    /// Showings at different verifiers: reported, but not de-anonymisable.
    CrossVerifier,
}

/// Two entries with equal serial commitments and different tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoubleSpend {
    pub first: usize,
    pub second: usize,
    pub kind: SpendKind,
}

/// Every pair of entries sharing `D` with `E != E'`.
pub fn detect_double_spend<B: PairingGroup>(table: &VerifierTable<B>) -> Vec<DoubleSpend> {
    let mut groups: Vec<&Vec<usize>> = table.index.values().filter(|v| v.len() > 1).collect();
    groups.sort();
    let mut hits = Vec::new();
    for ids in groups {
        for (n, &i) in ids.iter().enumerate() {
            for &j in &ids[n + 1..] {
                let (a, b) = (&table.entries[i], &table.entries[j]);
                if a.spend_tag == b.spend_tag {
                    continue;
                }
                let kind = if a.verifier_id == b.verifier_id {
                    SpendKind::SameVerifier
                } else {
                    SpendKind::CrossVerifier
                };
                hits.push(DoubleSpend {
                    first: i,
                    second: j,
                    kind,
                });
            }
        }
    }
    hits
}

/// Recovers `Y_U = (E^r' / E'^r)^(1/(r' - r))` from two showings of one
/// ticket at one verifier.
pub fn deanonymize<B: PairingGroup>(
    params: &Params<B>,
    a: &VerifierEntry<B>,
    b: &VerifierEntry<B>,
) -> Result<B::G, SchemeError> {
    if a.verifier_id != b.verifier_id {
        return Err(SchemeError::DifferentVerifiers);
    }
    if a.serial_commit != b.serial_commit {
        return Err(SchemeError::SerialMismatch);
    }
    let grp = &params.grp;
    let f = grp.scalars();
    let inv = f.inv(&f.sub(&b.nonce, &a.nonce)).ok_or(SchemeError::DegenerateNonces)?;
    let ratio = grp.product(&[(&a.spend_tag, &b.nonce), (&b.spend_tag, &f.neg(&a.nonce))]);
    Ok(grp.exp(&ratio, &inv))
}
