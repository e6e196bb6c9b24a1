//! Attribute-based anonymous e-tickets over a symmetric pairing.
//!
//! A central authority publishes [`params::Params`] and issues credentials
//! to sellers and users. A user holding a credential buys a ticket from a
//! seller while proving, without revealing the attribute values, that the
//! certified attributes fall in the requested ranges and sets. Showing a
//! ticket to a verifier reveals nothing linkable except a serial commitment,
//! which lets verifiers detect and de-anonymise double spending.

pub mod messages;
pub mod params;
pub mod policy;
pub mod scheme;
pub mod sigs;
pub mod ticket;
pub mod wire;
pub mod zkp;

pub use eticket_groups as groups;
pub use params::{setup, Credential, MasterSecret, Params, SetupError};
pub use policy::{PolicyUniverse, SatisfiedPolicies, UserAttributes};
pub use ticket::Ticket;
