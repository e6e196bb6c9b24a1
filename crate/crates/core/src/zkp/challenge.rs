//! Fiat-Shamir challenges: SHA-256 over concatenated canonical encodings,
//! reduced into the scalar field.

use eticket_groups::{PairingGroup, Scalar};

pub struct Challenge<'a, B: PairingGroup> {
    grp: &'a B,
    buf: Vec<u8>,
}

impl<'a, B: PairingGroup> Challenge<'a, B> {
    pub fn new(grp: &'a B) -> Self {
        Self { grp, buf: Vec::new() }
    }

    pub fn g(mut self, a: &B::G) -> Self {
        self.buf.extend(self.grp.encode_g(a));
        self
    }

    pub fn gs<'b>(mut self, items: impl IntoIterator<Item = &'b B::G>) -> Self
    where
        B::G: 'b,
    {
        for a in items {
            self = self.g(a);
        }
        self
    }

    pub fn gt(mut self, a: &B::Gt) -> Self {
        self.buf.extend(self.grp.encode_gt(a));
        self
    }

    pub fn gts<'b>(mut self, items: impl IntoIterator<Item = &'b B::Gt>) -> Self
    where
        B::Gt: 'b,
    {
        for a in items {
            self = self.gt(a);
        }
        self
    }

    pub fn finish(self) -> Scalar {
        self.grp.hash_to_scalar(&self.buf)
    }
}
