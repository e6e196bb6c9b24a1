//! Every transmitted group element or scalar of every proof, credential and
//! ticket message is perturbed in turn, and each altered value must be
//! rejected.
//!
//! Perturbations are found by walking the field encoding: any field that
//! decodes as an element of `G`, `GT` or the scalar field is replaced by a
//! neighbouring value (multiplied by the generator, or incremented), and
//! nested records are walked recursively. Strings and counts are left alone.

mod common;

use common::{all_policies, attrs, split, World, P64};
use eticket::groups::{ExponentGroup, PairingGroup, TypeACurve};
use eticket::policy::{PolicyUniverse, RangePolicy, SatisfiedPolicies, SetPolicy, UserAttributes};
use eticket::sigs::{bb_sign, bb_verify, bbsplus_sign, bbsplus_verify, BbGenerators, BbKeyPair, BbsPlusKeyPair};
use eticket::wire::{Reader, Wire, Writer};
use eticket::zkp::{verify_s1, verify_s2, verify_u1, verify_u2, verify_u3};

fn join(fields: &[&[u8]]) -> Vec<u8> {
    let mut out = Vec::new();
    for f in fields {
        out.extend_from_slice(&(f.len() as u32).to_be_bytes());
        out.extend_from_slice(f);
    }
    out
}

fn mutate_field<B: PairingGroup>(grp: &B, field: &[u8]) -> Vec<Vec<u8>> {
    if let Ok(a) = grp.decode_g(field) {
        return vec![grp.encode_g(&grp.op(&a, &grp.generator()))];
    }
    if let Ok(a) = grp.decode_gt(field) {
        let gg = grp.pair(&grp.generator(), &grp.generator());
        return vec![grp.encode_gt(&grp.gt_op(&a, &gg))];
    }
    if let Ok(s) = grp.decode_scalar(field) {
        let f = grp.scalars();
        return vec![grp.encode_scalar(&f.add(&s, &f.one()))];
    }
    match split(field) {
        Some(fields) if !fields.is_empty() => mutate_body(grp, field),
        _ => Vec::new(),
    }
}

/// All bodies differing from `body` in exactly one element or scalar.
fn mutate_body<B: PairingGroup>(grp: &B, body: &[u8]) -> Vec<Vec<u8>> {
    let fields = split(body).expect("well-formed body");
    let mut out = Vec::new();
    for i in 0..fields.len() {
        for m in mutate_field(grp, fields[i]) {
            let mut f = fields.clone();
            f[i] = &m;
            out.push(join(&f));
        }
    }
    out
}

fn body<B: PairingGroup, T: Wire<B>>(grp: &B, v: &T) -> Vec<u8> {
    let mut w = Writer::new(grp);
    v.write(&mut w);
    w.into_bytes()
}

/// Checks that `accept` holds for `v` and fails for every single mutation;
/// returns the number of mutations tried.
fn sweep<B: PairingGroup, T: Wire<B>>(grp: &B, v: &T, what: &str, accept: impl Fn(&T) -> bool) -> usize {
    assert!(accept(v), "{what}: honest value rejected");
    let original = body(grp, v);
    let mutants = mutate_body(grp, &original);
    assert!(!mutants.is_empty(), "{what}: nothing to mutate");
    for (n, m) in mutants.iter().enumerate() {
        let mut r = Reader::new(grp, m, 0);
        let mutant = T::read(&mut r).expect("mutants stay decodable");
        assert!(!accept(&mutant), "{what}: mutation {n} accepted");
    }
    mutants.len()
}

fn proofs_and_messages<B: PairingGroup>(
    grp: B,
    universe: PolicyUniverse,
    attrs: UserAttributes,
    requested: SatisfiedPolicies,
) -> usize {
    let mut w = World::new(grp, universe, attrs, 7);
    let params = w.params.clone();
    let p = &*params;
    let grp = &p.grp;
    let mut total = 0;

    total += sweep(grp, &w.seller_reg.proof, "seller registration proof", |pr| {
        verify_s1(p, pr)
    });
    total += sweep(grp, &w.user_reg.proof, "user registration proof", |pr| verify_u1(p, pr));

    let issued = w.issue(&requested);
    total += sweep(grp, &issued.auth.proof, "seller authentication proof", |pr| {
        verify_s2(p, pr)
    });
    total += sweep(grp, &issued.request.proof, "ticket request proof", |pr| {
        verify_u2(p, pr)
    });

    let mut v = w.verifier("gate-1");
    let ch = v.challenge().unwrap();
    let transcript = w.user.show_ticket(&issued.ticket, &ch).unwrap();
    let psi = &issued.ticket.policy_hash;
    let y_s = w.seller.public_key().clone();
    total += sweep(grp, &transcript.proof, "validation proof", |pr| {
        verify_u3(p, pr, psi, &y_s, &ch.nonce, "gate-1")
    });

    // Credentials (BBS+ under the authority key), as received by each party.
    let seller_reg = w.seller_reg.clone();
    total += sweep(grp, &w.seller_cred, "seller credential", |c| {
        let mut s = eticket::scheme::Seller::new("seller-1", params.clone(), common::rng(7, 1));
        let _ = s.registration_request(&seller_reg.vp);
        s.finish_registration(c).is_ok()
    });
    let user = &w.user;
    let cred = user.credential().unwrap().clone();
    total += sweep(grp, &w.user_cred, "user credential", |c| {
        let f = grp.scalars();
        let total_rand = f.add(&f.sub(&cred.randomness, &w.user_cred.randomness), &c.randomness);
        p.credential_holds(
            &c.sigma,
            &c.exponent,
            &cred.vp,
            user.public_key(),
            &total_rand,
            user.attributes(),
        )
    });

    // The ticket (BBS+ under the seller key), as received by the user.
    let d = grp.scalars().sub(&issued.ticket.tweak, &issued.issue.tweak);
    let pending = || eticket::scheme::PendingTicket {
        tweak: d.clone(),
        requested: requested.clone(),
    };
    total += sweep(grp, &issued.issue, "ticket issue", |m| {
        user.finish_ticket(pending(), m).is_ok()
    });
    total
}

fn small_universe() -> PolicyUniverse {
    PolicyUniverse::new(
        vec![RangePolicy::new("age", 12, 18)],
        vec![SetPolicy::new("zone", &["A", "B", "C"])],
        2,
    )
    .unwrap()
}

pub fn every_mutation_rejected_on_exponent_backend() -> usize {
    let grp = ExponentGroup::new(P64).unwrap();
    proofs_and_messages(grp, common::universe(), attrs(), all_policies())
}

pub fn every_mutation_rejected_on_pairing_backend() -> usize {
    let a = UserAttributes::default().with_value("age", 13).with_item("zone", "C");
    proofs_and_messages(
        TypeACurve::default(),
        small_universe(),
        a,
        SatisfiedPolicies::new(["age", "zone"]),
    )
}

struct BbCase<B: PairingGroup> {
    pk: B::G,
    m: eticket::groups::Scalar,
    sig: B::G,
}

impl<B: PairingGroup> Wire<B> for BbCase<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.g(&self.pk);
        w.scalar(&self.m);
        w.g(&self.sig);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, eticket::wire::ParseError> {
        Ok(Self {
            pk: r.g("pk")?,
            m: r.scalar("m")?,
            sig: r.g("sig")?,
        })
    }
}

struct BbsCase<B: PairingGroup> {
    messages: Vec<eticket::groups::Scalar>,
    sig: eticket::sigs::BbsPlusSig<B>,
}

impl<B: PairingGroup> Wire<B> for BbsCase<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.list(&self.messages, |w, m| w.scalar(m));
        w.scalar(&self.sig.w);
        w.scalar(&self.sig.s);
        w.g(&self.sig.sigma);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, eticket::wire::ParseError> {
        Ok(Self {
            messages: r.list("messages", |r| r.scalar("message"))?,
            sig: eticket::sigs::BbsPlusSig {
                w: r.scalar("w")?,
                s: r.scalar("s")?,
                sigma: r.g("sigma")?,
            },
        })
    }
}

fn signatures<B: PairingGroup>(grp: B) -> usize {
    let mut rng = common::rng(3, 0);
    let gens = BbGenerators {
        g1: grp.random_element(&mut rng),
        g2: grp.random_element(&mut rng),
    };
    let key = BbKeyPair::generate(&grp, &gens, &mut rng);
    let m = grp.random_scalar(&mut rng);
    let case = BbCase {
        pk: key.pk.clone(),
        sig: bb_sign(&grp, &gens, &key.sk, &m).unwrap(),
        m,
    };
    let mut total = sweep(&grp, &case, "BB signature", |c| {
        bb_verify(&grp, &gens, &c.pk, &c.m, &c.sig)
    });

    let generators: Vec<_> = (0..6).map(|_| grp.random_element(&mut rng)).collect();
    let h = grp.random_element(&mut rng);
    let key = BbsPlusKeyPair::generate(&grp, h, generators, &mut rng);
    let messages: Vec<_> = (0..4).map(|_| grp.random_scalar(&mut rng)).collect();
    let sig = bbsplus_sign(&grp, &key, &messages, &mut rng).unwrap();
    let case = BbsCase { messages, sig };
    total += sweep(&grp, &case, "BBS+ signature", |c| {
        bbsplus_verify(&grp, &key.public, &c.messages, &c.sig)
    });
    total
}

pub fn signature_mutations_rejected() -> usize {
    signatures(ExponentGroup::new(P64).unwrap()) + signatures(TypeACurve::default())
}

#[cfg(test)]
mod tests {
    #[test]
    fn every_mutation_rejected_on_exponent_backend() {
        super::every_mutation_rejected_on_exponent_backend();
    }

    #[test]
    fn every_mutation_rejected_on_pairing_backend() {
        super::every_mutation_rejected_on_pairing_backend();
    }

    #[test]
    fn signature_mutations_rejected() {
        super::signature_mutations_rejected();
    }
}
