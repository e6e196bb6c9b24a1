//! System parameters published by the central authority, and setup.

use std::ops::Deref;

use eticket_groups::{PairingGroup, Scalar};
use rand::RngCore;
use thiserror::Error;

use crate::policy::{PolicyError, PolicyUniverse, SatisfiedPolicies, UserAttributes};

/// Secret draws attempted before setup reports a pole collision.
const MAX_SECRET_DRAWS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetupError {
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("could not draw a {0} secret avoiding every tag pole")]
    PoleCollision(&'static str),
    #[error("published tags do not satisfy their pairing relations")]
    InconsistentTags,
}

/// The authority's secrets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasterSecret {
    /// Credential signing key; `ca_public_key = g^x`.
    pub x: Scalar,
    /// Digit tag key; `range_tag_key = h^y`.
    pub y: Scalar,
    /// One key per set policy; `set_public_keys[i] = set_bases[i]^mu_i`.
    pub set_keys: Vec<Scalar>,
}

/// A credential issued by the authority: `sigma = (message)^(1/(x + c))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Credential<B: PairingGroup> {
    /// `c`
    pub exponent: Scalar,
    /// `r`, the total randomness on the credential randomness base.
    pub randomness: Scalar,
    pub sigma: B::G,
    /// Validity period signed into the credential.
    pub vp: String,
}

/// Every public group element of the system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamElements<B: PairingGroup> {
    pub g: B::G,
    pub g0: B::G,
    /// Base for hashed validity periods.
    pub g1: B::G,
    /// Base for ticket serial numbers.
    pub g2: B::G,
    /// Base for ticket policy hashes.
    pub g3: B::G,
    /// One base per range policy, carrying the certified value.
    pub range_attr_bases: Vec<B::G>,
    /// `h`: base of range commitments and digit tags.
    pub range_base: B::G,
    /// Base of credential randomness.
    pub cred_rand_base: B::G,
    /// `eta`: the element signed by set item tags.
    pub item_tag_base: B::G,
    /// Base of user public keys.
    pub user_key_base: B::G,
    /// Base of seller public keys.
    pub seller_key_base: B::G,
    /// Blinding base for credentials and tickets.
    pub blinding_base: B::G,
    /// One base per set policy, carrying the hashed item.
    pub set_bases: Vec<B::G>,
    /// `g^x`
    pub ca_public_key: B::G,
    /// `h^y`
    pub range_tag_key: B::G,
    /// `h^(1/(y+i))` for each digit value `i < q`.
    pub digit_tags: Vec<B::G>,
    /// `h^(q^i)` for `i < k`.
    pub power_bases: Vec<B::G>,
    /// `set_bases[i]^mu_i`
    pub set_public_keys: Vec<B::G>,
    /// `eta^(1/(mu_i + H(item)))`, per set and item.
    pub item_tags: Vec<Vec<B::G>>,
}

/// Pairings of fixed parameter pairs, computed once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingCache<B: PairingGroup> {
    pub g0_g: B::Gt,
    pub g1_g: B::Gt,
    pub user_key_g: B::Gt,
    pub cred_rand_g: B::Gt,
    pub blind_g: B::Gt,
    pub blind_ca: B::Gt,
    pub seller_key_g: B::Gt,
    pub range_attr_g: Vec<B::Gt>,
    pub set_base_g: Vec<B::Gt>,
    /// `e(h, h)`
    pub range_base_sq: B::Gt,
    /// `e(h_i, h)` per digit tag.
    pub digit_tag_h: Vec<B::Gt>,
    /// `e(eta, eta_i)` per set.
    pub item_base_set: Vec<B::Gt>,
    pub g0_rho: B::Gt,
    pub g1_rho: B::Gt,
    pub g2_rho: B::Gt,
    pub g3_rho: B::Gt,
    pub blind_rho: B::Gt,
}

impl<B: PairingGroup> PairingCache<B> {
    fn compute(grp: &B, e: &ParamElements<B>) -> Self {
        let rho = &e.seller_key_base;
        Self {
            g0_g: grp.pair(&e.g0, &e.g),
            g1_g: grp.pair(&e.g1, &e.g),
            user_key_g: grp.pair(&e.user_key_base, &e.g),
            cred_rand_g: grp.pair(&e.cred_rand_base, &e.g),
            blind_g: grp.pair(&e.blinding_base, &e.g),
            blind_ca: grp.pair(&e.blinding_base, &e.ca_public_key),
            seller_key_g: grp.pair(rho, &e.g),
            range_attr_g: e.range_attr_bases.iter().map(|b| grp.pair(b, &e.g)).collect(),
            set_base_g: e.set_bases.iter().map(|b| grp.pair(b, &e.g)).collect(),
            range_base_sq: grp.pair(&e.range_base, &e.range_base),
            digit_tag_h: e.digit_tags.iter().map(|t| grp.pair(t, &e.range_base)).collect(),
            item_base_set: e.set_bases.iter().map(|b| grp.pair(&e.item_tag_base, b)).collect(),
            g0_rho: grp.pair(&e.g0, rho),
            g1_rho: grp.pair(&e.g1, rho),
            g2_rho: grp.pair(&e.g2, rho),
            g3_rho: grp.pair(&e.g3, rho),
            blind_rho: grp.pair(&e.blinding_base, rho),
        }
    }
}

/// Public parameters: group, policies, elements and cached pairings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params<B: PairingGroup> {
    pub grp: B,
    pub universe: PolicyUniverse,
    elements: ParamElements<B>,
    cache: PairingCache<B>,
}

impl<B: PairingGroup> Deref for Params<B> {
    type Target = ParamElements<B>;

    fn deref(&self) -> &ParamElements<B> {
        &self.elements
    }
}

impl<B: PairingGroup> Params<B> {
    /// Assembles parameters after checking element counts against the
    /// universe.
    pub fn new(grp: B, universe: PolicyUniverse, elements: ParamElements<B>) -> Result<Self, SetupError> {
        let n1 = universe.ranges().len();
        let n2 = universe.sets().len();
        let counts_ok = elements.range_attr_bases.len() == n1
            && elements.set_bases.len() == n2
            && elements.set_public_keys.len() == n2
            && elements.digit_tags.len() as u64 == universe.base()
            && elements.power_bases.len() == universe.width() as usize
            && elements.item_tags.len() == n2
            && elements
                .item_tags
                .iter()
                .zip(universe.sets())
                .all(|(tags, set)| tags.len() == set.items.len());
        if !counts_ok {
            return Err(SetupError::InconsistentTags);
        }
        universe.check_order(grp.scalars().order())?;
        let cache = PairingCache::compute(&grp, &elements);
        Ok(Self {
            grp,
            universe,
            elements,
            cache,
        })
    }

    pub fn elements(&self) -> &ParamElements<B> {
        &self.elements
    }

    pub fn cache(&self) -> &PairingCache<B> {
        &self.cache
    }

    /// Number of digit, power and item tags: `q + k + sum of set sizes`.
    pub fn tag_count(&self) -> usize {
        self.digit_tags.len() + self.power_bases.len() + self.item_tags.iter().map(Vec::len).sum::<usize>()
    }

    /// `H`: hash of a string's UTF-8 bytes.
    pub fn hash_text(&self, s: &str) -> Scalar {
        self.grp.hash_to_scalar(s.as_bytes())
    }

    /// `H'(ID_V)`, the verifier's double-spend base.
    pub fn verifier_base(&self, verifier_id: &str) -> B::G {
        self.grp.hash_to_group(verifier_id.as_bytes())
    }

    /// Policy hash bound into a ticket: `H(P_U || Price || Serv || VP_T)`
    /// with every component length-prefixed.
    pub fn ticket_policy_hash(&self, requested: &SatisfiedPolicies, price: &str, serv: &str, vp: &str) -> Scalar {
        let mut buf = Vec::new();
        for part in [
            &requested.canonical_bytes()[..],
            price.as_bytes(),
            serv.as_bytes(),
            vp.as_bytes(),
        ] {
            buf.extend_from_slice(&(part.len() as u32).to_be_bytes());
            buf.extend_from_slice(part);
        }
        self.grp.hash_to_scalar(&buf)
    }

    /// Credential exponents for every range (the value, or 0 when absent)
    /// and every set (`H(item)`, or 0 when absent), in universe order.
    pub fn credential_exponents(&self, attrs: &UserAttributes) -> (Vec<Scalar>, Vec<Scalar>) {
        let f = self.grp.scalars();
        let ranges = self
            .universe
            .ranges()
            .iter()
            .map(|r| attrs.range_values.get(&r.name).map_or(f.zero(), |&v| f.from_i64(v)))
            .collect();
        let sets = self
            .universe
            .sets()
            .iter()
            .map(|s| attrs.set_items.get(&s.name).map_or(f.zero(), |i| self.hash_text(i)))
            .collect();
        (ranges, sets)
    }

    /// The element a credential signs:
    /// `g0 g1^H(VP) Y cred_rand^r prod range_attr_l^a_l prod set_i^H_i`.
    pub fn credential_message(&self, vp: &str, key: &B::G, randomness: &Scalar, attrs: &UserAttributes) -> B::G {
        let (ranges, sets) = self.credential_exponents(attrs);
        let vp_hash = self.hash_text(vp);
        let mut terms = vec![(&self.g1, &vp_hash), (&self.cred_rand_base, randomness)];
        terms.extend(self.range_attr_bases.iter().zip(&ranges));
        terms.extend(self.set_bases.iter().zip(&sets));
        let grp = &self.grp;
        grp.op(&grp.op(&self.g0, key), &grp.product(&terms))
    }

    /// Registration check
    /// `e(sigma, g~ g^c) = e(g0,g) e(g,g1)^H(VP) e(Y,g) e(cred_rand,g)^r ...`.
    pub fn credential_holds(
        &self,
        sigma: &B::G,
        exponent: &Scalar,
        vp: &str,
        key: &B::G,
        randomness: &Scalar,
        attrs: &UserAttributes,
    ) -> bool {
        let grp = &self.grp;
        let c = &self.cache;
        let lhs = grp.pair(sigma, &grp.op(&self.ca_public_key, &grp.exp(&self.g, exponent)));
        let (ranges, sets) = self.credential_exponents(attrs);
        let vp_hash = self.hash_text(vp);
        let mut terms = vec![(&c.g1_g, &vp_hash), (&c.cred_rand_g, randomness)];
        terms.extend(c.range_attr_g.iter().zip(&ranges));
        terms.extend(c.set_base_g.iter().zip(&sets));
        let rhs = grp.gt_op(&grp.gt_op(&c.g0_g, &grp.pair(key, &self.g)), &grp.gt_product(&terms));
        lhs == rhs
    }

    /// Checks every published tag against its pairing relation.
    pub fn tags_consistent(&self) -> bool {
        let grp = &self.grp;
        let f = grp.scalars();
        let h = &self.range_base;
        let hh = &self.cache.range_base_sq;
        let digits_ok = self.digit_tags.iter().enumerate().all(|(i, tag)| {
            let key = grp.op(&self.range_tag_key, &grp.exp(h, &f.from_u64(i as u64)));
            grp.pair(tag, &key) == *hh
        });
        let powers_ok = self.power_bases.iter().enumerate().all(|(i, p)| {
            let q_i = f.from_biguint(&num_bigint::BigUint::from(self.universe.base()).pow(i as u32));
            *p == grp.exp(h, &q_i)
        });
        let items_ok = self.universe.sets().iter().enumerate().all(|(i, set)| {
            set.items.iter().zip(&self.item_tags[i]).all(|(item, tag)| {
                let key = grp.op(
                    &self.set_public_keys[i],
                    &grp.exp(&self.set_bases[i], &self.hash_text(item)),
                );
                grp.pair(tag, &key) == self.cache.item_base_set[i]
            })
        });
        digits_ok && powers_ok && items_ok
    }
}

/// Draws a secret avoiding `secret + pole = 0` for every listed pole.
fn draw_avoiding<B: PairingGroup, R: RngCore + ?Sized>(
    grp: &B,
    poles: &[Scalar],
    what: &'static str,
    rng: &mut R,
) -> Result<Scalar, SetupError> {
    let f = grp.scalars();
    for _ in 0..MAX_SECRET_DRAWS {
        let s = grp.random_scalar(rng);
        if poles.iter().all(|p| !f.add(&s, p).is_zero()) {
            return Ok(s);
        }
    }
    Err(SetupError::PoleCollision(what))
}

/// Generates the authority's secrets and the public parameters.
pub fn setup<B: PairingGroup, R: RngCore + ?Sized>(
    universe: PolicyUniverse,
    grp: B,
    rng: &mut R,
) -> Result<(MasterSecret, Params<B>), SetupError> {
    universe.check_order(grp.scalars().order())?;
    let f = grp.scalars().clone();
    let n1 = universe.ranges().len();
    let n2 = universe.sets().len();
    let fresh = |rng: &mut R| grp.random_element(rng);

    let g = fresh(rng);
    let g0 = fresh(rng);
    let g1 = fresh(rng);
    let g2 = fresh(rng);
    let g3 = fresh(rng);
    let range_attr_bases: Vec<_> = (0..n1).map(|_| fresh(rng)).collect();
    let range_base = fresh(rng);
    let cred_rand_base = fresh(rng);
    let item_tag_base = fresh(rng);
    let user_key_base = fresh(rng);
    let seller_key_base = fresh(rng);
    let blinding_base = fresh(rng);
    let set_bases: Vec<_> = (0..n2).map(|_| fresh(rng)).collect();

    let x = grp.random_scalar(rng);
    let digit_poles: Vec<_> = (0..universe.base()).map(|i| f.from_u64(i)).collect();
    let y = draw_avoiding(&grp, &digit_poles, "digit tag", rng)?;
    let mut set_keys = Vec::with_capacity(n2);
    for set in universe.sets() {
        let poles: Vec<_> = set.items.iter().map(|i| grp.hash_to_scalar(i.as_bytes())).collect();
        set_keys.push(draw_avoiding(&grp, &poles, "set", rng)?);
    }

    let inv = |s: &Scalar| f.inv(s).expect("poles excluded when drawing secrets");
    let digit_tags = digit_poles
        .iter()
        .map(|i| grp.exp(&range_base, &inv(&f.add(&y, i))))
        .collect();
    let mut power = f.one();
    let q = f.from_u64(universe.base());
    let mut power_bases = Vec::new();
    for _ in 0..universe.width() {
        power_bases.push(grp.exp(&range_base, &power));
        power = f.mul(&power, &q);
    }
    let set_public_keys = set_bases.iter().zip(&set_keys).map(|(b, mu)| grp.exp(b, mu)).collect();
    let item_tags = universe
        .sets()
        .iter()
        .zip(&set_keys)
        .map(|(set, mu)| {
            set.items
                .iter()
                .map(|item| {
                    let e = inv(&f.add(mu, &grp.hash_to_scalar(item.as_bytes())));
                    grp.exp(&item_tag_base, &e)
                })
                .collect()
        })
        .collect();

    let elements = ParamElements {
        ca_public_key: grp.exp(&g, &x),
        range_tag_key: grp.exp(&range_base, &y),
        g,
        g0,
        g1,
        g2,
        g3,
        range_attr_bases,
        range_base,
        cred_rand_base,
        item_tag_base,
        user_key_base,
        seller_key_base,
        blinding_base,
        set_bases,
        digit_tags,
        power_bases,
        set_public_keys,
        item_tags,
    };
    let params = Params::new(grp, universe, elements)?;
    Ok((MasterSecret { x, y, set_keys }, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::{RangePolicy, SetPolicy};
    use eticket_groups::ExponentGroup;
    use num_bigint::BigUint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn universe() -> PolicyUniverse {
        PolicyUniverse::new(
            vec![RangePolicy::new("age", 12, 18), RangePolicy::new("trips", 0, 20)],
            vec![
                SetPolicy::new("profession", &["student", "senior"]),
                SetPolicy::new("zone", &["A", "B", "C"]),
                SetPolicy::new("disability", &["none", "wheelchair"]),
                SetPolicy::new("region", &["north", "south"]),
            ],
            2,
        )
        .unwrap()
    }

    #[test]
    fn setup_publishes_consistent_tags() {
        let grp = ExponentGroup::new(18_446_744_073_709_551_557).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let (msk, params) = setup(universe(), grp, &mut rng).unwrap();
        assert_eq!(params.range_attr_bases.len(), 2);
        assert_eq!(params.set_bases.len(), 4);
        assert_eq!(msk.set_keys.len(), 4);
        // q + k + sum of set sizes
        assert_eq!(params.tag_count(), 2 + 5 + 9);
        assert!(params.tags_consistent());
    }

    #[test]
    fn digit_tag_matches_exponent_oracle() {
        let grp = ExponentGroup::new(101).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let (msk, params) = setup(universe(), grp.clone(), &mut rng).unwrap();
        let p = BigUint::from(101u32);
        let y1 = (msk.y.value() + 1u32) % &p;
        let h1 = grp.dlog(&params.digit_tags[1]);
        assert_eq!((y1 * h1) % &p, grp.dlog(&params.range_base).clone());
        assert!(params.tags_consistent());
    }

    #[test]
    fn setup_without_sets() {
        let u = PolicyUniverse::new(vec![RangePolicy::new("age", 0, 4)], vec![], 2).unwrap();
        let grp = ExponentGroup::new(101).unwrap();
        let (msk, params) = setup(u, grp, &mut ChaCha20Rng::seed_from_u64(2)).unwrap();
        assert!(msk.set_keys.is_empty());
        assert!(params.item_tags.is_empty());
        assert!(params.set_public_keys.is_empty());
    }

    #[test]
    fn setup_rejects_wide_ranges_for_small_groups() {
        let u = PolicyUniverse::new(vec![RangePolicy::new("age", 0, 60)], vec![], 2).unwrap();
        let grp = ExponentGroup::new(101).unwrap();
        let err = setup(u, grp, &mut ChaCha20Rng::seed_from_u64(2)).unwrap_err();
        assert!(matches!(err, SetupError::Policy(PolicyError::RangeTooWide { .. })));
    }
}
