//! Ticket policies: integer ranges and named item sets, and the base-`q`
//! digit decompositions used by range proofs.
//!
//! A policy file is TOML:
//!
//! ```toml
//! base = 2            # optional, digit base q (default 2)
//!
//! [[range]]
//! name = "age"
//! lower = 12          # inclusive
//! upper = 18          # exclusive
//!
//! [[set]]
//! name = "profession"
//! items = ["student", "senior"]
//! ```
//!
//! Range and set names share one namespace and must be unique.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Separator between policy names when a requested set is hashed.
pub const NAME_SEPARATOR: u8 = 0x1f;

/// Largest supported `q^k`; keeps every shifted value inside `i64`.
const MAX_SPAN: u128 = 1 << 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolicyError {
    #[error("range `{name}` is empty: [{lower}, {upper})")]
    EmptyRange { name: String, lower: i64, upper: i64 },
    #[error("set `{0}` has no items")]
    EmptySet(String),
    #[error("set `{set}` lists `{item}` more than once")]
    DuplicateItem { set: String, item: String },
    #[error("policy name `{0}` is used more than once")]
    DuplicateName(String),
    #[error("invalid policy name `{0:?}`")]
    InvalidName(String),
    #[error("digit base must be at least 2, got {0}")]
    InvalidBase(u64),
    #[error("range too wide: group order must exceed 2*q^k + 1 = {bound}")]
    RangeTooWide { bound: BigUint },
    #[error("value {value} outside [0, {limit})")]
    OutOfRange { value: i128, limit: u128 },
    #[error("unknown policy `{0}`")]
    UnknownPolicy(String),
    #[error("attribute for `{policy}`: {reason}")]
    BadAttribute { policy: String, reason: String },
    #[error("reading policy file: {0}")]
    Io(String),
    #[error("parsing policy file: {0}")]
    Syntax(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangePolicy {
    pub name: String,
    pub lower: i64,
    pub upper: i64,
}

impl RangePolicy {
    pub fn new(name: impl Into<String>, lower: i64, upper: i64) -> Self {
        Self {
            name: name.into(),
            lower,
            upper,
        }
    }

    pub fn width(&self) -> u128 {
        (i128::from(self.upper) - i128::from(self.lower)).max(0) as u128
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lower <= v && v < self.upper
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetPolicy {
    pub name: String,
    pub items: Vec<String>,
}

impl SetPolicy {
    pub fn new(name: impl Into<String>, items: &[&str]) -> Self {
        Self {
            name: name.into(),
            items: items.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn position(&self, item: &str) -> Option<usize> {
        self.items.iter().position(|i| i == item)
    }
}

/// On-disk layout of a policy file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyFile {
    #[serde(default)]
    pub base: Option<u64>,
    #[serde(default)]
    pub range: Vec<RangePolicy>,
    #[serde(default)]
    pub set: Vec<SetPolicy>,
}

impl PolicyFile {
    pub fn parse(text: &str) -> Result<Self, PolicyError> {
        toml::from_str(text).map_err(|e| PolicyError::Syntax(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, PolicyError> {
        let text = std::fs::read_to_string(path).map_err(|e| PolicyError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn into_universe(self) -> Result<PolicyUniverse, PolicyError> {
        PolicyUniverse::new(self.range, self.set, self.base.unwrap_or(2))
    }
}

/// All published policies plus the digit base `q` and width `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolicyUniverse {
    ranges: Vec<RangePolicy>,
    sets: Vec<SetPolicy>,
    base: u64,
    width: u32,
}

impl PolicyUniverse {
    pub fn new(ranges: Vec<RangePolicy>, sets: Vec<SetPolicy>, base: u64) -> Result<Self, PolicyError> {
        let mut names = BTreeSet::new();
        for name in ranges.iter().map(|r| &r.name).chain(sets.iter().map(|s| &s.name)) {
            if name.is_empty() || name.bytes().any(|b| b == NAME_SEPARATOR) {
                return Err(PolicyError::InvalidName(name.clone()));
            }
            if !names.insert(name.clone()) {
                return Err(PolicyError::DuplicateName(name.clone()));
            }
        }
        for r in &ranges {
            if r.lower >= r.upper {
                return Err(PolicyError::EmptyRange {
                    name: r.name.clone(),
                    lower: r.lower,
                    upper: r.upper,
                });
            }
        }
        for s in &sets {
            if s.items.is_empty() {
                return Err(PolicyError::EmptySet(s.name.clone()));
            }
            let mut seen = BTreeSet::new();
            for item in &s.items {
                if !seen.insert(item) {
                    return Err(PolicyError::DuplicateItem {
                        set: s.name.clone(),
                        item: item.clone(),
                    });
                }
            }
        }
        let (base, width) = minimal_width(&ranges, base)?;
        Ok(Self {
            ranges,
            sets,
            base,
            width,
        })
    }

    /// Rebuilds a universe with an explicit width, as read back from
    /// published parameters.
    pub fn with_width(
        ranges: Vec<RangePolicy>,
        sets: Vec<SetPolicy>,
        base: u64,
        width: u32,
    ) -> Result<Self, PolicyError> {
        let mut u = Self::new(ranges, sets, base)?;
        if width < u.width || span(base, width).is_none() {
            return Err(PolicyError::OutOfRange {
                value: i128::from(width),
                limit: u128::from(u.width),
            });
        }
        u.width = width;
        Ok(u)
    }

    pub fn ranges(&self) -> &[RangePolicy] {
        &self.ranges
    }

    pub fn sets(&self) -> &[SetPolicy] {
        &self.sets
    }

    /// Digit base `q`.
    pub fn base(&self) -> u64 {
        self.base
    }

    /// Number of digits `k`.
    pub fn width(&self) -> u32 {
        self.width
    }

    /// `q^k`.
    pub fn span(&self) -> u128 {
        span(self.base, self.width).expect("validated at construction")
    }

    pub fn range_index(&self, name: &str) -> Option<usize> {
        self.ranges.iter().position(|r| r.name == name)
    }

    pub fn set_index(&self, name: &str) -> Option<usize> {
        self.sets.iter().position(|s| s.name == name)
    }

    /// Fails with `RangeTooWide` unless `order > 2 q^k + 1`.
    pub fn check_order(&self, order: &BigUint) -> Result<(), PolicyError> {
        let bound = BigUint::from(self.span()) * 2u32 + 1u32;
        if *order <= bound {
            return Err(PolicyError::RangeTooWide { bound });
        }
        Ok(())
    }

    /// Checks that every attribute names an existing policy and every set
    /// item is listed by its set.
    pub fn check_attributes(&self, attrs: &UserAttributes) -> Result<(), PolicyError> {
        for name in attrs.range_values.keys() {
            if self.range_index(name).is_none() {
                return Err(PolicyError::UnknownPolicy(name.clone()));
            }
        }
        for (name, item) in &attrs.set_items {
            let idx = self
                .set_index(name)
                .ok_or_else(|| PolicyError::UnknownPolicy(name.clone()))?;
            if self.sets[idx].position(item).is_none() {
                return Err(PolicyError::BadAttribute {
                    policy: name.clone(),
                    reason: format!("`{item}` is not a listed item"),
                });
            }
        }
        Ok(())
    }

    /// Checks that each requested name exists.
    pub fn check_requested(&self, requested: &SatisfiedPolicies) -> Result<(), PolicyError> {
        for name in requested.names() {
            if self.range_index(name).is_none() && self.set_index(name).is_none() {
                return Err(PolicyError::UnknownPolicy(name.clone()));
            }
        }
        Ok(())
    }

    /// Universe indices of the requested ranges and sets, each in universe
    /// order.
    pub fn requested_indices(&self, requested: &SatisfiedPolicies) -> (Vec<usize>, Vec<usize>) {
        let ranges = (0..self.ranges.len())
            .filter(|&l| requested.contains(&self.ranges[l].name))
            .collect();
        let sets = (0..self.sets.len())
            .filter(|&i| requested.contains(&self.sets[i].name))
            .collect();
        (ranges, sets)
    }
}

fn span(base: u64, width: u32) -> Option<u128> {
    let v = u128::from(base).checked_pow(width)?;
    (v <= MAX_SPAN).then_some(v)
}

fn minimal_width(ranges: &[RangePolicy], base: u64) -> Result<(u64, u32), PolicyError> {
    if base < 2 {
        return Err(PolicyError::InvalidBase(base));
    }
    let longest = ranges.iter().map(RangePolicy::width).max().unwrap_or(0);
    let mut k = 1u32;
    loop {
        let s = span(base, k).ok_or(PolicyError::OutOfRange {
            value: longest as i128,
            limit: MAX_SPAN,
        })?;
        if s >= longest {
            return Ok((base, k));
        }
        k += 1;
    }
}

/// Smallest `k` with `q^k` at least the longest interval, checked against
/// the group order. Without ranges the result is `(q, 1)`.
pub fn choose_base_params(ranges: &[RangePolicy], base: u64, order: &BigUint) -> Result<(u64, u32), PolicyError> {
    let (q, k) = minimal_width(ranges, base)?;
    let bound = BigUint::from(q).pow(k) * 2u32 + 1u32;
    if *order <= bound {
        return Err(PolicyError::RangeTooWide { bound });
    }
    Ok((q, k))
}

/// Little-endian base-`q` digits of `v`, exactly `k` of them.
pub fn digit_decompose(v: i128, base: u64, width: u32) -> Result<Vec<u64>, PolicyError> {
    let limit = span(base, width).ok_or(PolicyError::OutOfRange {
        value: v,
        limit: MAX_SPAN,
    })?;
    if v < 0 || v as u128 >= limit {
        return Err(PolicyError::OutOfRange { value: v, limit });
    }
    let mut rest = v as u128;
    let q = u128::from(base);
    Ok((0..width)
        .map(|_| {
            let d = rest % q;
            rest /= q;
            d as u64
        })
        .collect())
}

pub fn recompose(digits: &[u64], base: u64) -> u128 {
    digits
        .iter()
        .rev()
        .fold(0u128, |acc, &d| acc * u128::from(base) + u128::from(d))
}

/// Attributes certified for a user: integer values for range policies and
/// one chosen item per set policy.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserAttributes {
    #[serde(default)]
    pub range_values: BTreeMap<String, i64>,
    #[serde(default)]
    pub set_items: BTreeMap<String, String>,
}

impl UserAttributes {
    pub fn with_value(mut self, policy: &str, v: i64) -> Self {
        self.range_values.insert(policy.to_string(), v);
        self
    }

    pub fn with_item(mut self, policy: &str, item: &str) -> Self {
        self.set_items.insert(policy.to_string(), item.to_string());
        self
    }
}

/// Names of the policies a user proves, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SatisfiedPolicies(BTreeSet<String>);

impl SatisfiedPolicies {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self(names.into_iter().map(Into::into).collect())
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.0.iter()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sorted names joined by [`NAME_SEPARATOR`].
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for (i, name) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(NAME_SEPARATOR);
            }
            out.extend_from_slice(name.as_bytes());
        }
        out
    }
}

/// Digits witnessing `a` in `[lower, upper)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeWitness {
    pub index: usize,
    pub value: i64,
    /// Digits of `a - lower`.
    pub low_digits: Vec<u64>,
    /// Digits of `a - upper + q^k`.
    pub high_digits: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetWitness {
    pub index: usize,
    pub item: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolicyWitness {
    pub ranges: Vec<RangeWitness>,
    pub sets: Vec<SetWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("policy `{policy}` not satisfied: {reason}")]
pub struct Unsatisfied {
    pub policy: String,
    pub reason: String,
}

/// Checks the requested policies against the attributes, returning digit
/// witnesses in universe order, or the first failing policy.
pub fn satisfies(
    attrs: &UserAttributes,
    universe: &PolicyUniverse,
    requested: &SatisfiedPolicies,
) -> Result<PolicyWitness, Unsatisfied> {
    let fail = |policy: &str, reason: &str| Unsatisfied {
        policy: policy.to_string(),
        reason: reason.to_string(),
    };
    for name in requested.names() {
        if universe.range_index(name).is_none() && universe.set_index(name).is_none() {
            return Err(fail(name, "unknown policy"));
        }
    }
    let (range_idx, set_idx) = universe.requested_indices(requested);
    let (q, k, span) = (universe.base(), universe.width(), universe.span() as i128);
    let mut witness = PolicyWitness::default();
    for l in range_idx {
        let policy = &universe.ranges()[l];
        let a = *attrs
            .range_values
            .get(&policy.name)
            .ok_or_else(|| fail(&policy.name, "no attribute value"))?;
        if !policy.contains(a) {
            return Err(fail(&policy.name, "value outside the range"));
        }
        let low = i128::from(a) - i128::from(policy.lower);
        let high = i128::from(a) - i128::from(policy.upper) + span;
        let low_digits = digit_decompose(low, q, k).map_err(|e| fail(&policy.name, &e.to_string()))?;
        let high_digits = digit_decompose(high, q, k).map_err(|e| fail(&policy.name, &e.to_string()))?;
        witness.ranges.push(RangeWitness {
            index: l,
            value: a,
            low_digits,
            high_digits,
        });
    }
    for i in set_idx {
        let policy = &universe.sets()[i];
        let item = attrs
            .set_items
            .get(&policy.name)
            .ok_or_else(|| fail(&policy.name, "no item chosen"))?;
        if policy.position(item).is_none() {
            return Err(fail(&policy.name, "item not in the set"));
        }
        witness.sets.push(SetWitness {
            index: i,
            item: item.clone(),
        });
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn base_params_pick_smallest_power() {
        let p = big(18_446_744_073_709_551_557);
        assert_eq!(
            choose_base_params(&[RangePolicy::new("a", 12, 18)], 2, &p).unwrap(),
            (2, 3)
        );
        assert_eq!(
            choose_base_params(&[RangePolicy::new("a", 0, 8)], 2, &p).unwrap(),
            (2, 3)
        );
        assert_eq!(choose_base_params(&[], 2, &p).unwrap(), (2, 1));
        // brute-force oracle over widths
        for w in 1..300i64 {
            let (_, k) = choose_base_params(&[RangePolicy::new("a", 0, w)], 3, &p).unwrap();
            let minimal = (1..).find(|&k| 3i64.pow(k) >= w).unwrap();
            assert_eq!(k, minimal, "width {w}");
        }
    }

    #[test]
    fn base_params_respect_group_order() {
        // 2 * 2^6 + 1 = 129 > 101
        let err = choose_base_params(&[RangePolicy::new("a", 0, 64)], 2, &big(101)).unwrap_err();
        assert!(matches!(err, PolicyError::RangeTooWide { .. }));
        assert!(choose_base_params(&[RangePolicy::new("a", 0, 32)], 2, &big(101)).is_ok());
    }

    #[test]
    fn digits_examples() {
        assert_eq!(digit_decompose(5, 2, 3).unwrap(), vec![1, 0, 1]);
        assert_eq!(digit_decompose(0, 2, 3).unwrap(), vec![0, 0, 0]);
        assert!(matches!(digit_decompose(8, 2, 3), Err(PolicyError::OutOfRange { .. })));
        assert!(matches!(digit_decompose(-1, 2, 3), Err(PolicyError::OutOfRange { .. })));
    }

    #[test]
    fn recompose_inverts_decompose_exhaustively() {
        for k in 1..=10u32 {
            for v in 0..(1i128 << k) {
                let d = digit_decompose(v, 2, k).unwrap();
                assert_eq!(d.len(), k as usize);
                assert!(d.iter().all(|&x| x < 2));
                assert_eq!(recompose(&d, 2) as i128, v);
            }
        }
    }

    #[test]
    fn double_shift_characterises_membership() {
        for q in 2..=4u64 {
            for k in 1..=3u32 {
                let s = (q as i64).pow(k);
                for c in -3..3i64 {
                    for d in (c + 1)..=(c + s) {
                        for a in (c - s)..=(d + s) {
                            let both = (0..s).contains(&(a - c)) && (0..s).contains(&(a - d + s));
                            assert_eq!(both, (c..d).contains(&a), "q={q} k={k} [{c},{d}) a={a}");
                        }
                    }
                }
            }
        }
    }

    fn universe() -> PolicyUniverse {
        PolicyUniverse::new(
            vec![RangePolicy::new("age", 12, 18)],
            vec![SetPolicy::new("profession", &["student", "senior"])],
            2,
        )
        .unwrap()
    }

    #[test]
    fn satisfies_returns_both_digit_vectors() {
        let u = universe();
        let attrs = UserAttributes::default()
            .with_value("age", 16)
            .with_item("profession", "student");
        let w = satisfies(&attrs, &u, &SatisfiedPolicies::new(["age", "profession"])).unwrap();
        assert_eq!(w.ranges[0].low_digits, vec![0, 0, 1]);
        assert_eq!(w.ranges[0].high_digits, vec![0, 1, 1]);
        assert_eq!(w.sets[0].item, "student");
    }

    #[test]
    fn satisfies_rejects_upper_bound_and_foreign_items() {
        let u = universe();
        let attrs = UserAttributes::default()
            .with_value("age", 18)
            .with_item("profession", "pilot");
        let err = satisfies(&attrs, &u, &SatisfiedPolicies::new(["age"])).unwrap_err();
        assert_eq!(err.policy, "age");
        let err = satisfies(&attrs, &u, &SatisfiedPolicies::new(["profession"])).unwrap_err();
        assert_eq!(err.policy, "profession");
        assert!(satisfies(&attrs, &u, &SatisfiedPolicies::default()).is_ok());
    }

    #[test]
    fn universe_validation() {
        assert!(matches!(
            PolicyUniverse::new(vec![RangePolicy::new("a", 3, 3)], vec![], 2),
            Err(PolicyError::EmptyRange { .. })
        ));
        assert!(matches!(
            PolicyUniverse::new(vec![RangePolicy::new("a", 0, 3)], vec![SetPolicy::new("a", &["x"])], 2),
            Err(PolicyError::DuplicateName(_))
        ));
        assert!(matches!(
            PolicyUniverse::new(vec![], vec![SetPolicy::new("s", &["x", "x"])], 2),
            Err(PolicyError::DuplicateItem { .. })
        ));
        assert!(matches!(
            PolicyUniverse::new(vec![], vec![SetPolicy::new("s", &[])], 2),
            Err(PolicyError::EmptySet(_))
        ));
        assert!(matches!(
            PolicyUniverse::new(vec![], vec![], 1),
            Err(PolicyError::InvalidBase(1))
        ));
        let empty = PolicyUniverse::new(vec![], vec![], 2).unwrap();
        assert_eq!((empty.base(), empty.width()), (2, 1));
    }

    #[test]
    fn policy_file_parses() {
        let text = r#"
            base = 3
            [[range]]
            name = "age"
            lower = 12
            upper = 18
            [[set]]
            name = "zone"
            items = ["A", "B"]
        "#;
        let u = PolicyFile::parse(text).unwrap().into_universe().unwrap();
        assert_eq!(u.base(), 3);
        assert_eq!(u.width(), 2);
        assert_eq!(u.sets()[0].items, vec!["A", "B"]);
        assert!(PolicyFile::parse("[[range]]\nname = 1").is_err());
    }

    #[test]
    fn canonical_names_are_sorted() {
        let s = SatisfiedPolicies::new(["zone", "age"]);
        assert_eq!(s.canonical_bytes(), b"age\x1fzone".to_vec());
    }
}
