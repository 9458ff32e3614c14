//! Exact truncated bivariate formal power series.
//!
//! [`BiSeries`] is the value type for every generating function in this crate:
//! a series in `q` truncated at a fixed order (inclusive), whose coefficients
//! are polynomials in `t` with arbitrary-precision integer entries.
//!
//! Invariants:
//! - No stored coefficient is zero (sparse canonical form).
//! - All stored q-degrees are `<= q_order`.
//! - The truncation order is fixed at construction; combining series of
//!   different orders is a hard error, never a silent truncation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Polynomial in `t`: map from t-degree to nonzero integer coefficient.
pub type TPolynomial = BTreeMap<u32, BigInt>;

/// Errors from series arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    /// Two series of different truncation orders were combined or compared.
    OrderMismatch { left: u32, right: u32 },
    /// `geometric_inverse` needs constant q-coefficient exactly 1.
    NonUnitConstantTerm,
    /// Requested q-degree exceeds the truncation order.
    DegreeOutOfRange { degree: u32, q_order: u32 },
    /// Malformed serialized form.
    InvalidSerialization(String),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::OrderMismatch { left, right } => {
                write!(f, "truncation order mismatch: {left} vs {right}")
            }
            SeriesError::NonUnitConstantTerm => {
                write!(f, "series does not have constant term 1 at q-degree 0")
            }
            SeriesError::DegreeOutOfRange { degree, q_order } => {
                write!(f, "q-degree {degree} out of range (order {q_order})")
            }
            SeriesError::InvalidSerialization(msg) => {
                write!(f, "invalid serialized series: {msg}")
            }
        }
    }
}

impl std::error::Error for SeriesError {}

/// Truncated series `sum c_{n,d} t^d q^n` with `n <= q_order`.
///
/// Values are immutable after construction; all operations are pure and
/// return new series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    q_order: u32,
    coeffs: BTreeMap<(u32, u32), BigInt>,
}

impl BiSeries {
    /// The zero series at the given truncation order.
    pub fn zero(q_order: u32) -> Self {
        BiSeries {
            q_order,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant series 1.
    pub fn one(q_order: u32) -> Self {
        Self::monomial(q_order, 0, 0, BigInt::one())
    }

    /// `c * t^t_deg * q^q_deg`, dropped if beyond the truncation order.
    pub fn monomial(q_order: u32, q_deg: u32, t_deg: u32, c: BigInt) -> Self {
        let mut s = Self::zero(q_order);
        if !c.is_zero() && q_deg <= q_order {
            s.coeffs.insert((q_deg, t_deg), c);
        }
        s
    }

    /// Build from `(q, t, coefficient)` terms, summing duplicates and
    /// dropping zeros and terms beyond the order.
    pub fn from_terms<I>(q_order: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, BigInt)>,
    {
        let mut s = Self::zero(q_order);
        for (q, t, c) in terms {
            s.add_term(q, t, c);
        }
        s
    }

    fn add_term(&mut self, q: u32, t: u32, c: BigInt) {
        if c.is_zero() || q > self.q_order {
            return;
        }
        let entry = self.coeffs.entry((q, t)).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&(q, t));
        }
    }

    pub fn q_order(&self) -> u32 {
        self.q_order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.get(0, 0).is_one()
    }

    /// Coefficient of `t^t_deg q^q_deg` (zero when absent).
    pub fn get(&self, q_deg: u32, t_deg: u32) -> BigInt {
        self.coeffs
            .get(&(q_deg, t_deg))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Nonzero terms in `(q, t)` order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.coeffs.iter().map(|(&(q, t), c)| (q, t, c))
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Equality that refuses to compare series of different orders.
    pub fn try_eq(&self, other: &Self) -> Result<bool, SeriesError> {
        if self.q_order != other.q_order {
            return Err(SeriesError::OrderMismatch {
                left: self.q_order,
                right: other.q_order,
            });
        }
        Ok(self.coeffs == other.coeffs)
    }

    /// Coefficient-wise sum.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.q_order != other.q_order {
            return Err(SeriesError::OrderMismatch {
                left: self.q_order,
                right: other.q_order,
            });
        }
        let mut out = self.clone();
        for (&(q, t), c) in &other.coeffs {
            out.add_term(q, t, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        BiSeries {
            q_order: self.q_order,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    /// Convolution product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.q_order != other.q_order {
            return Err(SeriesError::OrderMismatch {
                left: self.q_order,
                right: other.q_order,
            });
        }
        let mut out = Self::zero(self.q_order);
        for (&(qa, ta), ca) in &self.coeffs {
            if qa > self.q_order {
                break;
            }
            let limit = self.q_order - qa;
            for (&(qb, tb), cb) in &other.coeffs {
                // keys are sorted by (q, t), so q is non-decreasing
                if qb > limit {
                    break;
                }
                out.add_term(qa + qb, ta + tb, ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse of a series with constant term exactly 1.
    ///
    /// Solved by the usual recursion on q-degree; the t-polynomial
    /// coefficients stay exact integers.
    pub fn geometric_inverse(&self) -> Result<Self, SeriesError> {
        let unit = self.get(0, 0).is_one() && !self.coeffs.keys().any(|&(q, t)| q == 0 && t != 0);
        if !unit {
            return Err(SeriesError::NonUnitConstantTerm);
        }
        let n = self.q_order as usize;
        // group coefficients of the input by q-degree
        let mut a: Vec<TPolynomial> = vec![TPolynomial::new(); n + 1];
        for (&(q, t), c) in &self.coeffs {
            a[q as usize].insert(t, c.clone());
        }
        let mut b: Vec<TPolynomial> = vec![TPolynomial::new(); n + 1];
        b[0].insert(0, BigInt::one());
        for m in 1..=n {
            let mut acc = TPolynomial::new();
            for k in 1..=m {
                if a[k].is_empty() || b[m - k].is_empty() {
                    continue;
                }
                for (&ta, ca) in &a[k] {
                    for (&tb, cb) in &b[m - k] {
                        let e = acc.entry(ta + tb).or_insert_with(BigInt::zero);
                        *e += ca * cb;
                    }
                }
            }
            acc.retain(|_, c| !c.is_zero());
            b[m] = acc.into_iter().map(|(t, c)| (t, -c)).collect();
        }
        let mut out = Self::zero(self.q_order);
        for (m, poly) in b.into_iter().enumerate() {
            for (t, c) in poly {
                out.add_term(m as u32, t, c);
            }
        }
        Ok(out)
    }

    /// Substitute an integer for `t`; every term lands at t-degree 0.
    pub fn specialize_t(&self, t_value: &BigInt) -> Self {
        let mut out = Self::zero(self.q_order);
        for (&(q, t), c) in &self.coeffs {
            out.add_term(q, 0, c * t_value.pow(t));
        }
        out
    }

    /// The full t-polynomial at q-degree `n`.
    pub fn coefficient(&self, n: u32) -> Result<TPolynomial, SeriesError> {
        if n > self.q_order {
            return Err(SeriesError::DegreeOutOfRange {
                degree: n,
                q_order: self.q_order,
            });
        }
        Ok(self
            .coeffs
            .range((n, 0)..=(n, u32::MAX))
            .map(|(&(_, t), c)| (t, c.clone()))
            .collect())
    }
}

/// Expansion of `(1 - sign * t^t_deg * q^q_deg)^exponent` truncated at
/// `q_order`, for any integer exponent. `sign` must be `1` or `-1` and
/// `q_deg >= 1`.
pub fn binomial_factor(sign: i64, t_deg: u32, q_deg: u32, exponent: i64, q_order: u32) -> BiSeries {
    assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
    assert!(q_deg >= 1, "q_deg must be at least 1");
    // expand the positive power (1 - sign u)^|exponent|, a polynomial in u
    let e = exponent.unsigned_abs();
    let k_max = u64::from(q_order / q_deg).min(e);
    let mut pos = BiSeries::zero(q_order);
    for k in 0..=k_max {
        let mut c = binomial(BigInt::from(e), BigInt::from(k));
        // times (-sign)^k
        if k % 2 == 1 && sign == 1 {
            c = -c;
        }
        let k = k as u32;
        pos.add_term(k * q_deg, k * t_deg, c);
    }
    if exponent >= 0 {
        pos
    } else {
        pos.geometric_inverse()
            .expect("positive power of a unit series is a unit")
    }
}

impl fmt::Display for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 + O(q^{})", self.q_order + 1);
        }
        let mut by_q: BTreeMap<u32, Vec<(u32, &BigInt)>> = BTreeMap::new();
        for (&(q, t), c) in &self.coeffs {
            by_q.entry(q).or_default().push((t, c));
        }
        let mut first = true;
        for (q, terms) in by_q {
            let poly = terms
                .iter()
                .map(|(t, c)| match t {
                    0 => format!("{c}"),
                    1 => {
                        if c.is_one() {
                            "t".to_string()
                        } else {
                            format!("{c}*t")
                        }
                    }
                    _ => {
                        if c.is_one() {
                            format!("t^{t}")
                        } else {
                            format!("{c}*t^{t}")
                        }
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ");
            let wrapped = if terms.len() > 1 {
                format!("({poly})")
            } else {
                poly
            };
            let piece = match q {
                0 => wrapped,
                1 => format!("{wrapped}*q"),
                _ => format!("{wrapped}*q^{q}"),
            };
            if first {
                write!(f, "{piece}")?;
                first = false;
            } else {
                write!(f, " + {piece}")?;
            }
        }
        write!(f, " + O(q^{})", self.q_order + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    q: u32,
    t: u32,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    q_order: u32,
    terms: Vec<TermRepr>,
}

impl Serialize for BiSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = SeriesRepr {
            q_order: self.q_order,
            terms: self
                .terms()
                .map(|(q, t, c)| TermRepr {
                    q,
                    t,
                    c: c.to_string(),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BiSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = SeriesRepr::deserialize(deserializer)?;
        let mut out = BiSeries::zero(repr.q_order);
        for term in repr.terms {
            if term.q > repr.q_order {
                return Err(D::Error::custom(format!(
                    "term at q-degree {} exceeds order {}",
                    term.q, repr.q_order
                )));
            }
            let c: BigInt = term
                .c
                .parse()
                .map_err(|e| D::Error::custom(format!("bad coefficient {:?}: {e}", term.c)))?;
            if c.is_zero() {
                return Err(D::Error::custom("explicit zero coefficient"));
            }
            if out.coeffs.insert((term.q, term.t), c).is_some() {
                return Err(D::Error::custom(format!(
                    "duplicate term at (q, t) = ({}, {})",
                    term.q, term.t
                )));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(q_order: u32, terms: &[(u32, u32, i64)]) -> BiSeries {
        BiSeries::from_terms(
            q_order,
            terms.iter().map(|&(q, t, c)| (q, t, BigInt::from(c))),
        )
    }

    #[test]
    fn add_identity_and_inverse() {
        let one = BiSeries::one(4);
        let zero = BiSeries::zero(4);
        assert_eq!(one.add(&zero).unwrap(), one);

        let q = s(4, &[(1, 0, 1)]);
        let sum = q.add(&q.neg()).unwrap();
        assert!(sum.is_zero());
        assert_eq!(sum.term_count(), 0);
    }

    #[test]
    fn add_merges_support() {
        // (1 + q t^2) + 2q = 1 + q(2 + t^2)
        let a = s(3, &[(0, 0, 1), (1, 2, 1)]);
        let b = s(3, &[(1, 0, 2)]);
        let expect = s(3, &[(0, 0, 1), (1, 0, 2), (1, 2, 1)]);
        assert_eq!(a.add(&b).unwrap(), expect);
    }

    #[test]
    fn mul_truncates() {
        let a = s(5, &[(0, 0, 1), (1, 0, 1)]);
        let b = s(5, &[(0, 0, 1), (1, 0, -1)]);
        assert_eq!(a.mul(&b).unwrap(), s(5, &[(0, 0, 1), (2, 0, -1)]));
    }

    #[test]
    fn mul_identity() {
        let f = s(6, &[(0, 0, 3), (2, 1, -4), (5, 7, 11)]);
        assert_eq!(f.mul(&BiSeries::one(6)).unwrap(), f);
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = BiSeries::one(3);
        let b = BiSeries::one(4);
        assert!(matches!(
            a.add(&b),
            Err(SeriesError::OrderMismatch { left: 3, right: 4 })
        ));
        assert!(a.mul(&b).is_err());
        assert!(a.try_eq(&b).is_err());
    }

    #[test]
    fn geometric_series() {
        let f = s(4, &[(0, 0, 1), (1, 0, -1)]);
        let inv = f.geometric_inverse().unwrap();
        assert_eq!(
            inv,
            s(4, &[(0, 0, 1), (1, 0, 1), (2, 0, 1), (3, 0, 1), (4, 0, 1)])
        );
        assert!(f.mul(&inv).unwrap().is_one());
    }

    #[test]
    fn inverse_of_one() {
        assert!(BiSeries::one(5).geometric_inverse().unwrap().is_one());
    }

    #[test]
    fn inverse_geometric_in_t2_q() {
        // 1/(1 - t^2 q) = 1 + t^2 q + t^4 q^2 + t^6 q^3
        let f = s(3, &[(0, 0, 1), (1, 2, -1)]);
        let inv = f.geometric_inverse().unwrap();
        assert_eq!(inv, s(3, &[(0, 0, 1), (1, 2, 1), (2, 4, 1), (3, 6, 1)]));
    }

    #[test]
    fn inverse_requires_unit_constant() {
        let f = s(3, &[(0, 0, 2)]);
        assert!(matches!(
            f.geometric_inverse(),
            Err(SeriesError::NonUnitConstantTerm)
        ));
        // constant term 1 but extra t-term at q-degree 0
        let g = s(3, &[(0, 0, 1), (0, 2, 1)]);
        assert!(g.geometric_inverse().is_err());
    }

    #[test]
    fn binomial_factor_cases() {
        // (1 - q)^{-1} at order 3
        assert_eq!(
            binomial_factor(1, 0, 1, -1, 3),
            s(3, &[(0, 0, 1), (1, 0, 1), (2, 0, 1), (3, 0, 1)])
        );
        // (1 + t q)^{+1}
        assert_eq!(
            binomial_factor(-1, 1, 1, 1, 5),
            s(5, &[(0, 0, 1), (1, 1, 1)])
        );
        // (1 - q)^2 at order 3
        assert_eq!(
            binomial_factor(1, 0, 1, 2, 3),
            s(3, &[(0, 0, 1), (1, 0, -2), (2, 0, 1)])
        );
        // exponent zero
        assert!(binomial_factor(-1, 2, 1, 0, 4).is_one());
    }

    #[test]
    fn specialize_examples() {
        let f = s(2, &[(0, 0, 1), (1, 2, 1)]);
        assert_eq!(
            f.specialize_t(&BigInt::from(-1)),
            s(2, &[(0, 0, 1), (1, 0, 1)])
        );
        let g = s(2, &[(0, 0, 1), (1, 1, 1)]);
        assert_eq!(
            g.specialize_t(&BigInt::from(-1)),
            s(2, &[(0, 0, 1), (1, 0, -1)])
        );
        // t = 1 sums the t-coefficients per q-degree
        let h = s(2, &[(1, 0, 2), (1, 3, 5), (2, 1, -1)]);
        assert_eq!(
            h.specialize_t(&BigInt::from(1)),
            s(2, &[(1, 0, 7), (2, 0, -1)])
        );
    }

    #[test]
    fn coefficient_extraction() {
        let f = s(2, &[(0, 0, 1), (1, 0, 1), (1, 2, 1)]);
        let c1 = f.coefficient(1).unwrap();
        assert_eq!(c1.get(&0), Some(&BigInt::from(1)));
        assert_eq!(c1.get(&2), Some(&BigInt::from(1)));
        assert_eq!(c1.len(), 2);
        assert!(BiSeries::zero(4).coefficient(2).unwrap().is_empty());
        assert!(matches!(
            f.coefficient(3),
            Err(SeriesError::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let f = s(5, &[(0, 0, 1), (2, 3, -12), (5, 20, 7)]);
        let json = serde_json::to_string(&f).unwrap();
        let back: BiSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(f, back);
        // terms are sorted by (q, t) and carry decimal-string coefficients
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["terms"][1]["c"], "-12");
    }

    #[test]
    fn json_rejects_bad_terms() {
        let bad = r#"{"q_order":2,"terms":[{"q":3,"t":0,"c":"1"}]}"#;
        assert!(serde_json::from_str::<BiSeries>(bad).is_err());
        let zero = r#"{"q_order":2,"terms":[{"q":1,"t":0,"c":"0"}]}"#;
        assert!(serde_json::from_str::<BiSeries>(zero).is_err());
        let dup = r#"{"q_order":2,"terms":[{"q":1,"t":0,"c":"1"},{"q":1,"t":0,"c":"2"}]}"#;
        assert!(serde_json::from_str::<BiSeries>(dup).is_err());
    }

    fn arb_series(order: u32) -> impl Strategy<Value = BiSeries> {
        proptest::collection::vec((0..=order, 0u32..6, -9i64..=9), 0..8).prop_map(move |terms| {
            BiSeries::from_terms(
                order,
                terms.into_iter().map(|(q, t, c)| (q, t, BigInt::from(c))),
            )
        })
    }

    fn arb_unit_series(order: u32) -> impl Strategy<Value = BiSeries> {
        proptest::collection::vec((1..=order, 0u32..5, -5i64..=5), 0..6).prop_map(move |terms| {
            let mut s = BiSeries::one(order);
            for (q, t, c) in terms {
                s = s
                    .add(&BiSeries::monomial(order, q, t, BigInt::from(c)))
                    .unwrap();
            }
            s
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(5), b in arb_series(5), c in arb_series(5)) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.add(&b).unwrap().add(&c).unwrap(),
                a.add(&b.add(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn inverse_round_trip(a in arb_unit_series(6)) {
            let inv = a.geometric_inverse().unwrap();
            prop_assert!(a.mul(&inv).unwrap().is_one());
        }

        #[test]
        fn binomial_opposite_exponents(
            sign in prop_oneof![Just(1i64), Just(-1i64)],
            t_deg in 0u32..4,
            q_deg in 1u32..4,
            e in 1i64..5,
        ) {
            let pos = binomial_factor(sign, t_deg, q_deg, e, 8);
            let neg = binomial_factor(sign, t_deg, q_deg, -e, 8);
            prop_assert!(pos.mul(&neg).unwrap().is_one());
        }

        #[test]
        fn specialize_commutes(a in arb_series(5), b in arb_series(5), v in -3i64..=3) {
            let v = BigInt::from(v);
            prop_assert_eq!(
                a.mul(&b).unwrap().specialize_t(&v),
                a.specialize_t(&v).mul(&b.specialize_t(&v)).unwrap()
            );
            prop_assert_eq!(
                a.add(&b).unwrap().specialize_t(&v),
                a.specialize_t(&v).add(&b.specialize_t(&v)).unwrap()
            );
        }
    }
}
