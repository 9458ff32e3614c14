//! Generating functions for Hilbert schemes of points on a surface.
//!
//! Everything here is parameterized by the Betti vector of the surface. The
//! main series is the infinite product
//!
//! ```text
//! prod_{m>=1} prod_{i=0}^{4} (1 - (-t)^{2m-2+i} q^m)^{(-1)^{i+1} b_i}
//! ```
//!
//! truncated at a chosen q-order. Its q^n coefficient is the Poincaré
//! polynomial of the n-point Hilbert scheme; at t = -1 it collapses to
//! `prod (1-q^m)^{-e}` with `e` the Euler number of the surface. The module
//! also carries an independent brute-force evaluation of the orbifold Euler
//! number of the n-th symmetric product (commuting pairs in S_n), which the
//! q^n Euler coefficients must reproduce.

use std::fmt;

use num_bigint::BigInt;

use crate::series::{binomial_factor, BiSeries, TPolynomial};

/// Betti vector (b_0, ..., b_4) of a closed 4-manifold / projective surface.
///
/// Arbitrary nonnegative vectors are accepted so property tests can roam;
/// [`SurfaceTopology::satisfies_poincare_duality`] reports whether the vector
/// looks like an actual surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurfaceTopology {
    betti: [u32; 5],
}

impl SurfaceTopology {
    pub fn new(betti: [u32; 5]) -> Self {
        SurfaceTopology { betti }
    }

    pub fn betti(&self) -> [u32; 5] {
        self.betti
    }

    /// Alternating sum b_0 - b_1 + b_2 - b_3 + b_4.
    pub fn euler(&self) -> i64 {
        let b = self.betti;
        i64::from(b[0]) - i64::from(b[1]) + i64::from(b[2]) - i64::from(b[3]) + i64::from(b[4])
    }

    /// b_0 = b_4 and b_1 = b_3.
    pub fn satisfies_poincare_duality(&self) -> bool {
        self.betti[0] == self.betti[4] && self.betti[1] == self.betti[3]
    }
}

impl fmt::Display for SurfaceTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.betti;
        write!(f, "({},{},{},{},{})", b[0], b[1], b[2], b[3], b[4])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoettscheError {
    /// Brute-force orbifold sum is guarded to 1 <= n <= 7.
    OrbifoldRangeExceeded { n: u32 },
}

impl fmt::Display for GoettscheError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoettscheError::OrbifoldRangeExceeded { n } => {
                write!(f, "orbifold brute force limited to 1 <= n <= 7, got {n}")
            }
        }
    }
}

impl std::error::Error for GoettscheError {}

/// The truncated product series for the given Betti vector.
///
/// The sign of `(-t)^{2m-2+i}` is `(-1)^i`, so each factor is
/// `binomial_factor(sign = (-1)^i, t_deg = 2m-2+i, q_deg = m, exp = (-1)^{i+1} b_i)`.
/// Factors with `m > q_order` contribute 1 and are omitted.
pub fn goettsche_series(topo: &SurfaceTopology, q_order: u32) -> BiSeries {
    let mut acc = BiSeries::one(q_order);
    for m in 1..=q_order {
        for i in 0..5u32 {
            let b = topo.betti[i as usize];
            if b == 0 {
                continue;
            }
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let exponent = if i % 2 == 0 {
                -i64::from(b)
            } else {
                i64::from(b)
            };
            let factor = binomial_factor(sign, 2 * m - 2 + i, m, exponent, q_order);
            acc = acc.mul(&factor).expect("factors share the order");
        }
    }
    acc
}

/// Euler-number specialization t = -1 of [`goettsche_series`].
pub fn euler_series(topo: &SurfaceTopology, q_order: u32) -> BiSeries {
    goettsche_series(topo, q_order).specialize_t(&BigInt::from(-1))
}

/// `prod_{m>=1} (1 - q^m)^{-e}` built directly, bypassing the bivariate
/// product; cross-checked against [`euler_series`] in tests.
pub fn euler_series_direct(euler_number: i64, q_order: u32) -> BiSeries {
    let mut acc = BiSeries::one(q_order);
    for m in 1..=q_order {
        let factor = binomial_factor(1, 0, m, -euler_number, q_order);
        acc = acc.mul(&factor).expect("factors share the order");
    }
    acc
}

/// Poincaré polynomial of the n-point Hilbert scheme: the q^n coefficient of
/// the product series. `q_order_hint` can request a larger truncation (the
/// coefficient is the same either way).
pub fn poincare_polynomial(
    topo: &SurfaceTopology,
    n: u32,
    q_order_hint: Option<u32>,
) -> TPolynomial {
    let order = q_order_hint.unwrap_or(n).max(n);
    goettsche_series(topo, order)
        .coefficient(n)
        .expect("n <= order by construction")
}

/// Orbifold Euler number of the n-th symmetric product of a space with Euler
/// number `e_x`, by the commuting-pair sum
///
/// ```text
/// (1/n!) sum_{gh = hg in S_n x S_n} e_x^{#orbits of <g,h>}
/// ```
///
/// The division by n! is exact. Guarded to `1 <= n <= 7` ((n!)^2 pairs).
pub fn orbifold_euler_bruteforce(n: u32, e_x: i64) -> Result<BigInt, GoettscheError> {
    if n == 0 || n > 7 {
        return Err(GoettscheError::OrbifoldRangeExceeded { n });
    }
    let n = n as usize;
    let perms = all_permutations(n);
    let e_x = BigInt::from(e_x);
    // e_x^j for j = 0..=n
    let powers: Vec<BigInt> = (0..=n as u32).map(|j| e_x.pow(j)).collect();

    let mut total = BigInt::from(0);
    let mut gh = vec![0u8; n];
    let mut hg = vec![0u8; n];
    for g in &perms {
        for h in &perms {
            compose_into(g, h, &mut gh);
            compose_into(h, g, &mut hg);
            if gh != hg {
                continue;
            }
            total += &powers[joint_orbit_count(g, h)];
        }
    }
    let factorial: BigInt = (1..=n as u64).product::<u64>().into();
    let (quot, rem) = num_integer::Integer::div_rem(&total, &factorial);
    assert!(rem == BigInt::from(0), "commuting-pair sum divides by n!");
    Ok(quot)
}

fn all_permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::with_capacity((1..=n).product());
    let mut avail: Vec<u8> = (0..n as u8).collect();
    let mut cur = Vec::with_capacity(n);
    permute_rec(&mut avail, &mut cur, &mut out);
    out
}

fn permute_rec(avail: &mut Vec<u8>, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if avail.is_empty() {
        out.push(cur.clone());
        return;
    }
    for idx in 0..avail.len() {
        let v = avail.remove(idx);
        cur.push(v);
        permute_rec(avail, cur, out);
        cur.pop();
        avail.insert(idx, v);
    }
}

fn compose_into(g: &[u8], h: &[u8], out: &mut [u8]) {
    for i in 0..g.len() {
        out[i] = g[h[i] as usize];
    }
}

/// Connected components of the union of the cycle graphs of g and h, i.e.
/// orbits of the subgroup they generate.
fn joint_orbit_count(g: &[u8], h: &[u8]) -> usize {
    let n = g.len();
    let mut seen = [false; 8];
    let mut stack = [0u8; 8];
    let mut orbits = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        orbits += 1;
        let mut top = 0;
        stack[top] = start as u8;
        top += 1;
        seen[start] = true;
        while top > 0 {
            top -= 1;
            let p = stack[top] as usize;
            for next in [g[p] as usize, h[p] as usize] {
                if !seen[next] {
                    seen[next] = true;
                    stack[top] = next as u8;
                    top += 1;
                }
            }
        }
    }
    orbits
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pairs: &[(u32, i64)]) -> TPolynomial {
        pairs.iter().map(|&(t, c)| (t, BigInt::from(c))).collect()
    }

    #[test]
    fn affine_plane_q2_coefficient() {
        // one cell in degree 0: coefficient of q^2 is 1 + t^2
        let topo = SurfaceTopology::new([1, 0, 0, 0, 0]);
        let series = goettsche_series(&topo, 2);
        assert_eq!(series.coefficient(2).unwrap(), poly(&[(0, 1), (2, 1)]));
    }

    #[test]
    fn q0_coefficient_is_one() {
        for betti in [[1, 0, 1, 0, 1], [1, 2, 1, 2, 1], [0, 3, 0, 0, 5]] {
            let series = goettsche_series(&SurfaceTopology::new(betti), 4);
            assert_eq!(series.coefficient(0).unwrap(), poly(&[(0, 1)]));
        }
    }

    #[test]
    fn empty_betti_gives_one() {
        let series = goettsche_series(&SurfaceTopology::new([0; 5]), 6);
        assert!(series.is_one());
    }

    #[test]
    fn poincare_small_cases() {
        let a2 = SurfaceTopology::new([1, 0, 0, 0, 0]);
        assert_eq!(poincare_polynomial(&a2, 0, None), poly(&[(0, 1)]));
        assert_eq!(
            poincare_polynomial(&a2, 3, None),
            poly(&[(0, 1), (2, 1), (4, 1)])
        );
        let rational = SurfaceTopology::new([1, 0, 1, 0, 1]);
        assert_eq!(
            poincare_polynomial(&rational, 1, Some(4)),
            poly(&[(0, 1), (2, 1), (4, 1)])
        );
    }

    #[test]
    fn euler_series_counts_partitions() {
        // e = 1: coefficients are the partition numbers
        let topo = SurfaceTopology::new([1, 0, 0, 0, 0]);
        let series = euler_series(&topo, 6);
        assert_eq!(series.get(6, 0), BigInt::from(11));
        // e = 2 at q^2: pairs of partitions with total size 2
        let topo2 = SurfaceTopology::new([2, 0, 0, 0, 0]);
        assert_eq!(euler_series(&topo2, 2).get(2, 0), BigInt::from(5));
    }

    #[test]
    fn euler_zero_is_constant_one() {
        // b = (1,1,0,0,0) has euler number 0
        let topo = SurfaceTopology::new([1, 1, 0, 0, 0]);
        assert_eq!(topo.euler(), 0);
        assert!(euler_series(&topo, 5).is_one());
    }

    #[test]
    fn two_euler_routes_agree() {
        for betti in [
            [1, 0, 1, 0, 1],
            [1, 2, 1, 2, 1],
            [1, 0, 22, 0, 1],
            [2, 3, 1, 0, 4],
        ] {
            let topo = SurfaceTopology::new(betti);
            let via_t = euler_series(&topo, 8);
            let direct = euler_series_direct(topo.euler(), 8);
            assert!(via_t.try_eq(&direct).unwrap(), "betti {betti:?}");
        }
    }

    #[test]
    fn odd_betti_factors_are_polynomial() {
        // b_1, b_3 > 0 exercise the positive-exponent factors
        let topo = SurfaceTopology::new([1, 2, 1, 2, 1]);
        let series = goettsche_series(&topo, 4);
        assert_eq!(series.coefficient(0).unwrap(), poly(&[(0, 1)]));
        // q^1 coefficient: 1 + 2t + t^2 + 2t^3 + t^4 from the m = 1 factors
        assert_eq!(
            series.coefficient(1).unwrap(),
            poly(&[(0, 1), (1, 2), (2, 1), (3, 2), (4, 1)])
        );
    }

    #[test]
    fn nonnegative_coefficients_for_even_betti() {
        use num_traits::Signed;
        for betti in [[1, 0, 1, 0, 1], [1, 0, 22, 0, 1], [1, 0, 0, 0, 1]] {
            let series = goettsche_series(&SurfaceTopology::new(betti), 6);
            assert!(series.terms().all(|(_, _, c)| !c.is_negative()));
        }
    }

    #[test]
    fn orbifold_small_cases() {
        assert_eq!(orbifold_euler_bruteforce(1, 7).unwrap(), BigInt::from(7));
        assert_eq!(orbifold_euler_bruteforce(2, 1).unwrap(), BigInt::from(2));
        assert_eq!(orbifold_euler_bruteforce(3, 1).unwrap(), BigInt::from(3));
        assert_eq!(orbifold_euler_bruteforce(2, 2).unwrap(), BigInt::from(5));
    }

    #[test]
    fn orbifold_matches_euler_series_at_small_n() {
        for e in 1..=3i64 {
            let series = euler_series_direct(e, 5);
            for n in 1..=5u32 {
                assert_eq!(
                    orbifold_euler_bruteforce(n, e).unwrap(),
                    series.get(n, 0),
                    "n = {n}, e = {e}"
                );
            }
        }
    }

    #[test]
    fn orbifold_negative_euler_number() {
        // e = -1: coefficients of prod (1-q^m)
        let series = euler_series_direct(-1, 4);
        for n in 1..=4u32 {
            assert_eq!(orbifold_euler_bruteforce(n, -1).unwrap(), series.get(n, 0));
        }
    }

    #[test]
    fn orbifold_guard() {
        assert!(orbifold_euler_bruteforce(0, 1).is_err());
        assert!(orbifold_euler_bruteforce(8, 1).is_err());
    }

    #[test]
    fn duality_flag() {
        assert!(SurfaceTopology::new([1, 0, 22, 0, 1]).satisfies_poincare_duality());
        assert!(!SurfaceTopology::new([1, 0, 22, 0, 2]).satisfies_poincare_duality());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]
            #[test]
            fn euler_routes_agree_on_random_betti(
                b0 in 0u32..4, b1 in 0u32..4, b2 in 0u32..4, b3 in 0u32..4, b4 in 0u32..4,
            ) {
                let topo = SurfaceTopology::new([b0, b1, b2, b3, b4]);
                let via_t = euler_series(&topo, 6);
                let direct = euler_series_direct(topo.euler(), 6);
                prop_assert!(via_t.try_eq(&direct).unwrap());
            }
        }
    }
}
