//! Cross-check suite: every check compares two independent computation
//! routes and reports pass/fail with a short detail string. The CLI `verify`
//! subcommand and the acceptance test suite both run these.
//!
//! The [`oracles`] submodule holds the deliberately naive reference
//! computations (partition enumeration, divisor sums); they must stay
//! independent of the implementation paths they check.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::affine::{
    freudenthal_multiplicities, weyl_kac_character, AdeType, AffineAlgebra, DominantWeight,
};
use crate::fock::{check_operator_relations, graded_character, ColorSpec, CommutatorConstants};
use crate::goettsche::{
    euler_series, euler_series_direct, goettsche_series, orbifold_euler_bruteforce,
    poincare_polynomial, SurfaceTopology,
};
use crate::hecke::{
    commute_check, delta, eisenstein, eta_modularity_check, euler_product_check, hecke_t,
    is_eigenform,
};
use crate::mckay::{match_ade, mckay_graph, GroupData, GroupSpec, ROUNDING_EPS};

/// Independent reference computations.
pub mod oracles {
    use num_bigint::BigInt;

    use crate::series::TPolynomial;

    /// All partitions of `n` (parts non-increasing).
    pub fn partitions(n: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        partitions_rec(n, n, &mut current, &mut out);
        out
    }

    fn partitions_rec(
        remaining: u32,
        max_part: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        let top = remaining.min(max_part);
        for part in (1..=top).rev() {
            current.push(part);
            partitions_rec(remaining - part, part, current, out);
            current.pop();
        }
    }

    pub fn partition_count(n: u32) -> u64 {
        partitions(n).len() as u64
    }

    /// `sum over partitions of n of t^{2(n - length)}`, the length statistic
    /// that the q^n coefficient of the one-cell product series must equal.
    pub fn partition_statistic_poly(n: u32) -> TPolynomial {
        let mut poly = TPolynomial::new();
        for lambda in partitions(n) {
            let exponent = 2 * (n - lambda.len() as u32);
            *poly.entry(exponent).or_insert_with(|| BigInt::from(0)) += 1;
        }
        poly.retain(|_, c| *c != BigInt::from(0));
        poly
    }
}

/// Outcome of one cross-check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: String) -> Self {
        CheckOutcome {
            name,
            passed: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        CheckOutcome {
            name,
            passed: false,
            detail,
        }
    }
}

fn xorshift(state: &mut u64) -> u64 {
    let mut x = *state;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    *state = x;
    x
}

/// Poincaré polynomials of the one-cell surface vs. the partition-length
/// statistic, exactly, for all n <= `max_n`.
pub fn check_goettsche_partition_oracle(max_n: u32) -> CheckOutcome {
    const NAME: &str = "goettsche-vs-partition-oracle";
    let topo = SurfaceTopology::new([1, 0, 0, 0, 0]);
    let series = goettsche_series(&topo, max_n);
    for n in 0..=max_n {
        let got = series.coefficient(n).expect("n <= order");
        let expect = oracles::partition_statistic_poly(n);
        if got != expect {
            return CheckOutcome::fail(NAME, format!("mismatch at n = {n}"));
        }
        // also via the single-coefficient entry point
        if poincare_polynomial(&topo, n, None) != expect {
            return CheckOutcome::fail(NAME, format!("poincare_polynomial mismatch at n = {n}"));
        }
    }
    CheckOutcome::pass(
        NAME,
        format!("all n <= {max_n} match the partition statistic"),
    )
}

/// Commuting-pair orbifold sums vs. the q^n coefficients of the Euler series,
/// and the two Euler-series routes against each other.
pub fn check_hirzebruch_hofer(max_n: u32, euler_numbers: &[i64]) -> CheckOutcome {
    const NAME: &str = "orbifold-euler-vs-series";
    let mut checked = 0;
    for &e in euler_numbers {
        let series = euler_series_direct(e, max_n);
        for n in 1..=max_n {
            let brute = match orbifold_euler_bruteforce(n, e) {
                Ok(v) => v,
                Err(err) => return CheckOutcome::fail(NAME, format!("{err}")),
            };
            if brute != series.get(n, 0) {
                return CheckOutcome::fail(NAME, format!("mismatch at n = {n}, e = {e}"));
            }
            checked += 1;
        }
    }
    // specialization route equals the direct product route
    for betti in [[1, 0, 1, 0, 1], [1, 2, 1, 2, 1], [2, 1, 0, 3, 2]] {
        let topo = SurfaceTopology::new(betti);
        let a = euler_series(&topo, max_n);
        let b = euler_series_direct(topo.euler(), max_n);
        if !a.try_eq(&b).unwrap_or(false) {
            return CheckOutcome::fail(NAME, format!("euler route mismatch for {betti:?}"));
        }
    }
    CheckOutcome::pass(
        NAME,
        format!("{checked} orbifold sums match, n <= {max_n}, e in {euler_numbers:?}"),
    )
}

/// Exhaustive operator relation check on all basis states up to a weight.
pub fn check_fock_relations(betti: [u32; 5], max_weight: u32, max_mode: u32) -> CheckOutcome {
    const NAME: &str = "fock-relations";
    let spec = ColorSpec::from_topology(&SurfaceTopology::new(betti));
    match check_operator_relations(&spec, &CommutatorConstants::Default, max_weight, max_mode) {
        Ok(summary) if summary.passed() => CheckOutcome::pass(
            NAME,
            format!(
                "{} operator pairs on {} states of weight <= {max_weight}, modes <= {max_mode}",
                summary.pairs_checked, summary.states_checked
            ),
        ),
        Ok(summary) => CheckOutcome::fail(NAME, format!("{} relation failures", summary.failures)),
        Err(e) => CheckOutcome::fail(NAME, format!("{e}")),
    }
}

/// Enumerated Fock character vs. the product-formula series, exactly.
pub fn check_fock_character(bettis: &[[u32; 5]], q_order: u32) -> CheckOutcome {
    const NAME: &str = "fock-character-vs-goettsche";
    for &betti in bettis {
        let topo = SurfaceTopology::new(betti);
        let spec = ColorSpec::from_topology(&topo);
        let character = graded_character(&spec, q_order);
        let product = goettsche_series(&topo, q_order);
        if !character.try_eq(&product).unwrap_or(false) {
            return CheckOutcome::fail(NAME, format!("mismatch for betti {betti:?}"));
        }
    }
    CheckOutcome::pass(
        NAME,
        format!("{} Betti vectors agree to order {q_order}", bettis.len()),
    )
}

/// Groups -> character tables -> McKay graphs -> matched affine Cartan
/// matrices, with dims landing on the marks.
pub fn check_mckay_families(cyclic_max: u32, dihedral_max: u32, exceptional: bool) -> CheckOutcome {
    const NAME: &str = "mckay-correspondence";
    let mut specs: Vec<GroupSpec> = (2..=cyclic_max).map(GroupSpec::Cyclic).collect();
    specs.extend((2..=dihedral_max).map(GroupSpec::BinaryDihedral));
    if exceptional {
        specs.extend([
            GroupSpec::BinaryTetrahedral,
            GroupSpec::BinaryOctahedral,
            GroupSpec::BinaryIcosahedral,
        ]);
    }
    let mut matched = Vec::new();
    for spec in specs {
        let outcome = (|| -> Result<String, String> {
            let data = GroupData::build(spec).map_err(|e| e.to_string())?;
            let sum: u64 = data.dims.iter().map(|&d| u64::from(d) * u64::from(d)).sum();
            if sum != data.order() as u64 {
                return Err(format!("sum of dims^2 = {sum} != |G| = {}", data.order()));
            }
            let report = mckay_graph(&data).map_err(|e| e.to_string())?;
            if report.max_rounding_deviation > ROUNDING_EPS {
                return Err(format!(
                    "rounding deviation {} above tolerance",
                    report.max_rounding_deviation
                ));
            }
            let m = match_ade(&report.graph).map_err(|e| e.to_string())?;
            let alg = AffineAlgebra::new(m.ade).map_err(|e| e.to_string())?;
            // 2I - adjacency equals the permuted affine Cartan matrix
            let nodes = report.graph.adjacency.len();
            for r in 0..nodes {
                for c in 0..nodes {
                    let lhs = if r == c { 2 } else { 0 } - i64::from(report.graph.adjacency[r][c]);
                    let rhs = alg.cartan()[m.permutation[r]][m.permutation[c]];
                    if lhs != rhs {
                        return Err(format!("Cartan mismatch at ({r}, {c})"));
                    }
                }
            }
            for (node, &target) in m.permutation.iter().enumerate() {
                if u64::from(report.graph.node_dims[node]) != alg.marks()[target] {
                    return Err(format!("dims/marks mismatch at node {node}"));
                }
            }
            Ok(format!("{spec} -> {}", m.ade))
        })();
        match outcome {
            Ok(desc) => matched.push(desc),
            Err(e) => return CheckOutcome::fail(NAME, format!("{spec}: {e}")),
        }
    }
    CheckOutcome::pass(NAME, matched.join(", "))
}

/// Freudenthal vs. Weyl-Kac tables, exactly, on the pinned case list.
pub fn check_affine_dual_algorithms(depth: u32) -> CheckOutcome {
    const NAME: &str = "affine-dual-algorithms";
    let cases: [(AdeType, Vec<u64>); 5] = [
        (AdeType::A(1), vec![1, 0]),
        (AdeType::A(1), vec![1, 1]),
        (AdeType::A(1), vec![0, 2]),
        (AdeType::A(2), vec![1, 0, 0]),
        (AdeType::D(4), vec![1, 0, 0, 0, 0]),
    ];
    let mut weights = 0;
    for (ade, wv) in cases {
        let alg = match AffineAlgebra::new(ade) {
            Ok(a) => a,
            Err(e) => return CheckOutcome::fail(NAME, format!("{e}")),
        };
        let w = DominantWeight::new(wv.clone());
        let f = match freudenthal_multiplicities(&alg, &w, depth) {
            Ok(t) => t,
            Err(e) => return CheckOutcome::fail(NAME, format!("{ade} {wv:?}: {e}")),
        };
        let k = match weyl_kac_character(&alg, &w, depth) {
            Ok(t) => t,
            Err(e) => return CheckOutcome::fail(NAME, format!("{ade} {wv:?}: {e}")),
        };
        if f != k {
            return CheckOutcome::fail(NAME, format!("{ade} {wv:?}: tables differ"));
        }
        weights += f.len();
    }
    CheckOutcome::pass(
        NAME,
        format!("5 cases agree to depth {depth} ({weights} weights total)"),
    )
}

/// `level(w) = sum marks_k w_k = sum dim(rho_k) w_k` with dims imported from
/// the matched McKay data, for random weights.
pub fn check_level_formula(seed: u64) -> CheckOutcome {
    const NAME: &str = "level-formula";
    let cases = [
        (GroupSpec::Cyclic(4), AdeType::A(3)),
        (GroupSpec::BinaryDihedral(2), AdeType::D(4)),
        (GroupSpec::BinaryTetrahedral, AdeType::E6),
    ];
    let mut state = seed | 1;
    let mut checked = 0;
    for (spec, expect) in cases {
        let data = match GroupData::build(spec) {
            Ok(d) => d,
            Err(e) => return CheckOutcome::fail(NAME, format!("{spec}: {e}")),
        };
        let report = match mckay_graph(&data) {
            Ok(r) => r,
            Err(e) => return CheckOutcome::fail(NAME, format!("{spec}: {e}")),
        };
        let m = match match_ade(&report.graph) {
            Ok(m) => m,
            Err(e) => return CheckOutcome::fail(NAME, format!("{spec}: {e}")),
        };
        if m.ade != expect {
            return CheckOutcome::fail(
                NAME,
                format!("{spec} matched {}, expected {expect}", m.ade),
            );
        }
        let alg = AffineAlgebra::new(m.ade).expect("matched type builds");
        let nodes = alg.node_count();
        for _ in 0..20 {
            // random dominant weight in affine coordinates
            let w: Vec<u64> = (0..nodes).map(|_| xorshift(&mut state) % 5).collect();
            let weight = DominantWeight::new(w.clone());
            let level = alg.level(&weight).expect("length matches");
            let marks_sum: u64 = alg.marks().iter().zip(&w).map(|(&a, &wk)| a * wk).sum();
            // rank of the bundle: dims of the monodromy rep summed with
            // multiplicities, transported through the node matching
            let dims_sum: u64 = m
                .permutation
                .iter()
                .enumerate()
                .map(|(node, &target)| u64::from(report.graph.node_dims[node]) * w[target])
                .sum();
            if level != marks_sum || level != dims_sum {
                return CheckOutcome::fail(
                    NAME,
                    format!(
                        "{spec}: level {level}, marks {marks_sum}, dims {dims_sum} for w = {w:?}"
                    ),
                );
            }
            checked += 1;
        }
    }
    CheckOutcome::pass(
        NAME,
        format!("{checked} random weights across 3 group/diagram pairs"),
    )
}

/// The full operator suite on q-expansions: eigenforms, eigenvalues, Euler
/// products, commutation.
pub fn check_hecke_suite() -> CheckOutcome {
    const NAME: &str = "hecke-suite";
    let run = || -> Result<String, String> {
        let d = delta(64).map_err(|e| e.to_string())?;
        for p in [2u64, 3, 5, 7] {
            let lambda = is_eigenform(p, &d)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("delta not an eigenform for p = {p}"))?;
            if &lambda != d.coeff(p as u32) {
                return Err(format!("delta eigenvalue at p = {p} differs from a_p"));
            }
            let report = euler_product_check(&d, p, 60).map_err(|e| e.to_string())?;
            if !report.passed() {
                return Err(format!(
                    "Euler product failed at p = {p}: {:?}",
                    report.failures
                ));
            }
        }
        // a_{p^2} = a_p^2 - p^11 spelled out for p = 2
        let expect =
            d.coeff(2) * d.coeff(2) - BigRational::from(BigInt::from(2).pow(11)) * d.coeff(1);
        if d.coeff(4) != &expect {
            return Err("a_4 recursion failed for delta".into());
        }
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5)] {
            if !commute_check(p, q, &d).map_err(|e| e.to_string())? {
                return Err(format!("T({p}) T({q}) != T({q}) T({p}) on delta"));
            }
            let e4cubed = eisenstein(4, 64).map_err(|e| e.to_string())?.pow(3);
            if !commute_check(p, q, &e4cubed).map_err(|e| e.to_string())? {
                return Err(format!("T({p}) T({q}) != T({q}) T({p}) on E_4^3"));
            }
        }
        for k in [4u32, 6, 8, 10, 14] {
            let e = eisenstein(k, 40).map_err(|e| e.to_string())?;
            for p in [2u64, 3, 5] {
                let lambda = is_eigenform(p, &e)
                    .map_err(|e| e.to_string())?
                    .ok_or_else(|| format!("E_{k} not an eigenform at p = {p}"))?;
                let expect = BigRational::from(BigInt::one() + BigInt::from(p).pow(k - 1));
                if lambda != expect {
                    return Err(format!(
                        "E_{k} eigenvalue at p = {p} is not 1 + p^{}",
                        k - 1
                    ));
                }
            }
        }
        // linearity on the weight-12 basis
        let e4cubed = eisenstein(4, 64).map_err(|e| e.to_string())?.pow(3);
        let alpha = BigRational::new(BigInt::from(2), BigInt::from(3));
        let combo = d.scale(&alpha).add(&e4cubed).map_err(|e| e.to_string())?;
        let lhs = hecke_t(5, &combo).map_err(|e| e.to_string())?;
        let rhs = hecke_t(5, &d)
            .map_err(|e| e.to_string())?
            .scale(&alpha)
            .add(&hecke_t(5, &e4cubed).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        if !lhs.try_eq(&rhs).map_err(|e| e.to_string())? {
            return Err("T(5) not linear on the weight-12 space".into());
        }
        Ok("delta and E_k eigen data, Euler products, commutation, linearity".into())
    };
    match run() {
        Ok(detail) => CheckOutcome::pass(NAME, detail),
        Err(e) => CheckOutcome::fail(NAME, e),
    }
}

/// Numeric eta functional equation at 10 sample points with certified
/// truncation tails.
pub fn check_eta_modularity(tolerance: f64) -> CheckOutcome {
    const NAME: &str = "eta-modularity";
    let samples = [
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(0.0, 0.5),
        Complex64::new(0.3, 1.1),
        Complex64::new(-0.25, 0.8),
        Complex64::new(0.5, 0.5),
        Complex64::new(-0.7, 1.9),
        Complex64::new(1.0, 0.6),
        Complex64::new(-1.3, 2.4),
        Complex64::new(0.05, 0.75),
    ];
    match eta_modularity_check(&samples, None, tolerance) {
        Ok(report) if report.max_deviation < tolerance => CheckOutcome::pass(
            NAME,
            format!(
                "max deviation {:.3e} over {} samples (truncation {}, tail bound {:.3e})",
                report.max_deviation,
                report.samples.len(),
                report.truncation,
                report.max_tail_bound
            ),
        ),
        Ok(report) => CheckOutcome::fail(
            NAME,
            format!(
                "max deviation {:.3e} exceeds {tolerance:.1e}",
                report.max_deviation
            ),
        ),
        Err(e) => CheckOutcome::fail(NAME, format!("{e}")),
    }
}

/// Run the whole suite. `fast` shrinks sizes for a quick smoke run; the full
/// run uses the acceptance parameters.
pub fn run_all(fast: bool, seed: u64) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    if fast {
        out.push(check_goettsche_partition_oracle(8));
        out.push(check_hirzebruch_hofer(4, &[1, 2]));
        out.push(check_fock_relations([1, 1, 1, 1, 1], 4, 3));
        out.push(check_fock_character(
            &[[1, 0, 0, 0, 0], [1, 1, 1, 1, 1], [0, 2, 1, 0, 0]],
            5,
        ));
        out.push(check_mckay_families(4, 3, false));
        out.push(check_affine_dual_algorithms(3));
        out.push(check_level_formula(seed));
        out.push(check_hecke_suite());
        out.push(check_eta_modularity(1e-8));
    } else {
        out.push(check_goettsche_partition_oracle(12));
        out.push(check_hirzebruch_hofer(6, &[1, 2, 3, 4]));
        out.push(check_fock_relations([1, 2, 1, 2, 1], 6, 4));
        out.push(check_fock_character(
            &[
                [1, 0, 0, 0, 0],
                [1, 0, 1, 0, 1],
                [0, 1, 0, 1, 0],
                [1, 2, 1, 2, 1],
                [2, 1, 3, 1, 2],
            ],
            8,
        ));
        out.push(check_mckay_families(8, 6, true));
        out.push(check_affine_dual_algorithms(6));
        out.push(check_level_formula(seed));
        out.push(check_hecke_suite());
        out.push(check_eta_modularity(1e-8));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_oracle_basics() {
        assert_eq!(oracles::partition_count(0), 1);
        assert_eq!(oracles::partition_count(4), 5);
        assert_eq!(oracles::partition_count(6), 11);
        assert_eq!(oracles::partition_count(10), 42);
        let p3 = oracles::partition_statistic_poly(3);
        // partitions (3), (2,1), (1,1,1): lengths 1, 2, 3 -> t^4 + t^2 + 1
        assert_eq!(p3.len(), 3);
        assert_eq!(p3.get(&0), Some(&BigInt::one()));
        assert_eq!(p3.get(&2), Some(&BigInt::one()));
        assert_eq!(p3.get(&4), Some(&BigInt::one()));
    }

    #[test]
    fn fast_suite_passes() {
        for outcome in run_all(true, 0xC0FFEE) {
            assert!(outcome.passed, "{}: {}", outcome.name, outcome.detail);
        }
    }
}
