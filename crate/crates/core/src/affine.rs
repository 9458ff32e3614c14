//! Affine simply-laced Kac-Moody data and integrable highest-weight
//! characters.
//!
//! An [`AffineAlgebra`] holds the extended (affine) Cartan matrix of an ADE
//! type together with its marks, computed as the integer kernel vector of the
//! matrix normalized to `a_0 = 1`. Characters of the integrable module with
//! dominant weight `w` are tabulated as multiplicities of weights
//! `Lambda - sum c_k alpha_k`, indexed by the descent vector `(c_0, ..., c_n)`
//! and truncated by the delta-depth `c_0 <= N` (the q-grading).
//!
//! Two independent algorithms produce the same table and are used as mutual
//! oracles:
//!
//! - [`freudenthal_multiplicities`]: the Freudenthal recursion, walking the
//!   weight graph downward from the highest weight, with root multiplicities
//!   `mult(real) = 1` and `mult(m delta) = rank`;
//! - [`weyl_kac_character`]: the alternating Weyl-orbit sum over a window of
//!   the root lattice, divided by the product `prod (1 - e^{-alpha})^{mult}`
//!   as a truncated multivariate series.
//!
//! Node numbering (node 0 is always the affine node):
//!
//! - `A_n`: the (n+1)-cycle `0-1-...-n-0`; `A_1` is the doubled edge.
//! - `D_n`: tails 0 and 1 joined to 2, chain `2-3-...-(n-2)`, tails `n-1`
//!   and `n` joined to `n-2`.
//! - `E_6`: chain `0-1-2-3-4` with arm `2-5-6`.
//! - `E_7`: chain `0-1-2-3-4-5-6` with arm `3-7`.
//! - `E_8`: chain `0-1-2-3-4-5-6-7` with arm `5-8`.

// index loops mirror the matrix notation
#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::series::BiSeries;

/// Maximum number of lattice points in the Weyl-Kac window (memory guard).
const WINDOW_CAP: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffineError {
    InvalidType(String),
    WeightLength {
        expected: usize,
        got: usize,
    },
    /// Character computations need level >= 1.
    LevelNotPositive,
    /// The affine Cartan matrix must have corank exactly 1.
    BadCorank {
        corank: usize,
    },
    MarksNotNormalized,
    /// Freudenthal denominator vanished or went negative on a live descent.
    DenominatorNotPositive {
        descent: Vec<u32>,
    },
    /// Recursion produced a non-integral or non-positive multiplicity.
    InconsistentMultiplicity {
        descent: Vec<u32>,
    },
    /// The truncation window would need too many lattice points.
    WindowTooLarge {
        points: u128,
        cap: u128,
    },
}

impl fmt::Display for AffineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineError::InvalidType(s) => write!(f, "invalid ADE type: {s}"),
            AffineError::WeightLength { expected, got } => {
                write!(f, "weight has {got} components, expected {expected}")
            }
            AffineError::LevelNotPositive => write!(f, "weight has level 0"),
            AffineError::BadCorank { corank } => {
                write!(f, "affine Cartan matrix has corank {corank}, expected 1")
            }
            AffineError::MarksNotNormalized => {
                write!(
                    f,
                    "kernel vector cannot be normalized to positive integers with a_0 = 1"
                )
            }
            AffineError::DenominatorNotPositive { descent } => {
                write!(
                    f,
                    "Freudenthal denominator not positive at descent {descent:?}"
                )
            }
            AffineError::InconsistentMultiplicity { descent } => {
                write!(
                    f,
                    "non-integral or non-positive multiplicity at descent {descent:?}"
                )
            }
            AffineError::WindowTooLarge { points, cap } => {
                write!(
                    f,
                    "truncation window needs {points} lattice points (cap {cap})"
                )
            }
        }
    }
}

impl std::error::Error for AffineError {}

/// Simply-laced type label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdeType {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl AdeType {
    /// Rank of the finite algebra; the affine diagram has `rank + 1` nodes.
    pub fn rank(&self) -> usize {
        match *self {
            AdeType::A(n) => n as usize,
            AdeType::D(n) => n as usize,
            AdeType::E6 => 6,
            AdeType::E7 => 7,
            AdeType::E8 => 8,
        }
    }

    pub fn parse(s: &str) -> Result<Self, AffineError> {
        let norm = s.trim().to_ascii_uppercase().replace('_', "");
        let err = || AffineError::InvalidType(s.to_string());
        let (family, num) = norm.split_at(1.min(norm.len()));
        let n: u32 = num.parse().map_err(|_| err())?;
        match family {
            "A" if n >= 1 => Ok(AdeType::A(n)),
            "D" if n >= 4 => Ok(AdeType::D(n)),
            "E" if n == 6 => Ok(AdeType::E6),
            "E" if n == 7 => Ok(AdeType::E7),
            "E" if n == 8 => Ok(AdeType::E8),
            _ => Err(err()),
        }
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AdeType::A(n) => write!(f, "A{n}"),
            AdeType::D(n) => write!(f, "D{n}"),
            AdeType::E6 => write!(f, "E6"),
            AdeType::E7 => write!(f, "E7"),
            AdeType::E8 => write!(f, "E8"),
        }
    }
}

/// Affine Cartan matrix, marks, and derived data for one ADE type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineAlgebra {
    ade: AdeType,
    cartan: Vec<Vec<i64>>,
    marks: Vec<u64>,
}

impl AffineAlgebra {
    /// Build the affine Cartan matrix from the extended Dynkin graph and
    /// compute the marks as the normalized kernel vector.
    pub fn new(ade: AdeType) -> Result<Self, AffineError> {
        let nodes = ade.rank() + 1;
        let mut adj = vec![vec![0i64; nodes]; nodes];
        let mut edge = |a: usize, b: usize| {
            adj[a][b] += 1;
            adj[b][a] += 1;
        };
        match ade {
            AdeType::A(1) => edge(0, 1), // doubled below
            AdeType::A(n) => {
                for k in 0..=n as usize {
                    edge(k, (k + 1) % (n as usize + 1));
                }
            }
            AdeType::D(n) => {
                let n = n as usize;
                edge(0, 2);
                edge(1, 2);
                for k in 2..n - 2 {
                    edge(k, k + 1);
                }
                edge(n - 1, n - 2);
                edge(n, n - 2);
            }
            AdeType::E6 => {
                for k in 0..4 {
                    edge(k, k + 1);
                }
                edge(2, 5);
                edge(5, 6);
            }
            AdeType::E7 => {
                for k in 0..6 {
                    edge(k, k + 1);
                }
                edge(3, 7);
            }
            AdeType::E8 => {
                for k in 0..7 {
                    edge(k, k + 1);
                }
                edge(5, 8);
            }
        }
        if ade == AdeType::A(1) {
            adj[0][1] = 2;
            adj[1][0] = 2;
        }
        let mut cartan = vec![vec![0i64; nodes]; nodes];
        for r in 0..nodes {
            for c in 0..nodes {
                cartan[r][c] = if r == c { 2 } else { -adj[r][c] };
            }
        }
        let marks = integer_kernel_vector(&cartan)?;
        debug_assert!(cartan.iter().all(|row| {
            row.iter()
                .zip(&marks)
                .map(|(&a, &m)| a * m as i64)
                .sum::<i64>()
                == 0
        }));
        Ok(AffineAlgebra { ade, cartan, marks })
    }

    pub fn ade_type(&self) -> AdeType {
        self.ade
    }

    pub fn rank(&self) -> usize {
        self.ade.rank()
    }

    /// Number of Dynkin nodes, `rank + 1`.
    pub fn node_count(&self) -> usize {
        self.rank() + 1
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Kernel vector of the Cartan matrix, normalized to `a_0 = 1`. Equal to
    /// the comarks in the simply-laced case.
    pub fn marks(&self) -> &[u64] {
        &self.marks
    }

    fn check_weight(&self, w: &DominantWeight) -> Result<(), AffineError> {
        if w.components().len() != self.node_count() {
            return Err(AffineError::WeightLength {
                expected: self.node_count(),
                got: w.components().len(),
            });
        }
        Ok(())
    }

    /// `sum marks_k w_k`.
    pub fn level(&self, w: &DominantWeight) -> Result<u64, AffineError> {
        self.check_weight(w)?;
        Ok(self
            .marks
            .iter()
            .zip(w.components())
            .map(|(&a, &wk)| a * wk)
            .sum())
    }

    /// `(sum c_k alpha_k, sum d_k alpha_k)` under the invariant form with
    /// `(alpha, alpha) = 2`.
    fn pairing(&self, c: &[i64], d: &[i64]) -> i64 {
        let mut total = 0;
        for (row, &ck) in self.cartan.iter().zip(c) {
            if ck == 0 {
                continue;
            }
            let mut inner = 0;
            for (&a, &dk) in row.iter().zip(d) {
                inner += a * dk;
            }
            total += ck * inner;
        }
        total
    }

    /// Cartan matrix of the finite algebra (affine node deleted).
    fn finite_cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        (1..=n)
            .map(|r| (1..=n).map(|c| self.cartan[r][c]).collect())
            .collect()
    }

    /// Positive roots of the finite system as coefficient vectors on the
    /// simple roots `alpha_1..alpha_n`, generated by closing the simple
    /// roots under `beta -> beta + alpha_k` whenever `(beta, alpha_k) = -1`.
    pub fn finite_positive_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let cartan = self.finite_cartan();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue: Vec<Vec<i64>> = Vec::new();
        for k in 0..n {
            let mut v = vec![0i64; n];
            v[k] = 1;
            seen.insert(v.clone());
            queue.push(v);
        }
        while let Some(beta) = queue.pop() {
            for k in 0..n {
                let inner: i64 = cartan[k].iter().zip(&beta).map(|(&a, &b)| a * b).sum();
                if inner == -1 {
                    let mut next = beta.clone();
                    next[k] += 1;
                    if seen.insert(next.clone()) {
                        queue.push(next);
                    }
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// Dominant integral weight in fundamental-weight coordinates
/// `(w_0, ..., w_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominantWeight(Vec<u64>);

impl DominantWeight {
    pub fn new(components: Vec<u64>) -> Self {
        DominantWeight(components)
    }

    pub fn components(&self) -> &[u64] {
        &self.0
    }
}

/// Weight multiplicities of an integrable module, indexed by the descent
/// vector `c` of `Lambda - sum c_k alpha_k`, complete for `c_0 <= depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    depth: u32,
    node_count: usize,
    entries: BTreeMap<Vec<u32>, u64>,
}

impl WeightTable {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, descent: &[u32]) -> u64 {
        self.entries.get(descent).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u32>, u64)> {
        self.entries.iter().map(|(c, &m)| (c, m))
    }

    /// q-series graded by delta-depth: `sum mult * q^{c_0}`. The t variable
    /// is unused.
    pub fn q_series(&self) -> BiSeries {
        BiSeries::from_terms(
            self.depth,
            self.entries
                .iter()
                .map(|(c, &m)| (c[0], 0, BigInt::from(m))),
        )
    }
}

/// `s_k` applied to `Lambda - sum c_k alpha_k`, as a descent vector; `None`
/// when the image leaves the descent cone.
pub fn reflect_descent(
    alg: &AffineAlgebra,
    w: &DominantWeight,
    descent: &[u32],
    k: usize,
) -> Option<Vec<u32>> {
    let pairing: i64 = w.components()[k] as i64
        - alg.cartan[k]
            .iter()
            .zip(descent)
            .map(|(&a, &c)| a * i64::from(c))
            .sum::<i64>();
    let new_ck = i64::from(descent[k]) + pairing;
    if new_ck < 0 {
        return None;
    }
    let mut out: Vec<u32> = descent.to_vec();
    out[k] = new_ck as u32;
    Some(out)
}

/// Positive affine roots with coefficient vector `<= bound` componentwise,
/// as `(vector, multiplicity)` pairs: `m delta + finite_root` has
/// multiplicity 1, `m delta` has multiplicity `rank`.
fn positive_roots_within(alg: &AffineAlgebra, bound: &[u32]) -> Vec<(Vec<u32>, u32)> {
    let n = alg.rank();
    let marks = alg.marks();
    let finite = alg.finite_positive_roots();
    let mut out = Vec::new();
    let within = |e: &[u32]| e.iter().zip(bound).all(|(&x, &b)| x <= b);
    for m in 0..=bound[0] {
        for root in &finite {
            for dir in [1i64, -1] {
                if m == 0 && dir == -1 {
                    continue;
                }
                let mut e = vec![0u32; n + 1];
                e[0] = m;
                let mut valid = true;
                for k in 1..=n {
                    let v = i64::from(m) * marks[k] as i64 + dir * root[k - 1];
                    if v < 0 {
                        valid = false;
                        break;
                    }
                    e[k] = v as u32;
                }
                if valid && within(&e) {
                    out.push((e, 1));
                }
            }
        }
        if m >= 1 {
            let e: Vec<u32> = marks.iter().map(|&a| m * a as u32).collect();
            if within(&e) {
                out.push((e, n as u32));
            }
        }
    }
    out
}

/// Componentwise window bound guaranteed to contain every weight of the
/// module with delta-depth `<= depth`: the necessary condition
/// `|Lambda+rho|^2 >= |mu+rho|^2` confines the finite part of the descent to
/// an ellipsoid whose extents are computed from the inverse finite Cartan
/// matrix (floating point, rounded up with slack).
fn window_bounds(alg: &AffineAlgebra, w: &DominantWeight, depth: u32) -> Vec<u32> {
    let n = alg.rank();
    let marks = alg.marks();
    let level: f64 = alg.level(w).expect("validated weight") as f64;
    let coxeter: f64 = marks.iter().sum::<u64>() as f64;
    let u_bar: Vec<f64> = (1..=n).map(|k| w.components()[k] as f64 + 1.0).collect();

    let finite: Vec<Vec<f64>> = alg
        .finite_cartan()
        .iter()
        .map(|row| row.iter().map(|&x| x as f64).collect())
        .collect();
    let inv = invert_spd(&finite);
    let inv_u: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|k| inv[j][k] * u_bar[k]).sum())
        .collect();
    let u_inv_u: f64 = (0..n).map(|j| u_bar[j] * inv_u[j]).sum();
    let radius2 = 2.0 * f64::from(depth) * (level + coxeter) + u_inv_u;

    let mut bound = vec![depth];
    for j in 0..n {
        let extent = f64::from(depth) * marks[j + 1] as f64
            + inv_u[j]
            + (radius2.max(0.0) * inv[j][j]).sqrt();
        bound.push(extent.ceil() as u32 + 1);
    }
    bound
}

/// Inverse of a small symmetric positive-definite matrix by Gauss-Jordan.
fn invert_spd(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|r| (0..n).map(|c| if r == c { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&r1, &r2| a[r1][col].abs().total_cmp(&a[r2][col].abs()))
            .expect("nonempty");
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        assert!(p.abs() > 1e-12, "finite Cartan matrix is invertible");
        for c in 0..n {
            a[col][c] /= p;
            inv[col][c] /= p;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0.0 {
                let f = a[r][col];
                for c in 0..n {
                    a[r][c] -= f * a[col][c];
                    inv[r][c] -= f * inv[col][c];
                }
            }
        }
    }
    inv
}

/// Weight multiplicities by the Freudenthal recursion, walking the weight
/// graph downward from the highest weight one total height at a time.
pub fn freudenthal_multiplicities(
    alg: &AffineAlgebra,
    w: &DominantWeight,
    depth: u32,
) -> Result<WeightTable, AffineError> {
    alg.check_weight(w)?;
    if alg.level(w)? == 0 {
        return Err(AffineError::LevelNotPositive);
    }
    let nodes = alg.node_count();
    // roots may reach one unit beyond the weight window
    let mut root_bound = window_bounds(alg, w, depth);
    for b in root_bound.iter_mut() {
        *b += 1;
    }
    let roots = positive_roots_within(alg, &root_bound);
    let roots_i64: Vec<(Vec<i64>, i64, i64)> = roots
        .iter()
        .map(|(e, mult)| {
            let ei: Vec<i64> = e.iter().map(|&x| i64::from(x)).collect();
            let e_dot_w: i64 = ei
                .iter()
                .zip(w.components())
                .map(|(&ek, &wk)| ek * wk as i64)
                .sum();
            (ei, i64::from(*mult), e_dot_w)
        })
        .collect();
    let u: Vec<i64> = w.components().iter().map(|&wk| wk as i64 + 1).collect();

    let mut entries: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    entries.insert(vec![0; nodes], 1);
    let mut current: Vec<Vec<u32>> = vec![vec![0; nodes]];

    while !current.is_empty() {
        let mut candidates: BTreeSet<Vec<u32>> = BTreeSet::new();
        for base in &current {
            for k in 0..nodes {
                let mut c = base.clone();
                c[k] += 1;
                if c[0] <= depth {
                    candidates.insert(c);
                }
            }
        }
        let mut next = Vec::new();
        for c in candidates {
            let ci: Vec<i64> = c.iter().map(|&x| i64::from(x)).collect();
            let mut rhs: i128 = 0;
            let mut target = vec![0u32; nodes];
            for (e, mult_e, e_dot_w) in &roots_i64 {
                if e.iter().zip(&ci).any(|(&ek, &ck)| ek > ck) {
                    continue;
                }
                let c_ae = alg.pairing(&ci, e);
                let e_ae = alg.pairing(e, e);
                let mut j: i64 = 1;
                loop {
                    let mut inside = true;
                    for k in 0..nodes {
                        let v = ci[k] - j * e[k];
                        if v < 0 {
                            inside = false;
                            break;
                        }
                        target[k] = v as u32;
                    }
                    if !inside {
                        break;
                    }
                    if let Some(&m) = entries.get(&target) {
                        let inner = e_dot_w - c_ae + j * e_ae;
                        rhs += i128::from(*mult_e) * i128::from(inner) * i128::from(m);
                    }
                    j += 1;
                }
            }
            rhs *= 2;
            if rhs == 0 {
                continue; // not a weight
            }
            let denom: i128 = {
                let lin: i64 = u.iter().zip(&ci).map(|(&uk, &ck)| uk * ck).sum();
                i128::from(2 * lin) - i128::from(alg.pairing(&ci, &ci))
            };
            if denom <= 0 {
                return Err(AffineError::DenominatorNotPositive { descent: c });
            }
            if rhs % denom != 0 || rhs / denom <= 0 {
                return Err(AffineError::InconsistentMultiplicity { descent: c });
            }
            let mult = u64::try_from(rhs / denom)
                .map_err(|_| AffineError::InconsistentMultiplicity { descent: c.clone() })?;
            entries.insert(c.clone(), mult);
            next.push(c);
        }
        current = next;
    }

    Ok(WeightTable {
        depth,
        node_count: nodes,
        entries,
    })
}

/// Weight multiplicities by the truncated Weyl-Kac formula: alternating sum
/// over affine Weyl images of `Lambda + rho`, divided by the denominator
/// product over the positive roots, all as series on a finite window of the
/// descent cone.
pub fn weyl_kac_character(
    alg: &AffineAlgebra,
    w: &DominantWeight,
    depth: u32,
) -> Result<WeightTable, AffineError> {
    alg.check_weight(w)?;
    if alg.level(w)? == 0 {
        return Err(AffineError::LevelNotPositive);
    }
    let nodes = alg.node_count();
    let bound = window_bounds(alg, w, depth);
    let dims: Vec<usize> = bound.iter().map(|&b| b as usize + 1).collect();
    let points: u128 = dims.iter().map(|&d| d as u128).product();
    if points > WINDOW_CAP {
        return Err(AffineError::WindowTooLarge {
            points,
            cap: WINDOW_CAP,
        });
    }
    let mut strides = vec![1usize; nodes];
    for k in (0..nodes - 1).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let flat = |c: &[u32]| -> usize {
        c.iter()
            .zip(&strides)
            .map(|(&ck, &s)| ck as usize * s)
            .sum()
    };

    let mut values = vec![0i128; points as usize];

    // numerator: breadth-first over the Weyl orbit of Lambda + rho in descent
    // coordinates; every coordinate is non-decreasing along descent edges, so
    // pruning at the window boundary loses nothing inside the window.
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut layer: Vec<Vec<u32>> = vec![vec![0; nodes]];
    seen.insert(layer[0].clone());
    values[0] = 1;
    let mut sign: i128 = 1;
    while !layer.is_empty() {
        let mut next: Vec<Vec<u32>> = Vec::new();
        sign = -sign;
        for b in &layer {
            for k in 0..nodes {
                let pairing: i64 = w.components()[k] as i64 + 1
                    - alg.cartan[k]
                        .iter()
                        .zip(b.iter())
                        .map(|(&a, &bk)| a * i64::from(bk))
                        .sum::<i64>();
                if pairing <= 0 {
                    continue;
                }
                let new_bk = i64::from(b[k]) + pairing;
                if new_bk > i64::from(bound[k]) {
                    continue;
                }
                let mut b2 = b.clone();
                b2[k] = new_bk as u32;
                if seen.insert(b2.clone()) {
                    values[flat(&b2)] += sign;
                    next.push(b2);
                }
            }
        }
        layer = next;
    }

    // divide by each factor (1 - x^e)^mult via in-place prefix sums
    for (e, mult) in positive_roots_within(alg, &bound) {
        let offset = flat(&e);
        let e_usize: Vec<usize> = e.iter().map(|&x| x as usize).collect();
        for _ in 0..mult {
            divide_by_factor(&mut values, &dims, &strides, &e_usize, offset, 0, 0);
        }
    }

    // read off the table
    let mut entries: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let mut index = vec![0u32; nodes];
    for (i, &v) in values.iter().enumerate() {
        if v != 0 {
            let mut rem = i;
            for k in 0..nodes {
                index[k] = (rem / strides[k]) as u32;
                rem %= strides[k];
            }
            if v < 0 {
                return Err(AffineError::InconsistentMultiplicity {
                    descent: index.clone(),
                });
            }
            let mult = u64::try_from(v).map_err(|_| AffineError::InconsistentMultiplicity {
                descent: index.clone(),
            })?;
            entries.insert(index.clone(), mult);
        }
    }

    Ok(WeightTable {
        depth,
        node_count: nodes,
        entries,
    })
}

/// In-place division by `(1 - x^e)` over the sub-box `c >= e`: ascending
/// prefix addition `S[c] += S[c - e]`.
fn divide_by_factor(
    values: &mut [i128],
    dims: &[usize],
    strides: &[usize],
    e: &[usize],
    offset: usize,
    axis: usize,
    base: usize,
) {
    if axis == dims.len() - 1 {
        for c in e[axis]..dims[axis] {
            let idx = base + c;
            values[idx] += values[idx - offset];
        }
    } else {
        for c in e[axis]..dims[axis] {
            divide_by_factor(
                values,
                dims,
                strides,
                e,
                offset,
                axis + 1,
                base + c * strides[axis],
            );
        }
    }
}

/// Smallest positive integer kernel vector of a corank-1 integer matrix,
/// normalized so the first component is 1.
fn integer_kernel_vector(matrix: &[Vec<i64>]) -> Result<Vec<u64>, AffineError> {
    let n = matrix.len();
    let mut m: Vec<Vec<BigRational>> = matrix
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| BigRational::from(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(piv) = (row..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, piv);
        let p = m[row][col].clone();
        for r in 0..n {
            if r != row && !m[r][col].is_zero() {
                let factor = &m[r][col] / &p;
                for c in 0..n {
                    let sub = &factor * &m[row][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    if pivot_cols.len() != n - 1 {
        return Err(AffineError::BadCorank {
            corank: n - pivot_cols.len(),
        });
    }
    let free = (0..n)
        .find(|c| !pivot_cols.contains(c))
        .expect("corank 1 leaves one free column");
    let mut x = vec![BigRational::zero(); n];
    x[free] = BigRational::one();
    for (r, &pc) in pivot_cols.iter().enumerate() {
        x[pc] = -(&m[r][free] / &m[r][pc]);
    }
    // clear denominators
    let mut lcm = BigInt::one();
    for xi in &x {
        lcm = num_integer::lcm(lcm, xi.denom().clone());
    }
    let mut ints: Vec<BigInt> = x.iter().map(|xi| (xi * &lcm).to_integer()).collect();
    if ints.iter().any(|v| v.is_negative()) {
        for v in ints.iter_mut() {
            *v = -v.clone();
        }
    }
    let mut gcd = BigInt::zero();
    for v in &ints {
        gcd = num_integer::gcd(gcd, v.clone());
    }
    if !gcd.is_zero() {
        for v in ints.iter_mut() {
            *v /= &gcd;
        }
    }
    if ints.iter().any(|v| !v.is_positive()) || ints[0] != BigInt::one() {
        return Err(AffineError::MarksNotNormalized);
    }
    ints.iter()
        .map(|v| u64::try_from(v.clone()).map_err(|_| AffineError::MarksNotNormalized))
        .collect()
}
