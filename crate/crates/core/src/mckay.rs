//! Finite subgroups of SU(2), their character tables, and McKay graphs.
//!
//! Groups are generated from standard unit-quaternion generators and closed
//! under multiplication; a unit quaternion `w + xi + yj + zk` is the SU(2)
//! matrix `[[w+xi, y+zi], [-y+zi, w-xi]]`, so the defining 2-dimensional
//! character is `2w`. Elements are floating-point with dedup tolerance
//! [`ELEMENT_EPS`]; every rounded integer quantity downstream must land
//! within [`ROUNDING_EPS`] of an integer or the operation fails.
//!
//! Character tables come from the Burnside class-sum algorithm: the
//! structure-constant matrices of the class algebra commute, so the rows of
//! the character table are recovered from the eigenvectors of a random real
//! combination of them (retrying with a fresh combination if eigenvalues
//! collide). The McKay graph has an edge multiplicity
//! `m_jk = <chi_j * chi_Q, chi_k>`, and `2I - adjacency` must equal the
//! affine Cartan matrix of the matched ADE type with `dims` matching the
//! marks.

// index loops mirror the matrix notation
#![allow(clippy::needless_range_loop)]

use std::fmt;

use num_complex::Complex64;

use crate::affine::{AdeType, AffineAlgebra};

/// Dedup tolerance for floating-point group elements.
pub const ELEMENT_EPS: f64 = 1e-9;
/// Every rounded integer quantity must be at least this close to an integer.
pub const ROUNDING_EPS: f64 = 1e-6;

const MAX_EIGEN_ATTEMPTS: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub enum McKayError {
    InvalidSpec(String),
    /// Generator closure did not stabilize at the expected order.
    ClosureFailed {
        expected: usize,
        got: usize,
    },
    /// Repeated random class-sum combinations failed to separate eigenvalues.
    EigenDegeneracy,
    /// A quantity that must be integral was not, within tolerance.
    NonIntegral {
        what: &'static str,
        value: f64,
    },
    /// Character table failed an orthogonality or dimension check.
    TableInconsistent(String),
    /// The graph matches no affine ADE diagram.
    NoAdeMatch,
}

impl fmt::Display for McKayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McKayError::InvalidSpec(s) => write!(f, "invalid group spec: {s}"),
            McKayError::ClosureFailed { expected, got } => {
                write!(f, "closure reached {got} elements, expected {expected}")
            }
            McKayError::EigenDegeneracy => {
                write!(f, "class-algebra eigenvalues not separated after retries")
            }
            McKayError::NonIntegral { what, value } => {
                write!(f, "{what} = {value} is not integral within tolerance")
            }
            McKayError::TableInconsistent(s) => write!(f, "character table inconsistent: {s}"),
            McKayError::NoAdeMatch => write!(f, "McKay graph matches no affine ADE diagram"),
        }
    }
}

impl std::error::Error for McKayError {}

/// The five families of finite subgroups of SU(2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(u32),
    BinaryDihedral(u32),
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

impl GroupSpec {
    pub fn validate(&self) -> Result<(), McKayError> {
        match *self {
            GroupSpec::Cyclic(k) if k < 1 => {
                Err(McKayError::InvalidSpec("cyclic index must be >= 1".into()))
            }
            GroupSpec::BinaryDihedral(k) if k < 2 => Err(McKayError::InvalidSpec(
                "binary dihedral index must be >= 2".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn expected_order(&self) -> usize {
        match *self {
            GroupSpec::Cyclic(k) => k as usize,
            GroupSpec::BinaryDihedral(k) => 4 * k as usize,
            GroupSpec::BinaryTetrahedral => 24,
            GroupSpec::BinaryOctahedral => 48,
            GroupSpec::BinaryIcosahedral => 120,
        }
    }

    pub fn parse(s: &str) -> Result<Self, McKayError> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        if let Some(rest) = norm.strip_prefix("cyclic-") {
            let k = rest
                .parse()
                .map_err(|_| McKayError::InvalidSpec(s.to_string()))?;
            let spec = GroupSpec::Cyclic(k);
            spec.validate()?;
            return Ok(spec);
        }
        if let Some(rest) = norm.strip_prefix("binary-dihedral-") {
            let k = rest
                .parse()
                .map_err(|_| McKayError::InvalidSpec(s.to_string()))?;
            let spec = GroupSpec::BinaryDihedral(k);
            spec.validate()?;
            return Ok(spec);
        }
        match norm.as_str() {
            "binary-tetrahedral" | "2t" => Ok(GroupSpec::BinaryTetrahedral),
            "binary-octahedral" | "2o" => Ok(GroupSpec::BinaryOctahedral),
            "binary-icosahedral" | "2i" => Ok(GroupSpec::BinaryIcosahedral),
            _ => Err(McKayError::InvalidSpec(s.to_string())),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupSpec::Cyclic(k) => write!(f, "cyclic-{k}"),
            GroupSpec::BinaryDihedral(k) => write!(f, "binary-dihedral-{k}"),
            GroupSpec::BinaryTetrahedral => write!(f, "binary-tetrahedral"),
            GroupSpec::BinaryOctahedral => write!(f, "binary-octahedral"),
            GroupSpec::BinaryIcosahedral => write!(f, "binary-icosahedral"),
        }
    }
}

/// Unit quaternion standing for an SU(2) element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn mul(&self, o: &Quaternion) -> Quaternion {
        Quaternion {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }

    /// Inverse of a unit quaternion.
    pub fn conj(&self) -> Quaternion {
        Quaternion {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn approx_eq(&self, o: &Quaternion, eps: f64) -> bool {
        (self.w - o.w).abs() < eps
            && (self.x - o.x).abs() < eps
            && (self.y - o.y).abs() < eps
            && (self.z - o.z).abs() < eps
    }

    /// The corresponding SU(2) matrix `[[w+xi, y+zi], [-y+zi, w-xi]]`.
    pub fn as_su2_matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [
                Complex64::new(self.w, self.x),
                Complex64::new(self.y, self.z),
            ],
            [
                Complex64::new(-self.y, self.z),
                Complex64::new(self.w, -self.x),
            ],
        ]
    }

    /// Trace of the SU(2) matrix: the defining character.
    pub fn trace(&self) -> f64 {
        2.0 * self.w
    }
}

fn generators(spec: GroupSpec) -> Vec<Quaternion> {
    use std::f64::consts::PI;
    match spec {
        GroupSpec::Cyclic(k) => {
            let theta = 2.0 * PI / f64::from(k);
            vec![Quaternion::new(theta.cos(), theta.sin(), 0.0, 0.0)]
        }
        GroupSpec::BinaryDihedral(k) => {
            let theta = PI / f64::from(k);
            vec![
                Quaternion::new(theta.cos(), theta.sin(), 0.0, 0.0),
                Quaternion::new(0.0, 0.0, 1.0, 0.0),
            ]
        }
        GroupSpec::BinaryTetrahedral => vec![
            Quaternion::new(0.0, 1.0, 0.0, 0.0),
            Quaternion::new(0.5, 0.5, 0.5, 0.5),
        ],
        GroupSpec::BinaryOctahedral => {
            let r = 0.5f64.sqrt();
            vec![
                Quaternion::new(r, r, 0.0, 0.0),
                Quaternion::new(0.5, 0.5, 0.5, 0.5),
            ]
        }
        GroupSpec::BinaryIcosahedral => {
            // 72-degree rotation about a vertex axis of the icosahedron with
            // vertices at cyclic permutations of (0, ±1, ±phi), plus a
            // half-turn about z (the two axes are not perpendicular).
            let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
            let theta = PI / 5.0;
            let norm = (1.0 + phi * phi).sqrt();
            let s = theta.sin();
            vec![
                Quaternion::new(theta.cos(), 0.0, s / norm, s * phi / norm),
                Quaternion::new(0.0, 0.0, 0.0, 1.0),
            ]
        }
    }
}

/// Generate the group by closing the generators under multiplication.
/// Exactly `expected_order` distinct elements must appear.
pub fn enumerate_group(spec: GroupSpec) -> Result<Vec<Quaternion>, McKayError> {
    spec.validate()?;
    let expected = spec.expected_order();
    let gens = generators(spec);
    let mut elements = vec![Quaternion::ONE];
    let mut frontier = vec![Quaternion::ONE];
    while let Some(q) = frontier.pop() {
        for g in &gens {
            let next = q.mul(g);
            if !elements.iter().any(|e| e.approx_eq(&next, ELEMENT_EPS)) {
                if elements.len() >= 2 * expected {
                    return Err(McKayError::ClosureFailed {
                        expected,
                        got: elements.len(),
                    });
                }
                elements.push(next);
                frontier.push(next);
            }
        }
    }
    if elements.len() != expected {
        return Err(McKayError::ClosureFailed {
            expected,
            got: elements.len(),
        });
    }
    Ok(elements)
}

fn find_element(elements: &[Quaternion], q: &Quaternion) -> Option<usize> {
    elements.iter().position(|e| e.approx_eq(q, ELEMENT_EPS))
}

/// Conjugacy classes as index sets, identity class first, the rest ordered
/// by (size, representative) for determinism.
fn conjugacy_classes(elements: &[Quaternion]) -> Result<(Vec<Vec<usize>>, Vec<usize>), McKayError> {
    let n = elements.len();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if class_of[start] != usize::MAX {
            continue;
        }
        let mut members = Vec::new();
        for g in elements {
            let conj = g.mul(&elements[start]).mul(&g.conj());
            let idx = find_element(elements, &conj).ok_or(McKayError::ClosureFailed {
                expected: n,
                got: n,
            })?;
            if class_of[idx] == usize::MAX {
                class_of[idx] = usize::MAX - 1; // provisional
                members.push(idx);
            }
        }
        let id = classes.len();
        for &m in &members {
            class_of[m] = id;
        }
        classes.push(members);
    }
    // deterministic order: identity first, then by (size, min rounded rep)
    let identity_class = class_of[find_element(elements, &Quaternion::ONE).unwrap()];
    let key = |class: &Vec<usize>| {
        let rep = class
            .iter()
            .map(|&i| {
                let q = elements[i];
                [
                    (q.w * 1e6).round() as i64,
                    (q.x * 1e6).round() as i64,
                    (q.y * 1e6).round() as i64,
                    (q.z * 1e6).round() as i64,
                ]
            })
            .min()
            .unwrap();
        (class.len(), rep)
    };
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&c| (c != identity_class, key(&classes[c])));
    let mut new_classes = Vec::with_capacity(classes.len());
    let mut new_class_of = vec![0usize; n];
    for (new_id, &old_id) in order.iter().enumerate() {
        for &m in &classes[old_id] {
            new_class_of[m] = new_id;
        }
        new_classes.push(classes[old_id].clone());
    }
    Ok((new_classes, new_class_of))
}

/// Full character data of a finite subgroup of SU(2).
#[derive(Clone, Debug)]
pub struct GroupData {
    pub spec: GroupSpec,
    pub elements: Vec<Quaternion>,
    pub classes: Vec<Vec<usize>>,
    pub class_sizes: Vec<usize>,
    /// Rows are irreps (trivial first), columns are classes (identity first).
    pub char_table: Vec<Vec<Complex64>>,
    pub dims: Vec<u32>,
    /// Trace of the defining 2-dimensional representation per class.
    pub defining_char: Vec<f64>,
}

impl GroupData {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Enumerate, classify, and compute the character table.
    pub fn build(spec: GroupSpec) -> Result<Self, McKayError> {
        let elements = enumerate_group(spec)?;
        character_table(spec, elements)
    }
}

/// Burnside class-sum character table of a closed SU(2) subgroup.
pub fn character_table(
    spec: GroupSpec,
    elements: Vec<Quaternion>,
) -> Result<GroupData, McKayError> {
    let order = elements.len();
    let (classes, class_of) = conjugacy_classes(&elements)?;
    let k = classes.len();
    let class_sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();

    // structure constants: counts[i][j][l] = #{(x,y) in K_i x K_j : xy in K_l}
    // = |K_l| * c_{ij}^l
    let mut counts = vec![vec![vec![0u64; k]; k]; k];
    for (xi, x) in elements.iter().enumerate() {
        for (yi, y) in elements.iter().enumerate() {
            let prod = x.mul(y);
            let pi = find_element(&elements, &prod).ok_or(McKayError::ClosureFailed {
                expected: order,
                got: order,
            })?;
            counts[class_of[xi]][class_of[yi]][class_of[pi]] += 1;
        }
    }
    let mut structure = vec![vec![vec![0f64; k]; k]; k];
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let total = counts[i][j][l];
                let size = class_sizes[l] as u64;
                if total % size != 0 {
                    return Err(McKayError::NonIntegral {
                        what: "class structure constant",
                        value: total as f64 / size as f64,
                    });
                }
                structure[i][j][l] = (total / size) as f64;
            }
        }
    }

    let identity_class = 0usize;
    let mut rng = 0x243F6A8885A308D3u64; // deterministic seed
    for _attempt in 0..MAX_EIGEN_ATTEMPTS {
        // random real combination of the commuting structure matrices
        let mut m = vec![vec![0f64; k]; k];
        for i in 0..k {
            let r = next_uniform(&mut rng);
            for (row, mrow) in m.iter_mut().enumerate() {
                for (col, cell) in mrow.iter_mut().enumerate() {
                    // (A_i)_{jl} = c_{ij}^l, so A_i omega = omega_i * omega for
                    // the vectors omega_j = |K_j| chi(g_j) / chi(1)
                    *cell += r * structure[i][row][col];
                }
            }
        }
        let Some(rows) = eigen_rows(&m, k) else {
            continue;
        };
        // rows are the normalized eigenvectors omega with omega[identity] = 1;
        // recover dimensions and characters.
        let mut table: Vec<(u32, Vec<Complex64>)> = Vec::with_capacity(k);
        let mut ok = true;
        for omega in rows {
            let norm: f64 = (0..k)
                .map(|j| omega[j].norm_sqr() / class_sizes[j] as f64)
                .sum();
            let dim_f = (order as f64 / norm).sqrt();
            if (dim_f - dim_f.round()).abs() > ROUNDING_EPS || dim_f.round() < 1.0 {
                ok = false;
                break;
            }
            let dim = dim_f.round() as u32;
            let chi: Vec<Complex64> = (0..k)
                .map(|j| omega[j] * f64::from(dim) / class_sizes[j] as f64)
                .collect();
            table.push((dim, chi));
        }
        if !ok {
            continue;
        }
        if table
            .iter()
            .map(|(d, _)| u64::from(*d) * u64::from(*d))
            .sum::<u64>()
            != order as u64
        {
            continue;
        }
        // row orthogonality
        let orthogonal = (0..k).all(|s| {
            (0..k).all(|t| {
                let dot: Complex64 = (0..k)
                    .map(|j| table[s].1[j] * table[t].1[j].conj() * class_sizes[j] as f64)
                    .sum();
                let expect = if s == t { order as f64 } else { 0.0 };
                (dot / order as f64 - expect / order as f64).norm() < ROUNDING_EPS
            })
        });
        if !orthogonal {
            continue;
        }
        // order rows: trivial first, then by (dim, rounded characters)
        let trivial = table
            .iter()
            .position(|(_, chi)| chi.iter().all(|c| (c - 1.0).norm() < ROUNDING_EPS));
        let Some(trivial) = trivial else {
            continue;
        };
        let mut rest: Vec<(u32, Vec<Complex64>)> = Vec::new();
        for (i, row) in table.iter().enumerate() {
            if i != trivial {
                rest.push(row.clone());
            }
        }
        rest.sort_by_key(|(d, chi)| {
            (
                *d,
                chi.iter()
                    .map(|c| ((c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64))
                    .collect::<Vec<_>>(),
            )
        });
        let mut ordered = vec![table[trivial].clone()];
        ordered.extend(rest);
        let dims: Vec<u32> = ordered.iter().map(|(d, _)| *d).collect();
        let char_table: Vec<Vec<Complex64>> = ordered.into_iter().map(|(_, chi)| chi).collect();
        debug_assert_eq!(dims[identity_class], 1);
        let defining_char: Vec<f64> = classes
            .iter()
            .map(|class| elements[class[0]].trace())
            .collect();
        return Ok(GroupData {
            spec,
            elements,
            classes,
            class_sizes,
            char_table,
            dims,
            defining_char,
        });
    }
    Err(McKayError::EigenDegeneracy)
}

fn next_uniform(state: &mut u64) -> f64 {
    // xorshift64*
    let mut x = *state;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    *state = x;
    let bits = x.wrapping_mul(0x2545F4914F6CDD1D);
    (bits >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
}

/// Simultaneous eigenvectors of the class-algebra combination, normalized so
/// the identity-class component is 1. `None` when eigenvalues are too close
/// or an eigenvector fails to resolve (caller retries).
fn eigen_rows(m: &[Vec<f64>], k: usize) -> Option<Vec<Vec<Complex64>>> {
    // scale to O(1) entries for conditioning
    let scale = m
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(1.0f64, f64::max);
    let scaled: Vec<Vec<f64>> = m
        .iter()
        .map(|row| row.iter().map(|v| v / scale).collect())
        .collect();
    let poly = char_poly(&scaled);
    let roots = durand_kerner(&poly)?;
    // eigenvalues must be pairwise separated
    for i in 0..k {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() < 1e-7 {
                return None;
            }
        }
    }
    let mut rows = Vec::with_capacity(k);
    for &lambda in &roots {
        let v = null_vector(&scaled, lambda)?;
        // residual check
        let mut residual = 0.0f64;
        for r in 0..k {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..k {
                acc += scaled[r][c] * v[c];
            }
            residual = residual.max((acc - lambda * v[r]).norm());
        }
        let vnorm = v.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        if residual > 1e-8 * vnorm.max(1.0) {
            return None;
        }
        // normalize at the identity class (index 0)
        if v[0].norm() < 1e-9 * vnorm {
            return None;
        }
        let inv = 1.0 / v[0];
        rows.push(v.iter().map(|c| c * inv).collect());
    }
    Some(rows)
}

/// Monic characteristic polynomial coefficients `[c_1, ..., c_k]` of a real
/// matrix (Faddeev-LeVerrier): `p(z) = z^k + c_1 z^{k-1} + ... + c_k`.
fn char_poly(m: &[Vec<f64>]) -> Vec<f64> {
    let k = m.len();
    let mut coeffs = Vec::with_capacity(k);
    let mut aux = m.to_vec();
    for step in 1..=k {
        let trace: f64 = (0..k).map(|i| aux[i][i]).sum();
        let c = -trace / step as f64;
        coeffs.push(c);
        if step == k {
            break;
        }
        // aux = M * (aux + c * I)
        let mut shifted = aux.clone();
        for i in 0..k {
            shifted[i][i] += c;
        }
        let mut next = vec![vec![0f64; k]; k];
        for (r, next_row) in next.iter_mut().enumerate() {
            for (c2, cell) in next_row.iter_mut().enumerate() {
                *cell = (0..k).map(|l| m[r][l] * shifted[l][c2]).sum();
            }
        }
        aux = next;
    }
    coeffs
}

/// All complex roots of a monic real polynomial by Durand-Kerner iteration.
fn durand_kerner(coeffs: &[f64]) -> Option<Vec<Complex64>> {
    let k = coeffs.len();
    if k == 0 {
        return Some(Vec::new());
    }
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for &c in coeffs {
            acc = acc * z + c;
        }
        acc
    };
    // radius bound for the roots of a monic polynomial
    let radius = 1.0 + coeffs.iter().map(|c| c.abs()).fold(0.0f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..k)
        .map(|i| radius * seed.powu(i as u32 + 1) / seed.norm().powi(i as i32 + 1) * 0.9)
        .collect();
    for _ in 0..600 {
        let mut max_step = 0.0f64;
        for i in 0..k {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..k {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-300 {
                return None;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-13 {
            return Some(roots);
        }
    }
    None
}

/// One nullspace vector of `M - lambda I` by complex Gaussian elimination.
fn null_vector(m: &[Vec<f64>], lambda: Complex64) -> Option<Vec<Complex64>> {
    let k = m.len();
    let mut a: Vec<Vec<Complex64>> = (0..k)
        .map(|r| {
            (0..k)
                .map(|c| {
                    let mut v = Complex64::new(m[r][c], 0.0);
                    if r == c {
                        v -= lambda;
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; k];
    let mut row = 0;
    for col in 0..k {
        let (piv, piv_norm) = (row..k)
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if piv_norm < 1e-9 {
            continue; // free column
        }
        a.swap(row, piv);
        let p = a[row][col];
        for r in 0..k {
            if r != row {
                let f = a[r][col] / p;
                if f.norm() > 0.0 {
                    for c in col..k {
                        let sub = f * a[row][c];
                        a[r][c] -= sub;
                    }
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == k {
            break;
        }
    }
    let free = (0..k).rev().find(|&c| pivot_of_col[c].is_none())?;
    let mut v = vec![Complex64::new(0.0, 0.0); k];
    v[free] = Complex64::new(1.0, 0.0);
    for col in 0..k {
        if let Some(r) = pivot_of_col[col] {
            v[col] = -a[r][free] / a[r][col];
        }
    }
    Some(v)
}

/// McKay graph: nodes are irreps, edge multiplicities are the coefficients of
/// each irrep in `defining tensor irrep`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McKayGraph {
    pub adjacency: Vec<Vec<u32>>,
    pub node_dims: Vec<u32>,
}

/// Worst rounding deviation alongside the graph, for tolerance-margin tests.
#[derive(Clone, Debug)]
pub struct McKayGraphReport {
    pub graph: McKayGraph,
    pub max_rounding_deviation: f64,
}

pub fn mckay_graph(data: &GroupData) -> Result<McKayGraphReport, McKayError> {
    let k = data.classes.len();
    let order = data.order() as f64;
    let mut adjacency = vec![vec![0u32; k]; k];
    let mut max_dev = 0.0f64;
    for j in 0..k {
        for l in 0..k {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..k {
                acc += data.char_table[j][c]
                    * data.defining_char[c]
                    * data.char_table[l][c].conj()
                    * data.class_sizes[c] as f64;
            }
            let m = acc / order;
            let rounded = m.re.round();
            let dev = (m - rounded).norm();
            max_dev = max_dev.max(dev);
            if dev > ROUNDING_EPS || rounded < 0.0 {
                return Err(McKayError::NonIntegral {
                    what: "McKay multiplicity",
                    value: m.re,
                });
            }
            adjacency[j][l] = rounded as u32;
        }
    }
    for j in 0..k {
        for l in 0..k {
            if adjacency[j][l] != adjacency[l][j] {
                return Err(McKayError::TableInconsistent(format!(
                    "McKay adjacency not symmetric at ({j}, {l})"
                )));
            }
        }
    }
    Ok(McKayGraphReport {
        graph: McKayGraph {
            adjacency,
            node_dims: data.dims.clone(),
        },
        max_rounding_deviation: max_dev,
    })
}

/// Result of matching a McKay graph to an affine ADE diagram: the type and
/// the node permutation (graph node `j` is affine node `permutation[j]`),
/// with the trivial representation pinned to the affine node 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdeMatch {
    pub ade: AdeType,
    pub permutation: Vec<usize>,
}

/// Find the affine ADE diagram whose Cartan matrix is `2I - adjacency`, with
/// node dimensions carried onto the marks. Brute-force backtracking over node
/// assignments (at most 9 nodes).
pub fn match_ade(graph: &McKayGraph) -> Result<AdeMatch, McKayError> {
    let nodes = graph.adjacency.len();
    let mut candidates: Vec<AdeType> = Vec::new();
    if nodes >= 2 {
        candidates.push(AdeType::A(nodes as u32 - 1));
    }
    if nodes >= 5 {
        candidates.push(AdeType::D(nodes as u32 - 1));
    }
    match nodes {
        7 => candidates.push(AdeType::E6),
        8 => candidates.push(AdeType::E7),
        9 => candidates.push(AdeType::E8),
        _ => {}
    }
    for ade in candidates {
        let alg = AffineAlgebra::new(ade).expect("valid candidate type");
        if let Some(perm) = search_permutation(graph, &alg) {
            return Ok(AdeMatch {
                ade,
                permutation: perm,
            });
        }
    }
    Err(McKayError::NoAdeMatch)
}

fn search_permutation(graph: &McKayGraph, alg: &AffineAlgebra) -> Option<Vec<usize>> {
    let nodes = graph.adjacency.len();
    let marks = alg.marks();
    if nodes != alg.node_count() {
        return None;
    }
    // dims must match marks as multisets, and the trivial node must carry
    // mark 1 at the affine node
    if graph.node_dims[0] != 1 || marks[0] != 1 {
        return None;
    }
    let mut assigned = vec![usize::MAX; nodes];
    let mut used = vec![false; nodes];
    assigned[0] = 0;
    used[0] = true;
    if backtrack(graph, alg, marks, &mut assigned, &mut used, 1) {
        Some(assigned)
    } else {
        None
    }
}

fn backtrack(
    graph: &McKayGraph,
    alg: &AffineAlgebra,
    marks: &[u64],
    assigned: &mut Vec<usize>,
    used: &mut Vec<bool>,
    node: usize,
) -> bool {
    let nodes = graph.adjacency.len();
    if node == nodes {
        return true;
    }
    for target in 0..nodes {
        if used[target] || u64::from(graph.node_dims[node]) != marks[target] {
            continue;
        }
        // adjacency must agree with all previously assigned nodes; the affine
        // Cartan matrix is 2I - adjacency
        let consistent = (0..node).all(|prev| {
            let want = -alg.cartan()[assigned[prev]][target];
            i64::from(graph.adjacency[node][prev]) == want
        }) && i64::from(graph.adjacency[node][node])
            == 2 - alg.cartan()[target][target];
        if !consistent {
            continue;
        }
        assigned[node] = target;
        used[target] = true;
        if backtrack(graph, alg, marks, assigned, used, node + 1) {
            return true;
        }
        assigned[node] = usize::MAX;
        used[target] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_two_is_the_center() {
        let elements = enumerate_group(GroupSpec::Cyclic(2)).unwrap();
        assert_eq!(elements.len(), 2);
        assert!(elements
            .iter()
            .any(|q| q.approx_eq(&Quaternion::new(-1.0, 0.0, 0.0, 0.0), 1e-9)));
    }

    #[test]
    fn orders_by_family() {
        assert_eq!(enumerate_group(GroupSpec::Cyclic(5)).unwrap().len(), 5);
        assert_eq!(
            enumerate_group(GroupSpec::BinaryDihedral(3)).unwrap().len(),
            12
        );
        assert_eq!(
            enumerate_group(GroupSpec::BinaryTetrahedral).unwrap().len(),
            24
        );
        assert_eq!(
            enumerate_group(GroupSpec::BinaryOctahedral).unwrap().len(),
            48
        );
        assert_eq!(
            enumerate_group(GroupSpec::BinaryIcosahedral).unwrap().len(),
            120
        );
    }

    #[test]
    fn closure_under_product_and_inverse() {
        for spec in [GroupSpec::BinaryDihedral(2), GroupSpec::BinaryTetrahedral] {
            let elements = enumerate_group(spec).unwrap();
            for a in &elements {
                assert!(find_element(&elements, &a.conj()).is_some());
                for b in &elements {
                    assert!(find_element(&elements, &a.mul(b)).is_some());
                }
            }
        }
    }

    #[test]
    fn su2_matrix_is_unitary() {
        let elements = enumerate_group(GroupSpec::BinaryOctahedral).unwrap();
        for q in &elements {
            let m = q.as_su2_matrix();
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            assert!((det - 1.0).norm() < 1e-9);
            // rows orthonormal
            let r0: f64 = m[0][0].norm_sqr() + m[0][1].norm_sqr();
            assert!((r0 - 1.0).abs() < 1e-9);
            let dot = m[0][0] * m[1][0].conj() + m[0][1] * m[1][1].conj();
            assert!(dot.norm() < 1e-9);
        }
    }

    #[test]
    fn abelian_groups_have_linear_characters() {
        for k in [2u32, 3, 7] {
            let data = GroupData::build(GroupSpec::Cyclic(k)).unwrap();
            assert_eq!(data.dims.len(), k as usize);
            assert!(data.dims.iter().all(|&d| d == 1));
        }
    }

    #[test]
    fn icosahedral_dimensions() {
        let data = GroupData::build(GroupSpec::BinaryIcosahedral).unwrap();
        let mut dims = data.dims.clone();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 2, 2, 3, 3, 4, 4, 5, 6]);
        let sum: u64 = data.dims.iter().map(|&d| u64::from(d) * u64::from(d)).sum();
        assert_eq!(sum, 120);
    }

    #[test]
    fn quaternion_group_matches_d4() {
        let data = GroupData::build(GroupSpec::BinaryDihedral(2)).unwrap();
        assert_eq!(data.order(), 8);
        let report = mckay_graph(&data).unwrap();
        let matched = match_ade(&report.graph).unwrap();
        assert_eq!(matched.ade, AdeType::D(4));
    }

    #[test]
    fn cyclic_two_doubled_edge() {
        let data = GroupData::build(GroupSpec::Cyclic(2)).unwrap();
        let report = mckay_graph(&data).unwrap();
        assert_eq!(report.graph.adjacency, vec![vec![0, 2], vec![2, 0]]);
        let matched = match_ade(&report.graph).unwrap();
        assert_eq!(matched.ade, AdeType::A(1));
    }

    #[test]
    fn exceptional_matches() {
        for (spec, expect) in [
            (GroupSpec::BinaryTetrahedral, AdeType::E6),
            (GroupSpec::BinaryOctahedral, AdeType::E7),
            (GroupSpec::BinaryIcosahedral, AdeType::E8),
        ] {
            let data = GroupData::build(spec).unwrap();
            let report = mckay_graph(&data).unwrap();
            assert!(report.max_rounding_deviation < ROUNDING_EPS);
            let matched = match_ade(&report.graph).unwrap();
            assert_eq!(matched.ade, expect, "{spec}");
            // dims permute onto the marks
            let alg = AffineAlgebra::new(expect).unwrap();
            for (node, &target) in matched.permutation.iter().enumerate() {
                assert_eq!(u64::from(report.graph.node_dims[node]), alg.marks()[target]);
            }
        }
    }

    #[test]
    fn cyclic_family_matches_a_series() {
        for k in 2..=6u32 {
            let data = GroupData::build(GroupSpec::Cyclic(k)).unwrap();
            let report = mckay_graph(&data).unwrap();
            let matched = match_ade(&report.graph).unwrap();
            assert_eq!(matched.ade, AdeType::A(k - 1), "cyclic({k})");
        }
    }

    #[test]
    fn adjacency_row_identity() {
        // sum_l m_{jl} d_l = 2 d_j since the defining rep is 2-dimensional
        for spec in [
            GroupSpec::Cyclic(4),
            GroupSpec::BinaryDihedral(3),
            GroupSpec::BinaryTetrahedral,
        ] {
            let data = GroupData::build(spec).unwrap();
            let report = mckay_graph(&data).unwrap();
            let g = &report.graph;
            for j in 0..g.node_dims.len() {
                let total: u64 = (0..g.node_dims.len())
                    .map(|l| u64::from(g.adjacency[j][l]) * u64::from(g.node_dims[l]))
                    .sum();
                assert_eq!(total, 2 * u64::from(g.node_dims[j]));
            }
        }
    }

    #[test]
    fn trivial_group_has_no_match() {
        let data = GroupData::build(GroupSpec::Cyclic(1)).unwrap();
        let report = mckay_graph(&data).unwrap();
        assert!(matches!(
            match_ade(&report.graph),
            Err(McKayError::NoAdeMatch)
        ));
    }

    #[test]
    fn spec_validation_and_parse() {
        assert!(GroupSpec::BinaryDihedral(1).validate().is_err());
        assert!(GroupSpec::Cyclic(0).validate().is_err());
        assert_eq!(
            GroupSpec::parse("binary-icosahedral").unwrap(),
            GroupSpec::BinaryIcosahedral
        );
        assert_eq!(GroupSpec::parse("cyclic-4").unwrap(), GroupSpec::Cyclic(4));
        assert_eq!(
            GroupSpec::parse("2T").unwrap(),
            GroupSpec::BinaryTetrahedral
        );
        assert!(GroupSpec::parse("dodecahedral").is_err());
    }
}
