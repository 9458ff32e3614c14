//! Fock space of colored super-partitions and its operator calculus.
//!
//! Basis vectors are labeled by multisets of parts `(i, a)` where `i >= 1` is
//! the part size and `a` indexes a "color" carrying a degree in `0..=4`.
//! Even-degree colors are bosonic (parts repeat freely), odd-degree colors are
//! fermionic (parts are distinct, with Koszul signs from a fixed total order
//! on `(i, a)` pairs). A state is bigraded by
//!
//! - weight:  `sum i`            (the q-grading), and
//! - degree:  `sum (2i - 2 + deg a)`  (the t-grading).
//!
//! Creation is free; annihilation removes a part and multiplies by a
//! constant `c_i` (default `c_i = i`), making `[annihilate, create]` act as
//! `c_i` times the identity color- and mode-wise, with anticommutators in the
//! fermionic directions. The graded character of the whole space, computed by
//! direct enumeration of states, must reproduce the product series of
//! [`crate::goettsche`] for the matching Betti vector; that comparison is the
//! module's central cross-check and is deliberately not computed from the
//! product formula here.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::goettsche::SurfaceTopology;
use crate::series::BiSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FockError {
    /// Color degrees must lie in 0..=4.
    InvalidColorDegree { color: usize, degree: u8 },
    /// Part sizes must be >= 1.
    InvalidPartSize,
    /// Color index out of range for the color list.
    UnknownColor { color: usize },
    /// Part parity does not match its color.
    ParityMismatch { color: usize },
    /// Repeated fermionic part.
    FermionicRepeat,
    /// Commutator constants must be nonzero.
    ZeroConstant { index: usize },
    /// Mode exceeds the supplied constants table.
    ConstantOutOfRange { mode: u32, table_len: usize },
}

impl fmt::Display for FockError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FockError::InvalidColorDegree { color, degree } => {
                write!(f, "color {color} has degree {degree}, expected 0..=4")
            }
            FockError::InvalidPartSize => write!(f, "part sizes must be >= 1"),
            FockError::UnknownColor { color } => write!(f, "color index {color} out of range"),
            FockError::ParityMismatch { color } => {
                write!(f, "part stored with the wrong parity for color {color}")
            }
            FockError::FermionicRepeat => write!(f, "fermionic part repeated"),
            FockError::ZeroConstant { index } => {
                write!(f, "commutator constant c_{index} must be nonzero")
            }
            FockError::ConstantOutOfRange { mode, table_len } => {
                write!(f, "c_{mode} requested but table has {table_len} entries")
            }
        }
    }
}

impl std::error::Error for FockError {}

/// A list of colors, each with a degree in `0..=4`; the number of colors of
/// degree `i` matches `b_i` of an associated Betti vector. Only the count per
/// degree matters, so colors are identified by their index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorSpec {
    degrees: Vec<u8>,
}

impl ColorSpec {
    pub fn new(degrees: Vec<u8>) -> Result<Self, FockError> {
        for (color, &degree) in degrees.iter().enumerate() {
            if degree > 4 {
                return Err(FockError::InvalidColorDegree { color, degree });
            }
        }
        Ok(ColorSpec { degrees })
    }

    /// One color per homology generator, ordered by degree.
    pub fn from_topology(topo: &SurfaceTopology) -> Self {
        let mut degrees = Vec::new();
        for (deg, &count) in topo.betti().iter().enumerate() {
            degrees.extend(std::iter::repeat_n(deg as u8, count as usize));
        }
        ColorSpec { degrees }
    }

    /// Betti vector recovered from the color degrees.
    pub fn topology(&self) -> SurfaceTopology {
        let mut betti = [0u32; 5];
        for &d in &self.degrees {
            betti[d as usize] += 1;
        }
        SurfaceTopology::new(betti)
    }

    pub fn color_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, color: usize) -> u8 {
        self.degrees[color]
    }

    pub fn parity(&self, color: usize) -> u8 {
        self.degrees[color] % 2
    }

    pub fn is_fermionic(&self, color: usize) -> bool {
        self.parity(color) == 1
    }
}

/// One basis vector: bosonic parts as a sorted multiset, fermionic parts as a
/// sorted set of distinct pairs. Parts are `(size, color)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState {
    bosonic: Vec<(u32, usize)>,
    fermionic: Vec<(u32, usize)>,
}

impl FockState {
    pub fn vacuum() -> Self {
        FockState {
            bosonic: Vec::new(),
            fermionic: Vec::new(),
        }
    }

    /// Canonicalize and validate parts against the color list.
    pub fn new(
        spec: &ColorSpec,
        bosonic: Vec<(u32, usize)>,
        fermionic: Vec<(u32, usize)>,
    ) -> Result<Self, FockError> {
        let mut bosonic = bosonic;
        let mut fermionic = fermionic;
        for &(i, a) in bosonic.iter().chain(fermionic.iter()) {
            if i == 0 {
                return Err(FockError::InvalidPartSize);
            }
            if a >= spec.color_count() {
                return Err(FockError::UnknownColor { color: a });
            }
        }
        if bosonic.iter().any(|&(_, a)| spec.is_fermionic(a)) {
            return Err(FockError::ParityMismatch {
                color: bosonic
                    .iter()
                    .find(|&&(_, a)| spec.is_fermionic(a))
                    .unwrap()
                    .1,
            });
        }
        if fermionic.iter().any(|&(_, a)| !spec.is_fermionic(a)) {
            return Err(FockError::ParityMismatch {
                color: fermionic
                    .iter()
                    .find(|&&(_, a)| !spec.is_fermionic(a))
                    .unwrap()
                    .1,
            });
        }
        bosonic.sort_unstable();
        fermionic.sort_unstable();
        if fermionic.windows(2).any(|w| w[0] == w[1]) {
            return Err(FockError::FermionicRepeat);
        }
        Ok(FockState { bosonic, fermionic })
    }

    pub fn bosonic_parts(&self) -> &[(u32, usize)] {
        &self.bosonic
    }

    pub fn fermionic_parts(&self) -> &[(u32, usize)] {
        &self.fermionic
    }

    /// Total size of all parts: the q-grading ("number of points").
    pub fn weight(&self) -> u32 {
        self.bosonic
            .iter()
            .chain(self.fermionic.iter())
            .map(|&(i, _)| i)
            .sum()
    }

    /// `sum (2i - 2 + deg a)` over all parts: the t-grading.
    pub fn cohomological_degree(&self, spec: &ColorSpec) -> u32 {
        self.bosonic
            .iter()
            .chain(self.fermionic.iter())
            .map(|&(i, a)| 2 * i - 2 + u32::from(spec.degree(a)))
            .sum()
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bosonic.is_empty() && self.fermionic.is_empty() {
            return write!(f, "|0>");
        }
        let parts: Vec<String> = self
            .bosonic
            .iter()
            .map(|&(i, a)| format!("b{a}({i})"))
            .chain(self.fermionic.iter().map(|&(i, a)| format!("f{a}({i})")))
            .collect();
        write!(f, "|{}>", parts.join(" "))
    }
}

/// Finite linear combination of basis states with exact rational
/// coefficients; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FockVector {
    terms: BTreeMap<FockState, BigRational>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector::default()
    }

    pub fn basis(state: FockState) -> Self {
        let mut v = FockVector::zero();
        v.add_term(state, BigRational::one());
        v
    }

    pub fn vacuum() -> Self {
        Self::basis(FockState::vacuum())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, state: &FockState) -> BigRational {
        self.terms
            .get(state)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockState, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, state: FockState, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(state) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (state, coeff) in &other.terms {
            out.add_term(state.clone(), coeff.clone());
        }
        out
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return FockVector::zero();
        }
        FockVector {
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (s.clone(), c * factor))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }
}

/// The constants `c_i` in `[annihilate_i, create_i] = c_i`; any nonzero
/// choice satisfies the algebra, the default is `c_i = i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommutatorConstants {
    Default,
    Table(Vec<i64>),
}

impl CommutatorConstants {
    pub fn table(values: Vec<i64>) -> Result<Self, FockError> {
        for (idx, &v) in values.iter().enumerate() {
            if v == 0 {
                return Err(FockError::ZeroConstant { index: idx + 1 });
            }
        }
        Ok(CommutatorConstants::Table(values))
    }

    /// `c_i` for `i >= 1`.
    pub fn value(&self, i: u32) -> Result<i64, FockError> {
        match self {
            CommutatorConstants::Default => Ok(i64::from(i)),
            CommutatorConstants::Table(t) => {
                t.get((i - 1) as usize)
                    .copied()
                    .ok_or(FockError::ConstantOutOfRange {
                        mode: i,
                        table_len: t.len(),
                    })
            }
        }
    }
}

/// Apply the creation operator for part `(i, a)` to a single basis state.
/// Returns the resulting state and a sign, or `None` when a fermionic part
/// would repeat.
fn create_on_state(
    spec: &ColorSpec,
    color: usize,
    mode: u32,
    state: &FockState,
) -> Option<(FockState, i64)> {
    let part = (mode, color);
    if spec.is_fermionic(color) {
        match state.fermionic.binary_search(&part) {
            Ok(_) => None,
            Err(pos) => {
                let mut fermionic = state.fermionic.clone();
                fermionic.insert(pos, part);
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                Some((
                    FockState {
                        bosonic: state.bosonic.clone(),
                        fermionic,
                    },
                    sign,
                ))
            }
        }
    } else {
        let mut bosonic = state.bosonic.clone();
        let pos = bosonic.partition_point(|&p| p <= part);
        bosonic.insert(pos, part);
        Some((
            FockState {
                bosonic,
                fermionic: state.fermionic.clone(),
            },
            1,
        ))
    }
}

/// Apply the annihilation operator for part `(i, a)`: removes one copy and
/// multiplies by `c_i` (times the multiplicity in the bosonic case, times the
/// Koszul sign in the fermionic case). `None` when the part is absent.
fn annihilate_on_state(
    spec: &ColorSpec,
    consts: &CommutatorConstants,
    color: usize,
    mode: u32,
    state: &FockState,
) -> Option<(FockState, i64)> {
    let part = (mode, color);
    let c = consts
        .value(mode)
        .expect("commutator constant available for mode");
    if spec.is_fermionic(color) {
        match state.fermionic.binary_search(&part) {
            Err(_) => None,
            Ok(pos) => {
                let mut fermionic = state.fermionic.clone();
                fermionic.remove(pos);
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                Some((
                    FockState {
                        bosonic: state.bosonic.clone(),
                        fermionic,
                    },
                    sign * c,
                ))
            }
        }
    } else {
        match state.bosonic.binary_search(&part) {
            Err(_) => None,
            Ok(pos) => {
                let multiplicity = state.bosonic.iter().filter(|&&p| p == part).count() as i64;
                let mut bosonic = state.bosonic.clone();
                bosonic.remove(pos);
                Some((
                    FockState {
                        bosonic,
                        fermionic: state.fermionic.clone(),
                    },
                    multiplicity * c,
                ))
            }
        }
    }
}

/// Creation operator on a vector.
pub fn create(spec: &ColorSpec, color: usize, mode: u32, v: &FockVector) -> FockVector {
    assert!(mode >= 1, "modes start at 1");
    let mut out = FockVector::zero();
    for (state, coeff) in v.terms() {
        if let Some((new_state, sign)) = create_on_state(spec, color, mode, state) {
            out.add_term(new_state, coeff * BigRational::from(BigInt::from(sign)));
        }
    }
    out
}

/// Annihilation operator on a vector.
pub fn annihilate(
    spec: &ColorSpec,
    consts: &CommutatorConstants,
    color: usize,
    mode: u32,
    v: &FockVector,
) -> FockVector {
    assert!(mode >= 1, "modes start at 1");
    let mut out = FockVector::zero();
    for (state, coeff) in v.terms() {
        if let Some((new_state, factor)) = annihilate_on_state(spec, consts, color, mode, state) {
            out.add_term(new_state, coeff * BigRational::from(BigInt::from(factor)));
        }
    }
    out
}

/// A creation or annihilation generator, for relation checking.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FockOperator {
    Create { color: usize, mode: u32 },
    Annihilate { color: usize, mode: u32 },
}

impl FockOperator {
    pub fn color(&self) -> usize {
        match *self {
            FockOperator::Create { color, .. } | FockOperator::Annihilate { color, .. } => color,
        }
    }

    pub fn mode(&self) -> u32 {
        match *self {
            FockOperator::Create { mode, .. } | FockOperator::Annihilate { mode, .. } => mode,
        }
    }

    pub fn apply(
        &self,
        spec: &ColorSpec,
        consts: &CommutatorConstants,
        v: &FockVector,
    ) -> FockVector {
        match *self {
            FockOperator::Create { color, mode } => create(spec, color, mode, v),
            FockOperator::Annihilate { color, mode } => annihilate(spec, consts, color, mode, v),
        }
    }

    fn apply_to_state(
        &self,
        spec: &ColorSpec,
        consts: &CommutatorConstants,
        state: &FockState,
    ) -> Option<(FockState, i64)> {
        match *self {
            FockOperator::Create { color, mode } => create_on_state(spec, color, mode, state),
            FockOperator::Annihilate { color, mode } => {
                annihilate_on_state(spec, consts, color, mode, state)
            }
        }
    }
}

/// Outcome of checking one graded commutation relation on a batch of states.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub states_checked: usize,
    pub failures: usize,
    pub first_failure: Option<FockState>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Check `op1 op2 - sign * op2 op1 = expected_scalar * Id` exactly on every
/// test state. `sign` is the graded-commutator sign `(-1)^{p1 p2}` from the
/// color parities; passing it explicitly keeps the checker honest about which
/// rule it verifies.
pub fn super_commutator_check(
    spec: &ColorSpec,
    consts: &CommutatorConstants,
    op1: FockOperator,
    op2: FockOperator,
    sign: i64,
    expected_scalar: i64,
    test_states: &[FockState],
) -> RelationReport {
    assert!(sign == 1 || sign == -1);
    let mut failures = 0;
    let mut first_failure = None;
    for state in test_states {
        // forward: op1 (op2 |s>), reverse: op2 (op1 |s>); each path yields at
        // most one state, so compare small term lists directly.
        let mut terms: Vec<(FockState, i64)> = Vec::with_capacity(3);
        if let Some((s2, f2)) = op2.apply_to_state(spec, consts, state) {
            if let Some((s12, f12)) = op1.apply_to_state(spec, consts, &s2) {
                terms.push((s12, f2 * f12));
            }
        }
        if let Some((s1, f1)) = op1.apply_to_state(spec, consts, state) {
            if let Some((s21, f21)) = op2.apply_to_state(spec, consts, &s1) {
                terms.push((s21, -sign * f1 * f21));
            }
        }
        if expected_scalar != 0 {
            terms.push((state.clone(), -expected_scalar));
        }
        // collapse duplicates and test for zero
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut ok = true;
        let mut idx = 0;
        while idx < terms.len() {
            let mut total = terms[idx].1;
            let mut next = idx + 1;
            while next < terms.len() && terms[next].0 == terms[idx].0 {
                total += terms[next].1;
                next += 1;
            }
            if total != 0 {
                ok = false;
                break;
            }
            idx = next;
        }
        if !ok {
            failures += 1;
            if first_failure.is_none() {
                first_failure = Some(state.clone());
            }
        }
    }
    RelationReport {
        states_checked: test_states.len(),
        failures,
        first_failure,
    }
}

/// Aggregate result of checking all three relation families exhaustively.
#[derive(Clone, Debug)]
pub struct RelationsSummary {
    pub pairs_checked: usize,
    pub states_checked: usize,
    pub failures: usize,
}

impl RelationsSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Verify, on every basis state of weight <= `max_weight`, that
///
/// - annihilators graded-commute among themselves,
/// - creators graded-commute among themselves,
/// - `annihilate . create` minus the graded swap equals
///   `delta_{color} delta_{mode} c_mode`,
///
/// for all generator pairs with modes up to `max_mode`.
pub fn check_operator_relations(
    spec: &ColorSpec,
    consts: &CommutatorConstants,
    max_weight: u32,
    max_mode: u32,
) -> Result<RelationsSummary, FockError> {
    // fail early if the table does not cover the requested modes
    for i in 1..=max_mode {
        consts.value(i)?;
    }
    let states = enumerate_states(spec, max_weight);
    let mut pairs = 0;
    let mut failures = 0;
    let colors = spec.color_count();
    for a in 0..colors {
        for i in 1..=max_mode {
            for b in 0..colors {
                for j in 1..=max_mode {
                    let sign = if spec.parity(a) * spec.parity(b) == 1 {
                        -1
                    } else {
                        1
                    };
                    let e_a = FockOperator::Annihilate { color: a, mode: i };
                    let e_b = FockOperator::Annihilate { color: b, mode: j };
                    let f_a = FockOperator::Create { color: a, mode: i };
                    let f_b = FockOperator::Create { color: b, mode: j };
                    let delta = if a == b && i == j {
                        consts.value(i)?
                    } else {
                        0
                    };

                    let r1 = super_commutator_check(spec, consts, e_a, e_b, sign, 0, &states);
                    let r2 = super_commutator_check(spec, consts, f_a, f_b, sign, 0, &states);
                    let r3 = super_commutator_check(spec, consts, e_a, f_b, sign, delta, &states);
                    pairs += 3;
                    failures += r1.failures + r2.failures + r3.failures;
                }
            }
        }
    }
    Ok(RelationsSummary {
        pairs_checked: pairs,
        states_checked: states.len(),
        failures,
    })
}

/// All basis states of weight <= `max_weight`, enumerated color by color.
pub fn enumerate_states(spec: &ColorSpec, max_weight: u32) -> Vec<FockState> {
    let mut out = Vec::new();
    enumerate_parts(spec, max_weight, &mut |bosonic, fermionic| {
        let mut b = bosonic.to_vec();
        let mut f = fermionic.to_vec();
        b.sort_unstable();
        f.sort_unstable();
        out.push(FockState {
            bosonic: b,
            fermionic: f,
        });
    });
    out
}

/// Visit the part lists of every basis state of weight <= `max_weight`
/// without materializing the states. Parts arrive grouped by color, not in
/// canonical order.
fn enumerate_parts<F>(spec: &ColorSpec, max_weight: u32, visit: &mut F)
where
    F: FnMut(&[(u32, usize)], &[(u32, usize)]),
{
    let mut bosonic = Vec::new();
    let mut fermionic = Vec::new();
    enumerate_rec(spec, 0, 1, max_weight, &mut bosonic, &mut fermionic, visit);
}

fn enumerate_rec<F>(
    spec: &ColorSpec,
    color: usize,
    mode: u32,
    budget: u32,
    bosonic: &mut Vec<(u32, usize)>,
    fermionic: &mut Vec<(u32, usize)>,
    visit: &mut F,
) where
    F: FnMut(&[(u32, usize)], &[(u32, usize)]),
{
    if color == spec.color_count() {
        visit(bosonic, fermionic);
        return;
    }
    if mode > budget {
        enumerate_rec(spec, color + 1, 1, budget, bosonic, fermionic, visit);
        return;
    }
    let max_mult = if spec.is_fermionic(color) {
        1
    } else {
        budget / mode
    };
    for mult in 0..=max_mult {
        let used = mult * mode;
        for _ in 0..mult {
            if spec.is_fermionic(color) {
                fermionic.push((mode, color));
            } else {
                bosonic.push((mode, color));
            }
        }
        enumerate_rec(
            spec,
            color,
            mode + 1,
            budget - used,
            bosonic,
            fermionic,
            visit,
        );
        for _ in 0..mult {
            if spec.is_fermionic(color) {
                fermionic.pop();
            } else {
                bosonic.pop();
            }
        }
    }
}

/// `sum q^{weight} t^{degree}` over all basis states of weight <= `q_order`,
/// by direct enumeration of colored super-partitions (streamed, nothing
/// stored per state).
pub fn graded_character(spec: &ColorSpec, q_order: u32) -> BiSeries {
    let mut counts: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    enumerate_parts(spec, q_order, &mut |bosonic, fermionic| {
        let mut weight = 0;
        let mut degree = 0;
        for &(i, a) in bosonic.iter().chain(fermionic.iter()) {
            weight += i;
            degree += 2 * i - 2 + u32::from(spec.degree(a));
        }
        *counts.entry((weight, degree)).or_insert(0) += 1;
    });
    BiSeries::from_terms(
        q_order,
        counts
            .into_iter()
            .map(|((q, t), count)| (q, t, BigInt::from(count))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goettsche::goettsche_series;

    fn spec(betti: [u32; 5]) -> ColorSpec {
        ColorSpec::from_topology(&SurfaceTopology::new(betti))
    }

    #[test]
    fn create_on_vacuum() {
        let sp = spec([1, 0, 0, 0, 0]);
        let v = create(&sp, 0, 3, &FockVector::vacuum());
        assert_eq!(v.term_count(), 1);
        let (state, coeff) = v
            .terms()
            .next()
            .map(|(s, c)| (s.clone(), c.clone()))
            .unwrap();
        assert_eq!(state.bosonic_parts(), &[(3, 0)]);
        assert!(coeff.is_one());
    }

    #[test]
    fn pauli_exclusion() {
        let sp = spec([0, 1, 0, 0, 0]);
        let once = create(&sp, 0, 2, &FockVector::vacuum());
        let twice = create(&sp, 0, 2, &once);
        assert!(twice.is_zero());
    }

    #[test]
    fn fermionic_creators_anticommute() {
        let sp = spec([0, 1, 0, 0, 0]);
        let ab = create(&sp, 0, 2, &create(&sp, 0, 1, &FockVector::vacuum()));
        let ba = create(&sp, 0, 1, &create(&sp, 0, 2, &FockVector::vacuum()));
        assert_eq!(ab, ba.scale(&-BigRational::one()));
    }

    #[test]
    fn annihilate_vacuum_is_zero() {
        let sp = spec([1, 0, 0, 0, 0]);
        let v = annihilate(
            &sp,
            &CommutatorConstants::Default,
            0,
            1,
            &FockVector::vacuum(),
        );
        assert!(v.is_zero());
    }

    #[test]
    fn annihilate_after_create_gives_constant() {
        for betti in [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]] {
            let sp = spec(betti);
            for i in 1..=4u32 {
                let v = annihilate(
                    &sp,
                    &CommutatorConstants::Default,
                    0,
                    i,
                    &create(&sp, 0, i, &FockVector::vacuum()),
                );
                let expected =
                    FockVector::vacuum().scale(&BigRational::from(BigInt::from(i64::from(i))));
                assert_eq!(v, expected, "betti {betti:?}, mode {i}");
            }
        }
    }

    #[test]
    fn mixed_annihilate_create_vanishes_on_vacuum() {
        let sp = spec([2, 0, 0, 0, 0]);
        // E_1^0 F_2^1 |0> has no (1,0) part to remove
        let v = annihilate(
            &sp,
            &CommutatorConstants::Default,
            0,
            1,
            &create(&sp, 1, 2, &FockVector::vacuum()),
        );
        assert!(v.is_zero());
    }

    #[test]
    fn bigrading_shift() {
        let sp = spec([1, 1, 1, 1, 1]);
        let consts = CommutatorConstants::Default;
        let states = enumerate_states(&sp, 3);
        for state in &states {
            for color in 0..sp.color_count() {
                for mode in 1..=3u32 {
                    let shift = 2 * mode - 2 + u32::from(sp.degree(color));
                    if let Some((created, _)) = create_on_state(&sp, color, mode, state) {
                        assert_eq!(created.weight(), state.weight() + mode);
                        assert_eq!(
                            created.cohomological_degree(&sp),
                            state.cohomological_degree(&sp) + shift
                        );
                    }
                    if let Some((lowered, _)) =
                        annihilate_on_state(&sp, &consts, color, mode, state)
                    {
                        assert_eq!(lowered.weight(), state.weight() - mode);
                        assert_eq!(
                            lowered.cohomological_degree(&sp),
                            state.cohomological_degree(&sp) - shift
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn relations_small_mixed_spec() {
        let sp = spec([1, 1, 0, 1, 0]);
        let summary = check_operator_relations(&sp, &CommutatorConstants::Default, 4, 3).unwrap();
        assert!(summary.passed(), "{summary:?}");
        assert!(summary.states_checked > 0);
    }

    #[test]
    fn relations_hold_for_any_nonzero_constants() {
        let sp = spec([1, 2, 0, 0, 0]);
        let consts = CommutatorConstants::table(vec![7, -3, 11]).unwrap();
        let summary = check_operator_relations(&sp, &consts, 3, 3).unwrap();
        assert!(summary.passed());
    }

    #[test]
    fn rescaling_constants_rescales_annihilation() {
        let sp = spec([1, 0, 0, 0, 0]);
        let consts2 = CommutatorConstants::table(vec![2, 4, 6]).unwrap();
        let state = FockVector::basis(FockState::new(&sp, vec![(2, 0), (2, 0)], vec![]).unwrap());
        let a1 = annihilate(&sp, &CommutatorConstants::Default, 0, 2, &state);
        let a2 = annihilate(&sp, &consts2, 0, 2, &state);
        assert_eq!(a2, a1.scale(&BigRational::from(BigInt::from(2))));
    }

    #[test]
    fn zero_constants_rejected() {
        assert!(matches!(
            CommutatorConstants::table(vec![1, 0, 3]),
            Err(FockError::ZeroConstant { index: 2 })
        ));
    }

    #[test]
    fn character_no_colors() {
        let sp = ColorSpec::new(vec![]).unwrap();
        assert!(graded_character(&sp, 5).is_one());
    }

    #[test]
    fn character_single_even_color() {
        let sp = spec([1, 0, 0, 0, 0]);
        let ch = graded_character(&sp, 3);
        let expect = BiSeries::from_terms(
            3,
            [
                (0u32, 0u32, 1i64),
                (1, 0, 1),
                (2, 0, 1),
                (2, 2, 1),
                (3, 0, 1),
                (3, 2, 1),
                (3, 4, 1),
            ]
            .into_iter()
            .map(|(q, t, c)| (q, t, BigInt::from(c))),
        );
        assert_eq!(ch, expect);
    }

    #[test]
    fn character_single_odd_color() {
        let sp = spec([0, 1, 0, 0, 0]);
        let ch = graded_character(&sp, 2);
        // q^1 coefficient is exactly t
        let c1 = ch.coefficient(1).unwrap();
        assert_eq!(c1.len(), 1);
        assert_eq!(c1.get(&1), Some(&BigInt::one()));
    }

    #[test]
    fn character_matches_product_formula() {
        for betti in [
            [1, 0, 0, 0, 0],
            [1, 0, 1, 0, 1],
            [0, 1, 0, 1, 0],
            [1, 1, 1, 1, 1],
        ] {
            let topo = SurfaceTopology::new(betti);
            let sp = ColorSpec::from_topology(&topo);
            let ch = graded_character(&sp, 5);
            let gs = goettsche_series(&topo, 5);
            assert!(ch.try_eq(&gs).unwrap(), "betti {betti:?}");
        }
    }

    #[test]
    fn state_validation() {
        let sp = spec([1, 1, 0, 0, 0]);
        assert!(FockState::new(&sp, vec![(1, 1)], vec![]).is_err()); // odd color in bosonic slot
        assert!(FockState::new(&sp, vec![], vec![(1, 0)]).is_err()); // even color in fermionic slot
        assert!(FockState::new(&sp, vec![(0, 0)], vec![]).is_err()); // zero part size
        assert!(FockState::new(&sp, vec![], vec![(1, 1), (1, 1)]).is_err()); // repeat
        assert!(FockState::new(&sp, vec![(1, 5)], vec![]).is_err()); // unknown color
        let ok = FockState::new(&sp, vec![(2, 0), (1, 0)], vec![(1, 1)]).unwrap();
        assert_eq!(ok.bosonic_parts(), &[(1, 0), (2, 0)]);
        assert_eq!(ok.weight(), 4);
    }
}
