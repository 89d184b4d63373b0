//! Bipartite qutrit pure states over the nine product cells `U1..W3`.
//!
//! A state is stored as its 3×3 coefficient matrix `M`, so that
//! `ψ = Σ M[r,c] |r⟩⊗|c⟩`. Rows index particle A and columns particle B, both
//! in the order `+1, 0, -1`; cell `U1 = |1 1⟩` is therefore `M[0,0]` and
//! `W3 = |-1 -1⟩` is `M[2,2]`.
//!
//! Local operators act as `(Q_A ⊗ Q_B) ψ  ↔  Q_A · M · Q_Bᵀ`.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, Matrix3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix3 = Matrix3<C64>;

/// Inputs whose norm is off by more than this are flagged when normalized.
pub const NORM_WARN_TOL: f64 = 1e-9;

/// Smallest singular value an operator may have and still count as invertible.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Single-qutrit basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Trit {
    Plus,
    Zero,
    Minus,
}

impl Trit {
    pub const ALL: [Trit; 3] = [Trit::Plus, Trit::Zero, Trit::Minus];

    pub fn index(self) -> usize {
        match self {
            Trit::Plus => 0,
            Trit::Zero => 1,
            Trit::Minus => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Trit> {
        Self::ALL.get(i).copied()
    }

    pub fn value(self) -> i8 {
        match self {
            Trit::Plus => 1,
            Trit::Zero => 0,
            Trit::Minus => -1,
        }
    }

    fn parse(s: &str) -> Option<Trit> {
        match s.trim() {
            "+1" | "1" => Some(Trit::Plus),
            "0" | "+0" | "-0" => Some(Trit::Zero),
            "-1" => Some(Trit::Minus),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    A,
    B,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::A => f.write_str("A"),
            Party::B => f.write_str("B"),
        }
    }
}

/// One of the nine product states `|r c⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisCell {
    pub row: Trit,
    pub col: Trit,
}

impl BasisCell {
    pub const fn new(row: Trit, col: Trit) -> Self {
        BasisCell { row, col }
    }

    /// Row-major index in `0..9`.
    pub fn flat(self) -> usize {
        3 * self.row.index() + self.col.index()
    }

    pub fn from_flat(i: usize) -> Option<Self> {
        if i >= 9 {
            return None;
        }
        Some(BasisCell::new(Trit::from_index(i / 3)?, Trit::from_index(i % 3)?))
    }

    pub fn all() -> impl Iterator<Item = BasisCell> {
        (0..9).map(|i| BasisCell::from_flat(i).unwrap())
    }

    pub fn label(self) -> String {
        let family = ['U', 'V', 'W'][self.row.index()];
        format!("{family}{}", self.col.index() + 1)
    }
}

impl PartialOrd for BasisCell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BasisCell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.flat().cmp(&other.flat())
    }
}

impl fmt::Display for BasisCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Parses `U1`..`W3` (any case) or a pair such as `(+1,-1)`.
pub fn parse_cell(label: &str) -> Result<BasisCell> {
    let s = label.trim();
    let err = || Error::UnknownCell(label.to_string());
    if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let (r, c) = inner.split_once(',').ok_or_else(err)?;
        let row = Trit::parse(r).ok_or_else(err)?;
        let col = Trit::parse(c).ok_or_else(err)?;
        return Ok(BasisCell::new(row, col));
    }
    let mut chars = s.chars();
    let (Some(family), Some(digit), None) = (chars.next(), chars.next(), chars.next()) else {
        return Err(err());
    };
    let row = match family.to_ascii_uppercase() {
        'U' => Trit::Plus,
        'V' => Trit::Zero,
        'W' => Trit::Minus,
        _ => return Err(err()),
    };
    let col = match digit {
        '1' => Trit::Plus,
        '2' => Trit::Zero,
        '3' => Trit::Minus,
        _ => return Err(err()),
    };
    Ok(BasisCell::new(row, col))
}

impl FromStr for BasisCell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_cell(s)
    }
}

/// A nonempty subset of the nine cells, stored as a bitmask over flat indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportPattern(u16);

impl SupportPattern {
    pub const FULL_MASK: u16 = 0x1ff;

    pub fn from_bits(bits: u16) -> Result<Self> {
        if bits == 0 {
            return Err(Error::EmptyPattern);
        }
        if bits & !Self::FULL_MASK != 0 {
            return Err(Error::InvalidParams(format!("pattern bits {bits:#x} exceed nine cells")));
        }
        Ok(SupportPattern(bits))
    }

    pub fn from_cells<I: IntoIterator<Item = BasisCell>>(cells: I) -> Result<Self> {
        let mut bits = 0u16;
        for cell in cells {
            let bit = 1 << cell.flat();
            if bits & bit != 0 {
                return Err(Error::DuplicateCell(cell));
            }
            bits |= bit;
        }
        Self::from_bits(bits)
    }

    /// Comma- or whitespace-separated cell labels, e.g. `"U1,U2,V1"`.
    pub fn parse(list: &str) -> Result<Self> {
        let cells = list
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(parse_cell)
            .collect::<Result<Vec<_>>>()?;
        Self::from_cells(cells)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, cell: BasisCell) -> bool {
        self.0 & (1 << cell.flat()) != 0
    }

    /// Cells in ascending flat-index order.
    pub fn cells(self) -> Vec<BasisCell> {
        BasisCell::all().filter(|c| self.contains(*c)).collect()
    }

    pub fn complement(self) -> Option<SupportPattern> {
        Self::from_bits(!self.0 & Self::FULL_MASK).ok()
    }

    pub fn labels(self) -> Vec<String> {
        self.cells().into_iter().map(BasisCell::label).collect()
    }
}

impl fmt::Display for SupportPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.labels().join(","))
    }
}

impl Serialize for SupportPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermSpec {
    pub cell: BasisCell,
    pub magnitude: f64,
    pub phase: f64,
}

impl TermSpec {
    pub fn new(cell: BasisCell, magnitude: f64, phase: f64) -> Self {
        TermSpec { cell, magnitude, phase }
    }
}

/// A normalized bipartite qutrit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    coeff: CMatrix3,
}

impl PureState {
    /// Scales `m` to unit Frobenius norm.
    pub fn from_matrix(m: CMatrix3) -> Result<Self> {
        let norm = m.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(PureState { coeff: m.unscale(norm) })
    }

    /// The product state `|cell⟩`.
    pub fn basis(cell: BasisCell) -> Self {
        let mut m = CMatrix3::zeros();
        m[(cell.row.index(), cell.col.index())] = C64::new(1.0, 0.0);
        PureState { coeff: m }
    }

    pub fn coeff(&self) -> &CMatrix3 {
        &self.coeff
    }

    pub fn amplitude(&self, cell: BasisCell) -> C64 {
        self.coeff[(cell.row.index(), cell.col.index())]
    }

    /// Nonzero cells as `(cell, magnitude, phase)` with phases in `[0, 2π)`.
    pub fn terms(&self, tol: f64) -> Vec<TermSpec> {
        BasisCell::all()
            .filter_map(|cell| {
                let z = self.amplitude(cell);
                (z.norm() > tol).then(|| TermSpec::new(cell, z.norm(), wrap_phase(z.arg())))
            })
            .collect()
    }
}

/// Outcome of [`build_state`]: the state plus a record of the input norm.
#[derive(Debug, Clone)]
pub struct BuiltState {
    pub state: PureState,
    pub input_norm: f64,
    /// Input norm differed from 1 by more than [`NORM_WARN_TOL`].
    pub norm_warning: bool,
}

pub fn build_state(terms: &[TermSpec], normalize: bool) -> Result<BuiltState> {
    if terms.is_empty() {
        return Err(Error::EmptyTerms);
    }
    let mut m = CMatrix3::zeros();
    let mut seen = 0u16;
    for t in terms {
        if !t.magnitude.is_finite() || t.magnitude < 0.0 {
            return Err(Error::BadMagnitude { cell: t.cell, value: t.magnitude });
        }
        let bit = 1 << t.cell.flat();
        if seen & bit != 0 {
            return Err(Error::DuplicateCell(t.cell));
        }
        seen |= bit;
        m[(t.cell.row.index(), t.cell.col.index())] = C64::from_polar(t.magnitude, t.phase);
    }
    let input_norm = m.norm();
    if input_norm == 0.0 {
        return Err(Error::ZeroState);
    }
    let norm_warning = (input_norm - 1.0).abs() > NORM_WARN_TOL;
    if norm_warning && !normalize {
        return Err(Error::NotNormalized { norm: input_norm });
    }
    Ok(BuiltState { state: PureState::from_matrix(m)?, input_norm, norm_warning })
}

/// Cells with `|M[cell]| > tol`.
pub fn support_of(state: &PureState, tol: f64) -> Result<SupportPattern> {
    let bits = BasisCell::all().filter(|c| state.amplitude(*c).norm() > tol).fold(0u16, |acc, c| acc | (1 << c.flat()));
    SupportPattern::from_bits(bits)
}

/// Gaussian random state supported on `pattern`, deterministic in `seed`.
pub fn random_state(pattern: SupportPattern, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = CMatrix3::zeros();
    for cell in pattern.cells() {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        m[(cell.row.index(), cell.col.index())] = C64::new(re, im);
    }
    // a draw of exactly zero on every cell has probability zero
    PureState::from_matrix(m).expect("gaussian sample is nonzero")
}

pub fn smallest_singular_value(op: &CMatrix3) -> f64 {
    crate::linalg::singular_values3(op)[2]
}

/// `Q_A · M · Q_Bᵀ` without normalization.
pub fn apply_local_matrix(state: &PureState, op_a: &CMatrix3, op_b: &CMatrix3) -> Result<CMatrix3> {
    for (side, op) in [(Party::A, op_a), (Party::B, op_b)] {
        let smallest = smallest_singular_value(op);
        if smallest.is_nan() || smallest < SINGULAR_TOL {
            return Err(Error::SingularOperator { side, smallest });
        }
    }
    Ok(op_a * state.coeff() * op_b.transpose())
}

/// Applies `Q_A ⊗ Q_B`. Without `renormalize` the operators must preserve
/// the norm (to [`NORM_WARN_TOL`]).
pub fn apply_local(state: &PureState, op_a: &CMatrix3, op_b: &CMatrix3, renormalize: bool) -> Result<PureState> {
    let m = apply_local_matrix(state, op_a, op_b)?;
    let norm = m.norm();
    if !renormalize && (norm - 1.0).abs() > NORM_WARN_TOL {
        return Err(Error::NotNormalized { norm });
    }
    PureState::from_matrix(m)
}

/// On-disk state description: `{"terms":[{"cell":"U1","magnitude":0.7,"phase":0.0}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub terms: Vec<StateFileTerm>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFileTerm {
    pub cell: String,
    pub magnitude: f64,
    #[serde(default)]
    pub phase: f64,
}

impl StateFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_terms(&self) -> Result<Vec<TermSpec>> {
        self.terms.iter().map(|t| Ok(TermSpec::new(parse_cell(&t.cell)?, t.magnitude, t.phase))).collect()
    }

    /// Parses and normalizes.
    pub fn build(&self) -> Result<BuiltState> {
        build_state(&self.to_terms()?, true)
    }

    pub fn from_state(state: &PureState) -> Self {
        StateFile {
            terms: state
                .terms(0.0)
                .into_iter()
                .map(|t| StateFileTerm { cell: t.cell.label(), magnitude: t.magnitude, phase: t.phase })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn cell(s: &str) -> BasisCell {
        parse_cell(s).unwrap()
    }

    #[test]
    fn parse_named_cells() {
        assert_eq!(cell("U1"), BasisCell::new(Trit::Plus, Trit::Plus));
        assert_eq!(cell("W3"), BasisCell::new(Trit::Minus, Trit::Minus));
        assert_eq!(cell("v2"), BasisCell::new(Trit::Zero, Trit::Zero));
        assert_eq!(cell("U3"), BasisCell::new(Trit::Plus, Trit::Minus));
        assert_eq!(cell("(+1,-1)"), cell("U3"));
        assert_eq!(cell("( 0 , 1 )"), cell("V1"));
        assert_eq!(cell("U1").flat(), 0);
        assert_eq!(cell("W3").flat(), 8);
    }

    #[test]
    fn parse_rejects_unknown() {
        match parse_cell("X9") {
            Err(Error::UnknownCell(tok)) => assert_eq!(tok, "X9"),
            other => panic!("unexpected {other:?}"),
        }
        for bad in ["U4", "U", "U11", "(2,0)", "(1;0)", ""] {
            assert!(parse_cell(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn label_roundtrip_all_cells() {
        for c in BasisCell::all() {
            assert_eq!(parse_cell(&c.label()).unwrap(), c);
            let pair = format!("({},{})", c.row.value(), c.col.value());
            assert_eq!(parse_cell(&pair).unwrap(), c);
        }
    }

    #[test]
    fn build_simple_states() {
        let built = build_state(
            &[TermSpec::new(cell("U1"), FRAC_1_SQRT_2, 0.0), TermSpec::new(cell("V2"), FRAC_1_SQRT_2, 0.0)],
            true,
        )
        .unwrap();
        let m = built.state.coeff();
        assert!((m[(0, 0)].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        assert!((m[(1, 1)].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        assert!(!built.norm_warning);
        let nonzero = m.iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 2);

        let single = build_state(&[TermSpec::new(cell("U1"), 1.0, 0.0)], false).unwrap();
        assert_eq!(single.state, PureState::basis(cell("U1")));
    }

    #[test]
    fn build_normalizes_three_four_five() {
        let built =
            build_state(&[TermSpec::new(cell("U1"), 3.0, 0.0), TermSpec::new(cell("V2"), 4.0, 0.0)], true).unwrap();
        assert!(built.norm_warning);
        assert!((built.input_norm - 5.0).abs() < 1e-12);
        assert!((built.state.amplitude(cell("U1")).re - 0.6).abs() < 1e-12);
        assert!((built.state.amplitude(cell("V2")).re - 0.8).abs() < 1e-12);
        assert!(matches!(build_state(&[TermSpec::new(cell("U1"), 3.0, 0.0)], false), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn build_errors() {
        assert!(matches!(build_state(&[], true), Err(Error::EmptyTerms)));
        assert!(matches!(
            build_state(&[TermSpec::new(cell("U1"), 1.0, 0.0), TermSpec::new(cell("U1"), 1.0, 0.0)], true),
            Err(Error::DuplicateCell(_))
        ));
        assert!(matches!(
            build_state(&[TermSpec::new(cell("U1"), 0.0, 0.0), TermSpec::new(cell("V1"), 0.0, 1.0)], true),
            Err(Error::ZeroState)
        ));
        assert!(matches!(build_state(&[TermSpec::new(cell("U1"), -1.0, 0.0)], true), Err(Error::BadMagnitude { .. })));
    }

    #[test]
    fn support_of_examples() {
        let s = 1.0 / 6f64.sqrt();
        let six: Vec<_> = ["U1", "W3", "U2", "V1", "V3", "W2"].iter().map(|l| TermSpec::new(cell(l), s, 0.0)).collect();
        let st = build_state(&six, true).unwrap().state;
        let sup = support_of(&st, 1e-12).unwrap();
        assert_eq!(sup.len(), 6);
        assert_eq!(sup.complement().unwrap(), SupportPattern::parse("U3,V2,W1").unwrap());
        assert_eq!(support_of(&PureState::basis(cell("U1")), 1e-12).unwrap().to_string(), "U1");
    }

    #[test]
    fn random_state_properties() {
        let p = SupportPattern::parse("U1").unwrap();
        let st = random_state(p, 5);
        assert!((st.amplitude(cell("U1")).norm() - 1.0).abs() < 1e-12);

        let full = SupportPattern::from_bits(SupportPattern::FULL_MASK).unwrap();
        assert_eq!(random_state(full, 42), random_state(full, 42));
        assert_ne!(random_state(full, 42), random_state(full, 43));

        let diag = SupportPattern::parse("U1,V2,W3").unwrap();
        assert_eq!(support_of(&random_state(diag, 7), 1e-12).unwrap(), diag);
    }

    #[test]
    fn apply_identity_and_singular() {
        let full = SupportPattern::from_bits(SupportPattern::FULL_MASK).unwrap();
        let st = random_state(full, 1);
        let id = CMatrix3::identity();
        assert_eq!(apply_local(&st, &id, &id, false).unwrap(), st);

        let mut sing = CMatrix3::identity();
        sing[(2, 2)] = C64::new(0.0, 0.0);
        match apply_local(&st, &id, &sing, true) {
            Err(Error::SingularOperator { side, .. }) => assert_eq!(side, Party::B),
            other => panic!("unexpected {other:?}"),
        }
        match apply_local(&st, &sing, &id, true) {
            Err(Error::SingularOperator { side, .. }) => assert_eq!(side, Party::A),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn transpose_convention_matches_tensor_action() {
        // (Q_A ⊗ Q_B) acting on the 9-vector with index 3r + c
        let st = random_state(SupportPattern::from_bits(0x1ff).unwrap(), 3);
        let qa = *random_state(SupportPattern::from_bits(0x1ff).unwrap(), 4).coeff();
        let qb = *random_state(SupportPattern::from_bits(0x1ff).unwrap(), 5).coeff();
        let got = apply_local_matrix(&st, &qa, &qb).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let mut acc = C64::new(0.0, 0.0);
                for r2 in 0..3 {
                    for c2 in 0..3 {
                        acc += qa[(r, r2)] * qb[(c, c2)] * st.coeff()[(r2, c2)];
                    }
                }
                assert!((acc - got[(r, c)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn state_file_parsing() {
        let text = r#"{"terms":[{"cell":"U1","magnitude":0.70710678,"phase":0.0},{"cell":"V2","magnitude":0.70710678,"phase":0.0}]}"#;
        let built = StateFile::from_json(text).unwrap().build().unwrap();
        // eight-digit amplitudes are off by ~1e-8: flagged, then normalized
        assert!(built.norm_warning);
        assert!((built.state.coeff().norm() - 1.0).abs() < 1e-12);
        assert!(StateFile::from_json(r#"{"terms":[],"extra":1}"#).is_err());
        assert!(StateFile::from_json(r#"{"terms":[{"cell":"U1","magnitude":1,"foo":2}]}"#).is_err());
        assert!(StateFile::from_json("{not json").is_err());
        let bad_cell = StateFile::from_json(r#"{"terms":[{"cell":"X9","magnitude":1}]}"#).unwrap();
        assert!(matches!(bad_cell.build(), Err(Error::UnknownCell(_))));
    }

    #[test]
    fn pattern_parse_and_display() {
        let p = SupportPattern::parse("V2, U1 W3").unwrap();
        assert_eq!(p.to_string(), "U1,V2,W3");
        assert!(matches!(SupportPattern::parse("U1,U1"), Err(Error::DuplicateCell(_))));
        assert!(matches!(SupportPattern::parse(""), Err(Error::EmptyPattern)));
        assert!(SupportPattern::from_bits(0x200).is_err());
        assert!(SupportPattern::from_bits(0x1ff).unwrap().complement().is_none());
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(0.0), 0.0);
        assert!((wrap_phase(-0.5) - (TAU - 0.5)).abs() < 1e-15);
        assert!(wrap_phase(TAU) < 1e-15);
        assert!(wrap_phase(-1e-300) < TAU);
    }
}
