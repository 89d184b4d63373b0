//! SLOCC classification of bipartite qutrit states.
//!
//! Two bipartite pure states are related by an invertible local operator
//! exactly when their Schmidt ranks agree. Equivalence is always reported
//! together with an explicit witness `(Q_A, Q_B)` built from the two SVDs.

use nalgebra::Vector3;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::measure::{schmidt, DEFAULT_SCHMIDT_TOL};
use crate::state::{apply_local_matrix, smallest_singular_value, CMatrix3, PureState, C64};

/// Largest residual accepted for a valid witness.
pub const WITNESS_TOL: f64 = 1e-8;

/// Smallest singular value required of each witness operator.
pub const INVERTIBLE_TOL: f64 = 1e-10;

pub fn schmidt_rank(state: &PureState, tol: f64) -> usize {
    schmidt(state, tol).rank
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RankDescriptor {
    Product,
    Rank2Class,
    Rank3Class,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RankClass {
    pub rank: usize,
    pub descriptor: RankDescriptor,
}

impl RankClass {
    pub fn from_rank(rank: usize) -> Self {
        let descriptor = match rank {
            0 | 1 => RankDescriptor::Product,
            2 => RankDescriptor::Rank2Class,
            _ => RankDescriptor::Rank3Class,
        };
        RankClass { rank, descriptor }
    }
}

pub fn slocc_class(state: &PureState) -> RankClass {
    RankClass::from_rank(schmidt_rank(state, DEFAULT_SCHMIDT_TOL))
}

/// Invertible local operators taking one state to another, up to scale and
/// global phase.
#[derive(Debug, Clone, PartialEq)]
pub struct IloWitness {
    pub q_a: CMatrix3,
    pub q_b: CMatrix3,
    /// Factor that renormalizes `Q_A · M_ψ · Q_Bᵀ`.
    pub scale: f64,
    /// `‖scale·Q_A·M_ψ·Q_Bᵀ − e^{iθ}·M_φ‖` at the best global phase θ.
    pub residual: f64,
}

impl IloWitness {
    pub fn is_valid(&self) -> bool {
        self.residual < WITNESS_TOL
            && smallest_singular_value(&self.q_a) > INVERTIBLE_TOL
            && smallest_singular_value(&self.q_b) > INVERTIBLE_TOL
    }
}

/// 3×3 matrix as rows of `[re, im]` pairs.
pub fn matrix_pairs(m: &CMatrix3) -> [[[f64; 2]; 3]; 3] {
    let mut out = [[[0.0; 2]; 3]; 3];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = [m[(r, c)].re, m[(r, c)].im];
        }
    }
    out
}

impl Serialize for IloWitness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("IloWitness", 4)?;
        s.serialize_field("qA", &matrix_pairs(&self.q_a))?;
        s.serialize_field("qB", &matrix_pairs(&self.q_b))?;
        s.serialize_field("scale", &self.scale)?;
        s.serialize_field("residual", &self.residual)?;
        s.end()
    }
}

/// Distance between two unit-norm coefficient matrices as rays.
pub fn ray_residual(m: &CMatrix3, target: &CMatrix3) -> f64 {
    let overlap: C64 = target.iter().zip(m.iter()).map(|(t, x)| t.conj() * x).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { C64::from(1.0) };
    (m - target * phase).norm()
}

/// Builds `Q_A = U_φ S U_ψ†` and `Q_Bᵀ = V_ψ V_φ†` with `S_ii = σ_φ,i/σ_ψ,i`
/// on the Schmidt support and 1 elsewhere. Returns `None` when the Schmidt
/// ranks differ.
pub fn ilo_witness(psi: &PureState, phi: &PureState, tol: f64) -> Option<IloWitness> {
    let a = schmidt(psi, tol);
    let b = schmidt(phi, tol);
    if a.rank != b.rank {
        return None;
    }
    let s = Vector3::from_fn(|i, _| if i < a.rank { C64::from(b.sigma[i] / a.sigma[i]) } else { C64::from(1.0) });
    let q_a = b.left_u * CMatrix3::from_diagonal(&s) * a.left_u.adjoint();
    let q_b = (a.right_v * b.right_v.adjoint()).transpose();
    let mapped = apply_local_matrix(psi, &q_a, &q_b).ok()?;
    let norm = mapped.norm();
    if norm == 0.0 {
        return None;
    }
    let scale = 1.0 / norm;
    let residual = ray_residual(&(mapped * C64::from(scale)), phi.coeff());
    Some(IloWitness { q_a, q_b, scale, residual })
}

/// Real parameters left after removing local unitary freedom from an
/// `n_parties`-qutrit pure state: `2·3^N − (N·dim + 1)`.
pub fn count_lu_parameters(n_parties: u32, per_party_group_dim: i64) -> i64 {
    2 * 3i64.pow(n_parties) - (i64::from(n_parties) * per_party_group_dim + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{apply_local, build_state, parse_cell, random_state, SupportPattern, TermSpec};

    fn state(cells: &[(&str, f64)]) -> PureState {
        let terms: Vec<_> = cells.iter().map(|&(c, m)| TermSpec::new(parse_cell(c).unwrap(), m, 0.0)).collect();
        build_state(&terms, true).unwrap().state
    }

    #[test]
    fn ranks_of_small_examples() {
        assert_eq!(schmidt_rank(&state(&[("U1", 1.0)]), 1e-10), 1);
        assert_eq!(schmidt_rank(&state(&[("U1", 1.0), ("V2", 1.0)]), 1e-10), 2);
        let six = state(&[("U1", 1.0), ("U2", 1.0), ("V1", 1.0), ("V3", 1.0), ("W2", 1.0), ("W3", 1.0)]);
        assert_eq!(schmidt_rank(&six, 1e-10), 3);
    }

    #[test]
    fn class_descriptors() {
        assert_eq!(slocc_class(&state(&[("U1", 1.0), ("V2", 1.0)])).descriptor, RankDescriptor::Rank2Class);
        assert_eq!(
            slocc_class(&state(&[("U1", 1.0), ("V2", 1.0), ("W3", 1.0)])).descriptor,
            RankDescriptor::Rank3Class
        );
        assert_eq!(slocc_class(&state(&[("V3", 1.0)])), RankClass { rank: 1, descriptor: RankDescriptor::Product });
    }

    #[test]
    fn unequal_ranks_have_no_witness() {
        assert!(ilo_witness(&state(&[("U1", 1.0)]), &state(&[("U1", 1.0), ("V2", 1.0)]), 1e-10).is_none());
    }

    #[test]
    fn identical_states_give_unitary_witness() {
        let s = random_state(SupportPattern::from_bits(0x1ff).unwrap(), 3);
        let w = ilo_witness(&s, &s, 1e-10).unwrap();
        assert!(w.residual < 1e-12, "{}", w.residual);
        assert!((w.q_a - CMatrix3::identity()).norm() < 1e-10);
        assert!((w.q_b - CMatrix3::identity()).norm() < 1e-10);
    }

    #[test]
    fn witness_reapplies() {
        let p = SupportPattern::from_bits(0x1ff).unwrap();
        let (x, y) = (random_state(p, 11), random_state(p, 12));
        let w = ilo_witness(&x, &y, 1e-10).unwrap();
        assert!(w.is_valid());
        let mapped = apply_local(&x, &w.q_a, &w.q_b, true).unwrap();
        assert!(ray_residual(mapped.coeff(), y.coeff()) < 1e-8);
    }

    #[test]
    fn witness_json_shape() {
        let s = state(&[("U1", 1.0), ("V2", 1.0)]);
        let v = serde_json::to_value(ilo_witness(&s, &s, 1e-10).unwrap()).unwrap();
        assert_eq!(v["qA"].as_array().unwrap().len(), 3);
        assert_eq!(v["qB"][2][2].as_array().unwrap().len(), 2);
        assert!(v["residual"].as_f64().unwrap() < 1e-12);
    }

    #[test]
    fn lu_parameter_counts() {
        assert_eq!(count_lu_parameters(2, 3), 11);
        assert_eq!(count_lu_parameters(1, 3), 2);
        assert_eq!(count_lu_parameters(2, 8), 1);
    }
}
