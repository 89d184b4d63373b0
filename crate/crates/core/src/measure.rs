//! Reduced densities, base-3 von Neumann entropies, the two-particle
//! entanglement measure η and Schmidt decompositions.
//!
//! For a pure state `M`, `ρ_A = M M†` and `ρ_B = Mᵀ M̄`; both share the
//! spectrum `σ_i²` where `σ_i` are the singular values of `M`.

use nalgebra::Vector3;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::svd3;
use crate::state::{CMatrix3, Party, PureState, C64};

/// Eigenvalues below this are treated as exact zeros (0·log 0 = 0).
pub const EIGEN_CLAMP: f64 = 1e-15;

/// Reduced entropies at or below this select the η = 0 branch.
pub const ZERO_ENTROPY: f64 = 1e-12;

pub const DEFAULT_SCHMIDT_TOL: f64 = 1e-10;

const DENSITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix3);

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity to 1e-12.
    pub fn new(m: CMatrix3) -> Result<Self> {
        let herm_err = (m - m.adjoint()).norm();
        if herm_err > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm_err:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} is not 1")));
        }
        let rho = DensityMatrix(m);
        let min = rho.eigenvalues().min();
        if min < -DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    pub fn from_diagonal(p: [f64; 3]) -> Result<Self> {
        Self::new(CMatrix3::from_diagonal(&Vector3::new(p[0].into(), p[1].into(), p[2].into())))
    }

    pub fn matrix(&self) -> &CMatrix3 {
        &self.0
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vector3<f64> {
        let mut ev = self.0.symmetric_eigenvalues();
        ev.as_mut_slice().sort_by(|a, b| b.total_cmp(a));
        ev
    }
}

pub fn reduced_density(state: &PureState, party: Party) -> DensityMatrix {
    let m = state.coeff();
    let rho = match party {
        Party::A => m * m.adjoint(),
        Party::B => m.transpose() * m.conjugate(),
    };
    DensityMatrix(rho)
}

/// `-Σ p log_base p` over a probability vector, with the 0·log 0 convention.
pub fn spectrum_entropy(probs: &[f64], base: f64) -> f64 {
    assert!(base > 1.0, "entropy base must exceed 1, got {base}");
    let ln_base = base.ln();
    let s: f64 = probs.iter().filter(|&&p| p > EIGEN_CLAMP).map(|&p| -p * p.ln()).sum();
    (s / ln_base).max(0.0)
}

pub fn von_neumann_entropy(rho: &DensityMatrix, base: f64) -> f64 {
    spectrum_entropy(rho.eigenvalues().as_slice(), base)
}

/// Entropies of both reductions together with η.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaBreakdown {
    pub s_a: f64,
    pub s_b: f64,
    pub eta: f64,
}

impl EtaBreakdown {
    pub fn is_product(&self) -> bool {
        self.eta == 0.0
    }
}

pub fn eta_breakdown(state: &PureState) -> EtaBreakdown {
    let s_a = von_neumann_entropy(&reduced_density(state, Party::A), 3.0);
    let s_b = von_neumann_entropy(&reduced_density(state, Party::B), 3.0);
    let eta = if s_a <= ZERO_ENTROPY || s_b <= ZERO_ENTROPY { 0.0 } else { 0.5 * (s_a + s_b) };
    EtaBreakdown { s_a, s_b, eta }
}

/// The measure η: mean base-3 entropy of the two reductions, or 0 if either vanishes.
pub fn eta(state: &PureState) -> f64 {
    eta_breakdown(state).eta
}

/// `M = left_u · diag(sigma) · right_v†`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtData {
    /// Descending singular values.
    pub sigma: [f64; 3],
    pub left_u: CMatrix3,
    pub right_v: CMatrix3,
    pub rank: usize,
}

impl SchmidtData {
    pub fn sigma_sq(&self) -> [f64; 3] {
        self.sigma.map(|s| s * s)
    }

    pub fn reconstruct(&self) -> CMatrix3 {
        let d = CMatrix3::from_diagonal(&Vector3::from(self.sigma.map(C64::from)));
        self.left_u * d * self.right_v.adjoint()
    }
}

/// Descending SVD of an arbitrary 3×3 matrix, with each column of `U` phased
/// so its first non-negligible entry is real and positive. `rank` counts
/// `σ_i > tol·σ_1`.
pub fn schmidt_matrix(m: &CMatrix3, tol: f64) -> SchmidtData {
    let svd = svd3(m);
    let (u, v) = (svd.u, svd.v);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| svd.sigma[b].total_cmp(&svd.sigma[a]));

    let mut sigma = [0.0; 3];
    let mut left_u = CMatrix3::zeros();
    let mut right_v = CMatrix3::zeros();
    for (j, &src) in order.iter().enumerate() {
        sigma[j] = svd.sigma[src];
        let mut ucol = u.column(src).into_owned();
        let mut vcol = v.column(src).into_owned();
        if let Some(first) = ucol.iter().find(|z| z.norm() > 1e-12).copied() {
            let fix = first.conj() / first.norm();
            ucol *= fix;
            vcol *= fix;
        }
        left_u.set_column(j, &ucol);
        right_v.set_column(j, &vcol);
    }
    let cutoff = tol * sigma[0];
    let rank = sigma.iter().filter(|&&s| s > cutoff).count();
    SchmidtData { sigma, left_u, right_v, rank }
}

pub fn schmidt(state: &PureState, tol: f64) -> SchmidtData {
    schmidt_matrix(state.coeff(), tol)
}
