//! Dense 3×3 decompositions.
//!
//! The complex SVD in nalgebra 0.35 often stops short of convergence on
//! structured 3×3 inputs (repeated or vanishing singular values), so every
//! singular value decomposition goes through faer's kernel instead.

use std::cell::RefCell;

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::svd::{svd, svd_scratch, ComputeSvdVectors};
use faer::{ColMut, MatMut, MatRef, Par};

use crate::state::{CMatrix3, C64};

/// `m = u · diag(sigma) · v†` with `sigma` descending.
pub(crate) struct Svd3 {
    pub u: CMatrix3,
    pub sigma: [f64; 3],
    pub v: CMatrix3,
}

thread_local! {
    static SCRATCH: RefCell<MemBuffer> = RefCell::new(MemBuffer::new(svd_scratch::<C64>(
        3,
        3,
        ComputeSvdVectors::Full,
        ComputeSvdVectors::Full,
        Par::Seq,
        Default::default(),
    )));
}

pub(crate) fn svd3(m: &CMatrix3) -> Svd3 {
    let mut u = CMatrix3::zeros();
    let mut v = CMatrix3::zeros();
    let mut s = [C64::from(0.0); 3];
    SCRATCH.with_borrow_mut(|buf| {
        svd(
            MatRef::from_column_major_slice(m.as_slice(), 3, 3),
            ColMut::from_slice_mut(&mut s).as_diagonal_mut(),
            Some(MatMut::from_column_major_slice_mut(u.as_mut_slice(), 3, 3)),
            Some(MatMut::from_column_major_slice_mut(v.as_mut_slice(), 3, 3)),
            Par::Seq,
            MemStack::new(buf),
            Default::default(),
        )
        .expect("3×3 SVD converges")
    });
    Svd3 { u, sigma: s.map(|z| z.re), v }
}

/// Descending singular values.
pub(crate) fn singular_values3(m: &CMatrix3) -> [f64; 3] {
    let mut s = svd3(m).sigma;
    s.sort_by(|a, b| b.total_cmp(a));
    s
}
