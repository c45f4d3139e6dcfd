//! Adapted symplectic coordinates for a single move.
//!
//! With `R = U diag(Sigma_r, 0) V^T`, the transforms
//!
//! ```text
//! Wdot  = [[-U^T L, U^T], [-U^T, 0]]                                (slice n)
//! Wddot = [[Sbar V^T, 0], [-Sbar^-1 V^T Rbar, Sbar^-1 V^T]]         (slice n+1)
//! ```
//!
//! with `Sbar = diag(Sigma_r, I)` turn the move into bookkeeping. For a
//! vector `u = Wdot y` on the pre-constraint surface, `Wddot (E y + F lambda)`
//! keeps components `1..r` and `q+1..q+r`, puts `lambda` into `r+1..q`
//! and zeroes `q+r+1..2q` (1-based).

use crate::error::{Error, Result};
use crate::linalg::{self, block2, max_abs_vec, Matrix, SvdBundle, Vector};
use crate::timestep::{PhaseVector, TimeStepSystem};

/// Relative tolerance for deciding that an adapted component vanishes.
pub const VANISHING_TOL: f64 = 1e-8;

/// Which end of the move a vector lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slice {
    /// Slice n, coordinates from `Wdot`.
    Current,
    /// Slice n+1, coordinates from `Wddot`.
    Next,
}

#[derive(Debug, Clone)]
pub struct AdaptedFrame {
    pub wdot: Matrix,
    pub wddot: Matrix,
    pub wdot_inv: Matrix,
    pub wddot_inv: Matrix,
    pub r: usize,
    pub s: usize,
    pub svd: SvdBundle,
}

/// Membership of a vector in the constraint structures of one slice.
///
/// At [`Slice::Current`] the fields refer to the pre-constraint surface, its
/// symplectic null space and the representative space. At [`Slice::Next`]
/// they refer to their post-constraint counterparts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VectorClass {
    pub slice: Slice,
    pub on_constraint: bool,
    pub in_null_space: bool,
    pub in_representative: bool,
}

impl AdaptedFrame {
    pub fn q(&self) -> usize {
        self.r + self.s
    }

    fn transform(&self, slice: Slice) -> &Matrix {
        match slice {
            Slice::Current => &self.wdot,
            Slice::Next => &self.wddot,
        }
    }

    fn inverse(&self, slice: Slice) -> &Matrix {
        match slice {
            Slice::Current => &self.wdot_inv,
            Slice::Next => &self.wddot_inv,
        }
    }

    /// Columns of the inverse transform: the adapted basis vectors.
    pub fn basis(&self, slice: Slice) -> &Matrix {
        self.inverse(slice)
    }
}

pub fn build_frame(sys: &TimeStepSystem, rel_tol: f64) -> Result<AdaptedFrame> {
    let q = sys.q();
    let svd = linalg::svd(sys.r(), rel_tol)?;
    let (r, s) = (svd.rank, q - svd.rank);
    let (u, v) = (svd.u(), svd.v());
    let l = sys.l();
    let rbar = sys.rbar();

    let mut sbar = Vector::from_element(q, 1.0);
    sbar.rows_mut(0, r).copy_from(&svd.sigma_r);
    let sbar_mat = Matrix::from_diagonal(&sbar);
    let sbar_inv = Matrix::from_diagonal(&sbar.map(|x| 1.0 / x));
    let zero = Matrix::zeros(q, q);

    let ut = u.transpose();
    let vt = v.transpose();
    let wdot = block2(&(-(&ut * l)), &ut, &(-&ut), &zero);
    let wddot = block2(
        &(&sbar_mat * &vt),
        &zero,
        &(-(&sbar_inv * &vt * rbar)),
        &(&sbar_inv * &vt),
    );
    let wdot_inv = block2(&zero, &(-&u), &u, &(-(l * &u)));
    let v_sinv = &v * &sbar_inv;
    let wddot_inv = block2(&v_sinv, &zero, &(rbar * &v_sinv), &(&v * &sbar_mat));

    Ok(AdaptedFrame {
        wdot,
        wddot,
        wdot_inv,
        wddot_inv,
        r,
        s,
        svd,
    })
}

pub fn to_adapted(frame: &AdaptedFrame, y: &PhaseVector, slice: Slice) -> Result<Vector> {
    check_len(frame, 2 * y.q())?;
    Ok(frame.transform(slice) * y.stacked())
}

pub fn from_adapted(frame: &AdaptedFrame, u: &Vector, slice: Slice) -> Result<PhaseVector> {
    check_len(frame, u.len())?;
    PhaseVector::from_stacked(&(frame.inverse(slice) * u))
}

/// Classify `y` with the default vanishing tolerance.
pub fn classify(frame: &AdaptedFrame, y: &PhaseVector, slice: Slice) -> Result<VectorClass> {
    classify_with_tol(frame, y, slice, VANISHING_TOL)
}

pub fn classify_with_tol(
    frame: &AdaptedFrame,
    y: &PhaseVector,
    slice: Slice,
    tol: f64,
) -> Result<VectorClass> {
    let u = to_adapted(frame, y, slice)?;
    let threshold = tol * y.max_abs().max(1.0);
    let (q, r) = (frame.q(), frame.r);
    let vanish = |start: usize, len: usize| u.rows(start, len).iter().all(|c| c.abs() <= threshold);

    let lambda_block = vanish(r, q - r);
    let tail_block = vanish(q + r, q - r);
    let representative_blocks = vanish(0, r) && vanish(q, r);

    let (on_constraint, in_null_space) = match slice {
        Slice::Current => (lambda_block, lambda_block && representative_blocks),
        Slice::Next => (tail_block, tail_block && representative_blocks),
    };
    Ok(VectorClass {
        slice,
        on_constraint,
        in_null_space,
        in_representative: lambda_block && tail_block,
    })
}

/// Evolve in adapted coordinates: copy, inject `lambda`, zero.
pub fn evolve_adapted(frame: &AdaptedFrame, u: &Vector, lambda: &Vector) -> Result<Vector> {
    check_len(frame, u.len())?;
    let (q, r, s) = (frame.q(), frame.r, frame.s);
    if lambda.len() != s {
        return Err(Error::Dimension {
            what: "free parameters",
            expected: s,
            got: lambda.len(),
        });
    }
    let residual = max_abs_vec(&u.rows(r, s).into_owned());
    let tolerance = VANISHING_TOL * max_abs_vec(u).max(1.0);
    if residual > tolerance {
        return Err(Error::AdaptedConstraintViolation {
            residual,
            tolerance,
        });
    }
    let mut out = Vector::zeros(2 * q);
    out.rows_mut(0, r).copy_from(&u.rows(0, r));
    out.rows_mut(r, s).copy_from(lambda);
    out.rows_mut(q, r).copy_from(&u.rows(q, r));
    Ok(out)
}

fn check_len(frame: &AdaptedFrame, len: usize) -> Result<()> {
    if len != 2 * frame.q() {
        return Err(Error::Dimension {
            what: "adapted vector",
            expected: 2 * frame.q(),
            got: len,
        });
    }
    Ok(())
}
