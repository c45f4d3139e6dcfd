//! Rank-revealing dense linear algebra.
//!
//! Everything downstream is phrased in terms of the narrowed singular value
//! decomposition `A = U1 diag(sigma) V1^T`, with `U2`, `V2` completing the
//! orthonormal bases of the left and right null spaces. The raw decomposition
//! comes from `nalgebra`; this module fixes the numerical rank, canonicalizes
//! the gauge of the singular vectors and builds the derived objects
//! (pseudoinverse, fundamental-space projectors, symplectic utilities).
//!
//! Gauge fixing is deterministic so that reports are reproducible:
//!
//! * inside a block of (numerically) equal singular values, and inside each
//!   null space, the basis is rebuilt by pivoted Gram-Schmidt on the columns
//!   of the block projector, which depends only on the subspace;
//! * every right singular vector is then sign-fixed so that its entry of
//!   largest magnitude is positive (ties go to the lowest row index);
//! * left singular vectors of the range receive the same rotations and sign
//!   flips as the right ones.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Default relative rank tolerance.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

/// Singular values closer than this (relative to the largest one) are treated
/// as one degenerate block when canonicalizing the gauge.
const DEGENERACY_REL_TOL: f64 = 1e-12;

/// Entries within this relative distance of the column maximum count as ties
/// for sign canonicalization.
const SIGN_TIE_REL_TOL: f64 = 1e-12;

pub fn ensure_finite(a: &Matrix) -> Result<()> {
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            if !a[(i, j)].is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

pub(crate) fn ensure_tolerance(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Largest absolute entry; zero for empty matrices.
pub fn max_abs(a: &Matrix) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub fn max_abs_vec(v: &Vector) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// `max |A - A^T|`, or infinity for non-square input.
pub fn asymmetry(a: &Matrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    let mut worst = 0.0_f64;
    for i in 0..a.nrows() {
        for j in (i + 1)..a.ncols() {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

/// Narrowed SVD with declared numerical rank.
#[derive(Debug, Clone)]
pub struct SvdBundle {
    pub u1: Matrix,
    pub u2: Matrix,
    /// Positive singular values in descending order.
    pub sigma_r: Vector,
    pub v1: Matrix,
    pub v2: Matrix,
    pub rank: usize,
    /// Absolute threshold below which singular values were dropped.
    pub tolerance_used: f64,
}

impl SvdBundle {
    pub fn nrows(&self) -> usize {
        self.u1.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.v1.nrows()
    }

    /// Full orthogonal `U = [U1 U2]`.
    pub fn u(&self) -> Matrix {
        hcat(&self.u1, &self.u2)
    }

    /// Full orthogonal `V = [V1 V2]`.
    pub fn v(&self) -> Matrix {
        hcat(&self.v1, &self.v2)
    }

    /// `U1 diag(sigma) V1^T`.
    pub fn reconstruct(&self) -> Matrix {
        let mut scaled = self.u1.clone();
        for (j, s) in self.sigma_r.iter().enumerate() {
            scaled.column_mut(j).scale_mut(*s);
        }
        &scaled * self.v1.transpose()
    }

    /// `V1 diag(1/sigma) U1^T`.
    pub fn pinv(&self) -> Matrix {
        let mut scaled = self.v1.clone();
        for (j, s) in self.sigma_r.iter().enumerate() {
            scaled.column_mut(j).scale_mut(1.0 / *s);
        }
        &scaled * self.u1.transpose()
    }
}

/// Rank-revealing SVD of `a`.
///
/// The numerical rank counts singular values strictly above
/// `rel_tol * sigma_1 * max(m, n)`; a zero matrix has rank zero.
pub fn svd(a: &Matrix, rel_tol: f64) -> Result<SvdBundle> {
    svd_with_floor(a, rel_tol, 0.0)
}

/// As [`svd`], but singular values at or below `abs_floor` also count as
/// zero. Useful when the natural scale of `a` is known in advance.
pub fn svd_with_floor(a: &Matrix, rel_tol: f64, abs_floor: f64) -> Result<SvdBundle> {
    ensure_finite(a)?;
    ensure_tolerance(rel_tol)?;
    if !(abs_floor >= 0.0 && abs_floor.is_finite()) {
        return Err(Error::InvalidTolerance(abs_floor));
    }
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok(SvdBundle {
            u1: Matrix::zeros(m, 0),
            u2: Matrix::identity(m, m),
            sigma_r: Vector::zeros(0),
            v1: Matrix::zeros(n, 0),
            v2: Matrix::identity(n, n),
            rank: 0,
            tolerance_used: 0.0,
        });
    }

    let (values, left, right) = thin_svd(a)?;

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    let sigma_1 = values[order[0]];
    let tolerance_used = (rel_tol * sigma_1 * m.max(n) as f64).max(abs_floor);
    let rank = order.iter().filter(|&&i| values[i] > tolerance_used).count();

    let sigma_r = Vector::from_iterator(rank, order[..rank].iter().map(|&i| values[i]));
    let mut u1 = Matrix::zeros(m, rank);
    let mut v1 = Matrix::zeros(n, rank);
    for (k, &i) in order[..rank].iter().enumerate() {
        u1.set_column(k, &left.column(i));
        v1.set_column(k, &right.column(i));
    }

    // Canonical basis inside each block of equal singular values.
    let mut start = 0;
    while start < rank {
        let mut end = start + 1;
        while end < rank && sigma_r[start] - sigma_r[end] <= DEGENERACY_REL_TOL * sigma_1 {
            end += 1;
        }
        if end - start > 1 {
            let block = v1.columns(start, end - start).into_owned();
            let projector = &block * block.transpose();
            let basis = pivoted_basis(projector, end - start, &Matrix::zeros(n, 0));
            // the same rotation carries the left vectors along
            let rotation = block.transpose() * &basis;
            let left_block = u1.columns(start, end - start) * rotation;
            v1.columns_mut(start, end - start).copy_from(&basis);
            u1.columns_mut(start, end - start).copy_from(&left_block);
        }
        start = end;
    }
    for j in 0..rank {
        if sign_flip_needed(v1.column(j).as_slice()) {
            v1.column_mut(j).neg_mut();
            u1.column_mut(j).neg_mut();
        }
    }

    let v2 = orthonormal_complement(&v1);
    let u2 = orthonormal_complement(&u1);

    Ok(SvdBundle {
        u1,
        u2,
        sigma_r,
        v1,
        v2,
        rank,
        tolerance_used,
    })
}

/// Thin SVD from faer: singular values with the matching columns of `U` and `V`.
fn thin_svd(a: &Matrix) -> Result<(Vector, Matrix, Matrix)> {
    let (m, n) = a.shape();
    let fa = faer::Mat::<f64>::from_fn(m, n, |i, j| a[(i, j)]);
    let dec = fa
        .thin_svd()
        .map_err(|e| Error::Input(format!("SVD did not converge: {e:?}")))?;
    let s = dec.S().column_vector();
    let u = dec.U();
    let v = dec.V();
    let k = m.min(n);
    Ok((
        Vector::from_fn(k, |i, _| s[i]),
        Matrix::from_fn(m, k, |i, j| u[(i, j)]),
        Matrix::from_fn(n, k, |i, j| v[(i, j)]),
    ))
}

/// Moore-Penrose pseudoinverse `A^+ = V1 diag(1/sigma) U1^T`.
pub fn pinv(a: &Matrix, rel_tol: f64) -> Result<Matrix> {
    Ok(svd(a, rel_tol)?.pinv())
}

/// One of the four fundamental subspaces of a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FundamentalSpace {
    /// Column space, projector `U1 U1^T`.
    Range,
    /// Row space, projector `V1 V1^T`.
    RowSpace,
    /// Kernel, projector `V2 V2^T`.
    NullSpace,
    /// Kernel of the transpose, projector `U2 U2^T`.
    LeftNullSpace,
}

impl SvdBundle {
    pub fn projector(&self, space: FundamentalSpace) -> Matrix {
        let basis = match space {
            FundamentalSpace::Range => &self.u1,
            FundamentalSpace::RowSpace => &self.v1,
            FundamentalSpace::NullSpace => &self.v2,
            FundamentalSpace::LeftNullSpace => &self.u2,
        };
        basis_projector(basis)
    }
}

pub fn projector(a: &Matrix, space: FundamentalSpace, rel_tol: f64) -> Result<Matrix> {
    Ok(svd(a, rel_tol)?.projector(space))
}

/// `B B^T` for a basis with orthonormal columns.
pub fn basis_projector(basis: &Matrix) -> Matrix {
    basis * basis.transpose()
}

/// Orthonormal basis of the column space of `a` (the `U1` factor).
pub fn range_basis(a: &Matrix, rel_tol: f64) -> Result<Matrix> {
    Ok(svd(a, rel_tol)?.u1)
}

/// Orthonormal basis of the kernel of `a` (the `V2` factor).
pub fn kernel_basis(a: &Matrix, rel_tol: f64) -> Result<Matrix> {
    Ok(svd(a, rel_tol)?.v2)
}

/// Orthonormal basis of the complement of span(`basis`) in `R^rows`.
///
/// Candidates are the residuals of the standard basis vectors, taken largest
/// first; the result depends only on the subspace spanned by `basis`.
pub fn orthonormal_complement(basis: &Matrix) -> Matrix {
    let dim = basis.nrows();
    let wanted = dim.saturating_sub(basis.ncols());
    let residual = Matrix::identity(dim, dim) - basis_projector(basis);
    pivoted_basis(residual, wanted, basis)
}

/// Extract `count` orthonormal vectors from the columns of `residual` by
/// greedy column pivoting, keeping them orthogonal to `against`.
fn pivoted_basis(mut residual: Matrix, count: usize, against: &Matrix) -> Matrix {
    let dim = residual.nrows();
    let mut out = Matrix::zeros(dim, count);
    for k in 0..count {
        let mut best = 0;
        let mut best_norm = -1.0;
        for j in 0..residual.ncols() {
            let norm = residual.column(j).norm();
            // strict comparison with slack keeps the lowest index on ties
            if norm > best_norm * (1.0 + 1e-12) + 1e-300 {
                best = j;
                best_norm = norm;
            }
        }
        let mut v: Vector = residual.column(best).into_owned();
        // two rounds of re-orthogonalization against everything chosen so far
        for _ in 0..2 {
            if against.ncols() > 0 {
                let c = against.transpose() * &v;
                v -= against * c;
            }
            if k > 0 {
                let prev = out.columns(0, k);
                let c = prev.transpose() * &v;
                v -= prev * c;
            }
        }
        let norm = v.norm();
        if norm > 0.0 {
            v /= norm;
        }
        if sign_flip_needed(v.as_slice()) {
            v.neg_mut();
        }
        let proj = v.transpose() * &residual;
        residual -= &v * proj;
        out.set_column(k, &v);
    }
    out
}

fn sign_flip_needed(col: &[f64]) -> bool {
    let peak = col.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if peak == 0.0 {
        return false;
    }
    let lead = col
        .iter()
        .find(|x| x.abs() >= peak * (1.0 - SIGN_TIE_REL_TOL))
        .copied()
        .unwrap_or(0.0);
    lead < 0.0
}

/// Horizontal concatenation `[a b]`.
pub fn hcat(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.nrows(), b.nrows(), "hcat row mismatch");
    let mut out = Matrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

/// Vertical concatenation `[a; b]`.
pub fn vcat(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.ncols(), b.ncols(), "vcat column mismatch");
    let mut out = Matrix::zeros(a.nrows() + b.nrows(), a.ncols());
    out.rows_mut(0, a.nrows()).copy_from(a);
    out.rows_mut(a.nrows(), b.nrows()).copy_from(b);
    out
}

/// 2x2 block matrix `[[a, b], [c, d]]`.
pub fn block2(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
    vcat(&hcat(a, b), &hcat(c, d))
}

/// The canonical symplectic form `[[0, I], [-I, 0]]` on `R^{2q}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    pub q: usize,
}

impl SymplecticForm {
    pub fn new(q: usize) -> Self {
        Self { q }
    }

    /// Form for a `2q x 2q` matrix; errors on non-square or odd sizes.
    pub fn for_matrix(w: &Matrix) -> Result<Self> {
        let (rows, cols) = w.shape();
        if rows != cols || rows % 2 != 0 {
            return Err(Error::NotPhaseSpace { rows, cols });
        }
        Ok(Self::new(rows / 2))
    }

    pub fn dim(&self) -> usize {
        2 * self.q
    }

    pub fn matrix(&self) -> Matrix {
        let q = self.q;
        let mut s = Matrix::zeros(2 * q, 2 * q);
        for i in 0..q {
            s[(i, q + i)] = 1.0;
            s[(q + i, i)] = -1.0;
        }
        s
    }

    /// `y^T sigma z = x(y)^T p(z) - p(y)^T x(z)`.
    pub fn eval(&self, y: &Vector, z: &Vector) -> f64 {
        let q = self.q;
        let mut acc = 0.0;
        for i in 0..q {
            acc += y[i] * z[q + i] - y[q + i] * z[i];
        }
        acc
    }

    /// Skew Gram matrix `B^T sigma B` of a set of column vectors.
    pub fn gram(&self, basis: &Matrix) -> Matrix {
        basis.transpose() * self.matrix() * basis
    }
}

/// `max |W^T sigma W - sigma|`.
pub fn symplectic_residual(w: &Matrix) -> Result<f64> {
    ensure_finite(w)?;
    let form = SymplecticForm::for_matrix(w)?;
    let s = form.matrix();
    Ok(max_abs(&(w.transpose() * &s * w - s)))
}

pub fn is_symplectic(w: &Matrix, tol: f64) -> Result<bool> {
    Ok(symplectic_residual(w)? <= tol)
}

/// Tolerance used by [`symplectic_inverse`] to accept its input.
pub const SYMPLECTIC_CHECK_TOL: f64 = 1e-8;

/// Inverse of a symplectic matrix via its block transpose:
/// `[[E, F], [G, H]]^{-1} = [[H^T, -F^T], [-G^T, E^T]]`.
pub fn symplectic_inverse(w: &Matrix) -> Result<Matrix> {
    let residual = symplectic_residual(w)?;
    if residual > SYMPLECTIC_CHECK_TOL {
        return Err(Error::NotSymplectic { residual });
    }
    let q = w.nrows() / 2;
    let e = w.view((0, 0), (q, q));
    let f = w.view((0, q), (q, q));
    let g = w.view((q, 0), (q, q));
    let h = w.view((q, q), (q, q));
    Ok(block2(
        &h.transpose(),
        &(-f.transpose()),
        &(-g.transpose()),
        &e.transpose(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, data: &[f64]) -> Matrix {
        Matrix::from_row_slice(rows, cols, data)
    }

    fn orth_defect(q: &Matrix) -> f64 {
        max_abs(&(q.transpose() * q - Matrix::identity(q.ncols(), q.ncols())))
    }

    #[test]
    fn identity_has_full_rank_and_unit_values() {
        let s = svd(&Matrix::identity(3, 3), DEFAULT_REL_TOL).unwrap();
        assert_eq!(s.rank, 3);
        for v in s.sigma_r.iter() {
            assert!((v - 1.0).abs() < 1e-15);
        }
        assert_eq!(s.u2.ncols(), 0);
        assert_eq!(s.v2.ncols(), 0);
    }

    #[test]
    fn rank_one_lattice_blocks() {
        // three vertices feeding one: every row (0, 2, 0)
        let r = m(3, 3, &[0., 2., 0., 0., 2., 0., 0., 2., 0.]);
        let s = svd(&r, DEFAULT_REL_TOL).unwrap();
        assert_eq!(s.rank, 1);
        assert!((s.sigma_r[0] - 2.0 * 3f64.sqrt()).abs() < 1e-12);

        // doubled two-vertex step
        let r = m(2, 2, &[2., 2., 2., 2.]);
        let s = svd(&r, DEFAULT_REL_TOL).unwrap();
        assert_eq!(s.rank, 1);
        assert!((s.sigma_r[0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let z = Matrix::zeros(3, 2);
        let s = svd(&z, DEFAULT_REL_TOL).unwrap();
        assert_eq!(s.rank, 0);
        assert_eq!(s.u1.shape(), (3, 0));
        assert_eq!(s.v1.shape(), (2, 0));
        assert!(max_abs(&(s.u2.clone() - Matrix::identity(3, 3))) < 1e-15);
        let p = s.pinv();
        assert_eq!(p.shape(), (2, 3));
        assert_eq!(max_abs(&p), 0.0);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let mut a = Matrix::identity(2, 2);
        a[(1, 0)] = f64::NAN;
        assert!(matches!(
            svd(&a, DEFAULT_REL_TOL),
            Err(Error::NonFinite { row: 1, col: 0 })
        ));
        assert!(matches!(
            svd(&Matrix::identity(2, 2), 0.0),
            Err(Error::InvalidTolerance(_))
        ));
    }

    #[test]
    fn wide_matrices_swap_factors() {
        let a = m(2, 4, &[1., 2., 3., 4., 2., 4., 6., 8.]);
        let s = svd(&a, DEFAULT_REL_TOL).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.u2.shape(), (2, 1));
        assert_eq!(s.v2.shape(), (4, 3));
        assert!(max_abs(&(s.reconstruct() - &a)) < 1e-12);
        assert!(orth_defect(&s.u()) < 1e-12);
        assert!(orth_defect(&s.v()) < 1e-12);
    }

    #[test]
    fn singular_vectors_are_sign_canonical() {
        let a = m(3, 3, &[2., 0., 2., 2., 2., 0., 0., 2., 2.]);
        let s = svd(&a, DEFAULT_REL_TOL).unwrap();
        for col in s.v().column_iter() {
            let peak = col.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            let first = col.iter().find(|x| x.abs() >= peak * (1.0 - 1e-12)).unwrap();
            assert!(*first > 0.0);
        }
        // the degenerate pair sigma = 2 keeps the same span as any other gauge
        assert!((s.sigma_r[1] - 2.0).abs() < 1e-12 && (s.sigma_r[2] - 2.0).abs() < 1e-12);
        let again = svd(&a, DEFAULT_REL_TOL).unwrap();
        assert_eq!(s.v(), again.v());
    }

    #[test]
    fn pinv_examples() {
        let d = m(2, 2, &[2., 0., 0., 0.]);
        let p = pinv(&d, DEFAULT_REL_TOL).unwrap();
        assert!(max_abs(&(p - m(2, 2, &[0.5, 0., 0., 0.]))) < 1e-15);

        let i = Matrix::identity(4, 4);
        assert!(max_abs(&(pinv(&i, DEFAULT_REL_TOL).unwrap() - &i)) < 1e-15);
    }

    #[test]
    fn pinv_of_rank_one_block_matches_outer_product_formula() {
        // A = a b^T  =>  A^+ = b a^T / (|a|^2 |b|^2)
        let a_vec = Vector::from_row_slice(&[1., 1., 1.]);
        let b_vec = Vector::from_row_slice(&[0., 2., 0.]);
        let a = &a_vec * b_vec.transpose();
        let oracle = &b_vec * a_vec.transpose() / (a_vec.norm_squared() * b_vec.norm_squared());
        let p = pinv(&a, DEFAULT_REL_TOL).unwrap();
        assert!(max_abs(&(&p - &oracle)) < 1e-14);
        for j in 0..3 {
            assert!((p[(1, j)] - 1.0 / 6.0).abs() < 1e-14);
            assert!(p[(0, j)].abs() < 1e-14 && p[(2, j)].abs() < 1e-14);
        }
        // Penrose conditions
        assert!(max_abs(&(&a * &p * &a - &a)) < 1e-12);
        assert!(max_abs(&(&p * &a * &p - &p)) < 1e-12);
        assert!(asymmetry(&(&a * &p)) < 1e-12);
        assert!(asymmetry(&(&p * &a)) < 1e-12);
    }

    #[test]
    fn left_null_projector_of_rank_one_block() {
        let r = m(3, 3, &[0., 2., 0., 0., 2., 0., 0., 2., 0.]);
        let p = projector(&r, FundamentalSpace::LeftNullSpace, DEFAULT_REL_TOL).unwrap();
        let expected = m(3, 3, &[-2., 1., 1., 1., -2., 1., 1., 1., -2.]) * (-1.0 / 3.0);
        assert!(max_abs(&(p.clone() - expected)) < 1e-12);
        let range = projector(&r, FundamentalSpace::Range, DEFAULT_REL_TOL).unwrap();
        assert!(max_abs(&(range + p - Matrix::identity(3, 3))) < 1e-12);
    }

    #[test]
    fn range_of_identity_is_identity() {
        let i = Matrix::identity(3, 3);
        let p = projector(&i, FundamentalSpace::Range, DEFAULT_REL_TOL).unwrap();
        assert!(max_abs(&(p - &i)) < 1e-15);
    }

    #[test]
    fn symplectic_checks() {
        assert!(is_symplectic(&Matrix::identity(4, 4), 1e-12).unwrap());
        let d = Matrix::from_diagonal(&Vector::from_row_slice(&[2., 2., 1., 1.]));
        // W^T s W has off-diagonal blocks 2 I, not I
        assert!((symplectic_residual(&d).unwrap() - 1.0).abs() < 1e-15);
        assert!(!is_symplectic(&d, 1e-9).unwrap());
        assert!(matches!(
            is_symplectic(&Matrix::identity(3, 3), 1e-9),
            Err(Error::NotPhaseSpace { rows: 3, cols: 3 })
        ));
    }

    #[test]
    fn symplectic_inverse_examples() {
        let i = Matrix::identity(4, 4);
        assert_eq!(symplectic_inverse(&i).unwrap(), i);
        let s = SymplecticForm::new(2).matrix();
        assert_eq!(symplectic_inverse(&s).unwrap(), -s.clone());
        let d = Matrix::from_diagonal(&Vector::from_row_slice(&[2., 2., 1., 1.]));
        assert!(matches!(
            symplectic_inverse(&d),
            Err(Error::NotSymplectic { .. })
        ));
    }

    #[test]
    fn form_is_antisymmetric_square_root_of_minus_identity() {
        let s = SymplecticForm::new(3).matrix();
        assert_eq!(s.transpose(), -s.clone());
        assert_eq!(&s * &s, -Matrix::identity(6, 6));
    }

    #[test]
    fn complement_is_orthonormal_and_orthogonal() {
        let b = m(4, 1, &[0.5, 0.5, 0.5, 0.5]);
        let c = orthonormal_complement(&b);
        assert_eq!(c.shape(), (4, 3));
        assert!(orth_defect(&c) < 1e-14);
        assert!(max_abs(&(b.transpose() * &c)) < 1e-14);
    }
}
