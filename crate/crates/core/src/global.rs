//! Multi-step trajectories and the space of global solutions.
//!
//! A solution on slices `0..=t` is parametrised by the initial state and the
//! free parameters of every move, `theta = (y_0, lambda_1, .., lambda_t)`.
//! Each slice state is a linear image `M_n theta`, and a parameter vector is
//! admissible when every intermediate state lies on the next move's
//! pre-constraint surface. Post-constraints hold automatically for images of
//! forward moves, so only the pre-constraints are stacked.

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs_vec, Matrix, SymplecticForm, Vector};
use crate::timestep::{build_move, EvolutionMove, EvolveOptions, PhaseVector, TimeStepSystem};

/// Tolerance for comparing subspaces through their projectors.
pub const SUBSPACE_TOL: f64 = 1e-8;

/// Singular values of a skew Gram matrix of orthonormal columns are at most
/// one; values below this floor are treated as zero.
pub const GRAM_FLOOR: f64 = 1e-9;

/// Singular values of stacked conditions and slice images below this
/// multiple of the input scale are treated as rounding noise.
pub const RANGE_FLOOR: f64 = 1e-10;

fn scaled_floor(a: &Matrix) -> f64 {
    RANGE_FLOOR * linalg::max_abs(a).max(1.0)
}

/// States on every slice together with the parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<PhaseVector>,
    pub lambdas: Vec<Vector>,
}

/// Where and why a trajectory stopped.
#[derive(Debug, Clone)]
pub struct Rejection {
    /// Slice whose state failed the pre-constraint of the following move.
    pub slice: usize,
    /// `max |C y|` at that slice.
    pub residual: f64,
    /// Indices of the constraint rows above tolerance.
    pub constraint_rows: Vec<usize>,
    /// The full residual vector `C y`.
    pub offending: Vector,
    /// States on slices `0..=slice`.
    pub partial: Vec<PhaseVector>,
}

/// Build forward moves for a chain of steps.
pub fn build_moves(steps: &[TimeStepSystem], rel_tol: f64) -> Result<Vec<EvolutionMove>> {
    steps.iter().map(|s| build_move(s, rel_tol)).collect()
}

/// Zero free parameters of the right sizes.
pub fn zero_lambdas(moves: &[EvolutionMove]) -> Vec<Vector> {
    moves.iter().map(|m| Vector::zeros(m.s())).collect()
}

pub fn run_trajectory(
    steps: &[TimeStepSystem],
    y0: &PhaseVector,
    lambdas: &[Vector],
    options: &EvolveOptions,
    rel_tol: f64,
) -> Result<Trajectory> {
    run_moves(&build_moves(steps, rel_tol)?, y0, lambdas, options)
}

/// Like [`run_trajectory`] with prebuilt moves.
pub fn run_moves(
    moves: &[EvolutionMove],
    y0: &PhaseVector,
    lambdas: &[Vector],
    options: &EvolveOptions,
) -> Result<Trajectory> {
    if lambdas.len() != moves.len() {
        return Err(Error::Dimension {
            what: "lambda list",
            expected: moves.len(),
            got: lambdas.len(),
        });
    }
    let mut states = vec![y0.clone()];
    for (n, (mv, lambda)) in moves.iter().zip(lambdas).enumerate() {
        let y = &states[n];
        match mv.evolve(y, lambda, options) {
            Ok(next) => states.push(next),
            Err(Error::ConstraintViolation { residual, tolerance }) => {
                let offending = mv.pre_constraint_residual(y)?;
                let constraint_rows = offending
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.abs() > tolerance)
                    .map(|(i, _)| i)
                    .collect();
                return Err(Error::Rejected(Box::new(Rejection {
                    slice: n,
                    residual,
                    constraint_rows,
                    offending,
                    partial: states,
                })));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Trajectory {
        states,
        lambdas: lambdas.to_vec(),
    })
}

/// A linear subspace given by orthonormal basis columns.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    basis: Matrix,
}

impl SubspaceBasis {
    /// Orthonormalise the column span of `spanning`.
    pub fn from_spanning(spanning: &Matrix, rel_tol: f64) -> Result<Self> {
        Ok(Self {
            basis: linalg::range_basis(spanning, rel_tol)?,
        })
    }

    /// Wrap columns that are already orthonormal.
    pub fn from_orthonormal(basis: Matrix) -> Result<Self> {
        let k = basis.ncols();
        let err = linalg::max_abs(&(basis.transpose() * &basis - Matrix::identity(k, k)));
        if err > 1e-10 {
            return Err(Error::Input(format!(
                "basis columns are not orthonormal (error {err:.3e})"
            )));
        }
        Ok(Self { basis })
    }

    pub fn full(n: usize) -> Self {
        Self {
            basis: Matrix::identity(n, n),
        }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn projector(&self) -> Matrix {
        linalg::basis_projector(&self.basis)
    }

    /// Projector distance `max |P_a - P_b|`.
    pub fn distance(&self, other: &SubspaceBasis) -> f64 {
        linalg::max_abs(&(self.projector() - other.projector()))
    }

    pub fn same_as(&self, other: &SubspaceBasis, tol: f64) -> bool {
        self.ambient_dim() == other.ambient_dim() && self.distance(other) <= tol
    }

    /// `max |v - P v|`.
    pub fn distance_to(&self, v: &Vector) -> f64 {
        max_abs_vec(&(v - self.projector() * v))
    }
}

/// Admissible parameters of a chain and the maps to each slice.
#[derive(Debug, Clone)]
pub struct SolutionSpace {
    pub q: usize,
    pub param_dim: usize,
    pub kernel: SubspaceBasis,
    /// `2q x param_dim` map from parameters to the state on slice n.
    pub slice_maps: Vec<Matrix>,
    pub free_parameters: Vec<usize>,
}

impl SolutionSpace {
    /// Dimension of the solution space.
    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    pub fn num_steps(&self) -> usize {
        self.slice_maps.len() - 1
    }

    pub fn state(&self, theta: &Vector, n: usize) -> Result<PhaseVector> {
        let map = self.slice_map(n)?;
        self.check_param(theta)?;
        PhaseVector::from_stacked(&(map * theta))
    }

    pub fn slice_map(&self, n: usize) -> Result<&Matrix> {
        self.slice_maps.get(n).ok_or(Error::SliceOutOfRange {
            index: n,
            last: self.num_steps(),
        })
    }

    /// Split a parameter vector into `y_0` and the per-step lambdas.
    pub fn split_param(&self, theta: &Vector) -> Result<(PhaseVector, Vec<Vector>)> {
        self.check_param(theta)?;
        let y0 = PhaseVector::from_stacked(&theta.rows(0, 2 * self.q).into_owned())?;
        let mut offset = 2 * self.q;
        let lambdas = self
            .free_parameters
            .iter()
            .map(|&s| {
                let l = theta.rows(offset, s).into_owned();
                offset += s;
                l
            })
            .collect();
        Ok((y0, lambdas))
    }

    /// Error unless `theta` lies in the kernel.
    pub fn check_admissible(&self, theta: &Vector) -> Result<()> {
        self.check_param(theta)?;
        let distance = self.kernel.distance_to(theta);
        if distance > SUBSPACE_TOL * max_abs_vec(theta).max(1.0) {
            return Err(Error::OutsideSolutionSpace { distance });
        }
        Ok(())
    }

    fn check_param(&self, theta: &Vector) -> Result<()> {
        if theta.len() != self.param_dim {
            return Err(Error::Dimension {
                what: "parameter vector",
                expected: self.param_dim,
                got: theta.len(),
            });
        }
        Ok(())
    }
}

pub fn solution_space(steps: &[TimeStepSystem], rel_tol: f64) -> Result<SolutionSpace> {
    solution_space_from_moves(&build_moves(steps, rel_tol)?, rel_tol)
}

pub fn solution_space_from_moves(moves: &[EvolutionMove], rel_tol: f64) -> Result<SolutionSpace> {
    let Some(first) = moves.first() else {
        return Err(Error::Input("need at least one step".into()));
    };
    let q = first.q();
    let free_parameters: Vec<usize> = moves.iter().map(EvolutionMove::s).collect();
    let param_dim = 2 * q + free_parameters.iter().sum::<usize>();

    let mut map = Matrix::zeros(2 * q, param_dim);
    map.view_mut((0, 0), (2 * q, 2 * q))
        .copy_from(&Matrix::identity(2 * q, 2 * q));
    let mut slice_maps = vec![map.clone()];
    let mut conditions = Matrix::zeros(0, param_dim);
    let mut offset = 2 * q;
    for mv in moves {
        if mv.q() != q {
            return Err(Error::Dimension {
                what: "step size q",
                expected: q,
                got: mv.q(),
            });
        }
        conditions = linalg::vcat(&conditions, &(&mv.c * &map));
        let mut next = &mv.e * &map;
        next.view_mut((0, offset), (2 * q, mv.s())).copy_from(&mv.f);
        offset += mv.s();
        map = next;
        slice_maps.push(map.clone());
    }
    let floor = scaled_floor(&conditions);
    let kernel = SubspaceBasis::from_orthonormal(
        linalg::svd_with_floor(&conditions, rel_tol, floor)?.v2,
    )?;
    Ok(SolutionSpace {
        q,
        param_dim,
        kernel,
        slice_maps,
        free_parameters,
    })
}

/// States on slice `n` reachable by global solutions.
pub fn constraint_space_d(sol: &SolutionSpace, n: usize, rel_tol: f64) -> Result<SubspaceBasis> {
    let map = sol.slice_map(n)?;
    let image = map * sol.kernel.basis();
    Ok(SubspaceBasis {
        basis: linalg::svd_with_floor(&image, rel_tol, scaled_floor(map))?.u1,
    })
}

/// `omega_n` of the slice-n states of two admissible parameter vectors.
pub fn solution_product(sol: &SolutionSpace, a: &Vector, b: &Vector, n: usize) -> Result<f64> {
    sol.check_admissible(a)?;
    sol.check_admissible(b)?;
    let form = SymplecticForm::new(sol.q);
    let map = sol.slice_map(n)?;
    Ok(form.eval(&(map * a), &(map * b)))
}

/// Split `d` into its symplectic null space and the orthogonal
/// representative complement on which `omega` is nondegenerate.
pub fn null_and_representative(
    d: &SubspaceBasis,
    rel_tol: f64,
) -> Result<(SubspaceBasis, SubspaceBasis)> {
    let form = phase_form(d)?;
    let b = d.basis();
    let gram = form.gram(b);
    let svd = linalg::svd_with_floor(&gram, rel_tol, GRAM_FLOOR)?;
    Ok((
        SubspaceBasis { basis: b * &svd.v2 },
        SubspaceBasis { basis: b * &svd.v1 },
    ))
}

/// Rank of the skew Gram matrix of `d`.
pub fn form_rank(d: &SubspaceBasis, rel_tol: f64) -> Result<usize> {
    let form = phase_form(d)?;
    Ok(linalg::svd_with_floor(&form.gram(d.basis()), rel_tol, GRAM_FLOOR)?.rank)
}

fn phase_form(d: &SubspaceBasis) -> Result<SymplecticForm> {
    let n = d.ambient_dim();
    if !n.is_multiple_of(2) {
        return Err(Error::NotPhaseSpace { rows: n, cols: d.dim() });
    }
    Ok(SymplecticForm::new(n / 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_REL_TOL;

    #[test]
    fn full_space_has_no_null_directions() {
        let (n, ddot) = null_and_representative(&SubspaceBasis::full(4), DEFAULT_REL_TOL).unwrap();
        assert_eq!((n.dim(), ddot.dim()), (0, 4));
    }

    #[test]
    fn line_is_its_own_null_space() {
        let v = Matrix::from_column_slice(4, 1, &[1., 2., 0., -1.]);
        let d = SubspaceBasis::from_spanning(&v, DEFAULT_REL_TOL).unwrap();
        let (n, ddot) = null_and_representative(&d, DEFAULT_REL_TOL).unwrap();
        assert_eq!((n.dim(), ddot.dim()), (1, 0));
        assert!(n.same_as(&d, 1e-12));
    }

    #[test]
    fn orthonormality_is_checked() {
        assert!(SubspaceBasis::from_orthonormal(Matrix::from_column_slice(2, 1, &[1., 1.])).is_err());
    }

    #[test]
    fn empty_chain_is_rejected() {
        assert!(solution_space(&[], DEFAULT_REL_TOL).is_err());
    }
}
