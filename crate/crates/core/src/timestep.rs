//! One evolution move between neighbouring time slices.
//!
//! A linear time step is fixed by the quadratic action
//! `S = -1/2 (x^T L x + 2 x^T R x' - x'^T Rbar x')`, whose momenta are
//!
//! ```text
//! p  = L x + R x'          (pre-momentum at slice n)
//! p' = Lbar x + Rbar x'    (post-momentum at slice n+1), Lbar = -R^T
//! ```
//!
//! Solving the first relation for `x'` with the pseudoinverse of `R` gives the
//! forward move `y' = E y + F lambda`, defined on the pre-constraint surface
//! `C y = 0`. When `R` is rank deficient the move carries `s = q - rank R`
//! free parameters.

use crate::error::{Error, Result};
use crate::linalg::{
    self, asymmetry, block2, ensure_finite, hcat, max_abs_vec, vcat, FundamentalSpace, Matrix,
    SvdBundle, Vector,
};
use rand::Rng;

/// Symmetry tolerance for `L` and `Rbar`.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Default relative tolerance for "on the constraint surface".
pub const DEFAULT_CONSTRAINT_TOL: f64 = 1e-8;

/// The matrices `(L, R, Rbar)` of one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeStepSystem {
    l: Matrix,
    r: Matrix,
    rbar: Matrix,
}

impl TimeStepSystem {
    pub fn new(l: Matrix, r: Matrix, rbar: Matrix) -> Result<Self> {
        let q = l.nrows();
        for (what, m) in [("L", &l), ("R", &r), ("Rbar", &rbar)] {
            if m.nrows() != q {
                return Err(Error::Dimension {
                    what,
                    expected: q,
                    got: m.nrows(),
                });
            }
            if m.ncols() != q {
                return Err(Error::Dimension {
                    what,
                    expected: q,
                    got: m.ncols(),
                });
            }
            ensure_finite(m)?;
        }
        for (name, m) in [("L", &l), ("Rbar", &rbar)] {
            let asymmetry = asymmetry(m);
            if asymmetry > SYMMETRY_TOL {
                return Err(Error::NotSymmetric { name, asymmetry });
            }
        }
        Ok(Self { l, r, rbar })
    }

    pub fn q(&self) -> usize {
        self.l.nrows()
    }

    pub fn l(&self) -> &Matrix {
        &self.l
    }

    pub fn r(&self) -> &Matrix {
        &self.r
    }

    pub fn rbar(&self) -> &Matrix {
        &self.rbar
    }

    /// `Lbar = -R^T`, always derived.
    pub fn lbar(&self) -> Matrix {
        -self.r.transpose()
    }

    pub fn pre_momentum(&self, x: &Vector, x_next: &Vector) -> Result<Vector> {
        self.check_config(x, x_next)?;
        Ok(&self.l * x + &self.r * x_next)
    }

    pub fn post_momentum(&self, x: &Vector, x_next: &Vector) -> Result<Vector> {
        self.check_config(x, x_next)?;
        Ok(self.lbar() * x + &self.rbar * x_next)
    }

    /// Action contribution `-1/2 (x^T L x + 2 x^T R x' - x'^T Rbar x')`.
    pub fn step_action(&self, x: &Vector, x_next: &Vector) -> Result<f64> {
        self.check_config(x, x_next)?;
        let quad = x.dot(&(&self.l * x)) + 2.0 * x.dot(&(&self.r * x_next))
            - x_next.dot(&(&self.rbar * x_next));
        Ok(-0.5 * quad)
    }

    fn check_config(&self, x: &Vector, x_next: &Vector) -> Result<()> {
        let q = self.q();
        for v in [x, x_next] {
            if v.len() != q {
                return Err(Error::Dimension {
                    what: "configuration vector",
                    expected: q,
                    got: v.len(),
                });
            }
        }
        Ok(())
    }
}

/// Free-function form of [`TimeStepSystem::step_action`].
pub fn step_action(sys: &TimeStepSystem, x: &Vector, x_next: &Vector) -> Result<f64> {
    sys.step_action(x, x_next)
}

/// A point `(x, p)` of the phase space of one slice.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    pub x: Vector,
    pub p: Vector,
}

impl PhaseVector {
    pub fn new(x: Vector, p: Vector) -> Result<Self> {
        if x.len() != p.len() {
            return Err(Error::Dimension {
                what: "momentum block",
                expected: x.len(),
                got: p.len(),
            });
        }
        if x.iter().chain(p.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Input("phase vector has non-finite entries".into()));
        }
        Ok(Self { x, p })
    }

    pub fn zeros(q: usize) -> Self {
        Self {
            x: Vector::zeros(q),
            p: Vector::zeros(q),
        }
    }

    /// Split a stacked `(x; p)` vector of even length.
    pub fn from_stacked(y: &Vector) -> Result<Self> {
        if !y.len().is_multiple_of(2) {
            return Err(Error::Input(format!(
                "phase vector length {} is odd",
                y.len()
            )));
        }
        let q = y.len() / 2;
        Self::new(y.rows(0, q).into_owned(), y.rows(q, q).into_owned())
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::from_stacked(&Vector::from_column_slice(values))
    }

    pub fn q(&self) -> usize {
        self.x.len()
    }

    pub fn stacked(&self) -> Vector {
        let q = self.q();
        let mut y = Vector::zeros(2 * q);
        y.rows_mut(0, q).copy_from(&self.x);
        y.rows_mut(q, q).copy_from(&self.p);
        y
    }

    pub fn max_abs(&self) -> f64 {
        max_abs_vec(&self.x).max(max_abs_vec(&self.p))
    }
}

/// `omega(y, z) = x(y)^T p(z) - x(z)^T p(y)`.
pub fn symplectic_product(y: &PhaseVector, z: &PhaseVector) -> Result<f64> {
    if y.q() != z.q() {
        return Err(Error::Dimension {
            what: "phase vector",
            expected: y.q(),
            got: z.q(),
        });
    }
    Ok(y.x.dot(&z.p) - z.x.dot(&y.p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Slice n to slice n+1, driven by the SVD of `R`.
    Forward,
    /// Slice n+1 to slice n, driven by the SVD of `Lbar`.
    Backward,
}

/// How [`EvolutionMove::evolve`] treats states off the pre-constraint surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Relative tolerance: accept when `|C y|_max <= tol * max(1, |y|_max)`.
    pub constraint_tol: f64,
    /// Orthogonally project onto the surface instead of rejecting.
    pub project: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            constraint_tol: DEFAULT_CONSTRAINT_TOL,
            project: false,
        }
    }
}

/// Precomputed evolution map `y' = E y + F lambda` with its constraints.
#[derive(Debug, Clone)]
pub struct EvolutionMove {
    pub direction: Direction,
    /// `2q x 2q` homogeneous part.
    pub e: Matrix,
    /// `2q x s` free-parameter directions.
    pub f: Matrix,
    /// `q x 2q` pre-constraint at the source slice.
    pub c: Matrix,
    /// `q x 2q` post-constraint satisfied by every image at the target slice.
    pub cbar_next: Matrix,
    /// SVD of `R` (forward) or `Lbar` (backward).
    pub svd: SvdBundle,
    surface: Matrix,
    constraint_rank: usize,
}

impl EvolutionMove {
    pub fn q(&self) -> usize {
        self.c.nrows()
    }

    /// Number of free parameters.
    pub fn s(&self) -> usize {
        self.f.ncols()
    }

    /// Rank of the driving matrix (`R` or `Lbar`).
    pub fn rank(&self) -> usize {
        self.svd.rank
    }

    /// Number of independent rows of `C`; equals `s`.
    pub fn constraint_rank(&self) -> usize {
        self.constraint_rank
    }

    /// Orthonormal basis (columns) of the pre-constraint surface `ker C`.
    pub fn surface_basis(&self) -> &Matrix {
        &self.surface
    }

    /// Orthogonal projector onto `ker C`.
    pub fn surface_projector(&self) -> Matrix {
        linalg::basis_projector(&self.surface)
    }

    pub fn pre_constraint_residual(&self, y: &PhaseVector) -> Result<Vector> {
        self.check_state(y)?;
        Ok(&self.c * y.stacked())
    }

    pub fn post_constraint_residual(&self, y: &PhaseVector) -> Result<Vector> {
        self.check_state(y)?;
        Ok(&self.cbar_next * y.stacked())
    }

    /// Whether `y` lies on the pre-constraint surface within `tol`.
    pub fn satisfies_pre_constraint(&self, y: &PhaseVector, tol: f64) -> Result<bool> {
        let res = self.pre_constraint_residual(y)?;
        Ok(max_abs_vec(&res) <= tol * y.max_abs().max(1.0))
    }

    /// `E y + F lambda` for `y` on the pre-constraint surface.
    pub fn evolve(
        &self,
        y: &PhaseVector,
        lambda: &Vector,
        options: &EvolveOptions,
    ) -> Result<PhaseVector> {
        linalg::ensure_tolerance(options.constraint_tol)?;
        self.check_state(y)?;
        if lambda.len() != self.s() {
            return Err(Error::Dimension {
                what: "free parameters",
                expected: self.s(),
                got: lambda.len(),
            });
        }
        let mut stacked = y.stacked();
        if options.project {
            stacked = self.surface_projector() * stacked;
        } else {
            let residual = max_abs_vec(&(&self.c * &stacked));
            let tolerance = options.constraint_tol * y.max_abs().max(1.0);
            if residual > tolerance {
                return Err(Error::ConstraintViolation {
                    residual,
                    tolerance,
                });
            }
        }
        PhaseVector::from_stacked(&(&self.e * stacked + &self.f * lambda))
    }

    fn check_state(&self, y: &PhaseVector) -> Result<()> {
        if y.q() != self.q() {
            return Err(Error::Dimension {
                what: "phase vector",
                expected: self.q(),
                got: y.q(),
            });
        }
        Ok(())
    }
}

/// Forward move from slice n to n+1.
pub fn build_move(sys: &TimeStepSystem, rel_tol: f64) -> Result<EvolutionMove> {
    let svd = linalg::svd(sys.r(), rel_tol)?;
    let r_pinv = svd.pinv();
    let (l, rbar) = (sys.l(), sys.rbar());

    let top_left = -(&r_pinv * l);
    let bottom_left = sys.lbar() - rbar * &r_pinv * l;
    let bottom_right = rbar * &r_pinv;
    let e = block2(&top_left, &r_pinv, &bottom_left, &bottom_right);
    let f = vcat(&svd.v2, &(rbar * &svd.v2));

    let p_pre = svd.projector(FundamentalSpace::LeftNullSpace);
    let c = hcat(&(-(&p_pre * l)), &p_pre);
    // N(Lbar^T) = N(R): projector V2 V2^T
    let p_post = svd.projector(FundamentalSpace::NullSpace);
    let cbar_next = hcat(&(-(&p_post * rbar)), &p_post);

    finish(Direction::Forward, e, f, c, cbar_next, svd, rel_tol)
}

/// Backward move from slice n+1 to n; its pre-constraint acts at slice n+1.
pub fn build_backward_move(sys: &TimeStepSystem, rel_tol: f64) -> Result<EvolutionMove> {
    let lbar = sys.lbar();
    let svd = linalg::svd(&lbar, rel_tol)?;
    let lbar_pinv = svd.pinv();
    let (l, r, rbar) = (sys.l(), sys.r(), sys.rbar());

    let top_left = -(&lbar_pinv * rbar);
    let bottom_left = r - l * &lbar_pinv * rbar;
    let bottom_right = l * &lbar_pinv;
    let e = block2(&top_left, &lbar_pinv, &bottom_left, &bottom_right);
    let f = vcat(&svd.v2, &(l * &svd.v2));

    let p_pre = svd.projector(FundamentalSpace::LeftNullSpace);
    let c = hcat(&(-(&p_pre * rbar)), &p_pre);
    // images satisfy the forward pre-constraint at slice n: N(R^T) = N(Lbar)
    let p_post = svd.projector(FundamentalSpace::NullSpace);
    let cbar_next = hcat(&(-(&p_post * l)), &p_post);

    finish(Direction::Backward, e, f, c, cbar_next, svd, rel_tol)
}

fn finish(
    direction: Direction,
    e: Matrix,
    f: Matrix,
    c: Matrix,
    cbar_next: Matrix,
    svd: SvdBundle,
    rel_tol: f64,
) -> Result<EvolutionMove> {
    let c_svd = linalg::svd(&c, rel_tol)?;
    Ok(EvolutionMove {
        direction,
        e,
        f,
        c,
        cbar_next,
        svd,
        surface: c_svd.v2,
        constraint_rank: c_svd.rank,
    })
}

/// Random step with `q <= max_q` and `rank R < q`, entries uniform in a
/// small box. `R` is a product of `q x k` and `k x q` factors.
pub fn random_irregular_system<G: Rng + ?Sized>(rng: &mut G, max_q: usize) -> TimeStepSystem {
    let q = rng.random_range(1..=max_q.max(1));
    let k = rng.random_range(0..q);
    let mut uniform = |rows: usize, cols: usize, scale: f64| {
        Matrix::from_fn(rows, cols, |_, _| rng.random_range(-scale..=scale))
    };
    let r = uniform(q, k, 1.5) * uniform(k, q, 1.5);
    let l = uniform(q, q, 2.0);
    let rbar = uniform(q, q, 2.0);
    TimeStepSystem::new(
        (&l + l.transpose()) * 0.5,
        r,
        (&rbar + rbar.transpose()) * 0.5,
    )
    .expect("symmetrized blocks are valid")
}
