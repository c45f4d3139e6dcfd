//! Global solutions of multi-step lattices: constraint spaces, their
//! symplectic null spaces and representative spaces.
//!
//! Run with `cargo run --example solution_space`.

use dle::global::{self, constraint_space_d, null_and_representative, solution_product};
use dle::lattice::{self, fixtures};
use dle::linalg::DEFAULT_REL_TOL;
use dle::Vector;

fn main() -> dle::Result<()> {
    for name in ["narrowing", "widening"] {
        let steps = lattice::split_into_steps(&fixtures::load(name).expect("fixture"))?;
        let sol = global::solution_space(&steps, DEFAULT_REL_TOL)?;
        println!("{name}: {} parameters, solution space of dimension {}", sol.param_dim, sol.dim());
        for n in 0..=sol.num_steps() {
            let d = constraint_space_d(&sol, n, DEFAULT_REL_TOL)?;
            let (null, ddot) = null_and_representative(&d, DEFAULT_REL_TOL)?;
            println!("  slice {n}: dim D = {}, dim N = {}, dim Ddot = {}", d.dim(), null.dim(), ddot.dim());
        }

        // the symplectic product of two solutions does not depend on the slice
        let a = sol.kernel.basis() * Vector::from_fn(sol.dim(), |i, _| (i as f64).cos());
        let b = sol.kernel.basis() * Vector::from_fn(sol.dim(), |i, _| (i as f64 + 1.0).sin());
        let products = (0..=sol.num_steps())
            .map(|n| solution_product(&sol, &a, &b, n))
            .collect::<dle::Result<Vec<_>>>()?;
        println!("  omega per slice {products:?}");
    }
    Ok(())
}
