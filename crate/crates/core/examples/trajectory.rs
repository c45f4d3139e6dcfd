//! Multi-step evolution through a lattice whose middle slice narrows to a
//! single vertex.
//!
//! Run with `cargo run --example trajectory`.

use dle::global::{self, run_trajectory};
use dle::lattice::{self, fixtures};
use dle::linalg::DEFAULT_REL_TOL;
use dle::timestep::{EvolveOptions, PhaseVector};
use dle::{Error, Vector};

fn main() -> dle::Result<()> {
    let steps = lattice::split_into_steps(&fixtures::load("narrowing").expect("fixture"))?;
    let moves = global::build_moves(&steps, DEFAULT_REL_TOL)?;
    for (n, mv) in moves.iter().enumerate() {
        println!("step {n}: rank {}, s = {}", mv.rank(), mv.s());
    }

    // a generic start is evolved once, then fails the next pre-constraint
    let opts = EvolveOptions::default();
    let y0 = PhaseVector::from_slice(&[1., 0.5, -0.5, 0.2, 0.1, -0.3])?;
    let lambdas = global::zero_lambdas(&moves);
    match run_trajectory(&steps, &y0, &lambdas, &opts, DEFAULT_REL_TOL) {
        Err(Error::Rejected(rej)) => println!(
            "rejected at slice {} (residual {:.3e}, rows {:?}), {} states computed",
            rej.slice,
            rej.residual,
            rej.constraint_rows,
            rej.partial.len()
        ),
        other => println!("unexpected: {other:?}"),
    }

    // a global solution chosen from the solution space runs to the end
    let sol = global::solution_space(&steps, DEFAULT_REL_TOL)?;
    let theta = sol.kernel.basis() * Vector::from_fn(sol.dim(), |i, _| 1.0 / (i + 1) as f64);
    let (y0, lambdas) = sol.split_param(&theta)?;
    let traj = run_trajectory(&steps, &y0, &lambdas, &opts, DEFAULT_REL_TOL)?;
    for (n, y) in traj.states.iter().enumerate() {
        println!("slice {n}: x = {}", y.x.transpose());
    }
    Ok(())
}
