//! Evolving backward in time through the same step.
//!
//! Run with `cargo run --example backward_move`.

use dle::lattice::{self, fixtures};
use dle::linalg::DEFAULT_REL_TOL;
use dle::timestep::{build_backward_move, build_move, EvolveOptions, PhaseVector};
use dle::Vector;

fn main() -> dle::Result<()> {
    let opts = EvolveOptions::default();

    let regular = &lattice::split_into_steps(&fixtures::load("example_6_1").expect("fixture"))?[0];
    let forward = build_move(regular, DEFAULT_REL_TOL)?;
    let backward = build_backward_move(regular, DEFAULT_REL_TOL)?;
    let y0 = PhaseVector::from_slice(&[0.5, -1., 2., 0., 1., 0.25])?;
    let y1 = forward.evolve(&y0, &Vector::zeros(0), &opts)?;
    let back = backward.evolve(&y1, &Vector::zeros(0), &opts)?;
    println!("regular step, round trip error {:e}", (back.stacked() - y0.stacked()).amax());

    // the wide-to-narrow step is irregular in both directions
    let step = &lattice::split_into_steps(&fixtures::load("example_6_3").expect("fixture"))?[0];
    let forward = build_move(step, DEFAULT_REL_TOL)?;
    let backward = build_backward_move(step, DEFAULT_REL_TOL)?;
    println!("forward: rank {}, s = {}", forward.rank(), forward.s());
    println!("backward: rank {}, s = {}", backward.rank(), backward.s());

    let y0 = PhaseVector::from_slice(&[0., 1., 0., 0., 1., 0.])?;
    let y1 = forward.evolve(&y0, &Vector::from_row_slice(&[0.3, -0.8]), &opts)?;
    println!("forward image {}", y1.stacked().transpose());
    // the backward move recovers a state on the slice-0 surface, with its
    // own free parameters in place of the lost information
    let back = backward.evolve(&y1, &Vector::zeros(backward.s()), &opts)?;
    println!("backward image {}", back.stacked().transpose());
    println!("forward pre-constraint residual {:e}", forward.pre_constraint_residual(&back)?.amax());
    Ok(())
}
