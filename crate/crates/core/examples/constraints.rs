//! Pre-constraints, rejection and free parameters of an irregular step.
//!
//! Run with `cargo run --example constraints`.

use dle::lattice::{self, fixtures};
use dle::linalg::DEFAULT_REL_TOL;
use dle::timestep::{build_move, EvolveOptions, PhaseVector};
use dle::{Error, Vector};

fn main() -> dle::Result<()> {
    let spec = fixtures::load("example_6_2").expect("bundled fixture");
    let step = &lattice::split_into_steps(&spec)?[0];
    let mv = build_move(step, DEFAULT_REL_TOL)?;
    println!("rank R = {}, s = {}, independent constraints = {}", mv.rank(), mv.s(), mv.constraint_rank());
    println!("C = {}", mv.c);

    let strict = EvolveOptions::default();
    let off = PhaseVector::from_slice(&[1., 0., 0., 0., 0., 0.])?;
    match mv.evolve(&off, &Vector::zeros(mv.s()), &strict) {
        Err(Error::ConstraintViolation { residual, tolerance }) => {
            println!("rejected: residual {residual:.3} above {tolerance:e}")
        }
        other => println!("unexpected: {other:?}"),
    }

    let projected = EvolveOptions { project: true, ..strict };
    let y1 = mv.evolve(&off, &Vector::zeros(mv.s()), &projected)?;
    println!("after projection: {}", y1.stacked().transpose());

    // a state on the surface; the two free parameters move the virtual-adjacent field
    let on = PhaseVector::from_slice(&[2., 0., 0., -1., 0., 0.])?;
    for lambda in [[0., 0.], [1., 0.], [0., 1.]] {
        let y1 = mv.evolve(&on, &Vector::from_row_slice(&lambda), &strict)?;
        println!("lambda {lambda:?} -> x1 = {}", y1.x.transpose());
    }
    println!("F = {}", mv.f);
    Ok(())
}
