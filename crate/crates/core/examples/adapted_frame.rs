//! Adapted symplectic coordinates, in which a move copies, injects and zeroes.
//!
//! Run with `cargo run --example adapted_frame`.

use dle::adapted::{self, Slice};
use dle::lattice::{self, fixtures};
use dle::linalg::{self, DEFAULT_REL_TOL};
use dle::timestep::{build_move, EvolveOptions, PhaseVector};
use dle::Vector;

fn main() -> dle::Result<()> {
    let step = &lattice::split_into_steps(&fixtures::load("example_6_3").expect("fixture"))?[0];
    let frame = adapted::build_frame(step, DEFAULT_REL_TOL)?;
    println!("r = {}, s = {}", frame.r, frame.s);
    println!("Wdot = {}", frame.wdot);
    println!(
        "symplectic defects {:e} {:e}",
        linalg::symplectic_residual(&frame.wdot)?,
        linalg::symplectic_residual(&frame.wddot)?
    );

    let y0 = PhaseVector::from_slice(&[0., 1., 0., 0., 1., 0.])?;
    let u0 = adapted::to_adapted(&frame, &y0, Slice::Current)?;
    println!("adapted y0 = {}", u0.transpose());
    println!("{:?}", adapted::classify(&frame, &y0, Slice::Current)?);

    let lambda = Vector::from_row_slice(&[0.3, -0.8]);
    let u1 = adapted::evolve_adapted(&frame, &u0, &lambda)?;
    println!("adapted y1 = {}", u1.transpose());

    // the same step in the original coordinates lands on the same point
    let y1 = build_move(step, DEFAULT_REL_TOL)?.evolve(&y0, &lambda, &EvolveOptions::default())?;
    let direct = adapted::to_adapted(&frame, &y1, Slice::Next)?;
    println!("commutation error {:e}", (direct - &u1).amax());
    println!("back in phase space {}", adapted::from_adapted(&frame, &u1, Slice::Next)?.stacked().transpose());
    Ok(())
}
