//! One regular evolution move on a small triangulated tube.
//!
//! Run with `cargo run --example evolve_step`.

use dle::lattice::{self, fixtures};
use dle::linalg::DEFAULT_REL_TOL;
use dle::timestep::{self, build_move, EvolveOptions, PhaseVector};
use dle::Vector;

fn main() -> dle::Result<()> {
    let spec = fixtures::load("example_6_1").expect("bundled fixture");
    let step = &lattice::split_into_steps(&spec)?[0];
    let mv = build_move(step, DEFAULT_REL_TOL)?;
    println!("q = {}, rank R = {}, free parameters s = {}", mv.q(), mv.rank(), mv.s());
    println!("E = {}", mv.e);

    let opts = EvolveOptions::default();
    let none = Vector::zeros(0);
    let y = PhaseVector::from_slice(&[1., 0., 0., 0., 0., 0.])?;
    let z = PhaseVector::from_slice(&[0., 0., 0., 1., 0., 0.])?;
    let y1 = mv.evolve(&y, &none, &opts)?;
    let z1 = mv.evolve(&z, &none, &opts)?;
    println!("x1 = {}", y1.x.transpose());
    println!("p1 = {}", y1.p.transpose());

    // momentum matching: the evolved momentum is the post-momentum of the step
    let post = step.post_momentum(&y.x, &y1.x)?;
    println!("post-momentum mismatch {:e}", (post - &y1.p).amax());

    let before = timestep::symplectic_product(&y, &z)?;
    let after = timestep::symplectic_product(&y1, &z1)?;
    println!("omega before {before}, after {after}");
    Ok(())
}
