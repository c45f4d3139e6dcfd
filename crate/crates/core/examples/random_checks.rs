//! Invariants on randomly generated systems and tube lattices.
//!
//! Run with `cargo run --example random_checks`.

use dle::adapted::{self, Slice};
use dle::lattice::{self, random_tube_lattice};
use dle::linalg::{self, SymplecticForm, DEFAULT_REL_TOL};
use dle::timestep::{build_move, random_irregular_system};
use dle::Vector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn uniform(n: usize, rng: &mut ChaCha8Rng) -> Vector {
    Vector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0))
}

fn main() -> dle::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    let (mut conservation, mut commutation) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let sys = random_irregular_system(&mut rng, 6);
        let mv = build_move(&sys, DEFAULT_REL_TOL)?;
        let frame = adapted::build_frame(&sys, DEFAULT_REL_TOL)?;
        let form = SymplecticForm::new(sys.q());
        let basis = mv.surface_basis().clone();
        let y = &basis * uniform(basis.ncols(), &mut rng);
        let z = &basis * uniform(basis.ncols(), &mut rng);
        let (ly, lz) = (uniform(mv.s(), &mut rng), uniform(mv.s(), &mut rng));
        let y1 = &mv.e * &y + &mv.f * &ly;
        let z1 = &mv.e * &z + &mv.f * &lz;
        conservation = conservation.max((form.eval(&y1, &z1) - form.eval(&y, &z)).abs());

        let u = &frame.wdot * &y;
        let via_frame = adapted::evolve_adapted(&frame, &u, &ly)?;
        let direct = adapted::to_adapted(&frame, &dle::timestep::PhaseVector::from_stacked(&y1)?, Slice::Next)?;
        commutation = commutation.max((direct - via_frame).amax());
    }
    println!("100 random systems: worst omega drift {conservation:e}, worst commutation {commutation:e}");

    let mut worst = 0.0f64;
    for _ in 0..50 {
        let spec = random_tube_lattice(&mut rng, 4, 5);
        let k = lattice::build_dynamical_matrix(&spec);
        let phi = uniform(spec.dim(), &mut rng);
        let total = lattice::total_action(&spec, &phi)?;
        let split: f64 = lattice::step_actions(&spec, &phi)?.iter().sum();
        worst = worst
            .max(k.max_row_sum())
            .max((total - 0.5 * phi.dot(&(&k.k * &phi))).abs())
            .max((total - split).abs());
    }
    println!("50 random tube lattices: worst residual {worst:e}");
    println!("symplectic check of a random frame: {}", {
        let sys = random_irregular_system(&mut rng, 4);
        linalg::is_symplectic(&adapted::build_frame(&sys, DEFAULT_REL_TOL)?.wddot, 1e-9)?
    });
    Ok(())
}
