//! Build a tube lattice in code, then read the dynamical matrix and split it
//! into time steps.
//!
//! Run with `cargo run --example lattice_build`.

use dle::lattice::{self, Edge, LatticeSpec, Vertex};
use dle::Vector;

fn main() -> dle::Result<()> {
    // a triangle followed by a square; the triangle gets one virtual vertex
    let slices = vec![
        vec![Vertex::real(1), Vertex::real(2), Vertex::real(3), Vertex::virtual_vertex(4)],
        vec![Vertex::real(5), Vertex::real(6), Vertex::real(7), Vertex::real(8)],
    ];
    let ring = |slice: usize, ids: &[u64]| -> Vec<Edge> {
        (0..ids.len())
            .map(|i| Edge { slice, a: ids[i], b: ids[(i + 1) % ids.len()] })
            .collect()
    };
    let mut spacelike = ring(0, &[1, 2, 3]);
    spacelike.extend(ring(1, &[5, 6, 7, 8]));
    let timelike = [(1, 5), (1, 6), (2, 6), (2, 7), (3, 7), (3, 8), (1, 8)]
        .into_iter()
        .map(|(a, b)| Edge { slice: 0, a, b })
        .collect();
    let spec = LatticeSpec::new(slices, spacelike, timelike)?;

    let k = lattice::build_dynamical_matrix(&spec);
    println!("K = {}", k.k);
    println!("largest row sum {:e}", k.max_row_sum());

    let step = &lattice::split_into_steps(&spec)?[0];
    println!("L = {}R = {}Rbar = {}", step.l(), step.r(), step.rbar());

    let phi = Vector::from_fn(spec.dim(), |i, _| (i as f64 * 0.7).sin());
    let total = lattice::total_action(&spec, &phi)?;
    println!("action {total}, 1/2 phi K phi = {}", 0.5 * phi.dot(&(&k.k * &phi)));

    // the same lattice as JSON
    let text = r#"{"slices": [[1, 2, 3, {"id": 4, "virtual": true}], [5, 6, 7, 8]],
        "spacelike": [[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 5, 6], [1, 6, 7], [1, 7, 8], [1, 8, 5]],
        "timelike": [[0, 1, 5], [0, 1, 6], [0, 2, 6], [0, 2, 7], [0, 3, 7], [0, 3, 8], [0, 1, 8]]}"#;
    let parsed = LatticeSpec::from_json(text)?;
    let difference = (lattice::build_dynamical_matrix(&parsed).k - &k.k).amax();
    println!("JSON and code agree: {}", difference == 0.0);
    Ok(())
}
