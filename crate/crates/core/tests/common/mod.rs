#![allow(dead_code)]

use dle::lattice::{self, LatticeSpec};
use dle::linalg::{Matrix, Vector};
use dle::timestep::{PhaseVector, TimeStepSystem};
use rand::Rng;
use serde_json::Value;

pub fn m(rows: &[&[f64]]) -> Matrix {
    let ncols = rows.first().map_or(0, |r| r.len());
    Matrix::from_row_iterator(rows.len(), ncols, rows.iter().flat_map(|r| r.iter().copied()))
}

pub fn v(data: &[f64]) -> Vector {
    Vector::from_row_slice(data)
}

pub fn pv(data: &[f64]) -> PhaseVector {
    PhaseVector::from_slice(data).unwrap()
}

pub fn max_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    (a - b).abs().max()
}

pub fn max_diff_vec(a: &Vector, b: &Vector) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    (a - b).abs().max()
}

/// Orthogonal projector onto the column span, using nalgebra's SVD directly.
pub fn span_projector(a: &Matrix) -> Matrix {
    let svd = a.clone().svd(true, false);
    let u = svd.u.unwrap();
    let smax = svd.singular_values.max();
    let mut p = Matrix::zeros(a.nrows(), a.nrows());
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s > 1e-10 * smax.max(1.0) {
            let col = u.column(k);
            p += col * col.transpose();
        }
    }
    p
}

/// Numerical rank via nalgebra's singular values.
pub fn rank(a: &Matrix) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let s = a.clone().singular_values();
    let smax = s.max();
    s.iter().filter(|x| **x > 1e-10 * smax.max(1.0)).count()
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, scale: f64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-scale..=scale))
}

pub fn random_symmetric<R: Rng>(rng: &mut R, q: usize) -> Matrix {
    let a = random_matrix(rng, q, q, 2.0);
    (&a + a.transpose()) * 0.5
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0))
}

/// Random step with `rank R < q` (forced deficiency through a low-rank product).
pub fn random_irregular_system<R: Rng>(rng: &mut R, max_q: usize) -> TimeStepSystem {
    let q = rng.random_range(1..=max_q);
    let k = rng.random_range(0..q);
    let r = random_matrix(rng, q, k, 1.5) * random_matrix(rng, k, q, 1.5);
    TimeStepSystem::new(random_symmetric(rng, q), r, random_symmetric(rng, q)).unwrap()
}

/// A point of the pre-constraint surface built from its definition:
/// `p - L x` lies in the range of `R`.
pub fn random_on_surface<R: Rng>(rng: &mut R, sys: &TimeStepSystem) -> PhaseVector {
    let q = sys.q();
    let x = random_vector(rng, q);
    let z = random_vector(rng, q);
    let p = sys.l() * &x + sys.r() * z;
    PhaseVector::new(x, p).unwrap()
}

pub fn fixture(name: &str) -> LatticeSpec {
    lattice::fixtures::load(name).unwrap()
}

pub fn fixture_steps(name: &str) -> Vec<TimeStepSystem> {
    lattice::split_into_steps(&fixture(name)).unwrap()
}

/// Direct edge-sum action read straight from lattice JSON. Spacelike edges
/// weigh 1/2 on the first and last slice and 1 elsewhere, timelike edges -2.
pub fn edge_sum_from_json(text: &str, phi: &Vector) -> f64 {
    let doc: Value = serde_json::from_str(text).unwrap();
    let slices = doc["slices"].as_array().unwrap();
    let q = slices.iter().map(|s| s.as_array().unwrap().len()).max().unwrap();
    let last = slices.len() - 1;
    let mut index = std::collections::HashMap::new();
    for (n, s) in slices.iter().enumerate() {
        for (i, vtx) in s.as_array().unwrap().iter().enumerate() {
            let id = vtx.as_u64().or_else(|| vtx["id"].as_u64()).unwrap();
            index.insert(id, n * q + i);
        }
    }
    let mut total = 0.0;
    for e in doc["spacelike"].as_array().unwrap() {
        let n = e[0].as_u64().unwrap() as usize;
        let w = if n == 0 || n == last { 0.5 } else { 1.0 };
        let (i, j) = (index[&e[1].as_u64().unwrap()], index[&e[2].as_u64().unwrap()]);
        total += 0.5 * w * (phi[i] - phi[j]).powi(2);
    }
    for e in doc["timelike"].as_array().unwrap() {
        let (i, j) = (index[&e[1].as_u64().unwrap()], index[&e[2].as_u64().unwrap()]);
        total += 0.5 * -2.0 * (phi[i] - phi[j]).powi(2);
    }
    total
}

pub fn matrix_from_json(value: &Value) -> Matrix {
    let rows: Vec<Vec<f64>> = value
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect())
        .collect();
    let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    m(&refs)
}

pub struct PaperFrame {
    pub name: String,
    pub l: Matrix,
    pub r: Matrix,
    pub rbar: Matrix,
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
    pub wdot: Matrix,
    pub wddot: Matrix,
}

pub fn paper_frames() -> Vec<PaperFrame> {
    let text = include_str!("../../fixtures/paper_frames.json");
    let doc: serde_json::Map<String, Value> = serde_json::from_str(text).unwrap();
    doc.into_iter()
        .map(|(name, e)| PaperFrame {
            name,
            l: matrix_from_json(&e["L"]),
            r: matrix_from_json(&e["R"]),
            rbar: matrix_from_json(&e["Rbar"]),
            u: matrix_from_json(&e["U"]),
            sigma: e["Sigma"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect(),
            v: matrix_from_json(&e["V"]),
            wdot: matrix_from_json(&e["Wdot"]),
            wddot: matrix_from_json(&e["Wddot"]),
        })
        .collect()
}

/// `[[-U^T L, U^T], [-U^T, 0]]` and `[[Sbar V^T, 0], [-Sbar^-1 V^T Rbar, Sbar^-1 V^T]]`
/// assembled from the paper's own factors.
pub fn frame_from_factors(f: &PaperFrame) -> (Matrix, Matrix) {
    let q = f.l.nrows();
    let sbar: Vec<f64> = f.sigma.iter().map(|s| if *s > 0.0 { *s } else { 1.0 }).collect();
    let sb = Matrix::from_diagonal(&Vector::from_vec(sbar.clone()));
    let sbi = Matrix::from_diagonal(&Vector::from_vec(sbar.iter().map(|s| 1.0 / s).collect()));
    let ut = f.u.transpose();
    let vt = f.v.transpose();
    let mut wdot = Matrix::zeros(2 * q, 2 * q);
    wdot.view_mut((0, 0), (q, q)).copy_from(&(-(&ut * &f.l)));
    wdot.view_mut((0, q), (q, q)).copy_from(&ut);
    wdot.view_mut((q, 0), (q, q)).copy_from(&(-&ut));
    let mut wddot = Matrix::zeros(2 * q, 2 * q);
    wddot.view_mut((0, 0), (q, q)).copy_from(&(&sb * &vt));
    wddot.view_mut((q, 0), (q, q)).copy_from(&(-(&sbi * &vt * &f.rbar)));
    wddot.view_mut((q, q), (q, q)).copy_from(&(&sbi * &vt));
    (wdot, wddot)
}

pub fn sigma(q: usize) -> Matrix {
    let mut s = Matrix::zeros(2 * q, 2 * q);
    for i in 0..q {
        s[(i, q + i)] = 1.0;
        s[(q + i, i)] = -1.0;
    }
    s
}

/// `max |W^T sigma W - sigma|` computed independently of the library.
pub fn symplectic_defect(w: &Matrix) -> f64 {
    let s = sigma(w.nrows() / 2);
    (w.transpose() * &s * w - &s).abs().max()
}
