//! Massless scalar field on a 2D triangulated tube.
//!
//! Each time slice is a closed loop of vertices. The action is the edge sum
//! `1/2 sum w_ij (phi_i - phi_j)^2 = 1/2 phi^T K phi`. Slices with fewer
//! real vertices are padded with virtual vertices so that every slice has
//! the same number `q` of field values; virtual rows and columns of `K`
//! are zero.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::timestep::TimeStepSystem;

/// Classification of an edge for weighting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    InteriorTimelike,
    BoundarySpacelike,
    InteriorSpacelike,
    /// Never produced by tube lattices.
    BoundaryTimelike,
}

pub fn edge_weight(kind: EdgeKind) -> f64 {
    match kind {
        EdgeKind::InteriorTimelike => -2.0,
        EdgeKind::BoundarySpacelike => 0.5,
        EdgeKind::InteriorSpacelike => 1.0,
        EdgeKind::BoundaryTimelike => -1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vertex {
    /// `None` for padding added during validation.
    pub id: Option<u64>,
    pub is_virtual: bool,
}

impl Vertex {
    pub fn real(id: u64) -> Self {
        Self {
            id: Some(id),
            is_virtual: false,
        }
    }

    pub fn virtual_vertex(id: u64) -> Self {
        Self {
            id: Some(id),
            is_virtual: true,
        }
    }
}

/// Edge between vertex ids `a` and `b`. For a timelike edge `a` lies on
/// `slice` and `b` on `slice + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub slice: usize,
    pub a: u64,
    pub b: u64,
}

#[derive(Debug, Clone)]
pub struct LatticeSpec {
    slices: Vec<Vec<Vertex>>,
    spacelike: Vec<Edge>,
    timelike: Vec<Edge>,
    q: usize,
    /// id -> (slice, local index)
    positions: BTreeMap<u64, (usize, usize)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    slices: Vec<Vec<RawVertex>>,
    spacelike: Vec<(usize, u64, u64)>,
    timelike: Vec<(usize, u64, u64)>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawVertex {
    Id(u64),
    Tagged(TaggedVertex),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TaggedVertex {
    id: u64,
    #[serde(rename = "virtual", default)]
    is_virtual: bool,
}

impl LatticeSpec {
    pub fn new(slices: Vec<Vec<Vertex>>, spacelike: Vec<Edge>, timelike: Vec<Edge>) -> Result<Self> {
        if slices.is_empty() {
            return Err(Error::Lattice("no slices".into()));
        }
        let q = slices.iter().map(Vec::len).max().unwrap_or(0);
        if q == 0 {
            return Err(Error::Lattice("all slices are empty".into()));
        }
        let mut positions = BTreeMap::new();
        let mut padded = Vec::with_capacity(slices.len());
        for (n, slice) in slices.into_iter().enumerate() {
            for (local, v) in slice.iter().enumerate() {
                let Some(id) = v.id else { continue };
                if id == 0 {
                    return Err(Error::Lattice(format!("slice {n}: vertex ids must be positive")));
                }
                if positions.insert(id, (n, local)).is_some() {
                    return Err(Error::Lattice(format!("duplicate vertex id {id}")));
                }
            }
            let mut slice = slice;
            slice.resize(
                q,
                Vertex {
                    id: None,
                    is_virtual: true,
                },
            );
            padded.push(slice);
        }
        let spec = Self {
            slices: padded,
            spacelike,
            timelike,
            q,
            positions,
        };
        for (k, e) in spec.spacelike.iter().enumerate() {
            spec.check_edge("spacelike", k, e, e.slice)?;
        }
        for (k, e) in spec.timelike.iter().enumerate() {
            spec.check_edge("timelike", k, e, e.slice + 1)?;
        }
        Ok(spec)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawLattice =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("lattice JSON: {e}")))?;
        let slices = raw
            .slices
            .into_iter()
            .map(|s| {
                s.into_iter()
                    .map(|v| match v {
                        RawVertex::Id(id) => Vertex::real(id),
                        RawVertex::Tagged(t) => Vertex {
                            id: Some(t.id),
                            is_virtual: t.is_virtual,
                        },
                    })
                    .collect()
            })
            .collect();
        let edges = |list: Vec<(usize, u64, u64)>| {
            list.into_iter()
                .map(|(slice, a, b)| Edge { slice, a, b })
                .collect()
        };
        Self::new(slices, edges(raw.spacelike), edges(raw.timelike))
    }

    fn check_edge(&self, kind: &str, k: usize, e: &Edge, b_slice: usize) -> Result<()> {
        let label = format!("{kind} edge #{k} [{}, {}, {}]", e.slice, e.a, e.b);
        if b_slice >= self.slices.len() {
            return Err(Error::Lattice(format!("{label}: slice out of range")));
        }
        if e.a == e.b {
            return Err(Error::Lattice(format!("{label}: edge connects a vertex to itself")));
        }
        for (id, slice) in [(e.a, e.slice), (e.b, b_slice)] {
            match self.positions.get(&id) {
                None => return Err(Error::Lattice(format!("{label}: unknown vertex {id}"))),
                Some(&(n, _)) if n != slice => {
                    return Err(Error::Lattice(format!(
                        "{label}: vertex {id} is on slice {n}, expected {slice}"
                    )))
                }
                Some(&(n, local)) if self.slices[n][local].is_virtual => {
                    return Err(Error::Lattice(format!("{label}: vertex {id} is virtual")))
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn num_slices(&self) -> usize {
        self.slices.len()
    }

    /// Number of time steps `t`.
    pub fn num_steps(&self) -> usize {
        self.slices.len() - 1
    }

    /// Total number of field values `q (t + 1)`.
    pub fn dim(&self) -> usize {
        self.q * self.slices.len()
    }

    pub fn slices(&self) -> &[Vec<Vertex>] {
        &self.slices
    }

    pub fn spacelike(&self) -> &[Edge] {
        &self.spacelike
    }

    pub fn timelike(&self) -> &[Edge] {
        &self.timelike
    }

    /// Local index of a vertex within its slice.
    fn local(&self, id: u64) -> usize {
        self.positions[&id].1
    }

    /// Global index `slice * q + local` of a vertex id.
    pub fn global_index(&self, id: u64) -> Option<usize> {
        self.positions.get(&id).map(|&(n, local)| n * self.q + local)
    }

    pub fn is_virtual(&self, global: usize) -> bool {
        self.slices[global / self.q][global % self.q].is_virtual
    }

    fn spacelike_kind(&self, slice: usize) -> EdgeKind {
        if slice == 0 || slice == self.num_steps() {
            EdgeKind::BoundarySpacelike
        } else {
            EdgeKind::InteriorSpacelike
        }
    }

    /// Weighted edges `(i, j, w)` of the whole lattice in global indices.
    fn global_edges(&self) -> Vec<(usize, usize, f64)> {
        let sp = self.spacelike.iter().map(|e| {
            let w = edge_weight(self.spacelike_kind(e.slice));
            (self.global_index(e.a).unwrap(), self.global_index(e.b).unwrap(), w)
        });
        let tl = self.timelike.iter().map(|e| {
            let w = edge_weight(EdgeKind::InteriorTimelike);
            (self.global_index(e.a).unwrap(), self.global_index(e.b).unwrap(), w)
        });
        sp.chain(tl).collect()
    }

    /// Weighted edges of the split step `n -> n+1`, indexed `0..2q`.
    fn step_edges(&self, n: usize) -> Vec<(usize, usize, f64)> {
        let q = self.q;
        let boundary = edge_weight(EdgeKind::BoundarySpacelike);
        let mut edges = Vec::new();
        for e in &self.spacelike {
            if e.slice == n || e.slice == n + 1 {
                let off = if e.slice == n { 0 } else { q };
                edges.push((off + self.local(e.a), off + self.local(e.b), boundary));
            }
        }
        for e in self.timelike.iter().filter(|e| e.slice == n) {
            edges.push((
                self.local(e.a),
                q + self.local(e.b),
                edge_weight(EdgeKind::InteriorTimelike),
            ));
        }
        edges
    }
}

/// The matrix of the quadratic action `1/2 phi^T K phi`.
#[derive(Debug, Clone)]
pub struct DynamicalMatrix {
    pub k: Matrix,
    pub q: usize,
    pub num_slices: usize,
    pub virtual_mask: Vec<bool>,
}

impl DynamicalMatrix {
    pub fn index(&self, slice: usize, local: usize) -> usize {
        slice * self.q + local
    }

    /// Block `K_(m, n)` between two slices.
    pub fn block(&self, m: usize, n: usize) -> Matrix {
        self.k.view((m * self.q, n * self.q), (self.q, self.q)).into_owned()
    }

    pub fn max_row_sum(&self) -> f64 {
        self.k.row_iter().map(|r| r.sum().abs()).fold(0.0, f64::max)
    }
}

fn assemble(n: usize, edges: &[(usize, usize, f64)]) -> Matrix {
    let mut k = Matrix::zeros(n, n);
    for &(i, j, w) in edges {
        k[(i, i)] += w;
        k[(j, j)] += w;
        k[(i, j)] -= w;
        k[(j, i)] -= w;
    }
    k
}

fn edge_sum(edges: &[(usize, usize, f64)], phi: &Vector) -> f64 {
    0.5 * edges
        .iter()
        .map(|&(i, j, w)| w * (phi[i] - phi[j]).powi(2))
        .sum::<f64>()
}

/// Global `K`: spacelike edges weigh 1/2 on the first and last slice and 1
/// in between, timelike edges weigh -2.
pub fn build_dynamical_matrix(spec: &LatticeSpec) -> DynamicalMatrix {
    DynamicalMatrix {
        k: assemble(spec.dim(), &spec.global_edges()),
        q: spec.q,
        num_slices: spec.num_slices(),
        virtual_mask: (0..spec.dim()).map(|i| spec.is_virtual(i)).collect(),
    }
}

/// `2q x 2q` dynamical matrix of the isolated step `n -> n+1`.
pub fn step_dynamical_matrix(spec: &LatticeSpec, n: usize) -> Result<Matrix> {
    if n >= spec.num_steps() {
        return Err(Error::SliceOutOfRange {
            index: n + 1,
            last: spec.num_steps(),
        });
    }
    Ok(assemble(2 * spec.q, &spec.step_edges(n)))
}

/// `L = K+_(n)`, `R = K_(n,n+1)`, `Rbar = -K-_(n+1)` for every step.
pub fn split_into_steps(spec: &LatticeSpec) -> Result<Vec<TimeStepSystem>> {
    if spec.num_steps() == 0 {
        return Err(Error::Lattice("need at least 2 slices".into()));
    }
    let q = spec.q;
    (0..spec.num_steps())
        .map(|n| {
            let k = step_dynamical_matrix(spec, n)?;
            let l = k.view((0, 0), (q, q)).into_owned();
            let r = k.view((0, q), (q, q)).into_owned();
            let rbar = -k.view((q, q), (q, q)).into_owned();
            TimeStepSystem::new(l, r, rbar)
        })
        .collect()
}

fn check_field(spec: &LatticeSpec, phi: &Vector) -> Result<()> {
    if phi.len() != spec.dim() {
        return Err(Error::Dimension {
            what: "lattice field",
            expected: spec.dim(),
            got: phi.len(),
        });
    }
    Ok(())
}

/// Edge-sum action `1/2 sum w_ij (phi_i - phi_j)^2` of the whole lattice.
pub fn total_action(spec: &LatticeSpec, phi: &Vector) -> Result<f64> {
    check_field(spec, phi)?;
    Ok(edge_sum(&spec.global_edges(), phi))
}

/// Edge-sum action of every split step; these add up to [`total_action`].
pub fn step_actions(spec: &LatticeSpec, phi: &Vector) -> Result<Vec<f64>> {
    check_field(spec, phi)?;
    let q = spec.q;
    Ok((0..spec.num_steps())
        .map(|n| edge_sum(&spec.step_edges(n), &phi.rows(n * q, 2 * q).into_owned()))
        .collect())
}

/// Random tube lattice with `1..=max_steps` steps and `1..=max_size` real
/// vertices per slice. Neighbouring loops are joined by a random strip
/// triangulation.
pub fn random_tube_lattice<R: Rng + ?Sized>(
    rng: &mut R,
    max_steps: usize,
    max_size: usize,
) -> LatticeSpec {
    let t = rng.random_range(1..=max_steps.max(1));
    let sizes: Vec<usize> = (0..=t).map(|_| rng.random_range(1..=max_size.max(1))).collect();
    let mut next_id = 1u64;
    let ids: Vec<Vec<u64>> = sizes
        .iter()
        .map(|&n| {
            let ids = (next_id..next_id + n as u64).collect();
            next_id += n as u64;
            ids
        })
        .collect();

    let mut spacelike = Vec::new();
    for (n, loop_ids) in ids.iter().enumerate() {
        let m = loop_ids.len();
        let mut push = |a: usize, b: usize| spacelike.push(Edge { slice: n, a: loop_ids[a], b: loop_ids[b] });
        match m {
            1 => {}
            2 => {
                push(0, 1);
                push(0, 1);
            }
            _ => (0..m).for_each(|i| push(i, (i + 1) % m)),
        }
    }

    let mut timelike = Vec::new();
    for n in 0..t {
        let (a, b) = (sizes[n], sizes[n + 1]);
        let mut seen = BTreeSet::new();
        let (mut i, mut j) = (0, 0);
        seen.insert((0, 0));
        while i < a || j < b {
            if j == b || (i < a && rng.random_bool(0.5)) {
                i += 1;
            } else {
                j += 1;
            }
            seen.insert((i % a, j % b));
        }
        timelike.extend(seen.into_iter().map(|(i, j)| Edge {
            slice: n,
            a: ids[n][i],
            b: ids[n + 1][j],
        }));
    }

    let slices = ids
        .into_iter()
        .map(|s| s.into_iter().map(Vertex::real).collect())
        .collect();
    LatticeSpec::new(slices, spacelike, timelike).expect("generated lattice is valid")
}

/// Bundled lattices for the worked examples.
pub mod fixtures {
    use super::LatticeSpec;

    pub const EXAMPLE_6_1: &str = include_str!("../fixtures/example_6_1.json");
    pub const EXAMPLE_6_2: &str = include_str!("../fixtures/example_6_2.json");
    pub const EXAMPLE_6_3: &str = include_str!("../fixtures/example_6_3.json");
    pub const EXAMPLE_6_4: &str = include_str!("../fixtures/example_6_4.json");
    /// One vertex widening to two triangles and back to one vertex.
    pub const WIDENING: &str = include_str!("../fixtures/widening.json");
    /// Triangle, triangle, single vertex, triangle.
    pub const NARROWING: &str = include_str!("../fixtures/narrowing.json");

    pub const ALL: [(&str, &str); 6] = [
        ("example_6_1", EXAMPLE_6_1),
        ("example_6_2", EXAMPLE_6_2),
        ("example_6_3", EXAMPLE_6_3),
        ("example_6_4", EXAMPLE_6_4),
        ("widening", WIDENING),
        ("narrowing", NARROWING),
    ];

    pub fn load(name: &str) -> Option<LatticeSpec> {
        ALL.iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| LatticeSpec::from_json(text).expect("bundled fixture is valid"))
    }
}
