//! Command reports behind the `dle` binary.
//!
//! Each command turns an [`Input`] and a [`RunConfig`] into a [`Report`]
//! holding a `command`, a `status` and a free-form `data` tree. The machine
//! rendering writes every number with 17 significant digits, so values
//! survive a round trip through text, and object keys in sorted order, so
//! equal runs give byte-identical output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Map, Number, Value};

use crate::adapted::{self, AdaptedFrame, Slice, VectorClass};
use crate::error::{Error, Result};
use crate::global::{self, Rejection};
use crate::lattice::{self, LatticeSpec};
use crate::linalg::{self, max_abs, max_abs_vec, Matrix, SymplecticForm, Vector, DEFAULT_REL_TOL};
use crate::timestep::{
    self, EvolutionMove, EvolveOptions, PhaseVector, TimeStepSystem, DEFAULT_CONSTRAINT_TOL,
};

/// Exit code for unreadable, malformed or invalid input.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Build,
    Evolve,
    Analyze,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Build => "build",
            Command::Evolve => "evolve",
            Command::Analyze => "analyze",
            Command::Check => "check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A state left the pre-constraint surface during `evolve`.
    Rejected,
    /// At least one invariant of `check` exceeded its tolerance.
    Failed,
    /// The input could not be used; see `data.message`.
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Rejected => "rejected",
            Status::Failed => "failed",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Error => EXIT_INPUT,
            Status::Rejected => 3,
            Status::Failed => 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub rel_tol: f64,
    pub constraint_tol: f64,
    /// Initial state `(x, p)` for `evolve`.
    pub y0: Option<Vec<f64>>,
    /// One free-parameter vector per step.
    pub lambdas: Option<Vec<Vec<f64>>>,
    /// Second initial state evolved alongside `y0` with zero parameters.
    pub companion: Option<Vec<f64>>,
    /// Seeds random parameters in `evolve` and the samples of `check`.
    pub seed: Option<u64>,
    pub iterations: usize,
    /// Project states onto the pre-constraint surface instead of rejecting.
    pub project: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            rel_tol: DEFAULT_REL_TOL,
            constraint_tol: DEFAULT_CONSTRAINT_TOL,
            y0: None,
            lambdas: None,
            companion: None,
            seed: None,
            iterations: 100,
            project: false,
        }
    }

    fn validate(&self) -> Result<()> {
        for tol in [self.rel_tol, self.constraint_tol] {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(Error::InvalidTolerance(tol));
            }
        }
        if self.iterations == 0 {
            return Err(Error::Input("iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// A system description: a lattice or explicit step matrices.
#[derive(Debug, Clone)]
pub enum Input {
    Lattice(LatticeSpec),
    Matrices(Vec<TimeStepSystem>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    steps: Vec<RawStep>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    #[serde(rename = "L")]
    l: Vec<Vec<f64>>,
    #[serde(rename = "R")]
    r: Vec<Vec<f64>>,
    #[serde(rename = "Rbar")]
    rbar: Vec<Vec<f64>>,
}

impl Input {
    /// Parse either format. Documents with a top-level `steps` key are read
    /// as step matrices, everything else as a lattice.
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))?;
        let is_raw = value.as_object().is_some_and(|o| o.contains_key("steps"));
        if !is_raw {
            return LatticeSpec::from_json(text).map(Input::Lattice);
        }
        let raw: RawInput =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("step matrices: {e}")))?;
        if raw.steps.is_empty() {
            return Err(Error::Input("`steps` must contain at least one step".into()));
        }
        let mut steps = Vec::with_capacity(raw.steps.len());
        for (n, step) in raw.steps.into_iter().enumerate() {
            let l = rows_to_matrix(&step.l, n, "L")?;
            let r = rows_to_matrix(&step.r, n, "R")?;
            let rbar = rows_to_matrix(&step.rbar, n, "Rbar")?;
            let sys = TimeStepSystem::new(l, r, rbar)
                .map_err(|e| Error::Input(format!("steps[{n}]: {e}")))?;
            if let Some(first) = steps.first().map(TimeStepSystem::q) {
                if sys.q() != first {
                    return Err(Error::Input(format!(
                        "steps[{n}]: size {} differs from steps[0] size {first}",
                        sys.q()
                    )));
                }
            }
            steps.push(sys);
        }
        Ok(Input::Matrices(steps))
    }

    pub fn steps(&self) -> Result<Vec<TimeStepSystem>> {
        match self {
            Input::Lattice(spec) => lattice::split_into_steps(spec),
            Input::Matrices(steps) => Ok(steps.clone()),
        }
    }

    pub fn lattice(&self) -> Option<&LatticeSpec> {
        match self {
            Input::Lattice(spec) => Some(spec),
            Input::Matrices(_) => None,
        }
    }

    fn source(&self) -> &'static str {
        match self {
            Input::Lattice(_) => "lattice",
            Input::Matrices(_) => "matrices",
        }
    }
}

fn rows_to_matrix(rows: &[Vec<f64>], step: usize, key: &str) -> Result<Matrix> {
    let ncols = rows.first().map_or(0, Vec::len);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::Input(format!(
                "steps[{step}].{key}: row {i} has {} entries, expected {ncols}",
                row.len()
            )));
        }
    }
    Ok(Matrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: Command,
    pub status: Status,
    pub data: Value,
}

impl Report {
    /// Report for an input that could not be processed.
    pub fn error(command: Command, err: &Error) -> Self {
        Self {
            command,
            status: Status::Error,
            data: json!({ "message": err.to_string() }),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        let doc = json!({
            "command": self.command.name(),
            "status": self.status.name(),
            "data": self.data,
        });
        serde_json::to_string_pretty(&doc).expect("report values are serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("dle {}: {}\n", self.command.name(), self.status.name());
        render_text(&self.data, 0, &mut out);
        out
    }
}

/// Run one command. `input` may only be absent for [`Command::Check`].
pub fn run(config: &RunConfig, input: Option<&Input>) -> Result<Report> {
    config.validate()?;
    let need = || {
        input.ok_or_else(|| Error::Input(format!("`{}` needs an input file", config.command.name())))
    };
    let (status, data) = match config.command {
        Command::Build => (Status::Ok, build(config, need()?)?),
        Command::Evolve => evolve(config, need()?)?,
        Command::Analyze => (Status::Ok, analyze(config, need()?)?),
        Command::Check => check(config, input)?,
    };
    Ok(Report {
        command: config.command,
        status,
        data,
    })
}

fn build(config: &RunConfig, input: &Input) -> Result<Value> {
    let steps = input.steps()?;
    let moves = global::build_moves(&steps, config.rel_tol)?;
    let step_data: Vec<Value> = steps
        .iter()
        .zip(&moves)
        .enumerate()
        .map(|(n, (sys, mv))| {
            json!({
                "step": n,
                "L": mat(sys.l()),
                "R": mat(sys.r()),
                "Rbar": mat(sys.rbar()),
                "rank": mv.rank(),
                "s": mv.s(),
                "constraint_rank": mv.constraint_rank(),
                "C": mat(&mv.c),
                "Cbar_next": mat(&mv.cbar_next),
                "E": mat(&mv.e),
                "F": mat(&mv.f),
            })
        })
        .collect();
    let mut data = Map::new();
    data.insert("source".into(), input.source().into());
    data.insert("q".into(), steps[0].q().into());
    data.insert("num_steps".into(), steps.len().into());
    if let Some(spec) = input.lattice() {
        data.insert("K".into(), mat(&lattice::build_dynamical_matrix(spec).k));
    }
    data.insert("steps".into(), Value::Array(step_data));
    Ok(Value::Object(data))
}

fn evolve(config: &RunConfig, input: &Input) -> Result<(Status, Value)> {
    let steps = input.steps()?;
    let q = steps[0].q();
    let moves = global::build_moves(&steps, config.rel_tol)?;
    let y0 = phase_arg(config.y0.as_deref(), "y0", q)?
        .ok_or_else(|| Error::Input("`evolve` needs an initial state (--y0)".into()))?;
    let lambdas = resolve_lambdas(config, &moves)?;
    let options = EvolveOptions {
        constraint_tol: config.constraint_tol,
        project: config.project,
    };

    let traj = match global::run_moves(&moves, &y0, &lambdas, &options) {
        Ok(traj) => traj,
        Err(Error::Rejected(rej)) => return Ok((Status::Rejected, rejection(&rej, "y0", config))),
        Err(e) => return Err(e),
    };
    let companion = match phase_arg(config.companion.as_deref(), "companion", q)? {
        None => None,
        Some(z0) => match global::run_moves(&moves, &z0, &global::zero_lambdas(&moves), &options) {
            Ok(traj) => Some(traj),
            Err(Error::Rejected(rej)) => {
                return Ok((Status::Rejected, rejection(&rej, "companion", config)))
            }
            Err(e) => return Err(e),
        },
    };

    let frames = steps
        .iter()
        .map(|sys| adapted::build_frame(sys, config.rel_tol))
        .collect::<Result<Vec<_>>>()?;
    let t = moves.len();
    let mut slices = Vec::with_capacity(t + 1);
    for (n, y) in traj.states.iter().enumerate() {
        let mut entry = Map::new();
        entry.insert("slice".into(), n.into());
        entry.insert("x".into(), vector(&y.x));
        entry.insert("p".into(), vector(&y.p));
        let mut coords = Map::new();
        if n < t {
            let residual = moves[n].pre_constraint_residual(y)?;
            entry.insert("pre_constraint_residual".into(), num(max_abs_vec(&residual)));
            coords.insert("current".into(), adapted_entry(&frames[n], y, Slice::Current)?);
        }
        if n > 0 {
            let residual = &moves[n - 1].cbar_next * y.stacked();
            entry.insert("post_constraint_residual".into(), num(max_abs_vec(&residual)));
            coords.insert("next".into(), adapted_entry(&frames[n - 1], y, Slice::Next)?);
        }
        entry.insert("adapted".into(), Value::Object(coords));
        if let Some(traj_z) = &companion {
            let product = timestep::symplectic_product(y, &traj_z.states[n])?;
            entry.insert("companion_product".into(), num(product));
        }
        slices.push(Value::Object(entry));
    }

    let mut data = Map::new();
    data.insert("q".into(), q.into());
    data.insert("num_steps".into(), t.into());
    data.insert("lambdas".into(), Value::Array(traj.lambdas.iter().map(vector).collect()));
    data.insert("slices".into(), Value::Array(slices));
    if let Some(traj_z) = &companion {
        let products = traj
            .states
            .iter()
            .zip(&traj_z.states)
            .map(|(y, z)| timestep::symplectic_product(y, z))
            .collect::<Result<Vec<_>>>()?;
        let drift = products.iter().map(|w| (w - products[0]).abs()).fold(0.0, f64::max);
        data.insert("companion_product_drift".into(), num(drift));
    }
    Ok((Status::Ok, Value::Object(data)))
}

fn phase_arg(values: Option<&[f64]>, what: &'static str, q: usize) -> Result<Option<PhaseVector>> {
    let Some(values) = values else {
        return Ok(None);
    };
    if values.len() != 2 * q {
        return Err(Error::Dimension {
            what,
            expected: 2 * q,
            got: values.len(),
        });
    }
    PhaseVector::from_slice(values).map(Some)
}

fn resolve_lambdas(config: &RunConfig, moves: &[EvolutionMove]) -> Result<Vec<Vector>> {
    if let Some(given) = &config.lambdas {
        if given.len() != moves.len() {
            return Err(Error::Dimension {
                what: "lambda list",
                expected: moves.len(),
                got: given.len(),
            });
        }
        return moves
            .iter()
            .zip(given)
            .map(|(mv, lambda)| {
                if lambda.len() == mv.s() {
                    Ok(Vector::from_column_slice(lambda))
                } else {
                    Err(Error::Dimension {
                        what: "lambda",
                        expected: mv.s(),
                        got: lambda.len(),
                    })
                }
            })
            .collect();
    }
    Ok(match config.seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            moves.iter().map(|mv| uniform_vector(&mut rng, mv.s())).collect()
        }
        None => global::zero_lambdas(moves),
    })
}

fn rejection(rej: &Rejection, which: &str, config: &RunConfig) -> Value {
    json!({
        "trajectory": which,
        "slice": rej.slice,
        "residual": num(rej.residual),
        "tolerance": num(config.constraint_tol),
        "constraint_rows": rej.constraint_rows,
        "offending": vector(&rej.offending),
        "partial_states": rej.partial.iter().map(|y| vector(&y.stacked())).collect::<Vec<_>>(),
    })
}

fn adapted_entry(frame: &AdaptedFrame, y: &PhaseVector, slice: Slice) -> Result<Value> {
    let coords = adapted::to_adapted(frame, y, slice)?;
    let VectorClass {
        on_constraint,
        in_null_space,
        in_representative,
        ..
    } = adapted::classify(frame, y, slice)?;
    Ok(json!({
        "coordinates": vector(&coords),
        "on_constraint": on_constraint,
        "in_null_space": in_null_space,
        "in_representative": in_representative,
    }))
}

fn analyze(config: &RunConfig, input: &Input) -> Result<Value> {
    let steps = input.steps()?;
    let sol = global::solution_space(&steps, config.rel_tol)?;
    let mut slices = Vec::new();
    let mut ddot_dims = Vec::new();
    for n in 0..=sol.num_steps() {
        let d = global::constraint_space_d(&sol, n, config.rel_tol)?;
        let (null_space, ddot) = global::null_and_representative(&d, config.rel_tol)?;
        ddot_dims.push(ddot.dim());
        slices.push(json!({
            "slice": n,
            "dim_D": d.dim(),
            "dim_N": null_space.dim(),
            "dim_Ddot": ddot.dim(),
        }));
    }
    Ok(json!({
        "q": sol.q,
        "num_steps": sol.num_steps(),
        "param_dim": sol.param_dim,
        "free_parameters": sol.free_parameters,
        "solution_dim": sol.dim(),
        "slices": slices,
        "ddot_constant": ddot_dims.windows(2).all(|w| w[0] == w[1]),
    }))
}

/// Worst residual of one invariant over all checked cases.
struct Invariant {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    cases: usize,
}

impl Invariant {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            worst: 0.0,
            cases: 0,
        }
    }

    fn record(&mut self, residual: f64) {
        self.cases += 1;
        if residual.is_nan() || residual > self.worst {
            self.worst = residual;
        }
    }

    fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }

    fn to_value(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed(),
            "worst_residual": num(self.worst),
            "tolerance": num(self.tolerance),
            "cases": self.cases,
        })
    }
}

struct SystemSuite {
    surface: Invariant,
    penrose: Invariant,
    conservation: Invariant,
    post_constraint: Invariant,
    frames: Invariant,
    commutation: Invariant,
}

impl SystemSuite {
    fn new(constraint_tol: f64) -> Self {
        Self {
            surface: Invariant::new("surface_sampling", constraint_tol),
            penrose: Invariant::new("penrose_conditions", 1e-8),
            conservation: Invariant::new("symplectic_conservation", 1e-8),
            post_constraint: Invariant::new("post_constraint", 1e-8),
            frames: Invariant::new("frame_symplectic", 1e-9),
            commutation: Invariant::new("adapted_commutation", 1e-8),
        }
    }

    fn run<G: Rng>(&mut self, rng: &mut G, sys: &TimeStepSystem, samples: usize, rel_tol: f64) -> Result<()> {
        let mv = timestep::build_move(sys, rel_tol)?;
        let frame = adapted::build_frame(sys, rel_tol)?;
        self.penrose.record(penrose_residual(sys.r(), &mv));
        let frame_residual = linalg::symplectic_residual(&frame.wdot)?
            .max(linalg::symplectic_residual(&frame.wddot)?);
        self.frames.record(frame_residual);

        let form = SymplecticForm::new(sys.q());
        for _ in 0..samples {
            let y = self.surface_point(rng, &mv)?;
            let z = self.surface_point(rng, &mv)?;
            let (la, lb) = (uniform_vector(rng, mv.s()), uniform_vector(rng, mv.s()));
            let y1 = &mv.e * &y + &mv.f * &la;
            let z1 = &mv.e * &z + &mv.f * &lb;
            let scale = max_abs_vec(&y1).max(1.0) * max_abs_vec(&z1).max(1.0);
            self.conservation
                .record((form.eval(&y1, &z1) - form.eval(&y, &z)).abs() / scale);
            self.post_constraint
                .record(max_abs_vec(&(&mv.cbar_next * &y1)) / max_abs_vec(&y1).max(1.0));

            let u = adapted::to_adapted(&frame, &PhaseVector::from_stacked(&y)?, Slice::Current)?;
            let direct = adapted::to_adapted(&frame, &PhaseVector::from_stacked(&y1)?, Slice::Next)?;
            let residual = match adapted::evolve_adapted(&frame, &u, &la) {
                Ok(via_frame) => max_abs_vec(&(direct - via_frame)) / max_abs_vec(&y1).max(1.0),
                Err(_) => f64::INFINITY,
            };
            self.commutation.record(residual);
        }
        Ok(())
    }

    fn surface_point<G: Rng>(&mut self, rng: &mut G, mv: &EvolutionMove) -> Result<Vector> {
        let basis = mv.surface_basis();
        let y = basis * uniform_vector(rng, basis.ncols());
        let residual = max_abs_vec(&mv.pre_constraint_residual(&PhaseVector::from_stacked(&y)?)?);
        self.surface.record(residual / max_abs_vec(&y).max(1.0));
        Ok(y)
    }

    fn into_list(self) -> Vec<Invariant> {
        vec![
            self.surface,
            self.penrose,
            self.conservation,
            self.post_constraint,
            self.frames,
            self.commutation,
        ]
    }
}

/// Largest of the four Penrose residuals of the pseudoinverse of `R`, each
/// relative to the size of the matrix it compares against.
fn penrose_residual(r: &Matrix, mv: &EvolutionMove) -> f64 {
    let p = mv.svd.pinv();
    let rp = r * &p;
    let pr = &p * r;
    [
        max_abs(&(&rp * r - r)) / max_abs(r).max(1.0),
        max_abs(&(&pr * &p - &p)) / max_abs(&p).max(1.0),
        max_abs(&(&rp - rp.transpose())),
        max_abs(&(&pr - pr.transpose())),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

struct LatticeSuite {
    row_sums: Invariant,
    virtual_rows: Invariant,
    quadratic_form: Invariant,
    additivity: Invariant,
}

impl LatticeSuite {
    fn new() -> Self {
        Self {
            row_sums: Invariant::new("lattice_row_sums", 1e-10),
            virtual_rows: Invariant::new("lattice_virtual_rows", 0.0),
            quadratic_form: Invariant::new("action_quadratic_form", 1e-9),
            additivity: Invariant::new("action_additivity", 1e-9),
        }
    }

    fn run<G: Rng>(&mut self, rng: &mut G, spec: &LatticeSpec, samples: usize) -> Result<()> {
        let k = lattice::build_dynamical_matrix(spec);
        self.row_sums.record(k.max_row_sum());
        let virtual_entries = (0..spec.dim())
            .filter(|&i| spec.is_virtual(i))
            .map(|i| k.k.row(i).amax().max(k.k.column(i).amax()))
            .fold(0.0, f64::max);
        self.virtual_rows.record(virtual_entries);
        for _ in 0..samples {
            let phi = uniform_vector(rng, spec.dim());
            let total = lattice::total_action(spec, &phi)?;
            let quadratic = 0.5 * phi.dot(&(&k.k * &phi));
            let split: f64 = lattice::step_actions(spec, &phi)?.iter().sum();
            let scale = total.abs().max(1.0);
            self.quadratic_form.record((total - quadratic).abs() / scale);
            self.additivity.record((total - split).abs() / scale);
        }
        Ok(())
    }

    fn into_list(self) -> Vec<Invariant> {
        vec![self.row_sums, self.virtual_rows, self.quadratic_form, self.additivity]
    }
}

/// Random systems in `check` have `q` up to this size.
const CHECK_MAX_Q: usize = 6;
/// Random tube lattices in `check` have at most this many steps.
const CHECK_MAX_STEPS: usize = 4;
/// Random tube lattices in `check` have at most this many vertices per slice.
const CHECK_MAX_SLICE: usize = 5;

fn check(config: &RunConfig, input: Option<&Input>) -> Result<(Status, Value)> {
    let seed = config.seed.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut systems = SystemSuite::new(config.constraint_tol);
    let mut lattices = LatticeSuite::new();
    let mut invariants;

    let source = match input {
        Some(input) => {
            for sys in input.steps()? {
                systems.run(&mut rng, &sys, config.iterations, config.rel_tol)?;
            }
            invariants = systems.into_list();
            if let Some(spec) = input.lattice() {
                lattices.run(&mut rng, spec, config.iterations)?;
                invariants.extend(lattices.into_list());
            }
            input.source()
        }
        None => {
            for _ in 0..config.iterations {
                let sys = timestep::random_irregular_system(&mut rng, CHECK_MAX_Q);
                systems.run(&mut rng, &sys, 1, config.rel_tol)?;
                let spec = lattice::random_tube_lattice(&mut rng, CHECK_MAX_STEPS, CHECK_MAX_SLICE);
                lattices.run(&mut rng, &spec, 1)?;
            }
            invariants = systems.into_list();
            invariants.extend(lattices.into_list());
            "random"
        }
    };

    let all_passed = invariants.iter().all(Invariant::passed);
    let data = json!({
        "source": source,
        "seed": seed,
        "iterations": config.iterations,
        "all_passed": all_passed,
        "invariants": invariants.iter().map(Invariant::to_value).collect::<Vec<_>>(),
    });
    let status = if all_passed { Status::Ok } else { Status::Failed };
    Ok((status, data))
}

fn uniform_vector<G: Rng>(rng: &mut G, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0))
}

/// Format like C's `%.17g`: 17 significant digits, trailing zeros dropped,
/// exponent notation outside `1e-4 <= |x| < 1e17`.
pub fn format_number(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(if x.is_sign_negative() { "-0" } else { "0" }.into());
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exponent) = sci.split_once('e').expect("exponent format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let sign = if x < 0.0 { "-" } else { "" };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    let body = if !(-4..17).contains(&exponent) {
        let mantissa = trim(format!("{}.{}", &digits[..1], &digits[1..]));
        let exp_sign = if exponent < 0 { '-' } else { '+' };
        format!("{mantissa}e{exp_sign}{:02}", exponent.abs())
    } else if exponent >= 0 {
        let split = exponent as usize + 1;
        trim(format!("{}.{}", &digits[..split], &digits[split..]))
    } else {
        let zeros = "0".repeat((-exponent - 1) as usize);
        trim(format!("0.{zeros}{digits}"))
    };
    Some(format!("{sign}{body}"))
}

fn num(x: f64) -> Value {
    match format_number(x) {
        Some(text) => Value::Number(text.parse::<Number>().expect("formatted number is valid JSON")),
        None => Value::Null,
    }
}

fn vector(v: &Vector) -> Value {
    Value::Array(v.iter().copied().map(num).collect())
}

fn mat(m: &Matrix) -> Value {
    Value::Array(
        m.row_iter()
            .map(|row| Value::Array(row.iter().copied().map(num).collect()))
            .collect(),
    )
}

fn scalar_text(value: &Value) -> Option<String> {
    match value {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(match n.as_f64() {
            Some(x) if n.as_u64().is_none() && n.as_i64().is_none() => {
                if x != 0.0 && !(1e-4..1e15).contains(&x.abs()) {
                    format!("{x:e}")
                } else {
                    format!("{x}")
                }
            }
            _ => n.to_string(),
        }),
        Value::Array(_) | Value::Object(_) => None,
    }
}

fn inline_row(items: &[Value]) -> Option<String> {
    let parts: Option<Vec<String>> = items.iter().map(scalar_text).collect();
    parts.map(|p| format!("[{}]", p.join(", ")))
}

fn render_text(value: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, item) in map {
                if let Some(text) = scalar_text(item) {
                    out.push_str(&format!("{pad}{key}: {text}\n"));
                } else if let Some(row) = item.as_array().and_then(|a| inline_row(a)) {
                    out.push_str(&format!("{pad}{key}: {row}\n"));
                } else {
                    out.push_str(&format!("{pad}{key}:\n"));
                    render_text(item, indent + 2, out);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if let Some(row) = item.as_array().and_then(|a| inline_row(a)) {
                    out.push_str(&format!("{pad}{row}\n"));
                } else if let Some(text) = scalar_text(item) {
                    out.push_str(&format!("{pad}{text}\n"));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_text(item, indent + 2, out);
                }
            }
        }
        other => {
            if let Some(text) = scalar_text(other) {
                out.push_str(&format!("{pad}{text}\n"));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_follow_g17() {
        assert_eq!(format_number(0.75).unwrap(), "0.75");
        assert_eq!(format_number(1.0).unwrap(), "1");
        assert_eq!(format_number(-2.5).unwrap(), "-2.5");
        assert_eq!(format_number(0.1).unwrap(), "0.10000000000000001");
        assert_eq!(format_number(1e-5).unwrap(), "1.0000000000000001e-05");
        assert_eq!(format_number(1.5e20).unwrap(), "1.5e+20");
        assert_eq!(format_number(0.00012).unwrap(), "0.00012");
        assert_eq!(format_number(123456.0).unwrap(), "123456");
        assert_eq!(format_number(f64::NAN), None);
    }

    #[test]
    fn numbers_round_trip() {
        for x in [1.0 / 3.0, -2.0f64.sqrt(), 6.02e23, 1e-300, 0.5e-4, 99999999999999999.0] {
            let text = format_number(x).unwrap();
            assert_eq!(text.parse::<f64>().unwrap(), x, "{text}");
        }
    }

    #[test]
    fn raw_input_rejects_unknown_keys() {
        let err = Input::parse(r#"{"steps":[{"L":[[1]],"R":[[1]],"Rbar":[[1]],"Q":[[1]]}]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("`Q`"), "{err}");
        let err = Input::parse(r#"{"steps":[{"L":[[1]],"R":[[1]]}]}"#).unwrap_err();
        assert!(err.to_string().contains("`Rbar`"), "{err}");
    }

    #[test]
    fn raw_input_checks_shapes_and_symmetry() {
        let ragged = Input::parse(r#"{"steps":[{"L":[[1,0],[0]],"R":[[1,0],[0,1]],"Rbar":[[1,0],[0,1]]}]}"#);
        assert!(ragged.unwrap_err().to_string().contains("steps[0].L"));
        let asym = Input::parse(r#"{"steps":[{"L":[[1,2],[0,1]],"R":[[1,0],[0,1]],"Rbar":[[1,0],[0,1]]}]}"#);
        assert!(asym.unwrap_err().to_string().contains("symmetric"));
    }

    #[test]
    fn lambdas_come_from_flags_seed_or_zero() {
        let steps = lattice::split_into_steps(&lattice::fixtures::load("example_6_2").unwrap()).unwrap();
        let moves = global::build_moves(&steps, DEFAULT_REL_TOL).unwrap();
        let mut config = RunConfig::new(Command::Evolve);
        assert_eq!(resolve_lambdas(&config, &moves).unwrap()[0], Vector::zeros(2));
        config.seed = Some(3);
        let a = resolve_lambdas(&config, &moves).unwrap();
        assert_eq!(a, resolve_lambdas(&config, &moves).unwrap());
        assert!(a[0].norm() > 0.0);
        config.lambdas = Some(vec![vec![1.0, 2.0]]);
        assert_eq!(resolve_lambdas(&config, &moves).unwrap()[0], Vector::from_vec(vec![1.0, 2.0]));
        config.lambdas = Some(vec![vec![1.0]]);
        assert!(resolve_lambdas(&config, &moves).is_err());
    }

    #[test]
    fn invariant_treats_nan_as_failure() {
        let mut inv = Invariant::new("x", 1.0);
        inv.record(0.5);
        inv.record(f64::NAN);
        assert!(!inv.passed());
    }
}
