use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use indexmap::IndexMap;

use super::registry::{NeuronBody, Registry, StepContext};
use super::spec::{Mode, NetworkSpec, OverflowPolicy, SelfMode};
use super::trace::{Trace, TraceRecord, WatchKey, WatchTarget, WatchValue};
use super::EngineError;
use crate::fd_matrix::FdVector;
use crate::index::{
    format_index, is_simple_name, parse_index, validate_against_registry, IndexName, PortKind,
};
use crate::matrix::{Key, Matrix, Shape};
use crate::neurons::SELF2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    BeforeDown,
    AfterDown,
}

#[derive(Clone, Debug)]
struct NeuronInfo {
    name: String,
    type_name: String,
    input_keys: Vec<Key>,
    output_keys: Vec<Key>,
}

/// Wiring derived from a validated spec; shared by clones of a state.
#[derive(Debug)]
struct Topology {
    mode: Mode,
    neurons: Vec<NeuronInfo>,
    rows: HashMap<Key, (usize, usize)>,
    cols: HashMap<Key, (usize, usize)>,
    self_idx: usize,
    enforced: Vec<(Key, BTreeMap<Key, f64>)>,
    overflow_policy: OverflowPolicy,
}

impl Topology {
    fn shape(&self) -> Shape {
        self.mode.shape()
    }

    fn self_x_key(&self) -> &Key {
        &self.neurons[self.self_idx].input_keys[0]
    }

    fn self_out_key(&self) -> &Key {
        &self.neurons[self.self_idx].output_keys[0]
    }
}

/// A running network: the network matrix, every input and output stream's
/// latest element, and each neuron's private state.
#[derive(Clone, Debug)]
pub struct NetworkState {
    topo: Arc<Topology>,
    t: u64,
    phase: Phase,
    w: Matrix,
    inputs: Vec<Vec<Matrix>>,
    outputs: Vec<Vec<Matrix>>,
    bodies: Vec<Box<dyn NeuronBody>>,
    active: Vec<bool>,
    self_mode: SelfMode,
    resets: u64,
}

fn invalid(msg: impl Into<String>) -> EngineError {
    EngineError::Validation(msg.into())
}

fn port_key(type_name: &str, kind: PortKind, name: &str) -> Result<Key, EngineError> {
    let n = IndexName {
        type_name: type_name.to_string(),
        kind,
        simple_name: name.to_string(),
    };
    format_index(&n).map_err(|e| invalid(e.to_string()))
}

/// Validates a row or column key of the network matrix.
fn check_key(
    mode: Mode,
    registry: &Registry,
    key: &str,
    is_row: bool,
    known: &HashMap<Key, (usize, usize)>,
) -> Result<(), EngineError> {
    let what = if is_row { "row" } else { "column" };
    match mode {
        Mode::Lightweight { rows, cols } => {
            let bound = if is_row { rows } else { cols };
            let i: usize = key.parse().map_err(|_| {
                invalid(format!("bad {what} key `{key}`: expected a decimal index"))
            })?;
            if i >= bound {
                return Err(invalid(format!(
                    "{what} index {i} out of range (size {bound})"
                )));
            }
        }
        Mode::Countable => {
            let n = parse_index(key).map_err(|e| invalid(format!("bad {what} key: {e}")))?;
            let kind_ok = matches!(
                (n.kind, is_row),
                (PortKind::Input(_), true) | (PortKind::Output(_), false)
            );
            if !kind_ok {
                return Err(invalid(format!(
                    "bad {what} key `{key}`: {} must name a neuron {}",
                    what,
                    if is_row { "input" } else { "output" }
                )));
            }
            match validate_against_registry(&n, registry) {
                Ok(true) => {}
                Ok(false) => {
                    return Err(invalid(format!(
                        "bad {what} key `{key}`: port number exceeds arity"
                    )))
                }
                Err(e) => return Err(invalid(format!("bad {what} key `{key}`: {e}"))),
            }
        }
    }
    if !known.contains_key(key) {
        return Err(invalid(format!(
            "{what} key `{key}` does not belong to a declared neuron"
        )));
    }
    Ok(())
}

fn clamp_rows(w: &Matrix, enforced: &[(Key, BTreeMap<Key, f64>)]) -> Matrix {
    if enforced.is_empty() {
        return w.clone();
    }
    match w {
        Matrix::Dense(d) => {
            let mut d = d.clone();
            for (row, values) in enforced {
                let i: usize = row.parse().expect("validated row key");
                for j in 0..d.cols() {
                    d.set(i, j, values.get(&j.to_string()).copied().unwrap_or(0.0));
                }
            }
            Matrix::Dense(d)
        }
        Matrix::Fd(a) => {
            let mut a = a.clone();
            for (row, values) in enforced {
                let v = FdVector::sparse(values.iter().map(|(k, x)| (k.clone(), *x)));
                a = a.with_row(row, &v);
            }
            Matrix::Fd(a)
        }
    }
}

impl NetworkState {
    /// Validates `spec` against `registry` and builds the state at `t = 0`.
    pub fn build(spec: &NetworkSpec, registry: &Registry) -> Result<NetworkState, EngineError> {
        let mode = spec.mode;
        let shape = mode.shape();
        if let Mode::Lightweight { rows, cols } = mode {
            if rows == 0 || cols == 0 {
                return Err(invalid(
                    "lightweight networks need at least one row and one column",
                ));
            }
        }

        let self_name = spec
            .self_neuron
            .as_deref()
            .ok_or_else(|| invalid("missing Self: no neuron is designated as Self"))?;

        let mut neurons = Vec::with_capacity(spec.neurons.len());
        let mut rows = HashMap::new();
        let mut cols = HashMap::new();
        let mut names = BTreeSet::new();
        for (idx, decl) in spec.neurons.iter().enumerate() {
            if !is_simple_name(&decl.name) {
                return Err(invalid(format!("bad neuron name `{}`", decl.name)));
            }
            if !names.insert(decl.name.as_str()) {
                return Err(invalid(format!("duplicate neuron name `{}`", decl.name)));
            }
            let ty = registry.get(&decl.type_name).ok_or_else(|| {
                invalid(format!(
                    "unknown neuron type `{}` for `{}`",
                    decl.type_name, decl.name
                ))
            })?;
            let (input_keys, output_keys) = match mode {
                Mode::Lightweight { rows: m, cols: n } => {
                    if decl.rows.len() != ty.input_arity || decl.cols.len() != ty.output_arity {
                        return Err(invalid(format!(
                            "neuron `{}` of type `{}` needs {} rows and {} columns, got {} and {}",
                            decl.name,
                            ty.name,
                            ty.input_arity,
                            ty.output_arity,
                            decl.rows.len(),
                            decl.cols.len()
                        )));
                    }
                    if let Some(r) = decl.rows.iter().find(|r| **r >= m) {
                        return Err(invalid(format!("row index {r} out of range (size {m})")));
                    }
                    if let Some(c) = decl.cols.iter().find(|c| **c >= n) {
                        return Err(invalid(format!("column index {c} out of range (size {n})")));
                    }
                    (
                        decl.rows.iter().map(usize::to_string).collect(),
                        decl.cols.iter().map(usize::to_string).collect(),
                    )
                }
                Mode::Countable => {
                    if !decl.rows.is_empty() || !decl.cols.is_empty() {
                        return Err(invalid(format!(
                            "neuron `{}`: countable networks derive ports from names; remove rows/cols",
                            decl.name
                        )));
                    }
                    let ins = (1..=ty.input_arity as u32)
                        .map(|k| port_key(&ty.name, PortKind::Input(k), &decl.name))
                        .collect::<Result<Vec<_>, _>>()?;
                    let outs = (1..=ty.output_arity as u32)
                        .map(|k| port_key(&ty.name, PortKind::Output(k), &decl.name))
                        .collect::<Result<Vec<_>, _>>()?;
                    (ins, outs)
                }
            };
            for (slot, k) in input_keys.iter().enumerate() {
                if rows.insert(k.clone(), (idx, slot)).is_some() {
                    return Err(invalid(format!("row `{k}` is used by two inputs")));
                }
            }
            for (slot, k) in output_keys.iter().enumerate() {
                if cols.insert(k.clone(), (idx, slot)).is_some() {
                    return Err(invalid(format!("column `{k}` is used by two outputs")));
                }
            }
            neurons.push(NeuronInfo {
                name: decl.name.clone(),
                type_name: decl.type_name.clone(),
                input_keys,
                output_keys,
            });
        }

        let self_idx = neurons
            .iter()
            .position(|n| n.name == self_name)
            .ok_or_else(|| {
                invalid(format!(
                    "missing Self: neuron `{self_name}` is not declared"
                ))
            })?;
        if neurons[self_idx].type_name != SELF2 {
            return Err(invalid(format!(
                "Self neuron `{self_name}` must have type `{SELF2}`"
            )));
        }

        if spec.initial_matrix.shape() != shape {
            return Err(invalid(format!(
                "initial matrix has shape {}, network expects {shape}",
                spec.initial_matrix.shape()
            )));
        }
        let initial_triplets = spec
            .initial_matrix
            .triplets()
            .ok_or_else(|| invalid("initial matrix must have finite support"))?;
        for (r, c, _) in &initial_triplets {
            check_key(mode, registry, r, true, &rows)?;
            check_key(mode, registry, c, false, &cols)?;
        }

        let mut enforced = Vec::new();
        for (row, values) in &spec.enforced_rows {
            check_key(mode, registry, row, true, &rows)?;
            for c in values.keys() {
                check_key(mode, registry, c, false, &cols)?;
            }
            enforced.push((row.clone(), values.clone()));
        }

        let mut bodies = Vec::with_capacity(neurons.len());
        let mut outputs = Vec::with_capacity(neurons.len());
        for (decl, info) in spec.neurons.iter().zip(&neurons) {
            let ty = registry.get(&decl.type_name).expect("checked above");
            let body = ty
                .instantiate(&decl.params, shape)
                .map_err(|e| invalid(format!("neuron `{}`: {e}", decl.name)))?;
            outputs.push(body.initial_outputs(shape, info.output_keys.len()));
            bodies.push(body);
        }
        for (key, m) in &spec.initial_outputs {
            let &(n, slot) = cols.get(key).ok_or_else(|| {
                invalid(format!(
                    "initial output `{key}` does not belong to a declared neuron"
                ))
            })?;
            if n == self_idx {
                return Err(invalid(
                    "Self's initial output is the initial matrix; do not set it separately",
                ));
            }
            if m.shape() != shape {
                return Err(invalid(format!(
                    "initial output `{key}` has the wrong shape"
                )));
            }
            outputs[n][slot] = m.clone();
        }
        outputs[self_idx][0] = spec.initial_matrix.clone();

        let inputs = neurons
            .iter()
            .map(|n| vec![Matrix::zero(shape); n.input_keys.len()])
            .collect();
        let topo = Topology {
            mode,
            neurons,
            rows,
            cols,
            self_idx,
            enforced,
            overflow_policy: spec.overflow_policy,
        };
        Ok(NetworkState {
            active: vec![false; topo.neurons.len()],
            topo: Arc::new(topo),
            t: 0,
            phase: Phase::BeforeDown,
            w: spec.initial_matrix.clone(),
            inputs,
            outputs,
            bodies,
            self_mode: SelfMode::Literal,
            resets: 0,
        })
    }

    pub fn with_self_mode(mut self, mode: SelfMode) -> Self {
        self.self_mode = mode;
        self
    }

    pub fn self_mode(&self) -> SelfMode {
        self.self_mode
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn mode(&self) -> Mode {
        self.topo.mode
    }

    /// The current network matrix (latest Self output).
    pub fn network_matrix(&self) -> &Matrix {
        &self.w
    }

    /// Number of times an infinite-support Self output was reset to zero.
    pub fn resets(&self) -> u64 {
        self.resets
    }

    pub fn output(&self, key: &str) -> Option<&Matrix> {
        let &(n, slot) = self.topo.cols.get(key)?;
        Some(&self.outputs[n][slot])
    }

    pub fn input(&self, key: &str) -> Option<&Matrix> {
        let &(n, slot) = self.topo.rows.get(key)?;
        Some(&self.inputs[n][slot])
    }

    /// Column keys of every declared output, in declaration order.
    pub fn output_keys(&self) -> Vec<&Key> {
        self.topo
            .neurons
            .iter()
            .flat_map(|n| &n.output_keys)
            .collect()
    }

    pub fn self_output_key(&self) -> &Key {
        self.topo.self_out_key()
    }

    pub fn self_x_key(&self) -> &Key {
        self.topo.self_x_key()
    }

    fn w_triplets(&self) -> Result<Vec<(Key, Key, f64)>, EngineError> {
        self.w
            .triplets()
            .ok_or_else(|| EngineError::Internal("network matrix lost finite support".into()))
    }

    fn active_flags(&self, triplets: &[(Key, Key, f64)]) -> Vec<bool> {
        let mut active = vec![false; self.topo.neurons.len()];
        active[self.topo.self_idx] = true;
        for (r, c, _) in triplets {
            if let Some(&(n, _)) = self.topo.rows.get(r) {
                active[n] = true;
            }
            if let Some(&(n, _)) = self.topo.cols.get(c) {
                active[n] = true;
            }
        }
        active
    }

    /// Neurons with a nonzero weight on one of their inputs or outputs, plus
    /// Self.
    pub fn active_set(&self) -> Result<BTreeSet<String>, EngineError> {
        let triplets = self.w_triplets()?;
        Ok(self
            .active_flags(&triplets)
            .iter()
            .zip(&self.topo.neurons)
            .filter(|(a, _)| **a)
            .map(|(_, n)| n.name.clone())
            .collect())
    }

    /// True iff Self's `x` row holds exactly one nonzero weight, 1, on Self's
    /// own output.
    pub fn x_row_constraint_holds(&self) -> Result<bool, EngineError> {
        let x = self.topo.self_x_key();
        let out = self.topo.self_out_key();
        let row: Vec<_> = self
            .w_triplets()?
            .into_iter()
            .filter(|(r, _, _)| r == x)
            .collect();
        Ok(row.len() == 1 && &row[0].1 == out && row[0].2 == 1.0)
    }

    /// Recomputes every input of the active neurons as a linear combination
    /// of the current outputs, weighted by the network matrix.
    pub fn down_movement(&mut self) -> Result<(), EngineError> {
        if self.phase != Phase::BeforeDown {
            return Err(EngineError::Phase {
                expected: Phase::BeforeDown,
                found: self.phase,
            });
        }
        let shape = self.topo.shape();
        let triplets = self.w_triplets()?;
        let optimized = self.self_mode == SelfMode::Optimized;
        if optimized && !self.x_row_constraint_holds()? {
            return Err(EngineError::ConstraintViolated {
                t: self.t,
                detail: format!(
                    "row `{}` is not a unit weight on Self's output",
                    self.topo.self_x_key()
                ),
            });
        }
        self.active = self.active_flags(&triplets);

        let mut acc: Vec<Vec<Option<Matrix>>> = self
            .topo
            .neurons
            .iter()
            .map(|n| vec![None; n.input_keys.len()])
            .collect();
        for (r, c, w) in &triplets {
            let Some(&(n, slot)) = self.topo.rows.get(r) else {
                continue;
            };
            if !self.active[n] || (optimized && n == self.topo.self_idx && slot == 0) {
                continue;
            }
            let Some(&(m, oslot)) = self.topo.cols.get(c) else {
                continue;
            };
            let src = &self.outputs[m][oslot];
            match &mut acc[n][slot] {
                None => {
                    acc[n][slot] = Some(if *w == 1.0 {
                        src.clone()
                    } else {
                        src.scale(*w)
                    });
                }
                Some(sum) => sum
                    .add_scaled(*w, src)
                    .map_err(|e| EngineError::Internal(e.to_string()))?,
            }
        }
        for (n, slots) in acc.into_iter().enumerate() {
            for (slot, m) in slots.into_iter().enumerate() {
                self.inputs[n][slot] = m.map_or_else(|| Matrix::zero(shape), Matrix::canonical);
            }
        }
        if optimized {
            self.inputs[self.topo.self_idx][0] = self.w.clone();
        }
        self.phase = Phase::AfterDown;
        Ok(())
    }

    /// Steps every active neuron on its current inputs, then installs Self's
    /// new output as the network matrix.
    pub fn up_movement(&mut self) -> Result<(), EngineError> {
        if self.phase != Phase::AfterDown {
            return Err(EngineError::Phase {
                expected: Phase::AfterDown,
                found: self.phase,
            });
        }
        let ctx = StepContext {
            t: self.t + 1,
            shape: self.topo.shape(),
        };
        let mut next_outputs: Vec<Option<Vec<Matrix>>> = Vec::with_capacity(self.bodies.len());
        for (n, body) in self.bodies.iter_mut().enumerate() {
            if !self.active[n] {
                next_outputs.push(None);
                continue;
            }
            let out = body
                .step(&ctx, &self.inputs[n])
                .map_err(|source| EngineError::Neuron {
                    neuron: self.topo.neurons[n].name.clone(),
                    t: ctx.t,
                    source,
                })?;
            next_outputs.push(Some(out.into_iter().map(Matrix::canonical).collect()));
        }

        let s = self.topo.self_idx;
        let mut w = next_outputs[s].as_ref().expect("Self is always active")[0].clone();
        w = clamp_rows(&w, &self.topo.enforced);
        if let Matrix::Fd(a) = &w {
            w = Matrix::Fd(a.canonical());
        }
        if !w.has_finite_support() {
            match self.topo.overflow_policy {
                OverflowPolicy::ResetToZero => {
                    w = clamp_rows(&Matrix::zero(self.topo.shape()), &self.topo.enforced).canonical();
                    self.resets += 1;
                }
                OverflowPolicy::Halt => return Err(EngineError::Overflow { t: ctx.t }),
            }
        }
        next_outputs[s] = Some(vec![w.clone()]);

        for (n, out) in next_outputs.into_iter().enumerate() {
            if let Some(out) = out {
                self.outputs[n] = out;
            }
        }
        self.w = w;
        self.t = ctx.t;
        self.phase = Phase::BeforeDown;
        Ok(())
    }

    /// One full cycle: down movement followed by up movement.
    pub fn step(&mut self) -> Result<(), EngineError> {
        self.down_movement()?;
        self.up_movement()
    }

    /// Rejects watch keys that cannot name a cell or output of this network.
    pub fn check_watch(&self, watch: &[WatchKey]) -> Result<(), EngineError> {
        for key in watch {
            match (&key.target, self.topo.mode) {
                (WatchTarget::Cell { row, col }, Mode::Lightweight { rows, cols }) => {
                    let in_range = |k: &str, n: usize| k.parse::<usize>().is_ok_and(|i| i < n);
                    if !in_range(row, rows) || !in_range(col, cols) {
                        return Err(EngineError::BadWatch(format!(
                            "`{}`: cell outside the {rows}x{cols} network matrix",
                            key.label
                        )));
                    }
                }
                (WatchTarget::Cell { row, col }, Mode::Countable) => {
                    if parse_index(row).is_err() || parse_index(col).is_err() {
                        return Err(EngineError::BadWatch(format!(
                            "`{}`: countable networks need port-name cells",
                            key.label
                        )));
                    }
                }
                (WatchTarget::Output(col), _) => {
                    if !self.topo.cols.contains_key(col) {
                        return Err(EngineError::BadWatch(format!(
                            "`{}`: no such output",
                            key.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn sample(&self, watch: &[WatchKey]) -> Result<TraceRecord, EngineError> {
        let mut watched = IndexMap::with_capacity(watch.len());
        for key in watch {
            let value = match &key.target {
                WatchTarget::Cell { row, col } => WatchValue::Scalar(self.w.value(row, col)),
                WatchTarget::Output(col) => WatchValue::Matrix(
                    self.output(col)
                        .ok_or_else(|| {
                            EngineError::BadWatch(format!("`{}`: no such output", key.label))
                        })?
                        .clone(),
                ),
            };
            watched.insert(key.label.clone(), value);
        }
        Ok(TraceRecord { t: self.t, watched })
    }

    /// Runs `steps` cycles, sampling `watch` after every up movement.
    pub fn run(&mut self, steps: u64, watch: &[WatchKey]) -> Result<Trace, EngineError> {
        if self.phase != Phase::BeforeDown {
            return Err(EngineError::Phase {
                expected: Phase::BeforeDown,
                found: self.phase,
            });
        }
        self.check_watch(watch)?;
        let mut trace = Vec::with_capacity(steps as usize);
        for _ in 0..steps {
            self.step()?;
            trace.push(self.sample(watch)?);
        }
        Ok(trace)
    }

    /// Self's output and every declared output, for whole-state comparisons.
    pub fn snapshot(&self) -> Vec<Matrix> {
        std::iter::once(self.w.clone())
            .chain(self.outputs.iter().flatten().cloned())
            .collect()
    }
}

/// Runs `spec` with literal and optimized Self side by side for `steps`
/// cycles and reports whether the network matrix and every output agree
/// after each step.
pub fn self_equivalence_check(
    spec: &NetworkSpec,
    registry: &Registry,
    steps: u64,
) -> Result<bool, EngineError> {
    let mut literal = NetworkState::build(spec, registry)?;
    let mut optimized = literal.clone().with_self_mode(SelfMode::Optimized);
    for _ in 0..steps {
        if !literal.x_row_constraint_holds()? {
            return Err(EngineError::ConstraintViolated {
                t: literal.t(),
                detail: format!(
                    "row `{}` is not a unit weight on Self's output",
                    literal.self_x_key()
                ),
            });
        }
        literal.step()?;
        optimized.step()?;
        let a = literal.snapshot();
        let b = optimized.snapshot();
        if a.len() != b.len() || a.iter().zip(&b).any(|(x, y)| !x.same_values(y)) {
            return Ok(false);
        }
    }
    Ok(true)
}
