//! Deterministic execution of a configuration.
//!
//! Virtual time is the global step counter. Step 0 initializes every
//! instance; each later step gives every instance, in declaration order, one
//! turn: dequeue at most one envelope that was enqueued in an earlier step,
//! run it to completion, then chase enabled eventless transitions.

mod trace;
mod value;

use std::collections::{HashMap, VecDeque};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::ast::*;
use crate::diagnostic::Diagnostic;
use crate::ml::{self, Dataset, MlError, Prediction, ScalerParams, TrainedModel};

pub use trace::{write_trace, Detail, DiscardReason, EventKind, TraceEvent};
pub use value::Value;

/// Eventless transitions one turn may fire before the run is a livelock.
pub const MAX_EVENTLESS_CHAIN: usize = 1000;
/// Iterations a single `while` statement may run.
pub const MAX_WHILE_ITERATIONS: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ErrorKind {
    #[error("eventless transition chain in state `{state}` reached length {chain}")]
    Livelock { state: String, chain: usize },
    #[error("while loop exceeded {MAX_WHILE_ITERATIONS} iterations")]
    WhileLimit,
    #[error("division or modulo by zero")]
    DivisionByZero,
    #[error("`{op}({da})` before `da_train({da})`")]
    DaOrder { op: &'static str, da: String },
    #[error("data analytics block `{da}`: {source}")]
    Ml { da: String, source: MlError },
}

impl ErrorKind {
    pub fn code(&self) -> &'static str {
        match self {
            ErrorKind::Livelock { .. } => "E-LIVELOCK",
            ErrorKind::WhileLimit => "E-WHILE",
            ErrorKind::DivisionByZero => "E-DIV",
            ErrorKind::DaOrder { .. } => "E-DA-ORDER",
            ErrorKind::Ml { source, .. } => match source {
                MlError::Io(_) | MlError::Schema(_) | MlError::Parse { .. } => "E-IO",
                other => other.code(),
            },
        }
    }
}

/// A failure during simulation, located at the step and instance whose turn
/// raised it.
#[derive(Clone, Debug, PartialEq, Error)]
#[error("step {step}, instance `{instance}`: {kind}")]
pub struct RuntimeError {
    pub step: u64,
    pub instance: String,
    pub kind: ErrorKind,
}

impl RuntimeError {
    pub fn code(&self) -> &'static str {
        self.kind.code()
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("model has {} validation error(s)", .0.len())]
    Invalid(Vec<Diagnostic>),
    #[error("no configuration named `{0}`")]
    UnknownConfiguration(String),
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    /// Port of the receiving instance.
    pub port: String,
    pub message: String,
    pub args: Vec<Value>,
    pub enqueued: u64,
}

/// Observable state of one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSnapshot {
    pub name: String,
    pub thing: String,
    /// `None` for things without a statechart.
    pub state: Option<String>,
    pub properties: Vec<(String, Value)>,
    pub queued: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    pub final_states: Vec<InstanceSnapshot>,
    pub trace: Vec<TraceEvent>,
    /// Global steps executed (initialization excluded).
    pub steps: u64,
}

/// Validates `model`, then runs `config` for up to `max_steps` steps.
pub fn simulate(model: &Model, config: &str, max_steps: u64) -> Result<SimResult, SimError> {
    let report = crate::validate(model);
    if !report.ok {
        return Err(SimError::Invalid(report.errors().cloned().collect()));
    }
    let mut sim = Simulator::new(model, config)?;
    sim.run(max_steps)?;
    Ok(sim.into_result())
}

#[derive(Default)]
struct DaState {
    scaler: Option<ScalerParams>,
    model: Option<TrainedModel>,
}

struct InstanceRt<'m> {
    name: String,
    thing: &'m Thing,
    state: Option<usize>,
    props: Vec<Value>,
    mailbox: VecDeque<Envelope>,
    da: Vec<DaState>,
}

impl<'m> InstanceRt<'m> {
    fn current(&self) -> Option<&'m State> {
        let sc = self.thing.statechart.as_ref()?;
        Some(&sc.states[self.state?])
    }
}

/// Locals and trigger parameters visible to a running block.
#[derive(Default)]
struct Frame {
    scopes: Vec<Vec<(String, Value)>>,
    params: Vec<(String, Value)>,
}

impl Frame {
    fn with_params(params: Vec<(String, Value)>) -> Self {
        Frame {
            scopes: Vec::new(),
            params,
        }
    }

    fn local_mut(&mut self, name: &str) -> Option<&mut Value> {
        self.scopes
            .iter_mut()
            .rev()
            .flat_map(|s| s.iter_mut().rev())
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }

    fn lookup(&self, name: &str) -> Option<&Value> {
        self.scopes
            .iter()
            .rev()
            .flat_map(|s| s.iter().rev())
            .chain(self.params.iter())
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }
}

type DatasetKey = (PathBuf, Vec<String>, String);

/// Step-by-step executor for one configuration. Construction runs step-0
/// initialization lazily on the first call to [`Simulator::run`], so the
/// trace of a failed run is still available.
pub struct Simulator<'m> {
    model: &'m Model,
    base_dir: PathBuf,
    instances: Vec<InstanceRt<'m>>,
    /// `(instance, port)` → connected `(peer instance, peer port)` pairs.
    routes: HashMap<(usize, &'m str), Vec<(usize, &'m str)>>,
    datasets: HashMap<DatasetKey, Dataset>,
    trace: Vec<TraceEvent>,
    step: u64,
    initialized: bool,
    finished: bool,
}

impl<'m> Simulator<'m> {
    /// Prepares `config` without validating; call [`crate::validate`] first.
    /// Relative dataset and save paths resolve against the directory of the
    /// model's source file.
    pub fn new(model: &'m Model, config: &str) -> Result<Self, SimError> {
        let cfg = model
            .configuration(config)
            .ok_or_else(|| SimError::UnknownConfiguration(config.to_string()))?;
        let mut index = HashMap::new();
        let mut instances = Vec::with_capacity(cfg.instances.len());
        for inst in &cfg.instances {
            let thing = model
                .thing(inst.thing.as_str())
                .expect("validated configuration names declared things");
            index.insert(inst.name.as_str(), instances.len());
            instances.push(InstanceRt {
                name: inst.name.name.clone(),
                thing,
                state: None,
                props: Vec::new(),
                mailbox: VecDeque::new(),
                da: thing.analytics.iter().map(|_| DaState::default()).collect(),
            });
        }
        let mut routes: HashMap<(usize, &'m str), Vec<(usize, &'m str)>> = HashMap::new();
        for conn in &cfg.connectors {
            let a = (index[conn.from.instance.as_str()], conn.from.port.as_str());
            let b = (index[conn.to.instance.as_str()], conn.to.port.as_str());
            routes.entry(a).or_default().push(b);
            routes.entry(b).or_default().push(a);
        }
        let base_dir = Path::new(&model.source_name)
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default();
        Ok(Simulator {
            model,
            base_dir,
            instances,
            routes,
            datasets: HashMap::new(),
            trace: Vec::new(),
            step: 0,
            initialized: false,
            finished: false,
        })
    }

    /// Overrides the directory relative DA paths resolve against.
    pub fn with_base_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.base_dir = dir.into();
        self
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    /// Last step started (0 before the first global step).
    pub fn step(&self) -> u64 {
        self.step
    }

    /// True once the run stopped because nothing could happen any more.
    pub fn is_quiescent(&self) -> bool {
        self.finished
    }

    /// Envelopes still waiting in mailboxes.
    pub fn queued(&self) -> usize {
        self.instances.iter().map(|i| i.mailbox.len()).sum()
    }

    pub fn snapshots(&self) -> Vec<InstanceSnapshot> {
        self.instances
            .iter()
            .map(|i| InstanceSnapshot {
                name: i.name.clone(),
                thing: i.thing.name.name.clone(),
                state: i.current().map(|s| s.name.name.clone()),
                properties: i
                    .thing
                    .properties
                    .iter()
                    .zip(&i.props)
                    .map(|(p, v)| (p.name.name.clone(), v.clone()))
                    .collect(),
                queued: i.mailbox.len(),
            })
            .collect()
    }

    pub fn into_result(self) -> SimResult {
        SimResult {
            final_states: self.snapshots(),
            steps: self.step,
            trace: self.trace,
        }
    }

    /// Runs until `max_steps` global steps have executed in total or the
    /// system is quiescent.
    pub fn run(&mut self, max_steps: u64) -> Result<(), RuntimeError> {
        if !self.initialized {
            self.initialized = true;
            self.initialize()?;
        }
        while !self.finished && self.step < max_steps {
            let next = self.step + 1;
            if self.quiescent_at(next) {
                self.finished = true;
                break;
            }
            self.step = next;
            for idx in 0..self.instances.len() {
                self.turn(idx).map_err(|kind| self.error(idx, kind))?;
            }
        }
        Ok(())
    }

    fn error(&self, idx: usize, kind: ErrorKind) -> RuntimeError {
        RuntimeError {
            step: self.step,
            instance: self.instances[idx].name.clone(),
            kind,
        }
    }

    fn initialize(&mut self) -> Result<(), RuntimeError> {
        for idx in 0..self.instances.len() {
            self.init_instance(idx)
                .map_err(|kind| self.error(idx, kind))?;
        }
        Ok(())
    }

    fn init_instance(&mut self, idx: usize) -> Result<(), ErrorKind> {
        let thing = self.instances[idx].thing;
        for prop in &thing.properties {
            let v = match &prop.initial {
                Some(e) => self.eval(idx, &Frame::default(), e)?.coerce(prop.ty),
                None => Value::default_for(prop.ty),
            };
            self.instances[idx].props.push(v);
        }
        if let Some(sc) = &thing.statechart {
            let initial = sc
                .state_index(sc.initial.as_str())
                .expect("validated initial state");
            self.instances[idx].state = Some(initial);
            if let Some(entry) = &sc.states[initial].entry {
                self.exec_block(idx, &mut Frame::default(), entry)?;
            }
            self.chase(idx)?;
        }
        Ok(())
    }

    /// Nothing can happen at `step` or later: mailboxes are empty, no
    /// eventless transition is enabled, and no eventless guard of a current
    /// state depends on `Now()` (such a guard may become true later).
    fn quiescent_at(&mut self, step: u64) -> bool {
        if self.instances.iter().any(|i| !i.mailbox.is_empty()) {
            return false;
        }
        let waiting_on_time = self.instances.iter().any(|i| {
            i.current().is_some_and(|s| {
                s.transitions
                    .iter()
                    .any(|t| t.is_eventless() && t.guard.as_ref().is_some_and(mentions_now))
            })
        });
        if waiting_on_time {
            return false;
        }
        let saved = std::mem::replace(&mut self.step, step);
        let idle = (0..self.instances.len()).all(|idx| {
            // a guard that fails to evaluate counts as enabled so the error
            // surfaces in the step itself
            !matches!(self.eventless_enabled(idx), Ok(Some(_)) | Err(_))
        });
        self.step = saved;
        idle
    }

    fn turn(&mut self, idx: usize) -> Result<(), ErrorKind> {
        let visible = self.instances[idx]
            .mailbox
            .front()
            .is_some_and(|e| e.enqueued < self.step);
        if visible {
            let env = self.instances[idx]
                .mailbox
                .pop_front()
                .expect("checked front");
            self.dispatch(idx, env)?;
        }
        self.chase(idx)
    }

    fn emit(&mut self, idx: usize, detail: Detail) {
        self.trace.push(TraceEvent {
            step: self.step,
            instance: self.instances[idx].name.clone(),
            kind: detail.kind(),
            detail,
        });
    }

    fn dispatch(&mut self, idx: usize, env: Envelope) -> Result<(), ErrorKind> {
        self.emit(
            idx,
            Detail::Dispatch {
                port: env.port.clone(),
                message: env.message.clone(),
                args: env.args.clone(),
            },
        );
        let inst = &self.instances[idx];
        let thing = inst.thing;
        if let Some(state) = inst.current() {
            let params: Vec<(String, Value)> = thing
                .message(&env.message)
                .map(|m| {
                    m.params
                        .iter()
                        .zip(&env.args)
                        .map(|(p, v)| (p.name.name.clone(), v.clone()))
                        .collect()
                })
                .unwrap_or_default();
            for tr in &state.transitions {
                let Some(trig) = &tr.trigger else { continue };
                if trig.port.name != env.port || trig.message.name != env.message {
                    continue;
                }
                let mut frame = Frame::with_params(params.clone());
                if self.guard(idx, &frame, tr)? {
                    return self.fire(idx, &mut frame, tr, false);
                }
            }
        }
        self.emit(
            idx,
            Detail::Discard {
                reason: DiscardReason::NoTransition,
                port: env.port,
                message: env.message,
            },
        );
        Ok(())
    }

    fn guard(&self, idx: usize, frame: &Frame, tr: &Transition) -> Result<bool, ErrorKind> {
        match &tr.guard {
            Some(g) => Ok(self.eval(idx, frame, g)?.as_bool()),
            None => Ok(true),
        }
    }

    fn eventless_enabled(&self, idx: usize) -> Result<Option<&'m Transition>, ErrorKind> {
        let Some(state) = self.instances[idx].current() else {
            return Ok(None);
        };
        let frame = Frame::default();
        for tr in state.transitions.iter().filter(|t| t.is_eventless()) {
            if self.guard(idx, &frame, tr)? {
                return Ok(Some(tr));
            }
        }
        Ok(None)
    }

    fn chase(&mut self, idx: usize) -> Result<(), ErrorKind> {
        let mut chain = 0;
        while let Some(tr) = self.eventless_enabled(idx)? {
            chain += 1;
            if chain > MAX_EVENTLESS_CHAIN {
                let state = self.instances[idx].current().expect("has a state");
                return Err(ErrorKind::Livelock {
                    state: state.name.name.clone(),
                    chain,
                });
            }
            self.fire(idx, &mut Frame::default(), tr, true)?;
        }
        Ok(())
    }

    fn fire(
        &mut self,
        idx: usize,
        frame: &mut Frame,
        tr: &'m Transition,
        eventless: bool,
    ) -> Result<(), ErrorKind> {
        let inst = &self.instances[idx];
        let sc = inst
            .thing
            .statechart
            .as_ref()
            .expect("fires only with a statechart");
        let from = inst.current().expect("has a state");
        match &tr.kind {
            TransitionKind::Internal => {
                if eventless {
                    let name = from.name.name.clone();
                    self.emit(
                        idx,
                        Detail::EventlessTransition {
                            from: name.clone(),
                            to: name,
                            internal: true,
                        },
                    );
                }
                if let Some(action) = &tr.action {
                    self.exec_block(idx, frame, action)?;
                }
            }
            TransitionKind::External(target) => {
                let to = sc.state_index(target.as_str()).expect("validated target");
                if let Some(exit) = &from.exit {
                    self.exec_block(idx, &mut Frame::default(), exit)?;
                }
                if let Some(action) = &tr.action {
                    self.exec_block(idx, frame, action)?;
                }
                self.instances[idx].state = Some(to);
                let (from, to_state) = (from.name.name.clone(), sc.states[to].name.name.clone());
                let detail = if eventless {
                    Detail::EventlessTransition {
                        from,
                        to: to_state,
                        internal: false,
                    }
                } else {
                    Detail::Transition { from, to: to_state }
                };
                self.emit(idx, detail);
                if let Some(entry) = &sc.states[to].entry {
                    self.exec_block(idx, &mut Frame::default(), entry)?;
                }
            }
        }
        Ok(())
    }

    fn property_index(&self, idx: usize, name: &str) -> Option<usize> {
        self.instances[idx]
            .thing
            .properties
            .iter()
            .position(|p| p.name.name == name)
    }

    fn eval(&self, idx: usize, frame: &Frame, e: &Expr) -> Result<Value, ErrorKind> {
        Ok(match &e.kind {
            ExprKind::Literal(lit) => Value::from(lit),
            ExprKind::Now => Value::Int(self.step as i64),
            ExprKind::Name(n) => match frame.lookup(n) {
                Some(v) => v.clone(),
                None => {
                    let p = self.property_index(idx, n).expect("validated name");
                    self.instances[idx].props[p].clone()
                }
            },
            ExprKind::Unary(op, operand) => value::unary(*op, self.eval(idx, frame, operand)?),
            ExprKind::Binary(BinaryOp::And, l, r) => Value::Bool(
                self.eval(idx, frame, l)?.as_bool() && self.eval(idx, frame, r)?.as_bool(),
            ),
            ExprKind::Binary(BinaryOp::Or, l, r) => Value::Bool(
                self.eval(idx, frame, l)?.as_bool() || self.eval(idx, frame, r)?.as_bool(),
            ),
            ExprKind::Binary(op, l, r) => {
                let l = self.eval(idx, frame, l)?;
                let r = self.eval(idx, frame, r)?;
                value::binary(*op, l, r)?
            }
        })
    }

    fn exec_block(
        &mut self,
        idx: usize,
        frame: &mut Frame,
        block: &'m Block,
    ) -> Result<(), ErrorKind> {
        frame.scopes.push(Vec::new());
        let result = block
            .stmts
            .iter()
            .try_for_each(|s| self.exec(idx, frame, s));
        frame.scopes.pop();
        result
    }

    fn exec(&mut self, idx: usize, frame: &mut Frame, stmt: &'m Stmt) -> Result<(), ErrorKind> {
        match &stmt.kind {
            StmtKind::VarDecl { name, ty, init } => {
                let v = self.eval(idx, frame, init)?.coerce(*ty);
                frame
                    .scopes
                    .last_mut()
                    .expect("blocks push a scope")
                    .push((name.name.clone(), v));
            }
            StmtKind::Assign { target, value } => {
                let v = self.eval(idx, frame, value)?;
                self.assign(idx, frame, target.as_str(), v);
            }
            StmtKind::Send {
                port,
                message,
                args,
            } => {
                let mut values = Vec::with_capacity(args.len());
                for a in args {
                    values.push(self.eval(idx, frame, a)?);
                }
                let thing = self.instances[idx].thing;
                if let Some(m) = thing.message(message.as_str()) {
                    values = values
                        .into_iter()
                        .zip(&m.params)
                        .map(|(v, p)| v.coerce(p.ty))
                        .collect();
                }
                self.send(idx, port.as_str(), message.as_str(), values);
            }
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                if self.eval(idx, frame, cond)?.as_bool() {
                    self.exec_block(idx, frame, then_block)?;
                } else if let Some(b) = else_block {
                    self.exec_block(idx, frame, b)?;
                }
            }
            StmtKind::While { cond, body } => {
                let mut iterations = 0u64;
                while self.eval(idx, frame, cond)?.as_bool() {
                    iterations += 1;
                    if iterations > MAX_WHILE_ITERATIONS {
                        return Err(ErrorKind::WhileLimit);
                    }
                    self.exec_block(idx, frame, body)?;
                }
            }
            StmtKind::Print(e) => {
                let value = self.eval(idx, frame, e)?;
                self.emit(idx, Detail::Print { value });
            }
            StmtKind::DaPreprocess(da) => self.da_preprocess(idx, da.as_str())?,
            StmtKind::DaTrain(da) => self.da_train(idx, da.as_str())?,
            StmtKind::DaPredict(da) => self.da_predict(idx, da.as_str())?,
            StmtKind::DaSave(da, path) => self.da_save(idx, da.as_str(), path)?,
        }
        Ok(())
    }

    fn assign(&mut self, idx: usize, frame: &mut Frame, target: &str, v: Value) {
        let slot = match frame.local_mut(target) {
            Some(slot) => slot,
            None => {
                let p = self.property_index(idx, target).expect("validated target");
                &mut self.instances[idx].props[p]
            }
        };
        let ty = slot.ty();
        *slot = v.coerce(ty);
    }

    fn send(&mut self, idx: usize, port: &str, message: &str, args: Vec<Value>) {
        let peers: Vec<(usize, &'m str)> = self
            .routes
            .get(&(idx, port))
            .map(|ps| {
                ps.iter()
                    .copied()
                    .filter(|&(peer, peer_port)| {
                        self.instances[peer]
                            .thing
                            .port(peer_port)
                            .is_some_and(|p| p.receives(message))
                    })
                    .collect()
            })
            .unwrap_or_default();
        if peers.is_empty() {
            self.emit(
                idx,
                Detail::Discard {
                    reason: DiscardReason::UnconnectedPort,
                    port: port.to_string(),
                    message: message.to_string(),
                },
            );
            return;
        }
        let to = peers
            .iter()
            .map(|&(peer, peer_port)| format!("{}.{}", self.instances[peer].name, peer_port))
            .collect();
        self.emit(
            idx,
            Detail::Send {
                port: port.to_string(),
                message: message.to_string(),
                args: args.clone(),
                to,
            },
        );
        for (peer, peer_port) in peers {
            self.instances[peer].mailbox.push_back(Envelope {
                port: peer_port.to_string(),
                message: message.to_string(),
                args: args.clone(),
                enqueued: self.step,
            });
        }
    }

    fn block(&self, idx: usize, da: &str) -> (usize, &'m DataAnalyticsBlock) {
        let thing = self.instances[idx].thing;
        let i = thing
            .analytics
            .iter()
            .position(|b| b.name.name == da)
            .expect("validated DA reference");
        (i, &thing.analytics[i])
    }

    fn resolve_path(&self, path: &str) -> PathBuf {
        let p = Path::new(path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn dataset(&mut self, block: &DataAnalyticsBlock) -> Result<&Dataset, ErrorKind> {
        let features: Vec<String> = block.features.iter().map(|f| f.name.clone()).collect();
        let key = (
            self.resolve_path(&block.dataset),
            features,
            block.label.name.clone(),
        );
        if !self.datasets.contains_key(&key) {
            let names: Vec<&str> = key.1.iter().map(String::as_str).collect();
            let ds = ml::load_dataset(&key.0, &names, &key.2).map_err(|source| ErrorKind::Ml {
                da: block.name.name.clone(),
                source,
            })?;
            self.datasets.insert(key.clone(), ds);
        }
        Ok(&self.datasets[&key])
    }

    fn da_preprocess(&mut self, idx: usize, da: &str) -> Result<(), ErrorKind> {
        let (i, block) = self.block(idx, da);
        let scaler = ml::fit_scaler(&self.dataset(block)?.features());
        self.instances[idx].da[i].scaler = Some(scaler);
        Ok(())
    }

    fn da_train(&mut self, idx: usize, da: &str) -> Result<(), ErrorKind> {
        let (i, block) = self.block(idx, da);
        let algorithm = block.algorithm.resolve().expect("validated algorithm");
        let scaler = self.instances[idx].da[i].scaler.clone();
        let data = self.dataset(block)?;
        let ml_err = |source| ErrorKind::Ml {
            da: da.to_string(),
            source,
        };
        let model = ml::train(&algorithm, data, scaler).map_err(ml_err)?;
        let metric = model.evaluate(data).map_err(ml_err)?;
        let rows = data.n();
        self.instances[idx].da[i].model = Some(model);
        self.emit(
            idx,
            Detail::Train {
                da: da.to_string(),
                algorithm: algorithm.kind().name().to_string(),
                rows,
                metric: metric.name.to_string(),
                value: metric.value,
            },
        );
        Ok(())
    }

    fn da_predict(&mut self, idx: usize, da: &str) -> Result<(), ErrorKind> {
        let (i, block) = self.block(idx, da);
        let features: Vec<f64> = block
            .features
            .iter()
            .map(|f| {
                let p = self
                    .property_index(idx, f.as_str())
                    .expect("validated feature");
                self.instances[idx].props[p]
                    .as_f64()
                    .expect("numeric feature")
            })
            .collect();
        let model = self.instances[idx].da[i]
            .model
            .as_ref()
            .ok_or_else(|| ErrorKind::DaOrder {
                op: "da_predict",
                da: da.to_string(),
            })?;
        let prediction = match model.predict(&features) {
            Ok(Prediction::Real(r)) => Value::Real(r),
            Ok(Prediction::Label(l)) => Value::Int(l),
            Err(source) => {
                return Err(ErrorKind::Ml {
                    da: da.to_string(),
                    source,
                })
            }
        };
        let p = self
            .property_index(idx, block.prediction.as_str())
            .expect("validated prediction property");
        let slot = &mut self.instances[idx].props[p];
        *slot = prediction.clone().coerce(slot.ty());
        self.emit(
            idx,
            Detail::Predict {
                da: da.to_string(),
                features,
                prediction,
            },
        );
        Ok(())
    }

    fn da_save(&mut self, idx: usize, da: &str, path: &str) -> Result<(), ErrorKind> {
        let (i, _) = self.block(idx, da);
        let model = self.instances[idx].da[i]
            .model
            .as_ref()
            .ok_or_else(|| ErrorKind::DaOrder {
                op: "da_save",
                da: da.to_string(),
            })?;
        ml::save_model(model, &self.resolve_path(path)).map_err(|source| ErrorKind::Ml {
            da: da.to_string(),
            source,
        })
    }
}

fn mentions_now(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Now => true,
        ExprKind::Literal(_) | ExprKind::Name(_) => false,
        ExprKind::Unary(_, x) => mentions_now(x),
        ExprKind::Binary(_, l, r) => mentions_now(l) || mentions_now(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn run(src: &str, steps: u64) -> Result<SimResult, SimError> {
        let m = parse(src, "t.tml2").unwrap();
        simulate(&m, "c", steps)
    }

    fn eval_str(expr: &str) -> Result<Value, ErrorKind> {
        let src = format!(
            "thing T {{ property r : Bool = true statechart init S {{ state S {{ entry {{ print({expr}); }} }} }} }} configuration c {{ instance t : T }}"
        );
        match run(&src, 1) {
            Ok(r) => match &r.trace[0].detail {
                Detail::Print { value } => Ok(value.clone()),
                d => panic!("{d:?}"),
            },
            Err(SimError::Runtime(e)) => Err(e.kind),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn expression_semantics() {
        assert_eq!(eval_str("7 / 2"), Ok(Value::Int(3)));
        assert_eq!(eval_str("7.0 / 2"), Ok(Value::Real(3.5)));
        assert_eq!(eval_str("(1 == 1) or (1 / 0 == 1)"), Ok(Value::Bool(true)));
        assert_eq!(
            eval_str("(1 == 2) and (1 / 0 == 1)"),
            Ok(Value::Bool(false))
        );
        assert_eq!(eval_str("1 % 0"), Err(ErrorKind::DivisionByZero));
        assert_eq!(eval_str("2.0 / 0.0"), Err(ErrorKind::DivisionByZero));
        assert_eq!(eval_str("-(3 - 5) * 2"), Ok(Value::Int(4)));
        assert_eq!(eval_str("\"a\" == \"a\""), Ok(Value::Bool(true)));
        assert_eq!(eval_str("not r"), Ok(Value::Bool(false)));
    }

    #[test]
    fn defaults_and_widening() {
        let r = run(
            "thing T { property a : Int property b : Real = 2 property c : Bool property d : String property e : Int = a + 4 } configuration c { instance t : T }",
            5,
        )
        .unwrap();
        assert_eq!(
            r.final_states[0].properties,
            vec![
                ("a".into(), Value::Int(0)),
                ("b".into(), Value::Real(2.0)),
                ("c".into(), Value::Bool(false)),
                ("d".into(), Value::Str(String::new())),
                ("e".into(), Value::Int(4)),
            ]
        );
        assert_eq!(r.final_states[0].state, None);
        // nothing to do: quiescent before step 1
        assert_eq!(r.steps, 0);
    }

    #[test]
    fn locals_shadow_properties() {
        let r = run(
            "thing T { property x : Int = 1 statechart init S { state S { entry { var x : Int = 5; x = x + 1; print(x); } exit { } } } } configuration c { instance t : T }",
            1,
        )
        .unwrap();
        assert_eq!(
            r.trace[0].detail,
            Detail::Print {
                value: Value::Int(6)
            }
        );
        assert_eq!(r.final_states[0].properties[0].1, Value::Int(1));
    }

    #[test]
    fn while_limit() {
        let e = eval_str_stmt("var i : Int = 0; while (true) { i = i + 1; }");
        assert_eq!(e, Some(ErrorKind::WhileLimit));
        assert_eq!(
            eval_str_stmt("var i : Int = 0; while (i < 100000) { i = i + 1; }"),
            None
        );
    }

    fn eval_str_stmt(body: &str) -> Option<ErrorKind> {
        let src = format!(
            "thing T {{ statechart init S {{ state S {{ entry {{ {body} }} }} }} }} configuration c {{ instance t : T }}"
        );
        match run(&src, 1) {
            Ok(_) => None,
            Err(SimError::Runtime(e)) => Some(e.kind),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn unknown_configuration() {
        let m = parse("thing T {}", "t").unwrap();
        assert!(matches!(
            simulate(&m, "nope", 1),
            Err(SimError::UnknownConfiguration(_))
        ));
    }

    #[test]
    fn invalid_model_is_rejected() {
        let m = parse(
            "thing T { property x : Int = true } configuration c { instance t : T }",
            "t",
        )
        .unwrap();
        assert!(matches!(simulate(&m, "c", 1), Err(SimError::Invalid(_))));
    }

    #[test]
    fn error_codes() {
        assert_eq!(
            ErrorKind::Ml {
                da: "d".into(),
                source: MlError::Schema("x".into())
            }
            .code(),
            "E-IO"
        );
        assert_eq!(
            ErrorKind::Ml {
                da: "d".into(),
                source: MlError::Singular("x".into())
            }
            .code(),
            "E-SINGULAR"
        );
    }
}
