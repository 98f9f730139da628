//! Decision procedures for network controllability.
//!
//! Two sufficient criteria are implemented:
//!
//! * [`run_algorithm`] grows a family `W` of jointly controllable vertex sets
//!   from the bath vertices, one controller at a time. Each controller splits
//!   its neighbors into classes of equivalent curvature; every class and every
//!   intersection or difference of a class with a set already in `W` is again
//!   jointly controllable. Singletons are new controllers.
//! * [`run_ck`] grows a controller set `C` by absorbing every outer neighbor
//!   that is alone in its C-equivalence class.
//!
//! Both only ever answer `Controllable` or `Inconclusive`: the criteria are
//! sufficient, not necessary.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classes::{c_equivalence_classes, sort_canonical, target_classes};
use crate::network::{Mode, Network, NetworkError};
use crate::vset::VertexSet;

pub const DEFAULT_MAX_SETS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("mode error: network mode is {0}; this analysis needs an anharmonic network")]
    Mode(Mode),
    #[error("the bath set is empty")]
    EmptyBath,
    #[error("{0:?} is not a controller in the queue")]
    UnknownController(String),
    #[error("controller {0:?} was already used")]
    ControllerUsed(String),
    #[error("the family of jointly controllable sets exceeded {0} sets")]
    CapExceeded(usize),
    #[error("every substream drew a zero leading coefficient")]
    DegenerateDraw,
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    InitBath,
    TargetClass,
    Intersect,
    DiffLeft,
    DiffRight,
    NewController,
    CkSingleton,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::InitBath => "InitBath",
            Rule::TargetClass => "TargetClass",
            Rule::Intersect => "Intersect",
            Rule::DiffLeft => "DiffLeft",
            Rule::DiffRight => "DiffRight",
            Rule::NewController => "NewController",
            Rule::CkSingleton => "CkSingleton",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: Rule,
    pub controller: Option<usize>,
    pub operands: Vec<VertexSet>,
    pub produced: VertexSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Controllable,
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Controllable => "controllable",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Algorithm,
    CkRecursion,
    Singleton,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Algorithm => "algorithm",
            Method::CkRecursion => "ck",
            Method::Singleton => "singleton",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub controlled: VertexSet,
    pub method: Method,
}

/// Result of one analysis run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub verdict: Verdict,
    /// Groups of uncontrolled vertices the criteria could not separate.
    pub blocking: Vec<VertexSet>,
    pub trace: Vec<TraceStep>,
}

/// Order in which newly found controllers join the queue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ControllerOrder {
    #[default]
    Ascending,
    Descending,
    Shuffled(u64),
}

impl ControllerOrder {
    fn arrange(self, net: &Network, items: &mut [usize], step: u64) {
        items.sort_by(|&a, &b| net.cmp_ids(a, b));
        match self {
            ControllerOrder::Ascending => {}
            ControllerOrder::Descending => items.reverse(),
            ControllerOrder::Shuffled(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(step);
                items.shuffle(&mut rng);
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub max_sets: usize,
    pub order: ControllerOrder,
    /// Apply `order` to the initial bath queue as well; otherwise the bath
    /// vertices enter in input order.
    pub reorder_bath: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_sets: DEFAULT_MAX_SETS,
            order: ControllerOrder::Ascending,
            reorder_bath: false,
        }
    }
}

/// The family `W`, the controller queue `K` and the trace.
#[derive(Debug, Clone)]
pub struct ControlState {
    universe: usize,
    family: Vec<VertexSet>,
    seen: HashSet<VertexSet>,
    queue: Vec<(usize, bool)>,
    queued: VertexSet,
    trace: Vec<TraceStep>,
    config: EngineConfig,
    steps: u64,
}

impl ControlState {
    /// `W = {{v} : v in V_*}` and `K = V_*`.
    pub fn new(net: &Network, config: EngineConfig) -> Self {
        let n = net.len();
        let mut state = ControlState {
            universe: n,
            family: Vec::new(),
            seen: HashSet::new(),
            queue: Vec::new(),
            queued: VertexSet::empty(n),
            trace: Vec::new(),
            config,
            steps: 0,
        };
        let mut bath = net.bath();
        if state.config.reorder_bath {
            state.config.order.arrange(net, &mut bath, u64::MAX);
        }
        for v in bath {
            let single = VertexSet::singleton(n, v);
            state.seen.insert(single.clone());
            state.family.push(single.clone());
            state.queue.push((v, false));
            state.queued.insert(v);
            state.trace.push(TraceStep {
                rule: Rule::InitBath,
                controller: None,
                operands: Vec::new(),
                produced: single,
            });
        }
        state
    }

    pub fn family(&self) -> &[VertexSet] {
        &self.family
    }

    pub fn queue(&self) -> &[(usize, bool)] {
        &self.queue
    }

    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    pub fn controlled(&self) -> &VertexSet {
        &self.queued
    }

    pub fn next_unused(&self) -> Option<usize> {
        self.queue.iter().find(|(_, used)| !used).map(|&(c, _)| c)
    }

    fn add(
        &mut self,
        set: VertexSet,
        rule: Rule,
        controller: usize,
        operands: Vec<VertexSet>,
        fresh: &mut Vec<usize>,
    ) -> Result<(), EngineError> {
        if set.is_empty() || self.seen.contains(&set) {
            return Ok(());
        }
        if self.family.len() >= self.config.max_sets {
            return Err(EngineError::CapExceeded(self.config.max_sets));
        }
        if let Some(v) = set.as_singleton() {
            if !self.queued.contains(v) && !fresh.contains(&v) {
                fresh.push(v);
            }
        }
        self.seen.insert(set.clone());
        self.family.push(set.clone());
        self.trace.push(TraceStep {
            rule,
            controller: Some(controller),
            operands,
            produced: set,
        });
        Ok(())
    }
}

fn require_anharmonic(net: &Network) -> Result<(), EngineError> {
    match net.mode() {
        Mode::Anharmonic => Ok(()),
        other => Err(EngineError::Mode(other)),
    }
}

/// Uses controller `c` once: adds its target classes to `W`, closes `W`
/// under intersection and both differences with each class, and queues any
/// new singletons.
pub fn refine_step(state: &mut ControlState, net: &Network, c: usize) -> Result<(), EngineError> {
    let slot = state
        .queue
        .iter()
        .position(|&(k, _)| k == c)
        .ok_or_else(|| EngineError::UnknownController(net.id(c).to_string()))?;
    if state.queue[slot].1 {
        return Err(EngineError::ControllerUsed(net.id(c).to_string()));
    }
    let partition = target_classes(net, c)?;
    let mut fresh = Vec::new();
    for class in partition.classes {
        let t = class.members;
        state.add(t.clone(), Rule::TargetClass, c, Vec::new(), &mut fresh)?;
        // sets appended during this scan are visited too
        let mut i = 0;
        while i < state.family.len() {
            let a = state.family[i].clone();
            i += 1;
            if a == t {
                continue;
            }
            let ops = vec![a.clone(), t.clone()];
            state.add(a.intersection(&t), Rule::Intersect, c, ops.clone(), &mut fresh)?;
            state.add(a.difference(&t), Rule::DiffLeft, c, ops.clone(), &mut fresh)?;
            state.add(t.difference(&a), Rule::DiffRight, c, ops, &mut fresh)?;
        }
    }
    state.steps += 1;
    state.config.order.arrange(net, &mut fresh, state.steps);
    for v in fresh {
        state.queue.push((v, false));
        state.queued.insert(v);
        state.trace.push(TraceStep {
            rule: Rule::NewController,
            controller: Some(c),
            operands: Vec::new(),
            produced: VertexSet::singleton(state.universe, v),
        });
    }
    state.queue[slot].1 = true;
    Ok(())
}

pub fn run_algorithm(net: &Network) -> Result<Analysis, EngineError> {
    run_algorithm_with(net, EngineConfig::default())
}

pub fn run_algorithm_with(net: &Network, config: EngineConfig) -> Result<Analysis, EngineError> {
    Ok(run_to_completion(net, config)?.0)
}

/// Runs the refinement algorithm and also returns the final state.
pub fn run_to_completion(
    net: &Network,
    config: EngineConfig,
) -> Result<(Analysis, ControlState), EngineError> {
    require_anharmonic(net)?;
    if net.bath().is_empty() {
        return Err(EngineError::EmptyBath);
    }
    let mut state = ControlState::new(net, config);
    while let Some(c) = state.next_unused() {
        refine_step(&mut state, net, c)?;
    }
    let controlled = state.queued.clone();
    let blocking = algorithm_blocking(net, &state.family, &controlled);
    let analysis = Analysis {
        verdict: verdict(net, controlled, Method::Algorithm),
        blocking,
        trace: state.trace.clone(),
    };
    Ok((analysis, state))
}

fn verdict(net: &Network, controlled: VertexSet, method: Method) -> Verdict {
    let status = if controlled.len() == net.len() {
        Status::Controllable
    } else {
        Status::Inconclusive
    };
    Verdict {
        status,
        controlled,
        method,
    }
}

/// Removing controlled vertices from a jointly controllable set keeps it
/// jointly controllable, so the smallest such remainders with two or more
/// members are exactly the groups left unresolved.
fn algorithm_blocking(net: &Network, family: &[VertexSet], controlled: &VertexSet) -> Vec<VertexSet> {
    let mut rests: Vec<VertexSet> = family
        .iter()
        .map(|a| a.difference(controlled))
        .filter(|r| r.len() >= 2)
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    rests.sort_by_key(VertexSet::len);
    let mut minimal: Vec<VertexSet> = Vec::new();
    for r in rests {
        if !minimal.iter().any(|m| m.is_subset(&r)) {
            minimal.push(r);
        }
    }
    sort_canonical(net, &mut minimal);
    minimal
}

/// `C_0 = V_*`, `C_{k+1} = C_k` plus every outer neighbor alone in its
/// C_k-equivalence class, until a fixpoint.
pub fn run_ck(net: &Network) -> Result<Analysis, EngineError> {
    require_anharmonic(net)?;
    let bath = net.bath();
    if bath.is_empty() {
        return Err(EngineError::EmptyBath);
    }
    let n = net.len();
    let mut trace = Vec::new();
    let mut current = VertexSet::empty(n);
    for &v in &bath {
        current.insert(v);
        trace.push(TraceStep {
            rule: Rule::InitBath,
            controller: None,
            operands: Vec::new(),
            produced: VertexSet::singleton(n, v),
        });
    }
    let blocking = loop {
        let classes = c_equivalence_classes(net, &current)?;
        let (alone, grouped): (Vec<VertexSet>, Vec<VertexSet>) =
            classes.into_iter().partition(|cl| cl.len() == 1);
        if alone.is_empty() {
            break grouped;
        }
        let before = current.clone();
        for single in alone {
            current = current.union(&single);
            trace.push(TraceStep {
                rule: Rule::CkSingleton,
                controller: None,
                operands: vec![before.clone()],
                produced: single,
            });
        }
    };
    Ok(Analysis {
        verdict: verdict(net, current, Method::CkRecursion),
        blocking,
        trace,
    })
}

/// True when the network is connected, has a bath, and around every vertex
/// the neighbors have pairwise distinct class keys.
pub fn singleton_criterion(net: &Network) -> Result<bool, EngineError> {
    require_anharmonic(net)?;
    if net.bath().is_empty() || !net.is_connected() {
        return Ok(false);
    }
    for v in 0..net.len() {
        let part = target_classes(net, v)?;
        if part.classes.iter().any(|cl| cl.members.len() > 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Analysis by the singleton criterion. When it holds the C_k recursion
/// reaches every vertex and its trace is reported; otherwise only the bath
/// is known controllable and the equivalent neighbor groups are reported.
pub fn run_singleton(net: &Network) -> Result<Analysis, EngineError> {
    if singleton_criterion(net)? {
        let mut analysis = run_ck(net)?;
        analysis.verdict.method = Method::Singleton;
        return Ok(analysis);
    }
    let n = net.len();
    let bath = net.bath();
    let controlled = VertexSet::from_indices(n, bath.iter().copied());
    let trace = bath
        .iter()
        .map(|&v| TraceStep {
            rule: Rule::InitBath,
            controller: None,
            operands: Vec::new(),
            produced: VertexSet::singleton(n, v),
        })
        .collect();
    let mut blocking: Vec<VertexSet> = Vec::new();
    for v in 0..n {
        for cl in target_classes(net, v)?.classes {
            if cl.members.len() > 1 && !blocking.contains(&cl.members) {
                blocking.push(cl.members);
            }
        }
    }
    sort_canonical(net, &mut blocking);
    Ok(Analysis {
        verdict: verdict(net, controlled, Method::Singleton),
        blocking,
        trace,
    })
}

pub fn analyze(net: &Network, method: Method) -> Result<Analysis, EngineError> {
    match method {
        Method::Algorithm => run_algorithm(net),
        Method::CkRecursion => run_ck(net),
        Method::Singleton => run_singleton(net),
    }
}

/// Replays an algorithm trace against the network, checking that every
/// produced set follows from its operands by the named rule. Returns the
/// rebuilt family.
pub fn replay_trace(net: &Network, trace: &[TraceStep]) -> Result<Vec<VertexSet>, String> {
    let mut family: Vec<VertexSet> = Vec::new();
    let mut seen: HashSet<VertexSet> = HashSet::new();
    let mut controllers = VertexSet::empty(net.len());
    for (i, step) in trace.iter().enumerate() {
        let fail = |why: &str| Err(format!("step {i} ({}): {why}", step.rule.name()));
        for op in &step.operands {
            if !seen.contains(op) {
                return fail("operand not in the family");
            }
        }
        let ok = match step.rule {
            Rule::InitBath => step
                .produced
                .as_singleton()
                .is_some_and(|v| net.vertex(v).bath),
            Rule::TargetClass => match step.controller {
                Some(c) if controllers.contains(c) || net.vertex(c).bath => target_classes(net, c)
                    .map_err(|e| e.to_string())?
                    .classes
                    .iter()
                    .any(|cl| cl.members == step.produced),
                _ => false,
            },
            Rule::Intersect => binary(step, |a, t| a.intersection(t)),
            Rule::DiffLeft => binary(step, |a, t| a.difference(t)),
            Rule::DiffRight => binary(step, |a, t| t.difference(a)),
            Rule::NewController => seen.contains(&step.produced) && step.produced.len() == 1,
            Rule::CkSingleton => return fail("not an algorithm rule"),
        };
        if !ok {
            return fail("produced set does not follow from its operands");
        }
        match step.rule {
            Rule::NewController => {
                controllers.insert(step.produced.as_singleton().expect("checked above"));
            }
            _ => {
                if seen.insert(step.produced.clone()) {
                    family.push(step.produced.clone());
                }
            }
        }
    }
    Ok(family)
}

fn binary(step: &TraceStep, f: impl Fn(&VertexSet, &VertexSet) -> VertexSet) -> bool {
    match step.operands.as_slice() {
        [a, t] => f(a, t) == step.produced,
        _ => false,
    }
}

/// Ids of controlled vertices, ascending.
pub fn controlled_ids(net: &Network, verdict: &Verdict) -> Vec<String> {
    let mut ids: Vec<String> = verdict
        .controlled
        .iter()
        .map(|i| net.id(i).to_string())
        .collect();
    ids.sort();
    ids
}
