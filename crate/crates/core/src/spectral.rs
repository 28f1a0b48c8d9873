//! Spectral decomposition of the chain recurrent set into basic sets, with
//! transitivity and periodic-density certificates.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chains::{build_chain_graph, build_chain_graph_indexed, chain_components, torus_grid, ChainGraph, TorusBuckets};
use crate::entourage::{Entourage, Point};
use crate::error::{ChainError, SpectralError, TraceError};
use crate::linalg::Vec2;
use crate::scc::tarjan;
use crate::shadowing::{
    series_constant, trace_linear_hyperbolic, trace_sft, Extension, LinearLift, PseudoOrbit, TracingResult,
};
use crate::systems::{DynamicalSystem, FiniteSystem, Shift, SymbolPoint, TorusAutomorphism, TransitionMatrix};

/// Three-valued outcome; grid artifacts are never reported as failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { witness: String },
    ResolutionLimited { reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail { .. } => "fail",
            Verdict::ResolutionLimited { .. } => "resolution-limited",
        }
    }

    /// Process exit status: 0 pass, 1 fail, 2 resolution-limited.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail { .. } => 1,
            Verdict::ResolutionLimited { .. } => 2,
        }
    }

    pub fn detail(&self) -> &str {
        match self {
            Verdict::Pass => "",
            Verdict::Fail { witness } => witness,
            Verdict::ResolutionLimited { reason } => reason,
        }
    }

    /// The worse of two verdicts: fail over resolution-limited over pass.
    pub fn and(self, other: Verdict) -> Verdict {
        match (&self, &other) {
            (Verdict::Fail { .. }, _) => self,
            (_, Verdict::Fail { .. }) => other,
            (Verdict::ResolutionLimited { .. }, _) => self,
            (_, Verdict::ResolutionLimited { .. }) => other,
            _ => Verdict::Pass,
        }
    }

    pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        verdicts.into_iter().fold(Verdict::Pass, Verdict::and)
    }

    pub fn check(ok: bool, witness: impl FnOnce() -> String) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail { witness: witness() }
        }
    }
}

/// A system with a chain-graph discretization and a periodic tracing oracle.
pub trait SpectralFamily: DynamicalSystem {
    /// Sample nodes at the configured resolution.
    fn spectral_nodes(&self, cfg: &SpectralConfig) -> Result<Vec<Self::Point>, SpectralError>;

    /// Chain graphs of the ladder, coarse to fine.
    fn rung_graphs(&self, nodes: &Arc<Vec<Self::Point>>, cfg: &SpectralConfig) -> Vec<RungGraph<Self::Point>>;

    /// Periodic tracing point of a closed cycle of nodes.
    fn trace_cycle(&self, cycle: Vec<Self::Point>) -> Result<TracingResult<Self::Point>, TraceError>;

    /// Largest edge defect a cycle may use for its tracing point to land
    /// strictly inside a ball of `radius`.
    fn cycle_threshold(&self, radius: f64) -> f64;

    /// Default certificate radius for walks in a graph of the given rung.
    fn certificate_radius(&self, cfg: &SpectralConfig, rung: &RungGraph<Self::Point>) -> f64;

    /// Whether the finite count of basic sets is a statement about the
    /// system itself rather than about the sample grid.
    fn exact_count(&self) -> Option<usize> {
        None
    }
}

/// One rung of the entourage ladder.
pub struct RungGraph<P> {
    pub graph: ChainGraph<P>,
    /// Ball radius of the entourage, when it is a ball.
    pub radius: Option<f64>,
    /// The rung cannot resolve chains finer than the grid.
    pub below_floor: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralConfig {
    /// Grid cells per unit side for torus systems.
    pub resolution: usize,
    /// Word length of the cylinder nodes for shifts.
    pub word_length: usize,
    /// Ladder radii in grid cells, coarse to fine.
    pub ladder: Vec<f64>,
    /// Sampled `(x, y)` pairs per basic set for transitivity.
    pub pairs: usize,
    pub seed: u64,
    /// Radius of the entourage `E` for transitivity; defaults to the
    /// tracing bound of the walk graph.
    pub transit_radius: Option<f64>,
    /// Radius of the entourage `E` for periodic density.
    pub density_radius: Option<f64>,
    /// Cap on the nodes receiving a density entry; a seeded sample is used
    /// above it.
    pub density_nodes: Option<usize>,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            resolution: 32,
            word_length: 5,
            ladder: vec![4.0, 2.0, 1.0],
            pairs: 50,
            seed: 0,
            transit_radius: None,
            density_radius: None,
            density_nodes: Some(4096),
        }
    }
}

impl SpectralConfig {
    /// Ladder `r0, r0/2, r0/4` in grid cells.
    pub fn with_ladder_start(mut self, r0: f64) -> Self {
        self.ladder = vec![r0, r0 / 2.0, r0 / 4.0];
        self
    }

    fn validate(&self) -> Result<(), SpectralError> {
        if self.ladder.is_empty() || self.ladder.iter().any(|r| !(*r > 0.0)) {
            return Err(SpectralError::Config("ladder radii must be positive".into()));
        }
        if self.resolution < 2 {
            return Err(SpectralError::Config("resolution must be at least 2".into()));
        }
        if self.word_length == 0 {
            return Err(SpectralError::Config("word length must be positive".into()));
        }
        Ok(())
    }
}

impl SpectralFamily for TorusAutomorphism {
    fn spectral_nodes(&self, cfg: &SpectralConfig) -> Result<Vec<Vec2>, SpectralError> {
        cfg.validate()?;
        Ok(torus_grid(cfg.resolution))
    }

    fn rung_graphs(&self, nodes: &Arc<Vec<Vec2>>, cfg: &SpectralConfig) -> Vec<RungGraph<Vec2>> {
        let m = cfg.resolution;
        let index = TorusBuckets::new(nodes, m);
        cfg.ladder
            .iter()
            .map(|&cells| {
                let r = cells / m as f64;
                let d = Entourage::ball("torus", self.metric().clone(), r);
                RungGraph {
                    graph: build_chain_graph_indexed(self, nodes.clone(), &d, &index),
                    radius: Some(r),
                    below_floor: cells < 2.0,
                }
            })
            .collect()
    }

    fn trace_cycle(&self, cycle: Vec<Vec2>) -> Result<TracingResult<Vec2>, TraceError> {
        let p = cycle.len();
        trace_linear_hyperbolic(self, &PseudoOrbit::new(self, cycle, Extension::Periodic(p)))
    }

    fn cycle_threshold(&self, radius: f64) -> f64 {
        radius / series_constant(&self.lift(), self.lift_splitting())
    }

    fn certificate_radius(&self, _cfg: &SpectralConfig, rung: &RungGraph<Vec2>) -> f64 {
        series_constant(&self.lift(), self.lift_splitting()) * rung.radius.unwrap_or(f64::INFINITY)
    }
}

/// Cylinder graph for the ball of radius `2^{-k}`: `x → y` when some point
/// of the cylinder of `σ(x)` agrees with the cylinder of `y` on `|i| ≤ k`,
/// i.e. the two words agree wherever both are defined in that window.
fn cylinder_graph(nodes: &Arc<Vec<SymbolPoint>>, words: &[Vec<u8>], center: usize, k: usize) -> ChainGraph<SymbolPoint> {
    let len = words.first().map_or(0, |w| w.len());
    let c = center as i64;
    let lo = -(k as i64).min(c);
    let hi = (k as i64).min(len as i64 - 2 - c);
    let label = format!("cylinder({k})");
    if hi < lo {
        let all: Vec<u32> = (0..words.len() as u32).collect();
        return ChainGraph::from_adjacency(nodes.clone(), &label, vec![all; words.len()]);
    }
    let key_y = |v: &[u8]| v[(c + lo) as usize..=(c + hi) as usize].to_vec();
    let key_x = |w: &[u8]| w[(c + 1 + lo) as usize..=(c + 1 + hi) as usize].to_vec();
    let mut by_key: HashMap<Vec<u8>, Vec<u32>> = HashMap::new();
    for (j, v) in words.iter().enumerate() {
        by_key.entry(key_y(v)).or_default().push(j as u32);
    }
    let adj = words
        .iter()
        .map(|w| by_key.get(&key_x(w)).cloned().unwrap_or_default())
        .collect();
    ChainGraph::from_adjacency(nodes.clone(), &label, adj)
}

impl SpectralFamily for Shift {
    fn spectral_nodes(&self, cfg: &SpectralConfig) -> Result<Vec<SymbolPoint>, SpectralError> {
        cfg.validate()?;
        let c = cfg.word_length / 2;
        Ok(self
            .admissible_words(cfg.word_length)
            .iter()
            .map(|w| self.extend_word(w, c))
            .collect::<Result<_, _>>()?)
    }

    /// Cylinder graphs for the balls `2^{-k}`, `k = 0, …, L/2`, coarse to
    /// fine; each graph is contained in the previous one.
    fn rung_graphs(&self, nodes: &Arc<Vec<SymbolPoint>>, cfg: &SpectralConfig) -> Vec<RungGraph<SymbolPoint>> {
        let l = cfg.word_length;
        let c = l / 2;
        let words: Vec<Vec<u8>> = nodes.iter().map(|p| p.slice(-(c as i64), (l - 1 - c) as i64)).collect();
        (0..=c)
            .map(|k| RungGraph {
                graph: cylinder_graph(nodes, &words, c, k),
                radius: Some(0.5f64.powi(k as i32)),
                below_floor: false,
            })
            .collect()
    }

    fn trace_cycle(&self, cycle: Vec<SymbolPoint>) -> Result<TracingResult<SymbolPoint>, TraceError> {
        let p = cycle.len();
        trace_sft(self, &PseudoOrbit::new(self, cycle, Extension::Periodic(p)))
    }

    fn cycle_threshold(&self, _radius: f64) -> f64 {
        f64::INFINITY
    }

    /// A periodic point agreeing with a node on its whole word lies within
    /// `2^{-(L/2 + 1)}` of it.
    fn certificate_radius(&self, cfg: &SpectralConfig, _rung: &RungGraph<SymbolPoint>) -> f64 {
        0.5f64.powi((cfg.word_length / 2) as i32)
    }

    fn exact_count(&self) -> Option<usize> {
        Some(symbol_basic_sets(self.transitions()).len())
    }
}

impl SpectralFamily for FiniteSystem {
    fn spectral_nodes(&self, _cfg: &SpectralConfig) -> Result<Vec<usize>, SpectralError> {
        Ok(self.points())
    }

    /// A single rung with `D` the diagonal: chains are orbits.
    fn rung_graphs(&self, nodes: &Arc<Vec<usize>>, _cfg: &SpectralConfig) -> Vec<RungGraph<usize>> {
        vec![RungGraph {
            graph: build_chain_graph(self, nodes.clone(), &Entourage::diagonal("finite")),
            radius: Some(0.0),
            below_floor: false,
        }]
    }

    fn trace_cycle(&self, cycle: Vec<usize>) -> Result<TracingResult<usize>, TraceError> {
        let p = cycle.len();
        let po = PseudoOrbit::new(self, cycle, Extension::Periodic(p));
        if po.defect_bound > 0.0 {
            return Err(TraceError::DefectTooLarge(po.defect_bound, 0.0));
        }
        let mut r = TracingResult::from_anchor(self, &po, 0, po.window[0]);
        r.period = (self.iterate(&po.window[0], p as i64) == po.window[0]).then_some(p);
        Ok(r)
    }

    fn cycle_threshold(&self, _radius: f64) -> f64 {
        f64::MIN_POSITIVE
    }

    fn certificate_radius(&self, _cfg: &SpectralConfig, _rung: &RungGraph<usize>) -> f64 {
        0.5
    }

    fn exact_count(&self) -> Option<usize> {
        Some(self.cycle_decomposition().len())
    }
}

/// Symbol sets of the cycle-containing strongly connected components of
/// the symbol graph, sorted by smallest symbol.
pub fn symbol_basic_sets(tm: &TransitionMatrix) -> Vec<Vec<u8>> {
    let k = tm.size();
    let adj: Vec<Vec<u32>> = (0..k)
        .map(|a| (0..k as u32).filter(|&b| tm.allowed(a as u8, b as u8)).collect())
        .collect();
    let scc = tarjan(&adj);
    let mut out: Vec<Vec<u8>> = scc
        .members()
        .into_iter()
        .filter(|m| m.len() >= 2 || tm.allowed(m[0] as u8, m[0] as u8))
        .map(|m| m.into_iter().map(|s| s as u8).collect())
        .collect();
    out.sort();
    out
}

/// Spanning out- and in-trees of a strongly connected node set, rooted at
/// `root`: every node is reachable from the root and reaches it.
#[derive(Debug, Clone, PartialEq)]
pub struct SccWitness {
    pub root: usize,
    /// Edges `parent → child` of a breadth-first out-tree.
    pub out_tree: Vec<(usize, usize)>,
    /// Edges `child → parent` of a breadth-first in-tree.
    pub in_tree: Vec<(usize, usize)>,
}

impl SccWitness {
    fn build<P: Point>(g: &ChainGraph<P>, component: &[usize]) -> Option<Self> {
        let root = *component.first()?;
        let member: HashMap<usize, ()> = component.iter().map(|&i| (i, ())).collect();
        let mut rev: HashMap<usize, Vec<usize>> = HashMap::new();
        for &v in component {
            for &w in g.successors(v) {
                if member.contains_key(&(w as usize)) {
                    rev.entry(w as usize).or_default().push(v);
                }
            }
        }
        let tree = |next: &dyn Fn(usize) -> Vec<usize>| {
            let mut seen: HashMap<usize, ()> = HashMap::from([(root, ())]);
            let mut edges = Vec::new();
            let mut todo = VecDeque::from([root]);
            while let Some(v) = todo.pop_front() {
                for w in next(v) {
                    if member.contains_key(&w) && seen.insert(w, ()).is_none() {
                        edges.push((v, w));
                        todo.push_back(w);
                    }
                }
            }
            (seen.len() == component.len()).then_some(edges)
        };
        let out_tree = tree(&|v| g.successors(v).iter().map(|&w| w as usize).collect())?;
        let in_tree = tree(&|v| rev.get(&v).cloned().unwrap_or_default())?
            .into_iter()
            .map(|(parent, child)| (child, parent))
            .collect();
        Some(SccWitness { root, out_tree, in_tree })
    }

    /// Re-checks both trees edge by edge against the graph.
    pub fn verify<P: Point>(&self, g: &ChainGraph<P>, component: &[usize]) -> bool {
        let spans = |edges: &[(usize, usize)], child_of: fn(&(usize, usize)) -> (usize, usize)| {
            let mut kids: HashMap<usize, Vec<usize>> = HashMap::new();
            for e in edges {
                let (parent, child) = child_of(e);
                kids.entry(parent).or_default().push(child);
            }
            let mut seen = vec![self.root];
            let mut todo = vec![self.root];
            while let Some(v) = todo.pop() {
                for &w in kids.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                    if !seen.contains(&w) {
                        seen.push(w);
                        todo.push(w);
                    }
                }
            }
            seen.sort_unstable();
            let mut want = component.to_vec();
            want.sort_unstable();
            seen == want
        };
        self.out_tree.iter().all(|&(a, b)| g.has_edge(a, b))
            && self.in_tree.iter().all(|&(a, b)| g.has_edge(a, b))
            && spans(&self.out_tree, |&(a, b)| (a, b))
            && spans(&self.in_tree, |&(a, b)| (b, a))
            && (component.len() > 1 || g.has_edge(self.root, self.root))
    }
}

/// A periodic pseudo-orbit through `x` and `y` and the periodic point that
/// traces it.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitPair<P> {
    pub x: usize,
    pub y: usize,
    /// Closed walk of node indices starting at `x`; the seam closes it.
    pub cycle: Vec<usize>,
    /// Index of `y` on the cycle: `fⁿ(p)` should lie in `E[y]`.
    pub hit: usize,
    pub traced: Option<P>,
    pub period: Option<usize>,
    pub gap_x: f64,
    pub gap_y: f64,
    pub verdict: Verdict,
}

/// Periodic point found near one node.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEntry<P> {
    pub node: usize,
    pub cycle: Vec<usize>,
    pub traced: Option<P>,
    pub period: Option<usize>,
    pub gap: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Evidence<P> {
    Transitivity {
        scc: SccWitness,
        pairs: Vec<TransitPair<P>>,
    },
    PeriodicDensity {
        entries: Vec<DensityEntry<P>>,
        /// Nodes of the set that received an entry, out of this many.
        total_nodes: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    Transitivity,
    PeriodicDensity,
}

impl CertificateKind {
    pub fn label(&self) -> &'static str {
        match self {
            CertificateKind::Transitivity => "transitivity",
            CertificateKind::PeriodicDensity => "periodic-density",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<P> {
    pub kind: CertificateKind,
    /// Radius of the ball entourage `E`.
    pub radius: f64,
    pub evidence: Evidence<P>,
    pub verdict: Verdict,
}

impl<P: Point> Certificate<P> {
    /// Largest reported gap.
    pub fn max_gap(&self) -> f64 {
        match &self.evidence {
            Evidence::Transitivity { pairs, .. } => pairs.iter().map(|p| p.gap_x.max(p.gap_y)).fold(0.0, f64::max),
            Evidence::PeriodicDensity { entries, .. } => entries.iter().map(|e| e.gap).fold(0.0, f64::max),
        }
    }

    /// Re-derives the verdict from the stored evidence alone: every walk is
    /// re-checked in the graph and every cycle is traced afresh.
    pub fn revalidate<S: SpectralFamily<Point = P>>(
        &self,
        sys: &S,
        graph: &ChainGraph<P>,
        component: &[usize],
    ) -> Verdict {
        let nodes = graph.nodes();
        match &self.evidence {
            Evidence::Transitivity { scc, pairs } => {
                let trees = Verdict::check(scc.verify(graph, component), || "scc witness does not re-check".into());
                let pairs = pairs.iter().map(|tp| {
                    let walk = Verdict::check(
                        closed_walk_in(graph, &tp.cycle) && tp.cycle[0] == tp.x && tp.cycle[tp.hit] == tp.y,
                        || format!("walk {}→{} is not a closed walk of the graph", tp.x, tp.y),
                    );
                    let (v, _, gx, gy) = judge_pair(sys, graph, &tp.cycle, tp.hit, self.radius);
                    let same = Verdict::check(
                        v == tp.verdict && gx == tp.gap_x && gy == tp.gap_y,
                        || format!("pair {}→{} does not reproduce", tp.x, tp.y),
                    );
                    walk.and(same).and(v)
                });
                trees.and(Verdict::all(pairs.collect::<Vec<_>>()))
            }
            Evidence::PeriodicDensity { entries, .. } => Verdict::all(entries.iter().map(|e| {
                if e.cycle.is_empty() {
                    return e.verdict.clone();
                }
                let walk = Verdict::check(closed_walk_in(graph, &e.cycle) && e.cycle[0] == e.node, || {
                    format!("cycle at node {} is not a closed walk", e.node)
                });
                let thr = sys.cycle_threshold(self.radius);
                let fine = Verdict::check(max_cycle_defect(sys, nodes, &e.cycle) < thr || thr.is_infinite(), || {
                    format!("cycle at node {} uses a defect above the threshold", e.node)
                });
                let (v, _, gap, _) = judge_pair(sys, graph, &e.cycle, 0, self.radius);
                let same = Verdict::check(v == e.verdict && gap == e.gap, || format!("node {} does not reproduce", e.node));
                walk.and(fine).and(same).and(v)
            })),
        }
    }
}

fn closed_walk_in<P: Point>(g: &ChainGraph<P>, cycle: &[usize]) -> bool {
    !cycle.is_empty() && (0..cycle.len()).all(|k| g.has_edge(cycle[k], cycle[(k + 1) % cycle.len()]))
}

fn max_cycle_defect<S: DynamicalSystem>(sys: &S, nodes: &[S::Point], cycle: &[usize]) -> f64 {
    (0..cycle.len())
        .map(|k| sys.distance(&sys.forward(&nodes[cycle[k]]), &nodes[cycle[(k + 1) % cycle.len()]]))
        .fold(0.0, f64::max)
}

/// Traces the cycle and judges `p ∈ E[x]`, `fⁿ(p) ∈ E[y]`.
fn judge_pair<S: SpectralFamily>(
    sys: &S,
    graph: &ChainGraph<S::Point>,
    cycle: &[usize],
    hit: usize,
    radius: f64,
) -> (Verdict, Option<(S::Point, Option<usize>)>, f64, f64) {
    let nodes = graph.nodes();
    let window: Vec<S::Point> = cycle.iter().map(|&i| nodes[i].clone()).collect();
    let (x, y) = (cycle[0], cycle[hit]);
    match sys.trace_cycle(window) {
        Err(e) => (
            Verdict::ResolutionLimited {
                reason: format!("cycle through {x} cannot be traced: {e}"),
            },
            None,
            f64::INFINITY,
            f64::INFINITY,
        ),
        Ok(r) => {
            let gx = sys.distance(&r.orbit[0], &nodes[x]);
            let gy = sys.distance(&r.orbit[hit], &nodes[y]);
            let v = if r.period.is_none() {
                Verdict::Fail {
                    witness: format!("traced point of the cycle through {x} is not periodic"),
                }
            } else if gx < radius && gy < radius {
                Verdict::Pass
            } else if sys.cycle_threshold(radius) <= max_cycle_defect(sys, nodes, cycle) {
                Verdict::ResolutionLimited {
                    reason: format!("E radius {radius} is finer than the cycle defects at node {x}"),
                }
            } else {
                Verdict::Fail {
                    witness: format!("periodic point misses E at node {x}: gaps {gx:e}, {gy:e}"),
                }
            };
            (v, Some((r.orbit[0].clone(), r.period)), gx, gy)
        }
    }
}

/// Shortest closed walk from `x` through `y` back to `x`, without the
/// repeated final `x`, and the index of `y` on it.
fn cycle_through<P: Point>(g: &ChainGraph<P>, x: usize, y: usize) -> Option<(Vec<usize>, usize)> {
    if x == y {
        let mut w = g.shortest_walk(x, x)?;
        w.pop();
        return Some((w, 0));
    }
    let mut there = g.shortest_walk(x, y)?;
    let back = g.shortest_walk(y, x)?;
    let hit = there.len() - 1;
    there.extend_from_slice(&back[1..back.len() - 1]);
    Some((there, hit))
}

/// Transitivity of `f` on a component: for sampled pairs `(x, y)` a
/// periodic pseudo-orbit through both is traced to a periodic point `p`
/// with `p ∈ E[x]` and `fⁿ(p) ∈ E[y]`, `E = ball(radius)`.
pub fn transitivity_certificate<S: SpectralFamily>(
    sys: &S,
    graph: &ChainGraph<S::Point>,
    component: &[usize],
    radius: f64,
    pairs: usize,
    seed: u64,
) -> Result<Certificate<S::Point>, ChainError> {
    let scc = SccWitness::build(graph, component).ok_or(ChainError::NotStronglyConnected)?;
    if component.len() == 1 && !graph.has_edge(component[0], component[0]) {
        return Err(ChainError::NoCycle(component[0]));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = if component.len() == 1 { 1 } else { pairs.max(1) };
    let picks: Vec<(usize, usize)> = (0..count)
        .map(|_| {
            (
                component[rng.random_range(0..component.len())],
                component[rng.random_range(0..component.len())],
            )
        })
        .collect();
    let pairs: Vec<TransitPair<S::Point>> = picks
        .into_par_iter()
        .map(|(x, y)| {
            let (cycle, hit) = cycle_through(graph, x, y).expect("strongly connected");
            let (verdict, traced, gap_x, gap_y) = judge_pair(sys, graph, &cycle, hit, radius);
            let (traced, period) = traced.map_or((None, None), |(p, per)| (Some(p), per));
            TransitPair {
                x,
                y,
                cycle,
                hit,
                traced,
                period,
                gap_x,
                gap_y,
                verdict,
            }
        })
        .collect();
    let verdict = Verdict::all(pairs.iter().map(|p| p.verdict.clone()));
    Ok(Certificate {
        kind: CertificateKind::Transitivity,
        radius,
        evidence: Evidence::Transitivity { scc, pairs },
        verdict,
    })
}

/// Shortest cycle through `x` using only edges accepted by `ok`.
fn fine_cycle<P: Point>(g: &ChainGraph<P>, x: usize, ok: &(dyn Fn(usize, usize) -> bool + Sync)) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; g.len()];
    let mut todo = VecDeque::from([x]);
    while let Some(v) = todo.pop_front() {
        for &w in g.successors(v) {
            let w = w as usize;
            if !ok(v, w) {
                continue;
            }
            if w == x {
                let mut path = vec![v];
                let mut cur = v;
                while cur != x {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            if parent[w] == usize::MAX && w != x {
                parent[w] = v;
                todo.push_back(w);
            }
        }
    }
    None
}

/// Density of periodic points among `nodes`: each gets a short cycle of
/// edges fine enough for tracing into `E[x]`, `E = ball(radius)`, and the
/// traced periodic point is checked to land there.
pub fn periodic_density_certificate<S: SpectralFamily>(
    sys: &S,
    graph: &ChainGraph<S::Point>,
    nodes: &[usize],
    radius: f64,
) -> Result<Certificate<S::Point>, ChainError> {
    let thr = sys.cycle_threshold(radius);
    let pts = graph.nodes();
    let defect = |a: usize, b: usize| sys.distance(&sys.forward(&pts[a]), &pts[b]);
    // filtering is skipped when every edge of the graph is fine enough
    let coarse = thr.is_finite()
        && (0..graph.len()).into_par_iter().any(|a| graph.successors(a).iter().any(|&b| defect(a, b as usize) >= thr));
    let ok = |a: usize, b: usize| !coarse || defect(a, b) < thr;
    let entries: Result<Vec<DensityEntry<S::Point>>, ChainError> = nodes
        .par_iter()
        .map(|&x| match fine_cycle(graph, x, &ok) {
            Some(cycle) => {
                let (verdict, traced, gap, _) = judge_pair(sys, graph, &cycle, 0, radius);
                let (traced, period) = traced.map_or((None, None), |(p, per)| (Some(p), per));
                Ok(DensityEntry {
                    node: x,
                    cycle,
                    traced,
                    period,
                    gap,
                    verdict,
                })
            }
            None if graph.shortest_walk(x, x).is_none() => Err(ChainError::NoCycle(x)),
            None => Ok(DensityEntry {
                node: x,
                cycle: Vec::new(),
                traced: None,
                period: None,
                gap: f64::INFINITY,
                verdict: Verdict::ResolutionLimited {
                    reason: format!("no cycle through node {x} with defects below {thr:e}"),
                },
            }),
        })
        .collect();
    let entries = entries?;
    let verdict = Verdict::all(entries.iter().map(|e| e.verdict.clone()));
    Ok(Certificate {
        kind: CertificateKind::PeriodicDensity,
        radius,
        evidence: Evidence::PeriodicDensity {
            total_nodes: nodes.len(),
            entries,
        },
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasicSet<P> {
    pub id: usize,
    pub nodes: Vec<usize>,
    pub transitivity: Certificate<P>,
    pub density: Certificate<P>,
    /// Every node has a successor inside the set.
    pub invariant: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RungSummary {
    pub label: String,
    pub radius: Option<f64>,
    pub below_floor: bool,
    /// Partition using rungs up to and including this one.
    pub partition: Vec<Vec<usize>>,
}

pub struct SpectralDecomposition<P> {
    pub system: String,
    pub config: SpectralConfig,
    pub node_count: usize,
    pub rungs: Vec<RungSummary>,
    /// First rung after which the partition stops changing, among rungs
    /// above the resolution floor.
    pub stabilization_index: usize,
    /// Rung whose graph carries the certificates: the finest rung above
    /// the resolution floor.
    pub certificate_rung: usize,
    pub recurrent_nodes: Vec<usize>,
    pub basic_sets: Vec<BasicSet<P>>,
    /// Finiteness of the decomposition; when the system determines its own
    /// count, the computed count must match it.
    pub finite_flag: bool,
    pub expected_count: Option<usize>,
    pub graph: ChainGraph<P>,
    pub verdict: Verdict,
}

impl<P> std::fmt::Debug for SpectralDecomposition<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SpectralDecomposition({}, {} basic sets, {})",
            self.system,
            self.basic_sets.len(),
            self.verdict.label()
        )
    }
}

impl<P: Point> SpectralDecomposition<P> {
    /// Disjointness and coverage of the recurrent nodes, exactly.
    pub fn partition_holds(&self) -> bool {
        let mut seen = vec![0u8; self.node_count];
        for b in &self.basic_sets {
            for &i in &b.nodes {
                seen[i] += 1;
            }
        }
        let covered: Vec<usize> = (0..self.node_count).filter(|&i| seen[i] > 0).collect();
        seen.iter().all(|&c| c <= 1) && covered == self.recurrent_nodes
    }

    /// Re-validates the partition, invariance and every certificate from
    /// the stored evidence.
    pub fn revalidate<S: SpectralFamily<Point = P>>(&self, sys: &S) -> Verdict {
        let part = Verdict::check(self.partition_holds(), || "basic sets do not partition the recurrent set".into());
        let sets = self.basic_sets.iter().map(|b| {
            let inv = Verdict::check(invariant(&self.graph, &b.nodes), || format!("basic set {} is not invariant", b.id));
            inv.and(b.transitivity.revalidate(sys, &self.graph, &b.nodes))
                .and(b.density.revalidate(sys, &self.graph, &b.nodes))
        });
        part.and(Verdict::all(sets.collect::<Vec<_>>()))
    }
}

fn invariant<P: Point>(g: &ChainGraph<P>, set: &[usize]) -> bool {
    let mut member = vec![false; g.len()];
    for &i in set {
        member[i] = true;
    }
    set.iter().all(|&i| g.successors(i).iter().any(|&j| member[j as usize]))
}

/// Chain recurrence over the ladder, partition into chain components and
/// per-component certificates.
pub fn spectral_decompose<S: SpectralFamily>(
    sys: &S,
    cfg: &SpectralConfig,
) -> Result<SpectralDecomposition<S::Point>, SpectralError> {
    let nodes = Arc::new(sys.spectral_nodes(cfg)?);
    let mut rungs = sys.rung_graphs(&nodes, cfg);
    let refs: Vec<&ChainGraph<S::Point>> = rungs.iter().map(|r| &r.graph).collect();
    let comps = chain_components(&refs)?;
    // rungs below the resolution floor are reported but never decide the partition
    let last = (0..rungs.len()).rev().find(|&k| !rungs[k].below_floor).unwrap_or(rungs.len() - 1);
    let stabilization_index = (0..=last)
        .find(|&k| comps.partitions[k..=last].iter().all(|p| *p == comps.partitions[last]))
        .unwrap_or(last);
    let stable = comps.partitions[last].clone();
    let certificate_rung = last;
    let rung_summaries: Vec<RungSummary> = rungs
        .iter()
        .zip(&comps.partitions)
        .map(|(r, p)| RungSummary {
            label: r.graph.entourage_label().to_string(),
            radius: r.radius,
            below_floor: r.below_floor,
            partition: p.clone(),
        })
        .collect();
    let rung_count = rungs.len();
    let cert = rungs.swap_remove(certificate_rung);
    drop(rungs);
    let radius_t = cfg.transit_radius.unwrap_or_else(|| sys.certificate_radius(cfg, &cert));
    let radius_d = cfg.density_radius.unwrap_or(radius_t);
    let graph = cert.graph;
    let recurrent_nodes: Vec<usize> = stable.iter().flatten().copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut basic_sets = Vec::with_capacity(stable.len());
    for (id, part) in stable.iter().enumerate() {
        let transitivity = transitivity_certificate(sys, &graph, part, radius_t, cfg.pairs, cfg.seed.wrapping_add(id as u64))?;
        let probe: Vec<usize> = match cfg.density_nodes {
            Some(cap) if part.len() > cap => {
                let mut idx = rand::seq::index::sample(&mut rng, part.len(), cap).into_vec();
                idx.sort_unstable();
                idx.into_iter().map(|i| part[i]).collect()
            }
            _ => part.clone(),
        };
        let mut density = periodic_density_certificate(sys, &graph, &probe, radius_d)?;
        if let Evidence::PeriodicDensity { total_nodes, .. } = &mut density.evidence {
            *total_nodes = part.len();
        }
        basic_sets.push(BasicSet {
            id,
            nodes: part.clone(),
            invariant: invariant(&graph, part),
            transitivity,
            density,
        });
    }

    let expected_count = sys.exact_count();
    let mut dec = SpectralDecomposition {
        system: sys.name().to_string(),
        config: cfg.clone(),
        node_count: nodes.len(),
        rungs: rung_summaries,
        stabilization_index,
        certificate_rung,
        recurrent_nodes,
        finite_flag: true,
        expected_count,
        graph,
        verdict: Verdict::Pass,
        basic_sets,
    };
    let exact_match = expected_count == Some(dec.basic_sets.len());
    let stabilized = if stabilization_index < last || rung_count == 1 || exact_match {
        Verdict::Pass
    } else {
        Verdict::ResolutionLimited {
            reason: "partition is not confirmed by a second rung above the resolution floor".into(),
        }
    };
    let count = match expected_count {
        Some(n) => Verdict::check(dec.basic_sets.len() == n, || {
            format!("{} basic sets, the system has {n}", dec.basic_sets.len())
        }),
        None => Verdict::Pass,
    };
    let part = Verdict::check(dec.partition_holds(), || "basic sets do not partition the recurrent set".into());
    let inv = Verdict::all(dec.basic_sets.iter().map(|b| {
        Verdict::check(b.invariant, || format!("basic set {} is not invariant", b.id))
    }));
    let certs = Verdict::all(
        dec.basic_sets
            .iter()
            .flat_map(|b| [b.transitivity.verdict.clone(), b.density.verdict.clone()]),
    );
    dec.verdict = Verdict::all([part, inv, count, stabilized, certs]);
    Ok(dec)
}
