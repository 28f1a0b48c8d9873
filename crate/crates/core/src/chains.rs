//! D-chains, chain graphs on sample sets, chain recurrence and components.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::entourage::{Entourage, Point};
use crate::error::ChainError;
use crate::linalg::Vec2;
use crate::metric::{wrap01, Metric};
use crate::scc::{tarjan, Scc};
use crate::systems::{DynamicalSystem, SymbolPoint};

/// Whether `(f(x_{i-1}), x_i) ∈ D` for every consecutive pair of `seq`.
pub fn is_chain<S: DynamicalSystem>(
    sys: &S,
    seq: &[S::Point],
    d: &Entourage<S::Point>,
) -> Result<bool, ChainError> {
    if seq.len() < 2 {
        return Err(ChainError::TooShort(seq.len()));
    }
    Ok(seq.windows(2).all(|w| d.contains(&sys.forward(&w[0]), &w[1])))
}

/// Spatial lookup returning a superset of the samples within `radius` of a
/// point.
pub trait SampleIndex<P>: Sync {
    fn candidates(&self, center: &P, radius: f64) -> Vec<u32>;
}

/// Buckets torus points into an `m × m` array of cells.
pub struct TorusBuckets {
    m: usize,
    cells: Vec<Vec<u32>>,
}

impl TorusBuckets {
    pub fn new(points: &[Vec2], m: usize) -> Self {
        let mut cells = vec![Vec::new(); m * m];
        for (i, p) in points.iter().enumerate() {
            let (a, b) = Self::cell(m, p);
            cells[a * m + b].push(i as u32);
        }
        TorusBuckets { m, cells }
    }

    fn cell(m: usize, p: &Vec2) -> (usize, usize) {
        let a = ((wrap01(p[0]) * m as f64) as usize).min(m - 1);
        let b = ((wrap01(p[1]) * m as f64) as usize).min(m - 1);
        (a, b)
    }
}

impl SampleIndex<Vec2> for TorusBuckets {
    fn candidates(&self, center: &Vec2, radius: f64) -> Vec<u32> {
        let m = self.m as i64;
        let reach = ((radius * m as f64).ceil() as i64 + 1).min(m / 2 + 1);
        let (a, b) = Self::cell(self.m, center);
        let mut out = Vec::new();
        let span = |c: i64| -> Vec<i64> {
            if 2 * reach + 1 >= m {
                (0..m).collect()
            } else {
                (c - reach..=c + reach).map(|x| x.rem_euclid(m)).collect()
            }
        };
        for i in span(a as i64) {
            for j in span(b as i64) {
                out.extend_from_slice(&self.cells[(i * m + j) as usize]);
            }
        }
        out
    }
}

/// Groups symbolic points by their central word `x_{-k} … x_k`.
pub struct CylinderIndex {
    k: usize,
    all: Vec<u32>,
    by_word: HashMap<Vec<u8>, Vec<u32>>,
}

impl CylinderIndex {
    pub fn new(points: &[SymbolPoint], k: usize) -> Self {
        let mut by_word: HashMap<Vec<u8>, Vec<u32>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            by_word.entry(p.central(k)).or_default().push(i as u32);
        }
        CylinderIndex {
            k,
            all: (0..points.len() as u32).collect(),
            by_word,
        }
    }
}

impl SampleIndex<SymbolPoint> for CylinderIndex {
    fn candidates(&self, center: &SymbolPoint, radius: f64) -> Vec<u32> {
        if radius > 1.0 {
            return self.all.clone();
        }
        // d < radius forces agreement on |i| < m where 2^{-m} < radius
        let m = (1.0 / radius).log2().floor() as i64 + 1;
        if m > self.k as i64 {
            self.by_word.get(&center.central(self.k)).cloned().unwrap_or_default()
        } else {
            self.all.clone()
        }
    }
}

/// Directed graph on samples with an edge `i → j` iff `(f(xᵢ), xⱼ) ∈ D`.
pub struct ChainGraph<P> {
    nodes: Arc<Vec<P>>,
    label: String,
    adj: Vec<Vec<u32>>,
    scc: OnceLock<Scc>,
}

impl<P: Point> ChainGraph<P> {
    /// Builds from an explicit adjacency; used by tests and importers.
    pub fn from_adjacency(nodes: Arc<Vec<P>>, label: &str, adj: Vec<Vec<u32>>) -> Self {
        assert_eq!(nodes.len(), adj.len());
        ChainGraph {
            nodes,
            label: label.to_string(),
            adj,
            scc: OnceLock::new(),
        }
    }

    pub fn nodes(&self) -> &Arc<Vec<P>> {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn entourage_label(&self) -> &str {
        &self.label
    }

    pub fn successors(&self, i: usize) -> &[u32] {
        &self.adj[i]
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adj
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(&(j as u32))
    }

    pub fn scc(&self) -> &Scc {
        self.scc.get_or_init(|| tarjan(&self.adj))
    }

    /// Nodes on a directed cycle: in an SCC of size ≥ 2 or with a self-loop.
    pub fn recurrent_mask(&self) -> Vec<bool> {
        let scc = self.scc();
        let sizes = scc.sizes();
        (0..self.len())
            .map(|i| sizes[scc.component[i] as usize] >= 2 || self.has_edge(i, i))
            .collect()
    }

    /// Nodes reachable from `from` by walks of length ≥ 1.
    pub fn reachable_from(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut todo: VecDeque<usize> = self.adj[from].iter().map(|&j| j as usize).collect();
        for &j in &self.adj[from] {
            seen[j as usize] = true;
        }
        while let Some(v) = todo.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    todo.push_back(w as usize);
                }
            }
        }
        seen
    }

    /// Shortest walk (of length ≥ 1) from `from` to `to`, as node indices
    /// including both ends.
    pub fn shortest_walk(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let n = self.len();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut todo = VecDeque::new();
        for &j in &self.adj[from] {
            let j = j as usize;
            if !seen[j] {
                seen[j] = true;
                parent[j] = from;
                todo.push_back(j);
            }
        }
        while let Some(v) = todo.pop_front() {
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                loop {
                    let p = parent[cur];
                    path.push(p);
                    if p == from && path.len() >= 2 {
                        break;
                    }
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &w in &self.adj[v] {
                let w = w as usize;
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    todo.push_back(w);
                }
            }
        }
        None
    }

    /// `node_id: succ_id succ_id …` per line.
    pub fn to_adjacency_text(&self) -> String {
        let mut out = String::new();
        for (i, row) in self.adj.iter().enumerate() {
            let mut row = row.clone();
            row.sort_unstable();
            out.push_str(&i.to_string());
            out.push(':');
            for j in row {
                out.push(' ');
                out.push_str(&j.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Parses the adjacency text format back into successor lists.
pub fn parse_adjacency_text(text: &str) -> Result<Vec<Vec<u32>>, ChainError> {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (head, tail) = line.split_once(':').ok_or(ChainError::InconsistentNodes)?;
        let id: usize = head.trim().parse().map_err(|_| ChainError::InconsistentNodes)?;
        if id != rows.len() {
            return Err(ChainError::InconsistentNodes);
        }
        let succ = tail
            .split_whitespace()
            .map(|s| s.parse::<u32>().map_err(|_| ChainError::InconsistentNodes))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(succ);
    }
    Ok(rows)
}

/// Brute-force construction: checks every ordered pair.
pub fn build_chain_graph<S: DynamicalSystem>(
    sys: &S,
    samples: Arc<Vec<S::Point>>,
    d: &Entourage<S::Point>,
) -> ChainGraph<S::Point> {
    let adj = samples
        .par_iter()
        .map(|x| {
            let fx = sys.forward(x);
            (0..samples.len() as u32)
                .filter(|&j| d.contains(&fx, &samples[j as usize]))
                .collect()
        })
        .collect();
    ChainGraph::from_adjacency(samples, d.label(), adj)
}

/// Construction through a spatial index: candidates come from the index
/// using `D`'s closed-form reach and every edge is re-checked against `D`.
/// Falls back to brute force at points where `D` has no closed-form reach.
pub fn build_chain_graph_indexed<S: DynamicalSystem, I: SampleIndex<S::Point>>(
    sys: &S,
    samples: Arc<Vec<S::Point>>,
    d: &Entourage<S::Point>,
    index: &I,
) -> ChainGraph<S::Point> {
    let adj = samples
        .par_iter()
        .map(|x| {
            let fx = sys.forward(x);
            let mut row: Vec<u32> = match d.reach(&fx) {
                Some(r) => index
                    .candidates(&fx, r)
                    .into_iter()
                    .filter(|&j| d.contains(&fx, &samples[j as usize]))
                    .collect(),
                None => (0..samples.len() as u32)
                    .filter(|&j| d.contains(&fx, &samples[j as usize]))
                    .collect(),
            };
            row.sort_unstable();
            row.dedup();
            row
        })
        .collect();
    ChainGraph::from_adjacency(samples, d.label(), adj)
}

/// Indices of chain recurrent nodes.
pub fn chain_recurrent_set<P: Point>(g: &ChainGraph<P>) -> Vec<usize> {
    g.recurrent_mask()
        .iter()
        .enumerate()
        .filter(|(_, &r)| r)
        .map(|(i, _)| i)
        .collect()
}

/// Chain components computed over a ladder of shrinking entourages.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainComponentSet {
    /// Nodes recurrent at every rung.
    pub recurrent_nodes: Vec<usize>,
    /// Final partition of `recurrent_nodes`, each part sorted, parts sorted
    /// by their smallest node.
    pub components: Vec<Vec<usize>>,
    /// Entourage labels of the rungs.
    pub ladder: Vec<String>,
    /// Partition after each rung (using rungs `0..=k`).
    pub partitions: Vec<Vec<Vec<usize>>>,
    /// First rung from which the partition no longer changes.
    pub stabilization_index: usize,
}

/// Intersects the SCC structure across a ladder of chain graphs sharing
/// the same node set.
pub fn chain_components<P: Point>(ladder: &[&ChainGraph<P>]) -> Result<ChainComponentSet, ChainError> {
    let first = ladder.first().ok_or(ChainError::EmptyLadder)?;
    let n = first.len();
    for g in ladder.iter().skip(1) {
        if !(Arc::ptr_eq(g.nodes(), first.nodes()) || **g.nodes() == **first.nodes()) {
            return Err(ChainError::InconsistentNodes);
        }
    }
    let mut alive = vec![true; n];
    let mut keys: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut partitions = Vec::new();
    for g in ladder {
        let mask = g.recurrent_mask();
        let scc = g.scc();
        for i in 0..n {
            alive[i] &= mask[i];
            keys[i].push(scc.component[i]);
        }
        partitions.push(group(&alive, &keys));
    }
    let last = partitions.last().cloned().unwrap_or_default();
    let stabilization_index = partitions
        .iter()
        .position(|p| *p == last)
        .unwrap_or(0);
    let recurrent_nodes = (0..n).filter(|&i| alive[i]).collect();
    Ok(ChainComponentSet {
        recurrent_nodes,
        components: last,
        ladder: ladder.iter().map(|g| g.entourage_label().to_string()).collect(),
        partitions,
        stabilization_index,
    })
}

fn group(alive: &[bool], keys: &[Vec<u32>]) -> Vec<Vec<usize>> {
    let mut by_key: BTreeMap<&[u32], Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        if alive[i] {
            by_key.entry(k.as_slice()).or_default().push(i);
        }
    }
    let mut parts: Vec<Vec<usize>> = by_key.into_values().collect();
    parts.sort_by_key(|p| p[0]);
    parts
}

/// Samples `x` for which some sample `z ∈ probe[x]` satisfies
/// `fⁿ(z) ∈ probe[x]` for some `1 ≤ n ≤ horizon`.
pub fn nonwandering_set<S: DynamicalSystem>(
    sys: &S,
    samples: &[S::Point],
    probe: &Entourage<S::Point>,
    horizon: usize,
) -> Result<Vec<usize>, ChainError> {
    if horizon == 0 {
        return Err(ChainError::ZeroHorizon);
    }
    let orbits: Vec<Vec<S::Point>> = samples
        .par_iter()
        .map(|z| sys.orbit(z, 1, horizon as i64))
        .collect();
    let hits: Vec<bool> = samples
        .par_iter()
        .map(|x| {
            samples.iter().enumerate().any(|(zi, z)| {
                probe.contains(x, z) && orbits[zi].iter().any(|w| probe.contains(x, w))
            })
        })
        .collect();
    Ok(hits
        .iter()
        .enumerate()
        .filter(|(_, &h)| h)
        .map(|(i, _)| i)
        .collect())
}

/// Whether a chain from `x` to `y` exists through `samples` in which every
/// jump satisfies `d(f(xᵢ₋₁), xᵢ) < δ(f(xᵢ₋₁))`.
pub fn strong_chain_reachable<S: DynamicalSystem>(
    sys: &S,
    x: &S::Point,
    y: &S::Point,
    gauge: impl Fn(&S::Point) -> f64 + Send + Sync + 'static,
    samples: &[S::Point],
) -> bool {
    let mut nodes = samples.to_vec();
    nodes.push(x.clone());
    nodes.push(y.clone());
    let (ix, iy) = (nodes.len() - 2, nodes.len() - 1);
    let metric: Metric<S::Point> = sys.metric().clone();
    let d = Entourage::gauge(sys.name(), "strong", metric, gauge);
    let g = build_chain_graph(sys, Arc::new(nodes), &d);
    g.reachable_from(ix)[iy] || (x == y && g.has_edge(ix, ix))
}

/// Largest distance between two nodes of `part`.
pub fn diameter<P: Point>(metric: &Metric<P>, nodes: &[P], part: &[usize]) -> f64 {
    part.par_iter()
        .map(|&i| {
            part.iter()
                .map(|&j| metric.distance(&nodes[i], &nodes[j]))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Grid `{(i/m, j/m)}` on the unit torus.
pub fn torus_grid(m: usize) -> Vec<Vec2> {
    (0..m * m)
        .map(|k| [(k / m) as f64 / m as f64, (k % m) as f64 / m as f64])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat2;
    use crate::systems::{
        FiniteSystem, HarmonicPoints, LinearSystem, NorthSouth, Shift, TorusAutomorphism, TransitionMatrix,
    };
    use proptest::prelude::*;

    #[test]
    fn chain_examples() {
        let d = LinearSystem::new(Mat2::diag(2.0, 0.5)).unwrap();
        let b = Entourage::ball("plane", d.metric().clone(), 0.1);
        assert!(is_chain(&d, &[[1.0, 0.0], [2.05, 0.0]], &b).unwrap());
        let orbit = d.orbit(&[0.3, 0.7], 0, 2);
        assert!(is_chain(&d, &orbit, &Entourage::diagonal("plane")).unwrap());
        assert_eq!(is_chain(&d, &orbit[..1], &b), Err(ChainError::TooShort(1)));
        let id = HarmonicPoints::new(10);
        assert!(is_chain(&id, &[3, 3], &Entourage::diagonal("h")).unwrap());
    }

    #[test]
    fn permutation_graph() {
        let f = FiniteSystem::cycles(&[2, 3]);
        let g = build_chain_graph(&f, Arc::new(f.points()), &Entourage::diagonal("fin"));
        for i in 0..f.len() {
            assert_eq!(g.successors(i), &[f.forward(&i) as u32]);
        }
        assert_eq!(chain_recurrent_set(&g), f.points());
        let cc = chain_components(&[&g]).unwrap();
        assert_eq!(cc.components, vec![vec![0, 1], vec![2, 3, 4]]);
        assert_eq!(parse_adjacency_text(&g.to_adjacency_text()).unwrap(), g.adjacency());
    }

    #[test]
    fn harmonic_diagonal_graph_is_self_loops() {
        let h = HarmonicPoints::new(50);
        let g = build_chain_graph(&h, Arc::new(h.points()), &Entourage::diagonal("h"));
        for i in 0..g.len() {
            assert_eq!(g.successors(i), &[i as u32]);
        }
        assert_eq!(chain_recurrent_set(&g).len(), 50);
    }

    #[test]
    fn cat_map_out_degree_and_index_agree() {
        let f = TorusAutomorphism::cat_map();
        let grid = Arc::new(torus_grid(32));
        let d = Entourage::ball("torus", f.metric().clone(), 0.05);
        let brute = build_chain_graph(&f, grid.clone(), &d);
        let idx = TorusBuckets::new(&grid, 32);
        let fast = build_chain_graph_indexed(&f, grid.clone(), &d, &idx);
        for i in 0..grid.len() {
            assert!(!brute.successors(i).is_empty());
            let mut a = brute.successors(i).to_vec();
            a.sort_unstable();
            assert_eq!(a, fast.successors(i));
            for &j in fast.successors(i) {
                assert!(d.contains(&f.forward(&grid[i]), &grid[j as usize]));
            }
        }
    }

    #[test]
    fn north_south_recurrence_near_fixed_points() {
        let f = NorthSouth::default();
        let grid = Arc::new(f.grid(200));
        let d = Entourage::ball("I", f.metric().clone(), 0.011);
        let g = build_chain_graph(&f, grid.clone(), &d);
        let cr = chain_recurrent_set(&g);
        // brute-force cycle oracle: i is recurrent iff i reaches itself
        for i in 0..grid.len() {
            let oracle = g.reachable_from(i)[i];
            assert_eq!(cr.contains(&i), oracle);
        }
        for &i in &cr {
            let x = grid[i];
            let near = f.fixed_points().iter().any(|p| (x - p).abs() < 0.15);
            assert!(near, "{x} recurrent");
        }
        let nw = nonwandering_set(&f, &grid, &Entourage::ball("I", f.metric().clone(), 0.011), 100).unwrap();
        // z and f^n(z) both within 0.011 of x, and f moves monotonically
        // toward 0, so the one-step displacement at some z near x is < 0.022
        assert!(!nw.is_empty());
        for &i in &nw {
            let x = grid[i];
            let slack = 0.011 * (1.0 + 0.1 * 2.0);
            let drift = 0.1 * (x.abs() - 0.011).max(0.0) * (1.0 - (x.abs() + 0.011).min(1.0).powi(2));
            assert!(drift < 0.022 + slack, "{x} nonwandering");
            assert!(f.fixed_points().iter().any(|p| (x - p).abs() < 0.3));
        }
    }

    #[test]
    fn block_diagonal_sft_components() {
        let s = Shift::new(TransitionMatrix::parse_rows(&["1100", "1100", "0011", "0011"]).unwrap());
        let words = s.admissible_words(3);
        let pts: Vec<SymbolPoint> = words.iter().map(|w| s.extend_word(w, 1).unwrap()).collect();
        let pts = Arc::new(pts);
        let d = Entourage::ball("sft", s.metric().clone(), 0.5);
        let g = build_chain_graph(&s, pts.clone(), &d);
        let cc = chain_components(&[&g]).unwrap();
        assert_eq!(cc.components.len(), 2);
        for comp in &cc.components {
            let block = pts[comp[0]].at(0) / 2;
            assert!(comp.iter().all(|&i| pts[i].at(0) / 2 == block));
        }
    }

    #[test]
    fn harmonic_strong_chains() {
        let h = HarmonicPoints::new(60);
        let pts = h.points();
        // half the gap x_{n+1} - x_n = 1/(n+1)
        let half_gap = |n: &usize| 0.5 / (*n as f64 + 1.0);
        for x in [3usize, 11, 40] {
            assert!(strong_chain_reachable(&h, &x, &x, half_gap, &pts));
            assert!(!strong_chain_reachable(&h, &x, &(x + 1), half_gap, &pts));
        }
        assert!(strong_chain_reachable(&h, &11, &50, |_| 0.1, &pts));
        assert!(!strong_chain_reachable(&h, &5, &50, |_| 0.1, &pts[..9]));
    }

    #[test]
    fn ladder_stabilization() {
        let f = FiniteSystem::cycles(&[1, 2]);
        let pts = Arc::new(f.points());
        let all = Entourage::all_pairs("fin");
        let diag = Entourage::diagonal("fin");
        let g0 = build_chain_graph(&f, pts.clone(), &all);
        let g1 = build_chain_graph(&f, pts.clone(), &diag);
        let cc = chain_components(&[&g0, &g1, &g1]).unwrap();
        assert_eq!(cc.partitions[0], vec![vec![0, 1, 2]]);
        assert_eq!(cc.components, vec![vec![0], vec![1, 2]]);
        assert_eq!(cc.stabilization_index, 1);
        let other = build_chain_graph(&f, Arc::new(vec![0, 1]), &diag);
        assert_eq!(chain_components(&[&g0, &other]), Err(ChainError::InconsistentNodes));
    }

    proptest! {
        #[test]
        fn shrinking_never_adds_recurrence(seed in 0u64..500, r in 0.01f64..0.3) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = NorthSouth::new(rng.random_range(0.05..0.5));
            let pts: Vec<f64> = (0..60).map(|_| rng.random_range(-1.0..1.0)).collect();
            let pts = Arc::new(pts);
            let big = build_chain_graph(&f, pts.clone(), &Entourage::ball("I", Metric::real(), r));
            let small = build_chain_graph(&f, pts.clone(), &Entourage::ball("I", Metric::real(), r / 2.0));
            let a = big.recurrent_mask();
            let b = small.recurrent_mask();
            for i in 0..pts.len() {
                prop_assert!(!b[i] || a[i]);
            }
        }

        #[test]
        fn constant_gauge_is_ordinary_reachability(seed in 0u64..1000, delta in 0.01f64..0.2) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = NorthSouth::new(rng.random_range(0.05..0.5));
            let pts: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.0)).collect();
            let x = pts[0];
            let y = pts[1];
            let mut nodes = pts.clone();
            nodes.push(x);
            nodes.push(y);
            let g = build_chain_graph(&f, Arc::new(nodes), &Entourage::ball("I", Metric::real(), delta));
            let n = g.len();
            let plain = g.reachable_from(n - 2)[n - 1];
            prop_assert_eq!(strong_chain_reachable(&f, &x, &y, move |_| delta, &pts), plain);
        }
    }
}
