//! Exact search: Hamiltonicity, longest cycles and vertex connectivity.
//!
//! The searches work on plain adjacency lists so they can be pointed at any
//! simple graph, not only generated maps. Everything here is deterministic:
//! vertices are explored in id order and neighbours in the order given.

use std::time::{Duration, Instant};

use petgraph::algo::ford_fulkerson;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::{Deserialize, Serialize};

use crate::map::ToroidalMap;

/// Limits for the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub time_limit: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 2_000_000_000,
            time_limit: Duration::from_secs(300),
        }
    }
}

impl SearchBudget {
    pub fn new(max_nodes: u64, time_limit: Duration) -> Self {
        SearchBudget {
            max_nodes: max_nodes.max(1),
            time_limit: time_limit.max(Duration::from_millis(1)),
        }
    }
}

/// Outcome of [`find_hamiltonian`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Status {
    Hamiltonian { cycle: Vec<usize> },
    /// The search space was exhausted without finding a cycle.
    NonHamiltonian,
    /// The budget ran out first.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    #[serde(flatten)]
    pub status: Status,
    pub nodes_explored: u64,
}

impl OracleVerdict {
    pub fn is_hamiltonian(&self) -> bool {
        matches!(self.status, Status::Hamiltonian { .. })
    }

    pub fn cycle(&self) -> Option<&[usize]> {
        match &self.status {
            Status::Hamiltonian { cycle } => Some(cycle),
            _ => None,
        }
    }
}

struct Clock {
    start: Instant,
    budget: SearchBudget,
    nodes: u64,
    exhausted: bool,
}

impl Clock {
    fn new(budget: SearchBudget) -> Self {
        Clock {
            start: Instant::now(),
            budget,
            nodes: 0,
            exhausted: false,
        }
    }

    /// Count a node; false once the budget is spent.
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes
            || (self.nodes % 4096 == 0 && self.start.elapsed() > self.budget.time_limit)
        {
            self.exhausted = true;
        }
        !self.exhausted
    }
}

/// Search for a Hamiltonian cycle in a map.
pub fn find_hamiltonian(map: &ToroidalMap, budget: SearchBudget) -> OracleVerdict {
    find_hamiltonian_in(map.rotation(), budget)
}

/// Search for a Hamiltonian cycle in a simple graph given by adjacency lists.
///
/// The path grows from vertex 0, trying the neighbour with the fewest usable
/// neighbours first (ties in list order). Each node checks:
/// * every unvisited vertex keeps at least two usable neighbours
///   (unvisited, the path head, or the path start);
/// * an unvisited neighbour of the head with exactly two usable neighbours
///   must come next (two such vertices refute the node);
/// * the unvisited vertices stay connected to the head and reach a neighbour
///   of the start that may still close the cycle.
///
/// Reflections are broken by only closing through a start neighbour with a
/// larger id than the first step.
///
/// Short probing searches from several start vertices run first; if none
/// succeeds, one exhaustive search from vertex 0 uses the rest of the budget.
/// A NonHamiltonian verdict always comes from a search that ran to
/// completion.
pub fn find_hamiltonian_in(adj: &[Vec<usize>], budget: SearchBudget) -> OracleVerdict {
    let n = adj.len();
    if n < 3 {
        return OracleVerdict {
            status: Status::NonHamiltonian,
            nodes_explored: 0,
        };
    }
    let started = Instant::now();
    let mut spent = 0u64;
    let remaining = |spent: u64| SearchBudget {
        max_nodes: budget.max_nodes.saturating_sub(spent),
        time_limit: budget.time_limit.saturating_sub(started.elapsed()),
    };
    // Probing rounds: short searches from evenly spaced start vertices with
    // growing caps. Backtracking run times are heavy-tailed, so a fresh start
    // usually beats digging deeper into one unlucky subtree.
    let starts: Vec<usize> = (0..PROBE_STARTS).map(|i| i * n / PROBE_STARTS).collect();
    let mut cap = PROBE_FIRST_CAP;
    while cap <= PROBE_LAST_CAP {
        for &start in &starts {
            let mut rest = remaining(spent);
            rest.max_nodes = rest.max_nodes.min(cap);
            let mut clock = Clock::new(rest);
            let found = HamSearch::new(adj).run(start, &mut clock);
            spent += clock.nodes.min(rest.max_nodes);
            if let Some(cycle) = found {
                return OracleVerdict {
                    status: Status::Hamiltonian { cycle },
                    nodes_explored: spent,
                };
            }
            if !clock.exhausted {
                // A probe that finishes without exhausting its cap has
                // searched its whole tree: the graph is not Hamiltonian.
                return OracleVerdict {
                    status: Status::NonHamiltonian,
                    nodes_explored: spent,
                };
            }
            if spent >= budget.max_nodes || started.elapsed() > budget.time_limit {
                return OracleVerdict {
                    status: Status::Inconclusive,
                    nodes_explored: spent,
                };
            }
        }
        cap *= 8;
    }
    let mut clock = Clock::new(remaining(spent));
    let found = HamSearch::new(adj).run(0, &mut clock);
    spent += clock.nodes;
    let status = match found {
        Some(cycle) => Status::Hamiltonian { cycle },
        None if clock.exhausted => Status::Inconclusive,
        None => Status::NonHamiltonian,
    };
    OracleVerdict {
        status,
        nodes_explored: spent,
    }
}

/// Number of start vertices tried in each probing round.
const PROBE_STARTS: usize = 8;
/// Node cap of the first probing round; each round multiplies it by 8.
const PROBE_FIRST_CAP: u64 = 2_000;
const PROBE_LAST_CAP: u64 = 2_000_000;

struct HamSearch<'a> {
    adj: &'a [Vec<usize>],
    n: usize,
    visited: Vec<bool>,
    /// For unvisited vertices: neighbours that are unvisited, the head, or
    /// a permitted closing edge to the start.
    avail: Vec<u32>,
    /// Start neighbours allowed to close the cycle.
    closer: Vec<bool>,
    path: Vec<usize>,
    // Scratch for the remainder check.
    mark: Vec<u32>,
    epoch: u32,
    disc: Vec<u32>,
    low: Vec<u32>,
}

impl<'a> HamSearch<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        HamSearch {
            adj,
            n,
            visited: vec![false; n],
            avail: adj.iter().map(|a| a.len() as u32).collect(),
            closer: vec![false; n],
            path: Vec::with_capacity(n),
            mark: vec![0; n],
            epoch: 0,
            disc: vec![0; n],
            low: vec![0; n],
        }
    }

    fn run(&mut self, start: usize, clock: &mut Clock) -> Option<Vec<usize>> {
        self.visited[start] = true;
        self.path.push(start);
        let firsts: Vec<usize> = self.adj[start].clone();
        for &a in &firsts {
            // Closing edges permitted: start neighbours with id > a.
            let mut blocked = Vec::new();
            for &w in &self.adj[start] {
                self.closer[w] = w > a;
                if w != a && w < a {
                    self.avail[w] -= 1;
                    blocked.push(w);
                }
            }
            if blocked.iter().all(|&w| self.avail[w] >= 2) {
                if let Some(c) = self.extend(a, clock) {
                    return Some(c);
                }
            }
            for &w in &blocked {
                self.avail[w] += 1;
            }
            if clock.exhausted {
                return None;
            }
        }
        None
    }

    /// Move the head to `x` and search on; undoes everything before returning
    /// `None`.
    fn extend(&mut self, x: usize, clock: &mut Clock) -> Option<Vec<usize>> {
        if !clock.tick() {
            return None;
        }
        let old = *self.path.last().unwrap_or(&0);
        let start = self.path[0];
        self.visited[x] = true;
        self.path.push(x);
        // `old` stops being an endpoint unless it is the start.
        let mut ok = true;
        if old != start {
            for &w in &self.adj[old] {
                if !self.visited[w] {
                    self.avail[w] -= 1;
                    if self.avail[w] < 2 {
                        ok = false;
                    }
                }
            }
        }
        let result = if ok { self.expand(clock) } else { None };
        if old != start {
            for &w in &self.adj[old] {
                if !self.visited[w] {
                    self.avail[w] += 1;
                }
            }
        }
        self.path.pop();
        self.visited[x] = false;
        result
    }

    fn expand(&mut self, clock: &mut Clock) -> Option<Vec<usize>> {
        let head = *self.path.last().unwrap_or(&0);
        if self.path.len() == self.n {
            return self.closer[head].then(|| self.path.clone());
        }
        // Forced continuation.
        let mut forced = None;
        for &w in &self.adj[head] {
            if !self.visited[w] && self.avail[w] == 2 {
                // The start counts as usable only through a closing edge.
                if forced.is_some() {
                    return None;
                }
                forced = Some(w);
            }
        }
        if !self.remainder_ok(head) {
            return None;
        }
        if let Some(w) = forced {
            return self.extend(w, clock);
        }
        // Warnsdorff order: most constrained neighbour first, ties in
        // rotation order (the sort is stable).
        let mut order: Vec<usize> = self.adj[head].iter().copied().filter(|&w| !self.visited[w]).collect();
        order.sort_by_key(|&w| self.avail[w]);
        for w in order {
            if let Some(c) = self.extend(w, clock) {
                return Some(c);
            }
            if clock.exhausted {
                return None;
            }
        }
        None
    }

    /// The rest of the cycle is a Hamiltonian path from the head through
    /// every unvisited vertex to the start, entering it by a closing edge.
    /// Adding the edge start–head turns that path into a Hamiltonian cycle,
    /// so the graph on unvisited ∪ {head, start} (start joined only to
    /// closers, plus a virtual start–head edge) must be 2-connected.
    /// Checked with an iterative Tarjan DFS from the start.
    fn remainder_ok(&mut self, head: usize) -> bool {
        let start = self.path[0];
        self.epoch += 1;
        let ep = self.epoch;
        let in_r = |s: &Self, v: usize| v == head || v == start || !s.visited[v];
        // Neighbours of `v` inside the remainder graph.
        let allowed = |s: &Self, v: usize, w: usize| -> bool {
            if !in_r(s, w) {
                return false;
            }
            if v == start {
                w == head || s.closer[w]
            } else if w == start {
                v == head || s.closer[v]
            } else {
                true
            }
        };
        let mut timer = 0u32;
        let size = self.n - self.path.len() + 2;
        // Stack of (vertex, parent, next neighbour slot).
        let mut stack: Vec<(usize, usize, usize)> = Vec::with_capacity(size);
        self.mark[start] = ep;
        self.disc[start] = timer;
        self.low[start] = timer;
        timer += 1;
        stack.push((start, usize::MAX, 0));
        let mut root_children = 0;
        while let Some(&mut (v, parent, ref mut slot)) = stack.last_mut() {
            // The virtual start–head edge is appended after the real ones.
            let deg = self.adj[v].len();
            let extra = usize::from(v == start || v == head);
            if *slot < deg + extra {
                let w = if *slot < deg { self.adj[v][*slot] } else if v == start { head } else { start };
                *slot += 1;
                let ok = if *slot <= deg {
                    // Real edges between start and head are covered by the virtual one.
                    !((v == start && w == head) || (v == head && w == start)) && allowed(self, v, w)
                } else {
                    true
                };
                if !ok || w == parent {
                    continue;
                }
                if self.mark[w] == ep {
                    self.low[v] = self.low[v].min(self.disc[w]);
                } else {
                    self.mark[w] = ep;
                    self.disc[w] = timer;
                    self.low[w] = timer;
                    timer += 1;
                    if v == start {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    self.low[p] = self.low[p].min(self.low[v]);
                    if p != start && self.low[v] >= self.disc[p] {
                        return false;
                    }
                }
            }
        }
        timer as usize == size && root_children == 1
    }
}

/// Result of [`longest_cycle`]: exact when `lower == upper`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongestCycle {
    pub lower: usize,
    pub upper: usize,
    pub witness: Vec<usize>,
    pub exact: bool,
    pub nodes_explored: u64,
}

/// Largest instance on which the exhaustive longest-cycle search is attempted.
pub const LONGEST_CYCLE_MAX_N: usize = 80;

/// Longest simple cycle of a map.
///
/// A Hamiltonian verdict settles it at once; otherwise branch and bound
/// (each cycle is enumerated from its least vertex, bounded by the number
/// of vertices still reachable) runs within the budget. `seed` is an
/// optional known cycle used as the initial lower bound. Beyond
/// [`LONGEST_CYCLE_MAX_N`] vertices only the bracket is reported.
pub fn longest_cycle(map: &ToroidalMap, budget: SearchBudget, seed: Option<&[usize]>) -> LongestCycle {
    longest_cycle_in(map.rotation(), budget, seed)
}

pub fn longest_cycle_in(adj: &[Vec<usize>], budget: SearchBudget, seed: Option<&[usize]>) -> LongestCycle {
    let n = adj.len();
    let mut witness: Vec<usize> = seed
        .filter(|c| is_simple_cycle(adj, c))
        .map(<[usize]>::to_vec)
        .unwrap_or_default();
    let ham = find_hamiltonian_in(adj, budget);
    let mut nodes = ham.nodes_explored;
    let upper = match &ham.status {
        Status::Hamiltonian { cycle } => {
            return LongestCycle {
                lower: n,
                upper: n,
                witness: cycle.clone(),
                exact: true,
                nodes_explored: nodes,
            }
        }
        Status::NonHamiltonian => n.saturating_sub(1),
        Status::Inconclusive => n,
    };
    if n > LONGEST_CYCLE_MAX_N {
        let lower = witness.len();
        return LongestCycle {
            lower,
            upper,
            exact: lower == upper,
            witness,
            nodes_explored: nodes,
        };
    }
    let mut clock = Clock::new(budget);
    let mut bb = LongSearch {
        adj,
        visited: vec![false; n],
        path: Vec::with_capacity(n),
        best: witness.clone(),
        upper,
        mark: vec![0; n],
        epoch: 0,
        stack: Vec::with_capacity(n),
    };
    'outer: for v in 0..n {
        if bb.best.len() >= upper {
            break;
        }
        // Cycles with least vertex v use only vertices >= v.
        if n - v <= bb.best.len() {
            break;
        }
        bb.visited[v] = true;
        bb.path.push(v);
        bb.dfs(v, &mut clock);
        bb.path.pop();
        bb.visited[v] = false;
        if clock.exhausted {
            break 'outer;
        }
    }
    nodes += clock.nodes;
    witness = bb.best;
    let lower = witness.len();
    LongestCycle {
        lower,
        upper: if clock.exhausted { upper } else { lower },
        exact: !clock.exhausted || lower == upper,
        witness,
        nodes_explored: nodes,
    }
}

struct LongSearch<'a> {
    adj: &'a [Vec<usize>],
    visited: Vec<bool>,
    path: Vec<usize>,
    best: Vec<usize>,
    upper: usize,
    mark: Vec<u32>,
    epoch: u32,
    stack: Vec<usize>,
}

impl LongSearch<'_> {
    fn dfs(&mut self, start: usize, clock: &mut Clock) {
        if !clock.tick() || self.best.len() >= self.upper {
            return;
        }
        let head = *self.path.last().unwrap_or(&start);
        // Each cycle is recorded in the orientation whose second vertex is
        // smaller than its last.
        let len = self.path.len();
        if len >= 3 && len > self.best.len() && self.path[1] < head && self.adj[head].contains(&start) {
            self.best = self.path.clone();
        }
        if len > 1 && len + self.reachable(head, start) <= self.best.len() {
            return;
        }
        for i in 0..self.adj[head].len() {
            let w = self.adj[head][i];
            if w <= start || self.visited[w] {
                continue;
            }
            if len == 1 && !self.adj[start].iter().any(|&u| u > w) {
                continue;
            }
            self.visited[w] = true;
            self.path.push(w);
            self.dfs(start, clock);
            self.path.pop();
            self.visited[w] = false;
            if clock.exhausted {
                return;
            }
        }
    }

    /// Unvisited vertices above `start` reachable from `head` that can still
    /// lead back to the start.
    fn reachable(&mut self, head: usize, start: usize) -> usize {
        self.epoch += 1;
        let ep = self.epoch;
        self.stack.clear();
        self.stack.push(head);
        self.mark[head] = ep;
        let mut count = 0;
        let mut back = false;
        while let Some(v) = self.stack.pop() {
            for &w in &self.adj[v] {
                if w == start {
                    back = true;
                }
                if w > start && !self.visited[w] && self.mark[w] != ep {
                    self.mark[w] = ep;
                    count += 1;
                    self.stack.push(w);
                }
            }
        }
        if back {
            count
        } else {
            0
        }
    }
}

/// Simple cycle of length at least 3 along graph edges.
pub fn is_simple_cycle(adj: &[Vec<usize>], cycle: &[usize]) -> bool {
    let n = adj.len();
    let k = cycle.len();
    if k < 3 {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    (0..k).all(|i| adj[cycle[i]].contains(&cycle[(i + 1) % k]))
}

/// Exact vertex connectivity of a map's graph.
pub fn vertex_connectivity(map: &ToroidalMap) -> usize {
    vertex_connectivity_in(map.rotation())
}

/// Exact vertex connectivity via unit-capacity vertex splitting.
///
/// Some vertex among any `kappa + 1` vertices lies outside a minimum
/// separator, so the first `min_degree + 1` vertices serve as sources,
/// each paired with all of its non-neighbours.
pub fn vertex_connectivity_in(adj: &[Vec<usize>]) -> usize {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let min_deg = adj.iter().map(Vec::len).min().unwrap_or(0);
    // Split v into v_in = 2v and v_out = 2v + 1.
    let big = n as u32;
    let mut g: DiGraph<(), u32> = DiGraph::with_capacity(2 * n, 2 * n + 4 * n * min_deg.max(1));
    for _ in 0..2 * n {
        g.add_node(());
    }
    let node = |i: usize| NodeIndex::new(i);
    for v in 0..n {
        g.add_edge(node(2 * v), node(2 * v + 1), 1);
        for &w in &adj[v] {
            g.add_edge(node(2 * v + 1), node(2 * w), big);
        }
    }
    let mut best = n - 1;
    for s in 0..(min_deg + 1).min(n) {
        for t in 0..n {
            if t == s || adj[s].contains(&t) {
                continue;
            }
            let (flow, _) = ford_fulkerson(&g, node(2 * s + 1), node(2 * t));
            best = best.min(flow as usize);
        }
    }
    best
}

/// Length of a non-contractible `G1` row extended by `m1` dodecagons and
/// `m2` triangles, each glued along one path edge: `base + 6 m1 + m2`.
pub fn extended_row_length(base: usize, m1: usize, m2: usize) -> usize {
    base + 6 * m1 + m2
}

/// Boundary length of a disk of `m1 >= 1` dodecagons and `m2` triangles
/// glued edge to edge: `12 + 10 (m1 - 1) + m2 = 10 m1 + m2 + 2`.
pub fn disk_boundary_length(m1: usize, m2: usize) -> usize {
    12 + 10 * (m1.max(1) - 1) + m2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|v| (0..n).filter(|&w| w != v).collect()).collect()
    }

    fn cycle_graph(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|v| vec![(v + n - 1) % n, (v + 1) % n]).collect()
    }

    #[test]
    fn k4_is_hamiltonian() {
        let v = find_hamiltonian_in(&complete(4), SearchBudget::default());
        let c = v.cycle().unwrap();
        assert_eq!(c.len(), 4);
        assert!(is_simple_cycle(&complete(4), c));
    }

    #[test]
    fn star_is_not_hamiltonian() {
        let adj = vec![vec![1, 2, 3], vec![0], vec![0], vec![0]];
        let v = find_hamiltonian_in(&adj, SearchBudget::default());
        assert_eq!(v.status, Status::NonHamiltonian);
    }

    #[test]
    fn petersen_is_not_hamiltonian_but_has_a_9_cycle() {
        let mut adj = vec![Vec::new(); 10];
        let mut e = |a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        for i in 0..5 {
            e(i, (i + 1) % 5);
            e(i, i + 5);
            e(5 + i, 5 + (i + 2) % 5);
        }
        let v = find_hamiltonian_in(&adj, SearchBudget::default());
        assert_eq!(v.status, Status::NonHamiltonian);
        let l = longest_cycle_in(&adj, SearchBudget::default(), None);
        assert_eq!((l.lower, l.upper, l.exact), (9, 9, true));
        assert!(is_simple_cycle(&adj, &l.witness));
        assert_eq!(vertex_connectivity_in(&adj), 3);
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let mut adj = vec![Vec::new(); 10];
        let mut e = |a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        for i in 0..5 {
            e(i, (i + 1) % 5);
            e(i, i + 5);
            e(5 + i, 5 + (i + 2) % 5);
        }
        let v = find_hamiltonian_in(&adj, SearchBudget::new(2, Duration::from_secs(1)));
        assert_eq!(v.status, Status::Inconclusive);
    }

    #[test]
    fn connectivity_of_small_graphs() {
        assert_eq!(vertex_connectivity_in(&complete(5)), 4);
        assert_eq!(vertex_connectivity_in(&cycle_graph(7)), 2);
        let path = vec![vec![1], vec![0, 2], vec![1]];
        assert_eq!(vertex_connectivity_in(&path), 1);
    }

    #[test]
    fn triangle_longest_cycle_is_three() {
        let l = longest_cycle_in(&complete(3), SearchBudget::default(), None);
        assert_eq!(l.lower, 3);
        assert!(l.exact);
    }

    #[test]
    fn bound_formulas() {
        assert_eq!(extended_row_length(24, 3, 15), 57);
        assert_eq!(disk_boundary_length(5, 14), 66);
        assert_eq!(disk_boundary_length(1, 0), 12);
    }
}
