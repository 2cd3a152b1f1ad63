//! Kind-cycles: local face-pattern rules, maximal-path tracing, cylinders
//! and homologous families.
//!
//! Each kind is an automaton over the rotation system. At a path vertex
//! `cur` entered from `prev` and left towards `next`, the incident faces split
//! into two fans: the counter-clockwise fan from `prev` to `next` (the right
//! side of the walk) and the complementary fan (the left side). Three rule
//! families cover all kinds:
//!
//! * word kinds (`A1`, `A2`, `A3`, `B1`, `Y1`, `Y2`) prescribe the exact fan
//!   size sequences, cycling through a fixed word of letters;
//! * run kinds (`Z1`, `G1`, `H1`, `W1`) prescribe how many consecutive path
//!   edges may lie on a face of each size;
//! * the straight kind `X1` requires two faces on each side.
//!
//! A walk is always traced against every admissible initial automaton state;
//! the seed disambiguates when several cycles pass through the seed edge.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::face_type::MapType;
use crate::generators::GridLabeling;
use crate::map::ToroidalMap;

/// The path kinds, one family per map type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CycleKind {
    A1,
    A2,
    A3,
    B1,
    X1,
    Y1,
    Y2,
    Z1,
    G1,
    H1,
    W1,
}

impl CycleKind {
    pub const ALL: [CycleKind; 11] = [
        CycleKind::A1,
        CycleKind::A2,
        CycleKind::A3,
        CycleKind::B1,
        CycleKind::X1,
        CycleKind::Y1,
        CycleKind::Y2,
        CycleKind::Z1,
        CycleKind::G1,
        CycleKind::H1,
        CycleKind::W1,
    ];

    pub fn map_type(self) -> MapType {
        use CycleKind::*;
        match self {
            A1 | A2 | A3 => MapType::Snub33344,
            B1 => MapType::Snub33434,
            X1 => MapType::Kagome,
            Y1 | Y2 => MapType::Snub33336,
            Z1 => MapType::Octagonal,
            G1 => MapType::Dodecagonal,
            H1 => MapType::Great4612,
            W1 => MapType::Rhombi3464,
        }
    }

    /// The kind whose cycles run along the generator's horizontal rows.
    pub fn primary(t: MapType) -> CycleKind {
        match t {
            MapType::Snub33344 => CycleKind::A1,
            MapType::Snub33434 => CycleKind::B1,
            MapType::Kagome => CycleKind::X1,
            MapType::Snub33336 => CycleKind::Y1,
            MapType::Octagonal => CycleKind::Z1,
            MapType::Dodecagonal => CycleKind::G1,
            MapType::Great4612 => CycleKind::H1,
            MapType::Rhombi3464 => CycleKind::W1,
        }
    }

    /// All kinds defined for a type.
    pub fn for_type(t: MapType) -> Vec<CycleKind> {
        Self::ALL.into_iter().filter(|k| k.map_type() == t).collect()
    }

    pub fn as_str(self) -> &'static str {
        use CycleKind::*;
        match self {
            A1 => "A1",
            A2 => "A2",
            A3 => "A3",
            B1 => "B1",
            X1 => "X1",
            Y1 => "Y1",
            Y2 => "Y2",
            Z1 => "Z1",
            G1 => "G1",
            H1 => "H1",
            W1 => "W1",
        }
    }

    fn rule(self) -> Rule {
        use CycleKind::*;
        let w = |letters: &[(&[usize], &[usize])]| {
            Rule::Word(word_variants(
                letters.iter().map(|(r, l)| (r.to_vec(), l.to_vec())).collect(),
            ))
        };
        let run = |pairs: &[(usize, &[usize])]| {
            Rule::Run(pairs.iter().map(|(s, ls)| (*s, ls.to_vec())).collect())
        };
        // Y1 read backwards; the two describe the same cycles.
        const Y1_WORD: [(&[usize], &[usize]); 3] =
            [(&[6], &[3, 3, 3, 3]), (&[6, 3, 3], &[3, 3]), (&[3, 6], &[3, 3, 3])];
        match self {
            A1 => w(&[(&[3, 3, 3], &[4, 4])]),
            A2 => w(&[(&[4, 3], &[3, 3, 4]), (&[3, 3, 4], &[4, 3])]),
            A3 => w(&[(&[4, 3, 3], &[3, 4]), (&[3, 4], &[4, 3, 3])]),
            B1 => w(&[(&[3, 4], &[3, 3, 4]), (&[4, 3, 3], &[4, 3])]),
            Y1 => w(&Y1_WORD),
            Y2 => {
                let rev: Vec<(&[usize], &[usize])> =
                    Y1_WORD.iter().rev().map(|&(r, l)| (l, r)).collect();
                w(&rev)
            }
            X1 => Rule::Straight,
            Z1 => run(&[(4, &[1]), (8, &[3])]),
            G1 => run(&[(3, &[1]), (12, &[3])]),
            H1 => run(&[(4, &[1]), (6, &[1, 3]), (12, &[5])]),
            W1 => run(&[(3, &[1]), (4, &[1]), (6, &[2])]),
        }
    }
}

impl fmt::Display for CycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CycleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        Self::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::Format(format!("unknown cycle kind {t:?}")))
    }
}

type Letter = (Vec<usize>, Vec<usize>);

enum Rule {
    /// Variants of a cyclic word of `(right fan sizes, left fan sizes)`.
    Word(Vec<Vec<Letter>>),
    /// Allowed run lengths per face size.
    Run(BTreeMap<usize, Vec<usize>>),
    Straight,
}

/// The word and, if different up to rotation, its reverse traversal.
fn word_variants(word: Vec<Letter>) -> Vec<Vec<Letter>> {
    let rev: Vec<Letter> = word.iter().rev().map(|(r, l)| (l.clone(), r.clone())).collect();
    let is_rotation = (0..word.len()).any(|i| {
        let mut w = word.clone();
        w.rotate_left(i);
        w == rev
    });
    if is_rotation {
        vec![word]
    } else {
        vec![word, rev]
    }
}

type State = (usize, usize);

impl Rule {
    fn max_run(allowed: &BTreeMap<usize, Vec<usize>>, size: usize) -> usize {
        allowed
            .get(&size)
            .and_then(|v| v.iter().max().copied())
            .unwrap_or(0)
    }

    fn initial_states(&self, map: &ToroidalMap, u0: usize, u1: usize) -> Vec<State> {
        match self {
            Rule::Word(vars) => vars
                .iter()
                .enumerate()
                .flat_map(|(v, w)| (0..w.len()).map(move |p| (v, p)))
                .collect(),
            Rule::Run(allowed) => {
                let (Some(fl), Some(fr)) = (map.face_left_of(u0, u1), map.face_left_of(u1, u0))
                else {
                    return Vec::new();
                };
                let ml = Self::max_run(allowed, map.face_size(fl));
                let mr = Self::max_run(allowed, map.face_size(fr));
                (1..=ml).flat_map(|l| (1..=mr).map(move |r| (l, r))).collect()
            }
            Rule::Straight => vec![(0, 0)],
        }
    }

    /// Every admissible `(next, state)` continuation at `cur`.
    fn step(&self, map: &ToroidalMap, st: State, prev: usize, cur: usize) -> Vec<(usize, State)> {
        let mut out = Vec::new();
        for &next in map.neighbors(cur) {
            if next == prev {
                continue;
            }
            let Some((right, left)) = map.fans(prev, cur, next) else {
                continue;
            };
            match self {
                Rule::Word(vars) => {
                    let word = &vars[st.0];
                    let (r0, l0) = &word[st.1];
                    let sizes_match = |fan: &[usize], want: &[usize]| {
                        fan.len() == want.len()
                            && fan.iter().zip(want).all(|(&f, &w)| map.face_size(f) == w)
                    };
                    if sizes_match(&right, r0) && sizes_match(&left, l0) {
                        out.push((next, (st.0, (st.1 + 1) % word.len())));
                    }
                }
                Rule::Run(allowed) => {
                    let (l, r) = st;
                    let fr = right[0];
                    let fl = left[left.len() - 1];
                    let advance = |run: usize, fan_len: usize, face: usize| -> Option<usize> {
                        let size = map.face_size(face);
                        if fan_len == 1 {
                            (run < Self::max_run(allowed, size)).then_some(run + 1)
                        } else {
                            allowed.get(&size)?.contains(&run).then_some(1)
                        }
                    };
                    if let (Some(r2), Some(l2)) =
                        (advance(r, right.len(), fr), advance(l, left.len(), fl))
                    {
                        out.push((next, (l2, r2)));
                    }
                }
                Rule::Straight => {
                    if right.len() == 2 && left.len() == 2 {
                        out.push((next, st));
                    }
                }
            }
        }
        out
    }
}

fn check_kind(map: &ToroidalMap, kind: CycleKind) -> Result<()> {
    match map.map_type() {
        Some(t) if t == kind.map_type() => Ok(()),
        other => Err(Error::KindMismatch {
            kind: kind.to_string(),
            map_type: other.map_or_else(|| "unknown".to_string(), |t| t.name()),
        }),
    }
}

/// A simple closed walk, optionally of a kind, with its homology class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracedCycle {
    pub vertices: Vec<usize>,
    /// `None` for cycles produced by a construction rather than a kind rule.
    pub kind: Option<CycleKind>,
    pub homology: Option<(i64, i64)>,
}

impl TracedCycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_set(&self) -> BTreeSet<usize> {
        self.vertices.iter().copied().collect()
    }

    /// Undirected edges `(min, max)`.
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        cycle_edges(&self.vertices).collect()
    }
}

pub(crate) fn cycle_edges(c: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let k = c.len();
    (0..k).map(move |i| {
        let (a, b) = (c[i], c[(i + 1) % k]);
        (a.min(b), a.max(b))
    })
}

/// Rotation/reflection-invariant form of a cycle, for deduplication.
pub fn canonical_cycle(c: &[usize]) -> Vec<usize> {
    if c.is_empty() {
        return Vec::new();
    }
    let i = (0..c.len()).min_by_key(|&i| c[i]).unwrap_or(0);
    let mut fwd = c.to_vec();
    fwd.rotate_left(i);
    let mut bwd: Vec<usize> = fwd.iter().rev().copied().collect();
    bwd.rotate_right(1);
    fwd.min(bwd)
}

/// The unique next vertex after the walk `path` (at least two vertices).
///
/// All initial automaton states compatible with the whole path are tried;
/// if they disagree the continuation is [`Error::Ambiguous`], and if none
/// continues it is [`Error::RuleViolation`].
pub fn successor_along(map: &ToroidalMap, kind: CycleKind, path: &[usize]) -> Result<usize> {
    check_kind(map, kind)?;
    let violation = |vertex: usize, reason: &str| Error::RuleViolation {
        kind: kind.to_string(),
        vertex,
        reason: reason.to_string(),
    };
    if path.len() < 2 || !map.is_edge(path[0], path[1]) {
        return Err(violation(path.first().copied().unwrap_or(0), "seed is not an edge"));
    }
    let rule = kind.rule();
    let mut states = rule.initial_states(map, path[0], path[1]);
    for i in 1..path.len() - 1 {
        states = states
            .into_iter()
            .flat_map(|st| rule.step(map, st, path[i - 1], path[i]))
            .filter(|&(nx, _)| nx == path[i + 1])
            .map(|(_, st)| st)
            .collect();
    }
    let last = path.len() - 1;
    let nexts: BTreeSet<usize> = states
        .into_iter()
        .flat_map(|st| rule.step(map, st, path[last - 1], path[last]))
        .map(|(nx, _)| nx)
        .collect();
    match nexts.len() {
        0 => Err(violation(path[last], "no continuation satisfies the face pattern")),
        1 => Ok(nexts.into_iter().next().unwrap_or_default()),
        count => Err(Error::Ambiguous {
            kind: kind.to_string(),
            count,
        }),
    }
}

/// The unique continuation of the directed edge `prev -> cur`.
pub fn successor(map: &ToroidalMap, kind: CycleKind, prev: usize, cur: usize) -> Result<usize> {
    successor_along(map, kind, &[prev, cur])
}

/// Outcome of walking from one initial state.
enum Walk {
    Closed(Vec<usize>),
    /// The walk revisited a vertex without closing up.
    NonSimple(usize),
    /// Back on the seed edge with another automaton phase.
    PhaseMismatch,
    /// No continuation, or more than one.
    Stuck,
}

fn walk_from(map: &ToroidalMap, rule: &Rule, seed: &[usize], st0: State) -> Walk {
    let n = map.n();
    let (u0, u1) = (seed[0], seed[1]);
    let mut walk = vec![u0, u1];
    let mut seen = vec![false; n];
    seen[u0] = true;
    seen[u1] = true;
    let (mut prev, mut cur, mut st) = (u0, u1, st0);
    loop {
        let mut nx = rule.step(map, st, prev, cur);
        if let Some(&want) = seed.get(walk.len()) {
            nx.retain(|x| x.0 == want);
        }
        if nx.len() != 1 {
            return Walk::Stuck;
        }
        let (next, st2) = nx[0];
        (prev, cur, st) = (cur, next, st2);
        walk.push(next);
        if (prev, cur) == (u0, u1) {
            if st != st0 {
                return Walk::PhaseMismatch;
            }
            walk.truncate(walk.len() - 2);
            return if walk.len() >= seed.len() {
                Walk::Closed(walk)
            } else {
                Walk::Stuck
            };
        }
        if seen[cur] && (cur != u0 || prev == u0) {
            return Walk::NonSimple(cur);
        }
        if prev == u0 && walk.len() > 3 {
            // Left the start vertex again without taking the seed edge.
            return Walk::NonSimple(u0);
        }
        seen[cur] = true;
    }
}

/// Statistics of tracing from every initial state of a seed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraceReport {
    pub cycles: Vec<Vec<usize>>,
    /// Walks that revisited a vertex without closing (would refute closure).
    pub non_simple: Vec<usize>,
    /// Walks that returned to the seed edge in a different automaton phase.
    pub phase_mismatches: usize,
}

/// Trace from every initial state consistent with `seed`, returning every
/// distinct simple cycle and every non-simple walk.
pub fn trace_report(map: &ToroidalMap, kind: CycleKind, seed: &[usize]) -> Result<TraceReport> {
    check_kind(map, kind)?;
    if seed.len() < 2 || !map.is_edge(seed[0], seed[1]) {
        return Err(Error::RuleViolation {
            kind: kind.to_string(),
            vertex: seed.first().copied().unwrap_or(0),
            reason: "seed does not start with an edge".into(),
        });
    }
    let rule = kind.rule();
    let mut report = TraceReport::default();
    let mut keys = BTreeSet::new();
    for st0 in rule.initial_states(map, seed[0], seed[1]) {
        match walk_from(map, &rule, seed, st0) {
            Walk::Closed(c) => {
                // A walk may pass the start vertex mid-way with another state;
                // that is a figure-eight, not a simple cycle.
                let set: BTreeSet<usize> = c.iter().copied().collect();
                if set.len() != c.len() {
                    report.non_simple.push(c[0]);
                } else if keys.insert(canonical_cycle(&c)) {
                    report.cycles.push(c);
                }
            }
            Walk::NonSimple(v) => report.non_simple.push(v),
            Walk::PhaseMismatch => report.phase_mismatches += 1,
            Walk::Stuck => {}
        }
    }
    Ok(report)
}

/// Every distinct simple kind-cycle whose walk starts with `seed`.
pub fn trace_all(map: &ToroidalMap, kind: CycleKind, seed: &[usize]) -> Result<Vec<Vec<usize>>> {
    Ok(trace_report(map, kind, seed)?.cycles)
}

/// Trace the maximal kind-path through `seed` into its cycle.
///
/// The seed is a directed edge, optionally extended by further path vertices
/// when the edge alone lies on several kind-cycles.
pub fn trace_cycle(
    map: &ToroidalMap,
    labeling: Option<&GridLabeling>,
    kind: CycleKind,
    seed: &[usize],
) -> Result<TracedCycle> {
    let report = trace_report(map, kind, seed)?;
    match report.cycles.len() {
        1 => {
            let vertices = report.cycles.into_iter().next().unwrap_or_default();
            let homology = labeling.and_then(|l| homology_class(l, &vertices));
            Ok(TracedCycle {
                vertices,
                kind: Some(kind),
                homology,
            })
        }
        0 => {
            if let Some(&v) = report.non_simple.first() {
                Err(Error::NonSimple {
                    kind: kind.to_string(),
                    vertex: v,
                })
            } else {
                Err(Error::RuleViolation {
                    kind: kind.to_string(),
                    vertex: seed[seed.len() - 1],
                    reason: "no kind-path through the seed closes up".into(),
                })
            }
        }
        count => Err(Error::Ambiguous {
            kind: kind.to_string(),
            count,
        }),
    }
}

/// Trace using the shortest prefix of `path` that determines a unique cycle.
pub fn trace_with_prefix(
    map: &ToroidalMap,
    labeling: Option<&GridLabeling>,
    kind: CycleKind,
    path: &[usize],
) -> Result<TracedCycle> {
    let mut last = None;
    for len in 2..=path.len() {
        match trace_cycle(map, labeling, kind, &path[..len]) {
            Err(e @ Error::Ambiguous { .. }) => last = Some(e),
            other => return other,
        }
    }
    Err(last.unwrap_or(Error::RuleViolation {
        kind: kind.to_string(),
        vertex: 0,
        reason: "empty path".into(),
    }))
}

/// True when `cycle` obeys the kind rule at every vertex, closing consistently.
pub fn satisfies_kind(map: &ToroidalMap, kind: CycleKind, cycle: &[usize]) -> bool {
    if cycle.len() < 3 || map.map_type() != Some(kind.map_type()) {
        return false;
    }
    let mut seed = cycle.to_vec();
    seed.extend_from_slice(&cycle[..2]);
    let rule = kind.rule();
    rule.initial_states(map, seed[0], seed[1]).into_iter().any(|st0| {
        let mut st = st0;
        for i in 1..seed.len() - 1 {
            match rule
                .step(map, st, seed[i - 1], seed[i])
                .into_iter()
                .find(|x| x.0 == seed[i + 1])
            {
                Some((_, s)) => st = s,
                None => return false,
            }
        }
        st == st0
    })
}

/// Net winding `(p, q)` of a closed walk in the generator's cut basis.
pub fn homology_class(labeling: &GridLabeling, cycle: &[usize]) -> Option<(i64, i64)> {
    labeling.winding(cycle)
}

/// The closed star of a cycle and its two boundary cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    pub core: TracedCycle,
    /// Boundary on the right (counter-clockwise fan) side and on the left.
    pub boundary: (TracedCycle, TracedCycle),
    /// Face ids of the closed star, ascending.
    pub faces: Vec<usize>,
}

/// Closed star of a cycle, split by side, with each side's boundary cycle.
///
/// A side's boundary consists of the edges that lie on exactly one face of
/// that side and not on the core. With a labeling and a non-contractible
/// core, the star is lifted to the annular cover determined by the core's
/// class, so a star that wraps onto itself (a single-row cut) still yields
/// two boundaries; they may then coincide on the torus. Boundaries get the
/// core's kind when they satisfy its rule.
pub fn build_cylinder(
    map: &ToroidalMap,
    labeling: Option<&GridLabeling>,
    core: &TracedCycle,
) -> Result<Cylinder> {
    let c = &core.vertices;
    let k = c.len();
    let kind_name = core.kind.map_or("cycle".into(), |x| x.to_string());
    // Corner slots of each side, per core position.
    let mut corners: Vec<(Vec<usize>, Vec<usize>)> = Vec::with_capacity(k);
    for i in 0..k {
        let (prev, cur, next) = (c[(i + k - 1) % k], c[i], c[(i + 1) % k]);
        let (Some(from), Some(to)) = (map.slot_of(cur, prev), map.slot_of(cur, next)) else {
            return Err(Error::RuleViolation {
                kind: kind_name,
                vertex: cur,
                reason: "consecutive vertices are not adjacent".into(),
            });
        };
        let d = map.degree(cur);
        let right = (0..(to + d - from) % d).map(|t| (from + t) % d).collect();
        let left = (0..(from + d - to) % d).map(|t| (to + t) % d).collect();
        corners.push((right, left));
    }
    let faces: Vec<usize> = corners
        .iter()
        .enumerate()
        .flat_map(|(i, (r, l))| r.iter().chain(l).map(move |&t| map.corner_face(c[i], t)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let lift = labeling.and_then(|l| Some((l, l.winding(c)?))).filter(|(_, h)| *h != (0, 0));
    let (b1, b2) = match lift {
        Some((lab, period)) => {
            let cover = CoverStrip::new(map, lab, c, period)?;
            let right: Vec<(usize, usize)> = corners.iter().enumerate().flat_map(|(i, (r, _))| r.iter().map(move |&t| (i, t))).collect();
            let left: Vec<(usize, usize)> = corners.iter().enumerate().flat_map(|(i, (_, l))| l.iter().map(move |&t| (i, t))).collect();
            (cover.side_boundary(&right)?, cover.side_boundary(&left)?)
        }
        None => {
            let core_edges = core.edges();
            let side = |pick: fn(&(Vec<usize>, Vec<usize>)) -> &Vec<usize>| -> Result<Vec<usize>> {
                let side_faces: BTreeSet<usize> = corners
                    .iter()
                    .enumerate()
                    .flat_map(|(i, x)| pick(x).iter().map(move |&t| map.corner_face(c[i], t)))
                    .collect();
                let mut count: HashMap<(usize, usize), usize> = HashMap::new();
                for &f in &side_faces {
                    for e in map.face(f).edges() {
                        *count.entry(e).or_default() += 1;
                    }
                }
                let edges: Vec<(usize, usize)> = count
                    .into_iter()
                    .filter(|&(e, m)| m == 1 && !core_edges.contains(&e))
                    .map(|(e, _)| e)
                    .collect();
                single_cycle(&edges).ok_or_else(boundary_error)
            };
            (side(|x| &x.0)?, side(|x| &x.1)?)
        }
    };
    let finish = |vertices: Vec<usize>| TracedCycle {
        kind: core.kind.filter(|&kd| satisfies_kind(map, kd, &vertices)),
        homology: labeling.and_then(|l| homology_class(l, &vertices)),
        vertices,
    };
    Ok(Cylinder {
        core: core.clone(),
        boundary: (finish(b1), finish(b2)),
        faces,
    })
}

fn boundary_error() -> Error {
    Error::ConstructionFailed("cylinder side boundary is not a single cycle".into())
}

/// A vertex of the universal cover: a map vertex plus a period offset.
type Lifted = (usize, i64, i64);

/// The closed star of a non-contractible cycle, lifted to the cover of the
/// torus in which the cycle closes up (the annulus `R² / ⟨period⟩`).
struct CoverStrip<'a> {
    map: &'a ToroidalMap,
    lab: &'a GridLabeling,
    period: (i64, i64),
    /// Lift of each core position.
    core: Vec<Lifted>,
    core_edges: BTreeSet<(Lifted, Lifted)>,
}

impl<'a> CoverStrip<'a> {
    fn new(map: &'a ToroidalMap, lab: &'a GridLabeling, c: &[usize], period: (i64, i64)) -> Result<Self> {
        let mut strip = CoverStrip {
            map,
            lab,
            period,
            core: Vec::with_capacity(c.len()),
            core_edges: BTreeSet::new(),
        };
        let mut at = (c[0], 0, 0);
        for i in 0..c.len() {
            strip.core.push(strip.reduce(at));
            at = strip.step(at, c[(i + 1) % c.len()])?;
        }
        for i in 0..c.len() {
            let e = strip.edge(strip.core[i], strip.step(strip.core[i], c[(i + 1) % c.len()])?);
            strip.core_edges.insert(e);
        }
        Ok(strip)
    }

    /// Move along the edge from `from` to the map vertex `to`.
    fn step(&self, from: Lifted, to: usize) -> Result<Lifted> {
        let (p, q) = self.lab.voltage(from.0, to).ok_or_else(boundary_error)?;
        Ok((to, from.1 + p, from.2 + q))
    }

    /// Canonical representative modulo translation by the period.
    fn reduce(&self, (v, a, b): Lifted) -> Lifted {
        let (p, q) = self.period;
        let t = if p != 0 { a.div_euclid(p) } else { b.div_euclid(q) };
        (v, a - t * p, b - t * q)
    }

    /// Canonical undirected lifted edge.
    fn edge(&self, x: Lifted, y: Lifted) -> (Lifted, Lifted) {
        let shifted = |base: Lifted| {
            let r = self.reduce(base);
            let (da, db) = (r.1 - base.1, r.2 - base.2);
            let (x2, y2) = ((x.0, x.1 + da, x.2 + db), (y.0, y.1 + da, y.2 + db));
            (x2.min(y2), x2.max(y2))
        };
        shifted(x).min(shifted(y))
    }

    /// Boundary of the faces at the given `(core position, corner slot)`s.
    fn side_boundary(&self, corners: &[(usize, usize)]) -> Result<Vec<usize>> {
        let rs = self.map.rotation_system();
        // Each lifted face, keyed by its map id and the lift of its first dart.
        let mut faces: BTreeMap<(usize, Lifted), Vec<Lifted>> = BTreeMap::new();
        for &(i, slot) in corners {
            let start = crate::map::Dart { vertex: self.core[i].0, slot };
            let f = self.map.corner_face(start.vertex, slot);
            let first = self.map.face(f).darts[0];
            let mut walk = Vec::new();
            let (mut d, mut at, mut key) = (start, self.core[i], None);
            loop {
                if d == first {
                    key = Some(self.reduce(at));
                }
                walk.push(at);
                let next = rs.next_dart(d);
                at = self.step(at, next.vertex)?;
                d = next;
                if d == start {
                    break;
                }
            }
            faces.entry((f, key.expect("a facial walk contains its first dart"))).or_insert(walk);
        }
        let mut count: BTreeMap<(Lifted, Lifted), usize> = BTreeMap::new();
        for walk in faces.values() {
            for j in 0..walk.len() {
                *count.entry(self.edge(walk[j], walk[(j + 1) % walk.len()])).or_default() += 1;
            }
        }
        let edges: Vec<(Lifted, Lifted)> = count
            .into_iter()
            .filter(|(e, m)| *m == 1 && !self.core_edges.contains(e))
            .map(|(e, _)| e)
            .collect();
        // Lifted edges are glued across the period: key vertices by their
        // reduced lift and order the resulting cycle.
        let mut ids: BTreeMap<Lifted, usize> = BTreeMap::new();
        let mut names = Vec::new();
        let mut id = |x: Lifted| {
            let x = self.reduce(x);
            *ids.entry(x).or_insert_with(|| {
                names.push(x.0);
                names.len() - 1
            })
        };
        let indexed: Vec<(usize, usize)> = edges.iter().map(|&(x, y)| (id(x), id(y))).collect();
        let order = single_cycle(&indexed).ok_or_else(boundary_error)?;
        Ok(order.into_iter().map(|i| names[i]).collect())
    }
}

/// Order an edge set forming one simple cycle, starting at its least vertex.
pub(crate) fn single_cycle(edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if adj.is_empty() || adj.values().any(|v| v.len() != 2) {
        return None;
    }
    let start = *adj.keys().next()?;
    let mut out = vec![start];
    let (mut prev, mut cur) = (start, adj[&start].iter().copied().min()?);
    while cur != start {
        out.push(cur);
        let nb = &adj[&cur];
        let next = if nb[0] != prev { nb[0] } else { nb[1] };
        (prev, cur) = (cur, next);
    }
    (out.len() == adj.len()).then_some(out)
}

/// The primary-kind cycles along every horizontal row, starting from the row
/// that contains `cycle`, in row order.
pub fn homologous_family(
    map: &ToroidalMap,
    labeling: &GridLabeling,
    cycle: &TracedCycle,
) -> Result<Vec<TracedCycle>> {
    let rep = labeling.rep;
    let kind = cycle.kind.unwrap_or(CycleKind::primary(rep.map_type));
    let start_row = cycle
        .vertices
        .iter()
        .map(|&v| labeling.coord(v))
        .find(|g| g.layer == 0)
        .map_or(0, |g| g.row);
    let mut out = Vec::with_capacity(rep.s);
    for i in 0..rep.s {
        let b = ((start_row + i) % rep.s) as i64;
        let row: Vec<usize> = (0..rep.r as i64)
            .filter_map(|c| labeling.vertex_at(b, c, 0))
            .collect();
        out.push(trace_with_prefix(map, Some(labeling), kind, &row)?);
    }
    Ok(out)
}
