//! Rotation systems and validated toroidal maps.
//!
//! A rotation system lists, for each vertex, its neighbours in
//! counter-clockwise order. Faces are traced with the next-dart rule: leaving
//! `v` along the dart `v -> w`, the walk continues from `w` towards the
//! neighbour that precedes `v` in the rotation at `w`. With that convention the
//! face of dart `(v, i)` occupies the corner at `v` between `rot[v][i]` and
//! `rot[v][i + 1]`.

use std::collections::{BTreeMap, HashMap};

use petgraph::graph::UnGraph;

use crate::error::{Error, Result};
use crate::face_type::{FaceSequence, MapType};

/// A directed half-edge: the `slot`-th entry in the rotation at `vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub vertex: usize,
    pub slot: usize,
}

/// A closed facial walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacialWalk {
    pub darts: Vec<Dart>,
    pub vertices: Vec<usize>,
}

impl FacialWalk {
    pub fn size(&self) -> usize {
        self.darts.len()
    }

    /// Undirected edges `(min, max)` along the walk.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % k];
            (a.min(b), a.max(b))
        })
    }
}

/// A simple, symmetric rotation system. No topological checks beyond that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    rotation: Vec<Vec<usize>>,
    offsets: Vec<usize>,
}

impl RotationSystem {
    pub fn new(rotation: Vec<Vec<usize>>) -> Result<Self> {
        let n = rotation.len();
        for (v, nbrs) in rotation.iter().enumerate() {
            for (i, &w) in nbrs.iter().enumerate() {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
                if w == v || nbrs[..i].contains(&w) {
                    return Err(Error::LoopOrMultiEdge { vertex: v });
                }
            }
        }
        for (v, nbrs) in rotation.iter().enumerate() {
            for &w in nbrs {
                if !rotation[w].contains(&v) {
                    return Err(Error::NonSymmetricAdjacency { u: v, v: w });
                }
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for nbrs in &rotation {
            offsets.push(acc);
            acc += nbrs.len();
        }
        offsets.push(acc);
        Ok(RotationSystem { rotation, offsets })
    }

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn num_darts(&self) -> usize {
        self.offsets[self.n()]
    }

    pub fn num_edges(&self) -> usize {
        self.num_darts() / 2
    }

    pub fn dart_index(&self, d: Dart) -> usize {
        self.offsets[d.vertex] + d.slot
    }

    /// Position of `w` in the rotation at `v`.
    pub fn slot_of(&self, v: usize, w: usize) -> Option<usize> {
        self.rotation[v].iter().position(|&x| x == w)
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.rotation[u].contains(&v)
    }

    pub fn head(&self, d: Dart) -> usize {
        self.rotation[d.vertex][d.slot]
    }

    /// Next dart of the facial walk containing `d`.
    pub fn next_dart(&self, d: Dart) -> Dart {
        let w = self.head(d);
        let j = self.slot_of(w, d.vertex).expect("symmetric rotation");
        let deg = self.degree(w);
        Dart {
            vertex: w,
            slot: (j + deg - 1) % deg,
        }
    }

    /// Partition all darts into facial walks (deterministic order: by first dart).
    pub fn trace_faces(&self) -> Vec<FacialWalk> {
        let mut seen = vec![false; self.num_darts()];
        let mut faces = Vec::new();
        for v in 0..self.n() {
            for slot in 0..self.degree(v) {
                let start = Dart { vertex: v, slot };
                if seen[self.dart_index(start)] {
                    continue;
                }
                let mut darts = Vec::new();
                let mut d = start;
                while !seen[self.dart_index(d)] {
                    seen[self.dart_index(d)] = true;
                    darts.push(d);
                    d = self.next_dart(d);
                }
                let vertices = darts.iter().map(|d| d.vertex).collect();
                faces.push(FacialWalk { darts, vertices });
            }
        }
        faces
    }

    /// Sorted list of undirected edges.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for v in 0..self.n() {
            for &w in &self.rotation[v] {
                if v < w {
                    out.push((v, w));
                }
            }
        }
        out
    }

    /// Number of connected components of the underlying graph.
    pub fn components(&self) -> usize {
        let mut g: UnGraph<(), ()> = UnGraph::with_capacity(self.n(), self.num_edges());
        let nodes: Vec<_> = (0..self.n()).map(|_| g.add_node(())).collect();
        for (a, b) in self.edges() {
            g.add_edge(nodes[a], nodes[b], ());
        }
        petgraph::algo::connected_components(&g)
    }
}

/// A validated polyhedral map on the torus.
#[derive(Debug, Clone)]
pub struct ToroidalMap {
    rs: RotationSystem,
    faces: Vec<FacialWalk>,
    dart_face: Vec<usize>,
    face_lookup: HashMap<Vec<usize>, usize>,
}

impl ToroidalMap {
    /// Build and validate: simple, connected, Euler characteristic 0, and
    /// polyhedral (no facial walk repeats a vertex; two faces meet in at most
    /// one vertex or one edge).
    pub fn new(rotation: Vec<Vec<usize>>) -> Result<Self> {
        let rs = RotationSystem::new(rotation)?;
        if rs.n() == 0 {
            return Err(Error::DisconnectedGraph { components: 0 });
        }
        let components = rs.components();
        if components != 1 {
            return Err(Error::DisconnectedGraph { components });
        }
        let faces = rs.trace_faces();
        let euler = rs.n() as i64 - rs.num_edges() as i64 + faces.len() as i64;
        if euler != 0 {
            return Err(Error::NonToroidal { euler });
        }
        let mut dart_face = vec![usize::MAX; rs.num_darts()];
        for (fi, f) in faces.iter().enumerate() {
            for &d in &f.darts {
                dart_face[rs.dart_index(d)] = fi;
            }
        }
        let map = ToroidalMap {
            face_lookup: HashMap::new(),
            rs,
            faces,
            dart_face,
        };
        map.check_polyhedral()?;
        let face_lookup = map
            .faces
            .iter()
            .enumerate()
            .map(|(i, f)| (sorted(&f.vertices), i))
            .collect();
        Ok(ToroidalMap { face_lookup, ..map })
    }

    fn check_polyhedral(&self) -> Result<()> {
        for (fi, f) in self.faces.iter().enumerate() {
            let mut vs = f.vertices.clone();
            vs.sort_unstable();
            if vs.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::NonPolyhedral(format!(
                    "face {fi} repeats a vertex"
                )));
            }
        }
        // Shared vertices per face pair, discovered through vertex stars.
        let mut shared: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for v in 0..self.n() {
            let mut fs: Vec<usize> = (0..self.rs.degree(v))
                .map(|i| self.corner_face(v, i))
                .collect();
            fs.sort_unstable();
            fs.dedup();
            for (a, &fa) in fs.iter().enumerate() {
                for &fb in &fs[a + 1..] {
                    shared.entry((fa, fb)).or_default().push(v);
                }
            }
        }
        for ((fa, fb), vs) in shared {
            match vs.len() {
                1 => {}
                2 if self.rs.is_edge(vs[0], vs[1]) => {}
                _ => {
                    return Err(Error::NonPolyhedral(format!(
                        "faces {fa} and {fb} meet in vertices {vs:?}"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn rotation_system(&self) -> &RotationSystem {
        &self.rs
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        self.rs.rotation()
    }

    pub fn n(&self) -> usize {
        self.rs.n()
    }

    pub fn num_edges(&self) -> usize {
        self.rs.num_edges()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.rs.neighbors(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rs.degree(v)
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.rs.is_edge(u, v)
    }

    pub fn slot_of(&self, v: usize, w: usize) -> Option<usize> {
        self.rs.slot_of(v, w)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.rs.edges()
    }

    pub fn faces(&self) -> &[FacialWalk] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &FacialWalk {
        &self.faces[id]
    }

    pub fn face_size(&self, id: usize) -> usize {
        self.faces[id].size()
    }

    /// The face occupying the corner at `v` between `rot[v][i]` and `rot[v][i+1]`.
    pub fn corner_face(&self, v: usize, i: usize) -> usize {
        self.dart_face[self.rs.dart_index(Dart { vertex: v, slot: i })]
    }

    /// Face lying counter-clockwise after the dart `u -> w` at `u`.
    pub fn face_left_of(&self, u: usize, w: usize) -> Option<usize> {
        self.rs.slot_of(u, w).map(|i| self.corner_face(u, i))
    }

    /// Face id of a facial walk given by its vertex set.
    pub fn face_by_vertices(&self, vertices: &[usize]) -> Option<usize> {
        self.face_lookup.get(&sorted(vertices)).copied()
    }

    /// Ids of faces incident to `v`, in rotation order (one per corner).
    pub fn faces_at(&self, v: usize) -> Vec<usize> {
        (0..self.degree(v)).map(|i| self.corner_face(v, i)).collect()
    }

    /// Face sizes around `v` in rotation order.
    pub fn face_sequence_at(&self, v: usize) -> Result<Vec<usize>> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n() });
        }
        Ok(self
            .faces_at(v)
            .into_iter()
            .map(|f| self.face_size(f))
            .collect())
    }

    /// The common face sequence, or the first vertex that disagrees with vertex 0.
    pub fn verify_semi_equivelar(&self) -> Result<FaceSequence> {
        let expected = FaceSequence::new(&self.face_sequence_at(0)?);
        for v in 1..self.n() {
            let found = FaceSequence::new(&self.face_sequence_at(v)?);
            if found != expected {
                return Err(Error::NotSemiEquivelar {
                    vertex: v,
                    expected: expected.name(),
                    found: found.name(),
                });
            }
        }
        Ok(expected)
    }

    /// One of the eight torus types, if the map is semi-equivelar of that type.
    pub fn map_type(&self) -> Option<MapType> {
        self.verify_semi_equivelar()
            .ok()
            .and_then(|s| MapType::from_sequence(&s))
    }

    /// Faces around `cur` strictly between the darts to `prev` and `next`,
    /// split into the counter-clockwise fan from `prev` to `next` (`ccw`) and
    /// the complementary fan (`cw`). Both are listed in rotation order.
    pub fn fans(&self, prev: usize, cur: usize, next: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        let d = self.degree(cur);
        let i = self.slot_of(cur, prev)?;
        let j = self.slot_of(cur, next)?;
        let mut ccw = Vec::new();
        let mut t = i;
        while t != j {
            ccw.push(self.corner_face(cur, t));
            t = (t + 1) % d;
        }
        let mut cw = Vec::new();
        let mut t = j;
        while t != i {
            cw.push(self.corner_face(cur, t));
            t = (t + 1) % d;
        }
        Some((ccw, cw))
    }
}

/// Two maps are equal when their rotation systems agree dart for dart.
impl PartialEq for ToroidalMap {
    fn eq(&self, other: &Self) -> bool {
        self.rs == other.rs
    }
}

impl Eq for ToroidalMap {}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}
