//! Hamiltonian-cycle constructions and certificate checking.
//!
//! Every contractible construction builds a set `S` of faces whose union is
//! a closed 2-disk containing every vertex on its boundary; the boundary of
//! that disk is then the Hamiltonian cycle. Keeping `S` in the certificate
//! lets [`verify_certificate`] check contractibility structurally.
//!
//! * Row types (`3.3.3.4.4`, `3.3.4.3.4`, `4.8.8`): the band between rows
//!   `2m` and `2m+1` minus one gap is a disk whose boundary visits both rows;
//!   consecutive bands are glued through a pair of bridging faces.
//! * Big-face types (`3.3.3.3.6`, `3.4.6.4`, `4.6.12`): the largest faces are
//!   pairwise disjoint and cover all vertices; they are chained into one disk
//!   by small bridging faces.
//! * `3.6.3.6`: per pair of rows, a strip of hexagons (one left out) with the
//!   triangles that reach uncovered vertices, glued by single hexagons.
//!
//! Whatever a recipe leaves uncovered is absorbed by [`grow`], which attaches
//! ears (faces meeting the disk in exactly one boundary edge).

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::face_type::MapType;
use crate::generators::{phi_3464, phi_4612, GridLabeling};
use crate::map::ToroidalMap;
use crate::tracer::{cycle_edges, homology_class, single_cycle};

/// Which construction produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Pairs of rows joined through bridging face pairs.
    RowPairing,
    /// Row pairing plus ears absorbing the last (odd) row.
    RowPairingOddRepair,
    /// Disjoint large faces chained by bridging faces.
    BigFaceChain,
    /// Hexagon strips joined by single hexagons.
    KagomeStrips,
    /// The single-row weave through every apex (non-contractible).
    KagomeWeave,
    /// A single row that already visits every vertex (non-contractible).
    SingleRow,
    /// Supplied from outside (e.g. a reference cycle or an oracle witness).
    External,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::RowPairing => "row-pairing",
            Strategy::RowPairingOddRepair => "row-pairing-odd-repair",
            Strategy::BigFaceChain => "big-face-chain",
            Strategy::KagomeStrips => "kagome-strips",
            Strategy::KagomeWeave => "kagome-weave",
            Strategy::SingleRow => "single-row",
            Strategy::External => "external",
        }
    }
}

/// A Hamiltonian cycle plus the evidence for its contractibility.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonianCertificate {
    pub cycle: Vec<usize>,
    pub contractible: bool,
    pub strategy: Strategy,
    /// Vertex lists of the faces whose union the cycle bounds (empty when
    /// the cycle is not contractible).
    pub disk_faces: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homology: Option<(i64, i64)>,
}

/// First violated condition of a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateViolation {
    #[error("cycle has {found} vertices, map has {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("vertex {0} is out of range or repeated")]
    BadVertex(usize),
    #[error("{0} and {1} are not adjacent")]
    NotAnEdge(usize, usize),
    #[error("disk face {0:?} is not a face of the map")]
    UnknownFace(Vec<usize>),
    #[error("claimed disk is invalid: {0}")]
    NotADisk(String),
    #[error("disk boundary differs from the cycle")]
    BoundaryMismatch,
    #[error("cycle has homology {0:?}, expected (0, 0)")]
    NotNullHomologous((i64, i64)),
}

/// Check a certificate against a map: Hamiltonicity always, and the disk
/// structure when contractibility is claimed.
pub fn verify_certificate(
    map: &ToroidalMap,
    cert: &HamiltonianCertificate,
) -> std::result::Result<(), CertificateViolation> {
    verify_hamiltonian_cycle(map, &cert.cycle)?;
    if !cert.contractible {
        return Ok(());
    }
    let mut ids = Vec::with_capacity(cert.disk_faces.len());
    for f in &cert.disk_faces {
        ids.push(
            map.face_by_vertices(f)
                .ok_or_else(|| CertificateViolation::UnknownFace(f.clone()))?,
        );
    }
    let boundary = disk_boundary(map, &ids).map_err(CertificateViolation::NotADisk)?;
    let want: BTreeSet<(usize, usize)> = cycle_edges(&cert.cycle).collect();
    let got: BTreeSet<(usize, usize)> = cycle_edges(&boundary).collect();
    if want != got {
        return Err(CertificateViolation::BoundaryMismatch);
    }
    if let Some(h) = cert.homology {
        if h != (0, 0) {
            return Err(CertificateViolation::NotNullHomologous(h));
        }
    }
    Ok(())
}

/// Simple closed walk through every vertex using map edges.
pub fn verify_hamiltonian_cycle(
    map: &ToroidalMap,
    cycle: &[usize],
) -> std::result::Result<(), CertificateViolation> {
    let n = map.n();
    if cycle.len() != n {
        return Err(CertificateViolation::WrongLength {
            expected: n,
            found: cycle.len(),
        });
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || seen[v] {
            return Err(CertificateViolation::BadVertex(v));
        }
        seen[v] = true;
    }
    for i in 0..n {
        let (a, b) = (cycle[i], cycle[(i + 1) % n]);
        if !map.is_edge(a, b) {
            return Err(CertificateViolation::NotAnEdge(a, b));
        }
    }
    Ok(())
}

fn edge_counts(map: &ToroidalMap, faces: &[usize]) -> HashMap<(usize, usize), usize> {
    let mut count = HashMap::new();
    for &f in faces {
        for e in map.face(f).edges() {
            *count.entry(e).or_insert(0) += 1;
        }
    }
    count
}

/// Boundary cycle of a union of faces that forms a closed disk.
///
/// Requires: no repeated face, boundary edges form one simple cycle, and
/// `V - E + F = 1` over the union.
pub fn disk_boundary(map: &ToroidalMap, faces: &[usize]) -> std::result::Result<Vec<usize>, String> {
    let distinct: BTreeSet<usize> = faces.iter().copied().collect();
    if distinct.len() != faces.len() {
        return Err("a face is listed twice".into());
    }
    if faces.is_empty() {
        return Err("no faces".into());
    }
    let count = edge_counts(map, faces);
    let boundary: Vec<(usize, usize)> = count
        .iter()
        .filter(|&(_, &m)| m == 1)
        .map(|(&e, _)| e)
        .collect();
    let cycle = single_cycle(&boundary)
        .ok_or_else(|| "boundary is not a single simple cycle".to_string())?;
    let vertices: HashSet<usize> = faces
        .iter()
        .flat_map(|&f| map.face(f).vertices.iter().copied())
        .collect();
    let euler = vertices.len() as i64 - count.len() as i64 + faces.len() as i64;
    if euler != 1 {
        return Err(format!("Euler characteristic {euler}, expected 1"));
    }
    Ok(cycle)
}

pub fn is_disk(map: &ToroidalMap, faces: &[usize]) -> bool {
    disk_boundary(map, faces).is_ok()
}

/// Boundary of `faces` if it is a disk whose boundary visits every vertex.
pub fn hamiltonian_boundary(map: &ToroidalMap, faces: &[usize]) -> Option<Vec<usize>> {
    disk_boundary(map, faces)
        .ok()
        .filter(|c| c.len() == map.n())
}

/// Extend a disk by ears until its boundary passes through every vertex.
///
/// Depth-first over ears at the least uncovered vertex; an ear is a face
/// outside the disk meeting it in exactly one boundary edge (and no other
/// vertex). Returns `None` when `budget` search nodes do not suffice.
pub fn grow(map: &ToroidalMap, init: &[usize], budget: usize) -> Option<Vec<usize>> {
    struct G<'a> {
        map: &'a ToroidalMap,
        faces_at: Vec<Vec<usize>>,
        in_s: Vec<bool>,
        covered: Vec<bool>,
        count: HashMap<(usize, usize), usize>,
        s: Vec<usize>,
        nodes: usize,
        budget: usize,
    }
    impl G<'_> {
        fn ears(&self, v: usize) -> Vec<usize> {
            let mut out: Vec<usize> = self.faces_at[v]
                .iter()
                .copied()
                .filter(|&f| !self.in_s[f])
                .filter(|&f| {
                    let face = self.map.face(f);
                    let inter: Vec<usize> = face
                        .vertices
                        .iter()
                        .copied()
                        .filter(|&x| self.covered[x])
                        .collect();
                    if inter.len() != 2 {
                        return false;
                    }
                    let e = (inter[0].min(inter[1]), inter[0].max(inter[1]));
                    face.edges().any(|x| x == e) && self.count.get(&e) == Some(&1)
                })
                .collect();
            out.sort_by_key(|&f| {
                let mut vs = self.map.face(f).vertices.clone();
                vs.sort_unstable();
                (vs.len(), vs)
            });
            out.dedup();
            out
        }

        fn dfs(&mut self) -> bool {
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            let Some(v) = (0..self.covered.len()).find(|&v| !self.covered[v]) else {
                return true;
            };
            for f in self.ears(v) {
                let new: Vec<usize> = self
                    .map
                    .face(f)
                    .vertices
                    .iter()
                    .copied()
                    .filter(|&x| !self.covered[x])
                    .collect();
                self.s.push(f);
                self.in_s[f] = true;
                for &x in &new {
                    self.covered[x] = true;
                }
                for e in self.map.face(f).edges() {
                    *self.count.entry(e).or_insert(0) += 1;
                }
                if self.dfs() {
                    return true;
                }
                self.s.pop();
                self.in_s[f] = false;
                for &x in &new {
                    self.covered[x] = false;
                }
                for e in self.map.face(f).edges() {
                    if let Some(c) = self.count.get_mut(&e) {
                        *c -= 1;
                    }
                }
            }
            false
        }
    }

    let n = map.n();
    let s = dedupe(init.iter().copied());
    let mut faces_at = vec![Vec::new(); n];
    for (i, f) in map.faces().iter().enumerate() {
        for &v in &f.vertices {
            faces_at[v].push(i);
        }
    }
    let mut in_s = vec![false; map.faces().len()];
    let mut covered = vec![false; n];
    for &f in &s {
        in_s[f] = true;
        for &v in &map.face(f).vertices {
            covered[v] = true;
        }
    }
    let mut g = G {
        map,
        faces_at,
        in_s,
        covered,
        count: edge_counts(map, &s),
        s,
        nodes: 0,
        budget,
    };
    g.dfs().then_some(g.s)
}

/// Default node budget for [`grow`].
pub const GROW_BUDGET: usize = 20_000;

fn dedupe(it: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut seen = HashSet::new();
    it.into_iter().filter(|f| seen.insert(*f)).collect()
}

/// Face lookups in the row/column coordinates of a generated map.
struct Grid<'a> {
    map: &'a ToroidalMap,
    lab: &'a GridLabeling,
    r: i64,
    s: i64,
}

impl<'a> Grid<'a> {
    fn new(map: &'a ToroidalMap, lab: &'a GridLabeling) -> Self {
        Grid {
            map,
            lab,
            r: lab.rep.r as i64,
            s: lab.rep.s as i64,
        }
    }

    fn v(&self, b: i64, c: i64) -> usize {
        self.lab
            .vertex_at(b, c, 0)
            .expect("every row position holds a vertex")
    }

    fn adjacent(&self, b1: i64, c1: i64, b2: i64, c2: i64) -> bool {
        self.map.is_edge(self.v(b1, c1), self.v(b2, c2))
    }

    /// Face on the upper side of the row edge `(b, c) - (b, c+1)`.
    fn above(&self, b: i64, c: i64) -> usize {
        self.map
            .face_left_of(self.v(b, c), self.v(b, c + 1))
            .expect("consecutive row vertices are adjacent")
    }

    /// Face on the lower side of the row edge `(b, c) - (b, c+1)`.
    fn below(&self, b: i64, c: i64) -> usize {
        self.map
            .face_left_of(self.v(b, c + 1), self.v(b, c))
            .expect("consecutive row vertices are adjacent")
    }

    fn size(&self, f: usize) -> usize {
        self.map.face_size(f)
    }

    fn row(&self, b: i64) -> Vec<usize> {
        (0..self.r).map(|c| self.v(b, c)).collect()
    }

    fn shared(&self, f: usize, g: usize) -> usize {
        let a: HashSet<usize> = self.map.face(f).vertices.iter().copied().collect();
        self.map
            .face(g)
            .vertices
            .iter()
            .filter(|v| a.contains(v))
            .count()
    }
}

fn certificate(
    map: &ToroidalMap,
    lab: &GridLabeling,
    faces: &[usize],
    strategy: Strategy,
) -> Result<HamiltonianCertificate> {
    let cycle = hamiltonian_boundary(map, faces).ok_or_else(|| {
        Error::ConstructionFailed(format!("{}: disk boundary is not Hamiltonian", strategy.as_str()))
    })?;
    let mut disk_faces: Vec<Vec<usize>> = faces
        .iter()
        .map(|&f| map.face(f).vertices.clone())
        .collect();
    disk_faces.sort();
    Ok(HamiltonianCertificate {
        homology: homology_class(lab, &cycle),
        cycle,
        contractible: true,
        strategy,
        disk_faces,
    })
}

fn non_contractible(lab: &GridLabeling, cycle: Vec<usize>, strategy: Strategy) -> HamiltonianCertificate {
    HamiltonianCertificate {
        homology: homology_class(lab, &cycle),
        cycle,
        contractible: false,
        strategy,
        disk_faces: Vec::new(),
    }
}

fn expect_type(lab: &GridLabeling, t: MapType) -> Result<()> {
    if lab.rep.map_type == t {
        Ok(())
    } else {
        Err(Error::KindMismatch {
            kind: format!("construction for {t}"),
            map_type: lab.rep.map_type.name(),
        })
    }
}

/// Disk faces for the row types: band pairs `(2m, 2m+1)` glued in order.
fn rows_pairing(g: &Grid) -> Result<Vec<usize>> {
    // Columns where the band above row b has a rung pair whose two faces
    // form a bridge (a single face, or two faces sharing an edge).
    let cols = |b: i64| -> Vec<i64> {
        (0..g.r)
            .filter(|&c| g.adjacent(b, c, b + 1, c) && g.adjacent(b, c + 1, b + 1, c + 1))
            .filter(|&c| {
                let (f1, f2) = (g.above(b, c), g.below(b + 1, c));
                f1 == f2 || g.shared(f1, f2) == 2
            })
            .collect()
    };
    let mut s: Vec<usize> = Vec::new();
    for m in 0..g.s / 2 {
        let b = 2 * m;
        let gap = *cols(b).first().ok_or_else(|| {
            Error::ConstructionFailed(format!("band {b} has no rung pair"))
        })?;
        let band: BTreeSet<usize> = (0..g.r)
            .flat_map(|c| [g.above(b, c), g.below(b + 1, c)])
            .collect();
        let strip: Vec<usize> = band
            .into_iter()
            .filter(|&f| f != g.above(b, gap) && f != g.below(b + 1, gap))
            .collect();
        if m == 0 {
            s = strip;
            continue;
        }
        s = cols(b - 1)
            .into_iter()
            .map(|c| {
                dedupe(
                    s.iter()
                        .copied()
                        .chain([g.above(b - 1, c), g.below(b, c)])
                        .chain(strip.iter().copied()),
                )
            })
            .find(|t| is_disk(g.map, t))
            .ok_or_else(|| Error::ConstructionFailed(format!("no bridge into band {b}")))?;
    }
    Ok(s)
}

fn construct_rows(map: &ToroidalMap, lab: &GridLabeling) -> Result<HamiltonianCertificate> {
    let g = Grid::new(map, lab);
    if g.s == 1 {
        let row = g.row(0);
        if row.len() == map.n() {
            return Ok(non_contractible(lab, row, Strategy::SingleRow));
        }
        return Err(Error::ConstructionFailed("single row misses vertices".into()));
    }
    let s = rows_pairing(&g)?;
    let strategy = if g.s % 2 == 0 {
        Strategy::RowPairing
    } else {
        Strategy::RowPairingOddRepair
    };
    let s = grow(map, &s, GROW_BUDGET)
        .ok_or_else(|| match lab.rep.map_type {
            MapType::Snub33344 | MapType::Snub33434 if g.s % 2 == 1 => {
                Error::OddRowCount { s: lab.rep.s }
            }
            _ => Error::ConstructionFailed("ear growth exhausted its budget".into()),
        })?;
    certificate(map, lab, &s, strategy)
}

/// `{3^3,4^2}`: pairs of rows across the quadrangle bands.
pub fn construct_33344(map: &ToroidalMap, lab: &GridLabeling) -> Result<HamiltonianCertificate> {
    expect_type(lab, MapType::Snub33344)?;
    construct_rows(map, lab)
}

/// `{3^2,4,3,4}`: the same pairing on the mixed bands.
pub fn construct_33434(map: &ToroidalMap, lab: &GridLabeling) -> Result<HamiltonianCertificate> {
    expect_type(lab, MapType::Snub33434)?;
    construct_rows(map, lab)
}

/// `{4,8^2}`: pairing through squares; one row is `C := C_1` when `s = 1`.
pub fn construct_488(map: &ToroidalMap, lab: &GridLabeling) -> Result<HamiltonianCertificate> {
    expect_type(lab, MapType::Octagonal)?;
    construct_rows(map, lab)
}

fn big_face_chain(
    map: &ToroidalMap,
    lab: &GridLabeling,
    big: usize,
    bridges: Vec<usize>,
) -> Result<HamiltonianCertificate> {
    let s: Vec<usize> = (0..map.faces().len())
        .filter(|&f| map.face_size(f) == big)
        .chain(bridges)
        .collect();
    let s = grow(map, &dedupe(s), GROW_BUDGET)
        .ok_or_else(|| Error::ConstructionFailed("ear growth exhausted its budget".into()))?;
    certificate(map, lab, &s, Strategy::BigFaceChain)
}

/// `{3^4,6}`: every hexagon, chained by triangle pairs along the hexagon
/// rows and one triangle pair per triangle band.
pub fn construct_33336(map: &ToroidalMap, lab: &GridLabeling) -> Result<HamiltonianCertificate> {
    expect_type(lab, MapType::Snub33336)?;
    let g = Grid::new(map, lab);
    let mut br = Vec::new();
    for b in (1..g.s).step_by(2) {
        for j in 0..g.r / 3 - 1 {
            let c = 3 * j + 2;
            br.extend([g.above(b, c), g.below(b + 1, c - 1)]);
        }
    }
    for b in (2..g.s).step_by(2) {
        br.extend([g.above(b, 0), g.below(b + 1, 0)]);
    }
    big_face_chain(map, lab, 6, br)
}

/// `{3,4,6,4}`: every hexagon, chained by squares.
pub fn construct_3464(map: &ToroidalMap, lab: &GridLabeling) -> Result<HamiltonianCertificate> {
    expect_type(lab, MapType::Rhombi3464)?;
    let g = Grid::new(map, lab);
    let mut br = Vec::new();
    for b in (0..g.s).step_by(2) {
        let ph = phi_3464(b);
        for j in 0..g.r / 3 - 1 {
            br.push(g.above(b, ph + 3 * j + 2));
        }
    }
    for b in (1..g.s - 1).step_by(2) {
        let ph = phi_3464(b);
        let c = (0..g.r).find(|c| (c - ph).rem_euclid(3) == 1).unwrap_or(0);
        br.push(g.above(b, c));
    }
    big_face_chain(map, lab, 6, br)
}

/// `{4,6,12}`: every dodecagon, chained by squares.
pub fn construct_4612(map: &ToroidalMap, lab: &GridLabeling) -> Result<HamiltonianCertificate> {
    expect_type(lab, MapType::Great4612)?;
    let g = Grid::new(map, lab);
    let mut br = Vec::new();
    for b in (1..g.s).step_by(2) {
        let ph = phi_4612(b);
        for j in 0..g.r / 6 - 1 {
            br.push(g.above(b, ph + 6 * j + 5));
        }
    }
    for b in (2..g.s).step_by(2) {
        let ph = phi_4612(b);
        let c = (0..g.r).find(|c| (c - ph).rem_euclid(6) == 3).unwrap_or(0);
        br.push(g.above(b, c));
    }
    big_face_chain(map, lab, 12, br)
}

/// Hexagons and up-triangles above row `b` (one hexagon left out), plus the
/// down-triangles needed to reach the rest of the row above.
fn kagome_strip(g: &Grid, b: i64, leave_out: i64) -> Vec<usize> {
    let hexes: Vec<usize> = (0..g.r).map(|c| g.above(b, c)).filter(|&f| g.size(f) == 6).collect();
    let ups = (0..g.r).map(|c| g.above(b, c)).filter(|&f| g.size(f) == 3);
    let skip = leave_out.rem_euclid(hexes.len() as i64) as usize;
    let mut d: Vec<usize> = hexes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, &f)| f)
        .chain(ups)
        .collect();
    let mut cov: HashSet<usize> = d
        .iter()
        .flat_map(|&f| g.map.face(f).vertices.iter().copied())
        .collect();
    for c in 0..g.r {
        let f = g.below(b + 1, c);
        if g.size(f) == 3 && g.map.face(f).vertices.iter().any(|x| !cov.contains(x)) {
            d.push(f);
            cov.extend(g.map.face(f).vertices.iter().copied());
        }
    }
    d
}

/// Strips for every pair of rows; the `bridge`-th disk-preserving hexagon
/// (clamped) joins each strip to the disk so far.
fn kagome_disk(g: &Grid, bridge: usize, leave_out: i64) -> Option<Vec<usize>> {
    let mut s: Vec<usize> = Vec::new();
    for m in 0..g.s / 2 {
        let b = 2 * m;
        let d = kagome_strip(g, b, if m == 0 { leave_out } else { -1 });
        if m == 0 {
            s = d;
            continue;
        }
        let cands: Vec<Vec<usize>> = (0..g.r)
            .map(|c| g.above(b - 1, c))
            .filter(|&f| g.size(f) == 6)
            .map(|f| dedupe(s.iter().copied().chain([f]).chain(d.iter().copied())))
            .filter(|t| is_disk(g.map, t))
            .collect();
        s = cands.get(bridge.min(cands.len().checked_sub(1)?))?.clone();
    }
    if g.s % 2 == 1 {
        // The last row: every other hexagon above it that touches the disk
        // in exactly one edge.
        let b = g.s - 1;
        let hexes: Vec<usize> = (0..g.r).map(|c| g.above(b, c)).filter(|&f| g.size(f) == 6).collect();
        let mut cov: HashSet<usize> = s
            .iter()
            .flat_map(|&f| g.map.face(f).vertices.iter().copied())
            .collect();
        for &f in hexes.iter().step_by(2) {
            let vs = &g.map.face(f).vertices;
            if vs.iter().filter(|x| cov.contains(x)).count() == 2 {
                s.push(f);
                cov.extend(vs.iter().copied());
            }
        }
    }
    Some(s)
}

/// `{3,6,3,6}`.
///
/// One row (`s = 1`): weave row and apex vertices, which winds once around
/// the torus. Otherwise: hexagon strips joined by hexagons; the left-out
/// hexagon of the first strip and the bridge choice are searched in a fixed
/// order and the first disk with a Hamiltonian boundary is returned.
pub fn construct_3636(map: &ToroidalMap, lab: &GridLabeling) -> Result<HamiltonianCertificate> {
    expect_type(lab, MapType::Kagome)?;
    let g = Grid::new(map, lab);
    if g.s == 1 {
        let mut cycle = Vec::with_capacity(map.n());
        for j in 0..g.r / 2 {
            let apex = lab
                .vertex_at(0, 2 * j, 1)
                .ok_or_else(|| Error::ConstructionFailed("missing apex".into()))?;
            cycle.extend([g.v(0, 2 * j), apex, g.v(0, 2 * j + 1)]);
        }
        verify_hamiltonian_cycle(map, &cycle)
            .map_err(|e| Error::ConstructionFailed(format!("weave: {e}")))?;
        return Ok(non_contractible(lab, cycle, Strategy::KagomeWeave));
    }
    let leave_outs = std::iter::once(-1).chain(0..(g.r / 2 - 1).max(0));
    for ex in leave_outs {
        for bridge in 0..g.r as usize {
            let Some(s) = kagome_disk(&g, bridge, ex) else {
                break;
            };
            if let Some(s) = grow(map, &s, GROW_BUDGET) {
                if hamiltonian_boundary(map, &s).is_some() {
                    return certificate(map, lab, &s, Strategy::KagomeStrips);
                }
            }
            if g.s < 4 {
                // With a single strip the bridge choice is irrelevant.
                break;
            }
        }
    }
    Err(Error::ConstructionFailed("no strip arrangement yields a Hamiltonian disk".into()))
}

/// Dispatch on the generated type; `{3,12,12}` is refused.
pub fn construct_hamiltonian(map: &ToroidalMap, lab: &GridLabeling) -> Result<HamiltonianCertificate> {
    match lab.rep.map_type {
        MapType::Snub33344 => construct_33344(map, lab),
        MapType::Snub33434 => construct_33434(map, lab),
        MapType::Kagome => construct_3636(map, lab),
        MapType::Snub33336 => construct_33336(map, lab),
        MapType::Octagonal => construct_488(map, lab),
        MapType::Great4612 => construct_4612(map, lab),
        MapType::Rhombi3464 => construct_3464(map, lab),
        MapType::Dodecagonal => Err(Error::NonHamiltonianType(MapType::Dodecagonal.name())),
    }
}

/// Wrap an externally supplied cycle (e.g. a reference cycle) as a certificate,
/// deriving the disk from the faces on one side when it bounds one.
pub fn certificate_from_cycle(map: &ToroidalMap, lab: Option<&GridLabeling>, cycle: &[usize]) -> HamiltonianCertificate {
    let homology = lab.and_then(|l| homology_class(l, cycle));
    let disk = enclosed_faces(map, cycle)
        .filter(|s| disk_boundary(map, s).is_ok())
        .map(|s| {
            let mut fs: Vec<Vec<usize>> = s.iter().map(|&f| map.face(f).vertices.clone()).collect();
            fs.sort();
            fs
        });
    HamiltonianCertificate {
        cycle: cycle.to_vec(),
        contractible: disk.is_some(),
        strategy: Strategy::External,
        disk_faces: disk.unwrap_or_default(),
        homology,
    }
}

/// The side of a separating cycle that is a closed disk, if any (faces are
/// flood-filled across non-cycle edges; a non-separating cycle gives `None`).
pub fn enclosed_faces(map: &ToroidalMap, cycle: &[usize]) -> Option<Vec<usize>> {
    let on_cycle: HashSet<(usize, usize)> = cycle_edges(cycle).collect();
    let nf = map.faces().len();
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, f) in map.faces().iter().enumerate() {
        for e in f.edges() {
            by_edge.entry(e).or_default().push(i);
        }
    }
    let mut comp = vec![usize::MAX; nf];
    let mut sizes = Vec::new();
    for start in 0..nf {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut stack = vec![start];
        comp[start] = id;
        let mut size = 0;
        while let Some(f) = stack.pop() {
            size += 1;
            for e in map.face(f).edges() {
                if on_cycle.contains(&e) {
                    continue;
                }
                for &h in &by_edge[&e] {
                    if comp[h] == usize::MAX {
                        comp[h] = id;
                        stack.push(h);
                    }
                }
            }
        }
        sizes.push(size);
    }
    if sizes.len() != 2 {
        return None;
    }
    // The disk side is not necessarily the smaller one: the complement of a
    // disk on the torus is a punctured torus that may hold fewer faces.
    let side = |id: usize| -> Vec<usize> { (0..nf).filter(|&f| comp[f] == id).collect() };
    let (a, b) = (side(0), side(1));
    if is_disk(map, &a) && (!is_disk(map, &b) || a.len() <= b.len()) {
        Some(a)
    } else if is_disk(map, &b) {
        Some(b)
    } else {
        None
    }
}
