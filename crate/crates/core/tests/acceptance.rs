//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report always reaches stdout.
//! The process fails when a criterion outside [`KNOWN_UNATTAINABLE`] fails,
//! or when a criterion listed there unexpectedly passes (the list would then
//! be stale).

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use torus_ham_core::hamilton::{certificate_from_cycle, disk_boundary, verify_hamiltonian_cycle};
use torus_ham_core::oracle::{disk_boundary_length, extended_row_length, is_simple_cycle};
use torus_ham_core::tracer::{canonical_cycle, trace_report, trace_with_prefix};
use torus_ham_core::*;

/// Criteria whose expected outcome is contradicted by exact computation.
/// Criterion 4 expects `{3,12,12}` T(24,2,9) to be non-Hamiltonian; the
/// oracle finds (and the certificate checker accepts) a Hamiltonian cycle.
const KNOWN_UNATTAINABLE: &[u8] = &[4];

/// Sweep bound on the number of vertices.
const SWEEP_MAX_N: usize = 120;

type Check = std::result::Result<String, String>;

struct Outcome {
    id: u8,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn run(id: u8, f: impl FnOnce() -> Check) -> Outcome {
    let t = Instant::now();
    let r = f();
    let elapsed = t.elapsed();
    match r {
        Ok(detail) => Outcome { id, pass: true, detail, elapsed },
        Err(detail) => Outcome { id, pass: false, detail, elapsed },
    }
}

fn within(limit: Duration, t: Instant, what: &str) -> std::result::Result<(), String> {
    let e = t.elapsed();
    if e > limit {
        return Err(format!("{what} took {e:.2?}, limit {limit:?}"));
    }
    Ok(())
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x - 1).collect()
}

fn sweep(types: &[MapType]) -> Vec<(MapType, usize, usize, usize)> {
    types
        .iter()
        .flat_map(|&t| {
            admissible_parameters(t, SWEEP_MAX_N)
                .into_iter()
                .map(move |(r, s, k)| (t, r, s, k))
        })
        .collect()
}

fn criterion_1() -> Check {
    let t = Instant::now();
    let found: BTreeSet<String> = enumerate_types(3, 6).iter().map(|s| s.name()).collect();
    within(Duration::from_secs(1), t, "enumeration")?;
    let want: BTreeSet<String> = MapType::ALL.iter().map(|t| t.name()).collect();
    if found != want {
        return Err(format!("found {found:?}, want {want:?}"));
    }
    Ok(format!("{} types: {}", found.len(), found.iter().cloned().collect::<Vec<_>>().join(" ")))
}

fn criterion_2() -> Check {
    let t = Instant::now();
    let (m, lab) = generate(MapType::Kagome, 8, 2, 6).map_err(|e| e.to_string())?;
    if m.n() != 24 || m.map_type() != Some(MapType::Kagome) {
        return Err(format!("n = {}, type {:?}", m.n(), m.map_type()));
    }
    let cert = construct_hamiltonian(&m, &lab).map_err(|e| e.to_string())?;
    verify_certificate(&m, &cert).map_err(|e| e.to_string())?;
    if cert.cycle.len() != 24 || !cert.contractible {
        return Err("constructed cycle is not a contractible 24-cycle".into());
    }
    let reference = one_based(&[
        1, 9, 20, 13, 21, 14, 10, 15, 22, 16, 11, 17, 23, 18, 19, 12, 8, 7, 6, 5, 24, 4, 3, 2,
    ]);
    let pc = certificate_from_cycle(&m, Some(&lab), &reference);
    verify_certificate(&m, &pc).map_err(|e| format!("reference cycle: {e}"))?;
    if !pc.contractible {
        return Err("reference cycle does not bound a disk".into());
    }
    within(Duration::from_secs(1), t, "reproduction")?;
    Ok(format!(
        "n=24, constructed cycle ({}) and reference cycle both verified, contractible",
        cert.strategy.as_str()
    ))
}

fn criterion_3() -> Check {
    let t = Instant::now();
    let (m, lab) = generate(MapType::Snub33336, 9, 6, 2).map_err(|e| e.to_string())?;
    if m.n() != 54 {
        return Err(format!("n = {}", m.n()));
    }
    let hex: Vec<&FacialWalk> = m.faces().iter().filter(|f| f.size() == 6).collect();
    let covered: BTreeSet<usize> = hex.iter().flat_map(|f| f.vertices.iter().copied()).collect();
    if hex.len() != 9 || covered.len() != 54 {
        return Err(format!("{} hexagons covering {} vertices", hex.len(), covered.len()));
    }
    // The vertical Y1 path through the base row.
    let q = one_based(&[1, 10, 27, 19, 28, 45, 37, 46, 3]);
    if q.windows(2).any(|w| !m.is_edge(w[0], w[1])) {
        return Err("vertical path is not a path of the generated map".into());
    }
    let cert = construct_hamiltonian(&m, &lab).map_err(|e| e.to_string())?;
    verify_certificate(&m, &cert).map_err(|e| e.to_string())?;
    let ids: Vec<usize> = cert
        .disk_faces
        .iter()
        .filter_map(|f| m.face_by_vertices(f))
        .collect();
    let b = disk_boundary(&m, &ids)?;
    if !cert.contractible || cert.homology != Some((0, 0)) || b.len() != 54 {
        return Err(format!("contractible={} homology={:?}", cert.contractible, cert.homology));
    }
    within(Duration::from_secs(1), t, "reproduction")?;
    Ok(format!(
        "T(9,6,2): n=54, 9 disjoint hexagons cover V, disk of {} faces, homology (0,0)",
        cert.disk_faces.len()
    ))
}

fn criterion_4() -> Check {
    let (m, lab) = generate(MapType::Dodecagonal, 24, 2, 9).map_err(|e| e.to_string())?;
    if m.n() != 72 || (0..72).any(|v| m.degree(v) != 3) {
        return Err("not a cubic map on 72 vertices".into());
    }
    // A known 66-cycle in this map.
    let c66 = one_based(&[
        1, 24, 25, 31, 37, 38, 39, 40, 62, 68, 15, 14, 13, 12, 28, 34, 50, 49, 48, 47, 64, 70, 23, 22,
        21, 20, 30, 36, 57, 58, 59, 60, 61, 67, 11, 10, 9, 27, 8, 7, 72, 6, 5, 4, 26, 32, 41, 42, 43,
        44, 63, 69, 19, 18, 17, 16, 29, 35, 54, 53, 52, 51, 65, 71, 3, 2,
    ]);
    if c66.len() != 66 || !is_simple_cycle(m.rotation(), &c66) {
        return Err("the 66-cycle is not a simple cycle of the map".into());
    }
    let t = Instant::now();
    let verdict = find_hamiltonian(&m, SearchBudget::default());
    let elapsed = t.elapsed();
    match &verdict.status {
        Status::NonHamiltonian => {
            if elapsed > Duration::from_secs(60) {
                return Err(format!("exhaustive search took {elapsed:.2?}"));
            }
            Ok(format!(
                "NonHamiltonian after {} nodes; longest cycle in [66, 71]",
                verdict.nodes_explored
            ))
        }
        Status::Hamiltonian { cycle } => {
            let cert = certificate_from_cycle(&m, Some(&lab), cycle);
            let checked = verify_certificate(&m, &cert).is_ok();
            let bracket = longest_cycle(&m, SearchBudget::default(), Some(&c66));
            let mut others = 0;
            let mut ham = 0;
            for (r, s, k) in admissible_parameters(MapType::Dodecagonal, SWEEP_MAX_N) {
                let (mm, _) = generate(MapType::Dodecagonal, r, s, k).map_err(|e| e.to_string())?;
                others += 1;
                if find_hamiltonian(&mm, SearchBudget::default()).is_hamiltonian() {
                    ham += 1;
                }
            }
            Err(format!(
                "expected NonHamiltonian, but the oracle found a Hamiltonian cycle after {} nodes \
                 ({elapsed:.2?}); certificate check {}, homology {:?}, contractible {}; \
                 66-cycle valid, longest cycle = {} (exact={}); \
                 {ham}/{others} {{3,12,12}} instances with n <= {SWEEP_MAX_N} are Hamiltonian; \
                 witness {:?}",
                verdict.nodes_explored,
                if checked { "passed" } else { "FAILED" },
                cert.homology,
                cert.contractible,
                bracket.lower,
                bracket.exact,
                cycle,
            ))
        }
        Status::Inconclusive => Err(format!("inconclusive after {} nodes", verdict.nodes_explored)),
    }
}

fn criterion_5() -> Check {
    let t = Instant::now();
    let instances = sweep(&MapType::HAMILTONIAN);
    let mut failures = Vec::new();
    let mut per_type: BTreeMap<String, usize> = BTreeMap::new();
    let mut nodes = 0u64;
    for &(ty, r, s, k) in &instances {
        let tag = format!("{ty} T({r},{s},{k})");
        let (m, lab) = match generate(ty, r, s, k) {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("{tag}: {e}"));
                continue;
            }
        };
        match construct_hamiltonian(&m, &lab) {
            Ok(cert) => {
                if let Err(e) = verify_certificate(&m, &cert) {
                    failures.push(format!("{tag}: certificate: {e}"));
                }
            }
            Err(e) => failures.push(format!("{tag}: construct: {e}")),
        }
        let v = find_hamiltonian(&m, SearchBudget::new(200_000_000, Duration::from_secs(60)));
        nodes += v.nodes_explored;
        match v.cycle() {
            Some(c) => {
                if let Err(e) = verify_hamiltonian_cycle(&m, c) {
                    failures.push(format!("{tag}: oracle witness: {e}"));
                }
            }
            None => failures.push(format!("{tag}: oracle says {:?}", v.status)),
        }
        *per_type.entry(ty.name()).or_default() += 1;
    }
    within(Duration::from_secs(600), t, "sweep")?;
    if !failures.is_empty() {
        return Err(format!("{} failures, first: {}", failures.len(), failures[..failures.len().min(5)].join("; ")));
    }
    Ok(format!(
        "{} instances ({}) certified and oracle-confirmed; {nodes} oracle nodes",
        instances.len(),
        per_type.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" ")
    ))
}

/// Structural checks on one instance; returns counterexample descriptions.
/// Boundaries checked: those of the core's kind, and the non-kind star
/// boundaries of the layered types.
#[derive(Default)]
struct BoundaryTally {
    kind: usize,
    layered: usize,
}

fn structural_counterexamples(ty: MapType, r: usize, s: usize, k: usize, tally: &mut BoundaryTally) -> Vec<String> {
    let tag = format!("{ty} T({r},{s},{k})");
    let mut bad = Vec::new();
    let Ok((m, lab)) = generate(ty, r, s, k) else {
        return vec![format!("{tag}: generate failed")];
    };
    // Kind rules depend only on face sizes, so tracing commutes with
    // automorphisms: one seed per translation orbit of darts suffices, and
    // the remaining cycles are the translates of the traced ones.
    let shifts = translations(&m, &lab);
    let darts: BTreeSet<(usize, usize)> = m
        .edges()
        .into_iter()
        .flat_map(|(u, v)| [(u, v), (v, u)])
        .map(|(u, v)| shifts.iter().map(|p| (p[u], p[v])).min().expect("identity is a translation"))
        .collect();
    for kind in CycleKind::for_type(ty) {
        let mut cycles: BTreeSet<Vec<usize>> = BTreeSet::new();
        for &(u, v) in &darts {
            let seed = [u, v];
            match trace_report(&m, kind, &seed) {
                Ok(rep) => {
                    if let Some(x) = rep.non_simple.first() {
                        bad.push(format!("{tag}: {kind} walk from {seed:?} repeats {x}"));
                    }
                    for c in &rep.cycles {
                        for p in &shifts {
                            let image: Vec<usize> = c.iter().map(|&x| p[x]).collect();
                            cycles.insert(canonical_cycle(&image));
                        }
                    }
                }
                Err(e) => bad.push(format!("{tag}: {kind}: {e}")),
            }
        }
        let cycles: Vec<Vec<usize>> = cycles.into_iter().collect();
        let vertex_sharing = matches!(kind, CycleKind::A1 | CycleKind::A2 | CycleKind::A3);
        let edge_sharing = vertex_sharing || kind == CycleKind::B1;
        if edge_sharing {
            for (i, a) in cycles.iter().enumerate() {
                let av: BTreeSet<usize> = a.iter().copied().collect();
                let ae: BTreeSet<(usize, usize)> = edge_set(a);
                for b in &cycles[i + 1..] {
                    let shares = if vertex_sharing {
                        b.iter().any(|x| av.contains(x))
                    } else {
                        edge_set(b).iter().any(|e| ae.contains(e))
                    };
                    if shares {
                        bad.push(format!("{tag}: distinct {kind} cycles intersect"));
                    }
                }
            }
        }
    }
    // Cylinders over every row and uniform row lengths.
    let primary = CycleKind::primary(ty);
    let base: Vec<usize> = (0..r as i64).filter_map(|c| lab.vertex_at(0, c, 0)).collect();
    let core = match trace_with_prefix(&m, Some(&lab), primary, &base) {
        Ok(c) => c,
        Err(e) => return vec![format!("{tag}: base row: {e}")],
    };
    let family = match homologous_family(&m, &lab, &core) {
        Ok(f) => f,
        Err(e) => return vec![format!("{tag}: family: {e}")],
    };
    let len0 = family[0].len();
    if family.iter().any(|c| c.len() != len0 || c.homology != family[0].homology) {
        bad.push(format!("{tag}: homologous rows differ in length or class"));
    }
    // The star boundary of a row is a cycle of the row's kind except in the
    // layered types, where it runs through the intermediate vertices; the
    // equal-length claim concerns kind boundaries. All boundaries of one
    // family must still agree with each other.
    let layered = matches!(ty, MapType::Kagome | MapType::Dodecagonal);
    let mut lengths = BTreeSet::new();
    for c in &family {
        match build_cylinder(&m, Some(&lab), c) {
            Ok(cyl) => {
                for b in [&cyl.boundary.0, &cyl.boundary.1] {
                    lengths.insert(b.len());
                    if b.kind.is_some() {
                        tally.kind += 1;
                    } else if layered {
                        tally.layered += 1;
                    }
                    if b.kind.is_some() && b.len() != c.len() {
                        bad.push(format!("{tag}: {}-cycle bounded by a {}-cycle of its kind", c.len(), b.len()));
                    }
                    if b.kind.is_none() && !layered {
                        bad.push(format!("{tag}: cylinder boundary is not a {primary} cycle"));
                    }
                }
            }
            Err(e) => bad.push(format!("{tag}: cylinder: {e}")),
        }
    }
    if lengths.len() > 1 {
        bad.push(format!("{tag}: cylinder boundary lengths {lengths:?}"));
    }
    bad
}

/// Every translation of the cut that is an orientation-preserving
/// automorphism, as a vertex permutation (the identity included).
fn translations(m: &ToroidalMap, lab: &GridLabeling) -> Vec<Vec<usize>> {
    let rep = lab.rep;
    let mut out = Vec::new();
    for dr in 0..rep.s as i64 {
        for dc in 0..rep.r as i64 {
            let image: Option<Vec<usize>> = lab
                .coords()
                .iter()
                .map(|g| lab.vertex_at(g.row as i64 + dr, g.col as i64 + dc, g.layer))
                .collect();
            let Some(p) = image else { continue };
            let preserves = (0..m.n()).all(|v| {
                let mapped: Vec<usize> = m.neighbors(v).iter().map(|&w| p[w]).collect();
                let target = m.neighbors(p[v]);
                target.len() == mapped.len()
                    && (0..target.len()).any(|off| (0..target.len()).all(|i| target[(i + off) % target.len()] == mapped[i]))
            });
            if preserves {
                out.push(p);
            }
        }
    }
    out
}

fn edge_set(c: &[usize]) -> BTreeSet<(usize, usize)> {
    (0..c.len())
        .map(|i| {
            let (a, b) = (c[i], c[(i + 1) % c.len()]);
            (a.min(b), a.max(b))
        })
        .collect()
}

fn criterion_6() -> Check {
    let instances = sweep(&MapType::ALL);
    let mut bad = Vec::new();
    let mut tally = BoundaryTally::default();
    for &(ty, r, s, k) in &instances {
        bad.extend(structural_counterexamples(ty, r, s, k, &mut tally));
    }
    if !bad.is_empty() {
        if let Ok(p) = std::env::var("ACCEPTANCE_DUMP") {
            let _ = std::fs::write(p, bad.join("\n"));
        }
        return Err(format!("{} counterexamples, first: {}", bad.len(), bad[..bad.len().min(5)].join("; ")));
    }
    Ok(format!(
        "{} instances: closure, identity and family checks clean; {} kind boundaries match their core, {} layered star boundaries uniform",
        instances.len(),
        tally.kind,
        tally.layered
    ))
}

fn criterion_7() -> Check {
    let instances = sweep(&MapType::ALL);
    let mut bad = Vec::new();
    let mut seen: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    let mut slowest = Duration::ZERO;
    for &(ty, r, s, k) in &instances {
        let (m, _) = generate(ty, r, s, k).map_err(|e| e.to_string())?;
        let t = Instant::now();
        let kappa = vertex_connectivity(&m);
        slowest = slowest.max(t.elapsed());
        let d = ty.degree();
        let floor = (2 * (d + 1)).div_ceil(3);
        let ok = match ty {
            MapType::Octagonal | MapType::Dodecagonal | MapType::Great4612 => kappa == 3,
            _ => kappa >= 4,
        };
        if !ok || kappa < floor {
            bad.push(format!("{ty} T({r},{s},{k}): kappa {kappa}"));
        }
        seen.entry(ty.name()).or_default().insert(kappa);
    }
    if slowest > Duration::from_secs(5) {
        bad.push(format!("slowest instance took {slowest:.2?}"));
    }
    if !bad.is_empty() {
        return Err(format!("{} violations, first: {}", bad.len(), bad[..bad.len().min(5)].join("; ")));
    }
    Ok(format!(
        "{} instances; kappa by type: {}",
        instances.len(),
        seen.iter().map(|(t, k)| format!("{t}:{k:?}")).collect::<Vec<_>>().join(" ")
    ))
}

fn criterion_8() -> Check {
    let a = extended_row_length(24, 3, 15);
    let b = disk_boundary_length(5, 14);
    if a != 57 || b != 66 || a >= 72 || b >= 72 {
        return Err(format!("evaluators gave {a} and {b}"));
    }
    Ok("24 + 6*3 + 15 = 57 < 72; 10*5 + 14 + 2 = 66 < 72".into())
}

fn main() {
    // ACCEPTANCE_CRITERIA=2,5 restricts the run to those criteria.
    let only: Option<BTreeSet<u8>> = std::env::var("ACCEPTANCE_CRITERIA")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let all: [(u8, fn() -> Check); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let outcomes: Vec<Outcome> = all
        .into_iter()
        .filter(|(id, _)| only.as_ref().is_none_or(|o| o.contains(id)))
        .map(|(id, f)| run(id, f))
        .collect();
    let mut unexpected = 0;
    for o in &outcomes {
        let known = KNOWN_UNATTAINABLE.contains(&o.id);
        let status = if o.pass { "PASS" } else { "FAIL" };
        let note = if known { " [known unattainable]" } else { "" };
        println!("criterion {}: {status}{note} ({:.2?}) {}", o.id, o.elapsed, o.detail);
        if o.pass == known {
            unexpected += 1;
        }
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("acceptance: {passed}/{} PASS", outcomes.len());
    if unexpected > 0 {
        eprintln!("acceptance: {unexpected} criteria deviate from the recorded expectation");
        std::process::exit(1);
    }
}
