//! Face-sequence types and the Euler-balance enumeration.
//!
//! A vertex of a semi-equivelar map sees a cyclic sequence of face sizes.
//! Sequences are stored in a canonical form: the lexicographically smallest
//! rotation or reflection, so `6.3.6.3` and `3.6.3.6` compare equal.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A cyclic face-size sequence in canonical (rotation/reflection minimal) form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceSequence(Vec<usize>);

impl FaceSequence {
    pub fn new(seq: &[usize]) -> Self {
        FaceSequence(canonical_cyclic(seq))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// Vertex degree `d`.
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Face size `t` mapped to the count `d_t` of its occurrences.
    pub fn incidence(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &t in &self.0 {
            *m.entry(t).or_insert(0) += 1;
        }
        m
    }

    /// `d/2 - 1 == sum d_t / t`, evaluated exactly over a common denominator.
    pub fn euler_balanced(&self) -> bool {
        euler_balanced(&self.0)
    }

    /// True when only one face size occurs (equivelar maps such as `{4,4}`).
    pub fn is_equivelar(&self) -> bool {
        self.0.iter().all(|&t| t == self.0[0])
    }

    /// Dotted notation, e.g. `3.3.3.4.4`.
    pub fn name(&self) -> String {
        self.0
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Power notation, e.g. `{3^3,4^2}` (runs of equal sizes are merged).
    pub fn power_notation(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            let run = j - i;
            if run == 1 {
                parts.push(self.0[i].to_string());
            } else {
                parts.push(format!("{}^{}", self.0[i], run));
            }
            i = j;
        }
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Display for FaceSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for FaceSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut seq = Vec::new();
        for part in trimmed.split(['.', ',']) {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (b, e),
                None => (part, "1"),
            };
            let base: usize = base
                .parse()
                .map_err(|_| Error::Format(format!("bad face size {part:?} in {s:?}")))?;
            let exp: usize = exp
                .parse()
                .map_err(|_| Error::Format(format!("bad exponent in {part:?}")))?;
            seq.extend(std::iter::repeat_n(base, exp));
        }
        if seq.len() < 3 || seq.iter().any(|&t| t < 3) {
            return Err(Error::Format(format!("not a face sequence: {s:?}")));
        }
        Ok(FaceSequence::new(&seq))
    }
}

fn canonical_cyclic(seq: &[usize]) -> Vec<usize> {
    let d = seq.len();
    let mut best: Option<Vec<usize>> = None;
    let rev: Vec<usize> = seq.iter().rev().copied().collect();
    for base in [seq, &rev[..]] {
        for i in 0..d {
            let cand: Vec<usize> = base[i..].iter().chain(&base[..i]).copied().collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

fn euler_balanced(seq: &[usize]) -> bool {
    // d/2 - 1 = sum 1/t  <=>  (d - 2) * L = 2 * sum L/t  with L = lcm of sizes.
    let l = seq.iter().fold(1u64, |acc, &t| lcm(acc, t as u64));
    let lhs = (seq.len() as i64 - 2) * l as i64;
    let rhs: i64 = seq.iter().map(|&t| 2 * (l / t as u64) as i64).sum();
    lhs == rhs
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// The eight semi-equivelar types that tile the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MapType {
    /// `{3^3,4^2}`
    Snub33344,
    /// `{3^2,4,3,4}`
    Snub33434,
    /// `{6,3,6,3}` (kagome)
    Kagome,
    /// `{3^4,6}`
    Snub33336,
    /// `{4,8^2}`
    Octagonal,
    /// `{3,12^2}`
    Dodecagonal,
    /// `{4,6,12}`
    Great4612,
    /// `{6,4,3,4}`
    Rhombi3464,
}

impl MapType {
    pub const ALL: [MapType; 8] = [
        MapType::Snub33344,
        MapType::Snub33434,
        MapType::Kagome,
        MapType::Snub33336,
        MapType::Octagonal,
        MapType::Dodecagonal,
        MapType::Great4612,
        MapType::Rhombi3464,
    ];

    /// The seven types carrying a Hamiltonian construction.
    pub const HAMILTONIAN: [MapType; 7] = [
        MapType::Snub33344,
        MapType::Snub33434,
        MapType::Kagome,
        MapType::Snub33336,
        MapType::Octagonal,
        MapType::Great4612,
        MapType::Rhombi3464,
    ];

    pub fn sequence(self) -> FaceSequence {
        let raw: &[usize] = match self {
            MapType::Snub33344 => &[3, 3, 3, 4, 4],
            MapType::Snub33434 => &[3, 3, 4, 3, 4],
            MapType::Kagome => &[3, 6, 3, 6],
            MapType::Snub33336 => &[3, 3, 3, 3, 6],
            MapType::Octagonal => &[4, 8, 8],
            MapType::Dodecagonal => &[3, 12, 12],
            MapType::Great4612 => &[4, 6, 12],
            MapType::Rhombi3464 => &[3, 4, 6, 4],
        };
        FaceSequence::new(raw)
    }

    /// Canonical dotted name, used in map files and manifests.
    pub fn name(self) -> String {
        self.sequence().name()
    }

    pub fn degree(self) -> usize {
        self.sequence().degree()
    }

    pub fn from_sequence(seq: &FaceSequence) -> Option<MapType> {
        MapType::ALL.into_iter().find(|t| t.sequence() == *seq)
    }
}

impl fmt::Display for MapType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for MapType {
    type Err = Error;

    /// Accepts any rotation or reflection in dotted or power notation.
    fn from_str(s: &str) -> Result<Self> {
        let seq: FaceSequence = s.parse()?;
        MapType::from_sequence(&seq)
            .ok_or_else(|| Error::Format(format!("{s:?} is not one of the eight torus types")))
    }
}

/// Enumerate cyclic face sequences of degree `min_degree..=max_degree` that
/// satisfy Euler balance and admit a consistent labelling around every
/// odd-sized face, dropping equivelar sequences.
///
/// The local condition: walking around a `p`-gon, each edge separates it from
/// a neighbouring face, and at each corner the two neighbours must match some
/// occurrence of `p` in the vertex sequence. A labelling exists iff the
/// "neighbour pair" graph has a closed walk of length `p`.
pub fn enumerate_types(min_degree: usize, max_degree: usize) -> Vec<FaceSequence> {
    let mut found = std::collections::BTreeSet::new();
    for d in min_degree.max(3)..=max_degree {
        let mut seq = vec![3usize; d];
        enumerate_rec(&mut seq, 0, 3, d as f64 / 2.0 - 1.0, &mut found);
    }
    found
        .into_iter()
        .filter(|s| !s.is_equivelar() && vertex_type_realisable(s.entries()))
        .collect()
}

/// Nondecreasing face sizes whose reciprocals sum to `budget`; floating point
/// only prunes, the final test is exact.
fn enumerate_rec(
    seq: &mut Vec<usize>,
    pos: usize,
    min_t: usize,
    budget: f64,
    out: &mut std::collections::BTreeSet<FaceSequence>,
) {
    const EPS: f64 = 1e-9;
    if pos == seq.len() {
        if budget.abs() < EPS && euler_balanced(seq) {
            let mut perm = seq.clone();
            permute_unique(&mut perm, 0, &mut |p| {
                out.insert(FaceSequence::new(p));
            });
        }
        return;
    }
    if budget < EPS {
        return;
    }
    let remaining = (seq.len() - pos) as f64;
    let mut t = min_t;
    loop {
        // Every later size is >= t, so the rest contributes at most remaining/t.
        if remaining / t as f64 + EPS < budget {
            break;
        }
        // One term of 1/t must still leave a non-negative budget.
        if 1.0 / t as f64 <= budget + EPS {
            seq[pos] = t;
            enumerate_rec(seq, pos + 1, t, budget - 1.0 / t as f64, out);
        }
        t += 1;
    }
}

fn permute_unique(v: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    let mut seen = Vec::new();
    for i in k..v.len() {
        if seen.contains(&v[i]) {
            continue;
        }
        seen.push(v[i]);
        v.swap(k, i);
        permute_unique(v, k + 1, f);
        v.swap(k, i);
    }
}

fn vertex_type_realisable(seq: &[usize]) -> bool {
    let d = seq.len();
    let sizes: std::collections::BTreeSet<usize> = seq.iter().copied().collect();
    for &p in &sizes {
        // Allowed (left, right) neighbour pairs of a p-gon at a corner.
        let mut pairs = std::collections::BTreeSet::new();
        for i in 0..d {
            if seq[i] == p {
                let a = seq[(i + d - 1) % d];
                let b = seq[(i + 1) % d];
                pairs.insert((a, b));
                pairs.insert((b, a));
            }
        }
        // Labels are the edge-neighbour sizes; a corner joins two labels.
        let labels: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let mut ok = false;
        for &start in &labels {
            // reachable[l] after m steps, starting from `start`
            let mut cur: std::collections::BTreeSet<usize> = [start].into();
            for _ in 0..p {
                cur = pairs
                    .iter()
                    .filter(|(a, _)| cur.contains(a))
                    .map(|&(_, b)| b)
                    .collect();
            }
            if cur.contains(&start) {
                ok = true;
                break;
            }
        }
        if !ok {
            return false;
        }
    }
    true
}
