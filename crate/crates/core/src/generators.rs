//! Planar-cut generators for the eight torus types.
//!
//! Every type is described by a periodic template on a strip of horizontal
//! rows. A vertex of the universal cover is addressed by `(row, layer, col)`:
//! layer 0 holds the vertices of a horizontal row, higher layers hold the
//! intermediate vertices of the band above it (the apexes of the kagome and
//! `{3,12,12}` patterns). Rows repeat with period `s`; passing over the top
//! row re-enters at the bottom shifted by `K = k + e` columns, where `e` is a
//! per-type landing offset. Columns repeat with period `r`.
//!
//! Rotations are obtained by sorting neighbours by angle in the template's
//! drawing, so only the layering and horizontal order of positions matter.
//! Every candidate is validated by [`ToroidalMap::new`] and
//! [`ToroidalMap::verify_semi_equivelar`]; parameters are never repaired.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::face_type::MapType;
use crate::map::ToroidalMap;

/// The `(r, s, k)` parameters of a planar cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Representation {
    pub map_type: MapType,
    pub r: usize,
    pub s: usize,
    pub k: usize,
}

/// Position of a vertex in the planar cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridCoord {
    pub row: usize,
    pub layer: usize,
    pub col: usize,
}

/// Coordinates of every vertex plus the lift data needed for homology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridLabeling {
    pub rep: Representation,
    coords: Vec<GridCoord>,
    index: HashMap<GridCoord, usize>,
    /// Per rotation slot: the neighbour and `(p, q)`, the number of horizontal
    /// and vertical period crossings of that dart in the universal cover.
    voltages: Vec<Vec<(usize, i64, i64)>>,
}

impl GridLabeling {
    pub fn coords(&self) -> &[GridCoord] {
        &self.coords
    }

    pub fn coord(&self, v: usize) -> GridCoord {
        self.coords[v]
    }

    /// Shift applied when wrapping from the top row to the bottom row.
    pub fn wrap_shift(&self) -> i64 {
        (self.rep.k + extra_shift(self.rep.map_type)) as i64
    }

    /// Vertex at cover position `(row, layer, col)` after reduction into the cut.
    pub fn vertex_at(&self, row: i64, col: i64, layer: usize) -> Option<usize> {
        let (key, _, _) = canonical(
            (row, layer, col),
            self.rep.r as i64,
            self.rep.s as i64,
            self.wrap_shift(),
        );
        self.index.get(&key).copied()
    }

    /// Period crossings `(p, q)` of the dart `v -> w`, if it is an edge.
    pub fn voltage(&self, v: usize, w: usize) -> Option<(i64, i64)> {
        self.voltages
            .get(v)?
            .iter()
            .find(|x| x.0 == w)
            .map(|&(_, p, q)| (p, q))
    }

    /// Net crossings of a closed walk; `None` if some step is not an edge.
    pub fn winding(&self, cycle: &[usize]) -> Option<(i64, i64)> {
        let k = cycle.len();
        let mut acc = (0, 0);
        for i in 0..k {
            let (p, q) = self.voltage(cycle[i], cycle[(i + 1) % k])?;
            acc.0 += p;
            acc.1 += q;
        }
        Some(acc)
    }
}

/// Landing offset `e` added to `k` when the top row wraps to the bottom.
fn extra_shift(t: MapType) -> usize {
    match t {
        MapType::Snub33336 => 1,
        _ => 0,
    }
}

fn layers(t: MapType) -> usize {
    match t {
        MapType::Kagome => 2,
        MapType::Dodecagonal => 3,
        _ => 1,
    }
}

fn has_vertex(t: MapType, layer: usize, col: i64) -> bool {
    match t {
        MapType::Kagome => layer == 0 || col.rem_euclid(2) == 0,
        MapType::Dodecagonal => layer == 0 || col.rem_euclid(4) == 0,
        _ => layer == 0,
    }
}

type Key = (i64, usize, i64);

pub(crate) fn phi_4612(b: i64) -> i64 {
    if matches!(b.rem_euclid(4), 1 | 2) {
        3
    } else {
        0
    }
}

pub(crate) fn phi_3464(b: i64) -> i64 {
    b.div_euclid(2).rem_euclid(3)
}

/// Template neighbours of a cover vertex (unordered).
fn template_neighbors(t: MapType, (b, j, c): Key) -> Vec<Key> {
    let mut out: Vec<Key> = Vec::with_capacity(6);
    let row = |out: &mut Vec<Key>| {
        out.push((b, 0, c + 1));
        out.push((b, 0, c - 1));
    };
    match t {
        MapType::Snub33344 => {
            row(&mut out);
            if b.rem_euclid(2) == 0 {
                out.extend([(b + 1, 0, c), (b - 1, 0, c), (b - 1, 0, c + 1)]);
            } else {
                out.extend([(b - 1, 0, c), (b + 1, 0, c), (b + 1, 0, c - 1)]);
            }
        }
        MapType::Snub33434 => {
            row(&mut out);
            out.extend([(b + 1, 0, c), (b - 1, 0, c)]);
            let even_c = c.rem_euclid(2) == 0;
            match (b.rem_euclid(2) == 0, even_c) {
                (true, true) => out.push((b + 1, 0, c - 1)),
                (true, false) => out.push((b - 1, 0, c - 1)),
                (false, true) => out.push((b + 1, 0, c + 1)),
                (false, false) => out.push((b - 1, 0, c + 1)),
            }
        }
        MapType::Kagome => {
            if j == 1 {
                out.extend([(b, 0, c), (b, 0, c + 1), (b + 1, 0, c), (b + 1, 0, c - 1)]);
            } else {
                row(&mut out);
                if c.rem_euclid(2) == 0 {
                    out.extend([(b, 1, c), (b - 1, 1, c)]);
                } else {
                    out.extend([(b, 1, c - 1), (b - 1, 1, c + 1)]);
                }
            }
        }
        MapType::Snub33336 => {
            row(&mut out);
            // Rungs from a lower row of a triangle band to the row above it.
            fn tri_up(m: i64) -> &'static [i64] {
                match m {
                    0 => &[-1, 0, 1],
                    1 => &[0],
                    _ => &[-1, 0],
                }
            }
            let m = c.rem_euclid(3);
            if b.rem_euclid(2) == 0 {
                out.extend(tri_up(m).iter().map(|d| (b + 1, 0, c + d)));
                let down: &[i64] = match m {
                    0 => &[],
                    1 => &[1, 2],
                    _ => &[1],
                };
                out.extend(down.iter().map(|d| (b - 1, 0, c + d)));
            } else {
                let up: &[i64] = match m {
                    0 => &[-1, -2],
                    1 => &[],
                    _ => &[-1],
                };
                out.extend(up.iter().map(|d| (b + 1, 0, c + d)));
                // Inverse of `tri_up` seen from the upper row.
                for d in -2..=2 {
                    let lc = c + d;
                    if tri_up(lc.rem_euclid(3)).iter().any(|u| lc + u == c) {
                        out.push((b - 1, 0, c + d));
                    }
                }
            }
        }
        MapType::Octagonal => {
            row(&mut out);
            if matches!((c - 2 * b).rem_euclid(4), 0 | 1) {
                out.push((b + 1, 0, c));
            }
            if matches!((c - 2 * (b - 1)).rem_euclid(4), 0 | 1) {
                out.push((b - 1, 0, c));
            }
        }
        MapType::Dodecagonal => match j {
            1 => {
                let right = if b == 0 { c } else { c - 1 };
                out.extend([(b, 0, right - 1), (b, 0, right), (b, 2, c)]);
            }
            2 => out.extend([(b + 1, 0, c), (b + 1, 0, c + 1), (b, 1, c)]),
            _ => {
                row(&mut out);
                let m = c.rem_euclid(4);
                let extra = if b == 0 {
                    match m {
                        3 => (b, 1, c + 1),
                        0 => (b, 1, c),
                        1 => (b - 1, 2, c),
                        _ => (b - 1, 2, c - 1),
                    }
                } else {
                    match m {
                        2 => (b, 1, c + 2),
                        3 => (b, 1, c + 1),
                        0 => (b - 1, 2, c),
                        _ => (b - 1, 2, c - 1),
                    }
                };
                out.push(extra);
            }
        },
        MapType::Great4612 => {
            row(&mut out);
            let jj = (c - phi_4612(b)).rem_euclid(6);
            let diag = if matches!(jj, 1 | 2) { -1 } else { 1 };
            let rung = matches!(jj, 0 | 5);
            if b.rem_euclid(2) == 1 {
                out.push(if rung { (b + 1, 0, c) } else { (b - 1, 0, c + diag) });
            } else {
                out.push(if rung { (b - 1, 0, c) } else { (b + 1, 0, c + diag) });
            }
        }
        MapType::Rhombi3464 => {
            row(&mut out);
            let jj = (c - phi_3464(b)).rem_euclid(3);
            let rung = matches!(jj, 0 | 2);
            if b.rem_euclid(2) == 0 {
                if rung {
                    out.push((b + 1, 0, c));
                }
                let down: &[i64] = match jj {
                    0 => &[0],
                    1 => &[0, 1],
                    _ => &[1],
                };
                out.extend(down.iter().map(|d| (b - 1, 0, c + d)));
            } else {
                if rung {
                    out.push((b - 1, 0, c));
                }
                let up: &[i64] = match jj {
                    0 => &[-1],
                    1 => &[-1, 0],
                    _ => &[0],
                };
                out.extend(up.iter().map(|d| (b + 1, 0, c + d)));
            }
        }
    }
    out
}

/// Drawing position used only to order neighbours by angle.
fn position(t: MapType, (b, j, c): Key) -> (f64, f64) {
    let (b, c) = (b as f64, c as f64);
    match t {
        MapType::Snub33344 => (c + 0.5 * (b / 2.0).floor(), 10.0 * b),
        MapType::Kagome => {
            if j == 0 {
                (c, 10.0 * b)
            } else {
                (c + 0.5, 10.0 * b + 5.0)
            }
        }
        MapType::Dodecagonal => match j {
            0 => (c, 10.0 * b),
            1 => (c - if b == 0.0 { 0.5 } else { 1.5 }, 10.0 * b + 3.0),
            _ => (c + 0.5, 10.0 * b + 6.0),
        },
        _ => (c, 10.0 * b),
    }
}

/// Reduce a cover key into the cut, returning the key and the `(p, q)` crossings.
fn canonical((mut b, j, mut c): Key, r: i64, s: i64, shift: i64) -> (GridCoord, i64, i64) {
    let mut q = 0;
    while b >= s {
        b -= s;
        c += shift;
        q += 1;
    }
    while b < 0 {
        b += s;
        c -= shift;
        q -= 1;
    }
    let p = c.div_euclid(r);
    (
        GridCoord {
            row: b as usize,
            layer: j,
            col: c.rem_euclid(r) as usize,
        },
        p,
        q,
    )
}

/// Closed-form vertex count of the cut.
pub fn vertex_count(t: MapType, r: usize, s: usize) -> usize {
    match t {
        MapType::Kagome | MapType::Dodecagonal => r * s * 3 / 2,
        _ => r * s,
    }
}

/// Build the map with parameters `(r, s, k)` and its grid labelling.
pub fn generate(t: MapType, r: usize, s: usize, k: usize) -> Result<(ToroidalMap, GridLabeling)> {
    if r == 0 || s == 0 {
        return Err(Error::InvalidParameters("r and s must be positive".into()));
    }
    if k >= r {
        return Err(Error::InvalidParameters(format!("k = {k} must be < r = {r}")));
    }
    if matches!(t, MapType::Kagome | MapType::Dodecagonal) && r % 2 == 1 {
        return Err(Error::InvalidParameters(format!(
            "{t} needs an even r (alternating face pattern)"
        )));
    }
    let (ri, si) = (r as i64, s as i64);
    let shift = (k + extra_shift(t)) as i64;

    let mut coords = Vec::new();
    for b in 0..s {
        for j in 0..layers(t) {
            for c in 0..r {
                if has_vertex(t, j, c as i64) {
                    coords.push(GridCoord { row: b, layer: j, col: c });
                }
            }
        }
    }
    let index: HashMap<GridCoord, usize> =
        coords.iter().enumerate().map(|(i, &g)| (g, i)).collect();

    let mut rotation = Vec::with_capacity(coords.len());
    let mut voltages = Vec::with_capacity(coords.len());
    for g in &coords {
        let key = (g.row as i64, g.layer, g.col as i64);
        let (x0, y0) = position(t, key);
        let mut items: Vec<(f64, usize, (i64, i64))> = Vec::new();
        for nk in template_neighbors(t, key) {
            let (x1, y1) = position(t, nk);
            let (cg, p, q) = canonical(nk, ri, si, shift);
            let Some(&w) = index.get(&cg) else {
                return Err(Error::InvalidParameters(format!(
                    "wrap shift k = {k} lands between sublattice sites"
                )));
            };
            items.push(((y1 - y0).atan2(x1 - x0), w, (p, q)));
        }
        items.sort_by(|a, b| a.0.total_cmp(&b.0));
        rotation.push(items.iter().map(|it| it.1).collect::<Vec<_>>());
        voltages.push(items.iter().map(|it| (it.1, it.2 .0, it.2 .1)).collect::<Vec<_>>());
    }

    let map = ToroidalMap::new(rotation)
        .map_err(|e| Error::InvalidParameters(format!("({r},{s},{k}): {e}")))?;
    let seq = map
        .verify_semi_equivelar()
        .map_err(|e| Error::InvalidParameters(format!("({r},{s},{k}): {e}")))?;
    if seq != t.sequence() {
        return Err(Error::InvalidParameters(format!(
            "({r},{s},{k}) produced type {seq}, not {t}"
        )));
    }
    debug_assert_eq!(map.n(), vertex_count(t, r, s));
    let labeling = GridLabeling {
        rep: Representation { map_type: t, r, s, k },
        coords,
        index,
        voltages,
    };
    Ok((map, labeling))
}

/// All `(r, s, k)` with `n <= max_n` for which [`generate`] succeeds, ascending.
pub fn admissible_parameters(t: MapType, max_n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for r in 1..=max_n {
        for s in 1..=max_n {
            if vertex_count(t, r, s) > max_n {
                break;
            }
            if !quick_admissible(t, r, s) {
                continue;
            }
            for k in 0..r {
                if generate(t, r, s, k).is_ok() {
                    out.push((r, s, k));
                }
            }
        }
    }
    out
}

/// Necessary period conditions, used only to skip hopeless candidates in
/// sweeps. [`generate`] remains the authority.
fn quick_admissible(t: MapType, r: usize, s: usize) -> bool {
    match t {
        MapType::Snub33344 => s % 2 == 0,
        MapType::Snub33434 => r % 2 == 0 && s % 2 == 0,
        MapType::Kagome => r % 2 == 0,
        MapType::Snub33336 => r % 3 == 0 && s % 2 == 0,
        MapType::Octagonal => r % 4 == 0,
        MapType::Dodecagonal => r % 4 == 0,
        MapType::Great4612 => r % 6 == 0 && s % 2 == 0,
        MapType::Rhombi3464 => r % 3 == 0 && s % 2 == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kagome_8_2_6_has_24_vertices() {
        let (m, lab) = generate(MapType::Kagome, 8, 2, 6).unwrap();
        assert_eq!(m.n(), 24);
        assert_eq!(m.num_edges(), 48);
        assert_eq!(m.faces().len(), 24);
        assert_eq!(lab.coords().len(), 24);
    }

    #[test]
    fn dodecagonal_24_2_9_is_cubic_on_72_vertices() {
        let (m, _) = generate(MapType::Dodecagonal, 24, 2, 9).unwrap();
        assert_eq!(m.n(), 72);
        assert!((0..72).all(|v| m.degree(v) == 3));
    }

    #[test]
    fn vertex_count_matches_generator() {
        for t in MapType::ALL {
            for (r, s, k) in admissible_parameters(t, 48) {
                let (m, _) = generate(t, r, s, k).unwrap();
                assert_eq!(m.n(), vertex_count(t, r, s), "{t} ({r},{s},{k})");
            }
        }
    }

    #[test]
    fn rejects_shift_out_of_range() {
        assert!(matches!(
            generate(MapType::Snub33344, 4, 2, 4),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn rejects_odd_r_for_kagome() {
        assert!(generate(MapType::Kagome, 7, 2, 0).is_err());
    }

    #[test]
    fn tiny_max_n_gives_nothing() {
        for t in MapType::ALL {
            assert!(admissible_parameters(t, 1).is_empty());
        }
    }

    #[test]
    fn quick_filters_do_not_drop_valid_instances() {
        for t in MapType::ALL {
            for r in 1..=24 {
                for s in 1..=4 {
                    if vertex_count(t, r, s) > 72 {
                        continue;
                    }
                    for k in 0..r {
                        if generate(t, r, s, k).is_ok() {
                            assert!(quick_admissible(t, r, s), "{t} ({r},{s},{k})");
                        }
                    }
                }
            }
        }
    }
}
