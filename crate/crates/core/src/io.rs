//! Map files (JSON) and Graphviz export.
//!
//! The JSON layout is `{"type", "n", "rotation", "labeling"?}` with 0-based
//! vertex ids and counter-clockwise neighbour lists. When a `labeling` block
//! is present the importer regenerates the map from `(type, r, s, k)` and
//! insists that the rotations agree, so a labelled file can never carry
//! coordinates that disagree with its adjacency.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::face_type::MapType;
use crate::generators::{generate, GridCoord, GridLabeling};
use crate::map::ToroidalMap;

/// On-disk form of a map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDocument {
    #[serde(rename = "type")]
    pub map_type: String,
    pub n: usize,
    pub rotation: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labeling: Option<LabelingDocument>,
}

/// Parameters and per-vertex coordinates of a generated map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingDocument {
    pub r: usize,
    pub s: usize,
    pub k: usize,
    pub coords: Vec<GridCoord>,
}

impl MapDocument {
    pub fn new(map: &ToroidalMap, lab: Option<&GridLabeling>) -> Self {
        let map_type = lab
            .map(|l| l.rep.map_type)
            .or_else(|| map.map_type())
            .map(|t| t.name())
            .unwrap_or_default();
        MapDocument {
            map_type,
            n: map.n(),
            rotation: map.rotation().to_vec(),
            labeling: lab.map(|l| LabelingDocument {
                r: l.rep.r,
                s: l.rep.s,
                k: l.rep.k,
                coords: l.coords().to_vec(),
            }),
        }
    }

    /// Validate and rebuild the map (and labeling, if present).
    pub fn load(&self) -> Result<(ToroidalMap, Option<GridLabeling>)> {
        if self.rotation.len() != self.n {
            return Err(Error::Format(format!(
                "n = {} but {} rotation lists given",
                self.n,
                self.rotation.len()
            )));
        }
        let declared: MapType = self.map_type.parse()?;
        let map = ToroidalMap::new(self.rotation.clone())?;
        let found = map.verify_semi_equivelar()?;
        if MapType::from_sequence(&found) != Some(declared) {
            return Err(Error::Format(format!(
                "declared type {declared} but vertices have sequence {}",
                found.name()
            )));
        }
        let Some(ld) = &self.labeling else {
            return Ok((map, None));
        };
        let (regen, lab) = generate(declared, ld.r, ld.s, ld.k)?;
        if regen.rotation() != map.rotation() {
            return Err(Error::Format(format!(
                "rotation does not match generate({declared}, {}, {}, {})",
                ld.r, ld.s, ld.k
            )));
        }
        if lab.coords() != ld.coords.as_slice() {
            return Err(Error::Format("labeling coordinates do not match the parameters".into()));
        }
        Ok((map, Some(lab)))
    }
}

/// Serialize a map as pretty JSON with a trailing newline. Deterministic.
pub fn map_to_json(map: &ToroidalMap, lab: Option<&GridLabeling>) -> String {
    let mut s = serde_json::to_string_pretty(&MapDocument::new(map, lab)).expect("map documents always serialize");
    s.push('\n');
    s
}

/// Parse and validate a map file.
pub fn map_from_json(text: &str) -> Result<(ToroidalMap, Option<GridLabeling>)> {
    let doc: MapDocument = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    doc.load()
}

/// Graphviz rendering of the underlying graph. Edges of `highlight` (a
/// closed cycle) are drawn bold red; everything else is plain.
pub fn to_dot(map: &ToroidalMap, highlight: Option<&[usize]>) -> String {
    let marked: BTreeSet<(usize, usize)> = highlight
        .map(|c| {
            (0..c.len())
                .map(|i| {
                    let (a, b) = (c[i], c[(i + 1) % c.len()]);
                    (a.min(b), a.max(b))
                })
                .collect()
        })
        .unwrap_or_default();
    let mut out = String::from("graph torus {\n  node [shape=circle, fontsize=10];\n");
    for v in 0..map.n() {
        let _ = writeln!(out, "  {v};");
    }
    for (u, v) in map.edges() {
        if marked.contains(&(u, v)) {
            let _ = writeln!(out, "  {u} -- {v} [color=red, penwidth=3];");
        } else {
            let _ = writeln!(out, "  {u} -- {v};");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labelled_round_trip_is_byte_identical() {
        let (m, lab) = generate(MapType::Kagome, 8, 2, 6).unwrap();
        let a = map_to_json(&m, Some(&lab));
        let (m2, lab2) = map_from_json(&a).unwrap();
        assert_eq!(a, map_to_json(&m2, lab2.as_ref()));
    }

    #[test]
    fn tampered_labeling_is_rejected() {
        let (m, lab) = generate(MapType::Kagome, 8, 2, 6).unwrap();
        let mut doc = MapDocument::new(&m, Some(&lab));
        doc.labeling.as_mut().unwrap().k = 4;
        assert!(matches!(doc.load(), Err(Error::Format(_)) | Err(Error::InvalidParameters(_))));
    }

    #[test]
    fn wrong_declared_type_is_rejected() {
        let (m, _) = generate(MapType::Kagome, 8, 2, 6).unwrap();
        let mut doc = MapDocument::new(&m, None);
        doc.map_type = "4.8.8".into();
        assert!(doc.load().is_err());
    }

    #[test]
    fn dot_marks_cycle_edges() {
        let (m, _) = generate(MapType::Kagome, 8, 2, 6).unwrap();
        let dot = to_dot(&m, Some(&[0, 1, 8]));
        assert!(dot.starts_with("graph torus {"));
        let red = dot.matches("color=red").count();
        // Only the edges of the walk that exist are drawn; 0-1 is a row edge.
        assert!(red >= 1 && red <= 3);
        assert_eq!(dot.matches(" -- ").count(), m.num_edges());
    }
}
