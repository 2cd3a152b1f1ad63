use thiserror::Error;

/// Errors raised while building, validating, tracing or certifying maps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("adjacency is not symmetric: {u} lists {v} but {v} does not list {u}")]
    NonSymmetricAdjacency { u: usize, v: usize },

    #[error("loop or repeated neighbour in the rotation of vertex {vertex}")]
    LoopOrMultiEdge { vertex: usize },

    #[error("graph is disconnected ({components} components)")]
    DisconnectedGraph { components: usize },

    #[error("Euler characteristic is {euler}, expected 0 for the torus")]
    NonToroidal { euler: i64 },

    #[error("map is not polyhedral: {0}")]
    NonPolyhedral(String),

    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertex {vertex} has face sequence {found}, expected {expected}")]
    NotSemiEquivelar {
        vertex: usize,
        expected: String,
        found: String,
    },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("{kind} rule violated at vertex {vertex}: {reason}")]
    RuleViolation {
        kind: String,
        vertex: usize,
        reason: String,
    },

    #[error("{kind} walk is not simple: vertex {vertex} repeats")]
    NonSimple { kind: String, vertex: usize },

    #[error("{kind} seed admits {count} distinct cycles; give a longer seed")]
    Ambiguous { kind: String, count: usize },

    #[error("kind {kind} does not apply to maps of type {map_type}")]
    KindMismatch { kind: String, map_type: String },

    #[error("odd number of rows (s = {s}) and the odd-row repair failed")]
    OddRowCount { s: usize },

    #[error("no Hamiltonian construction exists for type {0}")]
    NonHamiltonianType(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("malformed map document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
