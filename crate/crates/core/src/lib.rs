//! Toroidal semi-equivelar maps: generation, kind-cycle tracing,
//! Hamiltonian-cycle constructions and an exact search oracle.

pub mod error;
pub mod face_type;
pub mod generators;
pub mod hamilton;
pub mod io;
pub mod map;
pub mod oracle;
pub mod tracer;

pub use error::{Error, Result};
pub use face_type::{enumerate_types, FaceSequence, MapType};
pub use generators::{admissible_parameters, generate, vertex_count, GridCoord, GridLabeling, Representation};
pub use map::{Dart, FacialWalk, RotationSystem, ToroidalMap};
pub use tracer::{build_cylinder, homologous_family, homology_class, successor, trace_all, trace_cycle, CycleKind, Cylinder, TracedCycle};
pub use hamilton::{construct_hamiltonian, verify_certificate, CertificateViolation, HamiltonianCertificate, Strategy};
pub use oracle::{find_hamiltonian, longest_cycle, vertex_connectivity, LongestCycle, OracleVerdict, SearchBudget, Status};
pub use io::{map_from_json, map_to_json, to_dot, MapDocument};
