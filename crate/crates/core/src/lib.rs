//! Dual-based approximation algorithms for cut-based connectivity problems.
//!
//! The crate covers four problems:
//!
//! * **2ECS**: minimum 2-edge-connected spanning subgraph (3/2-approximation),
//! * **MSCS**: minimum strongly connected spanning subgraph,
//! * **DPA**: dual power assignment with {0,1} costs (3/2-approximation),
//! * **SSC**: star strong connectivity, which generalizes the previous two
//!   directed problems (8/5-approximation).
//!
//! Every run produces, next to the solution, a family of pairwise disjoint
//! cuts. Each cut is a unit dual variable, so the family is an integer dual
//! solution whose size is a lower bound on the optimum that anybody can check
//! with [`certificate::verify_certificate`] without trusting the algorithm.
//!
//! Vertex ids are 0-based here; the file formats in the CLI crate are 1-based.

pub mod advisor;
pub mod certificate;
pub mod dpa;
pub mod error;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod perfect;
pub mod report;
pub mod ssc;
pub mod two_ecs;

pub use advisor::{
    Advisor, AdvisorStats, ChoicePoint, DefaultAdvisor, RandomAdvisor, ScriptedAdvisor,
};
pub use certificate::{CertificateCheck, Cut, DualCertificate, DualKind};
pub use error::{Error, Result};
pub use graph::{ArcId, Digraph, EdgeId, Multigraph, VertexId, VertexPartition};
pub use instance::{
    DpaEdge, DpaInstance, Instance, MscsInstance, SscInstance, Star, StarId, TwoEcsInstance,
};
pub use perfect::{LiveInstance, Selection};
pub use report::{Bounds, IterationRecord, Problem, Ratio, RecordKind, RunReport};
