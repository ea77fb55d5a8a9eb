//! The typed property-graph store holding the compiled knowledge graph: the
//! schema (node classes, edge signatures, attributes), the store itself,
//! closed-world validation and the N-Triples serialization.

mod graph;
pub mod ntriples;
mod schema;
pub mod validate;

pub use graph::{Direction, GraphError, GraphStats, KnowledgeGraph, Node};
pub use ntriples::{export_ntriples, export_ntriples_to_string, parse_ntriples, NtError};
pub use schema::{attr, AttrValue, EdgeType, GeomKind, NodeType};
pub use validate::{validate_schema, violations_by_rule, Violation, RULES};
