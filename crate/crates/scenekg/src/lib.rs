//! scenekg compiles raw traffic-scene descriptions (a map bundle plus agent
//! trip logs) into two artifacts:
//!
//! 1. a typed, ontology-conformant knowledge graph of scenes, participants,
//!    lane geometry and road infrastructure, exportable as N-Triples, and
//! 2. a heterogeneous graph-regression dataset of (scene graph, future
//!    trajectory) pairs in a target-centric local frame, ready for GNN
//!    training pipelines.
//!
//! The library surface is organized along the pipeline:
//! [`scene_ir`] parses the neutral interchange format, [`map_compiler`] and
//! [`agent_compiler`] populate the [`kg`] store, [`extract`] selects
//! prediction targets and assembles examples, and [`dataset_io`] writes the
//! dataset tree. [`synthgen`] generates deterministic synthetic scenarios
//! used as test oracles, and [`render`] emits SVG QA views. See the
//! `examples/` directory for one runnable program per capability.

pub mod agent_compiler;
pub mod cli;
pub mod config;
pub mod dataset_io;
pub mod extract;
pub mod geometry;
pub mod kg;
pub mod map_compiler;
pub mod render;
pub mod scene_ir;
pub mod synthgen;
pub mod vocab;

pub use config::Config;

/// Compile parsed inputs into the knowledge graph plus geometric side
/// tables. Map first, then agents; relations are computed for every scene.
pub fn compile_scene(
    map: &scene_ir::RawMapBundle,
    trips: &scene_ir::RawTripSet,
    cfg: &Config,
) -> Result<CompiledScene, CompileError> {
    let mut graph = kg::KnowledgeGraph::new();
    let (geom, mut warnings) = map_compiler::compile_map(map, cfg, &mut graph)?;
    let agent_warnings = agent_compiler::compile_agents(&mut graph, trips, &map.locations, &geom, cfg)?;
    warnings.extend(agent_warnings);
    Ok(CompiledScene { graph, map: geom, warnings })
}

/// Errors raised while compiling parsed inputs into the knowledge graph.
#[derive(Debug, thiserror::Error)]
pub enum CompileError {
    #[error("lane '{lane}' is missing its {side} border")]
    MissingBorder { lane: String, side: &'static str },
    #[error("lane '{lane}': {side} border leaves arc interval [{from:.3}, {to:.3}] uncovered")]
    BorderGap { lane: String, side: &'static str, from: f64, to: f64 },
    #[error("agent '{agent}' changes category between scenes")]
    InconsistentCategory { agent: String },
    #[error("agent '{agent}' changes size between scenes")]
    InconsistentSize { agent: String },
    #[error("trip '{trip}' references unknown location '{location}'")]
    UnknownLocation { trip: String, location: String },
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error(transparent)]
    Graph(#[from] kg::GraphError),
}

/// A fully compiled scene: the knowledge graph plus the geometric side
/// tables the extraction and rendering stages need.
#[derive(Debug, Clone)]
pub struct CompiledScene {
    pub graph: kg::KnowledgeGraph,
    pub map: map_compiler::MapGeometry,
    pub warnings: Vec<String>,
}
