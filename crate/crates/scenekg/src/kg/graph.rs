//! The typed property-graph store. Single writer during the build phase,
//! immutable and freely shared afterwards. Triples have set semantics:
//! inserting an existing edge is a no-op.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::schema::{AttrValue, EdgeType, NodeType};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GraphError {
    #[error("duplicate node id '{0}'")]
    DuplicateNode(String),
    #[error("unknown node '{0}'")]
    UnknownNode(String),
    #[error("edge {edge} not allowed from {src_type} '{src}' to {dst_type} '{dst}'")]
    SignatureViolation {
        edge: &'static str,
        src: String,
        src_type: &'static str,
        dst: String,
        dst_type: &'static str,
    },
    #[error("{edge} is functional but '{src}' already points to '{existing}'")]
    FunctionalViolation { edge: &'static str, src: String, existing: String },
}

#[derive(Debug, Clone)]
pub struct Node {
    pub id: String,
    pub ty: NodeType,
    pub attrs: BTreeMap<String, AttrValue>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
}

#[derive(Debug, Default, Clone)]
pub struct KnowledgeGraph {
    nodes: Vec<Node>,
    by_id: HashMap<String, u32>,
    out: Vec<Vec<(EdgeType, u32)>>,
    inn: Vec<Vec<(EdgeType, u32)>>,
    n_edges: u64,
}

impl KnowledgeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(
        &mut self,
        ty: NodeType,
        id: impl Into<String>,
        attrs: BTreeMap<String, AttrValue>,
    ) -> Result<u32, GraphError> {
        let id = id.into();
        if self.by_id.contains_key(&id) {
            return Err(GraphError::DuplicateNode(id));
        }
        let idx = self.nodes.len() as u32;
        self.by_id.insert(id.clone(), idx);
        self.nodes.push(Node { id, ty, attrs });
        self.out.push(Vec::new());
        self.inn.push(Vec::new());
        Ok(idx)
    }

    pub fn add_edge(&mut self, ty: EdgeType, src: &str, dst: &str) -> Result<(), GraphError> {
        let s = self.index_of(src).ok_or_else(|| GraphError::UnknownNode(src.to_string()))?;
        let d = self.index_of(dst).ok_or_else(|| GraphError::UnknownNode(dst.to_string()))?;
        self.add_edge_idx(ty, s, d)
    }

    pub fn add_edge_idx(&mut self, ty: EdgeType, src: u32, dst: u32) -> Result<(), GraphError> {
        let (st, dt) = (self.nodes[src as usize].ty, self.nodes[dst as usize].ty);
        if !ty.domain_ok(st) || !ty.range_ok(dt) {
            return Err(GraphError::SignatureViolation {
                edge: ty.name(),
                src: self.nodes[src as usize].id.clone(),
                src_type: st.class_name(),
                dst: self.nodes[dst as usize].id.clone(),
                dst_type: dt.class_name(),
            });
        }
        if let Some(&(_, existing)) =
            self.out[src as usize].iter().find(|(t, d)| *t == ty && *d == dst)
        {
            let _ = existing;
            return Ok(()); // set semantics
        }
        if ty.is_functional() {
            if let Some(&(_, existing)) = self.out[src as usize].iter().find(|(t, _)| *t == ty) {
                return Err(GraphError::FunctionalViolation {
                    edge: ty.name(),
                    src: self.nodes[src as usize].id.clone(),
                    existing: self.nodes[existing as usize].id.clone(),
                });
            }
        }
        self.out[src as usize].push((ty, dst));
        self.inn[dst as usize].push((ty, src));
        self.n_edges += 1;
        Ok(())
    }

    pub fn index_of(&self, id: &str) -> Option<u32> {
        self.by_id.get(id).copied()
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.index_of(id).map(|i| &self.nodes[i as usize])
    }

    pub fn node_at(&self, idx: u32) -> &Node {
        &self.nodes[idx as usize]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.n_edges
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter()
    }

    pub fn node_indices(&self) -> impl Iterator<Item = u32> {
        0..self.nodes.len() as u32
    }

    pub fn out_edges(&self, idx: u32) -> &[(EdgeType, u32)] {
        &self.out[idx as usize]
    }

    pub fn in_edges(&self, idx: u32) -> &[(EdgeType, u32)] {
        &self.inn[idx as usize]
    }

    pub fn neighbors_idx(
        &self,
        idx: u32,
        ty: EdgeType,
        dir: Direction,
    ) -> impl Iterator<Item = u32> + '_ {
        let list = match dir {
            Direction::Out => &self.out[idx as usize],
            Direction::In => &self.inn[idx as usize],
        };
        list.iter().filter(move |(t, _)| *t == ty).map(|(_, n)| *n)
    }

    pub fn first_neighbor(&self, idx: u32, ty: EdgeType, dir: Direction) -> Option<u32> {
        self.neighbors_idx(idx, ty, dir).next()
    }

    /// Neighbor ids over one edge type, in insertion order.
    pub fn neighbors(
        &self,
        id: &str,
        ty: EdgeType,
        dir: Direction,
    ) -> Result<Vec<&str>, GraphError> {
        let idx = self.index_of(id).ok_or_else(|| GraphError::UnknownNode(id.to_string()))?;
        Ok(self.neighbors_idx(idx, ty, dir).map(|i| self.nodes[i as usize].id.as_str()).collect())
    }

    pub fn attr(&self, idx: u32, name: &str) -> Option<&AttrValue> {
        self.nodes[idx as usize].attrs.get(name)
    }

    pub fn set_attr(&mut self, idx: u32, name: &str, value: AttrValue) {
        self.nodes[idx as usize].attrs.insert(name.to_string(), value);
    }

    pub fn attr_f64(&self, idx: u32, name: &str) -> Option<f64> {
        self.attr(idx, name).and_then(AttrValue::as_f64)
    }

    pub fn attr_i64(&self, idx: u32, name: &str) -> Option<i64> {
        self.attr(idx, name).and_then(AttrValue::as_i64)
    }

    pub fn attr_bool(&self, idx: u32, name: &str) -> Option<bool> {
        self.attr(idx, name).and_then(AttrValue::as_bool)
    }

    pub fn attr_str(&self, idx: u32, name: &str) -> Option<&str> {
        self.attr(idx, name).and_then(AttrValue::as_str)
    }

    pub fn stats(&self) -> GraphStats {
        let mut nodes_by_type: BTreeMap<String, u64> = BTreeMap::new();
        let mut edges_by_type: BTreeMap<String, u64> = BTreeMap::new();
        for n in &self.nodes {
            *nodes_by_type.entry(n.ty.class_name().to_string()).or_insert(0) += 1;
        }
        for list in &self.out {
            for (ty, _) in list {
                *edges_by_type.entry(ty.name().to_string()).or_insert(0) += 1;
            }
        }
        GraphStats {
            nodes_total: self.nodes.len() as u64,
            edges_total: self.n_edges,
            nodes_by_type,
            edges_by_type,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GraphStats {
    pub nodes_total: u64,
    pub edges_total: u64,
    pub nodes_by_type: BTreeMap<String, u64>,
    pub edges_by_type: BTreeMap<String, u64>,
}

impl std::fmt::Display for GraphStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "nodes: {}", self.nodes_total)?;
        for (t, c) in &self.nodes_by_type {
            writeln!(f, "  {t}: {c}")?;
        }
        writeln!(f, "edges: {}", self.edges_total)?;
        for (t, c) in &self.edges_by_type {
            writeln!(f, "  {t}: {c}")?;
        }
        Ok(())
    }
}
