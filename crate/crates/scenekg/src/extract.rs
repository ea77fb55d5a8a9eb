//! Assembles (scene graph, future trajectory) training pairs from a
//! compiled scene: picks prediction targets with full observation windows,
//! prunes the map to the blocks reachable within a few hops plus their
//! surroundings, keeps the agents on that map, and normalizes every
//! coordinate into the target-centric frame (target at the origin, facing
//! +x).

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::config::Config;
use crate::geometry::{Point, RigidFrame};
use crate::kg::{attr, Direction, EdgeType, KnowledgeGraph, NodeType};
use crate::vocab::{DividerType, ParticipantCategory, StopKind, TlType};
use crate::CompiledScene;

/// History window: 2 s into the past at 2 Hz, current scene included.
pub const HISTORY_SCENES: usize = 5;
/// Future window: 6 s at 2 Hz.
pub const FUTURE_STEPS: usize = 12;
/// Nominal scene step and the allowed jitter.
pub const SCENE_STEP_US: i64 = 500_000;
pub const SCENE_STEP_TOL_US: i64 = 50_000;

#[derive(Debug, thiserror::Error)]
pub enum ExtractError {
    #[error("unknown sequence '{0}'")]
    UnknownSequence(String),
    #[error("target '{target}' is missing from future scene '{scene}'")]
    MissingFutureScene { target: String, scene: String },
    #[error("target '{target}' has no anchor pose")]
    MissingAnchorPose { target: String },
    #[error(transparent)]
    Graph(#[from] crate::kg::GraphError),
}

/// One prediction target: a participant at an anchor scene with full
/// history and future windows.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSpec {
    pub participant: String,
    pub anchor_scene: String,
    pub sequence: String,
    pub anchor_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameWindow {
    pub history: Vec<u32>,
    pub future: Vec<u32>,
}

/// Feature matrix for one node type: row-major with a fixed column count.
/// The row count is explicit so zero-column types still carry their size.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub cols: u32,
    pub rows: u32,
    pub data: Vec<f64>,
}

pub type EdgeKey = (String, String, String);

/// One training pair: typed feature tables, typed edge index lists, the
/// target marker and the 12-step future trajectory, all in the target's
/// local frame.
#[derive(Debug, Clone, PartialEq)]
pub struct HetGraphExample {
    pub nodes: BTreeMap<String, FeatureTable>,
    pub edges: BTreeMap<EdgeKey, Vec<[u32; 2]>>,
    pub target: (String, u32),
    pub y: Vec<[f64; 2]>,
}

impl HetGraphExample {
    pub fn node_total(&self) -> u64 {
        self.nodes.values().map(|t| t.rows as u64).sum()
    }

    pub fn edge_total(&self) -> u64 {
        self.edges.values().map(|v| v.len() as u64).sum()
    }

    /// Copy with every feature quantized to f32 precision, the on-disk
    /// representation.
    pub fn quantized(&self) -> HetGraphExample {
        let mut out = self.clone();
        for table in out.nodes.values_mut() {
            for v in &mut table.data {
                *v = *v as f32 as f64;
            }
        }
        for row in &mut out.y {
            row[0] = row[0] as f32 as f64;
            row[1] = row[1] as f32 as f64;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleMeta {
    pub sequence: String,
    pub target: String,
    pub anchor_scene: String,
    pub anchor_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractedExample {
    pub meta: ExampleMeta,
    pub example: HetGraphExample,
}

/// Read-only extraction over a compiled scene.
pub struct Extractor<'a> {
    pub scene: &'a CompiledScene,
    pub cfg: &'a Config,
}

impl<'a> Extractor<'a> {
    pub fn new(scene: &'a CompiledScene, cfg: &'a Config) -> Self {
        Self { scene, cfg }
    }

    fn g(&self) -> &KnowledgeGraph {
        &self.scene.graph
    }

    fn scene_chain(&self, sequence: &str) -> Result<Vec<u32>, ExtractError> {
        let g = self.g();
        let seq_idx = g
            .index_of(sequence)
            .filter(|&i| g.node_at(i).ty == NodeType::Sequence)
            .ok_or_else(|| ExtractError::UnknownSequence(sequence.to_string()))?;
        Ok(g.neighbors_idx(seq_idx, EdgeType::HasScene, Direction::Out).collect())
    }

    /// SceneParticipant of `participant` in the given scene, if any.
    fn sp_in_scene(&self, scene_idx: u32, participant: &str) -> Option<u32> {
        let g = self.g();
        g.neighbors_idx(scene_idx, EdgeType::HasSceneParticipant, Direction::Out).find(|&sp| {
            g.neighbors_idx(sp, EdgeType::IsSceneParticipantOf, Direction::Out)
                .next()
                .map(|p| g.node_at(p).id == participant)
                .unwrap_or(false)
        })
    }

    fn window_times_ok(&self, scenes: &[u32], lo: usize, hi: usize) -> bool {
        let g = self.g();
        for k in lo..hi {
            let t0 = g.attr_i64(scenes[k], attr::TIMESTAMP);
            let t1 = g.attr_i64(scenes[k + 1], attr::TIMESTAMP);
            match (t0, t1) {
                (Some(a), Some(b)) if (b - a - SCENE_STEP_US).abs() <= SCENE_STEP_TOL_US => {}
                _ => return false,
            }
        }
        true
    }

    fn is_drivable(&self, ty: NodeType) -> bool {
        matches!(
            ty,
            NodeType::Lane | NodeType::LaneSnippet | NodeType::RoadBlock | NodeType::Intersection
        )
    }

    /// All (vehicle participant, anchor scene) pairs of the sequence whose
    /// history and future windows are complete, on-cadence, and whose
    /// participant is on a drivable element at the anchor. The ego vehicle
    /// is context, never a target. Deterministic order: anchor index, then
    /// participant id.
    pub fn select_targets(&self, sequence: &str) -> Result<Vec<TargetSpec>, ExtractError> {
        let g = self.g();
        let scenes = self.scene_chain(sequence)?;
        let n = scenes.len();
        if n < HISTORY_SCENES + FUTURE_STEPS {
            return Ok(Vec::new());
        }

        // vehicle participants seen in this sequence
        let mut participants: Vec<String> = Vec::new();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for &scene in &scenes {
            for sp in g.neighbors_idx(scene, EdgeType::HasSceneParticipant, Direction::Out) {
                if let Some(p) = g.first_neighbor(sp, EdgeType::IsSceneParticipantOf, Direction::Out)
                {
                    let node = g.node_at(p);
                    let vehicle = matches!(node.ty, NodeType::Participant(c) if c.is_vehicle());
                    let ego = g.attr_bool(p, attr::IS_EGO).unwrap_or(false);
                    if vehicle && !ego && seen.insert(node.id.clone()) {
                        participants.push(node.id.clone());
                    }
                }
            }
        }

        let mut out = Vec::new();
        for anchor in (HISTORY_SCENES - 1)..(n - FUTURE_STEPS) {
            if !self.window_times_ok(&scenes, anchor + 1 - HISTORY_SCENES, anchor + FUTURE_STEPS) {
                continue;
            }
            let mut here: Vec<TargetSpec> = Vec::new();
            for pid in &participants {
                let full_window = (anchor + 1 - HISTORY_SCENES..=anchor + FUTURE_STEPS)
                    .all(|k| self.sp_in_scene(scenes[k], pid).is_some());
                if !full_window {
                    continue;
                }
                let sp = self.sp_in_scene(scenes[anchor], pid).expect("window checked");
                let drivable = g
                    .neighbors_idx(sp, EdgeType::IsOn, Direction::Out)
                    .any(|t| self.is_drivable(g.node_at(t).ty));
                if !drivable {
                    continue;
                }
                here.push(TargetSpec {
                    participant: pid.clone(),
                    anchor_scene: g.node_at(scenes[anchor]).id.clone(),
                    sequence: sequence.to_string(),
                    anchor_index: anchor,
                });
            }
            here.sort_by(|a, b| a.participant.cmp(&b.participant));
            out.extend(here);
        }
        Ok(out)
    }

    pub fn frame_window(&self, target: &TargetSpec) -> Result<FrameWindow, ExtractError> {
        let scenes = self.scene_chain(&target.sequence)?;
        let a = target.anchor_index;
        Ok(FrameWindow {
            history: scenes[a + 1 - HISTORY_SCENES..=a].to_vec(),
            future: scenes[a + 1..=a + FUTURE_STEPS].to_vec(),
        })
    }

    /// Seed block: the road block the target is on in the most recent
    /// history scene that has one; falls back to the nearest block hull.
    fn seed_block(
        &self,
        target: &TargetSpec,
        window: &FrameWindow,
        warnings: &mut Vec<String>,
    ) -> Option<u32> {
        let g = self.g();
        for &scene in window.history.iter().rev() {
            if let Some(sp) = self.sp_in_scene(scene, &target.participant) {
                if let Some(block) = g
                    .neighbors_idx(sp, EdgeType::IsOn, Direction::Out)
                    .find(|&t| g.node_at(t).ty == NodeType::RoadBlock)
                {
                    return Some(block);
                }
            }
        }
        // nearest block by hull distance from the anchor position
        let sp = self.sp_in_scene(*window.history.last()?, &target.participant)?;
        let pos = Point::new(g.attr_f64(sp, attr::X)?, g.attr_f64(sp, attr::Y)?);
        let mut best: Option<(f64, &String)> = None;
        for (id, block) in &self.scene.map.blocks {
            let d = block.hull.distance_to_point(pos);
            if best.map(|(bd, _)| d < bd).unwrap_or(true) {
                best = Some((d, id));
            }
        }
        let (d, id) = best?;
        warnings.push(format!(
            "target '{}' is on no road block at anchor '{}'; seeded from nearest block '{}' ({d:.2} m away)",
            target.participant, target.anchor_scene, id
        ));
        g.index_of(id)
    }

    /// The relevant map: blocks reachable within the configured hop count
    /// from the seed, their opposing blocks, and one hop of surround
    /// relations (member lanes with slices and snippets, connectors between
    /// included lanes with their poses, hosting intersections, stop areas
    /// and crossings touching included lanes, their causes, and adjacent
    /// walkways and carparks).
    pub fn extract_map_subgraph(
        &self,
        target: &TargetSpec,
    ) -> Result<(BTreeSet<u32>, Vec<String>), ExtractError> {
        let g = self.g();
        let window = self.frame_window(target)?;
        let mut warnings = Vec::new();
        let mut included: BTreeSet<u32> = BTreeSet::new();

        let Some(seed) = self.seed_block(target, &window, &mut warnings) else {
            return Ok((included, warnings));
        };

        // core blocks: <= block_hops succession hops
        let mut core: BTreeSet<u32> = BTreeSet::new();
        core.insert(seed);
        let mut frontier = vec![seed];
        for _ in 0..self.cfg.block_hops {
            let mut next = Vec::new();
            for b in frontier {
                for n in g.neighbors_idx(b, EdgeType::HasNextRoadBlock, Direction::Out) {
                    if core.insert(n) {
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }

        // opposing blocks at surround distance one
        let mut blocks: BTreeSet<u32> = core.clone();
        for &b in &core {
            for o in g.neighbors_idx(b, EdgeType::HasOpposingRoadBlock, Direction::Out) {
                blocks.insert(o);
            }
        }
        included.extend(&blocks);

        // member lanes and their slices/snippets
        let mut lanes: BTreeSet<u32> = BTreeSet::new();
        for &b in &blocks {
            for lane in g.neighbors_idx(b, EdgeType::IsLaneOnRoadBlock, Direction::In) {
                lanes.insert(lane);
            }
        }
        included.extend(&lanes);
        for &lane in &lanes {
            included.extend(g.neighbors_idx(lane, EdgeType::LaneHasSlice, Direction::Out));
            included.extend(g.neighbors_idx(lane, EdgeType::HasLaneSnippet, Direction::Out));
        }

        // connectors strictly between included lanes, with their poses
        let mut connectors: BTreeSet<u32> = BTreeSet::new();
        for &lane in &lanes {
            for conn in g.neighbors_idx(lane, EdgeType::HasIncomingLane, Direction::In) {
                let out_ok = g
                    .first_neighbor(conn, EdgeType::HasOutgoingLane, Direction::Out)
                    .map(|o| lanes.contains(&o))
                    .unwrap_or(false);
                if out_ok {
                    connectors.insert(conn);
                }
            }
        }
        included.extend(&connectors);
        for &conn in &connectors {
            included.extend(g.neighbors_idx(conn, EdgeType::ConnectorHasPose, Direction::Out));
            // hosting intersections
            included.extend(g.neighbors_idx(conn, EdgeType::IsConnectorOnRoadSegment, Direction::Out));
        }

        // stop areas and crossings overlapping included lanes, plus causes
        let lane_ids: Vec<&str> = lanes.iter().map(|&l| g.node_at(l).id.as_str()).collect();
        for (area_id, area) in &self.scene.map.areas {
            let touches = lane_ids.iter().any(|lid| {
                let lane_geom = &self.scene.map.lanes[*lid];
                area.polygon.bbox().distance(&lane_geom.polygon.bbox()) == 0.0
                    && area.polygon.overlaps(&lane_geom.polygon)
            });
            if !touches {
                continue;
            }
            use crate::map_compiler::AreaKind;
            if !matches!(area.kind, AreaKind::Stop | AreaKind::Crossing) {
                continue;
            }
            if let Some(idx) = g.index_of(area_id) {
                included.insert(idx);
                for cause in g.neighbors_idx(idx, EdgeType::CausesStopAt, Direction::In) {
                    included.insert(cause);
                }
            }
        }

        // adjacent walkways and carparks
        for &lane in &lanes {
            for w in g.neighbors_idx(lane, EdgeType::WalkwayIsNextTo, Direction::In) {
                included.insert(w);
            }
            for c in g.neighbors_idx(lane, EdgeType::CarparkIsNextTo, Direction::In) {
                included.insert(c);
            }
        }

        Ok((included, warnings))
    }

    /// History scenes, the sequence node, and every scene participant of
    /// the window that sits on the extracted map (target and ego are always
    /// kept), plus their participants.
    pub fn extract_history(
        &self,
        target: &TargetSpec,
        map_set: &BTreeSet<u32>,
    ) -> Result<BTreeSet<u32>, ExtractError> {
        let g = self.g();
        let window = self.frame_window(target)?;
        let mut included: BTreeSet<u32> = BTreeSet::new();
        if let Some(seq) = g.index_of(&target.sequence) {
            included.insert(seq);
        }
        for &scene in &window.history {
            included.insert(scene);
            for sp in g.neighbors_idx(scene, EdgeType::HasSceneParticipant, Direction::Out) {
                let participant =
                    g.first_neighbor(sp, EdgeType::IsSceneParticipantOf, Direction::Out);
                let is_target = participant
                    .map(|p| g.node_at(p).id == target.participant)
                    .unwrap_or(false);
                let is_ego = g.attr_bool(sp, attr::IS_EGO).unwrap_or(false);
                let on_map =
                    g.neighbors_idx(sp, EdgeType::IsOn, Direction::Out).any(|t| map_set.contains(&t));
                if is_target || is_ego || on_map {
                    included.insert(sp);
                    if let Some(p) = participant {
                        included.insert(p);
                    }
                }
            }
        }
        Ok(included)
    }

    /// Assemble the example: the induced heterogeneous subgraph over the
    /// included nodes with every feature in the target's local frame.
    pub fn build_example(&self, target: &TargetSpec) -> Result<ExtractedExample, ExtractError> {
        let g = self.g();
        let window = self.frame_window(target)?;
        let (map_set, _warnings) = self.extract_map_subgraph(target)?;
        let history = self.extract_history(target, &map_set)?;
        let mut included: BTreeSet<u32> = map_set;
        included.extend(&history);

        let anchor_sp = self
            .sp_in_scene(*window.history.last().unwrap(), &target.participant)
            .ok_or_else(|| ExtractError::MissingAnchorPose { target: target.participant.clone() })?;
        let frame = RigidFrame::new(
            Point::new(
                g.attr_f64(anchor_sp, attr::X).unwrap_or(0.0),
                g.attr_f64(anchor_sp, attr::Y).unwrap_or(0.0),
            ),
            g.attr_f64(anchor_sp, attr::ORIENTATION).unwrap_or(0.0),
        );
        let t0 = g.attr_i64(*window.history.last().unwrap(), attr::TIMESTAMP).unwrap_or(0);

        // row assignment per table, in insertion (index) order
        let mut rows: BTreeMap<u32, (String, u32)> = BTreeMap::new();
        let mut tables: BTreeMap<String, FeatureTable> = BTreeMap::new();
        for &idx in &included {
            let Some((key, features)) = self.node_features(idx, &frame, t0) else {
                continue;
            };
            let table = tables.entry(key.clone()).or_insert_with(|| FeatureTable {
                cols: features.len() as u32,
                rows: 0,
                data: Vec::new(),
            });
            rows.insert(idx, (key, table.rows));
            table.rows += 1;
            table.data.extend(features);
        }

        // induced edges among feature-bearing nodes
        let mut edges: BTreeMap<EdgeKey, Vec<[u32; 2]>> = BTreeMap::new();
        for &idx in &included {
            let Some((src_key, src_row)) = rows.get(&idx).cloned() else { continue };
            for (ty, dst) in g.out_edges(idx) {
                let Some((dst_key, dst_row)) = rows.get(dst).cloned() else { continue };
                edges
                    .entry((src_key.clone(), ty.name().to_string(), dst_key))
                    .or_default()
                    .push([src_row, dst_row]);
            }
        }

        // future trajectory in the local frame
        let mut y = Vec::with_capacity(FUTURE_STEPS);
        for &scene in &window.future {
            let sp = self.sp_in_scene(scene, &target.participant).ok_or_else(|| {
                ExtractError::MissingFutureScene {
                    target: target.participant.clone(),
                    scene: g.node_at(scene).id.clone(),
                }
            })?;
            let p = Point::new(
                g.attr_f64(sp, attr::X).unwrap_or(0.0),
                g.attr_f64(sp, attr::Y).unwrap_or(0.0),
            );
            let local = frame.to_local(p);
            y.push([local.x, local.y]);
        }

        let (tkey, trow) = rows.get(&anchor_sp).cloned().expect("target row exists");
        Ok(ExtractedExample {
            meta: ExampleMeta {
                sequence: target.sequence.clone(),
                target: target.participant.clone(),
                anchor_scene: target.anchor_scene.clone(),
                anchor_index: target.anchor_index,
            },
            example: HetGraphExample {
                nodes: tables,
                edges,
                target: (tkey, trow),
                y,
            },
        })
    }

    fn node_features(&self, idx: u32, frame: &RigidFrame, t0: i64) -> Option<(String, Vec<f64>)> {
        let g = self.g();
        let node = g.node_at(idx);
        let local_xy = |i: u32| -> Point {
            frame.to_local(Point::new(
                g.attr_f64(i, attr::X).unwrap_or(0.0),
                g.attr_f64(i, attr::Y).unwrap_or(0.0),
            ))
        };
        let local_yaw =
            |i: u32| frame.yaw_to_local(g.attr_f64(i, attr::ORIENTATION).unwrap_or(0.0));
        let polygon_features = |id: &str| -> Vec<f64> {
            let poly = self
                .scene
                .map
                .lanes
                .get(id)
                .map(|l| &l.polygon)
                .or_else(|| self.scene.map.areas.get(id).map(|a| &a.polygon))
                .or_else(|| self.scene.map.blocks.get(id).map(|b| &b.hull));
            match poly {
                Some(p) => {
                    let c = frame.to_local(p.centroid());
                    vec![c.x, c.y, p.area()]
                }
                None => vec![0.0, 0.0, 0.0],
            }
        };

        let (key, features) = match node.ty {
            NodeType::SceneParticipant => {
                let p = local_xy(idx);
                let scene = g.first_neighbor(idx, EdgeType::HasSceneParticipant, Direction::In)?;
                let ts = g.attr_i64(scene, attr::TIMESTAMP).unwrap_or(t0);
                (
                    "SceneParticipant",
                    vec![
                        p.x,
                        p.y,
                        local_yaw(idx),
                        g.attr_f64(idx, attr::SPEED).unwrap_or(0.0),
                        (ts - t0) as f64 / 1e6,
                        if g.attr_bool(idx, attr::IS_EGO).unwrap_or(false) { 1.0 } else { 0.0 },
                    ],
                )
            }
            NodeType::Participant(c) => (
                "Participant",
                vec![
                    c.index() as f64,
                    g.attr_f64(idx, attr::LENGTH).unwrap_or(0.0),
                    g.attr_f64(idx, attr::WIDTH).unwrap_or(0.0),
                    g.attr_f64(idx, attr::HEIGHT).unwrap_or(0.0),
                ],
            ),
            NodeType::Scene => {
                let ts = g.attr_i64(idx, attr::TIMESTAMP).unwrap_or(t0);
                ("Scene", vec![(ts - t0) as f64 / 1e6])
            }
            NodeType::Sequence => ("Sequence", vec![]),
            NodeType::LaneSlice => {
                let p = local_xy(idx);
                (
                    "LaneSlice",
                    vec![p.x, p.y, local_yaw(idx), g.attr_f64(idx, attr::SLICE_WIDTH).unwrap_or(0.0)],
                )
            }
            NodeType::OrderedPose => {
                let p = local_xy(idx);
                ("OrderedPose", vec![p.x, p.y, local_yaw(idx)])
            }
            NodeType::LaneSnippet => {
                let left = g
                    .attr_str(idx, attr::LEFT_DIVIDER)
                    .and_then(DividerType::from_label)
                    .map(|d| d.index())
                    .unwrap_or(0);
                let right = g
                    .attr_str(idx, attr::RIGHT_DIVIDER)
                    .and_then(DividerType::from_label)
                    .map(|d| d.index())
                    .unwrap_or(0);
                (
                    "LaneSnippet",
                    vec![
                        g.attr_f64(idx, attr::SNIPPET_LENGTH).unwrap_or(0.0),
                        left as f64,
                        right as f64,
                    ],
                )
            }
            NodeType::StopArea(kind) => ("StopArea", vec![kind.index() as f64]),
            NodeType::TrafficLight => {
                let pose = g.first_neighbor(idx, EdgeType::TrafficLightHasPose, Direction::Out);
                let (p, yaw) = match pose {
                    Some(pi) => (local_xy(pi), local_yaw(pi)),
                    None => (Point::new(0.0, 0.0), 0.0),
                };
                let tl = g
                    .attr_str(idx, attr::TL_TYPE)
                    .and_then(TlType::from_letter)
                    .map(|t| t.index())
                    .unwrap_or(0);
                ("TrafficLight", vec![p.x, p.y, yaw, tl as f64])
            }
            NodeType::Lane => ("Lane", polygon_features(&node.id)),
            NodeType::RoadBlock => ("RoadBlock", polygon_features(&node.id)),
            NodeType::Walkway => ("Walkway", polygon_features(&node.id)),
            NodeType::CarparkArea => ("CarparkArea", polygon_features(&node.id)),
            NodeType::PedCrossing => ("PedCrossing", polygon_features(&node.id)),
            NodeType::Intersection => ("Intersection", polygon_features(&node.id)),
            NodeType::LaneConnector => ("LaneConnector", vec![]),
            // geometry, poses, trips and locations stay out of examples
            _ => return None,
        };
        Some((key.to_string(), features))
    }

    /// Every eligible example of one sequence.
    pub fn extract_sequence(&self, sequence: &str) -> Result<Vec<ExtractedExample>, ExtractError> {
        let targets = self.select_targets(sequence)?;
        targets.par_iter().map(|t| self.build_example(t)).collect()
    }

    /// Every eligible example of every sequence, in graph order.
    pub fn extract_all(&self) -> Result<Vec<ExtractedExample>, ExtractError> {
        let g = self.g();
        let sequences: Vec<String> = g
            .nodes()
            .filter(|n| n.ty == NodeType::Sequence)
            .map(|n| n.id.clone())
            .collect();
        let mut out = Vec::new();
        for seq in sequences {
            out.extend(self.extract_sequence(&seq)?);
        }
        Ok(out)
    }
}

/// The paper-facing column dictionary: stable names for every feature
/// column, used by the dataset manifest.
pub fn feature_columns() -> BTreeMap<String, Vec<String>> {
    let cols = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let mut m = BTreeMap::new();
    m.insert(
        "SceneParticipant".into(),
        cols(&["x_local_m", "y_local_m", "yaw_local_rad", "speed_mps", "time_offset_s", "is_ego"]),
    );
    m.insert(
        "Participant".into(),
        cols(&["category_index", "length_m", "width_m", "height_m"]),
    );
    m.insert("Scene".into(), cols(&["time_offset_s"]));
    m.insert("Sequence".into(), cols(&[]));
    m.insert(
        "LaneSlice".into(),
        cols(&["x_local_m", "y_local_m", "yaw_local_rad", "width_m"]),
    );
    m.insert("OrderedPose".into(), cols(&["x_local_m", "y_local_m", "yaw_local_rad"]));
    m.insert(
        "LaneSnippet".into(),
        cols(&["length_m", "left_divider_index", "right_divider_index"]),
    );
    m.insert("StopArea".into(), cols(&["subtype_index"]));
    m.insert(
        "TrafficLight".into(),
        cols(&["x_local_m", "y_local_m", "yaw_local_rad", "tl_type_index"]),
    );
    for poly in ["Lane", "RoadBlock", "Walkway", "CarparkArea", "PedCrossing", "Intersection"] {
        m.insert(poly.into(), cols(&["centroid_x_local_m", "centroid_y_local_m", "area_m2"]));
    }
    m.insert("LaneConnector".into(), cols(&[]));
    m
}

/// Index tables for the categorical encodings used in features.
pub fn index_tables() -> BTreeMap<String, Vec<String>> {
    let mut m = BTreeMap::new();
    m.insert(
        "participant_category".into(),
        ParticipantCategory::ALL.iter().map(|c| c.label().to_string()).collect(),
    );
    m.insert(
        "divider_type".into(),
        DividerType::ALL.iter().map(|d| d.label().to_string()).collect(),
    );
    m.insert(
        "stop_area_subtype".into(),
        StopKind::ALL.iter().map(|k| k.label().to_string()).collect(),
    );
    m.insert(
        "traffic_light_type".into(),
        TlType::ALL.iter().map(|t| t.letter().to_string()).collect(),
    );
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthgen::{generate, AgentPlan, Scenario, ScenarioTemplate};
    use crate::Config;

    fn straight(length: f64, agents: Vec<AgentPlan>) -> crate::CompiledScene {
        let scenario = Scenario {
            template: ScenarioTemplate::StraightRoad { lanes_per_dir: 1, length_m: length },
            agents,
        };
        let (map, trips) = generate(&scenario, 3, 20.0).unwrap();
        crate::compile_scene(&map, &trips, &Config::default()).unwrap()
    }

    fn ego_east(length: f64) -> AgentPlan {
        AgentPlan {
            category: crate::vocab::ParticipantCategory::VehicleCar,
            path: crate::synthgen::straight_chain(1, length, true, 0),
            speed_mps: 3.0,
            start_offset_m: 5.3,
            is_ego: true,
        }
    }

    fn car_east(length: f64, speed: f64, offset: f64) -> AgentPlan {
        AgentPlan {
            category: crate::vocab::ParticipantCategory::VehicleCar,
            path: crate::synthgen::straight_chain(1, length, true, 0),
            speed_mps: speed,
            start_offset_m: offset,
            is_ego: false,
        }
    }

    fn sequence_id(scene: &crate::CompiledScene) -> String {
        scene
            .graph
            .nodes()
            .find(|n| n.ty == NodeType::Sequence)
            .map(|n| n.id.clone())
            .expect("one sequence")
    }

    #[test]
    fn forty_scene_sequence_yields_24_anchor_windows() {
        // one eligible car present throughout on a single-segment road;
        // the ego is context only
        let compiled = straight(48.0, vec![ego_east(48.0), car_east(48.0, 4.0, 15.3)]);
        let cfg = Config::default();
        let ex = Extractor::new(&compiled, &cfg);
        let targets = ex.select_targets(&sequence_id(&compiled)).unwrap();
        assert_eq!(targets.len(), 24); // anchors 4..=27 of 40 scenes
        assert!(targets.iter().all(|t| t.participant == "agent_1"));
        assert_eq!(targets[0].anchor_index, 4);
        assert_eq!(targets[23].anchor_index, 27);
    }

    #[test]
    fn short_presence_and_pedestrians_yield_no_targets() {
        let compiled = straight(120.0, vec![ego_east(120.0)]);
        let cfg = Config::default();
        let ex = Extractor::new(&compiled, &cfg);
        // only the ego drives: no targets at all
        assert!(ex.select_targets(&sequence_id(&compiled)).unwrap().is_empty());

        // a walking pedestrian is never a target
        let mut ped = car_east(120.0, 1.0, 30.0);
        ped.category = crate::vocab::ParticipantCategory::HumanPedestrianAdult;
        let compiled = straight(120.0, vec![ego_east(120.0), ped]);
        let ex = Extractor::new(&compiled, &cfg);
        assert!(ex.select_targets(&sequence_id(&compiled)).unwrap().is_empty());
    }

    #[test]
    fn windows_are_exactly_5_history_and_12_future() {
        let compiled = straight(120.0, vec![ego_east(120.0), car_east(120.0, 4.0, 15.3)]);
        let cfg = Config::default();
        let ex = Extractor::new(&compiled, &cfg);
        let targets = ex.select_targets(&sequence_id(&compiled)).unwrap();
        for t in &targets {
            let w = ex.frame_window(t).unwrap();
            assert_eq!(w.history.len(), HISTORY_SCENES);
            assert_eq!(w.future.len(), FUTURE_STEPS);
        }
    }

    #[test]
    fn constant_velocity_future_is_straight_ahead() {
        let compiled = straight(120.0, vec![ego_east(120.0), car_east(120.0, 4.0, 15.3)]);
        let cfg = Config::default();
        let ex = Extractor::new(&compiled, &cfg);
        let targets = ex.select_targets(&sequence_id(&compiled)).unwrap();
        let built = ex.build_example(&targets[0]).unwrap();
        assert_eq!(built.example.y.len(), 12);
        for (k, row) in built.example.y.iter().enumerate() {
            let expect_x = 2.0 * (k + 1) as f64; // 4 m/s at 0.5 s steps
            assert!((row[0] - expect_x).abs() < 1e-6, "step {k}: {row:?}");
            assert!(row[1].abs() < 1e-6, "step {k}: {row:?}");
        }
        // target marker points at a SceneParticipant row with local pose zero
        let (key, row) = &built.example.target;
        assert_eq!(key, "SceneParticipant");
        let table = &built.example.nodes["SceneParticipant"];
        let base = (*row as usize) * table.cols as usize;
        assert!(table.data[base].abs() < 1e-9);
        assert!(table.data[base + 1].abs() < 1e-9);
        assert!(table.data[base + 2].abs() < 1e-9);
    }

    #[test]
    fn induced_subgraph_is_closed_and_indices_in_range() {
        let compiled = straight(300.0, vec![ego_east(300.0), car_east(300.0, 4.0, 15.3)]);
        let cfg = Config::default();
        let ex = Extractor::new(&compiled, &cfg);
        let all = ex.extract_all().unwrap();
        assert!(!all.is_empty());
        for e in &all {
            for ((src, _, dst), pairs) in &e.example.edges {
                let st = &e.example.nodes[src];
                let dt = &e.example.nodes[dst];
                for [a, b] in pairs {
                    assert!(*a < st.rows && *b < dt.rows);
                }
            }
        }
    }

    #[test]
    fn four_hop_block_pruning_on_six_block_chain() {
        // 300 m at ~50 m per segment: 6 eastbound blocks
        let length = 300.0;
        let far_car = AgentPlan {
            category: crate::vocab::ParticipantCategory::VehicleCar,
            path: vec!["lane_e0_s5".into()],
            speed_mps: 0.0,
            start_offset_m: 20.0,
            is_ego: false,
        };
        let compiled =
            straight(length, vec![ego_east(length), car_east(length, 4.0, 15.3), far_car]);
        let cfg = Config::default();
        let ex = Extractor::new(&compiled, &cfg);
        let targets = ex.select_targets(&sequence_id(&compiled)).unwrap();
        // first anchor of the moving car: still on segment 0
        let t = targets.iter().find(|t| t.participant == "agent_1").unwrap();
        let (map_set, warnings) = ex.extract_map_subgraph(t).unwrap();
        assert!(warnings.is_empty());

        let g = &compiled.graph;
        let blocks: Vec<&str> = map_set
            .iter()
            .filter(|&&i| g.node_at(i).ty == NodeType::RoadBlock)
            .map(|&i| g.node_at(i).id.as_str())
            .collect();
        // blocks of lanes e0_s0..e0_s4 and their opposing westbound blocks
        let mut expected: BTreeSet<&str> = BTreeSet::new();
        for i in 0..5 {
            expected.insert(&compiled.map.lanes[&format!("lane_e0_s{i}")].block);
            expected.insert(&compiled.map.lanes[&format!("lane_w0_s{i}")].block);
        }
        let got: BTreeSet<&str> = blocks.iter().copied().collect();
        assert_eq!(got, expected);

        // the parked car on block 5 is not among the history participants
        let hist = ex.extract_history(t, &map_set).unwrap();
        let names: Vec<&str> = hist.iter().map(|&i| g.node_at(i).id.as_str()).collect();
        assert!(!names.contains(&"agent_2"), "{names:?}");
        // the ego on the extracted map is included
        assert!(names.contains(&"ego"));
    }
}
