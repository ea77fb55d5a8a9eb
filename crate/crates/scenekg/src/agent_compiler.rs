//! Compiles trip logs into the temporal and participant half of the
//! knowledge graph: trips, sequences, scene chains, participants with their
//! per-scene instances, containment links onto the map, and the semantic
//! relations between agents in each scene.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::config::Config;
use crate::geometry::Point;
use crate::kg::{attr, AttrValue, Direction, EdgeType, KnowledgeGraph, NodeType};
use crate::map_compiler::MapGeometry;
use crate::scene_ir::{RawTripSet, RawLocation};
use crate::vocab::ParticipantCategory;
use crate::CompileError;

/// Scene node id derived from the owning sequence and timestamp.
pub fn scene_node_id(sequence: &str, timestamp: i64) -> String {
    format!("{sequence}_t{timestamp}")
}

/// Scene-participant node id: one per (scene, agent).
pub fn scene_participant_id(scene: &str, agent: &str) -> String {
    format!("{scene}_{agent}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    Longitudinal,
    Intersecting,
    Lateral,
}

impl RelationKind {
    pub fn edge(&self) -> EdgeType {
        match self {
            Self::Longitudinal => EdgeType::Longitudinal,
            Self::Intersecting => EdgeType::Intersecting,
            Self::Lateral => EdgeType::Lateral,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentRelation {
    pub kind: RelationKind,
    pub src: String,
    pub dst: String,
    pub scene: String,
}

/// Trip, Location, Sequence and Scene nodes with their chains.
pub fn build_temporal(
    g: &mut KnowledgeGraph,
    trips: &RawTripSet,
    extra_locations: &[RawLocation],
) -> Result<(), CompileError> {
    let mut registry: BTreeMap<&str, &RawLocation> = BTreeMap::new();
    for loc in extra_locations.iter().chain(&trips.locations) {
        registry.entry(loc.id.as_str()).or_insert(loc);
    }

    for trip in &trips.trips {
        let loc = registry.get(trip.location_id.as_str()).ok_or_else(|| {
            CompileError::UnknownLocation {
                trip: trip.id.clone(),
                location: trip.location_id.clone(),
            }
        })?;
        if g.node(&loc.id).is_none() {
            let mut attrs = BTreeMap::new();
            attrs.insert(attr::NAME.to_string(), AttrValue::Str(loc.name.clone()));
            attrs.insert(
                attr::RIGHT_HAND_TRAFFIC.to_string(),
                AttrValue::Bool(loc.right_hand_traffic),
            );
            g.add_node(NodeType::Location, loc.id.clone(), attrs)?;
        }
        g.add_node(NodeType::Trip, trip.id.clone(), BTreeMap::new())?;
        g.add_edge(EdgeType::HasLocation, &trip.id, &loc.id)?;

        for seq in &trip.sequences {
            g.add_node(NodeType::Sequence, seq.id.clone(), BTreeMap::new())?;
            g.add_edge(EdgeType::HasSequence, &trip.id, &seq.id)?;
            let mut prev: Option<String> = None;
            for scene in &seq.scenes {
                let sid = scene_node_id(&seq.id, scene.timestamp);
                let mut attrs = BTreeMap::new();
                attrs.insert(attr::TIMESTAMP.to_string(), AttrValue::Int(scene.timestamp));
                g.add_node(NodeType::Scene, sid.clone(), attrs)?;
                g.add_edge(EdgeType::HasScene, &seq.id, &sid)?;
                if let Some(p) = prev {
                    g.add_edge(EdgeType::HasNextScene, &p, &sid)?;
                    g.add_edge(EdgeType::HasPreviousScene, &sid, &p)?;
                }
                prev = Some(sid);
            }
        }
    }
    Ok(())
}

/// One Participant per distinct agent id (typed by category, sizes constant)
/// plus one SceneParticipant per annotation, linked across time. Speed is a
/// finite difference over consecutive appearances; the first appearance
/// takes the forward difference.
pub fn build_participants(g: &mut KnowledgeGraph, trips: &RawTripSet) -> Result<(), CompileError> {
    // registry pass: category and size constancy
    struct Reg {
        category: ParticipantCategory,
        size: (f64, f64, f64),
        is_ego: bool,
    }
    let mut registry: HashMap<&str, Reg> = HashMap::new();
    let mut order: Vec<&str> = Vec::new();
    for (_, seq) in trips.sequences() {
        for scene in &seq.scenes {
            for a in &scene.annotations {
                match registry.get(a.agent_id.as_str()) {
                    None => {
                        registry.insert(
                            &a.agent_id,
                            Reg { category: a.category, size: a.size, is_ego: a.is_ego },
                        );
                        order.push(&a.agent_id);
                    }
                    Some(reg) => {
                        if reg.category != a.category {
                            return Err(CompileError::InconsistentCategory {
                                agent: a.agent_id.clone(),
                            });
                        }
                        let d = (reg.size.0 - a.size.0).abs()
                            + (reg.size.1 - a.size.1).abs()
                            + (reg.size.2 - a.size.2).abs();
                        if d > 1e-6 {
                            return Err(CompileError::InconsistentSize {
                                agent: a.agent_id.clone(),
                            });
                        }
                    }
                }
            }
        }
    }

    for agent in &order {
        let reg = &registry[agent];
        let mut attrs = BTreeMap::new();
        attrs.insert(attr::LENGTH.to_string(), AttrValue::Float(reg.size.0));
        attrs.insert(attr::WIDTH.to_string(), AttrValue::Float(reg.size.1));
        attrs.insert(attr::HEIGHT.to_string(), AttrValue::Float(reg.size.2));
        if reg.is_ego {
            attrs.insert(attr::IS_EGO.to_string(), AttrValue::Bool(true));
        }
        g.add_node(NodeType::Participant(reg.category), agent.to_string(), attrs)?;
    }

    // per sequence: create scene participants with derived speed, then the
    // cross-time chain
    for (_, seq) in trips.sequences() {
        // appearances per agent in scene order
        let mut tracks: BTreeMap<&str, Vec<(usize, Point, i64)>> = BTreeMap::new();
        for (k, scene) in seq.scenes.iter().enumerate() {
            for a in &scene.annotations {
                tracks.entry(a.agent_id.as_str()).or_default().push((
                    k,
                    a.pose.position(),
                    scene.timestamp,
                ));
            }
        }
        let mut speed: HashMap<(&str, usize), f64> = HashMap::new();
        for (agent, track) in &tracks {
            for (i, (k, p, ts)) in track.iter().enumerate() {
                let s = if track.len() == 1 {
                    0.0
                } else if i == 0 {
                    let (_, p2, ts2) = track[1];
                    p.dist(p2) / ((ts2 - ts).max(1) as f64 / 1e6)
                } else {
                    let (_, p0, ts0) = track[i - 1];
                    p.dist(p0) / ((ts - ts0).max(1) as f64 / 1e6)
                };
                speed.insert((agent, *k), s);
            }
        }

        for (k, scene) in seq.scenes.iter().enumerate() {
            let sid = scene_node_id(&seq.id, scene.timestamp);
            for a in &scene.annotations {
                let sp = scene_participant_id(&sid, &a.agent_id);
                let mut attrs = BTreeMap::new();
                attrs.insert(attr::X.to_string(), AttrValue::Float(a.pose.x));
                attrs.insert(attr::Y.to_string(), AttrValue::Float(a.pose.y));
                attrs.insert(attr::ORIENTATION.to_string(), AttrValue::Float(a.pose.yaw));
                attrs.insert(
                    attr::SPEED.to_string(),
                    AttrValue::Float(speed[&(a.agent_id.as_str(), k)]),
                );
                if a.is_ego {
                    attrs.insert(attr::IS_EGO.to_string(), AttrValue::Bool(true));
                }
                g.add_node(NodeType::SceneParticipant, sp.clone(), attrs)?;
                g.add_edge(EdgeType::HasSceneParticipant, &sid, &sp)?;
                g.add_edge(EdgeType::IsSceneParticipantOf, &sp, &a.agent_id)?;
            }
        }

        for (agent, track) in &tracks {
            for w in track.windows(2) {
                let (_, _, ts0) = w[0];
                let (_, _, ts1) = w[1];
                let s0 = scene_participant_id(&scene_node_id(&seq.id, ts0), agent);
                let s1 = scene_participant_id(&scene_node_id(&seq.id, ts1), agent);
                g.add_edge(EdgeType::InNextScene, &s0, &s1)?;
            }
        }
    }
    Ok(())
}

/// Containment probes for one agent position: which lanes (and through them
/// snippets and blocks) and which area elements carry the point.
fn is_on_targets(
    p: Point,
    footprint: Option<&[Point]>,
    geom: &MapGeometry,
) -> (Vec<(String, f64)>, Vec<String>) {
    let probes: Vec<Point> = match footprint {
        Some(corners) => std::iter::once(p).chain(corners.iter().copied()).collect(),
        None => vec![p],
    };
    let mut lanes = Vec::new();
    for (id, lane) in &geom.lanes {
        if !lane.polygon.bbox().expanded(1e-9).contains(p)
            && !probes.iter().any(|q| lane.polygon.bbox().expanded(1e-9).contains(*q))
        {
            continue;
        }
        if probes.iter().any(|q| lane.polygon.contains(*q)) {
            let arc = lane.centerline.project(p).arc_s;
            lanes.push((id.clone(), arc));
        }
    }
    let mut areas = Vec::new();
    for (id, area) in &geom.areas {
        if !probes.iter().any(|q| area.polygon.bbox().expanded(1e-9).contains(*q)) {
            continue;
        }
        if probes.iter().any(|q| area.polygon.contains(*q)) {
            areas.push(id.clone());
        }
    }
    (lanes, areas)
}

fn footprint_corners(p: Point, yaw: f64, length: f64, width: f64) -> Vec<Point> {
    let (hl, hw) = (length / 2.0, width / 2.0);
    [(hl, hw), (hl, -hw), (-hl, -hw), (-hl, hw)]
        .iter()
        .map(|&(x, y)| Point::new(x, y).rotated(yaw).add(p))
        .collect()
}

/// Link every SceneParticipant to the map elements containing its position:
/// containing lanes, the snippet at the projected arc position, the lane's
/// road block, and any containing area elements.
pub fn link_is_on(
    g: &mut KnowledgeGraph,
    trips: &RawTripSet,
    geom: &MapGeometry,
    cfg: &Config,
) -> Result<(), CompileError> {
    for (_, seq) in trips.sequences() {
        for scene in &seq.scenes {
            let sid = scene_node_id(&seq.id, scene.timestamp);
            for a in &scene.annotations {
                let sp = scene_participant_id(&sid, &a.agent_id);
                let p = a.pose.position();
                let corners;
                let footprint = if cfg.is_on_footprint {
                    corners = footprint_corners(p, a.pose.yaw, a.size.0, a.size.1);
                    Some(corners.as_slice())
                } else {
                    None
                };
                let (lanes, areas) = is_on_targets(p, footprint, geom);
                let mut blocks_seen: BTreeSet<String> = BTreeSet::new();
                for (lane_id, arc) in &lanes {
                    g.add_edge(EdgeType::IsOn, &sp, lane_id)?;
                    if let Some(snippet) = geom.snippet_at(lane_id, *arc) {
                        g.add_edge(EdgeType::IsOn, &sp, &snippet)?;
                    }
                    let block = &geom.lanes[lane_id].block;
                    if !block.is_empty() && blocks_seen.insert(block.clone()) {
                        g.add_edge(EdgeType::IsOn, &sp, block)?;
                    }
                }
                for area in &areas {
                    g.add_edge(EdgeType::IsOn, &sp, area)?;
                }
            }
        }
    }
    Ok(())
}

struct SpInfo {
    idx: u32,
    id: String,
    /// (lane id, arc position of the projected point)
    lanes: Vec<(String, f64)>,
    conns: Vec<String>,
}

fn lanes_reachable(g: &KnowledgeGraph, from: &str, hops: u32) -> HashSet<String> {
    let mut out = HashSet::new();
    let mut frontier = vec![from.to_string()];
    for _ in 0..hops {
        let mut next = Vec::new();
        for lane in frontier {
            if let Ok(ns) = g.neighbors(&lane, EdgeType::HasNextLane, Direction::Out) {
                for n in ns {
                    if out.insert(n.to_string()) {
                        next.push(n.to_string());
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

/// Classify the semantic relation for every ordered pair of agents in one
/// scene. A pair gets at most one kind; following beats crossing beats
/// side-by-side. Edges are materialized into the graph.
pub fn compute_agent_relations(
    g: &mut KnowledgeGraph,
    geom: &MapGeometry,
    cfg: &Config,
    scene_id: &str,
) -> Result<Vec<AgentRelation>, CompileError> {
    let scene_idx = g
        .index_of(scene_id)
        .ok_or_else(|| crate::kg::GraphError::UnknownNode(scene_id.to_string()))?;
    let sps: Vec<u32> =
        g.neighbors_idx(scene_idx, EdgeType::HasSceneParticipant, Direction::Out).collect();

    let mut infos: Vec<SpInfo> = Vec::with_capacity(sps.len());
    for &idx in &sps {
        let id = g.node_at(idx).id.clone();
        let pos = Point::new(
            g.attr_f64(idx, attr::X).unwrap_or(0.0),
            g.attr_f64(idx, attr::Y).unwrap_or(0.0),
        );
        let mut lanes = Vec::new();
        for lane_idx in g.neighbors_idx(idx, EdgeType::IsOn, Direction::Out) {
            let node = g.node_at(lane_idx);
            if node.ty == NodeType::Lane {
                let arc = geom.lanes[&node.id].centerline.project(pos).arc_s;
                lanes.push((node.id.clone(), arc));
            }
        }
        let mut conns = Vec::new();
        for (cid, conn) in &geom.connectors {
            if conn.centerline.bbox().expanded(cfg.relation_connector_m).contains(pos)
                && conn.centerline.project(pos).distance < cfg.relation_connector_m
            {
                conns.push(cid.clone());
            }
        }
        infos.push(SpInfo { idx, id, lanes, conns });
    }

    // per-agent reach sets
    let reach_lanes: Vec<HashSet<String>> = infos
        .iter()
        .map(|info| {
            let mut set = HashSet::new();
            for (lane, _) in &info.lanes {
                set.extend(lanes_reachable(g, lane, cfg.relation_hop_limit));
            }
            set
        })
        .collect();
    let reach_conns: Vec<Vec<String>> = infos
        .iter()
        .map(|info| {
            let mut set: Vec<String> = info.conns.clone();
            let mut lanes_1hop: Vec<&str> = info.lanes.iter().map(|(l, _)| l.as_str()).collect();
            let one_hop: Vec<String> = info
                .lanes
                .iter()
                .flat_map(|(l, _)| lanes_reachable(g, l, 1))
                .collect();
            lanes_1hop.extend(one_hop.iter().map(String::as_str));
            for (cid, conn) in &geom.connectors {
                if lanes_1hop.contains(&conn.incoming.as_str()) && !set.contains(cid) {
                    set.push(cid.clone());
                }
            }
            set
        })
        .collect();

    let mut out = Vec::new();
    for i in 0..infos.len() {
        for j in 0..infos.len() {
            if i == j {
                continue;
            }
            let (a, b) = (&infos[i], &infos[j]);
            if a.lanes.is_empty() && a.conns.is_empty() {
                continue;
            }

            let longitudinal = a.lanes.iter().any(|(la, sa)| {
                b.lanes.iter().any(|(lb, sb)| la == lb && sb > sa)
            }) || b.lanes.iter().any(|(lb, _)| reach_lanes[i].contains(lb));

            let kind = if longitudinal {
                Some(RelationKind::Longitudinal)
            } else if intersecting(geom, cfg, &reach_conns[i], &reach_conns[j]) {
                Some(RelationKind::Intersecting)
            } else if lateral(g, geom, a, b) {
                Some(RelationKind::Lateral)
            } else {
                None
            };

            if let Some(kind) = kind {
                g.add_edge_idx(kind.edge(), a.idx, b.idx)?;
                out.push(AgentRelation {
                    kind,
                    src: a.id.clone(),
                    dst: b.id.clone(),
                    scene: scene_id.to_string(),
                });
            }
        }
    }
    Ok(out)
}

fn intersecting(
    geom: &MapGeometry,
    cfg: &Config,
    conns_a: &[String],
    conns_b: &[String],
) -> bool {
    for ca in conns_a {
        for cb in conns_b {
            if ca == cb {
                continue;
            }
            let (ga, gb) = (&geom.connectors[ca], &geom.connectors[cb]);
            let share_junction = ga.intersections.iter().any(|i| gb.intersections.contains(i));
            if !share_junction {
                continue;
            }
            if ga.centerline.min_distance_to_polyline(&gb.centerline)
                < 2.0 * cfg.connector_buffer_m
            {
                return true;
            }
        }
    }
    false
}

fn lateral(g: &KnowledgeGraph, geom: &MapGeometry, a: &SpInfo, b: &SpInfo) -> bool {
    for (la, _) in &a.lanes {
        for (lb, _) in &b.lanes {
            if la == lb {
                continue;
            }
            let linked = g
                .neighbors(la, EdgeType::HasLeftLane, Direction::Out)
                .map(|ns| ns.iter().any(|n| n == lb))
                .unwrap_or(false)
                || g.neighbors(la, EdgeType::HasRightLane, Direction::Out)
                    .map(|ns| ns.iter().any(|n| n == lb))
                    .unwrap_or(false);
            if linked || geom.lanes[la].block == geom.lanes[lb].block {
                return true;
            }
        }
    }
    false
}

/// Full agent compilation: temporal skeleton, participants, containment
/// links and per-scene relations.
pub fn compile_agents(
    g: &mut KnowledgeGraph,
    trips: &RawTripSet,
    map_locations: &[RawLocation],
    geom: &MapGeometry,
    cfg: &Config,
) -> Result<Vec<String>, CompileError> {
    build_temporal(g, trips, map_locations)?;
    build_participants(g, trips)?;
    link_is_on(g, trips, geom, cfg)?;
    for (_, seq) in trips.sequences() {
        for scene in &seq.scenes {
            let sid = scene_node_id(&seq.id, scene.timestamp);
            compute_agent_relations(g, geom, cfg, &sid)?;
        }
    }
    Ok(Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Pose2D;
    use crate::scene_ir::{RawAnnotation, RawScene, RawSequence, RawTrip};

    fn loc() -> RawLocation {
        RawLocation {
            id: "loc0".into(),
            name: "test".into(),
            right_hand_traffic: true,
            geo_origin: None,
        }
    }

    fn ego_annotation(x: f64) -> RawAnnotation {
        RawAnnotation {
            agent_id: "ego".into(),
            category: ParticipantCategory::VehicleCar,
            pose: Pose2D::new(x, 0.0, 0.0),
            size: (4.5, 1.8, 1.6),
            is_ego: true,
        }
    }

    fn car_annotation(id: &str, x: f64, y: f64) -> RawAnnotation {
        RawAnnotation {
            agent_id: id.into(),
            category: ParticipantCategory::VehicleCar,
            pose: Pose2D::new(x, y, 0.0),
            size: (4.5, 1.8, 1.6),
            is_ego: false,
        }
    }

    fn trips_with_scenes(scenes: Vec<RawScene>) -> RawTripSet {
        RawTripSet {
            trips: vec![RawTrip {
                id: "t1".into(),
                location_id: "loc0".into(),
                sequences: vec![RawSequence { id: "s1".into(), scenes }],
            }],
            locations: vec![loc()],
        }
    }

    fn scene(ts: i64, annotations: Vec<RawAnnotation>) -> RawScene {
        RawScene {
            timestamp: ts,
            ego_pose: Pose2D::new(0.0, 0.0, 0.0),
            annotations,
        }
    }

    #[test]
    fn three_scene_sequence_builds_chains() {
        let trips = trips_with_scenes(vec![
            scene(0, vec![ego_annotation(0.0)]),
            scene(500_000, vec![ego_annotation(1.0)]),
            scene(1_000_000, vec![ego_annotation(2.0)]),
        ]);
        let mut g = KnowledgeGraph::new();
        build_temporal(&mut g, &trips, &[]).unwrap();
        let stats = g.stats();
        assert_eq!(stats.nodes_by_type.get("Scene"), Some(&3));
        assert_eq!(stats.edges_by_type.get("hasNextScene"), Some(&2));
        assert_eq!(stats.edges_by_type.get("hasPreviousScene"), Some(&2));
    }

    #[test]
    fn single_scene_sequence_is_chainless_but_valid() {
        let trips = trips_with_scenes(vec![scene(0, vec![ego_annotation(0.0)])]);
        let mut g = KnowledgeGraph::new();
        build_temporal(&mut g, &trips, &[]).unwrap();
        build_participants(&mut g, &trips).unwrap();
        let stats = g.stats();
        assert_eq!(stats.edges_by_type.get("hasNextScene"), None);
        let violations = crate::kg::validate_schema(&g, &Config::default());
        // lanes/blocks are absent, so only rules touching them could fire; none should
        assert!(violations.is_empty(), "{violations:?}");
    }

    #[test]
    fn counting_two_trips_two_sequences_ten_scenes() {
        let mk_seq = |sid: &str| RawSequence {
            id: sid.into(),
            scenes: (0..10)
                .map(|k| scene(k * 500_000, vec![ego_annotation(k as f64)]))
                .collect(),
        };
        let trips = RawTripSet {
            trips: vec![
                RawTrip {
                    id: "t1".into(),
                    location_id: "loc0".into(),
                    sequences: vec![mk_seq("s1"), mk_seq("s2")],
                },
                RawTrip {
                    id: "t2".into(),
                    location_id: "loc0".into(),
                    sequences: vec![mk_seq("s3"), mk_seq("s4")],
                },
            ],
            locations: vec![loc()],
        };
        let mut g = KnowledgeGraph::new();
        build_temporal(&mut g, &trips, &[]).unwrap();
        let stats = g.stats();
        assert_eq!(stats.nodes_by_type.get("Sequence"), Some(&4));
        assert_eq!(stats.nodes_by_type.get("Scene"), Some(&40));
        assert_eq!(stats.edges_by_type.get("hasNextScene"), Some(&36));
    }

    #[test]
    fn participant_chain_and_speed() {
        // agent moves 1 m per 0.5 s step
        let trips = trips_with_scenes(vec![
            scene(0, vec![ego_annotation(0.0), car_annotation("a", 0.0, 5.0)]),
            scene(500_000, vec![ego_annotation(1.0), car_annotation("a", 1.0, 5.0)]),
            scene(1_000_000, vec![ego_annotation(2.0), car_annotation("a", 2.0, 5.0)]),
        ]);
        let mut g = KnowledgeGraph::new();
        build_temporal(&mut g, &trips, &[]).unwrap();
        build_participants(&mut g, &trips).unwrap();

        let stats = g.stats();
        assert_eq!(stats.nodes_by_type.get("SceneParticipant"), Some(&6));
        assert_eq!(stats.nodes_by_type.get("VehicleCar"), Some(&2));
        assert_eq!(stats.edges_by_type.get("inNextScene"), Some(&4));

        for ts in [0i64, 500_000, 1_000_000] {
            let sp = scene_participant_id(&scene_node_id("s1", ts), "a");
            let idx = g.index_of(&sp).unwrap();
            let v = g.attr_f64(idx, attr::SPEED).unwrap();
            assert!((v - 2.0).abs() < 1e-9, "speed at {ts} was {v}");
        }
        // ego flagged on both participant and scene participant
        let ego_idx = g.index_of("ego").unwrap();
        assert_eq!(g.attr_bool(ego_idx, attr::IS_EGO), Some(true));
        let sp = scene_participant_id(&scene_node_id("s1", 0), "ego");
        assert_eq!(g.attr_bool(g.index_of(&sp).unwrap(), attr::IS_EGO), Some(true));
    }

    #[test]
    fn category_change_is_rejected() {
        let mut second = car_annotation("a", 1.0, 5.0);
        second.category = ParticipantCategory::VehicleTruck;
        let trips = trips_with_scenes(vec![
            scene(0, vec![ego_annotation(0.0), car_annotation("a", 0.0, 5.0)]),
            scene(500_000, vec![ego_annotation(1.0), second]),
        ]);
        let mut g = KnowledgeGraph::new();
        build_temporal(&mut g, &trips, &[]).unwrap();
        assert!(matches!(
            build_participants(&mut g, &trips).unwrap_err(),
            CompileError::InconsistentCategory { .. }
        ));
    }
}
