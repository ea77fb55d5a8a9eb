//! Closed-world integrity checking. The ontology's class definitions are
//! read as executable constraints over the finished graph, not as inference
//! licenses: a definition like "every connector has exactly one incoming
//! lane" fails validation when the edge is absent instead of inferring it.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use crate::config::Config;
use crate::geometry::{wkt, Polygon};

use super::graph::{Direction, KnowledgeGraph};
use super::schema::{attr, EdgeType, NodeType};

/// Rule catalogue. The first nineteen entries mirror the ontology's class
/// definitions one for one; the last two are attribute-range and signature
/// sweeps.
pub const RULES: &[(&str, &str)] = &[
    ("scene-chain", "hasNextScene/hasPreviousScene are mutual inverses with at most one of each per Scene"),
    ("sequence-nonempty", "every Sequence has at least one hasScene edge"),
    ("trip-nonempty", "every Trip has at least one hasSequence edge"),
    ("location-referenced", "every Location is the target of at least one hasLocation edge"),
    ("scene-participant-links", "every SceneParticipant has exactly one isSceneParticipantOf and exactly one owning Scene"),
    ("participant-referenced", "every Participant backs at least one SceneParticipant"),
    ("lane-link-symmetry", "hasNextLane/hasPreviousLane and hasLeftLane/hasRightLane are mutual inverses"),
    ("connector-lanes", "every LaneConnector has exactly one incoming and one outgoing lane"),
    ("switch-symmetry", "every switchVia edge is answered by a reverse switchVia edge"),
    ("slice-parent-width", "every LaneSlice has exactly one parent lane and a positive width"),
    ("pose-ownership", "every OrderedPose belongs to at least one LaneConnector"),
    ("pose-attrs", "every Pose carries x, y and an orientation in (-pi, pi]"),
    ("stop-area-shape", "every StopArea carries a polygon shape"),
    ("traffic-light-pose-type", "every TrafficLight has exactly one pose and a type of H or V"),
    ("crossing-max-walkways", "no PedCrossing connects more than two walkways"),
    ("walkway-adjacency", "walkwayIsNextTo holds exactly for walkway/lane pairs closer than the threshold"),
    ("carpark-adjacency", "carparkIsNextTo holds exactly for carpark/lane pairs closer than the threshold"),
    ("road-block-membership", "every Lane lies on exactly one RoadBlock and hasOpposingRoadBlock is symmetric"),
    ("intersection-connectors", "every Intersection hosts at least one LaneConnector"),
    ("attr-range", "attribute values lie within their documented ranges"),
    ("edge-signature", "every stored edge satisfies its domain/range signature"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub rule: &'static str,
    pub subjects: Vec<String>,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}", self.rule, self.message)
    }
}

struct Checker<'a> {
    g: &'a KnowledgeGraph,
    cfg: &'a Config,
    out: Vec<Violation>,
}

impl<'a> Checker<'a> {
    fn push(&mut self, rule: &'static str, subjects: Vec<String>, message: String) {
        self.out.push(Violation { rule, subjects, message });
    }

    fn out_count(&self, idx: u32, ty: EdgeType) -> usize {
        self.g.neighbors_idx(idx, ty, Direction::Out).count()
    }

    fn in_count(&self, idx: u32, ty: EdgeType) -> usize {
        self.g.neighbors_idx(idx, ty, Direction::In).count()
    }

    fn has_edge(&self, src: u32, ty: EdgeType, dst: u32) -> bool {
        self.g.neighbors_idx(src, ty, Direction::Out).any(|n| n == dst)
    }

    fn id(&self, idx: u32) -> String {
        self.g.node_at(idx).id.clone()
    }

    fn require_inverse(&mut self, rule: &'static str, fwd: EdgeType, inv: EdgeType) {
        for src in self.g.node_indices() {
            let targets: Vec<u32> = self.g.neighbors_idx(src, fwd, Direction::Out).collect();
            for dst in targets {
                if !self.has_edge(dst, inv, src) {
                    self.push(
                        rule,
                        vec![self.id(src), self.id(dst)],
                        format!(
                            "{} '{}' -> '{}' lacks the inverse {} edge",
                            fwd.name(),
                            self.id(src),
                            self.id(dst),
                            inv.name()
                        ),
                    );
                }
            }
        }
    }

    fn polygon_of(&self, idx: u32, cache: &mut HashMap<u32, Option<Polygon>>) -> Option<Polygon> {
        cache
            .entry(idx)
            .or_insert_with(|| {
                let geom = self.g.first_neighbor(idx, EdgeType::HasShape, Direction::Out)?;
                let text = self.g.attr_str(geom, attr::WKT)?;
                wkt::parse_polygon(text).ok()
            })
            .clone()
    }

    fn check_adjacency_rule(
        &mut self,
        rule: &'static str,
        area_pred: fn(NodeType) -> bool,
        edge: EdgeType,
        threshold: f64,
    ) {
        let mut cache: HashMap<u32, Option<Polygon>> = HashMap::new();
        let lanes: Vec<u32> =
            self.g.node_indices().filter(|&i| self.g.node_at(i).ty == NodeType::Lane).collect();
        let areas: Vec<u32> =
            self.g.node_indices().filter(|&i| area_pred(self.g.node_at(i).ty)).collect();
        for &a in &areas {
            let Some(ap) = self.polygon_of(a, &mut cache) else { continue };
            let abox = ap.bbox();
            for &l in &lanes {
                let Some(lp) = self.polygon_of(l, &mut cache) else { continue };
                if abox.distance(&lp.bbox()) >= threshold {
                    if self.has_edge(a, edge, l) {
                        self.push(
                            rule,
                            vec![self.id(a), self.id(l)],
                            format!(
                                "'{}' and '{}' are {} apart but linked by {}",
                                self.id(a),
                                self.id(l),
                                abox.distance(&lp.bbox()),
                                edge.name()
                            ),
                        );
                    }
                    continue;
                }
                let d = ap.distance(&lp);
                let linked = self.has_edge(a, edge, l);
                if d < threshold && !linked {
                    self.push(
                        rule,
                        vec![self.id(a), self.id(l)],
                        format!(
                            "'{}' is {:.3} m from lane '{}' but has no {} edge",
                            self.id(a),
                            d,
                            self.id(l),
                            edge.name()
                        ),
                    );
                } else if d >= threshold && linked {
                    self.push(
                        rule,
                        vec![self.id(a), self.id(l)],
                        format!(
                            "'{}' is {:.3} m from lane '{}' yet linked by {}",
                            self.id(a),
                            d,
                            self.id(l),
                            edge.name()
                        ),
                    );
                }
            }
        }
    }

    fn run(mut self) -> Vec<Violation> {
        let g = self.g;

        // scene-chain
        self.require_inverse("scene-chain", EdgeType::HasNextScene, EdgeType::HasPreviousScene);
        self.require_inverse("scene-chain", EdgeType::HasPreviousScene, EdgeType::HasNextScene);
        for idx in g.node_indices() {
            if g.node_at(idx).ty == NodeType::Scene {
                for ty in [EdgeType::HasNextScene, EdgeType::HasPreviousScene] {
                    if self.out_count(idx, ty) > 1 {
                        self.push(
                            "scene-chain",
                            vec![self.id(idx)],
                            format!("scene '{}' has multiple {} edges", self.id(idx), ty.name()),
                        );
                    }
                }
            }
        }

        for idx in g.node_indices() {
            let node = g.node_at(idx);
            match node.ty {
                NodeType::Sequence => {
                    if self.out_count(idx, EdgeType::HasScene) == 0 {
                        self.push(
                            "sequence-nonempty",
                            vec![node.id.clone()],
                            format!("sequence '{}' has no scenes", node.id),
                        );
                    }
                }
                NodeType::Trip => {
                    if self.out_count(idx, EdgeType::HasSequence) == 0 {
                        self.push(
                            "trip-nonempty",
                            vec![node.id.clone()],
                            format!("trip '{}' has no sequences", node.id),
                        );
                    }
                }
                NodeType::Location => {
                    if self.in_count(idx, EdgeType::HasLocation) == 0 {
                        self.push(
                            "location-referenced",
                            vec![node.id.clone()],
                            format!("location '{}' is referenced by no trip", node.id),
                        );
                    }
                }
                NodeType::SceneParticipant => {
                    let of = self.out_count(idx, EdgeType::IsSceneParticipantOf);
                    let owners = self.in_count(idx, EdgeType::HasSceneParticipant);
                    if of != 1 || owners != 1 {
                        self.push(
                            "scene-participant-links",
                            vec![node.id.clone()],
                            format!(
                                "scene participant '{}' has {of} isSceneParticipantOf and {owners} owning scene(s)",
                                node.id
                            ),
                        );
                    }
                }
                NodeType::Participant(_) => {
                    if self.in_count(idx, EdgeType::IsSceneParticipantOf) == 0 {
                        self.push(
                            "participant-referenced",
                            vec![node.id.clone()],
                            format!("participant '{}' backs no scene participant", node.id),
                        );
                    }
                }
                NodeType::LaneConnector => {
                    let inc = self.out_count(idx, EdgeType::HasIncomingLane);
                    let out = self.out_count(idx, EdgeType::HasOutgoingLane);
                    if inc != 1 || out != 1 {
                        self.push(
                            "connector-lanes",
                            vec![node.id.clone()],
                            format!(
                                "connector '{}' has {inc} incoming and {out} outgoing lane(s)",
                                node.id
                            ),
                        );
                    }
                }
                NodeType::LaneSlice => {
                    let parents = self.in_count(idx, EdgeType::LaneHasSlice);
                    let width = g.attr_f64(idx, attr::SLICE_WIDTH);
                    if parents != 1 || !width.is_some_and(|w| w > 0.0) {
                        self.push(
                            "slice-parent-width",
                            vec![node.id.clone()],
                            format!(
                                "lane slice '{}' has {parents} parent lane(s), width {width:?}",
                                node.id
                            ),
                        );
                    }
                }
                NodeType::OrderedPose => {
                    if self.in_count(idx, EdgeType::ConnectorHasPose) == 0 {
                        self.push(
                            "pose-ownership",
                            vec![node.id.clone()],
                            format!("ordered pose '{}' belongs to no connector", node.id),
                        );
                    }
                }
                NodeType::StopArea(_) => {
                    if self.out_count(idx, EdgeType::HasShape) == 0 {
                        self.push(
                            "stop-area-shape",
                            vec![node.id.clone()],
                            format!("stop area '{}' has no polygon shape", node.id),
                        );
                    }
                }
                NodeType::TrafficLight => {
                    let poses = self.out_count(idx, EdgeType::TrafficLightHasPose);
                    let tl_ok = matches!(g.attr_str(idx, attr::TL_TYPE), Some("H") | Some("V"));
                    if poses != 1 || !tl_ok {
                        self.push(
                            "traffic-light-pose-type",
                            vec![node.id.clone()],
                            format!(
                                "traffic light '{}' has {poses} pose(s), type {:?}",
                                node.id,
                                g.attr_str(idx, attr::TL_TYPE)
                            ),
                        );
                    }
                }
                NodeType::PedCrossing => {
                    let n = self.out_count(idx, EdgeType::ConnectsWalkways);
                    if n > 2 {
                        self.push(
                            "crossing-max-walkways",
                            vec![node.id.clone()],
                            format!("crossing '{}' connects {n} walkways (max 2)", node.id),
                        );
                    }
                }
                NodeType::Lane => {
                    if self.out_count(idx, EdgeType::IsLaneOnRoadBlock) != 1 {
                        self.push(
                            "road-block-membership",
                            vec![node.id.clone()],
                            format!(
                                "lane '{}' lies on {} road block(s) (expected 1)",
                                node.id,
                                self.out_count(idx, EdgeType::IsLaneOnRoadBlock)
                            ),
                        );
                    }
                }
                NodeType::Intersection => {
                    if self.in_count(idx, EdgeType::IsConnectorOnRoadSegment) == 0 {
                        self.push(
                            "intersection-connectors",
                            vec![node.id.clone()],
                            format!("intersection '{}' hosts no connector", node.id),
                        );
                    }
                }
                _ => {}
            }

            // pose-attrs applies to Pose and its subtypes
            if node.ty.is_pose_like() {
                let x = g.attr_f64(idx, attr::X);
                let y = g.attr_f64(idx, attr::Y);
                let yaw = g.attr_f64(idx, attr::ORIENTATION);
                let yaw_ok = yaw.is_some_and(|v| v > -PI && v <= PI);
                if x.is_none() || y.is_none() || !yaw_ok {
                    self.push(
                        "pose-attrs",
                        vec![node.id.clone()],
                        format!("pose '{}' lacks x/y or a normalized orientation", node.id),
                    );
                }
            }
        }

        // lane-link-symmetry
        self.require_inverse("lane-link-symmetry", EdgeType::HasNextLane, EdgeType::HasPreviousLane);
        self.require_inverse("lane-link-symmetry", EdgeType::HasPreviousLane, EdgeType::HasNextLane);
        self.require_inverse("lane-link-symmetry", EdgeType::HasLeftLane, EdgeType::HasRightLane);
        self.require_inverse("lane-link-symmetry", EdgeType::HasRightLane, EdgeType::HasLeftLane);

        // switch-symmetry: any reverse switchVia variant answers
        for src in g.node_indices() {
            let outs: Vec<(EdgeType, u32)> = g
                .out_edges(src)
                .iter()
                .filter(|(t, _)| matches!(t, EdgeType::SwitchVia(_)))
                .copied()
                .collect();
            for (_, dst) in outs {
                let answered = g
                    .out_edges(dst)
                    .iter()
                    .any(|(t, d)| matches!(t, EdgeType::SwitchVia(_)) && *d == src);
                if !answered {
                    self.push(
                        "switch-symmetry",
                        vec![self.id(src), self.id(dst)],
                        format!(
                            "switchVia '{}' -> '{}' lacks a reverse switchVia edge",
                            self.id(src),
                            self.id(dst)
                        ),
                    );
                }
            }
        }

        // hasOpposingRoadBlock symmetry
        self.require_inverse(
            "road-block-membership",
            EdgeType::HasOpposingRoadBlock,
            EdgeType::HasOpposingRoadBlock,
        );

        // geometric adjacency rules
        let is_next_to = self.cfg.is_next_to_m;
        self.check_adjacency_rule(
            "walkway-adjacency",
            |t| t == NodeType::Walkway,
            EdgeType::WalkwayIsNextTo,
            is_next_to,
        );
        self.check_adjacency_rule(
            "carpark-adjacency",
            |t| t == NodeType::CarparkArea,
            EdgeType::CarparkIsNextTo,
            is_next_to,
        );

        // attr-range
        let snippet_max = self.cfg.snippet_max_len_m + 1e-6;
        for idx in g.node_indices() {
            let node = g.node_at(idx);
            let mut bad: Vec<String> = Vec::new();
            if let Some(v) = g.attr_f64(idx, attr::SNIPPET_LENGTH) {
                if v <= 0.0 || v > snippet_max {
                    bad.push(format!("snippetHasLength {v}"));
                }
            }
            if let Some(v) = g.attr_f64(idx, attr::SLICE_WIDTH) {
                if v <= 0.0 {
                    bad.push(format!("laneSliceHasWidth {v}"));
                }
            }
            if let Some(v) = g.attr_f64(idx, attr::ORIENTATION) {
                if !(v > -PI && v <= PI) {
                    bad.push(format!("poseHasOrientation {v}"));
                }
            }
            if let Some(v) = g.attr_f64(idx, attr::SPEED) {
                if v < 0.0 {
                    bad.push(format!("speed {v}"));
                }
            }
            for name in [attr::LENGTH, attr::WIDTH, attr::HEIGHT] {
                if let Some(v) = g.attr_f64(idx, name) {
                    if v <= 0.0 {
                        bad.push(format!("{name} {v}"));
                    }
                }
            }
            if !bad.is_empty() {
                self.push(
                    "attr-range",
                    vec![node.id.clone()],
                    format!("node '{}' has out-of-range attributes: {}", node.id, bad.join(", ")),
                );
            }
        }

        // edge-signature full sweep
        for src in g.node_indices() {
            for (ty, dst) in g.out_edges(src) {
                let (st, dt) = (g.node_at(src).ty, g.node_at(*dst).ty);
                if !ty.domain_ok(st) || !ty.range_ok(dt) {
                    self.push(
                        "edge-signature",
                        vec![self.id(src), self.id(*dst)],
                        format!(
                            "edge {} from {} to {} violates its signature",
                            ty.name(),
                            st.class_name(),
                            dt.class_name()
                        ),
                    );
                }
            }
        }

        self.out.sort_by(|a, b| {
            (a.rule, &a.subjects, &a.message).cmp(&(b.rule, &b.subjects, &b.message))
        });
        self.out
    }
}

/// Run every rule in [`RULES`] against the graph. An empty result means the
/// graph conforms to the schema under its closed-world reading.
pub fn validate_schema(g: &KnowledgeGraph, cfg: &Config) -> Vec<Violation> {
    Checker { g, cfg, out: Vec::new() }.run()
}

/// Count of violations grouped by rule, for summaries.
pub fn violations_by_rule(violations: &[Violation]) -> BTreeMap<&'static str, usize> {
    let mut m = BTreeMap::new();
    for v in violations {
        *m.entry(v.rule).or_insert(0) += 1;
    }
    m
}

#[doc(hidden)]
pub mod fixtures {
    //! Minimal violating graphs, one per ontology rule. Shared by the unit
    //! tests here and by the acceptance suite.

    use std::collections::BTreeMap;
    use std::f64::consts::PI;

    use crate::geometry::{wkt, Point, Polygon};
    use crate::kg::{attr, AttrValue, EdgeType, GeomKind, KnowledgeGraph, NodeType};
    use crate::vocab::{DividerType, ParticipantCategory, StopKind};

    fn no_attrs() -> BTreeMap<String, AttrValue> {
        BTreeMap::new()
    }

    fn attrs(pairs: &[(&str, AttrValue)]) -> BTreeMap<String, AttrValue> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    fn square(x0: f64, y0: f64, side: f64) -> Polygon {
        Polygon::new(vec![
            Point::new(x0, y0),
            Point::new(x0 + side, y0),
            Point::new(x0 + side, y0 + side),
            Point::new(x0, y0 + side),
        ])
        .unwrap()
    }

    fn add_shape(g: &mut KnowledgeGraph, owner: &str, poly: &Polygon) {
        let gid = format!("{owner}_geom");
        g.add_node(
            NodeType::Geometry(GeomKind::Polygon),
            gid.clone(),
            attrs(&[(attr::WKT, AttrValue::Str(wkt::polygon(poly)))]),
        )
        .unwrap();
        g.add_edge(EdgeType::HasShape, owner, &gid).unwrap();
    }

    /// (rule id, builder of a graph violating exactly that rule).
    pub fn violating_graphs() -> Vec<(&'static str, KnowledgeGraph)> {
        let mut out: Vec<(&'static str, KnowledgeGraph)> = Vec::new();

        // scene-chain: next without the inverse previous
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::Scene, "s1", no_attrs()).unwrap();
        g.add_node(NodeType::Scene, "s2", no_attrs()).unwrap();
        g.add_edge(EdgeType::HasNextScene, "s1", "s2").unwrap();
        out.push(("scene-chain", g));

        // sequence-nonempty: a sequence with no scenes
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::Sequence, "seq", no_attrs()).unwrap();
        out.push(("sequence-nonempty", g));

        // trip-nonempty
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::Trip, "trip", no_attrs()).unwrap();
        out.push(("trip-nonempty", g));

        // location-referenced
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::Location, "loc", no_attrs()).unwrap();
        out.push(("location-referenced", g));

        // scene-participant-links: an orphan scene participant
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::SceneParticipant, "sp", no_attrs()).unwrap();
        out.push(("scene-participant-links", g));

        // participant-referenced
        let mut g = KnowledgeGraph::new();
        g.add_node(
            NodeType::Participant(ParticipantCategory::VehicleCar),
            "car",
            no_attrs(),
        )
        .unwrap();
        out.push(("participant-referenced", g));

        // lane-link-symmetry: next without previous
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::Lane, "a", no_attrs()).unwrap();
        g.add_node(NodeType::Lane, "b", no_attrs()).unwrap();
        g.add_edge(EdgeType::HasNextLane, "a", "b").unwrap();
        out.push(("lane-link-symmetry", g));

        // connector-lanes: a connector missing its lane links
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::LaneConnector, "c", no_attrs()).unwrap();
        out.push(("connector-lanes", g));

        // switch-symmetry: one-way lane change link
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::LaneSnippet, "sn_a", no_attrs()).unwrap();
        g.add_node(NodeType::LaneSnippet, "sn_b", no_attrs()).unwrap();
        g.add_edge(EdgeType::SwitchVia(DividerType::SingleDashed), "sn_a", "sn_b").unwrap();
        out.push(("switch-symmetry", g));

        // slice-parent-width: slice without parent lane or width
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::LaneSlice, "sl", no_attrs()).unwrap();
        out.push(("slice-parent-width", g));

        // pose-ownership: an ordered pose no connector owns
        let mut g = KnowledgeGraph::new();
        g.add_node(
            NodeType::OrderedPose,
            "op",
            attrs(&[
                (attr::X, AttrValue::Float(0.0)),
                (attr::Y, AttrValue::Float(0.0)),
                (attr::ORIENTATION, AttrValue::Float(0.0)),
            ]),
        )
        .unwrap();
        out.push(("pose-ownership", g));

        // pose-attrs: a pose with an out-of-range orientation
        let mut g = KnowledgeGraph::new();
        g.add_node(
            NodeType::Pose,
            "p",
            attrs(&[
                (attr::X, AttrValue::Float(0.0)),
                (attr::Y, AttrValue::Float(0.0)),
                (attr::ORIENTATION, AttrValue::Float(2.0 * PI)),
            ]),
        )
        .unwrap();
        out.push(("pose-attrs", g));

        // stop-area-shape: a stop area without a polygon
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::StopArea(StopKind::Yield), "stop", no_attrs()).unwrap();
        out.push(("stop-area-shape", g));

        // traffic-light-pose-type: missing pose, bad type string
        let mut g = KnowledgeGraph::new();
        g.add_node(
            NodeType::TrafficLight,
            "tl",
            attrs(&[(attr::TL_TYPE, AttrValue::Str("sideways".into()))]),
        )
        .unwrap();
        out.push(("traffic-light-pose-type", g));

        // crossing-max-walkways: three connected walkways
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::PedCrossing, "x", no_attrs()).unwrap();
        for i in 0..3 {
            let w = format!("w{i}");
            g.add_node(NodeType::Walkway, w.clone(), no_attrs()).unwrap();
            g.add_edge(EdgeType::ConnectsWalkways, "x", &w).unwrap();
        }
        out.push(("crossing-max-walkways", g));

        // walkway-adjacency: walkway 1 m from a lane but not linked
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::Walkway, "w", no_attrs()).unwrap();
        add_shape(&mut g, "w", &square(0.0, 4.5, 2.0));
        g.add_node(NodeType::Lane, "lane", no_attrs()).unwrap();
        add_shape(&mut g, "lane", &square(0.0, 0.0, 3.5));
        g.add_node(NodeType::RoadBlock, "rb", no_attrs()).unwrap();
        g.add_edge(EdgeType::IsLaneOnRoadBlock, "lane", "rb").unwrap();
        out.push(("walkway-adjacency", g));

        // carpark-adjacency: carpark linked to a lane far away
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::CarparkArea, "cp", no_attrs()).unwrap();
        add_shape(&mut g, "cp", &square(100.0, 100.0, 5.0));
        g.add_node(NodeType::Lane, "lane", no_attrs()).unwrap();
        add_shape(&mut g, "lane", &square(0.0, 0.0, 3.5));
        g.add_node(NodeType::RoadBlock, "rb", no_attrs()).unwrap();
        g.add_edge(EdgeType::IsLaneOnRoadBlock, "lane", "rb").unwrap();
        g.add_edge(EdgeType::CarparkIsNextTo, "cp", "lane").unwrap();
        out.push(("carpark-adjacency", g));

        // road-block-membership: a lane on no block
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::Lane, "lane", no_attrs()).unwrap();
        out.push(("road-block-membership", g));

        // intersection-connectors: an intersection hosting nothing
        let mut g = KnowledgeGraph::new();
        g.add_node(NodeType::Intersection, "junction", no_attrs()).unwrap();
        out.push(("intersection-connectors", g));

        // attr-range: an oversized snippet
        let mut g = KnowledgeGraph::new();
        g.add_node(
            NodeType::LaneSnippet,
            "sn",
            attrs(&[(attr::SNIPPET_LENGTH, AttrValue::Float(25.0))]),
        )
        .unwrap();
        out.push(("attr-range", g));

        out
    }
}
