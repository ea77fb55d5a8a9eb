//! Compiles a parsed map bundle into the map half of the knowledge graph:
//! lanes with their slices and snippets, connectors with ordered pose
//! chains, road blocks grouped from lateral adjacency, and infrastructure
//! with its explicit spatial relations.
//!
//! Next to the graph nodes the compiler keeps geometric side tables
//! ([`MapGeometry`]); agent matching, extraction and rendering work from
//! those instead of re-parsing WKT attributes.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::config::Config;
use crate::geometry::{
    convex_hull, heading_difference_deg, normalize_angle, wkt, Point, Polygon, Polyline, Pose2D,
};
use crate::kg::{attr, AttrValue, EdgeType, GeomKind, KnowledgeGraph, NodeType};
use crate::scene_ir::{RawLane, RawMapBundle};
use crate::vocab::DividerType;
use crate::CompileError;

/// Tolerance when checking that border segments cover the lane's arc span.
const COVERAGE_TOL: f64 = 1e-6;
/// Border endpoints projecting this close to the lane ends snap onto them;
/// absorbs sampling noise on curved borders without hiding real gaps.
const END_SNAP: f64 = 0.5;
/// Guard so a section sitting exactly on the length bound is not split by
/// floating-point noise.
const SPLIT_TOL: f64 = 1e-6;
/// Minimum section length considered at all.
const MIN_SECTION: f64 = 1e-9;

/// Center pose plus local lane width at one arc position.
#[derive(Debug, Clone, PartialEq)]
pub struct LaneSliceRec {
    pub center: Pose2D,
    pub width: f64,
    pub arc_s: f64,
}

/// Maximal piece of a lane with constant border type on each side,
/// length-capped by the configured bound.
#[derive(Debug, Clone, PartialEq)]
pub struct LaneSnippetRec {
    pub s_start: f64,
    pub s_end: f64,
    pub left: DividerType,
    pub right: DividerType,
}

impl LaneSnippetRec {
    pub fn length(&self) -> f64 {
        self.s_end - self.s_start
    }

    pub fn contains_arc(&self, s: f64) -> bool {
        s >= self.s_start - 1e-9 && s <= self.s_end + 1e-9
    }
}

#[derive(Debug, Clone)]
pub struct LaneGeom {
    pub centerline: Polyline,
    pub polygon: Polygon,
    pub slices: Vec<LaneSliceRec>,
    pub snippets: Vec<LaneSnippetRec>,
    pub block: String,
}

#[derive(Debug, Clone)]
pub struct ConnectorGeom {
    pub centerline: Polyline,
    pub incoming: String,
    pub outgoing: String,
    pub intersections: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AreaKind {
    Walkway,
    Carpark,
    Crossing,
    Stop,
    Intersection,
}

#[derive(Debug, Clone)]
pub struct AreaGeom {
    pub kind: AreaKind,
    pub polygon: Polygon,
}

/// Group of laterally adjacent same-direction lanes.
#[derive(Debug, Clone)]
pub struct BlockGeom {
    pub members: Vec<String>,
    pub mean_heading: f64,
    pub hull: Polygon,
}

#[derive(Debug, Clone, Default)]
pub struct MapGeometry {
    pub lanes: BTreeMap<String, LaneGeom>,
    pub connectors: BTreeMap<String, ConnectorGeom>,
    pub areas: BTreeMap<String, AreaGeom>,
    pub blocks: BTreeMap<String, BlockGeom>,
}

impl MapGeometry {
    /// Snippet node id for the snippet containing the given arc position.
    pub fn snippet_at(&self, lane_id: &str, arc_s: f64) -> Option<String> {
        let lane = self.lanes.get(lane_id)?;
        lane.snippets
            .iter()
            .position(|s| s.contains_arc(arc_s))
            .map(|k| snippet_node_id(lane_id, k))
    }
}

pub fn slice_node_id(lane: &str, k: usize) -> String {
    format!("{lane}_sl{k}")
}

pub fn snippet_node_id(lane: &str, k: usize) -> String {
    format!("{lane}_sn{k}")
}

pub fn pose_node_id(connector: &str, k: usize) -> String {
    format!("{connector}_p{k}")
}

pub fn geometry_node_id(owner: &str) -> String {
    format!("{owner}_geom")
}

// ---------------------------------------------------------------------------
// Pure per-lane computations
// ---------------------------------------------------------------------------

fn project_to_border(p: Point, border: &[crate::scene_ir::BorderSegment]) -> Option<Point> {
    border
        .iter()
        .map(|seg| seg.line.project(p))
        .min_by(|a, b| a.distance.partial_cmp(&b.distance).unwrap())
        .map(|proj| proj.foot)
}

/// Resample the centerline and measure the lane width at every pose by
/// projecting to both borders; the width is the distance between the two
/// projected points.
pub fn compute_lane_slices(lane: &RawLane, cfg: &Config) -> Result<Vec<LaneSliceRec>, CompileError> {
    if lane.left_border.is_empty() {
        return Err(CompileError::MissingBorder { lane: lane.id.clone(), side: "left" });
    }
    if lane.right_border.is_empty() {
        return Err(CompileError::MissingBorder { lane: lane.id.clone(), side: "right" });
    }
    let poses = lane.centerline.resample(cfg.pose_resolution_m)?;
    let mut out = Vec::with_capacity(poses.len());
    for (k, pose) in poses.iter().enumerate() {
        let p = pose.position();
        let left = project_to_border(p, &lane.left_border).expect("nonempty border");
        let right = project_to_border(p, &lane.right_border).expect("nonempty border");
        let arc_s = if k + 1 == poses.len() {
            lane.centerline.length()
        } else {
            k as f64 * cfg.pose_resolution_m
        };
        out.push(LaneSliceRec { center: *pose, width: left.dist(right), arc_s });
    }
    Ok(out)
}

/// Arc intervals covered by each border segment, as (start, end, divider).
fn border_intervals(
    lane: &RawLane,
    side: &'static str,
    border: &[crate::scene_ir::BorderSegment],
) -> Result<Vec<(f64, f64, DividerType)>, CompileError> {
    let len = lane.centerline.length();
    let mut iv: Vec<(f64, f64, DividerType)> = border
        .iter()
        .map(|seg| {
            let a = lane.centerline.project(seg.line.first()).arc_s;
            let b = lane.centerline.project(seg.line.last()).arc_s;
            let (mut lo, mut hi) = (a.min(b), a.max(b));
            if lo < END_SNAP {
                lo = 0.0;
            }
            if hi > len - END_SNAP {
                hi = len;
            }
            (lo, hi, seg.divider)
        })
        .collect();
    iv.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    // coverage check over [0, lane length]
    let mut covered = 0.0;
    for &(s0, s1, _) in &iv {
        if s0 > covered + COVERAGE_TOL {
            return Err(CompileError::BorderGap {
                lane: lane.id.clone(),
                side,
                from: covered,
                to: s0,
            });
        }
        covered = covered.max(s1);
    }
    if covered + COVERAGE_TOL < len {
        return Err(CompileError::BorderGap { lane: lane.id.clone(), side, from: covered, to: len });
    }
    Ok(iv)
}

fn divider_at(iv: &[(f64, f64, DividerType)], s: f64) -> DividerType {
    for &(s0, s1, d) in iv {
        if s >= s0 - COVERAGE_TOL && s <= s1 + COVERAGE_TOL {
            return d;
        }
    }
    // coverage was checked; fall back to the nearest interval
    iv.iter()
        .min_by(|a, b| {
            let da = (s - a.1).abs().min((a.0 - s).abs());
            let db = (s - b.1).abs().min((b.0 - s).abs());
            da.partial_cmp(&db).unwrap()
        })
        .map(|&(_, _, d)| d)
        .expect("borders nonempty")
}

/// Split the lane into maximal sections with constant border type per side,
/// then split any section longer than the bound into equal pieces.
pub fn compute_lane_snippets(
    lane: &RawLane,
    cfg: &Config,
) -> Result<Vec<LaneSnippetRec>, CompileError> {
    if lane.left_border.is_empty() {
        return Err(CompileError::MissingBorder { lane: lane.id.clone(), side: "left" });
    }
    if lane.right_border.is_empty() {
        return Err(CompileError::MissingBorder { lane: lane.id.clone(), side: "right" });
    }
    let len = lane.centerline.length();
    let left_iv = border_intervals(lane, "left", &lane.left_border)?;
    let right_iv = border_intervals(lane, "right", &lane.right_border)?;

    let mut cuts: Vec<f64> = vec![0.0, len];
    for &(s0, s1, _) in left_iv.iter().chain(&right_iv) {
        cuts.push(s0.clamp(0.0, len));
        cuts.push(s1.clamp(0.0, len));
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);

    // sections between cuts, merged when the divider pair does not change
    let mut sections: Vec<LaneSnippetRec> = Vec::new();
    for w in cuts.windows(2) {
        let (s0, s1) = (w[0], w[1]);
        if s1 - s0 <= MIN_SECTION {
            continue;
        }
        let mid = (s0 + s1) / 2.0;
        let left = divider_at(&left_iv, mid);
        let right = divider_at(&right_iv, mid);
        match sections.last_mut() {
            Some(prev) if prev.left == left && prev.right == right => prev.s_end = s1,
            _ => sections.push(LaneSnippetRec { s_start: s0, s_end: s1, left, right }),
        }
    }

    let mut out = Vec::with_capacity(sections.len());
    for sec in sections {
        let l = sec.length();
        if l > cfg.snippet_max_len_m + SPLIT_TOL {
            let pieces = ((l - SPLIT_TOL) / cfg.snippet_max_len_m).ceil() as usize;
            let piece_len = l / pieces as f64;
            for k in 0..pieces {
                out.push(LaneSnippetRec {
                    s_start: sec.s_start + k as f64 * piece_len,
                    s_end: if k + 1 == pieces { sec.s_end } else { sec.s_start + (k + 1) as f64 * piece_len },
                    left: sec.left,
                    right: sec.right,
                });
            }
        } else {
            out.push(sec);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Compilation pipeline
// ---------------------------------------------------------------------------

struct LateralPair {
    a: usize,
    b: usize,
    /// true when lane `b` lies to the left of lane `a`.
    b_left_of_a: bool,
}

fn border_union_distance(
    a: &[crate::scene_ir::BorderSegment],
    b: &[crate::scene_ir::BorderSegment],
) -> Option<f64> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let mut best = f64::INFINITY;
    for sa in a {
        for sb in b {
            best = best.min(sa.line.min_distance_to_polyline(&sb.line));
        }
    }
    Some(best)
}

fn lateral_pairs(raw: &RawMapBundle, cfg: &Config) -> Vec<LateralPair> {
    let n = raw.lanes.len();
    let boxes: Vec<_> = raw.lanes.iter().map(|l| l.polygon.bbox()).collect();
    let headings: Vec<f64> = raw.lanes.iter().map(|l| l.centerline.mean_heading()).collect();
    let centroids: Vec<Point> = raw.lanes.iter().map(|l| l.polygon.centroid()).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if boxes[i].distance(&boxes[j]) >= cfg.lateral_adjacency_m {
                continue;
            }
            if heading_difference_deg(headings[i], headings[j]) >= cfg.lateral_heading_tol_deg {
                continue;
            }
            let dir = Point::new(headings[i].cos(), headings[i].sin());
            let offset = centroids[j].sub(centroids[i]);
            let b_left_of_a = dir.cross(offset) > 0.0;
            let (fa, fb) = if b_left_of_a {
                (&raw.lanes[i].left_border, &raw.lanes[j].right_border)
            } else {
                (&raw.lanes[i].right_border, &raw.lanes[j].left_border)
            };
            let d = border_union_distance(fa, fb)
                .unwrap_or_else(|| raw.lanes[i].polygon.distance(&raw.lanes[j].polygon));
            if d < cfg.lateral_adjacency_m {
                out.push(LateralPair { a: i, b: j, b_left_of_a });
            }
        }
    }
    out
}

fn circular_mean(headings: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sx, mut sy) = (0.0, 0.0);
    for h in headings {
        sx += h.cos();
        sy += h.sin();
    }
    normalize_angle(sy.atan2(sx))
}

/// Overlap of the two hulls' extents projected on the first block's axis.
fn axis_overlap(a: &BlockGeom, b: &BlockGeom) -> f64 {
    let axis = Point::new(a.mean_heading.cos(), a.mean_heading.sin());
    let span = |hull: &Polygon| {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in hull.ring() {
            let t = p.dot(axis);
            lo = lo.min(t);
            hi = hi.max(t);
        }
        (lo, hi)
    };
    let (a0, a1) = span(&a.hull);
    let (b0, b1) = span(&b.hull);
    a1.min(b1) - a0.max(b0)
}

struct MapBuild<'a> {
    raw: &'a RawMapBundle,
    cfg: &'a Config,
    geom: MapGeometry,
    warnings: Vec<String>,
    geo_origin: Option<(f64, f64)>,
    lateral: Vec<LateralPair>,
}

impl<'a> MapBuild<'a> {
    fn gps_wkt_polygon(&self, poly: &Polygon) -> Option<String> {
        let origin = self.geo_origin?;
        let ring: Vec<Point> = poly
            .ring()
            .iter()
            .map(|p| {
                let (lat, lon) = crate::geometry::enu_to_wgs84(*p, origin);
                Point::new(lon, lat)
            })
            .collect();
        let mut coords: Vec<String> =
            ring.iter().map(|p| format!("{:?} {:?}", p.x, p.y)).collect();
        coords.push(coords[0].clone());
        Some(format!("POLYGON (({}))", coords.join(", ")))
    }

    fn gps_wkt_linestring(&self, line: &Polyline) -> Option<String> {
        let origin = self.geo_origin?;
        let coords: Vec<String> = line
            .points()
            .iter()
            .map(|p| {
                let (lat, lon) = crate::geometry::enu_to_wgs84(*p, origin);
                format!("{lon:?} {lat:?}")
            })
            .collect();
        Some(format!("LINESTRING ({})", coords.join(", ")))
    }

    fn add_polygon_shape(
        &self,
        g: &mut KnowledgeGraph,
        owner: &str,
        poly: &Polygon,
    ) -> Result<(), CompileError> {
        let gid = geometry_node_id(owner);
        let mut attrs = BTreeMap::new();
        attrs.insert(attr::WKT.to_string(), AttrValue::Str(wkt::polygon(poly)));
        if let Some(gps) = self.gps_wkt_polygon(poly) {
            attrs.insert(attr::GPS_WKT.to_string(), AttrValue::Str(gps));
        }
        g.add_node(NodeType::Geometry(GeomKind::Polygon), gid.clone(), attrs)?;
        g.add_edge(EdgeType::HasShape, owner, &gid)?;
        Ok(())
    }

    fn add_linestring_shape(
        &self,
        g: &mut KnowledgeGraph,
        owner: &str,
        line: &Polyline,
    ) -> Result<(), CompileError> {
        let gid = geometry_node_id(owner);
        let mut attrs = BTreeMap::new();
        attrs.insert(attr::WKT.to_string(), AttrValue::Str(wkt::linestring(line.points())));
        if let Some(gps) = self.gps_wkt_linestring(line) {
            attrs.insert(attr::GPS_WKT.to_string(), AttrValue::Str(gps));
        }
        g.add_node(NodeType::Geometry(GeomKind::LineString), gid.clone(), attrs)?;
        g.add_edge(EdgeType::HasShape, owner, &gid)?;
        Ok(())
    }

    /// Lane and connector nodes, logical connectivity, lateral adjacency,
    /// per-lane slices and snippets, and connector pose chains.
    fn build_lane_graph(&mut self, g: &mut KnowledgeGraph) -> Result<(), CompileError> {
        // per-lane geometry in parallel, inserted in input order
        let per_lane: Vec<Result<(Vec<LaneSliceRec>, Vec<LaneSnippetRec>), CompileError>> = self
            .raw
            .lanes
            .par_iter()
            .map(|lane| {
                let slices = compute_lane_slices(lane, self.cfg)?;
                let snippets = compute_lane_snippets(lane, self.cfg)?;
                Ok((slices, snippets))
            })
            .collect();

        for (lane, computed) in self.raw.lanes.iter().zip(per_lane) {
            let (slices, snippets) = computed?;
            g.add_node(NodeType::Lane, lane.id.clone(), BTreeMap::new())?;

            for (k, slice) in slices.iter().enumerate() {
                let id = slice_node_id(&lane.id, k);
                let mut attrs = BTreeMap::new();
                attrs.insert(attr::X.to_string(), AttrValue::Float(slice.center.x));
                attrs.insert(attr::Y.to_string(), AttrValue::Float(slice.center.y));
                attrs.insert(attr::ORIENTATION.to_string(), AttrValue::Float(slice.center.yaw));
                attrs.insert(attr::SLICE_WIDTH.to_string(), AttrValue::Float(slice.width));
                g.add_node(NodeType::LaneSlice, id.clone(), attrs)?;
                g.add_edge(EdgeType::LaneHasSlice, &lane.id, &id)?;
                if k > 0 {
                    g.add_edge(EdgeType::HasNextLaneSlice, &slice_node_id(&lane.id, k - 1), &id)?;
                }
            }

            for (k, sn) in snippets.iter().enumerate() {
                let id = snippet_node_id(&lane.id, k);
                let mut attrs = BTreeMap::new();
                attrs.insert(attr::SNIPPET_LENGTH.to_string(), AttrValue::Float(sn.length()));
                attrs.insert(attr::LEFT_DIVIDER.to_string(), AttrValue::Str(sn.left.label().into()));
                attrs.insert(
                    attr::RIGHT_DIVIDER.to_string(),
                    AttrValue::Str(sn.right.label().into()),
                );
                g.add_node(NodeType::LaneSnippet, id.clone(), attrs)?;
                g.add_edge(EdgeType::HasLaneSnippet, &lane.id, &id)?;
                if k > 0 {
                    g.add_edge(EdgeType::HasNextLaneSnippet, &snippet_node_id(&lane.id, k - 1), &id)?;
                }
            }

            self.geom.lanes.insert(
                lane.id.clone(),
                LaneGeom {
                    centerline: lane.centerline.clone(),
                    polygon: lane.polygon.clone(),
                    slices,
                    snippets,
                    block: String::new(),
                },
            );
        }

        for conn in &self.raw.lane_connectors {
            g.add_node(NodeType::LaneConnector, conn.id.clone(), BTreeMap::new())?;
            g.add_edge(EdgeType::HasIncomingLane, &conn.id, &conn.incoming_lane)?;
            g.add_edge(EdgeType::HasOutgoingLane, &conn.id, &conn.outgoing_lane)?;

            let poses = conn.centerline.resample(self.cfg.pose_resolution_m)?;
            for (k, pose) in poses.iter().enumerate() {
                let id = pose_node_id(&conn.id, k);
                let mut attrs = BTreeMap::new();
                attrs.insert(attr::X.to_string(), AttrValue::Float(pose.x));
                attrs.insert(attr::Y.to_string(), AttrValue::Float(pose.y));
                attrs.insert(attr::ORIENTATION.to_string(), AttrValue::Float(pose.yaw));
                g.add_node(NodeType::OrderedPose, id.clone(), attrs)?;
                g.add_edge(EdgeType::ConnectorHasPose, &conn.id, &id)?;
                if k > 0 {
                    g.add_edge(EdgeType::HasNextPose, &pose_node_id(&conn.id, k - 1), &id)?;
                }
            }

            self.geom.connectors.insert(
                conn.id.clone(),
                ConnectorGeom {
                    centerline: conn.centerline.clone(),
                    incoming: conn.incoming_lane.clone(),
                    outgoing: conn.outgoing_lane.clone(),
                    intersections: Vec::new(),
                },
            );
        }

        // logical succession derived from connectors
        for conn in &self.raw.lane_connectors {
            g.add_edge(EdgeType::HasNextLane, &conn.incoming_lane, &conn.outgoing_lane)?;
            g.add_edge(EdgeType::HasPreviousLane, &conn.outgoing_lane, &conn.incoming_lane)?;
        }

        // lateral adjacency
        self.lateral = lateral_pairs(self.raw, self.cfg);
        for pair in &self.lateral {
            let (a, b) = (&self.raw.lanes[pair.a].id, &self.raw.lanes[pair.b].id);
            if pair.b_left_of_a {
                g.add_edge(EdgeType::HasLeftLane, a, b)?;
                g.add_edge(EdgeType::HasRightLane, b, a)?;
            } else {
                g.add_edge(EdgeType::HasRightLane, a, b)?;
                g.add_edge(EdgeType::HasLeftLane, b, a)?;
            }
        }
        Ok(())
    }

    /// Lane-change relations between snippets of laterally adjacent lanes.
    /// Snippet pairs whose arc intervals overlap when projected onto the
    /// neighbour get one edge per direction, typed by the facing border of
    /// the source snippet. Illegal crossings (solid types) are linked too.
    fn link_switch_via(&mut self, g: &mut KnowledgeGraph) -> Result<(), CompileError> {
        for pair in &self.lateral {
            let (ia, ib) = (pair.a, pair.b);
            let (left_idx, right_idx) = if pair.b_left_of_a { (ib, ia) } else { (ia, ib) };
            // `right` has `left` as its left neighbour
            let right_lane = &self.raw.lanes[right_idx];
            let left_lane = &self.raw.lanes[left_idx];
            let right_geom = &self.geom.lanes[&right_lane.id];
            let left_geom = &self.geom.lanes[&left_lane.id];

            for (ka, sa) in right_geom.snippets.iter().enumerate() {
                for (kb, sb) in left_geom.snippets.iter().enumerate() {
                    // project the neighbour interval onto this lane's arc axis
                    let p0 = left_geom.centerline.point_at(sb.s_start);
                    let p1 = left_geom.centerline.point_at(sb.s_end);
                    let t0 = right_geom.centerline.project(p0).arc_s;
                    let t1 = right_geom.centerline.project(p1).arc_s;
                    let (lo, hi) = (t0.min(t1), t0.max(t1));
                    let overlap = hi.min(sa.s_end) - lo.max(sa.s_start);
                    if overlap > 0.0 {
                        let a_id = snippet_node_id(&right_lane.id, ka);
                        let b_id = snippet_node_id(&left_lane.id, kb);
                        // facing border of the source snippet
                        g.add_edge(EdgeType::SwitchVia(sa.left), &a_id, &b_id)?;
                        g.add_edge(EdgeType::SwitchVia(sb.right), &b_id, &a_id)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Connected components of lateral adjacency become road blocks; block
    /// succession follows lane succession; opposing blocks are antiparallel
    /// neighbours.
    fn build_road_blocks(&mut self, g: &mut KnowledgeGraph) -> Result<(), CompileError> {
        let n = self.raw.lanes.len();
        let mut component: Vec<usize> = (0..n).collect();
        fn find(component: &mut Vec<usize>, mut i: usize) -> usize {
            while component[i] != i {
                component[i] = component[component[i]];
                i = component[i];
            }
            i
        }
        for pair in &self.lateral {
            let (ra, rb) = (find(&mut component, pair.a), find(&mut component, pair.b));
            if ra != rb {
                component[ra.max(rb)] = ra.min(rb);
            }
        }

        // assign block ids in input order of the first member lane
        let mut block_of_root: BTreeMap<usize, String> = BTreeMap::new();
        let mut members_of_block: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut order: Vec<String> = Vec::new();
        for i in 0..n {
            let root = find(&mut component, i);
            let id = block_of_root.entry(root).or_insert_with(|| {
                let id = format!("rb_{}", order.len());
                order.push(id.clone());
                id
            });
            members_of_block.entry(id.clone()).or_default().push(i);
        }

        for block_id in &order {
            let members = &members_of_block[block_id];
            let member_ids = self.order_members_left_to_right(g, members);
            let mean = circular_mean(
                members.iter().map(|&i| self.raw.lanes[i].centerline.mean_heading()),
            );
            let mut pts: Vec<Point> = Vec::new();
            for &i in members {
                pts.extend_from_slice(self.raw.lanes[i].polygon.ring());
            }
            let hull = Polygon::new(convex_hull(&pts))?;

            g.add_node(NodeType::RoadBlock, block_id.clone(), BTreeMap::new())?;
            for lane_id in &member_ids {
                g.add_edge(EdgeType::IsLaneOnRoadBlock, lane_id, block_id)?;
                self.geom.lanes.get_mut(lane_id).expect("lane exists").block = block_id.clone();
            }
            self.geom.blocks.insert(
                block_id.clone(),
                BlockGeom { members: member_ids, mean_heading: mean, hull },
            );
        }

        // succession from lane succession
        for conn in &self.raw.lane_connectors {
            let a = self.geom.lanes[&conn.incoming_lane].block.clone();
            let b = self.geom.lanes[&conn.outgoing_lane].block.clone();
            if a != b {
                g.add_edge(EdgeType::HasNextRoadBlock, &a, &b)?;
            }
        }

        // opposing blocks: antiparallel within the distance bound, and
        // actually side by side (their extents overlap along the road axis,
        // so a block across a junction gap does not count)
        let ids: Vec<&String> = order.iter().collect();
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                let (ba, bb) = (&self.geom.blocks[ids[i]], &self.geom.blocks[ids[j]]);
                let anti = 180.0 - heading_difference_deg(ba.mean_heading, bb.mean_heading);
                if anti.abs() <= self.cfg.opposing_heading_tol_deg
                    && ba.hull.distance(&bb.hull) < self.cfg.opposing_distance_m
                    && axis_overlap(ba, bb) > 0.0
                {
                    g.add_edge(EdgeType::HasOpposingRoadBlock, ids[i], ids[j])?;
                    g.add_edge(EdgeType::HasOpposingRoadBlock, ids[j], ids[i])?;
                }
            }
        }
        Ok(())
    }

    fn order_members_left_to_right(&self, g: &KnowledgeGraph, members: &[usize]) -> Vec<String> {
        use crate::kg::Direction;
        let ids: Vec<String> = members.iter().map(|&i| self.raw.lanes[i].id.clone()).collect();
        if ids.len() <= 1 {
            return ids;
        }
        let in_set = |id: &str| ids.iter().any(|m| m == id);
        // leftmost member: no left neighbour inside the component
        let leftmost: Vec<&String> = ids
            .iter()
            .filter(|id| {
                g.neighbors(id, EdgeType::HasLeftLane, Direction::Out)
                    .map(|ns| !ns.iter().any(|n| in_set(n)))
                    .unwrap_or(true)
            })
            .collect();
        if leftmost.len() != 1 {
            let mut sorted = ids.clone();
            sorted.sort();
            return sorted;
        }
        let mut chain = vec![leftmost[0].clone()];
        loop {
            let cur = chain.last().unwrap();
            let next: Vec<String> = g
                .neighbors(cur, EdgeType::HasRightLane, Direction::Out)
                .map(|ns| {
                    ns.into_iter()
                        .filter(|n| in_set(n) && !chain.iter().any(|c| c == n))
                        .map(str::to_string)
                        .collect()
                })
                .unwrap_or_default();
            match next.as_slice() {
                [one] => chain.push(one.clone()),
                _ => break,
            }
        }
        if chain.len() == ids.len() {
            chain
        } else {
            let mut sorted = ids.clone();
            sorted.sort();
            sorted
        }
    }

    /// Stop areas, traffic lights, crossings, walkways, carparks and
    /// intersections, with their spatial relations and shapes.
    fn build_infrastructure(&mut self, g: &mut KnowledgeGraph) -> Result<(), CompileError> {
        let raw = self.raw;

        // shapes for lanes, connectors and blocks
        for lane in &raw.lanes {
            self.add_polygon_shape(g, &lane.id, &lane.polygon)?;
        }
        for conn in &raw.lane_connectors {
            let line = self.geom.connectors[&conn.id].centerline.clone();
            self.add_linestring_shape(g, &conn.id, &line)?;
        }
        let block_ids: Vec<String> = self.geom.blocks.keys().cloned().collect();
        for id in block_ids {
            let hull = self.geom.blocks[&id].hull.clone();
            self.add_polygon_shape(g, &id, &hull)?;
        }

        for w in &raw.walkways {
            g.add_node(NodeType::Walkway, w.id.clone(), BTreeMap::new())?;
            self.add_polygon_shape(g, &w.id, &w.polygon)?;
            self.geom
                .areas
                .insert(w.id.clone(), AreaGeom { kind: AreaKind::Walkway, polygon: w.polygon.clone() });
        }
        for c in &raw.ped_crossings {
            g.add_node(NodeType::PedCrossing, c.id.clone(), BTreeMap::new())?;
            self.add_polygon_shape(g, &c.id, &c.polygon)?;
            self.geom
                .areas
                .insert(c.id.clone(), AreaGeom { kind: AreaKind::Crossing, polygon: c.polygon.clone() });
        }
        for s in &raw.stop_lines {
            g.add_node(NodeType::StopArea(s.stop_type), s.id.clone(), BTreeMap::new())?;
            self.add_polygon_shape(g, &s.id, &s.polygon)?;
            self.geom
                .areas
                .insert(s.id.clone(), AreaGeom { kind: AreaKind::Stop, polygon: s.polygon.clone() });
        }
        for t in &raw.traffic_lights {
            let mut attrs = BTreeMap::new();
            attrs.insert(attr::TL_TYPE.to_string(), AttrValue::Str(t.tl_type.letter().into()));
            g.add_node(NodeType::TrafficLight, t.id.clone(), attrs)?;
            let pose_id = format!("{}_pose", t.id);
            let mut pattrs = BTreeMap::new();
            pattrs.insert(attr::X.to_string(), AttrValue::Float(t.pose.x));
            pattrs.insert(attr::Y.to_string(), AttrValue::Float(t.pose.y));
            pattrs.insert(attr::ORIENTATION.to_string(), AttrValue::Float(t.pose.yaw));
            g.add_node(NodeType::Pose, pose_id.clone(), pattrs)?;
            g.add_edge(EdgeType::TrafficLightHasPose, &t.id, &pose_id)?;
        }
        for r in &raw.road_segments {
            if !r.is_intersection {
                continue;
            }
            g.add_node(NodeType::Intersection, r.id.clone(), BTreeMap::new())?;
            self.add_polygon_shape(g, &r.id, &r.polygon)?;
            self.geom.areas.insert(
                r.id.clone(),
                AreaGeom { kind: AreaKind::Intersection, polygon: r.polygon.clone() },
            );
        }
        for a in &raw.carpark_areas {
            g.add_node(NodeType::CarparkArea, a.id.clone(), BTreeMap::new())?;
            self.add_polygon_shape(g, &a.id, &a.polygon)?;
            self.geom
                .areas
                .insert(a.id.clone(), AreaGeom { kind: AreaKind::Carpark, polygon: a.polygon.clone() });
        }

        // causesStopAt from the recorded cause
        for s in &raw.stop_lines {
            if let Some(cause) = &s.cause_ref {
                let resolvable = raw.traffic_lights.iter().any(|t| &t.id == cause)
                    || raw.ped_crossings.iter().any(|c| &c.id == cause);
                if resolvable {
                    g.add_edge(EdgeType::CausesStopAt, cause, &s.id)?;
                } else {
                    self.warnings.push(format!(
                        "stop line '{}' references unknown cause '{}'; node built without causesStopAt",
                        s.id, cause
                    ));
                }
            }
        }

        // crossings link to the two nearest walkways within range
        for c in &raw.ped_crossings {
            let mut candidates: Vec<(f64, &str)> = raw
                .walkways
                .iter()
                .filter_map(|w| {
                    let d = c.polygon.distance(&w.polygon);
                    (d < self.cfg.crossing_walkway_m).then_some((d, w.id.as_str()))
                })
                .collect();
            candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(b.1)));
            for (_, w) in candidates.into_iter().take(2) {
                g.add_edge(EdgeType::ConnectsWalkways, &c.id, w)?;
            }
        }

        // proximity links to lanes
        for w in &raw.walkways {
            let wbox = w.polygon.bbox();
            for lane in &raw.lanes {
                if wbox.distance(&lane.polygon.bbox()) >= self.cfg.is_next_to_m {
                    continue;
                }
                if w.polygon.distance(&lane.polygon) < self.cfg.is_next_to_m {
                    g.add_edge(EdgeType::WalkwayIsNextTo, &w.id, &lane.id)?;
                }
            }
        }
        for a in &raw.carpark_areas {
            let abox = a.polygon.bbox();
            for lane in &raw.lanes {
                if abox.distance(&lane.polygon.bbox()) >= self.cfg.is_next_to_m {
                    continue;
                }
                if a.polygon.distance(&lane.polygon) < self.cfg.is_next_to_m {
                    g.add_edge(EdgeType::CarparkIsNextTo, &a.id, &lane.id)?;
                }
            }
        }

        // connectors hosted on intersections: buffered centerline overlap
        for conn in &raw.lane_connectors {
            for r in &raw.road_segments {
                if !r.is_intersection {
                    continue;
                }
                let d = conn.centerline.min_distance_to_polygon(&r.polygon);
                if d < self.cfg.connector_buffer_m {
                    g.add_edge(EdgeType::IsConnectorOnRoadSegment, &conn.id, &r.id)?;
                    self.geom
                        .connectors
                        .get_mut(&conn.id)
                        .expect("connector exists")
                        .intersections
                        .push(r.id.clone());
                }
            }
        }
        Ok(())
    }
}

/// Compile the bundle into `g`. Returns the geometric side tables and any
/// non-fatal warnings.
pub fn compile_map(
    raw: &RawMapBundle,
    cfg: &Config,
    g: &mut KnowledgeGraph,
) -> Result<(MapGeometry, Vec<String>), CompileError> {
    let mut build = MapBuild {
        raw,
        cfg,
        geom: MapGeometry::default(),
        warnings: Vec::new(),
        geo_origin: raw.locations.iter().find_map(|l| l.geo_origin),
        lateral: Vec::new(),
    };
    build.build_lane_graph(g)?;
    build.link_switch_via(g)?;
    build.build_road_blocks(g)?;
    build.build_infrastructure(g)?;
    Ok((build.geom, build.warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::Direction;
    use crate::scene_ir::{BorderSegment, RawConnector};

    fn line(pts: &[(f64, f64)]) -> Polyline {
        Polyline::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Polygon {
        Polygon::new(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
        .unwrap()
    }

    fn border(pts: &[(f64, f64)], divider: DividerType) -> BorderSegment {
        BorderSegment { line: line(pts), divider }
    }

    /// Straight lane along +x at y in [y0, y0+3.5], centerline in the middle.
    fn straight_lane(id: &str, x0: f64, x1: f64, y0: f64) -> RawLane {
        let yc = y0 + 1.75;
        RawLane {
            id: id.to_string(),
            centerline: line(&[(x0, yc), (x1, yc)]),
            left_border: vec![border(&[(x0, y0 + 3.5), (x1, y0 + 3.5)], DividerType::DoubleSolid)],
            right_border: vec![border(&[(x0, y0), (x1, y0)], DividerType::RoadEdge)],
            polygon: rect(x0, y0, x1, y0 + 3.5),
            road_segment_id: None,
        }
    }

    fn bundle_with(lanes: Vec<RawLane>, connectors: Vec<RawConnector>) -> RawMapBundle {
        RawMapBundle { lanes, lane_connectors: connectors, ..RawMapBundle::empty() }
    }

    #[test]
    fn straight_lane_widths_are_constant() {
        // borders at y = +2 and y = -1.5 around a centerline at y = 0
        let lane = RawLane {
            id: "L".into(),
            centerline: line(&[(0.0, 0.0), (10.0, 0.0)]),
            left_border: vec![border(&[(0.0, 2.0), (10.0, 2.0)], DividerType::SingleDashed)],
            right_border: vec![border(&[(0.0, -1.5), (10.0, -1.5)], DividerType::RoadEdge)],
            polygon: rect(0.0, -1.5, 10.0, 2.0),
            road_segment_id: None,
        };
        let slices = compute_lane_slices(&lane, &Config::default()).unwrap();
        assert_eq!(slices.len(), 6); // 10 m at 2 m plus endpoint
        for s in &slices {
            assert!((s.width - 3.5).abs() < 1e-9, "width {}", s.width);
        }
    }

    #[test]
    fn missing_border_is_an_error_not_a_guess() {
        let mut lane = straight_lane("L", 0.0, 10.0, 0.0);
        lane.right_border.clear();
        assert!(matches!(
            compute_lane_slices(&lane, &Config::default()).unwrap_err(),
            CompileError::MissingBorder { side: "right", .. }
        ));
    }

    #[test]
    fn wedge_widths_match_dense_projection_oracle() {
        // borders y = +-(1 + 0.1 x)
        let lane = RawLane {
            id: "W".into(),
            centerline: line(&[(0.0, 0.0), (10.0, 0.0)]),
            left_border: vec![border(&[(0.0, 1.0), (10.0, 2.0)], DividerType::SingleDashed)],
            right_border: vec![border(&[(0.0, -1.0), (10.0, -2.0)], DividerType::SingleDashed)],
            polygon: Polygon::new(vec![
                Point::new(0.0, -1.0),
                Point::new(10.0, -2.0),
                Point::new(10.0, 2.0),
                Point::new(0.0, 1.0),
            ])
            .unwrap(),
            road_segment_id: None,
        };
        let slices = compute_lane_slices(&lane, &Config::default()).unwrap();
        let left = line(&[(0.0, 1.0), (10.0, 2.0)]);
        let right = line(&[(0.0, -1.0), (10.0, -2.0)]);
        for s in &slices {
            // dense sampling oracle for the nearest point on each border
            let p = s.center.position();
            let mut best_l = Point::new(f64::INFINITY, f64::INFINITY);
            let mut best_r = best_l;
            let mut dl = f64::INFINITY;
            let mut dr = f64::INFINITY;
            for k in 0..=10_000 {
                let ql = left.point_at(left.length() * k as f64 / 10_000.0);
                let qr = right.point_at(right.length() * k as f64 / 10_000.0);
                if p.dist(ql) < dl {
                    dl = p.dist(ql);
                    best_l = ql;
                }
                if p.dist(qr) < dr {
                    dr = p.dist(qr);
                    best_r = qr;
                }
            }
            let oracle = best_l.dist(best_r);
            assert!(
                (s.width - oracle).abs() < 0.01,
                "slice at {} width {} oracle {}",
                s.arc_s,
                s.width,
                oracle
            );
        }
        // ends: clamped feet give exactly 2.0 at x=0
        assert!((slices[0].width - 2.0).abs() < 1e-9);
    }

    #[test]
    fn fifty_meter_lane_splits_into_three_equal_snippets() {
        let lane = straight_lane("L", 0.0, 50.0, 0.0);
        let sn = compute_lane_snippets(&lane, &Config::default()).unwrap();
        assert_eq!(sn.len(), 3);
        for s in &sn {
            assert!((s.length() - 50.0 / 3.0).abs() < 1e-9);
        }
        let total: f64 = sn.iter().map(|s| s.length()).sum();
        assert!((total - 50.0).abs() < 1e-9);
    }

    #[test]
    fn border_change_cuts_sections() {
        // 30 m lane, left border changes type at s = 12
        let lane = RawLane {
            id: "L".into(),
            centerline: line(&[(0.0, 0.0), (30.0, 0.0)]),
            left_border: vec![
                border(&[(0.0, 1.75), (12.0, 1.75)], DividerType::SingleDashed),
                border(&[(12.0, 1.75), (30.0, 1.75)], DividerType::SingleSolid),
            ],
            right_border: vec![border(&[(0.0, -1.75), (30.0, -1.75)], DividerType::RoadEdge)],
            polygon: rect(0.0, -1.75, 30.0, 1.75),
            road_segment_id: None,
        };
        let sn = compute_lane_snippets(&lane, &Config::default()).unwrap();
        assert_eq!(sn.len(), 2);
        assert!((sn[0].s_end - 12.0).abs() < 1e-9);
        assert_eq!(sn[0].left, DividerType::SingleDashed);
        assert_eq!(sn[1].left, DividerType::SingleSolid);
        assert!((sn[1].length() - 18.0).abs() < 1e-9);
    }

    #[test]
    fn exactly_twenty_meters_is_one_snippet() {
        let lane = straight_lane("L", 0.0, 20.0, 0.0);
        let sn = compute_lane_snippets(&lane, &Config::default()).unwrap();
        assert_eq!(sn.len(), 1);
        assert!((sn[0].length() - 20.0).abs() < 1e-9);
    }

    #[test]
    fn border_gap_is_reported_with_interval() {
        let mut lane = straight_lane("L", 0.0, 30.0, 0.0);
        lane.left_border = vec![border(&[(0.0, 3.5), (10.0, 3.5)], DividerType::SingleDashed)];
        match compute_lane_snippets(&lane, &Config::default()).unwrap_err() {
            CompileError::BorderGap { side: "left", from, to, .. } => {
                assert!((from - 10.0).abs() < 1e-6);
                assert!((to - 30.0).abs() < 1e-6);
            }
            other => panic!("expected border gap, got {other:?}"),
        }
    }

    #[test]
    fn connector_derives_succession_and_poses() {
        let a = straight_lane("A", 0.0, 20.0, 0.0);
        let b = straight_lane("B", 30.0, 50.0, 0.0);
        let conn = RawConnector {
            id: "C".into(),
            incoming_lane: "A".into(),
            outgoing_lane: "B".into(),
            centerline: line(&[(20.0, 1.75), (30.0, 1.75)]),
        };
        let raw = bundle_with(vec![a, b], vec![conn]);
        let mut g = KnowledgeGraph::new();
        compile_map(&raw, &Config::default(), &mut g).unwrap();

        assert_eq!(g.neighbors("A", EdgeType::HasNextLane, Direction::Out).unwrap(), ["B"]);
        assert_eq!(g.neighbors("B", EdgeType::HasPreviousLane, Direction::Out).unwrap(), ["A"]);
        // 10 m connector resampled at 2 m: 6 poses, 5 chain edges
        let poses = g.neighbors("C", EdgeType::ConnectorHasPose, Direction::Out).unwrap();
        assert_eq!(poses.len(), 6);
        let chain_edges: usize = poses
            .iter()
            .map(|p| g.neighbors(p, EdgeType::HasNextPose, Direction::Out).unwrap().len())
            .sum();
        assert_eq!(chain_edges, 5);
    }

    #[test]
    fn parallel_same_direction_lanes_become_mutual_neighbours() {
        // lane P at y [0, 3.5], lane Q at y [3.5, 7]; Q is left of P
        let mut p = straight_lane("P", 0.0, 40.0, 0.0);
        p.left_border[0].divider = DividerType::SingleDashed;
        let mut q = straight_lane("Q", 0.0, 40.0, 3.5);
        q.right_border[0].divider = DividerType::SingleDashed;
        let raw = bundle_with(vec![p, q], vec![]);
        let mut g = KnowledgeGraph::new();
        compile_map(&raw, &Config::default(), &mut g).unwrap();

        assert_eq!(g.neighbors("P", EdgeType::HasLeftLane, Direction::Out).unwrap(), ["Q"]);
        assert_eq!(g.neighbors("Q", EdgeType::HasRightLane, Direction::Out).unwrap(), ["P"]);
        assert!(g.neighbors("P", EdgeType::HasRightLane, Direction::Out).unwrap().is_empty());

        // both lanes share one road block
        assert_eq!(
            g.neighbors("P", EdgeType::IsLaneOnRoadBlock, Direction::Out).unwrap(),
            g.neighbors("Q", EdgeType::IsLaneOnRoadBlock, Direction::Out).unwrap()
        );
    }

    #[test]
    fn opposing_lanes_form_opposing_blocks() {
        // eastbound at y [-3.5, 0], westbound at y [0, 3.5]
        let east = straight_lane("E", 0.0, 60.0, -3.5);
        let west = RawLane {
            id: "W".into(),
            centerline: line(&[(60.0, 1.75), (0.0, 1.75)]),
            left_border: vec![border(&[(60.0, 0.0), (0.0, 0.0)], DividerType::DoubleSolid)],
            right_border: vec![border(&[(60.0, 3.5), (0.0, 3.5)], DividerType::RoadEdge)],
            polygon: rect(0.0, 0.0, 60.0, 3.5),
            road_segment_id: None,
        };
        let raw = bundle_with(vec![east, west], vec![]);
        let mut g = KnowledgeGraph::new();
        let (geom, _) = compile_map(&raw, &Config::default(), &mut g).unwrap();

        assert_eq!(geom.blocks.len(), 2);
        let be = &geom.lanes["E"].block;
        let bw = &geom.lanes["W"].block;
        assert_ne!(be, bw);
        assert_eq!(g.neighbors(be, EdgeType::HasOpposingRoadBlock, Direction::Out).unwrap(), [bw.as_str()]);
        assert_eq!(g.neighbors(bw, EdgeType::HasOpposingRoadBlock, Direction::Out).unwrap(), [be.as_str()]);
    }

    #[test]
    fn isolated_lane_forms_single_block_without_relations() {
        let raw = bundle_with(vec![straight_lane("L", 0.0, 30.0, 0.0)], vec![]);
        let mut g = KnowledgeGraph::new();
        let (geom, _) = compile_map(&raw, &Config::default(), &mut g).unwrap();
        assert_eq!(geom.blocks.len(), 1);
        let b = &geom.lanes["L"].block;
        assert!(g.neighbors(b, EdgeType::HasOpposingRoadBlock, Direction::Out).unwrap().is_empty());
        assert!(g.neighbors(b, EdgeType::HasNextRoadBlock, Direction::Out).unwrap().is_empty());
    }

    #[test]
    fn chain_of_three_blocks_has_two_succession_edges() {
        let l0 = straight_lane("S0", 0.0, 48.0, 0.0);
        let l1 = straight_lane("S1", 50.0, 98.0, 0.0);
        let l2 = straight_lane("S2", 100.0, 148.0, 0.0);
        let mk_conn = |id: &str, from: &str, to: &str, x0: f64, x1: f64| RawConnector {
            id: id.into(),
            incoming_lane: from.into(),
            outgoing_lane: to.into(),
            centerline: line(&[(x0, 1.75), (x1, 1.75)]),
        };
        let raw = bundle_with(
            vec![l0, l1, l2],
            vec![mk_conn("c0", "S0", "S1", 48.0, 50.0), mk_conn("c1", "S1", "S2", 98.0, 100.0)],
        );
        let mut g = KnowledgeGraph::new();
        let (geom, _) = compile_map(&raw, &Config::default(), &mut g).unwrap();
        assert_eq!(geom.blocks.len(), 3);
        let total_next: usize = geom
            .blocks
            .keys()
            .map(|b| g.neighbors(b, EdgeType::HasNextRoadBlock, Direction::Out).unwrap().len())
            .sum();
        assert_eq!(total_next, 2);
    }

    #[test]
    fn switch_via_edges_follow_facing_borders() {
        let mut p = straight_lane("P", 0.0, 20.0, 0.0);
        p.left_border[0].divider = DividerType::SingleDashed;
        let mut q = straight_lane("Q", 0.0, 20.0, 3.5);
        q.right_border[0].divider = DividerType::SingleSolid;
        let raw = bundle_with(vec![p, q], vec![]);
        let mut g = KnowledgeGraph::new();
        compile_map(&raw, &Config::default(), &mut g).unwrap();

        let p_sn = snippet_node_id("P", 0);
        let q_sn = snippet_node_id("Q", 0);
        // P faces Q across its left border (single dashed)
        assert_eq!(
            g.neighbors(&p_sn, EdgeType::SwitchVia(DividerType::SingleDashed), Direction::Out)
                .unwrap(),
            [q_sn.as_str()]
        );
        // illegal solid crossings stay in the graph, typed by Q's right border
        assert_eq!(
            g.neighbors(&q_sn, EdgeType::SwitchVia(DividerType::SingleSolid), Direction::Out)
                .unwrap(),
            [p_sn.as_str()]
        );
    }

    #[test]
    fn non_overlapping_snippets_are_not_linked() {
        // Q only covers x in [30, 50]; P covers [0, 20]
        let mut p = straight_lane("P", 0.0, 20.0, 0.0);
        p.left_border[0].divider = DividerType::SingleDashed;
        let mut q = straight_lane("Q", 30.0, 50.0, 3.5);
        q.right_border[0].divider = DividerType::SingleDashed;
        let raw = bundle_with(vec![p, q], vec![]);
        let mut g = KnowledgeGraph::new();
        compile_map(&raw, &Config::default(), &mut g).unwrap();
        let p_sn = snippet_node_id("P", 0);
        for d in DividerType::ALL {
            assert!(g
                .neighbors(&p_sn, EdgeType::SwitchVia(d), Direction::Out)
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn crossing_links_two_nearest_walkways_within_range() {
        let mut raw = bundle_with(vec![straight_lane("L", 0.0, 20.0, 0.0)], vec![]);
        raw.ped_crossings.push(crate::scene_ir::RawArea {
            id: "X".into(),
            polygon: rect(8.0, 0.0, 11.0, 3.5),
        });
        // walkways at polygon distances 0.5, 1.2 and 3.0 from the crossing
        raw.walkways.push(crate::scene_ir::RawArea {
            id: "w_near".into(),
            polygon: rect(8.0, 4.0, 11.0, 6.0),
        });
        raw.walkways.push(crate::scene_ir::RawArea {
            id: "w_mid".into(),
            polygon: rect(8.0, -3.2, 11.0, -1.2),
        });
        raw.walkways.push(crate::scene_ir::RawArea {
            id: "w_far".into(),
            polygon: rect(14.0, 0.0, 16.0, 3.5),
        });
        let mut g = KnowledgeGraph::new();
        compile_map(&raw, &Config::default(), &mut g).unwrap();
        let mut linked = g.neighbors("X", EdgeType::ConnectsWalkways, Direction::Out).unwrap();
        linked.sort();
        assert_eq!(linked, ["w_mid", "w_near"]);
    }

    #[test]
    fn walkway_beyond_four_meters_gets_no_adjacency() {
        let mut raw = bundle_with(vec![straight_lane("L", 0.0, 20.0, 0.0)], vec![]);
        raw.walkways.push(crate::scene_ir::RawArea {
            id: "w_close".into(),
            polygon: rect(0.0, 5.0, 20.0, 7.0), // 1.5 m from the lane top at 3.5
        });
        raw.walkways.push(crate::scene_ir::RawArea {
            id: "w_far".into(),
            polygon: rect(0.0, 8.0, 20.0, 10.0), // 4.5 m away
        });
        let mut g = KnowledgeGraph::new();
        compile_map(&raw, &Config::default(), &mut g).unwrap();
        assert_eq!(
            g.neighbors("w_close", EdgeType::WalkwayIsNextTo, Direction::Out).unwrap(),
            ["L"]
        );
        assert!(g.neighbors("w_far", EdgeType::WalkwayIsNextTo, Direction::Out).unwrap().is_empty());
    }

    #[test]
    fn unresolved_cause_is_a_warning_not_an_error() {
        let mut raw = bundle_with(vec![straight_lane("L", 0.0, 20.0, 0.0)], vec![]);
        raw.stop_lines.push(crate::scene_ir::RawStopLine {
            id: "S".into(),
            polygon: rect(5.0, 0.0, 7.0, 3.5),
            stop_type: crate::vocab::StopKind::TrafficLight,
            cause_ref: Some("ghost".into()),
        });
        let mut g = KnowledgeGraph::new();
        let (_, warnings) = compile_map(&raw, &Config::default(), &mut g).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(g.node("S").is_some());
        assert!(g.neighbors("S", EdgeType::CausesStopAt, Direction::In).unwrap().is_empty());
    }
}
