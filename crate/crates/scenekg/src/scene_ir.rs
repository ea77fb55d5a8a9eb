//! The neutral input interchange format: typed records for map bundles and
//! trip logs, their parsers, serializers and the cross-dataset consistency
//! report.
//!
//! A map bundle is a single JSON document; a trip log is JSON-lines with one
//! trip per line (plus an optional `{"locations": [...]}` header line);
//! splits are a JSON object mapping sequence ids to `train`/`val`/`test`.
//! Parsing is total: any input either yields a typed value or a positioned
//! error. All enums are closed.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::geometry::{Aabb, Polygon, Polyline, Pose2D};
use crate::vocab::{DividerType, ParticipantCategory, StopKind, TlType};

/// How far outside the map bounding box an agent may be before the
/// consistency report flags it.
const OUTSIDE_MARGIN_M: f64 = 100.0;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported format version '{0}' (expected \"1\")")]
    UnsupportedVersion(String),
    #[error("duplicate id '{0}'")]
    DuplicateId(String),
    #[error("{owner} references missing {kind} ids: {}", ids.join(", "))]
    DanglingReference { owner: String, kind: &'static str, ids: Vec<String> },
    #[error("connector '{0}' has identical incoming and outgoing lane '{1}'")]
    SelfConnector(String, String),
    #[error("polygon of '{0}' is self-intersecting")]
    NotSimple(String),
    #[error("sequence '{sequence}': timestamps not strictly increasing at scene index {index}")]
    NonMonotoneTimestamps { sequence: String, index: usize },
    #[error("sequence '{0}' has no scenes")]
    EmptySequence(String),
    #[error("scene at index {index} of sequence '{sequence}' has {count} ego annotations (expected exactly 1)")]
    EgoCount { sequence: String, index: usize, count: usize },
    #[error("annotation '{agent}' in sequence '{sequence}' has non-positive size component")]
    NonPositiveSize { sequence: String, agent: String },
    #[error("agent '{agent}' appears twice in one scene of sequence '{sequence}'")]
    DuplicateAnnotation { sequence: String, agent: String },
}

impl ParseError {
    fn from_json(err: serde_json::Error, line_offset: usize) -> Self {
        ParseError::Syntax {
            line: err.line() + line_offset,
            column: err.column(),
            message: err.to_string(),
        }
    }
}

// ---------------------------------------------------------------------------
// Map bundle records
// ---------------------------------------------------------------------------

/// One border piece of a lane: a polyline with a constant marking type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorderSegment {
    pub line: Polyline,
    pub divider: DividerType,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawLane {
    pub id: String,
    pub centerline: Polyline,
    #[serde(default)]
    pub left_border: Vec<BorderSegment>,
    #[serde(default)]
    pub right_border: Vec<BorderSegment>,
    pub polygon: Polygon,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub road_segment_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawConnector {
    pub id: String,
    pub incoming_lane: String,
    pub outgoing_lane: String,
    pub centerline: Polyline,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawStopLine {
    pub id: String,
    pub polygon: Polygon,
    pub stop_type: StopKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cause_ref: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawTrafficLight {
    pub id: String,
    pub pose: Pose2D,
    pub tl_type: TlType,
}

/// Polygonal area record without further structure (walkways, crossings,
/// carpark areas).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawArea {
    pub id: String,
    pub polygon: Polygon,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRoadSegment {
    pub id: String,
    pub polygon: Polygon,
    #[serde(default)]
    pub is_intersection: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawLocation {
    pub id: String,
    pub name: String,
    pub right_hand_traffic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geo_origin: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawMapBundle {
    pub format_version: String,
    #[serde(default)]
    pub locations: Vec<RawLocation>,
    #[serde(default)]
    pub lanes: Vec<RawLane>,
    #[serde(default)]
    pub lane_connectors: Vec<RawConnector>,
    #[serde(default)]
    pub walkways: Vec<RawArea>,
    #[serde(default)]
    pub ped_crossings: Vec<RawArea>,
    #[serde(default)]
    pub stop_lines: Vec<RawStopLine>,
    #[serde(default)]
    pub traffic_lights: Vec<RawTrafficLight>,
    #[serde(default)]
    pub road_segments: Vec<RawRoadSegment>,
    #[serde(default)]
    pub carpark_areas: Vec<RawArea>,
}

impl RawMapBundle {
    pub fn empty() -> Self {
        Self {
            format_version: "1".to_string(),
            locations: Vec::new(),
            lanes: Vec::new(),
            lane_connectors: Vec::new(),
            walkways: Vec::new(),
            ped_crossings: Vec::new(),
            stop_lines: Vec::new(),
            traffic_lights: Vec::new(),
            road_segments: Vec::new(),
            carpark_areas: Vec::new(),
        }
    }

    pub fn lane(&self, id: &str) -> Option<&RawLane> {
        self.lanes.iter().find(|l| l.id == id)
    }

    /// Bounding box of all map geometry; empty box for an empty bundle.
    pub fn bbox(&self) -> Aabb {
        let mut b = Aabb::empty();
        for lane in &self.lanes {
            b.merge(&lane.polygon.bbox());
            b.merge(&lane.centerline.bbox());
        }
        for c in &self.lane_connectors {
            b.merge(&c.centerline.bbox());
        }
        for a in self.walkways.iter().chain(&self.ped_crossings).chain(&self.carpark_areas) {
            b.merge(&a.polygon.bbox());
        }
        for s in &self.stop_lines {
            b.merge(&s.polygon.bbox());
        }
        for r in &self.road_segments {
            b.merge(&r.polygon.bbox());
        }
        for t in &self.traffic_lights {
            b.include(t.pose.position());
        }
        b
    }

    fn check(&self) -> Result<(), ParseError> {
        if self.format_version != "1" {
            return Err(ParseError::UnsupportedVersion(self.format_version.clone()));
        }
        let mut ids = BTreeSet::new();
        let mut claim = |id: &str| -> Result<(), ParseError> {
            if !ids.insert(id.to_string()) {
                return Err(ParseError::DuplicateId(id.to_string()));
            }
            Ok(())
        };
        for l in &self.locations {
            claim(&l.id)?;
        }
        for l in &self.lanes {
            claim(&l.id)?;
        }
        for c in &self.lane_connectors {
            claim(&c.id)?;
        }
        for a in &self.walkways {
            claim(&a.id)?;
        }
        for a in &self.ped_crossings {
            claim(&a.id)?;
        }
        for s in &self.stop_lines {
            claim(&s.id)?;
        }
        for t in &self.traffic_lights {
            claim(&t.id)?;
        }
        for r in &self.road_segments {
            claim(&r.id)?;
        }
        for a in &self.carpark_areas {
            claim(&a.id)?;
        }

        let lane_ids: BTreeSet<&str> = self.lanes.iter().map(|l| l.id.as_str()).collect();
        for c in &self.lane_connectors {
            let mut missing = Vec::new();
            for lane in [&c.incoming_lane, &c.outgoing_lane] {
                if !lane_ids.contains(lane.as_str()) {
                    missing.push(lane.clone());
                }
            }
            if !missing.is_empty() {
                return Err(ParseError::DanglingReference {
                    owner: format!("lane connector '{}'", c.id),
                    kind: "lane",
                    ids: missing,
                });
            }
            if c.incoming_lane == c.outgoing_lane {
                return Err(ParseError::SelfConnector(c.id.clone(), c.incoming_lane.clone()));
            }
        }

        for a in self.walkways.iter().chain(&self.ped_crossings).chain(&self.carpark_areas) {
            if !a.polygon.is_simple() {
                return Err(ParseError::NotSimple(a.id.clone()));
            }
        }
        for r in &self.road_segments {
            if !r.polygon.is_simple() {
                return Err(ParseError::NotSimple(r.id.clone()));
            }
        }
        Ok(())
    }
}

pub fn parse_map_bundle(text: &str) -> Result<RawMapBundle, ParseError> {
    let bundle: RawMapBundle =
        serde_json::from_str(text).map_err(|e| ParseError::from_json(e, 0))?;
    bundle.check()?;
    Ok(bundle)
}

pub fn map_bundle_to_json(bundle: &RawMapBundle) -> String {
    serde_json::to_string_pretty(bundle).expect("bundle serializes")
}

// ---------------------------------------------------------------------------
// Trip log records
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawAnnotation {
    pub agent_id: String,
    pub category: ParticipantCategory,
    pub pose: Pose2D,
    /// (length, width, height) in meters.
    pub size: (f64, f64, f64),
    #[serde(default)]
    pub is_ego: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawScene {
    /// Unix timestamp in integer microseconds.
    pub timestamp: i64,
    pub ego_pose: Pose2D,
    pub annotations: Vec<RawAnnotation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawSequence {
    pub id: String,
    pub scenes: Vec<RawScene>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawTrip {
    pub id: String,
    pub location_id: String,
    pub sequences: Vec<RawSequence>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawTripSet {
    pub trips: Vec<RawTrip>,
    pub locations: Vec<RawLocation>,
}

#[derive(Serialize, Deserialize)]
struct TripLogHeader {
    locations: Vec<RawLocation>,
}

impl RawTripSet {
    pub fn sequences(&self) -> impl Iterator<Item = (&RawTrip, &RawSequence)> {
        self.trips.iter().flat_map(|t| t.sequences.iter().map(move |s| (t, s)))
    }

    pub fn scene_count(&self) -> usize {
        self.sequences().map(|(_, s)| s.scenes.len()).sum()
    }

    fn check(&self) -> Result<(), ParseError> {
        let mut ids = BTreeSet::new();
        for t in &self.trips {
            if !ids.insert(t.id.clone()) {
                return Err(ParseError::DuplicateId(t.id.clone()));
            }
            for s in &t.sequences {
                if !ids.insert(s.id.clone()) {
                    return Err(ParseError::DuplicateId(s.id.clone()));
                }
                if s.scenes.is_empty() {
                    return Err(ParseError::EmptySequence(s.id.clone()));
                }
                for (i, scene) in s.scenes.iter().enumerate() {
                    if i > 0 && scene.timestamp <= s.scenes[i - 1].timestamp {
                        return Err(ParseError::NonMonotoneTimestamps {
                            sequence: s.id.clone(),
                            index: i,
                        });
                    }
                    let ego_count = scene.annotations.iter().filter(|a| a.is_ego).count();
                    if ego_count != 1 {
                        return Err(ParseError::EgoCount {
                            sequence: s.id.clone(),
                            index: i,
                            count: ego_count,
                        });
                    }
                    let mut seen = BTreeSet::new();
                    for a in &scene.annotations {
                        if !seen.insert(a.agent_id.as_str()) {
                            return Err(ParseError::DuplicateAnnotation {
                                sequence: s.id.clone(),
                                agent: a.agent_id.clone(),
                            });
                        }
                        let (l, w, h) = a.size;
                        if l <= 0.0 || w <= 0.0 || h <= 0.0 {
                            return Err(ParseError::NonPositiveSize {
                                sequence: s.id.clone(),
                                agent: a.agent_id.clone(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn parse_trip_log(text: &str) -> Result<RawTripSet, ParseError> {
    let mut trips = Vec::new();
    let mut locations: Vec<RawLocation> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        // a line holding a "locations" object is the optional header
        let probe: serde_json::Value =
            serde_json::from_str(line).map_err(|e| ParseError::from_json(e, idx))?;
        if probe.get("locations").is_some() {
            let header: TripLogHeader =
                serde_json::from_str(line).map_err(|e| ParseError::from_json(e, idx))?;
            for loc in header.locations {
                if !locations.iter().any(|l| l.id == loc.id) {
                    locations.push(loc);
                }
            }
        } else {
            let trip: RawTrip =
                serde_json::from_str(line).map_err(|e| ParseError::from_json(e, idx))?;
            trips.push(trip);
        }
    }
    let set = RawTripSet { trips, locations };
    set.check()?;
    Ok(set)
}

pub fn trip_log_to_jsonl(set: &RawTripSet) -> String {
    let mut out = String::new();
    if !set.locations.is_empty() {
        let header = TripLogHeader { locations: set.locations.clone() };
        out.push_str(&serde_json::to_string(&header).expect("header serializes"));
        out.push('\n');
    }
    for trip in &set.trips {
        out.push_str(&serde_json::to_string(trip).expect("trip serializes"));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Self::Train, Self::Val, Self::Test];

    pub fn dir_name(&self) -> &'static str {
        match self {
            Self::Train => "train",
            Self::Val => "val",
            Self::Test => "test",
        }
    }
}

/// Sequence id to split assignment.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SplitTable(pub BTreeMap<String, Split>);

impl SplitTable {
    pub fn get(&self, sequence: &str) -> Option<Split> {
        self.0.get(sequence).copied()
    }

    pub fn assign_all<'a>(sequences: impl IntoIterator<Item = &'a str>, split: Split) -> Self {
        Self(sequences.into_iter().map(|s| (s.to_string(), split)).collect())
    }
}

pub fn parse_splits(text: &str) -> Result<SplitTable, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError::from_json(e, 0))
}

// ---------------------------------------------------------------------------
// Cross-dataset consistency report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Issue {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    fn warn(&mut self, code: &'static str, message: String) {
        self.issues.push(Issue { severity: Severity::Warning, code, message });
    }

    fn error(&mut self, code: &'static str, message: String) {
        self.issues.push(Issue { severity: Severity::Error, code, message });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.issues.is_empty() {
            return writeln!(f, "inputs consistent, no issues");
        }
        for i in &self.issues {
            let tag = match i.severity {
                Severity::Warning => "warning",
                Severity::Error => "error",
            };
            writeln!(f, "{tag} [{}]: {}", i.code, i.message)?;
        }
        Ok(())
    }
}

/// Cross-dataset checks between a parsed map bundle and trip set. Issues are
/// report entries, never failures; an empty report means the pair is
/// consistent.
pub fn validate_raw(map: &RawMapBundle, trips: &RawTripSet) -> ValidationReport {
    let mut report = ValidationReport::default();

    let bbox = map.bbox();
    if !bbox.is_empty() {
        let extent = bbox.expanded(OUTSIDE_MARGIN_M);
        let mut outside: BTreeMap<&str, usize> = BTreeMap::new();
        for (_, seq) in trips.sequences() {
            for scene in &seq.scenes {
                for a in &scene.annotations {
                    if !extent.contains(a.pose.position()) {
                        *outside.entry(a.agent_id.as_str()).or_insert(0) += 1;
                    }
                }
            }
        }
        for (agent, count) in outside {
            report.warn(
                "outside-map-extent",
                format!("agent '{agent}' lies outside the map extent in {count} scene(s)"),
            );
        }
    }

    let known: BTreeSet<&str> = map
        .locations
        .iter()
        .map(|l| l.id.as_str())
        .chain(trips.locations.iter().map(|l| l.id.as_str()))
        .collect();
    for trip in &trips.trips {
        if !known.contains(trip.location_id.as_str()) {
            report.error(
                "unknown-location",
                format!("trip '{}' references unknown location '{}'", trip.id, trip.location_id),
            );
        }
    }

    let causes: BTreeSet<&str> = map
        .traffic_lights
        .iter()
        .map(|t| t.id.as_str())
        .chain(map.ped_crossings.iter().map(|c| c.id.as_str()))
        .collect();
    for stop in &map.stop_lines {
        if let Some(cause) = &stop.cause_ref {
            if !causes.contains(cause.as_str()) {
                report.warn(
                    "unresolved-cause",
                    format!("stop line '{}' references unknown cause '{}'", stop.id, cause),
                );
            }
        }
    }

    report
}
