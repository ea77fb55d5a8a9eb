//! Deterministic, seeded generator of synthetic map bundles and trip logs.
//! Scenarios are built from closed-form templates so widths, arc lengths and
//! constant-velocity trajectories have analytic ground truth; they double as
//! the oracle fixtures for the test suites.
//!
//! Geometry and kinematics depend only on the template and agent plans; the
//! seed feeds the generated instance identifiers (trip/sequence tokens).

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{Point, Polygon, Polyline, Pose2D};
use crate::scene_ir::{
    BorderSegment, RawAnnotation, RawArea, RawConnector, RawLane, RawLocation, RawMapBundle,
    RawRoadSegment, RawScene, RawSequence, RawStopLine, RawTrafficLight, RawTrip, RawTripSet,
};
use crate::vocab::{DividerType, ParticipantCategory, StopKind, TlType};

pub const LANE_WIDTH_M: f64 = 3.5;
/// Straight roads are cut into physical lanes of roughly this length,
/// bridged by short connectors.
pub const SEGMENT_TARGET_M: f64 = 50.0;
pub const SEGMENT_GAP_M: f64 = 2.0;
const ARM_LENGTH_M: f64 = 60.0;
const ARC_SAMPLE_M: f64 = 1.0;
const SCENE_STEP_US: i64 = 500_000;
const BASE_TIMESTAMP_US: i64 = 1_600_000_000_000_000;

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("agent {agent}: no connector links lane '{from}' to lane '{to}'")]
    InfeasiblePlan { agent: usize, from: String, to: String },
    #[error("agent {agent}: unknown lane '{lane}' in path")]
    UnknownLane { agent: usize, lane: String },
    #[error("agent {agent}: empty path")]
    EmptyPath { agent: usize },
    #[error("scenario needs exactly one ego plan, found {0}")]
    EgoCount(usize),
    #[error("invalid template parameter: {0}")]
    BadTemplate(String),
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioTemplate {
    StraightRoad { lanes_per_dir: u32, length_m: f64 },
    CurvedRoad { radius_m: f64, arc_deg: f64 },
    FourWayIntersection { lanes_per_arm: u32 },
    ParkingStrip { length_m: f64 },
}

/// One scripted agent: it travels the lane sequence at constant speed,
/// starting `start_offset_m` into the composite path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentPlan {
    pub category: ParticipantCategory,
    pub path: Vec<String>,
    pub speed_mps: f64,
    pub start_offset_m: f64,
    #[serde(default)]
    pub is_ego: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub template: ScenarioTemplate,
    pub agents: Vec<AgentPlan>,
}

impl Scenario {
    pub fn with_default_agents(template: ScenarioTemplate) -> Self {
        let agents = default_agents(&template);
        Self { template, agents }
    }
}

fn default_size(category: ParticipantCategory) -> (f64, f64, f64) {
    let label = category.label();
    if label == "vehicle.car" || label.starts_with("vehicle.emergency") {
        (4.5, 1.8, 1.6)
    } else if label == "vehicle.truck" || label == "vehicle.construction" {
        (8.0, 2.5, 3.0)
    } else if label.starts_with("vehicle.bus") || label == "vehicle.trailer" {
        (11.0, 2.9, 3.2)
    } else if label == "vehicle.bicycle" || label == "vehicle.motorcycle" {
        (1.8, 0.6, 1.2)
    } else if label.starts_with("human.") {
        (0.6, 0.6, 1.8)
    } else {
        (1.0, 1.0, 1.0)
    }
}

// ---------------------------------------------------------------------------
// Template geometry
// ---------------------------------------------------------------------------

fn pts(v: &[(f64, f64)]) -> Vec<Point> {
    v.iter().map(|&(x, y)| Point::new(x, y)).collect()
}

fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Polygon {
    Polygon::new(pts(&[(x0, y0), (x1, y0), (x1, y1), (x0, y1)])).expect("valid rectangle")
}

/// Straight lane along +x. `y_right` is the border on the driver's right
/// when `forward` (+x travel); for -x travel the roles flip.
#[allow(clippy::too_many_arguments)]
fn straight_lane(
    id: &str,
    x0: f64,
    x1: f64,
    y_low: f64,
    forward: bool,
    low_divider: DividerType,
    high_divider: DividerType,
) -> RawLane {
    let y_high = y_low + LANE_WIDTH_M;
    let yc = y_low + LANE_WIDTH_M / 2.0;
    let (a, b) = if forward { (x0, x1) } else { (x1, x0) };
    let low_border = BorderSegment {
        line: Polyline::new(pts(&[(a, y_low), (b, y_low)])).unwrap(),
        divider: low_divider,
    };
    let high_border = BorderSegment {
        line: Polyline::new(pts(&[(a, y_high), (b, y_high)])).unwrap(),
        divider: high_divider,
    };
    let (left_border, right_border) =
        if forward { (vec![high_border], vec![low_border]) } else { (vec![low_border], vec![high_border]) };
    RawLane {
        id: id.to_string(),
        centerline: Polyline::new(pts(&[(a, yc), (b, yc)])).unwrap(),
        left_border,
        right_border,
        polygon: rect(x0, y_low, x1, y_high),
        road_segment_id: None,
    }
}

fn segment_spans(length: f64) -> Vec<(f64, f64)> {
    let n = (length / SEGMENT_TARGET_M).ceil().max(1.0) as usize;
    let usable = (length - SEGMENT_GAP_M * (n as f64 - 1.0)) / n as f64;
    (0..n)
        .map(|i| {
            let x0 = i as f64 * (usable + SEGMENT_GAP_M);
            (x0, x0 + usable)
        })
        .collect()
}

/// Eastbound lane ids low-to-high segment; pass `reverse` for the westbound
/// travel order.
pub fn straight_chain(lanes_per_dir: u32, length_m: f64, eastbound: bool, lane_k: u32) -> Vec<String> {
    let n = segment_spans(length_m).len();
    let _ = lanes_per_dir;
    if eastbound {
        (0..n).map(|i| format!("lane_e{lane_k}_s{i}")).collect()
    } else {
        (0..n).rev().map(|i| format!("lane_w{lane_k}_s{i}")).collect()
    }
}

fn build_straight(lanes_per_dir: u32, length_m: f64) -> Result<RawMapBundle, SynthError> {
    if lanes_per_dir == 0 || length_m <= 4.0 {
        return Err(SynthError::BadTemplate(format!(
            "straight road needs lanes_per_dir >= 1 and length > 4, got {lanes_per_dir}/{length_m}"
        )));
    }
    let mut bundle = RawMapBundle::empty();
    let spans = segment_spans(length_m);
    for k in 0..lanes_per_dir {
        // eastbound lane k occupies y in [-(k+1)*w, -k*w]
        let y_low_e = -((k + 1) as f64) * LANE_WIDTH_M;
        let low_div_e = if k + 1 == lanes_per_dir { DividerType::RoadEdge } else { DividerType::SingleDashed };
        let high_div_e = if k == 0 { DividerType::DoubleSolid } else { DividerType::SingleDashed };
        // westbound lane k occupies y in [k*w, (k+1)*w]
        let y_low_w = k as f64 * LANE_WIDTH_M;
        let low_div_w = if k == 0 { DividerType::DoubleSolid } else { DividerType::SingleDashed };
        let high_div_w = if k + 1 == lanes_per_dir { DividerType::RoadEdge } else { DividerType::SingleDashed };

        for (i, &(x0, x1)) in spans.iter().enumerate() {
            bundle.lanes.push(straight_lane(
                &format!("lane_e{k}_s{i}"),
                x0,
                x1,
                y_low_e,
                true,
                low_div_e,
                high_div_e,
            ));
            bundle.lanes.push(straight_lane(
                &format!("lane_w{k}_s{i}"),
                x0,
                x1,
                y_low_w,
                false,
                low_div_w,
                high_div_w,
            ));
        }
        for i in 1..spans.len() {
            let yc_e = y_low_e + LANE_WIDTH_M / 2.0;
            let yc_w = y_low_w + LANE_WIDTH_M / 2.0;
            bundle.lane_connectors.push(RawConnector {
                id: format!("conn_e{k}_s{}", i - 1),
                incoming_lane: format!("lane_e{k}_s{}", i - 1),
                outgoing_lane: format!("lane_e{k}_s{i}"),
                centerline: Polyline::new(pts(&[(spans[i - 1].1, yc_e), (spans[i].0, yc_e)]))
                    .unwrap(),
            });
            bundle.lane_connectors.push(RawConnector {
                id: format!("conn_w{k}_s{i}"),
                incoming_lane: format!("lane_w{k}_s{i}"),
                outgoing_lane: format!("lane_w{k}_s{}", i - 1),
                centerline: Polyline::new(pts(&[(spans[i].0, yc_w), (spans[i - 1].1, yc_w)]))
                    .unwrap(),
            });
        }
    }
    Ok(bundle)
}

fn arc_points(center: Point, radius: f64, a0: f64, a1: f64) -> Vec<Point> {
    let sweep = a1 - a0;
    let n = ((radius * sweep.abs() / ARC_SAMPLE_M).ceil() as usize).max(2);
    (0..=n)
        .map(|i| {
            let a = a0 + sweep * i as f64 / n as f64;
            Point::new(center.x + radius * a.cos(), center.y + radius * a.sin())
        })
        .collect()
}

fn build_curved(radius_m: f64, arc_deg: f64) -> Result<RawMapBundle, SynthError> {
    if radius_m <= 2.0 * LANE_WIDTH_M || !(5.0..=330.0).contains(&arc_deg) {
        return Err(SynthError::BadTemplate(format!(
            "curved road needs radius > {} and arc in [5, 330] degrees, got {radius_m}/{arc_deg}",
            2.0 * LANE_WIDTH_M
        )));
    }
    let sweep = arc_deg.to_radians();
    let c = Point::new(0.0, 0.0);
    let mut bundle = RawMapBundle::empty();

    // counterclockwise lane rides the outer half of the road
    let ccw_center = arc_points(c, radius_m + LANE_WIDTH_M / 2.0, 0.0, sweep);
    let ccw_inner = arc_points(c, radius_m, 0.0, sweep);
    let ccw_outer = arc_points(c, radius_m + LANE_WIDTH_M, 0.0, sweep);
    let mut ring = ccw_outer.clone();
    ring.extend(ccw_inner.iter().rev());
    bundle.lanes.push(RawLane {
        id: "lane_ccw".into(),
        centerline: Polyline::new(ccw_center).unwrap(),
        left_border: vec![BorderSegment {
            line: Polyline::new(ccw_outer).unwrap(),
            divider: DividerType::RoadEdge,
        }],
        right_border: vec![BorderSegment {
            line: Polyline::new(ccw_inner).unwrap(),
            divider: DividerType::DoubleSolid,
        }],
        polygon: Polygon::new(ring).unwrap(),
        road_segment_id: None,
    });

    let cw_center = arc_points(c, radius_m - LANE_WIDTH_M / 2.0, sweep, 0.0);
    let cw_inner = arc_points(c, radius_m - LANE_WIDTH_M, sweep, 0.0);
    let cw_outer = arc_points(c, radius_m, sweep, 0.0);
    let mut ring = cw_outer.clone();
    ring.extend(cw_inner.iter().rev());
    bundle.lanes.push(RawLane {
        id: "lane_cw".into(),
        centerline: Polyline::new(cw_center).unwrap(),
        left_border: vec![BorderSegment {
            line: Polyline::new(cw_outer).unwrap(),
            divider: DividerType::DoubleSolid,
        }],
        right_border: vec![BorderSegment {
            line: Polyline::new(cw_inner).unwrap(),
            divider: DividerType::RoadEdge,
        }],
        polygon: Polygon::new(ring).unwrap(),
        road_segment_id: None,
    });
    Ok(bundle)
}

/// Rotate a whole lane record about the origin.
fn rotate_lane(lane: &RawLane, id: String, angle: f64) -> RawLane {
    RawLane {
        id,
        centerline: lane.centerline.transformed(angle, Point::new(0.0, 0.0)),
        left_border: lane
            .left_border
            .iter()
            .map(|b| BorderSegment {
                line: b.line.transformed(angle, Point::new(0.0, 0.0)),
                divider: b.divider,
            })
            .collect(),
        right_border: lane
            .right_border
            .iter()
            .map(|b| BorderSegment {
                line: b.line.transformed(angle, Point::new(0.0, 0.0)),
                divider: b.divider,
            })
            .collect(),
        polygon: lane.polygon.transformed(angle, Point::new(0.0, 0.0)),
        road_segment_id: lane.road_segment_id.clone(),
    }
}

fn build_intersection(lanes_per_arm: u32) -> Result<RawMapBundle, SynthError> {
    if lanes_per_arm == 0 {
        return Err(SynthError::BadTemplate("lanes_per_arm must be >= 1".into()));
    }
    let lpa = lanes_per_arm;
    let w = lpa as f64 * LANE_WIDTH_M;
    let arms: [(&str, f64); 4] = [
        ("e", 0.0),
        ("n", std::f64::consts::FRAC_PI_2),
        ("w", std::f64::consts::PI),
        ("s", -std::f64::consts::FRAC_PI_2),
    ];
    let mut bundle = RawMapBundle::empty();

    // base (east) arm lanes
    let mut base_out: Vec<RawLane> = Vec::new();
    let mut base_in: Vec<RawLane> = Vec::new();
    for k in 0..lpa {
        let y_low_out = -((k + 1) as f64) * LANE_WIDTH_M;
        let low_div = if k + 1 == lpa { DividerType::RoadEdge } else { DividerType::SingleDashed };
        let high_div = if k == 0 { DividerType::DoubleSolid } else { DividerType::SingleDashed };
        base_out.push(straight_lane("base_out", w, w + ARM_LENGTH_M, y_low_out, true, low_div, high_div));
        let y_low_in = k as f64 * LANE_WIDTH_M;
        let low_div_in = if k == 0 { DividerType::DoubleSolid } else { DividerType::SingleDashed };
        let high_div_in = if k + 1 == lpa { DividerType::RoadEdge } else { DividerType::SingleDashed };
        base_in.push(straight_lane("base_in", w, w + ARM_LENGTH_M, y_low_in, false, low_div_in, high_div_in));
    }

    for &(arm, angle) in &arms {
        for (k, lane) in base_out.iter().enumerate() {
            bundle.lanes.push(rotate_lane(lane, format!("lane_{arm}_o{k}"), angle));
        }
        for (k, lane) in base_in.iter().enumerate() {
            bundle.lanes.push(rotate_lane(lane, format!("lane_{arm}_i{k}"), angle));
        }
    }

    // connectors in the base frame: the east-arm in-lane heads -x into the
    // junction and may go straight (west out), right (north out) or left
    // (south out); other arms follow by rotation
    let order: [(&str, usize); 4] = [("e", 0), ("n", 1), ("w", 2), ("s", 3)];
    for &(arm, ai) in &order {
        let angle = arms[ai].1;
        for k in 0..lpa as usize {
            let yc = (k as f64 + 0.5) * LANE_WIDTH_M;
            let start = Point::new(w, yc);
            // straight across
            let straight = Polyline::new(vec![start, Point::new(-w, yc)]).unwrap();
            // right turn: clockwise quarter arc to the +y arm
            let right = Polyline::new(arc_points(
                Point::new(w, w),
                w - yc,
                -std::f64::consts::FRAC_PI_2,
                -std::f64::consts::PI,
            ))
            .unwrap();
            // left turn: counterclockwise quarter arc to the -y arm
            let left = Polyline::new(arc_points(
                Point::new(w, -w),
                w + yc,
                std::f64::consts::FRAC_PI_2,
                std::f64::consts::PI,
            ))
            .unwrap();
            let zero = Point::new(0.0, 0.0);
            let (s_arm, r_arm, l_arm) = (
                order[(ai + 2) % 4].0, // opposite arm
                order[(ai + 1) % 4].0, // counterclockwise neighbour
                order[(ai + 3) % 4].0, // clockwise neighbour
            );
            bundle.lane_connectors.push(RawConnector {
                id: format!("conn_{arm}_s{k}"),
                incoming_lane: format!("lane_{arm}_i{k}"),
                outgoing_lane: format!("lane_{s_arm}_o{k}"),
                centerline: straight.transformed(angle, zero),
            });
            bundle.lane_connectors.push(RawConnector {
                id: format!("conn_{arm}_r{k}"),
                incoming_lane: format!("lane_{arm}_i{k}"),
                outgoing_lane: format!("lane_{r_arm}_o{k}"),
                centerline: right.transformed(angle, zero),
            });
            bundle.lane_connectors.push(RawConnector {
                id: format!("conn_{arm}_l{k}"),
                incoming_lane: format!("lane_{arm}_i{k}"),
                outgoing_lane: format!("lane_{l_arm}_o{k}"),
                centerline: left.transformed(angle, zero),
            });
        }
    }

    // crossings, walkways, stop areas, traffic lights per arm
    for &(arm, angle) in &arms {
        let zero = Point::new(0.0, 0.0);
        let cross = rect(w, -w, w + 3.0, w).transformed(angle, zero);
        bundle
            .ped_crossings
            .push(RawArea { id: format!("cross_{arm}"), polygon: cross });
        // 0.4 m off the road edge: inside the adjacency threshold for both
        // lanes of the arm, with a clear margin to the 4 m bound
        let walk = rect(w, w + 0.4, w + ARM_LENGTH_M, w + 2.4).transformed(angle, zero);
        bundle.walkways.push(RawArea { id: format!("walk_{arm}"), polygon: walk });

        let stop_tl = rect(w + 3.0, 0.0, w + 4.5, w).transformed(angle, zero);
        bundle.stop_lines.push(RawStopLine {
            id: format!("stop_tl_{arm}"),
            polygon: stop_tl,
            stop_type: StopKind::TrafficLight,
            cause_ref: Some(format!("tl_{arm}")),
        });
        let stop_pc = rect(w + 4.5, 0.0, w + 6.0, w).transformed(angle, zero);
        bundle.stop_lines.push(RawStopLine {
            id: format!("stop_pc_{arm}"),
            polygon: stop_pc,
            stop_type: StopKind::PedCrossing,
            cause_ref: Some(format!("cross_{arm}")),
        });
        let tl_pose = Pose2D::new(w + 3.0, w, 0.0).transformed(angle, zero);
        bundle.traffic_lights.push(RawTrafficLight {
            id: format!("tl_{arm}"),
            pose: tl_pose,
            tl_type: if arm == "n" || arm == "s" { TlType::Horizontal } else { TlType::Vertical },
        });
    }

    bundle.road_segments.push(RawRoadSegment {
        id: "junction_0".into(),
        polygon: rect(-w, -w, w, w),
        is_intersection: true,
    });
    Ok(bundle)
}

fn build_parking(length_m: f64) -> Result<RawMapBundle, SynthError> {
    let mut bundle = build_straight(1, length_m)?;
    let y_top = -LANE_WIDTH_M - 0.3;
    bundle.carpark_areas.push(RawArea {
        id: "carpark_0".into(),
        polygon: rect(0.25 * length_m, y_top - 2.5, 0.75 * length_m, y_top),
    });
    Ok(bundle)
}

pub fn build_map(template: &ScenarioTemplate) -> Result<RawMapBundle, SynthError> {
    let mut bundle = match template {
        ScenarioTemplate::StraightRoad { lanes_per_dir, length_m } => {
            build_straight(*lanes_per_dir, *length_m)?
        }
        ScenarioTemplate::CurvedRoad { radius_m, arc_deg } => build_curved(*radius_m, *arc_deg)?,
        ScenarioTemplate::FourWayIntersection { lanes_per_arm } => {
            build_intersection(*lanes_per_arm)?
        }
        ScenarioTemplate::ParkingStrip { length_m } => build_parking(*length_m)?,
    };
    bundle.locations.push(RawLocation {
        id: "loc_synth".into(),
        name: "synthetic".into(),
        right_hand_traffic: true,
        geo_origin: Some((1.2902, 103.852)),
    });
    Ok(bundle)
}

// ---------------------------------------------------------------------------
// Agent motion and trip assembly
// ---------------------------------------------------------------------------

fn composite_path(
    bundle: &RawMapBundle,
    plan: &AgentPlan,
    agent: usize,
) -> Result<Polyline, SynthError> {
    if plan.path.is_empty() {
        return Err(SynthError::EmptyPath { agent });
    }
    let lane = |id: &str| -> Result<&RawLane, SynthError> {
        bundle.lane(id).ok_or_else(|| SynthError::UnknownLane { agent, lane: id.to_string() })
    };
    let mut points: Vec<Point> = lane(&plan.path[0])?.centerline.points().to_vec();
    for pair in plan.path.windows(2) {
        let conn = bundle
            .lane_connectors
            .iter()
            .find(|c| c.incoming_lane == pair[0] && c.outgoing_lane == pair[1])
            .ok_or_else(|| SynthError::InfeasiblePlan {
                agent,
                from: pair[0].clone(),
                to: pair[1].clone(),
            })?;
        for part in [conn.centerline.points(), lane(&pair[1])?.centerline.points()] {
            for p in part {
                if points.last().map(|l| l.dist(*p) > 1e-9).unwrap_or(true) {
                    points.push(*p);
                }
            }
        }
    }
    Ok(Polyline::new(points)?)
}

/// Generate the scenario's input pair. Deterministic in (scenario, seed);
/// agents advance along lane centerlines at constant speed, sampled at 2 Hz,
/// and stop at the end of their path.
pub fn generate(
    scenario: &Scenario,
    seed: u64,
    duration_s: f64,
) -> Result<(RawMapBundle, RawTripSet), SynthError> {
    let ego_count = scenario.agents.iter().filter(|a| a.is_ego).count();
    if ego_count != 1 {
        return Err(SynthError::EgoCount(ego_count));
    }
    let bundle = build_map(&scenario.template)?;

    let paths: Vec<Polyline> = scenario
        .agents
        .iter()
        .enumerate()
        .map(|(i, plan)| composite_path(&bundle, plan, i))
        .collect::<Result<_, _>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let token = format!("{:08x}", rng.next_u64() as u32);
    let trip_id = format!("trip_{token}");
    let seq_id = format!("seq_{token}");

    let n_scenes = ((duration_s * 2.0).round() as usize).max(1);
    let mut scenes = Vec::with_capacity(n_scenes);
    for k in 0..n_scenes {
        let t = k as f64 * 0.5;
        let timestamp = BASE_TIMESTAMP_US + k as i64 * SCENE_STEP_US;
        let mut annotations = Vec::with_capacity(scenario.agents.len());
        let mut ego_pose = Pose2D::new(0.0, 0.0, 0.0);
        for (i, plan) in scenario.agents.iter().enumerate() {
            let s = (plan.start_offset_m + plan.speed_mps * t).min(paths[i].length());
            let pose = paths[i].pose_at(s);
            if plan.is_ego {
                ego_pose = pose;
            }
            annotations.push(RawAnnotation {
                agent_id: if plan.is_ego { "ego".into() } else { format!("agent_{i}") },
                category: plan.category,
                pose,
                size: default_size(plan.category),
                is_ego: plan.is_ego,
            });
        }
        scenes.push(RawScene { timestamp, ego_pose, annotations });
    }

    let trips = RawTripSet {
        trips: vec![RawTrip {
            id: trip_id,
            location_id: "loc_synth".into(),
            sequences: vec![RawSequence { id: seq_id, scenes }],
        }],
        locations: bundle.locations.clone(),
    };
    Ok((bundle, trips))
}

/// Canned agent plans per template: one ego plus scripted traffic.
pub fn default_agents(template: &ScenarioTemplate) -> Vec<AgentPlan> {
    use ParticipantCategory::VehicleCar;
    match template {
        ScenarioTemplate::StraightRoad { lanes_per_dir, length_m } => vec![
            AgentPlan {
                category: VehicleCar,
                path: straight_chain(*lanes_per_dir, *length_m, true, 0),
                speed_mps: 3.0,
                start_offset_m: 5.3,
                is_ego: true,
            },
            AgentPlan {
                category: VehicleCar,
                path: straight_chain(*lanes_per_dir, *length_m, true, 0),
                speed_mps: 4.0,
                start_offset_m: 15.3,
                is_ego: false,
            },
            AgentPlan {
                category: VehicleCar,
                path: straight_chain(*lanes_per_dir, *length_m, false, 0),
                speed_mps: 4.0,
                start_offset_m: 10.3,
                is_ego: false,
            },
        ],
        ScenarioTemplate::CurvedRoad { .. } => vec![
            AgentPlan {
                category: VehicleCar,
                path: vec!["lane_ccw".into()],
                speed_mps: 3.0,
                start_offset_m: 4.7,
                is_ego: true,
            },
            AgentPlan {
                category: VehicleCar,
                path: vec!["lane_cw".into()],
                speed_mps: 3.5,
                start_offset_m: 2.3,
                is_ego: false,
            },
        ],
        ScenarioTemplate::FourWayIntersection { .. } => vec![
            AgentPlan {
                category: VehicleCar,
                path: vec!["lane_e_i0".into(), "lane_w_o0".into()],
                speed_mps: 4.0,
                start_offset_m: 5.3,
                is_ego: true,
            },
            AgentPlan {
                category: VehicleCar,
                path: vec!["lane_n_i0".into(), "lane_s_o0".into()],
                speed_mps: 4.0,
                start_offset_m: 8.3,
                is_ego: false,
            },
            AgentPlan {
                category: VehicleCar,
                path: vec!["lane_w_i0".into(), "lane_s_o0".into()],
                speed_mps: 3.0,
                start_offset_m: 2.1,
                is_ego: false,
            },
        ],
        ScenarioTemplate::ParkingStrip { length_m } => vec![
            AgentPlan {
                category: VehicleCar,
                path: straight_chain(1, *length_m, true, 0),
                speed_mps: 3.0,
                start_offset_m: 3.3,
                is_ego: true,
            },
            AgentPlan {
                category: VehicleCar,
                path: straight_chain(1, *length_m, false, 0),
                speed_mps: 3.0,
                start_offset_m: 5.1,
                is_ego: false,
            },
        ],
    }
}

/// Apply one rigid transform (rotation then translation) to every global
/// coordinate in the pair: map geometry, agent poses and ego poses.
pub fn transform_scenario(
    map: &mut RawMapBundle,
    trips: &mut RawTripSet,
    angle: f64,
    translation: Point,
) {
    let t = translation;
    for lane in &mut map.lanes {
        lane.centerline = lane.centerline.transformed(angle, t);
        for b in lane.left_border.iter_mut().chain(lane.right_border.iter_mut()) {
            b.line = b.line.transformed(angle, t);
        }
        lane.polygon = lane.polygon.transformed(angle, t);
    }
    for c in &mut map.lane_connectors {
        c.centerline = c.centerline.transformed(angle, t);
    }
    for a in map
        .walkways
        .iter_mut()
        .chain(map.ped_crossings.iter_mut())
        .chain(map.carpark_areas.iter_mut())
    {
        a.polygon = a.polygon.transformed(angle, t);
    }
    for s in &mut map.stop_lines {
        s.polygon = s.polygon.transformed(angle, t);
    }
    for r in &mut map.road_segments {
        r.polygon = r.polygon.transformed(angle, t);
    }
    for tl in &mut map.traffic_lights {
        tl.pose = tl.pose.transformed(angle, t);
    }
    for trip in &mut trips.trips {
        for seq in &mut trip.sequences {
            for scene in &mut seq.scenes {
                scene.ego_pose = scene.ego_pose.transformed(angle, t);
                for ann in &mut scene.annotations {
                    ann.pose = ann.pose.transformed(angle, t);
                }
            }
        }
    }
}
