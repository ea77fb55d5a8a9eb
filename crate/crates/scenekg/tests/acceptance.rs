//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (failures panic and are reported by the harness). Oracles are
//! independent of the implementation paths they check: scalar arc-length
//! walkers, winding numbers, dense boundary sampling and closed-form
//! kinematics.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scenekg::extract::{Extractor, HISTORY_SCENES, FUTURE_STEPS};
use scenekg::geometry::{Point, Polygon, Polyline};
use scenekg::kg::{attr, validate_schema, Direction, EdgeType, NodeType};
use scenekg::scene_ir::{BorderSegment, RawLane};
use scenekg::synthgen::{
    self, generate, straight_chain, AgentPlan, Scenario, ScenarioTemplate,
};
use scenekg::vocab::{DividerType, ParticipantCategory};
use scenekg::{compile_scene, CompiledScene, Config};

fn pts(v: &[(f64, f64)]) -> Vec<Point> {
    v.iter().map(|&(x, y)| Point::new(x, y)).collect()
}

// ---------------------------------------------------------------------------
// Independent oracles
// ---------------------------------------------------------------------------

/// Scalar arc-length walker: position at arc length s, derived by walking
/// raw segment lists without touching the library's parameterization.
fn walk_to(points: &[Point], s: f64) -> Point {
    let mut remaining = s.max(0.0);
    for w in points.windows(2) {
        let seg = w[1].sub(w[0]);
        let len = w[0].dist(w[1]);
        if remaining <= len {
            return w[0].add(seg.scale(remaining / len));
        }
        remaining -= len;
    }
    *points.last().unwrap()
}

fn total_length(points: &[Point]) -> f64 {
    points.windows(2).map(|w| w[0].dist(w[1])).sum()
}

fn winding_contains(poly: &Polygon, p: Point) -> bool {
    if poly.on_boundary(p, 1e-9) {
        return true;
    }
    let ring = poly.ring();
    let n = ring.len();
    let mut total = 0.0f64;
    for i in 0..n {
        let a = ring[i].sub(p);
        let b = ring[(i + 1) % n].sub(p);
        total += a.cross(b).atan2(a.dot(b));
    }
    total.abs() > std::f64::consts::PI
}

/// Dense-sampling polygon distance: boundary points of `a` at ~2 cm spacing
/// against exact point-to-polygon distance into `b`, both directions.
fn dense_polygon_distance(a: &Polygon, b: &Polygon) -> f64 {
    fn one_way(a: &Polygon, b: &Polygon) -> f64 {
        let mut best = f64::INFINITY;
        for (p0, p1) in a.edges() {
            let len = p0.dist(p1);
            let n = ((len / 0.02).ceil() as usize).max(1);
            for i in 0..=n {
                let q = p0.add(p1.sub(p0).scale(i as f64 / n as f64));
                best = best.min(b.distance_to_point(q));
                if best == 0.0 {
                    return 0.0;
                }
            }
        }
        best
    }
    one_way(a, b).min(one_way(b, a))
}

fn random_polyline(rng: &mut ChaCha8Rng) -> Vec<Point> {
    let n = rng.gen_range(2..10);
    let mut points = Vec::with_capacity(n);
    let mut cursor = Point::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
    points.push(cursor);
    for _ in 1..n {
        cursor = cursor.add(Point::new(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0)));
        while points.last().unwrap().dist(cursor) < 0.1 {
            cursor = cursor.add(Point::new(1.0, 0.5));
        }
        points.push(cursor);
    }
    points
}

/// Star polygon around a random center: always simple.
fn random_polygon(rng: &mut ChaCha8Rng) -> Polygon {
    let n = rng.gen_range(3..10);
    let cx = rng.gen_range(-30.0..30.0);
    let cy = rng.gen_range(-30.0..30.0);
    let ring: Vec<Point> = (0..n)
        .map(|i| {
            let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            let r = rng.gen_range(1.0..8.0);
            Point::new(cx + r * a.cos(), cy + r * a.sin())
        })
        .collect();
    Polygon::new(ring).unwrap()
}

// ---------------------------------------------------------------------------
// Shared scenario helpers
// ---------------------------------------------------------------------------

fn all_templates() -> Vec<Scenario> {
    vec![
        Scenario::with_default_agents(ScenarioTemplate::StraightRoad {
            lanes_per_dir: 1,
            length_m: 100.0,
        }),
        Scenario::with_default_agents(ScenarioTemplate::StraightRoad {
            lanes_per_dir: 2,
            length_m: 130.0,
        }),
        Scenario::with_default_agents(ScenarioTemplate::CurvedRoad {
            radius_m: 30.0,
            arc_deg: 120.0,
        }),
        Scenario::with_default_agents(ScenarioTemplate::FourWayIntersection { lanes_per_arm: 1 }),
        Scenario::with_default_agents(ScenarioTemplate::ParkingStrip { length_m: 70.0 }),
    ]
}

fn compile(scenario: &Scenario, seed: u64, duration: f64) -> CompiledScene {
    let (map, trips) = generate(scenario, seed, duration).unwrap();
    compile_scene(&map, &trips, &Config::default()).unwrap()
}

fn sequence_of(compiled: &CompiledScene) -> String {
    compiled
        .graph
        .nodes()
        .find(|n| n.ty == NodeType::Sequence)
        .map(|n| n.id.clone())
        .expect("sequence exists")
}

// ---------------------------------------------------------------------------
// 1. Geometry oracle suite
// ---------------------------------------------------------------------------

#[test]
fn acceptance_01_geometry_oracles() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);

    // resampling spacing against the scalar arc-length walker
    for _ in 0..1000 {
        let raw = random_polyline(&mut rng);
        let line = Polyline::new(raw.clone()).unwrap();
        let step = rng.gen_range(0.5..5.0);
        let poses = line.resample(step).unwrap();
        let len = total_length(&raw);
        for (k, pose) in poses.iter().enumerate().take(poses.len() - 1) {
            let expect = walk_to(&raw, k as f64 * step);
            assert!(
                pose.position().dist(expect) < 1e-6,
                "pose {k} deviates from the arc-length oracle"
            );
        }
        let last = poses.last().unwrap().position();
        assert!(last.dist(walk_to(&raw, len)) < 1e-6);
        // spacing: exact step except the terminal pair
        for k in 2..poses.len() {
            let gap = walk_to(&raw, (k - 1) as f64 * step).dist(Point::new(0.0, 0.0));
            let _ = gap; // spacing is implied by the position checks above
        }
    }

    // projection optimality against 10 000 dense samples
    for _ in 0..1000 {
        let raw = random_polyline(&mut rng);
        let line = Polyline::new(raw.clone()).unwrap();
        let p = Point::new(rng.gen_range(-80.0..80.0), rng.gen_range(-80.0..80.0));
        let proj = line.project(p);
        let len = total_length(&raw);
        let mut dense_best = f64::INFINITY;
        for k in 0..=10_000 {
            let q = walk_to(&raw, len * k as f64 / 10_000.0);
            dense_best = dense_best.min(p.dist(q));
        }
        assert!(
            proj.distance <= dense_best + 1e-6,
            "projection {} worse than dense sampling {}",
            proj.distance,
            dense_best
        );
    }

    // containment against the winding-number oracle
    for i in 0..1000 {
        let poly = random_polygon(&mut rng);
        let samples = if i < 20 { 10_000 } else { 100 };
        for _ in 0..samples {
            let p = Point::new(rng.gen_range(-45.0..45.0), rng.gen_range(-45.0..45.0));
            assert_eq!(
                poly.contains(p),
                winding_contains(&poly, p),
                "containment mismatch at {p:?}"
            );
        }
    }

    // polygon distance against dense boundary sampling (1 cm)
    for _ in 0..1000 {
        let a = random_polygon(&mut rng);
        let b = random_polygon(&mut rng);
        let got = a.distance(&b);
        let oracle = dense_polygon_distance(&a, &b);
        assert!(
            (got - oracle).abs() <= 0.01,
            "distance {got} vs dense oracle {oracle}"
        );
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "geometry suite took {elapsed:?}");
    println!("acceptance 01 geometry-oracles: PASS ({elapsed:?})");
}

// ---------------------------------------------------------------------------
// 2. Snippet law
// ---------------------------------------------------------------------------

#[test]
fn acceptance_02_snippet_law() {
    let cfg = Config::default();
    for scenario in all_templates() {
        let (map, trips) = generate(&scenario, 2, 8.0).unwrap();
        let compiled = compile_scene(&map, &trips, &cfg).unwrap();
        for (lane_id, lane) in &compiled.map.lanes {
            let len = lane.centerline.length();
            let total: f64 = lane.snippets.iter().map(|s| s.length()).sum();
            assert!(
                (total - len).abs() <= 1e-6 * len.max(1.0),
                "lane {lane_id}: snippet lengths sum {total} vs centerline {len}"
            );
            let mut cursor = 0.0;
            for sn in &lane.snippets {
                assert!(sn.length() <= 20.0 + 1e-6, "lane {lane_id}: snippet too long");
                assert!((sn.s_start - cursor).abs() <= 1e-9, "lane {lane_id}: snippet gap");
                cursor = sn.s_end;
            }
            // border-type constancy: no divider change point strictly inside
            // a snippet (checked from the raw borders)
            let raw_lane = map.lane(lane_id).unwrap();
            for border in [&raw_lane.left_border, &raw_lane.right_border] {
                for pair in border.windows(2) {
                    if pair[0].divider == pair[1].divider {
                        continue;
                    }
                    let change = lane.centerline.project(pair[1].line.first()).arc_s;
                    for sn in &lane.snippets {
                        assert!(
                            change <= sn.s_start + 1e-6 || change >= sn.s_end - 1e-6,
                            "lane {lane_id}: divider change at {change} inside snippet [{}, {}]",
                            sn.s_start,
                            sn.s_end
                        );
                    }
                }
            }
        }
    }

    // the 50 m case: exactly 3 equal snippets
    let scenario = Scenario::with_default_agents(ScenarioTemplate::StraightRoad {
        lanes_per_dir: 1,
        length_m: 50.0,
    });
    let compiled = compile(&scenario, 2, 8.0);
    let lane = &compiled.map.lanes["lane_e0_s0"];
    assert!((lane.centerline.length() - 50.0).abs() < 1e-9);
    assert_eq!(lane.snippets.len(), 3);
    for sn in &lane.snippets {
        assert!((sn.length() - 50.0 / 3.0).abs() < 1e-9);
    }
    println!("acceptance 02 snippet-law: PASS");
}

// ---------------------------------------------------------------------------
// 3. Width law
// ---------------------------------------------------------------------------

#[test]
fn acceptance_03_width_law() {
    let cfg = Config::default();

    // straight 3.5 m lanes: exact width everywhere
    let compiled = compile(
        &Scenario::with_default_agents(ScenarioTemplate::StraightRoad {
            lanes_per_dir: 1,
            length_m: 100.0,
        }),
        3,
        8.0,
    );
    for lane in compiled.map.lanes.values() {
        for slice in &lane.slices {
            assert!((slice.width - 3.5).abs() <= 1e-6, "width {}", slice.width);
        }
    }

    // wedge lane: borders y = +-(1 + 0.1 x), analytic width with clamped ends
    let wedge = RawLane {
        id: "wedge".into(),
        centerline: Polyline::new(pts(&[(0.0, 0.0), (10.0, 0.0)])).unwrap(),
        left_border: vec![BorderSegment {
            line: Polyline::new(pts(&[(0.0, 1.0), (10.0, 2.0)])).unwrap(),
            divider: DividerType::SingleDashed,
        }],
        right_border: vec![BorderSegment {
            line: Polyline::new(pts(&[(0.0, -1.0), (10.0, -2.0)])).unwrap(),
            divider: DividerType::SingleDashed,
        }],
        polygon: Polygon::new(pts(&[(0.0, -1.0), (10.0, -2.0), (10.0, 2.0), (0.0, 1.0)])).unwrap(),
        road_segment_id: None,
    };
    let slices = scenekg::map_compiler::compute_lane_slices(&wedge, &cfg).unwrap();
    assert_eq!(slices.len(), 6);
    for slice in &slices {
        let x = slice.arc_s;
        let analytic = if x < 0.1 { 2.0 } else { 2.0 * (1.0 + 0.1 * x) / 1.01 };
        assert!(
            (slice.width - analytic).abs() <= 0.01,
            "slice at {x}: width {} vs analytic {analytic}",
            slice.width
        );
    }
    println!("acceptance 03 width-law: PASS");
}

// ---------------------------------------------------------------------------
// 4. Pose resolution
// ---------------------------------------------------------------------------

#[test]
fn acceptance_04_pose_resolution() {
    let cfg = Config::default();
    for scenario in all_templates() {
        let compiled = compile(&scenario, 4, 8.0);
        let g = &compiled.graph;
        for (conn_id, conn) in &compiled.map.connectors {
            let poses = g.neighbors(conn_id, EdgeType::ConnectorHasPose, Direction::Out).unwrap();
            assert!(poses.len() >= 2, "connector {conn_id} has {} poses", poses.len());
            let arcs: Vec<f64> = poses
                .iter()
                .map(|pid| {
                    let idx = g.index_of(pid).unwrap();
                    let p = Point::new(
                        g.attr_f64(idx, attr::X).unwrap(),
                        g.attr_f64(idx, attr::Y).unwrap(),
                    );
                    conn.centerline.project(p).arc_s
                })
                .collect();
            for w in arcs.windows(2).take(arcs.len().saturating_sub(2)) {
                assert!(
                    (w[1] - w[0] - cfg.pose_resolution_m).abs() <= 1e-6,
                    "connector {conn_id}: non-uniform pose spacing {}",
                    w[1] - w[0]
                );
            }
            let last_gap = arcs[arcs.len() - 1] - arcs[arcs.len() - 2];
            assert!(
                last_gap <= cfg.pose_resolution_m + 1e-6 && last_gap > 0.0,
                "connector {conn_id}: terminal gap {last_gap}"
            );
        }
    }
    println!("acceptance 04 pose-resolution: PASS");
}

// ---------------------------------------------------------------------------
// 5. Thresholded relations
// ---------------------------------------------------------------------------

#[test]
fn acceptance_05_thresholded_relations() {
    let scenario =
        Scenario::with_default_agents(ScenarioTemplate::FourWayIntersection { lanes_per_arm: 1 });
    let (map, trips) = generate(&scenario, 5, 8.0).unwrap();
    let cfg = Config::default();
    let compiled = compile_scene(&map, &trips, &cfg).unwrap();
    let g = &compiled.graph;

    // crossings link the <=2 nearest walkways within 5 m (dense oracle)
    for crossing in &map.ped_crossings {
        let mut candidates: Vec<(f64, &str)> = map
            .walkways
            .iter()
            .filter_map(|w| {
                let d = dense_polygon_distance(&crossing.polygon, &w.polygon);
                (d < cfg.crossing_walkway_m).then_some((d, w.id.as_str()))
            })
            .collect();
        candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(b.1)));
        let expected: BTreeSet<&str> = candidates.iter().take(2).map(|(_, id)| *id).collect();
        let got: BTreeSet<&str> = g
            .neighbors(&crossing.id, EdgeType::ConnectsWalkways, Direction::Out)
            .unwrap()
            .into_iter()
            .collect();
        assert!(got.len() <= 2, "crossing {} links {} walkways", crossing.id, got.len());
        assert_eq!(got, expected, "crossing {}", crossing.id);
    }

    // walkway adjacency holds exactly below 4 m
    for walkway in &map.walkways {
        let linked: BTreeSet<&str> = g
            .neighbors(&walkway.id, EdgeType::WalkwayIsNextTo, Direction::Out)
            .unwrap()
            .into_iter()
            .collect();
        for lane in &map.lanes {
            let d = dense_polygon_distance(&walkway.polygon, &lane.polygon);
            let expect = d < cfg.is_next_to_m;
            assert_eq!(
                linked.contains(lane.id.as_str()),
                expect,
                "walkway {} / lane {}: distance {d}",
                walkway.id,
                lane.id
            );
        }
        assert!(!linked.is_empty(), "walkway {} borders no lane", walkway.id);
    }

    // carpark adjacency on the parking template
    let parking = Scenario::with_default_agents(ScenarioTemplate::ParkingStrip { length_m: 70.0 });
    let (pmap, ptrips) = generate(&parking, 5, 8.0).unwrap();
    let pcompiled = compile_scene(&pmap, &ptrips, &cfg).unwrap();
    for carpark in &pmap.carpark_areas {
        let linked: BTreeSet<&str> = pcompiled
            .graph
            .neighbors(&carpark.id, EdgeType::CarparkIsNextTo, Direction::Out)
            .unwrap()
            .into_iter()
            .collect();
        for lane in &pmap.lanes {
            let d = dense_polygon_distance(&carpark.polygon, &lane.polygon);
            assert_eq!(linked.contains(lane.id.as_str()), d < cfg.is_next_to_m);
        }
        assert!(!linked.is_empty());
    }
    println!("acceptance 05 thresholded-relations: PASS");
}

// ---------------------------------------------------------------------------
// 6. Local-frame invariance
// ---------------------------------------------------------------------------

fn invariance_scenario() -> Scenario {
    Scenario {
        template: ScenarioTemplate::StraightRoad { lanes_per_dir: 1, length_m: 60.0 },
        agents: vec![
            AgentPlan {
                category: ParticipantCategory::VehicleCar,
                path: straight_chain(1, 60.0, true, 0),
                speed_mps: 3.0,
                start_offset_m: 5.3,
                is_ego: true,
            },
            AgentPlan {
                category: ParticipantCategory::VehicleCar,
                path: straight_chain(1, 60.0, true, 0),
                speed_mps: 4.0,
                start_offset_m: 15.3,
                is_ego: false,
            },
            AgentPlan {
                category: ParticipantCategory::VehicleCar,
                path: straight_chain(1, 60.0, false, 0),
                speed_mps: 4.0,
                start_offset_m: 10.1,
                is_ego: false,
            },
        ],
    }
}

#[test]
fn acceptance_06_local_frame_invariance() {
    let cfg = Config::default();
    let scenario = invariance_scenario();
    let (map0, trips0) = generate(&scenario, 6, 12.0).unwrap();
    let base = compile_scene(&map0, &trips0, &cfg).unwrap();
    let base_examples = Extractor::new(&base, &cfg).extract_all().unwrap();
    assert!(!base_examples.is_empty());

    // target rows are exactly the origin
    for ex in &base_examples {
        let (key, row) = &ex.example.target;
        let table = &ex.example.nodes[key];
        let b = (*row as usize) * table.cols as usize;
        assert!(table.data[b].abs() <= 1e-9);
        assert!(table.data[b + 1].abs() <= 1e-9);
        assert!(table.data[b + 2].abs() <= 1e-9);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for round in 0..100 {
        let angle = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let t = Point::new(rng.gen_range(-1000.0..1000.0), rng.gen_range(-1000.0..1000.0));
        let (mut map, mut trips) = generate(&scenario, 6, 12.0).unwrap();
        synthgen::transform_scenario(&mut map, &mut trips, angle, t);
        let moved = compile_scene(&map, &trips, &cfg).unwrap();
        let moved_examples = Extractor::new(&moved, &cfg).extract_all().unwrap();

        assert_eq!(
            base_examples.len(),
            moved_examples.len(),
            "round {round}: example count changed under rigid transform"
        );
        for (a, b) in base_examples.iter().zip(&moved_examples) {
            assert_eq!(a.meta, b.meta, "round {round}");
            let (ka, kb): (Vec<_>, Vec<_>) =
                (a.example.nodes.keys().collect(), b.example.nodes.keys().collect());
            assert_eq!(ka, kb, "round {round}");
            for (key, ta) in &a.example.nodes {
                let tb = &b.example.nodes[key];
                assert_eq!(ta.rows, tb.rows, "round {round} table {key}");
                for (va, vb) in ta.data.iter().zip(&tb.data) {
                    assert!(
                        (va - vb).abs() <= 1e-6,
                        "round {round} table {key}: {va} vs {vb}"
                    );
                }
            }
            assert_eq!(a.example.edges, b.example.edges, "round {round}");
            for (ra, rb) in a.example.y.iter().zip(&b.example.y) {
                assert!((ra[0] - rb[0]).abs() <= 1e-6 && (ra[1] - rb[1]).abs() <= 1e-6);
            }
            // target stays at the origin after the transform too
            let (key, row) = &b.example.target;
            let table = &b.example.nodes[key];
            let base_i = (*row as usize) * table.cols as usize;
            assert!(table.data[base_i].abs() <= 1e-9);
            assert!(table.data[base_i + 1].abs() <= 1e-9);
            assert!(table.data[base_i + 2].abs() <= 1e-9);
        }
    }
    println!("acceptance 06 local-frame-invariance: PASS");
}

// ---------------------------------------------------------------------------
// 7. Window and shape law
// ---------------------------------------------------------------------------

#[test]
fn acceptance_07_window_and_kinematics() {
    let cfg = Config::default();
    let compiled = compile(&invariance_scenario(), 7, 12.0);
    let extractor = Extractor::new(&compiled, &cfg);
    let examples = extractor.extract_all().unwrap();
    assert!(!examples.is_empty());

    for ex in &examples {
        assert_eq!(ex.example.y.len(), FUTURE_STEPS);
        let scenes = &ex.example.nodes["Scene"];
        assert_eq!(scenes.rows as usize, HISTORY_SCENES);
        // constant-velocity oracle: 4 m/s along the locally-straight path
        for (k, row) in ex.example.y.iter().enumerate() {
            let expect = 2.0 * (k + 1) as f64;
            assert!(
                (row[0] - expect).abs() <= 1e-6 && row[1].abs() <= 1e-6,
                "example {:?} step {k}: {row:?} vs ({expect}, 0)",
                ex.meta
            );
        }
    }
    println!("acceptance 07 window-and-kinematics: PASS ({} examples)", examples.len());
}

// ---------------------------------------------------------------------------
// 8. Four-hop map pruning
// ---------------------------------------------------------------------------

#[test]
fn acceptance_08_four_hop_pruning() {
    let length = 300.0; // six ~48 m segments
    let scenario = Scenario {
        template: ScenarioTemplate::StraightRoad { lanes_per_dir: 1, length_m: length },
        agents: vec![
            AgentPlan {
                category: ParticipantCategory::VehicleCar,
                path: straight_chain(1, length, true, 0),
                speed_mps: 3.0,
                start_offset_m: 5.3,
                is_ego: true,
            },
            AgentPlan {
                category: ParticipantCategory::VehicleCar,
                path: straight_chain(1, length, true, 0),
                speed_mps: 4.0,
                start_offset_m: 15.3,
                is_ego: false,
            },
            AgentPlan {
                category: ParticipantCategory::VehicleCar,
                path: vec!["lane_e0_s5".into()],
                speed_mps: 0.0,
                start_offset_m: 20.0,
                is_ego: false,
            },
        ],
    };
    let compiled = compile(&scenario, 8, 20.0);
    let cfg = Config::default();
    let extractor = Extractor::new(&compiled, &cfg);
    let g = &compiled.graph;

    let targets = extractor.select_targets(&sequence_of(&compiled)).unwrap();
    let target = targets
        .iter()
        .find(|t| t.participant == "agent_1" && t.anchor_index == 4)
        .expect("moving car target at anchor 4");
    let (map_set, warnings) = extractor.extract_map_subgraph(target).unwrap();
    assert!(warnings.is_empty());

    // exactly the first five eastbound blocks plus their opposing blocks
    let mut expected: BTreeSet<String> = BTreeSet::new();
    for i in 0..5 {
        expected.insert(compiled.map.lanes[&format!("lane_e0_s{i}")].block.clone());
        expected.insert(compiled.map.lanes[&format!("lane_w0_s{i}")].block.clone());
    }
    let got: BTreeSet<String> = map_set
        .iter()
        .filter(|&&i| g.node_at(i).ty == NodeType::RoadBlock)
        .map(|&i| g.node_at(i).id.clone())
        .collect();
    assert_eq!(got, expected);
    // the seed's opposing block is present
    assert!(got.contains(&compiled.map.lanes["lane_w0_s0"].block));
    // block five is beyond four hops
    assert!(!got.contains(&compiled.map.lanes["lane_e0_s5"].block));

    // the parked agent on block five is not a relevant history agent
    let history = extractor.extract_history(target, &map_set).unwrap();
    let ids: BTreeSet<&str> = history.iter().map(|&i| g.node_at(i).id.as_str()).collect();
    assert!(!ids.contains("agent_2"));
    assert!(ids.contains("ego"));
    println!("acceptance 08 four-hop-pruning: PASS");
}

// ---------------------------------------------------------------------------
// 9. Schema suite
// ---------------------------------------------------------------------------

#[test]
fn acceptance_09_schema_suite() {
    let cfg = Config::default();
    // each ontology rule detects its minimal violating graph
    let fixtures = scenekg::kg::validate::fixtures::violating_graphs();
    assert_eq!(fixtures.len(), 19);
    for (rule, graph) in fixtures {
        let violations = validate_schema(&graph, &cfg);
        assert!(
            violations.iter().any(|v| v.rule == rule),
            "rule '{rule}' did not detect its violating graph: {violations:?}"
        );
    }
    // every template compiles violation-free
    for scenario in all_templates() {
        let compiled = compile(&scenario, 9, 10.0);
        let violations = validate_schema(&compiled.graph, &cfg);
        assert!(violations.is_empty(), "{violations:#?}");
    }
    println!("acceptance 09 schema-suite: PASS");
}

// ---------------------------------------------------------------------------
// 10. Determinism and roundtrip
// ---------------------------------------------------------------------------

#[test]
fn acceptance_10_determinism_roundtrip() {
    use scenekg::dataset_io::{tree_digest, write_dataset};
    use scenekg::kg::{export_ntriples_to_string, parse_ntriples};
    use scenekg::scene_ir::{Split, SplitTable};

    let cfg = Config::default();
    let scenario =
        Scenario::with_default_agents(ScenarioTemplate::FourWayIntersection { lanes_per_arm: 1 });

    // two independent builds export byte-identical triples
    let a = compile(&scenario, 10, 10.0);
    let b = compile(&scenario, 10, 10.0);
    let (text_a, count_a) = export_ntriples_to_string(&a.graph);
    let (text_b, count_b) = export_ntriples_to_string(&b.graph);
    assert_eq!(text_a, text_b);
    assert_eq!(count_a, count_b);

    // export -> parse -> export is the identity on bytes
    let parsed = parse_ntriples(std::io::BufReader::new(text_a.as_bytes())).unwrap();
    let (text_c, count_c) = export_ntriples_to_string(&parsed);
    assert_eq!(text_a, text_c);
    assert_eq!(count_a, count_c);

    // dataset trees from two runs hash identically
    let extract = |compiled: &CompiledScene| {
        Extractor::new(compiled, &cfg).extract_all().unwrap()
    };
    let examples_a = extract(&a);
    let examples_b = extract(&b);
    assert_eq!(examples_a, examples_b);
    let splits = SplitTable::assign_all(
        examples_a.iter().map(|e| e.meta.sequence.as_str()).collect::<BTreeSet<_>>(),
        Split::Train,
    );
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    write_dataset(&examples_a, &splits, d1.path(), &cfg).unwrap();
    write_dataset(&examples_b, &splits, d2.path(), &cfg).unwrap();
    assert_eq!(tree_digest(d1.path()).unwrap(), tree_digest(d2.path()).unwrap());
    println!("acceptance 10 determinism-roundtrip: PASS ({count_a} triples)");
}

// ---------------------------------------------------------------------------
// 11. Performance smoke
// ---------------------------------------------------------------------------

fn city_inputs() -> (scenekg::scene_ir::RawMapBundle, scenekg::scene_ir::RawTripSet) {
    use scenekg::scene_ir::*;
    use scenekg::geometry::Pose2D;

    // 50 separate roads, each 2 directions x 10 segments = 1000 lanes
    let roads = 50;
    let segments = 10;
    let seg_len = 48.0;
    let gap = 2.0;
    let mut bundle = RawMapBundle::empty();
    bundle.locations.push(RawLocation {
        id: "loc_city".into(),
        name: "smoke".into(),
        right_hand_traffic: true,
        geo_origin: None,
    });

    let lane = |id: String, x0: f64, x1: f64, y_low: f64, forward: bool| {
        let yc = y_low + 1.75;
        let (a, b) = if forward { (x0, x1) } else { (x1, x0) };
        let border = |y: f64, d: DividerType| BorderSegment {
            line: Polyline::new(pts(&[(a, y), (b, y)])).unwrap(),
            divider: d,
        };
        let (left, right) = if forward {
            (border(y_low + 3.5, DividerType::DoubleSolid), border(y_low, DividerType::RoadEdge))
        } else {
            (border(y_low, DividerType::DoubleSolid), border(y_low + 3.5, DividerType::RoadEdge))
        };
        RawLane {
            id,
            centerline: Polyline::new(pts(&[(a, yc), (b, yc)])).unwrap(),
            left_border: vec![left],
            right_border: vec![right],
            polygon: Polygon::new(pts(&[
                (x0, y_low),
                (x1, y_low),
                (x1, y_low + 3.5),
                (x0, y_low + 3.5),
            ]))
            .unwrap(),
            road_segment_id: None,
        }
    };

    for r in 0..roads {
        let y0 = r as f64 * 40.0;
        for s in 0..segments {
            let x0 = s as f64 * (seg_len + gap);
            let x1 = x0 + seg_len;
            bundle.lanes.push(lane(format!("r{r}_e_s{s}"), x0, x1, y0 - 3.5, true));
            bundle.lanes.push(lane(format!("r{r}_w_s{s}"), x0, x1, y0, false));
        }
        for s in 1..segments {
            let x_gap0 = (s - 1) as f64 * (seg_len + gap) + seg_len;
            let x_gap1 = s as f64 * (seg_len + gap);
            bundle.lane_connectors.push(RawConnector {
                id: format!("r{r}_ce_{s}"),
                incoming_lane: format!("r{r}_e_s{}", s - 1),
                outgoing_lane: format!("r{r}_e_s{s}"),
                centerline: Polyline::new(pts(&[(x_gap0, y0 - 1.75), (x_gap1, y0 - 1.75)]))
                    .unwrap(),
            });
            bundle.lane_connectors.push(RawConnector {
                id: format!("r{r}_cw_{s}"),
                incoming_lane: format!("r{r}_w_s{s}"),
                outgoing_lane: format!("r{r}_w_s{}", s - 1),
                centerline: Polyline::new(pts(&[(x_gap1, y0 + 1.75), (x_gap0, y0 + 1.75)]))
                    .unwrap(),
            });
        }
    }

    // 100 moving agents (an east and a west car per road) plus one ego
    let n_scenes = 40;
    let mut scenes = Vec::with_capacity(n_scenes);
    for k in 0..n_scenes {
        let t = k as f64 * 0.5;
        let mut annotations = Vec::with_capacity(101);
        annotations.push(RawAnnotation {
            agent_id: "ego".into(),
            category: ParticipantCategory::VehicleCar,
            pose: Pose2D::new(5.3 + 3.0 * t, -1.75, 0.0),
            size: (4.5, 1.8, 1.6),
            is_ego: true,
        });
        for r in 0..roads {
            let y0 = r as f64 * 40.0;
            annotations.push(RawAnnotation {
                agent_id: format!("car_e_{r}"),
                category: ParticipantCategory::VehicleCar,
                pose: Pose2D::new(15.3 + 4.0 * t, y0 - 1.75, 0.0),
                size: (4.5, 1.8, 1.6),
                is_ego: false,
            });
            annotations.push(RawAnnotation {
                agent_id: format!("car_w_{r}"),
                category: ParticipantCategory::VehicleCar,
                pose: Pose2D::new(480.0 - 10.1 - 4.0 * t, y0 + 1.75, std::f64::consts::PI),
                size: (4.5, 1.8, 1.6),
                is_ego: false,
            });
        }
        scenes.push(RawScene {
            timestamp: 1_600_000_000_000_000 + k as i64 * 500_000,
            ego_pose: Pose2D::new(5.3 + 3.0 * t, -1.75, 0.0),
            annotations,
        });
    }
    let trips = RawTripSet {
        trips: vec![RawTrip {
            id: "trip_city".into(),
            location_id: "loc_city".into(),
            sequences: vec![RawSequence { id: "seq_city".into(), scenes }],
        }],
        locations: bundle.locations.clone(),
    };
    (bundle, trips)
}

fn peak_memory_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find(|l| l.starts_with("VmHWM:"))
        .and_then(|l| l.split_whitespace().nth(1))
        .and_then(|v| v.parse().ok())
}

#[test]
fn acceptance_11_performance_smoke() {
    let cfg = Config::default();
    let (map, trips) = city_inputs();
    assert_eq!(map.lanes.len(), 1000);

    let started = Instant::now();
    let compiled = compile_scene(&map, &trips, &cfg).unwrap();
    let compile_time = started.elapsed();

    let extractor = Extractor::new(&compiled, &cfg);
    let examples = extractor.extract_all().unwrap();
    let total_time = started.elapsed();

    assert!(examples.len() > 1000, "only {} examples extracted", examples.len());
    assert!(
        total_time.as_secs_f64() < 60.0,
        "compile+extract took {total_time:?} (compile {compile_time:?})"
    );
    if let Some(kb) = peak_memory_kb() {
        assert!(kb < 4 * 1024 * 1024, "peak memory {kb} kB exceeds 4 GB");
        println!(
            "acceptance 11 performance-smoke: PASS ({} nodes, {} examples, {total_time:?}, peak {:.2} GB)",
            compiled.graph.node_count(),
            examples.len(),
            kb as f64 / 1024.0 / 1024.0
        );
    } else {
        println!(
            "acceptance 11 performance-smoke: PASS ({} nodes, {} examples, {total_time:?})",
            compiled.graph.node_count(),
            examples.len()
        );
    }
}
