//! Command-line front door composing the pipeline. Exit codes are part of
//! the contract: 0 success, 1 parse/input errors, 2 schema violations,
//! 3 missing split assignment, 64 usage errors. `--json` switches the
//! stdout summary to one machine-parseable JSON line; `SCENEKG_LOG`
//! controls log verbosity.

use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::config::Config;
use crate::dataset_io::{self, DatasetError};
use crate::extract::Extractor;
use crate::kg::{export_ntriples, validate_schema, violations_by_rule};
use crate::scene_ir::{
    self, map_bundle_to_json, parse_map_bundle, parse_splits, parse_trip_log, trip_log_to_jsonl,
    RawMapBundle, RawTripSet, Split, SplitTable,
};
use crate::synthgen::{self, Scenario, ScenarioTemplate};
use crate::{compile_scene, CompiledScene};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_VIOLATIONS: i32 = 2;
pub const EXIT_SPLIT: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(
    name = "scenekg",
    version,
    about = "Compile traffic-scene descriptions into a knowledge graph and a trajectory-prediction graph dataset"
)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic scenario (map bundle + trip log + splits).
    Synth(SynthArgs),
    /// Compile inputs into a knowledge graph and export N-Triples.
    BuildKg(BuildKgArgs),
    /// Compile inputs and extract the graph-regression dataset.
    Extract(ExtractArgs),
    /// Parse, compile and report schema violations without writing outputs.
    Validate(ValidateArgs),
    /// Summarize a dataset directory.
    Stats(StatsArgs),
    /// Render one scene (or one example record) as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// Template: straight-road, curved-road, four-way-intersection, parking-strip.
    #[arg(long)]
    template: String,
    #[arg(long, default_value_t = 1)]
    lanes: u32,
    #[arg(long, default_value_t = 100.0)]
    length: f64,
    #[arg(long, default_value_t = 30.0)]
    radius: f64,
    #[arg(long, default_value_t = 90.0)]
    arc_deg: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Scenario duration in seconds (scenes are sampled at 2 Hz).
    #[arg(long, default_value_t = 20.0)]
    duration: f64,
    /// Optional JSON file with agent plans; defaults to the template's plans.
    #[arg(long)]
    agents: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = false)]
    json: bool,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    trips: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct BuildKgArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    out: PathBuf,
    /// Exit 0 even when schema violations are found.
    #[arg(long, default_value_t = false)]
    allow_violations: bool,
    #[arg(long, default_value_t = false)]
    json: bool,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    splits: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = false)]
    json: bool,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = false)]
    json: bool,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value_t = false)]
    json: bool,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    map: Option<PathBuf>,
    #[arg(long)]
    trips: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scene node id ({sequence}_t{timestamp}).
    #[arg(long)]
    scene: Option<String>,
    /// Render an example record instead of a scene.
    #[arg(long)]
    example: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

/// Entry point used by the binary; parses real process arguments.
pub fn run() -> i32 {
    let mut args: Vec<String> = std::env::args().collect();
    if args.is_empty() {
        args.push("scenekg".to_string());
    }
    run_with_args(args)
}

/// Testable entry point.
pub fn run_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter("SCENEKG_LOG"))
        .format_timestamp(None)
        .try_init();

    let cli = match Cli::try_parse_from(args.into_iter().map(Into::into)) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return EXIT_OK;
            }
            let _ = e.print();
            return EXIT_USAGE;
        }
    };

    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }

    match cli.command {
        Command::Synth(args) => cmd_synth(args),
        Command::BuildKg(args) => cmd_build_kg(args),
        Command::Extract(args) => cmd_extract(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Render(args) => cmd_render(args),
    }
}

fn fail(code: i32, message: impl std::fmt::Display) -> i32 {
    eprintln!("error: {message}");
    code
}

fn load_config(path: &Option<PathBuf>) -> Result<Config, String> {
    match path {
        Some(p) => Config::from_path(p).map_err(|e| e.to_string()),
        None => Ok(Config::default()),
    }
}

fn load_inputs(input: &InputArgs) -> Result<(RawMapBundle, RawTripSet, Config), String> {
    let map_text =
        fs::read_to_string(&input.map).map_err(|e| format!("{}: {e}", input.map.display()))?;
    let map = parse_map_bundle(&map_text).map_err(|e| format!("{}: {e}", input.map.display()))?;
    let trips_text =
        fs::read_to_string(&input.trips).map_err(|e| format!("{}: {e}", input.trips.display()))?;
    let trips =
        parse_trip_log(&trips_text).map_err(|e| format!("{}: {e}", input.trips.display()))?;
    let cfg = load_config(&input.config)?;
    Ok((map, trips, cfg))
}

fn compile_with_report(
    map: &RawMapBundle,
    trips: &RawTripSet,
    cfg: &Config,
) -> Result<CompiledScene, String> {
    let report = scene_ir::validate_raw(map, trips);
    for issue in &report.issues {
        log::warn!("{}: {}", issue.code, issue.message);
    }
    if report.errors().next().is_some() {
        let mut msg = String::from("inconsistent inputs:\n");
        for issue in report.errors() {
            msg.push_str(&format!("  [{}] {}\n", issue.code, issue.message));
        }
        return Err(msg);
    }
    let compiled = compile_scene(map, trips, cfg).map_err(|e| e.to_string())?;
    for w in &compiled.warnings {
        log::warn!("{w}");
    }
    Ok(compiled)
}

fn parse_template(args: &SynthArgs) -> Result<ScenarioTemplate, String> {
    match args.template.as_str() {
        "straight-road" | "straight_road" => Ok(ScenarioTemplate::StraightRoad {
            lanes_per_dir: args.lanes,
            length_m: args.length,
        }),
        "curved-road" | "curved_road" => Ok(ScenarioTemplate::CurvedRoad {
            radius_m: args.radius,
            arc_deg: args.arc_deg,
        }),
        "four-way-intersection" | "four_way_intersection" => {
            Ok(ScenarioTemplate::FourWayIntersection { lanes_per_arm: args.lanes })
        }
        "parking-strip" | "parking_strip" => {
            Ok(ScenarioTemplate::ParkingStrip { length_m: args.length })
        }
        other => Err(format!(
            "unknown template '{other}' (expected straight-road, curved-road, four-way-intersection or parking-strip)"
        )),
    }
}

fn cmd_synth(args: SynthArgs) -> i32 {
    let template = match parse_template(&args) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let agents = match &args.agents {
        None => synthgen::default_agents(&template),
        Some(path) => {
            let text = match fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", path.display())),
            };
            match serde_json::from_str(&text) {
                Ok(a) => a,
                Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", path.display())),
            }
        }
    };
    let scenario = Scenario { template, agents };
    let (map, trips) = match synthgen::generate(&scenario, args.seed, args.duration) {
        Ok(pair) => pair,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    if let Err(e) = fs::create_dir_all(&args.out) {
        return fail(EXIT_PARSE, format!("{}: {e}", args.out.display()));
    }
    let map_path = args.out.join("map.json");
    let trips_path = args.out.join("trips.jsonl");
    let splits_path = args.out.join("splits.json");
    let sequences: Vec<&str> =
        trips.sequences().map(|(_, s)| s.id.as_str()).collect();
    let splits = SplitTable::assign_all(sequences, Split::Train);
    let splits_json = serde_json::to_string_pretty(&splits).expect("splits serialize");
    for (path, content) in [
        (&map_path, map_bundle_to_json(&map)),
        (&trips_path, trip_log_to_jsonl(&trips)),
        (&splits_path, splits_json + "\n"),
    ] {
        if let Err(e) = fs::write(path, content) {
            return fail(EXIT_PARSE, format!("{}: {e}", path.display()));
        }
    }
    if args.json {
        println!(
            "{}",
            json!({
                "command": "synth",
                "map": map_path,
                "trips": trips_path,
                "splits": splits_path,
                "lanes": map.lanes.len(),
                "scenes": trips.scene_count(),
            })
        );
    } else {
        println!("wrote {}", map_path.display());
        println!("wrote {}", trips_path.display());
        println!("wrote {}", splits_path.display());
        println!("{} lanes, {} scenes", map.lanes.len(), trips.scene_count());
    }
    EXIT_OK
}

fn cmd_build_kg(args: BuildKgArgs) -> i32 {
    let (map, trips, cfg) = match load_inputs(&args.input) {
        Ok(v) => v,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let compiled = match compile_with_report(&map, &trips, &cfg) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let violations = validate_schema(&compiled.graph, &cfg);

    let mut sink = match fs::File::create(&args.out) {
        Ok(f) => std::io::BufWriter::new(f),
        Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", args.out.display())),
    };
    let triples = match export_ntriples(&compiled.graph, &mut sink) {
        Ok(n) => n,
        Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", args.out.display())),
    };
    drop(sink);

    let stats = compiled.graph.stats();
    if args.json {
        println!(
            "{}",
            json!({
                "command": "build-kg",
                "nodes": stats.nodes_total,
                "edges": stats.edges_total,
                "triples": triples,
                "violations": violations.len(),
                "out": args.out,
            })
        );
    } else {
        println!(
            "{} nodes, {} edges, {} triples -> {}",
            stats.nodes_total,
            stats.edges_total,
            triples,
            args.out.display()
        );
        if !violations.is_empty() {
            println!("{} schema violation(s)", violations.len());
        }
    }
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("violation {v}");
        }
        if !args.allow_violations {
            return EXIT_VIOLATIONS;
        }
    }
    EXIT_OK
}

fn cmd_extract(args: ExtractArgs) -> i32 {
    let (map, trips, cfg) = match load_inputs(&args.input) {
        Ok(v) => v,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let splits_text = match fs::read_to_string(&args.splits) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", args.splits.display())),
    };
    let splits = match parse_splits(&splits_text) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", args.splits.display())),
    };
    let compiled = match compile_with_report(&map, &trips, &cfg) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let violations = validate_schema(&compiled.graph, &cfg);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("violation {v}");
        }
        return EXIT_VIOLATIONS;
    }

    let extractor = Extractor::new(&compiled, &cfg);
    let examples = match extractor.extract_all() {
        Ok(e) => e,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    if examples.is_empty() {
        log::warn!("no eligible targets; dataset will be empty");
    }
    let manifest = match dataset_io::write_dataset(&examples, &splits, &args.out, &cfg) {
        Ok(m) => m,
        Err(DatasetError::MissingSplit(seq)) => {
            return fail(EXIT_SPLIT, format!("sequence '{seq}' has no split assignment"))
        }
        Err(e) => return fail(EXIT_PARSE, e),
    };
    if args.json {
        println!(
            "{}",
            json!({
                "command": "extract",
                "examples": examples.len(),
                "splits": manifest.split_counts,
                "out": args.out,
            })
        );
    } else {
        println!("{} example(s) -> {}", examples.len(), args.out.display());
        for (split, count) in &manifest.split_counts {
            println!("  {split}: {count}");
        }
    }
    EXIT_OK
}

fn cmd_validate(args: ValidateArgs) -> i32 {
    let (map, trips, cfg) = match load_inputs(&args.input) {
        Ok(v) => v,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let report = scene_ir::validate_raw(&map, &trips);
    if report.errors().next().is_some() {
        eprint!("{report}");
        return fail(EXIT_PARSE, "inputs are inconsistent");
    }
    let compiled = match compile_scene(&map, &trips, &cfg) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let violations = validate_schema(&compiled.graph, &cfg);
    if args.json {
        println!(
            "{}",
            json!({
                "command": "validate",
                "input_issues": report.issues.len(),
                "violations": violations.len(),
                "by_rule": violations_by_rule(&violations)
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), v))
                    .collect::<std::collections::BTreeMap<_, _>>(),
            })
        );
    } else {
        print!("{report}");
        if violations.is_empty() {
            println!("no schema violations");
        } else {
            println!("{} schema violation(s):", violations.len());
        }
    }
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("violation {v}");
        }
        return EXIT_VIOLATIONS;
    }
    EXIT_OK
}

fn cmd_stats(args: StatsArgs) -> i32 {
    match dataset_io::dataset_stats(&args.dataset) {
        Ok(stats) => {
            if args.json {
                println!("{}", serde_json::to_string(&stats).expect("stats serialize"));
            } else {
                print!("{stats}");
            }
            EXIT_OK
        }
        Err(e) => fail(EXIT_PARSE, e),
    }
}

fn cmd_render(args: RenderArgs) -> i32 {
    let svg = if let Some(example_path) = &args.example {
        let file = match fs::File::open(example_path) {
            Ok(f) => f,
            Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", example_path.display())),
        };
        match dataset_io::read_example(std::io::BufReader::new(file)) {
            Ok(example) => crate::render::render_example_svg(&example),
            Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", example_path.display())),
        }
    } else {
        let (Some(map_path), Some(trips_path), Some(scene_id)) =
            (&args.map, &args.trips, &args.scene)
        else {
            return fail(EXIT_USAGE, "render needs either --example or --map/--trips/--scene");
        };
        let input = InputArgs {
            map: map_path.clone(),
            trips: trips_path.clone(),
            config: args.config.clone(),
        };
        let (map, trips, cfg) = match load_inputs(&input) {
            Ok(v) => v,
            Err(e) => return fail(EXIT_PARSE, e),
        };
        let compiled = match compile_scene(&map, &trips, &cfg) {
            Ok(c) => c,
            Err(e) => return fail(EXIT_PARSE, e),
        };
        match crate::render::render_scene_svg(&compiled, scene_id) {
            Ok(svg) => svg,
            Err(e) => return fail(EXIT_PARSE, e),
        }
    };
    if let Err(e) = fs::write(&args.out, svg) {
        return fail(EXIT_PARSE, format!("{}: {e}", args.out.display()));
    }
    println!("wrote {}", args.out.display());
    EXIT_OK
}

/// Scene ids available for rendering, in temporal order per sequence.
pub fn scene_ids(path_trips: &Path) -> Result<Vec<String>, String> {
    let trips_text =
        fs::read_to_string(path_trips).map_err(|e| format!("{}: {e}", path_trips.display()))?;
    let trips = parse_trip_log(&trips_text).map_err(|e| e.to_string())?;
    Ok(trips
        .sequences()
        .flat_map(|(_, s)| {
            s.scenes
                .iter()
                .map(|sc| crate::agent_compiler::scene_node_id(&s.id, sc.timestamp))
                .collect::<Vec<_>>()
        })
        .collect())
}
