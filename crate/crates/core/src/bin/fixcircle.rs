use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use fixcircle::circle::{circle_of, Circle};
use fixcircle::conditions::{Caveat, Checker, ConditionId};
use fixcircle::gallery::{export_entry, load_entry, replay_all, select};
use fixcircle::generators::{random_metric_space, GenConfig, Repair};
use fixcircle::io::{self, parse_point, CircleDoc, MapDoc, SpaceDoc};
use fixcircle::report::{
    digest, CircleRecord, ConditionRecord, RunReport, SearchRecord, TheoremRecord, ValidationRecord,
};
use fixcircle::search::{search_counterexample, SearchOutcome, Target, DEFAULT_BUDGET};
use fixcircle::space::{validate_metric, MetricSpace};
use fixcircle::verifier::{TheoremId, UniquenessMode, Verifier};
use fixcircle::{Error, Exec, SelfMap, Settings, DEFAULT_EPSILON, DEFAULT_RING_SAMPLES};

const ENV_EPSILON: &str = "FIXCIRCLE_EPSILON";
const ENV_RING_SAMPLES: &str = "FIXCIRCLE_RING_SAMPLES";

const AFTER_HELP: &str = "\
Exit status: 0 success or holds, 1 a condition fails or a search comes back empty,
2 input error, 3 a theorem verdict is inconsistent (falsification).

Environment:
  FIXCIRCLE_EPSILON       default tolerance when neither --epsilon nor the space file sets one
  FIXCIRCLE_RING_SAMPLES  default ring size for circles in the complex plane (360)";

#[derive(Parser)]
#[command(name = "fixcircle", version, about = "Fixed circles of self-mappings on metric spaces", after_help = AFTER_HELP)]
struct Cli {
    /// Absolute tolerance; overrides any value in the space file.
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Ring points used to resolve circles in the complex plane.
    #[arg(long, global = true)]
    ring_samples: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    FixedSet,
    Literal,
}

#[derive(clap::Args)]
struct CircleArgs {
    /// Circle center: a label, a real, or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    center: String,
    #[arg(long)]
    radius: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Check the metric axioms.
    Validate { space: PathBuf },
    /// Evaluate conditions for one circle.
    Check {
        space: PathBuf,
        map: PathBuf,
        #[command(flatten)]
        circle: CircleArgs,
        /// Comma-separated condition ids; all of them by default.
        #[arg(long, value_delimiter = ',')]
        conditions: Vec<String>,
    },
    /// Verify theorems (hypotheses imply conclusion) for one circle.
    Verify {
        space: PathBuf,
        map: PathBuf,
        #[command(flatten)]
        circle: CircleArgs,
        /// Theorem id, or `all`.
        #[arg(long, default_value = "all")]
        theorem: String,
        #[arg(long, value_enum, default_value_t = Mode::FixedSet)]
        uniqueness: Mode,
    },
    /// List the fixed circles of a map.
    Enumerate {
        space: PathBuf,
        map: PathBuf,
        #[arg(long)]
        include_degenerate: bool,
    },
    /// Search table maps for one satisfying a target expression, e.g. `C1 & !C2`.
    Search {
        space: PathBuf,
        #[command(flatten)]
        circle: CircleArgs,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Also write a found map as a map file.
        #[arg(long)]
        map_out: Option<PathBuf>,
    },
    /// Replay the gallery of worked instances.
    Gallery {
        /// Comma-separated entry ids; a trailing `*` matches a prefix.
        #[arg(long)]
        filter: Option<String>,
        /// Write the selected entries as space/map/circle files into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Generate a random finite metric space.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        size: usize,
        #[arg(long, default_value_t = 1.0)]
        distance_scale: f64,
        /// Quantize raw distances to this many levels (0 = continuous).
        #[arg(long, default_value_t = 0)]
        levels: u32,
        #[arg(long, value_enum, default_value_t = RepairArg::ShortestPath)]
        repair: RepairArg,
        /// Also write the space file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RepairArg {
    ShortestPath,
}

fn env_value<T: std::str::FromStr>(name: &str) -> Result<Option<T>, Error> {
    match std::env::var(name) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Malformed(format!("{name}={v} does not parse"))),
        Err(_) => Ok(None),
    }
}

struct Ctx {
    flag_eps: Option<f64>,
    env_eps: Option<f64>,
    ring_samples: usize,
    exec: Exec,
}

impl Ctx {
    /// Flag, then file, then environment, then the built-in default.
    fn settings(&self, file_eps: Option<f64>) -> Result<Settings, Error> {
        let eps = self.flag_eps.or(file_eps).or(self.env_eps).unwrap_or(DEFAULT_EPSILON);
        if !(eps.is_finite() && eps >= 0.0) {
            return Err(Error::Malformed(format!("epsilon must be a nonnegative real, got {eps}")));
        }
        Ok(Settings::default()
            .with_eps(eps)
            .with_ring_samples(self.ring_samples)
            .with_exec(self.exec))
    }
}

struct Loaded {
    space: MetricSpace,
    doc: SpaceDoc,
}

fn load_space(path: &Path) -> Result<Loaded, Error> {
    let (space, doc) = io::load_space(path)?;
    Ok(Loaded { space, doc })
}

fn load_map(path: &Path, space: &MetricSpace) -> Result<(SelfMap, MapDoc), Error> {
    io::load_map(path, space)
}

fn resolve_circle(space: &MetricSpace, args: &CircleArgs, settings: &Settings) -> Result<(Circle, CircleDoc), Error> {
    let center = parse_point(space, &args.center)?;
    if !(args.radius.is_finite() && args.radius >= 0.0) {
        return Err(Error::Malformed(format!("radius must be a nonnegative real, got {}", args.radius)));
    }
    let circle = circle_of(space, center, args.radius, settings)?;
    let doc = CircleDoc {
        center: io::point_value(space, &center),
        radius: args.radius,
    };
    Ok((circle, doc))
}

fn base_report(command: &str, settings: &Settings, space: Option<&Loaded>) -> RunReport {
    let mut r = RunReport::new(command, settings.eps);
    if let Some(l) = space {
        r.inputs.space = Some(digest(&l.doc));
        if !l.space.is_finite() {
            r.add_caveats([Caveat::Sampled]);
        }
    }
    r
}

fn run(cli: &Cli) -> Result<RunReport, Error> {
    let ctx = Ctx {
        flag_eps: cli.epsilon,
        env_eps: env_value(ENV_EPSILON)?,
        ring_samples: match cli.ring_samples {
            Some(n) => n,
            None => env_value(ENV_RING_SAMPLES)?.unwrap_or(DEFAULT_RING_SAMPLES),
        },
        exec: if cli.sequential { Exec::Sequential } else { Exec::default() },
    };
    if ctx.ring_samples == 0 {
        return Err(Error::Malformed("ring samples must be positive".into()));
    }

    match &cli.command {
        Command::Validate { space } => {
            let l = load_space(space)?;
            let st = ctx.settings(l.doc.epsilon)?;
            let mut r = base_report("validate", &st, Some(&l));
            let v = validate_metric(&l.space, st.eps);
            r.status = u8::from(!v.is_valid());
            r.validation = Some(ValidationRecord::new(&l.space, &v));
            Ok(r)
        }
        Command::Check {
            space,
            map,
            circle,
            conditions,
        } => {
            let l = load_space(space)?;
            let st = ctx.settings(l.doc.epsilon)?;
            let (m, mdoc) = load_map(map, &l.space)?;
            let (c, cdoc) = resolve_circle(&l.space, circle, &st)?;
            let ids: Vec<ConditionId> = if conditions.is_empty() {
                ConditionId::ALL.to_vec()
            } else {
                conditions.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
            };
            let mut r = base_report("check", &st, Some(&l));
            r.inputs.map = Some(digest(&mdoc));
            r.inputs.circle = Some(digest(&cdoc));
            let names: Vec<&str> = ids.iter().map(|i| i.as_str()).collect();
            r.inputs.params.insert("conditions".into(), names.join(","));
            let v = validate_metric(&l.space, st.eps);
            if !v.is_valid() {
                r.validation = Some(ValidationRecord::new(&l.space, &v));
            }
            let chk = Checker::new(&l.space, &m, st);
            for id in ids {
                let rep = chk.check(id, &c);
                r.add_caveats(rep.caveats.iter().copied());
                r.conditions.push(ConditionRecord::new(&l.space, Some(&c), &rep));
            }
            r.status = u8::from(!r.conditions.iter().all(|c| c.holds));
            Ok(r)
        }
        Command::Verify {
            space,
            map,
            circle,
            theorem,
            uniqueness,
        } => {
            let l = load_space(space)?;
            let st = ctx.settings(l.doc.epsilon)?;
            let (m, mdoc) = load_map(map, &l.space)?;
            let (c, cdoc) = resolve_circle(&l.space, circle, &st)?;
            let theorems: Vec<TheoremId> = if theorem.trim().eq_ignore_ascii_case("all") {
                TheoremId::ALL.to_vec()
            } else {
                theorem.split(',').map(str::parse).collect::<Result<_, _>>()?
            };
            let mode = match uniqueness {
                Mode::FixedSet => UniquenessMode::FixedSet,
                Mode::Literal => UniquenessMode::Literal,
            };
            let mut r = base_report("verify", &st, Some(&l));
            r.inputs.map = Some(digest(&mdoc));
            r.inputs.circle = Some(digest(&cdoc));
            r.inputs.params.insert("theorem".into(), theorem.trim().to_string());
            r.inputs.params.insert(
                "uniqueness".into(),
                match mode {
                    UniquenessMode::FixedSet => "fixed_set",
                    UniquenessMode::Literal => "literal",
                }
                .into(),
            );
            let ver = Verifier::new(&l.space, st)?;
            let mv = ver.with_map(&m);
            for t in theorems {
                let v = mv.verify(t, &c, mode);
                r.add_caveats(v.caveats.iter().copied());
                r.theorems.push(TheoremRecord::new(&l.space, &c, &v));
            }
            r.status = if r.theorems.iter().all(|t| t.consistent) { 0 } else { 3 };
            Ok(r)
        }
        Command::Enumerate {
            space,
            map,
            include_degenerate,
        } => {
            let l = load_space(space)?;
            let st = ctx.settings(l.doc.epsilon)?;
            let (m, mdoc) = load_map(map, &l.space)?;
            let mut r = base_report("enumerate", &st, Some(&l));
            r.inputs.map = Some(digest(&mdoc));
            r.inputs
                .params
                .insert("include_degenerate".into(), include_degenerate.to_string());
            let ver = Verifier::new(&l.space, st)?;
            let found = ver.with_map(&m).fixed_circles(*include_degenerate);
            r.circles = found.iter().map(|c| CircleRecord::new(&l.space, c)).collect();
            Ok(r)
        }
        Command::Search {
            space,
            circle,
            target,
            seed,
            budget,
            map_out,
        } => {
            let l = load_space(space)?;
            let st = ctx.settings(l.doc.epsilon)?;
            let (c, cdoc) = resolve_circle(&l.space, circle, &st)?;
            let t: Target = target.parse()?;
            let mut r = base_report("search", &st, Some(&l));
            r.inputs.circle = Some(digest(&cdoc));
            let out = search_counterexample(&l.space, &c, &t, *budget, *seed, &st)?;
            let map_doc = match out.map() {
                Some(m) => Some(io::map_to_doc(&l.space, m, st.eps)?),
                None => None,
            };
            if let (Some(path), Some(doc)) = (map_out, &map_doc) {
                io::write_json(path, doc)?;
            }
            let (index, evaluated) = match &out {
                SearchOutcome::Found { index, .. } => (Some(*index), None),
                SearchOutcome::Exhausted { evaluated, .. } => (None, Some(*evaluated)),
            };
            r.search = Some(SearchRecord {
                target: t.to_string(),
                circle: fixcircle::report::CircleRef::new(&l.space, &c),
                budget: *budget,
                seed: *seed,
                exhaustive: out.is_exhaustive(),
                found: out.is_found(),
                index,
                evaluated,
                map: map_doc,
            });
            r.status = u8::from(!out.is_found());
            Ok(r)
        }
        Command::Gallery { filter, export } => {
            let st = ctx.settings(None)?;
            let mut r = base_report("gallery", &st, None);
            if let Some(f) = filter {
                r.inputs.params.insert("filter".into(), f.clone());
            }
            if let Some(dir) = export {
                for id in select(filter.as_deref()) {
                    export_entry(&load_entry(id, &st)?, dir, &st)?;
                }
            }
            let replay = replay_all(filter.as_deref(), &st)?;
            r.status = u8::from(!replay.passed());
            r.gallery = replay.rows;
            Ok(r)
        }
        Command::Generate {
            seed,
            size,
            distance_scale,
            levels,
            repair,
            out,
        } => {
            let st = ctx.settings(None)?;
            let cfg = GenConfig {
                seed: *seed,
                size: *size,
                distance_scale: *distance_scale,
                levels: *levels,
                repair: match repair {
                    RepairArg::ShortestPath => Repair::ShortestPath,
                },
            };
            let space = random_metric_space(&cfg)?;
            let doc = io::space_to_doc(&space, None);
            if let Some(path) = out {
                io::write_json(path, &doc)?;
            }
            let mut r = base_report("generate", &st, None);
            r.inputs.params.insert("config".into(), serde_json::to_string(&cfg).expect("config serializes"));
            r.validation = Some(ValidationRecord::new(&space, &validate_metric(&space, st.eps)));
            r.generated = Some(doc);
            Ok(r)
        }
    }
}

fn emit(cli: &Cli, report: &RunReport) -> std::io::Result<()> {
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Tsv => report.to_tsv(),
    };
    match &cli.output {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            report.wall_time_ms = (start.elapsed().as_secs_f64() * 1e3).into();
            if let Err(e) = emit(&cli, &report) {
                eprintln!("fixcircle: cannot write report: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(report.status)
        }
        Err(e) => {
            eprintln!("fixcircle: {e}");
            if let Error::InvalidMetric(v) = &e {
                for x in &v.violations {
                    eprintln!("  {:?} at {:?}: {}", x.axiom, x.witness, x.magnitude);
                }
            }
            ExitCode::from(2)
        }
    }
}
