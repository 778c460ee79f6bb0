use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use thrackle_core::arrangement::{build_arrangement, max_face_incidence};
use thrackle_core::bisection::{bisect, bisection_width_exact, bisection_width_heuristic, AbstractGraph};
use thrackle_core::drawing::{classify_drawing, pair_table, validate, Drawing};
use thrackle_core::ds::{euler_density_check, is_ds_sequence, lambda3_upper, lambda_brute};
use thrackle_core::experiment::{run_experiment, ExperimentConfig, Suite};
use thrackle_core::extremal::{bound_value, density_report, has_disjoint_biclique, BoundConstants, Formula};
use thrackle_core::gen::{generate, random_graph, random_segments, tangency_fixture, Family};
use thrackle_core::io::{self, ArcsDocument, FamiliesDocument, GraphDocument};
use thrackle_core::tangency::{refine_to_single_face, tangency_graph};
use thrackle_core::transforms::{
    alpha, perturb_tangencies, recursive_decomposition_seeded, split_vertices, strip_crossing_formula, strip_redraw,
};

#[derive(Parser)]
#[command(name = "thrackle", version, about = "Exact checks and transforms for polyline drawings of graphs")]
struct Cli {
    /// Input file.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransformKind {
    Split,
    Strip,
    Perturb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BisectMode {
    Auto,
    Exact,
    Heuristic,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report violations of the drawing conditions.
    Validate,
    /// Classify every pair of edges.
    Classify,
    /// Disjointness structure and bound values; without --in, bounds at --n only.
    Check {
        #[arg(long, default_value_t = 2)]
        t: u64,
        #[arg(long)]
        n: Option<u64>,
        /// JSON file with c1..c6 and n0.
        #[arg(long)]
        constants: Option<PathBuf>,
    },
    /// Vertex splitting, strip redrawing or tangency perturbation.
    Transform {
        #[arg(value_enum)]
        kind: TransformKind,
        #[arg(long)]
        delta: Option<usize>,
    },
    /// Balanced bisection of a graph or of a drawing's underlying graph.
    Bisect {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = BisectMode::Auto)]
        mode: BisectMode,
    },
    /// Arrangement of an arc family, or tangency graph of two families.
    Arrange,
    /// Davenport-Schinzel checks.
    Ds {
        /// Comma-separated symbols to test.
        #[arg(long)]
        seq: Option<String>,
        #[arg(long, default_value_t = 3)]
        s: usize,
        /// Alphabet size for the exhaustive maximum.
        #[arg(long)]
        n: Option<usize>,
        /// Family size for the density check.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Recursive split and bisect decomposition.
    Decompose {
        #[arg(long, default_value_t = 1)]
        t: u64,
        #[arg(long, default_value_t = 10)]
        n0: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate an instance. Besides the drawing families, `segments` writes an
    /// arc document, `families` a tangency fixture and `graph` an abstract graph.
    Gen {
        family: String,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run an experiment suite.
    Run {
        suite: String,
        #[arg(long)]
        seeds: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        t: Option<u64>,
    },
}

/// Usage or data problem; exit status 2.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

struct Ctx {
    input: Option<PathBuf>,
    out: Option<PathBuf>,
    format: Format,
}

impl Ctx {
    fn input(&self) -> Result<&Path, Fail> {
        self.input.as_deref().ok_or_else(|| Fail("--in is required".into()))
    }

    fn drawing(&self) -> Result<Drawing, Fail> {
        Ok(io::read_drawing(self.input()?)?)
    }

    fn emit(&self, text: &str) -> Result<(), Fail> {
        match &self.out {
            Some(p) => Ok(io::write_text(p, text)?),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn emit_json<T: Serialize>(&self, v: &T) -> Result<(), Fail> {
        self.emit(&(serde_json::to_string_pretty(v)? + "\n"))
    }

    fn csv_only_json(&self) -> Result<(), Fail> {
        if self.format == Format::Csv {
            return Err(Fail("this command only writes JSON".into()));
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let ctx = Ctx { input: cli.input, out: cli.out, format: cli.format };
    match run(&ctx, cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn constants(path: Option<&Path>) -> Result<BoundConstants, Fail> {
    let k = match path {
        Some(p) => serde_json::from_str::<BoundConstants>(&io::read_text(p)?)?,
        None => BoundConstants::default(),
    };
    k.check()?;
    Ok(k)
}

fn run(ctx: &Ctx, cmd: Cmd) -> Result<bool, Fail> {
    match cmd {
        Cmd::Validate => {
            ctx.csv_only_json()?;
            let r = validate(&ctx.drawing()?);
            ctx.emit_json(&r)?;
            Ok(r.is_valid())
        }
        Cmd::Classify => {
            let d = ctx.drawing()?;
            let r = validate(&d);
            if !r.is_valid() {
                return Err(Fail(format!("drawing is invalid: {:?}", r.violations)));
            }
            let t = pair_table(&d);
            match ctx.format {
                Format::Json => {
                    let pairs: Vec<_> = t
                        .classes
                        .iter()
                        .map(|((a, b), c)| json!({"e": a, "f": b, "class": c}))
                        .collect();
                    ctx.emit_json(&json!({"flags": classify_drawing(&d), "pairs": pairs}))?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["e", "f", "relation", "crossings", "touches", "shared_endpoints"])?;
                    for ((a, b), c) in &t.classes {
                        let rel = serde_json::to_value(c.relation)?.as_str().unwrap_or_default().to_string();
                        w.write_record([
                            a.to_string(),
                            b.to_string(),
                            rel,
                            c.crossings.to_string(),
                            c.touches.to_string(),
                            c.shared_endpoints.to_string(),
                        ])?;
                    }
                    ctx.emit(&String::from_utf8(w.into_inner().map_err(|e| Fail(e.to_string()))?)?)?;
                }
            }
            Ok(true)
        }
        Cmd::Check { t, n, constants: cpath } => {
            ctx.csv_only_json()?;
            let k = constants(cpath.as_deref())?;
            if ctx.input.is_none() {
                let n = n.ok_or_else(|| Fail("check needs --in or --n".into()))?;
                let mut bounds = serde_json::Map::new();
                for f in [Formula::Kst, Formula::PtLog, Formula::CorEq2] {
                    bounds.insert(f.name().into(), json!(bound_value(f, n, t, &k, None)?));
                }
                ctx.emit_json(&json!({"n": n, "t": t, "bounds": bounds, "alpha": alpha(t)}))?;
                return Ok(true);
            }
            let d = ctx.drawing()?;
            let r = validate(&d);
            if !r.is_valid() {
                return Err(Fail(format!("drawing is invalid: {:?}", r.violations)));
            }
            let report = density_report(&d, t, &k);
            let witness = has_disjoint_biclique(&d, t as usize).ok().flatten();
            ctx.emit_json(&json!({"report": report, "biclique_witness": witness, "flags": classify_drawing(&d)}))?;
            Ok(true)
        }
        Cmd::Transform { kind, delta } => {
            ctx.csv_only_json()?;
            let d = ctx.drawing()?;
            match kind {
                TransformKind::Split => {
                    let delta = delta.ok_or_else(|| Fail("split needs --delta".into()))?;
                    let (s, cert) = split_vertices(&d, delta)?;
                    ctx.emit_json(&json!({"drawing": io::DrawingDocument::from_drawing(&s), "certificate": cert}))?;
                    Ok(true)
                }
                TransformKind::Strip => {
                    let r = strip_redraw(&d)?;
                    ctx.emit_json(&json!({
                        "redrawn": r,
                        "odd_crossing_pairs": r.odd_crossing_pairs(),
                        "parity_holds": r.parity_holds(),
                        "strip_formula_checked": r.arcs.iter().all(|a| strip_crossing_formula(a.k, 1) == a.k),
                    }))?;
                    Ok(r.parity_holds() && r.k_all_odd())
                }
                TransformKind::Perturb => {
                    let p = perturb_tangencies(&d)?;
                    ctx.emit(&io::drawing_to_json(&p))?;
                    Ok(true)
                }
            }
        }
        Cmd::Bisect { seed, mode } => {
            ctx.csv_only_json()?;
            let text = io::read_text(ctx.input()?)?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let g = if value.get("vertices").is_some() {
                AbstractGraph::from_drawing(&io::drawing_from_json(&text)?).0
            } else {
                serde_json::from_value::<GraphDocument>(value)?.to_graph()?
            };
            let r = match mode {
                BisectMode::Auto => bisect(&g, seed)?,
                BisectMode::Exact => bisection_width_exact(&g)?,
                BisectMode::Heuristic => bisection_width_heuristic(&g, seed)?,
            };
            ctx.emit_json(&json!({"seed": seed, "result": r}))?;
            Ok(true)
        }
        Cmd::Arrange => {
            ctx.csv_only_json()?;
            let text = io::read_text(ctx.input()?)?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            if value.get("l1").is_some() {
                let f: FamiliesDocument = serde_json::from_value(value)?;
                let h = tangency_graph(&f.l1, &f.l2)?;
                let refine = refine_to_single_face(&f.l1, &f.l2).map_err(|e| e.to_string());
                let ok = h.satisfies_planarity_bound();
                ctx.emit_json(&json!({"tangency_graph": h, "planar_bound": ok, "refinement": refine.as_ref().ok(), "refinement_error": refine.as_ref().err()}))?;
                return Ok(ok);
            }
            let a: ArcsDocument = serde_json::from_value(value)?;
            let arr = build_arrangement(&a.arcs)?;
            let (face, inc) = max_face_incidence(&arr);
            let bound = lambda3_upper(2 * a.arcs.len() as u64);
            let ok = arr.euler_holds() && (inc as f64) <= bound;
            ctx.emit_json(&json!({
                "arrangement": arr.export(),
                "V": arr.v(), "E": arr.e(), "F": arr.f(), "C": arr.components,
                "euler_holds": arr.euler_holds(),
                "max_face": face, "max_incidence": inc, "bound": bound,
            }))?;
            Ok(ok)
        }
        Cmd::Ds { seq, s, n, k } => {
            ctx.csv_only_json()?;
            let mut out = serde_json::Map::new();
            let mut ok = true;
            if let Some(seq) = seq {
                let u: Vec<&str> = seq.split(',').map(str::trim).filter(|x| !x.is_empty()).collect();
                let valid = is_ds_sequence(&u, s);
                out.insert("sequence_valid".into(), json!(valid));
                ok &= valid;
            }
            if let Some(n) = n {
                let v = lambda_brute(n, s)?;
                out.insert("lambda".into(), json!({"n": n, "s": s, "value": v}));
                if s == 3 {
                    let up = lambda3_upper(n as u64);
                    out.insert("lambda3_upper".into(), json!(up));
                    ok &= (v as f64) <= up;
                }
            }
            if let Some(k) = k {
                let (ratio, contradiction) = euler_density_check(k);
                out.insert("euler".into(), json!({"k": k, "ratio": ratio, "contradiction": contradiction}));
            }
            if out.is_empty() {
                return Err(Fail("ds needs --seq, --n or --k".into()));
            }
            ctx.emit_json(&out)?;
            Ok(ok)
        }
        Cmd::Decompose { t, n0, seed } => {
            ctx.csv_only_json()?;
            let d = ctx.drawing()?;
            let k = BoundConstants::with_n0(n0);
            let tree = recursive_decomposition_seeded(&d, t, &k, seed)?;
            let ok = tree.conserves_edges() && tree.balanced();
            ctx.emit_json(&json!({"tree": tree, "conserves_edges": tree.conserves_edges(), "balanced": tree.balanced()}))?;
            Ok(ok)
        }
        Cmd::Gen { family, n, m, k, seed } => {
            ctx.csv_only_json()?;
            match family.as_str() {
                "segments" => {
                    let doc = ArcsDocument { version: io::FORMAT_VERSION, arcs: random_segments(m.max(1), seed) };
                    ctx.emit_json(&doc)?;
                    return Ok(true);
                }
                "families" => {
                    ctx.emit_json(&tangency_fixture(k)?)?;
                    return Ok(true);
                }
                "graph" => {
                    ctx.emit_json(&GraphDocument { n, edges: random_graph(n, 0.3, seed) })?;
                    return Ok(true);
                }
                _ => {}
            }
            let f = Family::from_name(&family, n, m, k)?;
            let d = generate(f, seed)?;
            ctx.emit(&io::drawing_to_json(&d))?;
            Ok(true)
        }
        Cmd::Run { suite, seeds, seed, n_min, n_max, t } => {
            let suite: Suite = suite.parse()?;
            let mut c = ExperimentConfig::default_for(suite);
            if let Some(s) = seeds {
                c.seeds = s;
            }
            if let Some(s) = seed {
                c.seed_start = s;
            }
            if let Some(x) = n_min {
                c.n_min = x;
            }
            if let Some(x) = n_max {
                c.n_max = x;
            }
            if let Some(x) = t {
                c.t = x;
            }
            let r = run_experiment(suite, &c)?;
            match ctx.format {
                Format::Json => ctx.emit(&r.to_json())?,
                Format::Csv => ctx.emit(&r.to_csv())?,
            }
            eprintln!("{}: {}/{} passed", suite, r.summary.passed, r.summary.instances);
            Ok(r.summary.all_pass)
        }
    }
}
