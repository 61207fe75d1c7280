use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use voltsurf::checks::{run_all, CheckConfig};
use voltsurf::format::{chain_to_json, read_embedding, read_voltage_embedding};
use voltsurf::homology::Homology;
use voltsurf::intersection::{gram_matrix, independence_by_rank, pairing, RankVerdict};
use voltsurf::petersen::enumerate::DEFAULT_LIMIT;
use voltsurf::petersen::{fixtures, identify_gp, no_torus_search};
use voltsurf::{Chain1, Embedding, Error};

#[derive(Parser)]
#[command(name = "voltsurf", version, about = "Embedded graphs, Z2 homology and voltage graph lifts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Input {
    /// Embedding or voltage embedding JSON file.
    file: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Face boundary walks.
    Faces(Input),
    /// Surface class of the embedding.
    Classify(Input),
    /// First Betti number and an H1 basis; optionally test one cycle.
    Homology {
        #[command(flatten)]
        input: Input,
        /// Comma-separated edge ids of a cycle to test for triviality.
        #[arg(long, value_delimiter = ',')]
        cycle: Option<Vec<String>>,
    },
    /// Intersection pairing of two cycles, or the Gram matrix of an H1 basis.
    Intersect {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',', requires = "w")]
        z: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',', requires = "z")]
        w: Option<Vec<String>>,
    },
    /// Derived graph and surface of a voltage embedding.
    Derive(Input),
    /// The four coset counts against direct counts.
    CosetCheck {
        #[command(flatten)]
        input: Input,
        /// Base vertex id.
        #[arg(long)]
        vertex: String,
        /// Closed walk at the vertex as dart tokens, e.g. `a+,b-`.
        #[arg(long, value_delimiter = ',')]
        walk: Vec<String>,
        /// Face indices (default: all faces).
        #[arg(long, value_delimiter = ',')]
        faces: Option<Vec<usize>>,
        /// Edge ids of the subgraph (default: every edge on the faces).
        #[arg(long, value_delimiter = ',')]
        edges: Option<Vec<String>>,
    },
    /// Riemann-Hurwitz prediction against the derived Euler characteristic.
    RhCheck(Input),
    /// Regenerate the GP fixtures.
    Gp {
        /// Fixture directory.
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
        /// Only report fixtures that differ from a regeneration.
        #[arg(long)]
        check: bool,
    },
    /// Exhaustive search for derived tori over the quotients of GP(2p,2).
    Search {
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u128,
    },
    /// Run every acceptance check and print a pass/fail table.
    VerifyPaper {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u128,
        /// Also compare against the frozen fixtures in this directory.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

enum Failure {
    BadInput(anyhow::Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Inconsistent(_) | Error::NoWitness(_) => Failure::Verification(e.to_string()),
            other => Failure::BadInput(other.into()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::BadInput(e.into())
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn names(emb: &Embedding, z: &Chain1) -> Value {
    chain_to_json(emb.graph(), z)
}

fn faces(emb: &Embedding) -> Value {
    let g = emb.graph();
    let faces: Vec<Value> = emb
        .trace_faces()
        .iter()
        .map(|f| {
            json!({
                "darts": f.darts().map(|d| g.dart_token(d)).collect::<Vec<_>>(),
                "vertices": f.vertex_walk(g).iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "count": faces.len(), "faces": faces })
}

fn homology(emb: &Embedding, cycle: Option<Vec<String>>) -> Outcome {
    let h = Homology::new(emb);
    let mut out = json!({
        "betti1": h.betti1(),
        "basis": h.h1_basis().iter().map(|z| names(emb, z)).collect::<Vec<_>>(),
    });
    if let Some(c) = cycle {
        let z = Chain1::from_names(emb.graph(), &c)?;
        out["cycle_trivial"] = json!(h.is_trivial(&z)?);
    }
    Ok((out, true))
}

fn intersect(emb: &Embedding, z: Option<Vec<String>>, w: Option<Vec<String>>) -> Outcome {
    let g = emb.graph();
    if let (Some(z), Some(w)) = (z, w) {
        let (z, w) = (Chain1::from_names(g, &z)?, Chain1::from_names(g, &w)?);
        return Ok((json!({ "pairing": u8::from(pairing(emb, &z, &w)?) }), true));
    }
    let basis = Homology::new(emb).h1_basis();
    let m = gram_matrix(emb, &basis)?;
    Ok((
        json!({
            "basis": basis.iter().map(|z| names(emb, z)).collect::<Vec<_>>(),
            "gram": m.matrix().to_nested(),
            "rank": m.rank(),
            "independent_by_rank": independence_by_rank(&m) == RankVerdict::Independent,
        }),
        true,
    ))
}

fn derive(path: &Path) -> Outcome {
    let ve = read_voltage_embedding(path)?;
    let d = ve.derived_embedding();
    let g = d.graph();
    let connected = g.is_connected();
    let surface = if connected { json!(d.classify_surface()?) } else { Value::Null };
    let gp = identify_gp(g).map(|(n, k)| json!({ "n": n, "k": k }));
    Ok((
        json!({
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "components": g.component_count(),
            "faces": d.face_count(),
            "euler_characteristic": d.euler_characteristic(),
            "surface": surface,
            "riemann_hurwitz_chi": ve.riemann_hurwitz_chi(),
            "free_action": ve.verify_free_action(),
            "generalized_petersen": gp,
        }),
        true,
    ))
}

fn rh_check(path: &Path) -> Outcome {
    let ve = read_voltage_embedding(path)?;
    let base = ve.base();
    let g = base.graph();
    let per_face: Vec<Value> = base
        .trace_faces()
        .iter()
        .map(|f| {
            let w = ve.face_voltage(f);
            json!({
                "darts": f.darts().map(|d| g.dart_token(d)).collect::<Vec<_>>(),
                "voltage": w.0,
                "order": ve.group().element_order(w),
                "deficiency": ve.deficiency(f),
            })
        })
        .collect();
    let predicted = ve.riemann_hurwitz_chi();
    let actual = ve.derived_embedding().euler_characteristic();
    Ok((json!({ "predicted_chi": predicted, "derived_chi": actual, "faces": per_face }), predicted == actual))
}

fn coset_check(
    path: &Path,
    vertex: &str,
    walk: &[String],
    faces: Option<Vec<usize>>,
    edges: Option<Vec<String>>,
) -> Outcome {
    let ve = read_voltage_embedding(path)?;
    let g = ve.base().graph();
    let v = g.vertex_index(vertex).ok_or_else(|| Error::UnknownVertex(vertex.to_string()))?;
    let walk = walk.iter().map(|t| g.parse_dart(t)).collect::<Result<Vec<_>, _>>()?;
    let faces = faces.unwrap_or_else(|| (0..ve.base().face_count()).collect());
    let x = match edges {
        Some(e) => Chain1::from_names(g, &e)?,
        None => {
            let all = ve.base().trace_faces();
            Chain1::from_edges(
                g.edge_count(),
                faces.iter().flat_map(|&f| all[f].darts().map(|d| d.edge())).collect::<std::collections::BTreeSet<_>>(),
            )
        }
    };
    let c = ve.coset_counts(v, &faces, &x, &walk)?;
    let pair = |(f, d): (usize, usize)| json!({ "formula": f, "direct": d });
    Ok((
        json!({
            "surface_components": pair(c.surface_components),
            "face_set_components": pair(c.face_set_components),
            "subgraph_components": pair(c.subgraph_components),
            "lift_sets": pair(c.lift_sets),
            "all_match": c.all_match(),
        }),
        c.all_match(),
    ))
}

fn gp(dir: &Path, check: bool) -> Outcome {
    if check {
        let stale = fixtures::stale(dir)?;
        return Ok((json!({ "stale": stale }), stale.is_empty()));
    }
    Ok((json!({ "written": fixtures::write_all(dir)? }), true))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Faces(i) => Ok((faces(&read_embedding(&i.file)?), true)),
        Command::Classify(i) => Ok((json!(read_embedding(&i.file)?.classify_surface()?), true)),
        Command::Homology { input, cycle } => homology(&read_embedding(&input.file)?, cycle),
        Command::Intersect { input, z, w } => intersect(&read_embedding(&input.file)?, z, w),
        Command::Derive(i) => derive(&i.file),
        Command::CosetCheck { input, vertex, walk, faces, edges } => {
            coset_check(&input.file, &vertex, &walk, faces, edges)
        }
        Command::RhCheck(i) => rh_check(&i.file),
        Command::Gp { dir, check } => gp(&dir, check),
        Command::Search { p, jobs, limit } => {
            let report = no_torus_search(p, jobs, limit)?;
            eprint!("{}", report.table());
            Ok((json!(report), true))
        }
        Command::VerifyPaper { seed, jobs, limit, fixtures } => {
            let mut cfg = CheckConfig { seed, limit, fixtures, ..CheckConfig::default() };
            if let Some(j) = jobs {
                cfg.jobs = j;
            }
            let results = run_all(&cfg);
            for r in &results {
                eprintln!("{}", r.line());
            }
            let ok = results.iter().all(|r| r.passed);
            Ok((json!({ "passed": ok, "checks": results }), ok))
        }
    }
}

fn emit(value: &Value, output: Option<&Path>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("json value") + "\n";
    match output {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    match run(cli) {
        Ok((value, ok)) => {
            if let Err(e) = emit(&value, output.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::BadInput(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}
