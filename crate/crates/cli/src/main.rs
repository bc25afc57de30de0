//! `amsreg` command-line front end. Every verb prints one JSON document on
//! standard output; failures go to standard error with a non-zero exit code.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use amsreg::ams::{
    build_graph, delta_to_proximity, minimal_resolution_points, newton_polygons, resolution_combinatorics,
    validate_delta_sequence, GraphRecipe,
};
use amsreg::oracle::{self, dim_linear_system, tau_oracle, PointSample};
use amsreg::proximity::{excesses, inverse_proximity_matrix, is_almost_consistent, proximity_matrix, unload};
use amsreg::regularity::{
    beta_bound_with, best_beta_with, conjecture_family, nonspeciality_check, regularity, BestBetaOptions,
    BetaOptions, DEFAULT_ENUMERATION_LIMIT,
};
use amsreg::surface::{DivisorClass, EmptinessTest, SurfaceModel};
use amsreg::{Error, Int, MultiplicitySystem, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "amsreg", version, about = "Linear systems on surfaces of curves with one place at infinity")]
struct Cli {
    /// Human-readable summary on standard error.
    #[arg(long, global = true)]
    verbose: bool,

    /// Compact single-line JSON.
    #[arg(long, global = true)]
    compact: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recipe graphs and their proximity matrices.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Delta-sequences.
    #[command(subcommand)]
    Delta(DeltaCmd),
    /// Unload a multiplicity system on a recipe graph.
    Unload {
        #[command(flatten)]
        m: MultArgs,
        #[arg(long)]
        recipe: GraphRecipe,
        /// Include the unloading trace.
        #[arg(long)]
        trace: bool,
    },
    /// Cohomology of d L - sum m_i E_i on the recipe surface.
    Dim {
        #[command(flatten)]
        m: MultArgs,
        #[arg(long)]
        recipe: GraphRecipe,
        #[arg(long)]
        d: Int,
        #[arg(long, value_enum, default_value_t = Pencil::First)]
        pencil: Pencil,
    },
    /// The staged regularity bound for one recipe.
    Beta {
        #[command(flatten)]
        m: MultArgs,
        #[arg(long)]
        recipe: GraphRecipe,
        /// Include stage and unloading traces.
        #[arg(long)]
        trace: bool,
        /// Record the wall time.
        #[arg(long)]
        timing: bool,
    },
    /// The best staged bound over all representative recipes.
    BestBeta {
        #[command(flatten)]
        m: MultArgs,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// Refuse enumerations with more representatives than this.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        limit: u128,
        #[arg(long)]
        trace: bool,
    },
    /// Regularity: exact value or bracket.
    Tau {
        #[command(flatten)]
        m: MultArgs,
        #[arg(long)]
        recipe: GraphRecipe,
    },
    /// Non-speciality of L_d(m) certified through a recipe.
    Nonspecial {
        #[command(flatten)]
        m: MultArgs,
        #[arg(long)]
        recipe: GraphRecipe,
        #[arg(long)]
        d: Int,
    },
    /// Inequalities defining the certified family on the first n+1 points.
    Family {
        #[arg(long)]
        recipe: GraphRecipe,
        #[arg(long)]
        n: usize,
    },
    /// Interpolation ranks at random points.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand, Debug)]
enum GraphCmd {
    /// The proximity graph of a recipe.
    Build {
        #[arg(long)]
        recipe: GraphRecipe,
    },
    /// The proximity matrix.
    Matrix {
        #[arg(long)]
        recipe: GraphRecipe,
    },
    /// The inverse of the proximity matrix.
    Inverse {
        #[arg(long)]
        recipe: GraphRecipe,
    },
    /// Excesses of a multiplicity system.
    Excesses {
        #[arg(long)]
        recipe: GraphRecipe,
        #[command(flatten)]
        m: MultArgs,
    },
}

#[derive(Subcommand, Debug)]
enum DeltaCmd {
    /// Check conditions (I)-(III).
    Validate {
        #[arg(long)]
        delta: String,
    },
    /// Newton polygon data.
    Newton {
        #[arg(long)]
        delta: String,
    },
    /// Proximity graph of the branch at infinity.
    Graph {
        #[arg(long)]
        delta: String,
        /// Number of points (default: through the last satellite point).
        #[arg(long)]
        points: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    /// Dimension and h1 of L_d(m) at seeded random points.
    Dim {
        #[command(flatten)]
        m: MultArgs,
        #[arg(long)]
        d: Int,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Least degree with independent conditions.
    Tau {
        #[command(flatten)]
        m: MultArgs,
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(Args, Debug)]
struct MultArgs {
    /// Multiplicities, e.g. "4000,1000x19".
    #[arg(long, conflicts_with = "m_file")]
    m: Option<String>,
    /// JSON array of multiplicities.
    #[arg(long)]
    m_file: Option<PathBuf>,
}

impl MultArgs {
    fn load(&self) -> Result<MultiplicitySystem> {
        match (&self.m, &self.m_file) {
            (Some(s), _) => s.parse(),
            (None, Some(p)) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", p.display())))?;
                let v: Vec<Int> = serde_json::from_str(&text)
                    .map_err(|e| Error::Parse(format!("{} is not a JSON array of integers: {e}", p.display())))?;
                MultiplicitySystem::new(v)
            }
            (None, None) => Err(Error::InvalidInput("one of --m or --m-file is required".into())),
        }
    }
}

#[derive(Args, Debug)]
struct SeedArg {
    #[arg(long, env = oracle::SEED_ENV, default_value_t = oracle::DEFAULT_SEED)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Pencil {
    /// L - E0
    First,
    /// L - E1
    Second,
}

fn parse_delta(s: &str) -> Result<Vec<Int>> {
    s.split(',')
        .map(|t| t.trim().parse::<Int>().map_err(|_| Error::Parse(format!("bad delta entry '{t}'"))))
        .collect()
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

/// Runs one command; returns the JSON document and a one-line summary.
fn run(cmd: Command) -> Result<(Value, String)> {
    Ok(match cmd {
        Command::Graph(g) => match g {
            GraphCmd::Build { recipe } => {
                let g = build_graph(&recipe)?;
                let summary = format!("{recipe}: {} points", g.n_points());
                (json!({ "recipe": recipe, "graph": g }), summary)
            }
            GraphCmd::Matrix { recipe } => {
                let p = proximity_matrix(&build_graph(&recipe)?);
                (json!({ "recipe": recipe, "matrix": p.rows() }), format!("{recipe}: {}x{}", p.n_rows(), p.n_cols()))
            }
            GraphCmd::Inverse { recipe } => {
                let q = inverse_proximity_matrix(&build_graph(&recipe)?)?;
                (json!({ "recipe": recipe, "inverse": q.rows() }), format!("{recipe}: {}x{}", q.n_rows(), q.n_cols()))
            }
            GraphCmd::Excesses { recipe, m } => {
                let g = build_graph(&recipe)?;
                let rho = excesses(&g, &m.load()?)?;
                let consistent = rho.is_non_negative();
                (json!({ "recipe": recipe, "excesses": rho, "consistent": consistent }), format!("consistent: {consistent}"))
            }
        },
        Command::Delta(d) => match d {
            DeltaCmd::Validate { delta } => {
                let ds = validate_delta_sequence(&parse_delta(&delta)?)?;
                let summary = format!("valid, s = {}", ds.s());
                (json!({ "valid": true, "sequence": ds }), summary)
            }
            DeltaCmd::Newton { delta } => {
                let ds = validate_delta_sequence(&parse_delta(&delta)?)?;
                let nd = newton_polygons(&ds)?;
                let summary = format!("g = {}", nd.g);
                (to_value(&nd), summary)
            }
            DeltaCmd::Graph { delta, points } => {
                let ds = validate_delta_sequence(&parse_delta(&delta)?)?;
                let n = match points {
                    Some(n) => n,
                    None => minimal_resolution_points(&ds)?,
                };
                let rc = resolution_combinatorics(&ds)?;
                let g = delta_to_proximity(&ds, n)?;
                (json!({ "graph": g, "resolution": rc }), format!("{n} points"))
            }
        },
        Command::Unload { m, recipe, trace } => {
            let g = build_graph(&recipe)?;
            let m = m.load()?;
            let (out, tr) = unload(&g, &m)?;
            let almost = is_almost_consistent(&g, &m)?;
            let summary = format!("{} steps, all tame: {}", tr.steps.len(), tr.all_tame);
            let mut v = json!({
                "recipe": recipe,
                "input": m,
                "unloaded": out,
                "steps": tr.steps.len(),
                "all_tame": tr.all_tame,
                "almost_consistent": almost,
            });
            if trace {
                v["trace"] = to_value(&tr.steps);
            }
            (v, summary)
        }
        Command::Dim { m, recipe, d, pencil } => {
            let test = match pencil {
                Pencil::First => EmptinessTest::PencilThroughFirst,
                Pencil::Second => EmptinessTest::PencilThroughSecond,
            };
            let s = SurfaceModel::from_recipe(&recipe)?.with_emptiness_test(test);
            let class = DivisorClass::from_system(d, m.load()?.padded(s.rank())?.as_slice());
            let c = s.cohomology(&class)?;
            let r = s.nef_reduce(&class)?;
            let summary = format!("h0 = {}, h1 = {}, h2 = {}", c.h0, c.h1, c.h2);
            (json!({ "recipe": recipe, "class": class, "cohomology": c, "reduction": r }), summary)
        }
        Command::Beta { m, recipe, trace, timing } => {
            let rep = beta_bound_with(&m.load()?, &recipe, BetaOptions { trace, timing })?;
            let summary = format!("beta = {} on {recipe} ({} stages, j = {})", rep.beta, rep.w, rep.j_found);
            (to_value(&rep), summary)
        }
        Command::BestBeta { m, jobs, limit, trace } => {
            let opts = BestBetaOptions { jobs, limit, beta: BetaOptions { trace, timing: false } };
            let best = best_beta_with(&m.load()?, opts)?;
            let summary = format!("beta = {} on {} ({} candidates)", best.beta, best.recipe, best.candidates.len());
            (to_value(&best), summary)
        }
        Command::Tau { m, recipe } => {
            let v = regularity(&m.load()?, &recipe)?;
            let summary = format!("{:?}: {}", v.kind, v.justification);
            (to_value(&v), summary)
        }
        Command::Nonspecial { m, recipe, d } => {
            let v = nonspeciality_check(d, &m.load()?, &recipe)?;
            let summary = format!("{v:?}");
            (to_value(&v), summary)
        }
        Command::Family { recipe, n } => {
            let f = conjecture_family(&recipe, n)?;
            let text: Vec<String> = f.iter().map(|q| q.to_string()).collect();
            let summary = text.join(", ");
            (json!({ "recipe": recipe, "n": n, "inequalities": f, "text": text }), summary)
        }
        Command::Oracle(o) => match o {
            OracleCmd::Dim { m, d, seed } => {
                let m = m.load()?;
                let sample = PointSample::new(m.support_len(), seed.seed)?;
                let r = dim_linear_system(d, &m, &sample)?;
                let summary = format!("dim = {}, h1 = {} (seed {})", r.dimension, r.h1, r.seed);
                (to_value(&r), summary)
            }
            OracleCmd::Tau { m, seed } => {
                let t = tau_oracle(&m.load()?, seed.seed)?;
                let summary = format!(
                    "tau = {}; full rank certifies independence, lower degrees were deficient at {} seeds",
                    t.tau,
                    t.confirmation_seeds.len()
                );
                (to_value(&t), summary)
            }
        },
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((value, summary)) => {
            let text = if cli.compact {
                serde_json::to_string(&value)
            } else {
                serde_json::to_string_pretty(&value)
            };
            // A closed pipe downstream is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{}", text.expect("JSON values serialize"));
            if cli.verbose {
                eprintln!("{summary}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
