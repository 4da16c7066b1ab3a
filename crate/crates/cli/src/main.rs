use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qgcodes::algebra::{format_row, AlgebraElement};
use qgcodes::decomposition::primitive_idempotents;
use qgcodes::dihedral::{self, admissible_n, build_c, code_alpha_beta, dihedral_decompose, sample_kstar};
use qgcodes::entropy::{self, g_q_inverse};
use qgcodes::experiments::{self, ExperimentReport, Format, RunOptions, SearchOptions, Threshold};
use qgcodes::quasi::{self, QuasiMatrix};
use qgcodes::selfdual::{code_c1b, code_c1dag, solve_unitary};
use qgcodes::{parse_field, Error, FieldSpec, GroupSpec, LinearCode, RngStream};

#[derive(Parser)]
#[command(name = "qgc", version, about = "Group algebra codes over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Primitive idempotents, dimensions, mu and the bar pairing of F G.
    Decompose {
        #[arg(long, default_value = "2^1")]
        field: String,
        #[arg(long)]
        group: String,
        #[command(flatten)]
        output: Output,
    },
    /// q-ary entropy h_q(delta) and g_q(delta) = 1 - h_q(delta).
    Gv {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        delta: f64,
    },
    /// Exact Hamming ball size |{a in F^n : w(a) <= delta n}|.
    Ball {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
    },
    /// Minimum distance of a code read as text rows (file or stdin).
    Mindist {
        #[arg(long, default_value = "2^1")]
        field: String,
        /// Generator rows, one coefficient string per line.
        input: Option<PathBuf>,
    },
    /// Sample a code from one of the random constructions.
    Construct {
        #[command(subcommand)]
        kind: Construct,
    },
    /// Sample b with b bar(b) = -1 and build C_(1,b), or the dagger variant.
    Selfdual {
        #[arg(long, default_value = "2^1")]
        field: String,
        #[arg(long)]
        group: String,
        #[arg(long)]
        dagger: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Dihedral decomposition and a sampled code alpha C beta.
    #[command(args_conflicts_with_subcommands = true)]
    Dihedral {
        #[command(subcommand)]
        check: Option<DihedralCheck>,
        #[arg(long, default_value = "2^1")]
        field: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Seeded Monte Carlo experiments.
    Experiment {
        #[command(subcommand)]
        kind: Experiment,
    },
    /// Coindices n coprime to q with their mu_q(n).
    SearchN {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1000)]
        limit: u64,
        #[arg(long)]
        require_minus_one: bool,
        #[arg(long)]
        prime_only: bool,
        #[arg(long)]
        odd_only: bool,
        /// Keep n with mu_q(n) >= this value.
        #[arg(long, group = "threshold")]
        min_mu: Option<f64>,
        /// Keep n with mu_q(n) > c log_q n.
        #[arg(long, group = "threshold")]
        mu_over_log: Option<f64>,
        /// Keep n with mu_q(n) >= (log_q n)^2.
        #[arg(long, group = "threshold")]
        log_squared: bool,
        #[arg(long, default_value = "json")]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum DihedralCheck {
    /// Odd n <= max coprime to q with -1 in <q> mod n.
    CheckN {
        #[arg(long, default_value = "2^1")]
        field: String,
        #[arg(long)]
        max: u64,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// C_M for a uniform k x n matrix M.
    Linear {
        #[arg(long, default_value = "2^1")]
        field: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// C_A for a uniform k x t matrix A over F G.
    Quasi {
        #[arg(long, default_value = "2^1")]
        field: String,
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// C_(a,a') = {(ba, ba')}; a and a' are sampled unless given.
    Index2 {
        #[arg(long, default_value = "2^1")]
        field: String,
        #[arg(long)]
        group: String,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        a2: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// {(phi(ba), ba')} in F C_(alpha n) x F C_n.
    Fractional {
        #[arg(long, default_value = "2^1")]
        field: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        a2: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value = "2^1")]
    field: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    trials: u64,
    /// Worker threads (0: one per core); reports do not depend on it.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Relative distance threshold; defaults depend on the experiment and q.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value = "json")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand)]
enum Experiment {
    /// Random linear codes over an (n, r) grid.
    Linear {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',', default_value = "10,14,18,22")]
        ns: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.6")]
        rs: Vec<f64>,
    },
    /// Quasi-abelian codes over a t grid.
    Quasi {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "c:3")]
        group: String,
        #[arg(long, value_delimiter = ',', default_value = "4,6,8,10")]
        ts: Vec<usize>,
        #[arg(long, default_value_t = 0.25)]
        r: f64,
    },
    /// Index-2 codes C_(a,a') over F C_n.
    Index2 {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',', default_value = "5,9,11")]
        ns: Vec<usize>,
    },
    /// Self-dual codes C_(1,b).
    Selfdual {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',', default_value = "5,7,9,11")]
        ns: Vec<usize>,
    },
    /// Self-orthogonal codes C_(1-dagger,b-dagger).
    Selforth {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',', default_value = "5,7,9,11")]
        ns: Vec<usize>,
    },
    /// Dihedral codes alpha C beta.
    Dihedral {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',', default_value = "3,5,9,11")]
        ns: Vec<usize>,
    },
}

fn write_out(output: &Output, bytes: &[u8]) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn emit_json(output: &Output, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_out(output, text.as_bytes())
}

fn budgeted<T>(r: qgcodes::Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn code_summary(code: &LinearCode) -> Result<Value> {
    let d = if code.dim() == 0 { None } else { budgeted(code.min_weight())? };
    Ok(json!({
        "n": code.len(),
        "k": code.dim(),
        "d": d,
        "relative_distance": d.map(|d| d as f64 / code.len() as f64),
        "rate": code.rate().to_string(),
        "generator": code.basis().iter().map(|r| format_row(code.field(), r)).collect::<Vec<_>>(),
    }))
}

fn element(field: &FieldSpec, group: &GroupSpec, given: Option<&str>, rng: &mut RngStream) -> Result<AlgebraElement> {
    Ok(match given {
        Some(s) => AlgebraElement::parse(field, group, s)?,
        None => AlgebraElement::random(field, group, rng),
    })
}

/// Largest delta on a 1e-4 grid with g_q(delta) strictly above `target`.
fn default_delta(q: u64, target: f64) -> Result<f64> {
    let d = g_q_inverse(q, target)?;
    Ok(((d * 1e4).ceil() - 1.0) / 1e4)
}

fn decompose(field: &str, group: &str) -> Result<Value> {
    let field = parse_field(field)?;
    let group = GroupSpec::parse(group)?;
    let dec = primitive_idempotents(&field, &group)?;
    let pairing = dec.pairing().ok().map(|p| {
        json!({
            "r": p.fixed.len(),
            "s": p.pairs.len(),
            "fixed": p.fixed,
            "pairs": p.pairs,
            "k": p.k,
            "sum_k": p.k.iter().sum::<usize>(),
        })
    });
    Ok(json!({
        "field": field.to_string(),
        "group": group.to_string(),
        "order": dec.order(),
        "components": dec.idempotents().len(),
        "dims": dec.dims(),
        "mu": dec.mu(),
        "idempotents": dec.idempotents().iter().map(AlgebraElement::format).collect::<Vec<_>>(),
        "bar_pairing": pairing,
    }))
}

fn construct(kind: Construct) -> Result<()> {
    match kind {
        Construct::Linear { field, n, k, seed, output } => {
            let field = parse_field(&field)?;
            let code = quasi::random_linear_code(&field, n, k, &mut RngStream::new(seed))?;
            let mut v = code_summary(&code)?;
            v["construction"] = json!("linear");
            v["seed"] = json!(seed);
            emit_json(&output, &v)
        }
        Construct::Quasi { field, group, k, t, seed, output } => {
            let field = parse_field(&field)?;
            let group = GroupSpec::parse(&group)?;
            let a = QuasiMatrix::random(&field, &group, k, t, &mut RngStream::new(seed));
            let code = quasi::quasi_code(&a)?;
            let mut v = code_summary(&code)?;
            v["construction"] = json!("quasi");
            v["group"] = json!(group.to_string());
            v["seed"] = json!(seed);
            if group.is_abelian() && k <= t {
                let dec = primitive_idempotents(&field, &group)?;
                v["full_rank"] = json!(quasi::full_rank(&a, &dec)?);
            }
            emit_json(&output, &v)
        }
        Construct::Index2 { field, group, a, a2, seed, output } => {
            let field = parse_field(&field)?;
            let group = GroupSpec::parse(&group)?;
            let mut rng = RngStream::new(seed);
            let a = element(&field, &group, a.as_deref(), &mut rng)?;
            let a2 = element(&field, &group, a2.as_deref(), &mut rng)?;
            let code = quasi::index2_code(&a, &a2)?;
            let (_, ann) = quasi::annihilator(&a, &a2)?;
            let mut v = code_summary(&code)?;
            v["construction"] = json!("index2");
            v["a"] = json!(a.format());
            v["a2"] = json!(a2.format());
            v["annihilator_dim"] = json!(ann);
            v["self_orthogonal"] = json!(quasi::index2_self_orthogonal(&a, &a2)?);
            emit_json(&output, &v)
        }
        Construct::Fractional { field, n, alpha, a, a2, seed, output } => {
            let field = parse_field(&field)?;
            let group = GroupSpec::cyclic(n)?;
            let mut rng = RngStream::new(seed);
            let a = element(&field, &group, a.as_deref(), &mut rng)?;
            let a2 = element(&field, &group, a2.as_deref(), &mut rng)?;
            let phi = quasi::fractional_phi(&a, alpha)?;
            let base = quasi::index2_code(&a, &a2)?;
            let code = quasi::fractional_code(&a, &a2, alpha)?;
            let mut v = code_summary(&code)?;
            v["construction"] = json!("fractional");
            v["alpha"] = json!(alpha);
            v["a"] = json!(a.format());
            v["a2"] = json!(a2.format());
            v["phi_a"] = json!(phi.format());
            v["weight_a"] = json!(a.weight());
            v["weight_phi_a"] = json!(phi.weight());
            v["index2_rate"] = json!(base.rate().to_string());
            emit_json(&output, &v)
        }
    }
}

fn selfdual(field: &str, group: &str, dagger: bool, seed: u64, output: &Output) -> Result<()> {
    let field = parse_field(field)?;
    let group = GroupSpec::parse(group)?;
    let dec = primitive_idempotents(&field, &group)?;
    let sols = solve_unitary(&dec)?;
    let mut rng = RngStream::new(seed);
    let (count, b, code) = if dagger {
        let b = sols.sample_d_dagger(&mut rng)?;
        (sols.count_d_dagger(), b.clone(), code_c1dag(&dec, &b)?)
    } else {
        let b = sols.sample_d(&mut rng)?;
        (sols.count_d(), b.clone(), code_c1b(&b)?)
    };
    let mut v = code_summary(&code)?;
    v["construction"] = json!(if dagger { "selforth" } else { "selfdual" });
    v["solutions"] = json!(count.to_string());
    v["b"] = json!(b.format());
    v["self_dual"] = json!(code.is_self_dual());
    v["self_orthogonal"] = json!(code.is_self_orthogonal());
    emit_json(output, &v)
}

fn dihedral_cmd(field: &str, n: usize, seed: u64, output: &Output) -> Result<()> {
    let field = parse_field(field)?;
    let dec = dihedral_decompose(&field, n)?;
    let family = build_c(&dec)?;
    let mut rng = RngStream::new(seed);
    let alpha = sample_kstar(&dec, &mut rng);
    let beta = sample_kstar(&dec, &mut rng);
    let code = code_alpha_beta(&dec, &family, &alpha, &beta)?;
    let gs: Vec<String> = dec.components[1..]
        .iter()
        .map(|c| c.iso.as_ref().map_or(String::new(), |iso| iso.g.format()))
        .collect();
    let verified = dec.components[1..]
        .iter()
        .all(|c| c.iso.as_ref().is_some_and(|iso| iso.verified() && dihedral::matrix_relations_hold(iso)));
    let mut v = code_summary(&code)?;
    v["construction"] = json!("dihedral");
    v["r"] = json!(dec.r());
    v["k"] = json!(dec.ks());
    v["g"] = json!(gs);
    v["isomorphisms_verified"] = json!(verified);
    v["dim_c"] = json!(family.code.dim());
    v["alpha"] = json!(alpha.format());
    v["beta"] = json!(beta.format());
    if field.order() % 2 == 0 {
        v["self_dual"] = json!(code.is_self_dual());
    } else {
        v["lcd"] = json!(code.is_lcd());
    }
    emit_json(output, &v)
}

fn run_experiment(kind: Experiment) -> Result<()> {
    let run = match &kind {
        Experiment::Linear { run, .. }
        | Experiment::Quasi { run, .. }
        | Experiment::Index2 { run, .. }
        | Experiment::Selfdual { run, .. }
        | Experiment::Selforth { run, .. }
        | Experiment::Dihedral { run, .. } => run,
    };
    let field = parse_field(&run.field)?;
    let q = field.order() as u64;
    let opts = RunOptions {
        workers: run.workers,
        ..RunOptions::new(run.trials, run.seed)
    };
    let start = Instant::now();
    let report: ExperimentReport = match &kind {
        Experiment::Linear { ns, rs, .. } => {
            experiments::exp_random_linear(&field, ns, rs, run.delta.unwrap_or(0.2), &opts)?
        }
        Experiment::Quasi { group, ts, r, .. } => {
            let group = GroupSpec::parse(group)?;
            experiments::exp_quasi_abelian(&field, &group, ts, *r, run.delta.unwrap_or(0.2), &opts)?
        }
        Experiment::Index2 { ns, .. } => {
            let delta = run.delta.map_or_else(|| default_delta(q, 0.5), Ok)?;
            experiments::exp_index2(&field, ns, delta, &opts)?
        }
        Experiment::Selfdual { ns, .. } => {
            let delta = run.delta.map_or_else(|| default_delta(q, 0.75), Ok)?;
            experiments::exp_selfdual(&field, ns, delta, &opts)?
        }
        Experiment::Selforth { ns, .. } => {
            let delta = run.delta.map_or_else(|| default_delta(q, 0.75), Ok)?;
            experiments::exp_selforth(&field, ns, delta, &opts)?
        }
        Experiment::Dihedral { ns, .. } => {
            let delta = run.delta.map_or_else(|| default_delta(q, 0.75), Ok)?;
            experiments::exp_dihedral(&field, ns, delta, &opts)?
        }
    };
    eprintln!(
        "{}: {} points in {:.2?} (workers: {})",
        report.id,
        report.rows.len(),
        start.elapsed(),
        if run.workers == 0 { rayon_default() } else { run.workers }
    );
    write_out(&run.output, &report.emit(run.format)?)
}

fn rayon_default() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn search(q: u64, limit: u64, opts: SearchOptions, format: Format, output: &Output) -> Result<()> {
    let found = experiments::search_good_n(q, limit, &opts)?;
    let mut report = ExperimentReport::new("search-n", &["n", "mu", "log_q_n", "ratio", "prime", "minus_one"]);
    report.set("q", q);
    report.set("limit", limit);
    report.set("require_minus_one", opts.require_minus_one);
    report.set("prime_only", opts.prime_only);
    report.set("odd_only", opts.odd_only);
    report.set("threshold", format!("{:?}", opts.threshold));
    for c in &found {
        report.push(vec![
            c.n.into(),
            c.mu.into(),
            c.log_q_n.into(),
            c.ratio.into(),
            c.prime.into(),
            c.minus_one.into(),
        ]);
    }
    write_out(output, &report.emit(format)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Decompose { field, group, output } => emit_json(&output, &decompose(&field, &group)?),
        Command::Gv { q, delta } => {
            let p = entropy::EntropyPoint::new(q, delta)?;
            emit_json(&Output { out: None }, &serde_json::to_value(p)?)
        }
        Command::Ball { q, n, delta } => {
            let size = entropy::ball_size(q, n, delta);
            emit_json(
                &Output { out: None },
                &json!({
                    "q": q,
                    "n": n,
                    "delta": delta,
                    "radius": entropy::radius(n, delta),
                    "size": size.to_string(),
                    "bounds_hold": entropy::ball_bounds_check(q, n, delta)?,
                }),
            )
        }
        Command::Mindist { field, input } => {
            let field = parse_field(&field)?;
            let mut text = String::new();
            match input {
                Some(path) => text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?,
                None => {
                    io::stdin().read_to_string(&mut text)?;
                }
            }
            let code = LinearCode::parse_text(&field, &text)?;
            let mut v = code_summary(&code)?;
            if let Some(obj) = v.as_object_mut() {
                obj.remove("generator");
            }
            emit_json(&Output { out: None }, &v)
        }
        Command::Construct { kind } => construct(kind),
        Command::Selfdual { field, group, dagger, seed, output } => selfdual(&field, &group, dagger, seed, &output),
        Command::Dihedral { check, field, n, seed, output } => match check {
            Some(DihedralCheck::CheckN { field, max }) => {
                let q = parse_field(&field)?.order() as u64;
                emit_json(&Output { out: None }, &json!({ "q": q, "max": max, "n": admissible_n(q, max) }))
            }
            None => {
                let Some(n) = n else { bail!("dihedral needs --n (or the check-n subcommand)") };
                dihedral_cmd(&field, n, seed, &output)
            }
        },
        Command::Experiment { kind } => run_experiment(kind),
        Command::SearchN {
            q,
            limit,
            require_minus_one,
            prime_only,
            odd_only,
            min_mu,
            mu_over_log,
            log_squared,
            format,
            output,
        } => {
            let threshold = match (min_mu, mu_over_log, log_squared) {
                (Some(m), _, _) => Threshold::MinMu(m),
                (_, Some(c), _) => Threshold::MuOverLog(c),
                (_, _, true) => Threshold::LogSquared,
                _ => Threshold::None,
            };
            let opts = SearchOptions {
                require_minus_one,
                prime_only,
                odd_only,
                threshold,
            };
            search(q, limit, opts, format, &output)
        }
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
