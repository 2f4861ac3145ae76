//! `gapforge`: one pipeline step per invocation, JSON artifacts on disk,
//! a one-line summary per artifact on stdout.
//!
//! Exit codes: 0 success, 1 verification or certification failure, 2 input
//! error, 3 budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gapforge::amplify::{amplify_to_gamma, compose_amplify};
use gapforge::bridges::{force_unit_coefficients, mld_to_ncp, ncp_to_mld};
use gapforge::codes::{
    build_random_code, build_rs_code, collision_number_exact, distance_based_bounds, merge_code,
    random_code_params, Code,
};
use gapforge::gap::{colored_to_uncolored, gap_reduce, CodeShape, GapConfig};
use gapforge::instances::{gen_certified_no, gen_planted_yes, verify_witness};
use gapforge::io::{read_artifact, write_artifact, Artifact};
use gapforge::oracles::{
    certify_gap, colored_solution, exact_mld_min, exact_ncp_min, ColoredMode, GapClass, MldSearch,
    DEFAULT_BUDGET,
};
use gapforge::report::RunReport;
use gapforge::{ColoredMldInstance, Error, MldInstance, Witness};

#[derive(Parser, Debug)]
#[command(name = "gapforge", version, about = "Gap-creating reductions for MLD over prime fields")]
struct Cli {
    /// Worker threads for searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Oracle budget in elementary combinations; overrides GAPFORGE_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u128>,

    /// Write a consolidated run report (config echo, step reports, timings).
    #[arg(long, global = true, value_name = "PATH")]
    run_report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random colored MLD instance.
    Gen(GenArgs),
    /// Build or analyze codes.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Run a reduction.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Compose instances to amplify the gap.
    Amplify(AmplifyArgs),
    /// Reductions between MLD and NCP, and the unit-coefficient gadget.
    #[command(subcommand)]
    Bridge(BridgeCmd),
    /// Exact minimum of an MLD or NCP instance.
    Solve(SolveArgs),
    /// Classify an instance against a claimed (k, gamma).
    Certify(CertifyArgs),
    /// Check a witness against an instance.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    PlantedYes,
    CertifiedNo,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    max_attempts: usize,
    #[arg(short, long)]
    output: PathBuf,
    /// Planted witness path (default: `<output stem>.witness.json`).
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CodeCmd {
    /// Uniform random code; give --sigma and --m, or --k/--c/--eps for the
    /// parameter formula.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: Option<u64>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        c: Option<u64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Reed-Solomon code over F_q.
    Rs {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Merge every g coordinates into one symbol.
    Merge {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        g: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Exact collision number up to --max-s.
    Colnum {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        max_s: usize,
    },
    /// Distance-based collision bound and Singleton check.
    Bounds {
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ReduceCmd {
    /// Code, bipartite gap construction and duplication.
    Gap {
        #[arg(long)]
        inst: PathBuf,
        #[arg(long, default_value_t = 2)]
        c: u64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Alphabet size; with --m, replaces the parameter formula.
        #[arg(long, requires = "m")]
        sigma: Option<u64>,
        #[arg(long, requires = "sigma")]
        m: Option<usize>,
        /// Skip the exact collision-number check on the drawn code.
        #[arg(long)]
        no_certify_code: bool,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct AmplifyArgs {
    /// Outer instance (or the instance to self-compose).
    #[arg(long)]
    inst: PathBuf,
    /// Inner instance for a single composition.
    #[arg(long, conflicts_with = "target_gamma")]
    inner: Option<PathBuf>,
    /// Claimed gap of --inst.
    #[arg(long)]
    gamma: f64,
    /// Claimed gap of --inner (default: --gamma).
    #[arg(long)]
    inner_gamma: Option<f64>,
    /// Self-compose until the claimed gap reaches this value.
    #[arg(long)]
    target_gamma: Option<f64>,
    /// Parameter k of --inst (default: the instance's own k).
    #[arg(long)]
    k: Option<usize>,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum BridgeCmd {
    MldToNcp {
        #[arg(long)]
        inst: PathBuf,
        #[arg(long)]
        gamma: f64,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    NcpToMld {
        #[arg(long)]
        inst: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    ForceUnit {
        #[arg(long)]
        inst: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    inst: PathBuf,
    /// Largest solution size searched (default: all vectors).
    #[arg(long)]
    cap: Option<usize>,
    /// Colored instances: search one-per-class unit-coefficient selections.
    #[arg(long)]
    colored: bool,
    /// Write the witness found.
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long)]
    inst: PathBuf,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    gamma: f64,
    /// Fail (exit 1) unless the class matches.
    #[arg(long)]
    expect: Option<String>,
    #[arg(long)]
    id: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    inst: PathBuf,
    #[arg(long)]
    witness: PathBuf,
}

/// Failure of a run, mapped onto the exit code.
enum Failure {
    /// A check ran and came out negative.
    Check(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Lib(e) => match e {
                Error::Budget { .. } | Error::AmplifyBudget { .. } => 3,
                Error::NoInstanceFound { .. } | Error::NoCertifiedCode { .. } | Error::Internal(_) => 1,
                _ => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Check(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

type Run<T = ()> = Result<T, Failure>;

struct Ctx {
    budget: u128,
    report: RunReport,
}

impl Ctx {
    fn step(&mut self, name: &str, started: Instant, report: Value) {
        self.report.push(name, started.elapsed().as_secs_f64() * 1e3, report);
    }
}

fn save(path: &Path, a: Artifact) -> Run {
    write_artifact(path, &a)?;
    println!("wrote {} to {} ({})", a.type_name(), path.display(), describe(&a));
    Ok(())
}

fn describe(a: &Artifact) -> String {
    match a {
        Artifact::ColoredMld(i) => format!(
            "p={} k={} d={} vectors={}",
            i.field().p(),
            i.k(),
            i.d(),
            i.total_vectors()
        ),
        Artifact::Mld(i) => format!("p={} k={} d={} vectors={}", i.field().p(), i.k(), i.d(), i.vectors().len()),
        Artifact::Ncp(i) => format!("p={} k={} m={} generators={}", i.field().p(), i.k(), i.m(), i.generators().len()),
        Artifact::Witness(w) => format!("weight={}", w.weight()),
        Artifact::Code(c) => format!("n={} sigma={} m={}", c.n(), c.sigma(), c.m()),
        Artifact::GapReport(r) => format!("k'={} D'={} sigma={} m={} w={}", r.k_prime, r.d_prime, r.sigma, r.m, r.w),
        Artifact::Certificate(c) => format!("class={}", c.class.as_str()),
    }
}

fn write_json(path: &Path, v: &Value) -> Run {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    std::fs::write(path, s).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    println!("wrote report to {}", path.display());
    Ok(())
}

fn load_code(path: &Path) -> Run<Code> {
    match read_artifact(path)? {
        Artifact::Code(c) => Ok(c),
        other => Err(wrong_type(path, "code", &other)),
    }
}

fn load_colored(path: &Path) -> Run<ColoredMldInstance> {
    match read_artifact(path)? {
        Artifact::ColoredMld(c) => Ok(c),
        other => Err(wrong_type(path, "colored_mld", &other)),
    }
}

/// Flat view of an MLD document (colored instances are flattened).
fn load_flat(path: &Path) -> Run<MldInstance> {
    match read_artifact(path)? {
        Artifact::Mld(m) => Ok(m),
        Artifact::ColoredMld(c) => Ok(colored_to_uncolored(&c)),
        other => Err(wrong_type(path, "mld or colored_mld", &other)),
    }
}

fn wrong_type(path: &Path, want: &str, got: &Artifact) -> Failure {
    Failure::Lib(Error::Input(format!(
        "{} holds a {} document, expected {want}",
        path.display(),
        got.type_name()
    )))
}

fn gen(ctx: &mut Ctx, a: &GenArgs) -> Run {
    let t = Instant::now();
    match a.kind {
        GenKind::PlantedYes => {
            let (inst, w) = gen_planted_yes(a.p, a.k, a.d, a.n, a.seed)?;
            let wpath = a.witness.clone().unwrap_or_else(|| witness_path(&a.output));
            ctx.step("gen", t, json!({"kind": "planted-yes", "witness_weight": w.weight()}));
            save(&a.output, inst.into())?;
            save(&wpath, w.into())
        }
        GenKind::CertifiedNo => {
            let inst = gen_certified_no(a.p, a.k, a.d, a.n, a.seed, a.max_attempts)?;
            ctx.step("gen", t, json!({"kind": "certified-no"}));
            save(&a.output, inst.into())
        }
    }
}

fn witness_path(output: &Path) -> PathBuf {
    let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    output.with_file_name(format!("{stem}.witness.json"))
}

fn code(ctx: &mut Ctx, cmd: &CodeCmd) -> Run {
    let t = Instant::now();
    match cmd {
        CodeCmd::Random { n, sigma, m, k, c, eps, seed, output } => {
            let (sigma, m) = match (sigma, m, k, c, eps) {
                (Some(s), Some(m), _, _, _) => (*s, *m),
                (None, None, Some(k), Some(c), Some(e)) => {
                    let p = random_code_params(*n, *k, *c, *e)?;
                    println!("parameters: sigma={} r={} m={}", p.sigma, p.r, p.m);
                    (p.sigma, p.m)
                }
                _ => {
                    return Err(Failure::Lib(Error::Input(
                        "give --sigma and --m, or --k, --c and --eps".into(),
                    )))
                }
            };
            let code = build_random_code(*n, sigma, m, *seed)?;
            ctx.step("code.random", t, json!({"n": n, "sigma": sigma, "m": m, "seed": seed}));
            save(output, code.into())
        }
        CodeCmd::Rs { q, r, m, n, output } => {
            let code = build_rs_code(*q, *r, *m, *n)?;
            ctx.step("code.rs", t, json!({"q": q, "r": r, "m": m, "n": n}));
            save(output, code.into())
        }
        CodeCmd::Merge { code, g, output } => {
            let merged = merge_code(&load_code(code)?, *g)?;
            ctx.step("code.merge", t, json!({"g": g}));
            save(output, merged.into())
        }
        CodeCmd::Colnum { code, eps, max_s } => {
            let c = load_code(code)?;
            let s = collision_number_exact(&c, *eps, *max_s)?;
            match s {
                Some(s) => println!("Col_{eps} = {s}"),
                None => println!("Col_{eps} greater than {max_s}"),
            }
            ctx.step("code.colnum", t, json!({"epsilon": eps, "max_s": max_s, "collision_number": s}));
            Ok(())
        }
        CodeCmd::Bounds { delta, eps, m, r } => {
            let b = distance_based_bounds(*delta, *eps, *m, *r)?;
            println!(
                "collision lower bound {:.6}; singleton feasible: {}",
                b.col_lower_bound, b.singleton_feasible
            );
            ctx.step(
                "code.bounds",
                t,
                json!({"col_lower_bound": b.col_lower_bound, "singleton_feasible": b.singleton_feasible}),
            );
            Ok(())
        }
    }
}

fn reduce(ctx: &mut Ctx, cmd: &ReduceCmd) -> Run {
    let ReduceCmd::Gap { inst, c, eps, seed, sigma, m, no_certify_code, output, report } = cmd;
    let input = load_colored(inst)?;
    let t = Instant::now();
    let cfg = GapConfig {
        shape: sigma.zip(*m).map(|(sigma, m)| CodeShape { sigma, m }),
        certify_code: !no_certify_code,
        ..GapConfig::new(*c, *eps, *seed)
    };
    let (out, rep) = gap_reduce(&input, &cfg)?;
    let rep_art = Artifact::from(rep);
    ctx.step("reduce.gap", t, rep_art.to_json());
    save(output, out.into())?;
    if let Some(path) = report {
        save(path, rep_art)?;
    }
    Ok(())
}

fn amplify(ctx: &mut Ctx, a: &AmplifyArgs) -> Run {
    let outer = load_flat(&a.inst)?;
    let outer = match a.k {
        Some(k) => outer.with_k(k),
        None => outer,
    };
    let t = Instant::now();
    let (out, reports) = if let Some(inner_path) = &a.inner {
        let inner = load_flat(inner_path)?;
        let (out, rep) = compose_amplify(&outer, a.gamma, &inner, a.inner_gamma.unwrap_or(a.gamma))?;
        (out, vec![rep])
    } else {
        let target = a.target_gamma.ok_or_else(|| {
            Failure::Lib(Error::Input("give --inner or --target-gamma".into()))
        })?;
        match amplify_to_gamma(&outer, outer.k(), a.gamma, target) {
            Ok(x) => x,
            Err(Error::AmplifyBudget { what, needed, budget, chain }) => {
                if let Some(path) = &a.report {
                    write_json(path, &json!({"type": "amplify_report", "complete": false, "chain": chain}))?;
                }
                return Err(Failure::Lib(Error::AmplifyBudget { what, needed, budget, chain }));
            }
            Err(e) => return Err(e.into()),
        }
    };
    let chain = serde_json::to_value(&reports).expect("reports serialize");
    ctx.step("amplify", t, json!({"chain": chain}));
    if let Some(last) = reports.last() {
        println!("k' = {}, claimed gamma' = {:.6}, {} composition(s)", last.k_prime, last.gamma_prime, reports.len());
    } else {
        println!("target already met; no composition");
    }
    save(&a.output, out.into())?;
    if let Some(path) = &a.report {
        write_json(path, &json!({"type": "amplify_report", "complete": true, "chain": chain}))?;
    }
    Ok(())
}

fn bridge(ctx: &mut Ctx, cmd: &BridgeCmd) -> Run {
    let t = Instant::now();
    match cmd {
        BridgeCmd::MldToNcp { inst, gamma, output, report } => {
            let (out, rep) = mld_to_ncp(&load_flat(inst)?, *gamma)?;
            let rep = serde_json::to_value(&rep).expect("report serializes");
            ctx.step("bridge.mld_to_ncp", t, rep.clone());
            save(output, out.into())?;
            if let Some(p) = report {
                write_json(p, &rep)?;
            }
            Ok(())
        }
        BridgeCmd::NcpToMld { inst, output, report } => {
            let input = match read_artifact(inst)? {
                Artifact::Ncp(n) => n,
                other => return Err(wrong_type(inst, "ncp", &other)),
            };
            let (out, rep) = ncp_to_mld(&input)?;
            let rep = serde_json::to_value(&rep).expect("report serializes");
            ctx.step("bridge.ncp_to_mld", t, rep.clone());
            if !rep["dropped"].as_array().is_some_and(Vec::is_empty) {
                println!("dropped dependent generators: {}", rep["dropped"]);
            }
            save(output, out.into())?;
            if let Some(p) = report {
                write_json(p, &rep)?;
            }
            Ok(())
        }
        BridgeCmd::ForceUnit { inst, output } => {
            let out = force_unit_coefficients(&load_colored(inst)?);
            ctx.step("bridge.force_unit", t, json!({"k": out.k(), "d": out.d()}));
            save(output, out.into())
        }
    }
}

fn solve(ctx: &mut Ctx, a: &SolveArgs) -> Run {
    let t = Instant::now();
    let witness: Option<Witness> = match read_artifact(&a.inst)? {
        Artifact::Ncp(inst) => {
            let sol = exact_ncp_min(&inst, ctx.budget)?;
            println!("NCP minimum distance {}", sol.distance);
            ctx.step("solve", t, json!({"distance": sol.distance, "coeffs": sol.coeffs}));
            None
        }
        Artifact::ColoredMld(inst) if a.colored => {
            let w = colored_solution(&inst, ColoredMode::Unit, ctx.budget)?;
            match &w {
                Some(_) => println!("one-per-class unit solution found"),
                None => println!("no one-per-class unit solution"),
            }
            ctx.step("solve", t, json!({"colored": true, "found": w.is_some()}));
            w
        }
        other => {
            let inst = match other {
                Artifact::Mld(m) => m,
                Artifact::ColoredMld(c) => colored_to_uncolored(&c),
                other => return Err(wrong_type(&a.inst, "mld, colored_mld or ncp", &other)),
            };
            let cap = a.cap.unwrap_or(inst.vectors().len());
            let r = exact_mld_min(&inst, cap, ctx.budget)?;
            let (summary, w) = match r {
                MldSearch::Found { weight, witness } => (format!("MLD minimum {weight}"), Some(witness)),
                MldSearch::NoneUpTo { cap } => (format!("no solution of size <= {cap}"), None),
                MldSearch::NoneAtAnySize => ("no solution at any size".to_string(), None),
            };
            println!("{summary}");
            ctx.step("solve", t, json!({"cap": cap, "result": summary}));
            w
        }
    };
    if let (Some(path), Some(w)) = (&a.witness_out, witness) {
        save(path, w.into())?;
    }
    Ok(())
}

fn certify(ctx: &mut Ctx, a: &CertifyArgs) -> Run {
    let inst = load_flat(&a.inst)?;
    let k = a.k.unwrap_or(inst.k());
    let t = Instant::now();
    let mut card = certify_gap(&inst, k, a.gamma, ctx.budget)?;
    card.instance_id = a.id.clone();
    let art = Artifact::from(card.clone());
    ctx.step("certify", t, art.to_json());
    let min = card.exact_min.map_or("none".to_string(), |m| m.to_string());
    println!("class {} (k={k}, gamma={}, exact_min={min}, searched up to {})", card.class.as_str(), a.gamma, card.size_cap);
    if let Some(path) = &a.output {
        save(path, art)?;
    }
    if let Some(want) = &a.expect {
        let want = GapClass::parse(want)
            .ok_or_else(|| Failure::Lib(Error::Input(format!("unknown class {want:?}"))))?;
        if want != card.class {
            return Err(Failure::Check(format!("expected {}, got {}", want.as_str(), card.class.as_str())));
        }
    }
    match card.class {
        GapClass::BudgetExceeded => Err(Failure::Lib(Error::Budget {
            what: "gap certification".into(),
            needed: ctx.budget.saturating_add(1),
            budget: ctx.budget,
        })),
        GapClass::Neither => Err(Failure::Check("instance lies inside the gap".into())),
        _ => Ok(()),
    }
}

fn verify(ctx: &mut Ctx, a: &VerifyArgs) -> Run {
    let w = match read_artifact(&a.witness)? {
        Artifact::Witness(w) => w,
        other => return Err(wrong_type(&a.witness, "witness", &other)),
    };
    let t = Instant::now();
    let check = match read_artifact(&a.inst)? {
        Artifact::ColoredMld(c) => verify_witness(&c, &w)?,
        Artifact::Mld(m) => verify_witness(&m, &w)?,
        other => return Err(wrong_type(&a.inst, "mld or colored_mld", &other)),
    };
    ctx.step(
        "verify",
        t,
        json!({"valid": check.valid, "weight": check.weight, "one_per_class_unit": check.one_per_class_unit}),
    );
    let shape = match check.one_per_class_unit {
        Some(true) => ", one per class with unit coefficients",
        _ => "",
    };
    if check.valid {
        println!("valid witness of weight {}{shape}", check.weight);
        Ok(())
    } else {
        Err(Failure::Check(format!("witness of weight {} does not sum to the target", check.weight)))
    }
}

fn budget_from_env() -> Result<u128, Failure> {
    match std::env::var("GAPFORGE_BUDGET") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Lib(Error::Input(format!("GAPFORGE_BUDGET is not an integer: {s:?}")))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn run(cli: Cli, argv: Vec<String>) -> Run {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Failure::Lib(Error::Internal(e.to_string())))?;
    }
    let budget = match cli.budget {
        Some(b) => b,
        None => budget_from_env()?,
    };
    let config = json!({"argv": argv, "budget": budget.to_string(), "threads": cli.threads});
    let mut ctx = Ctx {
        budget,
        report: RunReport::new(config),
    };
    let result = match &cli.command {
        Command::Gen(a) => gen(&mut ctx, a),
        Command::Code(c) => code(&mut ctx, c),
        Command::Reduce(c) => reduce(&mut ctx, c),
        Command::Amplify(a) => amplify(&mut ctx, a),
        Command::Bridge(c) => bridge(&mut ctx, c),
        Command::Solve(a) => solve(&mut ctx, a),
        Command::Certify(a) => certify(&mut ctx, a),
        Command::Verify(a) => verify(&mut ctx, a),
    };
    if let Some(path) = &cli.run_report {
        write_json(path, &ctx.report.to_json())?;
    }
    result
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli, argv.into_iter().skip(1).collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("gapforge: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
