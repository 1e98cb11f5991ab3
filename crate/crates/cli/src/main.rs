use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use deepball::constructions::{
    construct_composite, construct_thm12, construct_thm13, smallest_feasible_thm12, smallest_feasible_thm13,
    verify_record, CompositeMode, ConstructionError, ConstructionRecord, GForm,
};
use deepball::deep_ball::{build_center, CenterRecord, DeepBallError, DeepBallParams};
use deepball::dlog::{dlog, dlog_bruteforce, relations_to_text, DlogError, DlogInstance};
use deepball::factor_oracle::{
    count_all_dp, count_factorizations, dual_transform, n_formula, OracleError,
};
use deepball::field::standard_tower;
use deepball::rs_code::{BruteForceDecoder, RsError, DEFAULT_CAP};
use deepball::verify::{run_suite, Limits};
use deepball::{FieldCtx, FieldError, Poly};

#[derive(Parser)]
#[command(name = "deepball", version, about = "Dense Hamming-ball centers for Reed-Solomon codes and the decoding-to-discrete-log reduction")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field tower information
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Build or check a center record
    Center {
        #[command(subcommand)]
        cmd: CenterCmd,
    },
    /// Codewords in the ball around a center
    Ball {
        #[command(subcommand)]
        cmd: BallCmd,
    },
    /// Factorizations into distinct linear factors
    Factor {
        #[command(subcommand)]
        cmd: FactorCmd,
    },
    /// The dual map between g- and (q-g)-factorizations
    Dual {
        #[command(subcommand)]
        cmd: DualCmd,
    },
    /// Discrete logarithm through the decoding reduction
    Dlog(DlogArgs),
    /// Explicit parameter families
    Construct {
        #[command(subcommand)]
        cmd: ConstructCmd,
    },
    /// Run invariant suites
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Characteristic
    #[arg(long)]
    p: u64,
    /// Degree of F_q over F_p
    #[arg(long, default_value_t = 1)]
    ext_deg: usize,
    /// Degree of h(x) over F_q
    #[arg(long = "h-deg", alias = "h")]
    h_deg: Option<usize>,
}

#[derive(Subcommand)]
enum FieldCmd {
    Info(FieldArgs),
}

#[derive(Args)]
struct CenterArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Number of linear factors
    #[arg(long)]
    g: usize,
    /// Coefficients of f over F_q as canonical indices, constant term first
    #[arg(long, default_value = "1")]
    f: String,
}

#[derive(Subcommand)]
enum CenterCmd {
    Build {
        #[command(flatten)]
        args: CenterArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Check {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum BallCmd {
    Count {
        #[command(flatten)]
        args: CenterArgs,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
}

#[derive(Subcommand)]
enum FactorCmd {
    Count {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        g: usize,
        /// Canonical index of beta in F_{q^h}
        #[arg(long)]
        beta: u64,
    },
    Table {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DualCmd {
    Check {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        g: usize,
    },
}

#[derive(Args)]
struct DlogArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    g: usize,
    /// Canonical index of the target in F_{q^h}
    #[arg(long)]
    target_index: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relations per solve attempt (default q + 8)
    #[arg(long)]
    relations: Option<usize>,
    #[arg(long, default_value_t = 5)]
    retries: usize,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Write the relation log here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Rate-c family over q = q1^2
    Thm12 {
        /// Index of q1 among prime powers; smallest feasible if omitted
        #[arg(long)]
        i: Option<u64>,
        #[arg(long, default_value = "1/2")]
        c: String,
        #[arg(long, default_value_t = 2000)]
        max_i: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relative-radius family
    Thm13 {
        #[arg(long)]
        i: Option<u64>,
        #[arg(long, default_value = "3/4")]
        rho: String,
        /// Lower bound on g: "2/eps" or "4/eps"
        #[arg(long, default_value = "2/eps")]
        form: String,
        #[arg(long, default_value_t = 50)]
        max_i: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// General q = q1^m
    Composite {
        #[arg(long)]
        q1: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        c: String,
        #[arg(long)]
        h: usize,
        /// Fixed eps for strict mode; searched if omitted
        #[arg(long)]
        eps: Option<String>,
        /// Record failing inequalities as waivers instead of refusing
        #[arg(long)]
        demo: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive every claim of a record file
    Check {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// field, rs, deep-ball, partition, duality, dlog, all or none
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 49)]
    max_order: u64,
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    /// exit 1
    Runtime(String),
    /// exit 2
    Domain(String),
    /// exit 3
    Unsatisfiable(String),
}

type Out = Result<String, Failure>;

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<RsError> for Failure {
    fn from(e: RsError) -> Self {
        match e {
            RsError::Field(f) => f.into(),
            e => Failure::Domain(e.to_string()),
        }
    }
}

impl From<DeepBallError> for Failure {
    fn from(e: DeepBallError) -> Self {
        match e {
            DeepBallError::InvalidParams(_) | DeepBallError::BadFactorSet(_) => Failure::Domain(e.to_string()),
            DeepBallError::Field(f) => f.into(),
            DeepBallError::Rs(r) => r.into(),
            e => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Field(f) => f.into(),
            e => Failure::Domain(e.to_string()),
        }
    }
}

impl From<DlogError> for Failure {
    fn from(e: DlogError) -> Self {
        match e {
            DlogError::InvalidInstance(_) | DlogError::ExponentOutOfRange { .. } | DlogError::CapExceeded(_) => {
                Failure::Domain(e.to_string())
            }
            DlogError::Field(f) => f.into(),
            DlogError::DeepBall(d) => d.into(),
            DlogError::Rs(r) => r.into(),
            e => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::ConstraintUnsatisfiable { .. } => Failure::Unsatisfiable(e.to_string()),
            ConstructionError::InvalidArgument(_) => Failure::Domain(e.to_string()),
            ConstructionError::Field(f) => f.into(),
            ConstructionError::DeepBall(d) => d.into(),
            ConstructionError::Oracle(o) => o.into(),
            e => Failure::Runtime(e.to_string()),
        }
    }
}

fn rational(name: &str, s: &str) -> Result<BigRational, Failure> {
    BigRational::from_str(s.trim()).map_err(|_| Failure::Domain(format!("--{name}: expected a rational like 1/2, got {s:?}")))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Runtime(format!("writing {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Runtime(format!("reading {}: {e}", path.display())))
}

fn tower(a: &FieldArgs, need_h: bool) -> Result<FieldCtx, Failure> {
    if a.ext_deg == 0 {
        return Err(Failure::Domain("--ext-deg must be at least 1".into()));
    }
    if need_h && a.h_deg.is_none() {
        return Err(Failure::Domain("--h-deg is required".into()));
    }
    Ok(standard_tower(a.p, a.ext_deg, a.h_deg)?)
}

fn parse_f(base: &FieldCtx, s: &str) -> Result<Poly, Failure> {
    let idx: Vec<u64> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Failure::Domain(format!("--f: bad coefficient {t:?}"))))
        .collect::<Result<_, _>>()?;
    Ok(Poly::from_indices(base, &idx)?)
}

fn center_params(a: &CenterArgs) -> Result<DeepBallParams, Failure> {
    let ext = tower(&a.field, true)?;
    let base = ext.base().expect("h given").clone();
    Ok(DeepBallParams::new(&ext, parse_f(&base, &a.f)?, a.g)?)
}

fn levels(f: &FieldCtx) -> Vec<FieldCtx> {
    let mut v = vec![f.clone()];
    while let Some(b) = v.last().and_then(|x| x.base()).cloned() {
        v.push(b);
    }
    v.reverse();
    v
}

fn field_info(a: &FieldArgs) -> Out {
    let top = tower(a, false)?;
    let mut s = String::new();
    for (n, lvl) in levels(&top).iter().enumerate() {
        let modulus = lvl.modulus().map(|m| format!("{:?}", m.to_indices())).unwrap_or_else(|| "-".into());
        writeln!(s, "level={n} order={} degree={} modulus={modulus} generator_index={}", lvl.order(), lvl.degree(), lvl.generator().index()).unwrap();
    }
    writeln!(s, "characteristic={}", top.characteristic()).unwrap();
    writeln!(s, "order={}", top.order()).unwrap();
    Ok(s)
}

fn center_build(a: &CenterArgs, out: &Option<PathBuf>) -> Out {
    let params = center_params(a)?;
    let rec = CenterRecord::build(&params)?;
    let json = serde_json::to_string(&rec).expect("record serializes") + "\n";
    match out {
        Some(p) => {
            write_file(p, &json)?;
            Ok(format!("q={} h={} g={} k={} radius={}\nwrote {}\n", params.base().order(), params.h(), rec.g, rec.k, rec.radius, p.display()))
        }
        None => Ok(json),
    }
}

fn center_check(input: &Path) -> Out {
    let rec: CenterRecord = serde_json::from_str(&read_file(input)?).map_err(|e| Failure::Domain(format!("bad center record: {e}")))?;
    let (params, _) = rec.load().map_err(|e| Failure::Runtime(e.to_string()))?;
    Ok(format!("center record verified: q={} h={} g={} k={} radius={}\n", params.base().order(), params.h(), rec.g, rec.k, rec.radius))
}

fn ball_count(a: &CenterArgs, cap: u64) -> Out {
    let params = center_params(a)?;
    let u = build_center(&params)?;
    let code = params.code();
    let radius = params.radius();
    let list = code.list_decode_brute(&u, radius, cap)?;
    let at = list.iter().filter(|(_, d)| *d == radius).count() as u128;
    let closer = list.iter().filter(|(_, d)| *d < radius).count();
    let fact = count_factorizations(&params.target(), params.g())?;
    let mut s = String::new();
    writeln!(s, "q={} h={} g={} k={} radius={}", params.base().order(), params.h(), params.g(), params.k(), radius).unwrap();
    writeln!(s, "target_index={}", params.target().index()).unwrap();
    writeln!(s, "codewords_at_radius={at}").unwrap();
    writeln!(s, "codewords_closer={closer}").unwrap();
    writeln!(s, "factorizations={fact}").unwrap();
    let ok = at == fact && closer == 0;
    writeln!(s, "match={ok}").unwrap();
    if ok {
        Ok(s)
    } else {
        print!("{s}");
        Err(Failure::Runtime("ball count and factorization count differ".into()))
    }
}

fn factor_count(a: &FieldArgs, g: usize, beta: u64) -> Out {
    let ext = tower(a, true)?;
    let b = ext.elem(beta)?;
    let count = count_factorizations(&b, g)?;
    let q = ext.base().expect("extension").order();
    let bound = n_formula(q, g as u64, ext.degree() as u64);
    Ok(format!("beta_index={beta} g={g}\ncount={count}\nn_formula={}\nn_formula_ceil={}\n", bound, bound.ceil()))
}

fn factor_table(a: &FieldArgs, g: usize, out: &Option<PathBuf>) -> Out {
    let ext = tower(a, true)?;
    let t = count_all_dp(&ext, g)?;
    let q = ext.base().expect("extension").order();
    let bound = n_formula(q, g as u64, ext.degree() as u64);
    let (min_idx, min) = t.min_nonzero_target();
    let mut s = String::new();
    writeln!(s, "q={q} h={} g={g}", ext.degree()).unwrap();
    writeln!(s, "total={}", t.total()).unwrap();
    writeln!(s, "min_count={min} at_index={min_idx}").unwrap();
    writeln!(s, "zero_targets={}", t.zero_targets()).unwrap();
    writeln!(s, "n_formula_ceil={}", bound.ceil()).unwrap();
    writeln!(s, "min_count_ge_bound={}", num_bigint::BigInt::from(min) >= bound.ceil()).unwrap();
    match out {
        Some(p) => {
            write_file(p, &t.to_text())?;
            writeln!(s, "wrote {}", p.display()).unwrap();
        }
        None => s.push_str(&t.to_text()),
    }
    Ok(s)
}

fn dual_check(a: &FieldArgs, g: usize) -> Out {
    let ext = tower(a, true)?;
    let q = ext.base().expect("extension").order() as usize;
    if g > q {
        return Err(Failure::Domain(format!("g = {g} exceeds q = {q}")));
    }
    let direct = count_all_dp(&ext, q - g)?;
    let dual = count_all_dp(&ext, g)?;
    let mut bad = 0;
    for b in ext.elements().skip(1) {
        if direct.get(&b) != dual.get(&dual_transform(&b)?) {
            bad += 1;
        }
    }
    let s = format!("q={q} g={g} targets={}\nmismatches={bad}\nduality={}\n", ext.order() - 1, bad == 0);
    if bad == 0 {
        Ok(s)
    } else {
        print!("{s}");
        Err(Failure::Runtime("duality identity fails".into()))
    }
}

fn run_dlog(a: &DlogArgs) -> Out {
    let ext = tower(&a.field, true)?;
    let target = ext.elem(a.target_index)?;
    if target.is_zero() {
        return Err(Failure::Domain("target must be nonzero".into()));
    }
    let mut inst = DlogInstance::new(&ext, a.g, Arc::new(BruteForceDecoder { cap: a.cap }), a.seed)?;
    if let Some(r) = a.relations {
        inst.relations = r;
    }
    inst.retries = a.retries;
    inst.threads = a.threads;
    let run = dlog(&inst, &target)?;
    let q = ext.base().expect("extension").order();
    let mut s = String::new();
    writeln!(s, "field q={q} h={} order={}", ext.degree(), ext.order()).unwrap();
    writeln!(s, "base_index={} g={} seed={}", inst.base().index(), a.g, a.seed).unwrap();
    for r in &run.relations {
        writeln!(s, "relation {}", r.to_line()).unwrap();
    }
    writeln!(s, "solve modulus={} relations={} attempts={}", inst.modulus(), run.relations.len(), run.attempts).unwrap();
    for (i, l) in run.table.logs.iter().enumerate() {
        writeln!(s, "log a={i} value={l}").unwrap();
    }
    let factors: Vec<String> = run.target_factors.indices().iter().map(u64::to_string).collect();
    writeln!(s, "target_index={} shift={} factors={}", a.target_index, run.shift, factors.join(" ")).unwrap();
    writeln!(s, "answer={}", run.answer).unwrap();
    writeln!(s, "b^x == target: {}", inst.base().pow(run.answer as u128) == target).unwrap();
    if ext.order() <= 1_000_000 {
        let bf = dlog_bruteforce(inst.base(), &target)?;
        writeln!(s, "bruteforce={bf} agree={}", bf == run.answer).unwrap();
    }
    if let Some(p) = &a.out {
        write_file(p, &relations_to_text(&run.relations))?;
        writeln!(s, "wrote {}", p.display()).unwrap();
    }
    Ok(s)
}

fn summarize(rec: &ConstructionRecord) -> String {
    let mut s = String::new();
    let opt = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
    writeln!(s, "mode={}", serde_json::to_value(rec.mode).expect("mode").as_str().unwrap_or("?")).unwrap();
    writeln!(s, "i={} q={} q1={} m={} p={}", opt(rec.i), rec.q, opt(rec.q1), opt(rec.m), rec.p).unwrap();
    writeln!(s, "h={} h_poly={:?} f={:?}", rec.h, rec.h_poly, rec.f).unwrap();
    writeln!(s, "g={} g1={} g2={} center_factors={}", rec.g, opt(rec.g1), opt(rec.g2), rec.center_factors).unwrap();
    writeln!(s, "k={} radius={}", rec.k, rec.radius).unwrap();
    writeln!(s, "eps={}/{} ({}, log base {})", rec.eps.num, rec.eps.den, rec.eps_note, rec.log_base).unwrap();
    if let Some(form) = rec.g_form {
        writeln!(s, "g_form={}", serde_json::to_value(form).expect("form").as_str().unwrap_or("?")).unwrap();
    }
    for c in &rec.checks {
        writeln!(s, "check {} = {}", c.name, c.holds).unwrap();
    }
    for w in &rec.waivers {
        writeln!(s, "waived {w}").unwrap();
    }
    let neg = rec.bound.num.starts_with('-');
    if rec.bound.num.len() + rec.bound.den.len() <= 120 {
        writeln!(s, "bound={}/{}", rec.bound.num, rec.bound.den).unwrap();
    } else {
        writeln!(s, "bound_numerator_digits={} bound_denominator_digits={}", rec.bound.num.len(), rec.bound.den.len()).unwrap();
    }
    writeln!(s, "bound_positive={}", !neg && rec.bound.num != "0").unwrap();
    s
}

fn emit_record(rec: &ConstructionRecord, out: &Option<PathBuf>) -> Out {
    let mut s = summarize(rec);
    if let Some(p) = out {
        write_file(p, &(rec.to_json() + "\n"))?;
        writeln!(s, "wrote {}", p.display()).unwrap();
    }
    Ok(s)
}

fn construct(cmd: &ConstructCmd) -> Out {
    match cmd {
        ConstructCmd::Thm12 { i, c, max_i, out } => {
            let c = rational("c", c)?;
            let i = match i {
                Some(i) => *i,
                None => smallest_feasible_thm12(&c, *max_i)
                    .ok_or_else(|| Failure::Unsatisfiable(format!("no feasible i up to {max_i}")))?,
            };
            emit_record(&construct_thm12(i, &c)?, out)
        }
        ConstructCmd::Thm13 { i, rho, form, max_i, out } => {
            let rho = rational("rho", rho)?;
            let form = match form.as_str() {
                "2/eps" => GForm::TwoOverEps,
                "4/eps" => GForm::FourOverEps,
                f => return Err(Failure::Domain(format!("--form must be 2/eps or 4/eps, got {f}"))),
            };
            let i = match i {
                Some(i) => *i,
                None => smallest_feasible_thm13(&rho, form, *max_i)
                    .ok_or_else(|| Failure::Unsatisfiable(format!("no feasible i up to {max_i} ({})", form.binding())))?,
            };
            emit_record(&construct_thm13(i, &rho, form)?, out)
        }
        ConstructCmd::Composite { q1, m, c, h, eps, demo, out } => {
            let c = rational("c", c)?;
            let mode = if *demo {
                CompositeMode::Demo
            } else {
                CompositeMode::Strict(eps.as_deref().map(|e| rational("eps", e)).transpose()?)
            };
            emit_record(&construct_composite(*q1, *m, &c, *h, mode)?, out)
        }
        ConstructCmd::Check { input } => {
            let rec = ConstructionRecord::from_json(&read_file(input)?)?;
            let checks = verify_record(&rec)?;
            let mut s = String::new();
            for c in &checks {
                writeln!(s, "{} {}", if c.holds { "PASS" } else { "FAIL" }, c.name).unwrap();
            }
            if checks.iter().all(|c| c.holds) {
                Ok(s)
            } else {
                print!("{s}");
                Err(Failure::Runtime("record check failed".into()))
            }
        }
    }
}

fn verify(a: &VerifyArgs) -> Out {
    let lim = Limits { max_order: a.max_order, cap: a.cap };
    let report = run_suite(&a.suite, lim, a.q, a.seed).ok_or_else(|| Failure::Domain(format!("unknown suite {}", a.suite)))?;
    let mut s = String::new();
    for l in &report.lines {
        writeln!(s, "{l}").unwrap();
    }
    let failed = report.lines.iter().filter(|l| !l.pass).count();
    writeln!(s, "summary checks={} failed={failed}", report.lines.len()).unwrap();
    if failed == 0 {
        Ok(s)
    } else {
        print!("{s}");
        Err(Failure::Runtime(format!("{failed} checks failed")))
    }
}

fn run(cli: &Cli) -> Out {
    match &cli.cmd {
        Cmd::Field { cmd: FieldCmd::Info(a) } => field_info(a),
        Cmd::Center { cmd: CenterCmd::Build { args, out } } => center_build(args, out),
        Cmd::Center { cmd: CenterCmd::Check { input } } => center_check(input),
        Cmd::Ball { cmd: BallCmd::Count { args, cap } } => ball_count(args, *cap),
        Cmd::Factor { cmd: FactorCmd::Count { field, g, beta } } => factor_count(field, *g, *beta),
        Cmd::Factor { cmd: FactorCmd::Table { field, g, out } } => factor_table(field, *g, out),
        Cmd::Dual { cmd: DualCmd::Check { field, g } } => dual_check(field, *g),
        Cmd::Dlog(a) => run_dlog(a),
        Cmd::Construct { cmd } => construct(cmd),
        Cmd::Verify(a) => verify(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(s) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Unsatisfiable(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
