//! `glhom` command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use super::{run_suite, SuiteParams, SuiteReport, SUITE_NAMES};
use crate::error::{Error, Result};
use crate::exact::{cyclotomic, vp_int, Rational, Valuation};
use crate::exec::Exec;
use crate::groups::AbelianPGroup;
use crate::modular::{a_nk, modular_bound, modular_hom_with, ModularMethod};
use crate::nonmodular::{bound_first, bound_main, hom_counts, GenFun};
use crate::oracle::{ff_make, hom_count_with};
use crate::qseries::{
    f_series, g_series, h_series, p_poly, poly_to_json, q_catalan, q_poly, r_poly, series_to_json,
    PolyJson, QPolynomial,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "glhom", version, about = "Homomorphisms from finite Abelian p-groups into GL_n(F_q)")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Truncation order for series.
    #[arg(long, global = true, default_value_t = crate::qseries::DEFAULT_ORDER)]
    trunc: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Overrides the size of randomized or ranged suite grids.
    #[arg(long, global = true)]
    cases: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// #Hom(G, GL_n(F_q)) for p not dividing q.
    Count {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = CountMethod::Series)]
        method: CountMethod,
    },
    /// Lower bounds on v_p(#Hom) for 0 ≤ n ≤ n-max.
    Bound {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n_max: u64,
        /// Also compute the actual valuation and check the bounds against it.
        #[arg(long)]
        compare: bool,
    },
    /// Cyclic p-groups in characteristic p.
    Modular {
        #[command(subcommand)]
        command: ModularCommand,
    },
    /// Truncated generating series.
    Series {
        #[arg(value_enum)]
        kind: SeriesKind,
        /// Rational parameter for f and h; field size for gen and log-gen.
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        factors: Vec<u32>,
    },
    /// Named polynomial families.
    Poly {
        #[arg(value_enum)]
        family: PolyFamily,
        #[arg(long)]
        n: usize,
    },
    /// Runs verification suites.
    Verify {
        /// A suite name or `all`.
        #[arg(long)]
        suite: String,
    },
}

#[derive(Debug, Args)]
struct GroupArgs {
    #[arg(long)]
    p: u64,
    /// Exponents of the cyclic factors, comma separated (C_4^3 is 2,2,2).
    #[arg(long, value_delimiter = ',', required = true)]
    factors: Vec<u32>,
}

impl GroupArgs {
    fn group(&self) -> Result<AbelianPGroup> {
        AbelianPGroup::from_factors(self.p, &self.factors)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountMethod {
    Series,
    Brute,
}

#[derive(Debug, Subcommand)]
enum ModularCommand {
    /// The polynomial a_{n,k}(q).
    Poly {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ModularMethodArg::Recurrence)]
        method: ModularMethodArg,
    },
    /// #Hom(C_{p^u}, GL_n(F_{p^v})).
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        u: u32,
        #[arg(long)]
        v: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ModularMethodArg::Recurrence)]
        method: ModularMethodArg,
    },
    /// Trailing degrees of a_{n,k} against (k−1)/(k+1)·C(n,2).
    Bound {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModularMethodArg {
    Recurrence,
    Partition,
    Brute,
}

impl ModularMethodArg {
    fn algebraic(self) -> Result<ModularMethod> {
        match self {
            ModularMethodArg::Recurrence => Ok(ModularMethod::Recurrence),
            ModularMethodArg::Partition => Ok(ModularMethod::Partition),
            ModularMethodArg::Brute => Err(Error::Input("brute force only applies to `modular count`".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    F,
    H,
    G,
    #[value(name = "gen")]
    Gen,
    #[value(name = "log-gen")]
    LogGen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolyFamily {
    Catalan,
    P,
    R,
    Q,
    Cyclotomic,
}

/// Command output: a JSON value and its text rendering.
struct Output {
    json: Value,
    text: String,
    /// Set when a check embedded in the command failed.
    failed: bool,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, failed: false }
    }
}

/// Runs the CLI on `args` (program name first), writing to `out` and `err`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = with_jobs(cli.jobs, |exec| execute(&cli, exec));
    match result {
        Ok(output) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string(&output.json).expect("json") + "\n",
                Format::Text => output.text,
            };
            let _ = out.write_all(body.as_bytes());
            if output.failed {
                EXIT_FAILURE
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for an error: 2 for bad arguments and budget refusals, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::Budget(_) => EXIT_USAGE,
        Error::Internal(_) | Error::Verification(_) => EXIT_FAILURE,
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce(Exec) -> Result<T> + Send) -> Result<T> {
    match jobs {
        Some(0) => Err(Error::Input("--jobs must be at least 1".into())),
        Some(1) => f(Exec::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
            pool.install(|| f(Exec::Parallel))
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => f(Exec::Sequential),
        None => f(Exec::default()),
    }
}

fn execute(cli: &Cli, exec: Exec) -> Result<Output> {
    match &cli.command {
        Command::Count { group, q, n, method } => count(&group.group()?, *q, *n, *method, exec),
        Command::Bound { group, q, n_max, compare } => bound(&group.group()?, *q, *n_max, *compare),
        Command::Modular { command } => modular(command, exec),
        Command::Series { kind, q, p, factors } => series(*kind, q.as_deref(), *p, factors, cli.trunc, exec),
        Command::Poly { family, n } => poly(*family, *n),
        Command::Verify { suite } => {
            let params = SuiteParams { trunc: cli.trunc, seed: cli.seed, cases: cli.cases, exec };
            verify(suite, &params)
        }
    }
}

fn count(g: &AbelianPGroup, q: u64, n: usize, method: CountMethod, exec: Exec) -> Result<Output> {
    let count = match method {
        CountMethod::Series => hom_counts(g, q, n)?.pop().expect("n + 1 counts").count,
        CountMethod::Brute => {
            if q.is_multiple_of(g.p()) {
                return Err(Error::Input(format!("{} divides q = {q}; use `modular count`", g.p())));
            }
            hom_count_with(g, &field_of_size(q)?, n, exec)?
        }
    };
    let vp = vp_int(&count, g.p());
    Ok(Output::ok(
        json!({"count": count.to_string(), "vp": vp}),
        format!("#Hom({g}, GL_{n}(F_{q})) = {count}\nv_{} = {vp}\n", g.p()),
    ))
}

fn field_of_size(q: u64) -> Result<crate::oracle::FiniteField> {
    match crate::exact::factorize(q).as_slice() {
        [(p, v)] => ff_make(*p, *v),
        _ => Err(Error::Input(format!("q = {q} is not a prime power"))),
    }
}

#[derive(Serialize)]
struct BoundRow {
    n: u64,
    bound_first: i64,
    bound_main: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    actual_vp: Option<Valuation>,
    /// Equality claimed at this n by the main bound.
    tight: bool,
}

fn bound(g: &AbelianPGroup, q: u64, n_max: u64, compare: bool) -> Result<Output> {
    let first = bound_first(g, q, 0)?;
    let main = bound_main(g, q, 0)?;
    let actual = if compare { Some(hom_counts(g, q, n_max as usize)?) } else { None };
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    for n in 0..=n_max {
        let actual_vp = actual.as_ref().map(|c| c[n as usize].vp);
        let row = BoundRow { n, bound_first: first.at(n), bound_main: main.at(n), actual_vp, tight: main.tight_at(n) };
        if let Some(v) = actual_vp {
            if !v.at_least(row.bound_first) || !v.at_least(row.bound_main) {
                problems.push(format!("n = {n}: v_p = {v} is below a bound"));
            }
            if row.tight && v != Valuation::Finite(row.bound_main) {
                problems.push(format!("n = {n}: equality claimed but v_p = {v}"));
            }
        }
        rows.push(row);
    }
    let mut text = format!(
        "{g}, q = {q}: main bound {:?} with l = {}, a_l = {}; first bound l = {}, b_l = {}\n",
        main.theorem, main.l, main.coeff, first.l, first.coeff
    );
    writeln!(text, "{:>4} {:>8} {:>8} {:>8} {:>6}", "n", "first", "main", "actual", "tight").unwrap();
    for r in &rows {
        let a = r.actual_vp.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
        writeln!(text, "{:>4} {:>8} {:>8} {:>8} {:>6}", r.n, r.bound_first, r.bound_main, a, r.tight).unwrap();
    }
    for p in &problems {
        writeln!(text, "FAIL {p}").unwrap();
    }
    let json = json!({
        "group": g.to_string(),
        "p": g.p(),
        "q": q,
        "theorem": main.theorem,
        "l": main.l,
        "a_l": main.coeff,
        "first_l": first.l,
        "first_b_l": first.coeff,
        "rows": rows,
        "violations": problems,
    });
    Ok(Output { json, text, failed: !problems.is_empty() })
}

fn poly_output(p: &QPolynomial) -> Output {
    Output::ok(serde_json::to_value(poly_to_json(p)).expect("json"), format!("{p}\n"))
}

fn modular(cmd: &ModularCommand, exec: Exec) -> Result<Output> {
    match *cmd {
        ModularCommand::Poly { n, k, method } => Ok(poly_output(&a_nk(n, k, method.algebraic()?)?)),
        ModularCommand::Count { p, u, v, n, method } => {
            let mut h = modular_hom_with(p, u, v, n, ModularMethod::Recurrence)?;
            if method == ModularMethodArg::Partition {
                h = modular_hom_with(p, u, v, n, ModularMethod::Partition)?;
            }
            if method == ModularMethodArg::Brute {
                let brute = hom_count_with(&AbelianPGroup::cyclic(p, u)?, &ff_make(p, v)?, n, exec)?;
                if brute != h.count {
                    return Err(Error::Verification(format!("brute force gives {brute}, a_{{n,k}} gives {}", h.count)));
                }
                h.count = brute;
                h.vp = vp_int(&h.count, p);
            }
            let text = format!(
                "#Hom(C_{}, GL_{n}(F_{})) = {}\nv_{p} = {} (bound {}, equality expected: {})\n",
                p.pow(u),
                p.pow(v),
                h.count,
                h.vp,
                h.bound,
                h.equality_expected
            );
            Ok(Output::ok(serde_json::to_value(&h).expect("json"), text))
        }
        ModularCommand::Bound { n_max, k } => {
            let rows = (0..=n_max).map(|n| modular_bound(n, k)).collect::<Result<Vec<_>>>()?;
            let mut text = format!("{:>4} {:>10} {:>10} {:>9}\n", "n", "trailing", "bound", "equality");
            let mut failed = false;
            for r in &rows {
                writeln!(text, "{:>4} {:>10} {:>10} {:>9}", r.n, r.trailing_degree, r.bound.to_string(), r.equality).unwrap();
                failed |= r.equality_expected && !r.equality;
            }
            Ok(Output { json: json!({"k": k, "rows": rows}), text, failed })
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    s.parse::<Rational>().map_err(|_| Error::Input(format!("not a rational number: {s:?}")))
}

fn series(
    kind: SeriesKind,
    q: Option<&str>,
    p: Option<u64>,
    factors: &[u32],
    order: usize,
    exec: Exec,
) -> Result<Output> {
    let need_q = || q.ok_or_else(|| Error::Input("--q is required".into()));
    let rational = |s: crate::qseries::RationalSeries| {
        let text = s.coeffs().iter().enumerate().map(|(i, c)| format!("[{i}] {c}\n")).collect();
        Output::ok(serde_json::to_value(series_to_json(&s)).expect("json"), text)
    };
    match kind {
        SeriesKind::F => Ok(rational(f_series(&parse_rational(need_q()?)?, order)?)),
        SeriesKind::H => Ok(rational(h_series(&parse_rational(need_q()?)?, order)?)),
        SeriesKind::G => {
            let g = g_series(order);
            let coeffs: Vec<PolyJson> = g.coeffs().iter().map(poly_to_json).collect();
            let text = g.coeffs().iter().enumerate().map(|(i, c)| format!("[{i}] {c}\n")).collect();
            Ok(Output::ok(json!({"order": order, "coeffs": coeffs}), text))
        }
        SeriesKind::Gen | SeriesKind::LogGen => {
            let p = p.ok_or_else(|| Error::Input("--p is required".into()))?;
            let q: u64 = need_q()?.parse().map_err(|_| Error::Input("--q must be a prime power".into()))?;
            let gf = GenFun::with_exec(&AbelianPGroup::from_factors(p, factors)?, q, order, exec)?;
            let s = if kind == SeriesKind::Gen { gf.series() } else { gf.log_series() };
            Ok(rational(s.clone()))
        }
    }
}

fn poly(family: PolyFamily, n: usize) -> Result<Output> {
    let p = match family {
        PolyFamily::Catalan => q_catalan(n),
        PolyFamily::P => p_poly(n)?,
        PolyFamily::R => r_poly(n)?,
        PolyFamily::Q => q_poly(n)?,
        PolyFamily::Cyclotomic => cyclotomic(n as u64)?,
    };
    Ok(poly_output(&p))
}

fn verify(suite: &str, params: &SuiteParams) -> Result<Output> {
    let names: Vec<&str> = if suite == "all" { SUITE_NAMES.to_vec() } else { vec![suite] };
    let reports = names.iter().map(|n| run_suite(n, params)).collect::<Result<Vec<SuiteReport>>>()?;
    let failed = reports.iter().any(|r| !r.passed);
    let text = reports.iter().map(SuiteReport::render_text).collect();
    let json = if reports.len() == 1 {
        serde_json::to_value(&reports[0]).expect("json")
    } else {
        json!({"passed": !failed, "suites": reports})
    };
    Ok(Output { json, text, failed })
}
