use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zetamoments::arith::{load_or_build, ArithTable};
use zetamoments::conjecture::{
    a_k, conjectured_moment, dirichlet_poly_moment_prediction, estermann_factorize, g_k, LocalFactorSeries,
};
use zetamoments::dirichlet::{zeta_afe, zeta_squared_afe, DirichletPolynomial};
use zetamoments::moments::{self, run_moment, Evaluator, MainTermKind, MomentPreset, PRESETS};
use zetamoments::perron::{
    choose_truncation, compare_sum_asymptotic, main_term_from_pole, main_terms, perron_kernel, perron_sum_estimate,
    series_catalog, SumWeight,
};
use zetamoments::quad::QuadratureConfig;
use zetamoments::special::{chi_exact, zeta_reference, zeta_truncated_sum};
use zetamoments::verify::{run_criterion, CRITERIA};
use zetamoments::{ComplexValue, Error};

use crate::output::{Cell, Format, Report};
use crate::{Command, Context, Failure};

pub struct Outcome {
    pub report: Report,
    /// Human-oriented rendering used instead of the table format, if any.
    pub text: Option<String>,
    pub exit_code: u8,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, text: None, exit_code: 0 }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::from(Error::InvalidConfig(msg.into()))
}

pub fn dispatch(cmd: &Command, ctx: &Context) -> CmdResult {
    match cmd {
        Command::Eval(a) => eval(a),
        Command::Moment(a) => moment(a),
        Command::Polymean(a) => polymean(a, ctx),
        Command::Perron(a) => perron(&a.mode),
        Command::Asym(a) => asym(a),
        Command::Conj(a) => conj(a),
        Command::Factorize(a) => factorize(a),
        Command::VerifyAll(a) => verify_all(a, ctx),
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(text: &str) -> Result<ComplexValue, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse {text:?} as a complex number");
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| ComplexValue::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    Ok(ComplexValue::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalMethod {
    Reference,
    Afe,
    /// ζ² by its approximate functional equation.
    AfeSquared,
    /// Σ_{n≤T} n^{−s} − T^{1−s}/(1−s), with T from --cutoff.
    Truncated,
    /// χ(s) in ζ(s) = χ(s)ζ(1−s).
    Chi,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Point such as 0.5+100i.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub s: ComplexValue,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "reference")]
    pub method: Vec<EvalMethod>,
    /// Cutoff T for the truncated sum (default max(2|t|, 10)).
    #[arg(long)]
    pub cutoff: Option<f64>,
}

fn eval(a: &EvalArgs) -> CmdResult {
    let mut report = Report::new(&["method", "quantity", "value", "abs_diff"]);
    let mut first: Option<(ComplexValue, bool)> = None;
    for &m in &a.method {
        let (value, squared, name) = match m {
            EvalMethod::Reference => (zeta_reference(a.s)?, false, "zeta"),
            EvalMethod::Afe => (zeta_afe(a.s)?, false, "zeta"),
            EvalMethod::AfeSquared => (zeta_squared_afe(a.s)?, true, "zeta^2"),
            EvalMethod::Truncated => {
                let cutoff = a.cutoff.unwrap_or((2.0 * a.s.im.abs()).max(10.0));
                (zeta_truncated_sum(a.s, cutoff)?, false, "zeta")
            }
            EvalMethod::Chi => (chi_exact(a.s)?, false, "chi"),
        };
        let diff = match first {
            None => {
                first = Some((value, squared));
                0.0
            }
            Some((f, f_sq)) => match (f_sq, squared) {
                (false, true) => (value - f * f).norm(),
                (true, false) => (value * value - f).norm(),
                _ => (value - f).norm(),
            },
        };
        let method = m.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
        report.push(vec![method.into(), name.into(), value.into(), diff.into()]);
    }
    Ok(report.into())
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    /// Named preset; `--list` shows them.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub list: bool,
    /// Upper limits T (comma separated).
    #[arg(long = "t", value_delimiter = ',')]
    pub t: Vec<f64>,
    /// Exponent 2k (1 for the signed first moment).
    #[arg(long, default_value_t = 2)]
    pub twok: u32,
    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,
    #[arg(long, default_value = "reference")]
    pub evaluator: String,
    /// Main term: second-refined, second-refined-scaled, second,
    /// second-off-line, fourth or first.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long, default_value_t = 1e-4)]
    pub abs_tol: f64,
    /// Panel width (default π/(2 log T), or π/log T for the first moment).
    #[arg(long)]
    pub panel_width: Option<f64>,
    #[arg(long, default_value_t = 50_000_000)]
    pub max_evals: usize,
}

fn moment(a: &MomentArgs) -> CmdResult {
    if a.list {
        let mut r = Report::new(&["preset", "kind", "twok", "sigma", "T", "evaluator"]);
        for p in PRESETS {
            r.push(vec![p.name.into(), p.kind.name().into(), p.twok.into(), p.sigma.into(), p.t.into(), p.evaluator.name().into()]);
        }
        return Ok(r.into());
    }
    let p = match &a.preset {
        Some(name) => moments::preset(name)?,
        None => {
            let evaluator: Evaluator = a.evaluator.parse()?;
            let kind = match &a.kind {
                Some(k) => k.parse()?,
                None if a.twok == 1 => MainTermKind::First,
                None if a.twok == 4 => MainTermKind::Fourth,
                None if a.sigma != 0.5 => MainTermKind::OffLineSecond,
                None => MainTermKind::RefinedSecond,
            };
            if a.twok == 1 && a.sigma != 0.5 {
                return Err(invalid("the signed first moment is only defined on sigma = 1/2"));
            }
            MomentPreset { name: "custom", kind, sigma: a.sigma, t: 2000.0, twok: a.twok, evaluator }
        }
    };
    let heights = if a.t.is_empty() { vec![p.t] } else { a.t.clone() };
    let mut r = Report::new(&["preset", "kind", "twok", "sigma", "T", "computed", "predicted", "ratio", "evals"]);
    for &t in &heights {
        if !(t >= 10.0) || !t.is_finite() {
            return Err(Failure::from(Error::Domain(format!("T = {t} must be at least 10"))));
        }
        let width = a.panel_width.unwrap_or(if p.twok == 1 { PI / t.ln() } else { PI / (2.0 * t.ln()) });
        let mut cfg = QuadratureConfig::for_height(t, a.abs_tol).with_panel_width(width);
        cfg.max_evals = a.max_evals;
        let m = run_moment(&p, t, &cfg)?;
        let computed = match m.computed {
            moments::Computed::Real(v) => Cell::Float(v),
            moments::Computed::Complex(z) => Cell::Complex(z),
        };
        let twok = if m.twok == 1 { Cell::from("signed-first") } else { Cell::from(m.twok) };
        r.push(vec![
            p.name.into(),
            m.kind.name().into(),
            twok,
            m.sigma.into(),
            m.t.into(),
            computed,
            m.predicted.into(),
            m.ratio.into(),
            m.evals.into(),
        ]);
    }
    Ok(r.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// a_n = n^{−1/2}
    InverseSqrt,
    /// a_n = d_k(n) n^{−1/2}
    Dk,
    /// Uniform complex coefficients in the unit square, from --seed.
    Random,
}

#[derive(Debug, Args)]
pub struct PolymeanArgs {
    #[arg(long, value_enum, default_value = "inverse-sqrt")]
    pub family: Family,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Length N (default: N = T).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "t", value_delimiter = ',', required = true)]
    pub t: Vec<f64>,
}

fn polymean(a: &PolymeanArgs, ctx: &Context) -> CmdResult {
    let mut r = Report::new(&["family", "k", "N", "T", "main", "cross", "total", "mv_envelope", "predicted", "ratio"]);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for &t in &a.t {
        if !(t >= 1.0) || t > 1e7 {
            return Err(Failure::from(Error::Domain(format!("T = {t} must lie in [1, 1e7]"))));
        }
        let n = a.n.unwrap_or(t as usize).max(1);
        let (p, k) = match a.family {
            Family::InverseSqrt => (DirichletPolynomial::inverse_sqrt(n)?, Some(1)),
            Family::Dk => {
                if a.k == 0 {
                    return Err(invalid("--k must be positive"));
                }
                (DirichletPolynomial::from_table_over_sqrt(&ArithTable::sieve_dk(a.k, n)?, n)?, Some(a.k))
            }
            Family::Random => {
                let c = (0..n).map(|_| ComplexValue::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                (DirichletPolynomial::new(c)?, None)
            }
        };
        let b = p.second_moment_exact(t)?;
        let predicted = match k {
            Some(k) if t >= 10.0 => dirichlet_poly_moment_prediction(k, t)?,
            _ => f64::NAN,
        };
        let k_cell = k.map_or(Cell::from("-"), Cell::from);
        r.push(vec![
            a.family.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default().into(),
            k_cell,
            n.into(),
            t.into(),
            b.main.into(),
            b.cross.into(),
            b.total.into(),
            p.mv_envelope().into(),
            predicted.into(),
            (b.total / predicted).into(),
        ]);
    }
    Ok(r.into())
}

#[derive(Debug, Subcommand)]
pub enum PerronMode {
    /// (1/2πi)∫_{1−iY}^{1+iY} A^s s^{−N} ds.
    Kernel {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 1e4)]
        y: f64,
    },
    /// Truncated Perron integral for a catalog series at half-integer X.
    Sum {
        #[arg(long)]
        series: String,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        sigma: f64,
        /// Height Y; chosen from --tol when omitted.
        #[arg(long)]
        y: Option<f64>,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        #[arg(long, default_value_t = 1e4)]
        y_max: f64,
    },
    /// Residue polynomials for every pole of a catalog series.
    Residue {
        #[arg(long)]
        series: String,
    },
}

fn perron(mode: &PerronMode) -> CmdResult {
    match mode {
        PerronMode::Kernel { a, n, y } => {
            let v = perron_kernel(*a, *y, *n)?;
            let limit = if *a > 1.0 { a.ln().powi(*n as i32 - 1) / (1..*n).map(f64::from).product::<f64>() } else { 0.0 };
            let mut r = Report::new(&["A", "N", "Y", "value", "limit", "abs_diff"]);
            let limit_cell = if *n >= 2 { Cell::from(limit) } else { Cell::from("-") };
            r.push(vec![(*a).into(), (*n).into(), (*y).into(), v.into(), limit_cell, (v.re - limit).abs().into()]);
            Ok(r.into())
        }
        PerronMode::Sum { series, x, sigma, y, tol, y_max } => {
            let f = series_catalog(series)?;
            let (height, bound, met) = match y {
                Some(y) => {
                    let t = choose_truncation(&f, *x, *sigma, *tol, f64::MAX).ok();
                    (*y, t.map_or(f64::NAN, |t| t.bound * t.y / y), t.is_some_and(|t| t.y <= *y))
                }
                None => {
                    let t = choose_truncation(&f, *x, *sigma, *tol, *y_max)?;
                    (t.y, t.bound, t.achieved)
                }
            };
            let v = perron_sum_estimate(&f, *x, *sigma, height)?;
            let mut r = Report::new(&["series", "X", "sigma", "Y", "estimate", "truncation_bound", "tolerance_met"]);
            r.push(vec![f.name.into(), (*x).into(), (*sigma).into(), height.into(), v.into(), bound.into(), met.into()]);
            Ok(r.into())
        }
        PerronMode::Residue { series } => {
            let f = series_catalog(series)?;
            let exponent = f.growth_hint().error_exponent(f.abscissa, f.sigma_left);
            let mut r = Report::new(&["series", "pole", "order", "x_power", "log_power", "coefficient", "error_exponent"]);
            for p in main_terms(&f)? {
                for (j, c) in p.coeffs.iter().enumerate() {
                    r.push(vec![
                        f.name.clone().into(),
                        p.source_pole.location.into(),
                        p.source_pole.order.into(),
                        p.x_power.into(),
                        j.into(),
                        (*c).into(),
                        exponent.into(),
                    ]);
                }
            }
            Ok(r.into())
        }
    }
}

#[derive(Debug, Args)]
pub struct AsymArgs {
    /// dk_pow(k), dk_over_n(k), d2, d2_over_n, phi or zeta.
    #[arg(long)]
    pub series: String,
    /// Grid of X values (comma separated).
    #[arg(long = "x", value_delimiter = ',', required = true)]
    pub x: Vec<f64>,
    /// Compare against the highest pole's leading term only.
    #[arg(long)]
    pub leading_only: bool,
}

/// Cache directory for sieved tables.
pub const CACHE_ENV: &str = "ZETAMOMENTS_CACHE_DIR";

fn cached(name: &str, n: usize, build: impl FnOnce() -> zetamoments::Result<ArithTable>) -> zetamoments::Result<ArithTable> {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => load_or_build(&PathBuf::from(dir), name, n, build),
        _ => build(),
    }
}

fn parse_arg(name: &str, head: &str) -> Option<u32> {
    name.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()
}

fn asym(a: &AsymArgs) -> CmdResult {
    let f = series_catalog(&a.series)?;
    let n = a.x.iter().cloned().fold(0.0f64, f64::max);
    if !(2.0..=1e8).contains(&n) {
        return Err(Failure::from(Error::GridOutOfRange { x: n, n: 100_000_000 }));
    }
    let n = n.floor() as usize;
    let (table, weight) = if let Some(k) = parse_arg(&a.series, "dk_pow") {
        (cached(&format!("d{k}"), n, || ArithTable::sieve_dk(k, n))?, SumWeight::One)
    } else if let Some(k) = parse_arg(&a.series, "dk_over_n") {
        (cached(&format!("d{k}"), n, || ArithTable::sieve_dk(k, n))?, SumWeight::InverseN)
    } else {
        match a.series.as_str() {
            "zeta" => (ArithTable::ones(n)?, SumWeight::One),
            "d2" => (cached("d2sq", n, || ArithTable::sieve_dk(2, n)?.squared())?, SumWeight::One),
            "d2_over_n" => (cached("d2sq", n, || ArithTable::sieve_dk(2, n)?.squared())?, SumWeight::InverseN),
            "phi" => (cached("phi", n, || ArithTable::sieve_phi(n))?, SumWeight::One),
            other => return Err(invalid(format!("series {other:?} has no integer coefficient table"))),
        }
    };
    let terms = if a.leading_only {
        let top = f.poles.iter().copied().fold(None::<zetamoments::perron::Pole>, |best, p| match best {
            Some(b) if b.location >= p.location => Some(b),
            _ => Some(p),
        });
        match top {
            Some(p) => {
                let mut t = main_term_from_pole(&f, p)?;
                let lead = t.leading();
                t.coeffs = vec![0.0; t.degree()];
                t.coeffs.push(lead);
                vec![t]
            }
            None => vec![],
        }
    } else {
        main_terms(&f)?
    };
    let rows = compare_sum_asymptotic(&table, weight, &terms, &a.x)?;
    let mut r = Report::new(&["series", "X", "sum", "predicted", "residual"]);
    for row in rows {
        r.push(vec![f.name.clone().into(), row.x.into(), row.sum.into(), row.predicted.into(), row.residual.into()]);
    }
    Ok(r.into())
}

/// Inclusive range `a..b` or list `a,b,c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KList(pub Vec<u32>);

fn parse_klist(text: &str) -> Result<KList, String> {
    parse_range(text).map(KList)
}

fn parse_range(text: &str) -> Result<Vec<u32>, String> {
    let bad = || format!("cannot parse {text:?}; use a..b or a list like 1,2,3");
    if let Some((lo, hi)) = text.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok((lo..=hi).collect())
    } else {
        text.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect()
    }
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("what").required(true).args(["gk", "ak", "moment"])))]
pub struct ConjArgs {
    /// g_k for an inclusive range like 0..6 or a list.
    #[arg(long, value_parser = parse_klist)]
    pub gk: Option<KList>,
    /// a_k for a range or list of k.
    #[arg(long, value_parser = parse_klist)]
    pub ak: Option<KList>,
    /// Conjectured 2k-th moment for a range or list of k.
    #[arg(long, value_parser = parse_klist)]
    pub moment: Option<KList>,
    #[arg(long, default_value_t = zetamoments::conjecture::DEFAULT_PRIME_CUTOFF)]
    pub prime_cutoff: u64,
    /// Fail when the a_k tail bound exceeds this relative tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "t", default_value_t = 1000.0)]
    pub t: f64,
}

fn conj(a: &ConjArgs) -> CmdResult {
    if let Some(KList(ks)) = &a.gk {
        let mut r = Report::new(&["k", "g_k", "exact", "float"]);
        for &k in ks {
            let g = g_k(k)?;
            let value = if g.is_integer() { g.numer().to_string() } else { g.to_string() };
            r.push(vec![k.into(), value.into(), g.to_string().into(), g.to_f64().into()]);
        }
        return Ok(r.into());
    }
    if let Some(KList(ks)) = &a.ak {
        let mut r = Report::new(&["k", "prime_cutoff", "a_k", "log_tail", "relative_tail"]);
        for &k in ks {
            let v = a_k(k, a.prime_cutoff, a.tol)?;
            r.push(vec![k.into(), (v.prime_cutoff as i64).into(), v.value.into(), v.log_tail.into(), v.relative_tail().into()]);
        }
        return Ok(r.into());
    }
    let ks = a.moment.as_ref().map_or(&[][..], |k| &k.0[..]);
    let mut r = Report::new(&["k", "T", "g_k", "a_k", "conjectured_moment", "dirichlet_prediction"]);
    for &k in ks {
        let g = g_k(k)?;
        let ak = a_k(k, a.prime_cutoff, a.tol)?.value;
        r.push(vec![
            k.into(),
            a.t.into(),
            g.to_string().into(),
            ak.into(),
            conjectured_moment(k, a.t)?.into(),
            dirichlet_poly_moment_prediction(k, a.t)?.into(),
        ]);
    }
    Ok(r.into())
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["coeffs", "family"])))]
pub struct FactorizeArgs {
    /// Local coefficients c_0 = 1, c_1, … (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Option<Vec<i64>>,
    /// dk:K for d_K(p^j) or dk2:K for d_K(p^j)².
    #[arg(long)]
    pub family: Option<String>,
    /// Number of coefficients J for --family.
    #[arg(long, default_value_t = 8)]
    pub j: usize,
}

fn factorize(a: &FactorizeArgs) -> CmdResult {
    let f = match (&a.coeffs, &a.family) {
        (Some(c), _) => LocalFactorSeries::from_i64(c)?,
        (None, Some(fam)) => {
            let (head, k) = fam.split_once(':').ok_or_else(|| invalid(format!("family {fam:?} must look like dk:3")))?;
            let k: u32 = k.parse().map_err(|_| invalid(format!("bad k in {fam:?}")))?;
            if a.j < 2 || a.j > 200 || k == 0 {
                return Err(invalid("need 2 <= J <= 200 and k >= 1"));
            }
            match head {
                "dk" => LocalFactorSeries::dk(k, a.j),
                "dk2" => LocalFactorSeries::dk_squared(k, a.j),
                other => return Err(invalid(format!("unknown family {other:?}"))),
            }
        }
        (None, None) => return Err(invalid("give --coeffs or --family")),
    };
    let z = estermann_factorize(&f);
    let mut r = Report::new(&["j", "input", "exponent", "remainder"]);
    for j in 0..f.len() {
        let exponent = if j == 0 { Cell::from("-") } else { Cell::from(z.exponents[j - 1].to_string()) };
        r.push(vec![j.into(), f.coeffs()[j].to_string().into(), exponent, z.remainder[j].to_string().into()]);
    }
    Ok(r.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    /// Desk-scale parameters, a few minutes on one core.
    Desk,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "desk")]
    pub profile: Profile,
    /// Run only these criteria (comma separated ids).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u32>,
}

fn verify_all(a: &VerifyArgs, ctx: &Context) -> CmdResult {
    let ids: Vec<u32> = if a.only.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { a.only.clone() };
    let mut r = Report::new(&["id", "criterion", "check", "passed", "decides", "detail"]);
    let mut text = String::new();
    let mut failed = 0;
    for id in ids {
        let o = run_criterion(id, ctx.seed)?;
        if ctx.format == Format::Table {
            eprint!("{}", o.render());
        }
        text.push_str(&o.render());
        if !o.passed() {
            failed += 1;
        }
        for c in &o.checks {
            r.push(vec![
                id.into(),
                o.name.into(),
                c.label.clone().into(),
                c.passed.into(),
                (!c.informational).into(),
                c.detail.clone().into(),
            ]);
        }
    }
    text.push_str(&format!("{failed} criteria failed\n"));
    // Table output streams to stderr as each criterion finishes.
    let text = if ctx.format == Format::Table { format!("{failed} criteria failed\n") } else { text };
    Ok(Outcome { report: r, text: Some(text), exit_code: u8::from(failed > 0) })
}
