//! The `hkzeta` command line.
//!
//! Exit codes: 0 success, 1 bad input or failed verification, 2 line bundle
//! not big, 3 unsupported curve or genus, 4 enumeration budget exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hkzeta_core::closedform::{
    anticanonical_zeta, component_zeta, leading_constants, q_l_formula, z_xl_product, zeta_u, QLValue, ZetaResult,
};
use hkzeta_core::counting::{count_x_direct, direct_cost, u_cost};
use hkzeta_core::curve::zeta_k_at;
use hkzeta_core::hkgeom::{alpha_star, anticanonical, classify, decompose, is_big, Component, Invariants, BETA};
use hkzeta_core::series::{asymptotics, ScaledConstant, Q};
use hkzeta_core::Error;
use serde_json::{json, Value};

use crate::format::{constant_json, q_vec_json, radical_json, FactoredJson};
use crate::job::{BundleChoice, Job, JobSpec};
use crate::parallel::count_component_parallel;

#[derive(Parser, Debug)]
#[command(name = "hkzeta", version, about = "Height zeta functions of Hirzebruch-Kleinschmidt varieties over F_q(T)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Closed-form height zeta function and its first coefficients.
    Zeta(JobArgs),
    /// Exhaustive point counts by height.
    Count(JobArgs),
    /// Compare closed forms, enumeration and constants.
    Verify(JobArgs),
    /// Pole data, leading constants and main terms of the counts.
    Asym(JobArgs),
    /// Invariants of the variety and the line bundle.
    Invariants(JobArgs),
    /// The decomposition into projective, affine and good open pieces.
    Decompose(JobArgs),
}

#[derive(Args, Debug)]
struct JobArgs {
    /// e.g. "HK(r=1,t=2;a=1)".
    #[arg(long)]
    variety: String,
    /// "gamma,xi" in the basis {h, f}.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "anticanonical")]
    bundle: Option<String>,
    #[arg(long)]
    anticanonical: bool,
    #[arg(long, default_value_t = 2)]
    q: u64,
    /// Curve data (JSON). Defaults to the rational function field F_q(T).
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Number of series coefficients to print.
    #[arg(short = 'N', long = "terms", default_value_t = 10)]
    terms: usize,
    #[arg(long, default_value_t = 0)]
    m_min: u32,
    #[arg(long, default_value_t = 4)]
    m_max: u32,
    #[arg(long)]
    csv: bool,
    /// Print one row per decomposition piece.
    #[arg(long)]
    components: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Refuse enumerations estimated to visit more parameter tuples than this.
    #[arg(long, default_value_t = 1e9)]
    budget: f64,
    /// Degree cutoff for the divisor series of Q_L.
    #[arg(long, default_value_t = 10)]
    cutoff: u32,
}

impl JobArgs {
    fn spec(&self) -> Result<JobSpec, Error> {
        let bundle = match (&self.bundle, self.anticanonical) {
            (Some(b), false) => BundleChoice::parse(b)?,
            (None, true) => BundleChoice::Anticanonical,
            (None, false) => return Err(Error::Parse("pass --bundle gamma,xi or --anticanonical".into())),
            (Some(_), true) => unreachable!("clap rejects both"),
        };
        Ok(JobSpec {
            variety: self.variety.clone(),
            bundle,
            q: self.q,
            curve: self.curve.clone(),
            terms: self.terms,
            m_min: self.m_min,
            m_max: self.m_max,
            jobs: self.jobs,
            budget: self.budget,
            cutoff: self.cutoff,
        })
    }
}

#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    /// Estimated cost and the budget it exceeded.
    Budget(f64, f64),
    Checks(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(f: &Failure) -> i32 {
    match f {
        Failure::Lib(Error::NotBig { .. }) => 2,
        Failure::Lib(Error::Unsupported(_) | Error::MissingData(_)) => 3,
        Failure::Budget(..) => 4,
        Failure::Lib(_) | Failure::Checks(_) => 1,
    }
}

/// Runs the command line on `args` (program name first), writing the report to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (cmd, args) = match &cli.cmd {
        Cmd::Zeta(a) => ("zeta", a),
        Cmd::Count(a) => ("count", a),
        Cmd::Verify(a) => ("verify", a),
        Cmd::Asym(a) => ("asym", a),
        Cmd::Invariants(a) => ("invariants", a),
        Cmd::Decompose(a) => ("decompose", a),
    };
    let result = args.spec().map_err(Failure::from).and_then(|spec| {
        let job = Job::resolve(spec)?;
        let csv = args.csv;
        match cmd {
            "zeta" => cmd_zeta(&job, csv),
            "count" => cmd_count(&job, csv, args.components),
            "verify" => cmd_verify(&job, csv),
            "asym" => cmd_asym(&job),
            "invariants" => cmd_invariants(&job),
            _ => cmd_decompose(&job),
        }
    });
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(f) => {
            if let Failure::Checks(report) = &f {
                let _ = out.write_all(report.as_bytes());
            }
            let msg = match &f {
                Failure::Lib(e) => format!("error: {e}\n"),
                Failure::Budget(cost, budget) => {
                    format!("error: estimated enumeration cost {cost:.3e} exceeds the budget {budget:.3e}\n")
                }
                Failure::Checks(_) => String::from("verification failed\n"),
            };
            let _ = err.write_all(msg.as_bytes());
            exit_code(&f)
        }
    }
}

type Out = Result<String, Failure>;

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn invariants_json(inv: &Invariants) -> Value {
    json!({
        "regime": inv.regime.to_string(),
        "A_L": inv.a_l.to_string(),
        "B_L": inv.b_l.to_string(),
        "a": inv.a.to_string(),
        "b": inv.b,
        "a_sub": inv.a_sub.to_string(),
        "eta_L": inv.eta_l,
        "c_L": inv.c_l,
    })
}

/// `(target, result)`: the zeta function of `U`, or of `X` for `a_r = 0` with an explicit bundle.
fn main_zeta(job: &Job) -> Result<(&'static str, ZetaResult), Error> {
    classify(&job.bundle, &job.variety)?;
    if job.is_anticanonical() {
        return Ok(("U", anticanonical_zeta(&job.variety, &job.curve)?));
    }
    if job.variety.a_r() > 0 {
        Ok(("U", zeta_u(&job.variety, &job.bundle, &job.curve)?))
    } else {
        Ok(("X", z_xl_product(&job.variety, &job.bundle, &job.curve)?))
    }
}

fn cmd_zeta(job: &Job, csv: bool) -> Out {
    let (target, res) = main_zeta(job)?;
    let coeffs = res.coefficients(job.spec.terms.saturating_sub(1));
    if csv {
        let mut s = String::from("M,coefficient\n");
        for (m, c) in coeffs.iter().enumerate() {
            let _ = writeln!(s, "{m},{c}");
        }
        return Ok(s);
    }
    Ok(pretty(&json!({
        "variety": job.variety.to_string(),
        "bundle": job.bundle.to_string(),
        "q": job.curve.q(),
        "genus": job.curve.genus(),
        "target": target,
        "z": FactoredJson::from_rational(&res.z),
        "coefficients": q_vec_json(&coeffs),
        "invariants": invariants_json(&res.invariants),
        "constant": constant_json(&res.constant, job.curve.q()),
    })))
}

fn check_budget(job: &Job, comps: &[Component]) -> Result<(), Failure> {
    let mut cost = 0.0;
    for c in comps {
        if let Component::Good { variety, bundle } = c {
            if variety.a_r() > 0 {
                cost += u_cost(variety, bundle, job.curve.q(), job.spec.m_max)?;
            }
        }
    }
    if cost > job.spec.budget {
        return Err(Failure::Budget(cost, job.spec.budget));
    }
    Ok(())
}

fn require_enumerable(job: &Job) -> Result<(), Error> {
    if job.curve.genus() != 0 || job.curve.field().is_none() {
        return Err(Error::Unsupported("enumeration is only available over F_q(T)".into()));
    }
    Ok(())
}

fn component_counts(job: &Job) -> Result<Vec<(Component, Vec<u64>)>, Failure> {
    require_enumerable(job)?;
    classify(&job.bundle, &job.variety)?;
    let comps = decompose(&job.variety, &job.bundle);
    check_budget(job, &comps)?;
    let mut out = Vec::new();
    for c in comps {
        let counts = count_component_parallel(&c, &job.curve, job.spec.m_max, job.spec.jobs)?;
        out.push((c, counts));
    }
    Ok(out)
}

fn totals(rows: &[(Component, Vec<u64>)], len: usize) -> Vec<u64> {
    let mut t = vec![0u64; len];
    for (_, counts) in rows {
        for (a, b) in t.iter_mut().zip(counts) {
            *a += b;
        }
    }
    t
}

fn cmd_count(job: &Job, csv: bool, components: bool) -> Out {
    let rows = component_counts(job)?;
    let total = totals(&rows, job.spec.m_max as usize + 1);
    let range = job.spec.m_min as usize..=job.spec.m_max as usize;
    let mut labelled: Vec<(String, &[u64])> = Vec::new();
    if components {
        for (c, counts) in &rows {
            labelled.push((c.to_string(), counts));
        }
    }
    labelled.push((String::from("total"), &total));
    if csv {
        let mut s = String::from("component,M,count\n");
        for (name, counts) in &labelled {
            for m in range.clone() {
                let _ = writeln!(s, "\"{name}\",{m},{}", counts[m]);
            }
        }
        return Ok(s);
    }
    let rows: Vec<Value> = labelled
        .iter()
        .flat_map(|(name, counts)| range.clone().map(move |m| json!({"component": name, "M": m, "count": counts[m]})))
        .collect();
    Ok(pretty(&json!({
        "variety": job.variety.to_string(),
        "bundle": job.bundle.to_string(),
        "q": job.curve.q(),
        "rows": rows,
    })))
}

/// One line of the `verify` report. `passed == None` means skipped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: Option<bool>,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: Some(ok), detail: detail.into() }
    }

    fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        Check { name: name.into(), passed: None, detail: why.into() }
    }
}

/// Coefficientwise comparison of a closed form against exact counts.
pub fn compare_coefficients(name: &str, closed: &[Q], counts: &[u64]) -> Check {
    let n = closed.len().min(counts.len());
    for m in 0..n {
        if closed[m] != Q::from_integer(counts[m].into()) {
            return Check::new(name, false, format!("M={m}: closed form {} vs count {}", closed[m], counts[m]));
        }
    }
    Check::new(name, closed.len() == counts.len(), format!("{n} coefficients"))
}

fn compare_constants(name: &str, extracted: &ScaledConstant, formula: &ScaledConstant) -> Check {
    Check::new(
        name,
        extracted == formula,
        format!("series {} vs formula {}", extracted, formula),
    )
}

fn projective_constant(job: &Job, n: u32, weight: i64) -> Result<ScaledConstant, Error> {
    let q = job.curve.q() as i64;
    let qn: Q = Q::from_integer(num_traits::pow(num_bigint::BigInt::from(q), n as usize + 1));
    let v = qn * Q::from_integer(job.curve.class_number().into())
        / (zeta_k_at(&job.curve, n as i64 + 1)? * Q::from_integer((q - 1).into()) * Q::from_integer(weight.into()));
    Ok(ScaledConstant::rational(v, -1))
}

/// All checks of `verify`, in report order.
pub fn verify_checks(job: &Job) -> Result<Vec<Check>, Failure> {
    let rows = component_counts(job)?;
    let mmax = job.spec.m_max as usize;
    let q = job.curve.q();
    let mut checks = Vec::new();
    for (c, counts) in &rows {
        let z = component_zeta(c, &job.curve)?;
        checks.push(compare_coefficients(&format!("coefficients {c}"), &z.expand(mmax), counts));
    }
    let total = totals(&rows, mmax + 1);
    let (x, l) = (&job.variety, &job.bundle);
    match direct_cost(x, l, q, job.spec.m_max) {
        Ok(cost) if cost <= job.spec.budget => {
            let direct = count_x_direct(x, l, &job.curve, job.spec.m_max)?;
            let ok = direct == total;
            checks.push(Check::new("partition", ok, format!("components {total:?} vs direct {direct:?}")));
        }
        Ok(cost) => checks.push(Check::skipped("partition", format!("direct enumeration cost {cost:.3e} over budget"))),
        Err(e) => checks.push(Check::skipped("partition", e.to_string())),
    }
    let (target, res) = main_zeta(job)?;
    let asy = res.asymptotics()?;
    checks.push(compare_constants(&format!("leading constant of zeta_{target}"), &asy.limit_constant(q)?, &res.constant));
    for (c, _) in &rows {
        if let Component::Projective { n, weight } | Component::Affine { n, weight } = c {
            if *n == 0 {
                continue;
            }
            let got = asymptotics(&component_zeta(c, &job.curve)?)?.limit_constant(q)?;
            checks.push(compare_constants(&format!("leading constant {c}"), &got, &projective_constant(job, *n, *weight)?));
        }
    }
    if x.r() == 1 && x.t() == 2 && x.a() == [1] && *l == hkzeta_core::hkgeom::LineBundle::new(1, 1) {
        let qq = Q::from_integer((q as i64).into());
        let one = Q::from_integer(1.into());
        let c3 = (&qq * &qq + &qq + &one) * (&qq * &qq - &one) / (&qq * &qq);
        let c2 = (&qq * &qq - &one) / &qq;
        let lc = leading_constants(x, l, &job.curve)?;
        checks.push(compare_constants("C_3 for U", &lc.limit, &ScaledConstant::rational(c3.clone(), -1)));
        let two = Q::from_integer(2.into());
        checks.push(Check::new("C_3 > 2 C_2", c3 > two * &c2, format!("C_3 = {c3}, C_2 = {c2}")));
    }
    Ok(checks)
}

fn cmd_verify(job: &Job, csv: bool) -> Out {
    let checks = verify_checks(job)?;
    let status = |c: &Check| match c.passed {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "skip",
    };
    let mut s = String::new();
    if csv {
        s.push_str("check,status,detail\n");
        for c in &checks {
            let _ = writeln!(s, "\"{}\",{},\"{}\"", c.name, status(c), c.detail.replace('"', "'"));
        }
    } else {
        for c in &checks {
            let _ = writeln!(s, "{:<6} {:<48} {}", status(c), c.name, c.detail);
        }
    }
    if checks.iter().any(|c| c.passed == Some(false)) {
        return Err(Failure::Checks(s));
    }
    Ok(s)
}

fn q_l_json(v: &QLValue) -> Value {
    match v {
        QLValue::Linear { c_l } => json!({ "kind": "linear", "C_L": c_l.to_string() }),
        QLValue::Series { partial, tail_bound, terms } => json!({
            "kind": "series",
            "partial": radical_json(partial),
            "tail_bound": radical_json(tail_bound),
            "degree_cutoff": terms,
        }),
    }
}

fn cmd_asym(job: &Job) -> Out {
    let (x, l, c) = (&job.variety, &job.bundle, &job.curve);
    let lc = leading_constants(x, l, c)?;
    let q = c.q();
    let mut q_l = Vec::new();
    for m in job.spec.m_min..=job.spec.m_max {
        if (m as i64) % lc.invariants.eta_l != 0 {
            continue;
        }
        let v = match q_l_formula(x, l, m as i64, c, job.spec.cutoff) {
            Ok(v) => q_l_json(&v),
            Err(Error::Unsupported(msg)) => json!({ "unsupported": msg }),
            Err(e) => return Err(e.into()),
        };
        q_l.push(json!({ "M": m, "Q_L": v }));
    }
    let (target, res) = main_zeta(job)?;
    let poles = match res.asymptotics() {
        Ok(asy) => json!({
            "base": [asy.base.0.to_string(), asy.base.1],
            "order": asy.order,
            "growth_exponent": asy.growth_exponent(q).map(|e| e.to_string()),
            "error_exponent": asy.error_exponent(q).map(|e| e.to_string()),
            "classes": asy.classes.iter().map(|p| q_vec_json(p)).collect::<Vec<_>>(),
            "limit_constant": asy.limit_constant(q).ok().map(|k| constant_json(&k, q)),
        }),
        Err(e) => json!({ "unavailable": e.to_string() }),
    };
    Ok(pretty(&json!({
        "variety": x.to_string(),
        "bundle": l.to_string(),
        "q": q,
        "genus": c.genus(),
        "target": target,
        "invariants": invariants_json(&lc.invariants),
        "limit": constant_json(&lc.limit, q),
        "C_L": lc.c_l.map(|v| v.to_string()),
        "poles": poles,
        "Q_L": q_l,
    })))
}

fn cmd_invariants(job: &Job) -> Out {
    let (x, l) = (&job.variety, &job.bundle);
    let inv = classify(l, x)?;
    Ok(pretty(&json!({
        "variety": x.to_string(),
        "dim": x.dim(),
        "abs_a": x.abs_a(),
        "a_r": x.a_r(),
        "N_X": x.n_x(),
        "eta_X": x.eta_x(),
        "E": x.e_value(),
        "alpha_star": alpha_star(x).to_string(),
        "beta": BETA,
        "anticanonical": anticanonical(x).to_string(),
        "bundle": l.to_string(),
        "big": is_big(l, x),
        "invariants": invariants_json(&inv),
    })))
}

fn component_json(c: &Component) -> Value {
    match c {
        Component::Projective { n, weight } => json!({"kind": "projective", "n": n, "weight": weight, "label": c.to_string()}),
        Component::Affine { n, weight } => json!({"kind": "affine", "n": n, "weight": weight, "label": c.to_string()}),
        Component::Good { variety, bundle } => json!({
            "kind": "good",
            "variety": variety.to_string(),
            "bundle": bundle.to_string(),
            "label": c.to_string(),
        }),
    }
}

fn cmd_decompose(job: &Job) -> Out {
    let comps = decompose(&job.variety, &job.bundle);
    Ok(pretty(&json!({
        "variety": job.variety.to_string(),
        "bundle": job.bundle.to_string(),
        "components": comps.iter().map(component_json).collect::<Vec<_>>(),
    })))
}
