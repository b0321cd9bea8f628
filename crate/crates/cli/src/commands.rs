//! Subcommand bodies. Each returns the resolved configuration, including the
//! paths it wrote, for the manifest.

use std::path::PathBuf;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use sectionzeros::analysis::{
    admissible_indices, classify_zeros, default_delta, maxdist, maxdist_records, rate_fit, stray_scan,
    theoretical_slope, xi, RateFit, Side, StrayCandidate, ZeroRecord, FAR_FROM_CURVE,
};
use sectionzeros::curves::{bessel_limit_curve, CurveKind, LimitCurve, DEFAULT_SAMPLES};
use sectionzeros::error::Error;
use sectionzeros::moments::{moment, moment_closed_form, watson_check, WatsonProblem, WatsonSide};
use sectionzeros::roots::{aberth_roots, RootSet};
use sectionzeros::sections::{bessel_section, eval_section, szego_epsilon};
use sectionzeros::specfun::first_erfc_zero_upper;

use crate::config::{
    format_complex, parse_complex, parse_complex_list, parse_degrees, parse_f64, parse_f64_list, parse_usize,
    ConfigFile, Target, TargetOptions,
};
use crate::output::{emit_csv, emit_json, emit_svg, emit_table, fmt_f64, Marker};
use crate::{CliError, Command, Globals, OutputArgs, RunConfig, TargetArgs};

/// Radius of the ball around `z = 1` left out for exponential sections.
pub const EXP_BALL: f64 = 0.5;

pub const SZEGO_DEGREES: [usize; 5] = [20, 40, 80, 160, 320];

/// Points of `U` at which `eps_n` is tabulated.
pub const SZEGO_GRID: [(f64, f64); 20] = [
    (-0.5, 0.0),
    (-1.0, 0.0),
    (-2.0, 0.0),
    (-3.0, 0.0),
    (-0.5, 0.5),
    (-0.5, -0.5),
    (0.0, 0.5),
    (0.0, -0.5),
    (0.0, 1.0),
    (0.0, -1.0),
    (0.0, 2.0),
    (0.3, 0.0),
    (0.5, 0.0),
    (0.7, 0.0),
    (0.3, 0.3),
    (-1.0, 1.0),
    (1.0, 2.0),
    (1.0, -2.0),
    (0.5, 1.5),
    (0.5, -1.5),
];

pub const WATSON_LAMBDAS: [f64; 7] = [10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0];

pub fn dispatch(cmd: Command, g: &Globals) -> Result<RunConfig, CliError> {
    match cmd {
        Command::Moments { target, kmax, output } => moments_cmd(target, kmax, output, g),
        Command::Section { target, n, output } => section_cmd(target, n, output, g),
        Command::Zeros { target, n, delta, samples, output } => zeros_cmd(target, n, delta, samples, output, g),
        Command::Curve { target, samples, output } => curve_cmd(target, samples, output, g),
        Command::Analyze { target, n, epsilon, delta, samples, output } => {
            analyze_cmd(target, n, epsilon, delta, samples, output, g)
        }
        Command::Bessel { alpha, n, samples, output } => bessel_cmd(alpha, n, samples, output, g),
        Command::Szego { n, z, output } => szego_cmd(n, z, output, g),
        Command::CvwConstant { output } => cvw_cmd(output, g),
        Command::Watson { sigma, t_max, h, side, lambdas, output } => {
            watson_cmd(sigma, t_max, h, side, lambdas, output, g)
        }
        Command::Stray { target, n, tol_curve, tol_cluster, samples, output } => {
            stray_cmd(target, n, tol_curve, tol_cluster, samples, output, g)
        }
    }
}

struct Outputs {
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
    report: Option<PathBuf>,
}

impl Outputs {
    fn resolve(o: OutputArgs, cfg: &ConfigFile) -> Self {
        let p = |k: &str, v: Option<PathBuf>| v.or_else(|| cfg.get(k).map(PathBuf::from));
        Outputs { out: p("out", o.out), svg: p("svg", o.svg), report: p("report", o.report) }
    }

    fn declared(&self) -> Vec<PathBuf> {
        [&self.out, &self.svg, &self.report].into_iter().flatten().cloned().collect()
    }
}

fn target(t: TargetArgs, cfg: &ConfigFile) -> Result<Target, CliError> {
    TargetOptions::from(t).resolve(cfg)
}

fn degrees(flag: Option<String>, cfg: &ConfigFile, default: Option<&str>) -> Result<Vec<usize>, CliError> {
    let d = cfg.pick("n", flag.map(|s| parse_degrees(&s)).transpose().map_err(|e| CliError::Config(format!("n: {e}")))?, parse_degrees)?;
    match (d, default) {
        (Some(d), _) => Ok(d),
        (None, Some(s)) => Ok(parse_degrees(s).expect("default degree list")),
        (None, None) => Err(CliError::Config("n: a degree is required".into())),
    }
}

fn samples(flag: Option<usize>, cfg: &ConfigFile) -> Result<usize, CliError> {
    let m = cfg.pick("samples", flag, parse_usize)?.unwrap_or(DEFAULT_SAMPLES);
    if m < 16 {
        return Err(CliError::Config(format!("samples: need at least 16 curve samples, got {m}")));
    }
    Ok(m)
}

fn positive(key: &str, v: Option<f64>) -> Result<Option<f64>, CliError> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(CliError::Config(format!("{key}: must be positive, got {x}"))),
        v => Ok(v),
    }
}

fn solve(target: &Target, n: usize) -> Result<RootSet, CliError> {
    let rs = aberth_roots(&target.section(n)?)?;
    if !rs.converged {
        return Err(CliError::Numerical(format!("root finder did not converge for n = {n}")));
    }
    Ok(rs)
}

/// Zeros of exponential sections measured against the Szegő curve. There is
/// no `log N / N` prediction, so `predicted_deviation` is NaN.
pub fn classify_exp(roots: &[Complex64], n: usize, curve: &LimitCurve, ball: f64) -> Vec<ZeroRecord> {
    roots
        .iter()
        .map(|&z| {
            let dist = curve.distance(z);
            let reason = if (z - 1.0).norm() < ball {
                Some("near-endpoint")
            } else if dist > FAR_FROM_CURVE {
                Some("far-from-curve")
            } else {
                None
            };
            let side = match reason {
                Some(_) => Side::Excluded,
                None if z.re < 0.0 => Side::Left,
                None => Side::Right,
            };
            ZeroRecord {
                n,
                z,
                side,
                deviation: CurveKind::Szego.modulus(z) - 1.0,
                predicted_deviation: f64::NAN,
                dist_to_curve: dist,
                excluded_reason: reason.map(str::to_string),
            }
        })
        .collect()
}

/// Roots, classified records and maxdist for one degree.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub n: usize,
    pub roots: Vec<Complex64>,
    pub records: Vec<ZeroRecord>,
    pub maxdist: f64,
}

pub fn pipeline(target: &Target, n: usize, curve: &LimitCurve, delta: f64) -> Result<Pipeline, CliError> {
    let rs = solve(target, n)?;
    let (records, md) = match target.spec() {
        Some(spec) => {
            let recs = classify_zeros(&rs.roots, &spec, n, curve, delta)?;
            let md = maxdist_records(&recs)?;
            (recs, md)
        }
        None => {
            let recs = classify_exp(&rs.roots, n, curve, delta);
            (recs, maxdist(&rs.roots, curve, Some((Complex64::new(1.0, 0.0), delta)))?)
        }
    };
    Ok(Pipeline { n, roots: rs.roots, records, maxdist: md })
}

fn default_margin(target: &Target, curve: &LimitCurve) -> f64 {
    match target {
        Target::Exp => EXP_BALL,
        _ => default_delta(curve),
    }
}

fn markers(records: &[ZeroRecord]) -> Vec<Marker> {
    records.iter().map(|r| Marker { z: r.z, side: r.side }).collect()
}

fn moments_cmd(t: TargetArgs, kmax: Option<usize>, o: OutputArgs, g: &Globals) -> Result<RunConfig, CliError> {
    let target = target(t, &g.cfg)?;
    let spec = target
        .spec()
        .ok_or_else(|| CliError::Config("family: moments need an integrand (not exp)".into()))?;
    let kmax = g.cfg.pick("kmax", kmax, parse_usize)?.unwrap_or(20);
    let outs = Outputs::resolve(o, &g.cfg);
    let mut rows = Vec::new();
    for k in 0..=kmax {
        let m = moment(&spec, k)?;
        let closed = moment_closed_form(&spec, k).ok();
        let rel = closed.map(|c| (m.value - c).norm() / c.norm().max(1.0));
        println!(
            "k={k:4} m_k={} err_est={:.3e}{}",
            format_complex(m.value),
            m.est_abs_error,
            rel.map_or(String::new(), |r| format!(" rel_vs_closed={r:.3e}"))
        );
        let (cre, cim) = closed.map_or((String::new(), String::new()), |c| (fmt_f64(c.re), fmt_f64(c.im)));
        rows.push(vec![
            k.to_string(),
            fmt_f64(m.value.re),
            fmt_f64(m.value.im),
            fmt_f64(m.est_abs_error),
            m.converged.to_string(),
            cre,
            cim,
        ]);
    }
    if let Some(p) = &outs.out {
        emit_table(p, &["k", "re", "im", "est_abs_error", "converged", "closed_re", "closed_im"], &rows)?;
    }
    let mut rc = RunConfig::new("moments");
    rc.target = Some(target);
    rc.params = json!({ "kmax": kmax });
    rc.outputs = outs.declared();
    Ok(rc)
}

fn section_cmd(t: TargetArgs, n: Option<String>, o: OutputArgs, g: &Globals) -> Result<RunConfig, CliError> {
    let target = target(t, &g.cfg)?;
    let ns = degrees(n, &g.cfg, None)?;
    let [n] = ns[..] else {
        return Err(CliError::Config("n: section takes a single degree".into()));
    };
    let outs = Outputs::resolve(o, &g.cfg);
    let p = target.section(n)?;
    println!(
        "n={n} scale_exponent={} precision_bits={} log2_range={:.3}",
        p.scale_exponent,
        p.precision(),
        p.log2_range()
    );
    let rows: Vec<Vec<String>> =
        p.coeffs.iter().enumerate().map(|(k, c)| vec![k.to_string(), fmt_f64(c.re), fmt_f64(c.im)]).collect();
    if let Some(path) = &outs.out {
        emit_table(path, &["k", "re", "im"], &rows)?;
    }
    let mut rc = RunConfig::new("section");
    rc.target = Some(target);
    rc.degrees = ns;
    rc.params = json!({ "scale_exponent": p.scale_exponent, "precision_bits": p.precision() });
    rc.outputs = outs.declared();
    Ok(rc)
}

fn zeros_cmd(
    t: TargetArgs,
    n: Option<String>,
    delta: Option<f64>,
    samples_flag: Option<usize>,
    o: OutputArgs,
    g: &Globals,
) -> Result<RunConfig, CliError> {
    let target = target(t, &g.cfg)?;
    let ns = degrees(n, &g.cfg, None)?;
    let m = samples(samples_flag, &g.cfg)?;
    let curve = target.curve(m)?;
    let delta = positive("delta", g.cfg.pick("delta", delta, parse_f64)?)?.unwrap_or(default_margin(&target, &curve));
    let outs = Outputs::resolve(o, &g.cfg);
    let mut all = Vec::new();
    let mut last = Vec::new();
    for &n in &ns {
        let p = pipeline(&target, n, &curve, delta)?;
        println!("n={n} zeros={} maxdist={:.6e}", p.roots.len(), p.maxdist);
        last = p.records.clone();
        all.extend(p.records);
    }
    if let Some(path) = &outs.out {
        emit_csv(path, &all)?;
    }
    if let Some(path) = &outs.svg {
        let note = vec![format!("{}  N = {}", target.label(), ns.last().unwrap())];
        emit_svg(path, &curve, &markers(&last), &note, g.timestamp)?;
    }
    let mut rc = RunConfig::new("zeros");
    rc.target = Some(target);
    rc.degrees = ns;
    rc.delta_margin = Some(delta);
    rc.curve_samples = Some(m);
    rc.outputs = outs.declared();
    Ok(rc)
}

fn curve_cmd(t: TargetArgs, samples_flag: Option<usize>, o: OutputArgs, g: &Globals) -> Result<RunConfig, CliError> {
    let target = target(t, &g.cfg)?;
    let m = samples(samples_flag, &g.cfg)?;
    let curve = target.curve(m)?;
    let outs = Outputs::resolve(o, &g.cfg);
    println!("samples={m} c={} max_spacing={:.3e}", curve.c(), curve.max_spacing());
    if let Some(path) = &outs.out {
        let rows: Vec<Vec<String>> = curve.samples.iter().map(|z| vec![fmt_f64(z.re), fmt_f64(z.im)]).collect();
        emit_table(path, &["re", "im"], &rows)?;
    }
    if let Some(path) = &outs.svg {
        emit_svg(path, &curve, &[], &[target.label()], g.timestamp)?;
    }
    let mut rc = RunConfig::new("curve");
    rc.target = Some(target);
    rc.curve_samples = Some(m);
    rc.outputs = outs.declared();
    Ok(rc)
}

#[derive(Debug, Serialize)]
struct PerN {
    n: usize,
    zeros: usize,
    left: usize,
    right: usize,
    axis: usize,
    excluded: usize,
    maxdist: f64,
    maxdist_n_over_log_n: f64,
}

fn per_n_summary(p: &Pipeline) -> PerN {
    let count = |s: Side| p.records.iter().filter(|r| r.side == s).count();
    PerN {
        n: p.n,
        zeros: p.roots.len(),
        left: count(Side::Left),
        right: count(Side::Right),
        axis: count(Side::Axis),
        excluded: count(Side::Excluded),
        maxdist: p.maxdist,
        maxdist_n_over_log_n: p.maxdist * p.n as f64 / (p.n as f64).ln(),
    }
}

/// A fit, or the reason none was possible.
#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum FitOutcome {
    Fit(RateFit),
    Unavailable { error: String },
}

fn fit_side(records: &[ZeroRecord], target: &Target, side: Side) -> Result<Option<FitOutcome>, CliError> {
    let Some(spec) = target.spec() else { return Ok(None) };
    match rate_fit(records, &spec, side) {
        Ok(f) => Ok(Some(FitOutcome::Fit(f))),
        Err(e @ Error::InsufficientData(_)) => Ok(Some(FitOutcome::Unavailable { error: e.to_string() })),
        Err(e) => Err(e.into()),
    }
}

pub fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        b = b.num_threads(t);
    }
    b.build().map_err(|e| CliError::Io(e.into()))
}

fn analyze_cmd(
    t: TargetArgs,
    n: Option<String>,
    epsilon: Option<f64>,
    delta: Option<f64>,
    samples_flag: Option<usize>,
    o: OutputArgs,
    g: &Globals,
) -> Result<RunConfig, CliError> {
    let target = target(t, &g.cfg)?;
    let requested = degrees(n, &g.cfg, Some("40:160:20"))?;
    let epsilon = g.cfg.pick("epsilon", epsilon, parse_f64)?;
    let m = samples(samples_flag, &g.cfg)?;
    let curve = target.curve(m)?;
    let delta = positive("delta", g.cfg.pick("delta", delta, parse_f64)?)?.unwrap_or(default_margin(&target, &curve));
    let outs = Outputs::resolve(o, &g.cfg);

    let (kept, admissible) = match target.spec() {
        Some(spec) => {
            let lo = *requested.iter().min().unwrap();
            let hi = *requested.iter().max().unwrap();
            let adm = admissible_indices(&spec, lo, hi, epsilon)?;
            let kept: Vec<usize> = requested.iter().copied().filter(|n| adm.indices.contains(n)).collect();
            (kept, Some(adm))
        }
        None => (requested.clone(), None),
    };
    if kept.is_empty() {
        return Err(CliError::Config("n: no admissible degree left after the index-selection rule".into()));
    }
    for &n in &kept {
        target.check_degree(n)?;
    }
    let skipped: Vec<usize> = requested.iter().copied().filter(|n| !kept.contains(n)).collect();

    let pool = thread_pool(g.threads)?;
    let results: Vec<Pipeline> =
        pool.install(|| kept.par_iter().map(|&n| pipeline(&target, n, &curve, delta)).collect::<Result<_, _>>())?;

    let records: Vec<ZeroRecord> = results.iter().flat_map(|p| p.records.iter().cloned()).collect();
    let per_n: Vec<PerN> = results.iter().map(per_n_summary).collect();
    let left = fit_side(&records, &target, Side::Left)?;
    let right = fit_side(&records, &target, Side::Right)?;
    let slopes = match target.spec() {
        Some(spec) => Some(json!({
            "xi": xi(&spec),
            "left": theoretical_slope(&spec, Side::Left)?,
            "right": theoretical_slope(&spec, Side::Right)?,
        })),
        None => None,
    };

    for p in &per_n {
        println!(
            "n={} left={} right={} axis={} excluded={} maxdist={:.6e}",
            p.n, p.left, p.right, p.axis, p.excluded, p.maxdist
        );
    }
    for (name, f) in [("left", &left), ("right", &right)] {
        match f {
            Some(FitOutcome::Fit(f)) => println!(
                "{name}: slope={:.4} theoretical={:.4} intercept={:.4} rms={:.3e} indices={}",
                f.slope, f.theoretical_slope, f.intercept, f.residual_rms, f.sample_count
            ),
            Some(FitOutcome::Unavailable { error }) => println!("{name}: no fit ({error})"),
            None => {}
        }
    }

    if let Some(path) = &outs.out {
        emit_csv(path, &records)?;
    }
    if let Some(path) = &outs.svg {
        let last = results.last().unwrap();
        let note = vec![format!("{}  N = {}", target.label(), last.n)];
        emit_svg(path, &curve, &markers(&last.records), &note, g.timestamp)?;
    }
    if let Some(path) = &outs.report {
        let report = json!({
            "target": target.label(),
            "theoretical_slope": slopes,
            "admissible": admissible.as_ref().map(|a| json!({
                "rule_active": a.rule_active,
                "epsilon": a.epsilon,
                "kept": kept,
                "skipped": skipped,
            })),
            "per_n": per_n,
            "fits": { "left": left, "right": right },
        });
        emit_json(path, &report)?;
    }
    let mut rc = RunConfig::new("analyze");
    rc.target = Some(target);
    rc.degrees = requested;
    rc.epsilon_ncond = admissible.map(|a| a.epsilon);
    rc.delta_margin = Some(delta);
    rc.curve_samples = Some(m);
    rc.threads = Some(pool.current_num_threads());
    rc.outputs = outs.declared();
    Ok(rc)
}

/// Largest `|w|` over the zeros of `P_n` and the bound `1 + 2 alpha / n`.
#[derive(Debug, Clone, Serialize)]
pub struct EkRow {
    pub n: usize,
    pub max_modulus: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Relative slack allowed on the Eneström-Kakeya bound for rounding in the
/// computed zeros.
pub const EK_REL_TOL: f64 = 1e-12;

pub fn enestrom_kakeya(alpha: f64, n: usize) -> Result<EkRow, CliError> {
    let pn = bessel_section(Complex64::new(alpha, 0.0), n)?.pn;
    let rs = aberth_roots(&pn)?;
    if !rs.converged {
        return Err(CliError::Numerical(format!("root finder did not converge for P_{n}")));
    }
    let max_modulus = rs.roots.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let bound = 1.0 + 2.0 * alpha / n as f64;
    Ok(EkRow { n, max_modulus, bound, holds: max_modulus <= bound * (1.0 + EK_REL_TOL) })
}

fn bessel_cmd(
    alpha: Option<String>,
    n: Option<String>,
    samples_flag: Option<usize>,
    o: OutputArgs,
    g: &Globals,
) -> Result<RunConfig, CliError> {
    let opts = TargetOptions { family: Some("bessel".into()), alpha, ..Default::default() };
    let target = opts.resolve(&g.cfg)?;
    let Target::Bessel { alpha } = target else { unreachable!() };
    let ns = degrees(n, &g.cfg, Some("40,80,160"))?;
    for &n in &ns {
        target.check_degree(n)?;
    }
    let m = samples(samples_flag, &g.cfg)?;
    let curve = bessel_limit_curve(m)?;
    let delta = default_delta(&curve);
    let outs = Outputs::resolve(o, &g.cfg);
    let spec = target.spec().unwrap();

    let mut all = Vec::new();
    let mut rows = Vec::new();
    let mut last = Vec::new();
    for &n in &ns {
        let p = pipeline(&target, n, &curve, delta)?;
        let pair = bessel_section(alpha, n)?;
        // s_n[J](-inz) = 2^{-alpha} P_n(z^2) at a sample point
        let z = Complex64::new(0.3, 0.2);
        let lhs = eval_section(&pair.section, Complex64::new(0.0, -1.0) * z);
        let rhs = sectionzeros::specfun::real_power(2.0, -alpha)? * eval_section(&pair.pn, z * z);
        let aux_rel = (lhs - rhs).norm() / lhs.norm();
        let ek = if alpha.im == 0.0 && alpha.re >= 0.0 { Some(enestrom_kakeya(alpha.re, n)?) } else { None };
        println!(
            "n={n} maxdist={:.6e} aux_identity_rel={aux_rel:.2e}{}",
            p.maxdist,
            ek.as_ref().map_or(String::new(), |e| format!(
                " ek_max={:.12} ek_bound={:.12} holds={}",
                e.max_modulus, e.bound, e.holds
            ))
        );
        rows.push(json!({ "n": n, "maxdist": p.maxdist, "aux_identity_rel": aux_rel, "enestrom_kakeya": ek }));
        last = p.records.clone();
        all.extend(p.records);
    }
    let hi = *ns.iter().max().unwrap();
    let adm = admissible_indices(&spec, 2, hi.max(2), None)?;
    let even_rule = adm.indices.iter().all(|n| n % 2 == 0) && adm.indices.len() == hi / 2;
    println!("ncond keeps even indices only: {even_rule}");

    if let Some(path) = &outs.out {
        emit_csv(path, &all)?;
    }
    if let Some(path) = &outs.svg {
        let note = vec![format!("{}  N = {}", target.label(), ns.last().unwrap())];
        emit_svg(path, &curve, &markers(&last), &note, g.timestamp)?;
    }
    if let Some(path) = &outs.report {
        emit_json(
            path,
            &json!({ "alpha": format_complex(alpha), "per_n": rows, "ncond_even_rule": even_rule, "ncond_epsilon": adm.epsilon }),
        )?;
    }
    let mut rc = RunConfig::new("bessel");
    rc.target = Some(target);
    rc.degrees = ns;
    rc.delta_margin = Some(delta);
    rc.curve_samples = Some(m);
    rc.epsilon_ncond = Some(adm.epsilon);
    rc.outputs = outs.declared();
    Ok(rc)
}

pub fn szego_grid() -> Vec<Complex64> {
    SZEGO_GRID.iter().map(|&(re, im)| Complex64::new(re, im)).collect()
}

/// `sup |eps_n|` over the points.
pub fn szego_sup(n: usize, points: &[Complex64]) -> Result<f64, CliError> {
    let mut sup: f64 = 0.0;
    for &z in points {
        let e = szego_epsilon(n, z)?.norm();
        if !e.is_finite() {
            return Err(CliError::Numerical(format!("eps_{n}({z}) is not finite")));
        }
        sup = sup.max(e);
    }
    Ok(sup)
}

fn szego_cmd(n: Option<String>, z: Option<String>, o: OutputArgs, g: &Globals) -> Result<RunConfig, CliError> {
    let ns = degrees(n, &g.cfg, Some("20,40,80,160,320"))?;
    let extra = g.cfg.pick("z", z.map(|s| parse_complex_list(&s)).transpose().map_err(|e| CliError::Config(format!("z: {e}")))?, parse_complex_list)?;
    let mut points = szego_grid();
    points.extend(extra.unwrap_or_default());
    let outs = Outputs::resolve(o, &g.cfg);
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for &n in &ns {
        for &z in &points {
            let e = szego_epsilon(n, z)?;
            rows.push(vec![n.to_string(), fmt_f64(z.re), fmt_f64(z.im), fmt_f64(e.norm()), fmt_f64(n as f64 * e.norm())]);
        }
        let sup = szego_sup(n, &points)?;
        println!("n={n} sup|eps_n|={sup:.6e} n*sup={:.6}", n as f64 * sup);
        summary.push(json!({ "n": n, "sup_eps": sup, "n_sup_eps": n as f64 * sup }));
    }
    if let Some(path) = &outs.out {
        emit_table(path, &["n", "re", "im", "abs_eps", "n_abs_eps"], &rows)?;
    }
    if let Some(path) = &outs.report {
        emit_json(path, &json!({ "points": points.len(), "per_n": summary }))?;
    }
    let mut rc = RunConfig::new("szego");
    rc.degrees = ns;
    rc.params = json!({ "points": points.iter().map(|&z| format_complex(z)).collect::<Vec<_>>() });
    rc.outputs = outs.declared();
    Ok(rc)
}

fn cvw_cmd(o: OutputArgs, g: &Globals) -> Result<RunConfig, CliError> {
    let r = first_erfc_zero_upper()?;
    let outs = Outputs::resolve(o, &g.cfg);
    println!("t1 = {}", format_complex(r.t1));
    println!("|erfc(t1)| = {:.3e}", r.residual);
    println!("Re(t1) + Im(t1) = {:.10}", r.cvw_constant);
    if let Some(path) = &outs.report {
        emit_json(path, &r)?;
    }
    let mut rc = RunConfig::new("cvw-constant");
    rc.outputs = outs.declared();
    Ok(rc)
}

fn watson_cmd(
    sigma: Option<String>,
    t_max: Option<f64>,
    h: Option<String>,
    side: Option<String>,
    lambdas: Option<String>,
    o: OutputArgs,
    g: &Globals,
) -> Result<RunConfig, CliError> {
    let cfg = &g.cfg;
    let sigma = cfg.pick_str("sigma", sigma).map(|s| parse_complex(&s)).transpose().map_err(|e| CliError::Config(format!("sigma: {e}")))?;
    let sigma = sigma.unwrap_or(Complex64::new(0.0, 0.0));
    let t_max = positive("t-max", cfg.pick("t-max", t_max, parse_f64)?)?.unwrap_or(1.0);
    let h = cfg
        .pick_str("h", h)
        .map(|s| parse_complex_list(&s))
        .transpose()
        .map_err(|e| CliError::Config(format!("h: {e}")))?
        .unwrap_or_else(|| vec![Complex64::new(1.0, 0.0)]);
    let side = match cfg.pick_str("side", side).as_deref() {
        None | Some("left") => WatsonSide::LeftEndpoint,
        Some("right") => WatsonSide::RightEndpoint,
        Some(other) => return Err(CliError::Config(format!("side: expected left or right, got {other:?}"))),
    };
    let lambdas = cfg
        .pick_str("lambdas", lambdas)
        .map(|s| parse_f64_list(&s))
        .transpose()
        .map_err(|e| CliError::Config(format!("lambdas: {e}")))?
        .unwrap_or_else(|| WATSON_LAMBDAS.to_vec());
    if lambdas.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(CliError::Config("lambdas: must be positive".into()));
    }
    let problem = WatsonProblem { sigma, t_max, h, side };
    let rows = watson_check(&problem, &lambdas)?;
    let outs = Outputs::resolve(o, cfg);
    for r in &rows {
        println!("lambda={:10.3} scaled_error={:.6e}", r.lambda, r.scaled_error);
    }
    if let Some(path) = &outs.out {
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    fmt_f64(r.lambda),
                    fmt_f64(r.numeric.re),
                    fmt_f64(r.numeric.im),
                    fmt_f64(r.leading.re),
                    fmt_f64(r.leading.im),
                    fmt_f64(r.scaled_error),
                ]
            })
            .collect();
        emit_table(path, &["lambda", "numeric_re", "numeric_im", "leading_re", "leading_im", "scaled_error"], &table)?;
    }
    if let Some(path) = &outs.report {
        emit_json(path, &json!({ "problem": problem, "rows": rows }))?;
    }
    let mut rc = RunConfig::new("watson");
    rc.params = json!({ "problem": problem, "lambdas": lambdas });
    rc.outputs = outs.declared();
    Ok(rc)
}

pub fn stray_candidates(
    target: &Target,
    ns: &[usize],
    curve: &LimitCurve,
    tol_curve: f64,
    tol_cluster: f64,
    threads: Option<usize>,
) -> Result<Vec<StrayCandidate>, CliError> {
    let pool = thread_pool(threads)?;
    let by_n: Vec<(usize, Vec<Complex64>)> =
        pool.install(|| ns.par_iter().map(|&n| solve(target, n).map(|rs| (n, rs.roots))).collect::<Result<_, _>>())?;
    Ok(stray_scan(&by_n, curve, tol_curve, tol_cluster)?)
}

fn stray_cmd(
    t: TargetArgs,
    n: Option<String>,
    tol_curve: Option<f64>,
    tol_cluster: Option<f64>,
    samples_flag: Option<usize>,
    o: OutputArgs,
    g: &Globals,
) -> Result<RunConfig, CliError> {
    let target = target(t, &g.cfg)?;
    let ns = degrees(n, &g.cfg, Some("40,80,160"))?;
    for &n in &ns {
        target.check_degree(n)?;
    }
    let tol_curve = positive("tol-curve", g.cfg.pick("tol-curve", tol_curve, parse_f64)?)?.unwrap_or(0.1);
    let tol_cluster = positive("tol-cluster", g.cfg.pick("tol-cluster", tol_cluster, parse_f64)?)?.unwrap_or(0.05);
    let m = samples(samples_flag, &g.cfg)?;
    let curve = target.curve(m)?;
    let outs = Outputs::resolve(o, &g.cfg);
    let found = stray_candidates(&target, &ns, &curve, tol_curve, tol_cluster, g.threads)?;
    println!("stray candidates: {}", found.len());
    for s in &found {
        println!(
            "  {} dist={:.4e} track={} in_e={:?}",
            format_complex(s.point),
            s.dist_to_curve,
            s.track.len(),
            s.in_e
        );
    }
    if let Some(path) = &outs.out {
        let rows: Vec<Vec<String>> = found
            .iter()
            .map(|s| {
                vec![
                    fmt_f64(s.point.re),
                    fmt_f64(s.point.im),
                    fmt_f64(s.dist_to_curve),
                    s.track.len().to_string(),
                    s.in_e.map_or(String::new(), |b| b.to_string()),
                ]
            })
            .collect();
        emit_table(path, &["re", "im", "dist_to_curve", "track_len", "in_e"], &rows)?;
    }
    if let Some(path) = &outs.report {
        emit_json(path, &json!({ "tol_curve": tol_curve, "tol_cluster": tol_cluster, "candidates": found }))?;
    }
    let mut rc = RunConfig::new("stray");
    rc.target = Some(target);
    rc.degrees = ns;
    rc.curve_samples = Some(m);
    rc.params = json!({ "tol_curve": tol_curve, "tol_cluster": tol_cluster });
    rc.outputs = outs.declared();
    Ok(rc)
}
