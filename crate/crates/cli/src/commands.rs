use std::fmt::Write as _;
use std::path::Path;

use anyhow::Result;
use lnpc_core::indices::{
    build_index_set, check_downward_closed, index_set_metrics, stechkin_check, surrogate_constants, IndexSet,
    SurrogateWeights,
};
use lnpc_core::pce::{
    compute_expansion, error_curve, fit_slope, summability_report, weighted_identity_check, write_coefficients_csv,
    write_error_curve_csv, ParametricMap, PolySpec,
};
use lnpc_core::report::fmt_f64;
use lnpc_core::sampling::GaussianStream;
use lnpc_core::torus::{hnorm, solve_diffusion_detailed, write_field_binary, write_field_csv, PeriodicField};
use lnpc_core::verify::{
    exp_moment_closed, exp_moment_mc, growth_bound_check_with_rho, perturbation_check, strip_bound_probe,
    HolomorphyParams,
};
use lnpc_core::{MultiIndex, Report};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentConfig, Suite, WeightKind};

/// Files and findings of one subcommand.
pub struct Outcome {
    pub artifacts: Vec<(String, Vec<u8>)>,
    pub report: Report,
    pub violation: bool,
}

impl Outcome {
    fn new(report: Report) -> Self {
        Self {
            artifacts: Vec::new(),
            report,
            violation: false,
        }
    }

    fn add(&mut self, name: &str, bytes: Vec<u8>) {
        self.artifacts.push((name.to_string(), bytes));
    }

    pub fn add_report(&mut self, text: String) {
        self.add("report.txt", text.into_bytes());
    }
}

/// Column lists of every artifact this tool writes.
pub const SCHEMAS: &[(&str, &str)] = &[
    ("lambda.csv", "position,nu,c_weight"),
    ("coeffs.csv", "nu,c_weight,beta_weight,norm_X"),
    ("errors.csv", "N,error,m_lambda,d_lambda"),
    ("field.csv", "x,re,im | x,y,re,im"),
    ("identity.csv", "case,dim,m,lhs,rhs,rel_gap"),
];

fn surrogate(cfg: &ExperimentConfig) -> Result<SurrogateWeights> {
    let rho = cfg.rho()?;
    let w = &cfg.weights;
    Ok(match w.k {
        Some(k) => SurrogateWeights::from_parts(k, w.m, rho, w.scan_limit)?,
        None => surrogate_constants(w.m, &rho, w.scan_limit)?,
    })
}

fn lambda_csv(set: &IndexSet) -> Vec<u8> {
    let mut s = String::from("position,nu,c_weight\n");
    for (i, (nu, c)) in set.members().iter().zip(set.weights()).enumerate() {
        writeln!(s, "{},{},{}", i + 1, nu.to_key(), fmt_f64(*c)).unwrap();
    }
    s.into_bytes()
}

fn push_weights(r: &mut Report, sw: &SurrogateWeights) {
    r.push_f64("K", sw.k())
        .push_f64("ln_C_beta", sw.ln_c_beta())
        .push("M", sw.order());
    if let Some(w) = sw.warning() {
        r.push("warning", w);
    }
}

pub fn indexset(cfg: &ExperimentConfig) -> Result<Outcome> {
    let sw = surrogate(cfg)?;
    let n = cfg.expansion.ref_set_size;
    let cap = cfg.dim_cap(sw.rho())?;
    let set = build_index_set(n, &sw, cap)?;
    let extended = build_index_set(2 * n, &sw, cap)?;
    let closed = check_downward_closed(&set);
    let (m, d) = index_set_metrics(&set)?;
    let stechkin = stechkin_check(extended.weights(), 1.0, n)?;

    let mut r = Report::new();
    r.push("N", n).push("dim_cap", cap);
    push_weights(&mut r, &sw);
    r.push("downward_closed", closed)
        .push("m_lambda", m)
        .push("d_lambda", d);
    r.extend_prefixed("stechkin", &stechkin.to_report());

    let mut out = Outcome::new(r);
    out.violation = !closed || stechkin.holds() == Some(false);
    out.add("lambda.csv", lambda_csv(&set));
    Ok(out)
}

pub fn solve(cfg: &ExperimentConfig, base: &Path) -> Result<Outcome> {
    let f = cfg.rhs(base)?;
    let a = match &cfg.solve.y {
        Some(y) => cfg.problem(base, "solve")?.coefficient(y)?,
        None => PeriodicField::zeros(f.grid()),
    };
    let out = solve_diffusion_detailed(&a, &f, &cfg.solver())?;
    let peak = out.u.values().iter().map(|v| v.norm()).fold(0.0, f64::max);

    let mut r = Report::new();
    r.push("d", cfg.grid.d)
        .push("n", cfg.grid.n)
        .push("iterations", out.iterations)
        .push_f64("residual", out.residual)
        .push_f64("omega", out.omega)
        .push_f64("imag_fraction", out.imag_fraction)
        .push_f64("peak_amplitude", peak)
        .push_f64("l2_norm", out.u.l2_norm())
        .push_f64(
            format!("h{}_norm", cfg.expansion.s_out),
            hnorm(&out.u, cfg.expansion.s_out)?,
        );

    let mut res = Outcome::new(r);
    let mut csv = Vec::new();
    write_field_csv(&out.u, &mut csv)?;
    res.add("field.csv", csv);
    if cfg.solve.binary {
        let mut bin = Vec::new();
        write_field_binary(&out.u, &mut bin)?;
        res.add("field.bin", bin);
    }
    Ok(res)
}

pub fn rates(cfg: &ExperimentConfig, base: &Path, seed: u64) -> Result<Outcome> {
    let problem = cfg.problem(base, "rates")?;
    let sw = surrogate(cfg)?;
    let (p, m) = (cfg.weights.p.unwrap(), cfg.weights.m);
    let j = problem.dim();
    let cap = cfg.expansion.dim_cap.map_or(j, |c| c.min(j));
    let set = build_index_set(cfg.expansion.ref_set_size, &sw, cap)?;
    let exp = compute_expansion(&problem, &set, cfg.estimator(seed))?;
    let curve = error_curve(&exp, &cfg.expansion.ns)?;
    let pts: Vec<(f64, f64)> = curve.iter().map(|c| (c.n as f64, c.error)).collect();
    let summability = summability_report(&exp, p, m, sw.rho())?;

    let mut r = Report::new();
    r.push("J", j).push("ref_set_size", set.len());
    push_weights(&mut r, &sw);
    r.push("estimator", format!("{:?}", exp.estimator()));
    match fit_slope(&pts) {
        Ok(s) => r.push_f64("slope", s),
        Err(e) => r.push("slope", format!("unavailable ({e})")),
    };
    if let Some((m2, se)) = exp.second_moment() {
        r.push_f64("second_moment", m2).push_f64("second_moment_se", se);
    }
    r.extend_prefixed("summability", &summability.to_report());

    let mut out = Outcome::new(r);
    out.add("lambda.csv", lambda_csv(&set));
    let mut coeffs = Vec::new();
    write_coefficients_csv(&exp, m, sw.rho(), &mut coeffs)?;
    out.add("coeffs.csv", coeffs);
    let mut errors = Vec::new();
    write_error_curve_csv(&curve, &mut errors)?;
    out.add("errors.csv", errors);
    Ok(out)
}

pub fn verify(cfg: &ExperimentConfig, base: &Path, seed: u64) -> Result<Outcome> {
    let v = &cfg.verify;
    let mut suites = v.suites.clone();
    suites.sort();
    suites.dedup();
    let mut r = Report::new();
    let mut violation = false;
    for suite in suites {
        match suite {
            Suite::Moments => {
                let model = cfg.require_model("verify.moments")?;
                let j = cfg.truncation(&lnpc_core::AdmissibleWeights::from_model(model.clone()))?;
                let b: Vec<f64> = (1..=j).map(|i| model.b(i)).collect();
                let mc = exp_moment_mc(&b, v.moment_alpha, v.moment_tau, v.moment_samples, seed)?;
                r.extend_prefixed("moments.mc", &mc.to_report());
                if v.moment_tau == 2.0 {
                    let closed = exp_moment_closed(&b, v.moment_alpha)?;
                    let z = (mc.estimate - closed).abs() / mc.std_error;
                    let ok = z <= 4.0 && !mc.unstable;
                    violation |= !ok;
                    r.push_f64("moments.closed", closed)
                        .push_f64("moments.z_score", z)
                        .push("moments.status", if ok { "pass" } else { "violation" });
                } else {
                    r.push("moments.status", "no closed form for tau < 2");
                }
            }
            Suite::Perturbation => {
                let problem = cfg.problem(base, "verify.perturbation")?;
                let f = &problem.spec().f;
                let solver = cfg.solver();
                let j = problem.dim();
                let (mut worst, mut failed) = (0.0_f64, 0);
                for i in 0..v.perturbation_instances {
                    let mut g = GaussianStream::new(seed, i as u64);
                    let y: Vec<f64> = (0..j).map(|_| g.next_normal()).collect();
                    let yd: Vec<f64> = y.iter().map(|y| y + v.perturbation_delta * g.next_normal()).collect();
                    let scale = 1.0 + v.perturbation_delta * g.next_normal();
                    let fd = f.map(|z| z * scale, true);
                    let rep =
                        perturbation_check(&problem.coefficient(&y)?, &problem.coefficient(&yd)?, f, &fd, &solver)?;
                    if !rep.holds {
                        failed += 1;
                    }
                    if rep.rhs > 0.0 {
                        worst = worst.max(rep.lhs / rep.rhs);
                    }
                }
                violation |= failed > 0;
                r.push("perturbation.status", if failed == 0 { "pass" } else { "violation" })
                    .push("perturbation.instances", v.perturbation_instances)
                    .push("perturbation.violations", failed)
                    .push_f64("perturbation.max_ratio", worst);
            }
            Suite::Growth => {
                if cfg.weights.model != WeightKind::PowerLaw {
                    r.push("growth.status", "not applicable (needs a power-law model)");
                    continue;
                }
                let sw = surrogate(cfg)?;
                let (theta, p) = (cfg.weights.theta.unwrap(), cfg.weights.p.unwrap());
                let r1 = theta * (2.0 - p) / 2.0;
                let c = sw.rho().rho(1)? * (1.0 + 1e-9);
                let n = v.growth_size.unwrap_or(cfg.expansion.ref_set_size);
                let set = build_index_set(n, &sw, cfg.dim_cap(sw.rho())?)?;
                let rep = growth_bound_check_with_rho(&set, c, sw.k(), r1, sw.rho())?;
                violation |= !rep.holds();
                r.extend_prefixed("growth", &rep.to_report());
            }
            Suite::Strip => {
                let problem = cfg.problem(base, "verify.strip")?;
                let params = HolomorphyParams {
                    c: v.strip_c,
                    alpha: v.strip_alpha,
                    tau: v.strip_tau,
                    theta: v.strip_theta.unwrap_or(cfg.weights.xi.unwrap()),
                };
                let rep = strip_bound_probe(&problem, &params, v.strip_probes, seed)?;
                violation |= rep.violations > 0;
                r.extend_prefixed("strip", &rep.to_report());
            }
        }
    }
    let mut out = Outcome::new(r);
    out.violation = violation;
    Ok(out)
}

pub fn identity(cfg: &ExperimentConfig, seed: u64) -> Result<Outcome> {
    let id = &cfg.identity;
    let mut cases: Vec<(PolySpec, u32, Vec<f64>)> = vec![(
        PolySpec::new(1, vec![(MultiIndex::from_dense(&[2]), 1.0)])?,
        2,
        vec![1.0],
    )];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..id.cases {
        let dim = rng.random_range(1..=id.max_dim);
        let terms = rng.random_range(1..=id.max_terms);
        let poly = PolySpec::random(&mut rng, dim, id.max_degree, terms)?;
        let m = rng.random_range(1..=id.max_m);
        let rho: Vec<f64> = (0..dim).map(|_| 2.0 * (1.0 - rng.random::<f64>())).collect();
        cases.push((poly, m, rho));
    }
    let mut csv = String::from("case,dim,m,lhs,rhs,rel_gap\n");
    let (mut worst, mut failed) = (0.0_f64, 0);
    for (i, (poly, m, rho)) in cases.iter().enumerate() {
        let (l, rhs) = weighted_identity_check(poly, *m, rho)?;
        let scale = l.abs().max(rhs.abs());
        let gap = if scale == 0.0 { 0.0 } else { (l - rhs).abs() / scale };
        if gap > id.tol {
            failed += 1;
        }
        worst = worst.max(gap);
        writeln!(
            csv,
            "{i},{},{m},{},{},{}",
            poly.dim(),
            fmt_f64(l),
            fmt_f64(rhs),
            fmt_f64(gap)
        )
        .unwrap();
    }
    let mut r = Report::new();
    r.push("status", if failed == 0 { "pass" } else { "violation" })
        .push("cases", cases.len())
        .push("violations", failed)
        .push_f64("max_rel_gap", worst)
        .push_f64("tol", id.tol);
    let mut out = Outcome::new(r);
    out.violation = failed > 0;
    out.add("identity.csv", csv.into_bytes());
    Ok(out)
}
