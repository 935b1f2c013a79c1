use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use lnpc_core::pce::{Estimator, ParametricProblem, ProblemSpec};
use lnpc_core::torus::{read_field_binary, PeriodicField, PeriodicGrid, Relaxation, SolverConfig};
use lnpc_core::{AdmissibleWeights, WeightModel};
use serde::Deserialize;

/// A configuration that failed to parse or validate.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn invalid(key: &str, msg: impl std::fmt::Display) -> anyhow::Error {
    ConfigError(format!("{key}: {msg}")).into()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub rhs: RhsSection,
    #[serde(default)]
    pub basis: BasisSection,
    pub weights: WeightsSection,
    #[serde(default)]
    pub expansion: ExpansionSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub solve: SolveSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub identity: IdentitySection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub d: usize,
    pub n: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { d: 1, n: 64 }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum RhsKind {
    Sin,
    Cos,
    File,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RhsSection {
    pub kind: RhsKind,
    #[serde(default)]
    pub wave: Option<Vec<i64>>,
    #[serde(default)]
    pub path: Option<PathBuf>,
}

impl Default for RhsSection {
    fn default() -> Self {
        Self {
            kind: RhsKind::Sin,
            wave: None,
            path: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BasisSection {
    pub t: f64,
}

impl Default for BasisSection {
    fn default() -> Self {
        Self { t: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    /// `b_j = c₀ j^{−θ}`.
    PowerLaw,
    /// Explicit `b_j`.
    Explicit,
    /// Explicit `ϱ_j`; no decay model, so only `indexset` applies.
    Rho,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSection {
    pub model: WeightKind,
    pub c0: Option<f64>,
    pub theta: Option<f64>,
    pub values: Option<Vec<f64>>,
    pub p: Option<f64>,
    pub xi: Option<f64>,
    pub m: u32,
    /// Overrides the derived `K`.
    pub k: Option<f64>,
    #[serde(default = "default_scan_limit")]
    pub scan_limit: usize,
}

fn default_scan_limit() -> usize {
    60
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    Tensor,
    Mc,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpansionSection {
    pub j: Option<usize>,
    pub ref_set_size: usize,
    pub ns: Vec<usize>,
    pub estimator: EstimatorKind,
    pub pad: u32,
    pub samples: usize,
    pub s_out: f64,
    pub dim_cap: Option<usize>,
}

impl Default for ExpansionSection {
    fn default() -> Self {
        Self {
            j: None,
            ref_set_size: 100,
            ns: vec![10, 20, 40, 80],
            estimator: EstimatorKind::Tensor,
            pad: 2,
            samples: 10_000,
            s_out: 1.0,
            dim_cap: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub rel_tol: f64,
    pub max_iter: usize,
    pub omega: Option<f64>,
    pub dealias: bool,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            rel_tol: d.rel_tol,
            max_iter: d.max_iter,
            omega: None,
            dealias: d.dealias,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveSection {
    /// Parameter point; zeros when absent.
    pub y: Option<Vec<f64>>,
    #[serde(default)]
    pub binary: bool,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Moments,
    Perturbation,
    Growth,
    Strip,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub suites: Vec<Suite>,
    pub moment_alpha: f64,
    pub moment_tau: f64,
    pub moment_samples: usize,
    pub perturbation_instances: usize,
    pub perturbation_delta: f64,
    pub growth_size: Option<usize>,
    pub strip_probes: usize,
    pub strip_c: f64,
    pub strip_alpha: f64,
    pub strip_tau: f64,
    pub strip_theta: Option<f64>,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            suites: vec![Suite::Moments, Suite::Perturbation, Suite::Growth, Suite::Strip],
            moment_alpha: 1.0,
            moment_tau: 2.0,
            moment_samples: 100_000,
            perturbation_instances: 20,
            perturbation_delta: 0.1,
            growth_size: None,
            strip_probes: 32,
            strip_c: 1.0,
            strip_alpha: 1.0,
            strip_tau: 1.0,
            strip_theta: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentitySection {
    pub cases: usize,
    pub max_dim: usize,
    pub max_degree: u32,
    pub max_terms: usize,
    pub max_m: u32,
    pub tol: f64,
}

impl Default for IdentitySection {
    fn default() -> Self {
        Self {
            cases: 50,
            max_dim: 3,
            max_degree: 6,
            max_terms: 5,
            max_m: 4,
            tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

/// A parsed configuration together with its source text.
pub struct Loaded {
    pub config: ExperimentConfig,
    pub text: String,
    pub base_dir: PathBuf,
}

pub fn load(path: &Path) -> Result<Loaded> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config: ExperimentConfig =
        toml::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    config.validate()?;
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Loaded { config, text, base_dir })
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(key, format!("must be positive and finite, got {v}")))
    }
}

impl ExperimentConfig {
    /// Re-checks the library preconditions that do not need a computation.
    pub fn validate(&self) -> Result<()> {
        if !matches!(self.grid.d, 1 | 2) {
            bail!(invalid("grid.d", format!("must be 1 or 2, got {}", self.grid.d)));
        }
        if self.grid.n < 8 || !self.grid.n.is_multiple_of(2) {
            bail!(invalid(
                "grid.n",
                format!("must be even and at least 8, got {}", self.grid.n)
            ));
        }
        if !(self.basis.t > self.grid.d as f64 / 2.0) {
            bail!(invalid(
                "basis.t",
                format!("must exceed d/2 = {}", self.grid.d as f64 / 2.0)
            ));
        }
        match self.rhs.kind {
            RhsKind::File if self.rhs.path.is_none() => bail!(invalid("rhs.path", "required when rhs.kind = \"file\"")),
            RhsKind::Sin | RhsKind::Cos => {
                if let Some(w) = &self.rhs.wave {
                    if w.len() != self.grid.d {
                        bail!(invalid("rhs.wave", format!("needs {} entries", self.grid.d)));
                    }
                    if w.iter().all(|k| *k == 0) {
                        bail!(invalid(
                            "rhs.wave",
                            "must be nonzero (the right-hand side needs zero mean)"
                        ));
                    }
                }
            }
            RhsKind::File => {}
        }
        let w = &self.weights;
        if w.m == 0 {
            bail!(invalid("weights.m", "must be at least 1"));
        }
        match w.model {
            WeightKind::PowerLaw => {
                positive("weights.c0", w.c0.ok_or_else(|| invalid("weights.c0", "required"))?)?;
                positive(
                    "weights.theta",
                    w.theta.ok_or_else(|| invalid("weights.theta", "required"))?,
                )?;
            }
            WeightKind::Explicit | WeightKind::Rho => {
                let v = w.values.as_ref().ok_or_else(|| invalid("weights.values", "required"))?;
                if v.is_empty() || v.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
                    bail!(invalid(
                        "weights.values",
                        "must be a nonempty list of finite nonnegative numbers"
                    ));
                }
            }
        }
        if w.model != WeightKind::Rho {
            let p = w.p.ok_or_else(|| invalid("weights.p", "required"))?;
            if !(p > 0.0 && p < 2.0) {
                bail!(invalid("weights.p", format!("must lie in (0, 2), got {p}")));
            }
            positive("weights.xi", w.xi.ok_or_else(|| invalid("weights.xi", "required"))?)?;
        }
        if let Some(k) = w.k {
            positive("weights.k", k)?;
        }
        if w.scan_limit == 0 {
            bail!(invalid("weights.scan_limit", "must be at least 1"));
        }
        let e = &self.expansion;
        if e.j == Some(0) {
            bail!(invalid("expansion.j", "must be at least 1"));
        }
        if e.ref_set_size == 0 {
            bail!(invalid("expansion.ref_set_size", "must be at least 1"));
        }
        if let Some(&bad) = e.ns.iter().find(|&&n| n == 0 || n > e.ref_set_size) {
            bail!(invalid("expansion.ns", format!("{bad} is outside [1, ref_set_size]")));
        }
        if e.estimator == EstimatorKind::Mc && e.samples < 2 {
            bail!(invalid("expansion.samples", "must be at least 2"));
        }
        if !e.s_out.is_finite() {
            bail!(invalid("expansion.s_out", "must be finite"));
        }
        if e.dim_cap == Some(0) {
            bail!(invalid("expansion.dim_cap", "must be at least 1"));
        }
        positive("solver.rel_tol", self.solver.rel_tol)?;
        if self.solver.max_iter == 0 {
            bail!(invalid("solver.max_iter", "must be at least 1"));
        }
        if let Some(o) = self.solver.omega {
            positive("solver.omega", o)?;
        }
        let v = &self.verify;
        if v.moment_samples < 1000 {
            bail!(invalid("verify.moment_samples", "must be at least 1000"));
        }
        positive("verify.perturbation_delta", v.perturbation_delta)?;
        positive("verify.strip_c", v.strip_c)?;
        positive("verify.strip_alpha", v.strip_alpha)?;
        if !(0.0..2.0).contains(&v.strip_tau) {
            bail!(invalid("verify.strip_tau", "must lie in [0, 2)"));
        }
        if let Some(t) = v.strip_theta {
            positive("verify.strip_theta", t)?;
        }
        let i = &self.identity;
        if !(1..=4).contains(&i.max_dim) {
            bail!(invalid("identity.max_dim", "must lie in 1..=4"));
        }
        if i.max_degree > 10 {
            bail!(invalid("identity.max_degree", "must be at most 10"));
        }
        if i.max_terms == 0 || i.max_m == 0 {
            bail!(invalid("identity", "max_terms and max_m must be at least 1"));
        }
        positive("identity.tol", i.tol)?;
        Ok(())
    }

    pub fn grid(&self) -> Result<PeriodicGrid> {
        Ok(PeriodicGrid::new(self.grid.d, self.grid.n)?)
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            rel_tol: self.solver.rel_tol,
            max_iter: self.solver.max_iter,
            relaxation: self.solver.omega.map_or(Relaxation::Automatic, Relaxation::Fixed),
            dealias: self.solver.dealias,
        }
    }

    /// The decay model, if the config has one.
    pub fn model(&self) -> Result<Option<WeightModel>> {
        let w = &self.weights;
        let (p, xi) = (w.p.unwrap_or(1.0), w.xi.unwrap_or(1.0));
        Ok(match w.model {
            WeightKind::PowerLaw => Some(WeightModel::power_law(w.c0.unwrap(), w.theta.unwrap(), p, xi, w.m)?),
            WeightKind::Explicit => Some(WeightModel::explicit(w.values.clone().unwrap(), p, xi, w.m)?),
            WeightKind::Rho => None,
        })
    }

    pub fn require_model(&self, subcommand: &str) -> Result<WeightModel> {
        self.model()?.ok_or_else(|| {
            invalid(
                "weights.model",
                format!("`{subcommand}` needs a decay model (power_law or explicit)"),
            )
        })
    }

    pub fn rho(&self) -> Result<AdmissibleWeights> {
        Ok(match self.model()? {
            Some(m) => AdmissibleWeights::from_model(m),
            None => AdmissibleWeights::explicit(self.weights.values.clone().unwrap())?,
        })
    }

    /// Truncation dimension `J`.
    pub fn truncation(&self, rho: &AdmissibleWeights) -> Result<usize> {
        self.expansion
            .j
            .or(rho.available_dims())
            .ok_or_else(|| invalid("expansion.j", "required for an infinite weight sequence"))
    }

    pub fn dim_cap(&self, rho: &AdmissibleWeights) -> Result<usize> {
        match self.expansion.dim_cap {
            Some(c) => Ok(c),
            None => self.truncation(rho),
        }
    }

    pub fn estimator(&self, seed: u64) -> Estimator {
        match self.expansion.estimator {
            EstimatorKind::Tensor => Estimator::tensor(self.expansion.pad),
            EstimatorKind::Mc => Estimator::monte_carlo(self.expansion.samples, seed),
        }
    }

    pub fn rhs(&self, base_dir: &Path) -> Result<PeriodicField> {
        let grid = self.grid()?;
        match self.rhs.kind {
            RhsKind::File => {
                let rel = self.rhs.path.as_ref().unwrap();
                let path = if rel.is_absolute() {
                    rel.clone()
                } else {
                    base_dir.join(rel)
                };
                let file = fs::File::open(&path).with_context(|| format!("reading {}", path.display()))?;
                let f = read_field_binary(std::io::BufReader::new(file))?;
                if f.grid() != grid {
                    return Err(invalid("rhs.path", "field grid does not match grid.d / grid.n"));
                }
                Ok(f)
            }
            kind => {
                let mut wave = self.rhs.wave.clone().unwrap_or_else(|| vec![0; grid.dim()]);
                if self.rhs.wave.is_none() {
                    wave[0] = 1;
                }
                let phase = move |x: &[f64]| 2.0 * PI * wave.iter().zip(x).map(|(k, x)| *k as f64 * x).sum::<f64>();
                Ok(match kind {
                    RhsKind::Sin => PeriodicField::from_fn(grid, |x| phase(x).sin()),
                    _ => PeriodicField::from_fn(grid, |x| phase(x).cos()),
                })
            }
        }
    }

    pub fn problem(&self, base_dir: &Path, subcommand: &str) -> Result<ParametricProblem> {
        let model = self.require_model(subcommand)?;
        let rho = AdmissibleWeights::from_model(model.clone());
        let spec = ProblemSpec {
            grid: self.grid()?,
            basis_t: self.basis.t,
            model,
            f: self.rhs(base_dir)?,
            truncation: self.truncation(&rho)?,
            s_out: self.expansion.s_out,
            solver: self.solver(),
        };
        ParametricProblem::new(spec).map_err(|e| anyhow!(e))
    }
}
