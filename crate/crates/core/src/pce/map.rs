use crate::error::{Error, Result};
use crate::indices::WeightModel;
use crate::torus::{hnorm, solve_diffusion, synthesize, PeriodicField, PeriodicGrid, SolverConfig, TrigBasis};

/// A map `y ∈ R^J ↦ u(y) ∈ X`, with `X` represented by real vectors.
pub trait ParametricMap: Sync {
    /// Number of parameters `J`.
    fn dim(&self) -> usize;

    /// Length of the vectors returned by [`ParametricMap::evaluate`].
    fn output_len(&self) -> usize;

    fn evaluate(&self, y: &[f64]) -> Result<Vec<f64>>;

    /// `‖v‖_X` of an output-shaped vector.
    fn norm(&self, v: &[f64]) -> Result<f64>;
}

/// A closure-backed map with the Euclidean norm.
pub struct VectorMap<F> {
    dim: usize,
    output_len: usize,
    f: F,
}

impl<F> VectorMap<F>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    pub fn new(dim: usize, output_len: usize, f: F) -> Self {
        Self { dim, output_len, f }
    }
}

impl<F> ParametricMap for VectorMap<F>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn output_len(&self) -> usize {
        self.output_len
    }

    fn evaluate(&self, y: &[f64]) -> Result<Vec<f64>> {
        let v = (self.f)(y);
        if v.len() != self.output_len {
            return Err(Error::Internal(format!(
                "map returned {} values, expected {}",
                v.len(),
                self.output_len
            )));
        }
        Ok(v)
    }

    fn norm(&self, v: &[f64]) -> Result<f64> {
        Ok(v.iter().map(|x| x * x).sum::<f64>().sqrt())
    }
}

/// Inputs of [`ParametricProblem::new`].
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub grid: PeriodicGrid,
    /// Smoothness `t` of the basis normalization space `Ḣ^t`.
    pub basis_t: f64,
    pub model: WeightModel,
    pub f: PeriodicField,
    /// Truncation dimension `J`.
    pub truncation: usize,
    /// Output norm `Ḣ^{s_out}`.
    pub s_out: f64,
    pub solver: SolverConfig,
}

/// `y ↦ u(y)` solving `−∇·(e^{a(y)} ∇u) = f` with `a(y) = Σ_{j≤J} y_j b_j ψ_j`.
#[derive(Clone, Debug)]
pub struct ParametricProblem {
    spec: ProblemSpec,
    basis: TrigBasis,
    /// `b_j ψ_j` as real samples.
    modes: Vec<Vec<f64>>,
}

impl ParametricProblem {
    pub fn new(spec: ProblemSpec) -> Result<Self> {
        let d = spec.grid.dim();
        if spec.truncation == 0 {
            return Err(Error::domain("truncation dimension J must be at least 1"));
        }
        if !(spec.basis_t > d as f64 / 2.0) {
            return Err(Error::domain(format!(
                "basis smoothness t = {} must exceed d/2 = {}",
                spec.basis_t,
                d as f64 / 2.0
            )));
        }
        if spec.f.grid() != spec.grid {
            return Err(Error::domain("right-hand side is not on the problem grid"));
        }
        if !spec.f.is_real() {
            return Err(Error::domain("right-hand side must be real"));
        }
        if spec.f.mean().norm() > 1e-12 * spec.f.l2_norm() {
            return Err(Error::domain("right-hand side must have zero mean"));
        }
        if !spec.s_out.is_finite() {
            return Err(Error::domain("output smoothness must be finite"));
        }
        spec.solver.validate()?;
        let basis = TrigBasis::new(spec.basis_t, d)?;
        let modes = (1..=spec.truncation)
            .map(|j| synthesize(&[(j, spec.model.b(j))], &basis, spec.grid).map(|f| f.real_values()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { spec, basis, modes })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn basis(&self) -> &TrigBasis {
        &self.basis
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.spec.grid
    }

    /// `a(·, y) = Σ_{j≤J} y_j b_j ψ_j`.
    pub fn coefficient(&self, y: &[f64]) -> Result<PeriodicField> {
        if y.len() != self.spec.truncation {
            return Err(Error::domain(format!(
                "expected {} parameters, got {}",
                self.spec.truncation,
                y.len()
            )));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("parameters must be finite"));
        }
        let mut a = vec![0.0; self.spec.grid.len()];
        for (yj, mode) in y.iter().zip(&self.modes) {
            a.iter_mut().zip(mode).for_each(|(s, m)| *s += yj * m);
        }
        PeriodicField::from_real_values(self.spec.grid, &a)
    }

    /// Wraps real samples of an output vector as a field.
    pub fn to_field(&self, v: &[f64]) -> Result<PeriodicField> {
        PeriodicField::from_real_values(self.spec.grid, v)
    }
}

/// `G(a(·, y))`.
pub fn evaluate_solution(problem: &ParametricProblem, y: &[f64]) -> Result<PeriodicField> {
    let a = problem.coefficient(y)?;
    solve_diffusion(&a, &problem.spec.f, &problem.spec.solver)
}

impl ParametricMap for ParametricProblem {
    fn dim(&self) -> usize {
        self.spec.truncation
    }

    fn output_len(&self) -> usize {
        self.spec.grid.len()
    }

    fn evaluate(&self, y: &[f64]) -> Result<Vec<f64>> {
        evaluate_solution(self, y).map(|u| u.real_values())
    }

    fn norm(&self, v: &[f64]) -> Result<f64> {
        hnorm(&self.to_field(v)?, self.spec.s_out)
    }
}
