use super::{HermitianOperator, SpectralError};

/// A family of Hamiltonians `H(lambda)` over `n_params()` real parameters.
pub trait ParametrizedModel {
    fn n_params(&self) -> usize;

    fn hamiltonian(&self, lambda: &[f64]) -> Result<HermitianOperator, SpectralError>;

    /// Analytic `d H / d lambda_mu` for every parameter, when known.
    fn analytic_derivatives(
        &self,
        _lambda: &[f64],
    ) -> Option<Result<Vec<HermitianOperator>, SpectralError>> {
        None
    }

    fn labels(&self) -> Vec<String> {
        (0..self.n_params()).map(|i| format!("l{i}")).collect()
    }

    fn in_domain(&self, _lambda: &[f64]) -> bool {
        true
    }
}

/// `H(lambda) = H0 + sum_mu lambda_mu V_mu`.
#[derive(Debug, Clone)]
pub struct LinearModel {
    pub base: HermitianOperator,
    pub generators: Vec<HermitianOperator>,
}

impl ParametrizedModel for LinearModel {
    fn n_params(&self) -> usize {
        self.generators.len()
    }

    fn hamiltonian(&self, lambda: &[f64]) -> Result<HermitianOperator, SpectralError> {
        check_len(self.n_params(), lambda)?;
        Ok(self
            .generators
            .iter()
            .zip(lambda)
            .fold(self.base.clone(), |acc, (v, &l)| acc.add(&v.scale(l))))
    }

    fn analytic_derivatives(
        &self,
        _lambda: &[f64],
    ) -> Option<Result<Vec<HermitianOperator>, SpectralError>> {
        Some(Ok(self.generators.clone()))
    }
}

/// Adapter for closures, mostly for tests and quick experiments.
pub struct FnModel<F> {
    n_params: usize,
    hamiltonian: F,
    domain: Option<Vec<(f64, f64)>>,
}

impl<F> FnModel<F>
where
    F: Fn(&[f64]) -> HermitianOperator,
{
    pub fn new(n_params: usize, hamiltonian: F) -> Self {
        Self {
            n_params,
            hamiltonian,
            domain: None,
        }
    }

    /// Restricts each parameter to the closed interval `[lo, hi]`.
    pub fn with_domain(mut self, bounds: Vec<(f64, f64)>) -> Self {
        self.domain = Some(bounds);
        self
    }
}

impl<F> ParametrizedModel for FnModel<F>
where
    F: Fn(&[f64]) -> HermitianOperator,
{
    fn n_params(&self) -> usize {
        self.n_params
    }

    fn hamiltonian(&self, lambda: &[f64]) -> Result<HermitianOperator, SpectralError> {
        check_len(self.n_params, lambda)?;
        Ok((self.hamiltonian)(lambda))
    }

    fn in_domain(&self, lambda: &[f64]) -> bool {
        match &self.domain {
            None => true,
            Some(b) => b
                .iter()
                .zip(lambda)
                .all(|(&(lo, hi), &x)| x >= lo && x <= hi),
        }
    }
}

fn check_len(expected: usize, lambda: &[f64]) -> Result<(), SpectralError> {
    if lambda.len() != expected {
        return Err(SpectralError::DimensionMismatch {
            expected,
            got: lambda.len(),
        });
    }
    Ok(())
}

/// Central differences `(H(l + d e_mu) - H(l - d e_mu)) / 2d`, symmetrized
/// to exact Hermiticity.
pub fn numeric_derivatives(
    model: &dyn ParametrizedModel,
    lambda: &[f64],
    step: f64,
) -> Result<Vec<HermitianOperator>, SpectralError> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(SpectralError::InvalidStep(step));
    }
    check_len(model.n_params(), lambda)?;
    let mut out = Vec::with_capacity(lambda.len());
    for mu in 0..lambda.len() {
        let mut plus = lambda.to_vec();
        let mut minus = lambda.to_vec();
        plus[mu] += step;
        minus[mu] -= step;
        for p in [&plus, &minus] {
            if !model.in_domain(p) {
                return Err(SpectralError::DomainError(format!(
                    "parameter {mu} at {:?} with step {step}",
                    p
                )));
            }
        }
        let hp = model.hamiltonian(&plus)?;
        let hm = model.hamiltonian(&minus)?;
        let diff = (hp.matrix() - hm.matrix()).scale(0.5 / step);
        out.push(HermitianOperator::symmetrized(diff));
    }
    Ok(out)
}

/// Analytic derivatives when the model provides them, central differences otherwise.
pub fn derivatives(
    model: &dyn ParametrizedModel,
    lambda: &[f64],
    step: f64,
) -> Result<Vec<HermitianOperator>, SpectralError> {
    match model.analytic_derivatives(lambda) {
        Some(d) => d,
        None => numeric_derivatives(model, lambda, step),
    }
}
