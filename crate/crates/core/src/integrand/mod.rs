//! Integrands of linear growth and the objects derived from them.

mod anisotropy;
mod assumptions;
mod library;
mod lifted;

use std::sync::Arc;

use crate::{Error, Result};

pub use anisotropy::{Anisotropy, DEFAULT_POLAR_DIRECTIONS_2D, DEFAULT_POLAR_DIRECTIONS_ND};
pub use assumptions::{check_assumptions, check_assumptions_seeded, AssumptionReport, Witness};
pub use library::{
    anisotropy_from_key, integrand_from_key, symmetric_eigenvalues, AnisotropySpec, IntegrandSpec, ANISOTROPY_KEYS,
    INTEGRAND_KEYS,
};
pub use lifted::{lifted_integrand, lifted_integrand_with_budget, LiftedIntegrand};

/// `(x, ξ) ↦ value`; shared so integrands stay cheap to clone.
pub type PointFn = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;

/// Relative tolerance used when a recession value is needed implicitly.
pub const DEFAULT_RECESSION_TOL: f64 = 1e-10;

/// Largest rung of the recession ladder, `s = 2^RECESSION_RUNGS`.
pub const RECESSION_RUNGS: i32 = 40;

/// A map `f: Ω × R^N → R` with linear growth, `α|ξ| ≤ f ≤ β(|ξ| + 1)`.
///
/// The closure is what numerical routines use; the optional analytic
/// recession, H4 constant and flags are metadata that callers may rely on to
/// skip numerics. Tests strip the analytic recession to exercise the ladder.
#[derive(Clone)]
pub struct Integrand {
    name: String,
    dim: usize,
    eval: PointFn,
    alpha: f64,
    beta: f64,
    h4: Option<f64>,
    recession: Option<PointFn>,
    homogeneous: bool,
    x_dependent: bool,
    sample_box: Vec<(f64, f64)>,
}

impl std::fmt::Debug for Integrand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Integrand")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("h4", &self.h4)
            .finish()
    }
}

impl Integrand {
    pub fn new<F>(name: impl Into<String>, dim: usize, alpha: f64, beta: f64, f: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        assert!(dim >= 1, "integrand dimension must be positive");
        Integrand {
            name: name.into(),
            dim,
            eval: Arc::new(f),
            alpha,
            beta,
            h4: None,
            recession: None,
            homogeneous: false,
            x_dependent: false,
            sample_box: vec![(-1.0, 1.0); dim],
        }
    }

    /// Attach the closed-form recession function `f∞(x, ξ)`.
    pub fn with_recession<F>(mut self, r: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        self.recession = Some(Arc::new(r));
        self
    }

    /// Declare a constant `M` with `f∞ ≤ f + M`.
    pub fn with_h4(mut self, m: f64) -> Self {
        self.h4 = Some(m);
        self
    }

    /// Mark `f(x, ·)` as positively one-homogeneous; then `f∞ = f`.
    pub fn homogeneous(mut self) -> Self {
        self.homogeneous = true;
        self.h4 = Some(self.h4.unwrap_or(0.0));
        self
    }

    pub fn x_dependent(mut self) -> Self {
        self.x_dependent = true;
        self
    }

    /// Box from which assumption checks sample `x`.
    pub fn with_sample_box(mut self, b: Vec<(f64, f64)>) -> Self {
        assert_eq!(b.len(), self.dim);
        self.sample_box = b;
        self
    }

    pub fn without_analytic_recession(mut self) -> Self {
        self.recession = None;
        self.homogeneous = false;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn h4_constant(&self) -> Option<f64> {
        self.h4
    }
    pub fn is_x_dependent(&self) -> bool {
        self.x_dependent
    }
    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }
    pub fn has_analytic_recession(&self) -> bool {
        self.recession.is_some() || self.homogeneous
    }
    pub fn sample_box(&self) -> &[(f64, f64)] {
        &self.sample_box
    }

    #[inline]
    pub fn eval(&self, x: &[f64], xi: &[f64]) -> f64 {
        (self.eval)(x, xi)
    }

    /// `f∞(x, ξ)`, analytic when available, otherwise by the ladder.
    pub fn recession(&self, x: &[f64], xi: &[f64], tol: f64) -> Result<f64> {
        if self.homogeneous {
            return Ok(self.eval(x, xi));
        }
        if let Some(r) = &self.recession {
            return Ok(r(x, xi));
        }
        self.recession_ladder(x, xi, tol)
    }

    /// Recession with the default tolerance.
    pub fn recession_default(&self, x: &[f64], xi: &[f64]) -> Result<f64> {
        self.recession(x, xi, DEFAULT_RECESSION_TOL)
    }

    /// Infallible variant used inside closures: falls back to the last
    /// rung of the ladder, which is a lower bound for `f∞` by convexity.
    pub fn recession_estimate(&self, x: &[f64], xi: &[f64]) -> f64 {
        match self.recession_default(x, xi) {
            Ok(v) => v,
            Err(_) => {
                let s = 2f64.powi(RECESSION_RUNGS);
                let sxi: Vec<f64> = xi.iter().map(|v| v * s).collect();
                (self.eval(x, &sxi) - self.eval(x, &vec![0.0; xi.len()])) / s
            }
        }
    }

    /// Difference quotients `g(s) = (f(x, sξ) − f(x, 0)) / s` on `s = 2^j`.
    ///
    /// By convexity `g` is non-decreasing with limit `f∞(x, ξ)`. The ladder
    /// stops once two rungs agree to `tol·(1 + |g|)` and returns the
    /// Richardson value `2g_j − g_{j−1}` (exact when `g = f∞ − c/s`).
    /// A decreasing ladder means `f(x, ·)` is not convex along `ξ`.
    pub fn recession_ladder(&self, x: &[f64], xi: &[f64], tol: f64) -> Result<f64> {
        if xi.iter().all(|v| *v == 0.0) {
            return Ok(0.0);
        }
        let f0 = self.eval(x, &vec![0.0; xi.len()]);
        let mut sxi = vec![0.0; xi.len()];
        let mut prev: Option<f64> = None;
        for j in 0..=RECESSION_RUNGS {
            let s = 2f64.powi(j);
            for (o, v) in sxi.iter_mut().zip(xi) {
                *o = v * s;
            }
            let g = (self.eval(x, &sxi) - f0) / s;
            if !g.is_finite() {
                return Err(Error::NonConvergent(format!(
                    "non-finite quotient at s = 2^{j} for {}",
                    self.name
                )));
            }
            if let Some(p) = prev {
                let slack = 1e-11 * (1.0 + g.abs().max(p.abs())) + f0.abs() * 1e-15 * 4.0 / s;
                if g < p - slack {
                    return Err(Error::NonConvergent(format!(
                        "difference quotients of {} decrease at s = 2^{j}: not convex",
                        self.name
                    )));
                }
                if (g - p).abs() <= tol * (1.0 + g.abs()) {
                    return Ok(2.0 * g - p);
                }
            }
            prev = Some(g);
        }
        Err(Error::NonConvergent(format!(
            "{} at ξ = {:?}: quotients still moving at s = 2^{}",
            self.name, xi, RECESSION_RUNGS
        )))
    }

    /// `f̂(x, t, ξ) = t f(x, ξ/t)` for `t > 0`, `f∞(x, ξ)` for `t = 0`.
    pub fn perspective(&self, x: &[f64], t: f64, xi: &[f64]) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::Parameter(format!("perspective needs t ≥ 0, got {t}")));
        }
        if t == 0.0 {
            return self.recession_default(x, xi);
        }
        let scaled: Vec<f64> = xi.iter().map(|v| v / t).collect();
        Ok(t * self.eval(x, &scaled))
    }

    /// `f∞` viewed as an anisotropy; bounds are inherited from H1.
    pub fn recession_anisotropy(&self) -> Anisotropy {
        let me = self.clone();
        let a = Anisotropy::new(
            format!("{}∞", self.name),
            self.dim,
            self.alpha,
            self.beta,
            move |x, xi| me.recession_estimate(x, xi),
        );
        if self.x_dependent {
            a.x_dependent()
        } else {
            a
        }
    }

    /// `f + c`; the recession function is unchanged.
    pub fn shifted(&self, c: f64) -> Integrand {
        let inner = self.eval.clone();
        let mut out = self.clone();
        out.name = format!("{}+{c}", self.name);
        out.eval = Arc::new(move |x, xi| inner(x, xi) + c);
        if self.homogeneous {
            let hom = self.eval.clone();
            out.recession = Some(hom);
            out.homogeneous = false;
        }
        out.h4 = self.h4.map(|m| (m - c).max(0.0));
        out.beta = self.beta + c.max(0.0);
        out
    }
}
