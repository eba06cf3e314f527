use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::anisotropy::norm2;
use super::{check_assumptions, Anisotropy, AssumptionReport, Integrand};
use crate::{Error, Result};

/// The one-homogeneous integrand on `(0, 1) × Ω` built from `f`.
///
/// `f` is first rebased to `f' = f + c` so that `f' ≥ f∞` and
/// `f'(x, 0) > 0`; then `𝗉((x0, x), (ξ0, ξ)) = |ξ0| f'(x, ξ/|ξ0|)` for
/// `ξ0 ≠ 0` and `f∞(x, ξ)` for `ξ0 = 0`. The rebase changes the functional
/// by `c|Ω|` only.
#[derive(Clone, Debug)]
pub struct LiftedIntegrand {
    pub anisotropy: Anisotropy,
    pub shift: f64,
    pub rebased: Integrand,
    pub report: AssumptionReport,
}

const DEFAULT_BUDGET: usize = 2000;

pub fn lifted_integrand(f: &Integrand) -> Result<LiftedIntegrand> {
    lifted_integrand_with_budget(f, DEFAULT_BUDGET)
}

pub fn lifted_integrand_with_budget(f: &Integrand, budget: usize) -> Result<LiftedIntegrand> {
    let report = check_assumptions(f, budget);
    if !report.h4_pass || !report.suggested_m.is_finite() {
        let detail = report
            .witnesses
            .iter()
            .find(|w| w.check == "h4")
            .map(|w| w.detail.clone())
            .unwrap_or_default();
        return Err(Error::H4Violation(format!("{}: {detail}", f.name())));
    }
    // A declared constant is exact; the sampled one can fall short of the sup.
    let mut shift = f
        .h4_constant()
        .unwrap_or(report.suggested_m)
        .max(report.suggested_m)
        .max(0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let xs: Vec<Vec<f64>> = (0..64).map(|_| sample_x(f, &mut rng)).collect();
    let zero = vec![0.0; f.dim()];
    let min_f0 = xs.iter().map(|x| f.eval(x, &zero)).fold(f64::INFINITY, f64::min);
    if min_f0 + shift <= 1e-12 {
        // A homogeneous f vanishes at 0 and the lift would degenerate along
        // horizontal directions; one more unit restores the lower bound.
        shift += 1.0;
    }
    let rebased = if shift == 0.0 { f.clone() } else { f.shifted(shift) };
    let n = f.dim();
    let eval_x = {
        let base = rebased.clone();
        move |xx: &[f64], xi: &[f64]| -> f64 { eval_lifted_at(&base, n, &xx[1..], xi) }
    };
    // Estimate a|Ξ| ≤ 𝗉 ≤ b|Ξ| from unit samples.
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for x in &xs {
        for k in 0..64 {
            let t = PI * (k as f64 + 0.5) / 64.0 - 0.5 * PI;
            let mut dir: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let dn = norm2(&dir).max(1e-12);
            dir.iter_mut().for_each(|d| *d *= t.sin() / dn);
            let mut xi = vec![t.cos()];
            xi.extend(dir);
            let v = eval_lifted_at(&rebased, n, x, &xi) / norm2(&xi);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let mut anisotropy = Anisotropy::new(format!("lift({})", f.name()), n + 1, lo, hi, eval_x);
    if f.is_x_dependent() {
        anisotropy = anisotropy.x_dependent();
    }
    Ok(LiftedIntegrand {
        anisotropy,
        shift,
        rebased,
        report,
    })
}

fn eval_lifted_at(f: &Integrand, n: usize, x: &[f64], xi: &[f64]) -> f64 {
    debug_assert_eq!(xi.len(), n + 1);
    let t = xi[0].abs();
    if t == 0.0 {
        return f.recession_estimate(x, &xi[1..]);
    }
    let scaled: Vec<f64> = xi[1..].iter().map(|v| v / t).collect();
    t * f.eval(x, &scaled)
}

fn sample_x<R: Rng>(f: &Integrand, rng: &mut R) -> Vec<f64> {
    f.sample_box()
        .iter()
        .map(|&(lo, hi)| if hi > lo { rng.gen_range(lo..hi) } else { lo })
        .collect()
}

impl LiftedIntegrand {
    /// `𝗉(X, Ξ)` with `X = (x0, x)`, `Ξ = (ξ0, ξ)`.
    pub fn eval(&self, x: &[f64], xi: &[f64]) -> f64 {
        self.anisotropy.eval(x, xi)
    }
}
