use super::{Density, JordanPair};
use crate::bv1d::BVFunction1D;
use crate::quad::pairwise_sum;
use crate::{Error, Result};

/// `⟨⟨μ±; w∓⟩⟩ = ∫ w⁻ dμ₊ − ∫ w⁺ dμ₋` in 1D.
///
/// Atoms see the lower (for `μ₊`) or upper (for `μ₋`) one-sided limit; the
/// densities are integrated exactly against the piecewise-affine `w`.
pub fn pairing(pair: &JordanPair, w: &BVFunction1D) -> Result<f64> {
    if pair.domain().dim() != 1 {
        return Err(Error::InvalidMeasure("pairing is one-dimensional".into()));
    }
    let (a, b) = pair.domain().bounds1();
    let (wa, wb) = w.domain();
    if (a - wa).abs() > 1e-12 * (1.0 + a.abs()) || (b - wb).abs() > 1e-12 * (1.0 + b.abs()) {
        return Err(Error::InvalidFunction(format!(
            "function on ({wa}, {wb}) paired with a measure on ({a}, {b})"
        )));
    }
    let mut parts = Vec::new();
    for (m, sign) in [(&pair.plus, 1.0), (&pair.minus, -1.0)] {
        for at in m.atoms() {
            let x = at.at[0];
            if !(x > a && x < b) {
                return Err(Error::AtomOnBoundary { at: x });
            }
            let (lo, hi, _) = w.representatives(x);
            parts.push(if sign > 0.0 { lo * at.mass } else { -hi * at.mass });
        }
        if let Some(Density::One(h)) = m.density() {
            for (c, d, p) in w.pieces_iter() {
                parts.push(sign * h.integral_affine(c, d, p.value, p.slope));
            }
        }
    }
    Ok(pairwise_sum(&parts))
}
