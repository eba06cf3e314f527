use super::{nearly_equal, BVFunction1D, BoundaryData};
use crate::measure::JordanPair;
use crate::{Error, Result};

/// Ramp width `1/(k·k₀)` with `k₀ = 4 / (smallest gap between nodes, atoms
/// and endpoints)`, so that modifications never overlap or reach an atom.
pub fn recovery_width(u: &BVFunction1D, pair: &JordanPair, k: u64) -> f64 {
    let mut pts: Vec<f64> = u.nodes().to_vec();
    for m in [&pair.plus, &pair.minus] {
        pts.extend(m.atoms().iter().map(|a| a.at[0]));
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let gap = pts.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let k0 = 4.0 / gap;
    1.0 / (k.max(1) as f64 * k0)
}

/// A continuous piecewise-affine `u_k` with traces `u0` approximating `u`.
///
/// Each jump is replaced by an affine ramp. If a `μ₋` atom sits at the jump
/// the ramp is placed on the side that keeps `u_k(x) = u⁺(x)`; for a `μ₊`
/// atom it keeps `u⁻(x)`; otherwise the ramp is centred. Boundary mismatches
/// are absorbed by ramps at the endpoints. Functions without jumps and with
/// matching traces are returned unchanged.
pub fn recovery_sequence(u: &BVFunction1D, u0: &BoundaryData, pair: &JordanPair, k: u64) -> Result<BVFunction1D> {
    if !pair.mutually_singular {
        return Err(Error::NonSingularPair(
            "recovery needs every atom to belong to exactly one part".into(),
        ));
    }
    let (a, b) = u.domain();
    let jumps = u.jumps();
    let trace_ok = u.trace_a() == u0.a && u.trace_b() == u0.b;
    if jumps.is_empty() && trace_ok {
        return Ok(u.clone());
    }
    let d = recovery_width(u, pair, k);
    let plus_at = |x: f64| pair.plus.atom_mass_at(&[x]) > 0.0;
    let minus_at = |x: f64| pair.minus.atom_mass_at(&[x]) > 0.0;

    // (position, value) pairs of the new continuous interpolant.
    let mut pts: Vec<(f64, f64)> = Vec::new();
    if u.trace_a() != u0.a {
        pts.push((a, u0.a));
        pts.push((a + d, u.value(a + d)));
    } else {
        pts.push((a, u.trace_a()));
    }
    for (i, &x) in u.nodes().iter().enumerate() {
        if i == 0 || i == u.nodes().len() - 1 {
            continue;
        }
        let (l, r) = (u.left_limit(x), u.right_limit(x));
        if nearly_equal(l, r) {
            pts.push((x, l));
            continue;
        }
        let up = r > l;
        // Which side keeps the atom's value: left ramp ends at x with r,
        // right ramp starts at x with l.
        let side = if minus_at(x) {
            Some(if up { Side::Left } else { Side::Right })
        } else if plus_at(x) {
            Some(if up { Side::Right } else { Side::Left })
        } else {
            None
        };
        match side {
            Some(Side::Left) => {
                pts.push((x - d, u.left_limit(x - d)));
                pts.push((x, r));
            }
            Some(Side::Right) => {
                pts.push((x, l));
                pts.push((x + d, u.right_limit(x + d)));
            }
            None => {
                pts.push((x - 0.5 * d, u.left_limit(x - 0.5 * d)));
                pts.push((x + 0.5 * d, u.right_limit(x + 0.5 * d)));
            }
        }
    }
    if u.trace_b() != u0.b {
        pts.push((b - d, u.value(b - d)));
        pts.push((b, u0.b));
    } else {
        pts.push((b, u.trace_b()));
    }
    let (xs, vs): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    BVFunction1D::from_values(xs, vs)
}

enum Side {
    Left,
    Right,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{jordan_decompose, SignedMeasure};

    #[test]
    fn continuous_matching_input_is_unchanged() {
        let u = BVFunction1D::from_values(vec![0.0, 0.3, 1.0], vec![0.0, 2.0, 1.0]).unwrap();
        let pair = jordan_decompose(&SignedMeasure::atoms_1d(0.0, 1.0, &[(0.5, 1.0)]).unwrap());
        let r = recovery_sequence(&u, &BoundaryData::new(0.0, 1.0), &pair, 5).unwrap();
        assert_eq!(r, u);
    }

    #[test]
    fn minus_atom_sees_upper_value() {
        let u = BVFunction1D::indicator(0.0, 1.0, &[(0.5, 1.0)], 1.0).unwrap();
        let pair = jordan_decompose(&SignedMeasure::atoms_1d(0.0, 1.0, &[(0.5, -1.0)]).unwrap());
        for k in [1, 10, 1000] {
            let r = recovery_sequence(&u, &BoundaryData::new(0.0, 1.0), &pair, k).unwrap();
            assert!(!r.has_jumps());
            assert_eq!(r.value(0.5), 1.0);
            assert_eq!((r.trace_a(), r.trace_b()), (0.0, 1.0));
        }
    }

    #[test]
    fn shared_atoms_are_refused() {
        let u = BVFunction1D::indicator(0.0, 1.0, &[(0.5, 1.0)], 1.0).unwrap();
        let a = SignedMeasure::atoms_1d(0.0, 1.0, &[(0.5, 1.0)]).unwrap();
        let pair = JordanPair::new(a.clone(), a).unwrap();
        assert!(matches!(
            recovery_sequence(&u, &BoundaryData::zero(), &pair, 3),
            Err(Error::NonSingularPair(_))
        ));
    }
}
