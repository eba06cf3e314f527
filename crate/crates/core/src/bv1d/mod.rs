//! Piecewise-affine BV functions on an interval.

mod functional;
mod recovery;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use functional::{
    boundary_term, evaluate_mf, functional_of_measures, w11_functional, weighted_distance, FunctionalBreakdown,
};
pub use recovery::{recovery_sequence, recovery_width};

/// Affine data of one piece: value at its left node and slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub value: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Jump {
    pub x: f64,
    pub left: f64,
    pub right: f64,
}

/// Dirichlet data `(u0(a), u0(b))`; inside it is extended affinely.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub a: f64,
    pub b: f64,
}

impl BoundaryData {
    pub fn zero() -> Self {
        BoundaryData { a: 0.0, b: 0.0 }
    }

    pub fn new(a: f64, b: f64) -> Self {
        BoundaryData { a, b }
    }

    /// Affine extension used wherever an interior `u0` is needed.
    pub fn extension(&self, lo: f64, hi: f64) -> BVFunction1D {
        BVFunction1D::from_values(vec![lo, hi], vec![self.a, self.b]).expect("valid interval")
    }
}

/// One-sided limits closer than this, relative to their size, are treated
/// as equal.
pub const JUMP_TOL: f64 = 1e-12;

pub(crate) fn nearly_equal(l: f64, r: f64) -> bool {
    (l - r).abs() <= JUMP_TOL * (1.0 + l.abs().max(r.abs()))
}

/// `w` on `(a, b)`: affine on each `(nodes[i], nodes[i+1])`, possibly
/// discontinuous at interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct BVFunction1D {
    nodes: Vec<f64>,
    pieces: Vec<Piece>,
}

impl BVFunction1D {
    pub fn new(nodes: Vec<f64>, pieces: Vec<Piece>) -> Result<Self> {
        if nodes.len() < 2 || pieces.len() != nodes.len() - 1 {
            return Err(Error::InvalidFunction(format!(
                "{} nodes need {} pieces, got {}",
                nodes.len(),
                nodes.len().saturating_sub(1),
                pieces.len()
            )));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) || nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidFunction(
                "nodes must be finite and strictly increasing".into(),
            ));
        }
        if pieces.iter().any(|p| !p.value.is_finite() || !p.slope.is_finite()) {
            return Err(Error::InvalidFunction("piece data must be finite".into()));
        }
        Ok(BVFunction1D { nodes, pieces })
    }

    pub fn constant(a: f64, b: f64, c: f64) -> Self {
        Self::new(vec![a, b], vec![Piece { value: c, slope: 0.0 }]).expect("a < b")
    }

    /// Continuous interpolant of nodal values.
    pub fn from_values(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::InvalidFunction("nodes and values differ in length".into()));
        }
        let pieces = nodes
            .windows(2)
            .zip(values.windows(2))
            .map(|(x, v)| Piece {
                value: v[0],
                slope: (v[1] - v[0]) / (x[1] - x[0]),
            })
            .collect();
        Self::new(nodes, pieces)
    }

    /// Piecewise constant from per-piece values.
    pub fn step(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(
            nodes,
            values.into_iter().map(|v| Piece { value: v, slope: 0.0 }).collect(),
        )
    }

    /// `height · 1_A` for a union of disjoint open intervals `A ⊂ (a, b)`.
    pub fn indicator(a: f64, b: f64, intervals: &[(f64, f64)], height: f64) -> Result<Self> {
        let mut nodes = vec![a];
        let mut vals = Vec::new();
        let mut last = a;
        for &(c, d) in intervals {
            if !(c >= last && d > c && d <= b) {
                return Err(Error::InvalidFunction(
                    "intervals must be sorted, disjoint, inside (a, b)".into(),
                ));
            }
            if c > last {
                nodes.push(c);
                vals.push(0.0);
            }
            vals.push(height);
            if d < b {
                nodes.push(d);
            }
            last = d;
        }
        if last < b {
            nodes.push(b);
            vals.push(0.0);
        } else if *nodes.last().unwrap() != b {
            nodes.push(b);
        }
        Self::step(nodes, vals)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// `(left node, right node, piece)` triples.
    pub fn pieces_iter(&self) -> impl Iterator<Item = (f64, f64, Piece)> + '_ {
        self.pieces
            .iter()
            .enumerate()
            .map(move |(i, p)| (self.nodes[i], self.nodes[i + 1], *p))
    }

    fn piece_end(&self, i: usize) -> f64 {
        let p = self.pieces[i];
        p.value + p.slope * (self.nodes[i + 1] - self.nodes[i])
    }

    fn piece_at(&self, i: usize, x: f64) -> f64 {
        let p = self.pieces[i];
        p.value + p.slope * (x - self.nodes[i])
    }

    /// Limit from the left (`x ∈ (a, b]`).
    pub fn left_limit(&self, x: f64) -> f64 {
        let k = self.nodes.partition_point(|&t| t < x);
        let i = k.saturating_sub(1).min(self.pieces.len() - 1);
        if k == 0 {
            return self.pieces[0].value;
        }
        if x == self.nodes[i + 1] {
            self.piece_end(i)
        } else {
            self.piece_at(i, x)
        }
    }

    /// Limit from the right (`x ∈ [a, b)`).
    pub fn right_limit(&self, x: f64) -> f64 {
        let k = self.nodes.partition_point(|&t| t <= x);
        if k == 0 {
            return self.pieces[0].value;
        }
        let i = (k - 1).min(self.pieces.len() - 1);
        self.piece_at(i, x)
    }

    /// Trace from inside at `a`.
    pub fn trace_a(&self) -> f64 {
        self.pieces[0].value
    }

    /// Trace from inside at `b`.
    pub fn trace_b(&self) -> f64 {
        self.piece_end(self.pieces.len() - 1)
    }

    /// `(u⁻, u⁺, u*)` at `x`; at the endpoints all three are the trace.
    pub fn representatives(&self, x: f64) -> (f64, f64, f64) {
        let (a, b) = self.domain();
        if x <= a {
            let t = self.trace_a();
            return (t, t, t);
        }
        if x >= b {
            let t = self.trace_b();
            return (t, t, t);
        }
        let (l, r) = (self.left_limit(x), self.right_limit(x));
        (l.min(r), l.max(r), 0.5 * (l + r))
    }

    /// A.e. value (right limit, left limit at `b`).
    pub fn value(&self, x: f64) -> f64 {
        if x >= self.domain().1 {
            self.trace_b()
        } else {
            self.right_limit(x)
        }
    }

    pub fn jumps(&self) -> Vec<Jump> {
        (1..self.nodes.len() - 1)
            .filter_map(|i| {
                let left = self.piece_end(i - 1);
                let right = self.pieces[i].value;
                // Interpolants store (value, slope), so continuity holds only
                // up to rounding in the end value.
                (!nearly_equal(left, right)).then_some(Jump {
                    x: self.nodes[i],
                    left,
                    right,
                })
            })
            .collect()
    }

    pub fn has_jumps(&self) -> bool {
        !self.jumps().is_empty()
    }

    pub fn total_variation(&self) -> f64 {
        let ac: f64 = self.pieces_iter().map(|(c, d, p)| p.slope.abs() * (d - c)).sum();
        let j: f64 = self.jumps().iter().map(|j| (j.right - j.left).abs()).sum();
        ac + j
    }

    pub fn l1_norm(&self) -> f64 {
        self.pieces_iter()
            .map(|(c, d, p)| {
                let (u, v) = (p.value, p.value + p.slope * (d - c));
                abs_linear_integral(u, v, d - c)
            })
            .sum()
    }

    /// `‖w‖_BV = ‖w‖_L¹ + |Dw|(Ω)`.
    pub fn bv_norm(&self) -> f64 {
        self.l1_norm() + self.total_variation()
    }

    /// Same function with additional nodes (useful for common refinements).
    pub fn refined(&self, extra: &[f64]) -> BVFunction1D {
        let (a, b) = self.domain();
        let mut nodes: Vec<f64> = self
            .nodes
            .iter()
            .cloned()
            .chain(extra.iter().cloned().filter(|x| *x > a && *x < b))
            .collect();
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();
        let pieces = nodes
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let i = self.nodes.partition_point(|&t| t <= mid) - 1;
                Piece {
                    value: self.piece_at(i, w[0]),
                    slope: self.pieces[i].slope,
                }
            })
            .collect();
        BVFunction1D { nodes, pieces }
    }

    /// `s·w + c`.
    pub fn affine_map(&self, s: f64, c: f64) -> BVFunction1D {
        BVFunction1D {
            nodes: self.nodes.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    value: s * p.value + c,
                    slope: s * p.slope,
                })
                .collect(),
        }
    }

    /// Pointwise sum on the common refinement.
    pub fn add(&self, other: &BVFunction1D) -> Result<BVFunction1D> {
        let (a, b) = self.domain();
        let (c, d) = other.domain();
        if (a - c).abs() > 1e-12 || (b - d).abs() > 1e-12 {
            return Err(Error::InvalidFunction("domains differ".into()));
        }
        let u = self.refined(&other.nodes);
        let v = other.refined(&u.nodes);
        Ok(BVFunction1D {
            nodes: u.nodes.clone(),
            pieces: u
                .pieces
                .iter()
                .zip(&v.pieces)
                .map(|(p, q)| Piece {
                    value: p.value + q.value,
                    slope: p.slope + q.slope,
                })
                .collect(),
        })
    }

    pub fn to_spec(&self) -> BvSpec {
        BvSpec {
            domain: [self.domain().0, self.domain().1],
            nodes: self.nodes.clone(),
            pieces: self.pieces.clone(),
            jumps: Some(self.jumps()),
        }
    }
}

/// `∫_0^len |u + (v − u) t/len| dt`.
pub(crate) fn abs_linear_integral(u: f64, v: f64, len: f64) -> f64 {
    if u * v >= 0.0 {
        0.5 * len * (u.abs() + v.abs())
    } else {
        0.5 * len * (u * u + v * v) / (u.abs() + v.abs())
    }
}

/// `{"domain":[a,b], "nodes":[...], "pieces":[{"value","slope"}], "jumps":[...]}`.
///
/// `nodes` may omit the endpoints. `jumps` is optional and, when present,
/// must agree with what the pieces imply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BvSpec {
    pub domain: [f64; 2],
    pub nodes: Vec<f64>,
    pub pieces: Vec<Piece>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jumps: Option<Vec<Jump>>,
}

impl BvSpec {
    pub fn build(&self) -> Result<BVFunction1D> {
        let [a, b] = self.domain;
        if !(a < b) {
            return Err(Error::InvalidFunction(format!("empty domain ({a}, {b})")));
        }
        let mut nodes = self.nodes.clone();
        if nodes.first() != Some(&a) {
            nodes.insert(0, a);
        }
        if nodes.last() != Some(&b) {
            nodes.push(b);
        }
        let u = BVFunction1D::new(nodes, self.pieces.clone())?;
        if let Some(js) = &self.jumps {
            let got = u.jumps();
            let tol = |x: f64| 1e-9 * (1.0 + x.abs());
            for j in js {
                let ok = got.iter().any(|g| {
                    (g.x - j.x).abs() <= tol(j.x)
                        && (g.left - j.left).abs() <= tol(j.left)
                        && (g.right - j.right).abs() <= tol(j.right)
                }) || (j.left == j.right && u.left_limit(j.x) == j.left);
                if !ok {
                    return Err(Error::InvalidFunction(format!("jump {j:?} disagrees with the pieces")));
                }
            }
            if got.iter().any(|g| !js.iter().any(|j| (g.x - j.x).abs() <= tol(j.x))) {
                return Err(Error::InvalidFunction("pieces imply a jump that is not listed".into()));
            }
        }
        Ok(u)
    }
}
