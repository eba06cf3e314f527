//! Signed Radon measures in the forms the functional needs: point masses,
//! absolutely continuous densities and (in 2D) constant-density curves.

mod calibration;
mod density;
pub mod geometry;
mod ic;
mod pairing;
mod spec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use calibration::{verify_calibration, CalibrationField};
pub use density::{CellGrid, Density1D, Density2D};
pub use ic::{ic_check, ic_check_with_tol, ICReport, SetDescription, TestSet2D, TestSetFamily, IC_TOL};
pub use pairing::pairing;
pub use spec::{DensitySpec, Expr, MeasureSpec, PairSpec};

/// An interval `(lo[0], hi[0])` or a box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Domain {
    pub fn interval(a: f64, b: f64) -> Self {
        assert!(a < b, "empty interval ({a}, {b})");
        Domain {
            lo: vec![a],
            hi: vec![b],
        }
    }

    pub fn rect(lo: [f64; 2], hi: [f64; 2]) -> Self {
        assert!(lo[0] < hi[0] && lo[1] < hi[1], "empty box");
        Domain {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn bounds1(&self) -> (f64, f64) {
        (self.lo[0], self.hi[0])
    }

    pub fn contains_strictly(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| v > a && v < b)
    }

    pub fn same_as(&self, other: &Domain) -> bool {
        self.dim() == other.dim()
            && self
                .lo
                .iter()
                .chain(&self.hi)
                .zip(other.lo.iter().chain(&other.hi))
                .all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + a.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub at: Vec<f64>,
    pub mass: f64,
}

/// Polyline carrying `density · H¹`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub points: Vec<[f64; 2]>,
    pub density: f64,
}

impl Curve {
    pub fn length(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]))
            .sum()
    }

    pub fn mass(&self) -> f64 {
        self.density * self.length()
    }

    /// Midpoint quadrature nodes `(point, weight)` with pieces of length ≤ `h`.
    pub fn quadrature(&self, h: f64) -> Vec<([f64; 2], f64)> {
        let mut out = Vec::new();
        for w in self.points.windows(2) {
            let (p, q) = (w[0], w[1]);
            let len = (q[0] - p[0]).hypot(q[1] - p[1]);
            if len == 0.0 {
                continue;
            }
            let n = (len / h).ceil().max(1.0) as usize;
            for i in 0..n {
                let t = (i as f64 + 0.5) / n as f64;
                out.push((
                    [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])],
                    self.density * len / n as f64,
                ));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    One(Density1D),
    Two(Density2D),
}

/// `Σ mᵢ δ_{xᵢ} + H·L^N + Σ θⱼ H¹⌞Sⱼ` on a fixed domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMeasure {
    domain: Domain,
    atoms: Vec<Atom>,
    density: Option<Density>,
    curves: Vec<Curve>,
}

impl SignedMeasure {
    pub fn zero(domain: Domain) -> Self {
        SignedMeasure {
            domain,
            atoms: Vec::new(),
            density: None,
            curves: Vec::new(),
        }
    }

    /// Validates that atoms are interior and that parts match the dimension.
    pub fn new(domain: Domain, atoms: Vec<Atom>, density: Option<Density>, curves: Vec<Curve>) -> Result<Self> {
        let d = domain.dim();
        if d != 1 && d != 2 {
            return Err(Error::InvalidMeasure(format!("dimension {d} is not supported")));
        }
        for a in &atoms {
            if a.at.len() != d || !a.mass.is_finite() {
                return Err(Error::InvalidMeasure(format!("bad atom {a:?}")));
            }
            if !domain.contains_strictly(&a.at) {
                return Err(Error::AtomOnBoundary { at: a.at[0] });
            }
        }
        match (&density, d) {
            (Some(Density::One(h)), 1) => {
                let (a, b) = domain.bounds1();
                if h.support().0 < a - 1e-12 || h.support().1 > b + 1e-12 {
                    return Err(Error::InvalidMeasure("density extends past the domain".into()));
                }
            }
            (Some(Density::Two(_)), 2) | (None, _) => {}
            _ => return Err(Error::InvalidMeasure("density dimension mismatch".into())),
        }
        if d == 1 && !curves.is_empty() {
            return Err(Error::InvalidMeasure("curve measures need a 2D domain".into()));
        }
        for c in &curves {
            if !c.density.is_finite() || c.points.len() < 2 {
                return Err(Error::InvalidMeasure(
                    "curves need ≥ 2 points and finite density".into(),
                ));
            }
        }
        Ok(SignedMeasure {
            domain,
            atoms,
            density,
            curves,
        })
    }

    pub fn atoms_1d(a: f64, b: f64, atoms: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            Domain::interval(a, b),
            atoms.iter().map(|&(x, m)| Atom { at: vec![x], mass: m }).collect(),
            None,
            Vec::new(),
        )
    }

    pub fn with_density_1d(mut self, h: Density1D) -> Result<Self> {
        self.density = Some(Density::One(h));
        Self::new(self.domain, self.atoms, self.density, self.curves)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }
    pub fn dim(&self) -> usize {
        self.domain.dim()
    }
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }
    pub fn density(&self) -> Option<&Density> {
        self.density.as_ref()
    }
    pub fn density_1d(&self) -> Option<&Density1D> {
        match &self.density {
            Some(Density::One(h)) => Some(h),
            _ => None,
        }
    }
    pub fn density_2d(&self) -> Option<&Density2D> {
        match &self.density {
            Some(Density::Two(h)) => Some(h),
            _ => None,
        }
    }
    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn is_zero(&self) -> bool {
        self.total_variation() == 0.0
    }

    pub fn total_mass(&self) -> f64 {
        let a: f64 = self.atoms.iter().map(|a| a.mass).sum();
        let h = match &self.density {
            Some(Density::One(h)) => h.total(),
            Some(Density::Two(h)) => h.total(),
            None => 0.0,
        };
        let c: f64 = self.curves.iter().map(Curve::mass).sum();
        a + h + c
    }

    pub fn total_variation(&self) -> f64 {
        let a: f64 = self.atoms.iter().map(|a| a.mass.abs()).sum();
        let h = match &self.density {
            Some(Density::One(h)) => h.total_abs(),
            Some(Density::Two(h)) => h.total_abs(),
            None => 0.0,
        };
        let c: f64 = self.curves.iter().map(|c| c.mass().abs()).sum();
        a + h + c
    }

    pub fn is_nonnegative(&self) -> bool {
        self.atoms.iter().all(|a| a.mass >= 0.0)
            && self.curves.iter().all(|c| c.density >= 0.0)
            && match &self.density {
                Some(Density::One(h)) => h.is_nonnegative(),
                Some(Density::Two(h)) => h.is_nonnegative(),
                None => true,
            }
    }

    /// Finite total variation is what the discrete model can check of
    /// admissibility; point masses in 2D are not admissible at all since they
    /// charge an `H¹`-null set.
    pub fn admissibility_proxy(&self) -> bool {
        self.total_variation().is_finite() && !(self.dim() == 2 && self.atoms.iter().any(|a| a.mass != 0.0))
    }

    pub fn scaled(&self, s: f64) -> SignedMeasure {
        SignedMeasure {
            domain: self.domain.clone(),
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    at: a.at.clone(),
                    mass: s * a.mass,
                })
                .collect(),
            density: self.density.as_ref().map(|d| match d {
                Density::One(h) => Density::One(h.scaled(s)),
                Density::Two(h) => Density::Two(h.scaled(s)),
            }),
            curves: self
                .curves
                .iter()
                .map(|c| Curve {
                    points: c.points.clone(),
                    density: s * c.density,
                })
                .collect(),
        }
    }

    /// Atoms sharing a location are merged; zero atoms dropped.
    fn merged_atoms(&self) -> Vec<Atom> {
        let mut out: Vec<Atom> = Vec::new();
        for a in &self.atoms {
            if let Some(b) = out.iter_mut().find(|b| same_point(&b.at, &a.at)) {
                b.mass += a.mass;
            } else {
                out.push(a.clone());
            }
        }
        out.retain(|a| a.mass != 0.0);
        out
    }

    /// All atom masses (with sign) sitting at `x`.
    pub fn atom_mass_at(&self, x: &[f64]) -> f64 {
        self.atoms.iter().filter(|a| same_point(&a.at, x)).map(|a| a.mass).sum()
    }

    /// Product with `L¹⌞(0, 1)` in a new leading coordinate `x0`.
    ///
    /// Atoms at `x` become the vertical segments `(0, 1) × {x}` with line
    /// density equal to their mass; a density `H(x)` becomes `H` constant in
    /// `x0`.
    pub fn lift(&self) -> Result<SignedMeasure> {
        if self.dim() != 1 {
            return Err(Error::InvalidMeasure("only 1D measures can be lifted".into()));
        }
        let (a, b) = self.domain.bounds1();
        let curves = self
            .atoms
            .iter()
            .map(|at| Curve {
                points: vec![[0.0, at.at[0]], [1.0, at.at[0]]],
                density: at.mass,
            })
            .collect();
        let density = self.density_1d().map(|h| {
            Density::Two(Density2D::Extruded {
                base: h.clone(),
                x0: (0.0, 1.0),
            })
        });
        SignedMeasure::new(Domain::rect([0.0, a], [1.0, b]), Vec::new(), density, curves)
    }

    /// Mass over the open cell-aligned rectangle and its boundary, split into
    /// `(A⁺, A¹)`, for 2D measures.
    pub(crate) fn classify_mass_2d<F>(&self, classify: F, density_mass: f64, h: f64) -> (f64, f64)
    where
        F: Fn([f64; 2]) -> geometry::Location,
    {
        use geometry::Location::*;
        let (mut plus, mut one) = (density_mass, density_mass);
        for a in &self.atoms {
            match classify([a.at[0], a.at[1]]) {
                Interior => {
                    plus += a.mass;
                    one += a.mass;
                }
                Boundary => plus += a.mass,
                Outside => {}
            }
        }
        for c in &self.curves {
            for (p, w) in c.quadrature(h) {
                match classify(p) {
                    Interior => {
                        plus += w;
                        one += w;
                    }
                    Boundary => plus += w,
                    Outside => {}
                }
            }
        }
        (plus, one)
    }
}

pub(crate) fn same_point(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-12 * (1.0 + x.abs()))
}

/// `μ = μ₊ − μ₋` with both parts non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanPair {
    pub plus: SignedMeasure,
    pub minus: SignedMeasure,
    pub mutually_singular: bool,
}

impl JordanPair {
    /// Pair two non-negative measures given separately; singularity is checked
    /// on atoms (shared locations) and on densities (overlapping support).
    pub fn new(plus: SignedMeasure, minus: SignedMeasure) -> Result<Self> {
        if !plus.domain().same_as(minus.domain()) {
            return Err(Error::InvalidMeasure("pair lives on different domains".into()));
        }
        if !plus.is_nonnegative() || !minus.is_nonnegative() {
            return Err(Error::InvalidMeasure("pair parts must be non-negative".into()));
        }
        let shared_atom = plus
            .merged_atoms()
            .iter()
            .any(|a| minus.merged_atoms().iter().any(|b| same_point(&a.at, &b.at)));
        let shared_density = match (plus.density(), minus.density()) {
            (Some(Density::One(p)), Some(Density::One(m))) => p.overlaps(m),
            (Some(Density::Two(p)), Some(Density::Two(m))) => p.overlaps(m),
            _ => false,
        };
        let shared_curve = plus
            .curves()
            .iter()
            .any(|c| c.density > 0.0 && minus.curves().iter().any(|d| d.density > 0.0 && d.points == c.points));
        Ok(JordanPair {
            mutually_singular: !(shared_atom || shared_density || shared_curve),
            plus,
            minus,
        })
    }

    pub fn zero(domain: Domain) -> Self {
        JordanPair {
            plus: SignedMeasure::zero(domain.clone()),
            minus: SignedMeasure::zero(domain),
            mutually_singular: true,
        }
    }

    /// Net mass `μ(Ω) = μ₊(Ω) − μ₋(Ω)`.
    pub fn net_mass(&self) -> f64 {
        self.plus.total_mass() - self.minus.total_mass()
    }

    pub fn domain(&self) -> &Domain {
        self.plus.domain()
    }

    pub fn lift(&self) -> Result<JordanPair> {
        Ok(JordanPair {
            plus: self.plus.lift()?,
            minus: self.minus.lift()?,
            mutually_singular: self.mutually_singular,
        })
    }

    pub fn scaled(&self, s: f64) -> JordanPair {
        assert!(s >= 0.0);
        JordanPair {
            plus: self.plus.scaled(s),
            minus: self.minus.scaled(s),
            mutually_singular: self.mutually_singular,
        }
    }
}

/// Split `μ` into mutually singular non-negative parts.
pub fn jordan_decompose(mu: &SignedMeasure) -> JordanPair {
    let atoms = mu.merged_atoms();
    let pos = atoms.iter().filter(|a| a.mass > 0.0).cloned().collect();
    let neg = atoms
        .iter()
        .filter(|a| a.mass < 0.0)
        .map(|a| Atom {
            at: a.at.clone(),
            mass: -a.mass,
        })
        .collect();
    let (dp, dn) = match &mu.density {
        Some(Density::One(h)) => {
            let (p, n) = h.split_sign();
            (Some(Density::One(p)), Some(Density::One(n)))
        }
        Some(Density::Two(h)) => {
            let (p, n) = h.split_sign();
            (Some(Density::Two(p)), Some(Density::Two(n)))
        }
        None => (None, None),
    };
    let cp = mu.curves.iter().filter(|c| c.density > 0.0).cloned().collect();
    let cn = mu
        .curves
        .iter()
        .filter(|c| c.density < 0.0)
        .map(|c| Curve {
            points: c.points.clone(),
            density: -c.density,
        })
        .collect();
    JordanPair {
        plus: SignedMeasure {
            domain: mu.domain.clone(),
            atoms: pos,
            density: dp,
            curves: cp,
        },
        minus: SignedMeasure {
            domain: mu.domain.clone(),
            atoms: neg,
            density: dn,
            curves: cn,
        },
        mutually_singular: true,
    }
}
