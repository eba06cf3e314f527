//! JSON description of measures.
//!
//! ```json
//! {"domain": [-1, 1], "atoms": [[0.0, 2.0]],
//!  "density": {"kind": "expr", "expr": "math::abs(x)", "n": 256}}
//! ```
//! Boxes are `{"lo": [..], "hi": [..]}`, 2D atoms are `[x, y, m]`.

use evalexpr::{build_operator_tree, ContextWithMutableVariables, DefaultNumericTypes, HashMapContext, Node, Value};
use serde::{Deserialize, Serialize};

use super::density::CellGrid;
use super::{Atom, Curve, Density, Density1D, Density2D, Domain, JordanPair, SignedMeasure};
use crate::{Error, Result};

/// A parsed arithmetic expression in the variables `x` (and `y` in 2D);
/// `pi` is predefined and functions use the `math::` prefix.
#[derive(Debug, Clone)]
pub struct Expr {
    src: String,
    vars: Vec<&'static str>,
    node: Node<DefaultNumericTypes>,
}

impl Expr {
    pub fn parse(src: &str, vars: &[&'static str]) -> Result<Self> {
        let node = build_operator_tree::<DefaultNumericTypes>(src)
            .map_err(|e| Error::Config(format!("expression {src:?}: {e}")))?;
        for v in node.iter_read_variable_identifiers() {
            if v != "pi" && !vars.contains(&v) {
                return Err(Error::Config(format!("expression {src:?} uses unknown variable {v:?}")));
            }
        }
        let e = Expr {
            src: src.to_string(),
            vars: vars.to_vec(),
            node,
        };
        // Structural errors (dangling operators, arity) only surface on evaluation.
        e.eval(&vec![0.5; vars.len()])?;
        Ok(e)
    }

    pub fn source(&self) -> &str {
        &self.src
    }

    pub fn eval(&self, args: &[f64]) -> Result<f64> {
        let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
        let set = |ctx: &mut HashMapContext, k: &str, v: f64| {
            ctx.set_value(k.to_string(), Value::Float(v))
                .map_err(|e| Error::Config(e.to_string()))
        };
        set(&mut ctx, "pi", std::f64::consts::PI)?;
        for (k, v) in self.vars.iter().zip(args) {
            set(&mut ctx, k, *v)?;
        }
        match self.node.eval_with_context(&ctx) {
            Ok(Value::Float(v)) => Ok(v),
            Ok(Value::Int(v)) => Ok(v as f64),
            Ok(other) => Err(Error::Config(format!(
                "expression {:?} gave non-number {other:?}",
                self.src
            ))),
            Err(e) => Err(Error::Config(format!("expression {:?}: {e}", self.src))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainSpec {
    Interval([f64; 2]),
    Box { lo: [f64; 2], hi: [f64; 2] },
}

impl DomainSpec {
    pub fn build(&self) -> Result<Domain> {
        match *self {
            DomainSpec::Interval([a, b]) if a < b => Ok(Domain::interval(a, b)),
            DomainSpec::Box { lo, hi } if lo[0] < hi[0] && lo[1] < hi[1] => Ok(Domain::rect(lo, hi)),
            _ => Err(Error::Config(format!("empty domain {self:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensitySpec {
    /// 1D: `breaks` with nodal `values`, or per-cell `left`/`right` values.
    /// 2D: per-cell density `values` on an `n[0] × n[1]` grid, row `i` first.
    Table {
        #[serde(default)]
        breaks: Vec<f64>,
        #[serde(default)]
        values: Vec<f64>,
        #[serde(default)]
        left: Vec<f64>,
        #[serde(default)]
        right: Vec<f64>,
        #[serde(default)]
        n: Option<[usize; 2]>,
    },
    /// 1D: linear interpolation at `n` uniform nodes over `support` (default
    /// the domain). 2D: cell masses on an `n × n` grid by adaptive quadrature.
    Expr {
        expr: String,
        #[serde(default)]
        n: Option<usize>,
        #[serde(default)]
        support: Option<[f64; 2]>,
        #[serde(default)]
        tol: Option<f64>,
    },
}

impl DensitySpec {
    pub fn build(&self, domain: &Domain) -> Result<Density> {
        match (self, domain.dim()) {
            (
                DensitySpec::Table {
                    breaks,
                    values,
                    left,
                    right,
                    n: None,
                },
                1,
            ) => {
                let d = if !values.is_empty() {
                    Density1D::from_nodes(breaks.clone(), values.clone())
                } else {
                    Density1D::new(breaks.clone(), left.clone(), right.clone())
                };
                d.map(Density::One).map_err(|e| Error::Config(e.to_string()))
            }
            (DensitySpec::Table { values, n: Some(n), .. }, 2) => {
                let grid = CellGrid::new([domain.lo[0], domain.lo[1]], [domain.hi[0], domain.hi[1]], *n);
                if values.len() != grid.len() {
                    return Err(Error::Config(format!("density table needs {} cell values", grid.len())));
                }
                let h = grid.h();
                let mass = values.iter().map(|v| v * h[0] * h[1]).collect();
                Ok(Density::Two(Density2D::Cells { grid, mass }))
            }
            (DensitySpec::Expr { expr, n, support, .. }, 1) => {
                let e = Expr::parse(expr, &["x"])?;
                let (a, b) = support.map(|s| (s[0], s[1])).unwrap_or(domain.bounds1());
                let n = n.unwrap_or(256).max(2);
                let xs: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
                let vals = xs.iter().map(|x| e.eval(&[*x])).collect::<Result<Vec<_>>>()?;
                if vals.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Config(format!(
                        "density {expr:?} is not finite at a sample node"
                    )));
                }
                Ok(Density::One(
                    Density1D::from_nodes(xs, vals).map_err(|e| Error::Config(e.to_string()))?,
                ))
            }
            (DensitySpec::Expr { expr, n, tol, .. }, 2) => {
                let e = Expr::parse(expr, &["x", "y"])?;
                e.eval(&[domain.lo[0], domain.lo[1]]).map(|_| ())?;
                let n = n.unwrap_or(64).max(1);
                let grid = CellGrid::new([domain.lo[0], domain.lo[1]], [domain.hi[0], domain.hi[1]], [n, n]);
                let d = Density2D::from_fn(grid, |p| e.eval(&p).unwrap_or(f64::NAN), tol.unwrap_or(1e-8));
                if let Density2D::Cells { mass, .. } = &d {
                    if mass.iter().any(|m| !m.is_finite()) {
                        return Err(Error::Config(format!("density {expr:?} has a non-integrable cell")));
                    }
                }
                Ok(Density::Two(d))
            }
            _ => Err(Error::Config("density spec does not fit the domain dimension".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub domain: DomainSpec,
    #[serde(default)]
    pub atoms: Vec<Vec<f64>>,
    #[serde(default)]
    pub density: Option<DensitySpec>,
    #[serde(default)]
    pub curves: Vec<Curve>,
}

impl MeasureSpec {
    pub fn build(&self) -> Result<SignedMeasure> {
        let domain = self.domain.build()?;
        let d = domain.dim();
        let mut atoms = Vec::new();
        for a in &self.atoms {
            if a.len() != d + 1 {
                return Err(Error::Config(format!("atom {a:?} needs {} coordinates and a mass", d)));
            }
            atoms.push(Atom {
                at: a[..d].to_vec(),
                mass: a[d],
            });
        }
        let density = self.density.as_ref().map(|s| s.build(&domain)).transpose()?;
        SignedMeasure::new(domain, atoms, density, self.curves.clone())
    }
}

/// Either an explicit Jordan pair or a signed measure to decompose.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    #[serde(default)]
    pub plus: Option<MeasureSpec>,
    #[serde(default)]
    pub minus: Option<MeasureSpec>,
    #[serde(default)]
    pub signed: Option<MeasureSpec>,
}

impl PairSpec {
    pub fn build(&self) -> Result<JordanPair> {
        match (&self.plus, &self.minus, &self.signed) {
            (None, None, Some(s)) => Ok(super::jordan_decompose(&s.build()?)),
            (p, m, None) if p.is_some() || m.is_some() => {
                let p = p.as_ref().map(MeasureSpec::build).transpose()?;
                let m = m.as_ref().map(MeasureSpec::build).transpose()?;
                let dom = p.as_ref().or(m.as_ref()).unwrap().domain().clone();
                let p = p.unwrap_or_else(|| SignedMeasure::zero(dom.clone()));
                let m = m.unwrap_or_else(|| SignedMeasure::zero(dom));
                JordanPair::new(p, m)
            }
            _ => Err(Error::Config(
                "measure pair needs `signed`, or `plus` and/or `minus`".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_atoms_and_expression_density() {
        let s: MeasureSpec = serde_json::from_str(
            r#"{"domain":[-1,1],"atoms":[[0.0,2.0]],"density":{"kind":"expr","expr":"math::abs(x)","n":3}}"#,
        )
        .unwrap();
        let m = s.build().unwrap();
        assert_eq!(m.atoms().len(), 1);
        assert!((m.total_mass() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn table_density_and_box() {
        let s: MeasureSpec = serde_json::from_str(
            r#"{"domain":{"lo":[0,0],"hi":[2,1]},"atoms":[[1,0.5,1]],"density":{"kind":"table","n":[2,1],"values":[1,3]}}"#,
        )
        .unwrap();
        let m = s.build().unwrap();
        assert!((m.total_mass() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn expression_errors_are_config_errors() {
        assert!(Expr::parse("1 +", &["x"]).unwrap_err().is_config());
        assert!(Expr::parse("z * 2", &["x"]).unwrap_err().is_config());
        let e = Expr::parse("2 * pi * x", &["x"]).unwrap();
        assert!((e.eval(&[0.5]).unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(Expr::parse("3", &["x"]).unwrap().eval(&[0.0]).unwrap(), 3.0);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<MeasureSpec>(r#"{"domain":[0,1],"atom":[]}"#).is_err());
    }

    #[test]
    fn pair_from_signed() {
        let p: PairSpec = serde_json::from_str(r#"{"signed":{"domain":[0,1],"atoms":[[0.3,2],[0.7,-1]]}}"#).unwrap();
        let p = p.build().unwrap();
        assert_eq!(p.plus.total_mass(), 2.0);
        assert_eq!(p.minus.total_mass(), 1.0);
    }
}
