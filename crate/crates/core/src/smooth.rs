//! Smooth real-valued functions of the mean, for studentized-free inference
//! on `φ(μ)`.
//!
//! A [`SmoothFn`] supplies both the value and the gradient; the bootstrap
//! itself only evaluates, but the gradient is part of the contract so that
//! delta-method consumers can rely on it.

use nalgebra::DVector;

use crate::error::{Error, Result};

/// A continuously differentiable map `R^v -> R`.
pub trait SmoothFn {
    /// Expected input dimension, if the function is dimension-specific.
    /// `None` means any dimension is accepted.
    fn dim(&self) -> Option<usize>;

    /// Function value at `x`.
    fn eval(&self, x: &DVector<f64>) -> f64;

    /// Gradient at `x`.
    fn grad(&self, x: &DVector<f64>) -> DVector<f64>;
}

/// The coordinate map on scalar data: `φ(x) = x_1`, defined for `v = 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl SmoothFn for Identity {
    fn dim(&self) -> Option<usize> {
        Some(1)
    }

    fn eval(&self, x: &DVector<f64>) -> f64 {
        x[0]
    }

    fn grad(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_element(x.len(), 1.0)
    }
}

/// Squared Euclidean norm `φ(x) = |x|²` — smooth everywhere, unlike the norm
/// itself.
#[derive(Debug, Clone, Copy, Default)]
pub struct L2NormSquared;

impl SmoothFn for L2NormSquared {
    fn dim(&self) -> Option<usize> {
        None
    }

    fn eval(&self, x: &DVector<f64>) -> f64 {
        x.iter().map(|&c| c * c).sum()
    }

    fn grad(&self, x: &DVector<f64>) -> DVector<f64> {
        x * 2.0
    }
}

/// A multivariate polynomial `φ(x) = Σ_t c_t Π_k x_k^{e_{t,k}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    /// `(coefficient, exponents per coordinate)`; every term carries the
    /// same number of exponents, which fixes the input dimension.
    terms: Vec<(f64, Vec<u32>)>,
    dim: usize,
}

impl Polynomial {
    /// Build from explicit terms. Every exponent vector must have the same
    /// length and there must be at least one term.
    pub fn new(terms: Vec<(f64, Vec<u32>)>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::Empty {
                what: "polynomial terms",
            });
        };
        let dim = first.1.len();
        if dim == 0 {
            return Err(Error::InvalidParameter {
                name: "phi",
                reason: "polynomial terms need at least one exponent".into(),
            });
        }
        for (c, exps) in &terms {
            if !c.is_finite() {
                return Err(Error::NonFinite {
                    what: "polynomial coefficient",
                });
            }
            if exps.len() != dim {
                return Err(Error::DimensionMismatch {
                    what: "polynomial exponent vector",
                    expected: dim,
                    actual: exps.len(),
                });
            }
        }
        Ok(Polynomial { terms, dim })
    }

    /// Parse the compact text form `c:e1,e2,..;c:e1,e2,..`, one term per
    /// semicolon-separated group: coefficient, colon, comma-separated integer
    /// exponents. Example: `1:2,0;-0.5:1,1` is `x² - 0.5·x·y`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for group in spec.split(';').filter(|g| !g.trim().is_empty()) {
            let (coef, exps) = group.split_once(':').ok_or_else(|| Error::InvalidParameter {
                name: "phi",
                reason: format!("term {group:?} is missing the ':' separator"),
            })?;
            let c: f64 = coef.trim().parse().map_err(|_| Error::InvalidParameter {
                name: "phi",
                reason: format!("bad coefficient {coef:?}"),
            })?;
            let e: Vec<u32> = exps
                .split(',')
                .map(|t| {
                    t.trim().parse().map_err(|_| Error::InvalidParameter {
                        name: "phi",
                        reason: format!("bad exponent {t:?}"),
                    })
                })
                .collect::<Result<_>>()?;
            terms.push((c, e));
        }
        Polynomial::new(terms)
    }
}

impl SmoothFn for Polynomial {
    fn dim(&self) -> Option<usize> {
        Some(self.dim)
    }

    fn eval(&self, x: &DVector<f64>) -> f64 {
        self.terms
            .iter()
            .map(|(c, exps)| {
                c * exps
                    .iter()
                    .enumerate()
                    .map(|(k, &e)| x[k].powi(e as i32))
                    .product::<f64>()
            })
            .sum()
    }

    fn grad(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut g = DVector::zeros(self.dim);
        for (c, exps) in &self.terms {
            for d in 0..self.dim {
                let e = exps[d];
                if e == 0 {
                    continue;
                }
                let mut part = c * e as f64 * x[d].powi(e as i32 - 1);
                for (k, &ek) in exps.iter().enumerate() {
                    if k != d {
                        part *= x[k].powi(ek as i32);
                    }
                }
                g[d] += part;
            }
        }
        g
    }
}

/// Check a smooth function against the data dimension before use.
pub fn check_dim(phi: &dyn SmoothFn, v: usize) -> Result<()> {
    match phi.dim() {
        Some(d) if d != v => Err(Error::DimensionMismatch {
            what: "smooth function input",
            expected: d,
            actual: v,
        }),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec2(a: f64, b: f64) -> DVector<f64> {
        DVector::from_vec(vec![a, b])
    }

    #[test]
    fn identity_is_the_coordinate_map() {
        let x = DVector::from_vec(vec![3.5]);
        assert_eq!(Identity.eval(&x), 3.5);
        assert_eq!(Identity.grad(&x)[0], 1.0);
        assert_eq!(Identity.dim(), Some(1));
    }

    #[test]
    fn norm_squared_value_and_gradient() {
        let x = vec2(3.0, 4.0);
        assert_eq!(L2NormSquared.eval(&x), 25.0);
        assert_eq!(L2NormSquared.grad(&x), vec2(6.0, 8.0));
    }

    #[test]
    fn polynomial_matches_hand_computation() {
        // x² - 0.5·x·y at (2, 3): 4 - 3 = 1; gradient (2x - 0.5y, -0.5x) = (2.5, -1)
        let p = Polynomial::parse("1:2,0;-0.5:1,1").unwrap();
        let x = vec2(2.0, 3.0);
        assert_eq!(p.eval(&x), 1.0);
        assert_eq!(p.grad(&x), vec2(2.5, -1.0));
        assert_eq!(p.dim(), Some(2));
    }

    #[test]
    fn polynomial_gradient_agrees_with_finite_differences() {
        let p = Polynomial::parse("2:3,1;1:0,2;-1:1,0").unwrap();
        let x = vec2(0.7, -1.2);
        let g = p.grad(&x);
        let h = 1e-6;
        for d in 0..2 {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[d] += h;
            xm[d] -= h;
            let fd = (p.eval(&xp) - p.eval(&xm)) / (2.0 * h);
            assert!((g[d] - fd).abs() < 1e-6, "coordinate {d}");
        }
    }

    #[test]
    fn parse_rejects_malformed_specs() {
        assert!(Polynomial::parse("").is_err());
        assert!(Polynomial::parse("1").is_err());
        assert!(Polynomial::parse("x:1").is_err());
        assert!(Polynomial::parse("1:a").is_err());
        assert!(Polynomial::parse("1:1;2:1,2").is_err()); // inconsistent dims
    }

    #[test]
    fn dimension_check() {
        assert!(check_dim(&Identity, 1).is_ok());
        assert!(check_dim(&Identity, 2).is_err());
        assert!(check_dim(&L2NormSquared, 7).is_ok());
    }
}
