use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy)]
pub struct NewtonConfig {
    /// Convergence threshold on the residual sup-norm.
    pub tol: f64,
    pub max_iter: usize,
    /// Central-difference step for the Jacobian, scaled by max(1, |x_j|).
    pub fd_step: f64,
    /// Backtracking factor for the damped step.
    pub damping: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            tol: 1e-10,
            max_iter: 60,
            fd_step: 1e-7,
            damping: 0.5,
        }
    }
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Damped Newton iteration for a square system F(x) = 0.
///
/// The residual closure may fail (e.g. a quadrature inside it); failures
/// at the current iterate abort, failures at trial points merely shorten
/// the step.
pub fn newton_nd<F>(f: F, x0: &[f64], cfg: &NewtonConfig) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x)?;
    if fx.len() != n {
        return Err(Error::DimensionMismatch {
            context: format!("residual has length {}, expected {}", fx.len(), n),
        });
    }

    for _ in 0..cfg.max_iter {
        let res = sup_norm(&fx);
        if res <= cfg.tol {
            return Ok(x);
        }

        // central-difference Jacobian
        let mut jac = DMatrix::<f64>::zeros(n, n);
        let mut xp = x.clone();
        for j in 0..n {
            let h = cfg.fd_step * x[j].abs().max(1.0);
            xp[j] = x[j] + h;
            let fp = f(&xp)?;
            xp[j] = x[j] - h;
            let fm = f(&xp)?;
            xp[j] = x[j];
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }

        let rhs = DVector::from_iterator(n, fx.iter().map(|v| -v));
        let lu = jac.lu();
        let step = lu
            .solve(&rhs)
            .ok_or_else(|| Error::SingularJacobian { at: x.clone() })?;

        // backtracking line search on the residual sup-norm
        let mut lambda = 1.0;
        let mut accepted = false;
        while lambda > 1e-8 {
            let trial: Vec<f64> = (0..n).map(|i| x[i] + lambda * step[i]).collect();
            match f(&trial) {
                Ok(ft) if sup_norm(&ft) < res => {
                    x = trial;
                    fx = ft;
                    accepted = true;
                    break;
                }
                _ => lambda *= cfg.damping,
            }
        }
        if !accepted {
            return Err(Error::NewtonDidNotConverge {
                iterations: cfg.max_iter,
                residual: res,
                last: x,
            });
        }
    }

    let res = sup_norm(&fx);
    if res <= cfg.tol {
        Ok(x)
    } else {
        Err(Error::NewtonDidNotConverge {
            iterations: cfg.max_iter,
            residual: res,
            last: x,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_quadratic_system() {
        // x^2 + y^2 = 4, x y = 1
        let f = |v: &[f64]| -> Result<Vec<f64>> {
            Ok(vec![v[0] * v[0] + v[1] * v[1] - 4.0, v[0] * v[1] - 1.0])
        };
        let x = newton_nd(f, &[2.0, 0.3], &NewtonConfig::default()).unwrap();
        assert!((x[0] * x[0] + x[1] * x[1] - 4.0).abs() < 1e-10);
        assert!((x[0] * x[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn damping_handles_poor_start() {
        // steep scalar-like system where full steps overshoot
        let f = |v: &[f64]| -> Result<Vec<f64>> { Ok(vec![v[0].atan()]) };
        let x = newton_nd(f, &[20.0], &NewtonConfig::default()).unwrap();
        assert!(x[0].abs() < 1e-10);
    }

    #[test]
    fn reports_failure_with_last_iterate() {
        let f = |v: &[f64]| -> Result<Vec<f64>> { Ok(vec![v[0] * v[0] + 1.0]) };
        match newton_nd(f, &[3.0], &NewtonConfig::default()) {
            Err(Error::NewtonDidNotConverge { last, residual, .. }) => {
                assert_eq!(last.len(), 1);
                assert!(residual >= 1.0);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
