use crate::error::{Error, Result};

/// Adaptive Gauss–Kronrod (7–15) quadrature settings.
///
/// `left_singular` / `right_singular` declare an inverse-square-root
/// integrable singularity at the corresponding endpoint; the integrator
/// then substitutes t = sqrt(distance to that endpoint), which turns the
/// singular factor into a smooth one.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub left_singular: bool,
    pub right_singular: bool,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_depth: 48,
            left_singular: false,
            right_singular: false,
        }
    }
}

impl Quadrature {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Quadrature { abs_tol, ..Quadrature::default() }
    }

    pub fn singular_left(mut self) -> Self {
        self.left_singular = true;
        self
    }

    pub fn singular_right(mut self) -> Self {
        self.right_singular = true;
        self
    }
}

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights,
// with the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

struct Gk15 {
    integral: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Gk15> {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);

    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::NonFiniteSample { point: x });
        }
        Ok(y)
    };

    let fc = eval(center)?;
    let mut result_gauss = WG[3] * fc;
    let mut result_kronrod = WGK[7] * fc;
    let mut resabs = WGK[7] * fc.abs();

    let mut fv = [0.0f64; 15]; // samples, symmetric pairs then center
    fv[14] = fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        let sum = f1 + f2;
        result_kronrod += WGK[j] * sum;
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * sum;
        }
    }

    let mean = 0.5 * result_kronrod;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }

    let integral = result_kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();

    // QUADPACK-style error rescaling.
    let mut error = ((result_kronrod - result_gauss) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let eps = f64::EPSILON * 50.0 * resabs;
    if eps > error {
        error = eps;
    }

    Ok(Gk15 { integral, error })
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    depth: u32,
    max_depth: u32,
) -> Result<(f64, f64)> {
    let r = gk15(f, a, b)?;
    let tol = abs_tol.max(rel_tol * r.integral.abs());
    if r.error <= tol {
        return Ok((r.integral, r.error));
    }
    if depth >= max_depth {
        return Err(Error::QuadratureDidNotConverge {
            estimate: r.integral,
            error_bound: r.error,
            tolerance: tol,
        });
    }
    let mid = 0.5 * (a + b);
    let (il, el) = adapt(f, a, mid, 0.5 * abs_tol, rel_tol, depth + 1, max_depth)?;
    let (ir, er) = adapt(f, mid, b, 0.5 * abs_tol, rel_tol, depth + 1, max_depth)?;
    Ok((il + ir, el + er))
}

/// Integrate `f` over `[a, b]`, returning the estimate and an error bound.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, q: &Quadrature) -> Result<(f64, f64)> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::InvalidInterval { lo: a, hi: b });
    }
    if a == b {
        return Ok((0.0, 0.0));
    }
    match (q.left_singular, q.right_singular) {
        (false, false) => adapt(&f, a, b, q.abs_tol, q.rel_tol, 0, q.max_depth),
        (true, false) => {
            // u = a + t^2, du = 2t dt
            let g = |t: f64| 2.0 * t * f(a + t * t);
            adapt(&g, 0.0, (b - a).sqrt(), q.abs_tol, q.rel_tol, 0, q.max_depth)
        }
        (false, true) => {
            // u = b - t^2, du = -2t dt, orientation flipped
            let g = |t: f64| 2.0 * t * f(b - t * t);
            adapt(&g, 0.0, (b - a).sqrt(), q.abs_tol, q.rel_tol, 0, q.max_depth)
        }
        (true, true) => {
            let mid = 0.5 * (a + b);
            let gl = |t: f64| 2.0 * t * f(a + t * t);
            let gr = |t: f64| 2.0 * t * f(b - t * t);
            let half = 0.5 * q.abs_tol;
            let (il, el) = adapt(&gl, 0.0, (mid - a).sqrt(), half, q.rel_tol, 0, q.max_depth)?;
            let (ir, er) = adapt(&gr, 0.0, (b - mid).sqrt(), half, q.rel_tol, 0, q.max_depth)?;
            Ok((il + ir, el + er))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = Quadrature::default();
        let (v, _) = integrate(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, &q).unwrap();
        // antiderivative x^4/4 - x^2 + x
        assert!((v - (81.0 / 4.0 - 9.0 + 3.0 - (0.25 - 1.0 - 1.0))).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let q = Quadrature::default();
        let (v, _) = integrate(|x| (10.0 * x).sin(), 0.0, std::f64::consts::PI, &q).unwrap();
        let exact = (1.0 - (10.0 * std::f64::consts::PI).cos()) / 10.0;
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn inverse_sqrt_endpoint_singularities() {
        // \int_0^1 dx/sqrt(x) = 2 with the singularity declared on the left
        let q = Quadrature::default().singular_left();
        let (v, _) = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &q).unwrap();
        assert!((v - 2.0).abs() < 1e-12);

        // \int_0^1 dx/sqrt(1-x^2) = pi/2 with the singularity on the right
        let q = Quadrature::default().singular_right();
        let (v, _) = integrate(|x| 1.0 / (1.0 - x * x).sqrt(), 0.0, 1.0, &q).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-12);

        // both ends: \int_{-1}^{1} dx/sqrt(1-x^2) = pi
        let q = Quadrature::default().singular_left().singular_right();
        let (v, _) = integrate(|x| 1.0 / (1.0 - x * x).sqrt(), -1.0, 1.0, &q).unwrap();
        assert!((v - std::f64::consts::PI).abs() < 1e-11);
    }

    #[test]
    fn empty_interval() {
        let q = Quadrature::default();
        let (v, e) = integrate(|x| x.exp(), 2.0, 2.0, &q).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(e, 0.0);
    }

    #[test]
    fn reversed_interval_is_rejected() {
        let q = Quadrature::default();
        assert!(matches!(
            integrate(|x| x, 1.0, 0.0, &q),
            Err(Error::InvalidInterval { .. })
        ));
    }

    #[test]
    fn nan_sample_is_reported() {
        let q = Quadrature::default();
        let r = integrate(|x| (x - 0.5).ln(), 0.0, 1.0, &q);
        assert!(matches!(r, Err(Error::NonFiniteSample { .. })));
    }

    #[test]
    fn nonconvergence_carries_estimate() {
        // Undeclared singularity with a tiny depth budget.
        let q = Quadrature {
            max_depth: 2,
            ..Quadrature::default()
        };
        let r = integrate(|x| 1.0 / x.sqrt(), 1e-30, 1.0, &q);
        match r {
            Err(Error::QuadratureDidNotConverge { estimate, .. }) => {
                assert!(estimate.is_finite());
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn determinism() {
        let q = Quadrature::default();
        let a: Vec<f64> = (0..5)
            .map(|_| integrate(|x| (x.sin() + 2.0).ln(), 0.0, 7.0, &q).unwrap().0)
            .collect();
        assert!(a.iter().all(|&v| v.to_bits() == a[0].to_bits()));
    }
}
