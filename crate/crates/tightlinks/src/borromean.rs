//! A critical configuration of the Borromean rings built from three
//! parameters 0 <= rho <= sigma <= tau <= 1, plus the piecewise-circular
//! comparison configuration.
//!
//! Each component is planar, lying in one coordinate plane, and is
//! assembled from one quadrant arc reflected across both axes of its
//! plane; the three components are cyclic coordinate rotations of one
//! another.  The quadrant arc I-J-M-R-S-T consists of five analytic
//! pieces:
//!
//! * I-J  — a piece of the tau-clasp profile (parameter v in [0, sigma]),
//! * J-M-R — an arc of the unit circle around the neighbor point
//!   Itld = (0, 2 rho), split at M,
//! * R-S  — a clasp piece again (parameter u in [tau - sigma, tau]),
//! * S-T  — the conjugate arc of the circle piece, each of its points a
//!   unit strut away from the corresponding circle point.
//!
//! The three defining equations say that J is well-defined (two
//! equations, matching the clasp piece to the circle) and that the force
//! transmitted onto Itld balances.

use crate::clasp::grid_integrals;
use crate::error::{Error, Result};
use crate::geometry::{PolyCurve, PolyLink, Vec3};
use crate::numerics::{integrate, newton_nd, NewtonConfig, Quadrature};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BorromeanParams {
    pub rho: f64,
    pub sigma: f64,
    pub tau: f64,
}

impl BorromeanParams {
    pub fn new(rho: f64, sigma: f64, tau: f64) -> Result<Self> {
        if !(0.0 <= rho && rho <= sigma && sigma <= tau && tau <= 1.0) {
            return Err(Error::domain(format!(
                "parameters must satisfy 0 <= rho <= sigma <= tau <= 1, got ({rho}, {sigma}, {tau})"
            )));
        }
        Ok(BorromeanParams { rho, sigma, tau })
    }
}

/// Newton starting point used by [`solve`].
pub const SOLVE_SEED: [f64; 3] = [0.41, 0.42, 0.76];

/// Conjugate-parameter relation along the circle piece: the point of the
/// circle arc at height parameter v = sin(psi) is strut-connected to a
/// conjugate-arc point at clasp parameter u(v).
pub fn u_of_v(rho: f64, v: f64) -> Result<f64> {
    let w = 2.0 * rho - v;
    if !(rho > 0.0 && v >= rho) {
        return Err(Error::domain(format!("u(v) needs 0 < rho <= v, got rho = {rho}, v = {v}")));
    }
    if w.abs() >= 1.0 || v > 1.0 {
        return Err(Error::domain(format!("u(v) undefined at rho = {rho}, v = {v}")));
    }
    let num = 1.0 - (w / v) * (w / v);
    let den = 1.0 - w * w;
    if num < 0.0 {
        return Err(Error::domain(format!("u(v)^2 negative at rho = {rho}, v = {v}")));
    }
    Ok((num / den).sqrt())
}

/// d u(v) / d v, analytic away from v = rho where it blows up like
/// 1/sqrt(v - rho).
fn du_dv(rho: f64, v: f64) -> f64 {
    let w = 2.0 * rho - v;
    let num = 1.0 - (w / v) * (w / v);
    let den = 1.0 - w * w;
    let dnum = 2.0 * w * (v + w) / (v * v * v);
    let dden = 2.0 * w;
    let u2 = num / den;
    let du2 = (dnum * den - num * dden) / (den * den);
    du2 / (2.0 * u2.sqrt())
}

/// The three residuals whose common zero defines the critical
/// configuration:
///
/// 1. height match of the jump point J,
/// 2. horizontal match of J (closed form),
/// 3. force balance at the neighbor point Itld.
pub fn residuals(p: &BorromeanParams, q: &Quadrature) -> Result<[f64; 3]> {
    let BorromeanParams { rho, sigma, tau } = *p;
    let root = (1.0 - sigma * sigma).sqrt();

    let z_sigma = grid_integrals(tau, &[sigma], q)?[0].1;
    let f1 = 2.0 * rho - root + z_sigma;

    let d = 2.0 * rho - sigma;
    let ts = tau - sigma;
    let f2 = 1.0 - d * d - (1.0 - sigma * sigma) / (1.0 - sigma * sigma * ts * ts);

    // Force transmitted through the short circle arc onto the neighbor
    // point: the integrand v/sqrt(1-v^2) * u'(v) is the vertical force
    // component per unit of conjugate-arc parameter.  (The doubled form
    // of this integrand, sometimes quoted, double-counts the mirror
    // symmetry already present on the curvature side of the balance.)
    let qq = Quadrature { left_singular: true, right_singular: false, ..*q };
    let (transmitted, _) = integrate(
        |v| v / (1.0 - v * v).sqrt() * du_dv(rho, v),
        rho,
        sigma,
        &qq,
    )?;
    let f3 = tau - root + transmitted;

    Ok([f1, f2, f3])
}

/// Solve the three equations by damped Newton iteration from
/// [`SOLVE_SEED`], returning the critical parameter triple.
pub fn solve(q: &Quadrature, cfg: &NewtonConfig) -> Result<BorromeanParams> {
    let f = |x: &[f64]| -> Result<Vec<f64>> {
        let p = BorromeanParams::new(x[0], x[1], x[2])?;
        Ok(residuals(&p, q)?.to_vec())
    };
    let x = newton_nd(f, &SOLVE_SEED, cfg)?;
    BorromeanParams::new(x[0], x[1], x[2])
}

/// Comparison configuration parameter: each quadrant is two circle arcs
/// meeting at M = J, fixed by 2 rho + 1 = 2 sqrt(1 - rho^2).
pub fn b2_rho() -> f64 {
    (7f64.sqrt() - 1.0) / 4.0
}

/// Exact length of the comparison configuration.
pub fn b2_length() -> f64 {
    6.0 * std::f64::consts::PI + 24.0 * b2_rho().asin()
}

fn quadrant_to_link(quadrant: &[(f64, f64)], join_tol: f64) -> Result<PolyLink> {
    // sanity: the quadrant must run from the x-axis to the y-axis
    let first = quadrant[0];
    let last = *quadrant.last().unwrap();
    if first.1.abs() > join_tol {
        return Err(Error::JoinMismatch { join: 'I', gap: first.1.abs() });
    }
    if last.0.abs() > join_tol {
        return Err(Error::JoinMismatch { join: 'T', gap: last.0.abs() });
    }

    let m = quadrant.len() - 1;
    let mut plane: Vec<(f64, f64)> = Vec::with_capacity(4 * m);
    plane.extend_from_slice(quadrant);
    // reflect across the y-axis, traversed backwards
    for i in (0..m).rev() {
        let (x, y) = quadrant[i];
        plane.push((-x, y));
    }
    // rotate by pi (reflect through the origin)
    for &(x, y) in quadrant.iter().skip(1) {
        plane.push((-x, -y));
    }
    // reflect across the x-axis, traversed backwards, dropping the
    // closing vertex
    for i in (1..m).rev() {
        let (x, y) = quadrant[i];
        plane.push((x, -y));
    }

    assert_eq!(plane.len(), 4 * m);
    // force exact mirror symmetry at the axis crossings
    plane[0].1 = 0.0;
    plane[m].0 = 0.0;
    plane[2 * m].1 = 0.0;
    plane[3 * m].0 = 0.0;

    let comp0: Vec<Vec3> = plane.iter().map(|&(x, y)| Vec3::new(x, y, 0.0)).collect();
    let comp1: Vec<Vec3> = plane.iter().map(|&(x, y)| Vec3::new(0.0, x, y)).collect();
    let comp2: Vec<Vec3> = plane.iter().map(|&(x, y)| Vec3::new(y, 0.0, x)).collect();

    PolyLink::from_components(vec![
        PolyCurve::new(comp0, true)?,
        PolyCurve::new(comp1, true)?,
        PolyCurve::new(comp2, true)?,
    ])
}

/// Segment counts allocated to the five generating-arc pieces
/// I-J, J-M, M-R, R-S, S-T for a `build` with the same `n`:
/// proportional to estimated piece arclength with a floor of four
/// segments per piece (the J-M arc is tiny but carries three strut
/// families).  The first quadrant of each built component consists of
/// these pieces in order; the other three quadrants are reflections.
pub fn arc_splits(p: &BorromeanParams, n: usize) -> Result<[usize; 5]> {
    let BorromeanParams { rho, sigma, tau } = *p;
    let q = Quadrature::with_abs_tol(1e-12);
    let theta_j = -sigma.asin();
    let theta_m = -rho.asin();
    let theta_r = tau.acos();
    let s_of = |v: f64| -> Result<f64> { Ok(grid_integrals(tau, &[v], &q)?[0].0) };
    let len_ij = s_of(sigma)?;
    let len_jm = theta_m - theta_j;
    let len_mr = theta_r - theta_m;
    let len_rs = s_of(tau)? - s_of(tau - sigma)?;
    let st_point = |theta: f64| -> (f64, f64) {
        let x2 = 2.0 * rho + theta.sin();
        let u2 = -theta.sin();
        let x1 = (1.0 - (x2 / u2) * (x2 / u2)).max(0.0).sqrt();
        let y = theta.cos() + x2 * (1.0 - u2 * u2).sqrt() / u2;
        (x1, y)
    };
    let len_st = {
        let k = 256;
        let mut acc = 0.0;
        let mut prev = st_point(theta_j);
        for i in 1..=k {
            let t = i as f64 / k as f64;
            let theta = theta_m - (theta_m - theta_j) * (1.0 - t) * (1.0 - t);
            let pt = st_point(theta);
            acc += ((pt.0 - prev.0).powi(2) + (pt.1 - prev.1).powi(2)).sqrt();
            prev = pt;
        }
        acc
    };
    let total = len_ij + len_jm + len_mr + len_rs + len_st;
    let budget = (n / 4).max(32) as f64;
    let segs = |len: f64| ((budget * len / total).round() as usize).max(4);
    Ok([segs(len_ij), segs(len_jm), segs(len_mr), segs(len_rs), segs(len_st)])
}

/// Assemble the critical configuration with roughly `n` vertices per
/// component.  Fails with a join mismatch if the parameters do not
/// satisfy the defining equations.
pub fn build(p: &BorromeanParams, n: usize) -> Result<PolyLink> {
    let BorromeanParams { rho, sigma, tau } = *p;
    if !(rho > 0.0 && sigma > rho && tau > sigma && tau < 1.0) {
        return Err(Error::domain(
            "assembly needs strictly ordered parameters 0 < rho < sigma < tau < 1",
        ));
    }
    if n < 64 {
        return Err(Error::domain("assembly needs n >= 64"));
    }
    let join_tol = 1e-6;
    let q = Quadrature::with_abs_tol(1e-12);

    // clasp-profile height offset shared by the I-J and R-S pieces
    let z_tau = grid_integrals(tau, &[tau], &q)?[0].1;
    let root_tau = (1.0 - tau * tau).sqrt();
    let x_tau = |u: f64| -> f64 {
        let w = tau - u.abs();
        u * ((1.0 - w * w) / (1.0 - u * u * w * w)).sqrt()
    };

    // named points of the quadrant
    let theta_j = -sigma.asin();
    let theta_m = -rho.asin();
    let theta_r = tau.acos();
    let itld = (0.0, 2.0 * rho);

    let st_point = |theta: f64| -> (f64, f64) {
        let x2 = 2.0 * rho + theta.sin();
        let u2 = -theta.sin();
        let x1 = (1.0 - (x2 / u2) * (x2 / u2)).max(0.0).sqrt();
        let y = theta.cos() + x2 * (1.0 - u2 * u2).sqrt() / u2;
        (x1, y)
    };
    let [m_ij, m_jm, m_mr, m_rs, m_st] = arc_splits(p, n)?;

    let mut quadrant: Vec<(f64, f64)> = Vec::new();

    // I -> J: clasp piece, v in [0, sigma], uniform in asin(v)
    let psi_sigma = sigma.asin();
    let vs: Vec<f64> = (0..=m_ij).map(|i| (psi_sigma * i as f64 / m_ij as f64).sin()).collect();
    let zs = grid_integrals(tau, &vs, &q)?;
    for (i, &v) in vs.iter().enumerate() {
        quadrant.push((2.0 * rho + zs[i].1, x_tau(v)));
    }

    // join check at J against the circle around Itld
    let j_circle = (itld.0 + theta_j.cos(), itld.1 + theta_j.sin());
    {
        let j = *quadrant.last().unwrap();
        let gap = ((j.0 - j_circle.0).powi(2) + (j.1 - j_circle.1).powi(2)).sqrt();
        if gap > join_tol {
            return Err(Error::JoinMismatch { join: 'J', gap });
        }
    }

    // J -> M -> R: unit circle around Itld, split at M
    for i in 1..=m_jm {
        let theta = theta_j + (theta_m - theta_j) * i as f64 / m_jm as f64;
        quadrant.push((itld.0 + theta.cos(), itld.1 + theta.sin()));
    }
    for i in 1..=m_mr {
        let theta = theta_m + (theta_r - theta_m) * i as f64 / m_mr as f64;
        quadrant.push((itld.0 + theta.cos(), itld.1 + theta.sin()));
    }

    // join check at R: the circle endpoint must agree with the clasp
    // piece evaluated at u = tau
    let r_clasp = (x_tau(tau), 2.0 * rho + root_tau);
    {
        let r = *quadrant.last().unwrap();
        let gap = ((r.0 - r_clasp.0).powi(2) + (r.1 - r_clasp.1).powi(2)).sqrt();
        if gap > join_tol {
            return Err(Error::JoinMismatch { join: 'R', gap });
        }
    }

    // R -> S: clasp piece, u from tau down to tau - sigma
    let phi_hi = tau.asin();
    let phi_lo = (tau - sigma).asin();
    let us: Vec<f64> = (0..=m_rs)
        .map(|i| (phi_lo + (phi_hi - phi_lo) * i as f64 / m_rs as f64).sin())
        .collect();
    let zs = grid_integrals(tau, &us, &q)?;
    for i in (0..m_rs).rev() {
        let u = us[i];
        quadrant.push((x_tau(u), 2.0 * rho + root_tau + z_tau - zs[i].1));
    }

    // join check at S against the conjugate arc
    let s_conj = st_point(theta_j);
    {
        let s = *quadrant.last().unwrap();
        let gap = ((s.0 - s_conj.0).powi(2) + (s.1 - s_conj.1).powi(2)).sqrt();
        if gap > join_tol {
            return Err(Error::JoinMismatch { join: 'S', gap });
        }
    }

    // S -> T: conjugate of the circle piece; cluster samples toward T
    // where the arc meets the y-axis with a square-root profile
    for i in 1..=m_st {
        let t = i as f64 / m_st as f64;
        let theta = theta_m - (theta_m - theta_j) * (1.0 - t) * (1.0 - t);
        quadrant.push(st_point(theta));
    }

    quadrant_to_link(&quadrant, join_tol)
}

/// Assemble the piecewise-circular comparison configuration with roughly
/// `n` vertices per component.
pub fn b2_build(n: usize) -> Result<PolyLink> {
    if n < 64 {
        return Err(Error::domain("assembly needs n >= 64"));
    }
    let rho = b2_rho();
    let asr = rho.asin();
    let ttld = (2.0 * (1.0 - rho * rho).sqrt(), 0.0);
    let itld = (0.0, 2.0 * rho);

    let len_a = asr;
    let len_b = std::f64::consts::FRAC_PI_2 + asr;
    let budget = (n / 4).max(32) as f64;
    let total = len_a + len_b;
    let m_a = ((budget * len_a / total).round() as usize).max(4);
    let m_b = ((budget * len_b / total).round() as usize).max(4);

    let mut quadrant: Vec<(f64, f64)> = Vec::new();
    // I -> J = M: unit arc around Ttldtld, theta from pi down to pi - asin(rho)
    for i in 0..=m_a {
        let theta = std::f64::consts::PI - asr * i as f64 / m_a as f64;
        quadrant.push((ttld.0 + theta.cos(), ttld.1 + theta.sin()));
    }
    // M -> T: unit arc around Itld, theta from -asin(rho) up to pi/2
    for i in 1..=m_b {
        let theta = -asr + (std::f64::consts::FRAC_PI_2 + asr) * i as f64 / m_b as f64;
        quadrant.push((itld.0 + theta.cos(), itld.1 + theta.sin()));
    }
    quadrant_to_link(&quadrant, 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{length, link_thickness, total_curvature};

    fn solved() -> BorromeanParams {
        let q = Quadrature::with_abs_tol(1e-12);
        solve(&q, &NewtonConfig::default()).unwrap()
    }

    #[test]
    fn residual_closed_forms() {
        let q = Quadrature::with_abs_tol(1e-12);
        // horizontal match residual at a hand-computable triple
        let p = BorromeanParams::new(0.3, 0.5, 0.9).unwrap();
        let r = residuals(&p, &q).unwrap();
        assert!((r[1] - (1.0 - 0.01 - 0.75 / (1.0 - 0.25 * 0.16))).abs() < 1e-14);
    }

    #[test]
    fn solve_recovers_known_triple() {
        let p = solved();
        assert!((p.rho - 0.4074218).abs() < 5e-7, "rho = {}", p.rho);
        assert!((p.sigma - 0.4177486).abs() < 5e-7, "sigma = {}", p.sigma);
        assert!((p.tau - 0.7561107).abs() < 5e-7, "tau = {}", p.tau);
        let q = Quadrature::with_abs_tol(1e-12);
        let r = residuals(&p, &q).unwrap();
        for v in r {
            assert!(v.abs() <= 1e-10, "residual {v}");
        }
    }

    #[test]
    fn conjugate_relation_endpoints() {
        let p = solved();
        // u(sigma) = tau - sigma reproduces the horizontal match
        let u = u_of_v(p.rho, p.sigma).unwrap();
        assert!((u - (p.tau - p.sigma)).abs() < 1e-6);
        // u -> 0 at v = rho
        let u = u_of_v(p.rho, p.rho + 1e-12).unwrap();
        assert!(u < 1e-5);
    }

    #[test]
    fn build_joins_and_symmetry() {
        let p = solved();
        let link = build(&p, 512).unwrap();
        assert_eq!(link.components().len(), 3);
        for c in link.components() {
            assert!(c.closed());
            // all three components congruent
            assert!((length(c) - length(&link.components()[0])).abs() < 1e-12);
        }
        // the planar component winds once around: signed turning 2 pi,
        // even though the concave clasp pieces make the unsigned total
        // curvature larger
        let c = &link.components()[0];
        let n = c.vertices().len();
        let mut turning = 0.0;
        for i in 0..n {
            let t_in = c.segment_tangent((i + n - 1) % n);
            let t_out = c.segment_tangent(i);
            turning += (t_in.x * t_out.y - t_in.y * t_out.x).atan2(t_in.dot(&t_out));
        }
        assert!((turning - 2.0 * std::f64::consts::PI).abs() < 1e-9, "turning {turning}");
        assert!(total_curvature(c) > 2.0 * std::f64::consts::PI + 0.1);
    }

    #[test]
    fn build_length_and_thickness() {
        let p = solved();
        let link = build(&p, 2048).unwrap();
        let len = link.total_length();
        assert!((len - 29.0030).abs() < 5e-4, "length {len}");
        let t = link_thickness(&link).unwrap();
        assert!(t <= 1.0 + 1e-9 && t > 0.999, "thickness {t}");
    }

    #[test]
    fn bad_parameters_fail_at_a_join() {
        let p = BorromeanParams::new(0.40, 0.43, 0.76).unwrap();
        match build(&p, 256) {
            Err(Error::JoinMismatch { join, gap }) => {
                assert!(gap > 1e-6);
                assert!(join == 'J' || join == 'R' || join == 'S');
            }
            other => panic!("expected join mismatch, got {other:?}"),
        }
    }

    #[test]
    fn b2_exact_values() {
        let rho = b2_rho();
        // defining identity 2 rho + 1 = 2 sqrt(1 - rho^2)
        assert!((2.0 * rho + 1.0 - 2.0 * (1.0 - rho * rho).sqrt()).abs() < 1e-15);
        assert!((b2_length() - 29.0263).abs() < 5e-4);

        let link = b2_build(1024).unwrap();
        assert!((link.total_length() - b2_length()).abs() < 1e-3);
        let t = link_thickness(&link).unwrap();
        assert!(t <= 1.0 + 1e-9 && t > 0.999, "thickness {t}");
    }
}

