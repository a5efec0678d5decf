//! The critical tau-clasp: two congruent arcs, each clasped around the
//! other, whose shape is determined by a curvature profile in the
//! "height" parameter u = sin(phi).  The defining data:
//!
//! * conjugate parameter  u* = tau - |u|,
//! * curvature            kappa(u) = sqrt((1-u^2 w^2)^3 (1-w^2))
//!                                   / (1-w^2 + w |u| (1-u^2)),   w = tau - |u|,
//! * horizontal offset    x(u) = u sqrt(1-w^2) / sqrt(1-u^2 w^2),
//! * arclength and height from ds = du / (kappa sqrt(1-u^2)),
//!   dz = u ds, with the vertical constant fixed by
//!   z(0) + z(tau) = -sqrt(1-tau^2).
//!
//! Each point at parameter u is joined by unit-length struts to the two
//! mirror-image conjugate points of the other component at tau - |u|.
//! The first component lies in the xz-plane, the second is its image
//! under (x, y, z) -> (y, x, -z)... concretely gamma(u) = (x(u), 0, z(u))
//! and gamma~(u) = (0, x(u), -z(u)), so the tips face each other on the
//! z-axis.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{
    CurveEnd, EndpointConstraint, HalfSpaceObstacle, PolyCurve, PolyLink, Vec3,
};
use crate::numerics::{integrate, Quadrature};

fn check_tau(tau: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::domain(format!("tau = {tau} outside [0, 1]")));
    }
    Ok(())
}

fn check_u(tau: f64, u: f64) -> Result<()> {
    check_tau(tau)?;
    if !u.is_finite() || u.abs() > tau + 1e-15 {
        return Err(Error::domain(format!("u = {u} outside [-tau, tau] for tau = {tau}")));
    }
    Ok(())
}

fn kappa_raw(tau: f64, u: f64) -> f64 {
    let au = u.abs().min(tau);
    let w = tau - au;
    // 1 - w^2 written as (1 - w)(1 + w) with 1 - w = (1 - tau) + |u|;
    // the naive form loses everything to rounding near tau = 1, u = 0
    let one_minus_w2 = ((1.0 - tau) + au) * (1.0 + w);
    let denom = one_minus_w2 + w * au * (1.0 - u * u);
    if denom == 0.0 {
        // only at tau = 1, u = 0: the curvature blows up at the tip
        return f64::INFINITY;
    }
    let a = 1.0 - u * u * w * w;
    ((a * a * a * one_minus_w2).sqrt()) / denom
}

/// Curvature of the critical tau-clasp at height parameter u.
pub fn clasp_kappa(tau: f64, u: f64) -> Result<f64> {
    check_u(tau, u)?;
    Ok(kappa_raw(tau, u))
}

/// Conjugate parameter: the point at u is strut-connected to the other
/// component's points at +/- (tau - |u|).
pub fn clasp_conjugate(tau: f64, u: f64) -> Result<f64> {
    check_u(tau, u)?;
    Ok(tau - u.abs())
}

fn x_of(tau: f64, u: f64) -> f64 {
    let au = u.abs().min(tau);
    let w = tau - au;
    let one_minus_w2 = ((1.0 - tau) + au) * (1.0 + w);
    u * (one_minus_w2 / (1.0 - u * u * w * w)).sqrt()
}

/// ds/du with 1 - u^2 supplied by the caller (needed for accuracy when
/// u is within roundoff of 1); goes to zero like sqrt(u) at the tip
/// when tau = 1.
fn ds_du_with(tau: f64, u: f64, one_minus_u2: f64) -> f64 {
    let k = kappa_raw(tau, u);
    if k.is_infinite() {
        return 0.0;
    }
    1.0 / (k * one_minus_u2.sqrt())
}

fn ds_du(tau: f64, u: f64) -> f64 {
    ds_du_with(tau, u, 1.0 - u * u)
}

/// Cumulative arclength s and relative height Z = z - z(0) at the given
/// ascending grid of nonnegative parameters (all <= tau), sharing one
/// integration pass.
pub(crate) fn grid_integrals(tau: f64, us: &[f64], q: &Quadrature) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(us.len());
    let piece_tol = (q.abs_tol / (us.len().max(1) as f64)).max(1e-15);
    let mut s = 0.0;
    let mut z = 0.0;
    let mut prev = 0.0;
    for &u in us {
        debug_assert!(u >= prev && u <= tau + 1e-15);
        let u = u.min(tau);
        if u > prev {
            let (ds, dz) = piece_integrals(tau, prev, u, piece_tol, q)?;
            s += ds;
            z += dz;
            prev = u;
        }
        out.push((s, z));
    }
    Ok(out)
}

/// Arclength and height increments over one parameter interval.
///
/// The tip (u = 0) gets the generic sqrt substitution: ds/du behaves
/// like sqrt(u) there when tau = 1.  The shoulder u = tau = 1 is an
/// integrable 1/sqrt(1 - u) singularity, but substituting generically
/// fails: u = 1 - t^2 rounds back to 1 for tiny t, where ds/du is
/// infinite.  So that piece is substituted by hand, keeping 1 - u^2 =
/// t^2 (2 - t^2) exact in the substitution variable.
fn piece_integrals(tau: f64, a: f64, b: f64, tol: f64, q: &Quadrature) -> Result<(f64, f64)> {
    let right_singular = b == tau && tau == 1.0;
    if a == 0.0 && right_singular {
        let mid = 0.5 * (a + b);
        let (s1, z1) = piece_integrals(tau, a, mid, 0.5 * tol, q)?;
        let (s2, z2) = piece_integrals(tau, mid, b, 0.5 * tol, q)?;
        return Ok((s1 + s2, z1 + z2));
    }
    if right_singular {
        let plain = Quadrature { abs_tol: tol, left_singular: false, right_singular: false, ..*q };
        let tmax = (1.0 - a).sqrt();
        let f = |t: f64| {
            let u = 1.0 - t * t;
            2.0 * t * ds_du_with(tau, u, t * t * (2.0 - t * t))
        };
        let (ds, _) = integrate(f, 0.0, tmax, &plain)?;
        let (dz, _) = integrate(|t| (1.0 - t * t) * f(t), 0.0, tmax, &plain)?;
        return Ok((ds, dz));
    }
    let qq = Quadrature {
        abs_tol: tol,
        left_singular: a == 0.0,
        right_singular: false,
        ..*q
    };
    let (ds, _) = integrate(|v| ds_du(tau, v), a, b, &qq)?;
    let (dz, _) = integrate(|v| v * ds_du(tau, v), a, b, &qq)?;
    Ok((ds, dz))
}

/// Pointwise description of the clasp curve at parameter u.
#[derive(Debug, Clone, Copy)]
pub struct ClaspProfile {
    pub u: f64,
    pub phi: f64,
    pub x: f64,
    pub z: f64,
    pub kappa: f64,
    /// arclength measured from the tip (u = 0), nonnegative
    pub s: f64,
}

fn z_offset(tau: f64, z_total: f64) -> f64 {
    // fixes z(0) + z(tau) = -sqrt(1 - tau^2)
    0.5 * (-(1.0 - tau * tau).sqrt() - z_total)
}

/// Profile of the critical tau-clasp at a single parameter value.
pub fn clasp_profile(tau: f64, u: f64, q: &Quadrature) -> Result<ClaspProfile> {
    check_u(tau, u)?;
    let au = u.abs().min(tau);
    let vals = grid_integrals(tau, &[au, tau], q)?;
    let (s, z_rel) = vals[0];
    let (_, z_total) = vals[1];
    Ok(ClaspProfile {
        u,
        phi: u.asin(),
        x: x_of(tau, u),
        z: z_offset(tau, z_total) + z_rel,
        kappa: kappa_raw(tau, u),
        s,
    })
}

/// Scalar summary of the critical tau-clasp against the naive circular
/// clasp of the same parameter.
#[derive(Debug, Clone, Copy)]
pub struct ClaspScalars {
    pub tau: f64,
    /// distance between the two tips
    pub tip_distance: f64,
    /// total length of the curved parts over both components
    pub curved_length: f64,
    /// curved length minus 2 tau times the tip distance
    pub excess: f64,
    /// excess of the naive circular clasp: 4 asin(tau) - 2 tau
    pub naive_excess: f64,
    /// (naive_excess - excess) / naive_excess
    pub savings_fraction: f64,
    /// largest curvature, attained at the tip: 1/sqrt(1 - tau^2)
    pub max_kappa: f64,
}

pub fn clasp_scalars(tau: f64, q: &Quadrature) -> Result<ClaspScalars> {
    check_tau(tau)?;
    let (s_total, z_total) = grid_integrals(tau, &[tau], q)?[0];
    let tip_distance = (1.0 - tau * tau).sqrt() + z_total;
    let curved_length = 4.0 * s_total;
    let excess = curved_length - 2.0 * tau * tip_distance;
    let naive_excess = 4.0 * tau.asin() - 2.0 * tau;
    let savings_fraction = if naive_excess > 0.0 {
        (naive_excess - excess) / naive_excess
    } else {
        0.0
    };
    Ok(ClaspScalars {
        tau,
        tip_distance,
        curved_length,
        excess,
        naive_excess,
        savings_fraction,
        max_kappa: kappa_raw(tau, 0.0),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SavingsRow {
    pub tau: f64,
    pub excess: f64,
    pub naive_excess: f64,
    pub savings_fraction: f64,
}

/// Scan the savings fraction over a range of tau values (inclusive
/// endpoints, `steps` >= 2 rows).
pub fn clasp_savings_scan(lo: f64, hi: f64, steps: usize, q: &Quadrature) -> Result<Vec<SavingsRow>> {
    check_tau(lo)?;
    check_tau(hi)?;
    if hi < lo || steps < 2 {
        return Err(Error::domain(format!(
            "scan wants lo <= hi and steps >= 2, got [{lo}, {hi}] with {steps}"
        )));
    }
    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let tau = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
        let s = clasp_scalars(tau, q)?;
        rows.push(SavingsRow {
            tau,
            excess: s.excess,
            naive_excess: s.naive_excess,
            savings_fraction: s.savings_fraction,
        });
    }
    Ok(rows)
}

/// One strut of the clasp, reported both by arclength coordinates
/// (signed, measured from each tip) and by 3-space endpoints.
#[derive(Debug, Clone, Copy)]
pub struct StrutPair {
    pub s1: f64,
    pub s2: f64,
    pub p1: Vec3,
    pub p2: Vec3,
}

fn gamma_point(x: f64, z: f64) -> Vec3 {
    Vec3::new(x, 0.0, z)
}

fn gamma_tilde_point(x: f64, z: f64) -> Vec3 {
    Vec3::new(0.0, x, -z)
}

/// The strut family of the critical tau-clasp, ordered so consecutive
/// entries trace a closed loop in the (s1, s2) plane: each parameter u
/// connects to both mirror conjugate points tau - |u| of the other
/// component.
pub fn clasp_strut_loop(tau: f64, n: usize, q: &Quadrature) -> Result<Vec<StrutPair>> {
    check_tau(tau)?;
    if tau <= 0.0 {
        return Err(Error::domain("strut loop needs tau > 0"));
    }
    if n < 4 {
        return Err(Error::domain("strut loop needs n >= 4"));
    }
    let phi_max = tau.asin();
    // |u| values needed: sample parameters and their conjugates
    let mut us: Vec<f64> = (0..=n)
        .flat_map(|j| {
            let u = (phi_max * (2.0 * j as f64 / n as f64 - 1.0)).sin();
            [u.abs().min(tau), tau - u.abs().min(tau)]
        })
        .collect();
    us.sort_by(|a, b| a.partial_cmp(b).unwrap());
    us.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let vals = grid_integrals(tau, &us, q)?;
    let z_total = grid_integrals(tau, &[tau], q)?[0].1;
    let z0 = z_offset(tau, z_total);
    let lookup = |au: f64| -> (f64, f64, f64) {
        let i = us
            .binary_search_by(|v| v.partial_cmp(&au).unwrap())
            .unwrap_or_else(|i| if i > 0 { i - 1 } else { i });
        let (s, z_rel) = vals[i];
        (s, z0 + z_rel, x_of(tau, au))
    };

    let entry = |u: f64, mirror: bool| -> StrutPair {
        let au = u.abs().min(tau);
        let ustar = tau - au;
        let (s_a, z_a, _) = lookup(au);
        let (s_b, z_b, x_b) = lookup(ustar);
        let sign_b = if mirror { -1.0 } else { 1.0 };
        StrutPair {
            s1: s_a.copysign(if u == 0.0 { 1.0 } else { u }),
            s2: sign_b * s_b,
            p1: gamma_point(x_of(tau, u), z_a),
            p2: gamma_tilde_point(sign_b * x_b.abs(), z_b),
        }
    };

    let mut loop_pairs = Vec::with_capacity(2 * n);
    for j in 0..=n {
        let u = (phi_max * (2.0 * j as f64 / n as f64 - 1.0)).sin();
        loop_pairs.push(entry(u, false));
    }
    for j in (1..n).rev() {
        let u = (phi_max * (2.0 * j as f64 / n as f64 - 1.0)).sin();
        loop_pairs.push(entry(u, true));
    }
    Ok(loop_pairs)
}

/// Assemble a two-component clasp-style link from one arc lying in the
/// xz-plane with outward end tangents `dir_start` / `dir_end`: append
/// straight tangent legs of length `leg`, mirror the component via
/// (x, y, z) -> (y, x, -z), constrain each endpoint to the plane
/// perpendicular to its leg, and give each component the half-spaces cut
/// off by the *other* component's endpoint planes as obstacles
/// (deduplicated when the planes coincide, as they do at tau = 1).
pub(crate) fn two_component_clasp_link(
    arc: Vec<Vec3>,
    dir_start: Vec3,
    dir_end: Vec3,
    leg: f64,
) -> Result<PolyLink> {
    if !(leg.is_finite() && leg >= 0.0) {
        return Err(Error::domain("leg length must be finite and nonnegative"));
    }
    let mut g_verts: Vec<Vec3> = Vec::with_capacity(arc.len() + 2);
    if leg > 0.0 {
        g_verts.push(arc[0] + dir_start * leg);
    }
    g_verts.extend_from_slice(&arc);
    if leg > 0.0 {
        g_verts.push(*arc.last().unwrap() + dir_end * leg);
    }

    let to_tilde = |p: Vec3| Vec3::new(p.y, p.x, -p.z);
    let t_verts: Vec<Vec3> = g_verts.iter().map(|&p| to_tilde(p)).collect();

    let g_first = g_verts[0];
    let g_last = *g_verts.last().unwrap();
    let t_first = t_verts[0];
    let t_last = *t_verts.last().unwrap();

    let mut constraints = BTreeMap::new();
    constraints.insert(
        (0usize, CurveEnd::Start),
        EndpointConstraint::plane_with_normal(g_first, dir_start),
    );
    constraints.insert(
        (0usize, CurveEnd::End),
        EndpointConstraint::plane_with_normal(g_last, dir_end),
    );
    constraints.insert(
        (1usize, CurveEnd::Start),
        EndpointConstraint::plane_with_normal(t_first, to_tilde(dir_start)),
    );
    constraints.insert(
        (1usize, CurveEnd::End),
        EndpointConstraint::plane_with_normal(t_last, to_tilde(dir_end)),
    );

    // Each component must stay on the near side of the other's endpoint
    // planes: for an outward end direction d at endpoint e, admissible
    // points satisfy <d, p> <= <d, e>.
    let mut obstacles: Vec<(usize, HalfSpaceObstacle)> = Vec::new();
    let push_obstacle = |comp: usize, d: Vec3, e: Vec3, list: &mut Vec<(usize, HalfSpaceObstacle)>| {
        let cand = HalfSpaceObstacle::new(-d, -d.dot(&e));
        let dup = list.iter().any(|&(c2, o)| {
            c2 == comp && (o.normal - cand.normal).norm() < 1e-12 && (o.offset - cand.offset).abs() < 1e-12
        });
        if !dup {
            list.push((comp, cand));
        }
    };
    // walls for component 0 from component 1's ends
    push_obstacle(0, to_tilde(dir_start), t_first, &mut obstacles);
    push_obstacle(0, to_tilde(dir_end), t_last, &mut obstacles);
    // walls for component 1 from component 0's ends
    push_obstacle(1, dir_start, g_first, &mut obstacles);
    push_obstacle(1, dir_end, g_last, &mut obstacles);

    PolyLink::new(
        vec![PolyCurve::new(g_verts, false)?, PolyCurve::new(t_verts, false)?],
        constraints,
        obstacles,
    )
}

/// Discretize the critical tau-clasp as a verifiable link: both arcs
/// sampled uniformly in phi = asin(u), straight tangent legs of the
/// given length, endpoint planes perpendicular to the legs, and for each
/// component the half-spaces cut off by the *other* component's endpoint
/// planes as obstacles (one deduplicated wedge wall each at tau = 1).
pub fn clasp_sample(tau: f64, n: usize, leg: f64) -> Result<PolyLink> {
    check_tau(tau)?;
    if tau <= 0.0 {
        return Err(Error::domain("clasp sampling needs tau > 0"));
    }
    if n < 16 {
        return Err(Error::domain("clasp sampling needs n >= 16"));
    }
    let q = Quadrature::default();
    let phi_max = tau.asin();
    let us: Vec<f64> = (0..=n)
        .map(|j| (phi_max * (2.0 * j as f64 / n as f64 - 1.0)).sin())
        .collect();
    let mut abs_us: Vec<f64> = us.iter().map(|u| u.abs().min(tau)).collect();
    abs_us.sort_by(|a, b| a.partial_cmp(b).unwrap());
    abs_us.dedup_by(|a, b| *a == *b);
    if *abs_us.last().unwrap() < tau {
        abs_us.push(tau);
    }
    let vals = grid_integrals(tau, &abs_us, &q)?;
    let z_total = vals.last().unwrap().1;
    let z0 = z_offset(tau, z_total);
    let z_of = |u: f64| -> f64 {
        let au = u.abs().min(tau);
        let i = abs_us
            .binary_search_by(|v| v.partial_cmp(&au).unwrap())
            .unwrap_or_else(|i| i - 1);
        z0 + vals[i].1
    };

    let c = (1.0 - tau * tau).sqrt();
    // outward tangent directions at the arc ends
    let dir_end = Vec3::new(c, 0.0, tau);
    let dir_start = Vec3::new(-c, 0.0, tau);

    let arc: Vec<Vec3> = us
        .iter()
        .map(|&u| gamma_point(x_of(tau, u), z_of(u)))
        .collect();
    two_component_clasp_link(arc, dir_start, dir_end, leg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::link_thickness;

    const Q: Quadrature = Quadrature {
        abs_tol: 1e-12,
        rel_tol: 0.0,
        max_depth: 48,
        left_singular: false,
        right_singular: false,
    };

    #[test]
    fn kappa_boundary_identities() {
        for &tau in &[0.1, 0.4, 0.7561107, 0.9, 1.0] {
            // unit curvature where the arc meets the straight legs
            assert!((clasp_kappa(tau, tau).unwrap() - 1.0).abs() < 1e-12);
            assert!((clasp_kappa(tau, -tau).unwrap() - 1.0).abs() < 1e-12);
            // tip curvature 1/sqrt(1 - tau^2)
            let k0 = clasp_kappa(tau, 0.0).unwrap();
            if tau < 1.0 {
                assert!((k0 - 1.0 / (1.0 - tau * tau).sqrt()).abs() < 1e-12);
            } else {
                assert!(k0.is_infinite());
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(clasp_kappa(1.2, 0.0).is_err());
        assert!(clasp_kappa(0.5, 0.6).is_err());
        assert!(clasp_conjugate(0.5, 0.7).is_err());
        assert!(clasp_scalars(-0.1, &Q).is_err());
    }

    #[test]
    fn profile_differential_relations() {
        // dz/du = u / (kappa sqrt(1-u^2)) and ds/du = 1 / (kappa sqrt(1-u^2))
        let tau = 0.8;
        let h = 1e-5;
        for &u in &[0.1, 0.3, 0.55, 0.7] {
            let p1 = clasp_profile(tau, u - h, &Q).unwrap();
            let p2 = clasp_profile(tau, u + h, &Q).unwrap();
            let k = clasp_kappa(tau, u).unwrap();
            let dz = (p2.z - p1.z) / (2.0 * h);
            let ds = (p2.s - p1.s) / (2.0 * h);
            assert!((dz - u / (k * (1.0 - u * u).sqrt())).abs() < 1e-7);
            assert!((ds - 1.0 / (k * (1.0 - u * u).sqrt())).abs() < 1e-7);
        }
    }

    #[test]
    fn conjugate_struts_have_unit_length() {
        for &tau in &[0.5, 0.7561107, 1.0] {
            for j in 0..200 {
                let u = tau * (j as f64 + 0.5) / 200.0;
                let ustar = clasp_conjugate(tau, u).unwrap();
                let a = clasp_profile(tau, u, &Q).unwrap();
                let b = clasp_profile(tau, ustar, &Q).unwrap();
                let d2 = a.x * a.x + b.x * b.x + (a.z + b.z) * (a.z + b.z);
                assert!((d2 - 1.0).abs() < 1e-9, "tau={tau} u={u}: d^2 = {d2}");
            }
        }
    }

    #[test]
    fn tip_distance_and_vertical_normalization() {
        // z(0) + z(tau) = -sqrt(1 - tau^2) by construction; the tips of
        // the two mirror components then sit tip_distance apart
        let tau = 0.6;
        let p0 = clasp_profile(tau, 0.0, &Q).unwrap();
        let pt = clasp_profile(tau, tau, &Q).unwrap();
        assert!((p0.z + pt.z + (1.0 - tau * tau).sqrt()).abs() < 1e-12);
        let s = clasp_scalars(tau, &Q).unwrap();
        assert!((s.tip_distance - (-2.0 * p0.z)).abs() < 1e-10);
    }

    #[test]
    fn degenerate_tau_zero() {
        let s = clasp_scalars(0.0, &Q).unwrap();
        assert_eq!(s.curved_length, 0.0);
        assert_eq!(s.excess, 0.0);
        assert_eq!(s.naive_excess, 0.0);
        assert!((s.tip_distance - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sample_geometry() {
        let link = clasp_sample(1.0, 256, 1.0).unwrap();
        assert_eq!(link.components().len(), 2);
        // one deduplicated wedge wall per component at tau = 1
        assert_eq!(link.obstacles().len(), 2);
        assert_eq!(link.constraints().len(), 4);
        let t = link_thickness(&link).unwrap();
        assert!(t <= 1.0 + 1e-12 && t > 0.99, "thickness {t}");

        let link = clasp_sample(0.8, 64, 0.5).unwrap();
        assert_eq!(link.obstacles().len(), 4);
    }

    #[test]
    fn strut_loop_is_closed_and_unit_length() {
        // near the shoulder the conjugate arclength spacing scales like
        // sqrt(2 pi / n), so n must be large enough for a 0.2 bound
        let loop_pairs = clasp_strut_loop(1.0, 256, &Q).unwrap();
        for p in &loop_pairs {
            assert!(((p.p1 - p.p2).norm() - 1.0).abs() < 1e-9);
        }
        // consecutive struts stay close in the (s1, s2) plane, and the
        // loop closes
        let wrap = |i: usize| &loop_pairs[i % loop_pairs.len()];
        for i in 0..loop_pairs.len() {
            let a = wrap(i);
            let b = wrap(i + 1);
            let d = ((a.s1 - b.s1).powi(2) + (a.s2 - b.s2).powi(2)).sqrt();
            assert!(d < 0.2, "gap {d} between loop entries {i} and {}", i + 1);
        }
    }
}
