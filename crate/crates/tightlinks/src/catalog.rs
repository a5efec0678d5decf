//! Catalog of fixture configurations for the balance verifier: known
//! critical examples whose struts and balancing measures are
//! understood, plus deliberately unbalanced comparison shapes.

use crate::clasp::two_component_clasp_link;
use crate::error::{Error, Result};
use crate::geometry::{PolyCurve, PolyLink, Vec3};

const EX: Vec3 = Vec3::new(1.0, 0.0, 0.0);
const EY: Vec3 = Vec3::new(0.0, 1.0, 0.0);
const EZ: Vec3 = Vec3::new(0.0, 0.0, 1.0);

/// Sample an arc of `radius` about `center` in the plane spanned by
/// `e1`, `e2`, sweeping the angle from `a0` to `a1` (either direction)
/// with `segs` segments.  The starting point is omitted when chaining.
fn arc(
    out: &mut Vec<Vec3>,
    center: Vec3,
    radius: f64,
    e1: Vec3,
    e2: Vec3,
    a0: f64,
    a1: f64,
    segs: usize,
    include_start: bool,
) {
    let first = if include_start { 0 } else { 1 };
    for i in first..=segs {
        let a = a0 + (a1 - a0) * i as f64 / segs as f64;
        out.push(center + (e1 * a.cos() + e2 * a.sin()) * radius);
    }
}

fn segment(out: &mut Vec<Vec3>, from: Vec3, to: Vec3, segs: usize, include_start: bool) {
    let first = if include_start { 0 } else { 1 };
    for i in first..=segs {
        let t = i as f64 / segs as f64;
        out.push(from + (to - from) * t);
    }
}

fn even(n: usize) -> usize {
    n + n % 2
}

/// A two-component chain: a stadium curve (two unit semicircles about
/// c1 = (0,0,0) and c2 = (1,0,0) joined by straight segments) pivoted
/// against two unit circles.  The circles lie in vertical planes,
/// centered at the semicircle midpoints s1 = (-1,0,0), s2 = (2,0,0), and
/// pass through c1 and c2, so each presses a wheel of struts against the
/// surrounding semicircle and an atomic strut of weight about 2 joins c1
/// to c2.
pub fn simple_chain(n: usize) -> Result<PolyLink> {
    if n < 64 {
        return Err(Error::domain("simple_chain needs n >= 64"));
    }
    use std::f64::consts::PI;
    let c1 = Vec3::zeros();
    let c2 = EX;
    let s1 = -EX;
    let s2 = EX * 2.0;

    let stadium_len = 2.0 * PI + 2.0;
    let m_arc = even(((n as f64) * PI / stadium_len).round() as usize).max(8);
    let m_seg = (((n as f64) / stadium_len).round() as usize).max(2);

    // stadium in the xy-plane, starting below c1
    let mut verts = Vec::new();
    // left semicircle through s1 = (-1, 0, 0)
    arc(&mut verts, c1, 1.0, EX, EY, -PI / 2.0, -3.0 * PI / 2.0, m_arc, true);
    segment(&mut verts, c1 + EY, c2 + EY, m_seg, false);
    // right semicircle through s2 = (2, 0, 0)
    arc(&mut verts, c2, 1.0, EX, EY, PI / 2.0, -PI / 2.0, m_arc, false);
    segment(&mut verts, c2 - EY, c1 - EY, m_seg, false);
    verts.pop(); // closes back to the first vertex
    let stadium = PolyCurve::new(verts, true)?;

    let n_c = even(((n as f64) * 2.0 * PI / stadium_len).round() as usize).max(32);
    // circles in the xz-plane with a vertex exactly at c1 resp. c2
    let mut ring1 = Vec::new();
    arc(&mut ring1, s1, 1.0, EX, EZ, 0.0, 2.0 * PI, n_c, true);
    ring1.pop();
    let mut ring2 = Vec::new();
    arc(&mut ring2, s2, 1.0, -EX, EZ, 0.0, 2.0 * PI, n_c, true);
    ring2.pop();

    PolyLink::from_components(vec![
        stadium,
        PolyCurve::new(ring1, true)?,
        PolyCurve::new(ring2, true)?,
    ])
}

/// Turning angles of a regular convex k-gon.
pub fn regular_turning_angles(k: usize) -> Vec<f64> {
    vec![2.0 * std::f64::consts::PI / k as f64; k]
}

/// A convex unit-edge polygon (given by its turning angles) wrapped by
/// its outer parallel curve at distance one, with one unit circle hung
/// around each polygon vertex in the vertical plane of the angle
/// bisector.  The polygon itself is not part of the link; its edges
/// appear as isolated unit struts between successive circles, and each
/// circle receives a wheel of struts from the parallel curve's corner
/// arc.
pub fn wrapped(turning_angles: &[f64], n: usize) -> Result<PolyLink> {
    use std::f64::consts::PI;
    let k = turning_angles.len();
    if k < 3 {
        return Err(Error::domain("polygon needs at least 3 vertices"));
    }
    if n < 64 {
        return Err(Error::domain("wrapped needs n >= 64"));
    }
    for &a in turning_angles {
        if !(a > 0.0 && a <= 2.0 * PI / 3.0 + 1e-12) {
            return Err(Error::domain(format!(
                "turning angle {a} outside (0, 2*pi/3]: hung circles would overlap"
            )));
        }
    }
    let angle_sum: f64 = turning_angles.iter().sum();
    if (angle_sum - 2.0 * PI).abs() > 1e-9 {
        return Err(Error::domain(format!(
            "turning angles sum to {angle_sum}, not 2*pi"
        )));
    }

    // unit-edge polygon in the xy-plane; heading of edge i accumulates
    // the turning angles at vertices 1..=i
    let mut headings = Vec::with_capacity(k);
    let mut h = 0.0;
    for i in 0..k {
        if i > 0 {
            h += turning_angles[i];
        }
        headings.push(h);
    }
    let dirs: Vec<Vec3> = headings.iter().map(|&h| EX * h.cos() + EY * h.sin()).collect();
    let mut poly = vec![Vec3::zeros()];
    for i in 0..k - 1 {
        let p = poly[i] + dirs[i];
        poly.push(p);
    }
    let closure = (poly[0] - (poly[k - 1] + dirs[k - 1])).norm();
    if closure > 1e-9 {
        return Err(Error::domain(format!(
            "turning angles close the direction but not the polygon (gap {closure:.3e})"
        )));
    }

    // outward edge normals (interior lies to the left of travel)
    let normal = |d: Vec3| Vec3::new(d.y, -d.x, 0.0);
    // outward bisector at vertex i (between incoming edge i-1 and
    // outgoing edge i)
    let bisector: Vec<Vec3> = (0..k)
        .map(|i| {
            let n_in = normal(dirs[(i + k - 1) % k]);
            let n_out = normal(dirs[i]);
            (n_in + n_out).normalize()
        })
        .collect();

    let len0 = k as f64 + 2.0 * PI;
    let m_edge = (((n as f64) / len0).round() as usize).max(2);

    // outer parallel curve: straight offsets of the edges joined by
    // corner arcs centered on the polygon vertices, with the arc
    // midpoints (the hung-circle centers) landing on vertices
    let mut verts: Vec<Vec3> = Vec::new();
    for i in 0..k {
        let j = (i + 1) % k;
        let n_i = normal(dirs[i]);
        segment(&mut verts, poly[i] + n_i, poly[j] + n_i, m_edge, i == 0);
        // corner arc at vertex j from normal(dirs[i]) to normal(dirs[j])
        let a0 = (n_i.y).atan2(n_i.x);
        let sweep = turning_angles[j];
        let m_arc = even((((n as f64) * sweep / len0).round() as usize).max(4));
        arc(&mut verts, poly[j], 1.0, EX, EY, a0, a0 + sweep, m_arc, false);
    }
    verts.pop(); // closes back to the start of edge 0
    let outer = PolyCurve::new(verts, true)?;

    let n_c = even(((n as f64) * 2.0 * PI / len0).round() as usize).max(32);
    let mut components = vec![outer];
    for i in 0..k {
        let center = poly[i] + bisector[i];
        // vertical circle through the polygon vertex
        let mut ring = Vec::new();
        arc(&mut ring, center, 1.0, -bisector[i], EZ, 0.0, 2.0 * PI, n_c, true);
        ring.pop();
        components.push(PolyCurve::new(ring, true)?);
    }
    PolyLink::from_components(components)
}

/// Two round circles, each covered multiple times, pivoted at each
/// other's centers: the first winds `m` times around the unit circle in
/// the xy-plane about the origin, the second winds `n` times around the
/// unit circle in the xz-plane about (1,0,0).  Each passes through the
/// other's center, receiving a wheel of struts there whose total weight
/// scales with the winding numbers.
pub fn covered_hopf(m: usize, n: usize, samples: usize) -> Result<PolyLink> {
    use std::f64::consts::PI;
    if m < 1 || n < 1 {
        return Err(Error::domain("winding numbers must be at least 1"));
    }
    if samples < 16 {
        return Err(Error::domain("covered_hopf needs samples >= 16"));
    }
    let ring = |winds: usize, center: Vec3, e1: Vec3, e2: Vec3| -> Result<PolyCurve> {
        let total = winds * samples;
        let verts = (0..total)
            .map(|i| {
                let a = 2.0 * PI * (i % samples) as f64 / samples as f64;
                center + e1 * a.cos() + e2 * a.sin()
            })
            .collect();
        PolyCurve::new(verts, true)
    };
    // vertex of the first circle at (1,0,0) = second center, and of the
    // second at the origin = first center
    PolyLink::from_components(vec![
        ring(m, Vec3::zeros(), EX, EY)?,
        ring(n, EX, -EX, EZ)?,
    ])
}

/// The naive tau-clasp: two circular arcs of opening angle 2 asin(tau),
/// each a unit arc centered on the *tip* of the other, with tangent legs
/// and the same endpoint planes and wedge obstacles as the critical
/// clasp sample.  Its curvature force focuses a wheel of struts onto
/// each tip, which no nonnegative strut measure can balance.
pub fn naive_clasp(tau: f64, n: usize, leg: f64) -> Result<PolyLink> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::domain(format!("tau = {tau} outside (0, 1]")));
    }
    if n < 16 {
        return Err(Error::domain("naive_clasp needs n >= 16"));
    }
    let a = tau.asin();
    let nn = even(n);
    // arc in the xz-plane centered at (0,0,0.5), tip at (0,0,-0.5)
    let arc_pts: Vec<Vec3> = (0..=nn)
        .map(|i| {
            let phi = -a + 2.0 * a * i as f64 / nn as f64;
            Vec3::new(phi.sin(), 0.0, 0.5 - phi.cos())
        })
        .collect();
    let c = a.cos();
    let dir_end = Vec3::new(c, 0.0, tau);
    let dir_start = Vec3::new(-c, 0.0, tau);
    two_component_clasp_link(arc_pts, dir_start, dir_end, leg)
}

/// A clasp pressed flat between two parallel walls one unit apart: two
/// unit semicircles, each centered on the other's tip, with endpoints
/// constrained to the walls and each component obstructed by the wall it
/// presses its tip against.  The wall pushes back with force about 2 at
/// each tip.
pub fn pressed_clasp(n: usize) -> Result<PolyLink> {
    use std::f64::consts::FRAC_PI_2;
    if n < 16 {
        return Err(Error::domain("pressed_clasp needs n >= 16"));
    }
    let nn = even(n);
    // semicircle in the xz-plane around (0,0,1), tip touching z = 0
    let arc_pts: Vec<Vec3> = (0..=nn)
        .map(|i| {
            let phi = -FRAC_PI_2 + 2.0 * FRAC_PI_2 * i as f64 / nn as f64;
            Vec3::new(phi.sin(), 0.0, 1.0 - phi.cos())
        })
        .collect();
    let gamma = PolyCurve::new(arc_pts, false)?;
    // second semicircle in the yz-plane around the origin, tip at (0,0,1)
    let tilde_pts: Vec<Vec3> = (0..=nn)
        .map(|i| {
            let phi = -FRAC_PI_2 + 2.0 * FRAC_PI_2 * i as f64 / nn as f64;
            Vec3::new(0.0, phi.sin(), phi.cos())
        })
        .collect();
    let tilde = PolyCurve::new(tilde_pts, false)?;

    use crate::geometry::{CurveEnd, EndpointConstraint, HalfSpaceObstacle};
    use std::collections::BTreeMap;
    let mut constraints = BTreeMap::new();
    // gamma's endpoints ride the ceiling z = 1, tilde's the floor z = 0
    for (comp, curve, z) in [(0usize, &gamma, 1.0), (1usize, &tilde, 0.0)] {
        let first = curve.vertices()[0];
        let last = *curve.vertices().last().unwrap();
        let anchor_plane = |p: Vec3| EndpointConstraint::plane_with_normal(Vec3::new(p.x, p.y, z), EZ);
        constraints.insert((comp, CurveEnd::Start), anchor_plane(first));
        constraints.insert((comp, CurveEnd::End), anchor_plane(last));
    }
    let obstacles = vec![
        // gamma stays above the floor, tilde below the ceiling
        (0usize, HalfSpaceObstacle::new(EZ, 0.0)),
        (1usize, HalfSpaceObstacle::new(-EZ, -1.0)),
    ];
    PolyLink::new(vec![gamma, tilde], constraints, obstacles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{length, link_thickness, obstacle_clearance};
    use std::f64::consts::PI;

    #[test]
    fn chain_geometry() {
        let link = simple_chain(256).unwrap();
        assert_eq!(link.components().len(), 3);
        let len = link.total_length();
        // stadium 2 pi + 2 plus two unit circles
        let expect = (2.0 * PI + 2.0) + 4.0 * PI;
        assert!((len - expect).abs() < 2e-2, "length {len} vs {expect}");
        let t = link_thickness(&link).unwrap();
        assert!(t <= 1.0 + 1e-12 && t > 0.999, "thickness {t}");
    }

    #[test]
    fn wrapped_hexagon_geometry() {
        let link = wrapped(&regular_turning_angles(6), 256).unwrap();
        assert_eq!(link.components().len(), 7);
        let len = link.total_length();
        let expect = (6.0 + 2.0 * PI) + 6.0 * 2.0 * PI;
        assert!((len - expect).abs() < 5e-2, "length {len} vs {expect}");
        let t = link_thickness(&link).unwrap();
        assert!(t <= 1.0 + 1e-12 && t > 0.999, "thickness {t}");
    }

    #[test]
    fn wrapped_rejects_bad_angles() {
        // pentagon with one reflex turn: direction sum still 2 pi
        assert!(wrapped(&[2.5, 2.5, 2.5, 2.5, 2.0 * PI - 10.0], 128).is_err());
        // equilateral triangle sits exactly on the 2 pi / 3 limit
        assert!(wrapped(&regular_turning_angles(3), 128).is_ok());
        // square angles that do not sum to 2 pi
        assert!(wrapped(&[1.5, 1.5, 1.5, 1.5], 128).is_err());
    }

    #[test]
    fn covered_hopf_winding() {
        let link = covered_hopf(2, 1, 128).unwrap();
        assert_eq!(link.components()[0].vertices().len(), 256);
        assert_eq!(link.components()[1].vertices().len(), 128);
        let len = length(&link.components()[0]);
        let single = length(&link.components()[1]);
        assert!((len - 2.0 * single).abs() < 1e-12);
        let t = link_thickness(&link).unwrap();
        assert!(t <= 1.0 + 1e-12 && t > 0.999, "thickness {t}");
    }

    #[test]
    fn naive_clasp_tips_one_apart() {
        let link = naive_clasp(1.0, 128, 1.0).unwrap();
        let tip0 = link.components()[0].vertices()[1 + 64]; // legs add one vertex each side
        let tip1 = link.components()[1].vertices()[1 + 64];
        assert!((tip0 - Vec3::new(0.0, 0.0, -0.5)).norm() < 1e-12);
        assert!((tip1 - Vec3::new(0.0, 0.0, 0.5)).norm() < 1e-12);
        let t = link_thickness(&link).unwrap();
        assert!(t <= 1.0 + 1e-12 && t > 0.999, "thickness {t}");
    }

    #[test]
    fn pressed_clasp_touches_walls() {
        let link = pressed_clasp(128).unwrap();
        let c = obstacle_clearance(&link).unwrap();
        assert!(c.abs() < 1e-12, "clearance {c}");
        let t = link_thickness(&link).unwrap();
        assert!(t <= 1.0 + 1e-12 && t > 0.999, "thickness {t}");
    }
}
