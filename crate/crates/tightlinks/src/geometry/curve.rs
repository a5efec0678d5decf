use super::Vec3;
use crate::error::{Error, Result};

/// A polygonal curve: an ordered vertex list, closed or open.
///
/// Closed curves have an implicit segment from the last vertex back to
/// the first; the first vertex is *not* repeated at the end.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCurve {
    vertices: Vec<Vec3>,
    closed: bool,
}

impl PolyCurve {
    pub fn new(vertices: Vec<Vec3>, closed: bool) -> Result<Self> {
        let min = if closed { 3 } else { 2 };
        if vertices.len() < min {
            return Err(Error::geometry(format!(
                "curve needs at least {min} vertices, got {}",
                vertices.len()
            )));
        }
        for v in &vertices {
            if !(v.x.is_finite() && v.y.is_finite() && v.z.is_finite()) {
                return Err(Error::geometry("non-finite vertex coordinate"));
            }
        }
        let n = vertices.len();
        let pairs = if closed { n } else { n - 1 };
        for i in 0..pairs {
            let j = (i + 1) % n;
            if vertices[i] == vertices[j] {
                return Err(Error::geometry(format!(
                    "consecutive vertices {i} and {j} coincide"
                )));
            }
        }
        Ok(PolyCurve { vertices, closed })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn num_segments(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    /// Endpoints of segment `i`; for a closed curve the last segment wraps.
    pub fn segment(&self, i: usize) -> (Vec3, Vec3) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    /// Point at barycentric coordinate `t` along segment `i`.
    pub fn point_on_segment(&self, i: usize, t: f64) -> Vec3 {
        let (a, b) = self.segment(i);
        a + (b - a) * t
    }

    /// Unit tangent of segment `i`.
    pub fn segment_tangent(&self, i: usize) -> Vec3 {
        let (a, b) = self.segment(i);
        (b - a).normalize()
    }

    pub fn transformed(&self, rot: &nalgebra::Rotation3<f64>, shift: Vec3) -> PolyCurve {
        PolyCurve {
            vertices: self.vertices.iter().map(|v| rot * v + shift).collect(),
            closed: self.closed,
        }
    }
}

pub fn length(c: &PolyCurve) -> f64 {
    (0..c.num_segments())
        .map(|i| {
            let (a, b) = c.segment(i);
            (b - a).norm()
        })
        .sum()
}

fn turn_angle(t_in: Vec3, t_out: Vec3) -> f64 {
    t_in.dot(&t_out).clamp(-1.0, 1.0).acos()
}

/// Total curvature: the sum of exterior (turning) angles over the
/// curve's interior vertices, all vertices for a closed curve.
pub fn total_curvature(c: &PolyCurve) -> f64 {
    let n = c.vertices().len();
    let mut total = 0.0;
    if c.closed() {
        for i in 0..n {
            let t_in = c.segment_tangent((i + n - 1) % n);
            let t_out = c.segment_tangent(i);
            total += turn_angle(t_in, t_out);
        }
    } else {
        for i in 1..n - 1 {
            total += turn_angle(c.segment_tangent(i - 1), c.segment_tangent(i));
        }
    }
    total
}

/// Discrete curvature force: one atom per vertex.
///
/// Interior vertices (all vertices of a closed curve) carry the turn
/// vector T_out - T_in.  The endpoints of an open curve carry inward
/// unit tangents of mass one — the first-variation boundary terms.
pub fn curvature_force(c: &PolyCurve) -> Vec<Vec3> {
    let n = c.vertices().len();
    let mut atoms = Vec::with_capacity(n);
    if c.closed() {
        for i in 0..n {
            let t_in = c.segment_tangent((i + n - 1) % n);
            let t_out = c.segment_tangent(i);
            atoms.push(t_out - t_in);
        }
    } else {
        atoms.push(c.segment_tangent(0));
        for i in 1..n - 1 {
            atoms.push(c.segment_tangent(i) - c.segment_tangent(i - 1));
        }
        atoms.push(-c.segment_tangent(n - 2));
    }
    atoms
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn regular_polygon(k: usize) -> PolyCurve {
        let verts = (0..k)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / k as f64;
                Vec3::new(a.cos(), a.sin(), 0.0)
            })
            .collect();
        PolyCurve::new(verts, true).unwrap()
    }

    #[test]
    fn polygon_length_and_curvature() {
        let k = 64;
        let c = regular_polygon(k);
        let expect = 2.0 * (k as f64) * (PI / k as f64).sin();
        assert!((length(&c) - expect).abs() < 1e-12);
        assert!((total_curvature(&c) - 2.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn closed_curvature_atoms_sum_to_zero() {
        let c = regular_polygon(17);
        let sum: Vec3 = curvature_force(&c).iter().sum();
        assert!(sum.norm() < 1e-13);
    }

    #[test]
    fn open_curve_atoms_include_endpoint_tangents() {
        // right angle: (0,0,0) -> (1,0,0) -> (1,1,0)
        let c = PolyCurve::new(
            vec![
                Vec3::zeros(),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
            ],
            false,
        )
        .unwrap();
        let atoms = curvature_force(&c);
        assert!((atoms[0] - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
        assert!((atoms[1] - Vec3::new(-1.0, 1.0, 0.0)).norm() < 1e-15);
        assert!((atoms[2] - Vec3::new(0.0, -1.0, 0.0)).norm() < 1e-15);
        // for an open curve the atoms also sum to zero
        let sum: Vec3 = atoms.iter().sum();
        assert!(sum.norm() < 1e-15);
        assert!((total_curvature(&c) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(PolyCurve::new(vec![Vec3::zeros()], false).is_err());
        assert!(PolyCurve::new(
            vec![Vec3::zeros(), Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0)],
            false
        )
        .is_err());
        // closed curve may not repeat the first vertex at the end
        assert!(PolyCurve::new(
            vec![
                Vec3::zeros(),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::zeros(),
            ],
            true
        )
        .is_err());
    }
}
