use std::collections::BTreeMap;

use super::curve::{curvature_force, PolyCurve};
use super::distance::segment_distance;
use super::Vec3;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CurveEnd {
    Start,
    End,
}

/// Constraint on an open-curve endpoint: the endpoint is confined to an
/// affine subspace (point, line, or plane).  `basis` holds orthonormal
/// *tangent* directions of that subspace — empty for a point, one vector
/// for a line, two for a plane.  Balance is only required modulo forces
/// normal to the subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointConstraint {
    pub anchor: Vec3,
    pub basis: Vec<Vec3>,
}

impl EndpointConstraint {
    pub fn point(anchor: Vec3) -> Self {
        EndpointConstraint { anchor, basis: vec![] }
    }

    pub fn line(anchor: Vec3, dir: Vec3) -> Self {
        EndpointConstraint { anchor, basis: vec![dir.normalize()] }
    }

    pub fn plane(anchor: Vec3, e1: Vec3, e2: Vec3) -> Self {
        EndpointConstraint { anchor, basis: vec![e1, e2] }
    }

    /// A plane through `anchor` perpendicular to `normal`, with an
    /// arbitrary deterministic tangent basis.
    pub fn plane_with_normal(anchor: Vec3, normal: Vec3) -> Self {
        let n = normal.normalize();
        let pick = if n.x.abs() < 0.9 {
            Vec3::new(1.0, 0.0, 0.0)
        } else {
            Vec3::new(0.0, 1.0, 0.0)
        };
        let e1 = (pick - n * pick.dot(&n)).normalize();
        let e2 = n.cross(&e1);
        EndpointConstraint { anchor, basis: vec![e1, e2] }
    }

    fn validate(&self) -> Result<()> {
        if self.basis.len() > 2 {
            return Err(Error::geometry("constraint basis has more than 2 directions"));
        }
        for (i, e) in self.basis.iter().enumerate() {
            if (e.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::geometry(format!("constraint basis vector {i} is not unit")));
            }
            for f in &self.basis[..i] {
                if e.dot(f).abs() > 1e-12 {
                    return Err(Error::geometry("constraint basis is not orthogonal"));
                }
            }
        }
        Ok(())
    }

    /// Distance from `p` to the constraint subspace.
    pub fn violation(&self, p: Vec3) -> f64 {
        let mut d = p - self.anchor;
        for e in &self.basis {
            d -= e * e.dot(&(p - self.anchor));
        }
        d.norm()
    }
}

/// Half-space obstacle: points with <normal, p> - offset >= 0 are
/// admissible, so the boundary wall is the plane <normal, p> = offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpaceObstacle {
    pub normal: Vec3,
    pub offset: f64,
}

impl HalfSpaceObstacle {
    pub fn new(normal: Vec3, offset: f64) -> Self {
        HalfSpaceObstacle { normal, offset }
    }

    pub fn clearance(&self, p: Vec3) -> f64 {
        self.normal.dot(&p) - self.offset
    }
}

/// A discrete curvature-force atom attached to one vertex of one
/// component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceAtom {
    pub component: usize,
    pub vertex: usize,
    pub force: Vec3,
}

/// A generalized link: polygonal components plus optional endpoint
/// constraints (on open components) and per-component half-space
/// obstacles.
#[derive(Debug, Clone)]
pub struct PolyLink {
    components: Vec<PolyCurve>,
    constraints: BTreeMap<(usize, CurveEnd), EndpointConstraint>,
    obstacles: Vec<(usize, HalfSpaceObstacle)>,
}

impl PolyLink {
    pub fn new(
        components: Vec<PolyCurve>,
        constraints: BTreeMap<(usize, CurveEnd), EndpointConstraint>,
        obstacles: Vec<(usize, HalfSpaceObstacle)>,
    ) -> Result<Self> {
        let link = PolyLink { components, constraints, obstacles };
        link.validate()?;
        Ok(link)
    }

    pub fn from_components(components: Vec<PolyCurve>) -> Result<Self> {
        PolyLink::new(components, BTreeMap::new(), Vec::new())
    }

    fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::geometry("link has no components"));
        }
        for (&(comp, end), c) in &self.constraints {
            let curve = self
                .components
                .get(comp)
                .ok_or_else(|| Error::geometry(format!("constraint references component {comp}")))?;
            if curve.closed() {
                return Err(Error::geometry(format!(
                    "endpoint constraint on closed component {comp}"
                )));
            }
            c.validate()?;
            let p = match end {
                CurveEnd::Start => curve.vertices()[0],
                CurveEnd::End => *curve.vertices().last().unwrap(),
            };
            let v = c.violation(p);
            if v > 1e-9 {
                return Err(Error::geometry(format!(
                    "endpoint of component {comp} misses its constraint by {v:.3e}"
                )));
            }
        }
        for &(comp, obs) in &self.obstacles {
            let curve = self
                .components
                .get(comp)
                .ok_or_else(|| Error::geometry(format!("obstacle references component {comp}")))?;
            if (obs.normal.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::geometry("obstacle normal is not unit"));
            }
            for (i, &v) in curve.vertices().iter().enumerate() {
                let c = obs.clearance(v);
                if c < -1e-9 {
                    return Err(Error::geometry(format!(
                        "vertex {i} of component {comp} violates an obstacle by {:.3e}",
                        -c
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn components(&self) -> &[PolyCurve] {
        &self.components
    }

    pub fn constraints(&self) -> &BTreeMap<(usize, CurveEnd), EndpointConstraint> {
        &self.constraints
    }

    pub fn constraint(&self, comp: usize, end: CurveEnd) -> Option<&EndpointConstraint> {
        self.constraints.get(&(comp, end))
    }

    pub fn obstacles(&self) -> &[(usize, HalfSpaceObstacle)] {
        &self.obstacles
    }

    pub fn obstacles_for(&self, comp: usize) -> impl Iterator<Item = (usize, &HalfSpaceObstacle)> {
        self.obstacles
            .iter()
            .enumerate()
            .filter(move |(_, (c, _))| *c == comp)
            .map(|(i, (_, o))| (i, o))
    }

    pub fn total_length(&self) -> f64 {
        self.components.iter().map(super::curve::length).sum()
    }

    /// All curvature-force atoms over all components.
    pub fn curvature_atoms(&self) -> Vec<ForceAtom> {
        let mut out = Vec::new();
        for (ci, c) in self.components.iter().enumerate() {
            for (vi, f) in curvature_force(c).into_iter().enumerate() {
                out.push(ForceAtom { component: ci, vertex: vi, force: f });
            }
        }
        out
    }

    /// Rigid image of the link (constraints and obstacles move along).
    pub fn transformed(&self, rot: &nalgebra::Rotation3<f64>, shift: Vec3) -> PolyLink {
        let components = self
            .components
            .iter()
            .map(|c| c.transformed(rot, shift))
            .collect();
        let constraints = self
            .constraints
            .iter()
            .map(|(&k, c)| {
                (
                    k,
                    EndpointConstraint {
                        anchor: rot * c.anchor + shift,
                        basis: c.basis.iter().map(|e| rot * e).collect(),
                    },
                )
            })
            .collect();
        let obstacles = self
            .obstacles
            .iter()
            .map(|&(comp, o)| {
                let n = rot * o.normal;
                (comp, HalfSpaceObstacle { normal: n, offset: o.offset + n.dot(&shift) })
            })
            .collect();
        PolyLink { components, constraints, obstacles }
    }
}

/// Link thickness: the smallest distance between points on *different*
/// components.  `None` when the link has a single component.
pub fn link_thickness(link: &PolyLink) -> Option<f64> {
    let comps = link.components();
    if comps.len() < 2 {
        return None;
    }
    // per-segment bounding data for the quick reject
    let seg_data: Vec<Vec<(Vec3, f64)>> = comps
        .iter()
        .map(|c| {
            (0..c.num_segments())
                .map(|i| {
                    let (a, b) = c.segment(i);
                    ((a + b) * 0.5, 0.5 * (b - a).norm())
                })
                .collect()
        })
        .collect();

    let mut best = f64::INFINITY;
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            for (si, &(mi, hi)) in seg_data[i].iter().enumerate() {
                let (a1, a2) = comps[i].segment(si);
                for (sj, &(mj, hj)) in seg_data[j].iter().enumerate() {
                    if (mi - mj).norm() - hi - hj >= best {
                        continue;
                    }
                    let (b1, b2) = comps[j].segment(sj);
                    let (d, _, _) = segment_distance(a1, a2, b1, b2);
                    if d < best {
                        best = d;
                    }
                }
            }
        }
    }
    Some(best)
}

/// Smallest obstacle clearance over all constrained vertices; `None`
/// when the link has no obstacles.
pub fn obstacle_clearance(link: &PolyLink) -> Option<f64> {
    if link.obstacles().is_empty() {
        return None;
    }
    let mut best = f64::INFINITY;
    for &(comp, obs) in link.obstacles() {
        for &v in link.components()[comp].vertices() {
            best = best.min(obs.clearance(v));
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle(center: Vec3, e1: Vec3, e2: Vec3, n: usize) -> PolyCurve {
        let verts = (0..n)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / n as f64;
                center + e1 * a.cos() + e2 * a.sin()
            })
            .collect();
        PolyCurve::new(verts, true).unwrap()
    }

    fn hopf(n: usize) -> PolyLink {
        let ex = Vec3::new(1.0, 0.0, 0.0);
        let ey = Vec3::new(0.0, 1.0, 0.0);
        let ez = Vec3::new(0.0, 0.0, 1.0);
        PolyLink::from_components(vec![
            circle(Vec3::zeros(), ex, ey, n),
            circle(ex, -ex, ez, n),
        ])
        .unwrap()
    }

    #[test]
    fn hopf_thickness_approaches_one() {
        // two unit circles, each through the other's center: thickness 1
        // up to chord sagitta
        let t = link_thickness(&hopf(512)).unwrap();
        assert!(t <= 1.0 + 1e-12);
        assert!(t > 1.0 - 1e-4, "t = {t}");
        // refinement improves it
        let t2 = link_thickness(&hopf(1024)).unwrap();
        assert!(t2 > t);
    }

    #[test]
    fn single_component_has_no_thickness() {
        let c = circle(Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0), 16);
        let link = PolyLink::from_components(vec![c]).unwrap();
        assert!(link_thickness(&link).is_none());
        assert!(obstacle_clearance(&link).is_none());
    }

    #[test]
    fn constraint_violation_is_rejected() {
        let open = PolyCurve::new(vec![Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0)], false).unwrap();
        let mut constraints = BTreeMap::new();
        constraints.insert(
            (0usize, CurveEnd::Start),
            EndpointConstraint::point(Vec3::new(0.5, 0.0, 0.0)),
        );
        assert!(PolyLink::new(vec![open], constraints, vec![]).is_err());
    }

    #[test]
    fn obstacle_violation_is_rejected() {
        let open = PolyCurve::new(vec![Vec3::new(0.0, 0.0, -1.0), Vec3::new(1.0, 0.0, 1.0)], false)
            .unwrap();
        let obs = HalfSpaceObstacle::new(Vec3::new(0.0, 0.0, 1.0), 0.0);
        assert!(PolyLink::new(vec![open], BTreeMap::new(), vec![(0, obs)]).is_err());
    }

    #[test]
    fn rigid_motion_preserves_validity_and_thickness() {
        let link = hopf(128);
        let rot = nalgebra::Rotation3::from_euler_angles(0.3, -1.1, 2.0);
        let moved = link.transformed(&rot, Vec3::new(5.0, -2.0, 0.5));
        moved.validate().unwrap();
        let t0 = link_thickness(&link).unwrap();
        let t1 = link_thickness(&moved).unwrap();
        assert!((t0 - t1).abs() < 1e-12);
    }
}
