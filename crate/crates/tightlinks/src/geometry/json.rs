//! JSON import/export for links.
//!
//! Floating-point values use the shortest representation that
//! round-trips exactly, so export → import is lossless and repeated
//! exports are byte-identical.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CurveEnd, EndpointConstraint, HalfSpaceObstacle, PolyCurve, PolyLink, Vec3};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    vertices: Vec<[f64; 3]>,
    closed: bool,
}

#[derive(Serialize, Deserialize)]
struct ConstraintJson {
    component: usize,
    end: String,
    kind: String,
    anchor: [f64; 3],
    basis: Vec<[f64; 3]>,
}

#[derive(Serialize, Deserialize)]
struct ObstacleJson {
    component: usize,
    normal: [f64; 3],
    offset: f64,
}

#[derive(Serialize, Deserialize)]
struct LinkJson {
    components: Vec<ComponentJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    constraints: Vec<ConstraintJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    obstacles: Vec<ObstacleJson>,
}

fn vec3(a: [f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

fn arr(v: Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

pub fn to_json_string(link: &PolyLink) -> String {
    let doc = LinkJson {
        components: link
            .components()
            .iter()
            .map(|c| ComponentJson {
                vertices: c.vertices().iter().map(|&v| arr(v)).collect(),
                closed: c.closed(),
            })
            .collect(),
        constraints: link
            .constraints()
            .iter()
            .map(|(&(comp, end), c)| ConstraintJson {
                component: comp,
                end: match end {
                    CurveEnd::Start => "start".into(),
                    CurveEnd::End => "end".into(),
                },
                kind: match c.basis.len() {
                    0 => "point".into(),
                    1 => "line".into(),
                    _ => "plane".into(),
                },
                anchor: arr(c.anchor),
                basis: c.basis.iter().map(|&e| arr(e)).collect(),
            })
            .collect(),
        obstacles: link
            .obstacles()
            .iter()
            .map(|&(comp, o)| ObstacleJson {
                component: comp,
                normal: arr(o.normal),
                offset: o.offset,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("link serialization cannot fail")
}

pub fn from_json_str(s: &str) -> Result<PolyLink> {
    let doc: LinkJson = serde_json::from_str(s).map_err(|e| Error::MalformedLink {
        context: e.to_string(),
    })?;
    let components = doc
        .components
        .into_iter()
        .map(|c| PolyCurve::new(c.vertices.into_iter().map(vec3).collect(), c.closed))
        .collect::<Result<Vec<_>>>()?;

    let mut constraints = BTreeMap::new();
    for c in doc.constraints {
        let end = match c.end.as_str() {
            "start" => CurveEnd::Start,
            "end" => CurveEnd::End,
            other => {
                return Err(Error::MalformedLink {
                    context: format!("unknown endpoint designator {other:?}"),
                })
            }
        };
        let expected = match c.kind.as_str() {
            "point" => 0,
            "line" => 1,
            "plane" => 2,
            other => {
                return Err(Error::MalformedLink {
                    context: format!("unknown constraint kind {other:?}"),
                })
            }
        };
        if c.basis.len() != expected {
            return Err(Error::MalformedLink {
                context: format!(
                    "{} constraint wants {} basis vectors, got {}",
                    c.kind,
                    expected,
                    c.basis.len()
                ),
            });
        }
        if constraints
            .insert(
                (c.component, end),
                EndpointConstraint {
                    anchor: vec3(c.anchor),
                    basis: c.basis.into_iter().map(vec3).collect(),
                },
            )
            .is_some()
        {
            return Err(Error::MalformedLink {
                context: format!("duplicate constraint on component {} {}", c.component, c.end),
            });
        }
    }

    let obstacles = doc
        .obstacles
        .into_iter()
        .map(|o| (o.component, HalfSpaceObstacle::new(vec3(o.normal), o.offset)))
        .collect();

    PolyLink::new(components, constraints, obstacles)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_link() -> PolyLink {
        let open = PolyCurve::new(
            vec![
                Vec3::new(0.1234567890123456, 0.0, 1.0),
                Vec3::new(1.0, 2.0, 3.0),
                Vec3::new(1.0, 2.0, 4.5),
            ],
            false,
        )
        .unwrap();
        let tri = PolyCurve::new(
            vec![
                Vec3::new(10.0, 0.0, 0.0),
                Vec3::new(11.0, 0.0, 0.0),
                Vec3::new(10.0, 1.0, 0.0),
            ],
            true,
        )
        .unwrap();
        let mut constraints = BTreeMap::new();
        constraints.insert(
            (0usize, CurveEnd::Start),
            EndpointConstraint::plane_with_normal(
                Vec3::new(0.1234567890123456, 0.0, 1.0),
                Vec3::new(0.0, 0.0, 1.0),
            ),
        );
        let obstacles = vec![(0usize, HalfSpaceObstacle::new(Vec3::new(0.0, 0.0, 1.0), -1.0))];
        PolyLink::new(vec![open, tri], constraints, obstacles).unwrap()
    }

    #[test]
    fn round_trip_is_exact_and_deterministic() {
        let link = sample_link();
        let s1 = to_json_string(&link);
        let back = from_json_str(&s1).unwrap();
        let s2 = to_json_string(&back);
        assert_eq!(s1, s2);
        for (a, b) in link.components().iter().zip(back.components()) {
            for (va, vb) in a.vertices().iter().zip(b.vertices()) {
                assert_eq!(va.x.to_bits(), vb.x.to_bits());
                assert_eq!(va.y.to_bits(), vb.y.to_bits());
                assert_eq!(va.z.to_bits(), vb.z.to_bits());
            }
        }
    }

    #[test]
    fn malformed_input_is_reported() {
        assert!(matches!(
            from_json_str("{"),
            Err(Error::MalformedLink { .. })
        ));
        assert!(matches!(
            from_json_str(r#"{"components": []}"#),
            Err(Error::InvalidGeometry { .. })
        ));
        let bad_kind = r#"{
            "components": [{"vertices": [[0,0,0],[1,0,0]], "closed": false}],
            "constraints": [{"component": 0, "end": "start", "kind": "plane",
                             "anchor": [0,0,0], "basis": [[1,0,0]]}]
        }"#;
        assert!(matches!(
            from_json_str(bad_kind),
            Err(Error::MalformedLink { .. })
        ));
    }
}
