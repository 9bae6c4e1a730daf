//! JSON body descriptions.

use super::{build_cone, ConvexBody, HalfSpace, ProfileBody, Shape};
use crate::error::{Error, Result};
use crate::vector::{self as v, Vector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfSpaceSpec {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ShapeSpec {
    /// Either `halfspaces` or `vertices` (or both, the vertices winning).
    Hpolytope {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        halfspaces: Option<Vec<HalfSpaceSpec>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertices: Option<Vec<Vec<f64>>>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Box {
        min: Vec<f64>,
        max: Vec<f64>,
    },
    Cone {
        apex: Vec<f64>,
        base_center: Vec<f64>,
        base_radius: f64,
        axis: Vec<f64>,
    },
    Profile {
        axis: Vec<f64>,
        anchor: Vec<f64>,
        t_grid: Vec<f64>,
        radii: Vec<f64>,
    },
}

/// `{"dim": n, "shape": {"type": ..., ...}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodySpec {
    pub dim: usize,
    pub shape: ShapeSpec,
}

fn point(dim: usize, p: &[f64], what: &str) -> Result<Vector> {
    if p.len() != dim {
        return Err(Error::Format(format!("{what} has {} coordinates, expected {dim}", p.len())));
    }
    Ok(v::from_slice(p))
}

fn coords(dim: usize, p: &Vector) -> Vec<f64> {
    p[..dim].to_vec()
}

impl BodySpec {
    pub fn build(&self) -> Result<ConvexBody> {
        let d = self.dim;
        if !(1..=3).contains(&d) {
            return Err(Error::UnsupportedDimension(d));
        }
        match &self.shape {
            ShapeSpec::Hpolytope { halfspaces, vertices } => {
                if let Some(vs) = vertices {
                    let pts = vs.iter().map(|p| point(d, p, "vertex")).collect::<Result<Vec<_>>>()?;
                    ConvexBody::from_points(d, &pts)
                } else if let Some(hs) = halfspaces {
                    let hs = hs.iter().map(|h| HalfSpace::new(point(d, &h.normal, "normal")?, h.offset)).collect::<Result<Vec<_>>>()?;
                    ConvexBody::from_halfspaces(d, &hs)
                } else {
                    Err(Error::Format("hpolytope needs `halfspaces` or `vertices`".into()))
                }
            }
            ShapeSpec::Ball { center, radius } => ConvexBody::ball(d, point(d, center, "center")?, *radius),
            ShapeSpec::Box { min, max } => ConvexBody::cuboid(d, point(d, min, "min")?, point(d, max, "max")?),
            ShapeSpec::Cone { apex, base_center, base_radius, axis } => {
                build_cone(d, point(d, apex, "apex")?, point(d, base_center, "base_center")?, *base_radius, point(d, axis, "axis")?)
            }
            ShapeSpec::Profile { axis, anchor, t_grid, radii } => {
                ConvexBody::profile(ProfileBody::new(d, point(d, axis, "axis")?, point(d, anchor, "anchor")?, t_grid.clone(), radii.clone())?)
            }
        }
    }

    pub fn from_json(s: &str) -> Result<ConvexBody> {
        let spec: BodySpec = serde_json::from_str(s)?;
        spec.build()
    }

    pub fn describe(body: &ConvexBody) -> BodySpec {
        let d = body.dim();
        let shape = match body.shape() {
            Shape::HPolytope(p) => ShapeSpec::Hpolytope {
                halfspaces: Some(p.halfspaces().iter().map(|h| HalfSpaceSpec { normal: coords(d, &h.normal), offset: h.offset }).collect()),
                vertices: Some(p.vertices().iter().map(|x| coords(d, x)).collect()),
            },
            Shape::Ball { center, radius } => ShapeSpec::Ball { center: coords(d, center), radius: *radius },
            Shape::Box { min, max } => ShapeSpec::Box { min: coords(d, min), max: coords(d, max) },
            Shape::Cone(c) => {
                ShapeSpec::Cone { apex: coords(d, &c.apex), base_center: coords(d, &c.base_center), base_radius: c.radius, axis: coords(d, &c.axis) }
            }
            Shape::Profile(p) => {
                ShapeSpec::Profile { axis: coords(d, &p.axis), anchor: coords(d, &p.anchor), t_grid: p.t_grid.clone(), radii: p.radii.clone() }
            }
        };
        BodySpec { dim: d, shape }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_shapes() {
        let b = BodySpec::from_json(r#"{"dim":2,"shape":{"type":"ball","center":[0,0],"radius":1}}"#).unwrap();
        assert!((b.volume() - std::f64::consts::PI).abs() < 1e-15);
        let h = BodySpec::from_json(
            r#"{"dim":2,"shape":{"type":"hpolytope","halfspaces":[
                {"normal":[1,0],"offset":1},{"normal":[-1,0],"offset":0},
                {"normal":[0,1],"offset":1},{"normal":[0,-1],"offset":0}]}}"#,
        )
        .unwrap();
        assert!((h.volume() - 1.0).abs() < 1e-15);
        assert!(BodySpec::from_json(r#"{"dim":2,"shape":{"type":"ball","center":[0,0,0],"radius":1}}"#).is_err());
        assert!(BodySpec::from_json(r#"{"dim":2,"shape":{"type":"blob"}}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let c = build_cone(3, [0.0, 0.0, 2.0], v::ZERO, 1.0, [0.0, 0.0, 1.0]).unwrap();
        let s = serde_json::to_string(&BodySpec::describe(&c)).unwrap();
        let back = BodySpec::from_json(&s).unwrap();
        assert_eq!(back, c);
    }
}
