use std::collections::BTreeMap;

use super::{OmegaDecl, SceneError};
use crate::grid::{GridSpec, Point, Primitive};
use crate::topology::DeclaredEdges;

/// Built-in scenes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fixture {
    /// Staircase of shrinking corridors climbing to the line x = 1.
    Staircase,
    /// Two concentric circles of radii `r1 < r2` in the punctured unit disk.
    ConcentricCircles { r1: f64, r2: f64 },
    /// The line x = 2 plus brackets 1..=n of width 2⁻ⁿ and height n.
    Brackets { n: u32 },
}

pub(super) struct Defaults {
    pub grid: GridSpec,
    pub omega: OmegaDecl,
    pub unbounded: DeclaredEdges,
    pub sets: BTreeMap<String, Vec<Primitive>>,
}

impl Fixture {
    pub fn tag(&self) -> String {
        match self {
            Fixture::Staircase => "intro_staircase".into(),
            Fixture::ConcentricCircles { r1, r2 } => format!("ex_2_10 {r1} {r2}"),
            Fixture::Brackets { n } => format!("ex_2_11 {n}"),
        }
    }

    pub(super) fn parse(args: &[&str]) -> Result<Fixture, String> {
        let nums = |rest: &[&str]| -> Result<Vec<f64>, String> {
            rest.iter().map(|t| t.parse::<f64>().map_err(|_| format!("bad number `{t}`"))).collect()
        };
        match args {
            ["intro_staircase"] => Ok(Fixture::Staircase),
            ["ex_2_10", rest @ ..] => {
                let v = nums(rest)?;
                let [r1, r2] = v[..] else { return Err(format!("ex_2_10 takes 2 radii, got {}", v.len())) };
                if !(r1 > 0.0 && r1 < r2 && r2 < 1.0) {
                    return Err(format!("ex_2_10 needs 0 < r1 < r2 < 1, got {r1} {r2}"));
                }
                Ok(Fixture::ConcentricCircles { r1, r2 })
            }
            ["ex_2_11", n] => n
                .parse::<u32>()
                .ok()
                .filter(|n| (1..=52).contains(n))
                .map(|n| Fixture::Brackets { n })
                .ok_or_else(|| format!("ex_2_11 takes an integer 1..=52, got `{n}`")),
            [name, ..] => Err(format!("unknown fixture `{name}`")),
            [] => Err("fixture needs a name".into()),
        }
    }

    pub(super) fn defaults(&self) -> Result<Defaults, SceneError> {
        let origin = Point::new(0.0, 0.0);
        let k_disk = ("K".to_string(), vec![Primitive::Disk { center: origin, r: 2.0 }]);
        Ok(match *self {
            Fixture::Staircase => Defaults {
                grid: GridSpec::new(-3.0, -3.0, 3.0, 8.0, 1.0 / 32.0)?,
                omega: OmegaDecl::Plane,
                unbounded: DeclaredEdges::ALL,
                sets: BTreeMap::from([("F".to_string(), vec![Primitive::Staircase]), k_disk]),
            },
            Fixture::ConcentricCircles { r1, r2 } => {
                let c1 = vec![Primitive::Circle { center: origin, r: r1 }];
                let c2 = vec![Primitive::Circle { center: origin, r: r2 }];
                Defaults {
                    grid: GridSpec::new(-1.0, -1.0, 1.0, 1.0, 1.0 / 128.0)?,
                    omega: OmegaDecl::PuncturedDisk { center: origin, r: 1.0 },
                    unbounded: DeclaredEdges::NONE,
                    sets: BTreeMap::from([
                        ("F".to_string(), [c1.clone(), c2.clone()].concat()),
                        ("F1".to_string(), c1),
                        ("F2".to_string(), c2),
                    ]),
                }
            }
            Fixture::Brackets { n } => Defaults {
                grid: GridSpec::new(-3.0, -3.0, 3.0, n as f64, 1.0 / 32.0)?,
                omega: OmegaDecl::Plane,
                unbounded: DeclaredEdges::ALL,
                sets: BTreeMap::from([("F".to_string(), (0..=n).map(Primitive::Bracket).collect()), k_disk]),
            },
        })
    }
}
