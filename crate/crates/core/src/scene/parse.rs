use std::collections::BTreeMap;

use super::{Fixture, FnSpec, OmegaDecl, Scene, SceneError};
use crate::grid::{Edge, GridSpec, Point, Primitive};
use crate::topology::DeclaredEdges;

fn err(line: usize, msg: impl Into<String>) -> SceneError {
    SceneError::Parse { line, msg: msg.into() }
}

fn numbers(line: usize, toks: &[&str]) -> Result<Vec<f64>, SceneError> {
    toks.iter()
        .map(|t| match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(err(line, format!("expected a finite number, found `{t}`"))),
        })
        .collect()
}

fn exact<const N: usize>(line: usize, what: &str, toks: &[&str]) -> Result<[f64; N], SceneError> {
    let v = numbers(line, toks)?;
    v.try_into()
        .map_err(|v: Vec<f64>| err(line, format!("{what} takes {N} numbers, got {}", v.len())))
}

pub(super) fn parse_primitive(line: usize, toks: &[&str]) -> Result<Primitive, SceneError> {
    let Some((&kind, rest)) = toks.split_first() else {
        return Err(err(line, "missing primitive"));
    };
    let p = Point::new;
    let prim = match kind {
        "segment" => {
            let [a, b, c, d] = exact(line, kind, rest)?;
            Primitive::Segment(p(a, b), p(c, d))
        }
        "circle" => {
            let [x, y, r] = exact(line, kind, rest)?;
            Primitive::Circle { center: p(x, y), r }
        }
        "disk" => {
            let [x, y, r] = exact(line, kind, rest)?;
            Primitive::Disk { center: p(x, y), r }
        }
        "rect" => {
            let [a, b, c, d] = exact(line, kind, rest)?;
            Primitive::Rect(p(a, b), p(c, d))
        }
        "ray" => {
            let [a, b, c, d] = exact(line, kind, rest)?;
            Primitive::Ray { origin: p(a, b), direction: p(c, d) }
        }
        "point" => {
            let [a, b] = exact(line, kind, rest)?;
            Primitive::Point(p(a, b))
        }
        "polyline" => {
            let v = numbers(line, rest)?;
            if v.len() < 4 || v.len() % 2 != 0 {
                return Err(err(line, "polyline takes an even number (at least 4) of coordinates"));
            }
            Primitive::Polyline(v.chunks(2).map(|c| p(c[0], c[1])).collect())
        }
        "staircase" => {
            if !rest.is_empty() {
                return Err(err(line, "staircase takes no parameters"));
            }
            Primitive::Staircase
        }
        "bracket" => match rest {
            [n] => Primitive::Bracket(n.parse().map_err(|_| err(line, format!("bad bracket index `{n}`")))?),
            _ => return Err(err(line, "bracket takes one integer")),
        },
        other => return Err(err(line, format!("unknown primitive `{other}`"))),
    };
    prim.validate().map_err(|e| err(line, e.to_string()))?;
    Ok(prim)
}

fn parse_omega(line: usize, toks: &[&str]) -> Result<OmegaDecl, SceneError> {
    match toks {
        ["plane"] => Ok(OmegaDecl::Plane),
        ["disk", rest @ ..] | ["punctured_disk", rest @ ..] => {
            let [x, y, r] = exact(line, toks[0], rest)?;
            if r <= 0.0 {
                return Err(err(line, "radius must be positive"));
            }
            let center = Point::new(x, y);
            Ok(if toks[0] == "disk" { OmegaDecl::Disk { center, r } } else { OmegaDecl::PuncturedDisk { center, r } })
        }
        ["rect", rest @ ..] => {
            let [a, b, c, d] = exact(line, "rect", rest)?;
            Ok(OmegaDecl::Rect(Point::new(a, b), Point::new(c, d)))
        }
        _ => Err(err(line, "omega takes plane | disk cx cy r | punctured_disk cx cy r | rect x1 y1 x2 y2")),
    }
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let mut grid: Option<GridSpec> = None;
    let mut omega: Option<OmegaDecl> = None;
    let mut excludes = Vec::new();
    let mut unbounded = DeclaredEdges::NONE;
    let mut sets: BTreeMap<String, Vec<Primitive>> = BTreeMap::new();
    let mut functions = BTreeMap::new();
    let mut fixture: Option<Fixture> = None;

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some((&kw, rest)) = toks.split_first() else { continue };
        match kw {
            "grid" => {
                if grid.is_some() {
                    return Err(err(line, "duplicate grid"));
                }
                let [a, b, c, d, delta] = exact(line, "grid", rest)?;
                grid = Some(GridSpec::new(a, b, c, d, delta).map_err(|e| err(line, e.to_string()))?);
            }
            "omega" => {
                if omega.is_some() {
                    return Err(err(line, "duplicate omega"));
                }
                omega = Some(parse_omega(line, rest)?);
            }
            "omega_exclude" => excludes.push(parse_primitive(line, rest)?),
            "unbounded" => match rest {
                ["all"] => unbounded = DeclaredEdges::ALL,
                [e] => unbounded.set(match *e {
                    "N" => Edge::N,
                    "S" => Edge::S,
                    "E" => Edge::E,
                    "W" => Edge::W,
                    other => return Err(err(line, format!("unknown edge `{other}`"))),
                }),
                _ => return Err(err(line, "unbounded takes N | S | E | W | all")),
            },
            "set" => {
                let Some((&name, prim)) = rest.split_first() else {
                    return Err(err(line, "set takes a name and a primitive"));
                };
                let prim = parse_primitive(line, prim)?;
                sets.entry(name.to_string()).or_default().push(prim);
            }
            "fixture" => {
                if fixture.is_some() {
                    return Err(err(line, "duplicate fixture"));
                }
                fixture = Some(Fixture::parse(rest).map_err(|m| err(line, m))?);
            }
            "fn" => match rest {
                [name, spec] => {
                    let spec = FnSpec::parse(spec).map_err(|m| err(line, m))?;
                    if functions.insert(name.to_string(), spec).is_some() {
                        return Err(err(line, format!("duplicate function `{name}`")));
                    }
                }
                _ => return Err(err(line, "fn takes a name and a builtin")),
            },
            other => return Err(err(line, format!("unknown keyword `{other}`"))),
        }
    }

    let end = text.lines().count() + 1;
    if let Some(fx) = fixture {
        let d = fx.defaults()?;
        grid = grid.or(Some(d.grid));
        omega = omega.or(Some(d.omega));
        if unbounded == DeclaredEdges::NONE {
            unbounded = d.unbounded;
        }
        for (name, prims) in d.sets {
            let entry = sets.entry(name).or_default();
            entry.splice(0..0, prims);
        }
    }
    Ok(Scene {
        grid: grid.ok_or_else(|| err(end, "missing grid"))?,
        omega: omega.ok_or_else(|| err(end, "missing omega"))?,
        omega_excludes: excludes,
        unbounded,
        sets,
        functions,
        fixture,
    })
}
