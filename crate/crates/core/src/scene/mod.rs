//! Scene files: a line-oriented description of a window, Ω, and named sets.
//!
//! ```text
//! grid -3 -3 3 8 0.03125
//! omega plane
//! unbounded all
//! set F segment 0 0 1 0
//! set obstacles point 0 1
//! fn f identity
//! ```

mod fixtures;
mod func;
mod parse;

use std::collections::BTreeMap;
use std::fmt::Write as _;

pub use fixtures::Fixture;
pub use func::FnSpec;
pub use parse::parse_scene;

use crate::arakelian::{CompactProbe, WindowInput};
use crate::grid::{rasterize_with_exits, CellSet, Edge, GridError, GridSpec, Point, Primitive, PrimitiveError};
use crate::topology::{DeclaredEdges, OmegaShape, OmegaSpec, RegionModel, TopologyError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SceneError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("scene has no set named `{0}`")]
    UnknownSet(String),
    #[error("scene has no function named `{0}`")]
    UnknownFunction(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Primitive(#[from] PrimitiveError),
    #[error("function samples: {0}")]
    Samples(String),
}

/// The declared open set Ω.
#[derive(Debug, Clone, PartialEq)]
pub enum OmegaDecl {
    Plane,
    Disk { center: Point, r: f64 },
    PuncturedDisk { center: Point, r: f64 },
    Rect(Point, Point),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub grid: GridSpec,
    pub omega: OmegaDecl,
    /// Primitives removed from Ω.
    pub omega_excludes: Vec<Primitive>,
    pub unbounded: DeclaredEdges,
    pub sets: BTreeMap<String, Vec<Primitive>>,
    pub functions: BTreeMap<String, FnSpec>,
    pub fixture: Option<Fixture>,
}

/// Name of the set scenes use for the obstacles carved out of U.
pub const OBSTACLES: &str = "obstacles";

impl Scene {
    /// Scenes compare equal up to the fixture tag they were expanded from.
    pub fn equivalent(&self, other: &Scene) -> bool {
        Scene { fixture: None, ..self.clone() } == Scene { fixture: None, ..other.clone() }
    }

    pub fn grid_for(&self, ymax: Option<f64>) -> Result<GridSpec, SceneError> {
        Ok(match ymax {
            Some(h) => self.grid.with_ymax(h)?,
            None => self.grid,
        })
    }

    pub fn omega_spec(&self) -> OmegaSpec {
        let shape = match &self.omega {
            OmegaDecl::Plane => OmegaShape::Plane,
            OmegaDecl::Disk { center, r } => OmegaShape::Disk { center: *center, r: *r },
            OmegaDecl::PuncturedDisk { center, r } => OmegaShape::PuncturedDisk { center: *center, r: *r },
            OmegaDecl::Rect(a, b) => OmegaShape::Rect(*a, *b),
        };
        OmegaSpec { shape, excludes: self.omega_excludes.clone() }
    }

    pub fn set(&self, name: &str) -> Result<&[Primitive], SceneError> {
        self.sets.get(name).map(Vec::as_slice).ok_or_else(|| SceneError::UnknownSet(name.to_string()))
    }

    pub fn function(&self, name: &str) -> Result<&FnSpec, SceneError> {
        self.functions.get(name).ok_or_else(|| SceneError::UnknownFunction(name.to_string()))
    }

    /// Rasterize the union of named sets on `grid`, restricted to Ω cells later
    /// by the caller.
    pub fn raster(&self, names: &[&str], grid: &GridSpec) -> Result<(CellSet, Vec<crate::grid::ExitAnnotation>), SceneError> {
        let mut prims = Vec::new();
        for name in names {
            prims.extend_from_slice(self.set(name)?);
        }
        Ok(rasterize_with_exits(&prims, grid))
    }

    /// F (the union of `names`) and the region it lives in, on a window whose
    /// top edge is moved to `ymax` if given.
    pub fn window(&self, names: &[&str], ymax: Option<f64>) -> Result<WindowInput, SceneError> {
        let grid = self.grid_for(ymax)?;
        let (f, exits) = self.raster(names, &grid)?;
        let region = RegionModel::new(grid, self.omega_spec(), self.unbounded, exits)?;
        let f = f.intersection(&region.omega);
        Ok(WindowInput { f, region })
    }

    /// U = Ω ∖ raster(obstacles); Ω itself when the scene has no obstacles.
    pub fn u(&self, region: &RegionModel) -> CellSet {
        match self.sets.get(OBSTACLES) {
            Some(prims) => region.omega.difference(&rasterize_with_exits(prims, &region.grid).0),
            None => region.omega.clone(),
        }
    }

    /// Every set whose name starts with `K`, as compacts inside Ω.
    pub fn k_probes(&self, region: &RegionModel) -> Vec<CompactProbe> {
        self.sets
            .iter()
            .filter(|(name, _)| name.starts_with('K'))
            .map(|(name, prims)| CompactProbe {
                label: name.clone(),
                cells: rasterize_with_exits(prims, &region.grid).0.intersection(&region.omega),
            })
            .collect()
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

/// Scene-file form of a primitive (without the `set <name>` prefix).
pub fn primitive_line(p: &Primitive) -> String {
    let pts = |ps: &[Point]| ps.iter().map(|p| format!("{} {}", num(p.x), num(p.y))).collect::<Vec<_>>().join(" ");
    match p {
        Primitive::Segment(a, b) => format!("segment {}", pts(&[*a, *b])),
        Primitive::Circle { center, r } => format!("circle {} {}", pts(&[*center]), num(*r)),
        Primitive::Disk { center, r } => format!("disk {} {}", pts(&[*center]), num(*r)),
        Primitive::Rect(a, b) => format!("rect {}", pts(&[*a, *b])),
        Primitive::Ray { origin, direction } => format!("ray {}", pts(&[*origin, *direction])),
        Primitive::Point(a) => format!("point {}", pts(&[*a])),
        Primitive::Polyline(ps) => format!("polyline {}", pts(ps)),
        Primitive::Staircase => "staircase".to_string(),
        Primitive::Bracket(n) => format!("bracket {n}"),
    }
}

/// Canonical text of a scene with fixtures expanded; parses back to an
/// equivalent scene.
pub fn print_scene(scene: &Scene) -> String {
    let mut out = String::new();
    if let Some(fx) = &scene.fixture {
        let _ = writeln!(out, "# expanded from: fixture {}", fx.tag());
    }
    let g = &scene.grid;
    let _ = writeln!(out, "grid {} {} {} {} {}", num(g.xmin), num(g.ymin), num(g.xmax), num(g.ymax), num(g.delta));
    let _ = match &scene.omega {
        OmegaDecl::Plane => writeln!(out, "omega plane"),
        OmegaDecl::Disk { center, r } => writeln!(out, "omega disk {} {} {}", num(center.x), num(center.y), num(*r)),
        OmegaDecl::PuncturedDisk { center, r } => {
            writeln!(out, "omega punctured_disk {} {} {}", num(center.x), num(center.y), num(*r))
        }
        OmegaDecl::Rect(a, b) => writeln!(out, "omega rect {} {} {} {}", num(a.x), num(a.y), num(b.x), num(b.y)),
    };
    for p in &scene.omega_excludes {
        let _ = writeln!(out, "omega_exclude {}", primitive_line(p));
    }
    if scene.unbounded == DeclaredEdges::ALL {
        let _ = writeln!(out, "unbounded all");
    } else {
        for e in Edge::ALL {
            if scene.unbounded.get(e) {
                let _ = writeln!(out, "unbounded {e:?}");
            }
        }
    }
    for (name, prims) in &scene.sets {
        for p in prims {
            let _ = writeln!(out, "set {name} {}", primitive_line(p));
        }
    }
    for (name, f) in &scene.functions {
        let _ = writeln!(out, "fn {name} {f}");
    }
    out
}
