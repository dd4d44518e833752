//! The region Ω as a cell set, with the frontier classification that defines
//! adjacency to the compactification point α.

use serde::{Deserialize, Serialize};

use crate::grid::{CellSet, DistanceField, Edge, ExitAnnotation, GridSpec, Point, Primitive};

use super::label::{label_components, Connectivity};
use super::TopologyError;

/// Analytic description of Ω before discretization.
#[derive(Debug, Clone, PartialEq)]
pub enum OmegaShape {
    Plane,
    /// Open disk `D(center, r)`.
    Disk { center: Point, r: f64 },
    /// `D(center, r) ∖ {center}`; the cells touching the center are removed.
    PuncturedDisk { center: Point, r: f64 },
    /// Open axis-parallel rectangle spanned by two corners.
    Rect(Point, Point),
    /// An explicit cell set; everything outside the window is ℂ∖Ω.
    Mask(CellSet),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmegaSpec {
    pub shape: OmegaShape,
    /// Closed sets removed from the shape (cells they touch leave Ω).
    pub excludes: Vec<Primitive>,
}

impl OmegaSpec {
    pub fn new(shape: OmegaShape) -> Self {
        OmegaSpec { shape, excludes: Vec::new() }
    }

    pub fn plane() -> Self {
        OmegaSpec::new(OmegaShape::Plane)
    }

    pub fn excluding(mut self, p: Primitive) -> Self {
        self.excludes.push(p);
        self
    }
}

/// Window sides along which Ω is declared to continue to infinity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredEdges {
    pub n: bool,
    pub s: bool,
    pub e: bool,
    pub w: bool,
}

impl DeclaredEdges {
    pub const ALL: DeclaredEdges = DeclaredEdges { n: true, s: true, e: true, w: true };
    pub const NONE: DeclaredEdges = DeclaredEdges { n: false, s: false, e: false, w: false };

    pub fn get(&self, edge: Edge) -> bool {
        match edge {
            Edge::N => self.n,
            Edge::S => self.s,
            Edge::E => self.e,
            Edge::W => self.w,
        }
    }

    pub fn set(&mut self, edge: Edge) {
        match edge {
            Edge::N => self.n = true,
            Edge::S => self.s = true,
            Edge::E => self.e = true,
            Edge::W => self.w = true,
        }
    }

    pub fn any(&self) -> bool {
        self.n || self.s || self.e || self.w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FrontierKind {
    /// 4-adjacent to ℂ∖Ω inside the window, or across a window side beyond
    /// which ℂ∖Ω lies.
    BdryOmega,
    /// On a window side where Ω continues but unboundedness is undeclared.
    WindowEdge,
    /// On a window side declared (or annotated) as continuing to infinity.
    DeclaredUnbounded,
}

/// Ω discretized on a grid, plus the frontier classification that defines
/// which cells are adjacent to α in the one-point compactification Ω ∪ {α}.
#[derive(Debug, Clone)]
pub struct RegionModel {
    pub grid: GridSpec,
    pub omega: CellSet,
    pub spec: OmegaSpec,
    pub declared: DeclaredEdges,
    pub exits: Vec<ExitAnnotation>,
    bdry: CellSet,
    declared_cells: CellSet,
    window_edge: CellSet,
    alpha_adjacent: CellSet,
    complement_distance: DistanceField,
    simply_connected: bool,
}

fn edge_offset(edge: Edge) -> (i64, i64) {
    match edge {
        Edge::N => (0, 1),
        Edge::S => (0, -1),
        Edge::E => (1, 0),
        Edge::W => (-1, 0),
    }
}

struct Membership<'a> {
    grid: &'a GridSpec,
    shape: &'a OmegaShape,
    excludes: Vec<Primitive>,
}

impl Membership<'_> {
    /// Whether the (possibly virtual) cell `(i, j)` belongs to Ω.
    fn contains(&self, i: i64, j: i64) -> bool {
        let c = self.grid.center_of(i, j);
        let sq = self.grid.square_of(i, j);
        let base = match self.shape {
            OmegaShape::Plane => true,
            OmegaShape::Disk { center, r } => c.dist(*center) < *r,
            OmegaShape::PuncturedDisk { center, r } => {
                c.dist(*center) < *r && !Primitive::Point(*center).touches_square(sq)
            }
            OmegaShape::Rect(a, b) => {
                c.x > a.x.min(b.x) && c.x < a.x.max(b.x) && c.y > a.y.min(b.y) && c.y < a.y.max(b.y)
            }
            OmegaShape::Mask(m) => self.grid.checked_index(i, j).is_some_and(|idx| m.contains(idx)),
        };
        base && !self.excludes.iter().any(|p| p.touches_square(sq))
    }
}

impl RegionModel {
    pub fn new(
        grid: GridSpec,
        spec: OmegaSpec,
        declared: DeclaredEdges,
        exits: Vec<ExitAnnotation>,
    ) -> Result<Self, TopologyError> {
        if let OmegaShape::Mask(m) = &spec.shape {
            if m.grid().ncols != grid.ncols || m.grid().nrows != grid.nrows {
                return Err(TopologyError::GridMismatch);
            }
        }
        let member = Membership {
            grid: &grid,
            shape: &spec.shape,
            excludes: spec.excludes.iter().flat_map(|p| p.expand(grid.ymax)).collect(),
        };
        let omega = CellSet::from_fn(&grid, |idx| {
            let (i, j) = grid.coords(idx);
            member.contains(i as i64, j as i64)
        });
        if omega.is_empty() {
            return Err(TopologyError::EmptyOmega);
        }

        let mut bdry = CellSet::empty(&grid);
        let mut declared_cells = CellSet::empty(&grid);
        let mut window_edge = CellSet::empty(&grid);
        for idx in omega.iter() {
            let (i, j) = grid.coords(idx);
            for edge in Edge::ALL {
                let (di, dj) = edge_offset(edge);
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                match grid.checked_index(ni, nj) {
                    Some(n) => {
                        if !omega.contains(n) {
                            bdry.insert(idx);
                        }
                    }
                    None => {
                        if declared.get(edge) {
                            declared_cells.insert(idx);
                        } else if !member.contains(ni, nj) {
                            bdry.insert(idx);
                        } else {
                            window_edge.insert(idx);
                        }
                    }
                }
            }
        }

        // A clipped unbounded primitive continues past the window: the
        // complement cells flanking its exit run alongside it to infinity.
        for exit in &exits {
            let Some(anchor) = grid.locate(exit.point).or_else(|| nearest_border_cell(&grid, exit)) else {
                continue;
            };
            let (ai, aj) = grid.coords(anchor);
            for k in -2i64..=2 {
                let (ci, cj) = match exit.edge {
                    Edge::N | Edge::S => (ai as i64 + k, aj as i64),
                    Edge::E | Edge::W => (ai as i64, aj as i64 + k),
                };
                let Some(idx) = grid.checked_index(ci, cj) else { continue };
                let (di, dj) = edge_offset(exit.edge);
                let outside = grid.checked_index(ci + di, cj + dj).is_none();
                if outside && omega.contains(idx) && member.contains(ci + di, cj + dj) {
                    declared_cells.insert(idx);
                }
            }
        }

        let mut alpha_adjacent = bdry.union(&declared_cells);
        alpha_adjacent.intersect_with(&omega);
        window_edge.difference_with(&alpha_adjacent);

        let non_omega = omega.complement();
        let complement_distance =
            DistanceField::with_outside(&non_omega, |i, j| !member.contains(i, j));

        // Ω is simply connected when every 4-component of window∖Ω reaches the
        // window border (and hence ∞ on the sphere).
        let holes_of_omega = label_components(&non_omega, Connectivity::Four);
        let simply_connected = holes_of_omega.components.iter().all(|c| {
            c.bbox[0] == 0 || c.bbox[1] == 0 || c.bbox[2] + 1 == grid.ncols || c.bbox[3] + 1 == grid.nrows
        });

        Ok(RegionModel {
            grid,
            omega,
            spec,
            declared,
            exits,
            bdry,
            declared_cells,
            window_edge,
            alpha_adjacent,
            complement_distance,
            simply_connected,
        })
    }

    /// Region over an explicit cell mask.
    pub fn from_mask(omega: CellSet, declared: DeclaredEdges) -> Result<Self, TopologyError> {
        let grid = *omega.grid();
        RegionModel::new(grid, OmegaSpec::new(OmegaShape::Mask(omega)), declared, Vec::new())
    }

    /// Cells 4-adjacent to α.
    pub fn alpha_adjacent(&self) -> &CellSet {
        &self.alpha_adjacent
    }

    /// Omega cells on an undeclared window side where Ω continues.
    pub fn window_edge(&self) -> &CellSet {
        &self.window_edge
    }

    pub fn frontier_kind(&self, idx: usize) -> Option<FrontierKind> {
        if self.declared_cells.contains(idx) {
            Some(FrontierKind::DeclaredUnbounded)
        } else if self.bdry.contains(idx) {
            Some(FrontierKind::BdryOmega)
        } else if self.window_edge.contains(idx) {
            Some(FrontierKind::WindowEdge)
        } else {
            None
        }
    }

    /// Distance from each cell center to the nearest center of a ℂ∖Ω cell,
    /// counting the ring of virtual cells just outside the window.
    pub fn complement_distance(&self) -> &DistanceField {
        &self.complement_distance
    }

    pub fn is_simply_connected(&self) -> bool {
        self.simply_connected
    }

    /// Whether Ω reaches past the window (some side is declared or undecided).
    pub fn is_unbounded_in_window(&self) -> bool {
        !self.window_edge.is_empty() || !self.declared_cells.is_empty()
    }
}

fn nearest_border_cell(grid: &GridSpec, exit: &ExitAnnotation) -> Option<usize> {
    let (cx, cy) = grid.covered_max();
    let p = Point::new(
        exit.point.x.clamp(grid.xmin, cx - 0.5 * grid.delta),
        exit.point.y.clamp(grid.ymin, cy - 0.5 * grid.delta),
    );
    grid.locate(p)
}
