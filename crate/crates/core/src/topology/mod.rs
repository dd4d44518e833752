//! Components, holes and the one-point compactification on the cell graph.
//!
//! Closed sets are read 8-connected and open complements 4-connected, so a
//! one-cell-thick 8-connected curve separates the 4-connected cells around it.

mod label;
mod region;

pub use label::{label_components, Component, ComponentLabeling, Connectivity, UNLABELED};
pub use region::{DeclaredEdges, FrontierKind, OmegaShape, OmegaSpec, RegionModel};

use serde::{Deserialize, Serialize};

use crate::grid::CellSet;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TopologyError {
    #[error("Ω is empty on this grid")]
    EmptyOmega,
    #[error("omega mask was built on a different grid")]
    GridMismatch,
    #[error("Ω is not simply connected; the Riemann-sphere complement test does not apply")]
    NotSimplyConnected,
}

/// How a complement component relates to α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AlphaReach {
    /// Touches ℂ∖Ω or a declared-unbounded window side.
    ReachesAlpha,
    /// Bounded away from α: a hole.
    Enclosed,
    /// Touches only undeclared window sides; the window cannot decide.
    WindowAmbiguous,
}

/// Classify every component of a labeling against the region's frontier.
pub fn alpha_reach(labeling: &ComponentLabeling, region: &RegionModel) -> Vec<AlphaReach> {
    let mut reach = vec![AlphaReach::Enclosed; labeling.len()];
    for idx in region.alpha_adjacent().iter() {
        if let Some(l) = labeling.label(idx) {
            reach[l as usize] = AlphaReach::ReachesAlpha;
        }
    }
    for idx in region.window_edge().iter() {
        if let Some(l) = labeling.label(idx) {
            if reach[l as usize] == AlphaReach::Enclosed {
                reach[l as usize] = AlphaReach::WindowAmbiguous;
            }
        }
    }
    reach
}

/// Summary of a hole union.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleExtent {
    pub count: usize,
    pub cells: usize,
    pub area: f64,
    /// Largest `|center|` over the union; 0 when empty.
    pub max_abs_center: f64,
    /// Smallest distance from the union to ℂ∖Ω; `None` when empty or when no
    /// complement cell is in view.
    pub min_dist_to_complement: Option<f64>,
}

impl HoleExtent {
    pub fn zero() -> Self {
        HoleExtent { count: 0, cells: 0, area: 0.0, max_abs_center: 0.0, min_dist_to_complement: None }
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn measure(union: &CellSet, count: usize, region: &RegionModel) -> Self {
        if union.is_empty() {
            return HoleExtent::zero();
        }
        let grid = union.grid();
        let dist = region.complement_distance();
        let mut max_abs = 0.0f64;
        let mut min_dist = f64::INFINITY;
        let mut cells = 0;
        for idx in union.iter() {
            cells += 1;
            max_abs = max_abs.max(grid.center(idx).norm());
            min_dist = min_dist.min(dist.get(idx));
        }
        HoleExtent {
            count,
            cells,
            area: cells as f64 * grid.delta * grid.delta,
            max_abs_center: max_abs,
            min_dist_to_complement: min_dist.is_finite().then_some(min_dist),
        }
    }
}

/// Components of Ω∖F, split by their relation to α.
#[derive(Debug, Clone)]
pub struct HoleSet {
    pub labeling: ComponentLabeling,
    pub reach: Vec<AlphaReach>,
    /// Labels of ENCLOSED components.
    pub holes: Vec<u32>,
    /// Labels of WINDOW_AMBIGUOUS components, never reported as holes.
    pub ambiguous: Vec<u32>,
    pub union: CellSet,
    pub extent: HoleExtent,
}

impl HoleSet {
    pub fn is_empty(&self) -> bool {
        self.holes.is_empty()
    }

    /// Smallest cell of each hole, in label order.
    pub fn representatives(&self) -> Vec<usize> {
        self.holes.iter().map(|&l| self.labeling.components[l as usize].first).collect()
    }
}

/// Holes of `f` in Ω: the 4-components of Ω∖F that stay away from α.
pub fn holes(f: &CellSet, region: &RegionModel) -> HoleSet {
    let domain = region.omega.difference(f);
    let labeling = label_components(&domain, Connectivity::Four);
    let reach = alpha_reach(&labeling, region);
    let pick = |want: AlphaReach| -> Vec<u32> {
        reach.iter().enumerate().filter(|(_, r)| **r == want).map(|(l, _)| l as u32).collect()
    };
    let holes = pick(AlphaReach::Enclosed);
    let ambiguous = pick(AlphaReach::WindowAmbiguous);
    let union = labeling.cells_of(&holes);
    let extent = HoleExtent::measure(&union, holes.len(), region);
    HoleSet { labeling, reach, holes, ambiguous, union, extent }
}

/// Tri-state connectivity answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Connectedness {
    Connected,
    Disconnected,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementConnectivity {
    pub status: Connectedness,
    /// Components of the graph on (Ω∖G) ∪ {α}, counting α's component once;
    /// window-ambiguous components are counted separately (an upper bound).
    pub components: usize,
}

impl ComplementConnectivity {
    pub fn is_connected(&self) -> bool {
        self.status == Connectedness::Connected
    }
}

/// Connectivity of (Ω ∪ {α}) ∖ G, with α adjacent to every α-qualifying cell.
///
/// An ENCLOSED component settles the answer as disconnected even when other
/// components are window-ambiguous.
pub fn compactified_complement_connected(g: &CellSet, region: &RegionModel) -> ComplementConnectivity {
    let hs = holes(g, region);
    let components = 1 + hs.holes.len() + hs.ambiguous.len();
    let status = if !hs.holes.is_empty() {
        Connectedness::Disconnected
    } else if !hs.ambiguous.is_empty() {
        Connectedness::Inconclusive
    } else {
        Connectedness::Connected
    };
    ComplementConnectivity { status, components }
}

/// Connectivity of the Riemann-sphere complement (window ∖ G) ∪ {∞}, with ∞
/// adjacent to every window-border cell and ℂ∖Ω inside the window included.
pub fn sphere_complement_connected(g: &CellSet, region: &RegionModel) -> Result<bool, TopologyError> {
    if !region.is_simply_connected() {
        return Err(TopologyError::NotSimplyConnected);
    }
    let grid = region.grid;
    let lab = label_components(&g.complement(), Connectivity::Four);
    Ok(lab.components.iter().all(|c| {
        c.bbox[0] == 0 || c.bbox[1] == 0 || c.bbox[2] + 1 == grid.ncols || c.bbox[3] + 1 == grid.nrows
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{rasterize_closed, GridSpec, Point, Primitive};

    fn disk_region(delta: f64, punctured: bool) -> RegionModel {
        let g = GridSpec::new(-1.0, -1.0, 1.0, 1.0, delta).unwrap();
        let c = Point::new(0.0, 0.0);
        let shape = if punctured {
            OmegaShape::PuncturedDisk { center: c, r: 1.0 }
        } else {
            OmegaShape::Disk { center: c, r: 1.0 }
        };
        RegionModel::new(g, OmegaSpec::new(shape), DeclaredEdges::NONE, vec![]).unwrap()
    }

    #[test]
    fn ring_of_eight_has_one_hole() {
        let g = GridSpec::new(0.0, 0.0, 7.0, 7.0, 1.0).unwrap();
        let region = RegionModel::new(g, OmegaSpec::plane(), DeclaredEdges::NONE, vec![]).unwrap();
        let ring = CellSet::from_fn(&g, |idx| {
            let (i, j) = g.coords(idx);
            (2..=4).contains(&i) && (2..=4).contains(&j) && (i, j) != (3, 3)
        });
        let hs = holes(&ring, &region);
        assert_eq!(hs.holes.len(), 1);
        assert_eq!(hs.union.iter().collect::<Vec<_>>(), vec![g.index(3, 3)]);
        assert_eq!(hs.ambiguous.len(), 1);
    }

    #[test]
    fn circle_in_disk_and_punctured_disk() {
        let circle = [Primitive::Circle { center: Point::new(0.0, 0.0), r: 0.5 }];
        let region = disk_region(1.0 / 64.0, false);
        let f = rasterize_closed(&circle, &region.grid);
        let hs = holes(&f, &region);
        assert_eq!(hs.holes.len(), 1);
        assert!(hs.union.contains(region.grid.locate(Point::new(0.01, 0.01)).unwrap()));
        assert_eq!(compactified_complement_connected(&f, &region).status, Connectedness::Disconnected);

        let region = disk_region(1.0 / 64.0, true);
        let hs = holes(&f, &region);
        assert!(hs.is_empty());
        assert!(hs.reach.iter().all(|r| *r == AlphaReach::ReachesAlpha));
        assert_eq!(hs.reach.len(), 2);
    }

    #[test]
    fn empty_g_is_connected() {
        let region = disk_region(1.0 / 8.0, false);
        let e = CellSet::empty(&region.grid);
        assert!(compactified_complement_connected(&e, &region).is_connected());
        assert_eq!(sphere_complement_connected(&e, &region), Ok(true));
    }

    #[test]
    fn segment_in_declared_plane_is_connected() {
        let g = GridSpec::new(-2.0, -2.0, 2.0, 2.0, 1.0 / 16.0).unwrap();
        let region = RegionModel::new(g, OmegaSpec::plane(), DeclaredEdges::ALL, vec![]).unwrap();
        let f = rasterize_closed(&[Primitive::Segment(Point::new(-1.0, 0.0), Point::new(1.0, 0.3))], &g);
        let c = compactified_complement_connected(&f, &region);
        assert!(c.is_connected());
        assert_eq!(c.components, 1);
    }

    #[test]
    fn annulus_traps_interior_on_sphere() {
        let g = GridSpec::new(-2.0, -2.0, 2.0, 2.0, 1.0 / 8.0).unwrap();
        let region = RegionModel::new(g, OmegaSpec::plane(), DeclaredEdges::ALL, vec![]).unwrap();
        let outer = rasterize_closed(&[Primitive::Rect(Point::new(-1.0, -1.0), Point::new(1.0, 1.0))], &g);
        let inner = rasterize_closed(&[Primitive::Rect(Point::new(-0.5, -0.5), Point::new(0.5, 0.5))], &g);
        let annulus = outer.difference(&inner.interior());
        assert_eq!(sphere_complement_connected(&annulus, &region), Ok(false));
    }

    #[test]
    fn sphere_check_refuses_punctured_disk() {
        let region = disk_region(1.0 / 8.0, true);
        let e = CellSet::empty(&region.grid);
        assert_eq!(sphere_complement_connected(&e, &region), Err(TopologyError::NotSimplyConnected));
    }

    #[test]
    fn undeclared_plane_is_inconclusive() {
        let g = GridSpec::new(0.0, 0.0, 4.0, 4.0, 1.0).unwrap();
        let region = RegionModel::new(g, OmegaSpec::plane(), DeclaredEdges::NONE, vec![]).unwrap();
        let e = CellSet::empty(&g);
        assert_eq!(compactified_complement_connected(&e, &region).status, Connectedness::Inconclusive);
    }
}
