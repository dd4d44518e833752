//! Discretization of the plane into a window of closed δ-squares.
//!
//! A [`GridSpec`] fixes the window and cell size; a [`CellSet`] is a bit-per-cell
//! subset of that window. Cells are addressed by their linear row-major index
//! `j * ncols + i`, where `i` is the column (x) and `j` the row (y, upward).

mod distance;
mod raster;

pub use distance::{edt_squared, DistanceField};
pub use raster::{rasterize_closed, rasterize_with_exits, Edge, ExitAnnotation, Point, Primitive, PrimitiveError};

use std::fmt;

use serde::{Deserialize, Serialize};

/// Slack applied toward inclusion when deciding closed-square incidence.
pub const INCLUSION_SLACK: f64 = 1e-9;

/// Upper bound on the number of cells a single grid may hold.
pub const MAX_CELLS: usize = 64 << 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("grid bounds must be finite (got {0:?})")]
    NonFinite([f64; 5]),
    #[error("degenerate window: need xmin < xmax and ymin < ymax")]
    Degenerate,
    #[error("cell size must be positive (got {0})")]
    BadDelta(f64),
    #[error("grid of {0} cells exceeds the supported maximum")]
    TooLarge(usize),
}

/// A rectangular window of the plane tiled by closed squares of side `delta`.
///
/// Cell `(i, j)` covers `[xmin + i·δ, xmin + (i+1)·δ] × [ymin + j·δ, ymin + (j+1)·δ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
    pub delta: f64,
    pub ncols: usize,
    pub nrows: usize,
}

/// Number of δ-steps needed to span `extent`, tolerant of representation error
/// in quotients like `1.0 / 0.25`.
fn steps(extent: f64, delta: f64) -> usize {
    let q = extent / delta;
    let r = q.round();
    if (q - r).abs() <= 1e-9 * q.max(1.0) {
        r.max(1.0) as usize
    } else {
        q.ceil().max(1.0) as usize
    }
}

impl GridSpec {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64, delta: f64) -> Result<Self, GridError> {
        let all = [xmin, ymin, xmax, ymax, delta];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(GridError::NonFinite(all));
        }
        if delta <= 0.0 {
            return Err(GridError::BadDelta(delta));
        }
        if xmin >= xmax || ymin >= ymax {
            return Err(GridError::Degenerate);
        }
        let ncols = steps(xmax - xmin, delta);
        let nrows = steps(ymax - ymin, delta);
        let total = ncols.saturating_mul(nrows);
        if total > MAX_CELLS {
            return Err(GridError::TooLarge(total));
        }
        Ok(GridSpec { xmin, ymin, xmax, ymax, delta, ncols, nrows })
    }

    /// Same window origin and cell size, different top edge.
    pub fn with_ymax(&self, ymax: f64) -> Result<Self, GridError> {
        GridSpec::new(self.xmin, self.ymin, self.xmax, ymax, self.delta)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.ncols * self.nrows
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.ncols && j < self.nrows);
        j * self.ncols + i
    }

    /// `(column, row)` of a linear index.
    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.ncols, idx / self.ncols)
    }

    /// Index of `(i, j)` if it lies inside the window.
    #[inline]
    pub fn checked_index(&self, i: i64, j: i64) -> Option<usize> {
        if i < 0 || j < 0 || i as usize >= self.ncols || j as usize >= self.nrows {
            None
        } else {
            Some(j as usize * self.ncols + i as usize)
        }
    }

    /// Center of a (possibly virtual, out-of-window) cell.
    #[inline]
    pub fn center_of(&self, i: i64, j: i64) -> Point {
        Point::new(
            self.xmin + (i as f64 + 0.5) * self.delta,
            self.ymin + (j as f64 + 0.5) * self.delta,
        )
    }

    #[inline]
    pub fn center(&self, idx: usize) -> Point {
        let (i, j) = self.coords(idx);
        self.center_of(i as i64, j as i64)
    }

    /// Closed square `[x0, x1] × [y0, y1]` of a (possibly virtual) cell.
    #[inline]
    pub fn square_of(&self, i: i64, j: i64) -> [f64; 4] {
        let x0 = self.xmin + i as f64 * self.delta;
        let y0 = self.ymin + j as f64 * self.delta;
        [x0, y0, x0 + self.delta, y0 + self.delta]
    }

    /// Cell whose square contains `p` (lowest index on shared boundaries).
    pub fn locate(&self, p: Point) -> Option<usize> {
        let i = ((p.x - self.xmin) / self.delta).floor() as i64;
        let j = ((p.y - self.ymin) / self.delta).floor() as i64;
        self.checked_index(i, j)
    }

    /// Right and top edges of the area actually tiled by cells.
    pub fn covered_max(&self) -> (f64, f64) {
        (
            self.xmin + self.ncols as f64 * self.delta,
            self.ymin + self.nrows as f64 * self.delta,
        )
    }

    pub fn window_center(&self) -> Point {
        Point::new(0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax))
    }

    pub fn half_diagonal(&self) -> f64 {
        0.5 * (self.xmax - self.xmin).hypot(self.ymax - self.ymin)
    }

    /// Whether the cell touches the window border.
    #[inline]
    pub fn on_border(&self, idx: usize) -> bool {
        let (i, j) = self.coords(idx);
        i == 0 || j == 0 || i + 1 == self.ncols || j + 1 == self.nrows
    }

    /// In-window 4-neighbors in the fixed order E, N, W, S.
    #[inline]
    pub fn neighbors4(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = self.coords(idx);
        let (i, j) = (i as i64, j as i64);
        [(1, 0), (0, 1), (-1, 0), (0, -1)]
            .into_iter()
            .filter_map(move |(di, dj)| self.checked_index(i + di, j + dj))
    }

    /// In-window 8-neighbors (E, NE, N, NW, W, SW, S, SE).
    #[inline]
    pub fn neighbors8(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = self.coords(idx);
        let (i, j) = (i as i64, j as i64);
        [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
            .into_iter()
            .filter_map(move |(di, dj)| self.checked_index(i + di, j + dj))
    }
}

/// Convert a real-unit center back to its grid index.
pub fn index_of_center(grid: &GridSpec, p: Point) -> Option<usize> {
    let i = ((p.x - grid.xmin) / grid.delta - 0.5).round() as i64;
    let j = ((p.y - grid.ymin) / grid.delta - 0.5).round() as i64;
    grid.checked_index(i, j)
}

/// A subset of the cells of one grid, one bit per cell.
#[derive(Clone, PartialEq)]
pub struct CellSet {
    grid: GridSpec,
    words: Vec<u64>,
}

impl fmt::Debug for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CellSet")
            .field("ncols", &self.grid.ncols)
            .field("nrows", &self.grid.nrows)
            .field("len", &self.len())
            .finish()
    }
}

impl CellSet {
    pub fn empty(grid: &GridSpec) -> Self {
        CellSet { grid: *grid, words: vec![0; grid.len().div_ceil(64)] }
    }

    pub fn full(grid: &GridSpec) -> Self {
        let mut s = CellSet { grid: *grid, words: vec![!0; grid.len().div_ceil(64)] };
        s.trim();
        s
    }

    pub fn from_indices(grid: &GridSpec, cells: impl IntoIterator<Item = usize>) -> Self {
        let mut s = CellSet::empty(grid);
        for c in cells {
            s.insert(c);
        }
        s
    }

    pub fn from_fn(grid: &GridSpec, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut s = CellSet::empty(grid);
        for idx in 0..grid.len() {
            if f(idx) {
                s.insert(idx);
            }
        }
        s
    }

    fn trim(&mut self) {
        let n = self.grid.len();
        if !n.is_multiple_of(64) {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << (n % 64)) - 1;
            }
        }
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    #[inline]
    pub fn contains(&self, idx: usize) -> bool {
        idx < self.grid.len() && self.words[idx >> 6] >> (idx & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, idx: usize) -> bool {
        assert!(idx < self.grid.len(), "cell {idx} outside grid");
        let (w, b) = (idx >> 6, idx & 63);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    #[inline]
    pub fn remove(&mut self, idx: usize) -> bool {
        if idx >= self.grid.len() {
            return false;
        }
        let (w, b) = (idx >> 6, idx & 63);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        was
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Member indices in ascending (row-major) order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Smallest member index.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn check_same(&self, other: &CellSet) {
        assert_eq!(
            (self.grid.ncols, self.grid.nrows),
            (other.grid.ncols, other.grid.nrows),
            "cell sets from different grids"
        );
    }

    pub fn union_with(&mut self, other: &CellSet) {
        self.check_same(other);
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a |= b);
    }

    pub fn intersect_with(&mut self, other: &CellSet) {
        self.check_same(other);
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a &= b);
    }

    pub fn difference_with(&mut self, other: &CellSet) {
        self.check_same(other);
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a &= !b);
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &CellSet) -> CellSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &CellSet) -> CellSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    /// All grid cells not in `self`.
    pub fn complement(&self) -> CellSet {
        let mut s = CellSet { grid: self.grid, words: self.words.iter().map(|w| !w).collect() };
        s.trim();
        s
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.check_same(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &CellSet) -> bool {
        self.check_same(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Cells whose whole 8-neighborhood (clipped to the window) lies in `self`,
    /// excluding cells on the window border.
    pub fn interior(&self) -> CellSet {
        let g = self.grid;
        CellSet::from_fn(&g, |idx| {
            self.contains(idx) && !g.on_border(idx) && g.neighbors8(idx).all(|n| self.contains(n))
        })
    }

    /// Transfer onto another grid: a target cell is included when its center
    /// lies in the closed square of a member cell. Exact for aligned grids.
    pub fn transfer(&self, target: &GridSpec) -> CellSet {
        let src = &self.grid;
        CellSet::from_fn(target, |idx| {
            let c = target.center(idx);
            let fi = (c.x - src.xmin) / src.delta;
            let fj = (c.y - src.ymin) / src.delta;
            let i = fi.floor() as i64;
            let j = fj.floor() as i64;
            src.checked_index(i, j).is_some_and(|s| self.contains(s))
        })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}] x [{}, {}] at delta {} ({} x {} cells)",
            self.xmin, self.xmax, self.ymin, self.ymax, self.delta, self.ncols, self.nrows
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_grid_examples() {
        let g = GridSpec::new(-1.0, -1.0, 1.0, 1.0, 0.5).unwrap();
        assert_eq!((g.ncols, g.nrows), (4, 4));
        let g = GridSpec::new(0.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!((g.ncols, g.nrows), (1, 1));
        let g = GridSpec::new(0.0, 0.0, 1.0, 1.0, 0.3).unwrap();
        assert_eq!((g.ncols, g.nrows), (4, 4));
        let g = GridSpec::new(-1.0, -1.0, 1.0, 1.0, 1.0 / 128.0).unwrap();
        assert_eq!((g.ncols, g.nrows), (256, 256));
    }

    #[test]
    fn make_grid_rejects_bad_input() {
        assert_eq!(GridSpec::new(1.0, 0.0, 1.0, 1.0, 0.1), Err(GridError::Degenerate));
        assert_eq!(GridSpec::new(0.0, 0.0, 1.0, 1.0, 0.0), Err(GridError::BadDelta(0.0)));
        assert!(matches!(
            GridSpec::new(0.0, f64::NAN, 1.0, 1.0, 0.1),
            Err(GridError::NonFinite(_))
        ));
        assert!(matches!(GridSpec::new(0.0, 0.0, 1e6, 1e6, 1e-3), Err(GridError::TooLarge(_))));
    }

    #[test]
    fn set_algebra() {
        let g = GridSpec::new(0.0, 0.0, 10.0, 13.0, 1.0).unwrap();
        let a = CellSet::from_fn(&g, |i| i % 3 == 0);
        let b = CellSet::from_fn(&g, |i| i % 5 == 0);
        assert!(a.union(&b).difference(&b).is_subset(&a));
        assert_eq!(a.intersection(&a), a);
        assert_eq!(a.complement().complement(), a);
        assert_eq!(CellSet::full(&g).len(), 130);
        assert_eq!(a.iter().collect::<Vec<_>>(), (0..130).filter(|i| i % 3 == 0).collect::<Vec<_>>());
    }

    #[test]
    fn center_round_trip() {
        let g = GridSpec::new(-3.0, -3.0, 3.0, 8.0, 1.0 / 32.0).unwrap();
        for idx in [0, 17, 4000, g.len() - 1] {
            assert_eq!(index_of_center(&g, g.center(idx)), Some(idx));
        }
    }

    #[test]
    fn transfer_between_aligned_windows() {
        let small = GridSpec::new(0.0, 0.0, 2.0, 2.0, 0.25).unwrap();
        let big = small.with_ymax(4.0).unwrap();
        let s = CellSet::from_indices(&small, [0, 9, 63]);
        let t = s.transfer(&big);
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![0, 9, 63]);
        assert_eq!(t.transfer(&small), s);
    }
}
