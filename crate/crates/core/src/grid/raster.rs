//! Closed-square ("touch") rasterization of geometric primitives.
//!
//! A cell is included iff the primitive's point set meets the cell's closed
//! square, decided with [`INCLUSION_SLACK`] toward inclusion. The raster of a
//! closed set is therefore a superset-image of the set, which can only merge
//! complement components, never split them.

use serde::{Deserialize, Serialize};

use super::{CellSet, GridSpec, INCLUSION_SLACK};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Side of the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Edge {
    N,
    S,
    E,
    W,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::N, Edge::S, Edge::E, Edge::W];
}

/// Where a clipped unbounded primitive leaves the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExitAnnotation {
    pub edge: Edge,
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Primitive {
    Segment(Point, Point),
    /// The circle curve `|z - center| = r`.
    Circle { center: Point, r: f64 },
    /// The closed disk `|z - center| <= r`.
    Disk { center: Point, r: f64 },
    /// Closed filled axis-parallel rectangle spanned by two corners.
    Rect(Point, Point),
    Ray { origin: Point, direction: Point },
    Point(Point),
    Polyline(Vec<Point>),
    /// The staircase `⋃ₙ ({xₙ}×[0,n] ∪ [xₙ,xₙ₊₁]×{n}) ∪ {1}×[0,∞)` with `xₙ = Σᵢ₌₁ⁿ 2⁻ⁱ`.
    Staircase,
    /// Bracket `n` of the bracket family: `n = 0` is the line `{2}×ℝ`, `n ≥ 1` an
    /// inverted U of width `2⁻ⁿ` and height `n` ending at `x = Σᵢ₌₀ⁿ⁻¹ 2⁻ⁱ`.
    Bracket(u32),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PrimitiveError {
    #[error("non-finite coordinate in primitive")]
    NonFinite,
    #[error("radius must be positive (got {0})")]
    BadRadius(f64),
    #[error("ray direction must be a nonzero vector")]
    ZeroDirection,
    #[error("polyline needs at least 2 points (got {0})")]
    ShortPolyline(usize),
}

fn finite(ps: &[Point]) -> bool {
    ps.iter().all(|p| p.x.is_finite() && p.y.is_finite())
}

/// Smallest `n` with staircase/bracket features above `ymax` irrelevant.
fn feature_count(ymax: f64) -> u32 {
    let top = if ymax.is_finite() { ymax.ceil().max(0.0) as u32 } else { 0 };
    (top + 1).clamp(1, 52)
}

impl Primitive {
    pub fn validate(&self) -> Result<(), PrimitiveError> {
        match self {
            Primitive::Segment(a, b) | Primitive::Rect(a, b) => {
                finite(&[*a, *b]).then_some(()).ok_or(PrimitiveError::NonFinite)
            }
            Primitive::Circle { center, r } | Primitive::Disk { center, r } => {
                if !finite(&[*center]) || !r.is_finite() {
                    Err(PrimitiveError::NonFinite)
                } else if *r <= 0.0 {
                    Err(PrimitiveError::BadRadius(*r))
                } else {
                    Ok(())
                }
            }
            Primitive::Ray { origin, direction } => {
                if !finite(&[*origin, *direction]) {
                    Err(PrimitiveError::NonFinite)
                } else if direction.x == 0.0 && direction.y == 0.0 {
                    Err(PrimitiveError::ZeroDirection)
                } else {
                    Ok(())
                }
            }
            Primitive::Point(p) => finite(&[*p]).then_some(()).ok_or(PrimitiveError::NonFinite),
            Primitive::Polyline(ps) => {
                if ps.len() < 2 {
                    Err(PrimitiveError::ShortPolyline(ps.len()))
                } else if !finite(ps) {
                    Err(PrimitiveError::NonFinite)
                } else {
                    Ok(())
                }
            }
            Primitive::Staircase | Primitive::Bracket(_) => Ok(()),
        }
    }

    /// Replace the fixture variants by the basic primitives relevant below `ymax`.
    pub fn expand(&self, ymax: f64) -> Vec<Primitive> {
        match self {
            Primitive::Staircase => {
                let mut out = Vec::new();
                let x = |n: u32| 1.0 - 0.5f64.powi(n as i32);
                for n in 1..=feature_count(ymax) {
                    let h = n as f64;
                    out.push(Primitive::Segment(Point::new(x(n), 0.0), Point::new(x(n), h)));
                    out.push(Primitive::Segment(Point::new(x(n), h), Point::new(x(n + 1), h)));
                }
                out.push(Primitive::Ray {
                    origin: Point::new(1.0, 0.0),
                    direction: Point::new(0.0, 1.0),
                });
                out
            }
            Primitive::Bracket(0) => vec![
                Primitive::Ray { origin: Point::new(2.0, 0.0), direction: Point::new(0.0, 1.0) },
                Primitive::Ray { origin: Point::new(2.0, 0.0), direction: Point::new(0.0, -1.0) },
            ],
            Primitive::Bracket(n) => {
                let n = *n as i32;
                let right = 2.0 - 0.5f64.powi(n - 1);
                let left = right - 0.5f64.powi(n);
                let h = n as f64;
                vec![
                    Primitive::Segment(Point::new(left, 0.0), Point::new(left, h)),
                    Primitive::Segment(Point::new(right, 0.0), Point::new(right, h)),
                    Primitive::Segment(Point::new(left, h), Point::new(right, h)),
                ]
            }
            other => vec![other.clone()],
        }
    }

    /// Whether the point set meets the closed square `[x0,x1]×[y0,y1]` (with slack).
    /// Fixture variants must be expanded first.
    pub fn touches_square(&self, sq: [f64; 4]) -> bool {
        let e = INCLUSION_SLACK;
        let [x0, y0, x1, y1] = [sq[0] - e, sq[1] - e, sq[2] + e, sq[3] + e];
        let box_ = [x0, y0, x1, y1];
        match self {
            Primitive::Segment(a, b) => clip(*a, Point::new(b.x - a.x, b.y - a.y), 1.0, box_).is_some(),
            Primitive::Ray { origin, direction } => clip(*origin, *direction, f64::INFINITY, box_).is_some(),
            Primitive::Point(p) => p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1,
            Primitive::Polyline(ps) => ps
                .windows(2)
                .any(|w| clip(w[0], Point::new(w[1].x - w[0].x, w[1].y - w[0].y), 1.0, box_).is_some()),
            Primitive::Rect(a, b) => {
                a.x.min(b.x) <= x1 && a.x.max(b.x) >= x0 && a.y.min(b.y) <= y1 && a.y.max(b.y) >= y0
            }
            Primitive::Disk { center, r } => min_dist(sq, *center) <= r + e,
            Primitive::Circle { center, r } => {
                min_dist(sq, *center) <= r + e && max_dist(sq, *center) >= r - e
            }
            Primitive::Staircase | Primitive::Bracket(_) => {
                self.expand(sq[3]).iter().any(|p| p.touches_square(sq))
            }
        }
    }

    /// Axis-aligned bounding box `[x0, y0, x1, y1]`; unbounded sides are infinite.
    fn bbox(&self) -> [f64; 4] {
        match self {
            Primitive::Segment(a, b) | Primitive::Rect(a, b) => {
                [a.x.min(b.x), a.y.min(b.y), a.x.max(b.x), a.y.max(b.y)]
            }
            Primitive::Circle { center, r } | Primitive::Disk { center, r } => {
                [center.x - r, center.y - r, center.x + r, center.y + r]
            }
            Primitive::Point(p) => [p.x, p.y, p.x, p.y],
            Primitive::Polyline(ps) => ps.iter().fold(
                [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY],
                |b, p| [b[0].min(p.x), b[1].min(p.y), b[2].max(p.x), b[3].max(p.y)],
            ),
            Primitive::Ray { origin, direction } => {
                let inf = f64::INFINITY;
                [
                    if direction.x < 0.0 { -inf } else { origin.x },
                    if direction.y < 0.0 { -inf } else { origin.y },
                    if direction.x > 0.0 { inf } else { origin.x },
                    if direction.y > 0.0 { inf } else { origin.y },
                ]
            }
            Primitive::Staircase | Primitive::Bracket(_) => {
                let inf = f64::INFINITY;
                [-inf, -inf, inf, inf]
            }
        }
    }
}

fn min_dist(sq: [f64; 4], p: Point) -> f64 {
    let dx = (sq[0] - p.x).max(0.0).max(p.x - sq[2]);
    let dy = (sq[1] - p.y).max(0.0).max(p.y - sq[3]);
    dx.hypot(dy)
}

fn max_dist(sq: [f64; 4], p: Point) -> f64 {
    let dx = (p.x - sq[0]).abs().max((p.x - sq[2]).abs());
    let dy = (p.y - sq[1]).abs().max((p.y - sq[3]).abs());
    dx.hypot(dy)
}

/// Liang–Barsky clip of `origin + t·dir`, `t ∈ [0, tmax]`, against a box.
/// Returns the parameter interval and the edge through which the line leaves.
fn clip_with_exit(origin: Point, dir: Point, tmax: f64, b: [f64; 4]) -> Option<(f64, f64, Option<Edge>)> {
    let mut t0 = 0.0f64;
    let mut t1 = tmax;
    let mut exit = None;
    let slabs = [
        (-dir.x, origin.x - b[0], Edge::W),
        (dir.x, b[2] - origin.x, Edge::E),
        (-dir.y, origin.y - b[1], Edge::S),
        (dir.y, b[3] - origin.y, Edge::N),
    ];
    for (p, q, edge) in slabs {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else if r < t1 {
                t1 = r;
                exit = Some(edge);
            }
        }
    }
    (t0 <= t1).then_some((t0, t1, exit))
}

fn clip(origin: Point, dir: Point, tmax: f64, b: [f64; 4]) -> Option<(f64, f64)> {
    clip_with_exit(origin, dir, tmax, b).map(|(a, b, _)| (a, b))
}

/// Inclusive index range of cells along one axis whose closed extent meets `[a, b]`.
fn axis_range(a: f64, b: f64, min: f64, delta: f64, n: usize) -> Option<(usize, usize)> {
    let e = INCLUSION_SLACK;
    let lo = ((a - e - min) / delta - 1.0).ceil();
    let hi = ((b + e - min) / delta).floor();
    let lo = lo.max(0.0);
    let hi = hi.min(n as f64 - 1.0);
    (lo <= hi).then_some((lo as usize, hi as usize))
}

fn raster_basic(prim: &Primitive, grid: &GridSpec, out: &mut CellSet) {
    let bb = prim.bbox();
    let (cx, cy) = grid.covered_max();
    let bx0 = bb[0].max(grid.xmin);
    let by0 = bb[1].max(grid.ymin);
    let bx1 = bb[2].min(cx);
    let by1 = bb[3].min(cy);
    let Some((i0, i1)) = axis_range(bx0, bx1, grid.xmin, grid.delta, grid.ncols) else { return };
    let Some((j0, j1)) = axis_range(by0, by1, grid.ymin, grid.delta, grid.nrows) else { return };
    for j in j0..=j1 {
        for i in i0..=i1 {
            if prim.touches_square(grid.square_of(i as i64, j as i64)) {
                out.insert(grid.index(i, j));
            }
        }
    }
}

/// Rasterize a union of primitives; rays are clipped to the window and each
/// clip is reported as an [`ExitAnnotation`].
pub fn rasterize_with_exits(primitives: &[Primitive], grid: &GridSpec) -> (CellSet, Vec<ExitAnnotation>) {
    let mut cells = CellSet::empty(grid);
    let mut exits = Vec::new();
    let (cx, cy) = grid.covered_max();
    let window = [grid.xmin, grid.ymin, cx, cy];
    for prim in primitives.iter().flat_map(|p| p.expand(grid.ymax)) {
        if let Primitive::Ray { origin, direction } = prim {
            if let Some((t0, t1, Some(edge))) = clip_with_exit(origin, direction, f64::INFINITY, window) {
                let a = Point::new(origin.x + t0 * direction.x, origin.y + t0 * direction.y);
                let b = Point::new(origin.x + t1 * direction.x, origin.y + t1 * direction.y);
                raster_basic(&Primitive::Segment(a, b), grid, &mut cells);
                exits.push(ExitAnnotation { edge, point: b });
            }
        } else {
            raster_basic(&prim, grid, &mut cells);
        }
    }
    (cells, exits)
}

pub fn rasterize_closed(primitives: &[Primitive], grid: &GridSpec) -> CellSet {
    rasterize_with_exits(primitives, grid).0
}
