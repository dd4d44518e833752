//! Independent brute-force oracles and random scene generators shared by the
//! integration tests.
#![allow(dead_code)]

use arakelian::grid::{rasterize_closed, CellSet, DistanceField, GridSpec, Point, Primitive};
use arakelian::topology::{Connectivity, DeclaredEdges, OmegaSpec, RegionModel};
use rand::Rng;

/// Component ids by explicit-stack DFS, canonicalized to row-major first-seen order.
pub fn label_dfs(mask: &[bool], w: usize, h: usize, conn: Connectivity) -> Vec<Option<usize>> {
    let mut out = vec![None; w * h];
    let mut next = 0;
    let offsets: &[(i64, i64)] = match conn {
        Connectivity::Four => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
        Connectivity::Eight => &[(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)],
    };
    for start in 0..w * h {
        if !mask[start] || out[start].is_some() {
            continue;
        }
        let mut stack = vec![start];
        out[start] = Some(next);
        while let Some(c) = stack.pop() {
            let (x, y) = ((c % w) as i64, (c / w) as i64);
            for (dx, dy) in offsets {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let n = ny as usize * w + nx as usize;
                if mask[n] && out[n].is_none() {
                    out[n] = Some(next);
                    stack.push(n);
                }
            }
        }
        next += 1;
    }
    out
}

/// Naive holes on a mask region whose outside is not in Ω (unless declared):
/// a 4-component of Ω∖F is a hole when none of its cells has a 4-neighbor
/// outside Ω or outside the window. Returns the union of holes and their count.
pub fn holes_naive(omega: &[bool], f: &[bool], w: usize, h: usize) -> (Vec<bool>, usize) {
    let free: Vec<bool> = (0..w * h).map(|i| omega[i] && !f[i]).collect();
    let labels = label_dfs(&free, w, h, Connectivity::Four);
    let ncomp = labels.iter().flatten().max().map_or(0, |m| m + 1);
    let mut escapes = vec![false; ncomp];
    for c in 0..w * h {
        let Some(l) = labels[c] else { continue };
        let (x, y) = ((c % w) as i64, (c / w) as i64);
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let (nx, ny) = (x + dx, y + dy);
            let outside = nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64;
            if outside || !omega[ny as usize * w + nx as usize] {
                escapes[l] = true;
            }
        }
    }
    let union: Vec<bool> = labels.iter().map(|l| l.is_some_and(|l| !escapes[l])).collect();
    (union, escapes.iter().filter(|e| !**e).count())
}

/// Squared cell-unit distance to the nearest source, by exhaustive search.
pub fn edt_brute(mask: &[bool], w: usize, h: usize) -> Vec<f64> {
    let sources: Vec<(i64, i64)> =
        (0..w * h).filter(|&i| mask[i]).map(|i| ((i % w) as i64, (i / w) as i64)).collect();
    (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            sources
                .iter()
                .map(|&(sx, sy)| ((sx - x).pow(2) + (sy - y).pow(2)) as f64)
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

pub fn random_mask(rng: &mut impl Rng, w: usize, h: usize) -> Vec<bool> {
    let density: f64 = rng.gen_range(0.1..0.9);
    (0..w * h).map(|_| rng.gen_bool(density)).collect()
}

pub fn to_set(grid: &GridSpec, mask: &[bool]) -> CellSet {
    CellSet::from_fn(grid, |i| mask[i])
}

pub fn unit_grid(w: usize, h: usize) -> GridSpec {
    GridSpec::new(0.0, 0.0, w as f64, h as f64, 1.0).unwrap()
}

/// A random simply connected mask: random cells with the holes filled in.
pub fn simply_connected_mask(rng: &mut impl Rng, w: usize, h: usize) -> Vec<bool> {
    loop {
        let mut m = random_mask(rng, w, h);
        let (holes, _) = holes_naive(&vec![true; w * h], &m, w, h);
        // holes of the mask in the plane are the complement components that miss the border
        for i in 0..w * h {
            m[i] |= holes[i];
        }
        if m.iter().any(|&b| b) {
            return m;
        }
    }
}

pub fn plane_region(grid: GridSpec) -> RegionModel {
    RegionModel::new(grid, OmegaSpec::plane(), DeclaredEdges::ALL, vec![]).unwrap()
}

/// Random arc as a polyline, spanning less than three quarters of a turn.
fn arc(rng: &mut impl Rng, bound: f64) -> Primitive {
    let r = rng.gen_range(0.3..0.8);
    let c = Point::new(rng.gen_range(-bound + r..bound - r), rng.gen_range(-bound + r..bound - r));
    let a0: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let span = rng.gen_range(0.5..1.5 * std::f64::consts::PI);
    let n = 24;
    Primitive::Polyline(
        (0..=n)
            .map(|k| {
                let t = a0 + span * k as f64 / n as f64;
                Point::new(c.x + r * t.cos(), c.y + r * t.sin())
            })
            .collect(),
    )
}

fn segment(rng: &mut impl Rng, bound: f64) -> Primitive {
    let mut p = || Point::new(rng.gen_range(-bound..bound), rng.gen_range(-bound..bound));
    Primitive::Segment(p(), p())
}

/// 1..=4 pairwise separated segments/arcs (at least three cells apart) and
/// 1..=5 obstacle points at least two cells from F.
pub fn arakelian_scene(rng: &mut impl Rng, grid: &GridSpec) -> (CellSet, CellSet) {
    let bound = 1.5;
    let count = rng.gen_range(1..=4);
    let mut f = CellSet::empty(grid);
    let mut placed = 0;
    while placed < count {
        let prim = if rng.gen_bool(0.5) { segment(rng, bound) } else { arc(rng, bound) };
        let cells = rasterize_closed(&[prim], grid);
        if !f.is_empty() {
            let d = DistanceField::new(&f);
            if cells.iter().any(|i| d.get(i) < 3.0 * grid.delta) {
                continue;
            }
        }
        f.union_with(&cells);
        placed += 1;
    }
    let d = DistanceField::new(&f);
    let mut obstacles = CellSet::empty(grid);
    let want = rng.gen_range(1..=5);
    while obstacles.len() < want {
        let p = Point::new(rng.gen_range(-1.9..1.9), rng.gen_range(-1.9..1.9));
        let idx = grid.locate(p).unwrap();
        if d.get(idx) >= 2.0 * grid.delta {
            obstacles.insert(idx);
        }
    }
    (f, obstacles)
}

fn ring(c: Point, r: f64, square: bool) -> Primitive {
    if square {
        Primitive::Polyline(vec![
            Point::new(c.x - r, c.y - r),
            Point::new(c.x + r, c.y - r),
            Point::new(c.x + r, c.y + r),
            Point::new(c.x - r, c.y + r),
            Point::new(c.x - r, c.y - r),
        ])
    } else {
        Primitive::Circle { center: c, r }
    }
}

/// Two nested rings (circles or squares) around a random center.
pub fn enclosure_scene(rng: &mut impl Rng, grid: &GridSpec) -> CellSet {
    let outer = rng.gen_range(0.6..1.2);
    let inner = rng.gen_range(0.2..outer - 0.25);
    let room = 1.8 - outer;
    let c = Point::new(rng.gen_range(-room..room), rng.gen_range(-room..room));
    let square = rng.gen_bool(0.5);
    rasterize_closed(&[ring(c, outer, square), ring(c, inner, square)], grid)
}
