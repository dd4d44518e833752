//! Exact Euclidean distance fields between cell centers.

use super::{CellSet, GridSpec};

/// Per-cell Euclidean distance from the cell center to the nearest center of a
/// source cell, in real units. `+∞` where the source is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl DistanceField {
    pub fn new(source: &CellSet) -> Self {
        let grid = *source.grid();
        let mask: Vec<bool> = (0..grid.len()).map(|i| source.contains(i)).collect();
        let sq = edt_squared(grid.ncols, grid.nrows, &mask);
        DistanceField { grid, values: sq.into_iter().map(|d| d.sqrt() * grid.delta).collect() }
    }

    /// Distance field where, in addition to `source`, every virtual cell in a
    /// one-cell ring around the window for which `outside(i, j)` holds acts as
    /// a source (`i`, `j` range over `-1..=n`).
    pub fn with_outside(source: &CellSet, outside: impl Fn(i64, i64) -> bool) -> Self {
        let grid = *source.grid();
        let (w, h) = (grid.ncols + 2, grid.nrows + 2);
        let mut mask = vec![false; w * h];
        for pj in 0..h {
            for pi in 0..w {
                let (i, j) = (pi as i64 - 1, pj as i64 - 1);
                mask[pj * w + pi] = match grid.checked_index(i, j) {
                    Some(idx) => source.contains(idx),
                    None => outside(i, j),
                };
            }
        }
        let sq = edt_squared(w, h, &mask);
        let values = (0..grid.len())
            .map(|idx| {
                let (i, j) = grid.coords(idx);
                sq[(j + 1) * w + i + 1].sqrt() * grid.delta
            })
            .collect();
        DistanceField { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    #[inline]
    pub fn get(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// One-dimensional squared distance transform of sampled function `f` by the
/// lower envelope of parabolas rooted at each sample.
fn envelope_1d(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k = 0usize;
    let mut started = false;
    for q in 0..n {
        if f[q].is_infinite() {
            continue;
        }
        if !started {
            v[0] = q;
            z[0] = f64::NEG_INFINITY;
            z[1] = f64::INFINITY;
            started = true;
            continue;
        }
        let fq = f[q] + (q * q) as f64;
        loop {
            let p = v[k];
            let s = (fq - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] && k > 0 {
                k -= 1;
            } else if s <= z[k] {
                // k == 0 and z[0] = -inf cannot happen; kept for clarity
                break;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    if !started {
        out.iter_mut().for_each(|o| *o = f64::INFINITY);
        return;
    }
    let mut k = 0usize;
    for (q, o) in out.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let d = q as f64 - p as f64;
        *o = d * d + f[p];
    }
}

/// Squared Euclidean distance (in cell units) from every cell of a `w × h`
/// row-major mask to the nearest `true` cell; `+∞` when the mask is empty.
pub fn edt_squared(w: usize, h: usize, mask: &[bool]) -> Vec<f64> {
    assert_eq!(mask.len(), w * h);
    let n = w.max(h);
    let mut v = vec![0usize; n];
    let mut z = vec![0f64; n + 1];
    let mut f = vec![0f64; n];
    let mut out = vec![0f64; n];
    let mut cols = vec![0f64; w * h];
    for i in 0..w {
        for j in 0..h {
            f[j] = if mask[j * w + i] { 0.0 } else { f64::INFINITY };
        }
        envelope_1d(&f[..h], &mut out[..h], &mut v, &mut z);
        for j in 0..h {
            cols[j * w + i] = out[j];
        }
    }
    let mut res = vec![0f64; w * h];
    for j in 0..h {
        envelope_1d(&cols[j * w..(j + 1) * w], &mut res[j * w..(j + 1) * w], &mut v, &mut z);
    }
    res
}
