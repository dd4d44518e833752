//! Continuous logarithms of nonvanishing functions on F via a simply
//! connected neighborhood and spanning-tree phase unwrapping.

use std::collections::VecDeque;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::builder::{build_v, BuildError, NeighborhoodResult};
use crate::grid::{CellSet, GridSpec};
use crate::topology::RegionModel;

pub const DEFAULT_EPS_ZERO: f64 = 1e-6;
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LiftError {
    #[error("function has no samples")]
    EmptyCarrier,
    #[error("function is not sampled at cell {cell} of F")]
    Unsampled { cell: usize },
    #[error("non-finite sample at cell {cell}")]
    NonFinite { cell: usize },
    #[error("|f| = {modulus:e} < eps_zero at cell {cell} of F")]
    NearZero { cell: usize, modulus: f64 },
    #[error("Ω is not simply connected")]
    NotSimplyConnected,
    #[error("phase jump {jump:.6} between cells {from} and {to} is at least π; refine the grid")]
    PhaseJump { from: usize, to: usize, jump: f64 },
    #[error("residual max|e^g - f| = {residual:e} exceeds tol {tol:e}")]
    Residual { residual: f64, tol: f64 },
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Complex samples on a set of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    carrier: CellSet,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn from_fn(carrier: &CellSet, mut f: impl FnMut(Complex64) -> Complex64) -> Self {
        let grid = *carrier.grid();
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        for idx in carrier.iter() {
            let p = grid.center(idx);
            values[idx] = f(Complex64::new(p.x, p.y));
        }
        SampledFunction { carrier: carrier.clone(), values }
    }

    pub fn from_samples(grid: &GridSpec, samples: impl IntoIterator<Item = (usize, Complex64)>) -> Self {
        let mut carrier = CellSet::empty(grid);
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        for (idx, v) in samples {
            carrier.insert(idx);
            values[idx] = v;
        }
        SampledFunction { carrier, values }
    }

    pub fn carrier(&self) -> &CellSet {
        &self.carrier
    }

    pub fn get(&self, idx: usize) -> Option<Complex64> {
        self.carrier.contains(idx).then(|| self.values[idx])
    }

    pub fn restrict(&self, to: &CellSet) -> Self {
        let carrier = self.carrier.intersection(to);
        let mut values = vec![Complex64::new(0.0, 0.0); self.values.len()];
        for idx in carrier.iter() {
            values[idx] = self.values[idx];
        }
        SampledFunction { carrier, values }
    }

    /// `(cell, value)` pairs in ascending cell order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.carrier.iter().map(|idx| (idx, self.values[idx]))
    }
}

/// Extend `f` to all of Ω by the value of the nearest carrier cell
/// (ties to the smallest cell index).
pub fn tietze_extend(f: &SampledFunction, region: &RegionModel) -> Result<SampledFunction, LiftError> {
    let grid = region.grid;
    if f.carrier.is_empty() {
        return Err(LiftError::EmptyCarrier);
    }
    // carrier rows per column, ascending
    let mut columns: Vec<Vec<i64>> = vec![Vec::new(); grid.ncols];
    for idx in f.carrier.iter() {
        let (i, j) = grid.coords(idx);
        columns[i].push(j as i64);
    }
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    for idx in region.omega.iter() {
        if f.carrier.contains(idx) {
            values[idx] = f.values[idx];
            continue;
        }
        let (i, j) = grid.coords(idx);
        let (i, j) = (i as i64, j as i64);
        let mut best: Option<(i64, usize)> = None;
        for off in 0..grid.ncols as i64 {
            if let Some((d2, _)) = best {
                if off * off > d2 {
                    break;
                }
            }
            for c in [i - off, i + off] {
                if c < 0 || c >= grid.ncols as i64 || (off == 0 && c != i - off) {
                    continue;
                }
                let rows = &columns[c as usize];
                let at = rows.partition_point(|&r| r < j);
                for r in [at.checked_sub(1).map(|k| rows[k]), rows.get(at).copied()].into_iter().flatten() {
                    let d2 = (c - i).pow(2) + (r - j).pow(2);
                    let cand = (d2, grid.index(c as usize, r as usize));
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
        }
        let (_, src) = best.expect("non-empty carrier");
        values[idx] = f.values[src];
    }
    Ok(SampledFunction { carrier: region.omega.clone(), values })
}

#[derive(Debug, Clone)]
pub struct LiftOptions {
    pub eps_zero: f64,
    pub tol: f64,
    /// Preferred spanning-tree roots; a V component containing one of these
    /// cells is rooted there instead of at its smallest cell.
    pub roots: Vec<usize>,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions { eps_zero: DEFAULT_EPS_ZERO, tol: DEFAULT_TOL, roots: Vec::new() }
    }
}

#[derive(Debug, Clone)]
pub struct LogLift {
    /// The logarithm on F.
    pub g: SampledFunction,
    /// The logarithm on all of V.
    pub g_tilde: SampledFunction,
    pub neighborhood: NeighborhoodResult,
    pub roots: Vec<usize>,
    pub residual: f64,
    /// Largest imaginary-part difference between 4-adjacent F cells.
    pub max_jump_on_f: f64,
}

pub fn log_lift(f_set: &CellSet, f: &SampledFunction, region: &RegionModel, opts: &LiftOptions) -> Result<LogLift, LiftError> {
    let grid = region.grid;
    for idx in f_set.iter() {
        let v = f.get(idx).ok_or(LiftError::Unsampled { cell: idx })?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(LiftError::NonFinite { cell: idx });
        }
        if v.norm() < opts.eps_zero {
            return Err(LiftError::NearZero { cell: idx, modulus: v.norm() });
        }
    }
    if !region.is_simply_connected() {
        return Err(LiftError::NotSimplyConnected);
    }
    let on_f = f.restrict(f_set);
    let ext = tietze_extend(&on_f, region)?;
    let u = CellSet::from_fn(&grid, |idx| region.omega.contains(idx) && ext.values[idx].norm() >= opts.eps_zero);
    let neighborhood = build_v(f_set, &u, region)?;
    let v = &neighborhood.v;

    let mut g = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut seen = CellSet::empty(&grid);
    let mut roots = Vec::new();
    let mut queue = VecDeque::new();
    for start in v.iter() {
        if seen.contains(start) {
            continue;
        }
        // collect the component first so a preferred root can be honored
        let mut comp = vec![start];
        seen.insert(start);
        queue.push_back(start);
        while let Some(cur) = queue.pop_front() {
            for n in grid.neighbors4(cur) {
                if v.contains(n) && seen.insert(n) {
                    comp.push(n);
                    queue.push_back(n);
                }
            }
        }
        let root = opts.roots.iter().copied().filter(|r| comp.contains(r)).min().unwrap_or(start);
        roots.push(root);
        g[root] = ext.values[root].ln();
        let mut done = CellSet::from_indices(&grid, [root]);
        queue.push_back(root);
        while let Some(cur) = queue.pop_front() {
            for n in grid.neighbors4(cur) {
                if v.contains(n) && done.insert(n) {
                    let step = (ext.values[n] / ext.values[cur]).arg();
                    if step.abs() >= PI {
                        return Err(LiftError::PhaseJump { from: cur, to: n, jump: step });
                    }
                    g[n] = Complex64::new(ext.values[n].norm().ln(), g[cur].im + step);
                    queue.push_back(n);
                }
            }
        }
    }

    let g_tilde = SampledFunction { carrier: v.clone(), values: g };
    let g_on_f = g_tilde.restrict(f_set);
    let mut residual: f64 = 0.0;
    let mut max_jump: f64 = 0.0;
    for (idx, val) in g_on_f.iter() {
        residual = residual.max((val.exp() - f.values[idx]).norm());
        for n in grid.neighbors4(idx) {
            if let Some(w) = g_on_f.get(n) {
                let jump = (w.im - val.im).abs();
                if jump >= PI {
                    return Err(LiftError::PhaseJump { from: idx, to: n, jump });
                }
                max_jump = max_jump.max(jump);
            }
        }
    }
    if residual > opts.tol {
        return Err(LiftError::Residual { residual, tol: opts.tol });
    }
    Ok(LogLift { g: g_on_f, g_tilde, neighborhood, roots, residual, max_jump_on_f: max_jump })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{rasterize_closed, Point, Primitive};
    use crate::topology::{DeclaredEdges, OmegaSpec};

    fn plane() -> RegionModel {
        let d = 1.0 / 32.0;
        let g = GridSpec::new(-1.0, -1.0 - d / 2.0, 3.0, 1.0, d).unwrap();
        RegionModel::new(g, OmegaSpec::plane(), DeclaredEdges::ALL, vec![]).unwrap()
    }

    #[test]
    fn two_cell_extension_ties_go_to_smaller_cell() {
        let g = GridSpec::new(0.0, 0.0, 5.0, 1.0, 1.0).unwrap();
        let region = RegionModel::new(g, OmegaSpec::plane(), DeclaredEdges::ALL, vec![]).unwrap();
        let f = SampledFunction::from_samples(&g, [(0, Complex64::new(1.0, 0.0)), (4, Complex64::new(-1.0, 0.0))]);
        let ext = tietze_extend(&f, &region).unwrap();
        let re: Vec<f64> = (0..5).map(|i| ext.get(i).unwrap().re).collect();
        assert_eq!(re, vec![1.0, 1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn empty_carrier_rejected() {
        let region = plane();
        let f = SampledFunction::from_samples(&region.grid, []);
        assert_eq!(tietze_extend(&f, &region).unwrap_err(), LiftError::EmptyCarrier);
    }

    #[test]
    fn constant_one_lifts_to_zero() {
        let region = plane();
        let f_set = rasterize_closed(&[Primitive::Segment(Point::new(0.0, 0.0), Point::new(1.0, 0.0))], &region.grid);
        let f = SampledFunction::from_fn(&f_set, |_| Complex64::new(1.0, 0.0));
        let lift = log_lift(&f_set, &f, &region, &LiftOptions::default()).unwrap();
        assert!(lift.g.iter().all(|(_, v)| v == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn identity_on_segment() {
        let region = plane();
        let f_set = rasterize_closed(&[Primitive::Segment(Point::new(1.0, 0.0), Point::new(2.0, 0.0))], &region.grid);
        let f = SampledFunction::from_fn(&f_set, |z| z);
        let lift = log_lift(&f_set, &f, &region, &LiftOptions::default()).unwrap();
        for (idx, v) in lift.g.iter() {
            let x = region.grid.center(idx).x;
            assert!((v - Complex64::new(x.ln(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_on_f_rejected() {
        let region = plane();
        let f_set = rasterize_closed(&[Primitive::Segment(Point::new(-0.5, 0.0), Point::new(0.5, 0.0))], &region.grid);
        let f = SampledFunction::from_fn(&f_set, |z| z);
        let opts = LiftOptions { eps_zero: 0.05, ..LiftOptions::default() };
        assert!(matches!(
            log_lift(&f_set, &f, &region, &opts),
            Err(LiftError::NearZero { .. })
        ));
    }
}
