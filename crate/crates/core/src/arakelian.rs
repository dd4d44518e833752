//! Exhaustions by hole-free compacts, the hole-union criterion, and verdicts.
//!
//! A closed hole-free F is Arakelian in Ω iff for every compact K ⊆ Ω the union
//! of all holes of F ∪ K stays inside a compact subset of Ω. On a finite
//! window only finitely many K and finitely many windows can be examined, so a
//! positive verdict is always stamped with the level it reached.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::grid::{CellSet, DistanceField, GridSpec};
use crate::topology::{alpha_reach, holes, label_components, Connectedness, Connectivity, HoleExtent, HoleSet, RegionModel};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArakelianError {
    #[error("an exhaustion needs at least one level")]
    NoLevels,
    #[error("exhaustion radius override list has {got} entries for {want} levels")]
    RadiusCount { got: usize, want: usize },
}

/// One compact of an exhaustion.
#[derive(Debug, Clone)]
pub struct ExhaustionLevel {
    /// 1-based level number as requested (skipped levels leave gaps).
    pub index: usize,
    pub cells: CellSet,
    /// Minimum distance kept from ℂ∖Ω and the window frame.
    pub inner_margin: f64,
    /// Radius about the window center, when Ω runs past the window.
    pub outer_radius: Option<f64>,
}

/// Nested hole-free compacts K₁ ⊆ K₂ ⊆ … with Kₙ inside the interior of Kₙ₊₁.
#[derive(Debug, Clone)]
pub struct Exhaustion {
    pub grid: GridSpec,
    pub levels: Vec<ExhaustionLevel>,
    pub warnings: Vec<String>,
}

impl Exhaustion {
    pub fn top(&self) -> Option<&ExhaustionLevel> {
        self.levels.last()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Position (0-based) of the first level containing `idx` or whose
    /// `F ∪ K` hole union contains it; `levels.len()` if none does.
    pub(crate) fn first_level_capturing(&self, idx: usize, hole_unions: &[CellSet]) -> usize {
        self.levels
            .iter()
            .zip(hole_unions)
            .position(|(l, h)| l.cells.contains(idx) || h.contains(idx))
            .unwrap_or(self.levels.len())
    }
}

/// `K ∪` its holes in Ω.
fn fill_holes(k: &CellSet, region: &RegionModel) -> CellSet {
    let hs = holes(k, region);
    k.union(&hs.union)
}

/// Default per-level radii: inner margin `δ·2^(N−n)`, outer radius
/// `n/N × half-diagonal` (only applied when Ω runs past the window).
pub fn default_radii(region: &RegionModel, nlevels: usize) -> Vec<(f64, Option<f64>)> {
    let g = &region.grid;
    let capped = region.is_unbounded_in_window();
    (1..=nlevels)
        .map(|n| {
            let inner = g.delta * 2f64.powi((nlevels - n) as i32);
            let outer = capped.then(|| n as f64 / nlevels as f64 * g.half_diagonal());
            (inner, outer)
        })
        .collect()
}

pub fn build_exhaustion(region: &RegionModel, nlevels: usize) -> Result<Exhaustion, ArakelianError> {
    if nlevels == 0 {
        return Err(ArakelianError::NoLevels);
    }
    build_exhaustion_with(region, &default_radii(region, nlevels))
}

/// Build an exhaustion from explicit `(inner_margin, outer_radius)` pairs,
/// ordered from the smallest compact to the largest.
pub fn build_exhaustion_with(
    region: &RegionModel,
    radii: &[(f64, Option<f64>)],
) -> Result<Exhaustion, ArakelianError> {
    if radii.is_empty() {
        return Err(ArakelianError::NoLevels);
    }
    let g = region.grid;
    let non_omega = region.omega.complement();
    // distance from the cell center to the nearest edge of a complement or frame cell
    let frame = DistanceField::with_outside(&non_omega, |_, _| true);
    let center = g.window_center();
    let slack = 1e-12 * g.delta;
    let raw = |inner: f64, outer: Option<f64>| {
        CellSet::from_fn(&g, |idx| {
            region.omega.contains(idx)
                && frame.get(idx) - 0.5 * g.delta >= inner - slack
                && outer.is_none_or(|r| g.center(idx).dist(center) <= r + slack)
        })
    };

    let mut levels: Vec<ExhaustionLevel> = Vec::new();
    let mut warnings = Vec::new();
    let mut above: Option<CellSet> = None;
    for (pos, &(inner, outer)) in radii.iter().enumerate().rev() {
        let mut k = raw(inner, outer);
        if let Some(next) = &above {
            k.intersect_with(&next.interior());
        }
        let k = fill_holes(&k, region);
        let index = pos + 1;
        if k.is_empty() {
            let msg = format!("exhaustion level {index} is empty (region too thin at margin {inner}); skipped");
            warn!("{msg}");
            warnings.push(msg);
            continue;
        }
        above = Some(k.clone());
        levels.push(ExhaustionLevel { index, cells: k, inner_margin: inner, outer_radius: outer });
    }
    levels.reverse();
    warnings.reverse();
    Ok(Exhaustion { grid: g, levels, warnings })
}

/// Holes of F ∪ K in Ω.
pub fn hole_union(f: &CellSet, k: &CellSet, region: &RegionModel) -> HoleSet {
    holes(&f.union(k), region)
}

pub fn hole_union_extent(f: &CellSet, k: &CellSet, region: &RegionModel) -> HoleExtent {
    hole_union(f, k, region).extent
}

/// The α-neighborhood W = Ω ∖ (K ∪ B₁ ∪ B₂ ∪ …) and whether W ∖ F joined with α
/// is connected. The Bᵢ are the holes of F ∪ K that are not inside a hole of F
/// itself, so a set with holes never certifies.
#[derive(Debug, Clone)]
pub struct AlphaNeighborhood {
    pub w: CellSet,
    pub connectivity: Connectedness,
}

impl AlphaNeighborhood {
    pub fn is_connected(&self) -> bool {
        self.connectivity == Connectedness::Connected
    }
}

pub fn alpha_neighborhood(f: &CellSet, k: &CellSet, region: &RegionModel) -> AlphaNeighborhood {
    let own = holes(f, region).union;
    let fk = f.union(k);
    let hs = holes(&fk, region);
    let removed_labels: Vec<u32> = hs
        .holes
        .iter()
        .copied()
        .filter(|&l| !own.contains(hs.labeling.components[l as usize].first))
        .collect();
    let removed = hs.labeling.cells_of(&removed_labels);
    let mut w = region.omega.difference(k);
    w.difference_with(&removed);

    let rest = w.difference(f);
    let lab = label_components(&rest, Connectivity::Four);
    let reach = alpha_reach(&lab, region);
    use crate::topology::AlphaReach::*;
    let connectivity = if reach.contains(&Enclosed) {
        Connectedness::Disconnected
    } else if reach.contains(&WindowAmbiguous) {
        Connectedness::Inconclusive
    } else {
        Connectedness::Connected
    };
    AlphaNeighborhood { w, connectivity }
}

/// A rasterized picture of the scene on one window.
#[derive(Debug, Clone)]
pub struct WindowInput {
    pub f: CellSet,
    pub region: RegionModel,
}

/// A compact to probe the criterion with, outside the exhaustion proper.
#[derive(Debug, Clone)]
pub struct CompactProbe {
    pub label: String,
    pub cells: CellSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowExtent {
    pub ymax: f64,
    pub extent: HoleExtent,
    /// Smallest cell of each hole, as real-unit centers.
    pub representatives: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelGrowth {
    pub label: String,
    pub windows: Vec<WindowExtent>,
    pub within_bound: bool,
    pub divergent: bool,
    pub ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A hole of F itself: (Ω ∪ {α}) ∖ F is disconnected.
    Hole { window: GridSpec, representative: usize, center: [f64; 2], cells: Vec<usize> },
    /// A compact K whose hole union with F keeps growing across windows.
    Level { label: String, growth: Vec<WindowExtent> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictStatus {
    VerifiedUpTo(usize),
    Refuted,
    EvidenceDivergent,
    Inconclusive(String),
}

impl VerdictStatus {
    pub fn name(&self) -> &'static str {
        match self {
            VerdictStatus::VerifiedUpTo(_) => "VERIFIED_UP_TO",
            VerdictStatus::Refuted => "REFUTED",
            VerdictStatus::EvidenceDivergent => "EVIDENCE_DIVERGENT",
            VerdictStatus::Inconclusive(_) => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ArakelianVerdict {
    pub status: VerdictStatus,
    pub witness: Option<Witness>,
    pub growth: Vec<LevelGrowth>,
    /// W for the top verified level, with its α-connectivity.
    pub alpha_neighborhood: Option<AlphaNeighborhood>,
}

fn strictly_growing_run(values: &[f64]) -> usize {
    let mut best = usize::from(!values.is_empty());
    let mut run = best;
    for w in values.windows(2) {
        run = if w[1] > w[0] { run + 1 } else { 1 };
        best = best.max(run);
    }
    best
}

/// Windows of strictly increasing hole-union reach needed to call divergence.
pub const DIVERGENCE_RUN: usize = 3;

pub fn check_arakelian(
    f: &CellSet,
    region: &RegionModel,
    exhaustion: &Exhaustion,
    schedule: &[WindowInput],
) -> ArakelianVerdict {
    check_arakelian_with(f, region, exhaustion, &[], schedule)
}

/// [`check_arakelian`] with additional compacts probed after the exhaustion levels.
pub fn check_arakelian_with(
    f: &CellSet,
    region: &RegionModel,
    exhaustion: &Exhaustion,
    extra: &[CompactProbe],
    schedule: &[WindowInput],
) -> ArakelianVerdict {
    let base = [WindowInput { f: f.clone(), region: region.clone() }];
    let windows: &[WindowInput] = if schedule.is_empty() { &base } else { schedule };
    let inconclusive = |reason: String, growth: Vec<LevelGrowth>| ArakelianVerdict {
        status: VerdictStatus::Inconclusive(reason),
        witness: None,
        growth,
        alpha_neighborhood: None,
    };

    // (Ω ∪ {α}) ∖ F must be connected before any compact is considered.
    let mut ambiguous_windows = Vec::new();
    for win in windows {
        let hs = holes(&win.f, &win.region);
        if let Some(&label) = hs.holes.first() {
            let comp = &hs.labeling.components[label as usize];
            let c = win.region.grid.center(comp.first);
            return ArakelianVerdict {
                status: VerdictStatus::Refuted,
                witness: Some(Witness::Hole {
                    window: win.region.grid,
                    representative: comp.first,
                    center: [c.x, c.y],
                    cells: hs.labeling.cells(label).iter().collect(),
                }),
                growth: Vec::new(),
                alpha_neighborhood: None,
            };
        }
        if !hs.ambiguous.is_empty() {
            ambiguous_windows.push(win.region.grid.ymax);
        }
    }
    if !ambiguous_windows.is_empty() {
        return inconclusive(
            format!(
                "complement components touch undeclared window edges (windows with ymax {:?}); declare `unbounded` sides",
                ambiguous_windows
            ),
            Vec::new(),
        );
    }
    if exhaustion.is_empty() {
        return inconclusive("exhaustion has no non-empty level".into(), Vec::new());
    }

    let probes: Vec<CompactProbe> = exhaustion
        .levels
        .iter()
        .map(|l| CompactProbe { label: format!("K{}", l.index), cells: l.cells.clone() })
        .chain(extra.iter().cloned())
        .collect();

    let growth: Vec<LevelGrowth> = probes.iter().map(|p| probe_growth(p, windows)).collect();

    let all_within = growth.iter().all(|g| g.within_bound && !g.ambiguous);
    if all_within {
        let top = exhaustion.top().expect("non-empty exhaustion");
        let an = alpha_neighborhood(f, &top.cells, region);
        if !an.is_connected() {
            return inconclusive(
                format!("alpha neighborhood of level K{} is {:?}", top.index, an.connectivity),
                growth,
            );
        }
        return ArakelianVerdict {
            status: VerdictStatus::VerifiedUpTo(top.index),
            witness: None,
            growth,
            alpha_neighborhood: Some(an),
        };
    }
    if let Some(g) = growth.iter().find(|g| g.divergent) {
        return ArakelianVerdict {
            status: VerdictStatus::EvidenceDivergent,
            witness: Some(Witness::Level { label: g.label.clone(), growth: g.windows.clone() }),
            growth,
            alpha_neighborhood: None,
        };
    }
    let reason = if growth.iter().any(|g| g.ambiguous) {
        "hole union of F ∪ K touches undeclared window edges".to_string()
    } else {
        "hole union grows across windows without a sustained run".to_string()
    };
    inconclusive(reason, growth)
}

fn probe_growth(probe: &CompactProbe, windows: &[WindowInput]) -> LevelGrowth {
    let mut out = Vec::with_capacity(windows.len());
    let mut ambiguous = false;
    for win in windows {
        let g = &win.region.grid;
        let mut k = probe.cells.transfer(g);
        k.intersect_with(&win.region.omega);
        let hs = hole_union(&win.f, &k, &win.region);
        ambiguous |= !hs.ambiguous.is_empty();
        let representatives = hs
            .representatives()
            .into_iter()
            .map(|idx| {
                let c = g.center(idx);
                [c.x, c.y]
            })
            .collect();
        out.push(WindowExtent { ymax: g.ymax, extent: hs.extent, representatives });
    }
    let first = &out[0].extent;
    let tol = windows[0].region.grid.delta;
    let within_bound = out.iter().all(|w| {
        let e = &w.extent;
        let reach_ok = e.max_abs_center <= first.max_abs_center + tol;
        let margin_ok = match (e.min_dist_to_complement, first.min_dist_to_complement) {
            (Some(d), Some(d0)) => d >= d0 - tol,
            (Some(_), None) => first.is_empty(),
            (None, _) => true,
        };
        reach_ok && margin_ok
    });
    let reach: Vec<f64> = out.iter().map(|w| w.extent.max_abs_center).collect();
    let divergent = !within_bound && strictly_growing_run(&reach) >= DIVERGENCE_RUN;
    LevelGrowth { label: probe.label.clone(), windows: out, within_bound, divergent, ambiguous }
}
