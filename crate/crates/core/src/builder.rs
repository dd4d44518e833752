//! Constructive neighborhoods: disk covers, escape curves, and the open set V
//! with F ⊆ V ⊆ U and (Ω ∪ {α}) ∖ V connected, plus the refutation witness and
//! the disjoint-union construction.

use std::collections::VecDeque;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::arakelian::{build_exhaustion, Exhaustion};
use crate::grid::{CellSet, DistanceField, GridSpec};
use crate::topology::{
    alpha_reach, compactified_complement_connected, holes, label_components, AlphaReach, ComplementConnectivity,
    ComponentLabeling, Connectivity, RegionModel,
};

/// Exhaustion depth used when the caller does not supply one.
pub const DEFAULT_LEVELS: usize = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BuildError {
    #[error("F is not contained in U")]
    FNotInU,
    #[error("cell {cell} of Ω∖U lies in an enclosed component of Ω∖F: F has a hole")]
    HypothesisViolated { cell: usize },
    #[error("no escape to α from cell {cell}: only undeclared window edges are reachable")]
    Inconclusive { cell: usize },
    #[error("certificate failed: {0}")]
    CertificateFailed(Certificate),
    #[error("F ∪ K has no holes; nothing to refute")]
    NoHoles,
    #[error("F1 and F2 overlap")]
    Overlap,
    #[error(
        "Ω is not simply connected: a disjoint union of Arakelian sets need not be Arakelian \
         (two concentric circles in a punctured disk)"
    )]
    NotSimplyConnected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: usize,
    pub radius: f64,
    /// Exhaustion annulus the center was picked from (0-based; `levels.len()` is
    /// the part of Ω outside the top compact).
    pub annulus: usize,
}

#[derive(Debug, Clone)]
pub struct DiskCover {
    pub disks: Vec<Disk>,
    pub covered: CellSet,
}

impl DiskCover {
    /// Number of disks picked from each annulus.
    pub fn per_annulus(&self, annuli: usize) -> Vec<usize> {
        let mut out = vec![0; annuli];
        for d in &self.disks {
            out[d.annulus] += 1;
        }
        out
    }
}

/// Cells of Ω whose center lies within `radius` of the center of `center`.
pub fn disk_cells(grid: &GridSpec, omega: &CellSet, center: usize, radius: f64) -> CellSet {
    let (ci, cj) = grid.coords(center);
    let c = grid.center(center);
    let reach = (radius / grid.delta).floor() as i64;
    let slack = 1e-9 * grid.delta;
    let mut out = CellSet::empty(grid);
    for dj in -reach..=reach {
        for di in -reach..=reach {
            let Some(idx) = grid.checked_index(ci as i64 + di, cj as i64 + dj) else { continue };
            if omega.contains(idx) && grid.center(idx).dist(c) <= radius + slack {
                out.insert(idx);
            }
        }
    }
    out
}

pub fn disk_cover(f: &CellSet, u: &CellSet, region: &RegionModel, exhaustion: &Exhaustion) -> Result<DiskCover, BuildError> {
    let grid = region.grid;
    if !f.is_subset(u) {
        return Err(BuildError::FNotInU);
    }
    let target = region.omega.difference(u);
    let dist_f = DistanceField::new(f);
    let dist_c = region.complement_distance();

    let mut annuli: Vec<CellSet> = Vec::with_capacity(exhaustion.levels.len() + 1);
    let mut inner = CellSet::empty(&grid);
    for level in &exhaustion.levels {
        annuli.push(level.cells.difference(&inner));
        inner = level.cells.clone();
    }
    annuli.push(region.omega.difference(&inner));

    let mut covered = CellSet::empty(&grid);
    let mut disks = Vec::new();
    for (annulus, cells) in annuli.iter().enumerate() {
        for idx in cells.intersection(&target).iter() {
            if covered.contains(idx) {
                continue;
            }
            let radius = (dist_f.get(idx) / 2.0).min(dist_c.get(idx)).min(1.0);
            debug_assert!(radius > 0.0);
            covered.union_with(&disk_cells(&grid, &region.omega, idx, radius));
            disks.push(Disk { center: idx, radius, annulus });
        }
    }
    debug!("disk cover: {} disks", disks.len());
    Ok(DiskCover { disks, covered })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    /// Exhaustion level index whose complement the stage ran through (0 for Ω∖F).
    pub level: usize,
    /// Label of the recorded component in that complement.
    pub component: u32,
    /// Half-open range into the curve's cell list.
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeCurve {
    /// Index into the cover's disk list.
    pub disk: usize,
    pub cells: Vec<usize>,
    pub stages: Vec<Stage>,
}

#[derive(Debug, Clone, Default)]
pub struct EscapePlan {
    pub curves: Vec<EscapeCurve>,
}

impl EscapePlan {
    pub fn cells(&self, grid: &GridSpec) -> CellSet {
        CellSet::from_indices(grid, self.curves.iter().flat_map(|c| c.cells.iter().copied()))
    }
}

struct Bfs {
    stamp: Vec<u32>,
    parent: Vec<u32>,
    generation: u32,
    queue: VecDeque<usize>,
}

impl Bfs {
    fn new(n: usize) -> Self {
        Bfs { stamp: vec![0; n], parent: vec![u32::MAX; n], generation: 0, queue: VecDeque::new() }
    }

    /// Shortest 4-connected path from `start` inside `allowed` to the first
    /// cell satisfying `goal`, neighbors visited E, N, W, S.
    fn path(
        &mut self,
        grid: &GridSpec,
        start: usize,
        allowed: impl Fn(usize) -> bool,
        goal: impl Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        self.generation += 1;
        let gen = self.generation;
        self.queue.clear();
        self.stamp[start] = gen;
        self.parent[start] = u32::MAX;
        self.queue.push_back(start);
        while let Some(cur) = self.queue.pop_front() {
            if goal(cur) {
                let mut path = vec![cur];
                let mut at = cur;
                while self.parent[at] != u32::MAX {
                    at = self.parent[at] as usize;
                    path.push(at);
                }
                path.reverse();
                return Some(path);
            }
            for n in grid.neighbors4(cur) {
                if self.stamp[n] != gen && allowed(n) {
                    self.stamp[n] = gen;
                    self.parent[n] = cur as u32;
                    self.queue.push_back(n);
                }
            }
        }
        None
    }
}

struct LevelComplement {
    labeling: ComponentLabeling,
    reach: Vec<AlphaReach>,
}

pub fn escape_curves(
    cover: &DiskCover,
    f: &CellSet,
    region: &RegionModel,
    exhaustion: &Exhaustion,
) -> Result<EscapePlan, BuildError> {
    if cover.disks.is_empty() {
        return Ok(EscapePlan::default());
    }
    let grid = region.grid;
    let free = region.omega.difference(f);
    // complements[0] is Ω∖F, complements[p + 1] is Ω∖(F ∪ K at position p)
    let mut complements = Vec::with_capacity(exhaustion.levels.len() + 1);
    let mut hole_unions = Vec::with_capacity(exhaustion.levels.len());
    for k in std::iter::once(None).chain(exhaustion.levels.iter().map(|l| Some(&l.cells))) {
        let domain = match k {
            Some(k) => free.difference(k),
            None => free.clone(),
        };
        let labeling = label_components(&domain, Connectivity::Four);
        let reach = alpha_reach(&labeling, region);
        if k.is_some() {
            let enclosed: Vec<u32> = (0..labeling.len() as u32).filter(|&l| reach[l as usize] == AlphaReach::Enclosed).collect();
            hole_unions.push(labeling.cells_of(&enclosed));
        }
        complements.push(LevelComplement { labeling, reach });
    }
    let nlev = exhaustion.levels.len();
    let level_index = |pos: usize| if pos == 0 { 0 } else { exhaustion.levels[pos - 1].index };
    let alpha = region.alpha_adjacent();

    let mut bfs = Bfs::new(grid.len());
    let mut curves = Vec::with_capacity(cover.disks.len());
    for (di, disk) in cover.disks.iter().enumerate() {
        let x = disk.center;
        let base = &complements[0];
        let l0 = base.labeling.label(x).expect("disk centers avoid F");
        match base.reach[l0 as usize] {
            AlphaReach::Enclosed => return Err(BuildError::HypothesisViolated { cell: x }),
            AlphaReach::WindowAmbiguous => return Err(BuildError::Inconclusive { cell: x }),
            AlphaReach::ReachesAlpha => {}
        }
        let first = exhaustion.first_level_capturing(x, &hole_unions);

        let mut cells = vec![x];
        let mut stages = Vec::new();
        let mut cur = x;
        for s in first..=nlev {
            let domain = &complements[s];
            let comp = domain.labeling.label(cur).expect("stage start lies in the staged complement");
            let within = |n: usize| domain.labeling.labels[n] == comp;
            let path = if s < nlev {
                let next = &complements[s + 1];
                bfs.path(&grid, cur, within, |n| {
                    next.labeling.label(n).is_some_and(|l| next.reach[l as usize] == AlphaReach::ReachesAlpha)
                })
            } else {
                bfs.path(&grid, cur, within, |n| alpha.contains(n))
            }
            .ok_or(BuildError::Inconclusive { cell: x })?;
            let start = cells.len() - 1;
            cells.extend_from_slice(&path[1..]);
            stages.push(Stage { level: level_index(s), component: comp, start, end: cells.len() });
            cur = *cells.last().unwrap();
        }
        curves.push(EscapeCurve { disk: di, cells, stages });
    }
    Ok(EscapePlan { curves })
}

/// The three-part contract of a neighborhood, recomputed from scratch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub f_subset_v: bool,
    pub v_subset_u: bool,
    pub complement: ComplementConnectivity,
    /// Riemann-sphere check on V, run when Ω is simply connected.
    pub sphere: Option<bool>,
    /// Smallest cell of a component of Ω∖V that misses α, if any.
    pub failing_component: Option<usize>,
}

impl Certificate {
    pub fn verify(f: &CellSet, u: &CellSet, v: &CellSet, region: &RegionModel) -> Self {
        let hs = holes(v, region);
        let complement = compactified_complement_connected(v, region);
        let failing_component = hs
            .holes
            .iter()
            .chain(&hs.ambiguous)
            .map(|&l| hs.labeling.components[l as usize].first)
            .min();
        let sphere = region
            .is_simply_connected()
            .then(|| crate::topology::sphere_complement_connected(v, region).unwrap_or(false));
        Certificate { f_subset_v: f.is_subset(v), v_subset_u: v.is_subset(u), complement, sphere, failing_component }
    }

    pub fn holds(&self) -> bool {
        self.f_subset_v && self.v_subset_u && self.complement.is_connected() && self.sphere != Some(false)
    }
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "F⊆V {}, V⊆U {}, complement {:?}",
            self.f_subset_v, self.v_subset_u, self.complement.status
        )?;
        if let Some(s) = self.sphere {
            write!(f, ", sphere {s}")?;
        }
        if let Some(c) = self.failing_component {
            write!(f, ", failing component at cell {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct NeighborhoodResult {
    pub v: CellSet,
    pub u: CellSet,
    pub cover: DiskCover,
    pub plan: EscapePlan,
    pub certificate: Certificate,
}

pub fn build_v(f: &CellSet, u: &CellSet, region: &RegionModel) -> Result<NeighborhoodResult, BuildError> {
    let exhaustion = build_exhaustion(region, DEFAULT_LEVELS).expect("positive level count");
    build_v_with(f, u, region, &exhaustion)
}

pub fn build_v_with(
    f: &CellSet,
    u: &CellSet,
    region: &RegionModel,
    exhaustion: &Exhaustion,
) -> Result<NeighborhoodResult, BuildError> {
    let u = u.intersection(&region.omega);
    let cover = disk_cover(f, &u, region, exhaustion)?;
    let plan = escape_curves(&cover, f, region, exhaustion)?;
    let mut v = u.difference(&cover.covered);
    v.difference_with(&plan.cells(&region.grid));
    let certificate = Certificate::verify(f, &u, &v, region);
    if !certificate.holds() {
        return Err(BuildError::CertificateFailed(certificate));
    }
    Ok(NeighborhoodResult { v, u, cover, plan, certificate })
}

#[derive(Debug, Clone)]
pub struct RefuteWitness {
    /// Smallest cell of each hole of F ∪ K.
    pub points: Vec<usize>,
    pub u: CellSet,
}

pub fn refute_witness(f: &CellSet, region: &RegionModel, k: &CellSet) -> Result<RefuteWitness, BuildError> {
    let hs = holes(&f.union(k), region);
    if hs.is_empty() {
        return Err(BuildError::NoHoles);
    }
    let points = hs.representatives();
    let mut u = region.omega.clone();
    for &p in &points {
        u.remove(p);
    }
    Ok(RefuteWitness { points, u })
}

/// Outcome of trying to build V inside a refuting U.
#[derive(Debug, Clone)]
pub struct RefutationCheck {
    /// Why build_v refused, or `None` if it produced a certified V.
    pub refused: Option<BuildError>,
    /// Certificate of the largest candidate, V = U.
    pub candidate: Certificate,
}

impl RefutationCheck {
    pub fn holds(&self) -> bool {
        self.refused.is_some() && !self.candidate.holds()
    }
}

pub fn check_refutation(f: &CellSet, u: &CellSet, region: &RegionModel) -> RefutationCheck {
    RefutationCheck {
        refused: build_v(f, u, region).err(),
        candidate: Certificate::verify(f, u, u, region),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnionCertificate {
    pub combined: Certificate,
    pub disjoint: bool,
    /// Riemann-sphere connectivity of the complement of each part.
    pub parts_sphere: [bool; 2],
}

impl UnionCertificate {
    pub fn holds(&self) -> bool {
        self.combined.holds() && self.disjoint && self.parts_sphere == [true, true]
    }
}

#[derive(Debug, Clone)]
pub struct UnionResult {
    pub v: CellSet,
    pub parts: [NeighborhoodResult; 2],
    pub certificate: UnionCertificate,
}

/// Split Ω between F1 and F2 by nearest distance (ties to F1), keeping a one-cell
/// gap on the F2 side so the two halves never touch, not even diagonally.
pub fn bisector_split(f1: &CellSet, f2: &CellSet, region: &RegionModel) -> (CellSet, CellSet) {
    let grid = region.grid;
    let d1 = DistanceField::new(f1);
    let d2 = DistanceField::new(f2);
    let g1 = CellSet::from_fn(&grid, |idx| region.omega.contains(idx) && d1.get(idx) <= d2.get(idx));
    let g2 = CellSet::from_fn(&grid, |idx| {
        region.omega.contains(idx) && !g1.contains(idx) && !grid.neighbors8(idx).any(|n| g1.contains(n))
    });
    (g1, g2)
}

pub fn disjoint_union_v(f1: &CellSet, f2: &CellSet, u: &CellSet, region: &RegionModel) -> Result<UnionResult, BuildError> {
    if !f1.is_disjoint(f2) {
        return Err(BuildError::Overlap);
    }
    if !region.is_simply_connected() {
        return Err(BuildError::NotSimplyConnected);
    }
    let f = f1.union(f2);
    if !f.is_subset(u) {
        return Err(BuildError::FNotInU);
    }
    let (g1, g2) = if f1.is_empty() {
        (CellSet::empty(&region.grid), region.omega.clone())
    } else if f2.is_empty() {
        (region.omega.clone(), CellSet::empty(&region.grid))
    } else {
        bisector_split(f1, f2, region)
    };
    if !f2.is_subset(&g2) {
        // F2 cells adjacent to F1 fall into the gap
        return Err(BuildError::Overlap);
    }
    let p1 = build_v(f1, &g1.intersection(u), region)?;
    let p2 = build_v(f2, &g2.intersection(u), region)?;
    let v = p1.v.union(&p2.v);
    let sphere = |part: &CellSet| crate::topology::sphere_complement_connected(part, region).unwrap_or(false);
    let certificate = UnionCertificate {
        combined: Certificate::verify(&f, &u.intersection(&region.omega), &v, region),
        disjoint: p1.v.is_disjoint(&p2.v),
        parts_sphere: [sphere(&p1.v), sphere(&p2.v)],
    };
    if !certificate.holds() {
        return Err(BuildError::CertificateFailed(certificate.combined));
    }
    Ok(UnionResult { v, parts: [p1, p2], certificate })
}
