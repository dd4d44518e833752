//! Two-pass connected-component labeling with a disjoint-set forest.

use serde::{Deserialize, Serialize};

use crate::grid::{CellSet, GridSpec};

/// Which neighbors of a cell count as adjacent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Connectivity {
    /// Cells sharing an edge.
    Four,
    /// Cells sharing an edge or a corner.
    Eight,
}

/// Label value of cells outside the labeled domain.
pub const UNLABELED: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub size: usize,
    /// `[imin, jmin, imax, jmax]` in cell coordinates.
    pub bbox: [usize; 4],
    /// Smallest member index; labels are ordered by it.
    pub first: usize,
}

/// Partition of a cell set into connected components.
///
/// Labels are `0..components.len()`, assigned in row-major order of each
/// component's first cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentLabeling {
    pub grid: GridSpec,
    pub connectivity: Connectivity,
    pub labels: Vec<u32>,
    pub components: Vec<Component>,
}

struct Forest {
    parent: Vec<u32>,
}

impl Forest {
    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the older label as root
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

pub fn label_components(domain: &CellSet, connectivity: Connectivity) -> ComponentLabeling {
    let grid = *domain.grid();
    let (w, h) = (grid.ncols, grid.nrows);
    let mut labels = vec![UNLABELED; grid.len()];
    let mut forest = Forest { parent: Vec::new() };

    // Already-visited neighbors in row-major scan order (rows grow upward).
    let back: &[(i64, i64)] = match connectivity {
        Connectivity::Four => &[(-1, 0), (0, -1)],
        Connectivity::Eight => &[(-1, 0), (-1, -1), (0, -1), (1, -1)],
    };

    for j in 0..h {
        for i in 0..w {
            let idx = j * w + i;
            if !domain.contains(idx) {
                continue;
            }
            let mut current = UNLABELED;
            for &(di, dj) in back {
                if let Some(n) = grid.checked_index(i as i64 + di, j as i64 + dj) {
                    let l = labels[n];
                    if l != UNLABELED {
                        if current == UNLABELED {
                            current = l;
                        } else {
                            forest.union(current, l);
                        }
                    }
                }
            }
            if current == UNLABELED {
                current = forest.make();
            }
            labels[idx] = current;
        }
    }

    let mut remap = vec![UNLABELED; forest.parent.len()];
    let mut components: Vec<Component> = Vec::new();
    for idx in 0..grid.len() {
        let l = labels[idx];
        if l == UNLABELED {
            continue;
        }
        let root = forest.find(l) as usize;
        if remap[root] == UNLABELED {
            remap[root] = components.len() as u32;
            let (i, j) = grid.coords(idx);
            components.push(Component { size: 0, bbox: [i, j, i, j], first: idx });
        }
        let nl = remap[root];
        labels[idx] = nl;
        let c = &mut components[nl as usize];
        let (i, j) = grid.coords(idx);
        c.size += 1;
        c.bbox = [c.bbox[0].min(i), c.bbox[1].min(j), c.bbox[2].max(i), c.bbox[3].max(j)];
    }

    ComponentLabeling { grid, connectivity, labels, components }
}

impl ComponentLabeling {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    #[inline]
    pub fn label(&self, idx: usize) -> Option<u32> {
        let l = self.labels[idx];
        (l != UNLABELED).then_some(l)
    }

    /// Cells carrying `label`.
    pub fn cells(&self, label: u32) -> CellSet {
        let mut s = CellSet::empty(&self.grid);
        let c = &self.components[label as usize];
        let [i0, j0, i1, j1] = c.bbox;
        for j in j0..=j1 {
            for i in i0..=i1 {
                let idx = self.grid.index(i, j);
                if self.labels[idx] == label {
                    s.insert(idx);
                }
            }
        }
        s
    }

    /// Union of the cells of several labels.
    pub fn cells_of(&self, labels: &[u32]) -> CellSet {
        let mut want = vec![false; self.components.len()];
        for &l in labels {
            want[l as usize] = true;
        }
        CellSet::from_fn(&self.grid, |idx| {
            let l = self.labels[idx];
            l != UNLABELED && want[l as usize]
        })
    }
}
