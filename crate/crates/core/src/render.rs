//! Deterministic SVG and PPM pictures of scene artifacts.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::builder::Disk;
use crate::grid::{CellSet, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    F,
    U,
    V,
    Holes,
    Disks,
    Curves,
}

impl FromStr for Layer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "F" => Layer::F,
            "U" => Layer::U,
            "V" => Layer::V,
            "holes" => Layer::Holes,
            "disks" => Layer::Disks,
            "curves" => Layer::Curves,
            other => return Err(format!("unknown layer `{other}` (F, U, V, holes, disks, curves)")),
        })
    }
}

/// Everything a picture can show. Absent artifacts draw as empty layers.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub omega: CellSet,
    pub f: CellSet,
    pub u: Option<CellSet>,
    pub v: Option<CellSet>,
    pub holes: Option<CellSet>,
    pub disks: Vec<Disk>,
    pub curves: Vec<Vec<usize>>,
}

impl Artifacts {
    pub fn new(omega: CellSet, f: CellSet) -> Self {
        Artifacts { omega, f, u: None, v: None, holes: None, disks: Vec::new(), curves: Vec::new() }
    }

    fn grid(&self) -> &GridSpec {
        self.omega.grid()
    }

    /// Cells painted by a layer in the raster output.
    fn cells(&self, layer: Layer) -> CellSet {
        let g = self.grid();
        match layer {
            Layer::F => self.f.clone(),
            Layer::U => self.u.clone().unwrap_or_else(|| CellSet::empty(g)),
            Layer::V => self.v.clone().unwrap_or_else(|| CellSet::empty(g)),
            Layer::Holes => self.holes.clone().unwrap_or_else(|| CellSet::empty(g)),
            Layer::Disks => {
                let mut out = CellSet::empty(g);
                for d in &self.disks {
                    out.union_with(&crate::builder::disk_cells(g, &self.omega, d.center, d.radius));
                }
                out
            }
            Layer::Curves => CellSet::from_indices(g, self.curves.iter().flatten().copied()),
        }
    }
}

const OMEGA_FILL: [u8; 3] = [0xee, 0xee, 0xe4];
const OUTSIDE_FILL: [u8; 3] = [0xff, 0xff, 0xff];

fn rgb(layer: Layer) -> [u8; 3] {
    match layer {
        Layer::F => [0x22, 0x22, 0x22],
        Layer::U => [0x9e, 0xca, 0xe1],
        Layer::V => [0x31, 0xa3, 0x54],
        Layer::Holes => [0xc0, 0x39, 0x2b],
        Layer::Disks => [0x80, 0x5a, 0xd5],
        Layer::Curves => [0xe6, 0x7e, 0x22],
    }
}

fn hex(c: [u8; 3]) -> String {
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Row-major run-length rectangles, top row first.
fn runs(cells: &CellSet, out: &mut String) {
    let g = cells.grid();
    for j in (0..g.nrows).rev() {
        let y = g.nrows - 1 - j;
        let mut i = 0;
        while i < g.ncols {
            if !cells.contains(g.index(i, j)) {
                i += 1;
                continue;
            }
            let start = i;
            while i < g.ncols && cells.contains(g.index(i, j)) {
                i += 1;
            }
            let _ = writeln!(out, "<rect x=\"{start}\" y=\"{y}\" width=\"{}\" height=\"1\"/>", i - start);
        }
    }
}

fn center_xy(g: &GridSpec, idx: usize) -> (f64, f64) {
    let (i, j) = g.coords(idx);
    (i as f64 + 0.5, (g.nrows - 1 - j) as f64 + 0.5)
}

pub fn svg(art: &Artifacts, layers: &[Layer]) -> String {
    let g = art.grid();
    let scale = (1024 / g.ncols.max(g.nrows)).max(1);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" shape-rendering=\"crispEdges\">",
        g.ncols * scale,
        g.nrows * scale,
        g.ncols,
        g.nrows
    );
    let _ = writeln!(
        out,
        "<defs><pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"2\" height=\"2\" patternTransform=\"rotate(45)\">\
<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"2\" stroke=\"{}\" stroke-width=\"0.8\"/></pattern></defs>",
        hex(rgb(Layer::Holes))
    );
    let _ = writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"{}\"/>", g.ncols, g.nrows, hex(OUTSIDE_FILL));
    let _ = writeln!(out, "<g id=\"omega\" fill=\"{}\">", hex(OMEGA_FILL));
    runs(&art.omega, &mut out);
    out.push_str("</g>\n");
    for &layer in layers {
        let color = hex(rgb(layer));
        match layer {
            Layer::F | Layer::U | Layer::V => {
                let opacity = if layer == Layer::F { "1" } else { "0.5" };
                let _ = writeln!(out, "<g id=\"{layer:?}\" fill=\"{color}\" fill-opacity=\"{opacity}\">");
                runs(&art.cells(layer), &mut out);
            }
            Layer::Holes => {
                out.push_str("<g id=\"holes\" fill=\"url(#hatch)\">\n");
                runs(&art.cells(layer), &mut out);
            }
            Layer::Disks => {
                let _ = writeln!(out, "<g id=\"disks\" stroke=\"{color}\" stroke-width=\"0.25\" fill=\"none\">");
                for d in &art.disks {
                    let (x, y) = center_xy(g, d.center);
                    let r = d.radius / g.delta;
                    let _ = writeln!(out, "<circle cx=\"{x}\" cy=\"{y}\" r=\"{r:.4}\"/>");
                    let _ = writeln!(out, "<circle cx=\"{x}\" cy=\"{y}\" r=\"0.3\" fill=\"{color}\"/>");
                }
            }
            Layer::Curves => {
                let _ = writeln!(out, "<g id=\"curves\" stroke=\"{color}\" stroke-width=\"0.4\" fill=\"none\">");
                for c in &art.curves {
                    let pts: Vec<String> = c
                        .iter()
                        .map(|&idx| {
                            let (x, y) = center_xy(g, idx);
                            format!("{x},{y}")
                        })
                        .collect();
                    let _ = writeln!(out, "<polyline points=\"{}\"/>", pts.join(" "));
                }
            }
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

/// Binary PPM, one pixel per cell, top row first; later layers paint over earlier ones.
pub fn ppm(art: &Artifacts, layers: &[Layer]) -> Vec<u8> {
    let g = art.grid();
    let mut px: Vec<[u8; 3]> = (0..g.len()).map(|idx| if art.omega.contains(idx) { OMEGA_FILL } else { OUTSIDE_FILL }).collect();
    for &layer in layers {
        let c = rgb(layer);
        for idx in art.cells(layer).iter() {
            px[idx] = c;
        }
    }
    let mut out = format!("P6\n{} {}\n255\n", g.ncols, g.nrows).into_bytes();
    for j in (0..g.nrows).rev() {
        for i in 0..g.ncols {
            out.extend_from_slice(&px[g.index(i, j)]);
        }
    }
    out
}
