//! Text and PPM spacetime diagrams of classical records. Time runs down,
//! one line (or pixel band) per half-layer row.

use crate::dual::{chirality_at, Chirality};
use crate::error::Result;
use crate::qca::edge_values;
use crate::record::{SpacetimeRecord, Vertex};
use crate::stokes::{LatticePath, ProbeLattice};
use std::collections::BTreeSet;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Text,
    Ppm,
}

/// What to draw on top of the site values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overlay {
    /// Walls as `\` (right movers) and `/` (left movers) between sites.
    pub signals: bool,
    /// Probe sites: `o` reads 0, `O` reads 1.
    pub probes: Option<ProbeLattice>,
    /// Path vertices, drawn as `*`.
    pub path: Option<LatticePath>,
}

impl Overlay {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn signals() -> Self {
        Self {
            signals: true,
            ..Self::default()
        }
    }
}

/// Row and site at which a vertex is drawn.
fn cell_of(v: Vertex) -> (usize, isize) {
    (v.slice.saturating_sub(1), v.site)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    Plain,
    Probe,
    Path,
}

type Cells = BTreeSet<(usize, isize)>;

fn marks(record: &SpacetimeRecord, overlay: &Overlay) -> (Cells, Cells) {
    let probes = overlay
        .probes
        .map(|p| p.probes(record).into_iter().map(cell_of).collect())
        .unwrap_or_default();
    let path = overlay
        .path
        .as_ref()
        .map(|p| p.vertices().iter().copied().map(cell_of).collect())
        .unwrap_or_default();
    (probes, path)
}

fn mark_at(probes: &Cells, path: &Cells, row: usize, site: isize) -> Mark {
    if path.contains(&(row, site)) {
        Mark::Path
    } else if probes.contains(&(row, site)) {
        Mark::Probe
    } else {
        Mark::Plain
    }
}

/// Wall glyph for edge `p` of row `r`, or a blank.
fn separator(record: &SpacetimeRecord, row: usize, edge: isize) -> char {
    let cfg = record.rows()[row];
    let (l, r) = edge_values(cfg.n(), cfg.bits(), record.bc(), edge);
    if l == r {
        ' '
    } else {
        match chirality_at(edge, row) {
            Chirality::Right => '\\',
            Chirality::Left => '/',
        }
    }
}

pub fn render_text(record: &SpacetimeRecord, overlay: &Overlay) -> String {
    let (probes, path) = marks(record, overlay);
    let n = record.n() as isize;
    let fixed = record.bc().is_fixed();
    let mut out = String::new();
    for (r, cfg) in record.rows().iter().enumerate() {
        if overlay.signals && fixed {
            out.push(separator(record, r, -1));
        }
        for i in 0..n {
            let val = cfg.get(i as usize);
            out.push(match mark_at(&probes, &path, r, i) {
                Mark::Path => '*',
                Mark::Probe if val == 1 => 'O',
                Mark::Probe => 'o',
                Mark::Plain => char::from(b'0' + val),
            });
            if overlay.signals {
                out.push(separator(record, r, i));
            }
        }
        // keep lines free of trailing blanks
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    }
    out
}

/// Pixel edge of one site cell.
const CELL: usize = 6;

const WHITE: [u8; 3] = [255, 255, 255];
const GREY: [u8; 3] = [160, 160, 160];
const BLACK: [u8; 3] = [0, 0, 0];
const RED: [u8; 3] = [200, 30, 30];
const BLUE: [u8; 3] = [30, 60, 200];

/// Binary PPM (P6), `CELL x CELL` pixels per site and row.
pub fn render_ppm(record: &SpacetimeRecord, overlay: &Overlay) -> Vec<u8> {
    let (probes, path) = marks(record, overlay);
    let n = record.n();
    let rows = record.rows().len();
    let (w, h) = (n * CELL, rows * CELL);
    let mut px = vec![WHITE; w * h];
    for (r, cfg) in record.rows().iter().enumerate() {
        for i in 0..n {
            let base = if cfg.get(i) == 1 { GREY } else { WHITE };
            let mark = mark_at(&probes, &path, r, i as isize);
            for y in 0..CELL {
                for x in 0..CELL {
                    let centre = (1..CELL - 1).contains(&x) && (1..CELL - 1).contains(&y);
                    let colour = match mark {
                        Mark::Path if centre => BLUE,
                        Mark::Probe if centre => RED,
                        _ => base,
                    };
                    px[(r * CELL + y) * w + i * CELL + x] = colour;
                }
            }
            if overlay.signals && separator(record, r, i as isize) != ' ' {
                // wall on the right border of the cell
                for y in 0..CELL {
                    px[(r * CELL + y) * w + i * CELL + CELL - 1] = BLACK;
                }
            }
        }
        if overlay.signals && record.bc().is_fixed() && separator(record, r, -1) != ' ' {
            for y in 0..CELL {
                px[(r * CELL + y) * w] = BLACK;
            }
        }
    }
    let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
    out.extend(px.iter().flatten());
    out
}

/// Writes the diagram to `path`.
pub fn render_diagram(
    record: &SpacetimeRecord,
    style: Style,
    overlay: &Overlay,
    path: &Path,
) -> Result<()> {
    let bytes = match style {
        Style::Text => render_text(record, overlay).into_bytes(),
        Style::Ppm => render_ppm(record, overlay),
    };
    std::fs::write(path, bytes)?;
    Ok(())
}
