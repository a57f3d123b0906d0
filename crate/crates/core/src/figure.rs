//! Eigenvalue-plane pictures of planar sets as SVG.
//!
//! The level is sampled on a square lattice over `[−L, L]²` in the
//! `(λ₁, λ₂)` plane and each cell is clipped to `{level ≥ 0}` by marching
//! squares with linear interpolation along cell edges. Cell polygons form
//! the filled region; the interpolated crossings form the boundary stroke.
//! Sets without sampled interior (segments, lines) are drawn thickened by
//! one cell width.

use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, CatalogEntry, Params};
use crate::cone::{Layout, Set};
use crate::error::FigureError;
use crate::ge::canonical_pair;

/// Which set of a catalog entry to draw.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    /// The entry's defining closed set.
    Set,
    /// `H = E ∩ (−G~)` of the entry's pair.
    #[default]
    H,
    /// `H* = G ∩ (−E~)`.
    HStar,
    E,
    G,
    EMin,
    GMax,
    GTildeMax,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Style {
    pub fill: String,
    pub stroke: String,
    /// Side of the square image in pixels.
    pub size: u32,
}

impl Default for Style {
    fn default() -> Style {
        Style {
            fill: "#9ecae1".into(),
            stroke: "#08519c".into(),
            size: 480,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureSpec {
    pub entry: String,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub which: Which,
    /// Half-width `L` of the window.
    pub window: f64,
    /// Cells per side.
    pub resolution: usize,
    #[serde(default)]
    pub style: Style,
}

impl FigureSpec {
    pub fn new(entry: &str, params: Params, which: Which) -> FigureSpec {
        FigureSpec {
            entry: entry.into(),
            params,
            which,
            window: 3.0,
            resolution: 160,
            style: Style::default(),
        }
    }
}

/// The set a spec refers to, with a caption.
pub fn resolve(spec: &FigureSpec) -> Result<(Set, String), FigureError> {
    let mut params = spec.params.clone();
    params.n.get_or_insert(2);
    let entry = catalog::lookup(&spec.entry, &params)?;
    let set = select(&entry, spec.which);
    Ok((set, format!("{} {:?}", entry.name, spec.which)))
}

pub fn select(entry: &CatalogEntry, which: Which) -> Set {
    let generic = || canonical_pair(&entry.h);
    match which {
        Which::Set => entry.h.clone(),
        Which::H => entry.ge.h(),
        Which::HStar => entry.ge.h_star(),
        Which::E => entry.ge.e().clone(),
        Which::G => entry.ge.g().clone(),
        Which::EMin => entry.closed_forms.as_ref().map_or_else(|| generic().e_min, |c| c.e_min.clone()),
        Which::GMax => entry.closed_forms.as_ref().map_or_else(|| generic().g_max, |c| c.g_max.clone()),
        Which::GTildeMax => entry
            .closed_forms
            .as_ref()
            .map_or_else(|| generic().g_tilde_max, |c| c.g_tilde_max.clone()),
    }
}

type Point = (f64, f64);

/// A rendered region: one clipped polygon per lattice cell.
#[derive(Clone, Debug)]
pub struct Figure {
    pub svg: String,
    pub window: f64,
    pub resolution: usize,
    /// Half-width added to the level for sets without sampled interior.
    pub thickened: Option<f64>,
    cells: Vec<Vec<Point>>,
}

/// Clamp used for interpolation when the level is infinite.
const LEVEL_CAP: f64 = 1e6;

fn fmt_coord(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

/// Renders a planar full-spectrum set.
pub fn render(set: &Set, window: f64, resolution: usize, style: &Style, caption: &str) -> Result<Figure, FigureError> {
    if set.n() != 2 || set.layout() != Layout::Full {
        return Err(FigureError::NotRenderable(format!(
            "only full-spectrum sets in dimension 2 have an eigenvalue-plane picture; got n = {}, layout {:?}",
            set.n(),
            set.layout()
        )));
    }
    if !(window > 0.0 && window.is_finite()) || resolution < 2 {
        return Err(FigureError::NotRenderable(format!(
            "window {window} and resolution {resolution} do not describe a lattice"
        )));
    }
    let m = resolution;
    let cell = 2.0 * window / m as f64;
    let coord = |k: usize| -window + k as f64 * cell;
    let mut levels = vec![0.0; (m + 1) * (m + 1)];
    for j in 0..=m {
        for i in 0..=m {
            levels[j * (m + 1) + i] = set.level_at(&[coord(i), coord(j)]).clamp(-LEVEL_CAP, LEVEL_CAP);
        }
    }
    let tol = crate::tol::Tolerances::default().member;
    let thickened = (levels.iter().all(|&v| v <= tol)).then_some(cell);
    if let Some(w) = thickened {
        for v in &mut levels {
            *v += w;
        }
    }

    let mut cells: Vec<Vec<Point>> = Vec::with_capacity(m * m);
    let mut full_cells = Vec::with_capacity(m * m);
    let mut strokes: Vec<(Point, Point)> = Vec::new();
    for j in 0..m {
        for i in 0..m {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let val = corners.map(|(a, b)| levels[b * (m + 1) + a]);
            let pts = corners.map(|(a, b)| (coord(a), coord(b)));
            let mut poly: Vec<(Point, bool)> = Vec::new();
            for k in 0..4 {
                let (v0, v1) = (val[k], val[(k + 1) % 4]);
                let (p0, p1) = (pts[k], pts[(k + 1) % 4]);
                if v0 >= 0.0 {
                    poly.push((p0, false));
                }
                if (v0 >= 0.0) != (v1 >= 0.0) {
                    let s = v0 / (v0 - v1);
                    poly.push(((p0.0 + s * (p1.0 - p0.0), p0.1 + s * (p1.1 - p0.1)), true));
                }
            }
            let n = poly.len();
            for k in 0..n {
                let (a, b) = (poly[k], poly[(k + 1) % n]);
                if a.1 && b.1 && n > 2 {
                    strokes.push((a.0, b.0));
                }
            }
            full_cells.push(val.iter().all(|&v| v >= 0.0));
            cells.push(poly.into_iter().map(|(p, _)| p).collect());
        }
    }

    let size = style.size as f64;
    let scale = size / (2.0 * window);
    let px = |p: Point| (fmt_coord((p.0 + window) * scale), fmt_coord((window - p.1) * scale));
    let mut fill = String::new();
    let mut emit = |poly: &[Point]| {
        for (k, &p) in poly.iter().enumerate() {
            let (x, y) = px(p);
            let _ = write!(fill, "{}{x} {y}", if k == 0 { "M" } else { "L" });
        }
        fill.push('Z');
    };
    // Runs of fully covered cells in a row become one rectangle.
    for j in 0..m {
        let mut run: Option<usize> = None;
        for i in 0..=m {
            let full = i < m && full_cells[j * m + i];
            match (full, run) {
                (true, None) => run = Some(i),
                (false, Some(start)) => {
                    let (a, b) = (coord(start), coord(i));
                    let (y0, y1) = (coord(j), coord(j + 1));
                    emit(&[(a, y0), (b, y0), (b, y1), (a, y1)]);
                    run = None;
                }
                _ => {}
            }
            if i < m && !full && cells[j * m + i].len() >= 3 {
                emit(&cells[j * m + i]);
            }
        }
    }
    let mut stroke = String::new();
    for (a, b) in &strokes {
        let (ax, ay) = px(*a);
        let (bx, by) = px(*b);
        let _ = write!(stroke, "M{ax} {ay}L{bx} {by}");
    }
    let (ox, oy) = px((0.0, 0.0));
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = style.size
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(caption));
    let _ = writeln!(svg, r#"<rect width="{s}" height="{s}" fill="white"/>"#, s = style.size);
    let _ = writeln!(svg, r#"<path d="{fill}" fill="{}" stroke="none"/>"#, escape(&style.fill));
    let _ = writeln!(
        svg,
        r##"<path d="M0 {oy}L{s} {oy}M{ox} 0L{ox} {s}" stroke="#888" stroke-width="1"/>"##,
        s = style.size
    );
    let _ = writeln!(
        svg,
        r#"<path d="{stroke}" fill="none" stroke="{}" stroke-width="2" stroke-linecap="round"/>"#,
        escape(&style.stroke)
    );
    let _ = writeln!(
        svg,
        r#"<text x="8" y="20" font-family="monospace" font-size="14">{}</text>"#,
        escape(caption)
    );
    let _ = writeln!(
        svg,
        r#"<text x="8" y="{}" font-family="monospace" font-size="12">λ1, λ2 ∈ [{}, {}]</text>"#,
        style.size - 8,
        -window,
        window
    );
    svg.push_str("</svg>\n");
    Ok(Figure {
        svg,
        window,
        resolution: m,
        thickened,
        cells,
    })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn inside_polygon(poly: &[Point], p: Point) -> bool {
    let mut inside = false;
    let n = poly.len();
    for k in 0..n {
        let (a, b) = (poly[k], poly[(k + n - 1) % n]);
        if (a.1 > p.1) != (b.1 > p.1) && p.0 < (b.0 - a.0) * (p.1 - a.1) / (b.1 - a.1) + a.0 {
            inside = !inside;
        }
    }
    inside
}

impl Figure {
    /// Whether `(λ₁, λ₂)` lies in the drawn region.
    pub fn covers(&self, l1: f64, l2: f64) -> bool {
        let m = self.resolution;
        let cell = 2.0 * self.window / m as f64;
        let i = ((l1 + self.window) / cell).floor();
        let j = ((l2 + self.window) / cell).floor();
        if i < 0.0 || j < 0.0 || i >= m as f64 || j >= m as f64 {
            return false;
        }
        let poly = &self.cells[j as usize * m + i as usize];
        poly.len() >= 3 && inside_polygon(poly, (l1, l2))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub samples: usize,
    /// Points within the boundary band, not scored.
    pub excluded: usize,
    pub matched: usize,
    pub fraction: f64,
}

/// Compares drawn membership with the set's own membership at random
/// window points, skipping points whose level is within `band` of zero.
pub fn membership_match(fig: &Figure, set: &Set, samples: usize, band: f64, seed: u64) -> MatchReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut excluded, mut matched) = (0, 0);
    let shift = fig.thickened.unwrap_or(0.0);
    for _ in 0..samples {
        let l1 = rng.random_range(-fig.window..fig.window);
        let l2 = rng.random_range(-fig.window..fig.window);
        let level = set.level_at(&[l1, l2]) + shift;
        if level.abs() <= band {
            excluded += 1;
            continue;
        }
        if (level > 0.0) == fig.covers(l1, l2) {
            matched += 1;
        }
    }
    let scored = samples - excluded;
    MatchReport {
        samples,
        excluded,
        matched,
        fraction: if scored == 0 { 1.0 } else { matched as f64 / scored as f64 },
    }
}

/// Boundary band used by the match check: two cell diagonals.
pub fn default_band(fig: &Figure) -> f64 {
    2.0 * std::f64::consts::SQRT_2 * 2.0 * fig.window / fig.resolution as f64
}
