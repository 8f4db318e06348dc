//! File formats and exporters: a JSON realization container that round
//! trips losslessly, SVG rendering of planar triangulations and sweep
//! heatmaps, and OBJ output for inscribed polyhedra.
//!
//! Every writer here is a pure function of its input, and floats are
//! printed in shortest round-trip decimal, so output bytes are identical
//! across runs and platforms.

use serde::{Deserialize, Serialize};

use crate::complex::TriComplex;
use crate::disconnection::{SweepReport, TorusTriangulation};
use crate::error::{Error, Result};
use crate::geom::*;
use crate::layout::PlanarTriangulation;
use crate::sphere::SphericalTriangulation;

use std::fmt::Write as _;
use std::path::Path;

/// A realization of any of the three supported kinds.
#[derive(Debug, Clone)]
pub enum RealizedTriangulation {
    Planar(PlanarTriangulation),
    Spherical(SphericalTriangulation),
    Torus(TorusTriangulation),
}

impl RealizedTriangulation {
    pub fn kind(&self) -> &'static str {
        match self {
            RealizedTriangulation::Planar(_) => "planar",
            RealizedTriangulation::Spherical(_) => "spherical",
            RealizedTriangulation::Torus(_) => "torus",
        }
    }

    pub fn complex(&self) -> &TriComplex {
        match self {
            RealizedTriangulation::Planar(t) => &t.complex,
            RealizedTriangulation::Spherical(t) => &t.complex,
            RealizedTriangulation::Torus(t) => &t.complex,
        }
    }
}

/// The on-disk shape. The complex carries its own lift data when it is a
/// torus quotient, so only the lattice travels separately.
#[derive(Serialize, Deserialize)]
struct FileRepr {
    complex: TriComplex,
    kind: String,
    positions: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lattice: Option<[[f64; 2]; 2]>,
}

/// Serializes a realization to pretty JSON with a trailing newline.
pub fn to_json(r: &RealizedTriangulation) -> Result<String> {
    let repr = match r {
        RealizedTriangulation::Planar(t) => FileRepr {
            complex: t.complex.clone(),
            kind: "planar".into(),
            positions: t.positions.iter().map(|p| p.to_vec()).collect(),
            lattice: None,
        },
        RealizedTriangulation::Spherical(t) => FileRepr {
            complex: t.complex.clone(),
            kind: "spherical".into(),
            positions: t.positions.iter().map(|p| p.to_vec()).collect(),
            lattice: None,
        },
        RealizedTriangulation::Torus(t) => FileRepr {
            complex: t.complex.clone(),
            kind: "torus".into(),
            positions: t.positions.iter().map(|p| p.to_vec()).collect(),
            lattice: Some(t.lattice),
        },
    };
    let mut s = serde_json::to_string_pretty(&repr)?;
    s.push('\n');
    Ok(s)
}

fn fixed_width<const N: usize>(positions: Vec<Vec<f64>>) -> Result<Vec<[f64; N]>> {
    positions
        .into_iter()
        .map(|p| {
            <[f64; N]>::try_from(p.as_slice())
                .map_err(|_| Error::InvalidInput(format!("expected {N} coordinates per vertex")))
        })
        .collect()
}

/// Parses and validates a realization; every constructor invariant of the
/// underlying type is re-checked.
pub fn from_json(s: &str) -> Result<RealizedTriangulation> {
    let repr: FileRepr = serde_json::from_str(s)?;
    match repr.kind.as_str() {
        "planar" => Ok(RealizedTriangulation::Planar(PlanarTriangulation::new(
            repr.complex,
            fixed_width::<2>(repr.positions)?,
        )?)),
        "spherical" => Ok(RealizedTriangulation::Spherical(
            SphericalTriangulation::new(repr.complex, fixed_width::<3>(repr.positions)?)?,
        )),
        "torus" => {
            let lattice = repr
                .lattice
                .ok_or_else(|| Error::InvalidInput("torus file needs a lattice".into()))?;
            Ok(RealizedTriangulation::Torus(TorusTriangulation::new(
                lattice,
                repr.complex,
                fixed_width::<2>(repr.positions)?,
            )?))
        }
        k => Err(Error::InvalidInput(format!("unknown kind {k:?}"))),
    }
}

pub fn save_realization(path: &Path, r: &RealizedTriangulation) -> Result<()> {
    Ok(std::fs::write(path, to_json(r)?)?)
}

pub fn load_realization(path: &Path) -> Result<RealizedTriangulation> {
    from_json(&std::fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// SVG.

#[derive(Debug, Clone)]
pub struct SvgOptions {
    /// Canvas width in pixels; height follows the aspect ratio.
    pub width: f64,
    /// Overlay each face's circumcircle.
    pub circumcircles: bool,
    /// Color interior edges by Delaunay defect instead of plain black.
    pub color_by_defect: bool,
}

impl Default for SvgOptions {
    fn default() -> SvgOptions {
        SvgOptions {
            width: 640.0,
            circumcircles: false,
            color_by_defect: false,
        }
    }
}

/// Shortest round-trip decimal, the only float format used in exports.
fn fmt(x: f64) -> String {
    format!("{x}")
}

/// Circumcenter and radius of a nondegenerate triangle.
fn circumcircle(a: Vec2, b: Vec2, c: Vec2) -> (Vec2, f64) {
    let d = 2.0 * cross2(sub2(b, a), sub2(c, a));
    let na = dot2(a, a);
    let nb = dot2(b, b);
    let nc = dot2(c, c);
    let u = [
        (na * (b[1] - c[1]) + nb * (c[1] - a[1]) + nc * (a[1] - b[1])) / d,
        (na * (c[0] - b[0]) + nb * (a[0] - c[0]) + nc * (b[0] - a[0])) / d,
    ];
    (u, dist2(u, a))
}

/// Linear ramp from white through the full color, on byte channels.
fn ramp(t: f64, full: [u8; 3]) -> String {
    let t = t.clamp(0.0, 1.0);
    let ch = |c: u8| (255.0 + (c as f64 - 255.0) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", ch(full[0]), ch(full[1]), ch(full[2]))
}

/// Diverging defect color: violations ramp to red, slack to blue.
fn defect_color(d: f64, scale: f64) -> String {
    let s = scale.max(1e-12);
    if d < 0.0 {
        ramp(-d / s, [0xc0, 0x20, 0x20])
    } else {
        ramp(d / s, [0x20, 0x50, 0xc0])
    }
}

/// Renders the triangulation: light face fills, edges (optionally colored
/// by defect), optional circumcircle overlay, vertex dots. Deterministic
/// byte output for a fixed input.
pub fn export_svg(tri: &PlanarTriangulation, opt: &SvgOptions) -> String {
    let t = &tri.complex;
    let pos = &tri.positions;

    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut grow = |p: Vec2, r: f64| {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k] - r);
            hi[k] = hi[k].max(p[k] + r);
        }
    };
    for &p in pos {
        grow(p, 0.0);
    }
    let mut circles = Vec::new();
    if opt.circumcircles {
        for f in 0..t.face_count() {
            let [a, b, c] = t.face(f);
            let (center, r) = circumcircle(pos[a], pos[b], pos[c]);
            grow(center, r);
            circles.push((center, r));
        }
    }

    let pad = 0.04 * opt.width;
    let span = [(hi[0] - lo[0]).max(1e-30), (hi[1] - lo[1]).max(1e-30)];
    let scale = (opt.width - 2.0 * pad) / span[0];
    let height = span[1] * scale + 2.0 * pad;
    let sx = |x: f64| (x - lo[0]) * scale + pad;
    let sy = |y: f64| height - ((y - lo[1]) * scale + pad);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\">",
        fmt(opt.width),
        fmt(height)
    );

    for f in 0..t.face_count() {
        let pts: Vec<String> = t
            .face(f)
            .iter()
            .map(|&v| format!("{},{}", fmt(sx(pos[v][0])), fmt(sy(pos[v][1]))))
            .collect();
        let _ = writeln!(
            out,
            "  <polygon points=\"{}\" fill=\"#f2f2ee\" stroke=\"none\"/>",
            pts.join(" ")
        );
    }

    let defect_scale = if opt.color_by_defect {
        (0..t.edge_count())
            .filter_map(|e| tri.delaunay_defect(e).ok())
            .map(f64::abs)
            .fold(0.0, f64::max)
    } else {
        0.0
    };
    for (e, rec) in t.edges().iter().enumerate() {
        let (u, v) = rec.ends;
        let color = if opt.color_by_defect {
            match tri.delaunay_defect(e) {
                Ok(d) => defect_color(d, defect_scale),
                Err(_) => "#000000".into(),
            }
        } else {
            "#000000".into()
        };
        let _ = writeln!(
            out,
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            fmt(sx(pos[u][0])),
            fmt(sy(pos[u][1])),
            fmt(sx(pos[v][0])),
            fmt(sy(pos[v][1])),
            color
        );
    }

    for (center, r) in circles {
        let _ = writeln!(
            out,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#888888\" stroke-width=\"0.6\" stroke-dasharray=\"4 3\"/>",
            fmt(sx(center[0])),
            fmt(sy(center[1])),
            fmt(r * scale)
        );
    }

    for &p in pos {
        let _ = writeln!(
            out,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"#222222\"/>",
            fmt(sx(p[0])),
            fmt(sy(p[1]))
        );
    }

    out.push_str("</svg>\n");
    out
}

/// Heatmap of a sweep's minimum-defect grid: one cell per grid point,
/// degenerate cells dark, violations red, strict slack blue; the bisector
/// is marked with a vertical line and each component witness with a ring.
pub fn export_heatmap_svg(rep: &SweepReport) -> String {
    let nx = rep.xs.len();
    let ny = rep.ys.len();
    let cell = 640.0 / nx.max(1) as f64;
    let width = 640.0;
    let height = cell * ny as f64;

    let mut scale = 0.0_f64;
    for row in &rep.defect_grid {
        for d in row.iter().flatten() {
            scale = scale.max(d.abs());
        }
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\">",
        fmt(width),
        fmt(height)
    );
    let _ = writeln!(
        out,
        "  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#333333\"/>",
        fmt(width),
        fmt(height)
    );
    for (i, row) in rep.defect_grid.iter().enumerate() {
        for (j, d) in row.iter().enumerate() {
            let Some(d) = d else { continue };
            let _ = writeln!(
                out,
                "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                fmt(i as f64 * cell),
                fmt(height - (j + 1) as f64 * cell),
                fmt(cell),
                fmt(cell),
                defect_color(*d, scale)
            );
        }
    }

    // Value-to-pixel map through the cell centers of the first and last
    // columns, used only for overlays.
    let x0 = rep.xs[0];
    let x1 = rep.xs[nx - 1];
    let y0 = rep.ys[0];
    let y1 = rep.ys[ny - 1];
    let vx = |v: f64| (v - x0) / (x1 - x0) * (width - cell) + 0.5 * cell;
    let vy = |v: f64| height - ((v - y0) / (y1 - y0) * (height - cell) + 0.5 * cell);

    let mid = 0.5 * (x0 + x1);
    let _ = writeln!(
        out,
        "  <line x1=\"{0}\" y1=\"0\" x2=\"{0}\" y2=\"{1}\" stroke=\"#000000\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>",
        fmt(vx(mid)),
        fmt(height)
    );
    for w in &rep.witnesses {
        let _ = writeln!(
            out,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#ffffff\" stroke-width=\"2\"/>",
            fmt(vx(w.coords[0])),
            fmt(vy(w.coords[1])),
            fmt(1.5 * cell.max(4.0))
        );
    }
    out.push_str("</svg>\n");
    out
}

// ---------------------------------------------------------------------------
// OBJ.

/// Wavefront OBJ for an inscribed polyhedron: vertices at 17 significant
/// digits, 1-based faces. Deterministic bytes.
pub fn export_obj(tri: &SphericalTriangulation) -> String {
    let mut out = String::new();
    for p in &tri.positions {
        let _ = writeln!(out, "v {:.16e} {:.16e} {:.16e}", p[0], p[1], p[2]);
    }
    for f in tri.complex.faces() {
        let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    out
}
