//! CSV, JSON and SVG writers.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use su11_core::minkowski::{mcross, mdot};
use su11_core::{Bounds, MVec3, Route, Trajectory};

use crate::error::CliError;

pub const CSV_HEADER: &str = "theta,x1,x2,x3,route";

/// Writes `bytes` to a sibling temp file and renames it over `path`, so
/// readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let file = path.file_name().ok_or_else(|| CliError::Io(format!("{} has no file name", path.display())))?;
    let tmp: PathBuf = dir.join(format!(".{}.{}.tmp", file.to_string_lossy(), std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| CliError::Io(format!("{}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::Io(format!("{}: {e}", path.display()))
    })
}

/// All trajectories in one table; `{:.16e}` keeps 17 significant digits.
pub fn csv(trajectories: &[Trajectory]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for t in trajectories {
        let label = t.route().label();
        for s in t.samples() {
            let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{label}", s.theta, s.r.x1, s.r.x2, s.r.x3);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub theta: f64,
    pub r: MVec3,
    pub route: Route,
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>, CliError> {
    let bad = |line: usize, msg: &str| CliError::Parse(format!("CSV line {line}: {msg}"));
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => return Err(bad(1, "missing header")),
    }
    lines
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(bad(i + 1, "expected 5 fields"));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| bad(i + 1, &e.to_string()));
            Ok(CsvRow {
                theta: num(fields[0])?,
                r: MVec3::new(num(fields[1])?, num(fields[2])?, num(fields[3])?),
                route: Route::from_label(fields[4]).ok_or_else(|| bad(i + 1, "unknown route"))?,
            })
        })
        .collect()
}

const PANEL: f64 = 420.0;
const MARGIN: f64 = 40.0;

fn route_color(route: Route) -> &'static str {
    match route {
        Route::ClosedForm => "#1f5fa8",
        Route::OdeIntegrated => "#2a9d4a",
        Route::MapIterated => "#c8302c",
    }
}

fn route_style(route: Route) -> &'static str {
    match route {
        Route::ClosedForm => r##"fill="none" stroke="#1f5fa8" stroke-width="1.2""##,
        Route::OdeIntegrated => r##"fill="none" stroke="#2a9d4a" stroke-width="1" stroke-dasharray="4 3""##,
        Route::MapIterated => r##"fill="#c8302c""##,
    }
}

/// Maps data coordinates into one panel, y pointing up.
struct Frame {
    x0: f64,
    lo: (f64, f64),
    hi: (f64, f64),
}

impl Frame {
    fn new(x0: f64, points: impl Iterator<Item = (f64, f64)>, equal_aspect: bool) -> Frame {
        let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
        for (x, y) in points {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        if !lo.0.is_finite() {
            lo = (-1.0, -1.0);
            hi = (1.0, 1.0);
        }
        let mut span = (hi.0 - lo.0, hi.1 - lo.1);
        if equal_aspect {
            let m = span.0.max(span.1);
            lo = (lo.0 - 0.5 * (m - span.0), lo.1 - 0.5 * (m - span.1));
            span = (m, m);
        }
        let span = (span.0.max(1e-9), span.1.max(1e-9));
        let pad = (0.04 * span.0, 0.04 * span.1);
        Frame { x0, lo: (lo.0 - pad.0, lo.1 - pad.1), hi: (lo.0 + span.0 + pad.0, lo.1 + span.1 + pad.1) }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let u = (x - self.lo.0) / (self.hi.0 - self.lo.0);
        let v = (y - self.lo.1) / (self.hi.1 - self.lo.1);
        (self.x0 + u * PANEL, MARGIN + (1.0 - v) * PANEL)
    }

    fn axes(&self, out: &mut String, title: &str, xlabel: &str, ylabel: &str) {
        let (x0, y0) = (self.x0, MARGIN);
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.2}" y="{y0:.2}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#444"/>"##
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{title}</text>"#,
            x0 + PANEL / 2.0,
            y0 - 12.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xlabel}</text>"#,
            x0 + PANEL / 2.0,
            y0 + PANEL + 30.0
        );
        let _ =
            writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{ylabel}</text>"#, x0 - 6.0, y0 + PANEL / 2.0);
        for (anchor, x, label) in [("start", x0, self.lo.0), ("end", x0 + PANEL, self.hi.0)] {
            let _ = writeln!(
                out,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="{anchor}" font-size="10">{label:.3}</text>"#,
                y0 + PANEL + 14.0
            );
        }
        for (y, label) in [(y0 + PANEL, self.lo.1), (y0 + 10.0, self.hi.1)] {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{y:.2}" text-anchor="end" font-size="10">{label:.3}</text>"#,
                x0 - 4.0
            );
        }
    }

    fn polyline(&self, out: &mut String, points: &[(f64, f64)], style: &str) {
        let mut pts = String::new();
        for &p in points {
            let (x, y) = self.map(p);
            let _ = write!(pts, "{x:.2},{y:.2} ");
        }
        let _ = writeln!(out, r#"<polyline points="{}" {style}/>"#, pts.trim_end());
    }

    fn dots(&self, out: &mut String, points: &[(f64, f64)], style: &str) {
        for &p in points {
            let (x, y) = self.map(p);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" {style}/>"#);
        }
    }
}

/// Points of the parallel `{r : r·r = 1, r·q = A}` around a unit timelike `q`.
fn parallel(q: MVec3, level: f64, n: usize) -> Vec<MVec3> {
    let e1 = [MVec3::new(1.0, 0.0, 0.0), MVec3::new(0.0, 1.0, 0.0)]
        .into_iter()
        .map(|v| v - q * (mdot(v, q) / mdot(q, q)))
        .max_by(|a, b| (-mdot(*a, *a)).total_cmp(&-mdot(*b, *b)))
        .expect("two candidates");
    let e1 = e1 * (1.0 / (-mdot(e1, e1)).sqrt());
    let e2 = mcross(q, e1);
    let e2 = e2 * (1.0 / (-mdot(e2, e2)).sqrt());
    let radius = (level * level - 1.0).max(0.0).sqrt();
    (0..=n)
        .map(|j| {
            let phi = std::f64::consts::TAU * j as f64 / n as f64;
            q * level + (e1 * phi.cos() + e2 * phi.sin()) * radius
        })
        .collect()
}

/// Two panels: the x1–x2 projection (with the bounding parallels in the
/// elliptic case) and x3 against θ.
pub fn svg(title: &str, trajectories: &[Trajectory], q: MVec3, bounds: Option<Bounds>) -> String {
    let parallels: Vec<Vec<MVec3>> =
        bounds.map(|b| vec![parallel(q, b.a1, 256), parallel(q, b.a2, 256)]).unwrap_or_default();
    let all = || trajectories.iter().flat_map(|t| t.samples().iter());

    let left = Frame::new(
        MARGIN + 30.0,
        all().map(|s| (s.r.x1, s.r.x2)).chain(parallels.iter().flatten().map(|r| (r.x1, r.x2))),
        true,
    );
    let right = Frame::new(2.0 * MARGIN + PANEL + 60.0, all().map(|s| (s.theta, s.r.x3)), false);
    let width = 3.0 * MARGIN + 2.0 * PANEL + 90.0;
    let height = 2.0 * MARGIN + PANEL + 30.0;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, "<title>{title}</title>");
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    left.axes(&mut out, &format!("{title}: x1-x2 projection"), "x1", "x2");
    right.axes(&mut out, &format!("{title}: x3 vs theta"), "theta", "x3");

    for ring in &parallels {
        let pts: Vec<(f64, f64)> = ring.iter().map(|r| (r.x1, r.x2)).collect();
        left.polyline(&mut out, &pts, r##"fill="none" stroke="#999" stroke-width="0.8""##);
    }
    // Lines first so the discrete orbit stays visible on top.
    let mut ordered: Vec<&Trajectory> = trajectories.iter().collect();
    ordered.sort_by_key(|t| t.route() == Route::MapIterated);
    for t in ordered {
        let xy: Vec<(f64, f64)> = t.samples().iter().map(|s| (s.r.x1, s.r.x2)).collect();
        let tz: Vec<(f64, f64)> = t.samples().iter().map(|s| (s.theta, s.r.x3)).collect();
        let style = route_style(t.route());
        if t.route() == Route::MapIterated {
            left.dots(&mut out, &xy, style);
            right.dots(&mut out, &tz, style);
        } else {
            left.polyline(&mut out, &xy, style);
            right.polyline(&mut out, &tz, style);
        }
    }
    let mut y = MARGIN + 16.0;
    for t in trajectories {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{y:.2}" font-size="11" fill="{}">{}</text>"#,
            right.x0 + 8.0,
            route_color(t.route()),
            t.route().label()
        );
        y += 14.0;
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_lies_on_hyperboloid_at_level() {
        let q = MVec3::new(0.3, -0.2, (1.0f64 + 0.09 + 0.04).sqrt());
        for r in parallel(q, 1.7, 32) {
            assert!((mdot(r, r) - 1.0).abs() < 1e-12);
            assert!((mdot(r, q) - 1.7).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_rejects_malformed_rows() {
        assert!(parse_csv("nope\n").is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n1,2,3,map\n")).is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n1,2,3,4,warp\n")).is_err());
        let rows = parse_csv(&format!("{CSV_HEADER}\n1e0,2,3,4,ode\n")).unwrap();
        assert_eq!(rows[0].route, Route::OdeIntegrated);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
