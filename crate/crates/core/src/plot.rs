//! Plot data files (comma-separated, two columns each) and optional SVG line
//! charts.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::analysis::Analysis;
use crate::comparison::{Criterion, Direction};
use crate::error::{Error, Result};
use crate::measures::GlCurve;

/// Keeps `[A-Za-z0-9._-]`, replacing anything else with `_`.
pub fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "._-".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn index_stem(kind: &crate::IndexKind) -> String {
    match kind.alpha() {
        Some(a) => format!("CF{a}"),
        None => kind.to_string(),
    }
}

fn write(dir: &Path, name: &str, contents: &str, written: &mut Vec<String>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(path, e))?;
    written.push(name.to_string());
    Ok(())
}

fn two_column(header: (&str, &str), points: impl IntoIterator<Item = (f64, f64)>) -> String {
    let mut s = format!("{},{}\n", header.0, header.1);
    for (a, b) in points {
        let _ = writeln!(s, "{a},{b}");
    }
    s
}

/// GL curve sampled at `0`, every grid point, and `1`.
pub fn gl_points(curve: &GlCurve, grid: &crate::UGrid) -> Vec<(f64, f64)> {
    std::iter::once(0.0)
        .chain(grid.points().iter().copied())
        .chain(std::iter::once(1.0))
        .map(|u| (u, curve.eval_unchecked(u)))
        .collect()
}

fn direction_pair<'a>(x: &'a str, y: &'a str, d: Direction) -> (&'a str, &'a str) {
    match d {
        Direction::XOverY => (x, y),
        Direction::YOverX => (y, x),
    }
}

/// Which plot families to write.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlotSelection {
    pub gl: bool,
    pub probability_curves: bool,
    pub densities: bool,
}

impl PlotSelection {
    pub const ALL: Self = Self {
        gl: true,
        probability_curves: true,
        densities: true,
    };
}

/// Writes the selected plot data into `dir`, plus one SVG per figure when
/// `render` is set. Returns the written file names in a fixed order.
pub fn emit_plot_data(
    analysis: &Analysis,
    dir: &Path,
    select: PlotSelection,
    render: bool,
) -> Result<Vec<String>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    if select.gl {
        let mut series = Vec::new();
        for g in &analysis.report.groups {
            let pts = gl_points(&g.gl_curve, &analysis.grid);
            let name = format!("gl_{}.csv", file_stem(&g.name));
            write(
                dir,
                &name,
                &two_column(("u", "value"), pts.iter().copied()),
                &mut written,
            )?;
            series.push((g.name.clone(), pts));
        }
        if render && !series.is_empty() {
            series.push(("equality".to_string(), vec![(0.0, 0.0), (1.0, 1.0)]));
            let svg = line_chart("Generalized Lorenz curves", "u", "GL(u)", &series);
            write(dir, "figure_gl.svg", &svg, &mut written)?;
        }
    }

    if select.probability_curves {
        for crit in [Criterion::Fsd, Criterion::Gld] {
            let mut series = Vec::new();
            for nc in analysis.curves.iter().filter(|c| c.criterion == crit) {
                let (over, under) = direction_pair(&nc.x, &nc.y, nc.curve.direction);
                let tag = if crit == Criterion::Fsd { "fsd" } else { "gld" };
                let name = format!(
                    "probcurve_{tag}_{}_over_{}.csv",
                    file_stem(over),
                    file_stem(under)
                );
                let pts: Vec<(f64, f64)> = nc
                    .curve
                    .axis
                    .values()
                    .into_iter()
                    .zip(nc.curve.probs.iter().copied())
                    .collect();
                write(
                    dir,
                    &name,
                    &two_column(("axis", "prob"), pts.iter().copied()),
                    &mut written,
                )?;
                series.push((format!("{over} {} {under}", crit.label()), pts));
            }
            if render && !series.is_empty() {
                let (title, file, xl) = match crit {
                    Criterion::Fsd => (
                        "FSD probability curves",
                        "figure_fsd_curves.svg",
                        "category k",
                    ),
                    _ => ("GLD probability curves", "figure_gld_curves.svg", "u"),
                };
                let svg = line_chart(title, xl, "probability", &series);
                write(dir, file, &svg, &mut written)?;
            }
        }
    }

    if select.densities {
        let mut kinds: Vec<crate::IndexKind> = Vec::new();
        for d in &analysis.densities {
            if !kinds.contains(&d.index) {
                kinds.push(d.index);
            }
        }
        for kind in kinds {
            let mut series = Vec::new();
            for d in analysis.densities.iter().filter(|d| d.index == kind) {
                let name = format!("density_{}_{}.csv", index_stem(&kind), file_stem(&d.group));
                let pts: Vec<(f64, f64)> = d
                    .density
                    .grid
                    .iter()
                    .copied()
                    .zip(d.density.density.iter().copied())
                    .collect();
                write(
                    dir,
                    &name,
                    &two_column(("grid", "density"), pts.iter().copied()),
                    &mut written,
                )?;
                series.push((d.group.clone(), pts));
            }
            if render {
                let svg = line_chart(
                    &format!("Posterior densities of {kind}"),
                    &kind.to_string(),
                    "density",
                    &series,
                );
                write(
                    dir,
                    &format!("figure_density_{}.svg", index_stem(&kind)),
                    &svg,
                    &mut written,
                )?;
            }
        }
    }
    Ok(written)
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Minimal standalone SVG line chart with a legend.
pub fn line_chart(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[(String, Vec<(f64, f64)>)],
) -> String {
    let (w, h) = (640.0, 440.0);
    let (left, right, top, bottom) = (60.0, 170.0, 40.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;

    let all = series.iter().flat_map(|(_, p)| p.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| top + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        left + pw / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            sx(xv),
            top + ph + 16.0,
            tick(xv)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            left - 6.0,
            sy(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        left + pw / 2.0,
        h - 12.0,
        escape(xlabel)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        top + ph / 2.0,
        top + ph / 2.0,
        escape(ylabel)
    );
    for (i, (name, pts)) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
        let ly = top + 14.0 + 18.0 * i as f64;
        let lx = left + pw + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stems_are_filesystem_safe() {
        assert_eq!(file_stem("ind 2001/a"), "ind_2001_a");
        assert_eq!(file_stem("CF(0.1)"), "CF_0.1_");
    }

    #[test]
    fn chart_is_well_formed() {
        let svg = line_chart(
            "t<1>",
            "x",
            "y",
            &[("a".into(), vec![(0.0, 0.0), (1.0, 2.0)])],
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("t&lt;1&gt;"));
        assert!(svg.contains("<polyline"));
    }
}
