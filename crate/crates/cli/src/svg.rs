//! Fixed-size, deterministic SVG rendering of CSV tables.

use std::fmt::Write as _;

use crate::{CliError, CliResult, PlotKind};
use permlab::measures::standard_normal_cdf;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;
/// Upper bound on the vertices of one path.
const MAX_VERTICES: usize = 2000;
const REFERENCE_POINTS: usize = 400;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        let widen = |lo: f64, hi: f64| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        let (x_min, x_max) = widen(x_min, x_max);
        let (y_min, y_max) = widen(y_min, y_max);
        Frame { x_min, x_max, y_min, y_max }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - 2.0 * MARGIN)
    }

    fn path(&self, points: &[(f64, f64)], colour: &str) -> String {
        let mut d = String::new();
        for (i, &(x, y)) in points.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            write!(d, "{cmd}{:.2},{:.2} ", self.px(x), self.py(y)).expect("write to String");
        }
        format!("<path d=\"{}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\"/>\n", d.trim_end())
    }

    fn axes(&self) -> String {
        let (left, right) = (MARGIN, WIDTH - MARGIN);
        let (top, bottom) = (MARGIN, HEIGHT - MARGIN);
        let mut s = String::new();
        writeln!(s, "<line x1=\"{left}\" y1=\"{bottom}\" x2=\"{right}\" y2=\"{bottom}\" stroke=\"black\"/>")
            .expect("write to String");
        writeln!(s, "<line x1=\"{left}\" y1=\"{bottom}\" x2=\"{left}\" y2=\"{top}\" stroke=\"black\"/>")
            .expect("write to String");
        for (x, y, anchor, label) in [
            (left, bottom + 20.0, "start", self.x_min),
            (right, bottom + 20.0, "end", self.x_max),
            (left - 8.0, bottom, "end", self.y_min),
            (left - 8.0, top + 4.0, "end", self.y_max),
        ] {
            writeln!(s, "<text x=\"{x}\" y=\"{y}\" font-size=\"12\" text-anchor=\"{anchor}\">{label:.3}</text>")
                .expect("write to String");
        }
        s
    }
}

fn document(body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n\
         <rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

fn thin<T: Copy>(points: &[T]) -> Vec<T> {
    if points.len() <= MAX_VERTICES {
        return points.to_vec();
    }
    let n = points.len();
    let mut out: Vec<T> = (0..MAX_VERTICES - 1).map(|j| points[j * n / (MAX_VERTICES - 1)]).collect();
    out.push(points[n - 1]);
    out
}

/// Empirical CDF of the first column against the `N(0, variance)` CDF.
fn cdf_overlay(rows: &[Vec<f64>], variance: f64) -> CliResult<String> {
    let mut values: Vec<f64> = rows.iter().filter_map(|r| r.first().copied()).collect();
    if values.is_empty() {
        return Err(CliError::Config("empty table".into()));
    }
    if !(variance > 0.0) {
        return Err(CliError::Config(format!("reference variance must be > 0, got {variance}")));
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    let sd = variance.sqrt();
    let lo = values[0].min(-3.0 * sd);
    let hi = values[n - 1].max(3.0 * sd);
    let frame = Frame::new(lo, hi, 0.0, 1.0);
    let mut steps = vec![(lo, 0.0)];
    for (i, &v) in values.iter().enumerate() {
        steps.push((v, i as f64 / n as f64));
        steps.push((v, (i + 1) as f64 / n as f64));
    }
    steps.push((hi, 1.0));
    let reference: Vec<(f64, f64)> = (0..=REFERENCE_POINTS)
        .map(|j| {
            let x = lo + (hi - lo) * j as f64 / REFERENCE_POINTS as f64;
            (x, standard_normal_cdf(x / sd))
        })
        .collect();
    let body = frame.axes() + &frame.path(&thin(&steps), "steelblue") + &frame.path(&reference, "firebrick");
    Ok(document(&body))
}

/// Second column against the first.
fn trajectory(rows: &[Vec<f64>]) -> CliResult<String> {
    let points: Vec<(f64, f64)> = rows.iter().filter(|r| r.len() >= 2).map(|r| (r[0], r[1])).collect();
    if points.is_empty() {
        return Err(CliError::Config("empty table".into()));
    }
    let fold = |f: fn(&(f64, f64)) -> f64| {
        points.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
    };
    let (x_min, x_max) = fold(|p| p.0);
    let (y_min, y_max) = fold(|p| p.1);
    let frame = Frame::new(x_min, x_max, y_min, y_max);
    Ok(document(&(frame.axes() + &frame.path(&thin(&points), "steelblue"))))
}

pub(crate) fn emit_svg(rows: &[Vec<f64>], kind: PlotKind, variance: f64) -> CliResult<String> {
    match kind {
        PlotKind::CdfOverlay => cdf_overlay(rows, variance),
        PlotKind::Trajectory => trajectory(rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[f64]) -> Vec<Vec<f64>> {
        v.iter().map(|&x| vec![x]).collect()
    }

    #[test]
    fn overlay_has_two_paths() {
        let svg = emit_svg(&rows(&[-1.0, 0.0, 0.5, 2.0]), PlotKind::CdfOverlay, 1.0).unwrap();
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.contains("width=\"800\" height=\"600\""));
        assert_eq!(svg, emit_svg(&rows(&[-1.0, 0.0, 0.5, 2.0]), PlotKind::CdfOverlay, 1.0).unwrap());
    }

    #[test]
    fn trajectory_has_one_path_and_axes() {
        let table: Vec<Vec<f64>> = (3..100).map(|n| vec![n as f64, (n as f64).sin()]).collect();
        let svg = emit_svg(&table, PlotKind::Trajectory, 1.0).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        assert_eq!(svg.matches("<line").count(), 2);
    }

    #[test]
    fn empty_tables_are_rejected() {
        assert!(matches!(emit_svg(&[], PlotKind::CdfOverlay, 1.0), Err(CliError::Config(_))));
        assert!(matches!(emit_svg(&[vec![1.0]], PlotKind::Trajectory, 1.0), Err(CliError::Config(_))));
    }

    #[test]
    fn long_paths_are_thinned() {
        let many: Vec<f64> = (0..100_000).map(|i| i as f64 / 1e5).collect();
        let svg = emit_svg(&rows(&many), PlotKind::CdfOverlay, 1.0).unwrap();
        let first_path = svg.split("<path").nth(1).unwrap();
        assert!(first_path.matches('L').count() < MAX_VERTICES);
    }
}
