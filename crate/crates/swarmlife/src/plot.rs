//! Static SVG figures: fitness and retention curves, species counts and
//! species lifespans.

use std::path::Path;

use plotters::prelude::*;
use swarmlife_core::evolve::LifespanRow;

use crate::tables::{FitnessCsv, RetentionCsv};

pub fn task_color(name: &str, index: usize) -> RGBColor {
    match name {
        "red" => RGBColor(214, 39, 40),
        "blue" => RGBColor(31, 119, 180),
        "green" => RGBColor(44, 160, 44),
        "yellow" => RGBColor(230, 190, 0),
        "cyan" => RGBColor(23, 190, 207),
        "magenta" => RGBColor(200, 40, 200),
        "orange" => RGBColor(255, 127, 14),
        "purple" => RGBColor(148, 103, 189),
        "black" => RGBColor(0, 0, 0),
        _ => {
            const PALETTE: [RGBColor; 4] = [
                RGBColor(140, 86, 75),
                RGBColor(127, 127, 127),
                RGBColor(188, 189, 34),
                RGBColor(227, 119, 194),
            ];
            PALETTE[index % PALETTE.len()]
        }
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.05).max(0.5);
    (lo.min(0.0) - pad, hi + pad)
}

/// Segments of consecutive generations sharing a task id.
fn segments(rows: &[FitnessCsv]) -> Vec<(String, Vec<(f64, f64)>)> {
    let mut out: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for r in rows {
        match out.last_mut() {
            Some((t, pts)) if *t == r.task_id => pts.push((r.generation as f64, r.best_fitness)),
            _ => out.push((r.task_id.clone(), vec![(r.generation as f64, r.best_fitness)])),
        }
    }
    out
}

/// Best current-task fitness (solid, per-task color) and retention on
/// previous tasks (dashed). `top` selects R^top instead of R^pop.
pub fn curves(path: &Path, fitness: &[FitnessCsv], retention: &[RetentionCsv], top: bool) -> anyhow::Result<()> {
    let root = SVGBackend::new(path, (900, 480)).into_drawing_area();
    root.fill(&WHITE)?;
    let n = fitness.last().map_or(1, |r| r.generation + 1) as f64;
    let r_of = |r: &RetentionCsv| if top { r.r_top } else { r.r_pop };
    let (lo, hi) = bounds(fitness.iter().map(|r| r.best_fitness).chain(retention.iter().map(r_of)));
    let title = if top {
        "current fitness and champion retention"
    } else {
        "current fitness and population retention"
    };
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 18))
        .margin(12)
        .x_label_area_size(36)
        .y_label_area_size(48)
        .build_cartesian_2d(0f64..n.max(1.0), lo..hi)?;
    chart
        .configure_mesh()
        .x_desc("generation")
        .y_desc("fitness")
        .disable_mesh()
        .draw()?;
    let mut task_ids: Vec<String> = Vec::new();
    let mut index_of = |t: &str| match task_ids.iter().position(|x| x == t) {
        Some(i) => i,
        None => {
            task_ids.push(t.into());
            task_ids.len() - 1
        }
    };
    let segs = segments(fitness);
    for (i, (task, pts)) in segs.iter().enumerate() {
        let color = task_color(task, index_of(task));
        chart.draw_series(LineSeries::new(pts.iter().copied(), color.stroke_width(2)))?;
        if i > 0 {
            let x = pts[0].0 - 0.5;
            chart.draw_series(DashedLineSeries::new([(x, lo), (x, hi)], 4, 4, BLACK.mix(0.4).stroke_width(1)))?;
        }
    }
    let mut evaluated: Vec<&str> = retention.iter().map(|r| r.eval_task_id.as_str()).collect();
    evaluated.sort_unstable();
    evaluated.dedup();
    for task in evaluated {
        let color = task_color(task, index_of(task));
        let pts: Vec<(f64, f64)> = retention
            .iter()
            .filter(|r| r.eval_task_id == task)
            .map(|r| (r.generation as f64, r_of(r)))
            .collect();
        chart.draw_series(DashedLineSeries::new(pts, 6, 4, color.stroke_width(2)))?;
    }
    root.present()?;
    Ok(())
}

/// Alive species per generation, one line per run label.
pub fn species_counts(path: &Path, series: &[(String, Vec<(usize, f64)>)]) -> anyhow::Result<()> {
    let root = SVGBackend::new(path, (900, 360)).into_drawing_area();
    root.fill(&WHITE)?;
    let n = series
        .iter()
        .flat_map(|(_, s)| s.last().map(|p| p.0 + 1))
        .max()
        .unwrap_or(1) as f64;
    let hi = series.iter().flat_map(|(_, s)| s.iter().map(|p| p.1)).fold(1.0, f64::max) + 1.0;
    let mut chart = ChartBuilder::on(&root)
        .caption("alive species", ("sans-serif", 18))
        .margin(12)
        .x_label_area_size(36)
        .y_label_area_size(48)
        .build_cartesian_2d(0f64..n, 0f64..hi)?;
    chart
        .configure_mesh()
        .x_desc("generation")
        .y_desc("species")
        .disable_mesh()
        .draw()?;
    for (i, (label, s)) in series.iter().enumerate() {
        let color = task_color(label, i + 4);
        chart
            .draw_series(LineSeries::new(s.iter().map(|&(g, c)| (g as f64, c)), color.stroke_width(2)))?
            .label(label.as_str())
            .legend(move |(x, y)| PathElement::new([(x, y), (x + 16, y)], color.stroke_width(2)));
    }
    if series.len() > 1 {
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.8))
            .border_style(BLACK)
            .draw()?;
    }
    root.present()?;
    Ok(())
}

/// One horizontal bar per species from creation to extinction (or the end
/// of the run).
pub fn lifespans(path: &Path, rows: &[LifespanRow], generations: usize) -> anyhow::Result<()> {
    let root = SVGBackend::new(path, (900, 120 + 14 * rows.len().min(200) as u32)).into_drawing_area();
    root.fill(&WHITE)?;
    let n = generations.max(1) as f64;
    let mut chart = ChartBuilder::on(&root)
        .caption("species lifespans", ("sans-serif", 18))
        .margin(12)
        .x_label_area_size(36)
        .y_label_area_size(48)
        .build_cartesian_2d(0f64..n, 0f64..rows.len().max(1) as f64)?;
    chart
        .configure_mesh()
        .x_desc("generation")
        .y_desc("species")
        .disable_mesh()
        .draw()?;
    chart.draw_series(rows.iter().enumerate().map(|(i, r)| {
        let end = r.extinct_at.unwrap_or(generations) as f64;
        let y = i as f64;
        Rectangle::new([(r.created_at as f64, y + 0.15), (end, y + 0.85)], RGBColor(31, 119, 180).filled())
    }))?;
    root.present()?;
    Ok(())
}
