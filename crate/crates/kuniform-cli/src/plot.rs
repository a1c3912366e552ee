use std::collections::BTreeMap;
use std::path::Path;

use kuniform::noisesim::SweepRow;
use plotters::prelude::*;

/// Quantity on the horizontal axis, picked from what the sweep varies.
#[derive(Clone, Copy, PartialEq)]
enum Axis {
    P,
    K,
    N,
}

fn axis(rows: &[SweepRow]) -> Axis {
    let distinct = |f: &dyn Fn(&SweepRow) -> String| {
        let mut v: Vec<String> = rows.iter().map(f).collect();
        v.sort();
        v.dedup();
        v.len()
    };
    if distinct(&|r| format!("{:?}", r.noise)) > 1 {
        Axis::P
    } else if distinct(&|r| r.k.to_string()) > 1 {
        Axis::K
    } else {
        Axis::N
    }
}

/// Infidelity against the swept quantity, one line per scheme and fixed
/// remaining parameters. Points with zero or undefined infidelity are left out.
pub fn infidelity_svg(rows: &[SweepRow], path: &Path) -> Result<(), Box<dyn std::error::Error>> {
    let ax = axis(rows);
    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows {
        let (x, label) = match ax {
            Axis::P => (r.noise.p2, format!("{} k={} N={}", r.scheme, r.k, r.n)),
            Axis::K => (r.k as f64, format!("{} N={}", r.scheme, r.n)),
            Axis::N => (r.n as f64, format!("{} k={}", r.scheme, r.k)),
        };
        let pts = series.entry(label).or_default();
        if let Some(y) = r.estimate.infidelity().filter(|&y| y > 0.0) {
            pts.push((x, y));
        }
    }
    let pts = || series.values().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in pts() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if pts().next().is_none() {
        (x0, x1, y0, y1) = (1.0, 2.0, 1e-6, 1.0);
    }
    if x0 == x1 {
        x1 = x0 * 1.5 + 1.0;
    }
    let (y0, y1) = (y0 / 2.0, (y1 * 2.0).min(1.0).max(y0));

    let root = SVGBackend::new(path, (800, 560)).into_drawing_area();
    root.fill(&WHITE)?;
    let xlabel = match ax {
        Axis::P => "p2",
        Axis::K => "k",
        Axis::N => "N",
    };
    let mut builder = ChartBuilder::on(&root);
    builder.margin(20).x_label_area_size(40).y_label_area_size(70);
    macro_rules! draw {
        ($xr:expr) => {{
            let mut chart = builder.build_cartesian_2d($xr, (y0..y1).log_scale())?;
            chart.configure_mesh().x_desc(xlabel).y_desc("1 - F").draw()?;
            for (i, (label, pts)) in series.iter().enumerate() {
                let color = Palette99::pick(i).mix(0.9);
                chart
                    .draw_series(LineSeries::new(pts.iter().copied(), color.stroke_width(2)))?
                    .label(label.as_str())
                    .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2)));
                chart.draw_series(pts.iter().map(|&p| Circle::new(p, 3, color.filled())))?;
            }
            chart
                .configure_series_labels()
                .position(SeriesLabelPosition::UpperLeft)
                .background_style(WHITE.mix(0.8))
                .border_style(BLACK)
                .draw()?;
        }};
    }
    if ax == Axis::P {
        draw!((x0 / 1.5..x1 * 1.5).log_scale());
    } else {
        let pad = (x1 - x0) * 0.05;
        draw!(x0 - pad..x1 + pad);
    }
    root.present()?;
    Ok(())
}
