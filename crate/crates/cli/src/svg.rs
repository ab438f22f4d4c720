//! Minimal SVG overlay: empirical histogram as a step line, theory as a
//! polyline through bin midpoints.

use diluted_spectra::graphs::CompareReport;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 30.0;

pub fn overlay(rep: &CompareReport) -> String {
    let rows = &rep.rows;
    if rows.is_empty() {
        return String::new();
    }
    let (x0, x1) = (rows[0].bin_left, rows[rows.len() - 1].bin_right);
    let vals = rows.iter().flat_map(|r| [r.empirical, r.theory]).filter(|v| v.is_finite());
    let (lo, hi) = vals.fold((0.0f64, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let px = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y - lo) / span * (H - 2.0 * PAD);
    let mut step = Vec::with_capacity(2 * rows.len());
    for r in rows {
        step.push(format!("{:.2},{:.2}", px(r.bin_left), py(r.empirical)));
        step.push(format!("{:.2},{:.2}", px(r.bin_right), py(r.empirical)));
    }
    let curve: Vec<String> = rows
        .iter()
        .map(|r| format!("{:.2},{:.2}", px(0.5 * (r.bin_left + r.bin_right)), py(r.theory)))
        .collect();
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
            "<title>figure {fig}, n={n}, c={c}, reps={reps}</title>\n",
            "<line x1=\"{pad}\" y1=\"{zero:.2}\" x2=\"{xr}\" y2=\"{zero:.2}\" stroke=\"#999\"/>\n",
            "<polyline fill=\"none\" stroke=\"#1f77b4\" points=\"{emp}\"/>\n",
            "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"{th}\"/>\n",
            "</svg>\n"
        ),
        w = W,
        h = H,
        pad = PAD,
        xr = W - PAD,
        zero = py(0.0),
        fig = rep.summary.figure,
        n = rep.summary.n,
        c = rep.summary.c,
        reps = rep.summary.reps,
        emp = step.join(" "),
        th = curve.join(" "),
    )
}
