//! Deterministic SVG rendering of a flux diagram: flux `s` on the horizontal
//! axis, spectrum `λ` on the vertical axis, one gray column segment per band
//! interval per sampled flux (bands gray, gaps white). Byte-stable for fixed
//! input — no timestamps, no floating-point formatting drift.

use crate::covering::FluxDiagram;
use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 48.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 16.0;
const MARGIN_B: f64 = 32.0;

fn px(x: f64) -> String {
    // Two decimals is far below a device pixel and keeps the output stable.
    format!("{x:.2}")
}

/// Render a band/gap diagram as an SVG document.
pub fn render_svg(fd: &FluxDiagram) -> Result<String> {
    if fd.rows.is_empty() || fd.ambient_max <= 0.0 {
        return Err(Error::InvalidInput("empty flux diagram".into()));
    }
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let cols = fd.rows.len() as f64;
    let col_w = plot_w / cols;
    let y_of = |lambda: f64| MARGIN_T + plot_h * (1.0 - lambda / fd.ambient_max);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\" \
         stroke-width=\"1\"/>\n",
        px(MARGIN_L),
        px(MARGIN_T),
        px(plot_w),
        px(plot_h)
    ));

    for (i, row) in fd.rows.iter().enumerate() {
        let x = MARGIN_L + i as f64 * col_w;
        for iv in &row.band_intervals {
            let y_hi = y_of(iv.hi);
            let y_lo = y_of(iv.lo);
            // Bands thinner than one pixel still get a visible sliver.
            let h = (y_lo - y_hi).max(0.75);
            svg.push_str(&format!(
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#888888\"/>\n",
                px(x),
                px(y_hi),
                px(col_w.max(0.75)),
                px(h)
            ));
        }
    }

    // Axis labels: endpoints only, fixed strings.
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\">0</text>\n",
        px(MARGIN_L),
        px(HEIGHT - MARGIN_B + 16.0)
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" \
         text-anchor=\"end\">2&#960;</text>\n",
        px(WIDTH - MARGIN_R),
        px(HEIGHT - MARGIN_B + 16.0)
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" \
         text-anchor=\"end\">{}</text>\n",
        px(MARGIN_L - 4.0),
        px(MARGIN_T + 12.0),
        crate::io::fmt12(fd.ambient_max)
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" \
         text-anchor=\"end\">0</text>\n",
        px(MARGIN_L - 4.0),
        px(HEIGHT - MARGIN_B)
    ));
    svg.push_str("</svg>\n");
    Ok(svg)
}
