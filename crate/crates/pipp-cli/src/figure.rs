//! Static SVG rendering of sweep tables.
//!
//! Each table becomes one panel: the solid curve is λ_DPP, the dashed curve
//! λ_PS, both against γ₁ on `[0,1]`. When the table carries Monte-Carlo columns
//! every grid value also gets a boxplot glyph (q1/median/q3 whisker marks).
//! Several tables render as side-by-side panels.

use crate::sweep::SweepRow;

const PANEL_WIDTH: f64 = 420.0;
const PANEL_HEIGHT: f64 = 330.0;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 44.0;

pub fn render(panels: &[(String, Vec<SweepRow>)]) -> String {
    let total_width = PANEL_WIDTH * panels.len() as f64;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total_width}\" height=\"{PANEL_HEIGHT}\" \
         viewBox=\"0 0 {total_width} {PANEL_HEIGHT}\" font-family=\"sans-serif\" font-size=\"11\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (index, (title, rows)) in panels.iter().enumerate() {
        render_panel(&mut svg, index as f64 * PANEL_WIDTH, title, rows);
    }
    svg.push_str("</svg>\n");
    svg
}

fn render_panel(svg: &mut String, x_offset: f64, title: &str, rows: &[SweepRow]) {
    let plot_w = PANEL_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let left = x_offset + MARGIN_LEFT;
    let top = MARGIN_TOP;

    let mut y_max = 0.0_f64;
    for row in rows {
        y_max = y_max.max(row.lambda_ps).max(row.lambda_dpp);
        if let Some(mc) = &row.mc {
            y_max = y_max.max(mc.q3).max(mc.mean);
        }
    }
    let y_max = if y_max > 0.0 { y_max * 1.05 } else { 1.0 };

    let x_pos = |gamma1: f64| left + gamma1 * plot_w;
    let y_pos = |value: f64| top + plot_h - (value / y_max) * plot_h;

    // frame
    svg.push_str(&format!(
        "<rect x=\"{left:.2}\" y=\"{top:.2}\" width=\"{plot_w:.2}\" height=\"{plot_h:.2}\" \
         fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
        left + plot_w / 2.0,
        top - 10.0,
        escape(title)
    ));

    // x ticks every 0.2
    for i in 0..=5 {
        let gamma1 = i as f64 / 5.0;
        let x = x_pos(gamma1);
        let y0 = top + plot_h;
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{y0:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            y0 + 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{gamma1:.1}</text>\n",
            y0 + 16.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">gamma1</text>\n",
        left + plot_w / 2.0,
        top + plot_h + 32.0
    ));

    // y ticks at a round step
    let step = nice_step(y_max / 5.0);
    let mut tick = 0.0;
    while tick <= y_max {
        let y = y_pos(tick);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{left:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>\n",
            left - 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
            left - 7.0,
            y + 3.5,
            format_tick(tick)
        ));
        tick += step;
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 {:.2} {:.2})\">intensity</text>\n",
        x_offset + 14.0,
        top + plot_h / 2.0,
        x_offset + 14.0,
        top + plot_h / 2.0
    ));

    // boxplot glyphs first so the curves stay visible on top
    for row in rows {
        if let Some(mc) = &row.mc {
            let x = x_pos(row.gamma1);
            let (yq1, ymed, yq3) = (y_pos(mc.q1), y_pos(mc.median), y_pos(mc.q3));
            svg.push_str(&format!(
                "<line x1=\"{x:.2}\" y1=\"{yq1:.2}\" x2=\"{x:.2}\" y2=\"{yq3:.2}\" \
                 stroke=\"gray\" stroke-width=\"1.4\"/>\n"
            ));
            for (y, half) in [(yq1, 3.0), (ymed, 5.0), (yq3, 3.0)] {
                svg.push_str(&format!(
                    "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
                     stroke=\"gray\" stroke-width=\"1.4\"/>\n",
                    x - half,
                    x + half
                ));
            }
        }
    }

    let polyline = |values: Box<dyn Iterator<Item = (f64, f64)> + '_>| -> String {
        values
            .map(|(g1, v)| format!("{:.2},{:.2}", x_pos(g1), y_pos(v)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    // dashed Poisson-saddlepoint curve
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" \
         stroke-dasharray=\"6,4\"/>\n",
        polyline(Box::new(rows.iter().map(|r| (r.gamma1, r.lambda_ps))))
    ));
    // solid DPP curve
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
        polyline(Box::new(rows.iter().map(|r| (r.gamma1, r.lambda_dpp))))
    ));
}

fn nice_step(raw: f64) -> f64 {
    if raw <= 0.0 {
        return 1.0;
    }
    let exponent = raw.log10().floor();
    let base = 10f64.powf(exponent);
    let mantissa = raw / base;
    let nice = if mantissa <= 1.0 {
        1.0
    } else if mantissa <= 2.0 {
        2.0
    } else if mantissa <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * base
}

fn format_tick(value: f64) -> String {
    if value == value.trunc() && value.abs() < 1e6 {
        format!("{value:.0}")
    } else {
        format!("{value}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
