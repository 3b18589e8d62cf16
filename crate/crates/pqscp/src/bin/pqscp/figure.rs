//! SVG figure for one bound `m`: the admissible lattice under the cut line
//! `a log p + b log q = log m`, the frontier points `Z_m`, and the dashed
//! staircase of boundary exponents `ell_b`.

use num_bigint::BigUint;
use pqscp::certified::ln_interval;
use pqscp::{ell_value, z_set, ConvergentTable, Params, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 540.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 56.0;

/// Renders the figure; output is a pure function of `(p, q, m)`.
pub fn render_plot(params: &Params, m: &BigUint) -> Result<String> {
    let set = z_set(params, m)?;
    let a_max = params.floor_log_p(m);
    let b_max = params.floor_log_q(m);

    let mut table = ConvergentTable::new(*params);
    let mut ells = Vec::with_capacity(b_max as usize + 1);
    for b in 0..=b_max {
        ells.push(ell_value(&mut table, b)?);
    }

    // Axis extents leave breathing room past the largest exponents.
    let x_span = a_max as f64 + 1.6;
    let y_span = b_max as f64 + 1.6;
    let fx = |a: f64| LEFT + a / x_span * (WIDTH - LEFT - RIGHT);
    let fy = |b: f64| HEIGHT - BOTTOM - b / y_span * (HEIGHT - TOP - BOTTOM);

    let ln_m = ln_interval(m, 96).to_f64();
    let ln_p = (params.p() as f64).ln();
    let ln_q = (params.q() as f64).ln();

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"monospace\" font-size=\"12\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\">Z_m and the ell staircase for m = {}, \
(p, q) = ({}, {})</text>\n",
        WIDTH / 2.0,
        approx_label(m, ln_m),
        params.p(),
        params.q()
    ));

    draw_axes(&mut svg, a_max, b_max, &fx, &fy);

    // Admissible lattice points (skipped when they would only be noise).
    if (a_max + 1).saturating_mul(b_max + 1) <= 2500 {
        let mut reduced = m.clone();
        for b in 0..=b_max {
            let a_hi = params.floor_log_p(&reduced);
            for a in 0..=a_hi {
                svg.push_str(&format!(
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.5\" fill=\"#c8c8c8\"/>\n",
                    fx(a as f64),
                    fy(b as f64)
                ));
            }
            reduced /= params.q_big();
        }
    }

    // The cut line a ln p + b ln q = ln m.
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#555555\" \
stroke-width=\"1\"/>\n",
        fx(ln_m / ln_p),
        fy(0.0),
        fx(0.0),
        fy(ln_m / ln_q)
    ));

    // Staircase: horizontal to the new ell, then one level up.
    let mut path = format!("M {:.2} {:.2}", fx(ells[0] as f64), fy(0.0));
    for (b, ell) in ells.iter().enumerate().skip(1) {
        path.push_str(&format!(" H {:.2} V {:.2}", fx(*ell as f64), fy(b as f64)));
    }
    svg.push_str(&format!(
        "<path d=\"{path}\" fill=\"none\" stroke=\"#1c7a1c\" stroke-width=\"1.5\" \
stroke-dasharray=\"6 4\"/>\n"
    ));

    // Frontier points, with the argmax ringed and the z point labelled.
    let argmax = set.argmax_h_indices();
    let z_index = set.z_index();
    let label_all = set.len() <= 12;
    for (i, point) in set.points().iter().enumerate() {
        let x = fx(point.a as f64);
        let y = fy(point.b as f64);
        svg.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"#2a6fb0\"/>\n"
        ));
        if argmax.contains(&i) {
            svg.push_str(&format!(
                "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"7.5\" fill=\"none\" \
stroke=\"#c03030\" stroke-width=\"1.5\"/>\n"
            ));
        }
        if label_all {
            let mut tag = set.values()[i].to_string();
            if argmax.contains(&i) {
                tag.push_str(" (G)");
            }
            if i == z_index {
                tag.push_str(" (z)");
            }
            svg.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\">{tag}</text>\n",
                x + 9.0,
                y - 7.0
            ));
        }
    }

    // Legend.
    let lx = WIDTH - RIGHT - 250.0;
    let ly = TOP + 10.0;
    svg.push_str(&format!(
        "<circle cx=\"{lx}\" cy=\"{ly}\" r=\"4\" fill=\"#2a6fb0\"/>\
<text x=\"{}\" y=\"{}\">frontier point of Z_m</text>\n",
        lx + 10.0,
        ly + 4.0
    ));
    svg.push_str(&format!(
        "<circle cx=\"{lx}\" cy=\"{}\" r=\"4\" fill=\"none\" stroke=\"#c03030\" \
stroke-width=\"1.5\"/><text x=\"{}\" y=\"{}\">argmax of h (weight G)</text>\n",
        ly + 18.0,
        lx + 10.0,
        ly + 22.0
    ));
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{lx}\" y2=\"{}\" stroke=\"#1c7a1c\" \
stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\
<text x=\"{}\" y=\"{}\">staircase a = ell_b</text>\n",
        lx - 8.0,
        ly + 36.0,
        ly + 36.0,
        lx + 10.0,
        ly + 40.0
    ));

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn draw_axes(
    svg: &mut String,
    a_max: u64,
    b_max: u64,
    fx: &dyn Fn(f64) -> f64,
    fy: &dyn Fn(f64) -> f64,
) {
    let x0 = fx(0.0);
    let y0 = fy(0.0);
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>\n",
        WIDTH - RIGHT
    ));
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{TOP:.2}\" stroke=\"black\"/>\n"
    ));
    let x_stride = (a_max / 16).max(1);
    let mut a = 0;
    while a <= a_max {
        let x = fx(a as f64);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{y0:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\
<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{a}</text>\n",
            y0 + 5.0,
            y0 + 20.0
        ));
        a += x_stride;
    }
    let y_stride = (b_max / 16).max(1);
    let mut b = 0;
    while b <= b_max {
        let y = fy(b as f64);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{x0:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>\
<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{b}</text>\n",
            x0 - 5.0,
            x0 - 9.0,
            y + 4.0
        ));
        b += y_stride;
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">a (exponent of p)</text>\n",
        (x0 + WIDTH - RIGHT) / 2.0,
        HEIGHT - 14.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" writing-mode=\"tb\">b (exponent of q)</text>\n",
        (y0 + TOP) / 2.0
    ));
}

/// `m` verbatim when short, otherwise a scientific approximation.
fn approx_label(m: &BigUint, ln_m: f64) -> String {
    let digits = m.to_string();
    if digits.len() <= 20 {
        digits
    } else {
        let exp10 = ln_m / std::f64::consts::LN_10;
        let mantissa = 10f64.powf(exp10.fract());
        format!("~{mantissa:.3}e{}", exp10.trunc() as i64)
    }
}
