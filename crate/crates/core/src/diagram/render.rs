use std::fmt::Write;

use super::DiagramPair;
use crate::process::{partial_sums, ProcessVector};

/// Preamble for [`render_latex`] output. Needs the `tikz-feynhand` package.
pub const LATEX_PREAMBLE: &str = "\\documentclass[tikz,border=4pt]{standalone}\n\\usepackage{tikz-feynhand}\n";

const COLUMN_WIDTH: usize = 30;

fn state_label(v: i64) -> String {
    if v == 0 {
        "n,0".to_string()
    } else {
        format!("n-{},{}", 2 * v, v)
    }
}

fn vertex_label(k: u32, j: usize) -> String {
    let kind = if j % 2 == 1 { "shc" } else { "sha" };
    if k > 1 {
        format!("  * {k} ({kind})")
    } else {
        format!("  * ({kind})")
    }
}

/// Lines strictly between the initial and final state, bottom to top.
fn column_body(k: &ProcessVector, ket: bool) -> Vec<String> {
    let sums = partial_sums(k);
    let mut lines = Vec::new();
    for (i, &block) in k.blocks().iter().enumerate() {
        lines.push(vertex_label(block, i + 1));
        if i + 1 < sums.len() {
            let label = state_label(sums[i]);
            lines.push(if ket { format!("|{label}>") } else { format!("<{label}|") });
        }
    }
    lines
}

fn pad_column(body: Vec<String>, height: usize) -> Vec<String> {
    let below = (height - body.len()) / 2;
    let above = height - body.len() - below;
    let line = || "  |".to_string();
    std::iter::repeat_with(line)
        .take(below)
        .chain(body)
        .chain(std::iter::repeat_with(line).take(above))
        .collect()
}

/// Fixed-width text rendering: ket column on the left, bra column on the
/// right, time running from the bottom line to the top line.
pub fn render_ascii(pair: &DiagramPair) -> String {
    let left = column_body(&pair.left, true);
    let right = column_body(&pair.right, false);
    let height = left.len().max(right.len()).max(1);
    let left = pad_column(left, height);
    let right = pad_column(right, height);
    let v = i64::from(pair.net_photons());

    let mut rows = Vec::with_capacity(height + 2);
    rows.push((format!("|{}>", state_label(v)), format!("<{}|", state_label(v))));
    for (l, r) in left.into_iter().zip(right).rev() {
        rows.push((l, r));
    }
    rows.push(("|n,0>".to_string(), "<n,0|".to_string()));

    let mut out = String::new();
    let _ = writeln!(
        out,
        "R={} v'={} multiplicity={}",
        pair.total_order(),
        v,
        pair.multiplicity
    );
    let header_left = format!("ket k={} r={}", pair.left, pair.left_order());
    let header_right = format!("bra k'={} r'={}", pair.right, pair.right_order());
    for (l, r) in std::iter::once((header_left, header_right)).chain(rows) {
        let _ = writeln!(out, "{l:<COLUMN_WIDTH$}| {r}");
    }
    out
}

struct Side<'a> {
    blocks: &'a [u32],
    sums: Vec<i64>,
    prefix: char,
}

fn coord(x: f64) -> String {
    format!("{x:.2}")
}

fn vertex_heights(l: usize, height: f64) -> Vec<f64> {
    (1..=l).map(|j| j as f64 * height / (l as f64 + 1.0)).collect()
}

fn latex_ket(out: &mut String, side: &Side<'_>, height: f64) {
    let p = side.prefix;
    let ys = vertex_heights(side.blocks.len(), height);
    let h = coord(height);
    let _ = writeln!(out, "\\vertex ({p}if) at (0,0);");
    let _ = writeln!(out, "\\vertex ({p}ia) at (1,0);");
    for (j, y) in ys.iter().enumerate() {
        let _ = writeln!(out, "\\vertex [dot] ({p}{}) at (1,{}) {{}};", j + 1, coord(*y));
    }
    let _ = writeln!(out, "\\vertex ({p}of) at (0,{h});");
    let _ = writeln!(out, "\\vertex ({p}oa) at (1,{h});");
    let l = side.blocks.len();
    if l == 0 {
        let _ = writeln!(out, "\\propag [chabos] ({p}if) to ({p}of);");
        let _ = writeln!(out, "\\propag [fer] ({p}ia) to ({p}oa);");
    } else {
        let _ = writeln!(out, "\\propag [chabos] ({p}if) to ({p}1);");
        let _ = writeln!(out, "\\propag [fer] ({p}ia) to ({p}1);");
        for j in 1..l {
            let _ = writeln!(out, "\\propag [chabos] ({p}{j}) to ({p}{});", j + 1);
            let _ = writeln!(out, "\\propag [fer] ({p}{j}) to [out=0, in=0] ({p}{});", j + 1);
        }
        let _ = writeln!(out, "\\propag [fer] ({p}oa) to ({p}{l});");
        let _ = writeln!(out, "\\propag [chabos] ({p}of) to ({p}{l});");
    }
    let _ = writeln!(out, "\\node at (-0.6,0) {{$|n,0\\rangle$}};");
    let _ = writeln!(out, "\\node at (1.5,0) {{$|g\\rangle$}};");
    let _ = writeln!(out, "\\node at (1.5,{h}) {{$|g\\rangle$}};");
    let final_v = side.sums.last().copied().unwrap_or(0);
    let _ = writeln!(out, "\\node at (-0.9,{h}) {{$|{}\\rangle$}};", state_label(final_v));
    for j in 0..l.saturating_sub(1) {
        let mid = (ys[j] + ys[j + 1]) / 2.0;
        let _ = writeln!(out, "\\node at (-0.5,{}) {{$|{}\\rangle$}};", coord(mid), state_label(side.sums[j]));
    }
    for (j, &k) in side.blocks.iter().enumerate() {
        if k > 1 {
            let _ = writeln!(out, "\\node at (0.7,{}) {{{k}}};", coord(ys[j]));
        }
    }
}

fn latex_bra(out: &mut String, side: &Side<'_>, height: f64) {
    let p = side.prefix;
    let ys = vertex_heights(side.blocks.len(), height);
    let h = coord(height);
    let _ = writeln!(out, "\\vertex ({p}ia) at (2.5,0);");
    let _ = writeln!(out, "\\vertex ({p}if) at (3.5,0);");
    for (j, y) in ys.iter().enumerate() {
        let _ = writeln!(out, "\\vertex [dot] ({p}{}) at (2.5,{}) {{}};", j + 1, coord(*y));
    }
    let _ = writeln!(out, "\\vertex ({p}oa) at (2.5,{h});");
    let _ = writeln!(out, "\\vertex ({p}of) at (3.5,{h});");
    let l = side.blocks.len();
    if l == 0 {
        let _ = writeln!(out, "\\propag [fer] ({p}oa) to ({p}ia);");
        let _ = writeln!(out, "\\propag [chabos] ({p}of) to ({p}if);");
    } else {
        let _ = writeln!(out, "\\propag [fer] ({p}1) to ({p}ia);");
        let _ = writeln!(out, "\\propag [chabos] ({p}1) to ({p}if);");
        for j in 1..l {
            let _ = writeln!(out, "\\propag [chabos] ({p}{}) to ({p}{j});", j + 1);
            let _ = writeln!(out, "\\propag [fer] ({p}{}) to [out=180, in=180] ({p}{j});", j + 1);
        }
        let _ = writeln!(out, "\\propag [fer] ({p}{l}) to ({p}oa);");
        let _ = writeln!(out, "\\propag [chabos] ({p}{l}) to ({p}of);");
    }
    let _ = writeln!(out, "\\node at (2,0) {{$\\langle g|$}};");
    let _ = writeln!(out, "\\node at (2,{h}) {{$\\langle g|$}};");
    let _ = writeln!(out, "\\node at (4.1,0) {{$\\langle n,0|$}};");
    let final_v = side.sums.last().copied().unwrap_or(0);
    let _ = writeln!(out, "\\node at (4.4,{h}) {{$\\langle {}|$}};", state_label(final_v));
    for j in 0..l.saturating_sub(1) {
        let mid = (ys[j] + ys[j + 1]) / 2.0;
        let _ = writeln!(out, "\\node at (4.2,{}) {{$\\langle {}|$}};", coord(mid), state_label(side.sums[j]));
    }
    for (j, &k) in side.blocks.iter().enumerate() {
        if k > 1 {
            let _ = writeln!(out, "\\node at (2.8,{}) {{{k}}};", coord(ys[j]));
        }
    }
}

/// Standalone LaTeX document drawing the pair with `tikz-feynhand`.
///
/// Wiggly lines (`chabos`) carry the field state, plain lines (`fer`) the
/// atomic ground state, dots are vertices and a number beside a dot is the
/// block multiplicity.
pub fn render_latex(pair: &DiagramPair) -> String {
    let ket = Side { blocks: pair.left.blocks(), sums: partial_sums(&pair.left), prefix: 'k' };
    let bra = Side { blocks: pair.right.blocks(), sums: partial_sums(&pair.right), prefix: 'b' };
    let height = (pair.left.len().max(pair.right.len()) + 1).max(2) as f64;

    let mut out = String::from(LATEX_PREAMBLE);
    out.push_str("\\begin{document}\n\\begin{tikzpicture}\n\\begin{feynhand}\n");
    let _ = writeln!(
        out,
        "% k = {}, k' = {}, R = {}, multiplicity = {}",
        pair.left,
        pair.right,
        pair.total_order(),
        pair.multiplicity
    );
    latex_ket(&mut out, &ket, height);
    latex_bra(&mut out, &bra, height);
    let _ = writeln!(
        out,
        "\\node at (1.75,-0.7) {{$\\mathbf{{k}}={}$, $\\mathbf{{k'}}={}$, $R={}$}};",
        pair.left,
        pair.right,
        pair.total_order()
    );
    out.push_str("\\end{feynhand}\n\\end{tikzpicture}\n\\end{document}\n");
    out
}
