//! DOT export of a vertex function on a tree: vertex size proportional
//! to |f(v)| and fill color by sign (black negative, gray positive,
//! white zero).

use treelap::tree::Tree;
use treelap::verify::sign_graphs;

/// Renders the tree with the function. Width and height are
/// `0.15 + 0.85 * |f(v)| / max|f|` inches, so zeros stay visible.
pub fn render(t: &Tree, f: &[f64], zero_tol: f64) -> String {
    let max = f.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    let decomposition = sign_graphs(t, f, zero_tol);
    let color = |v: usize| {
        if decomposition.zeros.contains(v) {
            "white"
        } else if f[v] > 0.0 {
            "gray"
        } else {
            "black"
        }
    };
    let mut out = String::from("graph tree {\n  node [shape=circle fixedsize=true];\n");
    for (v, value) in f.iter().enumerate().take(t.n()) {
        let size = 0.15 + 0.85 * value.abs() / max;
        out.push_str(&format!(
            "  {v} [width={size:.4} height={size:.4} style=filled fillcolor={}];\n",
            color(v)
        ));
    }
    for (u, v) in t.edges() {
        out.push_str(&format!("  {u} -- {v};\n"));
    }
    out.push_str("}\n");
    out
}
