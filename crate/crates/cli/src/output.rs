//! Text rendering. Numbers use the shortest representation that parses
//! back to the same `f64`, so output is exact and stable across runs.

use std::fmt::Write;

use fscan::instances::{GlHElement, TensorElement};
use fscan::DenseMatrix;

pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-6..1e17).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn csv_line(values: impl IntoIterator<Item = f64>) -> String {
    let mut s = values.into_iter().map(num).collect::<Vec<_>>().join(",");
    s.push('\n');
    s
}

/// Values that print either inline (scalars) or as a labeled block.
pub trait Render {
    fn as_scalar(&self) -> Option<f64> {
        None
    }
    fn render_block(&self, out: &mut String);
}

impl Render for f64 {
    fn as_scalar(&self) -> Option<f64> {
        Some(*self)
    }
    fn render_block(&self, out: &mut String) {
        out.push_str(&csv_line([*self]));
    }
}

impl Render for DenseMatrix {
    fn render_block(&self, out: &mut String) {
        for i in 0..self.rows() {
            out.push_str(&csv_line(self.row(i).iter().copied()));
        }
    }
}

impl Render for TensorElement {
    /// One `word,coefficient` line per stored term, words in lexicographic order.
    fn render_block(&self, out: &mut String) {
        for (w, c) in self.terms() {
            let _ = writeln!(out, "{w},{}", num(c));
        }
    }
}

impl Render for GlHElement {
    fn render_block(&self, out: &mut String) {
        self.block().render_block(out);
    }
}

/// Scalars as one comma-separated line; anything else as `label` lines each
/// followed by its block.
pub fn render_all<T: Render>(items: &[(String, T)]) -> String {
    let scalars: Option<Vec<f64>> = items.iter().map(|(_, t)| t.as_scalar()).collect();
    if let Some(values) = scalars {
        return csv_line(values);
    }
    let mut out = String::new();
    for (label, item) in items {
        out.push_str(label);
        out.push('\n');
        item.render_block(&mut out);
    }
    out
}
