//! Graphviz DOT text for quivers and translation quivers.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::io::Artifact;
use crate::quiver::Quiver;
use crate::slices::SliceCandidate;
use crate::translation::TranslationQuiver;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn render_quiver(q: &Quiver) -> String {
    let mut out = String::from("digraph quiver {\n  rankdir=LR;\n");
    for v in q.vertices() {
        writeln!(out, "  {};", quote(v)).unwrap();
    }
    for a in q.arrows() {
        writeln!(out, "  {} -> {} [label={}];", quote(&a.from), quote(&a.to), quote(&a.id)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Arrows solid, `tau` dashed from `z` to `tau z`, marked positions boxed,
/// members of `highlight` filled.
pub fn render_translation_quiver(g: &TranslationQuiver, highlight: Option<&SliceCandidate>) -> String {
    let mut out = String::from("digraph translation_quiver {\n  rankdir=LR;\n");
    for p in g.points() {
        let lit = highlight.is_some_and(|s| s.contains(&p.id));
        let style = if lit { ", style=filled, fillcolor=lightblue" } else { "" };
        let frontier = if g.is_interior(g.require(&p.id).unwrap()) { "" } else { ", peripheries=2" };
        writeln!(out, "  {} [shape=ellipse{style}{frontier}];", quote(&p.id)).unwrap();
    }
    for m in g.marked() {
        writeln!(out, "  {} [shape=box];", quote(m)).unwrap();
    }
    for &(s, t) in g.arrows() {
        writeln!(out, "  {} -> {};", quote(g.id(s)), quote(g.id(t))).unwrap();
    }
    for z in 0..g.len() {
        if let Some(tz) = g.tau(z) {
            writeln!(out, "  {} -> {} [style=dashed, constraint=false];", quote(g.id(z)), quote(g.id(tz))).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn render(a: &Artifact, highlight: Option<&SliceCandidate>) -> Result<String> {
    match a {
        Artifact::Quiver(q) => Ok(render_quiver(q)),
        Artifact::Presentation(p) => Ok(render_quiver(&p.quiver)),
        Artifact::Algebra(r) => Ok(render_quiver(&r.presentation.quiver)),
        Artifact::TranslationQuiver(g) => Ok(render_translation_quiver(g, highlight)),
        Artifact::Model(m) => Ok(render_translation_quiver(&m.window, highlight)),
        other => Err(Error::Unsupported(format!("no graph to render for a {} artifact", other.kind()))),
    }
}
