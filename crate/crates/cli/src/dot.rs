//! DOT rendering of Bratteli diagrams and Schreier balls.

use std::fmt::Write;

use tfg_core::fullgroup::SchreierBall;
use tfg_core::towers::BratteliDiagram;

pub fn bratteli(d: &BratteliDiagram) -> String {
    let mut out = String::from("digraph bratteli {\n  rankdir=TB;\n");
    for (level, &count) in d.vertices().iter().enumerate() {
        out.push_str("  { rank=same;");
        for v in 0..count {
            write!(out, " v{level}_{v};").unwrap();
        }
        out.push_str(" }\n");
    }
    for (gap, edges) in d.edges().iter().enumerate() {
        for e in edges {
            writeln!(out, "  v{}_{} -> v{}_{} [label=\"{}\"];", gap, e.source, gap + 1, e.range, e.order).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn node(j: i64) -> String {
    if j < 0 {
        format!("m{}", -j)
    } else {
        format!("p{j}")
    }
}

pub fn schreier(ball: &SchreierBall) -> String {
    let mut out = String::from("digraph schreier {\n");
    for &j in &ball.vertices {
        writeln!(out, "  {} [label=\"{j}\"];", node(j)).unwrap();
    }
    for &(from, to, g) in &ball.edges {
        writeln!(out, "  {} -> {} [label=\"g{g}\"];", node(from), node(to)).unwrap();
    }
    out.push_str("}\n");
    out
}
