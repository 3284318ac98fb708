use std::fmt::Write;

use super::{GraphFile, MscFile};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Events become nodes labelled with their actions; timeline steps are solid
/// edges and messages dashed ones.
pub fn msc_to_dot(f: &MscFile) -> String {
    let mut out = String::from("digraph msc {\n");
    for p in f.msc.processes() {
        for &e in f.msc.timeline(p) {
            let label = f.msc.label(e).expect("timeline events have labels").display(&f.alphabet).to_string();
            writeln!(out, "  {} [label={}];", quote(&f.event_name(e)), quote(&label)).unwrap();
        }
    }
    for p in f.msc.processes() {
        for w in f.msc.timeline(p).windows(2) {
            writeln!(out, "  {} -> {};", quote(&f.event_name(w[0])), quote(&f.event_name(w[1]))).unwrap();
        }
    }
    for &(s, r) in f.msc.messages() {
        writeln!(out, "  {} -> {} [style=dashed];", quote(&f.event_name(s)), quote(&f.event_name(r))).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Undirected graphs are written as a digraph with `dir=none` edges.
pub fn graph_to_dot(g: &GraphFile) -> String {
    let mut out = String::from("digraph g {\n");
    for n in &g.names {
        writeln!(out, "  {};", quote(n)).unwrap();
    }
    let attr = if g.directed { "" } else { " [dir=none]" };
    for &(u, v) in &g.edges {
        writeln!(out, "  {} -> {}{attr};", quote(&g.names[u as usize]), quote(&g.names[v as usize])).unwrap();
    }
    out.push_str("}\n");
    out
}
