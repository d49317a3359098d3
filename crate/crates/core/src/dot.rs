//! Graphviz rendering of frames. Mutually related states share an
//! undirected edge; a one-way `x ◁ y` is drawn as an arrow from `y` to `x`.
//! Self-loops are left out.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::frame::Frame;

fn quote(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(frame: &Frame, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    for label in frame.labels() {
        writeln!(out, "  {};", quote(label)).unwrap();
    }
    for (x, y) in frame.pairs() {
        if x == y {
            continue;
        }
        let (lx, ly) = (quote(frame.label(x)), quote(frame.label(y)));
        if frame.related(y, x) {
            if x < y {
                writeln!(out, "  {lx} -> {ly} [dir=none];").unwrap();
            }
        } else {
            writeln!(out, "  {ly} -> {lx};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn write_dot(frame: &Frame, name: &str, path: &Path) -> io::Result<()> {
    std::fs::write(path, to_dot(frame, name))
}
