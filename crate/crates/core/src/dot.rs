//! DOT renderings of Moore diagrams, Schreier graphs, and tile graphs.

use crate::contraction::TileGraph;
use crate::mealy::Automaton;
use crate::spectra::SchreierLevelGraph;
use std::fmt::Write;

/// Moore diagram: one node per state labeled `name:perm` (`1` for the
/// identity permutation, cycle notation otherwise), one edge per
/// (state, letter) labeled with the letter.
pub fn moore_dot(aut: &Automaton) -> String {
    let mut out = String::from("digraph moore {\n");
    for s in 0..aut.state_count() {
        let perm = crate::mealy::perm_cycles(aut.output_perm(s));
        let _ = writeln!(out, "  {} [label=\"{}:{}\"];", node_id(aut, s), aut.label(s), perm);
    }
    for s in 0..aut.state_count() {
        for x in 0..aut.alphabet() {
            let _ = writeln!(
                out,
                "  {} -> {} [label=\"{}\"];",
                node_id(aut, s),
                node_id(aut, aut.next(s, x)),
                x
            );
        }
    }
    out.push_str("}\n");
    out
}

fn node_id(aut: &Automaton, s: usize) -> String {
    let label = aut.label(s);
    if label.chars().all(|c| c.is_ascii_alphanumeric()) && !label.is_empty() {
        label
    } else {
        format!("s{s}")
    }
}

/// Labeled Schreier graph: arcs carry the generator names.
pub fn schreier_dot(aut: &Automaton, graph: &SchreierLevelGraph) -> String {
    let mut out = String::from("digraph schreier {\n");
    for v in 0..graph.vertex_count {
        let _ = writeln!(
            out,
            "  v{v} [label=\"{}\"];",
            vertex_word(v, graph.level, aut.alphabet())
        );
    }
    for &(from, s, to) in &graph.arcs {
        let _ = writeln!(
            out,
            "  v{from} -> v{to} [label=\"{}\"];",
            aut.label(s as usize)
        );
    }
    out.push_str("}\n");
    out
}

/// Tile graph: plain undirected edges.
pub fn tile_dot(aut: &Automaton, graph: &TileGraph) -> String {
    let mut out = String::from("graph tile {\n");
    for v in 0..graph.vertex_count {
        let _ = writeln!(
            out,
            "  v{v} [label=\"{}\"];",
            vertex_word(v, graph.level, aut.alphabet())
        );
    }
    for &(u, v) in &graph.edges {
        let _ = writeln!(out, "  v{u} -- v{v};");
    }
    out.push_str("}\n");
    out
}

/// Base-d digits of a level vertex, first letter most significant; the
/// root renders as the empty string.
pub fn vertex_word(index: usize, level: usize, d: usize) -> String {
    let mut digits = vec![0u8; level];
    let mut v = index;
    for i in (0..level).rev() {
        digits[i] = (v % d) as u8;
        v /= d;
    }
    digits.iter().map(|x| char::from(b'0' + x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moore_dot_labels() {
        let aut = Automaton::decode_number(731).unwrap();
        let dot = moore_dot(&aut);
        assert!(dot.contains("a [label=\"a:(01)\"]"));
        assert!(dot.contains("b [label=\"b:1\"]"));
        assert!(dot.contains("a -> b [label=\"0\"]"));
        assert!(dot.contains("a -> a [label=\"1\"]"));
    }

    #[test]
    fn vertex_words() {
        assert_eq!(vertex_word(0, 3, 2), "000");
        assert_eq!(vertex_word(5, 3, 2), "101");
        assert_eq!(vertex_word(0, 0, 2), "");
    }
}
