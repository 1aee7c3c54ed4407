//! Deterministic textual forms for canonical sets.
//!
//! Sets print as minimal `let` programs: a node gets a name exactly when it
//! sits on a membership cycle or is shared by several parents, everything
//! else inlines as braces. The output round-trips through
//! [`crate::parse::parse_set`]. Cyclic sets have no braces-only notation, so
//! this is the universal printer.

use std::fmt::Write;

use crate::canon::CanonSet;
use crate::graph::{Apg, NodeId};
use crate::solver::{EquationSystem, SetTerm};

/// Renders `s` as a one-line `let` program (bindings separated by spaces).
pub fn to_literal(s: &CanonSet) -> String {
    let lines = render_lines(s.apg(), "s");
    lines.join(" ")
}

/// Renders `s` as a multi-line `let` program, one binding per line.
pub fn to_literal_multiline(s: &CanonSet) -> String {
    render_lines(s.apg(), "s").join("\n")
}

fn render_lines(g: &Apg, prefix: &str) -> Vec<String> {
    let plan = NamePlan::for_graph(g, prefix);
    let mut lines = Vec::new();
    for &v in &plan.named_order {
        let mut line = format!("let {} = ", plan.name_of(v));
        write_braces(g, v, &plan, &mut line);
        line.push(';');
        lines.push(line);
    }
    let root = g.root();
    let mut body = String::new();
    if plan.is_named(root) {
        body.push_str(&plan.name_of(root));
    } else {
        write_braces(g, root, &plan, &mut body);
    }
    lines.push(body);
    lines
}

fn write_braces(g: &Apg, v: NodeId, plan: &NamePlan, out: &mut String) {
    out.push('{');
    for (i, &c) in g.children(v).iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        if plan.is_named(c) {
            out.push_str(&plan.name_of(c));
        } else {
            write_braces(g, c, plan, out);
        }
    }
    out.push('}');
}

struct NamePlan {
    names: Vec<Option<String>>,
    named_order: Vec<NodeId>,
}

impl NamePlan {
    fn for_graph(g: &Apg, prefix: &str) -> NamePlan {
        let n = g.node_count();
        let mut indeg = vec![0u32; n];
        for (_, c) in g.edges() {
            indeg[c.index()] += 1;
        }
        let cyclic = nodes_on_cycles(g);
        let mut names = vec![None; n];
        let mut named_order = Vec::new();
        let mut k = 0;
        for v in g.nodes() {
            if cyclic[v.index()] || indeg[v.index()] >= 2 {
                names[v.index()] = Some(format!("{prefix}{k}"));
                k += 1;
                named_order.push(v);
            }
        }
        NamePlan { names, named_order }
    }

    fn is_named(&self, v: NodeId) -> bool {
        self.names[v.index()].is_some()
    }

    fn name_of(&self, v: NodeId) -> String {
        self.names[v.index()].clone().expect("named node")
    }
}

/// Marks every node that lies on a directed cycle (a strongly connected
/// component of size > 1, or a self-loop).
fn nodes_on_cycles(g: &Apg) -> Vec<bool> {
    let n = g.node_count();
    // Iterative Tarjan.
    let mut index = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut out = vec![false; n];
    let mut call: Vec<(u32, usize)> = Vec::new();

    for start in 0..n as u32 {
        if index[start as usize] != u32::MAX {
            continue;
        }
        call.push((start, 0));
        index[start as usize] = next_index;
        low[start as usize] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start as usize] = true;
        while let Some(&mut (v, ref mut ci)) = call.last_mut() {
            let children = g.children(NodeId(v));
            if *ci < children.len() {
                let c = children[*ci].0;
                *ci += 1;
                if index[c as usize] == u32::MAX {
                    index[c as usize] = next_index;
                    low[c as usize] = next_index;
                    next_index += 1;
                    stack.push(c);
                    on_stack[c as usize] = true;
                    call.push((c, 0));
                } else if on_stack[c as usize] {
                    low[v as usize] = low[v as usize].min(index[c as usize]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent as usize] = low[parent as usize].min(low[v as usize]);
                }
                if low[v as usize] == index[v as usize] {
                    // Root of an SCC: pop it off.
                    let mut scc = Vec::new();
                    loop {
                        let w = stack.pop().expect("scc member");
                        on_stack[w as usize] = false;
                        scc.push(w);
                        if w == v {
                            break;
                        }
                    }
                    let self_loop =
                        scc.len() == 1 && g.children(NodeId(scc[0])).contains(&NodeId(scc[0]));
                    if scc.len() > 1 || self_loop {
                        for w in scc {
                            out[w as usize] = true;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Renders an equation system as a parseable `let` program. Embedded sets
/// inline as braces when acyclic and unshared; otherwise their nodes are
/// hoisted into auxiliary bindings with an `a`-prefixed name pool.
pub fn render_system(sys: &EquationSystem) -> String {
    let mut used: Vec<String> = sys.bindings().iter().map(|(n, _)| n.clone()).collect();
    let mut counter = 0usize;
    let mut aux_lines: Vec<String> = Vec::new();
    let mut lines: Vec<String> = Vec::new();
    for (name, terms) in sys.bindings() {
        let mut line = format!("let {name} = {{");
        for (i, t) in terms.iter().enumerate() {
            if i > 0 {
                line.push_str(", ");
            }
            match t {
                SetTerm::Var(v) => line.push_str(v),
                SetTerm::Lit(s) => {
                    line.push_str(&render_lit(s, &mut used, &mut counter, &mut aux_lines))
                }
            }
        }
        line.push_str("};");
        lines.push(line);
    }
    lines.extend(aux_lines);
    lines.join("\n")
}

// Returns an expression for `s`, appending hoisted bindings when needed.
fn render_lit(
    s: &CanonSet,
    used: &mut Vec<String>,
    counter: &mut usize,
    aux: &mut Vec<String>,
) -> String {
    let g = s.apg();
    let plan = NamePlan::for_graph(g, "");
    if plan.named_order.is_empty() {
        let mut out = String::new();
        write_braces(g, g.root(), &plan, &mut out);
        return out;
    }
    // Allocate fresh global names for this literal's named nodes.
    let mut names: Vec<Option<String>> = vec![None; g.node_count()];
    for &v in &plan.named_order {
        let name = loop {
            let cand = format!("a{counter}");
            *counter += 1;
            if !used.contains(&cand) {
                break cand;
            }
        };
        used.push(name.clone());
        names[v.index()] = Some(name);
    }
    let renamed = NamePlan {
        names,
        named_order: plan.named_order,
    };
    for &v in &renamed.named_order {
        let mut line = format!("let {} = ", renamed.name_of(v));
        write_braces(g, v, &renamed, &mut line);
        line.push(';');
        aux.push(line);
    }
    let root = g.root();
    if renamed.is_named(root) {
        renamed.name_of(root)
    } else {
        let mut out = String::new();
        write_braces(g, root, &renamed, &mut out);
        out
    }
}

/// DOT digraph of the canonical picture: one node per canonical index, the
/// root drawn as a double circle, edges parent to child.
pub fn to_dot(s: &CanonSet) -> String {
    let g = s.apg();
    let mut out = String::from("digraph set {\n");
    for v in g.nodes() {
        let shape = if v == g.root() { "doublecircle" } else { "circle" };
        writeln!(out, "  n{} [label=\"{}\", shape={}];", v.0, v.0, shape).unwrap();
    }
    for (p, c) in g.edges() {
        writeln!(out, "  n{} -> n{};", p.0, c.0).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::CanonSet;
    use crate::parse::{parse_set, parse_system};
    use crate::set::{empty, from_elements, ordinal, quine_atom};

    fn reparse(text: &str) -> CanonSet {
        CanonSet::canonicalize(&parse_set(text).unwrap())
    }

    #[test]
    fn empty_renders_as_braces() {
        assert_eq!(to_literal(&empty()), "{}");
    }

    #[test]
    fn quine_atom_needs_a_binding() {
        let text = to_literal(&quine_atom());
        assert_eq!(text, "let s0 = {s0}; s0");
        assert_eq!(reparse(&text), quine_atom());
    }

    #[test]
    fn ordinal_two_is_brace_only() {
        assert_eq!(to_literal(&ordinal(2)), "{{}, {{}}}");
    }

    #[test]
    fn shared_nodes_are_named() {
        // Ordinal 3 shares 0 and 1 between several parents.
        let text = to_literal(&ordinal(3));
        assert!(text.starts_with("let "), "{text}");
        assert_eq!(reparse(&text), ordinal(3));
    }

    #[test]
    fn roundtrip_mixed_cycle() {
        let c = from_elements(&[quine_atom(), ordinal(2)]);
        assert_eq!(reparse(&to_literal(&c)), c);
    }

    #[test]
    fn system_rendering_roundtrips() {
        let sys = EquationSystem::new(vec![
            ("C".into(), vec![SetTerm::Lit(empty()), SetTerm::Var("C".into())]),
            ("t1".into(), vec![SetTerm::Lit(quine_atom()), SetTerm::Var("C".into())]),
        ]);
        let text = render_system(&sys);
        let reparsed = parse_system(&text).unwrap();
        let a = sys.solve().unwrap();
        let b = reparsed.solve().unwrap();
        assert_eq!(a.get("C"), b.get("C"));
        assert_eq!(a.get("t1"), b.get("t1"));
    }

    #[test]
    fn dot_output_is_stable() {
        let dot = to_dot(&ordinal(1));
        assert_eq!(
            dot,
            "digraph set {\n  n0 [label=\"0\", shape=doublecircle];\n  n1 [label=\"1\", shape=circle];\n  n0 -> n1;\n}\n"
        );
    }
}
