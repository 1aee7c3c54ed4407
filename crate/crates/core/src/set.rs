//! Set-theoretic operations on canonical hypersets.

use crate::bisim;
use crate::canon::CanonSet;
use crate::graph::{Apg, GraphBuilder, NodeId};

/// The empty set.
pub fn empty() -> CanonSet {
    CanonSet::canonicalize(&Apg::new(1, [], 0).expect("one bare node"))
}

/// The self-membered singleton: the decoration of a single self-loop node.
pub fn quine_atom() -> CanonSet {
    CanonSet::canonicalize(&Apg::new(1, [(0, 0)], 0).expect("one self-loop node"))
}

/// Aggregates the given sets into a whole. Elements equal under bisimulation
/// collapse, so `from_elements(&[e, e])` is the singleton of `e`.
pub fn from_elements(xs: &[CanonSet]) -> CanonSet {
    let mut b = GraphBuilder::new();
    let root = b.add_node();
    for x in xs {
        let r = b.embed(x.apg());
        b.add_edge(root, r);
    }
    CanonSet::canonicalize(&b.into_apg(root))
}

impl CanonSet {
    /// The members of this set, pairwise distinct, in canonical node order.
    pub fn elements(&self) -> Vec<CanonSet> {
        self.apg()
            .children(self.apg().root())
            .iter()
            .map(|&c| self.set_at(c))
            .collect()
    }

    /// Membership under bisimulation equality.
    pub fn has_member(&self, x: &CanonSet) -> bool {
        self.elements().iter().any(|e| e == x)
    }

    /// True when no infinite descending membership chain starts here, i.e.
    /// the canonical picture is acyclic.
    pub fn is_well_founded(&self) -> bool {
        !self.apg().has_cycle()
    }

    /// Every set reachable by repeated membership, deduplicated. A circular
    /// set appears in its own closure.
    pub fn transitive_closure(&self) -> Vec<CanonSet> {
        let g = self.apg();
        let mut seen = vec![false; g.node_count()];
        let mut queue: Vec<NodeId> = Vec::new();
        for &c in g.children(g.root()) {
            if !seen[c.index()] {
                seen[c.index()] = true;
                queue.push(c);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &c in g.children(v) {
                if !seen[c.index()] {
                    seen[c.index()] = true;
                    queue.push(c);
                }
            }
        }
        queue.sort_unstable();
        queue.into_iter().map(|v| self.set_at(v)).collect()
    }

    /// First-order ordinal test: transitive, with membership trichotomous on
    /// elements. No foundation clause, so self-membered solutions of
    /// `C = E ∪ {C}` over ordinals `E` qualify.
    pub fn is_ordinal(&self) -> bool {
        let g = self.apg();
        let root = g.root();
        let elems = g.children(root);
        // Transitivity: members of members are members. In the minimal graph
        // set equality is node identity.
        for &e in elems {
            for &m in g.children(e) {
                if elems.binary_search(&m).is_err() {
                    return false;
                }
            }
        }
        // Trichotomy on elements.
        for &a in elems {
            for &b in elems {
                if a == b {
                    continue;
                }
                let a_in_b = g.children(b).binary_search(&a).is_ok();
                let b_in_a = g.children(a).binary_search(&b).is_ok();
                if !a_in_b && !b_in_a {
                    return false;
                }
            }
        }
        true
    }
}

/// The von Neumann ordinal `n = {0, 1, ..., n-1}`.
pub fn ordinal(n: usize) -> CanonSet {
    let mut edges = Vec::new();
    // Node k decorates ordinal k; the root is node n.
    for k in 0..=n {
        for i in 0..k {
            edges.push((k as u32, i as u32));
        }
    }
    CanonSet::canonicalize(&Apg::from_reachable(n + 1, &edges, n as u32).expect("valid ordinal"))
}

/// Substitutes `y` for `x` inside `s` without recursing into `y`.
///
/// If `s` itself equals `x` the result is `y`. Otherwise every membership
/// edge leading to the occurrence of `x` in `s`'s picture is redirected to
/// `y`; occurrences of `x` reachable only through a replaced position
/// disappear with it, and when `x` is absent from the transitive closure the
/// substitution is latent and `s` is returned unchanged.
pub fn replace(s: &CanonSet, x: &CanonSet, y: &CanonSet) -> CanonSet {
    if s == x {
        return y.clone();
    }
    // Locate the unique node of s picturing x, if any.
    let p = bisim::joint_partition(&[s.apg(), x.apg()]);
    let target_block = p.block(1, x.apg().root().0);
    let hit = s
        .apg()
        .nodes()
        .find(|v| p.block(0, v.0) == target_block);
    let Some(hit) = hit else {
        return s.clone(); // latent
    };
    debug_assert_ne!(hit, s.apg().root(), "root case handled above");

    let mut b = GraphBuilder::new();
    // Nodes of s keep their indices; the y-graph is appended.
    for _ in 0..s.apg().node_count() {
        b.add_node();
    }
    let y_root = b.embed(y.apg());
    for (pnode, c) in s.apg().edges() {
        let dst = if c == hit { y_root } else { c.0 };
        b.add_edge(pnode.0, dst);
    }
    CanonSet::canonicalize(&b.into_apg(s.apg().root().0))
}
