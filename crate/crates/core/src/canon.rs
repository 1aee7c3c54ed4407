//! Canonical forms of hypersets.
//!
//! A [`CanonSet`] is the minimal picture of a set under maximum bisimulation,
//! relabeled into a deterministic node order. Two pictures denote the same
//! set exactly when their canonical forms are structurally identical, so all
//! higher layers compare sets with plain `==`.

use std::cmp::Ordering;

use crate::bisim;
use crate::graph::{Apg, NodeId};

/// A set in canonical form: no two nodes bisimilar, root at index 0, and a
/// node order fixed by (breadth-first depth, iterated child signatures).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonSet {
    apg: Apg,
}

impl CanonSet {
    /// Canonicalizes any valid picture.
    pub fn canonicalize(g: &Apg) -> CanonSet {
        let quotient = quotient_graph(g);
        let order = canonical_order(&quotient);
        let relabeled = relabel(&quotient, &order);
        CanonSet { apg: relabeled }
    }

    /// The underlying minimal graph. Its root is always node 0.
    pub fn apg(&self) -> &Apg {
        &self.apg
    }

    pub fn node_count(&self) -> usize {
        self.apg.node_count()
    }

    /// Re-roots the canonical graph at `v` and canonicalizes the result:
    /// the set decorating node `v`.
    pub fn set_at(&self, v: NodeId) -> CanonSet {
        if v == self.apg.root() {
            return self.clone();
        }
        let edges: Vec<(u32, u32)> = self
            .apg
            .edges()
            .into_iter()
            .map(|(p, c)| (p.0, c.0))
            .collect();
        let sub = Apg::from_reachable(self.apg.node_count(), &edges, v.0)
            .expect("subgraph of a valid graph is valid");
        CanonSet::canonicalize(&sub)
    }
}

/// Total order used for deterministic listings: node count first, then the
/// canonical edge lists.
impl Ord for CanonSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.apg
            .node_count()
            .cmp(&other.apg.node_count())
            .then_with(|| self.apg.edges().cmp(&other.apg.edges()))
    }
}

impl PartialOrd for CanonSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Collapses bisimilar nodes and drops anything unreachable from the root
/// class. The result is minimal but not yet canonically ordered.
fn quotient_graph(g: &Apg) -> Apg {
    let p = bisim::partition(g);
    let nblocks = p.block_count();
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(g.edge_count());
    // Stability guarantees every member of a block reaches the same set of
    // child blocks, so one representative per block suffices.
    let mut seen = vec![false; nblocks];
    for v in g.nodes() {
        let bv = p.block(0, v.0);
        if seen[bv as usize] {
            continue;
        }
        seen[bv as usize] = true;
        for &c in g.children(v) {
            edges.push((bv, p.block(0, c.0)));
        }
    }
    Apg::from_reachable(nblocks, &edges, p.block(0, g.root().0))
        .expect("quotient of a valid graph is valid")
}

/// Deterministic total order on a minimal graph: start from breadth-first
/// discovery depth and refine by sorted child ranks until every node has a
/// distinct rank. Ties at a fixpoint would form a bisimulation, which
/// minimality rules out.
fn canonical_order(g: &Apg) -> Vec<u32> {
    let n = g.node_count();
    if n == 1 {
        return vec![0];
    }

    // Breadth-first depth from the root; all nodes reachable by invariant.
    let mut rank = vec![u32::MAX; n];
    let mut queue = vec![g.root()];
    rank[g.root().index()] = 0;
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &c in g.children(v) {
            if rank[c.index()] == u32::MAX {
                rank[c.index()] = rank[v.index()] + 1;
                queue.push(c);
            }
        }
    }

    // Depths from the root are contiguous, so they already form dense ranks.
    let mut distinct = rank.iter().copied().max().unwrap() as usize + 1;
    for _ in 0..=n {
        if distinct == n {
            break;
        }
        let prev = rank.clone();
        let next_distinct = dense_ranks(&mut rank, n, |v| {
            let mut ch: Vec<u32> = g
                .children(NodeId(v as u32))
                .iter()
                .map(|c| prev[c.index()])
                .collect();
            ch.sort_unstable();
            (prev[v], ch)
        });
        if next_distinct == distinct {
            break;
        }
        distinct = next_distinct;
    }
    debug_assert_eq!(distinct, n, "minimal graph must resolve to a total order");
    rank
}

/// Sorts nodes by `key`, writes dense group ranks into `rank`, and returns
/// the number of distinct groups.
fn dense_ranks<K: Ord>(rank: &mut Vec<u32>, n: usize, key: impl Fn(usize) -> K) -> usize {
    let mut keyed: Vec<(K, usize)> = (0..n).map(|v| (key(v), v)).collect();
    keyed.sort();
    let mut out = vec![0u32; n];
    let mut groups = 0u32;
    for i in 0..n {
        if i > 0 && keyed[i].0 != keyed[i - 1].0 {
            groups += 1;
        }
        out[keyed[i].1] = groups;
    }
    *rank = out;
    groups as usize + 1
}

fn relabel(g: &Apg, order: &[u32]) -> Apg {
    let n = g.node_count();
    let mut edges = Vec::with_capacity(g.edge_count());
    for v in g.nodes() {
        for &c in g.children(v) {
            edges.push((order[v.index()], order[c.index()]));
        }
    }
    let root = order[g.root().index()];
    debug_assert_eq!(root, 0, "root ranks first: unique node at depth 0");
    Apg::new(n, edges, root).expect("relabeling preserves validity")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canon(n: usize, edges: &[(u32, u32)]) -> CanonSet {
        CanonSet::canonicalize(&Apg::new(n, edges.iter().copied(), 0).unwrap())
    }

    #[test]
    fn self_loop_canonicalizes_to_one_node() {
        let c = canon(1, &[(0, 0)]);
        assert_eq!(c.node_count(), 1);
        assert_eq!(c.apg().edges(), vec![(NodeId(0), NodeId(0))]);
    }

    #[test]
    fn empty_set_is_a_bare_node() {
        let c = canon(1, &[]);
        assert_eq!(c.node_count(), 1);
        assert!(c.apg().edges().is_empty());
    }

    #[test]
    fn duplicated_empty_picture_of_two_collapses() {
        // Four-node picture of {0, {0}} with a private copy of 0.
        let dup = canon(4, &[(0, 1), (0, 2), (2, 3)]);
        // Three-node shared picture.
        let shared = canon(3, &[(0, 1), (0, 2), (2, 1)]);
        assert_eq!(dup, shared);
        assert_eq!(dup.node_count(), 3);
    }

    #[test]
    fn two_cycle_is_the_self_loop() {
        let c = canon(2, &[(0, 1), (1, 0)]);
        assert_eq!(c, canon(1, &[(0, 0)]));
    }

    #[test]
    fn canonicalization_is_idempotent() {
        for (n, edges) in [
            (3usize, vec![(0u32, 1u32), (0, 2), (2, 1)]),
            (2, vec![(0, 1), (1, 1), (0, 0)]),
            (4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]),
        ] {
            let once = canon(n, &edges);
            let twice = CanonSet::canonicalize(once.apg());
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn isomorphic_inputs_share_canonical_labels() {
        // Same shape with permuted node names.
        let a = canon(3, &[(0, 1), (0, 2), (2, 1)]);
        let b = CanonSet::canonicalize(
            &Apg::new(3, [(1, 2), (1, 0), (0, 2)], 1).unwrap(),
        );
        assert_eq!(a, b);
    }

    #[test]
    fn ordering_puts_smaller_graphs_first() {
        let empty = canon(1, &[]);
        let omega = canon(1, &[(0, 0)]);
        let one = canon(2, &[(0, 1)]);
        assert!(empty < omega);
        assert!(omega < one);
    }
}
