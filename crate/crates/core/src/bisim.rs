//! Maximum-bisimulation partitioning by worklist partition refinement.
//!
//! Computes the relational coarsest partition of one or more pointed graphs:
//! two nodes land in the same block exactly when they are bisimilar, i.e.
//! when the sets their subgraphs picture are equal under the strongest
//! graph-based equality. The refinement maintains a fine partition stable
//! with respect to a coarser one and always processes the smaller half of a
//! compound splitter, giving O((n + m) log n) node moves. A naive
//! fixed-point oracle lives in the test suite.

use crate::graph::Apg;

/// Result of refining one or more graphs into bisimulation classes.
#[derive(Debug, Clone)]
pub struct JointPartition {
    offsets: Vec<u32>,
    block_of: Vec<u32>,
    block_count: usize,
}

impl JointPartition {
    /// Block id of node `v` of the `graph`-th input graph.
    pub fn block(&self, graph: usize, v: u32) -> u32 {
        self.block_of[(self.offsets[graph] + v) as usize]
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }
}

/// Refines the disjoint union of `graphs` into bisimulation classes.
pub fn joint_partition(graphs: &[&Apg]) -> JointPartition {
    let mut offsets = Vec::with_capacity(graphs.len());
    let mut n = 0u32;
    for g in graphs {
        offsets.push(n);
        n += g.node_count() as u32;
    }
    let mut edges = Vec::new();
    for (gi, g) in graphs.iter().enumerate() {
        let off = offsets[gi];
        for v in g.nodes() {
            for &c in g.children(v) {
                edges.push((off + v.0, off + c.0));
            }
        }
    }
    let (block_of, block_count) = coarsest_partition(n as usize, &edges);
    JointPartition {
        offsets,
        block_of,
        block_count,
    }
}

/// Maximum-bisimulation partition of a single graph.
pub fn partition(g: &Apg) -> JointPartition {
    joint_partition(&[g])
}

/// Decides whether two pictures denote the same set.
pub fn bisimilar(a: &Apg, b: &Apg) -> bool {
    let p = joint_partition(&[a, b]);
    p.block(0, a.root().0) == p.block(1, b.root().0)
}

// ---------------------------------------------------------------------------
// Refinable partition with mark/split.
// ---------------------------------------------------------------------------

struct Blocks {
    elems: Vec<u32>,
    loc: Vec<u32>,
    blk: Vec<u32>,
    // (start, mid, end, xblock, idx_in_x); marked elements occupy [start, mid).
    start: Vec<u32>,
    mid: Vec<u32>,
    end: Vec<u32>,
    xblock: Vec<u32>,
    idx_in_x: Vec<u32>,
}

impl Blocks {
    fn new(n: usize) -> Self {
        Blocks {
            elems: (0..n as u32).collect(),
            loc: (0..n as u32).collect(),
            blk: vec![0; n],
            start: vec![0],
            mid: vec![0],
            end: vec![n as u32],
            xblock: vec![0],
            idx_in_x: vec![0],
        }
    }

    fn size(&self, b: u32) -> u32 {
        self.end[b as usize] - self.start[b as usize]
    }

    /// Moves `v` into the marked region of its block. Returns true when `v`
    /// is the first mark in that block.
    fn mark(&mut self, v: u32) -> bool {
        let b = self.blk[v as usize] as usize;
        let pos = self.loc[v as usize];
        let mid = self.mid[b];
        if pos < mid {
            return false; // already marked
        }
        let first = mid == self.start[b];
        let other = self.elems[mid as usize];
        self.elems.swap(pos as usize, mid as usize);
        self.loc[v as usize] = mid;
        self.loc[other as usize] = pos;
        self.mid[b] = mid + 1;
        first
    }

    /// Splits the marked prefix of `b` into a fresh block; resets marks.
    /// Returns the new block id unless the mark covered nothing or all of `b`.
    fn split(&mut self, b: u32) -> Option<u32> {
        let bi = b as usize;
        let (start, mid, end) = (self.start[bi], self.mid[bi], self.end[bi]);
        self.mid[bi] = start;
        if mid == start || mid == end {
            if mid == end {
                // fully marked: no split, clear marks
                self.mid[bi] = start;
            }
            return None;
        }
        let new = self.start.len() as u32;
        self.start.push(start);
        self.mid.push(start);
        self.end.push(mid);
        self.xblock.push(self.xblock[bi]);
        self.idx_in_x.push(u32::MAX); // fixed by caller
        for i in start..mid {
            self.blk[self.elems[i as usize] as usize] = new;
        }
        self.start[bi] = mid;
        self.mid[bi] = mid;
        Some(new)
    }

    fn members(&self, b: u32) -> &[u32] {
        &self.elems[self.start[b as usize] as usize..self.end[b as usize] as usize]
    }
}

/// Coarsest stable refinement over an edge relation on `n` nodes.
/// Returns dense block ids per node and the block count.
pub fn coarsest_partition(n: usize, edges: &[(u32, u32)]) -> (Vec<u32>, usize) {
    assert!(n > 0, "partition of an empty node set");
    let m = edges.len();

    // CSR of incoming edges plus per-edge sources.
    let mut in_start = vec![0u32; n + 1];
    for &(_, c) in edges {
        in_start[c as usize + 1] += 1;
    }
    for i in 0..n {
        in_start[i + 1] += in_start[i];
    }
    let mut in_src = vec![0u32; m];
    let mut in_edge = vec![0u32; m];
    {
        let mut cursor = in_start.clone();
        for (e, &(p, c)) in edges.iter().enumerate() {
            let slot = cursor[c as usize] as usize;
            in_src[slot] = p;
            in_edge[slot] = e as u32;
            cursor[c as usize] += 1;
        }
    }
    let mut outdeg = vec![0u32; n];
    for &(p, _) in edges {
        outdeg[p as usize] += 1;
    }

    // Edge count records: edge_rec[e] identifies count(source(e), X-block of
    // target(e)). Initially one record per node for the whole universe.
    let mut counts: Vec<u32> = outdeg.clone();
    let mut edge_rec: Vec<u32> = edges.iter().map(|&(p, _)| p).collect();

    let mut blocks = Blocks::new(n);

    // X-blocks: qlist of member Q-block ids plus worklist membership.
    let mut xq: Vec<Vec<u32>> = Vec::new();
    let mut in_work: Vec<bool> = Vec::new();
    let mut work: Vec<u32> = Vec::new();

    // Establish stability w.r.t. the universe: separate nodes with children.
    for v in 0..n as u32 {
        if outdeg[v as usize] > 0 {
            blocks.mark(v);
        }
    }
    let mut initial = vec![0u32];
    if let Some(b) = blocks.split(0) {
        initial.push(b);
    }
    for (i, &q) in initial.iter().enumerate() {
        blocks.xblock[q as usize] = 0;
        blocks.idx_in_x[q as usize] = i as u32;
    }
    xq.push(initial);
    in_work.push(false);
    if xq[0].len() >= 2 {
        in_work[0] = true;
        work.push(0);
    }

    // Scratch space for one refinement round.
    const NONE: u32 = u32::MAX;
    let mut new_rec = vec![NONE; n];
    let mut old_rec = vec![0u32; n];
    let mut touched: Vec<u32> = Vec::new();
    let mut dirty: Vec<u32> = Vec::new();

    while let Some(s) = work.pop() {
        in_work[s as usize] = false;
        let si = s as usize;
        // Smaller of the first two member blocks becomes the splitter.
        let b = {
            let (b0, b1) = (xq[si][0], xq[si][1]);
            if blocks.size(b0) <= blocks.size(b1) {
                b0
            } else {
                b1
            }
        };
        // Detach the splitter into its own X-block.
        {
            let idx = blocks.idx_in_x[b as usize] as usize;
            xq[si].swap_remove(idx);
            if idx < xq[si].len() {
                let moved = xq[si][idx];
                blocks.idx_in_x[moved as usize] = idx as u32;
            }
            let s2 = xq.len() as u32;
            xq.push(vec![b]);
            in_work.push(false);
            blocks.xblock[b as usize] = s2;
            blocks.idx_in_x[b as usize] = 0;
        }
        if xq[si].len() >= 2 {
            in_work[si] = true;
            work.push(s);
        }

        // Move edge counts from (x, S) to (x, B); remember old records so the
        // residue count(x, S - B) stays addressable.
        touched.clear();
        for &y in blocks.members(b) {
            let lo = in_start[y as usize] as usize;
            let hi = in_start[y as usize + 1] as usize;
            for k in lo..hi {
                let x = in_src[k];
                let e = in_edge[k] as usize;
                let r_old = edge_rec[e];
                if new_rec[x as usize] == NONE {
                    new_rec[x as usize] = counts.len() as u32;
                    counts.push(0);
                    old_rec[x as usize] = r_old;
                    touched.push(x);
                }
                counts[r_old as usize] -= 1;
                let r_new = new_rec[x as usize];
                counts[r_new as usize] += 1;
                edge_rec[e] = r_new;
            }
        }

        let mut attach = |blocks: &mut Blocks,
                          xq: &mut Vec<Vec<u32>>,
                          in_work: &mut Vec<bool>,
                          work: &mut Vec<u32>,
                          from: u32,
                          fresh: u32| {
            let x = blocks.xblock[from as usize];
            let xi = x as usize;
            blocks.xblock[fresh as usize] = x;
            blocks.idx_in_x[fresh as usize] = xq[xi].len() as u32;
            xq[xi].push(fresh);
            if xq[xi].len() == 2 && !in_work[xi] {
                in_work[xi] = true;
                work.push(x);
            }
        };

        // Split by membership in the preimage of B.
        dirty.clear();
        for &x in &touched {
            if blocks.mark(x) {
                dirty.push(blocks.blk[x as usize]);
            }
        }
        for i in 0..dirty.len() {
            let d = dirty[i];
            if let Some(fresh) = blocks.split(d) {
                attach(&mut blocks, &mut xq, &mut in_work, &mut work, d, fresh);
            }
        }

        // Split the preimage parts by "still has an edge into S - B".
        dirty.clear();
        for &x in &touched {
            if counts[old_rec[x as usize] as usize] > 0 && blocks.mark(x) {
                dirty.push(blocks.blk[x as usize]);
            }
        }
        for i in 0..dirty.len() {
            let d = dirty[i];
            if let Some(fresh) = blocks.split(d) {
                attach(&mut blocks, &mut xq, &mut in_work, &mut work, d, fresh);
            }
        }

        for &x in &touched {
            new_rec[x as usize] = NONE;
        }
    }

    // Renumber blocks densely in order of least member.
    let block_total = blocks.start.len();
    let mut dense = vec![u32::MAX; block_total];
    let mut next = 0u32;
    let mut out = vec![0u32; n];
    for v in 0..n {
        let b = blocks.blk[v] as usize;
        if dense[b] == u32::MAX {
            dense[b] = next;
            next += 1;
        }
        out[v] = dense[b];
    }
    (out, next as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apg(n: usize, edges: &[(u32, u32)]) -> Apg {
        Apg::new(n, edges.iter().copied(), 0).unwrap()
    }

    #[test]
    fn self_loop_variants_collapse() {
        // One self-loop vs. a two-cycle vs. a node pointing into a self-loop:
        // all picture the same self-membered singleton.
        let omega = apg(1, &[(0, 0)]);
        let two_cycle = apg(2, &[(0, 1), (1, 0)]);
        let into_loop = apg(2, &[(0, 1), (1, 1)]);
        assert!(bisimilar(&omega, &two_cycle));
        assert!(bisimilar(&omega, &into_loop));
        assert!(bisimilar(&two_cycle, &into_loop));
    }

    #[test]
    fn empty_vs_loop() {
        let empty = apg(1, &[]);
        let omega = apg(1, &[(0, 0)]);
        assert!(bisimilar(&empty, &empty));
        assert!(!bisimilar(&empty, &omega));
    }

    #[test]
    fn chain_nodes_all_distinct() {
        let g = apg(3, &[(0, 1), (1, 2)]);
        let p = partition(&g);
        assert_eq!(p.block_count(), 3);
    }

    #[test]
    fn duplicated_child_is_merged() {
        // Root with two children both picturing the empty set.
        let dup = apg(3, &[(0, 1), (0, 2)]);
        let single = apg(2, &[(0, 1)]);
        assert!(bisimilar(&dup, &single));
        let p = partition(&dup);
        assert_eq!(p.block(0, 1), p.block(0, 2));
    }

    #[test]
    fn ordinal_two_pictures_agree() {
        // Shared picture of {0, {0}} vs. the unfolded four-node picture.
        let shared = apg(3, &[(0, 1), (0, 2), (2, 1)]);
        let unfolded = apg(4, &[(0, 1), (0, 2), (2, 3)]);
        assert!(bisimilar(&shared, &unfolded));
    }
}
