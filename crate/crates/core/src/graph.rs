//! Accessible pointed graphs: the raw pictures of sets.
//!
//! An [`Apg`] is a finite directed graph with a distinguished root from which
//! every node is reachable. An edge `parent -> child` reads "the set at
//! `child` is a member of the set at `parent`".

use thiserror::Error;

/// Dense node identifier, valid only within the graph that issued it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Validation failures for graphs that do not satisfy the [`Apg`] invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApgError {
    #[error("graph has no nodes")]
    Empty,
    #[error("root {root} out of range (graph has {nodes} nodes)")]
    RootOutOfRange { root: u32, nodes: u32 },
    #[error("dangling edge ({parent}, {child}): node id out of range")]
    DanglingEdge { parent: u32, child: u32 },
    #[error("node {node} is not reachable from the root")]
    Unreachable { node: u32 },
}

/// Accessible pointed graph.
///
/// Invariants held after construction: the root exists, every node is
/// reachable from it, per-node child lists are sorted, and (parent, child)
/// pairs are unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Apg {
    children: Vec<Vec<NodeId>>,
    root: NodeId,
}

impl Apg {
    /// Builds a graph from an explicit node count and edge list, rejecting
    /// malformed input. Duplicate edges are collapsed.
    pub fn new(
        nodes: usize,
        edges: impl IntoIterator<Item = (u32, u32)>,
        root: u32,
    ) -> Result<Self, ApgError> {
        if nodes == 0 {
            return Err(ApgError::Empty);
        }
        let n = u32::try_from(nodes).expect("node count fits in u32");
        if root >= n {
            return Err(ApgError::RootOutOfRange { root, nodes: n });
        }
        let mut children = vec![Vec::new(); nodes];
        for (p, c) in edges {
            if p >= n || c >= n {
                return Err(ApgError::DanglingEdge { parent: p, child: c });
            }
            children[p as usize].push(NodeId(c));
        }
        for ch in &mut children {
            ch.sort_unstable();
            ch.dedup();
        }
        let g = Apg {
            children,
            root: NodeId(root),
        };
        if let Some(node) = g.first_unreachable() {
            return Err(ApgError::Unreachable { node });
        }
        Ok(g)
    }

    /// Builds the graph induced by the nodes reachable from `root`, silently
    /// discarding the rest. Node ids are remapped in discovery order.
    pub fn from_reachable(
        nodes: usize,
        edges: &[(u32, u32)],
        root: u32,
    ) -> Result<Self, ApgError> {
        if nodes == 0 {
            return Err(ApgError::Empty);
        }
        let n = u32::try_from(nodes).expect("node count fits in u32");
        if root >= n {
            return Err(ApgError::RootOutOfRange { root, nodes: n });
        }
        let mut adj = vec![Vec::new(); nodes];
        for &(p, c) in edges {
            if p >= n || c >= n {
                return Err(ApgError::DanglingEdge { parent: p, child: c });
            }
            adj[p as usize].push(c);
        }
        // BFS remap.
        let mut map = vec![u32::MAX; nodes];
        let mut order = vec![root];
        map[root as usize] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &c in &adj[v as usize] {
                if map[c as usize] == u32::MAX {
                    map[c as usize] = order.len() as u32;
                    order.push(c);
                }
            }
        }
        let mut children = vec![Vec::new(); order.len()];
        for (new, &old) in order.iter().enumerate() {
            let ch = &mut children[new];
            ch.extend(adj[old as usize].iter().map(|&c| NodeId(map[c as usize])));
            ch.sort_unstable();
            ch.dedup();
        }
        Ok(Apg {
            children,
            root: NodeId(0),
        })
    }

    pub fn node_count(&self) -> usize {
        self.children.len()
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.children.len() as u32).map(NodeId)
    }

    /// Sorted, duplicate-free child list of `v`.
    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v.index()]
    }

    /// All edges as (parent, child) pairs, sorted.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for v in self.nodes() {
            for &c in self.children(v) {
                out.push((v, c));
            }
        }
        out
    }

    /// True if the graph contains a directed cycle.
    pub fn has_cycle(&self) -> bool {
        // Iterative three-color DFS.
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let n = self.node_count();
        let mut color = vec![WHITE; n];
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for start in 0..n {
            if color[start] != WHITE {
                continue;
            }
            color[start] = GRAY;
            stack.push((start, 0));
            while let Some(&mut (v, ref mut i)) = stack.last_mut() {
                if *i < self.children[v].len() {
                    let c = self.children[v][*i].index();
                    *i += 1;
                    match color[c] {
                        WHITE => {
                            color[c] = GRAY;
                            stack.push((c, 0));
                        }
                        GRAY => return true,
                        _ => {}
                    }
                } else {
                    color[v] = BLACK;
                    stack.pop();
                }
            }
        }
        false
    }

    fn first_unreachable(&self) -> Option<u32> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut stack = vec![self.root.index()];
        seen[self.root.index()] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &c in &self.children[v] {
                if !seen[c.index()] {
                    seen[c.index()] = true;
                    count += 1;
                    stack.push(c.index());
                }
            }
        }
        if count == n {
            None
        } else {
            seen.iter().position(|&s| !s).map(|i| i as u32)
        }
    }
}

/// Incremental builder used when composing graphs out of existing ones.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    children: Vec<Vec<u32>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self) -> u32 {
        self.children.push(Vec::new());
        (self.children.len() - 1) as u32
    }

    pub fn add_edge(&mut self, parent: u32, child: u32) {
        self.children[parent as usize].push(child);
    }

    /// Copies `g` into the builder and returns the new id of its root.
    pub fn embed(&mut self, g: &Apg) -> u32 {
        let offset = self.children.len() as u32;
        for v in g.nodes() {
            let id = self.add_node();
            debug_assert_eq!(id, offset + v.0);
            for &c in g.children(v) {
                self.children[id as usize].push(offset + c.0);
            }
        }
        offset + g.root().0
    }

    pub fn node_count(&self) -> usize {
        self.children.len()
    }

    /// Finishes the graph rooted at `root`, keeping only the reachable part.
    pub fn into_apg(self, root: u32) -> Apg {
        self.clone_into_apg(root)
    }

    /// Like [`GraphBuilder::into_apg`] but leaves the builder usable, for
    /// callers that need several roots over the same node pool.
    pub fn clone_into_apg(&self, root: u32) -> Apg {
        let nodes = self.children.len();
        let mut edges = Vec::new();
        for (p, ch) in self.children.iter().enumerate() {
            for &c in ch {
                edges.push((p as u32, c));
            }
        }
        Apg::from_reachable(nodes, &edges, root).expect("builder produces valid graphs")
    }
}
