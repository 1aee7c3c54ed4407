//! Stratifiability: integer levels on names with `level(x) + 1 = level(y)`
//! across each membership atom and equal levels across each equality atom.
//!
//! Each atom is a difference constraint, so the formula is stratified
//! exactly when its constraint graph has no cycle of nonzero total weight.
//! Levels are found by potential propagation per connected component; a
//! failure is reported as an explicit cycle witness.

use std::collections::BTreeMap;

use super::ast::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    Membership,
    Equality,
}

/// One traversal step of a contradictory cycle. `lhs`/`rhs` give the atom as
/// written; `weight` is the level change in traversal direction, so the
/// steps of a witness sum to a nonzero value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStep {
    pub lhs: String,
    pub rhs: String,
    pub kind: AtomKind,
    pub reversed: bool,
    pub weight: i64,
}

impl std::fmt::Display for WitnessStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let atom = match self.kind {
            AtomKind::Membership => format!("{} in {}", self.lhs, self.rhs),
            AtomKind::Equality => format!("{} = {}", self.lhs, self.rhs),
        };
        let dir = if self.reversed { "backward" } else { "forward" };
        write!(f, "{atom} ({dir}, {:+})", self.weight)
    }
}

/// Outcome of [`stratify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StratResult {
    /// A satisfying level assignment; each component is shifted so its
    /// minimum level is 0.
    Stratified { levels: BTreeMap<String, i64> },
    /// A cycle of atoms whose weights sum to a nonzero value.
    Unstratified { cycle: Vec<WitnessStep> },
}

impl StratResult {
    pub fn is_stratified(&self) -> bool {
        matches!(self, StratResult::Stratified { .. })
    }
}

struct Edge {
    to: usize,
    weight: i64,
    atom: usize,
    reversed: bool,
}

/// Decides stratifiability of `f` and produces either levels or a witness.
pub fn stratify(f: &Formula) -> StratResult {
    let atoms = f.atoms();

    // Index every name, including quantified ones without atoms.
    let mut names: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for name in all_names(f) {
        if !index.contains_key(&name) {
            index.insert(name.clone(), names.len());
            names.push(name);
        }
    }

    let mut adj: Vec<Vec<Edge>> = vec![Vec::new(); names.len()];
    for (i, (a, b, member)) in atoms.iter().enumerate() {
        let (ai, bi) = (index[a], index[b]);
        let w = if *member { 1 } else { 0 };
        adj[ai].push(Edge { to: bi, weight: w, atom: i, reversed: false });
        adj[bi].push(Edge { to: ai, weight: -w, atom: i, reversed: true });
    }

    let n = names.len();
    let mut level = vec![0i64; n];
    let mut visited = vec![false; n];
    // BFS tree: parent node and the traversed edge, for witness rebuilding.
    let mut parent: Vec<Option<(usize, usize, bool, i64)>> = vec![None; n];

    // Components in sorted-name order for determinism.
    let mut start_order: Vec<usize> = (0..n).collect();
    start_order.sort_by(|&a, &b| names[a].cmp(&names[b]));

    for &start in &start_order {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        level[start] = 0;
        let mut component = vec![start];
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for e in &adj[u] {
                if !visited[e.to] {
                    visited[e.to] = true;
                    level[e.to] = level[u] + e.weight;
                    parent[e.to] = Some((u, e.atom, e.reversed, e.weight));
                    component.push(e.to);
                    queue.push_back(e.to);
                } else if level[e.to] != level[u] + e.weight {
                    let cycle = build_witness(&atoms, &parent, u, e);
                    return StratResult::Unstratified { cycle };
                }
            }
        }
        let min = component.iter().map(|&v| level[v]).min().unwrap_or(0);
        for &v in &component {
            level[v] -= min;
        }
    }

    let levels = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), level[i]))
        .collect();
    StratResult::Stratified { levels }
}

fn all_names(f: &Formula) -> Vec<String> {
    fn walk(f: &Formula, out: &mut Vec<String>) {
        match f {
            Formula::Member(a, b) | Formula::Equal(a, b) => {
                out.push(a.clone());
                out.push(b.clone());
            }
            Formula::Not(p) => walk(p, out),
            Formula::And(p, q)
            | Formula::Or(p, q)
            | Formula::Implies(p, q)
            | Formula::Iff(p, q) => {
                walk(p, out);
                walk(q, out);
            }
            Formula::Forall(v, p) | Formula::Exists(v, p) => {
                out.push(v.clone());
                walk(p, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(f, &mut out);
    out
}

fn step(atoms: &[(String, String, bool)], atom: usize, reversed: bool, weight: i64) -> WitnessStep {
    let (lhs, rhs, member) = &atoms[atom];
    WitnessStep {
        lhs: lhs.clone(),
        rhs: rhs.clone(),
        kind: if *member { AtomKind::Membership } else { AtomKind::Equality },
        reversed,
        weight,
    }
}

/// Closes the cycle through the BFS tree: tree path from the fork to `u`,
/// the conflicting edge `u -> e.to`, then the tree path from `e.to` back up.
fn build_witness(
    atoms: &[(String, String, bool)],
    parent: &[Option<(usize, usize, bool, i64)>],
    u: usize,
    e: &Edge,
) -> Vec<WitnessStep> {
    let chain = |mut v: usize| {
        let mut path = Vec::new(); // (node, atom, reversed, weight) edges up to the root
        let mut nodes = vec![v];
        while let Some((p, atom, rev, w)) = parent[v] {
            path.push((atom, rev, w));
            v = p;
            nodes.push(v);
        }
        (nodes, path)
    };
    let (u_nodes, u_path) = chain(u);
    let (v_nodes, v_path) = chain(e.to);
    // Lowest common ancestor: first node of u's chain present in v's chain.
    let (mut cut_u, mut cut_v) = (u_path.len(), v_path.len());
    for (i, n) in u_nodes.iter().enumerate() {
        if let Some(j) = v_nodes.iter().position(|m| m == n) {
            cut_u = i;
            cut_v = j;
            break;
        }
    }
    let mut steps = Vec::new();
    // Fork down to u: tree edges in discovery direction, reversed iteration.
    for &(atom, rev, w) in u_path[..cut_u].iter().rev() {
        steps.push(step(atoms, atom, rev, w));
    }
    // The conflicting edge itself.
    steps.push(step(atoms, e.atom, e.reversed, e.weight));
    // e.to back up to the fork: tree edges flipped.
    for &(atom, rev, w) in v_path[..cut_v].iter() {
        steps.push(step(atoms, atom, !rev, -w));
    }
    debug_assert_ne!(
        steps.iter().map(|s| s.weight).sum::<i64>(),
        0,
        "witness must contradict"
    );
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn levels(text: &str) -> BTreeMap<String, i64> {
        match stratify(&parse_formula(text).unwrap()) {
            StratResult::Stratified { levels } => levels,
            StratResult::Unstratified { cycle } => {
                panic!("expected stratified, got cycle {cycle:?}")
            }
        }
    }

    fn cycle(text: &str) -> Vec<WitnessStep> {
        match stratify(&parse_formula(text).unwrap()) {
            StratResult::Unstratified { cycle } => cycle,
            StratResult::Stratified { levels } => {
                panic!("expected unstratified, got levels {levels:?}")
            }
        }
    }

    #[test]
    fn reflexive_equality_is_stratified() {
        let l = levels("x = x");
        assert_eq!(l.get("x"), Some(&0));
    }

    #[test]
    fn self_membership_gives_weight_one_cycle() {
        let c = cycle("~(x in x)");
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].weight, 1);
        assert_eq!(c[0].kind, AtomKind::Membership);
        assert_eq!((c[0].lhs.as_str(), c[0].rhs.as_str()), ("x", "x"));
    }

    #[test]
    fn membership_chain_levels() {
        let l = levels("exists y. (x in y & y in z)");
        assert_eq!(l.get("x"), Some(&0));
        assert_eq!(l.get("y"), Some(&1));
        assert_eq!(l.get("z"), Some(&2));
    }

    #[test]
    fn membership_raises_by_one() {
        let l = levels("x in y");
        assert_eq!(l.get("x"), Some(&0));
        assert_eq!(l.get("y"), Some(&1));
    }

    #[test]
    fn equality_keeps_level() {
        let l = levels("x in y & y = z");
        assert_eq!(l.get("z"), Some(&1));
    }

    #[test]
    fn two_cycle_weight_two() {
        let c = cycle("x in y & y in x");
        let total: i64 = c.iter().map(|s| s.weight).sum();
        assert_ne!(total, 0);
        assert_eq!(total.abs(), 2);
    }

    #[test]
    fn components_normalize_to_zero() {
        let l = levels("x in y & u = v");
        assert_eq!(l.get("u"), Some(&0));
        assert_eq!(l.get("v"), Some(&0));
        assert_eq!(l.get("x"), Some(&0));
    }

    #[test]
    fn quantified_unused_variable_gets_level_zero() {
        let l = levels("forall q. x = x");
        assert_eq!(l.get("q"), Some(&0));
    }

    #[test]
    fn negation_does_not_change_the_verdict() {
        for text in ["x in y", "~(x in x)", "x in y & y in z", "x = x"] {
            let f = parse_formula(text).unwrap();
            let neg = Formula::Not(Box::new(f.clone()));
            assert_eq!(
                stratify(&f).is_stratified(),
                stratify(&neg).is_stratified(),
                "{text}"
            );
        }
    }

    #[test]
    fn mixed_zero_weight_cycle_is_fine() {
        // x = y and y = x form a cycle of weight 0: still stratified.
        let l = levels("x = y & y = x");
        assert_eq!(l.get("x"), l.get("y"));
    }
}
