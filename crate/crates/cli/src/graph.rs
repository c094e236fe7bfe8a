//! Flop graph on the projective fans over a fixed ray set.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use toric_flops_core::certificate::log_canonical;
use toric_flops_core::{
    execute_flop, find_relative_ample, intersect, mori_extremal_classes, BaseCone, Boundary, Fan, IntVec, ToricDivisor,
};

use crate::enumerate::{enumerate_triangulations, EnumerateError};

#[derive(Debug, Clone)]
pub struct FlopEdge {
    pub a: usize,
    pub b: usize,
    /// Relation of the flopped class, as seen from `a`.
    pub class: IntVec,
    /// Whether `(K+B)·R = 0`.
    pub k_trivial: bool,
}

#[derive(Debug, Clone)]
pub struct FlopGraph {
    pub nodes: Vec<Fan>,
    /// Relatively ample divisor on each node.
    pub witnesses: Vec<ToricDivisor>,
    pub edges: Vec<FlopEdge>,
    /// Flops whose result was not among the nodes.
    pub escapes: usize,
}

/// Short hash of the sorted cone list.
pub fn node_label(fan: &Fan) -> String {
    let mut text = String::new();
    for cone in fan.canonical() {
        for ray in cone {
            let parts: Vec<String> = ray.iter().map(ToString::to_string).collect();
            let _ = write!(text, "({})", parts.join(","));
        }
        text.push(';');
    }
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

impl FlopGraph {
    pub fn neighbours(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |e| match (e.a == node, e.b == node) {
            (true, _) => Some(e.b),
            (_, true) => Some(e.a),
            _ => None,
        })
    }

    /// Connected components as sorted node lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.nodes.len()];
        let mut out = Vec::new();
        for start in 0..self.nodes.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(n) = queue.pop_front() {
                for m in self.neighbours(n) {
                    if !seen[m] {
                        seen[m] = true;
                        comp.push(m);
                        queue.push_back(m);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn node_of(&self, fan: &Fan) -> Option<usize> {
        self.nodes.iter().position(|n| n.same_as(fan))
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph flops {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", node_label(n));
        }
        for e in &self.edges {
            let style = if e.k_trivial { "" } else { " [style=dashed]" };
            let _ = writeln!(s, "  n{} -- n{}{style};", e.a, e.b);
        }
        s.push_str("}\n");
        s
    }
}

/// Nodes from [`enumerate_triangulations`]; an edge for every extremal class
/// of a node whose circuit flip lands on another node.
pub fn flop_graph(base: &BaseCone, rays: &[IntVec], boundary: &Boundary) -> Result<FlopGraph, EnumerateError> {
    let nodes = enumerate_triangulations(base, rays)?;
    let index: BTreeMap<Vec<Vec<IntVec>>, usize> = nodes.iter().enumerate().map(|(i, f)| (f.canonical(), i)).collect();
    let witnesses = nodes.iter().map(|f| find_relative_ample(f).expect("enumerated fans are projective")).collect();
    let mut edges = Vec::new();
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut escapes = 0;
    for (i, fan) in nodes.iter().enumerate() {
        let Ok(mori) = mori_extremal_classes(fan) else { continue };
        let kb = (boundary.coeffs().len() == fan.num_rays()).then(|| log_canonical(fan, fan, boundary)).flatten();
        for class in &mori.extreme {
            let Ok(after) = execute_flop(fan, class) else { continue };
            let Some(&j) = index.get(&after.canonical()) else {
                escapes += 1;
                continue;
            };
            if !seen.insert((i.min(j), i.max(j))) {
                continue;
            }
            let k_trivial =
                kb.as_ref().and_then(|d| intersect(fan, d, class).ok()).is_some_and(|x| num_traits::Zero::is_zero(&x));
            edges.push(FlopEdge { a: i, b: j, class: class.relation.clone(), k_trivial });
        }
    }
    Ok(FlopGraph { nodes, witnesses, edges, escapes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use toric_flops_core::arith::int_vec;

    #[test]
    fn conifold_graph() {
        let r: Vec<IntVec> = [[0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]].iter().map(|v| int_vec(v)).collect();
        let base = BaseCone::new(r.clone()).unwrap();
        let g = flop_graph(&base, &r, &Boundary::zero(4)).unwrap();
        assert_eq!(g.nodes.len(), 2);
        assert_eq!(g.edges.len(), 1);
        assert!(g.edges[0].k_trivial);
        assert!(g.is_connected());
        assert_eq!(g.escapes, 0);
        let dot = g.to_dot();
        assert!(dot.starts_with("graph flops {"));
        assert!(dot.contains("n0 -- n1;"));
        assert_ne!(node_label(&g.nodes[0]), node_label(&g.nodes[1]));
    }

    #[test]
    fn single_node() {
        let r: Vec<IntVec> = [[1, 0, 0], [0, 1, 0], [0, 0, 1]].iter().map(|v| int_vec(v)).collect();
        let base = BaseCone::new(r.clone()).unwrap();
        let g = flop_graph(&base, &r, &Boundary::zero(3)).unwrap();
        assert_eq!((g.nodes.len(), g.edges.len()), (1, 0));
        assert!(g.is_connected());
    }
}
