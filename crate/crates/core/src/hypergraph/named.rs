//! Named hypergraph families used throughout the workbench.

use std::collections::BTreeSet;

use super::{PartiteHypergraph, VertexId};
use crate::{Error, Result};

/// Families with deterministic vertex ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedHypergraph {
    /// `Q̄_r`: r edges, the j-th having 1 in position j and 0 elsewhere.
    Qr(usize),
    /// Cycle with shortcuts `𝔠_n`: vertices 0..n, edges at circular
    /// distances {1, 3, n-3, n-1}; returned 2-partite via even/odd classes.
    CycleShortcuts(usize),
    /// Complete hypergraph with the given side sizes.
    Complete(Vec<usize>),
    /// Set graph `𝔖_k`: left side [k], right side the nonempty subsets of
    /// [k] (encoded as bitmasks), edges by membership.
    SetGraph(usize),
}

impl NamedHypergraph {
    pub fn build(&self) -> Result<PartiteHypergraph> {
        match self {
            NamedHypergraph::Qr(r) => {
                let r = *r;
                if r < 2 {
                    return Err(Error::BadParameter(format!("Qr needs r >= 2, got {r}")));
                }
                let sides = vec![BTreeSet::from([0, 1]); r];
                let mut edges = BTreeSet::new();
                for j in 0..r {
                    let mut e = vec![0 as VertexId; r];
                    e[j] = 1;
                    edges.insert(e);
                }
                PartiteHypergraph::new(r, sides, edges)
            }
            NamedHypergraph::CycleShortcuts(n) => {
                let n = *n;
                if n < 8 || n % 2 != 0 {
                    return Err(Error::BadParameter(format!(
                        "cycle with shortcuts needs even n >= 8, got {n}"
                    )));
                }
                // side 0 holds the even vertices, side 1 the odd ones; every
                // edge distance is odd, so this is the unique 2-coloring.
                let evens: BTreeSet<VertexId> = (0..n as u32).filter(|v| v % 2 == 0).collect();
                let odds: BTreeSet<VertexId> = (0..n as u32).filter(|v| v % 2 == 1).collect();
                let mut edges = BTreeSet::new();
                for u in 0..n as i64 {
                    for s in [-3i64, -1, 1, 3] {
                        let v = (u + s).rem_euclid(n as i64);
                        let (e, o) = if u % 2 == 0 { (u, v) } else { (v, u) };
                        edges.insert(vec![e as VertexId, o as VertexId]);
                    }
                }
                PartiteHypergraph::new(2, vec![evens, odds], edges)
            }
            NamedHypergraph::Complete(sizes) => {
                if sizes.is_empty() || sizes.iter().any(|&s| s < 1) {
                    return Err(Error::BadParameter(
                        "complete hypergraph needs sizes >= 1".into(),
                    ));
                }
                let sides: Vec<BTreeSet<VertexId>> = sizes
                    .iter()
                    .map(|&s| (0..s as u32).collect())
                    .collect();
                let mut edges = BTreeSet::new();
                let mut tuple = vec![0 as VertexId; sizes.len()];
                loop {
                    edges.insert(tuple.clone());
                    let mut j = sizes.len();
                    loop {
                        if j == 0 {
                            return PartiteHypergraph::new(sizes.len(), sides, edges);
                        }
                        j -= 1;
                        tuple[j] += 1;
                        if (tuple[j] as usize) < sizes[j] {
                            break;
                        }
                        tuple[j] = 0;
                    }
                }
            }
            NamedHypergraph::SetGraph(k) => {
                let k = *k;
                if k < 1 || k > 20 {
                    return Err(Error::BadParameter(format!(
                        "set graph needs 1 <= k <= 20, got {k}"
                    )));
                }
                let left: BTreeSet<VertexId> = (1..=k as u32).collect();
                let right: BTreeSet<VertexId> = (1..(1u32 << k)).collect();
                let mut edges = BTreeSet::new();
                for x in 1..=k as u32 {
                    for s in 1..(1u32 << k) {
                        if s & (1 << (x - 1)) != 0 {
                            edges.insert(vec![x, s]);
                        }
                    }
                }
                PartiteHypergraph::new(2, vec![left, right], edges)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_shortcuts_12() {
        let g = NamedHypergraph::CycleShortcuts(12).build().unwrap();
        assert_eq!(g.edge_count(), 24);
        // vertex 0 adjacent to {1, 3, 9, 11}
        let nbrs: BTreeSet<u32> = g
            .edges()
            .iter()
            .filter(|e| e[0] == 0)
            .map(|e| e[1])
            .collect();
        assert_eq!(nbrs, BTreeSet::from([1, 3, 9, 11]));
        assert!(g.is_question_set());
    }

    #[test]
    fn set_graph_2() {
        let g = NamedHypergraph::SetGraph(2).build().unwrap();
        assert_eq!(g.side(0).len(), 2);
        assert_eq!(g.side(1).len(), 3);
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn complete_sizes() {
        let g = NamedHypergraph::Complete(vec![2, 3]).build().unwrap();
        assert_eq!(g.edge_count(), 6);
        let g3 = NamedHypergraph::Complete(vec![2, 2, 2]).build().unwrap();
        assert_eq!(g3.edge_count(), 8);
    }

    #[test]
    fn bad_parameters() {
        assert!(NamedHypergraph::Qr(1).build().is_err());
        assert!(NamedHypergraph::CycleShortcuts(7).build().is_err());
        assert!(NamedHypergraph::CycleShortcuts(6).build().is_err());
        assert!(NamedHypergraph::Complete(vec![]).build().is_err());
        assert!(NamedHypergraph::SetGraph(0).build().is_err());
    }
}
