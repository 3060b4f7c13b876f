//! Recognition of generalized bipartite series-parallel graphs.
//!
//! Memoized exhaustive decomposition over (vertex subset, top, bottom)
//! states, complete at desk scale. A state additionally tracks whether the
//! direct top-bottom edge (when the graph has one) belongs to the subgraph:
//! a parallel split must hand that edge to exactly one child.

use std::collections::HashMap;

use super::{SPTree, SpVertex};
use crate::hypergraph::PartiteHypergraph;
use crate::{Error, Result};

const MAX_PARSE_VERTICES: usize = 18;

/// Parses a connected bipartite graph into an oriented series-parallel tree
/// whose flattening equals the graph, or `None` when no orientation admits
/// one (equivalently, treewidth exceeds two).
pub fn sp_parse(g: &PartiteHypergraph) -> Result<Option<SPTree>> {
    if g.arity() != 2 {
        return Err(Error::BadParameter("series-parallel parsing needs a bipartite graph".into()));
    }
    if g.edge_count() == 0 {
        return Err(Error::Invalid("graph has no edges".into()));
    }
    if g.connected_components().len() != 1 {
        return Err(Error::Invalid("graph is disconnected".into()));
    }
    let vertices: Vec<SpVertex> = (0..2)
        .flat_map(|s| g.side(s).iter().map(move |&v| (s, v)))
        .collect();
    let nv = vertices.len();
    if nv > MAX_PARSE_VERTICES {
        return Err(Error::BudgetExceeded {
            needed: 1u128 << nv,
            budget: 1 << MAX_PARSE_VERTICES,
        });
    }
    let index: HashMap<SpVertex, usize> =
        vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = vec![0u32; nv];
    for e in g.edges() {
        let a = index[&(0, e[0])];
        let b = index[&(1, e[1])];
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let mut ctx = Ctx {
        vertices,
        adj,
        memo: HashMap::new(),
    };
    let full = (1u32 << nv) - 1;
    for u in 0..nv {
        for v in 0..nv {
            if u == v {
                continue;
            }
            let incl = ctx.adj[u] & (1 << v) != 0;
            if let Some(t) = ctx.parse(full, u, v, incl) {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}

struct Ctx {
    vertices: Vec<SpVertex>,
    adj: Vec<u32>,
    memo: HashMap<(u32, u8, u8, bool), Option<SPTree>>,
}

impl Ctx {
    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    /// Is (mask, u, v) with the direct edge iff `incl` a series-parallel
    /// oriented graph? `incl` is false whenever the direct edge is absent.
    fn parse(&mut self, mask: u32, u: usize, v: usize, incl: bool) -> Option<SPTree> {
        debug_assert!(mask & (1 << u) != 0 && mask & (1 << v) != 0);
        let incl = incl && self.has_edge(u, v);
        let key = (mask, u as u8, v as u8, incl);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        self.memo.insert(key, None); // cycle guard; real value set below
        let result = self.parse_uncached(mask, u, v, incl);
        self.memo.insert(key, result.clone());
        result
    }

    fn parse_uncached(&mut self, mask: u32, u: usize, v: usize, incl: bool) -> Option<SPTree> {
        let interior = mask & !(1 << u) & !(1 << v);
        // single edge
        if interior == 0 && incl && mask == (1 << u) | (1 << v) {
            return Some(SPTree::Edge {
                top: self.vertices[u],
                bottom: self.vertices[v],
            });
        }

        // series split at a cut vertex w; impossible when the direct edge is
        // carried (it would cross the cut). When the subgraph excludes a
        // present (u, v) edge, that edge must not count as a cross edge.
        if !incl {
            let excluded = if self.has_edge(u, v) { Some((u, v)) } else { None };
            let mut w_bits = interior;
            while w_bits != 0 {
                let w = w_bits.trailing_zeros() as usize;
                w_bits &= w_bits - 1;
                // S1 = {u, w} ∪ sub, S2 = rest ∪ {w}
                let free = interior & !(1 << w);
                let mut sub = free;
                loop {
                    let s1 = sub | (1 << u) | (1 << w);
                    let s2 = (mask & !s1) | (1 << w);
                    if self.no_cross_excluding(s1 & !(1 << w), s2 & !(1 << w), excluded) {
                        let d1 = self.has_edge(u, w);
                        let d2 = self.has_edge(w, v);
                        if let Some(upper) = self.parse(s1, u, w, d1) {
                            if let Some(lower) = self.parse(s2, w, v, d2) {
                                return Some(SPTree::Series {
                                    upper: Box::new(upper),
                                    lower: Box::new(lower),
                                });
                            }
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & free;
                }
            }
        }

        // generalized composition: dangler at the bottom or at the top
        for at_top in [false, true] {
            let attach = if at_top { u } else { v };
            // dangler occupies sub ∪ {attach}, primary the rest
            let free = interior;
            let mut sub = free;
            loop {
                if sub != 0 {
                    let dangler_mask = sub | (1 << attach);
                    let primary_mask = (mask & !sub) | (1 << attach);
                    if self.no_cross(dangler_mask & !(1 << attach), primary_mask & !(1 << attach)) {
                        if let Some(primary) = self.parse(primary_mask, u, v, incl) {
                            // any endpoint works for the dangler
                            let mut ends = sub;
                            while ends != 0 {
                                let w = ends.trailing_zeros() as usize;
                                ends &= ends - 1;
                                let d = self.has_edge(attach, w);
                                if let Some(dangler) = self.parse(dangler_mask, attach, w, d) {
                                    return Some(SPTree::Generalized {
                                        primary: Box::new(primary),
                                        dangler: Box::new(dangler),
                                        at_top,
                                    });
                                }
                            }
                        }
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
        }

        // parallel split: interiors partition, the direct edge (when
        // carried) goes to the first child
        let free = interior;
        let mut sub = free;
        loop {
            let s1 = sub | (1 << u) | (1 << v);
            let s2 = (mask & !sub) | (1 << u) | (1 << v);
            // degenerate self-splits die on the memo's cycle guard
            if self.no_cross(sub, free & !sub) {
                let first = self.parse(s1, u, v, incl);
                if let Some(first) = first {
                    if let Some(second) = self.parse(s2, u, v, false) {
                        let candidate = SPTree::Parallel {
                            first: Box::new(first),
                            second: Box::new(second),
                        };
                        if candidate.validate().is_ok() {
                            return Some(candidate);
                        }
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        None
    }

    /// No graph edges between the two vertex masks. Generalized and
    /// parallel splits keep u and v out of the tested masks, so the direct
    /// edge needs no handling there.
    fn no_cross(&self, a: u32, b: u32) -> bool {
        self.no_cross_excluding(a, b, None)
    }

    fn no_cross_excluding(&self, a: u32, b: u32, excl: Option<(usize, usize)>) -> bool {
        let mut bits = a;
        while bits != 0 {
            let x = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let mut nbrs = self.adj[x] & b;
            if let Some((u, v)) = excl {
                if x == u {
                    nbrs &= !(1 << v);
                } else if x == v {
                    nbrs &= !(1 << u);
                }
            }
            if nbrs != 0 {
                return false;
            }
        }
        true
    }
}
