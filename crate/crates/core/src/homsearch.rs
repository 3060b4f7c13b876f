//! Backtracking search for collapse homomorphisms.
//!
//! A collapse of `G` onto its section `kept` is a homomorphism
//! `G → section(G, kept)` that is the identity on `kept`. The search assigns
//! removed vertices in increasing `(side, id)` order and tries kept targets
//! in increasing id order, so repeated queries return the identical witness.
//! Pruning only skips assignments that already violate an edge, hence the
//! search is sound and complete.

use std::collections::BTreeMap;

use crate::hypergraph::{Homomorphism, PartiteHypergraph, SideSubset, VertexId};
use crate::{Error, Result};

/// A collapse query; `forced` pins chosen removed vertices to fixed targets.
#[derive(Clone, Debug)]
pub struct CollapseQuery<'a> {
    pub graph: &'a PartiteHypergraph,
    pub kept: &'a SideSubset,
    pub forced: BTreeMap<(usize, VertexId), VertexId>,
}

/// Searches for a homomorphism `g → section(g, kept)` that is the identity
/// on `kept`. Returns the lexicographically least witness, or `None`.
pub fn find_collapse(g: &PartiteHypergraph, kept: &SideSubset) -> Option<Homomorphism> {
    let q = CollapseQuery {
        graph: g,
        kept,
        forced: BTreeMap::new(),
    };
    solve(&q, |_| true)
}

/// Searches for a collapse in which at least one vertex of `t` and at least
/// one removed vertex outside `t` map away from their natural partners.
///
/// `natural` must give the partner (a kept vertex on the same side) of every
/// removed vertex; `t` must consist of removed vertices.
pub fn find_unnatural_collapse(
    g: &PartiteHypergraph,
    kept: &SideSubset,
    t: &SideSubset,
    natural: &BTreeMap<(usize, VertexId), VertexId>,
) -> Result<Option<Homomorphism>> {
    let removed = removed_vertices(g, kept);
    for &(j, v) in &removed {
        match natural.get(&(j, v)) {
            Some(&w) if kept.contains(j, w) => {}
            _ => {
                return Err(Error::BadParameter(format!(
                    "removed vertex ({j},{v}) has no natural partner in kept"
                )))
            }
        }
    }
    for (j, v) in t.iter() {
        if kept.contains(j, v) || !g.contains_vertex(j, v) {
            return Err(Error::BadParameter(format!(
                "T vertex ({j},{v}) is not a removed vertex"
            )));
        }
    }
    let q = CollapseQuery {
        graph: g,
        kept,
        forced: BTreeMap::new(),
    };
    Ok(solve(&q, |assign| {
        let mut t_dev = false;
        let mut rest_dev = false;
        for (&(j, v), &w) in assign {
            if natural[&(j, v)] != w {
                if t.contains(j, v) {
                    t_dev = true;
                } else {
                    rest_dev = true;
                }
            }
        }
        t_dev && rest_dev
    }))
}

fn removed_vertices(g: &PartiteHypergraph, kept: &SideSubset) -> Vec<(usize, VertexId)> {
    (0..g.arity())
        .flat_map(|j| {
            g.side(j)
                .iter()
                .filter(move |&&v| !kept.contains(j, v))
                .map(move |&v| (j, v))
        })
        .collect()
}

/// Core backtracking. `accept` filters complete assignments (removed → kept);
/// with the constant-true filter this is a plain collapse search.
fn solve(
    q: &CollapseQuery,
    accept: impl Fn(&BTreeMap<(usize, VertexId), VertexId>) -> bool,
) -> Option<Homomorphism> {
    let g = q.graph;
    let removed = removed_vertices(g, q.kept);
    let position: BTreeMap<(usize, VertexId), usize> = removed
        .iter()
        .enumerate()
        .map(|(i, &jv)| (jv, i))
        .collect();

    // edge -> index of the last removed vertex appearing in it; checking an
    // edge as soon as it is fully decided implements both appendix pruning
    // rules (edges into the kept part and edges into the placed prefix)
    let mut check_at: Vec<Vec<&Vec<VertexId>>> = vec![Vec::new(); removed.len() + 1];
    let mut kept_edges: Vec<&Vec<VertexId>> = Vec::new();
    for e in g.edges() {
        let last = e
            .iter()
            .enumerate()
            .filter_map(|(j, &v)| position.get(&(j, v)))
            .max();
        match last {
            Some(&i) => check_at[i].push(e),
            None => kept_edges.push(e),
        }
    }
    // kept edges must themselves survive in the section; they do by definition
    debug_assert!(kept_edges.iter().all(|e| g.edges().contains(*e)));

    let targets: Vec<Vec<VertexId>> = (0..g.arity())
        .map(|j| q.kept.sets[j].iter().copied().collect())
        .collect();

    struct Ctx<'a> {
        g: &'a PartiteHypergraph,
        kept: &'a SideSubset,
        removed: &'a [(usize, VertexId)],
        check_at: &'a [Vec<&'a Vec<VertexId>>],
        targets: &'a [Vec<VertexId>],
        forced: &'a BTreeMap<(usize, VertexId), VertexId>,
    }

    fn image(
        ctx: &Ctx,
        assign: &BTreeMap<(usize, VertexId), VertexId>,
        e: &[VertexId],
    ) -> Vec<VertexId> {
        e.iter()
            .enumerate()
            .map(|(j, &v)| {
                if ctx.kept.contains(j, v) {
                    v
                } else {
                    assign[&(j, v)]
                }
            })
            .collect()
    }

    fn rec(
        ctx: &Ctx,
        i: usize,
        assign: &mut BTreeMap<(usize, VertexId), VertexId>,
        accept: &impl Fn(&BTreeMap<(usize, VertexId), VertexId>) -> bool,
    ) -> bool {
        if i == ctx.removed.len() {
            return accept(assign);
        }
        let (j, v) = ctx.removed[i];
        let candidates: Vec<VertexId> = match ctx.forced.get(&(j, v)) {
            Some(&w) => vec![w],
            None => ctx.targets[j].clone(),
        };
        for w in candidates {
            assign.insert((j, v), w);
            let ok = ctx.check_at[i]
                .iter()
                .all(|e| ctx.g.edges().contains(&image(ctx, assign, e)));
            if ok && rec(ctx, i + 1, assign, accept) {
                return true;
            }
            assign.remove(&(j, v));
        }
        false
    }

    let ctx = Ctx {
        g,
        kept: q.kept,
        removed: &removed,
        check_at: &check_at,
        targets: &targets,
        forced: &q.forced,
    };
    let mut assign = BTreeMap::new();
    if rec(&ctx, 0, &mut assign, &accept) {
        let mut maps: Vec<BTreeMap<VertexId, VertexId>> = q
            .kept
            .sets
            .iter()
            .map(|s| s.iter().map(|&v| (v, v)).collect())
            .collect();
        for (&(j, v), &w) in &assign {
            maps[j].insert(v, w);
        }
        Some(Homomorphism { maps })
    } else {
        None
    }
}

/// Naive oracle: try every map of removed vertices into kept vertices.
/// Used by the tests to certify completeness of the pruned search.
pub fn find_collapse_naive(g: &PartiteHypergraph, kept: &SideSubset) -> Option<Homomorphism> {
    let removed = removed_vertices(g, kept);
    let targets: Vec<Vec<VertexId>> = (0..g.arity())
        .map(|j| kept.sets[j].iter().copied().collect())
        .collect();
    let mut choice = vec![0usize; removed.len()];
    loop {
        let mut maps: Vec<BTreeMap<VertexId, VertexId>> = kept
            .sets
            .iter()
            .map(|s| s.iter().map(|&v| (v, v)).collect())
            .collect();
        let mut feasible = true;
        for (i, &(j, v)) in removed.iter().enumerate() {
            if targets[j].is_empty() {
                feasible = false;
                break;
            }
            maps[j].insert(v, targets[j][choice[i]]);
        }
        if feasible {
            let f = Homomorphism { maps };
            let section = g.section(kept).expect("kept is a subset");
            if crate::hypergraph::is_homomorphism(&f, g, &section).unwrap_or(false) {
                return Some(f);
            }
        } else {
            return None;
        }
        // odometer
        let mut i = removed.len();
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            let (j, _) = removed[i];
            choice[i] += 1;
            if choice[i] < targets[j].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}
