//! Desk-scale isomorphism search between partite hypergraphs.
//!
//! An isomorphism is a permutation of sides together with per-side vertex
//! bijections carrying edges onto edges bijectively. Certificates produce
//! graphs whose vertex ids are not canonical, so equality of final graphs is
//! always checked up to isomorphism found by this search.

use std::collections::{BTreeMap, BTreeSet};

use super::{PartiteHypergraph, VertexId};

#[derive(Clone, Debug)]
pub struct Isomorphism {
    /// side j of the source maps to side `side_perm[j]` of the target
    pub side_perm: Vec<usize>,
    pub maps: Vec<BTreeMap<VertexId, VertexId>>,
}

pub fn is_isomorphic(g: &PartiteHypergraph, h: &PartiteHypergraph) -> bool {
    find_isomorphism(g, h).is_some()
}

pub fn find_isomorphism(g: &PartiteHypergraph, h: &PartiteHypergraph) -> Option<Isomorphism> {
    if g.arity() != h.arity() || g.edge_count() != h.edge_count() {
        return None;
    }
    let r = g.arity();
    let mut perm: Vec<usize> = (0..r).collect();
    loop {
        if (0..r).all(|j| g.side(j).len() == h.side(perm[j]).len()) {
            if let Some(maps) = search_with_perm(g, h, &perm) {
                return Some(Isomorphism {
                    side_perm: perm,
                    maps,
                });
            }
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn degree_profile(g: &PartiteHypergraph, side: usize, v: VertexId) -> usize {
    g.edges().iter().filter(|e| e[side] == v).count()
}

fn search_with_perm(
    g: &PartiteHypergraph,
    h: &PartiteHypergraph,
    perm: &[usize],
) -> Option<Vec<BTreeMap<VertexId, VertexId>>> {
    let r = g.arity();
    let vertices: Vec<(usize, VertexId)> = (0..r)
        .flat_map(|j| g.side(j).iter().map(move |&v| (j, v)))
        .collect();
    let gdeg: BTreeMap<(usize, VertexId), usize> = vertices
        .iter()
        .map(|&(j, v)| ((j, v), degree_profile(g, j, v)))
        .collect();
    let mut hdeg: BTreeMap<(usize, VertexId), usize> = BTreeMap::new();
    for j in 0..r {
        for &v in h.side(j) {
            hdeg.insert((j, v), degree_profile(h, j, v));
        }
    }

    // permuted image of a source edge
    let img_edge = |maps: &[BTreeMap<VertexId, VertexId>], e: &[VertexId]| -> Option<Vec<VertexId>> {
        let mut out = vec![0; e.len()];
        for (j, &v) in e.iter().enumerate() {
            out[perm[j]] = *maps[j].get(&v)?;
        }
        Some(out)
    };

    struct Ctx<'a> {
        g: &'a PartiteHypergraph,
        h: &'a PartiteHypergraph,
        perm: &'a [usize],
        vertices: &'a [(usize, VertexId)],
        gdeg: &'a BTreeMap<(usize, VertexId), usize>,
        hdeg: &'a BTreeMap<(usize, VertexId), usize>,
    }

    fn rec(
        c: &Ctx,
        i: usize,
        maps: &mut Vec<BTreeMap<VertexId, VertexId>>,
        used: &mut Vec<BTreeSet<VertexId>>,
        img: &dyn Fn(&[BTreeMap<VertexId, VertexId>], &[VertexId]) -> Option<Vec<VertexId>>,
    ) -> bool {
        if i == c.vertices.len() {
            // bijective on each side by construction; verify edges both ways
            let mut seen = BTreeSet::new();
            for e in c.g.edges() {
                match img(maps, e) {
                    Some(t) if c.h.edges().contains(&t) => {
                        seen.insert(t);
                    }
                    _ => return false,
                }
            }
            return seen.len() == c.h.edge_count();
        }
        let (j, v) = c.vertices[i];
        let tj = c.perm[j];
        for &t in c.h.side(tj) {
            if used[tj].contains(&t) || c.gdeg[&(j, v)] != c.hdeg[&(tj, t)] {
                continue;
            }
            maps[j].insert(v, t);
            used[tj].insert(t);
            // prune on fully-assigned edges
            let consistent = c.g.edges().iter().all(|e| {
                match img(maps, e) {
                    Some(t) => c.h.edges().contains(&t),
                    None => true, // not fully assigned yet
                }
            });
            if consistent && rec(c, i + 1, maps, used, img) {
                return true;
            }
            maps[j].remove(&v);
            used[tj].remove(&t);
        }
        false
    }

    let ctx = Ctx {
        g,
        h,
        perm,
        vertices: &vertices,
        gdeg: &gdeg,
        hdeg: &hdeg,
    };
    let mut maps = vec![BTreeMap::new(); r];
    let mut used = vec![BTreeSet::new(); r];
    if rec(&ctx, 0, &mut maps, &mut used, &img_edge) {
        Some(maps)
    } else {
        None
    }
}
