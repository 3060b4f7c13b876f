//! r-regular, r-partite hypergraphs and their homomorphisms.
//!
//! A question set over provers 1..r is stored as one finite vertex set per
//! side plus a set of r-tuples (one vertex per side). Vertices are
//! `(side, id)` pairs with the side implicit in tuple position; ids are small
//! integers assigned deterministically by the builders so that enumeration
//! order is reproducible.
//!
//! Hypergraphs are immutable values: every operation returns a new value.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::{Error, Result};

mod iso;
mod named;
mod text;

pub use iso::{find_isomorphism, is_isomorphic, Isomorphism};
pub use named::NamedHypergraph;
pub(crate) use text::logical_lines;
pub use text::{parse_hypergraph, render_hypergraph};

pub type VertexId = u32;

/// One vertex subset per side, `P^(j) ⊆ Q^(j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideSubset {
    pub sets: Vec<BTreeSet<VertexId>>,
}

impl SideSubset {
    pub fn empty(arity: usize) -> Self {
        SideSubset {
            sets: vec![BTreeSet::new(); arity],
        }
    }

    pub fn from_sets(sets: Vec<BTreeSet<VertexId>>) -> Self {
        SideSubset { sets }
    }

    pub fn arity(&self) -> usize {
        self.sets.len()
    }

    pub fn contains(&self, side: usize, v: VertexId) -> bool {
        self.sets[side].contains(&v)
    }

    pub fn insert(&mut self, side: usize, v: VertexId) {
        self.sets[side].insert(v);
    }

    pub fn is_empty(&self) -> bool {
        self.sets.iter().all(|s| s.is_empty())
    }

    pub fn len(&self) -> usize {
        self.sets.iter().map(|s| s.len()).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, VertexId)> + '_ {
        self.sets
            .iter()
            .enumerate()
            .flat_map(|(j, s)| s.iter().map(move |&v| (j, v)))
    }
}

/// Per-side vertex maps `f^(j): Q^(j) → P^(j)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Homomorphism {
    pub maps: Vec<BTreeMap<VertexId, VertexId>>,
}

impl Homomorphism {
    pub fn identity(g: &PartiteHypergraph) -> Self {
        Homomorphism {
            maps: g
                .sides
                .iter()
                .map(|s| s.iter().map(|&v| (v, v)).collect())
                .collect(),
        }
    }

    /// The constant homomorphism onto the hyperedge `edge`.
    pub fn constant(g: &PartiteHypergraph, edge: &[VertexId]) -> Self {
        Homomorphism {
            maps: g
                .sides
                .iter()
                .enumerate()
                .map(|(j, s)| s.iter().map(|&v| (v, edge[j])).collect())
                .collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.maps.len()
    }

    pub fn apply(&self, side: usize, v: VertexId) -> Option<VertexId> {
        self.maps[side].get(&v).copied()
    }

    pub fn apply_edge(&self, edge: &[VertexId]) -> Option<Vec<VertexId>> {
        edge.iter()
            .enumerate()
            .map(|(j, &v)| self.apply(j, v))
            .collect()
    }

    /// `g ∘ self`: apply `self` first, then `g`.
    pub fn compose(&self, g: &Homomorphism) -> Result<Homomorphism> {
        if self.arity() != g.arity() {
            return Err(Error::ArityMismatch(self.arity(), g.arity()));
        }
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(j, m)| {
                m.iter()
                    .map(|(&v, &w)| {
                        g.apply(j, w)
                            .map(|u| (v, u))
                            .ok_or(Error::MapNotTotal { side: j, vertex: w })
                    })
                    .collect::<Result<BTreeMap<_, _>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Homomorphism { maps })
    }

    pub fn is_identity_on(&self, sub: &SideSubset) -> bool {
        sub.iter().all(|(j, v)| self.apply(j, v) == Some(v))
    }
}

/// An r-regular, r-partite hypergraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteHypergraph {
    arity: usize,
    sides: Vec<BTreeSet<VertexId>>,
    edges: BTreeSet<Vec<VertexId>>,
}

impl PartiteHypergraph {
    pub fn new(
        arity: usize,
        sides: Vec<BTreeSet<VertexId>>,
        edges: BTreeSet<Vec<VertexId>>,
    ) -> Result<Self> {
        if arity < 1 || sides.len() != arity {
            return Err(Error::BadParameter(format!(
                "arity {} does not match {} sides",
                arity,
                sides.len()
            )));
        }
        for e in &edges {
            if e.len() != arity {
                return Err(Error::ArityMismatch(e.len(), arity));
            }
            for (j, &v) in e.iter().enumerate() {
                if !sides[j].contains(&v) {
                    return Err(Error::UnknownVertex { side: j, vertex: v });
                }
            }
        }
        Ok(PartiteHypergraph { arity, sides, edges })
    }

    pub fn single_edge(arity: usize, edge: Vec<VertexId>) -> Result<Self> {
        let sides = edge.iter().map(|&v| BTreeSet::from([v])).collect();
        PartiteHypergraph::new(arity, sides, BTreeSet::from([edge]))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn sides(&self) -> &[BTreeSet<VertexId>] {
        &self.sides
    }

    pub fn side(&self, j: usize) -> &BTreeSet<VertexId> {
        &self.sides[j]
    }

    pub fn edges(&self) -> &BTreeSet<Vec<VertexId>> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.sides.iter().map(|s| s.len()).sum()
    }

    pub fn contains_vertex(&self, side: usize, v: VertexId) -> bool {
        side < self.arity && self.sides[side].contains(&v)
    }

    /// Edges in deterministic (sorted) order, for dense indexing.
    pub fn edge_list(&self) -> Vec<Vec<VertexId>> {
        self.edges.iter().cloned().collect()
    }

    pub fn all_vertices(&self) -> SideSubset {
        SideSubset {
            sets: self.sides.clone(),
        }
    }

    /// Question-set view: every vertex is incident to at least one edge.
    pub fn is_question_set(&self) -> bool {
        let mut seen = vec![BTreeSet::new(); self.arity];
        for e in &self.edges {
            for (j, &v) in e.iter().enumerate() {
                seen[j].insert(v);
            }
        }
        seen == self.sides
    }

    /// Section hypergraph: the edges of `self` lying entirely inside `sub`.
    pub fn section(&self, sub: &SideSubset) -> Result<PartiteHypergraph> {
        if sub.arity() != self.arity {
            return Err(Error::ArityMismatch(sub.arity(), self.arity));
        }
        for (j, s) in sub.sets.iter().enumerate() {
            if let Some(&v) = s.difference(&self.sides[j]).next() {
                return Err(Error::SubsetViolation { side: j, vertex: v });
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().enumerate().all(|(j, &v)| sub.contains(j, v)))
            .cloned()
            .collect();
        PartiteHypergraph::new(self.arity, sub.sets.clone(), edges)
    }

    /// Maximal connected sub-hypergraphs; an edge connects all its endpoints.
    /// Isolated vertices become singleton components.
    pub fn connected_components(&self) -> Vec<PartiteHypergraph> {
        let mut comp: BTreeMap<(usize, VertexId), usize> = BTreeMap::new();
        let mut incident: BTreeMap<(usize, VertexId), Vec<&Vec<VertexId>>> = BTreeMap::new();
        for e in &self.edges {
            for (j, &v) in e.iter().enumerate() {
                incident.entry((j, v)).or_default().push(e);
            }
        }
        let mut order = Vec::new();
        for (j, s) in self.sides.iter().enumerate() {
            for &v in s {
                order.push((j, v));
            }
        }
        let mut next = 0usize;
        for &start in &order {
            if comp.contains_key(&start) {
                continue;
            }
            let id = next;
            next += 1;
            let mut queue = VecDeque::from([start]);
            comp.insert(start, id);
            while let Some(u) = queue.pop_front() {
                if let Some(es) = incident.get(&u) {
                    for e in es {
                        for (j, &v) in e.iter().enumerate() {
                            if comp.insert((j, v), id).is_none() {
                                queue.push_back((j, v));
                            }
                        }
                    }
                }
            }
        }
        (0..next)
            .map(|id| {
                let mut sides = vec![BTreeSet::new(); self.arity];
                for (&(j, v), &c) in &comp {
                    if c == id {
                        sides[j].insert(v);
                    }
                }
                let edges = self
                    .edges
                    .iter()
                    .filter(|e| comp[&(0, e[0])] == id)
                    .cloned()
                    .collect();
                PartiteHypergraph::new(self.arity, sides, edges).expect("component is valid")
            })
            .collect()
    }
}

/// True iff every edge of `g` maps entrywise to an edge of `h`.
pub fn is_homomorphism(
    f: &Homomorphism,
    g: &PartiteHypergraph,
    h: &PartiteHypergraph,
) -> Result<bool> {
    if g.arity() != h.arity() {
        return Err(Error::ArityMismatch(g.arity(), h.arity()));
    }
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch(f.arity(), g.arity()));
    }
    for (j, s) in g.sides.iter().enumerate() {
        for &v in s {
            if f.apply(j, v).is_none() {
                return Err(Error::MapNotTotal { side: j, vertex: v });
            }
        }
    }
    for e in &g.edges {
        let img = f.apply_edge(e).expect("totality checked above");
        if !h.edges.contains(&img) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All homomorphisms from `g` to `h`, in lexicographic order of vertex
/// assignments (vertices ordered by `(side, id)`, targets ascending).
/// Returns at most `limit` results when given.
pub fn enumerate_homomorphisms(
    g: &PartiteHypergraph,
    h: &PartiteHypergraph,
    limit: Option<usize>,
) -> Result<Vec<Homomorphism>> {
    if g.arity() != h.arity() {
        return Err(Error::ArityMismatch(g.arity(), h.arity()));
    }
    let vertices: Vec<(usize, VertexId)> = g
        .sides
        .iter()
        .enumerate()
        .flat_map(|(j, s)| s.iter().map(move |&v| (j, v)))
        .collect();
    // edges that become fully assigned when the vertex at position i is placed
    let pos: BTreeMap<(usize, VertexId), usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, &jv)| (jv, i))
        .collect();
    let mut check_at: Vec<Vec<&Vec<VertexId>>> = vec![Vec::new(); vertices.len()];
    for e in &g.edges {
        if let Some(last) = e
            .iter()
            .enumerate()
            .map(|(j, &v)| pos[&(j, v)])
            .max()
        {
            check_at[last].push(e);
        }
    }
    let targets: Vec<Vec<VertexId>> = h.sides.iter().map(|s| s.iter().copied().collect()).collect();

    let mut result = Vec::new();
    let mut partial: Vec<BTreeMap<VertexId, VertexId>> = vec![BTreeMap::new(); g.arity()];
    fn rec(
        i: usize,
        vertices: &[(usize, VertexId)],
        targets: &[Vec<VertexId>],
        check_at: &[Vec<&Vec<VertexId>>],
        h: &PartiteHypergraph,
        partial: &mut Vec<BTreeMap<VertexId, VertexId>>,
        result: &mut Vec<Homomorphism>,
        limit: Option<usize>,
    ) {
        if limit.is_some_and(|l| result.len() >= l) {
            return;
        }
        if i == vertices.len() {
            result.push(Homomorphism {
                maps: partial.clone(),
            });
            return;
        }
        let (j, v) = vertices[i];
        for &t in &targets[j] {
            partial[j].insert(v, t);
            let ok = check_at[i].iter().all(|e| {
                let img: Vec<VertexId> = e
                    .iter()
                    .enumerate()
                    .map(|(jj, &vv)| partial[jj][&vv])
                    .collect();
                h.edges.contains(&img)
            });
            if ok {
                rec(i + 1, vertices, targets, check_at, h, partial, result, limit);
            }
            partial[j].remove(&v);
        }
    }
    rec(
        0,
        &vertices,
        &targets,
        &check_at,
        h,
        &mut partial,
        &mut result,
        limit,
    );
    Ok(result)
}
