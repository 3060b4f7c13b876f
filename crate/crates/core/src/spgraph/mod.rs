//! Series-parallel machinery for bipartite graphs of treewidth at most two.
//!
//! An oriented series-parallel graph is built from single edges by series,
//! generalized-series and parallel compositions whose shared vertices lie on
//! matching sides, so bipartiteness is preserved. The spine is the shortest
//! induced top-bottom path, defined by the same recursion. This module
//! recognizes such graphs at desk scale, collapses them onto their spines,
//! and synthesizes doubling/collapse certificates for them.

use std::collections::{BTreeMap, BTreeSet};

use crate::hypergraph::{Homomorphism, PartiteHypergraph, VertexId};
use crate::{Error, Result};

mod corpus;
mod parse;
mod synth;

pub use corpus::random_sp_tree;
pub use parse::sp_parse;
pub use synth::{certify_sp, certify_tree, standard_form, SpCertificate};

/// A vertex of a bipartite graph: (side, id), side 0 on the left.
pub type SpVertex = (usize, VertexId);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SPTree {
    Edge {
        top: SpVertex,
        bottom: SpVertex,
    },
    /// upper(top, m) over lower(m, bottom), sharing exactly m
    Series { upper: Box<SPTree>, lower: Box<SPTree> },
    /// primary keeps the orientation; the dangler hangs off the primary's
    /// top or bottom, oriented away from it (dangler.top = attachment)
    Generalized {
        primary: Box<SPTree>,
        dangler: Box<SPTree>,
        at_top: bool,
    },
    /// both children oriented (top, bottom), sharing exactly those two
    Parallel { first: Box<SPTree>, second: Box<SPTree> },
}

impl SPTree {
    pub fn top(&self) -> SpVertex {
        match self {
            SPTree::Edge { top, .. } => *top,
            SPTree::Series { upper, .. } => upper.top(),
            SPTree::Generalized { primary, .. } => primary.top(),
            SPTree::Parallel { first, .. } => first.top(),
        }
    }

    pub fn bottom(&self) -> SpVertex {
        match self {
            SPTree::Edge { bottom, .. } => *bottom,
            SPTree::Series { lower, .. } => lower.bottom(),
            SPTree::Generalized { primary, .. } => primary.bottom(),
            SPTree::Parallel { first, .. } => first.bottom(),
        }
    }

    pub fn vertices(&self) -> BTreeSet<SpVertex> {
        match self {
            SPTree::Edge { top, bottom } => BTreeSet::from([*top, *bottom]),
            SPTree::Series { upper, lower } => {
                let mut v = upper.vertices();
                v.extend(lower.vertices());
                v
            }
            SPTree::Generalized { primary, dangler, .. } => {
                let mut v = primary.vertices();
                v.extend(dangler.vertices());
                v
            }
            SPTree::Parallel { first, second } => {
                let mut v = first.vertices();
                v.extend(second.vertices());
                v
            }
        }
    }

    /// Undirected edge set as (left vertex id, right vertex id) pairs.
    pub fn edge_set(&self) -> BTreeSet<(VertexId, VertexId)> {
        match self {
            SPTree::Edge { top, bottom } => {
                let (l, r) = if top.0 == 0 { (top.1, bottom.1) } else { (bottom.1, top.1) };
                BTreeSet::from([(l, r)])
            }
            SPTree::Series { upper, lower } => {
                let mut e = upper.edge_set();
                e.extend(lower.edge_set());
                e
            }
            SPTree::Generalized { primary, dangler, .. } => {
                let mut e = primary.edge_set();
                e.extend(dangler.edge_set());
                e
            }
            SPTree::Parallel { first, second } => {
                let mut e = first.edge_set();
                e.extend(second.edge_set());
                e
            }
        }
    }

    /// The spine, top to bottom. Parallel ties resolve to the first child.
    pub fn spine(&self) -> Vec<SpVertex> {
        match self {
            SPTree::Edge { top, bottom } => vec![*top, *bottom],
            SPTree::Series { upper, lower } => {
                let mut s = upper.spine();
                s.extend(lower.spine().into_iter().skip(1));
                s
            }
            SPTree::Generalized { primary, .. } => primary.spine(),
            SPTree::Parallel { first, second } => {
                let a = first.spine();
                let b = second.spine();
                if a.len() <= b.len() {
                    a
                } else {
                    b
                }
            }
        }
    }

    pub fn spine_len(&self) -> usize {
        self.spine().len() - 1
    }

    pub fn reverse(&self) -> SPTree {
        match self {
            SPTree::Edge { top, bottom } => SPTree::Edge { top: *bottom, bottom: *top },
            SPTree::Series { upper, lower } => SPTree::Series {
                upper: Box::new(lower.reverse()),
                lower: Box::new(upper.reverse()),
            },
            SPTree::Generalized { primary, dangler, at_top } => SPTree::Generalized {
                primary: Box::new(primary.reverse()),
                dangler: dangler.clone(),
                at_top: !at_top,
            },
            SPTree::Parallel { first, second } => SPTree::Parallel {
                first: Box::new(first.reverse()),
                second: Box::new(second.reverse()),
            },
        }
    }

    /// Checks every composition precondition recursively.
    pub fn validate(&self) -> Result<()> {
        match self {
            SPTree::Edge { top, bottom } => {
                if top.0 == bottom.0 {
                    return Err(Error::Invalid(format!(
                        "edge endpoints {top:?}, {bottom:?} on one side"
                    )));
                }
                Ok(())
            }
            SPTree::Series { upper, lower } => {
                upper.validate()?;
                lower.validate()?;
                let m = upper.bottom();
                if lower.top() != m {
                    return Err(Error::Invalid("series join vertex mismatch".into()));
                }
                let shared: Vec<_> = upper
                    .vertices()
                    .intersection(&lower.vertices())
                    .copied()
                    .collect();
                if shared != [m] {
                    return Err(Error::Invalid(format!(
                        "series children must share exactly the join vertex, share {shared:?}"
                    )));
                }
                Ok(())
            }
            SPTree::Generalized { primary, dangler, at_top } => {
                primary.validate()?;
                dangler.validate()?;
                let attach = if *at_top { primary.top() } else { primary.bottom() };
                if dangler.top() != attach {
                    return Err(Error::Invalid("dangler must hang off the attachment".into()));
                }
                let shared: Vec<_> = primary
                    .vertices()
                    .intersection(&dangler.vertices())
                    .copied()
                    .collect();
                if shared != [attach] {
                    return Err(Error::Invalid(format!(
                        "generalized children must share exactly the attachment, share {shared:?}"
                    )));
                }
                Ok(())
            }
            SPTree::Parallel { first, second } => {
                first.validate()?;
                second.validate()?;
                if first.top() != second.top() || first.bottom() != second.bottom() {
                    return Err(Error::Invalid("parallel children endpoint mismatch".into()));
                }
                let ends = BTreeSet::from([first.top(), first.bottom()]);
                let shared: BTreeSet<_> = first
                    .vertices()
                    .intersection(&second.vertices())
                    .copied()
                    .collect();
                if shared != ends {
                    return Err(Error::Invalid(format!(
                        "parallel children must share exactly top and bottom, share {shared:?}"
                    )));
                }
                if first.spine_len() % 2 != second.spine_len() % 2 {
                    return Err(Error::Invalid("parallel spine parity mismatch".into()));
                }
                if matches!(**first, SPTree::Edge { .. }) && matches!(**second, SPTree::Edge { .. }) {
                    return Err(Error::Invalid(
                        "parallel composition of two direct edges".into(),
                    ));
                }
                if !first.edge_set().is_disjoint(&second.edge_set()) {
                    return Err(Error::Invalid("parallel children share an edge".into()));
                }
                Ok(())
            }
        }
    }

    /// The flattened bipartite graph as a 2-partite hypergraph.
    pub fn flatten(&self) -> PartiteHypergraph {
        let mut sides = vec![BTreeSet::new(), BTreeSet::new()];
        for (s, id) in self.vertices() {
            sides[s].insert(id);
        }
        let edges = self.edge_set().into_iter().map(|(l, r)| vec![l, r]).collect();
        PartiteHypergraph::new(2, sides, edges).expect("tree flattens to a valid graph")
    }
}

/// The spine of an `SPTree`, exposed as its own type mostly for reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spine {
    pub path: Vec<SpVertex>,
}

impl Spine {
    /// Edge count; a spine has at least one edge.
    pub fn len(&self) -> usize {
        self.path.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub fn spine_of(t: &SPTree) -> Spine {
    Spine { path: t.spine() }
}

/// The retraction of the flattened graph onto its spine, as a vertex map.
/// Identity on the spine; built by the composition recursion: series glues,
/// a dangler folds onto the attachment edge by sides, the longer parallel
/// spine folds onto the shorter with a parity bounce at the bottom.
pub fn spine_retraction(t: &SPTree) -> BTreeMap<SpVertex, SpVertex> {
    match t {
        SPTree::Edge { top, bottom } => {
            BTreeMap::from([(*top, *top), (*bottom, *bottom)])
        }
        SPTree::Series { upper, lower } => {
            let mut m = spine_retraction(upper);
            m.extend(spine_retraction(lower));
            m
        }
        SPTree::Generalized { primary, dangler, at_top } => {
            let mut m = spine_retraction(primary);
            let spine = primary.spine();
            let (attach, nb) = if *at_top {
                (spine[0], spine[1])
            } else {
                (spine[spine.len() - 1], spine[spine.len() - 2])
            };
            for v in dangler.vertices() {
                m.insert(v, if v.0 == attach.0 { attach } else { nb });
            }
            m
        }
        SPTree::Parallel { first, second } => {
            let (short, long) = if first.spine_len() <= second.spine_len() {
                (first, second)
            } else {
                (second, first)
            };
            let short_spine = short.spine();
            let long_spine = long.spine();
            let k = short_spine.len() - 1;
            let fold = |i: usize| {
                if i <= k {
                    short_spine[i]
                } else {
                    short_spine[k - (i - k) % 2]
                }
            };
            let mut m = spine_retraction(short);
            let long_m = spine_retraction(long);
            for (v, s) in long_m {
                let i = long_spine.iter().position(|x| *x == s).expect("spine image");
                m.insert(v, fold(i));
            }
            m
        }
    }
}

/// `spine_retraction` packaged as a homomorphism of the flattened graph.
pub fn collapse_to_spine(t: &SPTree) -> Homomorphism {
    let m = spine_retraction(t);
    let mut maps = vec![BTreeMap::new(), BTreeMap::new()];
    for ((side, id), (tside, tid)) in m {
        debug_assert_eq!(side, tside, "retraction preserves sides");
        maps[side].insert(id, tid);
    }
    Homomorphism { maps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{is_homomorphism, SideSubset};

    fn edge(t: SpVertex, b: SpVertex) -> SPTree {
        SPTree::Edge { top: t, bottom: b }
    }

    /// path of length `n` from `top`, fresh right ids from `base`
    fn path(n: usize, top: SpVertex, base: u32) -> SPTree {
        assert!(n >= 1);
        let mut verts = vec![top];
        for i in 0..n {
            let last = verts[verts.len() - 1];
            verts.push((1 - last.0, base + i as u32));
        }
        let mut t = edge(verts[n - 1], verts[n]);
        for i in (0..n - 1).rev() {
            t = SPTree::Series {
                upper: Box::new(edge(verts[i], verts[i + 1])),
                lower: Box::new(t),
            };
        }
        t
    }

    fn four_cycle() -> SPTree {
        let u = (0, 0);
        let v = (0, 1);
        SPTree::Parallel {
            first: Box::new(path(2, u, 10).with_bottom(v)),
            second: Box::new(path(2, u, 20).with_bottom(v)),
        }
    }

    impl SPTree {
        /// test helper: rewrite the bottom label of a path
        fn with_bottom(mut self, b: SpVertex) -> SPTree {
            fn go(t: &mut SPTree, b: SpVertex) {
                match t {
                    SPTree::Edge { bottom, .. } => *bottom = b,
                    SPTree::Series { lower, .. } => go(lower, b),
                    SPTree::Generalized { primary, .. } => go(primary, b),
                    SPTree::Parallel { first, second } => {
                        go(first, b);
                        go(second, b);
                    }
                }
            }
            go(&mut self, b);
            self
        }
    }

    #[test]
    fn spine_recurrences() {
        let e = edge((0, 0), (1, 0));
        assert_eq!(e.spine_len(), 1);
        let p2 = path(2, (0, 0), 5);
        assert_eq!(p2.spine_len(), 2);
        let c4 = four_cycle();
        c4.validate().unwrap();
        assert_eq!(c4.spine_len(), 2);
        // parallel of a 2-path and a 4-path picks the short one
        let u = (0, 0);
        let v = (0, 1);
        let t = SPTree::Parallel {
            first: Box::new(path(4, u, 10).with_bottom(v)),
            second: Box::new(path(2, u, 20).with_bottom(v)),
        };
        t.validate().unwrap();
        assert_eq!(t.spine_len(), 2);
        assert_eq!(t.spine()[0], u);
        assert_eq!(t.spine()[2], v);
    }

    #[test]
    fn validation_rejects_bad_parallel() {
        let u = (0, 0);
        let v = (1, 1);
        let t = SPTree::Parallel {
            first: Box::new(edge(u, v)),
            second: Box::new(edge(u, v)),
        };
        assert!(t.validate().is_err());
    }

    #[test]
    fn collapse_to_spine_is_homomorphism() {
        let u = (0, 0);
        let v = (0, 1);
        let t = SPTree::Parallel {
            first: Box::new(path(2, u, 10).with_bottom(v)),
            second: Box::new(path(4, u, 20).with_bottom(v)),
        };
        t.validate().unwrap();
        let g = t.flatten();
        let f = collapse_to_spine(&t);
        let spine = t.spine();
        let mut kept = SideSubset::empty(2);
        for (s, id) in &spine {
            kept.insert(*s, *id);
        }
        let section = g.section(&kept).unwrap();
        assert!(is_homomorphism(&f, &g, &section).unwrap());
        assert!(f.is_identity_on(&kept));
        // the long path folds through the parity bounce
        let long_mid = (1, 20); // second vertex of the 4-path
        assert!(f.apply(long_mid.0, long_mid.1).is_some());
    }

    #[test]
    fn generalized_dangler_folds_onto_attachment_edge() {
        let u = (0, 0);
        let v = (1, 0);
        let w = (0, 5);
        let t = SPTree::Generalized {
            primary: Box::new(edge(u, v)),
            dangler: Box::new(edge(v, w)),
            at_top: false,
        };
        t.validate().unwrap();
        let f = collapse_to_spine(&t);
        assert_eq!(f.apply(0, 5), Some(0)); // w folds onto u
        let g = t.flatten();
        let spine = t.spine();
        let mut kept = SideSubset::empty(2);
        for (s, id) in &spine {
            kept.insert(*s, *id);
        }
        assert!(is_homomorphism(&f, &g, &g.section(&kept).unwrap()).unwrap());
    }

    #[test]
    fn spine_is_shortest_path() {
        // brute-force BFS distance check on a composed graph
        let u = (0, 0);
        let v = (0, 1);
        let t = SPTree::Parallel {
            first: Box::new(path(2, u, 10).with_bottom(v)),
            second: Box::new(path(4, u, 20).with_bottom(v)),
        };
        let g = t.flatten();
        let spine = t.spine();
        // BFS from u
        let mut dist: BTreeMap<SpVertex, usize> = BTreeMap::from([(u, 0)]);
        let mut queue = std::collections::VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for e in g.edges() {
                let pts = [(0usize, e[0]), (1usize, e[1])];
                for w in 0..2 {
                    if pts[w] == x && !dist.contains_key(&pts[1 - w]) {
                        dist.insert(pts[1 - w], dist[&x] + 1);
                        queue.push_back(pts[1 - w]);
                    }
                }
            }
        }
        assert_eq!(dist[&v], spine.len() - 1);
    }
}
