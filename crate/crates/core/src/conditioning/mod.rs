//! The doubling/collapse calculus.
//!
//! A hypergraph is constructible by conditioning when it is reachable from a
//! single hyperedge by doubling steps (copy a vertex subset and duplicate all
//! non-fixed hyperedges onto the copies) and collapse steps (retract onto a
//! section via a homomorphism fixing the section pointwise). A
//! [`Certificate`] is the checkable witness: an initial hyperedge plus the
//! step sequence; [`verify_certificate`] replays it deterministically.

use std::collections::{BTreeMap, BTreeSet};

use crate::hypergraph::{Homomorphism, PartiteHypergraph, SideSubset, VertexId};
use crate::{Error, Result};

mod bound;
mod distribution;
mod named;
mod normalize;
mod text;

pub use bound::{free_game_bound, pr_upper_bound, probabilistic_good_bound, GoodnessBound};
pub use distribution::{build_hitting_distribution, verify_hitting, HitMode, HitReport, HomDistribution};
pub use named::{certify_named, NamedCertificate};
pub use normalize::normalize_certificate;
pub use text::{parse_certificate, render_certificate};

/// Copy a vertex subset; the complement is fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingStep {
    pub doubled: SideSubset,
}

/// Retract onto `kept`; `mapping` sends each removed vertex to a kept vertex
/// on the same side. Extended by the identity on `kept` it must be a
/// homomorphism onto the section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseStep {
    pub kept: SideSubset,
    pub mapping: Vec<BTreeMap<VertexId, VertexId>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Double(DoublingStep),
    Collapse(CollapseStep),
}

/// Witness that a hypergraph is constructible by conditioning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub arity: usize,
    /// one fresh vertex per side
    pub initial: Vec<VertexId>,
    pub steps: Vec<Step>,
}

impl Certificate {
    pub fn doubling_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, Step::Double(_)))
            .count()
    }

    pub fn collapse_count(&self) -> usize {
        self.steps.len() - self.doubling_count()
    }
}

/// old → new ids per side, for the vertices copied by one doubling.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CopyMap {
    pub per_side: Vec<BTreeMap<VertexId, VertexId>>,
}

impl CopyMap {
    pub fn get(&self, side: usize, v: VertexId) -> Option<VertexId> {
        self.per_side.get(side).and_then(|m| m.get(&v)).copied()
    }
}

/// Per-step provenance recorded by the replay.
#[derive(Clone, Debug)]
pub enum StepRecord {
    Doubled { copies: CopyMap },
    Collapsed { removed: usize },
}

/// Result of replaying a certificate.
#[derive(Clone, Debug)]
pub struct Replay {
    pub graph: PartiteHypergraph,
    pub transcript: Vec<StepRecord>,
}

/// Applies one doubling: fresh copies get the next unused integer id on
/// their side; for each non-fixed edge the copy has old vertices replaced by
/// their copies. No edge of the result mixes old and new vertices.
pub fn apply_doubling(
    g: &PartiteHypergraph,
    step: &DoublingStep,
) -> Result<(PartiteHypergraph, CopyMap)> {
    if step.doubled.arity() != g.arity() {
        return Err(Error::ArityMismatch(step.doubled.arity(), g.arity()));
    }
    for (j, v) in step.doubled.iter() {
        if !g.contains_vertex(j, v) {
            return Err(Error::SubsetViolation { side: j, vertex: v });
        }
    }
    let mut sides: Vec<BTreeSet<VertexId>> = g.sides().to_vec();
    let mut copies = CopyMap {
        per_side: vec![BTreeMap::new(); g.arity()],
    };
    for j in 0..g.arity() {
        let mut next = sides[j].iter().max().map_or(0, |&m| m + 1);
        for &v in &step.doubled.sets[j] {
            copies.per_side[j].insert(v, next);
            sides[j].insert(next);
            next += 1;
        }
    }
    let mut edges = g.edges().clone();
    for e in g.edges() {
        let fixed = e
            .iter()
            .enumerate()
            .all(|(j, &v)| !step.doubled.contains(j, v));
        if !fixed {
            let copy: Vec<VertexId> = e
                .iter()
                .enumerate()
                .map(|(j, &v)| copies.get(j, v).unwrap_or(v))
                .collect();
            edges.insert(copy);
        }
    }
    let out = PartiteHypergraph::new(g.arity(), sides, edges)?;
    debug_assert!(doubling_separated(&out, &step.doubled, &copies));
    Ok((out, copies))
}

/// No edge touches both an old (doubled) and a new vertex.
fn doubling_separated(g: &PartiteHypergraph, doubled: &SideSubset, copies: &CopyMap) -> bool {
    let new: Vec<BTreeSet<VertexId>> = copies
        .per_side
        .iter()
        .map(|m| m.values().copied().collect())
        .collect();
    g.edges().iter().all(|e| {
        let touches_old = e
            .iter()
            .enumerate()
            .any(|(j, &v)| doubled.contains(j, v));
        let touches_new = e.iter().enumerate().any(|(j, &v)| new[j].contains(&v));
        !(touches_old && touches_new)
    })
}

/// Applies one collapse; the extended mapping must be a homomorphism onto
/// `section(g, kept)`, otherwise the step is an invalid certificate step.
pub fn apply_collapse(g: &PartiteHypergraph, step: &CollapseStep) -> Result<PartiteHypergraph> {
    if step.kept.arity() != g.arity() {
        return Err(Error::ArityMismatch(step.kept.arity(), g.arity()));
    }
    let section = g.section(&step.kept)?;
    // extended mapping: identity on kept, `mapping` on the rest
    let mut maps: Vec<BTreeMap<VertexId, VertexId>> = step
        .kept
        .sets
        .iter()
        .map(|s| s.iter().map(|&v| (v, v)).collect())
        .collect();
    for j in 0..g.arity() {
        for &v in g.side(j) {
            if step.kept.contains(j, v) {
                continue;
            }
            let w = step.mapping[j].get(&v).copied().ok_or(Error::MapNotTotal {
                side: j,
                vertex: v,
            })?;
            if !step.kept.contains(j, w) {
                return Err(Error::HomomorphismViolation {
                    edge: vec![w],
                    step: None,
                });
            }
            maps[j].insert(v, w);
        }
    }
    let f = Homomorphism { maps };
    for e in g.edges() {
        let img = f.apply_edge(e).expect("total by construction");
        if !section.edges().contains(&img) {
            return Err(Error::HomomorphismViolation {
                edge: e.clone(),
                step: None,
            });
        }
    }
    Ok(section)
}

/// Replays all steps from the initial hyperedge. Any failing step
/// invalidates the certificate, annotated with its index.
pub fn verify_certificate(cert: &Certificate) -> Result<Replay> {
    if cert.initial.len() != cert.arity {
        return Err(Error::ArityMismatch(cert.initial.len(), cert.arity));
    }
    let mut g = PartiteHypergraph::single_edge(cert.arity, cert.initial.clone())?;
    let mut transcript = Vec::with_capacity(cert.steps.len());
    for (i, step) in cert.steps.iter().enumerate() {
        match step {
            Step::Double(d) => {
                let (next, copies) = apply_doubling(&g, d).map_err(|e| Error::CertificateStep {
                    step: i,
                    source: Box::new(e),
                })?;
                g = next;
                transcript.push(StepRecord::Doubled { copies });
            }
            Step::Collapse(c) => {
                let before = g.vertex_count();
                g = apply_collapse(&g, c).map_err(|e| match e {
                    Error::HomomorphismViolation { edge, .. } => Error::HomomorphismViolation {
                        edge,
                        step: Some(i),
                    },
                    other => Error::CertificateStep {
                        step: i,
                        source: Box::new(other),
                    },
                })?;
                transcript.push(StepRecord::Collapsed {
                    removed: before - g.vertex_count(),
                });
            }
        }
    }
    Ok(Replay { graph: g, transcript })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::is_isomorphic;

    fn bipartite(
        left: &[u32],
        right: &[u32],
        edges: &[(u32, u32)],
    ) -> PartiteHypergraph {
        PartiteHypergraph::new(
            2,
            vec![left.iter().copied().collect(), right.iter().copied().collect()],
            edges.iter().map(|&(a, b)| vec![a, b]).collect(),
        )
        .unwrap()
    }

    fn subset(left: &[u32], right: &[u32]) -> SideSubset {
        SideSubset::from_sets(vec![
            left.iter().copied().collect(),
            right.iter().copied().collect(),
        ])
    }

    #[test]
    fn figure_doubling_six_cycle() {
        // u1,u2,u3 = 0,1,2 left; v1,v2,v3 = 0,1,2 right
        // edges: u1v1 u1v3 u2v1 u2v2 u3v2 u3v3; fix u1,u2,v1
        let c6 = bipartite(
            &[0, 1, 2],
            &[0, 1, 2],
            &[(0, 0), (0, 2), (1, 0), (1, 1), (2, 1), (2, 2)],
        );
        let step = DoublingStep {
            doubled: subset(&[2], &[1, 2]),
        };
        let (g, copies) = apply_doubling(&c6, &step).unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.edge_count(), 10);
        let u3c = copies.get(0, 2).unwrap();
        let v2c = copies.get(1, 1).unwrap();
        let v3c = copies.get(1, 2).unwrap();
        for e in [vec![0, v3c], vec![1, v2c], vec![u3c, v2c], vec![u3c, v3c]] {
            assert!(g.edges().contains(&e), "missing copied edge {e:?}");
        }
    }

    #[test]
    fn empty_doubling_is_noop() {
        let g = bipartite(&[0], &[0], &[(0, 0)]);
        let (h, copies) = apply_doubling(&g, &DoublingStep { doubled: SideSubset::empty(2) }).unwrap();
        assert_eq!(g, h);
        assert!(copies.per_side.iter().all(|m| m.is_empty()));
    }

    #[test]
    fn double_single_edge_gives_two_disjoint_edges() {
        let g = bipartite(&[0], &[0], &[(0, 0)]);
        let (h, _) = apply_doubling(&g, &DoublingStep { doubled: subset(&[0], &[0]) }).unwrap();
        assert_eq!(h.vertex_count(), 4);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.connected_components().len(), 2);
    }

    #[test]
    fn collapse_path_onto_edge() {
        // path u-v-w: u=0 left, v=0 right, w=1 left
        let p = bipartite(&[0, 1], &[0], &[(0, 0), (1, 0)]);
        let step = CollapseStep {
            kept: subset(&[0], &[0]),
            mapping: vec![BTreeMap::from([(1, 0)]), BTreeMap::new()],
        };
        let g = apply_collapse(&p, &step).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn collapse_two_disjoint_edges() {
        let g = bipartite(&[0, 1], &[0, 1], &[(0, 0), (1, 1)]);
        let step = CollapseStep {
            kept: subset(&[0], &[0]),
            mapping: vec![BTreeMap::from([(1, 0)]), BTreeMap::from([(1, 0)])],
        };
        assert_eq!(apply_collapse(&g, &step).unwrap().edge_count(), 1);
    }

    #[test]
    fn collapse_violation_detected() {
        // 4-cycle, keep one vertex per side; kept vertices non-adjacent is
        // impossible in C4 (all pairs adjacent), use a path of 3 edges
        let p = bipartite(&[0, 1], &[0, 1], &[(0, 0), (1, 0), (1, 1)]);
        // keep u0 and v1 (non-adjacent): section has no edge, any mapping fails
        let step = CollapseStep {
            kept: subset(&[0], &[1]),
            mapping: vec![BTreeMap::from([(1, 0)]), BTreeMap::from([(0, 1)])],
        };
        match apply_collapse(&p, &step) {
            Err(Error::HomomorphismViolation { .. }) => {}
            other => panic!("expected HomomorphismViolation, got {other:?}"),
        }
    }

    #[test]
    fn replay_initial_only() {
        let cert = Certificate {
            arity: 3,
            initial: vec![0, 0, 0],
            steps: vec![],
        };
        let replay = verify_certificate(&cert).unwrap();
        assert_eq!(replay.graph.edge_count(), 1);
    }

    #[test]
    fn replay_double_then_collapse() {
        let cert = Certificate {
            arity: 2,
            initial: vec![0, 0],
            steps: vec![
                Step::Double(DoublingStep { doubled: subset(&[0], &[0]) }),
                Step::Collapse(CollapseStep {
                    kept: subset(&[0], &[0]),
                    mapping: vec![BTreeMap::from([(1, 0)]), BTreeMap::from([(1, 0)])],
                }),
            ],
        };
        let replay = verify_certificate(&cert).unwrap();
        assert_eq!(replay.graph.edge_count(), 1);
        assert_eq!(cert.doubling_count(), 1);
        assert_eq!(cert.collapse_count(), 1);
    }

    #[test]
    fn replay_reports_failing_step_index() {
        let cert = Certificate {
            arity: 2,
            initial: vec![0, 0],
            steps: vec![
                Step::Double(DoublingStep { doubled: subset(&[0], &[0]) }),
                // invalid: maps the copy of the right vertex across an edge
                // it cannot preserve (keep both left vertices)
                Step::Collapse(CollapseStep {
                    kept: subset(&[0, 1], &[0]),
                    mapping: vec![BTreeMap::new(), BTreeMap::from([(1, 0)])],
                }),
            ],
        };
        match verify_certificate(&cert) {
            Err(Error::HomomorphismViolation { step: Some(1), .. }) => {}
            other => panic!("expected failure at step 1, got {other:?}"),
        }
    }

    #[test]
    fn replay_determinism() {
        let cert = NamedCertificate::SetGraph(3).certify().unwrap();
        let a = verify_certificate(&cert).unwrap();
        let b = verify_certificate(&cert).unwrap();
        assert_eq!(a.graph, b.graph);
        assert!(is_isomorphic(
            &a.graph,
            &crate::hypergraph::NamedHypergraph::SetGraph(3).build().unwrap()
        ));
    }
}
