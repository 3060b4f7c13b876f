//! Certificate synthesis for trees and series-parallel graphs.
//!
//! The synthesizer grows the spine of the target first (one leaf addition
//! per spine vertex: fix the attachment, double everything else, collapse
//! all copies onto the attachment edge except the fresh leaf), then extends
//! the spine to the full graph by structural recursion.
//!
//! Recursion over a composite node emits the operations of each child in
//! turn. Operations of a child must be adapted to the structure already
//! built around it: collapses pass through unchanged, while a doubling that
//! copies a shared vertex drags the surrounding chain along and immediately
//! collapses the dragged copies back — onto the attachment edge when the
//! chain is open, or folded onto the child's hybrid spine, endpoint to
//! endpoint, when the chain closes a cycle through the child. Induction is
//! on vertex count and, in reverse, on spine length: a parallel composition
//! whose long side is lopsided is first reoriented, which lengthens the
//! spine and so terminates.
//!
//! Every doubling keeps the invariant that the doubled vertices on the root
//! spine form a contiguous segment; the synthesizer asserts this per step.

use std::collections::{BTreeMap, BTreeSet};

use crate::conditioning::{
    apply_collapse, apply_doubling, Certificate, CollapseStep, DoublingStep, Step,
};
use crate::hypergraph::{PartiteHypergraph, SideSubset, VertexId};
use crate::{Error, Result};

use super::{spine_retraction, SPTree, SpVertex};

/// (side, id) of a vertex in the certificate's evolving graph.
type CVert = (usize, VertexId);
/// tree vertex -> current id
type Layout = BTreeMap<SpVertex, CVert>;

#[derive(Clone, Debug)]
pub struct SpCertificate {
    pub certificate: Certificate,
    /// ids of the target's spine in the replayed graph, top to bottom
    pub spine: Vec<CVert>,
    /// tree vertex -> id in the replayed graph
    pub layout: Layout,
}

/// Certifies a tree by iterated leaf addition: one doubling and one
/// collapse per edge beyond the first.
pub fn certify_tree(g: &PartiteHypergraph) -> Result<SpCertificate> {
    if g.arity() != 2 {
        return Err(Error::BadParameter("trees are bipartite".into()));
    }
    if g.edge_count() + 1 != g.vertex_count() || g.connected_components().len() != 1 {
        return Err(Error::Invalid("input is not a tree".into()));
    }
    let first = g.edge_list().first().cloned().ok_or_else(|| Error::Invalid("empty tree".into()))?;
    let mut synth = Synth::new();
    let mut layout: Layout = BTreeMap::new();
    layout.insert((0, first[0]), (0, 0));
    layout.insert((1, first[1]), (1, 0));
    let mut local: BTreeSet<CVert> = layout.values().copied().collect();

    // attach remaining vertices in BFS order from the initial edge
    let mut frontier: Vec<(SpVertex, SpVertex)> = Vec::new(); // (built, new)
    let mut built: BTreeSet<SpVertex> = layout.keys().copied().collect();
    loop {
        frontier.clear();
        for e in g.edges() {
            let a = (0, e[0]);
            let b = (1, e[1]);
            match (built.contains(&a), built.contains(&b)) {
                (true, false) => frontier.push((a, b)),
                (false, true) => frontier.push((b, a)),
                _ => {}
            }
        }
        if frontier.is_empty() {
            break;
        }
        frontier.sort();
        frontier.dedup_by_key(|p| p.1);
        let (attach_t, new_t) = frontier[0];
        let attach = layout[&attach_t];
        let new_id = synth.leaf_add(&local, attach, &mut Vec::new())?;
        layout.insert(new_t, new_id);
        local.insert(new_id);
        built.insert(new_t);
    }
    Ok(SpCertificate {
        certificate: synth.into_certificate(),
        spine: Vec::new(),
        layout,
    })
}

/// Certifies an oriented series-parallel tree: the certificate replays to a
/// graph isomorphic to the flattened tree, and every doubling step doubles a
/// contiguous (possibly empty) segment of the spine.
pub fn certify_sp(t: &SPTree) -> Result<SpCertificate> {
    t.validate()?;
    let std_t = standard_form(t);
    debug_assert_eq!(std_t.edge_set(), t.edge_set());
    debug_assert_eq!(std_t.vertices(), t.vertices());
    std_t.validate()?;

    let spine = std_t.spine();
    let mut synth = Synth::new();
    // initial edge realizes the first spine edge
    let mut placement: Vec<CVert> = vec![(spine[0].0, 0), (spine[1].0, 0)];
    let mut local: BTreeSet<CVert> = placement.iter().copied().collect();
    for i in 2..spine.len() {
        let new_id = synth.leaf_add(&local, placement[i - 1], &mut Vec::new())?;
        placement.push(new_id);
        local.insert(new_id);
    }
    synth.root_spine = Some(placement.clone());

    let layout = synth.extend(&std_t, &placement, &mut Vec::new())?;
    Ok(SpCertificate {
        certificate: synth.into_certificate(),
        spine: placement,
        layout,
    })
}

/// Rewrites the tree so that every generalized node has a single-edge
/// primary and every parallel node pairs the fold of its shorter branches
/// against its longest branch, which is then a series composition. The
/// flattened graph is unchanged.
pub fn standard_form(t: &SPTree) -> SPTree {
    match t {
        SPTree::Edge { .. } => t.clone(),
        SPTree::Series { upper, lower } => SPTree::Series {
            upper: Box::new(standard_form(upper)),
            lower: Box::new(standard_form(lower)),
        },
        SPTree::Generalized { primary, dangler, at_top } => normalize_generalized(
            standard_form(primary),
            standard_form(dangler),
            *at_top,
        ),
        SPTree::Parallel { .. } => {
            let mut leaves = Vec::new();
            collect_parallel_leaves(t, &mut leaves);
            // longest spine becomes the series side; first maximum wins
            let max_idx = leaves
                .iter()
                .enumerate()
                .max_by(|(i, a), (j, b)| {
                    a.spine_len().cmp(&b.spine_len()).then(j.cmp(i))
                })
                .map(|(i, _)| i)
                .expect("parallel node has leaves");
            let second = leaves.remove(max_idx);
            let mut it = leaves.into_iter();
            let mut first = it.next().expect("parallel node has >= 2 leaves");
            for leaf in it {
                first = SPTree::Parallel {
                    first: Box::new(first),
                    second: Box::new(leaf),
                };
            }
            SPTree::Parallel {
                first: Box::new(first),
                second: Box::new(second),
            }
        }
    }
}

/// Flattens nested parallel compositions into their non-parallel leaves,
/// normalizing each leaf. Normalizing a generalized node can surface a new
/// parallel node, which is flattened in turn.
fn collect_parallel_leaves(t: &SPTree, out: &mut Vec<SPTree>) {
    match t {
        SPTree::Parallel { first, second } => {
            collect_parallel_leaves(first, out);
            collect_parallel_leaves(second, out);
        }
        other => {
            let normalized = standard_form(other);
            if matches!(normalized, SPTree::Parallel { .. }) {
                collect_parallel_leaves(&normalized, out);
            } else {
                out.push(normalized);
            }
        }
    }
}

/// Pushes a dangler into a normalized tree so that every generalized node
/// keeps a primary of spine length one. Any spine-1 tree absorbs the
/// dangler directly; series and parallel nodes route it into the child
/// carrying the attachment end. The flattened graph is unchanged.
fn normalize_generalized(primary: SPTree, dangler: SPTree, at_top: bool) -> SPTree {
    if primary.spine_len() == 1 {
        return SPTree::Generalized {
            primary: Box::new(primary),
            dangler: Box::new(dangler),
            at_top,
        };
    }
    match primary {
        SPTree::Series { upper, lower } => {
            if at_top {
                SPTree::Series {
                    upper: Box::new(normalize_generalized(*upper, dangler, true)),
                    lower,
                }
            } else {
                SPTree::Series {
                    upper,
                    lower: Box::new(normalize_generalized(*lower, dangler, false)),
                }
            }
        }
        SPTree::Parallel { first, second } => {
            // both endpoints are shared; route into the series side, which
            // keeps the standard form intact
            SPTree::Parallel {
                first,
                second: Box::new(normalize_generalized(*second, dangler, at_top)),
            }
        }
        SPTree::Generalized {
            primary: inner_primary,
            dangler: inner_dangler,
            at_top: inner_at_top,
        } => {
            // a normalized generalized node has spine 1 and is handled
            // above; reaching here means the primary was not yet normalized
            SPTree::Generalized {
                primary: Box::new(normalize_generalized(*inner_primary, dangler, at_top)),
                dangler: inner_dangler,
                at_top: inner_at_top,
            }
        }
        SPTree::Edge { .. } => unreachable!("an edge has spine length one"),
    }
}

struct Segment {
    /// built subtree whose dragged copy first collapses onto its spine copy
    tree: Option<(SPTree, Layout)>,
    /// ids of the segment's spine, oriented along the chain
    path: Vec<CVert>,
}

struct Ambient {
    /// shared vertices; pins[0] starts the chain
    pins: Vec<CVert>,
    /// spine placement of the wrapped child, endpoints at the pins
    child_spine: Vec<CVert>,
    segments: Vec<Segment>,
    /// two pins close the chain: fold endpoint-to-endpoint; one pin leaves
    /// it open: fold onto the attachment edge
    closed: bool,
}

impl Ambient {
    fn drag_set(&self, doubled: &BTreeSet<CVert>) -> BTreeSet<CVert> {
        let mut out = BTreeSet::new();
        for seg in &self.segments {
            if let Some((_, layout)) = &seg.tree {
                out.extend(layout.values().copied());
            }
            out.extend(seg.path.iter().copied());
        }
        for pin in &self.pins {
            if !doubled.contains(pin) {
                out.remove(pin);
            }
        }
        out
    }

    fn chain(&self) -> Vec<CVert> {
        let mut chain: Vec<CVert> = Vec::new();
        for seg in &self.segments {
            if chain.is_empty() {
                chain.extend(seg.path.iter().copied());
            } else {
                debug_assert_eq!(chain.last(), seg.path.first());
                chain.extend(seg.path.iter().skip(1).copied());
            }
        }
        chain
    }
}

struct Synth {
    graph: PartiteHypergraph,
    steps: Vec<Step>,
    root_spine: Option<Vec<CVert>>,
    fuel: u32,
}

impl Synth {
    fn new() -> Self {
        Synth {
            graph: PartiteHypergraph::single_edge(2, vec![0, 0]).expect("initial edge"),
            steps: Vec::new(),
            root_spine: None,
            fuel: 10_000,
        }
    }

    fn into_certificate(self) -> Certificate {
        Certificate {
            arity: 2,
            initial: vec![0, 0],
            steps: self.steps,
        }
    }

    fn push_double(&mut self, doubled: &BTreeSet<CVert>) -> Result<BTreeMap<CVert, CVert>> {
        self.assert_contiguous(doubled)?;
        let mut sub = SideSubset::empty(2);
        for &(s, id) in doubled {
            sub.insert(s, id);
        }
        let step = DoublingStep { doubled: sub };
        let (next, copies) = apply_doubling(&self.graph, &step)?;
        self.graph = next;
        self.steps.push(Step::Double(step));
        let mut map = BTreeMap::new();
        for (s, m) in copies.per_side.iter().enumerate() {
            for (&old, &new) in m {
                map.insert((s, old), (s, new));
            }
        }
        Ok(map)
    }

    fn push_collapse(&mut self, removed: &BTreeMap<CVert, CVert>) -> Result<()> {
        if removed.is_empty() {
            return Ok(());
        }
        let mut kept = SideSubset::empty(2);
        for s in 0..2 {
            for &id in self.graph.side(s) {
                if !removed.contains_key(&(s, id)) {
                    kept.insert(s, id);
                }
            }
        }
        let mut mapping: Vec<BTreeMap<VertexId, VertexId>> = vec![BTreeMap::new(); 2];
        for (&(s, from), &(ts, to)) in removed {
            debug_assert_eq!(s, ts, "collapse maps stay inside a side");
            mapping[s].insert(from, to);
        }
        let step = CollapseStep { kept, mapping };
        self.graph = apply_collapse(&self.graph, &step)?;
        self.steps.push(Step::Collapse(step));
        Ok(())
    }

    /// Doubled vertices on the root spine must form a contiguous segment.
    fn assert_contiguous(&self, doubled: &BTreeSet<CVert>) -> Result<()> {
        let Some(spine) = &self.root_spine else { return Ok(()) };
        let hits: Vec<bool> = spine.iter().map(|v| doubled.contains(v)).collect();
        let first = hits.iter().position(|&h| h);
        let last = hits.iter().rposition(|&h| h);
        if let (Some(a), Some(b)) = (first, last) {
            if hits[a..=b].iter().any(|&h| !h) {
                return Err(Error::Internal(format!(
                    "doubling breaks spine contiguity: {hits:?}"
                )));
            }
        }
        Ok(())
    }

    /// One doubling, transformed through the ambient stack (innermost
    /// last): any doubled pin drags its chain, whose copies are collapsed
    /// back right after the doubling. Drags cascade inside out — an inner
    /// drag can double an outer pin — while the cleanup collapses run
    /// outside in, because an outer fold lands on the hybrid spine of its
    /// child, which may consist of inner copies that must still exist.
    fn emit_double(
        &mut self,
        base: &BTreeSet<CVert>,
        ambients: &[Ambient],
    ) -> Result<BTreeMap<CVert, CVert>> {
        let mut doubled = base.clone();
        let mut triggered = Vec::new();
        for (i, a) in ambients.iter().enumerate().rev() {
            if a.pins.iter().any(|p| doubled.contains(p)) {
                doubled.extend(a.drag_set(&doubled));
                triggered.push(i);
            }
        }
        triggered.sort();
        let copies = self.push_double(&doubled)?;
        let hybrid = |v: &CVert| copies.get(v).copied().unwrap_or(*v);

        // outermost ambient first
        for &i in &triggered {
            let a = &ambients[i];
            // dragged built subtrees collapse onto their spine copies
            for seg in &a.segments {
                if let Some((tree, layout)) = &seg.tree {
                    let retraction = spine_retraction(tree);
                    let spine: BTreeSet<SpVertex> = tree.spine().into_iter().collect();
                    let mut removed = BTreeMap::new();
                    for v in tree.vertices() {
                        if spine.contains(&v) {
                            continue;
                        }
                        let src = copies
                            .get(&layout[&v])
                            .copied()
                            .ok_or_else(|| Error::Internal("dragged vertex has no copy".into()))?;
                        removed.insert(src, hybrid(&layout[&retraction[&v]]));
                    }
                    self.push_collapse(&removed)?;
                }
            }
            // fold the chain copy onto the child's hybrid spine
            let chain = a.chain();
            let p1: Vec<CVert> = chain.iter().map(&hybrid).collect();
            let mut removed = BTreeMap::new();
            if a.closed {
                let p2: Vec<CVert> = a.child_spine.iter().map(&hybrid).collect();
                if p1.first() != p2.first() || p1.last() != p2.last() {
                    return Err(Error::Internal("fold endpoints disagree".into()));
                }
                if p1.len() < p2.len() || (p1.len() - p2.len()) % 2 != 0 {
                    return Err(Error::Internal(format!(
                        "fold length mismatch: {} onto {}",
                        p1.len(),
                        p2.len()
                    )));
                }
                let len2 = p2.len() - 1;
                for (i, &src) in p1.iter().enumerate().skip(1) {
                    if i == p1.len() - 1 {
                        break;
                    }
                    let tgt = if i <= len2 { p2[i] } else { p2[len2 - (i - len2) % 2] };
                    if src != tgt {
                        removed.insert(src, tgt);
                    }
                }
            } else {
                // open chain: fold onto the attachment edge (pin, neighbor)
                let pin = a.pins[0];
                let x = if a.child_spine[0] == pin {
                    a.child_spine[1]
                } else if *a.child_spine.last().unwrap() == pin {
                    a.child_spine[a.child_spine.len() - 2]
                } else {
                    return Err(Error::Internal("pin not at a child spine end".into()));
                };
                let anchor = hybrid(&pin);
                let y = hybrid(&x);
                debug_assert_eq!(p1[0], anchor);
                for (i, &src) in p1.iter().enumerate().skip(1) {
                    let tgt = if i % 2 == 1 { y } else { anchor };
                    removed.insert(src, tgt);
                }
            }
            self.push_collapse(&removed)?;
        }
        Ok(copies)
    }

    /// Adds a pendant vertex at `attach`: fix it, double every other local
    /// vertex, keep the copy of one attachment edge's far endpoint as the
    /// fresh leaf and collapse the remaining copies onto the attachment
    /// edge by sides.
    fn leaf_add(
        &mut self,
        local: &BTreeSet<CVert>,
        attach: CVert,
        ambients: &mut Vec<Ambient>,
    ) -> Result<CVert> {
        let w_edge = self
            .graph
            .edges()
            .iter()
            .filter_map(|e| {
                let pts = [(0usize, e[0]), (1usize, e[1])];
                if pts[attach.0] == attach && local.contains(&pts[1 - attach.0]) {
                    Some(pts[1 - attach.0])
                } else {
                    None
                }
            })
            .min()
            .ok_or_else(|| Error::Internal("attachment vertex has no local edge".into()))?;
        let base: BTreeSet<CVert> = local.iter().copied().filter(|v| *v != attach).collect();
        let copies = self.emit_double(&base, ambients)?;
        let leaf = copies[&w_edge];
        let mut removed = BTreeMap::new();
        for v in &base {
            let copy = copies[v];
            if copy == leaf {
                continue;
            }
            removed.insert(copy, if v.0 == attach.0 { attach } else { leaf });
        }
        self.push_collapse(&removed)?;
        Ok(leaf)
    }

    /// Extends the already-present spine placement of `t` to all of `t`.
    /// Returns the layout; placement ids persist and stay the spine.
    fn extend(
        &mut self,
        t: &SPTree,
        placement: &[CVert],
        ambients: &mut Vec<Ambient>,
    ) -> Result<Layout> {
        if self.fuel == 0 {
            return Err(Error::Internal("synthesis fuel exhausted".into()));
        }
        self.fuel -= 1;
        debug_assert_eq!(placement.len(), t.spine_len() + 1);
        match t {
            SPTree::Edge { top, bottom } => Ok(BTreeMap::from([
                (*top, placement[0]),
                (*bottom, placement[1]),
            ])),
            SPTree::Series { upper, lower } => {
                let l1 = upper.spine_len();
                let pl1: Vec<CVert> = placement[..=l1].to_vec();
                let pl2: Vec<CVert> = placement[l1..].to_vec();
                let w = pl1[l1];
                ambients.push(Ambient {
                    pins: vec![w],
                    child_spine: pl1.clone(),
                    segments: vec![Segment { tree: None, path: pl2.clone() }],
                    closed: false,
                });
                let lay1 = self.extend(upper, &pl1, ambients)?;
                ambients.pop();

                let mut rev1 = pl1.clone();
                rev1.reverse();
                ambients.push(Ambient {
                    pins: vec![w],
                    child_spine: pl2.clone(),
                    segments: vec![Segment {
                        tree: Some(((**upper).clone(), lay1.clone())),
                        path: rev1,
                    }],
                    closed: false,
                });
                let lay2 = self.extend(lower, &pl2, ambients)?;
                ambients.pop();

                let mut lay = lay1;
                lay.extend(lay2);
                Ok(lay)
            }
            SPTree::Generalized { primary, dangler, at_top } => {
                let attach = if *at_top {
                    placement[0]
                } else {
                    placement[placement.len() - 1]
                };
                let mut local: BTreeSet<CVert> = placement.iter().copied().collect();
                let mut path = vec![attach];
                for _ in 0..dangler.spine_len() {
                    let new_id = self.leaf_add(&local, *path.last().unwrap(), ambients)?;
                    path.push(new_id);
                    local.insert(new_id);
                }

                ambients.push(Ambient {
                    pins: vec![attach],
                    child_spine: placement.to_vec(),
                    segments: vec![Segment { tree: None, path: path.clone() }],
                    closed: false,
                });
                let lay1 = self.extend(primary, placement, ambients)?;
                ambients.pop();

                let from_attach: Vec<CVert> = if *at_top {
                    placement.to_vec()
                } else {
                    placement.iter().rev().copied().collect()
                };
                ambients.push(Ambient {
                    pins: vec![attach],
                    child_spine: path.clone(),
                    segments: vec![Segment {
                        tree: Some(((**primary).clone(), lay1.clone())),
                        path: from_attach,
                    }],
                    closed: false,
                });
                let lay2 = self.extend(dangler, &path, ambients)?;
                ambients.pop();

                let mut lay = lay1;
                lay.extend(lay2);
                Ok(lay)
            }
            SPTree::Parallel { first, second } => {
                self.extend_parallel(first, second, placement, ambients)
            }
        }
    }

    fn extend_parallel(
        &mut self,
        first: &SPTree,
        second: &SPTree,
        placement: &[CVert],
        ambients: &mut Vec<Ambient>,
    ) -> Result<Layout> {
        let SPTree::Series { upper: g3, lower: g4 } = second else {
            return Err(Error::Internal("parallel node not in standard form".into()));
        };
        let l1 = first.spine_len();
        let l3 = g3.spine_len();
        let l4 = g4.spine_len();
        debug_assert_eq!(placement.len(), l1 + 1);

        if l1 + l3 < l4 {
            // reorient: the graph seen from (w, v) has a longer spine
            let mut local: BTreeSet<CVert> = placement.iter().copied().collect();
            let mut path = vec![placement[0]];
            for _ in 0..l3 {
                let new_id = self.leaf_add(&local, *path.last().unwrap(), ambients)?;
                path.push(new_id);
                local.insert(new_id);
            }
            let rotated = SPTree::Parallel {
                first: Box::new(SPTree::Series {
                    upper: Box::new(g3.reverse()),
                    lower: Box::new(first.clone()),
                }),
                second: g4.clone(),
            };
            let std_rotated = standard_form(&rotated);
            let mut new_placement: Vec<CVert> = path.iter().rev().copied().collect();
            new_placement.extend(placement.iter().skip(1).copied());
            return self.extend(&std_rotated, &new_placement, ambients);
        }
        if l1 + l4 < l3 {
            // mirror image: reorient toward (u, w)
            let mut local: BTreeSet<CVert> = placement.iter().copied().collect();
            let mut path = vec![placement[placement.len() - 1]];
            for _ in 0..l4 {
                let new_id = self.leaf_add(&local, *path.last().unwrap(), ambients)?;
                path.push(new_id);
                local.insert(new_id);
            }
            let rotated = SPTree::Parallel {
                first: Box::new(SPTree::Series {
                    upper: Box::new(first.clone()),
                    lower: Box::new(g4.reverse()),
                }),
                second: g3.clone(),
            };
            let std_rotated = standard_form(&rotated);
            let mut new_placement: Vec<CVert> = placement.to_vec();
            new_placement.extend(path.iter().skip(1).copied());
            return self.extend(&std_rotated, &new_placement, ambients);
        }

        // main case: build the first branch, manufacture the second spine
        // alongside it, then build both series parts of the second branch
        let lay1 = self.extend(first, placement, ambients)?;
        let mut local: BTreeSet<CVert> = lay1.values().copied().collect();

        let l2 = l3 + l4;
        debug_assert!(l2 >= l1 && (l2 - l1) % 2 == 0);
        let k = (l2 - l1) / 2;
        let mut path = vec![placement[0]];
        for _ in 0..k {
            let new_id = self.leaf_add(&local, *path.last().unwrap(), ambients)?;
            path.push(new_id);
            local.insert(new_id);
        }
        // fix the bottom and the path tip, double everything else local
        let x = *path.last().unwrap();
        let v = placement[placement.len() - 1];
        let base: BTreeSet<CVert> = local.iter().copied().filter(|c| *c != x && *c != v).collect();
        let copies = self.emit_double(&base, ambients)?;
        let hybrid = |c: &CVert| copies.get(c).copied().unwrap_or(*c);
        // collapse the copy of the first branch onto its spine copy
        let retraction = spine_retraction(first);
        let spine_set: BTreeSet<SpVertex> = first.spine().iter().copied().collect();
        let mut removed = BTreeMap::new();
        for vert in first.vertices() {
            if spine_set.contains(&vert) {
                continue;
            }
            removed.insert(copies[&lay1[&vert]], hybrid(&lay1[&retraction[&vert]]));
        }
        self.push_collapse(&removed)?;

        // the manufactured second spine: down the path, back along its
        // copies, then along the copied first spine to the bottom
        let mut path2: Vec<CVert> = path.clone();
        for c in path[..k].iter().rev() {
            path2.push(copies[c]);
        }
        for c in placement[1..l1].iter() {
            path2.push(copies[c]);
        }
        path2.push(v);
        if path2.len() != l2 + 1 {
            return Err(Error::Internal("manufactured spine has the wrong length".into()));
        }

        let w2 = path2[l3];
        let pl3: Vec<CVert> = path2[..=l3].to_vec();
        let pl4: Vec<CVert> = path2[l3..].to_vec();

        // first series part, pinned at the shared top and at w2; the chain
        // around it runs through the first branch and the second spine's tail
        let mut seg2_path: Vec<CVert> = pl4.clone();
        seg2_path.reverse();
        ambients.push(Ambient {
            pins: vec![placement[0], w2],
            child_spine: pl3.clone(),
            segments: vec![
                Segment {
                    tree: Some((first.clone(), lay1.clone())),
                    path: placement.to_vec(),
                },
                Segment { tree: None, path: seg2_path },
            ],
            closed: true,
        });
        let lay3 = self.extend(g3, &pl3, ambients)?;
        ambients.pop();

        // second series part, pinned at w2 and the shared bottom
        let mut rev3: Vec<CVert> = pl3.clone();
        rev3.reverse();
        ambients.push(Ambient {
            pins: vec![w2, v],
            child_spine: pl4.clone(),
            segments: vec![
                Segment {
                    tree: Some(((**g3).clone(), lay3.clone())),
                    path: rev3,
                },
                Segment {
                    tree: Some((first.clone(), lay1.clone())),
                    path: placement.to_vec(),
                },
            ],
            closed: true,
        });
        let lay4 = self.extend(g4, &pl4, ambients)?;
        ambients.pop();

        let mut lay = lay1;
        lay.extend(lay3);
        lay.extend(lay4);
        Ok(lay)
    }
}
