//! Certificate normalization: all collapses merged into one final step.
//!
//! A collapse immediately followed by a doubling can be transposed: double
//! the collapsed set alongside, then collapse both the originals and the
//! copies. The transposed pair yields the same graph up to the identity on
//! surviving vertices, but copy ids shift, so every later step is rewritten
//! under a live vertex correspondence maintained by replaying old and new
//! timelines side by side. Repeating this bubbles every collapse to the
//! end, where adjacent collapses compose into a single step. Doubling count
//! never increases.

use std::collections::BTreeMap;

use super::{
    apply_collapse, apply_doubling, verify_certificate, Certificate, CollapseStep, DoublingStep,
    Step,
};
use crate::hypergraph::{PartiteHypergraph, SideSubset, VertexId};
use crate::{Error, Result};

/// old-timeline vertex -> new-timeline vertex, per side
type Corr = Vec<BTreeMap<VertexId, VertexId>>;

pub fn normalize_certificate(cert: &Certificate) -> Result<Certificate> {
    verify_certificate(cert)?;
    let mut steps = cert.steps.clone();
    steps.retain(|s| !matches!(s, Step::Double(d) if d.doubled.is_empty()));

    loop {
        let pos = steps
            .windows(2)
            .position(|w| matches!((&w[0], &w[1]), (Step::Collapse(_), Step::Double(_))));
        let Some(i) = pos else { break };
        let mut g = PartiteHypergraph::single_edge(cert.arity, cert.initial.clone())?;
        for s in &steps[..i] {
            g = apply_step(&g, s)?;
        }
        let (Step::Collapse(col), Step::Double(dbl)) = (steps[i].clone(), steps[i + 1].clone())
        else {
            unreachable!()
        };
        let (d2, c2, mut sigma) = transpose(&g, &col, &dbl)?;

        // rewrite the tail under the correspondence, replaying both timelines
        let mut g_old = apply_doubling(&apply_collapse(&g, &col)?, &dbl)?.0;
        let mut g_new = apply_collapse(&apply_doubling(&g, &d2)?.0, &c2)?;
        let mut new_tail = Vec::with_capacity(steps.len() - i - 2);
        for s in &steps[i + 2..] {
            match s {
                Step::Double(d) => {
                    let translated = DoublingStep {
                        doubled: translate_subset(&d.doubled, &sigma)?,
                    };
                    let (next_old, cm_old) = apply_doubling(&g_old, d)?;
                    let (next_new, cm_new) = apply_doubling(&g_new, &translated)?;
                    for j in 0..cert.arity {
                        let pairs: Vec<(VertexId, VertexId)> = cm_old.per_side[j]
                            .iter()
                            .map(|(&old, &old_copy)| {
                                let new_orig = sigma[j][&old];
                                (old_copy, cm_new.per_side[j][&new_orig])
                            })
                            .collect();
                        sigma[j].extend(pairs);
                    }
                    g_old = next_old;
                    g_new = next_new;
                    new_tail.push(Step::Double(translated));
                }
                Step::Collapse(c) => {
                    let translated = CollapseStep {
                        kept: translate_subset(&c.kept, &sigma)?,
                        mapping: (0..cert.arity)
                            .map(|j| {
                                c.mapping[j]
                                    .iter()
                                    .map(|(&from, &to)| Ok((sigma[j][&from], sigma[j][&to])))
                                    .collect::<Result<BTreeMap<_, _>>>()
                            })
                            .collect::<Result<Vec<_>>>()?,
                    };
                    g_old = apply_collapse(&g_old, c)?;
                    g_new = apply_collapse(&g_new, &translated)?;
                    for j in 0..cert.arity {
                        sigma[j].retain(|v, _| g_old.side(j).contains(v));
                    }
                    new_tail.push(Step::Collapse(translated));
                }
            }
        }
        steps.truncate(i);
        steps.push(Step::Double(d2));
        steps.push(Step::Collapse(c2));
        steps.extend(new_tail);
    }

    // merge trailing collapses into one
    let first_collapse = steps
        .iter()
        .position(|s| matches!(s, Step::Collapse(_)))
        .unwrap_or(steps.len());
    if steps.len() - first_collapse > 1 {
        let mut g = PartiteHypergraph::single_edge(cert.arity, cert.initial.clone())?;
        for s in &steps[..first_collapse] {
            g = apply_step(&g, s)?;
        }
        let mut total: Vec<BTreeMap<VertexId, VertexId>> = (0..cert.arity)
            .map(|j| g.side(j).iter().map(|&v| (v, v)).collect())
            .collect();
        let mut kept = g.all_vertices();
        for s in &steps[first_collapse..] {
            let Step::Collapse(c) = s else {
                return Err(Error::Internal("doubling after normalization point".into()));
            };
            for j in 0..cert.arity {
                for target in total[j].values_mut() {
                    if let Some(&w) = c.mapping[j].get(target) {
                        *target = w;
                    }
                }
            }
            kept = c.kept.clone();
        }
        let mapping: Vec<BTreeMap<VertexId, VertexId>> = (0..cert.arity)
            .map(|j| {
                total[j]
                    .iter()
                    .filter(|(v, _)| !kept.contains(j, **v))
                    .map(|(&v, &w)| (v, w))
                    .collect()
            })
            .collect();
        steps.truncate(first_collapse);
        steps.push(Step::Collapse(CollapseStep { kept, mapping }));
    }

    let out = Certificate {
        arity: cert.arity,
        initial: cert.initial.clone(),
        steps,
    };
    verify_certificate(&out)?;
    Ok(out)
}

fn apply_step(g: &PartiteHypergraph, s: &Step) -> Result<PartiteHypergraph> {
    match s {
        Step::Double(d) => Ok(apply_doubling(g, d)?.0),
        Step::Collapse(c) => apply_collapse(g, c),
    }
}

fn translate_subset(sub: &SideSubset, sigma: &Corr) -> Result<SideSubset> {
    let sets = sub
        .sets
        .iter()
        .enumerate()
        .map(|(j, s)| {
            s.iter()
                .map(|v| {
                    sigma[j]
                        .get(v)
                        .copied()
                        .ok_or_else(|| Error::Internal(format!("untracked vertex ({j},{v})")))
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SideSubset::from_sets(sets))
}

/// Exchange collapse-then-double over the graph `g` on which the collapse
/// acts. With A the collapsed set, B the subsequently doubled set and C the
/// rest: double A ∪ B first, then collapse A via the old mapping and A' via
/// its copy (targets inside B redirected to B'). Returns the new pair plus
/// the correspondence from the old post-pair graph to the new one.
fn transpose(
    g: &PartiteHypergraph,
    col: &CollapseStep,
    dbl: &DoublingStep,
) -> Result<(DoublingStep, CollapseStep, Corr)> {
    let r = g.arity();
    let mut a = SideSubset::empty(r);
    for j in 0..r {
        for &v in g.side(j) {
            if !col.kept.contains(j, v) {
                a.insert(j, v);
            }
        }
    }
    let mut new_doubled = SideSubset::empty(r);
    for (j, v) in a.iter() {
        new_doubled.insert(j, v);
    }
    for (j, v) in dbl.doubled.iter() {
        new_doubled.insert(j, v);
    }
    let d2 = DoublingStep { doubled: new_doubled };
    let (after, copies) = apply_doubling(g, &d2)?;

    let mut kept = SideSubset::empty(r);
    for j in 0..r {
        for &v in after.side(j) {
            let removed_original = a.contains(j, v);
            let removed_copy = a.sets[j].iter().any(|&orig| copies.get(j, orig) == Some(v));
            if !removed_original && !removed_copy {
                kept.insert(j, v);
            }
        }
    }
    let mut mapping: Vec<BTreeMap<VertexId, VertexId>> = vec![BTreeMap::new(); r];
    for (j, v) in a.iter() {
        let target = col.mapping[j][&v];
        mapping[j].insert(v, target);
        let v_copy = copies.get(j, v).expect("A is doubled");
        let target_copy = match copies.get(j, target) {
            Some(t) if dbl.doubled.contains(j, target) => t,
            _ => target,
        };
        mapping[j].insert(v_copy, target_copy);
    }

    // correspondence: old timeline doubles the collapsed graph, so B-copies
    // get different ids than in the new timeline
    let old_collapsed = apply_collapse(g, col)?;
    let (_, old_copies) = apply_doubling(&old_collapsed, dbl)?;
    let mut sigma: Corr = vec![BTreeMap::new(); r];
    for j in 0..r {
        for &v in old_collapsed.side(j) {
            sigma[j].insert(v, v); // B ∪ C keep their ids
        }
        for (&orig, &old_copy) in &old_copies.per_side[j] {
            sigma[j].insert(old_copy, copies.get(j, orig).expect("B is doubled"));
        }
    }
    Ok((d2, CollapseStep { kept, mapping }, sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::is_isomorphic;

    fn subset(left: &[u32], right: &[u32]) -> SideSubset {
        SideSubset::from_sets(vec![
            left.iter().copied().collect(),
            right.iter().copied().collect(),
        ])
    }

    #[test]
    fn already_normal_unchanged() {
        let cert = Certificate {
            arity: 2,
            initial: vec![0, 0],
            steps: vec![Step::Double(DoublingStep {
                doubled: subset(&[0], &[0]),
            })],
        };
        let n = normalize_certificate(&cert).unwrap();
        assert_eq!(n, cert);
    }

    #[test]
    fn collapse_then_double_transposed() {
        let cert = Certificate {
            arity: 2,
            initial: vec![0, 0],
            steps: vec![
                Step::Double(DoublingStep { doubled: subset(&[0], &[0]) }),
                Step::Collapse(CollapseStep {
                    kept: subset(&[0], &[0]),
                    mapping: vec![BTreeMap::from([(1, 0)]), BTreeMap::from([(1, 0)])],
                }),
                Step::Double(DoublingStep { doubled: subset(&[0], &[]) }),
            ],
        };
        let before = verify_certificate(&cert).unwrap().graph;
        let n = normalize_certificate(&cert).unwrap();
        let after = verify_certificate(&n).unwrap().graph;
        assert!(is_isomorphic(&before, &after));
        assert_eq!(n.doubling_count(), cert.doubling_count());
        let first_collapse = n
            .steps
            .iter()
            .position(|s| matches!(s, Step::Collapse(_)))
            .unwrap();
        assert!(n.steps[first_collapse..]
            .iter()
            .all(|s| matches!(s, Step::Collapse(_))));
        assert_eq!(n.steps.len() - first_collapse, 1);
    }

    #[test]
    fn doubling_count_never_increases() {
        let cert = Certificate {
            arity: 2,
            initial: vec![0, 0],
            steps: vec![
                Step::Double(DoublingStep { doubled: subset(&[0], &[0]) }),
                Step::Collapse(CollapseStep {
                    kept: subset(&[0], &[0]),
                    mapping: vec![BTreeMap::from([(1, 0)]), BTreeMap::from([(1, 0)])],
                }),
                Step::Double(DoublingStep { doubled: subset(&[0], &[]) }),
                Step::Collapse(CollapseStep {
                    kept: subset(&[0], &[0]),
                    mapping: vec![BTreeMap::from([(1, 0)]), BTreeMap::new()],
                }),
            ],
        };
        let before = verify_certificate(&cert).unwrap().graph;
        let n = normalize_certificate(&cert).unwrap();
        let after = verify_certificate(&n).unwrap().graph;
        assert!(is_isomorphic(&before, &after));
        assert!(n.doubling_count() <= cert.doubling_count());
    }

    #[test]
    fn interleaved_certificate_normalizes() {
        // double, collapse, double, collapse, double: forces two exchanges
        // and a tail rewrite across shifted copy ids
        let cert = Certificate {
            arity: 2,
            initial: vec![0, 0],
            steps: vec![
                Step::Double(DoublingStep { doubled: subset(&[0], &[]) }),
                Step::Collapse(CollapseStep {
                    kept: subset(&[0], &[0]),
                    mapping: vec![BTreeMap::from([(1, 0)]), BTreeMap::new()],
                }),
                Step::Double(DoublingStep { doubled: subset(&[0], &[0]) }),
                Step::Collapse(CollapseStep {
                    kept: subset(&[0], &[0]),
                    mapping: vec![BTreeMap::from([(1, 0)]), BTreeMap::from([(1, 0)])],
                }),
                Step::Double(DoublingStep { doubled: subset(&[], &[0]) }),
            ],
        };
        let before = verify_certificate(&cert).unwrap().graph;
        let n = normalize_certificate(&cert).unwrap();
        let after = verify_certificate(&n).unwrap().graph;
        assert!(is_isomorphic(&before, &after));
        assert!(n.doubling_count() <= cert.doubling_count());
        assert!(n.collapse_count() <= 1);
    }
}
