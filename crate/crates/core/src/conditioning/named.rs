//! Certificate generators for named families.

use std::collections::BTreeMap;

use super::{Certificate, CollapseStep, DoublingStep, Step};
use crate::hypergraph::SideSubset;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum NamedCertificate {
    /// Complete hypergraph with the given side sizes. When every side has
    /// size 2^k the certificate uses at most r·k doublings.
    Complete(Vec<usize>),
    /// Set graph `𝔖_k`, exactly 2(k-1) doublings.
    SetGraph(usize),
}

impl NamedCertificate {
    pub fn certify(&self) -> Result<Certificate> {
        match self {
            NamedCertificate::Complete(sizes) => certify_complete(sizes),
            NamedCertificate::SetGraph(k) => certify_set_graph(*k),
        }
    }
}

pub fn certify_named(spec: &NamedCertificate) -> Result<Certificate> {
    spec.certify()
}

/// Stage j grows side j from one vertex to its target size by doubling the
/// current side (capped at the remainder), so size 2^k needs k doublings.
fn certify_complete(sizes: &[usize]) -> Result<Certificate> {
    if sizes.is_empty() || sizes.iter().any(|&s| s < 1) {
        return Err(Error::BadParameter("complete certificate needs sizes >= 1".into()));
    }
    let r = sizes.len();
    let mut steps = Vec::new();
    // vertex ids on side j grow 0..cur; copies are assigned cur..cur+take in
    // ascending order of the doubled ids, matching apply_doubling
    for (j, &target) in sizes.iter().enumerate() {
        let mut cur = 1usize;
        while cur < target {
            let take = cur.min(target - cur);
            let mut doubled = SideSubset::empty(r);
            for v in 0..take as u32 {
                doubled.insert(j, v);
            }
            steps.push(Step::Double(DoublingStep { doubled }));
            cur += take;
        }
    }
    Ok(Certificate {
        arity: r,
        initial: vec![0; r],
        steps,
    })
}

/// Grows `𝔖_k` subset by subset. Right-side vertices are identified with
/// their subset bitmask, so the copy labels of the two doublings per stage
/// can be tracked exactly; since the replay assigns fresh ids by rank, a
/// relabeling collapse is never needed, only the final graph is isomorphic
/// (not equal) to the bitmask-labeled `𝔖_k`.
fn certify_set_graph(k: usize) -> Result<Certificate> {
    if k < 1 || k > 12 {
        return Err(Error::BadParameter(format!("set graph certificate needs 1 <= k <= 12, got {k}")));
    }
    // Track current labels: left[i] = prover number, right[i] = subset mask,
    // in terms of the ids the replay will assign.
    let mut left: Vec<u32> = vec![1]; // ids 0.. on side 0, labels
    let mut right: Vec<u32> = vec![1]; // ids 0.. on side 1, masks
    let mut steps = Vec::new();
    for stage in 1..k {
        let kk = stage as u32; // current graph is 𝔖_kk over [kk]
        let bit_k = 1u32 << (kk - 1);
        let bit_k1 = 1u32 << kk;
        // first doubling: double all right vertices whose label contains kk;
        // copies are labeled S ∪ {kk+1}
        let mut doubled = SideSubset::empty(2);
        let mut to_copy: Vec<(usize, u32)> = Vec::new();
        for (id, &mask) in right.iter().enumerate() {
            if mask & bit_k != 0 {
                doubled.insert(1, id as u32);
                to_copy.push((id, mask | bit_k1));
            }
        }
        steps.push(Step::Double(DoublingStep { doubled }));
        // fresh ids ascend in order of the doubled ids
        for (_, label) in &to_copy {
            right.push(*label);
        }
        // second doubling: double the left vertex labeled kk and all right
        // vertices labeled S with kk ∈ S, kk+1 ∉ S; relabel copies
        let mut doubled = SideSubset::empty(2);
        let left_id = left.iter().position(|&l| l == kk).expect("left label");
        doubled.insert(0, left_id as u32);
        let mut to_copy: Vec<u32> = Vec::new();
        for (id, &mask) in right.iter().enumerate() {
            if mask & bit_k != 0 && mask & bit_k1 == 0 {
                doubled.insert(1, id as u32);
                to_copy.push((mask & !bit_k) | bit_k1);
            }
        }
        steps.push(Step::Double(DoublingStep { doubled }));
        left.push(kk + 1);
        for label in to_copy {
            right.push(label);
        }
    }
    Ok(Certificate {
        arity: 2,
        initial: vec![0, 0],
        steps,
    })
}

/// A collapse step that keeps everything (handy in tests); never emitted by
/// the generators.
#[allow(dead_code)]
fn identity_collapse(arity: usize, kept: SideSubset) -> CollapseStep {
    CollapseStep {
        kept,
        mapping: vec![BTreeMap::new(); arity],
    }
}
