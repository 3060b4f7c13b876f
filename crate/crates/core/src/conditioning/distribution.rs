//! Same-set-hitting distributions over homomorphism spaces.
//!
//! For a certificate of `P̄` with `k` doublings and any nonempty `Q̄`, the
//! structural recursion below builds an exact-rational distribution `H` over
//! `Hom(P̄, Q̄)` such that i.i.d. vectors `f_1..f_n` hit every subset
//! `S ⊆ Q̄^n` on all edges with probability at least `μ(S)^(2^k)`, and every
//! homomorphism has probability at least `1/M^(2^k)`.

use std::collections::BTreeMap;

use num::{One, Zero};

use super::{verify_certificate, Certificate, Step, StepRecord};
use crate::hypergraph::{
    enumerate_homomorphisms, is_homomorphism, Homomorphism, PartiteHypergraph,
};
use crate::{ratio, Error, Ratio, Result};

/// Exact distribution over a homomorphism set; probabilities are positive on
/// the support and sum to exactly 1.
#[derive(Clone, Debug)]
pub struct HomDistribution {
    pub source: PartiteHypergraph,
    pub target: PartiteHypergraph,
    /// sorted by homomorphism for deterministic iteration
    pub support: BTreeMap<Homomorphism, Ratio>,
    /// doublings of the certificate that produced it (`C = 2^k`)
    pub doublings: u32,
}

impl HomDistribution {
    pub fn min_probability(&self) -> Ratio {
        self.support
            .values()
            .min()
            .cloned()
            .unwrap_or_else(Ratio::zero)
    }

    pub fn total(&self) -> Ratio {
        self.support.values().fold(Ratio::zero(), |a, b| a + b)
    }

    /// `1 / M^(2^k)`
    pub fn min_probability_bound(&self) -> Ratio {
        let m: Ratio = ratio(self.target.edge_count() as i64, 1);
        let c = 1u64 << self.doublings;
        Ratio::one() / pow_ratio(&m, c)
    }
}

fn pow_ratio(r: &Ratio, e: u64) -> Ratio {
    let mut acc = Ratio::one();
    let mut base = r.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// Builds the distribution by structural recursion over the replayed
/// certificate: uniform on `Hom(edge, Q̄) ≅ Q̄` at the base; a doubling
/// draws the B-part twice independently conditioned on the fixed part; a
/// collapse marginalizes over the removed vertices.
pub fn build_hitting_distribution(
    cert: &Certificate,
    target: &PartiteHypergraph,
) -> Result<HomDistribution> {
    if target.edge_count() == 0 {
        return Err(Error::BadParameter("target hypergraph has no edges".into()));
    }
    if cert.arity != target.arity() {
        return Err(Error::ArityMismatch(cert.arity, target.arity()));
    }
    let replay = verify_certificate(cert)?;

    // base: current graph is the initial edge; H(f_q̄) = 1/M
    let mut current = PartiteHypergraph::single_edge(cert.arity, cert.initial.clone())?;
    let m = ratio(target.edge_count() as i64, 1);
    let mut dist: BTreeMap<Homomorphism, Ratio> = BTreeMap::new();
    for e in target.edges() {
        let mut f = Homomorphism {
            maps: vec![BTreeMap::new(); cert.arity],
        };
        for (j, &v) in cert.initial.iter().enumerate() {
            f.maps[j].insert(v, e[j]);
        }
        dist.insert(f, Ratio::one() / m.clone());
    }
    let mut doublings = 0u32;

    for (step, record) in cert.steps.iter().zip(replay.transcript.iter()) {
        match (step, record) {
            (Step::Double(d), StepRecord::Doubled { copies }) => {
                doublings += 1;
                let (next, _) = super::apply_doubling(&current, d)?;
                // group the old support by its restriction to the fixed part
                let mut groups: BTreeMap<Homomorphism, Vec<(&Homomorphism, &Ratio)>> =
                    BTreeMap::new();
                for (f, p) in &dist {
                    let fixed_part = restrict_to_fixed(f, d, &current);
                    groups.entry(fixed_part).or_default().push((f, p));
                }
                let mut out: BTreeMap<Homomorphism, Ratio> = BTreeMap::new();
                for (_, members) in groups {
                    let p_a: Ratio = members
                        .iter()
                        .fold(Ratio::zero(), |acc, (_, p)| acc + (*p).clone());
                    for (f_b, p1) in &members {
                        for (f_bp, p2) in &members {
                            // H(f_A, f_B, f_B') = P(f_A)·P(f_B|f_A)·P(f_B'|f_A)
                            //                   = P1·P2/P(f_A)
                            let prob = (*p1).clone() * (*p2).clone() / p_a.clone();
                            let mut maps = (*f_b).maps.clone();
                            for (j, side_copies) in copies.per_side.iter().enumerate() {
                                for (&old, &new) in side_copies {
                                    let img = f_bp.maps[j][&old];
                                    maps[j].insert(new, img);
                                }
                            }
                            let f = Homomorphism { maps };
                            debug_assert!(
                                is_homomorphism(&f, &next, target).unwrap_or(false),
                                "doubling product must be a homomorphism"
                            );
                            *out.entry(f).or_insert_with(Ratio::zero) += prob;
                        }
                    }
                }
                dist = out;
                current = next;
            }
            (Step::Collapse(c), StepRecord::Collapsed { .. }) => {
                let next = super::apply_collapse(&current, c)?;
                let mut out: BTreeMap<Homomorphism, Ratio> = BTreeMap::new();
                for (f, p) in &dist {
                    let mut maps = vec![BTreeMap::new(); cert.arity];
                    for (j, s) in next.sides().iter().enumerate() {
                        for &v in s {
                            maps[j].insert(v, f.maps[j][&v]);
                        }
                    }
                    *out.entry(Homomorphism { maps }).or_insert_with(Ratio::zero) += p.clone();
                }
                dist = out;
                current = next;
            }
            _ => unreachable!("transcript shape matches steps"),
        }
    }

    let result = HomDistribution {
        source: current,
        target: target.clone(),
        support: dist,
        doublings,
    };
    debug_assert!(result.total().is_one(), "probabilities must sum to 1");
    // full support over Hom(P̄, Q̄)
    debug_assert_eq!(
        result.support.len(),
        enumerate_homomorphisms(&result.source, target, None)?.len()
    );
    Ok(result)
}

fn restrict_to_fixed(
    f: &Homomorphism,
    d: &super::DoublingStep,
    current: &PartiteHypergraph,
) -> Homomorphism {
    let maps = (0..current.arity())
        .map(|j| {
            current
                .side(j)
                .iter()
                .filter(|&&v| !d.doubled.contains(j, v))
                .map(|&v| (v, f.maps[j][&v]))
                .collect()
        })
        .collect();
    Homomorphism { maps }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HitMode {
    /// every subset `S ⊆ Q̄^n`; requires `M^n` small (≤ 16 elements)
    Exhaustive,
    /// deterministic sample of subsets derived from a seed
    Sampled { seed: u64, count: usize },
}

#[derive(Clone, Debug)]
pub struct HitReport {
    pub n: usize,
    pub c: u64,
    pub checked: usize,
    /// (subset size, hit probability, bound μ(S)^C) for any failures
    pub failures: Vec<(usize, Ratio, Ratio)>,
}

impl HitReport {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `Pr[∀p̄ ∈ P̄: f̲(p̄) ∈ S] ≥ μ(S)^(2^k)` exactly for subsets of
/// `Q̄^n`. Exhaustive mode enumerates all `2^(M^n)` subsets.
pub fn verify_hitting(dist: &HomDistribution, n: usize, mode: HitMode) -> Result<HitReport> {
    let m = dist.target.edge_count();
    let universe = m
        .checked_pow(n as u32)
        .ok_or_else(|| Error::BadParameter("M^n overflow".into()))?;
    let c = 1u64 << dist.doublings;

    let subsets: Vec<Vec<bool>> = match mode {
        HitMode::Exhaustive => {
            if universe > 16 {
                return Err(Error::BudgetExceeded {
                    needed: 1u128.checked_shl(universe as u32).unwrap_or(u128::MAX),
                    budget: 1 << 16,
                });
            }
            (0u32..(1 << universe))
                .map(|mask| (0..universe).map(|i| mask & (1 << i) != 0).collect())
                .collect()
        }
        HitMode::Sampled { seed, count } => {
            if universe > 64 {
                return Err(Error::BadParameter(format!(
                    "sampled mode supports M^n ≤ 64, got {universe}"
                )));
            }
            // splitmix64 stream; deterministic in the seed
            let mut state = seed;
            let mut next = move || {
                state = state.wrapping_add(0x9e3779b97f4a7c15);
                let mut z = state;
                z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
                z ^ (z >> 31)
            };
            (0..count)
                .map(|_| {
                    let bits = next();
                    (0..universe).map(|i| bits & (1 << (i % 64)) != 0).collect()
                })
                .collect()
        }
    };

    let probe = hit_probabilities(dist, n)?;
    let mu_unit = ratio(1, universe as i64);
    let mut failures = Vec::new();
    for s in &subsets {
        let size = s.iter().filter(|&&b| b).count();
        let mu = mu_unit.clone() * ratio(size as i64, 1);
        let bound = pow_ratio(&mu, c);
        let prob = probe(s);
        if prob < bound {
            failures.push((size, prob, bound));
        }
    }
    Ok(HitReport {
        n,
        c,
        checked: subsets.len(),
        failures,
    })
}

/// Exact hit probability as a closure over subsets (indexed by edge-index
/// vectors of `Q̄^n` in mixed radix, most significant coordinate first).
fn hit_probabilities<'a>(
    dist: &'a HomDistribution,
    n: usize,
) -> Result<impl Fn(&[bool]) -> Ratio + 'a> {
    let m = dist.target.edge_count();
    let edge_index: BTreeMap<Vec<u32>, usize> = dist
        .target
        .edge_list()
        .into_iter()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let source_edges = dist.source.edge_list();
    // per support element, the per-edge image indices
    let images: Vec<(Ratio, Vec<usize>)> = dist
        .support
        .iter()
        .map(|(f, p)| {
            let img: Vec<usize> = source_edges
                .iter()
                .map(|e| edge_index[&f.apply_edge(e).expect("total")])
                .collect();
            (p.clone(), img)
        })
        .collect();
    let combos = (images.len() as u128)
        .checked_pow(n as u32)
        .ok_or_else(|| Error::BadParameter("support^n overflow".into()))?;
    if combos > 1 << 24 {
        return Err(Error::BudgetExceeded {
            needed: combos,
            budget: 1 << 24,
        });
    }
    let n_edges = source_edges.len();
    Ok(move |s: &[bool]| {
        // sum over all f̲ ∈ support^n of Π H(f_i) · [∀ edges hit S]
        let mut total = Ratio::zero();
        let mut idx = vec![0usize; n];
        loop {
            let mut ok = true;
            for e in 0..n_edges {
                let mut pos = 0usize;
                for &i in idx.iter() {
                    pos = pos * m + images[i].1[e];
                }
                if !s[pos] {
                    ok = false;
                    break;
                }
            }
            if ok {
                let mut p = Ratio::one();
                for &i in idx.iter() {
                    p *= images[i].0.clone();
                }
                total += p;
            }
            let mut j = n;
            loop {
                if j == 0 {
                    return total;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < images.len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    })
}
