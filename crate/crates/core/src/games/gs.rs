//! The line-set game `𝒢_S` on the question set `Q̄_r`.
//!
//! The verifier picks a special prover `a` uniformly, sending 1 to prover
//! `a` and 0 to the rest. Answers are pairs `(T, z)` of a coordinate subset
//! and a coordinate, encoded as `mask * n + (z - 1)`. The verifier accepts
//! iff the sets `T` partition `[n]`, all `z` agree, `z ∈ T^(a)`, and the
//! string induced by the partition lies in `S`.

use std::collections::BTreeMap;

use super::dhj::{Pattern, PatternSym, StringSet};
use super::{Game, Strategy};
use crate::hypergraph::NamedHypergraph;
use crate::{ratio, Error, Ratio, Result};

/// Decodes an answer id into `(mask over [n], z ∈ 1..=n)`.
pub fn decode_answer(id: u32, n: usize) -> (u32, u32) {
    (id / n as u32, id % n as u32 + 1)
}

pub fn encode_answer(mask: u32, z: u32, n: usize) -> u32 {
    mask * n as u32 + (z - 1)
}

/// Builds `𝒢_S` for `r ≥ 3` provers and `S ⊆ [r]^n`. The answer alphabet
/// of every prover has `2^n · n` elements.
pub fn build_game_gs(r: usize, n: usize, s: &StringSet) -> Result<Game> {
    if r < 3 {
        return Err(Error::BadParameter(format!(
            "the line-set game needs r >= 3, got {r}"
        )));
    }
    if s.r != r as u8 || s.n != n {
        return Err(Error::BadParameter("string set shape mismatch".into()));
    }
    if n == 0 || n > 12 {
        return Err(Error::BadParameter(format!("need 1 <= n <= 12, got {n}")));
    }
    let questions = NamedHypergraph::Qr(r).build()?;
    let answer_count = (1u32 << n) * n as u32;
    let strings = s.strings.clone();
    Game::new(questions, vec![answer_count; r], move |edge, answers| {
        // the special prover is the one who received 1
        let a = edge.iter().position(|&q| q == 1).expect("edge of Qr");
        let decoded: Vec<(u32, u32)> = answers
            .iter()
            .map(|&id| decode_answer(id, n))
            .collect();
        // partition of [n]
        let mut union = 0u32;
        for &(t, _) in &decoded {
            if union & t != 0 {
                return false;
            }
            union |= t;
        }
        if union != (1 << n) - 1 {
            return false;
        }
        // equal special coordinate, owned by the special prover
        let z = decoded[0].1;
        if decoded.iter().any(|&(_, zj)| zj != z) {
            return false;
        }
        if decoded[a].0 & (1 << (z - 1)) == 0 {
            return false;
        }
        // induced string in S
        let mut string = vec![0u8; n];
        for (j, &(t, _)) in decoded.iter().enumerate() {
            for (i, sym) in string.iter_mut().enumerate() {
                if t & (1 << i) != 0 {
                    *sym = j as u8 + 1;
                }
            }
        }
        strings.contains(&string)
    })
}

/// The perfect strategy derived from a pattern whose line lies in `S`:
/// prover j claims the coordinates where the pattern reads j, plus the
/// wildcard block when it received 1.
pub fn line_strategy_gs(
    r: usize,
    n: usize,
    pattern: &Pattern,
    z: usize,
) -> Result<Strategy> {
    if pattern.symbols.len() != n {
        return Err(Error::BadParameter("pattern length mismatch".into()));
    }
    if z < 1 || z > n || pattern.symbols[z - 1] != PatternSym::Star {
        return Err(Error::BadParameter(format!(
            "z = {z} must point at a wildcard position"
        )));
    }
    let star_mask: u32 = pattern
        .symbols
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == PatternSym::Star)
        .map(|(i, _)| 1u32 << i)
        .sum();
    let maps = (0..r)
        .map(|j| {
            let own: u32 = pattern
                .symbols
                .iter()
                .enumerate()
                .filter(|(_, s)| **s == PatternSym::Sym(j as u8 + 1))
                .map(|(i, _)| 1u32 << i)
                .sum();
            BTreeMap::from([
                (0, encode_answer(own, z as u32, n)),
                (1, encode_answer(own | star_mask, z as u32, n)),
            ])
        })
        .collect();
    Ok(Strategy { maps })
}

/// The canonical strategy for the n-fold repetition of `𝒢_S`: in coordinate
/// i, prover j answers `(T_j, i)` where `T_j` is the set of coordinates in
/// which prover j is special. Returned as per-coordinate answer ids indexed
/// by the prover's question vector (one row per vector over {0,1}^n).
pub struct CanonicalGsStrategy {
    pub n: usize,
    /// answers[question mask as index][coordinate i] = answer id
    pub answers: Vec<Vec<u32>>,
}

pub fn canonical_strategy_gs(n: usize) -> CanonicalGsStrategy {
    let mut answers = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        // mask bit i set iff the prover received 1 in coordinate i; note the
        // question vector (q_1..q_n) maps to bits (i = coordinate - 1)
        let row = (1..=n as u32)
            .map(|i| encode_answer(mask, i, n))
            .collect();
        answers.push(row);
    }
    CanonicalGsStrategy { n, answers }
}

/// Exact acceptance probability of the canonical strategy on `𝒢_S^n`,
/// evaluated over all `r^n` question vectors without materializing the
/// repeated game. Equals `μ(S)`.
pub fn gs_canonical_acceptance(r: usize, n: usize, s: &StringSet) -> Result<Ratio> {
    if r < 3 {
        return Err(Error::BadParameter("need r >= 3".into()));
    }
    if s.r != r as u8 || s.n != n {
        return Err(Error::BadParameter("string set shape mismatch".into()));
    }
    let strategy = canonical_strategy_gs(n);
    let total = (r as i64).pow(n as u32);
    let mut wins = 0i64;
    // special-prover strings a_1..a_n, one per question vector of Q̄_r^n
    let mut specials = vec![1u8; n];
    loop {
        // prover j's question vector: 1 in coordinates where j is special
        let masks: Vec<u32> = (1..=r as u8)
            .map(|j| {
                specials
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a == j)
                    .map(|(i, _)| 1u32 << i)
                    .sum()
            })
            .collect();
        let mut all = true;
        for i in 0..n {
            // coordinate i: prover j answers (T_j, i+1); the checks reduce
            // to the induced string being in S
            let answers: Vec<(u32, u32)> = masks
                .iter()
                .map(|&m| decode_answer(strategy.answers[m as usize][i], n))
                .collect();
            let mut union = 0u32;
            let mut okay = true;
            for &(t, _) in &answers {
                if union & t != 0 {
                    okay = false;
                    break;
                }
                union |= t;
            }
            okay = okay && union == (1 << n) - 1;
            okay = okay && answers.iter().all(|&(_, z)| z == i as u32 + 1);
            let a_i = specials[i] as usize - 1;
            okay = okay && answers[a_i].0 & (1 << i) != 0;
            let mut string = vec![0u8; n];
            for (j, &(t, _)) in answers.iter().enumerate() {
                for (pos, sym) in string.iter_mut().enumerate() {
                    if t & (1 << pos) != 0 {
                        *sym = j as u8 + 1;
                    }
                }
            }
            okay = okay && s.strings.contains(&string);
            if !okay {
                all = false;
                break;
            }
        }
        if all {
            wins += 1;
        }
        // next special-prover string
        let mut i = n;
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            specials[i] += 1;
            if specials[i] <= r as u8 {
                break false;
            }
            specials[i] = 1;
        };
        if done {
            break;
        }
    }
    Ok(ratio(wins, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::dhj::StringSet;
    use crate::games::{evaluate_strategy, game_value, DEFAULT_BUDGET};
    use num::One;

    fn set(r: u8, n: usize, strings: &[&[u8]]) -> StringSet {
        StringSet::new(r, n, strings.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    #[test]
    fn alphabet_size() {
        let s = set(3, 2, &[&[1, 1]]);
        let g = build_game_gs(3, 2, &s).unwrap();
        assert_eq!(g.answer_counts, vec![8, 8, 8]);
        assert_eq!(g.edge_list().len(), 3);
    }

    #[test]
    fn full_space_n1_is_trivial() {
        let s = set(3, 1, &[&[1], &[2], &[3]]);
        let g = build_game_gs(3, 1, &s).unwrap();
        let (v, _) = game_value(&g, DEFAULT_BUDGET).unwrap();
        assert!(v.is_one());
    }

    #[test]
    fn empty_set_value_at_most_two_thirds() {
        let s = StringSet::new(3, 1, vec![]).unwrap();
        let g = build_game_gs(3, 1, &s).unwrap();
        let (v, _) = game_value(&g, DEFAULT_BUDGET).unwrap();
        assert!(v <= ratio(2, 3));
    }

    #[test]
    fn line_strategy_wins() {
        // pattern 1★ over [3]^2, line {11, 12, 13} ⊆ S
        let s = set(3, 2, &[&[1, 1], &[1, 2], &[1, 3]]);
        let g = build_game_gs(3, 2, &s).unwrap();
        let p = Pattern::parse("1*").unwrap();
        let strat = line_strategy_gs(3, 2, &p, 2).unwrap();
        assert!(evaluate_strategy(&g, &strat).unwrap().is_one());
    }

    #[test]
    fn line_strategy_r3_n1() {
        let s = set(3, 1, &[&[1], &[2], &[3]]);
        let g = build_game_gs(3, 1, &s).unwrap();
        let p = Pattern::parse("*").unwrap();
        let strat = line_strategy_gs(3, 1, &p, 1).unwrap();
        assert!(evaluate_strategy(&g, &strat).unwrap().is_one());
    }

    #[test]
    fn line_strategy_bad_z() {
        let p = Pattern::parse("1*").unwrap();
        assert!(line_strategy_gs(3, 2, &p, 1).is_err());
    }

    #[test]
    fn canonical_acceptance_examples() {
        let all: Vec<Vec<u8>> = (0..9)
            .map(|k| vec![k / 3 + 1, k % 3 + 1])
            .collect();
        let s = StringSet::new(3, 2, all).unwrap();
        assert!(gs_canonical_acceptance(3, 2, &s).unwrap().is_one());

        let s = set(3, 2, &[&[1, 2], &[2, 1]]);
        assert_eq!(gs_canonical_acceptance(3, 2, &s).unwrap(), ratio(2, 9));

        let equi = crate::games::dhj::equidistributed_set(3, 3).unwrap();
        assert_eq!(gs_canonical_acceptance(3, 3, &equi).unwrap(), ratio(2, 9));
    }
}
