//! Good homomorphism vectors and strategy lifting.
//!
//! A vector `f_1..f_n` of homomorphisms of `Q̄` is good for `S ⊆ Q̄^n` when
//! every edge lands coordinatewise inside `S` and some `f_i` is the
//! identity. A strategy for the repeated game that wins exactly on `S` then
//! lifts through a good vector to a perfect strategy for the base game.

use std::collections::BTreeSet;

use num::One;

use super::{repeated_question_id, Game, Strategy};
use crate::hypergraph::{enumerate_homomorphisms, Homomorphism, PartiteHypergraph, VertexId};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct GoodVector {
    pub homs: Vec<Homomorphism>,
    /// a coordinate carrying the identity
    pub identity_coordinate: usize,
}

impl GoodVector {
    /// Both defining properties, checked directly against `S` (a set of
    /// edge-index vectors of `Q̄^n`).
    pub fn is_good_for(&self, q: &PartiteHypergraph, s: &BTreeSet<Vec<usize>>) -> bool {
        let id = Homomorphism::identity(q);
        if self.homs.get(self.identity_coordinate) != Some(&id) {
            return false;
        }
        let edge_list = q.edge_list();
        q.edges().iter().all(|e| {
            let image: Option<Vec<usize>> = self
                .homs
                .iter()
                .map(|f| {
                    f.apply_edge(e)
                        .and_then(|img| edge_list.iter().position(|x| *x == img))
                })
                .collect();
            image.is_some_and(|v| s.contains(&v))
        })
    }
}

/// Exhaustive search over `Hom(Q̄, Q̄)^n` for a vector good for `S`,
/// restricted to vectors with an identity coordinate. Deterministic order:
/// identity coordinate ascending, then homomorphism tuples lexicographically.
pub fn find_good_vector(
    q: &PartiteHypergraph,
    n: usize,
    s: &BTreeSet<Vec<usize>>,
    budget: u128,
) -> Result<Option<GoodVector>> {
    let homs = enumerate_homomorphisms(q, q, None)?;
    let space = (homs.len() as u128)
        .checked_pow(n as u32)
        .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget })?;
    if space > budget {
        return Err(Error::BudgetExceeded { needed: space, budget });
    }
    let id = Homomorphism::identity(q);
    let id_pos = homs.iter().position(|f| *f == id).expect("identity is a hom");
    let edge_list = q.edge_list();
    // image index of each edge under each hom
    let image: Vec<Vec<usize>> = homs
        .iter()
        .map(|f| {
            edge_list
                .iter()
                .map(|e| {
                    let img = f.apply_edge(e).expect("total");
                    edge_list.iter().position(|x| *x == img).expect("hom image is an edge")
                })
                .collect()
        })
        .collect();

    let mut pick = vec![0usize; n];
    for id_coord in 0..n {
        // pick[id_coord] pinned to the identity
        pick.iter_mut().for_each(|p| *p = 0);
        pick[id_coord] = id_pos;
        loop {
            let good = edge_list.iter().enumerate().all(|(ei, _)| {
                let key: Vec<usize> = pick.iter().map(|&h| image[h][ei]).collect();
                s.contains(&key)
            });
            if good {
                return Ok(Some(GoodVector {
                    homs: pick.iter().map(|&h| homs[h].clone()).collect(),
                    identity_coordinate: id_coord,
                }));
            }
            // advance the free coordinates
            let mut i = n;
            let done = loop {
                if i == 0 {
                    break true;
                }
                i -= 1;
                if i == id_coord {
                    continue;
                }
                pick[i] += 1;
                if pick[i] < homs.len() {
                    break false;
                }
                pick[i] = 0;
            };
            if done {
                break;
            }
        }
    }
    Ok(None)
}

/// Lifts a strategy for `𝒢^n` through a good vector: prover j sends its
/// question through `f_1^(j)..f_n^(j)`, consults the repeated strategy and
/// answers with the identity coordinate of that answer.
///
/// `winning_set` must be the set of edge-index vectors on which `repeated`
/// wins; `gv` must be certified good for it. The lift then wins `g` on
/// every question tuple.
pub fn lift_strategy(
    g: &Game,
    repeated: &Strategy,
    n: usize,
    gv: &GoodVector,
    winning_set: &BTreeSet<Vec<usize>>,
) -> Result<Strategy> {
    if !gv.is_good_for(&g.questions, winning_set) {
        return Err(Error::BadParameter(
            "vector is not good for the repeated strategy's winning set".into(),
        ));
    }
    let i = gv.identity_coordinate;
    let r = g.arity();
    let mut maps = Vec::with_capacity(r);
    for j in 0..r {
        let mut m = std::collections::BTreeMap::new();
        for &question in g.questions.side(j) {
            let vector: Vec<VertexId> = gv
                .homs
                .iter()
                .map(|f| f.apply(j, question).ok_or(Error::MapNotTotal { side: j, vertex: question }))
                .collect::<Result<_>>()?;
            let rep_q = repeated_question_id(g, j, &vector);
            let rep_answer = repeated
                .answer(j, rep_q)
                .ok_or(Error::MapNotTotal { side: j, vertex: rep_q })?;
            // coordinate i of the repeated answer (mixed radix, MSB first)
            let div = g.answer_counts[j].pow((n - 1 - i) as u32);
            m.insert(question, (rep_answer / div) % g.answer_counts[j]);
        }
        maps.push(m);
    }
    let lifted = Strategy { maps };
    let value = super::evaluate_strategy(g, &lifted)?;
    if !value.is_one() {
        return Err(Error::Internal(
            "lifted strategy must win everywhere".into(),
        ));
    }
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{evaluate_strategy, repeat_game, DEFAULT_BUDGET};
    use crate::hypergraph::NamedHypergraph;

    fn trivial_game() -> Game {
        let q = NamedHypergraph::Complete(vec![2, 2]).build().unwrap();
        Game::new(q, vec![2, 2], |_, a| a[0] == a[1]).unwrap()
    }

    #[test]
    fn all_identity_vector_good_for_full_space() {
        let q = NamedHypergraph::Qr(3).build().unwrap();
        let full: BTreeSet<Vec<usize>> = (0..3)
            .flat_map(|a| (0..3).map(move |b| vec![a, b]))
            .collect();
        let gv = find_good_vector(&q, 2, &full, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(gv.is_good_for(&q, &full));
        let id = Homomorphism::identity(&q);
        assert_eq!(gv.homs[gv.identity_coordinate], id);
    }

    #[test]
    fn missing_edge_blocks_n1() {
        // n = 1: f_1 must be the identity, whose image covers all edges
        let q = NamedHypergraph::Qr(3).build().unwrap();
        let s: BTreeSet<Vec<usize>> = [vec![0], vec![1]].into_iter().collect();
        assert!(find_good_vector(&q, 1, &s, DEFAULT_BUDGET).unwrap().is_none());
    }

    #[test]
    fn id_constant_pair_found() {
        // S = { (q̄, ē_0) : q̄ ∈ Q̄ } admits (Id, constant-ē_0)
        let q = NamedHypergraph::Qr(3).build().unwrap();
        let s: BTreeSet<Vec<usize>> = (0..3).map(|a| vec![a, 0]).collect();
        let gv = find_good_vector(&q, 2, &s, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(gv.is_good_for(&q, &s));
        assert_eq!(gv.identity_coordinate, 0);
    }

    #[test]
    fn lift_wins_everywhere() {
        // trivial base game, repeated strategy winning everywhere
        let g = trivial_game();
        let g2 = repeat_game(&g, 2, DEFAULT_BUDGET).unwrap();
        let (v2, opt2) = crate::games::game_value(&g2, DEFAULT_BUDGET).unwrap();
        assert!(v2.is_one());
        let winning: BTreeSet<Vec<usize>> = winning_set(&g, 2, &opt2);
        let gv = find_good_vector(&g.questions, 2, &winning, DEFAULT_BUDGET)
            .unwrap()
            .expect("full winning set admits all-identity");
        let lifted = lift_strategy(&g, &opt2, 2, &gv, &winning).unwrap();
        assert!(evaluate_strategy(&g, &lifted).unwrap().is_one());
    }

    #[test]
    fn lift_rejects_bad_vector() {
        let g = trivial_game();
        let g2 = repeat_game(&g, 2, DEFAULT_BUDGET).unwrap();
        let (_, opt2) = crate::games::game_value(&g2, DEFAULT_BUDGET).unwrap();
        let winning = winning_set(&g, 2, &opt2);
        let gv = GoodVector {
            homs: vec![
                Homomorphism::constant(&g.questions, &g.questions.edge_list()[0]),
                Homomorphism::identity(&g.questions),
            ],
            identity_coordinate: 0, // wrong coordinate on purpose
        };
        assert!(lift_strategy(&g, &opt2, 2, &gv, &winning).is_err());
    }

    /// edge-index vectors of `Q̄^n` on which `s` wins `g^n`
    pub(crate) fn winning_set(
        g: &Game,
        n: usize,
        s: &Strategy,
    ) -> BTreeSet<Vec<usize>> {
        let edges = g.edge_list();
        let mut out = BTreeSet::new();
        let mut idx = vec![0usize; n];
        loop {
            // per prover question vector and repeated ids
            let mut win = true;
            let mut answers_by_coord: Vec<Vec<u32>> = vec![Vec::new(); n];
            for j in 0..g.arity() {
                let qs: Vec<u32> = idx.iter().map(|&i| edges[i][j]).collect();
                let rep_q = repeated_question_id(g, j, &qs);
                let rep_a = s.answer(j, rep_q).expect("total strategy");
                for (i, coord) in answers_by_coord.iter_mut().enumerate() {
                    let div = g.answer_counts[j].pow((n - 1 - i) as u32);
                    coord.push((rep_a / div) % g.answer_counts[j]);
                }
            }
            for (i, &edge) in idx.iter().enumerate() {
                if !g.accepts(edge, &answers_by_coord[i]) {
                    win = false;
                    break;
                }
            }
            if win {
                out.insert(idx.clone());
            }
            let mut j = n;
            let done = loop {
                if j == 0 {
                    break true;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < edges.len() {
                    break false;
                }
                idx[j] = 0;
            };
            if done {
                break;
            }
        }
        out
    }

    #[test]
    fn winning_set_matches_value() {
        let g = trivial_game();
        let g2 = repeat_game(&g, 2, DEFAULT_BUDGET).unwrap();
        let (v, s) = crate::games::game_value(&g2, DEFAULT_BUDGET).unwrap();
        let w = winning_set(&g, 2, &s);
        assert_eq!(
            crate::ratio(w.len() as i64, (g.edge_list().len() * g.edge_list().len()) as i64),
            v
        );
    }
}
