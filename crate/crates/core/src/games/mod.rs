//! Multi-prover games, exact values and parallel repetition.
//!
//! Questions are drawn uniformly from the edge set of an r-partite
//! hypergraph; a deterministic strategy maps each prover's question alphabet
//! into an opaque answer alphabet `0..answer_counts[j]`. Values are exact
//! rationals obtained by exhaustive enumeration of deterministic strategy
//! tuples; deterministic strategies attain the optimum of a finite game with
//! uniform questions, so nothing is lost.

use std::collections::BTreeMap;

use num::Zero;

use crate::hypergraph::{PartiteHypergraph, VertexId};
use crate::{ratio, Error, Ratio, Result};

pub mod coloring;
pub mod corpus;
pub mod dhj;
pub mod good;
pub mod gs;
mod text;

pub use coloring::{
    build_coloring_game_gc, coloring_value, hj_coeff, repeat_coloring_game, Color, ColoringGame,
};
pub use corpus::random_game;
pub use dhj::{
    all_strings, dhj_coeff, equidistributed_set, has_combinatorial_line, sperner_ratio, Pattern,
    PatternSym, StringSet,
};
pub use good::{find_good_vector, lift_strategy, GoodVector};
pub use gs::{
    build_game_gs, canonical_strategy_gs, gs_canonical_acceptance, line_strategy_gs,
    CanonicalGsStrategy,
};
pub use text::{parse_game, parse_string_set, render_game, render_string_set};

/// Default cap on the number of strategy tuples a value computation may
/// enumerate. Exceeding it is a hard error, never silent truncation.
pub const DEFAULT_BUDGET: u128 = 1 << 32;

#[derive(Clone, Debug)]
pub struct Game {
    pub questions: PartiteHypergraph,
    /// answer alphabet of prover j is 0..answer_counts[j]
    pub answer_counts: Vec<u32>,
    /// acceptance table: [edge index][mixed-radix answer tuple]
    accept: Vec<Vec<bool>>,
    edge_list: Vec<Vec<VertexId>>,
}

impl Game {
    pub fn new(
        questions: PartiteHypergraph,
        answer_counts: Vec<u32>,
        predicate: impl Fn(&[VertexId], &[u32]) -> bool,
    ) -> Result<Self> {
        if answer_counts.len() != questions.arity() {
            return Err(Error::ArityMismatch(answer_counts.len(), questions.arity()));
        }
        if answer_counts.iter().any(|&c| c == 0) {
            return Err(Error::BadParameter("empty answer alphabet".into()));
        }
        if !questions.is_question_set() {
            return Err(Error::BadParameter(
                "question hypergraph has impossible questions".into(),
            ));
        }
        let edge_list = questions.edge_list();
        let combos: u128 = answer_counts.iter().map(|&c| c as u128).product();
        if combos.saturating_mul(edge_list.len() as u128) > 1 << 28 {
            return Err(Error::BudgetExceeded {
                needed: combos * edge_list.len() as u128,
                budget: 1 << 28,
            });
        }
        let mut accept = Vec::with_capacity(edge_list.len());
        let mut tuple = vec![0u32; answer_counts.len()];
        for e in &edge_list {
            let mut row = Vec::with_capacity(combos as usize);
            tuple.iter_mut().for_each(|t| *t = 0);
            loop {
                row.push(predicate(e, &tuple));
                if !next_tuple(&mut tuple, &answer_counts) {
                    break;
                }
            }
            accept.push(row);
        }
        Ok(Game {
            questions,
            answer_counts,
            accept,
            edge_list,
        })
    }

    pub fn arity(&self) -> usize {
        self.questions.arity()
    }

    pub fn edge_list(&self) -> &[Vec<VertexId>] {
        &self.edge_list
    }

    pub fn accepts(&self, edge_index: usize, answers: &[u32]) -> bool {
        self.accept[edge_index][tuple_index(answers, &self.answer_counts)]
    }

    /// Index of a question edge in the dense edge list.
    pub fn edge_index(&self, edge: &[VertexId]) -> Option<usize> {
        self.edge_list.binary_search_by(|e| e.as_slice().cmp(edge)).ok()
    }
}

pub(crate) fn tuple_index(tuple: &[u32], radices: &[u32]) -> usize {
    let mut idx = 0usize;
    for (t, r) in tuple.iter().zip(radices) {
        idx = idx * *r as usize + *t as usize;
    }
    idx
}

pub(crate) fn next_tuple(tuple: &mut [u32], radices: &[u32]) -> bool {
    for j in (0..tuple.len()).rev() {
        tuple[j] += 1;
        if tuple[j] < radices[j] {
            return true;
        }
        tuple[j] = 0;
    }
    false
}

/// Deterministic strategy: one total map per prover.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Strategy {
    pub maps: Vec<BTreeMap<VertexId, u32>>,
}

impl Strategy {
    pub fn answer(&self, prover: usize, question: VertexId) -> Option<u32> {
        self.maps[prover].get(&question).copied()
    }
}

/// Acceptance probability of `s` on `g`, questions uniform over the edges.
pub fn evaluate_strategy(g: &Game, s: &Strategy) -> Result<Ratio> {
    let mut wins = 0i64;
    let mut answers = vec![0u32; g.arity()];
    for (i, e) in g.edge_list.iter().enumerate() {
        for (j, &q) in e.iter().enumerate() {
            answers[j] = s.answer(j, q).ok_or(Error::MapNotTotal {
                side: j,
                vertex: q,
            })?;
        }
        if g.accepts(i, &answers) {
            wins += 1;
        }
    }
    Ok(ratio(wins, g.edge_list.len() as i64))
}

/// Exact game value with an optimal strategy witness (the lexicographically
/// least maximizer). Enumerates deterministic strategy tuples; two-prover
/// games fix prover 1 and best-respond per question of prover 2, which is
/// exact because acceptance decomposes over prover-2 questions.
pub fn game_value(g: &Game, budget: u128) -> Result<(Ratio, Strategy)> {
    let r = g.arity();
    let domains: Vec<Vec<VertexId>> = (0..r)
        .map(|j| g.questions.side(j).iter().copied().collect())
        .collect();
    if r == 2 {
        return two_prover_value(g, &domains, budget);
    }
    let mut space: u128 = 1;
    for j in 0..r {
        space = space.saturating_mul((g.answer_counts[j] as u128).saturating_pow(domains[j].len() as u32));
    }
    if space > budget {
        return Err(Error::BudgetExceeded { needed: space, budget });
    }

    // odometer over all strategy tuples, flattened prover-major
    let flat: Vec<(usize, VertexId)> = (0..r)
        .flat_map(|j| domains[j].iter().map(move |&q| (j, q)))
        .collect();
    let mut assign = vec![0u32; flat.len()];
    let mut best: Option<(i64, Vec<u32>)> = None;
    let edge_slots: Vec<Vec<usize>> = g
        .edge_list
        .iter()
        .map(|e| {
            e.iter()
                .enumerate()
                .map(|(j, &q)| flat.iter().position(|&(jj, qq)| jj == j && qq == q).unwrap())
                .collect()
        })
        .collect();
    let mut answers = vec![0u32; r];
    loop {
        let mut wins = 0i64;
        for (i, slots) in edge_slots.iter().enumerate() {
            for (j, &slot) in slots.iter().enumerate() {
                answers[j] = assign[slot];
            }
            if g.accepts(i, &answers) {
                wins += 1;
            }
        }
        if best.as_ref().is_none_or(|(w, _)| wins > *w) {
            best = Some((wins, assign.clone()));
        }
        // advance: last slot fastest, so the first maximum found is the
        // lexicographically least witness
        let mut j = flat.len();
        let done = loop {
            if j == 0 {
                break true;
            }
            j -= 1;
            assign[j] += 1;
            if assign[j] < g.answer_counts[flat[j].0] {
                break false;
            }
            assign[j] = 0;
        };
        if done {
            break;
        }
    }
    let (wins, assign) = best.expect("at least one strategy");
    let mut maps = vec![BTreeMap::new(); r];
    for (i, &(j, q)) in flat.iter().enumerate() {
        maps[j].insert(q, assign[i]);
    }
    Ok((
        ratio(wins, g.edge_list.len() as i64),
        Strategy { maps },
    ))
}

fn two_prover_value(
    g: &Game,
    domains: &[Vec<VertexId>],
    budget: u128,
) -> Result<(Ratio, Strategy)> {
    let space = (g.answer_counts[0] as u128).saturating_pow(domains[0].len() as u32);
    if space > budget {
        return Err(Error::BudgetExceeded { needed: space, budget });
    }
    // group edges by the prover-2 question
    let q2_index: BTreeMap<VertexId, usize> = domains[1]
        .iter()
        .enumerate()
        .map(|(i, &q)| (q, i))
        .collect();
    let q1_index: BTreeMap<VertexId, usize> = domains[0]
        .iter()
        .enumerate()
        .map(|(i, &q)| (q, i))
        .collect();
    let edges_by_q2: Vec<Vec<(usize, usize)>> = {
        let mut v = vec![Vec::new(); domains[1].len()];
        for (i, e) in g.edge_list.iter().enumerate() {
            v[q2_index[&e[1]]].push((i, q1_index[&e[0]]));
        }
        v
    };

    let mut s1 = vec![0u32; domains[0].len()];
    let mut best: Option<(i64, Vec<u32>, Vec<u32>)> = None;
    loop {
        // best response of prover 2, per question independently; ties to the
        // least answer keep the witness lexicographically least
        let mut wins = 0i64;
        let mut s2 = vec![0u32; domains[1].len()];
        for (k, edges) in edges_by_q2.iter().enumerate() {
            let mut best_a = 0u32;
            let mut best_count = -1i64;
            for a in 0..g.answer_counts[1] {
                let count = edges
                    .iter()
                    .filter(|&&(i, q1)| g.accepts(i, &[s1[q1], a]))
                    .count() as i64;
                if count > best_count {
                    best_count = count;
                    best_a = a;
                }
            }
            s2[k] = best_a;
            wins += best_count;
        }
        if best.as_ref().is_none_or(|(w, _, _)| wins > *w) {
            best = Some((wins, s1.clone(), s2.clone()));
        }
        let mut j = s1.len();
        let done = loop {
            if j == 0 {
                break true;
            }
            j -= 1;
            s1[j] += 1;
            if s1[j] < g.answer_counts[0] {
                break false;
            }
            s1[j] = 0;
        };
        if done {
            break;
        }
    }
    let (wins, s1, s2) = best.expect("at least one strategy");
    let maps = vec![
        domains[0].iter().enumerate().map(|(i, &q)| (q, s1[i])).collect(),
        domains[1].iter().enumerate().map(|(i, &q)| (q, s2[i])).collect(),
    ];
    Ok((ratio(wins, g.edge_list.len() as i64), Strategy { maps }))
}

/// The n-fold parallel repetition: product question set, product answers,
/// conjunctive predicate. Repeated questions and answers are encoded as
/// mixed-radix indices over the base alphabets (most significant coordinate
/// first); [`repeated_question_id`] and [`repeated_answer_id`] expose the
/// encoding.
pub fn repeat_game(g: &Game, n: usize, budget: u128) -> Result<Game> {
    if n < 1 {
        return Err(Error::BadParameter("need n >= 1".into()));
    }
    let r = g.arity();
    let side_sizes: Vec<usize> = (0..r).map(|j| g.questions.side(j).len()).collect();
    let edge_space = (g.edge_list.len() as u128).checked_pow(n as u32);
    let answer_space: Option<u128> = g
        .answer_counts
        .iter()
        .map(|&c| (c as u128).checked_pow(n as u32))
        .try_fold(1u128, |acc, c| c.and_then(|c| acc.checked_mul(c)));
    match (edge_space, answer_space) {
        (Some(e), Some(a)) if e.saturating_mul(a) <= budget => {}
        _ => {
            return Err(Error::BudgetExceeded {
                needed: edge_space.unwrap_or(u128::MAX),
                budget,
            })
        }
    }

    let sides: Vec<std::collections::BTreeSet<VertexId>> = side_sizes
        .iter()
        .map(|&s| (0..(s as u32).pow(n as u32)).collect())
        .collect();
    let side_lists: Vec<Vec<VertexId>> = (0..r)
        .map(|j| g.questions.side(j).iter().copied().collect())
        .collect();
    let q_pos: Vec<BTreeMap<VertexId, u32>> = side_lists
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, &q)| (q, i as u32)).collect())
        .collect();

    // product edges: one per n-vector of base edges
    let mut edges = std::collections::BTreeSet::new();
    let base_edges = g.edge_list.clone();
    let mut idx = vec![0usize; n];
    loop {
        let mut e = vec![0 as VertexId; r];
        for j in 0..r {
            let mut acc = 0u32;
            for &i in idx.iter() {
                acc = acc * side_sizes[j] as u32 + q_pos[j][&base_edges[i][j]];
            }
            e[j] = acc;
        }
        edges.insert(e);
        let mut j = n;
        let done = loop {
            if j == 0 {
                break true;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < base_edges.len() {
                break false;
            }
            idx[j] = 0;
        };
        if done {
            break;
        }
    }
    let questions = PartiteHypergraph::new(r, sides, edges)?;
    let answer_counts: Vec<u32> = g.answer_counts.iter().map(|&c| c.pow(n as u32)).collect();

    let base = g.clone();
    let side_sizes_u32: Vec<u32> = side_sizes.iter().map(|&s| s as u32).collect();
    Game::new(questions, answer_counts, move |e, answers| {
        // decode coordinate i of every prover, evaluate the base predicate
        for i in 0..n {
            let shift = n - 1 - i;
            let mut base_edge = vec![0 as VertexId; r];
            let mut base_answers = vec![0u32; r];
            for j in 0..r {
                let qdiv = (side_sizes_u32[j]).pow(shift as u32);
                let qpos = (e[j] / qdiv) % side_sizes_u32[j];
                base_edge[j] = side_lists[j][qpos as usize];
                let adiv = base.answer_counts[j].pow(shift as u32);
                base_answers[j] = (answers[j] / adiv) % base.answer_counts[j];
            }
            match base.edge_index(&base_edge) {
                Some(k) => {
                    if !base.accepts(k, &base_answers) {
                        return false;
                    }
                }
                None => return false,
            }
        }
        true
    })
}

/// Encodes an n-vector of base questions of prover `j` as a repeated-game
/// question id (mixed radix over the sorted base side, MSB first).
pub fn repeated_question_id(g: &Game, j: usize, questions: &[VertexId]) -> VertexId {
    let side: Vec<VertexId> = g.questions.side(j).iter().copied().collect();
    let size = side.len() as u32;
    let mut acc = 0u32;
    for q in questions {
        let pos = side.iter().position(|x| x == q).expect("question in side") as u32;
        acc = acc * size + pos;
    }
    acc
}

/// Encodes an n-vector of base answers of prover `j`.
pub fn repeated_answer_id(g: &Game, j: usize, answers: &[u32]) -> u32 {
    let mut acc = 0u32;
    for a in answers {
        acc = acc * g.answer_counts[j] + a;
    }
    acc
}

/// `exp(-α²n/2) + f(αn/2)`: repetition bound for a non-uniform question
/// distribution whose least probability is `α / |Q̄|`.
pub fn nonuniform_bound(alpha: &Ratio, n: u64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let a = ratio_to_f64(alpha);
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::BadParameter(format!("α must lie in (0,1], got {a}")));
    }
    Ok((-a * a * n as f64 / 2.0).exp() + f(a * n as f64 / 2.0))
}

pub(crate) fn ratio_to_f64(r: &Ratio) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        if r > &Ratio::zero() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    })
}
