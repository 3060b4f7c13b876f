//! Coloring games: the provers minimize the number of distinct verifier
//! outputs instead of maximizing acceptance.

use std::collections::{BTreeMap, BTreeSet};

use super::{next_tuple, tuple_index, Strategy};
use crate::hypergraph::{NamedHypergraph, PartiteHypergraph, VertexId};
use crate::{Error, Result};

/// Output universe element. Question-tuple outputs are tagged distinct from
/// palette colors: the fallback branch of the line-coloring game outputs the
/// verifier's own question tuple, which must never coincide with a palette
/// color.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Palette(u32),
    QuestionTuple(usize),
}

#[derive(Clone, Debug)]
pub struct ColoringGame {
    pub questions: PartiteHypergraph,
    pub answer_counts: Vec<u32>,
    outputs: Vec<Vec<Color>>,
    edge_list: Vec<Vec<VertexId>>,
}

impl ColoringGame {
    pub fn new(
        questions: PartiteHypergraph,
        answer_counts: Vec<u32>,
        output: impl Fn(&[VertexId], &[u32]) -> Color,
    ) -> Result<Self> {
        if answer_counts.len() != questions.arity() {
            return Err(Error::ArityMismatch(answer_counts.len(), questions.arity()));
        }
        let edge_list = questions.edge_list();
        let combos: u128 = answer_counts.iter().map(|&c| c as u128).product();
        if combos.saturating_mul(edge_list.len() as u128) > 1 << 24 {
            return Err(Error::BudgetExceeded {
                needed: combos * edge_list.len() as u128,
                budget: 1 << 24,
            });
        }
        let mut outputs = Vec::with_capacity(edge_list.len());
        let mut tuple = vec![0u32; answer_counts.len()];
        for e in &edge_list {
            let mut row = Vec::with_capacity(combos as usize);
            tuple.iter_mut().for_each(|t| *t = 0);
            loop {
                row.push(output(e, &tuple));
                if !next_tuple(&mut tuple, &answer_counts) {
                    break;
                }
            }
            outputs.push(row);
        }
        Ok(ColoringGame {
            questions,
            answer_counts,
            outputs,
            edge_list,
        })
    }

    pub fn arity(&self) -> usize {
        self.questions.arity()
    }

    pub fn edge_list(&self) -> &[Vec<VertexId>] {
        &self.edge_list
    }

    pub fn output(&self, edge_index: usize, answers: &[u32]) -> &Color {
        &self.outputs[edge_index][tuple_index(answers, &self.answer_counts)]
    }

    /// Colors a strategy lets the verifier emit, over all question tuples.
    pub fn palette_of(&self, s: &Strategy) -> Result<BTreeSet<Color>> {
        let mut colors = BTreeSet::new();
        let mut answers = vec![0u32; self.arity()];
        for (i, e) in self.edge_list.iter().enumerate() {
            for (j, &q) in e.iter().enumerate() {
                answers[j] = s.answer(j, q).ok_or(Error::MapNotTotal { side: j, vertex: q })?;
            }
            colors.insert(self.output(i, &answers).clone());
        }
        Ok(colors)
    }
}

/// Exact minimum number of distinct outputs over deterministic strategies,
/// with the lexicographically least witness.
pub fn coloring_value(cg: &ColoringGame, budget: u128) -> Result<(usize, Strategy)> {
    let r = cg.arity();
    let domains: Vec<Vec<VertexId>> = (0..r)
        .map(|j| cg.questions.side(j).iter().copied().collect())
        .collect();
    let mut space: u128 = 1;
    for j in 0..r {
        space = space
            .saturating_mul((cg.answer_counts[j] as u128).saturating_pow(domains[j].len() as u32));
    }
    if space > budget {
        return Err(Error::BudgetExceeded { needed: space, budget });
    }
    let flat: Vec<(usize, VertexId)> = (0..r)
        .flat_map(|j| domains[j].iter().map(move |&q| (j, q)))
        .collect();
    let mut assign = vec![0u32; flat.len()];
    let mut best: Option<(usize, Vec<u32>)> = None;
    loop {
        let mut colors = BTreeSet::new();
        let mut answers = vec![0u32; r];
        for (i, e) in cg.edge_list.iter().enumerate() {
            for (j, &q) in e.iter().enumerate() {
                let slot = flat.iter().position(|&(jj, qq)| jj == j && qq == q).unwrap();
                answers[j] = assign[slot];
            }
            colors.insert(cg.output(i, &answers).clone());
        }
        if best.as_ref().is_none_or(|(c, _)| colors.len() < *c) {
            best = Some((colors.len(), assign.clone()));
        }
        let mut j = flat.len();
        let done = loop {
            if j == 0 {
                break true;
            }
            j -= 1;
            assign[j] += 1;
            if assign[j] < cg.answer_counts[flat[j].0] {
                break false;
            }
            assign[j] = 0;
        };
        if done {
            break;
        }
    }
    let (count, assign) = best.expect("at least one strategy");
    let mut maps = vec![BTreeMap::new(); r];
    for (i, &(j, q)) in flat.iter().enumerate() {
        maps[j].insert(q, assign[i]);
    }
    Ok((count, Strategy { maps }))
}

/// n-fold repetition of a coloring game: the output universe is the n-fold
/// product, one color per coordinate.
pub fn repeat_coloring_game(cg: &ColoringGame, n: usize, budget: u128) -> Result<ColoringGame> {
    let repeated = super::repeat_game(
        &super::Game::new(cg.questions.clone(), cg.answer_counts.clone(), |_, _| true)?,
        n,
        budget,
    )?;
    let base = cg.clone();
    let r = cg.arity();
    let side_lists: Vec<Vec<VertexId>> = (0..r)
        .map(|j| cg.questions.side(j).iter().copied().collect())
        .collect();
    // a product color is a tuple of base colors; flatten injectively via a
    // registry so the palette stays contiguous
    let registry: std::cell::RefCell<BTreeMap<Vec<Color>, u32>> =
        std::cell::RefCell::new(BTreeMap::new());
    let questions = repeated.questions.clone();
    let answer_counts = repeated.answer_counts.clone();
    ColoringGame::new(questions, answer_counts, move |e, answers| {
        let mut colors = Vec::with_capacity(n);
        for i in 0..n {
            let shift = n - 1 - i;
            let mut base_edge = vec![0 as VertexId; r];
            let mut base_answers = vec![0u32; r];
            for j in 0..r {
                let qdiv = (side_lists[j].len() as u32).pow(shift as u32);
                let qpos = (e[j] / qdiv) % side_lists[j].len() as u32;
                base_edge[j] = side_lists[j][qpos as usize];
                let adiv = base.answer_counts[j].pow(shift as u32);
                base_answers[j] = (answers[j] / adiv) % base.answer_counts[j];
            }
            let k = base
                .edge_list
                .binary_search_by(|x| x.as_slice().cmp(&base_edge))
                .expect("product edge decodes to base edges");
            colors.push(base.output(k, &base_answers).clone());
        }
        let mut reg = registry.borrow_mut();
        let next = reg.len() as u32;
        Color::Palette(*reg.entry(colors).or_insert(next))
    })
}

/// The line-coloring game for a coloring `C: [r]^n → [c]` (given as color
/// per string in lexicographic order). Verifier checks as in the line-set
/// game; on success it outputs `C` of the induced string, otherwise its own
/// question tuple.
pub fn build_coloring_game_gc(
    r: usize,
    n: usize,
    coloring: &[u32],
) -> Result<ColoringGame> {
    if r < 3 {
        return Err(Error::BadParameter("need r >= 3".into()));
    }
    let universe = super::dhj::all_strings(r as u8, n);
    if coloring.len() != universe.len() {
        return Err(Error::BadParameter(format!(
            "coloring must assign all {} strings",
            universe.len()
        )));
    }
    let questions = NamedHypergraph::Qr(r).build()?;
    let answer_count = (1u32 << n) * n as u32;
    let coloring = coloring.to_vec();
    let edge_rank = |edge: &[VertexId]| edge.iter().position(|&q| q == 1).expect("edge of Qr");
    ColoringGame::new(questions, vec![answer_count; r], move |edge, answers| {
        let a = edge_rank(edge);
        let decoded: Vec<(u32, u32)> = answers
            .iter()
            .map(|&id| super::gs::decode_answer(id, n))
            .collect();
        let mut union = 0u32;
        let mut ok = true;
        for &(t, _) in &decoded {
            if union & t != 0 {
                ok = false;
                break;
            }
            union |= t;
        }
        ok = ok && union == (1 << n) - 1;
        let z = decoded[0].1;
        ok = ok && decoded.iter().all(|&(_, zj)| zj == z);
        ok = ok && decoded[a].0 & (1 << (z - 1)) != 0;
        if !ok {
            return Color::QuestionTuple(a);
        }
        let mut string = vec![0u8; n];
        for (j, &(t, _)) in decoded.iter().enumerate() {
            for (i, sym) in string.iter_mut().enumerate() {
                if t & (1 << i) != 0 {
                    *sym = j as u8 + 1;
                }
            }
        }
        let idx = universe.iter().position(|s| *s == string).expect("valid string");
        Color::Palette(coloring[idx])
    })
}

/// Minimum color count admitting a coloring of `[r]^n` with no
/// monochromatic combinatorial line, by exhaustive coloring search, with a
/// witness coloring.
pub fn hj_coeff(r: u8, n: usize, budget: u128) -> Result<(usize, Vec<u32>)> {
    let universe = super::dhj::all_strings(r, n);
    let m = universe.len();
    let lines: Vec<Vec<usize>> = {
        let index = |s: &[u8]| universe.iter().position(|x| x == s).unwrap();
        super::dhj::all_patterns(r, n)
            .iter()
            .map(|p| (1..=r).map(|q| index(&p.substitute(q))).collect())
            .collect()
    };
    for c in 1..=m {
        let space = (c as u128).saturating_pow(m as u32);
        if space > budget {
            return Err(Error::BudgetExceeded { needed: space, budget });
        }
        let mut coloring = vec![0u32; m];
        loop {
            let mono = lines
                .iter()
                .any(|l| l.iter().all(|&i| coloring[i] == coloring[l[0]]));
            if !mono {
                return Ok((c, coloring));
            }
            let mut i = m;
            let done = loop {
                if i == 0 {
                    break true;
                }
                i -= 1;
                coloring[i] += 1;
                if (coloring[i] as usize) < c {
                    break false;
                }
                coloring[i] = 0;
            };
            if done {
                break;
            }
        }
    }
    Err(Error::Internal("some coloring always avoids monochromatic lines at c = r^n".into()))
}
