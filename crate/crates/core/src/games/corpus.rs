//! Seeded random game generation for the property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use super::Game;
use crate::hypergraph::PartiteHypergraph;
use crate::Result;

/// A random two-prover game with the given alphabet sizes: the question set
/// is a random subset of the product covering every question, the predicate
/// a random table. Deterministic in the seed.
pub fn random_game(seed: u64, questions: (usize, usize), answers: (u32, u32)) -> Result<Game> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (q1, q2) = questions;
    let mut edges: BTreeSet<Vec<u32>> = BTreeSet::new();
    // cover both sides, then sprinkle extra edges
    for a in 0..q1 as u32 {
        edges.insert(vec![a, rng.gen_range(0..q2 as u32)]);
    }
    for b in 0..q2 as u32 {
        edges.insert(vec![rng.gen_range(0..q1 as u32), b]);
    }
    for _ in 0..q1 * q2 {
        if rng.gen_bool(0.4) {
            edges.insert(vec![rng.gen_range(0..q1 as u32), rng.gen_range(0..q2 as u32)]);
        }
    }
    let sides = vec![
        (0..q1 as u32).collect(),
        (0..q2 as u32).collect(),
    ];
    let questions = PartiteHypergraph::new(2, sides, edges)?;
    // random predicate bits, biased toward acceptance so values stay
    // interesting but nontrivial games remain common
    let bits: Vec<bool> = (0..questions.edge_count() * (answers.0 * answers.1) as usize)
        .map(|_| rng.gen_bool(0.6))
        .collect();
    let edge_list = questions.edge_list();
    let counts = vec![answers.0, answers.1];
    Game::new(questions, counts.clone(), move |e, a| {
        let ei = edge_list.iter().position(|x| x == e).unwrap();
        bits[ei * (counts[0] * counts[1]) as usize + (a[0] * counts[1] + a[1]) as usize]
    })
}
