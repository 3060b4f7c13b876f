//! Seeded random series-parallel trees for the synthesis test corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SPTree, SpVertex};

struct Gen {
    rng: ChaCha8Rng,
    next_id: u32,
    budget: usize,
}

impl Gen {
    fn fresh(&mut self, side: usize) -> SpVertex {
        let v = (side, self.next_id);
        self.next_id += 1;
        v
    }

    /// A terminal between `top` and `bottom`: a direct edge when the sides
    /// differ, a two-edge path otherwise.
    fn terminal(&mut self, top: SpVertex, bottom: SpVertex) -> SPTree {
        if top.0 != bottom.0 {
            SPTree::Edge { top, bottom }
        } else {
            let m = self.fresh(1 - top.0);
            SPTree::Series {
                upper: Box::new(SPTree::Edge { top, bottom: m }),
                lower: Box::new(SPTree::Edge { top: m, bottom }),
            }
        }
    }

    fn gen(&mut self, top: SpVertex, bottom: SpVertex, depth: usize) -> SPTree {
        if depth == 0 || self.budget < 2 || self.rng.gen_bool(0.3) {
            return self.terminal(top, bottom);
        }
        match self.rng.gen_range(0..3) {
            0 => {
                // series through a fresh middle vertex
                self.budget -= 1;
                let side = self.rng.gen_range(0..2);
                let m = self.fresh(side);
                SPTree::Series {
                    upper: Box::new(self.gen(top, m, depth - 1)),
                    lower: Box::new(self.gen(m, bottom, depth - 1)),
                }
            }
            1 => {
                // parallel; regenerate a child into a path when both come
                // out as the direct edge
                self.budget -= 2;
                let first = self.gen(top, bottom, depth - 1);
                let mut second = self.gen(top, bottom, depth - 1);
                if matches!(first, SPTree::Edge { .. }) && matches!(second, SPTree::Edge { .. }) {
                    let a = self.fresh(1 - top.0);
                    let b = self.fresh(top.0);
                    second = SPTree::Series {
                        upper: Box::new(SPTree::Edge { top, bottom: a }),
                        lower: Box::new(SPTree::Series {
                            upper: Box::new(SPTree::Edge { top: a, bottom: b }),
                            lower: Box::new(SPTree::Edge { top: b, bottom }),
                        }),
                    };
                }
                SPTree::Parallel {
                    first: Box::new(first),
                    second: Box::new(second),
                }
            }
            _ => {
                // dangler at the top or bottom
                self.budget -= 1;
                let at_top = self.rng.gen_bool(0.5);
                let attach = if at_top { top } else { bottom };
                let side = self.rng.gen_range(0..2);
                let tip = self.fresh(side);
                let dangler = if tip.0 == attach.0 {
                    let m = self.fresh(1 - attach.0);
                    SPTree::Series {
                        upper: Box::new(SPTree::Edge { top: attach, bottom: m }),
                        lower: Box::new(SPTree::Edge { top: m, bottom: tip }),
                    }
                } else {
                    SPTree::Edge { top: attach, bottom: tip }
                };
                SPTree::Generalized {
                    primary: Box::new(self.gen(top, bottom, depth - 1)),
                    dangler: Box::new(dangler),
                    at_top,
                }
            }
        }
    }
}

/// A random valid oriented series-parallel tree, deterministic in the seed,
/// with at most `max_vertices` vertices (graphs exceeding the cap are
/// retried with a derived seed).
pub fn random_sp_tree(seed: u64, max_vertices: usize) -> SPTree {
    let mut attempt = 0u64;
    loop {
        let mut g = Gen {
            rng: ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9))),
            next_id: 2,
            budget: max_vertices.saturating_sub(2),
        };
        let top = (0, 0);
        let bottom = (g.rng.gen_range(0..2), 1);
        let t = g.gen(top, bottom, 3);
        if t.vertices().len() <= max_vertices && t.validate().is_ok() {
            return t;
        }
        attempt += 1;
    }
}
