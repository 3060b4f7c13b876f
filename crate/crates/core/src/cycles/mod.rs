//! Bitmask graph engine for the cycle-with-shortcuts non-constructibility
//! checks.
//!
//! Vertices are bit positions in a machine word (32-bit masks, enough for
//! cycles up to 16 vertices with doubled scratch copies). A doubled copy of
//! vertex `u` reuses index `u` on the copy side; `between[u]` holds the
//! edges between copy-side `u` and the original side.

use crate::{Error, Result};

mod lemmas;

pub use lemmas::{
    check_lemma, verify_nonconstructible, Counterexample, LemmaKind, LemmaRun, Outcome, RunStats,
    Verdict,
};

pub type Mask = u32;

pub const MAX_VERTICES: usize = 16;

/// Undirected graph on the active vertex set `s`; `adj[u]` is the neighbor
/// mask of `u`. Adjacency is symmetric; edges of exported graphs lie inside
/// `s × s`, scratch states may temporarily hold more.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGraph {
    pub s: Mask,
    pub adj: Vec<Mask>,
}

impl BitGraph {
    pub fn empty(n: usize) -> Self {
        BitGraph { s: 0, adj: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|u| (0..n).all(|v| (self.adj[u] >> v) & 1 == (self.adj[v] >> u) & 1))
    }
}

/// Naive popcount used only to validate the intrinsic in tests.
pub fn popcount_naive(mut u: Mask) -> u32 {
    let mut c = 0;
    while u != 0 {
        c += u & 1;
        u >>= 1;
    }
    c
}

/// The cycle with shortcuts on `v` vertices: `u ~ u±1, u±3 (mod v)`.
pub fn cycle_shortcuts(v: usize) -> Result<BitGraph> {
    if v % 2 != 0 || v < 8 {
        return Err(Error::BadParameter(format!("need even v >= 8, got {v}")));
    }
    if v > MAX_VERTICES {
        return Err(Error::BadParameter(format!(
            "v = {v} exceeds the bitmask universe ({MAX_VERTICES})"
        )));
    }
    let mut g = BitGraph {
        s: (1u32 << v) - 1,
        adj: vec![0; v],
    };
    for u in 0..v as i64 {
        for s in [-3i64, -1, 1, 3] {
            g.adj[u as usize] |= 1 << (u + s).rem_euclid(v as i64);
        }
    }
    Ok(g)
}

/// Doubles the subset `t` of `g.s`: the copy keeps the intra-`t` edges and
/// `between[u]` records the edges from copy `u'` to the fixed part.
pub fn double_graph(t: Mask, g: &BitGraph) -> (BitGraph, Vec<Mask>) {
    let n = g.n();
    let mut gp = BitGraph { s: t, adj: vec![0; n] };
    let mut between = vec![0; n];
    for u in 0..n {
        if (1 << u) & t != 0 {
            gp.adj[u] = g.adj[u] & t;
            between[u] = g.adj[u] & !t;
        }
    }
    (gp, between)
}

/// Exchanges the role of every vertex in `t` between `g` and `gp`, updating
/// all three adjacency structures. Applying it twice restores the state.
pub fn exchange(t: Mask, g: &mut BitGraph, gp: &mut BitGraph, between: &mut [Mask]) {
    let n = g.n();
    for u in 0..n {
        if (1 << u) & t == 0 {
            continue;
        }
        let old_m = g.adj[u];
        let old_mprim = gp.adj[u];
        let old_between = between[u];

        g.adj[u] = old_between & !(1 << u);
        for v in 0..n {
            g.adj[v] &= !(1 << u);
            if g.adj[u] & (1 << v) != 0 {
                g.adj[v] |= 1 << u;
            }
        }

        // `between` must not have been modified yet at this point
        gp.adj[u] = 0;
        for vp in 0..n {
            if vp == u {
                continue;
            }
            gp.adj[vp] &= !(1 << u);
            if between[vp] & (1 << u) != 0 {
                gp.adj[u] |= 1 << vp;
                gp.adj[vp] |= 1 << u;
            }
        }

        between[u] = old_m;
        if old_between & (1 << u) != 0 {
            between[u] |= 1 << u;
        }
        for vp in 0..n {
            if vp == u {
                continue;
            }
            between[vp] &= !(1 << u);
            if old_mprim & (1 << vp) != 0 {
                between[vp] |= 1 << u;
            }
        }
    }
}

/// Union of the neighbor masks of the vertices in `t`.
pub fn neighbors(t: Mask, g: &BitGraph) -> Mask {
    let mut res = 0;
    for u in 0..g.n() {
        if (1 << u) & t != 0 {
            res |= g.adj[u];
        }
    }
    res
}

/// Can `gp` be collapsed onto `g`? On success the mapping sends each vertex
/// of `gp.s` to a vertex of `g.s` (`-1` elsewhere). Vertices are assigned in
/// increasing index order and targets tried in increasing order, so the
/// witness is deterministic.
pub fn is_collapsible(g: &BitGraph, gp: &BitGraph, between: &[Mask]) -> Option<Vec<i32>> {
    let n = g.n();
    let mut mapping = vec![-1i32; n];
    if collapse_rec(0, n, g, gp, between, &mut mapping, &mut |_| true) {
        Some(mapping)
    } else {
        None
    }
}

/// Can `gp` be collapsed onto `g` such that both `t` and `gp.s \ t` contain
/// a vertex mapped away from its natural partner (the same index in `g`)?
pub fn is_unnaturally_collapsible(
    t: Mask,
    g: &BitGraph,
    gp: &BitGraph,
    between: &[Mask],
) -> Option<Vec<i32>> {
    let n = g.n();
    let mut mapping = vec![-1i32; n];
    let gps = gp.s;
    let mut accept = move |mapping: &[i32]| {
        let mut ok1 = false;
        let mut ok2 = false;
        for up in 0..n {
            if ok1 && ok2 {
                break;
            }
            if (1 << up) & gps == 0 {
                continue;
            }
            if (1 << up) & t != 0 && mapping[up] != up as i32 {
                ok1 = true;
            } else if (1 << up) & !t != 0 && mapping[up] != up as i32 {
                ok2 = true;
            }
        }
        ok1 && ok2
    };
    if collapse_rec(0, n, g, gp, between, &mut mapping, &mut accept) {
        Some(mapping)
    } else {
        None
    }
}

fn collapse_rec(
    uprim: usize,
    n: usize,
    g: &BitGraph,
    gp: &BitGraph,
    between: &[Mask],
    mapping: &mut Vec<i32>,
    accept: &mut impl FnMut(&[i32]) -> bool,
) -> bool {
    if uprim == n {
        return accept(mapping);
    }
    if (1 << uprim) & gp.s == 0 {
        return collapse_rec(uprim + 1, n, g, gp, between, mapping, accept);
    }
    for u in 0..n {
        if (1 << u) & g.s == 0 {
            continue;
        }
        if (g.adj[u] & between[uprim]) != between[uprim] {
            continue;
        }
        // u' -> u preserves edges between u' and g
        let mut ok = true;
        for vprim in 0..uprim {
            if ok
                && gp.adj[uprim] & (1 << vprim) != 0
                && g.adj[u] & (1 << mapping[vprim] as u32) == 0
            {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        // u' -> u preserves edges between u' and preceding vertices in gp
        mapping[uprim] = u as i32;
        if collapse_rec(uprim + 1, n, g, gp, between, mapping, accept) {
            return true;
        }
    }
    false
}
