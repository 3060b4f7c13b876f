//! Combinatorial lines and density Hales-Jewett quantities at desk scale.

use std::collections::BTreeSet;

use crate::{ratio, Error, Ratio, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternSym {
    Sym(u8),
    Star,
}

/// A string over `[r] ∪ {*}` with at least one wildcard.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub symbols: Vec<PatternSym>,
}

impl Pattern {
    pub fn new(symbols: Vec<PatternSym>) -> Result<Self> {
        if !symbols.iter().any(|s| *s == PatternSym::Star) {
            return Err(Error::BadParameter("pattern needs at least one wildcard".into()));
        }
        Ok(Pattern { symbols })
    }

    /// Digits 1..9 and `*`.
    pub fn parse(text: &str) -> Result<Self> {
        let symbols = text
            .chars()
            .map(|c| match c {
                '*' => Ok(PatternSym::Star),
                '1'..='9' => Ok(PatternSym::Sym(c as u8 - b'0')),
                _ => Err(Error::BadParameter(format!("bad pattern symbol `{c}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(symbols)
    }

    /// The string with every wildcard replaced by `q`.
    pub fn substitute(&self, q: u8) -> Vec<u8> {
        self.symbols
            .iter()
            .map(|s| match s {
                PatternSym::Sym(x) => *x,
                PatternSym::Star => q,
            })
            .collect()
    }

    /// The combinatorial line `{b(1), ..., b(r)}`.
    pub fn line(&self, r: u8) -> Vec<Vec<u8>> {
        (1..=r).map(|q| self.substitute(q)).collect()
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.symbols {
            match s {
                PatternSym::Sym(x) => write!(f, "{x}")?,
                PatternSym::Star => write!(f, "*")?,
            }
        }
        Ok(())
    }
}

/// A subset of `[r]^n` with its exact measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringSet {
    pub r: u8,
    pub n: usize,
    pub strings: BTreeSet<Vec<u8>>,
}

impl StringSet {
    pub fn new(r: u8, n: usize, strings: Vec<Vec<u8>>) -> Result<Self> {
        if r < 1 || r > 9 {
            return Err(Error::BadParameter(format!("need 1 <= r <= 9, got {r}")));
        }
        for s in &strings {
            if s.len() != n || s.iter().any(|&x| x < 1 || x > r) {
                return Err(Error::BadParameter(format!("bad string {s:?} for [{r}]^{n}")));
            }
        }
        Ok(StringSet {
            r,
            n,
            strings: strings.into_iter().collect(),
        })
    }

    pub fn universe_size(&self) -> u64 {
        (self.r as u64).pow(self.n as u32)
    }

    /// `μ(S) = |S| / r^n`, exact.
    pub fn measure(&self) -> Ratio {
        ratio(self.strings.len() as i64, self.universe_size() as i64)
    }

    pub fn contains(&self, s: &[u8]) -> bool {
        self.strings.contains(s)
    }
}

/// All strings of `[r]^n` in lexicographic order.
pub fn all_strings(r: u8, n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::with_capacity((r as usize).pow(n as u32));
    let mut s = vec![1u8; n];
    loop {
        out.push(s.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            s[i] += 1;
            if s[i] <= r {
                break;
            }
            s[i] = 1;
        }
    }
}

/// All patterns over `[r]^n` (strings over `[r] ∪ {*}` minus the star-free
/// ones), lexicographic with `*` ordered last.
pub(crate) fn all_patterns(r: u8, n: usize) -> Vec<Pattern> {
    let mut out = Vec::new();
    let mut s = vec![0u8; n]; // 0 = star sentinel at position r
    loop {
        if s.iter().any(|&x| x == r) {
            out.push(Pattern {
                symbols: s
                    .iter()
                    .map(|&x| {
                        if x == r {
                            PatternSym::Star
                        } else {
                            PatternSym::Sym(x + 1)
                        }
                    })
                    .collect(),
            });
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            s[i] += 1;
            if s[i] <= r {
                break;
            }
            s[i] = 0;
        }
    }
}

/// Exhaustive search over all `(r+1)^n - r^n` patterns; returns the first
/// whose full line lies in `S`.
pub fn has_combinatorial_line(s: &StringSet) -> Option<Pattern> {
    all_patterns(s.r, s.n)
        .into_iter()
        .find(|p| p.line(s.r).iter().all(|x| s.contains(x)))
}

/// `ω_r^DHJ(n)`: the maximum measure of a line-free subset, with a witness.
/// Exact branch and bound on the line hypergraph: branch on the members of
/// a still-complete line, bound by the current allowed-set size.
pub fn dhj_coeff(r: u8, n: usize, budget: u128) -> Result<(Ratio, StringSet)> {
    let universe = all_strings(r, n);
    if universe.len() > 64 {
        return Err(Error::BudgetExceeded {
            needed: universe.len() as u128,
            budget: 64,
        });
    }
    let index = |s: &[u8]| universe.iter().position(|x| x == s).unwrap();
    let lines: Vec<u64> = all_patterns(r, n)
        .iter()
        .map(|p| {
            p.line(r)
                .iter()
                .map(|s| 1u64 << index(s))
                .fold(0u64, |a, b| a | b)
        })
        .collect();

    struct Bb<'a> {
        lines: &'a [u64],
        best: u64,
        best_mask: u64,
        nodes: u128,
        budget: u128,
    }
    impl Bb<'_> {
        fn run(&mut self, allowed: u64) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded {
                    needed: self.nodes,
                    budget: self.budget,
                });
            }
            if (allowed.count_ones() as u64) <= self.best {
                return Ok(());
            }
            match self.lines.iter().find(|&&l| l & allowed == l) {
                None => {
                    self.best = allowed.count_ones() as u64;
                    self.best_mask = allowed;
                    Ok(())
                }
                Some(&line) => {
                    let mut rest = line;
                    while rest != 0 {
                        let bit = rest & rest.wrapping_neg();
                        rest ^= bit;
                        self.run(allowed & !bit)?;
                    }
                    Ok(())
                }
            }
        }
    }
    let mut bb = Bb {
        lines: &lines,
        best: 0,
        best_mask: 0,
        nodes: 0,
        budget,
    };
    bb.run((1u64 << universe.len()) - 1)?;
    let witness: Vec<Vec<u8>> = universe
        .iter()
        .enumerate()
        .filter(|(i, _)| bb.best_mask & (1 << i) != 0)
        .map(|(_, s)| s.clone())
        .collect();
    let set = StringSet::new(r, n, witness)?;
    Ok((set.measure(), set))
}

/// `C(n, ⌊n/2⌋) / 2^n`, the two-symbol line-free maximum by the antichain
/// bound.
pub fn sperner_ratio(n: usize) -> Ratio {
    let mut binom: i64 = 1;
    for k in 0..(n / 2) {
        binom = binom * (n as i64 - k as i64) / (k as i64 + 1);
    }
    ratio(binom, 1i64 << n)
}

/// The equidistributed set: strings where every symbol appears exactly
/// `n/r` times.
pub fn equidistributed_set(r: u8, n: usize) -> Result<StringSet> {
    if n % r as usize != 0 {
        return Err(Error::BadParameter(format!("{r} must divide {n}")));
    }
    let want = (n / r as usize) as u64;
    let strings: Vec<Vec<u8>> = all_strings(r, n)
        .into_iter()
        .filter(|s| (1..=r).all(|sym| s.iter().filter(|&&x| x == sym).count() as u64 == want))
        .collect();
    StringSet::new(r, n, strings)
}

/// Multinomial measure of the equidistributed set, for cross-checks.
pub fn equidistributed_measure(r: u8, n: usize) -> Result<Ratio> {
    let set = equidistributed_set(r, n)?;
    Ok(set.measure())
}
