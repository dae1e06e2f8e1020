//! Exhaustive search for rainbow-free exact colorings.
//!
//! Colorings are enumerated as set partitions in restricted-growth form (element 0 gets
//! color 0, and each element gets at most one more than the largest color seen so far),
//! which visits every partition into exactly `r` blocks once. Rainbow-freeness only
//! depends on the partition, so this loses nothing.
//!
//! A rainbow solution needs three distinct colors and hence three distinct elements, so the
//! search works on the 3-uniform hypergraph whose edges are the solution sets with three
//! distinct elements. With pruning on, each assignment propagates along edges: once two
//! elements of an edge carry different colors, the remaining element is restricted to
//! those two colors. An element left with no allowed color kills the branch. This
//! subsumes rejecting a branch when an edge whose largest element was just colored turns
//! out tricolored.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::coloring::Coloring;
use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::formulas::{Provenance, RbResult};
use crate::modring::Modulus;

/// Largest modulus the search accepts regardless of configuration (color sets are `u64` masks).
pub const MAX_SEARCH_MODULUS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessPolicy {
    /// The lexicographically first restricted-growth string; deterministic in parallel mode.
    FirstLexicographic,
    /// Whichever witness a worker finds first.
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub n_cap: u64,
    pub prune: bool,
    pub parallel: bool,
    pub witness_policy: WitnessPolicy,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            n_cap: 20,
            prune: true,
            parallel: false,
            witness_policy: WitnessPolicy::FirstLexicographic,
        }
    }
}

impl SearchConfig {
    fn check(&self, n: Modulus) -> Result<()> {
        let cap = self.n_cap.min(MAX_SEARCH_MODULUS);
        if n.get() > cap {
            return Err(Error::CapExceeded { n: n.get(), cap });
        }
        Ok(())
    }
}

/// Three-element solution sets of an equation.
#[derive(Debug, Clone)]
pub struct RainbowHypergraph {
    n: Modulus,
    edges: BTreeSet<[u64; 3]>,
    /// `by_middle[y]` lists `(x, z)` for edges `{x, y, z}` with `x < y < z`.
    by_middle: Vec<Vec<(usize, usize)>>,
}

impl RainbowHypergraph {
    pub fn modulus(&self) -> Modulus {
        self.n
    }

    /// Edges as sorted triples.
    pub fn edges(&self) -> &BTreeSet<[u64; 3]> {
        &self.edges
    }

    pub fn is_tricolored(&self, colors: &[u32]) -> bool {
        self.edges.iter().any(|e| {
            let [x, y, z] = e.map(|v| colors[v as usize]);
            x != y && y != z && x != z
        })
    }
}

pub fn build_hypergraph(eq: &Equation) -> RainbowHypergraph {
    let n = eq.modulus();
    let edges: BTreeSet<[u64; 3]> = eq
        .solutions()
        .into_iter()
        .filter(|t| t[0] != t[1] && t[1] != t[2] && t[0] != t[2])
        .map(|mut t| {
            t.sort_unstable();
            t
        })
        .collect();
    let mut by_middle = vec![Vec::new(); n.as_usize()];
    for &[x, y, z] in &edges {
        by_middle[y as usize].push((x as usize, z as usize));
    }
    RainbowHypergraph { n, edges, by_middle }
}

struct Searcher<'a> {
    hg: &'a RainbowHypergraph,
    r: u32,
    prune: bool,
    colors: Vec<u32>,
    /// Allowed colors per element, as a bit mask; bits at or above `used` stand for new colors.
    allowed: Vec<u64>,
    trail: Vec<(usize, u64)>,
    used: u32,
}

impl<'a> Searcher<'a> {
    fn new(hg: &'a RainbowHypergraph, r: u32, prune: bool) -> Self {
        let n = hg.n.as_usize();
        Searcher {
            hg,
            r,
            prune,
            colors: vec![0; n],
            allowed: vec![u64::MAX; n],
            trail: Vec::new(),
            used: 0,
        }
    }

    fn n(&self) -> usize {
        self.colors.len()
    }

    /// Color `y` with `c` and propagate. On `false` the caller must still `undo`.
    fn assign(&mut self, y: usize, c: u32) -> bool {
        self.colors[y] = c;
        if !self.prune {
            return true;
        }
        let bit = 1u64 << c;
        for &(x, z) in &self.hg.by_middle[y] {
            let cx = self.colors[x];
            if cx == c {
                continue;
            }
            let cur = self.allowed[z];
            let next = cur & (bit | 1u64 << cx);
            if next != cur {
                self.trail.push((z, cur));
                self.allowed[z] = next;
                if next == 0 {
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (z, mask) = self.trail.pop().unwrap();
            self.allowed[z] = mask;
        }
    }

    /// Candidate colors for element `y` given the current state, ascending.
    fn candidates(&self, y: usize) -> impl Iterator<Item = u32> + '_ {
        let n = self.n();
        let remaining_after = (n - y - 1) as u32;
        let top = (self.used + 1).min(self.r);
        (0..top).filter(move |&c| {
            let used = self.used.max(c + 1);
            self.allowed[y] >> c & 1 == 1 && used + remaining_after >= self.r
        })
    }

    /// Depth-first over elements `y..n`. Returns true when `colors` holds a complete witness.
    fn dfs(&mut self, y: usize, cancel: &dyn Fn() -> bool) -> bool {
        if y == self.n() {
            return self.used == self.r && !self.hg.is_tricolored(&self.colors);
        }
        if cancel() {
            return false;
        }
        let cands: Vec<u32> = self.candidates(y).collect();
        for c in cands {
            let mark = self.trail.len();
            let saved_used = self.used;
            self.used = self.used.max(c + 1);
            if self.assign(y, c) && self.dfs(y + 1, cancel) {
                return true;
            }
            self.undo(mark);
            self.used = saved_used;
        }
        false
    }

    /// All viable partial colorings of `0..depth`, in lexicographic order.
    fn prefixes(&mut self, y: usize, depth: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if y == depth {
            out.push(prefix.clone());
            return;
        }
        let cands: Vec<u32> = self.candidates(y).collect();
        for c in cands {
            let mark = self.trail.len();
            let saved_used = self.used;
            self.used = self.used.max(c + 1);
            if self.assign(y, c) {
                prefix.push(c);
                self.prefixes(y + 1, depth, prefix, out);
                prefix.pop();
            }
            self.undo(mark);
            self.used = saved_used;
        }
    }

    fn replay(&mut self, prefix: &[u32]) -> bool {
        for (y, &c) in prefix.iter().enumerate() {
            self.used = self.used.max(c + 1);
            if !self.assign(y, c) {
                return false;
            }
        }
        true
    }
}

/// A rainbow-free exact `r`-coloring of Z_n for `eq`, if one exists.
pub fn exists_rainbow_free(eq: &Equation, r: u32, cfg: &SearchConfig) -> Result<Option<Coloring>> {
    let n = eq.modulus();
    cfg.check(n)?;
    if r == 0 || r as u64 > n.get() {
        return Ok(None);
    }
    let hg = build_hypergraph(eq);
    let found = if cfg.parallel {
        search_parallel(&hg, r, cfg)
    } else {
        let mut s = Searcher::new(&hg, r, cfg.prune);
        s.dfs(0, &|| false).then_some(s.colors)
    };
    let Some(colors) = found else {
        return Ok(None);
    };
    let c = Coloring::from_colors(n, colors)?;
    if c.num_colors() != r || !c.find_rainbow(eq)?.is_rainbow_free() {
        return Err(Error::Inconsistency(format!(
            "search returned a coloring that is not a rainbow-free exact {r}-coloring for {eq}"
        )));
    }
    Ok(Some(c))
}

fn search_parallel(hg: &RainbowHypergraph, r: u32, cfg: &SearchConfig) -> Option<Vec<u32>> {
    let n = hg.n.as_usize();
    let target = 64 * rayon::current_num_threads().max(1);
    let mut prefixes = Vec::new();
    for depth in 1..=n {
        prefixes.clear();
        Searcher::new(hg, r, cfg.prune).prefixes(0, depth, &mut Vec::new(), &mut prefixes);
        if prefixes.len() >= target || prefixes.is_empty() {
            break;
        }
    }
    let best = AtomicUsize::new(usize::MAX);
    let any_found = AtomicBool::new(false);
    let policy = cfg.witness_policy;
    let results: Vec<(usize, Vec<u32>)> = prefixes
        .par_iter()
        .enumerate()
        .filter_map(|(idx, prefix)| {
            let cancel = || match policy {
                WitnessPolicy::FirstLexicographic => best.load(Ordering::Relaxed) < idx,
                WitnessPolicy::Any => any_found.load(Ordering::Relaxed),
            };
            if cancel() {
                return None;
            }
            let mut s = Searcher::new(hg, r, cfg.prune);
            if !s.replay(prefix) || !s.dfs(prefix.len(), &cancel) {
                return None;
            }
            best.fetch_min(idx, Ordering::Relaxed);
            any_found.store(true, Ordering::Relaxed);
            Some((idx, s.colors))
        })
        .collect();
    results.into_iter().min_by_key(|(idx, _)| *idx).map(|(_, c)| c)
}

/// The exact rainbow number by search: the least `r` in `3..=n` admitting no rainbow-free
/// exact `r`-coloring, or `n + 1` when none exists.
pub fn rainbow_number_brute(eq: &Equation, cfg: &SearchConfig) -> Result<RbResult> {
    let n = eq.modulus();
    cfg.check(n)?;
    // every exact 2-coloring is rainbow-free
    let mut witness = exists_rainbow_free(eq, 2, cfg)?;
    for r in 3..=n.get() as u32 {
        match exists_rainbow_free(eq, r, cfg)? {
            Some(c) => witness = Some(c),
            None => {
                if n.get() <= 8 {
                    check_monotone(eq, r, cfg)?;
                }
                return Ok(RbResult { value: r as u64, provenance: Provenance::BruteForce, witness });
            }
        }
    }
    Ok(RbResult { value: n.get() + 1, provenance: Provenance::BruteForce, witness })
}

/// No rainbow-free exact `r'`-coloring may exist for any `r' > r` once none exists at `r`.
fn check_monotone(eq: &Equation, r: u32, cfg: &SearchConfig) -> Result<()> {
    for larger in r + 1..=eq.modulus().get() as u32 {
        if exists_rainbow_free(eq, larger, cfg)?.is_some() {
            return Err(Error::Inconsistency(format!(
                "{eq}: no rainbow-free {r}-coloring but a rainbow-free {larger}-coloring exists"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn eq(n: u64, a: [i64; 3], b: i64) -> Equation {
        Equation::reduced(m(n), a, b)
    }

    fn unpruned() -> SearchConfig {
        SearchConfig { prune: false, ..SearchConfig::default() }
    }

    /// Every restricted-growth string of length n with exactly r blocks.
    fn all_partitions(n: usize, r: u32) -> Vec<Vec<u32>> {
        fn go(prefix: &mut Vec<u32>, n: usize, r: u32, max: u32, out: &mut Vec<Vec<u32>>) {
            if prefix.len() == n {
                if max == r {
                    out.push(prefix.clone());
                }
                return;
            }
            for c in 0..=max.min(r - 1) {
                prefix.push(c);
                go(prefix, n, r, max.max(c + 1), out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(&mut Vec::new(), n, r, 0, &mut out);
        out
    }

    #[test]
    fn hypergraph_examples() {
        let h = build_hypergraph(&eq(5, [1, 1, 1], 0));
        assert!(h.edges().contains(&[0, 1, 4]));
        assert!(h.edges().contains(&[0, 2, 3]));
        assert_eq!(build_hypergraph(&eq(3, [1, 1, 1], 0)).edges(), &BTreeSet::from([[0, 1, 2]]));
        assert!(build_hypergraph(&eq(3, [1, 1, 1], 1)).edges().is_empty());
    }

    #[test]
    fn hypergraph_matches_enumeration() {
        for n in 2..=9u64 {
            for a in [[1, 1, 1], [2, 3, 4], [0, 2, 1], [3, 3, 0]] {
                for b in 0..n as i64 {
                    let e = eq(n, a, b);
                    let mut expect = BTreeSet::new();
                    for x in 0..n {
                        for y in 0..n {
                            for z in 0..n {
                                if x != y && y != z && x != z && e.is_solution(&[x, y, z]) {
                                    let mut t = [x, y, z];
                                    t.sort();
                                    expect.insert(t);
                                }
                            }
                        }
                    }
                    assert_eq!(build_hypergraph(&e).edges(), &expect, "{e}");
                }
            }
        }
    }

    #[test]
    fn exists_examples() {
        let cfg = SearchConfig::default();
        let c = exists_rainbow_free(&eq(5, [1, 1, 1], 0), 3, &cfg).unwrap().unwrap();
        assert_eq!(c.num_colors(), 3);
        assert!(c.find_rainbow(&eq(5, [1, 1, 1], 0)).unwrap().is_rainbow_free());
        assert_eq!(exists_rainbow_free(&eq(5, [1, 1, 1], 0), 4, &cfg).unwrap(), None);
        assert_eq!(exists_rainbow_free(&eq(3, [1, 1, 1], 0), 3, &cfg).unwrap(), None);
        assert_eq!(exists_rainbow_free(&eq(5, [1, 1, 1], 0), 6, &cfg).unwrap(), None);
    }

    #[test]
    fn witness_is_lexicographically_first() {
        let e = eq(7, [1, 1, 1], 0);
        let c = exists_rainbow_free(&e, 3, &SearchConfig::default()).unwrap().unwrap();
        let first = all_partitions(7, 3)
            .into_iter()
            .find(|p| !build_hypergraph(&e).is_tricolored(p))
            .unwrap();
        assert_eq!(c.colors(), first.as_slice());
    }

    #[test]
    fn cap_enforced() {
        let cfg = SearchConfig { n_cap: 6, ..SearchConfig::default() };
        assert_eq!(
            exists_rainbow_free(&eq(7, [1, 1, 1], 0), 3, &cfg),
            Err(Error::CapExceeded { n: 7, cap: 6 })
        );
        assert!(matches!(
            rainbow_number_brute(&eq(7, [1, 1, 1], 0), &cfg),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn brute_examples() {
        let cfg = SearchConfig::default();
        let rb = |e| rainbow_number_brute(&e, &cfg).unwrap().value;
        assert_eq!(rb(eq(3, [1, 1, 1], 0)), 3);
        assert_eq!(rb(eq(9, [1, 1, 1], 0)), 5);
        assert_eq!(rb(eq(8, [1, 1, 1], 0)), 5);
        assert_eq!(rb(eq(5, [1, 2, 3], 0)), 3);
        assert_eq!(rb(eq(2, [1, 1, 1], 0)), 3);
        assert_eq!(rb(eq(3, [0, 1, 2], 0)), 4);
    }

    #[test]
    fn brute_witness_has_value_minus_one_colors() {
        let cfg = SearchConfig::default();
        for e in [eq(8, [1, 1, 1], 0), eq(7, [1, 1, 6], 0), eq(4, [1, 3, 1], 1), eq(5, [1, 2, 3], 0), eq(2, [1, 1, 1], 0)] {
            let res = rainbow_number_brute(&e, &cfg).unwrap();
            let w = res.witness.expect("always a witness");
            assert_eq!(w.num_colors() as u64, res.value - 1);
            assert!(w.find_rainbow(&e).unwrap().is_rainbow_free());
        }
    }

    /// Pruned search, unpruned enumeration, and a direct scan over all partitions agree
    /// on existence for every r, n <= 8, over a spread of equations.
    #[test]
    fn pruned_and_unpruned_agree() {
        let pruned = SearchConfig::default();
        for n in 3..=8u64 {
            for a in [[1, 1, 1], [1, 2, 3], [1, 1, -2], [2, 2, 1], [0, 1, 1], [2, 4, 0]] {
                for b in [0, 1, 2] {
                    let e = eq(n, a, b);
                    let hg = build_hypergraph(&e);
                    for r in 1..=n as u32 {
                        let direct = all_partitions(n as usize, r).into_iter().any(|p| !hg.is_tricolored(&p));
                        let p = exists_rainbow_free(&e, r, &pruned).unwrap();
                        let u = exists_rainbow_free(&e, r, &unpruned()).unwrap();
                        assert_eq!(p.is_some(), direct, "{e} r={r}");
                        assert_eq!(u.is_some(), direct, "{e} r={r}");
                        assert_eq!(p, u, "both return the lexicographically first witness");
                    }
                }
            }
        }
    }

    #[test]
    fn partitions_enumerated_once() {
        // Stirling numbers of the second kind S(7, r)
        let stirling = [0usize, 1, 63, 301, 350, 140, 21, 1];
        for r in 1..=7u32 {
            let all = all_partitions(7, r);
            let distinct: BTreeSet<_> = all.iter().collect();
            assert_eq!(all.len(), stirling[r as usize]);
            assert_eq!(distinct.len(), all.len());
        }
        // The searcher's prefix enumeration at full depth, with nothing to prune, is the same list.
        let empty = RainbowHypergraph { n: m(7), edges: BTreeSet::new(), by_middle: vec![Vec::new(); 7] };
        for r in 1..=7u32 {
            let mut out = Vec::new();
            Searcher::new(&empty, r, true).prefixes(0, 7, &mut Vec::new(), &mut out);
            assert_eq!(out, all_partitions(7, r));
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let seq = SearchConfig::default();
        let par = SearchConfig { parallel: true, ..seq };
        let any = SearchConfig { parallel: true, witness_policy: WitnessPolicy::Any, ..seq };
        for (e, r) in [(eq(9, [1, 1, 1], 0), 4), (eq(10, [1, 1, 1], 0), 4), (eq(10, [1, 1, 1], 0), 5), (eq(8, [1, 3, 5], 1), 4)] {
            let s = exists_rainbow_free(&e, r, &seq).unwrap();
            assert_eq!(exists_rainbow_free(&e, r, &par).unwrap(), s, "{e} r={r}");
            let a = exists_rainbow_free(&e, r, &any).unwrap();
            assert_eq!(a.is_some(), s.is_some());
            if let Some(c) = a {
                assert!(c.find_rainbow(&e).unwrap().is_rainbow_free());
            }
        }
    }

    #[test]
    fn monotone_for_small_moduli() {
        let cfg = SearchConfig::default();
        for n in 3..=8u64 {
            for a in [[1, 1, 1], [1, 2, 4], [1, 1, 2], [0, 1, 2]] {
                for b in 0..n as i64 {
                    let e = eq(n, a, b);
                    let exists: Vec<bool> = (3..=n as u32)
                        .map(|r| exists_rainbow_free(&e, r, &cfg).unwrap().is_some())
                        .collect();
                    assert!(exists.windows(2).all(|w| w[0] || !w[1]), "{e}: {exists:?}");
                    assert!(rainbow_number_brute(&e, &cfg).is_ok());
                }
            }
        }
    }
}
