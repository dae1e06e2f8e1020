//! Structural tests for rainbow-free exact 3-colorings of Z_p.
//!
//! These decide rainbow-freeness from the shape of the color classes instead of
//! enumerating solutions. Classes are named `A`, `B`, `C` with `|A| <= |B| <= |C|`; when
//! sizes tie, every consistent naming is tried.

use crate::coloring::Coloring;
use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::modring::{is_periodic, is_prime, is_symmetric, is_unit, try_inverse, Modulus, ResidueSet};

/// Three cyclic intervals `[t1, t2)`, `[t2, t3)`, `[t3, t1)` that the classes become after
/// dilating by `d^{-1}`, `d` being their common difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalDecomposition {
    pub d: u64,
    pub t: [u64; 3],
}

impl IntervalDecomposition {
    pub fn t_sum(&self, n: Modulus) -> u64 {
        self.t.iter().fold(0, |acc, &t| n.add(acc, t))
    }
}

/// Start of `s` as a cyclic run of consecutive residues, if it is one. Proper nonempty
/// subsets only.
pub fn interval_start(s: &ResidueSet) -> Option<u64> {
    let n = s.modulus();
    if s.is_empty() || s.len() == n.as_usize() {
        return None;
    }
    let mut starts = s.iter().filter(|&x| !s.contains(n.sub(x, 1)));
    let first = starts.next()?;
    starts.next().is_none().then_some(first)
}

/// `s` is an arithmetic progression with common difference `d` (a unit).
pub fn is_arithmetic_progression(s: &ResidueSet, d: u64) -> bool {
    let n = s.modulus();
    let Ok(inv) = try_inverse(d, n) else {
        return false;
    };
    !s.is_empty() && (s.len() == n.as_usize() || interval_start(&s.dilate(inv)).is_some())
}

/// The decomposition of `(a, b, c)` with common difference `d`, if `d^{-1}a`, `d^{-1}b`,
/// `d^{-1}c` are consecutive intervals in that cyclic order.
pub fn interval_decomposition(classes: [&ResidueSet; 3], d: u64) -> Option<IntervalDecomposition> {
    let n = classes[0].modulus();
    let inv = try_inverse(d, n).ok()?;
    let mut t = [0u64; 3];
    for (slot, class) in t.iter_mut().zip(classes) {
        *slot = interval_start(&class.dilate(inv))?;
    }
    let len = |i: usize| classes[i].len() as u64;
    let chained = n.add(t[0], len(0)) == t[1] && n.add(t[1], len(1)) == t[2] && n.add(t[2], len(2)) == t[0];
    chained.then_some(IntervalDecomposition { d, t })
}

fn three_classes(c3: &Coloring) -> Result<Vec<ResidueSet>> {
    let p = c3.modulus().get();
    if !is_prime(p) || p < 3 {
        return Err(Error::NotApplicable(format!("modulus {p} is not a prime >= 3")));
    }
    if c3.num_colors() != 3 {
        return Err(Error::NotApplicable(format!("{} colors, expected 3", c3.num_colors())));
    }
    Ok(c3.classes())
}

/// Every naming `(A, B, C)` of the classes with `|A| <= |B| <= |C|`.
fn size_orderings(classes: &[ResidueSet]) -> Vec<[&ResidueSet; 3]> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    PERMS
        .iter()
        .map(|&[i, j, k]| [&classes[i], &classes[j], &classes[k]])
        .filter(|[a, b, c]| a.len() <= b.len() && b.len() <= c.len())
        .collect()
}

fn is_singleton(s: &ResidueSet, x: u64) -> bool {
    s.len() == 1 && s.contains(x)
}

/// Rainbow-freeness of an exact 3-coloring of Z_p for `x1 + x2 - c x3 = 0`, decided by
/// class structure up to a common dilation.
pub fn thm3_rainbow_free(c3: &Coloring, cparam: u64) -> Result<bool> {
    let classes = three_classes(c3)?;
    let n = c3.modulus();
    if !is_unit(cparam, n) {
        return Err(Error::NotApplicable(format!("{cparam} is not a unit mod {n}")));
    }
    let cparam = cparam % n.get();
    let is_two = cparam == 2 % n.get();
    let is_minus_one = cparam == n.get() - 1;
    let half = try_inverse(2, n)?;
    let minus_two = n.neg(2);

    for delta in n.units() {
        let dilated: Vec<ResidueSet> = classes.iter().map(|s| s.dilate(delta)).collect();
        for [a, b, c] in size_orderings(&dilated) {
            let cond1 = is_singleton(a, 0)
                && [b, c].iter().all(|s| is_symmetric(s) && is_periodic(s, cparam).unwrap_or(false));
            let cond2a = is_two
                && is_singleton(a, 1)
                && [b, c].iter().all(|s| {
                    let shifted = s.translate(n.neg(1));
                    is_symmetric(&shifted) && is_periodic(&shifted, 2).unwrap_or(false)
                });
            let cond2b = is_minus_one
                && is_singleton(a, 1)
                && [b, c].iter().all(|s| is_symmetric(&s.without(minus_two).translate(half)));
            let cond3 = is_minus_one
                && a.len() >= 2
                && interval_decomposition([a, b, c], 1)
                    .is_some_and(|dec| matches!(dec.t_sum(n), 1 | 2));
            if cond1 || cond2a || cond2b || cond3 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Rainbow-freeness of an exact 3-coloring of Z_p for `x1 + x2 + x3 = b`, decided by class
/// structure.
pub fn thm5_rainbow_free(c3: &Coloring, b: u64) -> Result<bool> {
    let classes = three_classes(c3)?;
    let n = c3.modulus();
    let b = b % n.get();
    let half = try_inverse(2, n)?;

    for [a, bb, c] in size_orderings(&classes) {
        if a.len() == 1 {
            let s = a.iter().next().unwrap();
            let removed = n.sub(b, n.mul(2, s));
            let shift = n.mul(n.sub(s, b), half);
            if [bb, c].iter().all(|x| is_symmetric(&x.without(removed).translate(shift))) {
                return Ok(true);
            }
        } else {
            for d in n.units() {
                let d_inv = try_inverse(d, n)?;
                if let Some(dec) = interval_decomposition([a, bb, c], d) {
                    let base = n.mul(d_inv, b);
                    let sum = dec.t_sum(n);
                    if sum == n.add(1, base) || sum == n.add(2, base) {
                        return Ok(true);
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Necessary condition for rainbow-freeness when the coefficients are not all equal: the
/// smallest class is a singleton `{s}` with `s (a1 + a2 + a3) = b`. `false` certifies a
/// rainbow solution.
pub fn thm6_singleton_necessary(c3: &Coloring, eq: &Equation) -> Result<bool> {
    let classes = three_classes(c3)?;
    if eq.modulus() != c3.modulus() {
        return Err(Error::ModulusMismatch {
            coloring: c3.modulus().get(),
            equation: eq.modulus().get(),
        });
    }
    if eq.all_coefficients_equal() {
        return Err(Error::NotApplicable("all coefficients are equal".into()));
    }
    if !eq.has_unit_coefficients() {
        return Err(Error::NotApplicable(format!("{eq}: a coefficient is 0 mod p")));
    }
    let n = eq.modulus();
    let smallest = classes.iter().map(ResidueSet::len).min().unwrap_or(0);
    Ok(smallest == 1
        && classes
            .iter()
            .filter(|s| s.len() == 1)
            .any(|s| n.mul(s.iter().next().unwrap(), eq.a_sum()) == eq.rhs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn classes(n: u64, cls: &[&[u64]]) -> Coloring {
        Coloring::from_classes(m(n), cls.iter().map(|c| c.iter().copied())).unwrap()
    }

    fn set(n: u64, xs: &[u64]) -> ResidueSet {
        ResidueSet::new(m(n), xs.iter().copied()).unwrap()
    }

    #[test]
    fn interval_detection() {
        assert_eq!(interval_start(&set(7, &[5, 6, 0, 1])), Some(5));
        assert_eq!(interval_start(&set(7, &[2])), Some(2));
        assert_eq!(interval_start(&set(7, &[1, 3])), None);
        assert_eq!(interval_start(&set(7, &[])), None);
        assert!(is_arithmetic_progression(&set(7, &[1, 3, 5]), 2));
        assert!(!is_arithmetic_progression(&set(7, &[1, 3, 5]), 1));
        assert!(is_arithmetic_progression(&set(7, &[4]), 3));
    }

    #[test]
    fn decomposition_example() {
        let (a, b, c) = (set(7, &[0]), set(7, &[1, 2, 3]), set(7, &[4, 5, 6]));
        let dec = interval_decomposition([&a, &b, &c], 1).unwrap();
        assert_eq!(dec.t, [0, 1, 4]);
        assert_eq!(dec.t_sum(m(7)), 5);
        assert!(interval_decomposition([&a, &c, &b], 1).is_none());
    }

    #[test]
    fn thm3_examples() {
        let c = classes(5, &[&[0], &[1, 4], &[2, 3]]);
        assert_eq!(thm3_rainbow_free(&c, 4), Ok(true));
        let c = classes(5, &[&[0], &[1], &[2, 3, 4]]);
        assert_eq!(thm3_rainbow_free(&c, 4), Ok(false));
        let c7 = classes(7, &[&[0], &[1, 2, 3], &[4, 5, 6]]);
        let e = Equation::reduced(m(7), [1, 1, 1], 0);
        assert_eq!(thm3_rainbow_free(&c7, 6).unwrap(), c7.find_rainbow(&e).unwrap().is_rainbow_free());
        assert!(matches!(thm3_rainbow_free(&c7, 0), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn thm5_examples() {
        let c = classes(5, &[&[0], &[1, 4], &[2, 3]]);
        assert_eq!(thm5_rainbow_free(&c, 0), Ok(true));
        let c = classes(5, &[&[0], &[1], &[2, 3, 4]]);
        assert_eq!(thm5_rainbow_free(&c, 0), Ok(false));
        let z3 = classes(3, &[&[0], &[1], &[2]]);
        assert_eq!(thm5_rainbow_free(&z3, 0), Ok(false));
        assert!(thm5_rainbow_free(&classes(5, &[&[0], &[1, 2, 3, 4]]), 0).is_err());
    }

    #[test]
    fn thm6_examples() {
        let c = classes(5, &[&[0], &[1, 4], &[2, 3]]);
        let e = Equation::reduced(m(5), [1, 2, 3], 0);
        assert_eq!(thm6_singleton_necessary(&c, &e), Ok(true));
        let c = classes(7, &[&[0, 1], &[2, 3], &[4, 5, 6]]);
        let e = Equation::reduced(m(7), [1, 2, 3], 0);
        assert_eq!(thm6_singleton_necessary(&c, &e), Ok(false));
        let c = classes(5, &[&[1], &[0, 4], &[2, 3]]);
        assert_eq!(thm6_singleton_necessary(&c, &Equation::reduced(m(5), [1, 1, 2], 3)), Ok(false));
        assert_eq!(thm6_singleton_necessary(&c, &Equation::reduced(m(5), [1, 1, 2], 4)), Ok(true));
        assert!(matches!(
            thm6_singleton_necessary(&c, &Equation::reduced(m(5), [2, 2, 2], 4)),
            Err(Error::NotApplicable(_))
        ));
    }

    fn all_exact_colorings(n: u64, r: u32) -> Vec<Coloring> {
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
        go(&mut Vec::new(), n as usize, r, 0, &mut out);
        out.into_iter().map(|c| Coloring::from_colors(m(n), c).unwrap()).collect()
    }

    #[test]
    fn thm6_false_implies_rainbow() {
        for p in [5u64, 7] {
            let colorings = all_exact_colorings(p, 3);
            for a1 in 1..p {
                for a2 in 1..p {
                    for a3 in 1..p {
                        if a1 == a2 && a2 == a3 {
                            continue;
                        }
                        for b in 0..p {
                            let e = Equation::new(m(p), [a1, a2, a3], b).unwrap();
                            for c in &colorings {
                                if !thm6_singleton_necessary(c, &e).unwrap() {
                                    assert!(!c.find_rainbow(&e).unwrap().is_rainbow_free(), "{e} {c:?}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    /// No partition of Z_p into A, B, C, D has A∪B, A∪C, A∪D, B, C, D all arithmetic
    /// progressions of one common difference.
    #[test]
    fn no_four_partition_of_progressions() {
        for p in [5u64, 7, 11] {
            let n = m(p);
            for c in all_exact_colorings(p, 4) {
                let cls = c.classes();
                for ai in 0..4 {
                    let a = &cls[ai];
                    let others: Vec<&ResidueSet> = (0..4).filter(|&i| i != ai).map(|i| &cls[i]).collect();
                    for d in n.units() {
                        let all_ap = others
                            .iter()
                            .all(|s| is_arithmetic_progression(s, d) && is_arithmetic_progression(&a.union(s), d));
                        assert!(!all_ap, "p={p} d={d} {c:?}");
                    }
                }
            }
        }
    }
}
