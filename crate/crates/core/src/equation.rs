//! The equation `a1*x1 + a2*x2 + a3*x3 = b` over Z_n.

use std::fmt;

use crate::error::{Error, Result};
use crate::modring::{factorize, is_unit, multiplicative_closure, try_inverse, Modulus};

/// An ordered triple `(s1, s2, s3)` of residues.
pub type SolutionTriple = [u64; 3];

/// `eq(a1, a2, a3, b)` modulo `n`. Coefficient positions are significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Equation {
    n: Modulus,
    coeffs: [u64; 3],
    b: u64,
}

impl Equation {
    pub fn new(n: Modulus, coeffs: [u64; 3], b: u64) -> Result<Self> {
        for a in coeffs {
            n.check(a)?;
        }
        n.check(b)?;
        Ok(Equation { n, coeffs, b })
    }

    /// Build from arbitrary integers, reducing everything mod n.
    pub fn reduced(n: Modulus, coeffs: [i64; 3], b: i64) -> Self {
        Equation { n, coeffs: coeffs.map(|a| n.reduce(a)), b: n.reduce(b) }
    }

    pub fn modulus(&self) -> Modulus {
        self.n
    }

    pub fn coeffs(&self) -> [u64; 3] {
        self.coeffs
    }

    pub fn rhs(&self) -> u64 {
        self.b
    }

    pub fn a_sum(&self) -> u64 {
        self.coeffs.iter().fold(0, |acc, &a| self.n.add(acc, a))
    }

    /// `a1 * a2 * a3` is a unit.
    pub fn has_unit_coefficients(&self) -> bool {
        self.coeffs.iter().all(|&a| is_unit(a, self.n))
    }

    pub fn all_coefficients_equal(&self) -> bool {
        self.coeffs[0] == self.coeffs[1] && self.coeffs[1] == self.coeffs[2]
    }

    pub fn with_rhs(&self, b: u64) -> Equation {
        Equation { b: b % self.n.get(), ..*self }
    }

    pub fn lhs(&self, t: &SolutionTriple) -> u64 {
        let n = self.n;
        (0..3).fold(0, |acc, i| n.add(acc, n.mul(self.coeffs[i], t[i])))
    }

    pub fn is_solution(&self, t: &SolutionTriple) -> bool {
        self.lhs(t) == self.b
    }

    /// Given the other two coordinates of `t`, fill in position `pos` with the unique value
    /// making `t` a solution. `inv` must be the inverse of the coefficient at `pos`.
    #[inline]
    pub(crate) fn complete(&self, pos: usize, inv: u64, t: &mut SolutionTriple) {
        let n = self.n;
        let mut rest = self.b;
        for i in 0..3 {
            if i != pos {
                rest = n.sub(rest, n.mul(self.coeffs[i], t[i]));
            }
        }
        t[pos] = n.mul(inv, rest);
    }

    /// First unit coefficient position, scanning positions 3, 1, 2, with its inverse.
    pub(crate) fn pivot(&self) -> Option<(usize, u64)> {
        [2usize, 0, 1]
            .into_iter()
            .find_map(|i| try_inverse(self.coeffs[i], self.n).ok().map(|inv| (i, inv)))
    }

    /// Every ordered solution, in lexicographic order of the non-pivot coordinates.
    pub fn solutions(&self) -> Vec<SolutionTriple> {
        let n = self.n.get();
        let mut out = Vec::new();
        match self.pivot() {
            Some((pos, inv)) => {
                let (i, j) = other_positions(pos);
                for x in 0..n {
                    for y in 0..n {
                        let mut t = [0; 3];
                        t[i] = x;
                        t[j] = y;
                        self.complete(pos, inv, &mut t);
                        out.push(t);
                    }
                }
            }
            None => {
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            let t = [x, y, z];
                            if self.is_solution(&t) {
                                out.push(t);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// The six ratios `-a_j * a_i^{-1}` in their conventional order.
    pub fn dilation_values(&self) -> Result<DilationValues> {
        let n = self.n;
        let [a1, a2, a3] = self.coeffs;
        let i1 = try_inverse(a1, n)?;
        let i2 = try_inverse(a2, n)?;
        let i3 = try_inverse(a3, n)?;
        let r = |num: u64, inv: u64| n.neg(n.mul(num, inv));
        Ok(DilationValues([
            r(a3, i1),
            r(a2, i1),
            r(a1, i2),
            r(a3, i2),
            r(a1, i3),
            r(a2, i3),
        ]))
    }

    /// Whether every exact 3-coloring of Z_p has a rainbow solution, for prime `p >= 5`,
    /// unit coefficients, not all equal.
    pub fn cor8_always_rainbow(&self) -> Result<bool> {
        let p = self.n.get();
        if p < 5 || !factorize(self.n).is_prime() {
            return Err(Error::NotApplicable(format!("modulus {p} is not a prime >= 5")));
        }
        if self.all_coefficients_equal() {
            return Err(Error::NotApplicable("all coefficients are equal".into()));
        }
        if !self.has_unit_coefficients() {
            return Err(Error::NotApplicable("a coefficient is zero mod p".into()));
        }
        if self.a_sum() == 0 && self.b != 0 {
            return Ok(true);
        }
        let d = self.dilation_values()?;
        Ok(d.closure_size(self.n)? as u64 == p - 1)
    }

    /// Translate so the right side becomes 0. Returns the new equation and the offset
    /// `b * a^{-1}`; `x -> x - offset` carries solutions of `self` to solutions of the result.
    pub fn normalize_b_to_zero(&self) -> Result<(Equation, u64)> {
        let inv = try_inverse(self.a_sum(), self.n)?;
        let offset = self.n.mul(self.b, inv);
        Ok((self.with_rhs(0), offset))
    }

    /// `eq(a1, a2, a3, b + (a1+a2+a3) k)`.
    pub fn shift_b(&self, k: u64) -> Equation {
        let n = self.n;
        self.with_rhs(n.add(self.b, n.mul(self.a_sum(), k % n.get())))
    }

    /// The same equation with everything reduced modulo a divisor `m` of `n`.
    pub fn reduce_mod(&self, m: Modulus) -> Result<Equation> {
        if self.n.get() % m.get() != 0 {
            return Err(Error::NotDivisor { m: m.get(), n: self.n.get() });
        }
        Ok(Equation { n: m, coeffs: self.coeffs.map(|a| a % m.get()), b: self.b % m.get() })
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3] = self.coeffs;
        write!(f, "eq({a1},{a2},{a3},{}) mod {}", self.b, self.n)
    }
}

pub(crate) fn other_positions(pos: usize) -> (usize, usize) {
    match pos {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// `(d1, ..., d6)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DilationValues(pub [u64; 6]);

impl DilationValues {
    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    /// `|<d1, ..., d6>|`.
    pub fn closure_size(&self, n: Modulus) -> Result<usize> {
        Ok(multiplicative_closure(&self.0, n)?.len())
    }
}

/// Parse `a1,a2,a3` (no spaces required, negatives allowed).
pub fn parse_coeffs(s: &str) -> Result<[i64; 3]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("expected three comma-separated coefficients, got {s:?}")));
    }
    let mut out = [0i64; 3];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient {part:?}")))?;
    }
    Ok(out)
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

    #[test]
    fn range_checked() {
        assert!(Equation::new(m(5), [1, 1, 5], 0).is_err());
        assert!(Equation::new(m(5), [1, 1, 4], 5).is_err());
        assert_eq!(eq(5, [-1, 6, 0], -2).coeffs(), [4, 1, 0]);
        assert_eq!(eq(5, [-1, 6, 0], -2).rhs(), 3);
    }

    #[test]
    fn solution_examples() {
        assert!(eq(5, [1, 1, 1], 0).is_solution(&[1, 2, 2]));
        assert!(eq(5, [1, 1, 1], 0).is_solution(&[0, 0, 0]));
        assert!(eq(5, [1, 1, 3], 1).is_solution(&[0, 0, 2]));
        assert!(!eq(5, [1, 1, 3], 1).is_solution(&[0, 0, 1]));
    }

    #[test]
    fn solutions_match_brute_force() {
        for n in 2..=9u64 {
            for a1 in 0..n as i64 {
                for a3 in 0..n as i64 {
                    for b in 0..n as i64 {
                        let e = eq(n, [a1, 2, a3], b);
                        let mut fast = e.solutions();
                        fast.sort();
                        let mut slow = Vec::new();
                        for x in 0..n {
                            for y in 0..n {
                                for z in 0..n {
                                    if e.is_solution(&[x, y, z]) {
                                        slow.push([x, y, z]);
                                    }
                                }
                            }
                        }
                        assert_eq!(fast, slow, "{e}");
                    }
                }
            }
        }
    }

    #[test]
    fn dilation_examples() {
        assert_eq!(eq(5, [1, 1, 3], 0).dilation_values().unwrap().0, [2, 4, 4, 2, 3, 3]);
        assert_eq!(eq(7, [1, 1, 1], 0).dilation_values().unwrap().0, [6; 6]);
        assert_eq!(eq(5, [1, 2, 3], 0).dilation_values().unwrap().0, [2, 3, 2, 1, 3, 1]);
        assert!(matches!(eq(5, [1, 0, 3], 0).dilation_values(), Err(Error::NonUnit { .. })));
    }

    #[test]
    fn dilation_values_satisfy_defining_relation() {
        for p in [5u64, 7, 11] {
            let n = m(p);
            for a1 in 1..p {
                for a2 in 1..p {
                    for a3 in 1..p {
                        let e = Equation::new(n, [a1, a2, a3], 0).unwrap();
                        let d = e.dilation_values().unwrap().0;
                        // (numerator, denominator) index pairs for d1..d6
                        let idx = [(2, 0), (1, 0), (0, 1), (2, 1), (0, 2), (1, 2)];
                        for (k, &(num, den)) in idx.iter().enumerate() {
                            let a = e.coeffs();
                            assert_eq!(n.mul(d[k], a[den]), n.neg(a[num]));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cor8_examples() {
        assert_eq!(eq(5, [1, 2, 3], 0).cor8_always_rainbow(), Ok(true));
        assert_eq!(eq(7, [1, 1, 6], 0).cor8_always_rainbow(), Ok(false));
        assert_eq!(eq(5, [1, 1, 3], 1).cor8_always_rainbow(), Ok(true));
        assert!(matches!(eq(5, [1, 1, 1], 0).cor8_always_rainbow(), Err(Error::NotApplicable(_))));
        assert!(matches!(eq(3, [1, 2, 1], 0).cor8_always_rainbow(), Err(Error::NotApplicable(_))));
        assert!(matches!(eq(9, [1, 2, 1], 0).cor8_always_rainbow(), Err(Error::NotApplicable(_))));
        assert!(matches!(eq(7, [1, 2, 0], 0).cor8_always_rainbow(), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(eq(5, [1, 1, 1], 3).normalize_b_to_zero(), Ok((eq(5, [1, 1, 1], 0), 1)));
        assert_eq!(eq(7, [1, 1, 1], 0).normalize_b_to_zero(), Ok((eq(7, [1, 1, 1], 0), 0)));
        for b in 1..5 {
            assert!(matches!(
                eq(5, [1, 1, 3], b).normalize_b_to_zero(),
                Err(Error::NonUnit { .. })
            ));
        }
    }

    #[test]
    fn shift_examples() {
        assert_eq!(eq(5, [1, 1, 1], 0).shift_b(1), eq(5, [1, 1, 1], 3));
        for n in 2..10 {
            assert_eq!(eq(n, [1, 1, 1], 0).shift_b(0), eq(n, [1, 1, 1], 0));
        }
        assert_eq!(eq(5, [1, 1, 3], 2).shift_b(2), eq(5, [1, 1, 3], 2));
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(eq(15, [1, 1, 2], 0).reduce_mod(m(5)), Ok(eq(5, [1, 1, 2], 0)));
        assert_eq!(eq(10, [7, 7, 7], 4).reduce_mod(m(2)), Ok(eq(2, [1, 1, 1], 0)));
        assert_eq!(
            eq(15, [1, 1, 2], 0).reduce_mod(m(4)),
            Err(Error::NotDivisor { m: 4, n: 15 })
        );
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_coeffs("1,1,-2"), Ok([1, 1, -2]));
        assert_eq!(parse_coeffs("3,4,5"), Ok([3, 4, 5]));
        assert!(parse_coeffs("1,2").is_err());
        assert!(parse_coeffs("1,x,2").is_err());
    }

    /// Solutions of the input and of its b = 0 normalization correspond under
    /// `x -> x - offset`, for every equation with a unit coefficient sum, n <= 12.
    #[test]
    fn normalization_is_a_solution_bijection() {
        for n in 2..=12u64 {
            let md = m(n);
            for a1 in 0..n {
                for a2 in 0..n {
                    for a3 in 0..n {
                        for b in 0..n {
                            let e = Equation::new(md, [a1, a2, a3], b).unwrap();
                            let Ok((z, off)) = e.normalize_b_to_zero() else {
                                assert!(!is_unit(e.a_sum(), md));
                                continue;
                            };
                            let shift = |t: &SolutionTriple| t.map(|x| md.sub(x, off));
                            let mut image: Vec<_> = e.solutions().iter().map(shift).collect();
                            image.sort();
                            let mut target = z.solutions();
                            target.sort();
                            assert_eq!(image, target, "{e}");
                        }
                    }
                }
            }
        }
    }

    /// With a1+a2+a3 = 0, unit coefficients, b = 0 over a prime, a solution with a
    /// repeated entry is constant.
    #[test]
    fn repeated_entry_forces_constant_solution() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let n = m(p);
            for a1 in 1..p {
                for a2 in 1..p {
                    let a3 = n.neg(n.add(a1, a2));
                    if a3 == 0 {
                        continue;
                    }
                    let e = Equation::new(n, [a1, a2, a3], 0).unwrap();
                    for t in e.solutions() {
                        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                            assert!(t[0] == t[1] && t[1] == t[2], "{e}: {t:?}");
                        }
                    }
                }
            }
        }
    }

    /// Two solutions mod ut agreeing mod u in the first two coordinates agree mod u in
    /// the third, when a3 is a unit mod u.
    #[test]
    fn residue_class_propagates_to_third_coordinate() {
        for (u, t) in [(3u64, 3u64), (3, 5), (4, 3), (5, 4), (6, 5)] {
            let n = m(u * t);
            let um = m(u);
            for a1 in 0..u {
                for a2 in 0..u {
                    for a3 in um.units() {
                        for b in 0..u {
                            // lift coefficients off their representatives in [0, u)
                            let e = Equation::new(n, [a1 + u, a2, a3 + u * (t - 1)], b + u).unwrap();
                            let mut third = vec![None; (u * u) as usize];
                            for s in e.solutions() {
                                let key = (s[0] % u * u + s[1] % u) as usize;
                                let r = *third[key].get_or_insert(s[2] % u);
                                assert_eq!(r, s[2] % u, "{e}: {s:?}");
                            }
                        }
                    }
                }
            }
        }
    }
}
