//! Exact arithmetic in Z_n.
//!
//! Residues are plain `u64` values kept normalized to `[0, n)`. Every
//! operation that can produce a negative or oversized intermediate reduces
//! it before returning.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A modulus `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Modulus(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    /// Reduce an arbitrary signed integer into `[0, n)`.
    #[inline]
    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        self.add(a % self.0, self.0 - b % self.0)
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn check(self, a: u64) -> Result<u64> {
        if a < self.0 {
            Ok(a)
        } else {
            Err(Error::OutOfRange { value: a, n: self.0 })
        }
    }

    /// Iterate over all residues `0..n`.
    pub fn residues(self) -> std::ops::Range<u64> {
        0..self.0
    }

    /// Iterate over the units of Z_n in increasing order.
    pub fn units(self) -> impl Iterator<Item = u64> {
        let n = self.0;
        (1..n).filter(move |&a| gcd(a, n) == 1)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

pub fn is_unit(a: u64, n: Modulus) -> bool {
    gcd(a % n.get(), n.get()) == 1
}

/// The multiplicative inverse of `a` modulo `n`.
pub fn try_inverse(a: u64, n: Modulus) -> Result<u64> {
    let m = n.get() as i128;
    let (g, x, _) = ext_gcd((a % n.get()) as i128, m);
    if g != 1 {
        return Err(Error::NonUnit { a, n: n.get() });
    }
    Ok(x.rem_euclid(m) as u64)
}

/// Ascending prime-power decomposition `n = prod p^alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn value(&self) -> u64 {
        self.pairs.iter().map(|&(p, a)| p.pow(a)).product()
    }

    pub fn is_prime(&self) -> bool {
        matches!(self.pairs.as_slice(), [(_, 1)])
    }

    pub fn is_prime_power(&self) -> bool {
        self.pairs.len() == 1
    }
}

/// Trial division up to `sqrt(n)`.
pub fn factorize(n: Modulus) -> Factorization {
    let mut n = n.get();
    let mut pairs = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut alpha = 0;
            while n % p == 0 {
                n /= p;
                alpha += 1;
            }
            pairs.push((p, alpha));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        pairs.push((n, 1));
    }
    Factorization { pairs }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && Modulus::new(n).map(|m| factorize(m).is_prime()).unwrap_or(false)
}

/// A subset of Z_n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    modulus: Modulus,
    members: BTreeSet<u64>,
}

impl ResidueSet {
    pub fn new(modulus: Modulus, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        let members = members
            .into_iter()
            .map(|m| modulus.check(m))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(ResidueSet { modulus, members })
    }

    /// Build from arbitrary integers, reducing each one mod n.
    pub fn from_signed(modulus: Modulus, members: impl IntoIterator<Item = i64>) -> Self {
        ResidueSet {
            modulus,
            members: members.into_iter().map(|m| modulus.reduce(m)).collect(),
        }
    }

    pub fn empty(modulus: Modulus) -> Self {
        ResidueSet { modulus, members: BTreeSet::new() }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn members(&self) -> &BTreeSet<u64> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.members.contains(&x)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied()
    }

    /// `S + t`.
    pub fn translate(&self, t: u64) -> ResidueSet {
        let m = self.modulus;
        ResidueSet { modulus: m, members: self.iter().map(|x| m.add(x, t)).collect() }
    }

    /// `dS`. Not necessarily the same size as `S` when `d` is not a unit.
    pub fn dilate(&self, d: u64) -> ResidueSet {
        let m = self.modulus;
        ResidueSet { modulus: m, members: self.iter().map(|x| m.mul(x, d)).collect() }
    }

    pub fn without(&self, x: u64) -> ResidueSet {
        let mut out = self.clone();
        out.members.remove(&x);
        out
    }

    pub fn union(&self, other: &ResidueSet) -> ResidueSet {
        ResidueSet {
            modulus: self.modulus,
            members: self.members.union(&other.members).copied().collect(),
        }
    }
}

/// The smallest multiplicatively closed subset of Z_n^* containing 1 and every generator.
pub fn multiplicative_closure(gens: &[u64], n: Modulus) -> Result<ResidueSet> {
    for &g in gens {
        if !is_unit(g, n) {
            return Err(Error::NonUnit { a: g, n: n.get() });
        }
    }
    let gens: Vec<u64> = gens.iter().map(|&g| g % n.get()).collect();
    let mut members = BTreeSet::from([1 % n.get()]);
    let mut work = vec![1 % n.get()];
    while let Some(x) = work.pop() {
        for &g in &gens {
            let y = n.mul(x, g);
            if members.insert(y) {
                work.push(y);
            }
        }
    }
    Ok(ResidueSet { modulus: n, members })
}

/// `S = -S`.
pub fn is_symmetric(s: &ResidueSet) -> bool {
    let n = s.modulus;
    s.iter().all(|x| s.contains(n.neg(x)))
}

/// `S = dS` for a unit `d`.
pub fn is_periodic(s: &ResidueSet, d: u64) -> Result<bool> {
    let n = s.modulus;
    if !is_unit(d, n) {
        return Err(Error::NonUnit { a: d, n: n.get() });
    }
    // d is a bijection, so dS ⊆ S already forces equality.
    Ok(s.iter().all(|x| s.contains(n.mul(d, x))))
}
