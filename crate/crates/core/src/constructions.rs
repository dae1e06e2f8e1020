//! Explicit rainbow-free colorings certifying lower bounds.
//!
//! Every constructor checks its output with [`Coloring::find_rainbow`] before returning. A
//! construction that yields a rainbow solution is reported as [`Error::Inconsistency`].

use crate::coloring::{relabel_by_first_use, Coloring};
use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::modring::{is_prime, Modulus};

/// Largest exponent accepted by [`two_power_coloring`].
pub const MAX_TWO_POWER_ALPHA: u32 = 20;

/// Largest prime for which [`singleton_zero_coloring`] falls back to enumeration.
pub const MAX_SINGLETON_SEARCH_PRIME: u64 = 23;

fn verified(c: Coloring, eq: &Equation, what: &str) -> Result<Coloring> {
    match c.find_rainbow(eq)?.witness() {
        None => Ok(c),
        Some(t) => Err(Error::Inconsistency(format!(
            "{what} has rainbow solution {t:?} for {eq}"
        ))),
    }
}

fn sum_eq(n: Modulus) -> Equation {
    Equation::reduced(n, [1, 1, 1], 0)
}

/// Classes `{0}`, `{1, p-1}`, `{2, ..., p-2}` of Z_p.
pub fn symmetric_interval_coloring(p: u64) -> Result<Coloring> {
    if p < 5 || !is_prime(p) {
        return Err(Error::BadModulus(format!("{p} is not a prime >= 5")));
    }
    let n = Modulus::new(p)?;
    let c = Coloring::from_classes(n, [vec![0], vec![1, p - 1], (2..=p - 2).collect()])?;
    verified(c, &sum_eq(n), "symmetric interval coloring")
}

/// Exact `(alpha+1)`-coloring of Z_{2^alpha}: even residues `2y` inherit the coloring of
/// Z_{2^(alpha-1)} at `y`, odd residues share one fresh color.
pub fn two_power_coloring(alpha: u32) -> Result<Coloring> {
    if alpha == 0 || alpha > MAX_TWO_POWER_ALPHA {
        return Err(Error::BadModulus(format!(
            "exponent {alpha} outside 1..={MAX_TWO_POWER_ALPHA}"
        )));
    }
    let mut colors = vec![0u32, 1];
    for level in 2..=alpha {
        let half = colors.len();
        let mut next = vec![level; 2 * half];
        for (y, &c) in colors.iter().enumerate() {
            next[2 * y] = c;
        }
        colors = next;
    }
    let n = Modulus::new(1 << alpha)?;
    let c = Coloring::from_colors(n, colors)?;
    verified(c, &sum_eq(n), "two-power coloring")
}

/// The coloring of Z_{pt} built from a rainbow-free coloring `c_p` of Z_p in which 0 is
/// alone in its class and a rainbow-free coloring `c_t` of Z_t: multiples of `p` take the
/// color of `x/p` under `c_t`, everything else takes the color of `x mod p` under `c_p`,
/// with the two palettes kept disjoint. Uses `r_p + r_t - 1` colors.
///
/// Both inputs must be rainbow-free for `eq(coeffs, 0)` over their own moduli.
pub fn product_coloring(
    p: u64,
    t: u64,
    c_p: &Coloring,
    c_t: &Coloring,
    coeffs: [i64; 3],
) -> Result<Coloring> {
    if !is_prime(p) {
        return Err(Error::BadWitness(format!("{p} is not prime")));
    }
    if c_p.modulus().get() != p || c_t.modulus().get() != t {
        return Err(Error::BadWitness(format!(
            "input colorings are over Z_{} and Z_{}, expected Z_{p} and Z_{t}",
            c_p.modulus(),
            c_t.modulus()
        )));
    }
    let mp = Modulus::new(p)?;
    let mt = Modulus::new(t)?;
    let mpt = Modulus::new(p * t)?;
    let eq_p = Equation::reduced(mp, coeffs, 0);
    let eq_t = Equation::reduced(mt, coeffs, 0);
    if !eq_p.has_unit_coefficients() {
        return Err(Error::BadWitness(format!("a coefficient vanishes mod {p}")));
    }
    let zero_color = c_p.color(0);
    if (1..p).any(|x| c_p.color(x) == zero_color) {
        return Err(Error::BadWitness("0 is not alone in its color class under c_p".into()));
    }
    if let Some(w) = c_p.find_rainbow(&eq_p)?.witness() {
        return Err(Error::BadWitness(format!("c_p has rainbow solution {w:?} for {eq_p}")));
    }
    if let Some(w) = c_t.find_rainbow(&eq_t)?.witness() {
        return Err(Error::BadWitness(format!("c_t has rainbow solution {w:?} for {eq_t}")));
    }

    // Re-index c_p so its zero class is color 0; nonzero residues then use 1..r_p.
    let cp = {
        let mut order = vec![zero_color];
        order.extend((0..c_p.num_colors()).filter(|&c| c != zero_color));
        let rank = |c: u32| order.iter().position(|&o| o == c).unwrap() as u32;
        (0..p).map(|x| rank(c_p.color(x))).collect::<Vec<_>>()
    };
    let r_t = c_t.num_colors();
    let raw: Vec<u32> = (0..p * t)
        .map(|x| {
            if x % p == 0 {
                c_t.color(x / p)
            } else {
                r_t - 1 + cp[(x % p) as usize]
            }
        })
        .collect();
    let c = Coloring::from_colors(mpt, relabel_by_first_use(&raw))?;
    verified(c, &Equation::reduced(mpt, coeffs, 0), "product coloring")
}

/// The exact 4-coloring of Z_9 with singleton classes `{2}`, `{5}`, `{8}`.
pub fn z9_coloring() -> Coloring {
    let n = Modulus::new(9).expect("9 >= 2");
    let c = Coloring::from_colors(n, vec![0, 0, 1, 0, 0, 2, 0, 0, 3]).expect("exact");
    verified(c, &sum_eq(n), "Z_9 coloring").expect("rainbow-free by construction")
}

/// A rainbow-free exact `r`-coloring of Z_p for `eq` (with `b = 0`) in which 0 is alone in
/// its class, for `r` in `{2, 3}`. Returns `None` when none is known.
pub fn singleton_zero_coloring(eq: &Equation, r: u32) -> Result<Option<Coloring>> {
    let n = eq.modulus();
    let p = n.get();
    if !is_prime(p) {
        return Err(Error::BadModulus(format!("{p} is not prime")));
    }
    let candidate = match r {
        2 => Some(Coloring::from_colors(n, (0..p).map(|x| (x != 0) as u32).collect())?),
        3 if p == 3 => Some(Coloring::from_colors(n, vec![0, 1, 2])?),
        3 if p >= 5 && eq.all_coefficients_equal() && eq.rhs() == 0 => {
            Some(symmetric_interval_coloring(p)?)
        }
        3 if (5..=MAX_SINGLETON_SEARCH_PRIME).contains(&p) => {
            // split 1..p into two nonempty classes, 1 always in the first
            let rest = p - 2;
            (1..1u64 << rest).find_map(|mask| {
                let colors: Vec<u32> = (0..p)
                    .map(|x| match x {
                        0 => 0,
                        1 => 1,
                        _ => 1 + (mask >> (x - 2) & 1) as u32,
                    })
                    .collect();
                let c = Coloring::from_colors(n, colors).ok()?;
                c.find_rainbow(eq).ok()?.is_rainbow_free().then_some(c)
            })
        }
        _ => None,
    };
    match candidate {
        Some(c) if c.find_rainbow(eq)?.is_rainbow_free() => Ok(Some(c)),
        _ => Ok(None),
    }
}
