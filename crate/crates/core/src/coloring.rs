//! Exact colorings of Z_n and rainbow detection.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::equation::{other_positions, Equation, SolutionTriple};
use crate::error::{Error, Result};
use crate::modring::{try_inverse, Modulus, ResidueSet};

/// An exact coloring of Z_n: `colors[x]` is the color of residue `x`, and every color in
/// `0..num_colors` is used.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    n: Modulus,
    colors: Vec<u32>,
    num_colors: u32,
}

/// Outcome of a rainbow search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RainbowReport {
    RainbowFound(SolutionTriple),
    RainbowFree,
}

impl RainbowReport {
    pub fn is_rainbow_free(&self) -> bool {
        matches!(self, RainbowReport::RainbowFree)
    }

    pub fn witness(&self) -> Option<SolutionTriple> {
        match *self {
            RainbowReport::RainbowFound(t) => Some(t),
            RainbowReport::RainbowFree => None,
        }
    }
}

/// Residue classes mod `u` and the colors appearing on each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaletteView {
    pub u: u64,
    pub classes: Vec<ResidueSet>,
    pub palettes: Vec<BTreeSet<u32>>,
}

/// On-disk form: `{"n": 5, "colors": [0, 1, 2, 2, 1]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringFile {
    pub n: u64,
    pub colors: Vec<u32>,
}

impl Coloring {
    /// Validate a dense assignment: length `n`, colors contiguous from 0.
    pub fn from_colors(n: Modulus, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != n.as_usize() {
            return Err(Error::InvalidColoring(format!(
                "expected {} colors, got {}",
                n,
                colors.len()
            )));
        }
        let num_colors = colors.iter().max().map_or(0, |&c| c + 1);
        let mut used = vec![false; num_colors as usize];
        for &c in &colors {
            used[c as usize] = true;
        }
        if let Some(gap) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidColoring(format!(
                "color {gap} is unused but {} is used",
                num_colors - 1
            )));
        }
        Ok(Coloring { n, colors, num_colors })
    }

    /// Class `k` receives color `k`.
    pub fn from_classes<I, C>(n: Modulus, classes: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = u64>,
    {
        let mut colors: Vec<Option<u32>> = vec![None; n.as_usize()];
        for (k, class) in classes.into_iter().enumerate() {
            let mut empty = true;
            for x in class {
                empty = false;
                let x = n.check(x).map_err(|e| Error::BadPartition(e.to_string()))?;
                if let Some(prev) = colors[x as usize].replace(k as u32) {
                    return Err(Error::BadPartition(format!(
                        "{x} lies in classes {prev} and {k}"
                    )));
                }
            }
            if empty {
                return Err(Error::BadPartition(format!("class {k} is empty")));
            }
        }
        let colors = colors
            .into_iter()
            .enumerate()
            .map(|(x, c)| c.ok_or_else(|| Error::BadPartition(format!("{x} is uncolored"))))
            .collect::<Result<Vec<_>>>()?;
        Coloring::from_colors(n, colors)
    }

    pub fn modulus(&self) -> Modulus {
        self.n
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    #[inline]
    pub fn color(&self, x: u64) -> u32 {
        self.colors[x as usize]
    }

    pub fn classes(&self) -> Vec<ResidueSet> {
        let mut out = vec![Vec::new(); self.num_colors as usize];
        for (x, &c) in self.colors.iter().enumerate() {
            out[c as usize].push(x as u64);
        }
        out.into_iter()
            .map(|xs| ResidueSet::new(self.n, xs).expect("residues in range"))
            .collect()
    }

    /// Relabel colors in order of first appearance (the restricted-growth form).
    pub fn canonical(&self) -> Coloring {
        Coloring::from_colors(self.n, relabel_by_first_use(&self.colors)).expect("relabel keeps exactness")
    }

    /// Same partition into classes, ignoring color names.
    pub fn same_partition(&self, other: &Coloring) -> bool {
        self.n == other.n && self.canonical().colors == other.canonical().colors
    }

    pub fn find_rainbow(&self, eq: &Equation) -> Result<RainbowReport> {
        if eq.modulus() != self.n {
            return Err(Error::ModulusMismatch {
                coloring: self.n.get(),
                equation: eq.modulus().get(),
            });
        }
        if self.num_colors < 3 {
            return Ok(RainbowReport::RainbowFree);
        }
        let n = self.n.get();
        let c = &self.colors;
        let rainbow = |t: &SolutionTriple| {
            let (x, y, z) = (c[t[0] as usize], c[t[1] as usize], c[t[2] as usize]);
            x != y && y != z && x != z
        };
        match eq.pivot() {
            Some((pos, inv)) => {
                let (i, j) = other_positions(pos);
                for x in 0..n {
                    for y in 0..n {
                        if c[x as usize] == c[y as usize] {
                            continue;
                        }
                        let mut t = [0; 3];
                        t[i] = x;
                        t[j] = y;
                        eq.complete(pos, inv, &mut t);
                        if rainbow(&t) {
                            return Ok(RainbowReport::RainbowFound(t));
                        }
                    }
                }
            }
            None => {
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            let t = [x, y, z];
                            if rainbow(&t) && eq.is_solution(&t) {
                                return Ok(RainbowReport::RainbowFound(t));
                            }
                        }
                    }
                }
            }
        }
        Ok(RainbowReport::RainbowFree)
    }

    pub fn palette_view(&self, u: u64) -> Result<PaletteView> {
        let n = self.n.get();
        if u < 2 || n % u != 0 {
            return Err(Error::NotDivisor { m: u, n });
        }
        let mut members = vec![Vec::new(); u as usize];
        let mut palettes = vec![BTreeSet::new(); u as usize];
        for x in 0..n {
            members[(x % u) as usize].push(x);
            palettes[(x % u) as usize].insert(self.color(x));
        }
        let classes = members
            .into_iter()
            .map(|xs| ResidueSet::new(self.n, xs).expect("in range"))
            .collect();
        Ok(PaletteView { u, classes, palettes })
    }

    /// The coloring of Z_u that gives class `i` the unique color of `P_i \ P_j`, or a fresh
    /// color when `P_i ⊆ P_j`. Output colors are compacted with the fresh color last.
    pub fn project_palette_coloring(&self, u: u64, j: u64) -> Result<Coloring> {
        let view = self.palette_view(u)?;
        if j >= u {
            return Err(Error::OutOfRange { value: j, n: u });
        }
        let reference = &view.palettes[j as usize];
        let mut projected = Vec::with_capacity(u as usize);
        for (i, palette) in view.palettes.iter().enumerate() {
            let extra: Vec<u32> = palette.difference(reference).copied().collect();
            match extra.as_slice() {
                [] => projected.push(None),
                [c] => projected.push(Some(*c)),
                _ => return Err(Error::NotProjectable { class: i as u64, extra: extra.len() }),
            }
        }
        let mut order: Vec<u32> = Vec::new();
        for c in projected.iter().flatten() {
            if !order.contains(c) {
                order.push(*c);
            }
        }
        let yellow = order.len() as u32;
        let colors = projected
            .iter()
            .map(|c| match c {
                Some(c) => order.iter().position(|o| o == c).unwrap() as u32,
                None => yellow,
            })
            .collect();
        Coloring::from_colors(Modulus::new(u)?, colors)
    }

    /// `c_k(x) = c(x + k)`.
    pub fn translate(&self, k: u64) -> Coloring {
        let n = self.n;
        let colors = n.residues().map(|x| self.color(n.add(x, k))).collect();
        Coloring { n, colors, num_colors: self.num_colors }
    }

    /// The coloring whose classes are `dA` for each class `A`: `out(x) = c(d^{-1} x)`.
    pub fn dilate(&self, d: u64) -> Result<Coloring> {
        let n = self.n;
        let inv = try_inverse(d, n)?;
        let colors = n.residues().map(|x| self.color(n.mul(inv, x))).collect();
        Ok(Coloring { n, colors, num_colors: self.num_colors })
    }

    pub fn to_file(&self) -> ColoringFile {
        ColoringFile { n: self.n.get(), colors: self.colors.clone() }
    }

    pub fn from_file(file: ColoringFile) -> Result<Self> {
        Coloring::from_colors(Modulus::new(file.n)?, file.colors)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: ColoringFile =
            serde_json::from_str(s).map_err(|e| Error::InvalidColoring(e.to_string()))?;
        Coloring::from_file(file)
    }
}

pub(crate) fn relabel_by_first_use(colors: &[u32]) -> Vec<u32> {
    let mut map: Vec<Option<u32>> = Vec::new();
    let mut next = 0;
    colors
        .iter()
        .map(|&c| {
            let c = c as usize;
            if map.len() <= c {
                map.resize(c + 1, None);
            }
            *map[c].get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}
