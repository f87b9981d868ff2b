//! The Magnus expansion into the squarefree ring `R`.
//!
//! `R` is the non-commutative power-series ring over `Z` in variables `x_i`,
//! modulo every monomial in which some variable occurs twice. It is a free
//! `Z`-module on the monomials with distinct indices, so over `n` variables
//! it is finite (326 monomials at `n = 5`). The expansion sends a generator to
//! `1 + x` and its inverse to `1 - x`, the higher powers of the geometric
//! series being zero in `R`.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Generator, GroupWord};

/// Maps generators to variable indices `x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSet {
    pairs: Vec<(Generator, u32)>,
}

impl VariableSet {
    pub fn new(pairs: impl IntoIterator<Item = (Generator, u32)>) -> Result<Self> {
        let pairs: Vec<_> = pairs.into_iter().collect();
        for (i, (g, v)) in pairs.iter().enumerate() {
            if pairs[..i].iter().any(|(_, w)| w == v) {
                return Err(Error::DuplicateVariable(*v));
            }
            if pairs[..i].iter().any(|(h, _)| h == g) {
                return Err(Error::Malformed(format!(
                    "generator #{} mapped twice",
                    g.index()
                )));
            }
        }
        Ok(VariableSet { pairs })
    }

    /// Variables named after the generators: `m4` becomes `x4`. Generators
    /// without a numeric suffix, or whose suffixes collide, fall back to
    /// their 1-based position in `gens`.
    pub fn by_name(alphabet: &Alphabet, gens: &[Generator]) -> Result<Self> {
        let suffixes: Option<Vec<u32>> = gens
            .iter()
            .map(|g| {
                let name = alphabet.name(*g);
                let digits = name.trim_start_matches(|c: char| !c.is_ascii_digit());
                digits.parse().ok()
            })
            .collect();
        let indices = match suffixes {
            Some(s) if (0..s.len()).all(|i| !s[..i].contains(&s[i])) => s,
            _ => (1..=gens.len() as u32).collect(),
        };
        VariableSet::new(gens.iter().copied().zip(indices))
    }

    pub fn variable(&self, g: Generator) -> Option<u32> {
        self.pairs.iter().find(|(h, _)| *h == g).map(|(_, v)| *v)
    }

    pub fn indices(&self) -> impl Iterator<Item = u32> + '_ {
        self.pairs.iter().map(|(_, v)| *v)
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.pairs.iter().map(|(g, _)| *g)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// A product of distinct variables, stored as the ordered index sequence.
/// Ordered by length first, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// Returns `None` when the sequence repeats an index (the monomial is zero in `R`).
    pub fn new(indices: Vec<u32>) -> Option<Self> {
        let squarefree = (0..indices.len()).all(|i| !indices[..i].contains(&indices[i]));
        squarefree.then_some(Monomial(indices))
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    fn contains(&self, v: u32) -> bool {
        self.0.contains(&v)
    }

    fn disjoint(&self, other: &Monomial) -> bool {
        self.0.iter().all(|v| !other.0.contains(v))
    }

    fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for v in &self.0 {
            write!(f, "x{v}")?;
        }
        Ok(())
    }
}

/// An element of `R` with integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MagnusPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MagnusPoly {
    pub fn zero() -> Self {
        MagnusPoly::default()
    }

    pub fn one() -> Self {
        MagnusPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = MagnusPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    /// `1 + x_v`
    pub fn unipotent(v: u32) -> Self {
        let mut p = MagnusPoly::one();
        p.add_term(Monomial(vec![v]), BigInt::one());
        p
    }

    /// Builds a polynomial from `(indices, coefficient)` pairs; monomials with
    /// a repeated index are dropped.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, i64)>,
    {
        let mut p = MagnusPoly::zero();
        for (idx, c) in terms {
            if let Some(m) = Monomial::new(idx) {
                p.add_term(m, BigInt::from(c));
            }
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn coefficient(&self, indices: &[u32]) -> BigInt {
        self.terms
            .get(&Monomial(indices.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&[])
    }

    /// The homogeneous part of the given degree.
    pub fn homogeneous(&self, degree: usize) -> MagnusPoly {
        MagnusPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &MagnusPoly) -> MagnusPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MagnusPoly {
        MagnusPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MagnusPoly) -> MagnusPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MagnusPoly) -> MagnusPoly {
        let mut out = MagnusPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.disjoint(m2) {
                    out.add_term(m1.concat(m2), c1 * c2);
                }
            }
        }
        out
    }

    /// `self * (1 + x_v)` or, with `inverse`, `self * (1 - x_v)`.
    fn mul_letter(&self, v: u32, inverse: bool) -> MagnusPoly {
        let mut out = self.clone();
        let var = Monomial(vec![v]);
        for (m, c) in &self.terms {
            if !m.contains(v) {
                let c = if inverse { -c } else { c.clone() };
                out.add_term(m.concat(&var), c);
            }
        }
        out
    }

    /// Inverse of a unit via the finite geometric series `sum (1 - p)^k`.
    pub fn invert(&self) -> Result<MagnusPoly> {
        if !self.constant_term().is_one() {
            return Err(Error::NonUnit(self.constant_term().to_string()));
        }
        let nilpotent = MagnusPoly::one().sub(self);
        let mut out = MagnusPoly::one();
        let mut power = MagnusPoly::one();
        loop {
            power = power.mul(&nilpotent);
            if power.is_zero() {
                return Ok(out);
            }
            out = out.add(&power);
        }
    }

    /// Smallest length of a non-constant monomial with nonzero coefficient.
    pub fn min_nonconstant_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).find(|&d| d > 0)
    }
}

impl fmt::Display for MagnusPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            if m.degree() == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Expands a word letter by letter, left to right.
pub fn expand(w: &GroupWord, vars: &VariableSet) -> Result<MagnusPoly> {
    let mut p = MagnusPoly::one();
    for l in w.letters() {
        let v = vars
            .variable(l.generator)
            .ok_or_else(|| Error::UncoveredGenerator(format!("#{}", l.generator.index())))?;
        p = p.mul_letter(v, l.inverse);
    }
    Ok(p)
}

/// Like [`expand`], naming uncovered generators through the alphabet.
pub fn expand_named(w: &GroupWord, vars: &VariableSet, alphabet: &Alphabet) -> Result<MagnusPoly> {
    expand(w, vars).map_err(|e| match e {
        Error::UncoveredGenerator(_) => {
            let g = w
                .letters()
                .iter()
                .find(|l| vars.variable(l.generator).is_none())
                .unwrap()
                .generator;
            Error::UncoveredGenerator(alphabet.name(g).to_string())
        }
        other => other,
    })
}

pub fn invert(p: &MagnusPoly) -> Result<MagnusPoly> {
    p.invert()
}

/// Triviality in the free Milnor group, decided by the Magnus expansion.
pub fn is_trivial_word(w: &GroupWord, vars: &VariableSet) -> Result<bool> {
    Ok(expand(w, vars)?.is_one())
}

/// Lower-central-series degree detected by the expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LcsDegree {
    Finite(usize),
    Infinite,
}

impl fmt::Display for LcsDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LcsDegree::Finite(d) => write!(f, "{d}"),
            LcsDegree::Infinite => f.write_str("infinite"),
        }
    }
}

pub fn lcs_degree(w: &GroupWord, vars: &VariableSet) -> Result<LcsDegree> {
    let p = expand(w, vars)?.sub(&MagnusPoly::one());
    Ok(p.terms
        .keys()
        .next()
        .map_or(LcsDegree::Infinite, |m| LcsDegree::Finite(m.degree())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{expr_to_word, CommExpr, Letter};

    fn setup(n: u32) -> (Vec<Generator>, VariableSet) {
        let gens: Vec<_> = (0..n).map(Generator).collect();
        let vars = VariableSet::new(gens.iter().map(|g| (*g, g.index() + 1))).unwrap();
        (gens, vars)
    }

    #[test]
    fn generator_and_inverse() {
        let (g, vars) = setup(1);
        let w = GroupWord::generator(g[0]);
        assert_eq!(expand(&w, &vars).unwrap(), MagnusPoly::unipotent(1));
        let inv = expand(&w.inverse(), &vars).unwrap();
        assert_eq!(inv, MagnusPoly::from_terms([(vec![], 1), (vec![1], -1)]));
        assert!(MagnusPoly::unipotent(1).mul(&inv).is_one());
    }

    #[test]
    fn commutator_expansion() {
        let (g, vars) = setup(2);
        let w = expr_to_word(&CommExpr::comm(CommExpr::leaf(g[0]), CommExpr::leaf(g[1])));
        let p = expand(&w, &vars).unwrap();
        // (1-x1)(1-x2)(1+x1)(1+x2) with repeated-index monomials dropped
        let oracle = [(vec![1], -1), (vec![2], -1), (vec![1], 1), (vec![2], 1)]
            .into_iter()
            .map(|(v, c)| MagnusPoly::from_terms([(vec![], 1), (v, c)]))
            .fold(MagnusPoly::one(), |acc, f| acc.mul(&f));
        assert_eq!(p, oracle);
        assert_eq!(p.to_string(), "1 + x1x2 - x2x1");
        assert!(!is_trivial_word(&w, &vars).unwrap());
        assert_eq!(lcs_degree(&w, &vars).unwrap(), LcsDegree::Finite(2));
    }

    #[test]
    fn degrees_and_triviality() {
        let (g, vars) = setup(3);
        assert!(is_trivial_word(&GroupWord::identity(), &vars).unwrap());
        assert_eq!(
            lcs_degree(&GroupWord::identity(), &vars).unwrap(),
            LcsDegree::Infinite
        );
        assert_eq!(
            lcs_degree(&GroupWord::generator(g[0]), &vars).unwrap(),
            LcsDegree::Finite(1)
        );
    }

    #[test]
    fn left_normed_convention() {
        let (g, vars) = setup(3);
        let l = |i: usize| CommExpr::leaf(g[i]);
        let w = expr_to_word(&CommExpr::comm(l(0), CommExpr::comm(l(1), l(2))));
        let p = expand(&w, &vars).unwrap();
        assert_eq!(p.coefficient(&[1, 2, 3]), BigInt::from(1));
        assert_eq!(p.coefficient(&[2, 3, 1]), BigInt::from(-1));
    }

    #[test]
    fn invert_units() {
        assert_eq!(MagnusPoly::one().invert().unwrap(), MagnusPoly::one());
        assert_eq!(
            MagnusPoly::unipotent(1).invert().unwrap(),
            MagnusPoly::from_terms([(vec![], 1), (vec![1], -1)])
        );
        let p = MagnusPoly::from_terms([(vec![], 2), (vec![1], 1)]);
        assert_eq!(p.invert(), Err(Error::NonUnit("2".into())));
    }

    #[test]
    fn uncovered_generator() {
        let (_, vars) = setup(1);
        let w = GroupWord::from_letters(vec![Letter::new(Generator(5), false)]);
        assert!(matches!(
            expand(&w, &vars),
            Err(Error::UncoveredGenerator(_))
        ));
    }

    #[test]
    fn squarefree_product_drops_repeats() {
        let p = MagnusPoly::from_terms([(vec![1, 2], 1), (vec![3], 2)]);
        let q = MagnusPoly::from_terms([(vec![2], 1), (vec![1], 1)]);
        assert_eq!(
            p.mul(&q),
            MagnusPoly::from_terms([(vec![3, 2], 2), (vec![3, 1], 2)])
        );
        assert_eq!(
            MagnusPoly::from_terms([(vec![1, 1], 4)]),
            MagnusPoly::zero()
        );
    }

    #[test]
    fn rendering_order() {
        let p = MagnusPoly::from_terms([
            (vec![3, 2, 4], -1),
            (vec![2, 3, 4], 1),
            (vec![], 1),
            (vec![2], -3),
        ]);
        assert_eq!(p.to_string(), "1 - 3*x2 + x2x3x4 - x3x2x4");
        assert_eq!(MagnusPoly::zero().to_string(), "0");
    }

    #[test]
    fn variable_naming() {
        let a = Alphabet::new(["m2", "m3", "a"]).unwrap();
        let gens: Vec<_> = a.generators().collect();
        let v = VariableSet::by_name(&a, &gens[..2]).unwrap();
        assert_eq!(v.indices().collect::<Vec<_>>(), vec![2, 3]);
        let v = VariableSet::by_name(&a, &gens).unwrap();
        assert_eq!(v.indices().collect::<Vec<_>>(), vec![1, 2, 3]);
    }
}
