//! The Hopf-link substitution calculation.
//!
//! The first component's word is read off the band-summed picture as
//! `[[m3, m4*b] * [b, m4], m2*a]`, where `a` and `b` are meridians of the
//! 2-handles. Band sums replace `a` by a word in `m3, m4` and `b` by a word
//! in `m2`; the question is whether the result dies in the free Milnor group
//! on `m2, m3, m4`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::magnus::{expand, lcs_degree, LcsDegree, MagnusPoly, VariableSet};
use crate::parse::parse_expr;
use crate::word::{
    expr_to_word, substitute, Alphabet, CommExpr, Generator, GroupWord, Substitution,
};

pub const L1_WORD: &str = "[[m3,m4*b]*[b,m4],m2*a]";

/// The same word with the two `b` letters of opposite sign, as for a band
/// with the other twist.
pub const L1_WORD_TWISTED: &str = "[[m3,m4*b]*[b^-1,m4],m2*a]";

#[derive(Debug, Clone)]
pub struct HopfScenario {
    pub alphabet: Alphabet,
    pub expr: CommExpr,
    m2: Generator,
    m3: Generator,
    m4: Generator,
    a: Generator,
    b: Generator,
}

impl HopfScenario {
    pub fn new() -> Self {
        HopfScenario::from_text(L1_WORD).expect("scenario word parses")
    }

    pub fn twisted() -> Self {
        HopfScenario::from_text(L1_WORD_TWISTED).expect("scenario word parses")
    }

    /// A scenario word over `m2, m3, m4, a, b`.
    pub fn from_text(text: &str) -> Result<Self> {
        let alphabet = Alphabet::new(["m2", "m3", "m4", "a", "b"])?;
        let expr = parse_expr(text, &alphabet)?;
        let g = |n: &str| alphabet.require(n);
        Ok(HopfScenario {
            m2: g("m2")?,
            m3: g("m3")?,
            m4: g("m4")?,
            a: g("a")?,
            b: g("b")?,
            expr,
            alphabet,
        })
    }

    pub fn generator(&self, name: &str) -> Result<Generator> {
        self.alphabet.require(name)
    }

    /// `x2, x3, x4` for the meridians.
    pub fn meridian_vars(&self) -> VariableSet {
        VariableSet::new([(self.m2, 2), (self.m3, 3), (self.m4, 4)]).unwrap()
    }

    /// The meridians plus `a -> x5`, `b -> x6`.
    pub fn all_vars(&self) -> VariableSet {
        VariableSet::new([
            (self.m2, 2),
            (self.m3, 3),
            (self.m4, 4),
            (self.a, 5),
            (self.b, 6),
        ])
        .unwrap()
    }

    /// `a` may only use `m3, m4` and `b` only `m2`: the slices of the other
    /// components do not go over the 2-handle dual to their own meridian.
    pub fn check_admissible(&self, a: &GroupWord, b: &GroupWord) -> Result<()> {
        let check = |name: &str, w: &GroupWord, allowed: &[Generator]| match w
            .letters()
            .iter()
            .find(|l| !allowed.contains(&l.generator))
        {
            Some(l) => Err(Error::Inadmissible(format!(
                "{name} may not contain {}",
                self.alphabet.name(l.generator)
            ))),
            None => Ok(()),
        };
        check("a", a, &[self.m3, self.m4])?;
        check("b", b, &[self.m2])
    }

    /// The reduced word after `a -> a_img`, `b -> b_img`.
    pub fn build_substituted_l1(&self, a: &GroupWord, b: &GroupWord) -> Result<GroupWord> {
        self.check_admissible(a, b)?;
        let sub = Substitution::new()
            .with(self.a, a.clone())
            .with(self.b, b.clone());
        Ok(substitute(&self.expr, &sub))
    }

    /// `a -> m3^s3 m4^s4`, `b -> m2^t`.
    pub fn monomial_substitution(&self, s3: i64, s4: i64, t: i64) -> (GroupWord, GroupWord) {
        let a = GroupWord::generator(self.m3)
            .pow(s3)
            .mul(&GroupWord::generator(self.m4).pow(s4));
        (a, GroupWord::generator(self.m2).pow(t))
    }

    pub fn substituted_expansion(&self, s3: i64, s4: i64, t: i64) -> Result<MagnusPoly> {
        let (a, b) = self.monomial_substitution(s3, s4, t);
        expand(&self.build_substituted_l1(&a, &b)?, &self.meridian_vars())
    }

    /// All `(s3, s4, t)` with entries in `[-bound, bound]` whose substituted
    /// word is trivial in the free Milnor group, in lexicographic order.
    pub fn find_substitutions(&self, bound: i64) -> Vec<(i64, i64, i64)> {
        let mut triples = Vec::new();
        for x in -bound..=bound {
            for y in -bound..=bound {
                for z in -bound..=bound {
                    triples.push((x, y, z));
                }
            }
        }
        let mut out: Vec<_> = triples
            .into_par_iter()
            .filter(|&(s3, s4, t)| {
                self.substituted_expansion(s3, s4, t)
                    .map(|p| p.is_one())
                    .unwrap_or(false)
            })
            .collect();
        out.sort_unstable();
        out
    }
}

impl Default for HopfScenario {
    fn default() -> Self {
        HopfScenario::new()
    }
}

/// [`HopfScenario::find_substitutions`] on the standard word.
pub fn find_substitutions(bound: i64) -> Vec<(i64, i64, i64)> {
    HopfScenario::new().find_substitutions(bound)
}

pub fn build_substituted_l1(a: &GroupWord, b: &GroupWord) -> Result<GroupWord> {
    HopfScenario::new().build_substituted_l1(a, b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfReport {
    /// The substituted word for `a = m3 m4`, `b = m2^-1`.
    pub substituted_word: String,
    pub expansion: String,
    pub unsubstituted_lcs: LcsDegree,
    pub checks: Vec<Check>,
    /// Trivializing triples of the twisted word within bound 2.
    pub twisted_solutions: Vec<(i64, i64, i64)>,
}

impl HopfReport {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

/// Every ordered triple of letters `m2^±1, m3^±1, m4^±1`.
fn letter_triples(s: &HopfScenario) -> Vec<[GroupWord; 3]> {
    let letters: Vec<GroupWord> = [s.m2, s.m3, s.m4]
        .into_iter()
        .flat_map(|g| [GroupWord::generator(g), GroupWord::generator(g).inverse()])
        .collect();
    let mut out = Vec::new();
    for x in &letters {
        for y in &letters {
            for z in &letters {
                out.push([x.clone(), y.clone(), z.clone()]);
            }
        }
    }
    out
}

fn c(x: &GroupWord, y: &GroupWord) -> GroupWord {
    GroupWord::commutator(x, y)
}

/// `[[x,y],z^x] [[z,x],y^z] [[y,z],x^y]`
pub fn hall_witt(x: &GroupWord, y: &GroupWord, z: &GroupWord) -> GroupWord {
    c(&c(x, y), &z.conjugate_by(x))
        .mul(&c(&c(z, x), &y.conjugate_by(z)))
        .mul(&c(&c(y, z), &x.conjugate_by(y)))
}

/// `[x,yz]^-1 [x,z] [x,y]^z` and `[xz,y]^-1 [x,y]^z [z,y]`.
pub fn product_identity_words(x: &GroupWord, y: &GroupWord, z: &GroupWord) -> [GroupWord; 2] {
    let first = c(x, &y.mul(z))
        .inverse()
        .mul(&c(x, z))
        .mul(&c(x, y).conjugate_by(z));
    let second = c(&x.mul(z), y)
        .inverse()
        .mul(&c(x, y).conjugate_by(z))
        .mul(&c(z, y));
    [first, second]
}

/// `[x^-1,y]^-1 [y,x]^(x^-1)`
pub fn inverse_commutator_word(x: &GroupWord, y: &GroupWord) -> GroupWord {
    c(&x.inverse(), y)
        .inverse()
        .mul(&c(y, x).conjugate_by(&x.inverse()))
}

pub fn verify_hopf_triviality() -> Result<HopfReport> {
    let s = HopfScenario::new();
    let vars = s.meridian_vars();
    let (a, b) = s.monomial_substitution(1, 1, -1);
    let l1 = s.build_substituted_l1(&a, &b)?;
    let m = expand(&l1, &vars)?;

    let g = |x| GroupWord::generator(x);
    let (m2, m3, m4) = (g(s.m2), g(s.m3), g(s.m4));
    let collected = c(&c(&m3, &m4), &m2)
        .mul(&c(&c(&m3, &m2.inverse()), &m4))
        .mul(&c(&c(&m2.inverse(), &m4), &m3));
    let jacobi = c(&c(&m3, &m4), &m2)
        .mul(&c(&c(&m2, &m3), &m4))
        .mul(&c(&c(&m4, &m2), &m3));
    let collected_m = expand(&collected, &vars)?;
    let jacobi_m = expand(&jacobi, &vars)?;

    let triples = letter_triples(&s);
    let hw_ok = triples
        .iter()
        .all(|[x, y, z]| hall_witt(x, y, z).is_empty());
    let prod_ok = triples.iter().all(|[x, y, z]| {
        product_identity_words(x, y, z)
            .iter()
            .all(GroupWord::is_empty)
    });
    let inv_ok = triples
        .iter()
        .all(|[x, y, _]| inverse_commutator_word(x, y).is_empty());

    // Dropping every conjugation in the Hall-Witt word leaves the Jacobi
    // product, which is only trivial modulo the Milnor relations.
    let jacobi_all = triples.iter().all(|[x, y, z]| {
        let w = c(&c(x, y), z).mul(&c(&c(z, x), y)).mul(&c(&c(y, z), x));
        expand(&w, &vars).map(|p| p.is_one()).unwrap_or(false)
    });

    let unsubstituted = expr_to_word(&s.expr);
    let lcs = lcs_degree(&unsubstituted, &s.all_vars())?;

    let conj_ok = [m2.clone(), m3.clone(), m4.clone()].iter().all(|h| {
        expand(&l1.conjugate_by(h), &vars)
            .map(|p| p == m)
            .unwrap_or(false)
    });

    let twisted_solutions = HopfScenario::twisted().find_substitutions(2);

    let checks = vec![
        check(
            "substituted word has expansion 1",
            m.is_one(),
            format!("M(l1) = {m}"),
        ),
        check(
            "collected form has expansion 1",
            collected_m.is_one() && collected_m == m,
            format!("M = {collected_m}"),
        ),
        check(
            "Jacobi product has expansion 1",
            jacobi_m.is_one(),
            format!("M = {jacobi_m}"),
        ),
        check(
            "[x^-1,y] = [y,x]^(x^-1) freely",
            inv_ok,
            format!("{} letter pairs", 36),
        ),
        check(
            "Hall-Witt word reduces to 1",
            hw_ok,
            format!("{} letter triples", triples.len()),
        ),
        check(
            "product identities reduce to 1",
            prod_ok,
            format!("{} letter triples", triples.len()),
        ),
        check(
            "Jacobi product trivial on every triple",
            jacobi_all,
            format!("{} letter triples", triples.len()),
        ),
        check(
            "unsubstituted word lies in the third lcs term exactly",
            lcs == LcsDegree::Finite(3),
            format!("degree {lcs} over x2..x6"),
        ),
        check(
            "conjugation leaves the expansion unchanged",
            conj_ok,
            "by m2, m3, m4",
        ),
        check(
            "twisted word has a trivializing substitution within bound 2",
            !twisted_solutions.is_empty(),
            format!("{twisted_solutions:?}"),
        ),
    ];
    Ok(HopfReport {
        substituted_word: l1.display(&s.alphabet).to_string(),
        expansion: m.to_string(),
        unsubstituted_lcs: lcs,
        checks,
        twisted_solutions,
    })
}
