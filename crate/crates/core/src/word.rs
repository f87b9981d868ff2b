//! Free-group words and commutator expressions.
//!
//! Conventions: `[x,y] = x^-1 y^-1 x y` and `x^g = g^-1 x g`. Under these the
//! product identities `[x,yz] = [x,z][x,y]^z`, `[xz,y] = [x,y]^z [z,y]` and
//! the Hall-Witt identity hold letter for letter after free reduction.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// A generator of the ambient free group, identified by its position in an
/// [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(pub u32);

impl Generator {
    pub fn index(self) -> u32 {
        self.0
    }
}

/// The generator universe of a session. Names are unique and generators are
/// numbered `0..len` in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    lookup: HashMap<String, Generator>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Alphabet {
            names: Vec::new(),
            lookup: HashMap::new(),
        };
        for name in names {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(Error::Malformed(format!(
                    "`{name}` is not a valid generator name"
                )));
            }
            if out.lookup.contains_key(&name) {
                return Err(Error::DuplicateGenerator(name));
            }
            let g = Generator(out.names.len() as u32);
            out.lookup.insert(name.clone(), g);
            out.names.push(name);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<Generator> {
        self.lookup.get(name).copied()
    }

    /// Looks up a generator, failing with an unknown-generator error.
    pub fn require(&self, name: &str) -> Result<Generator> {
        self.get(name).ok_or_else(|| Error::UnknownGenerator {
            name: name.to_string(),
            offset: 0,
        })
    }

    pub fn name(&self, g: Generator) -> &str {
        &self.names[g.0 as usize]
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        (0..self.names.len() as u32).map(Generator)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: Generator, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A word in the free group. Words are not required to be reduced; every
/// operation that builds new words returns them in free normal form.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    /// Wraps a letter sequence as-is, without reducing it.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        GroupWord { letters }
    }

    pub fn generator(g: Generator) -> Self {
        GroupWord {
            letters: vec![Letter::new(g, false)],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn free_reduce(&self) -> GroupWord {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        GroupWord { letters: stack }
    }

    /// Reduced product `self * other`.
    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        GroupWord { letters }.free_reduce()
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
        .free_reduce()
    }

    pub fn pow(&self, n: i64) -> GroupWord {
        let base = if n < 0 {
            self.inverse()
        } else {
            self.free_reduce()
        };
        let mut out = GroupWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `x^-1 y^-1 x y`
    pub fn commutator(x: &GroupWord, y: &GroupWord) -> GroupWord {
        x.inverse().mul(&y.inverse()).mul(x).mul(y)
    }

    /// `g^-1 self g`
    pub fn conjugate_by(&self, g: &GroupWord) -> GroupWord {
        g.inverse().mul(self).mul(g)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay {
            word: self,
            alphabet,
        }
    }
}

pub struct WordDisplay<'a> {
    word: &'a GroupWord,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.word.letters.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(self.alphabet.name(l.generator))?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// A commutator expression tree. `Power` never carries the exponent `-1`
/// when built by the parser; that case is `Inverse`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CommExpr {
    Leaf(Generator),
    Inverse(Box<CommExpr>),
    Power(Box<CommExpr>, i64),
    Product(Vec<CommExpr>),
    Commutator(Box<CommExpr>, Box<CommExpr>),
    /// `Conjugate(x, g)` is `x^g = g^-1 x g`.
    Conjugate(Box<CommExpr>, Box<CommExpr>),
}

impl CommExpr {
    pub fn leaf(g: Generator) -> Self {
        CommExpr::Leaf(g)
    }

    pub fn inv(e: CommExpr) -> Self {
        CommExpr::Inverse(Box::new(e))
    }

    pub fn pow(e: CommExpr, n: i64) -> Self {
        if n == -1 {
            CommExpr::inv(e)
        } else {
            CommExpr::Power(Box::new(e), n)
        }
    }

    /// Product of factors. Panics on an empty list.
    pub fn product(factors: Vec<CommExpr>) -> Self {
        assert!(!factors.is_empty(), "products are non-empty");
        CommExpr::Product(factors)
    }

    pub fn comm(x: CommExpr, y: CommExpr) -> Self {
        CommExpr::Commutator(Box::new(x), Box::new(y))
    }

    pub fn conj(x: CommExpr, g: CommExpr) -> Self {
        CommExpr::Conjugate(Box::new(x), Box::new(g))
    }

    /// Generators occurring anywhere in the tree, in first-visit order.
    pub fn generators(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        self.collect_generators(&mut out);
        out
    }

    fn collect_generators(&self, out: &mut Vec<Generator>) {
        match self {
            CommExpr::Leaf(g) => {
                if !out.contains(g) {
                    out.push(*g)
                }
            }
            CommExpr::Inverse(e) | CommExpr::Power(e, _) => e.collect_generators(out),
            CommExpr::Product(fs) => fs.iter().for_each(|f| f.collect_generators(out)),
            CommExpr::Commutator(x, y) | CommExpr::Conjugate(x, y) => {
                x.collect_generators(out);
                y.collect_generators(out);
            }
        }
    }
}

/// Evaluates an expression tree to its reduced word.
pub fn expr_to_word(e: &CommExpr) -> GroupWord {
    match e {
        CommExpr::Leaf(g) => GroupWord::generator(*g),
        CommExpr::Inverse(x) => expr_to_word(x).inverse(),
        CommExpr::Power(x, n) => expr_to_word(x).pow(*n),
        CommExpr::Product(fs) => fs
            .iter()
            .fold(GroupWord::identity(), |acc, f| acc.mul(&expr_to_word(f))),
        CommExpr::Commutator(x, y) => GroupWord::commutator(&expr_to_word(x), &expr_to_word(y)),
        CommExpr::Conjugate(x, g) => expr_to_word(x).conjugate_by(&expr_to_word(g)),
    }
}

pub fn free_reduce(w: &GroupWord) -> GroupWord {
    w.free_reduce()
}

/// A partial map from generators to words, extended to a homomorphism.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    images: BTreeMap<Generator, GroupWord>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn with(mut self, g: Generator, image: GroupWord) -> Self {
        self.images.insert(g, image);
        self
    }

    pub fn insert(&mut self, g: Generator, image: GroupWord) {
        self.images.insert(g, image);
    }

    pub fn get(&self, g: Generator) -> Option<&GroupWord> {
        self.images.get(&g)
    }

    /// Applies the substitution, fixing unmapped generators.
    pub fn apply_word(&self, w: &GroupWord) -> GroupWord {
        let mut letters = Vec::with_capacity(w.len());
        for l in w.letters() {
            match self.images.get(&l.generator) {
                Some(img) if l.inverse => {
                    letters.extend(img.letters().iter().rev().map(|x| x.inv()))
                }
                Some(img) => letters.extend_from_slice(img.letters()),
                None => letters.push(*l),
            }
        }
        GroupWord::from_letters(letters).free_reduce()
    }
}

/// Substitutes into an expression, leaving unmapped generators fixed.
pub fn substitute(e: &CommExpr, map: &Substitution) -> GroupWord {
    map.apply_word(&expr_to_word(e))
}

/// Substitutes into an expression, failing if any generator of `e` is unmapped.
pub fn substitute_total(
    e: &CommExpr,
    map: &Substitution,
    alphabet: &Alphabet,
) -> Result<GroupWord> {
    if let Some(g) = e.generators().into_iter().find(|g| map.get(*g).is_none()) {
        return Err(Error::UnmappedGenerator(alphabet.name(g).to_string()));
    }
    Ok(substitute(e, map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> (Alphabet, CommExpr, CommExpr, CommExpr) {
        let a = Alphabet::new(["x", "y", "z"]).unwrap();
        let [x, y, z] = [0, 1, 2].map(|i| CommExpr::leaf(Generator(i)));
        (a, x, y, z)
    }

    #[test]
    fn commutator_convention() {
        let (a, x, y, _) = xyz();
        let w = expr_to_word(&CommExpr::comm(x.clone(), y));
        assert_eq!(w.display(&a).to_string(), "x^-1*y^-1*x*y");
        assert!(w.is_reduced());
        assert!(expr_to_word(&CommExpr::comm(x.clone(), x)).is_empty());
    }

    #[test]
    fn cancellation() {
        let g = Generator(0);
        let w = GroupWord::from_letters(vec![Letter::new(g, false), Letter::new(g, true)]);
        assert!(!w.is_reduced());
        assert!(w.free_reduce().is_empty());
    }

    #[test]
    fn product_identities() {
        let (_, x, y, z) = xyz();
        let lhs = CommExpr::comm(x.clone(), CommExpr::product(vec![y.clone(), z.clone()]));
        let rhs = CommExpr::product(vec![
            CommExpr::comm(x.clone(), z.clone()),
            CommExpr::conj(CommExpr::comm(x.clone(), y.clone()), z.clone()),
        ]);
        assert_eq!(expr_to_word(&lhs), expr_to_word(&rhs));

        let lhs = CommExpr::comm(CommExpr::product(vec![x.clone(), z.clone()]), y.clone());
        let rhs = CommExpr::product(vec![
            CommExpr::conj(CommExpr::comm(x.clone(), y.clone()), z.clone()),
            CommExpr::comm(z, y),
        ]);
        assert_eq!(expr_to_word(&lhs), expr_to_word(&rhs));
    }

    #[test]
    fn hall_witt_reduces_to_identity() {
        let (_, x, y, z) = xyz();
        let c = |a: &CommExpr, b: &CommExpr| CommExpr::comm(a.clone(), b.clone());
        let hw = CommExpr::product(vec![
            CommExpr::comm(c(&x, &y), CommExpr::conj(z.clone(), x.clone())),
            CommExpr::comm(c(&z, &x), CommExpr::conj(y.clone(), z.clone())),
            CommExpr::comm(c(&y, &z), CommExpr::conj(x.clone(), y.clone())),
        ]);
        assert!(expr_to_word(&hw).is_empty());
    }

    #[test]
    fn substitution() {
        let (a, x, y, _) = xyz();
        let e = CommExpr::comm(x.clone(), y);
        let collapse = Substitution::new().with(Generator(1), GroupWord::generator(Generator(0)));
        assert!(substitute(&e, &collapse).is_empty());
        assert_eq!(substitute(&e, &Substitution::new()), expr_to_word(&e));
        assert_eq!(
            substitute_total(&e, &collapse, &a),
            Err(Error::UnmappedGenerator("x".into()))
        );
    }

    #[test]
    fn inverse_substitution_inverts_image() {
        let g = Generator(0);
        let h = Generator(1);
        let img = GroupWord::from_letters(vec![Letter::new(g, false), Letter::new(h, false)]);
        let s = Substitution::new().with(g, img.clone());
        let w = GroupWord::from_letters(vec![Letter::new(g, true)]);
        assert_eq!(s.apply_word(&w), img.inverse());
    }

    #[test]
    fn alphabet_rejects_duplicates() {
        assert_eq!(
            Alphabet::new(["a", "b", "a"]),
            Err(Error::DuplicateGenerator("a".into()))
        );
        assert!(Alphabet::new(["1a"]).is_err());
    }
}
