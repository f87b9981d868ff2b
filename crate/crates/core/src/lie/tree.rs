use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::magnus::VariableSet;
use crate::word::CommExpr;

/// A formal bracket of variables `x_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CommTree {
    Leaf(u32),
    Bracket(Box<CommTree>, Box<CommTree>),
}

impl CommTree {
    pub fn leaf(i: u32) -> Self {
        CommTree::Leaf(i)
    }

    pub fn bracket(a: CommTree, b: CommTree) -> Self {
        CommTree::Bracket(Box::new(a), Box::new(b))
    }

    /// `[i1,[i2,[...[i_{d-1},i_d]...]]]`. Panics on an empty slice.
    pub fn right_normed(indices: &[u32]) -> Self {
        let (last, init) = indices.split_last().expect("at least one index");
        init.iter().rev().fold(CommTree::Leaf(*last), |acc, &i| {
            CommTree::bracket(CommTree::Leaf(i), acc)
        })
    }

    /// Leaf indices, left to right.
    pub fn leaves(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.push_leaves(&mut out);
        out
    }

    fn push_leaves(&self, out: &mut Vec<u32>) {
        match self {
            CommTree::Leaf(i) => out.push(*i),
            CommTree::Bracket(a, b) => {
                a.push_leaves(out);
                b.push_leaves(out);
            }
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            CommTree::Leaf(_) => 1,
            CommTree::Bracket(a, b) => a.degree() + b.degree(),
        }
    }

    /// Fails with the first repeated leaf.
    pub fn check_multilinear(&self) -> Result<()> {
        let leaves = self.leaves();
        for (i, v) in leaves.iter().enumerate() {
            if leaves[..i].contains(v) {
                return Err(Error::RepeatedLeaf(*v));
            }
        }
        Ok(())
    }

    /// Converts a commutator expression built only from generators and
    /// brackets.
    pub fn from_expr(e: &CommExpr, vars: &VariableSet) -> Result<Self> {
        match e {
            CommExpr::Leaf(g) => vars
                .variable(*g)
                .map(CommTree::Leaf)
                .ok_or_else(|| Error::UncoveredGenerator(format!("#{}", g.index()))),
            CommExpr::Commutator(a, b) => Ok(CommTree::bracket(
                CommTree::from_expr(a, vars)?,
                CommTree::from_expr(b, vars)?,
            )),
            CommExpr::Product(fs) if fs.len() == 1 => CommTree::from_expr(&fs[0], vars),
            other => Err(Error::NotABracket(format!("{other:?}"))),
        }
    }

    /// Recursive expansion `[a,b] -> ab - ba` in the tensor algebra.
    pub fn expand(&self) -> Result<TensorVec> {
        self.check_multilinear()?;
        Ok(self.expand_unchecked())
    }

    fn expand_unchecked(&self) -> TensorVec {
        match self {
            CommTree::Leaf(i) => TensorVec::basis(vec![*i]),
            CommTree::Bracket(a, b) => {
                let (a, b) = (a.expand_unchecked(), b.expand_unchecked());
                a.concat_product(&b).sub(&b.concat_product(&a))
            }
        }
    }
}

impl fmt::Display for CommTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommTree::Leaf(i) => write!(f, "m{i}"),
            CommTree::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// Free function form of [`CommTree::expand`].
pub fn expand_tree(t: &CommTree) -> Result<TensorVec> {
    t.expand()
}

/// A rational combination of words in the variables, i.e. an element of the
/// free associative algebra over `Q`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TensorVec {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl TensorVec {
    pub fn zero() -> Self {
        TensorVec::default()
    }

    pub fn basis(word: Vec<u32>) -> Self {
        let mut t = TensorVec::zero();
        t.add_term(word, BigRational::one());
        t
    }

    pub fn add_term(&mut self, word: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
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

    pub fn coefficient(&self, word: &[u32]) -> BigRational {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
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

    pub fn add(&self, other: &TensorVec) -> TensorVec {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TensorVec) -> TensorVec {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> TensorVec {
        let mut out = TensorVec::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * k);
        }
        out
    }

    /// Linear combination `sum c_i v_i`.
    pub fn combination<'a>(
        items: impl IntoIterator<Item = (BigRational, &'a TensorVec)>,
    ) -> TensorVec {
        items
            .into_iter()
            .fold(TensorVec::zero(), |acc, (c, v)| acc.add(&v.scale(&c)))
    }

    /// Concatenation product of words.
    pub fn concat_product(&self, other: &TensorVec) -> TensorVec {
        let mut out = TensorVec::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, a * b);
            }
        }
        out
    }
}

impl fmt::Display for TensorVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            for v in w {
                write!(f, "x{v}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// All permutations of `items` in lexicographic order of positions.
pub fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &head) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(i: u32) -> CommTree {
        CommTree::leaf(i)
    }

    fn b(x: CommTree, y: CommTree) -> CommTree {
        CommTree::bracket(x, y)
    }

    #[test]
    fn single_bracket() {
        let t = b(l(2), l(3)).expand().unwrap();
        let mut expected = TensorVec::basis(vec![2, 3]);
        expected.add_term(vec![3, 2], int(-1));
        assert_eq!(t, expected);
    }

    #[test]
    fn jacobi_on_leaves() {
        let (x, y, z) = (l(1), l(2), l(3));
        let sum = b(b(x.clone(), y.clone()), z.clone())
            .expand()
            .unwrap()
            .add(&b(b(z.clone(), x.clone()), y.clone()).expand().unwrap())
            .add(&b(b(y, z), x).expand().unwrap());
        assert!(sum.is_zero());
    }

    #[test]
    fn right_normed_degree_five() {
        let t = CommTree::right_normed(&[2, 3, 4, 5, 6]);
        assert_eq!(t.to_string(), "[m2,[m3,[m4,[m5,m6]]]]");
        let e = t.expand().unwrap();
        assert_eq!(e.len(), 16);
        assert!(e.terms().all(|(_, c)| c.abs().is_one()));
        assert_eq!(e.coefficient(&[2, 3, 4, 5, 6]), int(1));
    }

    #[test]
    fn repeated_leaf_rejected() {
        assert_eq!(b(l(2), b(l(3), l(2))).expand(), Err(Error::RepeatedLeaf(2)));
    }

    #[test]
    fn permutation_order() {
        assert_eq!(
            permutations(&[1, 2, 3]),
            vec![
                vec![1, 2, 3],
                vec![1, 3, 2],
                vec![2, 1, 3],
                vec![2, 3, 1],
                vec![3, 1, 2],
                vec![3, 2, 1]
            ]
        );
        assert_eq!(permutations(&[2, 3, 4, 5, 6]).len(), 120);
    }
}
