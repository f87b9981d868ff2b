//! Degree-five multilinear computations over the indices `{2,...,6}`.
//!
//! `V` is spanned by the 120 right-normed commutators in these indices and
//! `J` is the kernel of their tensor expansion. The subspace `U` is spanned by
//! the fifteen commutators of shape `[a,[[b,c],[d,e]]]` whose product is the
//! element `w`; the identities below express each of them in the basis of
//! right-normed commutators ending in `m6`.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lie::matrix::RationalMatrix;
use crate::lie::tree::{int, permutations, CommTree, TensorVec};
use crate::magnus::VariableSet;
use crate::parse::parse_expr;
use crate::word::Alphabet;

pub const INDICES: [u32; 5] = [2, 3, 4, 5, 6];

/// The fifteen generators of `U`, in the order of the product `w`.
pub const U_GENERATORS: [&str; 15] = [
    "[m2,[[m3,m4],[m5,m6]]]",
    "[m2,[[m5,m3],[m4,m6]]]",
    "[m2,[[m4,m5],[m3,m6]]]",
    "[m3,[[m4,m2],[m5,m6]]]",
    "[m3,[[m2,m5],[m4,m6]]]",
    "[m3,[[m5,m4],[m2,m6]]]",
    "[m4,[[m2,m3],[m5,m6]]]",
    "[m4,[[m5,m2],[m3,m6]]]",
    "[m4,[[m3,m5],[m2,m6]]]",
    "[m5,[[m3,m2],[m4,m6]]]",
    "[m5,[[m2,m4],[m3,m6]]]",
    "[m5,[[m3,m4],[m2,m6]]]",
    "[m6,[[m2,m3],[m4,m5]]]",
    "[m6,[[m4,m2],[m3,m5]]]",
    "[m6,[[m2,m5],[m3,m4]]]",
];

/// Each generator of `U` rewritten in the right-normed basis, one identity per
/// generator, same order as [`U_GENERATORS`].
pub const APPENDIX_IDENTITIES: [&str; 15] = [
    "[m2,[[m3,m4],[m5,m6]]] = [m2,[m3,[m4,[m5,m6]]]] - [m2,[m4,[m3,[m5,m6]]]]",
    "[m2,[[m5,m3],[m4,m6]]] = [m2,[m5,[m3,[m4,m6]]]] - [m2,[m3,[m5,[m4,m6]]]]",
    "[m2,[[m4,m5],[m3,m6]]] = [m2,[m4,[m5,[m3,m6]]]] - [m2,[m5,[m4,[m3,m6]]]]",
    "[m3,[[m4,m2],[m5,m6]]] = [m3,[m4,[m2,[m5,m6]]]] - [m3,[m2,[m4,[m5,m6]]]]",
    "[m3,[[m2,m5],[m4,m6]]] = [m3,[m2,[m5,[m4,m6]]]] - [m3,[m5,[m2,[m4,m6]]]]",
    "[m3,[[m5,m4],[m2,m6]]] = [m3,[m5,[m4,[m2,m6]]]] - [m3,[m4,[m5,[m2,m6]]]]",
    "[m4,[[m2,m3],[m5,m6]]] = [m4,[m2,[m3,[m5,m6]]]] - [m4,[m3,[m2,[m5,m6]]]]",
    "[m4,[[m5,m2],[m3,m6]]] = [m4,[m5,[m2,[m3,m6]]]] - [m4,[m2,[m5,[m3,m6]]]]",
    "[m4,[[m3,m5],[m2,m6]]] = [m4,[m3,[m5,[m2,m6]]]] - [m4,[m5,[m3,[m2,m6]]]]",
    "[m5,[[m3,m2],[m4,m6]]] = [m5,[m3,[m2,[m4,m6]]]] - [m5,[m2,[m3,[m4,m6]]]]",
    "[m5,[[m2,m4],[m3,m6]]] = [m5,[m2,[m4,[m3,m6]]]] - [m5,[m4,[m2,[m3,m6]]]]",
    "[m5,[[m3,m4],[m2,m6]]] = [m5,[m4,[m3,[m2,m6]]]] - [m5,[m3,[m4,[m2,m6]]]]",
    "[m6,[[m2,m3],[m4,m5]]] = [m4,[m5,[m3,[m2,m6]]]] - [m5,[m4,[m3,[m2,m6]]]] \
     - [m4,[m5,[m2,[m3,m6]]]] + [m5,[m4,[m2,[m3,m6]]]] \
     + [m2,[m3,[m5,[m4,m6]]]] - [m3,[m2,[m5,[m4,m6]]]] \
     - [m2,[m3,[m4,[m5,m6]]]] + [m3,[m2,[m4,[m5,m6]]]]",
    "[m6,[[m4,m2],[m3,m5]]] = [m3,[m5,[m2,[m4,m6]]]] - [m5,[m3,[m2,[m4,m6]]]] \
     - [m3,[m5,[m4,[m2,m6]]]] + [m5,[m3,[m4,[m2,m6]]]] \
     + [m4,[m2,[m5,[m3,m6]]]] - [m2,[m4,[m5,[m3,m6]]]] \
     - [m4,[m2,[m3,[m5,m6]]]] + [m2,[m4,[m3,[m5,m6]]]]",
    "[m6,[[m2,m5],[m3,m4]]] = [m3,[m4,[m5,[m2,m6]]]] - [m4,[m3,[m5,[m2,m6]]]] \
     - [m3,[m4,[m2,[m5,m6]]]] + [m4,[m3,[m2,[m5,m6]]]] \
     + [m2,[m5,[m4,[m3,m6]]]] - [m5,[m2,[m4,[m3,m6]]]] \
     - [m2,[m5,[m3,[m4,m6]]]] + [m5,[m2,[m3,[m4,m6]]]]",
];

/// Alphabet `m2..m6` with variables `x2..x6`.
pub fn meridians() -> (Alphabet, VariableSet) {
    let alphabet = Alphabet::new(INDICES.iter().map(|i| format!("m{i}"))).unwrap();
    let gens: Vec<_> = alphabet.generators().collect();
    let vars = VariableSet::by_name(&alphabet, &gens).unwrap();
    (alphabet, vars)
}

/// Parses a bracket of generators `m2..m6` into a tree.
pub fn parse_tree(text: &str) -> Result<CommTree> {
    let (alphabet, vars) = meridians();
    CommTree::from_expr(&parse_expr(text, &alphabet)?, &vars)
}

/// The `(d-1)!` right-normed commutators ending in the last index, ordered
/// lexicographically by their leading indices.
pub fn right_normed_basis(indices: &[u32]) -> Vec<CommTree> {
    let (last, init) = indices.split_last().expect("non-empty index set");
    permutations(init)
        .into_iter()
        .map(|mut p| {
            p.push(*last);
            CommTree::right_normed(&p)
        })
        .collect()
}

/// The basis of `V/J` made of commutators whose right-most index is 6.
pub fn basis_commutators() -> Vec<CommTree> {
    right_normed_basis(&INDICES)
}

/// Expansion matrix of all `d!` right-normed commutators against all `d!`
/// permutation monomials, both ordered lexicographically.
pub fn build_expansion_matrix(indices: &[u32]) -> RationalMatrix {
    let perms = permutations(indices);
    let trees: Vec<_> = perms.iter().map(|p| CommTree::right_normed(p)).collect();
    expansion_matrix(&trees, &perms)
}

/// Stacks the tensor expansions of `trees` against the given monomial columns.
pub fn expansion_matrix(trees: &[CommTree], columns: &[Vec<u32>]) -> RationalMatrix {
    let col: HashMap<&[u32], usize> = columns
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_slice(), i))
        .collect();
    let rows: Vec<Vec<BigRational>> = trees
        .par_iter()
        .map(|t| {
            let mut row = vec![BigRational::zero(); columns.len()];
            let e = t.expand().expect("multilinear tree");
            for (w, c) in e.terms() {
                row[col[w.as_slice()]] = c.clone();
            }
            row
        })
        .collect();
    RationalMatrix::from_rows(rows, columns.len()).with_labels(
        trees.iter().map(ToString::to_string).collect(),
        columns
            .iter()
            .map(|w| w.iter().map(|v| format!("x{v}")).collect())
            .collect(),
    )
}

pub fn u_generators() -> Vec<CommTree> {
    U_GENERATORS
        .iter()
        .map(|s| parse_tree(s).expect("generator table parses"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    /// Rank of the 15 x 120 expansion matrix of the generators of `U`.
    pub rank: usize,
    pub kernel_dim: usize,
    /// Left-kernel basis, each vector scaled to have first nonzero entry 1.
    pub kernel: Vec<Vec<BigRational>>,
    /// Whether the kernel is spanned by the all-ones vector.
    pub kernel_is_all_ones: bool,
}

impl LemmaReport {
    pub fn passes(&self) -> bool {
        self.rank == 14 && self.kernel_dim == 1 && self.kernel_is_all_ones
    }
}

/// Rank and row dependencies of the generators of `U` inside the tensor
/// algebra. A single all-ones dependency means exactly that the product `w`
/// lies in `J` and nothing smaller does.
pub fn verify_lemma_w() -> LemmaReport {
    dependency_report(&expansion_matrix(&u_generators(), &permutations(&INDICES)))
}

/// The same report for the right-hand sides of [`APPENDIX_IDENTITIES`], i.e.
/// for the generators as the identities rewrite them.
pub fn appendix_rhs_report() -> LemmaReport {
    let columns = permutations(&INDICES);
    let rows: Vec<Vec<BigRational>> = appendix_identities()
        .iter()
        .map(|id| {
            let e = id.rhs.iter().fold(TensorVec::zero(), |acc, (s, t)| {
                acc.add(&t.expand().expect("multilinear tree").scale(&int(*s)))
            });
            columns.iter().map(|w| e.coefficient(w)).collect()
        })
        .collect();
    dependency_report(&RationalMatrix::from_rows(rows, columns.len()))
}

fn dependency_report(m: &RationalMatrix) -> LemmaReport {
    let (rank, kernel) = m.rank_kernel();
    let kernel: Vec<_> = kernel.into_iter().map(normalize).collect();
    let kernel_is_all_ones =
        kernel.len() == 1 && kernel[0].iter().all(|c| c == &BigRational::one());
    LemmaReport {
        rank,
        kernel_dim: kernel.len(),
        kernel,
        kernel_is_all_ones,
    }
}

fn normalize(v: Vec<BigRational>) -> Vec<BigRational> {
    match v.iter().find(|c| !c.is_zero()).cloned() {
        Some(lead) => v.into_iter().map(|c| c / &lead).collect(),
        None => v,
    }
}

/// `lhs = sum sign_i * rhs_i` between bracket trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub lhs: CommTree,
    pub rhs: Vec<(i64, CommTree)>,
}

impl Identity {
    pub fn parse(text: &str) -> Result<Self> {
        let (lhs, rhs) = text
            .split_once('=')
            .ok_or_else(|| Error::Malformed(format!("identity without `=`: {text}")))?;
        Ok(Identity {
            lhs: parse_tree(lhs.trim())?,
            rhs: parse_signed_terms(rhs)?,
        })
    }

    pub fn holds(&self) -> Result<bool> {
        let rhs = self.rhs.iter().try_fold(TensorVec::zero(), |acc, (s, t)| {
            Ok::<_, Error>(acc.add(&t.expand()?.scale(&int(*s))))
        })?;
        Ok(self.lhs.expand()? == rhs)
    }

    pub fn with_sign_flipped(&self, term: usize) -> Identity {
        let mut out = self.clone();
        out.rhs[term].0 = -out.rhs[term].0;
        out
    }
}

/// Splits `a - b + c` at top-level signs and parses each bracket.
fn parse_signed_terms(text: &str) -> Result<Vec<(i64, CommTree)>> {
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut sign = 1;
    let mut start = 0;
    let bytes = text.as_bytes();
    let mut push = |sign: i64, piece: &str| -> Result<()> {
        let piece = piece.trim();
        if !piece.is_empty() {
            terms.push((sign, parse_tree(piece)?));
        }
        Ok(())
    };
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'[' | b'(' => depth += 1,
            b']' | b')' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                push(sign, &text[start..i])?;
                sign = if c == b'-' { -1 } else { 1 };
                start = i + 1;
            }
            _ => {}
        }
    }
    push(sign, &text[start..])?;
    Ok(terms)
}

pub fn appendix_identities() -> Vec<Identity> {
    APPENDIX_IDENTITIES
        .iter()
        .map(|s| Identity::parse(s).expect("appendix table parses"))
        .collect()
}

/// Checks identity `k` (1-based) of [`APPENDIX_IDENTITIES`].
pub fn verify_appendix_identity(k: usize) -> Result<bool> {
    let text = APPENDIX_IDENTITIES
        .get(k.wrapping_sub(1))
        .ok_or_else(|| Error::Malformed(format!("identity index {k} not in 1..=15")))?;
    Identity::parse(text)?.holds()
}

/// Coefficients of `t` in [`basis_commutators`], found by exact linear
/// solving against the basis expansions.
pub fn to_basis(t: &CommTree) -> Result<Vec<BigRational>> {
    let mut leaves = t.leaves();
    leaves.sort_unstable();
    if leaves != INDICES {
        return Err(Error::Malformed(format!(
            "{t} is not multilinear in m2..m6"
        )));
    }
    let target = t.expand()?;
    let columns = permutations(&INDICES);
    let basis = expansion_matrix(&basis_commutators(), &columns);
    let rhs: Vec<_> = columns.iter().map(|w| target.coefficient(w)).collect();
    basis.transpose().solve(&rhs)
}

/// Renders coefficients over [`basis_commutators`] as `c*[..] + ...`.
pub fn render_combination(coeffs: &[BigRational]) -> String {
    let basis = basis_commutators();
    let mut out = String::new();
    for (c, t) in coeffs.iter().zip(&basis) {
        if c.is_zero() {
            continue;
        }
        let neg = c < &BigRational::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&format!("{abs}*"));
        }
        out.push_str(&t.to_string());
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Explicit antisymmetry and innermost-Jacobi relations among the
/// right-normed commutators, as coefficient vectors over the rows of
/// [`build_expansion_matrix`].
pub fn explicit_relators(indices: &[u32]) -> Vec<Vec<BigRational>> {
    let perms = permutations(indices);
    let row: HashMap<&[u32], usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let d = indices.len();
    let mut out = Vec::new();
    for p in &perms {
        let mut swapped = p.clone();
        swapped.swap(d - 2, d - 1);
        let mut v = vec![BigRational::zero(); perms.len()];
        v[row[p.as_slice()]] += int(1);
        v[row[swapped.as_slice()]] += int(1);
        out.push(v);
        if d >= 3 {
            // [x,[y,z]] + [y,[z,x]] + [z,[x,y]] on the last three positions
            let (x, y, z) = (p[d - 3], p[d - 2], p[d - 1]);
            let mut v = vec![BigRational::zero(); perms.len()];
            for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
                let mut q = p[..d - 3].to_vec();
                q.extend([a, b, c]);
                v[row[q.as_slice()]] += int(1);
            }
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_shapes_and_small_ranks() {
        assert_eq!(build_expansion_matrix(&[2, 3]).rank(), 1);
        let m3 = build_expansion_matrix(&[2, 3, 4]);
        assert_eq!((m3.nrows(), m3.ncols(), m3.rank()), (6, 6, 2));
        let m5 = build_expansion_matrix(&INDICES);
        assert_eq!((m5.nrows(), m5.ncols()), (120, 120));
    }

    #[test]
    fn first_identity_and_mutations() {
        for k in 1..=11 {
            assert!(verify_appendix_identity(k).unwrap(), "identity {k}");
        }
        for k in 12..=15 {
            assert!(!verify_appendix_identity(k).unwrap(), "identity {k}");
        }
        // (12) holds once the inner bracket is [m4,m3].
        let mut twelve = Identity::parse(APPENDIX_IDENTITIES[11]).unwrap();
        twelve.lhs = parse_tree("[m5,[[m4,m3],[m2,m6]]]").unwrap();
        assert!(twelve.holds().unwrap());
        // (13) holds once the four terms led by m4, m5 change sign.
        let thirteen = Identity::parse(APPENDIX_IDENTITIES[12]).unwrap();
        let fixed = (0..4).fold(thirteen, |id, i| id.with_sign_flipped(i));
        assert!(fixed.holds().unwrap());
        let id = Identity::parse(APPENDIX_IDENTITIES[0]).unwrap();
        assert!(!id.with_sign_flipped(1).holds().unwrap());
        assert!(verify_appendix_identity(16).is_err());
        assert!(verify_appendix_identity(0).is_err());
    }

    #[test]
    fn basis_element_coordinates() {
        let t = CommTree::right_normed(&[2, 3, 4, 5, 6]);
        let c = to_basis(&t).unwrap();
        assert_eq!(c[0], int(1));
        assert!(c[1..].iter().all(Zero::is_zero));
        assert_eq!(render_combination(&c), "[m2,[m3,[m4,[m5,m6]]]]");
    }

    #[test]
    fn eq9_shape_coordinates() {
        let t = parse_tree("[m2,[[m3,m4],[m5,m6]]]").unwrap();
        assert_eq!(
            render_combination(&to_basis(&t).unwrap()),
            "[m2,[m3,[m4,[m5,m6]]]] - [m2,[m4,[m3,[m5,m6]]]]"
        );
    }

    #[test]
    fn to_basis_rejects_wrong_leaves() {
        assert!(to_basis(&CommTree::right_normed(&[2, 3, 4, 5])).is_err());
    }

    #[test]
    fn signed_term_splitting() {
        let terms = parse_signed_terms(" - [m2,m3] + [m4,m5]-[m5,m6]").unwrap();
        assert_eq!(
            terms.iter().map(|t| t.0).collect::<Vec<_>>(),
            vec![-1, 1, -1]
        );
    }
}
