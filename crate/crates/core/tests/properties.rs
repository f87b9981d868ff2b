use milnor_core::lie::CommTree;
use milnor_core::magnus::{expand, MagnusPoly};
use milnor_core::obstruction::{integer_search_with, paper_system, SearchOptions, SysVariable};
use milnor_core::word::{Letter, Substitution};
use milnor_core::{parse_expr, Alphabet, CommExpr, Generator, GroupWord, VariableSet};
use proptest::prelude::*;

fn vars(n: u32) -> VariableSet {
    VariableSet::new((0..n).map(|i| (Generator(i), i + 1))).unwrap()
}

fn word(n: u32, max_len: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((0..n, any::<bool>()), 0..=max_len).prop_map(|ls| {
        GroupWord::from_letters(
            ls.into_iter()
                .map(|(g, inv)| Letter::new(Generator(g), inv))
                .collect(),
        )
    })
}

fn expr(n: u32) -> impl Strategy<Value = CommExpr> {
    let leaf = (0..n).prop_map(|g| CommExpr::leaf(Generator(g)));
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(CommExpr::inv),
            (inner.clone(), prop_oneof![-4i64..=-2, 0i64..=4])
                .prop_map(|(e, k)| CommExpr::pow(e, k)),
            prop::collection::vec(inner.clone(), 2..4).prop_map(CommExpr::product),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| CommExpr::comm(x, y)),
            (inner.clone(), inner).prop_map(|(x, g)| CommExpr::conj(x, g)),
        ]
    })
}

/// A bracket tree on a shuffled subset of `1..=6`.
fn tree() -> impl Strategy<Value = CommTree> {
    (
        Just((1u32..=6).collect::<Vec<_>>()).prop_shuffle(),
        1usize..=6,
        any::<u64>(),
    )
        .prop_map(|(leaves, k, shape)| build(&leaves[..k], shape))
}

fn build(leaves: &[u32], shape: u64) -> CommTree {
    if leaves.len() == 1 {
        return CommTree::leaf(leaves[0]);
    }
    let split = 1 + (shape as usize) % (leaves.len() - 1);
    CommTree::bracket(
        build(&leaves[..split], shape / 7),
        build(&leaves[split..], shape / 11),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn magnus_is_multiplicative(u in word(4, 12), v in word(4, 12)) {
        let vs = vars(4);
        let lhs = expand(&u.mul(&v), &vs).unwrap();
        let rhs = expand(&u, &vs).unwrap().mul(&expand(&v, &vs).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_law(w in word(5, 16)) {
        let vs = vars(5);
        let p = expand(&w, &vs).unwrap();
        prop_assert!(p.mul(&expand(&w.inverse(), &vs).unwrap()).is_one());
        prop_assert_eq!(p.invert().unwrap(), expand(&w.inverse(), &vs).unwrap());
    }

    #[test]
    fn squarefree_closure(w in word(5, 20)) {
        let p = expand(&w, &vars(5)).unwrap();
        prop_assert_eq!(p.constant_term(), 1.into());
        for (m, _) in p.terms() {
            let mut idx = m.indices().to_vec();
            idx.sort_unstable();
            idx.dedup();
            prop_assert_eq!(idx.len(), m.degree());
        }
    }

    #[test]
    fn free_reduction_does_not_change_expansion(w in word(3, 20)) {
        let vs = vars(3);
        prop_assert_eq!(expand(&w, &vs).unwrap(), expand(&w.free_reduce(), &vs).unwrap());
        prop_assert!(w.free_reduce().is_reduced());
    }

    #[test]
    fn top_degree_conjugation_invariance(
        x in word(3, 6), y in word(3, 6), z in word(3, 6), g in word(3, 8)
    ) {
        // A triple commutator over three variables only has degree-3 terms.
        let vs = vars(3);
        let c = GroupWord::commutator(&GroupWord::commutator(&x, &y), &z);
        prop_assert_eq!(expand(&c.conjugate_by(&g), &vs).unwrap(), expand(&c, &vs).unwrap());
    }

    #[test]
    fn antisymmetry(t in tree(), cut in any::<u64>()) {
        let leaves = t.leaves();
        prop_assume!(leaves.len() >= 2);
        let i = 1 + (cut as usize) % (leaves.len() - 1);
        let (a, b) = (build(&leaves[..i], cut), build(&leaves[i..], cut / 3));
        let ab = CommTree::bracket(a.clone(), b.clone()).expand().unwrap();
        let ba = CommTree::bracket(b, a).expand().unwrap();
        prop_assert!(ab.add(&ba).is_zero());
    }

    #[test]
    fn jacobi(t in tree(), cut in any::<(u64, u64)>()) {
        let leaves = t.leaves();
        prop_assume!(leaves.len() >= 3);
        let i = 1 + (cut.0 as usize) % (leaves.len() - 2);
        let j = i + 1 + (cut.1 as usize) % (leaves.len() - i - 1);
        let (x, y, z) = (
            build(&leaves[..i], cut.0),
            build(&leaves[i..j], cut.1),
            build(&leaves[j..], cut.0 ^ cut.1),
        );
        let b = CommTree::bracket;
        let sum = b(b(x.clone(), y.clone()), z.clone()).expand().unwrap()
            .add(&b(b(y.clone(), z.clone()), x.clone()).expand().unwrap())
            .add(&b(b(z, x), y).expand().unwrap());
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn parser_round_trip(e in expr(4)) {
        let a = Alphabet::new(["m1", "m2", "a", "b"]).unwrap();
        let text = e.display(&a).to_string();
        let back = parse_expr(&text, &a).unwrap();
        prop_assert_eq!(&back, &e, "{}", text);
    }

    #[test]
    fn substitution_is_a_homomorphism(u in word(3, 8), v in word(3, 8), img in word(2, 5)) {
        let s = Substitution::new().with(Generator(0), img);
        prop_assert_eq!(s.apply_word(&u.mul(&v)), s.apply_word(&u).mul(&s.apply_word(&v)));
    }

    #[test]
    fn magnus_of_commutator_starts_in_degree_two(u in word(3, 6), v in word(3, 6)) {
        let p = expand(&GroupWord::commutator(&u, &v), &vars(3)).unwrap();
        prop_assert!(p.homogeneous(1).is_zero());
        prop_assert_eq!(p.homogeneous(0), MagnusPoly::one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn search_is_deterministic(
        mask in 1u16..(1 << 14),
        order in Just(SysVariable::ALL.to_vec()).prop_shuffle(),
        bound in 1i64..=2,
    ) {
        let labels: Vec<u8> = (0..14).filter(|i| mask & (1 << i) != 0).map(|i| i as u8 + 2).collect();
        let sys = paper_system().select(&labels).unwrap();
        let reference = integer_search_with(&sys, &SearchOptions::new(bound)).unwrap();
        let alt = integer_search_with(&sys, &SearchOptions { bound, order, parallel: false }).unwrap();
        prop_assert_eq!(reference.solutions, alt.solutions);
    }
}
