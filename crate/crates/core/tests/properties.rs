use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eostrata_core::dieudonne::{canonical_filtration, classify, extend_scalars, standard_module_for, DieudonneModule};
use eostrata_core::field::GaloisField;
use eostrata_core::hasse::{power_congruence_bound, total_weight_check};
use eostrata_core::linalg::Matrix;
use eostrata_core::parabolic::{admissible_pairs, is_admissible, max_admissible_j, sigma_of, weyl_from_sigma};
use eostrata_core::schubert::{
    in_open_cell, intersection_matrix, random_flag, relpos, schubert_dims, SymplecticFlag, SymplecticSpace,
};
use eostrata_core::weyl::{bruhat_leq, w_i_reps};
use eostrata_core::{SignedPermutation, SubsetJ};

fn signed_perm(max_g: usize) -> impl Strategy<Value = SignedPermutation> {
    (1..=max_g).prop_flat_map(|g| {
        (
            Just((1..=g).collect::<Vec<usize>>()).prop_shuffle(),
            prop::collection::vec(any::<bool>(), g),
        )
            .prop_map(move |(perm, flips)| {
                let n = 2 * g;
                let mut images = vec![0; n];
                for i in 0..g {
                    let img = if flips[i] { n + 1 - perm[i] } else { perm[i] };
                    images[i] = img;
                    images[n - 1 - i] = n + 1 - img;
                }
                SignedPermutation::new(&images).unwrap()
            })
    })
}

fn same_rank_pair(max_g: usize) -> impl Strategy<Value = (SignedPermutation, SignedPermutation)> {
    (signed_perm(max_g), any::<u64>()).prop_map(|(w, seed)| {
        let g = w.rank();
        let n = 2 * g;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (1..=g).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let mut images = vec![0; n];
        for i in 0..g {
            let img = if rand::Rng::random_bool(&mut rng, 0.5) { n + 1 - perm[i] } else { perm[i] };
            images[i] = img;
            images[n - 1 - i] = n + 1 - img;
        }
        (SignedPermutation::new(&images).unwrap(), w)
    })
}

fn admissible(max_g: usize) -> impl Strategy<Value = (SignedPermutation, SubsetJ)> {
    (1..=max_g, any::<prop::sample::Index>()).prop_map(|(g, idx)| {
        let pairs = admissible_pairs(g);
        let pair = &pairs[idx.index(pairs.len())];
        (pair.w, pair.datum.j)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn length_is_inverse_invariant(w in signed_perm(7)) {
        prop_assert_eq!(w.length(), w.inverse().length());
        prop_assert!(w.length() <= w.rank() * w.rank());
    }

    #[test]
    fn simple_reflections_change_length_by_one(w in signed_perm(7)) {
        let g = w.rank();
        for i in 1..=g {
            let s = SignedPermutation::simple_reflection(g, i).unwrap();
            let lw = w.length() as isize;
            let ls = w.compose(&s).unwrap().length() as isize;
            prop_assert_eq!((ls - lw).abs(), 1);
            prop_assert_eq!(w.has_right_descent(i), ls < lw);
        }
    }

    #[test]
    fn reduced_word_multiplies_back((w, _) in same_rank_pair(6)) {
        let g = w.rank();
        let word = w.reduced_word();
        prop_assert_eq!(word.len(), w.length());
        let mut acc = SignedPermutation::identity(g);
        for i in word {
            acc = acc.compose(&SignedPermutation::simple_reflection(g, i).unwrap()).unwrap();
        }
        prop_assert_eq!(acc, w);
    }

    #[test]
    fn composition_is_associative((u, v) in same_rank_pair(6), seed in any::<u64>()) {
        let w = {
            let g = u.rank();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let reps = eostrata_core::weyl::w_i_reps(g);
            reps[rand::Rng::random_range(&mut rng, 0..reps.len())]
        };
        let left = u.compose(&v).unwrap().compose(&w).unwrap();
        let right = u.compose(&v.compose(&w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn bruhat_is_a_partial_order((v, w) in same_rank_pair(5)) {
        let g = w.rank();
        prop_assert!(bruhat_leq(&w, &w).unwrap());
        prop_assert!(bruhat_leq(&SignedPermutation::identity(g), &w).unwrap());
        let top = SignedPermutation::new(&(1..=2 * g).rev().collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(top.length(), g * g);
        prop_assert!(bruhat_leq(&w, &top).unwrap());
        let vw = bruhat_leq(&v, &w).unwrap();
        let wv = bruhat_leq(&w, &v).unwrap();
        if vw && wv {
            prop_assert_eq!(v, w);
        }
        if vw {
            prop_assert!(v.length() <= w.length());
        }
    }

    #[test]
    fn json_round_trip(w in signed_perm(8)) {
        let text = serde_json::to_string(&w).unwrap();
        prop_assert_eq!(text.clone(), format!("{}", w));
        let back: SignedPermutation = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn sigma_round_trip((w, j) in admissible(7)) {
        prop_assert!(is_admissible(&w, &j));
        let pair = sigma_of(&w, &j).unwrap();
        pair.check_invariants().unwrap();
        prop_assert_eq!(weyl_from_sigma(w.rank(), &j, &pair.sigma).unwrap(), w);
        let c = pair.c();
        prop_assert!(pair.sigma[..c].windows(2).all(|s| s[0] < s[1]));
    }

    #[test]
    fn weight_identity_holds((w, j) in admissible(7), p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
        let pair = sigma_of(&w, &j).unwrap();
        match total_weight_check(&pair, p) {
            Ok((n, total)) => {
                let expected = (p as i128).pow(n) - 1;
                prop_assert!(total.coeffs.iter().all(|&t| t == expected));
            }
            Err(eostrata_core::Error::Overflow(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn power_bound_is_monotone(a in 1u64..20, n in 0u32..8, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let e = power_congruence_bound(a, n, p);
        prop_assert!(e >= a.min(n as u64 + a));
        prop_assert!(e <= power_congruence_bound(a + 1, n, p));
        prop_assert!(e <= n as u64 + a);
    }

    #[test]
    fn field_axioms(m in 1u32..4, seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let f = GaloisField::new(p, m, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = f.order();
        let mut pick = || rand::Rng::random_range(&mut rng, 0..q);
        let (a, b, c) = (pick(), pick(), pick());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.frobenius_inv(f.frobenius(a)), a);
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }
}

fn random_invertible(f: &GaloisField, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|_| (0..n).map(|_| rand::Rng::random_range(rng, 0..f.order())).collect())
            .collect();
        let m = Matrix::from_rows(n, &rows);
        if m.rank(f) == n {
            return m;
        }
    }
}

/// `F' = A⁻¹ F A^(p)`, `V' = (A^(p))⁻¹ V A`, `P' = Aᵀ P A`.
fn base_change(d: &DieudonneModule, a: &Matrix) -> DieudonneModule {
    let f = d.field();
    let ainv = a.inverse(f).unwrap();
    let ap = a.frobenius(f);
    let apinv = ap.inverse(f).unwrap();
    DieudonneModule::new(
        d.field_arc().clone(),
        ainv.mul(f, d.f_matrix()).mul(f, &ap),
        apinv.mul(f, d.v_matrix()).mul(f, a),
        d.pairing().map(|p| a.transpose().mul(f, p).mul(f, a)),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classification_is_invariant_under_base_change(
        g in 1usize..=3,
        idx in any::<prop::sample::Index>(),
        seed in any::<u64>(),
        p in prop::sample::select(vec![2u64, 3]),
        l in 1u32..=2,
    ) {
        let reps = w_i_reps(g);
        let w = reps[idx.index(reps.len())];
        let d = extend_scalars(&standard_module_for(&w, p).unwrap(), l, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_invertible(d.field(), 2 * g, &mut rng);
        let moved = base_change(&d, &a);
        eostrata_core::dieudonne::check_bt1(&moved).unwrap();
        let chain = canonical_filtration(&moved).unwrap();
        prop_assert!(chain.is_self_dual(moved.field(), moved.pairing().unwrap()));
        prop_assert!(chain.sigma_is_symmetric());
        prop_assert!(chain.rounds <= moved.height());
        prop_assert_eq!(classify(&moved).unwrap(), (w, max_admissible_j(&w).unwrap()));
    }

    #[test]
    fn random_flags_sit_in_their_relative_position(
        g in 1usize..=3,
        jbits in any::<u32>(),
        seed in any::<u64>(),
        p in prop::sample::select(vec![2u64, 3, 5]),
    ) {
        let members: Vec<usize> = (1..g).filter(|i| jbits >> i & 1 == 1).collect();
        let j = SubsetJ::new(g, &members).unwrap();
        let space = SymplecticSpace::new(g, p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let flag = random_flag(&space, &j.tilde(), &mut rng);
        let standard = SymplecticFlag::standard(&space, &j).unwrap();
        let w = relpos(&standard, &flag).unwrap();
        prop_assert!(w.is_min_left(&j) && w.is_min_right(&j.tilde()));
        prop_assert!(in_open_cell(&flag, &w, &j).unwrap());
        prop_assert_eq!(intersection_matrix(&flag, &standard), schubert_dims(&w, &j).unwrap());
    }
}

#[test]
fn extension_degrees_two_and_three_keep_types() {
    for g in 1..=3 {
        for w in w_i_reps(g) {
            let d = standard_module_for(&w, 2).unwrap();
            let expected = classify(&d).unwrap();
            for l in [2, 3] {
                let big = extend_scalars(&d, l, None).unwrap();
                assert_eq!(big.field().degree(), l);
                assert_eq!(classify(&big).unwrap(), expected);
            }
        }
    }
    let f = Arc::new(GaloisField::prime(3).unwrap());
    assert_eq!(eostrata_core::dieudonne::module_etale(f, 0).height(), 0);
}
