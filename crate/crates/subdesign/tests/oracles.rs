//! Library results against independent re-computations written directly in the tests.

use std::collections::BTreeMap;
use std::sync::Arc;

use subdesign::design::{construct_glued, construct_pseudoregulus, construct_twisted, design_profile, SubspaceDesign};
use subdesign::gf::{Code, FieldOps, FieldTower};
use subdesign::hamming::{ext_system, weight_enumerator};
use subdesign::linalg::{self, gaussian_binomial};
use subdesign::skewpoly::element_of_norm;
use subdesign::subspace::{AmbientSpace, SubspaceFamily};
use subdesign::sumrank::{code_from_system, min_distance, sumrank_weight};

const CAP: u64 = 10_000_000;

fn tower(p: u32, m: usize) -> Arc<FieldTower> {
    FieldTower::with_defaults(p, 1, m).unwrap()
}

fn all_vectors(order: u32, k: usize) -> Vec<Vec<Code>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|v| (0..order).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

/// ∏_{i<s} (Q^{n−i} − 1)/(Q^{s−i} − 1).
fn grassmann_count(n: u32, s: u32, big_q: u128) -> u128 {
    (0..s).fold(1, |acc, i| acc * (big_q.pow(n - i) - 1)) / (0..s).fold(1, |acc, i| acc * (big_q.pow(s - i) - 1))
}

#[test]
fn subspace_counts_match_product_formula() {
    for (p, m, k) in [(2u32, 2usize, 3usize), (3, 2, 3), (2, 3, 3), (2, 1, 5)] {
        let t = tower(p, m);
        let a = AmbientSpace::new(&t, k).unwrap();
        let big_q = t.order() as u128;
        for s in 0..=k {
            let fam = SubspaceFamily::new(&a, s, CAP).unwrap();
            assert_eq!(fam.len(), grassmann_count(k as u32, s as u32, big_q), "p={p} m={m} k={k} s={s}");
            assert_eq!(gaussian_binomial(k, s, big_q as u64), Some(fam.len()));
        }
    }
}

#[test]
fn norm_is_product_of_conjugates() {
    for (p, m) in [(2u32, 4usize), (3, 3), (5, 2)] {
        let t = tower(p, m);
        for a in 1..t.order() {
            let mut prod = 1;
            let mut conj = a;
            for _ in 0..m {
                prod = t.mul(prod, conj);
                conj = t.pow(conj, p as u64);
            }
            assert_eq!(t.norm(a), prod);
            assert!(t.in_base(prod));
        }
    }
}

/// Weight of xG for the Ext system counted point by point: Σ mult(P) over P with x·P ≠ 0.
fn ext_enumerator_by_messages(d: &SubspaceDesign) -> BTreeMap<u64, u128> {
    let ext = ext_system(d, CAP).unwrap();
    let t = d.tower();
    let mut out = BTreeMap::new();
    for x in all_vectors(t.order(), d.ambient().k()) {
        let w: u64 = ext.entries().iter().filter(|(p, _)| linalg::dot(&**t, &x, p) != 0).map(|(_, &n)| n).sum();
        *out.entry(w).or_insert(0) += 1;
    }
    out
}

#[test]
fn two_weight_enumerators_by_direct_encoding() {
    let t4 = tower(2, 2);
    let d = construct_twisted(&AmbientSpace::new(&t4, 2).unwrap(), &[1], 0, &[vec![1, 2]]).unwrap();
    let direct = ext_enumerator_by_messages(&d);
    assert_eq!(weight_enumerator(&ext_system(&d, CAP).unwrap(), CAP).unwrap(), direct);
    assert_eq!(direct, BTreeMap::from([(0, 1), (2, 9), (3, 6)]));

    let t9 = tower(3, 2);
    let pr = construct_pseudoregulus(&AmbientSpace::new(&t9, 2).unwrap(), 1, &[1, 4]).unwrap();
    assert_eq!(weight_enumerator(&ext_system(&pr, CAP).unwrap(), CAP).unwrap(), ext_enumerator_by_messages(&pr));

    let t8 = tower(2, 3);
    let g = construct_glued(&t8, 4, 1, &[1]).unwrap();
    assert_eq!(weight_enumerator(&ext_system(&g, CAP).unwrap(), CAP).unwrap(), ext_enumerator_by_messages(&g));
}

/// Σ_i rank over F_q of the m × n_i matrix of block i.
fn block_rank_weight(t: &FieldTower, word: &[Code], lengths: &[usize]) -> usize {
    let mut start = 0;
    let mut total = 0;
    for &n in lengths {
        let cols: Vec<Vec<Code>> = word[start..start + n].iter().map(|&c| t.coords(c)).collect();
        total += linalg::rank(t.base(), &cols);
        start += n;
    }
    total
}

#[test]
fn sum_rank_distance_by_matrix_ranks() {
    let t9 = tower(3, 2);
    let a = AmbientSpace::new(&t9, 2).unwrap();
    let alpha = element_of_norm(&t9, 2).unwrap();
    let d = construct_twisted(&a, &[1, alpha], 0, &[vec![1, 3], vec![1, 3]]).unwrap();
    let code = code_from_system(&d).unwrap();
    let lengths = code.n().to_vec();
    let mut best = usize::MAX;
    for x in all_vectors(t9.order(), 2).into_iter().filter(|x| x.iter().any(|&c| c != 0)) {
        let word = code.codeword(&x).unwrap();
        let w = block_rank_weight(&t9, &word, &lengths);
        assert_eq!(sumrank_weight(&code, &x).unwrap(), w);
        best = best.min(w);
    }
    assert_eq!(min_distance(&code, CAP).unwrap(), best);
    // N − k + 1 with N = 4, k = 2
    assert_eq!(best, 3);
}

/// max over s-dim W of Σ dim(U_i ∩ W), with dim(U ∩ W) = log_2 |U ∩ W| counted by listing the nonzero vectors of U.
#[test]
fn profile_by_listing_vectors() {
    let t4 = tower(2, 2);
    let a = AmbientSpace::new(&t4, 3).unwrap();
    let d = subdesign::design::construct_field_partition(&t4, 3).unwrap();
    let lists: Vec<Vec<Vec<Code>>> = d.members().iter().map(|u| u.vectors(CAP).unwrap()).collect();
    for s in 1..=2 {
        let mut best = 0;
        for w in SubspaceFamily::new(&a, s, CAP).unwrap().iter() {
            let sum: usize = lists
                .iter()
                .map(|vs| ((vs.iter().filter(|v| w.contains(v)).count() + 1) as f64).log2().round() as usize)
                .sum();
            best = best.max(sum);
        }
        assert_eq!(design_profile(&d, s, CAP).unwrap().a_min, best, "s = {s}");
    }
}
