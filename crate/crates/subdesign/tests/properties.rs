use std::sync::Arc;

use proptest::prelude::*;
use subdesign::gf::{format_expr, parse_expr, Code, FieldOps, FieldTower};
use subdesign::linalg;
use subdesign::skewpoly::{gcrd_lclm, kernel_basis, kernel_dim, SigmaPoly};
use subdesign::subspace::{AmbientSpace, FqSubspace, FqmSubspace};
use subdesign::sumrank::{singleton_for_code, SumRankCode};

const CAP: u64 = 10_000_000;
const TOWERS: [(u32, usize, usize); 6] = [(2, 1, 2), (2, 1, 4), (3, 1, 2), (3, 1, 3), (2, 2, 2), (5, 1, 2)];

fn tower(i: usize) -> Arc<FieldTower> {
    let (p, h, m) = TOWERS[i];
    FieldTower::with_defaults(p, h, m).unwrap()
}

/// (tower index, raw words reduced modulo the field order by the test).
fn tower_and_words(n: usize) -> impl Strategy<Value = (usize, Vec<u32>)> {
    (0..TOWERS.len(), prop::collection::vec(any::<u32>(), n))
}

fn reduce(t: &FieldTower, words: &[u32]) -> Vec<Code> {
    words.iter().map(|w| w % t.order()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_axioms((i, w) in tower_and_words(3)) {
        let t = tower(i);
        let [a, b, c] = reduce(&t, &w)[..] else { unreachable!() };
        prop_assert_eq!(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
        prop_assert_eq!(t.add(a, t.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(t.mul(a, t.inv(a)), 1);
        }
        prop_assert_eq!(t.frobenius(t.add(a, b), 1), t.add(t.frobenius(a, 1), t.frobenius(b, 1)));
        prop_assert_eq!(t.frobenius(a, t.m() as i64), a);
        prop_assert_eq!(t.from_digits(&t.digits(a)).unwrap(), a);
        prop_assert_eq!(parse_expr(&t, &format_expr(&t, a)).unwrap(), a);
    }

    #[test]
    fn grassmann_and_duality((i, w) in tower_and_words(12), k in 1usize..=2, split in 0usize..=6) {
        let t = tower(i);
        let a = AmbientSpace::new(&t, k).unwrap();
        let words = reduce(&t, &w);
        let vecs: Vec<Vec<Code>> = words.chunks(k).map(<[Code]>::to_vec).collect();
        let split = split.min(vecs.len());
        let u = FqSubspace::span(&a, &vecs[..split]).unwrap();
        let v = FqSubspace::span(&a, &vecs[split..]).unwrap();
        let (meet, join) = u.meet_join(&v).unwrap();
        prop_assert_eq!(meet.dim() + join.dim(), u.dim() + v.dim());
        prop_assert!(linalg::is_rref(u.rows()));
        prop_assert_eq!(FqSubspace::span(&a, &u.basis_vectors()).unwrap(), u.clone());
        let dual = u.ordinary_dual().unwrap();
        prop_assert_eq!(dual.dim() + u.dim(), a.fq_dim());
        prop_assert_eq!(dual.ordinary_dual().unwrap(), u.clone());

        let w = FqmSubspace::new(&a, vecs[..split.min(k)].to_vec()).unwrap();
        prop_assert_eq!(w.dual().dual(), w.clone());
        let lhs = dual.meet_dim_fqm(&w.dual()) as i64;
        let rhs = u.meet_dim_fqm(&w) as i64 + a.fq_dim() as i64 - u.dim() as i64 - (a.m() * w.dim()) as i64;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn linear_set_weights_add_up((i, w) in tower_and_words(6), k in 2usize..=3) {
        let t = tower(i);
        let a = AmbientSpace::new(&t, k).unwrap();
        let words = reduce(&t, &w);
        let vecs: Vec<Vec<Code>> = words.chunks_exact(k).map(<[Code]>::to_vec).collect();
        let u = FqSubspace::span(&a, &vecs).unwrap();
        prop_assume!(u.dim() > 0);
        let q = a.q() as u128;
        let total: u128 = u.linear_set(CAP).unwrap().weight_counts().iter().map(|(&i, &n)| n as u128 * (q.pow(i) - 1) / (q - 1)).sum();
        prop_assert_eq!(total, (q.pow(u.dim() as u32) - 1) / (q - 1));
    }

    #[test]
    fn sigma_kernel_and_gcrd((i, w) in tower_and_words(8), split in 1usize..=7) {
        let t = tower(i);
        let words = reduce(&t, &w);
        let (fc, gc) = words.split_at(split);
        let f = SigmaPoly::new(&t, 1, fc.to_vec()).unwrap();
        let g = SigmaPoly::new(&t, 1, gc.to_vec()).unwrap();
        prop_assume!(!f.is_zero());
        let kd = kernel_dim(&f).unwrap();
        prop_assert!(kd <= f.degree().unwrap());
        let basis = kernel_basis(&f);
        prop_assert_eq!(basis.len(), kd);
        prop_assert!(basis.iter().all(|&x| f.eval(x) == 0));
        if !g.is_zero() {
            let (gcrd, lclm) = gcrd_lclm(&f, &g).unwrap();
            prop_assert_eq!(gcrd.degree().unwrap() + lclm.degree().unwrap(), f.degree().unwrap() + g.degree().unwrap());
        }
    }

    #[test]
    fn singleton_never_violated((i, w) in tower_and_words(12), lengths in prop::collection::vec(1usize..=3, 1..=3)) {
        let t = tower(i);
        let n: usize = lengths.iter().sum();
        let k = 2.min(n);
        let words = reduce(&t, &w);
        let gen: Vec<Vec<Code>> = (0..k).map(|r| (0..n).map(|c| words[(r * n + c) % words.len()]).collect()).collect();
        prop_assume!(linalg::rank(&*t, &gen) == k);
        let code = SumRankCode::new(&t, gen, &lengths).unwrap();
        let (d, s) = singleton_for_code(&code, CAP).unwrap();
        prop_assert!(d >= 1);
        prop_assert!(t.m() * k <= s.bound_exponent);
    }
}
