//! Property tests for the structural invariants: involutions, duality
//! axioms, round trips, and order-independence of the configuration sum.

use dnkr::bijection::{delta, delta_inv};
use dnkr::cli::dominant_weights_below;
use dnkr::columns::{cond1, drop_map, fill, Column, Letter};
use dnkr::crystal::{
    column_op_e, column_op_f, column_star, enumerate, letter_star, tau, Label,
};
use dnkr::fermionic::{m_sum, qbinomial, x_sum};
use dnkr::rc::{cc, enumerate_rc, is_valid_rc, theta, RiggedConfig, TensorSpec};
use dnkr::rmatrix::RCache;
use dnkr::rootdata::Rank;
use once_cell::sync::Lazy;
use proptest::prelude::*;

fn rk(n: u8) -> Rank {
    Rank::new(n).unwrap()
}

/// A reusable pool of configurations from a few mid-sized cells.
static RC_POOL: Lazy<Vec<RiggedConfig>> = Lazy::new(|| {
    let rank = rk(4);
    let mut pool = Vec::new();
    for factors in [
        vec![Label::Kr(1), Label::Kr(2), Label::Kr(2)],
        vec![Label::Kr(2), Label::Kr(4), Label::Kr(1)],
        vec![Label::Kr(3), Label::Kr(3)],
    ] {
        let spec = TensorSpec::new(rank, factors);
        for lam in dominant_weights_below(rank, &spec.l_vector().unwrap()) {
            pool.extend(enumerate_rc(rank, &lam, &spec).unwrap());
        }
    }
    pool
});

proptest! {
    #[test]
    fn qbinomial_symmetry_and_degree(m in 0u32..7, p in 0u32..7) {
        let b = qbinomial(m, p);
        prop_assert_eq!(b.clone(), qbinomial(p, m));
        prop_assert_eq!(b.degree(), Some(m * p));
        // palindromic coefficients
        for (&e, &c) in b.coeffs() {
            prop_assert_eq!(c, b.coeff(m * p - e));
        }
    }

    #[test]
    fn theta_is_an_involution(idx in 0usize..1000) {
        let pool = &*RC_POOL;
        let rc = &pool[idx % pool.len()];
        let t = theta(rc);
        prop_assert!(is_valid_rc(&t));
        prop_assert_eq!(&theta(&t), rc);
        // complement identity for the statistic
        let mut mp = 0i64;
        for a in 1..=4usize {
            let mut lens = rc.part(a).shape();
            lens.dedup();
            for len in lens {
                mp += rc.part(a).mult(len) as i64 * rc.vacancy(a, len);
            }
        }
        let shape_cc = cc(rc) - rc
            .parts()
            .iter()
            .flat_map(|p| p.rows().iter().map(|&(_, r)| r))
            .sum::<i64>();
        prop_assert_eq!(cc(&t) + cc(rc), 2 * shape_cc + mp);
    }

    #[test]
    fn box_removal_round_trip(idx in 0usize..1000) {
        let pool = &*RC_POOL;
        let rc = &pool[idx % pool.len()];
        if rc.spec().leftmost() == Some(Label::Kr(1)) {
            let d = delta(rc).unwrap();
            prop_assert_eq!(&delta_inv(&d.rc, d.letter).unwrap(), rc);
        }
    }

    #[test]
    fn dual_axiom_at_rank_six(seed in 0usize..500, i in 0usize..7) {
        let rank = rk(6);
        let label = Label::Kr(3);
        let elems = enumerate(rank, label).unwrap();
        let c = &elems[seed % elems.len()];
        let lhs = column_op_e(rank, label, c, i).map(|d| column_star(rank, &d));
        let rhs = column_op_f(rank, label, &column_star(rank, c), tau(rank, i));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(column_star(rank, &column_star(rank, c)), c.clone());
        for x in c.letters() {
            prop_assert_eq!(letter_star(rank, letter_star(rank, *x)), *x);
        }
    }

    #[test]
    fn fill_drop_round_trip_at_rank_six(seed in 0usize..2000) {
        let rank = 6usize;
        let elems = enumerate(rk(6), Label::Kr(4)).unwrap();
        let c: &Column = &elems[seed % elems.len()];
        prop_assert!(cond1(rank, c));
        let core = drop_map(rank, c);
        prop_assert_eq!(&fill(rank, &core, 4).unwrap(), c);
    }
}

#[test]
fn configuration_sum_is_order_independent() {
    let rank = rk(4);
    let cache = RCache::new(rank, None);
    let orders: Vec<Vec<Label>> = vec![
        vec![Label::Kr(2), Label::Kr(1), Label::Kr(4)],
        vec![Label::Kr(1), Label::Kr(2), Label::Kr(4)],
        vec![Label::Kr(4), Label::Kr(2), Label::Kr(1)],
    ];
    let specs: Vec<TensorSpec> = orders
        .into_iter()
        .map(|f| TensorSpec::new(rank, f))
        .collect();
    let l = specs[0].l_vector().unwrap();
    for lam in dominant_weights_below(rank, &l) {
        let base = x_sum(&cache, &lam, &specs[0]).unwrap();
        for other in &specs[1..] {
            assert_eq!(base, x_sum(&cache, &lam, other).unwrap());
        }
        assert_eq!(base, m_sum(rank, &lam, &specs[0]).unwrap());
    }
}

#[test]
fn letter_weights_match_under_bijection() {
    // weights of single-letter factors: literal check of the arrow
    // weight bookkeeping over one full cell
    let rank = rk(4);
    let spec = TensorSpec::new(rank, vec![Label::Kr(1), Label::Kr(1), Label::Kr(1)]);
    for lam in dominant_weights_below(rank, &spec.l_vector().unwrap()) {
        for rc in enumerate_rc(rank, &lam, &spec).unwrap() {
            let p = dnkr::bijection::phi(&rc).unwrap();
            let mut w = dnkr::rootdata::Weight::zero(rank);
            for (_, c) in p.factors() {
                let x: Letter = c.letters()[0];
                w = w.add(&dnkr::bijection::letter_weight(rank, x));
            }
            assert_eq!(&w, rc.lambda());
        }
    }
}
