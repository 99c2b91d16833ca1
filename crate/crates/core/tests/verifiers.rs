mod common;

use common::*;
use proptest::prelude::*;
use qmason::qcore::{q_number, q_pow_factor};
use qmason::theorems::{
    fermat_search, multi_fermat_bound, q_fermat_power, q_fermat_power_factored, verify_mason_extended,
    verify_mason_q, FermatMode, FermatSearchParams, Verdict,
};
use qmason::{DensePoly, FactoredPoly, Operand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fermat_power_degree_and_roots((q, f) in q_and_orbit_poly(4), n in 1u32..4) {
        let dense = q_fermat_power(&f.expand(), n, &q).unwrap();
        prop_assert_eq!(dense.deg(), n as usize * f.degree());
        let factored = q_fermat_power_factored(&f, n, &q).unwrap();
        prop_assert_eq!(factored.expand(), dense);
        let mut want: Vec<Gr> = (0..n)
            .flat_map(|i| {
                let s = q.q_pow(-i64::from(i));
                f.roots().iter().map(move |r| r * &s)
            })
            .collect();
        want.sort();
        prop_assert_eq!(factored.roots(), &want[..]);
    }
}

fn sum_operand(a: &FactoredPoly, b: &FactoredPoly) -> Option<Operand> {
    let c = &a.expand() + &b.expand();
    (!c.is_zero()).then(|| Operand::from_dense(c).unwrap())
}

#[test]
fn mason_sweep_has_no_violations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut passing = 0;
    while passing < 200 {
        let q = ctx(QS[rng.gen_range(0..QS.len())]);
        let a = rand_orbit_poly(&mut rng, &q, 4);
        let b = rand_orbit_poly(&mut rng, &q, 4);
        let Some(c) = sum_operand(&a, &b) else { continue };
        let r = verify_mason_q(&a.clone().into(), &b.clone().into(), &c, &q).unwrap();
        if r.premises.iter().all(|p| p.holds) {
            passing += 1;
            assert!(r.inequality_holds, "counterexample a={a} b={b} c={c} q={}", q.q());
            assert_eq!(r.verdict, Verdict::Holds);
        } else {
            assert_eq!(r.verdict, Verdict::NotApplicable);
        }
    }
}

const SMALL: [&str; 8] = ["1", "-1", "2", "-2", "3", "1/2", "i", "1-i"];

#[test]
fn extended_pattern_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut passing = 0;
    for _ in 0..60 {
        let q = ctx(QS[rng.gen_range(0..QS.len())]);
        let mut small = || g(SMALL[rng.gen_range(0..SMALL.len())]);
        let f1 = q_pow_factor(&small(), 5, &q).scale(&small()).unwrap();
        let f2 = q_pow_factor(&small(), 5, &q).scale(&small()).unwrap();
        let f3 = FactoredPoly::new(q_number(5, &q) * small(), vec![Gr::zero(); 4]).unwrap();
        let f4 = &(&f1.expand() + &f2.expand()) + &f3.expand();
        if f4.is_zero() {
            continue;
        }
        let fs = vec![f1.into(), f2.into(), f3.into(), Operand::from_dense(f4).unwrap()];
        let r = verify_mason_extended(&fs, &q).unwrap();
        assert!(r.rhs_trunc <= r.rhs_rad);
        if r.premises.iter().all(|p| p.holds) {
            passing += 1;
            assert!(r.both_hold, "{fs:?}");
        }
    }
    assert!(passing > 0);
}

#[test]
fn search_is_thread_independent() {
    let q = ctx("1/2");
    let coeffs = (-1..=1).map(Gr::from_int).chain([g("i")]).collect();
    let params = FermatSearchParams::new(2, FermatMode::TwoTerm, 1, coeffs, None).unwrap();
    let one = fermat_search(&params, &q, 1).unwrap();
    let many = fermat_search(&params, &q, 5).unwrap();
    assert_eq!(one, many);
    let rejected: u64 = one.filtered.iter().map(|f| f.rejected).sum();
    assert_eq!(rejected + one.premise_passing, one.examined);
}

#[test]
fn multi_bound_is_increasing_in_degree() {
    for m in 2..6 {
        for d in 1..10 {
            assert!(multi_fermat_bound(m, d).unwrap() < multi_fermat_bound(m, d + 1).unwrap());
        }
    }
}

#[test]
fn fermat_power_of_zero_degree() {
    let q = ctx("3");
    let c = DensePoly::from_ints(&[2]);
    assert_eq!(q_fermat_power(&c, 4, &q).unwrap(), DensePoly::from_ints(&[16]));
}
