mod common;

use common::*;
use proptest::prelude::*;
use qmason::qcore::{
    derivative_from_shifts, jackson, jackson_iter, q_binomial, q_number, q_pow_factor, shift_from_derivatives,
};
use qmason::DensePoly;

fn z0s() -> impl Strategy<Value = Gr> {
    prop::sample::select(vec!["1", "-2", "1/3", "1+i"]).prop_map(g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn shift_transforms(p in poly(6), k in 0u32..=4, z0 in z0s(), q in q_ctx()) {
        let shifted = p.eval(&(&z0 * &q.q_pow(i64::from(k))));
        prop_assert_eq!(shift_from_derivatives(&p, k, &z0, &q).unwrap(), shifted);
        let deriv = jackson_iter(&p, k as usize, &q).unwrap().eval(&z0);
        prop_assert_eq!(derivative_from_shifts(&p, k, &z0, &q).unwrap(), deriv);
    }

    #[test]
    fn jackson_of_q_power_factor(a in gaussian(), n in 1u32..=6, q in q_ctx()) {
        let lhs = jackson(&q_pow_factor(&a, n, &q).expand(), &q).unwrap();
        let rhs = q_pow_factor(&a, n - 1, &q).expand().scale(&q_number(n, &q));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn q_pascal_recurrences(k in 1u32..10, j in 1u32..10, q in q_ctx()) {
        prop_assume!(j < k);
        let up = q_binomial(k, j, &q).unwrap();
        let a = q_binomial(k - 1, j - 1, &q).unwrap();
        let b = q_binomial(k - 1, j, &q).unwrap();
        prop_assert_eq!(&up, &(&a + &(q.q_pow(i64::from(j)) * &b)));
        prop_assert_eq!(&up, &(&(q.q_pow(i64::from(k - j)) * &a) + &b));
    }

    #[test]
    fn jackson_lowers_degree(p in nonzero_poly(8), q in q_ctx()) {
        prop_assume!(!p.is_constant());
        prop_assert_eq!(jackson(&p, &q).unwrap().deg(), p.deg() - 1);
    }

    #[test]
    fn jackson_matches_difference_quotient(p in poly(6), x in nonzero_gaussian(), q in q_ctx()) {
        let qx = &x * q.q();
        let quotient = (p.eval(&qx) - p.eval(&x)).checked_div(&(&qx - &x)).unwrap();
        prop_assert_eq!(jackson(&p, &q).unwrap().eval(&x), quotient);
    }
}

#[test]
fn q_binomial_classical_limit() {
    let one = ctx("1");
    for k in 0u32..12 {
        let mut c: u64 = 1;
        for j in 0..=k {
            assert_eq!(q_binomial(k, j, &one).unwrap(), Gr::from_int(c as i64), "{k} {j}");
            c = c * u64::from(k - j) / u64::from(j + 1);
        }
    }
}

#[test]
fn jackson_of_constant_is_zero() {
    assert_eq!(jackson(&DensePoly::from_ints(&[7]), &ctx("2")).unwrap(), DensePoly::zero());
}
