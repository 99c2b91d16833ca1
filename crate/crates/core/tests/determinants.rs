mod common;

use common::*;
use proptest::prelude::*;
use qmason::casorati::{casorati, casorati_shift_form, coefficient_rank_full, independence_report, printed_normalizer, shift_normalizer, CasoratiInput};
use qmason::{DensePoly, QContext};

fn tuple(m: usize) -> impl Strategy<Value = Vec<DensePoly>> {
    prop::collection::vec(poly(4), m)
}

fn casorati_q() -> impl Strategy<Value = QContext> {
    prop::sample::select(vec!["2", "1/2", "2+i"]).prop_map(ctx)
}

fn det(polys: Vec<DensePoly>, q: &QContext) -> DensePoly {
    casorati(&CasoratiInput::new(polys, q.clone()).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alternation(polys in (2usize..=4).prop_flat_map(tuple), q in casorati_q(), i in 0usize..4, j in 0usize..4) {
        let m = polys.len();
        let (i, j) = (i % m, j % m);
        prop_assume!(i != j);
        let base = det(polys.clone(), &q);
        let mut swapped = polys.clone();
        swapped.swap(i, j);
        prop_assert_eq!(det(swapped, &q), -base);
        let mut repeated = polys;
        repeated[j] = repeated[i].clone();
        prop_assert!(det(repeated, &q).is_zero());
    }

    #[test]
    fn column_replacement(polys in (2usize..=4).prop_flat_map(tuple), q in casorati_q(), j in 0usize..4) {
        let j = j % polys.len();
        let sum = polys.iter().fold(DensePoly::zero(), |acc, p| &acc + p);
        let mut replaced = polys.clone();
        replaced[j] = sum;
        prop_assert_eq!(det(replaced, &q), det(polys, &q));
    }

    #[test]
    fn shift_form_identity(polys in (1usize..=4).prop_flat_map(tuple), q in casorati_q()) {
        let m = polys.len();
        let input = CasoratiInput::new(polys, q.clone()).unwrap();
        let (shift_det, normalizer) = casorati_shift_form(&input).unwrap();
        prop_assert_eq!(&normalizer, &shift_normalizer(m, &q));
        prop_assert_eq!(shift_det, &normalizer * &casorati(&input).unwrap());
    }

    #[test]
    fn independence_signals_agree(
        polys in (1usize..=4).prop_flat_map(tuple),
        mix in prop::collection::vec(small_int(), 4),
        dependent in any::<bool>(),
        q in casorati_q(),
    ) {
        let mut polys = polys;
        if dependent && polys.len() > 1 {
            let combo = polys[1..].iter().zip(&mix).fold(DensePoly::zero(), |acc, (p, c)| &acc + &p.scale(c));
            polys[0] = combo;
        }
        let r = independence_report(&CasoratiInput::new(polys.clone(), q).unwrap()).unwrap();
        prop_assert!(r.agree, "{:?}", polys);
        prop_assert_eq!(r.coefficient_rank_full, coefficient_rank_full(&polys));
    }
}

#[test]
fn printed_normalizer_only_exact_for_small_m() {
    for q in ["2", "1/2", "2+i"] {
        let q = ctx(q);
        for m in 1..=2 {
            assert_eq!(printed_normalizer(m, &q), shift_normalizer(m, &q));
        }
        for m in 3..=4 {
            assert_ne!(printed_normalizer(m, &q), shift_normalizer(m, &q));
            assert_eq!(shift_normalizer(m, &q).deg(), m * (m - 1) / 2);
        }
    }
}
