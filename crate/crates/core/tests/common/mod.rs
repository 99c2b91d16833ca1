#![allow(dead_code)]

use proptest::prelude::*;
use qmason::{DensePoly, FactoredPoly, GaussianRational, QContext};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Gr = GaussianRational;

pub fn g(s: &str) -> Gr {
    s.parse().unwrap()
}

pub fn ctx(s: &str) -> QContext {
    QContext::new(g(s)).unwrap()
}

pub const QS: [&str; 4] = ["2", "1/2", "3", "2+i"];

/// Bases of the small q-orbits that random roots are drawn from.
pub const ORBIT_BASES: [&str; 6] = ["1", "-1", "3", "-5/2", "1+i", "2-3i"];

pub fn gaussian() -> impl Strategy<Value = Gr> {
    (-9i64..10, 1i64..5, -9i64..10, 1i64..5).prop_map(|(a, b, c, d)| Gr::from_parts((a, b), (c, d)))
}

pub fn nonzero_gaussian() -> impl Strategy<Value = Gr> {
    gaussian().prop_filter("nonzero", |x| !x.is_zero())
}

pub fn small_int() -> impl Strategy<Value = Gr> {
    (-4i64..5).prop_map(Gr::from_int)
}

pub fn coeff() -> impl Strategy<Value = Gr> {
    prop_oneof![small_int(), gaussian()]
}

pub fn poly(max_deg: usize) -> impl Strategy<Value = DensePoly> {
    prop::collection::vec(coeff(), 0..=max_deg + 1).prop_map(DensePoly::new)
}

pub fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = DensePoly> {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn q_ctx() -> impl Strategy<Value = QContext> {
    prop::sample::select(QS.to_vec()).prop_map(ctx)
}

/// Root `base * q^k`, or zero.
pub fn orbit_root(q: &QContext) -> impl Strategy<Value = Gr> {
    let q = q.clone();
    (0usize..=ORBIT_BASES.len(), -2i64..4).prop_map(move |(b, k)| match ORBIT_BASES.get(b) {
        Some(base) => g(base) * q.q_pow(k),
        None => Gr::zero(),
    })
}

pub fn orbit_poly(q: &QContext, max_roots: usize) -> impl Strategy<Value = FactoredPoly> {
    (prop::collection::vec(orbit_root(q), 0..=max_roots), nonzero_gaussian())
        .prop_map(|(roots, lead)| FactoredPoly::new(lead, roots).unwrap())
}

/// `(q, f)` with `f` built from q-orbits of `q`.
pub fn q_and_orbit_poly(max_roots: usize) -> impl Strategy<Value = (QContext, FactoredPoly)> {
    q_ctx().prop_flat_map(move |q| (Just(q.clone()), orbit_poly(&q, max_roots)))
}

pub fn rand_gaussian<R: Rng>(rng: &mut R) -> Gr {
    let re = Gr::from_frac(rng.gen_range(-9..10), rng.gen_range(1..5));
    if rng.gen_bool(0.5) {
        re
    } else {
        re + Gr::from_frac(rng.gen_range(-9..10), rng.gen_range(1..5)) * Gr::i()
    }
}

pub fn rand_nonzero<R: Rng>(rng: &mut R) -> Gr {
    loop {
        let x = rand_gaussian(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn rand_poly<R: Rng>(rng: &mut R, max_deg: usize) -> DensePoly {
    let deg = rng.gen_range(0..=max_deg);
    DensePoly::new((0..=deg).map(|_| rand_gaussian(rng)).collect())
}

pub fn rand_orbit_root<R: Rng>(rng: &mut R, q: &QContext) -> Gr {
    match ORBIT_BASES.choose(rng) {
        Some(base) if rng.gen_bool(0.9) => g(base) * q.q_pow(rng.gen_range(-2..4)),
        _ => Gr::zero(),
    }
}

pub fn rand_orbit_poly<R: Rng>(rng: &mut R, q: &QContext, max_roots: usize) -> FactoredPoly {
    let n = rng.gen_range(0..=max_roots);
    let roots = (0..n).map(|_| rand_orbit_root(rng, q)).collect();
    FactoredPoly::new(rand_nonzero(rng), roots).unwrap()
}
