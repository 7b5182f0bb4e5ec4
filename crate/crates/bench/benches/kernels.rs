use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use oreset_core::cache::DiskCache;
use oreset_core::flagcoord::FlagAlgebra;
use oreset_core::hwmod::{Depth, ModuleStore};
use oreset_core::rootdata::{CartanData, Weight};
use oreset_core::schubert::SchubertCell;
use oreset_core::uq::{Uq, UqElement};
use oreset_core::weyl::WeylElt;
use oreset_core::{qint, RatQ};

fn scalars(c: &mut Criterion) {
    let a = &qint(7, 1) + &RatQ::q_pow(-3);
    let b = &qint(5, 2) - &RatQ::from_ratio(2, 3);
    c.bench_function("ratq_mul_div", |bn| bn.iter(|| &(&a * &b) / &(&a + &b)));
}

fn uq_multiply(c: &mut Criterion) {
    let cd = CartanData::preset("A2").unwrap();
    let uq = Uq::new(cd);
    let e = |i| UqElement::e(2, i);
    let f = |i| UqElement::f(2, i);
    let x = uq.multiply(&uq.multiply(&e(0), &e(1)), &e(0));
    let y = uq.multiply(&uq.multiply(&f(1), &f(0)), &f(1));
    c.bench_function("uq_a2_e121_times_f212", |bn| bn.iter(|| uq.multiply(&x, &y)));
}

fn module_build(c: &mut Criterion) {
    let cd = CartanData::preset("B2").unwrap();
    c.bench_function("module_b2_rho_full", |bn| {
        bn.iter_batched(
            || ModuleStore::new(cd.clone(), DiskCache::disabled()),
            |store| store.get(&Weight::rho(2), Depth::Full).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn flag_multiply(c: &mut Criterion) {
    let cd = CartanData::preset("A2").unwrap();
    let store = Arc::new(ModuleStore::new(cd.clone(), DiskCache::disabled()));
    let flag = FlagAlgebra::new(store).unwrap();
    let e = WeylElt::identity(&cd);
    let s1 = WeylElt::simple(&cd, 0).unwrap();
    let x = flag.minor(&s1, &e, &Weight::fundamental(2, 0)).unwrap().as_elt;
    let y = flag.minor(&e, &s1, &Weight::fundamental(2, 1)).unwrap().as_elt;
    flag.multiply(&x, &y).unwrap();
    c.bench_function("flag_a2_minor_product", |bn| bn.iter(|| flag.multiply(&x, &y).unwrap()));
}

fn schubert_d(c: &mut Criterion) {
    let cd = CartanData::preset("A2").unwrap();
    let uq = Arc::new(Uq::new(cd.clone()));
    let store = Arc::new(ModuleStore::new(cd.clone(), DiskCache::disabled()));
    let cell = SchubertCell::new(uq, store, &[0, 1, 0]).unwrap();
    let e = WeylElt::identity(&cd);
    c.bench_function("uw_a2_d_e_rho", |bn| bn.iter(|| cell.d_element(&e, &Weight::rho(2)).unwrap()));
}

criterion_group!(benches, scalars, uq_multiply, module_build, flag_multiply, schubert_d);
criterion_main!(benches);
