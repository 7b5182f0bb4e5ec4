//! Cross-checks between the U_q(g) normal-form engine and the module actions.

use num_rational::Ratio;
use oreset_core::hwmod::{pair, Depth, HWModule, ModVector, ModuleBraid};
use oreset_core::linalg::rank;
use oreset_core::rootdata::{CartanData, RootVec, Weight};
use oreset_core::uq::{words::words_of_degree, Uq, UqElement};
use oreset_core::weyl::{longest_element, lower_interval, reduced_words, WeylElt};
use oreset_core::RatQ;
use proptest::prelude::*;

fn generators(r: usize) -> Vec<UqElement> {
    let mut g = Vec::new();
    for i in 0..r {
        g.push(UqElement::e(r, i));
        g.push(UqElement::f(r, i));
        g.push(UqElement::k_i(r, i, 1));
        g.push(UqElement::k_i(r, i, -1));
    }
    g
}

fn all_basis_vectors(m: &HWModule) -> Vec<ModVector> {
    m.spaces().flat_map(|s| (0..s.dim()).map(move |k| m.basis_vector(&s.depth, k))).collect()
}

/// Weyl dimension formula: prod over positive roots of (lambda+rho, beta)/(rho, beta).
fn weyl_dimension(cd: &CartanData, lambda: &Weight) -> i64 {
    let rho = Weight::rho(cd.rank());
    let lr = lambda.add(&rho);
    let mut acc = Ratio::from_integer(1i64);
    for beta in cd.positive_roots().unwrap() {
        let bw = cd.weight_of_rootvec(&beta);
        acc *= cd.weight_form(&lr, &bw).unwrap() / cd.weight_form(&rho, &bw).unwrap();
    }
    assert!(acc.is_integer());
    acc.to_integer()
}

/// Rank of the contravariant form on F-words of depth nu, computed in U_q(g).
fn gram_rank(u: &Uq, lambda: &Weight, nu: &RootVec) -> usize {
    let words = words_of_degree(nu);
    let cd = u.cartan();
    let rows: Vec<Vec<RatQ>> = words
        .iter()
        .map(|w| {
            let ew: Vec<usize> = w.iter().rev().copied().collect();
            words
                .iter()
                .map(|w2| {
                    let x = u.multiply(&u.eword(&ew), &u.fword(w2));
                    let mut acc = RatQ::zero();
                    for (m, c) in x.terms() {
                        if m.fword.is_empty() && m.eword.is_empty() {
                            let e: i64 = (0..cd.rank()).map(|i| m.kvec[i] * cd.d(i) as i64 * lambda.0[i]).sum();
                            acc = &acc + &(c * &RatQ::q_pow(e));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    rank(&rows, words.len())
}

#[test]
fn dimensions_match_weyl_formula() {
    let cases: &[(&str, &[i64])] = &[
        ("A1", &[1]),
        ("A1", &[3]),
        ("A2", &[1, 0]),
        ("A2", &[1, 1]),
        ("A2", &[2, 1]),
        ("A3", &[1, 0, 1]),
        ("B2", &[1, 0]),
        ("B2", &[0, 1]),
        ("B2", &[1, 1]),
        ("G2", &[1, 0]),
        ("G2", &[0, 1]),
    ];
    for (t, l) in cases {
        let cd = CartanData::preset(t).unwrap();
        let lambda = Weight(l.to_vec());
        let m = HWModule::build(&cd, &lambda, Depth::Full).unwrap();
        assert_eq!(m.total_dim() as i64, weyl_dimension(&cd, &lambda), "{t} {lambda}");
    }
}

#[test]
fn weight_spaces_match_gram_rank() {
    for (t, l) in [("A2", vec![1, 1]), ("A2", vec![2, 1]), ("B2", vec![1, 1]), ("G2", vec![1, 0])] {
        let cd = CartanData::preset(t).unwrap();
        let u = Uq::new(cd.clone());
        let lambda = Weight(l);
        let m = HWModule::build(&cd, &lambda, Depth::Full).unwrap();
        for s in m.spaces() {
            if s.depth.height() <= 4 {
                assert_eq!(gram_rank(&u, &lambda, &s.depth), s.dim(), "{t} depth {}", s.depth);
            }
        }
    }
}

#[test]
fn action_respects_products() {
    for (t, l) in [("A1", vec![2]), ("A2", vec![1, 1]), ("B2", vec![1, 1])] {
        let cd = CartanData::preset(t).unwrap();
        let u = Uq::new(cd.clone());
        let m = HWModule::build(&cd, &Weight(l), Depth::Full).unwrap();
        let g = generators(cd.rank());
        for x in &g {
            for y in &g {
                let xy = u.multiply(x, y);
                for v in all_basis_vectors(&m) {
                    let lhs = m.act(&xy, &v).unwrap();
                    let rhs = m.act(x, &m.act(y, &v).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "{t}: ({x})({y})");
                }
            }
        }
    }
}

#[test]
fn sl2_cartan_action_on_highest_weight() {
    let cd = CartanData::preset("A1").unwrap();
    let u = Uq::new(cd.clone());
    for n in 1..4 {
        let m = HWModule::build(&cd, &Weight(vec![n]), Depth::Full).unwrap();
        let x = u.commutator(&UqElement::e(1, 0), &UqElement::f(1, 0));
        let b = m.hw_vector();
        assert_eq!(m.act(&x, &b).unwrap(), b.scale(&oreset_core::qint(n, 1)));
        let k = m.act(&UqElement::k_i(1, 0, 1), &b).unwrap();
        assert_eq!(k, b.scale(&RatQ::q_pow(n)));
    }
}

/// T_i(x v) = T_i(x) T_i(v): the algebra and module braid operators are compatible.
#[test]
fn braid_operators_are_covariant() {
    for (t, l) in [("A1", vec![1]), ("A1", vec![2]), ("A2", vec![1, 1]), ("B2", vec![1, 1]), ("G2", vec![1, 0])] {
        let cd = CartanData::preset(t).unwrap();
        let u = Uq::new(cd.clone());
        let m = HWModule::build(&cd, &Weight(l), Depth::Full).unwrap();
        let vs = all_basis_vectors(&m);
        for i in 0..cd.rank() {
            for inv in [false, true] {
                for x in generators(cd.rank()) {
                    let tx = u.braid_t(i, inv, &x);
                    for v in &vs {
                        let lhs = m.braid_vector(i, inv, &m.act(&x, v).unwrap()).unwrap();
                        let rhs = m.act(&tx, &m.braid_vector(i, inv, v).unwrap()).unwrap();
                        assert_eq!(lhs, rhs, "{t} i={i} inv={inv} x={x}");
                    }
                }
                // mutually inverse on the module
                for v in &vs {
                    let back = m.braid_vector(i, !inv, &m.braid_vector(i, inv, v).unwrap()).unwrap();
                    assert_eq!(&back, v);
                }
            }
        }
    }
}

/// b_{s_i u lambda} = T_i^{-1} b_{u lambda} along reduced words.
#[test]
fn extremal_vectors_match_inverse_braid_operators() {
    for (t, l) in [("A2", vec![1, 1]), ("B2", vec![1, 1])] {
        let cd = CartanData::preset(t).unwrap();
        let m = HWModule::build(&cd, &Weight(l), Depth::Full).unwrap();
        let w0 = longest_element(&cd).unwrap();
        for u in lower_interval(&cd, &w0) {
            let mut v = m.hw_vector();
            for &i in u.word().iter().rev() {
                v = m.braid_vector(i, true, &v).unwrap();
            }
            assert_eq!(v, m.extremal_vector(&u).unwrap(), "{t} u={u}");
        }
    }
}

#[test]
fn extremal_vectors_are_word_independent() {
    for (t, l) in [("A2", vec![1, 1]), ("A3", vec![1, 0, 1]), ("B2", vec![1, 1]), ("G2", vec![1, 0])] {
        let cd = CartanData::preset(t).unwrap();
        let m = HWModule::build(&cd, &Weight(l), Depth::Full).unwrap();
        let w0 = longest_element(&cd).unwrap();
        for u in lower_interval(&cd, &w0) {
            let b = m.extremal_vector(&u).unwrap();
            for w in reduced_words(&cd, &u) {
                assert_eq!(m.extremal_vector_word(&w).unwrap(), b, "{t} word {w:?}");
            }
            let xi = m.dual_functional(&u).unwrap();
            assert_eq!(pair(&xi, &b), RatQ::one());
        }
    }
}

#[test]
fn root_vectors_agree_across_reduced_words_in_modules() {
    // F_{beta} depends only on the prefix element; compare actions on L(rho)
    for t in ["A2", "B2"] {
        let cd = CartanData::preset(t).unwrap();
        let u = Uq::new(cd.clone());
        let w0 = longest_element(&cd).unwrap();
        for w in lower_interval(&cd, &w0) {
            let words = reduced_words(&cd, &w);
            for k in 1..=w.length() {
                let prefixes: Vec<Vec<usize>> = words.iter().map(|x| x[..k].to_vec()).collect();
                for p in &prefixes {
                    let pw = WeylElt::reduce(&cd, &p[..k - 1]).unwrap();
                    for q2 in &prefixes {
                        let qw = WeylElt::reduce(&cd, &q2[..k - 1]).unwrap();
                        if pw == qw && p[k - 1] == q2[k - 1] {
                            assert_eq!(
                                u.root_vector(p, k, true).unwrap(),
                                u.root_vector(q2, k, true).unwrap(),
                                "{t} {p:?} vs {q2:?}"
                            );
                        }
                    }
                }
            }
        }
    }
}

fn small_element(r: usize) -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0..4 * r, -2i64..3), 1..4)
}

fn build(u: &Uq, spec: &[(usize, i64)]) -> UqElement {
    let g = generators(u.rank());
    let mut acc = UqElement::one(u.rank());
    for &(k, c) in spec {
        acc = u.multiply(&acc, &g[k].add(&UqElement::scalar(u.rank(), RatQ::from_int(c))));
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiplication_is_associative(a in small_element(2), b in small_element(2), c in small_element(2)) {
        let u = Uq::new(CartanData::preset("A2").unwrap());
        let (x, y, z) = (build(&u, &a), build(&u, &b), build(&u, &c));
        prop_assert_eq!(u.multiply(&u.multiply(&x, &y), &z), u.multiply(&x, &u.multiply(&y, &z)));
    }

    #[test]
    fn tau_is_an_involutive_antiautomorphism(a in small_element(2), b in small_element(2)) {
        let u = Uq::new(CartanData::preset("B2").unwrap());
        let (x, y) = (build(&u, &a), build(&u, &b));
        prop_assert_eq!(u.tau(&u.tau(&x)), x.clone());
        prop_assert_eq!(u.tau(&u.multiply(&x, &y)), u.multiply(&u.tau(&y), &u.tau(&x)));
    }

    #[test]
    fn braid_inverse_law(a in small_element(2), i in 0usize..2) {
        let u = Uq::new(CartanData::preset("A2").unwrap());
        let x = build(&u, &a);
        prop_assert_eq!(u.braid_t(i, false, &u.braid_t(i, true, &x)), x);
    }
}

#[test]
fn tau_on_generators() {
    let u = Uq::new(CartanData::preset("A2").unwrap());
    assert_eq!(u.tau(&UqElement::e(2, 0)), UqElement::e(2, 0));
    assert_eq!(u.tau(&UqElement::k_i(2, 1, 1)), UqElement::k_i(2, 1, -1));
    assert_eq!(u.tau(&u.eword(&[0, 1])), u.eword(&[1, 0]));
}

#[test]
fn display_format() {
    let u = Uq::new(CartanData::preset("A2").unwrap());
    let x = u
        .multiply(&u.fword(&[0, 1]), &UqElement::k_i(2, 0, -1))
        .scale(&"q - q^-1".parse::<RatQ>().unwrap());
    assert_eq!(x.to_string(), "(q - q^-1) F1 F2 K1^-1");
}
