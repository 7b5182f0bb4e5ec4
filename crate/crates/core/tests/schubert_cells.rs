use std::collections::BTreeMap;
use std::sync::Arc;

use oreset_core::cache::DiskCache;
use oreset_core::hwmod::ModuleStore;
use oreset_core::rootdata::{CartanData, Weight};
use oreset_core::schubert::SchubertCell;
use oreset_core::uq::Uq;
use oreset_core::weyl::{bruhat_leq, lower_interval, WeylElt};
use oreset_core::Verdict;

fn cell(t: &str, word: &[usize]) -> SchubertCell {
    let cd = CartanData::preset(t).unwrap();
    let uq = Arc::new(Uq::new(cd.clone()));
    let store = Arc::new(ModuleStore::new(cd, DiskCache::disabled()));
    SchubertCell::new(uq, store, word).unwrap()
}

#[test]
fn a2_longest_cell_checks() {
    let c = cell("A2", &[0, 1, 0]);
    let cd = c.cartan().clone();
    let elems = lower_interval(&cd, c.w());
    let mut ideals = BTreeMap::new();
    for u in &elems {
        let t = c.stabilized_ideal(u, 6, 1, 4).unwrap();
        assert!(t.stabilized_at.is_some(), "I({u}) did not stabilize");
        ideals.insert(u.clone(), t);
    }
    // the graded algebra is connected, so the largest H-prime is the augmentation ideal
    let top = &ideals[c.w()];
    for nu in c.degrees_up_to(6).into_iter().filter(|nu| nu.height() > 0) {
        assert_eq!(top.dims().get(&nu).copied().unwrap_or(0), c.pbw_basis(&nu).len(), "degree {nu:?}");
    }
    assert!(ideals[&WeylElt::identity(&cd)].dims().is_empty());

    let poset = c.poset_check(&ideals).unwrap();
    assert_eq!(poset.verdict, Verdict::Pass);

    let mut stated_failures = 0;
    for u in &elems {
        for i in 0..2 {
            for o in c.verify_normality_uw(u, &Weight::fundamental(2, i), &ideals[u]).unwrap() {
                assert_eq!(o.reversed_verdict, Verdict::Pass, "{} w{} generator {}", o.u, i + 1, o.generator);
                if o.verdict != Verdict::Pass {
                    stated_failures += 1;
                    assert!(u.length() <= 1, "stated sign failed at {u}");
                }
            }
        }
        let f = c.fund_generation_check(u).unwrap();
        assert!(f.pairs.iter().all(|p| p.n.is_some()), "{u}");
    }
    assert_eq!(stated_failures, 11);

    let mut n = 0;
    for a in &elems {
        for b in &elems {
            if a != b && bruhat_leq(&cd, a, b) {
                n += 1;
                let r = c.verify_separating_uw(a, b, &ideals).unwrap();
                assert_eq!(r.verdict, Verdict::Pass, "{a} <= {b}");
                // every u'' lies below w, so nothing needs separating under I_w(w)
                assert_eq!(r.witnesses.is_empty(), b == c.w(), "{a} <= {b}");
            }
        }
    }
    assert_eq!(n, 13);
}
