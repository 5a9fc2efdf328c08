use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ::scpir::scpir::{self as sc, Method, Scheme};
use ::scpir::{sda, Error};

fn check_scheme(scheme: &Scheme, seed: u64) {
    let k = scheme.k();
    let (n, m) = (scheme.plan.n, scheme.plan.m);
    let l = scheme.layout.file_len;
    for s in 1..=n {
        assert_eq!(scheme.plan.stored_symbols(&scheme.layout, s) * n, m * k * l);
    }
    assert_eq!(sc::subpacketization(&scheme.layout), scheme.sda.eta() * (m - 1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for theta in 1..=k {
        let bases = sc::random_bases(&scheme.layout, k, &mut rng);
        let t = sc::retrieve(theta, &scheme.plan, &scheme.layout, &scheme.library, &bases).unwrap();
        assert_eq!(t.decoded_file, scheme.library.file(theta).unwrap());
        assert_eq!(t.groups.len(), scheme.layout.groups.len());
        for (g, layout) in t.groups.iter().zip(&scheme.layout.groups) {
            assert!(g.exchanges.iter().filter(|e| e.silent).count() <= 1);
            assert_eq!(g.servers, layout.servers);
        }
    }
}

#[test]
fn greedy_schemes_retrieve() {
    for n in 2..=8 {
        for m in 2..=n {
            for k in 1..=2 {
                let scheme = Scheme::build(n, m, k, 1, Method::Greedy, (n * m) as u64).unwrap();
                check_scheme(&scheme, 3);
            }
        }
    }
}

#[test]
fn other_methods_retrieve() {
    for (n, m) in [(12, 5), (9, 3), (6, 4)] {
        check_scheme(&Scheme::build(n, m, 2, 2, Method::Equal, 1).unwrap(), 1);
    }
    for (n, m) in [(11, 5), (9, 4), (7, 3), (14, 5)] {
        check_scheme(&Scheme::build(n, m, 3, 1, Method::Improved, 2).unwrap(), 2);
    }
}

#[test]
fn transcript_serializes() {
    let scheme = Scheme::build(4, 2, 2, 1, Method::Greedy, 0).unwrap();
    let bases = sc::random_bases(&scheme.layout, 2, &mut ChaCha8Rng::seed_from_u64(0));
    let t = sc::retrieve(2, &scheme.plan, &scheme.layout, &scheme.library, &bases).unwrap();
    let v: serde_json::Value = serde_json::to_value(&t).unwrap();
    assert_eq!(v["theta"], 2);
    assert_eq!(v["groups"].as_array().unwrap().len(), 2);
    assert!(v["groups"][0]["exchanges"][0].get("silent").is_some());
    assert!(v.get("decoded_file").is_none());
}

#[test]
fn degenerate_storage_is_refused() {
    assert_eq!(
        Scheme::build(5, 1, 2, 1, Method::Greedy, 0).unwrap_err(),
        Error::DegenerateRetrieval
    );
    let alpha = sda::build_greedy(5, 1).unwrap().column_profile().alpha();
    assert!(sc::plan_storage(&alpha, 2, 5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn random_instances((n, m) in (2usize..=12).prop_flat_map(|n| (Just(n), 2..=n)),
                        k in 1usize..=3, l_mult in 1usize..=2, seed: u64) {
        let scheme = Scheme::build(n, m, k, l_mult, Method::Greedy, seed).unwrap();
        check_scheme(&scheme, seed);
    }
}
