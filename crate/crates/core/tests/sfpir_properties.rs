use std::collections::HashMap;

use proptest::prelude::*;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scpir::sfpir::{self, Answer, BaseVector, GroupStorage};
use scpir::symbols::Packet;

fn storage(m: usize, k: usize, len: usize, seed: u64) -> GroupStorage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let files = (0..k)
        .map(|_| {
            (0..m - 1)
                .map(|_| {
                    let mut b = vec![0u8; len];
                    rng.fill_bytes(&mut b);
                    Packet::new(b)
                })
                .collect()
        })
        .collect();
    GroupStorage::new(m, files).unwrap()
}

fn answers(theta: usize, base: &BaseVector, st: &GroupStorage) -> Vec<Answer> {
    sfpir::make_queries(theta, base, st.m())
        .unwrap()
        .iter()
        .map(|q| sfpir::answer(q, st))
        .collect()
}

#[test]
fn exhaustive_decoding() {
    for m in 2..=6 {
        for k in 1..=3 {
            let st = storage(m, k, 3, (m * 10 + k) as u64);
            for theta in 1..=k {
                for base in sfpir::enumerate_realizations(m, k).unwrap() {
                    let got = sfpir::decode(theta, &base, &answers(theta, &base, &st)).unwrap();
                    assert_eq!(got, st.file_packets(theta - 1), "M={m} K={k} theta={theta} {base:?}");
                }
            }
        }
    }
}

#[test]
fn non_silent_count_over_realizations() {
    for m in 2..=6 {
        for k in 1..=3 {
            let st = storage(m, k, 1, 0);
            for theta in 1..=k {
                let total: usize = sfpir::enumerate_realizations(m, k)
                    .unwrap()
                    .map(|b| answers(theta, &b, &st).iter().filter(|a| !a.is_silent()).count())
                    .sum();
                assert_eq!(total, m.pow(k as u32 + 1) - m);
            }
        }
    }
}

#[test]
fn each_server_sees_every_query_once() {
    for m in 2..=6 {
        for k in 1..=3 {
            for theta in 1..=k {
                let mut seen: Vec<HashMap<Vec<usize>, usize>> = vec![HashMap::new(); m];
                for base in sfpir::enumerate_realizations(m, k).unwrap() {
                    for (s, q) in sfpir::make_queries(theta, &base, m).unwrap().into_iter().enumerate() {
                        *seen[s].entry(q.0).or_default() += 1;
                    }
                }
                for s in &seen {
                    assert_eq!(s.len(), m.pow(k as u32));
                    assert!(s.values().all(|&c| c == 1));
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn random_runs_decode(m in 2usize..8, k in 1usize..5, len in 1usize..6, seed: u64, pick: u64) {
        let st = storage(m, k, len, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let base = BaseVector::random(m, k, &mut rng);
        let theta = 1 + (pick as usize) % k;
        let ans = answers(theta, &base, &st);
        prop_assert!(ans.iter().filter(|a| a.is_silent()).count() <= 1);
        prop_assert_eq!(sfpir::decode(theta, &base, &ans).unwrap(), st.file_packets(theta - 1));
    }
}
