use std::collections::BTreeMap;

use super::*;
use crate::bsrs::BsrsIndex;
use crate::detect::brute_force_detect;
use crate::protocol::SeededCoins;

fn micro_rs() -> RsPcpp {
    rs_pcpp(&BsrsIndex::standard(4, 3, 2, 5).unwrap()).unwrap()
}

fn shared(p: impl LinearPcpp + 'static) -> SharedPcpp {
    Arc::new(p)
}

fn recursive_rs() -> RsPcpp {
    rs_pcpp(&BsrsIndex::standard(6, 5, 1, 3).unwrap()).unwrap()
}

fn small_ers(h: &[Fe]) -> ErsPcpp {
    let idx = BsrsIndex::standard(5, 4, 1, 3).unwrap();
    ers_pcpp(&idx, &idx, h).unwrap()
}

fn codeword(p: &dyn LinearPcpp, seed: u64) -> Vec<Fe> {
    random_codeword(p, &mut SeededCoins::new(seed), Namespace::Prover).unwrap()
}

#[test]
fn micro_rs_shapes() {
    let p = micro_rs();
    assert_eq!((p.input_len(), p.proof_len(), p.code_dim()), (8, 24, 2));
    assert!(p.root().is_base());
    let r = recursive_rs();
    assert_eq!((r.input_len(), r.code_dim()), (32, 16));
    assert!(!r.root().is_base());
}

#[test]
fn codewords_pass_the_direct_test() {
    for p in [shared(micro_rs()), shared(recursive_rs()), shared(small_ers(&[Fe(16), Fe(17)]))] {
        for seed in 0..10 {
            let w = codeword(p.as_ref(), seed);
            let pi = p.prove(&w).unwrap();
            assert!(verify_direct(p.as_ref(), &w, &pi, &mut SeededCoins::new(seed)).unwrap());
        }
    }
}

#[test]
fn corrupted_proofs_are_caught() {
    let p = recursive_rs();
    let w = codeword(&p, 1);
    let mut pi = p.prove(&w).unwrap();
    for x in pi.iter_mut() {
        *x = p.field().add(*x, Fe(1));
    }
    let accepted = (0..50).filter(|&s| verify_direct(&p, &w, &pi, &mut SeededCoins::new(s)).unwrap()).count();
    assert_eq!(accepted, 0);
}

#[test]
fn proof_maps_are_linear() {
    for p in [shared(micro_rs()), shared(recursive_rs()), shared(small_ers(&[Fe(16), Fe(17)]))] {
        assert_eq!(linearity_failures(p.as_ref(), 100, &mut SeededCoins::new(5)).unwrap(), 0);
    }
}

#[test]
fn masked_word_is_uniform_for_every_challenge() {
    let p = micro_rs();
    let f = p.field().clone();
    let code = LinearCode::new(&f, code_generators(&p).unwrap()).unwrap();
    let all = code.codewords();
    assert_eq!(all.len(), 256);
    let w = codeword(&p, 3);
    for rho in f.elements() {
        let mut hits: BTreeMap<Vec<Fe>, usize> = BTreeMap::new();
        for z in &all {
            *hits.entry(scaled_sum(&f, rho, &w, z)).or_default() += 1;
        }
        assert_eq!(hits.len(), 256);
        assert!(hits.values().all(|&c| c == 1));
        assert!(hits.keys().all(|k| all.contains(k)));
    }
}

/// `c + e` with `e` nonzero on the first `weight` positions.
fn corrupt(f: &Field, c: &[Fe], weight: usize, shift: u64) -> Vec<Fe> {
    c.iter()
        .enumerate()
        .map(|(i, &x)| if i < weight { f.add(x, f.elem(1 + (shift + i as u64) % 15)) } else { x })
        .collect()
}

#[test]
fn bad_challenge_is_unique_for_far_words() {
    let p = micro_rs();
    let f = p.field().clone();
    let code = LinearCode::new(&f, code_generators(&p).unwrap()).unwrap();
    let all = code.codewords();
    let mut checked = 0;
    for radius in [1usize, 2] {
        for weight in 2 * radius + 1..=6 {
            for shift in 0..3 {
                let w = corrupt(&f, &all[shift as usize * 37 % 256], weight, shift);
                let dist = distance_to_code(&w, &all);
                if dist <= 2 * radius {
                    continue;
                }
                for z in &all {
                    assert!(close_challenges(&code, &f, &w, z, radius).len() <= 1, "radius {radius}, distance {dist}");
                }
                checked += 1;
            }
        }
    }
    assert!(checked >= 8, "{checked}");
}

#[test]
fn two_bad_challenges_at_exactly_twice_the_radius() {
    let p = micro_rs();
    let f = p.field().clone();
    let code = LinearCode::new(&f, code_generators(&p).unwrap()).unwrap();
    let mut w = vec![Fe(0); 8];
    w[0] = Fe(3);
    w[1] = Fe(5);
    let mut z = vec![Fe(0); 8];
    z[0] = f.neg(Fe(3));
    assert_eq!(distance_to_code(&w, &code.codewords()), 2);
    assert_eq!(close_challenges(&code, &f, &w, &z, 1), vec![Fe(0), Fe(1)]);
}

#[test]
fn honest_masked_runs_accept_and_simulations_account_for_queries() {
    for p in [shared(micro_rs()), shared(recursive_rs()), shared(small_ers(&[Fe(16), Fe(17)]))] {
        let v = MaskVerifier::new(p.clone());
        for seed in 0..5 {
            let w = codeword(p.as_ref(), 100 + seed);
            let real = run_masked_real(&p, &w, &v, &mut SeededCoins::new(seed)).unwrap();
            assert!(real.decision);
            let sim = run_masked_simulated(&p, &w, &v, &mut SeededCoins::new(seed)).unwrap();
            assert!(sim.exec.decision);
            assert_eq!(sim.simulator_queries(), sim.verifier_queries());
            let padding = sim.w_log.iter().filter(|r| r.padding).count();
            assert_eq!(padding, sim.exec.counts.get(ORACLE_PROOF).copied().unwrap_or(0));
        }
    }
}

#[test]
fn proof_before_challenge_is_a_shape_error_in_both_worlds() {
    let p = shared(micro_rs());
    let w = codeword(p.as_ref(), 1);
    let early = |t: &mut Transcript<'_>| -> Result<bool, ProtocolError> {
        t.receive(0)?;
        t.query(ORACLE_PROOF, QueryPoint::Index(0))?;
        Ok(true)
    };
    let real = run_masked_real(&p, &w, &early, &mut SeededCoins::new(0));
    let sim = run_masked_simulated(&p, &w, &early, &mut SeededCoins::new(0));
    assert!(matches!(real, Err(ProtocolError::Shape(_))));
    assert!(matches!(sim, Err(ProtocolError::Shape(_))));
}

#[test]
fn exact_audit_on_micro_instance() {
    let p = shared(micro_rs());
    let w = codeword(p.as_ref(), 7);
    for s in MaskStrategy::ALL {
        let v = MaskMaliciousVerifier::new(s, p.as_ref());
        let r = audit_exact_masked(&p, &w, &v, 8, 1_000_000).unwrap();
        assert!(r.equal, "{}", s.name());
        assert!(r.support_size >= 16, "{}: {}", s.name(), r.support_size);
    }
}

#[test]
fn exact_audit_with_a_single_pass_honest_verifier() {
    let p = shared(micro_rs().with_reps(1));
    let w = codeword(p.as_ref(), 8);
    let v = MaskVerifier::new(p.clone());
    let r = audit_exact_masked(&p, &w, &v, 8, 1_000_000).unwrap();
    assert!(r.equal);
    assert_eq!(r.paths.0, 16 * 16 * 256);
}

#[test]
fn exact_audit_detects_an_unmasked_prover() {
    let p = shared(micro_rs());
    let w = codeword(p.as_ref(), 9);
    let zero = vec![Fe(0); p.input_len()];
    let v = MaskMaliciousVerifier::new(MaskStrategy::PeekBeforeChallenge, p.as_ref());
    let r = audit_exact(
        8,
        1_000_000,
        |c: &mut EnumCoins| {
            let mut prover = MaskProver::with_mask(p.clone(), w.clone(), zero.clone());
            Ok(run_interactive(p.field(), p.describe(), &v, &mut prover, c)?.view.canonical())
        },
        |c: &mut EnumCoins| Ok(run_masked_simulated(&p, &w, &v, c)?.exec.view.canonical()),
    )
    .unwrap();
    assert!(!r.equal);
}

#[test]
fn chi_square_audit_on_recursive_instance() {
    let p = shared(recursive_rs().with_reps(2));
    let w = codeword(p.as_ref(), 11);
    let v = MaskVerifier::new(p.clone());
    let r = audit_chi_square_masked(&p, &w, &v, 4000, 0.001, 3, 3, masked_view_projections).unwrap();
    assert!(r.equal);
}

/// Standalone acceptance of `c + e` with the proof of `c`.
fn direct_acceptance(p: &dyn LinearPcpp, c: &[Fe], w: &[Fe], runs: u64) -> f64 {
    let pi = p.prove(c).unwrap();
    (0..runs).filter(|&s| verify_direct(p, w, &pi, &mut SeededCoins::new(s)).unwrap()).count() as f64 / runs as f64
}

#[test]
fn far_words_are_rejected_up_to_the_masked_bound() {
    let base = micro_rs();
    let f = base.field().clone();
    let c = codeword(&base, 21);
    let w = corrupt(&f, &c, 3, 0);
    let reps = (1..=8).find(|&r| direct_acceptance(&micro_rs().with_reps(r), &c, &w, 400) <= 0.5).unwrap();
    let p = shared(micro_rs().with_reps(reps));
    let v = MaskVerifier::new(p.clone());
    let runs = 1000;
    let wins =
        (0..runs).filter(|&s| run_masked_cheat(&p, &w, &c, &v, &mut SeededCoins::new(s)).unwrap().decision).count();
    let bound = 0.5 + 1.0 / f.order() as f64;
    let sigma = crate::stats::binomial_sigma(bound, runs);
    assert!(wins as f64 / runs as f64 <= bound + 3.0 * sigma, "{wins} / {runs} with {reps} passes");
}

#[test]
fn ers_division_and_refusal() {
    let p = small_ers(&[Fe(16), Fe(17)]);
    assert_eq!(p.degrees(), (8, 10));
    let f = p.field().clone();
    let w = codeword(&p, 2);
    let w1p = p.divide(&w[16..]).unwrap();
    let pts: Vec<(Fe, Fe)> = p.domain().iter().copied().zip(w1p.iter().copied()).collect();
    let q = UniPoly::interpolate(&f, &pts).unwrap().trimmed();
    assert!(q.degree().unwrap_or(0) < 8);
    let mut bad = w.clone();
    // w1 = 1 does not vanish on H
    for x in bad[16..].iter_mut() {
        *x = Fe(1);
    }
    assert!(matches!(p.prove(&bad), Err(ProtocolError::Invalid(_))));
    assert!(ers_pcpp(
        &BsrsIndex::standard(5, 4, 1, 3).unwrap(),
        &BsrsIndex::standard(5, 4, 1, 3).unwrap(),
        &[Fe(16), Fe(17), Fe(18)]
    )
    .is_err());
}

#[test]
fn ers_with_h_inside_l() {
    // L is all of F_16, so Z_H vanishes on two positions of w1
    let idx = BsrsIndex::standard(4, 4, 1, 3).unwrap();
    let p = shared(ers_pcpp(&idx, &idx, &[Fe(2), Fe(7)]).unwrap());
    let v = MaskVerifier::new(p.clone());
    for seed in 0..3 {
        let w = codeword(p.as_ref(), seed);
        assert!(run_masked_real(&p, &w, &v, &mut SeededCoins::new(seed)).unwrap().decision);
        assert!(run_masked_simulated(&p, &w, &v, &mut SeededCoins::new(seed)).unwrap().exec.decision);
    }
}

#[test]
fn ers_detector_matches_brute_force() {
    use rand::{Rng, SeedableRng};
    for h in [vec![Fe(16), Fe(17)], vec![Fe(2)]] {
        let p = small_ers(&h);
        let code = p.code().clone();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let k = rng.gen_range(1..=12);
            let mut pos = rand::seq::index::sample(&mut rng, code.len(), k).into_vec();
            if rng.gen_bool(0.5) {
                // a w1 position with its w1' partner
                let p0 = (code.len() - 48) / 2;
                let x = rng.gen_range(0..16);
                pos.extend([16 + x, 32 + p0 + x]);
            }
            pos.sort_unstable();
            pos.dedup();
            let qp: Vec<QueryPoint> = pos.iter().map(|&i| QueryPoint::Index(i)).collect();
            let got = code.detect(&qp).unwrap();
            let want = brute_force_detect(p.field(), code.generators(), &pos).unwrap();
            assert!(got.same_span(p.field(), &want), "{pos:?}");
        }
    }
}

#[test]
fn ers_links_catch_an_inconsistent_quotient() {
    let p = small_ers(&[Fe(16), Fe(17)]).with_reps(0, 8);
    let w = codeword(&p, 4);
    let other = codeword(&p, 5);
    let mut pi = p.prove(&w).unwrap();
    let pi_other = p.prove(&other).unwrap();
    let p0 = (pi.len() - 16) / 2;
    pi[p0..p0 + 16].copy_from_slice(&pi_other[p0..p0 + 16]);
    let accepted = (0..100).filter(|&s| verify_direct(&p, &w, &pi, &mut SeededCoins::new(s)).unwrap()).count();
    assert!(accepted <= 5, "{accepted}");
}
