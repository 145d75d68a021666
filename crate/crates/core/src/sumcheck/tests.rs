use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;

use super::*;
use crate::algebra::{DenseMultiPoly, Fe, Field, MultiPoly};
use crate::protocol::{enumerate, replay, run_interactive, CoinError, EnumCoins, Namespace, SeededCoins};

fn poly(f: &Field, m: usize, d: usize, terms: &[(&[u32], u64)]) -> MultiPoly {
    MultiPoly::from_terms(f, m, d, terms.iter().map(|(e, c)| (e.to_vec(), f.elem(*c)))).unwrap()
}

fn bits() -> Vec<Fe> {
    vec![Fe(0), Fe(1)]
}

/// F = 1 + 2X over F_5, summing to 4 on {0, 1}.
fn micro() -> Arc<SumcheckInstance> {
    let f = Field::prime(5).unwrap();
    let p = poly(&f, 1, 2, &[(&[0], 1), (&[1], 2)]);
    Arc::new(SumcheckInstance::new(&f, 1, 2, bits(), Fe(4), Arc::new(p)).unwrap())
}

fn random_instance(q: u64, m: usize, d: usize, seed: u64) -> Arc<SumcheckInstance> {
    let f = Field::prime(q).unwrap();
    let mut coins = SeededCoins::new(seed);
    let coeffs: Vec<Fe> = (0..d.pow(m as u32)).map(|_| coins.draw_fe(Namespace::Prover, &f).unwrap()).collect();
    let p = DenseMultiPoly::new(m, d, coeffs);
    let v = p.partial_sum(&f, &[], &bits());
    Arc::new(SumcheckInstance::new(&f, m, d, bits(), v, Arc::new(p)).unwrap())
}

#[test]
fn instance_validation() {
    let f = Field::prime(5).unwrap();
    let p = Arc::new(poly(&f, 2, 2, &[(&[1, 1], 1)]));
    assert!(SumcheckInstance::new(&f, 2, 2, bits(), Fe(1), p.clone()).is_err());
    assert!(SumcheckInstance::new_unchecked(&f, 2, 2, bits(), Fe(1), p.clone()).is_ok());
    assert!(SumcheckInstance::new_unchecked(&f, 2, 0, bits(), Fe(1), p.clone()).is_err());
    assert!(SumcheckInstance::new_unchecked(&f, 2, 2, vec![Fe(1), Fe(1)], Fe(1), p.clone()).is_err());
    assert!(SumcheckInstance::new_unchecked(&f, 3, 2, bits(), Fe(1), p).is_err());
}

#[test]
fn instance_json_roundtrip() {
    let v = serde_json::json!({
        "field": "17", "m": 2, "d": 2, "H": ["0", "1"], "v": "1",
        "poly": {"terms": [{"exp": [1, 1], "coeff": "1"}]}
    });
    let inst = SumcheckInstance::from_json(&v).unwrap();
    assert!(inst.is_yes());
    assert_eq!(inst.public_input(), r#"{"H":["0","1"],"d":2,"field":"17","m":2,"v":"1"}"#);
}

#[test]
fn default_partial_sum_matches_closed_form() {
    struct Opaque(MultiPoly);
    impl PolyOracle for Opaque {
        fn num_vars(&self) -> usize {
            self.0.num_vars()
        }
        fn eval(&self, f: &Field, x: &[Fe]) -> Fe {
            self.0.eval(f, x).unwrap()
        }
    }
    let f = Field::prime(13).unwrap();
    let p = poly(&f, 3, 3, &[(&[2, 1, 0], 5), (&[0, 0, 2], 7), (&[1, 2, 1], 11), (&[0, 0, 0], 3)]);
    let h = vec![Fe(2), Fe(5), Fe(7)];
    let opaque = Opaque(p.clone());
    for prefix in [vec![], vec![Fe(4)], vec![Fe(4), Fe(9)], vec![Fe(1), Fe(2), Fe(3)]] {
        assert_eq!(PolyOracle::partial_sum(&opaque, &f, &prefix, &h), p.partial_sum(&f, &prefix, &h).unwrap());
    }
}

#[test]
fn classic_examples() {
    let f = Field::prime(5).unwrap();
    let p: Arc<dyn PolyOracle> = Arc::new(poly(&f, 2, 2, &[(&[1, 1], 1)]));
    for (v, accept) in [(1, true), (0, false)] {
        let inst = Arc::new(SumcheckInstance::new_unchecked(&f, 2, 2, bits(), Fe(v), p.clone()).unwrap());
        let exec = run_interactive(
            &f,
            inst.public_input(),
            &ClassicVerifier::new(&inst),
            &mut ClassicProver::new(inst.clone()),
            &mut SeededCoins::new(5),
        )
        .unwrap();
        assert_eq!(exec.decision, accept);
        if !accept {
            // rejected at the first round check, before any challenge
            assert_eq!(exec.view.rounds.len(), 1);
            assert!(exec.view.ledger.is_empty());
        }
    }
}

#[test]
fn classic_cheating_prover_rarely_wins() {
    let inst = random_instance(17, 2, 2, 1);
    let bad = Arc::new(inst.with_claim(inst.field.add(inst.v, Fe(1))));
    let trials = 500;
    let wins = (0..trials)
        .filter(|&s| {
            let mut coins = SeededCoins::new(s);
            let mut p = CheatingProver::new(bad.clone(), false, &mut coins).unwrap();
            run_interactive(&bad.field, bad.public_input(), &ClassicVerifier::new(&bad), &mut p, &mut coins)
                .unwrap()
                .decision
        })
        .count();
    let bound = (2.0 * 2.0) / 17.0;
    let sigma = crate::stats::binomial_sigma(bound, trials);
    assert!((wins as f64 / trials as f64) <= bound + 3.0 * sigma, "{wins}");
    assert!(wins > 0, "the cheating strategy should win sometimes");
}

#[test]
fn mask_examples() {
    let f = Field::prime(5).unwrap();
    // d = 1: 2a = 0 forces the zero mask with no coins drawn
    let paths = enumerate::<_, ProtocolError, _>(4, 10, |c| sample_mask_explicit(&f, 1, 1, &bits(), c)).unwrap();
    assert_eq!(paths.len(), 1);
    assert!(paths[0].0.coeffs.iter().all(|c| c.0 == 0));
    // d = 2: the five masks a + bX with 2a + b = 0, each with probability 1/5
    let paths = enumerate::<_, ProtocolError, _>(4, 100, |c| sample_mask_explicit(&f, 1, 2, &bits(), c)).unwrap();
    let mut dist: BTreeMap<Vec<Fe>, BigRational> = BTreeMap::new();
    for (p, w) in paths {
        assert_eq!(f.add(f.mul(Fe(2), p.coeffs[0]), p.coeffs[1]), Fe(0));
        *dist.entry(p.coeffs).or_insert_with(|| BigRational::from_integer(0.into())) += w;
    }
    assert_eq!(dist.len(), 5);
    assert!(dist.values().all(|w| *w == BigRational::new(1.into(), 5.into())));
}

#[test]
fn mask_frequencies_match_enumeration() {
    let f = Field::prime(5).unwrap();
    let support: Vec<Vec<Fe>> = (0..5).map(|a| vec![Fe(a), f.neg(f.mul(Fe(2), Fe(a)))]).collect();
    let report = crate::protocol::audit_chi_square(
        100_000,
        crate::protocol::CHI2_ALPHA,
        11,
        1,
        |s| Ok(vec![sample_mask_explicit(&f, 1, 2, &bits(), &mut SeededCoins::new(s))?.coeffs[0].0]),
        |s| Ok(vec![support[(s % 5) as usize][0].0]),
    )
    .unwrap();
    assert!(report.equal, "{:?}", report.projections[0].test);
}

#[test]
fn masks_always_sum_to_zero() {
    for (q, m, d, h) in
        [(7u64, 2, 3, vec![Fe(0), Fe(1)]), (11, 3, 2, vec![Fe(2), Fe(3), Fe(9)]), (5, 2, 2, vec![Fe(0)])]
    {
        let f = Field::prime(q).unwrap();
        for s in 0..20 {
            let r = sample_mask_explicit(&f, m, d, &h, &mut SeededCoins::new(s)).unwrap();
            assert_eq!(r.partial_sum(&f, &[], &h), Fe(0));
        }
    }
    // H = F_5 makes every power sum below 4 vanish, so no correction happens
    let f = Field::prime(5).unwrap();
    let h: Vec<Fe> = f.elements().collect();
    assert_eq!(designated_monomial(&f, 2, 3, &h), None);
}

#[test]
fn lazy_and_explicit_masks_agree_in_distribution() {
    // at one point and one partial sum, both masks are uniform and independent
    let f = Field::prime(5).unwrap();
    let run = |lazy: bool| {
        let paths = enumerate::<_, ProtocolError, _>(8, 10_000, |c: &mut EnumCoins| {
            let mut mask = if lazy {
                MaskOracle::Lazy(Box::new(zero_sum_session(&f, 2, 2, &bits())?))
            } else {
                MaskOracle::Explicit(sample_mask_explicit(&f, 2, 2, &bits(), c)?)
            };
            let a = mask.value(&f, &bits(), &[Fe(3)], c)?;
            let b = mask.value(&f, &bits(), &[Fe(2), Fe(4)], c)?;
            let z = mask.value(&f, &bits(), &[], c)?;
            Ok((a, b, z))
        })
        .unwrap();
        let mut dist: BTreeMap<(Fe, Fe, Fe), BigRational> = BTreeMap::new();
        for (k, w) in paths {
            *dist.entry(k).or_insert_with(|| BigRational::from_integer(0.into())) += w;
        }
        dist
    };
    assert_eq!(run(true), run(false));
}

#[test]
fn honest_runs_accept() {
    for seed in 0..50 {
        let inst = random_instance(17, 2, 2, seed);
        let exec = run_real(&inst, &PzkVerifier::new(&inst), &mut SeededCoins::new(seed)).unwrap();
        assert!(exec.decision, "seed {seed}");
        assert_eq!(exec.view.rounds.len(), 1 + 2 + 1);
    }
    let inst = random_instance(31, 3, 3, 9);
    assert!(run_real(&inst, &PzkVerifier::new(&inst), &mut SeededCoins::new(1)).unwrap().decision);
}

#[test]
fn simulated_runs_are_valid_transcripts() {
    for seed in 0..30 {
        let inst = random_instance(17, 2, 2, seed);
        let run = run_simulated(&inst, &PzkVerifier::new(&inst), &mut SeededCoins::new(seed)).unwrap();
        assert!(run.exec.decision);
        assert_eq!(run.simulator_queries(), run.verifier_queries());
        for m in run.exec.view.rounds.iter().filter(|m| m.to == crate::protocol::Party::Verifier) {
            assert_eq!(m.payload.len(), 2);
        }
    }
}

#[test]
fn simulator_handles_adversarial_challenges() {
    let inst = random_instance(17, 2, 2, 3);
    for strategy in MaliciousStrategy::ALL {
        let v = MaliciousVerifier::new(strategy, &inst);
        for seed in 0..10 {
            let run = run_simulated(&inst, &v, &mut SeededCoins::new(seed)).unwrap();
            assert_eq!(run.simulator_queries(), run.verifier_queries());
            let real = run_real(&inst, &v, &mut SeededCoins::new(seed)).unwrap();
            assert_eq!(real.view.rounds.len(), run.exec.view.rounds.len());
        }
    }
}

#[test]
fn exact_audit_on_micro_instance() {
    let inst = micro();
    for strategy in MaliciousStrategy::ALL {
        let v = MaliciousVerifier::new(strategy, &inst);
        let report = audit_exact_views(&inst, &v, 32, 100_000).unwrap();
        assert!(report.equal, "{}", strategy.name());
        assert!(report.support_size >= 5, "{}: {}", strategy.name(), report.support_size);
    }
}

#[test]
fn exact_audit_detects_a_leaky_prover() {
    // a prover whose mask is identically zero leaks F through pi
    let inst = micro();
    let v = MaliciousVerifier::new(MaliciousStrategy::PeekBeforeChallenge, &inst);
    let leaky = |c: &mut EnumCoins| -> Result<_, ProtocolError> {
        let zero = DenseMultiPoly::new(1, 2, vec![Fe(0), Fe(0)]);
        let mut p = PzkProver::with_mask(inst.clone(), MaskOracle::Explicit(zero));
        Ok(run_interactive(&inst.field, inst.public_input(), &v, &mut p, c)?.view.canonical())
    };
    let sim =
        |c: &mut EnumCoins| -> Result<_, ProtocolError> { Ok(run_simulated(&inst, &v, c)?.exec.view.canonical()) };
    assert!(!crate::protocol::audit_exact(32, 100_000, leaky, sim).unwrap().equal);
}

#[test]
fn exact_audit_with_a_small_honest_verifier() {
    let inst = micro();
    let v = PzkVerifier::new(&inst).with_reps(1, 1);
    let report = audit_exact_views(&inst, &v, 64, 2_000_000);
    match report {
        Ok(r) => assert!(r.equal),
        Err(ProtocolError::Coins(CoinError::TooManyPaths(_))) => panic!("path cap too small"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn views_replay_and_are_deterministic() {
    let inst = random_instance(17, 2, 2, 4);
    let v = PzkVerifier::new(&inst);
    let a = run_real(&inst, &v, &mut SeededCoins::new(77)).unwrap();
    let b = run_real(&inst, &v, &mut SeededCoins::new(77)).unwrap();
    assert_eq!(a.view.to_json(&inst.field).to_string(), b.view.to_json(&inst.field).to_string());
    assert_eq!(replay(&inst.field, &v, &a.view).unwrap().decision, a.decision);
}

#[test]
fn cheating_prover_soundness_smoke() {
    let f = Field::prime(17).unwrap();
    let one: Arc<dyn PolyOracle> = Arc::new(poly(&f, 1, 2, &[(&[0], 1)]));
    let inst = Arc::new(SumcheckInstance::new(&f, 1, 2, bits(), Fe(0), one).unwrap());
    let trials = 400;
    let wins = (0..trials)
        .filter(|&s| {
            let mut coins = SeededCoins::new(s);
            let mut p = CheatingProver::new(inst.clone(), true, &mut coins).unwrap();
            run_interactive(&f, inst.public_input(), &PzkVerifier::new(&inst), &mut p, &mut coins).unwrap().decision
        })
        .count();
    let rate = wins as f64 / trials as f64;
    assert!(rate > 0.03 && rate < 3.0 * 2.0 / 17.0, "{rate}");
}

#[test]
fn degree_test_catches_planted_corruption() {
    let inst = random_instance(17, 2, 2, 8);
    let v = PzkVerifier::new(&inst);
    let trials = 200;
    let rejects = (0..trials)
        .filter(|&s| {
            let mut coins = SeededCoins::new(s);
            let mut p = CorruptedProver::new(inst.clone(), 0.25, &mut coins).unwrap();
            assert_eq!(p.corrupted(), 72);
            !run_interactive(&inst.field, inst.public_input(), &v, &mut p, &mut coins).unwrap().decision
        })
        .count();
    assert!(rejects as f64 / trials as f64 >= 0.9, "{rejects}");
}
