use std::sync::Arc;

use pzk_core::algebra::Fe;
use pzk_core::bsrs::BsrsIndex;
use pzk_core::masking::{
    audit_chi_square_masked, audit_exact_masked, masked_view_projections, random_codeword, rs_pcpp, run_masked_cheat,
    run_masked_real, run_masked_simulated, verify_direct, MaskMaliciousVerifier, MaskStrategy, MaskVerifier,
    SharedPcpp,
};
use pzk_core::protocol::{Namespace, ProtocolError, SeededCoins, Transcript, Verifier};
use serde_json::json;

use crate::args::{MaskArgs, Mode};
use crate::output::{
    audit_outcome, count_accepts, read_word, usage, with_jobs, word_json, CliError, Outcome, SweepRow,
};

const EXACT_BUDGET: usize = 8;

enum AnyVerifier {
    Honest(MaskVerifier),
    Malicious(MaskMaliciousVerifier),
}

impl Verifier for AnyVerifier {
    fn run(&self, t: &mut Transcript<'_>) -> Result<bool, ProtocolError> {
        match self {
            AnyVerifier::Honest(v) => v.run(t),
            AnyVerifier::Malicious(v) => v.run(t),
        }
    }
}

fn verifier(p: &SharedPcpp, name: &str) -> Result<AnyVerifier, CliError> {
    if name == "honest" {
        return Ok(AnyVerifier::Honest(MaskVerifier::new(p.clone())));
    }
    let names: Vec<&str> = MaskStrategy::ALL.iter().map(|s| s.name()).collect();
    MaskStrategy::from_name(name)
        .map(|s| AnyVerifier::Malicious(MaskMaliciousVerifier::new(s, p.as_ref())))
        .ok_or_else(|| usage(format!("unknown verifier `{name}`; expected honest or one of {}", names.join(", "))))
}

pub fn mask(a: &MaskArgs) -> Result<Outcome, CliError> {
    let idx = BsrsIndex::standard(a.e, a.dim_l, a.mu, a.k).map_err(usage)?;
    let mut rs = rs_pcpp(&idx).map_err(usage)?;
    if let Some(r) = a.reps {
        rs = rs.with_reps(r);
    }
    let reps = rs.reps();
    let p: SharedPcpp = Arc::new(rs);
    let f = p.field().clone();
    let n = p.input_len();
    let c = match &a.witness {
        Some(path) => read_word(&f, path, n)?,
        None => random_codeword(p.as_ref(), &mut SeededCoins::new(a.word_seed), Namespace::Prover)?,
    };
    let run = &a.run;
    let v = verifier(&p, &run.verifier)?;
    let id = format!("mask-rs/2^{}/dimL{}/mu{}/k{}/reps{}", a.e, a.dim_l, a.mu, a.k, reps);
    let mut base = json!({
        "command": "mask",
        "mode": run.mode.name(),
        "verifier": run.verifier,
        "instance": serde_json::from_str::<serde_json::Value>(&p.describe()).expect("instance JSON"),
        "input_len": n,
        "proof_len": p.proof_len(),
    });
    match run.mode {
        Mode::Honest if run.trials() == 1 => {
            let seed = run.seed()?;
            let exec = run_masked_real(&p, &c, &v, &mut SeededCoins::new(seed))?;
            base["seed"] = json!(seed);
            base["word"] = word_json(&f, &c);
            base["decision"] = json!(exec.decision);
            base["queries"] = json!(exec.view.query_counts());
            base["view"] = exec.view.to_json(&f);
            let ok = exec.decision || !run.honest_verifier();
            base["result"] = json!(if ok { "accepted" } else { "rejected" });
            Ok(Outcome::new(base, ok))
        }
        Mode::Honest => {
            if !run.honest_verifier() {
                return Err(usage("completeness sweeps use the honest verifier"));
            }
            let seed = run.seed()?;
            let trials = run.trials();
            let accepts = count_accepts(trials, seed, 0, run.jobs, |s| {
                Ok(run_masked_real(&p, &c, &v, &mut SeededCoins::new(s))?.decision)
            })?;
            base["seed"] = json!(seed);
            Ok(Outcome::sweep(base, SweepRow::completeness(id, trials, accepts)))
        }
        Mode::Cheat => {
            if !run.honest_verifier() {
                return Err(usage("cheat mode runs against the honest verifier"));
            }
            if !(0.0..=1.0).contains(&a.delta) {
                return Err(usage("--delta must lie in [0, 1]"));
            }
            let seed = run.seed()?;
            let trials = run.trials();
            let weight = (a.delta * n as f64).ceil() as usize;
            let order = f.order();
            let w: Vec<Fe> = c
                .iter()
                .enumerate()
                .map(|(i, &x)| if i < weight { f.add(x, f.elem(1 + i as u64 % (order - 1))) } else { x })
                .collect();
            let pi = p.prove(&c)?;
            let direct = count_accepts(trials, seed, 1, run.jobs, |s| {
                verify_direct(p.as_ref(), &w, &pi, &mut SeededCoins::new(s))
            })?;
            let eps = direct as f64 / trials as f64;
            let accepts = count_accepts(trials, seed, 0, run.jobs, |s| {
                Ok(run_masked_cheat(&p, &w, &c, &v, &mut SeededCoins::new(s))?.decision)
            })?;
            base["seed"] = json!(seed);
            base["corrupted"] = json!(weight);
            base["direct_acceptance"] = json!(eps);
            let bound = (eps + 1.0 / order as f64).min(1.0);
            Ok(Outcome::sweep(base, SweepRow::soundness(id, trials, accepts, bound)))
        }
        Mode::Simulate => {
            let seed = run.seed()?;
            let sim = run_masked_simulated(&p, &c, &v, &mut SeededCoins::new(seed))?;
            base["seed"] = json!(seed);
            base["decision"] = json!(sim.exec.decision);
            base["simulator_queries"] = json!(sim.simulator_queries());
            base["verifier_queries"] = json!(sim.verifier_queries());
            base["view"] = sim.exec.view.to_json(&f);
            base["result"] = json!("simulated");
            Ok(Outcome::new(base, true))
        }
        Mode::AuditExact => {
            let report = audit_exact_masked(&p, &c, &v, EXACT_BUDGET, run.max_paths)?;
            Ok(audit_outcome(base, "exact", &report))
        }
        Mode::AuditChi2 => {
            let seed = run.seed()?;
            base["seed"] = json!(seed);
            let report = with_jobs(run.jobs, || {
                audit_chi_square_masked(&p, &c, &v, run.samples, run.alpha, seed, 3, masked_view_projections)
            })??;
            Ok(audit_outcome(base, "chi2", &report))
        }
    }
}
