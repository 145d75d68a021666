use std::sync::Arc;

use pzk_core::algebra::{Fe, Field};
use pzk_core::lacsp::{
    audit_exact_rlacsp, run_lacsp, run_rlacsp_real, run_rlacsp_simulated, toy_rlacsp, LacspVerifier, RlacspInstance,
    RlacspMalicious, RlacspStrategy, TESTER_REPS,
};
use pzk_core::protocol::{audit_chi_square, Namespace, ProtocolError, SeededCoins, Transcript, Verifier, View};
use serde_json::json;

use crate::args::{LacspArgs, Mode};
use crate::output::{
    audit_outcome, count_accepts, read_word, usage, with_jobs, word_json, CliError, Outcome, SweepRow,
};

const EXACT_BUDGET: usize = 8;

enum AnyVerifier {
    Honest(LacspVerifier),
    Malicious(RlacspMalicious),
}

impl Verifier for AnyVerifier {
    fn run(&self, t: &mut Transcript<'_>) -> Result<bool, ProtocolError> {
        match self {
            AnyVerifier::Honest(v) => v.run(t),
            AnyVerifier::Malicious(v) => v.run(t),
        }
    }
}

/// The first two answers and the decision.
fn projections(view: &View) -> Vec<String> {
    let answer = |k: usize| view.queries.get(k).map_or("-".to_string(), |q| format!("{}={}", q.point, q.answer.0));
    vec![answer(0), answer(1), format!("{:?}", view.decision)]
}

pub fn lacsp(a: &LacspArgs) -> Result<Outcome, CliError> {
    let (q, ell, d) = if a.micro { (5, 4, 2) } else { (a.field, a.ell, a.d) };
    let f = Field::prime(q).map_err(usage)?;
    let inst: Arc<RlacspInstance> = Arc::new(toy_rlacsp(&f, ell, d).map_err(usage)?);
    let w0 = match &a.witness {
        Some(path) => read_word(&f, path, ell)?,
        None => inst.base.c0.random(&mut SeededCoins::new(a.word_seed), Namespace::Prover)?,
    };
    if !inst.base.c0.contains(&w0) {
        return Err(usage("the witness is not a codeword of C0"));
    }
    let run = &a.run;
    let reps = a.reps.unwrap_or(TESTER_REPS);
    let honest = LacspVerifier::new(&inst.base).with_reps(reps);
    let v = match run.verifier.as_str() {
        "honest" => AnyVerifier::Honest(honest.clone()),
        name => {
            let names: Vec<&str> = RlacspStrategy::ALL.iter().map(|s| s.name()).collect();
            let s = RlacspStrategy::from_name(name).ok_or_else(|| {
                usage(format!("unknown verifier `{name}`; expected honest or one of {}", names.join(", ")))
            })?;
            AnyVerifier::Malicious(RlacspMalicious { strategy: s, len: ell })
        }
    };
    let id = format!("lacsp/F{q}/l{ell}/d{d}/reps{reps}");
    let mut base = json!({
        "command": "lacsp",
        "mode": run.mode.name(),
        "verifier": run.verifier,
        "instance": serde_json::from_str::<serde_json::Value>(&inst.describe()).expect("instance JSON"),
        "tau": inst.base.tau(),
        "query_bound": inst.query_bound(),
    });
    match run.mode {
        Mode::Honest if run.trials() == 1 => {
            let seed = run.seed()?;
            let exec = run_rlacsp_real(&inst, &w0, &v, &mut SeededCoins::new(seed))?;
            base["seed"] = json!(seed);
            base["w0"] = word_json(&f, &w0);
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
                Ok(run_rlacsp_real(&inst, &w0, &v, &mut SeededCoins::new(s))?.decision)
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
            let weight = (a.delta * ell as f64).ceil() as usize;
            let far: Vec<Fe> =
                w0.iter().enumerate().map(|(i, &x)| if i < weight { f.add(x, f.one()) } else { x }).collect();
            let tester = honest.clone().tester_only();
            let direct = count_accepts(trials, seed, 1, run.jobs, |s| {
                Ok(run_lacsp(&inst.base, &far, &w0, &tester, &mut SeededCoins::new(s))?.decision)
            })?;
            let eps = direct as f64 / trials as f64;
            let delta = weight as f64 / ell as f64;
            let accepts = count_accepts(trials, seed, 0, run.jobs, |s| {
                Ok(run_lacsp(&inst.base, &far, &w0, &honest, &mut SeededCoins::new(s))?.decision)
            })?;
            base["seed"] = json!(seed);
            base["corrupted"] = json!(weight);
            base["tester_acceptance"] = json!(eps);
            let bound = inst.base.soundness_bound(eps, delta).min(1.0);
            Ok(Outcome::sweep(base, SweepRow::soundness(id, trials, accepts, bound)))
        }
        Mode::Simulate => {
            let seed = run.seed()?;
            let sim = run_rlacsp_simulated(&inst, &v, &mut SeededCoins::new(seed))?;
            base["seed"] = json!(seed);
            base["decision"] = json!(sim.exec.decision);
            base["footprint"] = json!(sim.footprint);
            base["t"] = json!(inst.t());
            base["view"] = sim.exec.view.to_json(&f);
            base["result"] = json!("simulated");
            Ok(Outcome::new(base, true))
        }
        Mode::AuditExact => {
            let report = audit_exact_rlacsp(&inst, &w0, &v, EXACT_BUDGET, run.max_paths)?;
            Ok(audit_outcome(base, "exact", &report))
        }
        Mode::AuditChi2 => {
            let seed = run.seed()?;
            base["seed"] = json!(seed);
            let report = with_jobs(run.jobs, || {
                audit_chi_square(
                    run.samples,
                    run.alpha,
                    seed,
                    3,
                    |s| Ok(projections(&run_rlacsp_real(&inst, &w0, &v, &mut SeededCoins::new(s))?.view)),
                    |s| Ok(projections(&run_rlacsp_simulated(&inst, &v, &mut SeededCoins::new(s))?.exec.view)),
                )
            })??;
            Ok(audit_outcome(base, "chi2", &report))
        }
    }
}
