use std::path::Path;
use std::sync::Arc;

use pzk_core::algebra::{DenseMultiPoly, Fe, Field, MultiPoly};
use pzk_core::protocol::{run_interactive, Coins, Namespace, ProtocolError, SeededCoins, Transcript, Verifier};
use pzk_core::sharp3sat::{Cnf3, CountClaim};
use pzk_core::sumcheck::{
    audit_chi_square_views, audit_exact_views, field_label, honest_view_projections, run_real, run_simulated,
    CheatingProver, MaliciousStrategy, MaliciousVerifier, PzkVerifier, SumcheckInstance, LDT_REPS, SELF_CORRECT_TRIALS,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{Mode, RunArgs, Sharp3satArgs, SumcheckArgs, VerifierReps};
use crate::output::{audit_outcome, count_accepts, read_json, usage, with_jobs, CliError, Outcome, SweepRow};

/// Coin budget of one exact-audit path.
const EXACT_BUDGET: usize = 64;

enum AnyVerifier {
    Honest(PzkVerifier),
    Malicious(MaliciousVerifier),
}

impl Verifier for AnyVerifier {
    fn run(&self, t: &mut Transcript<'_>) -> Result<bool, ProtocolError> {
        match self {
            AnyVerifier::Honest(v) => v.run(t),
            AnyVerifier::Malicious(v) => v.run(t),
        }
    }
}

fn honest_verifier(inst: &SumcheckInstance, reps: VerifierReps) -> PzkVerifier {
    PzkVerifier::new(inst).with_reps(reps.ldt_reps.unwrap_or(LDT_REPS), reps.sc_trials.unwrap_or(SELF_CORRECT_TRIALS))
}

fn verifier(inst: &SumcheckInstance, name: &str, reps: VerifierReps) -> Result<AnyVerifier, CliError> {
    if name == "honest" {
        return Ok(AnyVerifier::Honest(honest_verifier(inst, reps)));
    }
    let names: Vec<&str> = MaliciousStrategy::ALL.iter().map(|s| s.name()).collect();
    MaliciousStrategy::from_name(name)
        .map(|s| AnyVerifier::Malicious(MaliciousVerifier::new(s, inst)))
        .ok_or_else(|| usage(format!("unknown verifier `{name}`; expected honest or one of {}", names.join(", "))))
}

/// The best cheating prover against the honest verifier.
fn cheat_run(inst: &Arc<SumcheckInstance>, v: &PzkVerifier, seed: u64) -> Result<bool, ProtocolError> {
    let mut coins = SeededCoins::new(seed);
    let mut p = CheatingProver::new(inst.clone(), true, &mut coins)?;
    Ok(run_interactive(&inst.field, inst.public_input(), v, &mut p, &mut coins)?.decision)
}

/// Runs `run.mode` on `inst`. In cheat mode `inst` carries the false claim
/// and acceptance is compared with `3md/|F|`.
fn run_modes(
    inst: &Arc<SumcheckInstance>,
    run: &RunArgs,
    reps: VerifierReps,
    id: String,
    mut base: Value,
) -> Result<Outcome, CliError> {
    let f = &inst.field;
    base["mode"] = json!(run.mode.name());
    base["verifier"] = json!(run.verifier);
    base["instance"] = serde_json::from_str(&inst.public_input()).expect("instance JSON");
    let v = verifier(inst, &run.verifier, reps)?;
    let honest = honest_verifier(inst, reps);
    match run.mode {
        Mode::Honest if run.trials() == 1 => {
            let seed = run.seed()?;
            let exec = run_real(inst, &v, &mut SeededCoins::new(seed))?;
            base["seed"] = json!(seed);
            base["decision"] = json!(exec.decision);
            base["queries"] = json!(exec.view.query_counts());
            base["view"] = exec.view.to_json(f);
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
                Ok(run_real(inst, &honest, &mut SeededCoins::new(s))?.decision)
            })?;
            base["seed"] = json!(seed);
            Ok(Outcome::sweep(base, SweepRow::completeness(id, trials, accepts)))
        }
        Mode::Cheat => {
            if !run.honest_verifier() {
                return Err(usage("cheat mode runs against the honest verifier"));
            }
            if inst.is_yes() {
                return Err(usage("cheat mode needs a false claim"));
            }
            let seed = run.seed()?;
            let trials = run.trials();
            let accepts = count_accepts(trials, seed, 0, run.jobs, |s| cheat_run(inst, &honest, s))?;
            let bound = 3.0 * (inst.m * inst.d) as f64 / f.order() as f64;
            base["seed"] = json!(seed);
            base["true_sum"] = json!(f.format(inst.true_sum()));
            Ok(Outcome::sweep(base, SweepRow::soundness(id, trials, accepts, bound)))
        }
        Mode::Simulate => {
            let seed = run.seed()?;
            let sim = run_simulated(inst, &v, &mut SeededCoins::new(seed))?;
            base["seed"] = json!(seed);
            base["decision"] = json!(sim.exec.decision);
            base["simulator_queries"] = json!(sim.simulator_queries());
            base["verifier_queries"] = json!(sim.verifier_queries());
            base["view"] = sim.exec.view.to_json(f);
            base["result"] = json!("simulated");
            Ok(Outcome::new(base, true))
        }
        Mode::AuditExact => {
            let report = audit_exact_views(inst, &v, EXACT_BUDGET, run.max_paths)?;
            Ok(audit_outcome(base, "exact", &report))
        }
        Mode::AuditChi2 => {
            let seed = run.seed()?;
            base["seed"] = json!(seed);
            let report = with_jobs(run.jobs, || {
                audit_chi_square_views(inst, &v, run.samples, run.alpha, seed, 4, honest_view_projections)
            })??;
            Ok(audit_outcome(base, "chi2", &report))
        }
    }
}

/// `F = 1 + 2X` over F_5.
fn micro_instance() -> Result<SumcheckInstance, CliError> {
    let f = Field::prime(5).map_err(usage)?;
    let p = MultiPoly::from_terms(&f, 1, 2, [(vec![0], Fe(1)), (vec![1], Fe(2))]).map_err(usage)?;
    SumcheckInstance::new(&f, 1, 2, vec![Fe(0), Fe(1)], Fe(4), Arc::new(p)).map_err(usage)
}

fn random_instance(q: u64, m: usize, d: usize, seed: u64) -> Result<SumcheckInstance, CliError> {
    let f = Field::prime(q).map_err(usage)?;
    let len = d.checked_pow(m as u32).filter(|&n| n <= 1 << 20).ok_or_else(|| usage("d^m exceeds 2^20"))?;
    let mut coins = SeededCoins::new(seed);
    let coeffs =
        (0..len).map(|_| coins.draw_fe(Namespace::Prover, &f)).collect::<Result<Vec<_>, _>>().map_err(usage)?;
    let p = DenseMultiPoly::new(m, d, coeffs);
    let h = vec![Fe(0), Fe(1)];
    let v = p.partial_sum(&f, &[], &h);
    SumcheckInstance::new(&f, m, d, h, v, Arc::new(p)).map_err(usage)
}

pub fn sumcheck(a: &SumcheckArgs) -> Result<Outcome, CliError> {
    let inst = if a.micro {
        micro_instance()?
    } else if let Some(path) = &a.instance {
        SumcheckInstance::from_json(&read_json(path)?).map_err(usage)?
    } else {
        random_instance(a.field.unwrap_or(17), a.m, a.d, a.poly_seed)?
    };
    let f = inst.field.clone();
    let truth = inst.true_sum();
    let claim = match (a.claim, a.run.mode) {
        (Some(c), _) if c >= f.order() => return Err(usage(format!("claim {c} is not an element of the field"))),
        (Some(c), _) => f.elem(c),
        (None, Mode::Cheat) => f.add(truth, f.one()),
        (None, _) => inst.v,
    };
    let inst = Arc::new(inst.with_claim(claim));
    let id = format!("sumcheck/F{}/m{}/d{}/v{}", field_label(&f), inst.m, inst.d, f.format(claim));
    run_modes(&inst, &a.run, a.reps, id, json!({ "command": "sumcheck" }))
}

fn load_cnf(a: &Sharp3satArgs) -> Result<Cnf3, CliError> {
    match (&a.cnf, a.random_n, a.random_c) {
        (Some(path), _, _) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", Path::new(path).display())))?;
            Cnf3::parse_dimacs(&text).map_err(usage)
        }
        (None, Some(n), Some(c)) => Cnf3::random(n, c, &mut ChaCha8Rng::seed_from_u64(a.formula_seed)).map_err(usage),
        _ => Err(usage("give --cnf or both --random-n and --random-c")),
    }
}

pub fn sharp3sat(a: &Sharp3satArgs) -> Result<Outcome, CliError> {
    let cnf = load_cnf(a)?;
    let models = cnf.count_models();
    let count = match (a.count, a.run.mode) {
        (Some(c), _) => c,
        (None, Mode::Cheat) if models < 1 << cnf.n => models + 1,
        (None, Mode::Cheat) => models - 1,
        (None, _) => models,
    };
    let (n, c) = (cnf.n, cnf.num_clauses());
    let claim =
        if a.unchecked { CountClaim::new_unchecked(cnf, count) } else { CountClaim::new(cnf, count) }.map_err(usage)?;
    let id = format!("sharp3sat/n{n}/c{c}/N{count}");
    let base = json!({ "command": "sharp3sat", "n": n, "clauses": c, "count": count, "models": models });
    run_modes(&claim.inst, &a.run, a.reps, id, base)
}
