use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde_json::{json, Value};

use crate::algebra::{Fe, Field};
use crate::detect::QueryPoint;

use super::coins::{Coins, EnumCoins, Namespace};
use super::ProtocolError;

/// Recipient of a message.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    Prover,
    Verifier,
}

impl Party {
    fn name(self) -> &'static str {
        match self {
            Party::Prover => "prover",
            Party::Verifier => "verifier",
        }
    }
}

/// One verifier coin. `value` is an index in `[0, range)`; field draws store
/// the element's index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LedgerEntry {
    pub label: String,
    pub range: u64,
    pub value: u64,
    pub field: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Message {
    pub to: Party,
    pub payload: Vec<Fe>,
}

/// A distinct oracle query. `round` is the number of messages exchanged
/// before the query was made.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QueryRecord {
    pub round: usize,
    pub oracle: String,
    pub point: QueryPoint,
    pub answer: Fe,
}

/// Everything the verifier sees during one execution.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct View {
    pub input: String,
    pub ledger: Vec<LedgerEntry>,
    pub rounds: Vec<Message>,
    pub queries: Vec<QueryRecord>,
    pub decision: Option<bool>,
}

impl View {
    /// The view with queries sorted inside each round. Two views are
    /// considered equal when their canonical forms are.
    pub fn canonical(mut self) -> View {
        self.queries.sort();
        self
    }

    pub fn to_json(&self, f: &Field) -> Value {
        let input: Value = serde_json::from_str(&self.input).unwrap_or(Value::String(self.input.clone()));
        let ledger: Vec<Value> = self
            .ledger
            .iter()
            .map(|e| {
                let value = if e.field { json!(f.format(f.elem(e.value))) } else { json!(e.value) };
                json!({"label": e.label, "value": value, "range": e.range})
            })
            .collect();
        let rounds: Vec<Value> = self
            .rounds
            .iter()
            .map(|m| json!({"to": m.to.name(), "payload": m.payload.iter().map(|&x| f.format(x)).collect::<Vec<_>>()}))
            .collect();
        let queries: Vec<Value> = self
            .queries
            .iter()
            .map(|q| {
                json!({"round": q.round, "oracle": q.oracle, "point": q.point.to_json(f), "answer": f.format(q.answer)})
            })
            .collect();
        json!({"input": input, "ledger": ledger, "rounds": rounds, "queries": queries, "decision": self.decision})
    }

    /// Inverse of [`View::to_json`].
    pub fn from_json(f: &Field, v: &Value) -> Result<View, ProtocolError> {
        let bad = |what: &str| ProtocolError::Shape(format!("view JSON: bad {what}"));
        let arr = |key: &str| v.get(key).and_then(Value::as_array).ok_or_else(|| bad(key));
        let fe = |x: &Value| -> Result<Fe, ProtocolError> {
            x.as_str().ok_or_else(|| bad("field element")).and_then(|s| Ok(f.parse(s)?))
        };
        let input = match v.get("input") {
            Some(Value::String(s)) => s.clone(),
            Some(other) => other.to_string(),
            None => String::new(),
        };
        let ledger = arr("ledger")?
            .iter()
            .map(|e| {
                let label = e.get("label").and_then(Value::as_str).ok_or_else(|| bad("label"))?.to_string();
                let range = e.get("range").and_then(Value::as_u64).ok_or_else(|| bad("range"))?;
                let raw = e.get("value").ok_or_else(|| bad("value"))?;
                let (value, field) = match raw {
                    Value::String(_) => (f.index(fe(raw)?), true),
                    _ => (raw.as_u64().ok_or_else(|| bad("value"))?, false),
                };
                Ok(LedgerEntry { label, range, value, field })
            })
            .collect::<Result<_, ProtocolError>>()?;
        let rounds = arr("rounds")?
            .iter()
            .map(|m| {
                let to = match m.get("to").and_then(Value::as_str) {
                    Some("prover") => Party::Prover,
                    Some("verifier") => Party::Verifier,
                    _ => return Err(bad("recipient")),
                };
                let payload = m
                    .get("payload")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("payload"))?
                    .iter()
                    .map(fe)
                    .collect::<Result<_, _>>()?;
                Ok(Message { to, payload })
            })
            .collect::<Result<_, ProtocolError>>()?;
        let queries = arr("queries")?
            .iter()
            .map(|q| {
                Ok(QueryRecord {
                    round: q.get("round").and_then(Value::as_u64).ok_or_else(|| bad("round"))? as usize,
                    oracle: q.get("oracle").and_then(Value::as_str).ok_or_else(|| bad("oracle"))?.to_string(),
                    point: QueryPoint::from_json(f, q.get("point").ok_or_else(|| bad("point"))?)?,
                    answer: fe(q.get("answer").ok_or_else(|| bad("answer"))?)?,
                })
            })
            .collect::<Result<_, ProtocolError>>()?;
        let decision = v.get("decision").and_then(Value::as_bool);
        Ok(View { input, ledger, rounds, queries, decision })
    }

    /// Distinct queries per oracle.
    pub fn query_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for q in &self.queries {
            *counts.entry(q.oracle.clone()).or_insert(0) += 1;
        }
        counts
    }
}

/// Compact, field-agnostic rendering used as a histogram key.
impl fmt::Display for View {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "c[")?;
        for e in &self.ledger {
            write!(out, "{}", e.value)?;
            out.write_str(" ")?;
        }
        write!(out, "] m[")?;
        for m in &self.rounds {
            let p: Vec<String> = m.payload.iter().map(|x| x.0.to_string()).collect();
            write!(out, "{}:{} ", if m.to == Party::Prover { "P" } else { "V" }, p.join(","))?;
        }
        write!(out, "] q[")?;
        for q in &self.queries {
            write!(out, "{}{}{}={} ", q.round, q.oracle, q.point, q.answer.0)?;
        }
        write!(
            out,
            "] {}",
            match self.decision {
                Some(true) => "acc",
                Some(false) => "rej",
                None => "-",
            }
        )
    }
}

/// The prover side of an execution: the honest prover, a cheating prover or
/// a simulator. It sees verifier messages, produces replies and answers
/// oracle queries, drawing private randomness from `coins` in the prover
/// namespace.
pub trait Responder {
    fn receive(&mut self, msg: &[Fe], coins: &mut dyn Coins) -> Result<(), ProtocolError>;

    fn reply(&mut self, coins: &mut dyn Coins) -> Result<Vec<Fe>, ProtocolError>;

    fn answer(&mut self, oracle: &str, point: &QueryPoint, coins: &mut dyn Coins) -> Result<Fe, ProtocolError>;
}

/// A verifier strategy drives the execution through a [`Transcript`] and
/// returns its decision.
pub trait Verifier {
    fn run(&self, t: &mut Transcript<'_>) -> Result<bool, ProtocolError>;
}

impl<F> Verifier for F
where
    F: Fn(&mut Transcript<'_>) -> Result<bool, ProtocolError>,
{
    fn run(&self, t: &mut Transcript<'_>) -> Result<bool, ProtocolError> {
        self(t)
    }
}

/// The verifier's handle on an execution. Every coin, message and distinct
/// query passes through here and is recorded in the view; repeated queries
/// are answered from a cache without consulting the responder.
pub struct Transcript<'a> {
    field: Field,
    responder: &'a mut dyn Responder,
    coins: &'a mut dyn Coins,
    view: View,
    cache: HashMap<(String, QueryPoint), Fe>,
    total_queries: usize,
}

impl<'a> Transcript<'a> {
    pub fn new(field: &Field, input: String, responder: &'a mut dyn Responder, coins: &'a mut dyn Coins) -> Self {
        Transcript {
            field: field.clone(),
            responder,
            coins,
            view: View { input, ..View::default() },
            cache: HashMap::new(),
            total_queries: 0,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// A uniform field element from the verifier's public coins.
    pub fn coin(&mut self, label: &str) -> Result<Fe, ProtocolError> {
        let q = self.field.order();
        let i = self.coins.draw(Namespace::Verifier, q)?;
        self.view.ledger.push(LedgerEntry { label: label.to_string(), range: q, value: i, field: true });
        Ok(self.field.elem(i))
    }

    /// A uniform integer in `[0, n)` from the verifier's public coins.
    pub fn coin_index(&mut self, label: &str, n: u64) -> Result<u64, ProtocolError> {
        let i = self.coins.draw(Namespace::Verifier, n)?;
        self.view.ledger.push(LedgerEntry { label: label.to_string(), range: n, value: i, field: false });
        Ok(i)
    }

    /// Sends a message to the prover.
    pub fn send(&mut self, payload: Vec<Fe>) -> Result<(), ProtocolError> {
        self.responder.receive(&payload, self.coins)?;
        self.view.rounds.push(Message { to: Party::Prover, payload });
        Ok(())
    }

    /// Receives a prover message of exactly `len` elements.
    pub fn receive(&mut self, len: usize) -> Result<Vec<Fe>, ProtocolError> {
        let payload = self.responder.reply(self.coins)?;
        if payload.len() != len {
            return Err(ProtocolError::Shape(format!(
                "prover message {} has {} elements, expected {len}",
                self.view.rounds.len(),
                payload.len()
            )));
        }
        if let Some(x) = payload.iter().find(|x| x.0 >= self.field.order()) {
            return Err(ProtocolError::Shape(format!("prover sent {} outside the field", x.0)));
        }
        self.view.rounds.push(Message { to: Party::Verifier, payload: payload.clone() });
        Ok(payload)
    }

    pub fn query(&mut self, oracle: &str, point: QueryPoint) -> Result<Fe, ProtocolError> {
        self.total_queries += 1;
        let key = (oracle.to_string(), point);
        if let Some(&v) = self.cache.get(&key) {
            return Ok(v);
        }
        let answer = self.responder.answer(oracle, &key.1, self.coins)?;
        if answer.0 >= self.field.order() {
            return Err(ProtocolError::Shape(format!("oracle {oracle} answered outside the field")));
        }
        self.view.queries.push(QueryRecord {
            round: self.view.rounds.len(),
            oracle: key.0.clone(),
            point: key.1.clone(),
            answer,
        });
        self.cache.insert(key, answer);
        Ok(answer)
    }

    pub fn view(&self) -> &View {
        &self.view
    }

    fn finish(mut self, decision: bool) -> Execution {
        self.view.decision = Some(decision);
        let counts = self.view.query_counts();
        Execution { decision, view: self.view, counts, total_queries: self.total_queries }
    }
}

/// Outcome of [`run_interactive`].
#[derive(Clone, Debug)]
pub struct Execution {
    pub decision: bool,
    pub view: View,
    /// Distinct queries per oracle.
    pub counts: BTreeMap<String, usize>,
    /// Queries including repeats.
    pub total_queries: usize,
}

impl Execution {
    pub fn distinct_queries(&self) -> usize {
        self.counts.values().sum()
    }
}

/// Runs `verifier` against `responder`.
pub fn run_interactive(
    field: &Field,
    input: String,
    verifier: &dyn Verifier,
    responder: &mut dyn Responder,
    coins: &mut dyn Coins,
) -> Result<Execution, ProtocolError> {
    let mut t = Transcript::new(field, input, responder, coins);
    let decision = verifier.run(&mut t)?;
    Ok(t.finish(decision))
}

/// Responder that plays back the prover side of a recorded view.
struct ReplayResponder<'v> {
    view: &'v View,
    next_round: usize,
}

impl Responder for ReplayResponder<'_> {
    fn receive(&mut self, msg: &[Fe], _coins: &mut dyn Coins) -> Result<(), ProtocolError> {
        match self.view.rounds.get(self.next_round) {
            Some(m) if m.to == Party::Prover && m.payload == msg => {
                self.next_round += 1;
                Ok(())
            }
            _ => Err(ProtocolError::Replay(format!("verifier message {} diverges", self.next_round))),
        }
    }

    fn reply(&mut self, _coins: &mut dyn Coins) -> Result<Vec<Fe>, ProtocolError> {
        match self.view.rounds.get(self.next_round) {
            Some(m) if m.to == Party::Verifier => {
                self.next_round += 1;
                Ok(m.payload.clone())
            }
            _ => Err(ProtocolError::Replay(format!("no prover message at {}", self.next_round))),
        }
    }

    fn answer(&mut self, oracle: &str, point: &QueryPoint, _coins: &mut dyn Coins) -> Result<Fe, ProtocolError> {
        self.view
            .queries
            .iter()
            .find(|q| q.oracle == oracle && &q.point == point)
            .map(|q| q.answer)
            .ok_or_else(|| ProtocolError::Replay(format!("query {oracle}{point} not in the view")))
    }
}

/// Re-runs `verifier` on the coins, messages and answers recorded in `view`
/// and checks that it reproduces the same view, decision included.
pub fn replay(field: &Field, verifier: &dyn Verifier, view: &View) -> Result<Execution, ProtocolError> {
    let mut responder = ReplayResponder { view, next_round: 0 };
    let prefix: Vec<u64> = view.ledger.iter().map(|e| e.value).collect();
    let mut coins = EnumCoins::new(prefix, view.ledger.len());
    let exec = run_interactive(field, view.input.clone(), verifier, &mut responder, &mut coins)?;
    if exec.view.clone().canonical() != view.clone().canonical() {
        return Err(ProtocolError::Replay("replayed view differs from the recorded one".into()));
    }
    Ok(exec)
}
