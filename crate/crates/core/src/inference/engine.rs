use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};

use crate::rational::{self, Q};

use super::interval::Lower;
use super::rules::{Ctx, RULES};
use super::{Fact, InferenceError, Justification, Quantity, Registry, State, Tables};

/// Passes over the job list before giving up. Every rule is monotone and
/// most are idempotent, so a handful of passes suffice in practice.
const MAX_PASSES: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Value {
    Lower(Lower),
    Upper(Q),
    Int(i64),
}

/// One rule application: `target` takes `value` because of `inputs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Conclusion {
    pub target: Fact,
    pub value: Value,
    pub inputs: Vec<Fact>,
    pub rule: Cow<'static, str>,
    pub statement: Cow<'static, str>,
}

impl Conclusion {
    pub fn base(
        manifold: usize,
        quantity: Quantity,
        value: Value,
        rule: &'static str,
        statement: &'static str,
    ) -> Conclusion {
        Conclusion {
            target: Fact { manifold, quantity },
            value,
            inputs: vec![],
            rule: rule.into(),
            statement: statement.into(),
        }
    }

    fn is_trivial(&self) -> bool {
        matches!(&self.value, Value::Lower(l) if !l.is_positive())
    }
}

/// Whether `f` still holds its default value and so needs no derivation.
fn is_default(states: &[State], f: Fact) -> bool {
    let s = &states[f.manifold];
    match f.quantity {
        Quantity::Lo(n) => !s.norm(n).lo.is_positive(),
        Quantity::Hi(n) => s.norm(n).hi.is_none(),
        Quantity::Chi => s.chi.is_none(),
        Quantity::ChiRel => s.chi_rel.is_none(),
    }
}

fn is_tight(states: &[State], c: &Conclusion) -> bool {
    let s = &states[c.target.manifold];
    match (&c.value, c.target.quantity) {
        (Value::Lower(l), Quantity::Lo(n)) => *l == s.norm(n).lo,
        (Value::Upper(q), Quantity::Hi(n)) => s.norm(n).hi.as_ref() == Some(q),
        (Value::Int(x), Quantity::Chi) => s.chi == Some(*x),
        (Value::Int(x), Quantity::ChiRel) => s.chi_rel == Some(*x),
        _ => false,
    }
}

struct Run<'a> {
    reg: &'a Registry,
    states: Vec<State>,
    /// The application that last narrowed each fact.
    records: BTreeMap<Fact, Conclusion>,
}

impl Run<'_> {
    fn apply(&mut self, c: Conclusion) -> Result<bool, InferenceError> {
        if c.is_trivial() {
            return Ok(false);
        }
        let f = c.target;
        let s = &mut self.states[f.manifold];
        let conflict = match (&c.value, f.quantity) {
            (Value::Lower(l), Quantity::Lo(n)) => {
                let slot = &mut s.norms[n as usize];
                if *l <= slot.lo {
                    return Ok(false);
                }
                slot.lo = l.clone().normalized();
                slot.is_empty().then_some(Fact {
                    quantity: Quantity::Hi(n),
                    ..f
                })
            }
            (Value::Upper(q), Quantity::Hi(n)) => {
                let slot = &mut s.norms[n as usize];
                if slot.hi.as_ref().is_some_and(|h| h <= q) {
                    return Ok(false);
                }
                slot.hi = Some(q.clone());
                slot.is_empty().then_some(Fact {
                    quantity: Quantity::Lo(n),
                    ..f
                })
            }
            (Value::Int(x), q @ (Quantity::Chi | Quantity::ChiRel)) => {
                let slot = if q == Quantity::Chi { &mut s.chi } else { &mut s.chi_rel };
                match *slot {
                    Some(y) if y == *x => return Ok(false),
                    Some(_) => Some(f),
                    None => {
                        *slot = Some(*x);
                        None
                    }
                }
            }
            _ => unreachable!("conclusion value does not fit its target"),
        };
        if let Some(held) = conflict {
            return Err(InferenceError::Inconsistent {
                fact: self.reg.fact_name(f),
                existing: self.chain(held, &mut BTreeSet::new()),
                incoming: self.describe(&c, &mut BTreeSet::new()),
            });
        }
        self.records.insert(f, c);
        Ok(true)
    }

    fn chain(&self, f: Fact, seen: &mut BTreeSet<Fact>) -> String {
        match self.records.get(&f) {
            Some(c) if seen.insert(f) => self.describe(c, seen),
            Some(_) => format!("{} (see above)", self.reg.fact_label(f, &self.states[f.manifold])),
            None => self.reg.fact_label(f, &self.states[f.manifold]),
        }
    }

    fn describe(&self, c: &Conclusion, seen: &mut BTreeSet<Fact>) -> String {
        let mut out = format!("{} by {}: {}", value_label(self.reg, c), c.rule, c.statement);
        let inputs: Vec<String> = c
            .inputs
            .iter()
            .filter(|&&g| !is_default(&self.states, g))
            .map(|&g| self.chain(g, seen))
            .collect();
        if !inputs.is_empty() {
            out.push_str(&format!(" ⟸ ({})", inputs.join("; ")));
        }
        out
    }
}

fn value_label(reg: &Registry, c: &Conclusion) -> String {
    let name = reg.fact_name(c.target);
    match &c.value {
        Value::Lower(l) if l.strict => format!("{name} > 0"),
        Value::Lower(l) => format!("{name} ≥ {}", rational::display(&l.value)),
        Value::Upper(q) => format!("{name} ≤ {}", rational::display(q)),
        Value::Int(x) => format!("{name} = {x}"),
    }
}

fn job_conclusions(reg: &Registry, states: &[State], job: usize, out: &mut Vec<Conclusion>) {
    let m = reg.len();
    let ctx = Ctx { reg, states };
    RULES[job / m].run(&ctx, job % m, out);
}

pub(crate) fn run(reg: &Registry, order: &[usize]) -> Result<Tables, InferenceError> {
    let mut run = Run {
        reg,
        states: (0..reg.len())
            .map(|i| State {
                betti: reg.betti[i].clone(),
                ..State::default()
            })
            .collect(),
        records: BTreeMap::new(),
    };
    for c in &reg.base {
        run.apply(c.clone())?;
    }
    let mut settled = false;
    let mut buf = Vec::new();
    for _ in 0..MAX_PASSES {
        let mut changed = false;
        for &job in order {
            buf.clear();
            job_conclusions(reg, &run.states, job, &mut buf);
            for c in buf.drain(..) {
                changed |= run.apply(c)?;
            }
        }
        if !changed {
            settled = true;
            break;
        }
    }
    if !settled {
        return Err(InferenceError::NoFixpoint(MAX_PASSES));
    }
    let why = provenance(reg, &run.states, &run.records);
    Ok(Tables {
        states: run.states,
        why,
    })
}

type Key = (usize, String, String, Vec<Fact>);

/// Least-depth justification of every non-default fact, computed from the
/// applications that are tight at the fixpoint. Ties are broken by rule id,
/// statement and inputs, so the choice depends only on the fixpoint.
fn provenance(reg: &Registry, states: &[State], records: &BTreeMap<Fact, Conclusion>) -> BTreeMap<Fact, Justification> {
    let mut candidates: Vec<Conclusion> = reg.base.iter().filter(|c| is_tight(states, c)).cloned().collect();
    let mut buf = Vec::new();
    for job in 0..reg.job_count() {
        buf.clear();
        job_conclusions(reg, states, job, &mut buf);
        candidates.extend(buf.drain(..).filter(|c| !c.is_trivial() && is_tight(states, c)));
    }
    let mut best: BTreeMap<Fact, Key> = BTreeMap::new();
    loop {
        let mut changed = false;
        for c in &candidates {
            let mut depth = 0;
            let mut ready = true;
            for &g in &c.inputs {
                if is_default(states, g) {
                    continue;
                }
                match best.get(&g) {
                    Some(k) => depth = depth.max(k.0),
                    None => {
                        ready = false;
                        break;
                    }
                }
            }
            if !ready {
                continue;
            }
            let inputs: Vec<Fact> = c.inputs.iter().copied().filter(|&g| !is_default(states, g)).collect();
            let key = (depth + 1, c.rule.to_string(), c.statement.to_string(), inputs);
            if best.get(&c.target).is_none_or(|k| key < *k) {
                best.insert(c.target, key);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut why: BTreeMap<Fact, Justification> = best
        .into_iter()
        .map(|(f, (depth, rule, statement, inputs))| {
            (
                f,
                Justification {
                    rule,
                    statement,
                    inputs,
                    depth,
                },
            )
        })
        .collect();
    // A fact whose only tight derivations are circular keeps the application
    // that set it, restricted to inputs that are already explained.
    for (f, c) in records {
        if why.contains_key(f) || is_default(states, *f) {
            continue;
        }
        let inputs: Vec<Fact> = c.inputs.iter().copied().filter(|g| why.contains_key(g)).collect();
        let depth = 1 + inputs.iter().map(|g| why[g].depth).max().unwrap_or(0);
        why.insert(
            *f,
            Justification {
                rule: c.rule.to_string(),
                statement: c.statement.to_string(),
                inputs,
                depth,
            },
        );
    }
    why
}
