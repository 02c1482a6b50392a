//! Ground evaluation and sentence evaluation.

use std::collections::BTreeMap;

use super::{Atom, Formula, Term};
use crate::beatty::BeattyContext;
use crate::pattern::{realizes_pattern, PatternQuery};

pub type Env = BTreeMap<String, i64>;

/// Largest DNF handled exactly by [`eval_sentence`].
const DNF_CAP: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("variable `{0}` has no value")]
    Unbound(String),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("quantifier in a ground evaluation")]
    Quantifier,
}

fn term_value(t: &Term, env: &Env) -> Result<i128, EvalError> {
    let mut acc = i128::from(t.constant_part());
    for (v, &c) in t.coeffs() {
        let x = env.get(v).ok_or_else(|| EvalError::Unbound(v.clone()))?;
        acc = acc.checked_add(i128::from(c) * i128::from(*x)).ok_or(EvalError::Overflow)?;
    }
    Ok(acc)
}

fn member(ctx: &BeattyContext, v: i128) -> Result<bool, EvalError> {
    Ok(ctx.member_p(i64::try_from(v).map_err(|_| EvalError::Overflow)?))
}

fn eval_atom(a: &Atom, env: &Env, ctx: &BeattyContext) -> Result<bool, EvalError> {
    let v = term_value(a.term(), env)?;
    match a {
        Atom::Eq0(_) => Ok(v == 0),
        Atom::InP(_) => member(ctx, v),
        Atom::DivPlus(m, _) => Ok(v % i128::from(*m) == 0 && member(ctx, v / i128::from(*m))?),
        Atom::DivMinus(m, _) => Ok(v % i128::from(*m) == 0 && !member(ctx, v / i128::from(*m))?),
    }
}

/// Evaluates a quantifier-free formula under `env`, short-circuiting.
pub fn eval_ground(f: &Formula, env: &Env, ctx: &BeattyContext) -> Result<bool, EvalError> {
    match f {
        Formula::Atom(a) => eval_atom(a, env, ctx),
        Formula::Not(g) => Ok(!eval_ground(g, env, ctx)?),
        Formula::And(fs) => {
            for g in fs {
                if !eval_ground(g, env, ctx)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(fs) => {
            for g in fs {
                if eval_ground(g, env, ctx)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Exists(..) => Err(EvalError::Quantifier),
    }
}

/// Truth value of a sentence; `bounded` marks a result that rests on a finite search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentenceValue {
    pub value: bool,
    pub bounded: bool,
    /// For a true sentence `∃y φ`: a value of `y` satisfying `φ`.
    pub witness: Option<i64>,
}

impl SentenceValue {
    fn exact(value: bool) -> Self {
        Self { value, bounded: false, witness: None }
    }
}

/// Evaluates a sentence. A quantifier over a quantifier-free body of `P`,
/// `!P` and equality literals is decided exactly; any other quantifier is
/// searched over `|y| <= search_bound`.
pub fn eval_sentence(f: &Formula, ctx: &BeattyContext, search_bound: i64) -> Result<SentenceValue, EvalError> {
    eval_in(f, &Env::new(), ctx, search_bound)
}

fn eval_in(f: &Formula, env: &Env, ctx: &BeattyContext, bound: i64) -> Result<SentenceValue, EvalError> {
    match f {
        Formula::Atom(a) => Ok(SentenceValue::exact(eval_atom(a, env, ctx)?)),
        Formula::Not(g) => {
            let v = eval_in(g, env, ctx, bound)?;
            Ok(SentenceValue { value: !v.value, bounded: v.bounded, witness: None })
        }
        Formula::And(fs) | Formula::Or(fs) => {
            let is_and = matches!(f, Formula::And(_));
            let mut bounded = false;
            for g in fs {
                let v = eval_in(g, env, ctx, bound)?;
                if v.value != is_and {
                    // A decisive child settles the connective; it is exact iff the child is.
                    return Ok(SentenceValue { value: !is_and, bounded: v.bounded, witness: None });
                }
                bounded |= v.bounded;
            }
            Ok(SentenceValue { value: is_and, bounded, witness: None })
        }
        Formula::Exists(y, body) => {
            let mut closed = (**body).clone();
            for (v, &x) in env {
                if v != y {
                    closed = closed.substitute(v, x).ok_or(EvalError::Overflow)?;
                }
            }
            if let Some(w) = exists_exact(y, &closed, ctx)? {
                return Ok(SentenceValue { value: w.is_some(), bounded: false, witness: w });
            }
            let mut scope = env.clone();
            let order = std::iter::once(0).chain((1..=bound).flat_map(|m| [m, -m]));
            for c in order {
                scope.insert(y.clone(), c);
                let v = eval_in(&closed, &scope, ctx, bound)?;
                if v.value {
                    return Ok(SentenceValue { value: true, bounded: v.bounded, witness: Some(c) });
                }
            }
            Ok(SentenceValue { value: false, bounded: true, witness: None })
        }
    }
}

type Literal = (Atom, bool);

fn dnf(f: &Formula, positive: bool) -> Option<Vec<Vec<Literal>>> {
    match (f, positive) {
        (Formula::Atom(a), _) => Some(vec![vec![(a.clone(), positive)]]),
        (Formula::Not(g), _) => dnf(g, !positive),
        (Formula::And(fs), true) | (Formula::Or(fs), false) => {
            let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
            for g in fs {
                let d = dnf(g, positive)?;
                if acc.len().checked_mul(d.len())? > DNF_CAP {
                    return None;
                }
                acc = acc
                    .iter()
                    .flat_map(|c| {
                        d.iter().map(move |e| {
                            let mut c = c.clone();
                            c.extend(e.iter().cloned());
                            c
                        })
                    })
                    .collect();
            }
            Some(acc)
        }
        (Formula::Or(fs), true) | (Formula::And(fs), false) => {
            let mut acc = Vec::new();
            for g in fs {
                acc.extend(dnf(g, positive)?);
                if acc.len() > DNF_CAP {
                    return None;
                }
            }
            Some(acc)
        }
        (Formula::Exists(..), _) => None,
    }
}

enum Clause {
    Witness(i64),
    Empty,
    Query(Vec<(i64, i64, bool)>),
}

// Some(witness or None) when ∃y body is decided exactly; None outside the fragment.
fn exists_exact(y: &str, body: &Formula, ctx: &BeattyContext) -> Result<Option<Option<i64>>, EvalError> {
    if !body.is_quantifier_free() || body.free_vars().iter().any(|v| v != y) {
        return Ok(None);
    }
    let Some(clauses) = dnf(body, true) else {
        return Ok(None);
    };
    let mut all_decided = true;
    for lits in &clauses {
        match clause(y, lits, ctx)? {
            Some(Clause::Witness(c)) => return Ok(Some(Some(c))),
            Some(Clause::Empty) => {}
            Some(Clause::Query(cs)) => {
                if cs.is_empty() {
                    return Ok(Some(Some(0)));
                }
                let (a, k, in_set) = cs.into_iter().fold((vec![], vec![], vec![]), |mut acc, (a, k, s)| {
                    acc.0.push(a);
                    acc.1.push(k);
                    acc.2.push(s);
                    acc
                });
                if let Some(c) = realizes_pattern(ctx, &PatternQuery { a, k, in_set }).witness {
                    return Ok(Some(Some(c)));
                }
            }
            None => all_decided = false,
        }
    }
    Ok(if all_decided { Some(None) } else { None })
}

fn clause(y: &str, lits: &[Literal], ctx: &BeattyContext) -> Result<Option<Clause>, EvalError> {
    // An equation pinning y turns the clause into a ground check.
    for (atom, positive) in lits {
        if let (Atom::Eq0(t), true) = (atom, positive) {
            let k = t.coeff(y);
            if k != 0 {
                let a = t.constant_part();
                if a % k != 0 {
                    return Ok(Some(Clause::Empty));
                }
                let mut env = Env::new();
                env.insert(y.to_string(), -(a / k));
                for (atom, positive) in lits {
                    if eval_atom(atom, &env, ctx)? != *positive {
                        return Ok(Some(Clause::Empty));
                    }
                }
                return Ok(Some(Clause::Witness(-(a / k))));
            }
        }
    }
    let mut constraints = Vec::new();
    let empty = Env::new();
    for (atom, positive) in lits {
        let t = atom.term();
        let k = t.coeff(y);
        if k == 0 {
            if eval_atom(atom, &empty, ctx)? != *positive {
                return Ok(Some(Clause::Empty));
            }
            continue;
        }
        match atom {
            Atom::InP(_) => constraints.push((t.constant_part(), k, *positive)),
            _ => return Ok(None),
        }
    }
    Ok(Some(Clause::Query(constraints)))
}

/// Literal type of the generator: `(k, k ∈ P_r)` for `k = 1..=kmax`.
pub fn z_axioms(kmax: i64, ctx: &BeattyContext) -> Vec<(i64, bool)> {
    (1..=kmax).map(|k| (k, ctx.member_p(k))).collect()
}
