//! Formulas over `(ℤ, +, 0, 1, P_r)`: syntax, printing, evaluation and
//! elimination of a single existential quantifier.

mod eliminate;
mod eval;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

pub use eliminate::{eliminate, pattern_variable};
pub use eval::{eval_ground, eval_sentence, z_axioms, Env, EvalError, SentenceValue};
pub use parse::{parse, parse_sentence, parse_with_free, ParseError};

/// `constant + Σ coeffs[v]·v`, with no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Term {
    constant: i64,
    coeffs: BTreeMap<String, i64>,
}

impl Term {
    pub fn new(constant: i64, coeffs: impl IntoIterator<Item = (String, i64)>) -> Self {
        let mut t = Term { constant, coeffs: BTreeMap::new() };
        for (v, c) in coeffs {
            let e = t.coeffs.entry(v).or_insert(0);
            *e = e.checked_add(c).expect("term coefficient overflow");
        }
        t.coeffs.retain(|_, c| *c != 0);
        t
    }

    pub fn constant(c: i64) -> Self {
        Term { constant: c, coeffs: BTreeMap::new() }
    }

    pub fn var(name: &str) -> Self {
        Term::new(0, [(name.to_string(), 1)])
    }

    pub fn constant_part(&self) -> i64 {
        self.constant
    }

    pub fn coeffs(&self) -> &BTreeMap<String, i64> {
        &self.coeffs
    }

    pub fn coeff(&self, v: &str) -> i64 {
        self.coeffs.get(v).copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn checked_add(&self, other: &Term) -> Option<Term> {
        let mut out = self.clone();
        out.constant = out.constant.checked_add(other.constant)?;
        for (v, c) in &other.coeffs {
            let e = out.coeffs.entry(v.clone()).or_insert(0);
            *e = e.checked_add(*c)?;
        }
        out.coeffs.retain(|_, c| *c != 0);
        Some(out)
    }

    pub fn checked_scale(&self, k: i64) -> Option<Term> {
        if k == 0 {
            return Some(Term::default());
        }
        let mut coeffs = BTreeMap::new();
        for (v, c) in &self.coeffs {
            coeffs.insert(v.clone(), c.checked_mul(k)?);
        }
        Some(Term { constant: self.constant.checked_mul(k)?, coeffs })
    }

    pub fn checked_sub(&self, other: &Term) -> Option<Term> {
        self.checked_add(&other.checked_scale(-1)?)
    }

    /// Replaces `v` by the constant `value`.
    pub fn checked_substitute(&self, v: &str, value: i64) -> Option<Term> {
        let Some(&c) = self.coeffs.get(v) else {
            return Some(self.clone());
        };
        let mut out = self.clone();
        out.coeffs.remove(v);
        out.constant = out.constant.checked_add(c.checked_mul(value)?)?;
        Some(out)
    }

    /// Panicking arithmetic for internally built terms with small coefficients.
    pub(crate) fn plus(&self, other: &Term) -> Term {
        self.checked_add(other).expect("term overflow")
    }

    pub(crate) fn minus(&self, other: &Term) -> Term {
        self.checked_sub(other).expect("term overflow")
    }

    pub(crate) fn times(&self, k: i64) -> Term {
        self.checked_scale(k).expect("term overflow")
    }

    pub(crate) fn shift(&self, c: i64) -> Term {
        self.plus(&Term::constant(c))
    }

    fn json_fields(&self) -> (Value, Value) {
        let coeffs: serde_json::Map<String, Value> = self.coeffs.iter().map(|(v, c)| (v.clone(), json!(c))).collect();
        (Value::Object(coeffs), json!(self.constant))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear(f, &self.coeffs, i128::from(self.constant))
    }
}

fn write_linear(f: &mut fmt::Formatter<'_>, coeffs: &BTreeMap<String, i64>, constant: i128) -> fmt::Result {
    let mut first = true;
    for (v, &c) in coeffs {
        let neg = c < 0;
        let mag = c.unsigned_abs();
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        if mag == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{mag}*{v}")?;
        }
        first = false;
    }
    if first {
        write!(f, "{constant}")
    } else if constant > 0 {
        write!(f, " + {constant}")
    } else if constant < 0 {
        write!(f, " - {}", constant.unsigned_abs())
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `t = 0`.
    Eq0(Term),
    /// `t ∈ P_r`.
    InP(Term),
    /// `m | t` and `t/m ∈ P_r`.
    DivPlus(i64, Term),
    /// `m | t` and `t/m ∉ P_r`.
    DivMinus(i64, Term),
}

impl Atom {
    pub fn term(&self) -> &Term {
        match self {
            Atom::Eq0(t) | Atom::InP(t) | Atom::DivPlus(_, t) | Atom::DivMinus(_, t) => t,
        }
    }

    fn map_term(&self, f: impl FnOnce(&Term) -> Option<Term>) -> Option<Atom> {
        Some(match self {
            Atom::Eq0(t) => Atom::Eq0(f(t)?),
            Atom::InP(t) => Atom::InP(f(t)?),
            Atom::DivPlus(m, t) => Atom::DivPlus(*m, f(t)?),
            Atom::DivMinus(m, t) => Atom::DivMinus(*m, f(t)?),
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Eq0(t) => {
                write_linear(f, &t.coeffs, 0)?;
                write!(f, " = {}", -i128::from(t.constant))
            }
            Atom::InP(t) => write!(f, "P({t})"),
            Atom::DivPlus(m, t) => write!(f, "D+[{m}]({t})"),
            Atom::DivMinus(m, t) => write!(f, "D-[{m}]({t})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    pub fn in_p(t: Term) -> Self {
        Formula::Atom(Atom::InP(t))
    }

    pub fn eq0(t: Term) -> Self {
        Formula::Atom(Atom::Eq0(t))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn exists(v: &str, body: Formula) -> Self {
        Formula::Exists(v.to_string(), Box::new(body))
    }

    /// Conjunction with nested conjunctions flattened and singletons unwrapped.
    pub fn and_all(parts: Vec<Formula>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            out.pop().expect("one element")
        } else {
            Formula::And(out)
        }
    }

    /// Disjunction with nested disjunctions flattened and singletons unwrapped.
    pub fn or_all(parts: Vec<Formula>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            out.pop().expect("one element")
        } else {
            Formula::Or(out)
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Exists(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                for v in a.term().coeffs.keys() {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Exists(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Replaces free occurrences of `v` by `value`; `None` on overflow.
    pub fn substitute(&self, v: &str, value: i64) -> Option<Formula> {
        Some(match self {
            Formula::Atom(a) => Formula::Atom(a.map_term(|t| t.checked_substitute(v, value))?),
            Formula::Not(f) => Formula::not(f.substitute(v, value)?),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.substitute(v, value)).collect::<Option<_>>()?),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.substitute(v, value)).collect::<Option<_>>()?),
            Formula::Exists(w, f) if w == v => Formula::Exists(w.clone(), f.clone()),
            Formula::Exists(w, f) => Formula::Exists(w.clone(), Box::new(f.substitute(v, value)?)),
        })
    }

    /// Number of atom occurrences.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::Exists(_, f) => f.size(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::size).sum(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Formula::Atom(a) => {
                let (coeffs, constant) = a.term().json_fields();
                match a {
                    Atom::Eq0(_) => json!({"kind": "eq0", "coeffs": coeffs, "constant": constant}),
                    Atom::InP(_) => json!({"kind": "in_p", "coeffs": coeffs, "constant": constant}),
                    Atom::DivPlus(m, _) => {
                        json!({"kind": "div_plus", "m": m, "coeffs": coeffs, "constant": constant})
                    }
                    Atom::DivMinus(m, _) => {
                        json!({"kind": "div_minus", "m": m, "coeffs": coeffs, "constant": constant})
                    }
                }
            }
            Formula::Not(f) => json!({"kind": "not", "args": [f.to_json()]}),
            Formula::And(fs) => json!({"kind": "and", "args": fs.iter().map(Formula::to_json).collect::<Vec<_>>()}),
            Formula::Or(fs) => json!({"kind": "or", "args": fs.iter().map(Formula::to_json).collect::<Vec<_>>()}),
            Formula::Exists(v, f) => json!({"kind": "exists", "var": v, "args": [f.to_json()]}),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(Atom::Eq0(_)) | Formula::And(_) | Formula::Or(_) => write!(f, "!({inner})"),
                _ => write!(f, "!{inner}"),
            },
            Formula::And(fs) if fs.is_empty() => write!(f, "0 = 0"),
            Formula::Or(fs) if fs.is_empty() => write!(f, "!(0 = 0)"),
            Formula::And(fs) => write_joined(f, fs, " & ", |c| matches!(c, Formula::And(_) | Formula::Or(_))),
            Formula::Or(fs) => write_joined(f, fs, " | ", |c| matches!(c, Formula::Or(_))),
            Formula::Exists(v, body) => write!(f, "exists {v} ({body})"),
        }
    }
}

fn write_joined(
    f: &mut fmt::Formatter<'_>,
    fs: &[Formula],
    sep: &str,
    needs_parens: impl Fn(&Formula) -> bool,
) -> fmt::Result {
    for (i, c) in fs.iter().enumerate() {
        if i > 0 {
            write!(f, "{sep}")?;
        }
        if needs_parens(c) {
            write!(f, "({c})")?;
        } else {
            write!(f, "{c}")?;
        }
    }
    Ok(())
}
