//! Quantifier-free equivalent of `∃y ⋀_{i∈I} x_i + k_i y ∈ P ∧ ⋀_{i∉I} x_i + k_i y ∉ P`.
//!
//! Constraints with `k_i < 0` are rewritten on `−x_i − 1`; constraints with
//! `k_i = 0` become literals. For the rest the witness set is
//! `{c : h(c) ∈ R}` for a finite union of arcs `R`, nonempty iff
//!
//! * some boundary point `c = −(x_j + e)/k_j`, `j ∉ I`, `e ∈ {0, 1}` satisfies every constraint, or
//! * some left endpoint `ω` of a component of `R` has the right right-limit
//!   pattern. `ω` is a `K`-th root of `h(A)` with `K = k_j` and
//!   `A = −x_j − 1` (`j ∈ I`) or `A = −x_j` (`j ∉ I`).
//!
//! Writing `A = Kq + ρ` with `0 ≤ ρ < K`, the roots are `h(q)·ω₀` with
//! `ω₀ = e((ρ/r + u)/K)`. The right-limit test for constraint `m` asks
//! whether `h(T)·c₀ ∈ G = [h(−1), 1)` where `T = x_m + k_m q` and
//! `c₀ = ω₀^{k_m}`. `T` is not a term, but `K·T` is, so atoms on `T` become
//! `D±[K]` atoms. When `c₀ ∉ Γ_r` the circle is cut into windows short
//! enough for `z ↦ z^K` to be injective; inside a window the test moves to
//! the integer term `K x_m + k_m A`.

use std::cmp::Ordering;

use num_bigint::BigInt;

use super::{Atom, Formula, Term};
use crate::beatty::BeattyContext;
use crate::circle::{Circle, CirclePoint, OrientedInterval};
use crate::exact::Rational;
use crate::pattern::{PatternError, PatternQuery};

/// Name of the `i`-th (0-based) free variable of an eliminated formula.
pub fn pattern_variable(i: usize) -> String {
    format!("x{}", i + 1)
}

/// An integer quantity `σ` tested against `Γ_r` arcs: either a term, or
/// `t / K` for a term `t` known to be divisible by `K`.
#[derive(Clone)]
struct Subject {
    t: Term,
    k: i64,
}

impl Subject {
    fn real(t: Term) -> Self {
        Subject { t, k: 1 }
    }

    /// `σ = c`.
    fn eq(&self, c: i64) -> Formula {
        Formula::eq0(self.t.shift(-self.k * c))
    }

    /// `σ + j ∈ P` or `∉ P`.
    fn p(&self, j: i64, positive: bool) -> Formula {
        div_atom(self.k, self.t.shift(self.k * j), positive)
    }
}

/// `D±[m](t)`, written with `P` when `m = 1`.
fn div_atom(m: i64, t: Term, positive: bool) -> Formula {
    match (m, positive) {
        (1, true) => Formula::in_p(t),
        (1, false) => Formula::not(Formula::in_p(t)),
        (_, true) => Formula::Atom(Atom::DivPlus(m, t)),
        (_, false) => Formula::Atom(Atom::DivMinus(m, t)),
    }
}

/// `m | t`.
fn divisible(m: i64, t: &Term) -> Formula {
    Formula::or_all(vec![div_atom(m, t.clone(), true), div_atom(m, t.clone(), false)])
}

struct Builder<'a> {
    circle: &'a Circle,
    /// Primitive step `δ` with arc length `λ = min(1/r, 1 − 1/r)`.
    step: i64,
    lambda: CirclePoint,
}

impl<'a> Builder<'a> {
    fn new(ctx: &'a BeattyContext) -> Self {
        let circle = ctx.circle();
        let step = if ctx.slope().floor() >= 2 { 1 } else { -1 };
        Builder { circle, step, lambda: circle.h(step) }
    }

    /// `h(σ) ∈ [h(x), h(x + δ))`.
    fn piece(&self, s: &Subject, x: i64) -> Formula {
        if self.step == 1 {
            Formula::or_all(vec![s.eq(x), s.p(-x - 1, true)])
        } else {
            Formula::and_all(vec![s.p(-x, false), Formula::not(s.eq(x - 1))])
        }
    }

    /// `h(σ) ∈ [h(x), h(y))`, as a union of primitive pieces and one overlap.
    fn arc(&self, s: &Subject, mut x: i64, y: i64) -> Formula {
        let mut parts = Vec::new();
        while x != y && !self.circle.lt(&self.circle.h(y - x), &self.lambda) {
            parts.push(self.piece(s, x));
            x += self.step;
        }
        if x != y {
            parts.push(Formula::and_all(vec![self.piece(s, x), self.piece(s, y - self.step)]));
        }
        Formula::or_all(parts)
    }

    /// Windows `[h(w₁), h(w₂))` covering the circle, each shorter than `1/K` and `1 − 1/r`.
    fn windows(&self, k: i64) -> Vec<(i64, i64)> {
        let c = self.circle;
        let limit = c.zeta(k as u64);
        let short = |d: i64| c.lt(&c.h(d), &limit) && c.lt(&c.h(d), &c.h(-1));
        let mut n = 1;
        loop {
            let mut pts: Vec<i64> = (0..=n).collect();
            pts.sort_by(|a, b| c.cmp_arg(&c.h(*a), &c.h(*b)));
            let w: Vec<(i64, i64)> = (0..pts.len()).map(|i| (pts[i], pts[(i + 1) % pts.len()])).collect();
            if w.iter().all(|&(a, b)| short(b - a)) {
                return w;
            }
            n += 1;
        }
    }

    /// `[h(T)·c₀ ∈ G] == want`, with `T` virtual on `t = K·T` and `n = K·x_m + k_m·A`.
    fn condition(&self, t: &Subject, n: &Term, km: i64, rho: i64, u: i64, want: bool) -> Formula {
        let big_k = t.k;
        if (km * rho) % big_k == 0 && (km * u) % big_k == 0 {
            // c₀ = h(z): the test is T + z ∈ P ∪ {−1}.
            let z = km * rho / big_k;
            return if want {
                Formula::or_all(vec![t.eq(-1 - z), t.p(z, true)])
            } else {
                Formula::and_all(vec![t.p(z, false), Formula::not(t.eq(-1 - z))])
            };
        }
        let c = self.circle;
        let c0 = c.point(ratio(km * rho, big_k), ratio(km * u, big_k));
        let n_subject = Subject::real(n.clone());
        let mut parts = Vec::new();
        for (w1, w2) in self.windows(big_k) {
            let in_window = self.arc(t, w1, w2);
            let a = c.mul(&c.h(w1), &c0);
            let b = c.mul(&c.h(w2), &c0);
            // K-th powers of the endpoints, as exponents of h.
            let pw = |w: i64| big_k * w + km * rho;
            let inside = match self.meet(&a, &b) {
                Meet::Empty => None,
                Meet::Full => Some(None),
                Meet::Part(lo, hi) => {
                    let lo = if lo { pw(w1) } else { -big_k };
                    let hi = if hi { pw(w2) } else { 0 };
                    Some(Some((lo, hi)))
                }
            };
            let clause = match (inside, want) {
                (None, true) | (Some(None), false) => continue,
                (None, false) | (Some(None), true) => in_window,
                (Some(Some((lo, hi))), true) => Formula::and_all(vec![in_window, self.arc(&n_subject, lo, hi)]),
                (Some(Some((lo, hi))), false) => Formula::and_all(vec![in_window, self.arc(&n_subject, hi, lo)]),
            };
            parts.push(clause);
        }
        Formula::or_all(parts)
    }

    /// `[a, b) ∩ [h(−1), 1)`; `Part(lo_from_window, hi_from_window)` names which arc supplies each end.
    fn meet(&self, a: &CirclePoint, b: &CirclePoint) -> Meet {
        let c = self.circle;
        let g_lo = c.h(-1);
        let g_hi = c.one();
        let win = OrientedInterval::half_open(a.clone(), b.clone());
        let g = OrientedInterval::half_open(g_lo.clone(), g_hi.clone());
        let (start, lo_from_window) = if c.contains(&g, a) {
            (a.clone(), true)
        } else if c.contains(&win, &g_lo) {
            (g_lo, false)
        } else {
            return Meet::Empty;
        };
        let shift = c.inv(&start);
        let hi_from_window = c.cmp_arg(&c.mul(b, &shift), &c.mul(&g_hi, &shift)) != Ordering::Greater;
        if lo_from_window && hi_from_window {
            Meet::Full
        } else {
            Meet::Part(lo_from_window, hi_from_window)
        }
    }
}

enum Meet {
    Empty,
    Full,
    Part(bool, bool),
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Returns `ψ(x1, …, xn)` equivalent over `ℤ` to `∃y` of the `(k, I)`-pattern;
/// `indices` are 0-based members of `I`.
pub fn eliminate(k: &[i64], indices: &[usize], ctx: &BeattyContext) -> Result<Formula, PatternError> {
    let q = PatternQuery::new(vec![0; k.len()], k.to_vec(), indices)?;
    let n = k.len();
    let mut alpha = Vec::with_capacity(n);
    let mut kk = Vec::with_capacity(n);
    for (i, &ki) in k.iter().enumerate() {
        let x = Term::var(&pattern_variable(i));
        if ki < 0 {
            alpha.push(x.times(-1).shift(-1));
            kk.push(-ki);
        } else {
            alpha.push(x);
            kk.push(ki);
        }
    }
    let in_set = &q.in_set;
    let mut fixed: Vec<Formula> =
        (0..n).filter(|&i| kk[i] == 0).map(|i| div_atom(1, alpha[i].clone(), in_set[i])).collect();
    let live: Vec<usize> = (0..n).filter(|&i| kk[i] != 0).collect();
    if live.is_empty() {
        return Ok(Formula::and_all(fixed));
    }
    let b = Builder::new(ctx);
    let mut cases = Vec::new();

    // Boundary points c = −(α_j + e)/k_j.
    for &j in live.iter().filter(|&&j| !in_set[j]) {
        for e in 0..2 {
            let num = alpha[j].shift(e);
            let mut parts = Vec::new();
            if kk[j] > 1 {
                parts.push(divisible(kk[j], &num));
            }
            for &m in live.iter().filter(|&&m| m != j) {
                // k_j·(α_m + k_m c) = k_j α_m − k_m (α_j + e).
                let scaled = alpha[m].times(kk[j]).minus(&num.times(kk[m]));
                parts.push(div_atom(kk[j], scaled, in_set[m]));
            }
            cases.push(Formula::and_all(parts));
        }
    }

    // Left endpoints of open components.
    for want_in in [true, false] {
        for &j in live.iter().filter(|&&j| in_set[j] == want_in) {
            let big_k = kk[j];
            let a = if want_in { alpha[j].times(-1).shift(-1) } else { alpha[j].times(-1) };
            for rho in 0..big_k {
                let a_rho = a.shift(-rho);
                let mut per_root = Vec::new();
                for u in 0..big_k {
                    let conds: Vec<Formula> = live
                        .iter()
                        .filter(|&&m| m != j)
                        .map(|&m| {
                            let t = Subject { t: alpha[m].times(big_k).plus(&a_rho.times(kk[m])), k: big_k };
                            let nm = alpha[m].times(big_k).plus(&a.times(kk[m]));
                            b.condition(&t, &nm, kk[m], rho, u, in_set[m])
                        })
                        .collect();
                    per_root.push(Formula::and_all(conds));
                }
                let mut parts = Vec::new();
                if big_k > 1 {
                    parts.push(divisible(big_k, &a_rho));
                }
                parts.push(Formula::or_all(per_root));
                cases.push(Formula::and_all(parts));
            }
        }
    }
    fixed.push(Formula::or_all(cases));
    Ok(Formula::and_all(fixed))
}
