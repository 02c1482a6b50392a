//! The `U`/`V` arc families and the `(k, I)`-pattern decision.
//!
//! `a + kc ∈ P_r` iff `h(c) ∈ U_{a,k}`, and `∉` iff `h(c) ∈ V_{a,k}`. A pattern
//! is realizable iff an integer lands in the right intersection of these
//! families. The open part is nonempty iff some slice endpoint has the right
//! right-limit pattern. The boundary part is finite and checked pointwise.

use num_integer::Integer;

use crate::beatty::BeattyContext;
use crate::circle::{CirclePoint, OrientedInterval};

/// Default scan bound for witness search.
pub const WITNESS_BOUND: i64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("pattern needs at least one constraint")]
    Empty,
    #[error("a and k have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("index {0} is out of range for {1} constraints")]
    IndexOutOfRange(usize, usize),
    #[error("no witness with |c| <= {0}")]
    WitnessNotFound(i64),
}

/// `(a, k, I)`: asks for `c` with `a_i + k_i c ∈ P_r` exactly when `i ∈ I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternQuery {
    pub a: Vec<i64>,
    pub k: Vec<i64>,
    /// `in_set[i]` iff `i ∈ I`.
    pub in_set: Vec<bool>,
}

impl PatternQuery {
    /// `indices` are 0-based members of `I`.
    pub fn new(a: Vec<i64>, k: Vec<i64>, indices: &[usize]) -> Result<Self, PatternError> {
        if a.len() != k.len() {
            return Err(PatternError::LengthMismatch(a.len(), k.len()));
        }
        if a.is_empty() {
            return Err(PatternError::Empty);
        }
        let mut in_set = vec![false; a.len()];
        for &i in indices {
            *in_set.get_mut(i).ok_or(PatternError::IndexOutOfRange(i, a.len()))? = true;
        }
        Ok(Self { a, k, in_set })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// 0-based indices of `I`.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.in_set[i]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Certificate {
    FiniteComponent,
    UEndpointCase,
    VEndpointCase,
    KZeroOnly,
    Contradictory,
    NoCase,
}

impl Certificate {
    pub fn name(self) -> &'static str {
        match self {
            Certificate::FiniteComponent => "FiniteComponent",
            Certificate::UEndpointCase => "UEndpointCase",
            Certificate::VEndpointCase => "VEndpointCase",
            Certificate::KZeroOnly => "KZeroOnly",
            Certificate::Contradictory => "Contradictory",
            Certificate::NoCase => "NoCase",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub realizable: bool,
    pub witness: Option<i64>,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    U,
    V,
}

/// `U_{a,k}` (open slices) or `V_{a,k}` (closed slices); for `k = 0` either all of the circle or empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UVFamily {
    pub a: i64,
    pub k: u64,
    pub kind: FamilyKind,
    pub slices: Vec<OrientedInterval>,
    /// For `k = 0`: whether the family is the whole circle.
    pub whole: bool,
}

impl UVFamily {
    pub fn contains(&self, ctx: &BeattyContext, p: &CirclePoint) -> bool {
        if self.k == 0 {
            return self.whole;
        }
        let circle = ctx.circle();
        self.slices.iter().any(|s| circle.contains(s, p))
    }
}

/// Exponent of `ζ_k` on the upper endpoint of a `U` slice: `[h(−a) < h(−a−1)]`.
pub fn slice_shift(ctx: &BeattyContext, a: i64) -> i64 {
    let circle = ctx.circle();
    i64::from(circle.lt(&circle.h(-a), &circle.h(-a - 1)))
}

// Lower and upper root endpoints of U_{a,k,0}: h(−a−1)^{1/k} and h(−a)^{1/k}ζ_k^ε.
fn base_roots(ctx: &BeattyContext, a: i64, k: u64) -> (CirclePoint, CirclePoint) {
    let circle = ctx.circle();
    let x = circle.kth_root_base(&circle.h(-a - 1), k);
    let y = circle.kth_root_base(&circle.h(-a), k);
    let y = circle.mul(&y, &circle.zeta_pow(k, slice_shift(ctx, a)));
    (x, y)
}

pub fn u_family(ctx: &BeattyContext, a: i64, k: u64) -> UVFamily {
    if k == 0 {
        return UVFamily { a, k, kind: FamilyKind::U, slices: Vec::new(), whole: ctx.member_p(a) };
    }
    let circle = ctx.circle();
    let (x, y) = base_roots(ctx, a, k);
    let slices = (0..k as i64)
        .map(|s| {
            let z = circle.zeta_pow(k, s);
            OrientedInterval::open(circle.mul(&x, &z), circle.mul(&y, &z))
        })
        .collect();
    UVFamily { a, k, kind: FamilyKind::U, slices, whole: false }
}

pub fn v_family(ctx: &BeattyContext, a: i64, k: u64) -> UVFamily {
    if k == 0 {
        return UVFamily { a, k, kind: FamilyKind::V, slices: Vec::new(), whole: !ctx.member_p(a) };
    }
    let circle = ctx.circle();
    let (x, y) = base_roots(ctx, a, k);
    let slices = (0..k as i64)
        .map(|s| {
            let lo = circle.mul(&y, &circle.zeta_pow(k, s));
            let hi = circle.mul(&x, &circle.zeta_pow(k, s + 1));
            OrientedInterval::closed(lo, hi)
        })
        .collect();
    UVFamily { a, k, kind: FamilyKind::V, slices, whole: false }
}

/// `h(c) ∈ U_{a,k}`; equals `a + kc ∈ P_r`.
pub fn membership_via_u(ctx: &BeattyContext, a: i64, k: u64, c: i64) -> bool {
    u_family(ctx, a, k).contains(ctx, &ctx.circle().h(c))
}

/// `h(c) ∈ V_{a,k}`; equals `a + kc ∉ P_r`.
pub fn membership_via_v(ctx: &BeattyContext, a: i64, k: u64, c: i64) -> bool {
    v_family(ctx, a, k).contains(ctx, &ctx.circle().h(c))
}

/// Replaces each `(a, k)` with `k < 0` by `(−a−1, −k)`.
pub fn normalize_query(q: &PatternQuery) -> PatternQuery {
    let mut out = q.clone();
    for i in 0..q.len() {
        if q.k[i] < 0 {
            out.a[i] = -q.a[i] - 1;
            out.k[i] = -q.k[i];
        }
    }
    out
}

fn reduced(k: u64, l: u64) -> (u64, u64) {
    let g = k.gcd(&l);
    (k / g, l / g)
}

/// `(x, y) ∈ A_{k,l}`: some `k`-th root of `h(x)` lies in `U_{y,l}`.
pub fn a_set_member(ctx: &BeattyContext, k: u64, l: u64, x: i64, y: i64) -> bool {
    assert!(k >= 1 && l >= 1, "A-set indices must be positive");
    let (k1, l1) = reduced(k, l);
    let (k1, l1) = (k1 as i64, l1 as i64);
    let slope = ctx.slope();
    // Roots are spaced 1/k' apart and the target arc has length 1/r; k' ≤ r leaves gaps.
    if slope.floor() >= k1 {
        let circle = ctx.circle();
        let arc = OrientedInterval::open(circle.h(-k1), circle.one());
        return circle.contains(&arc, &circle.h(l1 * x + k1 * y));
    }
    true
}

/// `(x, y) ∈ B_{k,l}`: some `k`-th root of `h(x)` lies in `V_{y,l}`.
pub fn b_set_member(ctx: &BeattyContext, k: u64, l: u64, x: i64, y: i64) -> bool {
    assert!(k >= 1 && l >= 1, "B-set indices must be positive");
    let (k1, l1) = reduced(k, l);
    let (k1, l1) = (k1 as i64, l1 as i64);
    let circle = ctx.circle();
    // Roots are spaced 1/k' apart and the target arc has length 1 − 1/r.
    let spans = circle.lt(&circle.zeta(k1 as u64), &circle.h(-1)) && k1 > 1;
    if spans {
        return true;
    }
    let arc = OrientedInterval::closed(circle.one(), circle.h(-k1));
    circle.contains(&arc, &circle.h(l1 * x + k1 * y))
}

/// Some `k`-th root of `h(x)` lies in `family`, found by enumerating all roots.
pub fn some_root_in(ctx: &BeattyContext, x: i64, k: u64, family: &UVFamily) -> bool {
    let circle = ctx.circle();
    let base = circle.kth_root_base(&circle.h(x), k);
    (0..k as i64).any(|s| family.contains(ctx, &circle.mul(&base, &circle.zeta_pow(k, s))))
}

/// Whether `c` satisfies every constraint of `q`.
pub fn satisfies(ctx: &BeattyContext, q: &PatternQuery, c: i64) -> bool {
    (0..q.len()).all(|i| match q.a[i].checked_add(q.k[i].saturating_mul(c)) {
        Some(v) if q.k[i].checked_mul(c).is_some() => ctx.member_p(v) == q.in_set[i],
        _ => false,
    })
}

/// First boundary candidate `c` (with `k_j c ∈ {−a_j, −a_j−1}`, `j ∉ I`) satisfying `q` pointwise.
pub fn finite_component(ctx: &BeattyContext, q: &PatternQuery) -> Option<i64> {
    for j in 0..q.len() {
        if q.in_set[j] || q.k[j] <= 0 {
            continue;
        }
        for e in 0..2 {
            let t = q.a[j] + e;
            if t % q.k[j] == 0 {
                let c = -t / q.k[j];
                if satisfies(ctx, q, c) {
                    return Some(c);
                }
            }
        }
    }
    None
}

/// Scans `c = 0, 1, −1, 2, −2, …` up to `|c| ≤ bound` for a pointwise witness.
pub fn find_witness(ctx: &BeattyContext, q: &PatternQuery, bound: i64) -> Result<i64, PatternError> {
    if satisfies(ctx, q, 0) {
        return Ok(0);
    }
    for m in 1..=bound {
        for c in [m, -m] {
            if satisfies(ctx, q, c) {
                return Ok(c);
            }
        }
    }
    Err(PatternError::WitnessNotFound(bound))
}

/// Right-limit of `θ ∈ (1 − 1/r, 1)` at `p`, i.e. `θ(p) ≥ 1 − 1/r`.
fn right_limit_in_p(ctx: &BeattyContext, p: &CirclePoint) -> bool {
    let circle = ctx.circle();
    let edge = circle.h(-1);
    *p == edge || circle.lt(&edge, p)
}

/// Endpoint roots `ω` with `ω^k = h(base)`.
fn endpoint_roots(ctx: &BeattyContext, base: i64, k: u64) -> Vec<CirclePoint> {
    let circle = ctx.circle();
    let b0 = circle.kth_root_base(&circle.h(base), k);
    (0..k as i64).map(|u| circle.mul(&b0, &circle.zeta_pow(k, u))).collect()
}

/// An endpoint `ω` of constraint `j` whose right-limit pattern matches `q`, if any.
///
/// `q` must be normalized with every `k_i ≥ 1`.
pub fn open_component_endpoint(ctx: &BeattyContext, q: &PatternQuery, j: usize) -> Option<CirclePoint> {
    let circle = ctx.circle();
    let base = if q.in_set[j] { -q.a[j] - 1 } else { -q.a[j] };
    let shifts: Vec<CirclePoint> = q.a.iter().map(|&a| circle.h(a)).collect();
    endpoint_roots(ctx, base, q.k[j] as u64).into_iter().find(|omega| {
        (0..q.len()).all(|m| {
            let p = circle.mul(&shifts[m], &circle.pow(omega, q.k[m]));
            right_limit_in_p(ctx, &p) == q.in_set[m]
        })
    })
}

/// Decides whether some integer realizes `q`, with a verified witness.
///
/// Panics if an open case fires but no witness exists within
/// [`WITNESS_BOUND`]; that signals an internal inconsistency.
pub fn realizes_pattern(ctx: &BeattyContext, q: &PatternQuery) -> Decision {
    decide_with_bound(ctx, q, WITNESS_BOUND)
}

pub(crate) fn decide_with_bound(ctx: &BeattyContext, q: &PatternQuery, bound: i64) -> Decision {
    let no = |certificate| Decision { realizable: false, witness: None, certificate };
    let q = normalize_query(q);
    let n = q.len();
    for i in 0..n {
        for j in i + 1..n {
            if q.a[i] == q.a[j] && q.k[i] == q.k[j] && q.in_set[i] != q.in_set[j] {
                return no(Certificate::Contradictory);
            }
        }
    }
    for i in (0..n).filter(|&i| q.k[i] == 0) {
        if ctx.member_p(q.a[i]) != q.in_set[i] {
            return no(Certificate::Contradictory);
        }
    }
    let live: Vec<usize> = (0..n).filter(|&i| q.k[i] != 0).collect();
    if live.is_empty() {
        return Decision { realizable: true, witness: Some(0), certificate: Certificate::KZeroOnly };
    }
    let sub = PatternQuery {
        a: live.iter().map(|&i| q.a[i]).collect(),
        k: live.iter().map(|&i| q.k[i]).collect(),
        in_set: live.iter().map(|&i| q.in_set[i]).collect(),
    };
    if let Some(c) = finite_component(ctx, &sub) {
        return Decision { realizable: true, witness: Some(c), certificate: Certificate::FiniteComponent };
    }
    for want_in in [true, false] {
        for j in (0..sub.len()).filter(|&j| sub.in_set[j] == want_in) {
            if open_component_endpoint(ctx, &sub, j).is_some() {
                let certificate = if want_in { Certificate::UEndpointCase } else { Certificate::VEndpointCase };
                let c = find_witness(ctx, &q, bound).unwrap_or_else(|e| {
                    panic!("open case {certificate:?} fired for {q:?} but witness search failed: {e}")
                });
                return Decision { realizable: true, witness: Some(c), certificate };
            }
        }
    }
    no(Certificate::NoCase)
}
