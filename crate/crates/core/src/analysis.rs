//! Brute-force oracles and empirical checks: enumeration of definable sets,
//! gap statistics and the instability witnesses.

use crate::beatty::BeattyContext;
use crate::logic::{eval_ground, eval_sentence, Env, EvalError, Formula};
use crate::pattern::{satisfies, PatternQuery};

/// Search bound for quantifiers outside the exact fragment during enumeration.
pub const ENUMERATION_SEARCH_BOUND: i64 = 10_000;

/// Smallest-`|c|` witness with `|c| <= bound`, positive first on ties.
pub fn brute_force_pattern(ctx: &BeattyContext, q: &PatternQuery, bound: i64) -> Option<i64> {
    std::iter::once(0).chain((1..=bound).flat_map(|m| [m, -m])).find(|&c| satisfies(ctx, q, c))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("formula has {0} free variables; expected at most one")]
    TooManyFreeVariables(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `{x ∈ [lo, hi] : f(x)}` in increasing order.
pub fn enumerate_definable(f: &Formula, lo: i64, hi: i64, ctx: &BeattyContext) -> Result<Vec<i64>, AnalysisError> {
    let free: Vec<String> = f.free_vars().into_iter().collect();
    if free.len() > 1 {
        return Err(AnalysisError::TooManyFreeVariables(free.len()));
    }
    let var = free.first().cloned();
    let mut out = Vec::new();
    if f.is_quantifier_free() {
        let mut env = Env::new();
        for x in lo..=hi {
            if let Some(v) = &var {
                env.insert(v.clone(), x);
            }
            if eval_ground(f, &env, ctx)? {
                out.push(x);
            }
        }
        return Ok(out);
    }
    for x in lo..=hi {
        let g = match &var {
            Some(v) => f.substitute(v, x).ok_or(EvalError::Overflow)?,
            None => f.clone(),
        };
        if eval_sentence(&g, ctx, ENUMERATION_SEARCH_BOUND)?.value {
            out.push(x);
        }
    }
    Ok(out)
}

/// Gap statistics of a finite window of a set of integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub window: (i64, i64),
    pub points_found: usize,
    /// Largest difference of consecutive points; 0 with fewer than two points.
    pub max_gap: i64,
    /// `first − lo`: how far back a point near the left edge may have to look.
    pub leading_gap: i64,
    /// `hi − last`: how far forward a point near the right edge may have to look.
    pub trailing_gap: i64,
    /// Smallest `N` such that every window point has a set point within `N`
    /// ahead and within `N` behind, edges included.
    pub gap_bound_estimate: i64,
}

/// Gap report of sorted `points` inside `[lo, hi]`.
pub fn gap_report_points(points: &[i64], lo: i64, hi: i64) -> GapReport {
    let max_gap = points.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    let (leading_gap, trailing_gap) = match (points.first(), points.last()) {
        (Some(&a), Some(&b)) => (a - lo, hi - b),
        _ => (hi - lo + 1, hi - lo + 1),
    };
    GapReport {
        window: (lo, hi),
        points_found: points.len(),
        max_gap,
        leading_gap,
        trailing_gap,
        gap_bound_estimate: max_gap.max(leading_gap).max(trailing_gap),
    }
}

pub fn gap_report(f: &Formula, lo: i64, hi: i64, ctx: &BeattyContext) -> Result<GapReport, AnalysisError> {
    Ok(gap_report_points(&enumerate_definable(f, lo, hi, ctx)?, lo, hi))
}

/// Smallest `m ≥ 1` (up to `limit`) with `m, …, nm ∈ P_r` and `−m, …, −nm ∉ P_r`.
pub fn instability_witness_bounded(n: i64, ctx: &BeattyContext, limit: i64) -> Option<i64> {
    assert!(n >= 1, "n must be positive");
    (1..=limit).find(|&m| (1..=n).all(|j| ctx.member_p(j * m) && !ctx.member_p(-j * m)))
}

/// [`instability_witness_bounded`] with a limit far past any witness met in practice.
pub fn instability_witness(n: i64, ctx: &BeattyContext) -> Option<i64> {
    instability_witness_bounded(n, ctx, 1 << 40)
}

/// `M[i][j] = (j − i)·m ∈ P_r` for `1 ≤ i, j ≤ n` (0-based in the result).
pub fn order_matrix(n: i64, m: i64, ctx: &BeattyContext) -> Vec<Vec<bool>> {
    (1..=n).map(|i| (1..=n).map(|j| ctx.member_p((j - i) * m)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IrrationalSlope;
    use crate::logic::parse;

    fn phi() -> BeattyContext {
        BeattyContext::new(IrrationalSlope::golden())
    }

    #[test]
    fn brute_force_examples() {
        let c = phi();
        assert_eq!(brute_force_pattern(&c, &PatternQuery::new(vec![0], vec![1], &[0]).unwrap(), 10), Some(1));
        assert_eq!(brute_force_pattern(&c, &PatternQuery::new(vec![0, 0], vec![1, 1], &[0]).unwrap(), 10), None);
        let q = PatternQuery::new(vec![0, 0], vec![1, 2], &[0, 1]).unwrap();
        assert_eq!(brute_force_pattern(&c, &q, 10), Some(-2));
    }

    #[test]
    fn enumeration_examples() {
        let c = phi();
        assert_eq!(enumerate_definable(&parse("P(x)").unwrap(), 1, 10, &c).unwrap(), vec![1, 3, 4, 6, 8, 9]);
        assert_eq!(enumerate_definable(&parse("x = 0").unwrap(), -5, 5, &c).unwrap(), vec![0]);
        assert_eq!(enumerate_definable(&parse("P(x) & P(x+1)").unwrap(), 1, 10, &c).unwrap(), vec![3, 8]);
        let two = parse("P(x) & P(y)").unwrap();
        assert_eq!(enumerate_definable(&two, 0, 1, &c), Err(AnalysisError::TooManyFreeVariables(2)));
    }

    #[test]
    fn quantified_enumeration() {
        let c = phi();
        // x is the start of a run x, x+1 in P iff it is a member followed by a member.
        let f = parse("exists y (y = x + 1 & P(x) & P(y))").unwrap();
        assert_eq!(enumerate_definable(&f, 1, 10, &c).unwrap(), vec![3, 8]);
    }

    #[test]
    fn gap_examples() {
        let c = phi();
        let p = parse("P(x)").unwrap();
        assert_eq!(gap_report(&p, 1, 10_000, &c).unwrap().max_gap, 2);
        // 0 is removed, so −⌊r⌋−1 and ⌊r⌋ are consecutive: one gap of 2⌊r⌋ + 1.
        assert_eq!(gap_report(&p, -10_000, 10_000, &c).unwrap().max_gap, 3);
        let c3 = BeattyContext::new(IrrationalSlope::new(1, 1, 1, 3).unwrap());
        assert_eq!(gap_report(&p, 1, 2000, &c3).unwrap().max_gap, 3);
        assert_eq!(gap_report(&p, -2000, 2000, &c3).unwrap().max_gap, 5);
        let r = gap_report(&parse("x = 0").unwrap(), -5, 5, &c).unwrap();
        assert_eq!((r.points_found, r.max_gap), (1, 0));
    }

    #[test]
    fn edge_gaps() {
        let r = gap_report_points(&[1, 2, 3], -10, 10);
        assert_eq!((r.max_gap, r.leading_gap, r.trailing_gap, r.gap_bound_estimate), (1, 11, 7, 11));
        let r = gap_report_points(&[], 0, 9);
        assert_eq!((r.points_found, r.gap_bound_estimate), (0, 10));
    }

    #[test]
    fn instability_examples() {
        let c = phi();
        assert_eq!(instability_witness(1, &c), Some(1));
        let rt2 = BeattyContext::new(IrrationalSlope::sqrt(2).unwrap());
        let m = instability_witness(3, &rt2).unwrap();
        for j in 1..=3 {
            assert!(rt2.member_p(j * m) && !rt2.member_p(-j * m));
        }
        let mat = order_matrix(3, m, &rt2);
        assert_eq!(mat, vec![vec![false, true, true], vec![false, false, true], vec![false, false, false]]);
    }
}
