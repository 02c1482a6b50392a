//! The Beatty set `P_r = {⌊nr⌋ : n ≠ 0}` and its Sturmian word.

use std::collections::HashSet;

use crate::circle::Circle;
use crate::exact::IrrationalSlope;

/// Slope-bound view of `P_r`, the Sturmian word and the circle group.
#[derive(Debug, Clone)]
pub struct BeattyContext {
    slope: IrrationalSlope,
    circle: Circle,
}

impl BeattyContext {
    pub fn new(slope: IrrationalSlope) -> Self {
        let circle = Circle::new(slope.clone());
        Self { slope, circle }
    }

    pub fn slope(&self) -> &IrrationalSlope {
        &self.slope
    }

    pub fn circle(&self) -> &Circle {
        &self.circle
    }

    /// `b_n = ⌊nr⌋`.
    pub fn b(&self, n: i64) -> i64 {
        self.slope.floor_mul(n)
    }

    /// `s_n = ⌊(n+1)/r⌋ − ⌊n/r⌋`.
    pub fn s(&self, n: i64) -> u8 {
        let v = self.slope.floor_div(n + 1) - self.slope.floor_div(n);
        debug_assert!(v == 0 || v == 1);
        v as u8
    }

    /// `n ∈ P_r`, decided as `{n/r} > 1 − 1/r`.
    pub fn member_p(&self, n: i64) -> bool {
        // {n/r} > 1 − 1/r  ⇔  (n+1)/r − ⌊n/r⌋ − 1 > 0; never zero since r is irrational.
        let f = self.slope.floor_div(n);
        let (ip, iq, is) = self.slope.inverse_parts();
        let m = i128::from(n) + 1;
        let x = m * ip - (i128::from(f) + 1) * is;
        crate::exact::sign_surd(x, m * iq, self.slope.d().into()) > 0
    }

    /// `s_1 … s_len`.
    pub fn sturmian_prefix(&self, len: usize) -> Vec<u8> {
        (1..=len as i64).map(|n| self.s(n)).collect()
    }

    /// Number of distinct length-`m` factors of `s_1 … s_window`.
    ///
    /// Undercounts if the window is too short to contain every factor.
    pub fn factor_count(&self, m: usize, window: usize) -> usize {
        if m == 0 {
            return 1;
        }
        let word = self.sturmian_prefix(window);
        word.windows(m).collect::<HashSet<_>>().len()
    }
}
