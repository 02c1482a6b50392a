//! Exact arithmetic, circle geometry and decision procedures for `(ℤ, <, +, P_r)`,
//! where `P_r = {⌊n·r⌋ : n ≠ 0}` for a quadratic irrational `r > 1`.

pub mod analysis;
pub mod beatty;
pub mod circle;
pub mod exact;
pub mod logic;
pub mod pattern;

pub use beatty::BeattyContext;
pub use circle::{Circle, CirclePoint, OrientedInterval};
pub use exact::IrrationalSlope;
pub use logic::{eliminate, eval_ground, eval_sentence, parse, parse_sentence, Formula, SentenceValue, Term};
pub use pattern::{realizes_pattern, Certificate, Decision, PatternQuery};
