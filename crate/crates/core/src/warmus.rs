//! Warmus numbers: directed intervals `[l, u]` with no ordering constraint
//! between the endpoints.
//!
//! `l` is the lower constraint (`x >= l`) and `u` the upper constraint
//! (`x <= u`). When `l > u` the number is a pseudosegment. With componentwise
//! addition and scalar action the set is a 2D real vector space, and the
//! information order makes it a poset in which adding `d` is monotone exactly
//! when `d` sits above `[0, 0]`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Warmus {
    pub l: f64,
    pub u: f64,
}

impl Warmus {
    pub const ZERO: Warmus = Warmus { l: 0.0, u: 0.0 };

    pub const fn new(l: f64, u: f64) -> Self {
        Warmus { l, u }
    }

    /// Degenerate interval `[x, x]`.
    pub const fn point(x: f64) -> Self {
        Warmus { l: x, u: x }
    }

    pub fn is_pseudosegment(&self) -> bool {
        self.l > self.u
    }

    pub fn is_proper(&self) -> bool {
        self.l <= self.u
    }

    /// Componentwise vector-space action. For negative `c` this does not swap
    /// the endpoints.
    pub fn scale(self, c: f64) -> Self {
        Warmus::new(c * self.l, c * self.u)
    }

    /// Information order: `self ⊑ other` iff `other` is at least as
    /// constrained as `self`.
    pub fn leq(&self, other: &Warmus) -> bool {
        self.l <= other.l && other.u <= self.u
    }

    /// Order-reversing involution `[l, u] -> [u, l]`.
    pub fn dual(self) -> Self {
        Warmus::new(self.u, self.l)
    }

    pub fn anti_approximates_zero(&self) -> bool {
        Warmus::ZERO.leq(self)
    }

    /// `[relu(l), -relu(-u)]`. The result always anti-approximates zero.
    pub fn monotone_clamp(self) -> Self {
        Warmus::new(relu(self.l), -relu(-self.u))
    }
}

impl Add for Warmus {
    type Output = Warmus;
    fn add(self, rhs: Warmus) -> Warmus {
        Warmus::new(self.l + rhs.l, self.u + rhs.u)
    }
}

impl Sub for Warmus {
    type Output = Warmus;
    fn sub(self, rhs: Warmus) -> Warmus {
        self + (-rhs)
    }
}

impl Neg for Warmus {
    type Output = Warmus;
    fn neg(self) -> Warmus {
        Warmus::new(-self.l, -self.u)
    }
}

impl fmt::Display for Warmus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.l, self.u)
    }
}

pub fn w_add(a: Warmus, b: Warmus) -> Warmus {
    a + b
}

pub fn w_neg(a: Warmus) -> Warmus {
    -a
}

pub fn w_scale(c: f64, a: Warmus) -> Warmus {
    a.scale(c)
}

pub fn w_leq(a: Warmus, b: Warmus) -> bool {
    a.leq(&b)
}

pub fn w_dual(a: Warmus) -> Warmus {
    a.dual()
}

pub fn anti_approximates_zero(a: Warmus) -> bool {
    a.anti_approximates_zero()
}

pub fn monotone_clamp(a: Warmus) -> Warmus {
    a.monotone_clamp()
}

pub fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// Concatenated ReLU: `(relu(x), relu(-x))`.
pub fn crelu(x: f64) -> (f64, f64) {
    (relu(x), relu(-x))
}

/// The two standard quasi-metrics on the reals, `q1(x, y) = relu(x - y)` and
/// its dual `q2(x, y) = q1(y, x)`.
pub fn quasi_metrics(x: f64, y: f64) -> (f64, f64) {
    (relu(x - y), relu(y - x))
}

/// How an accumulator reacts to an update that would not be monotone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolicyVariant {
    IgnoreNonMonotonic,
    ClampToMonotonic,
    InvoluteOnNonMonotonic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccumulatorPolicy {
    pub variant: PolicyVariant,
    pub involute_only_if_pseudosegment: bool,
}

impl AccumulatorPolicy {
    pub fn new(variant: PolicyVariant) -> Self {
        AccumulatorPolicy {
            variant,
            involute_only_if_pseudosegment: true,
        }
    }
}

impl Default for AccumulatorPolicy {
    fn default() -> Self {
        AccumulatorPolicy::new(PolicyVariant::IgnoreNonMonotonic)
    }
}

/// Accumulated Warmus value with separate value and update inputs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarmusAccumulatorState {
    pub v: Warmus,
    pub policy: AccumulatorPolicy,
}

impl WarmusAccumulatorState {
    pub fn new(v: Warmus, policy: AccumulatorPolicy) -> Self {
        WarmusAccumulatorState { v, policy }
    }

    fn may_involute(&self) -> bool {
        !self.policy.involute_only_if_pseudosegment || self.v.is_pseudosegment()
    }

    pub fn step(self, delta: Warmus, trigger_involution: bool) -> Self {
        accumulator_step(self, delta, trigger_involution)
    }
}

/// One up-movement of the Warmus accumulator.
///
/// A triggered involution swaps the endpoints of `v` and ignores `delta` for
/// this step. Otherwise monotone updates are added and non-monotone ones are
/// handled by the policy.
pub fn accumulator_step(
    state: WarmusAccumulatorState,
    delta: Warmus,
    trigger_involution: bool,
) -> WarmusAccumulatorState {
    if trigger_involution && state.may_involute() {
        return WarmusAccumulatorState {
            v: state.v.dual(),
            ..state
        };
    }
    if delta.anti_approximates_zero() {
        return WarmusAccumulatorState {
            v: state.v + delta,
            ..state
        };
    }
    let v = match state.policy.variant {
        PolicyVariant::IgnoreNonMonotonic => state.v,
        PolicyVariant::ClampToMonotonic => state.v + delta.monotone_clamp(),
        PolicyVariant::InvoluteOnNonMonotonic => {
            if state.may_involute() {
                state.v.dual()
            } else {
                state.v
            }
        }
    };
    WarmusAccumulatorState { v, ..state }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(l: f64, u: f64) -> Warmus {
        Warmus::new(l, u)
    }

    #[test]
    fn add_examples() {
        assert_eq!(w_add(w(2.0, 3.0), w(1.0, 1.0)), w(3.0, 4.0));
        assert_eq!(w_add(w(3.0, 2.0), w(-3.0, -2.0)), Warmus::ZERO);
        let r = w_add(w(1.0, 2.0), w(1.0, -1.0));
        assert_eq!(r, w(2.0, 1.0));
        assert!(r.is_pseudosegment());
    }

    #[test]
    fn neg_and_scale_examples() {
        assert_eq!(w_neg(w(3.0, 2.0)), w(-3.0, -2.0));
        assert_eq!(w_neg(Warmus::ZERO), Warmus::ZERO);
        assert_eq!(w_neg(w(-1.0, 4.0)), w(1.0, -4.0));
        assert_eq!(w_scale(2.0, w(1.0, 3.0)), w(2.0, 6.0));
        assert_eq!(w_scale(0.0, w(5.0, -7.0)), Warmus::ZERO);
        assert_eq!(w_scale(-1.0, w(3.0, 2.0)), w_neg(w(3.0, 2.0)));
    }

    #[test]
    fn order_and_dual_examples() {
        assert!(w_leq(Warmus::ZERO, w(1.0, -1.0)));
        assert!(!w_leq(Warmus::ZERO, w(1.0, 1.0)));
        assert!(w_leq(w(1.0, 3.0), w(2.0, 2.0)));
        assert_eq!(w_dual(w(3.0, 2.0)), w(2.0, 3.0));
        assert_eq!(w_dual(Warmus::ZERO), Warmus::ZERO);
        assert_eq!(w_dual(w(1.0, 4.0)), w(4.0, 1.0));
    }

    #[test]
    fn anti_approximation_and_clamp() {
        assert!(anti_approximates_zero(w(1.0, -1.0)));
        assert!(anti_approximates_zero(Warmus::ZERO));
        assert!(!anti_approximates_zero(w(1.0, 2.0)));
        assert_eq!(monotone_clamp(w(2.0, -3.0)), w(2.0, -3.0));
        assert_eq!(monotone_clamp(w(-1.0, 5.0)), Warmus::ZERO);
        assert_eq!(monotone_clamp(w(3.0, 1.0)), w(3.0, 0.0));
    }

    #[test]
    fn rectifier_examples() {
        assert_eq!(relu(3.0), 3.0);
        assert_eq!(relu(-2.0), 0.0);
        assert_eq!(relu(0.0), 0.0);
        assert_eq!(crelu(3.0), (3.0, 0.0));
        assert_eq!(crelu(-2.0), (0.0, 2.0));
        assert_eq!(crelu(0.0), (0.0, 0.0));
        assert_eq!(quasi_metrics(5.0, 3.0), (2.0, 0.0));
        assert_eq!(quasi_metrics(3.0, 5.0), (0.0, 2.0));
        assert_eq!(quasi_metrics(4.0, 4.0), (0.0, 0.0));
    }

    #[test]
    fn accumulator_accepts_monotone_update_under_every_policy() {
        for variant in [
            PolicyVariant::IgnoreNonMonotonic,
            PolicyVariant::ClampToMonotonic,
            PolicyVariant::InvoluteOnNonMonotonic,
        ] {
            let s = WarmusAccumulatorState::new(w(1.0, 2.0), AccumulatorPolicy::new(variant));
            assert_eq!(accumulator_step(s, w(1.0, -1.0), false).v, w(2.0, 1.0));
        }
    }

    #[test]
    fn accumulator_policies_on_non_monotone_update() {
        let ignore = WarmusAccumulatorState::new(
            w(1.0, 2.0),
            AccumulatorPolicy::new(PolicyVariant::IgnoreNonMonotonic),
        );
        assert_eq!(ignore.step(w(0.0, 3.0), false).v, w(1.0, 2.0));

        let clamp = WarmusAccumulatorState::new(
            w(1.0, 2.0),
            AccumulatorPolicy::new(PolicyVariant::ClampToMonotonic),
        );
        // clamp([2, 3]) = [2, 0]
        assert_eq!(clamp.step(w(2.0, 3.0), false).v, w(3.0, 2.0));

        let inv = AccumulatorPolicy::new(PolicyVariant::InvoluteOnNonMonotonic);
        // proper interval: no involution when restricted to pseudosegments
        let s = WarmusAccumulatorState::new(w(1.0, 2.0), inv);
        assert_eq!(s.step(w(0.0, 3.0), false).v, w(1.0, 2.0));
        let s = WarmusAccumulatorState::new(w(3.0, 1.0), inv);
        assert_eq!(s.step(w(0.0, 3.0), false).v, w(1.0, 3.0));
        let unrestricted = AccumulatorPolicy {
            variant: PolicyVariant::InvoluteOnNonMonotonic,
            involute_only_if_pseudosegment: false,
        };
        let s = WarmusAccumulatorState::new(w(1.0, 2.0), unrestricted);
        assert_eq!(s.step(w(0.0, 3.0), false).v, w(2.0, 1.0));
    }

    #[test]
    fn triggered_involution() {
        let s = WarmusAccumulatorState::new(w(3.0, 1.0), AccumulatorPolicy::default());
        let next = accumulator_step(s, Warmus::ZERO, true);
        assert_eq!(next.v, w(1.0, 3.0));
        // the involution here is anti-monotonic
        assert!(w_leq(next.v, s.v));

        // proper value with the pseudosegment restriction: trigger is ignored
        // and the delta is processed normally
        let s = WarmusAccumulatorState::new(w(1.0, 3.0), AccumulatorPolicy::default());
        assert_eq!(accumulator_step(s, w(1.0, -1.0), true).v, w(2.0, 2.0));
    }
}
