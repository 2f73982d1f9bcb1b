use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Which family of sign conditions a difference check enforces.
///
/// With `∇_h = -Δ_h` per coordinate, an order-`p` backward difference is
/// `(-1)^{|p|} Δ^p_h`. The three modes therefore require, for every nonzero `p`:
///
/// * increasing: `Δ^p_h f >= 0`
/// * decreasing: `∇^p_h f >= 0`, i.e. `(-1)^{|p|} Δ^p_h f >= 0`
/// * alternating: `∇^p_h f <= 0`, i.e. `(-1)^{|p|+1} Δ^p_h f >= 0`
///
/// Increasing submodular set functions are exactly the fully 2-alternating ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Increasing,
    Decreasing,
    Alternating,
}

impl Mode {
    /// Maps a forward difference of total order `order` to the quantity that
    /// must be nonnegative under this mode.
    pub fn oriented<T: Scalar>(self, delta: T, order: usize) -> T {
        match self {
            Mode::Increasing => delta,
            Mode::Decreasing => delta.signed_by_parity(order),
            Mode::Alternating => delta.signed_by_parity(order + 1),
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Mode::Increasing => "inc",
            Mode::Decreasing => "dec",
            Mode::Alternating => "alt",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Increasing => "increasing",
            Mode::Decreasing => "decreasing",
            Mode::Alternating => "alternating",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inc" | "increasing" => Ok(Mode::Increasing),
            "dec" | "decreasing" => Ok(Mode::Decreasing),
            "alt" | "alternating" => Ok(Mode::Alternating),
            other => Err(format!("unknown mode `{other}` (expected inc, dec or alt)")),
        }
    }
}

/// Outcome of a monotonicity check: either the property holds or a witness
/// of a violated sign condition is reported.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<W> {
    Holds,
    Violated(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Violated(w) => Some(w),
        }
    }

    pub fn into_witness(self) -> Option<W> {
        match self {
            Verdict::Holds => None,
            Verdict::Violated(w) => Some(w),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn orientation_signs() {
        assert_eq!(Mode::Increasing.oriented(rat(-1), 2), rat(-1));
        assert_eq!(Mode::Decreasing.oriented(rat(-1), 1), rat(1));
        assert_eq!(Mode::Decreasing.oriented(rat(-1), 2), rat(-1));
        assert_eq!(Mode::Alternating.oriented(rat(-1), 2), rat(1));
        assert_eq!(Mode::Alternating.oriented(rat(2), 1), rat(2));
    }

    #[test]
    fn parses_short_and_long_names() {
        for m in [Mode::Increasing, Mode::Decreasing, Mode::Alternating] {
            assert_eq!(m.short_name().parse::<Mode>().unwrap(), m);
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
        assert!("up".parse::<Mode>().is_err());
    }
}
