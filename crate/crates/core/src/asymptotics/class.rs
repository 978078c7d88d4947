use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Asymptotic description of a ranked weight sequence `(p_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum AsymptoticClass {
    /// Exactly `count` entries.
    Finite { count: u64 },
    /// `p_r^c / r -> s`.
    Polynomial { c: u32, s: f64 },
    /// `p_r / log r -> s`.
    Logarithmic { s: f64 },
}

impl AsymptoticClass {
    pub fn case_name(&self) -> &'static str {
        match self {
            AsymptoticClass::Finite { .. } => "finite",
            AsymptoticClass::Polynomial { .. } => "polynomial",
            AsymptoticClass::Logarithmic { .. } => "logarithmic",
        }
    }

    pub fn rate(&self) -> Option<f64> {
        match *self {
            AsymptoticClass::Finite { .. } => None,
            AsymptoticClass::Polynomial { s, .. } | AsymptoticClass::Logarithmic { s } => Some(s),
        }
    }
}

pub(crate) fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln(exp(a) + exp(b))` without overflow.
pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

fn compose_pair(a: AsymptoticClass, b: AsymptoticClass) -> Result<AsymptoticClass> {
    use AsymptoticClass::*;
    Ok(match (a, b) {
        (Finite { count: x }, Finite { count: y }) => Finite {
            count: x.checked_mul(y).ok_or(Error::CountOverflow("composition"))?,
        },
        (Finite { count: 0 }, _) | (_, Finite { count: 0 }) => Finite { count: 0 },
        // n translated copies of the same sequence: an n-fold equal-degree union.
        (Finite { count: n }, Polynomial { c, s }) | (Polynomial { c, s }, Finite { count: n }) => {
            Polynomial { c, s: s / n as f64 }
        }
        (Finite { .. }, Logarithmic { s }) | (Logarithmic { s }, Finite { .. }) => Logarithmic { s },
        (Polynomial { c: c1, s: s1 }, Polynomial { c: c2, s: s2 }) => {
            // Counting function x^c1/s1 convolved with x^c2/s2 gives
            // x^(c1+c2) c1! c2! / ((c1+c2)! s1 s2).
            let c = c1 + c2;
            let ln_s = s1.ln() + s2.ln() + ln_factorial(c) - ln_factorial(c1) - ln_factorial(c2);
            Polynomial { c, s: ln_s.exp() }
        }
        (Logarithmic { s }, Polynomial { .. }) | (Polynomial { .. }, Logarithmic { s }) => {
            Logarithmic { s }
        }
        (Logarithmic { s: s1 }, Logarithmic { s: s2 }) => Logarithmic { s: s1.min(s2) },
    })
}

fn union_pair(a: AsymptoticClass, b: AsymptoticClass) -> Result<AsymptoticClass> {
    use AsymptoticClass::*;
    Ok(match (a, b) {
        (Finite { count: x }, Finite { count: y }) => Finite {
            count: x.checked_add(y).ok_or(Error::CountOverflow("union"))?,
        },
        (Finite { .. }, other) | (other, Finite { .. }) => other,
        (Polynomial { c: c1, s: s1 }, Polynomial { c: c2, s: s2 }) => {
            if c1 == c2 {
                Polynomial {
                    c: c1,
                    s: 1.0 / (1.0 / s1 + 1.0 / s2),
                }
            } else if c1 > c2 {
                a
            } else {
                b
            }
        }
        (Logarithmic { s }, Polynomial { .. }) | (Polynomial { .. }, Logarithmic { s }) => {
            Logarithmic { s }
        }
        (Logarithmic { s: s1 }, Logarithmic { s: s2 }) => Logarithmic { s: s1.min(s2) },
    })
}

/// Descriptor of the composition (all sums with one entry from each input).
pub fn compose(descriptors: &[AsymptoticClass]) -> Result<AsymptoticClass> {
    let (first, rest) = descriptors.split_first().ok_or(Error::EmptyList)?;
    rest.iter().try_fold(*first, |acc, d| compose_pair(acc, *d))
}

/// Descriptor of the multiset union of the inputs.
pub fn union_of(descriptors: &[AsymptoticClass]) -> Result<AsymptoticClass> {
    let (first, rest) = descriptors.split_first().ok_or(Error::EmptyList)?;
    rest.iter().try_fold(*first, |acc, d| union_pair(acc, *d))
}
