//! Linear inequalities `Σ c_e·x_e ≥ rhs` over edge variables.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

/// Coordinates of the edge variables: `p⁰ ∈ [0,1]` or `τ̄ = 2p⁰ - 1 ∈ [-1,1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Probability,
    Expectation,
}

impl Mode {
    /// Lower and upper end of each coordinate.
    pub fn bounds(self) -> (Rational, Rational) {
        match self {
            Mode::Probability => (int(0), int(1)),
            Mode::Expectation => (int(-1), int(1)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearInequality {
    /// Nonzero coefficients only.
    pub coeffs: BTreeMap<String, Rational>,
    pub rhs: Rational,
    pub label: String,
}

/// Identity of a row up to its label.
pub type RowKey = (Vec<(String, Rational)>, Rational);

impl LinearInequality {
    pub fn new<K: Into<String>>(
        coeffs: impl IntoIterator<Item = (K, Rational)>,
        rhs: Rational,
    ) -> Self {
        let mut map: BTreeMap<String, Rational> = BTreeMap::new();
        for (k, c) in coeffs {
            *map.entry(k.into()).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        LinearInequality {
            coeffs: map,
            rhs,
            label: String::new(),
        }
    }

    /// Integer-coefficient shorthand.
    pub fn from_ints(coeffs: &[(&str, i64)], rhs: i64) -> Self {
        Self::new(coeffs.iter().map(|&(k, c)| (k, int(c))), int(rhs))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn coeff(&self, var: &str) -> Rational {
        self.coeffs.get(var).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Scales by a positive factor to coprime integers; zero coefficients are dropped.
    ///
    /// The direction `≥` is never flipped, so the first coefficient may stay negative.
    pub fn normalized(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.retain(|_, c| !c.is_zero());
        let all = coeffs.values().chain(std::iter::once(&self.rhs));
        let lcm = all
            .clone()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let gcd = all.fold(BigInt::zero(), |acc, c| {
            acc.gcd(&(c.numer() * &lcm / c.denom()))
        });
        if gcd.is_zero() {
            return LinearInequality {
                coeffs,
                rhs: self.rhs.clone(),
                label: self.label.clone(),
            };
        }
        let scale = Rational::new(lcm, gcd);
        LinearInequality {
            coeffs: coeffs.into_iter().map(|(k, c)| (k, c * &scale)).collect(),
            rhs: &self.rhs * &scale,
            label: self.label.clone(),
        }
    }

    /// Normalized coefficients and bound, ignoring the label.
    pub fn key(&self) -> RowKey {
        let n = self.normalized();
        (n.coeffs.into_iter().collect(), n.rhs)
    }

    pub fn lhs(&self, value: impl Fn(&str) -> Rational) -> Rational {
        self.coeffs
            .iter()
            .map(|(k, c)| c * value(k))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// `lhs - rhs`; nonnegative exactly when the inequality holds.
    pub fn slack(&self, value: impl Fn(&str) -> Rational) -> Rational {
        self.lhs(value) - &self.rhs
    }

    pub fn holds(&self, value: impl Fn(&str) -> Rational) -> bool {
        !self.slack(value).is_negative()
    }

    pub fn holds_on(&self, values: &BTreeMap<String, Rational>) -> Result<bool> {
        for k in self.coeffs.keys() {
            if !values.contains_key(k) {
                return Err(Error::UnknownEdge(k.clone()));
            }
        }
        Ok(self.holds(|k| values[k].clone()))
    }

    /// Minimum of the left-hand side over the coordinate box.
    pub fn box_minimum(&self, mode: Mode) -> Rational {
        let (lo, hi) = mode.bounds();
        self.coeffs
            .values()
            .map(|c| if c.is_positive() { c * &lo } else { c * &hi })
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// True when every point of the box satisfies the row.
    pub fn is_box_trivial(&self, mode: Mode) -> bool {
        self.box_minimum(mode) >= self.rhs
    }

    /// Rewrites the row in the other coordinate mode.
    pub fn convert(&self, from: Mode, to: Mode) -> Self {
        let sum: Rational = self.coeffs.values().fold(Rational::zero(), |a, b| a + b);
        let two = int(2);
        let (coeffs, rhs) = match (from, to) {
            (a, b) if a == b => return self.clone(),
            // τ̄ = 2p - 1
            (Mode::Expectation, _) => (
                self.coeffs.iter().map(|(k, c)| (k.clone(), c * &two)).collect(),
                &self.rhs + sum,
            ),
            // p = (τ̄ + 1) / 2
            (Mode::Probability, _) => (
                self.coeffs.iter().map(|(k, c)| (k.clone(), c / &two)).collect(),
                &self.rhs - sum / &two,
            ),
        };
        LinearInequality {
            coeffs,
            rhs,
            label: self.label.clone(),
        }
        .normalized()
    }

    /// Image under the outcome flip of every edge in `flipped`.
    pub fn flip(&self, flipped: impl Fn(&str) -> bool, mode: Mode) -> Self {
        let mut rhs = self.rhs.clone();
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                if flipped(k) {
                    if mode == Mode::Probability {
                        // c·(1 - p) = c - c·p
                        rhs -= c;
                    }
                    (k.clone(), -c)
                } else {
                    (k.clone(), c.clone())
                }
            })
            .collect();
        LinearInequality {
            coeffs,
            rhs,
            label: self.label.clone(),
        }
    }

    /// `self + other`.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::new(
            self.coeffs
                .iter()
                .chain(&other.coeffs)
                .map(|(k, c)| (k.clone(), c.clone())),
            &self.rhs + &other.rhs,
        );
        out.label = String::new();
        out
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        assert!(factor.is_positive());
        LinearInequality {
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c * factor)).collect(),
            rhs: &self.rhs * factor,
            label: self.label.clone(),
        }
    }
}

impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            f.write_str("0")?;
        }
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            let term = if mag.is_one() {
                k.clone()
            } else {
                format!("{}·{k}", rational::format(&mag))
            };
            match (i, c.is_negative()) {
                (0, false) => write!(f, "{term}")?,
                (0, true) => write!(f, "-{term}")?,
                (_, false) => write!(f, " + {term}")?,
                (_, true) => write!(f, " - {term}")?,
            }
        }
        write!(f, " >= {}", rational::format(&self.rhs))
    }
}

#[derive(Serialize, Deserialize)]
struct InequalityJson {
    #[serde(with = "rational::serde_map")]
    coeffs: BTreeMap<String, Rational>,
    #[serde(with = "rational::serde_str")]
    rhs: Rational,
    #[serde(default = "geq")]
    sense: String,
    #[serde(default)]
    label: String,
}

fn geq() -> String {
    "geq".into()
}

impl Serialize for LinearInequality {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InequalityJson {
            coeffs: self.coeffs.clone(),
            rhs: self.rhs.clone(),
            sense: geq(),
            label: self.label.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearInequality {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = InequalityJson::deserialize(d)?;
        let row = LinearInequality::new(raw.coeffs, raw.rhs).with_label(raw.label);
        match raw.sense.as_str() {
            "geq" | ">=" => Ok(row),
            "leq" | "<=" => Ok(LinearInequality {
                coeffs: row.coeffs.into_iter().map(|(k, c)| (k, -c)).collect(),
                rhs: -row.rhs,
                label: row.label,
            }),
            other => Err(D::Error::custom(format!("unknown sense `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn normalization() {
        let r = LinearInequality::new([("a", frac(1, 2)), ("b", frac(-3, 2))], frac(-1, 1));
        let n = r.normalized();
        assert_eq!(n.coeff("a"), int(1));
        assert_eq!(n.coeff("b"), int(-3));
        assert_eq!(n.rhs, int(-2));
        let r = LinearInequality::from_ints(&[("a", -4), ("b", 6)], 2).normalized();
        assert_eq!(r.coeff("a"), int(-2));
        assert_eq!(r.rhs, int(1));
        let z = LinearInequality::from_ints(&[("a", 0)], 3);
        assert!(z.is_constant());
    }

    #[test]
    fn box_trivial() {
        let r = LinearInequality::from_ints(&[("a", 1), ("b", 1)], -2);
        assert!(r.is_box_trivial(Mode::Expectation));
        let r = LinearInequality::from_ints(&[("a", 1)], -1);
        assert!(r.is_box_trivial(Mode::Expectation));
        let chsh = LinearInequality::from_ints(&[("a", 1), ("b", 1), ("c", 1), ("d", -1)], -2);
        assert!(!chsh.is_box_trivial(Mode::Expectation));
        assert_eq!(chsh.box_minimum(Mode::Expectation), int(-4));
    }

    #[test]
    fn chsh_conversion() {
        let e = LinearInequality::from_ints(&[("a", 1), ("b", 1), ("c", 1), ("d", -1)], -2);
        let p = e.convert(Mode::Expectation, Mode::Probability);
        assert_eq!(p.key(), LinearInequality::from_ints(&[("a", 1), ("b", 1), ("c", 1), ("d", -1)], 0).key());
        assert_eq!(p.convert(Mode::Probability, Mode::Expectation).key(), e.key());
    }

    #[test]
    fn flip_sample() {
        // a + b + c - d <= 2 flipped on a and c gives a - b + c + d >= 0
        let r = LinearInequality::from_ints(&[("a", -1), ("b", -1), ("c", -1), ("d", 1)], -2);
        let f = r.flip(|k| k == "a" || k == "c", Mode::Probability);
        let want = LinearInequality::from_ints(&[("a", 1), ("b", -1), ("c", 1), ("d", 1)], 0);
        assert_eq!(f.key(), want.key());
    }

    #[test]
    fn json() {
        let r: LinearInequality =
            serde_json::from_str(r#"{"coeffs":{"a":"1","b":-1},"rhs":"1/2","sense":"leq"}"#).unwrap();
        assert_eq!(r.coeff("a"), int(-1));
        assert_eq!(r.rhs, frac(-1, 2));
        let back: LinearInequality = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
