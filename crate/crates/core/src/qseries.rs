//! Truncated power series in q^(1/2) with exact integer coefficients.
//!
//! Exponents are stored doubled: index `d` holds the coefficient of q^(d/2).
//! A series is known for all `d ≤ max_d` and unknown beyond.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<BigInt>,
}

/// Grading of a nonzero series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Grading {
    Integral,
    HalfIntegral,
}

impl QSeries {
    pub fn zero(max_d: u32) -> Self {
        QSeries { coeffs: vec![BigInt::zero(); max_d as usize + 1] }
    }

    pub fn one(max_d: u32) -> Self {
        Self::monomial(0, BigInt::one(), max_d)
    }

    pub fn monomial(d: u32, c: BigInt, max_d: u32) -> Self {
        let mut s = Self::zero(max_d);
        if d <= max_d {
            s.coeffs[d as usize] = c;
        }
        s
    }

    pub fn from_pairs(max_d: u32, pairs: impl IntoIterator<Item = (u32, BigInt)>) -> Result<Self> {
        let mut s = Self::zero(max_d);
        for (d, c) in pairs {
            if d > max_d {
                return Err(Error::ExponentGrid(format!("doubled exponent {d} beyond truncation {max_d}")));
            }
            s.coeffs[d as usize] += c;
        }
        Ok(s)
    }

    pub fn max_d(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeff(&self, d: u32) -> &BigInt {
        &self.coeffs[d as usize]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add_at(&mut self, d: u32, c: &BigInt) {
        if d <= self.max_d() {
            self.coeffs[d as usize] += c;
        }
    }

    /// Nonzero terms as (doubled exponent, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(d, c)| (d as u32, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn leading(&self) -> Option<(u32, &BigInt)> {
        self.terms().next()
    }

    pub fn truncate(&self, max_d: u32) -> Self {
        let m = max_d.min(self.max_d()) as usize;
        QSeries { coeffs: self.coeffs[..=m].to_vec() }
    }

    pub fn add(&self, o: &QSeries) -> QSeries {
        let m = self.max_d().min(o.max_d()) as usize;
        QSeries { coeffs: (0..=m).map(|d| &self.coeffs[d] + &o.coeffs[d]).collect() }
    }

    pub fn sub(&self, o: &QSeries) -> QSeries {
        let m = self.max_d().min(o.max_d()) as usize;
        QSeries { coeffs: (0..=m).map(|d| &self.coeffs[d] - &o.coeffs[d]).collect() }
    }

    pub fn mul(&self, o: &QSeries) -> QSeries {
        let m = self.max_d().min(o.max_d()) as usize;
        let mut out = vec![BigInt::zero(); m + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(m + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(m + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    pub fn scale(&self, k: &BigInt) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Exact division of every coefficient; fails when some coefficient is
    /// not divisible.
    pub fn div_exact(&self, k: &BigInt) -> Result<QSeries> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (d, c) in self.coeffs.iter().enumerate() {
            if !(c % k).is_zero() {
                return Err(Error::Verification(format!("coefficient {c} at q^({d}/2) not divisible by {k}")));
            }
            out.push(c / k);
        }
        Ok(QSeries { coeffs: out })
    }

    /// Multiplies by q^(d/2), keeping the truncation point.
    pub fn shift(&self, d: u32) -> QSeries {
        let mut s = Self::zero(self.max_d());
        for (e, c) in self.terms() {
            s.add_at(e + d, c);
        }
        s
    }

    /// Substitutes q^(1/2) ↦ -q^(1/2).
    pub fn negate_half(&self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().enumerate().map(|(d, c)| if d % 2 == 1 { -c } else { c.clone() }).collect() }
    }

    pub fn pow(&self, mut n: u32) -> QSeries {
        let mut base = self.clone();
        let mut acc = Self::one(self.max_d());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn grading(&self) -> Result<Option<Grading>> {
        let (mut even, mut odd) = (false, false);
        for (d, _) in self.terms() {
            if d % 2 == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
        match (even, odd) {
            (false, false) => Ok(None),
            (true, false) => Ok(Some(Grading::Integral)),
            (false, true) => Ok(Some(Grading::HalfIntegral)),
            (true, true) => Err(Error::ExponentGrid("series mixes integral and half-integral exponents".into())),
        }
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn first_difference(&self, o: &QSeries) -> Option<(u32, BigInt, BigInt)> {
        let m = self.max_d().min(o.max_d());
        (0..=m).find(|&d| self.coeff(d) != o.coeff(d)).map(|d| (d, self.coeff(d).clone(), o.coeff(d).clone()))
    }

    pub fn pairs(&self) -> Vec<(u32, String)> {
        self.terms().map(|(d, c)| (d, c.to_string())).collect()
    }
}

/// Π_{i ≥ 1} (1 - x^i)^(-1) in the variable x = q^(step/2).
fn partition_series(step: u32, offset: u32, max_d: u32) -> QSeries {
    // Π_i 1/(1 - q^((step·i - offset)/2)), built factor by factor.
    let mut s = QSeries::one(max_d);
    let mut i = 1u32;
    while step * i - offset <= max_d {
        let e = (step * i - offset) as usize;
        // Multiplying by 1/(1 - x^e) is a running sum with stride e.
        for d in e..=max_d as usize {
            let prev = s.coeffs[d - e].clone();
            s.coeffs[d] += prev;
        }
        i += 1;
    }
    s
}

/// P_n = Π_{i ≥ 1} (1 - q^i)^(-n).
pub fn euler_p(n: u32, max_d: u32) -> QSeries {
    partition_series(2, 0, max_d).pow(n)
}

/// Q_n = Π_{i ≥ 1} (1 + q^i)^(-n).
pub fn euler_q(n: u32, max_d: u32) -> QSeries {
    // (1 + q^i)^(-1) = (1 - q^i)/(1 - q^{2i}), so Π(1 + q^i)^(-1) = Π(1 - q^(2i-1)).
    let mut s = QSeries::one(max_d);
    let mut i = 1u32;
    while 2 * (2 * i - 1) <= max_d {
        let e = 2 * (2 * i - 1);
        let f = QSeries::one(max_d).sub(&QSeries::monomial(e, BigInt::one(), max_d));
        s = s.mul(&f);
        i += 1;
    }
    s.pow(n)
}

/// A_n = Π_{i ≥ 1} (1 - q^(i - 1/2))^(-n).
pub fn twisted_a(n: u32, max_d: u32) -> QSeries {
    partition_series(2, 1, max_d).pow(n)
}

/// B_n = Π_{i ≥ 1} (1 + q^(i - 1/2))^(-n).
pub fn twisted_b(n: u32, max_d: u32) -> QSeries {
    twisted_a(n, max_d).negate_half()
}

fn fmt_exp(d: u32) -> String {
    match (d % 2, d / 2) {
        (0, 1) => "q".into(),
        (0, e) => format!("q^{e}"),
        (_, _) => format!("q^{d}/2"),
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.terms() {
            let (neg, abs) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if d == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&fmt_exp(d))?;
            } else {
                write!(f, "{abs}{}", fmt_exp(d))?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        let m = self.max_d() + 1;
        write!(f, " + O({})", fmt_exp(m))
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    max_d: u32,
    pairs: Vec<(u32, String)>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire { max_d: self.max_d(), pairs: self.pairs() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        let pairs: std::result::Result<Vec<(u32, BigInt)>, _> =
            w.pairs.into_iter().map(|(e, c)| c.parse::<BigInt>().map(|c| (e, c))).collect();
        let pairs = pairs.map_err(serde::de::Error::custom)?;
        QSeries::from_pairs(w.max_d, pairs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn v(s: &QSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn partition_numbers() {
        // Doubled exponents: only even indices are populated.
        let p = euler_p(1, 16);
        let evens: Vec<i64> = v(&p).into_iter().step_by(2).collect();
        assert_eq!(evens, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        // η-type product check: P_1 · Π(1 - q^i) = 1.
        let mut prod = QSeries::one(16);
        for i in 1..=8 {
            prod = prod.mul(&QSeries::one(16).sub(&QSeries::monomial(2 * i, BigInt::one(), 16)));
        }
        assert_eq!(p.mul(&prod), QSeries::one(16));
    }

    #[test]
    fn distinct_part_inverse() {
        // Π(1 + q^i) counts partitions into distinct parts: 1,1,1,2,2,3,4,5.
        let q = euler_q(1, 14);
        let mut inv = QSeries::one(14);
        for i in 1..=7 {
            inv = inv.mul(&QSeries::one(14).add(&QSeries::monomial(2 * i, BigInt::one(), 14)));
        }
        let evens: Vec<i64> = v(&inv).into_iter().step_by(2).collect();
        assert_eq!(evens, vec![1, 1, 1, 2, 2, 3, 4, 5]);
        assert_eq!(q.mul(&inv), QSeries::one(14));
    }

    #[test]
    fn twisted_products() {
        let a = twisted_a(1, 6);
        // 1/(1-x)(1-x^3)(1-x^5)… in x = q^(1/2): partitions into odd parts.
        assert_eq!(v(&a), vec![1, 1, 1, 2, 2, 3, 4]);
        let b = twisted_b(1, 6);
        assert_eq!(v(&b), vec![1, -1, 1, -2, 2, -3, 4]);
        let a16 = twisted_a(16, 3);
        assert_eq!(a16.coeff(1), &BigInt::from(16));
    }

    #[test]
    fn grading_and_display() {
        let s = QSeries::from_pairs(4, [(1, BigInt::from(1)), (3, BigInt::from(5))]).unwrap();
        assert_eq!(s.grading().unwrap(), Some(Grading::HalfIntegral));
        assert_eq!(s.to_string(), "q^1/2 + 5q^3/2 + O(q^5/2)");
        let t = QSeries::from_pairs(4, [(0, BigInt::from(1)), (2, BigInt::from(8))]).unwrap();
        assert_eq!(t.to_string(), "1 + 8q + O(q^5/2)");
        assert!(t.add(&s).grading().is_err());
        assert_eq!(QSeries::zero(2).grading().unwrap(), None);
        let json = serde_json::to_string(&t).unwrap();
        let back: QSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn shift_and_truncation() {
        let t = QSeries::from_pairs(4, [(0, BigInt::from(1)), (2, BigInt::from(8))]).unwrap();
        let s = t.shift(3);
        assert_eq!(s.max_d(), 4);
        assert_eq!(s.leading(), Some((3, &BigInt::from(1))));
        assert_eq!(s.coeff(4), &BigInt::zero());
        assert_eq!(t.truncate(1).max_d(), 1);
    }
}
