//! Fincke–Pohst enumeration of `λ + L` inside a ball.
//!
//! Pruning uses a floating-point Cholesky form of the Gram matrix with a
//! slightly inflated bound; every emitted vector is accepted on its exact
//! integer norm, which is carried along incrementally.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::intmat::{inverse_rational, Row};
use super::reduce::lll;
use super::{raw_dot, RationalLattice};
use crate::error::{Error, Result};

pub const DEFAULT_CEILING: u64 = 60_000_000;

pub struct Enumerator {
    r: usize,
    n: usize,
    basis: Vec<Row>,
    gram: Vec<i64>,
    q: Vec<f64>,
    ginv: Vec<Vec<BigRational>>,
    ln_covolume: f64,
    ceiling: u64,
}

/// A coset `λ + L` prepared for enumeration.
#[derive(Debug, Clone)]
pub struct Shift {
    pub vector: Row,
    dots: Vec<i64>,
    norm: i64,
    t: Vec<f64>,
    /// Coordinates of 2λ when 2λ ∈ L; then x ↦ -x preserves the coset.
    mirror: Option<Vec<i64>>,
}

fn ln_gamma_half(m: u32) -> f64 {
    // ln Γ(m/2) by the recurrence Γ(x + 1) = xΓ(x).
    let (mut x, mut acc) = if m % 2 == 0 { (1.0, 0.0) } else { (0.5, 0.5 * std::f64::consts::PI.ln()) };
    while x < (m as f64) / 2.0 - 1e-9 {
        acc += x.ln();
        x += 1.0;
    }
    acc
}

impl Enumerator {
    pub fn new(l: &RationalLattice, ceiling: u64) -> Result<Self> {
        let basis = lll(l.basis(), 0.99);
        let r = basis.len();
        let n = l.ambient_dim();
        let mut gram = vec![0i64; r * r];
        for i in 0..r {
            for j in 0..r {
                gram[i * r + j] = raw_dot(&basis[i], &basis[j]);
            }
        }
        // Q(y) = Σ_i q_ii (y_i + Σ_{j>i} q_ij y_j)².
        let mut q = vec![0f64; r * r];
        for i in 0..r {
            for j in i..r {
                q[i * r + j] = gram[i * r + j] as f64;
            }
        }
        for i in 0..r {
            for k in 0..i {
                let qki = q[k * r + i];
                q[i * r + i] -= q[k * r + k] * qki * qki;
                for j in i + 1..r {
                    q[i * r + j] -= q[k * r + k] * qki * q[k * r + j];
                }
            }
            if q[i * r + i] <= 0.0 {
                return Err(Error::NotFullRank);
            }
            for j in i + 1..r {
                q[i * r + j] /= q[i * r + i];
            }
        }
        let big_gram: Vec<Vec<BigRational>> = (0..r)
            .map(|i| (0..r).map(|j| BigRational::from_integer(BigInt::from(gram[i * r + j]))).collect())
            .collect();
        let ginv = inverse_rational(&big_gram).ok_or(Error::NotFullRank)?;
        let ln_covolume = 0.5 * (0..r).map(|i| q[i * r + i].ln()).sum::<f64>();
        Ok(Enumerator { r, n, basis, gram, q, ginv, ln_covolume, ceiling })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn basis(&self) -> &[Row] {
        &self.basis
    }

    pub fn shift(&self, v: &[i64]) -> Result<Shift> {
        if v.len() != self.n {
            return Err(Error::ShapeMismatch { expected: self.n, found: v.len() });
        }
        let dots: Vec<i64> = self.basis.iter().map(|b| raw_dot(v, b)).collect();
        let t: Vec<BigRational> = self
            .ginv
            .iter()
            .map(|row| row.iter().zip(&dots).fold(BigRational::zero(), |a, (g, &d)| a + g * BigInt::from(d)))
            .collect();
        // λ must lie in the span, else the enumeration would miss its orthogonal part.
        for k in 0..self.n {
            let s = t.iter().zip(&self.basis).fold(BigRational::zero(), |a, (c, b)| a + c * BigInt::from(b[k]));
            if s != BigRational::from_integer(BigInt::from(v[k])) {
                return Err(Error::Precondition("shift vector is not in the span of the lattice".into()));
            }
        }
        let two = BigRational::from_integer(2.into());
        let mirror: Option<Vec<i64>> = t
            .iter()
            .map(|x| {
                let y = x * &two;
                y.is_integer().then(|| y.to_integer().to_i64()).flatten()
            })
            .collect();
        Ok(Shift {
            vector: v.to_vec(),
            dots,
            norm: raw_dot(v, v),
            t: t.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
            mirror,
        })
    }

    /// Gaussian-heuristic estimate of the number of vectors of raw norm ≤ `max_raw`.
    pub fn predicted(&self, max_raw: i64) -> f64 {
        if self.r == 0 {
            return 1.0;
        }
        let r = self.r as f64;
        let ln_ball = 0.5 * r * std::f64::consts::PI.ln() + 0.5 * r * (max_raw.max(1) as f64).ln() - ln_gamma_half(self.r as u32 + 2);
        (ln_ball - self.ln_covolume).exp() + 1.0
    }

    fn guard(&self, max_raw: i64) -> Result<()> {
        let p = self.predicted(max_raw);
        if p > self.ceiling as f64 {
            return Err(Error::ResourceLimit { predicted: p as u64, ceiling: self.ceiling });
        }
        Ok(())
    }

    pub fn to_vector(&self, shift: &Shift, c: &[i64]) -> Row {
        let mut x = shift.vector.clone();
        for (ci, b) in c.iter().zip(&self.basis) {
            if *ci != 0 {
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi += ci * bi;
                }
            }
        }
        x
    }

    /// Visits coefficient vectors `c` with `|λ + Σ c_i b_i|² ≤ max_raw`.
    ///
    /// With `symmetric` set and 2λ ∈ L only one of each pair `±x` is visited,
    /// with weight 2 (the zero vector gets weight 1).
    pub fn walk<F: FnMut(&[i64], i64, u64)>(&self, shift: &Shift, max_raw: i64, symmetric: bool, mut f: F) -> Result<()> {
        self.guard(max_raw)?;
        if self.r == 0 {
            if shift.norm <= max_raw {
                f(&[], shift.norm, 1);
            }
            return Ok(());
        }
        let r = self.r;
        let mirror = if symmetric { shift.mirror.clone() } else { None };
        let mut st = Walk {
            e: self,
            shift,
            mirror: mirror.as_deref(),
            bound: max_raw as f64 * (1.0 + 1.0 / (1u64 << 20) as f64) + 1e-9,
            max_raw,
            c: vec![0; r],
            pf: vec![0.0; r + 1],
            fc: vec![0.0; (r + 1) * r],
            en: vec![0; r + 1],
            ex: vec![0; (r + 1) * r],
            emitted: 0,
            limit: self.ceiling.saturating_mul(4),
            over: false,
        };
        st.level(r - 1, mirror.is_some(), 1, &mut f);
        if st.over {
            return Err(Error::ResourceLimit { predicted: st.emitted, ceiling: self.ceiling });
        }
        Ok(())
    }

    /// Counts keyed by raw norm.
    pub fn count_by_raw(&self, shift: &Shift, max_raw: i64) -> Result<BTreeMap<i64, u64>> {
        let mut counts = vec![0u64; max_raw.max(0) as usize + 1];
        self.walk(shift, max_raw, true, |_, raw, w| counts[raw as usize] += w)?;
        Ok(counts.into_iter().enumerate().filter(|(_, c)| *c > 0).map(|(r, c)| (r as i64, c)).collect())
    }

    /// Streams every vector of `λ + L` with raw norm ≤ `max_raw`.
    pub fn for_each<F: FnMut(&[i64], i64)>(&self, shift: &Shift, max_raw: i64, mut f: F) -> Result<()> {
        self.walk(shift, max_raw, false, |c, raw, _| f(&self.to_vector(shift, c), raw))
    }
}

struct Walk<'a> {
    e: &'a Enumerator,
    shift: &'a Shift,
    mirror: Option<&'a [i64]>,
    bound: f64,
    max_raw: i64,
    c: Vec<i64>,
    /// pf[i]: float partial norm of levels ≥ i.
    pf: Vec<f64>,
    /// fc[i·r + k] = Σ_{j ≥ i} q_kj (c_j + t_j) for k < i.
    fc: Vec<f64>,
    /// en[i]: exact raw contribution of levels ≥ i (without |λ|²).
    en: Vec<i64>,
    /// ex[i·r + k] = Σ_{j ≥ i} c_j G_jk for k < i.
    ex: Vec<i64>,
    emitted: u64,
    limit: u64,
    over: bool,
}

impl Walk<'_> {
    fn level<F: FnMut(&[i64], i64, u64)>(&mut self, i: usize, flag: bool, weight: u64, f: &mut F) {
        let r = self.e.r;
        let qii = self.e.q[i * r + i];
        let ti = self.shift.t[i];
        let center = -ti - self.fc[(i + 1) * r + i];
        let rem = self.bound - self.pf[i + 1];
        if rem < 0.0 {
            return;
        }
        let rad = (rem / qii).sqrt();
        let mut lo = (center - rad).ceil() as i64;
        let hi = (center + rad).floor() as i64;
        let s = self.mirror.map(|m| m[i]).unwrap_or(0);
        if flag {
            // Keep one of each pair c ↔ -c - s.
            lo = lo.max((-s).div_euclid(2) + (-s).rem_euclid(2));
        }
        let gii = self.e.gram[i * r + i];
        let di = self.shift.dots[i];
        let cross = self.ex[(i + 1) * r + i];
        for c in lo..=hi {
            if self.over {
                return;
            }
            let y = c as f64 - center;
            let p = self.pf[i + 1] + qii * y * y;
            if p > self.bound {
                continue;
            }
            let en = self.en[i + 1] + c * (2 * di + c * gii + 2 * cross);
            self.c[i] = c;
            let fixed = flag && 2 * c == -s;
            let w = if flag && !fixed { 2 } else { weight };
            if i == 0 {
                let raw = self.shift.norm + en;
                if raw <= self.max_raw {
                    self.emitted += 1;
                    if self.emitted > self.limit {
                        self.over = true;
                        return;
                    }
                    f(&self.c, raw, w);
                }
                continue;
            }
            let (cur, next) = (i * r, (i + 1) * r);
            let ct = c as f64 + ti;
            for k in 0..i {
                self.fc[cur + k] = self.fc[next + k] + self.e.q[k * r + i] * ct;
                self.ex[cur + k] = self.ex[next + k] + c * self.e.gram[i * r + k];
            }
            self.pf[i] = p;
            self.en[i] = en;
            self.level(i - 1, fixed, w, f);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{barnes_wall16, sqrt2_e8};

    #[test]
    fn e8_shells() {
        let s = sqrt2_e8();
        let e = Enumerator::new(&s, DEFAULT_CEILING).unwrap();
        let zero = e.shift(&[0; 8]).unwrap();
        let counts = e.count_by_raw(&zero, 8 * 32).unwrap();
        // √2E₈ has norms 4n with multiplicity 240σ₃(n).
        assert_eq!(counts, BTreeMap::from([(0, 1), (128, 240), (256, 2160)]));
        let mut plain = BTreeMap::new();
        e.for_each(&zero, 8 * 32, |_, raw| *plain.entry(raw).or_insert(0u64) += 1).unwrap();
        assert_eq!(plain, counts);
    }

    #[test]
    fn coset_counts_match_streaming() {
        let bw = barnes_wall16();
        let d = bw.dual().unwrap();
        let e = Enumerator::new(&bw, DEFAULT_CEILING).unwrap();
        for g in d.basis().iter().take(4) {
            let sh = e.shift(g).unwrap();
            assert!(sh.mirror.is_some());
            let sym = e.count_by_raw(&sh, 6 * 32).unwrap();
            let mut plain = BTreeMap::new();
            e.for_each(&sh, 6 * 32, |x, raw| {
                assert_eq!(raw_dot(x, x), raw);
                *plain.entry(raw).or_insert(0u64) += 1
            })
            .unwrap();
            assert_eq!(sym, plain);
        }
    }

    #[test]
    fn resource_guard_refuses_large_balls() {
        let s = sqrt2_e8();
        let e = Enumerator::new(&s, 1000).unwrap();
        let zero = e.shift(&[0; 8]).unwrap();
        assert!(matches!(e.count_by_raw(&zero, 40 * 32), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn shift_outside_span_is_rejected() {
        let l = RationalLattice::from_generators(2, vec![vec![8, 0]]).unwrap();
        let e = Enumerator::new(&l, 1000).unwrap();
        assert!(e.shift(&[0, 8]).is_err());
    }
}
