//! Integer and rational matrix routines: Hermite and Smith normal forms,
//! integer kernels and exact rational inverses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Row = Vec<i64>;

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow("integer matrix entry"))
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn leading(r: &[i128]) -> Option<usize> {
    r.iter().position(|&x| x != 0)
}

fn axpy(dst: &mut [i128], k: i128, src: &[i128]) -> Result<()> {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = k.checked_mul(s).and_then(|p| d.checked_sub(p)).ok_or(Error::Overflow("hnf"))?;
    }
    Ok(())
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result is echelon with strictly increasing pivot columns, positive
/// pivots and entries above each pivot reduced into `[0, pivot)`. Zero rows
/// are dropped, so the output is a basis and is unique for the row span.
pub fn hnf(rows: &[Row], cols: usize) -> Result<Vec<Row>> {
    let mut h: Vec<Vec<i128>> = Vec::new();
    for r in rows {
        if r.len() != cols {
            return Err(Error::ShapeMismatch { expected: cols, found: r.len() });
        }
        let mut v: Vec<i128> = r.iter().map(|&x| x as i128).collect();
        let mut i = 0;
        while let Some(c) = leading(&v) {
            while i < h.len() && leading(&h[i]).unwrap() < c {
                i += 1;
            }
            if i == h.len() || leading(&h[i]).unwrap() > c {
                if v[c] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                h.insert(i, v);
                break;
            }
            let (a, b) = (h[i][c], v[c]);
            if b % a == 0 {
                axpy(&mut v, b / a, &h[i])?;
            } else {
                let (g, x, y) = ext_gcd(a, b);
                let (ag, bg) = (a / g, b / g);
                let mut top = vec![0i128; cols];
                let mut bot = vec![0i128; cols];
                for j in 0..cols {
                    let (p, q) = (h[i][j], v[j]);
                    let t = x.checked_mul(p).zip(y.checked_mul(q)).and_then(|(s, t)| s.checked_add(t));
                    let u = ag.checked_mul(q).zip(bg.checked_mul(p)).and_then(|(s, t)| s.checked_sub(t));
                    top[j] = t.ok_or(Error::Overflow("hnf"))?;
                    bot[j] = u.ok_or(Error::Overflow("hnf"))?;
                }
                h[i] = top;
                v = bot;
            }
        }
        reduce_above(&mut h)?;
    }
    h.into_iter().map(|r| r.into_iter().map(narrow).collect()).collect()
}

fn reduce_above(h: &mut [Vec<i128>]) -> Result<()> {
    for i in 0..h.len() {
        let c = leading(&h[i]).unwrap();
        let p = h[i][c];
        for k in 0..i {
            let q = h[k][c].div_euclid(p);
            if q != 0 {
                let src = h[i].clone();
                axpy(&mut h[k], q, &src)?;
            }
        }
    }
    Ok(())
}

/// Integer coefficients `a` with `a · h = v` for an echelon basis `h`.
pub fn hnf_solve(h: &[Row], v: &[i64]) -> Option<Vec<i64>> {
    let mut rest: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    let mut coeffs = Vec::with_capacity(h.len());
    for row in h {
        let c = row.iter().position(|&x| x != 0)?;
        let p = row[c] as i128;
        if rest[c] % p != 0 {
            return None;
        }
        let k = rest[c] / p;
        for (r, &x) in rest.iter_mut().zip(row) {
            *r -= k * x as i128;
        }
        coeffs.push(i64::try_from(k).ok()?);
    }
    rest.iter().all(|&x| x == 0).then_some(coeffs)
}

/// Basis of the integer left kernel `{x ∈ ℤ^m : x · m = 0}`.
pub fn left_kernel(m: &[Row], cols: usize) -> Result<Vec<Row>> {
    let n = m.len();
    let aug: Vec<Row> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = r.clone();
            a.extend((0..n).map(|j| i64::from(i == j)));
            a
        })
        .collect();
    let h = hnf(&aug, cols + n)?;
    Ok(h.into_iter().filter(|r| r[..cols].iter().all(|&x| x == 0)).map(|r| r[cols..].to_vec()).collect())
}

/// Smith form `P·M·Q = diag(d)` of a nonsingular square matrix, keeping the
/// column transform `Q` and its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    pub diag: Vec<i64>,
    pub q: Vec<Row>,
    pub q_inv: Vec<Row>,
}

pub fn smith(m: &[Row]) -> Result<Smith> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Precondition("Smith form needs a square matrix".into()));
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let id = |i: usize| (0..n).map(|j| i128::from(i == j)).collect::<Vec<i128>>();
    let mut q: Vec<Vec<i128>> = (0..n).map(id).collect();
    let mut qi: Vec<Vec<i128>> = (0..n).map(id).collect();
    let ovf = || Error::Overflow("smith");

    for t in 0..n {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(i128, usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    let x = a[i][j].abs();
                    if x != 0 && best.is_none_or(|b| x < b.0) {
                        best = Some((x, i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                return Err(Error::NotFullRank);
            };
            a.swap(t, pi);
            if pj != t {
                for row in a.iter_mut().chain(q.iter_mut()) {
                    row.swap(t, pj);
                }
                qi.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let k = a[i][t].div_euclid(p);
                if k != 0 {
                    let src = a[t].clone();
                    axpy(&mut a[i], k, &src)?;
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let k = a[t][j].div_euclid(p);
                if k != 0 {
                    // col_j -= k·col_t; the inverse adds k·row_j to row_t.
                    for row in a.iter_mut().chain(q.iter_mut()) {
                        row[j] = row[j].checked_sub(k.checked_mul(row[t]).ok_or_else(ovf)?).ok_or_else(ovf)?;
                    }
                    let src = qi[j].clone();
                    axpy(&mut qi[t], -k, &src)?;
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            if let Some(i) = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0)) {
                let src = a[i].clone();
                axpy(&mut a[t], -1, &src)?;
                continue;
            }
            if p < 0 {
                a[t].iter_mut().for_each(|x| *x = -*x);
            }
            break;
        }
    }
    let to64 = |m: Vec<Vec<i128>>| -> Result<Vec<Row>> { m.into_iter().map(|r| r.into_iter().map(narrow).collect()).collect() };
    Ok(Smith { diag: (0..n).map(|i| narrow(a[i][i])).collect::<Result<_>>()?, q: to64(q)?, q_inv: to64(qi)? })
}

pub fn to_big(m: &[Vec<i128>]) -> Vec<Vec<BigRational>> {
    m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect()
}

pub fn det_rational(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for k in c..n {
                let d = &f * &a[c][k];
                a[r][k] -= d;
            }
        }
    }
    det
}

/// Exact inverse, or `None` for a singular matrix.
pub fn inverse_rational(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &piv;
        }
        let pivot_row = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
