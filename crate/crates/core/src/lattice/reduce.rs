//! LLL reduction used to precondition enumeration. Basis vectors are
//! transformed by exact integer operations; floating point only steers the
//! choice of operations, so the output always spans the same lattice.

use super::intmat::Row;

fn dot(u: &[i64], v: &[i64]) -> f64 {
    u.iter().zip(v).map(|(&a, &b)| (a as i128 * b as i128) as f64).sum()
}

pub fn lll(basis: &[Row], delta: f64) -> Vec<Row> {
    let mut b: Vec<Row> = basis.to_vec();
    let n = b.len();
    if n < 2 {
        return b;
    }
    let mut mu = vec![vec![0f64; n]; n];
    let mut bstar = vec![0f64; n];

    let gso_row = |b: &[Row], mu: &mut Vec<Vec<f64>>, bstar: &mut Vec<f64>, k: usize| {
        for j in 0..k {
            let mut m = dot(&b[k], &b[j]);
            for l in 0..j {
                m -= mu[j][l] * mu[k][l] * bstar[l];
            }
            mu[k][j] = m / bstar[j];
        }
        let mut s = dot(&b[k], &b[k]);
        for l in 0..k {
            s -= mu[k][l] * mu[k][l] * bstar[l];
        }
        bstar[k] = s;
    };

    gso_row(&b, &mut mu, &mut bstar, 0);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 1_000_000 {
            break;
        }
        gso_row(&b, &mut mu, &mut bstar, k);
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r != 0.0 {
                let ri = r as i64;
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= ri * y;
                }
                for l in 0..j {
                    mu[k][l] -= r * mu[j][l];
                }
                mu[k][j] -= r;
            }
        }
        gso_row(&b, &mut mu, &mut bstar, k);
        if bstar[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            b.swap(k, k - 1);
            k = k.saturating_sub(1).max(1);
            if k == 1 {
                gso_row(&b, &mut mu, &mut bstar, 0);
            }
        } else {
            k += 1;
        }
    }
    b
}
