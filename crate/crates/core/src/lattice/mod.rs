//! Lattices in the scaled frame: coordinates are integers in units of α_j/8,
//! where the α_j are orthogonal of norm 2. The raw dot product Σ u_j v_j is
//! 32 times the true inner product.

pub mod cache;
pub mod enumerate;
pub mod intmat;
pub mod reduce;
pub mod roots;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::codes::BinaryCode;
use crate::error::{Error, Result};
use crate::qseries::QSeries;
use intmat::{det_rational, hnf, hnf_solve, inverse_rational, left_kernel, smith, Row};

/// Frame coordinates of α_j.
pub const SCALE: i64 = 8;
/// Raw dot product of two frame vectors divided by this is their inner product.
pub const RAW_UNIT: i64 = 32;

pub fn raw_dot(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// The frame vector α_j (0-based).
pub fn alpha(n: usize, j: usize) -> Row {
    let mut v = vec![0; n];
    v[j] = SCALE;
    v
}

/// Frame vector with `value` on the coordinates in `mask`.
pub fn on_support(n: usize, mask: u64, value: i64) -> Row {
    (0..n).map(|j| if (mask >> j) & 1 == 1 { value } else { 0 }).collect()
}

fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// A lattice given by a canonical (Hermite) basis of frame vectors. Two
/// values compare equal exactly when they are the same point set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalLattice {
    dim: usize,
    basis: Vec<Row>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicates {
    pub even: bool,
    pub two_elementary: bool,
    pub totally_even: bool,
}

impl RationalLattice {
    pub fn from_generators(dim: usize, gens: impl IntoIterator<Item = Row>) -> Result<Self> {
        let rows: Vec<Row> = gens.into_iter().collect();
        Ok(RationalLattice { dim, basis: hnf(&rows, dim)? })
    }

    /// The frame lattice scaled so that it is spanned by the given multiple of the α_j.
    pub fn scaled_frame(dim: usize, multiple_of_alpha_units: i64) -> Self {
        let basis = (0..dim).map(|j| {
            let mut v = vec![0; dim];
            v[j] = multiple_of_alpha_units;
            v
        });
        RationalLattice { dim, basis: basis.collect() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Row] {
        &self.basis
    }

    pub fn gram_raw(&self) -> Vec<Vec<i64>> {
        self.basis.iter().map(|u| self.basis.iter().map(|v| raw_dot(u, v)).collect()).collect()
    }

    fn gram_big(&self) -> Vec<Vec<BigRational>> {
        self.basis
            .iter()
            .map(|u| self.basis.iter().map(|v| BigRational::new(raw_dot(u, v).into(), RAW_UNIT.into())).collect())
            .collect()
    }

    /// Determinant of the Gram matrix in true units.
    pub fn det(&self) -> BigRational {
        det_rational(&self.gram_big())
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.dim && hnf_solve(&self.basis, v).is_some()
    }

    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        hnf_solve(&self.basis, v)
    }

    pub fn contains_lattice(&self, other: &RationalLattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn scaled(&self, k: i64) -> RationalLattice {
        let gens = self.basis.iter().map(|r| r.iter().map(|x| x * k).collect());
        RationalLattice::from_generators(self.dim, gens).expect("scaling keeps entries small")
    }

    pub fn join(&self, other: &RationalLattice) -> Result<RationalLattice> {
        RationalLattice::from_generators(self.dim, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn with_vectors(&self, extra: &[Row]) -> Result<RationalLattice> {
        RationalLattice::from_generators(self.dim, self.basis.iter().chain(extra).cloned())
    }

    /// Dual lattice inside the span, `{x : ⟨x, L⟩ ⊆ ℤ}`.
    pub fn dual(&self) -> Result<RationalLattice> {
        let inv = inverse_rational(&self.gram_big()).ok_or(Error::NotFullRank)?;
        let mut rows = Vec::with_capacity(self.rank());
        for ir in &inv {
            let mut v = Vec::with_capacity(self.dim);
            for k in 0..self.dim {
                let mut acc = BigRational::zero();
                for (c, b) in ir.iter().zip(&self.basis) {
                    if b[k] != 0 {
                        acc += c * big(b[k]);
                    }
                }
                // Dual vectors off the frame grid cannot be represented.
                if !acc.is_integer() {
                    return Err(Error::NotInFrame);
                }
                v.push(acc.to_integer().to_i64().ok_or(Error::Overflow("dual"))?);
            }
            rows.push(v);
        }
        RationalLattice::from_generators(self.dim, rows)
    }

    pub fn is_integral(&self) -> bool {
        self.gram_raw().iter().flatten().all(|x| x % RAW_UNIT == 0)
    }

    pub fn is_even(&self) -> bool {
        let g = self.gram_raw();
        self.is_integral() && (0..g.len()).all(|i| g[i][i] % (2 * RAW_UNIT) == 0)
    }

    pub fn predicates(&self) -> Result<Predicates> {
        let even = self.is_even();
        let dual = self.dual()?;
        let two_elementary = self.contains_lattice(&dual.scaled(2));
        let g = dual.gram_raw();
        let dual_norms_integral = (0..g.len())
            .all(|i| g[i][i] % RAW_UNIT == 0 && (0..g.len()).all(|j| (2 * g[i][j]) % RAW_UNIT == 0));
        Ok(Predicates { even, two_elementary, totally_even: even && dual_norms_integral })
    }

    /// `self / sub`.
    pub fn quotient(&self, sub: &RationalLattice) -> Result<QuotientGroup> {
        QuotientGroup::new(self, sub)
    }

    /// `L* / L`.
    pub fn discriminant_group(&self) -> Result<QuotientGroup> {
        self.dual()?.quotient(self)
    }

    /// `{v ∈ L : g v = sign · v}`.
    pub fn fixed_sublattice(&self, g: &Isometry, sign: i64) -> Result<RationalLattice> {
        if !g.preserves(self) {
            return Err(Error::NotAutomorphism("map does not preserve the lattice".into()));
        }
        // Rows of B·(numᵀ - sign·den·I) vanish exactly on the eigenvectors.
        let m: Vec<Row> = self
            .basis
            .iter()
            .map(|b| (0..self.dim).map(|i| raw_dot(&g.num[i], b) - sign * g.den * b[i]).collect())
            .collect();
        let ker = left_kernel(&m, self.dim)?;
        let gens = ker.iter().map(|a| self.combine(a));
        RationalLattice::from_generators(self.dim, gens)
    }

    pub fn combine(&self, coeffs: &[i64]) -> Row {
        let mut v = vec![0; self.dim];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
        }
        v
    }

    /// Image under an isometry; fails if some image is off the frame grid.
    pub fn image(&self, g: &Isometry) -> Result<RationalLattice> {
        let gens: Option<Vec<Row>> = self.basis.iter().map(|b| g.apply(b)).collect();
        RationalLattice::from_generators(self.dim, gens.ok_or(Error::NotInFrame)?)
    }

    /// Restricts to the coordinates listed in `coords` (all other
    /// coordinates of every basis vector must vanish).
    pub fn restrict(&self, coords: &[usize]) -> Result<RationalLattice> {
        let keep: u64 = coords.iter().fold(0, |a, &j| a | 1 << j);
        let mut rows = Vec::new();
        for b in &self.basis {
            if b.iter().enumerate().any(|(j, &x)| x != 0 && (keep >> j) & 1 == 0) {
                return Err(Error::Precondition("lattice not supported on the given coordinates".into()));
            }
            rows.push(coords.iter().map(|&j| b[j]).collect());
        }
        RationalLattice::from_generators(coords.len(), rows)
    }

    pub fn short_vectors(&self, max_norm: i64, ceiling: u64) -> Result<BTreeMap<i64, u64>> {
        let e = enumerate::Enumerator::new(self, ceiling)?;
        let counts = e.count_by_raw(&e.shift(&vec![0; self.dim])?, max_norm * RAW_UNIT)?;
        Ok(norm_counts(&counts))
    }

    /// Vectors of the given exact norm, in enumeration order.
    pub fn vectors_of_norm(&self, norm: i64, ceiling: u64) -> Result<Vec<Row>> {
        let e = enumerate::Enumerator::new(self, ceiling)?;
        let target = norm * RAW_UNIT;
        let mut out = Vec::new();
        e.for_each(&e.shift(&vec![0; self.dim])?, target, |x, raw| {
            if raw == target {
                out.push(x.to_vec());
            }
        })?;
        Ok(out)
    }

    pub fn theta(&self, max_doubled: u32, ceiling: u64) -> Result<QSeries> {
        self.theta_coset(&vec![0; self.dim], max_doubled, ceiling)
    }

    /// Theta series of `shift + L`, truncated at q^(max_doubled/2).
    pub fn theta_coset(&self, shift: &[i64], max_doubled: u32, ceiling: u64) -> Result<QSeries> {
        let e = enumerate::Enumerator::new(self, ceiling)?;
        let counts = e.count_by_raw(&e.shift(shift)?, max_doubled as i64 * RAW_UNIT)?;
        series_from_raw(&counts, max_doubled)
    }

    /// Theta series of every class of `self / sub` for each quotient in
    /// `quotients`, from a single enumeration of `self`. Each quotient must
    /// be elementary abelian of exponent 2; the result is indexed by mask.
    pub fn binned_theta(&self, quotients: &[&QuotientGroup], max_doubled: u32, ceiling: u64) -> Result<Vec<Vec<QSeries>>> {
        let e = enumerate::Enumerator::new(self, ceiling)?;
        let width = max_doubled as usize + 1;
        let mut basis_masks = Vec::new();
        for q in quotients {
            let k = q.invariants().len();
            if k > 16 {
                return Err(Error::DimensionTooLarge { dim: k, max: 16 });
            }
            basis_masks.push(e.basis().iter().map(|b| q.mask(b)).collect::<Result<Vec<u64>>>()?);
        }
        let mut counts: Vec<Vec<u64>> = quotients.iter().map(|q| vec![0; width << q.invariants().len()]).collect();
        let mut off_grid = None;
        e.walk(&e.shift(&vec![0; self.dim])?, max_doubled as i64 * RAW_UNIT, true, |c, raw, w| {
            if raw % RAW_UNIT != 0 {
                off_grid = Some(raw);
                return;
            }
            let d = (raw / RAW_UNIT) as usize;
            for (masks, table) in basis_masks.iter().zip(counts.iter_mut()) {
                let m = c.iter().zip(masks).fold(0u64, |a, (&ci, &bm)| if ci & 1 == 1 { a ^ bm } else { a });
                table[m as usize * width + d] += w;
            }
        })?;
        if let Some(raw) = off_grid {
            return Err(Error::ExponentGrid(format!("norm {raw}/32 gives a quarter-integer exponent")));
        }
        Ok(counts
            .iter()
            .map(|table| {
                table
                    .chunks(width)
                    .map(|row| {
                        let pairs = row.iter().enumerate().filter(|(_, &c)| c > 0).map(|(d, &c)| (d as u32, BigInt::from(c)));
                        QSeries::from_pairs(max_doubled, pairs).expect("exponents within range")
                    })
                    .collect()
            })
            .collect())
    }

    pub fn fingerprint(&self, theta_doubled: u32, ceiling: u64) -> Result<LatticeFingerprint> {
        let theta = self.theta(theta_doubled.max(4), ceiling)?;
        let roots = self.vectors_of_norm(2, ceiling)?;
        let components = roots::root_components(&roots)?;
        Ok(LatticeFingerprint {
            rank: self.rank(),
            det: self.det().to_string(),
            norm2: theta.coeff(2).to_u64().unwrap_or(u64::MAX),
            norm4: theta.coeff(4).to_u64().unwrap_or(u64::MAX),
            roots: components,
            theta: theta.truncate(theta_doubled),
        })
    }
}

/// Converts raw norm counts to counts keyed by true norm.
pub fn norm_counts(raw: &BTreeMap<i64, u64>) -> BTreeMap<i64, u64> {
    let mut out = BTreeMap::new();
    for (&r, &c) in raw {
        if r % RAW_UNIT == 0 {
            *out.entry(r / RAW_UNIT).or_insert(0) += c;
        }
    }
    out
}

/// Theta series from counts keyed by raw norm. A raw norm 16·d is q^(d/2).
pub fn series_from_raw(raw: &BTreeMap<i64, u64>, max_doubled: u32) -> Result<QSeries> {
    let mut s = QSeries::zero(max_doubled);
    for (&r, &c) in raw {
        if r % (RAW_UNIT / 2) != 0 {
            return Err(Error::ExponentGrid(format!("norm {r}/32 is not a multiple of 1/2")));
        }
        // The exponent is norm/2 = r/64, so a half-integral norm would
        // need quarter exponents.
        if r % RAW_UNIT != 0 {
            return Err(Error::ExponentGrid(format!("norm {r}/32 gives a quarter-integer exponent")));
        }
        let d = (r / RAW_UNIT) as u32;
        if d <= max_doubled {
            s.add_at(d, &BigInt::from(c));
        }
    }
    Ok(s)
}

/// `|sup / sub|` from the determinant ratio, after checking containment.
pub fn index_in(sub: &RationalLattice, sup: &RationalLattice) -> Result<u128> {
    if sub.rank() != sup.rank() {
        return Err(Error::Precondition(format!("ranks differ: {} vs {}", sub.rank(), sup.rank())));
    }
    if !sup.contains_lattice(sub) {
        return Err(Error::NotContained);
    }
    let ratio = sub.det() / sup.det();
    if !ratio.is_integer() {
        return Err(Error::NonSquareIndex(ratio.to_string()));
    }
    let r = ratio.to_integer();
    let s = r.sqrt();
    if &s * &s != r {
        return Err(Error::NonSquareIndex(r.to_string()));
    }
    s.to_u128().ok_or(Error::Overflow("index"))
}

/// Lattice generated by ½α_w for the generator rows w of the code and all
/// α_j + α_k.
pub fn construction_b(c: &BinaryCode) -> RationalLattice {
    let n = c.length();
    let mut gens: Vec<Row> = c.rows().iter().map(|&w| on_support(n, w, SCALE / 2)).collect();
    for j in 0..n {
        for k in j + 1..n {
            let mut v = vec![0; n];
            v[j] = SCALE;
            v[k] = SCALE;
            gens.push(v);
        }
    }
    RationalLattice::from_generators(n, gens).expect("construction B entries are small")
}

/// A finite abelian group `sup / sub` with chosen generators of cyclic factors.
#[derive(Debug, Clone)]
pub struct QuotientGroup {
    sup: Vec<Row>,
    q: Vec<Row>,
    /// Positions among the Smith factors that are nontrivial.
    active: Vec<usize>,
    invariants: Vec<i64>,
    generators: Vec<Row>,
}

impl QuotientGroup {
    pub fn new(sup: &RationalLattice, sub: &RationalLattice) -> Result<Self> {
        if sub.rank() != sup.rank() {
            return Err(Error::Precondition("quotient needs sublattices of full rank".into()));
        }
        let m: Vec<Row> = sub.basis.iter().map(|b| sup.coordinates(b).ok_or(Error::NotContained)).collect::<Result<_>>()?;
        let s = smith(&m)?;
        let active: Vec<usize> = (0..s.diag.len()).filter(|&i| s.diag[i] != 1).collect();
        let generators = active.iter().map(|&i| sup.combine(&s.q_inv[i])).collect();
        Ok(QuotientGroup {
            sup: sup.basis.clone(),
            invariants: active.iter().map(|&i| s.diag[i]).collect(),
            q: s.q,
            active,
            generators,
        })
    }

    pub fn invariants(&self) -> &[i64] {
        &self.invariants
    }

    pub fn order(&self) -> u128 {
        self.invariants.iter().map(|&d| d as u128).product()
    }

    pub fn generators(&self) -> &[Row] {
        &self.generators
    }

    pub fn is_elementary_two(&self) -> bool {
        self.invariants.iter().all(|&d| d == 2)
    }

    /// Coordinates of the class of `v`, reduced modulo the invariants.
    pub fn coords(&self, v: &[i64]) -> Result<Vec<i64>> {
        let a = hnf_solve(&self.sup, v).ok_or(Error::NotContained)?;
        Ok(self
            .active
            .iter()
            .zip(&self.invariants)
            .map(|(&i, &d)| {
                let c: i128 = a.iter().zip(&self.q).map(|(&x, row)| x as i128 * row[i] as i128).sum();
                c.rem_euclid(d as i128) as i64
            })
            .collect())
    }

    /// Coordinates packed into bits; only for elementary abelian 2-groups.
    pub fn mask(&self, v: &[i64]) -> Result<u64> {
        if !self.is_elementary_two() || self.invariants.len() > 64 {
            return Err(Error::Precondition("bit coordinates need an elementary abelian 2-group".into()));
        }
        Ok(self.coords(v)?.iter().enumerate().fold(0, |a, (i, &c)| a | ((c as u64) << i)))
    }

    pub fn element(&self, coords: &[i64]) -> Row {
        let n = self.sup.first().map_or(0, |r| r.len());
        let mut v = vec![0; n];
        for (c, g) in coords.iter().zip(&self.generators) {
            for (x, y) in v.iter_mut().zip(g) {
                *x += c * y;
            }
        }
        v
    }

    /// The representative `Σ c_i g_i` for a bitmask of coordinates.
    pub fn element_of_mask(&self, mask: u64) -> Row {
        let coords: Vec<i64> = (0..self.invariants.len()).map(|i| ((mask >> i) & 1) as i64).collect();
        self.element(&coords)
    }
}

/// An orthogonal map of the frame: `g(v)_i = Σ_j num[i][j] v_j / den`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Isometry {
    num: Vec<Row>,
    den: i64,
}

impl Isometry {
    pub fn new(num: Vec<Row>, den: i64) -> Result<Self> {
        let g = Isometry { num, den };
        g.check()?;
        Ok(g.normalized())
    }

    fn check(&self) -> Result<()> {
        let n = self.num.len();
        if self.den <= 0 || self.num.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition("isometry needs a square matrix and positive denominator".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let s: i64 = (0..n).map(|k| self.num[k][i] * self.num[k][j]).sum();
                if s != if i == j { self.den * self.den } else { 0 } {
                    return Err(Error::NotAutomorphism("matrix is not orthogonal".into()));
                }
            }
        }
        Ok(())
    }

    fn normalized(mut self) -> Self {
        let g = self.num.iter().flatten().fold(self.den, |a, &x| a.gcd(&x));
        if g > 1 {
            self.num.iter_mut().flatten().for_each(|x| *x /= g);
            self.den /= g;
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn identity(n: usize) -> Self {
        Isometry { num: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(), den: 1 }
    }

    /// Negates the coordinates in `mask`.
    pub fn epsilon(n: usize, mask: u64) -> Self {
        let mut g = Self::identity(n);
        for j in 0..n {
            if (mask >> j) & 1 == 1 {
                g.num[j][j] = -1;
            }
        }
        g
    }

    /// Sends coordinate `j` to coordinate `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut num = vec![vec![0; n]; n];
        for (j, &p) in perm.iter().enumerate() {
            if p >= n {
                return Err(Error::Precondition("permutation image out of range".into()));
            }
            num[p][j] = 1;
        }
        Self::new(num, 1)
    }

    /// Reflection in the hyperplane orthogonal to `r`.
    pub fn reflection(r: &[i64]) -> Result<Self> {
        let rr = raw_dot(r, r);
        if rr == 0 {
            return Err(Error::Precondition("cannot reflect in the zero vector".into()));
        }
        let n = r.len();
        let num = (0..n).map(|i| (0..n).map(|j| if i == j { rr } else { 0 } - 2 * r[i] * r[j]).collect()).collect();
        Self::new(num, rr)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let n = self.dim();
        let num = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| self.num[i][k] * other.num[k][j]).sum()).collect()).collect();
        Isometry { num, den: self.den * other.den }.normalized()
    }

    pub fn inverse(&self) -> Isometry {
        let n = self.dim();
        Isometry { num: (0..n).map(|i| (0..n).map(|j| self.num[j][i]).collect()).collect(), den: self.den }
    }

    pub fn apply(&self, v: &[i64]) -> Option<Row> {
        self.num
            .iter()
            .map(|r| {
                let s = raw_dot(r, v);
                (s % self.den == 0).then_some(s / self.den)
            })
            .collect()
    }

    pub fn preserves(&self, l: &RationalLattice) -> bool {
        self.dim() == l.ambient_dim() && l.basis.iter().all(|b| self.apply(b).is_some_and(|w| l.contains(&w)))
    }
}

/// Semi-invariants of a lattice up to isometry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeFingerprint {
    pub rank: usize,
    pub det: String,
    pub norm2: u64,
    pub norm4: u64,
    pub roots: Vec<String>,
    pub theta: QSeries,
}

impl fmt::Display for LatticeFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let roots = if self.roots.is_empty() { "none".to_string() } else { self.roots.join("+") };
        write!(f, "rank {} det {} roots {} theta {}", self.rank, self.det, roots, self.theta)
    }
}

/// √2E₈ in an 8-dimensional frame: coordinates 8·x for standard E₈
/// vectors x, spanned by 8(e_j ± e_k) and 4·(1,…,1).
pub fn sqrt2_e8() -> RationalLattice {
    let n = 8;
    let mut gens = vec![vec![4; n]];
    for j in 0..n {
        for k in j + 1..n {
            let mut v = vec![0; n];
            v[j] = 8;
            v[k] = 8;
            gens.push(v.clone());
            v[k] = -8;
            gens.push(v);
        }
    }
    RationalLattice::from_generators(n, gens).expect("small entries")
}

/// Λ₁₆ as Construction B on RM(1,4).
pub fn barnes_wall16() -> RationalLattice {
    construction_b(&crate::codes::reed_muller_1_4())
}
