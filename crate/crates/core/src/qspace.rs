//! Quadratic spaces over F₂ stored as full value tables.

use std::collections::HashMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2core::{grow_subspaces, parity, F2Matrix, F2Subspace};
use crate::lattice::{QuotientGroup, RationalLattice, RAW_UNIT};

pub const MAX_QDIM: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QType {
    Plus,
    Minus,
}

impl std::fmt::Display for QType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            QType::Plus => "plus",
            QType::Minus => "minus",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadSpace {
    n: usize,
    table: Vec<u8>,
    /// gram[i] has bit j set when b(e_i, e_j) = 1.
    gram: Vec<u64>,
}

impl QuadSpace {
    /// Builds the space from all 2ⁿ values, checking that the polar form
    /// is bilinear on every pair.
    pub fn from_table(n: usize, table: Vec<u8>) -> Result<Self> {
        if n > MAX_QDIM {
            return Err(Error::DimensionTooLarge { dim: n, max: MAX_QDIM });
        }
        if table.len() != 1 << n {
            return Err(Error::ShapeMismatch { expected: 1 << n, found: table.len() });
        }
        if table[0] != 0 || table.iter().any(|&v| v > 1) {
            return Err(Error::InvalidForm("values must be 0/1 with q(0) = 0".into()));
        }
        let polar = |t: &[u8], x: usize, y: usize| t[x ^ y] ^ t[x] ^ t[y];
        let gram: Vec<u64> = (0..n).map(|i| (0..n).fold(0, |a, j| a | (polar(&table, 1 << i, 1 << j) as u64) << j)).collect();
        let s = QuadSpace { n, table, gram };
        for x in 0..1usize << n {
            for y in 0..1usize << n {
                if polar(&s.table, x, y) != s.b(x as u64, y as u64) {
                    return Err(Error::InvalidForm(format!("polar form is not bilinear at ({x:b}, {y:b})")));
                }
            }
        }
        Ok(s)
    }

    /// q(x) = Σ x_i q_i + Σ_{i<j} x_i x_j G_ij.
    pub fn from_basis(qvals: &[u8], gram: &[u64]) -> Result<Self> {
        let n = qvals.len();
        if n > MAX_QDIM {
            return Err(Error::DimensionTooLarge { dim: n, max: MAX_QDIM });
        }
        if gram.len() != n {
            return Err(Error::ShapeMismatch { expected: n, found: gram.len() });
        }
        let table = (0..1u64 << n)
            .map(|x| {
                let mut v = 0;
                for i in (0..n).filter(|&i| (x >> i) & 1 == 1) {
                    v ^= qvals[i] & 1;
                    v ^= parity(gram[i] & x & !((2u64 << i) - 1));
                }
                v
            })
            .collect();
        QuadSpace::from_table(n, table)
    }

    /// Orthogonal sum of `m` hyperbolic planes.
    pub fn hyperbolic(m: usize) -> Result<Self> {
        let gram: Vec<u64> = (0..2 * m).map(|i| 1 << (i ^ 1)).collect();
        QuadSpace::from_basis(&vec![0; 2 * m], &gram)
    }

    /// `m − 1` hyperbolic planes plus the anisotropic plane.
    pub fn elliptic(m: usize) -> Result<Self> {
        let gram: Vec<u64> = (0..2 * m).map(|i| 1 << (i ^ 1)).collect();
        let mut q = vec![0; 2 * m];
        if m > 0 {
            q[2 * m - 2] = 1;
            q[2 * m - 1] = 1;
        }
        QuadSpace::from_basis(&q, &gram)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn q(&self, x: u64) -> u8 {
        self.table[x as usize]
    }

    pub fn b(&self, x: u64, y: u64) -> u8 {
        let mut v = 0;
        for i in (0..self.n).filter(|&i| (x >> i) & 1 == 1) {
            v ^= parity(self.gram[i] & y);
        }
        v
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn gram(&self) -> &[u64] {
        &self.gram
    }

    pub fn radical(&self) -> F2Subspace {
        let m = F2Matrix::from_words(self.n, self.gram.clone()).expect("n ≤ 12");
        crate::f2core::kernel(&m)
    }

    pub fn is_nonsingular(&self) -> bool {
        self.radical().dim() == 0
    }

    pub fn singular_vectors(&self) -> Vec<u64> {
        (1..1u64 << self.n).filter(|&x| self.q(x) == 0).collect()
    }

    /// Singular vectors including zero.
    pub fn singular_count(&self) -> u64 {
        self.table.iter().filter(|&&v| v == 0).count() as u64
    }

    pub fn type_of(&self) -> Result<QType> {
        if !self.is_nonsingular() {
            return Err(Error::SingularForm(self.radical().dim()));
        }
        if self.n % 2 == 1 {
            return Err(Error::InvalidForm("odd dimension".into()));
        }
        let m = self.n as u32 / 2;
        let base = 1u64 << (2 * m).saturating_sub(1);
        let half = if m == 0 { 0 } else { 1u64 << (m - 1) };
        match self.singular_count() {
            c if m == 0 && c == 1 => Ok(QType::Plus),
            c if c == base + half => Ok(QType::Plus),
            c if c + half == base => Ok(QType::Minus),
            c => Err(Error::InvalidForm(format!("{c} singular vectors fits neither type"))),
        }
    }

    pub fn is_totally_singular(&self, s: &F2Subspace) -> bool {
        s.basis().iter().all(|&v| self.q(v) == 0)
            && s.basis().iter().enumerate().all(|(i, &u)| s.basis()[i + 1..].iter().all(|&v| self.b(u, v) == 0))
    }

    /// Vectors orthogonal to every vector of `s`.
    pub fn perp(&self, s: &F2Subspace) -> F2Subspace {
        let rows: Vec<u64> = s.basis().iter().map(|&v| (0..self.n).fold(0, |a, j| a | (self.b(v, 1 << j) as u64) << j)).collect();
        crate::f2core::kernel(&F2Matrix::from_words(self.n, rows).expect("n ≤ 12"))
    }

    /// The form restricted to a subspace, in the coordinates of its basis.
    pub fn restrict(&self, s: &F2Subspace) -> Result<QuadSpace> {
        let basis = s.basis();
        let table = (0..1u64 << basis.len())
            .map(|c| self.q(basis.iter().enumerate().filter(|(i, _)| (c >> i) & 1 == 1).fold(0, |a, (_, &v)| a ^ v)))
            .collect();
        QuadSpace::from_table(basis.len(), table)
    }

    pub fn witt_index(&self) -> usize {
        let mut k = 0;
        let mut level = vec![F2Subspace::zero(self.n)];
        loop {
            level = grow_subspaces(level, k + 1, |s| self.extensions(s), |s| self.is_totally_singular(s));
            if level.is_empty() {
                return k;
            }
            k += 1;
            level.truncate(1);
        }
    }

    fn extensions(&self, s: &F2Subspace) -> Vec<u64> {
        self.perp(s).elements().filter(|&v| self.q(v) == 0 && !s.contains(v)).collect()
    }
}

/// Every `k`-dimensional totally singular subspace, sorted canonically.
pub fn totally_singular_subspaces(v: &QuadSpace, k: usize) -> Vec<F2Subspace> {
    grow_subspaces(vec![F2Subspace::zero(v.n)], k, |s| v.extensions(s), |s| v.is_totally_singular(s))
}

/// Number of totally singular `k`-spaces in a plus-type space of dimension
/// 2m, as Π_{i=0}^{k−1} (2^{m−i} − 1)(2^{m−i−1} + 1) / (2^{i+1} − 1).
pub fn totally_singular_count_plus(m: u32, k: u32) -> u128 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= ((1u128 << (m - i)) - 1) * ((1u128 << (m - i - 1)) + 1);
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrthMap {
    m: F2Matrix,
}

impl OrthMap {
    /// Checks q(gx) = q(x) on every vector and invertibility.
    pub fn new(v: &QuadSpace, m: F2Matrix) -> Result<Self> {
        if m.nrows() != v.n || m.ncols() != v.n {
            return Err(Error::ShapeMismatch { expected: v.n, found: m.nrows() });
        }
        if m.rank() != v.n {
            return Err(Error::NotAutomorphism("matrix is singular".into()));
        }
        if (0..1u64 << v.n).any(|x| v.q(m.mul_vec(x)) != v.q(x)) {
            return Err(Error::NotAutomorphism("q is not preserved".into()));
        }
        Ok(OrthMap { m })
    }

    pub fn matrix(&self) -> &F2Matrix {
        &self.m
    }

    pub fn apply(&self, x: u64) -> u64 {
        self.m.mul_vec(x)
    }

    pub fn compose(&self, other: &OrthMap) -> OrthMap {
        OrthMap { m: self.m.mul(&other.m).expect("same size") }
    }
}

/// Builds the matrix whose column j is f(e_j).
fn matrix_of(n: usize, f: impl Fn(u64) -> u64) -> F2Matrix {
    let rows: Vec<u64> = (0..n).map(|i| (0..n).fold(0, |a, j| a | ((f(1 << j) >> i) & 1) << j)).collect();
    F2Matrix::from_words(n, rows).expect("n ≤ 12")
}

/// r_v(x) = x + b(x, v)·v for q(v) = 1.
pub fn reflection(v: &QuadSpace, a: u64) -> Result<OrthMap> {
    if v.q(a) != 1 {
        return Err(Error::Precondition("reflections need q(v) = 1".into()));
    }
    OrthMap::new(v, matrix_of(v.n, |x| if v.b(x, a) == 1 { x ^ a } else { x }))
}

pub fn reflection_generators(v: &QuadSpace) -> Result<Vec<OrthMap>> {
    if !v.is_nonsingular() {
        return Err(Error::SingularForm(v.radical().dim()));
    }
    (1..1u64 << v.n).filter(|&a| v.q(a) == 1).map(|a| reflection(v, a)).collect()
}

/// Products r_{v₀}·r_v with v₀ the first anisotropic vector; these
/// generate the Dickson kernel when the reflections generate O(V).
pub fn omega_generators(v: &QuadSpace) -> Result<Vec<OrthMap>> {
    let refl = reflection_generators(v)?;
    let Some((first, rest)) = refl.split_first() else {
        return Ok(vec![]);
    };
    let mut gens: Vec<OrthMap> = rest.iter().map(|r| first.compose(r)).collect();
    gens.sort_by(|a, b| a.m.words().cmp(b.m.words()));
    gens.dedup();
    Ok(gens)
}

/// A subset S of the reflections that still generates O(V). Once the
/// ⟨S⟩-orbits of the vectors of S cover every anisotropic vector, each r_w
/// is a conjugate g·r_v·g⁻¹ with g ∈ ⟨S⟩, so ⟨S⟩ holds all reflections.
pub fn reflection_generating_set(v: &QuadSpace) -> Result<Vec<OrthMap>> {
    if !v.is_nonsingular() {
        return Err(Error::SingularForm(v.radical().dim()));
    }
    let aniso: Vec<u64> = (1..1u64 << v.n).filter(|&a| v.q(a) == 1).collect();
    let mut chosen: Vec<u64> = Vec::new();
    let mut gens: Vec<OrthMap> = Vec::new();
    loop {
        let mut seen = vec![false; 1 << v.n];
        let mut stack: Vec<u64> = chosen.clone();
        for &c in &chosen {
            seen[c as usize] = true;
        }
        while let Some(x) = stack.pop() {
            for g in &gens {
                let y = g.apply(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        match aniso.iter().find(|&&a| !seen[a as usize]) {
            Some(&a) => {
                chosen.push(a);
                gens.push(reflection(v, a)?);
            }
            None => return Ok(gens),
        }
    }
}

/// r_{s₀}·r_s over a reflection generating set; every even word in the
/// reflections factors through these, so they generate the Dickson kernel.
pub fn omega_generating_set(v: &QuadSpace) -> Result<Vec<OrthMap>> {
    let refl = reflection_generating_set(v)?;
    let Some((first, rest)) = refl.split_first() else {
        return Ok(vec![]);
    };
    Ok(rest.iter().map(|r| first.compose(r)).collect())
}

pub fn dickson(g: &OrthMap) -> u8 {
    let n = g.m.nrows();
    (g.m.add(&F2Matrix::identity(n)).expect("square").rank() % 2) as u8
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    /// Each orbit as sorted member indices; orbits sorted by least member.
    pub orbits: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Partition of `n` objects under the permutations `images[g][i]`.
pub fn orbits_of_permutations(n: usize, images: &[Vec<usize>]) -> OrbitPartition {
    let mut parent: Vec<usize> = (0..n).collect();
    for img in images {
        for (i, &j) in img.iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        by_root.entry(r).or_default().push(i);
    }
    let mut orbits: Vec<Vec<usize>> = by_root.into_values().collect();
    orbits.sort();
    OrbitPartition { orbits }
}

/// Canonical reduced echelon key of the span of `vectors` (n ≤ 12).
fn span_key(vectors: impl IntoIterator<Item = u64>) -> u128 {
    let mut rows = [0u64; MAX_QDIM];
    let mut k = 0;
    for mut v in vectors {
        for r in &rows[..k] {
            if v & (r & r.wrapping_neg()) != 0 {
                v ^= r;
            }
        }
        if v == 0 {
            continue;
        }
        let pivot = v & v.wrapping_neg();
        for r in &mut rows[..k] {
            if *r & pivot != 0 {
                *r ^= v;
            }
        }
        rows[k] = v;
        k += 1;
    }
    rows[..k].sort_unstable_by_key(|r| r & r.wrapping_neg());
    rows[..k].iter().fold(0u128, |a, &r| (a << MAX_QDIM) | r as u128)
}

/// Orbits of the group generated by `gens` on a list of subspaces. Indices
/// refer to `objects`; the partition is returned in canonical order, so it
/// depends neither on generator order nor on the schedule.
pub fn orbits(gens: &[OrthMap], objects: &[F2Subspace]) -> Result<OrbitPartition> {
    if objects.iter().any(|s| s.ambient_dim() > MAX_QDIM) {
        return Err(Error::DimensionTooLarge { dim: objects[0].ambient_dim(), max: MAX_QDIM });
    }
    let mut keyed: Vec<(u128, usize)> = objects.iter().enumerate().map(|(i, s)| (span_key(s.basis().iter().copied()), i)).collect();
    keyed.sort_unstable();
    if keyed.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Precondition("object list has repeated subspaces".into()));
    }
    let images: Vec<Vec<usize>> = gens
        .par_iter()
        .map(|g| {
            let n = g.m.ncols();
            let table: Vec<u64> = (0..1u64 << n).map(|x| g.apply(x)).collect();
            objects
                .iter()
                .map(|s| {
                    let key = span_key(s.basis().iter().map(|&v| table[v as usize]));
                    keyed
                        .binary_search_by_key(&key, |&(k, _)| k)
                        .map(|p| keyed[p].1)
                        .map_err(|_| Error::Verification("generator moves an object out of the set".into()))
                })
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<_>>()?;
    Ok(orbits_of_permutations(objects.len(), &images))
}

/// Orbits on vectors of F₂ⁿ, indices being the vectors themselves.
pub fn vector_orbits(n: usize, gens: &[OrthMap]) -> OrbitPartition {
    let images: Vec<Vec<usize>> = gens.iter().map(|g| (0..1u64 << n).map(|x| g.apply(x) as usize).collect()).collect();
    orbits_of_permutations(1 << n, &images)
}

/// |O(V)| by recursion over hyperbolic pairs: O(V) is transitive on pairs
/// (e, f) with q(e) = q(f) = 0, b(e, f) = 1 and the stabilizer is O(⟨e,f⟩^⊥).
/// Spaces with no such pair (dimension ≤ 2) are counted by brute force.
pub fn group_order_witt(v: &QuadSpace) -> Result<BigUint> {
    if !v.is_nonsingular() {
        return Err(Error::SingularForm(v.radical().dim()));
    }
    let sing = v.singular_vectors();
    let Some(&e) = sing.first() else {
        return Ok(BigUint::from(brute_force_order(v)?));
    };
    let mut pairs = 0u64;
    for &a in &sing {
        pairs += sing.iter().filter(|&&b| v.b(a, b) == 1).count() as u64;
    }
    let f = *sing.iter().find(|&&b| v.b(e, b) == 1).ok_or_else(|| Error::Verification("singular vector in the radical".into()))?;
    let rest = v.restrict(&v.perp(&F2Subspace::span(v.n, [e, f])))?;
    Ok(BigUint::from(pairs) * group_order_witt(&rest)?)
}

/// Counts invertible matrices preserving q; feasible for n ≤ 4.
pub fn brute_force_order(v: &QuadSpace) -> Result<u64> {
    let n = v.n;
    if n > 4 {
        return Err(Error::DimensionTooLarge { dim: n, max: 4 });
    }
    let mut count = 0;
    for bits in 0..1u64 << (n * n) {
        let rows: Vec<u64> = (0..n).map(|i| (bits >> (i * n)) & ((1 << n) - 1)).collect();
        let m = F2Matrix::from_words(n, rows)?;
        if m.rank() == n && (0..1u64 << n).all(|x| v.q(m.mul_vec(x)) == v.q(x)) {
            count += 1;
        }
    }
    Ok(count)
}

/// 2·2^{m(m−1)}·(2^m − 1)·Π_{i=1}^{m−1}(2^{2i} − 1).
pub fn orthogonal_order_plus(m: u32) -> BigUint {
    if m == 0 {
        return BigUint::from(1u32);
    }
    let mut acc = BigUint::from(2u32) << (m * (m - 1)) as usize;
    acc *= (BigUint::from(1u32) << m as usize) - 1u32;
    for i in 1..m {
        acc *= (BigUint::from(1u32) << (2 * i) as usize) - 1u32;
    }
    acc
}

/// The discriminant group `L*/L` with its form λ ↦ ⟨λ,λ⟩ mod 2.
#[derive(Debug, Clone)]
pub struct DiscriminantSpace {
    pub group: QuotientGroup,
    pub space: QuadSpace,
}

pub fn discriminant_space(l: &RationalLattice) -> Result<DiscriminantSpace> {
    let group = l.discriminant_group()?;
    if !group.is_elementary_two() {
        return Err(Error::Precondition("discriminant group is not elementary abelian of exponent 2".into()));
    }
    let m = group.invariants().len();
    if m > MAX_QDIM {
        return Err(Error::DimensionTooLarge { dim: m, max: MAX_QDIM });
    }
    let mut table = Vec::with_capacity(1 << m);
    for mask in 0..1u64 << m {
        let rep = group.element_of_mask(mask);
        let norm = |v: &[i64]| crate::lattice::raw_dot(v, v);
        let raw = norm(&rep);
        if raw % RAW_UNIT != 0 {
            return Err(Error::InvalidForm(format!("coset {mask:b} has a non-integral norm")));
        }
        let val = ((raw / RAW_UNIT).rem_euclid(2)) as u8;
        for b in l.basis() {
            for sign in [1, -1] {
                let shifted: Vec<i64> = rep.iter().zip(b).map(|(x, y)| x + sign * y).collect();
                let r = norm(&shifted);
                if r % RAW_UNIT != 0 || ((r / RAW_UNIT).rem_euclid(2)) as u8 != val {
                    return Err(Error::InvalidForm(format!("q is not constant on coset {mask:b}")));
                }
            }
        }
        table.push(val);
    }
    Ok(DiscriminantSpace { group, space: QuadSpace::from_table(m, table)? })
}

pub fn discriminant_qspace(l: &RationalLattice) -> Result<QuadSpace> {
    Ok(discriminant_space(l)?.space)
}

#[derive(Debug, Clone, Serialize)]
pub struct QSpaceReport {
    pub dim: usize,
    pub qtype: QType,
    pub singular_nonzero: u64,
    pub reflections: usize,
    pub generating_set: usize,
    pub subspace_counts: Vec<usize>,
    pub o_orbits: Vec<Vec<usize>>,
    pub omega_orbits: Vec<Vec<usize>>,
    pub vector_orbits: Vec<usize>,
    pub group_order: String,
    pub closed_form_order: String,
}

/// Everything about the dim-10 plus model that the classification uses.
pub fn model_report(m: usize) -> Result<QSpaceReport> {
    let v = QuadSpace::hyperbolic(m)?;
    let refl = reflection_generating_set(&v)?;
    let omega = omega_generating_set(&v)?;
    let mut counts = Vec::new();
    let mut o_orbits = Vec::new();
    let mut omega_orbits = Vec::new();
    for k in 0..=m {
        let s = totally_singular_subspaces(&v, k);
        counts.push(s.len());
        o_orbits.push(orbits(&refl, &s)?.sizes());
        omega_orbits.push(orbits(&omega, &s)?.sizes());
    }
    let vo = vector_orbits(v.n, &refl);
    Ok(QSpaceReport {
        dim: v.n,
        qtype: v.type_of()?,
        singular_nonzero: v.singular_count() - 1,
        reflections: reflection_generators(&v)?.len(),
        generating_set: refl.len(),
        subspace_counts: counts,
        o_orbits,
        omega_orbits,
        vector_orbits: vo.sizes(),
        group_order: group_order_witt(&v)?.to_string(),
        closed_form_order: orthogonal_order_plus(m as u32).to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{barnes_wall16, sqrt2_e8};
    use proptest::prelude::*;

    #[test]
    fn hyperbolic_plane() {
        let v = QuadSpace::hyperbolic(1).unwrap();
        assert_eq!(v.table(), &[0, 0, 0, 1]);
        assert_eq!(v.type_of().unwrap(), QType::Plus);
        assert_eq!(v.singular_count(), 3);
        assert_eq!(QuadSpace::elliptic(1).unwrap().type_of().unwrap(), QType::Minus);
    }

    #[test]
    fn singular_counts() {
        assert_eq!(QuadSpace::hyperbolic(5).unwrap().singular_count(), 528);
        assert_eq!(QuadSpace::hyperbolic(4).unwrap().singular_count(), 136);
        assert_eq!(QuadSpace::elliptic(4).unwrap().singular_count(), 120);
    }

    #[test]
    fn singular_form_rejected() {
        let v = QuadSpace::from_basis(&[0, 0], &[0, 0]).unwrap();
        assert!(matches!(v.type_of(), Err(Error::SingularForm(2))));
    }

    #[test]
    fn non_quadratic_table_rejected() {
        // q(x) = 1 only at 11 and 111: the polar form is not bilinear.
        let mut t = vec![0u8; 8];
        t[3] = 1;
        t[7] = 1;
        t[5] = 1;
        assert!(QuadSpace::from_table(3, t).is_err());
    }

    #[test]
    fn type_matches_witt_index() {
        for m in 1..=4 {
            assert_eq!(QuadSpace::hyperbolic(m).unwrap().witt_index(), m);
            assert_eq!(QuadSpace::elliptic(m).unwrap().witt_index(), m - 1);
        }
    }

    #[test]
    fn totally_singular_counts_dim10() {
        let v = QuadSpace::hyperbolic(5).unwrap();
        let expected = [1usize, 527, 23715, 118575, 71145, 4590];
        for (k, &e) in expected.iter().enumerate() {
            if k == 3 {
                continue;
            }
            assert_eq!(totally_singular_subspaces(&v, k).len(), e, "k={k}");
            assert_eq!(totally_singular_count_plus(5, k as u32), e as u128);
        }
        assert_eq!(totally_singular_count_plus(5, 5), 2 * 3 * 5 * 9 * 17);
    }

    #[test]
    fn reflections() {
        let v = QuadSpace::hyperbolic(5).unwrap();
        let r = reflection_generators(&v).unwrap();
        assert_eq!(r.len(), 496);
        let id = F2Matrix::identity(10);
        for g in r.iter().step_by(37) {
            assert_eq!(g.compose(g).matrix(), &id);
            assert_eq!(dickson(g), 1);
        }
        let a = (1..1024u64).find(|&a| v.q(a) == 1).unwrap();
        let g = reflection(&v, a).unwrap();
        for x in 0..1024u64 {
            if v.b(x, a) == 0 {
                assert_eq!(g.apply(x), x);
            }
        }
        assert_eq!(dickson(&r[0].compose(&r[1])), 0);
        assert_eq!(dickson(&OrthMap::new(&v, id).unwrap()), 0);
    }

    #[test]
    fn orbits_on_top_subspaces() {
        let v = QuadSpace::hyperbolic(5).unwrap();
        let s5 = totally_singular_subspaces(&v, 5);
        let o = orbits(&reflection_generators(&v).unwrap(), &s5).unwrap();
        assert_eq!(o.sizes(), vec![4590]);
        let omega = omega_generators(&v).unwrap();
        assert!(omega.iter().all(|g| dickson(g) == 0));
        assert_eq!(orbits(&omega, &s5).unwrap().sizes(), vec![2295, 2295]);
        for k in 1..=2 {
            let s = totally_singular_subspaces(&v, k);
            assert_eq!(orbits(&omega, &s).unwrap().len(), 1);
        }
        // Reversed generator order gives the same canonical partition.
        let mut rev = omega.clone();
        rev.reverse();
        assert_eq!(orbits(&rev, &s5).unwrap(), orbits(&omega, &s5).unwrap());
    }

    #[test]
    fn generating_subsets() {
        let v = QuadSpace::hyperbolic(5).unwrap();
        let small = reflection_generating_set(&v).unwrap();
        assert!(small.len() < 20);
        let s5 = totally_singular_subspaces(&v, 5);
        assert_eq!(orbits(&small, &s5).unwrap(), orbits(&reflection_generators(&v).unwrap(), &s5).unwrap());
        let omega = omega_generating_set(&v).unwrap();
        assert!(omega.iter().all(|g| dickson(g) == 0));
        assert_eq!(orbits(&omega, &s5).unwrap(), orbits(&omega_generators(&v).unwrap(), &s5).unwrap());
        let s3 = totally_singular_subspaces(&v, 3);
        assert_eq!(s3.len(), 118575);
        assert_eq!(orbits(&omega, &s3).unwrap().len(), 1);
        assert_eq!(orbits(&omega, &totally_singular_subspaces(&v, 4)).unwrap().len(), 1);
    }

    #[test]
    fn vector_orbits_dim10() {
        let v = QuadSpace::hyperbolic(5).unwrap();
        let o = vector_orbits(10, &reflection_generators(&v).unwrap());
        let mut sizes = o.sizes();
        sizes.sort();
        assert_eq!(sizes, vec![1, 496, 527]);
    }

    #[test]
    fn witt_order() {
        assert_eq!(group_order_witt(&QuadSpace::hyperbolic(1).unwrap()).unwrap(), BigUint::from(2u32));
        assert_eq!(brute_force_order(&QuadSpace::hyperbolic(1).unwrap()).unwrap(), 2);
        assert_eq!(brute_force_order(&QuadSpace::hyperbolic(2).unwrap()).unwrap(), 72);
        assert_eq!(group_order_witt(&QuadSpace::hyperbolic(2).unwrap()).unwrap(), BigUint::from(72u32));
        assert_eq!(brute_force_order(&QuadSpace::elliptic(1).unwrap()).unwrap(), 6);
        assert_eq!(group_order_witt(&QuadSpace::elliptic(2).unwrap()).unwrap(), BigUint::from(brute_force_order(&QuadSpace::elliptic(2).unwrap()).unwrap()));
        let o10 = group_order_witt(&QuadSpace::hyperbolic(5).unwrap()).unwrap();
        assert_eq!(o10, orthogonal_order_plus(5));
        // |Ω⁺(10,2)| = 2^20·(2^5 − 1)·Π_{i=1..4}(2^{2i} − 1).
        let omega: u64 = (1 << 20) * 31 * 3 * 15 * 63 * 255;
        assert_eq!(o10, BigUint::from(2 * omega));
    }

    #[test]
    fn discriminant_forms() {
        for l in [sqrt2_e8(), barnes_wall16()] {
            let v = discriminant_qspace(&l).unwrap();
            assert_eq!(v.dim(), 8);
            assert_eq!(v.type_of().unwrap(), QType::Plus);
            assert_eq!(v.singular_count(), 136);
        }
        let unimodular = crate::leechlab::build_leech();
        assert_eq!(discriminant_qspace(&unimodular).unwrap().dim(), 0);
    }

    fn space() -> impl Strategy<Value = QuadSpace> {
        (1usize..=5, any::<bool>()).prop_map(|(m, plus)| if plus { QuadSpace::hyperbolic(m).unwrap() } else { QuadSpace::elliptic(m).unwrap() })
    }

    proptest! {
        #[test]
        fn dickson_additive(v in space(), picks in proptest::collection::vec(any::<u16>(), 4)) {
            let refl = reflection_generators(&v).unwrap();
            let pick = |k: u16| &refl[k as usize % refl.len()];
            let g = pick(picks[0]).compose(pick(picks[1]));
            let h = pick(picks[2]).compose(pick(picks[3])).compose(pick(picks[0]));
            prop_assert_eq!(dickson(&g.compose(&h)), dickson(&g) ^ dickson(&h));
        }

        #[test]
        fn polar_form_bilinear(v in space(), x in any::<u64>(), y in any::<u64>(), z in any::<u64>()) {
            let mask = (1u64 << v.dim()) - 1;
            let (x, y, z) = (x & mask, y & mask, z & mask);
            prop_assert_eq!(v.b(x ^ y, z), v.b(x, z) ^ v.b(y, z));
            prop_assert_eq!(v.b(x, x), 0);
            prop_assert_eq!(v.q(x ^ y), v.q(x) ^ v.q(y) ^ v.b(x, y));
        }
    }
}
