//! Labels of irreducible V_L⁺-modules, their graded dimensions and the
//! quadratic form read off from the grading.
//!
//! A label is `[λ]^±` (untwisted, λ ∈ L*/L) or `[χ_λ]^±` (twisted). The
//! "+" twisted class is the one containing the ground level of T_χ.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::cache::{binned_theta_cached, ThetaCache};
use crate::lattice::intmat::Row;
use crate::lattice::{raw_dot, Isometry, QuotientGroup, RationalLattice, RAW_UNIT};
use crate::leechlab::LeechContext;
use crate::qseries::{euler_p, euler_q, twisted_a, twisted_b, Grading, QSeries};
use crate::qspace::{discriminant_space, orbits_of_permutations, reflection_generators, vector_orbits, DiscriminantSpace, QType, QuadSpace};

/// Default truncation in doubled exponents (q^3).
pub const DEFAULT_MAX_D: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ModuleLabel {
    pub twisted: bool,
    /// Class in L*/L as a mask over the discriminant generators.
    pub coset: u64,
    pub sign: Sign,
}

impl fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twisted {
            write!(f, "[chi_{:x}]^{}", self.coset, self.sign.symbol())
        } else {
            write!(f, "[{:x}]^{}", self.coset, self.sign.symbol())
        }
    }
}

/// ½(θ·P_n ± δ·Q_n); `is_zero` says whether the coset is L itself.
pub fn untwisted_character(theta: &QSeries, is_zero: bool, sign: Sign, n: u32) -> Result<QSeries> {
    let max_d = theta.max_d();
    let mut s = theta.mul(&euler_p(n, max_d));
    if is_zero {
        let q = euler_q(n, max_d);
        s = match sign {
            Sign::Plus => s.add(&q),
            Sign::Minus => s.sub(&q),
        };
    }
    s.div_exact(&BigInt::from(2))
}

/// (2^l/2)·q^{n/16}·(A_n ± B_n).
pub fn twisted_character(n: u32, l: u32, sign: Sign, max_d: u32) -> Result<QSeries> {
    if n % 8 != 0 {
        return Err(Error::ExponentGrid(format!("q^{n}/16 is off the half-integer grid")));
    }
    let (a, b) = (twisted_a(n, max_d), twisted_b(n, max_d));
    let s = match sign {
        Sign::Plus => a.add(&b),
        Sign::Minus => a.sub(&b),
    };
    let s = s.scale(&(BigInt::from(1) << l as usize)).div_exact(&BigInt::from(2))?;
    Ok(s.shift(n / 8))
}

/// 0 for integral grading, 1 for half-integral; mixed grading is an error.
pub fn q_of_series(s: &QSeries) -> Result<u8> {
    match s.grading()? {
        Some(Grading::Integral) => Ok(0),
        Some(Grading::HalfIntegral) => Ok(1),
        None => Err(Error::Verification("graded dimension vanishes to the truncation order".into())),
    }
}

/// Module data of a 2-elementary totally even lattice: discriminant space
/// and the theta series of every class of L*/L.
#[derive(Debug, Clone)]
pub struct LatticeModules {
    pub lattice: RationalLattice,
    pub dual: RationalLattice,
    pub disc: DiscriminantSpace,
    pub n: u32,
    /// log₂|L*/L|.
    pub m: u32,
    /// dim T_χ = 2^l with 2^{2l} = |L/2L*|.
    pub l: u32,
    pub max_d: u32,
    thetas: Vec<QSeries>,
}

impl LatticeModules {
    pub fn new(lattice: &RationalLattice, max_d: u32, ceiling: u64, cache: Option<&ThetaCache>) -> Result<Self> {
        let p = lattice.predicates()?;
        if !(p.even && p.two_elementary && p.totally_even) {
            return Err(Error::Precondition("lattice is not 2-elementary totally even".into()));
        }
        let disc = discriminant_space(lattice)?;
        let dual = lattice.dual()?;
        let n = lattice.rank() as u32;
        let m = disc.group.invariants().len() as u32;
        let bins = binned_theta_cached(cache, &dual, &[lattice], max_d, ceiling)?;
        let (group, thetas) = bins.into_iter().next().expect("one quotient");
        if group.invariants() != disc.group.invariants() {
            return Err(Error::Verification("quotient generators differ from the discriminant group".into()));
        }
        // Same Smith data, so masks agree; spot-check on the generators.
        for (i, g) in disc.group.generators().iter().enumerate() {
            if group.mask(g)? != 1 << i {
                return Err(Error::Verification("quotient masks disagree".into()));
            }
        }
        Ok(LatticeModules { lattice: lattice.clone(), dual, disc, n, m, l: (n - m) / 2, max_d, thetas })
    }

    pub fn group(&self) -> &QuotientGroup {
        &self.disc.group
    }

    pub fn label_count(&self) -> usize {
        1 << (self.m + 2)
    }

    /// Labels in index order: untwisted before twisted, then coset, then sign.
    pub fn labels(&self) -> Vec<ModuleLabel> {
        let mut out = Vec::with_capacity(self.label_count());
        for twisted in [false, true] {
            for coset in 0..1u64 << self.m {
                for sign in [Sign::Plus, Sign::Minus] {
                    out.push(ModuleLabel { twisted, coset, sign });
                }
            }
        }
        out
    }

    pub fn index_of(&self, x: &ModuleLabel) -> usize {
        ((x.twisted as usize) << (self.m + 1)) | (x.coset as usize) << 1 | (x.sign == Sign::Minus) as usize
    }

    pub fn coset_theta(&self, coset: u64) -> &QSeries {
        &self.thetas[coset as usize]
    }

    pub fn coset_of(&self, v: &[i64]) -> Result<u64> {
        self.disc.group.mask(v)
    }

    pub fn character(&self, x: &ModuleLabel) -> Result<QSeries> {
        if x.coset >= 1 << self.m {
            return Err(Error::Precondition(format!("coset {:x} out of range", x.coset)));
        }
        if x.twisted {
            twisted_character(self.n, self.l, x.sign, self.max_d)
        } else {
            untwisted_character(self.coset_theta(x.coset), x.coset == 0, x.sign, self.n)
        }
    }

    pub fn q_form(&self, x: &ModuleLabel) -> Result<u8> {
        q_of_series(&self.character(x)?)
    }

    /// Permutation of label indices induced by f_β.
    pub fn f_beta_action(&self, beta: &[i64]) -> Result<Vec<usize>> {
        if !self.dual.contains(beta) {
            return Err(Error::Precondition("β is not in L*".into()));
        }
        let shift = self.coset_of(beta)?;
        let mut perm = vec![0; self.label_count()];
        for x in self.labels() {
            let y = if x.twisted {
                ModuleLabel { coset: x.coset ^ shift, ..x }
            } else {
                let ip = raw_dot(beta, &self.disc.group.element_of_mask(x.coset));
                if ip % (RAW_UNIT / 2) != 0 {
                    return Err(Error::Verification("⟨β, λ⟩ is not in ℤ/2".into()));
                }
                let half = (ip / (RAW_UNIT / 2)).rem_euclid(2) == 1;
                ModuleLabel { sign: if half { x.sign.flip() } else { x.sign }, ..x }
            };
            perm[self.index_of(&x)] = self.index_of(&y);
        }
        Ok(perm)
    }

    /// Permutation induced by an automorphism g of L, at pair level: the
    /// pair {[λ]⁺, [λ]⁻} goes to the pair of ḡ⁻¹(λ), signs kept. A lift of
    /// g to L̂ is only determined up to f_β, which already permutes each
    /// twisted sign class transitively, so twisted labels are left fixed.
    pub fn isometry_action(&self, g: &Isometry) -> Result<Vec<usize>> {
        if !g.preserves(&self.lattice) {
            return Err(Error::NotAutomorphism("g does not preserve L".into()));
        }
        let inv = g.inverse();
        let mut perm = vec![0; self.label_count()];
        for x in self.labels() {
            let y = if x.twisted {
                x
            } else {
                let rep = self.disc.group.element_of_mask(x.coset);
                let img = inv.apply(&rep).ok_or_else(|| Error::NotAutomorphism("image leaves the frame".into()))?;
                ModuleLabel { coset: self.coset_of(&img)?, ..x }
            };
            perm[self.index_of(&x)] = self.index_of(&y);
        }
        Ok(perm)
    }

    /// f_β for β running over a basis of L*.
    pub fn f_beta_generators(&self) -> Result<Vec<Vec<usize>>> {
        self.dual.basis().iter().map(|b| self.f_beta_action(b)).collect()
    }
}

/// Labels with q-values beside an abstract space of the same size and type.
#[derive(Debug, Clone, Serialize)]
pub struct LabeledQSpace<T> {
    pub labels: Vec<T>,
    pub qvalues: Vec<u8>,
    pub dim: usize,
    pub qtype: QType,
    pub singular: usize,
    pub model_singular: u64,
    pub multiset_match: bool,
    #[serde(skip)]
    pub model: QuadSpace,
}

impl<T> LabeledQSpace<T> {
    fn new(labels: Vec<T>, qvalues: Vec<u8>) -> Result<Self> {
        let size = labels.len();
        if !size.is_power_of_two() || size.trailing_zeros() % 2 == 1 {
            return Err(Error::Precondition(format!("{size} labels is not 4^k")));
        }
        let dim = size.trailing_zeros() as usize;
        let singular = qvalues.iter().filter(|&&v| v == 0).count();
        let plus = QuadSpace::hyperbolic(dim / 2)?;
        let minus = QuadSpace::elliptic(dim / 2)?;
        let (model, qtype) = if singular as u64 == plus.singular_count() {
            (plus, QType::Plus)
        } else if singular as u64 == minus.singular_count() {
            (minus, QType::Minus)
        } else {
            return Err(Error::Verification(format!("{singular} singular labels fits neither type")));
        };
        let model_singular = model.singular_count();
        Ok(LabeledQSpace { labels, qvalues, dim, qtype, singular, model_singular, multiset_match: singular as u64 == model_singular, model })
    }
}

pub fn build_sl(modules: &LatticeModules) -> Result<LabeledQSpace<ModuleLabel>> {
    if modules.n != 8 && modules.n != 16 {
        return Err(Error::Precondition(format!("rank {} is neither 8 nor 16", modules.n)));
    }
    let labels = modules.labels();
    let qvalues = labels.iter().map(|x| modules.q_form(x)).collect::<Result<_>>()?;
    LabeledQSpace::new(labels, qvalues)
}

/// Reflections in the norm-4 vectors, one per ± pair.
pub fn norm4_reflections(l: &RationalLattice, ceiling: u64) -> Result<Vec<Isometry>> {
    let mut out = Vec::new();
    for v in l.vectors_of_norm(4, ceiling)? {
        if v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
            out.push(Isometry::reflection(&v)?);
        }
    }
    Ok(out)
}

/// Automorphisms of construction B on RM(1,4), with coordinate p ∈ F₂⁴:
/// translations, the coordinate swaps and one transvection of F₂⁴, and the
/// sign changes on degree-two monomials x_i x_j.
pub fn rm_frame_generators() -> Result<Vec<Isometry>> {
    let perm = |f: &dyn Fn(usize) -> usize| Isometry::permutation(&(0..16).map(f).collect::<Vec<_>>());
    let mut gens = Vec::new();
    for i in 0..4 {
        gens.push(perm(&|p| p ^ (1 << i))?);
    }
    for i in 0..3 {
        gens.push(perm(&|p| {
            let (a, b) = ((p >> i) & 1, (p >> (i + 1)) & 1);
            (p & !(3 << i)) | (a << (i + 1)) | (b << i)
        })?);
    }
    gens.push(perm(&|p| p ^ ((p & 1) << 1))?);
    let coord = |i: usize| (0..16u64).filter(|p| (p >> i) & 1 == 1).fold(0u64, |a, p| a | 1 << p);
    for i in 0..4 {
        for j in i + 1..4 {
            gens.push(Isometry::epsilon(16, coord(i) & coord(j)));
        }
    }
    Ok(gens)
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitShadow {
    /// Orbits of ⟨f_β, committed isometries⟩ on labels.
    pub lattice_orbit_sizes: Vec<usize>,
    /// Size of the orbit of [0]⁻ under those generators.
    pub minus_vacuum_orbit: usize,
    /// True when the lattice-side generators do not reach the expected
    /// three orbits; the extra automorphisms are not available here.
    pub under_generated: bool,
    /// Vector orbits of the full reflection group of the abstract model.
    pub model_orbit_sizes: Vec<usize>,
    /// Label classes {[0]⁺}, other singular, nonsingular.
    pub shadow_sizes: Vec<usize>,
    /// Each lattice-side orbit lies in one shadow class.
    pub refines_shadow: bool,
    /// The shadow class sizes equal the model orbit sizes.
    pub matches_model: bool,
    pub q_invariant: bool,
}

pub fn orbit_shadow(modules: &LatticeModules, sl: &LabeledQSpace<ModuleLabel>, isometries: &[Isometry]) -> Result<OrbitShadow> {
    let mut perms = modules.f_beta_generators()?;
    for g in isometries {
        perms.push(modules.isometry_action(g)?);
    }
    let q_invariant = perms.iter().all(|p| p.iter().enumerate().all(|(i, &j)| sl.qvalues[i] == sl.qvalues[j]));
    let part = orbits_of_permutations(sl.labels.len(), &perms);
    let vacuum = modules.index_of(&ModuleLabel { twisted: false, coset: 0, sign: Sign::Plus });
    let minus = modules.index_of(&ModuleLabel { twisted: false, coset: 0, sign: Sign::Minus });
    let class = |i: usize| if i == vacuum { 0 } else if sl.qvalues[i] == 0 { 1 } else { 2 };
    let mut shadow_sizes = vec![0; 3];
    for i in 0..sl.labels.len() {
        shadow_sizes[class(i)] += 1;
    }
    let refines_shadow = part.orbits.iter().all(|o| o.iter().all(|&i| class(i) == class(o[0])));
    let minus_vacuum_orbit = part.orbits.iter().find(|o| o.contains(&minus)).map_or(0, Vec::len);
    let refl = reflection_generators(&sl.model)?;
    let mut model_orbit_sizes = vector_orbits(sl.model.dim(), &refl).sizes();
    // Order as {0}, singular, nonsingular to line up with the shadow.
    model_orbit_sizes.sort_by_key(|&s| (s != 1, s as u64 != sl.model.singular_count() - 1));
    let matches_model = model_orbit_sizes == shadow_sizes;
    Ok(OrbitShadow {
        lattice_orbit_sizes: part.sizes(),
        minus_vacuum_orbit,
        under_generated: part.len() != 3,
        model_orbit_sizes,
        shadow_sizes,
        refines_shadow,
        matches_model,
        q_invariant,
    })
}

/// A member W₁ ⊗ W₂ of S₁₀.
pub type PairLabel = (ModuleLabel, ModuleLabel);

#[derive(Debug, Clone, Serialize)]
pub struct S10Report {
    pub members: usize,
    pub distinct: bool,
    pub factor_q_agree: bool,
    pub first_factor_bijective: bool,
    pub second_factor_bijective: bool,
    pub space: LabeledQSpace<PairLabel>,
}

/// The U¹/U² data used by the S₁₀ and LD3 checks.
#[derive(Debug, Clone)]
pub struct OctadModules {
    pub u1: LatticeModules,
    pub u2: LatticeModules,
    /// (λ₁, λ₂) class masks for each class of Λ/U, in mask order.
    pub glue: Vec<(u64, u64)>,
}

impl OctadModules {
    pub fn new(ctx: &LeechContext, max_d: u32, ceiling: u64, cache: Option<&ThetaCache>) -> Result<Self> {
        let (f1, f2) = ctx.u_factors()?;
        let u1 = LatticeModules::new(&f1, max_d, ceiling, cache)?;
        let u2 = LatticeModules::new(&f2, max_d, ceiling, cache)?;
        let split = ctx.u_split(ctx.octad)?;
        let q = ctx.leech.quotient(&split.u)?;
        let (inside, outside) = ctx.octad_coords();
        let mut glue = Vec::new();
        for mask in 0..1u64 << q.invariants().len() {
            let v = q.element_of_mask(mask);
            let part = |c: &[usize]| -> Row { c.iter().map(|&j| v[j]).collect() };
            glue.push((u1.coset_of(&part(&inside))?, u2.coset_of(&part(&outside))?));
        }
        Ok(OctadModules { u1, u2, glue })
    }

    pub fn members(&self) -> Vec<PairLabel> {
        let mut out = Vec::new();
        for &(a, b) in &self.glue {
            for (s1, s2, twisted) in [(Sign::Plus, Sign::Plus, false), (Sign::Minus, Sign::Minus, false), (Sign::Plus, Sign::Minus, true), (Sign::Minus, Sign::Plus, true)] {
                out.push((ModuleLabel { twisted, coset: a, sign: s1 }, ModuleLabel { twisted, coset: b, sign: s2 }));
            }
        }
        out.sort();
        out
    }
}

pub fn build_s10(om: &OctadModules) -> Result<S10Report> {
    let members = om.members();
    let mut seen = members.clone();
    seen.dedup();
    let distinct = seen.len() == members.len();
    let mut q1 = Vec::new();
    let mut agree = true;
    for (w1, w2) in &members {
        let a = om.u1.q_form(w1)?;
        let b = om.u2.q_form(w2)?;
        agree &= a == b;
        q1.push(a);
    }
    let bijective = |f: &dyn Fn(&PairLabel) -> ModuleLabel, count: usize| {
        let mut v: Vec<ModuleLabel> = members.iter().map(f).collect();
        v.sort();
        v.dedup();
        v.len() == members.len() && v.len() == count
    };
    Ok(S10Report {
        members: members.len(),
        distinct,
        factor_q_agree: agree,
        first_factor_bijective: bijective(&|p| p.0, om.u1.label_count()),
        second_factor_bijective: bijective(&|p| p.1, om.u2.label_count()),
        space: LabeledQSpace::new(members, q1)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub which: String,
    pub max_d: u32,
    pub passed: bool,
    /// First disagreeing doubled exponent with both coefficients.
    pub mismatch: Option<(u32, String, String)>,
    pub values: BTreeMap<String, String>,
}

impl DecompositionReport {
    fn compare(which: String, lhs: &QSeries, rhs: &QSeries, values: BTreeMap<String, String>) -> Self {
        let mismatch = lhs.first_difference(rhs).map(|(d, a, b)| (d, a.to_string(), b.to_string()));
        DecompositionReport { which, max_d: lhs.max_d().min(rhs.max_d()), passed: mismatch.is_none(), mismatch, values }
    }
}

/// Characters of V_Λ⁺ and V_Λ^{T,−}.
pub fn leech_characters(theta: &QSeries) -> Result<(QSeries, QSeries)> {
    let plus = untwisted_character(theta, true, Sign::Plus, 24)?;
    let twisted = twisted_character(24, 12, Sign::Minus, theta.max_d())?;
    Ok((plus, twisted))
}

/// ch V_Λ⁺ = Σ over Λ/L of ch V_{λ+L}⁺, given the class thetas of Λ/L.
pub fn ld1(i: u32, theta_leech: &QSeries, bins: &[QSeries]) -> Result<DecompositionReport> {
    let (lhs, _) = leech_characters(theta_leech)?;
    let mut rhs = QSeries::zero(theta_leech.max_d());
    let mut sum = QSeries::zero(theta_leech.max_d());
    for (mask, t) in bins.iter().enumerate() {
        rhs = rhs.add(&untwisted_character(t, mask == 0, Sign::Plus, 24)?);
        sum = sum.add(t);
    }
    let mut values = BTreeMap::new();
    values.insert("cosets".into(), bins.len().to_string());
    values.insert("theta_sum_matches".into(), (sum == *theta_leech).to_string());
    values.insert("q2_coefficient".into(), lhs.coeff(4).to_string());
    let mut r = DecompositionReport::compare(format!("LD1({i})"), &lhs, &rhs, values);
    r.passed &= sum == *theta_leech;
    Ok(r)
}

/// ch V_Λ^{T,−} = Σ over Λ/L of ch V_L^{T_χ,−}, with dim T_χ = 2^l.
pub fn ld2(i: u32, l_sub: &RationalLattice, leech: &RationalLattice, max_d: u32) -> Result<DecompositionReport> {
    let cosets = crate::lattice::index_in(l_sub, leech)?;
    let m = l_sub.discriminant_group()?.invariants().len() as u32;
    let l = (24 - m) / 2;
    let lhs = twisted_character(24, 12, Sign::Minus, max_d)?;
    let one = twisted_character(24, l, Sign::Minus, max_d)?;
    let rhs = one.scale(&BigInt::from(cosets));
    let mut values = BTreeMap::new();
    values.insert("cosets".into(), cosets.to_string());
    values.insert("l".into(), l.to_string());
    values.insert("dimension".into(), (cosets << l).to_string());
    let mut r = DecompositionReport::compare(format!("LD2({i})"), &lhs, &rhs, values);
    r.passed &= cosets << l == 1 << 12;
    Ok(r)
}

/// Both tensor decompositions over V_{U¹}⁺ ⊗ V_{U²}⁺.
pub fn ld3(om: &OctadModules, theta_leech: &QSeries) -> Result<Vec<DecompositionReport>> {
    let max_d = theta_leech.max_d().min(om.u1.max_d).min(om.u2.max_d);
    let theta = theta_leech.truncate(max_d);
    let (plus, twisted) = leech_characters(&theta)?;
    let mut rhs_plus = QSeries::zero(max_d);
    let mut rhs_twisted = QSeries::zero(max_d);
    let ch = |m: &LatticeModules, twisted: bool, coset: u64, sign: Sign| m.character(&ModuleLabel { twisted, coset, sign }).map(|s| s.truncate(max_d));
    for &(a, b) in &om.glue {
        for s in [Sign::Plus, Sign::Minus] {
            rhs_plus = rhs_plus.add(&ch(&om.u1, false, a, s)?.mul(&ch(&om.u2, false, b, s)?));
            rhs_twisted = rhs_twisted.add(&ch(&om.u1, true, a, s)?.mul(&ch(&om.u2, true, b, s.flip())?));
        }
    }
    let mut values = BTreeMap::new();
    values.insert("cosets".into(), om.glue.len().to_string());
    Ok(vec![
        DecompositionReport::compare("LD3(+)".into(), &plus, &rhs_plus, values.clone()),
        DecompositionReport::compare("LD3(T,-)".into(), &twisted, &rhs_twisted, values),
    ])
}

/// Leading term of a series as `c q^(d/2)`.
pub fn leading_term(s: &QSeries) -> Option<(u32, BigInt)> {
    s.leading().map(|(d, c)| (d, c.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate::DEFAULT_CEILING;
    use crate::lattice::{barnes_wall16, sqrt2_e8};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::OnceLock;

    fn e8() -> &'static LatticeModules {
        static M: OnceLock<LatticeModules> = OnceLock::new();
        M.get_or_init(|| LatticeModules::new(&sqrt2_e8(), DEFAULT_MAX_D, DEFAULT_CEILING, None).unwrap())
    }

    fn bw() -> &'static LatticeModules {
        static M: OnceLock<LatticeModules> = OnceLock::new();
        M.get_or_init(|| LatticeModules::new(&barnes_wall16(), DEFAULT_MAX_D, DEFAULT_CEILING, None).unwrap())
    }

    fn lead(m: &LatticeModules, twisted: bool, sign: Sign) -> (u32, BigInt) {
        leading_term(&m.character(&ModuleLabel { twisted, coset: 0, sign }).unwrap()).unwrap()
    }

    #[test]
    fn leading_terms() {
        assert_eq!(lead(e8(), false, Sign::Plus), (0, 1.into()));
        assert_eq!(lead(e8(), false, Sign::Minus), (2, 8.into()));
        assert_eq!(lead(e8(), true, Sign::Plus), (1, 1.into()));
        assert_eq!(lead(bw(), false, Sign::Minus), (2, 16.into()));
        assert_eq!(lead(bw(), true, Sign::Minus), (3, 256.into()));
        assert_eq!(e8().l, 0);
        assert_eq!(bw().l, 4);
    }

    #[test]
    fn bins_match_single_cosets() {
        let m = e8();
        for coset in [0u64, 1, 0x81, 0xff] {
            let rep = m.group().element_of_mask(coset);
            assert_eq!(&m.lattice.theta_coset(&rep, DEFAULT_MAX_D, DEFAULT_CEILING).unwrap(), m.coset_theta(coset));
        }
    }

    #[test]
    fn label_space_e8_and_bw() {
        for m in [e8(), bw()] {
            let sl = build_sl(m).unwrap();
            assert_eq!(sl.labels.len(), 1024);
            assert_eq!(sl.singular, 528);
            assert_eq!(sl.qtype, QType::Plus);
            assert!(sl.multiset_match);
            assert_eq!(sl.qvalues[m.index_of(&ModuleLabel { twisted: false, coset: 0, sign: Sign::Plus })], 0);
            // Untwisted q is the parity of the coset norm, equal for both signs.
            for coset in 0..256u64 {
                let expect = m.disc.space.q(coset);
                for sign in [Sign::Plus, Sign::Minus] {
                    assert_eq!(m.q_form(&ModuleLabel { twisted: false, coset, sign }).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn characters_nonnegative() {
        for m in [e8(), bw()] {
            for x in m.labels() {
                let s = m.character(&x).unwrap();
                assert!(s.all_nonnegative(), "{x}");
            }
        }
    }

    #[test]
    fn polar_identity_is_linking_pairing() {
        for m in [e8(), bw()] {
            let g = m.group();
            for a in 0..256u64 {
                let ra = g.element_of_mask(a);
                for b in 0..256u64 {
                    let rb = g.element_of_mask(b);
                    let two_ip = (raw_dot(&ra, &rb) / (RAW_UNIT / 2)).rem_euclid(2) as u8;
                    assert_eq!(m.disc.space.b(a, b), two_ip);
                }
            }
            assert!(m.disc.space.is_nonsingular());
        }
    }

    #[test]
    fn f_beta_preserves_q() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [e8(), bw()] {
            let sl = build_sl(m).unwrap();
            let dual = m.dual.basis().to_vec();
            for _ in 0..50 {
                let coeffs: Vec<i64> = (0..dual.len()).map(|_| rng.gen_range(-2..=2)).collect();
                let beta = m.dual.combine(&coeffs);
                let p = m.f_beta_action(&beta).unwrap();
                for (i, &j) in p.iter().enumerate() {
                    assert_eq!(sl.qvalues[i], sl.qvalues[j]);
                    assert_eq!(sl.labels[i].twisted, sl.labels[j].twisted);
                    if sl.labels[i].twisted {
                        assert_eq!(sl.labels[i].sign, sl.labels[j].sign);
                    }
                }
            }
            // β ∈ 2L* fixes twisted labels.
            let twice: Vec<i64> = dual[0].iter().map(|x| 2 * x).collect();
            let p = m.f_beta_action(&twice).unwrap();
            assert!(sl.labels.iter().enumerate().all(|(i, x)| !x.twisted || p[i] == i));
        }
    }

    #[test]
    fn isometries_act_on_labels() {
        let m = e8();
        let id = m.isometry_action(&Isometry::identity(8)).unwrap();
        assert!(id.iter().enumerate().all(|(i, &j)| i == j));
        let sl = build_sl(m).unwrap();
        let refl = norm4_reflections(&m.lattice, DEFAULT_CEILING).unwrap();
        assert_eq!(refl.len(), 120);
        for g in refl.iter().take(10) {
            let p = m.isometry_action(g).unwrap();
            assert!(p.iter().enumerate().all(|(i, &j)| sl.qvalues[i] == sl.qvalues[j]));
        }
        // -1 fixes every class because 2L* ⊆ L.
        let minus = Isometry::epsilon(8, 0xff);
        let p = m.isometry_action(&minus).unwrap();
        assert!(p.iter().enumerate().all(|(i, &j)| i == j));
        let rm = rm_frame_generators().unwrap();
        assert!(rm.iter().all(|g| g.preserves(&bw().lattice)));
    }

    #[test]
    fn orbit_shadows() {
        let m = e8();
        let sl = build_sl(m).unwrap();
        let refl = norm4_reflections(&m.lattice, DEFAULT_CEILING).unwrap();
        let s = orbit_shadow(m, &sl, &refl).unwrap();
        assert_eq!(s.shadow_sizes, vec![1, 527, 496]);
        assert_eq!(s.model_orbit_sizes, vec![1, 527, 496]);
        assert!(s.refines_shadow && s.matches_model && s.q_invariant);
        let mut sizes = s.lattice_orbit_sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 240, 256, 256, 270]);
        assert!(s.under_generated);
        let b = bw();
        let s = orbit_shadow(b, &build_sl(b).unwrap(), &rm_frame_generators().unwrap()).unwrap();
        assert_eq!(s.shadow_sizes, vec![1, 527, 496]);
        assert!(s.refines_shadow && s.q_invariant);
    }

    proptest! {
        #[test]
        fn twisted_pair_sums(n in prop::sample::select(vec![8u32, 16, 24]), l in 0u32..6) {
            let p = twisted_character(n, l, Sign::Plus, 8).unwrap();
            let m = twisted_character(n, l, Sign::Minus, 8).unwrap();
            let a = twisted_a(n, 8).scale(&(BigInt::from(1) << l as usize)).shift(n / 8);
            prop_assert_eq!(p.add(&m), a);
            prop_assert!(q_of_series(&p).unwrap() != q_of_series(&m).unwrap());
        }
    }
}
