//! The Leech lattice in Golay coordinates, the sublattices Λ(i) and D_i, and
//! the splitting U = U¹ ⊕ U² along an octad.

use serde::Serialize;

use crate::codes::{golay24, standard_sextet_and_refinements, subcode_orthogonal, BinaryCode, Sextet};
use crate::error::{Error, Result};
use crate::f2core::{kernel, F2Matrix};
use crate::lattice::intmat::Row;
use crate::lattice::{alpha, construction_b, index_in, on_support, raw_dot, Isometry, RationalLattice, RAW_UNIT};

pub const N: usize = 24;

/// The vector α_Ω/4 − α_1.
pub fn odd_generator() -> Row {
    let mut v = vec![2; N];
    v[0] -= 8;
    v
}

pub fn build_leech() -> RationalLattice {
    construction_b(&golay24()).with_vectors(&[odd_generator()]).expect("small entries")
}

/// ε_c negates α_j for j ∈ c.
pub fn epsilon(c: u64) -> Isometry {
    Isometry::epsilon(N, c)
}

pub const LAMBDA_INDICES: [u32; 4] = [1, 2, 3, 5];

#[derive(Debug, Clone)]
pub struct LeechContext {
    pub golay: BinaryCode,
    pub sextets: [Sextet; 3],
    pub leech: RationalLattice,
    /// The octad O₁ used for ε_c.
    pub octad: u64,
    pub c3: BinaryCode,
    pub c5: BinaryCode,
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaReport {
    pub i: u32,
    pub index: u128,
    pub parity_kernel_agrees: bool,
    pub dual_description_agrees: bool,
    pub even: bool,
    pub two_elementary: bool,
    pub totally_even: bool,
    pub discriminant: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenLa5Report {
    pub generates_dual: bool,
    pub norms_integral: bool,
    pub inner_products_half_integral: bool,
}

#[derive(Debug, Clone)]
pub struct USplit {
    pub u1: RationalLattice,
    pub u2: RationalLattice,
    pub u: RationalLattice,
}

impl LeechContext {
    pub fn new() -> Result<Self> {
        let golay = golay24();
        let (p1, p2, p3) = standard_sextet_and_refinements()?;
        let leech = build_leech();
        let c3 = subcode_orthogonal(&golay, &[p1.tetrads[0]]);
        let c5 = subcode_orthogonal(&golay, &[p1.tetrads[0], p2.tetrads[0], p3.tetrads[0]]);
        Ok(LeechContext { golay, sextets: [p1, p2, p3], octad: p1.octad(0), leech, c3, c5 })
    }

    /// Λ(i) as Construction B on the code G₂₄, C(3) or C(5); Λ(1) = Λ.
    pub fn lambda(&self, i: u32) -> Result<RationalLattice> {
        match i {
            1 => Ok(self.leech.clone()),
            2 => Ok(construction_b(&self.golay)),
            3 => Ok(construction_b(&self.c3)),
            5 => Ok(construction_b(&self.c5)),
            _ => Err(Error::Precondition(format!("Λ({i}) is defined for i = 1, 2, 3, 5"))),
        }
    }

    /// Generators of D_i beyond 2Λ.
    pub fn d_extra(&self, i: u32) -> Result<Vec<Row>> {
        let t = |j: usize| on_support(N, self.sextets[j].tetrads[0], 8);
        let mut two_alpha = alpha(N, 0);
        two_alpha[0] *= 2;
        Ok(match i {
            1 => vec![],
            2 => vec![two_alpha],
            3 => vec![two_alpha, t(0)],
            5 => vec![two_alpha, t(0), t(1), t(2)],
            _ => return Err(Error::Precondition(format!("D_{i} is defined for i = 1, 2, 3, 5"))),
        })
    }

    pub fn d(&self, i: u32) -> Result<RationalLattice> {
        self.leech.scaled(2).with_vectors(&self.d_extra(i)?)
    }

    /// `{v ∈ Λ : ⟨v, D_i⟩ ⊆ 2ℤ}` from the parity map Λ → F₂^k.
    pub fn lambda_parity(&self, i: u32) -> Result<RationalLattice> {
        let extra = self.d_extra(i)?;
        let basis = self.leech.basis();
        // ⟨v, 2Λ⟩ ⊆ 2ℤ always, so only the extra generators constrain.
        let mut words = Vec::new();
        for g in &extra {
            let mut w = 0u64;
            for (k, b) in basis.iter().enumerate() {
                let ip = raw_dot(b, g);
                if ip % RAW_UNIT != 0 {
                    return Err(Error::Verification("D_i is not integral against Λ".into()));
                }
                if (ip / RAW_UNIT).rem_euclid(2) == 1 {
                    w |= 1 << k;
                }
            }
            words.push(w);
        }
        let m = F2Matrix::from_words(basis.len(), words)?;
        let lifts: Vec<Row> = kernel(&m).basis().iter().map(|&x| {
            let coeffs: Vec<i64> = (0..basis.len()).map(|k| ((x >> k) & 1) as i64).collect();
            self.leech.combine(&coeffs)
        }).collect();
        self.leech.scaled(2).with_vectors(&lifts)
    }

    /// Λ(i) from the parity kernel, refused unless 2·D_i* and the
    /// Construction B lattice agree with it.
    pub fn lambda_i(&self, i: u32) -> Result<RationalLattice> {
        let l = self.lambda_parity(i)?;
        if self.lambda_dual(i)? != l || self.lambda(i)? != l {
            return Err(Error::Verification(format!("descriptions of Λ({i}) disagree")));
        }
        Ok(l)
    }

    /// 2·D_i*.
    pub fn lambda_dual(&self, i: u32) -> Result<RationalLattice> {
        Ok(self.d(i)?.dual()?.scaled(2))
    }

    pub fn lambda_report(&self, i: u32) -> Result<LambdaReport> {
        let l = self.lambda(i)?;
        let p = l.predicates()?;
        Ok(LambdaReport {
            i,
            index: index_in(&l, &self.leech)?,
            parity_kernel_agrees: self.lambda_parity(i)? == l,
            dual_description_agrees: self.lambda_dual(i)? == l,
            even: p.even,
            two_elementary: p.two_elementary,
            totally_even: p.totally_even,
            discriminant: l.discriminant_group()?.invariants().to_vec(),
        })
    }

    /// The generators Λ, α_1 and α_{P^j_1}/2 of Λ(5)*.
    pub fn lambda5_dual_generators(&self) -> Vec<Row> {
        let mut gens: Vec<Row> = self.leech.basis().to_vec();
        gens.push(alpha(N, 0));
        for s in &self.sextets {
            gens.push(on_support(N, s.tetrads[0], 4));
        }
        gens
    }

    pub fn lambda5_dual_generators_check(&self) -> Result<GenLa5Report> {
        let dual = self.lambda(5)?.dual()?;
        let gens = self.lambda5_dual_generators();
        let spanned = RationalLattice::from_generators(N, gens.clone())?;
        let stated: Vec<&Row> = gens[self.leech.rank()..].iter().collect();
        let norms_integral = stated.iter().all(|g| raw_dot(g, g) % RAW_UNIT == 0);
        let all: Vec<&Row> = self.leech.basis().iter().chain(stated.iter().copied()).collect();
        let inner_products_half_integral = all.iter().all(|a| all.iter().all(|b| (2 * raw_dot(a, b)) % RAW_UNIT == 0));
        Ok(GenLa5Report { generates_dual: spanned == dual, norms_integral, inner_products_half_integral })
    }

    pub fn u_split(&self, c: u64) -> Result<USplit> {
        if c.count_ones() != 8 || !self.golay.contains(c) {
            return Err(Error::Precondition("ε_c splitting needs an octad".into()));
        }
        let e = epsilon(c);
        let u1 = self.leech.fixed_sublattice(&e, -1)?;
        let u2 = self.leech.fixed_sublattice(&e, 1)?;
        let u = u1.join(&u2)?;
        Ok(USplit { u1, u2, u })
    }

    /// Coordinates of the octad and of its complement, in increasing order.
    pub fn octad_coords(&self) -> (Vec<usize>, Vec<usize>) {
        let inside = (0..N).filter(|&j| (self.octad >> j) & 1 == 1).collect();
        let outside = (0..N).filter(|&j| (self.octad >> j) & 1 == 0).collect();
        (inside, outside)
    }

    /// U¹ and U² as full-rank lattices in frames of dimension 8 and 16.
    pub fn u_factors(&self) -> Result<(RationalLattice, RationalLattice)> {
        let s = self.u_split(self.octad)?;
        let (inside, outside) = self.octad_coords();
        Ok((s.u1.restrict(&inside)?, s.u2.restrict(&outside)?))
    }
}

/// Membership in the Leech lattice for Conway-scaled coordinates
/// (our frame coordinates halved): all coordinates congruent to m mod 2,
/// sum ≡ 4m mod 8 and each residue class mod 4 supported on a codeword.
pub fn conway_member(golay: &BinaryCode, x: &[i64]) -> bool {
    let m = x[0].rem_euclid(2);
    if x.iter().any(|&v| v.rem_euclid(2) != m) {
        return false;
    }
    let s: i64 = x.iter().sum();
    if s.rem_euclid(8) != (4 * m).rem_euclid(8) {
        return false;
    }
    let class = |a: i64| x.iter().enumerate().filter(|(_, &v)| v.rem_euclid(4) == a).fold(0u64, |acc, (j, _)| acc | 1 << j);
    if m == 0 {
        golay.contains(class(2))
    } else {
        golay.contains(class(1))
    }
}
