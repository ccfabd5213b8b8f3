//! Binary linear codes: the extended Golay and Hamming codes, RM(1,4), octads,
//! sextets and the refinement sextets used to cut out sublattices of Λ.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::f2core::{kernel, parity, F2Matrix, F2Subspace};

/// Largest code dimension whose codewords are enumerated exhaustively.
pub const MAX_ENUM_DIM: usize = 28;

/// Generator of the extended Golay code: the twelve shifts of the cyclic
/// generator 1 + x² + x⁴ + x⁵ + x⁶ + x¹⁰ + x¹¹ on 23 points, each with an
/// overall parity bit at coordinate 23.
pub const GOLAY_ROWS: [u64; 12] = [
    0x800c75, 0x8018ea, 0x8031d4, 0x8063a8, 0x80c750, 0x818ea0, 0x831d40, 0x863a80, 0x8c7500, 0x98ea00, 0xb1d400,
    0xe3a800,
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    length: usize,
    space: F2Subspace,
}

impl BinaryCode {
    /// The code spanned by `rows`; dependent rows are dropped.
    pub fn new(length: usize, rows: impl IntoIterator<Item = u64>) -> Self {
        BinaryCode { length, space: F2Subspace::span(length, rows) }
    }

    pub fn zero(length: usize) -> Self {
        Self::new(length, [])
    }

    pub fn repetition(length: usize) -> Self {
        Self::new(length, [(1u64 << length) - 1])
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Generator in reduced echelon form.
    pub fn generator(&self) -> F2Matrix {
        self.space.matrix()
    }

    pub fn rows(&self) -> &[u64] {
        self.space.basis()
    }

    pub fn as_subspace(&self) -> &F2Subspace {
        &self.space
    }

    pub fn contains(&self, w: u64) -> bool {
        w >> self.length == 0 && self.space.contains(w)
    }

    /// All codewords in Gray-code order.
    pub fn codewords(&self) -> Result<Vec<u64>> {
        let k = self.dim();
        if k > 24 {
            return Err(Error::DimensionTooLarge { dim: k, max: 24 });
        }
        let mut out = Vec::with_capacity(1 << k);
        gray_walk(self.rows(), |w| out.push(w));
        Ok(out)
    }

    pub fn dual(&self) -> BinaryCode {
        let k = kernel(&self.generator());
        BinaryCode { length: self.length, space: k }
    }

    pub fn is_self_orthogonal(&self) -> bool {
        let r = self.rows();
        r.iter().all(|&a| r.iter().all(|&b| parity(a & b) == 0))
    }

    pub fn is_self_dual(&self) -> bool {
        self.is_self_orthogonal() && 2 * self.dim() == self.length
    }

    /// Every weight divisible by 4. For a self-orthogonal code it suffices
    /// that the generators have weight divisible by 4.
    pub fn is_doubly_even(&self) -> bool {
        self.is_self_orthogonal() && self.rows().iter().all(|r| r.count_ones() % 4 == 0)
    }

    pub fn min_weight(&self) -> Result<Option<u32>> {
        Ok(weight_enumerator(self)?.keys().copied().find(|&w| w > 0))
    }

    pub fn words_of_weight(&self, weight: u32) -> Result<Vec<u64>> {
        let mut v: Vec<u64> = self.codewords()?.into_iter().filter(|w| w.count_ones() == weight).collect();
        v.sort_unstable();
        Ok(v)
    }
}

fn gray_walk(rows: &[u64], mut f: impl FnMut(u64)) {
    let mut w = 0u64;
    f(w);
    for i in 1u64..(1u64 << rows.len()) {
        w ^= rows[i.trailing_zeros() as usize];
        f(w);
    }
}

/// Exact weight distribution over all codewords.
pub fn weight_enumerator(c: &BinaryCode) -> Result<BTreeMap<u32, u64>> {
    if c.dim() > MAX_ENUM_DIM {
        return Err(Error::DimensionTooLarge { dim: c.dim(), max: MAX_ENUM_DIM });
    }
    let mut counts = [0u64; 65];
    gray_walk(c.rows(), |w| counts[w.count_ones() as usize] += 1);
    Ok(counts.iter().enumerate().filter(|(_, &n)| n > 0).map(|(w, &n)| (w as u32, n)).collect())
}

pub fn golay24() -> BinaryCode {
    BinaryCode::new(24, GOLAY_ROWS)
}

pub fn hamming8() -> BinaryCode {
    BinaryCode::new(8, [0b1111_0000, 0b1100_1100, 0b1010_1010, 0b1111_1111])
}

/// First-order Reed–Muller code of length 16: affine functions on F₂⁴,
/// point `p` being coordinate `p`.
pub fn reed_muller_1_4() -> BinaryCode {
    let coord = |i: usize| (0..16).filter(|p| (p >> i) & 1 == 1).fold(0u64, |a, p| a | 1 << p);
    BinaryCode::new(16, [0xffff, coord(0), coord(1), coord(2), coord(3)])
}

/// Codewords `w` of `c` with `|w ∩ S|` even for every `S` in `constraints`.
pub fn subcode_orthogonal(c: &BinaryCode, constraints: &[u64]) -> BinaryCode {
    let rows = c.rows();
    if constraints.is_empty() || rows.is_empty() {
        return c.clone();
    }
    // Column i holds the values of the constraint functionals on generator i.
    let words: Vec<u64> = constraints
        .iter()
        .map(|&s| rows.iter().enumerate().fold(0u64, |a, (i, &g)| a | (parity(g & s) as u64) << i))
        .collect();
    let a = F2Matrix::from_words(rows.len(), words).expect("code dimension fits a word");
    let gen = c.generator();
    BinaryCode::new(c.length, kernel(&a).basis().iter().map(|&x| gen.combine_rows(x)))
}

/// Six disjoint tetrads covering Ω₂₄. Tetrads `2s` and `2s+1` (0-based)
/// make up the octad `octad(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sextet {
    pub tetrads: [u64; 6],
}

impl Sextet {
    pub fn octad(&self, s: usize) -> u64 {
        self.tetrads[2 * s] | self.tetrads[2 * s + 1]
    }

    /// Partition check plus all fifteen tetrad unions being octads of `code`.
    pub fn is_valid(&self, code: &BinaryCode) -> bool {
        let all = self.tetrads.iter().fold(0u64, |a, &t| a | t);
        let sizes = self.tetrads.iter().all(|t| t.count_ones() == 4);
        if !sizes || all != (1 << code.length()) - 1 || all.count_ones() != 24 {
            return false;
        }
        (0..6).all(|l| (l + 1..6).all(|k| code.contains(self.tetrads[l] | self.tetrads[k])))
    }

    pub fn elements(&self, l: usize) -> Vec<usize> {
        bits(self.tetrads[l])
    }

    pub fn refines(&self, octads: &[u64; 3]) -> bool {
        self.tetrads.iter().all(|&t| octads.iter().any(|&o| t & !o == 0))
    }

    /// Orders tetrads so that each of the given octads holds a consecutive
    /// pair, the lower minimum element first.
    fn aligned_to(&self, octads: &[u64; 3]) -> Sextet {
        let mut out = [0u64; 6];
        for (s, &o) in octads.iter().enumerate() {
            let mut pair: Vec<u64> = self.tetrads.iter().copied().filter(|&t| t & !o == 0).collect();
            pair.sort_by_key(|t| t.trailing_zeros());
            out[2 * s] = pair[0];
            out[2 * s + 1] = pair[1];
        }
        Sextet { tetrads: out }
    }

    fn lex_key(&self) -> Vec<Vec<usize>> {
        (0..6).map(|l| self.elements(l)).collect()
    }
}

pub fn bits(w: u64) -> Vec<usize> {
    (0..64).filter(|j| (w >> j) & 1 == 1).collect()
}

/// The sextet containing the tetrad `t`, with `t` first and the rest in
/// order of least element. Requires the Golay code.
pub fn sextet_of(code: &BinaryCode, t: u64) -> Result<Sextet> {
    if t.count_ones() != 4 {
        return Err(Error::Precondition("a tetrad has four points".into()));
    }
    let octads = code.words_of_weight(8)?;
    let mut others: Vec<u64> = octads.iter().filter(|&&o| o & t == t).map(|&o| o & !t).collect();
    others.sort_by_key(|x| x.trailing_zeros());
    if others.len() != 5 {
        return Err(Error::Verification(format!("tetrad lies in {} octads, expected 5", others.len())));
    }
    let mut tetrads = [t; 6];
    tetrads[1..].copy_from_slice(&others);
    let s = Sextet { tetrads };
    if !s.is_valid(code) {
        return Err(Error::Verification("tetrads do not form a sextet".into()));
    }
    Ok(s)
}

/// The F₂-span of `P^j_{2s}` (j = 1,2,3) and `O_s` inside 𝒫(O_s).
pub fn refinement_code(p: &[Sextet; 3], s: usize) -> BinaryCode {
    let o = p[0].octad(s);
    BinaryCode::new(24, [o, p[0].tetrads[2 * s + 1], p[1].tetrads[2 * s + 1], p[2].tetrads[2 * s + 1]])
}

fn has_hamming_distribution(c: &BinaryCode) -> bool {
    c.dim() == 4 && weight_enumerator(c).is_ok_and(|w| w == BTreeMap::from([(0, 1), (4, 14), (8, 1)]))
}

/// P¹ is the sextet of the four lowest points of the first Golay generator
/// row, ordered as in [`sextet_of`]. P² and P³ are the lexicographically
/// first pair of further sextets refining the trio of octads of P¹ such that
/// every [`refinement_code`] is an extended Hamming code.
pub fn standard_sextet_and_refinements() -> Result<(Sextet, Sextet, Sextet)> {
    let code = golay24();
    let first = GOLAY_ROWS[0];
    let t = bits(first).into_iter().take(4).fold(0u64, |a, j| a | 1 << j);
    let mut p1 = sextet_of(&code, t)?;
    // The rest of the generating octad comes second; the remaining tetrads
    // stay in order of least element.
    let second = first & !t;
    let mut rest: Vec<u64> = p1.tetrads[1..].iter().copied().filter(|&x| x != second).collect();
    rest.insert(0, second);
    p1.tetrads[1..].copy_from_slice(&rest);
    let trio = [p1.octad(0), p1.octad(1), p1.octad(2)];

    // Each refining sextet has exactly one tetrad through the least point of O_0.
    let o0 = bits(trio[0]);
    let (anchor, rest) = (o0[0], &o0[1..]);
    let mut cands: Vec<Sextet> = Vec::new();
    for a in 0..rest.len() {
        for b in a + 1..rest.len() {
            for c in b + 1..rest.len() {
                let t = 1 << anchor | 1 << rest[a] | 1 << rest[b] | 1 << rest[c];
                let s = sextet_of(&code, t)?;
                if s.refines(&trio) {
                    let s = s.aligned_to(&trio);
                    if s != p1 && !cands.contains(&s) {
                        cands.push(s);
                    }
                }
            }
        }
    }
    cands.sort_by_key(|s| s.lex_key());
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            let p = [p1, cands[i], cands[j]];
            if (0..3).all(|s| has_hamming_distribution(&refinement_code(&p, s))) {
                return Ok((p1, cands[i], cands[j]));
            }
        }
    }
    Err(Error::Verification("no pair of refining sextets satisfies the Hamming condition".into()))
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn subcode_dimension_bound(sets in proptest::collection::vec(0u64..(1 << 24), 0..6)) {
            let g = golay24();
            let sub = subcode_orthogonal(&g, &sets);
            prop_assert!(sub.dim() + sets.len() >= g.dim());
            for &w in sub.rows() {
                prop_assert!(g.contains(w));
                for &s in &sets {
                    prop_assert_eq!(parity(w & s), 0);
                }
            }
        }
    }
}
