//! Even overlattices, the extension census over the dim-10 plus model and
//! stabilizer indices in GL₂(F₂) and GL₃(F₂).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2core::{F2Matrix, F2Subspace};
use crate::lattice::{index_in, LatticeFingerprint, RationalLattice};
use crate::qspace::{discriminant_space, omega_generating_set, orbits, reflection_generating_set, totally_singular_subspaces, QuadSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AutImage {
    O,
    Omega,
}

impl std::fmt::Display for AutImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AutImage::O => "O",
            AutImage::Omega => "Omega",
        })
    }
}

/// One even overlattice per totally singular `j`-subspace of L*/L.
pub fn even_overlattices(l: &RationalLattice, j: usize) -> Result<Vec<(F2Subspace, RationalLattice)>> {
    let p = l.predicates()?;
    if !(p.even && p.two_elementary && p.totally_even) {
        return Err(Error::Precondition("lattice is not 2-elementary totally even".into()));
    }
    let d = discriminant_space(l)?;
    let glue = totally_singular_subspaces(&d.space, j);
    let out: Vec<(F2Subspace, RationalLattice)> = glue
        .into_par_iter()
        .map(|s| {
            let reps: Vec<_> = s.basis().iter().map(|&m| d.group.element_of_mask(m)).collect();
            let n = l.with_vectors(&reps)?;
            if !n.is_even() {
                return Err(Error::Verification("glued lattice is not even".into()));
            }
            if index_in(l, &n)? != 1 << j {
                return Err(Error::Verification("glued lattice has the wrong index".into()));
            }
            Ok((s, n))
        })
        .collect::<Result<_>>()?;
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct FingerprintClass {
    pub fingerprint: LatticeFingerprint,
    pub members: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexClasses {
    pub j: usize,
    pub overlattices: usize,
    /// Constructed lattices are pairwise distinct point sets.
    pub distinct: bool,
    pub classes: Vec<FingerprintClass>,
}

/// Fingerprint classes of the even overlattices of index 2^j.
pub fn overlattice_classes(l: &RationalLattice, j: usize, theta_doubled: u32, ceiling: u64) -> Result<IndexClasses> {
    let over = even_overlattices(l, j)?;
    let mut lattices: Vec<&RationalLattice> = over.iter().map(|(_, n)| n).collect();
    lattices.sort();
    lattices.dedup();
    let distinct = lattices.len() == over.len();
    let prints: Vec<LatticeFingerprint> = over.par_iter().map(|(_, n)| n.fingerprint(theta_doubled, ceiling)).collect::<Result<_>>()?;
    let mut classes: Vec<FingerprintClass> = Vec::new();
    for f in prints {
        match classes.iter_mut().find(|c| c.fingerprint == f) {
            Some(c) => c.members += 1,
            None => classes.push(FingerprintClass { fingerprint: f, members: 1 }),
        }
    }
    classes.sort_by(|a, b| a.fingerprint.roots.cmp(&b.fingerprint.roots));
    Ok(IndexClasses { j, overlattices: over.len(), distinct, classes })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionCensus {
    pub lattice: String,
    pub aut_image: AutImage,
    /// Orbit counts on totally singular d-spaces of the model, d = 0..=5.
    pub orbit_counts: Vec<usize>,
    pub orbit_sizes: Vec<Vec<usize>>,
    pub total: usize,
    pub per_index: Vec<IndexClasses>,
    /// Fingerprint classes at index 2⁴ equal the orbit count at d = 5.
    pub top_agrees: bool,
}

/// Orbit counts per dimension on the dim-10 plus model.
pub fn model_orbit_counts(aut: AutImage) -> Result<Vec<Vec<usize>>> {
    let v = QuadSpace::hyperbolic(5)?;
    let gens = match aut {
        AutImage::O => reflection_generating_set(&v)?,
        AutImage::Omega => omega_generating_set(&v)?,
    };
    (0..=5).map(|d| Ok(orbits(&gens, &totally_singular_subspaces(&v, d))?.sizes())).collect()
}

pub fn extension_census(name: &str, l: &RationalLattice, aut: AutImage, theta_doubled: u32, ceiling: u64) -> Result<ExtensionCensus> {
    let sizes = model_orbit_counts(aut)?;
    let counts: Vec<usize> = sizes.iter().map(Vec::len).collect();
    let per_index = (0..=4).map(|j| overlattice_classes(l, j, theta_doubled, ceiling)).collect::<Result<Vec<_>>>()?;
    let top_agrees = per_index[4].classes.len() == counts[5];
    Ok(ExtensionCensus {
        lattice: name.to_string(),
        aut_image: aut,
        total: counts.iter().sum(),
        orbit_counts: counts,
        orbit_sizes: sizes,
        per_index,
        top_agrees,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AmalgamReport {
    pub gl2_order: usize,
    pub gl3_order: usize,
    pub gl2_line: usize,
    pub gl3_line: usize,
    pub gl3_plane: usize,
    pub gl3_flag: usize,
}

impl AmalgamReport {
    pub fn indices(&self) -> [usize; 4] {
        [self.gl2_line, self.gl3_line, self.gl3_plane, self.gl3_flag]
    }
}

fn general_linear(n: usize) -> Vec<F2Matrix> {
    (0..1u64 << (n * n))
        .map(|bits| F2Matrix::from_words(n, (0..n).map(|i| (bits >> (i * n)) & ((1 << n) - 1)).collect()).expect("n ≤ 3"))
        .filter(|m| m.rank() == n)
        .collect()
}

pub fn amalgam_indices() -> AmalgamReport {
    let index = |group: &[F2Matrix], fixes: &dyn Fn(&F2Matrix) -> bool| group.len() / group.iter().filter(|g| fixes(g)).count();
    let fixes = |g: &F2Matrix, s: &F2Subspace| &s.image(g) == s;
    let gl2 = general_linear(2);
    let gl3 = general_linear(3);
    let line2 = F2Subspace::span(2, [1]);
    let line3 = F2Subspace::span(3, [1]);
    let plane3 = F2Subspace::span(3, [1, 2]);
    AmalgamReport {
        gl2_order: gl2.len(),
        gl3_order: gl3.len(),
        gl2_line: index(&gl2, &|g| fixes(g, &line2)),
        gl3_line: index(&gl3, &|g| fixes(g, &line3)),
        gl3_plane: index(&gl3, &|g| fixes(g, &plane3)),
        gl3_flag: index(&gl3, &|g| fixes(g, &line3) && fixes(g, &plane3)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate::DEFAULT_CEILING;
    use crate::lattice::{barnes_wall16, sqrt2_e8};

    #[test]
    fn trivial_glue() {
        let l = sqrt2_e8();
        let o = even_overlattices(&l, 0).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].1, l);
    }

    #[test]
    fn e8_top_class() {
        let c = overlattice_classes(&sqrt2_e8(), 4, 4, DEFAULT_CEILING).unwrap();
        assert_eq!(c.overlattices, 270);
        assert!(c.distinct);
        assert_eq!(c.classes.len(), 1);
        let f = &c.classes[0].fingerprint;
        assert_eq!((f.det.as_str(), f.norm2), ("1", 240));
        assert_eq!(f.roots, vec!["E8".to_string()]);
    }

    #[test]
    fn bw_top_classes() {
        let c = overlattice_classes(&barnes_wall16(), 4, 4, DEFAULT_CEILING).unwrap();
        assert_eq!(c.overlattices, 270);
        assert!(c.distinct);
        let roots: Vec<Vec<String>> = c.classes.iter().map(|x| x.fingerprint.roots.clone()).collect();
        assert_eq!(roots, vec![vec!["D16".to_string()], vec!["E8".to_string(), "E8".to_string()]]);
        assert!(c.classes.iter().all(|x| x.fingerprint.det == "1" && x.fingerprint.norm2 == 480));
    }

    #[test]
    fn model_orbits() {
        let o: Vec<usize> = model_orbit_counts(AutImage::O).unwrap().iter().map(Vec::len).collect();
        assert_eq!(o, vec![1; 6]);
        let w: Vec<usize> = model_orbit_counts(AutImage::Omega).unwrap().iter().map(Vec::len).collect();
        assert_eq!(w, vec![1, 1, 1, 1, 1, 2]);
    }

    #[test]
    fn amalgam() {
        let r = amalgam_indices();
        assert_eq!((r.gl2_order, r.gl3_order), (6, 168));
        assert_eq!(r.indices(), [3, 7, 7, 21]);
    }
}
