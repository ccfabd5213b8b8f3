//! One line per acceptance criterion. Expected values are either quoted
//! results or come from oracles written here, independent of the code
//! under test.

use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scext::classify::{amalgam_indices, extension_census, AutImage};
use scext::codes::{golay24, weight_enumerator, GOLAY_ROWS};
use scext::f2core::F2Matrix;
use scext::lattice::cache::binned_theta_cached;
use scext::lattice::enumerate::DEFAULT_CEILING;
use scext::lattice::{barnes_wall16, index_in, sqrt2_e8, RationalLattice};
use scext::leechlab::{conway_member, LeechContext, LAMBDA_INDICES};
use scext::qspace::{
    brute_force_order, dickson, group_order_witt, model_report, orthogonal_order_plus, reflection_generators, totally_singular_count_plus, QuadSpace,
};
use scext::voamod::{
    build_s10, build_sl, ld1, ld2, ld3, leading_term, norm4_reflections, orbit_shadow, rm_frame_generators, LatticeModules, ModuleLabel, OctadModules, Sign,
    DEFAULT_MAX_D,
};

type Check = Result<(), String>;

macro_rules! expect_eq {
    ($a:expr, $b:expr) => {{
        let (a, b) = (&$a, &$b);
        if a != b {
            return Err(format!("{}: got {:?}, expected {:?}", stringify!($a), a, b));
        }
    }};
}

macro_rules! expect {
    ($c:expr) => {
        if !$c {
            return Err(format!("{} does not hold", stringify!($c)));
        }
    };
}

fn ok<T>(r: scext::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ctx() -> &'static LeechContext {
    static C: OnceLock<LeechContext> = OnceLock::new();
    C.get_or_init(|| LeechContext::new().expect("Leech context"))
}

fn octad_modules() -> &'static OctadModules {
    static M: OnceLock<OctadModules> = OnceLock::new();
    M.get_or_init(|| OctadModules::new(ctx(), DEFAULT_MAX_D, DEFAULT_CEILING, None).expect("U modules"))
}

fn modules(e8: bool) -> &'static LatticeModules {
    static E: OnceLock<LatticeModules> = OnceLock::new();
    static B: OnceLock<LatticeModules> = OnceLock::new();
    if e8 {
        E.get_or_init(|| LatticeModules::new(&sqrt2_e8(), DEFAULT_MAX_D, DEFAULT_CEILING, None).expect("√2E8"))
    } else {
        B.get_or_init(|| LatticeModules::new(&barnes_wall16(), DEFAULT_MAX_D, DEFAULT_CEILING, None).expect("Λ16"))
    }
}

fn golay() -> Check {
    // Oracle: all 2^12 sums of the generator rows.
    let mut dist = [0u64; 25];
    for m in 0u32..1 << 12 {
        let w = (0..12).filter(|i| m >> i & 1 == 1).fold(0u64, |a, i| a ^ GOLAY_ROWS[i]);
        dist[w.count_ones() as usize] += 1;
    }
    let oracle: Vec<(u32, u64)> = (0..25).filter(|&k| dist[k] > 0).map(|k| (k as u32, dist[k])).collect();
    expect_eq!(oracle, vec![(0, 1), (8, 759), (12, 2576), (16, 759), (24, 1)]);
    let g = golay24();
    let lib: Vec<(u32, u64)> = ok(weight_enumerator(&g))?.into_iter().collect();
    expect_eq!(lib, oracle);
    let rows = F2Matrix::from_words(24, GOLAY_ROWS.to_vec()).map_err(|e| e.to_string())?;
    expect_eq!(rows.rank(), 12);
    expect!(GOLAY_ROWS.iter().all(|a| GOLAY_ROWS.iter().all(|b| (a & b).count_ones() % 2 == 0)));
    expect!(g.is_self_dual() && g.is_doubly_even());
    Ok(())
}

/// Norm-32 vectors in Conway's coordinates, counted shape by shape.
fn conway_shape_counts() -> Result<(u64, Vec<Vec<i64>>), String> {
    let g = golay24();
    // Shapes: all coordinates share a parity. Even: a twos and b fours with
    // 4a + 16b = 32. Odd: 24 odd entries, 24 + 8·(#3s) + 24·(#5s) = 32.
    let even: Vec<(usize, usize)> = (0..=8).flat_map(|a| (0..=2).map(move |b| (a, b))).filter(|(a, b)| 4 * a + 16 * b == 32).collect();
    expect_eq!(even, vec![(0, 2), (4, 1), (8, 0)]);
    let mut members = Vec::new();
    let push = |members: &mut Vec<Vec<i64>>, x: Vec<i64>| {
        if conway_member(&g, &x) {
            members.push(x);
        }
    };
    let signed = |support: &[usize], values: &[i64], signs: u64| {
        let mut x = vec![0i64; 24];
        for (k, (&p, &v)) in support.iter().zip(values).enumerate() {
            x[p] = if signs >> k & 1 == 1 { -v } else { v };
        }
        x
    };
    // (±4²)
    for i in 0..24 {
        for j in i + 1..24 {
            for s in 0..4 {
                push(&mut members, signed(&[i, j], &[4, 4], s));
            }
        }
    }
    let shape_42 = members.len() as u64;
    // (±4, ±2⁴) and (±2⁸): the twos sit on the residue-2 class, which the
    // predicate needs to be a codeword, so only codeword supports are tried.
    for w in 0u64..1 << 24 {
        match w.count_ones() {
            4 if g.contains(w) => {
                let twos: Vec<usize> = (0..24).filter(|i| w >> i & 1 == 1).collect();
                for p in (0..24).filter(|i| w >> i & 1 == 0) {
                    let mut support = twos.clone();
                    support.push(p);
                    for s in 0..32 {
                        push(&mut members, signed(&support, &[2, 2, 2, 2, 4], s));
                    }
                }
            }
            8 if g.contains(w) => {
                let support: Vec<usize> = (0..24).filter(|i| w >> i & 1 == 1).collect();
                for s in 0..256 {
                    push(&mut members, signed(&support, &[2; 8], s));
                }
            }
            _ => {}
        }
    }
    let shape_even = members.len() as u64;
    // (∓3, ±1²³): the vector is fixed by the position of the 3 and by its
    // residue-1 class, which again must be a codeword.
    for w in 0u64..1 << 24 {
        if !g.contains(w) {
            continue;
        }
        for j in 0..24 {
            let x: Vec<i64> = (0..24)
                .map(|i| {
                    let one = w >> i & 1 == 1;
                    match (i == j, one) {
                        (false, true) => 1,
                        (false, false) => -1,
                        (true, true) => -3,
                        (true, false) => 3,
                    }
                })
                .collect();
            push(&mut members, x);
        }
    }
    let counts = (shape_42, shape_even - shape_42, members.len() as u64 - shape_even);
    expect_eq!(counts, (1104, 759 * 128, 24 * 4096));
    Ok((counts.0 + counts.1 + counts.2, members))
}

fn leech() -> Check {
    let l = &ctx().leech;
    expect_eq!(l.det().to_string(), "1");
    expect!(l.is_even());
    let (total, members) = conway_shape_counts()?;
    expect_eq!(total, 196560);
    // Our frame doubles Conway's coordinates.
    expect!(members.iter().all(|x| l.contains(&x.iter().map(|v| 2 * v).collect::<Vec<_>>())));
    let counts = ok(l.short_vectors(4, DEFAULT_CEILING))?;
    expect_eq!(counts.get(&2).copied().unwrap_or(0), 0);
    expect_eq!(counts.get(&4).copied(), Some(total));
    Ok(())
}

fn chain() -> Check {
    let c = ctx();
    let mut previous: RationalLattice = c.leech.clone();
    for i in LAMBDA_INDICES {
        let r = ok(c.lambda_report(i))?;
        let sub = ok(c.lambda_i(i))?;
        expect_eq!(ok(index_in(&sub, &c.leech))?, 1u128 << (i - 1));
        expect_eq!(r.index, 1u128 << (i - 1));
        expect!(previous.contains_lattice(&sub));
        expect!(r.parity_kernel_agrees && r.dual_description_agrees);
        let p = ok(sub.predicates())?;
        expect!(p.even && p.two_elementary && p.totally_even);
        previous = sub;
    }
    expect_eq!(ok(c.lambda_report(5))?.discriminant, vec![2i64; 8]);
    let g = ok(c.lambda5_dual_generators_check())?;
    expect!(g.generates_dual && g.norms_integral && g.inner_products_half_integral);
    Ok(())
}

fn u_split() -> Check {
    let c = ctx();
    let s = ok(c.u_split(c.octad))?;
    expect_eq!(ok(index_in(&s.u, &c.leech))?, 256);
    expect_eq!(ok(index_in(&c.leech.scaled(2), &s.u))?, 1 << 16);
    let (u1, u2) = ok(c.u_factors())?;
    let f1 = ok(u1.fingerprint(4, DEFAULT_CEILING))?;
    let f2 = ok(u2.fingerprint(4, DEFAULT_CEILING))?;
    expect_eq!((f1.rank, f1.det.as_str(), f1.roots.len(), f1.norm4), (8, "256", 0, 240));
    expect_eq!((f2.rank, f2.det.as_str(), f2.roots.len(), f2.norm4), (16, "256", 0, 4320));
    expect_eq!(f2, ok(barnes_wall16().fingerprint(4, DEFAULT_CEILING))?);
    expect_eq!(f1, ok(sqrt2_e8().fingerprint(4, DEFAULT_CEILING))?);
    Ok(())
}

fn qspace() -> Check {
    let r = ok(model_report(5))?;
    // Oracle: 2^(m-1)(2^m + 1) singular vectors in the plus space.
    expect_eq!(r.singular_nonzero, 16 * 33 - 1);
    expect_eq!(r.reflections, 1024 - 528);
    expect_eq!(r.subspace_counts[5] as u128, 2 * 3 * 5 * 9 * 17);
    expect_eq!(totally_singular_count_plus(5, 5), 4590);
    expect!(r.o_orbits.iter().all(|o| o.len() == 1));
    expect!(r.omega_orbits[..5].iter().all(|o| o.len() == 1));
    expect_eq!(r.omega_orbits[5], vec![2295, 2295]);
    expect_eq!(r.group_order, r.closed_form_order);
    for m in 1..=2 {
        let v = ok(QuadSpace::hyperbolic(m))?;
        expect_eq!(ok(group_order_witt(&v))?.to_string(), ok(brute_force_order(&v))?.to_string());
        expect_eq!(orthogonal_order_plus(m as u32).to_string(), ok(brute_force_order(&v))?.to_string());
    }
    let v = ok(QuadSpace::hyperbolic(5))?;
    let refl = ok(reflection_generators(&v))?;
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);
    let mut word = || {
        let len = rng.gen_range(1..=12);
        (0..len).map(|_| refl[rng.gen_range(0..refl.len())].clone()).reduce(|a, b| a.compose(&b)).expect("len ≥ 1")
    };
    for _ in 0..10_000 {
        let (g, h) = (word(), word());
        expect_eq!(dickson(&g.compose(&h)), (dickson(&g) + dickson(&h)) % 2);
    }
    Ok(())
}

fn labels() -> Check {
    for e8 in [true, false] {
        let m = modules(e8);
        let sl = ok(build_sl(m))?;
        expect_eq!(sl.labels.len(), 1 << (m.m + 2));
        expect_eq!(sl.labels.len(), 1024);
        expect_eq!(sl.singular, 528);
        expect_eq!(sl.qvalues[m.index_of(&ModuleLabel { twisted: false, coset: 0, sign: Sign::Plus })], 0);
        expect_eq!(sl.qtype.to_string(), "plus");
        let isometries = if e8 { ok(norm4_reflections(&m.lattice, DEFAULT_CEILING))? } else { ok(rm_frame_generators())? };
        let shadow = ok(orbit_shadow(m, &sl, &isometries))?;
        expect!(shadow.q_invariant && shadow.refines_shadow);
        expect_eq!(shadow.shadow_sizes, vec![1, 527, 496]);
        if e8 {
            expect_eq!(shadow.model_orbit_sizes, vec![1, 527, 496]);
        }
    }
    Ok(())
}

fn leading_terms() -> Check {
    let lead = |e8: bool, twisted: bool, sign: Sign| -> Result<Option<(u32, BigInt)>, String> {
        Ok(leading_term(&ok(modules(e8).character(&ModuleLabel { twisted, coset: 0, sign }))?))
    };
    // Doubled exponents: 8q, q^(1/2), 16q, 256q^(3/2).
    expect_eq!(lead(true, false, Sign::Minus)?, Some((2, BigInt::from(8))));
    expect_eq!(lead(true, true, Sign::Plus)?, Some((1, BigInt::from(1))));
    expect_eq!(lead(false, false, Sign::Minus)?, Some((2, BigInt::from(16))));
    expect_eq!(lead(false, true, Sign::Minus)?, Some((3, BigInt::from(256))));
    Ok(())
}

fn decomposition() -> Check {
    let c = ctx();
    let max_d = 6;
    let theta = ok(c.leech.theta(max_d, DEFAULT_CEILING))?;
    expect_eq!(theta.coeff(4), &BigInt::from(196560));
    let subs: Vec<RationalLattice> = ok([2, 3, 5].into_iter().map(|i| c.lambda_i(i)).collect())?;
    let refs: Vec<&RationalLattice> = subs.iter().collect();
    let bins = ok(binned_theta_cached(None, &c.leech, &refs, max_d, DEFAULT_CEILING))?;
    for (i, (_, b)) in [2, 3, 5].into_iter().zip(&bins) {
        expect_eq!(b.len(), 1usize << (i - 1));
        let r = ok(ld1(i, &theta, b))?;
        expect!(r.passed);
        expect_eq!(r.max_d, max_d);
    }
    for i in LAMBDA_INDICES {
        let r = ok(ld2(i, &ok(c.lambda_i(i))?, &c.leech, max_d))?;
        expect!(r.passed);
        expect_eq!(r.values["dimension"], "4096");
    }
    for r in ok(ld3(octad_modules(), &theta))? {
        expect!(r.passed);
        expect!(r.max_d >= 4);
    }
    Ok(())
}

fn s10() -> Check {
    let r = ok(build_s10(octad_modules()))?;
    expect_eq!(r.members, 1024);
    expect!(r.distinct && r.factor_q_agree && r.first_factor_bijective && r.second_factor_bijective);
    expect_eq!(r.space.qtype.to_string(), "plus");
    Ok(())
}

fn classification() -> Check {
    let e8 = ok(extension_census("sqrt2e8", &sqrt2_e8(), AutImage::O, 4, DEFAULT_CEILING))?;
    expect_eq!(e8.total, 6);
    expect_eq!(e8.orbit_counts, vec![1; 6]);
    expect!(e8.per_index.iter().all(|x| x.classes.len() == 1 && x.distinct));
    let top = &e8.per_index[4].classes[0].fingerprint;
    expect_eq!((top.det.as_str(), top.norm2, top.roots.clone()), ("1", 240, vec!["E8".to_string()]));
    let bw = ok(extension_census("bw16", &barnes_wall16(), AutImage::Omega, 4, DEFAULT_CEILING))?;
    expect_eq!(bw.total, 7);
    expect_eq!(bw.orbit_counts, vec![1, 1, 1, 1, 1, 2]);
    let mut roots: Vec<Vec<String>> = bw.per_index[4].classes.iter().map(|x| x.fingerprint.roots.clone()).collect();
    roots.sort();
    expect_eq!(roots, vec![vec!["D16".to_string()], vec!["E8".to_string(), "E8".to_string()]]);
    expect!(e8.top_agrees && bw.top_agrees);
    Ok(())
}

fn amalgam() -> Check {
    // Oracle: matrices as n×n bit arrays acting on column vectors.
    fn group(n: usize) -> Vec<Vec<u8>> {
        let apply = |m: &[u8], x: usize| (0..n).fold(0, |a, r| a | (((0..n).map(|c| m[r * n + c] as usize & (x >> c)).sum::<usize>() & 1) << r));
        (0..1usize << (n * n))
            .map(|b| (0..n * n).map(|k| (b >> k & 1) as u8).collect::<Vec<u8>>())
            .filter(|m| {
                let mut img: Vec<usize> = (0..1 << n).map(|x| apply(m, x)).collect();
                img.sort();
                img.dedup();
                img.len() == 1 << n
            })
            .collect()
    }
    let image = |n: usize, m: &[u8], s: &[usize]| -> Vec<usize> {
        let mut v: Vec<usize> = s.iter().map(|&x| (0..n).fold(0, |a, r| a | (((0..n).map(|c| m[r * n + c] as usize & (x >> c)).sum::<usize>() & 1) << r))).collect();
        v.sort();
        v
    };
    let gl2 = group(2);
    let gl3 = group(3);
    expect_eq!((gl2.len(), gl3.len()), (6, 168));
    let (line2, line3, plane3) = (vec![0, 1], vec![0, 1], vec![0, 1, 2, 3]);
    let stab = |g: &[Vec<u8>], n: usize, sets: &[&Vec<usize>]| g.iter().filter(|m| sets.iter().all(|s| image(n, m, s) == **s)).count();
    let oracle =
        [6 / stab(&gl2, 2, &[&line2]), 168 / stab(&gl3, 3, &[&line3]), 168 / stab(&gl3, 3, &[&plane3]), 168 / stab(&gl3, 3, &[&line3, &plane3])];
    expect_eq!(oracle, [3, 7, 7, 21]);
    expect_eq!(amalgam_indices().indices(), oracle);
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("1 golay code", golay),
        ("2 leech lattice", leech),
        ("3 sublattice chain", chain),
        ("4 u-split", u_split),
        ("5 quadratic space", qspace),
        ("6 module labels", labels),
        ("7 leading terms", leading_terms),
        ("8 decompositions", decomposition),
        ("9 s10", s10),
        ("10 classification", classification),
        ("11 amalgam indices", amalgam),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        match f() {
            Ok(()) => println!("PASS  {name}  ({:.1?})", t.elapsed()),
            Err(e) => {
                failed += 1;
                println!("FAIL  {name}: {e}");
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
