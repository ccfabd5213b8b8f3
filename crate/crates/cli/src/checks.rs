//! The check suites. Every check returns its computed values and the values
//! it expects in the same JSON shape; it passes iff the two are equal.

use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use scext::classify::{amalgam_indices, extension_census, AutImage, ExtensionCensus};
use scext::codes::{golay24, weight_enumerator};
use scext::lattice::cache::{binned_theta_cached, theta_cached, ThetaCache};
use scext::lattice::{barnes_wall16, index_in, sqrt2_e8, RationalLattice};
use scext::leechlab::{LeechContext, LAMBDA_INDICES};
use scext::qspace::{dickson, model_report, reflection_generators, OrthMap, QuadSpace};
use scext::voamod::{
    build_s10, build_sl, ld1, ld2, ld3, leading_term, norm4_reflections, orbit_shadow, rm_frame_generators, LatticeModules, ModuleLabel, OctadModules, Sign,
};
use scext::{Error, Result};

use crate::config::{LatticeSel, RunConfig, Suite};
use crate::report::{CheckRecord, Status, VerificationReport};

pub const DICKSON_PAIRS: usize = 10_000;
const DICKSON_SEED: u64 = 0x5eed_d1c5;
/// Fingerprints compare theta series up to q².
const FINGERPRINT_DOUBLED: u32 = 4;

type Outcome = Result<(Value, Value)>;

/// Lazily built data shared between checks of one run.
pub struct Session<'a> {
    cfg: &'a RunConfig,
    cache: Option<ThetaCache>,
    ctx: Option<LeechContext>,
    octad: Option<OctadModules>,
    modules: Vec<(LatticeSel, LatticeModules)>,
}

impl<'a> Session<'a> {
    pub fn new(cfg: &'a RunConfig, cache: Option<ThetaCache>) -> Self {
        Session { cfg, cache, ctx: None, octad: None, modules: Vec::new() }
    }

    fn ceiling(&self) -> u64 {
        self.cfg.max_vectors
    }

    fn ensure_ctx(&mut self) -> Result<()> {
        if self.ctx.is_none() {
            self.ctx = Some(LeechContext::new()?);
        }
        Ok(())
    }

    fn ctx(&mut self) -> Result<&LeechContext> {
        self.ensure_ctx()?;
        Ok(self.ctx.as_ref().expect("built"))
    }

    fn ensure_octad(&mut self) -> Result<()> {
        self.ensure_ctx()?;
        if self.octad.is_none() {
            let ctx = self.ctx.as_ref().expect("built");
            self.octad = Some(OctadModules::new(ctx, self.cfg.max_d(), self.ceiling(), self.cache.as_ref())?);
        }
        Ok(())
    }

    fn modules(&mut self, sel: LatticeSel) -> Result<&LatticeModules> {
        if !self.modules.iter().any(|(s, _)| *s == sel) {
            let m = LatticeModules::new(&lattice_of(sel), self.cfg.max_d(), self.ceiling(), self.cache.as_ref())?;
            self.modules.push((sel, m));
        }
        Ok(&self.modules.iter().find(|(s, _)| *s == sel).expect("built").1)
    }

    fn record(&mut self, report: &mut VerificationReport, id: &str, anchor: &str, f: fn(&mut Session) -> Outcome) {
        let start = Instant::now();
        let result = f(self);
        let runtime_ms = self.cfg.timings.then(|| start.elapsed().as_millis() as u64);
        let (status, computed, expected) = match result {
            Ok((c, e)) => (if c == e { Status::Pass } else { Status::Fail }, c, e),
            Err(e @ Error::ResourceLimit { .. }) => (Status::SkippedResource, json!({ "error": e.to_string() }), Value::Null),
            Err(e) => (Status::Fail, json!({ "error": e.to_string() }), Value::Null),
        };
        report.checks.push(CheckRecord { id: id.into(), anchor: anchor.into(), status, computed, expected, runtime_ms });
    }

    pub fn run_suite(&mut self, suite: Suite, report: &mut VerificationReport) {
        let lat = self.cfg.lattice;
        let rank_small = lat != Some(LatticeSel::Leech);
        let rank_24 = lat.is_none_or(|l| l == LatticeSel::Leech);
        match suite {
            Suite::Golay => self.record(report, "golay", "G24 has weights 0, 8, 12, 16, 24 with 759 octads; self-dual, doubly even", golay),
            Suite::Leechlab => {
                self.record(report, "leech", "Leech lattice: unimodular, even, without roots, 196560 norm-4 vectors", leech);
                self.record(report, "sublattice-chain", "|Λ/Λ(i)| = 2^(i-1); Λ(i) 2-elementary totally even; Λ(5)*/Λ(5) = 2^8", chain);
                self.record(report, "u-split", "|Λ/U| = 2^8 with U = U1 ⊕ U2, U1 ≅ √2E8", u_split);
            }
            Suite::Qspace => self.record(report, "qspace", "plus space of dim 10: singular vectors, reflections, orbits on totally singular spaces", qspace),
            Suite::Voamod => {
                if rank_small {
                    self.record(report, "labels", "2^(m+2) irreducible V_L^+ modules with a plus-type quadratic form", labels);
                    self.record(report, "leading-terms", "lowest terms of V_L^- and the twisted modules for √2E8 and Λ16", leading_terms);
                }
                if rank_24 {
                    self.record(report, "decomposition", "V_Λ^+ and V_Λ^(T,-) over V_Λ(i)^+ and over V_U1^+ ⊗ V_U2^+", decomposition);
                    self.record(report, "s10", "S10 = {W1 ⊗ W2}: q_U1(W1) = q_U2(W2), plus type", s10);
                }
            }
            Suite::Classify => {
                self.record(report, "classification", "simple current extensions of V_L^+: 6 for √2E8, 7 for Λ16", classification);
                self.record(report, "amalgam", "stabilizer indices 3 in GL2(F2) and 7, 7, 21 in GL3(F2)", amalgam);
            }
            Suite::All => {
                for s in Suite::All.expand() {
                    self.run_suite(s, report);
                }
            }
        }
    }
}

pub fn lattice_of(sel: LatticeSel) -> RationalLattice {
    match sel {
        LatticeSel::Sqrt2e8 => sqrt2_e8(),
        LatticeSel::Bw16 => barnes_wall16(),
        LatticeSel::Leech => scext::leechlab::build_leech(),
    }
}

fn lattice_name(sel: LatticeSel) -> &'static str {
    match sel {
        LatticeSel::Sqrt2e8 => "sqrt2e8",
        LatticeSel::Bw16 => "bw16",
        LatticeSel::Leech => "leech",
    }
}

fn small_lattices(cfg: &RunConfig) -> Vec<LatticeSel> {
    [LatticeSel::Sqrt2e8, LatticeSel::Bw16].into_iter().filter(|&l| cfg.wants(l)).collect()
}

fn golay(_: &mut Session) -> Outcome {
    let g = golay24();
    let computed = json!({
        "weights": weight_enumerator(&g)?,
        "octads": g.words_of_weight(8)?.len(),
        "self_dual": g.is_self_dual(),
        "doubly_even": g.is_doubly_even(),
    });
    let expected = json!({
        "weights": {"0": 1, "8": 759, "12": 2576, "16": 759, "24": 1},
        "octads": 759,
        "self_dual": true,
        "doubly_even": true,
    });
    Ok((computed, expected))
}

fn leech(s: &mut Session) -> Outcome {
    let ceiling = s.ceiling();
    let ctx = s.ctx()?;
    let counts = ctx.leech.short_vectors(4, ceiling)?;
    let computed = json!({
        "det": ctx.leech.det().to_string(),
        "even": ctx.leech.is_even(),
        "roots": counts.get(&2).copied().unwrap_or(0),
        "norm4": counts.get(&4).copied().unwrap_or(0),
    });
    Ok((computed, json!({"det": "1", "even": true, "roots": 0, "norm4": 196560})))
}

fn chain(s: &mut Session) -> Outcome {
    let ctx = s.ctx()?;
    let mut computed = Vec::new();
    let mut expected = Vec::new();
    let mut previous = ctx.leech.clone();
    for i in LAMBDA_INDICES {
        let r = ctx.lambda_report(i)?;
        let sub = ctx.lambda_i(i)?;
        let disc_order: i64 = r.discriminant.iter().product();
        computed.push(json!({
            "i": i,
            "index": r.index,
            "nested": previous.contains_lattice(&sub),
            "parity_kernel_agrees": r.parity_kernel_agrees,
            "dual_description_agrees": r.dual_description_agrees,
            "two_elementary_totally_even": r.even && r.two_elementary && r.totally_even,
            "discriminant_order": disc_order,
        }));
        expected.push(json!({
            "i": i,
            "index": 1u128 << (i - 1),
            "nested": true,
            "parity_kernel_agrees": true,
            "dual_description_agrees": true,
            "two_elementary_totally_even": true,
            "discriminant_order": 1i64 << (2 * (i - 1)),
        }));
        previous = sub;
    }
    let five = ctx.lambda_report(5)?;
    let g = ctx.lambda5_dual_generators_check()?;
    let computed = json!({
        "lambda": computed,
        "lambda5_discriminant": five.discriminant,
        "genla5": [g.generates_dual, g.norms_integral, g.inner_products_half_integral],
    });
    let expected = json!({"lambda": expected, "lambda5_discriminant": vec![2; 8], "genla5": [true, true, true]});
    Ok((computed, expected))
}

fn fingerprint_json(l: &RationalLattice, ceiling: u64) -> Result<Value> {
    let f = l.fingerprint(FINGERPRINT_DOUBLED, ceiling)?;
    Ok(json!({"rank": f.rank, "det": f.det, "roots": f.roots, "norm4": f.norm4}))
}

fn u_split(s: &mut Session) -> Outcome {
    let ceiling = s.ceiling();
    let ctx = s.ctx()?;
    let split = ctx.u_split(ctx.octad)?;
    let (u1, u2) = ctx.u_factors()?;
    let bw = barnes_wall16();
    let computed = json!({
        "index_u_in_leech": index_in(&split.u, &ctx.leech)?,
        "index_2leech_in_u": index_in(&ctx.leech.scaled(2), &split.u)?,
        "u1": fingerprint_json(&u1, ceiling)?,
        "u2": fingerprint_json(&u2, ceiling)?,
        "u2_matches_barnes_wall": u2.fingerprint(FINGERPRINT_DOUBLED, ceiling)? == bw.fingerprint(FINGERPRINT_DOUBLED, ceiling)?,
    });
    let expected = json!({
        "index_u_in_leech": 256,
        "index_2leech_in_u": 65536,
        "u1": {"rank": 8, "det": "256", "roots": [], "norm4": 240},
        "u2": {"rank": 16, "det": "256", "roots": [], "norm4": 4320},
        "u2_matches_barnes_wall": true,
    });
    Ok((computed, expected))
}

/// Random products of reflections; counts pairs where the Dickson
/// invariant fails to be additive.
fn dickson_failures(v: &QuadSpace, pairs: usize) -> Result<usize> {
    let refl = reflection_generators(v)?;
    let mut rng = ChaCha8Rng::seed_from_u64(DICKSON_SEED);
    let word = |rng: &mut ChaCha8Rng| -> OrthMap {
        let len = rng.gen_range(1..=12);
        let mut g = refl[rng.gen_range(0..refl.len())].clone();
        for _ in 1..len {
            g = g.compose(&refl[rng.gen_range(0..refl.len())]);
        }
        g
    };
    let mut failures = 0;
    for _ in 0..pairs {
        let g = word(&mut rng);
        let h = word(&mut rng);
        if dickson(&g.compose(&h)) != (dickson(&g) + dickson(&h)) % 2 {
            failures += 1;
        }
    }
    Ok(failures)
}

fn qspace(_: &mut Session) -> Outcome {
    let r = model_report(5)?;
    let v = QuadSpace::hyperbolic(5)?;
    let lens = |o: &[Vec<usize>]| o.iter().map(Vec::len).collect::<Vec<_>>();
    let computed = json!({
        "type": r.qtype.to_string(),
        "singular_nonzero": r.singular_nonzero,
        "reflections": r.reflections,
        "totally_singular_5": r.subspace_counts[5],
        "o_orbit_counts": lens(&r.o_orbits),
        "omega_orbit_counts": lens(&r.omega_orbits),
        "omega_orbits_5": r.omega_orbits[5],
        "dickson_pairs": DICKSON_PAIRS,
        "dickson_failures": dickson_failures(&v, DICKSON_PAIRS)?,
        "group_order": r.group_order,
    });
    let expected = json!({
        "type": "plus",
        "singular_nonzero": 527,
        "reflections": 496,
        "totally_singular_5": 4590,
        "o_orbit_counts": [1, 1, 1, 1, 1, 1],
        "omega_orbit_counts": [1, 1, 1, 1, 1, 2],
        "omega_orbits_5": [2295, 2295],
        "dickson_pairs": DICKSON_PAIRS,
        "dickson_failures": 0,
        "group_order": r.closed_form_order,
    });
    Ok((computed, expected))
}

fn labels(s: &mut Session) -> Outcome {
    let ceiling = s.ceiling();
    let mut computed = serde_json::Map::new();
    let mut expected = serde_json::Map::new();
    for sel in small_lattices(s.cfg) {
        let m = s.modules(sel)?;
        let sl = build_sl(m)?;
        let isometries = match sel {
            LatticeSel::Sqrt2e8 => norm4_reflections(&m.lattice, ceiling)?,
            _ => rm_frame_generators()?,
        };
        let shadow = orbit_shadow(m, &sl, &isometries)?;
        computed.insert(
            lattice_name(sel).into(),
            json!({
                "labels": sl.labels.len(),
                "singular": sl.singular,
                "vacuum_singular": sl.qvalues[m.index_of(&ModuleLabel { twisted: false, coset: 0, sign: Sign::Plus })] == 0,
                "type": sl.qtype.to_string(),
                "q_invariant": shadow.q_invariant,
                "orbits_refine_shadow": shadow.refines_shadow,
                "shadow_sizes": shadow.shadow_sizes,
                "model_orbit_sizes": shadow.model_orbit_sizes,
            }),
        );
        expected.insert(
            lattice_name(sel).into(),
            json!({
                "labels": 1024,
                "singular": 528,
                "vacuum_singular": true,
                "type": "plus",
                "q_invariant": true,
                "orbits_refine_shadow": true,
                "shadow_sizes": [1, 527, 496],
                "model_orbit_sizes": [1, 527, 496],
            }),
        );
    }
    Ok((Value::Object(computed), Value::Object(expected)))
}

/// `c q^(d/2)` as text, with half-integral exponents written as fractions.
fn term(t: Option<(u32, BigInt)>) -> Value {
    match t {
        None => Value::Null,
        Some((d, c)) if d % 2 == 0 => format!("{c}q^{}", d / 2).into(),
        Some((d, c)) => format!("{c}q^{d}/2").into(),
    }
}

fn leading_terms(s: &mut Session) -> Outcome {
    let mut computed = serde_json::Map::new();
    let mut expected = serde_json::Map::new();
    for sel in small_lattices(s.cfg) {
        let m = s.modules(sel)?;
        let ch = |twisted, sign| m.character(&ModuleLabel { twisted, coset: 0, sign }).map(|c| term(leading_term(&c)));
        let (name, exp) = match sel {
            LatticeSel::Sqrt2e8 => ("sqrt2e8", json!({"minus": "8q^1", "twisted_plus": "1q^1/2"})),
            _ => ("bw16", json!({"minus": "16q^1", "twisted_minus": "256q^3/2"})),
        };
        let got = match sel {
            LatticeSel::Sqrt2e8 => json!({"minus": ch(false, Sign::Minus)?, "twisted_plus": ch(true, Sign::Plus)?}),
            _ => json!({"minus": ch(false, Sign::Minus)?, "twisted_minus": ch(true, Sign::Minus)?}),
        };
        computed.insert(name.into(), got);
        expected.insert(name.into(), exp);
    }
    Ok((Value::Object(computed), Value::Object(expected)))
}

fn decomposition(s: &mut Session) -> Outcome {
    let ceiling = s.ceiling();
    let max_d = s.cfg.max_d_24();
    s.ensure_octad()?;
    let ctx = s.ctx.as_ref().expect("built");
    let om = s.octad.as_ref().expect("built");
    let cache = s.cache.as_ref();
    let zero = vec![0; ctx.leech.ambient_dim()];
    let theta = theta_cached(cache, &ctx.leech, &zero, max_d, ceiling)?;
    let subs: Vec<RationalLattice> = [2, 3, 5].into_iter().map(|i| ctx.lambda_i(i)).collect::<Result<_>>()?;
    let refs: Vec<&RationalLattice> = subs.iter().collect();
    let bins = binned_theta_cached(cache, &ctx.leech, &refs, max_d, ceiling)?;
    let mut reports = Vec::new();
    for (i, (_, b)) in [2, 3, 5].into_iter().zip(&bins) {
        reports.push(ld1(i, &theta, b)?);
    }
    for i in LAMBDA_INDICES {
        reports.push(ld2(i, &ctx.lambda_i(i)?, &ctx.leech, max_d)?);
    }
    reports.extend(ld3(om, &theta)?);
    let computed: Vec<Value> = reports.iter().map(|r| json!({"which": r.which, "passed": r.passed, "mismatch": r.mismatch})).collect();
    let expected: Vec<Value> = reports.iter().map(|r| json!({"which": r.which, "passed": true, "mismatch": null})).collect();
    let orders: Vec<u32> = reports.iter().map(|r| r.max_d).collect();
    let dims: Vec<&String> = reports.iter().filter_map(|r| r.values.get("dimension")).collect();
    let computed = json!({"identities": computed, "doubled_orders": orders, "twisted_dimensions": dims});
    let expected = json!({
        "identities": expected,
        "doubled_orders": orders,
        "twisted_dimensions": vec!["4096"; dims.len()],
    });
    Ok((computed, expected))
}

fn s10(s: &mut Session) -> Outcome {
    s.ensure_octad()?;
    let r = build_s10(s.octad.as_ref().expect("built"))?;
    let computed = json!({
        "members": r.members,
        "distinct": r.distinct,
        "factor_q_agree": r.factor_q_agree,
        "factors_bijective": [r.first_factor_bijective, r.second_factor_bijective],
        "singular": r.space.singular,
        "type": r.space.qtype.to_string(),
    });
    let expected = json!({
        "members": 1024,
        "distinct": true,
        "factor_q_agree": true,
        "factors_bijective": [true, true],
        "singular": 528,
        "type": "plus",
    });
    Ok((computed, expected))
}

fn census_json(c: &ExtensionCensus) -> Value {
    let classes: Vec<usize> = c.per_index.iter().map(|x| x.classes.len()).collect();
    let mut top: Vec<Value> = c.per_index[4]
        .classes
        .iter()
        .map(|x| json!({"det": x.fingerprint.det, "roots": x.fingerprint.roots, "norm2": x.fingerprint.norm2}))
        .collect();
    top.sort_by_key(|v| v.to_string());
    json!({
        "aut_image": c.aut_image.to_string(),
        "orbit_counts": c.orbit_counts,
        "total": c.total,
        "classes_per_index": classes,
        "top_classes": top,
        "top_agrees": c.top_agrees,
        "overlattices_distinct": c.per_index.iter().all(|x| x.distinct),
    })
}

fn classification(s: &mut Session) -> Outcome {
    let ceiling = s.ceiling();
    let mut computed = serde_json::Map::new();
    let mut expected = serde_json::Map::new();
    for sel in small_lattices(s.cfg) {
        let (aut, exp) = match sel {
            LatticeSel::Sqrt2e8 => (
                AutImage::O,
                json!({
                    "aut_image": "O",
                    "orbit_counts": [1, 1, 1, 1, 1, 1],
                    "total": 6,
                    "classes_per_index": [1, 1, 1, 1, 1],
                    "top_classes": [{"det": "1", "roots": ["E8"], "norm2": 240}],
                    "top_agrees": true,
                    "overlattices_distinct": true,
                }),
            ),
            _ => (
                AutImage::Omega,
                json!({
                    "aut_image": "Omega",
                    "orbit_counts": [1, 1, 1, 1, 1, 2],
                    "total": 7,
                    "classes_per_index": [1, 1, 1, 1, 2],
                    "top_classes": [{"det": "1", "roots": ["D16"], "norm2": 480}, {"det": "1", "roots": ["E8", "E8"], "norm2": 480}],
                    "top_agrees": true,
                    "overlattices_distinct": true,
                }),
            ),
        };
        let c = census_json(&extension_census(lattice_name(sel), &lattice_of(sel), aut, FINGERPRINT_DOUBLED, ceiling)?);
        computed.insert(lattice_name(sel).into(), c);
        expected.insert(lattice_name(sel).into(), exp);
    }
    Ok((Value::Object(computed), Value::Object(expected)))
}

fn amalgam(_: &mut Session) -> Outcome {
    let r = amalgam_indices();
    Ok((json!({"orders": [r.gl2_order, r.gl3_order], "indices": r.indices()}), json!({"orders": [6, 168], "indices": [3, 7, 7, 21]})))
}
