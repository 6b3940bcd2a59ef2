//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Time bounds are measured on the optimized test profile.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tannaka_forge::algebra::AlgebraSpec;
use tannaka_forge::coalgebra::{coalgebra_check, comodule_check, Coalgebra};
use tannaka_forge::mf::{self, FilteredFModule};
use tannaka_forge::module::DEFAULT_BUDGET;
use tannaka_forge::suite::{self, MF1_FAMILY};
use tannaka_forge::tannaka::{self, recognition, DiagramCategory, PairVerdict, Verdict};
use tannaka_forge::{Matrix, Result, Ring};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn within(t: Instant, bound: Duration) -> bool {
    t.elapsed() < bound
}

/// Coassociativity and both counit laws, rechecked from the raw data.
fn c1_coend_axioms() -> Result<Outcome> {
    let t = Instant::now();
    let mut n = 0;
    for s in suite::builtin_diagrams()? {
        let cr = tannaka::coend(&s.diagram)?;
        let c = &cr.coalgebra;
        if let Err(e) = coalgebra_check(c.bimodule().clone(), c.comult().clone(), c.counit().clone()) {
            return Ok(outcome(false, format!("{}: {e}", s.name)));
        }
        n += 1;
    }
    let ok = n >= 12 && within(t, Duration::from_secs(5));
    Ok(outcome(ok, format!("{n} diagrams in {:?} (bound 5s)", t.elapsed())))
}

fn c2_comatrix() -> Result<Outcome> {
    let mut worst = Duration::ZERO;
    for p in [2, 3] {
        let alg = suite::alg_for(p, 1, 1);
        for r in 1..=3 {
            let t = Instant::now();
            let rank = tannaka::coend(&suite::comatrix_diagram(&alg, r))?.rank();
            let c = Arc::new(Coalgebra::comatrix(&alg, r));
            let cu = tannaka::counit_map(&c, &[suite::standard_comodule(&c, r)?])?;
            worst = worst.max(t.elapsed());
            if rank != r * r || cu.coend.rank() != r * r || !cu.iso || !cu.coalgebra_morphism {
                return Ok(outcome(false, format!("p={p} r={r}: rank {rank}, iso {}", cu.iso)));
            }
        }
    }
    Ok(outcome(worst < Duration::from_secs(1), format!("p in {{2,3}}, r in 1..=3; slowest {worst:?} (bound 1s)")))
}

fn c3_grouplike() -> Result<Outcome> {
    let alg = suite::alg_for(2, 1, 1);
    for g in 1..=3 {
        let c = Arc::new(Coalgebra::grouplike(&alg, g));
        let lines = (0..g).map(|i| suite::grouplike_line(&c, i)).collect::<Result<Vec<_>>>()?;
        let cu = tannaka::counit_map(&c, &lines)?;
        if !cu.iso {
            return Ok(outcome(false, format!("g={g}: ν not an isomorphism")));
        }
    }
    Ok(outcome(true, "g in 1..=3 over F_2"))
}

fn c4_generator_robustness() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut total, mut open) = (0, 0);
    for (p, n, f) in [(2, 1, 1), (2, 1, 2), (2, 2, 1)] {
        let alg = suite::alg_for(p, n, f);
        for _ in 0..20 {
            let d = suite::random_diagram(&mut rng, &alg);
            open += !d.is_closed() as u32;
            total += 1;
            if !suite::generator_robust(&d)? {
                return Ok(outcome(false, format!("diagram {total} over {}", alg.b())));
            }
        }
    }
    Ok(outcome(total >= 50, format!("{total} diagrams, {open} not closed under composition")))
}

fn lift_ok(d: &DiagramCategory) -> Result<bool> {
    let cr = tannaka::coend(d)?;
    let lifted = tannaka::lift_coaction(d, &cr)?;
    for m in &lifted {
        if comodule_check(m.coalgebra(), m.module().clone(), m.rho().clone()).is_err() {
            return Ok(false);
        }
    }
    Ok(tannaka::check_morphisms_are_comodule_maps(d, &lifted).is_none())
}

fn c5_unit_lift() -> Result<Outcome> {
    let suite = suite::builtin_diagrams()?;
    for s in &suite {
        if !lift_ok(&s.diagram)? {
            return Ok(outcome(false, s.name.clone()));
        }
    }
    Ok(outcome(true, format!("{} diagrams", suite.len())))
}

fn c6_fully_faithful() -> Result<Outcome> {
    let t = Instant::now();
    let w = Ring::new(2, 1, 1)?;
    let d = mf::mf_to_diagram(&suite::mf_family(&w, &MF1_FAMILY)?)?;
    let cr = tannaka::coend(&d)?;
    let lifted = tannaka::lift_coaction(&d, &cr)?;
    let pairs = tannaka::unit_fully_faithful_check(&d, &lifted)?;
    let equal = pairs.iter().filter(|p| p.verdict == PairVerdict::Equal).count();
    let flat = tannaka::flatness_check(&cr.coalgebra);
    let probe = tannaka::essential_surjectivity_probe(&cr, &lifted, &[1], DEFAULT_BUDGET)?;
    let ok = pairs.len() == 9
        && equal == 9
        && flat
        && probe.exhaustive
        && probe.outside.is_empty()
        && within(t, Duration::from_secs(10));
    Ok(outcome(
        ok,
        format!(
            "{equal}/9 pairs equal, flat {flat}, rank-1 probe {} comodules {} outside; {:?} (bound 10s)",
            probe.comodules,
            probe.outside.len(),
            t.elapsed()
        ),
    ))
}

fn c7_smith() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for r in [Ring::integers_mod(2, 3)?, Ring::new(2, 1, 2)?, Ring::new(2, 2, 2)?] {
        for _ in 0..1000 {
            let (rows, cols) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
            let a = suite::random_matrix(&mut rng, &r, rows, cols);
            if let Some(why) = suite::smith_violation(&a) {
                return Ok(outcome(false, format!("{r}: {why} on {}", a.format())));
            }
        }
        for _ in 0..150 {
            let (rows, cols) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let a = suite::random_matrix(&mut rng, &r, rows, cols);
            if let Some(why) = suite::kernel_cokernel_violation(&a) {
                return Ok(outcome(false, format!("{r}: {why} on {}", a.format())));
            }
        }
        checked += 1;
    }
    Ok(outcome(checked == 3, "1000 Smith forms and 150 kernel/cokernel oracles per ring (Z/8, F_4, GR(4,2))"))
}

fn c8_frobenius() -> Result<Outcome> {
    let bad: u64 = [Ring::new(2, 2, 2)?, Ring::new(2, 1, 2)?].iter().map(suite::frobenius_violations).sum();
    Ok(outcome(bad == 0, format!("{bad} violations over GR(4,2) and F_4")))
}

/// Random candidates `M = ⊕ W/p^e`, `Fil^0 = M`, `Fil^1` a random
/// submodule, random `φ^0, φ^1`; only those `mf_make` accepts are kept.
fn random_candidates(rng: &mut ChaCha8Rng, w: &Ring, tries: usize) -> Vec<FilteredFModule> {
    let mut out = Vec::new();
    for _ in 0..tries {
        let len = rng.gen_range(1..=2);
        let mut exps: Vec<u32> = (0..len).map(|_| rng.gen_range(1..=w.n())).collect();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        let gens = rng.gen_range(1..=2);
        let fil = [
            Matrix::identity(w, len),
            suite::random_matrix(rng, w, len, gens).reduce_rows(&exps),
        ];
        let phi = [suite::random_matrix(rng, w, len, len), suite::random_matrix(rng, w, len, gens)];
        if let Ok(x) = mf::mf_make(w, &exps, 0, &fil, &phi, false) {
            out.push(x);
        }
    }
    out
}

fn c9_mf_invariants() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut objects, mut fl, mut oracles) = (0, 0, 0);
    for (p, n, f) in [(2, 1, 1), (2, 1, 2), (2, 2, 1), (3, 1, 1)] {
        let w = Ring::new(p, n, f)?;
        let family = suite::mf_family(&w, &[&[0], &[1], &[0, 1], &[0, 0], &[1, 1]])?;
        let mut all: Vec<FilteredFModule> = family.iter().map(|(_, x)| x.clone()).collect();
        all.extend(random_candidates(&mut rng, &w, 400));
        for x in &all {
            let mb = mf::mbar(x)?;
            if mb.mbar.length() != x.module().length() {
                return Ok(outcome(false, format!("len(M̄) != len(M) over {w}")));
            }
            let (surj, inj) = mf::phibar_status(x)?;
            if surj != (surj && inj) || surj != mf::is_mf_fl(x) {
                return Ok(outcome(false, format!("φ̄ surjective {surj} but injective {inj} over {w}")));
            }
            fl += surj as u32;
            objects += 1;
        }
        for x in all.iter().take(12) {
            for y in all.iter().take(12) {
                if let Some(o) = suite::mf_hom_oracle(x, y, 4096)? {
                    if o.morphisms != o.solver {
                        return Ok(outcome(false, format!("hom over {w}: solver {} vs {}", o.solver, o.morphisms)));
                    }
                    oracles += 1;
                }
            }
        }
    }
    Ok(outcome(
        objects > 100 && fl > 0 && fl < objects && oracles > 100,
        format!("{objects} objects ({fl} in MF_fl), {oracles} hom spaces matched by enumeration"),
    ))
}

fn c10_recognition() -> Result<Outcome> {
    let budget = DEFAULT_BUDGET;
    let alg = suite::alg_for(2, 1, 1);
    let b = alg.b().clone();

    // A -> B with [1] spans an isomorphism on fibers but no inverse is kept.
    let mut one_way = DiagramCategory::new(&alg);
    one_way.add_object("A", 1)?;
    one_way.add_object("B", 1)?;
    one_way.add_hom(0, 1, Matrix::from_ints(&b, &[&[1]]))?;
    let one_way = one_way.with_identities();

    // Two rank-1 objects with no object mapping onto both.
    let mut no_cone = DiagramCategory::new(&alg);
    no_cone.add_object("A", 1)?;
    no_cone.add_object("B", 1)?;
    let no_cone = no_cone.with_identities();

    let refuted = |d: &DiagramCategory, v: Verdict| matches!(&v, Verdict::Refuted(w) if w.revalidate(d, budget));
    let neg_i = refuted(&one_way, recognition::check_reflects_isos(&one_way, budget));
    let neg_ii = refuted(&no_cone, recognition::check_cofiltered(&no_cone, budget));

    let mut pos = true;
    for (p, n, f) in [(2, 1, 1), (2, 2, 1), (2, 1, 2), (2, 2, 2)] {
        let d = suite::full_endomorphism_diagram(&AlgebraSpec::over_prime_ring(&Ring::new(p, n, f)?)?);
        pos &= recognition::check_reflects_isos(&d, budget) == Verdict::Verified;
        pos &= recognition::check_cofiltered(&d, budget) == Verdict::Verified;
    }
    Ok(outcome(
        neg_i && neg_ii && pos,
        format!(
            "negatives refuted and revalidated: i) {neg_i} ii) {neg_ii}; trivial diagrams i), ii) verified: {pos}"
        ),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome>); 10] = [
        ("coend axioms on the built-in suite", c1_coend_axioms),
        ("comatrix reconstruction", c2_comatrix),
        ("grouplike reconstruction", c3_grouplike),
        ("generator robustness", c4_generator_robustness),
        ("unit lift", c5_unit_lift),
        ("fully faithful surrogate for MF^1 over F_2", c6_fully_faithful),
        ("Smith form and kernel/cokernel oracles", c7_smith),
        ("Frobenius", c8_frobenius),
        ("filtered module invariants", c9_mf_invariants),
        ("recognition checkers", c10_recognition),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        failed += !o.ok as u32;
        let tag = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag}  {name}: {} [{:.2?}]", i + 1, o.detail, t.elapsed());
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed as usize, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
