//! Pipelines behind the command-line tool. Each returns a [`Report`];
//! parse errors and budget exhaustion outside a check are returned as
//! errors and mapped to exit codes by the binary.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::AlgebraSpec;
use crate::coalgebra::{Coalgebra, Comodule};
use crate::error::{Error, Result};
use crate::mf::{self, ColimitVerdict, FilteredFModule};
use crate::report::{Report, Status};
use crate::ring::Ring;
use crate::suite;
use crate::tannaka::{self, recognition, DiagramCategory, PairVerdict, Verdict};
use crate::text::{self, Document};
use crate::Matrix;

/// Exit code for a command error.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 3,
        Error::BudgetExceeded { .. } => 2,
        _ => 1,
    }
}

fn verdict_status(v: &Verdict) -> Status {
    match v {
        Verdict::Verified => Status::Pass,
        Verdict::Refuted(_) => Status::Fail,
        Verdict::Inconclusive(_) => Status::Inconclusive,
    }
}

fn err_detail(e: &Error) -> Value {
    json!(e.to_string())
}

/// The diagram of a document: explicit objects and homs, or the `mf`
/// blocks exported through the morphism solver.
fn document_diagram(doc: &Document, report: &mut Report) -> Result<Option<DiagramCategory>> {
    if let Some(d) = &doc.diagram {
        return Ok(Some(d.clone()));
    }
    if doc.mf.is_empty() {
        return Err(Error::Parse { line: 1, col: 1, msg: "no objects or mf blocks".into() });
    }
    let mut objects = Vec::new();
    for decl in &doc.mf {
        match decl.build(false) {
            Ok(x) => {
                report.check(format!("mf.{}.proj", decl.name), Status::from_bool(mf::is_mf_proj(&x)), Value::Null);
                objects.push((decl.name.clone(), x));
            }
            Err(e) => report.check(format!("mf.{}.valid", decl.name), Status::Fail, err_detail(&e)),
        }
    }
    if report.exit_code() != 0 {
        return Ok(None);
    }
    Ok(Some(mf::mf_to_diagram(&objects)?))
}

/// Coend, lifted coactions and the unit comparison for one diagram,
/// recorded under `prefix`.
pub fn coend_checks(report: &mut Report, prefix: &str, d: &DiagramCategory) -> Option<(tannaka::CoendResult, Vec<Comodule>)> {
    let cr = match report.timed("coend", || tannaka::coend(d)) {
        Ok(cr) => cr,
        Err(e) => {
            report.check(format!("{prefix}coend.axioms"), Status::Fail, err_detail(&e));
            return None;
        }
    };
    report.check(
        format!("{prefix}coend.axioms"),
        Status::Pass,
        json!({"rank": cr.rank(), "exps": cr.presentation.carrier().exps(), "relations": cr.presentation.relations.cols()}),
    );
    let lifted = match tannaka::lift_coaction(d, &cr) {
        Ok(l) => l,
        Err(e) => {
            report.check(format!("{prefix}lift.comodules"), Status::Fail, err_detail(&e));
            return None;
        }
    };
    report.check(format!("{prefix}lift.comodules"), Status::Pass, json!(lifted.len()));
    match tannaka::check_morphisms_are_comodule_maps(d, &lifted) {
        None => report.check(format!("{prefix}lift.morphisms"), Status::Pass, Value::Null),
        Some((k, l, g)) => report.check(
            format!("{prefix}lift.morphisms"),
            Status::Fail,
            json!({"src": d.objects()[k].name, "dst": d.objects()[l].name, "generator": g}),
        ),
    }
    match report.timed("unit", || tannaka::unit_fully_faithful_check(d, &lifted)) {
        Ok(pairs) => {
            let all_equal = pairs.iter().all(|p| p.verdict == PairVerdict::Equal);
            let detail: Vec<Value> = pairs
                .iter()
                .filter(|p| p.verdict != PairVerdict::Equal)
                .map(|p| json!({"src": d.objects()[p.src].name, "dst": d.objects()[p.dst].name, "verdict": p.verdict}))
                .collect();
            report.check(format!("{prefix}unit.fully_faithful"), Status::from_bool(all_equal), json!({"pairs": pairs.len(), "unequal": detail}));
        }
        Err(e) => report.check(format!("{prefix}unit.fully_faithful"), Status::Fail, err_detail(&e)),
    }
    Some((cr, lifted))
}

pub fn cmd_coend(input: &str, budget: u64) -> Result<Report> {
    let mut report = Report::new("coend", input.as_bytes(), budget);
    let doc = text::parse_document(input)?;
    let Some(d) = document_diagram(&doc, &mut report)? else { return Ok(report) };
    report.check("diagram.closed", Status::Info, json!(d.is_closed()));
    report.section("ring", ring_json(d.alg().b()));
    report.section("diagram", diagram_json(&d));
    if let Some((cr, _)) = coend_checks(&mut report, "", &d) {
        report.check("coend.flat", Status::Info, json!(tannaka::flatness_check(&cr.coalgebra)));
        report.section("coend", coend_json(&cr));
    }
    Ok(report)
}

pub fn cmd_reconstruct(input: &str, budget: u64) -> Result<Report> {
    let mut report = Report::new("reconstruct", input.as_bytes(), budget);
    let doc = text::parse_document(input)?;
    let alg = doc.alg()?.clone();
    report.section("ring", ring_json(alg.b()));
    let decl = doc.coalgebra.as_ref().ok_or(Error::Parse { line: 1, col: 1, msg: "missing coalgebra".into() })?;
    let c = match decl.build(&alg) {
        Ok(c) => Arc::new(c),
        Err(e) => {
            report.check("coalgebra.axioms", Status::Fail, err_detail(&e));
            return Ok(report);
        }
    };
    report.check("coalgebra.axioms", Status::Pass, json!({"exps": c.carrier().exps()}));
    let mut family = Vec::new();
    for m in &doc.comodules {
        match m.build(&c) {
            Ok(cm) => {
                let cauchy = crate::coalgebra::is_cauchy(&cm);
                report.check(format!("comodule.{}", m.name), Status::from_bool(cauchy), json!({"cauchy": cauchy}));
                family.push(cm);
            }
            Err(e) => report.check(format!("comodule.{}", m.name), Status::Fail, err_detail(&e)),
        }
    }
    if family.is_empty() || report.exit_code() != 0 {
        return Ok(report);
    }
    let res = report.timed("counit", || tannaka::counit_map(&c, &family));
    match res {
        Ok(cu) => {
            report.check("nu.iso", Status::from_bool(cu.iso), json!({"injective": cu.injective, "surjective": cu.surjective}));
            report.check("nu.coalgebra_morphism", Status::from_bool(cu.coalgebra_morphism), Value::Null);
            report.section("coend", coend_json(&cu.coend));
            report.section("nu", json!(cu.nu.format()));
        }
        Err(e) => report.check("nu.iso", Status::Fail, err_detail(&e)),
    }
    Ok(report)
}

pub fn cmd_recognize(input: &str, budget: u64) -> Result<Report> {
    let mut report = Report::new("recognize", input.as_bytes(), budget);
    let doc = text::parse_document(input)?;
    let Some(d) = document_diagram(&doc, &mut report)? else { return Ok(report) };
    report.section("ring", ring_json(d.alg().b()));
    recognition_checks(&mut report, &d, budget, false)?;
    Ok(report)
}

/// Conditions i)–iii); with `advisory` they are reported as info.
fn recognition_checks(report: &mut Report, d: &DiagramCategory, budget: u64, advisory: bool) -> Result<bool> {
    let rec = report.timed("recognition", || recognition::recognition_check(d, budget))?;
    let mut all = true;
    for (name, v) in [
        ("recognition.reflects_isos", &rec.reflects_isos),
        ("recognition.cofiltered", &rec.cofiltered),
        ("recognition.rigid_colimits", &rec.rigid_colimits),
    ] {
        all &= *v == Verdict::Verified;
        if let Verdict::Refuted(w) = v {
            if !w.revalidate(d, budget) {
                report.check(format!("{name}.witness"), Status::Fail, json!("witness does not revalidate"));
            }
        }
        let status = if advisory { Status::Info } else { verdict_status(v) };
        report.check(name, status, v.to_json(d));
    }
    report.section("recognition", rec.to_json(d));
    if all && !advisory {
        let cr = tannaka::coend(d)?;
        report.check("coend.flat", Status::from_bool(tannaka::flatness_check(&cr.coalgebra)), Value::Null);
    }
    Ok(all)
}

pub fn cmd_mf_demo(p: u64, n: u32, f: usize, spec: &str, budget: u64) -> Result<Report> {
    let input = format!("mf demo p={p} n={n} f={f} objects={spec}");
    let mut report = Report::new("mf demo", input.as_bytes(), budget);
    let w = Ring::new(p, n, f).map_err(|e| Error::Parse { line: 1, col: 1, msg: e.to_string() })?;
    report.section("ring", ring_json(&w));
    let specs = text::parse_objects_spec(spec)?;
    let mut objects: Vec<(String, FilteredFModule)> = Vec::new();
    for (name, twists) in &specs {
        let x = text::tate_sum(&w, twists)?;
        mf_object_checks(&mut report, name, &x)?;
        objects.push((name.clone(), x));
    }
    mf_hom_checks(&mut report, &objects)?;
    if report.exit_code() != 0 {
        return Ok(report);
    }
    let d = mf::mf_to_diagram(&objects)?;
    report.check("diagram.closed", Status::from_bool(d.is_closed()), Value::Null);
    report.section("diagram", diagram_json(&d));
    if let Some((cr, lifted)) = coend_checks(&mut report, "", &d) {
        report.check("coend.flat", Status::from_bool(tannaka::flatness_check(&cr.coalgebra)), Value::Null);
        report.section("coend", coend_json(&cr));
        match report.timed("probe", || tannaka::essential_surjectivity_probe(&cr, &lifted, &[1], budget)) {
            Ok(probe) => {
                let status = if !probe.outside.is_empty() {
                    Status::Fail
                } else if probe.exhaustive {
                    Status::Pass
                } else {
                    Status::Inconclusive
                };
                report.check("essential.rank1", status, json!(probe));
            }
            Err(e) => report.check("essential.rank1", Status::Inconclusive, err_detail(&e)),
        }
    }
    mf_colimit_checks(&mut report, &objects)?;
    recognition_checks(&mut report, &d, budget, true)?;
    Ok(report)
}

/// Validity, the length equality and `φ̄` surjective ⟺ iso.
fn mf_object_checks(report: &mut Report, name: &str, x: &FilteredFModule) -> Result<()> {
    let mb = mf::mbar(x);
    match mb {
        Ok(mb) => {
            report.check(
                format!("mf.{name}.length"),
                Status::from_bool(mb.mbar.length() == x.module().length()),
                json!({"mbar": mb.mbar.length(), "m": x.module().length()}),
            );
            let (surj, inj) = mf::phibar_status(x)?;
            let iso = mf::is_mf_fl(x);
            report.check(
                format!("mf.{name}.phibar"),
                Status::from_bool(surj == iso && (surj && inj) == iso),
                json!({"surjective": surj, "iso": iso}),
            );
            report.check(format!("mf.{name}.proj"), Status::from_bool(mf::is_mf_proj(x)), Value::Null);
        }
        Err(e) => report.check(format!("mf.{name}.length"), Status::Fail, err_detail(&e)),
    }
    Ok(())
}

fn mf_hom_checks(report: &mut Report, objects: &[(String, FilteredFModule)]) -> Result<()> {
    for (a, x) in objects {
        for (b, y) in objects {
            let name = format!("mf.hom({a},{b}) {}", x.ring());
            match suite::mf_hom_oracle(x, y, 4096)? {
                Some(o) => report.check(
                    name,
                    Status::from_bool(o.morphisms == o.solver),
                    json!({"solver": o.solver, "enumerated": o.morphisms, "searched": o.searched}),
                ),
                None => {
                    let h = mf::mf_hom(x, y)?;
                    report.check(name, Status::Info, json!({"exps": h.module.exps(), "oracle": "skipped"}));
                }
            }
        }
    }
    Ok(())
}

/// Coequalizer of `(id, id)`, pushout along identities and coequalizer of
/// `(0, id)` on the first object.
fn mf_colimit_checks(report: &mut Report, objects: &[(String, FilteredFModule)]) -> Result<()> {
    let Some((name, x)) = objects.first() else { return Ok(()) };
    let w = x.ring();
    let id = Matrix::identity(w, x.module().len());
    let zero = Matrix::zeros(w, x.module().len(), x.module().len());
    let cases: [(&str, Vec<FilteredFModule>, Vec<(usize, usize, Matrix)>, u64); 3] = [
        ("coequalizer(id,id)", vec![x.clone(), x.clone()], vec![(0, 1, id.clone()), (0, 1, id.clone())], x.module().length()),
        ("pushout(id,id)", vec![x.clone(), x.clone(), x.clone()], vec![(0, 1, id.clone()), (0, 2, id.clone())], x.module().length()),
        ("coequalizer(0,id)", vec![x.clone(), x.clone()], vec![(0, 1, zero), (0, 1, id)], 0),
    ];
    for (label, nodes, arrows, expect_len) in cases {
        let v = mf::mf_colimit_probe(&nodes, &arrows)?;
        let key = format!("mf.colimit.{label} on {name}");
        match &v {
            ColimitVerdict::Verified { colimit, .. } => {
                let ok = colimit.module().length() == expect_len;
                report.check(key, Status::from_bool(ok), json!({"length": colimit.module().length()}));
            }
            ColimitVerdict::NotApplicable { exps } => report.check(key, Status::Info, json!({"not_free": exps})),
            ColimitVerdict::Refuted { reason } => report.check(key, Status::Fail, json!(reason)),
        }
    }
    Ok(())
}

/// Every built-in example and a seeded pass of each property family.
pub fn cmd_verify_suite(budget: u64) -> Result<Report> {
    let mut report = Report::new("verify-suite", b"builtin", budget);
    for s in suite::builtin_diagrams()? {
        let prefix = format!("[{}] ", s.name);
        let t = std::time::Instant::now();
        coend_checks(&mut report, &prefix, &s.diagram);
        report.timings_ms.insert(s.name.clone(), t.elapsed().as_millis());
    }
    for p in [2, 3] {
        let alg = suite::alg_for(p, 1, 1);
        for r in 1..=3 {
            let c = Arc::new(Coalgebra::comatrix(&alg, r));
            let std = suite::standard_comodule(&c, r)?;
            let cu = tannaka::counit_map(&c, &[std])?;
            report.check(format!("reconstruct.comatrix r={r} F_{p}"), Status::from_bool(cu.iso && cu.coalgebra_morphism), json!({"rank": cu.coend.rank()}));
        }
    }
    let alg2 = suite::alg_for(2, 1, 1);
    for g in 1..=3 {
        let c = Arc::new(Coalgebra::grouplike(&alg2, g));
        let lines = (0..g).map(|i| suite::grouplike_line(&c, i)).collect::<Result<Vec<_>>>()?;
        let cu = tannaka::counit_map(&c, &lines)?;
        report.check(format!("reconstruct.grouplike g={g} F_2"), Status::from_bool(cu.iso), Value::Null);
    }
    for (p, n, f) in [(2, 1, 1), (2, 1, 2), (2, 2, 1), (3, 1, 1)] {
        let w = Ring::new(p, n, f)?;
        let fam = suite::mf_family(&w, &[&[0], &[1], &[0, 1], &[0, 0]])?;
        for (name, x) in &fam {
            mf_object_checks(&mut report, &format!("{w} {name}"), x)?;
        }
        mf_hom_checks(&mut report, &fam)?;
    }
    mf_colimit_checks(&mut report, &suite::mf_family(&Ring::new(2, 1, 1)?, &[&[0]])?)?;
    recognition_suite(&mut report, budget)?;
    property_suite(&mut report);
    Ok(report)
}

fn recognition_suite(report: &mut Report, budget: u64) -> Result<()> {
    for (p, n, f) in [(2, 1, 1), (2, 2, 1), (2, 2, 2)] {
        let d = suite::full_endomorphism_diagram(&suite::alg_for(p, n, f));
        let ok_i = recognition::check_reflects_isos(&d, budget) == Verdict::Verified;
        let ok_ii = recognition::check_cofiltered(&d, budget) == Verdict::Verified;
        report.check(format!("recognition.trivial GR({p}^{n},{f})"), Status::from_bool(ok_i && ok_ii), Value::Null);
    }
    let alg = suite::alg_for(2, 1, 1);
    let b = alg.b().clone();
    let mut one_way = DiagramCategory::new(&alg);
    one_way.add_object("A", 1)?;
    one_way.add_object("B", 1)?;
    one_way.add_hom(0, 1, Matrix::from_ints(&b, &[&[1]]))?;
    let one_way = one_way.with_identities();
    let cone_removed = suite::grouplike_diagram(&alg, 2);
    for (label, d, v) in [
        ("negative.reflects_isos", &one_way, recognition::check_reflects_isos(&one_way, budget)),
        ("negative.cofiltered", &cone_removed, recognition::check_cofiltered(&cone_removed, budget)),
    ] {
        let ok = matches!(&v, Verdict::Refuted(w) if w.revalidate(d, budget));
        report.check(format!("recognition.{label}"), Status::from_bool(ok), v.to_json(d));
    }
    Ok(())
}

fn property_suite(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (p, n, f) in [(2, 3, 1), (2, 1, 2), (2, 2, 2)] {
        let r = Ring::new(p, n, f).expect("suite ring");
        let mut bad = 0;
        for _ in 0..100 {
            let (rows, cols) = (rand::Rng::gen_range(&mut rng, 1..=4), rand::Rng::gen_range(&mut rng, 1..=4));
            let a = suite::random_matrix(&mut rng, &r, rows, cols);
            bad += suite::smith_violation(&a).is_some() as u32;
            if rows <= 2 && cols <= 2 {
                bad += suite::kernel_cokernel_violation(&a).is_some() as u32;
            }
        }
        report.check(format!("property.smith {r}"), Status::from_bool(bad == 0), json!({"violations": bad}));
    }
    for (p, n, f) in [(2, 1, 2), (2, 2, 2)] {
        let r = Ring::new(p, n, f).expect("suite ring");
        let bad = suite::frobenius_violations(&r);
        report.check(format!("property.frobenius {r}"), Status::from_bool(bad == 0), json!({"violations": bad}));
    }
    for (p, n, f) in [(2, 1, 1), (2, 1, 2), (2, 2, 1)] {
        let alg = AlgebraSpec::over_prime_ring(&Ring::new(p, n, f).expect("suite ring")).expect("prime ring");
        let mut bad = 0;
        for _ in 0..10 {
            let d = suite::random_diagram(&mut rng, &alg);
            bad += !suite::generator_robust(&d).unwrap_or(false) as u32;
        }
        report.check(format!("property.generator_robust {}", alg.b()), Status::from_bool(bad == 0), json!({"violations": bad}));
    }
}

/// The ring and its defining polynomial `h`, leading term first.
pub fn ring_json(r: &Ring) -> Value {
    let h: Vec<String> = r
        .defining_polynomial()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".into(),
            (1, c) => format!("{c}*x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}*x^{i}"),
        })
        .collect();
    json!({"ring": r.to_string(), "p": r.p(), "n": r.n(), "f": r.f(), "h": h.join("+")})
}

pub fn diagram_json(d: &DiagramCategory) -> Value {
    let homs: Vec<Value> = (0..d.len())
        .flat_map(|k| (0..d.len()).map(move |l| (k, l)))
        .filter(|&(k, l)| !d.hom(k, l).is_empty())
        .map(|(k, l)| {
            json!({
                "src": d.objects()[k].name,
                "dst": d.objects()[l].name,
                "span_exps": d.span(k, l).module().exps(),
            })
        })
        .collect();
    json!({
        "ring": d.alg().b().to_string(),
        "objects": d.objects().iter().map(|o| json!({"name": o.name, "rank": o.rank})).collect::<Vec<_>>(),
        "homs": homs,
    })
}

pub fn coend_json(cr: &tannaka::CoendResult) -> Value {
    let c = &cr.coalgebra;
    json!({
        "rank": cr.rank(),
        "exps": cr.presentation.carrier().exps(),
        "left_x": c.bimodule().left_x().format(),
        "right_x": c.bimodule().right_x().format(),
        "comult": c.comult().format(),
        "counit": c.counit().format(),
        "flat": tannaka::flatness_check(c),
    })
}
