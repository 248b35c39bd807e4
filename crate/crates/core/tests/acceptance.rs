//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any criterion failed. Built without the
//! test harness so the lines are never captured.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::SeedableRng;

use preab_core::audit::{generate_instance, run_audit, AuditConfig, AuditReport, ZooVerdict};
use preab_core::backends::{Backend, MatrixCategory};
use preab_core::category::{
    classify, decompose, induced_cokernel_map, induced_kernel_map, pullback, pushout, Category, Opposite, SampleRng,
};
use preab_core::conditions::{
    check_left, check_left_direct, check_right, run_check, Check, ConditionId, Index, Instance, ProbeParams, Side,
    Verdict,
};
use preab_core::linalg::RatMatrix;
use preab_core::report::{cmd_check, CheckRequest, ReportDocument, EXIT_FAIL};
use preab_core::with_category;

const BACKENDS: [Backend; 4] = [Backend::VectQ, Backend::SubVect, Backend::FiltVect(3), Backend::LatZ];
const KNOWN_QUASI_ABELIAN: [Backend; 3] = [Backend::VectQ, Backend::SubVect, Backend::FiltVect(3)];
/// Largest object dimension drawn anywhere in the suite.
const DIM_BOUND: usize = 4;

const LAW_MORPHISMS: usize = 500;
const LAW_TEST_MORPHISMS: usize = 3;
const STABILITY_SQUARES: usize = 300;
/// Each conditional stability clause must be exercised at least this often.
const STABILITY_MIN_HYPOTHESES: usize = 30;
const LEMMA2_PAIRS: usize = 300;
const COROLLARY3_PAIRS: usize = 100;
const VI_AUDIT_SAMPLES: usize = 200;
const COHERENCE_SAMPLES: usize = 150;
const MIN_NONVACUOUS: usize = 30;
const DUALITY_INSTANCES: usize = 200;
const STRICT_SAMPLES: usize = 500;
const ZOO_SAMPLES: usize = 100;
const PROBE_SAMPLES: usize = 500;
const PROBED_KERNELS: usize = 4;
const DETERMINISM_WORKERS: [usize; 2] = [1, 3];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> SampleRng {
    SampleRng::seed_from_u64(seed)
}

fn random_arrow<C: Category>(cat: &C, rng: &mut SampleRng) -> C::Morphism {
    let a = cat.random_object(DIM_BOUND, rng);
    let b = cat.random_object(DIM_BOUND, rng);
    cat.random_morphism(&a, &b, rng)
}

/// A kernel leg of a random map, retried until its apex is nonzero.
fn nontrivial_kernel<C: Category>(cat: &C, rng: &mut SampleRng) -> C::Morphism {
    loop {
        let phi = random_arrow(cat, rng);
        let k = cat.kernel(&phi);
        if !cat.is_zero_object(&k.apex) && !cat.is_zero_object(cat.cod(&k.leg)) && cat.inverse(&k.leg).is_none() {
            return k.leg;
        }
    }
}

// 1. category laws ----------------------------------------------------------

fn laws_for<C: Category>(cat: &C, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for n in 0..LAW_MORPHISMS {
        let f = random_arrow(cat, &mut rng);
        let k = cat.kernel(&f);
        let q = cat.cokernel(&f);
        ensure(cat.is_zero(&cat.compose(&f, &k.leg).unwrap()), || format!("{}: f∘ker f ≠ 0 at {n}", cat.name()))?;
        ensure(cat.is_zero(&cat.compose(&q.leg, &f).unwrap()), || format!("{}: cok f∘f ≠ 0 at {n}", cat.name()))?;
        // the legs are mono / epi, so any factorization found is unique
        ensure(cat.is_zero_object(&cat.kernel(&k.leg).apex), || format!("{}: ker leg not mono at {n}", cat.name()))?;
        ensure(cat.is_zero_object(&cat.cokernel(&q.leg).apex), || format!("{}: cok leg not epi at {n}", cat.name()))?;

        for _ in 0..LAW_TEST_MORPHISMS {
            // through the kernel: one test map killed by f, one arbitrary
            let t = cat.random_object(DIM_BOUND, &mut rng);
            let y = cat.random_morphism(&t, &k.apex, &mut rng);
            let x = cat.compose(&k.leg, &y).unwrap();
            let u = k.factor(cat, &x).ok_or_else(|| format!("{}: no factorization through ker at {n}", cat.name()))?;
            ensure(cat.compose(&k.leg, &u).unwrap() == x, || format!("{}: ker factor wrong at {n}", cat.name()))?;
            let x2 = cat.random_morphism(&t, cat.dom(&f), &mut rng);
            let killed = cat.is_zero(&cat.compose(&f, &x2).unwrap());
            ensure(k.factor(cat, &x2).is_some() == killed, || {
                format!("{}: ker factor domain wrong at {n}", cat.name())
            })?;

            // through the cokernel
            let s = cat.random_object(DIM_BOUND, &mut rng);
            let z = cat.random_morphism(&q.apex, &s, &mut rng);
            let x = cat.compose(&z, &q.leg).unwrap();
            let v = q.factor(cat, &x).ok_or_else(|| format!("{}: no factorization through cok at {n}", cat.name()))?;
            ensure(cat.compose(&v, &q.leg).unwrap() == x, || format!("{}: cok factor wrong at {n}", cat.name()))?;
            let x2 = cat.random_morphism(cat.cod(&f), &s, &mut rng);
            let killed = cat.is_zero(&cat.compose(&x2, &f).unwrap());
            ensure(q.factor(cat, &x2).is_some() == killed, || {
                format!("{}: cok factor domain wrong at {n}", cat.name())
            })?;
        }

        let d = decompose(cat, &f).map_err(|e| e.to_string())?;
        let back = cat.compose(&d.im, &cat.compose(&d.fbar, &d.coim).unwrap()).unwrap();
        ensure(back == f, || format!("{}: decomposition does not recompose at {n}", cat.name()))?;
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    for (i, b) in BACKENDS.into_iter().enumerate() {
        with_category!(b, |cat| laws_for(&cat, 100 + i as u64))?;
    }
    Ok(format!("{LAW_MORPHISMS} morphisms per backend, {LAW_TEST_MORPHISMS} test maps per cone"))
}

// 2. pullback and pushout stability -----------------------------------------------------------------

fn stability_for<C: Category>(cat: &C, seed: u64) -> Result<[usize; 4], String> {
    let mut rng = rng(seed);
    let mut hits = [0usize; 4];
    let name = cat.name();
    for n in 0..STABILITY_SQUARES {
        // pullback of f along t; f is a constructed kernel a third of the time
        let f = if n % 3 == 0 { nontrivial_kernel(cat, &mut rng) } else { random_arrow(cat, &mut rng) };
        let g = cat.random_object(DIM_BOUND, &mut rng);
        let t = cat.random_morphism(&g, cat.cod(&f), &mut rng);
        let pb = pullback(cat, &f, &t).map_err(|e| e.to_string())?;
        let w = induced_kernel_map(cat, &pb).map_err(|e| e.to_string())?;
        ensure(cat.inverse(&w).is_some(), || format!("{name}: ker f ≇ p_E∘ker p_G at {n}"))?;
        let (cf, ctop) = (classify(cat, &f).unwrap(), classify(cat, &pb.top).unwrap());
        if cf.is_kernel {
            hits[0] += 1;
            ensure(ctop.is_kernel, || format!("{name}: kernel did not pull back to a kernel at {n}"))?;
        }
        if cf.mono {
            hits[1] += 1;
            ensure(ctop.mono, || format!("{name}: mono did not pull back to a mono at {n}"))?;
        }

        // pushout of g along α; g is a constructed cokernel a third of the time
        let g = if n % 3 == 0 { cat.cokernel(&random_arrow(cat, &mut rng)).leg } else { random_arrow(cat, &mut rng) };
        let a = cat.random_object(DIM_BOUND, &mut rng);
        let alpha = cat.random_morphism(cat.dom(&g), &a, &mut rng);
        let po = pushout(cat, &alpha, &g).map_err(|e| e.to_string())?;
        let w = induced_cokernel_map(cat, &po).map_err(|e| e.to_string())?;
        ensure(cat.inverse(&w).is_some(), || format!("{name}: cok g ≇ cok s_G∘β at {n}"))?;
        let (cg, cbottom) = (classify(cat, &g).unwrap(), classify(cat, &po.bottom).unwrap());
        if cg.is_cokernel {
            hits[2] += 1;
            ensure(cbottom.is_cokernel, || format!("{name}: cokernel did not push out to a cokernel at {n}"))?;
        }
        if cg.epi {
            hits[3] += 1;
            ensure(cbottom.epi, || format!("{name}: epi did not push out to an epi at {n}"))?;
        }
    }
    ensure(hits.iter().all(|&h| h >= STABILITY_MIN_HYPOTHESES), || format!("{name}: hypotheses too rare {hits:?}"))?;
    Ok(hits)
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    for (i, b) in BACKENDS.into_iter().enumerate() {
        let hits = with_category!(b, |cat| stability_for(&cat, 200 + i as u64))?;
        notes.push(format!("{b} {hits:?}"));
    }
    Ok(format!("{STABILITY_SQUARES} pullbacks and pushouts per backend; hypothesis hits {}", notes.join(", ")))
}

// 3. comparison maps -----------------------------------------------------

fn run_generated<C: MatrixCategory>(cat: &C, check: Check, n: usize, seed: u64) -> Result<(usize, usize), String> {
    let (mut pass, mut vacuous) = (0, 0);
    for i in 0..n {
        let mut r = rng(seed.wrapping_mul(1_000_003) + i as u64);
        let inst = generate_instance(cat, check, DIM_BOUND, &mut r).map_err(|e| e.to_string())?;
        let out = run_check(cat, check, &inst, &ProbeParams::default()).map_err(|e| e.to_string())?;
        match out.verdict {
            Verdict::Pass => pass += 1,
            Verdict::Vacuous => vacuous += 1,
            Verdict::Fail => return Err(format!("{}: {check} failed on instance {i}: {}", cat.name(), out.detail)),
        }
    }
    Ok((pass, vacuous))
}

fn vi_audit_clean(b: Backend, side: Side) -> bool {
    let vi = Check::Condition(ConditionId { side, index: Index::Vi });
    let mut cfg = AuditConfig::new(b, 31).with_default_samples(0);
    cfg.samples.insert(vi.to_string(), VI_AUDIT_SAMPLES);
    let report = run_audit(&cfg, None);
    report.tally(vi).fail == 0
}

fn criterion_3() -> Outcome {
    let mut skipped = Vec::new();
    for (i, b) in BACKENDS.into_iter().enumerate() {
        let seed = 300 + i as u64;
        let (pass, _) = with_category!(b, |cat| run_generated(&cat, Check::Lemma2, LEMMA2_PAIRS, seed))?;
        ensure(pass == LEMMA2_PAIRS, || format!("{b}: lemma2 had vacuous instances"))?;
        for (side, check) in [(Side::Right, Check::Corollary3Kernels), (Side::Left, Check::Corollary3Cokernels)] {
            if !vi_audit_clean(b, side) {
                skipped.push(format!("{b} {check}"));
                continue;
            }
            let (pass, _) = with_category!(b, |cat| run_generated(&cat, check, COROLLARY3_PAIRS, seed + 50))?;
            ensure(pass == COROLLARY3_PAIRS, || format!("{b}: {check} had vacuous instances"))?;
        }
    }
    let skipped = if skipped.is_empty() { "none".to_string() } else { skipped.join(", ") };
    Ok(format!("{LEMMA2_PAIRS} lemma2 pairs, {COROLLARY3_PAIRS} pairs per corollary side; skipped: {skipped}"))
}

// 4. condition coherence ---------------------------------------------------------

fn coherence_report(b: Backend) -> AuditReport {
    let mut cfg = AuditConfig::new(b, 41).with_default_samples(0);
    cfg.dim_bound = DIM_BOUND;
    cfg.min_nonvacuous = MIN_NONVACUOUS;
    for c in ConditionId::all() {
        cfg.samples.insert(Check::Condition(c).to_string(), COHERENCE_SAMPLES);
    }
    run_audit(&cfg, None)
}

fn criterion_4() -> Outcome {
    let mut least = usize::MAX;
    for b in KNOWN_QUASI_ABELIAN {
        let report = coherence_report(b);
        for c in ConditionId::all() {
            let check = Check::Condition(c);
            let t = report.tally(check);
            ensure(t.fail == 0, || format!("{b}: {check} failed {} times", t.fail))?;
            if c.index.is_conditional() {
                ensure(t.nonvacuous() >= MIN_NONVACUOUS, || {
                    format!("{b}: {check} only {} non-vacuous instances (inconclusive)", t.nonvacuous())
                })?;
                least = least.min(t.nonvacuous());
            }
        }
    }
    Ok(format!("{COHERENCE_SAMPLES} instances per condition, fewest non-vacuous {least} (minimum {MIN_NONVACUOUS})"))
}

// 5. duality -----------------------------------------------------------------------

fn duality_for<C: MatrixCategory>(cat: &C, seed: u64) -> Result<(), String> {
    let op = Opposite(cat.clone());
    for index in Index::ALL {
        for i in 0..DUALITY_INSTANCES {
            let mut r = rng(seed + 7919 * i as u64 + 13 * index as u64);
            for side in [Side::Left, Side::Right] {
                let check = Check::Condition(ConditionId { side, index });
                let x = generate_instance(cat, check, DIM_BOUND, &mut r).map_err(|e| e.to_string())?;
                ensure(x.to_opposite().from_opposite() == x, || format!("transport is not an involution on {check}"))?;
                let (a, b) = match side {
                    // left in C via the opposite adapter against the hand-written dual
                    Side::Left => (check_left(cat, index, &x), check_left_direct(cat, index, &x)),
                    // right in C against the hand-written left check run in C^op
                    Side::Right => (check_right(cat, index, &x), check_left_direct(&op, index, &x.to_opposite())),
                };
                let (a, b) = (a.map_err(|e| e.to_string())?.verdict, b.map_err(|e| e.to_string())?.verdict);
                ensure(a == b, || format!("{}: {check} instance {i}: {a:?} vs {b:?}", cat.name()))?;
            }
        }
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    for (i, b) in BACKENDS.into_iter().enumerate() {
        with_category!(b, |cat| duality_for(&cat, 500 + i as u64))?;
    }
    Ok(format!("{DUALITY_INSTANCES} instances per condition and side on every backend"))
}

// 6. non-strictness and zoo verdicts ------------------------------------------------------

fn zoo_report(b: Backend) -> AuditReport {
    let mut cfg = AuditConfig::new(b, 61).with_default_samples(ZOO_SAMPLES);
    cfg.min_nonvacuous = MIN_NONVACUOUS;
    run_audit(&cfg, None)
}

fn criterion_6() -> Outcome {
    let sub = preab_core::backends::FlagCategory::new(1);
    let v0 = sub.object(2, vec![preab_core::linalg::Subspace::zero(2)]).unwrap();
    let vv = sub.object(2, vec![preab_core::linalg::Subspace::full(2)]).unwrap();
    let w = sub.make_morphism(&v0, &vv, RatMatrix::identity(2)).unwrap();
    let c = classify(&sub, &w).unwrap();
    ensure(c.mono && c.epi && !c.iso && !c.strict, || format!("SubVect witness classified {c:?}"))?;

    let lat = preab_core::backends::LatticeCategory;
    let z = preab_core::backends::LatObject { rank: 1 };
    let two = lat.make_morphism(&z, &z, RatMatrix::from_i64(&[&[2]])).unwrap();
    let c = classify(&lat, &two).unwrap();
    ensure(c.mono && c.epi && !c.iso && !c.strict, || format!("LatZ ×2 classified {c:?}"))?;

    let vect = preab_core::backends::FlagCategory::new(0);
    let mut r = rng(600);
    for n in 0..STRICT_SAMPLES {
        let f = random_arrow(&vect, &mut r);
        ensure(classify(&vect, &f).unwrap().strict, || format!("VectQ morphism {n} not strict"))?;
    }

    let expect = |b: Backend, ok: &dyn Fn(ZooVerdict) -> bool| -> Result<ZooVerdict, String> {
        let r = zoo_report(b);
        ensure(ok(r.verdict), || format!("{b}: verdict {:?}, caveats {:?}", r.verdict, r.caveats))?;
        if b == Backend::SubVect {
            ensure(r.witnesses_for(Check::Strict).next().is_some(), || "SubVect: no non-strict witness".into())?;
        }
        Ok(r.verdict)
    };
    expect(Backend::VectQ, &|v| v == ZooVerdict::AbelianConsistent)?;
    expect(Backend::SubVect, &|v| v == ZooVerdict::QuasiAbelianConsistent)?;
    expect(Backend::FiltVect(3), &|v| v == ZooVerdict::QuasiAbelianConsistent)?;
    let latz = expect(Backend::LatZ, &|v| v.is_consistent())?;
    Ok(format!("witnesses classified; VectQ {STRICT_SAMPLES}/{STRICT_SAMPLES} strict; LatZ verdict {latz:?}"))
}

// 7. semi-stability probes ------------------------------------------------------------

fn probe_kernels<C: MatrixCategory>(cat: &C, seed: u64) -> Result<Vec<String>, String> {
    let mut r = rng(seed);
    let mut counterexamples = Vec::new();
    for k in 0..PROBED_KERNELS {
        let kernel = nontrivial_kernel(cat, &mut r);
        let cokernel = cat.cokernel(&random_arrow(cat, &mut r)).leg;
        for (check, f) in [(Check::SemistableKernel, kernel), (Check::SemistableCokernel, cokernel)] {
            let probe = ProbeParams { samples: PROBE_SAMPLES, seed: seed + k as u64, dim_bound: DIM_BOUND };
            let inst = Instance::Morphism { f };
            let out = run_check(cat, check, &inst, &probe).map_err(|e| e.to_string())?;
            ensure(out.verdict != Verdict::Vacuous, || format!("{}: probe target is not a (co)kernel", cat.name()))?;
            if out.verdict == Verdict::Fail {
                let record = preab_core::conditions::check_result(cat, check, &inst, &probe).unwrap();
                counterexamples.push(serde_json::to_string(&record).unwrap());
            }
        }
    }
    Ok(counterexamples)
}

fn criterion_7() -> Outcome {
    for b in [Backend::SubVect, Backend::FiltVect(3)] {
        let found = with_category!(b, |cat| probe_kernels(&cat, 700))?;
        ensure(found.is_empty(), || format!("{b}: {} semi-stability counterexamples", found.len()))?;
    }
    let found = with_category!(Backend::LatZ, |cat| probe_kernels(&cat, 770))?;
    for record in &found {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cmd_check(&CheckRequest::default(), record, &mut out, &mut err);
        ensure(code == EXIT_FAIL, || format!("LatZ counterexample did not replay (exit {code})"))?;
    }
    Ok(format!(
        "{PROBE_SAMPLES} probes on {PROBED_KERNELS} kernels and cokernels each; LatZ counterexamples replayed: {}",
        found.len()
    ))
}

// 8. determinism and shrinking ---------------------------------------------------------------

fn criterion_8() -> Outcome {
    let mut replayed = 0;
    for b in BACKENDS {
        let mut cfg = AuditConfig::new(b, 81).with_default_samples(40);
        cfg.dim_bound = DIM_BOUND;
        let docs: Vec<String> = DETERMINISM_WORKERS
            .iter()
            .map(|&w| ReportDocument::new(cfg.clone(), run_audit(&cfg, Some(w))).to_json())
            .collect();
        ensure(docs.windows(2).all(|w| w[0] == w[1]), || format!("{b}: reports differ across worker counts"))?;
        let again = ReportDocument::new(cfg.clone(), run_audit(&cfg, Some(1))).to_json();
        ensure(again == docs[0], || format!("{b}: reports differ across runs"))?;
        let parsed = ReportDocument::from_json(&docs[0]).map_err(|e| e.to_string())?;
        ensure(parsed.to_json() == docs[0], || format!("{b}: report does not round-trip"))?;

        for w in &parsed.report.witnesses {
            ensure(w.shrunk_size <= w.original_size, || format!("{b}: witness grew while shrinking"))?;
            let record = serde_json::to_string(&w.result).unwrap();
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let code = cmd_check(&CheckRequest::default(), &record, &mut out, &mut err);
            ensure(code == EXIT_FAIL, || format!("{b}: shrunk {} witness does not fail on replay", w.result.check))?;
            let replay: serde_json::Value = serde_json::from_slice(&out).unwrap();
            ensure(replay == serde_json::to_value(&w.result).unwrap(), || format!("{b}: replay differs from record"))?;
            replayed += 1;
        }
    }
    Ok(format!("reports identical for workers {DETERMINISM_WORKERS:?}; {replayed} shrunk witnesses replayed"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 category laws", criterion_1),
        ("2 pullback and pushout lemma", criterion_2),
        ("3 cokernel/kernel comparison lemmas", criterion_3),
        ("4 condition coherence on quasi-abelian backends", criterion_4),
        ("5 duality exactness", criterion_5),
        ("6 non-strict witnesses and zoo verdicts", criterion_6),
        ("7 semi-stability probes", criterion_7),
        ("8 determinism and shrinking", criterion_8),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let start = std::time::Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(note) => println!("PASS criterion {name} ({secs:.1}s): {note}"),
            Err(why) => {
                println!("FAIL criterion {name} ({secs:.1}s): {why}");
                failed.push(name);
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
