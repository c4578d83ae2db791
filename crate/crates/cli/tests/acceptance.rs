//! Acceptance criteria 1–10, one PASS/FAIL line each. Every comparison is
//! exact equality of canonical module forms or integers.

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use sheafbn::bncheck::{
    asphericity_check, bn_verdict, derived_quasicoherator, e2_page, AsphericityVerdict, Collapse, CollapseReason, Condition3, Limits,
    Status,
};
use sheafbn::cellsheaf::{constant_sheaf, direct_sum, pullback, sheaf_cohomology, sheaf_cohomology_all, CellularSheaf};
use sheafbn::covers::build_cover;
use sheafbn::exactalg::{FpModule, Matrix, RingSpec};
use sheafbn::fixtures;
use sheafbn::fundgroup::{group_order, induced_homomorphism, presentation, todd_coxeter, GroupOrder, GroupPresentation, Word};
use sheafbn::groupcoh::{bar_cohomology, fox_cohomology, multiplication_table, Exactness, DEFAULT_SIZE_CAP};
use sheafbn::localsys::{invariants_match, pullback_rep, rep_to_sheaf, sheaf_to_rep, Representation};
use sheafbn::simplicial::SimplicialComplex;

const Z: RingSpec = RingSpec::Integers;
const Q: RingSpec = RingSpec::Rationals;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn fp(p: u64) -> RingSpec {
    RingSpec::prime_field(p).unwrap()
}

fn arc(name: &str) -> Arc<SimplicialComplex> {
    Arc::new(fixtures::by_name(name).unwrap())
}

fn free(ring: RingSpec, n: usize) -> FpModule {
    FpModule::free(ring, n)
}

fn cyclic(n: u64) -> FpModule {
    FpModule::cyclic(Z, n).unwrap()
}

fn padded(mut v: Vec<FpModule>, len: usize, ring: RingSpec) -> Vec<FpModule> {
    v.resize(len, FpModule::zero(ring));
    v
}

/// Sample representations of `π_1` of each fixture, over several rings.
fn sample_reps(name: &str) -> Vec<(String, Representation)> {
    let x = arc(name);
    let (p, l) = presentation(&x, 0).unwrap();
    let scalars = |ring, s: &[i64]| Representation::from_scalars(&p, ring, s).unwrap();
    let mats = |ring, rows: &[&[Vec<i64>]]| {
        let ms = rows.iter().map(|r| Matrix::from_rows(ring, r)).collect();
        Representation::checked(ring, rows[0].len(), p.clone(), ms).unwrap()
    };
    let id = |s: &str| s.to_string();
    match name {
        "circle" => vec![
            (id("trivial-Z"), Representation::trivial(&p, Z, 1)),
            (id("sign-Z"), scalars(Z, &[-1])),
            (id("two-Q"), scalars(Q, &[2])),
            (id("two-F3"), scalars(fp(3), &[2])),
            (id("rotation-Z"), mats(Z, &[&[vec![0, -1], vec![1, 0]]])),
        ],
        "wedge" => vec![
            (id("sign-trivial-Z"), scalars(Z, &[-1, 1])),
            (id("two-three-Q"), scalars(Q, &[2, 3])),
            (id("unipotent-Q"), mats(Q, &[&[vec![1, 1], vec![0, 1]], &[vec![1, 0], vec![1, 1]]])),
            (id("trivial-F2"), Representation::trivial(&p, fp(2), 2)),
        ],
        "rp2" => {
            let t = todd_coxeter(&p, &[], 100);
            vec![
                (id("trivial-Z"), Representation::trivial(&p, Z, 1)),
                (id("sign-Z"), Representation::sign(&t, Z).unwrap()),
                (id("sign-Q"), Representation::sign(&t, Q).unwrap()),
                (id("regular-Q"), Representation::permutation(&t, Q).unwrap()),
                (id("trivial-F2"), Representation::trivial(&p, fp(2), 1)),
                (id("sign-F3"), Representation::sign(&t, fp(3)).unwrap()),
            ]
        }
        "sphere" => vec![(id("trivial-Z2"), Representation::trivial(&p, Z, 2)), (id("trivial-Q"), Representation::trivial(&p, Q, 1))],
        "torus" => vec![(id("trivial-Z"), Representation::trivial(&p, Z, 1)), (id("trivial-Q"), Representation::trivial(&p, Q, 1))],
        "cylinder" => {
            let f = fixtures::map_by_name("cylinder_to_circle").unwrap();
            let (_, cl) = presentation(f.target(), 0).unwrap();
            let h = induced_homomorphism(&f, &l, &cl).unwrap();
            sample_reps("circle").into_iter().map(|(i, rho)| (format!("pulled-{i}"), pullback_rep(&h, &p, &rho).unwrap())).collect()
        }
        _ => vec![(id("trivial-Z"), Representation::trivial(&p, Z, 1)), (id("trivial-F5"), Representation::trivial(&p, fp(5), 2))],
    }
}

fn all_fixture_reps() -> Vec<(&'static str, String, Representation)> {
    fixtures::names().flat_map(|n| sample_reps(n).into_iter().map(move |(i, r)| (n, i, r))).collect()
}

// 1
fn classical_cohomology() -> Outcome {
    let cases: [(&str, RingSpec, Vec<FpModule>); 4] = [
        ("circle", Z, vec![free(Z, 1), free(Z, 1)]),
        ("sphere", Z, vec![free(Z, 1), FpModule::zero(Z), free(Z, 1)]),
        ("rp2", Z, vec![free(Z, 1), FpModule::zero(Z), cyclic(2)]),
        ("torus", Q, vec![free(Q, 1), free(Q, 2), free(Q, 1)]),
    ];
    for (name, ring, expected) in cases {
        let x = arc(name);
        let got = ok(sheaf_cohomology_all(&constant_sheaf(&x, ring, 1)))?;
        ensure!(got == expected, "{name}: got {got:?}");
    }
    Ok("circle, S², RP², T over the stated rings".into())
}

// 2
fn round_trip() -> Outcome {
    let mut count = 0;
    for (name, id, rho) in all_fixture_reps() {
        let x = arc(name);
        let (_, l) = presentation(&x, 0).unwrap();
        let f = ok(rep_to_sheaf(&x, &l, &rho))?;
        ensure!(ok(sheaf_to_rep(&x, &l, &f))? == rho, "{name}/{id}: representation changed");
        count += 1;
    }
    // sheaves not built from a representation: pullbacks, sums, constants
    let map = fixtures::map_by_name("cylinder_to_circle").unwrap();
    let (_, cl) = presentation(map.target(), 0).unwrap();
    let mut sheaves: Vec<(String, CellularSheaf)> = Vec::new();
    for (id, rho) in sample_reps("circle") {
        sheaves.push((format!("cylinder/{id}"), ok(pullback(&map, &ok(rep_to_sheaf(map.target(), &cl, &rho))?))?));
    }
    for name in ["rp2", "torus", "wedge"] {
        let x = arc(name);
        let c = constant_sheaf(&x, Q, 1);
        sheaves.push((format!("{name}/constant+constant"), ok(direct_sum(&c, &constant_sheaf(&x, Q, 2)))?));
    }
    for (id, f) in &sheaves {
        let x = f.complex().clone();
        let (_, l) = presentation(&x, 0).unwrap();
        let back = ok(rep_to_sheaf(&x, &l, &ok(sheaf_to_rep(&x, &l, f))?))?;
        ensure!(ok(sheaf_cohomology_all(&back))? == ok(sheaf_cohomology_all(f))?, "{id}: cohomology changed");
    }
    ensure!(count >= 10, "only {count} representations");
    Ok(format!("{count} representations, {} sheaves", sheaves.len()))
}

// 3
fn invariants_are_sections() -> Outcome {
    let reps = all_fixture_reps();
    for (name, id, rho) in &reps {
        let x = arc(name);
        let (_, l) = presentation(&x, 0).unwrap();
        let r = ok(invariants_match(&x, &l, rho))?;
        ensure!(r.equal, "{name}/{id}: E^G = {} but Γ = {}", r.invariants, r.global_sections);
    }
    Ok(format!("{} representations", reps.len()))
}

// 4
fn derived_is_cover_cohomology() -> Outcome {
    let mut checked = 0;
    for name in ["rp2", "sphere"] {
        let x = arc(name);
        let (p, l) = presentation(&x, 0).unwrap();
        let GroupOrder::Finite(_, table) = group_order(&p, 1000) else { return Err(format!("{name}: group not finite")) };
        let cover = ok(build_cover(&x, &l, &table))?;
        let total = cover.total();
        let mut sheaves = vec![constant_sheaf(&x, Z, 1), constant_sheaf(&x, Q, 1), constant_sheaf(&x, fp(2), 1)];
        for (_, rho) in sample_reps(name) {
            sheaves.push(ok(rep_to_sheaf(&x, &l, &rho))?);
        }
        for f in &sheaves {
            let up = ok(pullback(cover.projection(), f))?;
            for i in 0..=x.dimension() {
                let derived = ok(derived_quasicoherator(&x, f, i as i64, 1000))?.module;
                let direct = ok(sheaf_cohomology(&up, i as i64))?;
                ensure!(derived == direct, "{name} degree {i}: {derived} vs {direct}");
                checked += 1;
            }
        }
        // constant Z against the cover's homology through universal coefficients
        for i in 0..=x.dimension() {
            let free_part = ok(total.homology(i, Z))?.free_rank();
            let torsion = if i == 0 { Vec::new() } else { ok(total.homology(i - 1, Z))?.torsion().to_vec() };
            let uct = ok(FpModule::new(Z, free_part, torsion))?;
            let derived = ok(derived_quasicoherator(&x, &constant_sheaf(&x, Z, 1), i as i64, 1000))?.module;
            ensure!(derived == uct, "{name} degree {i}: {derived} vs universal coefficients {uct}");
        }
    }
    Ok(format!("{checked} (sheaf, degree) pairs on RP² and S²"))
}

// 5
fn asphericity_and_vanishing() -> Outcome {
    for name in ["circle", "wedge", "cone"] {
        let x = arc(name);
        let v = ok(asphericity_check(&x, Z, 1000))?;
        ensure!(matches!(v, AsphericityVerdict::Aspherical { .. }), "{name}: {v:?}");
        let mut sheaves = vec![constant_sheaf(&x, Z, 1)];
        let (_, l) = presentation(&x, 0).unwrap();
        for (_, rho) in sample_reps(name) {
            sheaves.push(ok(rep_to_sheaf(&x, &l, &rho))?);
        }
        for f in &sheaves {
            for i in 1..=2 {
                let m = ok(derived_quasicoherator(&x, f, i, 1000))?.module;
                ensure!(m.is_zero(), "{name}: R^{i}Qc = {m}");
            }
        }
    }
    for name in ["rp2", "sphere"] {
        let x = arc(name);
        let v = ok(asphericity_check(&x, Z, 1000))?;
        ensure!(v == AsphericityVerdict::NotAspherical { witness_degree: 2, module: free(Z, 1) }, "{name}: {v:?}");
        let m = ok(derived_quasicoherator(&x, &constant_sheaf(&x, Z, 1), 2, 1000))?.module;
        ensure!(m == free(Z, 1), "{name}: R²Qc(constant) = {m}");
    }
    Ok("circle, wedge, cone vanish; RP², S² have R²Qc = Z".into())
}

// 6
fn equivalence_consistency() -> Outcome {
    let limits = Limits { budget: 2000, size_cap: DEFAULT_SIZE_CAP };
    for name in fixtures::names() {
        let x = arc(name);
        let reps: Vec<(String, Representation)> = sample_reps(name).into_iter().filter(|(_, r)| r.ring() == Z).collect();
        let r = ok(bn_verdict(&x, Z, &reps, &[], 4, &limits))?;
        ensure!(r.consistent, "{name}: inconsistent report {:?}", r.summary);
    }
    let x = arc("rp2");
    let (p, _) = presentation(&x, 0).unwrap();
    let r = ok(bn_verdict(&x, Z, &[("trivial".into(), Representation::trivial(&p, Z, 1))], &[], 4, &limits))?;
    let s = &r.summary;
    ensure!(s.aspherical == Status::Fails && s.qc_vanishing == Status::Fails && s.cohomology_agrees == Status::Fails, "RP² summary {s:?}");
    let d4 = r.condition4.iter().find(|e| e.degree == 4).ok_or("no degree 4 entry")?;
    ensure!(d4.group_side == cyclic(2) && d4.sheaf_side.is_zero() && !d4.agree, "RP² degree 4: {d4:?}");
    let Condition3::Checked { entries } = &r.condition3 else { return Err("RP² condition 3 skipped".into()) };
    ensure!(entries.iter().any(|e| e.degree == 2 && !e.vanished), "RP² has no R²Qc witness");

    let x = arc("circle");
    let (p, _) = presentation(&x, 0).unwrap();
    let sign = Representation::from_scalars(&p, Z, &[-1]).unwrap();
    let r = ok(bn_verdict(&x, Z, &[("sign".into(), sign)], &[], 2, &limits))?;
    ensure!(r.consistent && r.summary.aspherical == Status::Holds, "circle summary {:?}", r.summary);
    let h1 = r.condition4.iter().find(|e| e.degree == 1).ok_or("no degree 1 entry")?;
    ensure!(h1.group_side == cyclic(2) && h1.sheaf_side == cyclic(2), "circle H¹: {h1:?}");
    Ok(format!("{} fixtures consistent; RP² fails all three, circle passes", fixtures::names().count()))
}

// 7
fn bar_versus_fox() -> Outcome {
    let mut compared = 0;
    for name in fixtures::names() {
        let x = arc(name);
        let (p, _) = presentation(&x, 0).unwrap();
        let GroupOrder::Finite(_, table) = group_order(&p, 1000) else { continue };
        let m = ok(multiplication_table(&table))?;
        for (id, rho) in sample_reps(name) {
            for n in 0..=1 {
                let bar = ok(bar_cohomology(&m, &rho, n, DEFAULT_SIZE_CAP))?;
                let (fox, flag) = ok(fox_cohomology(&p, &rho, n))?;
                ensure!(flag == Exactness::Exact && bar == fox, "{name}/{id} degree {n}: bar {bar} vs fox {fox}");
                compared += 1;
            }
        }
    }
    for order in [2u64, 3, 4] {
        let p = ok(GroupPresentation::new(1, vec![Word::generator(0).pow(order as i64)]))?;
        let GroupOrder::Finite(_, table) = group_order(&p, 100) else { return Err(format!("Z/{order} did not close")) };
        let m = ok(multiplication_table(&table))?;
        let rho = Representation::trivial(&p, Z, 1);
        let expected = [free(Z, 1), FpModule::zero(Z), cyclic(order), FpModule::zero(Z), cyclic(order)];
        for (n, want) in expected.iter().enumerate() {
            let got = ok(bar_cohomology(&m, &rho, n as i64, DEFAULT_SIZE_CAP))?;
            ensure!(&got == want, "H^{n}(Z/{order}, Z) = {got}");
        }
    }
    Ok(format!("{compared} bar/Fox comparisons; Z/2, Z/3, Z/4 through degree 4"))
}

// 8
fn e2_pages() -> Outcome {
    let limits = Limits::default();
    let x = arc("rp2");
    let f2 = fp(2);
    let page = ok(e2_page(&x, &constant_sheaf(&x, f2, 1), 4, 2, &limits))?;
    for p in 0..=4 {
        ensure!(page.entry(p, 0) == Some(&free(f2, 1)), "E^{p},0");
        ensure!(page.entry(p, 1).is_some_and(FpModule::is_zero), "E^{p},1");
        ensure!(page.entry(p, 2) == Some(&free(f2, 1)), "E^{p},2");
    }
    let abutment: Vec<usize> = page.checks.iter().map(|c| c.abutment_dimension).collect();
    ensure!(abutment == vec![1, 1, 1, 0, 0], "abutment {abutment:?}");
    ensure!(page.checks.iter().all(|c| c.inequality), "dimension inequality fails");
    for n in [3, 4] {
        ensure!(page.checks[n].differentials_nonzero, "degree {n} not flagged");
    }
    ensure!(!page.checks[0].differentials_nonzero && !page.checks[1].differentials_nonzero, "low degrees flagged");

    let s = arc("sphere");
    let page = ok(e2_page(&s, &constant_sheaf(&s, Q, 1), 2, 2, &limits))?;
    let trivial = Some(Collapse { reason: CollapseReason::TrivialGroup, holds: true });
    ensure!(page.checks.iter().all(|c| c.collapse == trivial), "sphere collapse {:?}", page.checks);
    for q in 0..=2 {
        ensure!(page.entry(0, q) == page.abutment.get(q), "sphere column p = 0 at q = {q}");
    }

    let cone = arc("cone");
    let page = ok(e2_page(&cone, &constant_sheaf(&cone, fp(3), 1), 3, 2, &limits))?;
    let aspherical = Some(Collapse { reason: CollapseReason::Aspherical, holds: true });
    ensure!(page.checks.iter().all(|c| c.collapse == aspherical), "cone collapse {:?}", page.checks);
    Ok("RP² two-row page, flags at n = 3, 4 (also n = 2); sphere and cone collapse".into())
}

// 9
fn homotopy_invariance() -> Outcome {
    let map = fixtures::map_by_name("cylinder_to_circle").unwrap();
    let (_, l) = presentation(map.target(), 0).unwrap();
    let reps = sample_reps("circle");
    for (id, rho) in &reps {
        let f = ok(rep_to_sheaf(map.target(), &l, rho))?;
        let up = ok(pullback(&map, &f))?;
        let below = padded(ok(sheaf_cohomology_all(&f))?, 3, rho.ring());
        let above = padded(ok(sheaf_cohomology_all(&up))?, 3, rho.ring());
        ensure!(below == above, "{id}: {below:?} vs {above:?}");
    }
    ensure!(reps.len() == 5, "expected 5 local systems");
    Ok(format!("{} local systems along cylinder → circle", reps.len()))
}

// 10
fn determinism() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["bn-check", "--fixture", "rp2", "--ring", "Z", "--max-degree", "4", "--budget", "1000"],
        &["e2-page", "--fixture", "rp2", "--ring", "Z/2", "--pmax", "4", "--qmax", "2"],
        &["qc", "--fixture", "rp2", "--ring", "Q"],
        &["pi1", "--fixture", "torus", "--budget", "500"],
    ];
    for args in runs {
        let run = || {
            let out = Command::new(env!("CARGO_BIN_EXE_sheafbn")).args(args).output().map_err(|e| e.to_string())?;
            ensure!(out.status.success(), "{args:?} exited with {:?}", out.status.code());
            Ok::<_, String>(out.stdout)
        };
        let first = run()?;
        for _ in 0..2 {
            ensure!(run()? == first, "{args:?}: output differs between runs");
        }
    }
    Ok("4 commands × 3 runs byte-identical".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("classical cohomology", classical_cohomology),
        ("representation/local-system round trip", round_trip),
        ("invariants equal global sections", invariants_are_sections),
        ("derived quasicoherator is cover cohomology", derived_is_cover_cohomology),
        ("asphericity versus R^iQc vanishing", asphericity_and_vanishing),
        ("equivalence report consistency", equivalence_consistency),
        ("bar versus Fox; cyclic groups", bar_versus_fox),
        ("E2 page", e2_pages),
        ("homotopy invariance", homotopy_invariance),
        ("determinism of CLI output", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [exact, {ms} ms]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [exact, {ms} ms]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
