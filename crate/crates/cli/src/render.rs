//! Human-readable tables for `--format text`.

use std::fmt::Write;

use sheafbn::bncheck::{AsphericityVerdict, BnReport, Certificate, Condition3, E2Page};
use sheafbn::exactalg::FpModule;
use sheafbn::fundgroup::GroupPresentation;
use sheafbn::groupcoh::Exactness;
use sheafbn::localsys::GModule;

pub fn degree_table(prefix: &str, entries: &[(usize, FpModule)]) -> String {
    entries.iter().map(|(n, m)| format!("{prefix}{n} = {m}\n")).collect()
}

fn word(w: &sheafbn::fundgroup::Word) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let letters: Vec<String> = w.letters().iter().map(|&l| if l > 0 { format!("g{}", l - 1) } else { format!("g{}^-1", -l - 1) }).collect();
    letters.join(" ")
}

pub fn pi1(p: &GroupPresentation, order: Option<usize>, ab: &FpModule) -> String {
    let mut s = format!("generators: {}\n", p.generator_count());
    for (i, r) in p.relators().iter().enumerate() {
        let _ = writeln!(s, "  r{i}: {}", word(r));
    }
    let _ = match order {
        Some(n) => writeln!(s, "order: {n}"),
        None => writeln!(s, "order: unknown (enumeration budget exceeded)"),
    };
    let _ = writeln!(s, "abelianization: {ab}");
    s
}

fn flag(f: Exactness) -> &'static str {
    match f {
        Exactness::Exact => "exact",
        Exactness::PresentationComplexOnly => "presentation complex only",
    }
}

pub fn group_cohomology(resolution: &str, rows: &[(usize, FpModule, Exactness)]) -> String {
    let mut s = format!("resolution: {resolution}\n");
    for (n, m, f) in rows {
        let _ = writeln!(s, "H^{n} = {m}  [{}]", flag(*f));
    }
    s
}

pub fn qc(rows: &[(usize, GModule)]) -> String {
    let mut s = String::new();
    for (n, g) in rows {
        let action = match &g.action {
            Some(rho) if rho.is_trivial() => "trivial action",
            Some(_) => "nontrivial action",
            None => "action not computed",
        };
        let _ = writeln!(s, "R^{n}Qc = {}  ({action})", g.module);
    }
    s
}

pub fn asphericity(v: &AsphericityVerdict) -> String {
    match v {
        AsphericityVerdict::Aspherical { certificate: Certificate::Dimension1 } => "aspherical (dimension at most 1)".into(),
        AsphericityVerdict::Aspherical { certificate: Certificate::FiniteCoverVanishing(d) } => {
            format!("aspherical (universal cover homology vanishes in degrees {d:?})")
        }
        AsphericityVerdict::NotAspherical { witness_degree, module } => {
            format!("not aspherical: H_{witness_degree} of the universal cover is {module}")
        }
        AsphericityVerdict::Unknown { reason } => format!("unknown: {reason}"),
    }
}

pub fn bn_report(r: &BnReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "ring: {}   group order: {}", r.ring, r.group_order.map_or("unknown".into(), |n| n.to_string()));
    let _ = writeln!(s, "asphericity: {}", asphericity(&r.asphericity));
    let _ = writeln!(
        s,
        "conditions: aspherical {:?}, qc vanishing {:?}, cohomology agrees {:?}",
        r.summary.aspherical, r.summary.qc_vanishing, r.summary.cohomology_agrees
    );
    match &r.condition3 {
        Condition3::Skipped { reason } => {
            let _ = writeln!(s, "R^iQc: skipped ({reason})");
        }
        Condition3::Checked { entries } => {
            for e in entries.iter().filter(|e| !e.vanished) {
                let _ = writeln!(s, "R^{}Qc({}) = {}", e.degree, e.sheaf, e.module);
            }
        }
    }
    let _ = writeln!(s, "{:<12} {:>6} | {:<16} | {:<16} | agree", "rep", "degree", "group side", "sheaf side");
    for e in &r.condition4 {
        let mark = if e.flag == Exactness::Exact { "" } else { " (flagged)" };
        let _ = writeln!(
            s,
            "{:<12} {:>6} | {:<16} | {:<16} | {}{mark}",
            e.representation,
            e.degree,
            e.group_side.to_string(),
            e.sheaf_side.to_string(),
            e.agree
        );
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    let _ = writeln!(s, "consistent: {}", r.consistent);
    s
}

pub fn e2(page: &E2Page) -> String {
    let mut s = format!("group order {}, window p <= {}, q <= {}\n", page.group_order, page.pmax, page.qmax);
    for q in (0..=page.qmax).rev() {
        let cells: Vec<String> =
            (0..=page.pmax).map(|p| format!("{:>8}", page.entry(p, q).map_or("?".into(), |m| m.to_string()))).collect();
        let _ = writeln!(s, "q={q:<2}|{}", cells.join(""));
    }
    let axis: Vec<String> = (0..=page.pmax).map(|p| format!("{:>8}", format!("p={p}"))).collect();
    let _ = writeln!(s, "    |{}", axis.join(""));
    for c in &page.checks {
        let mut flags = vec![if c.inequality { "sum >= dim H^n" } else { "INEQUALITY FAILS" }];
        if !c.window_complete {
            flags.push("window incomplete");
        }
        if c.differentials_nonzero {
            flags.push("differentials must be nonzero");
        }
        if let Some(col) = c.collapse {
            flags.push(if col.holds { "collapse equality holds" } else { "COLLAPSE EQUALITY FAILS" });
        }
        let _ = writeln!(s, "n={}: E2 {} vs H^n {}  [{}]", c.degree, c.e2_dimension, c.abutment_dimension, flags.join(", "));
    }
    s
}
