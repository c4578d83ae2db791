use serde_json::{json, Value};
use sheafbn::bncheck::{asphericity_check, bn_verdict, derived_quasicoherator, e2_page, Limits};
use sheafbn::cellsheaf::{is_locally_constant, sheaf_cohomology_all};
use sheafbn::covers::build_cover;
use sheafbn::exactalg::FpModule;
use sheafbn::fundgroup::{group_order, presentation, GroupOrder};
use sheafbn::groupcoh::{bar_cohomology, fox_cohomology, multiplication_table, Exactness};
use sheafbn::localsys::{rep_to_sheaf, Representation};
use sheafbn::Error;

use crate::input::{self, CliResult};
use crate::{exit, render, Command, Common, Format};

pub struct Output {
    pub body: String,
    pub code: u8,
}

fn limits(c: &Common) -> Limits {
    Limits { budget: c.budget, size_cap: c.size_cap }
}

fn degrees(single: Option<i64>, all: usize) -> CliResult<Vec<usize>> {
    match single {
        Some(n) if n < 0 => Err(Error::DegreeNegative(n).into()),
        Some(n) => Ok(vec![n as usize]),
        None => Ok((0..=all).collect()),
    }
}

fn modules_by_degree(modules: &[FpModule], wanted: &[usize], ring: sheafbn::exactalg::RingSpec) -> Vec<(usize, FpModule)> {
    wanted.iter().map(|&n| (n, modules.get(n).cloned().unwrap_or_else(|| FpModule::zero(ring)))).collect()
}

fn degree_list(entries: &[(usize, FpModule)]) -> Value {
    Value::Array(entries.iter().map(|(n, m)| json!({"degree": n, "module": m})).collect())
}

pub fn run(cmd: &Command) -> CliResult<Output> {
    let (common, value, text, code) = match cmd {
        Command::Homology(c) => {
            let x = input::complex(c)?;
            let entries = (0..=x.dimension()).map(|n| Ok((n, x.homology(n, c.ring)?))).collect::<CliResult<Vec<_>>>()?;
            let text = render::degree_table("H_", &entries);
            (c, json!({"ring": c.ring, "homology": degree_list(&entries)}), text, 0)
        }
        Command::Pi1(c) => {
            let x = input::complex(c)?;
            let (p, l) = presentation(&x, 0)?;
            let order = match group_order(&p, c.budget) {
                GroupOrder::Finite(n, _) => Some(n),
                GroupOrder::Unknown => None,
            };
            let edges: Vec<(usize, usize)> = (0..p.generator_count()).map(|g| l.generator_edge(g)).collect();
            let value = json!({
                "presentation": p,
                "generator_edges": edges,
                "order": order,
                "abelianization": p.abelianization(),
            });
            let text = render::pi1(&p, order, &p.abelianization());
            (c, value, text, 0)
        }
        Command::Cover(c) => {
            let x = input::complex(c)?;
            let (p, l) = presentation(&x, 0)?;
            let GroupOrder::Finite(n, table) = group_order(&p, c.budget) else {
                return Err(Error::InfiniteOrUnknownGroup.into());
            };
            let cover = build_cover(&x, &l, &table)?;
            let mut value = cover.to_json();
            value["group_order"] = json!(n);
            let total = cover.total();
            let text = format!(
                "universal cover: {n} sheets, {} vertices, dimension {}, euler characteristic {}",
                total.vertex_count(),
                total.dimension(),
                total.euler_characteristic()
            );
            (c, value, text, 0)
        }
        Command::SheafCohomology(s) => {
            let x = input::complex(&s.common)?;
            let (_, l) = presentation(&x, 0)?;
            let f = input::selected_sheaf(s, &x, &l)?;
            let all = sheaf_cohomology_all(&f)?;
            let entries = modules_by_degree(&all, &degrees(s.degree, x.dimension())?, f.ring());
            let value = json!({"ring": f.ring(), "locally_constant": is_locally_constant(&f)?, "cohomology": degree_list(&entries)});
            (&s.common, value, render::degree_table("H^", &entries), 0)
        }
        Command::RepCohomology(r) => {
            let x = input::complex(&r.common)?;
            let (p, l) = presentation(&x, 0)?;
            let rho = rep_or_trivial(r.rep.as_deref(), &p, &r.common)?;
            let all = sheaf_cohomology_all(&rep_to_sheaf(&x, &l, &rho)?)?;
            let entries = modules_by_degree(&all, &degrees(r.degree, r.max_degree)?, rho.ring());
            (&r.common, json!({"ring": rho.ring(), "cohomology": degree_list(&entries)}), render::degree_table("H^", &entries), 0)
        }
        Command::GroupCohomology(r) => {
            let x = input::complex(&r.common)?;
            let (p, _) = presentation(&x, 0)?;
            let rho = rep_or_trivial(r.rep.as_deref(), &p, &r.common)?;
            let wanted = degrees(r.degree, r.max_degree)?;
            let mut rows = Vec::new();
            let resolution = match group_order(&p, r.common.budget) {
                GroupOrder::Finite(_, table) => {
                    let m = multiplication_table(&table)?;
                    for &n in &wanted {
                        rows.push((n, bar_cohomology(&m, &rho, n as i64, r.common.size_cap)?, Exactness::Exact));
                    }
                    "bar"
                }
                GroupOrder::Unknown => {
                    // the presentation complex only reaches degree 2
                    let top = if r.degree.is_some() { usize::MAX } else { 2 };
                    for &n in wanted.iter().filter(|&&n| n <= top) {
                        let (module, flag) = fox_cohomology(&p, &rho, n as i64)?;
                        rows.push((n, module, flag));
                    }
                    "fox"
                }
            };
            let entries: Vec<Value> = rows.iter().map(|(n, m, f)| json!({"degree": n, "module": m, "flag": f})).collect();
            let text = render::group_cohomology(resolution, &rows);
            (&r.common, json!({"ring": rho.ring(), "resolution": resolution, "cohomology": entries}), text, 0)
        }
        Command::Qc(s) => {
            let x = input::complex(&s.common)?;
            let (_, l) = presentation(&x, 0)?;
            let f = input::selected_sheaf(s, &x, &l)?;
            let mut rows = Vec::new();
            for n in degrees(s.degree, x.dimension())? {
                rows.push((n, derived_quasicoherator(&x, &f, n as i64, s.common.budget)?));
            }
            let entries: Vec<Value> = rows.iter().map(|(n, g)| json!({"degree": n, "qc": g.to_json()})).collect();
            let text = render::qc(&rows);
            (&s.common, json!({"ring": f.ring(), "derived": entries}), text, 0)
        }
        Command::Aspherical(c) => {
            let x = input::complex(c)?;
            let verdict = asphericity_check(&x, c.ring, c.budget)?;
            let text = render::asphericity(&verdict);
            (c, serde_json::to_value(&verdict).expect("verdict serializes"), text, 0)
        }
        Command::BnCheck(b) => {
            let c = &b.common;
            let x = input::complex(c)?;
            let (p, _) = presentation(&x, 0)?;
            let mut reps = Vec::new();
            for arg in &b.rep {
                let (id, path) = input::labeled(arg);
                reps.push((id, input::representation(&path, &p)?));
            }
            if reps.is_empty() {
                reps.push(("trivial".to_string(), Representation::trivial(&p, c.ring, 1)));
            }
            let mut sheaves = Vec::new();
            for arg in &b.sheaf {
                let (id, path) = input::labeled(arg);
                sheaves.push((id, input::sheaf(&path, &x)?));
            }
            let report = bn_verdict(&x, c.ring, &reps, &sheaves, b.max_degree, &limits(c))?;
            let code = if report.consistent { 0 } else { exit::INCONSISTENT };
            (c, report.to_json(), render::bn_report(&report), code)
        }
        Command::E2Page(e) => {
            let s = &e.sheaf;
            let x = input::complex(&s.common)?;
            let (_, l) = presentation(&x, 0)?;
            let f = input::selected_sheaf(s, &x, &l)?;
            let page = e2_page(&x, &f, e.pmax, e.qmax, &limits(&s.common))?;
            (&s.common, page.to_json(), render::e2(&page), 0)
        }
    };
    let body = match common.format {
        Format::Json => serde_json::to_string(&value).expect("values serialize"),
        Format::Text => text.trim_end().to_string(),
    };
    Ok(Output { body, code })
}

fn rep_or_trivial(path: Option<&std::path::Path>, p: &sheafbn::fundgroup::GroupPresentation, c: &Common) -> CliResult<Representation> {
    match path {
        Some(path) => input::representation(path, p),
        None => Ok(Representation::trivial(p, c.ring, 1)),
    }
}
