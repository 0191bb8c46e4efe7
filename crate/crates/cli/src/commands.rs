use std::collections::BTreeMap;
use std::fmt::Write;

use anyhow::{Context, Result};
use bgcrys::barstack::{cyclic_resolution_homology, group_homology as bar_homology, kan_classifying, Budget};
use bgcrys::dieudonne::{catalog, module_from_presentation, CatalogEntry, CatalogModule};
use bgcrys::exactalg::{Field, WittVector};
use bgcrys::homology::{report_json, Coefficients, FinAbGroup};
use bgcrys::specseq::{run_spectral_sequence, synthetic_double_complex, synthetic_rows};
use bgcrys::stackcoh::{
    abelian_model_stack_cohomology, compare_with_dieudonne, constant_group_stack_cohomology, group_cochains,
    pdivisible_stack_cohomology, CoefficientOracle, StackCohomologyResult,
};
use bgcrys::verify::run_suite;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::output::{csv_groups, csv_pairs, text_groups, Format};
use crate::{
    parse_orders, require, to_pretty, usage, DieudonneArgs, GroupHomologyArgs, Outcome, SpecseqArgs, StackArgs,
    VerifyArgs, WittArgs,
};

fn done(text: String) -> Result<Outcome> {
    Ok(Outcome { text, pass: true })
}

fn groups_json(groups: &BTreeMap<i64, FinAbGroup>) -> Value {
    Value::Object(
        groups
            .iter()
            .map(|(n, g)| (n.to_string(), Value::from(g.to_string())))
            .collect(),
    )
}

fn parse_coefficients(s: Option<&str>) -> Result<Coefficients> {
    match s {
        None | Some("Z") | Some("z") => Ok(Coefficients::Integers),
        Some(t) => {
            let m: u64 = t
                .parse()
                .map_err(|_| usage(format!("coefficients must be Z or an integer, got {t:?}")))?;
            if m < 2 {
                return Err(usage("coefficient modulus must be at least 2"));
            }
            Ok(Coefficients::Mod(BigInt::from(m)))
        }
    }
}

fn coefficients_name(c: &Coefficients) -> String {
    match c.modulus() {
        None => "Z".into(),
        Some(m) => format!("Z/{m}"),
    }
}

fn parse_witt(field: &Field, len: usize, s: &str) -> Result<WittVector> {
    let s = s.trim();
    if s.starts_with('[') {
        let v: Value = serde_json::from_str(s).map_err(|e| usage(format!("bad Witt vector {s:?}: {e}")))?;
        let w = WittVector::from_json(field, &v)?;
        if w.len() != len {
            return Err(usage(format!("Witt vector {s} has length {}, expected {len}", w.len())));
        }
        Ok(w)
    } else {
        let n: i64 = s.parse().map_err(|_| usage(format!("bad Witt vector {s:?}")))?;
        Ok(WittVector::from_integer(field, len, n))
    }
}

fn witt_json(w: &WittVector) -> Value {
    let mut v = json!({ "coordinates": w.to_json() });
    if w.field().degree() == 1 {
        if let Ok(n) = w.to_integer() {
            v["integer"] = Value::from(n.to_string());
        }
    }
    v
}

pub fn witt(a: &WittArgs, format: Format) -> Result<Outcome> {
    let p = require(&a.p, "p")?;
    let d = a.d.unwrap_or(1);
    let len = require(&a.witt_length, "witt-length")?;
    let field = Field::new(p, d)?;
    let op = a.op.clone().unwrap_or_else(|| "add".into());
    if op == "axioms" {
        return witt_axioms(&field, len, a.samples.unwrap_or(100), a.seed.unwrap_or(0), format);
    }
    let x = parse_witt(&field, len, &require(&a.a, "a")?)?;
    let y = match &a.b {
        Some(b) => Some(parse_witt(&field, len, b)?),
        None => None,
    };
    let need_b = || y.clone().ok_or_else(|| usage(format!("--op {op} needs --b")));
    let result = match op.as_str() {
        "add" => &x + &need_b()?,
        "sub" => &x - &need_b()?,
        "mul" => &x * &need_b()?,
        "neg" => -&x,
        "frobenius" => x.frobenius(),
        "verschiebung" => x.verschiebung(),
        "inverse" => x.inverse()?,
        other => return Err(usage(format!("unknown --op {other:?}"))),
    };
    let out = json!({
        "p": p,
        "d": d,
        "N": len,
        "op": op,
        "a": witt_json(&x),
        "b": y.as_ref().map(witt_json),
        "result": witt_json(&result),
    });
    match format {
        Format::Json => done(to_pretty(&out)?),
        Format::Csv => {
            let mut rows = vec![("op".to_string(), op.clone())];
            for (i, c) in result.coords().iter().enumerate() {
                let cs: Vec<String> = c.coeffs().iter().map(|x| x.to_string()).collect();
                rows.push((format!("result[{i}]"), cs.join(" ")));
            }
            if let Some(n) = out["result"].get("integer") {
                rows.push(("result_integer".into(), n.as_str().unwrap_or_default().to_string()));
            }
            done(csv_pairs(&rows))
        }
        Format::Text => {
            let mut s = format!("{op} in W_{len}(F_{}) = {:?}\n", field.order(), result);
            if let Some(n) = out["result"].get("integer") {
                let _ = writeln!(s, "as an integer mod {p}^{len}: {}", n.as_str().unwrap_or_default());
            }
            done(s)
        }
    }
}

fn witt_axioms(field: &Field, len: usize, samples: usize, seed: u64, format: Format) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = WittVector::zero(field, len);
    let one = WittVector::one(field, len);
    let mut failures = Vec::new();
    for i in 0..samples {
        let a = WittVector::random(field, len, &mut rng);
        let b = WittVector::random(field, len, &mut rng);
        let c = WittVector::random(field, len, &mut rng);
        let laws = [
            ("additive associativity", &(&a + &b) + &c == &a + &(&b + &c)),
            ("multiplicative associativity", &(&a * &b) * &c == &a * &(&b * &c)),
            ("additive commutativity", &a + &b == &b + &a),
            ("multiplicative commutativity", &a * &b == &b * &a),
            ("distributivity", &a * &(&b + &c) == &(&a * &b) + &(&a * &c)),
            ("zero", &a + &zero == a),
            ("one", &a * &one == a),
            ("negation", (&a + &(-&a)).is_zero()),
        ];
        for (law, ok) in laws {
            if !ok {
                failures.push(json!({"sample": i, "law": law, "a": a.to_json(), "b": b.to_json(), "c": c.to_json()}));
            }
        }
    }
    let pass = failures.is_empty();
    let out = json!({
        "p": field.characteristic(),
        "d": field.degree(),
        "N": len,
        "samples": samples,
        "seed": seed,
        "pass": pass,
        "failures": failures,
    });
    let text = match format {
        Format::Json => to_pretty(&out)?,
        Format::Csv => csv_pairs(&[
            ("samples".into(), samples.to_string()),
            ("seed".into(), seed.to_string()),
            ("pass".into(), pass.to_string()),
        ]),
        Format::Text => format!(
            "{samples} random triples in W_{len}(F_{}), seed {seed}: {}\n",
            field.order(),
            if pass { "all ring axioms hold" } else { "FAILURES" }
        ),
    };
    Ok(Outcome { text, pass })
}

pub fn dieudonne(a: &DieudonneArgs, format: Format) -> Result<Outcome> {
    let p = require(&a.p, "p")?;
    let field = Field::new(p, a.d.unwrap_or(1))?;
    let len = require(&a.witt_length, "witt-length")?;
    let (label, module) = match (&a.catalog, &a.presentation) {
        (Some(name), None) => {
            let entry: CatalogEntry = name.parse()?;
            (entry.to_string(), catalog(&entry, &field, len)?)
        }
        (None, Some(pres)) => {
            let mn = parse_orders(pres)?;
            let [m, n] = mn[..] else {
                return Err(usage("--presentation takes m,n"));
            };
            let module = module_from_presentation(&field, m as usize, n as usize, len)?;
            (format!("D/(D F^{m} + D V^{n})"), CatalogModule::Finite(module))
        }
        _ => return Err(usage("give exactly one of --catalog and --presentation")),
    };
    let mut out = json!({ "module": label, "p": p, "N": len, "data": module.to_json() });
    let mut pass = true;
    let mut summary = Vec::new();
    match &module {
        CatalogModule::Finite(m) => {
            let axioms = m.check_axioms();
            pass &= axioms.pass;
            out["w_length"] = Value::from(m.w_length());
            out["exponents"] = json!(m.exponents());
            out["axioms"] = json!({ "pass": axioms.pass, "checks": axioms.checks });
            summary.push(("w_length".to_string(), m.w_length().to_string()));
            summary.push(("axioms".to_string(), axioms.pass.to_string()));
        }
        CatalogModule::PDivisible(m) => {
            let r = m.check()?;
            pass &= r.p_in_image;
            summary.push(("height".to_string(), r.height.to_string()));
            summary.push(("dimension".to_string(), r.dimension.to_string()));
            out["report"] = serde_json::to_value(&r)?;
        }
    }
    if let Some(name) = &a.catalog {
        let entry: CatalogEntry = name.parse()?;
        if entry.is_etale() {
            let cmp = compare_with_dieudonne(&entry, &field, len)?;
            pass &= cmp.equal;
            summary.push(("stack H^2 agrees".to_string(), cmp.equal.to_string()));
            out["comparison"] = serde_json::to_value(&cmp)?;
        }
    }
    let text = match format {
        Format::Json => to_pretty(&out)?,
        Format::Csv => csv_pairs(&summary),
        Format::Text => {
            let mut s = format!("{label} over W_{len}(F_{})\n", field.order());
            for (k, v) in &summary {
                let _ = writeln!(s, "  {k}: {v}");
            }
            s
        }
    };
    Ok(Outcome { text, pass })
}

pub fn group_homology(a: &GroupHomologyArgs, format: Format) -> Result<Outcome> {
    let orders = parse_orders(&require(&a.group, "group")?)?;
    let g = FinAbGroup::from_orders(&orders);
    let max = a.max_degree.unwrap_or(3);
    let coeffs = parse_coefficients(a.coefficients.as_deref())?;
    let mut budget = Budget::default();
    if let Some(m) = a.max_group_order {
        budget.max_group_order = m;
    }
    if let Some(m) = a.max_generators {
        budget.max_generators = m;
    }
    budget.max_degree = budget.max_degree.max(max + 1);
    let level = a.eilenberg_maclane.unwrap_or(1);
    let method = a.method.clone().unwrap_or_else(|| "normalized-bar".into());
    let groups = if level > 1 {
        if !matches!(coeffs, Coefficients::Integers) {
            return Err(usage("K(G, n) for n > 1 is computed with Z coefficients only"));
        }
        kan_classifying(&g, level, max, &budget)?
            .homology
            .into_iter()
            .filter(|(n, _)| *n <= max as i64)
            .collect()
    } else {
        match method.as_str() {
            "bar" => bar_homology(&g, max, &coeffs, false, &budget)?,
            "normalized-bar" => bar_homology(&g, max, &coeffs, true, &budget)?,
            "periodic" => {
                let [n] = orders[..] else {
                    return Err(usage("the periodic resolution needs a cyclic group"));
                };
                cyclic_resolution_homology(n, &coeffs, max)?
            }
            other => return Err(usage(format!("unknown --method {other:?}"))),
        }
    };
    let out = json!({
        "group": g.to_string(),
        "eilenberg_maclane_level": level,
        "coefficients": coefficients_name(&coeffs),
        "method": if level > 1 { "iterated classifying construction".to_string() } else { method },
        "groups": groups_json(&groups),
        "homology": report_json(&groups),
    });
    done(match format {
        Format::Json => to_pretty(&out)?,
        Format::Csv => csv_groups(&[("H", &groups)]),
        Format::Text => text_groups("H", false, &groups),
    })
}

pub fn specseq(a: &SpecseqArgs, format: Format) -> Result<Outcome> {
    let max_total = a.max_total.unwrap_or(4);
    let coeffs = parse_coefficients(a.coefficients.as_deref())?;
    let need = max_total + 1;
    let chosen = [a.abelian_rank.is_some(), a.constant_group.is_some(), a.synthetic];
    if chosen.iter().filter(|&&c| c).count() != 1 {
        return Err(usage(
            "give exactly one of --abelian-rank, --constant-group and --synthetic",
        ));
    }
    let (label, run) = if let Some(r) = a.abelian_rank {
        let oracle = CoefficientOracle::AbelianModel { rank: r };
        let rows = (0..=need)
            .map(|j| oracle.row(j, need - j + 1))
            .collect::<bgcrys::error::Result<Vec<_>>>()?;
        (
            format!("abelian model, rank {r}"),
            run_spectral_sequence(&rows, &coeffs, max_total, None)?,
        )
    } else if let Some(orders) = &a.constant_group {
        let g = FinAbGroup::from_orders(&parse_orders(orders)?);
        let row = bgcrys::specseq::alternating_face_complex(&group_cochains(&g, need + 1)?)?;
        (
            format!("constant group {g}"),
            run_spectral_sequence(&[row], &coeffs, max_total, None)?,
        )
    } else {
        let dc = synthetic_double_complex();
        let max_total = max_total.min(2);
        (
            "synthetic double complex".to_string(),
            run_spectral_sequence(&synthetic_rows(), &coeffs, max_total, Some(&dc))?,
        )
    };
    let mut out = run.to_json();
    out["source"] = Value::from(label.clone());
    out["coefficients"] = Value::from(coefficients_name(&coeffs));
    let abutment: BTreeMap<i64, FinAbGroup> = run
        .abutment
        .iter()
        .filter_map(|(n, x)| x.group.clone().map(|g| (*n as i64, g)))
        .collect();
    done(match format {
        Format::Json => to_pretty(&out)?,
        Format::Csv => {
            let pages: Vec<(String, BTreeMap<i64, FinAbGroup>)> = run
                .pages
                .iter()
                .flat_map(|page| {
                    let mut by_row: BTreeMap<usize, BTreeMap<i64, FinAbGroup>> = BTreeMap::new();
                    for ((i, j), g) in &page.entries {
                        by_row.entry(*j).or_default().insert(*i as i64, g.clone());
                    }
                    by_row
                        .into_iter()
                        .map(move |(j, m)| (format!("E_{} row {j}", page.r), m))
                })
                .collect();
            let mut sections: Vec<(&str, &BTreeMap<i64, FinAbGroup>)> =
                pages.iter().map(|(s, m)| (s.as_str(), m)).collect();
            sections.push(("abutment", &abutment));
            csv_groups(&sections)
        }
        Format::Text => {
            let mut s = format!(
                "{label}, {} coefficients, {:?}\n",
                coefficients_name(&coeffs),
                run.status
            );
            for page in &run.pages {
                let _ = writeln!(s, "E_{}:", page.r);
                for ((i, j), g) in &page.entries {
                    if !g.is_trivial() {
                        let _ = writeln!(s, "  ({i},{j}) {g}");
                    }
                }
            }
            let _ = writeln!(s, "certificate holds: {}", run.certificate.holds);
            s + &text_groups("H", true, &abutment)
        }
    })
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<i64>>> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| usage(format!("bad matrix entry {t:?}")))
                })
                .collect()
        })
        .collect()
}

pub fn stack_cohomology(a: &StackArgs, format: Format) -> Result<Outcome> {
    let p = require(&a.p, "p")?;
    let n = require(&a.witt_length, "witt-length")?;
    let bound = a.max_degree.unwrap_or(2);
    let chosen = [a.constant_group.is_some(), a.abelian.is_some(), a.pdivisible.is_some()];
    if chosen.iter().filter(|&&c| c).count() != 1 {
        return Err(usage(
            "give exactly one of --constant-group, --abelian and --pdivisible",
        ));
    }
    let r: StackCohomologyResult = if let Some(orders) = &a.constant_group {
        let g = FinAbGroup::from_orders(&parse_orders(orders)?);
        let mut budget = Budget::default();
        if let Some(m) = a.max_group_order {
            budget = budget.with_group_cap(m);
        }
        constant_group_stack_cohomology(&g, p, n, bound, &budget)?
    } else if let Some(g) = a.abelian {
        let f = a.frobenius.as_deref().map(parse_matrix).transpose()?;
        abelian_model_stack_cohomology(g, p, n, bound, f.as_deref())?
    } else {
        pdivisible_stack_cohomology(a.pdivisible.unwrap_or_default(), p, n, bound)?
    };
    let text = match format {
        Format::Json => to_pretty(&r.to_json())?,
        Format::Csv => csv_groups(&[("H", &r.groups), ("stable", &r.stable)]),
        Format::Text => {
            let mut s = format!("{}, p = {p}, N = {n}\n", r.kind);
            for (deg, g) in &r.groups {
                let _ = write!(s, "H^{deg} = {g}");
                if let Some(st) = r.stable.get(deg) {
                    let _ = write!(s, "  (stable {st})");
                }
                s.push('\n');
            }
            for c in &r.checks {
                let _ = writeln!(s, "[{}] {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
            }
            s
        }
    };
    Ok(Outcome { text, pass: r.pass() })
}

pub fn verify(a: &VerifyArgs, format: Format) -> Result<Outcome> {
    let suite = a.suite.clone().unwrap_or_else(|| "all".into());
    let report = run_suite(&suite)?;
    let dir = a.out.clone().unwrap_or_else(|| ".".into());
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join("report.json");
    let body = to_pretty(&report.to_json())?;
    std::fs::write(&path, &body).with_context(|| format!("writing {}", path.display()))?;
    let text = match format {
        Format::Json => body,
        Format::Csv => {
            let mut s = String::from("id,module,pass,detail\n");
            for x in &report.assertions {
                let _ = writeln!(
                    s,
                    "{},{},{},\"{}\"",
                    x.id,
                    x.module,
                    x.pass,
                    x.detail.replace('"', "\"\"")
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for x in &report.assertions {
                let _ = writeln!(
                    s,
                    "[{}] {:>2} {}: {}",
                    if x.pass { "pass" } else { "FAIL" },
                    x.id,
                    x.module,
                    x.statement
                );
            }
            let _ = writeln!(
                s,
                "{}/{} passed; report written to {}",
                report.passed,
                report.total,
                path.display()
            );
            s
        }
    };
    Ok(Outcome {
        text,
        pass: report.pass,
    })
}
