use std::collections::BTreeMap;
use std::path::Path;

use delpezzo::cycles::tame::TameComponentReport;
use delpezzo::cycles::CycleError;
use delpezzo::degeneration::Replay;
use delpezzo::*;
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::report::Claim;
use crate::CliError;

pub type Section = (Vec<Claim>, Value);

fn d(ctx: DelPezzoContext) -> String {
    format!("d{}", ctx.degree())
}

pub fn enumerate(ctxs: &[DelPezzoContext]) -> Section {
    let mut claims = Vec::new();
    let mut payload = Vec::new();
    for &ctx in ctxs {
        let curves = enumerate_neg_one::<i64>(ctx);
        let expected = expected_neg_one_count(ctx.degree()).unwrap_or(0);
        claims.push(Claim::new(
            format!("{}/count", d(ctx)),
            expected,
            curves.len(),
        ));
        payload.push(json!({"degree": ctx.degree(), "count": curves.len(), "curves": curves}));
    }
    (claims, Value::Array(payload))
}

pub fn enumerate_csv(ctxs: &[DelPezzoContext]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["degree", "id", "type", "class"])
        .map_err(io)?;
    for &ctx in ctxs {
        for c in enumerate_neg_one::<i64>(ctx) {
            w.write_record([
                ctx.degree().to_string(),
                c.id().to_string(),
                c.curve_type().to_string(),
                c.class().to_string(),
            ])
            .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn census_text(census: &BTreeMap<CurveKind, usize>) -> String {
    census
        .iter()
        .filter(|(_, n)| **n > 0)
        .map(|(k, n)| format!("{k} {n}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Census predicted by counting index choices, for the two degrees where every
/// type occurs.
fn predicted_census(degree: u32) -> Option<BTreeMap<CurveKind, usize>> {
    use CurveKind::*;
    let binom = |n: usize, k: usize| (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1));
    let table: Vec<(CurveKind, usize)> = match degree {
        1 => vec![
            (Exceptional, 8),
            (Line, binom(8, 2)),
            (Conic, binom(8, 5)),
            (Cubic, 8 * 7),
            (Quartic, binom(8, 3)),
            (Quintic, binom(8, 6)),
            (Sextic, 8),
        ],
        2 => vec![
            (Exceptional, 7),
            (Line, binom(7, 2)),
            (Conic, binom(7, 5)),
            (Cubic, 7),
        ],
        _ => return None,
    };
    Some(table.into_iter().collect())
}

pub fn census(ctxs: &[DelPezzoContext]) -> Section {
    let mut claims = Vec::new();
    let mut payload = Vec::new();
    for &ctx in ctxs {
        let census = type_census(ctx);
        let total: usize = census.values().sum();
        let expected = expected_neg_one_count(ctx.degree()).unwrap_or(0);
        claims.push(Claim::new(format!("{}/total", d(ctx)), expected, total));
        if let Some(predicted) = predicted_census(ctx.degree()) {
            claims.push(Claim::new(
                format!("{}/types", d(ctx)),
                census_text(&predicted),
                census_text(&census),
            ));
        }
        payload.push(json!({"degree": ctx.degree(), "total": total, "census": census}));
    }
    (claims, Value::Array(payload))
}

pub fn incidence(ctxs: &[DelPezzoContext]) -> Result<Section, CliError> {
    let mut claims = Vec::new();
    let mut payload = Vec::new();
    for &ctx in ctxs {
        let g = Graph::for_degree(ctx)?;
        let meets: Vec<usize> = (0..g.len())
            .map(|i| g.meets_count(i))
            .collect::<Result<_, _>>()?;
        let histogram = g.histogram();
        claims.push(Claim::new(
            format!("{}/symmetric", d(ctx)),
            true,
            g.is_symmetric(),
        ));
        let uniform = |m: usize| {
            if meets.iter().all(|&x| x == m) {
                format!("all {m}")
            } else {
                format!("{:?}..{:?}", meets.iter().min(), meets.iter().max())
            }
        };
        match ctx.degree() {
            1 => claims.push(Claim::new(
                format!("{}/meets_count", d(ctx)),
                "all 183",
                uniform(183),
            )),
            3 => {
                claims.push(Claim::new(
                    format!("{}/meets_count", d(ctx)),
                    "all 10",
                    uniform(10),
                ));
                let values: Vec<String> = histogram.keys().map(|v| v.to_string()).collect();
                claims.push(Claim::new(
                    format!("{}/entries", d(ctx)),
                    "0, 1",
                    values.join(", "),
                ));
            }
            _ => {}
        }
        payload.push(json!({
            "degree": ctx.degree(),
            "n": g.len(),
            "histogram": histogram,
            "meets_count": meets,
        }));
    }
    Ok((claims, Value::Array(payload)))
}

pub fn pairs(ctxs: &[DelPezzoContext]) -> Result<Section, CliError> {
    let off = SurfacePoint::new("P", PointLocation::OffBranch);
    let on = SurfacePoint::new("P", PointLocation::OnBranch);
    let mut claims = Vec::new();
    let mut payload = Vec::new();
    for &ctx in ctxs {
        let g = Graph::for_degree(ctx)?;
        let candidates = candidate_cycle_pairs(&g);
        let (mut off_ok, mut on_total, mut on_ok) = (0, 0, 0);
        let mut records = Vec::new();
        for p in &candidates {
            let (x, y) = (g.node(p.i)?, g.node(p.j)?);
            if build_xi(x, y, &off).is_ok_and(|z| cocycle_check(&z)) {
                off_ok += 1;
            }
            match build_xi(x, y, &on) {
                Ok(z) => {
                    on_total += 1;
                    if cocycle_check(&z) {
                        on_ok += 1;
                    }
                }
                Err(CycleError::NoSharedNode(..)) => {}
                Err(_) => on_total += 1,
            }
            records.push(json!({
                "i": p.i,
                "j": p.j,
                "multiplicity": p.multiplicity,
                "first": x.curve_type(),
                "second": y.curve_type(),
                "generic_position_assumed": p.generic_position_assumed,
            }));
        }
        let n = candidates.len();
        claims.push(Claim::new(
            format!("{}/cocycle_off_branch", d(ctx)),
            format!("{n} of {n}"),
            format!("{off_ok} of {n}"),
        ));
        claims.push(Claim::new(
            format!("{}/cocycle_on_branch", d(ctx)),
            format!("{on_total} of {on_total}"),
            format!("{on_ok} of {on_total}"),
        ));
        payload.push(json!({"degree": ctx.degree(), "count": n, "pairs": records}));
    }
    Ok((claims, Value::Array(payload)))
}

pub fn bitangents() -> Result<Section, CliError> {
    let ctx = DelPezzoContext::new(2)?;
    let report = bitangent_pairs::<i64>(ctx)?;
    let all_two = report.pairs.iter().all(|p| p.intersection == 2);
    let composition = |m: &BTreeMap<String, usize>| {
        m.iter()
            .map(|(k, v)| format!("{k} {v}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let claims = vec![
        Claim::new("d2/pairs", 28, report.pairs.len()),
        Claim::new(
            "d2/intersection",
            "all 2",
            if all_two { "all 2" } else { "mixed" },
        ),
        Claim::new(
            "d2/composition",
            "exceptional+cubic 7, line+conic 21",
            composition(&report.composition),
        ),
    ];
    let pairs: Vec<Value> = report
        .pairs
        .iter()
        .map(|p| {
            json!({
                "first": p.first.curve_type(),
                "second": p.second.curve_type(),
                "intersection": p.intersection,
            })
        })
        .collect();
    Ok((
        claims,
        json!({"degree": 2, "pairs": pairs, "composition": report.composition}),
    ))
}

pub fn double_sixes_section() -> Result<Section, CliError> {
    let ctx = DelPezzoContext::new(3)?;
    let g = Graph::for_degree(ctx)?;
    let sixes = double_sixes(ctx)?;
    let label = |ids: &[usize; 6]| -> Result<Vec<String>, CliError> {
        ids.iter()
            .map(|&i| Ok(g.node(i)?.curve_type().to_string()))
            .collect()
    };
    let mut records = Vec::new();
    for s in &sixes {
        records.push(json!({"first": label(&s.first)?, "second": label(&s.second)?}));
    }
    Ok((
        vec![Claim::new("d3/double_sixes", 36, sixes.len())],
        json!({"degree": 3, "double_sixes": records}),
    ))
}

pub fn verify_lemma(ctxs: &[DelPezzoContext]) -> Result<Section, CliError> {
    let mut claims = Vec::new();
    let mut payload = Vec::new();
    for &ctx in ctxs {
        let mut records = Vec::new();
        let mut holding = 0;
        for c in enumerate_neg_one::<i64>(ctx) {
            if c.curve_type().is_exceptional() {
                continue;
            }
            let lemma = verify_branch_lemma(&c).map_err(|e| CliError::Failed(e.to_string()))?;
            if lemma.holds() {
                holding += 1;
            }
            records.push(json!({
                "id": c.id(),
                "type": c.curve_type(),
                "e": lemma.e,
                "sum_b": lemma.sum_b,
                "residual": lemma.residual,
            }));
        }
        let n = records.len();
        claims.push(Claim::new(
            format!("{}/residual_2", d(ctx)),
            format!("{n} of {n}"),
            format!("{holding} of {n}"),
        ));
        payload.push(json!({"degree": ctx.degree(), "curves": records}));
    }
    Ok((claims, Value::Array(payload)))
}

pub fn weyl(ctxs: &[DelPezzoContext]) -> Result<Section, CliError> {
    let mut claims = Vec::new();
    let mut payload = Vec::new();
    for &ctx in ctxs {
        let curves = enumerate_neg_one::<i64>(ctx);
        let closed = weyl_closed(ctx, &curves)?;
        let orbit = weyl_orbit(ctx, &orbit_seeds::<i64>(ctx))?;
        claims.push(Claim::new(format!("{}/weyl_closed", d(ctx)), true, closed));
        claims.push(Claim::new(
            format!("{}/weyl_orbit", d(ctx)),
            curves.len(),
            orbit.len(),
        ));
        payload.push(json!({"degree": ctx.degree(), "closed": closed, "orbit": orbit.len()}));
    }
    Ok((claims, Value::Array(payload)))
}

pub fn tame(f: &[String], g: &[String]) -> Result<Section, CliError> {
    let parse = |items: &[String]| {
        PlaneFunction::parse_factors(items.iter().map(String::as_str))
            .map_err(|e| CliError::Usage(e.to_string()))
    };
    let (ff, gg) = (parse(f)?, parse(g)?);
    let tau = tame_symbol(&ff, &gg).map_err(|e| CliError::Usage(e.to_string()))?;
    let precycle = tau.to_precycle();
    let components: Vec<TameComponentReport> = tau.components().iter().map(Into::into).collect();
    let claims = vec![Claim::new("cocycle", true, cocycle_check(&precycle))];
    Ok((
        claims,
        json!({"f": f, "g": g, "components": components, "precycle": precycle}),
    ))
}

pub fn boundary_replay(itable: Option<&Path>) -> Result<Section, CliError> {
    let overrides = match itable {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<ModelOverrides>(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => ModelOverrides::default(),
    };
    let model = overrides
        .apply(DegenerationModel::standard())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let r: Replay = replay(&model).map_err(|e| CliError::Usage(e.to_string()))?;
    let constraints: Vec<String> = r
        .constraints
        .constraints
        .iter()
        .map(|c| c.to_string())
        .collect();
    let show = |x: Option<i64>| x.map_or("none".to_string(), |v| v.to_string());
    let mut claims = vec![Claim::judged(
        "constraints",
        "b = -a, c = 0",
        constraints.join(", "),
        constraints.iter().any(|c| c == "b = -a") && constraints.iter().any(|c| c == "c = 0"),
    )];
    if itable.is_none() {
        claims.push(Claim::new(
            "decomposition",
            "(1, -1, 0)",
            format!("({}, {}, {})", show(r.a), show(r.b), show(r.c)),
        ));
        claims.push(Claim::new("boundary", "T11 - T12", &r.boundary));
        claims.push(Claim::new("indecomposable", true, r.indecomposable));
    }
    let payload = json!({
        "constraints": constraints,
        "degenerate": r.constraints.degenerate,
        "a": r.a,
        "b": r.b,
        "c": r.c,
        "boundary": r.boundary,
        "indecomposable": r.indecomposable,
    });
    Ok((claims, payload))
}

pub fn count_rational(max_degree: i64) -> Result<Section, CliError> {
    if max_degree < 1 {
        return Err(CliError::Usage(format!(
            "--max-degree must be at least 1, got {max_degree}"
        )));
    }
    let table =
        kontsevich_table::<BigInt>(max_degree).map_err(|e| CliError::Failed(e.to_string()))?;
    let mut claims = Vec::new();
    for (delta, expected) in [(1, 1), (2, 1), (3, 12), (4, 620)] {
        if let Some(n) = table.get(delta) {
            claims.push(Claim::new(format!("N{delta}"), expected, n));
        }
    }
    let mut agree = 0;
    for (delta, n) in table.iter() {
        if kontsevich_count::<BigInt>(delta).ok().as_ref() == Some(n) {
            agree += 1;
        }
    }
    claims.push(Claim::new(
        "routes_agree",
        format!("{max_degree} of {max_degree}"),
        format!("{agree} of {max_degree}"),
    ));
    let payload = serde_json::to_value(&table).map_err(|e| CliError::Io(e.to_string()))?;
    Ok((claims, payload))
}

/// Fixed plane configurations exercised by `report`.
const TAME_EXAMPLES: [(&[&str], &[&str]); 3] = [
    (&["1,0,0", "0,1,0^-1"], &["0,0,1", "1,1,1^-1"]),
    (
        &["1,2,3^2", "1,-1,0^-1", "0,1,-1^-1"],
        &["2,0,1", "1,1,-4^-1"],
    ),
    (&["1,0,0", "0,1,0^-1"], &["1,0,0", "0,1,0^-1"]),
];

pub fn report(ctxs: &[DelPezzoContext]) -> Result<Section, CliError> {
    let degrees: Vec<u32> = ctxs.iter().map(|c| c.degree()).collect();
    let mut sections: Vec<(&str, Section)> = vec![
        ("enumerate", enumerate(ctxs)),
        ("census", census(ctxs)),
        ("incidence", incidence(ctxs)?),
        ("verify-lemma", verify_lemma(ctxs)?),
        ("weyl", weyl(ctxs)?),
        ("pairs", pairs(ctxs)?),
    ];
    if degrees.contains(&2) {
        sections.push(("bitangents", bitangents()?));
    }
    if degrees.contains(&3) {
        sections.push(("double-sixes", double_sixes_section()?));
    }
    sections.push(("boundary-replay", boundary_replay(None)?));
    sections.push(("count-rational", count_rational(10)?));
    for (f, g) in TAME_EXAMPLES {
        let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        sections.push(("tame", tame(&own(f), &own(g))?));
    }

    let mut claims = Vec::new();
    let mut summary = Vec::new();
    for (name, (section_claims, _)) in sections {
        let passed = section_claims.iter().filter(|c| c.pass).count();
        summary.push(json!({
            "command": name,
            "claims": section_claims.len(),
            "passed": passed,
        }));
        claims.extend(section_claims.into_iter().map(|mut c| {
            c.name = format!("{name}: {}", c.name);
            c
        }));
    }
    Ok((claims, json!({"sections": summary})))
}
