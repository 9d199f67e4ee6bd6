//! Projections of the canonical JSON reports into csv and text, plus the
//! verdict scan that decides the exit code. Everything here reads the parsed
//! document by field name; the JSON text itself is emitted verbatim, so the
//! projections can never disturb the source of truth.

use serde_json::Value;

use crate::{Format, Kind};

fn field<'a>(v: &'a Value, k: &str) -> &'a Value {
    v.get(k).unwrap_or_else(|| panic!("report field {k} missing"))
}

fn txt<'a>(v: &'a Value, k: &str) -> &'a str {
    field(v, k).as_str().expect("string field")
}

fn flag(v: &Value, k: &str) -> bool {
    field(v, k).as_bool().expect("bool field")
}

fn num(v: &Value, k: &str) -> u64 {
    field(v, k).as_u64().expect("integer field")
}

fn items<'a>(v: &'a Value, k: &str) -> &'a Vec<Value> {
    field(v, k).as_array().expect("array field")
}

fn pretty<'a>(v: &'a Value, k: &str) -> &'a str {
    txt(field(v, k), "pretty")
}

// The bloch report serializes canonical forms without a pretty field, so
// the projection re-derives the display string.
fn pretty_cf(v: &Value, k: &str) -> String {
    let cf = field(v, k);
    let mut parts: Vec<String> = items(cf, "invariant_factors")
        .iter()
        .map(|f| format!("Z/{}", f.as_u64().expect("u64")))
        .collect();
    match num(cf, "free_rank") {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

const IDENTITIES: [(&str, &str); 5] = [
    ("boundary_b", "∂₃(b) = τ(h) − h"),
    ("boundary_eta", "∂₄(η) = −2ρ_s(h) + χ₃ − χ₄"),
    ("boundary_upsilon", "∂₄(υ) = χ₁ − χ₂ + χ₃ − χ₅ − χ₆ + χ₄"),
    ("omega_doubling", "2ω − χ = ∂₄(η + υ)"),
    ("chi_decomposition", "χ = χ₁ + χ₅ + χ₆ + χ₂"),
];

const FOUR_TERM_NODES: [&str; 4] =
    ["B injects into P", "exactness at P", "exactness at S", "K2M is covered"];

// ---- verdict ----

/// Scans a report for failed verifications. The report is still printed;
/// the failures decide the exit code and go to stderr.
pub fn verdict(kind: Kind, v: &Value) -> Vec<String> {
    let mut failures = Vec::new();
    match kind {
        Kind::Homology => {
            for row in items(v, "rows") {
                if row.get("matches").and_then(Value::as_bool) == Some(false) {
                    failures.push(format!(
                        "H_{} = {} does not match the closed form {}",
                        num(row, "degree"),
                        pretty(row, "homology"),
                        pretty(row, "closed_form"),
                    ));
                }
            }
        }
        Kind::ExtTable => failures.extend(ext_failures(v)),
        Kind::E2 => {}
        Kind::Kunneth => {
            if !flag(v, "matches") {
                failures.push(format!(
                    "H_3 total {} does not match the closed form {}",
                    pretty(v, "total"),
                    pretty(v, "closed_total"),
                ));
            }
        }
        Kind::Bloch => {
            for (i, node) in FOUR_TERM_NODES.iter().enumerate() {
                if !items(v, "exact")[i].as_bool().expect("bool") {
                    failures.push(format!("four-term sequence: {node} fails (q = {})", num(v, "q")));
                }
            }
        }
        Kind::WitnessVerify => failures.extend(identity_failures(v)),
        Kind::WitnessClasses => {
            if !flag(v, "relation_2omega_eq_chi") {
                failures.push("2·[ω] = [χ] fails in H₃(GM₂)".to_string());
            }
        }
        Kind::PaperTables => {
            failures.extend(ext_failures(field(v, "ext_table")));
            for e in items(field(v, "e2_table"), "entries") {
                if e.get("matches").and_then(Value::as_bool) == Some(false) {
                    failures.push(format!(
                        "E2[p={},q={}] at n={} is {}, expected {}",
                        num(e, "p"),
                        num(e, "q"),
                        num(e, "n"),
                        pretty(e, "group"),
                        pretty(e, "expected"),
                    ));
                }
            }
            for report in items(v, "identity_checklist") {
                failures.extend(identity_failures(report));
            }
        }
    }
    failures
}

fn ext_failures(section: &Value) -> Vec<String> {
    items(section, "rows")
        .iter()
        .filter(|row| !flag(row, "matches"))
        .map(|row| format!("ext case split fails at n = {}", num(row, "n")))
        .collect()
}

fn identity_failures(report: &Value) -> Vec<String> {
    let n = num(report, "n");
    IDENTITIES
        .iter()
        .filter(|(key, _)| !flag(field(report, key), "holds"))
        .map(|(key, display)| {
            format!(
                "identity {display} fails at n = {n} (residual {} terms)",
                num(field(report, key), "residual_terms")
            )
        })
        .collect()
}

// ---- rendering ----

pub fn render(kind: Kind, format: Format, v: &Value, json_text: &str) -> String {
    match format {
        Format::Json => json_text.to_string(),
        Format::Csv => csv(kind, v),
        Format::Text => text(kind, v),
    }
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn okbad(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "MISMATCH"
    }
}

// ---- csv ----

fn csv(kind: Kind, v: &Value) -> String {
    let mut lines = Vec::new();
    match kind {
        Kind::Homology => {
            lines.push("degree,homology,closed_form,matches".to_string());
            for row in items(v, "rows") {
                let closed =
                    row.get("closed_form").map(|g| txt(g, "pretty").to_string()).unwrap_or_default();
                let matches = row
                    .get("matches")
                    .and_then(Value::as_bool)
                    .map(|b| b.to_string())
                    .unwrap_or_default();
                lines.push(format!(
                    "{},{},{},{}",
                    num(row, "degree"),
                    pretty(row, "homology"),
                    closed,
                    matches
                ));
            }
        }
        Kind::ExtTable => {
            lines.push(ext_csv_header());
            lines.extend(ext_csv_rows(v));
        }
        Kind::E2 => {
            lines.push("p,q,group".to_string());
            for e in items(v, "entries") {
                lines.push(format!("{},{},{}", num(e, "p"), num(e, "q"), pretty(e, "group")));
            }
        }
        Kind::Kunneth => {
            lines.push("part,value".to_string());
            for part in
                ["tensor_3_0", "tensor_0_3", "tensor_1_2", "tensor_2_1", "tor_1_1", "m_part", "total", "closed_total"]
            {
                lines.push(format!("{part},{}", pretty(v, part)));
            }
            lines.push(format!("matches,{}", flag(v, "matches")));
        }
        Kind::Bloch => {
            lines.push("field,value".to_string());
            lines.push(format!("q,{}", num(v, "q")));
            for part in ["P", "B", "K2M", "tor_tilde"] {
                lines.push(format!("{part},{}", pretty_cf(v, part)));
            }
            let exact: Vec<String> =
                items(v, "exact").iter().map(|b| b.as_bool().expect("bool").to_string()).collect();
            lines.push(format!("exact,{}", exact.join(" ")));
        }
        Kind::WitnessVerify => {
            lines.push("identity,holds,residual_terms".to_string());
            for (key, _) in IDENTITIES {
                let c = field(v, key);
                lines.push(format!("{key},{},{}", flag(c, "holds"), num(c, "residual_terms")));
            }
        }
        Kind::WitnessClasses => {
            lines.push("field,value".to_string());
            lines.push(format!("n,{}", num(v, "n")));
            for class in ["omega_gm2", "chi_gm2", "chi_t2"] {
                let c = field(v, class);
                let coords: Vec<String> = items(c, "coordinates")
                    .iter()
                    .map(|x| x.as_str().expect("string").to_string())
                    .collect();
                lines.push(format!("{class}.degree,{}", num(c, "degree")));
                lines.push(format!("{class}.coordinates,{}", coords.join(" ")));
                lines.push(format!(
                    "{class}.order,{}",
                    field(c, "order").as_str().unwrap_or("infinite")
                ));
                lines.push(format!("{class}.is_zero,{}", flag(c, "is_zero")));
            }
            lines.push(format!("relation_2omega_eq_chi,{}", flag(v, "relation_2omega_eq_chi")));
            lines.push(format!("chi_gm2_nonzero,{}", flag(v, "chi_gm2_nonzero")));
        }
        Kind::PaperTables => {
            lines.push("section,key,value".to_string());
            let ext = field(v, "ext_table");
            for row in items(ext, "rows") {
                lines.push(format!(
                    "ext-table,n={},{}",
                    num(row, "n"),
                    ext_row_summary(row).replace(',', ";")
                ));
            }
            for e in items(field(v, "e2_table"), "entries") {
                let verdictcol = e
                    .get("matches")
                    .and_then(Value::as_bool)
                    .map(|b| format!(" matches={b}"))
                    .unwrap_or_default();
                lines.push(format!(
                    "e2-table,n={} p={} q={},{}{}",
                    num(e, "n"),
                    num(e, "p"),
                    num(e, "q"),
                    pretty(e, "group"),
                    verdictcol
                ));
            }
            for report in items(v, "identity_checklist") {
                for (key, _) in IDENTITIES {
                    lines.push(format!(
                        "identities,n={} {key},{}",
                        num(report, "n"),
                        flag(field(report, key), "holds")
                    ));
                }
            }
            lines.push(format!("summary,ok,{}", flag(v, "ok")));
        }
    }
    lines.join("\n")
}

fn ext_csv_header() -> String {
    "n,ext_z2_zn,ext_zn_z2,expected,classes,nonsplit_cyclic,matches".to_string()
}

fn ext_csv_rows(section: &Value) -> Vec<String> {
    items(section, "rows")
        .iter()
        .map(|row| {
            format!(
                "{},{},{},{},{},{},{}",
                num(row, "n"),
                pretty(row, "ext_z2_zn"),
                pretty(row, "ext_zn_z2"),
                pretty(row, "expected"),
                num(row, "extension_classes"),
                num(row, "nonsplit_cyclic"),
                flag(row, "matches")
            )
        })
        .collect()
}

fn ext_row_summary(row: &Value) -> String {
    format!(
        "ext(Z/2,Z/n)={} ext(Z/n,Z/2)={} expected={} classes={} nonsplit_cyclic={} {}",
        pretty(row, "ext_z2_zn"),
        pretty(row, "ext_zn_z2"),
        pretty(row, "expected"),
        num(row, "extension_classes"),
        num(row, "nonsplit_cyclic"),
        okbad(flag(row, "matches"))
    )
}

// ---- text ----

fn text(kind: Kind, v: &Value) -> String {
    let mut lines = Vec::new();
    match kind {
        Kind::Homology => {
            lines.push(format!(
                "homology of {} (order {}) through degree {}",
                txt(v, "group"),
                num(v, "order"),
                num(v, "max_degree")
            ));
            for row in items(v, "rows") {
                let mut line = format!("  H_{} = {}", num(row, "degree"), pretty(row, "homology"));
                if let Some(matches) = row.get("matches").and_then(Value::as_bool) {
                    line.push_str(&format!(
                        "  [closed form {}: {}]",
                        pretty(row, "closed_form"),
                        okbad(matches)
                    ));
                }
                lines.push(line);
            }
        }
        Kind::ExtTable => {
            lines.push(format!("ext case split through n = {}", num(v, "max_n")));
            lines.extend(text_ext_rows(v));
            lines.push(format!("all rows match: {}", yesno(flag(v, "ok"))));
        }
        Kind::E2 => {
            lines.push(format!("E2 page of GM2({}) for p <= 3, q <= 2", num(v, "n")));
            for e in items(v, "entries") {
                lines.push(format!(
                    "  E2[p={},q={}] = {}",
                    num(e, "p"),
                    num(e, "q"),
                    pretty(e, "group")
                ));
            }
        }
        Kind::Kunneth => {
            lines.push(format!("Kunneth decomposition of H_3(Z/n x Z/n) at n = {}", num(v, "n")));
            for part in ["tensor_3_0", "tensor_0_3", "tensor_1_2", "tensor_2_1", "tor_1_1"] {
                lines.push(format!("  {part} = {}", pretty(v, part)));
            }
            lines.push(format!("  m_part = {}", pretty(v, "m_part")));
            lines.push(format!(
                "  total = {}  [closed form {}: {}]",
                pretty(v, "total"),
                pretty(v, "closed_total"),
                okbad(flag(v, "matches"))
            ));
        }
        Kind::Bloch => {
            lines.push(format!("Bloch pipeline over the field with {} elements", num(v, "q")));
            for part in ["P", "B", "K2M", "tor_tilde"] {
                lines.push(format!("  {part} = {}", pretty_cf(v, part)));
            }
            let exact = items(v, "exact");
            let all = exact.iter().all(|b| b.as_bool().expect("bool"));
            lines.push(format!("  four-term sequence exact: {}", yesno(all)));
            if !all {
                for (i, node) in FOUR_TERM_NODES.iter().enumerate() {
                    lines.push(format!(
                        "    {node}: {}",
                        yesno(exact[i].as_bool().expect("bool"))
                    ));
                }
            }
        }
        Kind::WitnessVerify => {
            lines.push(format!("witness identities at n = {}", num(v, "n")));
            lines.extend(text_identity_lines(v));
        }
        Kind::WitnessClasses => {
            lines.push(format!("witness classes at n = {}", num(v, "n")));
            for (class, what) in [
                ("omega_gm2", "[ω] in H₃(GM₂)"),
                ("chi_gm2", "[χ] in H₃(GM₂)"),
                ("chi_t2", "[χ] in H₃(T₂)"),
            ] {
                let c = field(v, class);
                let coords: Vec<String> = items(c, "coordinates")
                    .iter()
                    .map(|x| x.as_str().expect("string").to_string())
                    .collect();
                lines.push(format!(
                    "  {what}: coordinates [{}], order {}, zero: {}",
                    coords.join(", "),
                    field(c, "order").as_str().unwrap_or("infinite"),
                    yesno(flag(c, "is_zero"))
                ));
            }
            lines.push(format!(
                "  2·[ω] = [χ] in H₃(GM₂): {}",
                yesno(flag(v, "relation_2omega_eq_chi"))
            ));
            lines.push(format!(
                "  [χ] nonzero in H₃(GM₂): {}",
                yesno(flag(v, "chi_gm2_nonzero"))
            ));
        }
        Kind::PaperTables => {
            let ext = field(v, "ext_table");
            lines.push(format!("== ext case split through n = {} ==", num(ext, "max_n")));
            lines.extend(text_ext_rows(ext));
            lines.push(String::new());
            let e2 = field(v, "e2_table");
            let ns: Vec<String> =
                items(e2, "ns").iter().map(|n| n.as_u64().expect("u64").to_string()).collect();
            lines.push(format!("== E2 page entries for n in {{{}}} ==", ns.join(", ")));
            for e in items(e2, "entries") {
                let verdictcol = match e.get("matches").and_then(Value::as_bool) {
                    Some(m) => format!("  [expected {}: {}]", pretty(e, "expected"), okbad(m)),
                    None => String::new(),
                };
                lines.push(format!(
                    "  n={} E2[p={},q={}] = {}{}",
                    num(e, "n"),
                    num(e, "p"),
                    num(e, "q"),
                    pretty(e, "group"),
                    verdictcol
                ));
            }
            lines.push(String::new());
            lines.push("== witness identity checklist ==".to_string());
            for report in items(v, "identity_checklist") {
                lines.push(format!("n = {}:", num(report, "n")));
                lines.extend(text_identity_lines(report));
            }
            lines.push(String::new());
            lines.push(format!("all tables verified: {}", yesno(flag(v, "ok"))));
        }
    }
    lines.join("\n")
}

fn text_ext_rows(section: &Value) -> Vec<String> {
    items(section, "rows")
        .iter()
        .map(|row| format!("  n={}: {}", num(row, "n"), ext_row_summary(row)))
        .collect()
}

fn text_identity_lines(report: &Value) -> Vec<String> {
    IDENTITIES
        .iter()
        .map(|(key, display)| {
            let c = field(report, key);
            let mut line = format!("  {display}: {}", okbad(flag(c, "holds")));
            if !flag(c, "holds") {
                line.push_str(&format!(" (residual {} terms)", num(c, "residual_terms")));
            }
            line
        })
        .collect()
}
