//! Report builders. Each subcommand produces one canonical JSON document
//! (pretty-printed, struct field order); csv and text are projections of
//! that document, so the JSON text is what gets cached and compared.

use serde::Serialize;

use blochwork::abgroup::{classify_extensions, ext, CanonicalForm, FgAbelianGroup};
use blochwork::bar::{bar_complex_with_budget, BarError, DEFAULT_BAR_BUDGET};
use blochwork::bloch::{bloch_report, BlochError, FiniteField};
use blochwork::complex::CycleClass;
use blochwork::cyclichom::{cyclic_homology_closed, e2_page_gm2, kunneth_h3_t2};
use blochwork::groups::{gm2, FiniteGroup, GroupError};
use blochwork::witness::{
    resolve_classes, verify_identities, CyclotomicContext, IdentityReport, WitnessError,
};

use crate::CliError;

fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn usage_from_group(e: GroupError) -> CliError {
    CliError::Usage(e.to_string())
}

// Context construction fails only on out-of-domain n; computation errors
// after that are verification failures.
fn usage_from_witness(e: WitnessError) -> CliError {
    CliError::Usage(e.to_string())
}

/// "0", "Z/6", "Z/2 + Z/4 + Z^2": invariant factors in divisibility order,
/// then the free part.
pub fn pretty_group(cf: &CanonicalForm) -> String {
    let mut parts: Vec<String> = cf.invariant_factors.iter().map(|k| format!("Z/{k}")).collect();
    match cf.free_rank {
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

#[derive(Serialize)]
pub struct GroupJson {
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
    pub pretty: String,
}

fn group_json(g: &FgAbelianGroup) -> GroupJson {
    let cf = g.canonical_form();
    GroupJson {
        pretty: pretty_group(&cf),
        invariant_factors: cf.invariant_factors,
        free_rank: cf.free_rank,
    }
}

// ---- homology ----

pub enum HomologySpec {
    Cyclic { n: u64 },
    Product { n: u64, m: u64 },
    Gm2 { n: u64 },
}

#[derive(Serialize)]
struct HomologyRow {
    degree: usize,
    homology: GroupJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<GroupJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches: Option<bool>,
}

#[derive(Serialize)]
struct HomologyReport {
    command: &'static str,
    group: String,
    order: usize,
    max_degree: usize,
    rows: Vec<HomologyRow>,
    ok: bool,
}

pub fn homology(spec: &HomologySpec, max_degree: usize, budget: Option<u128>) -> Result<String, CliError> {
    let (label, group) = match *spec {
        HomologySpec::Cyclic { n } => {
            (format!("Z/{n}"), FiniteGroup::cyclic(n as usize).map_err(usage_from_group)?)
        }
        HomologySpec::Product { n, m } => {
            let a = FiniteGroup::cyclic(n as usize).map_err(usage_from_group)?;
            let b = FiniteGroup::cyclic(m as usize).map_err(usage_from_group)?;
            (format!("Z/{n} x Z/{m}"), FiniteGroup::product(&a, &b).map_err(usage_from_group)?)
        }
        HomologySpec::Gm2 { n } => {
            (format!("GM2({n})"), gm2(n as usize).map_err(usage_from_group)?.group)
        }
    };
    let bar = bar_complex_with_budget(&group, max_degree + 1, budget.unwrap_or(DEFAULT_BAR_BUDGET))
        .map_err(|e| match e {
            BarError::BudgetExceeded { .. } => CliError::Failed(e.to_string()),
            other => CliError::Failed(other.to_string()),
        })?;
    let mut rows = Vec::new();
    let mut ok = true;
    for i in 0..=max_degree {
        let h = bar
            .complex
            .homology(i as isize)
            .map_err(|e| CliError::Failed(e.to_string()))?;
        let (closed_form, matches) = match *spec {
            HomologySpec::Cyclic { n } => {
                let closed = cyclic_homology_closed(n, i);
                let same = h.is_isomorphic_to(&closed);
                ok &= same;
                (Some(group_json(&closed)), Some(same))
            }
            _ => (None, None),
        };
        rows.push(HomologyRow { degree: i, homology: group_json(&h), closed_form, matches });
    }
    Ok(to_pretty(&HomologyReport {
        command: "homology",
        group: label,
        order: group.order(),
        max_degree,
        rows,
        ok,
    }))
}

// ---- ext-table ----

#[derive(Serialize)]
struct ExtRow {
    n: u64,
    ext_z2_zn: GroupJson,
    ext_zn_z2: GroupJson,
    expected: GroupJson,
    extension_classes: usize,
    expected_classes: usize,
    nonsplit_cyclic: usize,
    expected_nonsplit_cyclic: usize,
    matches: bool,
}

#[derive(Serialize)]
struct ExtTableSection {
    max_n: u64,
    rows: Vec<ExtRow>,
    ok: bool,
}

#[derive(Serialize)]
struct ExtTableReport {
    command: &'static str,
    max_n: u64,
    rows: Vec<ExtRow>,
    ok: bool,
}

fn build_ext_table(max_n: u64) -> Result<ExtTableSection, CliError> {
    if max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".to_string()));
    }
    let z2 = FgAbelianGroup::cyclic(2);
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 1..=max_n {
        let zn = FgAbelianGroup::cyclic(n);
        let e_z2_zn = ext(&z2, &zn);
        let e_zn_z2 = ext(&zn, &z2);
        let expected = if n % 2 == 0 { FgAbelianGroup::cyclic(2) } else { FgAbelianGroup::trivial() };
        // extensions 0 -> Z/2 -> E -> Z/n -> 0, classified by ext(Z/n, Z/2)
        let classes = classify_extensions(&z2, &zn).map_err(|e| CliError::Failed(e.to_string()))?;
        let cyclic_total = FgAbelianGroup::cyclic(2 * n);
        let nonsplit_cyclic = classes
            .iter()
            .filter(|d| !d.split && d.total.is_isomorphic_to(&cyclic_total))
            .count();
        let expected_classes = if n % 2 == 0 { 2 } else { 1 };
        let expected_nonsplit_cyclic = if n % 2 == 0 { 1 } else { 0 };
        let matches = e_z2_zn.is_isomorphic_to(&expected)
            && e_zn_z2.is_isomorphic_to(&expected)
            && classes.len() == expected_classes
            && nonsplit_cyclic == expected_nonsplit_cyclic;
        ok &= matches;
        rows.push(ExtRow {
            n,
            ext_z2_zn: group_json(&e_z2_zn),
            ext_zn_z2: group_json(&e_zn_z2),
            expected: group_json(&expected),
            extension_classes: classes.len(),
            expected_classes,
            nonsplit_cyclic,
            expected_nonsplit_cyclic,
            matches,
        });
    }
    Ok(ExtTableSection { max_n, rows, ok })
}

pub fn ext_table(max_n: u64) -> Result<String, CliError> {
    let t = build_ext_table(max_n)?;
    Ok(to_pretty(&ExtTableReport { command: "ext-table", max_n: t.max_n, rows: t.rows, ok: t.ok }))
}

// ---- e2 ----

#[derive(Serialize)]
struct E2Entry {
    p: usize,
    q: usize,
    group: GroupJson,
}

#[derive(Serialize)]
struct E2Report {
    command: &'static str,
    n: u64,
    entries: Vec<E2Entry>,
    ok: bool,
}

pub fn e2(n: u64) -> Result<String, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".to_string()));
    }
    let mut entries = Vec::new();
    for q in 0..=2usize {
        for p in 0..=3usize {
            let g = e2_page_gm2(n, p, q).map_err(|e| CliError::Failed(e.to_string()))?;
            entries.push(E2Entry { p, q, group: group_json(&g) });
        }
    }
    Ok(to_pretty(&E2Report { command: "e2", n, entries, ok: true }))
}

// ---- kunneth ----

#[derive(Serialize)]
struct KunnethReport {
    command: &'static str,
    n: u64,
    tensor_3_0: GroupJson,
    tensor_0_3: GroupJson,
    tensor_1_2: GroupJson,
    tensor_2_1: GroupJson,
    tor_1_1: GroupJson,
    m_part: GroupJson,
    total: GroupJson,
    closed_total: GroupJson,
    matches: bool,
    ok: bool,
}

pub fn kunneth(n: u64) -> Result<String, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".to_string()));
    }
    let k = kunneth_h3_t2(n);
    let total = k.total();
    let zn = FgAbelianGroup::cyclic(n);
    let closed = zn.direct_sum(&zn).direct_sum(&zn);
    let matches = total.is_isomorphic_to(&closed);
    Ok(to_pretty(&KunnethReport {
        command: "kunneth",
        n,
        tensor_3_0: group_json(&k.tensor_3_0),
        tensor_0_3: group_json(&k.tensor_0_3),
        tensor_1_2: group_json(&k.tensor_1_2),
        tensor_2_1: group_json(&k.tensor_2_1),
        tor_1_1: group_json(&k.tor_1_1),
        m_part: group_json(&k.m_part()),
        total: group_json(&total),
        closed_total: group_json(&closed),
        matches,
        ok: matches,
    }))
}

// ---- bloch ----

pub fn bloch(q: u64) -> Result<String, CliError> {
    let f = FiniteField::new(q).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = bloch_report(&f).map_err(|e| match e {
        BlochError::InvalidOrder { .. } => CliError::Usage(e.to_string()),
        other => CliError::Failed(other.to_string()),
    })?;
    Ok(to_pretty(&report))
}

// ---- witness ----

fn context(n: u64) -> Result<CyclotomicContext, CliError> {
    CyclotomicContext::new(n as usize).map_err(usage_from_witness)
}

pub fn witness_verify(n: u64) -> Result<String, CliError> {
    if n == 0 || n % 2 != 0 {
        return Err(CliError::Usage(format!("witness verify requires an even n >= 2, got {n}")));
    }
    let report = verify_identities(&context(n)?).map_err(|e| CliError::Failed(e.to_string()))?;
    Ok(to_pretty(&report))
}

#[derive(Serialize)]
struct ClassJson {
    degree: i64,
    coordinates: Vec<String>,
    order: Option<String>,
    is_zero: bool,
}

fn class_json(c: &CycleClass) -> ClassJson {
    ClassJson {
        degree: c.degree as i64,
        coordinates: c.coordinates.iter().map(|x| x.to_string()).collect(),
        order: c.order.as_ref().map(|o| o.to_string()),
        is_zero: c.is_zero(),
    }
}

#[derive(Serialize)]
struct ClassesReport {
    command: &'static str,
    n: usize,
    omega_gm2: ClassJson,
    chi_gm2: ClassJson,
    relation_2omega_eq_chi: bool,
    chi_gm2_nonzero: bool,
    chi_t2: ClassJson,
    ok: bool,
}

pub fn witness_classes(n: u64) -> Result<String, CliError> {
    let ctx = context(n)?;
    let r = resolve_classes(&ctx).map_err(|e| CliError::Failed(e.to_string()))?;
    Ok(to_pretty(&ClassesReport {
        command: "witness-classes",
        n: r.n,
        omega_gm2: class_json(&r.omega_gm2),
        chi_gm2: class_json(&r.chi_gm2),
        relation_2omega_eq_chi: r.relation_holds,
        chi_gm2_nonzero: r.chi_gm2_nonzero,
        chi_t2: class_json(&r.chi_t2),
        ok: r.relation_holds,
    }))
}

// ---- report paper-tables ----

#[derive(Serialize)]
struct E2TableEntry {
    n: u64,
    p: usize,
    q: usize,
    group: GroupJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<GroupJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches: Option<bool>,
}

#[derive(Serialize)]
struct E2TableSection {
    ns: Vec<u64>,
    entries: Vec<E2TableEntry>,
    ok: bool,
}

// Closed forms where they exist: row q = 0 is H_p of the symmetric group on
// two letters, row q = 1 vanishes above p = 0 because the swap module is
// induced, and (1,2) is the two-torsion entry that feeds H₃.
fn e2_expected(n: u64, p: usize, q: usize) -> Option<FgAbelianGroup> {
    match (p, q) {
        (0, 0) => Some(FgAbelianGroup::free(1)),
        (p, 0) if p % 2 == 1 => Some(FgAbelianGroup::cyclic(2)),
        (_, 0) => Some(FgAbelianGroup::trivial()),
        (0, 1) => Some(FgAbelianGroup::cyclic(n)),
        (_, 1) => Some(FgAbelianGroup::trivial()),
        (1, 2) => {
            Some(if n % 2 == 0 { FgAbelianGroup::cyclic(2) } else { FgAbelianGroup::trivial() })
        }
        _ => None,
    }
}

fn build_e2_table(ns: &[u64]) -> Result<E2TableSection, CliError> {
    let mut entries = Vec::new();
    let mut ok = true;
    for &n in ns {
        for q in 0..=2usize {
            for p in 0..=3usize {
                let g = e2_page_gm2(n, p, q).map_err(|e| CliError::Failed(e.to_string()))?;
                let expected = e2_expected(n, p, q);
                let matches = expected.as_ref().map(|want| g.is_isomorphic_to(want));
                ok &= matches.unwrap_or(true);
                entries.push(E2TableEntry {
                    n,
                    p,
                    q,
                    group: group_json(&g),
                    expected: expected.as_ref().map(group_json),
                    matches,
                });
            }
        }
    }
    Ok(E2TableSection { ns: ns.to_vec(), entries, ok })
}

#[derive(Serialize)]
struct PaperTablesReport {
    command: &'static str,
    ext_table: ExtTableSection,
    e2_table: E2TableSection,
    identity_checklist: Vec<IdentityReport>,
    ok: bool,
}

pub fn paper_tables() -> Result<String, CliError> {
    let ext_table = build_ext_table(12)?;
    let e2_table = build_e2_table(&[2, 3, 4, 5, 6])?;
    let mut identity_checklist = Vec::new();
    let mut identities_ok = true;
    for n in [2u64, 4, 8, 16] {
        let report = verify_identities(&context(n)?).map_err(|e| CliError::Failed(e.to_string()))?;
        identities_ok &= report.all_hold();
        identity_checklist.push(report);
    }
    let ok = ext_table.ok && e2_table.ok && identities_ok;
    Ok(to_pretty(&PaperTablesReport {
        command: "report-paper-tables",
        ext_table,
        e2_table,
        identity_checklist,
        ok,
    }))
}
