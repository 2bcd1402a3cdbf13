//! Verification suites. Every check carries a criterion tag in its name
//! ("c1:".."c11:"), a human-readable statement of the identity it verifies,
//! and, on failure, a finite witness.

use serde::Serialize;
use std::sync::Arc;

use lpacket_core::chartab::character_table;
use lpacket_core::cyclotomic::Cyclotomic;
use lpacket_core::double::{
    cs_f_action, crossed_s_matrix, inner_product_check, DoubleContext,
};
use lpacket_core::group::{GroupAutomorphism, GroupTable};
use lpacket_core::heisenberg::{
    heis_context, heis_dimension_report, heis_extensions, heis_lagrangian, heis_lpacket_chars,
    heis_packets, heis_trace_functions, heis_transition_matrix, HeisContext, PacketKind,
};
use lpacket_core::metric::{from_additive_roots, metric_crossed_data};

#[derive(Serialize, Clone)]
pub struct Check {
    pub name: String,
    pub statement: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl VerificationReport {
    fn new(suite: &str, seed: u64, checks: Vec<Check>) -> VerificationReport {
        let passed = checks.iter().filter(|c| c.passed()).count();
        let failed = checks.len() - passed;
        VerificationReport { suite: suite.into(), seed, checks, passed, failed }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn pass(name: impl Into<String>, statement: impl Into<String>) -> Check {
    Check { name: name.into(), statement: statement.into(), status: "pass".into(), witness: None }
}

fn fail(
    name: impl Into<String>,
    statement: impl Into<String>,
    witness: impl Into<String>,
) -> Check {
    Check {
        name: name.into(),
        statement: statement.into(),
        status: "fail".into(),
        witness: Some(witness.into()),
    }
}

fn outcome(
    name: impl Into<String>,
    statement: impl Into<String>,
    result: Result<(), String>,
) -> Check {
    match result {
        Ok(()) => pass(name, statement),
        Err(w) => fail(name, statement, w),
    }
}

pub fn s3_group() -> GroupTable {
    GroupTable::from_perm_generators(&[vec![1, 0, 2], vec![1, 2, 0]], 100)
        .unwrap()
        .table
}

pub fn a4_group() -> GroupTable {
    GroupTable::from_perm_generators(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]], 100)
        .unwrap()
        .table
}

/// The six (group, automorphism) pairs of the finite suite.
pub fn finite_cases() -> Vec<(String, Arc<GroupTable>, GroupAutomorphism)> {
    let mut cases = Vec::new();
    let c3 = Arc::new(GroupTable::cyclic(3));
    let inv = GroupAutomorphism::inversion(&c3).unwrap();
    cases.push(("(C3,inv)".to_string(), c3, inv));

    let klein = Arc::new(GroupTable::abelian(&[2, 2]));
    let swap = GroupAutomorphism::new(&klein, vec![0, 2, 1, 3]).unwrap();
    cases.push(("(C2xC2,swap)".to_string(), klein, swap));

    let s3 = Arc::new(s3_group());
    cases.push(("(S3,id)".to_string(), s3.clone(), GroupAutomorphism::identity(&s3)));

    // conjugation by a transposition
    let t = (0..s3.n).find(|&x| s3.element_order(x) == 2).unwrap();
    cases.push(("(S3,ad-transposition)".to_string(), s3.clone(), GroupAutomorphism::inner(&s3, t)));

    let d4 = Arc::new(GroupTable::dihedral(4));
    cases.push(("(D4,id)".to_string(), d4.clone(), GroupAutomorphism::identity(&d4)));

    let q8 = Arc::new(GroupTable::quaternion8());
    cases.push(("(Q8,id)".to_string(), q8.clone(), GroupAutomorphism::identity(&q8)));
    cases
}

/// Expected squareness counts from the finite suite (where pinned).
fn expected_count(name: &str) -> Option<usize> {
    match name {
        "(C3,inv)" => Some(1),
        "(C2xC2,swap)" => Some(4),
        "(S3,id)" => Some(8),
        _ => None,
    }
}

/// Criterion 1: exact character tables for the five named groups.
pub fn checks_character_tables() -> Vec<Check> {
    let groups: Vec<(&str, GroupTable)> = vec![
        ("S3", s3_group()),
        ("D4", GroupTable::dihedral(4)),
        ("Q8", GroupTable::quaternion8()),
        ("A4", a4_group()),
        ("C2xC2", GroupTable::abelian(&[2, 2])),
    ];
    groups
        .into_iter()
        .map(|(name, g)| {
            let start = std::time::Instant::now();
            // construction verifies both orthogonality relations and the
            // degree identity exactly
            let result = character_table(&g).map(|_| ()).map_err(|e| e.to_string());
            let mut check = outcome(
                format!("c1:chartable:{name}"),
                "row and column orthogonality hold exactly and sum(deg^2) = |G|",
                result,
            );
            let elapsed = start.elapsed();
            if elapsed.as_secs_f64() >= 1.0 {
                check = fail(
                    format!("c1:chartable:{name}"),
                    "character table computed in under one second",
                    format!("took {elapsed:?}"),
                );
            }
            check
        })
        .collect()
}

/// Criteria 2 through 5 for one finite case.
pub fn checks_finite_case(
    name: &str,
    group: Arc<GroupTable>,
    f: GroupAutomorphism,
) -> Vec<Check> {
    let mut checks = Vec::new();
    let ctx = match DoubleContext::new(group, f) {
        Ok(ctx) => ctx,
        Err(e) => {
            checks.push(fail(
                format!("c2:squareness:{name}"),
                "context construction",
                e.to_string(),
            ));
            return checks;
        }
    };
    // squareness counts
    let action = match cs_f_action(&ctx) {
        Ok(a) => a,
        Err(e) => {
            checks.push(fail(format!("c2:squareness:{name}"), "label action", e.to_string()));
            return checks;
        }
    };
    let stable = action.stable_labels().len();
    let orbits = ctx.space.num_orbits();
    let irreps = ctx.space.irrep_labels().map(|l| l.len()).unwrap_or(usize::MAX);
    let mut square_ok = stable == orbits && irreps == orbits;
    let mut witness = format!("stable = {stable}, characters = {irreps}, orbits = {orbits}");
    if let Some(expected) = expected_count(name) {
        square_ok &= stable == expected;
        witness.push_str(&format!(", expected {expected}"));
    }
    checks.push(outcome(
        format!("c2:squareness:{name}"),
        "#stable simples = #characters of all twisted forms = #pair orbits",
        if square_ok { Ok(()) } else { Err(witness) },
    ));

    let s = match crossed_s_matrix(&ctx) {
        Ok(s) => s,
        Err(e) => {
            checks.push(fail(
                format!("c4:unitarity:{name}"),
                "crossed matrix construction (includes the dual-route entry check)",
                e.to_string(),
            ));
            return checks;
        }
    };
    // orthonormality of both bases
    let mut ortho = Ok(());
    'outer: for (i, a) in s.col_characters.iter().enumerate() {
        for (j, b) in s.col_characters.iter().enumerate() {
            let expected = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
            match lpacket_core::class_functions::hermitian_ip(a, b) {
                Ok(ip) if ip == expected => {}
                Ok(ip) => {
                    ortho = Err(format!("<chi_{i}, chi_{j}> = {ip}"));
                    break 'outer;
                }
                Err(e) => {
                    ortho = Err(e.to_string());
                    break 'outer;
                }
            }
        }
    }
    if ortho.is_ok() {
        ortho = s.verify_trace_orthonormality().map_err(|e| e.to_string());
    }
    checks.push(outcome(
        format!("c3:orthonormality:{name}"),
        "characters and normalized trace functions are orthonormal bases",
        ortho,
    ));
    checks.push(outcome(
        format!("c4:unitarity:{name}"),
        "S S* = S* S = I exactly; orbit sum equals the double-coset sum",
        s.verify_unitary().map_err(|e| e.to_string()),
    ));
    // inner product formula over every pair
    let mut ipf = Ok(());
    'pairs: for (ri, datum) in s.weil_data.iter().enumerate() {
        for (ci, chi) in s.col_characters.iter().enumerate() {
            match inner_product_check(&ctx, datum, chi) {
                Ok(chk) if chk.equal => {}
                Ok(chk) => {
                    ipf = Err(format!(
                        "pair ({ri},{ci}): fibre sum {} vs orbit sum {}",
                        chk.lhs, chk.rhs
                    ));
                    break 'pairs;
                }
                Err(e) => {
                    ipf = Err(e.to_string());
                    break 'pairs;
                }
            }
        }
    }
    checks.push(outcome(
        format!("c5:inner-product:{name}"),
        "fibre-wise and orbit-wise inner product sums agree for every pair",
        ipf,
    ));
    checks
}

/// The (p, m) grid of the second family.
pub const HEIS_GRID: [(u32, usize); 6] = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)];

/// Criteria 6 through 11 for one (p, m).
pub fn checks_heis_case(p: u32, m: usize) -> Vec<Check> {
    let tag = format!("({p},{m})");
    let mut checks = Vec::new();
    let ctx = match heis_context(p, m) {
        Ok(ctx) => ctx,
        Err(e) => {
            checks.push(fail(format!("c6:case-analysis:{tag}"), "group construction", e.to_string()));
            return checks;
        }
    };
    let packets = match heis_packets(&ctx) {
        Ok(p) => p,
        Err(e) => {
            checks.push(fail(format!("c6:case-analysis:{tag}"), "packet partition", e.to_string()));
            return checks;
        }
    };

    let mut fixed_orders = Vec::new();
    let mut formula_ok: Result<(), String> = Ok(());
    let mut transition_ok: Result<(), String> = Ok(());
    let mut perp_ok: Result<(), String> = Ok(());
    let mut dims_by_s = Vec::new();
    for packet in packets.iter().filter(|p| p.kind == PacketKind::Heisenberg) {
        let s_idx = ctx.heis.field.index(&packet.s);
        let lag = match heis_lagrangian(&ctx, &packet.s) {
            Ok(l) => l,
            Err(e) => {
                formula_ok = Err(format!("s = {s_idx}: {e}"));
                break;
            }
        };
        fixed_orders.push(lag.k_points.len());
        // criterion 9: the perpendicular identity, certified inside the
        // crossed-data construction
        if perp_ok.is_ok() {
            perp_ok = ctx
                .heis
                .tower
                .additive_roots(&packet.s)
                .and_then(|roots| {
                    let (metric, maut) = from_additive_roots(&ctx.heis.tower, &roots)?;
                    metric_crossed_data(&metric, &maut).map(|_| ())
                })
                .map_err(|e| format!("s = {s_idx}: {e}"));
        }
        if formula_ok.is_err() {
            continue;
        }
        let k_tilde_table = if lag.k_tilde.order() == ctx.heis.table.n {
            (*ctx.table).clone()
        } else {
            match character_table(&lag.k_tilde.table) {
                Ok(t) => t,
                Err(e) => {
                    formula_ok = Err(format!("s = {s_idx}: {e}"));
                    continue;
                }
            }
        };
        let l_table = if lag.lagrangian.order() == ctx.heis.table.n {
            (*ctx.table).clone()
        } else if lag.lagrangian.order() == lag.k_tilde.order() {
            k_tilde_table.clone()
        } else {
            match character_table(&lag.lagrangian.table) {
                Ok(t) => t,
                Err(e) => {
                    formula_ok = Err(format!("s = {s_idx}: {e}"));
                    continue;
                }
            }
        };
        let step = heis_extensions(&ctx, &lag, &k_tilde_table)
            .and_then(|ext| {
                heis_lpacket_chars(&ctx, &lag, &ext, &l_table, packet).map(|chars| (ext, chars))
            });
        let (ext, chars) = match step {
            Ok(v) => v,
            Err(e) => {
                formula_ok = Err(format!("s = {s_idx}: {e}"));
                continue;
            }
        };
        dims_by_s.push((s_idx, lag.k_points.len(), chars.degrees.clone()));
        if transition_ok.is_ok() {
            transition_ok = heis_trace_functions(&ctx, &lag, &ext)
                .and_then(|traces| {
                    heis_transition_matrix(&ctx, &lag, &ext, &chars, &traces).map(|_| ())
                })
                .map_err(|e| format!("s = {s_idx}: {e}"));
        }
    }

    // criterion 6: kernel-order case analysis and the p^r dimension pattern
    let case_ok = (|| -> Result<(), String> {
        if m % 2 == 1 {
            let r = (m - 1) / 2;
            let expected_dim = (p as usize).pow(r as u32);
            for &k in &fixed_orders {
                if k != p as usize {
                    return Err(format!("|K(F_q)| = {k}, expected p = {p}"));
                }
            }
            for (s_idx, _, dims) in &dims_by_s {
                if dims.iter().any(|&d| d != expected_dim) {
                    return Err(format!("s = {s_idx}: dims {dims:?}, expected all {expected_dim}"));
                }
            }
        } else {
            let p2 = (p * p) as usize;
            let mut saw = (false, false);
            for &k in &fixed_orders {
                if k == p2 {
                    saw.0 = true;
                } else if k == 1 {
                    saw.1 = true;
                } else {
                    return Err(format!("|K(F_q)| = {k}, expected {p2} or 1"));
                }
            }
            if ((p, m) == (2, 2) || (p, m) == (3, 2)) && !(saw.0 && saw.1) {
                return Err(format!("both kernel orders should occur, saw {saw:?}"));
            }
            let r = m / 2;
            for (s_idx, k, dims) in &dims_by_s {
                let expected_dim = if *k == p2 {
                    (p as usize).pow(r as u32 - 1)
                } else {
                    (p as usize).pow(r as u32)
                };
                if dims.iter().any(|&d| d != expected_dim) {
                    return Err(format!("s = {s_idx}: dims {dims:?}, expected all {expected_dim}"));
                }
            }
        }
        Ok(())
    })();
    checks.push(outcome(
        format!("c6:case-analysis:{tag}"),
        "kernel orders follow the parity dichotomy and packet dimensions are the expected prime power",
        case_ok,
    ));
    checks.push(outcome(
        format!("c7:character-formula:{tag}"),
        "induced characters are irreducible and satisfy the closed formula pointwise",
        formula_ok,
    ));
    checks.push(outcome(
        format!("c8:transition:{tag}"),
        "pairing coefficients equal (q^2/|L|) omega(k); normalized matrix matches the metric crossed matrix",
        transition_ok,
    ));
    checks.push(outcome(
        format!("c9:perp-identity:{tag}"),
        "the perp of the fixed kernel equals the displacement subgroup",
        perp_ok,
    ));
    let dim_result = heis_dimension_report(&ctx, &packets);
    checks.push(outcome(
        format!("c10:dimensions:{tag}"),
        "per packet sum(dim^2) = q^{2 d_e}; globally sum over packets = q^2",
        dim_result.as_ref().map(|_| ()).map_err(|e| e.to_string()),
    ));
    checks.push(outcome(
        format!("c11:functional:{tag}"),
        "sum over the packet of dim^2/|U|^2 equals q^{2 d_e}/q^4 via the functional",
        dim_result
            .map(|d| {
                if d.per_packet.iter().all(|p| p.lambda_ok) {
                    Ok(())
                } else {
                    Err("a packet fails the functional identity".to_string())
                }
            })
            .unwrap_or_else(|e| Err(e.to_string())),
    ));
    checks
}

/// Extra metric-group property checks used by the full suite.
pub fn checks_metric_properties() -> Vec<Check> {
    let mut checks = Vec::new();
    for (p, m) in HEIS_GRID {
        let tag = format!("({p},{m})");
        let result = (|| -> Result<(), String> {
            let tower = lpacket_core::finite_field::FieldTower::new(p, m)
                .map_err(|e| e.to_string())?;
            let base = tower.base();
            for s in base.elements().skip(1) {
                let roots = tower.additive_roots(&s).map_err(|e| e.to_string())?;
                let (metric, _maut) =
                    from_additive_roots(&tower, &roots).map_err(|e| e.to_string())?;
                metric.s_matrix().map_err(|e| e.to_string())?;
                let g = metric.gauss_sum();
                if g.mul(&g.conj()) != Cyclotomic::from_integer((p * p) as i64) {
                    return Err(format!("|gauss|^2 != |K| at s = {}", base.index(&s)));
                }
            }
            Ok(())
        })();
        checks.push(outcome(
            format!("metric:properties:{tag}"),
            "theta validates, the S-matrix is unitary, and |gauss|^2 = |K| for every s",
            result,
        ));
    }
    checks
}

pub fn run_finite_smoke(seed: u64) -> VerificationReport {
    let mut checks = checks_character_tables();
    for (name, g, f) in finite_cases() {
        checks.extend(checks_finite_case(&name, g, f));
    }
    VerificationReport::new("finite-smoke", seed, checks)
}

pub fn run_heis_grid(seed: u64) -> VerificationReport {
    let mut checks = Vec::new();
    for (p, m) in HEIS_GRID {
        checks.extend(checks_heis_case(p, m));
    }
    VerificationReport::new("heis-grid", seed, checks)
}

pub fn run_full(seed: u64) -> VerificationReport {
    let mut checks = run_finite_smoke(seed).checks;
    checks.extend(run_heis_grid(seed).checks);
    checks.extend(checks_metric_properties());
    VerificationReport::new("full", seed, checks)
}

/// Shared context builder used by the binary for `heisenberg`.
pub fn build_heis_reports(
    ctx: &HeisContext,
    only_s: Option<usize>,
) -> lpacket_core::Result<(
    Vec<lpacket_core::heisenberg::PacketDescriptor>,
    Vec<lpacket_core::heisenberg::HeisPacketReport>,
    lpacket_core::heisenberg::DimensionReport,
)> {
    let packets = heis_packets(ctx)?;
    let mut reports = Vec::new();
    for packet in packets.iter().filter(|p| p.kind == PacketKind::Heisenberg) {
        if let Some(s) = only_s {
            if ctx.heis.field.index(&packet.s) != s {
                continue;
            }
        }
        reports.push(lpacket_core::heisenberg::heis_packet_report(ctx, packet)?);
    }
    let dims = heis_dimension_report(ctx, &packets)?;
    Ok((packets, reports, dims))
}
