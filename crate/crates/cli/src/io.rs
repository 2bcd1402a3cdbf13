//! Input schemas and JSON/CSV output shaping.
//!
//! JSON with exact cyclotomic payloads is the only authoritative format.
//! CSV output embeds decimal approximations and is marked non-authoritative.

use serde::{Deserialize, Serialize};
use std::path::Path;

use lpacket_core::chartab::CharacterTable;
use lpacket_core::cyclotomic::Cyclotomic;
use lpacket_core::double::{CrossedSMatrix, DoubleContext, InnerProductCheck};
use lpacket_core::group::{GroupAutomorphism, GroupTable};
use lpacket_core::heisenberg::{
    DimensionReport, HeisContext, HeisPacketReport, PacketDescriptor, PacketKind,
};
use lpacket_core::metric::{MetricCrossedData, MetricGroup};
use lpacket_core::{Error, Result};

/// Group descriptions accepted on the command line.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupInput {
    pub order: Option<usize>,
    pub mult: Option<Vec<Vec<usize>>>,
    pub perm_gens: Option<Vec<Vec<usize>>>,
    pub abelian: Option<Vec<usize>>,
    pub automorphism: Option<Vec<usize>>,
    pub automorphism_on_gens: Option<Vec<Vec<usize>>>,
}

pub struct LoadedGroup {
    pub table: GroupTable,
    pub automorphism: Option<GroupAutomorphism>,
}

pub fn parse_group(input: GroupInput, bound: usize) -> Result<LoadedGroup> {
    let (table, automorphism) = if let Some(mult) = input.mult {
        if let Some(order) = input.order {
            if order != mult.len() {
                return Err(Error::InvalidGroup("order does not match the table".into()));
            }
        }
        let table = GroupTable::from_mult_table(mult)?;
        if table.n > bound {
            return Err(Error::SizeBound { bound, actual: table.n });
        }
        let aut = input
            .automorphism
            .map(|map| GroupAutomorphism::new(&table, map))
            .transpose()?;
        (table, aut)
    } else if let Some(gens) = input.perm_gens {
        let pg = GroupTable::from_perm_generators(&gens, bound)?;
        let aut = match (input.automorphism_on_gens, input.automorphism) {
            (Some(images), _) => Some(pg.automorphism_from_gen_images(&images)?),
            (None, Some(map)) => Some(GroupAutomorphism::new(&pg.table, map)?),
            (None, None) => None,
        };
        (pg.table, aut)
    } else if let Some(factors) = input.abelian {
        let table = GroupTable::abelian(&factors);
        if table.n > bound {
            return Err(Error::SizeBound { bound, actual: table.n });
        }
        let aut = input
            .automorphism
            .map(|map| GroupAutomorphism::new(&table, map))
            .transpose()?;
        (table, aut)
    } else {
        return Err(Error::InvalidGroup(
            "need one of `mult`, `perm_gens`, or `abelian`".into(),
        ));
    };
    Ok(LoadedGroup { table, automorphism })
}

pub fn load_group_file(path: &Path, bound: usize) -> Result<LoadedGroup> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidGroup(format!("cannot read {}: {e}", path.display())))?;
    let input: GroupInput = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidGroup(format!("bad group JSON: {e}")))?;
    parse_group(input, bound)
}

/// Automorphism argument: the literal `id` or a path to JSON holding either a
/// bare index array or {"automorphism": [...]}.
pub fn load_automorphism(arg: &str, table: &GroupTable) -> Result<GroupAutomorphism> {
    if arg == "id" {
        return Ok(GroupAutomorphism::identity(table));
    }
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum AutInput {
        Bare(Vec<usize>),
        Wrapped { automorphism: Vec<usize> },
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| Error::InvalidGroup(format!("cannot read {arg}: {e}")))?;
    let parsed: AutInput = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidGroup(format!("bad automorphism JSON: {e}")))?;
    let map = match parsed {
        AutInput::Bare(v) => v,
        AutInput::Wrapped { automorphism } => automorphism,
    };
    GroupAutomorphism::new(table, map)
}

#[derive(Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

fn approx(v: &Cyclotomic) -> ComplexJson {
    let e = v.embed();
    ComplexJson { re: e.re, im: e.im }
}

#[derive(Serialize)]
pub struct RowLabelJson {
    pub class_rep: usize,
    pub rep_name: String,
    pub char_index: usize,
    pub conjugating_element: usize,
    pub twist_order: usize,
    pub norm_scalar: String,
    pub scaling_note: String,
    /// The trace function on orbit representatives.
    pub trace_function: serde_json::Value,
}

#[derive(Serialize)]
pub struct ColLabelJson {
    pub twisted_rep: usize,
    pub rep_name: String,
    pub char_index: usize,
    pub form_order: usize,
}

#[derive(Serialize)]
pub struct IpfEntryJson {
    pub row: usize,
    pub col: usize,
    pub lhs: Cyclotomic,
    pub rhs: Cyclotomic,
    pub equal: bool,
}

#[derive(Serialize)]
pub struct IpfLedgerJson {
    pub checked: usize,
    pub all_equal: bool,
    pub entries: Vec<IpfEntryJson>,
}

#[derive(Serialize)]
pub struct SMatrixJson {
    pub group_order: usize,
    pub rows: Vec<RowLabelJson>,
    pub cols: Vec<ColLabelJson>,
    pub entries: Vec<Vec<Cyclotomic>>,
    pub unitary: bool,
    pub traces_orthonormal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_product_checks: Option<IpfLedgerJson>,
}

pub fn s_matrix_json(
    ctx: &DoubleContext,
    s: &CrossedSMatrix,
    ipf: Option<Vec<(usize, usize, InnerProductCheck)>>,
) -> SMatrixJson {
    let rows = s
        .row_labels
        .iter()
        .zip(&s.weil_data)
        .zip(&s.scaling_note)
        .map(|((cs, datum), note)| RowLabelJson {
            class_rep: ctx.classes.rep(cs.class),
            rep_name: ctx.group.name_of(ctx.classes.rep(cs.class)),
            char_index: cs.char_index,
            conjugating_element: datum.a,
            twist_order: datum.sigma_order,
            norm_scalar: datum.norm_scalar.to_string(),
            scaling_note: note.clone(),
            trace_function: serde_json::to_value(&datum.trace)
                .expect("trace function serializes"),
        })
        .collect();
    let cols = s
        .col_labels
        .iter()
        .map(|w| {
            let block = &ctx.space.blocks[w.block];
            ColLabelJson {
                twisted_rep: block.t_rep,
                rep_name: ctx.group.name_of(block.t_rep),
                char_index: w.char_index,
                form_order: block.fixed.order(),
            }
        })
        .collect();
    let inner_product_checks = ipf.map(|list| IpfLedgerJson {
        checked: list.len(),
        all_equal: list.iter().all(|(_, _, c)| c.equal),
        entries: list
            .into_iter()
            .map(|(row, col, c)| IpfEntryJson {
                row,
                col,
                lhs: c.lhs,
                rhs: c.rhs,
                equal: c.equal,
            })
            .collect(),
    });
    SMatrixJson {
        group_order: ctx.group.n,
        rows,
        cols,
        entries: s.entries.clone(),
        unitary: true,
        traces_orthonormal: true,
        inner_product_checks,
    }
}

/// CSV with decimal approximations; the header marks it non-authoritative.
pub fn matrix_csv(entries: &[Vec<Cyclotomic>]) -> String {
    let mut out = String::from("# non-authoritative decimal approximation; the JSON output is exact\n");
    for row in entries {
        let cells: Vec<String> = row
            .iter()
            .map(|v| {
                let a = approx(v);
                format!("{:.10}{}{:.10}i", a.re, if a.im < 0.0 { "-" } else { "+" }, a.im.abs())
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
pub struct ClassJson {
    pub rep: usize,
    pub rep_name: String,
    pub size: usize,
    pub centralizer_order: usize,
}

#[derive(Serialize)]
pub struct CharTableJson {
    pub order: usize,
    pub classes: Vec<ClassJson>,
    pub degrees: Vec<usize>,
    pub values: Vec<Vec<Cyclotomic>>,
}

pub fn chartable_json(g: &GroupTable, t: &CharacterTable) -> CharTableJson {
    CharTableJson {
        order: g.n,
        classes: t
            .class_data
            .classes
            .iter()
            .zip(&t.class_data.centralizer_orders)
            .map(|(cls, &zo)| ClassJson {
                rep: cls[0],
                rep_name: g.name_of(cls[0]),
                size: cls.len(),
                centralizer_order: zo,
            })
            .collect(),
        degrees: t.degrees.clone(),
        values: t.values.clone(),
    }
}

#[derive(Serialize)]
pub struct MetricJson {
    pub order: usize,
    pub theta: Vec<Cyclotomic>,
    pub gauss_sum: Cyclotomic,
    pub gauss_norm_sq: Cyclotomic,
    pub s_matrix: Vec<Vec<Cyclotomic>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossed: Option<MetricCrossedJson>,
}

#[derive(Serialize)]
pub struct MetricCrossedJson {
    pub fixed: Vec<usize>,
    pub displacement: Vec<usize>,
    pub coset_reps: Vec<usize>,
    pub matrix: Vec<Vec<Cyclotomic>>,
}

pub fn metric_json(
    m: &MetricGroup,
    crossed: Option<&MetricCrossedData>,
) -> Result<MetricJson> {
    let gauss = m.gauss_sum();
    Ok(MetricJson {
        order: m.order(),
        theta: m.theta.clone(),
        gauss_norm_sq: gauss.mul(&gauss.conj()),
        gauss_sum: gauss,
        s_matrix: m.s_matrix()?,
        crossed: crossed.map(|c| MetricCrossedJson {
            fixed: c.fixed.clone(),
            displacement: c.displacement.clone(),
            coset_reps: c.coset_reps.clone(),
            matrix: c.matrix.clone(),
        }),
    })
}

#[derive(Serialize)]
pub struct PacketJson {
    pub kind: String,
    pub s_index: usize,
    pub n_e: usize,
    pub two_d_e: usize,
    pub member_rows: Vec<usize>,
    pub member_degrees: Vec<usize>,
}

#[derive(Serialize)]
pub struct HeisPacketJson {
    pub s_index: usize,
    pub kernel_point_indices: Vec<usize>,
    pub kernel_fixed_order: usize,
    pub pullback_order: usize,
    pub lagrangian_order: usize,
    pub num_extensions: usize,
    pub degrees: Vec<usize>,
    pub raw_pairings: Vec<Vec<Cyclotomic>>,
    pub coefficients: Vec<Vec<Cyclotomic>>,
    pub normalized: Vec<Vec<Cyclotomic>>,
    pub metric_matrix: Vec<Vec<Cyclotomic>>,
    pub column_of_omega: Vec<usize>,
    pub row_phases: Vec<Cyclotomic>,
    pub certificates: Vec<String>,
}

#[derive(Serialize)]
pub struct DimensionPacketJson {
    pub kind: String,
    pub s_index: usize,
    pub dims: Vec<usize>,
    pub sum_of_squares: usize,
    pub expected: usize,
    pub functional_identity: bool,
}

#[derive(Serialize)]
pub struct HeisReportJson {
    pub p: u32,
    pub m: usize,
    pub q: usize,
    pub group_order: usize,
    pub packets: Vec<PacketJson>,
    pub heisenberg_packets: Vec<HeisPacketJson>,
    pub dimensions: Vec<DimensionPacketJson>,
    pub total_squared_dimension: usize,
}

fn kind_str(kind: PacketKind) -> String {
    match kind {
        PacketKind::Linear => "linear".into(),
        PacketKind::Heisenberg => "heisenberg".into(),
    }
}

pub fn heis_report_json(
    ctx: &HeisContext,
    packets: &[PacketDescriptor],
    reports: &[HeisPacketReport],
    dims: &DimensionReport,
) -> HeisReportJson {
    let field = &ctx.heis.field;
    HeisReportJson {
        p: ctx.heis.p(),
        m: ctx.heis.tower.m,
        q: ctx.heis.q,
        group_order: ctx.heis.table.n,
        packets: packets
            .iter()
            .map(|p| PacketJson {
                kind: kind_str(p.kind),
                s_index: field.index(&p.s),
                n_e: p.n_e,
                two_d_e: p.two_d_e,
                member_rows: p.members.clone(),
                member_degrees: p.members.iter().map(|&r| ctx.table.degrees[r]).collect(),
            })
            .collect(),
        heisenberg_packets: reports
            .iter()
            .map(|r| HeisPacketJson {
                s_index: field.index(&r.s),
                kernel_point_indices: r
                    .lagrangian
                    .k_points
                    .iter()
                    .map(|k| field.index(k))
                    .collect(),
                kernel_fixed_order: r.lagrangian.k_points.len(),
                pullback_order: r.lagrangian.k_tilde.order(),
                lagrangian_order: r.lagrangian.lagrangian.order(),
                num_extensions: r.extensions.extensions.len(),
                degrees: r.chars.degrees.clone(),
                raw_pairings: r.transition.raw.clone(),
                coefficients: r.transition.coeffs.clone(),
                normalized: r.transition.normalized.clone(),
                metric_matrix: r.transition.metric.matrix.clone(),
                column_of_omega: r.transition.column_of_omega.clone(),
                row_phases: r.transition.row_phases.clone(),
                certificates: vec![
                    "pairing kernel matches direct enumeration".into(),
                    "closed character formula holds pointwise".into(),
                    "induced characters are irreducible".into(),
                    "induction is independent of the Lagrangian extension".into(),
                    "coefficients equal (q^2/|L|) omega(k)".into(),
                    "normalized matrix is unitary".into(),
                    "normalized matrix matches the metric crossed matrix".into(),
                ],
            })
            .collect(),
        dimensions: dims
            .per_packet
            .iter()
            .map(|p| DimensionPacketJson {
                kind: kind_str(p.kind),
                s_index: field.index(&p.s),
                dims: p.dims.clone(),
                sum_of_squares: p.sum_sq,
                expected: p.expected,
                functional_identity: p.lambda_ok,
            })
            .collect(),
        total_squared_dimension: dims.total_expected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_mult_table_group() {
        let input: GroupInput =
            serde_json::from_str(r#"{"order": 2, "mult": [[0,1],[1,0]], "automorphism": [0,1]}"#)
                .unwrap();
        let loaded = parse_group(input, 100).unwrap();
        assert_eq!(loaded.table.n, 2);
        assert!(loaded.automorphism.is_some());
    }

    #[test]
    fn parse_order_mismatch_rejected() {
        let input: GroupInput =
            serde_json::from_str(r#"{"order": 3, "mult": [[0,1],[1,0]]}"#).unwrap();
        assert!(parse_group(input, 100).is_err());
    }

    #[test]
    fn parse_perm_gens_with_gen_images() {
        let input: GroupInput = serde_json::from_str(
            r#"{"perm_gens": [[1,0,2],[1,2,0]], "automorphism_on_gens": [[1,0,2],[2,0,1]]}"#,
        )
        .unwrap();
        let loaded = parse_group(input, 100).unwrap();
        assert_eq!(loaded.table.n, 6);
        assert!(loaded.automorphism.is_some());
    }

    #[test]
    fn parse_empty_input_rejected() {
        let input: GroupInput = serde_json::from_str(r#"{}"#).unwrap();
        assert!(parse_group(input, 100).is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        let parsed: std::result::Result<GroupInput, _> =
            serde_json::from_str(r#"{"abelian": [2], "frobnicate": 1}"#);
        assert!(parsed.is_err());
    }

    #[test]
    fn csv_marks_itself_non_authoritative() {
        let t = vec![vec![Cyclotomic::one(), Cyclotomic::root_of_unity(4, 1)]];
        let csv = matrix_csv(&t);
        assert!(csv.starts_with("# non-authoritative"));
        assert!(csv.contains("1.0000000000+0.0000000000i"));
    }
}
