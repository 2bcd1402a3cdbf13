//! Simple objects of the double of a finite group with automorphism, their
//! twisted trace functions, and the crossed S-matrix connecting them to the
//! irreducible characters of the twisted fixed subgroups.
//!
//! A simple is a pair (x, rho): a conjugacy class representative and an
//! irreducible character of its centralizer. For an F-stable simple, a
//! twisting datum is realised as an extension of rho to the coset
//! C_G(x) * sigma^{-1} inside C_G(x) x| <sigma>, where sigma = ad(a) o F for
//! the canonical a with F(x) = a^{-1} x a. No representation matrices appear
//! anywhere; everything is carried by coset character values.

use num::{BigInt, BigRational, One};
use std::sync::Arc;

use crate::chartab::{twisted_extension_characters, CharacterTable, CosetCharacter};
use crate::class_functions::{
    bilinear_ip, hermitian_ip, irrep_character, IrrepLabel, RFunction, RSpace,
};
use crate::cyclotomic::Cyclotomic;
use crate::group::{
    centralizer, conjugacy_classes, ClassData, GroupAutomorphism, GroupTable, Subgroup,
};
use crate::{Error, Result};

/// Label of a simple object: class index and row of the centralizer table.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CSLabel {
    pub class: usize,
    pub char_index: usize,
}

/// Shared per-(G, F) data: centralizers with exact tables, and the pair space.
pub struct DoubleContext {
    pub group: Arc<GroupTable>,
    pub frobenius: GroupAutomorphism,
    pub classes: ClassData,
    pub centralizers: Vec<Subgroup>,
    pub tables: Vec<Arc<CharacterTable>>,
    pub space: Arc<RSpace>,
}

impl DoubleContext {
    pub fn new(group: Arc<GroupTable>, frobenius: GroupAutomorphism) -> Result<DoubleContext> {
        let classes = conjugacy_classes(&group);
        let mut centralizers = Vec::new();
        let mut tables = Vec::new();
        for rep in classes.reps() {
            let z = centralizer(&group, rep);
            let table = crate::chartab::character_table(&z.table)?;
            centralizers.push(z);
            tables.push(Arc::new(table));
        }
        let space = Arc::new(RSpace::new(group.clone(), frobenius.clone())?);
        Ok(DoubleContext { group, frobenius, classes, centralizers, tables, space })
    }
}

/// All simple labels, ordered by (class, character row).
pub fn cs_simples(ctx: &DoubleContext) -> Vec<CSLabel> {
    let mut out = Vec::new();
    for class in 0..ctx.classes.num_classes() {
        for char_index in 0..ctx.tables[class].num_irreps() {
            out.push(CSLabel { class, char_index });
        }
    }
    out
}

/// The image of each simple under (x, rho) -> (F^{-1}(x), rho o F), brought
/// to canonical form, together with the conjugator used to get there.
pub struct CsAction {
    pub labels: Vec<CSLabel>,
    pub images: Vec<CSLabel>,
    pub conjugators: Vec<usize>,
}

impl CsAction {
    pub fn stable_labels(&self) -> Vec<CSLabel> {
        self.labels
            .iter()
            .zip(&self.images)
            .filter(|(l, i)| l == i)
            .map(|(l, _)| *l)
            .collect()
    }
}

pub fn cs_f_action(ctx: &DoubleContext) -> Result<CsAction> {
    let g = &*ctx.group;
    let f = &ctx.frobenius;
    let labels = cs_simples(ctx);
    let mut images = Vec::with_capacity(labels.len());
    let mut conjugators = Vec::with_capacity(labels.len());
    for &cs in &labels {
        let x = ctx.classes.rep(cs.class);
        let y = f.apply_inv(x);
        let target_class = ctx.classes.class_of[y];
        let cnj = ctx.classes.transporter[y]; // y = cnj * x' * cnj^{-1}
        // transported character on C(x'): z -> rho(F(cnj z cnj^{-1}))
        let zc = &ctx.centralizers[target_class];
        let source = &ctx.tables[cs.class];
        let values: Vec<Cyclotomic> = ctx.tables[target_class]
            .class_data
            .reps()
            .map(|zi| {
                let z = zc.to_parent(zi);
                let w = f.apply(g.conj(cnj, z));
                let ws = ctx.centralizers[cs.class]
                    .from_parent(w)
                    .ok_or_else(|| Error::Internal("transported element escaped".into()))?;
                Ok(source.value(cs.char_index, ws).clone())
            })
            .collect::<Result<_>>()?;
        let char_index = ctx.tables[target_class]
            .find_row(&values)
            .ok_or_else(|| Error::Internal("image character not in the table".into()))?;
        images.push(CSLabel { class: target_class, char_index });
        conjugators.push(cnj);
    }
    Ok(CsAction { labels, images, conjugators })
}

/// A realised twisting datum for an F-stable simple.
pub struct WeilDatum {
    pub cs: CSLabel,
    /// Minimal-index a with F(x) = a^{-1} x a.
    pub a: usize,
    /// c -> a F(c) a^{-1} as an automorphism of the centralizer.
    pub sigma: GroupAutomorphism,
    pub sigma_order: usize,
    /// Chosen extension on the coset, already phase-adjusted.
    pub extension: CosetCharacter,
    /// All extensions, in canonical order, for ambiguity checks.
    pub all_extensions: Vec<CosetCharacter>,
    pub trace: RFunction,
    /// <T,T> before any rescale; the construction is expected to give 1.
    pub norm_scalar: BigRational,
    /// Power of zeta_m applied to the canonical extension at construction.
    pub phase_power: usize,
}

/// Build T for one extension of rho, verifying on the full pair set that the
/// value does not depend on the transporter writing u = h x h^{-1}.
fn trace_from_extension(
    ctx: &DoubleContext,
    cs: CSLabel,
    a: usize,
    zc: &Subgroup,
    ext: &CosetCharacter,
) -> Result<RFunction> {
    let g = &*ctx.group;
    let f = &ctx.frobenius;
    let x = ctx.classes.rep(cs.class);
    let space = &ctx.space;
    let mut values = vec![Cyclotomic::zero(); space.num_orbits()];
    let mut assigned = vec![false; space.num_orbits()];
    for block in &space.blocks {
        for &t in &space.twisted.classes[block.twisted_class] {
            for &u in &ctx.classes.classes[cs.class] {
                let orbit = match space.orbit_of(u, t) {
                    Some(o) => o,
                    None => continue,
                };
                // all h with u = h x h^{-1} must give one value
                let mut val: Option<Cyclotomic> = None;
                for h in 0..g.n {
                    if g.conj(h, x) != u {
                        continue;
                    }
                    // a F(h)^{-1} t^{-1} h lies in C_G(x)
                    let gel = g.mul(g.mul(g.mul(a, g.inv[f.apply(h)]), g.inv[t]), h);
                    let gs = zc.from_parent(gel).ok_or_else(|| {
                        Error::Internal("coset element escaped the centralizer".into())
                    })?;
                    let v = ext.coset_values[gs].clone();
                    match &val {
                        None => val = Some(v),
                        Some(prev) => {
                            if *prev != v {
                                return Err(Error::Internal(
                                    "trace value depends on the transporter; \
                                     coset convention violated"
                                        .into(),
                                ));
                            }
                        }
                    }
                }
                let v = val.expect("class membership provides a transporter");
                if assigned[orbit] {
                    if values[orbit] != v {
                        return Err(Error::Internal(
                            "trace value differs across one orbit".into(),
                        ));
                    }
                } else {
                    values[orbit] = v;
                    assigned[orbit] = true;
                }
            }
        }
    }
    Ok(RFunction::from_orbit_values(space.clone(), values))
}

/// Index j in 0..m such that val * zeta_m^j has argument in [0, 2pi/m):
/// among the m rotations, the one with the smallest nonnegative argument.
fn phase_index(val: &Cyclotomic, m: usize) -> usize {
    if m <= 1 {
        return 0;
    }
    let tau = 2.0 * std::f64::consts::PI;
    let mut best = (f64::INFINITY, 0usize);
    for j in 0..m {
        let rotated = val.mul(&Cyclotomic::root_of_unity(m as u32, j as i64));
        let mut arg = rotated.embed().arg();
        if arg < 0.0 {
            arg += tau;
        }
        if arg > tau - 1e-9 {
            arg = 0.0;
        }
        if arg < best.0 {
            best = (arg, j);
        }
    }
    best.1
}

pub fn cs_trace_function(ctx: &DoubleContext, cs: CSLabel) -> Result<WeilDatum> {
    let g = &*ctx.group;
    let f = &ctx.frobenius;
    let x = ctx.classes.rep(cs.class);
    // minimal a with F(x) = a^{-1} x a, i.e. a F(x) a^{-1} = x
    let fx = f.apply(x);
    let a = (0..g.n).find(|&a| g.conj(a, fx) == x).ok_or(Error::NotFixed)?;
    let zc = &ctx.centralizers[cs.class];
    // sigma = ad(a) o F as an automorphism of the centralizer
    let sigma_map: Vec<usize> = (0..zc.order())
        .map(|ci| {
            let z = zc.to_parent(ci);
            zc.from_parent(g.conj(a, f.apply(z)))
                .ok_or_else(|| Error::Internal("sigma does not preserve the centralizer".into()))
        })
        .collect::<Result<_>>()?;
    let sigma = GroupAutomorphism::new(&zc.table, sigma_map)
        .map_err(|_| Error::Internal("sigma is not an automorphism".into()))?;
    let rho = ctx.tables[cs.class].row(cs.char_index).to_vec();
    let all_extensions = match twisted_extension_characters(
        &zc.table,
        &ctx.tables[cs.class].class_data,
        &sigma,
        &rho,
    ) {
        Ok(exts) => exts,
        Err(Error::NotStable) => return Err(Error::NotFixed),
        Err(e) => return Err(e),
    };
    let m = sigma.order;
    let canonical = trace_from_extension(ctx, cs, a, zc, &all_extensions[0])?;
    // rotate so the first nonzero trace value has argument in [0, 2pi/m)
    let phase_power = canonical
        .values
        .iter()
        .find(|v| !v.is_zero())
        .map(|v| phase_index(v, m))
        .unwrap_or(0);
    let rot = Cyclotomic::root_of_unity(m as u32, phase_power as i64);
    let trace = RFunction::from_orbit_values(
        ctx.space.clone(),
        canonical.values.iter().map(|v| v.mul(&rot)).collect(),
    );
    let extension = CosetCharacter {
        coset_values: all_extensions[0].coset_values.iter().map(|v| v.mul(&rot)).collect(),
        degree: all_extensions[0].degree,
    };
    // norm certificate; the construction is expected to give exactly 1
    let ip = hermitian_ip(&trace, &trace)?;
    let norm_scalar = ip
        .as_rational()
        .ok_or_else(|| Error::Internal("<T,T> is not rational".into()))?;
    let trace = if norm_scalar.is_one() {
        trace
    } else {
        eprintln!(
            "warning: <T,T> = {norm_scalar} for simple ({},{}); rescaling",
            cs.class, cs.char_index
        );
        let root = Cyclotomic::sqrt_rational(&norm_scalar)?;
        let scale = root.inv()?;
        RFunction::from_orbit_values(
            ctx.space.clone(),
            trace.values.iter().map(|v| v.mul(&scale)).collect(),
        )
    };
    Ok(WeilDatum {
        cs,
        a,
        sigma,
        sigma_order: m,
        extension,
        all_extensions,
        trace,
        norm_scalar,
        phase_power,
    })
}

/// The crossed S-matrix for (G, F): rows are F-stable simples, columns the
/// irreducible characters of the twisted fixed subgroups.
pub struct CrossedSMatrix {
    pub row_labels: Vec<CSLabel>,
    pub col_labels: Vec<IrrepLabel>,
    pub entries: Vec<Vec<Cyclotomic>>,
    pub weil_data: Vec<WeilDatum>,
    pub col_characters: Vec<RFunction>,
    /// One note per row recording the phase scalar applied to it.
    pub scaling_note: Vec<String>,
}

pub fn crossed_s_matrix(ctx: &DoubleContext) -> Result<CrossedSMatrix> {
    let g = &*ctx.group;
    let action = cs_f_action(ctx)?;
    let row_labels = action.stable_labels();
    let col_labels = ctx.space.irrep_labels()?;
    if row_labels.len() != col_labels.len() || col_labels.len() != ctx.space.num_orbits() {
        return Err(Error::Internal(format!(
            "label counts disagree: {} stable simples, {} characters, {} orbits",
            row_labels.len(),
            col_labels.len(),
            ctx.space.num_orbits()
        )));
    }
    let col_characters: Vec<RFunction> = col_labels
        .iter()
        .map(|&w| irrep_character(&ctx.space, w))
        .collect::<Result<_>>()?;
    let mut weil_data: Vec<WeilDatum> = row_labels
        .iter()
        .map(|&cs| cs_trace_function(ctx, cs))
        .collect::<Result<_>>()?;

    let mut entries = Vec::with_capacity(row_labels.len());
    let mut scaling_note = Vec::with_capacity(row_labels.len());
    for datum in weil_data.iter_mut() {
        let x = ctx.classes.rep(datum.cs.class);
        let cx_order = ctx.centralizers[datum.cs.class].order();
        let mut row = Vec::with_capacity(col_labels.len());
        for (w, chi) in col_labels.iter().zip(&col_characters) {
            let orbitwise = hermitian_ip(&datum.trace, chi)?;
            // independent route: double sum over conjugators into the form
            let block = &ctx.space.blocks[w.block];
            let t = block.t_rep;
            let mut acc = Cyclotomic::zero();
            for h in 0..g.n {
                let u = g.conj(h, x);
                if !block.fixed.contains(u) {
                    continue;
                }
                let tv = datum.trace.value_at(u, t).expect("(u,t) lies in R");
                if tv.is_zero() {
                    continue;
                }
                let cv = chi.value_at(u, t).expect("(u,t) lies in R");
                acc = acc.add(&tv.mul(&cv.conj()));
            }
            let double_sum = acc.scale(&BigRational::new(
                BigInt::from(1),
                BigInt::from(cx_order * block.fixed.order()),
            ));
            if orbitwise != double_sum {
                return Err(Error::Internal(
                    "orbit sum and double-coset sum disagree".into(),
                ));
            }
            row.push(orbitwise);
        }
        // final row phase: first nonzero entry gets argument in [0, 2pi/m)
        let m = datum.sigma_order;
        let j = row.iter().find(|v| !v.is_zero()).map(|v| phase_index(v, m)).unwrap_or(0);
        if j != 0 {
            let rot = Cyclotomic::root_of_unity(m as u32, j as i64);
            for v in row.iter_mut() {
                *v = v.mul(&rot);
            }
            datum.trace = RFunction::from_orbit_values(
                ctx.space.clone(),
                datum.trace.values.iter().map(|v| v.mul(&rot)).collect(),
            );
            datum.extension.coset_values =
                datum.extension.coset_values.iter().map(|v| v.mul(&rot)).collect();
            scaling_note.push(format!(
                "row ({},{}) multiplied by zeta_{}^{}",
                datum.cs.class, datum.cs.char_index, m, j
            ));
        } else {
            scaling_note.push(String::new());
        }
        entries.push(row);
    }

    let matrix = CrossedSMatrix {
        row_labels,
        col_labels,
        entries,
        weil_data,
        col_characters,
        scaling_note,
    };
    matrix.verify_unitary()?;
    Ok(matrix)
}

impl CrossedSMatrix {
    pub fn size(&self) -> usize {
        self.row_labels.len()
    }

    /// S S* = I and S* S = I, exactly.
    pub fn verify_unitary(&self) -> Result<()> {
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                let mut row_ip = Cyclotomic::zero();
                let mut col_ip = Cyclotomic::zero();
                for k in 0..n {
                    row_ip = row_ip.add(&self.entries[i][k].mul(&self.entries[j][k].conj()));
                    col_ip = col_ip.add(&self.entries[k][i].mul(&self.entries[k][j].conj()));
                }
                let expected = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
                if row_ip != expected || col_ip != expected {
                    return Err(Error::CheckFailed(format!("unitarity fails at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    /// The trace functions are orthonormal for the Hermitian form.
    pub fn verify_trace_orthonormality(&self) -> Result<()> {
        for (i, a) in self.weil_data.iter().enumerate() {
            for (j, b) in self.weil_data.iter().enumerate() {
                let ip = hermitian_ip(&a.trace, &b.trace)?;
                let expected = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
                if ip != expected {
                    return Err(Error::CheckFailed(format!(
                        "trace functions not orthonormal at ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Result of comparing the two summation organisations of one inner product.
pub struct InnerProductCheck {
    pub lhs: Cyclotomic,
    pub rhs: Cyclotomic,
    pub equal: bool,
}

/// lhs: fibre-wise sum over pairs (h1, h2) in R with h1 h2 = t, weighted by
/// 1/|G^{tF}| per twisted class. rhs: the orbit-wise bilinear form with
/// stabilizer weights. The two sums run over genuinely different index sets.
pub fn inner_product_check(
    ctx: &DoubleContext,
    datum: &WeilDatum,
    chi: &RFunction,
) -> Result<InnerProductCheck> {
    let g = &*ctx.group;
    let space = &ctx.space;
    let mut lhs = Cyclotomic::zero();
    for block in &space.blocks {
        let t = block.t_rep;
        let mut fiber = Cyclotomic::zero();
        for h1 in 0..g.n {
            let h2 = g.mul(g.inv[h1], t);
            let tv = match datum.trace.value_at(h1, h2) {
                Some(v) if !v.is_zero() => v,
                _ => continue,
            };
            let cv = match chi.value_at(g.inv[h1], h2) {
                Some(v) if !v.is_zero() => v,
                _ => continue,
            };
            fiber = fiber.add(&tv.mul(cv));
        }
        lhs = lhs.add(&fiber.scale(&BigRational::new(
            BigInt::from(1),
            BigInt::from(block.fixed.order()),
        )));
    }
    let rhs = bilinear_ip(&datum.trace, chi)?;
    let equal = lhs == rhs;
    Ok(InnerProductCheck { lhs, rhs, equal })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx_for(g: GroupTable, f: Option<GroupAutomorphism>) -> DoubleContext {
        let g = Arc::new(g);
        let f = f.unwrap_or_else(|| GroupAutomorphism::identity(&g));
        DoubleContext::new(g, f).unwrap()
    }

    fn s3() -> GroupTable {
        GroupTable::from_perm_generators(&[vec![1, 0, 2], vec![1, 2, 0]], 100)
            .unwrap()
            .table
    }

    #[test]
    fn simple_counts() {
        assert_eq!(cs_simples(&ctx_for(s3(), None)).len(), 8);
        assert_eq!(cs_simples(&ctx_for(GroupTable::cyclic(2), None)).len(), 4);
        assert_eq!(cs_simples(&ctx_for(GroupTable::quaternion8(), None)).len(), 22);
    }

    #[test]
    fn f_action_identity_fixes_everything() {
        let ctx = ctx_for(s3(), None);
        let action = cs_f_action(&ctx).unwrap();
        assert_eq!(action.stable_labels().len(), 8);
    }

    #[test]
    fn f_action_c3_inversion() {
        let c3 = GroupTable::cyclic(3);
        let inv = GroupAutomorphism::inversion(&c3).unwrap();
        let ctx = ctx_for(c3, Some(inv));
        let action = cs_f_action(&ctx).unwrap();
        assert_eq!(action.labels.len(), 9);
        let stable = action.stable_labels();
        assert_eq!(stable.len(), 1);
        // the stable simple is (identity class, trivial character)
        let cs = stable[0];
        assert_eq!(ctx.classes.rep(cs.class), 0);
        let row = ctx.tables[cs.class].row(cs.char_index);
        assert!(row.iter().all(|v| v.is_one()));
    }

    #[test]
    fn f_action_klein_swap() {
        let klein = GroupTable::abelian(&[2, 2]);
        let swap = GroupAutomorphism::new(&klein, vec![0, 2, 1, 3]).unwrap();
        let ctx = ctx_for(klein, Some(swap));
        let action = cs_f_action(&ctx).unwrap();
        assert_eq!(action.labels.len(), 16);
        assert_eq!(action.stable_labels().len(), 4);
    }

    #[test]
    fn c3_inversion_matrix_is_one() {
        let c3 = GroupTable::cyclic(3);
        let inv = GroupAutomorphism::inversion(&c3).unwrap();
        let ctx = ctx_for(c3, Some(inv));
        let s = crossed_s_matrix(&ctx).unwrap();
        assert_eq!(s.size(), 1);
        assert_eq!(s.entries[0][0], Cyclotomic::one());
        // T is the constant 1 after phase normalisation
        assert_eq!(s.weil_data[0].trace.values, vec![Cyclotomic::one()]);
        assert_eq!(s.weil_data[0].norm_scalar, BigRational::one());
    }

    #[test]
    fn classical_double_of_c2() {
        // for an abelian group with F = id the entries factor as
        // rho(t^{-1}) conj(xi(x)) / |A|, the character-pairing kernel
        let ctx = ctx_for(GroupTable::cyclic(2), None);
        let s = crossed_s_matrix(&ctx).unwrap();
        assert_eq!(s.size(), 4);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        for (ri, &cs) in s.row_labels.iter().enumerate() {
            let x = ctx.classes.rep(cs.class);
            for (ci, &w) in s.col_labels.iter().enumerate() {
                let t = ctx.space.blocks[w.block].t_rep;
                let block_table = ctx.space.block_table(w.block).unwrap();
                let rho_t = ctx.tables[cs.class].value(cs.char_index, ctx.group.inv[t]);
                let xi_x = block_table.value(w.char_index, x);
                let expected = rho_t.mul(&xi_x.conj()).scale(&half);
                assert_eq!(s.entries[ri][ci], expected);
                // entries are +-1/2
                let sq = s.entries[ri][ci].mul(&s.entries[ri][ci]);
                assert_eq!(
                    sq,
                    Cyclotomic::from_rational(BigRational::new(
                        BigInt::from(1),
                        BigInt::from(4)
                    ))
                );
            }
        }
    }

    #[test]
    fn s3_identity_matrix_against_classical_formula() {
        let ctx = ctx_for(s3(), None);
        let s = crossed_s_matrix(&ctx).unwrap();
        assert_eq!(s.size(), 8);
        let g = &*ctx.group;
        // independent route: for commuting pairs,
        // S = (1/(|C(x)||C(t)|)) sum_{h: h x h^{-1} commutes with t}
        //     rho(h^{-1} t^{-1} h) conj(xi(h x h^{-1}))
        for (ri, &cs) in s.row_labels.iter().enumerate() {
            let x = ctx.classes.rep(cs.class);
            for (ci, &w) in s.col_labels.iter().enumerate() {
                let block = &ctx.space.blocks[w.block];
                let t = block.t_rep;
                let block_table = ctx.space.block_table(w.block).unwrap();
                let mut acc = Cyclotomic::zero();
                for h in 0..g.n {
                    let u = g.conj(h, x);
                    if g.mul(u, t) != g.mul(t, u) {
                        continue;
                    }
                    let rho_val = ctx.tables[cs.class].value(
                        cs.char_index,
                        ctx.centralizers[cs.class]
                            .from_parent(g.conj(g.inv[h], g.inv[t]))
                            .unwrap(),
                    );
                    let xi_val =
                        block_table.value(w.char_index, block.fixed.from_parent(u).unwrap());
                    acc = acc.add(&rho_val.mul(&xi_val.conj()));
                }
                let expected = acc.scale(&BigRational::new(
                    BigInt::from(1),
                    BigInt::from(ctx.centralizers[cs.class].order() * block.fixed.order()),
                ));
                assert_eq!(s.entries[ri][ci], expected, "entry ({ri},{ci})");
            }
        }
    }

    #[test]
    fn trace_functions_are_orthonormal() {
        for ctx in [
            ctx_for(s3(), None),
            {
                let klein = GroupTable::abelian(&[2, 2]);
                let swap = GroupAutomorphism::new(&klein, vec![0, 2, 1, 3]).unwrap();
                ctx_for(klein, Some(swap))
            },
        ] {
            let s = crossed_s_matrix(&ctx).unwrap();
            s.verify_trace_orthonormality().unwrap();
            for d in &s.weil_data {
                assert_eq!(d.norm_scalar, BigRational::one());
            }
        }
    }

    #[test]
    fn extension_change_is_a_global_root_of_unity() {
        let klein = GroupTable::abelian(&[2, 2]);
        let swap = GroupAutomorphism::new(&klein, vec![0, 2, 1, 3]).unwrap();
        let ctx = ctx_for(klein, Some(swap));
        let action = cs_f_action(&ctx).unwrap();
        for cs in action.stable_labels() {
            let datum = cs_trace_function(&ctx, cs).unwrap();
            let zc = &ctx.centralizers[cs.class];
            for ext in &datum.all_extensions {
                let alt = trace_from_extension(&ctx, cs, datum.a, zc, ext).unwrap();
                // ratio is one m-th root of unity across all nonzero orbits
                let mut ratio: Option<Cyclotomic> = None;
                for (v0, v1) in datum.trace.values.iter().zip(&alt.values) {
                    assert_eq!(v0.is_zero(), v1.is_zero());
                    if v0.is_zero() {
                        continue;
                    }
                    let r = v1.div(v0).unwrap();
                    match &ratio {
                        None => ratio = Some(r),
                        Some(prev) => assert_eq!(*prev, r),
                    }
                }
                let r = ratio.expect("trace function is nonzero");
                let mut pow = Cyclotomic::one();
                for _ in 0..datum.sigma_order {
                    pow = pow.mul(&r);
                }
                assert!(pow.is_one(), "ratio is an m-th root of unity");
                // <T,T> is extension independent
                assert_eq!(hermitian_ip(&alt, &alt).unwrap(), Cyclotomic::one());
            }
        }
    }

    #[test]
    fn inner_product_check_examples() {
        // (C3, inversion): the unique pair gives lhs = rhs = 1
        let c3 = GroupTable::cyclic(3);
        let inv = GroupAutomorphism::inversion(&c3).unwrap();
        let ctx = ctx_for(c3, Some(inv));
        let s = crossed_s_matrix(&ctx).unwrap();
        let chk = inner_product_check(&ctx, &s.weil_data[0], &s.col_characters[0]).unwrap();
        assert!(chk.equal);
        assert_eq!(chk.lhs, Cyclotomic::one());

        // (S3, id): (1, triv) against (1, triv). T is supported on u = 1
        // across all blocks while chi lives on the t = 1 block, so the
        // pairing is 1/(|C(x)| |G^tF|) * |G| = 1/6, the classical
        // unit-unit entry of the S3 Fourier matrix.
        let ctx = ctx_for(s3(), None);
        let s = crossed_s_matrix(&ctx).unwrap();
        let id_class = ctx.classes.class_of[ctx.group.id];
        let triv_row = (0..ctx.tables[id_class].num_irreps())
            .find(|&r| ctx.tables[id_class].row(r).iter().all(|v| v.is_one()))
            .unwrap();
        let ri = s
            .row_labels
            .iter()
            .position(|cs| cs.class == id_class && cs.char_index == triv_row)
            .unwrap();
        let id_block =
            ctx.space.blocks.iter().position(|b| b.t_rep == ctx.group.id).unwrap();
        let block_table = ctx.space.block_table(id_block).unwrap();
        let triv_col = (0..block_table.num_irreps())
            .find(|&r| block_table.row(r).iter().all(|v| v.is_one()))
            .unwrap();
        let ci = s
            .col_labels
            .iter()
            .position(|w| w.block == id_block && w.char_index == triv_col)
            .unwrap();
        let chk = inner_product_check(&ctx, &s.weil_data[ri], &s.col_characters[ci]).unwrap();
        assert!(chk.equal);
        assert_eq!(
            chk.lhs,
            Cyclotomic::from_rational(BigRational::new(BigInt::from(1), BigInt::from(6)))
        );
    }

    #[test]
    fn inner_product_check_exhaustive_klein_swap() {
        let klein = GroupTable::abelian(&[2, 2]);
        let swap = GroupAutomorphism::new(&klein, vec![0, 2, 1, 3]).unwrap();
        let ctx = ctx_for(klein, Some(swap));
        let s = crossed_s_matrix(&ctx).unwrap();
        let mut count = 0;
        for datum in &s.weil_data {
            for chi in &s.col_characters {
                let chk = inner_product_check(&ctx, datum, chi).unwrap();
                assert!(chk.equal);
                count += 1;
            }
        }
        assert_eq!(count, 16);
    }

    #[test]
    fn unstable_simple_rejected() {
        let c3 = GroupTable::cyclic(3);
        let inv = GroupAutomorphism::inversion(&c3).unwrap();
        let ctx = ctx_for(c3, Some(inv));
        // (identity class, nontrivial character) is not stable
        let bad = CSLabel { class: 0, char_index: 1 };
        assert!(matches!(cs_trace_function(&ctx, bad), Err(Error::NotFixed)));
    }
}
