//! The space of pairs R = {(x,t) : F(x) = t^{-1} x t} for a group with
//! automorphism, and invariant functions on it.
//!
//! G acts by h.(x,t) = (h x h^{-1}, h t F(h)^{-1}). The orbits are indexed by
//! pairs (twisted class of t, conjugacy class of x in the fixed subgroup of
//! ad(t) o F), so invariant functions are exactly tuples of class functions,
//! one per twisted class: the convolution algebra of class functions on all
//! the twisted fixed subgroups at once. The bilinear and Hermitian forms and
//! the functional `lambda` live here.

use num::{BigInt, BigRational};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::chartab::{character_table_with_classes, CharacterTable};
use crate::cyclotomic::Cyclotomic;
use crate::group::{
    conjugacy_classes, f_twisted_classes, fixed_subgroup, ClassData, GroupAutomorphism,
    GroupTable, Subgroup, TwistedClassData,
};
use crate::{Error, Result};

/// One twisted class worth of structure: the fixed subgroup of ad(t) o F for
/// the canonical representative t, with its conjugacy data.
pub struct Block {
    pub twisted_class: usize,
    /// Canonical (minimal-index) representative of the twisted class.
    pub t_rep: usize,
    pub fixed: Subgroup,
    pub fixed_classes: ClassData,
    /// Index of this block's first orbit.
    pub orbit_offset: usize,
}

/// A label (t, xi): twisted class representative and an irreducible
/// character of the fixed subgroup attached to it.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct IrrepLabel {
    pub block: usize,
    pub char_index: usize,
}

struct PairData {
    orbit: usize,
    /// h with (x, t) = h . (orbit rep)
    transporter: usize,
}

/// The G-set R with orbit, stabilizer and transporter data.
pub struct RSpace {
    pub group: Arc<GroupTable>,
    pub frobenius: GroupAutomorphism,
    pub twisted: TwistedClassData,
    pub blocks: Vec<Block>,
    /// Orbit representatives (u, t_rep), u a class representative of the
    /// fixed subgroup in parent indices.
    pub orbit_reps: Vec<(usize, usize)>,
    pub orbit_stab: Vec<usize>,
    pub orbit_block: Vec<usize>,
    pairs: HashMap<(usize, usize), PairData>,
    tables: Mutex<HashMap<usize, Arc<CharacterTable>>>,
}

impl RSpace {
    /// The full space for (G, F).
    pub fn new(group: Arc<GroupTable>, frobenius: GroupAutomorphism) -> Result<RSpace> {
        let twisted = f_twisted_classes(&group, &frobenius);
        let all: Vec<usize> = (0..twisted.num_classes()).collect();
        Self::build(group, frobenius, twisted, &all)
    }

    /// Only the block of the identity twisted class. This is the right
    /// instantiation for the q-points of a connected group, where a single
    /// form carries everything: invariant functions on this block are the
    /// ordinary class functions on G with the stabilizer-weighted forms.
    pub fn single_block(group: Arc<GroupTable>) -> Result<RSpace> {
        let frobenius = GroupAutomorphism::identity(&group);
        let twisted = f_twisted_classes(&group, &frobenius);
        let id_class = twisted.class_of[group.id];
        Self::build(group, frobenius, twisted, &[id_class])
    }

    fn build(
        group: Arc<GroupTable>,
        frobenius: GroupAutomorphism,
        twisted: TwistedClassData,
        block_classes: &[usize],
    ) -> Result<RSpace> {
        let g = &*group;
        let mut blocks = Vec::new();
        let mut orbit_reps = Vec::new();
        let mut orbit_stab = Vec::new();
        let mut orbit_block = Vec::new();
        let mut pairs: HashMap<(usize, usize), PairData> = HashMap::new();
        for &tc in block_classes {
            let t_rep = twisted.rep(tc);
            let tf = frobenius.twist_by(g, t_rep);
            // fixed points of x -> t F(x) t^{-1}; equivalently F(x) = t^{-1} x t
            let fixed = fixed_subgroup(g, &tf);
            let fixed_classes = conjugacy_classes(&fixed.table);
            let orbit_offset = orbit_reps.len();
            let block_idx = blocks.len();
            for (ci, cls) in fixed_classes.classes.iter().enumerate() {
                let u = fixed.to_parent(cls[0]);
                let orbit = orbit_reps.len();
                orbit_reps.push((u, t_rep));
                orbit_stab.push(fixed_classes.centralizer_orders[ci]);
                orbit_block.push(block_idx);
                // sweep the orbit, recording transporters
                let mut queue = vec![(u, t_rep)];
                pairs.insert((u, t_rep), PairData { orbit, transporter: g.id });
                while let Some((x, t)) = queue.pop() {
                    let h0 = pairs[&(x, t)].transporter;
                    for h in 0..g.n {
                        let nx = g.conj(h, x);
                        let nt = g.mul(g.mul(h, t), g.inv[frobenius.apply(h)]);
                        if let std::collections::hash_map::Entry::Vacant(e) =
                            pairs.entry((nx, nt))
                        {
                            e.insert(PairData { orbit, transporter: g.mul(h, h0) });
                            queue.push((nx, nt));
                        }
                    }
                }
            }
            blocks.push(Block { twisted_class: tc, t_rep, fixed, fixed_classes, orbit_offset });
        }
        let space = RSpace {
            group,
            frobenius,
            twisted,
            blocks,
            orbit_reps,
            orbit_stab,
            orbit_block,
            pairs,
            tables: Mutex::new(HashMap::new()),
        };
        space.verify()?;
        Ok(space)
    }

    fn verify(&self) -> Result<()> {
        let g = &*self.group;
        // every pair of R in the covered blocks appears exactly once, and
        // membership (x,t) in R is equivalent to x fixed by ad(t) o F
        let mut count = 0usize;
        for block in &self.blocks {
            for &t in &self.twisted.classes[block.twisted_class] {
                for x in 0..g.n {
                    let in_r = self.frobenius.apply(x) == g.mul(g.mul(g.inv[t], x), t);
                    if in_r {
                        count += 1;
                        if !self.pairs.contains_key(&(x, t)) {
                            return Err(Error::Internal(format!(
                                "pair ({x},{t}) missed by orbit sweep"
                            )));
                        }
                    } else if self.pairs.contains_key(&(x, t)) {
                        return Err(Error::Internal(format!("spurious pair ({x},{t})")));
                    }
                }
            }
        }
        if count != self.pairs.len() {
            return Err(Error::Internal("pair count mismatch".into()));
        }
        // transporters and stabilizers
        for ((x, t), data) in &self.pairs {
            let (u, tr) = self.orbit_reps[data.orbit];
            let h = data.transporter;
            if g.conj(h, u) != *x || g.mul(g.mul(h, tr), g.inv[self.frobenius.apply(h)]) != *t {
                return Err(Error::Internal("bad transporter".into()));
            }
        }
        for (o, &(u, t)) in self.orbit_reps.iter().enumerate() {
            let stab = (0..g.n)
                .filter(|&h| {
                    g.conj(h, u) == u
                        && g.mul(g.mul(h, t), g.inv[self.frobenius.apply(h)]) == t
                })
                .count();
            if stab != self.orbit_stab[o] {
                return Err(Error::Internal(format!(
                    "stabilizer of orbit {o} is {stab}, expected {}",
                    self.orbit_stab[o]
                )));
            }
        }
        Ok(())
    }

    pub fn num_orbits(&self) -> usize {
        self.orbit_reps.len()
    }

    pub fn orbit_of(&self, x: usize, t: usize) -> Option<usize> {
        self.pairs.get(&(x, t)).map(|p| p.orbit)
    }

    pub fn transporter_of(&self, x: usize, t: usize) -> Option<usize> {
        self.pairs.get(&(x, t)).map(|p| p.transporter)
    }

    pub fn contains_pair(&self, x: usize, t: usize) -> bool {
        self.pairs.contains_key(&(x, t))
    }

    /// Character table of a block's fixed subgroup (computed once).
    pub fn block_table(&self, block: usize) -> Result<Arc<CharacterTable>> {
        let mut cache = self.tables.lock().unwrap();
        if let Some(t) = cache.get(&block) {
            return Ok(t.clone());
        }
        let b = &self.blocks[block];
        let table = character_table_with_classes(&b.fixed.table, b.fixed_classes.clone())?;
        let arc = Arc::new(table);
        cache.insert(block, arc.clone());
        Ok(arc)
    }

    /// All irreducible-character labels across blocks, in deterministic order.
    pub fn irrep_labels(&self) -> Result<Vec<IrrepLabel>> {
        let mut labels = Vec::new();
        for b in 0..self.blocks.len() {
            let table = self.block_table(b)?;
            for char_index in 0..table.num_irreps() {
                labels.push(IrrepLabel { block: b, char_index });
            }
        }
        Ok(labels)
    }
}

/// A G-invariant function on R, stored on orbit representatives.
#[derive(Clone)]
pub struct RFunction {
    pub space: Arc<RSpace>,
    pub values: Vec<Cyclotomic>,
}

impl RFunction {
    pub fn zero(space: Arc<RSpace>) -> RFunction {
        let values = vec![Cyclotomic::zero(); space.num_orbits()];
        RFunction { space, values }
    }

    pub fn from_orbit_values(space: Arc<RSpace>, values: Vec<Cyclotomic>) -> RFunction {
        assert_eq!(values.len(), space.num_orbits());
        RFunction { space, values }
    }

    /// Delta supported on the orbit of (id, t_rep) of the given block.
    pub fn delta_identity(space: Arc<RSpace>, block: usize) -> RFunction {
        let t = space.blocks[block].t_rep;
        let orbit = space.orbit_of(space.group.id, t).expect("(1,t) lies in R");
        let mut f = RFunction::zero(space);
        f.values[orbit] = Cyclotomic::one();
        f
    }

    pub fn value_at(&self, x: usize, t: usize) -> Option<&Cyclotomic> {
        self.space.orbit_of(x, t).map(|o| &self.values[o])
    }

    fn same_space(&self, other: &RFunction) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch("functions live on different spaces".into()))
        }
    }
}

/// Serialized as a list of {"orbit": [x_index, t_index], "value": scalar}
/// over the orbit representatives.
impl Serialize for RFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            orbit: [usize; 2],
            value: &'a Cyclotomic,
        }
        let mut seq = serializer.serialize_seq(Some(self.values.len()))?;
        for (o, value) in self.values.iter().enumerate() {
            let (x, t) = self.space.orbit_reps[o];
            seq.serialize_element(&Entry { orbit: [x, t], value })?;
        }
        seq.end()
    }
}

/// The character of the label W = (t, xi): supported on the block of t,
/// with value xi(h^{-1} x h) at a pair (x, h t F(h)^{-1}).
///
/// Well-definedness under change of transporter is verified on the full set
/// of pairs, not only on representatives.
pub fn irrep_character(space: &Arc<RSpace>, label: IrrepLabel) -> Result<RFunction> {
    let table = space.block_table(label.block)?;
    let block = &space.blocks[label.block];
    let mut f = RFunction::zero(space.clone());
    for (ci, cls) in block.fixed_classes.classes.iter().enumerate() {
        let u = block.fixed.to_parent(cls[0]);
        let orbit = space.orbit_of(u, block.t_rep).expect("rep pair is in R");
        f.values[orbit] = table.values[label.char_index][ci].clone();
    }
    verify_invariance(space, label, &f)?;
    Ok(f)
}

/// Check that evaluating xi through any transporter gives the stored value.
fn verify_invariance(space: &Arc<RSpace>, label: IrrepLabel, f: &RFunction) -> Result<()> {
    let g = &*space.group;
    let table = space.block_table(label.block)?;
    let block = &space.blocks[label.block];
    let t_rep = block.t_rep;
    for &t in &space.twisted.classes[block.twisted_class] {
        for x in 0..g.n {
            let orbit = match space.orbit_of(x, t) {
                Some(o) => o,
                None => continue,
            };
            // every h with t = h t_rep F(h)^{-1} must give the same value
            for h in 0..g.n {
                if g.mul(g.mul(h, t_rep), g.inv[space.frobenius.apply(h)]) != t {
                    continue;
                }
                let y = g.conj(g.inv[h], x);
                let ys = block
                    .fixed
                    .from_parent(y)
                    .ok_or_else(|| Error::Internal("conjugated point escaped the form".into()))?;
                let direct = &table.values[label.char_index][block.fixed_classes.class_of[ys]];
                if *direct != f.values[orbit] {
                    return Err(Error::Internal(
                        "character value depends on the transporter".into(),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Hermitian form: sum over orbits of f1 * conj(f2) / |Stab|.
pub fn hermitian_ip(f1: &RFunction, f2: &RFunction) -> Result<Cyclotomic> {
    f1.same_space(f2)?;
    let mut acc = Cyclotomic::zero();
    for o in 0..f1.space.num_orbits() {
        if f1.values[o].is_zero() || f2.values[o].is_zero() {
            continue;
        }
        let term = f1.values[o].mul(&f2.values[o].conj());
        acc = acc.add(&term.scale(&BigRational::new(
            BigInt::from(1),
            BigInt::from(f1.space.orbit_stab[o]),
        )));
    }
    Ok(acc)
}

/// Bilinear form: sum over orbits of f1(h,t) * f2(h^{-1},t) / |Stab|.
pub fn bilinear_ip(f1: &RFunction, f2: &RFunction) -> Result<Cyclotomic> {
    f1.same_space(f2)?;
    let g = &*f1.space.group;
    let mut acc = Cyclotomic::zero();
    for o in 0..f1.space.num_orbits() {
        if f1.values[o].is_zero() {
            continue;
        }
        let (u, t) = f1.space.orbit_reps[o];
        let other = f2
            .value_at(g.inv[u], t)
            .ok_or_else(|| Error::Internal("(h^{-1}, t) must lie in R".into()))?;
        if other.is_zero() {
            continue;
        }
        let term = f1.values[o].mul(other);
        acc = acc.add(&term.scale(&BigRational::new(
            BigInt::from(1),
            BigInt::from(f1.space.orbit_stab[o]),
        )));
    }
    Ok(acc)
}

/// Blockwise convolution: (f1 * f2)(u, t) = sum over v w = u in the fixed
/// subgroup of the block of f1(v,t) f2(w,t).
pub fn convolve(f1: &RFunction, f2: &RFunction) -> Result<RFunction> {
    f1.same_space(f2)?;
    let space = f1.space.clone();
    let g = &*space.group;
    let mut out = RFunction::zero(space.clone());
    for o in 0..space.num_orbits() {
        let (u, t) = space.orbit_reps[o];
        let block = &space.blocks[space.orbit_block[o]];
        let mut acc = Cyclotomic::zero();
        for vi in 0..block.fixed.order() {
            let v = block.fixed.to_parent(vi);
            let a = &f1.values[space.orbit_of(v, t).expect("block pair")];
            if a.is_zero() {
                continue;
            }
            let w = g.mul(g.inv[v], u);
            let b = &f2.values[space.orbit_of(w, t).expect("block pair")];
            if b.is_zero() {
                continue;
            }
            acc = acc.add(&a.mul(b));
        }
        out.values[o] = acc;
    }
    Ok(out)
}

/// lambda(f) = sum over twisted classes of f(1, t) / |G^{ad(t) o F}|.
pub fn lambda_functional(f: &RFunction) -> Cyclotomic {
    let space = &f.space;
    let mut acc = Cyclotomic::zero();
    for block in &space.blocks {
        let orbit = space.orbit_of(space.group.id, block.t_rep).expect("(1,t) lies in R");
        if f.values[orbit].is_zero() {
            continue;
        }
        acc = acc.add(&f.values[orbit].scale(&BigRational::new(
            BigInt::from(1),
            BigInt::from(block.fixed.order()),
        )));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space_c3_inv() -> Arc<RSpace> {
        let c3 = Arc::new(GroupTable::cyclic(3));
        let inv = GroupAutomorphism::inversion(&c3).unwrap();
        Arc::new(RSpace::new(c3, inv).unwrap())
    }

    fn space_klein_swap() -> Arc<RSpace> {
        let klein = Arc::new(GroupTable::abelian(&[2, 2]));
        let swap = GroupAutomorphism::new(&klein, vec![0, 2, 1, 3]).unwrap();
        Arc::new(RSpace::new(klein, swap).unwrap())
    }

    fn space_s3_id() -> Arc<RSpace> {
        let s3 = GroupTable::from_perm_generators(&[vec![1, 0, 2], vec![1, 2, 0]], 100)
            .unwrap()
            .table;
        let g = Arc::new(s3);
        let id = GroupAutomorphism::identity(&g);
        Arc::new(RSpace::new(g, id).unwrap())
    }

    #[test]
    fn c3_inversion_space() {
        let space = space_c3_inv();
        // R = {(0, t)}: x = -x forces x = 0
        assert_eq!(space.num_orbits(), 1);
        assert_eq!(space.orbit_stab[0], 1);
        let labels = space.irrep_labels().unwrap();
        assert_eq!(labels.len(), 1);
        let chi = irrep_character(&space, labels[0]).unwrap();
        assert_eq!(chi.values[0], Cyclotomic::one());
        assert_eq!(lambda_functional(&chi), Cyclotomic::one());
        assert_eq!(hermitian_ip(&chi, &chi).unwrap(), Cyclotomic::one());
    }

    #[test]
    fn klein_swap_space() {
        let space = space_klein_swap();
        // 2 twisted classes x 2 classes of the diagonal C2
        assert_eq!(space.num_orbits(), 4);
        assert_eq!(space.irrep_labels().unwrap().len(), 4);
    }

    #[test]
    fn identity_frobenius_counts() {
        let space = space_s3_id();
        // orbit count = sum over class reps t of #classes of C(t): 3 + 2 + 3
        assert_eq!(space.num_orbits(), 8);
    }

    #[test]
    fn characters_are_orthonormal_for_both_forms() {
        for space in [space_c3_inv(), space_klein_swap(), space_s3_id()] {
            let labels = space.irrep_labels().unwrap();
            let chars: Vec<RFunction> =
                labels.iter().map(|&w| irrep_character(&space, w).unwrap()).collect();
            for (i, a) in chars.iter().enumerate() {
                for (j, b) in chars.iter().enumerate() {
                    let expected = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
                    assert_eq!(hermitian_ip(a, b).unwrap(), expected);
                    assert_eq!(bilinear_ip(a, b).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn s3_two_dimensional_block_values() {
        let space = space_s3_id();
        // block of t = identity is the whole group; its 2-dimensional
        // character takes the values {2, 0, -1}
        let id_block =
            space.blocks.iter().position(|b| b.t_rep == space.group.id).unwrap();
        let table = space.block_table(id_block).unwrap();
        let row = table.degrees.iter().position(|&d| d == 2).unwrap();
        let w = IrrepLabel { block: id_block, char_index: row };
        let chi = irrep_character(&space, w).unwrap();
        let block = &space.blocks[id_block];
        let mut on_block: Vec<&Cyclotomic> = block
            .fixed_classes
            .classes
            .iter()
            .map(|cls| {
                let u = block.fixed.to_parent(cls[0]);
                chi.value_at(u, block.t_rep).unwrap()
            })
            .collect();
        on_block.sort_by(|a, b| a.cmp_key(b));
        assert_eq!(
            on_block,
            vec![&Cyclotomic::from_integer(-1), &Cyclotomic::zero(), &Cyclotomic::from_integer(2)]
        );
        // zero outside the block of t = 1
        for o in 0..space.num_orbits() {
            if space.orbit_block[o] != id_block {
                assert!(chi.values[o].is_zero());
            }
        }
    }

    #[test]
    fn delta_is_a_unit_for_convolution_on_its_block() {
        let space = space_s3_id();
        for b in 0..space.blocks.len() {
            let delta = RFunction::delta_identity(space.clone(), b);
            for &w in &space.irrep_labels().unwrap() {
                if w.block != b {
                    continue;
                }
                let chi = irrep_character(&space, w).unwrap();
                let conv = convolve(&delta, &chi).unwrap();
                for o in 0..space.num_orbits() {
                    if space.orbit_block[o] == b {
                        assert_eq!(conv.values[o], chi.values[o]);
                    }
                }
            }
        }
    }

    #[test]
    fn central_idempotents() {
        let space = space_s3_id();
        let labels = space.irrep_labels().unwrap();
        for &w in &labels {
            let chi = irrep_character(&space, w).unwrap();
            let table = space.block_table(w.block).unwrap();
            let deg = table.degrees[w.char_index];
            let form_order = space.blocks[w.block].fixed.order();
            let e = RFunction {
                space: space.clone(),
                values: chi
                    .values
                    .iter()
                    .map(|v| v.scale(&BigRational::new(BigInt::from(deg), BigInt::from(form_order))))
                    .collect(),
            };
            let sq = convolve(&e, &e).unwrap();
            for o in 0..space.num_orbits() {
                assert_eq!(sq.values[o], e.values[o]);
            }
            // lambda(chi_W) = deg / |G^{tF}|
            assert_eq!(
                lambda_functional(&chi),
                Cyclotomic::from_rational(BigRational::new(
                    BigInt::from(deg),
                    BigInt::from(form_order)
                ))
            );
        }
        // convolution of distinct characters in the same block vanishes
        for &w1 in &labels {
            for &w2 in &labels {
                if w1.block == w2.block && w1.char_index != w2.char_index {
                    let a = irrep_character(&space, w1).unwrap();
                    let b = irrep_character(&space, w2).unwrap();
                    let conv = convolve(&a, &b).unwrap();
                    assert!(conv.values.iter().all(|v| v.is_zero()));
                }
            }
        }
    }

    #[test]
    fn lambda_of_delta() {
        let space = space_s3_id();
        for (b, block) in space.blocks.iter().enumerate() {
            let delta = RFunction::delta_identity(space.clone(), b);
            assert_eq!(
                lambda_functional(&delta),
                Cyclotomic::from_rational(BigRational::new(
                    BigInt::from(1),
                    BigInt::from(block.fixed.order())
                ))
            );
        }
    }

    #[test]
    fn rep_reflection_property() {
        // {(h,t)} reps iff {(h, h^{-1} t)} reps; Stab(x,t) = Stab(x, xt)
        for space in [space_c3_inv(), space_klein_swap(), space_s3_id()] {
            let g = &*space.group;
            let mut seen = vec![false; space.num_orbits()];
            for o in 0..space.num_orbits() {
                let (u, t) = space.orbit_reps[o];
                let t2 = g.mul(g.inv[u], t);
                let o2 = space.orbit_of(u, t2).expect("(h, h^{-1} t) is in R");
                assert!(!seen[o2], "reflection hit an orbit twice");
                seen[o2] = true;
                let o3 = space.orbit_of(u, g.mul(u, t)).expect("(x, xt) is in R");
                assert_eq!(space.orbit_stab[o], space.orbit_stab[o3]);
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn bilinear_equals_hermitian_on_characters() {
        // conj(chi(h,t)) = chi(h^{-1},t) makes the two forms agree on
        // pairs of irreducible characters
        let space = space_klein_swap();
        let labels = space.irrep_labels().unwrap();
        for &w1 in &labels {
            for &w2 in &labels {
                let a = irrep_character(&space, w1).unwrap();
                let b = irrep_character(&space, w2).unwrap();
                assert_eq!(bilinear_ip(&a, &b).unwrap(), hermitian_ip(&a, &b).unwrap());
            }
        }
    }

    #[test]
    fn bilinear_is_hermitian_of_the_reflected_conjugate() {
        // (f1, f2) = <f1, g> where g(h,t) = conj(f2(h^{-1}, t)), for any
        // pair of invariant functions, not only characters
        for space in [space_klein_swap(), space_s3_id()] {
            let g = &*space.group;
            let n = space.num_orbits();
            // a couple of deterministic non-character functions
            let f1 = RFunction::from_orbit_values(
                space.clone(),
                (0..n)
                    .map(|o| Cyclotomic::root_of_unity(12, o as i64).scale(&big(o as i64 + 1)))
                    .collect(),
            );
            let f2 = RFunction::from_orbit_values(
                space.clone(),
                (0..n).map(|o| Cyclotomic::root_of_unity(8, 3 * o as i64 + 1)).collect(),
            );
            let reflected = RFunction::from_orbit_values(
                space.clone(),
                (0..n)
                    .map(|o| {
                        let (u, t) = space.orbit_reps[o];
                        f2.value_at(g.inv[u], t).unwrap().conj()
                    })
                    .collect(),
            );
            assert_eq!(
                bilinear_ip(&f1, &f2).unwrap(),
                hermitian_ip(&f1, &reflected).unwrap()
            );
        }
    }

    fn big(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn single_block_space_is_ordinary_class_functions() {
        let s3 = GroupTable::from_perm_generators(&[vec![1, 0, 2], vec![1, 2, 0]], 100)
            .unwrap()
            .table;
        let g = Arc::new(s3);
        let space = Arc::new(RSpace::single_block(g).unwrap());
        assert_eq!(space.blocks.len(), 1);
        assert_eq!(space.num_orbits(), 3);
        let labels = space.irrep_labels().unwrap();
        assert_eq!(labels.len(), 3);
        let chi = irrep_character(&space, labels[2]).unwrap();
        assert_eq!(hermitian_ip(&chi, &chi).unwrap(), Cyclotomic::one());
    }

    #[test]
    fn mismatched_spaces_rejected() {
        let a = space_c3_inv();
        let b = space_c3_inv();
        let fa = RFunction::zero(a);
        let fb = RFunction::zero(b);
        assert!(hermitian_ip(&fa, &fb).is_err());
    }
}
