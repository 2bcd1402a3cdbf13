//! The group U(F_q) with law (x,a)(y,b) = (x+y, a+b+x*y^p), its partition
//! into packets, and the per-packet transition matrices between induced
//! irreducible characters and the kernel-indexed trace functions.
//!
//! The group is connected as an algebraic group, so a single form carries all
//! class functions: the pair space is instantiated with the identity twist.
//! Everything downstream is exact: characters come from the Lagrangian
//! induction construction and are certified pointwise against the closed
//! formula; the transition matrix is certified against the crossed matrix of
//! the metric group attached to the kernel.

use num::{BigInt, BigRational};
use std::sync::Arc;

use crate::chartab::{character_table, class_hermitian_ip, induced_character, CharacterTable};
use crate::class_functions::{hermitian_ip, lambda_functional, RFunction, RSpace};
use crate::cyclotomic::Cyclotomic;
use crate::finite_field::{FieldElt, FieldTower, FqField};
use crate::group::{GroupTable, Subgroup};
use crate::metric::{
    from_additive_roots, metric_crossed_data, verify_unitary, MetricCrossedData,
};
use crate::{Error, Result, DEFAULT_SIZE_BOUND};

/// U(F_q) as an explicit table. Element (x,a) has index x_idx * q + a_idx.
pub struct HeisGroup {
    pub tower: FieldTower,
    pub field: FqField,
    pub q: usize,
    pub table: Arc<GroupTable>,
}

impl HeisGroup {
    pub fn new(p: u32, m: usize, bound: usize) -> Result<HeisGroup> {
        let tower = FieldTower::new(p, m)?;
        let field = tower.base();
        let q = field.size();
        if q * q > bound {
            return Err(Error::SizeBound { bound, actual: q * q });
        }
        let pp = p as u64;
        let mut mult = vec![vec![0usize; q * q]; q * q];
        let elts: Vec<FieldElt> = field.elements().collect();
        for xi in 0..q {
            for ai in 0..q {
                for yi in 0..q {
                    let xyp = field.mul(&elts[xi], &field.pow(&elts[yi], pp));
                    let xsum = field.add(&elts[xi], &elts[yi]);
                    let xsum_idx = field.index(&xsum);
                    for bi in 0..q {
                        let second = field.add(&field.add(&elts[ai], &elts[bi]), &xyp);
                        mult[xi * q + ai][yi * q + bi] = xsum_idx * q + field.index(&second);
                    }
                }
            }
        }
        let mut table = GroupTable::from_mult_table(mult)?;
        table.element_names = Some(
            (0..q * q)
                .map(|idx| format!("({},{})", idx / q, idx % q))
                .collect(),
        );
        Ok(HeisGroup { tower, field, q, table: Arc::new(table) })
    }

    pub fn p(&self) -> u32 {
        self.tower.p
    }

    pub fn index(&self, x: &FieldElt, a: &FieldElt) -> usize {
        self.field.index(x) * self.q + self.field.index(a)
    }

    pub fn decode(&self, idx: usize) -> (FieldElt, FieldElt) {
        (self.field.element(idx / self.q), self.field.element(idx % self.q))
    }

    /// zeta_p^{tr(s a)}, the central character attached to s.
    pub fn chi_s(&self, s: &FieldElt, a: &FieldElt) -> Cyclotomic {
        let e = self.tower.trace_to_prime(&self.field.mul(s, a));
        Cyclotomic::root_of_unity(self.p(), e as i64)
    }

    /// Exponent of the commutator pairing: tr(s (x y^p - x^p y)).
    pub fn pairing_exponent(&self, s: &FieldElt, x: &FieldElt, y: &FieldElt) -> u32 {
        let f = &self.field;
        let pp = self.p() as u64;
        let v = f.sub(&f.mul(x, &f.pow(y, pp)), &f.mul(&f.pow(x, pp), y));
        self.tower.trace_to_prime(&f.mul(s, &v))
    }

    /// The central subgroup H = {(0,a)}.
    pub fn center_subgroup(&self) -> Subgroup {
        let elems: Vec<usize> = (0..self.q).collect();
        Subgroup::from_elements(&self.table, elems).expect("H is a subgroup")
    }
}

/// Shared per-(p,m) data: the group, its exact character table, and the
/// single-form pair space used for all inner products.
pub struct HeisContext {
    pub heis: HeisGroup,
    pub space: Arc<RSpace>,
    pub table: Arc<CharacterTable>,
}

pub fn heis_context(p: u32, m: usize) -> Result<HeisContext> {
    heis_context_bounded(p, m, DEFAULT_SIZE_BOUND)
}

pub fn heis_context_bounded(p: u32, m: usize, bound: usize) -> Result<HeisContext> {
    let heis = HeisGroup::new(p, m, bound)?;
    let space = Arc::new(RSpace::single_block(heis.table.clone())?);
    let table = space.block_table(0)?;
    Ok(HeisContext { heis, space, table })
}

impl HeisContext {
    pub fn classes(&self) -> &crate::group::ClassData {
        &self.table.class_data
    }

    /// Class function (values per class) lifted to the pair space.
    pub fn rfunction(&self, per_class: Vec<Cyclotomic>) -> RFunction {
        assert_eq!(per_class.len(), self.space.num_orbits());
        RFunction::from_orbit_values(self.space.clone(), per_class)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PacketKind {
    Linear,
    Heisenberg,
}

/// One minimal-idempotent block of the character theory of U(F_q).
pub struct PacketDescriptor {
    pub kind: PacketKind,
    pub s: FieldElt,
    /// Support dimension of the defining subgroup: 2 for linear, 1 otherwise.
    pub n_e: usize,
    /// Twice the functional dimension d_e = (2 - n_e)/2, so 0 or 1.
    pub two_d_e: usize,
    /// The block idempotent as a class function on U(F_q).
    pub idempotent: Vec<Cyclotomic>,
    /// Rows of the character table belonging to this packet.
    pub members: Vec<usize>,
}

/// Convolution of class functions: (f*g)(z) = sum_{v w = z} f(v) g(w).
fn convolve_class_functions(
    g: &GroupTable,
    cd: &crate::group::ClassData,
    f1: &[Cyclotomic],
    f2: &[Cyclotomic],
) -> Vec<Cyclotomic> {
    cd.reps()
        .map(|z| {
            let mut acc = Cyclotomic::zero();
            for v in 0..g.n {
                let a = &f1[cd.class_of[v]];
                if a.is_zero() {
                    continue;
                }
                let b = &f2[cd.class_of[g.mul(g.inv[v], z)]];
                if b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            acc
        })
        .collect()
}

/// The q linear packets (s in F_q) and q-1 others (s in F_q^*), with their
/// idempotents verified: each is a convolution idempotent, they are pairwise
/// orthogonal, they sum to the delta at the identity, and the rows of the
/// character table are partitioned by the restriction-to-center test.
pub fn heis_packets(ctx: &HeisContext) -> Result<Vec<PacketDescriptor>> {
    let u = &ctx.heis;
    let g = &*u.table;
    let cd = ctx.classes();
    let q = u.q;
    let table = &ctx.table;
    let mut packets = Vec::new();
    let mut member_of = vec![None::<usize>; table.num_irreps()];

    for s in u.field.elements() {
        // t(x,a) = (1/q^2) chi_s(x): the block idempotent of the character
        // (x,a) -> chi_s(x) pulled back from U/H; convolving it against the
        // member reproduces the member
        let scale = BigRational::new(BigInt::from(1), BigInt::from(q * q));
        let idempotent: Vec<Cyclotomic> = cd
            .reps()
            .map(|rep| {
                let (x, _) = u.decode(rep);
                u.chi_s(&s, &x).scale(&scale)
            })
            .collect();
        // the unique member: the linear character (x,a) -> chi_s(x)
        let member = (0..table.num_irreps())
            .find(|&row| {
                table.degrees[row] == 1
                    && cd.reps().enumerate().all(|(k, rep)| {
                        let (x, _) = u.decode(rep);
                        table.values[row][k] == u.chi_s(&s, &x)
                    })
            })
            .ok_or_else(|| Error::Internal("pulled-back character not found".into()))?;
        if member_of[member].is_some() {
            return Err(Error::Internal("row claimed by two packets".into()));
        }
        member_of[member] = Some(packets.len());
        packets.push(PacketDescriptor {
            kind: PacketKind::Linear,
            s,
            n_e: 2,
            two_d_e: 0,
            idempotent,
            members: vec![member],
        });
    }

    for s in u.field.elements().skip(1) {
        // t = (1/q) chi_s on H = {(0,a)}, zero elsewhere
        let scale = BigRational::new(BigInt::from(1), BigInt::from(q));
        let idempotent: Vec<Cyclotomic> = cd
            .reps()
            .map(|rep| {
                let (x, a) = u.decode(rep);
                if x.is_zero() {
                    u.chi_s(&s, &a).scale(&scale)
                } else {
                    Cyclotomic::zero()
                }
            })
            .collect();
        // members by restriction to the center: value at (0,a) is deg * chi_s(a)
        let mut members = Vec::new();
        for row in 0..table.num_irreps() {
            let deg = Cyclotomic::from_integer(table.degrees[row] as i64);
            let is_member = u.field.elements().all(|a| {
                let idx = u.index(&u.field.zero(), &a);
                *table.value(row, idx) == deg.mul(&u.chi_s(&s, &a))
            });
            if is_member {
                if member_of[row].is_some() {
                    return Err(Error::Internal("row claimed by two packets".into()));
                }
                member_of[row] = Some(packets.len());
                members.push(row);
            }
        }
        packets.push(PacketDescriptor {
            kind: PacketKind::Heisenberg,
            s,
            n_e: 1,
            two_d_e: 1,
            idempotent,
            members,
        });
    }

    if member_of.iter().any(|m| m.is_none()) {
        return Err(Error::Internal("a character escaped the packet partition".into()));
    }

    // idempotency, orthogonality, completeness
    let mut total = vec![Cyclotomic::zero(); cd.num_classes()];
    for (i, p1) in packets.iter().enumerate() {
        let sq = convolve_class_functions(g, cd, &p1.idempotent, &p1.idempotent);
        if sq != p1.idempotent {
            return Err(Error::CheckFailed(format!("packet {i} idempotent fails t*t = t")));
        }
        for (k, v) in p1.idempotent.iter().enumerate() {
            total[k] = total[k].add(v);
        }
        for p2 in packets.iter().skip(i + 1) {
            let prod = convolve_class_functions(g, cd, &p1.idempotent, &p2.idempotent);
            if prod.iter().any(|v| !v.is_zero()) {
                return Err(Error::CheckFailed("packet idempotents not orthogonal".into()));
            }
        }
    }
    for (k, rep) in cd.reps().enumerate() {
        let expected = if rep == g.id { Cyclotomic::one() } else { Cyclotomic::zero() };
        if total[k] != expected {
            return Err(Error::CheckFailed(
                "packet idempotents do not sum to the identity delta".into(),
            ));
        }
    }
    // each idempotent acts as the identity on its members under convolution
    for packet in &packets {
        for &row in &packet.members {
            let chi: Vec<Cyclotomic> = table.values[row].clone();
            let conv = convolve_class_functions(g, cd, &packet.idempotent, &chi);
            if conv != chi {
                return Err(Error::CheckFailed(
                    "idempotent does not act as identity on a member".into(),
                ));
            }
        }
    }
    Ok(packets)
}

/// Kernel data for a nonzero s: the F_q-points of the kernel, the pullback
/// subgroup, and a Lagrangian above it.
pub struct LagrangianData {
    pub s: FieldElt,
    pub k_points: Vec<FieldElt>,
    pub k_tilde: Subgroup,
    pub lagrangian: Subgroup,
}

pub fn heis_lagrangian(ctx: &HeisContext, s: &FieldElt) -> Result<LagrangianData> {
    let u = &ctx.heis;
    let g = &*u.table;
    let q = u.q;
    let p = u.p() as u64;
    assert!(!s.is_zero());
    // K_s(F_q) = {k : s k^{p+1} in F_p} by direct enumeration
    let k_points: Vec<FieldElt> = u
        .field
        .elements()
        .filter(|k| {
            u.field
                .mul(s, &u.field.pow(k, p + 1))
                .in_prime_field()
        })
        .collect();
    // the commutator pairing on F_q has kernel exactly K_s(F_q)
    for x in u.field.elements() {
        let in_kernel = u.field.elements().all(|y| u.pairing_exponent(s, &x, &y) == 0);
        if in_kernel != k_points.contains(&x) {
            return Err(Error::CheckFailed(
                "pairing kernel differs from the direct enumeration".into(),
            ));
        }
    }
    let k_tilde_elems: Vec<usize> = (0..g.n)
        .filter(|&idx| k_points.contains(&u.decode(idx).0))
        .collect();
    let k_tilde = Subgroup::from_elements(g, k_tilde_elems)?;
    // |L| = q * sqrt(q * |K^F|); the radicand is always an even prime power
    let target_sq = q * k_points.len();
    let root = (1..=target_sq).find(|r| r * r == target_sq).ok_or_else(|| {
        Error::Internal("q |K^F| is not a perfect square".into())
    })?;
    let target = q * root;
    let mut current: Vec<usize> = k_tilde.elements.clone();
    let mut in_l = vec![false; g.n];
    for &e in &current {
        in_l[e] = true;
    }
    while current.len() < target {
        let mut extended = false;
        for cand in 0..g.n {
            if in_l[cand] {
                continue;
            }
            let (xc, _) = u.decode(cand);
            let isotropic = current.iter().all(|&v| {
                let (xv, _) = u.decode(v);
                u.pairing_exponent(s, &xc, &xv) == 0
            });
            if isotropic {
                let sub = Subgroup::generated(g, &{
                    let mut gens = current.clone();
                    gens.push(cand);
                    gens
                });
                current = sub.elements.clone();
                in_l = vec![false; g.n];
                for &e in &current {
                    in_l[e] = true;
                }
                extended = true;
                break;
            }
        }
        if !extended {
            return Err(Error::Internal("no isotropic extension found".into()));
        }
    }
    let lagrangian = Subgroup::from_elements(g, current)?;
    if lagrangian.order() != target {
        return Err(Error::Internal("overshot the isotropic target".into()));
    }
    // isotropy certificate on the full subgroup
    for &a in &lagrangian.elements {
        for &b in &lagrangian.elements {
            let (xa, _) = u.decode(a);
            let (xb, _) = u.decode(b);
            if u.pairing_exponent(s, &xa, &xb) != 0 {
                return Err(Error::Internal("subgroup is not isotropic".into()));
            }
        }
    }
    Ok(LagrangianData { s: s.clone(), k_points, k_tilde, lagrangian })
}

/// Extensions of chi_s from H to the pullback subgroup, indexed by the
/// characters of K_s(F_q). The set is certified to be exactly the linear
/// characters of the pullback restricting to chi_s (a torsor under the dual
/// of K_s(F_q)).
pub struct ExtensionData {
    /// Character table of K_s(F_q) as an abstract group; row w is omega_w.
    pub omega_table: CharacterTable,
    /// omega_w evaluated on k_points, in k_points order.
    pub omegas: Vec<Vec<Cyclotomic>>,
    /// extensions[w][i]: value of the omega_w-twist at element i of k_tilde.
    pub extensions: Vec<Vec<Cyclotomic>>,
    /// Index of the base extension (trivial omega).
    pub base: usize,
}

pub fn heis_extensions(
    ctx: &HeisContext,
    lag: &LagrangianData,
    k_tilde_table: &CharacterTable,
) -> Result<ExtensionData> {
    let u = &ctx.heis;
    let p = u.p();
    let kf = lag.k_points.len();
    // abstract table of K_s(F_q) under addition
    let mut mult = vec![vec![0usize; kf]; kf];
    for i in 0..kf {
        for j in 0..kf {
            let sum = u.field.add(&lag.k_points[i], &lag.k_points[j]);
            mult[i][j] = lag
                .k_points
                .iter()
                .position(|k| *k == sum)
                .ok_or_else(|| Error::Internal("kernel points not closed".into()))?;
        }
    }
    let k_group = GroupTable::from_mult_table(mult)?;
    let omega_table = character_table(&k_group)?;
    let omegas: Vec<Vec<Cyclotomic>> = (0..omega_table.num_irreps())
        .map(|w| (0..kf).map(|i| omega_table.value(w, i).clone()).collect())
        .collect();

    // the base extension of chi_s to the pullback subgroup
    let base_values: Vec<Cyclotomic> = if p % 2 == 1 {
        // explicit closed form: (k,b) -> chi_s(b - k^{p+1}/2)
        let two_inv = u.field.inv(&u.field.from_prime(2))?;
        (0..lag.k_tilde.order())
            .map(|i| {
                let (k, b) = u.decode(lag.k_tilde.to_parent(i));
                let shift = u
                    .field
                    .mul(&u.field.pow(&k, p as u64 + 1), &two_inv);
                u.chi_s(&lag.s, &u.field.sub(&b, &shift))
            })
            .collect()
    } else {
        // enumerate the linear characters of the pullback restricting to
        // chi_s on H and take the least (rows are already sorted)
        let row = (0..k_tilde_table.num_irreps())
            .find(|&row| {
                k_tilde_table.degrees[row] == 1
                    && u.field.elements().all(|a| {
                        let h_idx = u.index(&u.field.zero(), &a);
                        let sub_idx = lag.k_tilde.from_parent(h_idx).expect("H lies inside");
                        *k_tilde_table.value(row, sub_idx) == u.chi_s(&lag.s, &a)
                    })
            })
            .ok_or_else(|| Error::Internal("no extension of chi_s exists".into()))?;
        (0..lag.k_tilde.order())
            .map(|i| k_tilde_table.value(row, i).clone())
            .collect()
    };
    // homomorphism certificate for the base extension
    let kt = &lag.k_tilde.table;
    for i in 0..kt.n {
        for j in 0..kt.n {
            if base_values[kt.mul(i, j)] != base_values[i].mul(&base_values[j]) {
                return Err(Error::Internal("base extension is not a homomorphism".into()));
            }
        }
    }
    // all omega-twists
    let extensions: Vec<Vec<Cyclotomic>> = omegas
        .iter()
        .map(|omega| {
            (0..lag.k_tilde.order())
                .map(|i| {
                    let (k, _) = u.decode(lag.k_tilde.to_parent(i));
                    let kpos = lag.k_points.iter().position(|kk| *kk == k).unwrap();
                    omega[kpos].mul(&base_values[i])
                })
                .collect()
        })
        .collect();
    let base = omegas
        .iter()
        .position(|om| om.iter().all(|v| v.is_one()))
        .ok_or_else(|| Error::Internal("trivial character missing".into()))?;
    // torsor certificate: the twists are exactly the linear characters of
    // the pullback subgroup restricting to chi_s on H
    let mut enumerated: Vec<Vec<Cyclotomic>> = (0..k_tilde_table.num_irreps())
        .filter(|&row| {
            k_tilde_table.degrees[row] == 1
                && u.field.elements().all(|a| {
                    let h_idx = u.index(&u.field.zero(), &a);
                    let sub_idx = lag.k_tilde.from_parent(h_idx).expect("H lies inside");
                    *k_tilde_table.value(row, sub_idx) == u.chi_s(&lag.s, &a)
                })
        })
        .map(|row| (0..lag.k_tilde.order()).map(|i| k_tilde_table.value(row, i).clone()).collect())
        .collect();
    if enumerated.len() != kf {
        return Err(Error::CheckFailed(format!(
            "expected {kf} extensions, enumerated {}",
            enumerated.len()
        )));
    }
    for ext in &extensions {
        match enumerated.iter().position(|e| e == ext) {
            Some(pos) => {
                enumerated.remove(pos);
            }
            None => {
                return Err(Error::CheckFailed(
                    "an omega-twist is not an extension".into(),
                ))
            }
        }
    }
    Ok(ExtensionData { omega_table, omegas, extensions, base })
}

/// The irreducible characters of the packet of s, one per omega, produced by
/// extending to the Lagrangian and inducing up. Certified: irreducible,
/// independent of the chosen Lagrangian extension, pointwise equal to the
/// closed formula, and jointly equal to the restriction-to-center packet.
pub struct PacketCharacters {
    /// chars[w]: class function on U(F_q), aligned with omega index w.
    pub chars: Vec<Vec<Cyclotomic>>,
    pub degrees: Vec<usize>,
}

pub fn heis_lpacket_chars(
    ctx: &HeisContext,
    lag: &LagrangianData,
    ext: &ExtensionData,
    l_table: &CharacterTable,
    packet: &PacketDescriptor,
) -> Result<PacketCharacters> {
    let u = &ctx.heis;
    let g = &*u.table;
    let cd = ctx.classes();
    let q = u.q;
    let l_sub = &lag.lagrangian;
    let l_cd = &l_table.class_data;
    let mut chars = Vec::new();
    let mut degrees = Vec::new();
    for (w, chi_ext) in ext.extensions.iter().enumerate() {
        // all linear characters of L restricting to this extension
        let l_rows: Vec<usize> = (0..l_table.num_irreps())
            .filter(|&row| {
                l_table.degrees[row] == 1
                    && (0..lag.k_tilde.order()).all(|i| {
                        let parent = lag.k_tilde.to_parent(i);
                        let li = l_sub.from_parent(parent).expect("pullback lies in L");
                        *l_table.value(row, li) == chi_ext[i]
                    })
            })
            .collect();
        if l_rows.is_empty() {
            return Err(Error::Internal("no extension to the Lagrangian".into()));
        }
        let as_class_fn = |row: usize| -> Vec<Cyclotomic> {
            l_cd.reps().map(|rep| l_table.values[row][l_cd.class_of[rep]].clone()).collect()
        };
        let induced = induced_character(g, cd, l_sub, l_cd, &as_class_fn(l_rows[0]));
        // the induced character does not depend on the choice of extension
        for &other in l_rows.iter().skip(1) {
            let alt = induced_character(g, cd, l_sub, l_cd, &as_class_fn(other));
            if alt != induced {
                return Err(Error::CheckFailed(
                    "induced character depends on the Lagrangian extension".into(),
                ));
            }
        }
        // irreducibility
        if class_hermitian_ip(g, cd, &induced, &induced) != Cyclotomic::one() {
            return Err(Error::CheckFailed("induced character is not irreducible".into()));
        }
        // pointwise closed formula: (q^2/|L|) chi_ext(y,0) chi_s(b) on the
        // kernel fibres, zero elsewhere
        let scale = BigRational::new(BigInt::from(q * q), BigInt::from(l_sub.order()));
        for idx in 0..g.n {
            let (y, b) = u.decode(idx);
            let expected = if lag.k_points.contains(&y) {
                let y0 = lag
                    .k_tilde
                    .from_parent(u.index(&y, &u.field.zero()))
                    .expect("(y,0) lies in the pullback");
                chi_ext[y0].mul(&u.chi_s(&lag.s, &b)).scale(&scale)
            } else {
                Cyclotomic::zero()
            };
            if induced[cd.class_of[idx]] != expected {
                return Err(Error::CheckFailed(format!(
                    "closed character formula fails at element {idx}"
                )));
            }
        }
        degrees.push(
            induced[cd.class_of[g.id]]
                .as_rational()
                .and_then(|r| r.to_integer().try_into().ok())
                .ok_or_else(|| Error::Internal("degree is not a positive integer".into()))?,
        );
        chars.push(induced);
        let _ = w;
    }
    // the constructed set equals the restriction-to-center packet
    let mut expected_rows: Vec<Vec<Cyclotomic>> = packet
        .members
        .iter()
        .map(|&row| ctx.table.values[row].clone())
        .collect();
    if expected_rows.len() != chars.len() {
        return Err(Error::CheckFailed(format!(
            "packet has {} members but {} induced characters",
            expected_rows.len(),
            chars.len()
        )));
    }
    for c in &chars {
        match expected_rows.iter().position(|r| r == c) {
            Some(pos) => {
                expected_rows.remove(pos);
            }
            None => {
                return Err(Error::CheckFailed(
                    "induced character is not a packet member".into(),
                ))
            }
        }
    }
    Ok(PacketCharacters { chars, degrees })
}

/// Trace functions T_k(y,b) = [y = k] * base_extension(y,b), as class
/// functions, verified constant on conjugacy classes and mutually orthogonal.
pub struct TraceFunctions {
    /// t[i]: class function for k = k_points[i].
    pub functions: Vec<Vec<Cyclotomic>>,
    /// Common squared norm <T_k, T_k> (expected 1/q).
    pub norm: BigRational,
}

pub fn heis_trace_functions(
    ctx: &HeisContext,
    lag: &LagrangianData,
    ext: &ExtensionData,
) -> Result<TraceFunctions> {
    let u = &ctx.heis;
    let g = &*u.table;
    let cd = ctx.classes();
    let base = &ext.extensions[ext.base];
    let mut functions: Vec<Vec<Cyclotomic>> = Vec::new();
    for k in &lag.k_points {
        let mut per_class: Vec<Option<Cyclotomic>> = vec![None; cd.num_classes()];
        for idx in 0..g.n {
            let (y, _) = u.decode(idx);
            let val = if y == *k {
                let i = lag.k_tilde.from_parent(idx).expect("(k,b) lies in the pullback");
                base[i].clone()
            } else {
                Cyclotomic::zero()
            };
            let c = cd.class_of[idx];
            match &per_class[c] {
                None => per_class[c] = Some(val),
                Some(prev) => {
                    if *prev != val {
                        return Err(Error::CheckFailed(
                            "trace function is not a class function".into(),
                        ));
                    }
                }
            }
        }
        functions.push(per_class.into_iter().map(|v| v.unwrap()).collect());
    }
    // pairwise orthogonality and common norm via the pair space
    let rfs: Vec<RFunction> =
        functions.iter().map(|f| ctx.rfunction(f.clone())).collect();
    let mut norm: Option<BigRational> = None;
    for (i, a) in rfs.iter().enumerate() {
        for (j, b) in rfs.iter().enumerate() {
            let ip = hermitian_ip(a, b)?;
            if i == j {
                let r = ip
                    .as_rational()
                    .ok_or_else(|| Error::Internal("<T,T> is not rational".into()))?;
                match &norm {
                    None => norm = Some(r),
                    Some(prev) => {
                        if *prev != r {
                            return Err(Error::CheckFailed(
                                "trace-function norms differ".into(),
                            ));
                        }
                    }
                }
            } else if !ip.is_zero() {
                return Err(Error::CheckFailed("trace functions not orthogonal".into()));
            }
        }
    }
    Ok(TraceFunctions {
        functions,
        norm: norm.ok_or_else(|| Error::Internal("empty kernel".into()))?,
    })
}

/// The transition matrix of one packet: raw pairings, the certified
/// coefficient identity, the unitary normalisation, and the comparison with
/// the crossed matrix of the kernel metric group.
pub struct TransitionMatrix {
    /// raw[i][w] = <T_{k_i}, chi^{omega_w}>.
    pub raw: Vec<Vec<Cyclotomic>>,
    /// Certified: chi^w = sum_k coeff[k][w] T_k with coeff = (q^2/|L|) omega(k).
    pub coeffs: Vec<Vec<Cyclotomic>>,
    /// Unitary matrix sqrt(q) * raw.
    pub normalized: Vec<Vec<Cyclotomic>>,
    /// Column w of the normalized matrix matches coset column of the metric
    /// crossed matrix under this map, up to the recorded row phases.
    pub column_of_omega: Vec<usize>,
    pub row_phases: Vec<Cyclotomic>,
    pub metric: MetricCrossedData,
}

pub fn heis_transition_matrix(
    ctx: &HeisContext,
    lag: &LagrangianData,
    ext: &ExtensionData,
    chars: &PacketCharacters,
    traces: &TraceFunctions,
) -> Result<TransitionMatrix> {
    let u = &ctx.heis;
    let q = u.q;
    let kf = lag.k_points.len();
    let l_order = lag.lagrangian.order();

    let trace_rfs: Vec<RFunction> =
        traces.functions.iter().map(|f| ctx.rfunction(f.clone())).collect();
    let char_rfs: Vec<RFunction> =
        chars.chars.iter().map(|f| ctx.rfunction(f.clone())).collect();

    let mut raw = vec![vec![Cyclotomic::zero(); kf]; kf];
    let mut coeffs = vec![vec![Cyclotomic::zero(); kf]; kf];
    let norm_inv = Cyclotomic::from_rational(traces.norm.clone()).inv()?;
    let expected_scale = BigRational::new(BigInt::from(q * q), BigInt::from(l_order));
    for i in 0..kf {
        for w in 0..kf {
            let ip = hermitian_ip(&trace_rfs[i], &char_rfs[w])?;
            // coefficient of T_k in chi^w: <chi^w, T_k> / <T_k, T_k>
            let coeff = ip.conj().mul(&norm_inv);
            let expected = ext.omegas[w][i].scale(&expected_scale);
            if coeff != expected {
                return Err(Error::CheckFailed(format!(
                    "transition coefficient differs from (q^2/|L|) omega(k) at ({i},{w})"
                )));
            }
            raw[i][w] = ip;
            coeffs[i][w] = coeff;
        }
    }
    // pointwise expansion certificate: chi^w = sum_k coeff[k][w] T_k
    for w in 0..kf {
        for c in 0..chars.chars[w].len() {
            let mut acc = Cyclotomic::zero();
            for i in 0..kf {
                acc = acc.add(&coeffs[i][w].mul(&traces.functions[i][c]));
            }
            if acc != chars.chars[w][c] {
                return Err(Error::CheckFailed(
                    "character does not expand over the trace functions".into(),
                ));
            }
        }
    }
    // normalisation to a unitary matrix: divide by sqrt(<T,T>) = sqrt(1/q)
    let root_norm = Cyclotomic::sqrt_rational(&traces.norm)?;
    let scale = root_norm.inv()?;
    let normalized: Vec<Vec<Cyclotomic>> = raw
        .iter()
        .map(|row| row.iter().map(|v| v.mul(&scale)).collect())
        .collect();
    verify_unitary(&normalized)?;

    // comparison with the crossed matrix of (K_s, theta_s, x -> x^q)
    let roots = u.tower.additive_roots(&lag.s)?;
    let (metric_group, maut) = from_additive_roots(&u.tower, &roots)?;
    let metric = metric_crossed_data(&metric_group, &maut)?;
    // identify the abstract fixed points with k_points
    let fq_pts = roots.fq_points(&u.tower);
    let mut fixed_to_kpos = vec![usize::MAX; metric.fixed.len()];
    for (fi, &root_idx) in metric.fixed.iter().enumerate() {
        let elt = &fq_pts
            .iter()
            .find(|(ri, _)| *ri == root_idx)
            .ok_or_else(|| Error::Internal("fixed root has no F_q point".into()))?
            .1;
        fixed_to_kpos[fi] = lag
            .k_points
            .iter()
            .position(|k| k == elt)
            .ok_or_else(|| Error::Internal("fixed point outside the kernel points".into()))?;
    }
    // column identification: coset [l] -> the character k -> conj(b(k,l))
    let mut column_of_omega = vec![usize::MAX; kf];
    let mut used = vec![false; kf];
    for (ci, &l) in metric.coset_reps.iter().enumerate() {
        let vals: Vec<Cyclotomic> = (0..kf)
            .map(|kpos| {
                let fi = fixed_to_kpos.iter().position(|&kp| kp == kpos).unwrap();
                metric_group.pairing[metric.fixed[fi]][l].conj()
            })
            .collect();
        let w = ext
            .omegas
            .iter()
            .position(|om| om == &vals)
            .ok_or_else(|| Error::CheckFailed(
                "pairing column is not a kernel character".into(),
            ))?;
        if used[w] {
            return Err(Error::CheckFailed("column identification is not injective".into()));
        }
        used[w] = true;
        column_of_omega[ci] = w;
    }
    // row phases: normalized[k][omega_{[l]}] = phase_k * metric_matrix[k][[l]]
    let mut row_phases = Vec::with_capacity(kf);
    for (fi, &kpos) in fixed_to_kpos.iter().enumerate() {
        let mut phase: Option<Cyclotomic> = None;
        for (ci, &w) in column_of_omega.iter().enumerate() {
            let ratio = normalized[kpos][w].div(&metric.matrix[fi][ci])?;
            match &phase {
                None => phase = Some(ratio),
                Some(prev) => {
                    if *prev != ratio {
                        return Err(Error::CheckFailed(
                            "row phase is not constant across columns".into(),
                        ));
                    }
                }
            }
        }
        let phase = phase.expect("kernel is nonempty");
        if !phase.mul(&phase.conj()).is_one() {
            return Err(Error::CheckFailed("row phase is not a unit scalar".into()));
        }
        row_phases.push(phase);
    }
    Ok(TransitionMatrix { raw, coeffs, normalized, column_of_omega, row_phases, metric })
}

/// Full analysis of one nonzero s.
pub struct HeisPacketReport {
    pub s: FieldElt,
    pub lagrangian: LagrangianData,
    pub extensions: ExtensionData,
    pub chars: PacketCharacters,
    pub traces: TraceFunctions,
    pub transition: TransitionMatrix,
}

pub fn heis_packet_report(
    ctx: &HeisContext,
    packet: &PacketDescriptor,
) -> Result<HeisPacketReport> {
    assert_eq!(packet.kind, PacketKind::Heisenberg);
    let lag = heis_lagrangian(ctx, &packet.s)?;
    let k_tilde_table = if lag.k_tilde.order() == ctx.heis.table.n {
        (*ctx.table).clone()
    } else {
        character_table(&lag.k_tilde.table)?
    };
    let l_table = if lag.lagrangian.order() == ctx.heis.table.n {
        (*ctx.table).clone()
    } else if lag.lagrangian.order() == lag.k_tilde.order() {
        k_tilde_table.clone()
    } else {
        character_table(&lag.lagrangian.table)?
    };
    let extensions = heis_extensions(ctx, &lag, &k_tilde_table)?;
    let chars = heis_lpacket_chars(ctx, &lag, &extensions, &l_table, packet)?;
    let traces = heis_trace_functions(ctx, &lag, &extensions)?;
    let transition = heis_transition_matrix(ctx, &lag, &extensions, &chars, &traces)?;
    Ok(HeisPacketReport { s: packet.s.clone(), lagrangian: lag, extensions, chars, traces, transition })
}

/// Dimension bookkeeping for one packet.
pub struct PacketDims {
    pub kind: PacketKind,
    pub s: FieldElt,
    pub dims: Vec<usize>,
    pub sum_sq: usize,
    /// q^{2 d_e}: 1 for a linear packet, q otherwise.
    pub expected: usize,
    pub lambda_ok: bool,
}

pub struct DimensionReport {
    pub per_packet: Vec<PacketDims>,
    pub total_expected: usize,
    pub q_squared: usize,
}

/// Per-packet sum of squared dimensions against q^{2 d_e}, the global sum
/// against q^2, and the functional identity
/// sum dim(W)^2 / |U|^2 = q^{2 d_e} / q^4 evaluated through `lambda`.
pub fn heis_dimension_report(
    ctx: &HeisContext,
    packets: &[PacketDescriptor],
) -> Result<DimensionReport> {
    let q = ctx.heis.q;
    let u_order = q * q;
    let mut per_packet = Vec::new();
    let mut total_expected = 0usize;
    for packet in packets {
        let dims: Vec<usize> = packet.members.iter().map(|&r| ctx.table.degrees[r]).collect();
        let sum_sq: usize = dims.iter().map(|d| d * d).sum();
        let expected = match packet.kind {
            PacketKind::Linear => 1,
            PacketKind::Heisenberg => q,
        };
        if sum_sq != expected {
            return Err(Error::CheckFailed(format!(
                "packet dimension identity fails: {sum_sq} != {expected}"
            )));
        }
        total_expected += expected;
        // lambda route: sum over members of lambda of the minimal idempotent
        // e_W = (dim/|U|) chi_W; each term contributes dim^2 / |U|^2
        let mut lam = Cyclotomic::zero();
        for (&row, &dim) in packet.members.iter().zip(&dims) {
            let scale = BigRational::new(BigInt::from(dim), BigInt::from(u_order));
            let e_w = ctx.rfunction(
                ctx.table.values[row].iter().map(|v| v.scale(&scale)).collect(),
            );
            lam = lam.add(&lambda_functional(&e_w));
        }
        let rhs = Cyclotomic::from_rational(BigRational::new(
            BigInt::from(expected),
            BigInt::from(u_order * u_order),
        ));
        let lambda_ok = lam == rhs;
        if !lambda_ok {
            return Err(Error::CheckFailed(
                "functional identity over lambda fails for a packet".into(),
            ));
        }
        per_packet.push(PacketDims {
            kind: packet.kind,
            s: packet.s.clone(),
            dims,
            sum_sq,
            expected,
            lambda_ok,
        });
    }
    if total_expected != u_order {
        return Err(Error::CheckFailed(format!(
            "global dimension identity fails: {total_expected} != {u_order}"
        )));
    }
    Ok(DimensionReport { per_packet, total_expected, q_squared: u_order })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_f2_is_cyclic_of_order_4() {
        let ctx = heis_context(2, 1).unwrap();
        let g = &ctx.heis.table;
        assert_eq!(g.n, 4);
        assert_eq!(g.exponent(), 4);
        assert!(g.is_abelian());
        // (1,0)^2 = (0,1)
        let x = ctx.heis.index(&ctx.heis.field.one(), &ctx.heis.field.zero());
        let sq = g.mul(x, x);
        assert_eq!(sq, ctx.heis.index(&ctx.heis.field.zero(), &ctx.heis.field.one()));
    }

    #[test]
    fn u_f3_is_elementary_abelian() {
        let ctx = heis_context(3, 1).unwrap();
        let g = &ctx.heis.table;
        assert_eq!(g.n, 9);
        assert!(g.is_abelian());
        assert_eq!(g.exponent(), 3);
    }

    #[test]
    fn u_f8_is_nonabelian_of_order_64() {
        let ctx = heis_context(2, 3).unwrap();
        let g = &ctx.heis.table;
        assert_eq!(g.n, 64);
        assert!(!g.is_abelian());
        // H is central
        let h = ctx.heis.center_subgroup();
        for i in 0..h.order() {
            let z = h.to_parent(i);
            for x in 0..g.n {
                assert_eq!(g.mul(z, x), g.mul(x, z));
            }
        }
    }

    #[test]
    fn packets_q2() {
        let ctx = heis_context(2, 1).unwrap();
        let packets = heis_packets(&ctx).unwrap();
        assert_eq!(packets.len(), 3); // 2 linear + 1 more
        let heis: Vec<_> =
            packets.iter().filter(|p| p.kind == PacketKind::Heisenberg).collect();
        assert_eq!(heis.len(), 1);
        // its members are the two order-4 (faithful) characters
        assert_eq!(heis[0].members.len(), 2);
        for &row in &heis[0].members {
            // value at the central generator (0,1) is -deg
            let idx = ctx.heis.index(&ctx.heis.field.zero(), &ctx.heis.field.one());
            assert_eq!(*ctx.table.value(row, idx), Cyclotomic::from_integer(-1));
        }
    }

    #[test]
    fn packets_q3() {
        let ctx = heis_context(3, 1).unwrap();
        let packets = heis_packets(&ctx).unwrap();
        assert_eq!(packets.len(), 5); // 3 linear + 2 more
        for p in &packets {
            match p.kind {
                PacketKind::Linear => assert_eq!(p.members.len(), 1),
                PacketKind::Heisenberg => assert_eq!(p.members.len(), 3),
            }
        }
    }

    #[test]
    fn lagrangian_examples() {
        // (2,1,1): pullback is everything
        let ctx = heis_context(2, 1).unwrap();
        let lag = heis_lagrangian(&ctx, &ctx.heis.field.one()).unwrap();
        assert_eq!(lag.k_points.len(), 2);
        assert_eq!(lag.k_tilde.order(), 4);
        assert_eq!(lag.lagrangian.order(), 4);

        // (3,1,1): everything again
        let ctx = heis_context(3, 1).unwrap();
        let lag = heis_lagrangian(&ctx, &ctx.heis.field.one()).unwrap();
        assert_eq!(lag.k_points.len(), 3);
        assert_eq!(lag.lagrangian.order(), 9);

        // (2,3,1): |K^F| = 2, pullback order 16, Lagrangian order 32
        let ctx = heis_context(2, 3).unwrap();
        let lag = heis_lagrangian(&ctx, &ctx.heis.field.one()).unwrap();
        assert_eq!(lag.k_points.len(), 2);
        assert_eq!(lag.k_tilde.order(), 16);
        assert_eq!(lag.lagrangian.order(), 32);
    }

    #[test]
    fn extension_formula_odd_q() {
        let ctx = heis_context(3, 1).unwrap();
        let lag = heis_lagrangian(&ctx, &ctx.heis.field.one()).unwrap();
        let ktab = (*ctx.table).clone(); // pullback is all of U here
        let ext = heis_extensions(&ctx, &lag, &ktab).unwrap();
        assert_eq!(ext.extensions.len(), 3);
        // base twist is the trivial omega
        assert!(ext.omegas[ext.base].iter().all(|v| v.is_one()));
    }

    #[test]
    fn extension_count_even_q() {
        let ctx = heis_context(2, 1).unwrap();
        let lag = heis_lagrangian(&ctx, &ctx.heis.field.one()).unwrap();
        let ktab = (*ctx.table).clone();
        let ext = heis_extensions(&ctx, &lag, &ktab).unwrap();
        // the two extensions are the two faithful characters of the group
        assert_eq!(ext.extensions.len(), 2);
    }

    #[test]
    fn full_report_q2() {
        let ctx = heis_context(2, 1).unwrap();
        let packets = heis_packets(&ctx).unwrap();
        let heis_packet =
            packets.iter().find(|p| p.kind == PacketKind::Heisenberg).unwrap();
        let report = heis_packet_report(&ctx, heis_packet).unwrap();
        assert_eq!(report.chars.degrees, vec![1, 1]);
        // 2x2 normalized transition matrix, unitary, with +-1/sqrt(2) entries
        let r2 = Cyclotomic::sqrt_rational(&BigRational::from_integer(2.into())).unwrap();
        let inv = r2.inv().unwrap();
        for row in &report.transition.normalized {
            for v in row {
                assert!(*v == inv || *v == inv.neg());
            }
        }
        assert_eq!(report.traces.norm, BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn full_report_q4_nontrivial_s() {
        // s = omega over F_4: trivial kernel points, 1x1 transition matrix (1)
        let ctx = heis_context(2, 2).unwrap();
        let packets = heis_packets(&ctx).unwrap();
        let omega = ctx.heis.field.element(2);
        let packet = packets
            .iter()
            .find(|p| p.kind == PacketKind::Heisenberg && p.s == omega)
            .unwrap();
        let report = heis_packet_report(&ctx, packet).unwrap();
        assert_eq!(report.lagrangian.k_points.len(), 1);
        assert_eq!(report.chars.degrees, vec![2]);
        assert_eq!(report.transition.normalized, vec![vec![Cyclotomic::one()]]);
        assert!(report.transition.row_phases.iter().all(|p| p.is_one()));
    }

    #[test]
    fn transition_matrix_q3_is_scaled_character_table() {
        // (3,1,1): the normalized matrix is 1/sqrt(3) times a table of cube
        // roots of unity; the k = 0 row is constant 1/sqrt(3)
        let ctx = heis_context(3, 1).unwrap();
        let packets = heis_packets(&ctx).unwrap();
        let packet = packets
            .iter()
            .find(|p| p.kind == PacketKind::Heisenberg && p.s == ctx.heis.field.one())
            .unwrap();
        let report = heis_packet_report(&ctx, packet).unwrap();
        let n = &report.transition.normalized;
        assert_eq!(n.len(), 3);
        let r3 = Cyclotomic::sqrt_rational(&BigRational::from_integer(3.into())).unwrap();
        let inv_r3 = r3.inv().unwrap();
        let zero_row = report
            .lagrangian
            .k_points
            .iter()
            .position(|k| k.is_zero())
            .unwrap();
        for w in 0..3 {
            assert_eq!(n[zero_row][w], inv_r3);
        }
        // every entry is a cube root of unity over sqrt(3)
        for row in n {
            for v in row {
                let unit = v.mul(&r3);
                let mut cube = unit.clone();
                for _ in 0..2 {
                    cube = cube.mul(&unit);
                }
                assert!(cube.is_one());
            }
        }
        // row phases against the metric crossed matrix are all 1
        assert!(report.transition.row_phases.iter().all(|p| p.is_one()));
    }

    #[test]
    fn trace_function_at_zero_is_the_central_character() {
        // T_0 restricted to H is chi_s itself
        let ctx = heis_context(2, 3).unwrap();
        let s = ctx.heis.field.one();
        let lag = heis_lagrangian(&ctx, &s).unwrap();
        let ktab = character_table(&lag.k_tilde.table).unwrap();
        let ext = heis_extensions(&ctx, &lag, &ktab).unwrap();
        let traces = heis_trace_functions(&ctx, &lag, &ext).unwrap();
        let zero_pos = lag.k_points.iter().position(|k| k.is_zero()).unwrap();
        let cd = ctx.classes();
        for a in ctx.heis.field.elements() {
            let idx = ctx.heis.index(&ctx.heis.field.zero(), &a);
            assert_eq!(
                traces.functions[zero_pos][cd.class_of[idx]],
                ctx.heis.chi_s(&s, &a)
            );
        }
    }

    #[test]
    fn dimension_reports() {
        // q = 2: 2 * 1 + 1 * 2 = 4
        let ctx = heis_context(2, 1).unwrap();
        let packets = heis_packets(&ctx).unwrap();
        let report = heis_dimension_report(&ctx, &packets).unwrap();
        assert_eq!(report.total_expected, 4);

        // q = 3: 3 * 1 + 2 * 3 = 9
        let ctx = heis_context(3, 1).unwrap();
        let packets = heis_packets(&ctx).unwrap();
        let report = heis_dimension_report(&ctx, &packets).unwrap();
        assert_eq!(report.total_expected, 9);
        let heis_sums: Vec<usize> = report
            .per_packet
            .iter()
            .filter(|p| p.kind == PacketKind::Heisenberg)
            .map(|p| p.sum_sq)
            .collect();
        assert_eq!(heis_sums, vec![3, 3]);
    }

    #[test]
    fn degree_two_characters_for_q8() {
        let ctx = heis_context(2, 3).unwrap();
        let packets = heis_packets(&ctx).unwrap();
        let packet = packets.iter().find(|p| p.kind == PacketKind::Heisenberg).unwrap();
        let report = heis_packet_report(&ctx, packet).unwrap();
        // q = 2^3: members are 2-dimensional, sum of squares q = 8
        assert_eq!(report.chars.degrees, vec![2, 2]);
    }
}
