//! Exact character tables by Dixon's modular method, plus induced characters
//! and extensions of stable characters to cyclic twists.
//!
//! The table is computed by simultaneously diagonalizing the class-sum
//! matrices over a prime field F_l with l = 1 mod exp(G) and l > 2 sqrt(|G|),
//! then lifting eigenvalue data to Q(zeta) through root-of-unity
//! multiplicities. Row order is deterministic: by degree, then by the
//! lexicographic order of the value tuple.

use num::{BigInt, BigRational};

use crate::cyclotomic::Cyclotomic;
use crate::group::{
    conjugacy_classes, semidirect_cyclic, ClassData, GroupAutomorphism, GroupTable, Subgroup,
};
use crate::{Error, Result};

/// A complete irreducible character table.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub class_data: ClassData,
    pub degrees: Vec<usize>,
    /// values[row][class]
    pub values: Vec<Vec<Cyclotomic>>,
}

impl CharacterTable {
    pub fn num_irreps(&self) -> usize {
        self.values.len()
    }

    /// Character value at a group element.
    pub fn value(&self, row: usize, element: usize) -> &Cyclotomic {
        &self.values[row][self.class_data.class_of[element]]
    }

    pub fn row(&self, row: usize) -> &[Cyclotomic] {
        &self.values[row]
    }

    /// Index of the row equal to the given class function, if any.
    pub fn find_row(&self, f: &[Cyclotomic]) -> Option<usize> {
        self.values.iter().position(|row| row == f)
    }

    /// Both orthogonality relations and the degree identity, checked exactly.
    pub fn verify(&self, g: &GroupTable) -> Result<()> {
        let r = self.num_irreps();
        if r != self.class_data.num_classes() {
            return Err(Error::Internal("row count differs from class count".into()));
        }
        let sum_sq: usize = self.degrees.iter().map(|d| d * d).sum();
        if sum_sq != g.n {
            return Err(Error::Internal(format!(
                "degree identity fails: {sum_sq} != {}",
                g.n
            )));
        }
        for i in 0..r {
            for j in 0..r {
                let ip = class_hermitian_ip(g, &self.class_data, &self.values[i], &self.values[j]);
                let expected = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
                if ip != expected {
                    return Err(Error::Internal(format!(
                        "row orthogonality fails at ({i},{j})"
                    )));
                }
            }
        }
        for a in 0..r {
            for b in 0..r {
                let mut acc = Cyclotomic::zero();
                for row in &self.values {
                    acc = acc.add(&row[a].mul(&row[b].conj()));
                }
                let expected = if a == b {
                    Cyclotomic::from_integer(self.class_data.centralizer_orders[a] as i64)
                } else {
                    Cyclotomic::zero()
                };
                if acc != expected {
                    return Err(Error::Internal(format!(
                        "column orthogonality fails at ({a},{b})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Hermitian inner product of class functions on one finite group:
/// (1/|G|) sum_g f1(g) conj(f2(g)), via class sizes.
pub fn class_hermitian_ip(
    g: &GroupTable,
    cd: &ClassData,
    f1: &[Cyclotomic],
    f2: &[Cyclotomic],
) -> Cyclotomic {
    let mut acc = Cyclotomic::zero();
    for (k, cls) in cd.classes.iter().enumerate() {
        let term = f1[k].mul(&f2[k].conj());
        acc = acc.add(&term.scale(&BigRational::new(
            BigInt::from(cls.len()),
            BigInt::from(g.n),
        )));
    }
    acc
}

/// Restriction of a class function on G to a subgroup, as a class function
/// on the subgroup's classes.
pub fn restrict_class_function(
    g_cd: &ClassData,
    sub: &Subgroup,
    sub_cd: &ClassData,
    f_on_g: &[Cyclotomic],
) -> Vec<Cyclotomic> {
    sub_cd
        .reps()
        .map(|rep| f_on_g[g_cd.class_of[sub.to_parent(rep)]].clone())
        .collect()
}

/// Induction of a class function from a subgroup:
/// Ind(chi)(g) = (1/|H|) sum_{x in G, x^{-1} g x in H} chi(x^{-1} g x).
pub fn induced_character(
    g: &GroupTable,
    g_cd: &ClassData,
    sub: &Subgroup,
    sub_cd: &ClassData,
    chi: &[Cyclotomic],
) -> Vec<Cyclotomic> {
    let h_order = BigInt::from(sub.order());
    g_cd.reps()
        .map(|z| {
            let mut acc = Cyclotomic::zero();
            for x in 0..g.n {
                let y = g.mul(g.mul(g.inv[x], z), x);
                if let Some(ys) = sub.from_parent(y) {
                    acc = acc.add(&chi[sub_cd.class_of[ys]]);
                }
            }
            acc.scale(&BigRational::new(BigInt::from(1), h_order.clone()))
        })
        .collect()
}

/// One extension of a stable character to the twisted coset, reported as its
/// values on C * sigma^{-1} indexed by the elements of C.
#[derive(Clone, Debug)]
pub struct CosetCharacter {
    pub coset_values: Vec<Cyclotomic>,
    pub degree: usize,
}

/// All extensions of a sigma-stable irreducible character rho of C to the
/// semidirect product C x| <sigma>, restricted to the coset C * sigma^{-1}.
/// There are exactly ord(sigma) of them; they are returned sorted by the
/// lexicographic order of their value tuples, so index 0 is the canonical one.
pub fn twisted_extension_characters(
    c: &GroupTable,
    c_cd: &ClassData,
    sigma: &GroupAutomorphism,
    rho: &[Cyclotomic],
) -> Result<Vec<CosetCharacter>> {
    // stability rho(sigma(x)) = rho(x)
    for (k, cls) in c_cd.classes.iter().enumerate() {
        let image_class = c_cd.class_of[sigma.apply(cls[0])];
        if rho[image_class] != rho[k] {
            return Err(Error::NotStable);
        }
    }
    let m = sigma.order;
    let sd = semidirect_cyclic(c, sigma);
    let big = character_table(&sd.table)?;
    let coset = sd.twisted_coset();
    let mut extensions: Vec<CosetCharacter> = Vec::new();
    for row in 0..big.num_irreps() {
        // restriction to C is the class function x -> value at (x, 1)
        let restricts = c_cd
            .reps()
            .enumerate()
            .all(|(k, rep)| *big.value(row, sd.index(rep, 0)) == rho[k]);
        if restricts {
            let coset_values: Vec<Cyclotomic> =
                coset.iter().map(|&idx| big.value(row, idx).clone()).collect();
            extensions.push(CosetCharacter { coset_values, degree: big.degrees[row] });
        }
    }
    if extensions.len() != m {
        return Err(Error::Internal(format!(
            "expected {m} extensions, found {}",
            extensions.len()
        )));
    }
    extensions.sort_by(|a, b| {
        for (x, y) in a.coset_values.iter().zip(&b.coset_values) {
            match x.cmp_key(y) {
                std::cmp::Ordering::Equal => {}
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    });
    Ok(extensions)
}

/// Smallest prime l = 1 mod e with l > 2 sqrt(n).
fn find_dixon_prime(e: usize, n: usize) -> u64 {
    let min = (2.0 * (n as f64).sqrt()).floor() as u64 + 1;
    let e = e as u64;
    let mut l = e + 1;
    loop {
        if l >= min.max(3) && crate::finite_field::is_prime(l) {
            return l;
        }
        l += e;
    }
}

fn pow_mod(mut b: u64, mut e: u64, l: u64) -> u64 {
    let mut acc = 1u64;
    b %= l;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % l;
        }
        b = b * b % l;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, l: u64) -> u64 {
    pow_mod(a, l - 2, l)
}

/// Coefficients (ascending, monic) of det(xI - mat) over F_l, via
/// Hessenberg reduction and the principal-minor recurrence.
fn char_poly_mod(mat: &[Vec<u64>], l: u64) -> Vec<u64> {
    let s = mat.len();
    if s == 0 {
        return vec![1];
    }
    let mut h: Vec<Vec<u64>> = mat.to_vec();
    for j in 0..s.saturating_sub(2) {
        let piv = match (j + 1..s).find(|&i| h[i][j] != 0) {
            Some(p) => p,
            None => continue,
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = inv_mod(h[j + 1][j], l);
        for i in j + 2..s {
            if h[i][j] == 0 {
                continue;
            }
            let f = h[i][j] * inv % l;
            for k in 0..s {
                let sub = f * h[j + 1][k] % l;
                h[i][k] = (h[i][k] + l - sub) % l;
            }
            for row in h.iter_mut() {
                let add = f * row[i] % l;
                row[j + 1] = (row[j + 1] + add) % l;
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=s {
        let mut p = vec![0u64; k + 1];
        for (d, &c) in polys[k - 1].iter().enumerate() {
            p[d + 1] = (p[d + 1] + c) % l;
            let sub = h[k - 1][k - 1] * c % l;
            p[d] = (p[d] + l - sub) % l;
        }
        let mut prod = 1u64;
        for i in 1..k {
            prod = prod * h[k - i][k - i - 1] % l;
            if prod == 0 {
                break;
            }
            let coeff = h[k - 1 - i][k - 1] * prod % l;
            if coeff == 0 {
                continue;
            }
            for (d, &c) in polys[k - 1 - i].iter().enumerate() {
                let sub = coeff * c % l;
                p[d] = (p[d] + l - sub) % l;
            }
        }
        polys.push(p);
    }
    polys.pop().unwrap()
}

/// Basis of the kernel of mat over F_l (column vectors).
fn kernel_mod(mat: &[Vec<u64>], l: u64) -> Vec<Vec<u64>> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut a: Vec<Vec<u64>> = mat.to_vec();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let piv = (row..rows).find(|&i| a[i][col] != 0);
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        a.swap(row, piv);
        let inv = inv_mod(a[row][col], l);
        for k in 0..cols {
            a[row][k] = a[row][k] * inv % l;
        }
        for i in 0..rows {
            if i != row && a[i][col] != 0 {
                let f = a[i][col];
                for k in 0..cols {
                    let sub = f * a[row][k] % l;
                    a[i][k] = (a[i][k] + l - sub) % l;
                }
            }
        }
        pivot_col_of_row.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_col_of_row.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = (l - a[r][free] % l) % l;
        }
        basis.push(v);
    }
    basis
}

/// Solve B x = w where the columns of B form a basis (full column rank).
fn solve_in_basis(basis: &[Vec<u64>], w: &[u64], l: u64) -> Vec<u64> {
    let rows = w.len();
    let s = basis.len();
    let mut aug: Vec<Vec<u64>> = (0..rows)
        .map(|i| {
            let mut row: Vec<u64> = basis.iter().map(|b| b[i]).collect();
            row.push(w[i]);
            row
        })
        .collect();
    let mut x = vec![0u64; s];
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..s {
        let piv = (row..rows).find(|&i| aug[i][col] != 0).expect("basis has full rank");
        aug.swap(row, piv);
        let inv = inv_mod(aug[row][col], l);
        for k in col..=s {
            aug[row][k] = aug[row][k] * inv % l;
        }
        for i in 0..rows {
            if i != row && aug[i][col] != 0 {
                let f = aug[i][col];
                for k in col..=s {
                    let sub = f * aug[row][k] % l;
                    aug[i][k] = (aug[i][k] + l - sub) % l;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = aug[r][s];
    }
    x
}

/// The full character table of g, exact over Q(zeta_exp(G)).
pub fn character_table(g: &GroupTable) -> Result<CharacterTable> {
    let cd = conjugacy_classes(g);
    character_table_with_classes(g, cd)
}

pub fn character_table_with_classes(g: &GroupTable, cd: ClassData) -> Result<CharacterTable> {
    let r = cd.num_classes();
    let e = g.exponent();
    let l = find_dixon_prime(e, g.n);

    let m_matrix = |i: usize| -> Vec<Vec<u64>> {
        // (M_i)[j][k] = #{(x, y) in C_i x C_j : x y = rep_k}
        let mut m = vec![vec![0u64; r]; r];
        for &x in &cd.classes[i] {
            for (k, cls) in cd.classes.iter().enumerate() {
                let y = g.mul(g.inv[x], cls[0]);
                m[cd.class_of[y]][k] += 1;
            }
        }
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                *v %= l;
            }
        }
        m
    };

    // simultaneous eigenspace refinement
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect()];
    for i in 0..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m = m_matrix(i);
        let mut next_spaces = Vec::new();
        for basis in spaces {
            let s = basis.len();
            if s == 1 {
                next_spaces.push(basis);
                continue;
            }
            // restriction of M_i to the subspace
            let images: Vec<Vec<u64>> = basis
                .iter()
                .map(|b| {
                    (0..r)
                        .map(|j| {
                            let mut acc = 0u64;
                            for k in 0..r {
                                if m[j][k] != 0 && b[k] != 0 {
                                    acc = (acc + m[j][k] * b[k]) % l;
                                }
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
            let mut restr = vec![vec![0u64; s]; s];
            for (u, img) in images.iter().enumerate() {
                let x = solve_in_basis(&basis, img, l);
                for (v, &c) in x.iter().enumerate() {
                    restr[v][u] = c;
                }
            }
            let poly = char_poly_mod(&restr, l);
            let mut found_dim = 0;
            for lam in 0..l {
                let mut val = 0u64;
                for &c in poly.iter().rev() {
                    val = (val * lam + c) % l;
                }
                if val != 0 {
                    continue;
                }
                let mut shifted = restr.clone();
                for (d, row) in shifted.iter_mut().enumerate() {
                    row[d] = (row[d] + l - lam) % l;
                }
                let ker = kernel_mod(&shifted, l);
                let mut sub_basis = Vec::new();
                for kv in &ker {
                    let mut global = vec![0u64; r];
                    for (v, &c) in kv.iter().enumerate() {
                        if c != 0 {
                            for idx in 0..r {
                                global[idx] = (global[idx] + c * basis[v][idx]) % l;
                            }
                        }
                    }
                    sub_basis.push(global);
                }
                found_dim += sub_basis.len();
                next_spaces.push(sub_basis);
                if found_dim == s {
                    break;
                }
            }
            if found_dim != s {
                return Err(Error::Internal(
                    "class-sum matrix failed to diagonalize over F_l".into(),
                ));
            }
        }
        spaces = next_spaces;
    }
    if spaces.len() != r || spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::Internal("common eigenspaces are not one-dimensional".into()));
    }

    // central characters: normalize the identity-class entry to 1
    let k0 = cd.class_of[g.id];
    let omegas: Vec<Vec<u64>> = spaces
        .into_iter()
        .map(|basis| {
            let v = &basis[0];
            let scale = inv_mod(v[k0], l);
            v.iter().map(|&c| c * scale % l).collect()
        })
        .collect();

    // fixed primitive e-th root of unity mod l, smallest as an integer
    let divisors = proper_divisors(e);
    let w = (2..l)
        .find(|&w| {
            pow_mod(w, e as u64, l) == 1
                && divisors.iter().all(|&d| pow_mod(w, d as u64, l) != 1)
        })
        .unwrap_or(1); // e = 1 only for the trivial group

    // power-map classes per class rep
    let orders: Vec<usize> = cd.reps().map(|x| g.element_order(x)).collect();
    let power_class: Vec<Vec<usize>> = cd
        .reps()
        .enumerate()
        .map(|(j, x)| (0..orders[j]).map(|t| cd.class_of[g.pow(x, t)]).collect())
        .collect();

    let mut rows: Vec<(usize, Vec<Cyclotomic>)> = Vec::new();
    for omega in &omegas {
        // degree via the norm of the central character
        let mut c = 0u64;
        for j in 0..r {
            let jstar = cd.inverse_class(g, j);
            let term = omega[j] * omega[jstar] % l * inv_mod(cd.classes[j].len() as u64, l) % l;
            c = (c + term) % l;
        }
        let target = g.n as u64 % l * inv_mod(c, l) % l;
        let d = (1..=(g.n as f64).sqrt() as u64 + 1)
            .find(|&d| d * d % l == target)
            .ok_or_else(|| Error::Internal("no degree matches the eigenvector".into()))?;
        let chi_mod: Vec<u64> = (0..r)
            .map(|j| d * omega[j] % l * inv_mod(cd.classes[j].len() as u64, l) % l)
            .collect();
        // lift per class through root-of-unity multiplicities
        let mut values = Vec::with_capacity(r);
        for j in 0..r {
            let n_j = orders[j];
            let z_inv = inv_mod(pow_mod(w, (e / n_j) as u64, l), l);
            let n_inv = inv_mod(n_j as u64, l);
            let mut value = Cyclotomic::zero();
            let mut total = 0u64;
            for k in 0..n_j {
                let zk = pow_mod(z_inv, k as u64, l);
                let mut acc = 0u64;
                let mut zpow = 1u64;
                for t in 0..n_j {
                    acc = (acc + chi_mod[power_class[j][t]] * zpow) % l;
                    zpow = zpow * zk % l;
                }
                let mult = acc * n_inv % l;
                if mult > d {
                    return Err(Error::Internal(
                        "eigenvalue multiplicity exceeds the degree".into(),
                    ));
                }
                total += mult;
                if mult != 0 {
                    value = value.add(
                        &Cyclotomic::root_of_unity(n_j as u32, k as i64)
                            .scale(&BigRational::from_integer(BigInt::from(mult))),
                    );
                }
            }
            if total != d {
                return Err(Error::Internal(
                    "multiplicities do not sum to the degree".into(),
                ));
            }
            values.push(value);
        }
        rows.push((d as usize, values));
    }

    rows.sort_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| {
            for (x, y) in a.1.iter().zip(&b.1) {
                match x.cmp_key(y) {
                    std::cmp::Ordering::Equal => {}
                    ord => return ord,
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    let (degrees, values): (Vec<usize>, Vec<Vec<Cyclotomic>>) = rows.into_iter().unzip();
    let table = CharacterTable { class_data: cd, degrees, values };
    table.verify(g)?;
    Ok(table)
}

fn proper_divisors(e: usize) -> Vec<usize> {
    (1..e).filter(|d| e % d == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::centralizer;

    fn s3() -> GroupTable {
        GroupTable::from_perm_generators(&[vec![1, 0, 2], vec![1, 2, 0]], 100)
            .unwrap()
            .table
    }

    #[test]
    fn s3_table() {
        let g = s3();
        let t = character_table(&g).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 2]);
    }

    #[test]
    fn quaternion_table() {
        let g = GroupTable::quaternion8();
        let t = character_table(&g).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn klein_table() {
        let g = GroupTable::abelian(&[2, 2]);
        let t = character_table(&g).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 1, 1]);
        let one = Cyclotomic::one();
        let neg = Cyclotomic::from_integer(-1);
        for row in &t.values {
            for v in row {
                assert!(*v == one || *v == neg);
            }
        }
    }

    #[test]
    fn a4_and_d4_tables() {
        let a4 = GroupTable::from_perm_generators(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]], 100)
            .unwrap()
            .table;
        assert_eq!(a4.n, 12);
        let t = character_table(&a4).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 1, 3]);

        let d4 = GroupTable::dihedral(4);
        let t = character_table(&d4).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn cyclic_table_has_root_values() {
        let c4 = GroupTable::cyclic(4);
        let t = character_table(&c4).unwrap();
        let i = Cyclotomic::root_of_unity(4, 1);
        assert!(t.values.iter().any(|row| row[t.class_data.class_of[1]] == i));
    }

    #[test]
    fn induced_from_trivial_is_regular() {
        let g = s3();
        let g_cd = conjugacy_classes(&g);
        let sub = Subgroup::from_elements(&g, vec![g.id]).unwrap();
        let sub_cd = conjugacy_classes(&sub.table);
        let ind = induced_character(&g, &g_cd, &sub, &sub_cd, &[Cyclotomic::one()]);
        for (k, rep) in g_cd.reps().enumerate() {
            let expected =
                if rep == g.id { Cyclotomic::from_integer(6) } else { Cyclotomic::zero() };
            assert_eq!(ind[k], expected);
        }
    }

    #[test]
    fn induced_from_c3_is_the_two_dimensional_irreducible() {
        let g = s3();
        let g_cd = conjugacy_classes(&g);
        let three_cycle = (0..g.n).find(|&x| g.element_order(x) == 3).unwrap();
        let sub = Subgroup::generated(&g, &[three_cycle]);
        assert_eq!(sub.order(), 3);
        let sub_cd = conjugacy_classes(&sub.table);
        let sub_t = character_table(&sub.table).unwrap();
        let psi = sub_t
            .values
            .iter()
            .find(|row| row.iter().any(|v| *v != Cyclotomic::one()))
            .unwrap();
        let ind = induced_character(&g, &g_cd, &sub, &sub_cd, psi);
        let t = character_table(&g).unwrap();
        let two_dim = t.values.iter().zip(&t.degrees).find(|(_, &d)| d == 2).unwrap().0;
        assert_eq!(&ind, two_dim);
        // degree formula at the identity
        assert_eq!(ind[g_cd.class_of[g.id]], Cyclotomic::from_integer(2));
    }

    #[test]
    fn frobenius_reciprocity() {
        for (g, sub_gen_order) in [(s3(), 3), (GroupTable::dihedral(4), 4)] {
            let g_cd = conjugacy_classes(&g);
            let gen = (0..g.n).find(|&x| g.element_order(x) == sub_gen_order).unwrap();
            let sub = Subgroup::generated(&g, &[gen]);
            let sub_cd = conjugacy_classes(&sub.table);
            let gt = character_table(&g).unwrap();
            let st = character_table(&sub.table).unwrap();
            for chi in &st.values {
                let ind = induced_character(&g, &g_cd, &sub, &sub_cd, chi);
                for psi in &gt.values {
                    let lhs = class_hermitian_ip(&g, &g_cd, &ind, psi);
                    let res = restrict_class_function(&g_cd, &sub, &sub_cd, psi);
                    let rhs = class_hermitian_ip(&sub.table, &sub_cd, chi, &res);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn twisted_extensions_of_trivial_character() {
        let c3 = GroupTable::cyclic(3);
        let cd = conjugacy_classes(&c3);
        let sigma = GroupAutomorphism::inversion(&c3).unwrap();
        let triv = vec![Cyclotomic::one(); 3];
        let exts = twisted_extension_characters(&c3, &cd, &sigma, &triv).unwrap();
        assert_eq!(exts.len(), 2);
        // coset values are +-1, constant on the coset here
        let minus_one = Cyclotomic::from_integer(-1);
        assert!(exts[0].coset_values.iter().all(|v| *v == minus_one));
        assert!(exts[1].coset_values.iter().all(|v| *v == Cyclotomic::one()));
        // the two extensions differ by a scalar of order dividing 2
        for (a, b) in exts[0].coset_values.iter().zip(&exts[1].coset_values) {
            assert_eq!(a.mul(&minus_one), *b);
        }
    }

    #[test]
    fn identity_twist_returns_the_character() {
        let g = s3();
        let cd = conjugacy_classes(&g);
        let sigma = GroupAutomorphism::identity(&g);
        let t = character_table(&g).unwrap();
        let rho = t.values[2].clone();
        let exts = twisted_extension_characters(&g, &cd, &sigma, &rho).unwrap();
        assert_eq!(exts.len(), 1);
        for x in 0..g.n {
            assert_eq!(exts[0].coset_values[x], *t.value(2, x));
        }
    }

    #[test]
    fn unstable_character_rejected() {
        let c3 = GroupTable::cyclic(3);
        let cd = conjugacy_classes(&c3);
        let sigma = GroupAutomorphism::inversion(&c3).unwrap();
        let t = character_table(&c3).unwrap();
        let nontrivial = t
            .values
            .iter()
            .find(|row| row.iter().any(|v| *v != Cyclotomic::one()))
            .unwrap()
            .clone();
        assert!(matches!(
            twisted_extension_characters(&c3, &cd, &sigma, &nontrivial),
            Err(Error::NotStable)
        ));
    }

    #[test]
    fn tables_of_centralizers() {
        let q8 = GroupTable::quaternion8();
        let cd = conjugacy_classes(&q8);
        for rep in cd.reps() {
            let z = centralizer(&q8, rep);
            character_table(&z.table).unwrap();
        }
    }
}
