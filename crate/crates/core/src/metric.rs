//! Metric groups: finite abelian groups with a quadratic form whose
//! associated bimultiplicative pairing is nondegenerate. These carry the
//! modular data of pointed categories: the S-matrix is the pairing scaled by
//! 1/sqrt(|K|), and an automorphism preserving the form produces a crossed
//! matrix on the fixed subgroup against the coinvariants.

use num::{BigInt, BigRational};
use std::sync::Arc;

use crate::cyclotomic::Cyclotomic;
use crate::finite_field::{AdditiveRootGroup, FieldTower};
use crate::group::{GroupAutomorphism, GroupTable};
use crate::{Error, Result};

/// A validated metric group (K, theta).
#[derive(Debug)]
pub struct MetricGroup {
    pub group: Arc<GroupTable>,
    pub theta: Vec<Cyclotomic>,
    /// b(k,l) = theta(k+l) theta(k)^{-1} theta(l)^{-1}, precomputed.
    pub pairing: Vec<Vec<Cyclotomic>>,
}

/// Checks: K abelian, theta(-k) = theta(k), theta valued in unit scalars,
/// b bimultiplicative and nondegenerate. Errors name the failing axiom and
/// carry a witness (the radical element for degeneracy).
pub fn metric_validate(group: Arc<GroupTable>, theta: Vec<Cyclotomic>) -> Result<MetricGroup> {
    let n = group.n;
    if theta.len() != n {
        return Err(Error::MetricAxiom("theta has the wrong length".into()));
    }
    if !group.is_abelian() {
        return Err(Error::MetricAxiom("underlying group is not abelian".into()));
    }
    for (k, v) in theta.iter().enumerate() {
        if v.is_zero() || !v.mul(&v.conj()).is_one() {
            return Err(Error::MetricAxiom(format!("theta({k}) is not a unit scalar")));
        }
    }
    for k in 0..n {
        if theta[group.inv[k]] != theta[k] {
            return Err(Error::MetricAxiom(format!("theta(-k) != theta(k) at k = {k}")));
        }
    }
    let mut pairing = vec![vec![Cyclotomic::zero(); n]; n];
    for k in 0..n {
        for l in 0..n {
            let num = theta[group.mul(k, l)].clone();
            pairing[k][l] = num.div(&theta[k].mul(&theta[l]))?;
        }
    }
    for k in 0..n {
        for k2 in 0..n {
            for l in 0..n {
                let lhs = &pairing[group.mul(k, k2)][l];
                let rhs = pairing[k][l].mul(&pairing[k2][l]);
                if *lhs != rhs {
                    return Err(Error::MetricAxiom(format!(
                        "pairing is not bimultiplicative at ({k},{k2},{l})"
                    )));
                }
            }
        }
    }
    // radical must be trivial
    for k in 0..n {
        if k != group.id && (0..n).all(|l| pairing[k][l].is_one()) {
            return Err(Error::MetricAxiom(format!(
                "pairing is degenerate: element {k} lies in the radical"
            )));
        }
    }
    Ok(MetricGroup { group, theta, pairing })
}

impl MetricGroup {
    pub fn order(&self) -> usize {
        self.group.n
    }

    /// Gauss sum: sum of theta over the group.
    pub fn gauss_sum(&self) -> Cyclotomic {
        self.theta.iter().fold(Cyclotomic::zero(), |acc, v| acc.add(v))
    }

    /// S_{k,l} = b(k,l) / sqrt(|K|); unitary for nondegenerate b.
    pub fn s_matrix(&self) -> Result<Vec<Vec<Cyclotomic>>> {
        let root =
            Cyclotomic::sqrt_rational(&BigRational::from_integer(BigInt::from(self.order())))?;
        let scale = root.inv()?;
        let s: Vec<Vec<Cyclotomic>> = self
            .pairing
            .iter()
            .map(|row| row.iter().map(|v| v.mul(&scale)).collect())
            .collect();
        verify_unitary(&s)?;
        Ok(s)
    }
}

pub fn verify_unitary(m: &[Vec<Cyclotomic>]) -> Result<()> {
    let n = m.len();
    for i in 0..n {
        if m[i].len() != n {
            return Err(Error::CheckFailed("matrix is not square".into()));
        }
        for j in 0..n {
            let mut row_ip = Cyclotomic::zero();
            let mut col_ip = Cyclotomic::zero();
            for k in 0..n {
                row_ip = row_ip.add(&m[i][k].mul(&m[j][k].conj()));
                col_ip = col_ip.add(&m[k][i].mul(&m[k][j].conj()));
            }
            let expected = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
            if row_ip != expected || col_ip != expected {
                return Err(Error::CheckFailed(format!("unitarity fails at ({i},{j})")));
            }
        }
    }
    Ok(())
}

/// An automorphism of the underlying group certified to preserve theta.
pub struct MetricAutomorphism {
    pub aut: GroupAutomorphism,
}

pub fn metric_automorphism(m: &MetricGroup, aut: GroupAutomorphism) -> Result<MetricAutomorphism> {
    for k in 0..m.order() {
        if m.theta[aut.apply(k)] != m.theta[k] {
            return Err(Error::MetricAxiom(format!(
                "automorphism does not preserve theta at {k}"
            )));
        }
    }
    Ok(MetricAutomorphism { aut })
}

/// Crossed data of (K, theta, F): the fixed subgroup K^F, the displacement
/// subgroup (1-F)K, the certificate (K^F)-perp = (1-F)K, and the square
/// unitary matrix b(k,l)/sqrt(|K^F|) on K^F x K/(1-F)K.
pub struct MetricCrossedData {
    pub fixed: Vec<usize>,
    pub displacement: Vec<usize>,
    pub coset_reps: Vec<usize>,
    pub matrix: Vec<Vec<Cyclotomic>>,
}

pub fn metric_crossed_data(m: &MetricGroup, f: &MetricAutomorphism) -> Result<MetricCrossedData> {
    let g = &*m.group;
    let n = g.n;
    let fixed: Vec<usize> = (0..n).filter(|&k| f.aut.apply(k) == k).collect();
    let mut displacement: Vec<usize> = (0..n).map(|k| g.mul(k, g.inv[f.aut.apply(k)])).collect();
    displacement.sort_unstable();
    displacement.dedup();
    // (K^F)-perp = (1-F)K by explicit double inclusion
    let perp: Vec<usize> = (0..n)
        .filter(|&l| fixed.iter().all(|&k| m.pairing[k][l].is_one()))
        .collect();
    for l in &displacement {
        if !perp.contains(l) {
            return Err(Error::CheckFailed(format!(
                "(1-F)K contains {l} outside the perp of the fixed subgroup"
            )));
        }
    }
    for l in &perp {
        if !displacement.contains(l) {
            return Err(Error::CheckFailed(format!(
                "perp of the fixed subgroup contains {l} outside (1-F)K"
            )));
        }
    }
    // coset representatives of K/(1-F)K, minimal index each
    let mut coset_of = vec![usize::MAX; n];
    let mut coset_reps = Vec::new();
    for k in 0..n {
        if coset_of[k] != usize::MAX {
            continue;
        }
        let c = coset_reps.len();
        for &d in &displacement {
            coset_of[g.mul(k, d)] = c;
        }
        coset_reps.push(k);
    }
    if fixed.len() != coset_reps.len() {
        return Err(Error::CheckFailed(format!(
            "|K^F| = {} but |K/(1-F)K| = {}",
            fixed.len(),
            coset_reps.len()
        )));
    }
    // well-definedness: b(k, l + d) = b(k, l) for fixed k and displacement d
    for &k in &fixed {
        for &l in &coset_reps {
            for &d in &displacement {
                if m.pairing[k][g.mul(l, d)] != m.pairing[k][l] {
                    return Err(Error::CheckFailed(
                        "pairing is not constant on displacement cosets".into(),
                    ));
                }
            }
        }
    }
    let root = Cyclotomic::sqrt_rational(&BigRational::from_integer(BigInt::from(fixed.len())))?;
    let scale = root.inv()?;
    let matrix: Vec<Vec<Cyclotomic>> = fixed
        .iter()
        .map(|&k| coset_reps.iter().map(|&l| m.pairing[k][l].mul(&scale)).collect())
        .collect();
    verify_unitary(&matrix)?;
    Ok(MetricCrossedData { fixed, displacement, coset_reps, matrix })
}

/// The metric group attached to a kernel of roots in a field tower:
/// K is the root set under addition, theta(k) = zeta_p^c with c the
/// prime-field value of s k^{p+1}, and F is induced by x -> x^q.
pub fn from_additive_roots(
    tower: &FieldTower,
    roots: &AdditiveRootGroup,
) -> Result<(MetricGroup, MetricAutomorphism)> {
    let field = &roots.field;
    let n = roots.len();
    let mut mult = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            let sum = field.add(&roots.elements[i], &roots.elements[j]);
            mult[i][j] = roots
                .position(&sum)
                .ok_or_else(|| Error::Internal("root set not closed".into()))?;
        }
    }
    let group = Arc::new(GroupTable::from_mult_table(mult)?);
    let theta: Vec<Cyclotomic> = (0..n)
        .map(|i| Cyclotomic::root_of_unity(tower.p, roots.theta_exponent(i, tower.p) as i64))
        .collect();
    let metric = metric_validate(group, theta)?;
    let aut = GroupAutomorphism::new(&metric.group, roots.frobenius_action.clone())
        .map_err(|_| Error::Internal("Frobenius is not an automorphism of the kernel".into()))?;
    let maut = metric_automorphism(&metric, aut)?;
    Ok((metric, maut))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_with_i() -> MetricGroup {
        let k = Arc::new(GroupTable::cyclic(2));
        let theta = vec![Cyclotomic::one(), Cyclotomic::root_of_unity(4, 1)];
        metric_validate(k, theta).unwrap()
    }

    #[test]
    fn z2_quadratic_form() {
        let m = z2_with_i();
        assert_eq!(m.pairing[1][1], Cyclotomic::from_integer(-1));
        let s = m.s_matrix().unwrap();
        let r2 = Cyclotomic::sqrt_rational(&BigRational::from_integer(2.into())).unwrap();
        let inv = r2.inv().unwrap();
        assert_eq!(s[0][0], inv);
        assert_eq!(s[0][1], inv);
        assert_eq!(s[1][0], inv);
        assert_eq!(s[1][1], inv.neg());
        // Gauss sum 1 + i with |g|^2 = 2
        let gauss = m.gauss_sum();
        assert_eq!(gauss, Cyclotomic::one().add(&Cyclotomic::root_of_unity(4, 1)));
        assert_eq!(gauss.mul(&gauss.conj()), Cyclotomic::from_integer(2));
    }

    #[test]
    fn degenerate_form_rejected_with_witness() {
        let k = Arc::new(GroupTable::cyclic(2));
        let theta = vec![Cyclotomic::one(), Cyclotomic::from_integer(-1)];
        match metric_validate(k, theta) {
            Err(Error::MetricAxiom(msg)) => {
                assert!(msg.contains("degenerate") && msg.contains('1'), "{msg}")
            }
            other => panic!("expected degeneracy error, got {other:?}"),
        }
    }

    #[test]
    fn trivial_group() {
        let k = Arc::new(GroupTable::cyclic(1));
        let m = metric_validate(k, vec![Cyclotomic::one()]).unwrap();
        assert_eq!(m.s_matrix().unwrap(), vec![vec![Cyclotomic::one()]]);
        assert_eq!(m.gauss_sum(), Cyclotomic::one());
    }

    #[test]
    fn identity_automorphism_crossed_data_is_full_matrix() {
        let m = z2_with_i();
        let f = metric_automorphism(&m, GroupAutomorphism::identity(&m.group)).unwrap();
        let data = metric_crossed_data(&m, &f).unwrap();
        assert_eq!(data.fixed, vec![0, 1]);
        assert_eq!(data.displacement, vec![0]);
        assert_eq!(data.matrix, m.s_matrix().unwrap());
    }

    #[test]
    fn heisenberg_kernels_are_metric_groups() {
        for (p, m) in [(2u32, 1usize), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)] {
            let tower = FieldTower::new(p, m).unwrap();
            let base = tower.base();
            for s in base.elements().skip(1) {
                let roots = tower.additive_roots(&s).unwrap();
                let (metric, maut) = from_additive_roots(&tower, &roots).unwrap();
                assert_eq!(metric.order(), (p * p) as usize);
                // classical identity |gauss|^2 = |K| per instance
                let g = metric.gauss_sum();
                assert_eq!(g.mul(&g.conj()), Cyclotomic::from_integer((p * p) as i64));
                let data = metric_crossed_data(&metric, &maut).unwrap();
                assert_eq!(data.fixed.len(), data.coset_reps.len());
                // each crossed-matrix row is multiplicative in the coset label
                for &k in &data.fixed {
                    for &l1 in &data.coset_reps {
                        for &l2 in &data.coset_reps {
                            let prod = metric.group.mul(l1, l2);
                            assert_eq!(
                                metric.pairing[k][prod],
                                metric.pairing[k][l1].mul(&metric.pairing[k][l2])
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn q2_and_q4_crossed_sizes() {
        // p = 2, q = 2, s = 1: fixed subgroup of order 2, 2x2 unitary matrix
        let tower = FieldTower::new(2, 1).unwrap();
        let roots = tower.additive_roots(&tower.base().one()).unwrap();
        let (metric, maut) = from_additive_roots(&tower, &roots).unwrap();
        let data = metric_crossed_data(&metric, &maut).unwrap();
        assert_eq!(data.fixed.len(), 2);
        assert_eq!(data.displacement.len(), 2);
        assert_eq!(data.matrix.len(), 2);

        // p = 2, q = 4, s = omega: trivial fixed subgroup, 1x1 matrix (1)
        let tower = FieldTower::new(2, 2).unwrap();
        let omega = tower.base().element(2);
        let roots = tower.additive_roots(&omega).unwrap();
        let (metric, maut) = from_additive_roots(&tower, &roots).unwrap();
        let data = metric_crossed_data(&metric, &maut).unwrap();
        assert_eq!(data.fixed.len(), 1);
        assert_eq!(data.matrix, vec![vec![Cyclotomic::one()]]);
    }

    #[test]
    fn form_violations_rejected() {
        // theta(-k) != theta(k) is caught
        let k = Arc::new(GroupTable::cyclic(4));
        let theta = vec![
            Cyclotomic::one(),
            Cyclotomic::root_of_unity(8, 1),
            Cyclotomic::root_of_unity(4, 1),
            Cyclotomic::root_of_unity(8, 7),
        ];
        assert!(matches!(metric_validate(k, theta), Err(Error::MetricAxiom(_))));
        // a valid form on Z/4 for contrast: theta(k) = zeta_8^{k^2}
        let k = Arc::new(GroupTable::cyclic(4));
        let theta: Vec<Cyclotomic> =
            (0..4).map(|j| Cyclotomic::root_of_unity(8, (j * j) as i64)).collect();
        let m = metric_validate(k.clone(), theta).unwrap();
        let neg = GroupAutomorphism::inversion(&k).unwrap();
        assert!(metric_automorphism(&m, neg).is_ok());
    }
}
