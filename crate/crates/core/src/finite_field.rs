//! Finite field towers F_p <= F_q <= F_{q^M}.
//!
//! Every level is realised as F_p[x]/(f) where f is the deterministically
//! chosen irreducible of the required degree: the monic polynomial whose
//! non-leading coefficient vector has the smallest little-endian integer
//! encoding. Elements are coefficient vectors over F_p in that basis, so the
//! element of index i has the digits of i base p as coefficients.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Mutex;

use crate::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of some F_{p^d}: coefficient vector over F_p, little-endian in the
/// power basis of the level's defining polynomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FieldElt(pub Vec<u32>);

impl FieldElt {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// True when the element lies in the prime field (all non-constant
    /// coefficients vanish in the chosen basis).
    pub fn in_prime_field(&self) -> bool {
        self.0[1..].iter().all(|&c| c == 0)
    }

    pub fn prime_value(&self) -> Option<u32> {
        self.in_prime_field().then(|| self.0[0])
    }
}

/// One level F_{p^degree} of a tower.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FqField {
    pub p: u32,
    pub degree: usize,
    /// Non-leading coefficients of the monic defining polynomial, ascending.
    pub modulus: Vec<u32>,
}

impl FqField {
    pub fn size(&self) -> usize {
        (self.p as usize).pow(self.degree as u32)
    }

    pub fn zero(&self) -> FieldElt {
        FieldElt(vec![0; self.degree])
    }

    pub fn one(&self) -> FieldElt {
        let mut v = vec![0; self.degree];
        v[0] = 1;
        FieldElt(v)
    }

    pub fn from_prime(&self, c: u32) -> FieldElt {
        let mut v = vec![0; self.degree];
        v[0] = c % self.p;
        FieldElt(v)
    }

    /// Element with the given little-endian base-p encoding.
    pub fn element(&self, index: usize) -> FieldElt {
        let mut v = vec![0; self.degree];
        let mut idx = index;
        for c in v.iter_mut() {
            *c = (idx % self.p as usize) as u32;
            idx /= self.p as usize;
        }
        debug_assert_eq!(idx, 0, "index out of range");
        FieldElt(v)
    }

    pub fn index(&self, x: &FieldElt) -> usize {
        let mut idx = 0usize;
        for &c in x.0.iter().rev() {
            idx = idx * self.p as usize + c as usize;
        }
        idx
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElt> + '_ {
        (0..self.size()).map(|i| self.element(i))
    }

    pub fn add(&self, a: &FieldElt, b: &FieldElt) -> FieldElt {
        FieldElt(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self, a: &FieldElt) -> FieldElt {
        FieldElt(a.0.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn sub(&self, a: &FieldElt, b: &FieldElt) -> FieldElt {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElt, b: &FieldElt) -> FieldElt {
        let p = self.p as u64;
        let d = self.degree;
        if d == 1 {
            return FieldElt(vec![(a.0[0] as u64 * b.0[0] as u64 % p) as u32]);
        }
        let mut prod = vec![0u64; 2 * d - 1];
        for i in 0..d {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] = (prod[i + j] + a.0[i] as u64 * b.0[j] as u64) % p;
            }
        }
        // reduce using x^d = -(modulus)
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..d {
                if self.modulus[j] != 0 {
                    let sub = c * self.modulus[j] as u64 % p;
                    prod[k - d + j] = (prod[k - d + j] + p - sub) % p;
                }
            }
        }
        FieldElt(prod[..d].iter().map(|&c| c as u32).collect())
    }

    pub fn pow(&self, a: &FieldElt, mut e: u64) -> FieldElt {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElt) -> Result<FieldElt> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.size() as u64 - 2))
    }

    /// The prime Frobenius x -> x^p.
    pub fn frobenius(&self, a: &FieldElt) -> FieldElt {
        self.pow(a, self.p as u64)
    }

    /// Absolute trace to F_p of an element of this level.
    pub fn trace_to_prime(&self, a: &FieldElt) -> u32 {
        let mut acc = self.zero();
        let mut x = a.clone();
        for _ in 0..self.degree {
            acc = self.add(&acc, &x);
            x = self.frobenius(&x);
        }
        debug_assert!(acc.in_prime_field(), "trace must land in the prime field");
        acc.0[0]
    }
}

/// F_p together with deterministically constructed extensions.
#[derive(Debug)]
pub struct FieldTower {
    pub p: u32,
    pub m: usize,
    levels: Mutex<HashMap<usize, FqField>>,
}

impl FieldTower {
    pub fn new(p: u32, m: usize) -> Result<FieldTower> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        assert!(m >= 1);
        Ok(FieldTower { p, m, levels: Mutex::new(HashMap::new()) })
    }

    pub fn q(&self) -> usize {
        (self.p as usize).pow(self.m as u32)
    }

    /// The level F_{p^degree}.
    pub fn level(&self, degree: usize) -> FqField {
        let mut cache = self.levels.lock().unwrap();
        cache
            .entry(degree)
            .or_insert_with(|| FqField {
                p: self.p,
                degree,
                modulus: least_irreducible(self.p, degree),
            })
            .clone()
    }

    /// The designated middle field F_q.
    pub fn base(&self) -> FqField {
        self.level(self.m)
    }

    /// tr_{F_q/F_p} of an element of the base level.
    pub fn trace_to_prime(&self, x: &FieldElt) -> u32 {
        self.base().trace_to_prime(x)
    }

    /// Field embedding F_{p^a} -> F_{p^b} (a | b), determined by sending the
    /// generator to the root of the degree-a defining polynomial with least
    /// element index.
    pub fn embedding(&self, from_degree: usize, to_degree: usize) -> Embedding {
        assert!(to_degree % from_degree == 0);
        let from = self.level(from_degree);
        let to = self.level(to_degree);
        if from_degree == to_degree {
            let powers = (0..from_degree)
                .map(|i| {
                    let mut v = vec![0; to.degree];
                    v[i] = 1;
                    FieldElt(v)
                })
                .collect();
            return Embedding { from, to, powers };
        }
        let root = to
            .elements()
            .find(|x| {
                // evaluate the `from` defining polynomial at x inside `to`
                let mut acc = to.zero();
                let mut pw = to.one();
                for &c in &from.modulus {
                    if c != 0 {
                        acc = to.add(&acc, &to.mul(&to.from_prime(c), &pw));
                    }
                    pw = to.mul(&pw, x);
                }
                acc = to.add(&acc, &pw); // monic leading term
                acc.is_zero()
            })
            .expect("defining polynomial splits in any extension of its degree");
        let mut powers = Vec::with_capacity(from_degree);
        let mut pw = to.one();
        for _ in 0..from_degree {
            powers.push(pw.clone());
            pw = to.mul(&pw, &root);
        }
        Embedding { from, to, powers }
    }

    /// Roots of the degree-p^2 additive polynomial s^p X^{p^2} - s X, found
    /// by scanning extensions F_{q^M} for M = 1, 2, ... until all p^2 roots
    /// appear. These form a group under addition, stable under x -> x^q.
    pub fn additive_roots(&self, s: &FieldElt) -> Result<AdditiveRootGroup> {
        self.additive_roots_bounded(s, 4 * self.m * ((self.p * self.p - 1) as usize))
    }

    pub fn additive_roots_bounded(
        &self,
        s: &FieldElt,
        max_m: usize,
    ) -> Result<AdditiveRootGroup> {
        assert!(!s.is_zero(), "s must be nonzero");
        let p = self.p as u64;
        let target = (self.p * self.p) as usize;
        for big_m in 1..=max_m {
            let degree = self.m * big_m;
            if (self.p as f64).powi(degree as i32) > 2e6 {
                break; // far beyond the splitting field; enumeration is hopeless
            }
            let field = self.level(degree);
            let emb = self.embedding(self.m, degree);
            let s_big = emb.apply(s);
            let s_p = field.pow(&s_big, p);
            let mut roots: Vec<FieldElt> = Vec::new();
            for x in field.elements() {
                let xpp = field.pow(&x, p * p);
                let lhs = field.mul(&s_p, &xpp);
                let rhs = field.mul(&s_big, &x);
                if lhs == rhs {
                    roots.push(x);
                }
            }
            if roots.len() == target {
                roots.sort_by_key(|r| field.index(r));
                let q = self.q() as u64;
                let frobenius_action: Vec<usize> = roots
                    .iter()
                    .map(|r| {
                        let img = field.pow(r, q);
                        roots
                            .iter()
                            .position(|x| *x == img)
                            .expect("q-power Frobenius permutes the root group")
                    })
                    .collect();
                let group = AdditiveRootGroup {
                    field,
                    base_degree: self.m,
                    elements: roots,
                    frobenius_action,
                    s_embedded: s_big,
                };
                group.verify(self)?;
                return Ok(group);
            }
        }
        Err(Error::DegreeBound { bound: max_m })
    }
}

/// An embedding of one tower level into a higher one.
pub struct Embedding {
    pub from: FqField,
    pub to: FqField,
    powers: Vec<FieldElt>,
}

impl Embedding {
    pub fn apply(&self, x: &FieldElt) -> FieldElt {
        let mut acc = self.to.zero();
        for (i, &c) in x.0.iter().enumerate() {
            if c != 0 {
                acc = self
                    .to
                    .add(&acc, &self.to.mul(&self.to.from_prime(c), &self.powers[i]));
            }
        }
        acc
    }
}

/// The kernel of the additive isogeny attached to s, realised as a root set
/// in a concrete extension field. Always of order p^2.
pub struct AdditiveRootGroup {
    pub field: FqField,
    pub base_degree: usize,
    pub elements: Vec<FieldElt>,
    /// Permutation induced by x -> x^q, in `elements` order.
    pub frobenius_action: Vec<usize>,
    pub s_embedded: FieldElt,
}

impl AdditiveRootGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, x: &FieldElt) -> Option<usize> {
        self.elements.iter().position(|e| e == x)
    }

    /// Indices of roots fixed by x -> x^q, i.e. the F_q-points.
    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.frobenius_action[i] == i)
            .collect()
    }

    /// For each fixed root, the corresponding element of the base level F_q.
    pub fn fq_points(&self, tower: &FieldTower) -> Vec<(usize, FieldElt)> {
        let emb = tower.embedding(tower.m, self.field.degree);
        let base = tower.base();
        let mut out = Vec::new();
        for i in self.fixed_points() {
            let elt = base
                .elements()
                .find(|x| emb.apply(x) == self.elements[i])
                .expect("a q-Frobenius-fixed root lies in the embedded F_q");
            out.push((i, elt));
        }
        out
    }

    fn verify(&self, tower: &FieldTower) -> Result<()> {
        let f = &self.field;
        let p = tower.p as u64;
        // closed under addition and negation
        for a in &self.elements {
            if self.position(&f.neg(a)).is_none() {
                return Err(Error::Internal("root set not closed under negation".into()));
            }
            for b in &self.elements {
                if self.position(&f.add(a, b)).is_none() {
                    return Err(Error::Internal("root set not closed under addition".into()));
                }
            }
        }
        // equivalent characterisation: s * k^{p+1} lies in F_p
        for k in &self.elements {
            let val = f.mul(&self.s_embedded, &f.pow(k, p + 1));
            if f.pow(&val, p) != val {
                return Err(Error::Internal(
                    "s*k^{p+1} escaped the prime field for a root k".into(),
                ));
            }
        }
        // Frobenius respects addition on the root set
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                let sum = self.position(&f.add(a, b)).unwrap();
                let img = self.position(&f.add(
                    &self.elements[self.frobenius_action[i]],
                    &self.elements[self.frobenius_action[j]],
                ));
                if img != Some(self.frobenius_action[sum]) {
                    return Err(Error::Internal("Frobenius is not additive on roots".into()));
                }
            }
        }
        Ok(())
    }

    /// Exponent c with theta(k) = zeta_p^c, i.e. the prime-field value of
    /// s*k^{p+1} at the root of the given index.
    pub fn theta_exponent(&self, idx: usize, p: u32) -> u32 {
        let f = &self.field;
        let val = f.mul(&self.s_embedded, &f.pow(&self.elements[idx], p as u64 + 1));
        val.prime_value()
            .expect("s*k^{p+1} lies in F_p on the kernel")
    }
}

/// Smallest (by little-endian integer encoding of the non-leading
/// coefficients) monic irreducible of the given degree over F_p.
fn least_irreducible(p: u32, degree: usize) -> Vec<u32> {
    if degree == 1 {
        return vec![0]; // x itself: the level is F_p
    }
    let size = (p as usize).pow(degree as u32);
    for v in 0..size {
        let mut coeffs = vec![0u32; degree];
        let mut idx = v;
        for c in coeffs.iter_mut() {
            *c = (idx % p as usize) as u32;
            idx /= p as usize;
        }
        if poly_is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

/// Irreducibility of x^d + c_{d-1} x^{d-1} + ... + c_0 over F_p:
/// x^{p^d} = x mod f, and gcd(x^{p^{d/r}} - x, f) constant for prime r | d.
fn poly_is_irreducible(p: u32, coeffs: &[u32]) -> bool {
    let d = coeffs.len();
    let xq = |e: u32| -> Vec<u32> {
        let mut cur = vec![0u32; d];
        cur[1] = 1;
        polymod_pow(p, coeffs, &cur, (p as u64).pow(e))
    };
    let frob_d = xq(d as u32);
    let mut x = vec![0u32; d];
    x[1] = 1;
    if frob_d != x {
        return false;
    }
    let mut dd = d;
    let mut primes = Vec::new();
    let mut r = 2;
    while r * r <= dd {
        if dd % r == 0 {
            primes.push(r);
            while dd % r == 0 {
                dd /= r;
            }
        }
        r += 1;
    }
    if dd > 1 {
        primes.push(dd);
    }
    for r in primes {
        let g = xq((d / r) as u32);
        let diff = poly_sub_mod(p, &g, &x);
        if poly_gcd_degree(p, coeffs, &diff) != 0 {
            return false;
        }
    }
    true
}

fn poly_sub_mod(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| (x + p - y) % p).collect()
}

fn polymod_mul(p: u32, modulus: &[u32], a: &[u32], b: &[u32]) -> Vec<u32> {
    let d = modulus.len();
    let pp = p as u64;
    let mut prod = vec![0u64; 2 * d - 1];
    for i in 0..d {
        if a[i] == 0 {
            continue;
        }
        for j in 0..d {
            prod[i + j] = (prod[i + j] + a[i] as u64 * b[j] as u64) % pp;
        }
    }
    for k in (d..2 * d - 1).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for j in 0..d {
            if modulus[j] != 0 {
                let sub = c * modulus[j] as u64 % pp;
                prod[k - d + j] = (prod[k - d + j] + pp - sub) % pp;
            }
        }
    }
    prod[..d].iter().map(|&c| c as u32).collect()
}

fn polymod_pow(p: u32, modulus: &[u32], base: &[u32], mut e: u64) -> Vec<u32> {
    let d = modulus.len();
    let mut acc = vec![0u32; d];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = polymod_mul(p, modulus, &acc, &b);
        }
        b = polymod_mul(p, modulus, &b, &b);
        e >>= 1;
    }
    acc
}

/// Degree of gcd(f, g) where f is monic, given by its non-leading coeffs.
fn poly_gcd_degree(p: u32, f_tail: &[u32], g: &[u32]) -> usize {
    let mut a: Vec<u32> = f_tail.to_vec();
    a.push(1);
    let mut b: Vec<u32> = g.to_vec();
    let deg = |v: &[u32]| v.iter().rposition(|&c| c != 0);
    loop {
        let db = match deg(&b) {
            None => return deg(&a).unwrap_or(0),
            Some(d) => d,
        };
        let inv_lead = mod_inverse(b[db], p);
        let mut rem = a.clone();
        while let Some(da) = deg(&rem) {
            if da < db {
                break;
            }
            let c = rem[da] as u64 * inv_lead as u64 % p as u64;
            for j in 0..=db {
                let sub = c * b[j] as u64 % p as u64;
                rem[da - db + j] =
                    ((rem[da - db + j] as u64 + p as u64 - sub) % p as u64) as u32;
            }
        }
        a = b;
        b = rem;
    }
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}
