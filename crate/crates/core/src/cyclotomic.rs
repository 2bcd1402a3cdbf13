//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! A [`Cyclotomic`] stores a conductor `N` and a coefficient vector of length
//! phi(N) over the rationals: the canonical representative of the element
//! modulo the N-th cyclotomic polynomial, in the power basis
//! 1, zeta, ..., zeta^{phi(N)-1} with zeta = zeta_N = e^{2*pi*i/N}.
//!
//! Equality is a value comparison, not a representation comparison: operands
//! over different conductors are lifted to the lcm before comparing. Purely
//! rational values are descended to conductor 1 on construction so that the
//! common case stays cheap.

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::{Error, Result};

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Euler totient by trial division; conductors here are tiny.
pub fn euler_phi(n: u32) -> u32 {
    let mut n = n as u64;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as u32
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    (a as u64 / gcd_u64(a as u64, b as u64) * b as u64) as u32
}

/// Integer coefficients of the n-th cyclotomic polynomial, ascending degree.
fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    // (x^n - 1) / prod_{d | n, d < n} Phi_d
    let mut num = vec![BigInt::from(0); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::from(1);
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials (ascending coefficients), divisor monic.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len() - 1;
    assert!(den[dn].is_one(), "divisor must be monic");
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![BigInt::from(0); qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn].clone();
        quot[i] = c.clone();
        for j in 0..=dn {
            let t = &den[j] * &c;
            rem[i + j] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division not exact");
    quot
}

/// Per-conductor reduction data: canonical forms of zeta^k for k >= phi(N).
struct ReductionTable {
    phi: usize,
    /// rows[j] = coefficients of zeta^{phi + j} in the canonical basis.
    rows: Vec<Vec<BigRational>>,
}

impl ReductionTable {
    fn build(n: u32) -> ReductionTable {
        let phi = euler_phi(n) as usize;
        let poly = cyclotomic_poly(n);
        // zeta^phi = -(c_0 + c_1 zeta + ... + c_{phi-1} zeta^{phi-1})
        let base: Vec<BigRational> = (0..phi)
            .map(|i| BigRational::from_integer(-poly[i].clone()))
            .collect();
        // Highest exponent that can appear: products give 2*phi - 2, lifts give n - 1.
        let max_exp = std::cmp::max(n as usize, 2 * phi).saturating_sub(1);
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        if max_exp >= phi {
            rows.push(base);
            for _ in (phi + 1)..=max_exp {
                let prev = rows.last().unwrap();
                // multiply by zeta: shift up, reduce the overflow via row 0
                let mut next = vec![BigRational::zero(); phi];
                for i in 0..phi - 1 {
                    next[i + 1] = prev[i].clone();
                }
                let top = prev[phi - 1].clone();
                if !top.is_zero() {
                    for i in 0..phi {
                        let t = &rows[0][i] * &top;
                        next[i] += t;
                    }
                }
                rows.push(next);
            }
        }
        ReductionTable { phi, rows }
    }

    fn reduce(&self, raw: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.phi];
        for (k, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < self.phi {
                out[k] += c;
            } else {
                let row = &self.rows[k - self.phi];
                for i in 0..self.phi {
                    if !row[i].is_zero() {
                        let t = &row[i] * c;
                        out[i] += t;
                    }
                }
            }
        }
        out
    }
}

fn table_cache() -> &'static Mutex<HashMap<u32, Arc<ReductionTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<ReductionTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn table(n: u32) -> Arc<ReductionTable> {
    let mut cache = table_cache().lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| Arc::new(ReductionTable::build(n)))
        .clone()
}

/// Numeric stand-in for reports; never an input to a verified identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
}

impl ComplexApprox {
    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
    pub fn arg(&self) -> f64 {
        self.im.atan2(self.re)
    }
}

/// An exact element of some cyclotomic field.
#[derive(Clone)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<BigRational>,
}

/// Value equality: representations over different conductors are lifted to
/// the lcm before comparison.
impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Cyclotomic) -> bool {
        if self.order == other.order {
            self.coeffs == other.coeffs
        } else {
            self.cmp_key(other) == Ordering::Equal
        }
    }
}

impl Eq for Cyclotomic {}

impl Cyclotomic {
    fn make(order: u32, raw: Vec<BigRational>) -> Cyclotomic {
        let t = table(order);
        let coeffs = t.reduce(&raw);
        let mut v = Cyclotomic { order, coeffs };
        v.descend_rational();
        v
    }

    /// Drop to conductor 1 when the value is rational.
    fn descend_rational(&mut self) {
        if self.order > 1 && self.coeffs[1..].iter().all(|c| c.is_zero()) {
            let c0 = self.coeffs[0].clone();
            self.order = 1;
            self.coeffs = vec![c0];
        }
    }

    pub fn zero() -> Cyclotomic {
        Cyclotomic { order: 1, coeffs: vec![BigRational::zero()] }
    }

    pub fn one() -> Cyclotomic {
        Cyclotomic { order: 1, coeffs: vec![BigRational::one()] }
    }

    pub fn from_rational(r: BigRational) -> Cyclotomic {
        Cyclotomic { order: 1, coeffs: vec![r] }
    }

    pub fn from_integer(n: i64) -> Cyclotomic {
        Cyclotomic::from_rational(big(n))
    }

    /// zeta_n^k.
    pub fn root_of_unity(n: u32, k: i64) -> Cyclotomic {
        assert!(n >= 1);
        let kk = k.rem_euclid(n as i64) as usize;
        let mut raw = vec![BigRational::zero(); kk + 1];
        raw[kk] = BigRational::one();
        Cyclotomic::make(n, raw)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Canonical coefficients over the stored conductor, length phi(order).
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        *self == Cyclotomic::one()
    }

    /// Some(r) when the value is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn lift_raw(&self, n: u32) -> Vec<BigRational> {
        debug_assert!(n % self.order == 0);
        let stride = (n / self.order) as usize;
        let mut raw = vec![BigRational::zero(); (self.coeffs.len() - 1) * stride + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[i * stride] = c.clone();
            }
        }
        raw
    }

    /// Rewrite over conductor `n` (a multiple of the current one).
    pub fn lift_to(&self, n: u32) -> Cyclotomic {
        if n == self.order {
            return self.clone();
        }
        Cyclotomic::make(n, self.lift_raw(n))
    }

    fn common(&self, other: &Cyclotomic) -> (Vec<BigRational>, Vec<BigRational>, u32) {
        let n = lcm_u32(self.order, other.order);
        let t = table(n);
        let a = t.reduce(&self.lift_raw(n));
        let b = t.reduce(&other.lift_raw(n));
        (a, b, n)
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        let (mut a, b, n) = self.common(other);
        for i in 0..a.len() {
            a[i] += &b[i];
        }
        let mut v = Cyclotomic { order: n, coeffs: a };
        v.descend_rational();
        v
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        let (mut a, b, n) = self.common(other);
        for i in 0..a.len() {
            a[i] -= &b[i];
        }
        let mut v = Cyclotomic { order: n, coeffs: a };
        v.descend_rational();
        v
    }

    pub fn neg(&self) -> Cyclotomic {
        let coeffs = self.coeffs.iter().map(|c| -c.clone()).collect();
        Cyclotomic { order: self.order, coeffs }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        // rational fast paths keep conductors from inflating
        if let Some(r) = self.as_rational() {
            return other.scale(&r);
        }
        if let Some(r) = other.as_rational() {
            return self.scale(&r);
        }
        let (a, b, n) = self.common(other);
        let mut raw = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if !cb.is_zero() {
                    let t = ca * cb;
                    raw[i + j] += t;
                }
            }
        }
        Cyclotomic::make(n, raw)
    }

    pub fn scale(&self, r: &BigRational) -> Cyclotomic {
        if r.is_zero() {
            return Cyclotomic::zero();
        }
        let coeffs = self.coeffs.iter().map(|c| c * r).collect();
        let mut v = Cyclotomic { order: self.order, coeffs };
        v.descend_rational();
        v
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the conductor's cyclotomic polynomial.
    pub fn inv(&self) -> Result<Cyclotomic> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Cyclotomic::from_rational(r.recip()));
        }
        let n = self.order;
        let modulus: Vec<BigRational> = cyclotomic_poly(n)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let a: Vec<BigRational> = self.coeffs.clone();
        // extended gcd of a and Phi_n over Q[x]; Phi_n irreducible so gcd is a unit
        let (g, u) = poly_ext_gcd(&a, &modulus);
        debug_assert_eq!(g.len(), 1);
        let ginv = g[0].recip();
        let raw: Vec<BigRational> = u.iter().map(|c| c * &ginv).collect();
        Ok(Cyclotomic::make(n, raw))
    }

    pub fn div(&self, other: &Cyclotomic) -> Result<Cyclotomic> {
        Ok(self.mul(&other.inv()?))
    }

    /// Complex conjugation: zeta_N -> zeta_N^{N-1}.
    pub fn conj(&self) -> Cyclotomic {
        self.galois(self.order as i64 - 1)
    }

    /// Galois map zeta -> zeta^j for j coprime to the conductor.
    pub fn galois(&self, j: i64) -> Cyclotomic {
        let n = self.order;
        if n == 1 {
            return self.clone();
        }
        let jj = j.rem_euclid(n as i64) as usize;
        assert_eq!(gcd_u64(jj as u64, n as u64), 1, "galois exponent must be a unit");
        let mut raw = vec![BigRational::zero(); (self.coeffs.len() - 1) * jj + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[(i * jj) % n as usize] += c;
            }
        }
        Cyclotomic::make(n, raw)
    }

    /// Numeric embedding zeta_N -> e^{2*pi*i/N}; for reports and heuristics only.
    pub fn embed(&self) -> ComplexApprox {
        let mut z = Complex64::new(0.0, 0.0);
        let n = self.order as f64;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * (k as f64) / n;
            z += Complex64::new(ang.cos(), ang.sin()) * x;
        }
        ComplexApprox { re: z.re, im: z.im }
    }

    /// Embedding guaranteed to `digits` decimal digits. Coefficients here are
    /// small, so f64 honours up to 12 digits.
    pub fn embed_digits(&self, digits: u32) -> Result<ComplexApprox> {
        if digits > 12 {
            return Err(Error::Internal(format!(
                "numeric embedding supports at most 12 digits, got {digits}"
            )));
        }
        Ok(self.embed())
    }

    /// Exact square root of a nonnegative rational, as the positive real
    /// cyclotomic. sqrt(p) is built from the quadratic Gauss sum
    /// sum_k zeta_p^{k^2}, which needs conductor p (p = 1 mod 4) or 4p
    /// (p = 3 mod 4); sqrt(2) lives in conductor 8.
    pub fn sqrt_rational(r: &BigRational) -> Result<Cyclotomic> {
        if r.is_negative() {
            return Err(Error::SqrtNotRepresentable(r.to_string()));
        }
        if r.is_zero() {
            return Ok(Cyclotomic::zero());
        }
        // sqrt(a/b) = sqrt(a*b)/b
        let ab = r.numer() * r.denom();
        let (square_part, squarefree) = split_square(&ab);
        let mut out = Cyclotomic::from_rational(
            BigRational::new(square_part, r.denom().clone()),
        );
        let mut d = squarefree;
        let mut p = BigInt::from(2);
        while &p * &p <= d {
            if (&d % &p).is_zero() {
                d /= &p;
                out = out.mul(&sqrt_prime(p.to_u32().unwrap()));
            }
            p += 1;
        }
        if d > BigInt::one() {
            out = out.mul(&sqrt_prime(d.to_u32().ok_or_else(|| {
                Error::SqrtNotRepresentable(format!("prime factor {d} too large"))
            })?));
        }
        // exactness certificate
        let sq = out.mul(&out);
        if sq.as_rational().as_ref() != Some(r) {
            return Err(Error::SqrtNotRepresentable(r.to_string()));
        }
        Ok(out)
    }

    /// Deterministic total order on values (used for canonical tie-breaking).
    pub fn cmp_key(&self, other: &Cyclotomic) -> Ordering {
        let (a, b, _) = self.common(other);
        for i in 0..a.len() {
            match a[i].cmp(&b[i]) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

/// (largest square divisor's root, squarefree part) of a positive integer.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut n = n.clone();
    let mut root = BigInt::one();
    let mut free = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0u32;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            root *= &p;
        }
        if e % 2 == 1 {
            free *= &p;
        }
        p += 1;
    }
    if n > BigInt::one() {
        free *= n;
    }
    (root, free)
}

/// sqrt(p) for a prime p, as an exact cyclotomic.
fn sqrt_prime(p: u32) -> Cyclotomic {
    if p == 2 {
        // zeta_8 + zeta_8^{-1} = sqrt(2)
        return Cyclotomic::root_of_unity(8, 1).add(&Cyclotomic::root_of_unity(8, 7));
    }
    let mut gauss = Cyclotomic::zero();
    for k in 0..p as i64 {
        gauss = gauss.add(&Cyclotomic::root_of_unity(p, k * k));
    }
    if p % 4 == 1 {
        gauss
    } else {
        // gauss sum equals i*sqrt(p); divide by i
        gauss.mul(&Cyclotomic::root_of_unity(4, 3))
    }
}

/// Extended gcd over Q[x]: returns (g, u) with u*a = g mod b, g the gcd
/// normalised to be the final nonzero remainder (a constant when coprime).
fn poly_ext_gcd(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let trim = |v: &mut Vec<BigRational>| {
        while v.len() > 1 && v.last().unwrap().is_zero() {
            v.pop();
        }
    };
    let mut r0: Vec<BigRational> = b.to_vec();
    let mut r1: Vec<BigRational> = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut u0: Vec<BigRational> = vec![BigRational::zero()];
    let mut u1: Vec<BigRational> = vec![BigRational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, rem) = poly_divmod(&r0, &r1);
        let u_next = poly_sub(&u0, &poly_mul(&q, &u1));
        r0 = r1;
        r1 = rem;
        trim(&mut r1);
        u0 = u1;
        u1 = u_next;
    }
    (r0, u0)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                let t = ca * cb;
                out[i + j] += t;
            }
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    out
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    if a.len() < b.len() {
        return (vec![BigRational::zero()], rem);
    }
    let dq = a.len() - 1 - db;
    let mut quot = vec![BigRational::zero(); dq + 1];
    let lead = b[db].clone();
    for i in (0..=dq).rev() {
        let c = &rem[i + db] / &lead;
        if c.is_zero() {
            continue;
        }
        quot[i] = c.clone();
        for j in 0..=db {
            let t = &b[j] * &c;
            rem[i + j] -= t;
        }
    }
    rem.truncate(db.max(1));
    (quot, rem)
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "z{}^{}", self.order, k)?;
            } else {
                write!(f, "{c}*z{}^{}", self.order, k)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            order: u32,
            coeffs: CoeffMap<'a>,
        }
        struct CoeffMap<'a>(&'a [BigRational]);
        impl Serialize for CoeffMap<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let nonzero = self.0.iter().enumerate().filter(|(_, c)| !c.is_zero());
                let mut map = serializer.serialize_map(None)?;
                for (k, c) in nonzero {
                    map.serialize_entry(&k.to_string(), &c.to_string())?;
                }
                map.end()
            }
        }
        Repr { order: self.order, coeffs: CoeffMap(&self.coeffs) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct CycVisitor;
        impl<'de> Visitor<'de> for CycVisitor {
            type Value = Cyclotomic;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a map with fields `order` and `coeffs`")
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<Cyclotomic, A::Error> {
                use serde::de::Error as DeError;
                let mut order: Option<u32> = None;
                let mut coeffs: Option<HashMap<String, String>> = None;
                while let Some(key) = access.next_key::<String>()? {
                    match key.as_str() {
                        "order" => order = Some(access.next_value()?),
                        "coeffs" => coeffs = Some(access.next_value()?),
                        other => return Err(DeError::unknown_field(other, &["order", "coeffs"])),
                    }
                }
                let order = order.ok_or_else(|| DeError::missing_field("order"))?;
                if order == 0 {
                    return Err(DeError::custom("order must be positive"));
                }
                let coeffs = coeffs.ok_or_else(|| DeError::missing_field("coeffs"))?;
                let mut raw = vec![BigRational::zero(); order as usize];
                for (k, v) in coeffs {
                    let idx: usize = k.parse().map_err(DeError::custom)?;
                    if idx >= order as usize {
                        return Err(DeError::custom(format!(
                            "exponent {idx} out of range for order {order}"
                        )));
                    }
                    let r: BigRational = v.parse().map_err(DeError::custom)?;
                    raw[idx] = r;
                }
                Ok(Cyclotomic::make(order, raw))
            }
        }
        deserializer.deserialize_map(CycVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zeta(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    #[test]
    fn minimal_polynomial_of_zeta3() {
        // zeta_3 + zeta_3^2 = -1
        let s = zeta(3, 1).add(&zeta(3, 2));
        assert_eq!(s, Cyclotomic::from_integer(-1));
    }

    #[test]
    fn i_squared() {
        assert_eq!(zeta(4, 1).mul(&zeta(4, 1)), Cyclotomic::from_integer(-1));
    }

    #[test]
    fn vanishing_sum_of_fifth_roots() {
        let mut s = Cyclotomic::zero();
        for k in 0..5 {
            s = s.add(&zeta(5, k));
        }
        assert!(s.is_zero());
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(zeta(4, 1).conj(), zeta(4, 1).neg());
        let half3 = Cyclotomic::from_rational(BigRational::new(3.into(), 2.into()));
        assert_eq!(half3.conj(), half3);
        let real = zeta(8, 1).add(&zeta(8, 7));
        assert_eq!(real.conj(), real);
    }

    #[test]
    fn embedding_examples() {
        let z8 = zeta(8, 1).embed();
        let half_root = 0.5f64.sqrt();
        assert!((z8.re - half_root).abs() < 1e-7);
        assert!((z8.im - half_root).abs() < 1e-7);
        let v = Cyclotomic::one().add(&zeta(4, 1)).embed();
        assert!((v.re - 1.0).abs() < 1e-10 && (v.im - 1.0).abs() < 1e-10);
        assert!((v.abs() - 2f64.sqrt()).abs() < 1e-10);
        let z3 = zeta(3, 1).embed();
        assert!((z3.re + 0.5).abs() < 1e-10);
        assert!((z3.im - 0.8660254).abs() < 1e-7);
    }

    #[test]
    fn division() {
        let a = zeta(12, 7).add(&Cyclotomic::from_integer(3));
        let b = zeta(12, 5).sub(&Cyclotomic::from_integer(2));
        let q = a.div(&b).unwrap();
        assert_eq!(q.mul(&b), a);
        assert!(matches!(a.div(&Cyclotomic::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn equality_across_conductors() {
        // zeta_6 = -zeta_3^2
        assert_eq!(zeta(6, 1), zeta(3, 2).neg());
        assert_eq!(zeta(6, 1).cmp_key(&zeta(3, 2).neg()), Ordering::Equal);
    }

    #[test]
    fn sqrt_examples() {
        let two = BigRational::from_integer(2.into());
        let r = Cyclotomic::sqrt_rational(&two).unwrap();
        assert_eq!(r.mul(&r), Cyclotomic::from_integer(2));
        assert!(r.embed().re > 0.0);

        for p in [3i64, 5, 7, 13] {
            let rp = Cyclotomic::sqrt_rational(&big(p)).unwrap();
            assert_eq!(rp.mul(&rp), Cyclotomic::from_integer(p));
            assert!(rp.embed().re > 0.0, "sqrt({p}) embeds positive");
            assert!(rp.embed().im.abs() < 1e-9);
        }

        let nine_fourths = BigRational::new(9.into(), 4.into());
        let r = Cyclotomic::sqrt_rational(&nine_fourths).unwrap();
        assert_eq!(r, Cyclotomic::from_rational(BigRational::new(3.into(), 2.into())));

        let twelve = big(12);
        let r = Cyclotomic::sqrt_rational(&twelve).unwrap();
        assert_eq!(r.mul(&r), Cyclotomic::from_integer(12));

        assert!(Cyclotomic::sqrt_rational(&big(-2)).is_err());
        assert!(Cyclotomic::sqrt_rational(&BigRational::zero()).unwrap().is_zero());
    }

    #[test]
    fn embed_digit_contract() {
        let v = zeta(7, 3);
        assert!(v.embed_digits(10).is_ok());
        assert!(v.embed_digits(13).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let v = zeta(12, 7).add(&Cyclotomic::from_rational(BigRational::new(3.into(), 2.into())));
        let json = serde_json::to_string(&v).unwrap();
        let back: Cyclotomic = serde_json::from_str(&json).unwrap();
        assert_eq!(v, back);
        // non-canonical input reduces on parse
        let parsed: Cyclotomic =
            serde_json::from_str(r#"{"order":3,"coeffs":{"1":"1","2":"1"}}"#).unwrap();
        assert_eq!(parsed, Cyclotomic::from_integer(-1));
    }

    fn arb_cyc() -> impl Strategy<Value = Cyclotomic> {
        (1u32..=12, proptest::collection::vec((-4i64..=4, 0usize..12), 0..4)).prop_map(
            |(n, terms)| {
                let mut v = Cyclotomic::zero();
                for (c, k) in terms {
                    v = v.add(&zeta(n, k as i64).scale(&big(c)));
                }
                v
            },
        )
    }

    proptest! {
        #[test]
        fn conj_is_ring_involution(a in arb_cyc(), b in arb_cyc()) {
            prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
            prop_assert_eq!(a.conj().conj(), a);
        }

        #[test]
        fn embedding_is_multiplicative(a in arb_cyc(), b in arb_cyc()) {
            let lhs = a.mul(&b).embed();
            let (ea, eb) = (a.embed(), b.embed());
            let re = ea.re * eb.re - ea.im * eb.im;
            let im = ea.re * eb.im + ea.im * eb.re;
            prop_assert!((lhs.re - re).abs() < 1e-6);
            prop_assert!((lhs.im - im).abs() < 1e-6);
        }

        #[test]
        fn norm_is_nonnegative_real(a in arb_cyc()) {
            let n = a.mul(&a.conj()).embed();
            prop_assert!(n.im.abs() < 1e-6);
            prop_assert!(n.re > -1e-6);
        }

        #[test]
        fn add_mul_distribute(a in arb_cyc(), b in arb_cyc(), c in arb_cyc()) {
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn division_round_trips(a in arb_cyc(), b in arb_cyc()) {
            prop_assume!(!b.is_zero());
            let q = a.div(&b).unwrap();
            prop_assert_eq!(q.mul(&b), a);
        }
    }
}
