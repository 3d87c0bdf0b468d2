//! Exact arithmetic in cyclotomic fields Q(ζ_N).
//!
//! Elements are stored in the power basis 1, ζ, …, ζ^(φ(N)−1) with a single
//! common denominator, always reduced modulo Φ_N and in lowest terms, so that
//! equality is plain coefficient comparison.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("conductor must be at least 1")]
    BadConductor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: Q(zeta_{0}) vs Q(zeta_{1})")]
    FieldMismatch(u32, u32),
    #[error("galois exponent {k} is not a unit modulo {n}")]
    InvalidGaloisExponent { k: i64, n: u32 },
    #[error("Q(zeta_{0}) contains no primitive cube root of unity")]
    NoOmega(u32),
    #[error("malformed scalar: {0}")]
    Parse(String),
}

/// The cyclotomic field Q(ζ_N).
pub struct CycloField {
    n: u32,
    /// Φ_N, monic, lowest degree first.
    phi: Vec<BigInt>,
    /// ζ^m reduced mod Φ_N for 0 ≤ m < N.
    powers: Vec<Vec<BigInt>>,
}

pub type Field = Arc<CycloField>;

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.n)
    }
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}
impl Eq for CycloField {}

fn poly_trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic integer polynomial; panics if the remainder is nonzero.
fn poly_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    if rem.len() <= db {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); rem.len() - db];
    for k in (0..q.len()).rev() {
        let c = rem[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact cyclotomic division");
    q
}

fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    let mut p = num;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_div_monic(&p, &cyclotomic_poly(d));
        }
    }
    poly_trim(&mut p);
    p
}

/// Build Q(ζ_N); Φ_N comes from dividing x^N − 1 by Φ_d for the proper divisors d.
pub fn make_field(n: u32) -> Result<Field, ScalarError> {
    if n == 0 {
        return Err(ScalarError::BadConductor);
    }
    let phi = cyclotomic_poly(n);
    let d = phi.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![BigInt::zero(); d];
    cur[0] = BigInt::one();
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x and reduce
        let top = cur[d - 1].clone();
        for i in (1..d).rev() {
            cur[i] = cur[i - 1].clone();
        }
        cur[0] = BigInt::zero();
        if !top.is_zero() {
            for i in 0..d {
                cur[i] -= &top * &phi[i];
            }
        }
    }
    Ok(Arc::new(CycloField { n, phi, powers }))
}

impl CycloField {
    pub fn conductor(&self) -> u32 {
        self.n
    }
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }
    pub fn minimal_polynomial(&self) -> &[BigInt] {
        &self.phi
    }
    pub fn has_omega(&self) -> bool {
        self.n.is_multiple_of(3)
    }
}

/// An element of Q(ζ_N).
#[derive(Clone)]
pub struct Cyc {
    field: Field,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyc {
    pub fn zero(f: &Field) -> Cyc {
        Cyc { field: f.clone(), num: vec![BigInt::zero(); f.degree()], den: BigInt::one() }
    }

    pub fn one(f: &Field) -> Cyc {
        Cyc::from_i64(f, 1)
    }

    pub fn from_i64(f: &Field, v: i64) -> Cyc {
        let mut c = Cyc::zero(f);
        c.num[0] = BigInt::from(v);
        c
    }

    pub fn from_ratio(f: &Field, p: i64, q: i64) -> Cyc {
        assert!(q != 0, "zero denominator");
        let mut c = Cyc::zero(f);
        c.num[0] = BigInt::from(p);
        c.den = BigInt::from(q);
        c.normalize();
        c
    }

    pub fn from_rational(f: &Field, r: &BigRational) -> Cyc {
        let mut c = Cyc::zero(f);
        c.num[0] = r.numer().clone();
        c.den = r.denom().clone();
        c.normalize();
        c
    }

    /// Coefficients of an arbitrary polynomial in ζ, reduced with ζ^N = 1 and Φ_N.
    pub fn from_poly(f: &Field, coeffs: &[BigRational]) -> Cyc {
        let mut acc = Cyc::zero(f);
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc += &(Cyc::zeta_pow(f, i as i64) * Cyc::from_rational(f, c));
        }
        acc
    }

    pub fn zeta_pow(f: &Field, k: i64) -> Cyc {
        let n = f.n as i64;
        let m = k.rem_euclid(n) as usize;
        Cyc { field: f.clone(), num: f.powers[m].clone(), den: BigInt::one() }
    }

    /// ω = ζ_N^(N/3).
    pub fn omega(f: &Field) -> Result<Cyc, ScalarError> {
        if !f.has_omega() {
            return Err(ScalarError::NoOmega(f.n));
        }
        Ok(Cyc::zeta_pow(f, (f.n / 3) as i64))
    }

    /// Primitive d-th root of unity ζ^(N/d); requires d | N.
    pub fn root_of_unity(f: &Field, d: u32) -> Option<Cyc> {
        if d == 0 || !f.n.is_multiple_of(d) {
            return None;
        }
        Some(Cyc::zeta_pow(f, (f.n / d) as i64))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Power-basis coordinates.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in self.num.iter_mut() {
                *c = -&*c;
            }
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            self.den /= &g;
            for c in self.num.iter_mut() {
                *c /= &g;
            }
        }
    }

    fn check_field(&self, other: &Cyc) -> Result<(), ScalarError> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field.n == other.field.n {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch(self.field.n, other.field.n))
        }
    }

    pub fn checked_add(&self, o: &Cyc) -> Result<Cyc, ScalarError> {
        self.check_field(o)?;
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        let mut num = Vec::with_capacity(self.num.len());
        let den;
        if self.den == o.den {
            for (a, b) in self.num.iter().zip(&o.num) {
                num.push(a + b);
            }
            den = self.den.clone();
        } else {
            for (a, b) in self.num.iter().zip(&o.num) {
                num.push(a * &o.den + b * &self.den);
            }
            den = &self.den * &o.den;
        }
        let mut r = Cyc { field: self.field.clone(), num, den };
        r.normalize();
        Ok(r)
    }

    pub fn checked_sub(&self, o: &Cyc) -> Result<Cyc, ScalarError> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &Cyc) -> Result<Cyc, ScalarError> {
        self.check_field(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Cyc::zero(&self.field));
        }
        let d = self.num.len();
        let f = &self.field;
        if self.is_rational() || o.is_rational() {
            let (s, v) = if self.is_rational() { (&self.num[0], o) } else { (&o.num[0], self) };
            let num = v.num.iter().map(|c| c * s).collect();
            let mut r = Cyc { field: f.clone(), num, den: &self.den * &o.den };
            r.normalize();
            return Ok(r);
        }
        let prod = poly_mul_int(&self.num, &o.num);
        let mut num = vec![BigInt::zero(); d];
        let n = f.n as usize;
        for (i, c) in prod.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i < d {
                num[i] += c;
            } else {
                for (t, p) in f.powers[i % n].iter().enumerate() {
                    if !p.is_zero() {
                        num[t] += &c * p;
                    }
                }
            }
        }
        let mut r = Cyc { field: f.clone(), num, den: &self.den * &o.den };
        r.normalize();
        Ok(r)
    }

    /// Inverse via the extended Euclidean algorithm against Φ_N.
    pub fn inv(&self) -> Result<Cyc, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.is_rational() {
            let mut r = Cyc::zero(&self.field);
            r.num[0] = self.den.clone();
            r.den = self.num[0].clone();
            r.normalize();
            return Ok(r);
        }
        type P = Vec<BigRational>;
        fn trim(p: &mut P) {
            while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
                p.pop();
            }
        }
        fn is_zero(p: &P) -> bool {
            p.iter().all(|c| c.is_zero())
        }
        fn sub_mul(a: &P, q: &P, b: &P) -> P {
            let mut out = a.clone();
            let len = (q.len() + b.len() - 1).max(a.len());
            out.resize(len, BigRational::zero());
            for (i, x) in q.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] -= x * y;
                }
            }
            trim(&mut out);
            out
        }
        fn divrem(a: &P, b: &P) -> (P, P) {
            let mut r = a.clone();
            let db = b.len() - 1;
            let lead = b[db].clone();
            if r.len() <= db {
                return (vec![BigRational::zero()], r);
            }
            let mut q = vec![BigRational::zero(); r.len() - db];
            for k in (0..q.len()).rev() {
                let c = &r[k + db] / &lead;
                if c.is_zero() {
                    continue;
                }
                for (j, bj) in b.iter().enumerate() {
                    let t = &c * bj;
                    r[k + j] -= t;
                }
                q[k] = c;
            }
            trim(&mut r);
            (q, r)
        }
        let rat = |v: &BigInt| BigRational::from_integer(v.clone());
        let mut r0: P = self.field.phi.iter().map(rat).collect();
        let mut r1: P = self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect();
        trim(&mut r1);
        let mut s0: P = vec![BigRational::zero()];
        let mut s1: P = vec![BigRational::one()];
        while !is_zero(&r1) {
            let (q, r) = divrem(&r0, &r1);
            let s = sub_mul(&s0, &q, &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant because Φ_N is irreducible
        let c = r0[0].clone();
        let coeffs: P = s0.iter().map(|x| x / &c).collect();
        Ok(Cyc::from_poly(&self.field, &coeffs))
    }

    pub fn checked_div(&self, o: &Cyc) -> Result<Cyc, ScalarError> {
        self.check_field(o)?;
        self.checked_mul(&o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Cyc {
        let mut base = if e < 0 { self.inv().expect("inverse of zero") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyc::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The automorphism ζ ↦ ζ^k.
    pub fn galois(&self, k: i64) -> Result<Cyc, ScalarError> {
        let n = self.field.n as i64;
        let km = k.rem_euclid(n);
        if num_integer::gcd(km, n) != 1 && n != 1 {
            return Err(ScalarError::InvalidGaloisExponent { k, n: self.field.n });
        }
        let d = self.num.len();
        let mut num = vec![BigInt::zero(); d];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = ((i as i64 * km) % n.max(1)) as usize;
            for (t, p) in self.field.powers[m].iter().enumerate() {
                if !p.is_zero() {
                    num[t] += c * p;
                }
            }
        }
        let mut r = Cyc { field: self.field.clone(), num, den: self.den.clone() };
        r.normalize();
        Ok(r)
    }

    /// Complex conjugation, i.e. galois(−1).
    pub fn conj(&self) -> Cyc {
        self.galois(-1).expect("−1 is always a unit")
    }

    pub fn random_small<R: Rng>(f: &Field, rng: &mut R, bound: i64) -> Cyc {
        let mut c = Cyc::zero(f);
        for x in c.num.iter_mut() {
            *x = BigInt::from(rng.gen_range(-bound..=bound));
        }
        c.den = BigInt::from(rng.gen_range(1..=bound.max(1)));
        c.normalize();
        c
    }

    /// "p/q" strings, one per power-basis coordinate.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs().iter().map(|r| format!("{}/{}", r.numer(), r.denom())).collect()
    }

    pub fn from_strings(f: &Field, items: &[String]) -> Result<Cyc, ScalarError> {
        if items.len() != f.degree() {
            return Err(ScalarError::Parse(format!("expected {} coefficients, got {}", f.degree(), items.len())));
        }
        let mut coeffs = Vec::with_capacity(items.len());
        for s in items {
            coeffs.push(parse_rational(s)?);
        }
        Ok(Cyc::from_poly(f, &coeffs))
    }

    pub fn to_serial(&self) -> SerialScalar {
        SerialScalar { conductor: self.field.n, coeffs: self.to_strings() }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| ScalarError::Parse(s.to_string()))?;
    let q: BigInt = q.parse().map_err(|_| ScalarError::Parse(s.to_string()))?;
    if q.is_zero() {
        return Err(ScalarError::Parse(s.to_string()));
    }
    Ok(BigRational::new(p, q))
}

/// Wire format of a scalar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerialScalar {
    pub conductor: u32,
    pub coeffs: Vec<String>,
}

impl SerialScalar {
    pub fn decode(&self, f: &Field) -> Result<Cyc, ScalarError> {
        if self.conductor != f.n {
            return Err(ScalarError::FieldMismatch(self.conductor, f.n));
        }
        Cyc::from_strings(f, &self.coeffs)
    }
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.den == other.den && self.num == other.num
    }
}
impl Eq for Cyc {}

impl Hash for Cyc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.n.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coef = if a.is_integer() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
            match i {
                0 => write!(f, "{coef}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{coef}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc { field: self.field.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}
impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Cyc> for &Cyc {
            type Output = Cyc;
            fn $m(self, o: &Cyc) -> Cyc {
                self.$checked(o).expect("cyclotomic arithmetic")
            }
        }
        impl $tr<Cyc> for Cyc {
            type Output = Cyc;
            fn $m(self, o: Cyc) -> Cyc {
                (&self).$checked(&o).expect("cyclotomic arithmetic")
            }
        }
        impl $tr<&Cyc> for Cyc {
            type Output = Cyc;
            fn $m(self, o: &Cyc) -> Cyc {
                (&self).$checked(o).expect("cyclotomic arithmetic")
            }
        }
        impl $tr<Cyc> for &Cyc {
            type Output = Cyc;
            fn $m(self, o: Cyc) -> Cyc {
                self.$checked(&o).expect("cyclotomic arithmetic")
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl AddAssign<&Cyc> for Cyc {
    fn add_assign(&mut self, o: &Cyc) {
        *self = self.checked_add(o).expect("cyclotomic arithmetic");
    }
}
impl SubAssign<&Cyc> for Cyc {
    fn sub_assign(&mut self, o: &Cyc) {
        *self = self.checked_sub(o).expect("cyclotomic arithmetic");
    }
}
impl MulAssign<&Cyc> for Cyc {
    fn mul_assign(&mut self, o: &Cyc) {
        *self = self.checked_mul(o).expect("cyclotomic arithmetic");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(make_field(1).unwrap().minimal_polynomial(), &ints(&[-1, 1])[..]);
        assert_eq!(make_field(3).unwrap().minimal_polynomial(), &ints(&[1, 1, 1])[..]);
        assert_eq!(make_field(12).unwrap().minimal_polynomial(), &ints(&[1, 0, -1, 0, 1])[..]);
        assert_eq!(make_field(9).unwrap().degree(), 6);
        assert!(make_field(0).is_err());
    }

    #[test]
    fn omega_relations() {
        let f = make_field(12).unwrap();
        let w = Cyc::omega(&f).unwrap();
        let one = Cyc::one(&f);
        assert!((&one + &w + &w * &w).is_zero());
        assert!(w.pow(3).is_one());
        assert_eq!(Cyc::zeta_pow(&f, 6), -Cyc::one(&f));
        assert_eq!(w.galois(-1).unwrap(), &w * &w);
        assert!(Cyc::omega(&make_field(4).unwrap()).is_err());
    }

    #[test]
    fn inverse_and_division() {
        let f = make_field(12).unwrap();
        let half = Cyc::from_ratio(&f, 1, 2);
        assert!((&half * Cyc::from_i64(&f, 2)).is_one());
        let z = Cyc::zeta_pow(&f, 1);
        let a = &z + Cyc::from_ratio(&f, 3, 7);
        assert!((&a * a.inv().unwrap()).is_one());
        assert_eq!(Cyc::zero(&f).inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn galois_rejects_non_units() {
        let f = make_field(12).unwrap();
        assert!(Cyc::one(&f).galois(2).is_err());
        let r = Cyc::from_ratio(&f, -5, 3);
        assert_eq!(r.galois(5).unwrap(), r);
    }

    #[test]
    fn strings_round_trip() {
        let f = make_field(12).unwrap();
        let a = Cyc::zeta_pow(&f, 5) * Cyc::from_ratio(&f, -2, 9) + Cyc::from_ratio(&f, 1, 3);
        let s = a.to_strings();
        assert_eq!(Cyc::from_strings(&f, &s).unwrap(), a);
        let bad = make_field(3).unwrap();
        assert!(a.to_serial().decode(&bad).is_err());
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = Cyc::one(&make_field(12).unwrap());
        let b = Cyc::one(&make_field(3).unwrap());
        assert_eq!(a.checked_add(&b), Err(ScalarError::FieldMismatch(12, 3)));
    }
}
