//! Finite fields `F_{p^e}` with a deterministic irreducible modulus.
//!
//! Elements are encoded as integers `a_0 + a_1 p + ... + a_{e-1} p^{e-1}` where
//! `a_0 + a_1 x + ...` is the residue modulo the field's modulus. The prime
//! subfield is therefore the range `0..p`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Largest field order for which multiplication tables are precomputed.
const TABLE_LIMIT: u64 = 1 << 20;
/// Largest field order supported at all (elements must fit in `u32`).
const ORDER_LIMIT: u64 = u32::MAX as u64;

/// A finite field `F_{p^e}` together with its defining modulus.
pub struct FieldDescriptor {
    p: u32,
    e: u32,
    /// Monic modulus, coefficients from low to high degree (`e + 1` entries).
    modulus: Vec<u32>,
    order: u32,
    tables: Option<LogTables>,
}

struct LogTables {
    /// `exp[i] = g^i` for `0 <= i < 2 (order - 1)`.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
}

/// Checks primality by trial division; only small primes are ever used.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over `F_p`, low degree first, no trailing zeros.
mod fp_poly {
    pub type Poly = Vec<u64>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn inv_mod(a: u64, p: u64) -> u64 {
        super::pow_mod(a, p - 2, p)
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Poly {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let dr = r.len() - 1;
            let f = r[dr] * lead_inv % p;
            for i in 0..=dm {
                let idx = dr - dm + i;
                r[idx] = (r[idx] + p - f * m[i] % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
        rem(&mul(a, b, p), m, p)
    }

    /// `base^(p^k) mod m`, by `k` successive p-th powers.
    pub fn frobenius_iter(base: &[u64], k: u32, m: &[u64], p: u64) -> Poly {
        let mut cur = rem(base, m, p);
        for _ in 0..k {
            cur = pow_mod_poly(&cur, p, m, p);
        }
        cur
    }

    pub fn pow_mod_poly(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Poly {
        let mut result: Poly = rem(&[1], m, p);
        let mut b = rem(base, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                result = mul_mod(&result, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            exp >>= 1;
        }
        result
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Rabin's test: a monic `f` of degree `e` over `F_p` is irreducible iff
/// `f | x^{p^e} - x` and `gcd(f, x^{p^{e/r}} - x) = 1` for every prime `r | e`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let p = p as u64;
    let f: Vec<u64> = modulus.iter().map(|&c| c as u64 % p).collect();
    let f = fp_poly::trim(f);
    if f.len() < 2 {
        return false;
    }
    let e = (f.len() - 1) as u32;
    if e == 1 {
        return true;
    }
    let x = vec![0, 1];
    let top = fp_poly::frobenius_iter(&x, e, &f, p);
    if !fp_poly::sub(&top, &fp_poly::rem(&x, &f, p), p).is_empty() {
        return false;
    }
    for r in prime_factors(e as u64) {
        let k = e / r as u32;
        let xk = fp_poly::frobenius_iter(&x, k, &f, p);
        let g = fp_poly::gcd(&f, &fp_poly::sub(&xk, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

impl FieldDescriptor {
    /// Builds `F_{p^e}` with the lexicographically smallest monic irreducible
    /// modulus of degree `e` (coefficients compared from `x^{e-1}` down to `x^0`).
    pub fn build(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::InvalidField(format!(
                "extension degree must be >= 1, got {e}"
            )));
        }
        let order = (p as u64)
            .checked_pow(e)
            .filter(|&o| o <= ORDER_LIMIT)
            .ok_or_else(|| Error::InvalidField(format!("field order {p}^{e} is too large")))?;
        let count = (p as u64).pow(e);
        for idx in 0..count {
            // idx read in base p gives a_0 (least significant) .. a_{e-1}; the
            // most significant digit is the x^{e-1} coefficient, so increasing
            // idx walks candidates lexicographically from the top coefficient.
            let mut modulus = Vec::with_capacity(e as usize + 1);
            let mut rest = idx;
            for _ in 0..e {
                modulus.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            modulus.push(1);
            if is_irreducible(&modulus, p) {
                return Ok(Self::with_modulus_unchecked(p, modulus, order as u32));
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over F_p")
    }

    /// Builds `F_{p^e}` from an explicit monic modulus, verifying irreducibility.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if modulus.len() < 2 || modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(
                "modulus must be monic with reduced coefficients".into(),
            ));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        let e = (modulus.len() - 1) as u32;
        let order = (p as u64)
            .checked_pow(e)
            .filter(|&o| o <= ORDER_LIMIT)
            .ok_or_else(|| Error::InvalidField(format!("field order {p}^{e} is too large")))?;
        Ok(Self::with_modulus_unchecked(p, modulus, order as u32))
    }

    fn with_modulus_unchecked(p: u32, modulus: Vec<u32>, order: u32) -> Self {
        let e = (modulus.len() - 1) as u32;
        let mut field = FieldDescriptor {
            p,
            e,
            modulus,
            order,
            tables: None,
        };
        if e > 1 && (order as u64) <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        field
    }

    fn build_tables(&self) -> LogTables {
        let n = (self.order - 1) as u64;
        let factors = prime_factors(n);
        let generator = (2..self.order)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, n / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; self.order as usize];
        let mut cur = 1u32;
        for i in 0..n as usize {
            exp[i] = cur;
            log[cur as usize] = i as u32;
            cur = self.mul_slow(cur, generator);
        }
        for i in n as usize..2 * n as usize {
            exp[i] = exp[i - n as usize];
        }
        LogTables { exp, log }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Modulus coefficients from low to high degree; monic of length `e + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        1
    }

    /// The class of `x` (index `p`), or `-m_0` for a prime field.
    pub fn generator(&self) -> u32 {
        if self.e == 1 {
            (self.p - self.modulus[0] % self.p) % self.p
        } else {
            self.p
        }
    }

    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Coefficient vector `(a_0, .., a_{e-1})` of an encoded element.
    pub fn coeffs(&self, mut a: u32) -> Vec<u32> {
        (0..self.e)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<u32> {
        if coeffs.len() > self.e as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidField(format!(
                "coefficient vector {coeffs:?} is not an element of F_{}^{}",
                self.p, self.e
            )));
        }
        Ok(coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.p + c))
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as u32;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            a /= self.p;
            b /= self.p;
            place = place.wrapping_mul(self.p);
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            let d = (self.p - a % self.p) % self.p;
            out += d * place;
            a /= self.p;
            place = place.wrapping_mul(self.p);
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.e == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_slow(a, b),
        }
    }

    /// Multiplication by reduction of coefficient vectors modulo the modulus.
    pub fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let pa: Vec<u64> = self.coeffs(a).into_iter().map(u64::from).collect();
        let pb: Vec<u64> = self.coeffs(b).into_iter().map(u64::from).collect();
        let m: Vec<u64> = self.modulus.iter().map(|&c| c as u64).collect();
        let r = fp_poly::mul_mod(&fp_poly::trim(pa), &fp_poly::trim(pb), &m, p);
        let digits: Vec<u32> = r.into_iter().map(|c| c as u32).collect();
        self.from_coeffs(&digits)
            .expect("reduced product is a field element")
    }

    fn pow_slow(&self, a: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        let mut b = a;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_slow(acc, b);
            }
            b = self.mul_slow(b, b);
            exp >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        let mut b = a;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if self.e == 1 {
            return Some(pow_mod(a as u64, self.p as u64 - 2, self.p as u64) as u32);
        }
        match &self.tables {
            Some(t) => {
                let n = self.order - 1;
                Some(t.exp[((n - t.log[a as usize]) % n) as usize])
            }
            None => Some(self.pow(a, self.order as u64 - 2)),
        }
    }

    /// The Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    fn key(&self) -> (u32, &[u32]) {
        (self.p, &self.modulus)
    }
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for FieldDescriptor {}

impl PartialOrd for FieldDescriptor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldDescriptor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl Hash for FieldDescriptor {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{}^{}[{}]",
            self.p,
            self.e,
            modulus_text(&self.modulus)
        )
    }
}

/// Renders a modulus such as `x^3 + x + 1`.
pub fn modulus_text(modulus: &[u32]) -> String {
    let mut parts = Vec::new();
    for (deg, &c) in modulus.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mon = match deg {
            0 => String::new(),
            1 => "x".to_string(),
            d => format!("x^{d}"),
        };
        parts.push(match (c, deg) {
            (_, 0) => c.to_string(),
            (1, _) => mon,
            _ => format!("{c}*{mon}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_modulus_is_x() {
        let f = FieldDescriptor::build(3, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 3);
    }

    #[test]
    fn smallest_quadratic_over_f3() {
        let f = FieldDescriptor::build(3, 2).unwrap();
        assert_eq!(modulus_text(f.modulus()), "x^2 + 1");
    }

    #[test]
    fn smallest_cubic_over_f2() {
        let f = FieldDescriptor::build(2, 3).unwrap();
        assert_eq!(modulus_text(f.modulus()), "x^3 + x + 1");
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(matches!(
            FieldDescriptor::build(9, 1),
            Err(Error::NotPrime(9))
        ));
        assert!(matches!(
            FieldDescriptor::build(1, 1),
            Err(Error::NotPrime(1))
        ));
    }

    #[test]
    fn rabin_rejects_products_without_roots() {
        // (x^2 + x + 1)(x^3 + x + 1) over F_2 has no root in F_2.
        let quad = [1u64, 1, 1];
        let cubic = [1u64, 1, 0, 1];
        let prod: Vec<u32> = fp_poly::mul(&quad, &cubic, 2)
            .into_iter()
            .map(|c| c as u32)
            .collect();
        assert!(!is_irreducible(&prod, 2));
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
    }

    #[test]
    fn table_and_slow_multiplication_agree() {
        let f = FieldDescriptor::build(5, 2).unwrap();
        for a in 0..f.order() {
            for b in 0..f.order() {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
            }
        }
    }

    #[test]
    fn generator_squares_to_minus_one_in_f9() {
        let f = FieldDescriptor::build(3, 2).unwrap();
        let x = f.generator();
        assert_eq!(f.mul(x, x), f.from_int(-1));
    }

    #[test]
    fn inverses() {
        let f = FieldDescriptor::build(2, 4).unwrap();
        for a in 1..f.order() {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn frobenius_has_order_dividing_e() {
        for (p, e) in [(2, 3), (3, 2), (5, 3), (7, 2), (2, 5)] {
            let f = FieldDescriptor::build(p, e).unwrap();
            let step = (f.order() / 97).max(1);
            for a in (0..f.order()).step_by(step as usize).take(100) {
                let mut x = a;
                for _ in 0..e {
                    x = f.frobenius(x);
                }
                assert_eq!(x, a, "Frobenius^{e} moved {a} in F_{p}^{e}");
            }
        }
    }
}
