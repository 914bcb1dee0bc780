//! Finite fields `F_{p^m}` with table-driven multiplication.
//!
//! An element is a `u32` in `[0, p^m)` encoding the coefficients of a
//! polynomial in the generator: `Σ a_i p^i  <->  Σ a_i x^i`. Elements of the
//! prime field are therefore the integers `0..p`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Elem = u32;

/// Largest field order supported.
pub const MAX_ORDER: u64 = 1 << 20;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Serialized field description: `p`, degree `m`, and for `m > 1` a monic
/// irreducible modulus given low-to-high (length `m + 1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Self {
        Self { p, m: 1, modulus: None }
    }

    pub fn build(&self) -> Result<Arc<GaloisField>> {
        let modulus = self
            .modulus
            .as_ref()
            .map(|v| v.iter().map(|&c| c as u32).collect::<Vec<_>>());
        GaloisField::new(self.p, self.m, modulus.as_deref()).map(Arc::new)
    }
}

// Dense polynomials over F_p, low-to-high, trailing zeros trimmed.
mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
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

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let factor = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &c) in m.iter().enumerate() {
                let t = (factor as u64 * c as u64 % p as u64) as u32;
                r[i + shift] = (r[i + shift] + p - t) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        rem(&out.into_iter().map(|v| v as u32).collect::<Vec<_>>(), m, p)
    }

    pub fn pow_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        rem(&acc, m, p)
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }
}

/// Monic `f` of degree `m` is irreducible iff it has no factor of degree
/// `<= m/2`, i.e. `gcd(x^{p^i} - x, f) = 1` for `1 <= i <= m/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=m / 2 {
        xp = poly::pow_mod(&xp, p as u64, f, p);
        let g = poly::gcd(&poly::sub(&xp, &x, p), f, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible of degree `m` in the encoding order.
fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for code in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut c = code;
        for _ in 0..m {
            f.push((c % p as u64) as u32);
            c /= p as u64;
        }
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for GaloisField {}

impl GaloisField {
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// `F_{p^m}`; for `m > 1` with no modulus given, the first irreducible
    /// polynomial in encoding order is used.
    pub fn new(p: u64, m: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::Field("extension degree must be positive".into()));
        }
        let q = (p as u128).pow(m);
        if q > MAX_ORDER as u128 {
            return Err(Error::Field(format!("field order {p}^{m} exceeds {MAX_ORDER}")));
        }
        let p32 = p as u32;
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            match modulus {
                None => default_modulus(p32, m),
                Some(f) => {
                    if f.len() != m as usize + 1 || f.iter().any(|&c| c >= p32) {
                        return Err(Error::Field(format!(
                            "modulus {f:?} must have {} coefficients in 0..{p}",
                            m + 1
                        )));
                    }
                    if f[m as usize] != 1 {
                        return Err(Error::Field(format!("modulus {f:?} is not monic")));
                    }
                    if !is_irreducible(f, p32) {
                        return Err(Error::Field(format!("modulus {f:?} is not irreducible")));
                    }
                    f.to_vec()
                }
            }
        };
        let mut field = Self {
            p: p32,
            m,
            q: q as u32,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    fn decode(&self, mut a: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.m as usize);
        for _ in 0..self.m {
            out.push(a % self.p);
            a /= self.p;
        }
        poly::trim(out)
    }

    fn encode(&self, a: &[u32]) -> Elem {
        a.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        let r = poly::mul_mod(&self.decode(a), &self.decode(b), &self.modulus, self.p);
        self.encode(&r)
    }

    fn build_tables(&mut self) {
        let order = (self.q - 1) as u64;
        let mut factors = Vec::new();
        let mut n = order;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                factors.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            factors.push(n);
        }
        let is_generator = |cand: Elem| {
            factors.iter().all(|&r| {
                let pw = poly::pow_mod(&self.decode(cand), order / r, &self.modulus, self.p);
                pw != [1]
            })
        };
        let generator = if self.q == 2 {
            1
        } else {
            (2..self.q).find(|&c| is_generator(c)).expect("multiplicative group is cyclic")
        };
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut cur = 1;
        for k in 0..order as usize {
            exp[k] = cur;
            log[cur as usize] = k as u32;
            cur = self.slow_mul(cur, generator);
        }
        for k in order as usize..2 * order as usize {
            exp[k] = exp[k - order as usize];
        }
        self.exp = exp;
        self.log = log;
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p as u64,
            m: self.m,
            modulus: (self.m > 1).then(|| self.modulus.iter().map(|&c| c as u64).collect()),
        }
    }

    /// Coordinates of `a` in the power basis, low-to-high, length `m`.
    pub fn coefficients(&self, mut a: Elem) -> Vec<u32> {
        (0..self.m)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    /// Inverse of [`coefficients`](Self::coefficients); rejects digits outside `0..p`.
    pub fn from_coefficients(&self, coeffs: &[u64]) -> Result<Elem> {
        if coeffs.len() != self.m as usize {
            return Err(Error::Field(format!(
                "expected {} coefficients, found {}",
                self.m,
                coeffs.len()
            )));
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= self.p as u64) {
            return Err(Error::Field(format!("coefficient {bad} is not in 0..{}", self.p)));
        }
        Ok(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c as u32))
    }

    /// Reduces an integer into the prime field.
    pub fn from_int(&self, v: i64) -> Elem {
        v.rem_euclid(self.p as i64) as Elem
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.m == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        let order = self.q - 1;
        self.exp[((order - self.log[a as usize]) % order) as usize]
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// `a^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p as u64)
    }

    /// The inverse of `a -> a^p`, i.e. `a^{p^{m-1}}`.
    pub fn frobenius_inv(&self, a: Elem) -> Elem {
        self.pow(a, (self.p as u64).pow(self.m - 1))
    }

    /// Evaluates a polynomial with prime-field coefficients (low-to-high).
    pub fn eval_prime_poly(&self, coeffs: &[u32], x: Elem) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c % self.p))
    }

    /// An embedding `self -> target`, determined by sending the generator of
    /// `self` to a root of `self`'s modulus in `target`.
    pub fn embedding_into(&self, target: &GaloisField) -> Result<Vec<Elem>> {
        if target.p != self.p || !target.m.is_multiple_of(self.m) {
            return Err(Error::Field(format!(
                "F_{}^{} does not embed in F_{}^{}",
                self.p, self.m, target.p, target.m
            )));
        }
        let root = if self.m == 1 {
            0
        } else {
            (0..target.q)
                .find(|&r| target.eval_prime_poly(&self.modulus, r) == 0)
                .ok_or_else(|| Error::Field("modulus has no root in the extension".into()))?
        };
        Ok((0..self.q)
            .map(|a| {
                if self.m == 1 {
                    a
                } else {
                    target.eval_prime_poly(&self.decode(a), root)
                }
            })
            .collect())
    }
}
