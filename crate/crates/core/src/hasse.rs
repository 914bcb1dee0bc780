//! Exponent bookkeeping for partial and total Hasse invariants attached to an
//! admissible pair, the codimension-one Bruhat descendants of `w`, vanishing
//! orders of the sections `C_i` along them, and the positivity check.
//!
//! Line bundles are tracked symbolically: a [`WeightVector`] `(a_1, ..., a_c)`
//! stands for `⊗ ω_i^{a_i}`, and `ω` itself is the all-ones vector.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::parabolic::AdmissiblePair;
use crate::weyl::SignedPermutation;

/// Least common multiple of the cycle lengths of a permutation in image form
/// (`sigma[i - 1] = sigma(i)`).
pub fn cycle_lcm(sigma: &[usize]) -> u64 {
    let n = sigma.len();
    let mut seen = vec![false; n + 1];
    let mut acc = 1u64;
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = sigma[i - 1];
            len += 1;
        }
        acc = lcm(acc, len);
    }
    acc
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `N` and the exponents `c_i = Σ_j ε_{i,j} p^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HasseExponents {
    pub p: u64,
    #[serde(skip)]
    pub block_count: usize,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "c")]
    pub coeffs: Vec<i128>,
    /// `epsilon[i - 1][j]` is `ε_{i,j}` for `0 <= j < N`.
    #[serde(skip)]
    pub epsilon: Vec<Vec<i8>>,
}

/// `ε_{i,N-j} = +1` if `σ^j(i) <= c`, else `-1`, for `j = 1..N`.
pub fn hasse_exponents(pair: &AdmissiblePair, p: u64) -> Result<HasseExponents> {
    check_prime(p)?;
    let c = pair.c();
    let n = u32::try_from(cycle_lcm(&pair.sigma)).map_err(|_| Error::Overflow("N"))?;
    let mut epsilon = vec![vec![0i8; n as usize]; c];
    let mut coeffs = Vec::with_capacity(c);
    for i in 1..=c {
        let mut orbit = i;
        for j in 1..=n as usize {
            orbit = pair.sigma(orbit);
            epsilon[i - 1][n as usize - j] = if orbit <= c { 1 } else { -1 };
        }
        let mut total = 0i128;
        let mut power = 1i128;
        for (j, &e) in epsilon[i - 1].iter().enumerate() {
            if j > 0 {
                power = power.checked_mul(p as i128).ok_or(Error::Overflow("c_i"))?;
            }
            total = total
                .checked_add(e as i128 * power)
                .ok_or(Error::Overflow("c_i"))?;
        }
        coeffs.push(total);
    }
    Ok(HasseExponents {
        p,
        block_count: c,
        n,
        coeffs,
        epsilon,
    })
}

/// Exponents of `ω_1, ..., ω_c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct WeightVector {
    pub coeffs: Vec<i128>,
}

impl WeightVector {
    pub fn zero(c: usize) -> Self {
        Self { coeffs: vec![0; c] }
    }

    /// `ω^{⊗ m}`.
    pub fn omega_power(c: usize, m: i128) -> Self {
        Self { coeffs: vec![m; c] }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_scaled(&mut self, other: &Self, scale: i128) -> Result<()> {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = b
                .checked_mul(scale)
                .and_then(|t| a.checked_add(t))
                .ok_or(Error::Overflow("weight"))?;
        }
        Ok(())
    }
}

/// Weight of `A_i'`: `-e_i + p e_{σ(i)}` when `σ(i) <= c`, and
/// `-e_i - p e_{2c+1-σ(i)}` otherwise (via `ω_j ≅ ω_{2c+1-j}^∨`).
pub fn partial_weight(pair: &AdmissiblePair, i: usize, p: u64) -> Result<WeightVector> {
    let c = pair.c();
    if i == 0 || i > c {
        return Err(Error::IndexOutOfRange { index: i, max: c });
    }
    let mut wt = WeightVector::zero(c);
    wt.coeffs[i - 1] -= 1;
    let s = pair.sigma(i);
    let p = p as i128;
    if s <= c {
        wt.coeffs[s - 1] += p;
    } else {
        wt.coeffs[2 * c + 1 - s - 1] -= p;
    }
    Ok(wt)
}

/// `Σ_i c_i · wt(A_i')`, checked against `(p^N - 1)·(1, ..., 1)`.
pub fn total_weight_check(pair: &AdmissiblePair, p: u64) -> Result<(u32, WeightVector)> {
    let ex = hasse_exponents(pair, p)?;
    let c = pair.c();
    let mut total = WeightVector::zero(c);
    for i in 1..=c {
        total.add_scaled(&partial_weight(pair, i, p)?, ex.coeffs[i - 1])?;
    }
    let expected = (p as i128)
        .checked_pow(ex.n)
        .ok_or(Error::Overflow("p^N"))?
        - 1;
    if total != WeightVector::omega_power(c, expected) {
        return Err(Error::Internal(format!(
            "total weight {:?} != (p^N - 1) = {expected} for w = {:?}, J = {:?}",
            total.coeffs,
            pair.w,
            pair.datum.j
        )));
    }
    Ok((ex.n, total))
}

/// How a descendant arises from `w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DescendantKind {
    /// `v_i = w (k~_{i-1}+1  2g-k~_{i-1})`.
    V(usize),
    /// `v_{a,b} = w (k~_{a-1}+1  k~_b)(2g-k~_{a-1}  2g+1-k~_b)`.
    AB(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescendantRecord {
    pub v: SignedPermutation,
    pub kind: DescendantKind,
    pub ords: Vec<u32>,
}

/// The Bruhat descendants `D_w^B` of an admissible pair, `V`-type records
/// first (by `i`), then `AB`-type (by `(a, b)`).
pub fn bruhat_descendants(pair: &AdmissiblePair) -> Vec<DescendantRecord> {
    let g = pair.g();
    let c = pair.c();
    let kt = &pair.datum.ktilde;
    let mut out = Vec::new();
    let reflect = |a: usize, b: usize| {
        SignedPermutation::reflection(g, a, b).expect("descendant reflection is well formed")
    };
    for i in 1..=c {
        if pair.tau(i) > c {
            let a = kt[i - 1] + 1;
            let v = pair.w.mul(&reflect(a, 2 * g + 1 - a));
            out.push(record(pair, v, DescendantKind::V(i)));
        }
    }
    for a in 1..=c {
        if pair.tau(a) > c {
            continue;
        }
        for b in c + 1..=2 * c {
            if pair.tau(b) < pair.tau(a) {
                let v = pair.w.mul(&reflect(kt[a - 1] + 1, kt[b]));
                out.push(record(pair, v, DescendantKind::AB(a, b)));
            }
        }
    }
    out
}

fn record(pair: &AdmissiblePair, v: SignedPermutation, kind: DescendantKind) -> DescendantRecord {
    let ords = orders_for_kind(pair.c(), kind);
    DescendantRecord { v, kind, ords }
}

fn orders_for_kind(c: usize, kind: DescendantKind) -> Vec<u32> {
    let mut ords = vec![0u32; c];
    match kind {
        DescendantKind::V(i) => ords[i - 1] = 1,
        DescendantKind::AB(a, b) => {
            ords[a - 1] = 1;
            ords[2 * c + 1 - b - 1] = 1;
        }
    }
    ords
}

/// `ord(C_i)` along the closure of `Y_v^B`: 1 if `v = v_i`, or
/// `v = v_{a,b}` with `i = a` or `i = 2c+1-b`; 0 otherwise.
pub fn vanishing_orders(pair: &AdmissiblePair, record: &DescendantRecord) -> Vec<u32> {
    orders_for_kind(pair.c(), record.kind)
}

/// For each descendant `v`, the value `Σ_{i=1}^{c} c_i · ord_v(C_{c+1-i})`.
/// Every value must be strictly positive; a non-positive value is an error.
pub fn check_inequality(
    pair: &AdmissiblePair,
    p: u64,
) -> Result<BTreeMap<SignedPermutation, i128>> {
    let ex = hasse_exponents(pair, p)?;
    let c = pair.c();
    let mut out = BTreeMap::new();
    for rec in bruhat_descendants(pair) {
        let ords = vanishing_orders(pair, &rec);
        let value: i128 = (1..=c)
            .map(|i| ex.coeffs[i - 1] * ords[c + 1 - i - 1] as i128)
            .sum();
        if value <= 0 {
            return Err(Error::InequalityViolated {
                w: pair.w.images(),
                j: pair.datum.j.members(),
                p,
                v: rec.v.images(),
                value,
            });
        }
        out.insert(rec.v, value);
    }
    Ok(out)
}

/// `e = min_{0 <= j <= n} (j + a p^{n-j})`: if `x ≡ y (mod p^a)` then
/// `x^{p^n} ≡ y^{p^n} (mod p^e)`.
pub fn power_congruence_bound(a: u64, n: u32, p: u64) -> u64 {
    (0..=n)
        .map(|j| {
            let pow = p.checked_pow(n - j).unwrap_or(u64::MAX);
            (j as u64).saturating_add(a.saturating_mul(pow))
        })
        .min()
        .expect("range is non-empty")
}
