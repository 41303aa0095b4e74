//! Finite field towers `F_p ⊆ F_q ⊆ F_{q^s} ⊆ F_{q^n}` with `q = p^h`.
//!
//! Only the big field `F_{p^{hn}}` is materialized. Elements are stored by
//! discrete logarithm with respect to a fixed primitive root `g` of the
//! defining modulus, so multiplication, inversion, powers and Frobenius maps
//! are index arithmetic; addition goes through a Zech logarithm table.
//! Subfields are the fixed sets of the corresponding Frobenius powers.

use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::linalg;

/// Largest field size with tabulated arithmetic.
pub const MAX_FIELD_ORDER: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field of order {p}^{degree} exceeds the table limit of 2^24 elements")]
    TooLarge { p: u64, degree: u64 },
    #[error("invalid field parameters: {0}")]
    InvalidParameters(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{s} does not divide the extension degree {n}")]
    NotADivisor { s: usize, n: usize },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("cannot parse field element {text:?}: {msg}")]
    ParseElem { text: String, msg: String },
}

/// An element of `F_{p^{hn}}`.
///
/// The raw encoding is `0` for zero and `k + 1` for `g^k`, which doubles as a
/// dense index into `0..p^{hn}` and as the total order (zero first, then by
/// discrete logarithm).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub const fn from_raw(raw: u32) -> Self {
        FieldElem(raw)
    }

    /// `g^k`; the caller guarantees `k < p^{hn} - 1`.
    #[inline]
    pub const fn from_log(k: u32) -> Self {
        FieldElem(k + 1)
    }

    #[inline]
    pub const fn raw(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The discrete logarithm, `None` for zero.
    #[inline]
    pub const fn log(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0 - 1)
        }
    }

    /// Parses `"0"`, `"1"`, `"g"` or `"g^k"` without reducing `k`.
    pub fn parse_log_notation(text: &str) -> Result<(bool, u64), GfError> {
        let t = text.trim();
        let err = |msg: &str| GfError::ParseElem {
            text: text.to_string(),
            msg: msg.to_string(),
        };
        match t {
            "0" => Ok((true, 0)),
            "1" => Ok((false, 0)),
            "g" => Ok((false, 1)),
            _ => {
                let exp = t
                    .strip_prefix("g^")
                    .ok_or_else(|| err("expected 0, 1, g or g^k"))?;
                let k = exp
                    .parse::<u64>()
                    .map_err(|_| err("exponent is not a non-negative integer"))?;
                Ok((false, k))
            }
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => f.write_str("0"),
            Some(k) => write!(f, "g^{k}"),
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        let (zero, k) = FieldElem::parse_log_notation(&text).map_err(serde::de::Error::custom)?;
        if zero {
            return Ok(FieldElem::ZERO);
        }
        u32::try_from(k)
            .ok()
            .filter(|k| *k < u32::MAX - 1)
            .map(FieldElem::from_log)
            .ok_or_else(|| serde::de::Error::custom("exponent out of range"))
    }
}

/// A constructed tower `F_p ⊆ F_q ⊆ F_{q^n}` with full arithmetic tables.
///
/// Immutable after construction and `Sync`, so it can be shared freely by
/// search workers.
pub struct FieldCtx {
    p: u32,
    h: u32,
    n: u32,
    q: u64,
    order: u64,
    m1: u32,
    /// Monic modulus over `F_p`, coefficients low degree first, length `hn + 1`.
    modulus: Vec<u32>,
    /// Base-`p` coefficient vector (as an integer) of `g^k`.
    exp: Vec<u32>,
    /// Inverse of `exp`: vector code to raw element.
    log: Vec<u32>,
    /// `zech[k] = 1 + g^k`.
    zech: Vec<FieldElem>,
    /// `p^e mod (p^{hn} - 1)` for `e < hn`.
    p_pow: Vec<u32>,
    /// Discrete log of `-1`.
    neg_shift: u32,
    dual_basis: OnceLock<Vec<FieldElem>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({})", self.spec_string())
    }
}

pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= x {
        if x.is_multiple_of(d) {
            out.push(d);
            while x.is_multiple_of(d) {
                x /= d;
            }
        }
        d += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

pub(crate) fn divisors(x: usize) -> Vec<usize> {
    (1..=x).filter(|d| x.is_multiple_of(*d)).collect()
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Multiplies two residues modulo the monic `modulus` over `F_p`.
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    for top in (m..2 * m).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (i, &mi) in modulus[..m].iter().enumerate() {
            let idx = top - m + i;
            prod[idx] = (prod[idx] + (p64 - c) * mi as u64) % p64;
        }
    }
    prod.truncate(m);
    prod.into_iter().map(|v| v as u32).collect()
}

fn poly_powmod_x(e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut result = vec![0u32; m];
    result[0] = 1;
    let mut base = vec![0u32; m];
    if m == 1 {
        // x ≡ -c0
        base[0] = (p - modulus[0] % p) % p;
    } else {
        base[1] = 1;
    }
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &base, modulus, p);
        }
        base = poly_mulmod(&base, &base, modulus, p);
        e >>= 1;
    }
    result
}

fn is_one(v: &[u32]) -> bool {
    v[0] == 1 && v[1..].iter().all(|&c| c == 0)
}

/// True iff `x` has multiplicative order `p^m - 1` modulo `modulus`, which
/// forces the quotient ring to be a field.
fn is_primitive(modulus: &[u32], p: u32, order_minus_one: u64, factors: &[u64]) -> bool {
    if modulus[0] == 0 {
        return false;
    }
    if !is_one(&poly_powmod_x(order_minus_one, modulus, p)) {
        return false;
    }
    factors
        .iter()
        .all(|r| !is_one(&poly_powmod_x(order_minus_one / r, modulus, p)))
}

/// The lexicographically least primitive polynomial of degree `m` over `F_p`,
/// comparing coefficient vectors from the constant term upwards.
fn least_primitive_modulus(p: u32, m: usize) -> Vec<u32> {
    let order_minus_one = (p as u64).pow(m as u32) - 1;
    let factors = prime_factors(order_minus_one);
    let mut coeffs = vec![0u32; m + 1];
    coeffs[m] = 1;
    // Odometer with the constant term as the most significant digit.
    loop {
        if is_primitive(&coeffs, p, order_minus_one, &factors) {
            return coeffs;
        }
        let mut pos = m;
        loop {
            if pos == 0 {
                panic!("no primitive polynomial of degree {m} over F_{p}: this cannot happen");
            }
            pos -= 1;
            coeffs[pos] += 1;
            if coeffs[pos] < p {
                break;
            }
            coeffs[pos] = 0;
        }
    }
}

impl FieldCtx {
    /// Builds `F_{p^{hn}}` from the least primitive modulus.
    pub fn new(p: u32, h: u32, n: u32) -> Result<Self, GfError> {
        Self::check_params(p, h, n)?;
        let modulus = least_primitive_modulus(p, (h * n) as usize);
        Self::from_modulus(p, h, n, modulus)
    }

    /// Builds the field from a user supplied monic modulus (low degree first;
    /// the leading 1 may be omitted).
    pub fn with_modulus(p: u32, h: u32, n: u32, coeffs: &[u32]) -> Result<Self, GfError> {
        Self::check_params(p, h, n)?;
        let m = (h * n) as usize;
        let mut modulus = coeffs.to_vec();
        if modulus.len() == m {
            modulus.push(1);
        }
        if modulus.len() != m + 1 || modulus[m] != 1 {
            return Err(GfError::InvalidModulus(format!(
                "expected a monic polynomial of degree {m}"
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(GfError::InvalidModulus(format!(
                "coefficients must lie in 0..{p}"
            )));
        }
        let order_minus_one = (p as u64).pow(m as u32) - 1;
        if !is_primitive(
            &modulus,
            p,
            order_minus_one,
            &prime_factors(order_minus_one),
        ) {
            return Err(GfError::InvalidModulus(
                "polynomial is not primitive over the prime field".into(),
            ));
        }
        Self::from_modulus(p, h, n, modulus)
    }

    fn check_params(p: u32, h: u32, n: u32) -> Result<(), GfError> {
        if !is_prime(p as u64) {
            return Err(GfError::NotPrime(p as u64));
        }
        if h == 0 || n == 0 {
            return Err(GfError::InvalidParameters(
                "h and n must be positive".into(),
            ));
        }
        let degree = h as u64 * n as u64;
        let too_large = || GfError::TooLarge {
            p: p as u64,
            degree,
        };
        let order = (p as u64)
            .checked_pow(u32::try_from(degree).map_err(|_| too_large())?)
            .ok_or_else(too_large)?;
        if order > MAX_FIELD_ORDER {
            return Err(too_large());
        }
        Ok(())
    }

    fn from_modulus(p: u32, h: u32, n: u32, modulus: Vec<u32>) -> Result<Self, GfError> {
        let m = (h * n) as usize;
        let q = (p as u64).pow(h);
        let order = (p as u64).pow(m as u32);
        let m1 = (order - 1) as u32;

        let mut exp = vec![0u32; m1 as usize];
        let mut log = vec![u32::MAX; order as usize];
        log[0] = 0;
        let mut cur = vec![0u32; m];
        cur[0] = 1;
        let encode = |digits: &[u32]| digits.iter().rev().fold(0u32, |acc, &d| acc * p + d);
        for k in 0..m1 {
            let code = encode(&cur);
            if log[code as usize] != u32::MAX {
                // Primitivity was established before this point.
                panic!("modulus root has order below p^m - 1: table construction aborted");
            }
            exp[k as usize] = code;
            log[code as usize] = k + 1;
            let top = cur[m - 1];
            for i in (1..m).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..m {
                    cur[i] = (cur[i] + (p - top) * modulus[i]) % p;
                }
            }
        }
        if !is_one(&cur) {
            panic!("modulus root does not satisfy g^(p^m-1) = 1");
        }

        let zech = exp
            .iter()
            .map(|&code| {
                let d0 = code % p;
                let plus_one = if d0 == p - 1 {
                    code - (p - 1)
                } else {
                    code + 1
                };
                FieldElem(log[plus_one as usize])
            })
            .collect();

        let mut p_pow = Vec::with_capacity(m);
        let mut acc = 1u64;
        for _ in 0..m {
            p_pow.push((acc % m1.max(1) as u64) as u32);
            acc = acc * p as u64 % m1.max(1) as u64;
        }
        let neg_shift = if p == 2 { 0 } else { m1 / 2 };

        Ok(FieldCtx {
            p,
            h,
            n,
            q,
            order,
            m1,
            modulus,
            exp,
            log,
            zech,
            p_pow,
            neg_shift,
            dual_basis: OnceLock::new(),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// Extension degree over `F_q`.
    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `p^{hn}`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `p^{hn} - 1`, the order of the multiplicative group.
    pub fn mult_order(&self) -> u32 {
        self.m1
    }

    /// Degree of the big field over `F_p`.
    pub fn degree(&self) -> usize {
        (self.h * self.n) as usize
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `"p^h^n/c0,c1,...,c_{hn}"`.
    pub fn spec_string(&self) -> String {
        let coeffs: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        format!("{}^{}^{}/{}", self.p, self.h, self.n, coeffs.join(","))
    }

    pub fn generator(&self) -> FieldElem {
        if self.m1 == 1 {
            FieldElem::ONE
        } else {
            FieldElem::from_log(1)
        }
    }

    /// Base-`p` coordinate vector of `x` in the power basis of the modulus root.
    pub fn prime_coordinates(&self, x: FieldElem) -> Vec<u32> {
        let mut code = match x.log() {
            None => 0,
            Some(k) => self.exp[k as usize],
        };
        let mut out = Vec::with_capacity(self.degree());
        for _ in 0..self.degree() {
            out.push(code % self.p);
            code /= self.p;
        }
        out
    }

    /// Inverse of [`Self::prime_coordinates`].
    pub fn from_prime_coordinates(&self, digits: &[u32]) -> FieldElem {
        let code = digits
            .iter()
            .rev()
            .fold(0u32, |acc, &d| acc * self.p + d % self.p);
        FieldElem(self.log[code as usize])
    }

    /// All elements in increasing order (zero first).
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (0..self.order as u32).map(FieldElem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (1..self.order as u32).map(FieldElem)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(0..self.order as u32))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(1..self.order as u32))
    }

    /// Elements of `F_{q^n}` written as `g^k`, reducing `k` modulo the group order.
    pub fn parse_elem(&self, text: &str) -> Result<FieldElem, GfError> {
        let (zero, k) = FieldElem::parse_log_notation(text)?;
        Ok(if zero {
            FieldElem::ZERO
        } else {
            FieldElem::from_log((k % self.m1 as u64) as u32)
        })
    }

    #[inline]
    fn reduce(&self, k: u64) -> u32 {
        (k % self.m1 as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (Some(i), Some(j)) = (a.log(), b.log()) else {
            return FieldElem(a.0 | b.0);
        };
        let k = if j >= i { j - i } else { j + self.m1 - i };
        match self.zech[k as usize].log() {
            None => FieldElem::ZERO,
            Some(z) => {
                let s = i + z;
                FieldElem::from_log(if s >= self.m1 { s - self.m1 } else { s })
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        match a.log() {
            None => a,
            Some(i) => {
                let s = i + self.neg_shift;
                FieldElem::from_log(if s >= self.m1 { s - self.m1 } else { s })
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (Some(i), Some(j)) = (a.log(), b.log()) else {
            return FieldElem::ZERO;
        };
        let s = i + j;
        FieldElem::from_log(if s >= self.m1 { s - self.m1 } else { s })
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, GfError> {
        a.log()
            .map(|i| FieldElem::from_log(if i == 0 { 0 } else { self.m1 - i }))
            .ok_or(GfError::DivisionByZero)
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Inverse of an element known to be nonzero.
    #[inline]
    pub(crate) fn inv_nz(&self, a: FieldElem) -> FieldElem {
        debug_assert!(!a.is_zero());
        let i = a.0 - 1;
        FieldElem::from_log(if i == 0 { 0 } else { self.m1 - i })
    }

    #[inline]
    pub(crate) fn div_nz(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv_nz(b))
    }

    /// `a^e` for a non-negative exponent (`0^0 = 1`).
    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        match a.log() {
            None if e == 0 => FieldElem::ONE,
            None => FieldElem::ZERO,
            Some(i) => FieldElem::from_log(self.reduce(i as u64 * (e % self.m1 as u64))),
        }
    }

    /// `a^e` for a signed exponent; negative powers of zero fail.
    pub fn pow_signed(&self, a: FieldElem, e: i64) -> Result<FieldElem, GfError> {
        if e >= 0 {
            return Ok(self.pow(a, e as u64));
        }
        let i = a.log().ok_or(GfError::DivisionByZero)?;
        let m1 = self.m1 as i64;
        let k = (i as i64 * (e % m1)).rem_euclid(m1);
        Ok(FieldElem::from_log(k as u32))
    }

    /// `x^{p^e}`; `e` is taken modulo `hn`.
    #[inline]
    pub fn frobenius(&self, x: FieldElem, e: usize) -> FieldElem {
        match x.log() {
            None => x,
            Some(i) => {
                let f = self.p_pow[e % self.p_pow.len()];
                FieldElem::from_log(self.reduce(i as u64 * f as u64))
            }
        }
    }

    /// `x^{q^k}`; `k` is taken modulo `n`.
    #[inline]
    pub fn frob_q(&self, x: FieldElem, k: usize) -> FieldElem {
        self.frobenius(x, (k % self.n as usize) * self.h as usize)
    }

    fn check_divisor(&self, s: usize) -> Result<(), GfError> {
        if s == 0 || !self.n().is_multiple_of(s) {
            return Err(GfError::NotADivisor { s, n: self.n() });
        }
        Ok(())
    }

    /// `Tr_{q^n/q^s}(x) = x + x^{q^s} + ... + x^{q^{n-s}}`.
    pub fn trace_rel(&self, x: FieldElem, s: usize) -> Result<FieldElem, GfError> {
        self.check_divisor(s)?;
        Ok((0..self.n() / s).fold(FieldElem::ZERO, |acc, k| {
            self.add(acc, self.frob_q(x, s * k))
        }))
    }

    /// `N_{q^n/q^s}(x) = x^{1 + q^s + ... + q^{n-s}}`.
    pub fn norm_rel(&self, x: FieldElem, s: usize) -> Result<FieldElem, GfError> {
        self.check_divisor(s)?;
        let qs = self.q.pow(s as u32);
        Ok(self.pow(x, (self.order - 1) / (qs - 1)))
    }

    /// Absolute trace `Tr_{q^n/q}`.
    pub fn trace(&self, x: FieldElem) -> FieldElem {
        (0..self.n()).fold(FieldElem::ZERO, |acc, k| self.add(acc, self.frob_q(x, k)))
    }

    /// Norm `N_{q^n/q}`.
    pub fn norm(&self, x: FieldElem) -> FieldElem {
        self.pow(x, (self.order - 1) / (self.q - 1))
    }

    /// Smallest `d | hn` with `x^{p^d} = x`, i.e. the degree over `F_p` of
    /// the smallest subfield containing `x`.
    pub fn subfield_degree(&self, x: FieldElem) -> usize {
        divisors(self.degree())
            .into_iter()
            .find(|&d| self.frobenius(x, d) == x)
            .expect("hn always qualifies")
    }

    /// `x ∈ F_{q^s}`.
    pub fn in_subfield(&self, x: FieldElem, s: usize) -> bool {
        self.frobenius(x, (s * self.h as usize) % self.degree()) == x
    }

    /// An `F_q`-basis `1, g, ..., g^{n-1}` of `F_{q^n}`.
    pub fn fq_basis(&self) -> Vec<FieldElem> {
        (0..self.n)
            .map(|j| self.pow(self.generator(), j as u64))
            .collect()
    }

    /// Trace-dual basis of [`Self::fq_basis`].
    fn dual_basis(&self) -> &[FieldElem] {
        self.dual_basis.get_or_init(|| {
            let basis = self.fq_basis();
            let n = self.n();
            let gram: Vec<Vec<FieldElem>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| self.trace(self.mul(basis[i], basis[j])))
                        .collect()
                })
                .collect();
            let inv = linalg::invert(self, &gram).expect("trace form is non-degenerate");
            (0..n)
                .map(|j| {
                    (0..n).fold(FieldElem::ZERO, |acc, k| {
                        self.add(acc, self.mul(inv[j][k], basis[k]))
                    })
                })
                .collect()
        })
    }

    /// Coordinates in `F_q` of `y` with respect to [`Self::fq_basis`].
    pub fn fq_coordinates(&self, y: FieldElem) -> Vec<FieldElem> {
        self.dual_basis()
            .iter()
            .map(|&d| self.trace(self.mul(y, d)))
            .collect()
    }

    /// Sum of a slice.
    pub fn sum(&self, xs: impl IntoIterator<Item = FieldElem>) -> FieldElem {
        xs.into_iter()
            .fold(FieldElem::ZERO, |acc, x| self.add(acc, x))
    }

    /// Product of a slice.
    pub fn product(&self, xs: impl IntoIterator<Item = FieldElem>) -> FieldElem {
        xs.into_iter()
            .fold(FieldElem::ONE, |acc, x| self.mul(acc, x))
    }

    /// `x^{Σ q^{e}}` over the listed `e`, i.e. a product of Frobenius images.
    pub fn qpow(&self, x: FieldElem, exps: &[usize]) -> FieldElem {
        self.product(exps.iter().map(|&e| self.frob_q(x, e)))
    }

    /// Builds the field element of the integer `k` (image of `Z` in `F_p`).
    pub fn from_int(&self, k: i64) -> FieldElem {
        let r = k.rem_euclid(self.p as i64) as u32;
        let mut digits = vec![0u32; self.degree()];
        digits[0] = r;
        self.from_prime_coordinates(&digits)
    }
}
