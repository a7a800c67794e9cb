//! Arithmetic in F = GF(2^m), its quadratic extension K = GF(2^2m), the
//! embedding of F into K, relative traces and norms, the unit circle
//! S = {u in K : u^(q+1) = 1} and polar coordinates x = lambda * u.
//!
//! Elements are coefficient vectors in the polynomial basis, little endian:
//! the constant term is bit 0. The same integer is used as the element's
//! index in truth tables and file formats.

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest extension degree handled by [`BinaryField`].
pub const MAX_DEGREE: u32 = 32;
/// Fields up to this degree get log/antilog tables.
const TABLE_DEGREE: u32 = 16;

// ---------------------------------------------------------------------------
// Polynomials over GF(2) packed in a u64.

fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Carry-less product; both operands must have degree < 32.
fn clmul(a: u64, b: u64) -> u64 {
    debug_assert!(a < 1 << 32 && b < 1 << 32);
    let mut acc = 0u64;
    let mut b = b;
    let mut i = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << i;
        }
        b >>= 1;
        i += 1;
    }
    acc
}

fn poly_rem(mut a: u64, p: u64) -> u64 {
    let dp = poly_degree(p);
    while a != 0 && poly_degree(a) >= dp {
        a ^= p << (poly_degree(a) - dp);
    }
    a
}

fn poly_mulmod(a: u64, b: u64, p: u64) -> u64 {
    poly_rem(clmul(a, b), p)
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
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

/// Rabin's irreducibility test: `p` of degree d is irreducible iff
/// x^(2^d) = x mod p and gcd(x^(2^(d/r)) - x, p) = 1 for every prime r | d.
pub fn is_irreducible(p: u64) -> bool {
    let d = poly_degree(p);
    if d < 1 || d > MAX_DEGREE as i32 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let d = d as u64;
    let x = 0b10;
    // frob[i] = x^(2^i) mod p
    let mut frob = vec![x];
    for i in 1..=d as usize {
        let prev = frob[i - 1];
        frob.push(poly_mulmod(prev, prev, p));
    }
    if frob[d as usize] != x {
        return false;
    }
    prime_factors(d)
        .into_iter()
        .all(|r| poly_gcd(p, frob[(d / r) as usize] ^ x) == 1)
}

/// Lexicographically smallest irreducible polynomial of the given degree,
/// as a bit mask including the leading term.
pub fn smallest_irreducible(degree: u32) -> Result<u64> {
    if !(1..=MAX_DEGREE).contains(&degree) {
        return Err(Error::OutOfRange(format!(
            "degree {degree} not in 1..={MAX_DEGREE}"
        )));
    }
    let top = 1u64 << degree;
    (0..top)
        .map(|t| top | t)
        .find(|&p| is_irreducible(p))
        .ok_or_else(|| Error::Domain(format!("no irreducible polynomial of degree {degree}")))
}

/// Inverse of `a` modulo `modulus`, if it exists.
pub fn mod_inverse(a: i64, modulus: u64) -> Option<u64> {
    if modulus == 1 {
        return Some(0);
    }
    let m = modulus as i128;
    let (mut r0, mut r1) = (m, (a as i128).rem_euclid(m));
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m) as u64)
}

/// The rational number `num/den` reduced modulo `modulus`.
pub fn ratio_mod(num: i64, den: i64, modulus: u64) -> Option<u64> {
    let inv = mod_inverse(den, modulus)?;
    let n = (num as i128).rem_euclid(modulus as i128) as u64;
    Some(((n as u128 * inv as u128) % modulus as u128) as u64)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// ---------------------------------------------------------------------------

/// GF(2^d) in the polynomial basis of the smallest irreducible of degree d.
/// Elements are raw `u64` coefficient vectors.
#[derive(Clone)]
pub struct BinaryField {
    degree: u32,
    poly: u64,
    generator: u64,
    trace_mask: u64,
    exp: Vec<u64>,
    log: Vec<u32>,
}

impl fmt::Debug for BinaryField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#b}", self.degree, self.poly)
    }
}

impl BinaryField {
    pub fn new(degree: u32) -> Result<Self> {
        let poly = smallest_irreducible(degree)?;
        Self::with_poly(poly)
    }

    pub fn with_poly(poly: u64) -> Result<Self> {
        if !is_irreducible(poly) {
            return Err(Error::Domain(format!("{poly:#b} is not irreducible")));
        }
        let degree = poly_degree(poly) as u32;
        let mut field = BinaryField {
            degree,
            poly,
            generator: 0,
            trace_mask: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.generator = field.find_primitive();
        field.trace_mask = (0..degree)
            .filter(|&i| field.trace_by_definition(1 << i))
            .fold(0, |acc, i| acc | 1 << i);
        if degree <= TABLE_DEGREE {
            field.build_tables();
        }
        Ok(field)
    }

    fn find_primitive(&self) -> u64 {
        let order = self.order() - 1;
        if order == 1 {
            return 1;
        }
        let factors = prime_factors(order);
        (2..self.order())
            .find(|&g| factors.iter().all(|&p| self.pow_slow(g, order / p) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&mut self) {
        let n = (self.order() - 1) as usize;
        let mut exp = vec![0u64; 2 * n];
        let mut log = vec![0u32; self.order() as usize];
        let mut x = 1u64;
        for (i, slot) in exp.iter_mut().enumerate().take(n) {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, self.generator);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        self.exp = exp;
        self.log = log;
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> u64 {
        self.poly
    }

    /// Number of elements, 2^degree.
    pub fn order(&self) -> u64 {
        1 << self.degree
    }

    /// Smallest primitive element.
    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order()
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        poly_mulmod(a, b, self.poly)
    }

    fn pow_slow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.exp.is_empty() {
            return self.mul_slow(a, b);
        }
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn square(&self, a: u64) -> u64 {
        self.mul(a, a)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if a == 0 {
            return u64::from(e == 0);
        }
        let group = self.order() - 1;
        let e = e % group;
        if !self.exp.is_empty() {
            let l = (self.log[a as usize] as u64 * e) % group;
            return self.exp[l as usize];
        }
        self.pow_slow(a, e)
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^(2^k), by k squarings.
    pub fn frobenius(&self, a: u64, k: u32) -> u64 {
        (0..k % self.degree.max(1)).fold(a, |x, _| self.square(x))
    }

    /// The unique square root, a^(2^(d-1)).
    pub fn sqrt(&self, a: u64) -> u64 {
        self.frobenius(a, self.degree - 1)
    }

    /// Absolute trace to GF(2).
    #[inline]
    pub fn trace(&self, a: u64) -> bool {
        (a & self.trace_mask).count_ones() & 1 == 1
    }

    fn trace_by_definition(&self, a: u64) -> bool {
        let mut x = a;
        let mut acc = 0;
        for _ in 0..self.degree {
            acc ^= x;
            x = self.mul_slow(x, x);
        }
        debug_assert!(acc <= 1);
        acc == 1
    }

    /// Trace onto the subfield GF(2^k), k | degree:
    /// a + a^(2^k) + ... + a^(2^(k(d/k - 1))).
    pub fn relative_trace(&self, a: u64, k: u32) -> u64 {
        assert!(
            k > 0 && self.degree.is_multiple_of(k),
            "subfield degree must divide {}",
            self.degree
        );
        let mut x = a;
        let mut acc = 0;
        for _ in 0..self.degree / k {
            acc ^= x;
            x = self.frobenius(x, k);
        }
        acc
    }

    pub fn in_subfield(&self, a: u64, k: u32) -> bool {
        self.frobenius(a, k) == a
    }

    /// Mask `t` such that `trace(b * x) == parity(t & x)` for all x.
    pub fn trace_form_mask(&self, b: u64) -> u64 {
        (0..self.degree)
            .filter(|&i| self.trace(self.mul(b, 1 << i)))
            .fold(0, |acc, i| acc | 1 << i)
    }

    /// Evaluates a polynomial with GF(2) coefficients at `a`.
    pub fn eval_gf2_poly(&self, poly: u64, a: u64) -> u64 {
        if poly == 0 {
            return 0;
        }
        (0..=poly_degree(poly)).rev().fold(0, |acc, i| {
            let acc = self.mul(acc, a);
            if poly >> i & 1 == 1 {
                acc ^ 1
            } else {
                acc
            }
        })
    }
}

// ---------------------------------------------------------------------------

/// Element of F = GF(2^m).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u32);

/// Element of K = GF(2^2m).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TowerElement(pub u64);

impl FieldElement {
    pub const ZERO: Self = FieldElement(0);
    pub const ONE: Self = FieldElement(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl TowerElement {
    pub const ZERO: Self = TowerElement(0);
    pub const ONE: Self = TowerElement(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for FieldElement {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Self) -> Self {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl Add for TowerElement {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Self) -> Self {
        TowerElement(self.0 ^ rhs.0)
    }
}

/// x = lambda * u with lambda in F* and u on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolarForm {
    pub lambda: FieldElement,
    pub u: TowerElement,
}

/// Validated parameters of the tower F = GF(2^m) inside K = GF(2^2m).
pub struct FieldParams {
    m: u32,
    f: BinaryField,
    k: BinaryField,
    embed: Vec<u64>,
    project: HashMap<u64, u32>,
    circle: Vec<TowerElement>,
    circle_index: HashMap<u64, usize>,
    polar: OnceLock<Vec<(FieldElement, usize)>>,
}

impl fmt::Debug for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldParams")
            .field("m", &self.m)
            .field("poly_f", &format_args!("{:#b}", self.f.poly()))
            .field("poly_k", &format_args!("{:#b}", self.k.poly()))
            .field("gamma", &self.k.generator())
            .finish()
    }
}

impl FieldParams {
    pub fn new(m: u32) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::OutOfRange(format!("m = {m} not in 2..=16")));
        }
        let f = BinaryField::new(m)?;
        let k = BinaryField::new(2 * m)?;
        let q = 1u64 << m;
        let gamma = k.generator();

        // F' = {0} and the powers of gamma^(q+1).
        let beta = k.pow(gamma, q + 1);
        let mut sub: Vec<u64> = Vec::with_capacity(q as usize);
        let mut x = 1;
        for _ in 0..q - 1 {
            sub.push(x);
            x = k.mul(x, beta);
        }
        let root = sub
            .iter()
            .copied()
            .filter(|&r| k.eval_gf2_poly(f.poly(), r) == 0)
            .min()
            .ok_or_else(|| Error::Domain("poly_f has no root in the subfield of K".into()))?;
        let basis: Vec<u64> = (0..m).map(|i| k.pow(root, i as u64)).collect();
        let embed: Vec<u64> = (0..q)
            .map(|a| {
                (0..m as usize)
                    .filter(|&i| a >> i & 1 == 1)
                    .fold(0, |acc, i| acc ^ basis[i])
            })
            .collect();

        let sub_set: std::collections::HashSet<u64> = sub.iter().copied().collect();
        if embed[1..].iter().any(|e| !sub_set.contains(e)) || embed[0] != 0 {
            return Err(Error::Verification(
                "embedded subfield is not closed under addition".into(),
            ));
        }
        let project: HashMap<u64, u32> = embed
            .iter()
            .enumerate()
            .map(|(a, &e)| (e, a as u32))
            .collect();
        if project.len() != q as usize {
            return Err(Error::Verification(
                "subfield embedding is not injective".into(),
            ));
        }

        let step = k.pow(gamma, q - 1);
        let mut circle = Vec::with_capacity(q as usize + 1);
        let mut u = 1;
        for _ in 0..=q {
            circle.push(TowerElement(u));
            u = k.mul(u, step);
        }
        let circle_index = circle.iter().enumerate().map(|(j, u)| (u.0, j)).collect();

        Ok(FieldParams {
            m,
            f,
            k,
            embed,
            project,
            circle,
            circle_index,
            polar: OnceLock::new(),
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        2 * self.m
    }

    /// q = 2^m, the order of F.
    pub fn q(&self) -> usize {
        1 << self.m
    }

    /// 2^n, the order of K.
    pub fn k_size(&self) -> usize {
        1 << (2 * self.m)
    }

    pub fn field_f(&self) -> &BinaryField {
        &self.f
    }

    pub fn field_k(&self) -> &BinaryField {
        &self.k
    }

    pub fn poly_f(&self) -> u64 {
        self.f.poly()
    }

    pub fn poly_k(&self) -> u64 {
        self.k.poly()
    }

    pub fn gamma(&self) -> TowerElement {
        TowerElement(self.k.generator())
    }

    pub fn f_elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q() as u32).map(FieldElement)
    }

    pub fn k_elements(&self) -> impl Iterator<Item = TowerElement> {
        (0..self.k_size() as u64).map(TowerElement)
    }

    // -- F arithmetic

    pub fn f_mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.f.mul(a.0 as u64, b.0 as u64) as u32)
    }

    pub fn f_inv(&self, a: FieldElement) -> Result<FieldElement> {
        Ok(FieldElement(self.f.inv(a.0 as u64)? as u32))
    }

    pub fn f_div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.f_mul(a, self.f_inv(b)?))
    }

    pub fn f_sqrt(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.f.sqrt(a.0 as u64) as u32)
    }

    pub fn f_pow(&self, a: FieldElement, e: u64) -> FieldElement {
        FieldElement(self.f.pow(a.0 as u64, e) as u32)
    }

    /// Absolute trace tr: F -> GF(2).
    pub fn tr(&self, a: FieldElement) -> bool {
        self.f.trace(a.0 as u64)
    }

    // -- K arithmetic

    pub fn mul(&self, a: TowerElement, b: TowerElement) -> TowerElement {
        TowerElement(self.k.mul(a.0, b.0))
    }

    pub fn inv(&self, a: TowerElement) -> Result<TowerElement> {
        Ok(TowerElement(self.k.inv(a.0)?))
    }

    pub fn div(&self, a: TowerElement, b: TowerElement) -> Result<TowerElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn sqrt(&self, a: TowerElement) -> TowerElement {
        TowerElement(self.k.sqrt(a.0))
    }

    pub fn pow(&self, a: TowerElement, e: u64) -> TowerElement {
        TowerElement(self.k.pow(a.0, e))
    }

    /// x-bar = x^q.
    pub fn conjugate(&self, a: TowerElement) -> TowerElement {
        TowerElement(self.k.frobenius(a.0, self.m))
    }

    pub fn in_subfield(&self, a: TowerElement) -> bool {
        self.conjugate(a) == a
    }

    /// Absolute trace Tr: K -> GF(2).
    pub fn trace_abs(&self, a: TowerElement) -> bool {
        self.k.trace(a.0)
    }

    // -- the tower

    pub fn embed(&self, a: FieldElement) -> TowerElement {
        TowerElement(self.embed[a.index()])
    }

    /// Inverse of [`embed`](Self::embed) on the subfield F'.
    pub fn project(&self, a: TowerElement) -> Option<FieldElement> {
        self.project.get(&a.0).map(|&v| FieldElement(v))
    }

    fn project_in_subfield(&self, a: TowerElement) -> FieldElement {
        self.project(a)
            .expect("value lies in the embedded subfield")
    }

    /// T(x) = x + x-bar, returned as an element of F.
    pub fn trace_rel(&self, a: TowerElement) -> FieldElement {
        self.project_in_subfield(a + self.conjugate(a))
    }

    /// N(x) = x * x-bar, returned as an element of F.
    pub fn norm_rel(&self, a: TowerElement) -> FieldElement {
        self.project_in_subfield(self.mul(a, self.conjugate(a)))
    }

    /// The q+1 elements of norm 1, ordered as gamma^(j(q-1)), j = 0..=q.
    pub fn unit_circle(&self) -> &[TowerElement] {
        &self.circle
    }

    pub fn circle_index(&self, u: TowerElement) -> Option<usize> {
        self.circle_index.get(&u.0).copied()
    }

    /// Index of u^e for u = unit_circle()[j]; exponents act modulo q+1.
    pub fn circle_pow_index(&self, j: usize, e: i64) -> usize {
        let order = self.q() as i128 + 1;
        ((j as i128 * e as i128).rem_euclid(order)) as usize
    }

    pub fn circle_pow(&self, j: usize, e: i64) -> TowerElement {
        self.circle[self.circle_pow_index(j, e)]
    }

    /// lambda = sqrt(x x-bar), u = sqrt(x / x-bar).
    pub fn polar_decompose(&self, x: TowerElement) -> Result<PolarForm> {
        if x.is_zero() {
            return Err(Error::Domain("polar form of zero".into()));
        }
        let xbar = self.conjugate(x);
        let lambda = self.project_in_subfield(self.sqrt(self.mul(x, xbar)));
        let u = self.sqrt(self.div(x, xbar)?);
        Ok(PolarForm { lambda, u })
    }

    pub fn recompose(&self, p: PolarForm) -> TowerElement {
        self.mul(self.embed(p.lambda), p.u)
    }

    /// For every x in K (by index), its polar form as (lambda, circle index).
    /// Entry 0 is (0, 0) and carries no meaning.
    pub fn polar_table(&self) -> &[(FieldElement, usize)] {
        self.polar.get_or_init(|| {
            let mut table = vec![(FieldElement::ZERO, 0usize); self.k_size()];
            for (j, &u) in self.circle.iter().enumerate() {
                for lambda in self.f_elements().skip(1) {
                    let x = self.mul(self.embed(lambda), u);
                    table[x.index()] = (lambda, j);
                }
            }
            table
        })
    }

    /// Direction of a nonzero vector of K viewed as an F-plane: the circle
    /// index of u in x = lambda u. Two nonzero vectors are F-proportional
    /// iff their directions agree.
    pub fn direction(&self, x: TowerElement) -> Option<usize> {
        (!x.is_zero()).then(|| self.polar_table()[x.index()].1)
    }
}
