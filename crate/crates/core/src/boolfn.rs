//! Truth-table Boolean functions on 2^k points: Walsh-Hadamard transform,
//! bentness, duals, algebraic normal form and EA-equivalence invariants.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf::BinaryField;
use crate::linalg::BitMatrix;

/// Largest number of input bits accepted for a truth table.
pub const MAX_VARS: u32 = 26;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    k: u32,
    table: Vec<bool>,
}

impl std::fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BooleanFunction(k={}, {})", self.k, self.to_hex())
    }
}

/// Walsh spectrum, entry b = W_f(b).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshSpectrum {
    k: u32,
    values: Vec<i64>,
}

/// Coefficients over the monomial basis; bit set i stands for the monomial
/// prod_{j in i} x_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnfPolynomial {
    k: u32,
    coefficients: Vec<bool>,
}

/// The inner product used by a Walsh transform: `masks[b]` is the bit mask
/// of the linear function x -> <b, x>.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Duality {
    k: u32,
    masks: Vec<u64>,
}

impl Duality {
    /// Plain dot product on GF(2)^k.
    pub fn dot(k: u32) -> Self {
        Duality {
            k,
            masks: (0..1u64 << k).collect(),
        }
    }

    /// <b, x> = Tr(b x) in the given field.
    pub fn field_trace(field: &BinaryField) -> Self {
        let k = field.degree();
        let basis: Vec<u64> = (0..k).map(|i| field.trace_form_mask(1 << i)).collect();
        Self::from_basis_masks(k, &basis)
    }

    /// Extends a symmetric form on GF(2)^d to GF(2)^2d by
    /// <(a, b), (x, y)> = <a, x> + <b, y>, with index(x, y) = x + 2^d y.
    pub fn bivariate(half: &Duality) -> Self {
        let d = half.k;
        let k = 2 * d;
        let basis: Vec<u64> = (0..k)
            .map(|i| {
                if i < d {
                    half.masks[1 << i]
                } else {
                    half.masks[1 << (i - d)] << d
                }
            })
            .collect();
        Self::from_basis_masks(k, &basis)
    }

    /// Builds the table from the masks of the basis vectors e_i.
    pub fn from_basis_masks(k: u32, basis: &[u64]) -> Self {
        assert_eq!(basis.len(), k as usize);
        let mut masks = vec![0u64; 1 << k];
        for b in 1..masks.len() {
            let low = b.trailing_zeros() as usize;
            masks[b] = masks[b & (b - 1)] ^ basis[low];
        }
        Duality { k, masks }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn mask(&self, b: usize) -> u64 {
        self.masks[b]
    }

    pub fn inner(&self, b: usize, x: usize) -> bool {
        (self.masks[b] & x as u64).count_ones() & 1 == 1
    }

    /// Whether the form is symmetric and nondegenerate.
    pub fn is_nondegenerate_symmetric(&self) -> bool {
        let basis: Vec<u64> = (0..self.k).map(|i| self.masks[1 << i]).collect();
        let gram = BitMatrix::from_rows(basis, self.k as usize);
        gram.is_symmetric() && gram.is_invertible()
    }
}

impl BooleanFunction {
    pub fn from_table(k: u32, table: Vec<bool>) -> Result<Self> {
        if k > MAX_VARS {
            return Err(Error::OutOfRange(format!("k = {k} exceeds {MAX_VARS}")));
        }
        if table.len() != 1 << k {
            return Err(Error::InvalidSpec(format!(
                "table length {} is not 2^{k}",
                table.len()
            )));
        }
        Ok(BooleanFunction { k, table })
    }

    pub fn from_fn(k: u32, f: impl FnMut(usize) -> bool) -> Self {
        assert!(k <= MAX_VARS);
        BooleanFunction {
            k,
            table: (0..1usize << k).map(f).collect(),
        }
    }

    pub fn zero(k: u32) -> Self {
        Self::from_fn(k, |_| false)
    }

    pub fn constant(k: u32, value: bool) -> Self {
        Self::from_fn(k, |_| value)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn eval(&self, x: usize) -> bool {
        self.table[x]
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn weight(&self) -> usize {
        self.table.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> Self {
        Self::from_fn(self.k, |x| !self.table[x])
    }

    pub fn xor(&self, other: &BooleanFunction) -> Result<Self> {
        self.same_k(other)?;
        Ok(Self::from_fn(self.k, |x| self.table[x] ^ other.table[x]))
    }

    fn same_k(&self, other: &BooleanFunction) -> Result<()> {
        if self.k != other.k {
            return Err(Error::InvalidSpec(format!(
                "variable counts differ: {} vs {}",
                self.k, other.k
            )));
        }
        Ok(())
    }

    /// Fast Walsh-Hadamard transform for the plain dot product.
    pub fn walsh_hadamard(&self) -> WalshSpectrum {
        let mut v: Vec<i64> = self.table.iter().map(|&b| if b { -1 } else { 1 }).collect();
        let n = v.len();
        let mut h = 1;
        while h < n {
            for i in (0..n).step_by(2 * h) {
                for j in i..i + h {
                    let (a, b) = (v[j], v[j + h]);
                    v[j] = a + b;
                    v[j + h] = a - b;
                }
            }
            h *= 2;
        }
        WalshSpectrum::checked(self.k, v)
    }

    /// W_f(b) = sum_x (-1)^(f(x) + <b, x>) for the inner product `duality`.
    pub fn walsh_transform(&self, duality: &Duality) -> WalshSpectrum {
        assert_eq!(duality.k, self.k, "duality size mismatch");
        let plain = self.walsh_hadamard();
        let values = duality
            .masks
            .iter()
            .map(|&m| plain.values[m as usize])
            .collect();
        WalshSpectrum::checked(self.k, values)
    }

    pub fn is_bent(&self) -> Result<bool> {
        if self.k % 2 == 1 {
            return Err(Error::Domain(format!(
                "bentness needs an even variable count, got {}",
                self.k
            )));
        }
        Ok(self.walsh_hadamard().is_flat())
    }

    /// Dual bent function read off the signs of the spectrum.
    pub fn dual(&self, duality: &Duality) -> Result<Self> {
        if !self.is_bent()? {
            return Err(Error::NotBent(
                "dual requested for a non-bent function".into(),
            ));
        }
        let w = self.walsh_transform(duality);
        Ok(Self::from_fn(self.k, |b| w.values[b] < 0))
    }

    /// Möbius transform.
    pub fn anf(&self) -> AnfPolynomial {
        AnfPolynomial {
            k: self.k,
            coefficients: moebius(&self.table),
        }
    }

    /// Algebraic degree; the zero function has degree 0.
    pub fn degree(&self) -> u32 {
        self.anf().degree()
    }

    /// f(x) + <c, x> + constant.
    pub fn add_affine(&self, duality: &Duality, c: usize, constant: bool) -> Self {
        Self::from_fn(self.k, |x| self.table[x] ^ duality.inner(c, x) ^ constant)
    }

    /// x -> f(L x).
    pub fn compose_linear(&self, l: &BitMatrix) -> Result<Self> {
        if l.nrows() != self.k as usize || l.ncols() != self.k as usize {
            return Err(Error::InvalidSpec(
                "linear map has the wrong dimension".into(),
            ));
        }
        if !l.is_invertible() {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(self.k, |x| {
            self.table[l.apply(x as u64) as usize]
        }))
    }

    /// x -> f(x + c).
    pub fn translate(&self, c: usize) -> Self {
        Self::from_fn(self.k, |x| self.table[x ^ c])
    }

    /// Rank of the symplectic form f(x+y) + f(x) + f(y) + f(0) of a
    /// function of degree at most 2.
    pub fn quadratic_rank(&self) -> Result<usize> {
        let d = self.degree();
        if d > 2 {
            return Err(Error::Domain(format!(
                "quadratic rank needs degree <= 2, got {d}"
            )));
        }
        let k = self.k as usize;
        let f = |x: usize| self.table[x];
        let rows: Vec<u64> = (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| f((1 << i) ^ (1 << j)) ^ f(1 << i) ^ f(1 << j) ^ f(0))
                    .fold(0u64, |acc, j| acc | 1 << j)
            })
            .collect();
        Ok(BitMatrix::from_rows(rows, k).rank())
    }

    /// Hex encoding: bit i of the table is bit (i mod 8) of byte i/8.
    pub fn to_hex(&self) -> String {
        let nbytes = self.table.len().div_ceil(8);
        let mut s = String::with_capacity(2 * nbytes);
        for byte in 0..nbytes {
            let v = (0..8)
                .filter(|&b| self.table.get(8 * byte + b).copied().unwrap_or(false))
                .fold(0u8, |acc, b| acc | 1 << b);
            write!(s, "{v:02x}").unwrap();
        }
        s
    }

    pub fn from_hex(k: u32, hex: &str) -> Result<Self> {
        if k > MAX_VARS {
            return Err(Error::OutOfRange(format!("k = {k} exceeds {MAX_VARS}")));
        }
        let hex = hex.trim();
        let len = 1usize << k;
        let nbytes = len.div_ceil(8);
        if hex.len() != 2 * nbytes {
            return Err(Error::Parse(format!(
                "expected {} hex digits for k={k}, got {}",
                2 * nbytes,
                hex.len()
            )));
        }
        let mut table = Vec::with_capacity(len);
        for byte in 0..nbytes {
            let v = u8::from_str_radix(&hex[2 * byte..2 * byte + 2], 16)
                .map_err(|e| Error::Parse(format!("bad hex digit: {e}")))?;
            for b in 0..8 {
                if 8 * byte + b < len {
                    table.push(v >> b & 1 == 1);
                } else if v >> b & 1 == 1 {
                    return Err(Error::Parse("padding bits must be zero".into()));
                }
            }
        }
        Self::from_table(k, table)
    }

    /// Truth-table file contents: a `k=<int>` header line and one hex line.
    pub fn to_file_string(&self) -> String {
        format!("k={}\n{}\n", self.k, self.to_hex())
    }

    pub fn parse_file(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty truth-table file".into()))?;
        let k: u32 = header
            .strip_prefix("k=")
            .ok_or_else(|| Error::Parse(format!("expected `k=<int>` header, got `{header}`")))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad k: {e}")))?;
        let hex: String = lines.collect();
        Self::from_hex(k, &hex)
    }
}

fn moebius(table: &[bool]) -> Vec<bool> {
    let mut v = table.to_vec();
    let n = v.len();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                v[j + h] ^= v[j];
            }
        }
        h *= 2;
    }
    v
}

impl WalshSpectrum {
    fn checked(k: u32, values: Vec<i64>) -> Self {
        let energy: i128 = values.iter().map(|&v| (v as i128) * (v as i128)).sum();
        assert_eq!(energy, 1i128 << (2 * k), "Parseval identity violated");
        WalshSpectrum { k, values }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, b: usize) -> i64 {
        self.values[b]
    }

    /// All entries equal to +-2^(k/2).
    pub fn is_flat(&self) -> bool {
        if self.k % 2 == 1 {
            return false;
        }
        let r = 1i64 << (self.k / 2);
        self.values.iter().all(|&v| v == r || v == -r)
    }

    /// Multiset of |W_f(b)|, an EA-invariant.
    pub fn abs_histogram(&self) -> BTreeMap<u64, usize> {
        let mut h = BTreeMap::new();
        for &v in &self.values {
            *h.entry(v.unsigned_abs()).or_insert(0) += 1;
        }
        h
    }

    pub fn histogram(&self) -> BTreeMap<i64, usize> {
        let mut h = BTreeMap::new();
        for &v in &self.values {
            *h.entry(v).or_insert(0) += 1;
        }
        h
    }
}

impl AnfPolynomial {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn coefficients(&self) -> &[bool] {
        &self.coefficients
    }

    pub fn degree(&self) -> u32 {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(|(i, _)| i.count_ones())
            .max()
            .unwrap_or(0)
    }

    /// The Möbius transform is an involution.
    pub fn to_function(&self) -> BooleanFunction {
        BooleanFunction {
            k: self.k,
            table: moebius(&self.coefficients),
        }
    }
}

/// EA invariants reported for a function.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct EaInvariants {
    pub k: u32,
    pub degree: u32,
    pub abs_spectrum: BTreeMap<u64, usize>,
    pub quadratic_rank: Option<usize>,
}

pub fn ea_invariants(f: &BooleanFunction) -> EaInvariants {
    let spec = f.walsh_hadamard();
    EaInvariants {
        k: f.k,
        degree: f.degree(),
        abs_spectrum: spec.abs_histogram(),
        quadratic_rank: f.quadratic_rank().ok(),
    }
}

/// Decides EA-equivalence of two functions of degree at most 2 using the
/// rank of their symplectic forms, which is complete for quadratics.
/// Returns `None` when either function has higher degree.
pub fn quadratic_ea_equivalent(f: &BooleanFunction, g: &BooleanFunction) -> Option<bool> {
    if f.k != g.k {
        return Some(false);
    }
    Some(f.quadratic_rank().ok()? == g.quadratic_rank().ok()?)
}

/// Largest k for which [`ea_equivalent_exhaustive`] runs.
pub const EXHAUSTIVE_EA_MAX_K: u32 = 4;

/// Witness (L, c) such that g(x) + f(L x + c) is affine.
#[derive(Clone, Debug)]
pub struct EaWitness {
    pub linear: BitMatrix,
    pub shift: usize,
}

/// Exhaustive EA-equivalence search over all affine permutations.
pub fn ea_equivalent_exhaustive(
    f: &BooleanFunction,
    g: &BooleanFunction,
) -> Result<Option<EaWitness>> {
    f.same_k(g)?;
    let k = f.k;
    if k > EXHAUSTIVE_EA_MAX_K {
        return Err(Error::OutOfRange(format!(
            "exhaustive EA search limited to k <= {EXHAUSTIVE_EA_MAX_K}"
        )));
    }
    let n = 1usize << k;
    let ku = k as usize;
    for bits in 0u64..1 << (ku * ku) {
        let rows: Vec<u64> = (0..ku)
            .map(|i| bits >> (i * ku) & ((1 << ku) - 1))
            .collect();
        let l = BitMatrix::from_rows(rows, ku);
        if !l.is_invertible() {
            continue;
        }
        let images: Vec<usize> = (0..n).map(|x| l.apply(x as u64) as usize).collect();
        for c in 0..n {
            let h: Vec<bool> = (0..n)
                .map(|x| f.table[images[x] ^ c] ^ g.table[x])
                .collect();
            let anf = moebius(&h);
            if anf
                .iter()
                .enumerate()
                .all(|(i, &v)| !v || i.count_ones() <= 1)
            {
                return Ok(Some(EaWitness {
                    linear: l,
                    shift: c,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_walsh(f: &BooleanFunction, d: &Duality) -> Vec<i64> {
        (0..f.len())
            .map(|b| {
                (0..f.len())
                    .map(|x| if f.eval(x) ^ d.inner(b, x) { -1 } else { 1 })
                    .sum()
            })
            .collect()
    }

    fn tr_xy(m: u32) -> (BooleanFunction, Duality) {
        let f = BinaryField::new(m).unwrap();
        let q = 1usize << m;
        let func =
            BooleanFunction::from_fn(2 * m, |i| f.trace(f.mul((i % q) as u64, (i / q) as u64)));
        let half = Duality::field_trace(&f);
        (func, Duality::bivariate(&half))
    }

    #[test]
    fn zero_function_spectrum() {
        let f = BooleanFunction::zero(2);
        let w = f.walsh_hadamard();
        assert_eq!(w.values(), &[4, 0, 0, 0]);
        assert!(!f.is_bent().unwrap());
    }

    #[test]
    fn linear_function_has_single_peak() {
        let field = BinaryField::new(4).unwrap();
        let d = Duality::field_trace(&field);
        for a in 0..16usize {
            let f = BooleanFunction::from_fn(4, |x| field.trace(field.mul(a as u64, x as u64)));
            let w = f.walsh_transform(&d);
            for b in 0..16 {
                assert_eq!(w.get(b), if b == a { 16 } else { 0 });
            }
        }
    }

    #[test]
    fn fast_transform_matches_naive_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let field = BinaryField::new(4).unwrap();
        for d in [Duality::dot(4), Duality::field_trace(&field)] {
            for _ in 0..20 {
                let f = BooleanFunction::from_fn(4, |_| rng.gen());
                assert_eq!(
                    f.walsh_transform(&d).values(),
                    naive_walsh(&f, &d).as_slice()
                );
            }
        }
        for k in [8u32, 12] {
            let f = BooleanFunction::from_fn(k, |_| rng.gen());
            let d = Duality::dot(k);
            let fast = f.walsh_transform(&d);
            for b in [0usize, 1, 77, (1 << k) - 1] {
                let naive: i64 = (0..f.len())
                    .map(|x| if f.eval(x) ^ d.inner(b, x) { -1 } else { 1 })
                    .sum();
                assert_eq!(fast.get(b), naive);
            }
        }
    }

    #[test]
    fn odd_k_bentness_is_rejected() {
        assert!(BooleanFunction::zero(3).is_bent().is_err());
    }

    #[test]
    fn inner_product_function_is_self_dual() {
        for m in 1..=4 {
            let (f, d) = tr_xy(m);
            assert!(d.is_nondegenerate_symmetric());
            assert!(f.is_bent().unwrap());
            assert_eq!(f.dual(&d).unwrap(), f);
            assert_eq!(f.degree(), 2);
            assert_eq!(f.quadratic_rank().unwrap(), 2 * m as usize);
        }
    }

    #[test]
    fn dual_of_non_bent_is_rejected() {
        let f = BooleanFunction::zero(4);
        assert!(matches!(f.dual(&Duality::dot(4)), Err(Error::NotBent(_))));
    }

    #[test]
    fn anf_degree_and_involution() {
        assert_eq!(BooleanFunction::constant(3, true).degree(), 0);
        assert_eq!(BooleanFunction::zero(3).degree(), 0);
        let maj = BooleanFunction::from_fn(3, |x| x.count_ones() >= 2);
        assert_eq!(maj.degree(), 2);
        let and3 = BooleanFunction::from_fn(3, |x| x == 7);
        assert_eq!(and3.degree(), 3);
        assert_eq!(and3.anf().to_function(), and3);
        assert!(and3.quadratic_rank().is_err());
        assert_eq!(BooleanFunction::zero(4).quadratic_rank().unwrap(), 0);
    }

    #[test]
    fn identities_of_affine_operations() {
        let (f, d) = tr_xy(2);
        assert_eq!(f.add_affine(&d, 0, false), f);
        assert_eq!(f.compose_linear(&BitMatrix::identity(4)).unwrap(), f);
        let singular = BitMatrix::from_rows(vec![1, 1, 4, 8], 4);
        assert!(matches!(f.compose_linear(&singular), Err(Error::Singular)));
    }

    #[test]
    fn hex_round_trip_and_layout() {
        let f = BooleanFunction::from_fn(4, |x| x == 0 || x == 9);
        // bits 0 and 9: byte 0 = 0x01, byte 1 = 0x02
        assert_eq!(f.to_hex(), "0102");
        let text = f.to_file_string();
        assert_eq!(text, "k=4\n0102\n");
        assert_eq!(BooleanFunction::parse_file(&text).unwrap(), f);
        let small = BooleanFunction::from_fn(2, |x| x == 3);
        assert_eq!(small.to_hex(), "08");
        assert!(BooleanFunction::from_hex(2, "18").is_err());
        assert!(BooleanFunction::parse_file("k=4\n01").is_err());
        assert!(BooleanFunction::parse_file("n=4\n0102").is_err());
    }

    #[test]
    fn exhaustive_ea_search() {
        let (f, _) = tr_xy(1);
        let g = BooleanFunction::from_fn(2, |x| x == 0);
        assert!(ea_equivalent_exhaustive(&f, &g).unwrap().is_some());
        assert!(ea_equivalent_exhaustive(&f, &BooleanFunction::zero(2))
            .unwrap()
            .is_none());
        let (f4, d4) = tr_xy(2);
        let l = BitMatrix::from_rows(vec![0b0011, 0b0010, 0b1100, 0b1000], 4);
        let g4 = f4
            .compose_linear(&l)
            .unwrap()
            .translate(5)
            .add_affine(&d4, 9, true);
        let w = ea_equivalent_exhaustive(&f4, &g4).unwrap().unwrap();
        assert!(w.linear.is_invertible());
        assert!(
            ea_equivalent_exhaustive(&f4, &BooleanFunction::from_fn(4, |x| x == 15))
                .unwrap()
                .is_none()
        );
        assert_eq!(quadratic_ea_equivalent(&f4, &g4), Some(true));
    }

    fn random_invertible(rng: &mut ChaCha8Rng, k: usize) -> BitMatrix {
        loop {
            let rows = (0..k).map(|_| rng.gen::<u64>() & ((1 << k) - 1)).collect();
            let m = BitMatrix::from_rows(rows, k);
            if m.is_invertible() {
                return m;
            }
        }
    }

    proptest! {
        #[test]
        fn ea_operations_preserve_bentness(seed in any::<u64>(), m in 1u32..=4, c in any::<usize>(), bit in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (f, d) = tr_xy(m);
            let k = 2 * m as usize;
            let l = random_invertible(&mut rng, k);
            let g = f.compose_linear(&l).unwrap().add_affine(&d, c % (1 << k), bit);
            prop_assert!(g.is_bent().unwrap());
            let dual = g.dual(&d).unwrap();
            prop_assert!(dual.is_bent().unwrap());
            prop_assert_eq!(dual.dual(&d).unwrap(), g.clone());
            prop_assert_eq!(g.degree(), 2);
        }

        #[test]
        fn parseval_and_anf_involution(table in proptest::collection::vec(any::<bool>(), 64)) {
            let f = BooleanFunction::from_table(6, table).unwrap();
            let _ = f.walsh_hadamard();
            prop_assert_eq!(f.anf().to_function(), f);
        }
    }
}
