//! Prequasifields on F or F x F and the spreads they coordinatize.
//!
//! Elements of the carrier are bit vectors: an element of F is its
//! polynomial-basis vector, and a pair (x1, x2) packs as x1 | x2 << m.
//! The bilinear form is B(x, y) = tr(xy), or tr(x1 y1) + tr(x2 y2) on pairs.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::BinaryField;
use crate::linalg::BitMatrix;

/// Triple-quantified axioms are checked exhaustively up to this carrier size.
pub const EXHAUSTIVE_TRIPLE_MAX: usize = 64;
/// Pair-quantified checks are exhaustive up to this carrier size.
pub const EXHAUSTIVE_PAIR_MAX: usize = 4096;
/// Random samples drawn above the caps.
pub const SAMPLES: usize = 20_000;
/// Largest carrier dimension for which multiplication tables are built.
pub const MAX_TABLE_DIM: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Flat,
    Pair,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Flat => "flat",
            Shape::Pair => "pair",
        }
    }
}

/// The vector space F or F x F with its symmetric form B.
#[derive(Clone)]
pub struct Carrier {
    shape: Shape,
    field: BinaryField,
    gram: BitMatrix,
    gram_inv: BitMatrix,
}

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Carrier({}, {:?})", self.shape.name(), self.field)
    }
}

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.field.poly() == other.field.poly()
    }
}

impl Eq for Carrier {}

impl Carrier {
    pub fn new(shape: Shape, m: u32) -> Result<Self> {
        if !(1..=16).contains(&m) || (shape == Shape::Pair && m > 8) {
            return Err(Error::OutOfRange(format!(
                "carrier {} with m = {m}",
                shape.name()
            )));
        }
        let field = BinaryField::new(m)?;
        let mut c = Carrier {
            shape,
            field,
            gram: BitMatrix::identity(1),
            gram_inv: BitMatrix::identity(1),
        };
        let dim = c.dim() as usize;
        c.gram = BitMatrix::from_rows((0..dim).map(|i| c.form_mask(1 << i)).collect(), dim);
        c.gram_inv = c.gram.inverse().expect("the trace form is nondegenerate");
        Ok(c)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn field(&self) -> &BinaryField {
        &self.field
    }

    pub fn m(&self) -> u32 {
        self.field.degree()
    }

    /// Dimension over GF(2).
    pub fn dim(&self) -> u32 {
        match self.shape {
            Shape::Flat => self.m(),
            Shape::Pair => 2 * self.m(),
        }
    }

    pub fn size(&self) -> usize {
        1 << self.dim()
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.size() as u64
    }

    pub fn split(&self, x: u64) -> (u64, u64) {
        let m = self.m();
        (x & ((1 << m) - 1), x >> m)
    }

    pub fn join(&self, a: u64, b: u64) -> u64 {
        a | b << self.m()
    }

    pub fn form(&self, x: u64, y: u64) -> bool {
        match self.shape {
            Shape::Flat => self.field.trace(self.field.mul(x, y)),
            Shape::Pair => {
                let (x1, x2) = self.split(x);
                let (y1, y2) = self.split(y);
                self.field.trace(self.field.mul(x1, y1)) ^ self.field.trace(self.field.mul(x2, y2))
            }
        }
    }

    /// Mask t with B(x, y) = parity(t & y).
    pub fn form_mask(&self, x: u64) -> u64 {
        match self.shape {
            Shape::Flat => self.field.trace_form_mask(x),
            Shape::Pair => {
                let (x1, x2) = self.split(x);
                self.join(
                    self.field.trace_form_mask(x1),
                    self.field.trace_form_mask(x2),
                )
            }
        }
    }

    /// Gram matrix G[i][j] = B(e_i, e_j).
    pub fn gram(&self) -> &BitMatrix {
        &self.gram
    }

    /// Scalar multiplication by an element of F.
    pub fn scale(&self, lambda: u64, x: u64) -> u64 {
        match self.shape {
            Shape::Flat => self.field.mul(lambda, x),
            Shape::Pair => {
                let (a, b) = self.split(x);
                self.join(self.field.mul(lambda, a), self.field.mul(lambda, b))
            }
        }
    }

    /// The adjoint of L with respect to B: G^-1 L^T G.
    pub fn adjoint(&self, l: &BitMatrix) -> BitMatrix {
        self.gram_inv.mul(&l.transpose()).mul(&self.gram)
    }

    /// A basis b_i with B(b_i, b_j) = [i = j].
    pub fn self_dual_basis(&self) -> Vec<u64> {
        let half = trace_orthogonal_basis(&self.field);
        match self.shape {
            Shape::Flat => half,
            Shape::Pair => half
                .iter()
                .copied()
                .chain(half.iter().map(|&b| b << self.m()))
                .collect(),
        }
    }
}

/// A basis of the field over GF(2) with tr(b_i b_j) = [i = j], found by
/// depth-first search.
pub fn trace_orthogonal_basis(field: &BinaryField) -> Vec<u64> {
    fn extend(field: &BinaryField, chosen: &mut Vec<u64>, start: u64) -> bool {
        if chosen.len() == field.degree() as usize {
            return true;
        }
        for b in start..field.order() {
            if !field.trace(field.mul(b, b)) || chosen.iter().any(|&c| field.trace(field.mul(b, c)))
            {
                continue;
            }
            chosen.push(b);
            if extend(field, chosen, b + 1) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    assert!(
        extend(field, &mut chosen, 1),
        "a trace-orthogonal basis exists in characteristic 2"
    );
    chosen
}

/// Matrix of L in the basis given by `basis` (columns of P): P^-1 L P.
pub fn matrix_in_basis(l: &BitMatrix, basis: &[u64]) -> BitMatrix {
    let p = BitMatrix::from_columns(basis, l.nrows());
    p.inverse()
        .expect("basis vectors are independent")
        .mul(l)
        .mul(&p)
}

/// Parameters of a Kantor chain F = F_0 > F_1 > ... > F_n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KantorChain {
    /// Degrees of F_1, ..., F_n over GF(2).
    pub degrees: Vec<u32>,
    /// lambda_i in F_i*, i = 1..n.
    pub lambdas: Vec<u64>,
    /// zeta_i in F, i = 1..n.
    pub zetas: Vec<u64>,
}

impl KantorChain {
    fn validate(&self, field: &BinaryField) -> Result<()> {
        let m = field.degree();
        let n = self.degrees.len();
        if self.lambdas.len() != n || self.zetas.len() != n {
            return Err(Error::InvalidSpec(
                "chain, lambdas and zetas differ in length".into(),
            ));
        }
        let mut prev = m;
        for &d in &self.degrees {
            if d == 0 || d >= prev || !prev.is_multiple_of(d) {
                return Err(Error::InvalidSpec(format!(
                    "GF(2^{d}) is not a proper subfield of GF(2^{prev})"
                )));
            }
            prev = d;
        }
        if (m / prev).is_multiple_of(2) {
            return Err(Error::InvalidSpec(format!(
                "[F : F_n] = {} is even",
                m / prev
            )));
        }
        for (i, (&l, &d)) in self.lambdas.iter().zip(&self.degrees).enumerate() {
            if l == 0 || l >= field.order() || !field.in_subfield(l, d) {
                return Err(Error::InvalidSpec(format!(
                    "lambda_{} is not in GF(2^{d})*",
                    i + 1
                )));
            }
        }
        if self.zetas.iter().any(|&z| z >= field.order()) {
            return Err(Error::InvalidSpec("zeta outside F".into()));
        }
        Ok(())
    }

    fn eval(&self, f: &BinaryField, x: u64, y: u64) -> u64 {
        let xy = f.mul(x, y);
        let mut acc = f.mul(xy, y);
        let mut c_prev = 1;
        for i in 0..self.degrees.len() {
            let t = |a: u64| f.relative_trace(a, self.degrees[i]);
            let c = f.mul(c_prev, self.lambdas[i]);
            let zeta = self.zetas[i];
            let t_prev = t(f.mul(c_prev, xy));
            acc ^= f.mul(f.mul(c_prev, y), t_prev);
            acc ^= f.mul(f.mul(c, y), t(f.mul(c, xy)));
            acc ^= f.mul(f.mul(c_prev, y), t(f.mul(x, zeta)));
            acc ^= f.mul(zeta, t_prev);
            c_prev = c;
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MulRule {
    /// x o z = xz.
    Field,
    Kantor(KantorChain),
    /// x o z = x M_z on F x F, m = 2k + 1.
    Luneburg {
        k: u32,
    },
    Table,
}

/// A right prequasifield (V, +, o), stored as a closed form or a table of
/// right products x o z.
#[derive(Clone)]
pub struct Prequasifield {
    carrier: Carrier,
    rule: MulRule,
    table: OnceLock<Vec<u32>>,
}

impl fmt::Debug for Prequasifield {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prequasifield({:?}, {:?})", self.carrier, self.rule)
    }
}

impl Prequasifield {
    pub fn field(m: u32) -> Result<Self> {
        Ok(Self::with_rule(
            Carrier::new(Shape::Flat, m)?,
            MulRule::Field,
        ))
    }

    pub fn kantor(m: u32, chain: KantorChain) -> Result<Self> {
        let carrier = Carrier::new(Shape::Flat, m)?;
        chain.validate(carrier.field())?;
        Ok(Self::with_rule(carrier, MulRule::Kantor(chain)))
    }

    pub fn luneburg(m: u32) -> Result<Self> {
        if m < 3 || m.is_multiple_of(2) {
            return Err(Error::InvalidSpec(format!(
                "the Lüneburg spread needs m odd, m >= 3, got {m}"
            )));
        }
        Ok(Self::with_rule(
            Carrier::new(Shape::Pair, m)?,
            MulRule::Luneburg { k: (m - 1) / 2 },
        ))
    }

    pub fn from_table(carrier: Carrier, table: Vec<u32>) -> Result<Self> {
        let size = carrier.size();
        if carrier.dim() > MAX_TABLE_DIM {
            return Err(Error::OutOfRange(format!(
                "tables are limited to dimension {MAX_TABLE_DIM}"
            )));
        }
        if table.len() != size * size {
            return Err(Error::InvalidSpec(format!(
                "table needs {} entries",
                size * size
            )));
        }
        if table.iter().any(|&v| v as usize >= size) {
            return Err(Error::InvalidSpec("table entry outside the carrier".into()));
        }
        let lock = OnceLock::new();
        lock.set(table).expect("fresh lock");
        Ok(Prequasifield {
            carrier,
            rule: MulRule::Table,
            table: lock,
        })
    }

    /// Tabulates x o z = f(x, z).
    pub fn from_fn(carrier: Carrier, f: impl Fn(u64, u64) -> u64 + Sync) -> Result<Self> {
        if carrier.dim() > MAX_TABLE_DIM {
            return Err(Error::OutOfRange(format!(
                "tables are limited to dimension {MAX_TABLE_DIM}"
            )));
        }
        let size = carrier.size();
        let table = (0..size * size)
            .into_par_iter()
            .map(|i| f((i / size) as u64, (i % size) as u64) as u32)
            .collect();
        Self::from_table(carrier, table)
    }

    fn with_rule(carrier: Carrier, rule: MulRule) -> Self {
        Prequasifield {
            carrier,
            rule,
            table: OnceLock::new(),
        }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn rule(&self) -> &MulRule {
        &self.rule
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    /// x o z.
    pub fn mul(&self, x: u64, z: u64) -> u64 {
        if let Some(t) = self.table.get() {
            return t[x as usize * self.size() + z as usize] as u64;
        }
        let f = self.carrier.field();
        match &self.rule {
            MulRule::Field => f.mul(x, z),
            MulRule::Kantor(chain) => chain.eval(f, x, z),
            MulRule::Luneburg { k } => {
                let c = &self.carrier;
                let (x1, x2) = c.split(x);
                let (z1, z2) = c.split(z);
                let w = f.frobenius(z1, *k) ^ f.mul(z2, f.frobenius(z2, *k));
                c.join(f.mul(x1, z1) ^ f.mul(x2, w), f.mul(x1, w) ^ f.mul(x2, z2))
            }
            MulRule::Table => unreachable!("table rule always carries its table"),
        }
    }

    /// The table of right products, built on first use.
    pub fn table(&self) -> Result<&[u32]> {
        if self.carrier.dim() > MAX_TABLE_DIM {
            return Err(Error::OutOfRange(format!(
                "tables are limited to dimension {MAX_TABLE_DIM}"
            )));
        }
        Ok(self.table.get_or_init(|| {
            let size = self.size();
            (0..size * size)
                .into_par_iter()
                .map(|i| self.mul((i / size) as u64, (i % size) as u64) as u32)
                .collect()
        }))
    }

    pub fn same_table(&self, other: &Prequasifield) -> bool {
        self.carrier == other.carrier
            && match (self.table(), other.table()) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            }
    }

    /// Matrix of R_z: x -> x o z (valid when o is right distributive).
    pub fn right_matrix(&self, z: u64) -> BitMatrix {
        BitMatrix::from_linear_fn(self.carrier.dim() as usize, |x| self.mul(x, z))
    }

    /// Matrix of L_z: x -> z o x (valid for presemifields).
    pub fn left_matrix(&self, z: u64) -> BitMatrix {
        BitMatrix::from_linear_fn(self.carrier.dim() as usize, |x| self.mul(z, x))
    }

    /// The transpose: x * z = R_z^*(x), so that B(x * z, y) = B(x, y o z).
    pub fn transpose(&self) -> Result<Prequasifield> {
        let adj: Vec<BitMatrix> = self
            .carrier
            .elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|z| self.carrier.adjoint(&self.right_matrix(z)))
            .collect();
        Self::from_fn(self.carrier.clone(), |x, z| adj[z as usize].apply(x))
    }

    /// The dual: x * y = y o x.
    pub fn dual(&self) -> Result<Prequasifield> {
        Self::from_fn(self.carrier.clone(), |x, y| self.mul(y, x))
    }

    /// z * y = L_z^*(y): turns a symplectic presemifield into a commutative
    /// one and back.
    pub fn left_adjoint(&self) -> Result<Prequasifield> {
        let adj: Vec<BitMatrix> = self
            .carrier
            .elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|z| self.carrier.adjoint(&self.left_matrix(z)))
            .collect();
        Self::from_fn(self.carrier.clone(), |z, y| adj[z as usize].apply(y))
    }

    pub fn commutative_from_symplectic(&self) -> Result<Prequasifield> {
        let r = self.validate(0);
        if !r.is_presemifield || !r.is_symplectic {
            return Err(Error::InvalidSpec("needs a symplectic presemifield".into()));
        }
        self.left_adjoint()
    }

    pub fn symplectic_from_commutative(&self) -> Result<Prequasifield> {
        let r = self.validate(0);
        if !r.is_presemifield || !r.is_commutative {
            return Err(Error::InvalidSpec(
                "needs a commutative presemifield".into(),
            ));
        }
        self.left_adjoint()
    }

    /// B(x o z, y) = B(x, y o z) for all x, y, z, via self-adjointness of
    /// every R_z.
    pub fn is_symplectic(&self) -> bool {
        self.symplectic_witness().is_none()
    }

    fn symplectic_witness(&self) -> Option<u64> {
        let c = &self.carrier;
        c.elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .find_first(|&z| {
                let r = self.right_matrix(z);
                c.adjoint(&r) != r
            })
    }

    /// Elements k with k o (x o y) = (k o x) o y and k o (x + y) = k o x + k o y.
    pub fn kernel(&self) -> Result<Vec<u64>> {
        let size = self.size();
        if size > 256 {
            return Err(Error::OutOfRange(
                "kernel is computed by brute force up to 256 elements".into(),
            ));
        }
        Ok((0..size as u64)
            .into_par_iter()
            .filter(|&k| {
                (0..size as u64).all(|x| {
                    (0..size as u64).all(|y| {
                        self.mul(k, self.mul(x, y)) == self.mul(self.mul(k, x), y)
                            && self.mul(k, x ^ y) == self.mul(k, x) ^ self.mul(k, y)
                    })
                })
            })
            .collect())
    }

    /// Checks the axioms and the structural flags. Triple-quantified laws
    /// are exhaustive up to [`EXHAUSTIVE_TRIPLE_MAX`] elements and sampled
    /// with the given seed above.
    pub fn validate(&self, seed: u64) -> PqfReport {
        let size = self.size();
        let n = size as u64;
        let exhaustive = size <= EXHAUSTIVE_TRIPLE_MAX;
        let triples: Vec<(u64, u64, u64)> = if exhaustive {
            (0..n)
                .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
                .collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..SAMPLES)
                .map(|_| {
                    (
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                    )
                })
                .collect()
        };
        let mut witnesses = Vec::new();

        let right_dist = triples
            .par_iter()
            .find_first(|&&(x, y, z)| self.mul(x ^ y, z) != self.mul(x, z) ^ self.mul(y, z));
        if let Some((x, y, z)) = right_dist {
            witnesses.push(format!(
                "(x + y) o z != x o z + y o z at x={x}, y={y}, z={z}"
            ));
        }
        let left_dist = triples
            .par_iter()
            .find_first(|&&(x, y, z)| self.mul(x, y ^ z) != self.mul(x, y) ^ self.mul(x, z));

        let pair_exhaustive = size <= EXHAUSTIVE_PAIR_MAX;
        let outer: Vec<u64> = if pair_exhaustive {
            (0..n).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            (0..64).map(|_| rng.gen_range(0..n)).collect()
        };
        let zero_prod = outer.par_iter().find_first(|&&x| self.mul(x, 0) != 0);
        if let Some(x) = zero_prod {
            witnesses.push(format!("x o 0 != 0 at x={x}"));
        }
        let bijective = |f: &(dyn Fn(u64) -> u64 + Sync)| {
            let mut seen = vec![false; size];
            (0..n).all(|v| !std::mem::replace(&mut seen[f(v) as usize], true))
        };
        let right_bij = outer
            .par_iter()
            .filter(|&&z| z != 0)
            .find_first(|&&z| !bijective(&|x| self.mul(x, z)));
        if let Some(z) = right_bij {
            witnesses.push(format!("x -> x o z is not a bijection for z={z}"));
        }
        let left_bij = outer
            .par_iter()
            .filter(|&&x| x != 0)
            .find_first(|&&x| !bijective(&|z| self.mul(x, z)));
        if let Some(x) = left_bij {
            witnesses.push(format!("z -> x o z is not a bijection for x={x}"));
        }
        let is_prequasifield = right_dist.is_none()
            && zero_prod.is_none()
            && right_bij.is_none()
            && left_bij.is_none();

        let identity = (1..n).find(|&e| {
            outer
                .iter()
                .all(|&x| self.mul(e, x) == x && self.mul(x, e) == x)
        });
        let commutative = outer
            .par_iter()
            .find_first(|&&x| (0..n).any(|y| self.mul(x, y) != self.mul(y, x)))
            .is_none();
        let is_symplectic = is_prequasifield && self.symplectic_witness().is_none();

        PqfReport {
            size,
            shape: self.carrier.shape(),
            exhaustive: exhaustive && pair_exhaustive,
            samples: if exhaustive { 0 } else { SAMPLES },
            right_distributive: right_dist.is_none(),
            zero_product: zero_prod.is_none(),
            right_bijective: right_bij.is_none(),
            left_bijective: left_bij.is_none(),
            is_prequasifield,
            identity,
            is_quasifield: is_prequasifield && identity.is_some(),
            is_presemifield: is_prequasifield && left_dist.is_none(),
            is_commutative: commutative,
            is_symplectic,
            witnesses,
        }
    }

    /// The q+1 components: {(0, y)} first, then {(x, x o z)} for each z,
    /// each as a basis of packed vectors x | y << dim.
    pub fn spread_components(&self) -> Vec<Vec<u64>> {
        let dim = self.carrier.dim();
        let mut out = vec![(0..dim).map(|i| 1u64 << (i + dim)).collect::<Vec<_>>()];
        for z in self.carrier.elements() {
            out.push(
                (0..dim)
                    .map(|i| (1u64 << i) | self.mul(1 << i, z) << dim)
                    .collect(),
            );
        }
        out
    }

    /// Every nonzero vector of V x V lies in exactly one component.
    /// Exhaustive up to 2^12 vectors, sampled above.
    pub fn verify_spread(&self, seed: u64) -> SpreadReport {
        let size = self.size();
        let dim = self.carrier.dim();
        if size * size <= 1 << 12 {
            let mut hits = vec![0u8; size * size];
            for y in 1..size {
                hits[y << dim] += 1;
            }
            for z in self.carrier.elements() {
                for x in 1..size as u64 {
                    let v = x | self.mul(x, z) << dim;
                    hits[v as usize] = hits[v as usize].saturating_add(1);
                }
            }
            let witness = (1..hits.len()).find(|&v| hits[v] != 1);
            return SpreadReport {
                components: size + 1,
                exhaustive: true,
                ok: witness.is_none(),
                witness: witness.map(|v| format!("vector {v} lies in {} components", hits[v])),
            };
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = size as u64;
        let mut witness = None;
        for _ in 0..SAMPLES / 100 {
            let x = rng.gen_range(1..n);
            let y = rng.gen_range(0..n);
            let count = self
                .carrier
                .elements()
                .filter(|&z| self.mul(x, z) == y)
                .count();
            if count != 1 {
                witness = Some(format!(
                    "vector {} lies in {count} components",
                    x | y << dim
                ));
                break;
            }
        }
        SpreadReport {
            components: size + 1,
            exhaustive: false,
            ok: witness.is_none(),
            witness,
        }
    }

    /// For shape F: R_z(x) = x c; for F x F: R_z(x) = x M_z with M_z 2 x 2
    /// over F. Fails when R_z is not F-linear.
    pub fn f_matrix(&self, z: u64) -> Result<FMatrix> {
        let c = &self.carrier;
        let f = c.field();
        let m = match c.shape() {
            Shape::Flat => FMatrix {
                n: 1,
                entries: vec![self.mul(1, z)],
            },
            Shape::Pair => {
                let (a, b) = c.split(self.mul(1, z));
                let (d, e) = c.split(self.mul(c.join(0, 1), z));
                FMatrix {
                    n: 2,
                    entries: vec![a, b, d, e],
                }
            }
        };
        let sample: Vec<u64> = c.elements().take(EXHAUSTIVE_PAIR_MAX).collect();
        let bad = sample.into_par_iter().find_first(|&x| {
            let expect = match c.shape() {
                Shape::Flat => f.mul(x, m.entries[0]),
                Shape::Pair => {
                    let (x1, x2) = c.split(x);
                    c.join(
                        f.mul(x1, m.entries[0]) ^ f.mul(x2, m.entries[2]),
                        f.mul(x1, m.entries[1]) ^ f.mul(x2, m.entries[3]),
                    )
                }
            };
            self.mul(x, z) != expect
        });
        match bad {
            Some(x) => Err(Error::Domain(format!("R_{z} is not F-linear at x={x}"))),
            None => Ok(m),
        }
    }

    /// d(M_z) for every z, packed as carrier elements.
    pub fn sqrt_diagonal_map(&self) -> Result<Vec<u64>> {
        self.carrier
            .elements()
            .map(|z| {
                let d = diagonal_sqrt(&self.f_matrix(z)?, self.carrier.field())?;
                Ok(match self.carrier.shape() {
                    Shape::Flat => d[0],
                    Shape::Pair => self.carrier.join(d[0], d[1]),
                })
            })
            .collect()
    }

    /// Header `q=<size> shape=<flat|pair>` and one row of x o z per x.
    pub fn to_table_string(&self) -> Result<String> {
        let size = self.size();
        let table = self.table()?;
        let mut out = format!("q={size} shape={}\n", self.carrier.shape().name());
        for row in table.chunks(size) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        Ok(out)
    }

    pub fn parse_table(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty table file".into()))?;
        let mut size = None;
        let mut shape = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("q", v)) => {
                    size = Some(
                        v.parse::<usize>()
                            .map_err(|e| Error::Parse(e.to_string()))?,
                    )
                }
                Some(("shape", "flat")) => shape = Some(Shape::Flat),
                Some(("shape", "pair")) => shape = Some(Shape::Pair),
                _ => return Err(Error::Parse(format!("unexpected header field `{field}`"))),
            }
        }
        let size = size.ok_or_else(|| Error::Parse("header lacks q=".into()))?;
        let shape = shape.ok_or_else(|| Error::Parse("header lacks shape=".into()))?;
        if !size.is_power_of_two() || size < 2 {
            return Err(Error::Parse(format!("q = {size} is not a power of two")));
        }
        let dim = size.trailing_zeros();
        let m = match shape {
            Shape::Flat => dim,
            Shape::Pair if dim % 2 == 0 => dim / 2,
            Shape::Pair => return Err(Error::Parse("pair shape needs an even dimension".into())),
        };
        let carrier = Carrier::new(shape, m)?;
        let mut table = Vec::with_capacity(size * size);
        for (i, line) in lines.enumerate() {
            let row: Vec<u32> = line
                .split_whitespace()
                .map(|v| {
                    v.parse::<u32>()
                        .map_err(|e| Error::Parse(format!("row {i}: {e}")))
                })
                .collect::<Result<_>>()?;
            if row.len() != size {
                return Err(Error::Parse(format!(
                    "row {i} has {} entries, expected {size}",
                    row.len()
                )));
            }
            table.extend(row);
        }
        if table.len() != size * size {
            return Err(Error::Parse(format!(
                "expected {size} rows, got {}",
                table.len() / size
            )));
        }
        Self::from_table(carrier, table).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PqfReport {
    pub size: usize,
    pub shape: Shape,
    pub exhaustive: bool,
    pub samples: usize,
    pub right_distributive: bool,
    pub zero_product: bool,
    pub right_bijective: bool,
    pub left_bijective: bool,
    pub is_prequasifield: bool,
    pub identity: Option<u64>,
    pub is_quasifield: bool,
    pub is_presemifield: bool,
    pub is_commutative: bool,
    pub is_symplectic: bool,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpreadReport {
    pub components: usize,
    pub exhaustive: bool,
    pub ok: bool,
    pub witness: Option<String>,
}

/// Square matrix over F, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMatrix {
    pub n: usize,
    pub entries: Vec<u64>,
}

impl FMatrix {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Square roots of the diagonal of a symmetric matrix, in order.
pub fn diagonal_sqrt(m: &FMatrix, field: &BinaryField) -> Result<Vec<u64>> {
    if !m.is_symmetric() {
        return Err(Error::Domain("d(M) needs a symmetric matrix".into()));
    }
    Ok((0..m.n).map(|i| field.sqrt(m.get(i, i))).collect())
}

/// Perpendicularity of the spreads of Q and Q^t under
/// <(x, y), (x', y')> = B(x, y') + B(y, x'), checked component by component.
pub fn spreads_perpendicular(q: &Prequasifield, qt: &Prequasifield) -> bool {
    let c = q.carrier();
    let n = q.size() as u64;
    (0..n)
        .into_par_iter()
        .all(|z| (0..n).all(|x| (0..n).all(|y| c.form(x, qt.mul(y, z)) == c.form(q.mul(x, z), y))))
}

/// The presemifields reachable from S by dual and transpose, deduplicated
/// by table equality. Words name the operations applied in order.
#[derive(Clone, Debug)]
pub struct KnuthOrbit {
    pub members: Vec<(String, Prequasifield)>,
    /// S^dtd and S^tdt have identical tables.
    pub dtd_equals_tdt: bool,
}

pub fn knuth_orbit(s: &Prequasifield) -> Result<KnuthOrbit> {
    if !s.validate(0).is_presemifield {
        return Err(Error::InvalidSpec(
            "the Knuth orbit needs a presemifield".into(),
        ));
    }
    let apply = |p: &Prequasifield, op: char| if op == 'd' { p.dual() } else { p.transpose() };
    let mut members: Vec<(String, Prequasifield)> = vec![("S".into(), s.clone())];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for op in ['d', 't'] {
            let next = apply(&members[i].1, op)?;
            if members.iter().any(|(_, p)| p.same_table(&next)) {
                continue;
            }
            let word = if members[i].0 == "S" {
                op.to_string()
            } else {
                format!("{}{op}", members[i].0)
            };
            members.push((word, next));
            queue.push_back(members.len() - 1);
            if members.len() > 12 {
                return Err(Error::Verification(
                    "dual and transpose generate more than 12 tables".into(),
                ));
            }
        }
    }
    let dtd = s.dual()?.transpose()?.dual()?;
    let tdt = s.transpose()?.dual()?.transpose()?;
    Ok(KnuthOrbit {
        members,
        dtd_equals_tdt: dtd.same_table(&tdt),
    })
}

/// A Kantor chain with every lambda equal to 1 and every zeta zero.
pub fn trivial_kantor_chain(degrees: &[u32]) -> KantorChain {
    KantorChain {
        degrees: degrees.to_vec(),
        lambdas: vec![1; degrees.len()],
        zetas: vec![0; degrees.len()],
    }
}

/// Proper divisor chains m = d_0 > d_1 > ... with m / d_n odd.
pub fn admissible_chains(m: u32) -> Vec<Vec<u32>> {
    fn rec(m: u32, prev: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if (m / prev) % 2 == 1 {
            out.push(cur.clone());
        }
        for d in (1..prev).rev().filter(|&d| prev.is_multiple_of(d)) {
            cur.push(d);
            rec(m, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}
