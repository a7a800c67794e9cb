//! Bivariate bent functions that are linear on the components of a spread.
//!
//! For a prequasifield Q on V, a function with f(0, y) = B(mu, y) and
//! f(x, x o z) = B(G(z), x) is bent iff its line set {x = mu} together with
//! {y = x * z + G(z)} is a line oval of the plane of the transpose Q^t.
//! Truth tables use the index x + |V| y.

use rayon::prelude::*;
use serde::Serialize;

use crate::boolfn::{BooleanFunction, Duality};
use crate::error::{Error, Result};
use crate::linalg::BitMatrix;
use crate::spread::{Carrier, Prequasifield, Shape};

#[derive(Clone, Debug)]
pub struct SpreadBentSpec {
    pub q: Prequasifield,
    /// G as a table over the carrier.
    pub g: Vec<u64>,
    pub mu: u64,
}

/// The inner product B(a, x) + B(b, y) on V x V.
pub fn bivariate_duality(c: &Carrier) -> Duality {
    let dim = c.dim();
    let half = Duality::from_basis_masks(
        dim,
        &(0..dim).map(|i| c.form_mask(1 << i)).collect::<Vec<_>>(),
    );
    Duality::bivariate(&half)
}

fn is_permutation(values: &[u64], size: usize) -> Option<u64> {
    let mut seen = vec![false; size];
    values.iter().find(|&&v| v as usize >= size || std::mem::replace(&mut seen[v as usize], true)).copied()
}

/// Whether some value of `values` is hit a number of times other than 0
/// or 2; returns the first such value.
fn two_to_one_witness(values: impl Iterator<Item = u64>, size: usize) -> Option<(u64, usize)> {
    let mut count = vec![0usize; size];
    for v in values {
        count[v as usize] += 1;
    }
    (0..size)
        .find(|&a| count[a] != 0 && count[a] != 2)
        .map(|a| (a as u64, count[a]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub g_bijective: bool,
    pub two_to_one: bool,
    pub holds: bool,
    pub witness: Option<String>,
}

impl SpreadBentSpec {
    pub fn new(q: Prequasifield, g: Vec<u64>, mu: u64) -> Result<Self> {
        let size = q.size();
        if g.len() != size {
            return Err(Error::InvalidSpec(format!(
                "G needs {size} values, got {}",
                g.len()
            )));
        }
        if g.iter().chain([&mu]).any(|&v| v as usize >= size) {
            return Err(Error::InvalidSpec("G or mu outside the carrier".into()));
        }
        Ok(SpreadBentSpec { q, g, mu })
    }

    pub fn carrier(&self) -> &Carrier {
        self.q.carrier()
    }

    pub fn size(&self) -> usize {
        self.q.size()
    }

    /// The spec with mu = 0 describing f + B(mu, y): G(z) + mu * z.
    pub fn normalize(&self) -> Result<SpreadBentSpec> {
        if self.mu == 0 {
            return Ok(self.clone());
        }
        let qt = self.q.transpose()?;
        let g = (0..self.size() as u64)
            .map(|z| self.g[z as usize] ^ qt.mul(self.mu, z))
            .collect();
        SpreadBentSpec::new(self.q.clone(), g, 0)
    }

    /// f(0, y) = B(mu, y) and f(x, x o z) = B(G(z), x).
    pub fn bent_bivariate(&self) -> Result<BooleanFunction> {
        let c = self.carrier();
        let size = self.size();
        let dim = c.dim();
        let mut table = vec![None; size * size];
        for y in 0..size {
            table[y * size] = Some(c.form(self.mu, y as u64));
        }
        let rows: Vec<Vec<(usize, bool)>> = (1..size as u64)
            .into_par_iter()
            .map(|x| {
                (0..size as u64)
                    .map(|z| {
                        let y = self.q.mul(x, z);
                        (
                            x as usize + size * y as usize,
                            c.form(self.g[z as usize], x),
                        )
                    })
                    .collect()
            })
            .collect();
        for (idx, v) in rows.into_iter().flatten() {
            if table[idx].replace(v).is_some() {
                return Err(Error::InvalidSpec(format!(
                    "z -> x o z is not a bijection at (x, y) = ({}, {})",
                    idx % size,
                    idx / size
                )));
            }
        }
        let table = table
            .into_iter()
            .map(|v| v.expect("every point is assigned once"))
            .collect();
        BooleanFunction::from_table(2 * dim, table)
    }

    /// G is a bijection and z -> G(z) + b * z is 2-to-1 for every b != 0,
    /// after normalizing mu to 0.
    pub fn bent_criterion(&self) -> Result<CriterionReport> {
        let spec = self.normalize()?;
        let size = self.size();
        let qt = self.q.transpose()?;
        let bij = is_permutation(&spec.g, size);
        let two = (1..size as u64).into_par_iter().find_map_first(|b| {
            two_to_one_witness(
                (0..size as u64).map(|z| spec.g[z as usize] ^ qt.mul(b, z)),
                size,
            )
            .map(|(a, n)| format!("G(z) + {b} * z takes the value {a} {n} times"))
        });
        let witness = match (bij, &two) {
            (Some(v), _) => Some(format!("G takes the value {v} twice")),
            (None, Some(w)) => Some(w.clone()),
            (None, None) => None,
        };
        Ok(CriterionReport {
            g_bijective: bij.is_none(),
            two_to_one: two.is_none(),
            holds: witness.is_none(),
            witness,
        })
    }

    /// The lines {x = mu} and {y = x * z + G(z)} in the plane of Q^t,
    /// verified to form a line oval.
    pub fn line_oval(&self) -> Result<BivariateLineOval> {
        let qt = self.q.transpose()?;
        BivariateLineOval::new(&qt, self.mu, self.g.clone())
    }

    /// Dual: y = mu, or x = y * z + G(z) for some z, gives 0.
    pub fn dual_product(&self) -> Result<BooleanFunction> {
        let size = self.size();
        let qt = self.q.transpose()?;
        let mut zero = vec![false; size * size];
        for x in 0..size {
            zero[x + size * self.mu as usize] = true;
        }
        for y in 0..size as u64 {
            for z in 0..size as u64 {
                let x = qt.mul(y, z) ^ self.g[z as usize];
                zero[x as usize + size * y as usize] = true;
            }
        }
        BooleanFunction::from_table(
            2 * self.carrier().dim(),
            zero.into_iter().map(|z| !z).collect(),
        )
    }

    pub fn dual_walsh(&self) -> Result<BooleanFunction> {
        self.bent_bivariate()?
            .dual(&bivariate_duality(self.carrier()))
    }

    /// 1 + chi of E(O) with the coordinates swapped.
    pub fn dual_chi_swap(&self) -> Result<BooleanFunction> {
        Ok(self.line_oval()?.swapped_complement())
    }

    pub fn dual(&self, method: DualMethod) -> Result<BooleanFunction> {
        match method {
            DualMethod::Walsh => self.dual_walsh(),
            DualMethod::Product => self.dual_product(),
            DualMethod::ChiSwap => self.dual_chi_swap(),
        }
    }

    /// Walsh bentness, the criterion and the line-oval test, each computed
    /// on its own.
    pub fn equivalence_chain(&self) -> Result<ChainReport> {
        let walsh_bent = self.bent_bivariate()?.is_bent()?;
        let criterion = self.bent_criterion()?.holds;
        let line_oval = self.line_oval().is_ok();
        Ok(ChainReport {
            walsh_bent,
            criterion,
            line_oval,
            agree: walsh_bent == criterion && criterion == line_oval,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub walsh_bent: bool,
    pub criterion: bool,
    pub line_oval: bool,
    pub agree: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualMethod {
    Walsh,
    Product,
    ChiSwap,
}

/// The vertical line x = c and the lines y = x * z + G(z) of the plane of a
/// prequasifield (V, +, *).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateLineOval {
    pub vertical: u64,
    pub g: Vec<u64>,
    size: usize,
    covered: Vec<bool>,
}

impl BivariateLineOval {
    pub fn new(star: &Prequasifield, vertical: u64, g: Vec<u64>) -> Result<Self> {
        let size = star.size();
        let mut count = vec![0u8; size * size];
        for y in 0..size {
            count[vertical as usize + size * y] += 1;
        }
        for (z, &gz) in g.iter().enumerate() {
            for x in 0..size as u64 {
                let y = star.mul(x, z as u64) ^ gz;
                let c = &mut count[x as usize + size * y as usize];
                *c = c.saturating_add(1);
            }
        }
        if let Some(i) = count.iter().position(|&c| c != 0 && c != 2) {
            return Err(Error::Verification(format!(
                "point (x, y) = ({}, {}) lies on {} of the lines",
                i % size,
                i / size,
                count[i]
            )));
        }
        let covered = count.iter().map(|&c| c == 2).collect();
        Ok(BivariateLineOval {
            vertical,
            g,
            size,
            covered,
        })
    }

    pub fn contains(&self, x: u64, y: u64) -> bool {
        self.covered[x as usize + self.size * y as usize]
    }

    pub fn e_size(&self) -> usize {
        self.covered.iter().filter(|&&c| c).count()
    }

    /// E(O) as a function of (x, y).
    pub fn indicator(&self) -> BooleanFunction {
        let k = 2 * self.size.trailing_zeros();
        BooleanFunction::from_fn(k, |i| self.covered[i])
    }

    /// (x, y) -> 1 + chi_E(y, x), by index remapping.
    pub fn swapped_complement(&self) -> BooleanFunction {
        let k = 2 * self.size.trailing_zeros();
        let s = self.size;
        BooleanFunction::from_fn(k, |i| !self.covered[i / s + s * (i % s)])
    }
}

/// f + B(u, x) + B(v, y), together with its line oval, which is the
/// translate of the original by (v, u).
pub fn action_linear_shift(
    spec: &SpreadBentSpec,
    u: u64,
    v: u64,
) -> Result<(SpreadBentSpec, BooleanFunction, BivariateLineOval)> {
    let qt = spec.q.transpose()?;
    let g = (0..spec.size() as u64)
        .map(|z| spec.g[z as usize] ^ qt.mul(v, z) ^ u)
        .collect();
    let shifted = SpreadBentSpec::new(spec.q.clone(), g, spec.mu ^ v)?;
    let f = shifted.bent_bivariate()?;
    let oval = shifted.line_oval()?;
    Ok((shifted, f, oval))
}

/// f_c(x, y) = f(x, y + x o c), whose G is z -> G(z + c). Needs a
/// presemifield.
pub fn action_rho(spec: &SpreadBentSpec, c: u64) -> Result<SpreadBentSpec> {
    if !spec.q.validate(0).is_presemifield {
        return Err(Error::InvalidSpec(
            "the collineation rho_c needs a presemifield".into(),
        ));
    }
    let g = (0..spec.size() as u64)
        .map(|z| spec.g[(z ^ c) as usize])
        .collect();
    SpreadBentSpec::new(spec.q.clone(), g, spec.mu)
}

/// The rho_c with G_c(0) = 0, for a bijective G.
pub fn normalize_g_zero(spec: &SpreadBentSpec) -> Result<SpreadBentSpec> {
    let c = spec
        .g
        .iter()
        .position(|&v| v == 0)
        .ok_or_else(|| Error::InvalidSpec("G has no zero".into()))?;
    action_rho(spec, c as u64)
}

/// Whether phi is an automorphism of Q: invertible with
/// phi(x o z) = phi(x) o phi(z).
pub fn is_automorphism(q: &Prequasifield, phi: &BitMatrix) -> bool {
    let n = q.size() as u64;
    phi.nrows() == q.carrier().dim() as usize
        && phi.is_invertible()
        && (0..n)
            .into_par_iter()
            .all(|x| (0..n).all(|z| phi.apply(q.mul(x, z)) == q.mul(phi.apply(x), phi.apply(z))))
}

/// f'(x, y) = f(phi^-1 x, phi^-1 y) for an automorphism phi of Q. Returns
/// the new spec: G' = (phi^-1)^* G phi^-1 and mu' = (phi^-1)^* mu.
pub fn action_aut(spec: &SpreadBentSpec, phi: &BitMatrix) -> Result<SpreadBentSpec> {
    if !is_automorphism(&spec.q, phi) {
        return Err(Error::InvalidSpec("phi is not an automorphism of Q".into()));
    }
    let c = spec.carrier();
    let inv = phi.inverse().expect("automorphisms are invertible");
    let inv_adj = c.adjoint(&inv);
    let g = (0..spec.size() as u64)
        .map(|z| inv_adj.apply(spec.g[inv.apply(z) as usize]))
        .collect();
    SpreadBentSpec::new(spec.q.clone(), g, inv_adj.apply(spec.mu))
}

/// (x, y) -> (phi^* ^-1 x, phi^* ^-1 y) applied to E(O).
pub fn aut_image_indicator(
    oval: &BivariateLineOval,
    c: &Carrier,
    phi: &BitMatrix,
) -> BooleanFunction {
    let m = c
        .adjoint(phi)
        .inverse()
        .expect("automorphisms are invertible");
    let size = c.size();
    let mut out = vec![false; size * size];
    for x in 0..size as u64 {
        for y in 0..size as u64 {
            if oval.contains(x, y) {
                out[m.apply(x) as usize + size * m.apply(y) as usize] = true;
            }
        }
    }
    BooleanFunction::from_table(2 * c.dim(), out).expect("table has |V|^2 entries")
}

/// psi(x, y) = (sigma^k x, sigma^k y) A with A = [[alpha, beta], [gamma, delta]]
/// acting on row vectors of F x F.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gl2Element {
    pub frobenius: u32,
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
    pub delta: u64,
}

impl Gl2Element {
    pub fn det(&self, c: &Carrier) -> u64 {
        let f = c.field();
        f.mul(self.alpha, self.delta) ^ f.mul(self.beta, self.gamma)
    }

    pub fn apply(&self, c: &Carrier, x: u64, y: u64) -> (u64, u64) {
        let f = c.field();
        let (x, y) = (
            f.frobenius(x, self.frobenius),
            f.frobenius(y, self.frobenius),
        );
        (
            f.mul(self.alpha, x) ^ f.mul(self.gamma, y),
            f.mul(self.beta, x) ^ f.mul(self.delta, y),
        )
    }

    pub fn inverse_apply(&self, c: &Carrier, x: u64, y: u64) -> Result<(u64, u64)> {
        let f = c.field();
        let d = f.inv(self.det(c)).map_err(|_| Error::Singular)?;
        let (a, b) = (
            f.mul(d, f.mul(self.delta, x) ^ f.mul(self.gamma, y)),
            f.mul(d, f.mul(self.beta, x) ^ f.mul(self.alpha, y)),
        );
        let back = f.degree() - self.frobenius % f.degree();
        Ok((f.frobenius(a, back), f.frobenius(b, back)))
    }
}

/// For the field spread: f' = f o psi^-1 and its dual point set
/// det(A)^-1 psi(E(O)).
pub fn action_gl2(
    spec: &SpreadBentSpec,
    psi: &Gl2Element,
) -> Result<(BooleanFunction, BooleanFunction)> {
    let c = spec.carrier();
    if c.shape() != Shape::Flat || !matches!(spec.q.rule(), crate::spread::MulRule::Field) {
        return Err(Error::InvalidSpec(
            "GL(2, q) acts on the field spread only".into(),
        ));
    }
    let f = c.field();
    let det_inv = f.inv(psi.det(c)).map_err(|_| Error::Singular)?;
    let base = spec.bent_bivariate()?;
    let oval = spec.line_oval()?;
    let size = c.size();
    let mut table = vec![false; size * size];
    let mut e = vec![false; size * size];
    for x in 0..size as u64 {
        for y in 0..size as u64 {
            let (a, b) = psi.inverse_apply(c, x, y)?;
            table[x as usize + size * y as usize] = base.eval(a as usize + size * b as usize);
            if oval.contains(x, y) {
                let (a, b) = psi.apply(c, x, y);
                let (a, b) = (f.mul(det_inv, a), f.mul(det_inv, b));
                e[a as usize + size * b as usize] = true;
            }
        }
    }
    let k = 2 * c.dim();
    Ok((
        BooleanFunction::from_table(k, table)?,
        BooleanFunction::from_table(k, e)?,
    ))
}

/// Reads mu and G off a function that is linear on every spread component.
pub fn spec_from_function(q: &Prequasifield, f: &BooleanFunction) -> Result<SpreadBentSpec> {
    let c = q.carrier();
    let size = c.size();
    let dim = c.dim() as usize;
    if f.k() != 2 * c.dim() {
        return Err(Error::InvalidSpec(
            "function size does not match the spread".into(),
        ));
    }
    let gram_inv = c.gram().inverse().expect("the form is nondegenerate");
    let solve = |bits: u64| gram_inv.apply(bits);
    let mu = solve((0..dim).fold(0, |acc, i| acc | (f.eval(size << i) as u64) << i));
    let g = (0..size as u64)
        .map(|z| {
            solve((0..dim).fold(0, |acc, i| {
                let x = 1u64 << i;
                acc | (f.eval(x as usize + size * q.mul(x, z) as usize) as u64) << i
            }))
        })
        .collect();
    let spec = SpreadBentSpec::new(q.clone(), g, mu)?;
    if spec.bent_bivariate()? != *f {
        return Err(Error::Verification(
            "the function is not linear on every spread component".into(),
        ));
    }
    Ok(spec)
}

/// The spec whose line oval in the plane of Q^t is {x = c} and
/// {y = x * z + G(z)}.
pub fn spec_from_line_oval(q: &Prequasifield, oval: &BivariateLineOval) -> Result<SpreadBentSpec> {
    SpreadBentSpec::new(q.clone(), oval.g.clone(), oval.vertical)
}

/// G(z) = z * z in the transpose.
pub fn square_star_g(q: &Prequasifield) -> Result<Vec<u64>> {
    let qt = q.transpose()?;
    Ok(q.carrier().elements().map(|z| qt.mul(z, z)).collect())
}

/// Componentwise square root.
pub fn sqrt_g(c: &Carrier) -> Vec<u64> {
    let f = c.field();
    c.elements()
        .map(|z| {
            let (a, b) = c.split(z);
            match c.shape() {
                Shape::Flat => f.sqrt(z),
                Shape::Pair => c.join(f.sqrt(a), f.sqrt(b)),
            }
        })
        .collect()
}

/// G is a permutation and x -> G(x) + x o b is 2-to-1 for every b != 0.
pub fn is_o_polynomial(q: &Prequasifield, g: &[u64]) -> bool {
    let size = q.size();
    g.len() == size
        && is_permutation(g, size).is_none()
        && (1..size as u64).into_par_iter().all(|b| {
            two_to_one_witness((0..size as u64).map(|x| g[x as usize] ^ q.mul(x, b)), size)
                .is_none()
        })
}

/// For a symplectic Q and an o-polynomial G of Q^d, the bent spec (Q, G, 0).
pub fn corollary_symplectic(q: &Prequasifield, g: Vec<u64>) -> Result<SpreadBentSpec> {
    if !q.validate(0).is_symplectic {
        return Err(Error::InvalidSpec(
            "Q is not a symplectic prequasifield".into(),
        ));
    }
    let qd = q.dual()?;
    if !is_o_polynomial(&qd, &g) {
        return Err(Error::InvalidSpec(
            "G is not an o-polynomial of the dual".into(),
        ));
    }
    SpreadBentSpec::new(q.clone(), g, 0)
}

/// The quadratic form q(x, y) = B(x, y), whose zero set is S(q).
pub fn dot_form(c: &Carrier) -> BooleanFunction {
    let size = c.size();
    BooleanFunction::from_fn(2 * c.dim(), |i| {
        c.form((i % size) as u64, (i / size) as u64)
    })
}
