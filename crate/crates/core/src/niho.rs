//! Niho bent functions in univariate form.
//!
//! A Boolean function on K that is linear on every element uF of the
//! Desarguesian spread is determined by a map g: S -> F through
//! f(lambda u) = tr(lambda g(u)). It is bent iff the lines L(u, g(u)) form a
//! line oval, and its dual is 1 + chi of the points covered by that oval.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolfn::{BooleanFunction, Duality};
use crate::error::{Error, Result};
use crate::geometry::{AffineLineK, LineOval};
use crate::gf::{gcd, mod_inverse, ratio_mod, FieldElement, FieldParams, TowerElement};

/// A map S -> F stored in the canonical order of the unit circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitCircleMap {
    values: Vec<FieldElement>,
}

impl UnitCircleMap {
    pub fn new(params: &FieldParams, values: Vec<FieldElement>) -> Result<Self> {
        if values.len() != params.q() + 1 {
            return Err(Error::InvalidSpec(format!(
                "g needs {} values, got {}",
                params.q() + 1,
                values.len()
            )));
        }
        Ok(UnitCircleMap { values })
    }

    pub fn constant(params: &FieldParams, c: FieldElement) -> Self {
        UnitCircleMap {
            values: vec![c; params.q() + 1],
        }
    }

    pub fn from_fn(params: &FieldParams, f: impl Fn(usize, TowerElement) -> FieldElement) -> Self {
        let values = params
            .unit_circle()
            .iter()
            .enumerate()
            .map(|(j, &u)| f(j, u))
            .collect();
        UnitCircleMap { values }
    }

    /// g at the j-th element of the unit circle.
    pub fn at(&self, j: usize) -> FieldElement {
        self.values[j]
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn zeros(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&j| self.values[j].is_zero())
            .collect()
    }

    /// Rows `u_index,g_index` in circle order.
    pub fn to_csv(&self, params: &FieldParams) -> String {
        params
            .unit_circle()
            .iter()
            .zip(&self.values)
            .map(|(u, g)| format!("{},{}\n", u.0, g.0))
            .collect()
    }

    pub fn parse_csv(params: &FieldParams, text: &str) -> Result<Self> {
        let mut values = vec![None; params.q() + 1];
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (u, g) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected `u,g`, got `{line}`")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(e.to_string()))
            };
            let u = TowerElement(parse(u)?);
            let g = parse(g)?;
            let j = params
                .circle_index(u)
                .ok_or_else(|| Error::Parse(format!("{} is not on the unit circle", u.0)))?;
            if g >= params.q() as u64 {
                return Err(Error::Parse(format!("g value {g} is not in F")));
            }
            values[j] = Some(FieldElement(g as u32));
        }
        let values = values
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Parse("g table does not cover the unit circle".into()))?;
        Self::new(params, values)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NihoFamily {
    /// Tr(a x^d1), d1 = (2^m-1)/2 + 1.
    Quadratic,
    /// Tr(a1 x^d1 + a2 x^d2), d2 = 3(2^m-1) + 1.
    #[serde(rename = "binomial_3")]
    Binomial3,
    /// Tr(a1 x^d1 + a2 x^d2), d2 = (2^m-1)/6 + 1, m even.
    #[serde(rename = "binomial_1_6")]
    Binomial16,
    /// Tr(a^2 x^(2^m+1) + (a + a-bar) sum_i x^(d_i)), 2^r d_i = (2^m-1) i + 2^r.
    LeanderR,
}

impl NihoFamily {
    pub const ALL: [NihoFamily; 4] = [
        NihoFamily::Quadratic,
        NihoFamily::Binomial3,
        NihoFamily::Binomial16,
        NihoFamily::LeanderR,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NihoFamily::Quadratic => "quadratic",
            NihoFamily::Binomial3 => "binomial_3",
            NihoFamily::Binomial16 => "binomial_1_6",
            NihoFamily::LeanderR => "leander_r",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown Niho family `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NihoSpec {
    pub family: NihoFamily,
    /// a for the quadratic and Leander families, alpha_1 for binomials.
    pub a: TowerElement,
    /// alpha_2 for binomials; ignored otherwise.
    pub alpha2: TowerElement,
    pub r: u32,
}

/// JSON descriptor `{family, m, a_index, r?, alpha2_index?}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NihoDescriptor {
    pub family: NihoFamily,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_index: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha2_index: Option<u64>,
}

/// Smallest-index element e of K with e + e-bar = 1.
pub fn smallest_unit_trace(params: &FieldParams) -> TowerElement {
    params
        .k_elements()
        .find(|&e| params.trace_rel(e) == FieldElement::ONE)
        .expect("the relative trace is surjective")
}

/// The Niho exponent d = (2^m - 1) s + 1 mod 2^n - 1 for s = num/den taken
/// modulo 2^m + 1.
pub fn niho_exponent(params: &FieldParams, num: i64, den: i64) -> Result<u64> {
    let q = params.q() as u64;
    let s = ratio_mod(num, den, q + 1).ok_or_else(|| {
        Error::Domain(format!("{den} is not invertible modulo 2^m+1 = {}", q + 1))
    })?;
    let group = params.k_size() as u64 - 1;
    Ok(((q - 1) as u128 * s as u128 % group as u128) as u64 + 1)
}

/// Tr(sum_i c_i x^(d_i)) over K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NihoPolynomial {
    pub terms: Vec<(TowerElement, u64)>,
}

impl NihoPolynomial {
    pub fn eval(&self, params: &FieldParams, x: TowerElement) -> bool {
        let y = self.terms.iter().fold(TowerElement::ZERO, |acc, &(c, d)| {
            acc + params.mul(c, params.pow(x, d))
        });
        params.trace_abs(y)
    }

    pub fn truth_table(&self, params: &FieldParams) -> BooleanFunction {
        let values: Vec<bool> = (0..params.k_size() as u64)
            .into_par_iter()
            .map(|x| self.eval(params, TowerElement(x)))
            .collect();
        BooleanFunction::from_table(params.n(), values).expect("table has 2^n entries")
    }

    /// g with f(lambda u) = tr(lambda g(u)). Every exponent must be
    /// congruent to a power of two modulo 2^m - 1.
    pub fn g_map(&self, params: &FieldParams) -> Result<UnitCircleMap> {
        let q = params.q() as u64;
        let m = params.m();
        let mut shifts = Vec::with_capacity(self.terms.len());
        for &(_, d) in &self.terms {
            let j = (0..m)
                .find(|&j| d % (q - 1) == (1u64 << j) % (q - 1))
                .ok_or_else(|| Error::InvalidSpec(format!("{d} is not a Niho exponent")))?;
            shifts.push(j);
        }
        // Tr(c lambda^(2^j) u^d) = tr(lambda T(c u^d)^(2^-j))
        Ok(UnitCircleMap::from_fn(params, |_, u| {
            self.terms
                .iter()
                .zip(&shifts)
                .fold(FieldElement::ZERO, |acc, (&(c, d), &j)| {
                    let t = params.trace_rel(params.mul(c, params.pow(u, d)));
                    let t =
                        FieldElement(params.field_f().frobenius(t.0 as u64, (m - j) % m) as u32);
                    acc + t
                })
        }))
    }
}

impl NihoSpec {
    /// The spec with the paper's normalization: a = smallest element with
    /// a + a-bar = 1, alpha_2 = 1, r = 2 for Leander.
    pub fn normalized(family: NihoFamily, params: &FieldParams) -> Self {
        NihoSpec {
            family,
            a: smallest_unit_trace(params),
            alpha2: TowerElement::ONE,
            r: 2,
        }
    }

    pub fn from_descriptor(desc: &NihoDescriptor, params: &FieldParams) -> Result<Self> {
        if desc.m != params.m() {
            return Err(Error::InvalidSpec(
                "descriptor m does not match field".into(),
            ));
        }
        let mut spec = Self::normalized(desc.family, params);
        let elem = |i: u64| -> Result<TowerElement> {
            if i >= params.k_size() as u64 {
                return Err(Error::InvalidSpec(format!(
                    "element index {i} out of range"
                )));
            }
            Ok(TowerElement(i))
        };
        if let Some(a) = desc.a_index {
            spec.a = elem(a)?;
        }
        if let Some(a2) = desc.alpha2_index {
            spec.alpha2 = elem(a2)?;
        }
        if let Some(r) = desc.r {
            spec.r = r;
        }
        spec.validate(params)?;
        Ok(spec)
    }

    pub fn descriptor(&self, params: &FieldParams) -> NihoDescriptor {
        let binomial = matches!(self.family, NihoFamily::Binomial3 | NihoFamily::Binomial16);
        NihoDescriptor {
            family: self.family,
            m: params.m(),
            a_index: Some(self.a.0),
            r: (self.family == NihoFamily::LeanderR).then_some(self.r),
            alpha2_index: binomial.then_some(self.alpha2.0),
        }
    }

    pub fn validate(&self, params: &FieldParams) -> Result<()> {
        let m = params.m();
        let ta = params.trace_rel(self.a);
        match self.family {
            NihoFamily::Quadratic => {
                if self.a.is_zero() {
                    return Err(Error::InvalidSpec("quadratic family needs a != 0".into()));
                }
            }
            NihoFamily::Binomial3 | NihoFamily::Binomial16 => {
                if self.family == NihoFamily::Binomial16 && m % 2 == 1 {
                    return Err(Error::InvalidSpec(format!(
                        "binomial_1_6 needs m even, got m = {m}"
                    )));
                }
                if self.a.is_zero() || self.alpha2.is_zero() {
                    return Err(Error::InvalidSpec(
                        "binomial coefficients must be nonzero".into(),
                    ));
                }
                let lhs = params.f_mul(ta, ta);
                let rhs = params.norm_rel(self.alpha2);
                if lhs != rhs {
                    return Err(Error::InvalidSpec(
                        "binomial coefficients violate (a1 + a1-bar)^2 = a2 a2-bar".into(),
                    ));
                }
            }
            NihoFamily::LeanderR => {
                let r = self.r;
                if !(1 < r && r < m) || gcd(r as u64, m as u64) != 1 {
                    return Err(Error::InvalidSpec(format!(
                        "leander_r needs 1 < r < m and gcd(r, m) = 1, got r = {r}, m = {m}"
                    )));
                }
                if ta.is_zero() {
                    return Err(Error::InvalidSpec("leander_r needs a + a-bar != 0".into()));
                }
            }
        }
        Ok(())
    }

    /// Whether a + a-bar = 1 and alpha_2 = 1, the case with closed-form g.
    pub fn is_normalized(&self, params: &FieldParams) -> bool {
        let unit = params.trace_rel(self.a) == FieldElement::ONE;
        match self.family {
            NihoFamily::Binomial3 | NihoFamily::Binomial16 => {
                unit && self.alpha2 == TowerElement::ONE
            }
            _ => unit,
        }
    }

    /// The defining trace polynomial.
    pub fn polynomial(&self, params: &FieldParams) -> Result<NihoPolynomial> {
        self.validate(params)?;
        let d1 = niho_exponent(params, 1, 2)?;
        let terms = match self.family {
            NihoFamily::Quadratic => vec![(self.a, d1)],
            NihoFamily::Binomial3 => {
                vec![(self.a, d1), (self.alpha2, niho_exponent(params, 3, 1)?)]
            }
            NihoFamily::Binomial16 => {
                vec![(self.a, d1), (self.alpha2, niho_exponent(params, 1, 6)?)]
            }
            NihoFamily::LeanderR => {
                let q = params.q() as u64;
                let coef = params.embed(params.trace_rel(self.a));
                let mut terms = vec![(params.mul(self.a, self.a), q + 1)];
                for i in 1..(1i64 << (self.r - 1)) {
                    terms.push((coef, niho_exponent(params, i, 1 << self.r)?));
                }
                terms
            }
        };
        Ok(NihoPolynomial { terms })
    }

    /// g on the unit circle; closed forms in the normalized case, otherwise
    /// read off the trace polynomial term by term.
    pub fn g(&self, params: &FieldParams) -> Result<UnitCircleMap> {
        self.validate(params)?;
        let ta = params.trace_rel(self.a);
        let binomial_closed = |e_num: i64, e_den: i64| -> Result<UnitCircleMap> {
            let e = ratio_mod(e_num, e_den, params.q() as u64 + 1)
                .ok_or_else(|| Error::Domain("exponent not invertible modulo 2^m+1".into()))?;
            Ok(UnitCircleMap::from_fn(params, |j, _| {
                let u = params.circle_pow(j, e as i64);
                FieldElement::ONE + params.trace_rel(u)
            }))
        };
        match self.family {
            NihoFamily::Quadratic => Ok(UnitCircleMap::constant(params, ta)),
            NihoFamily::Binomial3 if self.is_normalized(params) => binomial_closed(5, 1),
            NihoFamily::Binomial16 if self.is_normalized(params) => binomial_closed(2, 3),
            NihoFamily::Binomial3 | NihoFamily::Binomial16 => {
                self.polynomial(params)?.g_map(params)
            }
            NihoFamily::LeanderR => {
                let g = leander_closed_form(params, self.r)?;
                Ok(UnitCircleMap::from_fn(params, |j, _| {
                    params.f_mul(ta, g.at(j))
                }))
            }
        }
    }
}

/// (u + u-bar + u^(e-1) + u-bar^(e-1)) / (u^e + u-bar^e) with e = 2^(1-r)
/// mod 2^m+1, and g(1) = 1.
fn leander_closed_form(params: &FieldParams, r: u32) -> Result<UnitCircleMap> {
    let modulus = params.q() as u64 + 1;
    let e = mod_inverse(1 << (r - 1), modulus)
        .ok_or_else(|| Error::Domain("2^(r-1) not invertible modulo 2^m+1".into()))?
        as i64;
    let mut values = Vec::with_capacity(params.q() + 1);
    for (j, &u) in params.unit_circle().iter().enumerate() {
        if u == TowerElement::ONE {
            values.push(FieldElement::ONE);
            continue;
        }
        let num = params.trace_rel(u) + params.trace_rel(params.circle_pow(j, e - 1));
        let den = params.trace_rel(params.circle_pow(j, e));
        values.push(params.f_div(num, den)?);
    }
    UnitCircleMap::new(params, values)
}

/// f(0) = 0 and f(lambda u) = tr(lambda g(u)).
pub fn bent_from_g(g: &UnitCircleMap, params: &FieldParams) -> BooleanFunction {
    let polar = params.polar_table();
    let values: Vec<bool> = (0..params.k_size())
        .into_par_iter()
        .map(|x| {
            if x == 0 {
                return false;
            }
            let (lambda, j) = polar[x];
            params.tr(params.f_mul(lambda, g.at(j)))
        })
        .collect();
    BooleanFunction::from_table(params.n(), values).expect("table has 2^n entries")
}

/// The inner product Tr(b x) on K.
pub fn k_duality(params: &FieldParams) -> Duality {
    Duality::field_trace(params.field_k())
}

pub fn lines_of_g(g: &UnitCircleMap, params: &FieldParams) -> Vec<AffineLineK> {
    params
        .unit_circle()
        .iter()
        .enumerate()
        .map(|(j, &u)| AffineLineK { u, mu: g.at(j) })
        .collect()
}

/// The line oval {L(u, g(u))}; fails with a witness point when some point
/// lies on a number of lines other than 0 or 2.
pub fn line_oval_from_g(g: &UnitCircleMap, params: &FieldParams) -> Result<LineOval> {
    LineOval::new(params, lines_of_g(g, params))
        .map_err(|e| Error::NotBent(format!("g does not give a line oval: {e}")))
}

fn require_bent(g: &UnitCircleMap, params: &FieldParams) -> Result<()> {
    if !bent_from_g(g, params).is_bent()? {
        return Err(Error::NotBent(
            "f(lambda u) = tr(lambda g(u)) is not bent".into(),
        ));
    }
    Ok(())
}

/// prod_u (T(xu) + g(u))^(q-1), with y^(q-1) realized as [y != 0].
pub fn dual_product_formula(g: &UnitCircleMap, params: &FieldParams) -> Result<BooleanFunction> {
    require_bent(g, params)?;
    let circle = params.unit_circle();
    let values: Vec<bool> = (0..params.k_size() as u64)
        .into_par_iter()
        .map(|x| {
            let x = TowerElement(x);
            circle
                .iter()
                .enumerate()
                .all(|(j, &u)| params.trace_rel(params.mul(x, u)) != g.at(j))
        })
        .collect();
    Ok(BooleanFunction::from_table(params.n(), values).expect("table has 2^n entries"))
}

/// Tr((e(1 + x + x-bar) + e^(2^(n-r)) + x-bar) (1 + x + x-bar)^(1/(2^r - 1)))
/// for the smallest-index e with e + e-bar = 1 and r = 2.
pub fn dual_budaghyan(spec: &NihoSpec, params: &FieldParams) -> Result<BooleanFunction> {
    dual_budaghyan_with(spec, params, smallest_unit_trace(params))
}

pub fn dual_budaghyan_with(
    spec: &NihoSpec,
    params: &FieldParams,
    e: TowerElement,
) -> Result<BooleanFunction> {
    if spec.family != NihoFamily::LeanderR {
        return Err(Error::InvalidSpec(
            "closed-form dual applies to leander_r only".into(),
        ));
    }
    spec.validate(params)?;
    if params.trace_rel(spec.a) != FieldElement::ONE {
        return Err(Error::InvalidSpec(
            "closed-form dual needs a + a-bar = 1".into(),
        ));
    }
    if params.trace_rel(e) != FieldElement::ONE {
        return Err(Error::InvalidSpec("e must satisfy e + e-bar = 1".into()));
    }
    if spec.r != 2 {
        return Err(Error::Domain(
            "closed-form dual is available for r = 2 only".into(),
        ));
    }
    let q = params.q() as u64;
    // Cube root outside F: the root in F times a primitive cube root of unity.
    let root = mod_inverse(3, q - 1).ok_or_else(|| Error::Domain("3 divides 2^m - 1".into()))?;
    let omega = params
        .k_elements()
        .find(|&w| w != TowerElement::ONE && params.pow(w, 3) == TowerElement::ONE)
        .expect("3 divides 2^n - 1");
    let r = spec.r;
    let e_frob = TowerElement(params.field_k().frobenius(e.0, params.n() - r));
    let values: Vec<bool> = (0..params.k_size() as u64)
        .into_par_iter()
        .map(|x| {
            let x = TowerElement(x);
            let xbar = params.conjugate(x);
            let base = TowerElement::ONE + x + xbar;
            let base_f = params.project(base).expect("1 + T(x) lies in F");
            let power = params.mul(params.embed(params.f_pow(base_f, root)), omega);
            let left = params.mul(e, base) + e_frob + xbar;
            params.trace_abs(params.mul(left, power))
        })
        .collect();
    Ok(BooleanFunction::from_table(params.n(), values).expect("table has 2^n entries"))
}

/// g_c(u) = g(u) + T(cu): the map of f + Tr(cx).
pub fn shift_by_linear(g: &UnitCircleMap, c: TowerElement, params: &FieldParams) -> UnitCircleMap {
    UnitCircleMap::from_fn(params, |j, u| g.at(j) + params.trace_rel(params.mul(c, u)))
}

/// |{u in S : g(u) + T(ub) = 0}| for every b in K, indexed by b.
pub fn line_counts(g: &UnitCircleMap, params: &FieldParams) -> Vec<usize> {
    (0..params.k_size() as u64)
        .into_par_iter()
        .map(|b| {
            let b = TowerElement(b);
            params
                .unit_circle()
                .iter()
                .enumerate()
                .filter(|&(j, &u)| params.trace_rel(params.mul(u, b)) == g.at(j))
                .count()
        })
        .collect()
}

/// Recovers g from a line oval of K: no two of its lines are parallel, so
/// each u in S carries exactly one line L(u, mu_u).
pub fn g_from_lines(lines: &[AffineLineK], params: &FieldParams) -> Result<UnitCircleMap> {
    let mut values = vec![None; params.q() + 1];
    for line in lines {
        let j = params
            .circle_index(line.u)
            .ok_or_else(|| Error::InvalidSpec("line normal is not on the unit circle".into()))?;
        if values[j].replace(line.mu).is_some() {
            return Err(Error::InvalidSpec("two parallel lines".into()));
        }
    }
    let values = values
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidSpec("lines miss a parallel class".into()))?;
    UnitCircleMap::new(params, values)
}
