//! Affine and projective geometry of K viewed as the plane AG(2, q).
//!
//! Lines are L(u, mu) = {x : T(ux) = mu} with u in S and mu in F; the line
//! L(u, mu) runs in direction u-bar. The projective closure adds one point
//! at infinity per direction, tagged by the circle index of that direction.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::gf::{ratio_mod, FieldElement, FieldParams, TowerElement};
use crate::niho::{bent_from_g, shift_by_linear, UnitCircleMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineLineK {
    pub u: TowerElement,
    pub mu: FieldElement,
}

impl AffineLineK {
    pub fn contains(&self, params: &FieldParams, x: TowerElement) -> bool {
        params.trace_rel(params.mul(self.u, x)) == self.mu
    }

    /// The q points of the line, in increasing index order.
    pub fn points(&self, params: &FieldParams) -> Vec<TowerElement> {
        params
            .k_elements()
            .filter(|&x| self.contains(params, x))
            .collect()
    }

    /// Circle index of the direction of the line.
    pub fn direction(&self, params: &FieldParams) -> usize {
        params
            .circle_index(params.conjugate(self.u))
            .expect("line normal lies on the unit circle")
    }
}

/// A point of the projective closure of K.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjectivePoint {
    Affine(TowerElement),
    /// The point at infinity of the given direction (a circle index).
    Infinite(usize),
}

impl ProjectivePoint {
    pub fn affine(self) -> Option<TowerElement> {
        match self {
            ProjectivePoint::Affine(x) => Some(x),
            ProjectivePoint::Infinite(_) => None,
        }
    }
}

/// Whether three distinct points of the projective closure lie on one line.
pub fn collinear(
    params: &FieldParams,
    a: ProjectivePoint,
    b: ProjectivePoint,
    c: ProjectivePoint,
) -> bool {
    use ProjectivePoint::*;
    let mut affine = Vec::with_capacity(3);
    let mut infinite = Vec::with_capacity(3);
    for p in [a, b, c] {
        match p {
            Affine(x) => affine.push(x),
            Infinite(w) => infinite.push(w),
        }
    }
    match infinite.len() {
        0 => params.direction(affine[1] + affine[0]) == params.direction(affine[2] + affine[0]),
        1 => params.direction(affine[1] + affine[0]) == Some(infinite[0]),
        2 => infinite[0] == infinite[1],
        _ => true,
    }
}

fn check_distinct(points: &[ProjectivePoint]) -> Result<()> {
    let mut seen = HashSet::with_capacity(points.len());
    for p in points {
        if !seen.insert(*p) {
            return Err(Error::InvalidSpec(format!("point {p:?} listed twice")));
        }
    }
    Ok(())
}

/// The lexicographically smallest triple of indices i < j < k whose points
/// are collinear.
pub fn collinear_triple(params: &FieldParams, points: &[ProjectivePoint]) -> Option<[usize; 3]> {
    let n = points.len();
    (0..n).into_par_iter().find_map_first(|i| {
        for j in i + 1..n {
            for k in j + 1..n {
                if collinear(params, points[i], points[j], points[k]) {
                    return Some([i, j, k]);
                }
            }
        }
        None
    })
}

/// Arc check on a point set of the given size: `Ok(None)` when no three
/// points are collinear, `Ok(Some(witness))` otherwise.
fn verify_arc_of_size(
    params: &FieldParams,
    points: &[ProjectivePoint],
    size: usize,
) -> Result<Option<[ProjectivePoint; 3]>> {
    if points.len() != size {
        return Err(Error::InvalidSpec(format!(
            "expected {size} points, got {}",
            points.len()
        )));
    }
    check_distinct(points)?;
    Ok(collinear_triple(params, points).map(|[i, j, k]| [points[i], points[j], points[k]]))
}

/// q+1 distinct points, no three collinear.
pub fn verify_oval(
    params: &FieldParams,
    points: &[ProjectivePoint],
) -> Result<Option<[ProjectivePoint; 3]>> {
    verify_arc_of_size(params, points, params.q() + 1)
}

/// q+2 distinct points, no three collinear.
pub fn verify_hyperoval(
    params: &FieldParams,
    points: &[ProjectivePoint],
) -> Result<Option<[ProjectivePoint; 3]>> {
    verify_arc_of_size(params, points, params.q() + 2)
}

/// Direction of the line joining 0 and p.
fn direction_from_origin(params: &FieldParams, p: ProjectivePoint) -> Option<usize> {
    match p {
        ProjectivePoint::Affine(x) => params.direction(x),
        ProjectivePoint::Infinite(w) => Some(w),
    }
}

/// Whether 0 is the nucleus of the oval: every line through 0 meets it in
/// exactly one point.
pub fn has_nucleus_zero(params: &FieldParams, points: &[ProjectivePoint]) -> bool {
    let mut seen = vec![false; params.q() + 1];
    for &p in points {
        match direction_from_origin(params, p) {
            Some(d) if !seen[d] => seen[d] = true,
            _ => return false,
        }
    }
    seen.iter().all(|&s| s)
}

/// The point completing an oval to a hyperoval, by scanning every point of
/// the projective closure.
pub fn find_nucleus(params: &FieldParams, points: &[ProjectivePoint]) -> Option<ProjectivePoint> {
    let on_oval: HashSet<_> = points.iter().copied().collect();
    let candidates = params
        .k_elements()
        .map(ProjectivePoint::Affine)
        .chain((0..=params.q()).map(ProjectivePoint::Infinite))
        .filter(|p| !on_oval.contains(p))
        .collect::<Vec<_>>();
    candidates.into_par_iter().find_first(|&c| {
        (0..points.len())
            .all(|i| (i + 1..points.len()).all(|j| !collinear(params, c, points[i], points[j])))
    })
}

/// An oval of the projective closure of K, verified at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Oval {
    points: Vec<ProjectivePoint>,
    nucleus: ProjectivePoint,
}

impl Oval {
    pub fn new(params: &FieldParams, points: Vec<ProjectivePoint>) -> Result<Self> {
        if let Some(w) = verify_oval(params, &points)? {
            return Err(Error::Verification(format!("collinear points {w:?}")));
        }
        let nucleus = if has_nucleus_zero(params, &points) {
            ProjectivePoint::Affine(TowerElement::ZERO)
        } else {
            find_nucleus(params, &points)
                .ok_or_else(|| Error::Verification("oval has no nucleus".into()))?
        };
        Ok(Oval { points, nucleus })
    }

    /// An affine oval given by its points.
    pub fn from_affine(params: &FieldParams, points: &[TowerElement]) -> Result<Self> {
        Self::new(
            params,
            points.iter().map(|&x| ProjectivePoint::Affine(x)).collect(),
        )
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn nucleus(&self) -> ProjectivePoint {
        self.nucleus
    }

    pub fn is_affine(&self) -> bool {
        self.points.iter().all(|p| p.affine().is_some())
    }

    /// The oval together with its nucleus.
    pub fn hyperoval(&self) -> Vec<ProjectivePoint> {
        let mut h = self.points.clone();
        h.push(self.nucleus);
        h
    }

    pub fn to_json(&self, params: &FieldParams) -> OvalJson {
        OvalJson::from_points(params, &self.points)
    }
}

/// Points as element indices, with points at infinity listed by the
/// element index of their direction on the unit circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OvalJson {
    pub m: u32,
    pub points: Vec<u64>,
    #[serde(default)]
    pub infinite: Vec<u64>,
}

impl OvalJson {
    pub fn from_points(params: &FieldParams, points: &[ProjectivePoint]) -> Self {
        let mut affine = Vec::new();
        let mut infinite = Vec::new();
        for &p in points {
            match p {
                ProjectivePoint::Affine(x) => affine.push(x.0),
                ProjectivePoint::Infinite(w) => infinite.push(params.unit_circle()[w].0),
            }
        }
        OvalJson {
            m: params.m(),
            points: affine,
            infinite,
        }
    }

    pub fn to_points(&self, params: &FieldParams) -> Result<Vec<ProjectivePoint>> {
        if self.m != params.m() {
            return Err(Error::Parse("point set m does not match field".into()));
        }
        let mut out = Vec::with_capacity(self.points.len() + self.infinite.len());
        for &x in &self.points {
            if x >= params.k_size() as u64 {
                return Err(Error::Parse(format!("element index {x} out of range")));
            }
            out.push(ProjectivePoint::Affine(TowerElement(x)));
        }
        for &w in &self.infinite {
            let j = params
                .circle_index(TowerElement(w))
                .ok_or_else(|| Error::Parse(format!("{w} is not on the unit circle")))?;
            out.push(ProjectivePoint::Infinite(j));
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineJson {
    pub u: u64,
    pub mu: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSetJson {
    pub m: u32,
    pub lines: Vec<LineJson>,
}

impl LineSetJson {
    pub fn from_lines(params: &FieldParams, lines: &[AffineLineK]) -> Self {
        LineSetJson {
            m: params.m(),
            lines: lines
                .iter()
                .map(|l| LineJson {
                    u: l.u.0,
                    mu: l.mu.0,
                })
                .collect(),
        }
    }

    pub fn to_lines(&self, params: &FieldParams) -> Result<Vec<AffineLineK>> {
        if self.m != params.m() {
            return Err(Error::Parse("line set m does not match field".into()));
        }
        self.lines
            .iter()
            .map(|l| {
                if params.circle_index(TowerElement(l.u)).is_none() {
                    return Err(Error::Parse(format!("{} is not on the unit circle", l.u)));
                }
                if l.mu as usize >= params.q() {
                    return Err(Error::Parse(format!("{} is not in F", l.mu)));
                }
                Ok(AffineLineK {
                    u: TowerElement(l.u),
                    mu: FieldElement(l.mu),
                })
            })
            .collect()
    }
}

/// Incidence bitsets of lines over the points of K.
fn incidence(params: &FieldParams, lines: &[AffineLineK]) -> Vec<Vec<u64>> {
    let words = params.k_size().div_ceil(64);
    lines
        .par_iter()
        .map(|l| {
            let mut bits = vec![0u64; words];
            for x in l.points(params) {
                bits[x.index() / 64] |= 1 << (x.index() % 64);
            }
            bits
        })
        .collect()
}

/// The lexicographically smallest triple of concurrent lines in the
/// projective closure: three lines through one affine point, or three
/// mutually parallel lines.
pub fn concurrent_triple(params: &FieldParams, lines: &[AffineLineK]) -> Option<[usize; 3]> {
    let inc = incidence(params, lines);
    let n = lines.len();
    (0..n).into_par_iter().find_map_first(|i| {
        for j in i + 1..n {
            let parallel_ij = lines[i].u == lines[j].u;
            for k in j + 1..n {
                let concurrent = if parallel_ij {
                    lines[k].u == lines[i].u
                } else {
                    inc[i]
                        .iter()
                        .zip(&inc[j])
                        .zip(&inc[k])
                        .any(|((a, b), c)| a & b & c != 0)
                };
                if concurrent {
                    return Some([i, j, k]);
                }
            }
        }
        None
    })
}

/// Number of lines through every point of K.
pub fn point_degrees(params: &FieldParams, lines: &[AffineLineK]) -> Vec<usize> {
    let mut deg = vec![0usize; params.k_size()];
    for l in lines {
        for x in l.points(params) {
            deg[x.index()] += 1;
        }
    }
    deg
}

/// q+1 pairwise non-parallel affine lines of K covering every point 0 or 2
/// times; the line at infinity is its nucleus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineOval {
    lines: Vec<AffineLineK>,
    covered: Vec<bool>,
}

impl LineOval {
    pub fn new(params: &FieldParams, lines: Vec<AffineLineK>) -> Result<Self> {
        if lines.len() != params.q() + 1 {
            return Err(Error::Verification(format!(
                "a line oval has {} lines, got {}",
                params.q() + 1,
                lines.len()
            )));
        }
        let deg = point_degrees(params, &lines);
        if let Some(x) = deg.iter().position(|&d| d != 0 && d != 2) {
            return Err(Error::Verification(format!(
                "point {x} lies on {} of the lines",
                deg[x]
            )));
        }
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if lines[i].u == lines[j].u {
                    return Err(Error::Verification(format!(
                        "lines {i} and {j} are parallel"
                    )));
                }
            }
        }
        let covered = deg.iter().map(|&d| d == 2).collect();
        Ok(LineOval { lines, covered })
    }

    pub fn lines(&self) -> &[AffineLineK] {
        &self.lines
    }

    pub fn contains_point(&self, x: TowerElement) -> bool {
        self.covered[x.index()]
    }

    /// E(O), the points covered by the lines, in increasing order.
    pub fn e_points(&self) -> Vec<TowerElement> {
        (0..self.covered.len())
            .filter(|&x| self.covered[x])
            .map(|x| TowerElement(x as u64))
            .collect()
    }

    pub fn e_size(&self) -> usize {
        self.covered.iter().filter(|&&c| c).count()
    }

    /// 1 + chi of E(O).
    pub fn dual_function(&self, params: &FieldParams) -> BooleanFunction {
        BooleanFunction::from_fn(params.n(), |x| !self.covered[x])
    }
}

/// The lines T(p x) = 1 for the given nonzero points p.
pub fn dual_points_to_lines(
    params: &FieldParams,
    points: &[TowerElement],
) -> Result<Vec<AffineLineK>> {
    points
        .iter()
        .map(|&p| {
            let polar = params
                .polar_decompose(p)
                .map_err(|_| Error::Domain("the origin has no dual line".into()))?;
            Ok(AffineLineK {
                u: polar.u,
                mu: params.f_inv(polar.lambda)?,
            })
        })
        .collect()
}

/// The points p with L = {x : T(p x) = 1}; a line through 0 has none.
pub fn dual_lines_to_points(
    params: &FieldParams,
    lines: &[AffineLineK],
) -> Result<Vec<TowerElement>> {
    lines
        .iter()
        .map(|l| {
            let inv = params
                .f_inv(l.mu)
                .map_err(|_| Error::Domain("a line through the origin has no dual point".into()))?;
            Ok(params.mul(params.embed(inv), l.u))
        })
        .collect()
}

/// The points u / g(u), with u / 0 read as the point at infinity in
/// direction u.
pub fn points_of_g(params: &FieldParams, g: &UnitCircleMap) -> Vec<ProjectivePoint> {
    params
        .unit_circle()
        .iter()
        .enumerate()
        .map(|(j, &u)| match params.f_inv(g.at(j)) {
            Ok(inv) => ProjectivePoint::Affine(params.mul(u, params.embed(inv))),
            Err(_) => ProjectivePoint::Infinite(j),
        })
        .collect()
}

/// The oval {u / g(u)} with nucleus 0 attached to a bent g.
pub fn oval_from_g(params: &FieldParams, g: &UnitCircleMap) -> Result<Oval> {
    if !bent_from_g(g, params).is_bent()? {
        return Err(Error::NotBent(
            "f(lambda u) = tr(lambda g(u)) is not bent".into(),
        ));
    }
    let points = points_of_g(params, g);
    if let Some(w) = verify_oval(params, &points)? {
        return Err(Error::Verification(format!("collinear points {w:?}")));
    }
    if !has_nucleus_zero(params, &points) {
        return Err(Error::Verification("0 is not the nucleus".into()));
    }
    Ok(Oval {
        points,
        nucleus: ProjectivePoint::Affine(TowerElement::ZERO),
    })
}

/// The shifts c for which g_c(u) = g(u) + T(cu) has no zero, that is
/// the points off E(O); each gives an affine oval.
pub fn affine_oval_shifts(params: &FieldParams, g: &UnitCircleMap) -> Vec<TowerElement> {
    params
        .k_elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter(|&c| shift_by_linear(g, c, params).zeros().is_empty())
        .collect()
}

/// A map S -> F* placing the point u rho(u) on the line uF.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoPolynomial {
    values: Vec<FieldElement>,
}

impl RhoPolynomial {
    pub fn new(params: &FieldParams, values: Vec<FieldElement>) -> Result<Self> {
        if values.len() != params.q() + 1 {
            return Err(Error::InvalidSpec(
                "rho needs one value per point of S".into(),
            ));
        }
        if let Some(j) = values.iter().position(|v| v.is_zero()) {
            return Err(Error::InvalidSpec(format!(
                "rho vanishes at circle index {j}"
            )));
        }
        Ok(RhoPolynomial { values })
    }

    pub fn at(&self, j: usize) -> FieldElement {
        self.values[j]
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn points(&self, params: &FieldParams) -> Vec<TowerElement> {
        params
            .unit_circle()
            .iter()
            .zip(&self.values)
            .map(|(&u, &r)| params.mul(u, params.embed(r)))
            .collect()
    }
}

/// rho(u) = 1 / g(u).
pub fn rho_from_g(params: &FieldParams, g: &UnitCircleMap) -> Result<RhoPolynomial> {
    if let Some(&j) = g.zeros().first() {
        return Err(Error::Domain(format!("g vanishes at circle index {j}")));
    }
    let values = g
        .values()
        .iter()
        .map(|&v| params.f_inv(v))
        .collect::<Result<_>>()?;
    RhoPolynomial::new(params, values)
}

pub fn g_from_rho(params: &FieldParams, rho: &RhoPolynomial) -> UnitCircleMap {
    UnitCircleMap::from_fn(params, |j, _| {
        params.f_inv(rho.at(j)).expect("rho is nowhere zero")
    })
}

fn project_value(params: &FieldParams, x: TowerElement, what: &str) -> Result<FieldElement> {
    params
        .project(x)
        .ok_or_else(|| Error::Verification(format!("{what} takes a value outside F")))
}

/// rho(x) = x^5 / (x^10 + x^6 + x^5 + x^4 + 1) on S.
pub fn subiaco_rho(params: &FieldParams) -> Result<RhoPolynomial> {
    let values = params
        .unit_circle()
        .iter()
        .map(|&u| {
            let p = |e| params.pow(u, e);
            let den = p(10) + p(6) + p(5) + p(4) + TowerElement::ONE;
            let v = params
                .div(p(5), den)
                .map_err(|_| Error::Domain("Subiaco denominator vanishes on S".into()))?;
            project_value(params, v, "Subiaco rho")
        })
        .collect::<Result<_>>()?;
    RhoPolynomial::new(params, values)
}

/// rho(x) = x (x^(1/3) + 1)^3 / (x + 1)^3 on S, with rho(1) = 1; needs m even.
pub fn adelaide_rho(params: &FieldParams) -> Result<RhoPolynomial> {
    let third = ratio_mod(1, 3, params.q() as u64 + 1)
        .ok_or_else(|| Error::Domain("x^(1/3) needs m even".into()))? as i64;
    let values = params
        .unit_circle()
        .iter()
        .enumerate()
        .map(|(j, &u)| {
            if u == TowerElement::ONE {
                return Ok(FieldElement::ONE);
            }
            let cube = |x: TowerElement| params.pow(x, 3);
            let num = params.mul(u, cube(params.circle_pow(j, third) + TowerElement::ONE));
            let v = params.div(num, cube(u + TowerElement::ONE))?;
            project_value(params, v, "Adelaide rho")
        })
        .collect::<Result<_>>()?;
    RhoPolynomial::new(params, values)
}

/// The points u + u^3 + u^-3 for u in S.
pub fn fisher_schmidt_points(params: &FieldParams) -> Vec<TowerElement> {
    (0..=params.q())
        .map(|j| params.unit_circle()[j] + params.circle_pow(j, 3) + params.circle_pow(j, -3))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Catalog {
    Subiaco,
    Adelaide,
    FisherSchmidt,
    #[serde(rename = "conic_like_S")]
    ConicLikeS,
}

impl Catalog {
    pub const ALL: [Catalog; 4] = [
        Catalog::Subiaco,
        Catalog::Adelaide,
        Catalog::FisherSchmidt,
        Catalog::ConicLikeS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Catalog::Subiaco => "subiaco",
            Catalog::Adelaide => "adelaide",
            Catalog::FisherSchmidt => "fisher_schmidt",
            Catalog::ConicLikeS => "conic_like_S",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown catalog entry `{s}`")))
    }

    /// The q+1 affine points of the entry; together with 0 they form the
    /// hyperoval.
    pub fn points(self, params: &FieldParams) -> Result<Vec<TowerElement>> {
        match self {
            Catalog::Subiaco => Ok(subiaco_rho(params)?.points(params)),
            Catalog::Adelaide => Ok(adelaide_rho(params)?.points(params)),
            Catalog::FisherSchmidt => Ok(fisher_schmidt_points(params)),
            Catalog::ConicLikeS => Ok(params.unit_circle().to_vec()),
        }
    }
}

/// f(x) = tr(x / v) for the point v of the oval on the line xF, and f(0) = 0.
/// The closed polynomial form is evaluated as well and must agree.
pub fn bent_from_oval(params: &FieldParams, oval: &Oval) -> Result<BooleanFunction> {
    if oval.nucleus() != ProjectivePoint::Affine(TowerElement::ZERO) {
        return Err(Error::InvalidSpec("the oval must have nucleus 0".into()));
    }
    let points: Vec<TowerElement> = oval
        .points()
        .iter()
        .map(|p| {
            p.affine()
                .ok_or_else(|| Error::InvalidSpec("the oval must be affine".into()))
        })
        .collect::<Result<_>>()?;
    let mut by_direction = vec![TowerElement::ZERO; params.q() + 1];
    for &v in &points {
        by_direction[params
            .direction(v)
            .expect("nucleus 0 excludes 0 from the oval")] = v;
    }
    let pointwise: Vec<bool> = (0..params.k_size())
        .into_par_iter()
        .map(|x| {
            let x = TowerElement(x as u64);
            let Some(d) = params.direction(x) else {
                return false;
            };
            let ratio = params
                .div(x, by_direction[d])
                .expect("oval points are nonzero");
            params.tr(params.project(ratio).expect("x and v are F-proportional"))
        })
        .collect();
    let poly = oval_polynomial_table(params, &points)?;
    if poly != pointwise {
        let x = (0..poly.len()).find(|&x| poly[x] != pointwise[x]).unwrap();
        return Err(Error::Verification(format!(
            "polynomial form disagrees with the pointwise rule at {x}"
        )));
    }
    BooleanFunction::from_table(params.n(), pointwise)
}

/// sum_v [(x^(q^2-q) - v^(q^2-q))^(q^2-1) + 1] sum_j (x/v)^(2^j), evaluated
/// literally in K.
fn oval_polynomial_table(params: &FieldParams, points: &[TowerElement]) -> Result<Vec<bool>> {
    let q = params.q() as u64;
    let q2 = q * q;
    let vs: Vec<(TowerElement, TowerElement)> = points
        .iter()
        .map(|&v| Ok((params.pow(v, q2 - q), params.inv(v)?)))
        .collect::<Result<_>>()?;
    (0..params.k_size())
        .into_par_iter()
        .map(|x| {
            let x = TowerElement(x as u64);
            let xp = params.pow(x, q2 - q);
            let mut acc = TowerElement::ZERO;
            for &(vp, vinv) in &vs {
                let sel = params.pow(xp + vp, q2 - 1) + TowerElement::ONE;
                if sel.is_zero() {
                    continue;
                }
                let mut t = params.mul(x, vinv);
                let mut s = TowerElement::ZERO;
                for _ in 0..params.m() {
                    s = s + t;
                    t = params.mul(t, t);
                }
                acc = acc + params.mul(sel, s);
            }
            match acc {
                TowerElement::ZERO => Ok(false),
                TowerElement::ONE => Ok(true),
                _ => Err(Error::Verification("polynomial form is not Boolean".into())),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::niho::{line_oval_from_g, NihoFamily, NihoSpec};
    use ProjectivePoint::{Affine, Infinite};

    fn params(m: u32) -> FieldParams {
        FieldParams::new(m).unwrap()
    }

    fn affine(points: &[TowerElement]) -> Vec<ProjectivePoint> {
        points.iter().map(|&x| Affine(x)).collect()
    }

    #[test]
    fn lines_have_q_points_and_parallels_are_disjoint() {
        let p = params(3);
        for &u in p.unit_circle() {
            for mu in p.f_elements() {
                let l = AffineLineK { u, mu };
                let pts = l.points(&p);
                assert_eq!(pts.len(), 8);
                let other = AffineLineK {
                    u,
                    mu: mu + FieldElement::ONE,
                };
                assert!(pts.iter().all(|&x| !other.contains(&p, x)));
                let d = l.direction(&p);
                assert!(pts[1..].iter().all(|&x| p.direction(x + pts[0]) == Some(d)));
            }
        }
    }

    #[test]
    fn collinearity_degenerate_cases() {
        let p = params(2);
        let line = AffineLineK {
            u: p.unit_circle()[1],
            mu: FieldElement::ONE,
        };
        let pts = line.points(&p);
        let d = line.direction(&p);
        assert!(collinear(
            &p,
            Affine(pts[0]),
            Affine(pts[1]),
            Affine(pts[2])
        ));
        assert!(collinear(&p, Affine(pts[0]), Affine(pts[1]), Infinite(d)));
        assert!(!collinear(
            &p,
            Affine(pts[0]),
            Affine(pts[1]),
            Infinite((d + 1) % 5)
        ));
        assert!(!collinear(&p, Affine(pts[0]), Infinite(0), Infinite(1)));
        assert!(collinear(&p, Infinite(0), Infinite(1), Infinite(2)));
        let off = p.k_elements().find(|&x| !line.contains(&p, x)).unwrap();
        assert!(!collinear(&p, Affine(pts[0]), Affine(pts[1]), Affine(off)));
    }

    #[test]
    fn unit_circle_is_an_oval_with_nucleus_zero() {
        for m in 2..=5 {
            let p = params(m);
            let oval = Oval::from_affine(&p, p.unit_circle()).unwrap();
            assert_eq!(oval.nucleus(), Affine(TowerElement::ZERO));
            assert!(verify_hyperoval(&p, &oval.hyperoval()).unwrap().is_none());
            assert_eq!(
                find_nucleus(&p, oval.points()),
                Some(Affine(TowerElement::ZERO))
            );
        }
    }

    #[test]
    fn points_on_a_line_fail_with_witness() {
        let p = params(3);
        let line = AffineLineK {
            u: TowerElement::ONE,
            mu: FieldElement::ZERO,
        };
        let mut pts = affine(&line.points(&p));
        pts.push(Infinite(line.direction(&p)));
        assert_eq!(
            verify_oval(&p, &pts).unwrap(),
            Some([pts[0], pts[1], pts[2]])
        );
        assert!(verify_oval(&p, &pts[..5]).is_err());
    }

    #[test]
    fn lemma_duality_on_random_point_sets() {
        use rand::{seq::SliceRandom, SeedableRng};
        let p = params(3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let nonzero: Vec<_> = p.k_elements().skip(1).collect();
        let mut ovals = 0;
        for _ in 0..300 {
            let pts: Vec<_> = nonzero.choose_multiple(&mut rng, 9).copied().collect();
            let lines = dual_points_to_lines(&p, &pts).unwrap();
            let is_oval = verify_oval(&p, &affine(&pts)).unwrap().is_none();
            assert_eq!(is_oval, concurrent_triple(&p, &lines).is_none());
            let nucleus_zero = is_oval && has_nucleus_zero(&p, &affine(&pts));
            assert_eq!(nucleus_zero, LineOval::new(&p, lines.clone()).is_ok());
            assert_eq!(dual_lines_to_points(&p, &lines).unwrap(), pts);
            ovals += is_oval as usize;
        }
        // conics through the sampled ovals: shifts of S
        for c in p.k_elements() {
            let pts: Vec<_> = p.unit_circle().iter().map(|&u| u + c).collect();
            if pts.iter().any(|x| x.is_zero()) {
                continue;
            }
            let lines = dual_points_to_lines(&p, &pts).unwrap();
            assert!(concurrent_triple(&p, &lines).is_none());
            ovals += 1;
        }
        assert!(ovals > 0);
    }

    #[test]
    fn collinear_points_give_concurrent_lines() {
        let p = params(3);
        let line = AffineLineK {
            u: p.unit_circle()[2],
            mu: FieldElement::ONE,
        };
        let mut pts = line.points(&p)[..3].to_vec();
        pts.extend(
            p.unit_circle()
                .iter()
                .copied()
                .filter(|x| !line.contains(&p, *x))
                .take(6),
        );
        let lines = dual_points_to_lines(&p, &pts).unwrap();
        assert_eq!(concurrent_triple(&p, &lines), Some([0, 1, 2]));
        assert!(dual_points_to_lines(&p, &[TowerElement::ZERO]).is_err());
    }

    #[test]
    fn unit_circle_lines_form_a_line_oval() {
        let p = params(3);
        let lines = dual_points_to_lines(&p, p.unit_circle()).unwrap();
        assert!(lines.iter().all(|l| l.mu == FieldElement::ONE));
        let lo = LineOval::new(&p, lines).unwrap();
        assert_eq!(lo.e_size(), 36);
    }

    #[test]
    fn ovals_of_bent_g_close_to_hyperovals() {
        for m in 2..=4 {
            let p = params(m);
            for family in NihoFamily::ALL {
                let spec = NihoSpec::normalized(family, &p);
                if spec.validate(&p).is_err() {
                    continue;
                }
                let g = spec.g(&p).unwrap();
                let oval = oval_from_g(&p, &g).unwrap();
                let infinite = oval
                    .points()
                    .iter()
                    .filter(|x| x.affine().is_none())
                    .count();
                assert_eq!(infinite, g.zeros().len());
                assert!(
                    verify_hyperoval(&p, &oval.hyperoval()).unwrap().is_none(),
                    "{family:?} m={m}"
                );
            }
        }
    }

    #[test]
    fn constant_one_gives_unit_circle() {
        let p = params(3);
        let g = UnitCircleMap::constant(&p, FieldElement::ONE);
        let oval = oval_from_g(&p, &g).unwrap();
        assert_eq!(oval.points(), affine(p.unit_circle()).as_slice());
        assert!(oval_from_g(&p, &UnitCircleMap::constant(&p, FieldElement::ZERO)).is_err());
    }

    #[test]
    fn affine_shifts_are_the_complement_of_e() {
        let p = params(3);
        let g = NihoSpec::normalized(NihoFamily::Binomial3, &p)
            .g(&p)
            .unwrap();
        let e = line_oval_from_g(&g, &p).unwrap();
        let shifts = affine_oval_shifts(&p, &g);
        assert_eq!(shifts.len(), 8 * 7 / 2);
        for &c in &shifts {
            assert!(!e.contains_point(c));
            let oval = oval_from_g(&p, &shift_by_linear(&g, c, &p)).unwrap();
            assert!(oval.is_affine());
        }
    }

    #[test]
    fn rho_and_g_are_inverse() {
        let p = params(3);
        let one = UnitCircleMap::constant(&p, FieldElement::ONE);
        let rho = rho_from_g(&p, &one).unwrap();
        assert!(rho.values().iter().all(|&v| v == FieldElement::ONE));
        assert_eq!(g_from_rho(&p, &rho), one);
        assert!(rho_from_g(&p, &UnitCircleMap::constant(&p, FieldElement::ZERO)).is_err());
    }

    #[test]
    fn subiaco_identity() {
        let p = params(5);
        let rho = subiaco_rho(&p).unwrap();
        for (j, &u) in p.unit_circle().iter().enumerate() {
            let ubar = p.conjugate(u);
            let rhs = TowerElement::ONE + p.pow(u, 5) + p.pow(ubar, 5) + u + ubar;
            assert_eq!(p.embed(p.f_inv(rho.at(j)).unwrap()), rhs);
        }
    }

    #[test]
    fn adelaide_identity() {
        let p = params(4);
        let rho = adelaide_rho(&p).unwrap();
        let two_thirds = ratio_mod(2, 3, 17).unwrap() as i64;
        for (j, &u) in p.unit_circle().iter().enumerate() {
            let t = p.circle_pow(j, two_thirds);
            let rhs = TowerElement::ONE + t + p.conjugate(t) + u + p.conjugate(u);
            assert_eq!(p.embed(p.f_inv(rho.at(j)).unwrap()), rhs);
        }
        assert!(adelaide_rho(&params(3)).is_err());
    }

    #[test]
    fn fisher_schmidt_is_a_hyperoval() {
        for m in 3..=5 {
            let p = params(m);
            let mut pts = affine(&fisher_schmidt_points(&p));
            pts.push(Affine(TowerElement::ZERO));
            assert!(verify_hyperoval(&p, &pts).unwrap().is_none(), "m={m}");
        }
    }

    #[test]
    fn bent_from_unit_circle_is_the_quadratic_family() {
        let p = params(3);
        let oval = Oval::from_affine(&p, p.unit_circle()).unwrap();
        let f = bent_from_oval(&p, &oval).unwrap();
        let g = NihoSpec::normalized(NihoFamily::Quadratic, &p)
            .g(&p)
            .unwrap();
        assert_eq!(f, bent_from_g(&g, &p));
    }

    #[test]
    fn bent_from_catalog_ovals() {
        for (catalog, m) in [
            (Catalog::FisherSchmidt, 3),
            (Catalog::FisherSchmidt, 4),
            (Catalog::Subiaco, 5),
            (Catalog::Adelaide, 4),
        ] {
            let p = params(m);
            let oval = Oval::from_affine(&p, &catalog.points(&p).unwrap()).unwrap();
            assert_eq!(oval.nucleus(), Affine(TowerElement::ZERO));
            assert!(
                bent_from_oval(&p, &oval).unwrap().is_bent().unwrap(),
                "{catalog:?}"
            );
        }
    }

    #[test]
    fn oval_round_trip_through_shifted_g() {
        let p = params(3);
        for family in [NihoFamily::Binomial3, NihoFamily::LeanderR] {
            let g = NihoSpec::normalized(family, &p).g(&p).unwrap();
            let f = bent_from_g(&g, &p);
            let d = crate::niho::k_duality(&p);
            for c in affine_oval_shifts(&p, &g) {
                let oval = oval_from_g(&p, &shift_by_linear(&g, c, &p)).unwrap();
                assert_eq!(
                    bent_from_oval(&p, &oval).unwrap(),
                    f.add_affine(&d, c.index(), false)
                );
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let p = params(3);
        let g = NihoSpec::normalized(NihoFamily::Binomial3, &p)
            .g(&p)
            .unwrap();
        let oval = oval_from_g(&p, &g).unwrap();
        let json = oval.to_json(&p);
        let mut back = json.to_points(&p).unwrap();
        let mut orig = oval.points().to_vec();
        back.sort();
        orig.sort();
        assert_eq!(back, orig);
        let lines = crate::niho::lines_of_g(&g, &p);
        let lj = LineSetJson::from_lines(&p, &lines);
        assert_eq!(lj.to_lines(&p).unwrap(), lines);
    }
}
