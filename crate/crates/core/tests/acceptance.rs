//! Acceptance run: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ovalbent::boolfn::{BooleanFunction, Duality};
use ovalbent::geometry::{
    adelaide_rho, affine_oval_shifts, bent_from_oval, fisher_schmidt_points, oval_from_g,
    point_degrees, points_of_g, subiaco_rho, verify_hyperoval, Oval, ProjectivePoint,
};
use ovalbent::gf::{ratio_mod, FieldElement, FieldParams, TowerElement};
use ovalbent::linalg::BitMatrix;
use ovalbent::niho::{
    bent_from_g, dual_budaghyan, dual_product_formula, k_duality, line_oval_from_g, lines_of_g,
    shift_by_linear, NihoFamily, NihoSpec,
};
use ovalbent::spread::{knuth_orbit, KantorChain, Prequasifield};
use ovalbent::spreadbent::{action_linear_shift, dot_form, sqrt_g, square_star_g, SpreadBentSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// The family instances of the first criterion.
fn niho_cases() -> Vec<(NihoFamily, u32)> {
    let mut out = Vec::new();
    out.extend((2..=6).map(|m| (NihoFamily::Quadratic, m)));
    out.extend((3..=6).map(|m| (NihoFamily::Binomial3, m)));
    out.extend([4, 6].map(|m| (NihoFamily::Binomial16, m)));
    out.extend([3, 5].map(|m| (NihoFamily::LeanderR, m)));
    out
}

fn criterion_1() -> Check {
    for (family, m) in niho_cases() {
        let p = FieldParams::new(m).map_err(err)?;
        let spec = NihoSpec::normalized(family, &p);
        let f = spec.polynomial(&p).map_err(err)?.truth_table(&p);
        let spectrum = f.walsh_transform(&k_duality(&p));
        let target = 1i64 << m;
        ensure(spectrum.values().iter().all(|w| w.abs() == target), || {
            format!("{} m={m}: some |W(b)| != 2^m", family.name())
        })?;
        let g = spec.g(&p).map_err(err)?;
        ensure(bent_from_g(&g, &p) == f, || {
            format!("{} m={m}: g does not reproduce f", family.name())
        })?;
    }
    Ok(format!(
        "{} family instances have flat spectra",
        niho_cases().len()
    ))
}

fn criterion_2() -> Check {
    let mut budaghyan = 0;
    for (family, m) in niho_cases() {
        let p = FieldParams::new(m).map_err(err)?;
        let spec = NihoSpec::normalized(family, &p);
        let walsh = spec
            .polynomial(&p)
            .map_err(err)?
            .truth_table(&p)
            .dual(&k_duality(&p))
            .map_err(err)?;
        let product = dual_product_formula(&spec.g(&p).map_err(err)?, &p).map_err(err)?;
        ensure(walsh == product, || {
            format!("{} m={m}: Walsh dual != product formula", family.name())
        })?;
        if family == NihoFamily::LeanderR {
            let closed = dual_budaghyan(&spec, &p).map_err(err)?;
            ensure(walsh == closed, || {
                format!("leander_r m={m}: Walsh dual != closed form")
            })?;
            budaghyan += 1;
        }
    }
    Ok(format!(
        "{} product-formula matches, {budaghyan} closed-form matches",
        niho_cases().len()
    ))
}

fn criterion_3() -> Check {
    for (family, m) in niho_cases() {
        let p = FieldParams::new(m).map_err(err)?;
        let g = NihoSpec::normalized(family, &p).g(&p).map_err(err)?;
        let degrees = point_degrees(&p, &lines_of_g(&g, &p));
        ensure(degrees.iter().all(|&d| d == 0 || d == 2), || {
            format!("{} m={m}: a point on 1 or 3+ lines", family.name())
        })?;
        let oval = line_oval_from_g(&g, &p).map_err(err)?;
        let q = p.q();
        ensure(oval.e_size() == q * (q + 1) / 2, || {
            format!("{} m={m}: |E| = {}", family.name(), oval.e_size())
        })?;
    }
    Ok("every point on 0 or 2 lines, |E(O)| = q(q+1)/2".into())
}

fn criterion_4() -> Check {
    let mut n = 0;
    for (family, m) in niho_cases().into_iter().filter(|&(_, m)| m <= 5) {
        let p = FieldParams::new(m).map_err(err)?;
        let g = NihoSpec::normalized(family, &p).g(&p).map_err(err)?;
        let mut points = points_of_g(&p, &g);
        points.push(ProjectivePoint::Affine(TowerElement::ZERO));
        ensure(
            verify_hyperoval(&p, &points).map_err(err)?.is_none(),
            || format!("{} m={m}: three collinear points", family.name()),
        )?;
        oval_from_g(&p, &g).map_err(err)?;
        let q = p.q();
        let shifts = affine_oval_shifts(&p, &g).len();
        ensure(shifts == q * (q - 1) / 2, || {
            format!("{} m={m}: {shifts} affine translates", family.name())
        })?;
        n += 1;
    }
    Ok(format!(
        "{n} hyperovals verified, q(q-1)/2 affine translates each"
    ))
}

fn criterion_5() -> Check {
    let p = FieldParams::new(5).map_err(err)?;
    let rho = subiaco_rho(&p).map_err(err)?;
    for (j, &u) in p.unit_circle().iter().enumerate() {
        let ubar = p.conjugate(u);
        let rhs = TowerElement::ONE + p.pow(u, 5) + p.pow(ubar, 5) + u + ubar;
        ensure(p.embed(p.f_inv(rho.at(j)).map_err(err)?) == rhs, || {
            format!("Subiaco identity fails at u index {j}")
        })?;
    }
    let p = FieldParams::new(4).map_err(err)?;
    let rho = adelaide_rho(&p).map_err(err)?;
    let two_thirds = ratio_mod(2, 3, p.q() as u64 + 1).ok_or("2/3 undefined")? as i64;
    for (j, &u) in p.unit_circle().iter().enumerate() {
        let t = p.circle_pow(j, two_thirds);
        let rhs = TowerElement::ONE + t + p.conjugate(t) + u + p.conjugate(u);
        ensure(p.embed(p.f_inv(rho.at(j)).map_err(err)?) == rhs, || {
            format!("Adelaide identity fails at u index {j}")
        })?;
    }
    for m in 3..=5 {
        let p = FieldParams::new(m).map_err(err)?;
        let affine = fisher_schmidt_points(&p);
        let mut points: Vec<_> = affine.iter().map(|&x| ProjectivePoint::Affine(x)).collect();
        points.push(ProjectivePoint::Affine(TowerElement::ZERO));
        ensure(
            verify_hyperoval(&p, &points).map_err(err)?.is_none(),
            || format!("Fisher-Schmidt m={m}: collinear triple"),
        )?;
        let oval = Oval::from_affine(&p, &affine).map_err(err)?;
        let f = bent_from_oval(&p, &oval).map_err(err)?;
        ensure(f.is_bent().map_err(err)?, || {
            format!("Fisher-Schmidt m={m}: bent_from_oval is not bent")
        })?;
    }
    Ok("Subiaco m=5, Adelaide m=4, Fisher-Schmidt m=3,4,5".into())
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut runs = 0;
    for (family, m) in niho_cases() {
        let p = FieldParams::new(m).map_err(err)?;
        let g = NihoSpec::normalized(family, &p).g(&p).map_err(err)?;
        let f = bent_from_g(&g, &p);
        let d = k_duality(&p);
        let e = line_oval_from_g(&g, &p).map_err(err)?;
        for _ in 0..20 {
            let c = TowerElement(rng.gen_range(0..p.k_size() as u64));
            let dual = f.add_affine(&d, c.index(), false).dual(&d).map_err(err)?;
            let expect =
                BooleanFunction::from_fn(p.n(), |x| !e.contains_point(TowerElement(x as u64) + c));
            ensure(dual == expect, || {
                format!("{} m={m}: shift by {c:?}", family.name())
            })?;
            let shifted = line_oval_from_g(&shift_by_linear(&g, c, &p), &p).map_err(err)?;
            ensure(shifted.dual_function(&p) == dual, || {
                format!("{} m={m}: shifted line oval", family.name())
            })?;
            runs += 1;
        }
    }
    for spec in bivariate_cases()? {
        let size = spec.size() as u64;
        let base = spec.line_oval().map_err(err)?;
        for _ in 0..20 {
            let (u, v) = (rng.gen_range(0..size), rng.gen_range(0..size));
            let (_, f, oval) = action_linear_shift(&spec, u, v).map_err(err)?;
            let dual = f
                .dual(&ovalbent::spreadbent::bivariate_duality(spec.carrier()))
                .map_err(err)?;
            ensure(dual == oval.swapped_complement(), || {
                format!("bivariate shift ({u}, {v}): dual mismatch")
            })?;
            let s = size as usize;
            let translated = (0..s * s).all(|i| {
                let (x, y) = ((i % s) as u64, (i / s) as u64);
                oval.contains(x, y) == base.contains(x ^ v, y ^ u)
            });
            ensure(translated, || {
                format!("bivariate shift ({u}, {v}): E(O) is not translated")
            })?;
            runs += 1;
        }
    }
    Ok(format!("{runs} random shifts"))
}

fn kantor_commutative_transpose() -> ovalbent::Result<Prequasifield> {
    let s = Prequasifield::kantor(
        3,
        KantorChain {
            degrees: vec![1],
            lambdas: vec![1],
            zetas: vec![0],
        },
    )?;
    s.commutative_from_symplectic()?.transpose()
}

fn bivariate_cases() -> std::result::Result<Vec<SpreadBentSpec>, String> {
    let mut out = Vec::new();
    for m in [3, 4] {
        let q = Prequasifield::field(m).map_err(err)?;
        let g = sqrt_g(q.carrier());
        out.push(SpreadBentSpec::new(q, g, 0).map_err(err)?);
    }
    let q = kantor_commutative_transpose().map_err(err)?;
    let g = square_star_g(&q).map_err(err)?;
    out.push(SpreadBentSpec::new(q, g, 0).map_err(err)?);
    let q = Prequasifield::luneburg(3).map_err(err)?;
    let g = q.sqrt_diagonal_map().map_err(err)?;
    out.push(SpreadBentSpec::new(q, g, 0).map_err(err)?);
    Ok(out)
}

fn criterion_7() -> Check {
    let names = ["field m=3", "field m=4", "Kantor q=8", "Lüneburg m=3"];
    for (spec, name) in bivariate_cases()?.iter().zip(names) {
        let chain = spec.equivalence_chain().map_err(err)?;
        ensure(chain.agree && chain.walsh_bent, || {
            format!("{name}: verdicts {chain:?}")
        })?;
        let walsh = spec.dual_walsh().map_err(err)?;
        ensure(spec.dual_product().map_err(err)? == walsh, || {
            format!("{name}: product dual differs")
        })?;
        ensure(spec.dual_chi_swap().map_err(err)? == walsh, || {
            format!("{name}: chi-swap dual differs")
        })?;
    }
    Ok("field m=3,4, Kantor q=8, Lüneburg m=3: verdicts and dual routes agree".into())
}

fn criterion_8() -> Check {
    let cases = bivariate_cases()?;
    for spec in &cases[..2] {
        let dot = dot_form(spec.carrier());
        ensure(spec.bent_bivariate().map_err(err)? == dot, || {
            "field case: f != tr(xy)".into()
        })?;
        ensure(spec.dual_walsh().map_err(err)? == dot, || {
            "field case: dual != tr(xy)".into()
        })?;
    }
    let lun = &cases[3];
    let e = lun.line_oval().map_err(err)?.indicator();
    ensure(e == dot_form(lun.carrier()).complement(), || {
        "Lüneburg: E(O) is not the zero set of the form".into()
    })?;
    let f = lun.bent_bivariate().map_err(err)?;
    ensure(f.degree() == 2, || {
        format!("Lüneburg: degree {}", f.degree())
    })?;
    let rank = f.quadratic_rank().map_err(err)?;
    ensure(rank == 12, || format!("Lüneburg: quadratic rank {rank}"))?;
    Ok("tr(xy) is self-dual; Lüneburg degree 2, quadratic rank 12".into())
}

fn criterion_9() -> Check {
    let start = Instant::now();
    let kantor = |zeta| {
        Prequasifield::kantor(
            3,
            KantorChain {
                degrees: vec![1],
                lambdas: vec![1],
                zetas: vec![zeta],
            },
        )
    };
    let f = Prequasifield::field(3).map_err(err)?;
    let field = f.carrier().field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (a, b) = (
        random_invertible(&mut rng, 3),
        random_invertible(&mut rng, 3),
    );
    let isotope = Prequasifield::from_fn(f.carrier().clone(), |x, z| {
        field.mul(a.apply(x), b.apply(z))
    })
    .map_err(err)?;
    let mut cases = vec![f.clone(), isotope];
    for zeta in 0..8 {
        cases.push(kantor(zeta).map_err(err)?);
    }
    cases.push(
        kantor(0)
            .map_err(err)?
            .commutative_from_symplectic()
            .map_err(err)?,
    );
    for (i, q) in cases.iter().enumerate() {
        let t = q.transpose().map_err(err)?;
        ensure(t.transpose().map_err(err)?.same_table(q), || {
            format!("case {i}: transpose is not an involution")
        })?;
        ensure(q.is_symplectic() == t.same_table(q), || {
            format!("case {i}: symplectic != (Q = Q^t)")
        })?;
        let orbit = knuth_orbit(q).map_err(err)?;
        ensure(orbit.dtd_equals_tdt && orbit.members.len() <= 6, || {
            format!("case {i}: orbit {}", orbit.members.len())
        })?;
        for (_, member) in &orbit.members {
            for next in [
                member.dual().map_err(err)?,
                member.transpose().map_err(err)?,
            ] {
                ensure(
                    orbit.members.iter().any(|(_, p)| p.same_table(&next)),
                    || format!("case {i}: orbit not closed"),
                )?;
            }
        }
        let r = q.validate(0);
        if r.is_symplectic {
            let back = q
                .commutative_from_symplectic()
                .map_err(err)?
                .symplectic_from_commutative()
                .map_err(err)?;
            ensure(back.same_table(q), || {
                format!("case {i}: symplectic round trip")
            })?;
        }
        if r.is_commutative {
            let back = q
                .symplectic_from_commutative()
                .map_err(err)?
                .commutative_from_symplectic()
                .map_err(err)?;
            ensure(back.same_table(q), || {
                format!("case {i}: commutative round trip")
            })?;
        }
    }
    let per_case = start.elapsed() / cases.len() as u32;
    ensure(per_case < Duration::from_secs(1), || {
        format!("{per_case:?} per case")
    })?;
    Ok(format!(
        "{} presemifields at q=8, {per_case:.1?} per case",
        cases.len()
    ))
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

fn property_suites() -> Check {
    let p = FieldParams::new(3).map_err(err)?;
    for x in p.k_elements() {
        let s = p.sqrt(x);
        ensure(p.mul(s, s) == x, || {
            format!("sqrt round trip fails at {x:?}")
        })?;
    }
    for a in p.f_elements() {
        ensure(p.f_mul(p.f_sqrt(a), p.f_sqrt(a)) == a, || {
            "sqrt in F".into()
        })?;
    }
    ensure(FieldElement::ONE == p.f_sqrt(FieldElement::ONE), || {
        "sqrt(1)".into()
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..50 {
        let k = 2 * rng.gen_range(1..=4u32);
        let f = BooleanFunction::from_fn(k, |_| rng.gen());
        let w = f.walsh_hadamard();
        let energy: i64 = w.values().iter().map(|v| v * v).sum();
        ensure(energy == 1i64 << (2 * k), || {
            format!("Parseval fails for k={k}")
        })?;
        let m = k / 2;
        let d = Duality::dot(k);
        let l = random_invertible(&mut rng, k as usize);
        let c = rng.gen_range(0..1usize << k);
        let base = BooleanFunction::from_fn(k, |i| {
            ((i & ((1 << m) - 1)) & (i >> m)).count_ones() % 2 == 1
        });
        let g = base
            .compose_linear(&l)
            .map_err(err)?
            .add_affine(&d, c, rng.gen());
        let dual = g.dual(&d).map_err(err)?;
        ensure(dual.dual(&d).map_err(err)? == g, || {
            "dual is not an involution".into()
        })?;
    }
    Ok("sqrt round trip, Parseval and dual involution".into())
}

fn main() -> ExitCode {
    let total = Instant::now();
    let criteria: [Criterion; 9] = [
        ("Niho families are bent", criterion_1),
        ("dual routes agree", criterion_2),
        ("line-oval law", criterion_3),
        ("hyperovals and affine translates", criterion_4),
        ("catalog identities", criterion_5),
        ("shifts translate E(O)", criterion_6),
        ("bivariate chain", criterion_7),
        ("field and Lüneburg examples", criterion_8),
        ("spread algebra", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why} ({took:.2?})", i + 1);
            }
        }
    }
    let props = property_suites();
    let elapsed = total.elapsed();
    match props {
        Ok(detail) if failed == 0 && elapsed < Duration::from_secs(120) => {
            println!("criterion 10: PASS all suites in {elapsed:.2?}; {detail}")
        }
        Ok(_) => {
            failed += 1;
            println!("criterion 10: FAIL earlier criteria failed or run took {elapsed:.2?}");
        }
        Err(why) => {
            failed += 1;
            println!("criterion 10: FAIL {why}");
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
