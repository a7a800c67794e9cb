//! End-to-end checks across modules on random shifts and actions.

use ovalbent::boolfn::BooleanFunction;
use ovalbent::gf::{FieldParams, TowerElement};
use ovalbent::niho::{
    bent_from_g, dual_product_formula, g_from_lines, k_duality, line_oval_from_g, lines_of_g,
    shift_by_linear, NihoFamily, NihoSpec,
};
use ovalbent::spread::{KantorChain, Prequasifield};
use ovalbent::spreadbent::{
    action_gl2, action_linear_shift, bivariate_duality, corollary_symplectic, spec_from_function,
    sqrt_g, DualMethod, Gl2Element, SpreadBentSpec,
};
use proptest::prelude::*;

fn field_spec(m: u32) -> SpreadBentSpec {
    let q = Prequasifield::field(m).unwrap();
    let g = sqrt_g(q.carrier());
    SpreadBentSpec::new(q, g, 0).unwrap()
}

fn family() -> impl Strategy<Value = (NihoFamily, u32)> {
    prop_oneof![
        (2u32..=4).prop_map(|m| (NihoFamily::Quadratic, m)),
        (3u32..=4).prop_map(|m| (NihoFamily::Binomial3, m)),
        Just((NihoFamily::Binomial16, 4)),
        Just((NihoFamily::LeanderR, 3)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shifted_niho_function_keeps_its_line_oval((fam, m) in family(), c in any::<u64>()) {
        let p = FieldParams::new(m).unwrap();
        let g = NihoSpec::normalized(fam, &p).g(&p).unwrap();
        let c = TowerElement(c % p.k_size() as u64);
        let h = shift_by_linear(&g, c, &p);
        let f = bent_from_g(&h, &p);
        prop_assert!(f.is_bent().unwrap());
        prop_assert_eq!(f.dual(&k_duality(&p)).unwrap(), dual_product_formula(&h, &p).unwrap());
        prop_assert_eq!(g_from_lines(&lines_of_g(&h, &p), &p).unwrap(), h.clone());
        let oval = line_oval_from_g(&h, &p).unwrap();
        prop_assert_eq!(oval.dual_function(&p), dual_product_formula(&h, &p).unwrap());
    }

    #[test]
    fn linear_shift_on_luneburg_round_trips(u in 0u64..64, v in 0u64..64) {
        let q = Prequasifield::luneburg(3).unwrap();
        let base = SpreadBentSpec::new(q.clone(), q.sqrt_diagonal_map().unwrap(), 0).unwrap();
        let (spec, f, oval) = action_linear_shift(&base, u, v).unwrap();
        prop_assert!(f.is_bent().unwrap());
        prop_assert_eq!(&spec.bent_bivariate().unwrap(), &f);
        prop_assert_eq!(spec.line_oval().unwrap().indicator(), oval.indicator());
        let back = spec_from_function(&q, &f).unwrap();
        prop_assert_eq!(back.bent_bivariate().unwrap(), f);
        let chain = spec.equivalence_chain().unwrap();
        prop_assert!(chain.walsh_bent && chain.criterion && chain.line_oval && chain.agree);
    }

    #[test]
    fn gl2_images_have_swapped_duals(
        frobenius in 0u32..3,
        alpha in 0u64..8, beta in 0u64..8, gamma in 0u64..8, delta in 0u64..8,
    ) {
        let spec = field_spec(3);
        let psi = Gl2Element { frobenius, alpha, beta, gamma, delta };
        prop_assume!(psi.det(spec.carrier()) != 0);
        let (f, e) = action_gl2(&spec, &psi).unwrap();
        let swapped = BooleanFunction::from_fn(6, |i| !e.eval(i / 8 + 8 * (i % 8)));
        prop_assert_eq!(f.dual(&bivariate_duality(spec.carrier())).unwrap(), swapped);
    }

    #[test]
    fn kantor_spreads_give_bent_functions(zeta in 0u64..8, mu in 0u64..8) {
        let q = Prequasifield::kantor(3, KantorChain { degrees: vec![1], lambdas: vec![1], zetas: vec![zeta] }).unwrap();
        let base = corollary_symplectic(&q, (0..8).collect()).unwrap();
        let qt = q.transpose().unwrap();
        let g = (0..8).map(|z| base.g[z as usize] ^ qt.mul(mu, z)).collect();
        let spec = SpreadBentSpec::new(q, g, mu).unwrap();
        prop_assert_eq!(&spec.normalize().unwrap().g, &base.g);
        let walsh = spec.dual(DualMethod::Walsh).unwrap();
        prop_assert_eq!(&walsh, &spec.dual(DualMethod::Product).unwrap());
        prop_assert_eq!(&walsh, &spec.dual(DualMethod::ChiSwap).unwrap());
    }
}

#[test]
fn field_spread_matches_the_niho_quadratic_count() {
    let spec = field_spec(4);
    let f = spec.bent_bivariate().unwrap();
    assert!(f.is_bent().unwrap());
    assert_eq!(f.quadratic_rank().unwrap(), 8);
    assert_eq!(spec.line_oval().unwrap().e_size(), 16 * 17 / 2);
}
