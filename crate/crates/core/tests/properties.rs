mod common;

use cl_curves::bancor::BancorRealCurve;
use cl_curves::hyper_trig::{
    hyperbolic_angle, rotate, trig_from_prices, u_hat_from_price, unit_from_state,
};
use cl_curves::rosetta::{
    amplification_from_c, intercept_ratio_from_c, natural_readings, translate,
};
use cl_curves::{
    rel_diff, validate, Curve, CurveSpec, FormTag, PoolState, ReferenceParams, UniswapV3Params,
    ValidatedSpec,
};
use common::{all_forms, arb_bancor, state_at};
use proptest::prelude::*;

fn reference(x0: f64, y0: f64) -> ValidatedSpec {
    validate(CurveSpec::Reference(ReferenceParams { x0, y0 })).unwrap()
}

fn bancor_curve(spec: &ValidatedSpec) -> &BancorRealCurve {
    match spec.concrete() {
        Curve::BancorV2(c) => c,
        _ => unreachable!(),
    }
}

/// `|a - b|` against `rel` of the larger magnitude, with an absolute floor
/// tied to the curve's reserve range.
fn close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + floor
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn reference_product_conservation(
        lx in -3.0f64..9.0, ly in -3.0f64..9.0, f in 1e-6f64..10.0,
    ) {
        let (x, y) = (10f64.powf(lx), 10f64.powf(ly));
        let spec = reference(x, y);
        let d = spec.curve().swap_given_dx(PoolState { x, y }, f * x).unwrap();
        prop_assert!(rel_diff((x + d.dx) * (y + d.dy), x * y) <= 1e-9);
        prop_assert!(d.dy < 0.0);
    }

    #[test]
    fn reference_round_trip(lx in -3.0f64..9.0, ly in -3.0f64..9.0, f in 1e-6f64..10.0) {
        let (x, y) = (10f64.powf(lx), 10f64.powf(ly));
        let curve = reference(x, y);
        let start = PoolState { x, y };
        let there = curve.curve().swap_given_dx(start, f * x).unwrap();
        let mid = start.after(there);
        let back = curve.curve().swap_given_dx(mid, -there.dx).unwrap();
        let end = mid.after(back);
        prop_assert!(rel_diff(end.x, x) <= 1e-9 && rel_diff(end.y, y) <= 1e-9);
    }

    #[test]
    fn sign_coupling_every_form(spec in arb_bancor(), t in 0.0f64..1.0, s in -1.0f64..1.0) {
        for form in all_forms(&spec) {
            let g = form.geometry();
            let state = state_at(&form, t);
            let dx = if s >= 0.0 { s * (g.x_int - state.x) } else { s * state.x };
            let d = form.curve().swap_given_dx(state, dx).unwrap();
            if dx == 0.0 {
                prop_assert!(d.is_zero());
            } else {
                prop_assert!(d.has_opposite_signs(), "{:?}: {d:?}", form.form());
            }
        }
    }

    #[test]
    fn path_independence(spec in arb_bancor(), t in 0.0f64..1.0, s1 in 0.0f64..1.0, s2 in 0.0f64..1.0) {
        let g = spec.geometry();
        let floor = 1e-12 * g.y_int;
        for form in all_forms(&spec) {
            let c = form.curve();
            let start = state_at(&form, t);
            let room = g.x_int - start.x;
            let (dx1, dx2) = (s1 * s2 * room, (1.0 - s1) * s2 * room);
            let one = c.swap_given_dx(start, dx1).unwrap();
            let two = c.swap_given_dx(start.after(one), dx2).unwrap();
            let both = c.swap_given_dx(start, dx1 + dx2).unwrap();
            prop_assert!(close(one.dy + two.dy, both.dy, 1e-9, floor), "{:?}", form.form());
        }
    }

    #[test]
    fn round_trip_on_bounded_forms(spec in arb_bancor(), t in 0.0f64..1.0, s in 0.0f64..1.0) {
        let g = spec.geometry();
        for form in all_forms(&spec) {
            let c = form.curve();
            let start = state_at(&form, t);
            let there = c.swap_given_dx(start, s * (g.x_int - start.x)).unwrap();
            let mid = start.after(there);
            let back = c.swap_given_dx(mid, -there.dx).unwrap();
            let end = mid.after(back);
            prop_assert!(close(end.x, start.x, 1e-9, 1e-12 * g.x_int));
            prop_assert!(close(end.y, start.y, 1e-9, 1e-12 * g.y_int));
        }
    }

    #[test]
    fn depletion_duality(spec in arb_bancor(), t in 0.0f64..1.0) {
        for form in all_forms(&spec) {
            let g = form.geometry();
            let start = state_at(&form, t);
            let d = form.curve().swap_given_dx(start, g.x_int - start.x).unwrap();
            prop_assert!(close(d.dy, -start.y, 1e-9, 1e-12 * g.y_int), "{:?}", form.form());
        }
    }

    #[test]
    fn virtual_real_swap_indifference(spec in arb_bancor(), t in 0.0f64..1.0, s in 0.0f64..1.0) {
        let b = bancor_curve(&spec);
        let (h, v) = b.shifts();
        let real = state_at(&spec, t);
        let xv = real.x + h;
        let virt = reference(xv, b.scale() / xv);
        let vstate = PoolState { x: xv, y: b.scale() / xv };
        let dx = s * (spec.geometry().x_int - real.x);
        let d_real = spec.curve().swap_given_dx(real, dx).unwrap();
        let d_virt = virt.curve().swap_given_dx(vstate, dx).unwrap();
        prop_assert!(rel_diff(d_real.dy, d_virt.dy) <= 1e-12 || (d_real.dy - d_virt.dy).abs() <= 1e-15 * v);
    }

    #[test]
    fn geometry_chains(spec in arb_bancor()) {
        let b = bancor_curve(&spec);
        let p = b.params();
        let g = spec.geometry();
        let vb = b.virtual_bounds();
        let rb = b.reference_bound_points();
        prop_assert!(rel_diff((vb.min_xv * vb.max_xv).sqrt(), p.amplification * p.x0) <= 1e-12);
        prop_assert!(rel_diff((rb.min_x * rb.max_x).sqrt(), p.x0) <= 1e-12);
        for q in [g.y_int / g.x_int, g.y_asym / g.x_asym, vb.min_yv / vb.min_xv, vb.max_yv / vb.max_xv] {
            prop_assert!(rel_diff(q, g.p0) <= 1e-12);
        }
        prop_assert!(rel_diff(g.p0 * g.p0, g.p_high * g.p_low) <= 1e-12);
        prop_assert!(rel_diff((g.x_int - g.x_asym) / -g.x_asym, g.c) <= 1e-12);
        prop_assert!(rel_diff((g.y_int - g.y_asym) / -g.y_asym, g.c) <= 1e-12);
        prop_assert!(rel_diff(amplification_from_c(g.c), p.amplification) <= 1e-12);
        let two_a_minus_1 = intercept_ratio_from_c(g.c);
        prop_assert!(rel_diff(two_a_minus_1, 2.0 * p.amplification - 1.0) <= 1e-12);
        let a_minus_1 = 1.0 / (g.c.sqrt() - 1.0);
        prop_assert!(rel_diff(g.x_int * a_minus_1 / two_a_minus_1, p.x0) <= 1e-12);
        prop_assert!(rel_diff(g.y_int * a_minus_1 / two_a_minus_1, p.y0) <= 1e-12);
    }

    #[test]
    fn uniswap_and_carbon_identities(spec in arb_bancor()) {
        let u = translate(&spec, FormTag::UniswapV3).unwrap();
        let Curve::UniswapV3(uc) = u.concrete() else { unreachable!() };
        let (x0, y0) = uc.center();
        prop_assert!(rel_diff(uc.amplification() * (x0 * y0).sqrt(), uc.params().liquidity) <= 1e-12);

        let cb = translate(&spec, FormTag::Carbon).unwrap();
        let Curve::Carbon(cc) = cb.concrete() else { unreachable!() };
        let p = cc.params();
        prop_assert!(rel_diff(cc.virtual_scale(), (p.z / p.a) * (p.z / p.a)) <= 1e-12);
        let g = cb.geometry();
        prop_assert!(rel_diff(g.y_int / g.x_int, p.b * (p.a + p.b)) <= 1e-12);
    }

    #[test]
    fn three_way_swap_equivalence(spec in arb_bancor(), t in 0.0f64..1.0, s in -1.0f64..1.0) {
        let forms = all_forms(&spec);
        let g = spec.geometry();
        let start = state_at(&spec, t);
        let dx = if s >= 0.0 { s * (g.x_int - start.x) } else { s * start.x };
        let base = forms[0].curve().swap_given_dx(start, dx).unwrap();
        for f in &forms[1..] {
            let d = f.curve().swap_given_dx(start, dx).unwrap();
            prop_assert!(close(d.dy, base.dy, 1e-9, 1e-13 * g.y_int), "{:?}", f.form());
            let m = f.curve().marginal_price(start).unwrap();
            prop_assert!(rel_diff(m, forms[0].curve().marginal_price(start).unwrap()) <= 1e-9);
        }
    }

    #[test]
    fn translation_is_a_groupoid(spec in arb_bancor()) {
        for f in FormTag::BOUNDED {
            let via = translate(&spec, f).unwrap();
            prop_assert!(via.geometry().max_rel_deviation(&spec.geometry()) <= 1e-9);
            for g in FormTag::BOUNDED {
                let direct = translate(&spec, g).unwrap();
                let composed = translate(&via, g).unwrap();
                prop_assert!(direct.geometry().max_rel_deviation(&composed.geometry()) <= 1e-9);
            }
        }
    }

    #[test]
    fn natural_invariants_are_constant(spec in arb_bancor(), ts in prop::collection::vec(0.01f64..0.99, 20)) {
        let g = spec.geometry();
        for t in ts {
            let s = state_at(&spec, t);
            let r = natural_readings(s, &g).unwrap();
            prop_assert!(rel_diff(r.asymptotes, g.c) <= 1e-9);
            if let Some(v) = r.intercepts {
                prop_assert!(rel_diff(v, g.c) <= 1e-9);
            }
        }
    }

    #[test]
    fn rotation_preserves_quadratic_form(lx in -12.0f64..12.0, ly in -12.0f64..12.0) {
        let (x, y) = (10f64.powf(lx), 10f64.powf(ly));
        let p = rotate(x, y);
        prop_assert!(rel_diff(p.t * p.t - p.u * p.u, 2.0 * x * y) <= 1e-12 * (p.t * p.t) / (2.0 * x * y));
    }

    #[test]
    fn reference_virtual_unit_convergence(lx in -6.0f64..6.0, ly in -6.0f64..6.0, a in 1.0f64..100.0) {
        let (x, y) = (10f64.powf(lx), 10f64.powf(ly));
        let p = unit_from_state(x, y).unwrap();
        let q = unit_from_state(a * x, a * y).unwrap();
        prop_assert!((p.t_hat - q.t_hat).abs() <= 1e-12 * p.t_hat);
        prop_assert!((p.u_hat - q.u_hat).abs() <= 1e-12 * p.t_hat);
    }

    #[test]
    fn angle_additivity(lp in -6.0f64..6.0, w1 in 1e-6f64..6.0, w2 in 1e-6f64..6.0) {
        let pl = 10f64.powf(lp);
        let pm = pl * 10f64.powf(w1);
        let ph = pm * 10f64.powf(w2);
        let whole = hyperbolic_angle(ph, pl).unwrap().phi;
        let parts = hyperbolic_angle(ph, pm).unwrap().phi + hyperbolic_angle(pm, pl).unwrap().phi;
        prop_assert!(rel_diff(parts, whole) <= 1e-12);
    }

    #[test]
    fn exp_phi_is_c_and_cosh_matches_prices(spec in arb_bancor()) {
        for form in all_forms(&spec) {
            let g = form.geometry();
            prop_assert!(rel_diff(g.phi.exp(), g.c) <= 1e-12);
            let t = trig_from_prices(g.p_high, g.p_low).unwrap();
            prop_assert!(rel_diff(g.phi.cosh(), t.cosh) <= 1e-12);
            prop_assert!(rel_diff(g.phi.sinh(), t.sinh) <= 1e-12);
        }
    }

    #[test]
    fn u_hat_is_monotone_in_price(lp in -8.0f64..8.0, step in 1e-9f64..1.0) {
        let p = 10f64.powf(lp);
        let q = p * (1.0 + step);
        prop_assert!(u_hat_from_price(q).unwrap() > u_hat_from_price(p).unwrap());
    }

    #[test]
    fn uniswap_translation_equivalence(l in 1e-3f64..1e9, lh in -3.0f64..3.0, w in 1e-3f64..4.0, t in 0.0f64..1.0, s in 0.0f64..1.0) {
        let ph = 10f64.powf(lh);
        let u = validate(CurveSpec::UniswapV3(UniswapV3Params { liquidity: l, p_high: ph, p_low: ph / 10f64.powf(w) })).unwrap();
        let b = translate(&u, FormTag::BancorV2).unwrap();
        let g = u.geometry();
        let start = state_at(&u, t);
        let dx = s * (g.x_int - start.x);
        let du = u.curve().swap_given_dx(start, dx).unwrap();
        let db = b.curve().swap_given_dx(start, dx).unwrap();
        prop_assert!(close(du.dy, db.dy, 1e-9, 1e-13 * g.y_int));
        let (y_u, y_b) = (u.curve().y_at_x(start.x), b.curve().y_at_x(start.x));
        prop_assert!(close(y_u, y_b, 1e-9, 1e-13 * g.y_int));
    }
}

#[test]
fn rotation_worked_value() {
    for x in [1.0, 10.0, 100.0, 1000.0, 10_000.0] {
        let p = rotate(x, 10_000.0 / x);
        assert!(rel_diff(p.t * p.t - p.u * p.u, 20_000.0) < 1e-12);
    }
}
