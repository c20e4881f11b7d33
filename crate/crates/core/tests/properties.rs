use num_complex::Complex64;
use proptest::prelude::*;

use shglink_core::beam::{self, BeamState, StabilityParams};
use shglink_core::channel::spectral_efficiency;
use shglink_core::link::{solve_link, LinkConfig};
use shglink_core::power::{DiffractionModel, Rigrod};
use shglink_core::ray::{self, RayMatrix, RetroreflectorSpec};
use shglink_core::resonator::{self, SslrGeometry};
use shglink_core::shg;

// Plain 2x2 arrays so the oracle does not share code with `RayMatrix`.
type M2 = [[f64; 2]; 2];

fn mul(x: M2, y: M2) -> M2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

fn product_right_to_left(ms: &[M2]) -> M2 {
    // Written exactly as printed: leftmost factor is the last element met.
    ms.iter().fold([[1.0, 0.0], [0.0, 1.0]], |acc, m| mul(acc, *m))
}

fn tr(x: f64) -> M2 {
    [[1.0, x], [0.0, 1.0]]
}

fn lens(f: f64) -> M2 {
    [[1.0, 0.0], [-1.0 / f, 1.0]]
}

const MIRROR: M2 = [[1.0, 0.0], [0.0, 1.0]];

fn rel_close(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * scale.max(a.abs()).max(b.abs())
}

fn to_arr(m: &RayMatrix) -> M2 {
    [[m.a, m.b], [m.c, m.d]]
}

fn matrices_close(x: M2, y: M2, tol: f64) -> bool {
    let scale = x.iter().chain(y.iter()).flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    x.iter()
        .flatten()
        .zip(y.iter().flatten())
        .all(|(a, b)| (a - b).abs() <= tol * scale.max(1.0))
}

fn element() -> impl Strategy<Value = RayMatrix> {
    prop_oneof![
        (0.0f64..5.0).prop_map(|d| ray::free_space(d).unwrap()),
        prop_oneof![0.01f64..2.0, -2.0f64..-0.01].prop_map(|f| ray::thin_lens(f).unwrap()),
        Just(ray::flat_mirror()),
    ]
}

fn table_geometry(d: f64) -> SslrGeometry {
    SslrGeometry::new(0.03, 0.03015, d, 3e-3, 3e-3, 1064e-9).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composed_elements_are_unimodular(chain in prop::collection::vec(element(), 1..8)) {
        let m = ray::compose(chain).unwrap();
        prop_assert!((m.determinant() - 1.0).abs() <= 1e-12 * (m.a * m.d).abs().max(1.0));
    }

    #[test]
    fn compose_is_associative(a in element(), b in element(), c in element()) {
        let left = (c * b) * a;
        let right = c * (b * a);
        prop_assert!(matrices_close(to_arr(&left), to_arr(&right), 1e-12));
        prop_assert!(matrices_close(to_arr(&ray::compose([a, b, c]).unwrap()), to_arr(&left), 1e-12));
    }

    #[test]
    fn retroreflector_product_matches_closed_form(f in 0.005f64..0.2, excess in 1e-6f64..0.5) {
        let l = f * (1.0 + excess);
        let spec = RetroreflectorSpec::new(f, l).unwrap();
        let oracle = product_right_to_left(&[tr(f), lens(f), tr(l), MIRROR, tr(l), lens(f), tr(f)]);
        let f_rr = f * f / (2.0 * (l - f));
        let closed = [[-1.0, 0.0], [1.0 / f_rr, -1.0]];
        prop_assert!(matrices_close(oracle, closed, 1e-10));
        prop_assert!(matrices_close(to_arr(&ray::retroreflector_matrix(&spec)), closed, 1e-10));
        prop_assert!(matrices_close(to_arr(&ray::retroreflector_closed_form(&spec)), closed, 1e-12));
        prop_assert!(rel_close(ray::equivalent_focal_length(&spec).unwrap(), f_rr, 1e-12, 0.0));
    }

    #[test]
    fn single_pass_closed_form_matches_product(
        f in 0.01f64..0.1,
        excess in 1e-4f64..0.1,
        d in 0.0f64..20.0,
    ) {
        let l = f * (1.0 + excess);
        let g = SslrGeometry::new(f, l, d, 1e-3, 1e-3, 1064e-9).unwrap();
        let oracle = product_right_to_left(&[MIRROR, tr(l), lens(f), tr(2.0 * f + d), lens(f), tr(l), MIRROR]);
        let (params, m) = resonator::single_pass_abcd(&g);
        prop_assert!(matrices_close(oracle, to_arr(&m), 1e-10));
        prop_assert_eq!(params.g1, params.g2);
        let composed = ray::compose(g.single_pass_elements()).unwrap();
        prop_assert!(matrices_close(to_arr(&composed), to_arr(&m), 1e-10));
    }

    #[test]
    fn stepwise_and_composed_propagation_agree(
        chain in prop::collection::vec(element(), 1..6),
        re in -1.0f64..1.0,
        im in 0.01f64..2.0,
    ) {
        let start = BeamState::new(Complex64::new(re, im), 1064e-9, 0.0).unwrap();
        let mut stepwise = start;
        for m in &chain {
            stepwise = beam::propagate(&stepwise, m, 0.0).unwrap();
        }
        let composed = beam::propagate(&start, &ray::compose(chain.clone()).unwrap(), 0.0).unwrap();
        let scale = stepwise.q.norm_sqr().sqrt().max(1.0);
        prop_assert!(((stepwise.q - composed.q).norm_sqr()).sqrt() <= 1e-10 * scale);
    }

    #[test]
    fn eigenmode_reproduces_after_round_trip(d in 0.05f64..11.95) {
        let g = table_geometry(d);
        let (params, _) = resonator::single_pass_abcd(&g);
        let q0 = beam::initial_q(&params, g.wavelength).unwrap();
        let forward = g.single_pass_elements();
        let mut back = forward;
        back.reverse();
        let round_trip = ray::compose(forward.into_iter().chain(back)).unwrap();
        let q = beam::propagate(&q0, &round_trip, 0.0).unwrap();
        let err = (q.q - q0.q).norm_sqr().sqrt();
        prop_assert!(err <= 1e-8 * q0.q.im, "d = {}, err = {}", d, err);
    }

    #[test]
    fn radius_continuous_across_lenses(d in 0.05f64..11.95) {
        let g = table_geometry(d);
        let p = resonator::q_profile(&g).unwrap();
        for (z, second) in [(g.z_l1(), false), (g.z_l2(), true)] {
            let before = p.fundamental_radius_at(z).unwrap();
            let after = beam::fundamental_radius(&p.after_lens(second)).unwrap();
            prop_assert!(rel_close(before, after, 1e-9, 0.0));
        }
    }

    #[test]
    fn station_radii_symmetric(d in 0.05f64..11.95) {
        let (_, st) = resonator::multimode_radius_profile(&table_geometry(d)).unwrap();
        let mm = st.multimode;
        prop_assert!(rel_close(mm.w_l1, mm.w_l2, 1e-8, 0.0));
        prop_assert!(rel_close(mm.w_m1, mm.w_m2, 1e-8, 0.0));
        prop_assert_eq!(mm.w_gain, 3e-3);
    }

    #[test]
    fn doubled_power_exactly_quadratic(x in 1e-3f64..1e3, w in 1e-6f64..1e-2) {
        let k = shglink_core::constants::CODATA;
        let crystal = LinkConfig::default().crystal;
        let p = |p_nu: f64| shg::doubled_power(p_nu, shg::shg_efficiency(p_nu, w, &crystal, 1064e-9, &k));
        prop_assert!(rel_close(p(2.0 * x) / p(x), 4.0, 1e-12, 0.0));
    }

    #[test]
    fn efficiency_invariant_under_joint_scaling(x in 1e-2f64..1e3, w in 1e-6f64..1e-2, s in 0.1f64..10.0) {
        let k = shglink_core::constants::CODATA;
        let crystal = LinkConfig::default().crystal;
        let a = shg::shg_efficiency(x, w, &crystal, 1064e-9, &k);
        let b = shg::shg_efficiency(s * x, s.sqrt() * w, &crystal, 1064e-9, &k);
        prop_assert!(rel_close(a, b, 1e-12, 0.0));
    }

    #[test]
    fn capacity_monotone_in_received_power(p in 1e-9f64..1.0, bump in 1e-3f64..1.0) {
        let chain = LinkConfig::default().chain;
        let k = shglink_core::constants::CODATA;
        prop_assert!(spectral_efficiency(p * (1.0 + bump), &chain, &k) > spectral_efficiency(p, &chain, &k));
    }

    #[test]
    fn solutions_are_non_negative(p_in in 0.0f64..200.0, d in 0.05f64..11.95) {
        let s = solve_link(p_in, d, &LinkConfig::default()).unwrap();
        for v in [s.p_nu, s.eta_shg, s.p_2nu, s.p_r, s.snr, s.spectral_efficiency, s.threshold] {
            prop_assert!(v >= 0.0);
        }
        prop_assert_eq!(s.spectral_efficiency == 0.0, s.p_r == 0.0);
    }
}

#[test]
fn fundamental_power_piecewise_linear() {
    let mut cfg = LinkConfig::default();
    cfg.losses.diffraction = DiffractionModel::Constant(1.0);
    let g = cfg.geometry(1.0).unwrap();
    let refl = cfg.losses.reflectivities(&g).unwrap();
    let r = Rigrod::new(&cfg.gain, &refl, cfg.wavelength, &cfg.constants).unwrap();
    let th = r.threshold();
    for p in [0.0, 0.25 * th, 0.999 * th, th] {
        assert_eq!(r.power(p), 0.0);
    }
    let (a, b, c) = (th + 5.0, th + 40.0, th + 130.0);
    let s1 = (r.power(b) - r.power(a)) / (b - a);
    let s2 = (r.power(c) - r.power(b)) / (c - b);
    assert!((s1 - s2).abs() <= 1e-9 * s1);
    assert!((s1 - r.slope()).abs() <= 1e-9 * s1);
}

#[test]
fn received_power_convex_above_threshold() {
    let cfg = LinkConfig::default();
    let th = solve_link(0.0, 8.0, &cfg).unwrap().threshold;
    let grid: Vec<f64> = (0..40).map(|i| th + 1.0 + 3.0 * i as f64).collect();
    let pr: Vec<f64> = grid.iter().map(|&p| solve_link(p, 8.0, &cfg).unwrap().p_r).collect();
    let slopes: Vec<f64> = pr.windows(2).zip(grid.windows(2)).map(|(y, x)| (y[1] - y[0]) / (x[1] - x[0])).collect();
    assert!(slopes.windows(2).all(|s| s[1] > s[0]));
}

#[test]
fn mirror_radius_strictly_decreasing() {
    let mut prev = f64::INFINITY;
    for i in 0..=105 {
        let d = 0.5 + 0.1 * i as f64;
        let w = resonator::radius_at_shg(&table_geometry(d)).unwrap();
        assert!(w < prev, "d = {d}");
        prev = w;
    }
}

#[test]
fn stability_range_for_table_geometry() {
    for i in 1..1200 {
        let d = i as f64 * 0.01;
        assert!(resonator::is_stable(&table_geometry(d)).stable, "d = {d}");
    }
    for d in [12.0, 12.001, 15.0, 40.0] {
        assert!(!resonator::is_stable(&table_geometry(d)).stable, "d = {d}");
    }
}

#[test]
fn marginal_limit_diverges() {
    let params = StabilityParams { g1: -0.999_999, g2: -0.999_999, length: -1e-3 };
    let near = beam::initial_q(&params, 1064e-9).unwrap().q.im;
    let params = StabilityParams { g1: -0.9, g2: -0.9, length: -1e-3 };
    let far = beam::initial_q(&params, 1064e-9).unwrap().q.im;
    assert!(near > 100.0 * far);
}

#[test]
fn shg_efficiency_rises_as_mirror_spot_shrinks() {
    // Fixed intra-cavity power isolates the radius dependence.
    let cfg = LinkConfig::default();
    let k = cfg.constants;
    let mut prev = 0.0;
    for d in [1.0, 2.0, 4.0, 6.0, 8.0, 10.0] {
        let w = resonator::radius_at_shg(&table_geometry(d)).unwrap();
        let eta = shg::shg_efficiency(100.0, w, &cfg.crystal, cfg.wavelength, &k);
        assert!(eta > prev);
        prev = eta;
    }
}

/// Exponents of (m, kg, s, A, K) carried alongside values.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Dim([i8; 5]);

impl Dim {
    const NONE: Dim = Dim([0; 5]);
    fn mul(self, o: Dim) -> Dim {
        let mut out = [0; 5];
        for (i, v) in out.iter_mut().enumerate() {
            *v = self.0[i] + o.0[i];
        }
        Dim(out)
    }
    fn inv(self) -> Dim {
        Dim(self.0.map(|x| -x))
    }
}

#[test]
fn pump_term_is_dimensionless() {
    let meter = Dim([1, 0, 0, 0, 0]);
    let second = Dim([0, 0, 1, 0, 0]);
    let joule = Dim([2, 1, -2, 0, 0]);
    let watt = joule.mul(second.inv());
    let area = meter.mul(meter);
    // I_s = h·ν/(σ·τ): (J·s)(1/s)/(m²·s) = W/m².
    let planck = joule.mul(second);
    let i_s = planck.mul(second.inv()).mul(area.mul(second).inv());
    assert_eq!(i_s, watt.mul(area.inv()));
    let volume = area.mul(meter);
    // l_g·η_c·P_in/(I_s·V)
    let bracket = meter.mul(Dim::NONE).mul(watt).mul(i_s.mul(volume).inv());
    assert_eq!(bracket, Dim::NONE);
    // SHG coefficient 8π²d²l²/(ε0 c λ² n³) times intensity: (m/V)²m²/((F/m)(m/s)m²)·W/m².
    let volt = watt.mul(Dim([0, 0, 0, 1, 0]).inv());
    let farad = Dim([0, 0, 1, 1, 0]).mul(volt.inv());
    let d_eff = meter.mul(volt.inv());
    let coeff = d_eff.mul(d_eff).mul(area).mul(farad.mul(meter.inv()).mul(meter.mul(second.inv())).mul(area).inv());
    assert_eq!(coeff.mul(watt.mul(area.inv())), Dim::NONE);
}
