use proptest::prelude::*;
use su11osc::actionangle::*;
use su11osc::repcore::{cover_compose, BargmannIndex, CoverElement};
use std::f64::consts::{FRAC_PI_2, PI};

fn aa(phi: f64, i: f64) -> AngleAction {
    AngleAction::new(phi, i).unwrap()
}

fn angle_close(a: f64, b: f64, tol: f64) -> bool {
    wrap_angle(a - b).abs() < tol
}

fn same(a: &AngleAction, b: &AngleAction, tol: f64) -> bool {
    angle_close(a.phi, b.phi, tol) && (a.action - b.action).abs() < tol * a.action.max(1.0)
}

/// Classical RK4 on (phi, I), used as an independent oracle.
fn rk4(f: impl Fn(f64, f64) -> (f64, f64), phi: f64, i: f64, t: f64, dt: f64) -> (f64, f64) {
    let steps = (t / dt).round() as usize;
    let h = t / steps as f64;
    let (mut x, mut y) = (phi, i);
    for _ in 0..steps {
        let (a1, b1) = f(x, y);
        let (a2, b2) = f(x + 0.5 * h * a1, y + 0.5 * h * b1);
        let (a3, b3) = f(x + 0.5 * h * a2, y + 0.5 * h * b2);
        let (a4, b4) = f(x + h * a3, y + h * b3);
        x += h * (a1 + 2.0 * a2 + 2.0 * a3 + a4) / 6.0;
        y += h * (b1 + 2.0 * b2 + 2.0 * b3 + b4) / 6.0;
    }
    (x, y)
}

#[test]
fn phase_point_round_trip() {
    let s = aa(PI / 2.0, 2.0);
    let x = to_phase_point(&s);
    assert!(x.q.abs() < 1e-15 && (x.p + 2.0).abs() < 1e-15);
    let back = to_angle_action(&x).unwrap();
    assert!(same(&back, &s, 1e-15));
    assert!(to_angle_action(&PhasePoint::new(0.0, 0.0)).is_err());
    assert!(AngleAction::new(0.0, 0.0).is_err());
    assert!(AngleAction::new(0.0, -1.0).is_err());
    assert!((aa(3.0 * PI, 1.0).phi - PI).abs() < 1e-15);
}

#[test]
fn h_triplet_cone_and_free_particle() {
    let s = aa(0.3, 1.7);
    let h = h_triplet(&s);
    assert!(h.cone().abs() < 1e-14);
    assert!((h.free_particle(1.0) - 1.7 * 0.3f64.sin().powi(2)).abs() < 1e-14);
    assert!(same(&h.to_angle_action().unwrap(), &s, 1e-14));
}

#[test]
fn generating_function_derivatives() {
    // F1: dF/dphi = I, dF/dq = -p
    let s = aa(0.4, 1.3);
    let x = to_phase_point(&s);
    let h = 1e-6;
    let d_phi = (f1(x.q, s.phi + h).unwrap() - f1(x.q, s.phi - h).unwrap()) / (2.0 * h);
    let d_q = (f1(x.q + h, s.phi).unwrap() - f1(x.q - h, s.phi).unwrap()) / (2.0 * h);
    assert!((d_phi - s.action).abs() < 1e-8);
    assert!((d_q + x.p).abs() < 1e-8);
    assert!(f1(1.0, FRAC_PI_2).is_err());

    // F2 on both branches: dF/dq = p, dF/dI = phi
    for s in [aa(1.1, 0.9), aa(-2.0, 1.4)] {
        let x = to_phase_point(&s);
        let up = x.p <= 0.0;
        let d_q = (f2(x.q + h, s.action, up).unwrap() - f2(x.q - h, s.action, up).unwrap()) / (2.0 * h);
        let d_i = (f2(x.q, s.action + h, up).unwrap() - f2(x.q, s.action - h, up).unwrap()) / (2.0 * h);
        assert!((d_q - x.p).abs() < 1e-7, "{d_q} {}", x.p);
        assert!((d_i - s.phi).abs() < 1e-7, "{d_i} {}", s.phi);
    }
    assert!(f2(3.0, 1.0, true).is_err());
    assert_eq!(f3(2.0, -1.5), -3.0);
    assert!((f4(0.3, 2.0) - 2.0 * 0.3f64.cos() * 0.3f64.sin()).abs() < 1e-16);
    assert!(generating_function(GeneratingFunction::F3, &s).is_ok());
}

#[test]
fn rotation_shifts_angle() {
    let s = aa(0.5, 1.2);
    let r = mobius_action(&CoverElement::rotation(0.8), &s);
    assert!(same(&r, &aa(0.5 - 0.8, 1.2), 1e-14));
}

#[test]
fn subgroup_closed_forms_match_mobius() {
    for &(phi, i) in &[(0.3, 1.0), (-2.2, 0.4), (2.9, 3.5), (FRAC_PI_2, 0.7)] {
        let s = aa(phi, i);
        for &t in &[-1.2, 0.1, 0.9] {
            let m = mobius_action(&CoverElement::boost_a(t), &s);
            assert!(same(&m, &boost_a_closed(t, &s), 1e-12), "a {phi} {t}");
            let m = mobius_action(&CoverElement::boost_b(t), &s);
            assert!(same(&m, &boost_b_closed(t, &s), 1e-12), "b {phi} {t}");
            let m = mobius_action(&CoverElement::null_n(t), &s);
            assert!(same(&m, &null_n_closed(t, &s), 1e-12), "n {phi} {t}");
        }
    }
}

#[test]
fn h_triplet_transformation_laws() {
    let s = aa(0.7, 1.9);
    let h = h_triplet(&s);
    let (t, c, sn, ch, sh) = (0.45, 0.45f64.cos(), 0.45f64.sin(), 0.45f64.cosh(), 0.45f64.sinh());
    let close = |a: HTriplet, b: [f64; 3]| {
        (a.h0 - b[0]).abs() < 1e-12 && (a.h1 - b[1]).abs() < 1e-12 && (a.h2 - b[2]).abs() < 1e-12
    };
    let r = h_triplet(&mobius_action(&CoverElement::rotation(t), &s));
    assert!(close(r, [h.h0, c * h.h1 - sn * h.h2, sn * h.h1 + c * h.h2]));
    let a = h_triplet(&mobius_action(&CoverElement::boost_a(t), &s));
    assert!(close(a, [ch * h.h0 + sh * h.h2, h.h1, sh * h.h0 + ch * h.h2]));
    let b = h_triplet(&mobius_action(&CoverElement::boost_b(t), &s));
    assert!(close(b, [ch * h.h0 + sh * h.h1, sh * h.h0 + ch * h.h1, h.h2]));
    let x = t;
    let n = h_triplet(&mobius_action(&CoverElement::null_n(x), &s));
    let want = [
        (1.0 + x * x / 2.0) * h.h0 + x * h.h1 - x * x / 2.0 * h.h2,
        x * h.h0 + h.h1 - x * h.h2,
        x * x / 2.0 * h.h0 + x * h.h1 + (1.0 - x * x / 2.0) * h.h2,
    ];
    assert!(close(n, want));
}

#[test]
fn sp2_laws_on_plane() {
    let x = PhasePoint::new(0.7, -1.3);
    let g = g_check(&x);
    let t = 0.6f64;
    let (c, s, ch, sh) = (t.cos(), t.sin(), t.cosh(), t.sinh());
    let close = |a: [f64; 3], b: [f64; 3]| a.iter().zip(b).all(|(u, v)| (u - v).abs() < 1e-13);
    let img = |m: &Sp2| g_check(&sp2_action_on_plane(m, &x).unwrap());
    assert!(close(img(&r1(t)), [g[0], c * g[1] + s * g[2], -s * g[1] + c * g[2]]));
    assert!(close(img(&a1(t)), [ch * g[0] + sh * g[1], sh * g[0] + ch * g[1], g[2]]));
    assert!(close(img(&b1(t)), [ch * g[0] - sh * g[2], g[1], -sh * g[0] + ch * g[2]]));
    assert!(sp2_action_on_plane(&Sp2::new(2.0, 0.0, 0.0, 1.0), &x).is_err());
}

#[test]
fn cayley_map_to_su11() {
    use su11osc::repcore::max_abs2;
    let t = 0.8;
    let d = |a: nalgebra::Matrix2<su11osc::C64>, b: &CoverElement| max_abs2(&(a - b.to_su11()));
    assert!(d(sp2_to_su11(&r1(t)), &CoverElement::rotation(t)) < 1e-14);
    assert!(d(sp2_to_su11(&b1(t)), &CoverElement::boost_b(t)) < 1e-14);
    assert!(d(sp2_to_su11(&n1(t)), &CoverElement::null_n(t)) < 1e-14);
    // the A subgroup lands on the opposite boost parameter
    assert!(d(sp2_to_su11(&a1(t)), &CoverElement::boost_a(-t)) < 1e-14);
}

#[test]
fn transitivity_reaches_target() {
    let pairs = [(aa(0.1, 1.0), aa(2.0, 3.0)), (aa(-2.5, 4.0), aa(0.3, 0.2)), (aa(1.0, 1.0), aa(1.0, 1.0))];
    for (a, b) in pairs {
        let g = transitivity_element(&a, &b);
        let img = mobius_action(&g, &a);
        assert!(same(&img, &b, 1e-10), "{img:?} vs {b:?}");
    }
}

#[test]
fn poisson_brackets_of_generators() {
    let s = aa(0.9, 1.6);
    let h0 = |_p: f64, i: f64| i;
    let h1 = |p: f64, i: f64| i * p.cos();
    let h2 = |p: f64, i: f64| -i * p.sin();
    let q = |p: f64, i: f64| (2.0 * i).sqrt() * p.cos();
    let pp = |p: f64, i: f64| -(2.0 * i).sqrt() * p.sin();
    let h = h_triplet(&s);
    let x = to_phase_point(&s);
    assert!((poisson_bracket(h0, h1, &s).unwrap() + h.h2).abs() < 1e-8);
    assert!((poisson_bracket(h0, h2, &s).unwrap() - h.h1).abs() < 1e-8);
    assert!((poisson_bracket(h1, h2, &s).unwrap() - h.h0).abs() < 1e-8);
    assert!((poisson_bracket(h0, q, &s).unwrap() + x.p).abs() < 1e-8);
    assert!((poisson_bracket(q, pp, &s).unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn perturbed_orbits_match_rk4() {
    for &gamma in &[0.3, -0.6, 0.9] {
        for &phi0 in &[0.0, 1.2, -2.8] {
            let s = aa(phi0, 1.5);
            for kind in [Perturbation::H1, Perturbation::H2] {
                let field = |p: f64, i: f64| match kind {
                    Perturbation::H1 => (1.0 + gamma * p.cos(), gamma * i * p.sin()),
                    Perturbation::H2 => (1.0 - gamma * p.sin(), gamma * i * p.cos()),
                };
                let e0 = perturbed_energy(kind, gamma, &s);
                for &t in &[0.5, 3.0, 11.0] {
                    let o = perturbed_orbit(kind, gamma, t, &s).unwrap();
                    let (p, i) = rk4(field, phi0, 1.5, t, 1e-3);
                    assert!((o.phi_unwrapped - p).abs() < 1e-8, "{kind:?} g={gamma} phi0={phi0} t={t}: {} vs {p}", o.phi_unwrapped);
                    assert!((o.state.action - i).abs() < 1e-8);
                    assert!((perturbed_energy(kind, gamma, &o.state) - e0).abs() < 1e-12 * e0.max(1.0));
                    assert_eq!(o.winding, winding(o.phi_unwrapped));
                }
            }
        }
    }
    assert!(perturbed_orbit(Perturbation::H1, 1.0, 1.0, &aa(0.0, 1.0)).is_err());
}

#[test]
fn orbit_period_is_stretched() {
    // phi advances by 2 pi over T = 2 pi / sqrt(1 - gamma^2)
    let g = 0.5f64;
    let period = 2.0 * PI / (1.0 - g * g).sqrt();
    let o = perturbed_orbit(Perturbation::H1, g, period, &aa(0.4, 1.0)).unwrap();
    assert!((o.phi_unwrapped - 0.4 - 2.0 * PI).abs() < 1e-10);
    let csv = orbit_trace_csv(Perturbation::H2, 0.2, &aa(0.0, 1.0), &[0.0, 1.0]).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn time_dependent_orbit_keeps_action() {
    let o = time_dependent_orbit(|t| 0.3 * t.sin(), 2.0, &aa(0.1, 2.0));
    assert_eq!(o.state.action, 2.0);
    assert!((o.phi_unwrapped - (0.1 + 2.0 + 0.3 * 2.0f64.sin())).abs() < 1e-15);
}

#[test]
fn scale_transform_example() {
    let s = scale_transform(2.0, &aa(FRAC_PI_2, 1.0)).unwrap();
    assert!((s.phi - PI / 4.0).abs() < 1e-15 && s.action == 2.0);
    assert!(scale_transform(0.0, &aa(0.0, 1.0)).is_err());
}

#[test]
fn action_quadrature_matches_closed_forms() {
    let energies = [0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95];
    for kind in [PotentialKind::Morse, PotentialKind::SymMorse, PotentialKind::PoschlTeller, PotentialKind::Confining] {
        let pot = PotentialSpec::new(kind, 1.0, 1.0, 1.0).unwrap();
        for &e in &energies {
            let v = action_of_energy(&pot, e).unwrap();
            assert!((v.quadrature - v.closed_form).abs() < 1e-8, "{kind:?} E={e}: {} vs {}", v.quadrature, v.closed_form);
        }
        for &e in &[2.0, 10.0] {
            if kind != PotentialKind::Morse && kind != PotentialKind::SymMorse {
                let v = action_of_energy(&pot, e).unwrap();
                assert!((v.quadrature - v.closed_form).abs() < 1e-8);
            }
        }
    }
    let morse = PotentialSpec::new(PotentialKind::Morse, 1.0, 1.0, 1.0).unwrap();
    assert!(action_of_energy(&morse, 1.0).is_err());
    assert!(action_of_energy(&morse, -0.1).is_err());
}

#[test]
fn turning_points_solve_v_equals_e() {
    for kind in [PotentialKind::Morse, PotentialKind::SymMorse, PotentialKind::PoschlTeller, PotentialKind::Confining] {
        let pot = PotentialSpec::new(kind, 2.0, 0.5, 3.0).unwrap();
        let (a, b) = pot.turning_points(0.4).unwrap();
        assert!(a < b);
        assert!((pot.v(a) - 0.4).abs() < 1e-12 && (pot.v(b) - 0.4).abs() < 1e-12);
    }
}

#[test]
fn omega0_values() {
    let m = PotentialSpec::new(PotentialKind::Morse, 2.0, 0.5, 1.0).unwrap();
    assert!((m.omega0() - 1.0).abs() < 1e-15);
    let c = PotentialSpec::new(PotentialKind::Confining, 2.0, 0.5, 1.0).unwrap();
    assert!((c.omega0() - 2.0).abs() < 1e-15);
    assert!(PotentialSpec::new(PotentialKind::Morse, 0.0, 1.0, 1.0).is_err());
}

#[test]
fn morse_spectrum_and_cutoff() {
    // hbar w0 = 1, V0 = 5, k = 1/2: levels rise while n + 1/2 < 10
    let pot = PotentialSpec::new(PotentialKind::Morse, 5.0, 1.0, 10.0).unwrap();
    let k = BargmannIndex::new(0.5).unwrap();
    let s = quantized_spectrum(&pot, k, 12, 1.0).unwrap();
    assert!((s.levels[0] - 0.5 * (1.0 - 0.5 / 20.0)).abs() < 1e-14);
    assert_eq!(s.n_cut, Some(9));
    assert!(s.valid[9] && !s.valid[10]);
    for n in 0..9 {
        assert!(s.levels[n + 1] > s.levels[n]);
    }
    let pt = PotentialSpec::new(PotentialKind::PoschlTeller, 5.0, 1.0, 10.0).unwrap();
    let s = quantized_spectrum(&pt, k, 3, 1.0).unwrap();
    assert!((s.levels[1] - 1.5 * (1.0 + 1.5 / 20.0)).abs() < 1e-14);
    assert!(s.n_cut.is_none());
    let tiny = PotentialSpec::new(PotentialKind::Morse, 0.1, 1.0, 0.2).unwrap();
    assert!(quantized_spectrum(&tiny, k, 3, 1.0).is_err());
}

#[test]
fn f_of_b_integral() {
    let b = 0.6;
    let pts = su11osc::quad::adaptive_gk(
        |x: f64| {
            let u = b * x.sin();
            (b * b - u * u).max(0.0).sqrt() / (1.0 + u) * b * x.cos()
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        1e-12,
    )
    .unwrap();
    assert!((f_of_b(b).unwrap() - pts).abs() < 1e-10);
    assert!(f_of_b(1.0).is_err());
}

fn point() -> impl Strategy<Value = AngleAction> {
    (-PI..PI, 0.05..20.0f64).prop_map(|(p, i)| aa(p, i))
}

fn element() -> impl Strategy<Value = CoverElement> {
    (0.0..0.9f64, -PI..PI, -5.0..5.0f64)
        .prop_map(|(r, a, w)| CoverElement::new(su11osc::C64::from_polar(r, a), w).unwrap())
}

/// det of the finite-difference Jacobian of (phi, I) -> (phi', I').
fn jacobian(g: &CoverElement, s: &AngleAction) -> f64 {
    let hp = fd_step(s.phi);
    let hi = fd_step(s.action);
    let m = |p: f64, i: f64| mobius_action(g, &AngleAction { phi: p, action: i });
    let (a, b) = (m(s.phi + hp, s.action), m(s.phi - hp, s.action));
    let (c, d) = (m(s.phi, s.action + hi), m(s.phi, s.action - hi));
    let dpp = wrap_angle(a.phi - b.phi) / (2.0 * hp);
    let dip = (a.action - b.action) / (2.0 * hp);
    let dpi = wrap_angle(c.phi - d.phi) / (2.0 * hi);
    let dii = (c.action - d.action) / (2.0 * hi);
    dpp * dii - dpi * dip
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mobius_is_canonical(g in element(), s in point()) {
        prop_assert!((jacobian(&g, &s) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn mobius_preserves_cone(g in element(), s in point()) {
        let h = h_triplet(&mobius_action(&g, &s));
        prop_assert!(h.cone().abs() < 1e-10 * h.h0.max(1.0).powi(2));
    }

    #[test]
    fn mobius_respects_composition(g1 in element(), g2 in element(), s in point()) {
        let a = mobius_action(&g2, &mobius_action(&g1, &s));
        let b = mobius_action(&cover_compose(&g2, &g1), &s);
        prop_assert!(same(&a, &b, 1e-9));
    }

    #[test]
    fn transitivity_residual(s1 in point(), s2 in point()) {
        let img = mobius_action(&transitivity_element(&s1, &s2), &s1);
        prop_assert!(same(&img, &s2, 1e-10));
    }

    #[test]
    fn phase_map_round_trip(s in point()) {
        let back = to_angle_action(&to_phase_point(&s)).unwrap();
        prop_assert!(same(&back, &s, 1e-12));
    }

    #[test]
    fn sp2_preserves_area(t in -2.0..2.0f64, q in -3.0..3.0f64, p in -3.0..3.0f64) {
        for m in [r1(t), a1(t), b1(t), n1(t)] {
            prop_assert!((m.determinant() - 1.0).abs() < 1e-12);
            let y = sp2_action_on_plane(&m, &PhasePoint::new(q, p)).unwrap();
            prop_assert!(y.q.is_finite() && y.p.is_finite());
        }
    }
}
