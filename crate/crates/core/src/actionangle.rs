//! Classical oscillator phase space in angle-action variables: the map to
//! (q, p), the h-triplet, generating functions, Sp(2,R) and SO(1,2) actions,
//! Poisson brackets, perturbed orbits and action variables of integrable
//! potentials.
//!
//! All quantities are dimensionless (tilde variables). Angles are stored in
//! (-pi, pi].

use crate::error::{domain, Error, Result};
use crate::quad::adaptive_gk;
use crate::repcore::{cover_compose, BargmannIndex, CoverElement};
use crate::C64;
use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Maps an angle into (-pi, pi].
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Number of full turns separating `x` from `wrap_angle(x)`.
pub fn winding(x: f64) -> i64 {
    ((x - wrap_angle(x)) / (2.0 * PI)).round() as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(q: f64, p: f64) -> Self {
        PhasePoint { q, p }
    }
}

/// Point (phi, I) of the punctured phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleAction {
    pub phi: f64,
    pub action: f64,
}

impl AngleAction {
    pub fn new(phi: f64, action: f64) -> Result<Self> {
        if !(action > 0.0) || !action.is_finite() || !phi.is_finite() {
            return domain(format!("angle-action point needs finite phi and I > 0, got I = {action}"));
        }
        Ok(AngleAction { phi: wrap_angle(phi), action })
    }
}

/// q = sqrt(2I) cos(phi), p = -sqrt(2I) sin(phi).
pub fn to_phase_point(s: &AngleAction) -> PhasePoint {
    let r = (2.0 * s.action).sqrt();
    PhasePoint { q: r * s.phi.cos(), p: -r * s.phi.sin() }
}

/// Inverse map, singular at the origin.
pub fn to_angle_action(x: &PhasePoint) -> Result<AngleAction> {
    if x.q == 0.0 && x.p == 0.0 {
        return Err(Error::Singular("the angle is undefined at the origin q = p = 0".into()));
    }
    AngleAction::new((-x.p).atan2(x.q), 0.5 * (x.q * x.q + x.p * x.p))
}

/// h0 = I, h1 = I cos(phi), h2 = -I sin(phi).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HTriplet {
    pub h0: f64,
    pub h1: f64,
    pub h2: f64,
}

impl HTriplet {
    /// h0^2 - h1^2 - h2^2, zero on the cone.
    pub fn cone(&self) -> f64 {
        self.h0 * self.h0 - self.h1 * self.h1 - self.h2 * self.h2
    }

    /// Free-particle Hamiltonian omega h2^2 / h0.
    pub fn free_particle(&self, omega: f64) -> f64 {
        omega * self.h2 * self.h2 / self.h0
    }

    pub fn to_angle_action(&self) -> Result<AngleAction> {
        AngleAction::new((-self.h2).atan2(self.h1), self.h0)
    }
}

pub fn h_triplet(s: &AngleAction) -> HTriplet {
    HTriplet { h0: s.action, h1: s.action * s.phi.cos(), h2: -s.action * s.phi.sin() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratingFunction {
    F1,
    F2,
    F3,
    F4,
}

/// F1(q, phi) = q^2 tan(phi) / 2.
pub fn f1(q: f64, phi: f64) -> Result<f64> {
    if phi.cos().abs() < 1e-12 {
        return Err(Error::Singular("F1 is undefined at phi = +-pi/2".into()));
    }
    Ok(0.5 * q * q * phi.tan())
}

/// F2(q, I) on the branch selected by the sign of p (upper: p <= 0).
pub fn f2(q: f64, action: f64, upper: bool) -> Result<f64> {
    let d = 2.0 * action - q * q;
    if !(action > 0.0) || d < 0.0 {
        return domain("F2 requires q^2 <= 2I");
    }
    let r = (2.0 * action).sqrt();
    let v = action * (q / r).clamp(-1.0, 1.0).acos() - 0.5 * q * d.sqrt();
    Ok(if upper { v } else { -v })
}

/// F3(q, p) = q p.
pub fn f3(q: f64, p: f64) -> f64 {
    q * p
}

/// F4(phi, I) = I cos(phi) sin(phi).
pub fn f4(phi: f64, action: f64) -> f64 {
    action * phi.cos() * phi.sin()
}

/// Evaluates the chosen generating function at a phase-space point.
pub fn generating_function(which: GeneratingFunction, s: &AngleAction) -> Result<f64> {
    let x = to_phase_point(s);
    match which {
        GeneratingFunction::F1 => f1(x.q, s.phi),
        GeneratingFunction::F2 => f2(x.q, s.action, x.p <= 0.0),
        GeneratingFunction::F3 => Ok(f3(x.q, x.p)),
        GeneratingFunction::F4 => Ok(f4(s.phi, s.action)),
    }
}

/// SO(1,2) action of an SU(1,1) matrix [[alpha, beta], [beta*, alpha*]] on (phi, I).
pub fn mobius_su11(g: &Matrix2<C64>, s: &AngleAction) -> AngleAction {
    let (alpha, beta) = (g[(0, 0)], g[(0, 1)]);
    let e = C64::from_polar(1.0, s.phi);
    let d = alpha + e * beta;
    let e2 = (alpha.conj() * e + beta.conj()) / d;
    AngleAction { phi: wrap_angle(e2.arg()), action: d.norm_sqr() * s.action }
}

/// Action of a covering-group element on (phi, I).
pub fn mobius_action(g: &CoverElement, s: &AngleAction) -> AngleAction {
    mobius_su11(&g.to_su11(), s)
}

/// rho_a = cosh(tau) - sinh(tau) sin(phi) and the image under a0(tau).
pub fn boost_a_closed(tau: f64, s: &AngleAction) -> AngleAction {
    let rho = tau.cosh() - tau.sinh() * s.phi.sin();
    let c = s.phi.cos() / rho;
    let sn = (tau.cosh() * s.phi.sin() - tau.sinh()) / rho;
    AngleAction { phi: sn.atan2(c), action: rho * s.action }
}

/// rho_b = cosh(s) + sinh(s) cos(phi) and the image under b0(s).
pub fn boost_b_closed(sb: f64, s: &AngleAction) -> AngleAction {
    let rho = sb.cosh() + sb.sinh() * s.phi.cos();
    let c = (sb.cosh() * s.phi.cos() + sb.sinh()) / rho;
    let sn = s.phi.sin() / rho;
    AngleAction { phi: sn.atan2(c), action: rho * s.action }
}

/// rho_n = 1 + xi cos(phi) + xi^2 (1 + sin(phi))/2 and the image under n0(xi).
pub fn null_n_closed(xi: f64, s: &AngleAction) -> AngleAction {
    let (sp, cp) = s.phi.sin_cos();
    let rho = 1.0 + xi * cp + 0.5 * xi * xi * (1.0 + sp);
    let c = (cp + xi * (1.0 + sp)) / rho;
    let sn = (sp - xi * cp - 0.5 * xi * xi * (1.0 + sp)) / rho;
    AngleAction { phi: sn.atan2(c), action: rho * s.action }
}

/// Element mapping `from` onto `to`: rotate to phi = pi/2, boost with a0, rotate.
pub fn transitivity_element(from: &AngleAction, to: &AngleAction) -> CoverElement {
    let r1 = CoverElement::rotation(from.phi - FRAC_PI_2);
    // at phi = pi/2 the A0 factor is e^{-tau} and the angle stays put
    let a = CoverElement::boost_a((from.action / to.action).ln());
    let r2 = CoverElement::rotation(FRAC_PI_2 - to.phi);
    cover_compose(&r2, &cover_compose(&a, &r1))
}

pub type Sp2 = Matrix2<f64>;

pub fn r1(theta: f64) -> Sp2 {
    let (s, c) = (0.5 * theta).sin_cos();
    Sp2::new(c, s, -s, c)
}

pub fn a1(tau: f64) -> Sp2 {
    Sp2::new((-0.5 * tau).exp(), 0.0, 0.0, (0.5 * tau).exp())
}

pub fn b1(s: f64) -> Sp2 {
    let (c, h) = ((0.5 * s).cosh(), (0.5 * s).sinh());
    Sp2::new(c, h, h, c)
}

pub fn n1(xi: f64) -> Sp2 {
    Sp2::new(1.0, xi, 0.0, 1.0)
}

/// Linear action of a real unimodular matrix on (q, p).
pub fn sp2_action_on_plane(g: &Sp2, x: &PhasePoint) -> Result<PhasePoint> {
    if (g.determinant() - 1.0).abs() > 1e-12 {
        return domain(format!("Sp(2,R) element needs det = 1, got {}", g.determinant()));
    }
    Ok(PhasePoint { q: g[(0, 0)] * x.q + g[(0, 1)] * x.p, p: g[(1, 0)] * x.q + g[(1, 1)] * x.p })
}

/// Hamiltonian functions (g0, g1, g2) = ((q^2+p^2)/4, (p^2-q^2)/4, -qp/2).
pub fn g_check(x: &PhasePoint) -> [f64; 3] {
    let (q, p) = (x.q, x.p);
    [0.25 * (q * q + p * p), 0.25 * (p * p - q * q), -0.5 * q * p]
}

/// Cayley-type map C0 g1 C0^{-1} from Sp(2,R) onto SU(1,1).
pub fn sp2_to_su11(g: &Sp2) -> Matrix2<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c0 = Matrix2::new(C64::new(s, 0.0), C64::new(0.0, -s), C64::new(0.0, -s), C64::new(s, 0.0));
    let gc = g.map(|x| C64::new(x, 0.0));
    c0 * gc * c0.adjoint()
}

/// Central-difference step h = 1e-6 max(1, |x|).
pub fn fd_step(x: f64) -> f64 {
    1e-6 * x.abs().max(1.0)
}

/// {f, g} = df/dphi dg/dI - df/dI dg/dphi by central differences.
pub fn poisson_bracket(f: impl Fn(f64, f64) -> f64, g: impl Fn(f64, f64) -> f64, s: &AngleAction) -> Result<f64> {
    let hp = fd_step(s.phi);
    let hi = fd_step(s.action).min(0.5 * s.action);
    if hi <= 1e-300 {
        return Err(Error::Domain("finite-difference step underflow".into()));
    }
    let (p, i) = (s.phi, s.action);
    let dphi = |h: &dyn Fn(f64, f64) -> f64| (h(p + hp, i) - h(p - hp, i)) / (2.0 * hp);
    let di = |h: &dyn Fn(f64, f64) -> f64| (h(p, i + hi) - h(p, i - hi)) / (2.0 * hi);
    Ok(dphi(&f) * di(&g) - di(&f) * dphi(&g))
}

/// Sample of a perturbed orbit; `phi_unwrapped` is continuous in t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSample {
    pub t: f64,
    pub state: AngleAction,
    pub phi_unwrapped: f64,
    pub winding: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Perturbation {
    /// H = I (1 + gamma cos phi)
    H1,
    /// H = I (1 - gamma sin phi)
    H2,
}

/// Perturbed Hamiltonian value.
pub fn perturbed_energy(kind: Perturbation, gamma: f64, s: &AngleAction) -> f64 {
    match kind {
        Perturbation::H1 => s.action * (1.0 + gamma * s.phi.cos()),
        Perturbation::H2 => s.action * (1.0 - gamma * s.phi.sin()),
    }
}

/// Closed-form orbit of the perturbed oscillator.
pub fn perturbed_orbit(kind: Perturbation, gamma: f64, t: f64, initial: &AngleAction) -> Result<OrbitSample> {
    if !(gamma.abs() < 1.0) {
        return domain(format!("perturbation needs |gamma| < 1, got {gamma}"));
    }
    let s = (1.0 - gamma * gamma).sqrt();
    let (sh, ch) = (0.5 * initial.phi).sin_cos();
    let energy = perturbed_energy(kind, gamma, initial);
    let phi = match kind {
        Perturbation::H1 => {
            // tan(phi/2) = c tan(u)
            let c = ((1.0 + gamma) / (1.0 - gamma)).sqrt();
            let u = sh.atan2(c * ch) + 0.5 * s * t;
            2.0 * ((c * u.tan()).atan() + PI * (u / PI).round())
        }
        Perturbation::H2 => {
            // tan(phi/2) = gamma + s tan(u)
            let u = (sh - gamma * ch).atan2(s * ch) + 0.5 * s * t;
            2.0 * ((gamma + s * u.tan()).atan() + PI * (u / PI).round())
        }
    };
    let w = wrap_angle(phi);
    let factor = match kind {
        Perturbation::H1 => 1.0 + gamma * w.cos(),
        Perturbation::H2 => 1.0 - gamma * w.sin(),
    };
    let state = AngleAction { phi: w, action: energy / factor };
    Ok(OrbitSample { t, state, phi_unwrapped: phi, winding: winding(phi) })
}

/// Orbit for H = (1 + g(t)) I: I fixed, phi = phi0 + t + G(t) with G = int_0^t g.
pub fn time_dependent_orbit(g_integral: impl Fn(f64) -> f64, t: f64, initial: &AngleAction) -> OrbitSample {
    let phi = initial.phi + t + g_integral(t);
    OrbitSample {
        t,
        state: AngleAction { phi: wrap_angle(phi), action: initial.action },
        phi_unwrapped: phi,
        winding: winding(phi),
    }
}

/// CSV trace with columns t, phi, I, q, p.
pub fn orbit_trace_csv(kind: Perturbation, gamma: f64, initial: &AngleAction, times: &[f64]) -> Result<String> {
    let mut out = String::from("t,phi,I,q,p\n");
    for &t in times {
        let o = perturbed_orbit(kind, gamma, t, initial)?;
        let x = to_phase_point(&o.state);
        out.push_str(&format!("{},{},{},{},{}\n", t, o.state.phi, o.state.action, x.q, x.p));
    }
    Ok(out)
}

/// Scale map phi -> phi/beta, I -> beta I.
pub fn scale_transform(beta: f64, s: &AngleAction) -> Result<AngleAction> {
    if !(beta > 0.0) {
        return domain("scale factor beta must be positive");
    }
    AngleAction::new(s.phi / beta, beta * s.action)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PotentialKind {
    Morse,
    SymMorse,
    PoschlTeller,
    Confining,
}

impl std::str::FromStr for PotentialKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "morse" => Ok(PotentialKind::Morse),
            "sym-morse" | "symmorse" => Ok(PotentialKind::SymMorse),
            "poschl-teller" | "pt" => Ok(PotentialKind::PoschlTeller),
            "confining" => Ok(PotentialKind::Confining),
            _ => domain(format!("unknown potential '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub v0: f64,
    pub a: f64,
    pub m: f64,
}

impl PotentialSpec {
    pub fn new(kind: PotentialKind, v0: f64, a: f64, m: f64) -> Result<Self> {
        if !(v0 > 0.0 && a > 0.0 && m > 0.0) {
            return domain("potential parameters V0, a, M must be positive");
        }
        Ok(PotentialSpec { kind, v0, a, m })
    }

    /// Small-oscillation frequency.
    pub fn omega0(&self) -> f64 {
        let w = self.a * (2.0 * self.v0 / self.m).sqrt();
        if self.kind == PotentialKind::Confining {
            2.0 * w
        } else {
            w
        }
    }

    /// Dimensionless potential v(x) = V(x/a)/V0.
    pub fn v(&self, x: f64) -> f64 {
        match self.kind {
            PotentialKind::Morse => ((-x).exp() - 1.0).powi(2),
            PotentialKind::SymMorse => x.tanh().powi(2),
            PotentialKind::PoschlTeller => x.tan().powi(2),
            PotentialKind::Confining => (x - 1.0 / x).powi(2),
        }
    }

    /// Turning points at dimensionless energy E.
    pub fn turning_points(&self, e: f64) -> Result<(f64, f64)> {
        self.check_energy(e)?;
        let r = e.sqrt();
        Ok(match self.kind {
            PotentialKind::Morse => (-(1.0 + r).ln(), -(1.0 - r).ln()),
            PotentialKind::SymMorse => (-r.atanh(), r.atanh()),
            PotentialKind::PoschlTeller => (-r.atan(), r.atan()),
            PotentialKind::Confining => (0.5 * (-r + (e + 4.0).sqrt()), 0.5 * (r + (e + 4.0).sqrt())),
        })
    }

    fn check_energy(&self, e: f64) -> Result<()> {
        let ok = match self.kind {
            PotentialKind::Morse | PotentialKind::SymMorse => e > 0.0 && e < 1.0,
            _ => e > 0.0 && e.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            domain(format!("energy {e} outside the bound-state range of {:?}", self.kind))
        }
    }

    /// Closed-form dimensionless action I(E).
    pub fn action_closed(&self, e: f64) -> Result<f64> {
        self.check_energy(e)?;
        Ok(match self.kind {
            PotentialKind::Morse | PotentialKind::SymMorse => 2.0 * (1.0 - (1.0 - e).sqrt()),
            PotentialKind::PoschlTeller => 2.0 * ((e + 1.0).sqrt() - 1.0),
            PotentialKind::Confining => e,
        })
    }
}

/// Action from quadrature, with the closed form alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionValue {
    pub energy: f64,
    pub quadrature: f64,
    pub closed_form: f64,
}

/// pi I = c int sqrt(E - v(x)) dx between the turning points (c = 2, or 4 for
/// the confining potential), with x = m + h sin(xi) removing the endpoint roots.
pub fn action_of_energy(pot: &PotentialSpec, e: f64) -> Result<ActionValue> {
    let (lo, hi) = pot.turning_points(e)?;
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let f = |xi: f64| {
        let x = mid + half * xi.sin();
        (e - pot.v(x)).max(0.0).sqrt() * half * xi.cos()
    };
    let integral = adaptive_gk(f, -FRAC_PI_2, FRAC_PI_2, 1e-12)?;
    let c = if pot.kind == PotentialKind::Confining { 4.0 } else { 2.0 };
    Ok(ActionValue { energy: e, quadrature: c * integral / PI, closed_form: pot.action_closed(e)? })
}

/// f(b) = int_{-b}^{b} sqrt(b^2 - u^2)/(1 + u) du = pi (1 - sqrt(1 - b^2)).
pub fn f_of_b(b: f64) -> Result<f64> {
    if !(b.abs() < 1.0) {
        return domain("f(b) needs |b| < 1");
    }
    Ok(PI * (1.0 - (1.0 - b * b).sqrt()))
}

/// Quantized levels E = hbar w0 (n+k)[1 -+ hbar w0 (n+k)/(4 V0)].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizedSpectrum {
    pub levels: Vec<f64>,
    pub valid: Vec<bool>,
    /// Largest valid n, if the spectrum is cut off.
    pub n_cut: Option<usize>,
}

pub fn quantized_spectrum(pot: &PotentialSpec, k: BargmannIndex, n_max: usize, hbar: f64) -> Result<QuantizedSpectrum> {
    let hw = hbar * pot.omega0();
    let kv = k.value();
    let level = |n: usize| {
        let x = hw * (n as f64 + kv);
        match pot.kind {
            PotentialKind::Morse | PotentialKind::SymMorse => x * (1.0 - x / (4.0 * pot.v0)),
            PotentialKind::PoschlTeller => x * (1.0 + x / (4.0 * pot.v0)),
            PotentialKind::Confining => x,
        }
    };
    let bounded = matches!(pot.kind, PotentialKind::Morse | PotentialKind::SymMorse);
    // E(n) rises while hbar w0 (n+k) < 2 V0, where it reaches the dissociation limit V0
    let valid_n = |n: usize| !bounded || hw * (n as f64 + kv) < 2.0 * pot.v0;
    if !valid_n(0) {
        return Err(Error::Domain("no bound state: hbar*omega0*k >= 2 V0".into()));
    }
    let levels = (0..=n_max).map(level).collect();
    let valid: Vec<bool> = (0..=n_max).map(valid_n).collect();
    let n_cut = if bounded {
        Some(((2.0 * pot.v0 / hw - kv).ceil() as usize).saturating_sub(1))
    } else {
        None
    };
    Ok(QuantizedSpectrum { levels, valid, n_cut })
}
