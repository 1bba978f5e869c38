//! Barut-Girardello, Perelomov and Schroedinger-Glauber coherent states of
//! D_k^(+).
//!
//! Parameters carry the phase convention z = I e^{-i phi} (BG),
//! lambda = |lambda| e^{-i phi} (Perelomov), alpha = sqrt(I) e^{-i phi} (SG).

use crate::error::{domain, Error, Result};
use crate::repcore::{expm, BargmannIndex, CMat, TruncatedRep};
use crate::specfun::{g_k, g_k_complex, ln_g_k, ln_pochhammer, ln_factorial, rho_k};
use crate::C64;
use serde::{Deserialize, Serialize};

/// Tail bound required by [`make_state`].
pub const TAIL_LIMIT: f64 = 1e-10;
/// Target tail bound for automatic truncation.
pub const AUTO_TAIL: f64 = 1e-12;
/// Upper limit for automatic truncation.
pub const MAX_DIM: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoherentFamily {
    BG,
    Perelomov,
    SG,
}

impl std::str::FromStr for CoherentFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bg" | "barut-girardello" => Ok(CoherentFamily::BG),
            "p" | "perelomov" => Ok(CoherentFamily::Perelomov),
            "sg" | "glauber" | "schroedinger-glauber" => Ok(CoherentFamily::SG),
            _ => domain(format!("unknown coherent family '{s}'")),
        }
    }
}

fn check_param(family: CoherentFamily, param: C64) -> Result<()> {
    if !param.re.is_finite() || !param.im.is_finite() {
        return domain("coherent-state parameter must be finite");
    }
    if family == CoherentFamily::Perelomov && param.norm() >= 1.0 {
        return domain(format!("Perelomov parameter needs |lambda| < 1, got {}", param.norm()));
    }
    Ok(())
}

/// ln |c_n|^2 for the closed-form amplitudes.
fn ln_prob(family: CoherentFamily, k: f64, param: C64, n: usize) -> Result<f64> {
    let x = param.norm_sqr();
    let nf = n as f64;
    let lnx = if x > 0.0 { x.ln() } else { f64::NEG_INFINITY };
    let pow = if n == 0 { 0.0 } else { nf * lnx };
    Ok(match family {
        CoherentFamily::BG => pow - ln_pochhammer(2.0 * k, n) - ln_factorial(n) - ln_g_k(x, k)?,
        CoherentFamily::Perelomov => 2.0 * k * (1.0 - x).ln() + ln_pochhammer(2.0 * k, n) - ln_factorial(n) + pow,
        CoherentFamily::SG => -x + pow - ln_factorial(n),
    })
}

/// Ratio |c_{n+1}|^2 / |c_n|^2.
fn prob_ratio(family: CoherentFamily, k: f64, x: f64, n: usize) -> f64 {
    let nf = n as f64;
    match family {
        CoherentFamily::BG => x / ((2.0 * k + nf) * (nf + 1.0)),
        CoherentFamily::Perelomov => x * (2.0 * k + nf) / (nf + 1.0),
        CoherentFamily::SG => x / (nf + 1.0),
    }
}

/// Analytic bound on sum_{n >= dim} |c_n|^2 from a geometric majorant.
pub fn tail_bound(family: CoherentFamily, k: BargmannIndex, param: C64, dim: usize) -> Result<f64> {
    check_param(family, param)?;
    let kv = k.value();
    let x = param.norm_sqr();
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut q = prob_ratio(family, kv, x, dim);
    if family == CoherentFamily::Perelomov {
        q = q.max(x);
    }
    if q >= 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(ln_prob(family, kv, param, dim)?.exp() / (1.0 - q))
}

/// Smallest dimension with tail bound below `AUTO_TAIL`.
pub fn auto_dim(family: CoherentFamily, k: BargmannIndex, param: C64) -> Result<usize> {
    dim_for_tail(family, k, param, AUTO_TAIL)
}

/// Smallest multiple of 8 with tail bound below `tol`, capped at `MAX_DIM`.
pub fn dim_for_tail(family: CoherentFamily, k: BargmannIndex, param: C64, tol: f64) -> Result<usize> {
    check_param(family, param)?;
    let mut n = 8;
    while n < MAX_DIM {
        if tail_bound(family, k, param, n)? < tol {
            return Ok(n);
        }
        n += 8;
    }
    Ok(MAX_DIM)
}

/// Truncated coherent state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentState {
    pub family: CoherentFamily,
    pub k: BargmannIndex,
    pub param: C64,
    /// Global phase accumulated by time evolution.
    pub phase: C64,
    pub amplitudes: Vec<C64>,
    pub tail_bound: f64,
}

/// Closed-form amplitudes c_n, n < dim, without global phase.
pub fn amplitudes(family: CoherentFamily, k: BargmannIndex, param: C64, dim: usize) -> Result<Vec<C64>> {
    check_param(family, param)?;
    let kv = k.value();
    let unit = if param.norm() > 0.0 { param / param.norm() } else { C64::new(1.0, 0.0) };
    let mut out = Vec::with_capacity(dim);
    let mut ph = C64::new(1.0, 0.0);
    for n in 0..dim {
        let lp = ln_prob(family, kv, param, n)?;
        let m = if lp.is_finite() { (0.5 * lp).exp() } else { 0.0 };
        out.push(ph * m);
        ph *= unit;
    }
    Ok(out)
}

impl CoherentState {
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Amplitudes padded with zeros to `n` entries.
    pub fn vector(&self, n: usize) -> nalgebra::DVector<C64> {
        nalgebra::DVector::from_fn(n, |i, _| self.amplitudes.get(i).copied().unwrap_or_default())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family,
            "k": self.k.value(),
            "param": [self.param.re, self.param.im],
            "phase": [self.phase.re, self.phase.im],
            "tail_bound": self.tail_bound,
            "amplitudes": self.amplitudes.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
        })
    }
}

/// Coherent state truncated to `dim` number states.
pub fn make_state(family: CoherentFamily, k: BargmannIndex, param: C64, dim: usize) -> Result<CoherentState> {
    check_param(family, param)?;
    if dim == 0 {
        return domain("state dimension must be positive");
    }
    let tail = tail_bound(family, k, param, dim)?;
    if !(tail < TAIL_LIMIT) {
        return Err(Error::Truncation(format!("tail bound {tail:e} at N = {dim}")));
    }
    let amps = amplitudes(family, k, param, dim)?;
    Ok(CoherentState { family, k, param, phase: C64::new(1.0, 0.0), amplitudes: amps, tail_bound: tail })
}

/// Coherent state with automatically chosen truncation.
pub fn make_state_auto(family: CoherentFamily, k: BargmannIndex, param: C64) -> Result<CoherentState> {
    let n = auto_dim(family, k, param)?;
    make_state(family, k, param, n)
}

/// First and second moments of N and K-.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean_n: f64,
    pub mean_n2: f64,
    pub mean_km: C64,
    pub mean_km2: C64,
}

fn sg_sums(k: f64, x: f64) -> (f64, f64) {
    // e^{-x} sum sqrt(2k+n) x^n/n! and e^{-x} sum sqrt((2k+n)(2k+n+1)) x^n/n!
    let nmax = (x + 40.0 * x.sqrt().max(1.0) + 40.0) as usize;
    let mut h = 0.0;
    let mut h2 = 0.0;
    for n in 0..nmax {
        let nf = n as f64;
        let lw = if n == 0 { -x } else { -x + nf * x.ln() - ln_factorial(n) };
        let w = lw.exp();
        h += w * (2.0 * k + nf).sqrt();
        h2 += w * ((2.0 * k + nf) * (2.0 * k + nf + 1.0)).sqrt();
    }
    (h, h2)
}

/// Closed-form moments.
pub fn moments(family: CoherentFamily, k: BargmannIndex, param: C64) -> Result<Moments> {
    check_param(family, param)?;
    let kv = k.value();
    let r2 = param.norm_sqr();
    let r = r2.sqrt();
    Ok(match family {
        CoherentFamily::BG => {
            let rho = rho_k(kv, r)?;
            let rho2 = rho_k(kv + 0.5, r)?;
            let mean_n = r * rho;
            Moments { mean_n, mean_n2: r2 * rho * rho2 + mean_n, mean_km: param, mean_km2: param * param }
        }
        CoherentFamily::Perelomov => {
            let d = 1.0 - r2;
            let mean_n = 2.0 * kv * r2 / d;
            let var = 2.0 * kv * r2 / (d * d);
            Moments {
                mean_n,
                mean_n2: var + mean_n * mean_n,
                mean_km: param * (2.0 * kv / d),
                mean_km2: param * param * (2.0 * kv * (2.0 * kv + 1.0) / (d * d)),
            }
        }
        CoherentFamily::SG => {
            let (h, h2) = sg_sums(kv, r2);
            Moments { mean_n: r2, mean_n2: r2 * r2 + r2, mean_km: param * h, mean_km2: param * param * h2 }
        }
    })
}

/// Means and variances of K0, K1, K2 (and the mean quantum number).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectationReport {
    pub mean_k0: f64,
    pub mean_k1: f64,
    pub mean_k2: f64,
    pub mean_n: f64,
    pub var_k0: f64,
    pub var_k1: f64,
    pub var_k2: f64,
}

impl ExpectationReport {
    pub fn uncertainty_k1k2(&self) -> f64 {
        (self.var_k1 * self.var_k2).sqrt()
    }

    fn from_moments(k: f64, m: &Moments) -> Self {
        let mean_k0 = m.mean_n + k;
        let kpkm = m.mean_n2 + (2.0 * k - 1.0) * m.mean_n;
        let k1sq = 0.25 * (2.0 * m.mean_km2.re + 2.0 * kpkm + 2.0 * mean_k0);
        let k2sq = 0.25 * (-2.0 * m.mean_km2.re + 2.0 * kpkm + 2.0 * mean_k0);
        let mean_k1 = m.mean_km.re;
        let mean_k2 = -m.mean_km.im;
        ExpectationReport {
            mean_k0,
            mean_k1,
            mean_k2,
            mean_n: m.mean_n,
            var_k0: (m.mean_n2 - m.mean_n * m.mean_n).max(0.0),
            var_k1: (k1sq - mean_k1 * mean_k1).max(0.0),
            var_k2: (k2sq - mean_k2 * mean_k2).max(0.0),
        }
    }
}

/// Closed-form expectation values.
pub fn expectations(family: CoherentFamily, k: BargmannIndex, param: C64) -> Result<ExpectationReport> {
    Ok(ExpectationReport::from_moments(k.value(), &moments(family, k, param)?))
}

fn sandwich(v: &nalgebra::DVector<C64>, m: &CMat) -> C64 {
    (v.adjoint() * m * v)[(0, 0)]
}

/// Expectation values from truncated matrices, for cross-checks.
pub fn matrix_expectations(state: &CoherentState, rep: &TruncatedRep) -> Result<ExpectationReport> {
    if rep.k != state.k {
        return Err(Error::Mismatch("state and representation have different k".into()));
    }
    let v = state.vector(rep.dim);
    let norm = v.norm_squared();
    let e = |m: &CMat| sandwich(&v, m).re / norm;
    let var = |m: &CMat| e(&(m * m)) - e(m).powi(2);
    Ok(ExpectationReport {
        mean_k0: e(&rep.k0),
        mean_k1: e(&rep.k1),
        mean_k2: e(&rep.k2),
        mean_n: e(&rep.nop),
        var_k0: var(&rep.k0),
        var_k1: var(&rep.k1),
        var_k2: var(&rep.k2),
    })
}

/// <H(Q,P)> = |alpha|^2 + 1/2 for SG states.
pub fn sg_mean_hamiltonian(alpha: C64) -> f64 {
    alpha.norm_sqr() + 0.5
}

/// Inverse of the Perelomov mean occupation: |lambda|^2 = nbar/(nbar + 2k).
pub fn perelomov_modulus_sq(mean_n: f64, k: BargmannIndex) -> f64 {
    mean_n / (mean_n + 2.0 * k.value())
}

/// Number distribution p_n for n = 0..=n_max.
pub fn number_distribution(family: CoherentFamily, k: BargmannIndex, param: C64, n_max: usize) -> Result<Vec<f64>> {
    check_param(family, param)?;
    (0..=n_max)
        .map(|n| ln_prob(family, k.value(), param, n).map(|l| if l.is_finite() { l.exp() } else { 0.0 }))
        .collect()
}

fn closed_overlap(a: &CoherentState, b: &CoherentState) -> Result<Option<C64>> {
    use CoherentFamily::*;
    let k = a.k.value();
    let (x, y) = (a.param, b.param);
    let v = match (a.family, b.family) {
        (BG, BG) => {
            let num = g_k_complex(x.conj() * y, k)?;
            Some(num / (g_k(x.norm_sqr(), k)? * g_k(y.norm_sqr(), k)?).sqrt())
        }
        (Perelomov, Perelomov) => {
            let pre = ((1.0 - x.norm_sqr()) * (1.0 - y.norm_sqr())).powf(k);
            Some((C64::new(1.0, 0.0) - x.conj() * y).powf(-2.0 * k) * pre)
        }
        (SG, SG) => Some((x.conj() * y - 0.5 * (x.norm_sqr() + y.norm_sqr())).exp()),
        (Perelomov, BG) => Some((x.conj() * y).exp() * (1.0 - x.norm_sqr()).powf(k) / g_k(y.norm_sqr(), k)?.sqrt()),
        (BG, Perelomov) => Some(((y.conj() * x).exp() * (1.0 - y.norm_sqr()).powf(k) / g_k(x.norm_sqr(), k)?.sqrt()).conj()),
        _ => None,
    };
    Ok(v)
}

/// Truncated inner product <a|b>.
pub fn overlap_series(a: &CoherentState, b: &CoherentState) -> C64 {
    a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.conj() * y).sum()
}

/// <a|b>, closed form where one exists and the truncated sum otherwise.
pub fn overlap(a: &CoherentState, b: &CoherentState) -> Result<C64> {
    if a.k != b.k {
        return Err(Error::Mismatch(format!("overlap needs equal k, got {} and {}", a.k.value(), b.k.value())));
    }
    match closed_overlap(a, b)? {
        Some(v) => Ok(v * a.phase.conj() * b.phase),
        None => Ok(overlap_series(a, b)),
    }
}

/// |<lambda|z>|^2 = (1-|lambda|^2)^{2k} e^{2 Re(lambda* z)} / g_k(|z|^2).
pub fn bg_perelomov_transition(k: BargmannIndex, lambda: C64, z: C64) -> Result<f64> {
    check_param(CoherentFamily::Perelomov, lambda)?;
    let kv = k.value();
    Ok((2.0 * kv * (1.0 - lambda.norm_sqr()).ln() + 2.0 * (lambda.conj() * z).re - ln_g_k(z.norm_sqr(), kv)?).exp())
}

/// Free evolution by dimensionless time t: param -> param e^{-it}, phase e^{-ikt}.
pub fn evolve(state: &CoherentState, t: f64) -> CoherentState {
    let k = state.k.value();
    let amplitudes = state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(n, c)| c * C64::from_polar(1.0, -(n as f64 + k) * t))
        .collect();
    CoherentState {
        family: state.family,
        k: state.k,
        param: state.param * C64::from_polar(1.0, -t),
        phase: state.phase * C64::from_polar(1.0, -k * t),
        amplitudes,
        tail_bound: state.tail_bound,
    }
}

/// U_SG = exp(alpha A^dag - alpha* A).
pub fn displacement_unitary(alpha: C64, rep: &TruncatedRep) -> Result<CMat> {
    if tail_bound(CoherentFamily::SG, rep.k, alpha, rep.dim / 2)? > TAIL_LIMIT {
        return Err(Error::Truncation(format!("|alpha|^2 = {} too large for N = {}", alpha.norm_sqr(), rep.dim)));
    }
    Ok(expm(&(&rep.adag * alpha - &rep.a * alpha.conj())))
}

/// Perelomov parameter generated by U_P(w): tanh(|w|/2) w/|w|.
pub fn perelomov_lambda(w: C64) -> C64 {
    let r = w.norm();
    if r == 0.0 {
        C64::default()
    } else {
        w * ((0.5 * r).tanh() / r)
    }
}

/// U_P = exp((w/2) K+ - (w*/2) K-).
pub fn perelomov_unitary(w: C64, rep: &TruncatedRep) -> Result<CMat> {
    let lambda = perelomov_lambda(w);
    if tail_bound(CoherentFamily::Perelomov, rep.k, lambda, rep.dim / 2)? > TAIL_LIMIT {
        return Err(Error::Truncation(format!("|w| = {} too large for N = {}", w.norm(), rep.dim)));
    }
    Ok(expm(&(&rep.kplus * (w * 0.5) - &rep.kminus * (w.conj() * 0.5))))
}

/// E_{k,+} = K+ (K0 + k)^{-1}.
pub fn e_plus(rep: &TruncatedRep) -> CMat {
    let k = rep.k.value();
    let inv = CMat::from_diagonal(&rep.k0.diagonal().map(|d| C64::new(1.0 / (d.re + k), 0.0)));
    &rep.kplus * inv
}

/// E_{k,-} = (K0 + k)^{-1} K-, the Perelomov annihilator.
pub fn e_minus(rep: &TruncatedRep) -> CMat {
    let k = rep.k.value();
    let inv = CMat::from_diagonal(&rep.k0.diagonal().map(|d| C64::new(1.0 / (d.re + k), 0.0)));
    inv * &rep.kminus
}

/// Non-unitary BG generator F_k(z) = exp(z E_{k,+}).
pub fn bg_generator(z: C64, rep: &TruncatedRep) -> CMat {
    expm(&(e_plus(rep) * z))
}

/// Classical (phi, I) encoded by a coherent-state parameter.
pub fn classical_params(family: CoherentFamily, k: BargmannIndex, param: C64) -> Result<(f64, f64)> {
    let _ = k;
    check_param(family, param)?;
    let r = param.norm();
    let phi = if r == 0.0 { 0.0 } else { -param.arg() };
    let action = match family {
        CoherentFamily::BG => r,
        CoherentFamily::Perelomov => 2.0 * r / (1.0 - r * r),
        CoherentFamily::SG => r * r,
    };
    Ok((phi, action))
}

/// Parameter with classical angle phi and action I.
pub fn param_from_classical(family: CoherentFamily, phi: f64, action: f64) -> Result<C64> {
    if !(action >= 0.0) {
        return domain("action must be nonnegative");
    }
    let r = match family {
        CoherentFamily::BG => action,
        // |w| = asinh I, |lambda| = tanh(|w|/2)
        CoherentFamily::Perelomov => (0.5 * action.asinh()).tanh(),
        CoherentFamily::SG => action.sqrt(),
    };
    Ok(C64::from_polar(r, -phi))
}
