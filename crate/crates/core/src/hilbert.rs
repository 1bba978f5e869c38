//! Concrete Hilbert spaces for D_k^(+): the Hardy space on the circle (plain
//! and A_k-weighted), holomorphic functions on the unit disc and Laguerre
//! functions on the half-line.
//!
//! Circle points are angles theta, disc points complex omega with |omega| < 1,
//! half-line points u > 0.

use crate::coherent::{amplitudes, classical_params, dim_for_tail, make_state, CoherentFamily};
use crate::error::{domain, Error, Result};
use crate::repcore::{BargmannIndex, CMat, CoverElement};
use crate::specfun::{bessel_i_scaled, confluent_phi, g_k, g_k_complex, laguerre_all, ln_factorial, ln_gamma, ln_pochhammer};
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default regularization of the circle kernels.
pub const KERNEL_EPS: f64 = 1e-8;
/// Default trapezoid size on the circle.
pub const CIRCLE_POINTS: usize = 4096;
/// Default Gauss-Laguerre size on the half-line.
pub const HALFLINE_NODES: usize = 128;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Space {
    /// Hardy space H^2_+ with basis e^{i n theta}.
    CircleHalf,
    /// H^2_{k,+} with the A_k-weighted product and basis sqrt((2k)_n/n!) e^{i n theta}.
    CircleWeighted,
    /// Holomorphic functions on the unit disc.
    Disc,
    /// L^2(R_+, du) with Laguerre functions.
    HalfLine,
}

impl std::str::FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "circle" | "circle-half" | "hardy" => Ok(Space::CircleHalf),
            "circle-weighted" | "weighted" => Ok(Space::CircleWeighted),
            "disc" | "disk" => Ok(Space::Disc),
            "halfline" | "half-line" | "laguerre" => Ok(Space::HalfLine),
            _ => domain(format!("unknown space '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Point {
    Angle(f64),
    Disc(C64),
    Line(f64),
}

fn angle(space: Space, p: Point) -> Result<f64> {
    match p {
        Point::Angle(t) if t.is_finite() => Ok(t),
        _ => Err(Error::Mismatch(format!("{space:?} needs an angle point, got {p:?}"))),
    }
}

fn disc_point(p: Point) -> Result<C64> {
    match p {
        Point::Disc(w) if w.norm() < 1.0 => Ok(w),
        Point::Disc(w) => domain(format!("disc point needs |omega| < 1, got {}", w.norm())),
        _ => Err(Error::Mismatch(format!("disc space needs a disc point, got {p:?}"))),
    }
}

fn line_point(p: Point) -> Result<f64> {
    match p {
        Point::Line(u) if u > 0.0 && u.is_finite() => Ok(u),
        Point::Line(u) => domain(format!("half-line point needs u > 0, got {u}")),
        _ => Err(Error::Mismatch(format!("half-line space needs a line point, got {p:?}"))),
    }
}

/// sqrt((2k)_n / n!)
fn weight_sqrt(k: f64, n: usize) -> f64 {
    (0.5 * (ln_pochhammer(2.0 * k, n) - ln_factorial(n))).exp()
}

/// Laguerre functions e_{k,n}(u), n = 0..=n_max.
pub fn halfline_basis_all(k: BargmannIndex, n_max: usize, u: f64) -> Result<Vec<f64>> {
    if !(u > 0.0) {
        return domain("half-line basis needs u > 0");
    }
    let kv = k.value();
    let lag = laguerre_all(n_max, 2.0 * kv - 1.0, u);
    let base = (kv - 0.5) * u.ln() - 0.5 * u - 0.5 * ln_gamma(2.0 * kv);
    Ok(lag
        .iter()
        .enumerate()
        .map(|(n, l)| (base + 0.5 * (ln_factorial(n) - ln_pochhammer(2.0 * kv, n))).exp() * l)
        .collect())
}

/// Orthonormal basis element n of the space at a point.
pub fn basis_function(space: Space, k: BargmannIndex, n: usize, p: Point) -> Result<C64> {
    let kv = k.value();
    match space {
        Space::CircleHalf => Ok(C64::from_polar(1.0, n as f64 * angle(space, p)?)),
        Space::CircleWeighted => Ok(C64::from_polar(weight_sqrt(kv, n), n as f64 * angle(space, p)?)),
        Space::Disc => Ok(disc_point(p)?.powu(n as u32) * weight_sqrt(kv, n)),
        Space::HalfLine => Ok(C64::new(halfline_basis_all(k, n, line_point(p)?)?[n], 0.0)),
    }
}

/// Probability density of number state n; 1 on the plain circle.
pub fn number_state_density(space: Space, k: BargmannIndex, n: usize, p: Point) -> Result<f64> {
    match space {
        Space::CircleHalf => {
            angle(space, p)?;
            Ok(1.0)
        }
        Space::HalfLine => Ok(basis_function(space, k, n, p)?.norm_sqr()),
        Space::Disc => Ok(basis_function(space, k, n, p)?.norm_sqr() * disc_measure_density(k, disc_point(p)?)?),
        Space::CircleWeighted => Err(weighted_density_error()),
    }
}

fn weighted_density_error() -> Error {
    Error::Domain("the A_k-weighted circle product has no pointwise density".into())
}

/// Density of the disc measure with respect to d^2 omega, defined for k > 1/2.
pub fn disc_measure_density(k: BargmannIndex, w: C64) -> Result<f64> {
    let kv = k.value();
    if kv <= 0.5 {
        return domain("the disc measure exists only for k > 1/2; use the series product");
    }
    Ok((2.0 * kv - 1.0) / PI * (1.0 - w.norm_sqr()).powf(2.0 * kv - 2.0))
}

/// Probability tail used by the partial-sum wavefunctions; pointwise errors
/// scale with its square root.
pub const SERIES_TAIL: f64 = 1e-28;

/// Partial-sum wavefunction sum_n c_n b_n(point), truncated by the coherent tail bound.
pub fn coherent_wavefunction_series(space: Space, family: CoherentFamily, k: BargmannIndex, param: C64, p: Point) -> Result<C64> {
    let st = make_state(family, k, param, dim_for_tail(family, k, param, SERIES_TAIL)?)?;
    let n_max = st.amplitudes.len() - 1;
    let basis: Vec<C64> = match space {
        Space::HalfLine => halfline_basis_all(k, n_max, line_point(p)?)?.into_iter().map(|x| C64::new(x, 0.0)).collect(),
        _ => (0..=n_max).map(|n| basis_function(space, k, n, p)).collect::<Result<_>>()?,
    };
    Ok(st.amplitudes.iter().zip(basis).map(|(c, b)| c * b).sum())
}

/// Coherent-state wavefunction, in closed form where one exists.
pub fn coherent_wavefunction(space: Space, family: CoherentFamily, k: BargmannIndex, param: C64, p: Point) -> Result<C64> {
    amplitudes(family, k, param, 1)?;
    let kv = k.value();
    let half = (kv - 0.5).abs() < 1e-15;
    let x = param.norm_sqr();
    // circle and disc closed forms share the variable zeta = e^{i theta} or omega
    let zeta = match (space, p) {
        (Space::CircleHalf | Space::CircleWeighted, _) => Some(C64::from_polar(1.0, angle(space, p)?)),
        (Space::Disc, _) => Some(disc_point(p)?),
        _ => None,
    };
    let closed_ok = match space {
        Space::CircleHalf => half,
        Space::CircleWeighted | Space::Disc => true,
        Space::HalfLine => true,
    };
    if !closed_ok || family == CoherentFamily::SG {
        return coherent_wavefunction_series(space, family, k, param, p);
    }
    match (family, zeta) {
        (CoherentFamily::BG, Some(z)) => Ok((param * z).exp() / g_k(x, kv)?.sqrt()),
        (CoherentFamily::Perelomov, Some(z)) => Ok((1.0 - x).powf(kv) * (1.0 - param * z).powf(-2.0 * kv)),
        (CoherentFamily::BG, None) => {
            let u = line_point(p)?;
            let pre = ((kv - 0.5) * u.ln() - 0.5 * ln_gamma(2.0 * kv)).exp() / g_k(x, kv)?.sqrt();
            Ok((param - 0.5 * u).exp() * g_k_complex(-param * u, kv)? * pre)
        }
        (CoherentFamily::Perelomov, None) => {
            let u = line_point(p)?;
            let pre = (kv * (1.0 - x).ln() + (kv - 0.5) * u.ln() - 0.5 * ln_gamma(2.0 * kv)).exp();
            let one = C64::new(1.0, 0.0);
            Ok((one - param).powf(-2.0 * kv) * (-0.5 * u * (one + param) / (one - param)).exp() * pre)
        }
        _ => unreachable!(),
    }
}

/// Probability density of a coherent state: with respect to d theta / 2 pi on
/// the circle, d^2 omega on the disc (k > 1/2) and du on the half-line.
pub fn coherent_density(space: Space, family: CoherentFamily, k: BargmannIndex, param: C64, p: Point) -> Result<f64> {
    let kv = k.value();
    match space {
        Space::CircleWeighted => Err(weighted_density_error()),
        Space::CircleHalf if (kv - 0.5).abs() < 1e-15 && family == CoherentFamily::BG => {
            let t = angle(space, p)?;
            let r = param.norm();
            let (phi, _) = classical_params(family, k, param)?;
            Ok((2.0 * r * ((t - phi).cos() - 1.0)).exp() / bessel_i_scaled(0.0, 2.0 * r)?)
        }
        Space::CircleHalf if (kv - 0.5).abs() < 1e-15 && family == CoherentFamily::Perelomov => {
            let t = angle(space, p)?;
            let r = param.norm();
            let (phi, _) = classical_params(family, k, param)?;
            Ok(poisson_kernel(r, t - phi))
        }
        Space::Disc => {
            let w = disc_point(p)?;
            Ok(coherent_wavefunction(space, family, k, param, p)?.norm_sqr() * disc_measure_density(k, w)?)
        }
        _ => Ok(coherent_wavefunction(space, family, k, param, p)?.norm_sqr()),
    }
}

/// Poisson kernel (1 - r^2)/(1 - 2 r cos x + r^2).
pub fn poisson_kernel(r: f64, x: f64) -> f64 {
    (1.0 - r * r) / (1.0 - 2.0 * r * x.cos() + r * r)
}

/// Cosine Fourier coefficients I_n(2|z|)/I_0(2|z|), n = 0..=n_max, of the
/// circle BG density at k = 1/2.
pub fn circle_bg_density_fourier(z: C64, n_max: usize) -> Result<Vec<f64>> {
    let x = 2.0 * z.norm();
    let i0 = bessel_i_scaled(0.0, x)?;
    (0..=n_max).map(|n| Ok(bessel_i_scaled(n as f64, x)? / i0)).collect()
}

/// Local Gaussian form 2 sqrt(pi |z|) e^{-|z| (theta - phi)^2} of the circle BG density.
pub fn circle_bg_density_gaussian(z: C64, theta: f64) -> f64 {
    let r = z.norm();
    let d = crate::actionangle::wrap_angle(theta + z.arg());
    2.0 * (PI * r).sqrt() * (-r * d * d).exp()
}

/// Large-|alpha| form 2 sqrt(2 pi) |alpha| e^{-|alpha|^2 (1 - cos 2(theta - beta))}
/// of the circle SG density, valid for |theta - beta| < pi/4.
pub fn circle_sg_density_asymptotic(alpha: C64, theta: f64) -> f64 {
    let r = alpha.norm();
    let d = theta + alpha.arg();
    2.0 * (2.0 * PI).sqrt() * r * (-r * r * (1.0 - (2.0 * d).cos())).exp()
}

/// Density curve as CSV with columns point, value.
pub fn density_csv(points: &[f64], values: &[f64]) -> String {
    let mut s = String::from("point,value\n");
    for (p, v) in points.iter().zip(values) {
        s.push_str(&format!("{p},{v}\n"));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HardyVariant {
    /// e_n on the plain product with Holstein-Primakoff square roots.
    HolsteinPrimakoff,
    /// e_n on the A_k-weighted product.
    Weighted,
    /// e^{i (n+k) theta} on the A_k-weighted product.
    Shifted,
}

/// Function on the circle given by coefficients on e_n (or e_{k,n} for the
/// shifted variant).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleFunction {
    pub fourier_coeffs: Vec<C64>,
    /// Some(k) selects the A_k-weighted product.
    pub k_weight: Option<BargmannIndex>,
}

impl CircleFunction {
    pub fn norm_sqr(&self) -> f64 {
        let w = |n: usize| self.k_weight.map_or(1.0, |k| weight_sqrt(k.value(), n).powi(-2));
        self.fourier_coeffs.iter().enumerate().map(|(n, c)| w(n) * c.norm_sqr()).sum()
    }

    /// Scalar product (self, other) under the active product.
    pub fn inner(&self, other: &CircleFunction) -> Result<C64> {
        if self.k_weight != other.k_weight {
            return Err(Error::Mismatch("circle functions use different scalar products".into()));
        }
        let w = |n: usize| self.k_weight.map_or(1.0, |k| weight_sqrt(k.value(), n).powi(-2));
        Ok(self.fourier_coeffs.iter().zip(&other.fourier_coeffs).enumerate().map(|(n, (a, b))| a.conj() * b * w(n)).sum())
    }

    /// Value at theta; the shifted variant multiplies by e^{i k theta}.
    pub fn eval(&self, theta: f64, shifted: Option<BargmannIndex>) -> C64 {
        let s: C64 = self.fourier_coeffs.iter().enumerate().map(|(n, c)| c * C64::from_polar(1.0, n as f64 * theta)).sum();
        shifted.map_or(s, |k| s * C64::from_polar(1.0, k.value() * theta))
    }
}

/// Generators of D_k^(+) on circle coefficient vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyGenerators {
    pub k: BargmannIndex,
    pub variant: HardyVariant,
}

impl HardyGenerators {
    fn up(&self, n: usize) -> f64 {
        let (k, nf) = (self.k.value(), n as f64);
        match self.variant {
            HardyVariant::HolsteinPrimakoff => ((nf + 2.0 * k) * (nf + 1.0)).sqrt(),
            HardyVariant::Weighted | HardyVariant::Shifted => nf + 2.0 * k,
        }
    }

    fn down(&self, n: usize) -> f64 {
        let (k, nf) = (self.k.value(), n as f64);
        match self.variant {
            HardyVariant::HolsteinPrimakoff => ((nf + 2.0 * k - 1.0) * nf).sqrt(),
            HardyVariant::Weighted | HardyVariant::Shifted => nf,
        }
    }

    pub fn k0(&self, c: &[C64]) -> Vec<C64> {
        c.iter().enumerate().map(|(n, x)| x * (n as f64 + self.k.value())).collect()
    }

    /// K+ maps e_n to up(n) e_{n+1}; the output is one longer.
    pub fn kplus(&self, c: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::default(); c.len() + 1];
        for (n, x) in c.iter().enumerate() {
            out[n + 1] = x * self.up(n);
        }
        out
    }

    pub fn kminus(&self, c: &[C64]) -> Vec<C64> {
        (1..c.len().max(1)).map(|n| c[n] * self.down(n)).collect()
    }

    /// Matrices (K0, K+) on the first `dim` coefficients.
    pub fn matrices(&self, dim: usize) -> (CMat, CMat) {
        let mut k0 = CMat::zeros(dim, dim);
        let mut kp = CMat::zeros(dim, dim);
        for n in 0..dim {
            k0[(n, n)] = C64::new(n as f64 + self.k.value(), 0.0);
            if n + 1 < dim {
                kp[(n + 1, n)] = C64::new(self.up(n), 0.0);
            }
        }
        (k0, kp)
    }
}

pub fn hardy_generators(k: BargmannIndex, variant: HardyVariant) -> HardyGenerators {
    HardyGenerators { k, variant }
}

/// Circle basis function of the chosen variant, before weighting.
pub fn circle_basis(variant: HardyVariant, k: BargmannIndex, n: usize, theta: f64) -> C64 {
    let shift = if variant == HardyVariant::Shifted { k.value() } else { 0.0 };
    C64::from_polar(1.0, (n as f64 + shift) * theta)
}

/// Time-dependent perturbation of the circle Hamiltonian K0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HardyPerturbation {
    None,
    /// K0 + a
    Shift(f64),
    /// K0 + eps cos(sigma t)
    PeriodicShift { eps: f64, sigma: f64 },
    /// (1 + a) K0
    Scale(f64),
    /// (1 + eps cos(sigma t)) K0
    PeriodicScale { eps: f64, sigma: f64 },
}

impl HardyPerturbation {
    /// Phase exponent of level E at time t, so that c_n(t) = e^{-i phase} c_n(0).
    pub fn phase(&self, e: f64, t: f64) -> f64 {
        let periodic = |eps: f64, sigma: f64| if sigma == 0.0 { eps * t } else { eps / sigma * (sigma * t).sin() };
        match *self {
            HardyPerturbation::None => e * t,
            HardyPerturbation::Shift(a) => (e + a) * t,
            HardyPerturbation::PeriodicShift { eps, sigma } => e * t + periodic(eps, sigma),
            HardyPerturbation::Scale(a) => e * (1.0 + a) * t,
            HardyPerturbation::PeriodicScale { eps, sigma } => e * (t + periodic(eps, sigma)),
        }
    }
}

/// Evolves circle coefficients with levels n + k.
pub fn hardy_evolve(c: &[C64], k: BargmannIndex, t: f64, pert: HardyPerturbation) -> Vec<C64> {
    c.iter()
        .enumerate()
        .map(|(n, x)| x * C64::from_polar(1.0, -pert.phase(n as f64 + k.value(), t)))
        .collect()
}

/// Normalized Hardy-space eigenfunction of K2 = sin(theta)(1/i)d/dtheta +
/// e^{i theta}/(2i) at k = 1/2. The piece on (pi, 2 pi) carries the factor
/// i e^{-pi h2} that keeps the function in H^2_+.
pub fn k2_eigenfunction_circle(h2: f64, theta: f64) -> Result<C64> {
    let t = theta.rem_euclid(2.0 * PI);
    if t.abs() < 1e-12 || (t - PI).abs() < 1e-12 || (2.0 * PI - t).abs() < 1e-12 {
        return Err(Error::Singular(format!("K2 eigenfunction is singular at theta = {theta}")));
    }
    let (s, c) = (0.5 * t).sin_cos();
    let base = C64::from_polar(0.5, -0.5 * t)
        * C64::new(s, 0.0).powc(C64::new(-0.5, h2))
        * C64::new(c.abs(), 0.0).powc(C64::new(-0.5, -h2));
    Ok(if t < PI { base } else { base * I * (-PI * h2).exp() })
}

/// K1 eigenfunction on the circle: the K2 one at theta + pi/2.
pub fn k1_eigenfunction_circle(h1: f64, theta: f64) -> Result<C64> {
    k2_eigenfunction_circle(h1, theta + 0.5 * PI)
}

/// Fourier coefficients c_0..c_{n_max} of the circle K2 eigenfunction, from
/// c_0 = e^{-i pi/4} e^{-pi h2/2} and (m+1) c_{m+1} = m c_{m-1} - 2 i h2 c_m.
pub fn k2_circle_coeffs(h2: f64, n_max: usize) -> Vec<C64> {
    let mut c = vec![C64::from_polar((-0.5 * PI * h2).exp(), -0.25 * PI)];
    for m in 0..n_max {
        let prev = if m == 0 { C64::default() } else { c[m - 1] };
        let next = (prev * m as f64 - I * 2.0 * h2 * c[m]) / (m as f64 + 1.0);
        c.push(next);
    }
    c
}

/// Half-line K2 eigenfunction u^{i h2 - 1/2} / sqrt(2 pi).
pub fn k2_eigenfunction_halfline(h2: f64, u: f64) -> Result<C64> {
    if !(u > 0.0) {
        return domain("half-line point needs u > 0");
    }
    Ok(C64::new(u, 0.0).powc(C64::new(-0.5, h2)) / (2.0 * PI).sqrt())
}

/// Half-line K1 eigenfunction u^{k-1/2} e^{-iu/2} Phi(k + i h1; 2k; iu) with C = 1.
pub fn k1_eigenfunction_halfline(k: BargmannIndex, h1: f64, u: f64) -> Result<C64> {
    if !(u > 0.0) {
        return domain("half-line point needs u > 0");
    }
    let kv = k.value();
    let phi = confluent_phi(C64::new(kv, h1), C64::new(2.0 * kv, 0.0), C64::new(0.0, u))?;
    Ok(C64::from_polar(u.powf(kv - 0.5), -0.5 * u) * phi)
}

/// Eigenfunction of K2 in the chosen space.
pub fn k2_eigenfunction(space: Space, h2: f64, p: Point) -> Result<C64> {
    match space {
        Space::CircleHalf => k2_eigenfunction_circle(h2, angle(space, p)?),
        Space::HalfLine => k2_eigenfunction_halfline(h2, line_point(p)?),
        _ => domain(format!("K2 eigenfunctions are provided on the circle and half-line, not {space:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelSpace {
    CircleHalf,
    CircleWeighted,
    Disc,
    /// BG space of entire functions, kernel g_k(z2* z1).
    BargmannBG,
    /// SG (Bargmann-Fock) space, kernel e^{alpha2* alpha1}.
    BargmannSG,
}

/// Reproducing kernel K(x2, x1); circle points enter as e^{i theta}, and the
/// circle kernels are regularized by (1 - eps).
pub fn reproducing_kernel(space: KernelSpace, k: BargmannIndex, x2: C64, x1: C64, eps: f64) -> Result<C64> {
    let kv = k.value();
    let one = C64::new(1.0, 0.0);
    match space {
        KernelSpace::CircleHalf | KernelSpace::CircleWeighted => {
            let w = (x1 - x2).re;
            let d = C64::from_polar(1.0 - eps, w);
            if (one - d).norm() < 1e-300 || (eps == 0.0 && wrap(w).abs() < 1e-15) {
                return Err(Error::Singular("circle kernel at coincident points needs eps > 0".into()));
            }
            let pow = if space == KernelSpace::CircleHalf { -1.0 } else { -2.0 * kv };
            Ok((one - d).powf(pow))
        }
        KernelSpace::Disc => {
            if x1.norm() >= 1.0 || x2.norm() >= 1.0 {
                return domain("disc kernel needs points inside the unit disc");
            }
            Ok((one - x2.conj() * x1).powf(-2.0 * kv))
        }
        KernelSpace::BargmannBG => g_k_complex(x2.conj() * x1, kv),
        KernelSpace::BargmannSG => Ok((x2.conj() * x1).exp()),
    }
}

fn wrap(x: f64) -> f64 {
    crate::actionangle::wrap_angle(x)
}

/// Holomorphic function on the disc by its Taylor coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscFunction {
    pub taylor_coeffs: Vec<C64>,
    pub k: BargmannIndex,
}

impl DiscFunction {
    pub fn eval(&self, w: C64) -> C64 {
        self.taylor_coeffs.iter().rev().fold(C64::default(), |acc, c| acc * w + c)
    }

    /// Series product sum n!/(2k)_n b2_n* b1_n.
    pub fn inner(&self, other: &DiscFunction) -> Result<C64> {
        if self.k != other.k {
            return Err(Error::Mismatch("disc functions carry different k".into()));
        }
        let kv = self.k.value();
        Ok(self
            .taylor_coeffs
            .iter()
            .zip(&other.taylor_coeffs)
            .enumerate()
            .map(|(n, (a, b))| a.conj() * b * weight_sqrt(kv, n).powi(-2))
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).map(|c| c.re).unwrap_or(0.0)
    }

    /// Coefficients in the orthonormal basis sqrt((2k)_n/n!) omega^n.
    pub fn orthonormal_coeffs(&self) -> Vec<C64> {
        let kv = self.k.value();
        self.taylor_coeffs.iter().enumerate().map(|(n, b)| b / weight_sqrt(kv, n)).collect()
    }
}

/// Function on the half-line by its coefficients in the Laguerre basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfLineFunction {
    pub coeffs: Vec<C64>,
    pub k: BargmannIndex,
    /// Samples (u, f(u)) on the requested grid.
    pub samples: Vec<(f64, C64)>,
}

impl HalfLineFunction {
    pub fn eval(&self, u: f64) -> Result<C64> {
        if self.coeffs.is_empty() {
            return Ok(C64::default());
        }
        let b = halfline_basis_all(self.k, self.coeffs.len() - 1, u)?;
        Ok(self.coeffs.iter().zip(b).map(|(c, e)| c * e).sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Kernel B_k(omega, u) of the unitary map between the half-line and the disc.
pub fn b_kernel(k: BargmannIndex, w: C64, u: f64) -> Result<C64> {
    if w.norm() >= 1.0 || !(u > 0.0) {
        return domain("B_k needs |omega| < 1 and u > 0");
    }
    let kv = k.value();
    let one = C64::new(1.0, 0.0);
    let pre = ((kv - 0.5) * u.ln() - 0.5 * ln_gamma(2.0 * kv)).exp();
    Ok((one - w).powf(-2.0 * kv) * (-0.5 * u * (one + w) / (one - w)).exp() * pre)
}

/// Partial sum of e~_{k,n}(omega) e_{k,n}(u) over n <= n_max.
pub fn b_kernel_series(k: BargmannIndex, w: C64, u: f64, n_max: usize) -> Result<C64> {
    let e = halfline_basis_all(k, n_max, u)?;
    let kv = k.value();
    Ok(e.iter().enumerate().map(|(n, x)| w.powu(n as u32) * weight_sqrt(kv, n) * *x).sum())
}

/// Maps a disc function to the half-line through the basis correspondence
/// e~_{k,n} -> e_{k,n}, sampling the image on `u_grid`.
pub fn disc_to_halfline(f: &DiscFunction, u_grid: &[f64]) -> Result<HalfLineFunction> {
    let mut g = HalfLineFunction { coeffs: f.orthonormal_coeffs(), k: f.k, samples: Vec::with_capacity(u_grid.len()) };
    for &u in u_grid {
        let v = g.eval(u)?;
        g.samples.push((u, v));
    }
    Ok(g)
}

/// int_0^inf B_k(omega, u) g(u) du by generalized Gauss-Laguerre quadrature.
pub fn halfline_to_disc_quadrature(g: &HalfLineFunction, w: C64, nodes: usize) -> Result<C64> {
    let k = g.k;
    let kv = k.value();
    if w.norm() >= 1.0 {
        return domain("disc point must satisfy |omega| < 1");
    }
    let one = C64::new(1.0, 0.0);
    let rule = crate::quad::gauss_laguerre(nodes, 2.0 * kv - 1.0);
    let pre = (one - w).powf(-2.0 * kv) / ln_gamma(2.0 * kv).exp();
    let n_max = g.coeffs.len().saturating_sub(1);
    let mut acc = C64::default();
    for (&u, &wt) in rule.nodes.iter().zip(&rule.weights) {
        // B_k g divided by the weight u^{2k-1} e^{-u}
        let lag = laguerre_all(n_max, 2.0 * kv - 1.0, u);
        let poly: C64 = g
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * (0.5 * (ln_factorial(n) - ln_pochhammer(2.0 * kv, n))).exp() * lag[n])
            .sum();
        acc += (-u * w / (one - w)).exp() * poly * wt;
    }
    let r = acc * pre;
    if !r.re.is_finite() || !r.im.is_finite() {
        return Err(Error::NonConvergence(nodes));
    }
    Ok(r)
}

/// Half-line generators applied to f at u by central differences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfLineGenerators {
    pub k: BargmannIndex,
    pub step: f64,
}

pub fn halfline_generators(k: BargmannIndex) -> HalfLineGenerators {
    HalfLineGenerators { k, step: 1e-4 }
}

impl HalfLineGenerators {
    fn derivs(&self, f: &dyn Fn(f64) -> C64, u: f64) -> Result<(C64, C64, C64)> {
        let h = self.step * u.max(1.0).min(1.0 / self.step);
        let h = h.min(0.5 * u);
        if !(u > 0.0) || h <= 0.0 {
            return domain("half-line generators need u > 0");
        }
        let (fm, f0, fp) = (f(u - h), f(u), f(u + h));
        let (fm2, fp2) = (f(u - 2.0 * h), f(u + 2.0 * h));
        let d1 = (fm2 - fm * 8.0 + fp * 8.0 - fp2) / (12.0 * h);
        let d2 = (-fm2 + fm * 16.0 - f0 * 30.0 + fp * 16.0 - fp2) / (12.0 * h * h);
        Ok((f0, d1, d2))
    }

    fn radial(&self, f: &dyn Fn(f64) -> C64, u: f64, sign: f64) -> Result<C64> {
        let (f0, d1, d2) = self.derivs(f, u)?;
        let a = (2.0 * self.k.value() - 1.0).powi(2) / (4.0 * u);
        Ok(-d2 * u - d1 + f0 * (a + sign * u / 4.0))
    }

    /// K0 = -u f'' - f' + (2k-1)^2/(4u) f + u/4 f
    pub fn k0(&self, f: impl Fn(f64) -> C64, u: f64) -> Result<C64> {
        self.radial(&f, u, 1.0)
    }

    /// K1 = -u f'' - f' + (2k-1)^2/(4u) f - u/4 f
    pub fn k1(&self, f: impl Fn(f64) -> C64, u: f64) -> Result<C64> {
        self.radial(&f, u, -1.0)
    }

    /// K2 = (1/i)(u f' + f/2)
    pub fn k2(&self, f: impl Fn(f64) -> C64, u: f64) -> Result<C64> {
        let (f0, d1, _) = self.derivs(&f, u)?;
        Ok(-I * (d1 * u + f0 * 0.5))
    }
}

/// U(g) f (z) = e^{2ik omega} (1-|gamma|^2)^k (1 + gamma* z)^{-2k} f((alpha z + beta)/(beta* z + alpha*)),
/// returned to `n_out` Taylor coefficients.
pub fn covering_unitary_on_disc(g: &CoverElement, f: &DiscFunction, n_out: usize) -> Result<DiscFunction> {
    let kv = f.k.value();
    let (alpha, beta) = g.alpha_beta();
    let gn = g.gamma.norm();
    // the image is analytic for |z| < 1/|gamma|; sample on the unit circle
    let m = if gn < 1e-3 {
        (4 * n_out).max(64)
    } else {
        let need = (40.0 / -gn.ln()).ceil() as usize + n_out;
        need.next_power_of_two().clamp(64, 1 << 16)
    };
    let pre = C64::from_polar((1.0 - gn * gn).powf(kv), 2.0 * kv * g.omega);
    let one = C64::new(1.0, 0.0);
    let vals: Vec<C64> = (0..m)
        .map(|j| {
            let z = C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
            let arg = (alpha * z + beta) / (beta.conj() * z + alpha.conj());
            pre * (one + g.gamma.conj() * z).powf(-2.0 * kv) * f.eval(arg)
        })
        .collect();
    let coeffs = (0..n_out)
        .map(|n| {
            vals.iter()
                .enumerate()
                .map(|(j, v)| v * C64::from_polar(1.0, -2.0 * PI * (n * j % m) as f64 / m as f64))
                .sum::<C64>()
                / m as f64
        })
        .collect();
    Ok(DiscFunction { taylor_coeffs: coeffs, k: f.k })
}
