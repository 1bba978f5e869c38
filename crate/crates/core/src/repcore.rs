//! Truncated matrix realizations of the positive discrete series D_k^(+),
//! the composite oscillator operators built from them, the one- and two-mode
//! boson constructions, and arithmetic on the universal covering group.
//!
//! All matrices are dense `N x N` complex cutoffs in the number basis
//! |k,n>, n = 0..N-1. Ladder identities only hold on the top-left
//! `(N-2) x (N-2)` block; see [`interior`].

use crate::error::{domain, Result};
use crate::C64;
use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub type CMat = DMatrix<C64>;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Validated positive Bargmann index.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct BargmannIndex(f64);

impl BargmannIndex {
    pub fn new(k: f64) -> Result<Self> {
        if k > 0.0 && k.is_finite() {
            Ok(BargmannIndex(k))
        } else {
            domain(format!("Bargmann index must be positive and finite, got {k}"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Casimir eigenvalue k(1-k).
    pub fn casimir(self) -> f64 {
        self.0 * (1.0 - self.0)
    }
}

/// Dense N-dimensional cutoff of the D_k^(+) operators.
#[derive(Debug, Clone)]
pub struct TruncatedRep {
    pub k: BargmannIndex,
    pub dim: usize,
    pub omega: f64,
    pub hbar: f64,
    pub k0: CMat,
    pub kplus: CMat,
    pub kminus: CMat,
    pub k1: CMat,
    pub k2: CMat,
    pub a: CMat,
    pub adag: CMat,
    pub nop: CMat,
    pub q: CMat,
    pub p: CMat,
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// sqrt((2k+n)(n+1)), the K+ matrix element <k,n+1|K+|k,n>.
pub fn ladder_coeff(k: f64, n: usize) -> f64 {
    ((2.0 * k + n as f64) * (n as f64 + 1.0)).sqrt()
}

impl TruncatedRep {
    /// Builds every operator from K0 and K+.
    pub fn from_ladder(k: BargmannIndex, k0: CMat, kplus: CMat, omega: f64, hbar: f64) -> Result<Self> {
        let dim = k0.nrows();
        if dim < 2 {
            return domain("truncation dimension must be at least 2");
        }
        let kv = k.value();
        let kminus = kplus.adjoint();
        let k1 = (&kplus + &kminus) * real(0.5);
        let k2 = (&kplus - &kminus) * (real(0.5) / I);
        // B_k = (K0 + k)^{-1/2}
        let bk = CMat::from_diagonal(&k0.diagonal().map(|d| real(1.0 / (d.re + kv).sqrt())));
        let a = &bk * &kminus;
        let adag = &kplus * &bk;
        let nop = &k0 - CMat::identity(dim, dim) * real(kv);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = (&a + &adag) * real(s);
        let p = (&adag - &a) * (I * s);
        Ok(TruncatedRep { k, dim, omega, hbar, k0, kplus, kminus, k1, k2, a, adag, nop, q, p })
    }

    /// Casimir operator K1^2 + K2^2 - K0^2.
    pub fn casimir(&self) -> CMat {
        &self.k1 * &self.k1 + &self.k2 * &self.k2 - &self.k0 * &self.k0
    }

    /// H(Q,P) = (Q^2 + P^2)/2 in units of hbar*omega.
    pub fn hamiltonian_qp(&self) -> CMat {
        (&self.q * &self.q + &self.p * &self.p) * real(0.5)
    }

    /// hbar*omega*K0.
    pub fn hamiltonian_k0(&self) -> CMat {
        &self.k0 * real(self.hbar * self.omega)
    }

    /// Interaction term W(theta) = (K+ e^{-i theta} + K- e^{i theta})/2.
    pub fn interaction_w(&self, theta: f64) -> CMat {
        (&self.kplus * C64::from_polar(0.5, -theta)) + (&self.kminus * C64::from_polar(0.5, theta))
    }

    /// Row-major (re, im) pairs for serialization.
    pub fn to_json(&self) -> serde_json::Value {
        let m = |x: &CMat| -> Vec<Vec<[f64; 2]>> {
            (0..x.nrows()).map(|r| (0..x.ncols()).map(|c| [x[(r, c)].re, x[(r, c)].im]).collect()).collect()
        };
        serde_json::json!({
            "k": self.k.value(),
            "N": self.dim,
            "omega": self.omega,
            "hbar": self.hbar,
            "matrices": {
                "K0": m(&self.k0), "Kplus": m(&self.kplus), "Kminus": m(&self.kminus),
                "K1": m(&self.k1), "K2": m(&self.k2), "A": m(&self.a), "Adag": m(&self.adag),
                "N": m(&self.nop), "Q": m(&self.q), "P": m(&self.p),
            }
        })
    }
}

/// D_k^(+) cutoff with K0 = diag(n+k) and K+ on the subdiagonal.
pub fn build_rep(k: BargmannIndex, n: usize, omega: f64, hbar: f64) -> Result<TruncatedRep> {
    if n < 2 {
        return domain("truncation dimension must be at least 2");
    }
    let kv = k.value();
    let k0 = CMat::from_fn(n, n, |r, c| if r == c { real(r as f64 + kv) } else { C64::default() });
    let kplus = CMat::from_fn(n, n, |r, c| if r == c + 1 { real(ladder_coeff(kv, c)) } else { C64::default() });
    TruncatedRep::from_ladder(k, k0, kplus, omega, hbar)
}

/// Dimensionless convenience wrapper (hbar = omega = 1).
pub fn rep(k: f64, n: usize) -> Result<TruncatedRep> {
    build_rep(BargmannIndex::new(k)?, n, 1.0, 1.0)
}

/// Top-left (N-2) x (N-2) block, where the cutoff does not disturb ladder closure.
pub fn interior(m: &CMat) -> CMat {
    let n = m.nrows().saturating_sub(2);
    m.view((0, 0), (n, n)).into_owned()
}

/// [x, y] with each entry summed in doubled precision (error-free products
/// and sums), so the result is accurate to about one ulp of itself rather
/// than of the largest product. Ladder entries grow like N, and the plain
/// product loses a few ulps of N^2 in the cancellation.
pub fn commutator(x: &CMat, y: &CMat) -> CMat {
    let n = x.nrows();
    CMat::from_fn(n, y.ncols(), |i, j| {
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for l in 0..x.ncols() {
            for (a, b, sign) in [(x[(i, l)], y[(l, j)], 1.0), (y[(i, l)], x[(l, j)], -1.0)] {
                re.add_product(sign * a.re, b.re);
                re.add_product(-sign * a.im, b.im);
                im.add_product(sign * a.re, b.im);
                im.add_product(sign * a.im, b.re);
            }
        }
        C64::new(re.value(), im.value())
    })
}

#[derive(Default)]
struct CompensatedSum {
    hi: f64,
    lo: f64,
}

impl CompensatedSum {
    fn add_product(&mut self, a: f64, b: f64) {
        if a == 0.0 || b == 0.0 {
            return;
        }
        let p = a * b;
        let perr = a.mul_add(b, -p);
        let s = self.hi + p;
        let bb = s - self.hi;
        let serr = (self.hi - (s - bb)) + (p - bb);
        self.hi = s;
        self.lo += serr + perr;
    }

    fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Hermitian eigenvalues in ascending order.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()) * real(0.5);
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Energy ladder hbar*omega*(n+k).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySpectrum {
    pub k: f64,
    pub omega: f64,
    pub levels: Vec<f64>,
}

pub fn spectrum(k: BargmannIndex, n_max: usize, omega: f64, hbar: f64) -> EnergySpectrum {
    let levels = (0..=n_max).map(|n| hbar * omega * (n as f64 + k.value())).collect();
    EnergySpectrum { k: k.value(), omega, levels }
}

/// Canonical boson annihilator on an N-dimensional Fock block.
pub fn fock_annihilation(n: usize) -> CMat {
    CMat::from_fn(n, n, |r, c| if c == r + 1 { real((c as f64).sqrt()) } else { C64::default() })
}

/// One-mode realization K0 = (2a^dag a + 1)/4, K+ = a^dag^2/2, split into the
/// even (k = 1/4) and odd (k = 3/4) Fock sectors.
pub fn metaplectic_split(n: usize) -> Result<(TruncatedRep, TruncatedRep)> {
    if n % 2 != 0 || n < 4 {
        return domain("metaplectic split needs an even dimension N >= 4");
    }
    let a = fock_annihilation(n);
    let ad = a.adjoint();
    let num = &ad * &a;
    let k0 = (&num * real(2.0) + CMat::identity(n, n)) * real(0.25);
    let kp = &ad * &ad * real(0.5);
    let project = |m: &CMat, parity: usize| -> CMat {
        let h = n / 2;
        CMat::from_fn(h, h, |r, c| m[(2 * r + parity, 2 * c + parity)])
    };
    let even = TruncatedRep::from_ladder(BargmannIndex::new(0.25)?, project(&k0, 0), project(&kp, 0), 1.0, 1.0)?;
    let odd = TruncatedRep::from_ladder(BargmannIndex::new(0.75)?, project(&k0, 1), project(&kp, 1), 1.0, 1.0)?;
    Ok((even, odd))
}

/// Number operator of the one-mode Fock block, projected onto a parity sector.
pub fn metaplectic_fock_number(n: usize, parity: usize) -> CMat {
    let h = n / 2;
    CMat::from_fn(h, h, |r, c| if r == c { real((2 * r + parity) as f64) } else { C64::default() })
}

/// Two-mode realization K+ = a1^dag a2^dag, K0 = (N1+N2+1)/2 restricted to the
/// subspace n1 - n2 = d, giving D_k^(+) with k = (1+d)/2.
pub fn two_mode_rep(d: usize, n: usize) -> Result<TruncatedRep> {
    if n < 2 {
        return domain("truncation dimension must be at least 2");
    }
    // basis |n1, n2> = |j+d, j>, j = 0..n-1
    let labels: Vec<(usize, usize)> = (0..n).map(|j| (j + d, j)).collect();
    let index = |n1: usize, n2: usize| labels.iter().position(|&l| l == (n1, n2));
    let mut k0 = CMat::zeros(n, n);
    let mut kp = CMat::zeros(n, n);
    for (c, &(n1, n2)) in labels.iter().enumerate() {
        k0[(c, c)] = real((n1 + n2 + 1) as f64 / 2.0);
        // a1^dag a2^dag |n1,n2> = sqrt((n1+1)(n2+1)) |n1+1,n2+1>
        if let Some(r) = index(n1 + 1, n2 + 1) {
            kp[(r, c)] = real(((n1 + 1) as f64 * (n2 + 1) as f64).sqrt());
        }
    }
    let k = BargmannIndex::new(0.5 * (1.0 + d as f64))?;
    TruncatedRep::from_ladder(k, k0, kp, 1.0, 1.0)
}

/// (k, n) of the two-mode state |n1, n2>.
pub fn two_mode_labels(n1: usize, n2: usize) -> (f64, usize) {
    let d = n1.abs_diff(n2);
    (0.5 * (1.0 + d as f64), n1.min(n2))
}

/// Holstein-Primakoff form a^dag sqrt(N + 2k) of K+.
pub fn holstein_primakoff_kplus(k: BargmannIndex, n: usize) -> CMat {
    let ad = fock_annihilation(n).adjoint();
    let root = CMat::from_fn(n, n, |r, c| if r == c { real((r as f64 + 2.0 * k.value()).sqrt()) } else { C64::default() });
    ad * root
}

/// Closed-form number-state products ((dK1)(dK2), (dQ)(dP)) at |k,n>.
pub fn number_state_uncertainties(k: BargmannIndex, n: usize) -> (f64, f64) {
    let kv = k.value();
    let nf = n as f64;
    (0.5 * (nf * nf + 2.0 * kv * nf + kv), nf + 0.5)
}

/// U(t) = exp(-i K0 t) (dimensionless time).
pub fn time_evolution(rep: &TruncatedRep, t: f64) -> CMat {
    CMat::from_fn(rep.dim, rep.dim, |r, c| {
        if r == c {
            C64::from_polar(1.0, -rep.k0[(r, r)].re * t)
        } else {
            C64::default()
        }
    })
}

/// Parity Pi = U(-pi) = exp(i pi K0); carries the global phase e^{i pi k}.
pub fn parity(rep: &TruncatedRep) -> CMat {
    time_evolution(rep, -PI)
}

/// Heisenberg picture U^dag X U.
pub fn heisenberg(u: &CMat, x: &CMat) -> CMat {
    u.adjoint() * x * u
}

/// Matrix exponential of a dense complex matrix (Pade scaling and squaring).
pub fn expm(m: &CMat) -> CMat {
    m.clone().exp()
}

/// Squeeze operator S = exp(-i V gamma) with V = (i/2)(A^2 - A^dag^2).
pub fn squeeze(rep: &TruncatedRep, gamma: f64) -> CMat {
    let a2 = &rep.a * &rep.a;
    let ad2 = &rep.adag * &rep.adag;
    let v = (a2 - ad2) * (I * 0.5);
    expm(&(v * (-I * gamma)))
}

/// Admissible Bargmann indices for the m-fold cover: k = mu/m, mu = 1, 2, ...
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleK {
    pub m: usize,
    pub min: f64,
    pub first: Vec<f64>,
}

impl AdmissibleK {
    pub fn contains(&self, k: f64) -> bool {
        let mu = k * self.m as f64;
        k > 0.0 && (mu - mu.round()).abs() < 1e-12 * mu.max(1.0)
    }
}

pub fn admissible_k(m: usize) -> Result<AdmissibleK> {
    if m == 0 {
        return domain("covering multiplicity m must be positive");
    }
    let mf = m as f64;
    Ok(AdmissibleK { m, min: 1.0 / mf, first: (1..=16).map(|mu| mu as f64 / mf).collect() })
}

/// Element (gamma, omega) of the universal cover of SO(1,2)^.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverElement {
    pub gamma: C64,
    pub omega: f64,
}

impl CoverElement {
    pub fn new(gamma: C64, omega: f64) -> Result<Self> {
        if gamma.norm() < 1.0 && omega.is_finite() {
            Ok(CoverElement { gamma, omega })
        } else {
            domain(format!("cover element needs |gamma| < 1, got {}", gamma.norm()))
        }
    }

    pub fn identity() -> Self {
        CoverElement { gamma: C64::default(), omega: 0.0 }
    }

    /// Rotation r0(theta) = (0, theta/2).
    pub fn rotation(theta: f64) -> Self {
        CoverElement { gamma: C64::default(), omega: 0.5 * theta }
    }

    /// Boost a0(tau) = (i tanh(tau/2), 0).
    pub fn boost_a(tau: f64) -> Self {
        CoverElement { gamma: C64::new(0.0, (0.5 * tau).tanh()), omega: 0.0 }
    }

    /// Boost b0(s) = (tanh(s/2), 0).
    pub fn boost_b(s: f64) -> Self {
        CoverElement { gamma: C64::new((0.5 * s).tanh(), 0.0), omega: 0.0 }
    }

    /// Null rotation n0(xi) = (xi (xi^2+4)^{-1/2} e^{-i omega}, omega = arctan(xi/2)).
    pub fn null_n(xi: f64) -> Self {
        let omega = (0.5 * xi).atan();
        CoverElement { gamma: C64::from_polar(xi / (xi * xi + 4.0).sqrt(), -omega), omega }
    }

    /// (alpha, beta) of the SU(1,1) image.
    pub fn alpha_beta(&self) -> (C64, C64) {
        let alpha = C64::from_polar(1.0 / (1.0 - self.gamma.norm_sqr()).sqrt(), self.omega);
        (alpha, self.gamma * alpha)
    }

    /// Projection onto SU(1,1): [[alpha, beta], [beta*, alpha*]].
    pub fn to_su11(&self) -> Matrix2<C64> {
        let (a, b) = self.alpha_beta();
        Matrix2::new(a, b, b.conj(), a.conj())
    }

    /// Lift of an SU(1,1) matrix with omega = arg(alpha) in (-pi, pi].
    pub fn from_su11(g: &Matrix2<C64>) -> Result<Self> {
        let alpha = g[(0, 0)];
        CoverElement::new(g[(0, 1)] / alpha, alpha.arg())
    }

    pub fn inverse(&self) -> Self {
        // alpha -> alpha*, beta -> -beta
        CoverElement { gamma: -self.gamma * C64::from_polar(1.0, 2.0 * self.omega), omega: -self.omega }
    }
}

/// Composition law g2 o g1 on the universal cover.
pub fn cover_compose(g2: &CoverElement, g1: &CoverElement) -> CoverElement {
    let e = C64::from_polar(1.0, -2.0 * g1.omega);
    let u = C64::new(1.0, 0.0) + g1.gamma.conj() * g2.gamma * e;
    let gamma = (g1.gamma + g2.gamma * e) / u;
    // (1/2i) ln(u/u*) with the principal branch equals arg(u) since Re u > 0
    CoverElement { gamma, omega: g1.omega + g2.omega + u.arg() }
}

/// Largest entry modulus of a 2 x 2 complex matrix.
pub fn max_abs2(m: &Matrix2<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
