//! Quadrature rules: Golub-Welsch Gauss rules, adaptive Gauss-Kronrod and the
//! periodic trapezoid rule.

use crate::error::{Error, Result};
use crate::specfun::{laguerre_all, ln_gamma};
use crate::C64;
use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of a Gauss rule.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn integrate_c(&self, f: impl Fn(f64) -> C64) -> C64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| f(x) * w).sum()
    }
}

fn golub_welsch(diag: &[f64], off: &[f64], mu0: f64) -> GaussRule {
    let n = diag.len();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = diag[i];
        if i + 1 < n {
            j[(i, i + 1)] = off[i];
            j[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    GaussRule { nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() }
}

/// Generalized Gauss-Laguerre rule for the weight u^alpha e^{-u} on (0, inf).
pub fn gauss_laguerre(n: usize, alpha: f64) -> GaussRule {
    let diag: Vec<f64> = (0..n).map(|j| 2.0 * j as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..n).map(|j| (j as f64 * (j as f64 + alpha)).sqrt()).collect();
    let mut rule = golub_welsch(&diag, &off, ln_gamma(alpha + 1.0).exp());
    let nf = n as f64;
    let lnc = ln_gamma(nf + alpha + 1.0) - ln_gamma(nf + 1.0) - 2.0 * (nf + 1.0).ln();
    for (x, w) in rule.nodes.iter_mut().zip(rule.weights.iter_mut()) {
        for _ in 0..3 {
            let l = laguerre_all(n, alpha, *x);
            let d = (nf * l[n] - (nf + alpha) * l[n - 1]) / *x;
            let step = l[n] / d;
            if !step.is_finite() {
                break;
            }
            *x -= step;
            if step.abs() < 1e-16 * x.abs() {
                break;
            }
        }
        let l = laguerre_all(n + 1, alpha, *x);
        let lw = lnc + x.ln() - 2.0 * l[n + 1].abs().ln();
        *w = lw.exp();
    }
    rule
}

/// Gauss-Jacobi rule on [0, 1] for the weight (1-t)^a t^b.
pub fn gauss_jacobi01(n: usize, a: f64, b: f64) -> GaussRule {
    // recurrence for P^{(a,b)} on [-1, 1], mapped to t = (1 - x)/2
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n);
    let ab = a + b;
    for j in 0..n {
        let jf = j as f64;
        let s = 2.0 * jf + ab;
        let d = if j == 0 { (b - a) / (ab + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
        diag.push(d);
        if j + 1 < n {
            let m = jf + 1.0;
            let s1 = 2.0 * m + ab;
            let num = 4.0 * m * (m + a) * (m + b) * (m + ab);
            let den = s1 * s1 * (s1 + 1.0) * (s1 - 1.0);
            off.push((num / den).sqrt());
        }
    }
    let mu0 = (ab + 1.0) * 2f64.ln() + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(ab + 2.0);
    let r = golub_welsch(&diag, &off, mu0.exp());
    // x in [-1,1] with (1-x)^a (1+x)^b; t = (1+x)/2 gives t^b (1-t)^a 2^{-(a+b+1)}
    let scale = 2f64.powf(-(ab + 1.0));
    GaussRule {
        nodes: r.nodes.iter().map(|x| 0.5 * (1.0 + x)).collect(),
        weights: r.weights.iter().map(|w| w * scale).collect(),
    }
}

/// Gauss-Legendre rule on [0, 1].
pub fn gauss_legendre01(n: usize) -> GaussRule {
    gauss_jacobi01(n, 0.0, 0.0)
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
pub fn adaptive_gk(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let f: &dyn Fn(f64) -> f64 = &f;
    let mut stack = vec![(a, b, gk15(f, a, b))];
    let mut total = 0.0;
    let mut evals = 0usize;
    while let Some((lo, hi, (v, e))) = stack.pop() {
        let width = (hi - lo) / (b - a);
        if e <= tol * width.abs().max(1e-3) || (hi - lo).abs() < 1e-14 * (b - a).abs() {
            total += v;
            continue;
        }
        evals += 1;
        if evals > 100_000 {
            return Err(Error::NonConvergence(evals));
        }
        let mid = 0.5 * (lo + hi);
        stack.push((lo, mid, gk15(f, lo, mid)));
        stack.push((mid, hi, gk15(f, mid, hi)));
    }
    Ok(total)
}

/// Mean of a 2 pi periodic function by the n-point trapezoid rule.
pub fn periodic_mean(f: impl Fn(f64) -> C64, n: usize) -> C64 {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    (0..n).map(|j| f(j as f64 * h)).sum::<C64>() / n as f64
}
