//! Mean matrix of the prefix-sum branching model, Perron root by power
//! iteration, and the analytic bounds used for the extinction argument.
//!
//! Type `i` (1-based) is an individual whose prefix sum lies `i` below the
//! top of the window. Entries span hundreds of orders of magnitude for
//! realistic `n`, so the log of every entry is kept next to its value.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogBase {
    #[default]
    Two,
    Natural,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::Natural => x.ln(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Explicit,
    SelPres {
        n: usize,
        eta: f64,
        chi: f64,
        kappa: f64,
        phi: f64,
        log_base: LogBase,
    },
}

/// Dense non-negative `d × d` matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanMatrix {
    d: usize,
    entries: Vec<f64>,
    log_entries: Vec<f64>,
    provenance: Provenance,
}

impl MeanMatrix {
    pub fn explicit(rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::domain("mean matrix must be square and non-empty"));
        }
        let entries: Vec<f64> = rows.into_iter().flatten().collect();
        if entries.iter().any(|a| !(*a >= 0.0 && a.is_finite())) {
            return Err(Error::domain("mean matrix entries must be finite and non-negative"));
        }
        let log_entries = entries.iter().map(|a| a.ln()).collect();
        Ok(MeanMatrix {
            d,
            entries,
            log_entries,
            provenance: Provenance::Explicit,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Entry `a_{ij}`, 1-based.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i - 1) * self.d + (j - 1)]
    }

    /// `ln a_{ij}`; `-inf` for zero entries.
    pub fn log_get(&self, i: usize, j: usize) -> f64 {
        self.log_entries[(i - 1) * self.d + (j - 1)]
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.d).map(|r| r.to_vec()).collect()
    }

    fn mul_vec(&self, v: &[f64], out: &mut [f64]) {
        for (row, o) in self.entries.chunks_exact(self.d).zip(out.iter_mut()) {
            *o = row.iter().zip(v).map(|(a, x)| a * x).sum();
        }
    }
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// `max(1, ⌊n·ln(φ)/χ⌋)`.
pub fn type_count(n: usize, chi: f64, phi: f64) -> usize {
    ((n as f64 * phi.ln() / chi + 1e-9).floor() as usize).max(1)
}

fn check_matrix_params(n: usize, eta: f64, chi: f64, kappa: f64, phi: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::domain("n must be at least 2"));
    }
    if !(eta > 1.0 && eta <= 2.0) {
        return Err(Error::domain(format!("η must satisfy 1 < η ≤ 2 (got {eta})")));
    }
    if !(chi > 0.0 && chi.is_finite()) {
        return Err(Error::domain(format!("χ must be positive (got {chi})")));
    }
    if !(1.0 < phi && phi < kappa && kappa.is_finite()) {
        return Err(Error::domain(format!("need 1 < φ < κ (got φ={phi}, κ={kappa})")));
    }
    Ok(())
}

pub fn build_mean_matrix(n: usize, eta: f64, chi: f64, kappa: f64, phi: f64) -> Result<MeanMatrix> {
    build_mean_matrix_with_base(n, eta, chi, kappa, phi, LogBase::Two)
}

/// Mean matrix with the far-upper threshold `2⌈log n⌉` in the given base:
///
/// * `j − i > 2⌈log n⌉`: `η/n²`
/// * `1 <= j − i <= 2⌈log n⌉`: `η·C(N', j−i)·(χ/n)^(j−i)`, `N' = ⌊n·ln(ηκφ)/χ⌋`
/// * `i = j`: `1/κ`
/// * `i > j`: `(1/κ)·C(i, i−j)·(χ/n)^(i−j)`
pub fn build_mean_matrix_with_base(
    n: usize,
    eta: f64,
    chi: f64,
    kappa: f64,
    phi: f64,
    log_base: LogBase,
) -> Result<MeanMatrix> {
    check_matrix_params(n, eta, chi, kappa, phi)?;
    let d = type_count(n, chi, phi);
    let nf = n as f64;
    let band = 2 * (log_base.log(nf) - 1e-9).ceil().max(0.0) as usize;
    let window = (nf * (eta * kappa * phi).ln() / chi + 1e-9).floor() as u64;
    let ln_rate = (chi / nf).ln();
    let (ln_eta, ln_kappa) = (eta.ln(), kappa.ln());
    let far = ln_eta - 2.0 * nf.ln();

    let mut log_entries = Vec::with_capacity(d * d);
    for i in 1..=d {
        for j in 1..=d {
            let l = if j > i {
                let m = j - i;
                if m > band {
                    far
                } else {
                    ln_eta + ln_binomial(window, m as u64) + m as f64 * ln_rate
                }
            } else if i == j {
                -ln_kappa
            } else {
                let m = i - j;
                -ln_kappa + ln_binomial(i as u64, m as u64) + m as f64 * ln_rate
            };
            log_entries.push(l);
        }
    }
    let entries = log_entries.iter().map(|l| l.exp()).collect();
    Ok(MeanMatrix {
        d,
        entries,
        log_entries,
        provenance: Provenance::SelPres {
            n,
            eta,
            chi,
            kappa,
            phi,
            log_base,
        },
    })
}

fn reaches_all(m: &MeanMatrix, reverse: bool) -> bool {
    let d = m.dim();
    let mut seen = vec![false; d];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for (w, s) in seen.iter_mut().enumerate() {
            let edge = if reverse { m.get(w + 1, u + 1) } else { m.get(u + 1, w + 1) };
            if edge > 0.0 && !*s {
                *s = true;
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Strong connectivity of the graph with an edge `i → j` whenever `a_{ij} > 0`.
pub fn check_irreducible(m: &MeanMatrix) -> bool {
    reaches_all(m, false) && reaches_all(m, true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronResult {
    pub rho: f64,
    /// Right eigenvector scaled to max entry 1.
    pub v: Vec<f64>,
    /// `min_i v_i`.
    pub v_star: f64,
    pub iterations: usize,
    /// `‖Av − ρv‖_∞ / ‖v‖_∞`.
    pub residual: f64,
}

pub const RESIDUAL_LIMIT: f64 = 1e-10;

/// Power iteration from the all-ones vector. Converged once successive
/// Rayleigh quotients differ by less than `tol` and the residual is at most
/// [`RESIDUAL_LIMIT`].
pub fn perron(m: &MeanMatrix, tol: f64, max_iters: usize) -> Result<PerronResult> {
    if !check_irreducible(m) {
        return Err(Error::domain("power iteration requires an irreducible matrix"));
    }
    let d = m.dim();
    let mut v = vec![1.0; d];
    let mut w = vec![0.0; d];
    let mut prev = f64::NAN;
    let mut residual = f64::INFINITY;
    for it in 1..=max_iters {
        m.mul_vec(&v, &mut w);
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let rho = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / vv;
        // v is normalized to max entry 1
        residual = v
            .iter()
            .zip(&w)
            .map(|(x, y)| (y - rho * x).abs())
            .fold(0.0, f64::max);
        if (rho - prev).abs() < tol && residual <= RESIDUAL_LIMIT {
            let v_star = v.iter().copied().fold(f64::INFINITY, f64::min);
            return Ok(PerronResult {
                rho,
                v,
                v_star,
                iterations: it,
                residual,
            });
        }
        prev = rho;
        let top = w.iter().copied().fold(0.0, f64::max);
        if top <= 0.0 || !top.is_finite() {
            return Err(Error::NoConvergence { iterations: it, residual });
        }
        for (x, y) in v.iter_mut().zip(&w) {
            *x = y / top;
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iters,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma6Constants {
    pub r: f64,
    pub q: f64,
}

fn check_eta_kappa_phi(eta: f64, kappa: f64, phi: f64) -> Result<()> {
    if !(eta > 1.0 && eta <= 2.0) {
        return Err(Error::domain(format!("η must satisfy 1 < η ≤ 2 (got {eta})")));
    }
    if !(kappa > 1.0 && kappa.is_finite()) {
        return Err(Error::domain(format!("κ must exceed 1 (got {kappa})")));
    }
    if !(phi > 1.0 && phi.is_finite()) {
        return Err(Error::domain(format!("φ must exceed 1 (got {phi})")));
    }
    Ok(())
}

fn constants_unchecked(eta: f64, kappa: f64, phi: f64) -> Lemma6Constants {
    let sk = kappa.sqrt();
    let r = 2.0 / (eta - 1.0) * sk / (sk - 1.0);
    let q = (eta * kappa * phi).ln() / (1.0 / (r * eta)).ln_1p();
    Lemma6Constants { r, q }
}

/// `r = (2/(η−1))·√κ/(√κ−1)` and `q = ln(ηκφ) / ln(1 + 1/(rη))`.
pub fn lemma6_constants(eta: f64, kappa: f64, phi: f64) -> Result<Lemma6Constants> {
    check_eta_kappa_phi(eta, kappa, phi)?;
    let c = constants_unchecked(eta, kappa, phi);
    if !(c.q > 1.0) {
        return Err(Error::domain(format!("q = {} is not above 1", c.q)));
    }
    Ok(c)
}

/// Whether `φ < κ^(1/(2q(φ)))`.
fn phi_admissible(eta: f64, kappa: f64, phi: f64) -> bool {
    let q = constants_unchecked(eta, kappa, phi).q;
    phi < kappa.powf(1.0 / (2.0 * q))
}

/// Supremum of admissible `φ`: the root of `φ = κ^(1/(2q(φ)))` on `(1, κ)`.
pub fn max_admissible_phi(eta: f64, kappa: f64) -> Result<f64> {
    check_eta_kappa_phi(eta, kappa, kappa)?;
    let (mut lo, mut hi) = (1.0f64, kappa);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi_admissible(eta, kappa, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `η/n + 1/r + φ^q/κ`, valid when `1 < φ < κ^(1/(2q))`.
pub fn frobenius_bound(n: usize, eta: f64, chi: f64, kappa: f64, phi: f64) -> Result<f64> {
    check_eta_kappa_phi(eta, kappa, phi)?;
    if n < 1 || !(chi > 0.0) {
        return Err(Error::domain("need n >= 1 and χ > 0"));
    }
    if !phi_admissible(eta, kappa, phi) {
        return Err(Error::PhiTooLarge {
            phi,
            max_phi: max_admissible_phi(eta, kappa)?,
        });
    }
    let Lemma6Constants { r, q } = lemma6_constants(eta, kappa, phi)?;
    Ok(eta / n as f64 + 1.0 / r + phi.powf(q) / kappa)
}

/// `η/n + 1/2 + 1/(2√κ)`, the bound's value under its precondition.
pub fn simplified_frobenius_bound(n: usize, eta: f64, kappa: f64) -> f64 {
    eta / n as f64 + 0.5 + 0.5 / kappa.sqrt()
}

/// Fixed-point search for an admissible `φ`, starting from `κ^(1/4)` and
/// shrinking by `1 − 1e−3` each step.
pub fn choose_phi(eta: f64, chi: f64, kappa: f64) -> Result<f64> {
    check_eta_kappa_phi(eta, kappa, kappa)?;
    if !(chi > 0.0) {
        return Err(Error::domain(format!("χ must be positive (got {chi})")));
    }
    let phi0 = kappa.powf(0.25);
    let mut phi = phi0;
    for _ in 0..1000 {
        let q = constants_unchecked(eta, kappa, phi).q;
        let next = phi0.min(kappa.powf(1.0 / (2.0 * q))) * (1.0 - 1e-3);
        let done = (next - phi).abs() < 1e-9;
        phi = next;
        if done {
            if phi > 1.0 && phi_admissible(eta, kappa, phi) {
                return Ok(phi);
            }
            return Err(Error::domain(format!(
                "fixed point φ = {phi} is not admissible for η = {eta}, κ = {kappa}"
            )));
        }
    }
    Err(Error::domain(format!(
        "φ iteration did not stabilise for η = {eta}, χ = {chi}, κ = {kappa}"
    )))
}

/// Log of the eigenvector-ratio bound `2^d · (n/χ)^(d − h)` with `d` the
/// matrix dimension.
pub fn eigen_ratio_bound(h: usize, n: usize, chi: f64, phi: f64) -> Result<f64> {
    let d = type_count(n, chi, phi);
    if h < 1 || h > d {
        return Err(Error::domain(format!("h = {h} outside 1..={d}")));
    }
    Ok(d as f64 * std::f64::consts::LN_2 + (d - h) as f64 * (n as f64 / chi).ln())
}

/// `max_{k,j} a_{hj}/a_{kj}` over columns with no zero entry, in log space.
pub fn log_entry_ratio_bound(m: &MeanMatrix, h: usize) -> f64 {
    let d = m.dim();
    let mut best = f64::NEG_INFINITY;
    for j in 1..=d {
        let min_col = (1..=d).map(|k| m.log_get(k, j)).fold(f64::INFINITY, f64::min);
        if min_col.is_finite() {
            best = best.max(m.log_get(h, j) - min_col);
        }
    }
    best
}

/// `min(1, ρ^t/k · v_h/v*)`.
pub fn tail_bound(p: &PerronResult, h: usize, t: u32, k: u64) -> Result<f64> {
    if h < 1 || h > p.v.len() || t < 1 || k < 1 {
        return Err(Error::domain(format!("need 1 <= h <= {}, t >= 1, k >= 1", p.v.len())));
    }
    let log = t as f64 * p.rho.ln() - (k as f64).ln() + p.v[h - 1].ln() - p.v_star.ln();
    Ok(log.exp().min(1.0))
}

/// Summary emitted by the `spectral` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub d: usize,
    pub rho: f64,
    pub frobenius_bound: f64,
    pub phi: f64,
    pub kappa: f64,
    pub q: f64,
    pub r: f64,
    pub residual: f64,
    pub iterations: usize,
}

pub const DEFAULT_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_ITERS: usize = 10_000_000;

/// Builds the matrix (choosing `φ` when not given), runs power iteration,
/// and evaluates the Frobenius-style bound.
pub fn spectral_report(n: usize, eta: f64, chi: f64, kappa: f64, phi: Option<f64>) -> Result<SpectralReport> {
    let phi = match phi {
        Some(p) => p,
        None => choose_phi(eta, chi, kappa)?,
    };
    let m = build_mean_matrix(n, eta, chi, kappa, phi)?;
    let p = perron(&m, DEFAULT_TOL, DEFAULT_MAX_ITERS)?;
    let c = lemma6_constants(eta, kappa, phi)?;
    Ok(SpectralReport {
        d: m.dim(),
        rho: p.rho,
        frobenius_bound: frobenius_bound(n, eta, chi, kappa, phi)?,
        phi,
        kappa,
        q: c.q,
        r: c.r,
        residual: p.residual,
        iterations: p.iterations,
    })
}
