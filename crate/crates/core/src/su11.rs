//! SU(1,1) discrete-series irreps (Bargmann index `k`), truncated at `n_max`:
//! generators, Perelomov coherent states, `K2`-`K3` intelligent states,
//! normalization factors and the closed-form `K3` variance.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::eigen::{self, EigenPair, TriSpec};
use crate::error::{invalid, Error, Result};
use crate::half::HalfInt;
use crate::specfun::{jacobi_scaled, ln_factorials, sum_scaled, Scaled};
use crate::state::{ladder_moments, IrrepLabel, MomentSummary, RepState};
use crate::su2::real_state_from_logs;

/// Truncation floor for automatically sized bases.
pub const MIN_N_MAX: usize = 64;
const AUTO_N_MAX_LIMIT: usize = 1 << 18;
/// Tail mass tolerated by [`su11_coherent`].
pub const COHERENT_TAIL: f64 = 1e-12;

/// Discrete-series irrep `D+(k)` restricted to `n = 0..=n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Su11Irrep {
    k: HalfInt,
    n_max: usize,
}

impl Su11Irrep {
    pub fn new(k: HalfInt, n_max: usize) -> Result<Self> {
        if k.doubled() < 1 {
            return Err(invalid("k", format!("k = {k} must be at least 1/2")));
        }
        if n_max < 1 {
            return Err(invalid("n_max", "truncation must keep at least two levels"));
        }
        Ok(Su11Irrep { k, n_max })
    }

    pub fn k(&self) -> HalfInt {
        self.k
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn with_n_max(&self, n_max: usize) -> Result<Self> {
        Su11Irrep::new(self.k, n_max)
    }

    pub fn label(&self) -> IrrepLabel {
        IrrepLabel::Su11 {
            k: self.k,
            n_max: self.n_max,
        }
    }
}

/// Truncated dense generator matrices in the `|k, k+n>` basis.
#[derive(Debug, Clone)]
pub struct Su11Generators {
    pub k1: DMatrix<Complex64>,
    pub k2: DMatrix<Complex64>,
    pub k3: DMatrix<Complex64>,
    pub k_plus: DMatrix<Complex64>,
    pub k_minus: DMatrix<Complex64>,
}

pub fn su11_generators(irrep: &Su11Irrep) -> Su11Generators {
    let label = irrep.label();
    let n = label.dim();
    let w = label.weights();
    let up = label.raising();
    let k3 = DMatrix::from_fn(n, n, |r, c| if r == c { Complex64::new(w[r], 0.0) } else { Complex64::default() });
    let k_plus = DMatrix::from_fn(n, n, |r, c| {
        if r == c + 1 {
            Complex64::new(up[c], 0.0)
        } else {
            Complex64::default()
        }
    });
    let k_minus = k_plus.adjoint();
    let i = Complex64::new(0.0, 1.0);
    let k1 = (&k_plus + &k_minus) * Complex64::new(0.5, 0.0);
    let k2 = (&k_plus - &k_minus) / (i * 2.0);
    Su11Generators {
        k1,
        k2,
        k3,
        k_plus,
        k_minus,
    }
}

/// `ln[C(2k+n-1, n) r^(2n)]`.
fn ln_coherent_weight(lf: &[f64], two_k: usize, n: usize, ln_r: f64) -> f64 {
    lf[two_k + n - 1] - lf[n] - lf[two_k - 1] + 2.0 * n as f64 * ln_r
}

/// Smallest truncation whose coherent-state tail mass is below `COHERENT_TAIL`.
pub fn su11_coherent_n_max(k: HalfInt, zeta: Complex64) -> Result<usize> {
    let r = zeta.norm();
    if !(r < 1.0) {
        return Err(Error::Domain(format!("|zeta| = {r} must be below 1")));
    }
    if r == 0.0 {
        return Ok(1);
    }
    let two_k = k.doubled() as usize;
    let pre = 2.0 * k.value() * (-r * r).ln_1p();
    let mut cap = 256;
    loop {
        let lf = ln_factorials(two_k + cap);
        let mut acc = 0.0;
        for n in 0..cap {
            acc += (pre + ln_coherent_weight(&lf, two_k, n, r.ln())).exp();
            if 1.0 - acc < COHERENT_TAIL && n >= 1 {
                return Ok(n);
            }
        }
        if cap >= AUTO_N_MAX_LIMIT {
            return Err(Error::Truncation(format!("|zeta| = {r} needs more than {cap} levels")));
        }
        cap *= 2;
    }
}

/// Perelomov coherent state `(1-|z|^2)^k sum sqrt(C(2k+n-1, n)) z^n |k, k+n>`.
pub fn su11_coherent(irrep: &Su11Irrep, zeta: Complex64) -> Result<RepState> {
    let r = zeta.norm();
    if !(r < 1.0) {
        return Err(Error::Domain(format!("|zeta| = {r} must be below 1")));
    }
    let two_k = irrep.k.doubled() as usize;
    let lf = ln_factorials(two_k + irrep.n_max);
    let pre = 2.0 * irrep.k.value() * (-r * r).ln_1p();
    let mut kept = 0.0;
    let amps = DVector::from_iterator(
        irrep.dim(),
        (0..irrep.dim()).map(|n| {
            if r == 0.0 {
                kept = 1.0;
                return if n == 0 { Complex64::new(1.0, 0.0) } else { Complex64::default() };
            }
            let lw = pre + ln_coherent_weight(&lf, two_k, n, r.ln());
            kept += lw.exp();
            Complex64::from_polar((0.5 * lw).exp(), n as f64 * zeta.arg())
        }),
    );
    let tail = 1.0 - kept;
    if tail > COHERENT_TAIL {
        return Err(Error::Truncation(format!(
            "n_max = {} leaves tail mass {tail:.3e} for |zeta| = {r}",
            irrep.n_max
        )));
    }
    RepState::new(irrep.label(), amps)
}

/// Parameters of a `K2`-`K3` intelligent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su11IntelligentSpec {
    k: HalfInt,
    l: usize,
    eta: f64,
}

impl Su11IntelligentSpec {
    pub fn new(k: HalfInt, l: usize, eta: f64) -> Result<Self> {
        if k.doubled() < 1 {
            return Err(invalid("k", format!("k = {k} must be at least 1/2")));
        }
        if !eta.is_finite() || eta == 0.0 {
            return Err(Error::Domain(
                "eta = 0 degenerates to a K3 eigenstate; intelligent states need eta != 0".into(),
            ));
        }
        Ok(Su11IntelligentSpec { k, l, eta })
    }

    pub fn k(&self) -> HalfInt {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    fn root(&self) -> f64 {
        self.eta.hypot(1.0)
    }

    /// `(sqrt(eta^2 + 1) - 1) / eta`, written to avoid cancellation.
    pub fn tau(&self) -> f64 {
        self.eta / (self.root() + 1.0)
    }

    /// Eigenvalue `i (k + l) sqrt(eta^2 + 1)` of `eta K2 + i K3`.
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(0.0, (self.k.value() + self.l as f64) * self.root())
    }

    pub fn x(&self) -> f64 {
        1.0 / self.root()
    }

    pub fn t(&self) -> f64 {
        4.0 * (self.eta * self.eta + 1.0) / (self.eta * self.eta)
    }

    pub fn s_plus(&self) -> f64 {
        1.0 - (self.x() + 1.0).powi(2) * self.t() / 4.0
    }

    pub fn s_minus(&self) -> f64 {
        1.0 - (self.x() - 1.0).powi(2) * self.t() / 4.0
    }

    /// Sign/log Taylor coefficients of `(1 + z/tau)^l (1 - tau z)^(-2k-l)`
    /// for `n = 0..=n_max`.
    fn generating_coefficients(&self, n_max: usize) -> Vec<Scaled> {
        let l = self.l;
        let two_k = self.k.doubled() as usize;
        let lf = ln_factorials(two_k + l + n_max);
        let ln_tau = self.tau().abs().ln();
        let sgn = if self.eta < 0.0 { -1 } else { 1 };
        (0..=n_max)
            .map(|n| {
                let mut s = sum_scaled((0..=n.min(l)).map(|p| Scaled {
                    sign: 1,
                    ln_abs: lf[l] - lf[p] - lf[l - p] + lf[two_k + l - 1 + n - p]
                        - lf[n - p]
                        - lf[two_k + l - 1]
                        + (n as f64 - 2.0 * p as f64) * ln_tau,
                }));
                if n % 2 == 1 {
                    s.sign *= sgn;
                }
                s
            })
            .collect()
    }

    fn ln_amplitudes(&self, n_max: usize) -> Vec<Scaled> {
        let two_k = self.k.doubled() as usize;
        let lf = ln_factorials(two_k + n_max);
        self.generating_coefficients(n_max)
            .into_iter()
            .enumerate()
            .map(|(n, mut s)| {
                s.ln_abs -= 0.5 * (lf[two_k + n - 1] - lf[n] - lf[two_k - 1]);
                s
            })
            .collect()
    }

    /// Truncation past the amplitude peak where the last level carries less
    /// than `1e-16` of the accumulated norm, floored at [`MIN_N_MAX`].
    pub fn auto_n_max(&self) -> Result<usize> {
        let mut cap = 4 * MIN_N_MAX.max(self.l);
        loop {
            let logs = self.ln_amplitudes(cap);
            let peak = logs.iter().map(|s| s.ln_abs).fold(f64::NEG_INFINITY, f64::max);
            let mut acc = 0.0;
            for (n, s) in logs.iter().enumerate() {
                acc += (2.0 * (s.ln_abs - peak)).exp();
                if n >= MIN_N_MAX
                    && n > self.l
                    && s.ln_abs < logs[n - 1].ln_abs
                    && (2.0 * (s.ln_abs - peak)).exp() < 1e-16 * acc
                {
                    return Ok(n);
                }
            }
            if cap >= AUTO_N_MAX_LIMIT {
                return Err(Error::Truncation(format!(
                    "no truncation below {cap} levels for k = {}, l = {}, eta = {}",
                    self.k, self.l, self.eta
                )));
            }
            cap *= 2;
        }
    }
}

/// Intelligent state by binomial convolution, truncated automatically.
pub fn su11_intelligent(spec: &Su11IntelligentSpec) -> Result<RepState> {
    su11_intelligent_truncated(spec, spec.auto_n_max()?)
}

/// Intelligent state by binomial convolution on `n = 0..=n_max`.
pub fn su11_intelligent_truncated(spec: &Su11IntelligentSpec, n_max: usize) -> Result<RepState> {
    let irrep = Su11Irrep::new(spec.k, n_max)?;
    real_state_from_logs(irrep.label(), &spec.ln_amplitudes(n_max))
}

/// Intelligent state from the Jacobi-polynomial expansion in `(x, t)`.
pub fn su11_intelligent_jacobi(spec: &Su11IntelligentSpec, n_max: usize) -> Result<RepState> {
    let irrep = Su11Irrep::new(spec.k, n_max)?;
    let two_k = spec.k.doubled() as usize;
    let lf = ln_factorials(two_k + n_max);
    let (x, half_ln_t) = (spec.x(), 0.5 * spec.t().ln());
    let l = spec.l as f64;
    let sgn = spec.eta.signum();
    let logs: Vec<Scaled> = (0..=n_max)
        .map(|n| {
            let nf = n as f64;
            let p = jacobi_scaled(n, l - nf, -(two_k as f64) - l - nf, x);
            let mut s = p.mul(Scaled::from_f64(sgn).powi(n));
            if s.sign != 0 {
                s.ln_abs += 0.5 * (lf[n] + lf[two_k - 1] - lf[two_k + n - 1]) + nf * half_ln_t;
            }
            s
        })
        .collect();
    real_state_from_logs(irrep.label(), &logs)
}

/// Normalization factor of an intelligent state.
pub use crate::su2::NormFactor;

/// `ln N` from the Jacobi series, summed until a term falls below `1e-18`
/// of the running total.
pub fn su11_ln_norm_direct(spec: &Su11IntelligentSpec) -> Result<f64> {
    let two_k = spec.k.doubled() as usize;
    let (x, ln_t) = (spec.x(), spec.t().ln());
    let l = spec.l as f64;
    let mut cap = 4 * MIN_N_MAX.max(spec.l);
    let mut start = 0;
    let mut terms: Vec<Scaled> = Vec::new();
    loop {
        let lf = ln_factorials(two_k + cap);
        for n in start..cap {
            let nf = n as f64;
            let p = jacobi_scaled(n, l - nf, -(two_k as f64) - l - nf, x);
            let term = if p.sign == 0 {
                Scaled::ZERO
            } else {
                Scaled {
                    sign: 1,
                    ln_abs: lf[n] + lf[two_k - 1] - lf[two_k + n - 1] + 2.0 * p.ln_abs + nf * ln_t,
                }
            };
            terms.push(term);
            if n > spec.l && n >= MIN_N_MAX && term.sign != 0 {
                let total = sum_scaled(terms.iter().copied());
                if term.ln_abs - total.ln_abs < (1e-18f64).ln() {
                    return Ok(total.ln_abs);
                }
            }
        }
        if cap >= AUTO_N_MAX_LIMIT {
            return Err(Error::Truncation(format!("normalization series not converged after {cap} terms")));
        }
        start = cap;
        cap *= 2;
    }
}

/// `ln N` in closed form.
pub fn su11_ln_norm_closed(spec: &Su11IntelligentSpec) -> Result<f64> {
    let two_k = spec.k.doubled() as usize;
    let l = spec.l;
    let lf = ln_factorials(two_k + l);
    let (sp, sm, t) = (spec.s_plus(), spec.s_minus(), spec.t());
    let p = jacobi_scaled(l, two_k as f64 - 1.0, 0.0, 1.0 + 2.0 * t / (sp * sm));
    let sign = p.mul(Scaled::from_f64(sp).powi(l)).sign;
    if sign <= 0 {
        return Err(Error::Singularity(format!(
            "closed normalization is not positive at k = {}, l = {l}, eta = {}",
            spec.k, spec.eta
        )));
    }
    Ok(l as f64 * sp.abs().ln() - (two_k + l) as f64 * sm.ln() + lf[l] + lf[two_k - 1]
        - lf[two_k + l - 1]
        + p.ln_abs)
}

pub fn su11_norm_factor(k: HalfInt, l: usize, eta: f64) -> Result<NormFactor> {
    let spec = Su11IntelligentSpec::new(k, l, eta)?;
    Ok(NormFactor {
        direct: su11_ln_norm_direct(&spec)?.exp(),
        closed: Some(su11_ln_norm_closed(&spec)?.exp()),
    })
}

/// `((2k+l)/k) (eta^2+1) P_{l-1}^(1,2k)(2eta^2+1) / P_l^(0,2k-1)(2eta^2+1)`.
pub(crate) fn su11_ratio_term(spec: &Su11IntelligentSpec) -> Result<f64> {
    if spec.l == 0 {
        return Ok(0.0);
    }
    let k = spec.k.value();
    let e2 = spec.eta * spec.eta;
    let y = 2.0 * e2 + 1.0;
    let num = jacobi_scaled(spec.l - 1, 1.0, 2.0 * k, y);
    let den = jacobi_scaled(spec.l, 0.0, 2.0 * k - 1.0, y);
    let ratio = num
        .div(den)
        .ok_or_else(|| Error::Singularity(format!("P_{}^(0,{})(2 eta^2 + 1) vanishes", spec.l, 2.0 * k - 1.0)))?;
    Ok((2.0 * k + spec.l as f64) / k * (e2 + 1.0) * ratio.to_f64())
}

/// Exact `Var(K3)` of the intelligent state from the Jacobi-ratio formula.
pub fn su11_variance_k3_closed(k: HalfInt, l: usize, eta: f64) -> Result<f64> {
    let spec = Su11IntelligentSpec::new(k, l, eta)?;
    Ok(eta * eta * k.value() / 2.0 * (1.0 + su11_ratio_term(&spec)?))
}

fn su11_tri_spec(irrep: &Su11Irrep, eta: f64) -> TriSpec {
    let label = irrep.label();
    let mut coupling: Vec<f64> = label.raising().iter().map(|u| (u * u).round()).collect();
    coupling.truncate(irrep.n_max);
    // growth ratio of the two solutions of the three-term recurrence
    let tau = (eta / (eta.hypot(1.0) + 1.0)).abs();
    let grow = 2.0 * irrep.dim() as f64 * (1.0 / tau).log2();
    TriSpec {
        diag: label.weights(),
        coupling,
        eta,
        bits: 128 + grow.ceil() as usize,
    }
}

/// Eigenpair of the truncated `K3 - i eta K2` with eigenvalue `mu` near
/// `(k+l) sqrt(eta^2+1)`; a miss beyond `1e-4` means the truncation is too small.
pub fn su11_eigen_pair(spec: &Su11IntelligentSpec, n_max: usize) -> Result<EigenPair> {
    let irrep = Su11Irrep::new(spec.k, n_max)?;
    eigen::eigenpair_near(&su11_tri_spec(&irrep, spec.eta), spec.lambda().im, 1e-4).map_err(|e| match e {
        Error::Domain(msg) => Error::Truncation(format!("{msg}; n_max = {n_max} is too small")),
        other => other,
    })
}

/// Intelligent state from a multiprecision eigensolve of the truncated `eta K2 + i K3`.
pub fn su11_intelligent_eigen_oracle(spec: &Su11IntelligentSpec, n_max: usize) -> Result<RepState> {
    let pair = su11_eigen_pair(spec, n_max)?;
    RepState::from_real(Su11Irrep::new(spec.k, n_max)?.label(), &pair.vector)
}

/// Oracle state with the truncation chosen automatically: starting from
/// [`Su11IntelligentSpec::auto_n_max`], `n_max` doubles until the truncated
/// operator has an eigenvalue within `1e-4` of the target and the state agrees
/// to `tol` with the one at `2 n_max`. Returns the state at the accepted `n_max`.
pub fn su11_intelligent_eigen_oracle_auto(spec: &Su11IntelligentSpec, tol: f64) -> Result<RepState> {
    let mut n = spec.auto_n_max()?;
    let mut prev: Option<RepState> = None;
    while n <= 16 * MIN_N_MAX.max(spec.auto_n_max()?) {
        match su11_intelligent_eigen_oracle(spec, n) {
            Ok(s) => {
                if let Some(p) = prev.take() {
                    if p.distance_up_to_phase(&s) < tol {
                        return Ok(p);
                    }
                }
                prev = Some(s);
            }
            Err(Error::Truncation(_)) => prev = None,
            Err(e) => return Err(e),
        }
        n *= 2;
    }
    Err(Error::Truncation(format!(
        "eigenvector for k = {}, l = {}, eta = {} not stable under doubling up to n_max = {}",
        spec.k,
        spec.l,
        spec.eta,
        n / 2
    )))
}

/// The `count` lowest real eigenvalues `lambda = i mu` of the truncated
/// `eta K2 + i K3`, resolved on a scan of spacing `step`.
pub fn su11_lowest_eigenvalues(irrep: &Su11Irrep, eta: f64, count: usize, step: f64) -> Result<Vec<Complex64>> {
    if !(step > 0.0) {
        return Err(invalid("step", "scan step must be positive"));
    }
    let mu = eigen::lowest_real(&su11_tri_spec(irrep, eta), count, step)?;
    Ok(mu.into_iter().map(|m| Complex64::new(0.0, m)).collect())
}

/// Means and symmetrized covariances of `(K1, K2, K3)`, with `K+` acting
/// one level past the truncation.
pub fn su11_state_moments(state: &RepState) -> Result<MomentSummary> {
    let label = state.label();
    if !matches!(label, IrrepLabel::Su11 { .. }) {
        return Err(invalid("state", "expected an SU(1,1) state"));
    }
    Ok(ladder_moments(state.amplitudes(), &label.weights(), &label.raising()))
}

/// `||(eta K2 + i K3 - lambda) psi||` with truncated generators.
pub fn su11_eigen_residual(state: &RepState, eta: f64, lambda: Complex64) -> Result<f64> {
    let IrrepLabel::Su11 { k, n_max } = state.label() else {
        return Err(invalid("state", "expected an SU(1,1) state"));
    };
    let g = su11_generators(&Su11Irrep::new(k, n_max)?);
    let i = Complex64::new(0.0, 1.0);
    let op = &g.k2 * Complex64::new(eta, 0.0) + &g.k3 * i;
    let v = state.amplitudes();
    Ok((op * v - v * lambda).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(d: i64) -> HalfInt {
        HalfInt::from_doubled(d)
    }

    #[test]
    fn generator_examples() {
        let g = su11_generators(&Su11Irrep::new(k(1), 3).unwrap());
        let d: Vec<f64> = (0..4).map(|n| g.k3[(n, n)].re).collect();
        assert_eq!(d, vec![0.5, 1.5, 2.5, 3.5]);

        let g = su11_generators(&Su11Irrep::new(k(2), 10).unwrap());
        assert!((g.k_plus[(1, 0)].re - 2f64.sqrt()).abs() < 1e-15);

        let g = su11_generators(&Su11Irrep::new(k(3), 20).unwrap());
        let i = Complex64::new(0.0, 1.0);
        let c = &g.k1 * &g.k2 - &g.k2 * &g.k1 + &g.k3 * i;
        for r in 0..20 {
            for col in 0..20 {
                assert!(c[(r, col)].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn coherent_examples() {
        let s = su11_coherent(&Su11Irrep::new(k(2), 8).unwrap(), Complex64::default()).unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));

        let z = Complex64::new(0.5, 0.0);
        let n = su11_coherent_n_max(k(1), z).unwrap();
        let s = su11_coherent(&Su11Irrep::new(k(1), n).unwrap(), z).unwrap();
        let m = su11_state_moments(&s).unwrap();
        assert!((m.mean[2] - 0.5 * 1.25 / 0.75).abs() < 1e-10);

        assert!(matches!(
            su11_coherent(&Su11Irrep::new(k(1), 10).unwrap(), Complex64::new(0.9, 0.0)),
            Err(Error::Truncation(_))
        ));
        assert!(su11_coherent(&Su11Irrep::new(k(1), 10).unwrap(), Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn intelligent_examples() {
        let spec = Su11IntelligentSpec::new(k(2), 0, 0.5).unwrap();
        let s = su11_intelligent(&spec).unwrap();
        assert!(su11_eigen_residual(&s, 0.5, spec.lambda()).unwrap() < 1e-10);
        assert!((spec.lambda().im - 1.25f64.sqrt()).abs() < 1e-15);

        let spec = Su11IntelligentSpec::new(k(1), 2, 1.0).unwrap();
        let s = su11_intelligent(&spec).unwrap();
        assert!(su11_eigen_residual(&s, 1.0, spec.lambda()).unwrap() < 1e-10);
        assert!(s.tail_mass(3) < 1e-12);

        let spec = Su11IntelligentSpec::new(k(1), 0, 0.8).unwrap();
        let s = su11_intelligent(&spec).unwrap();
        let c = su11_coherent(&Su11Irrep::new(k(1), s.dim() - 1).unwrap(), Complex64::new(spec.tau(), 0.0)).unwrap();
        assert!((s.overlap(&c).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norm_and_variance_examples() {
        for &eta in &[0.3, 1.0, 2.5] {
            let nf = su11_norm_factor(k(1), 0, eta).unwrap();
            let spec = Su11IntelligentSpec::new(k(1), 0, eta).unwrap();
            let want = (1.0 - spec.tau().powi(2)).powi(-1);
            assert!((nf.direct - want).abs() < 1e-12 * want);
            assert!((nf.closed.unwrap() - want).abs() < 1e-12 * want);

            let v = su11_variance_k3_closed(k(3), 0, eta).unwrap();
            assert!((v - eta * eta * 0.75).abs() < 1e-14);
        }
    }

    #[test]
    fn eigen_oracle_example() {
        let spec = Su11IntelligentSpec::new(k(2), 1, 0.5).unwrap();
        let n = spec.auto_n_max().unwrap();
        let a = su11_intelligent_eigen_oracle(&spec, n).unwrap();
        let b = su11_intelligent_truncated(&spec, n).unwrap();
        assert!(a.distance_up_to_phase(&b) < 1e-8);
    }

    #[test]
    fn eta_zero_rejected() {
        assert!(matches!(Su11IntelligentSpec::new(k(2), 1, 0.0), Err(Error::Domain(_))));
        assert!(Su11IntelligentSpec::new(k(0), 1, 0.5).is_err());
    }
}
