//! SU(2) irreps in the two-mode realization: generators, coherent and
//! intelligent states, normalization factors and the closed-form `J3` variance.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::eigen::{self, EigenPair, TriSpec};
use crate::error::{invalid, Error, Result};
use crate::half::HalfInt;
use crate::specfun::{jacobi_scaled, ln_binom_row, ln_factorials, sum_scaled, Scaled};
use crate::state::{ladder_moments, IrrepLabel, MomentSummary, RepState};

/// The spin-`j` irrep with basis `m = -j, ..., j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Su2Irrep {
    j: HalfInt,
}

impl Su2Irrep {
    pub fn new(j: HalfInt) -> Result<Self> {
        if j.doubled() < 1 {
            return Err(invalid("j", format!("j = {j} must be at least 1/2")));
        }
        Ok(Su2Irrep { j })
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn dim(&self) -> usize {
        self.j.doubled() as usize + 1
    }

    pub fn label(&self) -> IrrepLabel {
        IrrepLabel::Su2 { j: self.j }
    }

    /// Basis index of weight `m`.
    pub fn index(&self, m: HalfInt) -> Result<usize> {
        match (m + self.j).int_diff(HalfInt::ZERO) {
            Some(i) if (0..self.dim() as i64).contains(&i) => Ok(i as usize),
            _ => Err(invalid("m", format!("m = {m} is not a weight of j = {}", self.j))),
        }
    }
}

/// Dense generator matrices in the `|j, m>` basis.
#[derive(Debug, Clone)]
pub struct Su2Generators {
    pub j1: DMatrix<Complex64>,
    pub j2: DMatrix<Complex64>,
    pub j3: DMatrix<Complex64>,
    pub j_plus: DMatrix<Complex64>,
    pub j_minus: DMatrix<Complex64>,
}

pub fn su2_generators(irrep: &Su2Irrep) -> Su2Generators {
    let label = irrep.label();
    let n = label.dim();
    let w = label.weights();
    let up = label.raising();
    let j3 = DMatrix::from_fn(n, n, |r, c| if r == c { Complex64::new(w[r], 0.0) } else { Complex64::default() });
    let j_plus = DMatrix::from_fn(n, n, |r, c| {
        if r == c + 1 {
            Complex64::new(up[c], 0.0)
        } else {
            Complex64::default()
        }
    });
    let j_minus = j_plus.adjoint();
    let i = Complex64::new(0.0, 1.0);
    let j1 = (&j_plus + &j_minus) * Complex64::new(0.5, 0.0);
    let j2 = (&j_plus - &j_minus) / (i * 2.0);
    Su2Generators {
        j1,
        j2,
        j3,
        j_plus,
        j_minus,
    }
}

pub(crate) fn real_state_from_logs(label: IrrepLabel, logs: &[Scaled]) -> Result<RepState> {
    let max = logs
        .iter()
        .filter(|s| s.sign != 0)
        .map(|s| s.ln_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::Domain("all amplitudes vanish".into()));
    }
    let amps: Vec<f64> = logs
        .iter()
        .map(|s| if s.sign == 0 { 0.0 } else { f64::from(s.sign) * (s.ln_abs - max).exp() })
        .collect();
    RepState::from_real(label, &amps)
}

/// Generalized coherent state `(1+|z|^2)^(-j) sum sqrt(C(2j, j+m)) z^(j+m) |j,m>`.
pub fn su2_coherent(irrep: &Su2Irrep, zeta: Complex64) -> RepState {
    let n2j = irrep.dim() - 1;
    let lf = ln_factorials(n2j);
    let r = zeta.norm();
    let arg = zeta.arg();
    let amps: Vec<(f64, f64)> = (0..=n2j)
        .map(|n| {
            let ln_pow = if n == 0 { 0.0 } else { n as f64 * r.ln() };
            (0.5 * (lf[n2j] - lf[n] - lf[n2j - n]) + ln_pow, n as f64 * arg)
        })
        .collect();
    let max = amps.iter().map(|a| a.0).fold(f64::NEG_INFINITY, f64::max);
    let v = nalgebra::DVector::from_iterator(
        n2j + 1,
        amps.iter().map(|&(l, ph)| Complex64::from_polar((l - max).exp(), ph)),
    );
    RepState::new(irrep.label(), v).expect("coherent state has positive norm")
}

/// Parameters of a `J2`-`J3` intelligent state `|lambda, eta>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2IntelligentSpec {
    irrep: Su2Irrep,
    m0: HalfInt,
    eta: f64,
}

impl Su2IntelligentSpec {
    /// `m0` must be a weight of the irrep and `0 < |eta| <= 1`.
    pub fn new(irrep: Su2Irrep, m0: HalfInt, eta: f64) -> Result<Self> {
        irrep.index(m0).map_err(|_| invalid("m0", format!("m0 = {m0} must satisfy |m0| <= j = {} with j - m0 integral", irrep.j)))?;
        if !eta.is_finite() || eta == 0.0 {
            return Err(Error::Domain(
                "eta = 0 degenerates to a J3 eigenstate; intelligent states need eta != 0".into(),
            ));
        }
        if eta.abs() > 1.0 {
            return Err(invalid("eta", format!("|eta| = {} exceeds 1", eta.abs())));
        }
        Ok(Su2IntelligentSpec { irrep, m0, eta })
    }

    pub fn irrep(&self) -> Su2Irrep {
        self.irrep
    }

    pub fn m0(&self) -> HalfInt {
        self.m0
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    fn root(&self) -> f64 {
        ((1.0 - self.eta) * (1.0 + self.eta)).max(0.0).sqrt()
    }

    /// `(1 - sqrt(1 - eta^2)) / eta`, written to avoid cancellation.
    pub fn tau(&self) -> f64 {
        self.eta / (1.0 + self.root())
    }

    /// Eigenvalue `i m0 sqrt(1 - eta^2)` of `eta J2 + i J3`.
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(0.0, self.m0.value() * self.root())
    }

    pub fn x(&self) -> f64 {
        1.0 / self.root()
    }

    pub fn t(&self) -> f64 {
        4.0 * (1.0 - self.eta * self.eta) / (self.eta * self.eta)
    }

    pub fn s_plus(&self) -> f64 {
        let x = self.x();
        1.0 + (x + 1.0).powi(2) * self.t() / 4.0
    }

    pub fn s_minus(&self) -> f64 {
        let x = self.x();
        1.0 + (x - 1.0).powi(2) * self.t() / 4.0
    }

    fn a_b(&self) -> (usize, usize) {
        let j = self.irrep.j;
        (
            (j + self.m0).doubled() as usize / 2,
            (j - self.m0).doubled() as usize / 2,
        )
    }

    /// Sign/log Taylor coefficients of `(1 + z/tau)^(j+m0) (1 + tau z)^(j-m0)`.
    pub(crate) fn generating_coefficients(&self) -> Vec<Scaled> {
        let (a, b) = self.a_b();
        let tau = Scaled::from_f64(self.tau());
        let ra = ln_binom_row(a as f64, a);
        let rb = ln_binom_row(b as f64, b);
        (0..=a + b)
            .map(|n| {
                let lo = n.saturating_sub(b);
                let hi = n.min(a);
                sum_scaled((lo..=hi).map(|p| {
                    let e = n as i64 - 2 * p as i64;
                    let tp = if e >= 0 {
                        tau.powi(e as usize)
                    } else {
                        Scaled::ONE.div(tau.powi((-e) as usize)).expect("tau != 0")
                    };
                    ra[p].mul(rb[n - p]).mul(tp)
                }))
            })
            .collect()
    }
}

/// Intelligent state by binomial convolution of the two generating factors;
/// stable for every `0 < |eta| <= 1` and `j` up to a few thousand.
pub fn su2_intelligent(spec: &Su2IntelligentSpec) -> Result<RepState> {
    let n2j = spec.irrep.dim() - 1;
    let lf = ln_factorials(n2j);
    let logs: Vec<Scaled> = spec
        .generating_coefficients()
        .into_iter()
        .enumerate()
        .map(|(n, c)| {
            let mut s = c;
            if s.sign != 0 {
                s.ln_abs -= 0.5 * (lf[n2j] - lf[n] - lf[n2j - n]);
            }
            s
        })
        .collect();
    real_state_from_logs(spec.irrep.label(), &logs)
}

/// Intelligent state from the Jacobi-polynomial expansion in `(x, t)`;
/// singular at `|eta| = 1`, kept as an independent cross-check.
pub fn su2_intelligent_jacobi(spec: &Su2IntelligentSpec) -> Result<RepState> {
    if spec.eta.abs() >= 1.0 {
        return Err(Error::Domain("the (x, t) parametrization is singular at |eta| = 1".into()));
    }
    let n2j = spec.irrep.dim() - 1;
    let lf = ln_factorials(n2j);
    let (a, b) = spec.a_b();
    let x = spec.x();
    let half_ln_t = 0.5 * spec.t().ln();
    let sgn = spec.eta.signum();
    let logs: Vec<Scaled> = (0..=n2j)
        .map(|n| {
            let p = jacobi_scaled(n, a as f64 - n as f64, b as f64 - n as f64, x);
            let mut s = p.mul(Scaled::from_f64(sgn).powi(n));
            if s.sign != 0 {
                s.ln_abs += 0.5 * (lf[n] + lf[n2j - n] - lf[n2j]) + n as f64 * half_ln_t;
            }
            s
        })
        .collect();
    real_state_from_logs(spec.irrep.label(), &logs)
}

fn su2_tri_spec(irrep: &Su2Irrep, eta: f64) -> TriSpec {
    let label = irrep.label();
    let up = label.raising();
    let dim = irrep.dim();
    let cond_bits = 2.0 * dim as f64 * eta.abs().min(0.999).atanh() / std::f64::consts::LN_2;
    TriSpec {
        diag: label.weights(),
        coupling: up.iter().map(|u| (u * u).round()).collect(),
        eta,
        bits: 96 + cond_bits.ceil() as usize,
    }
}

/// Eigenpair of `J3 - i eta J2` whose eigenvalue `mu` (so `lambda = i mu`)
/// lies within `1e-6` of `m0 sqrt(1 - eta^2)`.
pub fn su2_eigen_pair(irrep: &Su2Irrep, m0: HalfInt, eta: f64) -> Result<EigenPair> {
    let spec = Su2IntelligentSpec::new(*irrep, m0, eta)?;
    eigen::eigenpair_near(&su2_tri_spec(irrep, eta), spec.lambda().im, 1e-6)
}

/// Intelligent state from a brute-force multiprecision eigensolve of `eta J2 + i J3`.
pub fn su2_intelligent_eigen_oracle(irrep: &Su2Irrep, m0: HalfInt, eta: f64) -> Result<RepState> {
    let pair = su2_eigen_pair(irrep, m0, eta)?;
    RepState::from_real(irrep.label(), &pair.vector)
}

/// Real eigenvalues of `eta J2 + i J3` (returned as `lambda = i mu`), resolved
/// on a scan of spacing `step`.
pub fn su2_spectrum(irrep: &Su2Irrep, eta: f64, step: f64) -> Result<Vec<Complex64>> {
    if !(step > 0.0) {
        return Err(invalid("step", "scan step must be positive"));
    }
    let mu = eigen::real_spectrum(&su2_tri_spec(irrep, eta), step)?;
    Ok(mu.into_iter().map(|m| Complex64::new(0.0, m)).collect())
}

/// Normalization factor from its series and, when available, in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormFactor {
    pub direct: f64,
    /// `None` where the closed form's parametrization is singular.
    pub closed: Option<f64>,
}

/// `ln N` from the finite series over Jacobi polynomials, or from the
/// convolution coefficients at `|eta| = 1`.
pub fn su2_ln_norm_direct(spec: &Su2IntelligentSpec) -> f64 {
    let n2j = spec.irrep.dim() - 1;
    let lf = ln_factorials(n2j);
    let (a, b) = spec.a_b();
    let terms: Vec<Scaled> = if spec.eta.abs() < 1.0 {
        let x = spec.x();
        let ln_t = spec.t().ln();
        (0..=n2j)
            .map(|n| {
                let p = jacobi_scaled(n, a as f64 - n as f64, b as f64 - n as f64, x);
                if p.sign == 0 {
                    return Scaled::ZERO;
                }
                Scaled {
                    sign: 1,
                    ln_abs: lf[n] + lf[n2j - n] - lf[n2j] + 2.0 * p.ln_abs + n as f64 * ln_t,
                }
            })
            .collect()
    } else {
        spec.generating_coefficients()
            .into_iter()
            .enumerate()
            .map(|(n, c)| {
                if c.sign == 0 {
                    return Scaled::ZERO;
                }
                Scaled {
                    sign: 1,
                    ln_abs: 2.0 * c.ln_abs - (lf[n2j] - lf[n] - lf[n2j - n]),
                }
            })
            .collect()
    };
    sum_scaled(terms).ln_abs
}

/// `ln N` from the closed Jacobi expression; needs `|eta| < 1`.
pub fn su2_ln_norm_closed(spec: &Su2IntelligentSpec) -> Result<f64> {
    if spec.eta.abs() >= 1.0 {
        return Err(Error::Domain("closed normalization needs |eta| < 1".into()));
    }
    let n2j = spec.irrep.dim() - 1;
    let lf = ln_factorials(n2j);
    let (a, b) = spec.a_b();
    let n0 = a.min(b);
    let (sp, sm, t) = (spec.s_plus(), spec.s_minus(), spec.t());
    let p = jacobi_scaled(n0, -(n2j as f64) - 1.0, 0.0, 1.0 - 2.0 * t / (sp * sm));
    let sign = p.sign * if n0 % 2 == 1 { -1 } else { 1 };
    if sign <= 0 {
        return Err(Error::Singularity(format!(
            "closed normalization is not positive (sign {sign}) at j = {}, m0 = {}, eta = {}",
            spec.irrep.j, spec.m0, spec.eta
        )));
    }
    Ok(a as f64 * sp.ln() + b as f64 * sm.ln() + lf[a] + lf[b] - lf[n2j] + p.ln_abs)
}

pub fn su2_norm_factor(irrep: &Su2Irrep, m0: HalfInt, eta: f64) -> Result<NormFactor> {
    let spec = Su2IntelligentSpec::new(*irrep, m0, eta)?;
    let direct = su2_ln_norm_direct(&spec).exp();
    let closed = if eta.abs() < 1.0 {
        Some(su2_ln_norm_closed(&spec)?.exp())
    } else {
        None
    };
    Ok(NormFactor { direct, closed })
}

/// `((j+|m0|)/j) (1-eta^2) P_{n-1}^(1,-2j)(1-2eta^2) / P_n^(0,-2j-1)(1-2eta^2)`, `n = j - |m0|`.
pub(crate) fn su2_ratio_term(spec: &Su2IntelligentSpec) -> Result<f64> {
    let j = spec.irrep.j.value();
    let n = (spec.irrep.j - spec.m0.abs()).doubled() as usize / 2;
    if n == 0 {
        return Ok(0.0);
    }
    let e2 = spec.eta * spec.eta;
    let y = 1.0 - 2.0 * e2;
    let num = jacobi_scaled(n - 1, 1.0, -2.0 * j, y);
    let den = jacobi_scaled(n, 0.0, -2.0 * j - 1.0, y);
    let ratio = num.div(den).ok_or_else(|| {
        Error::Singularity(format!(
            "P_{n}^(0,{})(1 - 2 eta^2) vanishes at eta = {}",
            -2.0 * j - 1.0,
            spec.eta
        ))
    })?;
    Ok((j + spec.m0.abs().value()) / j * (1.0 - e2) * ratio.to_f64())
}

/// Exact `Var(J3)` of the intelligent state from the Jacobi-ratio formula.
pub fn su2_variance_j3_closed(irrep: &Su2Irrep, m0: HalfInt, eta: f64) -> Result<f64> {
    let spec = Su2IntelligentSpec::new(*irrep, m0, eta)?;
    let r = su2_ratio_term(&spec)?;
    Ok(eta * eta * irrep.j.value() / 2.0 * (1.0 + r))
}

/// Means and symmetrized covariances of `(J1, J2, J3)`.
pub fn su2_state_moments(state: &RepState) -> Result<MomentSummary> {
    let label = state.label();
    if !matches!(label, IrrepLabel::Su2 { .. }) {
        return Err(invalid("state", "expected an SU(2) state"));
    }
    Ok(ladder_moments(state.amplitudes(), &label.weights(), &label.raising()))
}

/// `||(eta J2 + i J3 - lambda) psi||`.
pub fn su2_eigen_residual(state: &RepState, eta: f64, lambda: Complex64) -> Result<f64> {
    let IrrepLabel::Su2 { j } = state.label() else {
        return Err(invalid("state", "expected an SU(2) state"));
    };
    let g = su2_generators(&Su2Irrep::new(j)?);
    let i = Complex64::new(0.0, 1.0);
    let op = &g.j2 * Complex64::new(eta, 0.0) + &g.j3 * i;
    let v = state.amplitudes();
    Ok((op * v - v * lambda).norm())
}
