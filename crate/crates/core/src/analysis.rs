//! G-factors and their limits, intelligent-state sensitivities in both
//! operating regimes, quasi-intelligent states and log-log scaling exponents.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::half::HalfInt;
use crate::interferometer::{MixerParam, Regime, SensitivityReport, Uncertainty};
use crate::state::{Group, IrrepLabel, RepState};
use crate::su11::{su11_ratio_term, Su11IntelligentSpec};
use crate::su2::{su2_ratio_term, su2_state_moments, Su2IntelligentSpec, Su2Irrep};
use crate::table::{Cell, Table};

/// Quantum numbers of an intelligent state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntelligentParams {
    Su2 { j: HalfInt, m0: HalfInt },
    Su11 { k: HalfInt, l: usize },
}

impl IntelligentParams {
    pub fn group(&self) -> Group {
        match self {
            IntelligentParams::Su2 { .. } => Group::Su2,
            IntelligentParams::Su11 { .. } => Group::Su11,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GFactorResult {
    pub value: f64,
    pub params: IntelligentParams,
    pub eta: f64,
    /// Set when `|eta| >= 1` for SU(2), where the value is the boundary value 1.
    pub boundary: bool,
}

/// `G(j, m0, eta) = [1 + ((j+|m0|)/j)(1-eta^2) P_{n-1}^(1,-2j)/P_n^(0,-2j-1)]^(-1)`
/// at `1 - 2 eta^2`, `n = j - |m0|`.
pub fn g_factor_su2(j: HalfInt, m0: HalfInt, eta: f64) -> Result<GFactorResult> {
    let params = IntelligentParams::Su2 { j, m0 };
    let irrep = Su2Irrep::new(j)?;
    if eta.is_finite() && eta.abs() >= 1.0 {
        irrep.index(m0)?;
        return Ok(GFactorResult {
            value: 1.0,
            params,
            eta,
            boundary: true,
        });
    }
    let spec = Su2IntelligentSpec::new(irrep, m0, eta)?;
    Ok(GFactorResult {
        value: 1.0 / (1.0 + su2_ratio_term(&spec)?),
        params,
        eta,
        boundary: false,
    })
}

/// `G(k, l, eta) = [1 + ((2k+l)/k)(eta^2+1) P_{l-1}^(1,2k)/P_l^(0,2k-1)]^(-1)` at `2 eta^2 + 1`.
pub fn g_factor_su11(k: HalfInt, l: usize, eta: f64) -> Result<GFactorResult> {
    let spec = Su11IntelligentSpec::new(k, l, eta)?;
    Ok(GFactorResult {
        value: 1.0 / (1.0 + su11_ratio_term(&spec)?),
        params: IntelligentParams::Su11 { k, l },
        eta,
        boundary: false,
    })
}

pub fn g_factor(params: IntelligentParams, eta: f64) -> Result<GFactorResult> {
    match params {
        IntelligentParams::Su2 { j, m0 } => g_factor_su2(j, m0, eta),
        IntelligentParams::Su11 { k, l } => g_factor_su11(k, l, eta),
    }
}

/// Limiting values of `G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GLimits {
    pub eta_to_zero: f64,
    /// SU(2): `G ~ [1 + c eps]^(-1)` with `eps = 1 - eta^2` near `|eta| = 1`.
    pub near_one_coefficient: Option<f64>,
    /// SU(1,1): `eta -> infinity`.
    pub eta_to_infinity: Option<f64>,
    params: IntelligentParams,
}

impl GLimits {
    /// First-order form `[1 + c eps]^(-1)` near `|eta| = 1`.
    pub fn near_one(&self, eps: f64) -> Option<f64> {
        self.near_one_coefficient.map(|c| 1.0 / (1.0 + c * eps))
    }

    /// SU(1,1): `eta -> 0` limit of the intelligent phase uncertainty,
    /// `1/(2 sinh^2 beta [k + l(2k+l)])`.
    pub fn delta_phi_sq_eta_to_zero(&self, mixer: MixerParam) -> Option<f64> {
        match self.params {
            IntelligentParams::Su11 { k, l } => {
                let (k, l) = (k.value(), l as f64);
                Some(1.0 / (2.0 * mixer.sinh_sq() * (k + l * (2.0 * k + l))))
            }
            IntelligentParams::Su2 { .. } => None,
        }
    }
}

pub fn g_limits(params: IntelligentParams) -> Result<GLimits> {
    match params {
        IntelligentParams::Su2 { j, m0 } => {
            Su2Irrep::new(j)?.index(m0)?;
            let (j, m) = (j.value(), m0.value());
            let d = j * j - m * m;
            Ok(GLimits {
                eta_to_zero: 1.0 / (1.0 + d / j),
                near_one_coefficient: Some(d / (2.0 * j * j)),
                eta_to_infinity: None,
                params,
            })
        }
        IntelligentParams::Su11 { k, l } => {
            if k.doubled() < 1 {
                return Err(invalid("k", "k must be at least 1/2"));
            }
            let (kv, lv) = (k.value(), l as f64);
            Ok(GLimits {
                eta_to_zero: 1.0 / (1.0 + lv * (2.0 * kv + lv) / kv),
                near_one_coefficient: None,
                eta_to_infinity: Some(1.0 / (1.0 + lv / kv)),
                params,
            })
        }
    }
}

/// Intelligent-state sensitivity: `G/(2j)` with `N = 2j` for SU(2);
/// `G/(2k sinh^2 beta)` with `N = 2 cosh beta (k+l) sqrt(eta^2+1) - 1` for SU(1,1).
pub fn intelligent_sensitivity(params: IntelligentParams, eta: f64, mixer: Option<MixerParam>) -> Result<SensitivityReport> {
    let g = g_factor(params, eta)?;
    match params {
        IntelligentParams::Su2 { j, .. } => {
            if mixer.is_some() {
                return Err(invalid("beta", "the SU(2) interferometer has no mixer"));
            }
            let n = 2.0 * j.value();
            Ok(SensitivityReport {
                delta_phi_sq: Uncertainty::Finite(g.value / n),
                n_bar: n,
                g_factor: Some(g.value),
                regime: Regime::SinglePoint,
                formula: "SU(2) intelligent input: G(j,m0,eta)/(2j), N = 2j",
                phi_to_zero: None,
                curves: None,
            })
        }
        IntelligentParams::Su11 { k, l } => {
            let mixer = mixer.ok_or_else(|| invalid("beta", "the SU(1,1) interferometer needs a mixer"))?;
            let sh2 = mixer.sinh_sq();
            let dphi = if sh2 == 0.0 {
                Uncertainty::Infinite
            } else {
                Uncertainty::Finite(g.value / (2.0 * k.value() * sh2))
            };
            Ok(SensitivityReport {
                delta_phi_sq: dphi,
                n_bar: 2.0 * mixer.beta().cosh() * (k.value() + l as f64) * eta.hypot(1.0) - 1.0,
                g_factor: Some(g.value),
                regime: Regime::SinglePoint,
                formula: "SU(1,1) intelligent input: G(k,l,eta)/(2k sinh^2 beta), N = 2 cosh beta (k+l) sqrt(eta^2+1) - 1",
                phi_to_zero: None,
                curves: None,
            })
        }
    }
}

/// Fixed-input SU(1,1) curve: the mixer gain is eliminated in favour of `N`.
pub fn su11_fixed_input_curve(k: HalfInt, l: usize, eta: f64, n_bar: f64) -> Result<Uncertainty> {
    let g = g_factor_su11(k, l, eta)?.value;
    let (kv, s) = (k.value(), (k.value() + l as f64).powi(2) * (eta * eta + 1.0));
    let den = (n_bar + 1.0).powi(2) - 4.0 * s;
    if den <= 0.0 {
        return Ok(Uncertainty::Infinite);
    }
    Ok(Uncertainty::Finite(2.0 * s * g / (kv * den)))
}

/// Small-`eta` fixed-mixer approximation `2 coth^2 beta / ((N+1)^2 - 4(k^2-k) cosh^2 beta)`.
pub fn su11_fixed_beta_small_eta(k: HalfInt, mixer: MixerParam, n_bar: f64) -> Uncertainty {
    let b = mixer.beta();
    let kv = k.value();
    let coth2 = (b.cosh() / b.sinh()).powi(2);
    let den = (n_bar + 1.0).powi(2) - 4.0 * (kv * kv - kv) * b.cosh().powi(2);
    if !(den > 0.0) || !coth2.is_finite() {
        return Uncertainty::Infinite;
    }
    Uncertainty::Finite(2.0 * coth2 / den)
}

/// Both SU(1,1) regimes as one table with columns `regime,k,l,eta,beta,n_bar,delta_phi_sq`.
/// The fixed-input rows sweep `n_bars` for every `l`; the fixed-interferometer
/// rows sweep `l` at the given mixer.
pub fn regime_curves_su11(k: HalfInt, ls: &[usize], eta: f64, mixer: MixerParam, n_bars: &[f64]) -> Result<Table> {
    let mut t = Table::new(["regime", "k", "l", "eta", "beta", "n_bar", "delta_phi_sq"]);
    let kc = Cell::Text(k.to_string());
    for &l in ls {
        for &nb in n_bars {
            let d = su11_fixed_input_curve(k, l, eta, nb)?;
            let s = (k.value() + l as f64) * eta.hypot(1.0);
            let beta = ((nb + 1.0) / (2.0 * s)).acosh();
            t.push(vec![
                Regime::FixedInput.to_string().into(),
                kc.clone(),
                l.into(),
                eta.into(),
                beta.into(),
                nb.into(),
                d.value().into(),
            ]);
        }
    }
    for &l in ls {
        let r = intelligent_sensitivity(IntelligentParams::Su11 { k, l }, eta, Some(mixer))?;
        t.push(vec![
            Regime::FixedInterferometer.to_string().into(),
            kc.clone(),
            l.into(),
            eta.into(),
            mixer.beta().into(),
            r.n_bar.into(),
            r.delta_phi_sq.value().into(),
        ]);
    }
    Ok(t)
}

/// Statistics of `(|j,0> + |j,1>)/sqrt(2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiIntelligentReport {
    pub var_j3: f64,
    pub var_j2: f64,
    pub mean_j1: f64,
    /// `Var(J2) Var(J3) / (<J1>^2 / 4)`, at least 1.
    pub uncertainty_excess: f64,
    pub delta_phi_sq: f64,
}

pub fn quasi_intelligent_state(j: HalfInt) -> Result<RepState> {
    if !j.is_integer() || j.doubled() < 2 {
        return Err(invalid("j", format!("j = {j} must be a positive integer")));
    }
    let irrep = Su2Irrep::new(j)?;
    let mut amps = vec![0.0; irrep.dim()];
    amps[irrep.index(HalfInt::ZERO)?] = 1.0;
    amps[irrep.index(HalfInt::ONE)?] = 1.0;
    RepState::from_real(IrrepLabel::Su2 { j }, &amps)
}

pub fn quasi_intelligent_stats(j: HalfInt) -> Result<QuasiIntelligentReport> {
    let m = su2_state_moments(&quasi_intelligent_state(j)?)?;
    let (v3, v2, j1) = (m.variance(2), m.variance(1), m.mean[0]);
    Ok(QuasiIntelligentReport {
        var_j3: v3,
        var_j2: v2,
        mean_j1: j1,
        uncertainty_excess: v2 * v3 / (j1 * j1 / 4.0),
        delta_phi_sq: v3 / (j1 * j1),
    })
}

/// Negated log-log slope over the top decade of `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentEstimate {
    pub e: f64,
    pub window: (f64, f64),
    /// RMS residual of the linear fit in `ln delta_phi`.
    pub residual: f64,
    pub points_used: usize,
}

/// Least-squares `E` from `(N, delta_phi)` pairs; at least five points with
/// strictly increasing positive `N`, and at least two inside the top decade.
pub fn exponent_estimate(points: &[(f64, f64)]) -> Result<ExponentEstimate> {
    if points.len() < 5 {
        return Err(invalid("points", format!("need at least 5 points, got {}", points.len())));
    }
    if points.windows(2).any(|w| !(w[1].0 > w[0].0)) || points[0].0 <= 0.0 {
        return Err(invalid("points", "N must be positive and strictly increasing"));
    }
    if points.iter().any(|p| !(p.1 > 0.0 && p.1.is_finite())) {
        return Err(invalid("points", "delta_phi must be positive and finite"));
    }
    let n_max = points.last().expect("non-empty").0;
    let top: Vec<&(f64, f64)> = points.iter().filter(|p| p.0 >= n_max / 10.0 * (1.0 - 1e-12)).collect();
    let win: Vec<(f64, f64)> = top.iter().map(|p| (p.0.ln(), p.1.ln())).collect();
    if win.len() < 2 {
        return Err(Error::Domain("fewer than two abscissae inside the top decade".into()));
    }
    let n = win.len() as f64;
    let mx = win.iter().map(|p| p.0).sum::<f64>() / n;
    let my = win.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = win.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::Domain("degenerate abscissae".into()));
    }
    let sxy: f64 = win.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let residual = (win.iter().map(|p| (p.1 - icpt - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(ExponentEstimate {
        e: -slope,
        window: (top[0].0, n_max),
        residual,
        points_used: win.len(),
    })
}

/// `(N, delta_phi)` for SU(2) intelligent states with `m0 = 0`, `N = 2j` over
/// even `N` from 2 to `n_max`.
pub fn su2_scaling_points(eta: f64, n_max: usize) -> Result<Vec<(f64, f64)>> {
    (1..=n_max / 2)
        .into_par_iter()
        .map(|j| {
            let r = intelligent_sensitivity(
                IntelligentParams::Su2 {
                    j: HalfInt::from_int(j as i64),
                    m0: HalfInt::ZERO,
                },
                eta,
                None,
            )?;
            Ok((r.n_bar, r.delta_phi_sq.value().sqrt()))
        })
        .collect()
}

/// `(N, delta_phi)` for SU(1,1) intelligent states at fixed mixer, `l = 1..=l_max`.
pub fn su11_scaling_points(k: HalfInt, eta: f64, mixer: MixerParam, l_max: usize) -> Result<Vec<(f64, f64)>> {
    (1..=l_max)
        .into_par_iter()
        .map(|l| {
            let r = intelligent_sensitivity(IntelligentParams::Su11 { k, l }, eta, Some(mixer))?;
            Ok((r.n_bar, r.delta_phi_sq.value().sqrt()))
        })
        .collect()
}
