//! Interferometer transformation chains, output observables, moment
//! propagation for the phase uncertainty, and closed-form sensitivities for
//! conventional inputs.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::half::HalfInt;
use crate::state::{Group, MomentSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    /// Rotation about the first axis (beam splitter).
    Rotation1,
    /// Rotation about the third axis (phase shifter).
    Rotation3,
    /// Lorentz boost along the second axis (four-wave mixer).
    Boost2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementMatrix {
    pub kind: ElementKind,
    pub parameter: f64,
    pub matrix: Matrix3<f64>,
}

pub fn element_matrix(kind: ElementKind, parameter: f64) -> ElementMatrix {
    let (s, c) = parameter.sin_cos();
    let (sh, ch) = (parameter.sinh(), parameter.cosh());
    #[rustfmt::skip]
    let matrix = match kind {
        ElementKind::Rotation1 => Matrix3::new(
            1.0, 0.0, 0.0,
            0.0, c, -s,
            0.0, s, c,
        ),
        ElementKind::Rotation3 => Matrix3::new(
            c, -s, 0.0,
            s, c, 0.0,
            0.0, 0.0, 1.0,
        ),
        ElementKind::Boost2 => Matrix3::new(
            1.0, 0.0, 0.0,
            0.0, ch, sh,
            0.0, sh, ch,
        ),
    };
    ElementMatrix { kind, parameter, matrix }
}

/// `d R3(phi) / d phi`.
fn rotation3_derivative(phi: f64) -> Matrix3<f64> {
    let (s, c) = phi.sin_cos();
    Matrix3::new(-s, -c, 0.0, c, -s, 0.0, 0.0, 0.0, 0.0)
}

/// Output generator `c . (X1, X2, X3)` and its phase derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputObservable {
    pub group: Group,
    pub phi: f64,
    pub beta: Option<f64>,
    pub c: Vector3<f64>,
    pub dc: Vector3<f64>,
}

fn check_beta(group: Group, beta: Option<f64>) -> Result<f64> {
    match (group, beta) {
        (Group::Su2, None) => Ok(0.0),
        (Group::Su2, Some(_)) => Err(invalid("beta", "the SU(2) interferometer has no mixer parameter")),
        (Group::Su11, Some(b)) if b.is_finite() => Ok(b),
        (Group::Su11, _) => Err(invalid("beta", "the SU(1,1) interferometer needs a finite beta")),
    }
}

/// Closed-form output observable.
pub fn output_observable(group: Group, phi: f64, beta: Option<f64>) -> Result<OutputObservable> {
    let b = check_beta(group, beta)?;
    let (s, c) = phi.sin_cos();
    let (c_vec, dc) = match group {
        Group::Su2 => (Vector3::new(-s, 0.0, c), Vector3::new(-c, 0.0, -s)),
        Group::Su11 => {
            let (sh, ch) = (b.sinh(), b.cosh());
            (
                Vector3::new(sh * s, sh * ch * (c - 1.0), ch * ch - sh * sh * c),
                Vector3::new(sh * c, -sh * ch * s, sh * sh * s),
            )
        }
    };
    Ok(OutputObservable {
        group,
        phi,
        beta,
        c: c_vec,
        dc,
    })
}

/// Output observable from the product of element matrices: splitter, phase,
/// splitter for SU(2); mixer, phase, mixer for SU(1,1).
pub fn output_observable_from_elements(group: Group, phi: f64, beta: Option<f64>) -> Result<OutputObservable> {
    let b = check_beta(group, beta)?;
    let (outer, inner) = match group {
        Group::Su2 => (
            element_matrix(ElementKind::Rotation1, -FRAC_PI_2).matrix,
            element_matrix(ElementKind::Rotation1, FRAC_PI_2).matrix,
        ),
        Group::Su11 => (
            element_matrix(ElementKind::Boost2, b).matrix,
            element_matrix(ElementKind::Boost2, -b).matrix,
        ),
    };
    let chain = outer * element_matrix(ElementKind::Rotation3, phi).matrix * inner;
    let dchain = outer * rotation3_derivative(phi) * inner;
    Ok(OutputObservable {
        group,
        phi,
        beta,
        c: chain.row(2).transpose(),
        dc: dchain.row(2).transpose(),
    })
}

/// A phase uncertainty that may be unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Uncertainty {
    Finite(f64),
    /// The signal slope vanishes: the phase measurement is absolutely uncertain.
    Infinite,
}

impl Uncertainty {
    pub fn value(&self) -> f64 {
        match self {
            Uncertainty::Finite(x) => *x,
            Uncertainty::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Uncertainty::Infinite)
    }

    fn from_ratio(num: f64, den: f64) -> Self {
        if den == 0.0 || !den.is_finite() {
            Uncertainty::Infinite
        } else {
            Uncertainty::Finite(num / den)
        }
    }
}

impl fmt::Display for Uncertainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Uncertainty::Finite(x) => write!(f, "{x}"),
            Uncertainty::Infinite => f.write_str("inf"),
        }
    }
}

/// `(c^T Cov c) / (dc . mean)^2`; infinite when the slope vanishes relative
/// to `|dc| |mean|`.
pub fn phase_uncertainty(moments: &MomentSummary, obs: &OutputObservable) -> Uncertainty {
    let num = (obs.c.transpose() * moments.covariance * obs.c)[(0, 0)];
    let slope = obs.dc.dot(&moments.mean);
    let scale = obs.dc.norm() * moments.mean.norm();
    if slope.abs() <= 1e-13 * scale || scale == 0.0 {
        return Uncertainty::Infinite;
    }
    Uncertainty::Finite(num / (slope * slope))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    FixedInput,
    FixedInterferometer,
    SinglePoint,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::FixedInput => "fixed-input",
            Regime::FixedInterferometer => "fixed-interferometer",
            Regime::SinglePoint => "single-point",
        })
    }
}

/// The two operating regimes of a mixer-based setup, as functions of `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimeCurves {
    /// SU(2) with one squeezed port: `a = |alpha|^2` fixes the input, `beta` the mixer.
    Squeezed { alpha_sq: f64, beta: f64 },
    /// SU(1,1) with coherent input of index `k` (evaluated at `zeta = 0`).
    Su11Coherent { k: f64, beta: f64 },
}

impl RegimeCurves {
    /// Sensitivity when the input is held and the mixer gain varies.
    pub fn fixed_input(&self, n_bar: f64) -> Uncertainty {
        match *self {
            RegimeCurves::Squeezed { alpha_sq: a, .. } => {
                Uncertainty::from_ratio((a + 1.0).powi(2), a * ((n_bar + 1.0).powi(2) - (a + 1.0).powi(2)))
            }
            RegimeCurves::Su11Coherent { k, .. } => {
                Uncertainty::from_ratio(2.0 * k, (n_bar + 1.0).powi(2) - 4.0 * k * k)
            }
        }
    }

    /// Sensitivity when the mixer is held and the input intensity varies.
    pub fn fixed_interferometer(&self, n_bar: f64) -> Uncertainty {
        match *self {
            RegimeCurves::Squeezed { beta, .. } => {
                let (ch, sh) = (beta.cosh(), beta.sinh());
                Uncertainty::from_ratio(ch, sh * sh * (n_bar + 1.0 - ch))
            }
            RegimeCurves::Su11Coherent { beta, .. } => {
                let (ch, sh) = (beta.cosh(), beta.sinh());
                Uncertainty::from_ratio(ch, sh * sh * (n_bar + 1.0))
            }
        }
    }
}

/// Sensitivity with photon bookkeeping and the formula used.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub delta_phi_sq: Uncertainty,
    /// Mean photon number through the phase shifters.
    pub n_bar: f64,
    pub g_factor: Option<f64>,
    pub regime: Regime,
    pub formula: &'static str,
    /// Separate `phi -> 0` limit where the formula itself excludes `phi = 0`.
    pub phi_to_zero: Option<Uncertainty>,
    pub curves: Option<RegimeCurves>,
}

impl SensitivityReport {
    fn point(delta_phi_sq: Uncertainty, n_bar: f64, formula: &'static str) -> Self {
        SensitivityReport {
            delta_phi_sq,
            n_bar,
            g_factor: None,
            regime: Regime::SinglePoint,
            formula,
            phi_to_zero: None,
            curves: None,
        }
    }
}

/// Phase setting `(phi1, phi2)` of the two arms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShift {
    pub phi1: f64,
    pub phi2: f64,
}

impl PhaseShift {
    /// `phi2 - phi1` for SU(2), `-(phi1 + phi2)` for SU(1,1).
    pub fn effective(&self, group: Group) -> f64 {
        match group {
            Group::Su2 => self.phi2 - self.phi1,
            Group::Su11 => -(self.phi1 + self.phi2),
        }
    }
}

/// Four-wave mixer gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixerParam {
    beta: f64,
}

impl MixerParam {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(invalid("beta", format!("beta = {beta} must be finite and non-negative")));
        }
        Ok(MixerParam { beta })
    }

    /// Mixer with `sinh^2(beta) = s2`.
    pub fn from_sinh_sq(s2: f64) -> Result<Self> {
        if !(s2.is_finite() && s2 >= 0.0) {
            return Err(invalid("sinh2beta", format!("sinh^2(beta) = {s2} must be non-negative")));
        }
        MixerParam::new(s2.sqrt().asinh())
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `r = sinh^2(beta/2)`.
    pub fn reflectivity(&self) -> f64 {
        (0.5 * self.beta).sinh().powi(2)
    }

    pub fn sinh_sq(&self) -> f64 {
        self.beta.sinh().powi(2)
    }
}

/// Coherent amplitudes `alpha`, `alpha'` of the two input ports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlauberAmp {
    pub alpha: Complex64,
    pub alpha_prime: Complex64,
}

impl GlauberAmp {
    pub fn new(alpha: Complex64, alpha_prime: Complex64) -> Self {
        GlauberAmp { alpha, alpha_prime }
    }

    pub fn from_polar(r: f64, theta: f64, r_prime: f64, theta_prime: f64) -> Result<Self> {
        if !(r >= 0.0 && r_prime >= 0.0) {
            return Err(invalid("alpha", "magnitudes must be non-negative"));
        }
        Ok(GlauberAmp {
            alpha: Complex64::from_polar(r, theta),
            alpha_prime: Complex64::from_polar(r_prime, theta_prime),
        })
    }

    /// `theta + theta'`.
    pub fn phase_sum(&self) -> f64 {
        self.alpha.arg() + self.alpha_prime.arg()
    }
}

/// Angular factors below this magnitude are treated as exact zeros.
const ANGLE_ZERO: f64 = 1e-12;

fn snap(x: f64) -> f64 {
    if x.abs() < ANGLE_ZERO {
        0.0
    } else {
        x
    }
}

fn reject_zero_phase(phi: f64) -> Result<()> {
    let r = phi.rem_euclid(std::f64::consts::PI);
    if r.min(std::f64::consts::PI - r) < 1e-12 {
        return Err(Error::Domain(format!("phi = {phi} is a multiple of pi; the formula excludes it")));
    }
    Ok(())
}

/// Number-state input `|j, m>`: `(j^2 - m^2 + j) / (2 m^2)`, independent of `phi`.
pub fn su2_fock_sensitivity(j: HalfInt, m: HalfInt, phi: f64) -> Result<SensitivityReport> {
    if j.doubled() < 1 || m.abs() > j || (j - m).int_diff(HalfInt::ZERO).is_none() {
        return Err(invalid("m", format!("m = {m} is not a weight of j = {j}")));
    }
    reject_zero_phase(phi)?;
    let (jv, mv) = (j.value(), m.value());
    Ok(SensitivityReport::point(
        Uncertainty::from_ratio(jv * jv - mv * mv + jv, 2.0 * mv * mv),
        2.0 * jv,
        "SU(2) number-state input |j,m>: (j^2 - m^2 + j)/(2 m^2)",
    ))
}

/// Glauber input in both ports, evaluated at `phi = 0`.
pub fn su2_glauber_sensitivity(amps: &GlauberAmp) -> SensitivityReport {
    let (a2, b2) = (amps.alpha.norm_sqr(), amps.alpha_prime.norm_sqr());
    let c = snap(amps.phase_sum().cos());
    SensitivityReport::point(
        Uncertainty::from_ratio(a2 + b2, 4.0 * a2 * b2 * c * c),
        a2 + b2,
        "SU(2) Glauber input: (|a|^2 + |a'|^2)/(4 |a|^2 |a'|^2 cos^2(theta + theta'))",
    )
}

/// SU(2) coherent input: `|zeta|^2 / (2 j (Re zeta)^2)`.
pub fn su2_coherent_sensitivity(j: HalfInt, zeta: Complex64) -> Result<SensitivityReport> {
    if j.doubled() < 1 {
        return Err(invalid("j", "j must be at least 1/2"));
    }
    Ok(SensitivityReport::point(
        Uncertainty::from_ratio(zeta.norm_sqr(), 2.0 * j.value() * zeta.re * zeta.re),
        2.0 * j.value(),
        "SU(2) coherent input: |zeta|^2/(2 j (Re zeta)^2)",
    ))
}

/// Glauber light in port 1 and vacuum in port 2, squeezed by the mixer, then
/// an SU(2) interferometer at `phi = 0`. At `theta = 0` this is
/// `1/(|alpha|^2 sinh^2 beta)` with `N = (|alpha|^2 + 1) cosh beta - 1`.
pub fn su2_squeezed_sensitivity(alpha: Complex64, mixer: MixerParam) -> SensitivityReport {
    let a = alpha.norm_sqr();
    let b = mixer.beta();
    let c2 = snap((2.0 * alpha.arg()).cos());
    SensitivityReport {
        delta_phi_sq: Uncertainty::from_ratio(1.0, a * b.sinh().powi(2) * c2 * c2),
        n_bar: (a + 1.0) * b.cosh() - 1.0,
        g_factor: None,
        regime: Regime::SinglePoint,
        formula: "SU(2) with squeezed input: 1/(|alpha|^2 sinh^2 beta), N = (|alpha|^2 + 1) cosh beta - 1",
        phi_to_zero: None,
        curves: Some(RegimeCurves::Squeezed { alpha_sq: a, beta: b }),
    }
}

/// SU(1,1) number-state input `|k, k+n>` at phase `phi`, with the `phi -> 0`
/// optimum reported separately.
pub fn su11_kn_sensitivity(k: HalfInt, n: usize, mixer: MixerParam, phi: f64) -> Result<SensitivityReport> {
    if k.doubled() < 1 {
        return Err(invalid("k", "k must be at least 1/2"));
    }
    reject_zero_phase(phi)?;
    let (kv, nv) = (k.value(), n as f64);
    let b = mixer.beta();
    let (sh2, ch) = (b.sinh().powi(2), b.cosh());
    let (s, c) = phi.sin_cos();
    let fac = (kv + nv * (2.0 * kv + nv)) / (2.0 * (kv + nv).powi(2));
    Ok(SensitivityReport {
        delta_phi_sq: Uncertainty::from_ratio((s * s + ch * ch * (1.0 - c).powi(2)) * fac, s * s * sh2),
        n_bar: 2.0 * ch * (kv + nv) - 1.0,
        g_factor: None,
        regime: Regime::SinglePoint,
        formula: "SU(1,1) number-state input |k,k+n>: [sin^2 phi + cosh^2 beta (1 - cos phi)^2] (k + n(2k+n)) / (2 sin^2 phi sinh^2 beta (k+n)^2)",
        phi_to_zero: Some(Uncertainty::from_ratio(fac, sh2)),
        curves: None,
    })
}

/// SU(1,1) coherent input at `phi = 0`: `|zeta|^2/(2k sinh^2 beta (Re zeta)^2)`,
/// or `1/(2k sinh^2 beta)` at `zeta = 0`.
pub fn su11_coherent_sensitivity(k: HalfInt, zeta: Complex64, mixer: MixerParam) -> Result<SensitivityReport> {
    if k.doubled() < 1 {
        return Err(invalid("k", "k must be at least 1/2"));
    }
    let r2 = zeta.norm_sqr();
    if !(r2 < 1.0) {
        return Err(Error::Domain(format!("|zeta| = {} must be below 1", r2.sqrt())));
    }
    let kv = k.value();
    let b = mixer.beta();
    let sh2 = b.sinh().powi(2);
    let dphi = if r2 == 0.0 {
        Uncertainty::from_ratio(1.0, 2.0 * kv * sh2)
    } else {
        Uncertainty::from_ratio(r2, 2.0 * kv * sh2 * zeta.re * zeta.re)
    };
    let k3 = kv * (1.0 + r2) / (1.0 - r2);
    let k2 = -2.0 * kv * zeta.im / (1.0 - r2);
    Ok(SensitivityReport {
        delta_phi_sq: dphi,
        n_bar: 2.0 * (b.cosh() * k3 - b.sinh() * k2) - 1.0,
        g_factor: None,
        regime: Regime::SinglePoint,
        formula: "SU(1,1) coherent input: |zeta|^2/(2k sinh^2 beta (Re zeta)^2), N = 2k (1+|zeta|^2)/(1-|zeta|^2) cosh beta - 1",
        phi_to_zero: None,
        curves: Some(RegimeCurves::Su11Coherent { k: kv, beta: b }),
    })
}

/// SU(1,1) with Glauber light in both ports, at `phi = 0`.
pub fn su11_glauber_sensitivity(amps: &GlauberAmp, mixer: MixerParam) -> SensitivityReport {
    let (a2, b2) = (amps.alpha.norm_sqr(), amps.alpha_prime.norm_sqr());
    let ab = (a2 * b2).sqrt();
    let (s, c) = amps.phase_sum().sin_cos();
    let c = snap(c);
    let b = mixer.beta();
    let k3 = 0.5 * (a2 + b2 + 1.0);
    // <K2> = -|a||a'| sin(theta + theta') with K+ = a1^dag a2^dag
    let k2 = -ab * s;
    SensitivityReport::point(
        Uncertainty::from_ratio(a2 + b2, 4.0 * b.sinh().powi(2) * ab * ab * c * c),
        2.0 * (b.cosh() * k3 - b.sinh() * k2) - 1.0,
        "SU(1,1) Glauber input: (|a|^2 + |a'|^2)/(4 sinh^2 beta |a|^2 |a'|^2 cos^2(theta + theta'))",
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{IrrepLabel, RepState};
    use crate::su2::{su2_intelligent, su2_state_moments, Su2IntelligentSpec, Su2Irrep};

    fn h(d: i64) -> HalfInt {
        HalfInt::from_doubled(d)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn element_examples() {
        assert_eq!(element_matrix(ElementKind::Rotation3, 0.0).matrix, Matrix3::identity());
        let p = element_matrix(ElementKind::Rotation1, FRAC_PI_2).matrix * element_matrix(ElementKind::Rotation1, -FRAC_PI_2).matrix;
        assert!((p - Matrix3::identity()).abs().max() < 1e-15);
        let p = element_matrix(ElementKind::Boost2, 0.8).matrix * element_matrix(ElementKind::Boost2, -0.8).matrix;
        assert!((p - Matrix3::identity()).abs().max() < 1e-14);
        let l = element_matrix(ElementKind::Boost2, 1.3).matrix;
        let eta = Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 1.0));
        assert!((l.transpose() * eta * l - eta).abs().max() < 1e-12);
    }

    #[test]
    fn observable_examples() {
        let o = output_observable(Group::Su2, 0.0, None).unwrap();
        assert_eq!(o.c, Vector3::new(0.0, 0.0, 1.0));
        assert_eq!(o.dc, Vector3::new(-1.0, 0.0, 0.0));
        let o = output_observable(Group::Su11, 0.0, Some(0.7)).unwrap();
        assert!((o.dc - Vector3::new(0.7f64.sinh(), 0.0, 0.0)).norm() < 1e-15);
        let o = output_observable(Group::Su2, FRAC_PI_2, None).unwrap();
        assert!((o.c - Vector3::new(-1.0, 0.0, 0.0)).norm() < 1e-15);
        assert!(output_observable(Group::Su11, 0.0, None).is_err());
        assert!(output_observable(Group::Su2, 0.0, Some(1.0)).is_err());

        for i in 0..40 {
            let phi = -3.0 + 0.157 * i as f64;
            for (g, b) in [(Group::Su2, None), (Group::Su11, Some(0.3 + 0.05 * i as f64))] {
                let a = output_observable(g, phi, b).unwrap();
                let m = output_observable_from_elements(g, phi, b).unwrap();
                let scale = a.c.abs().max().max(1.0);
                assert!((a.c - m.c).abs().max() < 1e-13 * scale);
                assert!((a.dc - m.dc).abs().max() < 1e-13 * scale);
            }
        }
    }

    #[test]
    fn propagation_examples() {
        let label = IrrepLabel::Su2 { j: h(6) };
        let top = su2_state_moments(&RepState::basis(label, 6).unwrap()).unwrap();
        let o = output_observable(Group::Su2, FRAC_PI_2, None).unwrap();
        assert!(close(phase_uncertainty(&top, &o).value(), 1.0 / 6.0, 1e-14));
        let mid = su2_state_moments(&RepState::basis(label, 3).unwrap()).unwrap();
        assert!(phase_uncertainty(&mid, &o).is_infinite());

        let spec = Su2IntelligentSpec::new(Su2Irrep::new(HalfInt::ONE).unwrap(), HalfInt::ZERO, 0.5).unwrap();
        let m = su2_state_moments(&su2_intelligent(&spec).unwrap()).unwrap();
        let o = output_observable(Group::Su2, 0.0, None).unwrap();
        assert!(close(phase_uncertainty(&m, &o).value(), 1.25 / 4.0, 1e-12));
    }

    #[test]
    fn catalog_examples() {
        assert!(close(su2_fock_sensitivity(h(8), h(8), 1.0).unwrap().delta_phi_sq.value(), 1.0 / 8.0, 1e-15));
        assert!(close(su2_fock_sensitivity(h(4), h(2), 1.0).unwrap().delta_phi_sq.value(), 2.5, 1e-15));
        assert!(su2_fock_sensitivity(h(6), h(0), 1.0).unwrap().delta_phi_sq.is_infinite());
        assert!(matches!(su2_fock_sensitivity(h(4), h(2), 0.0), Err(Error::Domain(_))));

        let g = GlauberAmp::from_polar(2f64.sqrt(), 0.0, 2f64.sqrt(), 0.0).unwrap();
        assert!(close(su2_glauber_sensitivity(&g).delta_phi_sq.value(), 0.25, 1e-15));
        let g = GlauberAmp::from_polar(1.0, 0.0, 2.0, 0.0).unwrap();
        assert!(close(su2_glauber_sensitivity(&g).delta_phi_sq.value(), 5.0 / 16.0, 1e-15));
        let g = GlauberAmp::from_polar(1.0, FRAC_PI_2, 2.0, 0.0).unwrap();
        assert!(su2_glauber_sensitivity(&g).delta_phi_sq.is_infinite());

        assert!(close(su2_coherent_sensitivity(h(6), Complex64::new(0.4, 0.0)).unwrap().delta_phi_sq.value(), 1.0 / 6.0, 1e-15));
        assert!(close(su2_coherent_sensitivity(h(2), Complex64::new(1.0, 1.0)).unwrap().delta_phi_sq.value(), 1.0, 1e-15));
        assert!(su2_coherent_sensitivity(h(2), Complex64::new(0.0, 1.0)).unwrap().delta_phi_sq.is_infinite());
    }

    #[test]
    fn squeezed_examples() {
        let mixer = MixerParam::new(1f64.asinh()).unwrap();
        let r = su2_squeezed_sensitivity(Complex64::new(1.0, 0.0), mixer);
        assert!(close(r.delta_phi_sq.value(), 1.0, 1e-15));
        assert!(close(r.n_bar, 2.0 * 2f64.sqrt() - 1.0, 1e-15));
        let curves = r.curves.unwrap();
        assert!(close((r.n_bar + 1.0).powi(2), 8.0, 1e-14));
        assert!(close(curves.fixed_input(r.n_bar).value(), 1.0, 1e-14));
        assert!(close(curves.fixed_interferometer(r.n_bar).value(), 1.0, 1e-14));
        let big = 1e4;
        let c = RegimeCurves::Squeezed { alpha_sq: 1.0, beta: 1.0 };
        assert!(close(c.fixed_input(big).value().sqrt(), 2.0 / big, 1e-3));
        assert!(su2_squeezed_sensitivity(Complex64::new(1.0, 0.0), MixerParam::new(0.0).unwrap()).delta_phi_sq.is_infinite());
    }

    #[test]
    fn su11_catalog_examples() {
        let mixer = MixerParam::new(0.9).unwrap();
        let sh2 = mixer.sinh_sq();
        let r = su11_kn_sensitivity(h(1), 0, mixer, 1.0).unwrap();
        assert!(close(r.phi_to_zero.unwrap().value(), 1.0 / sh2, 1e-14));
        let r = su11_kn_sensitivity(h(1), 1, mixer, 1.0).unwrap();
        assert!(close(r.phi_to_zero.unwrap().value(), 5.0 / (9.0 * sh2), 1e-14));
        let r = su11_kn_sensitivity(h(1), 0, mixer, FRAC_PI_2).unwrap();
        assert!(close(r.delta_phi_sq.value(), (1.0 + 0.9f64.cosh().powi(2)) / sh2, 1e-14));

        let unit = MixerParam::from_sinh_sq(1.0).unwrap();
        let r = su11_coherent_sensitivity(h(1), Complex64::default(), unit).unwrap();
        assert!(close(r.delta_phi_sq.value(), 1.0, 1e-14));
        assert!(close(r.n_bar, 2f64.sqrt() - 1.0, 1e-14));
        let curves = r.curves.unwrap();
        for nb in [1.0, 10.0, 100.0] {
            assert!(close(curves.fixed_input(nb).value(), 1.0 / (nb * (nb + 2.0)), 1e-13));
            let ch = 2f64.sqrt();
            assert!(close(curves.fixed_interferometer(nb).value(), ch / (nb + 1.0), 1e-13));
        }

        let g = GlauberAmp::from_polar(1.0, 0.3, 1.0, -0.3).unwrap();
        let r = su11_glauber_sensitivity(&g, unit);
        assert!(close(r.delta_phi_sq.value(), 0.5, 1e-14));
        assert!(close(r.n_bar, 3.0 * 2f64.sqrt() - 1.0, 1e-14));
        let sq = su2_squeezed_sensitivity(Complex64::new(1.0, 0.0), unit);
        assert!(close(r.delta_phi_sq.value() / sq.delta_phi_sq.value(), 0.5, 1e-14));
    }

    #[test]
    fn effective_phase() {
        let p = PhaseShift { phi1: 0.2, phi2: 0.5 };
        assert!(close(p.effective(Group::Su2), 0.3, 1e-15));
        assert!(close(p.effective(Group::Su11), -0.7, 1e-15));
        assert!(close(MixerParam::new(2.0).unwrap().reflectivity(), 1f64.sinh().powi(2), 1e-15));
    }
}
