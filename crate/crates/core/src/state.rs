use nalgebra::{DVector, Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::half::HalfInt;

/// Which group's two-mode realization a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    Su2,
    Su11,
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Group::Su2 => "SU2",
            Group::Su11 => "SU11",
        })
    }
}

impl std::str::FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().replace(['(', ')', ','], "").as_str() {
            "SU2" => Ok(Group::Su2),
            "SU11" => Ok(Group::Su11),
            _ => Err(crate::error::invalid("group", format!("unknown group `{s}`"))),
        }
    }
}

/// Representation label: `j` for SU(2), Bargmann index `k` plus truncation for SU(1,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrrepLabel {
    Su2 { j: HalfInt },
    Su11 { k: HalfInt, n_max: usize },
}

impl IrrepLabel {
    pub fn group(&self) -> Group {
        match self {
            IrrepLabel::Su2 { .. } => Group::Su2,
            IrrepLabel::Su11 { .. } => Group::Su11,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            IrrepLabel::Su2 { j } => j.doubled() as usize + 1,
            IrrepLabel::Su11 { n_max, .. } => n_max + 1,
        }
    }

    /// Diagonal of the Cartan generator (`J3` or `K3`) in basis order.
    pub fn weights(&self) -> Vec<f64> {
        match *self {
            IrrepLabel::Su2 { j } => (0..self.dim()).map(|i| i as f64 - j.value()).collect(),
            IrrepLabel::Su11 { k, .. } => (0..self.dim()).map(|n| k.value() + n as f64).collect(),
        }
    }

    /// Raising-operator matrix elements `<i+1|J+|i>`; for SU(1,1) one extra
    /// entry maps the top basis state out of the truncation.
    pub fn raising(&self) -> Vec<f64> {
        match *self {
            IrrepLabel::Su2 { j } => {
                let jj = j.value();
                (0..self.dim() - 1)
                    .map(|i| {
                        let m = i as f64 - jj;
                        ((jj - m) * (jj + m + 1.0)).sqrt()
                    })
                    .collect()
            }
            IrrepLabel::Su11 { k, .. } => {
                let kk = k.value();
                (0..self.dim())
                    .map(|n| ((n as f64 + 1.0) * (n as f64 + 2.0 * kk)).sqrt())
                    .collect()
            }
        }
    }
}

/// Normalized complex amplitudes over an irrep basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RepState {
    label: IrrepLabel,
    amps: DVector<Complex64>,
    norm_squared: f64,
}

impl RepState {
    /// Normalizes `amps` and fixes the global phase so the first nonzero
    /// amplitude is real positive.
    pub fn new(label: IrrepLabel, amps: DVector<Complex64>) -> Result<Self> {
        if amps.len() != label.dim() {
            return Err(Error::DimensionMismatch {
                expected: label.dim(),
                got: amps.len(),
            });
        }
        let n2 = amps.norm_squared();
        if !(n2.is_finite() && n2 > 0.0) {
            return Err(Error::Domain("state has zero or non-finite norm".into()));
        }
        let mut amps = amps.unscale(n2.sqrt());
        let scale = amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if let Some(first) = amps.iter().find(|a| a.norm() > 1e-300_f64.max(scale * 1e-300)) {
            let phase = first.conj() / first.norm();
            amps *= phase;
        }
        let norm_squared = amps.norm_squared();
        Ok(RepState {
            label,
            amps,
            norm_squared,
        })
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(label: IrrepLabel, amps: &[f64]) -> Result<Self> {
        RepState::new(
            label,
            DVector::from_iterator(amps.len(), amps.iter().map(|&a| Complex64::new(a, 0.0))),
        )
    }

    /// The basis state at `index`.
    pub fn basis(label: IrrepLabel, index: usize) -> Result<Self> {
        if index >= label.dim() {
            return Err(Error::DimensionMismatch {
                expected: label.dim(),
                got: index + 1,
            });
        }
        let mut amps = DVector::zeros(label.dim());
        amps[index] = Complex64::new(1.0, 0.0);
        RepState::new(label, amps)
    }

    pub fn label(&self) -> IrrepLabel {
        self.label
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn norm_squared(&self) -> f64 {
        self.norm_squared
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// `<self|other>`, zero-padding the shorter amplitude list.
    pub fn overlap(&self, other: &RepState) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest amplitude difference after aligning global phases.
    pub fn distance_up_to_phase(&self, other: &RepState) -> f64 {
        let ov = self.overlap(other);
        let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { Complex64::new(1.0, 0.0) };
        let n = self.dim().max(other.dim());
        (0..n)
            .map(|i| {
                let a = self.amps.get(i).copied().unwrap_or_default() * phase;
                let b = other.amps.get(i).copied().unwrap_or_default();
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Probability carried by the top `levels` basis states.
    pub fn tail_mass(&self, levels: usize) -> f64 {
        let n = self.dim();
        self.amps.iter().skip(n.saturating_sub(levels)).map(|a| a.norm_sqr()).sum()
    }
}

/// Means and symmetrized covariances of the three generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub mean: Vector3<f64>,
    pub covariance: Matrix3<f64>,
}

impl MomentSummary {
    pub fn variance(&self, axis: usize) -> f64 {
        self.covariance[(axis, axis)]
    }

    /// Smallest covariance eigenvalue, for positive-semidefiniteness checks.
    pub fn min_covariance_eigenvalue(&self) -> f64 {
        self.covariance.symmetric_eigenvalues().min()
    }
}

/// Exact generator moments of `amps` from the ladder structure: `diag` is the
/// Cartan diagonal and `up[i]` the raising element from `i` to `i + 1`.
/// When `up` has `dim` entries the raised vector is extended by one level,
/// so the moments are those of the untruncated operators.
pub(crate) fn ladder_moments(amps: &DVector<Complex64>, diag: &[f64], up: &[f64]) -> MomentSummary {
    let n = amps.len();
    let ext = if up.len() >= n { n + 1 } else { n };
    let i = Complex64::new(0.0, 1.0);
    let mut plus = vec![Complex64::default(); ext];
    let mut minus = vec![Complex64::default(); ext];
    for idx in 0..n {
        if idx < up.len() {
            plus[idx + 1] += up[idx] * amps[idx];
        }
        if idx > 0 {
            minus[idx - 1] += up[idx - 1] * amps[idx];
        }
    }
    let psi: Vec<Complex64> = (0..ext).map(|k| amps.get(k).copied().unwrap_or_default()).collect();
    let phi1: Vec<Complex64> = (0..ext).map(|k| 0.5 * (plus[k] + minus[k])).collect();
    let phi2: Vec<Complex64> = (0..ext).map(|k| (plus[k] - minus[k]) / (2.0 * i)).collect();
    let phi3: Vec<Complex64> = (0..ext).map(|k| diag.get(k).copied().unwrap_or(0.0) * psi[k]).collect();
    let phis = [phi1, phi2, phi3];
    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    };
    let mean = Vector3::from_fn(|a, _| dot(&psi, &phis[a]).re);
    let covariance = Matrix3::from_fn(|a, b| dot(&phis[a], &phis[b]).re - mean[a] * mean[b]);
    let covariance = 0.5 * (covariance + covariance.transpose());
    MomentSummary { mean, covariance }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_convention() {
        let label = IrrepLabel::Su2 { j: HalfInt::ONE };
        let amps = DVector::from_vec(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -2.0),
            Complex64::new(1.0, 1.0),
        ]);
        let s = RepState::new(label, amps).unwrap();
        assert!((s.amplitudes()[1] - Complex64::new(2.0 / 6f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!((s.norm_squared() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_wrong_length() {
        let label = IrrepLabel::Su2 { j: HalfInt::HALF };
        assert!(RepState::from_real(label, &[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn group_parsing() {
        assert_eq!("su(1,1)".parse::<Group>().unwrap(), Group::Su11);
        assert_eq!("SU2".parse::<Group>().unwrap(), Group::Su2);
        assert!("SU3".parse::<Group>().is_err());
    }
}
