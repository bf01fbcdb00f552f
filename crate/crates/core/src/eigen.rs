//! Multiprecision eigen-oracle for the real tridiagonal matrices
//! `J3 - i eta J2` and `K3 - i eta K2`.
//!
//! These matrices are non-normal: their eigenvalues move by O(1) under
//! relative perturbations of 1e-16 once `j atanh(eta)` is moderately large,
//! so double-precision QR is useless as an oracle. The characteristic
//! polynomial is instead evaluated by its three-term recurrence in
//! arbitrary precision, roots are bracketed and bisected, and eigenvectors
//! follow from forward substitution. Every result is recomputed at a higher
//! precision and accepted only when both runs agree.

use astro_float::{BigFloat, RoundingMode, Sign};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;
const MAX_BITS: usize = 8192;
const SCAN_REL_WIDTH: f64 = 1.0 / (1u64 << 62) as f64;

/// `diag(d) + (eta/2) sqrt(c) on the superdiagonal - (eta/2) sqrt(c) on the subdiagonal`.
#[derive(Debug, Clone)]
pub(crate) struct TriSpec {
    pub diag: Vec<f64>,
    pub coupling: Vec<f64>,
    pub eta: f64,
    /// Starting precision in bits.
    pub bits: usize,
}

/// Eigenvalue `mu` of the real matrix with its eigenvector and residual.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    /// Scaled so the largest component has magnitude one.
    pub vector: Vec<f64>,
    /// Last-row residual of the forward substitution, relative to the vector.
    pub residual: f64,
    /// Precision in bits at which the result was certified.
    pub bits: usize,
}

struct Mp {
    p: usize,
    d: Vec<BigFloat>,
    sub: Vec<BigFloat>,
    sup: Vec<BigFloat>,
    q: Vec<BigFloat>,
}

pub(crate) fn big_to_f64(x: &BigFloat) -> f64 {
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    if x.is_zero() {
        return 0.0;
    }
    let top = *words.last().expect("nonzero mantissa");
    let mut v = top as f64 / 18446744073709551616.0;
    let e = exp as i64;
    if e > 1100 {
        v = f64::INFINITY;
    } else if e < -1100 {
        v = 0.0;
    } else {
        let h = (e / 2) as i32;
        v = v * 2f64.powi(h) * 2f64.powi(e as i32 - h);
    }
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

impl Mp {
    fn new(spec: &TriSpec, p: usize) -> Self {
        let half_eta = BigFloat::from_f64(spec.eta, p).div(&BigFloat::from_f64(2.0, p), p, RM);
        let d = spec.diag.iter().map(|&x| BigFloat::from_f64(x, p)).collect();
        let mut sub = Vec::with_capacity(spec.coupling.len());
        let mut sup = Vec::with_capacity(spec.coupling.len());
        let mut q = Vec::with_capacity(spec.coupling.len());
        for &c in &spec.coupling {
            let s = BigFloat::from_f64(c, p).sqrt(p, RM).mul(&half_eta, p, RM);
            q.push(s.mul(&s, p, RM));
            sub.push(s.neg());
            sup.push(s);
        }
        Mp { p, d, sub, sup, q }
    }

    fn n(&self) -> usize {
        self.d.len()
    }

    fn big(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    fn charpoly(&self, mu: &BigFloat) -> BigFloat {
        let p = self.p;
        let mut prev = self.big(1.0);
        let mut cur = self.d[0].sub(mu, p, RM);
        for i in 1..self.n() {
            let next = self.d[i]
                .sub(mu, p, RM)
                .mul(&cur, p, RM)
                .add(&self.q[i - 1].mul(&prev, p, RM), p, RM);
            prev = cur;
            cur = next;
        }
        cur
    }

    fn sign_at(&self, mu: &BigFloat) -> i8 {
        let v = self.charpoly(mu);
        if v.is_zero() {
            0
        } else if v.sign() == Some(Sign::Neg) {
            -1
        } else {
            1
        }
    }

    /// Bisects a sign change in `[lo, hi]` down to the working precision.
    fn bisect(&self, lo: BigFloat, hi: BigFloat, s_lo: i8) -> BigFloat {
        self.bisect_to(lo, hi, s_lo, 2f64.powi(8 - self.p as i32))
    }

    /// Bisects until the bracket is below `rel` times the root magnitude (at least 1).
    fn bisect_to(&self, mut lo: BigFloat, mut hi: BigFloat, s_lo: i8, rel: f64) -> BigFloat {
        let p = self.p;
        let two = self.big(2.0);
        for _ in 0..p + 1100 {
            let mid = lo.add(&hi, p, RM).div(&two, p, RM);
            let width = big_to_f64(&hi.sub(&lo, p, RM)).abs();
            let scale = big_to_f64(&mid).abs().max(1.0);
            if width <= rel * scale {
                return mid;
            }
            match self.sign_at(&mid) {
                0 => return mid,
                s if s == s_lo => lo = mid,
                _ => hi = mid,
            }
        }
        lo.add(&hi, p, RM).div(&two, p, RM)
    }

    /// Forward substitution for the null vector of `M - mu`.
    fn eigenvector(&self, mu: &BigFloat) -> (Vec<f64>, f64) {
        let p = self.p;
        let n = self.n();
        let mut v: Vec<BigFloat> = Vec::with_capacity(n);
        v.push(self.big(1.0));
        for i in 0..n.saturating_sub(1) {
            let mut acc = self.d[i].sub(mu, p, RM).mul(&v[i], p, RM);
            if i > 0 {
                acc = acc.add(&self.sub[i - 1].mul(&v[i - 1], p, RM), p, RM);
            }
            v.push(acc.div(&self.sup[i], p, RM).neg());
        }
        let mut r = self.d[n - 1].sub(mu, p, RM).mul(&v[n - 1], p, RM);
        if n >= 2 {
            r = r.add(&self.sub[n - 2].mul(&v[n - 2], p, RM), p, RM);
        }
        let mut big = v[0].abs();
        for x in &v[1..] {
            if x.abs_cmp(&big) == Some(1) {
                big = x.abs();
            }
        }
        let vec = v.iter().map(|x| big_to_f64(&x.div(&big, p, RM))).collect();
        let res = big_to_f64(&r.div(&big, p, RM)).abs();
        (vec, res)
    }

    /// Eigenpair whose eigenvalue brackets within `tol` of `target`; falls back
    /// to `target` itself for even-multiplicity roots such as Jordan blocks.
    fn pair_near(&self, target: f64, tol: f64) -> Option<(BigFloat, Vec<f64>, f64)> {
        let p = self.p;
        let t = self.big(target);
        let lo = t.sub(&self.big(tol), p, RM);
        let hi = t.add(&self.big(tol), p, RM);
        let (slo, shi) = (self.sign_at(&lo), self.sign_at(&hi));
        let mut candidates = Vec::new();
        if slo == 0 {
            candidates.push(lo.clone());
        } else if shi == 0 {
            candidates.push(hi.clone());
        } else if slo != shi {
            candidates.push(self.bisect(lo, hi, slo));
        }
        let mut best: Option<(BigFloat, Vec<f64>, f64)> = None;
        for mu in candidates.into_iter().chain(std::iter::once(t)) {
            let (vec, res) = self.eigenvector(&mu);
            if best.as_ref().map_or(true, |b| res < b.2) {
                best = Some((mu, vec, res));
            }
        }
        let bracketed = slo == 0 || shi == 0 || slo != shi;
        best.filter(|b| bracketed || b.2 < 2f64.powi(-((p / 2) as i32)))
    }

    /// All sign changes of the characteristic polynomial on a uniform grid.
    fn scan_roots(&self, lo: f64, hi: f64, step: f64) -> Vec<BigFloat> {
        self.scan_roots_upto(lo, hi, step, usize::MAX)
    }

    /// As `scan_roots`, stopping once `limit` roots are found. Roots are only
    /// resolved to `SCAN_REL_WIDTH`; callers convert them to `f64`.
    fn scan_roots_upto(&self, lo: f64, hi: f64, step: f64, limit: usize) -> Vec<BigFloat> {
        let npts = ((hi - lo) / step).ceil().max(1.0) as usize;
        let mut roots = Vec::new();
        let mut x_prev = self.big(lo);
        let mut s_prev = self.sign_at(&x_prev);
        for i in 1..=npts {
            if roots.len() >= limit {
                return roots;
            }
            let x = self.big(lo + (hi - lo) * i as f64 / npts as f64);
            let s = self.sign_at(&x);
            if s_prev == 0 {
                roots.push(x_prev.clone());
            } else if s != 0 && s != s_prev {
                roots.push(self.bisect_to(x_prev.clone(), x.clone(), s_prev, SCAN_REL_WIDTH));
            }
            x_prev = x;
            s_prev = s;
        }
        if s_prev == 0 {
            roots.push(x_prev);
        }
        roots
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let d = big_to_f64(&self.d[i]);
            let mut r = 0.0;
            if i > 0 {
                r += big_to_f64(&self.sub[i - 1]).abs();
            }
            if i + 1 < n {
                r += big_to_f64(&self.sup[i]).abs();
            }
            lo = lo.min(d - r);
            hi = hi.max(d + r);
        }
        (lo, hi)
    }
}

fn agree(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * x.abs().max(1.0))
}

/// Eigenpair with eigenvalue within `tol` of `target`, certified by agreement
/// between two precisions.
pub(crate) fn eigenpair_near(spec: &TriSpec, target: f64, tol: f64) -> Result<EigenPair> {
    let mut p = spec.bits.max(128);
    let mut last: Option<EigenPair> = None;
    let mut misses = 0;
    while p <= MAX_BITS {
        let mp = Mp::new(spec, p);
        match mp.pair_near(target, tol) {
            Some((mu, vector, residual)) => {
                let pair = EigenPair {
                    value: big_to_f64(&mu),
                    vector,
                    residual,
                    bits: p,
                };
                if let Some(prev) = &last {
                    if (prev.value - pair.value).abs() <= 1e-14 * pair.value.abs().max(1.0)
                        && agree(&prev.vector, &pair.vector, 1e-12)
                    {
                        return Ok(pair);
                    }
                }
                last = Some(pair);
                p += 64;
            }
            None => {
                misses += 1;
                if misses >= 3 {
                    return Err(Error::Domain(format!(
                        "no eigenvalue within {tol:e} of {target}"
                    )));
                }
                last = None;
                p += 64.max(p / 2);
            }
        }
    }
    Err(Error::Consistency(format!(
        "eigenpair near {target} not certified below {MAX_BITS} bits"
    )))
}

/// Real eigenvalues resolved on a grid of spacing `step`, certified by
/// agreement between two precisions.
pub(crate) fn real_spectrum(spec: &TriSpec, step: f64) -> Result<Vec<f64>> {
    let mut p = spec.bits.max(128);
    let mut last: Option<Vec<f64>> = None;
    while p <= MAX_BITS {
        let mp = Mp::new(spec, p);
        let (lo, hi) = mp.gershgorin();
        let roots: Vec<f64> = mp
            .scan_roots(lo - step, hi + step, step)
            .iter()
            .map(big_to_f64)
            .collect();
        if let Some(prev) = &last {
            if agree(prev, &roots, 1e-13) {
                return Ok(roots);
            }
        }
        last = Some(roots);
        p += 64;
    }
    Err(Error::Consistency(format!(
        "spectrum not certified below {MAX_BITS} bits"
    )))
}

/// The `count` lowest real eigenvalues, scanning upward from the Gershgorin bound.
pub(crate) fn lowest_real(spec: &TriSpec, count: usize, step: f64) -> Result<Vec<f64>> {
    let mut p = spec.bits.max(128);
    let mut last: Option<Vec<f64>> = None;
    while p <= MAX_BITS {
        let mp = Mp::new(spec, p);
        let (lo, hi) = mp.gershgorin();
        let roots: Vec<f64> = mp
            .scan_roots_upto(lo - step, hi + step, step, count)
            .iter()
            .map(big_to_f64)
            .collect();
        if roots.len() < count {
            return Err(Error::Domain(format!(
                "only {} real eigenvalues found, {count} requested",
                roots.len()
            )));
        }
        if let Some(prev) = &last {
            if agree(prev, &roots, 1e-13) {
                return Ok(roots);
            }
        }
        last = Some(roots);
        p += 64;
    }
    Err(Error::Consistency(format!(
        "lowest eigenvalues not certified below {MAX_BITS} bits"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion_round_trips() {
        for &x in &[1.0, -3.25, 1e-200, 6.02e23, -0.1] {
            let b = BigFloat::from_f64(x, 256);
            assert_eq!(big_to_f64(&b), x);
        }
        assert_eq!(big_to_f64(&BigFloat::from_f64(0.0, 128)), 0.0);
    }

    #[test]
    fn symmetric_two_by_two() {
        // diag(0, 1) with eta = 2 and coupling 1: [[0, 1], [-1, 1]], roots of mu^2 - mu + 1 are complex.
        let spec = TriSpec { diag: vec![0.0, 1.0], coupling: vec![1.0], eta: 2.0, bits: 128 };
        assert!(real_spectrum(&spec, 0.01).unwrap().is_empty());
        // eta = 0.5: [[0, .25], [-.25, 1]] has real roots (1 +- sqrt(0.75))/2.
        let spec = TriSpec { eta: 0.5, ..spec };
        let r = real_spectrum(&spec, 0.01).unwrap();
        let s = 0.75f64.sqrt();
        assert_eq!(r.len(), 2);
        assert!((r[0] - (1.0 - s) / 2.0).abs() < 1e-15);
        assert!((r[1] - (1.0 + s) / 2.0).abs() < 1e-15);
    }
}
