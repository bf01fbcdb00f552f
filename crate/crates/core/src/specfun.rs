//! Jacobi and Lagrange polynomials with arbitrary real (including negative
//! integer) parameters.
//!
//! The Jacobi polynomial is defined everywhere by the explicit finite sum
//!
//! ```text
//! P_n^(a,b)(x) = sum_{s=0}^{n} C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s)
//! ```
//!
//! where `C` is the generalized binomial coefficient. There is no pole for
//! any `a`, `b`, which is what the intelligent-state formulas need.

use crate::error::{Error, Result};

/// Degree, parameters and argument of a Jacobi polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub x: f64,
}

/// Degree, parameters and arguments of a Lagrange polynomial `g_n^(a,b)(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangeParams {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub u: f64,
    pub v: f64,
}

/// A real number held as sign and natural log of its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    /// -1, 0 or +1.
    pub sign: i8,
    /// `ln |value|`; meaningless when `sign == 0`.
    pub ln_abs: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };
    pub const ONE: Scaled = Scaled { sign: 1, ln_abs: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Scaled::ZERO
        } else {
            Scaled {
                sign: if x > 0.0 { 1 } else { -1 },
                ln_abs: x.abs().ln(),
            }
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.ln_abs.exp()
        }
    }

    pub fn mul(self, o: Scaled) -> Scaled {
        if self.sign == 0 || o.sign == 0 {
            return Scaled::ZERO;
        }
        Scaled {
            sign: self.sign * o.sign,
            ln_abs: self.ln_abs + o.ln_abs,
        }
    }

    /// Quotient; `None` when dividing by zero.
    pub fn div(self, o: Scaled) -> Option<Scaled> {
        if o.sign == 0 {
            return None;
        }
        if self.sign == 0 {
            return Some(Scaled::ZERO);
        }
        Some(Scaled {
            sign: self.sign * o.sign,
            ln_abs: self.ln_abs - o.ln_abs,
        })
    }

    pub fn powi(self, k: usize) -> Scaled {
        if k == 0 {
            return Scaled::ONE;
        }
        if self.sign == 0 {
            return Scaled::ZERO;
        }
        Scaled {
            sign: if self.sign < 0 && k % 2 == 1 { -1 } else { 1 },
            ln_abs: self.ln_abs * k as f64,
        }
    }
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Sums signed log-magnitudes without overflow.
pub fn sum_scaled<I: IntoIterator<Item = Scaled>>(terms: I) -> Scaled {
    let terms: Vec<Scaled> = terms.into_iter().filter(|t| t.sign != 0).collect();
    let Some(max) = terms.iter().map(|t| t.ln_abs).reduce(f64::max) else {
        return Scaled::ZERO;
    };
    let s = neumaier_sum(terms.iter().map(|t| f64::from(t.sign) * (t.ln_abs - max).exp()));
    let mut out = Scaled::from_f64(s);
    if out.sign != 0 {
        out.ln_abs += max;
    }
    out
}

/// `ln(n!)` for `n = 0..=n_max`.
pub fn ln_factorials(n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for n in 1..=n_max {
        acc += (n as f64).ln();
        out.push(acc);
    }
    out
}

/// Generalized binomial coefficient `a(a-1)...(a-k+1)/k!`.
pub fn binom_gen(a: f64, k: usize) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (a - i as f64) / (i + 1) as f64;
    }
    r
}

/// `binom_gen(a, k)` in sign/log form.
pub fn ln_binom_gen(a: f64, k: usize) -> Scaled {
    ln_binom_row(a, k)[k]
}

/// `[C(a,0), C(a,1), ..., C(a,n)]` by the ratio recurrence.
pub fn binom_row(a: f64, n: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(n + 1);
    let mut r = 1.0;
    row.push(r);
    for i in 0..n {
        r = r * (a - i as f64) / (i + 1) as f64;
        row.push(r);
    }
    row
}

/// `binom_row` in sign/log form; once a factor vanishes every later entry is zero.
pub fn ln_binom_row(a: f64, n: usize) -> Vec<Scaled> {
    let mut row = Vec::with_capacity(n + 1);
    let mut cur = Scaled::ONE;
    row.push(cur);
    for i in 0..n {
        let f = a - i as f64;
        if cur.sign != 0 {
            if f == 0.0 {
                cur = Scaled::ZERO;
            } else {
                cur.ln_abs += f.abs().ln() - ((i + 1) as f64).ln();
                if f < 0.0 {
                    cur.sign = -cur.sign;
                }
            }
        }
        row.push(cur);
    }
    row
}

fn in_safe_range(v: f64) -> bool {
    v == 0.0 || (v.is_finite() && v.abs() < 1e280 && v.abs() > 1e-280)
}

fn jacobi_direct(n: usize, alpha: f64, beta: f64, x: f64) -> Option<f64> {
    let ra = binom_row(n as f64 + alpha, n);
    let rb = binom_row(n as f64 + beta, n);
    if !ra.iter().chain(rb.iter()).all(|&v| in_safe_range(v)) {
        return None;
    }
    let u = 0.5 * (x - 1.0);
    let w = 0.5 * (x + 1.0);
    let mut terms = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let c = ra[n - s] * rb[s];
        if c == 0.0 {
            continue;
        }
        let pu = u.powi(s as i32);
        let pw = w.powi((n - s) as i32);
        if pu == 0.0 || pw == 0.0 {
            if (s > 0 && u == 0.0) || (s < n && w == 0.0) {
                continue;
            }
            return None;
        }
        let t = c * pu * pw;
        if !in_safe_range(t) || !in_safe_range(pu) || !in_safe_range(pw) || !in_safe_range(c) {
            return None;
        }
        terms.push(t);
    }
    Some(neumaier_sum(terms))
}

/// Jacobi polynomial in sign/log form, valid for degrees in the thousands.
pub fn jacobi_scaled(n: usize, alpha: f64, beta: f64, x: f64) -> Scaled {
    if n == 0 {
        return Scaled::ONE;
    }
    let ra = ln_binom_row(n as f64 + alpha, n);
    let rb = ln_binom_row(n as f64 + beta, n);
    let lu = Scaled::from_f64(0.5 * (x - 1.0));
    let lw = Scaled::from_f64(0.5 * (x + 1.0));
    sum_scaled((0..=n).map(|s| ra[n - s].mul(rb[s]).mul(lu.powi(s)).mul(lw.powi(n - s))))
}

/// `P_n^(alpha,beta)(x)` by the explicit sum.
pub fn jacobi(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    jacobi_direct(n, alpha, beta, x).unwrap_or_else(|| jacobi_scaled(n, alpha, beta, x).to_f64())
}

/// Evaluates `p` by the explicit finite sum.
pub fn jacobi_p(p: &JacobiParams) -> f64 {
    jacobi(p.n, p.alpha, p.beta, p.x)
}

/// `g_n^(a,b)(u, v) = (v-u)^n P_n^(-a-n, -b-n)((u+v)/(u-v))`.
pub fn lagrange_g(p: &LagrangeParams) -> Result<f64> {
    Ok(lagrange_g_scaled(p)?.to_f64())
}

/// `lagrange_g` in sign/log form.
pub fn lagrange_g_scaled(p: &LagrangeParams) -> Result<Scaled> {
    if p.u == p.v {
        return Err(Error::Domain("Lagrange polynomial needs u != v".into()));
    }
    if p.n == 0 {
        return Ok(Scaled::ONE);
    }
    let n = p.n as f64;
    let x = (p.u + p.v) / (p.u - p.v);
    let direct = jacobi_direct(p.n, -p.alpha - n, -p.beta - n, x);
    let pj = match direct {
        Some(v) => Scaled::from_f64(v),
        None => jacobi_scaled(p.n, -p.alpha - n, -p.beta - n, x),
    };
    Ok(Scaled::from_f64(p.v - p.u).powi(p.n).mul(pj))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jp(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
        jacobi_p(&JacobiParams { n, alpha, beta, x })
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom_gen(5.0, 0), 1.0);
        assert_eq!(binom_gen(-1.0, 2), 1.0);
        assert_eq!(binom_gen(1.0, 2), 0.0);
        assert_eq!(binom_gen(10.0, 3), 120.0);
        assert!((binom_gen(0.5, 2) + 0.125).abs() < 1e-16);
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jp(0, 5.2, -3.0, 0.7), 1.0);
        assert_eq!(jp(1, 0.0, -3.0, 0.0), 1.5);
        assert_eq!(jp(2, -1.0, -1.0, 3.0), 2.0);
        assert_eq!(jp(3, 2.0, 7.0, 1.0), 10.0);
    }

    #[test]
    fn lagrange_examples() {
        let g = |n, alpha, beta, u, v| lagrange_g(&LagrangeParams { n, alpha, beta, u, v });
        assert_eq!(g(0, 3.3, -1.0, 0.2, 0.9).unwrap(), 1.0);
        assert_eq!(g(1, 0.0, 0.0, 1.0, 2.0).unwrap(), 0.0);
        assert_eq!(g(3, -1.0, -1.0, -2.0, 0.5).unwrap(), 0.0);
        assert!(matches!(g(2, 1.0, 1.0, 0.4, 0.4), Err(Error::Domain(_))));
    }

    #[test]
    fn scaled_matches_direct() {
        for &(n, a, b, x) in &[
            (5usize, -12.0, 3.0, 1.7),
            (9, 0.0, -19.0, -1.0),
            (12, 1.0, -30.0, -0.3),
            (7, 2.5, -0.5, 0.4),
        ] {
            let d = jacobi_direct(n, a, b, x).unwrap();
            let s = jacobi_scaled(n, a, b, x).to_f64();
            assert!((d - s).abs() <= 1e-12 * d.abs().max(1.0), "{n} {a} {b} {x}: {d} vs {s}");
        }
    }

    #[test]
    fn large_degree_falls_back_to_log_form() {
        let v = jacobi_scaled(3000, 0.0, -6001.0, -0.9);
        assert!(v.sign != 0 && v.ln_abs.is_finite() && v.ln_abs > 700.0);
        assert!(jacobi(3000, 0.0, -6001.0, -0.9).is_infinite());
    }

    #[test]
    fn ln_binom_zero_flag() {
        let row = ln_binom_row(3.0, 6);
        assert!(row[3].sign == 1 && (row[3].ln_abs - 0.0).abs() < 1e-15);
        assert!(row[4..].iter().all(|s| s.is_zero()));
        let neg = ln_binom_gen(-4.0, 3);
        assert_eq!(neg.sign, -1);
        assert!((neg.to_f64() + 20.0).abs() < 1e-12);
    }

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let s = neumaier_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(s, 2.0);
    }
}
