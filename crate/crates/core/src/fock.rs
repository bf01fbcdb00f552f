//! Truncated two-mode Fock space: product coherent states, the four-wave
//! mixer as a matrix exponential, irrep embeddings and brute-force moments.

use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::state::{Group, IrrepLabel, MomentSummary, RepState};
use crate::table::format_num;

/// Default bound on the probability within [`EDGE_LEVELS`] of a cutoff.
pub const TAIL_TOLERANCE: f64 = 1e-12;
/// Levels next to each cutoff counted as tail.
pub const EDGE_LEVELS: usize = 3;

/// Cutoffs `n1 <= n1_max`, `n2 <= n2_max`; amplitudes are stored row-major in `n1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockGrid {
    pub n1_max: usize,
    pub n2_max: usize,
}

impl FockGrid {
    pub fn new(n1_max: usize, n2_max: usize) -> Self {
        FockGrid { n1_max, n2_max }
    }

    pub fn square(n_max: usize) -> Self {
        FockGrid::new(n_max, n_max)
    }

    pub fn dim(&self) -> usize {
        (self.n1_max + 1) * (self.n2_max + 1)
    }

    pub fn index(&self, n1: usize, n2: usize) -> usize {
        n1 * (self.n2_max + 1) + n2
    }

    pub fn levels(&self, idx: usize) -> (usize, usize) {
        (idx / (self.n2_max + 1), idx % (self.n2_max + 1))
    }

    pub fn contains(&self, n1: usize, n2: usize) -> bool {
        n1 <= self.n1_max && n2 <= self.n2_max
    }

    /// Poisson-tail cutoff `|a|^2 + 8|a| + 16` per mode.
    pub fn for_glauber(alpha: Complex64, alpha_prime: Complex64) -> Self {
        let cut = |a: Complex64| {
            let r = a.norm();
            (r * r + 8.0 * r + 16.0).ceil() as usize
        };
        FockGrid::new(cut(alpha), cut(alpha_prime))
    }

    /// Cutoffs grown by the factor `cosh(beta)` plus a margin long enough for
    /// the squeezed-vacuum weights `tanh(beta/2)^(2n)` to fall below `1e-14`.
    pub fn expanded_for_squeeze(&self, beta: f64) -> Self {
        let decay = -(0.5 * beta).tanh().abs().powi(2).max(1e-300).ln();
        let margin = 16 + (14.0 * std::f64::consts::LN_10 / decay).ceil().min(1e6) as usize;
        let grow = |n: usize| ((n as f64 + 1.0) * beta.cosh()).ceil() as usize + margin;
        FockGrid::new(grow(self.n1_max), grow(self.n2_max))
    }

    fn near_edge(&self, n1: usize, n2: usize) -> bool {
        n1 + EDGE_LEVELS > self.n1_max || n2 + EDGE_LEVELS > self.n2_max
    }
}

/// Normalized amplitudes on a [`FockGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeFockState {
    grid: FockGrid,
    amps: DVector<Complex64>,
    tail_mass: f64,
    norm_before: f64,
}

impl TwoModeFockState {
    /// Normalizes `amps`; the norm prior to normalization is kept in
    /// [`TwoModeFockState::norm_before_renormalization`].
    pub fn new(grid: FockGrid, amps: DVector<Complex64>) -> Result<Self> {
        if amps.len() != grid.dim() {
            return Err(Error::DimensionMismatch {
                expected: grid.dim(),
                got: amps.len(),
            });
        }
        let norm = amps.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Domain("Fock state has zero or non-finite norm".into()));
        }
        let amps = amps.unscale(norm);
        let tail_mass = amps
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let (n1, n2) = grid.levels(*i);
                grid.near_edge(n1, n2)
            })
            .map(|(_, a)| a.norm_sqr())
            .sum();
        Ok(TwoModeFockState {
            grid,
            amps,
            tail_mass,
            norm_before: norm,
        })
    }

    pub fn vacuum(grid: FockGrid) -> Self {
        let mut amps = DVector::zeros(grid.dim());
        amps[0] = Complex64::new(1.0, 0.0);
        TwoModeFockState::new(grid, amps).expect("vacuum is normalizable")
    }

    pub fn number_state(grid: FockGrid, n1: usize, n2: usize) -> Result<Self> {
        if !grid.contains(n1, n2) {
            return Err(Error::Truncation(format!("|{n1},{n2}> lies outside the cutoffs")));
        }
        let mut amps = DVector::zeros(grid.dim());
        amps[grid.index(n1, n2)] = Complex64::new(1.0, 0.0);
        TwoModeFockState::new(grid, amps)
    }

    pub fn grid(&self) -> FockGrid {
        self.grid
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn amplitude(&self, n1: usize, n2: usize) -> Complex64 {
        if self.grid.contains(n1, n2) {
            self.amps[self.grid.index(n1, n2)]
        } else {
            Complex64::default()
        }
    }

    /// Probability within [`EDGE_LEVELS`] of either cutoff.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_before_renormalization(&self) -> f64 {
        self.norm_before
    }

    /// Truncation error if the tail mass exceeds `tol`.
    pub fn check_tail(self, tol: f64) -> Result<Self> {
        if self.tail_mass > tol {
            return Err(Error::Truncation(format!(
                "tail mass {:.3e} exceeds {tol:e} on cutoffs ({}, {})",
                self.tail_mass, self.grid.n1_max, self.grid.n2_max
            )));
        }
        Ok(self)
    }

    /// Copies the amplitudes onto a larger grid.
    pub fn expand(&self, grid: FockGrid) -> Result<Self> {
        if grid.n1_max < self.grid.n1_max || grid.n2_max < self.grid.n2_max {
            return Err(invalid("grid", "expansion target must contain the current cutoffs"));
        }
        let mut amps = DVector::zeros(grid.dim());
        for (i, a) in self.amps.iter().enumerate() {
            let (n1, n2) = self.grid.levels(i);
            amps[grid.index(n1, n2)] = *a;
        }
        TwoModeFockState::new(grid, amps)
    }

    /// CSV rows `n1,n2,re,im` for nonzero amplitudes.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "n1,n2,re,im")?;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            let (n1, n2) = self.grid.levels(i);
            writeln!(w, "{n1},{n2},{},{}", format_num(a.re), format_num(a.im))?;
        }
        Ok(())
    }
}

fn csr(n: usize, entries: impl IntoIterator<Item = (usize, usize, Complex64)>) -> CsrMatrix<Complex64> {
    let mut coo = CooMatrix::new(n, n);
    for (r, c, v) in entries {
        coo.push(r, c, v);
    }
    CsrMatrix::from(&coo)
}

/// Mode operators and both generator sets on a truncated grid. Bilinears
/// are the products of the truncated ladder matrices.
#[derive(Debug, Clone)]
pub struct ModeOperatorSet {
    pub grid: FockGrid,
    pub a1: CsrMatrix<Complex64>,
    pub a2: CsrMatrix<Complex64>,
    pub j1: CsrMatrix<Complex64>,
    pub j2: CsrMatrix<Complex64>,
    pub j3: CsrMatrix<Complex64>,
    pub k1: CsrMatrix<Complex64>,
    pub k2: CsrMatrix<Complex64>,
    pub k3: CsrMatrix<Complex64>,
    /// Total photon number `n1 + n2`.
    pub n_total: CsrMatrix<Complex64>,
    /// Photon-number difference `n1 - n2`.
    pub n_diff: CsrMatrix<Complex64>,
}

impl ModeOperatorSet {
    pub fn new(grid: FockGrid) -> Self {
        let dim = grid.dim();
        let cells: Vec<(usize, usize)> = (0..dim).map(|i| grid.levels(i)).collect();
        let c = |x: f64| Complex64::new(x, 0.0);
        let ci = |x: f64| Complex64::new(0.0, x);
        let diag = |f: &dyn Fn(f64, f64) -> f64| {
            csr(dim, cells.iter().enumerate().map(|(i, &(n1, n2))| (i, i, c(f(n1 as f64, n2 as f64)))))
        };
        let a1 = csr(
            dim,
            cells
                .iter()
                .filter(|(n1, _)| *n1 > 0)
                .map(|&(n1, n2)| (grid.index(n1 - 1, n2), grid.index(n1, n2), c((n1 as f64).sqrt()))),
        );
        let a2 = csr(
            dim,
            cells
                .iter()
                .filter(|(_, n2)| *n2 > 0)
                .map(|&(n1, n2)| (grid.index(n1, n2 - 1), grid.index(n1, n2), c((n2 as f64).sqrt()))),
        );
        // a1^dag a2: (n1, n2) -> (n1 + 1, n2 - 1)
        let hop: Vec<(usize, usize, f64)> = cells
            .iter()
            .filter(|&&(n1, n2)| n2 > 0 && n1 < grid.n1_max)
            .map(|&(n1, n2)| {
                (grid.index(n1 + 1, n2 - 1), grid.index(n1, n2), ((n1 as f64 + 1.0) * n2 as f64).sqrt())
            })
            .collect();
        // a1^dag a2^dag: (n1, n2) -> (n1 + 1, n2 + 1)
        let pair: Vec<(usize, usize, f64)> = cells
            .iter()
            .filter(|&&(n1, n2)| n1 < grid.n1_max && n2 < grid.n2_max)
            .map(|&(n1, n2)| {
                (
                    grid.index(n1 + 1, n2 + 1),
                    grid.index(n1, n2),
                    ((n1 as f64 + 1.0) * (n2 as f64 + 1.0)).sqrt(),
                )
            })
            .collect();
        let sym = |v: &[(usize, usize, f64)], lower: Complex64, upper: Complex64| {
            csr(
                dim,
                v.iter()
                    .flat_map(|&(r, cc, x)| [(r, cc, lower * x), (cc, r, upper * x)]),
            )
        };
        ModeOperatorSet {
            grid,
            j1: sym(&hop, c(0.5), c(0.5)),
            j2: sym(&hop, ci(-0.5), ci(0.5)),
            j3: diag(&|n1, n2| 0.5 * (n1 - n2)),
            k1: sym(&pair, c(0.5), c(0.5)),
            k2: sym(&pair, ci(-0.5), ci(0.5)),
            k3: diag(&|n1, n2| 0.5 * (n1 + n2 + 1.0)),
            n_total: diag(&|n1, n2| n1 + n2),
            n_diff: diag(&|n1, n2| n1 - n2),
            a1,
            a2,
        }
    }

    pub fn generators(&self, group: Group) -> [&CsrMatrix<Complex64>; 3] {
        match group {
            Group::Su2 => [&self.j1, &self.j2, &self.j3],
            Group::Su11 => [&self.k1, &self.k2, &self.k3],
        }
    }
}

fn apply(op: &CsrMatrix<Complex64>, state: &TwoModeFockState) -> Result<DVector<Complex64>> {
    if op.nrows() != state.grid.dim() || op.ncols() != state.grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.grid.dim(),
            got: op.nrows(),
        });
    }
    let v = state.amplitudes();
    let mut out = DVector::zeros(op.nrows());
    for (r, row) in op.row_iter().enumerate() {
        out[r] = row.col_indices().iter().zip(row.values()).map(|(&c, x)| x * v[c]).sum();
    }
    Ok(out)
}

/// `<psi|O|psi>`.
pub fn fock_expectation(state: &TwoModeFockState, op: &CsrMatrix<Complex64>) -> Result<Complex64> {
    let w = apply(op, state)?;
    Ok(state.amplitudes().dotc(&w))
}

/// `<O^2> - <O>^2` for a Hermitian truncated operator.
pub fn fock_variance(state: &TwoModeFockState, op: &CsrMatrix<Complex64>) -> Result<f64> {
    let w = apply(op, state)?;
    let mean = state.amplitudes().dotc(&w).re;
    Ok(w.norm_squared() - mean * mean)
}

/// Means and covariances of a generator triple from the Fock grid.
pub fn fock_moments(state: &TwoModeFockState, ops: &ModeOperatorSet, group: Group) -> Result<MomentSummary> {
    if ops.grid != state.grid {
        return Err(invalid("ops", "operator set and state use different cutoffs"));
    }
    let phis: Vec<DVector<Complex64>> = ops
        .generators(group)
        .iter()
        .map(|op| apply(op, state))
        .collect::<Result<_>>()?;
    let psi = state.amplitudes();
    let mean = nalgebra::Vector3::from_fn(|a, _| psi.dotc(&phis[a]).re);
    let cov = nalgebra::Matrix3::from_fn(|a, b| phis[a].dotc(&phis[b]).re - mean[a] * mean[b]);
    Ok(MomentSummary {
        mean,
        covariance: 0.5 * (cov + cov.transpose()),
    })
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

fn coherent_column(alpha: Complex64, n_max: usize) -> Vec<Complex64> {
    let r = alpha.norm();
    (0..=n_max)
        .map(|n| {
            if r == 0.0 {
                return if n == 0 { Complex64::new(1.0, 0.0) } else { Complex64::default() };
            }
            let ln_mag = -0.5 * r * r + n as f64 * r.ln() - 0.5 * ln_factorial(n);
            Complex64::from_polar(ln_mag.exp(), n as f64 * alpha.arg())
        })
        .collect()
}

/// `|alpha> (x) |alpha'>` on `grid`, renormalized after truncation.
pub fn glauber_product_state(alpha: Complex64, alpha_prime: Complex64, grid: FockGrid) -> Result<TwoModeFockState> {
    let c1 = coherent_column(alpha, grid.n1_max);
    let c2 = coherent_column(alpha_prime, grid.n2_max);
    let amps = DVector::from_iterator(
        grid.dim(),
        (0..grid.dim()).map(|i| {
            let (n1, n2) = grid.levels(i);
            c1[n1] * c2[n2]
        }),
    );
    TwoModeFockState::new(grid, amps)?.check_tail(TAIL_TOLERANCE)
}

/// Chain of grid indices with fixed `n1 - n2 = d`, ordered by increasing `n2`.
fn diagonal_chain(grid: FockGrid, d: i64) -> Vec<(usize, usize)> {
    let start = (-d).max(0) as usize;
    let end = (grid.n2_max as i64).min(grid.n1_max as i64 - d);
    (start as i64..=end)
        .map(|n2| ((n2 + d) as usize, n2 as usize))
        .collect()
}

/// Orthogonal block `exp((beta/2)(K+ - K-))` on one fixed-difference chain.
fn squeeze_block(chain: &[(usize, usize)], beta: f64) -> DMatrix<f64> {
    let m = chain.len();
    let mut g = DMatrix::<f64>::zeros(m, m);
    for i in 0..m.saturating_sub(1) {
        let (n1, n2) = chain[i];
        let x = 0.5 * beta * ((n1 as f64 + 1.0) * (n2 as f64 + 1.0)).sqrt();
        g[(i + 1, i)] = x;
        g[(i, i + 1)] = -x;
    }
    g.exp()
}

fn chain_differences(grid: FockGrid) -> std::ops::RangeInclusive<i64> {
    -(grid.n2_max as i64)..=grid.n1_max as i64
}

/// Applies the four-wave mixer `exp((beta/2)(K+ - K-))` on the state's own
/// cutoffs. Each `n1 - n2` sector is exponentiated separately.
pub fn two_mode_squeeze(state: &TwoModeFockState, beta: f64) -> Result<TwoModeFockState> {
    if !beta.is_finite() {
        return Err(invalid("beta", "must be finite"));
    }
    let grid = state.grid;
    let sectors: Vec<(Vec<(usize, usize)>, Vec<Complex64>)> = chain_differences(grid)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&d| {
            let chain = diagonal_chain(grid, d);
            let u = squeeze_block(&chain, beta);
            let v: Vec<Complex64> = chain.iter().map(|&(n1, n2)| state.amps[grid.index(n1, n2)]).collect();
            let out = (0..chain.len())
                .map(|r| (0..chain.len()).map(|c| v[c] * u[(r, c)]).sum())
                .collect();
            (chain, out)
        })
        .collect();
    let mut amps = DVector::zeros(grid.dim());
    for (chain, vals) in sectors {
        for (&(n1, n2), v) in chain.iter().zip(vals) {
            amps[grid.index(n1, n2)] = v;
        }
    }
    TwoModeFockState::new(grid, amps)?.check_tail(TAIL_TOLERANCE)
}

/// The truncated mixer unitary as a sparse real matrix.
pub fn squeeze_operator(grid: FockGrid, beta: f64) -> CsrMatrix<f64> {
    let mut coo = CooMatrix::new(grid.dim(), grid.dim());
    for d in chain_differences(grid) {
        let chain = diagonal_chain(grid, d);
        let u = squeeze_block(&chain, beta);
        for (r, &(a1, a2)) in chain.iter().enumerate() {
            for (c, &(b1, b2)) in chain.iter().enumerate() {
                if u[(r, c)] != 0.0 {
                    coo.push(grid.index(a1, a2), grid.index(b1, b2), u[(r, c)]);
                }
            }
        }
    }
    CsrMatrix::from(&coo)
}

/// Largest deviation of `S^dag a1 S` from `cosh(beta/2) a1 + sinh(beta/2) a2^dag`
/// over matrix elements with both levels of both indices at most `interior`.
/// Only the sectors `|n1 - n2| <= interior + 1` are exponentiated.
pub fn squeeze_heisenberg_deviation(grid: FockGrid, beta: f64, interior: usize) -> f64 {
    let reach = interior as i64 + 1;
    let blocks: std::collections::HashMap<i64, (Vec<(usize, usize)>, DMatrix<f64>)> = (-reach..=reach)
        .map(|d| {
            let chain = diagonal_chain(grid, d);
            let u = squeeze_block(&chain, beta);
            (d, (chain, u))
        })
        .collect();
    let (ch, sh) = ((0.5 * beta).cosh(), (0.5 * beta).sinh());
    let mut worst = 0.0f64;
    for c1 in 0..=interior {
        for c2 in 0..=interior {
            let d = c1 as i64 - c2 as i64;
            let (chain, u) = &blocks[&d];
            let col = chain.iter().position(|&p| p == (c1, c2)).expect("interior cell lies on its chain");
            // a1 S |c>, which lives in sector d - 1
            let (target, ut) = &blocks[&(d - 1)];
            let mut w = vec![0.0; target.len()];
            for (i, &(m1, m2)) in chain.iter().enumerate() {
                if m1 == 0 {
                    continue;
                }
                if let Some(pos) = target.iter().position(|&p| p == (m1 - 1, m2)) {
                    w[pos] += (m1 as f64).sqrt() * u[(i, col)];
                }
            }
            for (row, &(r1, r2)) in target.iter().enumerate() {
                if r1 > interior || r2 > interior {
                    continue;
                }
                let got: f64 = (0..target.len()).map(|i| ut[(i, row)] * w[i]).sum();
                let mut want = 0.0;
                if r1 + 1 == c1 && r2 == c2 {
                    want += ch * (c1 as f64).sqrt();
                }
                if r1 == c1 && r2 == c2 + 1 {
                    want += sh * (r2 as f64).sqrt();
                }
                worst = worst.max((got - want).abs());
            }
        }
    }
    worst
}

/// Maps `|j,m> -> |j+m, j-m>` or `|k,n> -> |n+2k-1, n>`.
pub fn embed_irrep_state(state: &RepState, grid: FockGrid) -> Result<TwoModeFockState> {
    let mut amps = DVector::zeros(grid.dim());
    for (i, a) in state.amplitudes().iter().enumerate() {
        let (n1, n2) = match state.label() {
            IrrepLabel::Su2 { j } => {
                let two_j = j.doubled() as usize;
                (i, two_j - i)
            }
            IrrepLabel::Su11 { k, .. } => (i + k.doubled() as usize - 1, i),
        };
        if !grid.contains(n1, n2) {
            if a.norm() > 0.0 {
                return Err(Error::Truncation(format!(
                    "basis state {i} maps to |{n1},{n2}>, outside cutoffs ({}, {})",
                    grid.n1_max, grid.n2_max
                )));
            }
            continue;
        }
        amps[grid.index(n1, n2)] = *a;
    }
    TwoModeFockState::new(grid, amps)
}

/// Smallest grid holding the support of an irrep state.
pub fn embedding_grid(label: IrrepLabel) -> FockGrid {
    match label {
        IrrepLabel::Su2 { j } => FockGrid::square(j.doubled() as usize),
        IrrepLabel::Su11 { k, n_max } => FockGrid::new(n_max + k.doubled() as usize - 1, n_max),
    }
}

/// `Var(N)` for SU(2) or `Var(N1 - N2)` for SU(1,1).
pub fn conserved_quantity_check(state: &TwoModeFockState, group: Group) -> f64 {
    let grid = state.grid;
    let (mut m1, mut m2) = (0.0, 0.0);
    for (i, a) in state.amps.iter().enumerate() {
        let (n1, n2) = grid.levels(i);
        let q = match group {
            Group::Su2 => (n1 + n2) as f64,
            Group::Su11 => n1 as f64 - n2 as f64,
        };
        let p = a.norm_sqr();
        m1 += p * q;
        m2 += p * q * q;
    }
    m2 - m1 * m1
}
