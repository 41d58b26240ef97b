//! Brute-force checks that do not share code paths with the closed forms:
//! dense-grid best responses, ε-Nash certificates, equilibrium scans, and a
//! least-squares sinusoid fit.

use crate::reductions::SinusoidalPayoff;

/// Largest grid per axis accepted by [`nash_scan`].
pub const SCAN_GRID_LIMIT: usize = 2000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("scan grid {grid_n} outside 2..={limit}")]
    CostGuard { grid_n: usize, limit: usize },
    #[error("sinusoid fit needs at least 3 samples with distinct x mod π, got {distinct}")]
    TooFewSamples { distinct: usize },
    #[error("sinusoid fit normal equations are singular")]
    RankDeficient,
}

/// Two-player payoffs over a pair of real strategies.
pub trait TwoPlayerPayoff {
    /// Payoff of `player` (0 or 1) at `(theta, phi)`.
    fn payoff(&self, player: usize, theta: f64, phi: f64) -> f64;
}

impl<F1, F2> TwoPlayerPayoff for (F1, F2)
where
    F1: Fn(f64, f64) -> f64,
    F2: Fn(f64, f64) -> f64,
{
    fn payoff(&self, player: usize, theta: f64, phi: f64) -> f64 {
        match player {
            0 => (self.0)(theta, phi),
            _ => (self.1)(theta, phi),
        }
    }
}

/// Rectangle of strategy pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub theta: (f64, f64),
    pub phi: (f64, f64),
}

impl Domain {
    pub fn square(lo: f64, hi: f64) -> Self {
        Self {
            theta: (lo, hi),
            phi: (lo, hi),
        }
    }

    pub fn contains(&self, (theta, phi): (f64, f64), slack: f64) -> bool {
        theta >= self.theta.0 - slack
            && theta <= self.theta.1 + slack
            && phi >= self.phi.0 - slack
            && phi <= self.phi.1 + slack
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn grid_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// Grid maximizer of `f` on `[lo, hi]`; ties go to the smaller argument.
pub fn grid_argmax(f: impl Fn(f64) -> f64, (lo, hi): (f64, f64), grid_n: usize) -> (f64, f64) {
    let mut best = (lo, f64::NEG_INFINITY);
    for x in grid_points(lo, hi, grid_n.max(2)) {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Result of checking unilateral grid deviations from one strategy pair.
#[derive(Debug, Clone, PartialEq)]
pub struct NashCertificate {
    pub epsilon: f64,
    pub grid_n: usize,
    /// Best grid improvement available to each player, floored at zero.
    pub max_unilateral_gain: [f64; 2],
    pub pass: bool,
    pub checked_point: (f64, f64),
    /// `epsilon + L·step` once a Lipschitz bound `L` is attached: a bound on
    /// the gain from off-grid deviations too.
    pub effective_epsilon: Option<f64>,
    step: f64,
}

impl NashCertificate {
    pub fn grid_step(&self) -> f64 {
        self.step
    }

    pub fn with_lipschitz(mut self, lipschitz: f64) -> Self {
        self.effective_epsilon = Some(self.epsilon + lipschitz * self.step);
        self
    }

    pub fn worst_gain(&self) -> f64 {
        self.max_unilateral_gain[0].max(self.max_unilateral_gain[1])
    }
}

pub fn verify_nash(
    game: &impl TwoPlayerPayoff,
    point: (f64, f64),
    domain: Domain,
    epsilon: f64,
    grid_n: usize,
) -> NashCertificate {
    let grid_n = grid_n.max(2);
    let (theta0, phi0) = point;
    let base = [game.payoff(0, theta0, phi0), game.payoff(1, theta0, phi0)];
    let (_, best1) = grid_argmax(|t| game.payoff(0, t, phi0), domain.theta, grid_n);
    let (_, best2) = grid_argmax(|p| game.payoff(1, theta0, p), domain.phi, grid_n);
    let gains = [(best1 - base[0]).max(0.0), (best2 - base[1]).max(0.0)];
    let step =
        ((domain.theta.1 - domain.theta.0).max(domain.phi.1 - domain.phi.0)) / (grid_n - 1) as f64;
    NashCertificate {
        epsilon,
        grid_n,
        max_unilateral_gain: gains,
        pass: gains[0] <= epsilon && gains[1] <= epsilon,
        checked_point: point,
        effective_epsilon: None,
        step,
    }
}

/// A grid node that is an ε-equilibrium against grid deviations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanHit {
    pub i: usize,
    pub j: usize,
    pub theta: f64,
    pub phi: f64,
}

/// Every node of a `grid_n × grid_n` grid where neither player gains more
/// than `epsilon` by moving to another node along their own axis.
pub fn nash_scan(
    game: &impl TwoPlayerPayoff,
    domain: Domain,
    epsilon: f64,
    grid_n: usize,
) -> Result<Vec<ScanHit>, OracleError> {
    if !(2..=SCAN_GRID_LIMIT).contains(&grid_n) {
        return Err(OracleError::CostGuard {
            grid_n,
            limit: SCAN_GRID_LIMIT,
        });
    }
    let thetas = grid_points(domain.theta.0, domain.theta.1, grid_n);
    let phis = grid_points(domain.phi.0, domain.phi.1, grid_n);
    let n = grid_n;
    let mut f1 = vec![0.0; n * n];
    let mut f2 = vec![0.0; n * n];
    for (i, &t) in thetas.iter().enumerate() {
        for (j, &p) in phis.iter().enumerate() {
            f1[i * n + j] = game.payoff(0, t, p);
            f2[i * n + j] = game.payoff(1, t, p);
        }
    }
    // player 1 deviates along i for fixed j, player 2 along j for fixed i
    let best1: Vec<f64> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| f1[i * n + j])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let best2: Vec<f64> = (0..n)
        .map(|i| {
            f2[i * n..(i + 1) * n]
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let mut hits = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if best1[j] - f1[i * n + j] <= epsilon && best2[i] - f2[i * n + j] <= epsilon {
                hits.push(ScanHit {
                    i,
                    j,
                    theta: thetas[i],
                    phi: phis[j],
                });
            }
        }
    }
    Ok(hits)
}

/// Least-squares `offset + α sin 2x + β cos 2x` through the samples, with the
/// largest absolute residual.
pub fn fit_sinusoid(samples: &[(f64, f64)]) -> Result<(SinusoidalPayoff, f64), OracleError> {
    let mut reduced: Vec<f64> = samples
        .iter()
        .map(|&(x, _)| x.rem_euclid(std::f64::consts::PI))
        .collect();
    reduced.sort_by(f64::total_cmp);
    reduced.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if reduced.len() >= 2
        && (reduced[0] + std::f64::consts::PI - reduced[reduced.len() - 1]).abs() < 1e-12
    {
        reduced.pop();
    }
    if reduced.len() < 3 {
        return Err(OracleError::TooFewSamples {
            distinct: reduced.len(),
        });
    }

    let basis = |x: f64| [1.0, (2.0 * x).sin(), (2.0 * x).cos()];
    let mut normal = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for &(x, y) in samples {
        let b = basis(x);
        for r in 0..3 {
            rhs[r] += b[r] * y;
            for c in 0..3 {
                normal[r][c] += b[r] * b[c];
            }
        }
    }
    let coeffs = solve3(normal, rhs).ok_or(OracleError::RankDeficient)?;
    let fit = SinusoidalPayoff::new(coeffs[0], coeffs[1], coeffs[2]);
    let residual = samples
        .iter()
        .map(|&(x, y)| (fit.eval(x) - y).abs())
        .fold(0.0, f64::max);
    Ok((fit, residual))
}

/// Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    let scale = a.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for col in 0..3 {
        let pivot = (col..3).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[pivot][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in (col + 1)..3 {
            let m = a[r][col] / a[col][col];
            let pivot_row = a[col];
            for (x, p) in a[r].iter_mut().zip(pivot_row).skip(col) {
                *x -= m * p;
            }
            b[r] -= m * b[col];
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let s: f64 = ((r + 1)..3).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}
