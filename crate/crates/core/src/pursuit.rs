//! Matching pursuit and orthogonal matching pursuit with searched atoms.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Result, Wp4Error};
use crate::search::{find_atom, SearchConfig};
use crate::signal::{FrequencyGrid, FrequencySignal};
use crate::transform::{synthesize, Atom, SparseAtom};
use crate::window::SplineWindow;

#[derive(Clone, Debug, PartialEq)]
pub struct PursuitConfig {
    pub atoms: usize,
    pub search: SearchConfig,
    /// Stop once the residual norm falls below this fraction of `‖s‖`.
    pub tolerance: f64,
}

impl Default for PursuitConfig {
    fn default() -> Self {
        Self { atoms: 10, search: SearchConfig::default(), tolerance: 1e-12 }
    }
}

/// Result of a pursuit. Coefficients multiply the sampled atoms of `window`
/// (normalized to unit signal norm).
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub window: SplineWindow,
    pub grid: FrequencyGrid,
    pub atoms: Vec<Atom>,
    /// Discrete norms `‖v_k‖` of the sampled atoms.
    pub atom_norms: Vec<f64>,
    /// `‖r_0‖, ‖r_1‖, …`; one more entry than atoms.
    pub residual_norms: Vec<f64>,
    pub residual: FrequencySignal,
}

impl Decomposition {
    /// `Σ c_k v_k` on the decomposition grid.
    pub fn synthesize(&self) -> FrequencySignal {
        synthesize(&self.atoms, &self.window, &self.grid)
    }

    /// Coefficients with respect to the unit-norm sampled atoms, `c_k ‖v_k‖`.
    pub fn unit_coefficients(&self) -> Vec<Complex64> {
        self.atoms.iter().zip(&self.atom_norms).map(|(a, n)| a.coeff * *n).collect()
    }
}

fn prepare(s: &FrequencySignal, f: &SplineWindow) -> Result<SplineWindow> {
    if s.norm() == 0.0 {
        return Err(Wp4Error::InvalidSignal("signal is identically zero".into()));
    }
    f.normalized_signal()
}

/// Greedy pursuit: each step subtracts the projection onto the searched atom.
pub fn matching_pursuit(s: &FrequencySignal, f: &SplineWindow, cfg: &PursuitConfig) -> Result<Decomposition> {
    let window = prepare(s, f)?;
    let grid = s.grid();
    let stop = cfg.tolerance * s.norm();
    let mut residual = s.clone();
    let mut samples = s.samples().to_vec();
    let mut atoms = Vec::with_capacity(cfg.atoms);
    let mut atom_norms = Vec::with_capacity(cfg.atoms);
    let mut residual_norms = vec![s.norm()];
    while atoms.len() < cfg.atoms && residual.norm() > stop {
        let (found, _) = find_atom(&residual, &window, &cfg.search)?;
        let v = SparseAtom::new(&window, found.point, &grid);
        v.accumulate(&mut samples, -found.coeff);
        residual = residual.with_samples(samples.clone())?;
        atoms.push(Atom { point: found.point, coeff: found.coeff });
        atom_norms.push(v.norm(grid.spacing));
        residual_norms.push(residual.norm());
    }
    Ok(Decomposition { window, grid, atoms, atom_norms, residual_norms, residual })
}

/// Least-squares coefficients of `s` over `atoms`, via regularized normal equations.
fn project(s: &FrequencySignal, atoms: &[SparseAtom]) -> Result<Vec<Complex64>> {
    let r = s.grid().spacing;
    let k = atoms.len();
    let dense: Vec<Vec<Complex64>> = atoms
        .iter()
        .map(|a| {
            let mut v = vec![Complex64::new(0.0, 0.0); s.len()];
            a.accumulate(&mut v, Complex64::new(1.0, 0.0));
            v
        })
        .collect();
    let ip = |x: &[Complex64], y: &[Complex64]| x.iter().zip(y).map(|(a, b)| a * b.conj()).sum::<Complex64>() * r;
    let mut gram = DMatrix::from_fn(k, k, |row, col| ip(&dense[col], &dense[row]));
    let scale = (0..k).map(|i| gram[(i, i)].re).fold(0.0, f64::max);
    for i in 0..k {
        gram[(i, i)] += 1e-10 * scale;
    }
    let rhs = DVector::from_fn(k, |row, _| ip(s.samples(), &dense[row]));
    let c = gram.lu().solve(&rhs).ok_or_else(|| Wp4Error::Numerical("singular Gram matrix".into()))?;
    Ok(c.iter().copied().collect())
}

/// Pursuit that re-solves all coefficients by least squares after each selection.
pub fn orthogonal_matching_pursuit(
    s: &FrequencySignal,
    f: &SplineWindow,
    cfg: &PursuitConfig,
) -> Result<Decomposition> {
    let window = prepare(s, f)?;
    let grid = s.grid();
    let stop = cfg.tolerance * s.norm();
    let mut residual = s.clone();
    let mut points = Vec::with_capacity(cfg.atoms);
    let mut sparse = Vec::with_capacity(cfg.atoms);
    let mut coeffs = Vec::new();
    let mut residual_norms = vec![s.norm()];
    while points.len() < cfg.atoms && residual.norm() > stop {
        let (found, _) = find_atom(&residual, &window, &cfg.search)?;
        points.push(found.point);
        sparse.push(SparseAtom::new(&window, found.point, &grid));
        coeffs = project(s, &sparse)?;
        let mut samples = s.samples().to_vec();
        for (a, c) in sparse.iter().zip(&coeffs) {
            a.accumulate(&mut samples, -c);
        }
        residual = residual.with_samples(samples)?;
        residual_norms.push(residual.norm());
    }
    let atoms = points.iter().zip(&coeffs).map(|(&point, &coeff)| Atom { point, coeff }).collect();
    let atom_norms = sparse.iter().map(|a| a.norm(grid.spacing)).collect();
    Ok(Decomposition { window, grid, atoms, atom_norms, residual_norms, residual })
}
