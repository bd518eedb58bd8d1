use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use wp4::transform::atom_sample;
use wp4::{
    matching_pursuit, orthogonal_matching_pursuit, FrequencyGrid, FrequencySignal, PhasePoint, PursuitConfig,
    SplineWindow,
};

fn grid() -> FrequencyGrid {
    FrequencyGrid::new(4.0, 1.0, 256).unwrap()
}

fn window() -> SplineWindow {
    SplineWindow::triangle(24.0, 40.0, 56.0, 1.0).unwrap()
}

fn dot(a: &[Complex64], b: &[Complex64], spacing: f64) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<Complex64>() * spacing
}

fn energy(a: &[Complex64], spacing: f64) -> f64 {
    dot(a, a, spacing).re
}

fn planted() -> impl Strategy<Value = Vec<(f64, f64, f64, f64)>> {
    prop::collection::vec((0.1..0.9f64, -0.5..0.5f64, 0.3..1.0f64, 0.0..TAU), 2..4)
}

fn signal(atoms: &[(f64, f64, f64, f64)]) -> FrequencySignal {
    let grid = grid();
    let f = window();
    let mut samples = vec![Complex64::new(0.0, 0.0); grid.len];
    for &(g1, g2, amp, phase) in atoms {
        let c = Complex64::from_polar(amp, phase);
        for (s, v) in samples.iter_mut().zip(atom_sample(&f, PhasePoint::new(g1, g2), &grid)) {
            *s += c * v;
        }
    }
    FrequencySignal::new(grid, samples).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn mp_energy_bookkeeping(atoms in planted()) {
        let s = signal(&atoms);
        let r = grid().spacing;
        let d = matching_pursuit(&s, &window(), &PursuitConfig { atoms: 8, ..Default::default() }).unwrap();
        let norms = &d.residual_norms;
        prop_assert!((norms[0] - energy(s.samples(), r).sqrt()).abs() <= 1e-12 * norms[0]);
        for (k, c) in d.unit_coefficients().iter().enumerate() {
            prop_assert!(norms[k + 1] <= norms[k] * (1.0 + 1e-12));
            let drop = norms[k].powi(2) - norms[k + 1].powi(2);
            prop_assert!((drop - c.norm_sqr()).abs() <= 1e-8 * norms[0].powi(2));
        }
        let rebuilt: Vec<Complex64> =
            d.synthesize().samples().iter().zip(d.residual.samples()).map(|(a, b)| a + b).collect();
        let err: Vec<Complex64> = rebuilt.iter().zip(s.samples()).map(|(a, b)| a - b).collect();
        prop_assert!(energy(&err, r).sqrt() <= 1e-10 * norms[0]);
    }

    #[test]
    fn omp_atoms_are_distinct_and_residual_orthogonal(atoms in planted()) {
        let s = signal(&atoms);
        let grid = grid();
        let f = window();
        let d = orthogonal_matching_pursuit(&s, &f, &PursuitConfig { atoms: 6, ..Default::default() }).unwrap();
        for w in d.residual_norms.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
        for (i, a) in d.atoms.iter().enumerate() {
            for b in &d.atoms[i + 1..] {
                prop_assert!(a.point != b.point, "repeated atom at {:?}", a.point);
            }
        }
        let scale = d.residual_norms[0];
        for a in &d.atoms {
            let v = atom_sample(&f, a.point, &grid);
            let c = dot(d.residual.samples(), &v, grid.spacing);
            prop_assert!(c.norm() <= 1e-6 * scale * energy(&v, grid.spacing).sqrt());
        }
    }
}
