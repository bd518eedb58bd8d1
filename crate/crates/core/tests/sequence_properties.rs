use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use wp4::filter::TrigFilter;
use wp4::{FrequencyGrid, FrequencySignal, PhasePoint, SlopeBand, SplineSequence, SplineWindow};

const LEN: usize = 24;
const MARGIN: usize = 5;

fn grid() -> FrequencyGrid {
    FrequencyGrid::new(12.0, 1.0, LEN).unwrap()
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

/// A cross-section vanishing at both ends of its support.
fn section() -> impl Strategy<Value = Vec<(f64, Complex64)>> {
    (2.0..20.0f64, prop::collection::vec((0.2..6.0f64, complex()), 1..5), 0.2..6.0f64).prop_map(
        |(start, inner, tail)| {
            let zero = Complex64::new(0.0, 0.0);
            let mut x = start;
            let mut nodes = vec![(x, zero)];
            for (dx, v) in inner {
                x += dx;
                nodes.push((x, v));
            }
            nodes.push((x + tail, zero));
            nodes
        },
    )
}

/// Sequences whose cross-sections stay `MARGIN` indices away from both grid ends.
fn sequence() -> impl Strategy<Value = SplineSequence> {
    prop::collection::vec(prop::option::weighted(0.7, section()), LEN - 2 * MARGIN).prop_map(|inner| {
        let sections = std::iter::repeat_n(None, MARGIN).chain(inner).chain(std::iter::repeat_n(None, MARGIN)).collect();
        SplineSequence::from_sections(grid(), sections).unwrap()
    })
}

fn point() -> impl Strategy<Value = PhasePoint> {
    (-1.0..1.0f64, -0.8..0.8f64).prop_map(|(g1, g2)| PhasePoint::new(g1, g2))
}

/// Composite Simpson quadrature of `r Σ ∫ |h|² / x dx`.
fn quadrature_norm(seq: &SplineSequence) -> f64 {
    let mut total = 0.0;
    for (_, xs, vs) in seq.sections() {
        for i in 0..xs.len() - 1 {
            let m = 400;
            let step = (xs[i + 1] - xs[i]) / m as f64;
            let f = |k: usize| {
                let t = k as f64 / m as f64;
                let v = vs[i] * (1.0 - t) + vs[i + 1] * t;
                v.norm_sqr() / (xs[i] + k as f64 * step)
            };
            let odd: f64 = (1..m).step_by(2).map(f).sum();
            let even: f64 = (2..m).step_by(2).map(f).sum();
            total += step / 3.0 * (f(0) + 4.0 * odd + 2.0 * even + f(m));
        }
    }
    (seq.grid().spacing * total).sqrt()
}

/// `r Σ_n e^{2πi g₁ ω_n} e^{g₂/2} ĥ_n(e^{g₂} ω_n)` by direct interpolation.
fn direct_coeff(seq: &SplineSequence, g: PhasePoint) -> Complex64 {
    let grid = seq.grid();
    let mut sum = Complex64::new(0.0, 0.0);
    for (n, xs, vs) in seq.sections() {
        let w = grid.freq(n);
        let x = g.g2.exp() * w;
        if x < xs[0] || x > xs[xs.len() - 1] {
            continue;
        }
        let i = xs.windows(2).position(|p| x <= p[1]).unwrap();
        let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
        let h = vs[i] * (1.0 - t) + vs[i + 1] * t;
        sum += Complex64::from_polar(1.0, TAU * g.g1 * w) * h;
    }
    sum * (0.5 * g.g2).exp() * grid.spacing
}

fn distance(a: &SplineSequence, b: &SplineSequence) -> f64 {
    a.combine(b, Complex64::new(-1.0, 0.0)).norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_matches_quadrature(f in sequence()) {
        let want = quadrature_norm(&f);
        prop_assert!((f.norm() - want).abs() <= 1e-6 * want.max(1e-12));
    }

    #[test]
    fn scale_bands_partition_energy(f in sequence(), a in 0.1..1.0f64, w1 in 0.05..1.0f64, w2 in 0.05..1.0f64) {
        let whole = SlopeBand::new(a, a + w1 + w2).unwrap();
        let low = SlopeBand::new(a, a + w1).unwrap();
        let high = SlopeBand::new(a + w1, a + w1 + w2).unwrap();
        let e = |b: &SlopeBand| f.scale_pass(b).norm().powi(2);
        let sum = e(&low) + e(&high);
        prop_assert!((sum - e(&whole)).abs() <= 1e-10 * f.norm().powi(2).max(1e-300));
        for b in [&whole, &low, &high] {
            prop_assert!((f.scale_pass_norm(b) - f.scale_pass(b).norm()).abs() <= 1e-10 * f.norm().max(1e-300));
        }
    }

    #[test]
    fn time_shift_is_isometric_and_modulates(f in sequence(), steps in -4i64..=4, g in point()) {
        let (shifted, dropped) = f.time_shift(steps);
        prop_assert_eq!(dropped, 0);
        prop_assert!((shifted.norm() - f.norm()).abs() <= 1e-12 * f.norm().max(1e-300));
        let want = direct_coeff(&f, g) * Complex64::from_polar(1.0, TAU * g.g1 * steps as f64 * grid().spacing);
        prop_assert!((direct_coeff(&shifted, g) - want).norm() <= 1e-10 * (1.0 + want.norm()));
    }

    #[test]
    fn combine_is_linear(f in sequence(), h in sequence(), c in complex(), g in point()) {
        let sum = f.combine(&h, c);
        let want = direct_coeff(&f, g) + c * direct_coeff(&h, g);
        prop_assert!((sum.wavelet_coeff(g) - want).norm() <= 1e-10 * (1.0 + want.norm()));
        let added = f.add(&h).unwrap();
        prop_assert!(distance(&added, &f.combine(&h, Complex64::new(1.0, 0.0))) <= 1e-12 * (1.0 + added.norm()));
    }

    #[test]
    fn shifts_preserve_slopes(f in sequence(), steps in -4i64..=4, a in 0.2..1.0f64, w in 0.1..1.0f64) {
        let band = SlopeBand::new(a, a + w).unwrap();
        let one = f.scale_pass(&band).time_shift(steps).0;
        let two = f.time_shift(steps).0.scale_pass(&band);
        prop_assert!(distance(&one, &two) <= 1e-9 * (1.0 + f.norm()));
    }

    #[test]
    fn complementary_time_passes_sum_to_identity(f in sequence(), order in 1usize..6, g in point()) {
        let keep = f.time_pass(&TrigFilter::indicator(order, 0, 0).unwrap());
        let drop = f.time_pass(&TrigFilter::indicator(order, 0, 1).unwrap());
        let want = direct_coeff(&f, g);
        prop_assert!((keep.wavelet_coeff(g) + drop.wavelet_coeff(g) - want).norm() <= 1e-10 * (1.0 + want.norm()));
    }

    #[test]
    fn wavelet_coeff_matches_direct_interpolation(f in sequence(), g in point()) {
        let want = direct_coeff(&f, g);
        prop_assert!((f.wavelet_coeff(g) - want).norm() <= 1e-12 * (1.0 + want.norm()));
    }
}

#[test]
fn tensor_coefficient_is_the_atom_inner_product() {
    let grid = FrequencyGrid::new(3.0, 0.5, 200).unwrap();
    let samples: Vec<Complex64> =
        (0..grid.len).map(|n| Complex64::from_polar((-(n as f64 - 90.0).powi(2) / 800.0).exp(), 0.37 * n as f64)).collect();
    let s = FrequencySignal::new(grid, samples.clone()).unwrap();
    let f = SplineWindow::triangle(20.0, 45.0, 70.0, 2.0).unwrap();
    let tri = |x: f64| {
        if x <= 20.0 || x >= 70.0 {
            0.0
        } else if x <= 45.0 {
            2.0 * (x - 20.0) / 25.0
        } else {
            2.0 * (70.0 - x) / 25.0
        }
    };
    let seq = SplineSequence::tensor(&f, &s);
    for g in [PhasePoint::new(0.3, 0.1), PhasePoint::new(-0.7, -0.4), PhasePoint::new(1.9, 0.55)] {
        let want: Complex64 = (0..grid.len)
            .map(|n| {
                let w = grid.freq(n);
                let atom = Complex64::from_polar((0.5 * g.g2).exp() * tri(g.g2.exp() * w), -TAU * g.g1 * w);
                samples[n] * atom.conj()
            })
            .sum::<Complex64>()
            * grid.spacing;
        assert!((seq.wavelet_coeff(g) - want).norm() <= 1e-12 * want.norm().max(1.0));
    }
}
