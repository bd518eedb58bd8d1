//! Exact integrals and interpolation for piecewise-linear complex functions.

use num_complex::Complex64;

/// Integral of `|v(x)|^2` over one linear segment from `(x0, v0)` to `(x1, v1)`.
pub fn segment_energy(x0: f64, x1: f64, v0: Complex64, v1: Complex64) -> f64 {
    let h = x1 - x0;
    let d = v1 - v0;
    let p = v0.norm_sqr();
    let q = 2.0 * (v0.conj() * d).re;
    let s = d.norm_sqr();
    h * (p + q / 2.0 + s / 3.0)
}

/// Integral of `|v(x)|^2 / x` over one linear segment, `0 < x0 < x1`.
///
/// Written as `(h/x0) * (p*phi0 + q*phi1 + s*phi2)` with
/// `phi_k(e) = int_0^1 t^k / (1 + e t) dt`, `e = h/x0`, so that short segments
/// far from the origin do not lose precision to cancellation.
pub fn segment_energy_weighted(x0: f64, x1: f64, v0: Complex64, v1: Complex64) -> f64 {
    let h = x1 - x0;
    if h <= 0.0 {
        return 0.0;
    }
    let d = v1 - v0;
    let p = v0.norm_sqr();
    let q = 2.0 * (v0.conj() * d).re;
    let s = d.norm_sqr();
    let eps = h / x0;
    let [phi0, phi1, phi2] = phi(eps);
    (h / x0) * (p * phi0 + q * phi1 + s * phi2)
}

fn phi(eps: f64) -> [f64; 3] {
    if eps < 0.25 {
        let mut out = [0.0; 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut pow = 1.0;
            let mut acc = 0.0;
            for m in 0..200 {
                let term = pow / (k + m + 1) as f64;
                acc += term;
                if term.abs() < 1e-18 * acc.abs() {
                    break;
                }
                pow *= -eps;
            }
            *slot = acc;
        }
        out
    } else {
        let phi0 = eps.ln_1p() / eps;
        let phi1 = (1.0 - phi0) / eps;
        let phi2 = (0.5 - phi1) / eps;
        [phi0, phi1, phi2]
    }
}

/// Piecewise-linear interpolation of `(xs, vs)` at `x`; zero outside `[xs[0], xs[last]]`.
pub fn interp(xs: &[f64], vs: &[Complex64], x: f64) -> Complex64 {
    let n = xs.len();
    if n == 0 || x < xs[0] || x > xs[n - 1] {
        return Complex64::new(0.0, 0.0);
    }
    // first index with xs[i] > x
    let i = xs.partition_point(|&a| a <= x);
    if i == 0 {
        return vs[0];
    }
    if i >= n {
        return vs[n - 1];
    }
    let (x0, x1) = (xs[i - 1], xs[i]);
    if x == x0 {
        return vs[i - 1];
    }
    let t = (x - x0) / (x1 - x0);
    vs[i - 1] + (vs[i] - vs[i - 1]) * t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn riemann_weighted(x0: f64, x1: f64, v0: Complex64, v1: Complex64, n: usize) -> f64 {
        let h = (x1 - x0) / n as f64;
        (0..n)
            .map(|i| {
                let x = x0 + (i as f64 + 0.5) * h;
                let v = v0 + (v1 - v0) * ((x - x0) / (x1 - x0));
                v.norm_sqr() / x * h
            })
            .sum()
    }

    #[test]
    fn weighted_matches_midpoint_rule() {
        let cases = [
            (1.0, 2.0, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
            (2.0, 3.0, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            (100.0, 100.5, Complex64::new(0.3, -1.0), Complex64::new(-2.0, 0.5)),
            (0.1, 5.0, Complex64::new(1.0, 1.0), Complex64::new(2.0, -1.0)),
        ];
        for (x0, x1, v0, v1) in cases {
            let exact = segment_energy_weighted(x0, x1, v0, v1);
            let approx = riemann_weighted(x0, x1, v0, v1, 200_000);
            assert!((exact - approx).abs() < 1e-8 * approx.abs().max(1.0), "{exact} {approx}");
        }
    }

    #[test]
    fn series_and_closed_form_agree_at_switch() {
        let below = phi(0.25 - 1e-12);
        let above = phi(0.25);
        for k in 0..3 {
            assert!((below[k] - above[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn tiny_segment_far_from_origin_stays_accurate() {
        // for constant v the exact value is |v|^2 ln(1 + h/x0)
        let (x0, x1) = (1.0e4, 1.0e4 + 1e-3);
        let v = Complex64::new(1.0, 0.0);
        let got = segment_energy_weighted(x0, x1, v, v);
        let want = ((x1 - x0) / x0).ln_1p();
        assert!((got - want).abs() < 1e-14 * want);
    }

    #[test]
    fn interp_edges() {
        let xs = [1.0, 2.0, 3.0];
        let vs = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert_eq!(interp(&xs, &vs, 0.5), Complex64::new(0.0, 0.0));
        assert_eq!(interp(&xs, &vs, 2.0), Complex64::new(1.0, 0.0));
        assert!((interp(&xs, &vs, 2.5).re - 0.5).abs() < 1e-15);
        assert_eq!(interp(&xs, &vs, 3.0), Complex64::new(0.0, 0.0));
    }
}
