//! Modified Bessel functions of the first kind.
//!
//! The merge-rule normalization sqrt(2*pi*J) e^{-J} I0(J) and the character
//! expansion of face weights both need I_k at couplings ranging from O(0.1)
//! up to 1e4, so everything is provided in exponentially scaled form as well.

/// e^{-|x|} I0(x).
pub fn i0_scaled(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 15.0 {
        i0_series(ax) * (-ax).exp()
    } else {
        asymptotic_scaled(ax, 0.0)
    }
}

/// e^{-|x|} I1(x), with the sign of x.
pub fn i1_scaled(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < 15.0 {
        i1_series(ax) * (-ax).exp()
    } else {
        asymptotic_scaled(ax, 4.0)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// I0(x). Overflows for x beyond ~709; use [`i0_scaled`] or [`ln_i0`] there.
pub fn i0(x: f64) -> f64 {
    i0_scaled(x) * x.abs().exp()
}

/// I1(x).
pub fn i1(x: f64) -> f64 {
    i1_scaled(x) * x.abs().exp()
}

/// ln I0(x), stable for large x.
pub fn ln_i0(x: f64) -> f64 {
    let ax = x.abs();
    ax + i0_scaled(ax).ln()
}

/// Ratios I_k(x)/I_0(x) for k = 0..=kmax by Miller's downward recurrence.
///
/// For x = 0 the ratios are (1, 0, 0, ...).
pub fn i_ratios(x: f64, kmax: usize) -> Vec<f64> {
    assert!(x >= 0.0, "i_ratios wants x >= 0");
    if x == 0.0 {
        let mut r = vec![0.0; kmax + 1];
        r[0] = 1.0;
        return r;
    }
    // Start far enough above kmax that the downward recurrence has locked
    // onto the minimal solution by the time it reaches kmax.
    let start = kmax + 16 + (2.0 * (x.max(1.0)).sqrt()) as usize + kmax / 2;
    let mut above = 0.0_f64;
    let mut here = 1e-300_f64;
    let mut out = vec![0.0; kmax + 1];
    for k in (0..=start).rev() {
        let below = above + (2.0 * (k as f64 + 1.0) / x) * here;
        above = here;
        here = below;
        if k <= kmax {
            out[k] = here;
        }
        // Rescale to dodge overflow while iterating.
        if here.abs() > 1e250 {
            let s = 1e-250;
            here *= s;
            above *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    let norm = out[0];
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// The merge-rule normalization sqrt(2*pi*J) e^{-J} I0(J); tends to 1 as
/// J grows, with leading correction 1/(8J).
pub fn merge_normalization(j: f64) -> f64 {
    (2.0 * std::f64::consts::PI * j).sqrt() * i0_scaled(j)
}

fn i0_series(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..200 {
        term *= q / ((k * k) as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

fn i1_series(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = x / 2.0;
    let mut sum = term;
    for k in 1..200 {
        term *= q / ((k * (k + 1)) as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

// Large-x expansion of e^{-x} I_nu(x) with mu = 4 nu^2.
fn asymptotic_scaled(x: f64, mu: f64) -> f64 {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut prev = f64::INFINITY;
    for k in 1..40 {
        let kf = k as f64;
        term *= ((2.0 * kf - 1.0).powi(2) - mu) / (8.0 * kf * x);
        if term.abs() > prev {
            break; // asymptotic series started diverging
        }
        sum += term;
        prev = term.abs();
        if term.abs() < 1e-17 {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: I_k(x) e^{-x} = (1/pi) \int_0^pi e^{x(cos t - 1)} cos(k t) dt
    // by Simpson's rule on a fine grid.
    fn oracle_ik_scaled(x: f64, k: usize) -> f64 {
        let n = 40_000; // even
        let h = std::f64::consts::PI / n as f64;
        let f = |t: f64| (x * (t.cos() - 1.0)).exp() * ((k as f64) * t).cos();
        let mut s = f(0.0) + f(std::f64::consts::PI);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        s * h / 3.0 / std::f64::consts::PI
    }

    #[test]
    fn i0_matches_quadrature_oracle() {
        for &x in &[0.0, 0.3, 1.0, 2.0, 7.5, 14.9, 15.1, 50.0, 200.0, 1.0e4] {
            let want = oracle_ik_scaled(x, 0);
            let got = i0_scaled(x);
            assert!(
                (got - want).abs() <= 1e-12 * want.max(1.0),
                "x={x}: got {got}, oracle {want}"
            );
        }
    }

    #[test]
    fn i1_matches_quadrature_oracle() {
        for &x in &[0.3, 1.0, 2.0, 20.0, 300.0] {
            let want = oracle_ik_scaled(x, 1);
            let got = i1_scaled(x);
            assert!(
                (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                "x={x}: got {got}, oracle {want}"
            );
        }
    }

    #[test]
    fn unscaled_values() {
        // I0(1) = 1.2660658777520083..., I1(1) = 0.5651591039924850...
        assert!((i0(1.0) - 1.2660658777520083).abs() < 1e-14);
        assert!((i1(1.0) - 0.5651591039924850).abs() < 1e-14);
        assert!((ln_i0(700.0) - (700.0 + i0_scaled(700.0).ln())).abs() < 1e-12);
    }

    #[test]
    fn ratios_match_oracle() {
        for &x in &[0.5, 2.0, 10.0, 80.0] {
            let r = i_ratios(x, 12);
            let i0v = oracle_ik_scaled(x, 0);
            for k in 0..=12 {
                let want = oracle_ik_scaled(x, k) / i0v;
                assert!(
                    (r[k] - want).abs() < 1e-10 * want.abs().max(1.0),
                    "x={x} k={k}: got {}, oracle {want}",
                    r[k]
                );
            }
        }
    }

    #[test]
    fn merge_normalization_approaches_one() {
        // sqrt(2 pi J) e^{-J} I0(J) = 1 + 1/(8J) + O(1/J^2)
        for &j in &[10.0, 50.0, 200.0, 1.0e4] {
            let v = merge_normalization(j);
            assert!((v - 1.0).abs() < 1.5 / (8.0 * j), "J={j}: {v}");
            assert!(v > 1.0, "correction is positive, J={j}: {v}");
        }
    }
}
