//! Brute-force references the harness compares the fast paths against.
//!
//! Nothing here shares code with the implementations under test.

use num_integer::Integer;

use crate::approx::FracParams;

/// `N(η, ξ)` by testing every `(p, q)` in the full rectangle.
pub fn naive_count(p: &FracParams, eta: f64, xi: f64) -> u64 {
    let theta = eta / p.a + xi / p.b;
    let (p_lo, p_hi) = (p.c.floor() as i64, (p.a + p.c).ceil() as i64);
    let (q_lo, q_hi) = (p.d.floor() as i64, (p.b + p.d).ceil() as i64);
    let mut count = 0;
    for pi in p_lo..=p_hi {
        for qi in q_lo..=q_hi {
            if ((pi as f64 - p.c) / p.a - (qi as f64 - p.d) / p.b).abs() < theta {
                count += 1;
            }
        }
    }
    count
}

/// The pairs counted by [`naive_count`].
pub fn naive_pairs(p: &FracParams, eta: f64, xi: f64) -> Vec<(i64, i64)> {
    let theta = eta / p.a + xi / p.b;
    let mut out = Vec::new();
    for pi in p.c.floor() as i64..=(p.a + p.c).ceil() as i64 {
        for qi in p.d.floor() as i64..=(p.b + p.d).ceil() as i64 {
            if ((pi as f64 - p.c) / p.a - (qi as f64 - p.d) / p.b).abs() < theta {
                out.push((pi, qi));
            }
        }
    }
    out
}

/// `Σ_{q=1}^{b} e(kaq/b)` should be `b` when `b/gcd(a,b)` divides `k`, else `0`.
pub fn integer_exp_sum_expected(a: u64, b: u64, k: u64) -> f64 {
    if k % (b / a.gcd(&b)) == 0 {
        b as f64
    } else {
        0.0
    }
}

/// `λ{x ∈ [0,1] : ‖slope·x + shift‖ < r}` from the periodic antiderivative
/// `G(u) = λ{v ∈ [0,u] : ‖v‖ < r}`.
pub fn window_measure(slope: f64, shift: f64, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    if r >= 0.5 {
        return 1.0;
    }
    let g = |u: f64| {
        let whole = u.floor();
        let f = u - whole;
        2.0 * r * whole + f.min(r) + (f - (1.0 - r)).max(0.0)
    };
    (g(slope + shift) - g(shift)) / slope
}

/// `#{u ∈ points : u mod 1 ∈ [lo, hi]}` on the torus, written independently
/// of the library's interval test.
pub fn torus_count(points: &[f64], lo: f64, hi: f64) -> u64 {
    if hi - lo >= 1.0 {
        return points.len() as u64;
    }
    let lo_r = lo - lo.floor();
    let hi_r = lo_r + (hi - lo);
    points
        .iter()
        .filter(|&&u| {
            let u = u - u.floor();
            (lo_r <= u && u <= hi_r) || (hi_r > 1.0 && u <= hi_r - 1.0)
        })
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_examples() {
        let unit = FracParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(naive_count(&unit, 0.25, 0.25), 2);
        assert_eq!(naive_pairs(&unit, 0.25, 0.25), vec![(0, 0), (1, 1)]);
        let p = FracParams::new(2.0, 6.0, 0.0, 0.0).unwrap();
        assert_eq!(naive_pairs(&p, 0.1, 0.1), vec![(0, 0), (1, 3), (2, 6)]);
    }

    #[test]
    fn expected_identity() {
        assert_eq!(integer_exp_sum_expected(4, 6, 3), 6.0);
        assert_eq!(integer_exp_sum_expected(4, 6, 2), 0.0);
        assert_eq!(integer_exp_sum_expected(5, 5, 1), 5.0);
    }

    #[test]
    fn window_measure_examples() {
        assert!((window_measure(1.0, 0.0, 0.1) - 0.2).abs() < 1e-15);
        assert!((window_measure(2.0, 0.25, 0.1) - 0.2).abs() < 1e-15);
        assert!((window_measure(1.0, 0.05, 0.1) - 0.2).abs() < 1e-15);
        // [0, 0.2) and (0.8, 1.2) inside [0, 1.5]
        assert!((window_measure(1.5, 0.0, 0.2) - 0.6 / 1.5).abs() < 1e-15);
        assert_eq!(window_measure(3.0, 0.0, 0.7), 1.0);
    }

    #[test]
    fn torus_count_wraps() {
        let pts = [0.1, 0.1, 0.7, 0.93];
        assert_eq!(torus_count(&pts, -0.1, 0.15), 3);
        assert_eq!(torus_count(&pts, 0.0, 1.0), 4);
        assert_eq!(torus_count(&pts, 0.7, 0.7 + 1e-9), 1);
    }
}
