//! Normal tail helpers on top of libm's erfc.

/// `P(Z >= z)` for a standard normal `Z`.
pub fn upper_normal(z: f64) -> f64 {
    0.5 * libm::erfc(z / std::f64::consts::SQRT_2)
}

/// `sup { z : P(Z >= z) >= y }`.
///
/// A rational first guess is polished by Newton steps and then nudged so the
/// returned point satisfies the inequality; bisection is the fallback.
pub fn upper_normal_sup(y: f64) -> f64 {
    if y >= 1.0 {
        return f64::NEG_INFINITY;
    }
    if y <= 0.0 {
        return f64::INFINITY;
    }
    newton(y).unwrap_or_else(|| bisect(y))
}

fn density(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn newton(y: f64) -> Option<f64> {
    // rational approximation with absolute error below 5e-4
    let p = y.min(1.0 - y);
    let t = (-2.0 * p.ln()).sqrt();
    let guess = t - (2.515517 + t * (0.802853 + t * 0.010328))
        / (1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308)));
    let mut z = if y <= 0.5 { guess } else { -guess };
    for _ in 0..4 {
        let q = upper_normal(z);
        let d = density(z);
        if !(d > 0.0 && q > 0.0) {
            return None;
        }
        z += if y < 0.5 {
            (q.ln() - y.ln()) * q / d
        } else {
            (q - y) / d
        };
        if !z.is_finite() {
            return None;
        }
    }
    let step = 4e-16 * (1.0 + z.abs());
    for _ in 0..16 {
        if upper_normal(z) >= y {
            break;
        }
        z -= step;
    }
    if upper_normal(z) < y {
        return None;
    }
    for _ in 0..16 {
        if upper_normal(z + step) < y {
            return Some(z);
        }
        z += step;
    }
    None
}

fn bisect(y: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * (1.0 + mid.abs()) {
            return lo;
        }
        if upper_normal(mid) >= y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_agrees_with_bisection() {
        for i in 1..2000 {
            let y = (i as f64 / 2000.0).powi(3);
            let (a, b) = (upper_normal_sup(y), bisect(y));
            assert!(upper_normal(a) >= y);
            assert!((a - b).abs() <= 1e-13 * (1.0 + b.abs()), "{y}: {a} vs {b}");
        }
        for y in [1e-300, 1e-100, 1e-20, 1.0 - 1e-12] {
            assert!((upper_normal_sup(y) - bisect(y)).abs() <= 1e-12 * (1.0 + bisect(y).abs()));
        }
    }

    #[test]
    fn known_values() {
        assert!((upper_normal(0.0) - 0.5).abs() < 1e-15);
        assert!((upper_normal(1.959963984540054) - 0.025).abs() < 1e-15);
        assert!((upper_normal(2f64.sqrt()) - 0.078_649_603_525_142_57).abs() < 1e-16);
        assert!((upper_normal_sup(0.025) - 1.959963984540054).abs() < 1e-12);
        assert!((upper_normal_sup(0.5)).abs() < 1e-14);
    }
}
