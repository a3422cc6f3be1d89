//! Standard normal distribution.
//!
//! The tail uses the rational approximation of Hastings as tabulated by
//! Abramowitz & Stegun (26.2.17):
//!
//! ```text
//! Q(x) = φ(x) · (b1 t + b2 t² + b3 t³ + b4 t⁴ + b5 t⁵),  t = 1 / (1 + p x),  x ≥ 0
//! ```
//!
//! with absolute error below 7.5e-8. Negative arguments use symmetry.

const P: f64 = 0.231_641_9;
const B: [f64; 5] = [0.319_381_530, -0.356_563_782, 1.781_477_937, -1.821_255_978, 1.330_274_429];
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * libm::exp(-0.5 * x * x)
}

fn upper_tail_nonneg(x: f64) -> f64 {
    let t = 1.0 / (1.0 + P * x);
    let poly = t * (B[0] + t * (B[1] + t * (B[2] + t * (B[3] + t * B[4]))));
    normal_pdf(x) * poly
}

/// Survival function `1 - Φ(x)`, computed without cancellation.
pub fn normal_sf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 0.0 {
        upper_tail_nonneg(x)
    } else {
        1.0 - upper_tail_nonneg(-x)
    }
}

/// `Φ(x)`.
pub fn normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 0.0 {
        1.0 - upper_tail_nonneg(x)
    } else {
        upper_tail_nonneg(-x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_and_centered() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-7);
        for x in [0.3, 1.0, 1.96, 4.0] {
            assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() < 1e-15);
            assert!((normal_sf(x) - (1.0 - normal_cdf(x))).abs() < 1e-15);
        }
    }

    #[test]
    fn textbook_values() {
        assert!((normal_cdf(1.959_963_985) - 0.975).abs() < 1e-7);
        assert!((normal_sf(2.326_347_874) - 0.01).abs() < 1e-7);
    }
}
