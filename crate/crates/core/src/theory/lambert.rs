use std::f64::consts::E;

use crate::{Error, Result};

const MAX_ITERS: usize = 64;

/// Principal branch `W₀(y)` for `y ≥ 0`: the `w ≥ 0` with `w·eʷ = y`.
///
/// The starting point comes from `ln(1 + y)` for moderate `y` and the
/// asymptotic `L₁ − L₂ + L₂/L₁` (with `L₁ = ln y`, `L₂ = ln ln y`) beyond `e`;
/// Halley's iteration then refines it.
pub fn lambert_w0(y: f64) -> Result<f64> {
    if y.is_nan() || y < 0.0 {
        return Err(Error::input(format!("W₀ is only evaluated on y ≥ 0, got {y}")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut w = if y <= E {
        y.ln_1p() * 0.75
    } else {
        let l1 = y.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    for _ in 0..MAX_ITERS {
        let ew = w.exp();
        let f = w * ew - y;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_values() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert!((lambert_w0(E).unwrap() - 1.0).abs() < 1e-15);
        // Omega constant, from a bisection on w·eʷ = 1 (see tests/theory.rs).
        assert!((lambert_w0(1.0).unwrap() - 0.567_143_290_409_783_8).abs() < 1e-15);
        assert!(lambert_w0(-0.1).is_err());
    }

    #[test]
    fn tiny_and_huge_arguments() {
        for y in [1e-300, 1e-12, 1e-3, 5.0, 1e10, 1e300] {
            let w = lambert_w0(y).unwrap();
            let back = w * w.exp();
            assert!((back - y).abs() <= 1e-12 * y, "y = {y}, w = {w}");
        }
    }
}
