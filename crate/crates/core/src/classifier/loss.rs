/// Numerically stable binary cross-entropy on a raw logit:
/// `max(z, 0) - z*y + ln(1 + exp(-|z|))`.
pub fn bce_with_logits(logit: f64, label: u8) -> f64 {
    let y = f64::from(label);
    logit.max(0.0) - logit * y + (-logit.abs()).exp().ln_1p()
}

/// d(loss)/d(logit) = sigmoid(z) - y.
pub fn bce_with_logits_grad(logit: f64, label: u8) -> f64 {
    sigmoid(logit) - f64::from(label)
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_logit_is_ln2() {
        assert!((bce_with_logits(0.0, 1) - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((bce_with_logits(0.0, 0) - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn saturated_correct_prediction() {
        assert!(bce_with_logits(50.0, 1) < 1e-20);
        assert!(bce_with_logits(-50.0, 0) < 1e-20);
    }

    #[test]
    fn matches_direct_formula() {
        // ln(1 + e^2)
        assert!((bce_with_logits(2.0, 0) - 2.126_928_011_042_972_5).abs() < 1e-12);
    }

    #[test]
    fn huge_logits_stay_finite() {
        for z in [1e8, -1e8, 1e300, -1e300] {
            for y in [0, 1] {
                let l = bce_with_logits(z, y);
                assert!(l.is_finite() && l >= 0.0, "z={z} y={y} -> {l}");
            }
        }
        assert_eq!(bce_with_logits(-1e8, 1), 1e8);
    }

    #[test]
    fn sigmoid_symmetry() {
        for z in [-30.0, -1.0, 0.0, 2.0, 40.0] {
            assert!((sigmoid(z) + sigmoid(-z) - 1.0).abs() < 1e-15);
        }
        assert_eq!(sigmoid(0.0), 0.5);
    }

    #[test]
    fn gradient_matches_difference() {
        for z in [-4.0, -0.3, 0.0, 1.2, 6.0] {
            for y in [0, 1] {
                let h = 1e-6;
                let fd = (bce_with_logits(z + h, y) - bce_with_logits(z - h, y)) / (2.0 * h);
                assert!((fd - bce_with_logits_grad(z, y)).abs() < 1e-8);
            }
        }
    }
}
