/// The first continued-fraction convergent `p/q` of `x` with `q <= q_max`
/// and `|x - p/q| < tol`. Convergents are already in lowest terms.
pub fn rational_approx(x: f64, q_max: u64, tol: f64) -> Option<(i64, u64)> {
    if !x.is_finite() || q_max == 0 {
        return None;
    }
    // (h, k) convergent recurrences seeded with h_{-1} = 1, h_{-2} = 0
    let (mut h_prev, mut h) = (0i128, 1i128);
    let (mut k_prev, mut k) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        (h_prev, h) = (h, a * h + h_prev);
        (k_prev, k) = (k, a * k + k_prev);
        if k > q_max as i128 {
            break;
        }
        if (x - h as f64 / k as f64).abs() < tol {
            return Some((h as i64, k as u64));
        }
        let frac = rest - a as f64;
        if frac <= 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirds() {
        assert_eq!(rational_approx(1.0 / 3.0, 10, 1e-12), Some((1, 3)));
        assert_eq!(rational_approx(0.333333, 10, 1e-3), Some((1, 3)));
        assert_eq!(rational_approx(-2.0 / 3.0, 10, 1e-12), Some((-2, 3)));
        assert_eq!(rational_approx(5.0 / 6.0, 10, 1e-12), Some((5, 6)));
    }

    #[test]
    fn integers_and_loose_tolerance() {
        assert_eq!(rational_approx(2.0, 5, 1e-12), Some((2, 1)));
        assert_eq!(rational_approx(0.52, 5, 0.1), Some((1, 2)));
    }

    #[test]
    fn irrational_has_no_small_denominator() {
        // convergents 0/1, 1/1, 2/3, 5/7, 12/17, 29/41, 70/99, ...
        assert_eq!(rational_approx(0.5f64.sqrt(), 50, 1e-10), None);
        assert_eq!(rational_approx(0.5f64.sqrt(), 100, 1e-4), Some((70, 99)));
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(rational_approx(f64::NAN, 10, 1e-3), None);
        assert_eq!(rational_approx(0.5, 0, 1e-3), None);
    }
}
