use crate::error::{Error, Result};

/// Bisection for a sign change of `f` on [lo, hi]. Stops when the bracket is
/// narrower than `tol` or `f` vanishes exactly.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.is_finite() && f_hi.is_finite()) {
        return Err(Error::NoConvergence(format!(
            "bisection: non-finite endpoint values f({lo})={f_lo}, f({hi})={f_hi}"
        )));
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoBracket(format!(
            "bisection: f({lo})={f_lo:.3e} and f({hi})={f_hi:.3e} share a sign"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection on a monotone predicate: `pred(lo)` holds and `pred(hi)` does
/// not. Returns the midpoint of the final bracket of width ≤ `tol`.
pub fn bisect_predicate<E>(
    mut pred: impl FnMut(f64) -> std::result::Result<bool, E>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> std::result::Result<f64, E> {
    while (hi - lo).abs() > tol {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if pred(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn no_sign_change_is_reported() {
        assert!(matches!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-9), Err(Error::NoBracket(_))));
    }

    #[test]
    fn predicate_bisection() {
        let r: f64 = bisect_predicate(|x| Ok::<_, ()>(x < 0.3), 0.0, 1.0, 1e-10).unwrap();
        assert!((r - 0.3).abs() < 1e-10);
    }
}
