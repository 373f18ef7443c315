use num_rational::Ratio;

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
fn convergents(x: f64, max_den: i64) -> Vec<Ratio<i64>> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i64;
        let (p2, q2) = match (
            ai.checked_mul(p1).and_then(|v| v.checked_add(p0)),
            ai.checked_mul(q1).and_then(|v| v.checked_add(q0)),
        ) {
            (Some(p), Some(q)) => (p, q),
            _ => break,
        };
        if q2 > max_den {
            break;
        }
        out.push(Ratio::new(p2, q2));
        let frac = r - a;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    out
}

/// The last continued-fraction convergent of `x` with denominator `<= max_den`.
pub fn best_rational(x: f64, max_den: i64) -> Option<Ratio<i64>> {
    convergents(x, max_den).pop()
}

/// The smallest-denominator convergent within `tol` of `x`.
pub fn fit_rational(x: f64, max_den: i64, tol: f64) -> Option<Ratio<i64>> {
    convergents(x, max_den).into_iter().find(|r| (x - *r.numer() as f64 / *r.denom() as f64).abs() <= tol)
}
