//! Small numerical kernels: adaptive Gauss–Kronrod quadrature, fixed-step
//! RK4, bisection, and cubic Hermite interpolation.
//!
//! The quadrature and bisection routines double as independent test oracles
//! for the closed forms in [`crate::analytic`], so they must not call into
//! that module.

use crate::{Error, Result};

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights, with the
// embedded 7-point Gauss rule on the odd-indexed nodes.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let fsum = f(c - x) + f(c + x);
        kronrod += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    (kronrod * h, (kronrod - gauss).abs() * h.abs())
}

/// Adaptive Gauss–Kronrod (G7, K15) integration of `f` over `[a, b]` to an
/// absolute tolerance. The integrand must be finite on the closed interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Params("integration bounds must be finite".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut total = 0.0;
    // Work stack of (lo, hi, tol-share).
    let mut stack = vec![(a, b, abs_tol.max(1e-300))];
    let mut depth_guard = 0usize;
    while let Some((lo, hi, tol)) = stack.pop() {
        depth_guard += 1;
        if depth_guard > 100_000 {
            return Err(Error::Params(format!(
                "quadrature failed to converge on [{a}, {b}]"
            )));
        }
        let (val, err) = gk15(&f, lo, hi);
        // The relative floor stops subdivision once the error estimate hits
        // f64 rounding noise, which no refinement can push below.
        if err <= tol || err <= 1e-13 * val.abs() || (hi - lo).abs() < 1e-14 * (b - a).abs() {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * tol));
            stack.push((mid, hi, 0.5 * tol));
        }
    }
    Ok(total)
}

/// Bisection root finding for a continuous `f` with a sign change on
/// `[lo, hi]`. Returns the midpoint once the bracket is below `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Params(format!(
            "bisection bracket [{lo}, {hi}] has no sign change"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One classical Runge–Kutta 4 step of size `h` for `dy/dx = f(x, y)`.
/// `f` writes the derivative into its third argument.
pub fn rk4_step<F: Fn(f64, &[f64], &mut [f64])>(f: &F, x: f64, y: &mut [f64], h: f64) {
    let n = y.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    f(x, y, &mut k1);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    f(x + 0.5 * h, &tmp, &mut k2);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    f(x + 0.5 * h, &tmp, &mut k3);
    for i in 0..n {
        tmp[i] = y[i] + h * k3[i];
    }
    f(x + h, &tmp, &mut k4);
    for i in 0..n {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

/// Piecewise cubic Hermite interpolant through `(xs[i], ys[i])` with exact
/// slopes `dys[i]`; `xs` strictly increasing. Evaluation clamps to the ends.
pub struct HermiteSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    dys: Vec<f64>,
}

impl HermiteSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, dys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() || xs.len() != dys.len() {
            return Err(Error::Params("hermite spline needs >= 2 matched samples".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Params("hermite abscissae must be strictly increasing".into()));
        }
        Ok(Self { xs, ys, dys })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => return self.ys[i],
            Err(i) => i - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.dys[i] + h01 * self.ys[i + 1] + h11 * h * self.dys[i + 1]
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }
}

/// Linear interpolation through `(xs[i], ys[i])`, clamped at the ends.
/// `xs` must be nondecreasing.
pub fn interp_linear(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let i = match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
        Ok(i) => return ys[i],
        Err(i) => i - 1,
    };
    let span = xs[i + 1] - xs[i];
    if span <= 0.0 {
        return ys[i];
    }
    ys[i] + (ys[i + 1] - ys[i]) * (x - xs[i]) / span
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn integrates_polynomials_exactly() {
        // K15 is exact through degree 22; adaptivity not even needed.
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert_abs_diff_eq!(v, 8.0, epsilon = 1e-12);
    }

    #[test]
    fn integrates_log_singular_style_integrand() {
        // 1/x over [1e-3, 1]: steep but finite; answer ln(1000).
        let v = integrate(|x| 1.0 / x, 1e-3, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(v, 1000f64.ln(), epsilon = 1e-10);
    }

    #[test]
    fn integrate_reversed_and_empty() {
        let v = integrate(|x| x, 1.0, 0.0, 1e-12).unwrap();
        assert_abs_diff_eq!(v, -0.5, epsilon = 1e-12);
        assert_eq!(integrate(|x| x, 2.0, 2.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-13).unwrap();
        assert_abs_diff_eq!(r, std::f64::consts::SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn rk4_exponential() {
        let f = |_x: f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0];
        let mut y = vec![1.0];
        let steps = 1000;
        let h = 1.0 / steps as f64;
        for i in 0..steps {
            rk4_step(&f, i as f64 * h, &mut y, h);
        }
        assert_abs_diff_eq!(y[0], std::f64::consts::E, epsilon = 1e-10);
    }

    #[test]
    fn hermite_reproduces_cubic() {
        // A cubic with exact slopes is reproduced exactly.
        let f = |x: f64| x * x * x - x;
        let df = |x: f64| 3.0 * x * x - 1.0;
        let xs: Vec<f64> = (0..11).map(|i| i as f64 * 0.3).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let dys: Vec<f64> = xs.iter().map(|&x| df(x)).collect();
        let sp = HermiteSpline::new(xs, ys, dys).unwrap();
        for i in 0..100 {
            let x = i as f64 * 0.03;
            assert_abs_diff_eq!(sp.eval(x), f(x), epsilon = 1e-12);
        }
    }

    #[test]
    fn linear_interp_clamps() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [0.0, 2.0, 2.0];
        assert_eq!(interp_linear(&xs, &ys, -1.0), 0.0);
        assert_eq!(interp_linear(&xs, &ys, 3.0), 2.0);
        assert_abs_diff_eq!(interp_linear(&xs, &ys, 0.5), 1.0, epsilon = 1e-15);
    }
}
