//! Shared numerical kernels: quadrature, cumulative antiderivative tables,
//! scalar root finding and minimization, tridiagonal solves.

/// 15-point Gauss-Legendre abscissae on [-1, 1] (non-negative half).
const GL15_X: [f64; 8] = [
    0.0,
    0.201_194_093_997_434_52,
    0.394_151_347_077_563_37,
    0.570_972_172_608_538_85,
    0.724_417_731_360_170_05,
    0.848_206_583_410_427_22,
    0.937_273_392_400_705_90,
    0.987_992_518_020_485_43,
];
const GL15_W: [f64; 8] = [
    0.202_578_241_925_561_27,
    0.198_431_485_327_111_58,
    0.186_161_000_015_562_21,
    0.166_269_205_816_993_93,
    0.139_570_677_926_154_31,
    0.107_159_220_467_171_94,
    0.070_366_047_488_108_12,
    0.030_753_241_996_117_27,
];

/// 15-point Gauss-Legendre rule on [a, b]. Open rule: never evaluates the endpoints.
pub fn gauss15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = GL15_W[0] * f(mid);
    for k in 1..8 {
        let dx = half * GL15_X[k];
        acc += GL15_W[k] * (f(mid + dx) + f(mid - dx));
    }
    acc * half
}

/// Adaptive composite 15-point quadrature with absolute tolerance `tol`.
///
/// Termination is guaranteed: panels stop splitting below a relative width
/// floor, and a global panel budget caps the work on integrands whose noise
/// floor sits above the requested tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let width_floor = (b - a).abs() * 1e-9;
    let mut budget: u32 = 65_536;
    let mut total = 0.0;
    let mut stack = vec![(a, b, gauss15(f, a, b), tol)];
    while let Some((a, b, whole, tol)) = stack.pop() {
        let mid = 0.5 * (a + b);
        let left = gauss15(f, a, mid);
        let right = gauss15(f, mid, b);
        let refined = left + right;
        let converged = (refined - whole).abs() <= tol.max(refined.abs() * 1e-14);
        budget = budget.saturating_sub(1);
        if converged || (b - a).abs() <= width_floor || budget == 0 {
            total += refined;
        } else {
            stack.push((a, mid, left, 0.5 * tol));
            stack.push((mid, b, right, 0.5 * tol));
        }
    }
    total
}

/// Composite Gauss rule with a fixed panel count. For smooth integrands the
/// error is negligible, and the value varies analytically with the endpoints,
/// which matters when the result feeds another adaptive quadrature.
pub fn gauss_fixed<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        let x0 = a + i as f64 * h;
        acc += gauss15(f, x0, x0 + h);
    }
    acc
}

/// Tabulated antiderivative x -> int_{x0}^{x} g with C^1 cubic Hermite evaluation.
///
/// Node values come from per-panel Gauss quadrature prefix sums; node slopes are
/// the integrand itself, so the interpolant reproduces both the integral and its
/// derivative to panel-width^4 accuracy.
#[derive(Debug, Clone)]
pub struct CumulativeIntegral {
    x0: f64,
    dx: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl CumulativeIntegral {
    pub fn build<F: Fn(f64) -> f64>(g: F, x0: f64, x1: f64, panels: usize) -> Self {
        assert!(panels >= 2 && x1 > x0);
        let dx = (x1 - x0) / panels as f64;
        let mut values = Vec::with_capacity(panels + 1);
        let mut slopes = Vec::with_capacity(panels + 1);
        values.push(0.0);
        slopes.push(g(x0));
        let mut acc = 0.0;
        for i in 0..panels {
            let a = x0 + i as f64 * dx;
            acc += gauss15(&g, a, a + dx);
            values.push(acc);
            slopes.push(g(a + dx));
        }
        Self { x0, dx, values, slopes }
    }

    pub fn total(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn domain_end(&self) -> f64 {
        self.x0 + self.dx * (self.values.len() - 1) as f64
    }

    /// Evaluate the antiderivative. Outside the tabulated domain the value is
    /// extended linearly with the boundary slope.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.values.len() - 1;
        if x <= self.x0 {
            return (x - self.x0) * self.slopes[0];
        }
        let end = self.domain_end();
        if x >= end {
            return self.values[n] + (x - end) * self.slopes[n];
        }
        let s = (x - self.x0) / self.dx;
        let i = (s as usize).min(n - 1);
        let t = s - i as f64;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.values[i]
            + h10 * self.dx * self.slopes[i]
            + h01 * self.values[i + 1]
            + h11 * self.dx * self.slopes[i + 1]
    }
}

/// Bisection on a bracketing interval. Returns the midpoint of the final bracket.
pub fn bisect<F: Fn(f64) -> f64>(
    f: &F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64, String> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(format!("no sign change on [{a}, {b}] (f: {fa} .. {fb})"));
    }
    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Golden-section search for the minimum of `f` on [a, b].
pub fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > xtol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Thomas algorithm for a tridiagonal system. `sub` and `sup` have length n-1.
/// Scratch buffers avoid per-step allocation in time loops.
pub struct TridiagScratch {
    cp: Vec<f64>,
    dp: Vec<f64>,
}

impl TridiagScratch {
    pub fn new(n: usize) -> Self {
        Self { cp: vec![0.0; n], dp: vec![0.0; n] }
    }

    pub fn solve(&mut self, sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64], out: &mut [f64]) {
        let n = diag.len();
        debug_assert!(sub.len() == n - 1 && sup.len() == n - 1 && rhs.len() == n && out.len() == n);
        self.cp[0] = sup[0] / diag[0];
        self.dp[0] = rhs[0] / diag[0];
        for i in 1..n {
            let denom = diag[i] - sub[i - 1] * self.cp[i - 1];
            if i < n - 1 {
                self.cp[i] = sup[i] / denom;
            }
            self.dp[i] = (rhs[i] - sub[i - 1] * self.dp[i - 1]) / denom;
        }
        out[n - 1] = self.dp[n - 1];
        for i in (0..n - 1).rev() {
            out[i] = self.dp[i] - self.cp[i] * out[i + 1];
        }
    }
}

/// Piecewise-linear interpolation on strictly increasing `xs`; clamps outside.
pub fn interp_clamped(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let mut lo = 0;
    let mut hi = n - 1;
    while hi - lo > 1 {
        let m = (lo + hi) / 2;
        if xs[m] <= x {
            lo = m;
        } else {
            hi = m;
        }
    }
    let t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    ys[lo] + t * (ys[hi] - ys[lo])
}

/// Least-squares line fit; returns (slope, intercept).
pub fn line_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    (slope, (sy - slope * sx) / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss15_is_exact_for_degree_seven() {
        let f = |x: f64| 3.5 * x.powi(7) - x.powi(4) + 2.0 * x - 1.0;
        let exact = 3.5 / 8.0 * (2f64.powi(8) - 1.0) - (2f64.powi(5) - 1.0) / 5.0 + (4.0 - 1.0) - 1.0;
        assert!((gauss15(&f, 1.0, 2.0) - exact).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_steep_integrand() {
        // int_0^1 1/sqrt(x+1e-6) dx
        let f = |x: f64| 1.0 / (x + 1e-6).sqrt();
        let exact = 2.0 * ((1.0f64 + 1e-6).sqrt() - 1e-3);
        assert!((integrate(&f, 0.0, 1.0, 1e-12) - exact).abs() < 1e-9);
    }

    #[test]
    fn cumulative_matches_closed_form() {
        let table = CumulativeIntegral::build(|x| x.cos(), 0.0, 1.0, 256);
        for k in 0..=100 {
            let x = k as f64 / 100.0;
            assert!((table.eval(x) - x.sin()).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn bisect_finds_root() {
        let r = bisect(&|x: f64| x * x - 2.0, 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn golden_finds_quadratic_minimum() {
        // Below sqrt(machine eps) the bracket comparisons are noise, so the
        // achievable accuracy at a quadratic minimum is ~1e-8.
        let (x, _) = golden_min(&|x: f64| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 5e-8);
    }

    #[test]
    fn tridiagonal_round_trip() {
        let n = 12;
        let sub = vec![-1.0; n - 1];
        let diag = vec![3.0; n];
        let sup = vec![-1.5; n - 1];
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            rhs[i] = 3.0 * x_true[i];
            if i > 0 {
                rhs[i] += -1.0 * x_true[i - 1];
            }
            if i < n - 1 {
                rhs[i] += -1.5 * x_true[i + 1];
            }
        }
        let mut out = vec![0.0; n];
        TridiagScratch::new(n).solve(&sub, &diag, &sup, &rhs, &mut out);
        for i in 0..n {
            assert!((out[i] - x_true[i]).abs() < 1e-12);
        }
    }
}
