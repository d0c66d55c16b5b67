//! Scalar root finding and 1-D maximization.

/// Refines a root of `f` inside [a, b], where f(a) and f(b) differ in sign.
///
/// Bisection shrinks the bracket by 2⁻¹⁶ first, then an Illinois-modified
/// secant iteration finishes; every step stays inside the bracket.
pub fn refine_root<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    debug_assert!(fa.signum() != fb.signum());

    for _ in 0..16 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }

    // Illinois: halve the retained endpoint's value when the same side
    // is kept twice in a row.
    let mut side = 0i8;
    for _ in 0..200 {
        let width = (b - a).abs();
        if width <= 2.0 * f64::EPSILON * a.abs().max(b.abs()) + f64::MIN_POSITIVE {
            break;
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a.min(b) && x < a.max(b)) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx.signum() == fb.signum() {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    if f(a).abs() < f(b).abs() {
        a
    } else {
        b
    }
}

/// All sign changes of `f` on `points` evenly spaced samples of [lo, hi],
/// each refined with [`refine_root`]. Samples where f is exactly zero are
/// reported as roots. Tangential zeros without a sign change are missed.
pub fn find_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if !(hi > lo) || points < 2 {
        return Vec::new();
    }
    let step = (hi - lo) / (points - 1) as f64;
    let xs = |i: usize| if i == points - 1 { hi } else { lo + step * i as f64 };

    let mut roots = Vec::new();
    let mut x_prev = xs(0);
    let mut f_prev = f(x_prev);
    if f_prev == 0.0 {
        roots.push(x_prev);
    }
    for i in 1..points {
        let x = xs(i);
        let fx = f(x);
        if fx == 0.0 {
            roots.push(x);
        } else if f_prev != 0.0 && fx.is_finite() && f_prev.is_finite() && fx.signum() != f_prev.signum() {
            roots.push(refine_root(&f, x_prev, x));
        }
        x_prev = x;
        f_prev = fx;
    }
    roots
}

/// Golden-section search for a maximum of a unimodal `f` on [a, b],
/// stopping once the bracket is narrower than `tol`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..400 {
        if b - a <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    // Endpoints may beat the interior when the maximum sits on the boundary.
    [(c, fc), (d, fd), (a, f(a)), (b, f(b))]
        .into_iter()
        .fold((c, fc), |best, cand| if cand.1 > best.1 { cand } else { best })
}
