//! Adaptive Simpson quadrature.

/// Result of an adaptive Simpson integration.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the local Richardson error estimates.
    pub error_estimate: f64,
    pub evaluations: usize,
    /// True if some panel hit the depth limit before meeting its tolerance.
    pub depth_limited: bool,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// The interval is first split into four panels so that integrands that
/// vanish at both ends and the midpoint are not accepted prematurely.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64, max_depth: u32) -> Quadrature {
    let mut out = Quadrature {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
        depth_limited: false,
    };
    if a == b {
        return out;
    }
    const INITIAL: usize = 4;
    let h = (b - a) / INITIAL as f64;
    let mut left = f(a);
    out.evaluations += 1;
    for k in 0..INITIAL {
        let pa = a + k as f64 * h;
        let pb = if k + 1 == INITIAL { b } else { a + (k + 1) as f64 * h };
        let pm = 0.5 * (pa + pb);
        let fm = f(pm);
        let fb = f(pb);
        out.evaluations += 2;
        let panel = Panel {
            a: pa,
            b: pb,
            fa: left,
            fm,
            fb,
            whole: simpson(pa, pb, left, fm, fb),
        };
        recurse(&mut f, panel, tol / INITIAL as f64, max_depth, &mut out);
        left = fb;
    }
    out
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn recurse<F: FnMut(f64) -> f64>(f: &mut F, p: Panel, tol: f64, depth: u32, out: &mut Quadrature) {
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let flm = f(lm);
    let frm = f(rm);
    out.evaluations += 2;
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if !delta.is_finite() || delta.abs() <= 15.0 * tol || depth == 0 || !(lm > p.a && rm < p.b) {
        if !(delta.abs() <= 15.0 * tol) {
            out.depth_limited = true;
        }
        out.value += left + right + delta / 15.0;
        out.error_estimate += delta.abs() / 15.0;
        return;
    }
    recurse(
        f,
        Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
        },
        0.5 * tol,
        depth - 1,
        out,
    );
    recurse(
        f,
        Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
        },
        0.5 * tol,
        depth - 1,
        out,
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let q = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12, 40);
        assert!((q.value - 0.0).abs() < 1e-13);
    }

    #[test]
    fn smooth_transcendental() {
        let q = adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, 1e-10, 40);
        assert!((q.value - 2.0).abs() < 1e-10);
        assert!(!q.depth_limited);
    }

    #[test]
    fn vanishing_samples_do_not_fool_the_rule() {
        let q = adaptive_simpson(|x: f64| (4.0 * x).sin().powi(2), 0.0, std::f64::consts::PI, 1e-10, 40);
        assert!((q.value - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn non_finite_integrand_terminates() {
        let q = adaptive_simpson(|x| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, 1e-12, 40);
        assert!(q.depth_limited);
        assert!(q.evaluations < 100);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(adaptive_simpson(|x| x, 1.0, 1.0, 1e-9, 40).value, 0.0);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let q = adaptive_simpson(|x| x, 1.0, 0.0, 1e-12, 40);
        assert!((q.value + 0.5).abs() < 1e-14);
    }
}
