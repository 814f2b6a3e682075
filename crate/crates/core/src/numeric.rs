//! Small numerical kernels shared by the geometric modules: finite-difference
//! stencils, cumulative quadrature and bracketed root finding.

use crate::Vec3;

/// Central-difference step for a first derivative at `t`.
pub fn fd_step(t: f64) -> f64 {
    f64::EPSILON.cbrt() * t.abs().max(1.0)
}

/// Finite-difference weights (Fornberg) for the `order`-th derivative at `x0`
/// using the nodes `xs`.
pub fn fornberg_weights(x0: f64, xs: &[f64], order: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Seven-point first-derivative stencil (sixth order) at grid index `i` of a
/// uniform grid of `len` nodes with unit spacing.
///
/// For `periodic` grids the last node duplicates the first, so indices wrap
/// modulo `len - 1`. Open grids use shifted one-sided stencils near the ends.
pub fn derivative_stencil(i: usize, len: usize, periodic: bool) -> Vec<(usize, f64)> {
    stencil(i, len, periodic, 1)
}

/// Seven-point second-derivative stencil, same layout as [`derivative_stencil`].
pub fn second_derivative_stencil(i: usize, len: usize, periodic: bool) -> Vec<(usize, f64)> {
    stencil(i, len, periodic, 2)
}

fn stencil(i: usize, len: usize, periodic: bool, order: usize) -> Vec<(usize, f64)> {
    const HALF: isize = 3;
    if periodic {
        let m = (len - 1) as isize;
        let xs: Vec<f64> = (-HALF..=HALF).map(|k| k as f64).collect();
        let w = fornberg_weights(0.0, &xs, order);
        (-HALF..=HALF)
            .zip(w)
            .map(|(k, w)| (((i as isize + k).rem_euclid(m)) as usize, w))
            .collect()
    } else {
        let width = (2 * HALF + 1).min(len as isize);
        let start = (i as isize - HALF).clamp(0, len as isize - width);
        let idx: Vec<usize> = (start..start + width).map(|k| k as usize).collect();
        let xs: Vec<f64> = idx.iter().map(|&k| k as f64).collect();
        let w = fornberg_weights(i as f64, &xs, order);
        idx.into_iter().zip(w).collect()
    }
}

/// Cumulative integral of uniformly sampled `f` with spacing `h`, starting at 0.
///
/// Even nodes use composite Simpson; odd nodes add a three-point partial
/// panel of the same local order, so every node carries fourth-order error.
pub fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    let mut i = 2;
    while i < n {
        out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
        i += 2;
    }
    let mut i = 1;
    while i < n {
        out[i] = if i + 1 < n {
            out[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1])
        } else {
            out[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i])
        };
        i += 2;
    }
    out
}

/// Composite trapezoid rule over irregular abscissae.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// Bisection on a sign-changing bracket `[a, b]` until the bracket is
/// narrower than `tol`. Returns `None` if `f(a)` and `f(b)` share a sign.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Illinois variant of regula falsi on a sign-changing bracket.
pub fn illinois(
    mut f: impl FnMut(f64) -> f64,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    tol: f64,
) -> f64 {
    let mut side = 0i8;
    for _ in 0..100 {
        let c = (a * fb - b * fa) / (fb - fa);
        if !c.is_finite() {
            return 0.5 * (a + b);
        }
        let fc = f(c);
        if fc == 0.0 || (b - a).abs() < tol {
            return c;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() < tol {
            return if fa.abs() < fb.abs() { a } else { b };
        }
    }
    0.5 * (a + b)
}

/// Ridders' extrapolated derivative of a vector function at `x`.
///
/// Starts from the step `h0` and shrinks it by 1.4 per round, eliminating
/// the leading error terms with a Neville tableau. `forward` selects a
/// one-sided difference toward `x + forward · h` (for points at the end of
/// a domain); otherwise central differences are used. Stops when the
/// estimate starts to degrade.
pub fn ridders<E>(
    mut f: impl FnMut(f64) -> Result<Vec3, E>,
    x: f64,
    h0: f64,
    forward: Option<f64>,
) -> Result<Vec3, E> {
    const SHRINK: f64 = 1.4;
    const ROUNDS: usize = 12;
    let f0 = match forward {
        Some(_) => Some(f(x)?),
        None => None,
    };
    let mut diff = |h: f64| -> Result<Vec3, E> {
        Ok(match (forward, f0) {
            (Some(dir), Some(y0)) => (f(x + dir * h)? - y0) / (dir * h),
            _ => (f(x + h)? - f(x - h)?) / (2.0 * h),
        })
    };
    // Central differences have even error powers, one-sided ones all powers.
    let ratio = if forward.is_some() { SHRINK } else { SHRINK * SHRINK };
    let mut h = h0;
    let mut prev: Vec<Vec3> = vec![diff(h)?];
    let mut best = prev[0];
    let mut err = f64::INFINITY;
    for _ in 1..ROUNDS {
        h /= SHRINK;
        let mut row = vec![diff(h)?];
        let mut fac = ratio;
        for j in 1..=prev.len() {
            let next = (row[j - 1] * fac - prev[j - 1]) / (fac - 1.0);
            fac *= ratio;
            let e = (next - row[j - 1]).norm().max((next - prev[j - 1]).norm());
            if e <= err {
                err = e;
                best = next;
            }
            row.push(next);
        }
        let k = row.len() - 1;
        if (row[k] - prev[k - 1]).norm() >= 2.0 * err {
            break;
        }
        prev = row;
    }
    Ok(best)
}

/// Wraps an angle to `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::PI;
    let mut x = a.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}
