//! Derivative-free minimizers used for the local-unitary search.

use crate::scalar::{lit, Real};

#[derive(Clone, Copy, Debug)]
pub struct SimplexOptions<T> {
    /// Initial simplex edge length.
    pub step: T,
    pub max_iterations: usize,
    /// Stop once the spread of simplex values falls below this.
    pub value_tol: T,
}

/// Nelder–Mead simplex minimization. Returns the best point and its value.
pub fn nelder_mead<T, F>(mut f: F, start: &[T], opts: SimplexOptions<T>) -> (Vec<T>, T)
where
    T: Real,
    F: FnMut(&[T]) -> T,
{
    let dim = start.len();
    let mut simplex: Vec<Vec<T>> = Vec::with_capacity(dim + 1);
    simplex.push(start.to_vec());
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] = p[i] + opts.step;
        simplex.push(p);
    }
    let mut values: Vec<T> = simplex.iter().map(|p| f(p)).collect();

    let (alpha, gamma, rho, sigma) = (T::one(), lit::<T>(2.0), lit::<T>(0.5), lit::<T>(0.5));
    let inv_dim = T::from_usize(dim).unwrap().recip();

    for _ in 0..opts.max_iterations {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| {
            values[a]
                .partial_cmp(&values[b])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if values[dim] - values[0] <= opts.value_tol {
            break;
        }

        let mut centroid = vec![T::zero(); dim];
        for p in &simplex[..dim] {
            for (c, &x) in centroid.iter_mut().zip(p) {
                *c = *c + x * inv_dim;
            }
        }
        let along = |t: T| -> Vec<T> {
            centroid
                .iter()
                .zip(&simplex[dim])
                .map(|(&c, &w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(alpha);
        let f_r = f(&reflected);
        if f_r < values[0] {
            let expanded = along(gamma);
            let f_e = f(&expanded);
            if f_e < f_r {
                simplex[dim] = expanded;
                values[dim] = f_e;
            } else {
                simplex[dim] = reflected;
                values[dim] = f_r;
            }
        } else if f_r < values[dim - 1] {
            simplex[dim] = reflected;
            values[dim] = f_r;
        } else {
            let (candidate, f_c) = if f_r < values[dim] {
                let c = along(rho);
                let v = f(&c);
                (c, v)
            } else {
                let c = along(-rho);
                let v = f(&c);
                (c, v)
            };
            if f_c < values[dim].min(f_r) {
                simplex[dim] = candidate;
                values[dim] = f_c;
            } else {
                let best = simplex[0].clone();
                for i in 1..=dim {
                    for (x, &b) in simplex[i].iter_mut().zip(&best) {
                        *x = b + sigma * (*x - b);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }

    let best = (0..=dim)
        .min_by(|&a, &b| {
            values[a]
                .partial_cmp(&values[b])
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap();
    (simplex[best].clone(), values[best])
}

/// Maximizes a unimodal function on `[lo, hi]` to interval width `tol`.
pub fn golden_section_max<T, F>(mut f: F, mut lo: T, mut hi: T, tol: T) -> (T, T)
where
    T: Real,
    F: FnMut(T) -> T,
{
    let inv_phi = (lit::<T>(5.0).sqrt() - T::one()) * lit(0.5);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Brent's method (golden section with parabolic steps) for the maximum of
/// a unimodal function on `[lo, hi]`, locating it to about `tol`.
pub fn brent_max<T, F>(mut f: F, mut lo: T, mut hi: T, tol: T) -> (T, T)
where
    T: Real,
    F: FnMut(T) -> T,
{
    let half = lit::<T>(0.5);
    let cgold = (lit::<T>(3.0) - lit::<T>(5.0).sqrt()) * half;
    let rel = T::epsilon().sqrt();
    let mut g = |x: T| -f(x);
    let mut x = lo + cgold * (hi - lo);
    let mut fx = g(x);
    let (mut w, mut v, mut fw, mut fv) = (x, x, fx, fx);
    let (mut d, mut e) = (T::zero(), T::zero());
    for _ in 0..200 {
        let mid = (lo + hi) * half;
        let tol1 = rel * x.abs() + tol / lit(3.0);
        let tol2 = tol1 + tol1;
        if (x - mid).abs() <= tol2 - (hi - lo) * half {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = (q - r) * lit(2.0);
            if q > T::zero() {
                p = -p;
            } else {
                q = -q;
            }
            let e_prev = e;
            e = d;
            if p.abs() < (half * q * e_prev).abs() && p > q * (lo - x) && p < q * (hi - x) {
                d = p / q;
                let u = x + d;
                if u - lo < tol2 || hi - u < tol2 {
                    d = if mid >= x { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= mid { lo - x } else { hi - x };
            d = cgold * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d >= T::zero() {
            x + tol1
        } else {
            x - tol1
        };
        let fu = g(u);
        if fu <= fx {
            if u >= x {
                lo = x;
            } else {
                hi = x;
            }
            (v, fv, w, fw, x, fx) = (w, fw, x, fx, u, fu);
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                (v, fv, w, fw) = (w, fw, u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    (x, -fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_finds_rosenbrock_minimum() {
        let rosen = |p: &[f64]| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2);
        let opts = SimplexOptions {
            step: 0.5,
            max_iterations: 5000,
            value_tol: 1e-20,
        };
        let (x, v) = nelder_mead(rosen, &[-1.2, 1.0], opts);
        assert!(v < 1e-12, "{v}");
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn golden_section_on_parabola() {
        let (x, fx) = golden_section_max(|x: f64| -(x - 0.3).powi(2) + 2.0, 0.0, 1.0, 1e-9);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-15);
    }

    #[test]
    fn brent_matches_golden_with_fewer_evaluations() {
        let f = |x: f64| (1.0 + 3.0 * x).sqrt() - 0.8 * x * x;
        let mut calls = 0;
        let (xb, fb) = brent_max(
            |x| {
                calls += 1;
                f(x)
            },
            0.0,
            1.0,
            1e-8,
        );
        let (xg, fg) = golden_section_max(f, 0.0, 1.0, 1e-10);
        assert!((xb - xg).abs() < 1e-7, "{xb} vs {xg}");
        assert!((fb - fg).abs() < 1e-14);
        assert!(calls < 20, "{calls} evaluations");
        // Maximum on the boundary.
        let (x, _) = brent_max(|x: f64| x, 0.0, 1.0, 1e-8);
        assert!(1.0 - x < 1e-7);
    }
}
