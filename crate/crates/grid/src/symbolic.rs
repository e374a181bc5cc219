use num_complex::Complex64;
use rayon::prelude::*;

use nckit_core::{Poly, Var};

use crate::error::{GridError, Result};
use crate::field::GridField;
use crate::star::grid_star;

/// Highest star-series order evaluated.
const MAX_ORDER: usize = 64;

/// `P(x1, x2) exp(-(x1^2 + x2^2) / (2 sigma^2))`.
#[derive(Debug, Clone)]
pub struct WindowedPoly {
    terms: Vec<(u32, u32, Complex64)>,
    sigma: f64,
}

impl WindowedPoly {
    /// `poly` may depend on `x1` and `x2` only.
    pub fn new(poly: &Poly, sigma: f64) -> Result<Self> {
        if !poly.only_vars(&[Var::X1, Var::X2]) {
            return Err(GridError::Symbolic(format!(
                "windowed polynomial must depend on x1, x2 only: {poly}"
            )));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(GridError::Symbolic(format!("window width {sigma} is not positive")));
        }
        let terms = poly
            .terms()
            .map(|(m, c)| {
                let (re, im) = Poly::constant(c.clone()).eval_f64([0.0; 5]);
                (m.exp(Var::X1) as u32, m.exp(Var::X2) as u32, Complex64::new(re, im))
            })
            .collect();
        Ok(WindowedPoly { terms, sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    fn degree(&self) -> u32 {
        self.terms.iter().map(|(a, b, _)| a + b).max().unwrap_or(0)
    }

    /// `d1^a d2^b P` at `(x, y)`.
    fn poly_derivative(&self, a: u32, b: u32, x: f64, y: f64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for &(e1, e2, c) in &self.terms {
            if e1 < a || e2 < b {
                continue;
            }
            let k = falling(e1, a) * falling(e2, b);
            s += c * k * x.powi((e1 - a) as i32) * y.powi((e2 - b) as i32);
        }
        s
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let w = (-(x * x + y * y) / (2.0 * self.sigma * self.sigma)).exp();
        self.poly_derivative(0, 0, x, y) * w
    }

    /// Sample on a grid.
    pub fn sample(&self, n: usize, box_length: f64, theta: f64) -> Result<GridField> {
        GridField::from_fn(n, box_length, theta, |x, y| self.eval(x, y))
    }
}

fn falling(n: u32, k: u32) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

/// Pascal triangle up to `MAX_ORDER`.
fn binomials() -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = vec![vec![1.0]];
    for n in 1..=MAX_ORDER {
        let prev = &rows[n - 1];
        let mut row = vec![1.0; n + 1];
        for k in 1..n {
            row[k] = prev[k - 1] + prev[k];
        }
        rows.push(row);
    }
    rows
}

/// `d^j/dx^j exp(-x^2 / (2 sigma^2))` for `j = 0..=jmax` via Hermite recursion.
fn gaussian_derivatives(x: f64, sigma: f64, jmax: usize) -> Vec<f64> {
    let y = x / sigma;
    let g = (-0.5 * y * y).exp();
    let mut he = vec![1.0, y];
    for j in 1..jmax {
        let next = y * he[j] - j as f64 * he[j - 1];
        he.push(next);
    }
    he.truncate(jmax + 1);
    let mut s = 1.0;
    he.iter()
        .map(|h| {
            let v = s * h * g;
            s *= -1.0 / sigma;
            v
        })
        .collect()
}

/// Partial derivatives of a windowed polynomial at one point.
struct PointDerivatives<'a> {
    wx: Vec<f64>,
    wy: Vec<f64>,
    /// `d1^a d2^b P` for `a + b <= deg`.
    p: Vec<Vec<Complex64>>,
    deg: usize,
    binom: &'a [Vec<f64>],
}

impl<'a> PointDerivatives<'a> {
    fn new(f: &WindowedPoly, x: f64, y: f64, binom: &'a [Vec<f64>]) -> Self {
        let deg = f.degree() as usize;
        let p = (0..=deg)
            .map(|a| (0..=deg - a).map(|b| f.poly_derivative(a as u32, b as u32, x, y)).collect())
            .collect();
        PointDerivatives {
            wx: gaussian_derivatives(x, f.sigma, MAX_ORDER),
            wy: gaussian_derivatives(y, f.sigma, MAX_ORDER),
            p,
            deg,
            binom,
        }
    }

    /// `d1^a d2^b (P w)` by the Leibniz rule.
    fn get(&self, a: usize, b: usize) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        let (ca, cb) = (&self.binom[a], &self.binom[b]);
        for pa in 0..=self.deg.min(a) {
            for pb in 0..=(self.deg - pa).min(b) {
                let (j, l) = (a - pa, b - pb);
                s += self.p[pa][pb] * (ca[j] * cb[l] * self.wx[j] * self.wy[l]);
            }
        }
        s
    }
}

/// The star series
/// `sum_n (i theta / 2)^n / n! sum_k C(n,k) (-1)^k d1^{n-k} d2^k f . d1^k d2^{n-k} g`
/// at one point, summed until three consecutive orders fall below `tol`.
fn star_series_at(
    f: &WindowedPoly,
    g: &WindowedPoly,
    theta: f64,
    x: f64,
    y: f64,
    binom: &[Vec<f64>],
    tol: f64,
) -> Complex64 {
    let df = PointDerivatives::new(f, x, y, binom);
    let dg = PointDerivatives::new(g, x, y, binom);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pref = Complex64::new(1.0, 0.0);
    let half = Complex64::new(0.0, theta / 2.0);
    let mut quiet = 0;
    for n in 0..=MAX_ORDER {
        if n > 0 {
            pref = pref * half / n as f64;
        }
        let mut term = Complex64::new(0.0, 0.0);
        for k in 0..=n {
            let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
            term += df.get(n - k, k) * dg.get(k, n - k) * (binom[n][k] * sgn);
        }
        let t = pref * term;
        sum += t;
        if theta == 0.0 {
            break;
        }
        if t.norm() <= tol {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    sum
}

/// Rough sup norm of a windowed polynomial (the polynomial's absolute
/// coefficients at radius `3 sigma`).
fn magnitude(f: &WindowedPoly) -> f64 {
    let r = 3.0 * f.sigma;
    f.terms
        .iter()
        .map(|(a, b, c)| c.norm() * r.powi((*a + *b) as i32))
        .sum::<f64>()
        .max(1.0)
}

/// Symbolic star product of two windowed polynomials, evaluated at the grid
/// points of an `n x n` grid of side `box_length`.
pub fn symbolic_star_values(
    f: &WindowedPoly,
    g: &WindowedPoly,
    theta: f64,
    n: usize,
    box_length: f64,
) -> Result<GridField> {
    let template = GridField::from_fn(n, box_length, theta, |_, _| Complex64::new(0.0, 0.0))?;
    let binom = binomials();
    let tol = 1e-18 * magnitude(f) * magnitude(g);
    let values = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let x = template.coord(idx / n);
            let y = template.coord(idx % n);
            star_series_at(f, g, theta, x, y, &binom, tol)
        })
        .collect();
    template.with_values(values)
}

/// `max |grid_star(f, g) - symbolic(f * g)|` over grid points.
pub fn cross_validate_symbolic(
    f: &WindowedPoly,
    g: &WindowedPoly,
    theta: f64,
    n: usize,
    box_length: f64,
) -> Result<f64> {
    let dx = box_length / n as f64;
    for w in [f, g] {
        if w.sigma < 2.0 * dx || 8.0 * w.sigma > box_length {
            return Err(GridError::Symbolic(format!(
                "window width {} is not resolvable on this grid (spacing {dx}, box {box_length})",
                w.sigma
            )));
        }
    }
    let gf = grid_star(&f.sample(n, box_length, theta)?, &g.sample(n, box_length, theta)?)?;
    let sym = symbolic_star_values(f, g, theta, n, box_length)?;
    gf.max_diff(&sym)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_derivative_values() {
        let s = 1.5;
        let d = gaussian_derivatives(0.7, s, 3);
        let g = (-0.7f64 * 0.7 / (2.0 * s * s)).exp();
        assert!((d[0] - g).abs() < 1e-15);
        assert!((d[1] + 0.7 / (s * s) * g).abs() < 1e-15);
        let h = 1e-5;
        let fd = |x: f64| gaussian_derivatives(x, s, 2)[1];
        assert!(((fd(0.7 + h) - fd(0.7 - h)) / (2.0 * h) - d[2]).abs() < 1e-8);
    }

    #[test]
    fn series_generators() {
        // x1 * x2 = x1 x2 + (i/2) theta on polynomials: use a very wide window
        let f = WindowedPoly::new(&Poly::x(1), 1e6).unwrap();
        let g = WindowedPoly::new(&Poly::x(2), 1e6).unwrap();
        let v = star_series_at(&f, &g, 0.8, 0.3, -0.2, &binomials(), 1e-18);
        assert!((v - Complex64::new(0.3 * -0.2, 0.4)).norm() < 1e-9);
    }

    #[test]
    fn rejects_other_variables() {
        assert!(WindowedPoly::new(&Poly::t(), 1.0).is_err());
        assert!(WindowedPoly::new(&Poly::x(3), 1.0).is_err());
        assert!(WindowedPoly::new(&Poly::x(1), 0.0).is_err());
    }

    #[test]
    fn small_grid_agreement() {
        let f = WindowedPoly::new(&Poly::x(1), 1.5).unwrap();
        let g = WindowedPoly::new(&(&Poly::x(2) + &Poly::one()), 1.5).unwrap();
        let err = cross_validate_symbolic(&f, &g, 0.5, 64, 24.0).unwrap();
        assert!(err < 1e-8, "{err}");
    }
}
