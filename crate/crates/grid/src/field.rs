use num_complex::Complex64;

use crate::error::{GridError, Result};

/// Samples `f(x_a, x_b)` on a periodic grid, row-major with the first plane
/// axis as the row index: `values[i * n + j] = f(x_i, x_j)`,
/// `x_k = -L/2 + k L / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    n: usize,
    box_length: f64,
    theta: f64,
    t_slice: f64,
    plane: (usize, usize),
    values: Vec<Complex64>,
}

impl GridField {
    pub fn new(n: usize, box_length: f64, theta: f64, values: Vec<Complex64>) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(GridError::NotPowerOfTwo(n));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(GridError::BadBoxLength(box_length));
        }
        if values.len() != n * n {
            return Err(GridError::LengthMismatch {
                expected: n * n,
                got: values.len(),
            });
        }
        Ok(GridField {
            n,
            box_length,
            theta,
            t_slice: 0.0,
            plane: (1, 2),
            values,
        })
    }

    /// Sample `f(x_a, x_b)` at the grid points.
    pub fn from_fn(
        n: usize,
        box_length: f64,
        theta: f64,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        let dx = box_length / n as f64;
        let x = |k: usize| -box_length / 2.0 + k as f64 * dx;
        let values = (0..n * n).map(|idx| f(x(idx / n), x(idx % n))).collect();
        GridField::new(n, box_length, theta, values)
    }

    pub fn with_t_slice(mut self, t: f64) -> Self {
        self.t_slice = t;
        self
    }

    /// Spatial axes `(a, b)` spanned by the grid, `1 <= a < b <= 3`.
    pub fn with_plane(mut self, a: usize, b: usize) -> Result<Self> {
        if !(1..=3).contains(&a) || !(1..=3).contains(&b) || a >= b {
            return Err(GridError::Mismatch(format!("invalid plane ({a}, {b})")));
        }
        self.plane = (a, b);
        Ok(self)
    }

    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        let mut g = GridField::new(self.n, self.box_length, self.theta, values)?;
        g.t_slice = self.t_slice;
        g.plane = self.plane;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn t_slice(&self) -> f64 {
        self.t_slice
    }

    pub fn plane(&self) -> (usize, usize) {
        self.plane
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.n + j]
    }

    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.spacing() * self.spacing()
    }

    /// Coordinate of grid index `k` along either axis.
    pub fn coord(&self, k: usize) -> f64 {
        -self.box_length / 2.0 + k as f64 * self.spacing()
    }

    /// Signed wavenumber `2 pi m / L` of FFT bin `k`.
    pub fn wavenumber(&self, k: usize) -> f64 {
        let m = if k <= self.n / 2 {
            k as f64
        } else {
            k as f64 - self.n as f64
        };
        2.0 * std::f64::consts::PI * m / self.box_length
    }

    /// `sum f * cell_area`.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.cell_area()
    }

    /// Discrete L2 norm `sqrt(sum |f|^2 * cell_area)`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.cell_area()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |f - g|` over grid points.
    pub fn max_diff(&self, other: &GridField) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn pointwise_mul(&self, other: &GridField) -> Result<GridField> {
        self.check_compatible(other)?;
        let v = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        self.with_values(v)
    }

    pub(crate) fn check_compatible(&self, other: &GridField) -> Result<()> {
        if self.n != other.n {
            return Err(GridError::Mismatch(format!("size {} vs {}", self.n, other.n)));
        }
        if self.box_length != other.box_length {
            return Err(GridError::Mismatch(format!(
                "box length {} vs {}",
                self.box_length, other.box_length
            )));
        }
        if self.theta != other.theta {
            return Err(GridError::Mismatch(format!(
                "theta {} vs {}",
                self.theta, other.theta
            )));
        }
        if self.plane != other.plane {
            return Err(GridError::Mismatch(format!(
                "plane {:?} vs {:?}",
                self.plane, other.plane
            )));
        }
        if self.t_slice != other.t_slice {
            return Err(GridError::Mismatch(format!(
                "time slice {} vs {}",
                self.t_slice, other.t_slice
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(matches!(
            GridField::new(6, 1.0, 0.0, vec![Complex64::new(0.0, 0.0); 36]),
            Err(GridError::NotPowerOfTwo(6))
        ));
        assert!(GridField::new(4, 1.0, 0.0, vec![Complex64::new(0.0, 0.0); 15]).is_err());
        assert!(GridField::new(4, -1.0, 0.0, vec![Complex64::new(0.0, 0.0); 16]).is_err());
    }

    #[test]
    fn coordinates_are_centered() {
        let g = GridField::from_fn(8, 8.0, 0.0, Complex64::new).unwrap();
        assert_eq!(g.coord(0), -4.0);
        assert_eq!(g.get(1, 2), Complex64::new(-3.0, -2.0));
        assert_eq!(g.wavenumber(1), 2.0 * std::f64::consts::PI / 8.0);
        assert_eq!(g.wavenumber(7), -2.0 * std::f64::consts::PI / 8.0);
    }

    #[test]
    fn mismatch_detected() {
        let a = GridField::from_fn(4, 1.0, 0.5, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        let b = GridField::from_fn(4, 1.0, 0.25, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        assert!(a.pointwise_mul(&b).is_err());
    }
}
