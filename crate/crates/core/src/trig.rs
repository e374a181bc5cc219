//! Finite Fourier series `sum_n a_n cos(n u) + b_n sin(n u)` with exact
//! rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::poly::q;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct TrigSeries {
    /// harmonic -> (cos coefficient, sin coefficient)
    terms: BTreeMap<u32, (BigRational, BigRational)>,
}

fn half() -> BigRational {
    q(1, 2)
}

impl TrigSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut s = Self::zero();
        s.add(0, c, BigRational::zero());
        s
    }

    pub fn cos(n: u32) -> Self {
        let mut s = Self::zero();
        s.add(n, q(1, 1), BigRational::zero());
        s
    }

    pub fn sin(n: u32) -> Self {
        let mut s = Self::zero();
        s.add(n, BigRational::zero(), q(1, 1));
        s
    }

    fn add(&mut self, n: u32, a: BigRational, b: BigRational) {
        // sin(0 u) = 0
        let b = if n == 0 { BigRational::zero() } else { b };
        let e = self
            .terms
            .entry(n)
            .or_insert_with(|| (BigRational::zero(), BigRational::zero()));
        e.0 += a;
        e.1 += b;
        if e.0.is_zero() && e.1.is_zero() {
            self.terms.remove(&n);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn cos_coeff(&self, n: u32) -> BigRational {
        self.terms.get(&n).map(|t| t.0.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn sin_coeff(&self, n: u32) -> BigRational {
        self.terms.get(&n).map(|t| t.1.clone()).unwrap_or_else(BigRational::zero)
    }

    /// Nonzero harmonics in increasing order.
    pub fn harmonics(&self) -> impl Iterator<Item = (u32, &BigRational, &BigRational)> {
        self.terms.iter().map(|(n, (a, b))| (*n, a, b))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut s = Self::zero();
        for (n, a, b) in self.harmonics() {
            s.add(n, a * c, b * c);
        }
        s
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (n, a, b) in other.harmonics() {
            s.add(n, a.clone(), b.clone());
        }
        s
    }

    pub fn derivative(&self) -> Self {
        let mut s = Self::zero();
        for (n, a, b) in self.harmonics() {
            let nn = q(n as i64, 1);
            s.add(n, &nn * b, -(&nn * a));
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut s = Self::zero();
        let h = half();
        for (m, a1, b1) in self.harmonics() {
            for (n, a2, b2) in other.harmonics() {
                let sum = m + n;
                let diff = m.abs_diff(n);
                // sign of sin((m-n)u) relative to sin(|m-n|u)
                let sg = if m >= n { q(1, 1) } else { q(-1, 1) };
                // cos m cos n = (cos(m+n) + cos(m-n))/2
                let cc = a1 * a2 * &h;
                s.add(sum, cc.clone(), BigRational::zero());
                s.add(diff, cc, BigRational::zero());
                // sin m sin n = (cos(m-n) - cos(m+n))/2
                let ss = b1 * b2 * &h;
                s.add(diff, ss.clone(), BigRational::zero());
                s.add(sum, -ss, BigRational::zero());
                // sin m cos n = (sin(m+n) + sin(m-n))/2
                let sc = b1 * a2 * &h;
                s.add(sum, BigRational::zero(), sc.clone());
                s.add(diff, BigRational::zero(), sc * &sg);
                // cos m sin n = (sin(m+n) - sin(m-n))/2
                let cs = a1 * b2 * &h;
                s.add(sum, BigRational::zero(), cs.clone());
                s.add(diff, BigRational::zero(), -(cs * &sg));
            }
        }
        s
    }

    pub fn eval(&self, u: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.harmonics()
            .map(|(n, a, b)| {
                let x = n as f64 * u;
                a.to_f64().unwrap_or(f64::NAN) * x.cos() + b.to_f64().unwrap_or(f64::NAN) * x.sin()
            })
            .sum()
    }
}

impl fmt::Debug for TrigSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TrigSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, a, b) in self.harmonics() {
            for (c, name) in [(a, "cos"), (b, "sin")] {
                if c.is_zero() {
                    continue;
                }
                let neg = c.is_negative();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if neg { "-" } else { "+" })?;
                }
                first = false;
                let c = c.abs();
                if n == 0 {
                    write!(f, "{c}")?;
                } else {
                    write!(f, "{c}*{name}({n}u)")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_cos_density() {
        let f = TrigSeries::cos(1);
        let fp = f.derivative();
        assert_eq!(fp, TrigSeries::sin(1).scale(&q(-1, 1)));
        let d = fp.mul(&fp).mul(&f);
        assert_eq!(d.cos_coeff(1), q(1, 4));
        assert_eq!(d.cos_coeff(3), q(-1, 4));
        assert_eq!(d.harmonics().count(), 2);
        assert_eq!(d.to_string(), "1/4*cos(1u) - 1/4*cos(3u)");
    }

    #[test]
    fn pythagoras() {
        let c = TrigSeries::cos(2);
        let s = TrigSeries::sin(2);
        assert_eq!(c.mul(&c).plus(&s.mul(&s)), TrigSeries::constant(q(1, 1)));
    }

    #[test]
    fn product_matches_numerics() {
        let a = TrigSeries::cos(1).plus(&TrigSeries::sin(3).scale(&q(2, 3)));
        let b = TrigSeries::sin(2).plus(&TrigSeries::constant(q(-1, 2)));
        let ab = a.mul(&b);
        for k in 0..20 {
            let u = 0.37 * k as f64 - 2.0;
            assert!((ab.eval(u) - a.eval(u) * b.eval(u)).abs() < 1e-12);
        }
        let d = a.derivative();
        let h = 1e-6;
        assert!(((a.eval(0.3 + h) - a.eval(0.3 - h)) / (2.0 * h) - d.eval(0.3)).abs() < 1e-6);
    }
}
