//! Seeded random inputs for property checks.

use num_complex::Complex;
use rand::Rng;

use crate::poly::{q, CRat, Monomial, Poly, Var};
use crate::star::ThetaProfile;

/// Shape of a random polynomial.
#[derive(Debug, Clone, Copy)]
pub struct PolyShape {
    /// Maximum number of terms drawn (duplicates merge).
    pub max_terms: usize,
    /// Maximum spatial degree of each term.
    pub spatial_degree: u16,
    /// Maximum power of `t` in each term.
    pub t_degree: u16,
    /// Maximum total degree; `None` leaves only the two caps above.
    pub total_degree: Option<u16>,
    /// Allow complex coefficients (otherwise real).
    pub complex: bool,
}

impl PolyShape {
    pub fn new(max_terms: usize, spatial_degree: u16, t_degree: u16) -> Self {
        PolyShape {
            max_terms,
            spatial_degree,
            t_degree,
            total_degree: None,
            complex: true,
        }
    }

    pub fn total(mut self, d: u16) -> Self {
        self.total_degree = Some(d);
        self
    }

    pub fn real(mut self) -> Self {
        self.complex = false;
        self
    }
}

fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> num_rational::BigRational {
    let num = rng.gen_range(-5i64..=5);
    let den = rng.gen_range(1i64..=3);
    q(num, den)
}

pub fn coefficient<R: Rng + ?Sized>(rng: &mut R, complex: bool) -> CRat {
    loop {
        let re = small_rational(rng);
        let im = if complex {
            small_rational(rng)
        } else {
            q(0, 1)
        };
        let c = Complex::new(re, im);
        if c != Complex::new(q(0, 1), q(0, 1)) {
            return c;
        }
    }
}

fn monomial<R: Rng + ?Sized>(rng: &mut R, shape: &PolyShape) -> Monomial {
    loop {
        let sdeg = rng.gen_range(0..=shape.spatial_degree);
        let mut e = [0u16; 5];
        for _ in 0..sdeg {
            e[rng.gen_range(1..=3)] += 1;
        }
        e[Var::T.index()] = rng.gen_range(0..=shape.t_degree);
        let m = Monomial(e);
        if shape.total_degree.is_none_or(|d| m.degree() <= d as u32) {
            return m;
        }
    }
}

/// Random polynomial in `(t, x1, x2, x3)`.
pub fn poly<R: Rng + ?Sized>(rng: &mut R, shape: &PolyShape) -> Poly {
    let n = rng.gen_range(1..=shape.max_terms.max(1));
    Poly::from_terms((0..n).map(|_| (monomial(rng, shape), coefficient(rng, shape.complex))))
}

/// Random purely imaginary polynomial (an anti-selfadjoint element).
pub fn imaginary_poly<R: Rng + ?Sized>(rng: &mut R, shape: &PolyShape) -> Poly {
    let real = poly(rng, &shape.real());
    real.scale(&crate::poly::ci(1, 1))
}

/// Random antisymmetric profile with entries of `t`-degree at most `t_degree`.
pub fn theta<R: Rng + ?Sized>(rng: &mut R, t_degree: u16) -> ThetaProfile {
    let entry = |rng: &mut R| {
        let n = rng.gen_range(0..=2usize);
        Poly::from_terms((0..n).map(|_| {
            let e = rng.gen_range(0..=t_degree);
            (Monomial([e, 0, 0, 0, 0]), coefficient(rng, false))
        }))
    };
    let a = entry(rng);
    let b = entry(rng);
    let c = entry(rng);
    ThetaProfile::new(a, b, c).expect("time-only entries")
}

/// Random profile whose derivative is guaranteed nonzero.
pub fn dynamic_theta<R: Rng + ?Sized>(rng: &mut R, t_degree: u16) -> ThetaProfile {
    let t_degree = t_degree.max(1);
    loop {
        let th = theta(rng, t_degree);
        if !th.theta_dot().is_zero() {
            return th;
        }
    }
}
