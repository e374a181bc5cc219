//! Sparse multivariate polynomials over the complex rationals.
//!
//! The variable set is fixed to `(t, x1, x2, x3, eps)`: the four spacetime
//! coordinates plus a formal bookkeeping parameter used for truncated
//! expansions. Terms live in a `BTreeMap` keyed by a graded-lex monomial, so
//! two polynomials are equal exactly when their term maps are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact complex rational number.
pub type CRat = Complex<BigRational>;

/// Number of variables carried by every monomial.
pub const NVARS: usize = 5;

/// Build the rational `num/den`. Panics on a zero denominator.
pub fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Real complex-rational `num/den`.
pub fn cr(num: i64, den: i64) -> CRat {
    Complex::new(q(num, den), BigRational::zero())
}

/// Purely imaginary complex-rational `i·num/den`.
pub fn ci(num: i64, den: i64) -> CRat {
    Complex::new(BigRational::zero(), q(num, den))
}

pub fn c_real(r: BigRational) -> CRat {
    Complex::new(r, BigRational::zero())
}

/// The imaginary unit.
pub fn imag_unit() -> CRat {
    ci(1, 1)
}

/// Polynomial variables in their fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T,
    X1,
    X2,
    X3,
    Eps,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::T, Var::X1, Var::X2, Var::X3, Var::Eps];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Coordinate `x^mu` with `x^0 = t`.
    pub fn coord(mu: usize) -> Var {
        match mu {
            0 => Var::T,
            1 => Var::X1,
            2 => Var::X2,
            3 => Var::X3,
            _ => panic!("coordinate index {mu} out of range 0..=3"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::X3 => "x3",
            Var::Eps => "eps",
        }
    }
}

/// Exponent vector over `(t, x1, x2, x3, eps)`.
///
/// Ordered graded-lexicographically: total degree first, then exponents
/// compared from the largest variable (`eps`) down to `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u16; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Degree in `x1, x2, x3`.
    pub fn spatial_degree(&self) -> u32 {
        self.0[1..4].iter().map(|&e| e as u32).sum()
    }

    pub fn spatial(&self) -> [u16; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        Monomial(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact polynomial with complex-rational coefficients.
///
/// Invariant: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, CRat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(cr(1, 1))
    }

    pub fn constant(c: CRat) -> Self {
        Poly::monomial(c, Monomial::ONE)
    }

    pub fn monomial(c: CRat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        Poly::monomial(cr(1, 1), Monomial::var(v))
    }

    pub fn t() -> Self {
        Poly::var(Var::T)
    }

    /// Spatial coordinate `x^i`, `i` in `1..=3`.
    pub fn x(i: usize) -> Self {
        assert!((1..=3).contains(&i), "spatial index {i} out of range");
        Poly::var(Var::coord(i))
    }

    pub fn eps() -> Self {
        Poly::var(Var::Eps)
    }

    /// Collect `(monomial, coefficient)` pairs, summing duplicates and
    /// dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, CRat)>>(iter: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: CRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &CRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> CRat {
        self.terms.get(m).cloned().unwrap_or_else(CRat::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> CRat {
        self.coeff(&Monomial::ONE)
    }

    pub fn leading(&self) -> Option<(&Monomial, &CRat)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v) as u32).max().unwrap_or(0)
    }

    pub fn spatial_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::spatial_degree)
            .max()
            .unwrap_or(0)
    }

    /// True when only the listed variables occur.
    pub fn only_vars(&self, allowed: &[Var]) -> bool {
        self.terms.keys().all(|m| {
            Var::ALL
                .iter()
                .all(|v| m.exp(*v) == 0 || allowed.contains(v))
        })
    }

    pub fn scale(&self, c: &CRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a * c))
                .collect(),
        }
    }

    /// Multiply by a single term `c·m`.
    pub fn mul_term(&self, m: &Monomial, c: &CRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.times(m), a * c))
                .collect(),
        }
    }

    /// Pointwise (commutative) product.
    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_truncated(other, None)
    }

    /// Pointwise product, dropping terms of `eps`-degree above `cutoff`.
    pub fn mul_truncated(&self, other: &Poly, cutoff: Option<u32>) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(n) = cutoff {
                    if (ma.exp(Var::Eps) + mb.exp(Var::Eps)) as u32 > n {
                        continue;
                    }
                }
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative with respect to `x^mu` (`x^0 = t`).
    pub fn partial(&self, mu: usize) -> Poly {
        self.derivative(Var::coord(mu))
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let idx = v.index();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.0[idx] -= 1;
            out.add_term(dm, c * cr(e as i64, 1));
        }
        out
    }

    /// Coefficient-wise complex conjugation.
    pub fn conj(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect(),
        }
    }

    /// Drop all terms whose `eps`-degree exceeds `n`.
    pub fn truncate_eps(&self, n: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| (m.exp(Var::Eps) as u32) <= n)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Part of exact `eps`-degree `n`, with `eps` removed.
    pub fn eps_coefficient(&self, n: u16) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(Var::Eps) == n)
                .map(|(m, c)| {
                    let mut k = *m;
                    k.0[Var::Eps.index()] = 0;
                    (k, c.clone())
                })
                .collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    /// True when `conj(p) == -p`.
    pub fn is_imaginary(&self) -> bool {
        self.terms.values().all(|c| c.re.is_zero())
    }

    pub fn real_part(&self) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, c_real(c.re.clone()))))
    }

    pub fn imag_part(&self) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, c_real(c.im.clone()))))
    }

    /// Replace `t` by a polynomial (used to compose `theta(t)` profiles).
    pub fn substitute(&self, v: Var, value: &Poly) -> Poly {
        let mut out = Poly::zero();
        let mut powers: Vec<Poly> = vec![Poly::one()];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            let mut rest = *m;
            rest.0[v.index()] = 0;
            out += &powers[e].mul_term(&rest, c);
        }
        out
    }

    /// Floating-point evaluation at `(t, x1, x2, x3, eps)`.
    pub fn eval_f64(&self, point: [f64; NVARS]) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, c) in &self.terms {
            let mut v = 1.0;
            for (e, x) in m.0.iter().zip(point.iter()) {
                v *= x.powi(*e as i32);
            }
            re += c.re.to_f64().unwrap_or(f64::NAN) * v;
            im += c.im.to_f64().unwrap_or(f64::NAN) * v;
        }
        (re, im)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a Poly> for Poly {
    fn add_assign(&mut self, rhs: &'a Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl AddAssign for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        *self += &rhs;
    }
}

impl<'a> SubAssign<&'a Poly> for Poly {
    fn sub_assign(&mut self, rhs: &'a Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl SubAssign for Poly {
    fn sub_assign(&mut self, rhs: Poly) {
        *self -= &rhs;
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl From<CRat> for Poly {
    fn from(c: CRat) -> Self {
        Poly::constant(c)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Poly::constant(cr(n, 1))
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Render a coefficient. Returns `(negative, body)` where `body` is the
/// magnitude when `negative` is set.
fn fmt_coeff(c: &CRat) -> (bool, String, bool) {
    // third field: whether the body is exactly "1" (so it can be elided)
    if c.im.is_zero() {
        let neg = c.re.is_negative();
        let mag = c.re.abs();
        let unit = mag.is_one();
        (neg, fmt_rational(&mag), unit)
    } else if c.re.is_zero() {
        let neg = c.im.is_negative();
        let mag = c.im.abs();
        let body = if mag.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", fmt_rational(&mag))
        };
        (neg, body, false)
    } else {
        let sign = if c.im.is_negative() { "-" } else { "+" };
        let im = c.im.abs();
        let im_s = if im.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", fmt_rational(&im))
        };
        (false, format!("({} {} {})", fmt_rational(&c.re), sign, im_s), false)
    }
}

pub(crate) fn fmt_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for v in Var::ALL {
        match m.exp(v) {
            0 => {}
            1 => parts.push(v.name().to_string()),
            e => parts.push(format!("{}^{}", v.name(), e)),
        }
    }
    parts.join(".")
}

/// Render a single `coefficient × body` term; `body` is empty for constants.
pub(crate) fn fmt_term(c: &CRat, body: &str) -> (bool, String) {
    let (neg, coeff, unit) = fmt_coeff(c);
    let text = if body.is_empty() {
        coeff
    } else if unit {
        body.to_string()
    } else {
        format!("{coeff}*{body}")
    };
    (neg, text)
}

pub(crate) fn join_terms<I: Iterator<Item = (bool, String)>>(f: &mut fmt::Formatter<'_>, it: I) -> fmt::Result {
    let mut first = true;
    for (neg, text) in it {
        if first {
            if neg {
                write!(f, "-")?;
            }
            first = false;
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        write!(f, "{text}")?;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Canonical text form: terms in descending monomial order, `.` joining
/// variable factors, `*` separating the coefficient. Parseable by the
/// expression front-end.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        join_terms(
            f,
            self.terms
                .iter()
                .rev()
                .map(|(m, c)| fmt_term(c, &fmt_monomial(m))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x1() -> Poly {
        Poly::x(1)
    }

    #[test]
    fn add_examples() {
        assert_eq!(&x1() + &x1(), x1().scale(&cr(2, 1)));
        let p = &x1() * &Poly::x(2);
        assert_eq!(&p + &Poly::zero(), p);
        let it = Poly::t().scale(&ci(1, 1));
        assert!((&it + &it.scale(&cr(-1, 1))).is_zero());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&x1() * &Poly::x(2), Poly::monomial(cr(1, 1), Monomial([0, 1, 1, 0, 0])));
        let a = &x1() + &Poly::constant(ci(1, 1));
        let b = &x1() - &Poly::constant(ci(1, 1));
        assert_eq!(&a * &b, &x1().pow(2) + &Poly::one());
        assert_eq!(&Poly::t() * &Poly::t().pow(2), Poly::t().pow(3));
    }

    #[test]
    fn partial_examples() {
        let p = &x1().pow(2) * &Poly::x(2);
        assert_eq!(p.partial(1), (&x1() * &Poly::x(2)).scale(&cr(2, 1)));
        assert_eq!(Poly::t().pow(3).partial(0), Poly::t().pow(2).scale(&cr(3, 1)));
        assert!(x1().partial(2).is_zero());
        // eps is a constant for the coordinate derivatives
        assert!(Poly::eps().partial(0).is_zero());
    }

    #[test]
    fn conj_examples() {
        let p = x1().scale(&ci(1, 1));
        assert_eq!(p.conj(), x1().scale(&ci(-1, 1)));
        let q = &(&x1() * &Poly::x(2)) + &Poly::constant(ci(1, 2));
        let expect = &(&x1() * &Poly::x(2)) - &Poly::constant(ci(1, 2));
        assert_eq!(q.conj(), expect);
        assert_eq!(q.conj().conj(), q);
    }

    #[test]
    fn truncate_examples() {
        // 1 + eps*l + eps^2 l^2 / 2 with l = x1
        let l = x1();
        let e = Poly::eps();
        let p = &(&Poly::one() + &(&e * &l)) + &(&e.pow(2) * &l.pow(2)).scale(&cr(1, 2));
        assert_eq!(p.truncate_eps(1), &Poly::one() + &(&e * &l));
        assert_eq!(p.truncate_eps(0), Poly::one());
        assert!(Poly::zero().truncate_eps(5).is_zero());
    }

    #[test]
    fn monomial_order_is_graded() {
        let a = Monomial([3, 0, 0, 0, 0]);
        let b = Monomial([0, 0, 0, 0, 1]);
        let c = Monomial([0, 2, 0, 0, 2]);
        assert!(b < a);
        assert!(a < c);
        assert!(Monomial::var(Var::T) < Monomial::var(Var::X1));
    }

    #[test]
    fn display_is_canonical() {
        let p = &(&x1() * &Poly::x(2)) - &Poly::t().scale(&ci(1, 2));
        assert_eq!(p.to_string(), "x1.x2 - 1/2*i*t");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::constant(Complex::new(q(1, 3), q(-2, 1))).to_string(), "(1/3 - 2*i)");
        assert_eq!(x1().pow(2).scale(&cr(-3, 1)).to_string(), "-3*x1^2");
    }

    #[test]
    fn substitute_composes() {
        let p = &Poly::t().pow(2) + &x1();
        let r = p.substitute(Var::T, &(&Poly::t() + &Poly::one()));
        let expect = &(&(&Poly::t().pow(2) + &Poly::t().scale(&cr(2, 1))) + &Poly::one()) + &x1();
        assert_eq!(r, expect);
    }
}
