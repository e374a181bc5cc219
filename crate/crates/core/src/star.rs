//! The time-dependent Moyal product on polynomials.
//!
//! With `theta^{ij}(t)` depending on time only, the product
//!
//! ```text
//! f * g = exp( (i/2) theta^{ij}(t) d_i^x d_j^y ) f(x) g(y) |_{x=y}
//! ```
//!
//! acts fiberwise in `t`: only spatial derivatives appear in the
//! bidifferential series, and the series terminates on polynomials. The
//! product is evaluated monomial pair by monomial pair; each pair expansion
//! is memoized on the context since it only depends on theta.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{ci, cr, CRat, Monomial, Poly, Var};

/// Antisymmetric 3×3 matrix of polynomials in `t`, indexed `1..=3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaProfile {
    entries: [[Poly; 3]; 3],
}

impl ThetaProfile {
    /// Build from the upper-triangle entries `theta^{12}, theta^{13}, theta^{23}`.
    pub fn new(t12: Poly, t13: Poly, t23: Poly) -> Result<Self> {
        let z = Poly::zero;
        let entries = [
            [z(), t12.clone(), t13.clone()],
            [-&t12, z(), t23.clone()],
            [-&t13, -&t23, z()],
        ];
        Self::from_matrix(entries)
    }

    /// Build from a full matrix, checking antisymmetry and that every entry
    /// is a polynomial in `t` only.
    pub fn from_matrix(entries: [[Poly; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                if !entries[i][j].only_vars(&[Var::T]) {
                    return Err(Error::ThetaNotTimeOnly(
                        i + 1,
                        j + 1,
                        entries[i][j].to_string(),
                    ));
                }
                if entries[i][j] != -&entries[j][i] {
                    return Err(Error::NotAntisymmetric(i + 1, j + 1));
                }
            }
        }
        Ok(ThetaProfile { entries })
    }

    pub fn zero() -> Self {
        Self::new(Poly::zero(), Poly::zero(), Poly::zero()).unwrap()
    }

    /// Constant profile with the given upper-triangle values.
    pub fn constant(t12: CRat, t13: CRat, t23: CRat) -> Self {
        Self::new(Poly::constant(t12), Poly::constant(t13), Poly::constant(t23))
            .expect("constant entries are time-only")
    }

    /// Entry `theta^{ij}` with `i, j` in `1..=3`.
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i - 1][j - 1]
    }

    pub fn upper(&self) -> [&Poly; 3] {
        [self.get(1, 2), self.get(1, 3), self.get(2, 3)]
    }

    /// Entry-wise time derivative.
    pub fn theta_dot(&self) -> ThetaProfile {
        let entries = std::array::from_fn(|i| std::array::from_fn(|j| self.entries[i][j].partial(0)));
        ThetaProfile { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.upper().iter().all(|p| p.is_zero())
    }

    /// Multiply every entry by a scalar.
    pub fn scaled(&self, s: &CRat) -> ThetaProfile {
        let entries = std::array::from_fn(|i| std::array::from_fn(|j| self.entries[i][j].scale(s)));
        ThetaProfile { entries }
    }

    /// `theta^{ij} a_i b_j` summed over both indices.
    pub fn contract(&self, a: &[Poly; 3], b: &[Poly; 3]) -> Poly {
        let mut out = Poly::zero();
        for i in 1..=3 {
            for j in 1..=3 {
                if i != j {
                    out += &self.get(i, j).mul(&a[i - 1].mul(&b[j - 1]));
                }
            }
        }
        out
    }
}

type PairKey = ([u16; 3], [u16; 3]);

/// Everything the product needs: the profile, its derivative, and an
/// optional truncation order in `eps`.
#[derive(Debug, Clone)]
pub struct StarContext {
    theta: ThetaProfile,
    theta_dot: ThetaProfile,
    eps_cutoff: Option<u32>,
    cache: Arc<RwLock<HashMap<PairKey, Poly>>>,
    theta_powers: Arc<RwLock<Vec<[Poly; 3]>>>,
}

impl StarContext {
    pub fn new(theta: ThetaProfile) -> Self {
        let theta_dot = theta.theta_dot();
        StarContext {
            theta,
            theta_dot,
            eps_cutoff: None,
            cache: Arc::default(),
            theta_powers: Arc::default(),
        }
    }

    /// Same profile, results reduced mod `eps^(n+1)`. Shares the pair cache.
    pub fn with_cutoff(&self, n: u32) -> Self {
        let mut c = self.clone();
        c.eps_cutoff = Some(n);
        c
    }

    pub fn without_cutoff(&self) -> Self {
        let mut c = self.clone();
        c.eps_cutoff = None;
        c
    }

    pub fn theta(&self) -> &ThetaProfile {
        &self.theta
    }

    pub fn theta_dot(&self) -> &ThetaProfile {
        &self.theta_dot
    }

    pub fn eps_cutoff(&self) -> Option<u32> {
        self.eps_cutoff
    }

    /// Apply the context's truncation.
    pub fn reduce(&self, p: Poly) -> Poly {
        match self.eps_cutoff {
            Some(n) => p.truncate_eps(n),
            None => p,
        }
    }

    /// Star product `f * g`.
    pub fn star(&self, f: &Poly, g: &Poly) -> Poly {
        let fs = split_spatial(f);
        let gs = split_spatial(g);
        let mut out = Poly::zero();
        for (a, fa) in &fs {
            for (b, gb) in &gs {
                let rest = fa.mul_truncated(gb, self.eps_cutoff);
                if rest.is_zero() {
                    continue;
                }
                let pair = self.monomial_pair(*a, *b);
                out += &rest.mul(&pair);
            }
        }
        out
    }

    /// `f * g * h`.
    pub fn star3(&self, f: &Poly, g: &Poly, h: &Poly) -> Poly {
        self.star(&self.star(f, g), h)
    }

    /// `[f, g]_* = f*g - g*f`.
    pub fn commutator(&self, f: &Poly, g: &Poly) -> Poly {
        self.star(f, g) - self.star(g, f)
    }

    /// `d_t(f*g) - (d_t f)*g - f*(d_t g)`.
    pub fn dt_leibniz_defect(&self, f: &Poly, g: &Poly) -> Poly {
        let whole = self.star(f, g).partial(0);
        whole - self.star(&f.partial(0), g) - self.star(f, &g.partial(0))
    }

    /// The closed form the time-derivative defect must equal:
    /// `(i/2) thetadot^{ij} (d_i f) * (d_j g)`.
    pub fn dt_leibniz_expected(&self, f: &Poly, g: &Poly) -> Poly {
        let mut out = Poly::zero();
        for i in 1..=3 {
            for j in 1..=3 {
                let td = self.theta_dot.get(i, j);
                if td.is_zero() {
                    continue;
                }
                let prod = self.star(&f.partial(i), &g.partial(j));
                out += &self.reduce(td.mul(&prod));
            }
        }
        out.scale(&ci(1, 2))
    }

    /// `conj(f*g) - conj(g)*conj(f)`; vanishes identically.
    pub fn conj_defect(&self, f: &Poly, g: &Poly) -> Poly {
        self.star(f, g).conj() - self.star(&g.conj(), &f.conj())
    }

    /// `d_i(f*g) - (d_i f)*g - f*(d_i g)` for a spatial direction `i`.
    pub fn spatial_derivation_defect(&self, f: &Poly, g: &Poly, i: usize) -> Poly {
        assert!((1..=3).contains(&i), "spatial index {i} out of range");
        self.star(f, g).partial(i) - self.star(&f.partial(i), g) - self.star(f, &g.partial(i))
    }

    /// Truncated star exponential `U = sum_{n<=N} (eps*lambda)^{*n} / n!`,
    /// reduced mod `eps^(N+1)`. `lambda` must be anti-selfadjoint and
    /// eps-free, which makes `U` star-unitary to that order.
    pub fn star_exp(&self, lambda: &Poly, order: u32) -> Result<Poly> {
        check_gauge_parameter(lambda)?;
        let ctx = self.with_cutoff(order);
        let step = lambda.mul(&Poly::eps());
        let mut term = Poly::one();
        let mut sum = Poly::one();
        for n in 1..=order {
            term = ctx.star(&term, &step).scale(&cr(1, n as i64));
            if term.is_zero() {
                break;
            }
            sum += &term;
        }
        Ok(sum)
    }

    /// Expansion of `x^a * x^b` for spatial exponent vectors `a, b`.
    fn monomial_pair(&self, a: [u16; 3], b: [u16; 3]) -> Poly {
        if a == [0; 3] || b == [0; 3] || self.theta.is_zero() {
            let mut e = [0u16; 5];
            for k in 0..3 {
                e[k + 1] = a[k] + b[k];
            }
            return Poly::monomial(cr(1, 1), Monomial(e));
        }
        if let Some(p) = self.cache.read().unwrap().get(&(a, b)) {
            return p.clone();
        }
        let p = self.expand_pair(a, b);
        self.cache.write().unwrap().insert((a, b), p.clone());
        p
    }

    fn expand_pair(&self, a: [u16; 3], b: [u16; 3]) -> Poly {
        // Ordered pairs (i, j), i != j; f receives d_i, g receives d_j.
        const PAIRS: [(usize, usize); 6] = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];
        let mut acc: HashMap<([u16; 3], [u16; 3]), CRat> = HashMap::new();

        struct Walk<'a> {
            a: [u16; 3],
            b: [u16; 3],
            acc: &'a mut HashMap<([u16; 3], [u16; 3]), CRat>,
        }

        fn rec(w: &mut Walk<'_>, k: usize, counts: &mut [u16; 6], df: [u16; 3], dg: [u16; 3]) {
            if k == PAIRS.len() {
                let n: u32 = counts.iter().map(|&c| c as u32).sum();
                // (i/2)^n / prod n_ij!  times falling factorials
                let mut c = cr(1, 1);
                for &m in counts.iter() {
                    c *= cr(1, factorial(m as u32));
                }
                for d in 0..3 {
                    c = c * cr(falling(w.a[d], df[d]), 1) * cr(falling(w.b[d], dg[d]), 1);
                }
                c = c * cr(1, 1i64 << n) * i_pow(n);
                // theta^{ji} = -theta^{ij}: odd entries of PAIRS are the lower ones
                let lower: u32 = counts[1] as u32 + counts[3] as u32 + counts[5] as u32;
                if lower % 2 == 1 {
                    c = -c;
                }
                let upper_exp = [counts[0] + counts[1], counts[2] + counts[3], counts[4] + counts[5]];
                let mut x = [0u16; 3];
                for d in 0..3 {
                    x[d] = w.a[d] - df[d] + w.b[d] - dg[d];
                }
                let slot = w.acc.entry((x, upper_exp)).or_insert_with(CRat::zero);
                *slot += c;
                return;
            }
            let (i, j) = PAIRS[k];
            let max = (w.a[i] - df[i]).min(w.b[j] - dg[j]);
            for m in 0..=max {
                counts[k] = m;
                let mut df2 = df;
                let mut dg2 = dg;
                df2[i] += m;
                dg2[j] += m;
                rec(w, k + 1, counts, df2, dg2);
            }
            counts[k] = 0;
        }

        let mut walk = Walk { a, b, acc: &mut acc };
        rec(&mut walk, 0, &mut [0; 6], [0; 3], [0; 3]);

        let mut out = Poly::zero();
        for ((x, e), c) in acc {
            if c.is_zero() {
                continue;
            }
            let th = self.theta_product(e);
            let m = Monomial([0, x[0], x[1], x[2], 0]);
            out += &th.mul_term(&m, &c);
        }
        out
    }

    /// `theta12^e0 * theta13^e1 * theta23^e2`.
    fn theta_product(&self, e: [u16; 3]) -> Poly {
        let need = *e.iter().max().unwrap() as usize;
        {
            let mut pw = self.theta_powers.write().unwrap();
            if pw.is_empty() {
                pw.push([Poly::one(), Poly::one(), Poly::one()]);
            }
            while pw.len() <= need {
                let last = pw.last().unwrap().clone();
                let up = self.theta.upper();
                pw.push(std::array::from_fn(|k| last[k].mul(up[k])));
            }
        }
        let pw = self.theta_powers.read().unwrap();
        pw[e[0] as usize][0]
            .mul(&pw[e[1] as usize][1])
            .mul(&pw[e[2] as usize][2])
    }
}

/// Gauge parameters and star-exponents must be imaginary and eps-free.
pub fn check_gauge_parameter(lambda: &Poly) -> Result<()> {
    if !lambda.is_imaginary() {
        return Err(Error::NotAntiSelfadjoint {
            what: "gauge parameter",
            poly: lambda.to_string(),
        });
    }
    if lambda.degree_in(Var::Eps) > 0 {
        return Err(Error::EpsDependent {
            what: "gauge parameter",
            poly: lambda.to_string(),
        });
    }
    Ok(())
}

/// Group terms by spatial exponent; the value is the `(t, eps)` cofactor.
fn split_spatial(p: &Poly) -> Vec<([u16; 3], Poly)> {
    let mut groups: HashMap<[u16; 3], Poly> = HashMap::new();
    for (m, c) in p.terms() {
        let s = m.spatial();
        let rest = Monomial([m.0[0], 0, 0, 0, m.0[4]]);
        groups.entry(s).or_default().add_term(rest, c.clone());
    }
    let mut v: Vec<_> = groups.into_iter().collect();
    v.sort_by_key(|x| x.0);
    v
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// `n (n-1) ... (n-k+1)`.
fn falling(n: u16, k: u16) -> i64 {
    (0..k as i64).map(|j| n as i64 - j).product()
}

fn i_pow(n: u32) -> CRat {
    match n % 4 {
        0 => cr(1, 1),
        1 => ci(1, 1),
        2 => cr(-1, 1),
        _ => ci(-1, 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Var;

    fn theta12(p: Poly) -> StarContext {
        StarContext::new(ThetaProfile::new(p, Poly::zero(), Poly::zero()).unwrap())
    }

    #[test]
    fn theta_dot_examples() {
        let th = ThetaProfile::new(Poly::t(), Poly::zero(), Poly::zero()).unwrap();
        assert_eq!(*th.theta_dot().get(1, 2), Poly::one());
        assert_eq!(*th.theta_dot().get(2, 1), -Poly::one());
        let c = ThetaProfile::constant(cr(3, 1), cr(1, 2), cr(0, 1));
        assert!(c.theta_dot().is_zero());
        let th = ThetaProfile::new(Poly::t().pow(2), Poly::t(), Poly::zero()).unwrap();
        let td = th.theta_dot();
        assert_eq!(*td.get(1, 2), Poly::t().scale(&cr(2, 1)));
        assert_eq!(*td.get(1, 3), Poly::one());
    }

    #[test]
    fn rejects_bad_theta() {
        let mut m: [[Poly; 3]; 3] = Default::default();
        m[0][1] = Poly::t();
        m[1][0] = Poly::t();
        assert_eq!(ThetaProfile::from_matrix(m), Err(Error::NotAntisymmetric(1, 2)));
        let r = ThetaProfile::new(Poly::x(1), Poly::zero(), Poly::zero());
        assert!(matches!(r, Err(Error::ThetaNotTimeOnly(1, 2, _))));
        let mut m: [[Poly; 3]; 3] = Default::default();
        m[2][2] = Poly::one();
        assert!(ThetaProfile::from_matrix(m).is_err());
    }

    #[test]
    fn star_generators() {
        let theta0 = cr(5, 3);
        let ctx = StarContext::new(ThetaProfile::constant(theta0.clone(), cr(0, 1), cr(0, 1)));
        let got = ctx.star(&Poly::x(1), &Poly::x(2));
        let expect = &(&Poly::x(1) * &Poly::x(2)) + &Poly::constant(theta0 * ci(1, 2));
        assert_eq!(got, expect);

        let ctx = theta12(Poly::t());
        let g = &Poly::x(3).pow(2) + &Poly::t();
        assert_eq!(ctx.star(&Poly::one(), &g), g);
        let got = ctx.star(&Poly::x(1), &Poly::x(2));
        assert_eq!(got, &(&Poly::x(1) * &Poly::x(2)) + &Poly::t().scale(&ci(1, 2)));
    }

    #[test]
    fn commutator_examples() {
        let ctx = theta12(Poly::t());
        assert_eq!(ctx.commutator(&Poly::x(1), &Poly::x(2)), Poly::t().scale(&ci(1, 1)));
        assert!(ctx.commutator(&Poly::x(1), &Poly::t()).is_zero());
        let f = &Poly::x(1).pow(3) + &Poly::x(2);
        assert!(ctx.commutator(&f, &f).is_zero());
    }

    #[test]
    fn second_order_term() {
        // x1^2 * x2^2 = x1^2 x2^2 + 2 i th x1 x2 - th^2/2
        let ctx = theta12(Poly::t());
        let got = ctx.star(&Poly::x(1).pow(2), &Poly::x(2).pow(2));
        let th = Poly::t();
        let expect = &(&(&Poly::x(1).pow(2) * &Poly::x(2).pow(2))
            + &(&th * &(&Poly::x(1) * &Poly::x(2))).scale(&ci(2, 1)))
            + &th.pow(2).scale(&cr(-1, 2));
        assert_eq!(got, expect);
    }

    #[test]
    fn leibniz_defect_examples() {
        let ctx = theta12(Poly::t());
        assert_eq!(ctx.dt_leibniz_defect(&Poly::x(1), &Poly::x(2)), Poly::constant(ci(1, 2)));
        let stat = StarContext::new(ThetaProfile::constant(cr(2, 1), cr(1, 1), cr(-1, 1)));
        let f = &Poly::x(1).pow(2) + &Poly::t();
        let g = &Poly::x(2) * &Poly::t();
        assert!(stat.dt_leibniz_defect(&f, &g).is_zero());
        // u = k.x: thetadot^{ij} k_i k_j = 0
        let th = ThetaProfile::new(Poly::t(), Poly::t().pow(2), Poly::zero()).unwrap();
        let ctx = StarContext::new(th);
        let u = &(&Poly::x(1).scale(&cr(2, 1)) + &Poly::x(2)) - &Poly::x(3).scale(&cr(3, 1));
        assert!(ctx.dt_leibniz_defect(&u, &u).is_zero());
    }

    #[test]
    fn conj_defect_examples() {
        let ctx = theta12(Poly::t());
        assert!(ctx.conj_defect(&Poly::x(1), &Poly::x(2)).is_zero());
        let f = Poly::x(1).scale(&ci(1, 1));
        assert!(ctx.conj_defect(&f, &Poly::x(1)).is_zero());
    }

    #[test]
    fn star_exp_examples() {
        let ctx = theta12(Poly::t());
        assert_eq!(ctx.star_exp(&Poly::zero(), 3).unwrap(), Poly::one());
        let lam = Poly::x(1).scale(&ci(1, 1));
        let u = ctx.star_exp(&lam, 1).unwrap();
        assert_eq!(u, &Poly::one() + &(&Poly::eps() * &lam));
        let lam = (&Poly::x(1) * &Poly::x(2)).scale(&ci(1, 1));
        let u = ctx.star_exp(&lam, 3).unwrap();
        let c = ctx.with_cutoff(3);
        assert_eq!(c.star(&u.conj(), &u), Poly::one());
        assert_eq!(c.star(&u, &u.conj()), Poly::one());
    }

    #[test]
    fn star_exp_rejects_real_parameter() {
        let ctx = theta12(Poly::t());
        assert!(matches!(
            ctx.star_exp(&Poly::x(1), 2),
            Err(Error::NotAntiSelfadjoint { .. })
        ));
        let lam = (&Poly::x(1) * &Poly::eps()).scale(&ci(1, 1));
        assert!(matches!(ctx.star_exp(&lam, 2), Err(Error::EpsDependent { .. })));
    }

    #[test]
    fn spatial_derivations() {
        let ctx = theta12(Poly::t());
        let f = &(&Poly::x(1).pow(2) * &Poly::x(2)) + &Poly::t();
        let g = &Poly::x(2).pow(3) + &Poly::x(1);
        for i in 1..=3 {
            assert!(ctx.spatial_derivation_defect(&f, &g, i).is_zero());
        }
        assert!(ctx
            .spatial_derivation_defect(&Poly::x(1).pow(2), &Poly::x(2).pow(2), 2)
            .is_zero());
    }

    #[test]
    fn cutoff_truncates() {
        let ctx = theta12(Poly::t()).with_cutoff(1);
        let a = &Poly::eps() * &Poly::x(1);
        let r = ctx.star(&a, &a);
        assert!(r.is_zero());
        assert_eq!(r.degree_in(Var::Eps), 0);
    }
}
