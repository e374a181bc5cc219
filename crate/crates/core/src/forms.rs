//! Differential forms over the deformed algebra.
//!
//! Forms are kept in normal order: every coefficient sits to the left of a
//! strictly increasing wedge of `dt < dx1 < dx2 < dx3`. Functions do not
//! commute with the spatial differentials; moving a function from the right
//! of `dx^j` to its left produces a `dt` term,
//!
//! ```text
//! dx^j g = g dx^j - (i/2) thetadot^{ij} (d_i g) dt
//! ```
//!
//! while `dt` commutes with everything. Products of basis one-forms
//! anticommute as usual.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::poly::{ci, cr, fmt_monomial, fmt_term, join_terms, CRat, Poly};
use crate::star::StarContext;

/// A wedge of basis one-forms, stored as a bit set:
/// bit 0 is `dt`, bits 1..=3 are `dx1..dx3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Wedge(u8);

impl Wedge {
    pub const ONE: Wedge = Wedge(0);
    pub const DT: Wedge = Wedge(1);

    /// Basis one-form `dx^mu` (`mu = 0` is `dt`).
    pub fn d(mu: usize) -> Wedge {
        assert!(mu < 4, "coordinate index {mu} out of range");
        Wedge(1 << mu)
    }

    pub fn from_bits(bits: u8) -> Wedge {
        assert!(bits < 16, "wedge bits out of range");
        Wedge(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, mu: usize) -> bool {
        self.0 & (1 << mu) != 0
    }

    /// Indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..4).filter(move |mu| self.contains(*mu))
    }

    /// `self ∧ other` as a signed basis element, or `None` if it vanishes.
    pub fn wedge(self, other: Wedge) -> Option<(i64, Wedge)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0;
        for a in self.indices() {
            swaps += other.indices().filter(|&b| b < a).count();
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        Some((sign, Wedge(self.0 | other.0)))
    }

    fn name(self) -> String {
        const NAMES: [&str; 4] = ["dt", "dx1", "dx2", "dx3"];
        self.indices().map(|mu| NAMES[mu]).collect::<Vec<_>>().join("*")
    }
}

impl PartialOrd for Wedge {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Wedge {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.0).cmp(&(other.degree(), other.0))
    }
}

/// Normal-ordered element of the deformed differential algebra.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DifferentialForm {
    comps: BTreeMap<Wedge, Poly>,
}

impl DifferentialForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Degree-0 form.
    pub fn function(p: Poly) -> Self {
        Self::term(p, Wedge::ONE)
    }

    /// `p · w` with `p` on the left.
    pub fn term(p: Poly, w: Wedge) -> Self {
        let mut f = Self::zero();
        f.add_component(w, p);
        f
    }

    pub fn basis(w: Wedge) -> Self {
        Self::term(Poly::one(), w)
    }

    pub fn dt() -> Self {
        Self::basis(Wedge::DT)
    }

    pub fn dx(i: usize) -> Self {
        assert!((1..=3).contains(&i));
        Self::basis(Wedge::d(i))
    }

    /// `sum_mu c[mu] dx^mu` with coefficients on the left.
    pub fn one_form(c: [Poly; 4]) -> Self {
        let mut f = Self::zero();
        for (mu, p) in c.into_iter().enumerate() {
            f.add_component(Wedge::d(mu), p);
        }
        f
    }

    pub fn add_component(&mut self, w: Wedge, p: Poly) {
        if p.is_zero() {
            return;
        }
        let slot = self.comps.entry(w).or_default();
        *slot += &p;
        if slot.is_zero() {
            self.comps.remove(&w);
        }
    }

    pub fn component(&self, w: Wedge) -> Poly {
        self.comps.get(&w).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Wedge, &Poly)> {
        self.comps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Highest degree present (0 for the zero form).
    pub fn degree(&self) -> u32 {
        self.comps.keys().map(|w| w.degree()).max().unwrap_or(0)
    }

    /// True when all components share one degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.comps.keys().map(|w| w.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Degree-`p` part.
    pub fn part(&self, p: u32) -> DifferentialForm {
        DifferentialForm {
            comps: self
                .comps
                .iter()
                .filter(|(w, _)| w.degree() == p)
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    /// The degree-0 component, if the form has no higher parts.
    pub fn as_function(&self) -> Option<Poly> {
        if self.comps.keys().all(|w| *w == Wedge::ONE) {
            Some(self.component(Wedge::ONE))
        } else {
            None
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> DifferentialForm {
        let mut out = Self::zero();
        for (w, c) in &self.comps {
            out.add_component(*w, f(c));
        }
        out
    }

    pub fn scale(&self, c: &CRat) -> DifferentialForm {
        self.map_coeffs(|p| p.scale(c))
    }

    /// Append a basis one-form (or wedge) on the right of every term.
    fn wedge_right(&self, e: Wedge) -> DifferentialForm {
        let mut out = Self::zero();
        for (w, c) in &self.comps {
            if let Some((s, w2)) = w.wedge(e) {
                out.add_component(w2, c.scale(&cr(s, 1)));
            }
        }
        out
    }
}

impl StarContext {
    /// Normal-order `w · g` for a basis wedge `w` and a function `g`.
    pub fn move_left(&self, g: &Poly, w: Wedge) -> DifferentialForm {
        if g.is_zero() {
            return DifferentialForm::zero();
        }
        let Some(last) = w.indices().last() else {
            return DifferentialForm::function(g.clone());
        };
        let prefix = Wedge(w.0 & !(1 << last));
        let mut out = self.move_left(g, prefix).wedge_right(Wedge::d(last));
        if last > 0 {
            // dx^j g = g dx^j - (i/2) thetadot^{ij} (d_i g) dt
            let j = last;
            let mut corr = Poly::zero();
            for i in 1..=3 {
                let td = self.theta_dot().get(i, j);
                if !td.is_zero() {
                    corr += &td.mul(&g.partial(i));
                }
            }
            let corr = self.reduce(corr.scale(&ci(-1, 2)));
            if !corr.is_zero() {
                let moved = self.move_left(&corr, prefix).wedge_right(Wedge::DT);
                out = &out + &moved;
            }
        }
        out
    }

    /// Product in the deformed differential algebra.
    ///
    /// Coefficients of `b` are moved left through the basis wedges of `a`,
    /// then coefficients multiply with the star product. Products exceeding
    /// top degree vanish.
    pub fn form_mul(&self, a: &DifferentialForm, b: &DifferentialForm) -> DifferentialForm {
        let mut out = DifferentialForm::zero();
        for (wa, ca) in &a.comps {
            for (wb, cb) in &b.comps {
                if wa.degree() + wb.degree() > 4 {
                    continue;
                }
                for (v, h) in &self.move_left(cb, *wa).comps {
                    if let Some((s, w)) = v.wedge(*wb) {
                        let c = self.star(ca, h);
                        out.add_component(w, c.scale(&cr(s, 1)));
                    }
                }
            }
        }
        out
    }

    /// Exterior derivative: `d(c w) = (d_t c) dt∧w + sum_i (d_i c) dx^i∧w`.
    pub fn d(&self, a: &DifferentialForm) -> DifferentialForm {
        let mut out = DifferentialForm::zero();
        for (w, c) in &a.comps {
            for mu in 0..4 {
                if let Some((s, w2)) = Wedge::d(mu).wedge(*w) {
                    out.add_component(w2, c.partial(mu).scale(&cr(s, 1)));
                }
            }
        }
        out
    }

    /// Conjugation with selfadjoint differentials and the graded rule
    /// `(a b)^* = (-1)^{|a||b|} b^* a^*`, under which every basis wedge is
    /// selfadjoint and `(c w)^* = w · conj(c)`.
    pub fn conj_form(&self, a: &DifferentialForm) -> DifferentialForm {
        let mut out = DifferentialForm::zero();
        for (w, c) in &a.comps {
            out = &out + &self.move_left(&c.conj(), *w);
        }
        out
    }

    /// `d(f*g) - (df) g - f (dg)` for functions `f, g`.
    pub fn d_leibniz_defect(&self, f: &Poly, g: &Poly) -> DifferentialForm {
        let ff = DifferentialForm::function(f.clone());
        let gf = DifferentialForm::function(g.clone());
        let whole = self.d(&DifferentialForm::function(self.star(f, g)));
        let left = self.form_mul(&self.d(&ff), &gf);
        let right = self.form_mul(&ff, &self.d(&gf));
        &(&whole - &left) - &right
    }
}

impl<'a> Add<&'a DifferentialForm> for &'a DifferentialForm {
    type Output = DifferentialForm;
    fn add(self, rhs: &'a DifferentialForm) -> DifferentialForm {
        let mut out = self.clone();
        for (w, c) in &rhs.comps {
            out.add_component(*w, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a DifferentialForm> for &'a DifferentialForm {
    type Output = DifferentialForm;
    fn sub(self, rhs: &'a DifferentialForm) -> DifferentialForm {
        let mut out = self.clone();
        for (w, c) in &rhs.comps {
            out.add_component(*w, -c);
        }
        out
    }
}

impl Neg for &DifferentialForm {
    type Output = DifferentialForm;
    fn neg(self) -> DifferentialForm {
        self.map_coeffs(|p| -p)
    }
}

impl fmt::Debug for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form({self})")
    }
}

/// Canonical text: components by (degree, basis), each expanded into
/// `coefficient*monomial*basis` terms.
impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.comps.iter().flat_map(|(w, c)| {
            let basis = w.name();
            c.terms().rev().map(move |(m, k)| {
                let mono = fmt_monomial(m);
                let body = match (mono.is_empty(), basis.is_empty()) {
                    (true, _) => basis.clone(),
                    (false, true) => mono,
                    (false, false) => format!("{mono}*{basis}"),
                };
                fmt_term(k, &body)
            })
        });
        join_terms(f, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::star::ThetaProfile;

    fn ctx12(p: Poly) -> StarContext {
        StarContext::new(ThetaProfile::new(p, Poly::zero(), Poly::zero()).unwrap())
    }

    #[test]
    fn wedge_signs() {
        let dx1 = Wedge::d(1);
        let dt = Wedge::DT;
        assert_eq!(dx1.wedge(dt), Some((-1, Wedge(0b11))));
        assert_eq!(dt.wedge(dx1), Some((1, Wedge(0b11))));
        assert_eq!(dx1.wedge(dx1), None);
        assert_eq!(Wedge(0b1010).wedge(Wedge(0b0101)), Some((-1, Wedge(0b1111))));
    }

    #[test]
    fn move_left_examples() {
        let ctx = ctx12(Poly::t());
        let got = ctx.move_left(&Poly::x(2), Wedge::d(1));
        let expect = &DifferentialForm::term(Poly::x(2), Wedge::d(1))
            + &DifferentialForm::term(Poly::constant(ci(1, 2)), Wedge::DT);
        assert_eq!(got, expect);

        let f = &Poly::x(1).pow(2) + &Poly::x(2);
        assert_eq!(ctx.move_left(&f, Wedge::DT), DifferentialForm::term(f, Wedge::DT));
        assert_eq!(
            ctx.move_left(&Poly::x(1), Wedge::d(1)),
            DifferentialForm::term(Poly::x(1), Wedge::d(1))
        );
    }

    #[test]
    fn generator_differential_relations() {
        // x^i dx^j - dx^j x^i = (i/2) thetadot^{ij} dt, and t, dt central.
        let ctx = ctx12(Poly::t().pow(2));
        for i in 1..=3 {
            for j in 1..=3 {
                let xi = DifferentialForm::function(Poly::x(i));
                let dxj = DifferentialForm::dx(j);
                let comm = &ctx.form_mul(&xi, &dxj) - &ctx.form_mul(&dxj, &xi);
                let expect = DifferentialForm::term(
                    ctx.theta_dot().get(i, j).scale(&ci(1, 2)),
                    Wedge::DT,
                );
                assert_eq!(comm, expect, "i={i} j={j}");
            }
            let t = DifferentialForm::function(Poly::t());
            let dxi = DifferentialForm::dx(i);
            assert_eq!(ctx.form_mul(&t, &dxi), ctx.form_mul(&dxi, &t));
            let xi = DifferentialForm::function(Poly::x(i));
            assert_eq!(
                ctx.form_mul(&xi, &DifferentialForm::dt()),
                ctx.form_mul(&DifferentialForm::dt(), &xi)
            );
        }
    }

    #[test]
    fn form_mul_examples() {
        let ctx = ctx12(Poly::t());
        let dx1 = DifferentialForm::dx(1);
        assert!(ctx.form_mul(&dx1, &dx1).is_zero());
        // anticommuting generators
        let dx2 = DifferentialForm::dx(2);
        let s = &ctx.form_mul(&dx1, &dx2) + &ctx.form_mul(&dx2, &dx1);
        assert!(s.is_zero());

        let stat = StarContext::new(ThetaProfile::constant(cr(2, 1), cr(0, 1), cr(0, 1)));
        let f = &Poly::x(1) + &Poly::x(3);
        let g = Poly::x(2).pow(2);
        let a = DifferentialForm::term(f.clone(), Wedge::d(1));
        let b = DifferentialForm::term(g.clone(), Wedge::d(2));
        let expect = DifferentialForm::term(stat.star(&f, &g), Wedge(0b0110));
        assert_eq!(stat.form_mul(&a, &b), expect);
    }

    #[test]
    fn form_mul_brute_force_reordering() {
        // (x1 dx2)(x2 dx1) with theta12 = t: dx2 x2 = x2 dx2 since the
        // correction needs thetadot^{22} = 0, so the result is -(x1*x2) dx1 dx2.
        let ctx = ctx12(Poly::t());
        let a = DifferentialForm::term(Poly::x(1), Wedge::d(2));
        let b = DifferentialForm::term(Poly::x(2), Wedge::d(1));
        let x1x2 = ctx.star(&Poly::x(1), &Poly::x(2));
        let expect = DifferentialForm::term(-&x1x2, Wedge(0b0110));
        assert_eq!(ctx.form_mul(&a, &b), expect);

        // (x2 dx2)(x1 dx1): dx2 x1 = x1 dx2 - (i/2) thetadot^{12} dt = x1 dx2 - (i/2) dt
        let a = DifferentialForm::term(Poly::x(2), Wedge::d(2));
        let b = DifferentialForm::term(Poly::x(1), Wedge::d(1));
        let x2x1 = ctx.star(&Poly::x(2), &Poly::x(1));
        // x2 (x1 dx2 - (i/2) dt) dx1 = -(x2*x1) dx1dx2 - (i/2) x2 dt dx1
        let expect = &DifferentialForm::term(-&x2x1, Wedge(0b0110))
            + &DifferentialForm::term(Poly::x(2).scale(&ci(-1, 2)), Wedge(0b0011));
        assert_eq!(ctx.form_mul(&a, &b), expect);
    }

    #[test]
    fn d_examples() {
        let ctx = ctx12(Poly::t());
        assert_eq!(ctx.d(&DifferentialForm::function(Poly::x(1))), DifferentialForm::dx(1));
        assert_eq!(ctx.d(&DifferentialForm::function(Poly::t())), DifferentialForm::dt());
        let f = &(&Poly::x(1).pow(2) * &Poly::t()) + &Poly::x(3);
        let df = ctx.d(&DifferentialForm::function(f));
        assert!(ctx.d(&df).is_zero());
    }

    #[test]
    fn d_leibniz_examples() {
        let ctx = ctx12(Poly::t());
        assert!(ctx.d_leibniz_defect(&Poly::x(1), &Poly::x(2)).is_zero());
        let stat = StarContext::new(ThetaProfile::constant(cr(1, 1), cr(2, 1), cr(3, 1)));
        let f = &Poly::x(1).pow(2) + &Poly::t();
        let g = &Poly::x(2) * &Poly::x(3);
        assert!(stat.d_leibniz_defect(&f, &g).is_zero());
    }

    #[test]
    fn conj_of_differential_relation() {
        let ctx = ctx12(Poly::t());
        // (f dx^j)^* = dx^j conj(f)
        let f = Poly::x(2).scale(&ci(1, 1));
        let a = DifferentialForm::term(f.clone(), Wedge::d(1));
        assert_eq!(ctx.conj_form(&a), ctx.move_left(&f.conj(), Wedge::d(1)));
        assert_eq!(ctx.conj_form(&ctx.conj_form(&a)), a);
    }

    #[test]
    fn display_forms() {
        let ctx = ctx12(Poly::t());
        let got = ctx.move_left(&Poly::x(2), Wedge::d(1));
        assert_eq!(got.to_string(), "1/2*i*dt + x2*dx1");
        let w = DifferentialForm::term(&Poly::x(1) * &Poly::x(2), Wedge(0b0110));
        assert_eq!(w.to_string(), "x1.x2*dx1*dx2");
    }
}
