//! Massless scalar field: metric on one-forms, Klein-Gordon density and
//! operator, and the plane-wave subalgebra where `d_t` is a derivation.

use crate::forms::{DifferentialForm, Wedge};
use crate::poly::{CRat, Poly, Var};
use crate::star::StarContext;

/// Diagonal Minkowski signature `(+, -, -, -)`.
pub const ETA: [i64; 4] = [1, -1, -1, -1];

/// `g(sum f_mu dx^mu, sum g_nu dx^nu) = sum eta^{mu nu} f_mu * g_nu`.
///
/// Only the degree-one parts of the arguments contribute.
pub fn metric(a: &DifferentialForm, b: &DifferentialForm, ctx: &StarContext) -> Poly {
    let mut out = Poly::zero();
    for (mu, &s) in ETA.iter().enumerate() {
        let f = a.component(Wedge::d(mu));
        let g = b.component(Wedge::d(mu));
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let p = ctx.star(&f, &g);
        if s > 0 {
            out += &p;
        } else {
            out -= &p;
        }
    }
    out
}

/// `g(dPhi, dPhi*) = eta^{mu nu} (d_mu Phi) * conj(d_nu Phi)`.
pub fn kg_density(phi: &Poly, ctx: &StarContext) -> Poly {
    let dphi = ctx.d(&DifferentialForm::function(phi.clone()));
    let dconj = ctx.d(&DifferentialForm::function(phi.conj()));
    metric(&dphi, &dconj, ctx)
}

/// `d_t^2 Phi - sum_i d_i^2 Phi`.
pub fn kg_operator(phi: &Poly) -> Poly {
    let mut out = phi.partial(0).partial(0);
    for i in 1..=3 {
        out -= &phi.partial(i).partial(i);
    }
    out
}

/// Linear phase `u = omega t + k_i x^i`.
pub fn phase(omega: &CRat, k: &[CRat; 3]) -> Poly {
    let mut u = Poly::t().scale(omega);
    for (i, ki) in k.iter().enumerate() {
        u += &Poly::x(i + 1).scale(ki);
    }
    u
}

/// Evaluate a univariate profile `sum c_n u^n` at a polynomial `u`.
pub fn profile_at(coeffs: &[CRat], u: &Poly) -> Poly {
    let mut out = Poly::zero();
    for c in coeffs.iter().rev() {
        out = &out.mul(u) + &Poly::constant(c.clone());
    }
    out
}

/// Substitute `u` for the variable `slot` in a polynomial in `(t, slot)`.
pub fn in_phase(p: &Poly, slot: Var, u: &Poly) -> Poly {
    p.substitute(slot, u)
}

/// `d_0(Phi * Psi) - (d_0 Phi) * Psi - Phi * (d_0 Psi)`; vanishes on
/// functions of `t` and a single linear phase.
pub fn subalgebra_derivation_check(phi: &Poly, psi: &Poly, ctx: &StarContext) -> Poly {
    ctx.dt_leibniz_defect(phi, psi)
}

/// `Phi^{*n} - Phi^n` (zero on the single-phase subalgebra).
pub fn star_power_defect(phi: &Poly, n: u32, ctx: &StarContext) -> Poly {
    let mut acc = Poly::one();
    for _ in 0..n {
        acc = ctx.star(&acc, phi);
    }
    acc - phi.pow(n)
}
