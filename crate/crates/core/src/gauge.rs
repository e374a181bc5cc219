//! U(1) gauge fields on the deformed algebra.
//!
//! A connection is a one-form `A = A_mu dx^mu` with coefficients on the left.
//! Its field strength in that normal order is
//!
//! ```text
//! F_ij  = d_i A_j - d_j A_i + [A_i, A_j]
//! F_0i  = d_0 A_i - d_i A_0 + [A_0, A_i] - (i/2) thetadot^{mn} A_n * (d_m A_i)
//! F~_0i = F_0i - (i/2) thetadot^{kj} F_ij * A_k
//! ```
//!
//! Only `F_ij` and `F~_0i` transform covariantly under `A -> U† A U + U† dU`.
//! Gauge transformations use truncated star exponentials, so every
//! statement here holds modulo `eps^(N+1)`.

use crate::error::{Error, Result};
use crate::forms::{DifferentialForm, Wedge};
use crate::poly::{ci, Poly};
use crate::star::{check_gauge_parameter, StarContext, ThetaProfile};

/// Spatial index pairs in storage order.
pub const SPATIAL_PAIRS: [(usize, usize); 3] = [(1, 2), (1, 3), (2, 3)];

/// Components `A_0..A_3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugePotential {
    pub components: [Poly; 4],
}

impl GaugePotential {
    pub fn zero() -> Self {
        GaugePotential {
            components: Default::default(),
        }
    }

    pub fn a(&self, mu: usize) -> &Poly {
        &self.components[mu]
    }

    /// `A_mu dx^mu`, coefficients on the left.
    pub fn connection_form(&self) -> DifferentialForm {
        DifferentialForm::one_form(self.components.clone())
    }

    /// `dx^mu A_mu`, coefficients on the right, normal-ordered.
    pub fn right_connection_form(&self, ctx: &StarContext) -> DifferentialForm {
        let mut out = DifferentialForm::zero();
        for mu in 0..4 {
            out = &out + &ctx.move_left(&self.components[mu], Wedge::d(mu));
        }
        out
    }

    /// `A_0 + conj(A_0) - (i/2) thetadot^{ij} d_i A_j`; zero when the
    /// time-component constraint holds.
    pub fn constraint_defect(&self, theta: &ThetaProfile) -> Poly {
        let a0 = &self.components[0];
        a0 + &a0.conj() - time_constraint_source(&self.components, theta)
    }
}

/// `(i/2) thetadot^{ij} d_i A_j`.
fn time_constraint_source(a: &[Poly; 4], theta: &ThetaProfile) -> Poly {
    let td = theta.theta_dot();
    let mut s = Poly::zero();
    for i in 1..=3 {
        for j in 1..=3 {
            let c = td.get(i, j);
            if !c.is_zero() {
                s += &c.mul(&a[j].partial(i));
            }
        }
    }
    s.scale(&ci(1, 2))
}

/// Assemble a potential from imaginary spatial components and the
/// imaginary part of `A_0`; the real part of `A_0` is fixed by
/// `A_0 + conj(A_0) = (i/2) thetadot^{ij} d_i A_j`.
pub fn complete_time_component(
    spatial: [Poly; 3],
    a0_imaginary: Poly,
    theta: &ThetaProfile,
) -> Result<GaugePotential> {
    for (k, a) in spatial.iter().enumerate() {
        if !a.is_imaginary() {
            return Err(Error::NotAntiSelfadjoint {
                what: ["A_1", "A_2", "A_3"][k],
                poly: a.to_string(),
            });
        }
    }
    if !a0_imaginary.is_imaginary() {
        return Err(Error::NotAntiSelfadjoint {
            what: "imaginary part of A_0",
            poly: a0_imaginary.to_string(),
        });
    }
    let [a1, a2, a3] = spatial;
    let mut components = [Poly::zero(), a1, a2, a3];
    let real_part = time_constraint_source(&components, theta).scale(&crate::poly::cr(1, 2));
    components[0] = &a0_imaginary + &real_part;
    Ok(GaugePotential { components })
}

/// Field strength components.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FieldStrength {
    /// `F_12, F_13, F_23`.
    pub spatial: [Poly; 3],
    /// `F_01, F_02, F_03`.
    pub mixed: [Poly; 3],
    /// Covariant `F~_01, F~_02, F~_03`.
    pub covariant: [Poly; 3],
}

impl FieldStrength {
    /// `F_ij` for any `i, j` in `1..=3`, antisymmetrically extended.
    pub fn f(&self, i: usize, j: usize) -> Poly {
        spatial_entry(&self.spatial, i, j)
    }

    pub fn is_zero(&self) -> bool {
        self.spatial
            .iter()
            .chain(&self.mixed)
            .chain(&self.covariant)
            .all(Poly::is_zero)
    }
}

fn spatial_entry(s: &[Poly; 3], i: usize, j: usize) -> Poly {
    match (i, j) {
        (1, 2) => s[0].clone(),
        (1, 3) => s[1].clone(),
        (2, 3) => s[2].clone(),
        (2, 1) => -&s[0],
        (3, 1) => -&s[1],
        (3, 2) => -&s[2],
        _ => Poly::zero(),
    }
}

fn spatial_strength(a: &[Poly; 4], ctx: &StarContext) -> [Poly; 3] {
    SPATIAL_PAIRS.map(|(i, j)| {
        let lin = a[j].partial(i) - a[i].partial(j);
        lin + ctx.commutator(&a[i], &a[j])
    })
}

/// `F~_0i = F_0i - (i/2) thetadot^{kj} F_ij * A_k`.
fn covariant_mixed(
    mixed: &[Poly; 3],
    spatial: &[Poly; 3],
    a: &[Poly; 4],
    ctx: &StarContext,
) -> [Poly; 3] {
    let td = ctx.theta_dot();
    std::array::from_fn(|idx| {
        let i = idx + 1;
        let mut corr = Poly::zero();
        for k in 1..=3 {
            for j in 1..=3 {
                let c = td.get(k, j);
                if c.is_zero() {
                    continue;
                }
                let fij = spatial_entry(spatial, i, j);
                corr += &ctx.reduce(c.mul(&ctx.star(&fij, &a[k])));
            }
        }
        &mixed[idx] - &corr.scale(&ci(1, 2))
    })
}

/// Field strength of a potential, all products being star products.
pub fn field_strength(pot: &GaugePotential, ctx: &StarContext) -> FieldStrength {
    let a = &pot.components;
    let td = ctx.theta_dot();
    let spatial = spatial_strength(a, ctx);
    let mixed: [Poly; 3] = std::array::from_fn(|idx| {
        let i = idx + 1;
        let mut f = a[i].partial(0) - a[0].partial(i) + ctx.commutator(&a[0], &a[i]);
        let mut corr = Poly::zero();
        for m in 1..=3 {
            for n in 1..=3 {
                let c = td.get(m, n);
                if c.is_zero() {
                    continue;
                }
                corr += &ctx.reduce(c.mul(&ctx.star(&a[n], &a[i].partial(m))));
            }
        }
        f -= &corr.scale(&ci(1, 2));
        f
    });
    let covariant = covariant_mixed(&mixed, &spatial, a, ctx);
    FieldStrength {
        spatial,
        mixed,
        covariant,
    }
}

/// Curvature `dA + A A` of the left-coefficient connection form.
pub fn curvature_form(pot: &GaugePotential, ctx: &StarContext) -> DifferentialForm {
    let a = pot.connection_form();
    &ctx.d(&a) + &ctx.form_mul(&a, &a)
}

/// Integrand `sum_{i<j} F_ij * conj(F_ij) - sum_i F~_0i * conj(F~_0i)`.
pub fn action_density(pot: &GaugePotential, ctx: &StarContext) -> Poly {
    density_from(&field_strength(pot, ctx), ctx)
}

fn density_from(fs: &FieldStrength, ctx: &StarContext) -> Poly {
    let mut d = Poly::zero();
    for f in &fs.spatial {
        d += &ctx.star(f, &f.conj());
    }
    for f in &fs.covariant {
        d -= &ctx.star(f, &f.conj());
    }
    d
}

/// Result of transforming the spatial components.
#[derive(Debug, Clone)]
pub struct GaugeTransform {
    /// Truncated star-unitary `U`.
    pub unitary: Poly,
    /// `A'_k = U† * A_k * U + U† * d_k U` for `k = 1..3`, mod `eps^(N+1)`.
    pub spatial: [Poly; 3],
}

/// Gauge-transform the spatial components with `U = exp_*(eps lambda)`.
pub fn gauge_transform_potential(
    pot: &GaugePotential,
    lambda: &Poly,
    order: u32,
    ctx: &StarContext,
) -> Result<GaugeTransform> {
    check_gauge_parameter(lambda)?;
    let c = ctx.with_cutoff(order);
    let u = c.star_exp(lambda, order)?;
    let ud = u.conj();
    let spatial = std::array::from_fn(|idx| {
        let k = idx + 1;
        c.star3(&ud, &pot.components[k], &u) + c.star(&ud, &u.partial(k))
    });
    Ok(GaugeTransform { unitary: u, spatial })
}

/// Transformed field strengths obtained from the stated transformation rules
/// `F'_ij = U† F_ij U` and
/// `F'_0i = U† F_0i U + (i/2) thetadot^{kj} U† F_ij (d_k U)`,
/// together with `F~'_0i` assembled from them and `A'_k`.
#[derive(Debug, Clone)]
pub struct TransformedStrength {
    pub spatial_rule: [Poly; 3],
    pub mixed_rule: [Poly; 3],
    pub covariant: [Poly; 3],
}

fn transformed_strength(
    fs: &FieldStrength,
    tr: &GaugeTransform,
    c: &StarContext,
) -> TransformedStrength {
    let u = &tr.unitary;
    let ud = u.conj();
    let td = c.theta_dot();
    let spatial_rule = fs.spatial.clone().map(|f| c.star3(&ud, &f, u));
    let mixed_rule = std::array::from_fn(|idx| {
        let i = idx + 1;
        let mut f = c.star3(&ud, &fs.mixed[idx], u);
        let mut extra = Poly::zero();
        for k in 1..=3 {
            let dku = u.partial(k);
            for j in 1..=3 {
                let th = td.get(k, j);
                if th.is_zero() {
                    continue;
                }
                extra += &c.reduce(th.mul(&c.star3(&ud, &fs.f(i, j), &dku)));
            }
        }
        f += &extra.scale(&ci(1, 2));
        f
    });
    let a_new = [
        Poly::zero(),
        tr.spatial[0].clone(),
        tr.spatial[1].clone(),
        tr.spatial[2].clone(),
    ];
    let covariant = covariant_mixed(&mixed_rule, &spatial_rule, &a_new, c);
    TransformedStrength {
        spatial_rule,
        mixed_rule,
        covariant,
    }
}

/// Residuals of the covariance statements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovarianceDefect {
    /// `F_ij(A') - U† F_ij U`.
    pub spatial: [Poly; 3],
    /// `F~'_0i - U† F~_0i U`.
    pub covariant: [Poly; 3],
}

impl CovarianceDefect {
    pub fn is_zero(&self) -> bool {
        self.spatial.iter().chain(&self.covariant).all(Poly::is_zero)
    }
}

/// Both residuals vanish modulo `eps^(order+1)`.
pub fn covariance_defect(
    pot: &GaugePotential,
    lambda: &Poly,
    order: u32,
    ctx: &StarContext,
) -> Result<CovarianceDefect> {
    let c = ctx.with_cutoff(order);
    let fs = field_strength(pot, &c);
    let tr = gauge_transform_potential(pot, lambda, order, &c)?;
    let u = &tr.unitary;
    let ud = u.conj();

    let a_new = [
        Poly::zero(),
        tr.spatial[0].clone(),
        tr.spatial[1].clone(),
        tr.spatial[2].clone(),
    ];
    let from_new = spatial_strength(&a_new, &c);
    let spatial = std::array::from_fn(|k| &from_new[k] - &c.star3(&ud, &fs.spatial[k], u));

    let ts = transformed_strength(&fs, &tr, &c);
    let covariant = std::array::from_fn(|k| &ts.covariant[k] - &c.star3(&ud, &fs.covariant[k], u));
    Ok(CovarianceDefect { spatial, covariant })
}

/// Full transformation in the form calculus: `A' = U† A U + U† dU`, read
/// back into components (this fixes `A'_0` as well).
pub fn form_gauge_transform(
    pot: &GaugePotential,
    lambda: &Poly,
    order: u32,
    ctx: &StarContext,
) -> Result<(Poly, GaugePotential)> {
    check_gauge_parameter(lambda)?;
    let c = ctx.with_cutoff(order);
    let u = c.star_exp(lambda, order)?;
    let ud = DifferentialForm::function(u.conj());
    let uf = DifferentialForm::function(u.clone());
    let a = pot.connection_form();
    let conj_a_u = c.form_mul(&c.form_mul(&ud, &a), &uf);
    let a_new = &conj_a_u + &c.form_mul(&ud, &c.d(&uf));
    let components = std::array::from_fn(|mu| a_new.component(Wedge::d(mu)));
    Ok((u, GaugePotential { components }))
}

/// Differences between the field strength computed from the fully
/// transformed potential and the transformation rules:
/// `(F_ij(A') - U†F_ijU, F_0i(A') - F'_0i(rule), F~_0i(A') - U†F~_0iU)`.
pub fn form_route_defect(
    pot: &GaugePotential,
    lambda: &Poly,
    order: u32,
    ctx: &StarContext,
) -> Result<[[Poly; 3]; 3]> {
    let c = ctx.with_cutoff(order);
    let (u, a_new) = form_gauge_transform(pot, lambda, order, ctx)?;
    let ud = u.conj();
    let fs = field_strength(pot, &c);
    let fs_new = field_strength(&a_new, &c);
    let tr = GaugeTransform {
        unitary: u.clone(),
        spatial: [a_new.a(1).clone(), a_new.a(2).clone(), a_new.a(3).clone()],
    };
    let ts = transformed_strength(&fs, &tr, &c);
    let spatial = std::array::from_fn(|k| &fs_new.spatial[k] - &c.star3(&ud, &fs.spatial[k], &u));
    let mixed = std::array::from_fn(|k| &fs_new.mixed[k] - &ts.mixed_rule[k]);
    let covariant = std::array::from_fn(|k| &fs_new.covariant[k] - &c.star3(&ud, &fs.covariant[k], &u));
    Ok([spatial, mixed, covariant])
}

/// `density(A') - density(A) = [U†, D * U]_* + remainder`.
#[derive(Debug, Clone)]
pub struct InvarianceWitness {
    /// `(U†, D * U)`: the two arguments of the star commutator.
    pub commutator: (Poly, Poly),
    pub remainder: Poly,
}

pub fn invariance_witness(
    pot: &GaugePotential,
    lambda: &Poly,
    order: u32,
    ctx: &StarContext,
) -> Result<InvarianceWitness> {
    let c = ctx.with_cutoff(order);
    let fs = field_strength(pot, &c);
    let tr = gauge_transform_potential(pot, lambda, order, &c)?;
    let ts = transformed_strength(&fs, &tr, &c);
    let a_new = [
        Poly::zero(),
        tr.spatial[0].clone(),
        tr.spatial[1].clone(),
        tr.spatial[2].clone(),
    ];
    let transformed = FieldStrength {
        spatial: spatial_strength(&a_new, &c),
        mixed: ts.mixed_rule,
        covariant: ts.covariant,
    };
    let d_old = density_from(&fs, &c);
    let d_new = density_from(&transformed, &c);
    let ud = tr.unitary.conj();
    let du = c.star(&d_old, &tr.unitary);
    let comm = c.commutator(&ud, &du);
    let remainder = d_new - d_old - comm;
    Ok(InvarianceWitness {
        commutator: (ud, du),
        remainder,
    })
}
