//! Electromagnetic plane waves `A_i = i p_i f(u)`, `u = omega t + k.x`.
//!
//! Field strengths and the action density are computed with the general
//! gauge-sector code on an explicit ansatz and then rewritten in the phase
//! coordinate `u`, where they are fitted against the structures `f'`,
//! `f f'`, `f''`, `f'^2`, ... built from a generic probe profile.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gauge::{self, FieldStrength, GaugePotential, SPATIAL_PAIRS};
use crate::poly::{c_real, ci, cr, CRat, Poly, Var};
use crate::scalar::{phase, profile_at};
use crate::star::{StarContext, ThetaProfile};
use crate::trig::TrigSeries;

/// Generic profile `u + u^2` used to identify closed-form coefficients.
pub fn probe_profile() -> Vec<CRat> {
    vec![cr(0, 1), cr(1, 1), cr(1, 1)]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Profile {
    /// Coefficients `c_0, c_1, ...` of `sum c_n u^n`.
    Poly(Vec<BigRational>),
    Cos,
}

impl Profile {
    pub fn is_zero(&self) -> bool {
        match self {
            Profile::Poly(c) => c.iter().all(Zero::is_zero),
            Profile::Cos => false,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            Profile::Poly(c) => c.iter().rposition(|x| !x.is_zero()),
            Profile::Cos => None,
        }
    }

    /// Exact Fourier series of the profile when it is periodic.
    pub fn trig_series(&self) -> Option<TrigSeries> {
        match self {
            Profile::Cos => Some(TrigSeries::cos(1)),
            Profile::Poly(c) => match self.degree() {
                None => Some(TrigSeries::zero()),
                Some(0) => Some(TrigSeries::constant(c[0].clone())),
                Some(_) => None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneWaveSpec {
    pub omega: BigRational,
    pub k: [BigRational; 3],
    /// `(p_0, p_1, p_2, p_3)`.
    pub p: [BigRational; 4],
    pub profile: Profile,
}

impl PlaneWaveSpec {
    pub fn new(
        omega: BigRational,
        k: [BigRational; 3],
        p: [BigRational; 4],
        profile: Profile,
    ) -> Result<Self> {
        if k.iter().all(Zero::is_zero) {
            return Err(Error::InvalidPlaneWave("wave vector k is zero".into()));
        }
        if profile.is_zero() {
            return Err(Error::InvalidPlaneWave("profile is zero".into()));
        }
        if let Some(d) = profile.degree() {
            if d > 8 {
                return Err(Error::InvalidPlaneWave(format!(
                    "profile degree {d} exceeds 8"
                )));
            }
        }
        Ok(PlaneWaveSpec {
            omega,
            k,
            p,
            profile,
        })
    }

    fn kc(&self) -> [CRat; 3] {
        self.k.clone().map(c_real)
    }

    fn pc(&self) -> [CRat; 4] {
        self.p.clone().map(c_real)
    }

    pub fn phase(&self) -> Poly {
        phase(&c_real(self.omega.clone()), &self.kc())
    }

    /// Profile coefficients used for symbolic work: the spec's polynomial,
    /// or the probe for a trigonometric profile.
    pub fn symbolic_profile(&self) -> Vec<CRat> {
        match &self.profile {
            Profile::Poly(c) => c.iter().cloned().map(c_real).collect(),
            Profile::Cos => probe_profile(),
        }
    }

    /// `k . p` (spatial).
    pub fn k_dot_p(&self) -> BigRational {
        (0..3).map(|i| &self.k[i] * &self.p[i + 1]).sum()
    }

    pub fn k_sq(&self) -> BigRational {
        self.k.iter().map(|x| x * x).sum()
    }

    pub fn p_sq(&self) -> BigRational {
        self.p[1..].iter().map(|x| x * x).sum()
    }
}

/// `tau(t) = thetadot^{jk} k_j p_k`.
pub fn tau(spec: &PlaneWaveSpec, theta: &ThetaProfile) -> Poly {
    let k = spec.kc().map(Poly::constant);
    let p = [1, 2, 3].map(|i| Poly::constant(c_real(spec.p[i].clone())));
    theta.theta_dot().contract(&k, &p)
}

/// `thetadot^{jk} k_j p_k = 0` identically in `t`.
pub fn is_polarised(spec: &PlaneWaveSpec, theta: &ThetaProfile) -> bool {
    tau(spec, theta).is_zero()
}

fn ansatz_with(spec: &PlaneWaveSpec, coeffs: &[CRat], theta: &ThetaProfile) -> GaugePotential {
    let f = profile_at(coeffs, &spec.phase());
    let pc = spec.pc();
    let spatial = [1, 2, 3].map(|j| f.scale(&(&pc[j] * ci(1, 1))));
    let a0_im = f.scale(&(&pc[0] * ci(1, 1)));
    gauge::complete_time_component(spatial, a0_im, theta)
        .expect("ansatz components are imaginary by construction")
}

/// Potential `A_i = i p_i f(u)`, `A_0 = i p_0 f(u) + (real part forced by
/// anti-selfadjointness)`. Trigonometric profiles use the probe polynomial.
pub fn build_ansatz(spec: &PlaneWaveSpec, theta: &ThetaProfile) -> GaugePotential {
    ansatz_with(spec, &spec.symbolic_profile(), theta)
}

/// Rewrite a function of `(t, u)` given in `(t, x1, x2, x3)` so that `x1`
/// carries `u`. Fails if the input is not a function of `t` and `u` alone.
pub fn to_phase_coordinates(p: &Poly, spec: &PlaneWaveSpec) -> Result<Poly> {
    let (j, kj) = nonzero_rate(spec);
    let kc = spec.kc();
    let inv = c_real(BigRational::one() / kj);
    let mut xj = Poly::x(j) - Poly::t().scale(&c_real(spec.omega.clone()));
    for l in 1..=3 {
        if l != j {
            xj -= &Poly::x(l).scale(&kc[l - 1]);
        }
    }
    let mut out = p.substitute(Var::coord(j), &xj.scale(&inv));
    if !out.only_vars(&[Var::T, Var::coord(j)]) {
        return Err(Error::InvalidPlaneWave(format!(
            "expression does not depend on the phase alone: {p}"
        )));
    }
    if j != 1 {
        out = out.substitute(Var::coord(j), &Poly::x(1));
    }
    Ok(out)
}

/// Coefficient of `u^n` (with `u` in `x1`) as a polynomial in the rest.
fn u_coeff(p: &Poly, n: u16) -> Poly {
    Poly::from_terms(p.terms().filter(|(m, _)| m.exp(Var::X1) == n).map(|(m, c)| {
        let mut r = *m;
        r.0[Var::X1.index()] = 0;
        (r, c.clone())
    }))
}

/// Solve `target = sum_b c_b basis_b` with `c_b` free of `u`; the basis
/// polynomials are functions of `u` alone. `None` when no exact fit exists
/// or the basis is degenerate.
pub fn fit(target: &Poly, basis: &[Poly]) -> Option<Vec<Poly>> {
    let deg = basis
        .iter()
        .map(|b| b.degree_in(Var::X1))
        .chain(std::iter::once(target.degree_in(Var::X1)))
        .max()
        .unwrap_or(0) as u16;
    let nb = basis.len();
    let mut rows: Vec<(Vec<CRat>, Poly)> = (0..=deg)
        .map(|n| {
            let lhs = basis.iter().map(|b| u_coeff(b, n).constant_term()).collect();
            (lhs, u_coeff(target, n))
        })
        .collect();
    let mut rank = 0;
    for col in 0..nb {
        let piv = (rank..rows.len()).find(|&r| !rows[r].0[col].is_zero())?;
        rows.swap(rank, piv);
        let inv = CRat::one() / &rows[rank].0[col];
        let (lhs, rhs) = &mut rows[rank];
        for x in lhs.iter_mut() {
            *x = &*x * &inv;
        }
        *rhs = rhs.scale(&inv);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row.0[col].is_zero() {
                continue;
            }
            let factor = row.0[col].clone();
            for (x, y) in row.0.iter_mut().zip(&pivot.0) {
                *x = &*x - &(&factor * y);
            }
            row.1 = &row.1 - &pivot.1.scale(&factor);
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r.1.is_zero()) {
        return None;
    }
    Some(rows.into_iter().take(nb).map(|r| r.1).collect())
}

/// Profile derivatives `(f, f', f'')` as polynomials in `u` (slot `x1`).
fn profile_family(coeffs: &[CRat]) -> (Poly, Poly, Poly) {
    let f = profile_at(coeffs, &Poly::x(1));
    let f1 = f.partial(1);
    let f2 = f1.partial(1);
    (f, f1, f2)
}

/// Field strength in closed form: every component is a combination of
/// `f'`, `f f'`, `f''` with coefficients depending on `t` only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormStrength {
    /// `F_12, F_13, F_23` as multiples of `f'`.
    pub spatial: [Poly; 3],
    /// `F_0i` as `[coef f', coef f f', coef f'']`.
    pub mixed: [[Poly; 3]; 3],
    /// `F~_0i`, same layout.
    pub covariant: [[Poly; 3]; 3],
}

impl ClosedFormStrength {
    /// The closed forms as read off the printed plane-wave formulas.
    pub fn printed(spec: &PlaneWaveSpec, theta: &ThetaProfile) -> Self {
        let k = spec.kc();
        let p = spec.pc();
        let om = c_real(spec.omega.clone());
        let tau = tau(spec, theta);
        let spatial = SPATIAL_PAIRS.map(|(i, j)| {
            Poly::constant((&k[i - 1] * &p[j] - &p[i] * &k[j - 1]) * ci(1, 1))
        });
        let lin = |i: usize| Poly::constant((&om * &p[i] - &k[i - 1] * &p[0]) * ci(1, 1));
        let mixed = [1, 2, 3].map(|i| {
            [
                lin(i),
                tau.scale(&(&p[i] * ci(1, 2))),
                tau.scale(&(&k[i - 1] * cr(1, 4))),
            ]
        });
        let covariant = [1, 2, 3].map(|i| {
            [
                lin(i),
                tau.scale(&(&p[i] * ci(-1, 1))),
                tau.scale(&(&k[i - 1] * cr(1, 4))),
            ]
        });
        ClosedFormStrength {
            spatial,
            mixed,
            covariant,
        }
    }

    /// Evaluate on a concrete profile, returning functions of `(t, u)`.
    pub fn evaluate(&self, coeffs: &[CRat]) -> FieldStrength {
        let (f, f1, f2) = profile_family(coeffs);
        let ff1 = f.mul(&f1);
        let comb = |c: &[Poly; 3]| &(&c[0].mul(&f1) + &c[1].mul(&ff1)) + &c[2].mul(&f2);
        FieldStrength {
            spatial: self.spatial.clone().map(|c| c.mul(&f1)),
            mixed: self.mixed.clone().map(|c| comb(&c)),
            covariant: self.covariant.clone().map(|c| comb(&c)),
        }
    }
}

fn in_phase_strength(fs: &FieldStrength, spec: &PlaneWaveSpec) -> Result<FieldStrength> {
    let conv = |ps: &[Poly; 3]| -> Result<[Poly; 3]> {
        Ok([
            to_phase_coordinates(&ps[0], spec)?,
            to_phase_coordinates(&ps[1], spec)?,
            to_phase_coordinates(&ps[2], spec)?,
        ])
    };
    Ok(FieldStrength {
        spatial: conv(&fs.spatial)?,
        mixed: conv(&fs.mixed)?,
        covariant: conv(&fs.covariant)?,
    })
}

fn unfit(what: &str) -> Error {
    Error::InvalidPlaneWave(format!("{what} has no closed form in f', f f', f''"))
}

#[derive(Debug, Clone)]
pub struct PlaneWaveStrength {
    /// Components identified from the probe profile.
    pub closed: ClosedFormStrength,
    /// Direct evaluation on the spec's symbolic profile, in `(t, u)`.
    pub direct: FieldStrength,
    /// The closed form evaluated on the same profile reproduces `direct`.
    pub consistent: bool,
    /// Star products among `f, f', f''` of the symbolic profile are pointwise.
    pub pointwise: bool,
}

/// Field strength of the ansatz, with its closed form in `(f, f', f'')`.
pub fn planewave_field_strength(spec: &PlaneWaveSpec, ctx: &StarContext) -> Result<PlaneWaveStrength> {
    let theta = ctx.theta();
    let probe = probe_profile();
    let fs = gauge::field_strength(&ansatz_with(spec, &probe, theta), ctx);
    let fs = in_phase_strength(&fs, spec)?;
    let (f, f1, f2) = profile_family(&probe);
    let ff1 = f.mul(&f1);
    let one = |p: &Poly, what: &str| -> Result<Poly> {
        fit(p, std::slice::from_ref(&f1)).map(|v| v[0].clone()).ok_or_else(|| unfit(what))
    };
    let three = |p: &Poly, what: &str| -> Result<[Poly; 3]> {
        let v = fit(p, &[f1.clone(), ff1.clone(), f2.clone()]).ok_or_else(|| unfit(what))?;
        Ok([v[0].clone(), v[1].clone(), v[2].clone()])
    };
    let closed = ClosedFormStrength {
        spatial: [
            one(&fs.spatial[0], "F_12")?,
            one(&fs.spatial[1], "F_13")?,
            one(&fs.spatial[2], "F_23")?,
        ],
        mixed: [
            three(&fs.mixed[0], "F_01")?,
            three(&fs.mixed[1], "F_02")?,
            three(&fs.mixed[2], "F_03")?,
        ],
        covariant: [
            three(&fs.covariant[0], "F~_01")?,
            three(&fs.covariant[1], "F~_02")?,
            three(&fs.covariant[2], "F~_03")?,
        ],
    };

    let coeffs = spec.symbolic_profile();
    let direct = gauge::field_strength(&ansatz_with(spec, &coeffs, theta), ctx);
    let direct = in_phase_strength(&direct, spec)?;
    let consistent = closed.evaluate(&coeffs) == direct;

    let u = spec.phase();
    let fam = {
        let (j, kj) = nonzero_rate(spec);
        let inv = c_real(BigRational::one() / kj);
        let f = profile_at(&coeffs, &u);
        let f1 = f.partial(j).scale(&inv);
        let f2 = f1.partial(j).scale(&inv);
        [f, f1, f2]
    };
    let pointwise = fam
        .iter()
        .all(|a| fam.iter().all(|b| ctx.star(a, b) == a.mul(b)));
    Ok(PlaneWaveStrength {
        closed,
        direct,
        consistent,
        pointwise,
    })
}

/// A direction `j` with `d u / d x_j = k_j != 0`.
fn nonzero_rate(spec: &PlaneWaveSpec) -> (usize, BigRational) {
    let j = spec.k.iter().position(|x| !x.is_zero()).expect("validated k");
    (j + 1, spec.k[j].clone())
}

/// Coefficients of the action density to first order in `thetadot`:
///
/// ```text
/// density = quad f'^2 + cubic tau(t) f'^2 f + boundary(t) f' f'' + O(thetadot^2)
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionReport {
    pub quad_coeff: CRat,
    /// Multiplier of `tau(t) f'^2 f`; zero when the wave is polarised.
    pub cubic_coeff: CRat,
    /// `cubic_coeff * tau(t)`.
    pub cubic_density: Poly,
    /// Coefficient of the total derivative `f' f''`.
    pub boundary: Poly,
    /// Lowest order in `thetadot` of the discarded remainder (0 if none).
    pub residual_order: u32,
    /// Profile used to identify the coefficients.
    pub probe: Vec<CRat>,
}

fn density_at(
    spec: &PlaneWaveSpec,
    coeffs: &[CRat],
    theta: &ThetaProfile,
    s: i64,
    conjugate: bool,
) -> Result<Poly> {
    let th = theta.scaled(&cr(s, 1));
    let ctx = StarContext::new(th.clone());
    let fs = gauge::field_strength(&ansatz_with(spec, coeffs, &th), &ctx);
    let sq = |f: &Poly| {
        if conjugate {
            ctx.star(f, &f.conj())
        } else {
            ctx.star(f, f)
        }
    };
    let mut d = Poly::zero();
    for f in &fs.spatial {
        d += &sq(f);
    }
    for f in &fs.covariant {
        d -= &sq(f);
    }
    to_phase_coordinates(&d, spec)
}

/// Split `D(s)` (quadratic in the scale `s` of theta) into orders.
fn orders(spec: &PlaneWaveSpec, coeffs: &[CRat], theta: &ThetaProfile) -> Result<[Poly; 3]> {
    let d0 = density_at(spec, coeffs, theta, 0, true)?;
    let dp = density_at(spec, coeffs, theta, 1, true)?;
    let dm = density_at(spec, coeffs, theta, -1, true)?;
    let lin = (&dp - &dm).scale(&cr(1, 2));
    let quad = (&dp + &dm).scale(&cr(1, 2)) - d0.clone();
    Ok([d0, lin, quad])
}

fn proportional(p: &Poly, tau: &Poly) -> Option<CRat> {
    if p.is_zero() {
        return Some(cr(0, 1));
    }
    let (m, c) = tau.leading()?;
    let ratio = p.coeff(m) / c;
    (tau.scale(&ratio) == *p).then_some(ratio)
}

/// Action density of the ansatz to first order in `thetadot`.
pub fn effective_action(spec: &PlaneWaveSpec, ctx: &StarContext) -> Result<ActionReport> {
    let theta = ctx.theta();
    let probe = probe_profile();
    let [d0, lin, rest] = orders(spec, &probe, theta)?;
    let (f, f1, f2) = profile_family(&probe);
    let f1sq = f1.mul(&f1);
    let q = fit(&d0, std::slice::from_ref(&f1sq)).ok_or_else(|| unfit("theta-independent density"))?;
    let quad_coeff = q[0].constant_term();
    if q[0] != Poly::constant(quad_coeff.clone()) {
        return Err(unfit("theta-independent density"));
    }
    let l = fit(&lin, &[f1sq.mul(&f), f1.mul(&f2)]).ok_or_else(|| unfit("first-order density"))?;
    let tau = tau(spec, theta);
    let cubic_coeff = proportional(&l[0], &tau).ok_or_else(|| {
        Error::InvalidPlaneWave(format!(
            "first-order density {} is not a multiple of thetadot^(jk) k_j p_k",
            l[0]
        ))
    })?;
    Ok(ActionReport {
        quad_coeff,
        cubic_density: l[0].clone(),
        cubic_coeff,
        boundary: l[1].clone(),
        residual_order: if rest.is_zero() { 0 } else { 2 },
        probe,
    })
}

/// The direct density on the spec's own polynomial profile agrees with the
/// closed form `quad f'^2` at zeroth order and
/// `cubic tau f'^2 f + boundary f' f''` at first order.
pub fn action_profile_check(spec: &PlaneWaveSpec, ctx: &StarContext, report: &ActionReport) -> Result<bool> {
    let coeffs = spec.symbolic_profile();
    let [d0, lin, _] = orders(spec, &coeffs, ctx.theta())?;
    let (f, f1, f2) = profile_family(&coeffs);
    let z = f1.mul(&f1).scale(&report.quad_coeff);
    let l = &report.cubic_density.mul(&f1.mul(&f1).mul(&f)) + &report.boundary.mul(&f1.mul(&f2));
    Ok(d0 == z && lin == l)
}

/// Coefficients as printed: `(quad, cubic)` with
/// `quad = -(k^2 p^2 + 2 omega p_0 (k.p) - (k.p)^2 - omega^2 p^2 - p_0^2 k^2)` and
/// `cubic = -2 (omega p^2 - p_0 (k.p))` multiplying `thetadot^{jk} k_j p_k f'f'f`.
pub fn printed_action(spec: &PlaneWaveSpec) -> (CRat, CRat) {
    let k2 = spec.k_sq();
    let p2 = spec.p_sq();
    let kp = spec.k_dot_p();
    let om = &spec.omega;
    let p0 = &spec.p[0];
    let two = BigRational::from_integer(2.into());
    let inner = &k2 * &p2 + &two * om * p0 * &kp - &kp * &kp - om * om * &p2 - p0 * p0 * &k2;
    let cubic = -(&two * (om * &p2 - p0 * &kp));
    (c_real(-inner), c_real(cubic))
}

/// The density obtained by squaring without conjugation, with the printed
/// closed form of the covariant strength, to first order in `thetadot`.
/// Returns `(quad, cubic, boundary)` in the same conventions as
/// [`ActionReport`].
pub fn unconjugated_printed_reading(spec: &PlaneWaveSpec, theta: &ThetaProfile) -> (CRat, CRat, Poly) {
    let cf = ClosedFormStrength::printed(spec, theta);
    let tau = tau(spec, theta);
    let mut quad = Poly::zero();
    let mut cubic = Poly::zero();
    let mut boundary = Poly::zero();
    for s in &cf.spatial {
        quad += &s.mul(s);
    }
    for [a, b, g] in &cf.covariant {
        quad -= &a.mul(a);
        cubic -= &a.mul(b).scale(&cr(2, 1));
        boundary -= &a.mul(g).scale(&cr(2, 1));
    }
    let cubic_coeff = proportional(&cubic, &tau).unwrap_or_else(|| cr(0, 1));
    (quad.constant_term(), cubic_coeff, boundary)
}

/// A disagreement between a printed closed form and the derived one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// Which printed formula is affected.
    pub formula: &'static str,
    pub term: &'static str,
    pub printed: String,
    pub derived: String,
    pub note: String,
}

#[derive(Debug, Clone)]
pub struct ActionComparison {
    pub report: ActionReport,
    pub printed_quad: CRat,
    pub printed_cubic: CRat,
    pub quad_matches: bool,
    pub cubic_matches: bool,
    pub diagnostics: Vec<Diagnostic>,
}

pub const ACTION_FORMULA: &str = "plane-wave effective action";
pub const COVARIANT_STRENGTH_FORMULA: &str = "plane-wave covariant field strength";
pub const MIXED_STRENGTH_FORMULA: &str = "plane-wave mixed field strength";

fn show(c: &CRat) -> String {
    Poly::constant(c.clone()).to_string()
}

/// Compare the derived action with the printed one. Mismatches become
/// diagnostics, never silent corrections.
pub fn compare_action(spec: &PlaneWaveSpec, ctx: &StarContext) -> Result<ActionComparison> {
    let report = effective_action(spec, ctx)?;
    let (pq, pc) = printed_action(spec);
    let polarised = is_polarised(spec, ctx.theta());
    let quad_matches = report.quad_coeff == pq;
    let cubic_matches = polarised || report.cubic_coeff == pc;
    let (uq, uc, _) = unconjugated_printed_reading(spec, ctx.theta());
    let mut diagnostics = Vec::new();
    if !quad_matches {
        let mut note = String::from("derived from sum F_ij*conj(F_ij) - sum F~_0i*conj(F~_0i)");
        if uq == pq {
            note.push_str("; the printed value is what squaring without conjugation gives");
        }
        diagnostics.push(Diagnostic {
            formula: ACTION_FORMULA,
            term: "coefficient of (f')^2",
            printed: show(&pq),
            derived: show(&report.quad_coeff),
            note,
        });
    }
    if !cubic_matches {
        let mut note = String::from("multiplier of thetadot^(jk) k_j p_k f'f'f");
        if uc == pc {
            note.push_str("; the printed value is what squaring without conjugation gives");
        }
        diagnostics.push(Diagnostic {
            formula: ACTION_FORMULA,
            term: "cubic coefficient",
            printed: show(&pc),
            derived: show(&report.cubic_coeff),
            note,
        });
    }
    Ok(ActionComparison {
        report,
        printed_quad: pq,
        printed_cubic: pc,
        quad_matches,
        cubic_matches,
        diagnostics,
    })
}

/// Compare derived field strengths with the printed closed forms.
pub fn compare_strength(spec: &PlaneWaveSpec, ctx: &StarContext) -> Result<Vec<Diagnostic>> {
    let derived = planewave_field_strength(spec, ctx)?.closed;
    let printed = ClosedFormStrength::printed(spec, ctx.theta());
    let names = ["f'", "f f'", "f''"];
    let mut out = Vec::new();
    for (k, (d, p)) in derived.spatial.iter().zip(&printed.spatial).enumerate() {
        if d != p {
            out.push(Diagnostic {
                formula: "plane-wave spatial field strength",
                term: ["F_12", "F_13", "F_23"][k],
                printed: p.to_string(),
                derived: d.to_string(),
                note: String::new(),
            });
        }
    }
    for (formula, dd, pp) in [
        (MIXED_STRENGTH_FORMULA, &derived.mixed, &printed.mixed),
        (COVARIANT_STRENGTH_FORMULA, &derived.covariant, &printed.covariant),
    ] {
        for i in 0..3 {
            for s in 0..3 {
                if dd[i][s] != pp[i][s] {
                    out.push(Diagnostic {
                        formula,
                        term: ["component 1", "component 2", "component 3"][i],
                        printed: pp[i][s].to_string(),
                        derived: dd[i][s].to_string(),
                        note: format!("coefficient of {}", names[s]),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// One Fourier harmonic of the cubic interaction density.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Harmonic {
    pub n: u32,
    pub cos: BigRational,
    pub sin: BigRational,
}

/// Fourier content of `f' f' f` over one period of `u`; empty when the
/// cubic term is absent (polarised wave).
pub fn harmonic_spectrum(spec: &PlaneWaveSpec, theta: &ThetaProfile) -> Result<Vec<Harmonic>> {
    let f = spec.profile.trig_series().ok_or_else(|| {
        Error::InvalidPlaneWave("harmonic spectrum needs a periodic profile".into())
    })?;
    if is_polarised(spec, theta) {
        return Ok(Vec::new());
    }
    let fp = f.derivative();
    let density = fp.mul(&fp).mul(&f);
    Ok(density
        .harmonics()
        .map(|(n, a, b)| Harmonic {
            n,
            cos: a.clone(),
            sin: b.clone(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn th() -> ThetaProfile {
        ThetaProfile::new(Poly::t(), Poly::t().pow(2).scale(&cr(1, 2)), Poly::zero()).unwrap()
    }

    fn spec(profile: Profile) -> PlaneWaveSpec {
        PlaneWaveSpec::new(
            q(2, 1),
            [q(1, 1), q(-1, 2), q(3, 1)],
            [q(1, 3), q(2, 1), q(1, 1), q(-1, 1)],
            profile,
        )
        .unwrap()
    }

    fn poly_profile() -> Profile {
        Profile::Poly(vec![q(1, 1), q(1, 1), q(0, 1), q(-2, 3)])
    }

    #[test]
    fn rejects_bad_specs() {
        let z = [q(0, 1), q(0, 1), q(0, 1)];
        let p = [q(1, 1), q(1, 1), q(1, 1), q(1, 1)];
        assert!(PlaneWaveSpec::new(q(1, 1), z, p.clone(), Profile::Cos).is_err());
        let k = [q(1, 1), q(0, 1), q(0, 1)];
        assert!(PlaneWaveSpec::new(q(1, 1), k.clone(), p.clone(), Profile::Poly(vec![q(0, 1)])).is_err());
        let mut deg9 = vec![q(0, 1); 10];
        deg9[9] = q(1, 1);
        assert!(PlaneWaveSpec::new(q(1, 1), k, p, Profile::Poly(deg9)).is_err());
    }

    #[test]
    fn ansatz_examples() {
        let s = spec(poly_profile());
        let a = build_ansatz(&s, &th());
        assert!(a.constraint_defect(&th()).is_zero());
        let stat = ThetaProfile::constant(cr(1, 1), cr(0, 1), cr(0, 1));
        let a = build_ansatz(&s, &stat);
        assert!(a.a(0).is_imaginary());
        let mut zp = s.clone();
        zp.p = [q(0, 1), q(0, 1), q(0, 1), q(0, 1)];
        assert_eq!(build_ansatz(&zp, &th()), GaugePotential::zero());
        // real part of A_0 is -1/4 thetadot^{ij} k_i p_j f'
        let u = s.phase();
        let f1 = profile_at(&s.symbolic_profile(), &Poly::x(1)).partial(1).substitute(Var::X1, &u);
        let a = build_ansatz(&s, &th());
        assert_eq!(a.a(0).real_part(), tau(&s, &th()).mul(&f1).scale(&cr(-1, 4)));
    }

    #[test]
    fn phase_coordinates() {
        let s = spec(Profile::Cos);
        let u = s.phase();
        let p = &Poly::t() * &u.pow(2);
        assert_eq!(to_phase_coordinates(&p, &s).unwrap(), &Poly::t() * &Poly::x(1).pow(2));
        assert!(to_phase_coordinates(&Poly::x(2), &s).is_err());
    }

    #[test]
    fn fitting() {
        let b = [Poly::x(1), Poly::x(1).pow(2) + Poly::one()];
        let target = &Poly::x(1).scale(&cr(3, 1)) + &(&Poly::t() * &b[1]);
        assert_eq!(fit(&target, &b).unwrap(), vec![Poly::constant(cr(3, 1)), Poly::t()]);
        assert!(fit(&Poly::x(1).pow(3), &b).is_none());
    }

    #[test]
    fn strength_closed_form() {
        let s = spec(poly_profile());
        let ctx = StarContext::new(th());
        let pw = planewave_field_strength(&s, &ctx).unwrap();
        assert!(pw.consistent);
        assert!(pw.pointwise);
        let printed = ClosedFormStrength::printed(&s, &th());
        assert_eq!(pw.closed.spatial, printed.spatial);
        assert_eq!(pw.closed.mixed, printed.mixed);
        // covariant f f' coefficient: +i tau p_i, opposite to the printed one
        let t = tau(&s, &th());
        for i in 0..3 {
            assert_eq!(pw.closed.covariant[i][0], printed.covariant[i][0]);
            assert_eq!(pw.closed.covariant[i][2], printed.covariant[i][2]);
            assert_eq!(pw.closed.covariant[i][1], t.scale(&(c_real(s.p[i + 1].clone()) * ci(1, 1))));
        }
        let diags = compare_strength(&s, &ctx).unwrap();
        assert_eq!(diags.len(), 3);
        assert!(diags.iter().all(|d| d.formula == COVARIANT_STRENGTH_FORMULA));
    }

    #[test]
    fn longitudinal_mode_is_pure_gauge() {
        // p = 2 k, p_0 = 2 omega
        let s = PlaneWaveSpec::new(
            q(3, 1),
            [q(1, 1), q(2, 1), q(0, 1)],
            [q(6, 1), q(2, 1), q(4, 1), q(0, 1)],
            poly_profile(),
        )
        .unwrap();
        let pw = planewave_field_strength(&s, &StarContext::new(th())).unwrap();
        assert!(pw.direct.is_zero());
    }

    #[test]
    fn action_static_theta() {
        let s = spec(poly_profile());
        let ctx = StarContext::new(ThetaProfile::constant(cr(1, 1), cr(2, 1), cr(0, 1)));
        let r = effective_action(&s, &ctx).unwrap();
        let (pq, _) = printed_action(&s);
        assert_eq!(r.quad_coeff, -pq);
        assert!(r.cubic_density.is_zero());
        assert_eq!(r.residual_order, 0);
        assert!(action_profile_check(&s, &ctx, &r).unwrap());
    }

    #[test]
    fn action_dynamic_theta() {
        let s = spec(poly_profile());
        let ctx = StarContext::new(th());
        let cmp = compare_action(&s, &ctx).unwrap();
        assert!(cmp.cubic_matches);
        assert!(!cmp.quad_matches);
        assert_eq!(cmp.report.quad_coeff, -cmp.printed_quad.clone());
        assert_eq!(cmp.report.residual_order, 2);
        assert!(cmp.report.boundary.is_zero());
        assert_eq!(cmp.diagnostics.len(), 1);
        assert_eq!(cmp.diagnostics[0].formula, ACTION_FORMULA);
        assert!(cmp.diagnostics[0].note.contains("without conjugation"));
        assert!(action_profile_check(&s, &ctx, &cmp.report).unwrap());
        let (uq, uc, _) = unconjugated_printed_reading(&s, &th());
        assert_eq!((uq, uc), printed_action(&s));
    }

    #[test]
    fn transverse_null_wave() {
        // p_0 = 0, k.p = 0, omega = |k| = 5
        let s = PlaneWaveSpec::new(
            q(5, 1),
            [q(3, 1), q(4, 1), q(0, 1)],
            [q(0, 1), q(4, 1), q(-3, 1), q(7, 1)],
            Profile::Cos,
        )
        .unwrap();
        let r = effective_action(&s, &StarContext::new(th())).unwrap();
        assert_eq!(r.quad_coeff, cr(0, 1));
        assert_eq!(printed_action(&s).0, cr(0, 1));
    }

    #[test]
    fn polarised_cubic_vanishes() {
        // only theta^{12} moves; k, p in the 1-3 plane... k_1 p_2 - k_2 p_1 = 0
        let th12 = ThetaProfile::new(Poly::t().pow(2), Poly::zero(), Poly::zero()).unwrap();
        let s = PlaneWaveSpec::new(
            q(1, 1),
            [q(1, 1), q(0, 1), q(2, 1)],
            [q(1, 1), q(3, 1), q(0, 1), q(1, 1)],
            Profile::Cos,
        )
        .unwrap();
        assert!(is_polarised(&s, &th12));
        let r = effective_action(&s, &StarContext::new(th12.clone())).unwrap();
        assert!(r.cubic_density.is_zero());
        assert!(harmonic_spectrum(&s, &th12).unwrap().is_empty());
    }

    #[test]
    fn cos_spectrum() {
        let s = spec(Profile::Cos);
        let h = harmonic_spectrum(&s, &th()).unwrap();
        assert_eq!(
            h,
            vec![
                Harmonic { n: 1, cos: q(1, 4), sin: q(0, 1) },
                Harmonic { n: 3, cos: q(-1, 4), sin: q(0, 1) },
            ]
        );
        let c = spec(Profile::Poly(vec![q(2, 1)]));
        assert!(harmonic_spectrum(&c, &th()).unwrap().iter().all(|h| h.cos.is_zero()));
        assert!(harmonic_spectrum(&spec(poly_profile()), &th()).is_err());
    }
}
