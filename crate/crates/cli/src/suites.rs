//! Seeded verification suites.
//!
//! Case `c` of a suite run with seed `s` draws from ChaCha8 seeded with `s`
//! on stream `c`, so any case can be replayed alone and results do not
//! depend on scheduling.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use nckit_core::gauge::{complete_time_component, covariance_defect, form_route_defect, invariance_witness};
use nckit_core::planewave::{
    compare_action, effective_action, harmonic_spectrum, is_polarised, planewave_field_strength,
    PlaneWaveSpec, Profile,
};
use nckit_core::poly::{c_real, q};
use nckit_core::sample::{self, PolyShape};
use nckit_core::scalar::{kg_density, kg_operator, phase, star_power_defect, subalgebra_derivation_check};
use nckit_core::{DifferentialForm, Monomial, Poly, StarContext, ThetaProfile, Var};
use nckit_grid::{
    cross_validate_symbolic, grid_cyclicity_defect, grid_star, grid_trace_defect, relative_defect,
    GridField, WindowedPoly,
};

use crate::config::{GridConfig, ThetaConfig};
use crate::error::{CliError, Result};
use crate::expr::quote;

pub const SUITES: [&str; 6] = ["star", "calculus", "gauge", "scalar", "planewave", "grid"];

/// Grid tolerances.
pub const PHASE_LAW_TOL: f64 = 1e-8;
pub const TRACE_TOL: f64 = 1e-10;
pub const CROSS_CHECK_TOL: f64 = 1e-6;

/// Counterexamples kept per property.
const KEEP: usize = 3;

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub cases: usize,
    /// eps cutoff for the gauge suite.
    pub order: u32,
    /// Fixed deformation; `None` draws a random time-dependent one per case.
    pub theta: Option<ThetaProfile>,
    pub grid: GridConfig,
}

impl SuiteOptions {
    pub fn new(seed: u64, cases: usize) -> Self {
        SuiteOptions {
            seed,
            cases,
            order: 2,
            theta: None,
            grid: GridConfig::default(),
        }
    }
}

/// Case count used when none is given.
pub fn default_cases(suite: &str) -> usize {
    match suite {
        "star" => 200,
        "calculus" => 100,
        "gauge" => 50,
        "scalar" => 10,
        "planewave" => 20,
        _ => 3,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Input {
    pub name: String,
    pub value: String,
}

/// A failing case. `expression`, when present, reduces (under `theta`) to
/// `value`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub case: usize,
    pub theta: Option<ThetaConfig>,
    pub inputs: Vec<Input>,
    pub expression: Option<String>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub order: u32,
    pub passed: bool,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}  seed {}  cases {}", self.suite, self.seed, self.cases)?;
        writeln!(f, "{:<46} {:>8} {:>8} {:>8}", "property", "checked", "passed", "failed")?;
        for p in &self.properties {
            writeln!(f, "{:<46} {:>8} {:>8} {:>8}", p.name, p.checked, p.passed, p.failed)?;
        }
        for p in &self.properties {
            for c in &p.counterexamples {
                writeln!(f, "counterexample: {} (case {})", p.name, c.case)?;
                if let Some(t) = &c.theta {
                    writeln!(f, "  theta 12 = {}, 13 = {}, 23 = {}", t.t12, t.t13, t.t23)?;
                }
                for i in &c.inputs {
                    writeln!(f, "  {} = {}", i.name, i.value)?;
                }
                if let Some(e) = &c.expression {
                    writeln!(f, "  reduce: {e}")?;
                }
                writeln!(f, "  value: {}", c.value)?;
            }
        }
        Ok(())
    }
}

struct Failure {
    inputs: Vec<Input>,
    expression: Option<String>,
    value: String,
}

struct Check {
    property: &'static str,
    failure: Option<Failure>,
}

struct Case<'a> {
    rng: ChaCha8Rng,
    opts: &'a SuiteOptions,
    theta: Option<ThetaProfile>,
}

impl Case<'_> {
    fn theta(&mut self) -> ThetaProfile {
        let th = match &self.opts.theta {
            Some(t) => t.clone(),
            None => sample::dynamic_theta(&mut self.rng, 2),
        };
        self.theta = Some(th.clone());
        th
    }
}

fn pass(property: &'static str) -> Check {
    Check {
        property,
        failure: None,
    }
}

fn fail(property: &'static str, inputs: Vec<Input>, expression: Option<String>, value: String) -> Check {
    Check {
        property,
        failure: Some(Failure {
            inputs,
            expression,
            value,
        }),
    }
}

fn input(name: &str, value: impl ToString) -> Input {
    Input {
        name: name.into(),
        value: value.to_string(),
    }
}

/// Passes when `value` vanishes; otherwise records the inputs and the
/// template with each input name replaced by its parenthesised value.
fn vanishes(property: &'static str, value: &DifferentialForm, inputs: &[(&str, String)], template: &str) -> Check {
    if value.is_zero() {
        return pass(property);
    }
    let mut expr = template.to_string();
    for (name, v) in inputs {
        expr = expr.replace(name, &format!("({v})"));
    }
    fail(
        property,
        inputs.iter().map(|(n, v)| input(n, v)).collect(),
        Some(expr),
        crate::expr::render(value),
    )
}

fn vanishes_poly(property: &'static str, value: &Poly, inputs: &[(&str, &Poly)], template: &str) -> Check {
    let inputs: Vec<(&str, String)> = inputs.iter().map(|(n, p)| (*n, p.to_string())).collect();
    vanishes(property, &DifferentialForm::function(value.clone()), &inputs, template)
}

fn holds(property: &'static str, ok: bool, inputs: impl FnOnce() -> Vec<Input>, value: impl FnOnce() -> String) -> Check {
    if ok {
        pass(property)
    } else {
        fail(property, inputs(), None, value())
    }
}

type CaseFn = fn(&mut Case) -> Result<Vec<Check>>;

fn star_case(c: &mut Case) -> Result<Vec<Check>> {
    let theta = c.theta();
    let ctx = StarContext::new(theta.clone());
    let shape = PolyShape::new(3, 4, 2);
    let f = sample::poly(&mut c.rng, &shape);
    let g = sample::poly(&mut c.rng, &shape);
    let h = sample::poly(&mut c.rng, &shape);
    let mut out = Vec::new();

    let assoc = ctx.star(&ctx.star(&f, &g), &h) - ctx.star(&f, &ctx.star(&g, &h));
    out.push(vanishes_poly(
        "associativity",
        &assoc,
        &[("F", &f), ("G", &g), ("H", &h)],
        "(F*G)*H - F*(G*H)",
    ));

    let mut gen = Poly::zero();
    let mut parts = Vec::new();
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        let th = theta.get(i, j);
        gen += &(ctx.commutator(&Poly::x(i), &Poly::x(j)) - th.scale(&nckit_core::ci(1, 1)));
        parts.push(format!("x{i}*x{j} - x{j}*x{i} - i*{}", quote(th)));
    }
    out.push(vanishes_poly("coordinate_commutators", &gen, &[], &parts.join(" + ")));

    let i = c.rng.gen_range(1..=3);
    let mut expected = Poly::zero();
    for j in 1..=3 {
        expected += &theta.get(i, j).mul(&f.partial(j));
    }
    let expected = expected.scale(&nckit_core::ci(1, 1));
    let lin = ctx.commutator(&Poly::x(i), &f) - expected.clone();
    out.push(vanishes_poly(
        "coordinate_commutator_with_polynomial",
        &lin,
        &[("F", &f), ("E", &expected)],
        &format!("x{i}*F - F*x{i} - E"),
    ));

    let nl = ctx.dt_leibniz_defect(&f, &g) - ctx.dt_leibniz_expected(&f, &g);
    let expected = ctx.dt_leibniz_expected(&f, &g);
    out.push(vanishes_poly(
        "time_derivative_defect",
        &nl,
        &[("F", &f), ("G", &g), ("E", &expected)],
        "D0(F*G) - D0(F)*G - F*D0(G) - E",
    ));

    out.push(vanishes_poly(
        "conjugation_reverses_products",
        &ctx.conj_defect(&f, &g),
        &[("F", &f), ("G", &g)],
        "~(F*G) - ~G*~F",
    ));

    let k = c.rng.gen_range(1..=3);
    out.push(vanishes_poly(
        "spatial_derivatives_are_derivations",
        &ctx.spatial_derivation_defect(&f, &g, k),
        &[("F", &f), ("G", &g)],
        &format!("D{k}(F*G) - D{k}(F)*G - F*D{k}(G)"),
    ));
    Ok(out)
}

fn one_form(rng: &mut ChaCha8Rng) -> DifferentialForm {
    let shape = PolyShape::new(2, 2, 1);
    DifferentialForm::one_form(std::array::from_fn(|_| sample::poly(rng, &shape)))
}

fn calculus_case(c: &mut Case) -> Result<Vec<Check>> {
    let theta = c.theta();
    let ctx = StarContext::new(theta);
    let shape = PolyShape::new(3, 3, 2);
    let f = sample::poly(&mut c.rng, &shape);
    let g = sample::poly(&mut c.rng, &shape);
    let a = one_form(&mut c.rng);
    let b = one_form(&mut c.rng);
    let ff = DifferentialForm::function(f.clone());
    let gf = DifferentialForm::function(g.clone());
    let mut out = Vec::new();

    let dd = &ctx.d(&ctx.d(&ff)) + &ctx.d(&ctx.d(&a));
    out.push(vanishes(
        "d_squared_vanishes",
        &dd,
        &[("F", f.to_string()), ("A", a.to_string())],
        "d(d(F)) + d(d(A))",
    ));

    out.push(vanishes(
        "d_leibniz_on_functions",
        &ctx.d_leibniz_defect(&f, &g),
        &[("F", f.to_string()), ("G", g.to_string())],
        "d(F*G) - d(F)*G - F*d(G)",
    ));

    let graded = &(&ctx.d(&ctx.form_mul(&a, &gf)) - &ctx.form_mul(&ctx.d(&a), &gf)) + &ctx.form_mul(&a, &ctx.d(&gf));
    out.push(vanishes(
        "d_graded_leibniz_on_one_forms",
        &graded,
        &[("A", a.to_string()), ("G", g.to_string())],
        "d(A*G) - d(A)*G + A*d(G)",
    ));

    let conj = &ctx.conj_form(&ctx.form_mul(&a, &b)) + &ctx.form_mul(&ctx.conj_form(&b), &ctx.conj_form(&a));
    out.push(vanishes(
        "graded_conjugation",
        &conj,
        &[("A", a.to_string()), ("B", b.to_string())],
        "~(A*B) + ~B*~A",
    ));

    let assoc = &ctx.form_mul(&ctx.form_mul(&a, &ff), &b) - &ctx.form_mul(&a, &ctx.form_mul(&ff, &b));
    out.push(vanishes(
        "form_product_associativity",
        &assoc,
        &[("A", a.to_string()), ("F", f.to_string()), ("B", b.to_string())],
        "(A*F)*B - A*(F*B)",
    ));
    Ok(out)
}

fn first_nonzero<'a>(mut ps: impl Iterator<Item = &'a Poly>) -> String {
    ps.find(|p| !p.is_zero()).map(|p| p.to_string()).unwrap_or_default()
}

fn gauge_case(c: &mut Case) -> Result<Vec<Check>> {
    let theta = c.theta();
    let order = c.opts.order;
    let deg = 3;
    let shape = PolyShape::new(2, deg, 1).total(deg);
    let spatial: [Poly; 3] = std::array::from_fn(|_| sample::imaginary_poly(&mut c.rng, &shape));
    let a0 = sample::imaginary_poly(&mut c.rng, &shape);
    let pot = complete_time_component(spatial, a0, &theta)?;
    let lam = sample::imaginary_poly(&mut c.rng, &PolyShape::new(2, 2, 1).total(deg));
    let ctx = StarContext::new(theta);
    let inputs = || {
        let mut v: Vec<Input> = (0..4).map(|mu| input(&format!("A{mu}"), pot.a(mu))).collect();
        v.push(input("lambda", &lam));
        v
    };
    let mut out = Vec::new();

    let cov = covariance_defect(&pot, &lam, order, &ctx)?;
    out.push(holds("covariance", cov.is_zero(), inputs, || {
        first_nonzero(cov.spatial.iter().chain(&cov.covariant))
    }));

    let w = invariance_witness(&pot, &lam, order, &ctx)?;
    out.push(holds("action_invariance_remainder", w.remainder.is_zero(), inputs, || {
        w.remainder.to_string()
    }));

    let route = form_route_defect(&pot, &lam, order, &ctx)?;
    let ok = route.iter().flatten().all(Poly::is_zero);
    out.push(holds("form_route_agreement", ok, inputs, || {
        first_nonzero(route.iter().flatten())
    }));
    Ok(out)
}

/// Pythagorean quadruples `(omega; k)` with `omega^2 = |k|^2`.
const NULL_VECTORS: [(i64, [i64; 3]); 10] = [
    (3, [1, 2, 2]),
    (7, [2, 3, 6]),
    (9, [1, 4, 8]),
    (9, [4, 4, 7]),
    (11, [2, 6, 9]),
    (11, [6, 6, 7]),
    (5, [3, 4, 0]),
    (13, [3, 4, 12]),
    (15, [2, 5, 14]),
    (1, [0, 0, 1]),
];

fn scalar_case(c: &mut Case) -> Result<Vec<Check>> {
    let theta = c.theta();
    let ctx = StarContext::new(theta);
    let (om, k) = NULL_VECTORS[c.rng.gen_range(0..NULL_VECTORS.len())];
    let mut k = k.map(|x| if c.rng.gen_bool(0.5) { -x } else { x });
    let r = c.rng.gen_range(0..3);
    k.rotate_left(r);
    let scale = q(c.rng.gen_range(1..=4) * if c.rng.gen_bool(0.5) { 1 } else { -1 }, c.rng.gen_range(1..=3));
    let omega = c_real(&scale * q(om, 1));
    let kv = k.map(|x| c_real(&scale * q(x, 1)));
    let u = phase(&omega, &kv);
    let mut out = Vec::new();
    for n in 1..=6u32 {
        let un = u.pow(n);
        out.push(vanishes_poly(
            "null_wave_powers_solve_kg",
            &kg_operator(&un),
            &[("P", &un)],
            "D0(D0(P)) - D1(D1(P)) - D2(D2(P)) - D3(D3(P))",
        ));
        let star_n = vec!["U"; n as usize].join("*");
        out.push(vanishes_poly(
            "star_powers_are_pointwise",
            &star_power_defect(&u, n, &ctx),
            &[("U", &u)],
            &format!("{star_n} - U^{n}"),
        ));
    }
    let tu = &Poly::t() * &u;
    let u2 = u.pow(2);
    out.push(vanishes_poly(
        "time_derivative_is_derivation_on_phase_algebra",
        &subalgebra_derivation_check(&tu, &u2, &ctx),
        &[("F", &tu), ("G", &u2)],
        "D0(F*G) - D0(F)*G - F*D0(G)",
    ));
    let phi = sample::poly(&mut c.rng, &PolyShape::new(3, 3, 2));
    let dens = kg_density(&phi, &ctx);
    out.push(holds("kg_density_is_real", dens.is_real(), || vec![input("phi", &phi)], || {
        dens.imag_part().to_string()
    }));
    Ok(out)
}

fn rational(rng: &mut ChaCha8Rng) -> BigRational {
    q(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn random_spec(rng: &mut ChaCha8Rng, profile: Profile) -> PlaneWaveSpec {
    loop {
        let k = [rational(rng), rational(rng), rational(rng)];
        let p = [rational(rng), rational(rng), rational(rng), rational(rng)];
        if let Ok(s) = PlaneWaveSpec::new(rational(rng), k, p, profile.clone()) {
            return s;
        }
    }
}

fn spec_inputs(s: &PlaneWaveSpec) -> Vec<Input> {
    let list = |xs: &[BigRational]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    vec![
        input("omega", &s.omega),
        input("k", list(&s.k)),
        input("p", list(&s.p)),
        input("profile", format!("{:?}", s.profile)),
    ]
}

fn cross(a: &[BigRational; 3], b: &[BigRational; 3]) -> [BigRational; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Replace the spatial `p` of `spec` by one with `thetadot^{jk} k_j p_k = 0`
/// identically in `t`.
fn polarise(spec: &mut PlaneWaveSpec, theta: &ThetaProfile, rng: &mut ChaCha8Rng) {
    let td = theta.theta_dot();
    let max_t = (1..=3)
        .flat_map(|i| (1..=3).map(move |j| (i, j)))
        .map(|(i, j)| td.get(i, j).degree())
        .max()
        .unwrap_or(0);
    // v_n = k^T M_n for each power t^n of thetadot
    let mut directions: Vec<[BigRational; 3]> = Vec::new();
    for n in 0..=max_t {
        let m = Monomial([n as u16, 0, 0, 0, 0]);
        let v: [BigRational; 3] = std::array::from_fn(|kk| {
            (0..3).map(|j| &spec.k[j] * td.get(j + 1, kk + 1).coeff(&m).re).sum()
        });
        if v.iter().any(|x| !x.is_zero()) {
            directions.push(v);
        }
    }
    let lam = rational(rng);
    let mut p: [BigRational; 3] = spec.k.clone().map(|x| &lam * x);
    if let Some(v) = directions.first() {
        let rank_one = directions.iter().all(|w| cross(v, w).iter().all(Zero::is_zero));
        if rank_one {
            let mu = rational(rng);
            let n = cross(&spec.k, v);
            for i in 0..3 {
                p[i] += &mu * &n[i];
            }
        }
    }
    spec.p[1..].clone_from_slice(&p);
}

fn planewave_case(c: &mut Case) -> Result<Vec<Check>> {
    let theta = c.theta();
    let ctx = StarContext::new(theta.clone());
    let mut out = Vec::new();

    let s = random_spec(&mut c.rng, Profile::Cos);
    let cmp = compare_action(&s, &ctx)?;
    let diag = |term: &str| {
        cmp.diagnostics
            .iter()
            .find(|d| d.term.contains(term))
            .map(|d| format!("{}: {} printed {} derived {} ({})", d.formula, d.term, d.printed, d.derived, d.note))
            .unwrap_or_default()
    };
    out.push(holds("action_quadratic_matches_printed", cmp.quad_matches, || spec_inputs(&s), || diag("(f')^2")));
    out.push(holds("action_cubic_matches_printed", cmp.cubic_matches, || spec_inputs(&s), || diag("cubic")));

    let mut pol = random_spec(&mut c.rng, Profile::Cos);
    polarise(&mut pol, &theta, &mut c.rng);
    let rep = effective_action(&pol, &ctx)?;
    let ok = is_polarised(&pol, &theta) && rep.cubic_density.is_zero() && harmonic_spectrum(&pol, &theta)?.is_empty();
    out.push(holds("polarised_cubic_vanishes", ok, || spec_inputs(&pol), || rep.cubic_density.to_string()));

    let generic = random_spec(&mut c.rng, Profile::Cos);
    let rep = effective_action(&generic, &ctx)?;
    let ok = is_polarised(&generic, &theta) || !rep.cubic_density.is_zero();
    out.push(holds("generic_cubic_nonzero", ok, || spec_inputs(&generic), || rep.cubic_density.to_string()));

    if !is_polarised(&generic, &theta) {
        let h = harmonic_spectrum(&generic, &theta)?;
        let got: Vec<(u32, BigRational, BigRational)> = h.iter().map(|x| (x.n, x.cos.clone(), x.sin.clone())).collect();
        let want = vec![(1, q(1, 4), q(0, 1)), (3, q(-1, 4), q(0, 1))];
        out.push(holds("cos_harmonics", got == want, || spec_inputs(&generic), || format!("{got:?}")));
    }

    let deg = c.rng.gen_range(1..=3);
    let mut coeffs: Vec<BigRational> = (0..deg).map(|_| rational(&mut c.rng)).collect();
    coeffs.push(q(c.rng.gen_range(1..=3), 1));
    let ps = random_spec(&mut c.rng, Profile::Poly(coeffs));
    let fs = planewave_field_strength(&ps, &ctx)?;
    out.push(holds(
        "closed_form_strength_consistent",
        fs.consistent && fs.pointwise,
        || spec_inputs(&ps),
        || format!("consistent {}, pointwise {}", fs.consistent, fs.pointwise),
    ));
    Ok(out)
}

fn plane_wave_field(n: usize, l: f64, theta: f64, m: (i32, i32), c: Complex64) -> Result<GridField> {
    let k = 2.0 * PI / l;
    Ok(GridField::from_fn(n, l, theta, |x, y| {
        c * Complex64::from_polar(1.0, k * (m.0 as f64 * x + m.1 as f64 * y))
    })?)
}

/// `max |e^{i a.x} * e^{i b.x} - e^{-(i/2) theta (a1 b2 - a2 b1)} e^{i (a+b).x}|`.
pub fn phase_law_error(n: usize, l: f64, theta: f64, a: (i32, i32), b: (i32, i32)) -> Result<f64> {
    let one = Complex64::new(1.0, 0.0);
    let f = plane_wave_field(n, l, theta, a, one)?;
    let g = plane_wave_field(n, l, theta, b, one)?;
    let k = 2.0 * PI / l;
    let ph = -0.5 * theta * k * k * (a.0 * b.1 - a.1 * b.0) as f64;
    let expect = plane_wave_field(n, l, theta, (a.0 + b.0, a.1 + b.1), Complex64::from_polar(1.0, ph))?;
    Ok(grid_star(&f, &g)?.max_diff(&expect)?)
}

fn band_limited(rng: &mut ChaCha8Rng, n: usize, l: f64, theta: f64) -> Result<GridField> {
    let modes: Vec<(i32, i32, Complex64)> = (0..6)
        .map(|_| {
            (
                rng.gen_range(-12..=12),
                rng.gen_range(-12..=12),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    let k = 2.0 * PI / l;
    Ok(GridField::from_fn(n, l, theta, |x, y| {
        modes
            .iter()
            .map(|(a, b, c)| c * Complex64::from_polar(1.0, k * (*a as f64 * x + *b as f64 * y)))
            .sum()
    })?)
}

fn small_poly(rng: &mut ChaCha8Rng) -> Poly {
    let shape = PolyShape::new(2, 2, 0);
    loop {
        let p = sample::poly(rng, &shape).substitute(Var::X3, &Poly::zero());
        if !p.is_zero() {
            return p;
        }
    }
}

fn grid_case(c: &mut Case) -> Result<Vec<Check>> {
    let g = c.opts.grid.clone();
    let theta = match &c.opts.theta {
        Some(_) => g.theta,
        None => c.rng.gen_range(0.25..2.0),
    };
    let mode = |rng: &mut ChaCha8Rng| (rng.gen_range(-20..=20), rng.gen_range(-20..=20));
    let (a, b) = (mode(&mut c.rng), mode(&mut c.rng));
    let mut out = Vec::new();
    let base = vec![input("n", g.n), input("box_length", g.box_length), input("theta", theta)];
    let with = |extra: Vec<Input>| {
        let mut v = base.clone();
        v.extend(extra);
        v
    };

    let err = phase_law_error(g.n, g.box_length, theta, a, b)?;
    out.push(holds(
        "phase_law",
        err <= PHASE_LAW_TOL,
        || with(vec![input("a", format!("{a:?}")), input("b", format!("{b:?}"))]),
        || format!("max error {err:e}"),
    ));

    let f = band_limited(&mut c.rng, g.n, g.box_length, theta)?;
    let h = band_limited(&mut c.rng, g.n, g.box_length, theta)?;
    let tr = relative_defect(grid_trace_defect(&f, &h)?, &f, &h);
    out.push(holds("trace", tr <= TRACE_TOL, || with(vec![]), || format!("relative defect {tr:e}")));
    let cy = relative_defect(grid_cyclicity_defect(&f, &h)?, &f, &h);
    out.push(holds("cyclicity", cy <= TRACE_TOL, || with(vec![]), || format!("relative defect {cy:e}")));

    let (p1, p2) = (small_poly(&mut c.rng), small_poly(&mut c.rng));
    let w1 = WindowedPoly::new(&p1, g.sigma)?;
    let w2 = WindowedPoly::new(&p2, g.sigma)?;
    let err = cross_validate_symbolic(&w1, &w2, theta, g.n, g.box_length)?;
    out.push(holds(
        "symbolic_cross_validation",
        err <= CROSS_CHECK_TOL,
        || with(vec![input("F", &p1), input("G", &p2), input("sigma", g.sigma)]),
        || format!("max error {err:e}"),
    ));
    Ok(out)
}

fn case_fn(suite: &str) -> Result<CaseFn> {
    Ok(match suite {
        "star" => star_case,
        "calculus" => calculus_case,
        "gauge" => gauge_case,
        "scalar" => scalar_case,
        "planewave" => planewave_case,
        "grid" => grid_case,
        other => return Err(CliError::UnknownSuite(other.into())),
    })
}

fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    rng
}

/// Run `opts.cases` seeded cases of a suite.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    let f = case_fn(name)?;
    let results: Vec<(usize, Option<ThetaProfile>, Vec<Check>)> = (0..opts.cases)
        .into_par_iter()
        .map(|case| {
            let mut c = Case {
                rng: case_rng(opts.seed, case),
                opts,
                theta: None,
            };
            let checks = f(&mut c)?;
            Ok((case, c.theta, checks))
        })
        .collect::<Result<_>>()?;

    let mut order: Vec<&'static str> = Vec::new();
    let mut props: BTreeMap<&'static str, PropertyReport> = BTreeMap::new();
    for (case, theta, checks) in results {
        for ch in checks {
            let p = props.entry(ch.property).or_insert_with(|| {
                order.push(ch.property);
                PropertyReport {
                    name: ch.property.into(),
                    checked: 0,
                    passed: 0,
                    failed: 0,
                    counterexamples: Vec::new(),
                }
            });
            p.checked += 1;
            match ch.failure {
                None => p.passed += 1,
                Some(fl) => {
                    p.failed += 1;
                    let seen = p.counterexamples.iter().any(|c| c.case == case);
                    if p.counterexamples.len() < KEEP && !seen {
                        p.counterexamples.push(Counterexample {
                            case,
                            theta: theta.as_ref().map(ThetaConfig::from_profile),
                            inputs: fl.inputs,
                            expression: fl.expression,
                            value: fl.value,
                        });
                    }
                }
            }
        }
    }
    let properties: Vec<PropertyReport> = order.iter().map(|n| props.remove(n).expect("recorded")).collect();
    let passed = properties.iter().all(|p| p.failed == 0);
    Ok(SuiteReport {
        suite: name.into(),
        seed: opts.seed,
        cases: opts.cases,
        order: opts.order,
        passed,
        properties,
    })
}

/// Run a suite and time it.
pub fn timed_suite(name: &str, opts: &SuiteOptions) -> Result<(SuiteReport, std::time::Duration)> {
    let start = Instant::now();
    let r = run_suite(name, opts)?;
    Ok((r, start.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("bogus", &SuiteOptions::new(1, 1)), Err(CliError::UnknownSuite(_))));
    }

    #[test]
    fn star_suite_small() {
        let r = run_suite("star", &SuiteOptions::new(42, 5)).unwrap();
        assert!(r.passed, "{r}");
        assert_eq!(r.property("associativity").unwrap().checked, 5);
    }

    #[test]
    fn polarising_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let theta = sample::dynamic_theta(&mut rng, 2);
            let mut s = random_spec(&mut rng, Profile::Cos);
            polarise(&mut s, &theta, &mut rng);
            assert!(is_polarised(&s, &theta));
        }
        let theta = ThetaProfile::new(Poly::t().pow(2), Poly::zero(), Poly::zero()).unwrap();
        let mut s = random_spec(&mut rng, Profile::Cos);
        polarise(&mut s, &theta, &mut rng);
        assert!(is_polarised(&s, &theta));
    }

    #[test]
    fn counterexample_expression_substitution() {
        let f = Poly::x(1);
        let c = vanishes_poly("p", &f, &[("F", &f)], "F*F - F");
        let fl = c.failure.unwrap();
        assert_eq!(fl.expression.unwrap(), "(x1)*(x1) - (x1)");
        assert_eq!(fl.value, "x1");
    }

    #[test]
    fn cases_are_independent_of_count() {
        let a = run_suite("calculus", &SuiteOptions::new(9, 2)).unwrap();
        let b = run_suite("calculus", &SuiteOptions::new(9, 4)).unwrap();
        assert!(a.passed && b.passed);
        assert_eq!(case_rng(9, 1).gen::<u64>(), case_rng(9, 1).gen::<u64>());
        assert_ne!(case_rng(9, 1).gen::<u64>(), case_rng(9, 2).gen::<u64>());
    }

    #[test]
    fn counterexample_expressions_reduce_to_their_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let theta = sample::dynamic_theta(&mut rng, 2);
        let ctx = StarContext::new(theta.clone());
        let f = sample::poly(&mut rng, &PolyShape::new(3, 3, 2));
        let g = sample::poly(&mut rng, &PolyShape::new(3, 3, 2));
        let c = vanishes_poly("p", &ctx.commutator(&f, &g), &[("F", &f), ("G", &g)], "F*G - G*F");
        let fl = c.failure.expect("generic polynomials do not commute");
        let back = ThetaConfig::from_profile(&theta).profile().unwrap();
        let got = crate::expr::reduce(&fl.expression.unwrap(), &StarContext::new(back)).unwrap();
        assert_eq!(got, fl.value);
    }

    #[test]
    fn cross_product() {
        let v = [q(1, 1), q(0, 1), q(0, 1)];
        let w = [q(0, 1), q(1, 1), q(0, 1)];
        assert_eq!(cross(&v, &w), [q(0, 1), q(0, 1), q(1, 1)]);
    }
}
