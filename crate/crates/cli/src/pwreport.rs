use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use nckit_core::planewave::{
    action_profile_check, compare_action, compare_strength, harmonic_spectrum, is_polarised,
    planewave_field_strength, tau, Diagnostic, PlaneWaveSpec, Profile,
};
use nckit_core::{CRat, Poly, StarContext};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficient {
    pub derived: String,
    pub printed: String,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicEntry {
    pub n: u32,
    pub cos: String,
    pub sin: String,
    pub cos_value: f64,
    pub sin_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticEntry {
    pub formula: String,
    pub term: String,
    pub printed: String,
    pub derived: String,
    pub note: String,
}

impl From<&Diagnostic> for DiagnosticEntry {
    fn from(d: &Diagnostic) -> Self {
        DiagnosticEntry {
            formula: d.formula.into(),
            term: d.term.into(),
            printed: d.printed.clone(),
            derived: d.derived.clone(),
            note: d.note.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaneWaveReport {
    pub omega: String,
    pub k: Vec<String>,
    pub p: Vec<String>,
    pub profile: String,
    /// `thetadot^{jk} k_j p_k` as a polynomial in `t`.
    pub tau: String,
    pub polarised: bool,
    /// Multiplier of `f'^2`.
    pub quadratic: Coefficient,
    /// Multiplier of `tau(t) f'^2 f`.
    pub cubic: Coefficient,
    pub cubic_density: String,
    /// Multiplier of the total derivative `f' f''`.
    pub boundary: String,
    /// Fourier content of `f'^2 f` for the cosine profile; empty when
    /// polarised or the profile is polynomial.
    pub harmonics: Vec<HarmonicEntry>,
    /// The closed-form field strengths reproduce the directly computed ones.
    pub strength_consistent: bool,
    /// The closed-form action reproduces the direct density on the spec's
    /// own profile.
    pub action_consistent: bool,
    pub diagnostics: Vec<DiagnosticEntry>,
    pub passed: bool,
}

fn show(c: &CRat) -> String {
    Poly::constant(c.clone()).to_string()
}

fn value(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn planewave_report(spec: &PlaneWaveSpec, ctx: &StarContext) -> Result<PlaneWaveReport> {
    let theta = ctx.theta();
    let cmp = compare_action(spec, ctx)?;
    let fs = planewave_field_strength(spec, ctx)?;
    let action_consistent = action_profile_check(spec, ctx, &cmp.report)?;
    let harmonics = match spec.profile {
        Profile::Cos => harmonic_spectrum(spec, theta)?
            .into_iter()
            .map(|h| HarmonicEntry {
                n: h.n,
                cos_value: value(&h.cos),
                sin_value: value(&h.sin),
                cos: h.cos.to_string(),
                sin: h.sin.to_string(),
            })
            .collect(),
        Profile::Poly(_) => Vec::new(),
    };
    let mut diagnostics: Vec<DiagnosticEntry> = cmp.diagnostics.iter().map(Into::into).collect();
    diagnostics.extend(compare_strength(spec, ctx)?.iter().map(Into::into));
    let strength_consistent = fs.consistent && fs.pointwise;
    let passed = diagnostics.is_empty() && strength_consistent && action_consistent;
    let strs = |xs: &[BigRational]| xs.iter().map(|x| x.to_string()).collect();
    Ok(PlaneWaveReport {
        omega: spec.omega.to_string(),
        k: strs(&spec.k),
        p: strs(&spec.p),
        profile: match &spec.profile {
            Profile::Cos => "cos".into(),
            Profile::Poly(c) => {
                let coeffs: Vec<CRat> = c.iter().cloned().map(nckit_core::poly::c_real).collect();
                nckit_core::scalar::profile_at(&coeffs, &Poly::var(nckit_core::Var::X1))
                    .to_string()
                    .replace("x1", "u")
            }
        },
        tau: tau(spec, theta).to_string(),
        polarised: is_polarised(spec, theta),
        quadratic: Coefficient {
            derived: show(&cmp.report.quad_coeff),
            printed: show(&cmp.printed_quad),
            matches: cmp.quad_matches,
        },
        cubic: Coefficient {
            derived: show(&cmp.report.cubic_coeff),
            printed: show(&cmp.printed_cubic),
            matches: cmp.cubic_matches,
        },
        cubic_density: cmp.report.cubic_density.to_string(),
        boundary: cmp.report.boundary.to_string(),
        harmonics,
        strength_consistent,
        action_consistent,
        diagnostics,
        passed,
    })
}

impl fmt::Display for PlaneWaveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "plane wave  omega {}  k ({})  p ({})  f(u) = {}",
            self.omega,
            self.k.join(", "),
            self.p.join(", "),
            self.profile
        )?;
        writeln!(f, "tau(t) = {}  polarised: {}", self.tau, self.polarised)?;
        writeln!(f, "{:<14} {:>28} {:>28} {:>8}", "term", "derived", "printed", "match")?;
        for (name, c) in [("(f')^2", &self.quadratic), ("tau f'^2 f", &self.cubic)] {
            writeln!(f, "{:<14} {:>28} {:>28} {:>8}", name, c.derived, c.printed, c.matches)?;
        }
        writeln!(f, "cubic density: {}", self.cubic_density)?;
        writeln!(f, "boundary f'f'': {}", self.boundary)?;
        if !self.harmonics.is_empty() {
            writeln!(f, "harmonics of f'^2 f:")?;
            for h in &self.harmonics {
                writeln!(f, "  n = {}: cos {} sin {}", h.n, h.cos, h.sin)?;
            }
        }
        writeln!(f, "strength consistent: {}  action consistent: {}", self.strength_consistent, self.action_consistent)?;
        for d in &self.diagnostics {
            writeln!(f, "diagnostic [{}] {}: printed {} derived {}", d.formula, d.term, d.printed, d.derived)?;
            if !d.note.is_empty() {
                writeln!(f, "  {}", d.note)?;
            }
        }
        Ok(())
    }
}
