//! TOML configuration.
//!
//! ```toml
//! [theta]            # upper-triangle entries, polynomials in t
//! "12" = "t"
//! "13" = "1/2*t^2"
//! "23" = "0"
//!
//! [planewave]
//! omega = 2
//! k = [1, "-1/2", 3]
//! p = ["1/3", 2, 1, -1]   # (p0, p1, p2, p3)
//! profile = "cos"         # or { poly = [0, 1, 0, "-2/3"] }, coefficients of u^0, u^1, ...
//!
//! [grid]
//! n = 256
//! box_length = 100.53096491487338
//! theta = 1.0
//! sigma = 3.0
//! ```

use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use nckit_core::planewave::{PlaneWaveSpec, Profile};
use nckit_core::{Poly, StarContext, ThetaProfile, Var};

use crate::error::{CliError, Result};
use crate::expr;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub theta: Option<ThetaConfig>,
    pub planewave: Option<PlaneWaveConfig>,
    pub grid: Option<GridConfig>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}

fn zero() -> String {
    "0".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaConfig {
    #[serde(rename = "12", default = "zero")]
    pub t12: String,
    #[serde(rename = "13", default = "zero")]
    pub t13: String,
    #[serde(rename = "23", default = "zero")]
    pub t23: String,
}

impl Default for ThetaConfig {
    /// `theta^{12} = t`, other entries zero.
    fn default() -> Self {
        ThetaConfig {
            t12: "t".into(),
            t13: zero(),
            t23: zero(),
        }
    }
}

/// A polynomial in `t` written in the expression language.
pub fn time_poly(src: &str) -> Result<Poly> {
    let e = expr::parse(src)?;
    let v = expr::eval(&e, &StarContext::new(ThetaProfile::zero()))?;
    let p = v
        .as_function()
        .ok_or_else(|| CliError::Config(format!("theta entry '{src}' is a form")))?;
    if !p.only_vars(&[Var::T]) {
        return Err(CliError::Config(format!("theta entry '{src}' depends on more than t")));
    }
    Ok(p)
}

impl ThetaConfig {
    pub fn profile(&self) -> Result<ThetaProfile> {
        Ok(ThetaProfile::new(
            time_poly(&self.t12)?,
            time_poly(&self.t13)?,
            time_poly(&self.t23)?,
        )?)
    }

    pub fn from_profile(theta: &ThetaProfile) -> Self {
        let [a, b, c] = theta.upper().map(|p| p.to_string());
        ThetaConfig {
            t12: a,
            t13: b,
            t23: c,
        }
    }
}

/// An exact number: an integer or a string `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    pub fn rational(&self) -> Result<BigRational> {
        match self {
            Number::Int(n) => Ok(BigRational::from_integer((*n).into())),
            Number::Text(s) => BigRational::from_str(s.trim())
                .map_err(|_| CliError::Config(format!("'{s}' is not an integer or p/q"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum ProfileConfig {
    Named(String),
    Poly { poly: Vec<Number> },
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneWaveConfig {
    pub omega: Number,
    pub k: [Number; 3],
    pub p: [Number; 4],
    pub profile: ProfileConfig,
}

impl PlaneWaveConfig {
    pub fn spec(&self) -> Result<PlaneWaveSpec> {
        let rats = |xs: &[Number]| xs.iter().map(Number::rational).collect::<Result<Vec<_>>>();
        let k: [BigRational; 3] = rats(&self.k)?.try_into().expect("three entries");
        let p: [BigRational; 4] = rats(&self.p)?.try_into().expect("four entries");
        let profile = match &self.profile {
            ProfileConfig::Named(s) if s == "cos" => Profile::Cos,
            ProfileConfig::Named(s) => {
                return Err(CliError::Config(format!("unknown profile '{s}' (expected \"cos\" or {{ poly = [...] }})")))
            }
            ProfileConfig::Poly { poly } => Profile::Poly(rats(poly)?),
        };
        Ok(PlaneWaveSpec::new(self.omega.rational()?, k, p, profile)?)
    }
}

fn default_n() -> usize {
    nckit_grid::DEFAULT_N
}

fn default_box() -> f64 {
    nckit_grid::DEFAULT_BOX_LENGTH
}

fn default_theta() -> f64 {
    1.0
}

fn default_sigma() -> f64 {
    3.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_box")]
    pub box_length: f64,
    #[serde(default = "default_theta")]
    pub theta: f64,
    /// Gaussian window width for the symbolic cross-check.
    #[serde(default = "default_sigma")]
    pub sigma: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n: default_n(),
            box_length: default_box(),
            theta: default_theta(),
            sigma: default_sigma(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_file() {
        let c = ConfigFile::parse(
            r#"
            [theta]
            "12" = "t"
            "23" = "1/2*t^2 - 3"

            [planewave]
            omega = 2
            k = [1, "-1/2", 3]
            p = ["1/3", 2, 1, -1]
            profile = { poly = [0, 1, 0, "-2/3"] }

            [grid]
            n = 64
            "#,
        )
        .unwrap();
        let th = c.theta.unwrap().profile().unwrap();
        assert_eq!(th.get(2, 3).to_string(), "1/2*t^2 - 3");
        assert!(th.get(1, 3).is_zero());
        let s = c.planewave.unwrap().spec().unwrap();
        assert_eq!(s.k[1], BigRational::new((-1).into(), 2.into()));
        assert!(matches!(s.profile, Profile::Poly(ref v) if v.len() == 4));
        assert_eq!(c.grid.unwrap().n, 64);
    }

    #[test]
    fn rejections() {
        let bad = |s: &str| ConfigFile::parse(s).and_then(|c| c.theta.unwrap().profile());
        assert!(bad("[theta]\n\"12\" = \"x1\"").is_err());
        assert!(bad("[theta]\n\"12\" = \"dt\"").is_err());
        assert!(bad("[theta]\n\"12\" = \"t +\"").is_err());
        assert!(ConfigFile::parse("[theta]\n\"21\" = \"t\"").is_err());
        let pw = ConfigFile::parse("[planewave]\nomega = 1\nk = [0, 0, 0]\np = [1, 1, 1, 1]\nprofile = \"cos\"").unwrap();
        assert!(pw.planewave.unwrap().spec().is_err());
        let pw = ConfigFile::parse("[planewave]\nomega = \"x\"\nk = [1, 0, 0]\np = [1, 1, 1, 1]\nprofile = \"sin\"").unwrap();
        assert!(pw.planewave.unwrap().spec().is_err());
    }

    #[test]
    fn theta_round_trip() {
        let th = ThetaConfig::default().profile().unwrap();
        assert_eq!(ThetaConfig::from_profile(&th), ThetaConfig::default());
    }
}
