//! JSON input format and the built-in example datasets.

use serde::{Deserialize, Serialize};

use crate::algebra::{Complex, SpherePoint};
use crate::error::{Error, Result};
use crate::parser::{parse_point, parse_rational};
use crate::weierstrass::WeierstrassData;

/// Input dataset: either `g`/`omega` or `F1`/`F2`, plus punctures.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    #[serde(rename = "F1", default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<String>,
    #[serde(rename = "F2", default, skip_serializing_if = "Option::is_none")]
    pub f2: Option<String>,
    pub punctures: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Constant expressions `[c1, c2]` added to `∫gω` and `∫ω`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn parse_constant(src: &str) -> Result<Complex> {
    parse_rational(src)?
        .as_constant()
        .ok_or_else(|| Error::InvalidParameters(format!("constant expected, got {src:?}")))
}

impl InputSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn punctures(&self) -> Result<Vec<SpherePoint>> {
        Ok(self
            .punctures
            .iter()
            .map(|p| parse_point(p))
            .collect::<Result<_, _>>()?)
    }

    /// Checks the form and parses every expression without building the data.
    pub fn validate(&self) -> Result<()> {
        let weier = self.g.is_some() || self.omega.is_some();
        let curve = self.f1.is_some() || self.f2.is_some();
        let complete =
            (self.g.is_some() && self.omega.is_some()) ^ (self.f1.is_some() && self.f2.is_some());
        if weier == curve || !complete {
            return Err(Error::InvalidParameters(
                "give exactly one of {g, omega} or {F1, F2}".into(),
            ));
        }
        for e in [&self.g, &self.omega, &self.f1, &self.f2]
            .into_iter()
            .flatten()
        {
            parse_rational(e)?;
        }
        self.punctures()?;
        if let Some([a, b]) = &self.constants {
            parse_constant(a)?;
            parse_constant(b)?;
        }
        Ok(())
    }

    pub fn to_data(&self) -> Result<WeierstrassData> {
        self.validate()?;
        let punctures = self.punctures()?;
        let beta = self.beta.unwrap_or(0.0);
        let data = match (&self.g, &self.omega, &self.f1, &self.f2) {
            (Some(g), Some(w), None, None) => {
                WeierstrassData::new(parse_rational(g)?, parse_rational(w)?, punctures, beta)?
            }
            (None, None, Some(f1), Some(f2)) => WeierstrassData::from_holomorphic_curve(
                parse_rational(f1)?,
                parse_rational(f2)?,
                punctures,
                beta,
            )?,
            _ => unreachable!("validated"),
        };
        Ok(match &self.constants {
            Some([a, b]) => data.with_constants([parse_constant(a)?, parse_constant(b)?]),
            None => data,
        })
    }
}

pub const BUILTIN_NAMES: [&str; 4] = ["catenoid", "enneper_type", "surjective", "plane"];

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

pub fn builtin(name: &str) -> Option<InputSpec> {
    let spec = match name {
        "catenoid" => InputSpec {
            name: Some("catenoid".into()),
            g: Some("-z^2".into()),
            omega: Some("-1/z^2".into()),
            punctures: strings(&["0", "inf"]),
            notes: strings(&["Lagrangian catenoid, curve F = (z, 1/z); g omits 0 and inf."]),
            ..Default::default()
        },
        "enneper_type" => InputSpec {
            name: Some("enneper_type".into()),
            f1: Some("(1+i)*z^2 + 2".into()),
            f2: Some("2*(1+i)*z - i".into()),
            punctures: strings(&["inf"]),
            notes: strings(&["F = (a z^2 + b, 2a z + c) with a = 1+i, b = 2, c = -i; total curvature -2 pi."]),
            ..Default::default()
        },
        "surjective" => InputSpec {
            name: Some("surjective".into()),
            f1: Some("z^3/3 + z".into()),
            f2: Some("z^2/2".into()),
            punctures: strings(&["inf"]),
            notes: strings(&[
                "g = -S2/S1 = (z^2+1)/z and omega = z dz, derived from the curve.",
                "Data printed elsewhere as (z dz, (z+1)/z) does not follow from this curve; (z+1)/z omits the value 1, while (z^2+1)/z is surjective.",
            ]),
            ..Default::default()
        },
        "plane" => InputSpec {
            name: Some("plane".into()),
            g: Some("1".into()),
            omega: Some("1".into()),
            punctures: strings(&["inf"]),
            notes: strings(&["Lagrangian plane, K = 0 (constant Gauss map)."]),
            ..Default::default()
        },
        _ => return None,
    };
    Some(spec)
}
