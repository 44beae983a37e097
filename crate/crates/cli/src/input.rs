use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::Args;
use mls_core::fixtures::{builtin, BUILTIN_NAMES};
use mls_core::InputSpec;

#[derive(Args, Debug, Clone, Default)]
pub struct InputArgs {
    /// JSON input file or built-in example name.
    pub input: Option<String>,
    /// Gauss map g (inline data).
    #[arg(long)]
    pub g: Option<String>,
    /// Coefficient h of omega = h dz (inline data).
    #[arg(long)]
    pub omega: Option<String>,
    /// First component of the holomorphic curve (inline data).
    #[arg(long = "f1")]
    pub f1: Option<String>,
    /// Second component of the holomorphic curve (inline data).
    #[arg(long = "f2")]
    pub f2: Option<String>,
    /// Punctures, e.g. `--punctures 0,inf`.
    #[arg(long, value_delimiter = ',')]
    pub punctures: Vec<String>,
    /// Lagrangian angle.
    #[arg(long)]
    pub beta: Option<f64>,
}

impl InputArgs {
    pub fn load(&self) -> Result<InputSpec> {
        let inline =
            self.g.is_some() || self.omega.is_some() || self.f1.is_some() || self.f2.is_some();
        let mut spec = match (&self.input, inline) {
            (Some(_), true) => bail!("give either an input file/name or inline data, not both"),
            (Some(src), false) => {
                if Path::new(src).is_file() {
                    let text =
                        std::fs::read_to_string(src).with_context(|| format!("reading {src}"))?;
                    InputSpec::from_json(&text).with_context(|| format!("parsing {src}"))?
                } else if let Some(spec) = builtin(src) {
                    spec
                } else {
                    bail!(
                        "{src} is neither a file nor one of {}",
                        BUILTIN_NAMES.join(", ")
                    )
                }
            }
            (None, true) => {
                if self.punctures.is_empty() {
                    bail!("inline data needs --punctures");
                }
                InputSpec {
                    g: self.g.clone(),
                    omega: self.omega.clone(),
                    f1: self.f1.clone(),
                    f2: self.f2.clone(),
                    punctures: self.punctures.clone(),
                    ..Default::default()
                }
            }
            (None, false) => bail!("no input given"),
        };
        if self.beta.is_some() {
            spec.beta = self.beta;
        }
        spec.validate()?;
        Ok(spec)
    }
}
