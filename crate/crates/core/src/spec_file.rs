//! JSON description of a function plus a transform pipeline.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::Result;
use crate::map::{AnalyticMap, ClassParameter};
use crate::schwarz::SchwarzGenerator;
use crate::series::DEFAULT_ORDER;
use crate::transforms::{apply, TransformKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSource {
    Rational { num: Vec<Complex64>, den: Vec<Complex64> },
    Characterization { a2: Complex64, lambda: f64, omega: SchwarzGenerator },
    Builtin { name: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpecFile {
    #[serde(flatten)]
    pub source: FunctionSource,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transforms: Vec<TransformKind>,
}

impl FunctionSpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn builtin(name: &str) -> Self {
        Self { source: FunctionSource::Builtin { name: name.into() }, transforms: Vec::new() }
    }

    /// Builds the map and applies the transforms in order.
    pub fn build(&self, order: usize) -> Result<AnalyticMap> {
        let order = if order == 0 { DEFAULT_ORDER } else { order };
        let mut f = match &self.source {
            FunctionSource::Rational { num, den } => AnalyticMap::rational(num.clone(), den.clone(), order)?,
            FunctionSource::Characterization { a2, lambda, omega } => {
                AnalyticMap::from_characterization(*a2, ClassParameter::new(*lambda)?, omega.clone(), order)?
            }
            FunctionSource::Builtin { name } => catalog::builtin(name, order)?,
        };
        for t in &self.transforms {
            f = apply(&f, *t)?;
        }
        Ok(f)
    }
}
