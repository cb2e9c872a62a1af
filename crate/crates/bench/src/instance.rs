use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::BenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Portfolio,
    MatCompletion,
    MatRegression,
    ExpDesign,
    PolyMin,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Portfolio => "portfolio",
            Family::MatCompletion => "matcompletion",
            Family::MatRegression => "matregression",
            Family::ExpDesign => "expdesign",
            Family::PolyMin => "polymin",
        }
    }

    fn id(self) -> u64 {
        match self {
            Family::Portfolio => 1,
            Family::MatCompletion => 2,
            Family::MatRegression => 3,
            Family::ExpDesign => 4,
            Family::PolyMin => 5,
        }
    }

    /// Whether instances take the `m` size parameter.
    pub fn uses_m(self) -> bool {
        matches!(self, Family::MatCompletion | Family::MatRegression | Family::PolyMin)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "portfolio" => Ok(Family::Portfolio),
            "matcompletion" => Ok(Family::MatCompletion),
            "matregression" => Ok(Family::MatRegression),
            "expdesign" | "expdesign-rt" | "expdesign-log" => Ok(Family::ExpDesign),
            "polymin" => Ok(Family::PolyMin),
            other => Err(BenchError::Parse(format!("unknown family {other:?}"))),
        }
    }
}

/// Determinant cone used by the experiment design family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Rt,
    Log,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Rt => "rt",
            Variant::Log => "log",
        }
    }
}

impl FromStr for Variant {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rt" => Ok(Variant::Rt),
            "log" => Ok(Variant::Log),
            other => Err(BenchError::Parse(format!("unknown variant {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Form {
    #[serde(rename = "nf")]
    Nf,
    #[serde(rename = "ef-exp")]
    EfExp,
    #[serde(rename = "ef-sec")]
    EfSec,
}

impl Form {
    pub const ALL: [Form; 3] = [Form::Nf, Form::EfExp, Form::EfSec];

    pub fn name(self) -> &'static str {
        match self {
            Form::Nf => "nf",
            Form::EfExp => "ef-exp",
            Form::EfSec => "ef-sec",
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Form {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nf" => Ok(Form::Nf),
            "ef-exp" => Ok(Form::EfExp),
            "ef-sec" => Ok(Form::EfSec),
            other => Err(BenchError::Parse(format!("unknown form {other:?}"))),
        }
    }
}

/// One cell of a benchmark run: an instance and the formulation to solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InstanceSpec {
    pub family: Family,
    pub k: usize,
    /// Second size parameter; ignored by families that do not use it.
    pub m: usize,
    /// Only meaningful for experiment design.
    pub variant: Variant,
    pub seed: u64,
    pub form: Form,
}

impl InstanceSpec {
    pub fn new(family: Family, k: usize, m: usize, seed: u64, form: Form) -> Self {
        let m = if family.uses_m() { m } else { 0 };
        InstanceSpec { family, k, m, variant: Variant::Rt, seed, form }
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_form(mut self, form: Form) -> Self {
        self.form = form;
        self
    }

    /// The spec with the form stripped, identifying the underlying instance.
    pub fn instance_key(&self) -> (Family, usize, usize, Variant, u64) {
        let variant = if self.family == Family::ExpDesign { self.variant } else { Variant::Rt };
        (self.family, self.k, self.m, variant, self.seed)
    }
}

/// Generator for one data block of an instance. The key packs the family,
/// size parameters and seed, so instances never share randomness; the
/// stream number separates data blocks within an instance.
pub fn block_rng(family: Family, k: usize, m: usize, seed: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&family.id().to_le_bytes());
    key[8..16].copy_from_slice(&(k as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(m as u64).to_le_bytes());
    key[24..].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}
