use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{lens_radii, LensRadii};

use super::{assemble_lens_medium, LayeredMedium, ObjectMedium, PowerTerm, Profile, RadialTensor};

/// A profile entry: a constant, a single `{coeff, power}` term, or a list of
/// terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileSpec {
    Constant(f64),
    Term { coeff: f64, power: f64 },
    Sum(Vec<PowerTermSpec>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerTermSpec {
    pub coeff: f64,
    pub power: f64,
}

impl ProfileSpec {
    pub fn to_profile(&self) -> Profile {
        match self {
            ProfileSpec::Constant(c) => Profile::constant(*c),
            ProfileSpec::Term { coeff, power } => Profile::power_law(*coeff, *power),
            ProfileSpec::Sum(terms) => Profile::new(
                terms
                    .iter()
                    .map(|t| PowerTerm {
                        coeff: t.coeff.into(),
                        power: t.power,
                    })
                    .collect(),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectConfig {
    pub eps_radial: ProfileSpec,
    pub eps_tangential: ProfileSpec,
    pub mu_radial: ProfileSpec,
    pub mu_tangential: ProfileSpec,
}

impl ObjectConfig {
    pub fn isotropic(eps: f64, mu: f64) -> Self {
        ObjectConfig {
            eps_radial: ProfileSpec::Constant(eps),
            eps_tangential: ProfileSpec::Constant(eps),
            mu_radial: ProfileSpec::Constant(mu),
            mu_tangential: ProfileSpec::Constant(mu),
        }
    }

    pub fn to_object(&self) -> ObjectMedium {
        ObjectMedium {
            eps: RadialTensor::new(self.eps_radial.to_profile(), self.eps_tangential.to_profile()),
            mu: RadialTensor::new(self.mu_radial.to_profile(), self.mu_tangential.to_profile()),
        }
    }
}

/// Serializable lens-plus-object description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MediumConfig {
    pub m: f64,
    pub r0: f64,
    pub alpha: f64,
    #[serde(default)]
    pub delta: f64,
    pub object: ObjectConfig,
}

impl MediumConfig {
    pub fn lens(&self) -> Result<LensRadii> {
        lens_radii(self.m, self.r0, self.alpha)
    }

    pub fn assemble(&self) -> Result<LayeredMedium> {
        assemble_lens_medium(&self.lens()?, self.delta, &self.object.to_object())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }
}
