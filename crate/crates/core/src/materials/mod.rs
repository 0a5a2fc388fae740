//! Material tensors in spherical form, the push-forward calculus, lens and
//! magnified-object media, and the reflecting-complementarity audit.

mod complementary;
mod config;
mod medium;
mod profile;
mod push;

pub use complementary::{check_reflecting_complementary, CheckOptions, ComplementarityReport, Condition};
pub use config::{MediumConfig, ObjectConfig, ProfileSpec};
pub use medium::{
    assemble_hat_medium, assemble_lens_medium, check_ellipticity, LayeredMedium, Material, ObjectMedium, Shell,
};
pub use profile::{FnTensor, PowerTerm, Profile, RadialTensor, TensorField};
pub use push::{lens_tensor_closed_form, push_forward_tensor, push_forward_vector, Pushed};
