//! `SL(2, Z)`, the level-`p` subgroups `Gamma_1 < Gamma_2' < Gamma_2 < Gamma_0`,
//! their characters, cusps, and the quotient `Gamma_0 / Gamma_2'`.

mod characters;
mod cusps;
mod groups;
mod matrix;
mod quotient;

pub use characters::{chi, epsilon, epsilon_branches, multiplier_e, psi};
pub use cusps::{cusp_set, cusp_width, cusps_equivalent, projective_index, Cusp};
pub use groups::{coset_representative, gamma2_generator, membership, random_in, Subgroup, SubgroupTag};
pub use matrix::SL2Matrix;
pub use quotient::{cutting_character, quotient_structure, rho, QuotientReport};
