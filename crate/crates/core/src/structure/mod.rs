//! Structure tensors of an f-structure and the identity checks built on them.

pub mod checks;
pub mod point;
pub mod suite;

pub use checks::{registry, Bound, CheckSpec, CheckStatus, Group, IdentityCheck};
pub use point::{
    eta_parallel_defect, f_basis, fundamental_two_form, kenmotsu_defect, nabla_phi_formula_check, normality_tensors, phi_sectional,
    projective_tensor, semi_symmetry_defects, volume_condition, EtaParallel, FBasis, NormalityTensors, PointStructure, SemiSymmetryDefects,
};
pub use suite::{axioms_check, evaluate_point, full_suite, gak_check, identity_suite, merge_checks, run_checks, sample_points};
