//! Exact cochain complexes over the integers.

pub mod complex;
pub mod export;
pub mod group;
pub mod matrix;
pub mod snf;

pub use complex::{
    coefficient_cohomology_direct, coefficient_cohomology_uct, lattice_quotient,
    reduced_circle_complex, tensor_product, tensor_with_coefficients, ZComplex,
};
pub use group::{BilinearMap, CoefficientGroup, CohomologyGroup, FieldModel};
pub use matrix::ZMatrix;
pub use snf::{
    hermite_normal_form, invariant_factors, kernel_basis, matrix_rank, smith_normal_form, SmithForm,
};
