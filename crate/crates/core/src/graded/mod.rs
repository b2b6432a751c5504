//! Block-graded classical Lie algebras, sl2-triples and Moore–Penrose tests.

mod algebra;
mod orbit;
mod triple;

pub use algebra::{ad_in_basis, bracket, Component, GradedAlgebra, Kind};
pub use orbit::{
    is_mp_orbit, jordan_characteristic, jordan_nilpotent, non_hermitian_conjugate, orbit_height, partitions,
    OrbitWitness,
};
pub use triple::{
    characteristic_space, characteristic_with_basis, complete_triple, is_mp_element, is_mp_element_checked,
    minimal_characteristic, mp_check_multidegree, mp_element_report, mp_inverse_short, multidegree_characteristic,
    positive_part_criterion, CharacteristicResult, CharacteristicSpace, CriterionReport, MpElementReport, Sl2Triple,
    CRITERION_THRESHOLD,
};
