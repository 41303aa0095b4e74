//! Linearized polynomials over finite fields and the sets `Im(f(x)/x)` they
//! determine: adjoints, the semilinear action of `ΓL(2,q^n)`, coefficient
//! identities for equal image sets, classification of same-image pairs for
//! `n ≤ 5`, and equivalence of linear sets of rank `n` in `PG(1,q^n)`.

pub mod criteria;
mod enumerate;
pub mod gf;
pub mod imageset;
pub mod linalg;
pub mod linset;
pub mod moebius;
pub mod qpoly;
pub mod verify;

pub use criteria::{ClassifyOutcome, CriteriaError, ERelationReport};
pub use gf::{FieldCtx, FieldElem, GfError};
pub use imageset::{image_of_ratio, images_equal, ImageSet, ImageSetError};
pub use linset::{linear_set, pgammal_equivalent, LinearSet, LinsetError, ProjPoint};
pub use moebius::{find_set_equivalence, transform_poly, MoebiusError, ProjValue, SemilinearMap};
pub use qpoly::{QPoly, QPolyError};
