//! Clones of Boolean functions and of conservative 2-functions.

pub mod closure;
pub mod derivation;
pub mod extension;
pub mod post;
pub mod realize;
pub mod witness;

pub use closure::{boolean_closure, two_closure, Budget, CloneSlice};
pub use derivation::{Derivation, NodeId, Step};
pub use extension::{
    classify_symmetric_2clone, extension_membership, fact1_witness, free_binary_part, glue,
    patchwork, symmetric_closure, BinaryPart, ExtensionClassification, ExtensionKind,
    ExtensionMembership, Fact1Oracle,
};
pub use post::{fingerprint, post_class, Fingerprint, PostClass};
pub use realize::{random_free_targets, realize_case1, CaseOneRealizer, Realization};
