//! Finite category engine.
//!
//! Everything here works on explicitly tabulated finite data: categories are
//! full composition tables, functors are object and morphism maps, and every
//! universal property is verified by exhaustive search rather than assumed.

pub mod budget;
pub mod category;
pub mod clans;
pub mod error;
pub mod filtered;
pub mod fixtures;
pub mod functor;
pub mod limits;
pub mod models;
pub mod presentation;
pub mod sites;
pub mod topos;
pub mod union_find;
pub mod verdict;

pub use category::{validate_category, Arrow, CategoryBuilder, FinCategory, MorId, ObjId};
pub use error::{Error, Result};
pub use functor::{
    check_fully_faithful, covariant_hom, nat_transforms_between, validate_functor, validate_nat,
    validate_set_functor, validate_set_nat, yoneda, Functor, NatTransform, SetFunctor, SetNat,
};
pub use presentation::{compile_presentation, CategoryPresentation, Generator};
pub use verdict::{Verdict, Witness};
