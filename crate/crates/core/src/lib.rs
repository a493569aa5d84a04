pub mod components;
pub mod error;
pub mod filtration;
pub mod monomial;
pub mod multiplicity;
pub mod okounkov;
pub mod polytope;
pub mod rational;

pub use components::{example1_model, Component, ComponentModel};
pub use error::{Error, Result};
pub use filtration::{Filtration, FiltrationSpec, Period, SurdScalar};
pub use monomial::{minimalize, Exponent, MonomialIdeal, NewtonPolyhedron};
pub use polytope::{Halfspace, RationalPoint, RationalPolytope};
pub use rational::Rational;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/monomial-ideals.md")]
    mod monomial_ideals {}
    #[doc = include_str!("../../../book/src/filtrations.md")]
    mod filtrations {}
    #[doc = include_str!("../../../book/src/multiplicities.md")]
    mod multiplicities {}
    #[doc = include_str!("../../../book/src/okounkov-bodies.md")]
    mod okounkov_bodies {}
    #[doc = include_str!("../../../book/src/components.md")]
    mod components {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
