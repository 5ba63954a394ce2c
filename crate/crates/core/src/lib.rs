pub mod dynamics;
pub mod error;
pub mod frame;
pub mod observables;
pub mod params;
pub mod steady_state;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/units.md")]
    mod units {}
    #[doc = include_str!("../../../book/src/steady_state.md")]
    mod steady_state {}
    #[doc = include_str!("../../../book/src/bogoliubov.md")]
    mod bogoliubov {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/observables.md")]
    mod observables {}
}
