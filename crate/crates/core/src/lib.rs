#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod asymptotics;
pub mod cartan;
pub mod cpoly;
pub mod error;
pub mod identities;
pub mod linalg;
pub mod mass;
pub mod residual;
pub mod solution;

pub use cartan::{row_sum_check, CartanData};
pub use cpoly::ComplexPoly;
pub use error::{Result, TodaError};
pub use solution::{normalize_lambdas, sample_params, CoeffEntry, ParamDirection, SolutionEval, SolutionParams};
