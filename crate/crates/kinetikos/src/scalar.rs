//! Scalar abstraction for the geometric core.
//!
//! The polynomial and predicate layers are written against `Real` so the
//! same code instantiates at `f32` and `f64`. Everything downstream of the
//! enumeration layer is double precision; the published tolerances assume
//! `f64`.

use std::fmt::{Debug, Display};

pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + num_traits::NumAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn from_f(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts into any Real")
    }
    fn to_f(self) -> f64 {
        self.to_f64().expect("Real converts into f64")
    }
    fn from_us(n: usize) -> Self {
        Self::from_usize(n).expect("small usize converts into any Real")
    }
}

impl Real for f32 {}
impl Real for f64 {}
