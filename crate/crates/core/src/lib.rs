//! Value functions, extremal-trajectory envelopes and asymptotic constants
//! for the nested-fraction minimization problem
//!
//! ```text
//! F_n(x) = min  t_1 + t_2/(t_1 + 1) + ... + x/(t_{n-1} + 1)
//! ```
//!
//! over nonnegative tuples, and its limit `F(x) = lim F_n(x)`.

pub mod asymptotics;
pub mod contour;
pub mod dp_value;
pub mod envelope;
pub mod figures;
pub mod genpar;
pub mod jets;
pub mod roots;
pub mod table;
pub mod trajectory;
pub mod verify;
