//! Riccati dynamics of the strength's tangential derivative and blow-up analysis.

mod factor;
mod fit;
mod integrate;
mod live;
mod series;

pub use factor::{gauss_legendre, integrating_factor_solution};
pub use fit::{
    analyze_blowup, blowup_fit, rate_bound_check, fit_window, identity_residual, BoundCheck, MIN_WINDOW,
};
pub use integrate::{dopri5, riccati_integrate, RiccatiOptions, RiccatiRun, RiccatiStatus};
pub use live::{forcing_and_coefficient, vorticity_derivative};
pub use series::{BlowupEstimate, RiccatiSeries};
