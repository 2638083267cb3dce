//! Truncated power series in `z`, Laurent polynomials in `q`, the named
//! series `f`, `h`, `g` and the polynomial families built from them.

mod dwork;
mod families;
mod json;
mod named;
mod poly;
mod series;

pub use dwork::{dwork_check, is_p_integral, min_valuation, DworkReport};
pub use families::{p_poly, q_poly, r_poly, PolyFamilies, FAMILY_LIMIT};
pub use json::{
    poly_from_json, poly_to_json, rational_from_json, rational_to_json, series_from_json,
    series_to_json, PolyJson, RationalJson, SeriesJson, TermJson,
};
pub use named::{
    f_series, f_series_at_power, g_series, h_series, h_series_at_power, q_catalan,
    q_catalan_table,
};
pub use poly::QPolynomial;
pub use series::{Coeff, PolySeries, RationalSeries, Ring, TruncatedSeries};

/// Default truncation order for series computations.
pub const DEFAULT_ORDER: usize = 40;
