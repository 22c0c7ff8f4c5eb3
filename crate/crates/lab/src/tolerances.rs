//! Default tolerances and numerical settings. Every report embeds both
//! verbatim so a run can be audited without the config that produced it.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Convergence order must lie in `order_center +- order_half_width`.
    pub order_center: f64,
    pub order_half_width: f64,
    /// Max PDE residual at the default spacing (asserted for n = 1).
    pub pde_residual_max: f64,
    pub linearized_residual_max: f64,
    /// Gap between the lower and upper residual forms.
    pub form_gap_max: f64,
    pub mass_flux_rel: f64,
    pub mass_route_gap: f64,
    pub mass_tail_spread: f64,
    pub sum_rule_rel: f64,
    pub first_frequency_rel: f64,
    pub second_frequency_rel: f64,
    pub leading_rel: f64,
    /// The alternative leading exponent must miss by at least this much.
    pub alt_exponent_min_error: f64,
    pub t_shrink_min: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            order_center: 2.0,
            order_half_width: 0.5,
            pde_residual_max: 1e-3,
            linearized_residual_max: 1e-3,
            form_gap_max: 1e-10,
            mass_flux_rel: 0.01,
            mass_route_gap: 0.005,
            mass_tail_spread: 0.1,
            sum_rule_rel: 0.01,
            first_frequency_rel: 0.02,
            second_frequency_rel: 0.03,
            leading_rel: 0.01,
            alt_exponent_min_error: 0.5,
            t_shrink_min: 1.5,
        }
    }
}

/// How T-integral fields are differentiated in the parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TRoute {
    /// Closed-form derivative of the log-determinants.
    Analytic,
    /// Central difference with `param_step`.
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub grid_h: f64,
    pub grid_half_width: f64,
    pub param_step: f64,
    /// Radii for frequency checks and Richardson extrapolation.
    pub radius_pair: (f64, f64),
    pub leading_radius: f64,
    pub flux_radius: f64,
    pub quadrature_radius: f64,
    pub t_radii: Vec<f64>,
    pub t_route: TRoute,
    /// Also run the finite-difference route and report the difference.
    pub t_fd_crosscheck: bool,
    pub identity_m_max: usize,
    pub identity_n_count: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            grid_h: 1e-2,
            grid_half_width: 2.0,
            param_step: 1e-4,
            radius_pair: (200.0, 400.0),
            leading_radius: 1e3,
            flux_radius: 1e3,
            quadrature_radius: 1e3,
            t_radii: toda_core::asymptotics::T_INTEGRAL_RADII.to_vec(),
            t_route: TRoute::Analytic,
            t_fd_crosscheck: true,
            identity_m_max: 10,
            identity_n_count: 12,
        }
    }
}
