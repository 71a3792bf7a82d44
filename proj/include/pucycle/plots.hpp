#pragma once

#include <string>
#include <vector>

#include "pucycle/core_math.hpp"
#include "pucycle/cycle.hpp"

namespace pucycle {

/// Per-step gain series. CSV columns: step,m,k_obs_x,k_obs_y,k_pred_x,
/// k_pred_y (gain fields empty on the init step). The SVG draws stepwise
/// bars for k_obs with shaded backgrounds on masked steps.
void emit_gain_plot(const FilterTrace& trace, const std::string& csv_path,
                    const std::string& svg_path);

/// Prior means with n-sigma covariance ellipses. CSV columns: step,m,
/// prior_x,prior_y,semi_major,semi_minor,angle_rad. The SVG overlays the
/// ground-truth path, observations, crosses at masked steps, and ellipses.
void emit_ellipse_plot(const FilterTrace& trace, const std::vector<Vec2>& gt, double n_sigma,
                       const std::string& csv_path, const std::string& svg_path);

}  // namespace pucycle
