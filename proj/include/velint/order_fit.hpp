#pragma once

#include <string>
#include <vector>

namespace velint {

/// Result of a log-log convergence fit.
struct OrderReport {
    std::vector<double> h_grid;
    std::vector<double> errors;
    double slope = 0.0;
    double slope_ci = 0.0;        ///< half-width from fit residuals
    std::vector<int> discarded;   ///< indices excluded (floor / outliers)
    bool degenerate = false;      ///< too few points or no scaling trend
    std::string note;
};

/// Least-squares slope of log(error) against log(h). Points below the
/// 100*eps floor or with studentized residual > 3 are discarded; a fit is
/// degenerate when fewer than 4 points remain or the retained errors do
/// not scale across the grid.
OrderReport fit_loglog(const std::vector<double>& h_grid, const std::vector<double>& errors);

}  // namespace velint
