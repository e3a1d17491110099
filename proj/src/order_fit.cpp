#include "velint/order_fit.hpp"

#include "velint/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace velint {

namespace {

struct LineFit {
    double slope = 0.0, intercept = 0.0, se_slope = 0.0;
    std::vector<double> residuals;
    std::vector<double> leverage;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t m = x.size();
    LineFit fit;
    const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / m;
    const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
    }
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    double ssr = 0.0;
    fit.residuals.resize(m);
    fit.leverage.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += fit.residuals[i] * fit.residuals[i];
        fit.leverage[i] = 1.0 / m + (x[i] - xbar) * (x[i] - xbar) / sxx;
    }
    if (m > 2) fit.se_slope = std::sqrt(ssr / (m - 2) / sxx);
    return fit;
}

}  // namespace

OrderReport fit_loglog(const std::vector<double>& h_grid, const std::vector<double>& errors) {
    if (h_grid.size() != errors.size()) throw Error("fit_loglog: grid/error size mismatch");
    if (h_grid.size() < 5) throw Error("fit_loglog: need at least 5 grid points");

    OrderReport report;
    report.h_grid = h_grid;
    report.errors = errors;

    const double emax = *std::max_element(errors.begin(), errors.end());
    const double floor = 100.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, emax);

    std::vector<int> kept;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(h_grid[i] > 0.0)) throw Error("fit_loglog: grid points must be positive");
        if (errors[i] > floor && std::isfinite(errors[i]))
            kept.push_back(static_cast<int>(i));
        else
            report.discarded.push_back(static_cast<int>(i));
    }

    const auto finish_degenerate = [&](const std::string& why) {
        report.degenerate = true;
        report.note = why;
        return report;
    };

    if (kept.size() < 4) return finish_degenerate("fewer than 4 points above the error floor");

    // No scaling trend at all (errors pinned at a tolerance floor).
    double kmin = std::numeric_limits<double>::infinity(), kmax = 0.0;
    double hmin = std::numeric_limits<double>::infinity(), hmax = 0.0;
    for (int i : kept) {
        kmin = std::min(kmin, errors[i]);
        kmax = std::max(kmax, errors[i]);
        hmin = std::min(hmin, h_grid[i]);
        hmax = std::max(hmax, h_grid[i]);
    }
    if (hmax / hmin >= 4.0 && kmax / kmin < 4.0)
        return finish_degenerate("errors do not scale across the grid (resolution floor)");

    // Up to two rounds of studentized-residual pruning.
    for (int round = 0; round < 2; ++round) {
        std::vector<double> lx, ly;
        for (int i : kept) {
            lx.push_back(std::log(h_grid[i]));
            ly.push_back(std::log(errors[i]));
        }
        const LineFit fit = least_squares(lx, ly);
        const std::size_t m = lx.size();
        double ssr = 0.0;
        for (double r : fit.residuals) ssr += r * r;
        const double sigma = m > 2 ? std::sqrt(ssr / (m - 2)) : 0.0;

        std::vector<int> next;
        if (sigma > 1e-12 && round == 0) {
            for (std::size_t j = 0; j < m; ++j) {
                const double denom = sigma * std::sqrt(std::max(1e-12, 1.0 - fit.leverage[j]));
                if (std::abs(fit.residuals[j]) / denom > 3.0)
                    report.discarded.push_back(kept[j]);
                else
                    next.push_back(kept[j]);
            }
        } else {
            next = kept;
        }

        if (next.size() < 4) return finish_degenerate("fewer than 4 points after outlier pruning");
        if (next.size() == kept.size()) {
            report.slope = fit.slope;
            report.slope_ci = 2.0 * fit.se_slope;
            break;
        }
        kept = std::move(next);  // refit on the pruned set
    }

    std::sort(report.discarded.begin(), report.discarded.end());
    return report;
}

}  // namespace velint
