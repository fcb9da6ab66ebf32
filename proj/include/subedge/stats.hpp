#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace subedge {
namespace stats {

namespace detail {

// Lower regularized incomplete gamma P(a,x) by series expansion.
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a,x) by continued fraction (modified
// Lentz).
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace detail

// Upper regularized incomplete gamma Q(a,x) = 1 - P(a,x).
inline double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q needs a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

// Survival function of the chi-square distribution with df degrees of freedom.
inline double chi_square_sf(double statistic, double df) {
    if (df <= 0.0) return 1.0;
    return gamma_q(df / 2.0, statistic / 2.0);
}

struct ChiSquareResult {
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    std::size_t pooled_cells = 0;
};

// Goodness-of-fit of observed counts against expected counts. Cells with
// expected count below min_expected are pooled into one cell to keep the
// chi-square approximation honest.
inline ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& observed,
                                      const std::vector<double>& expected,
                                      double min_expected = 10.0) {
    if (observed.size() != expected.size()) throw std::invalid_argument("chi_square_gof: size mismatch");
    if (observed.empty()) throw std::invalid_argument("chi_square_gof: empty input");

    double stat = 0.0;
    std::size_t cells = 0;
    double pooled_obs = 0.0;
    double pooled_exp = 0.0;
    std::size_t pooled = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] < 0.0) throw std::invalid_argument("chi_square_gof: negative expectation");
        if (expected[i] < min_expected) {
            pooled_obs += static_cast<double>(observed[i]);
            pooled_exp += expected[i];
            ++pooled;
            continue;
        }
        const double diff = static_cast<double>(observed[i]) - expected[i];
        stat += diff * diff / expected[i];
        ++cells;
    }
    if (pooled_exp > 0.0) {
        const double diff = pooled_obs - pooled_exp;
        stat += diff * diff / pooled_exp;
        ++cells;
    } else if (pooled_obs > 0.0) {
        throw std::invalid_argument("chi_square_gof: observations in zero-expectation cells");
    }
    if (cells < 2) throw std::invalid_argument("chi_square_gof: fewer than two usable cells");

    ChiSquareResult r;
    r.statistic = stat;
    r.df = static_cast<double>(cells - 1);
    r.p_value = chi_square_sf(stat, r.df);
    r.pooled_cells = pooled;
    return r;
}

// z-score of a binomial count against expectation n*p.
inline double binomial_z(std::uint64_t count, std::uint64_t n, double p) {
    const double mean = static_cast<double>(n) * p;
    const double sigma = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
    if (sigma == 0.0) return static_cast<double>(count) == mean ? 0.0 : INFINITY;
    return (static_cast<double>(count) - mean) / sigma;
}

} // namespace stats
} // namespace subedge
