#pragma once
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "epc/coupling.hpp"

namespace epc {

/// Consecutive image-distance scores l_k along one interpolated trajectory.
struct ScoreSeries {
    std::string pair_id;
    CouplingMethod method = CouplingMethod::OT;
    std::vector<double> scores; // score k = distance between image k and k+1
};

/// Perceptual path length: the arithmetic mean of the series' scores.
double ppl(const ScoreSeries& series);

struct WilcoxonResult {
    std::size_t n_effective = 0; // pairs left after dropping zero differences
    double statistic = 0.0;      // W = smaller of the two signed-rank sums
    double p_value = 1.0;        // two-sided
    std::string stars;           // "-", "*", "**", "***"
};

/// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
/// are dropped; tied |differences| get average ranks. Exact p-value by
/// enumeration of sign assignments for n_effective <= 25, normal
/// approximation with tie and continuity corrections above.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Same test but always through the normal approximation, regardless of
/// n_effective. Exposed so the two p-value paths can be cross-checked.
WilcoxonResult wilcoxon_signed_rank_approx(std::span<const double> a,
                                           std::span<const double> b);

/// "-" / "*" / "**" / "***" at alpha 0.05, 0.01, 0.001.
std::string significance_stars(double p_value);

double mean(std::span<const double> xs);

/// Linear-interpolation quantile (position p*(n-1)) on a copy of xs.
double quantile(std::span<const double> xs, double p);

/// Sample skewness m3 / m2^(3/2); NaN when undefined (n < 2 or zero spread).
double skewness(std::span<const double> xs);

} // namespace epc
