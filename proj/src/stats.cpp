#include "epc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "epc/errors.hpp"

namespace epc {

double ppl(const ScoreSeries& series) {
    if (series.scores.empty()) {
        throw ValidationError("score series for pair '" + series.pair_id +
                              "' is empty; PPL needs at least one score");
    }
    for (double s : series.scores) {
        if (!std::isfinite(s) || s < 0.0) {
            throw ValidationError("score series for pair '" + series.pair_id +
                                  "' contains a negative or non-finite score");
        }
    }
    return mean(series.scores);
}

std::string significance_stars(double p_value) {
    if (p_value < 0.001) return "***";
    if (p_value < 0.01) return "**";
    if (p_value < 0.05) return "*";
    return "-";
}

double mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double quantile(std::span<const double> xs, double p) {
    if (xs.empty()) throw ValidationError("quantile of an empty sample");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double skewness(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const double m = mean(xs);
    double m2 = 0.0, m3 = 0.0;
    for (double x : xs) {
        const double d = x - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    if (m2 <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return m3 / std::pow(m2, 1.5);
}

namespace {

struct RankedDiffs {
    std::vector<double> ranks;    // average ranks of |d|, parallel to diffs
    std::vector<double> diffs;    // nonzero differences a_i - b_i
    std::vector<std::size_t> tie_sizes; // sizes of tied groups in |d|
};

RankedDiffs rank_absolute_differences(std::span<const double> a, std::span<const double> b) {
    RankedDiffs rd;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
            throw ValidationError("wilcoxon inputs must be finite");
        }
        const double d = a[i] - b[i];
        if (d != 0.0) rd.diffs.push_back(d);
    }
    const std::size_t n = rd.diffs.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::abs(rd.diffs[x]) < std::abs(rd.diffs[y]);
    });
    rd.ranks.assign(n, 0.0);
    std::size_t k = 0;
    while (k < n) {
        std::size_t j = k;
        while (j + 1 < n &&
               std::abs(rd.diffs[order[j + 1]]) == std::abs(rd.diffs[order[k]])) {
            ++j;
        }
        // positions k..j (0-based) share the average of ranks k+1..j+1
        const double avg = (static_cast<double>(k + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t m = k; m <= j; ++m) rd.ranks[order[m]] = avg;
        rd.tie_sizes.push_back(j - k + 1);
        k = j + 1;
    }
    return rd;
}

// Exact two-sided p-value by dynamic programming over doubled ranks
// (average ranks are multiples of 1/2, so doubling makes them integers).
double exact_two_sided_p(const std::vector<double>& ranks, double w_statistic) {
    const std::size_t n = ranks.size();
    std::vector<std::uint64_t> doubled(n);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        doubled[i] = static_cast<std::uint64_t>(std::llround(2.0 * ranks[i]));
        total += doubled[i];
    }
    std::vector<std::uint64_t> counts(total + 1, 0);
    counts[0] = 1;
    for (std::uint64_t r : doubled) {
        for (std::uint64_t s = total; s >= r; --s) {
            counts[s] += counts[s - r];
        }
    }
    const std::uint64_t w2 = static_cast<std::uint64_t>(std::llround(2.0 * w_statistic));
    std::uint64_t below = 0, above = 0;
    for (std::uint64_t s = 0; s <= total; ++s) {
        if (s <= w2) below += counts[s];
        if (s >= w2) above += counts[s];
    }
    const double denom = std::ldexp(1.0, static_cast<int>(n)); // 2^n
    const double p = 2.0 * (static_cast<double>(std::min(below, above)) / denom);
    return std::min(1.0, p);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Normal approximation with tie correction and continuity correction.
double approx_two_sided_p(const RankedDiffs& rd, double w_statistic) {
    const double n = static_cast<double>(rd.diffs.size());
    const double mu = n * (n + 1.0) / 4.0;
    double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    for (std::size_t t : rd.tie_sizes) {
        const double td = static_cast<double>(t);
        var -= (td * td * td - td) / 48.0;
    }
    if (var <= 0.0) return 1.0;
    // W is the smaller signed sum, so it sits at or below the mean; the
    // continuity correction moves it half a step toward the mean.
    const double z = (w_statistic - mu + 0.5) / std::sqrt(var);
    return std::min(1.0, 2.0 * normal_cdf(z));
}

} // namespace

namespace {

WilcoxonResult wilcoxon_impl(std::span<const double> a, std::span<const double> b,
                             bool force_approx) {
    if (a.size() != b.size()) {
        throw ValidationError("paired samples differ in length: " + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()));
    }
    if (a.empty()) {
        throw ValidationError("wilcoxon needs at least one pair");
    }

    const RankedDiffs rd = rank_absolute_differences(a, b);

    WilcoxonResult res;
    res.n_effective = rd.diffs.size();
    if (res.n_effective == 0) {
        // All differences zero: no evidence against the null.
        res.statistic = 0.0;
        res.p_value = 1.0;
        res.stars = significance_stars(res.p_value);
        return res;
    }

    double w_plus = 0.0, w_minus = 0.0;
    for (std::size_t i = 0; i < rd.diffs.size(); ++i) {
        if (rd.diffs[i] > 0.0) {
            w_plus += rd.ranks[i];
        } else {
            w_minus += rd.ranks[i];
        }
    }
    res.statistic = std::min(w_plus, w_minus);

    if (!force_approx && res.n_effective <= 25) {
        res.p_value = exact_two_sided_p(rd.ranks, res.statistic);
    } else {
        res.p_value = approx_two_sided_p(rd, res.statistic);
    }
    res.stars = significance_stars(res.p_value);
    return res;
}

} // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    return wilcoxon_impl(a, b, false);
}

WilcoxonResult wilcoxon_signed_rank_approx(std::span<const double> a,
                                           std::span<const double> b) {
    return wilcoxon_impl(a, b, true);
}

} // namespace epc
