#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "epc/coupling.hpp"
#include "epc/stats.hpp"

namespace epc {

/// One pair/method row of the analysis join: coupling cost plus the PPL of
/// the associated image trajectory.
struct PathReport {
    std::string pair_id;
    CouplingMethod method = CouplingMethod::OT;
    double group = 0.0; // similarity bin lower edge, width 0.5
    double cost = 0.0;  // sqrt of the coupling's squared cost
    double ppl = 0.0;
    std::size_t k = 0;  // number of consecutive-image scores behind the PPL
};

struct MethodGroupStats {
    CouplingMethod method = CouplingMethod::OT;
    std::size_t n_pairs = 0;
    double ppl_median = 0.0, ppl_q1 = 0.0, ppl_q3 = 0.0, ppl_skewness = 0.0;
    double cost_median = 0.0, cost_q1 = 0.0, cost_q3 = 0.0, cost_skewness = 0.0;
};

struct GroupComparison {
    CouplingMethod versus = CouplingMethod::CLIP; // OT vs this method
    std::string metric;                           // "ppl" or "cost"
    WilcoxonResult test;
};

struct GroupSummary {
    double group = 0.0;
    std::vector<MethodGroupStats> stats;       // one per method present
    std::vector<GroupComparison> comparisons;  // OT vs CLIP / OT vs RANDOM
};

struct ReportResult {
    std::vector<GroupSummary> groups; // sorted by group edge
    std::size_t excluded_pairs = 0;   // pairs missing some method's report
};

/// Aggregates per-pair reports into per-group medians/quartiles/skewness and
/// Wilcoxon comparisons of OT against each other method, on paired PPL and
/// paired coupling cost. A pair enters a group only if it has a report for
/// every method present in the input; incomplete pairs are counted out.
ReportResult group_report(const std::vector<PathReport>& reports);

} // namespace epc
