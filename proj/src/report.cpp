#include "epc/report.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "epc/errors.hpp"

namespace epc {

namespace {

MethodGroupStats make_stats(CouplingMethod method, std::span<const double> ppls,
                            std::span<const double> costs) {
    MethodGroupStats s;
    s.method = method;
    s.n_pairs = ppls.size();
    s.ppl_median = quantile(ppls, 0.5);
    s.ppl_q1 = quantile(ppls, 0.25);
    s.ppl_q3 = quantile(ppls, 0.75);
    s.ppl_skewness = skewness(ppls);
    s.cost_median = quantile(costs, 0.5);
    s.cost_q1 = quantile(costs, 0.25);
    s.cost_q3 = quantile(costs, 0.75);
    s.cost_skewness = skewness(costs);
    return s;
}

} // namespace

ReportResult group_report(const std::vector<PathReport>& reports) {
    if (reports.empty()) {
        throw ValidationError("group report needs at least one path report");
    }

    std::set<CouplingMethod> methods_present;
    for (const auto& r : reports) methods_present.insert(r.method);

    // pair -> method -> report; group comes from the pair's manifest entry
    std::map<std::string, std::map<CouplingMethod, const PathReport*>> by_pair;
    for (const auto& r : reports) by_pair[r.pair_id][r.method] = &r;

    ReportResult result;
    // group -> method -> (ppl, cost) vectors, pairs kept in pair_id order
    std::map<double, std::map<CouplingMethod, std::pair<std::vector<double>, std::vector<double>>>>
        grouped;
    for (const auto& [pair_id, per_method] : by_pair) {
        if (per_method.size() != methods_present.size()) {
            ++result.excluded_pairs;
            continue;
        }
        const double group = per_method.begin()->second->group;
        for (const auto& [method, rep] : per_method) {
            auto& bucket = grouped[group][method];
            bucket.first.push_back(rep->ppl);
            bucket.second.push_back(rep->cost);
        }
    }

    for (const auto& [group, per_method] : grouped) {
        GroupSummary summary;
        summary.group = group;
        for (const auto& [method, vecs] : per_method) {
            summary.stats.push_back(make_stats(method, vecs.first, vecs.second));
        }
        const auto ot_it = per_method.find(CouplingMethod::OT);
        if (ot_it != per_method.end()) {
            for (const auto& [method, vecs] : per_method) {
                if (method == CouplingMethod::OT) continue;
                GroupComparison on_ppl;
                on_ppl.versus = method;
                on_ppl.metric = "ppl";
                on_ppl.test = wilcoxon_signed_rank(ot_it->second.first, vecs.first);
                summary.comparisons.push_back(std::move(on_ppl));

                GroupComparison on_cost;
                on_cost.versus = method;
                on_cost.metric = "cost";
                on_cost.test = wilcoxon_signed_rank(ot_it->second.second, vecs.second);
                summary.comparisons.push_back(std::move(on_cost));
            }
        }
        result.groups.push_back(std::move(summary));
    }
    return result;
}

} // namespace epc
