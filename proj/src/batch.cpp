#include "epc/batch.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "epc/errors.hpp"
#include "epc/geometry.hpp"
#include "epc/point_cloud.hpp"
#include "epc/rng.hpp"

namespace epc {

namespace {

int method_rank(CouplingMethod m) {
    switch (m) {
        case CouplingMethod::OT: return 0;
        case CouplingMethod::CLIP: return 1;
        case CouplingMethod::Random: return 2;
    }
    return 3;
}

std::string read_raw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

struct PairOutcome {
    std::vector<CouplingRecord> records;
    bool skipped_identical = false;
    bool failed = false;
    std::string error;
    std::optional<std::uint64_t> random_seed;
};

PairOutcome process_pair(const ManifestEntry& entry, const std::filesystem::path& out_dir,
                         const BatchOptions& options) {
    PairOutcome outcome;
    try {
        const std::string raw_a = read_raw(entry.embedding_a);
        const std::string raw_b = read_raw(entry.embedding_b);
        if (!options.allow_identical && raw_a == raw_b) {
            outcome.skipped_identical = true;
            return outcome;
        }

        const Matrix ma = load_embedding(entry.embedding_a);
        const Matrix mb = load_embedding(entry.embedding_b);
        const PointCloud mu = matrix_to_cloud(ma);
        const PointCloud nu = matrix_to_cloud(mb);

        const std::vector<double> times = uniform_grid(options.grid_k);
        for (CouplingMethod method : options.methods) {
            Coupling coupling;
            switch (method) {
                case CouplingMethod::OT:
                    coupling = ot_coupling(mu, nu);
                    break;
                case CouplingMethod::CLIP:
                    coupling = clip_coupling(mu, nu);
                    break;
                case CouplingMethod::Random: {
                    const std::uint64_t seed = pair_seed(entry.pair_id, options.seed);
                    outcome.random_seed = seed;
                    coupling = random_coupling(mu, nu, seed);
                    break;
                }
            }

            const auto method_dir =
                out_dir / entry.pair_id / std::string(method_label(method));
            std::filesystem::create_directories(method_dir);

            CouplingRecord rec;
            rec.pair_id = entry.pair_id;
            rec.method = method;
            rec.sigma = coupling.sigma;
            rec.squared_cost = coupling.squared_cost;
            rec.cost = coupling.cost();

            GeodesicPath path = make_geodesic_path(mu, nu, std::move(coupling), times);
            for (std::size_t idx = 0; idx < times.size(); ++idx) {
                const PointCloud interpolated = geodesic_point(path, times[idx]);
                // canonical row order: row i = (1-t) x_i + t y_sigma(i)
                Matrix rows(interpolated.size(), interpolated.dim(), interpolated.values());
                save_embedding(method_dir / ("t" + std::to_string(idx) + ".epc"), rows);
            }
            outcome.records.push_back(std::move(rec));
        }
    } catch (const std::exception& e) {
        outcome.failed = true;
        outcome.error = e.what();
        outcome.records.clear();
    }
    return outcome;
}

} // namespace

BatchSummary run_interpolation_batch(const PairManifest& manifest,
                                     const std::filesystem::path& out_dir,
                                     const BatchOptions& options) {
    if (options.methods.empty()) {
        throw ValidationError("batch needs at least one coupling method");
    }
    std::filesystem::create_directories(out_dir);

    const std::size_t n = manifest.entries.size();
    std::vector<PairOutcome> outcomes(n);

    const std::size_t workers = std::max<std::size_t>(1, options.threads);
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            outcomes[i] = process_pair(manifest.entries[i], out_dir, options);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(workers, n); ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n) break;
                    outcomes[i] = process_pair(manifest.entries[i], out_dir, options);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    BatchSummary summary;
    summary.n_entries = n;
    std::vector<CouplingRecord> records;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& entry = manifest.entries[i];
        auto& outcome = outcomes[i];
        if (outcome.skipped_identical) {
            summary.skipped_identical.push_back(entry.pair_id);
        } else if (outcome.failed) {
            summary.failures.push_back({entry.pair_id, outcome.error});
        } else {
            ++summary.n_processed;
            for (auto& rec : outcome.records) records.push_back(std::move(rec));
            if (outcome.random_seed) {
                summary.random_seeds.push_back({entry.pair_id, *outcome.random_seed});
            }
        }
    }

    auto by_pair_id = [](const auto& a, const auto& b) { return a.pair_id < b.pair_id; };
    std::sort(summary.skipped_identical.begin(), summary.skipped_identical.end());
    std::sort(summary.failures.begin(), summary.failures.end(), by_pair_id);
    std::sort(summary.random_seeds.begin(), summary.random_seeds.end(), by_pair_id);
    std::sort(records.begin(), records.end(), [&](const auto& a, const auto& b) {
        if (a.pair_id != b.pair_id) return a.pair_id < b.pair_id;
        return method_rank(a.method) < method_rank(b.method);
    });
    write_couplings_csv(out_dir / "couplings.csv", records);
    return summary;
}

void write_analysis_reports(const std::filesystem::path& out_dir,
                            const std::vector<PathReport>& reports) {
    std::filesystem::create_directories(out_dir);

    std::vector<PathReport> sorted = reports;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.pair_id != b.pair_id) return a.pair_id < b.pair_id;
        return method_rank(a.method) < method_rank(b.method);
    });

    {
        std::ofstream os(out_dir / "ppl.csv", std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot write ppl.csv");
        os << "pair_id,method,group,ppl,k\n";
        for (const auto& r : sorted) {
            os << join_csv_row({r.pair_id, std::string(method_label(r.method)),
                                format_double(r.group), format_double(r.ppl),
                                std::to_string(r.k)})
               << "\n";
        }
    }

    const ReportResult grouped = group_report(reports);

    {
        std::ofstream os(out_dir / "group_summary.csv", std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot write group_summary.csv");
        os << "group,method,ppl_median,ppl_q1,ppl_q3,cost_median,cost_q1,cost_q3,"
              "ppl_skewness,cost_skewness\n";
        for (const auto& g : grouped.groups) {
            for (const auto& s : g.stats) {
                os << join_csv_row({format_double(g.group),
                                    std::string(method_label(s.method)),
                                    format_double(s.ppl_median), format_double(s.ppl_q1),
                                    format_double(s.ppl_q3), format_double(s.cost_median),
                                    format_double(s.cost_q1), format_double(s.cost_q3),
                                    format_double(s.ppl_skewness),
                                    format_double(s.cost_skewness)})
                   << "\n";
            }
        }
    }

    {
        std::ofstream os(out_dir / "wilcoxon.csv", std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot write wilcoxon.csv");
        os << "group,comparison,metric,statistic,p_value,stars\n";
        for (const auto& g : grouped.groups) {
            std::vector<const GroupComparison*> ordered;
            for (const auto& c : g.comparisons) ordered.push_back(&c);
            std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
                if (a->versus != b->versus)
                    return method_rank(a->versus) < method_rank(b->versus);
                return a->metric < b->metric;
            });
            for (const auto* c : ordered) {
                os << join_csv_row(
                          {format_double(g.group),
                           "OT_vs_" + std::string(method_label(c->versus)), c->metric,
                           format_double(c->test.statistic), format_double(c->test.p_value),
                           c->test.stars})
                   << "\n";
            }
        }
    }
}

AnalysisSummary run_analysis(const PairManifest& manifest,
                             const std::filesystem::path& scores_csv,
                             const std::filesystem::path& couplings_csv,
                             const std::filesystem::path& out_dir) {
    const std::vector<CouplingRecord> couplings = load_couplings_csv(couplings_csv);
    const std::vector<ScoreSeries> series = load_scores_csv(scores_csv);

    std::map<std::string, const ManifestEntry*> entries;
    for (const auto& e : manifest.entries) entries[e.pair_id] = &e;

    std::map<std::pair<std::string, CouplingMethod>, const ScoreSeries*> series_index;
    for (const auto& s : series) series_index[{s.pair_id, s.method}] = &s;

    AnalysisSummary summary;
    std::set<std::pair<std::string, CouplingMethod>> matched;
    std::set<std::string> dropped_pairs;
    std::vector<PathReport> reports;

    for (const auto& rec : couplings) {
        const auto entry_it = entries.find(rec.pair_id);
        if (entry_it == entries.end()) {
            dropped_pairs.insert(rec.pair_id);
            summary.warnings.push_back("pair '" + rec.pair_id +
                                       "' is not in the manifest; excluded");
            continue;
        }
        const auto series_it = series_index.find({rec.pair_id, rec.method});
        if (series_it == series_index.end()) {
            dropped_pairs.insert(rec.pair_id);
            summary.warnings.push_back("pair '" + rec.pair_id + "' method " +
                                       std::string(method_label(rec.method)) +
                                       " has no scores; excluded");
            continue;
        }
        matched.insert({rec.pair_id, rec.method});

        PathReport report;
        report.pair_id = rec.pair_id;
        report.method = rec.method;
        report.group = entry_it->second->group;
        report.cost = rec.cost;
        report.ppl = ppl(*series_it->second);
        report.k = series_it->second->scores.size();
        reports.push_back(std::move(report));
    }

    for (const auto& s : series) {
        if (!matched.count({s.pair_id, s.method})) {
            ++summary.orphan_series;
            summary.warnings.push_back("scores for pair '" + s.pair_id + "' method " +
                                       std::string(method_label(s.method)) +
                                       " have no coupling row; ignored");
        }
    }

    if (reports.empty()) {
        throw ValidationError(
            "no (pair, method) with both a coupling row and scores; nothing to analyze");
    }

    summary.excluded_pairs = dropped_pairs.size();
    summary.n_reports = reports.size();
    write_analysis_reports(out_dir, reports);
    return summary;
}

} // namespace epc
