// Command-line surface for the embedding point-cloud toolkit.
//
// Subcommands: distance, couple, interpolate, batch, ppl, wilcoxon,
// analyze, invariance-check, selftest. Exit codes: 0 success, 1 validation
// or input error, 2 partial batch failure.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "epc/attention.hpp"
#include "epc/batch.hpp"
#include "epc/errors.hpp"
#include "epc/geometry.hpp"
#include "epc/io.hpp"
#include "epc/rng.hpp"
#include "epc/selftest.hpp"

namespace {

using nlohmann::json;

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::size_t grid = 16;
    std::string out;
    std::string format = "csv";
};

std::string sigma_string(const std::vector<std::size_t>& sigma) {
    std::string s;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (i > 0) s.push_back(',');
        s += std::to_string(sigma[i]);
    }
    return s;
}

epc::CouplingMethod method_from_flag(const std::string& name) {
    const auto m = epc::parse_method(name);
    if (!m) throw epc::ValidationError("unknown coupling method '" + name + "'");
    return *m;
}

epc::Coupling build_coupling(const epc::PointCloud& mu, const epc::PointCloud& nu,
                             epc::CouplingMethod method, std::uint64_t seed) {
    switch (method) {
        case epc::CouplingMethod::OT: return epc::ot_coupling(mu, nu);
        case epc::CouplingMethod::CLIP: return epc::clip_coupling(mu, nu);
        case epc::CouplingMethod::Random: return epc::random_coupling(mu, nu, seed);
    }
    throw epc::ValidationError("unreachable coupling method");
}

void emit_record(const GlobalOptions& global, const std::vector<std::string>& header,
                 const std::vector<std::string>& row) {
    if (global.format == "json") {
        json obj;
        for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
        std::cout << obj.dump(2) << "\n";
    } else {
        std::cout << epc::join_csv_row(header) << "\n" << epc::join_csv_row(row) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal-transport geometry for fixed-row-count embedding matrices"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--seed", global.seed, "Global seed for random couplings");
    app.add_option("--grid", global.grid, "Interpolation grid segments K (K+1 samples)");
    app.add_option("--out", global.out, "Output file or directory");
    app.add_option("--format", global.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // distance
    std::string dist_a, dist_b;
    auto* cmd_distance = app.add_subcommand("distance", "Wasserstein-2 distance between two embedding files");
    cmd_distance->add_option("embedding_a", dist_a)->required();
    cmd_distance->add_option("embedding_b", dist_b)->required();

    // couple
    std::string couple_a, couple_b, couple_method = "ot";
    auto* cmd_couple = app.add_subcommand("couple", "Build one coupling and print sigma and costs");
    cmd_couple->add_option("embedding_a", couple_a)->required();
    cmd_couple->add_option("embedding_b", couple_b)->required();
    cmd_couple->add_option("--method", couple_method, "ot|clip|random");

    // interpolate
    std::string interp_a, interp_b, interp_method = "ot";
    auto* cmd_interpolate = app.add_subcommand("interpolate", "Write K+1 interpolated embedding files");
    cmd_interpolate->add_option("embedding_a", interp_a)->required();
    cmd_interpolate->add_option("embedding_b", interp_b)->required();
    cmd_interpolate->add_option("--method", interp_method, "ot|clip|random");

    // batch
    std::string batch_manifest, batch_methods = "ot,clip,random";
    std::size_t batch_threads = 1;
    bool allow_identical = false;
    auto* cmd_batch = app.add_subcommand("batch", "Run the interpolation pipeline over a pair manifest");
    cmd_batch->add_option("--manifest", batch_manifest)->required();
    cmd_batch->add_option("--methods", batch_methods, "Comma-separated subset of ot,clip,random");
    cmd_batch->add_option("--threads", batch_threads, "Worker threads (output is identical for any count)");
    cmd_batch->add_flag("--allow-identical", allow_identical, "Process pairs whose embedding files are bit-identical");

    // ppl
    std::string ppl_scores;
    auto* cmd_ppl = app.add_subcommand("ppl", "Perceptual path length per (pair, method) from a scores file");
    cmd_ppl->add_option("--scores", ppl_scores)->required();

    // wilcoxon
    std::string wilcoxon_paired;
    auto* cmd_wilcoxon = app.add_subcommand("wilcoxon", "Two-sided signed-rank test on a paired CSV (header a,b)");
    cmd_wilcoxon->add_option("--paired", wilcoxon_paired)->required();

    // analyze
    std::string analyze_manifest, analyze_scores, analyze_couplings;
    auto* cmd_analyze = app.add_subcommand("analyze", "Emit ppl.csv, group_summary.csv and wilcoxon.csv");
    cmd_analyze->add_option("--manifest", analyze_manifest)->required();
    cmd_analyze->add_option("--scores", analyze_scores)->required();
    cmd_analyze->add_option("--couplings", analyze_couplings)->required();

    // invariance-check
    std::size_t inv_instances = 1000, inv_rows_x = 4, inv_rows_cond = 77, inv_dim = 16, inv_width = 16;
    double inv_tol = 1e-9;
    auto* cmd_invariance = app.add_subcommand("invariance-check", "Empirical cross-attention permutation-invariance check");
    cmd_invariance->add_option("--instances", inv_instances);
    cmd_invariance->add_option("--rows-x", inv_rows_x, "Rows of the query-side matrix X");
    cmd_invariance->add_option("--rows-cond", inv_rows_cond, "Rows of the conditioning matrix X'");
    cmd_invariance->add_option("--dim", inv_dim, "Columns of X and X'");
    cmd_invariance->add_option("--width", inv_width, "Projection width D");
    cmd_invariance->add_option("--tol", inv_tol);

    auto* cmd_selftest = app.add_subcommand("selftest", "Run the built-in desk checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_distance) {
            const auto mu = epc::matrix_to_cloud(epc::load_embedding(dist_a));
            const auto nu = epc::matrix_to_cloud(epc::load_embedding(dist_b));
            const auto r = epc::wasserstein_distance(mu, nu);
            emit_record(global, {"w2", "squared_cost", "sigma"},
                        {epc::format_double(r.w2), epc::format_double(r.coupling.squared_cost),
                         sigma_string(r.coupling.sigma)});
        } else if (*cmd_couple) {
            const auto mu = epc::matrix_to_cloud(epc::load_embedding(couple_a));
            const auto nu = epc::matrix_to_cloud(epc::load_embedding(couple_b));
            const auto method = method_from_flag(couple_method);
            const auto c = build_coupling(mu, nu, method, global.seed);
            emit_record(global, {"method", "sigma", "squared_cost", "cost"},
                        {std::string(epc::method_label(method)), sigma_string(c.sigma),
                         epc::format_double(c.squared_cost), epc::format_double(c.cost())});
        } else if (*cmd_interpolate) {
            if (global.out.empty()) {
                throw epc::ValidationError("interpolate needs --out <directory>");
            }
            const auto ma = epc::load_embedding(interp_a);
            const auto mb = epc::load_embedding(interp_b);
            const auto mu = epc::matrix_to_cloud(ma);
            const auto nu = epc::matrix_to_cloud(mb);
            const auto method = method_from_flag(interp_method);
            auto coupling = build_coupling(mu, nu, method, global.seed);
            const double cost = coupling.cost();
            auto path = epc::make_geodesic_path(mu, nu, std::move(coupling),
                                                epc::uniform_grid(global.grid));
            std::filesystem::create_directories(global.out);
            for (std::size_t idx = 0; idx < path.times.size(); ++idx) {
                const auto cloud = epc::geodesic_point(path, path.times[idx]);
                epc::Matrix rows(cloud.size(), cloud.dim(), cloud.values());
                epc::save_embedding(std::filesystem::path(global.out) /
                                        ("t" + std::to_string(idx) + ".epc"),
                                    rows);
            }
            std::cout << "wrote " << path.times.size() << " files to " << global.out
                      << " (method " << epc::method_label(method)
                      << ", cost " << epc::format_double(cost) << ")\n";
        } else if (*cmd_batch) {
            if (global.out.empty()) throw epc::ValidationError("batch needs --out <directory>");
            const auto manifest = epc::load_manifest(batch_manifest);
            epc::BatchOptions options;
            options.methods.clear();
            std::stringstream ss(batch_methods);
            std::string token;
            while (std::getline(ss, token, ',')) {
                if (!token.empty()) options.methods.push_back(method_from_flag(token));
            }
            options.grid_k = global.grid;
            options.seed = global.seed;
            options.threads = batch_threads;
            options.allow_identical = allow_identical;
            const auto summary = epc::run_interpolation_batch(manifest, global.out, options);

            json out;
            out["entries"] = summary.n_entries;
            out["processed"] = summary.n_processed;
            out["skipped_identical"] = summary.skipped_identical;
            out["failures"] = json::array();
            for (const auto& f : summary.failures) {
                out["failures"].push_back({{"pair_id", f.pair_id}, {"message", f.message}});
            }
            out["random_seeds"] = json::object();
            for (const auto& s : summary.random_seeds) {
                out["random_seeds"][s.pair_id] = s.seed;
            }
            std::cout << out.dump(2) << "\n";
            if (!summary.failures.empty()) return 2;
        } else if (*cmd_ppl) {
            const auto series = epc::load_scores_csv(ppl_scores);
            if (global.format == "json") {
                json out = json::array();
                for (const auto& s : series) {
                    out.push_back({{"pair_id", s.pair_id},
                                   {"method", std::string(epc::method_label(s.method))},
                                   {"ppl", epc::ppl(s)},
                                   {"k", s.scores.size()}});
                }
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << "pair_id,method,ppl,k\n";
                for (const auto& s : series) {
                    std::cout << epc::join_csv_row(
                                     {s.pair_id, std::string(epc::method_label(s.method)),
                                      epc::format_double(epc::ppl(s)),
                                      std::to_string(s.scores.size())})
                              << "\n";
                }
            }
        } else if (*cmd_wilcoxon) {
            std::ifstream in(wilcoxon_paired);
            if (!in) throw epc::IoError("cannot open " + wilcoxon_paired);
            std::string line;
            if (!std::getline(in, line) || epc::split_csv_row(line) != std::vector<std::string>{"a", "b"}) {
                throw epc::FormatError(wilcoxon_paired + ": expected header 'a,b'");
            }
            std::vector<double> a, b;
            std::size_t lineno = 1;
            while (std::getline(in, line)) {
                ++lineno;
                if (line.empty()) continue;
                const auto fields = epc::split_csv_row(line);
                if (fields.size() != 2) {
                    throw epc::FormatError(wilcoxon_paired + ": line " +
                                           std::to_string(lineno) + ": expected 2 fields");
                }
                a.push_back(std::stod(fields[0]));
                b.push_back(std::stod(fields[1]));
            }
            const auto r = epc::wilcoxon_signed_rank(a, b);
            emit_record(global, {"n_effective", "statistic", "p_value", "stars"},
                        {std::to_string(r.n_effective), epc::format_double(r.statistic),
                         epc::format_double(r.p_value), r.stars});
        } else if (*cmd_analyze) {
            if (global.out.empty()) throw epc::ValidationError("analyze needs --out <directory>");
            const auto manifest = epc::load_manifest(analyze_manifest);
            const auto summary =
                epc::run_analysis(manifest, analyze_scores, analyze_couplings, global.out);
            for (const auto& w : summary.warnings) std::cerr << "warning: " << w << "\n";
            std::cout << "wrote ppl.csv, group_summary.csv, wilcoxon.csv to " << global.out
                      << " (" << summary.n_reports << " rows, " << summary.excluded_pairs
                      << " pairs excluded, " << summary.orphan_series << " orphan series)\n";
        } else if (*cmd_invariance) {
            epc::Xoshiro256ss rng(global.seed);
            double worst = 0.0;
            std::size_t failures = 0;
            for (std::size_t trial = 0; trial < inv_instances; ++trial) {
                auto draw = [&](std::size_t r, std::size_t c) {
                    epc::Matrix m(r, c);
                    for (double& v : m.data()) v = 2.0 * rng.next_double() - 1.0;
                    return m;
                };
                const auto x = draw(inv_rows_x, inv_dim);
                const auto xp = draw(inv_rows_cond, inv_dim);
                epc::AttentionWeights w{draw(inv_dim, inv_width), draw(inv_dim, inv_width),
                                        draw(inv_dim, inv_width)};
                auto perm = epc::identity_sigma(inv_rows_cond);
                for (std::size_t i = inv_rows_cond; i >= 2; --i) {
                    std::swap(perm[i - 1], perm[rng.next_below(i)]);
                }
                const auto report =
                    epc::check_cross_attention_invariance(x, xp, w, perm, inv_tol);
                worst = std::max(worst, report.max_deviation);
                if (!report.within_tol) ++failures;
            }
            std::cout << (failures == 0 ? "PASS" : "FAIL") << ": " << inv_instances
                      << " instances, max deviation " << epc::format_double(worst)
                      << ", tolerance " << epc::format_double(inv_tol) << ", " << failures
                      << " over tolerance\n";
            if (failures != 0) return 1;
        } else if (*cmd_selftest) {
            return epc::run_selftest(std::cout) == 0 ? 0 : 1;
        }
    } catch (const epc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
