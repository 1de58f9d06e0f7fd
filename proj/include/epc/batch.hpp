#pragma once
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "epc/coupling.hpp"
#include "epc/io.hpp"
#include "epc/report.hpp"

namespace epc {

struct BatchOptions {
    std::vector<CouplingMethod> methods = {CouplingMethod::OT, CouplingMethod::CLIP,
                                           CouplingMethod::Random};
    std::size_t grid_k = 16;     // K segments -> K+1 interpolated files
    std::uint64_t seed = 0;      // global seed; per-pair seeds derive from it
    std::size_t threads = 1;     // results are identical for any thread count
    bool allow_identical = false;
};

struct BatchSummary {
    struct Failure {
        std::string pair_id;
        std::string message;
    };
    struct PairSeed {
        std::string pair_id;
        std::uint64_t seed = 0;
    };
    std::size_t n_entries = 0;
    std::size_t n_processed = 0;
    std::vector<std::string> skipped_identical; // pair ids, sorted
    std::vector<Failure> failures;              // sorted by pair id
    std::vector<PairSeed> random_seeds;         // per-pair RANDOM seeds, sorted
};

/// For every manifest pair and requested method: build the coupling, write
/// K+1 interpolated embedding files {pair_id}/{method}/t{index}.epc in the
/// source row order, and assemble couplings.csv sorted by (pair_id, method).
/// Pairs whose embedding files are bit-identical are skipped unless allowed.
/// Per-pair failures are recorded and the batch continues.
BatchSummary run_interpolation_batch(const PairManifest& manifest,
                                     const std::filesystem::path& out_dir,
                                     const BatchOptions& options);

struct AnalysisSummary {
    std::size_t n_reports = 0;      // rows written to ppl.csv
    std::size_t excluded_pairs = 0; // pairs dropped for missing data
    std::size_t orphan_series = 0;  // score series with no coupling row
    std::vector<std::string> warnings;
};

/// Joins couplings.csv with the scores file and the manifest, then emits
/// ppl.csv, group_summary.csv, and wilcoxon.csv into out_dir.
AnalysisSummary run_analysis(const PairManifest& manifest,
                             const std::filesystem::path& scores_csv,
                             const std::filesystem::path& couplings_csv,
                             const std::filesystem::path& out_dir);

/// Writes the three analysis reports from in-memory path reports.
void write_analysis_reports(const std::filesystem::path& out_dir,
                            const std::vector<PathReport>& reports);

} // namespace epc
