#pragma once
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "epc/coupling.hpp"
#include "epc/matrix.hpp"
#include "epc/stats.hpp"

namespace epc {

/// Binary embedding container: magic "EPC1", little-endian uint32 N and d,
/// then N*d little-endian IEEE-754 32-bit floats, row-major. The payload
/// must be exactly 12 + 4*N*d bytes and every value finite.

/// Loads and widens to 64-bit. Errors name the offending byte offset.
Matrix load_embedding(const std::filesystem::path& path);

/// Narrows to 32-bit and writes the container.
void save_embedding(const std::filesystem::path& path, const Matrix& m);

/// One batch entry. group is the similarity bin lower edge (width 0.5).
struct ManifestEntry {
    std::string pair_id;
    std::filesystem::path embedding_a;
    std::filesystem::path embedding_b;
    double similarity = 0.0;
    double group = 0.0;
    std::optional<std::string> generation_seed; // provenance only, never used
};

struct PairManifest {
    std::vector<ManifestEntry> entries;
};

/// Bin lower edge: floor(similarity / 0.5) * 0.5.
double similarity_group(double similarity);

/// Parses the JSON-array manifest; checks pair_id uniqueness and filesystem
/// safety, similarity range, group consistency, and that both embedding
/// files exist.
PairManifest load_manifest(const std::filesystem::path& path);

/// Serializes a manifest (used by test fixtures and the selftest).
void save_manifest(const std::filesystem::path& path, const PairManifest& manifest);

/// Rows of couplings.csv: pair_id, method, sigma, squared_cost, cost.
struct CouplingRecord {
    std::string pair_id;
    CouplingMethod method = CouplingMethod::OT;
    std::vector<std::size_t> sigma;
    double squared_cost = 0.0;
    double cost = 0.0;
};

void write_couplings_csv(const std::filesystem::path& path,
                         const std::vector<CouplingRecord>& records);
std::vector<CouplingRecord> load_couplings_csv(const std::filesystem::path& path);

/// Scores CSV (header pair_id,method,k,score) grouped into one series per
/// (pair_id, method); k must be contiguous from 0 within each series.
std::vector<ScoreSeries> load_scores_csv(const std::filesystem::path& path);
void write_scores_csv(const std::filesystem::path& path,
                      const std::vector<ScoreSeries>& series);

/// Floats in CSV output carry 17 significant digits ("%.17g").
std::string format_double(double v);

/// Minimal RFC-4180-style row parsing/serialization (quotes, escaped quotes).
std::vector<std::string> split_csv_row(const std::string& line);
std::string join_csv_row(const std::vector<std::string>& fields);

} // namespace epc
