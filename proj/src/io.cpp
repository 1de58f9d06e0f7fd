#include "epc/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "epc/errors.hpp"

namespace epc {

namespace {

constexpr char kMagic[4] = {'E', 'P', 'C', '1'};
constexpr std::size_t kHeaderBytes = 12;

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

} // namespace

Matrix load_embedding(const std::filesystem::path& path) {
    const std::string bytes = read_file_bytes(path);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());

    if (bytes.size() < kHeaderBytes) {
        throw FormatError(path.string() + ": truncated header, file ends at byte offset " +
                          std::to_string(bytes.size()) + " (need 12)");
    }
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw FormatError(path.string() + ": bad magic at byte offset 0 (expected \"EPC1\")");
    }
    const std::uint32_t n = read_u32_le(p + 4);
    const std::uint32_t d = read_u32_le(p + 8);
    if (n == 0 || d == 0) {
        throw FormatError(path.string() + ": header at byte offset 4 declares " +
                          std::to_string(n) + "x" + std::to_string(d) +
                          "; both counts must be positive");
    }
    const std::size_t expected =
        kHeaderBytes + 4ull * static_cast<std::size_t>(n) * static_cast<std::size_t>(d);
    if (bytes.size() != expected) {
        throw FormatError(path.string() + ": payload is " + std::to_string(bytes.size()) +
                          " bytes, header requires exactly " + std::to_string(expected) +
                          " (mismatch at byte offset " +
                          std::to_string(std::min(bytes.size(), expected)) + ")");
    }

    Matrix m(n, d);
    for (std::size_t idx = 0; idx < static_cast<std::size_t>(n) * d; ++idx) {
        const std::size_t offset = kHeaderBytes + 4 * idx;
        const std::uint32_t raw = read_u32_le(p + offset);
        const float f = std::bit_cast<float>(raw);
        if (!std::isfinite(f)) {
            throw FormatError(path.string() + ": non-finite value at byte offset " +
                              std::to_string(offset) + " (row " + std::to_string(idx / d) +
                              ", column " + std::to_string(idx % d) + ")");
        }
        m.data()[idx] = static_cast<double>(f); // exact widening
    }
    return m;
}

void save_embedding(const std::filesystem::path& path, const Matrix& m) {
    validate_matrix(m);
    std::string out;
    out.reserve(kHeaderBytes + 4 * m.data().size());
    out.append(kMagic, 4);
    write_u32_le(out, static_cast<std::uint32_t>(m.rows()));
    write_u32_le(out, static_cast<std::uint32_t>(m.cols()));
    for (double v : m.data()) {
        const float f = static_cast<float>(v);
        if (!std::isfinite(f)) {
            throw ValidationError(path.string() +
                                  ": value overflows 32-bit float range on save");
        }
        write_u32_le(out, std::bit_cast<std::uint32_t>(f));
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write " + path.string());
    os.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!os) throw IoError("write failed for " + path.string());
}

double similarity_group(double similarity) {
    return std::floor(similarity / 0.5) * 0.5;
}

namespace {

bool filesystem_safe(const std::string& id) {
    if (id.empty()) return false;
    for (char ch : id) {
        const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                        (ch >= '0' && ch <= '9') || ch == '_' || ch == '-' || ch == '.';
        if (!ok) return false;
    }
    return id != "." && id != "..";
}

} // namespace

PairManifest load_manifest(const std::filesystem::path& path) {
    const std::string text = read_file_bytes(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": invalid JSON: " + e.what());
    }
    if (!doc.is_array()) {
        throw FormatError(path.string() + ": manifest must be a JSON array of entries");
    }

    PairManifest manifest;
    std::set<std::string> seen;
    for (std::size_t idx = 0; idx < doc.size(); ++idx) {
        const auto& item = doc[idx];
        const std::string where = path.string() + ": entry " + std::to_string(idx);
        if (!item.is_object()) throw FormatError(where + " is not an object");

        ManifestEntry entry;
        try {
            entry.pair_id = item.at("pair_id").get<std::string>();
            entry.embedding_a = item.at("embedding_a").get<std::string>();
            entry.embedding_b = item.at("embedding_b").get<std::string>();
            entry.similarity = item.at("similarity").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(where + ": " + e.what());
        }
        if (!filesystem_safe(entry.pair_id)) {
            throw ValidationError(where + ": pair_id '" + entry.pair_id +
                                  "' must be nonempty [A-Za-z0-9._-]");
        }
        if (!seen.insert(entry.pair_id).second) {
            throw ValidationError(where + ": duplicate pair_id '" + entry.pair_id + "'");
        }
        if (!std::isfinite(entry.similarity) || entry.similarity < 0.0 ||
            entry.similarity > 5.0) {
            throw ValidationError(where + ": similarity must be in [0,5]");
        }
        entry.group = similarity_group(entry.similarity);
        if (item.contains("group")) {
            const double declared = item.at("group").get<double>();
            if (declared != entry.group) {
                throw ValidationError(where + ": group " + format_double(declared) +
                                      " does not equal floor(similarity/0.5)*0.5 = " +
                                      format_double(entry.group));
            }
        }
        if (item.contains("generation_seed")) {
            const auto& gs = item.at("generation_seed");
            entry.generation_seed = gs.is_string() ? gs.get<std::string>() : gs.dump();
        }
        // Resolve relative embedding paths against the manifest location.
        for (auto* member : {&entry.embedding_a, &entry.embedding_b}) {
            if (member->is_relative()) *member = path.parent_path() / *member;
            if (!std::filesystem::exists(*member)) {
                throw IoError(where + ": embedding file not found: " + member->string());
            }
        }
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

void save_manifest(const std::filesystem::path& path, const PairManifest& manifest) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& entry : manifest.entries) {
        nlohmann::json item;
        item["pair_id"] = entry.pair_id;
        item["embedding_a"] = entry.embedding_a.string();
        item["embedding_b"] = entry.embedding_b.string();
        item["similarity"] = entry.similarity;
        item["group"] = entry.group;
        if (entry.generation_seed) item["generation_seed"] = *entry.generation_seed;
        doc.push_back(std::move(item));
    }
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot write " + path.string());
    os << doc.dump(2) << "\n";
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out.push_back(',');
        const std::string& f = fields[i];
        const bool needs_quotes =
            f.find_first_of(",\"\n") != std::string::npos;
        if (!needs_quotes) {
            out += f;
        } else {
            out.push_back('"');
            for (char ch : f) {
                if (ch == '"') out.push_back('"');
                out.push_back(ch);
            }
            out.push_back('"');
        }
    }
    return out;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    const std::string bytes = read_file_bytes(path);
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : bytes) {
        if (ch == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) lines.push_back(std::move(cur));
    return lines;
}

double parse_double_field(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw FormatError(where + ": cannot parse number '" + s + "'");
    }
}

} // namespace

void write_couplings_csv(const std::filesystem::path& path,
                         const std::vector<CouplingRecord>& records) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write " + path.string());
    os << "pair_id,method,sigma,squared_cost,cost\n";
    for (const auto& rec : records) {
        std::string sigma;
        for (std::size_t i = 0; i < rec.sigma.size(); ++i) {
            if (i > 0) sigma.push_back(',');
            sigma += std::to_string(rec.sigma[i]);
        }
        os << join_csv_row({rec.pair_id, std::string(method_label(rec.method)), sigma,
                            format_double(rec.squared_cost), format_double(rec.cost)})
           << "\n";
    }
    if (!os) throw IoError("write failed for " + path.string());
}

std::vector<CouplingRecord> load_couplings_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines[0] != "pair_id,method,sigma,squared_cost,cost") {
        throw FormatError(path.string() +
                          ": expected header 'pair_id,method,sigma,squared_cost,cost'");
    }
    std::vector<CouplingRecord> records;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const std::string where = path.string() + ": line " + std::to_string(li + 1);
        const auto fields = split_csv_row(lines[li]);
        if (fields.size() != 5) {
            throw FormatError(where + ": expected 5 fields, got " +
                              std::to_string(fields.size()));
        }
        CouplingRecord rec;
        rec.pair_id = fields[0];
        const auto method = parse_method(fields[1]);
        if (!method) throw FormatError(where + ": unknown method '" + fields[1] + "'");
        rec.method = *method;
        std::stringstream ss(fields[2]);
        std::string token;
        while (std::getline(ss, token, ',')) {
            char* end = nullptr;
            const unsigned long long idx = std::strtoull(token.c_str(), &end, 10);
            if (end == token.c_str() || *end != '\0') {
                throw FormatError(where + ": sigma index '" + token +
                                  "' is not a nonnegative integer");
            }
            rec.sigma.push_back(static_cast<std::size_t>(idx));
        }
        if (!is_permutation(rec.sigma, rec.sigma.size())) {
            throw ValidationError(where + ": sigma is not a permutation");
        }
        rec.squared_cost = parse_double_field(fields[3], where);
        rec.cost = parse_double_field(fields[4], where);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<ScoreSeries> load_scores_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines[0] != "pair_id,method,k,score") {
        throw FormatError(path.string() + ": expected header 'pair_id,method,k,score'");
    }
    // (pair, method) -> k -> score; rows may arrive in any order
    std::map<std::pair<std::string, CouplingMethod>, std::map<std::size_t, double>> table;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const std::string where = path.string() + ": line " + std::to_string(li + 1);
        const auto fields = split_csv_row(lines[li]);
        if (fields.size() != 4) {
            throw FormatError(where + ": expected 4 fields, got " +
                              std::to_string(fields.size()));
        }
        const auto method = parse_method(fields[1]);
        if (!method) throw FormatError(where + ": unknown method '" + fields[1] + "'");
        const double kf = parse_double_field(fields[2], where);
        if (kf < 0.0 || kf != std::floor(kf)) {
            throw FormatError(where + ": k must be a nonnegative integer");
        }
        const double score = parse_double_field(fields[3], where);
        if (!std::isfinite(score) || score < 0.0) {
            throw ValidationError(where + ": score must be finite and >= 0");
        }
        auto& per_k = table[{fields[0], *method}];
        const auto k = static_cast<std::size_t>(kf);
        if (!per_k.emplace(k, score).second) {
            throw ValidationError(where + ": duplicate k=" + fields[2] + " for pair '" +
                                  fields[0] + "' method " + fields[1]);
        }
    }

    std::vector<ScoreSeries> series;
    for (const auto& [key, per_k] : table) {
        ScoreSeries s;
        s.pair_id = key.first;
        s.method = key.second;
        std::size_t expect = 0;
        for (const auto& [k, score] : per_k) {
            if (k != expect) {
                throw ValidationError(path.string() + ": pair '" + s.pair_id + "' method " +
                                      std::string(method_label(s.method)) +
                                      " has non-contiguous k (missing k=" +
                                      std::to_string(expect) + ")");
            }
            s.scores.push_back(score);
            ++expect;
        }
        series.push_back(std::move(s));
    }
    return series;
}

void write_scores_csv(const std::filesystem::path& path,
                      const std::vector<ScoreSeries>& series) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write " + path.string());
    os << "pair_id,method,k,score\n";
    for (const auto& s : series) {
        for (std::size_t k = 0; k < s.scores.size(); ++k) {
            os << join_csv_row({s.pair_id, std::string(method_label(s.method)),
                                std::to_string(k), format_double(s.scores[k])})
               << "\n";
        }
    }
    if (!os) throw IoError("write failed for " + path.string());
}

} // namespace epc
