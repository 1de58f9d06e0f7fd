#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "epc/errors.hpp"
#include "epc/io.hpp"
#include "test_support.hpp"

using namespace epc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace

TEST_CASE("embedding round trip is exact at 32-bit precision") {
    TempDir dir("epc_io_roundtrip");
    Xoshiro256ss rng(1);
    Matrix m(5, 7);
    for (double& v : m.data()) {
        v = static_cast<double>(static_cast<float>(20.0 * rng.next_double() - 10.0));
    }
    const fs::path file = dir.path / "m.epc";
    save_embedding(file, m);
    const Matrix back = load_embedding(file);
    CHECK(back.rows() == 5);
    CHECK(back.cols() == 7);
    CHECK(back == m); // widening of the stored f32 values is exact
}

TEST_CASE("embedding decode worked example") {
    TempDir dir("epc_io_decode");
    const fs::path file = dir.path / "tiny.epc";
    save_embedding(file, Matrix(2, 2, {0, 0, 1, 0}));
    const Matrix m = load_embedding(file);
    CHECK(m(0, 0) == 0.0);
    CHECK(m(1, 0) == 1.0);
    CHECK(fs::file_size(file) == 12 + 4 * 4);
}

TEST_CASE("a 77x768 file is exactly 236556 bytes") {
    TempDir dir("epc_io_native");
    const fs::path file = dir.path / "native.epc";
    save_embedding(file, Matrix(77, 768));
    CHECK(fs::file_size(file) == 236556);
    CHECK_NOTHROW(load_embedding(file));

    // any other length for that header must fail with an offset
    std::string bytes = slurp(file);
    bytes.pop_back();
    std::ofstream(dir.path / "short.epc", std::ios::binary) << bytes;
    CHECK_THROWS_WITH_AS(load_embedding(dir.path / "short.epc"),
                         doctest::Contains("byte offset"), FormatError);
}

TEST_CASE("bad magic and truncation are rejected with offsets") {
    TempDir dir("epc_io_bad");
    {
        std::ofstream os(dir.path / "magic.epc", std::ios::binary);
        os << "NOPE" << std::string(8, '\0');
    }
    CHECK_THROWS_WITH_AS(load_embedding(dir.path / "magic.epc"),
                         doctest::Contains("offset 0"), FormatError);
    {
        std::ofstream os(dir.path / "stub.epc", std::ios::binary);
        os << "EPC1";
    }
    CHECK_THROWS_AS(load_embedding(dir.path / "stub.epc"), FormatError);
    CHECK_THROWS_AS(load_embedding(dir.path / "missing.epc"), IoError);
}

TEST_CASE("non-finite stored values are rejected with the byte offset") {
    TempDir dir("epc_io_nan");
    const fs::path file = dir.path / "nan.epc";
    save_embedding(file, Matrix(1, 2, {1.0, 2.0}));
    std::string bytes = slurp(file);
    // overwrite the second float with the f32 +Inf bit pattern 0x7F800000
    bytes[16] = '\x00';
    bytes[17] = '\x00';
    bytes[18] = '\x80';
    bytes[19] = '\x7F';
    std::ofstream(file, std::ios::binary) << bytes;
    CHECK_THROWS_WITH_AS(load_embedding(file), doctest::Contains("byte offset 16"),
                         FormatError);
}

TEST_CASE("similarity groups bin at width 0.5") {
    CHECK(similarity_group(0.0) == 0.0);
    CHECK(similarity_group(0.49) == 0.0);
    CHECK(similarity_group(0.5) == 0.5);
    CHECK(similarity_group(3.74) == 3.5);
    CHECK(similarity_group(5.0) == 5.0);
}

TEST_CASE("manifest parsing, validation, and path resolution") {
    TempDir dir("epc_io_manifest");
    save_embedding(dir.path / "a.epc", Matrix(2, 2, {0, 0, 1, 0}));
    save_embedding(dir.path / "b.epc", Matrix(2, 2, {2, 0, 0, 1}));

    const fs::path manifest = dir.path / "pairs.json";
    {
        std::ofstream os(manifest);
        os << R"([{"pair_id":"pair-001","embedding_a":"a.epc","embedding_b":"b.epc",)"
           << R"("similarity":3.74,"generation_seed":"1234"}])";
    }
    const PairManifest loaded = load_manifest(manifest);
    REQUIRE(loaded.entries.size() == 1);
    CHECK(loaded.entries[0].pair_id == "pair-001");
    CHECK(loaded.entries[0].group == 3.5);
    CHECK(loaded.entries[0].generation_seed == "1234");
    CHECK(fs::equivalent(loaded.entries[0].embedding_a, dir.path / "a.epc"));

    {
        std::ofstream os(manifest);
        os << R"([{"pair_id":"x","embedding_a":"a.epc","embedding_b":"b.epc","similarity":1.0},)"
           << R"({"pair_id":"x","embedding_a":"a.epc","embedding_b":"b.epc","similarity":1.0}])";
    }
    CHECK_THROWS_WITH_AS(load_manifest(manifest), doctest::Contains("duplicate"),
                         ValidationError);

    {
        std::ofstream os(manifest);
        os << R"([{"pair_id":"ok","embedding_a":"a.epc","embedding_b":"b.epc","similarity":6.0}])";
    }
    CHECK_THROWS_AS(load_manifest(manifest), ValidationError);

    {
        std::ofstream os(manifest);
        os << R"([{"pair_id":"../evil","embedding_a":"a.epc","embedding_b":"b.epc","similarity":1.0}])";
    }
    CHECK_THROWS_AS(load_manifest(manifest), ValidationError);

    {
        std::ofstream os(manifest);
        os << R"([{"pair_id":"gone","embedding_a":"nope.epc","embedding_b":"b.epc","similarity":1.0}])";
    }
    CHECK_THROWS_AS(load_manifest(manifest), IoError);

    {
        std::ofstream os(manifest);
        os << R"([{"pair_id":"grp","embedding_a":"a.epc","embedding_b":"b.epc",)"
           << R"("similarity":1.2,"group":1.5}])";
    }
    CHECK_THROWS_WITH_AS(load_manifest(manifest), doctest::Contains("group"),
                         ValidationError);
}

TEST_CASE("couplings csv round trip with quoted sigma") {
    TempDir dir("epc_io_couplings");
    std::vector<CouplingRecord> records;
    records.push_back({"p1", CouplingMethod::OT, {1, 0, 2}, 2.0, std::sqrt(2.0)});
    records.push_back({"p1", CouplingMethod::CLIP, {0, 1, 2}, 6.0, std::sqrt(6.0)});
    const fs::path file = dir.path / "couplings.csv";
    write_couplings_csv(file, records);

    const std::string text = slurp(file);
    CHECK(text.rfind("pair_id,method,sigma,squared_cost,cost\n", 0) == 0);
    CHECK(text.find("\"1,0,2\"") != std::string::npos);

    const auto back = load_couplings_csv(file);
    REQUIRE(back.size() == 2);
    CHECK(back[0].sigma == std::vector<std::size_t>{1, 0, 2});
    CHECK(back[0].squared_cost == 2.0);
    CHECK(back[1].method == CouplingMethod::CLIP);
}

TEST_CASE("scores csv parses, validates contiguity, and round trips") {
    TempDir dir("epc_io_scores");
    const fs::path file = dir.path / "scores.csv";
    {
        std::ofstream os(file);
        os << "pair_id,method,k,score\n"
           << "p1,OT,1,0.2\n"   // out-of-order rows are fine
           << "p1,OT,0,0.1\n"
           << "p1,CLIP,0,0.4\n";
    }
    const auto series = load_scores_csv(file);
    REQUIRE(series.size() == 2);
    // series come back sorted by (pair_id, method rank): OT before CLIP
    CHECK(series[0].method == CouplingMethod::OT);
    CHECK(series[0].scores == std::vector<double>{0.1, 0.2});
    CHECK(series[1].method == CouplingMethod::CLIP);

    {
        std::ofstream os(file);
        os << "pair_id,method,k,score\np1,OT,1,0.2\n"; // k does not start at 0
    }
    CHECK_THROWS_WITH_AS(load_scores_csv(file), doctest::Contains("non-contiguous"),
                         ValidationError);

    {
        std::ofstream os(file);
        os << "pair_id,method,k,score\np1,OT,0,-0.5\n";
    }
    CHECK_THROWS_AS(load_scores_csv(file), ValidationError);

    {
        std::ofstream os(file);
        os << "pair,how,k,score\n";
    }
    CHECK_THROWS_AS(load_scores_csv(file), FormatError);

    std::vector<ScoreSeries> out{{"p2", CouplingMethod::Random, {0.5, 0.25}}};
    write_scores_csv(file, out);
    const auto reread = load_scores_csv(file);
    REQUIRE(reread.size() == 1);
    CHECK(reread[0].pair_id == "p2");
    CHECK(reread[0].scores == std::vector<double>{0.5, 0.25});
}

TEST_CASE("csv quoting round-trips embedded commas and quotes") {
    const std::vector<std::string> fields{"plain", "with,comma", "with\"quote", ""};
    const auto row = join_csv_row(fields);
    CHECK(split_csv_row(row) == fields);
}

TEST_CASE("doubles serialize with 17 significant digits") {
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(0.1) == "0.10000000000000001");
    const double pi = 3.141592653589793;
    CHECK(std::stod(format_double(pi)) == pi);
}
