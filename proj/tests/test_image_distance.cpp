#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "epc/errors.hpp"
#include "epc/image_distance.hpp"
#include "epc/stats.hpp"

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

void write_pgm(const fs::path& path, std::size_t w, std::size_t h,
               const std::vector<std::uint8_t>& pixels) {
    std::ofstream os(path, std::ios::binary);
    os << "P5\n" << w << " " << h << "\n255\n";
    os.write(reinterpret_cast<const char*>(pixels.data()),
             static_cast<std::streamsize>(pixels.size()));
}

} // namespace

TEST_CASE("netpbm round trip and mean absolute difference") {
    TempDir dir("epc_image_mad");
    write_pgm(dir.path / "a.pgm", 2, 2, {0, 0, 0, 0});
    write_pgm(dir.path / "b.pgm", 2, 2, {255, 255, 255, 255});
    write_pgm(dir.path / "c.pgm", 2, 2, {255, 0, 0, 0});

    const Image a = load_netpbm(dir.path / "a.pgm");
    CHECK(a.width == 2);
    CHECK(a.channels == 1);

    const Image b = load_netpbm(dir.path / "b.pgm");
    const Image c = load_netpbm(dir.path / "c.pgm");
    CHECK(mean_absolute_pixel_difference(a, a) == 0.0);
    CHECK(mean_absolute_pixel_difference(a, b) == 1.0);
    CHECK(mean_absolute_pixel_difference(a, c) == 0.25);
    CHECK(mean_absolute_pixel_difference(a, b) == mean_absolute_pixel_difference(b, a));
}

TEST_CASE("shape mismatch and malformed files are rejected") {
    TempDir dir("epc_image_bad");
    write_pgm(dir.path / "a.pgm", 2, 2, {0, 0, 0, 0});
    write_pgm(dir.path / "wide.pgm", 4, 1, {0, 0, 0, 0});
    CHECK_THROWS_AS(mean_absolute_pixel_difference(load_netpbm(dir.path / "a.pgm"),
                                                   load_netpbm(dir.path / "wide.pgm")),
                    DimensionError);
    {
        std::ofstream os(dir.path / "trunc.pgm", std::ios::binary);
        os << "P5\n2 2\n255\n\0";
    }
    CHECK_THROWS_AS(load_netpbm(dir.path / "trunc.pgm"), FormatError);
    {
        std::ofstream os(dir.path / "text.ppm", std::ios::binary);
        os << "P3\n1 1\n255\n0 0 0\n";
    }
    CHECK_THROWS_AS(load_netpbm(dir.path / "text.ppm"), FormatError);
}

TEST_CASE("smoke test: trajectory scores feed straight into ppl") {
    // fade from black to white over 5 frames; consecutive differences are equal
    TempDir dir("epc_image_traj");
    std::vector<fs::path> frames;
    for (int k = 0; k < 5; ++k) {
        const auto level = static_cast<std::uint8_t>(k * 60);
        const fs::path p = dir.path / ("f" + std::to_string(k) + ".pgm");
        write_pgm(p, 3, 2, std::vector<std::uint8_t>(6, level));
        frames.push_back(p);
    }
    const auto scores = consecutive_image_scores(frames);
    REQUIRE(scores.size() == 4);
    for (double s : scores) CHECK(s == 60.0 / 255.0);

    ScoreSeries series{"smoke", CouplingMethod::OT, scores};
    CHECK(ppl(series) == 60.0 / 255.0);

    CHECK_THROWS_AS(consecutive_image_scores({frames[0]}), ValidationError);
}
