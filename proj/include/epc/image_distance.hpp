#pragma once
#include <cstdint>
#include <filesystem>
#include <vector>

namespace epc {

/// 8-bit image loaded from a binary netpbm file (P5 grayscale or P6 RGB).
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 1;
    std::vector<std::uint8_t> pixels; // row-major, interleaved channels
};

Image load_netpbm(const std::filesystem::path& path);

/// Mean absolute pixel difference normalized to [0,1]. NOT a perceptual
/// metric: this is the smoke-test fallback for pipelines that have no
/// externally computed image-similarity scores.
double mean_absolute_pixel_difference(const Image& a, const Image& b);

/// Distances between consecutive images along a trajectory; entry k compares
/// image k with image k+1. Needs at least two paths.
std::vector<double> consecutive_image_scores(
    const std::vector<std::filesystem::path>& images);

} // namespace epc
