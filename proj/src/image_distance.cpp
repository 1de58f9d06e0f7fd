#include "epc/image_distance.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string>

#include "epc/errors.hpp"

namespace epc {

namespace {

// Reads one whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    while (in >> tok) {
        if (tok[0] == '#') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        return tok;
    }
    return {};
}

std::size_t parse_count(const std::string& tok, const std::string& path) {
    if (tok.empty()) throw FormatError(path + ": truncated netpbm header");
    char* end = nullptr;
    const unsigned long v = std::strtoul(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0') {
        throw FormatError(path + ": bad netpbm header token '" + tok + "'");
    }
    return static_cast<std::size_t>(v);
}

} // namespace

Image load_netpbm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());

    const std::string magic = next_token(in);
    Image img;
    if (magic == "P5") {
        img.channels = 1;
    } else if (magic == "P6") {
        img.channels = 3;
    } else {
        throw FormatError(path.string() + ": expected binary netpbm magic P5 or P6");
    }
    img.width = parse_count(next_token(in), path.string());
    img.height = parse_count(next_token(in), path.string());
    const std::size_t maxval = parse_count(next_token(in), path.string());
    if (img.width == 0 || img.height == 0 || maxval == 0 || maxval > 255) {
        throw FormatError(path.string() + ": unsupported netpbm geometry or maxval");
    }
    in.get(); // single whitespace byte before the raster

    const std::size_t count = img.width * img.height * img.channels;
    img.pixels.resize(count);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) {
        throw FormatError(path.string() + ": truncated raster, expected " +
                          std::to_string(count) + " bytes");
    }
    return img;
}

double mean_absolute_pixel_difference(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
        throw DimensionError("images differ in shape");
    }
    if (a.pixels.empty()) throw ValidationError("empty image");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        sum += std::abs(static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]));
    }
    return sum / (255.0 * static_cast<double>(a.pixels.size()));
}

std::vector<double> consecutive_image_scores(
    const std::vector<std::filesystem::path>& images) {
    if (images.size() < 2) {
        throw ValidationError("a trajectory needs at least two images");
    }
    std::vector<double> scores;
    scores.reserve(images.size() - 1);
    Image prev = load_netpbm(images[0]);
    for (std::size_t k = 1; k < images.size(); ++k) {
        Image cur = load_netpbm(images[k]);
        scores.push_back(mean_absolute_pixel_difference(prev, cur));
        prev = std::move(cur);
    }
    return scores;
}

} // namespace epc
