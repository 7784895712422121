#pragma once

// Binary PGM (P5) / PPM (P6) images with maxval 255, and their conversion to
// per-channel cell-average grids. Pixel (row, col) maps to cell (i, j) =
// (row, col); the image covers the unit square.

#include "cwmr/errors.hpp"
#include "cwmr/grid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace cwmr {

struct ImageBuffer {
    std::size_t width = 0;
    std::size_t height = 0;
    int channels = 1;
    /// Interleaved samples, row-major.
    std::vector<std::uint8_t> samples;

    std::uint8_t& at(std::size_t row, std::size_t col, int c)
    {
        return samples[(row * width + col) * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c)];
    }
    std::uint8_t at(std::size_t row, std::size_t col, int c) const
    {
        return samples[(row * width + col) * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c)];
    }

    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;
};

namespace detail {

class HeaderParser {
public:
    explicit HeaderParser(const std::vector<std::uint8_t>& bytes) : b_(bytes) {}

    /// Next whitespace-separated token, skipping '#' comments.
    std::string token()
    {
        for (;;) {
            while (pos_ < b_.size() && std::isspace(b_[pos_])) {
                ++pos_;
            }
            if (pos_ < b_.size() && b_[pos_] == '#') {
                while (pos_ < b_.size() && b_[pos_] != '\n') {
                    ++pos_;
                }
                continue;
            }
            break;
        }
        std::string t;
        while (pos_ < b_.size() && !std::isspace(b_[pos_]) && b_[pos_] != '#') {
            t.push_back(static_cast<char>(b_[pos_++]));
        }
        if (t.empty()) {
            throw FormatError("image: truncated header");
        }
        return t;
    }

    std::size_t number()
    {
        const std::string t = token();
        if (!std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })
            || t.size() > 9) {
            throw FormatError("image: bad header field '" + t + "'");
        }
        return std::stoul(t);
    }

    /// Consumes the single whitespace byte that ends the header.
    std::size_t payload_start()
    {
        if (pos_ >= b_.size() || !std::isspace(b_[pos_])) {
            throw FormatError("image: header must end with one whitespace byte");
        }
        return pos_ + 1;
    }

private:
    const std::vector<std::uint8_t>& b_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline ImageBuffer decode_image(const std::vector<std::uint8_t>& bytes)
{
    detail::HeaderParser p(bytes);
    const std::string magic = p.token();
    ImageBuffer img;
    if (magic == "P5") {
        img.channels = 1;
    } else if (magic == "P6") {
        img.channels = 3;
    } else {
        throw FormatError("image: only binary PGM (P5) and PPM (P6) are supported");
    }
    img.width = p.number();
    img.height = p.number();
    const std::size_t maxval = p.number();
    if (maxval != 255) {
        throw FormatError("image: maxval must be 255, got " + std::to_string(maxval));
    }
    if (img.width == 0 || img.height == 0) {
        throw FormatError("image: empty image");
    }
    const std::size_t start = p.payload_start();
    const std::size_t need = img.width * img.height * static_cast<std::size_t>(img.channels);
    if (bytes.size() - start < need) {
        throw FormatError("image: truncated payload (" + std::to_string(bytes.size() - start) + " of "
                          + std::to_string(need) + " bytes)");
    }
    img.samples.assign(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                       bytes.begin() + static_cast<std::ptrdiff_t>(start + need));
    return img;
}

inline std::vector<std::uint8_t> encode_image(const ImageBuffer& img)
{
    if (img.channels != 1 && img.channels != 3) {
        throw ParameterError("image: channels must be 1 or 3");
    }
    if (img.samples.size() != img.width * img.height * static_cast<std::size_t>(img.channels)) {
        throw DimensionError("image: sample count does not match the shape");
    }
    const std::string header = std::string(img.channels == 1 ? "P5" : "P6") + "\n"
                               + std::to_string(img.width) + " " + std::to_string(img.height)
                               + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.samples.begin(), img.samples.end());
    return out;
}

inline ImageBuffer read_image(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw FormatError("cannot open '" + path + "'");
    }
    return decode_image({std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()});
}

inline void write_image(const ImageBuffer& img, const std::string& path)
{
    const auto bytes = encode_image(img);
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw FormatError("cannot open '" + path + "' for writing");
    }
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline std::vector<CellGrid> to_grids(const ImageBuffer& img)
{
    if (img.width != img.height) {
        throw DimensionError("image is " + std::to_string(img.width) + "x" + std::to_string(img.height)
                             + "; only square images are supported");
    }
    const std::size_t n = img.width;
    std::vector<CellGrid> grids;
    for (int c = 0; c < img.channels; ++c) {
        CellGrid g(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                g(i, j) = img.at(i, j, c);
            }
        }
        grids.push_back(std::move(g));
    }
    return grids;
}

inline std::uint8_t to_sample(double v)
{
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

/// Clamps to [0, 255] and rounds to nearest.
inline ImageBuffer from_grids(const std::vector<CellGrid>& grids)
{
    if (grids.empty() || (grids.size() != 1 && grids.size() != 3)) {
        throw ParameterError("image: need 1 or 3 channels");
    }
    const std::size_t n = grids.front().size();
    ImageBuffer img{n, n, static_cast<int>(grids.size()), {}};
    img.samples.resize(n * n * grids.size());
    for (int c = 0; c < img.channels; ++c) {
        const CellGrid& g = grids[static_cast<std::size_t>(c)];
        if (g.size() != n) {
            throw DimensionError("image: channel sizes differ");
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                img.at(i, j, c) = to_sample(g(i, j));
            }
        }
    }
    return img;
}

/// Piecewise-constant RGB test image: a filled disk and an axis-aligned
/// rectangle in two gray levels on a white background, hard edges.
inline ImageBuffer make_geometric_image(std::size_t n)
{
    if (n < 8) {
        throw DimensionError("make_geometric_image: size must be >= 8");
    }
    ImageBuffer img{n, n, 3, std::vector<std::uint8_t>(n * n * 3)};
    const double s = static_cast<double>(n);
    const double cx = 0.36 * s;
    const double cy = 0.40 * s;
    const double radius = 0.22 * s;
    const std::size_t r0 = static_cast<std::size_t>(0.55 * s);
    const std::size_t r1 = static_cast<std::size_t>(0.85 * s);
    const std::size_t c0 = static_cast<std::size_t>(0.47 * s);
    const std::size_t c1 = static_cast<std::size_t>(0.90 * s);
    constexpr std::uint8_t background[3] = {255, 255, 255};
    constexpr std::uint8_t disk[3] = {64, 64, 64};
    constexpr std::uint8_t rect[3] = {160, 160, 160};
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t col = 0; col < n; ++col) {
            const double dx = static_cast<double>(row) + 0.5 - cx;
            const double dy = static_cast<double>(col) + 0.5 - cy;
            const std::uint8_t* color = background;
            if (row >= r0 && row < r1 && col >= c0 && col < c1) {
                color = rect;
            } else if (dx * dx + dy * dy <= radius * radius) {
                color = disk;
            }
            for (int c = 0; c < 3; ++c) {
                img.at(row, col, c) = color[c];
            }
        }
    }
    return img;
}

} // namespace cwmr
