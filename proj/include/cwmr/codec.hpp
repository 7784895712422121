#pragma once

// CWMR byte format (all little-endian):
//
//   "CWMR" u8 version=1, u8 r, u8 L, u8 predictor id,
//   u32 rows, u32 cols, f64 eps_finest, f64 epsilon, f64 t, u8 channels
//   per channel:
//     coarse grid, row-major f64
//     per level (coarse to fine), per plane d1, d2, d3:
//       u32 count, then count x (u32 flat index i * n + j, f64 value)
//
// epsilon and t are written as -1 when left at their per-level defaults.

#include "cwmr/errors.hpp"
#include "cwmr/mra.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

namespace cwmr {

inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr char kMagic[4] = {'C', 'W', 'M', 'R'};

namespace detail {

static_assert(std::endian::native == std::endian::little, "CWMR I/O assumes a little-endian host");

class ByteWriter {
public:
    template <class T>
    void put(T v)
    {
        const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
        bytes_.insert(bytes_.end(), p, p + sizeof(T));
    }
    void raw(const void* p, std::size_t n)
    {
        const auto* b = static_cast<const std::uint8_t*>(p);
        bytes_.insert(bytes_.end(), b, b + n);
    }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    template <class T>
    T get()
    {
        if (bytes_.size() - pos_ < sizeof(T)) {
            throw FormatError("CWMR: truncated stream at byte " + std::to_string(pos_));
        }
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    bool done() const { return pos_ == bytes_.size(); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Serializes one representation per channel; all must share configuration
/// and shape.
inline std::vector<std::uint8_t> serialize(std::span<const Representation> channels)
{
    if (channels.empty() || channels.size() > 255) {
        throw ParameterError("serialize: need 1..255 channels");
    }
    const Representation& first = channels.front();
    for (const auto& c : channels) {
        if (c.config.r != first.config.r || c.config.kind != first.config.kind
            || c.config.epsilon != first.config.epsilon || c.config.t != first.config.t
            || c.depth() != first.depth() || c.coarse.size() != first.coarse.size()
            || c.eps_finest != first.eps_finest) {
            throw ParameterError("serialize: channels differ in configuration or shape");
        }
    }
    const std::size_t n = first.fine_size();
    if (n > 0xffffffffu || first.depth() > 255) {
        throw UnsupportedError("serialize: grid too large for the format");
    }

    detail::ByteWriter w;
    w.raw(kMagic, 4);
    w.put<std::uint8_t>(kFormatVersion);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(first.config.r));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(first.depth()));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(first.config.kind));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(n));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(n));
    w.put<double>(first.eps_finest);
    w.put<double>(first.config.epsilon.value_or(-1.0));
    w.put<double>(first.config.t.value_or(-1.0));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(channels.size()));

    for (const auto& c : channels) {
        for (double v : c.coarse.values()) {
            w.put<double>(v);
        }
        for (const auto& level : c.levels) {
            for (int k = 0; k < 3; ++k) {
                const auto values = level.plane(k).values();
                std::uint32_t count = 0;
                for (double v : values) {
                    count += v != 0.0 ? 1 : 0;
                }
                w.put<std::uint32_t>(count);
                for (std::size_t idx = 0; idx < values.size(); ++idx) {
                    if (values[idx] != 0.0) {
                        w.put<std::uint32_t>(static_cast<std::uint32_t>(idx));
                        w.put<double>(values[idx]);
                    }
                }
            }
        }
    }
    return w.take();
}

inline std::vector<std::uint8_t> serialize(const Representation& rep)
{
    return serialize(std::span<const Representation>(&rep, 1));
}

inline std::vector<Representation> deserialize(std::span<const std::uint8_t> bytes)
{
    detail::ByteReader in(bytes);
    for (char m : kMagic) {
        if (in.get<char>() != m) {
            throw FormatError("CWMR: bad magic");
        }
    }
    const auto version = in.get<std::uint8_t>();
    if (version != kFormatVersion) {
        throw FormatError("CWMR: unsupported version " + std::to_string(version));
    }
    PredictorConfig config;
    config.r = in.get<std::uint8_t>();
    const int depth = in.get<std::uint8_t>();
    const auto kind = in.get<std::uint8_t>();
    if (kind > 2) {
        throw FormatError("CWMR: unknown predictor id " + std::to_string(kind));
    }
    config.kind = static_cast<PredictorKind>(kind);
    const auto rows = in.get<std::uint32_t>();
    const auto cols = in.get<std::uint32_t>();
    const double eps_finest = in.get<double>();
    const double epsilon = in.get<double>();
    const double t = in.get<double>();
    const auto channels = in.get<std::uint8_t>();
    if (epsilon >= 0.0) {
        config.epsilon = epsilon;
    }
    if (t >= 0.0) {
        config.t = t;
    }
    try {
        config.validate();
    } catch (const ParameterError& e) {
        throw FormatError(std::string("CWMR: bad header: ") + e.what());
    }
    if (rows != cols || rows == 0 || channels == 0 || depth > 31 || rows % (1u << depth) != 0) {
        throw FormatError("CWMR: inconsistent grid shape in header");
    }

    std::vector<Representation> out;
    const std::size_t m0 = rows >> depth;
    for (int c = 0; c < channels; ++c) {
        Representation rep;
        rep.config = config;
        rep.eps_finest = eps_finest;
        rep.coarse = CellGrid(m0);
        for (double& v : rep.coarse.values()) {
            v = in.get<double>();
        }
        for (int l = 0; l < depth; ++l) {
            const std::size_t m = m0 << l;
            DetailLevel level{CellGrid(m), CellGrid(m), CellGrid(m)};
            for (int k = 0; k < 3; ++k) {
                auto values = level.plane(k).values();
                const auto count = in.get<std::uint32_t>();
                if (count > values.size()) {
                    throw FormatError("CWMR: detail count exceeds plane size");
                }
                std::int64_t last = -1;
                for (std::uint32_t e = 0; e < count; ++e) {
                    const auto idx = in.get<std::uint32_t>();
                    const double v = in.get<double>();
                    if (idx >= values.size() || static_cast<std::int64_t>(idx) <= last) {
                        throw FormatError("CWMR: detail indices out of range or unsorted");
                    }
                    last = idx;
                    values[idx] = v;
                }
            }
            rep.levels.push_back(std::move(level));
        }
        out.push_back(std::move(rep));
    }
    if (!in.done()) {
        throw FormatError("CWMR: trailing bytes after payload");
    }
    return out;
}

inline void write_file(const std::string& path, std::span<const std::uint8_t> bytes)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw FormatError("cannot open '" + path + "' for writing");
    }
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) {
        throw FormatError("write to '" + path + "' failed");
    }
}

inline std::vector<std::uint8_t> read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw FormatError("cannot open '" + path + "'");
    }
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline bool has_cwmr_magic(std::span<const std::uint8_t> bytes)
{
    return bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0;
}

} // namespace cwmr
