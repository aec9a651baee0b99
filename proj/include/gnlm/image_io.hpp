#pragma once

// Raster persistence and PNG export.
//
// On-disk format: `<path>` holds raw little-endian float32 samples, row-major,
// band-sequential (all of band 0, then band 1, ...). `<path>.json` holds the
// header:
//
//   {"width": W, "height": H, "bands": M, "dtype": "f32le",
//    "looks": L (optional), "band_names": [...] (optional)}

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <zlib.h>

#include "json.hpp"

#include "gnlm/error.hpp"
#include "gnlm/raster.hpp"

namespace gnlm {

struct RasterHeader {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t bands = 1;
    std::string dtype = "f32le";
    std::optional<double> looks;
    std::vector<std::string> band_names;

    void validate() const {
        if (width == 0 || height == 0 || bands == 0)
            throw DataError("raster header dimensions must be positive");
        if (dtype != "f32le")
            throw DataError("unsupported raster dtype '" + dtype + "', expected f32le");
        if (!band_names.empty() && band_names.size() != bands)
            throw DataError("band_names length does not match the band count");
    }
};

inline void to_json(nlohmann::json& j, const RasterHeader& h) {
    j = nlohmann::json{{"width", h.width}, {"height", h.height}, {"bands", h.bands}, {"dtype", h.dtype}};
    if (h.looks)
        j["looks"] = *h.looks;
    if (!h.band_names.empty())
        j["band_names"] = h.band_names;
}

inline void from_json(const nlohmann::json& j, RasterHeader& h) {
    j.at("width").get_to(h.width);
    j.at("height").get_to(h.height);
    h.bands = j.value("bands", std::size_t{1});
    h.dtype = j.value("dtype", std::string("f32le"));
    if (j.contains("looks") && !j["looks"].is_null())
        h.looks = j["looks"].get<double>();
    if (j.contains("band_names"))
        j["band_names"].get_to(h.band_names);
}

/// Band-sequential float32 samples plus their header.
struct RasterData {
    RasterHeader header;
    std::vector<float> samples;

    std::size_t plane_size() const noexcept { return header.width * header.height; }

    Raster<double> band(std::size_t b) const {
        if (b >= header.bands)
            throw DataError("band index out of range");
        Raster<double> out(header.width, header.height);
        const float* src = samples.data() + b * plane_size();
        for (std::size_t i = 0; i < plane_size(); ++i)
            out[i] = static_cast<double>(src[i]);
        return out;
    }
};

inline std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    return std::filesystem::path(path.string() + ".json");
}

namespace detail {

inline std::uint32_t to_little_endian(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::little)
        return v;
    return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
}

}  // namespace detail

inline void write_raster(const std::filesystem::path& path, const RasterData& data) {
    data.header.validate();
    if (data.samples.size() != data.plane_size() * data.header.bands)
        throw DataError("sample count does not match the raster header");
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw DataError("cannot open '" + path.string() + "' for writing");
        std::vector<std::uint32_t> words(data.samples.size());
        for (std::size_t i = 0; i < words.size(); ++i)
            words[i] = detail::to_little_endian(std::bit_cast<std::uint32_t>(data.samples[i]));
        out.write(reinterpret_cast<const char*>(words.data()),
                  static_cast<std::streamsize>(words.size() * sizeof(std::uint32_t)));
        if (!out)
            throw DataError("failed writing '" + path.string() + "'");
    }
    std::ofstream side(sidecar_path(path), std::ios::trunc);
    if (!side)
        throw DataError("cannot write sidecar for '" + path.string() + "'");
    side << nlohmann::json(data.header).dump(2) << "\n";
}

inline RasterData read_raster(const std::filesystem::path& path) {
    RasterData data;
    {
        std::ifstream side(sidecar_path(path));
        if (!side)
            throw DataError("missing sidecar '" + sidecar_path(path).string() + "'");
        try {
            data.header = nlohmann::json::parse(side).get<RasterHeader>();
        } catch (const nlohmann::json::exception& e) {
            throw DataError("corrupt sidecar '" + sidecar_path(path).string() + "': " + e.what());
        }
    }
    data.header.validate();
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open '" + path.string() + "'");
    const std::size_t expected = data.plane_size() * data.header.bands * sizeof(float);
    const auto actual = static_cast<std::size_t>(std::filesystem::file_size(path));
    if (actual != expected)
        throw DataError("payload of '" + path.string() + "' has " + std::to_string(actual) + " bytes, header implies " +
                        std::to_string(expected));
    std::vector<std::uint32_t> words(expected / sizeof(float));
    in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(expected));
    if (!in)
        throw DataError("failed reading '" + path.string() + "'");
    data.samples.resize(words.size());
    for (std::size_t i = 0; i < words.size(); ++i)
        data.samples[i] = std::bit_cast<float>(detail::to_little_endian(words[i]));
    return data;
}

inline RasterData to_raster_data(const Raster<double>& r, std::optional<double> looks = std::nullopt) {
    RasterData d;
    d.header.width = r.width();
    d.header.height = r.height();
    d.header.bands = 1;
    d.header.looks = looks;
    d.samples.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        d.samples[i] = static_cast<float>(r[i]);
    return d;
}

inline void write_raster(const std::filesystem::path& path, const Raster<double>& r,
                         std::optional<double> looks = std::nullopt) {
    write_raster(path, to_raster_data(r, looks));
}

inline void write_sar(const std::filesystem::path& path, const SarImage& sar) {
    write_raster(path, sar.intensity, sar.looks);
}

inline void write_guide(const std::filesystem::path& path, const OpticalGuide& guide) {
    RasterData d;
    d.header.width = guide.width();
    d.header.height = guide.height();
    d.header.bands = guide.band_count();
    for (const auto& b : guide.bands)
        for (double v : b.values())
            d.samples.push_back(static_cast<float>(v));
    write_raster(path, d);
}

/// Reads a single-band SAR intensity raster. NaN/Inf and negative samples
/// are rejected. `looks` overrides the header value; one of them is required.
inline SarImage read_sar(const std::filesystem::path& path, std::optional<double> looks = std::nullopt) {
    const RasterData d = read_raster(path);
    if (d.header.bands != 1)
        throw DataError("SAR raster must have exactly one band");
    for (float v : d.samples)
        if (!std::isfinite(v))
            throw DataError("SAR raster '" + path.string() + "' contains NaN or Inf");
    const auto l = looks ? looks : d.header.looks;
    if (!l)
        throw DataError("number of looks missing from '" + path.string() + "' and not given");
    return SarImage(d.band(0), *l);
}

inline OpticalGuide read_guide(const std::filesystem::path& path) {
    const RasterData d = read_raster(path);
    std::vector<Raster<double>> bands;
    for (std::size_t b = 0; b < d.header.bands; ++b)
        bands.push_back(d.band(b));
    return OpticalGuide(std::move(bands));
}

//---------------------------------------------------------------------------//
// PNG export (for inspection only)
//---------------------------------------------------------------------------//

enum class PngMode { linear, log_db };

namespace detail {

inline void png_chunk(std::string& out, const char* type, const std::string& payload) {
    auto put32 = [&](std::uint32_t v) {
        for (int s = 24; s >= 0; s -= 8)
            out.push_back(static_cast<char>((v >> s) & 0xFF));
    };
    put32(static_cast<std::uint32_t>(payload.size()));
    const std::string body = std::string(type, 4) + payload;
    out += body;
    put32(static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()))));
}

/// Writes 8-bit gray (channels = 1) or RGB (channels = 3) pixels.
inline void write_png(const std::filesystem::path& path, std::size_t width, std::size_t height, int channels,
                      const std::vector<std::uint8_t>& pixels) {
    std::string raw;
    raw.reserve(height * (width * static_cast<std::size_t>(channels) + 1));
    const std::size_t stride = width * static_cast<std::size_t>(channels);
    for (std::size_t y = 0; y < height; ++y) {
        raw.push_back('\0');
        raw.append(reinterpret_cast<const char*>(pixels.data() + y * stride), stride);
    }
    uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
    std::string packed(packed_size, '\0');
    if (compress2(reinterpret_cast<Bytef*>(packed.data()), &packed_size, reinterpret_cast<const Bytef*>(raw.data()),
                  static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw DataError("PNG compression failed");
    packed.resize(packed_size);

    std::string header;
    for (auto v : {static_cast<std::uint32_t>(width), static_cast<std::uint32_t>(height)})
        for (int s = 24; s >= 0; s -= 8)
            header.push_back(static_cast<char>((v >> s) & 0xFF));
    header += std::string{8, static_cast<char>(channels == 3 ? 2 : 0), 0, 0, 0};

    std::string file = "\x89PNG\r\n\x1a\n";
    png_chunk(file, "IHDR", header);
    png_chunk(file, "IDAT", packed);
    png_chunk(file, "IEND", "");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot open '" + path.string() + "' for writing");
    out.write(file.data(), static_cast<std::streamsize>(file.size()));
}

inline std::uint8_t to_byte(double t) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
}

inline double median_of(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

}  // namespace detail

/// Gray PNG of a single-band raster.
///
/// linear: [min, max] maps to [0, 255]; a constant raster renders mid-gray.
/// log_db: [median 10^(-span/20), median 10^(+span/20)] maps logarithmically
/// to [0, 255]; nonpositive values render black.
inline void export_png(const std::filesystem::path& path, const Raster<double>& r, PngMode mode = PngMode::log_db,
                       double db_span = 20.0) {
    if (r.empty())
        throw DataError("cannot export an empty raster");
    std::vector<std::uint8_t> px(r.size());
    if (mode == PngMode::linear) {
        const auto [lo, hi] = std::minmax_element(r.values().begin(), r.values().end());
        for (std::size_t i = 0; i < r.size(); ++i)
            px[i] = *hi > *lo ? detail::to_byte((r[i] - *lo) / (*hi - *lo)) : std::uint8_t{128};
    } else {
        std::vector<double> positive;
        for (double v : r.values())
            if (v > 0.0)
                positive.push_back(v);
        const double med = positive.empty() ? 1.0 : detail::median_of(std::move(positive));
        const double lo = std::log10(med) - db_span / 20.0;
        const double range = db_span / 10.0;
        for (std::size_t i = 0; i < r.size(); ++i)
            px[i] = r[i] > 0.0 ? detail::to_byte((std::log10(r[i]) - lo) / range) : std::uint8_t{0};
    }
    detail::write_png(path, r.width(), r.height(), 1, px);
}

/// RGB PNG of a guide: one band renders gray, three bands render as RGB.
inline void export_guide_png(const std::filesystem::path& path, const OpticalGuide& guide) {
    if (guide.band_count() != 1 && guide.band_count() != 3)
        throw DataError("guide export supports 1 or 3 bands, got " + std::to_string(guide.band_count()));
    std::vector<std::uint8_t> px(guide.width() * guide.height() * 3);
    for (std::size_t i = 0; i < guide.width() * guide.height(); ++i)
        for (std::size_t c = 0; c < 3; ++c)
            px[3 * i + c] = detail::to_byte(guide.bands[guide.band_count() == 3 ? c : 0][i]);
    detail::write_png(path, guide.width(), guide.height(), 3, px);
}

/// Jet-style ramp from dark blue (0, 0, 128) at 0 to intense red (255, 0, 0) at 1.
inline std::array<std::uint8_t, 3> count_colormap(double t) {
    t = std::clamp(t, 0.0, 1.0);
    // Piecewise-linear stops of the classic jet ramp.
    constexpr std::array<std::array<double, 4>, 6> stops = {{{0.0, 0.0, 0.0, 0.5},
                                                             {0.125, 0.0, 0.0, 1.0},
                                                             {0.375, 0.0, 1.0, 1.0},
                                                             {0.625, 1.0, 1.0, 0.0},
                                                             {0.875, 1.0, 0.0, 0.0},
                                                             {1.0, 1.0, 0.0, 0.0}}};
    std::size_t k = 0;
    while (k + 2 < stops.size() && t > stops[k + 1][0])
        ++k;
    const double u = (t - stops[k][0]) / (stops[k + 1][0] - stops[k][0]);
    std::array<std::uint8_t, 3> rgb{};
    for (std::size_t c = 0; c < 3; ++c)
        rgb[c] = detail::to_byte(stops[k][c + 1] + u * (stops[k + 1][c + 1] - stops[k][c + 1]));
    return rgb;
}

/// False-color predictor-count map: 1 renders dark blue, `max_count` intense red.
inline void export_count_map_png(const std::filesystem::path& path, const Raster<std::int32_t>& counts,
                                 std::size_t max_count) {
    if (counts.empty())
        throw DataError("cannot export an empty count map");
    std::vector<std::uint8_t> px(counts.size() * 3);
    const double span = max_count > 1 ? static_cast<double>(max_count - 1) : 1.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto rgb = count_colormap((static_cast<double>(counts[i]) - 1.0) / span);
        std::copy(rgb.begin(), rgb.end(), px.begin() + static_cast<std::ptrdiff_t>(3 * i));
    }
    detail::write_png(path, counts.width(), counts.height(), 3, px);
}

}  // namespace gnlm
