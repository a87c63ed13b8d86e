#pragma once

// Binary PGM (P5, maxval 255) reader/writer plus whole-file helpers.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "image.hpp"

namespace saw {

namespace detail {

class PgmHeaderReader {
public:
    explicit PgmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    // Skips whitespace and '#' comments, then reads an unsigned decimal.
    long next_number() {
        skip_separators();
        if (pos_ >= bytes_.size())
            throw Error(ErrorCode::MalformedHeader, "header ends early");
        if (!std::isdigit(bytes_[pos_]))
            throw Error(ErrorCode::MalformedHeader, "expected a decimal number in header");
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000)
                throw Error(ErrorCode::MalformedHeader, "header number too large");
            ++pos_;
        }
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t raster_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
            throw Error(ErrorCode::MalformedHeader, "missing whitespace before raster");
        return pos_ + 1;
    }

private:
    void skip_separators() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n')
                    ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 2;
};

} // namespace detail

inline Image load_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P')
        throw Error(ErrorCode::MalformedHeader, "missing PGM magic");
    if (bytes[1] == '2')
        throw Error(ErrorCode::UnsupportedFormat, "ASCII PGM (P2) is not supported");
    if (bytes[1] != '5')
        throw Error(ErrorCode::UnsupportedFormat, "not a binary PGM");

    detail::PgmHeaderReader header(bytes);
    const long width = header.next_number();
    const long height = header.next_number();
    const long maxval = header.next_number();
    if (width <= 0 || height <= 0 || width > 65535 || height > 65535)
        throw Error(ErrorCode::MalformedHeader, "bad PGM dimensions");
    if (maxval != 255)
        throw Error(ErrorCode::MaxvalUnsupported, "maxval " + std::to_string(maxval) + " (only 255 is supported)");

    const std::size_t offset = header.raster_offset();
    const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() < offset + count)
        throw Error(ErrorCode::TruncatedData, "raster has " + std::to_string(bytes.size() - std::min(offset, bytes.size())) +
                                                  " bytes, expected " + std::to_string(count));
    auto raster = bytes.subspan(offset, count);
    return Image(static_cast<int>(width), static_cast<int>(height), std::vector<std::uint8_t>(raster.begin(), raster.end()));
}

/// Canonical form: "P5\n<w> <h>\n255\n" followed by the raw raster.
inline std::vector<std::uint8_t> save_pgm(const Image& img) {
    const std::string header = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels().begin(), img.pixels().end());
    return out;
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error(ErrorCode::IoError, "short write to " + path.string());
}

inline Image read_pgm(const std::filesystem::path& path) { return load_pgm(read_file(path)); }
inline void write_pgm(const std::filesystem::path& path, const Image& img) { write_file(path, save_pgm(img)); }

} // namespace saw
