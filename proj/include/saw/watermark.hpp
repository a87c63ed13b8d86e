#pragma once

// Strict-authentication watermarking: the region of interest (ROI) is hashed
// and the 256-bit digest is written into dark 8x8 blocks outside it, one bit
// per block, at a chosen bit plane. Block order is scrambled by a keyed
// permutation of the embeddable-block list.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "digest.hpp"
#include "error.hpp"
#include "image.hpp"

namespace saw {

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    int right() const noexcept { return x + w; }   // exclusive
    int bottom() const noexcept { return y + h; }  // exclusive

    bool within(int width, int height) const noexcept {
        return w >= 1 && h >= 1 && x >= 0 && y >= 0 && right() <= width && bottom() <= height;
    }

    friend bool operator==(const Rect&, const Rect&) = default;
};

struct WatermarkParams {
    std::uint64_t key = 37;
    int plane = 1;         // 1 = least significant bit
    int guard = 1;         // blocks
    int fg_threshold = 0;  // pixels above this value are content
    std::optional<std::string> hash_key;

    int amplitude() const noexcept { return 1 << (plane - 1); }

    void validate() const {
        if (key == 0)
            throw Error(ErrorCode::InvalidParams, "key must be a positive integer");
        if (plane < 1 || plane > 3)
            throw Error(ErrorCode::InvalidParams, "plane must be 1, 2 or 3");
        if (guard < 0)
            throw Error(ErrorCode::InvalidParams, "guard band must be non-negative");
        if (fg_threshold < 0 || fg_threshold > 254)
            throw Error(ErrorCode::InvalidParams, "foreground threshold must be in 0..254");
    }
};

using BlockList = std::vector<BlockPos>;

/// Smallest axis-aligned rectangle holding every pixel brighter than `fg_threshold`.
inline Rect detect_roi(const Image& img, int fg_threshold = 0) {
    int x0 = img.width(), y0 = img.height(), x1 = -1, y1 = -1;
    for (int y = 0; y < img.height(); ++y) {
        auto row = img.row(y);
        for (int x = 0; x < img.width(); ++x) {
            if (row[static_cast<std::size_t>(x)] > fg_threshold) {
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
            }
        }
    }
    if (x1 < 0)
        throw Error(ErrorCode::NoContent, "no pixel exceeds the foreground threshold");
    return Rect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

/// ROI pixels in raster order, one byte each.
inline std::vector<std::uint8_t> serialize_roi(const Image& img, const Rect& roi) {
    if (!roi.within(img.width(), img.height()))
        throw Error(ErrorCode::RectOutOfBounds, "ROI does not lie inside the image");
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(roi.w) * static_cast<std::size_t>(roi.h));
    for (int y = roi.y; y < roi.bottom(); ++y) {
        auto row = img.row(y).subspan(static_cast<std::size_t>(roi.x), static_cast<std::size_t>(roi.w));
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

inline Digest256 roi_digest(const Image& img, const Rect& roi, const std::optional<std::string>& hash_key) {
    const auto bytes = serialize_roi(img, roi);
    return hash_key ? digest(bytes, std::string_view(*hash_key)) : digest(bytes);
}

/// Keyed one-to-one position map over 1..n: ((key * x) mod n) + 1.
inline std::uint64_t map_position(std::uint64_t key, std::uint64_t x, std::uint64_t n) {
    if (n == 0)
        throw Error(ErrorCode::CapacityExceeded, "empty embedding region");
    if (std::gcd(key, n) != 1)
        throw Error(ErrorCode::KeyNotCoprime,
                    "key " + std::to_string(key) + " shares a factor with n = " + std::to_string(n));
    if (x < 1 || x > n)
        throw Error(ErrorCode::InvalidParams, "bit index outside 1..n");
    const unsigned __int128 product = static_cast<unsigned __int128>(key % n) * x;
    return static_cast<std::uint64_t>(product % n) + 1;
}

/// Unkeyed raster placement: bit 1 -> position 1, bit 2 -> position 2, ...
inline std::uint64_t map_sequential(std::uint64_t x, std::uint64_t n) {
    if (n == 0)
        throw Error(ErrorCode::CapacityExceeded, "empty embedding region");
    if (x < 1)
        throw Error(ErrorCode::InvalidParams, "bit index must be positive");
    return (x - 1) % n + 1;
}

/// Full blocks lying entirely outside the ROI grown by `guard` blocks on
/// every side, in raster order. Depends on geometry only.
inline BlockList embeddable_blocks(int width, int height, const Rect& roi, int guard) {
    if (!roi.within(width, height))
        throw Error(ErrorCode::RectOutOfBounds, "ROI does not lie inside the image");
    if (guard < 0)
        throw Error(ErrorCode::InvalidParams, "guard band must be non-negative");
    const int margin = guard * kBlockSize;
    const int ex0 = roi.x - margin, ey0 = roi.y - margin;
    const int ex1 = roi.right() + margin, ey1 = roi.bottom() + margin;

    BlockList out;
    for (int by = 0; by < height / kBlockSize; ++by) {
        for (int bx = 0; bx < width / kBlockSize; ++bx) {
            const int x0 = bx * kBlockSize, y0 = by * kBlockSize;
            const bool overlaps = x0 < ex1 && x0 + kBlockSize > ex0 && y0 < ey1 && y0 + kBlockSize > ey0;
            if (!overlaps)
                out.push_back({bx, by});
        }
    }
    return out;
}

inline constexpr int kWatermarkBits = Digest256::kBits;

/// The block carrying each digest bit: result[x - 1] holds bit x.
inline BlockList carrier_blocks(const BlockList& region, std::uint64_t key) {
    if (region.size() < static_cast<std::size_t>(kWatermarkBits))
        throw Error(ErrorCode::CapacityExceeded, "embedding region has " + std::to_string(region.size()) +
                                                     " blocks, need " + std::to_string(kWatermarkBits));
    BlockList carriers;
    carriers.reserve(kWatermarkBits);
    for (int x = 1; x <= kWatermarkBits; ++x)
        carriers.push_back(region[map_position(key, static_cast<std::uint64_t>(x), region.size()) - 1]);
    return carriers;
}

struct EmbedManifest {
    Rect roi;
    int plane = 1;
    int guard = 1;
    std::uint64_t n = 0;
    Digest256 digest;
    bool keyed_hash = false;

    friend bool operator==(const EmbedManifest&, const EmbedManifest&) = default;
};

struct EmbedResult {
    Image image;
    EmbedManifest manifest;
};

inline EmbedResult embed(const Image& img, const Rect& roi, const WatermarkParams& params) {
    params.validate();
    const BlockList region = embeddable_blocks(img.width(), img.height(), roi, params.guard);
    const BlockList carriers = carrier_blocks(region, params.key);

    for (const BlockPos pos : carriers)
        for (int r = 0; r < kBlockSize; ++r)
            for (int c = 0; c < kBlockSize; ++c)
                if (img.at(pos.bx * kBlockSize + c, pos.by * kBlockSize + r) > params.fg_threshold)
                    throw Error(ErrorCode::BlockNotDark, "carrier block (" + std::to_string(pos.bx) + "," +
                                                             std::to_string(pos.by) + ") contains content");

    EmbedResult result{img, EmbedManifest{roi, params.plane, params.guard, region.size(),
                                          roi_digest(img, roi, params.hash_key), params.hash_key.has_value()}};
    const int amplitude = params.amplitude();
    for (int x = 1; x <= kWatermarkBits; ++x) {
        const BlockPos pos = carriers[static_cast<std::size_t>(x - 1)];
        const auto value = static_cast<std::uint8_t>(result.manifest.digest.bit(x) * amplitude);
        for (int r = 0; r < kBlockSize; ++r)
            for (int c = 0; c < kBlockSize; ++c)
                result.image.at(pos.bx * kBlockSize + c, pos.by * kBlockSize + r) = value;
    }
    return result;
}

/// Reads each carrier block as 1 when its mean exceeds half the embedding
/// amplitude. Survives the DC drift JPEG introduces in flat blocks.
inline Digest256 extract(const Image& img, const Rect& roi, const WatermarkParams& params) {
    params.validate();
    const BlockList region = embeddable_blocks(img.width(), img.height(), roi, params.guard);
    const BlockList carriers = carrier_blocks(region, params.key);
    // mean > amplitude / 2  <=>  sum > 32 * amplitude
    const int cutoff = 32 * params.amplitude();
    Digest256 out;
    for (int x = 1; x <= kWatermarkBits; ++x) {
        const BlockPos pos = carriers[static_cast<std::size_t>(x - 1)];
        int sum = 0;
        for (int r = 0; r < kBlockSize; ++r)
            for (int c = 0; c < kBlockSize; ++c)
                sum += img.at(pos.bx * kBlockSize + c, pos.by * kBlockSize + r);
        out.set_bit(x, sum > cutoff ? 1 : 0);
    }
    return out;
}

enum class VerifyMode { strict, reference };

inline std::string_view to_string(VerifyMode mode) noexcept {
    return mode == VerifyMode::strict ? "strict" : "reference";
}

struct VerifyReport {
    bool pass = false;
    Digest256 extracted;
    Digest256 reference;
    int differing_bits = 0;
    VerifyMode mode = VerifyMode::reference;
};

inline VerifyReport verify_reference(const Digest256& extracted, const Digest256& expected) {
    const int diff = hamming_distance(extracted, expected);
    return VerifyReport{diff == 0, extracted, expected, diff, VerifyMode::reference};
}

/// Recomputes the ROI digest from the received image and compares it with
/// the embedded one.
inline VerifyReport verify_strict(const Image& img, const Rect& roi, const WatermarkParams& params) {
    const Digest256 extracted = extract(img, roi, params);
    VerifyReport report = verify_reference(extracted, roi_digest(img, roi, params.hash_key));
    report.mode = VerifyMode::strict;
    return report;
}

} // namespace saw
