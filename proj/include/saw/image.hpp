#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "error.hpp"

namespace saw {

/// 8-bit grayscale raster, row-major, top-left origin.
class Image {
public:
    Image() = default;

    Image(int width, int height, std::uint8_t fill = 0) : width_(width), height_(height) {
        if (width <= 0 || height <= 0)
            throw Error(ErrorCode::InvalidDimensions, "image dimensions must be positive");
        pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    Image(int width, int height, std::vector<std::uint8_t> pixels) : Image(width, height) {
        if (pixels.size() != pixels_.size())
            throw Error(ErrorCode::DimensionMismatch, "pixel count does not match width * height");
        pixels_ = std::move(pixels);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }

    std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
    std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
    std::span<std::uint8_t> pixels() noexcept { return pixels_; }

    std::span<const std::uint8_t> row(int y) const noexcept {
        return std::span<const std::uint8_t>(pixels_).subspan(index(0, y), static_cast<std::size_t>(width_));
    }

    bool same_shape(const Image& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

inline constexpr int kBlockSize = 8;

/// One 8x8 tile of real-valued samples, row-major (index = row * 8 + col).
struct Block {
    std::array<double, 64> values{};

    double& operator()(int row, int col) noexcept { return values[static_cast<std::size_t>(row * 8 + col)]; }
    double operator()(int row, int col) const noexcept { return values[static_cast<std::size_t>(row * 8 + col)]; }

    friend bool operator==(const Block&, const Block&) = default;
};

/// Position of a block on the 8x8 grid, in block units.
struct BlockPos {
    int bx = 0;
    int by = 0;

    friend bool operator==(const BlockPos&, const BlockPos&) = default;
    friend auto operator<=>(const BlockPos& a, const BlockPos& b) noexcept {
        if (auto c = a.by <=> b.by; c != 0)
            return c;
        return a.bx <=> b.bx;
    }
};

constexpr int blocks_along(int extent) noexcept { return (extent + kBlockSize - 1) / kBlockSize; }

/// Raster-ordered block positions covering the (padded) image exactly once.
inline std::vector<BlockPos> block_grid(int width, int height) {
    std::vector<BlockPos> grid;
    const int bw = blocks_along(width);
    const int bh = blocks_along(height);
    grid.reserve(static_cast<std::size_t>(bw) * static_cast<std::size_t>(bh));
    for (int by = 0; by < bh; ++by)
        for (int bx = 0; bx < bw; ++bx)
            grid.push_back({bx, by});
    return grid;
}

inline std::vector<BlockPos> block_grid(const Image& img) { return block_grid(img.width(), img.height()); }

/// Grows the image to the next multiple of 8 in each direction by repeating
/// the last column and row.
inline Image pad_to_blocks(const Image& img) {
    const int pw = blocks_along(img.width()) * kBlockSize;
    const int ph = blocks_along(img.height()) * kBlockSize;
    if (pw == img.width() && ph == img.height())
        return img;
    Image out(pw, ph);
    for (int y = 0; y < ph; ++y) {
        const int sy = y < img.height() ? y : img.height() - 1;
        for (int x = 0; x < pw; ++x) {
            const int sx = x < img.width() ? x : img.width() - 1;
            out.at(x, y) = img.at(sx, sy);
        }
    }
    return out;
}

inline Image crop(const Image& img, int width, int height) {
    if (width == img.width() && height == img.height())
        return img;
    if (width > img.width() || height > img.height())
        throw Error(ErrorCode::InvalidDimensions, "crop larger than source");
    Image out(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            out.at(x, y) = img.at(x, y);
    return out;
}

inline Block load_block(const Image& padded, BlockPos pos) {
    Block b;
    const int x0 = pos.bx * kBlockSize;
    const int y0 = pos.by * kBlockSize;
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            b(r, c) = padded.at(x0 + c, y0 + r);
    return b;
}

} // namespace saw
