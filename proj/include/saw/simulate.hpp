#pragma once

// Blockwise JPEG channel without the entropy layer:
// DCT -> quantize -> dequantize -> IDCT -> round -> clamp.

#include <algorithm>
#include <array>
#include <cstdint>

#include "dct.hpp"
#include "image.hpp"
#include "quant.hpp"

namespace saw {

inline std::uint8_t to_pixel(double v) noexcept {
    return static_cast<std::uint8_t>(std::clamp<long>(round_half_away(v), 0, 255));
}

/// Decoder half for one block: levels back to real-valued samples.
inline Block reconstruct_real(const LevelBlock& levels, const QTable& q, LevelShift shift) {
    return idct2(dequantize(levels, q), shift);
}

/// Channel for one block, before the final rounding and clamping.
inline Block roundtrip_real(const Block& block, const QTable& q, LevelShift shift) {
    return reconstruct_real(quantize(dct2(block, shift), q), q, shift);
}

inline void store_block(Image& padded, BlockPos pos, const Block& real) {
    const int x0 = pos.bx * kBlockSize;
    const int y0 = pos.by * kBlockSize;
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            padded.at(x0 + c, y0 + r) = to_pixel(real(r, c));
}

inline Image roundtrip(const Image& img, int quality, LevelShift shift = LevelShift::on) {
    const QTable q = quality_table(quality);
    Image padded = pad_to_blocks(img);
    for (const BlockPos pos : block_grid(padded))
        store_block(padded, pos, roundtrip_real(load_block(padded, pos), q, shift));
    return crop(padded, img.width(), img.height());
}

} // namespace saw
