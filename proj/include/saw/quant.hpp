#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "dct.hpp"
#include "error.hpp"

namespace saw {

/// Quantizer step sizes in natural (row-major) order.
struct QTable {
    std::array<int, 64> steps{};

    int operator()(int row, int col) const noexcept { return steps[static_cast<std::size_t>(row * 8 + col)]; }

    friend bool operator==(const QTable&, const QTable&) = default;
};

/// Quantizer output, natural order.
struct LevelBlock {
    std::array<int, 64> levels{};

    friend bool operator==(const LevelBlock&, const LevelBlock&) = default;
};

// Standard luminance table (ITU-T T.81 Annex K, Table K.1).
inline constexpr std::array<int, 64> kLuminanceBase = {
    16, 11, 10, 16, 24,  40,  51,  61,  //
    12, 12, 14, 19, 26,  58,  60,  55,  //
    14, 13, 16, 24, 40,  57,  69,  56,  //
    14, 17, 22, 29, 51,  87,  80,  62,  //
    18, 22, 37, 56, 68,  109, 103, 77,  //
    24, 35, 55, 64, 81,  104, 113, 92,  //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
};

// kZigzag[k] is the natural index of the k-th coefficient in scan order.
inline constexpr std::array<int, 64> kZigzag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,  //
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28, //
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51, //
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
};

inline void check_quality(int quality) {
    if (quality < 1 || quality > 100)
        throw Error(ErrorCode::QualityOutOfRange, "quality " + std::to_string(quality) + " not in 1..100");
}

/// IJG scaling of the base luminance table.
inline QTable quality_table(int quality) {
    check_quality(quality);
    const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
    QTable table;
    for (std::size_t i = 0; i < 64; ++i)
        table.steps[i] = std::clamp((kLuminanceBase[i] * scale + 50) / 100, 1, 255);
    return table;
}

/// Nearest integer, ties away from zero.
inline long round_half_away(double v) noexcept { return std::lround(v); }

inline LevelBlock quantize(const CoeffBlock& coeffs, const QTable& q) {
    LevelBlock out;
    for (std::size_t i = 0; i < 64; ++i)
        out.levels[i] = static_cast<int>(round_half_away(coeffs.coeffs[i] / q.steps[i]));
    return out;
}

inline CoeffBlock dequantize(const LevelBlock& levels, const QTable& q) {
    CoeffBlock out;
    for (std::size_t i = 0; i < 64; ++i)
        out.coeffs[i] = static_cast<double>(levels.levels[i]) * q.steps[i];
    return out;
}

template <typename T>
std::array<T, 64> to_zigzag(const std::array<T, 64>& natural) {
    std::array<T, 64> out{};
    for (std::size_t k = 0; k < 64; ++k)
        out[k] = natural[static_cast<std::size_t>(kZigzag[k])];
    return out;
}

template <typename T>
std::array<T, 64> from_zigzag(const std::array<T, 64>& scan) {
    std::array<T, 64> out{};
    for (std::size_t k = 0; k < 64; ++k)
        out[static_cast<std::size_t>(kZigzag[k])] = scan[k];
    return out;
}

inline std::array<int, 64> zigzag(const LevelBlock& levels) { return to_zigzag(levels.levels); }

} // namespace saw
