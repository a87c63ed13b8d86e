#pragma once

// Orthonormal 8x8 type-II DCT and its inverse, evaluated as separable
// cosine sums with the alpha_p * alpha_q normalisation applied once per
// coefficient. The DC normalisation is exactly 1/8, so DC-only blocks
// transform without rounding error.

#include <array>
#include <cmath>
#include <numbers>

#include "image.hpp"

namespace saw {

enum class LevelShift : bool { off = false, on = true };

inline constexpr double kLevelShift = 128.0;

struct CoeffBlock {
    std::array<double, 64> coeffs{};

    double& operator()(int p, int q) noexcept { return coeffs[static_cast<std::size_t>(p * 8 + q)]; }
    double operator()(int p, int q) const noexcept { return coeffs[static_cast<std::size_t>(p * 8 + q)]; }

    friend bool operator==(const CoeffBlock&, const CoeffBlock&) = default;
};

namespace detail {

struct DctTables {
    std::array<std::array<double, 8>, 8> cosine{}; // cosine[u][x] = cos(pi (2x+1) u / 16)
    std::array<std::array<double, 8>, 8> norm{};   // norm[p][q] = alpha_p * alpha_q

    DctTables() {
        for (int u = 0; u < 8; ++u)
            for (int x = 0; x < 8; ++x)
                cosine[u][x] = u == 0 ? 1.0 : std::cos(std::numbers::pi * (2 * x + 1) * u / 16.0);
        const double mixed = std::numbers::sqrt2 / 8.0;
        for (int p = 0; p < 8; ++p)
            for (int q = 0; q < 8; ++q)
                norm[p][q] = (p == 0 && q == 0) ? 0.125 : (p == 0 || q == 0) ? mixed : 0.25;
    }
};

inline const DctTables& dct_tables() {
    static const DctTables tables;
    return tables;
}

} // namespace detail

inline CoeffBlock dct2(const Block& block, LevelShift shift) {
    const auto& t = detail::dct_tables();
    const double offset = shift == LevelShift::on ? kLevelShift : 0.0;

    // Columns first: tmp[p][n] = sum_m X[m][n] cos[p][m].
    std::array<std::array<double, 8>, 8> tmp{};
    for (int p = 0; p < 8; ++p)
        for (int n = 0; n < 8; ++n) {
            double s = 0.0;
            for (int m = 0; m < 8; ++m)
                s += (block(m, n) - offset) * t.cosine[p][m];
            tmp[p][n] = s;
        }

    CoeffBlock out;
    for (int p = 0; p < 8; ++p)
        for (int q = 0; q < 8; ++q) {
            double s = 0.0;
            for (int n = 0; n < 8; ++n)
                s += tmp[p][n] * t.cosine[q][n];
            out(p, q) = t.norm[p][q] * s;
        }
    return out;
}

/// Real-valued inverse; rounding to pixels is the caller's business.
inline Block idct2(const CoeffBlock& coeffs, LevelShift shift) {
    const auto& t = detail::dct_tables();
    const double offset = shift == LevelShift::on ? kLevelShift : 0.0;

    std::array<std::array<double, 8>, 8> scaled{};
    for (int p = 0; p < 8; ++p)
        for (int q = 0; q < 8; ++q)
            scaled[p][q] = t.norm[p][q] * coeffs(p, q);

    // tmp[m][q] = sum_p scaled[p][q] cos[p][m]
    std::array<std::array<double, 8>, 8> tmp{};
    for (int m = 0; m < 8; ++m)
        for (int q = 0; q < 8; ++q) {
            double s = 0.0;
            for (int p = 0; p < 8; ++p)
                s += scaled[p][q] * t.cosine[p][m];
            tmp[m][q] = s;
        }

    Block out;
    for (int m = 0; m < 8; ++m)
        for (int n = 0; n < 8; ++n) {
            double s = 0.0;
            for (int q = 0; q < 8; ++q)
                s += tmp[m][q] * t.cosine[q][n];
            out(m, n) = s + offset;
        }
    return out;
}

} // namespace saw
