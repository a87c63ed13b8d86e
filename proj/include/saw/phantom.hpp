#pragma once

// Deterministic synthetic ultrasound-like test image: a speckled sector
// ("fan") of tissue on an exactly-zero background.
//
// Randomness comes from std::minstd_rand (Park-Miller LCG, multiplier 48271,
// modulus 2^31 - 1), whose output sequence is fixed by the C++ standard.
// Every pixel is computed with integer arithmetic only, so output is
// bit-identical across compilers and platforms.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "error.hpp"
#include "image.hpp"

namespace saw {

struct PhantomGeometry {
    int apex_x = 0;
    int apex_y = 0;
    int r_near = 0;
    int r_far = 0;
    int half_span = 0; // max |dx| from the apex column
    int margin = 0;
};

inline PhantomGeometry phantom_geometry(int width, int height) {
    PhantomGeometry g;
    g.margin = std::max(3 * kBlockSize, std::min(width, height) / 15);
    g.apex_x = width / 2;
    g.apex_y = g.margin;
    g.r_far = height - 2 * g.margin - 1;
    g.r_near = std::max(1, g.r_far / 8);
    g.half_span = width / 2 - g.margin - 1;
    return g;
}

inline Image gen_phantom(int width, int height, std::uint32_t seed) {
    if (width % kBlockSize != 0 || height % kBlockSize != 0)
        throw Error(ErrorCode::InvalidDimensions, "phantom dimensions must be multiples of 8");
    if (width < 64 || height < 64)
        throw Error(ErrorCode::InvalidDimensions, "phantom needs at least 64x64 pixels");

    const PhantomGeometry g = phantom_geometry(width, height);
    std::minstd_rand rng(seed == 0 ? 1u : seed);

    // Coarse speckle lattice, bilinearly interpolated: cell 4 px.
    constexpr int cell = 4;
    const int gw = width / cell + 2;
    const int gh = height / cell + 2;
    std::vector<int> lattice(static_cast<std::size_t>(gw) * static_cast<std::size_t>(gh));
    for (auto& v : lattice)
        v = static_cast<int>(rng() >> 23); // 0..255
    auto lat = [&](int gx, int gy) { return lattice[static_cast<std::size_t>(gy) * gw + gx]; };

    // Bright elliptical "organ" and a dark cyst, placed relative to the fan.
    const int organ_cx = g.apex_x - g.r_far / 6 + static_cast<int>(rng() % 16);
    const int organ_cy = g.apex_y + g.r_far / 2;
    const int organ_rx = std::max(2, g.r_far / 5);
    const int organ_ry = std::max(2, g.r_far / 8);
    const int cyst_cx = g.apex_x + g.r_far / 5;
    const int cyst_cy = g.apex_y + (g.r_far * 3) / 4;
    const int cyst_r = std::max(2, g.r_far / 12);

    auto inside_ellipse = [](long dx, long dy, long rx, long ry) {
        return dx * dx * ry * ry + dy * dy * rx * rx <= rx * rx * ry * ry;
    };

    const long rn2 = long(g.r_near) * g.r_near;
    const long rf2 = long(g.r_far) * g.r_far;

    Image img(width, height, 0);
    for (int y = 0; y < height; ++y) {
        const long dy = y - g.apex_y;
        if (dy <= 0)
            continue;
        for (int x = 0; x < width; ++x) {
            const long dx = x - g.apex_x;
            const long r2 = dx * dx + dy * dy;
            // Sector: 35 degree half-angle approximated by |dx| <= 0.7 * dy.
            if (r2 < rn2 || r2 > rf2 || 10 * (dx < 0 ? -dx : dx) > 7 * dy || (dx < 0 ? -dx : dx) > g.half_span)
                continue;

            const int gx = x / cell, gy = y / cell;
            const int fx = x % cell, fy = y % cell;
            const int speckle = ((cell - fx) * (cell - fy) * lat(gx, gy) + fx * (cell - fy) * lat(gx + 1, gy) +
                                 (cell - fx) * fy * lat(gx, gy + 1) + fx * fy * lat(gx + 1, gy + 1)) /
                                (cell * cell);

            // Depth attenuation: 150 at the apex falling to 90 at the far edge.
            int base = 150 - static_cast<int>((60 * dy) / g.r_far);
            if (inside_ellipse(x - organ_cx, y - organ_cy, organ_rx, organ_ry))
                base += 60;
            if (inside_ellipse(x - cyst_cx, y - cyst_cy, cyst_r, cyst_r))
                base /= 4;

            const int value = (base * (64 + speckle)) / 192;
            img.at(x, y) = static_cast<std::uint8_t>(std::clamp(value, 30, 255));
        }
    }
    return img;
}

} // namespace saw
