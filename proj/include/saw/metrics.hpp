#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "error.hpp"
#include "image.hpp"

namespace saw {

/// Peak signal-to-noise ratio. Identical images have no finite value.
class Psnr {
public:
    static Psnr infinite() noexcept { return Psnr{}; }
    static Psnr finite(double db) noexcept { return Psnr{db}; }

    bool is_infinite() const noexcept { return !db_.has_value(); }
    double db() const { return db_.value(); }

    std::string to_string(int precision = 2) const;

    friend bool operator==(const Psnr&, const Psnr&) = default;

private:
    Psnr() = default;
    explicit Psnr(double db) : db_(db) {}

    std::optional<double> db_;
};

inline std::string Psnr::to_string(int precision) const {
    if (is_infinite())
        return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, *db_);
    return buf;
}

inline double mse(const Image& a, const Image& b) {
    if (!a.same_shape(b))
        throw Error(ErrorCode::DimensionMismatch, "images differ in size");
    std::uint64_t sum = 0;
    auto pa = a.pixels();
    auto pb = b.pixels();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const int d = int(pa[i]) - int(pb[i]);
        sum += static_cast<std::uint64_t>(d * d);
    }
    return static_cast<double>(sum) / static_cast<double>(pa.size());
}

inline Psnr psnr(const Image& a, const Image& b) {
    const double err = mse(a, b);
    if (err == 0.0)
        return Psnr::infinite();
    return Psnr::finite(10.0 * std::log10(255.0 * 255.0 / err));
}

inline std::array<std::uint64_t, 256> histogram(const Image& img) {
    std::array<std::uint64_t, 256> bins{};
    for (auto v : img.pixels())
        ++bins[v];
    return bins;
}

} // namespace saw
