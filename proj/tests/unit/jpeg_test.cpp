#include <random>
#include <string>

#include <gtest/gtest.h>

#include "golden_pattern.hpp"
#include "saw/digest.hpp"
#include "saw/jpeg.hpp"
#include "saw/pgm.hpp"
#include "saw/phantom.hpp"
#include "saw/simulate.hpp"

namespace {

using namespace saw;

ErrorCode decode_error(const std::vector<std::uint8_t>& bytes) {
    try {
        decode_jpeg(bytes);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::IoError; // sentinel: decoded fine
}

std::size_t find_marker(const std::vector<std::uint8_t>& bytes, std::uint8_t marker) {
    for (std::size_t i = 0; i + 1 < bytes.size(); ++i)
        if (bytes[i] == 0xFF && bytes[i + 1] == marker)
            return i;
    return bytes.size();
}

TEST(Jpeg, MarkerFraming) {
    const JpegBytes j = encode_jpeg(gen_phantom(64, 64, 1), 75);
    ASSERT_GE(j.bytes.size(), 4u);
    EXPECT_EQ(j.bytes[0], 0xFF);
    EXPECT_EQ(j.bytes[1], 0xD8);
    EXPECT_EQ(j.bytes[j.bytes.size() - 2], 0xFF);
    EXPECT_EQ(j.bytes[j.bytes.size() - 1], 0xD9);
    EXPECT_EQ(j.width, 64);
    EXPECT_EQ(j.height, 64);
    EXPECT_EQ(j.quality, 75);
}

TEST(Jpeg, DqtCarriesQualityTableInZigzagOrder) {
    const JpegBytes j = encode_jpeg(Image(8, 8, 0), 60);
    const std::size_t dqt = find_marker(j.bytes, 0xDB);
    ASSERT_LT(dqt + 69, j.bytes.size());
    const QTable expected = quality_table(60);
    for (std::size_t k = 0; k < 64; ++k)
        EXPECT_EQ(j.bytes[dqt + 5 + k], expected.steps[static_cast<std::size_t>(kZigzag[k])]);
}

TEST(Jpeg, DecodeMatchesSimulatorBitExact) {
    std::mt19937 rng(1);
    Image noise(37, 29);
    for (auto& p : noise.pixels())
        p = static_cast<std::uint8_t>(rng() & 0xFF);
    Image blocks(64, 64);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x)
            blocks.at(x, y) = ((x / 8 + y / 8) % 2) ? 255 : 0; // large DC swings

    for (const Image& img : {gen_phantom(256, 192, 3), noise, blocks, golden_pattern()}) {
        for (int q : {1, 30, 60, 90, 100}) {
            SCOPED_TRACE("quality " + std::to_string(q));
            const Image decoded = decode_jpeg(encode_jpeg(img, q));
            EXPECT_EQ(decoded.width(), img.width());
            EXPECT_EQ(decoded.height(), img.height());
            EXPECT_EQ(decoded, roundtrip(img, q, LevelShift::on));
        }
    }
}

TEST(Jpeg, CoefficientsSurviveEntropyLayer) {
    const Image img = gen_phantom(128, 128, 9);
    const CoefficientImage forward = forward_coefficients(img, 45);
    const CoefficientImage parsed = decode_coefficients(encode_jpeg(img, 45).bytes);
    EXPECT_EQ(parsed.qtable, forward.qtable);
    ASSERT_EQ(parsed.blocks.size(), forward.blocks.size());
    for (std::size_t i = 0; i < parsed.blocks.size(); ++i)
        EXPECT_EQ(parsed.blocks[i], forward.blocks[i]) << "block " << i;
}

TEST(Jpeg, EntropyDataIsByteStuffed) {
    std::mt19937 rng(2);
    Image noise(64, 64);
    for (auto& p : noise.pixels())
        p = static_cast<std::uint8_t>(rng() & 0xFF);
    const auto bytes = encode_jpeg(noise, 95).bytes;
    const std::size_t sos = find_marker(bytes, 0xDA);
    const std::size_t data_start = sos + 2 + 8;
    int stuffed = 0;
    for (std::size_t i = data_start; i + 2 < bytes.size(); ++i) {
        if (bytes[i] == 0xFF) {
            EXPECT_EQ(bytes[i + 1], 0x00) << "unstuffed 0xFF at " << i;
            ++stuffed;
            ++i;
        }
    }
    EXPECT_GT(stuffed, 0);
}

TEST(Jpeg, SizeGrowsWithQuality) {
    const Image img = gen_phantom(800, 600, 1);
    EXPECT_LT(encode_jpeg(img, 30).bytes.size(), encode_jpeg(img, 90).bytes.size());
    const double pct = (1.0 - static_cast<double>(encode_jpeg(img, 60).bytes.size()) / 480000.0) * 100.0;
    EXPECT_GE(pct, 85.0);
    EXPECT_LE(pct, 95.0);
}

TEST(Jpeg, TruncatedStreams) {
    const auto bytes = encode_jpeg(gen_phantom(64, 64, 1), 80).bytes;
    const std::size_t sos = find_marker(bytes, 0xDA);
    for (std::size_t cut : {std::size_t{3}, std::size_t{25}, sos + 4, sos + 40, bytes.size() - 10, bytes.size() - 2}) {
        SCOPED_TRACE("cut at " + std::to_string(cut));
        std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
        EXPECT_EQ(decode_error(part), ErrorCode::TruncatedStream);
    }
}

TEST(Jpeg, RejectsUnsupportedModes) {
    const auto good = encode_jpeg(Image(16, 16, 100), 75).bytes;
    const std::size_t sof = find_marker(good, 0xC0);

    auto progressive = good;
    progressive[sof + 1] = 0xC2;
    EXPECT_EQ(decode_error(progressive), ErrorCode::UnsupportedMode);

    auto twelve_bit = good;
    twelve_bit[sof + 4] = 12;
    EXPECT_EQ(decode_error(twelve_bit), ErrorCode::UnsupportedMode);

    auto three_components = good;
    three_components[sof + 9] = 3;
    EXPECT_EQ(decode_error(three_components), ErrorCode::UnsupportedMode);

    auto no_soi = good;
    no_soi[1] = 0xD9;
    EXPECT_EQ(decode_error(no_soi), ErrorCode::BadMarker);

    // DRI with a non-zero interval, spliced in after SOI.
    auto restart = good;
    const std::vector<std::uint8_t> dri = {0xFF, 0xDD, 0x00, 0x04, 0x00, 0x10};
    restart.insert(restart.begin() + 2, dri.begin(), dri.end());
    EXPECT_EQ(decode_error(restart), ErrorCode::UnsupportedMode);
}

TEST(Jpeg, SkipsForeignAppAndCommentSegments) {
    const Image img = gen_phantom(64, 64, 4);
    auto bytes = encode_jpeg(img, 70).bytes;
    const std::vector<std::uint8_t> com = {0xFF, 0xFE, 0x00, 0x05, 'h', 'i', '!'};
    bytes.insert(bytes.begin() + 2, com.begin(), com.end());
    EXPECT_EQ(decode_jpeg(bytes), roundtrip(img, 70));
}

TEST(Jpeg, GoldenBytestream) {
    const auto golden = read_file(std::string(SAW_GOLDEN_DIR) + "/pattern_61x45_q75.jpg");
    const auto encoded = encode_jpeg(golden_pattern(), 75).bytes;
    EXPECT_EQ(encoded, golden);
    EXPECT_EQ(digest(encoded).hex(), digest(golden).hex());
    EXPECT_EQ(decode_jpeg(golden), roundtrip(golden_pattern(), 75));
}

} // namespace
