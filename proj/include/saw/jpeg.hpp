#pragma once

// Baseline sequential JFIF codec for single-component 8-bit images.
//
// The encoder always writes: SOI, JFIF APP0, one DQT (8-bit, table 0), SOF0,
// one DHT segment with the Annex K luminance DC/AC tables, SOS, entropy-coded
// data, EOI. No restart intervals.
//
// The decoder accepts any single-component baseline stream: APPn and COM
// segments are skipped, DRI must be zero, and multiple DQT/DHT tables are
// honoured. Progressive, lossless, arithmetic, 12-bit, and multi-component
// streams are rejected.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "image.hpp"
#include "quant.hpp"
#include "simulate.hpp"

namespace saw {

struct JpegBytes {
    std::vector<std::uint8_t> bytes;
    int width = 0;
    int height = 0;
    int quality = 0;
};

struct HuffmanSpec {
    std::array<std::uint8_t, 16> counts{}; // number of codes of length 1..16
    std::vector<std::uint8_t> symbols;
};

inline const HuffmanSpec& annex_k_dc_luminance() {
    static const HuffmanSpec spec{{0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0},
                                  {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}};
    return spec;
}

inline const HuffmanSpec& annex_k_ac_luminance() {
    static const HuffmanSpec spec{
        {0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 0x7d},
        {0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61, 0x07, 0x22, 0x71,
         0x14, 0x32, 0x81, 0x91, 0xa1, 0x08, 0x23, 0x42, 0xb1, 0xc1, 0x15, 0x52, 0xd1, 0xf0, 0x24, 0x33, 0x62, 0x72,
         0x82, 0x09, 0x0a, 0x16, 0x17, 0x18, 0x19, 0x1a, 0x25, 0x26, 0x27, 0x28, 0x29, 0x2a, 0x34, 0x35, 0x36, 0x37,
         0x38, 0x39, 0x3a, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48, 0x49, 0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59,
         0x5a, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6a, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7a, 0x83,
         0x84, 0x85, 0x86, 0x87, 0x88, 0x89, 0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9a, 0xa2, 0xa3,
         0xa4, 0xa5, 0xa6, 0xa7, 0xa8, 0xa9, 0xaa, 0xb2, 0xb3, 0xb4, 0xb5, 0xb6, 0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3,
         0xc4, 0xc5, 0xc6, 0xc7, 0xc8, 0xc9, 0xca, 0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda, 0xe1, 0xe2,
         0xe3, 0xe4, 0xe5, 0xe6, 0xe7, 0xe8, 0xe9, 0xea, 0xf1, 0xf2, 0xf3, 0xf4, 0xf5, 0xf6, 0xf7, 0xf8, 0xf9, 0xfa}};
    return spec;
}

namespace detail {

struct HuffmanCode {
    std::uint16_t code = 0;
    std::uint8_t length = 0; // 0 = symbol not in table
};

// Canonical code assignment (T.81 Annex C).
inline std::array<HuffmanCode, 256> build_encoder_table(const HuffmanSpec& spec) {
    std::array<HuffmanCode, 256> table{};
    std::uint32_t code = 0;
    std::size_t k = 0;
    for (int len = 1; len <= 16; ++len) {
        for (int i = 0; i < spec.counts[static_cast<std::size_t>(len - 1)]; ++i)
            table[spec.symbols[k++]] = {static_cast<std::uint16_t>(code++), static_cast<std::uint8_t>(len)};
        code <<= 1;
    }
    return table;
}

class BitWriter {
public:
    explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

    void put(std::uint32_t bits, int count) {
        for (int i = count - 1; i >= 0; --i) {
            acc_ = static_cast<std::uint8_t>((acc_ << 1) | ((bits >> i) & 1u));
            if (++filled_ == 8)
                emit();
        }
    }

    // Pad the final partial byte with 1-bits.
    void flush() {
        while (filled_ != 0)
            put(1, 1);
    }

private:
    void emit() {
        out_.push_back(acc_);
        if (acc_ == 0xFF)
            out_.push_back(0x00);
        acc_ = 0;
        filled_ = 0;
    }

    std::vector<std::uint8_t>& out_;
    std::uint8_t acc_ = 0;
    int filled_ = 0;
};

inline int magnitude_category(int v) noexcept {
    unsigned a = static_cast<unsigned>(v < 0 ? -v : v);
    int n = 0;
    while (a) {
        ++n;
        a >>= 1;
    }
    return n;
}

inline std::uint32_t magnitude_bits(int v, int category) noexcept {
    return static_cast<std::uint32_t>(v >= 0 ? v : v + (1 << category) - 1);
}

inline void put_u16(std::vector<std::uint8_t>& out, unsigned v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

inline void put_marker(std::vector<std::uint8_t>& out, std::uint8_t marker) {
    out.push_back(0xFF);
    out.push_back(marker);
}

inline void put_huffman_segment_body(std::vector<std::uint8_t>& out, std::uint8_t class_and_id, const HuffmanSpec& spec) {
    out.push_back(class_and_id);
    out.insert(out.end(), spec.counts.begin(), spec.counts.end());
    out.insert(out.end(), spec.symbols.begin(), spec.symbols.end());
}

} // namespace detail

/// Quantized levels of every block, raster order, plus the table used.
struct CoefficientImage {
    int width = 0;
    int height = 0;
    QTable qtable;
    std::vector<LevelBlock> blocks;
};

inline CoefficientImage forward_coefficients(const Image& img, int quality) {
    CoefficientImage ci{img.width(), img.height(), quality_table(quality), {}};
    const Image padded = pad_to_blocks(img);
    const auto grid = block_grid(padded);
    ci.blocks.reserve(grid.size());
    for (const BlockPos pos : grid)
        ci.blocks.push_back(quantize(dct2(load_block(padded, pos), LevelShift::on), ci.qtable));
    return ci;
}

inline JpegBytes encode_jpeg(const Image& img, int quality) {
    using namespace detail;
    if (img.width() > 65535 || img.height() > 65535)
        throw Error(ErrorCode::InvalidDimensions, "JPEG dimensions are limited to 65535");
    const CoefficientImage ci = forward_coefficients(img, quality);

    std::vector<std::uint8_t> out;
    out.reserve(img.size() / 4 + 1024);

    put_marker(out, 0xD8);

    // JFIF APP0: version 1.01, aspect ratio 1:1, no thumbnail.
    put_marker(out, 0xE0);
    put_u16(out, 16);
    for (char c : {'J', 'F', 'I', 'F', '\0'})
        out.push_back(static_cast<std::uint8_t>(c));
    out.insert(out.end(), {0x01, 0x01, 0x00});
    put_u16(out, 1);
    put_u16(out, 1);
    out.insert(out.end(), {0x00, 0x00});

    put_marker(out, 0xDB);
    put_u16(out, 2 + 1 + 64);
    out.push_back(0x00);
    for (int step : to_zigzag(ci.qtable.steps))
        out.push_back(static_cast<std::uint8_t>(step));

    put_marker(out, 0xC0);
    put_u16(out, 2 + 6 + 3);
    out.push_back(8);
    put_u16(out, static_cast<unsigned>(img.height()));
    put_u16(out, static_cast<unsigned>(img.width()));
    out.push_back(1);
    out.insert(out.end(), {0x01, 0x11, 0x00});

    const HuffmanSpec& dc_spec = annex_k_dc_luminance();
    const HuffmanSpec& ac_spec = annex_k_ac_luminance();
    put_marker(out, 0xC4);
    put_u16(out, static_cast<unsigned>(2 + 17 + dc_spec.symbols.size() + 17 + ac_spec.symbols.size()));
    put_huffman_segment_body(out, 0x00, dc_spec);
    put_huffman_segment_body(out, 0x10, ac_spec);

    put_marker(out, 0xDA);
    put_u16(out, 2 + 1 + 2 + 3);
    out.insert(out.end(), {0x01, 0x01, 0x00, 0x00, 63, 0x00});

    const auto dc_codes = build_encoder_table(dc_spec);
    const auto ac_codes = build_encoder_table(ac_spec);
    BitWriter bits(out);
    auto put_symbol = [&bits](const std::array<HuffmanCode, 256>& table, std::uint8_t symbol) {
        bits.put(table[symbol].code, table[symbol].length);
    };

    // DC prediction runs across blocks in raster order.
    int previous_dc = 0;
    for (const LevelBlock& block : ci.blocks) {
        const auto scan = zigzag(block);

        const int diff = scan[0] - previous_dc;
        previous_dc = scan[0];
        const int dc_cat = magnitude_category(diff);
        put_symbol(dc_codes, static_cast<std::uint8_t>(dc_cat));
        if (dc_cat)
            bits.put(magnitude_bits(diff, dc_cat), dc_cat);

        int run = 0;
        for (std::size_t k = 1; k < 64; ++k) {
            const int v = scan[k];
            if (v == 0) {
                ++run;
                continue;
            }
            for (; run > 15; run -= 16)
                put_symbol(ac_codes, 0xF0);
            const int cat = magnitude_category(v);
            put_symbol(ac_codes, static_cast<std::uint8_t>((run << 4) | cat));
            bits.put(magnitude_bits(v, cat), cat);
            run = 0;
        }
        if (run > 0)
            put_symbol(ac_codes, 0x00);
    }
    bits.flush();

    put_marker(out, 0xD9);
    return JpegBytes{std::move(out), img.width(), img.height(), quality};
}

namespace detail {

class HuffmanDecoder {
public:
    HuffmanDecoder() = default;

    explicit HuffmanDecoder(const HuffmanSpec& spec) : symbols_(spec.symbols) {
        std::int32_t code = 0;
        std::int32_t k = 0;
        for (int len = 1; len <= 16; ++len) {
            const int count = spec.counts[static_cast<std::size_t>(len - 1)];
            valptr_[len] = k;
            mincode_[len] = code;
            code += count;
            k += count;
            maxcode_[len] = count ? code - 1 : -1;
            if (code > (1 << len))
                throw Error(ErrorCode::CorruptStream, "invalid Huffman code lengths");
            code <<= 1;
        }
        valid_ = true;
    }

    bool valid() const noexcept { return valid_; }

    template <typename NextBit>
    std::uint8_t decode(NextBit&& next_bit) const {
        std::int32_t code = 0;
        for (int len = 1; len <= 16; ++len) {
            code = (code << 1) | next_bit();
            if (code <= maxcode_[len])
                return symbols_[static_cast<std::size_t>(valptr_[len] + code - mincode_[len])];
        }
        throw Error(ErrorCode::CorruptStream, "bad Huffman code");
    }

private:
    std::vector<std::uint8_t> symbols_;
    std::array<std::int32_t, 17> mincode_{};
    std::array<std::int32_t, 17> maxcode_{};
    std::array<std::int32_t, 17> valptr_{};
    bool valid_ = false;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::size_t pos() const noexcept { return pos_; }
    void seek(std::size_t p) noexcept { pos_ = p; }
    bool at_end() const noexcept { return pos_ >= data_.size(); }
    std::span<const std::uint8_t> data() const noexcept { return data_; }

    std::uint8_t u8() {
        if (pos_ >= data_.size())
            throw Error(ErrorCode::TruncatedStream, "unexpected end of JPEG data");
        return data_[pos_++];
    }

    unsigned u16() {
        const unsigned hi = u8();
        return (hi << 8) | u8();
    }

    std::span<const std::uint8_t> take(std::size_t n) {
        if (data_.size() - pos_ < n)
            throw Error(ErrorCode::TruncatedStream, "segment runs past end of data");
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

// Entropy-coded segment reader with 0xFF00 unstuffing. Hitting a marker
// or the end of the data while bits are still needed is a truncation.
class BitReader {
public:
    explicit BitReader(ByteReader& bytes) : bytes_(bytes) {}

    int bit() {
        if (available_ == 0)
            fill();
        --available_;
        return (current_ >> available_) & 1;
    }

    int bits(int count) {
        int v = 0;
        for (int i = 0; i < count; ++i)
            v = (v << 1) | bit();
        return v;
    }

private:
    void fill() {
        if (bytes_.at_end())
            throw Error(ErrorCode::TruncatedStream, "entropy-coded data ends early");
        const std::uint8_t b = bytes_.u8();
        if (b == 0xFF) {
            if (bytes_.at_end())
                throw Error(ErrorCode::TruncatedStream, "entropy-coded data ends early");
            const std::uint8_t next = bytes_.u8();
            if (next != 0x00) {
                bytes_.seek(bytes_.pos() - 2);
                throw Error(ErrorCode::TruncatedStream, "marker inside entropy-coded data before scan completed");
            }
        }
        current_ = b;
        available_ = 8;
    }

    ByteReader& bytes_;
    std::uint8_t current_ = 0;
    int available_ = 0;
};

inline int extend(int v, int category) noexcept {
    return v < (1 << (category - 1)) ? v - (1 << category) + 1 : v;
}

} // namespace detail

/// Parses a baseline grayscale stream down to quantized levels.
inline CoefficientImage decode_coefficients(std::span<const std::uint8_t> data) {
    using namespace detail;
    ByteReader in(data);
    if (data.size() < 2 || in.u8() != 0xFF || in.u8() != 0xD8)
        throw Error(ErrorCode::BadMarker, "missing SOI marker");

    std::array<std::optional<QTable>, 4> qtables;
    std::array<HuffmanDecoder, 4> dc_tables;
    std::array<HuffmanDecoder, 4> ac_tables;
    int width = 0, height = 0, qt_index = -1, component_id = -1;
    bool have_frame = false;

    for (;;) {
        std::uint8_t b = in.u8();
        if (b != 0xFF)
            throw Error(ErrorCode::BadMarker, "expected a marker");
        std::uint8_t marker = in.u8();
        while (marker == 0xFF) // fill bytes
            marker = in.u8();

        if (marker == 0xD9)
            throw Error(ErrorCode::BadMarker, "EOI before any scan");
        if (marker == 0xD8 || (marker >= 0xD0 && marker <= 0xD7) || marker == 0x01 || marker == 0x00)
            throw Error(ErrorCode::BadMarker, "unexpected standalone marker");

        const unsigned length = in.u16();
        if (length < 2)
            throw Error(ErrorCode::BadMarker, "segment length too short");
        ByteReader seg(in.take(length - 2));

        switch (marker) {
        case 0xDB: // DQT
            while (!seg.at_end()) {
                const std::uint8_t pq_tq = seg.u8();
                if ((pq_tq >> 4) != 0)
                    throw Error(ErrorCode::UnsupportedMode, "16-bit quantization tables are not baseline");
                if ((pq_tq & 15) > 3)
                    throw Error(ErrorCode::BadMarker, "quantization table id out of range");
                std::array<int, 64> scan{};
                for (auto& v : scan) {
                    v = seg.u8();
                    if (v == 0)
                        throw Error(ErrorCode::CorruptStream, "zero quantizer step");
                }
                qtables[pq_tq & 15] = QTable{from_zigzag(scan)};
            }
            break;
        case 0xC4: // DHT
            while (!seg.at_end()) {
                const std::uint8_t tc_th = seg.u8();
                const int table_class = tc_th >> 4, id = tc_th & 15;
                if (table_class > 1 || id > 3)
                    throw Error(ErrorCode::BadMarker, "Huffman table class/id out of range");
                HuffmanSpec spec;
                std::size_t total = 0;
                for (auto& c : spec.counts) {
                    c = seg.u8();
                    total += c;
                }
                if (total > 256)
                    throw Error(ErrorCode::CorruptStream, "too many Huffman symbols");
                auto syms = seg.take(total);
                spec.symbols.assign(syms.begin(), syms.end());
                (table_class == 0 ? dc_tables : ac_tables)[static_cast<std::size_t>(id)] = HuffmanDecoder(spec);
            }
            break;
        case 0xC0: { // SOF0
            if (have_frame)
                throw Error(ErrorCode::BadMarker, "more than one frame header");
            if (seg.u8() != 8)
                throw Error(ErrorCode::UnsupportedMode, "only 8-bit sample precision is supported");
            height = static_cast<int>(seg.u16());
            width = static_cast<int>(seg.u16());
            if (height == 0 || width == 0)
                throw Error(ErrorCode::UnsupportedMode, "zero frame dimension (DNL) is not supported");
            if (seg.u8() != 1)
                throw Error(ErrorCode::UnsupportedMode, "only single-component (grayscale) images are supported");
            component_id = seg.u8();
            seg.u8(); // sampling factors are irrelevant for one component
            qt_index = seg.u8();
            if (qt_index > 3)
                throw Error(ErrorCode::BadMarker, "quantization table id out of range");
            have_frame = true;
            break;
        }
        case 0xC1: case 0xC2: case 0xC3: case 0xC5: case 0xC6: case 0xC7:
        case 0xC9: case 0xCA: case 0xCB: case 0xCD: case 0xCE: case 0xCF:
            throw Error(ErrorCode::UnsupportedMode, "only baseline sequential Huffman JPEG is supported");
        case 0xDD: // DRI
            if (seg.u16() != 0)
                throw Error(ErrorCode::UnsupportedMode, "restart intervals are not supported");
            break;
        case 0xDA: { // SOS
            if (!have_frame)
                throw Error(ErrorCode::BadMarker, "scan before frame header");
            if (seg.u8() != 1)
                throw Error(ErrorCode::UnsupportedMode, "scan must contain exactly one component");
            if (seg.u8() != component_id)
                throw Error(ErrorCode::BadMarker, "scan references unknown component");
            const std::uint8_t td_ta = seg.u8();
            const std::uint8_t ss = seg.u8(), se = seg.u8(), ah_al = seg.u8();
            if (ss != 0 || se != 63 || ah_al != 0)
                throw Error(ErrorCode::UnsupportedMode, "progressive scan parameters");
            if ((td_ta >> 4) > 3 || (td_ta & 15) > 3)
                throw Error(ErrorCode::BadMarker, "Huffman table id out of range");
            const HuffmanDecoder& dc = dc_tables[td_ta >> 4];
            const HuffmanDecoder& ac = ac_tables[td_ta & 15];
            if (!dc.valid() || !ac.valid())
                throw Error(ErrorCode::BadMarker, "scan references undefined Huffman table");
            if (!qtables[static_cast<std::size_t>(qt_index)])
                throw Error(ErrorCode::BadMarker, "frame references undefined quantization table");

            CoefficientImage ci{width, height, *qtables[static_cast<std::size_t>(qt_index)], {}};
            const std::size_t count =
                static_cast<std::size_t>(blocks_along(width)) * static_cast<std::size_t>(blocks_along(height));
            ci.blocks.resize(count);

            BitReader bits(in);
            auto next_bit = [&bits] { return bits.bit(); };
            int previous_dc = 0;
            for (auto& block : ci.blocks) {
                std::array<int, 64> scan{};
                const int dc_cat = dc.decode(next_bit);
                if (dc_cat > 11)
                    throw Error(ErrorCode::CorruptStream, "DC difference category out of range");
                const int diff = dc_cat ? extend(bits.bits(dc_cat), dc_cat) : 0;
                previous_dc += diff;
                scan[0] = previous_dc;
                for (int k = 1; k < 64;) {
                    const std::uint8_t rs = ac.decode(next_bit);
                    const int run = rs >> 4, cat = rs & 15;
                    if (cat == 0) {
                        if (run != 15)
                            break; // EOB
                        k += 16;
                        continue;
                    }
                    k += run;
                    if (k > 63 || cat > 10)
                        throw Error(ErrorCode::CorruptStream, "AC coefficient out of range");
                    scan[static_cast<std::size_t>(k++)] = extend(bits.bits(cat), cat);
                }
                block.levels = from_zigzag(scan);
            }

            // Skip to the next marker; only EOI may follow a complete scan.
            while (true) {
                const std::uint8_t byte = in.u8();
                if (byte != 0xFF)
                    continue;
                std::uint8_t m = in.u8();
                while (m == 0xFF)
                    m = in.u8();
                if (m == 0x00)
                    continue;
                if (m == 0xD9)
                    return ci;
                if (m == 0xDA || m == 0xC4 || m == 0xDB)
                    throw Error(ErrorCode::UnsupportedMode, "multi-scan streams are not supported");
                throw Error(ErrorCode::BadMarker, "expected EOI after scan");
            }
        }
        default:
            if ((marker >= 0xE0 && marker <= 0xEF) || marker == 0xFE)
                break; // APPn / COM
            throw Error(ErrorCode::BadMarker, "unsupported marker segment");
        }
    }
}

inline Image reconstruct(const CoefficientImage& ci) {
    Image padded(blocks_along(ci.width) * kBlockSize, blocks_along(ci.height) * kBlockSize);
    const auto grid = block_grid(padded);
    for (std::size_t i = 0; i < grid.size(); ++i)
        store_block(padded, grid[i], reconstruct_real(ci.blocks[i], ci.qtable, LevelShift::on));
    return crop(padded, ci.width, ci.height);
}

inline Image decode_jpeg(std::span<const std::uint8_t> data) { return reconstruct(decode_coefficients(data)); }

inline Image decode_jpeg(const JpegBytes& jpeg) { return decode_jpeg(jpeg.bytes); }

} // namespace saw
