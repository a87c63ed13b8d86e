// saw: command-line front end for the watermarking library.
//
// Exit codes: 0 success / verification pass, 1 verification fail,
// 2 operational error. Results go to stdout, diagnostics to stderr.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "saw/saw.hpp"

namespace {

using namespace saw;

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct CommonFlags {
    std::uint64_t key = 37;
    int plane = 1;
    int guard = 1;
    int fg_threshold = 0;
    std::string hash_key;
    std::string roi;

    CLI::Option* plane_opt = nullptr;
    CLI::Option* guard_opt = nullptr;
    CLI::Option* hash_key_opt = nullptr;
    CLI::Option* roi_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--key", key, "Embedding key k (must be coprime with the block count)");
        plane_opt = cmd->add_option("--plane", plane, "Bit plane 1..3 (1 = LSB)")->check(CLI::Range(1, 3));
        guard_opt = cmd->add_option("--guard", guard, "Guard band around the ROI, in blocks")->check(CLI::NonNegativeNumber);
        cmd->add_option("--fg-threshold", fg_threshold, "Pixels above this value count as content")->check(CLI::Range(0, 254));
        hash_key_opt = cmd->add_option("--hash-key", hash_key, "Secret for HMAC-SHA-256 hashing");
        roi_opt = cmd->add_option("--roi", roi, "ROI as x,y,w,h (overrides detection or manifest)");
    }

    WatermarkParams params() const {
        WatermarkParams p;
        p.key = key;
        p.plane = plane;
        p.guard = guard;
        p.fg_threshold = fg_threshold;
        if (hash_key_opt && hash_key_opt->count())
            p.hash_key = hash_key;
        return p;
    }

    std::optional<Rect> roi_override() const {
        if (!roi_opt || !roi_opt->count())
            return std::nullopt;
        Rect r;
        char sep[3] = {};
        std::istringstream in(roi);
        if (!(in >> r.x >> sep[0] >> r.y >> sep[1] >> r.w >> sep[2] >> r.h) || sep[0] != ',' || sep[1] != ',' ||
            sep[2] != ',')
            throw Error(ErrorCode::InvalidParams, "--roi expects x,y,w,h");
        return r;
    }
};

Image load_image(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8)
        return decode_jpeg(bytes);
    return load_pgm(bytes);
}

EmbedManifest load_manifest(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return manifest_parse(std::string(bytes.begin(), bytes.end()));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// Geometry for extract/verify: flags win over the manifest.
struct Geometry {
    Rect roi;
    WatermarkParams params;
};

Geometry resolve_geometry(const Image& img, const std::optional<EmbedManifest>& manifest, const CommonFlags& flags) {
    Geometry g{{}, flags.params()};
    if (auto roi = flags.roi_override())
        g.roi = *roi;
    else if (manifest)
        g.roi = manifest->roi;
    else
        throw Error(ErrorCode::InvalidParams, "need --manifest or --roi");

    if (manifest) {
        if (!flags.plane_opt->count())
            g.params.plane = manifest->plane;
        if (!flags.guard_opt->count())
            g.params.guard = manifest->guard;
        if (manifest->keyed_hash && !g.params.hash_key)
            throw Error(ErrorCode::InvalidParams, "manifest was made with a keyed hash; pass --hash-key");
    }
    if (!g.roi.within(img.width(), img.height()))
        throw Error(ErrorCode::DimensionMismatch, "ROI does not fit the image");
    if (manifest) {
        const auto n = embeddable_blocks(img.width(), img.height(), g.roi, g.params.guard).size();
        if (n != manifest->n)
            throw Error(ErrorCode::DimensionMismatch, "image yields " + std::to_string(n) +
                                                          " embeddable blocks, manifest records " +
                                                          std::to_string(manifest->n));
    }
    return g;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidParams, "bad integer list: " + text);
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strict-authentication watermarking for grayscale images"};
    app.require_subcommand(1);

    // gen
    int gen_width = 800, gen_height = 600;
    std::uint32_t gen_seed = 1;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Write a synthetic ultrasound-like phantom as PGM");
    gen->add_option("--width", gen_width, "Width (multiple of 8)");
    gen->add_option("--height", gen_height, "Height (multiple of 8)");
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--out,-o", gen_out, "Output PGM")->required();

    // embed
    std::string embed_in, embed_out, embed_manifest;
    CommonFlags embed_flags;
    auto* embed_cmd = app.add_subcommand("embed", "Hash the ROI and embed the digest outside it");
    embed_cmd->add_option("--in,-i", embed_in, "Input PGM")->required();
    embed_cmd->add_option("--out,-o", embed_out, "Watermarked PGM")->required();
    embed_cmd->add_option("--manifest,-m", embed_manifest, "Manifest JSON to write")->required();
    embed_flags.attach(embed_cmd);

    // extract
    std::string extract_in, extract_manifest;
    CommonFlags extract_flags;
    auto* extract_cmd = app.add_subcommand("extract", "Print the digest carried by an image");
    extract_cmd->add_option("--in,-i", extract_in, "Input PGM or JPEG")->required();
    extract_cmd->add_option("--manifest,-m", extract_manifest, "Manifest JSON");
    extract_flags.attach(extract_cmd);

    // verify
    std::string verify_in, verify_manifest, verify_mode = "strict";
    CommonFlags verify_flags;
    auto* verify_cmd = app.add_subcommand("verify", "Authenticate an image; prints a JSON report");
    verify_cmd->add_option("--in,-i", verify_in, "Input PGM or JPEG")->required();
    verify_cmd->add_option("--manifest,-m", verify_manifest, "Manifest JSON");
    verify_cmd->add_option("--mode", verify_mode, "strict: against the recomputed ROI hash; reference: against the manifest digest")
        ->check(CLI::IsMember({"strict", "reference"}));
    verify_flags.attach(verify_cmd);

    // sweep
    std::string sweep_in, sweep_csv_path, sweep_planes = "1,2,3";
    int sweep_qmin = 40, sweep_qmax = 100, sweep_qstep = 1;
    unsigned sweep_threads = 0;
    CommonFlags sweep_flags;
    auto* sweep_cmd = app.add_subcommand("sweep", "Survival of the watermark across JPEG qualities");
    sweep_cmd->add_option("--in,-i", sweep_in, "Input PGM")->required();
    sweep_cmd->add_option("--planes", sweep_planes, "Comma-separated bit planes");
    sweep_cmd->add_option("--qmin", sweep_qmin, "Lowest quality")->check(CLI::Range(1, 100));
    sweep_cmd->add_option("--qmax", sweep_qmax, "Highest quality")->check(CLI::Range(1, 100));
    sweep_cmd->add_option("--qstep", sweep_qstep, "Quality step")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--csv", sweep_csv_path, "CSV output path")->required();
    sweep_cmd->add_option("--threads", sweep_threads, "Worker threads (0 = all cores)");
    sweep_flags.attach(sweep_cmd);

    // psnr
    std::string psnr_a, psnr_b;
    auto* psnr_cmd = app.add_subcommand("psnr", "PSNR between two images of equal size");
    psnr_cmd->add_option("a", psnr_a, "First image")->required();
    psnr_cmd->add_option("b", psnr_b, "Second image")->required();

    // compress / decompress
    std::string compress_in, compress_out;
    int compress_quality = 75;
    auto* compress_cmd = app.add_subcommand("compress", "Encode a PGM as baseline JPEG");
    compress_cmd->add_option("--in,-i", compress_in, "Input PGM")->required();
    compress_cmd->add_option("--out,-o", compress_out, "Output JPEG")->required();
    compress_cmd->add_option("--quality,-q", compress_quality, "Quality 1..100")->check(CLI::Range(1, 100));

    std::string decompress_in, decompress_out;
    auto* decompress_cmd = app.add_subcommand("decompress", "Decode a baseline grayscale JPEG to PGM");
    decompress_cmd->add_option("--in,-i", decompress_in, "Input JPEG")->required();
    decompress_cmd->add_option("--out,-o", decompress_out, "Output PGM")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (*gen) {
            write_pgm(gen_out, gen_phantom(gen_width, gen_height, gen_seed));
            return 0;
        }

        if (*embed_cmd) {
            const Image img = read_pgm(embed_in);
            const WatermarkParams params = embed_flags.params();
            params.validate();
            const auto roi_flag = embed_flags.roi_override();
            const Rect roi = roi_flag ? *roi_flag : detect_roi(img, params.fg_threshold);
            const EmbedResult result = embed(img, roi, params);
            write_pgm(embed_out, result.image);
            write_text(embed_manifest, manifest_dump(result.manifest));
            std::cout << result.manifest.digest.hex() << "\n";
            return 0;
        }

        if (*extract_cmd) {
            const Image img = load_image(extract_in);
            std::optional<EmbedManifest> manifest;
            if (!extract_manifest.empty())
                manifest = load_manifest(extract_manifest);
            const Geometry g = resolve_geometry(img, manifest, extract_flags);
            std::cout << extract(img, g.roi, g.params).hex() << "\n";
            return 0;
        }

        if (*verify_cmd) {
            const Image img = load_image(verify_in);
            std::optional<EmbedManifest> manifest;
            if (!verify_manifest.empty())
                manifest = load_manifest(verify_manifest);
            const Geometry g = resolve_geometry(img, manifest, verify_flags);
            VerifyReport report;
            if (verify_mode == "reference") {
                if (!manifest)
                    throw Error(ErrorCode::InvalidParams, "reference mode needs --manifest");
                report = verify_reference(extract(img, g.roi, g.params), manifest->digest);
            } else {
                report = verify_strict(img, g.roi, g.params);
            }
            std::cout << report_to_json(report).dump() << "\n";
            return report.pass ? 0 : kExitFail;
        }

        if (*sweep_cmd) {
            const Image img = read_pgm(sweep_in);
            const WatermarkParams params = sweep_flags.params();
            params.validate();
            const auto roi_flag = sweep_flags.roi_override();
            const Rect roi = roi_flag ? *roi_flag : detect_roi(img, params.fg_threshold);
            if (sweep_qmin > sweep_qmax)
                throw Error(ErrorCode::InvalidParams, "--qmin exceeds --qmax");
            std::vector<int> qualities;
            for (int q = sweep_qmin; q <= sweep_qmax; q += sweep_qstep)
                qualities.push_back(q);
            const SweepReport report = run_sweep(img, roi, parse_int_list(sweep_planes), qualities, params, sweep_threads);
            write_text(sweep_csv_path, sweep_csv(report));
            for (const auto& w : report.warnings)
                std::cerr << "warning: " << w << "\n";
            std::cout << sweep_summary_json(report).dump(2) << "\n";
            return 0;
        }

        if (*psnr_cmd) {
            std::cout << psnr(load_image(psnr_a), load_image(psnr_b)).to_string(4) << "\n";
            return 0;
        }

        if (*compress_cmd) {
            const Image img = read_pgm(compress_in);
            const JpegBytes jpeg = encode_jpeg(img, compress_quality);
            write_file(compress_out, jpeg.bytes);
            nlohmann::ordered_json j;
            j["bytes"] = jpeg.bytes.size();
            j["compression_pct"] = (1.0 - double(jpeg.bytes.size()) / double(img.size())) * 100.0;
            std::cout << j.dump() << "\n";
            return 0;
        }

        if (*decompress_cmd) {
            write_pgm(decompress_out, decode_jpeg(read_file(decompress_in)));
            return 0;
        }
    } catch (const Error& e) {
        nlohmann::ordered_json j;
        j["error"] = std::string(error_name(e.code()));
        j["message"] = e.what();
        std::cerr << j.dump() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << R"({"error":"internal","message":)" << nlohmann::json(e.what()).dump() << "}\n";
        return kExitError;
    }
    return kExitError;
}
