#pragma once

// Quality sweep: for every (plane, quality) pair, embed -> JPEG encode ->
// decode -> extract, recording survival, compression and channel PSNR.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "image.hpp"
#include "jpeg.hpp"
#include "metrics.hpp"
#include "watermark.hpp"

namespace saw {

struct SweepRow {
    int plane = 1;
    int quality = 100;
    bool survived = false;
    double compression_pct = 0.0; // (1 - jpeg bytes / raw bytes) * 100
    Psnr psnr = Psnr::infinite();  // decoded vs watermarked, pre-compression
    std::size_t jpeg_bytes = 0;
};

struct PlaneSummary {
    int plane = 1;
    std::optional<int> threshold;     // lowest quality of the surviving run that reaches the top of the grid
    std::vector<int> stray_survivals; // survivals below the threshold (non-contiguity)

    bool contiguous() const noexcept { return stray_survivals.empty(); }
};

struct SweepReport {
    int width = 0;
    int height = 0;
    Rect roi;
    std::vector<SweepRow> rows; // plane-major, quality ascending
    std::vector<PlaneSummary> planes;
    std::vector<std::string> warnings;

    const SweepRow* find(int plane, int quality) const {
        for (const auto& r : rows)
            if (r.plane == plane && r.quality == quality)
                return &r;
        return nullptr;
    }

    const PlaneSummary* summary(int plane) const {
        for (const auto& p : planes)
            if (p.plane == plane)
                return &p;
        return nullptr;
    }
};

/// Threshold and contiguity for one plane's rows.
inline PlaneSummary summarize_plane(int plane, std::vector<SweepRow> rows) {
    std::erase_if(rows, [plane](const SweepRow& r) { return r.plane != plane; });
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.quality > b.quality; });

    PlaneSummary s{plane, std::nullopt, {}};
    std::size_t i = 0;
    for (; i < rows.size() && rows[i].survived; ++i)
        s.threshold = rows[i].quality;
    for (; i < rows.size(); ++i)
        if (rows[i].survived)
            s.stray_survivals.push_back(rows[i].quality);
    std::sort(s.stray_survivals.begin(), s.stray_survivals.end());
    return s;
}

inline SweepRow sweep_point(const Image& watermarked, const EmbedManifest& manifest, const WatermarkParams& params,
                            int quality) {
    const JpegBytes jpeg = encode_jpeg(watermarked, quality);
    const Image decoded = decode_jpeg(jpeg);
    const Digest256 extracted = extract(decoded, manifest.roi, params);
    const double raw = static_cast<double>(watermarked.size());
    return SweepRow{params.plane,
                    quality,
                    extracted == manifest.digest,
                    (1.0 - static_cast<double>(jpeg.bytes.size()) / raw) * 100.0,
                    psnr(decoded, watermarked),
                    jpeg.bytes.size()};
}

inline SweepReport run_sweep(const Image& img, const Rect& roi, const std::vector<int>& planes,
                             const std::vector<int>& qualities, const WatermarkParams& base, unsigned threads = 0) {
    for (int q : qualities)
        check_quality(q);

    struct Task {
        std::size_t plane_index;
        int quality;
    };
    std::vector<WatermarkParams> plane_params;
    std::vector<EmbedResult> embedded;
    for (int plane : planes) {
        WatermarkParams p = base;
        p.plane = plane;
        embedded.push_back(embed(img, roi, p));
        plane_params.push_back(std::move(p));
    }

    std::vector<Task> tasks;
    for (std::size_t pi = 0; pi < planes.size(); ++pi)
        for (int q : qualities)
            tasks.push_back({pi, q});

    std::vector<SweepRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
            try {
                const Task& t = tasks[i];
                rows[i] = sweep_point(embedded[t.plane_index].image, embedded[t.plane_index].manifest,
                                      plane_params[t.plane_index], t.quality);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };

    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, tasks.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t)
            pool.emplace_back(worker);
        worker();
    }
    if (failure)
        std::rethrow_exception(failure);

    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return a.plane != b.plane ? a.plane < b.plane : a.quality < b.quality;
    });

    SweepReport report{img.width(), img.height(), roi, std::move(rows), {}, {}};
    for (int plane : planes) {
        PlaneSummary s = summarize_plane(plane, report.rows);
        if (!s.threshold)
            report.warnings.push_back("plane " + std::to_string(plane) + ": watermark lost at the highest tested quality");
        if (!s.contiguous()) {
            std::string list;
            for (int q : s.stray_survivals)
                list += (list.empty() ? "" : ",") + std::to_string(q);
            report.warnings.push_back("plane " + std::to_string(plane) +
                                      ": survival is not contiguous; also survived below threshold at quality " + list);
        }
        report.planes.push_back(std::move(s));
    }
    return report;
}

inline constexpr const char* kSweepCsvHeader = "plane,quality,survived,compression_pct,psnr_db";

/// One leading '#' comment line documents the PSNR baseline, then the header.
inline std::string sweep_csv(const SweepReport& report) {
    std::string out = "# psnr_db compares the decoded JPEG with the watermarked image before compression; "
                      "compression_pct is relative to width*height raw bytes\n";
    out += kSweepCsvHeader;
    out += '\n';
    char buf[160];
    for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%s,%.4f,%s\n", r.plane, r.quality, r.survived ? "true" : "false",
                      r.compression_pct, r.psnr.to_string(4).c_str());
        out += buf;
    }
    return out;
}

inline nlohmann::ordered_json sweep_summary_json(const SweepReport& report) {
    nlohmann::ordered_json j;
    j["width"] = report.width;
    j["height"] = report.height;
    j["roi"] = {report.roi.x, report.roi.y, report.roi.w, report.roi.h};
    j["planes"] = nlohmann::ordered_json::array();
    for (const auto& s : report.planes) {
        nlohmann::ordered_json p;
        p["plane"] = s.plane;
        p["threshold"] = s.threshold ? nlohmann::ordered_json(*s.threshold) : nlohmann::ordered_json(nullptr);
        p["contiguous"] = s.contiguous();
        p["stray_survivals"] = s.stray_survivals;
        if (s.threshold) {
            if (const SweepRow* row = report.find(s.plane, *s.threshold)) {
                p["compression_pct_at_threshold"] = row->compression_pct;
                p["psnr_db_at_threshold"] = row->psnr.to_string(4);
            }
        }
        j["planes"].push_back(std::move(p));
    }
    j["warnings"] = report.warnings;
    return j;
}

} // namespace saw
