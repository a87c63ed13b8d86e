#pragma once

// JSON forms of the embed manifest and the verification report.
//
// Manifest: {"roi":[x,y,w,h], "plane":b, "guard":g, "n":blocks,
//            "digest":"<64 lowercase hex>", "keyed_hash":bool}
// Neither the embedding key nor the hash key is ever written.

#include <string>

#include <json.hpp>

#include "error.hpp"
#include "watermark.hpp"

namespace saw {

inline nlohmann::ordered_json manifest_to_json(const EmbedManifest& m) {
    nlohmann::ordered_json j;
    j["roi"] = {m.roi.x, m.roi.y, m.roi.w, m.roi.h};
    j["plane"] = m.plane;
    j["guard"] = m.guard;
    j["n"] = m.n;
    j["digest"] = m.digest.hex();
    j["keyed_hash"] = m.keyed_hash;
    return j;
}

inline EmbedManifest manifest_from_json(const nlohmann::json& j) {
    try {
        EmbedManifest m;
        const auto& roi = j.at("roi");
        if (!roi.is_array() || roi.size() != 4)
            throw Error(ErrorCode::ManifestInvalid, "roi must be [x,y,w,h]");
        m.roi = Rect{roi[0].get<int>(), roi[1].get<int>(), roi[2].get<int>(), roi[3].get<int>()};
        m.plane = j.at("plane").get<int>();
        m.guard = j.at("guard").get<int>();
        m.n = j.at("n").get<std::uint64_t>();
        m.digest = Digest256::from_hex(j.at("digest").get<std::string>());
        m.keyed_hash = j.at("keyed_hash").get<bool>();
        if (m.plane < 1 || m.plane > 3 || m.guard < 0 || m.roi.w < 1 || m.roi.h < 1)
            throw Error(ErrorCode::ManifestInvalid, "manifest field out of range");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ManifestInvalid, e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ManifestInvalid)
            throw;
        throw Error(ErrorCode::ManifestInvalid, e.what());
    }
}

inline std::string manifest_dump(const EmbedManifest& m) { return manifest_to_json(m).dump(2) + "\n"; }

inline EmbedManifest manifest_parse(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ManifestInvalid, e.what());
    }
    return manifest_from_json(j);
}

inline nlohmann::ordered_json report_to_json(const VerifyReport& r) {
    nlohmann::ordered_json j;
    j["verdict"] = r.pass ? "pass" : "fail";
    j["mode"] = std::string(to_string(r.mode));
    j["extracted"] = r.extracted.hex();
    j["reference"] = r.reference.hex();
    j["differing_bits"] = r.differing_bits;
    return j;
}

} // namespace saw
