#pragma once

// JSON schema for SceneSpec:
//
// {
//   "width": 256, "height": 256,
//   "background": {"intensity": 1.0, "guide": [0.25, 0.6]},
//   "regions": [
//     {"shape": {"type": "rect", "x": 0, "y": 0, "width": 10, "height": 10}, "intensity": 4, "guide": [..]},
//     {"shape": {"type": "half_plane", "nx": 1, "ny": 0, "offset": 128}, ...},
//     {"shape": {"type": "road", "points": [[0, 5], [100, 40]], "width": 3}, ...}
//   ],
//   "reflectors": [{"x": 100, "y": 100, "multiplier": 100, "side": 1}],
//   "mismatch_regions": [{"x": 10, "y": 10, "width": 32, "height": 32}],
//   "mismatch_guide": [0.5, 0.5],
//   "guide_noise": 0.0
// }

#include <string>
#include <type_traits>
#include <variant>

#include "json.hpp"

#include "gnlm/error.hpp"
#include "gnlm/simulator.hpp"

namespace gnlm {

inline void to_json(nlohmann::json& j, const RectShape& r) {
    j = {{"type", "rect"}, {"x", r.x}, {"y", r.y}, {"width", r.width}, {"height", r.height}};
}

inline void from_json(const nlohmann::json& j, RectShape& r) {
    j.at("x").get_to(r.x);
    j.at("y").get_to(r.y);
    j.at("width").get_to(r.width);
    j.at("height").get_to(r.height);
}

inline void to_json(nlohmann::json& j, const RegionShape& shape) {
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, RectShape>) {
                to_json(j, s);
            } else if constexpr (std::is_same_v<S, HalfPlaneShape>) {
                j = {{"type", "half_plane"}, {"nx", s.nx}, {"ny", s.ny}, {"offset", s.offset}};
            } else {
                j = {{"type", "road"}, {"points", s.points}, {"width", s.width}};
            }
        },
        shape);
}

inline void from_json(const nlohmann::json& j, RegionShape& shape) {
    const auto type = j.at("type").get<std::string>();
    if (type == "rect") {
        shape = j.get<RectShape>();
    } else if (type == "half_plane") {
        shape = HalfPlaneShape{j.at("nx").get<double>(), j.at("ny").get<double>(), j.at("offset").get<double>()};
    } else if (type == "road") {
        RoadShape road;
        j.at("points").get_to(road.points);
        road.width = j.value("width", 1.0);
        shape = road;
    } else {
        throw DataError("unknown region shape '" + type + "'");
    }
}

inline void to_json(nlohmann::json& j, const SceneSpec& s) {
    j = nlohmann::json::object();
    j["width"] = s.width;
    j["height"] = s.height;
    j["background"] = {{"intensity", s.background_intensity}, {"guide", s.background_guide}};
    j["regions"] = nlohmann::json::array();
    for (const auto& r : s.regions) {
        nlohmann::json shape;
        to_json(shape, r.shape);
        j["regions"].push_back({{"shape", shape}, {"intensity", r.intensity}, {"guide", r.guide}});
    }
    j["reflectors"] = nlohmann::json::array();
    for (const auto& r : s.reflectors)
        j["reflectors"].push_back(
            {{"x", r.position.x}, {"y", r.position.y}, {"multiplier", r.multiplier}, {"side", r.side}});
    j["mismatch_regions"] = s.mismatch_regions;
    j["mismatch_guide"] = s.mismatch_guide;
    j["guide_noise"] = s.guide_noise;
}

inline void from_json(const nlohmann::json& j, SceneSpec& s) {
    j.at("width").get_to(s.width);
    j.at("height").get_to(s.height);
    if (j.contains("background")) {
        const auto& b = j["background"];
        s.background_intensity = b.value("intensity", 1.0);
        if (b.contains("guide"))
            b["guide"].get_to(s.background_guide);
    }
    s.regions.clear();
    for (const auto& r : j.value("regions", nlohmann::json::array())) {
        SceneRegion region;
        from_json(r.at("shape"), region.shape);
        region.intensity = r.at("intensity").get<double>();
        r.at("guide").get_to(region.guide);
        s.regions.push_back(std::move(region));
    }
    s.reflectors.clear();
    for (const auto& r : j.value("reflectors", nlohmann::json::array()))
        s.reflectors.push_back({{r.at("x").get<std::size_t>(), r.at("y").get<std::size_t>()},
                                r.value("multiplier", 100.0),
                                r.value("side", std::size_t{1})});
    s.mismatch_regions.clear();
    for (const auto& r : j.value("mismatch_regions", nlohmann::json::array()))
        s.mismatch_regions.push_back(r.get<RectShape>());
    s.mismatch_guide = j.value("mismatch_guide", std::vector<double>{});
    s.guide_noise = j.value("guide_noise", 0.0);
}

}  // namespace gnlm
