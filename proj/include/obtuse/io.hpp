#pragma once

#include "obtuse/config_search.hpp"
#include "obtuse/constructions/fixed_point.hpp"
#include "obtuse/errors.hpp"
#include "obtuse/exact_bounds.hpp"
#include "obtuse/geometry.hpp"
#include "obtuse/monte_carlo.hpp"

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace obtuse {

/// Exact integers go out as JSON numbers while they fit in 64 bits, else as strings.
inline nlohmann::json big_to_json(const BigCount& v) {
    if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max())
        return v.convert_to<std::uint64_t>();
    if (v < 0 && v >= std::numeric_limits<std::int64_t>::min())
        return v.convert_to<std::int64_t>();
    return v.str();
}

inline nlohmann::json to_json(const ClassCounts& c) {
    nlohmann::json j;
    for (auto cls : kAllClasses) j[std::string(to_string(cls))] = big_to_json(c[cls]);
    return j;
}

inline nlohmann::json to_json(const ClassTally& c) {
    nlohmann::json j;
    for (auto cls : kAllClasses)
        j[std::string(to_string(cls))] = c[static_cast<std::size_t>(cls)];
    return j;
}

template <std::floating_point T>
nlohmann::json to_json(const std::vector<Point<T>>& pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : pts) {
        nlohmann::json row = nlohmann::json::array();
        for (T x : p.coords()) row.push_back(static_cast<double>(x));
        arr.push_back(std::move(row));
    }
    return {{"dim", pts.empty() ? 0 : pts.front().dim()}, {"points", std::move(arr)}};
}

inline nlohmann::json to_json(const Configuration& c) {
    return to_json(std::vector<PointD>(c.points().begin(), c.points().end()));
}

/// {"dim": d, "points": [[x1, ..., xd], ...]}
inline Configuration configuration_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("points") || !j.at("points").is_array())
        throw UsageError("configuration JSON needs a 'points' array");
    std::vector<PointD> pts;
    for (const auto& row : j.at("points")) {
        if (!row.is_array()) throw UsageError("each point must be an array of numbers");
        std::vector<double> coords;
        for (const auto& x : row) {
            if (!x.is_number()) throw UsageError("point coordinates must be numbers");
            coords.push_back(x.get<double>());
        }
        pts.emplace_back(std::move(coords));
    }
    Configuration config(std::move(pts));
    if (j.contains("dim") && j.at("dim").get<std::size_t>() != config.dim())
        throw UsageError("'dim' does not match the point coordinates");
    return config;
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

inline nlohmann::json to_json(const Estimate& e) {
    return {{"samples", e.samples},
            {"counts", to_json(e.counts)},
            {"p_hat", e.p_hat},
            {"ci95", {e.ci95.lo, e.ci95.hi}},
            {"seed", e.seed},
            {"tol", e.tol},
            {"spec", e.spec}};
}

inline nlohmann::json rational_to_json(const Rational& r) {
    return {{"num", big_to_json(numerator(r))},
            {"den", big_to_json(denominator(r))},
            {"float", to_double(r)}};
}

inline nlohmann::json summary_json(const LimitResult& r) {
    const Rational asym = asymptotic_bound(r.d);
    const Rational naive = naive_bound(r.d);
    return {{"d", r.d},
            {"base_n", r.base_n},
            {"n_max", r.n_max},
            {"t_n", big_to_json(r.t_final)},
            {"lower_bound", to_double(r.lower_bound)},
            {"upper_envelope", to_double(r.upper_envelope)},
            {"asymptotic", to_double(asym)},
            {"naive", to_double(naive)},
            {"lower_over_naive", to_double(r.lower_bound / naive)},
            {"asymptotic_over_lower", to_double(asym / r.lower_bound)},
            {"monotone", r.monotone},
            {"exact",
             {{"lower_bound", rational_to_json(r.lower_bound)},
              {"asymptotic", rational_to_json(asym)},
              {"naive", rational_to_json(naive)}}}};
}

inline nlohmann::json to_json(const FixedPointResult& r) {
    return {{"p", r.p},
            {"x", r.x},
            {"obtuse", r.obtuse},
            {"bracket", r.bracket},
            {"iterations", r.iterations},
            {"residual", fixed_point_residual(r.p, r.x)}};
}

inline nlohmann::json to_json(const SearchParams& p) {
    return {{"n", p.n},
            {"dim", p.d},
            {"iterations", p.iterations},
            {"restarts", p.restarts},
            {"initial_temperature", p.initial_temperature},
            {"cooling", p.cooling},
            {"scale_start", p.scale_start},
            {"scale_end", p.scale_end},
            {"seed", p.seed},
            {"mode", std::string(to_string(p.mode))},
            {"warm_starts", p.warm_starts},
            {"tol", p.tol}};
}

inline nlohmann::json to_json(const SearchResult& r) {
    nlohmann::json restarts = nlohmann::json::array();
    for (const auto& o : r.restarts)
        restarts.push_back({{"index", o.index},
                            {"seed", o.seed},
                            {"start", o.start},
                            {"count", o.count},
                            {"margin", o.margin}});
    nlohmann::json j{{"params", to_json(r.params)},
                     {"best_count", r.best_count},
                     {"best_margin", r.best_margin},
                     {"best_restart", r.best_restart},
                     {"counts", to_json(r.counts)},
                     {"configuration", to_json(r.best)},
                     {"best_so_far", r.best_so_far},
                     {"restarts", restarts}};
    j["bound"] = r.bound ? big_to_json(*r.bound) : nlohmann::json(nullptr);
    j["gap"] = r.gap ? big_to_json(*r.gap) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json to_json(const ExactEnumeration& e) {
    return {{"counts", to_json(e.counts)},
            {"exact", e.exact},
            {"tol", e.exact ? nlohmann::json(nullptr) : nlohmann::json(e.tol)}};
}

}  // namespace obtuse
