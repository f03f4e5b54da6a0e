#pragma once

// JSON serialization for field elements, matrices and reports, plus the
// on-disk cache of solved model matrices. All writers produce deterministic
// output (nlohmann's default object type keeps keys sorted), and integers
// that can exceed machine range travel as decimal strings.

#include "qhomology/cyclotomic.hpp"
#include "qhomology/matrix.hpp"
#include "qhomology/ndiff.hpp"
#include "qhomology/report.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

namespace qh {

using Json = nlohmann::json;

inline constexpr const char* kSchemaTag = "qhomology/1";
inline constexpr int kModelCacheVersion = 1;

// A field element as the array of its power-basis coordinates, each a
// two-element [numerator, denominator] pair of decimal strings.
inline Json scalar_to_json(const Scalar& s) {
    Json arr = Json::array();
    for (const Rational& r : s.coords()) arr.push_back(Json::array({num_str(r), den_str(r)}));
    return arr;
}

inline Scalar scalar_from_json(const FieldContext& ctx, const Json& j) {
    if (!j.is_array() || static_cast<int>(j.size()) != ctx.degree())
        throw std::invalid_argument("field element must be an array of " +
                                    std::to_string(ctx.degree()) + " rationals");
    std::vector<Rational> coords;
    coords.reserve(j.size());
    for (const Json& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw std::invalid_argument(
                "each coordinate must be a [numerator, denominator] pair of decimal strings");
        coords.push_back(parse_rational(e[0].get<std::string>(), e[1].get<std::string>()));
    }
    return Scalar(&ctx, std::move(coords));
}

inline Json matrix_to_json(int h, const ExactMatrix& m) {
    Json entries = Json::array();
    for (int r = 0; r < m.rows(); ++r)
        for (const auto& [c, v] : m.row(r)) entries.push_back(Json::array({r, c, scalar_to_json(v)}));
    return Json{{"h", h}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

// Reads a matrix file; the field is determined by the file's height.
// Throws std::invalid_argument on any shape violation.
inline std::pair<int, ExactMatrix> matrix_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("matrix file must be a JSON object");
    for (const char* key : {"h", "rows", "cols", "entries"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("matrix file is missing \"") + key + "\"");
    int h = j.at("h").get<int>();
    if (h < 2) throw std::invalid_argument("height must be at least 2");
    int rows = j.at("rows").get<int>();
    int cols = j.at("cols").get<int>();
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimensions");
    const FieldContext& ctx = field_new(h);
    ExactMatrix m(ctx, rows, cols);
    for (const Json& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 3)
            throw std::invalid_argument("each entry must be [row, col, scalar]");
        int r = e[0].get<int>(), c = e[1].get<int>();
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw std::invalid_argument("entry position (" + std::to_string(r) + ", " +
                                        std::to_string(c) + ") out of range");
        m.set(r, c, scalar_from_json(ctx, e[2]));
    }
    return {h, std::move(m)};
}

inline Json check_report_to_json(const CheckReport& rep) {
    Json checks = Json::array();
    for (const Check& c : rep.checks) {
        Json jc{{"id", c.id}, {"status", c.pass ? "pass" : "fail"}};
        if (!c.witness.empty()) jc["witness"] = c.witness;
        checks.push_back(std::move(jc));
    }
    return Json{{"suite", rep.suite},
                {"h", rep.h},
                {"seed", rep.seed},
                {"checks", std::move(checks)},
                {"all_pass", rep.all_pass()}};
}

inline Json homology_report_to_json(const HomologyReport& rep) {
    Json j{{"h", rep.h}, {"dims", rep.dims}};
    if (!rep.per_degree.empty()) j["per_degree"] = rep.per_degree;
    return j;
}

// ---------------------------------------------------------------------------
// Model cache: the two solved lowering operators are the only expensive part
// of the model build; everything else is closed-form. Files are keyed by
// (height, format version) in the name, so a format bump invalidates all old
// caches. A cache that fails to parse or validate is treated as a miss.
// ---------------------------------------------------------------------------

inline std::string model_cache_filename(int h) {
    return "model_h" + std::to_string(h) + "_v" + std::to_string(kModelCacheVersion) + ".json";
}

inline void save_lowering_cache(const std::string& dir, int h, const ExactMatrix& a21,
                                const ExactMatrix& a22) {
    std::filesystem::create_directories(dir);
    Json j{{"schema", kSchemaTag},
           {"kind", "model-cache"},
           {"format_version", kModelCacheVersion},
           {"h", h},
           {"a21", matrix_to_json(h, a21)},
           {"a22", matrix_to_json(h, a22)}};
    std::ofstream out(std::filesystem::path(dir) / model_cache_filename(h));
    if (!out) throw std::runtime_error("cannot write cache file in " + dir);
    out << j.dump(1) << '\n';
}

inline std::optional<std::array<ExactMatrix, 2>> load_lowering_cache(const std::string& dir,
                                                                     int h) {
    std::filesystem::path path = std::filesystem::path(dir) / model_cache_filename(h);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        Json j = Json::parse(in);
        if (j.value("kind", "") != "model-cache" || j.value("format_version", -1) != kModelCacheVersion ||
            j.value("h", -1) != h)
            return std::nullopt;
        auto [h1, a21] = matrix_from_json(j.at("a21"));
        auto [h2, a22] = matrix_from_json(j.at("a22"));
        if (h1 != h || h2 != h) return std::nullopt;
        const int n = h * h;
        if (a21.rows() != n || a21.cols() != n || a22.rows() != n || a22.cols() != n)
            return std::nullopt;
        return std::array<ExactMatrix, 2>{std::move(a21), std::move(a22)};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

} // namespace qh
