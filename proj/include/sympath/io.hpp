#pragma once

// JSON documents for paths, flow arcs and index estimates.
//   path: {"dim": d, "times": [...], "matrices": [[row-major entries], ...]}
//   arc:  {"t": [...], "x": [[...], ...], "phi_residual": [...], "action": number}

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flow.hpp"
#include "index.hpp"
#include "path.hpp"

namespace sympath {

using Json = nlohmann::ordered_json;

/// Raised when a document cannot be read or written.
class IoError : public Error
{
  public:
    using Error::Error;
};

inline Json to_json(const Vector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

inline Json to_json_row_major(const Matrix& m)
{
    Json a = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            a.push_back(m(r, c));
    return a;
}

inline Json path_to_json(const SymplecticPath& p)
{
    Json ms = Json::array();
    for (const auto& m : p.samples())
        ms.push_back(to_json_row_major(m));
    return Json{{"dim", p.dim()}, {"times", p.times()}, {"matrices", ms}};
}

/// Samples only; between them the path is the one-parameter-subgroup interpolation.
inline SymplecticPath path_from_json(const Json& j, PathOptions opts = {})
{
    try {
        const int d = j.at("dim").get<int>();
        auto ts = j.at("times").get<std::vector<double>>();
        const auto& ms = j.at("matrices");
        if (!ms.is_array() || ms.size() != ts.size())
            throw ValidationError("path document needs one matrix per time");
        std::vector<Matrix> mats;
        for (const auto& row : ms) {
            auto v = row.get<std::vector<double>>();
            if (static_cast<int>(v.size()) != d * d)
                throw ValidationError("path matrix has the wrong number of entries");
            Matrix m(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c)
                    m(r, c) = v[r * d + c];
            mats.push_back(m);
        }
        return SymplecticPath(std::move(ts), std::move(mats), {}, opts);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed path document: ") + e.what());
    }
}

inline Json arc_to_json(const FlowArc& a)
{
    Json xs = Json::array();
    for (const auto& x : a.states)
        xs.push_back(to_json(x));
    return Json{{"t", a.times}, {"x", xs}, {"phi_residual", a.phi_residual}, {"action", a.total_action()}};
}

inline Json half_integer_json(HalfInteger h) { return Json{{"value", h.value()}, {"halves", h.halves()}}; }

inline Json index_to_json(const IndexEstimate& e)
{
    return Json{{"value", e.value.value()},
                {"halves", e.value.halves()},
                {"method", to_string(e.method)},
                {"grid_points", e.grid_points},
                {"regularization", e.regularization},
                {"crossing_count", e.crossing_count}};
}

inline Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("cannot parse " + path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out)
        throw IoError("write failed for " + path);
}

} // namespace sympath
