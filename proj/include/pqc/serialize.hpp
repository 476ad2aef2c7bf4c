#ifndef PQC_SERIALIZE_HPP
#define PQC_SERIALIZE_HPP

// JSON and CSV formats. States travel either as a Bloch triple [x, y, z] or
// as a row-major complex matrix, a flat list of [re, im] pairs; matrices of
// any size use the same pair list plus their row count. All numbers are
// written in round-trip exact form, so rereading a report reproduces the
// original doubles and identical inputs produce byte-identical files.

#include <cstdio>
#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "pqc/bloch.hpp"
#include "pqc/channel.hpp"
#include "pqc/errors.hpp"
#include "pqc/synth.hpp"
#include "pqc/verify.hpp"

namespace pqc {

using json = nlohmann::ordered_json;

inline constexpr const char* k_tool_version = "1.0.0";
inline constexpr const char* k_report_schema = "pqc-report/1";

inline json json_of_matrix(const Eigen::MatrixXcd& m) {
    json pairs = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            pairs.push_back({m(r, c).real(), m(r, c).imag()});
    return pairs;
}

inline Eigen::MatrixXcd matrix_of_json(const json& pairs, Eigen::Index rows, Eigen::Index cols) {
    if (!pairs.is_array() || static_cast<Eigen::Index>(pairs.size()) != rows * cols)
        throw InvalidState("matrix entry list has wrong length");
    Eigen::MatrixXcd m(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c, ++k) {
            const json& cell = pairs.at(k);
            if (!cell.is_array() || cell.size() != 2)
                throw InvalidState("matrix entries must be [re, im] pairs");
            m(r, c) = complex(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    return m;
}

// Accepts [x, y, z], a flat list of four [re, im] pairs, or two rows of two
// such pairs.
inline QubitState state_of_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InvalidState("state must be a nonempty array");
    if (j.size() == 3 && j.at(0).is_number())
        return state_from_bloch(
            Eigen::Vector3d(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()));
    json flat = j;
    if (j.size() == 2 && j.at(0).is_array() && j.at(0).size() == 2 && j.at(0).at(0).is_array()) {
        flat = json::array();
        for (const auto& row : j)
            for (const auto& cell : row) flat.push_back(cell);
    }
    return state_from_matrix(matrix_of_json(flat, 2, 2));
}

inline json json_of_state(const QubitState& s) {
    return json::array({s.bloch.x(), s.bloch.y(), s.bloch.z()});
}

inline json json_of_ensemble(const UnitaryEnsemble& e) {
    json entries = json::array();
    for (const auto& entry : e.entries)
        entries.push_back({{"p", entry.p}, {"u", json_of_matrix(entry.u)}});
    return entries;
}

inline UnitaryEnsemble ensemble_of_json(const json& entries) {
    if (!entries.is_array() || entries.empty())
        throw InvalidState("ensemble must be a nonempty array");
    UnitaryEnsemble e;
    for (const auto& entry : entries)
        e.entries.push_back(
            {entry.at("p").get<double>(), matrix_of_json(entry.at("u"), 2, 2)});
    validate_ensemble(e);
    return e;
}

inline json json_of_affine(const AffineChannel& c) {
    json t_rows = json::array();
    for (int r = 0; r < 3; ++r)
        t_rows.push_back({c.T(r, 0), c.T(r, 1), c.T(r, 2)});
    return {{"T", t_rows}, {"t", {c.t.x(), c.t.y(), c.t.z()}}};
}

inline AffineChannel affine_of_json(const json& j) {
    AffineChannel c;
    const json& rows = j.at("T");
    if (!rows.is_array() || rows.size() != 3) throw InvalidState("affine T must have 3 rows");
    for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 3; ++k) c.T(r, k) = rows.at(r).at(k).get<double>();
    if (j.contains("t"))
        for (int k = 0; k < 3; ++k) c.t(k) = j.at("t").at(k).get<double>();
    return c;
}

// Channel file: {"ensemble": [{"p", "u"}, ...], "affine": {...}}. The affine
// block is a cache; when an ensemble is present it wins.
inline json json_of_channel(const UnitaryEnsemble& e) {
    return {{"ensemble", json_of_ensemble(e)}, {"affine", json_of_affine(ensemble_to_affine(e))}};
}

inline json json_of_verdict(const Verdict& v) {
    json witnesses = json::array();
    for (const auto& w : v.witnesses)
        witnesses.push_back({{"input", w.input},
                             {"dim", w.output.rows()},
                             {"output", json_of_matrix(w.output)},
                             {"deviation", w.deviation}});
    return {{"passed", v.passed},
            {"max_deviation", v.max_deviation},
            {"tolerance", v.tolerance},
            {"seed", v.seed},
            {"witnesses", witnesses}};
}

inline json json_of_span(const AffineSpan& span) {
    json directions = json::array();
    for (const auto& d : span.directions) directions.push_back({d.x(), d.y(), d.z()});
    return {{"dim", span.dim},
            {"basepoint", {span.basepoint.x(), span.basepoint.y(), span.basepoint.z()}},
            {"directions", directions},
            {"most_mixed", json_of_state(span.most_mixed)},
            {"ball_radius", span.ball_radius}};
}

inline json json_of_report(const PqcReport& report) {
    json j = {{"schema", k_report_schema},
              {"version", k_tool_version},
              {"kind", "synthesis"},
              {"span", json_of_span(report.span)},
              {"target", json_of_state(report.target)},
              {"achievable", report.achievable},
              {"ensemble", json_of_ensemble(report.ensemble)},
              {"key_entropy_bits", report.key_entropy_bits},
              {"min_entropy_bits", report.min_entropy_bits}};
    if (report.r_param) j["r_param"] = *report.r_param;
    return j;
}

// One row per grid point: "r,H_bits" with round-trip exact numbers.
inline void write_entropy_curve_csv(std::ostream& out, int samples) {
    out << "r,H_bits\n";
    char buf[64];
    for (const auto& [r, h] : entropy_curve(samples)) {
        std::snprintf(buf, sizeof buf, "%.17g", r);
        out << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", h);
        out << buf << '\n';
    }
}

} // namespace pqc

#endif
