#ifndef PQC_CLI_HPP
#define PQC_CLI_HPP

// Command implementations behind the pqc tool. Kept out of main() so the
// tests can drive them directly; everything reads a parsed job description
// and writes one JSON (or CSV) document to a stream. Return values are the
// process exit codes:
//   0 success, all embedded verifications passed
//   1 malformed input or I/O failure (thrown to the caller as pqc::Error)
//   2 requested cipher state not reachable
//   3 a verification failed
//   4 channel is not unital

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "pqc/bloch.hpp"
#include "pqc/channel.hpp"
#include "pqc/errors.hpp"
#include "pqc/serialize.hpp"
#include "pqc/synth.hpp"
#include "pqc/verify.hpp"

namespace pqc {

inline constexpr int k_exit_ok = 0;
inline constexpr int k_exit_parse = 1;
inline constexpr int k_exit_unachievable = 2;
inline constexpr int k_exit_verify_failed = 3;
inline constexpr int k_exit_not_unital = 4;

struct JobSpec {
    std::vector<QubitState> plaintexts;
    bool target_auto = true;
    QubitState target = maximally_mixed();
    double tol_cp = k_cp_tol_default;
    double tol_verify = 1e-9;
    std::uint64_t seed = 0;
    int samples = 100; // hull samples for verification, grid size for curves
};

inline JobSpec jobspec_of_json(const json& j) {
    JobSpec spec;
    if (j.contains("plaintexts"))
        for (const auto& s : j.at("plaintexts")) spec.plaintexts.push_back(state_of_json(s));
    if (j.contains("target") && !(j.at("target").is_string() && j.at("target") == "auto")) {
        spec.target_auto = false;
        spec.target = state_of_json(j.at("target"));
    }
    if (j.contains("tolerances")) {
        const json& tols = j.at("tolerances");
        if (tols.contains("cp")) spec.tol_cp = tols.at("cp").get<double>();
        if (tols.contains("verify")) spec.tol_verify = tols.at("verify").get<double>();
    }
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("samples")) spec.samples = j.at("samples").get<int>();
    return spec;
}

namespace detail {

inline json report_meta(const JobSpec& spec) {
    return {{"cp", spec.tol_cp}, {"verify", spec.tol_verify}};
}

// Synthesis entry point used by cmd_synth: dispatch on the affine dimension
// of the plaintext set. Single states and full-ball sets have no dedicated
// construction routine, so they are assembled here: the identity for a lone
// plaintext, the uniform Pauli mixture for the full ball.
inline PqcReport synthesize(const std::vector<QubitState>& plaintexts, bool target_auto,
                            const QubitState& requested) {
    const AffineSpan span = affine_span(plaintexts);
    const QubitState target = target_auto ? span.most_mixed : requested;
    const double s = target.bloch.norm();
    if (s > span.ball_radius + 1e-9)
        throw UnachievableTarget("cipher state at distance " + std::to_string(s) +
                                 " outside reachable ball of radius " +
                                 std::to_string(span.ball_radius));
    switch (span.dim) {
        case 0: {
            if (trace_distance(target, span.most_mixed) > 1e-9)
                throw UnachievableTarget(
                    "a single known plaintext has nothing to hide; only itself is synthesized");
            PqcReport report;
            report.span = span;
            report.target = span.most_mixed;
            report.ensemble.entries.push_back({1.0, Eigen::Matrix2cd::Identity()});
            report.key_entropy_bits = 0.0;
            report.min_entropy_bits = min_key_entropy(span, target);
            return report;
        }
        case 1:
            if (std::abs(s - span.ball_radius) <= 1e-9)
                return synth_two_state_surface(plaintexts,
                                               s > 1e-12 ? Eigen::Vector3d(target.bloch)
                                                         : Eigen::Vector3d::Zero());
            return synth_two_state_interior(plaintexts, target);
        case 2: return synth_three_state(plaintexts, target);
        default: {
            PqcReport report;
            report.span = span;
            report.target = maximally_mixed();
            report.ensemble = uniform_pauli_ensemble();
            report.key_entropy_bits = key_entropy_bits(report.ensemble);
            report.min_entropy_bits = min_key_entropy(span, report.target);
            return report;
        }
    }
}

} // namespace detail

inline int cmd_synth(const JobSpec& spec, std::ostream& out) {
    const PqcReport report = detail::synthesize(spec.plaintexts, spec.target_auto, spec.target);

    std::vector<Eigen::MatrixXcd> raw;
    for (const auto& s : spec.plaintexts) raw.push_back(s.matrix);
    const Verdict constancy = verify_constancy(to_ensemble_nd(report.ensemble), raw,
                                               spec.tol_verify, spec.samples, spec.seed);
    const bool cp_ok = is_cp(ensemble_to_affine(report.ensemble), spec.tol_cp);

    json j = json_of_report(report);
    j["tolerances"] = detail::report_meta(spec);
    j["seed"] = spec.seed;
    j["entropy_lower_bound_bits"] = entropy_lower_bound(report.target, report.span);
    j["cp"] = cp_ok;
    j["verification"] = {{"constancy", json_of_verdict(constancy)}};
    out << j.dump(2) << '\n';
    return (constancy.passed && cp_ok) ? k_exit_ok : k_exit_verify_failed;
}

inline int cmd_classify(const json& channel_doc, const JobSpec& spec, std::ostream& out) {
    AffineChannel c;
    bool have_ensemble = false;
    UnitaryEnsemble e;
    if (channel_doc.contains("ensemble")) {
        e = ensemble_of_json(channel_doc.at("ensemble"));
        c = ensemble_to_affine(e);
        have_ensemble = true;
    } else if (channel_doc.contains("affine")) {
        c = affine_of_json(channel_doc.at("affine"));
    } else {
        throw InvalidState("channel file needs an \"ensemble\" or \"affine\" block");
    }

    json j = {{"schema", k_report_schema},
              {"version", k_tool_version},
              {"kind", "classification"},
              {"tolerances", detail::report_meta(spec)}};
    if (!is_unital(c)) {
        j["unital"] = false;
        j["t_norm"] = c.t.norm();
        out << j.dump(2) << '\n';
        return k_exit_not_unital;
    }
    j["unital"] = true;

    const DiagonalForm form = diagonalize(c);
    json form_json = {{"lambdas", {form.lambdas(0), form.lambdas(1), form.lambdas(2)}},
                      {"pre", json::array()},
                      {"post", json::array()}};
    for (int r = 0; r < 3; ++r) {
        form_json["pre"].push_back({form.pre(r, 0), form.pre(r, 1), form.pre(r, 2)});
        form_json["post"].push_back({form.post(r, 0), form.post(r, 1), form.post(r, 2)});
    }
    j["diagonal_form"] = form_json;
    j["min_choi_eigenvalue"] = min_choi_eigenvalue(c);

    const bool cp = is_cp(c, spec.tol_cp);
    j["cp"] = cp;
    if (cp) {
        const PqcClassification cls = classify_pqc(c, spec.tol_cp);
        j["pqc"] = cls.is_pqc;
        j["vanishing_axes"] = cls.vanishing_axes;
    } else {
        j["pqc"] = false;
        j["vanishing_axes"] = json::array();
    }
    if (have_ensemble) j["key_entropy_bits"] = key_entropy_bits(e);
    out << j.dump(2) << '\n';
    return k_exit_ok;
}

inline int cmd_curve(int samples, std::ostream& out) {
    write_entropy_curve_csv(out, samples);
    return k_exit_ok;
}

inline int cmd_verify(const json& channel_doc, const JobSpec& spec, std::ostream& out) {
    if (!channel_doc.contains("ensemble"))
        throw InvalidState("verification needs the unitaries, not just the affine form");
    const UnitaryEnsemble e = ensemble_of_json(channel_doc.at("ensemble"));
    if (spec.plaintexts.empty()) throw InvalidState("verification needs plaintexts");

    std::vector<Eigen::MatrixXcd> raw;
    for (const auto& s : spec.plaintexts) raw.push_back(s.matrix);
    const Verdict constancy =
        verify_constancy(to_ensemble_nd(e), raw, spec.tol_verify, spec.samples, spec.seed);
    // Informational only: key-independent decryption without the key holds for
    // uniform-weight group schemes (one-time pads, half-turn pairs) but is not
    // implied by the encryption property, so it does not gate the exit code.
    const Verdict dual = verify_dual_constancy(e, spec.plaintexts.front(), spec.tol_verify);

    json j = {{"schema", k_report_schema},
              {"version", k_tool_version},
              {"kind", "verification"},
              {"tolerances", detail::report_meta(spec)},
              {"seed", spec.seed},
              {"verification",
               {{"constancy", json_of_verdict(constancy)}, {"dual_constancy", json_of_verdict(dual)}}}};
    out << j.dump(2) << '\n';
    return constancy.passed ? k_exit_ok : k_exit_verify_failed;
}

} // namespace pqc

#endif
