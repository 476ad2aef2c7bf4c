#ifndef PQC_VERIFY_HPP
#define PQC_VERIFY_HPP

// Independent checks of encryption claims. Everything here applies ensembles
// by direct matrix conjugation, sum_i p_i U_i rho U_i^dag, on purpose: the
// verifier must not share the Bloch-affine code path it is checking.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pqc/bloch.hpp"
#include "pqc/channel.hpp"
#include "pqc/errors.hpp"
#include "pqc/synth.hpp"

namespace pqc {

struct Verdict {
    struct Witness {
        std::string input;
        Eigen::MatrixXcd output;
        double deviation = 0.0;
    };
    bool passed = false;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    std::vector<Witness> witnesses;
};

namespace detail {

inline Eigen::MatrixXcd conjugate_through(const EnsembleND& e, const Eigen::MatrixXcd& rho) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(e.dim, e.dim);
    for (const auto& entry : e.entries) out += entry.p * entry.u * rho * entry.u.adjoint();
    return 0.5 * (out + out.adjoint().eval());
}

inline Eigen::Matrix2cd conjugate_through(const UnitaryEnsemble& e, const Eigen::Matrix2cd& rho) {
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (const auto& entry : e.entries) out += entry.p * entry.u * rho * entry.u.adjoint();
    return 0.5 * (out + out.adjoint().eval());
}

inline double trace_norm(const Eigen::MatrixXcd& m) {
    const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    return es.eigenvalues().cwiseAbs().sum();
}

// Keep the reference output plus the worst offenders, largest deviation first.
inline void push_witness(Verdict& v, const std::string& input, const Eigen::MatrixXcd& output,
                         double deviation, size_t keep = 4) {
    v.witnesses.push_back({input, output, deviation});
    std::stable_sort(v.witnesses.begin() + 1, v.witnesses.end(),
                     [](const auto& a, const auto& b) { return a.deviation > b.deviation; });
    if (v.witnesses.size() > keep) v.witnesses.resize(keep);
}

// Affine coefficients over n generators: n-1 draws from [-1, 2], the last one
// fixed by the sum-to-one constraint and rejected when out of range.
inline bool draw_affine_coefficients(std::mt19937_64& rng, int n, std::vector<double>& coeffs) {
    std::uniform_real_distribution<double> dist(-1.0, 2.0);
    coeffs.resize(n);
    double sum = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        coeffs[i] = dist(rng);
        sum += coeffs[i];
    }
    coeffs[n - 1] = 1.0 - sum;
    return coeffs[n - 1] >= -1.0 && coeffs[n - 1] <= 2.0;
}

constexpr int k_max_rejections = 200;
constexpr double k_psd_tol = 1e-9;

} // namespace detail

// Check that the ensemble sends every plaintext, and span_samples random
// states from their affine hull, to one common output.
inline Verdict verify_constancy(const EnsembleND& e,
                                const std::vector<Eigen::MatrixXcd>& plaintexts, double tolerance,
                                int span_samples = 100, std::uint64_t seed = 0) {
    validate_ensemble(e);
    if (plaintexts.empty()) throw PreconditionFailed("no plaintexts to verify");
    for (const auto& rho : plaintexts)
        if (rho.rows() != e.dim || rho.cols() != e.dim)
            throw PreconditionFailed("plaintext dimension does not match ensemble");

    Verdict v;
    v.tolerance = tolerance;
    v.seed = seed;
    const Eigen::MatrixXcd reference = detail::conjugate_through(e, plaintexts[0]);
    detail::push_witness(v, "reference output", reference, 0.0);

    auto check = [&](const Eigen::MatrixXcd& rho, const std::string& label) {
        const Eigen::MatrixXcd image = detail::conjugate_through(e, rho);
        const double deviation = detail::trace_norm(image - reference);
        if (deviation > v.max_deviation) v.max_deviation = deviation;
        if (deviation > tolerance) detail::push_witness(v, label, image, deviation);
    };

    for (size_t i = 0; i < plaintexts.size(); ++i)
        check(plaintexts[i], "plaintext[" + std::to_string(i) + "]");

    std::mt19937_64 rng(seed);
    const int n = static_cast<int>(plaintexts.size());
    std::vector<double> coeffs;
    const int samples = n == 1 ? 0 : span_samples; // hull of one state is itself
    for (int k = 0; k < samples; ++k) {
        Eigen::MatrixXcd combo;
        int attempts = 0;
        for (;; ++attempts) {
            if (attempts > detail::k_max_rejections)
                throw PreconditionFailed("affine hull sampling rejected too often");
            if (!detail::draw_affine_coefficients(rng, n, coeffs)) continue;
            combo = Eigen::MatrixXcd::Zero(e.dim, e.dim);
            for (int i = 0; i < n; ++i) combo += coeffs[i] * plaintexts[i];
            combo = 0.5 * (combo + combo.adjoint().eval());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(combo);
            if (es.eigenvalues().minCoeff() < -detail::k_psd_tol) continue;
            // floor roundoff negatives and renormalize so the sample is a state
            Eigen::VectorXd floored = es.eigenvalues().cwiseMax(0.0);
            floored /= floored.sum();
            combo = es.eigenvectors() * floored.asDiagonal() * es.eigenvectors().adjoint();
            break;
        }
        check(combo, "hull sample " + std::to_string(k));
    }
    v.passed = v.max_deviation <= tolerance;
    return v;
}

// Lines parallel to an encrypted line: if the ensemble hides {rho1, rho2}
// with output rho0, linearity and unitality force every parallel segment at
// fraction f of the way to the center onto (1 - f) rho0 + f I/2. Checks 10
// such segments, the last one through the center.
inline Verdict verify_parallel_transport(const UnitaryEnsemble& e, const QubitState& rho1,
                                         const QubitState& rho2, double tolerance) {
    validate_ensemble(e);
    const Eigen::Matrix2cd out1 = detail::conjugate_through(e, rho1.matrix);
    const Eigen::Matrix2cd out2 = detail::conjugate_through(e, rho2.matrix);
    if (detail::trace_norm(out1 - out2) > tolerance)
        throw PreconditionFailed("ensemble does not hide the given line");

    const Eigen::Vector3d r1 = rho1.bloch, r2 = rho2.bloch;
    const double lam = most_mixed_line_weight(r1, r2);
    const Eigen::Vector3d center = lam * r1 + (1.0 - lam) * r2; // closest line point to origin
    const Eigen::Vector3d direction = (r1 - r2).normalized();
    const Eigen::Vector3d g = bloch_of_matrix(out1);

    Verdict v;
    v.tolerance = tolerance;
    detail::push_witness(v, "image of the encrypted line", out1, 0.0);
    const int segments = 10;
    for (int k = 0; k < segments; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(segments - 1);
        const Eigen::Vector3d seg_center = (1.0 - f) * center;
        const Eigen::Matrix2cd expected =
            state_from_bloch((1.0 - f) * g).matrix;
        const double reach = std::sqrt(std::max(0.0, 1.0 - seg_center.squaredNorm()));
        for (double step : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
            const Eigen::Vector3d point = seg_center + step * reach * direction;
            const Eigen::Matrix2cd image =
                detail::conjugate_through(e, state_from_bloch(point).matrix);
            const double deviation = detail::trace_norm(image - expected);
            if (deviation > v.max_deviation) v.max_deviation = deviation;
            if (deviation > tolerance)
                detail::push_witness(v,
                                     "segment f=" + std::to_string(f) + " step=" +
                                         std::to_string(step),
                                     image, deviation);
        }
    }
    v.passed = v.max_deviation <= tolerance;
    return v;
}

// Receiver view: whichever key value i produced the ciphertext U_i rho U_i^dag,
// applying the full dual ensemble {p_j, U_j^dag} must give the same output.
inline Verdict verify_dual_constancy(const UnitaryEnsemble& e, const QubitState& plaintext,
                                     double tolerance) {
    validate_ensemble(e);
    const UnitaryEnsemble dual = dual_decryption(e);
    Verdict v;
    v.tolerance = tolerance;
    Eigen::Matrix2cd reference;
    for (size_t i = 0; i < e.entries.size(); ++i) {
        const Eigen::Matrix2cd cipher =
            e.entries[i].u * plaintext.matrix * e.entries[i].u.adjoint();
        const Eigen::Matrix2cd decrypted = detail::conjugate_through(dual, cipher);
        if (i == 0) {
            reference = decrypted;
            detail::push_witness(v, "dual image of ciphertext[0]", decrypted, 0.0);
            continue;
        }
        const double deviation = detail::trace_norm(decrypted - reference);
        if (deviation > v.max_deviation) v.max_deviation = deviation;
        if (deviation > tolerance)
            detail::push_witness(v, "dual image of ciphertext[" + std::to_string(i) + "]",
                                 decrypted, deviation);
    }
    v.passed = v.max_deviation <= tolerance;
    return v;
}

// The spin flip r -> -r would be the perfect 1-bit cipher for the whole ball,
// and this witness documents why it is unphysical: its Choi matrix has a
// negative eigenvalue, its Pauli mixing weights leave the simplex, and the
// honest cost of the full ball is 2 bits, not 1.
inline Verdict universal_not_witness() {
    AffineChannel flip;
    flip.T = -Eigen::Matrix3d::Identity();

    Verdict v;
    v.tolerance = k_cp_tol_default;

    const double min_eig = min_choi_eigenvalue(flip);
    const bool not_cp = !is_cp(flip, k_cp_tol_default);
    Eigen::MatrixXcd cell(1, 1);
    cell(0, 0) = min_eig;
    detail::push_witness(v, "min Choi eigenvalue", cell, 0.0, 8);

    const Eigen::Vector4d probs = pauli_probabilities(Eigen::Vector3d(-1.0, -1.0, -1.0));
    cell(0, 0) = probs(0);
    detail::push_witness(v, "identity weight p0 in the Pauli expansion", cell, 0.0, 8);
    const bool outside_simplex = probs.minCoeff() < 0.0;

    std::vector<QubitState> ball_states = {
        maximally_mixed(), state_from_bloch(Eigen::Vector3d::UnitX()),
        state_from_bloch(Eigen::Vector3d::UnitY()), state_from_bloch(Eigen::Vector3d::UnitZ())};
    const double full_ball_bits = min_key_entropy(affine_span(ball_states), maximally_mixed());
    cell(0, 0) = full_ball_bits;
    detail::push_witness(v, "minimal key entropy for the full ball", cell, 0.0, 8);

    v.max_deviation = (not_cp && outside_simplex && full_ball_bits > 1.0) ? 0.0 : 1.0;
    v.passed = v.max_deviation <= v.tolerance;
    return v;
}

// Deterministic sample of states from the affine hull of the span's
// generating plaintexts. A zero-dimensional span just repeats its single
// member. Samples with roundoff-negative spectrum are floored back onto the
// boundary, which for a qubit means rescaling the Bloch vector to length 1.
inline std::vector<QubitState> sample_states_in_span(const AffineSpan& span, int count,
                                                     std::uint64_t seed) {
    std::vector<QubitState> out;
    out.reserve(std::max(count, 0));
    const int n = static_cast<int>(span.points.size());
    if (n == 0) throw DegenerateSpan("span carries no generating points");
    if (span.dim == 0) {
        for (int k = 0; k < count; ++k) out.push_back(state_from_bloch(span.points[0]));
        return out;
    }
    std::mt19937_64 rng(seed);
    std::vector<double> coeffs;
    for (int k = 0; k < count; ++k) {
        int attempts = 0;
        for (;; ++attempts) {
            if (attempts > detail::k_max_rejections)
                throw PreconditionFailed("affine hull sampling rejected too often");
            if (!detail::draw_affine_coefficients(rng, n, coeffs)) continue;
            Eigen::Vector3d r = Eigen::Vector3d::Zero();
            for (int i = 0; i < n; ++i) r += coeffs[i] * span.points[i];
            const double norm = r.norm();
            if (norm > 1.0 + 2.0 * detail::k_psd_tol) continue;
            if (norm > 1.0) r /= norm;
            out.push_back(state_from_bloch(r));
            break;
        }
    }
    return out;
}

} // namespace pqc

#endif
