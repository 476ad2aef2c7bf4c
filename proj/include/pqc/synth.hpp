#ifndef PQC_SYNTH_HPP
#define PQC_SYNTH_HPP

// Constructions: given a plaintext set, build a random-unitary ensemble that
// maps every member (and its whole affine hull) to one fixed cipher state,
// using as little key entropy as the geometry allows. All entropies are in
// bits.
//
// Geometry recap: the reachable cipher states form the ball around the
// maximally mixed state whose radius is the distance of the hull from the
// center. Lines always cost exactly 1 bit. Planes cost
// H(r) = 2 - ((1+r) lg(1+r) + (1-r) lg(1-r)) / 2, where r is the cipher
// state's distance from the center divided by the ball radius; r = 1 means a
// cipher state on the boundary of the reachable ball (1 bit), r = 0 the
// center (2 bits). The full ball costs 2 bits.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pqc/bloch.hpp"
#include "pqc/channel.hpp"
#include "pqc/errors.hpp"

namespace pqc {

namespace detail {
constexpr double k_target_tol = 1e-9; // slack on achievability comparisons

inline double xlg(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }
} // namespace detail

inline double shannon_bits(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs) h -= detail::xlg(p);
    return h;
}

inline double key_entropy_bits(const UnitaryEnsemble& e) {
    double h = 0.0;
    for (const auto& entry : e.entries) h -= detail::xlg(entry.p);
    return h;
}

// Minimal key entropy for hiding a plane, as a function of the normalized
// cipher state radius r in [0, 1].
inline double plane_key_entropy(double r) {
    return 2.0 - 0.5 * (detail::xlg(1.0 + r) + detail::xlg(1.0 - r));
}

// Von Neumann entropy of a qubit state in bits.
inline double von_neumann_bits(const QubitState& rho) {
    const double r = std::min(rho.bloch.norm(), 1.0);
    return -detail::xlg(0.5 * (1.0 + r)) - detail::xlg(0.5 * (1.0 - r));
}

// Radius of the ball of cipher states reachable from this plaintext set,
// together with the hull member realizing it.
inline std::pair<double, QubitState> achievable_ball(const std::vector<QubitState>& plaintexts) {
    const AffineSpan span = affine_span(plaintexts);
    return {span.ball_radius, span.most_mixed};
}

struct PqcReport {
    AffineSpan span;
    QubitState target;
    UnitaryEnsemble ensemble;
    double key_entropy_bits = 0.0;
    double min_entropy_bits = 0.0;
    std::optional<double> r_param; // set for plane constructions only
    bool achievable = true;
};

// Minimal key entropy needed to hide the span with cipher state `target`.
// 0 for a single plaintext (nothing is secret), 1 for lines, the H(r) curve
// for planes, 2 for the full ball.
inline double min_key_entropy(const AffineSpan& span, const QubitState& target) {
    const double s = target.bloch.norm();
    if (s > span.ball_radius + detail::k_target_tol)
        throw UnachievableTarget("cipher state at distance " + std::to_string(s) +
                                 " outside reachable ball of radius " +
                                 std::to_string(span.ball_radius));
    switch (span.dim) {
        case 0: return 0.0;
        case 1: return 1.0;
        case 2: {
            const double r = span.ball_radius <= detail::k_target_tol
                                 ? 0.0
                                 : std::min(1.0, s / span.ball_radius);
            return plane_key_entropy(r);
        }
        default: return 2.0;
    }
}

// Entropy floor independent of the construction: the key must carry at least
// the entropy of the cipher state itself.
inline double entropy_lower_bound(const QubitState& target, const AffineSpan& span) {
    (void)span; // the bound needs a pure state in the hull, which qubit
                // spans of dimension >= 1 always contain
    return von_neumann_bits(target);
}

namespace detail {

// {(1/2, V), (1/2, V U)} with U the half turn about `axis` and V aligning
// `axis` with `out_direction`; the workhorse behind every 1-bit construction.
inline UnitaryEnsemble one_bit_ensemble(const Eigen::Vector3d& axis,
                                        const Eigen::Vector3d& out_direction) {
    const Eigen::Matrix2cd u = bloch_rotation_unitary(axis, M_PI);
    Eigen::Matrix2cd v = Eigen::Matrix2cd::Identity();
    if (out_direction.norm() > 1e-12)
        v = unitary_of_rotation(rotation_aligning(axis.normalized(), out_direction.normalized()));
    UnitaryEnsemble e;
    e.entries.push_back({0.5, v});
    e.entries.push_back({0.5, v * u});
    return e;
}

// Four-unitary realization of a unital map given in diagonal form: mix the
// Paulis with the probabilities matching the lambdas, conjugated into the
// right frames.
inline UnitaryEnsemble pauli_realization(const AffineChannel& c) {
    const DiagonalForm form = diagonalize(c);
    const Eigen::Vector4d probs = pauli_probabilities(form.lambdas);
    if (probs.minCoeff() < -detail::k_prob_tol)
        throw NotCP("diagonal form outside the Pauli tetrahedron");
    const Eigen::Matrix2cd u_post = unitary_of_rotation(form.post);
    const Eigen::Matrix2cd u_pre = unitary_of_rotation(form.pre);
    UnitaryEnsemble e;
    for (int k = 0; k < 4; ++k)
        e.entries.push_back({std::max(probs(k), 0.0), u_post * pauli(k) * u_pre});
    return e;
}

inline PqcReport finish_report(AffineSpan span, const QubitState& target, UnitaryEnsemble ensemble,
                               std::optional<double> r_param) {
    PqcReport report;
    report.span = std::move(span);
    report.target = target;
    report.ensemble = std::move(ensemble);
    report.key_entropy_bits = key_entropy_bits(report.ensemble);
    report.min_entropy_bits = min_key_entropy(report.span, target);
    report.r_param = r_param;
    report.achievable = true;
    return report;
}

} // namespace detail

// Hide a two-state plaintext set with a cipher state on the boundary of the
// reachable ball, in the given direction. One key bit.
inline PqcReport synth_two_state_surface(const std::vector<QubitState>& plaintexts,
                                         const Eigen::Vector3d& target_direction) {
    AffineSpan span = affine_span(plaintexts);
    if (span.dim != 1)
        throw DegenerateSpan("surface construction requires a line, got dimension " +
                             std::to_string(span.dim));
    const double p = span.ball_radius;
    Eigen::Vector3d axis;
    QubitState target;
    if (p > detail::k_target_tol) {
        if (target_direction.norm() < 1e-12)
            throw UnachievableTarget("surface target direction must be nonzero");
        axis = span.most_mixed.bloch / p;
        target = state_from_bloch(p * target_direction.normalized());
    } else {
        // line through the center: the only reachable cipher state is the
        // center itself, and any flip axis orthogonal to the line works
        axis = orthogonal_axis(span.directions[0]);
        target = maximally_mixed();
    }
    UnitaryEnsemble e = detail::one_bit_ensemble(axis, target.bloch);
    return detail::finish_report(std::move(span), target, std::move(e), std::nullopt);
}

// Hide a three-state plaintext set (a plane) with the given cipher state.
// Boundary cipher states take one key bit; interior ones take a four-unitary
// Pauli-type ensemble with entropy H(r).
inline PqcReport synth_three_state(const std::vector<QubitState>& plaintexts,
                                   const QubitState& target) {
    AffineSpan span = affine_span(plaintexts);
    if (span.dim != 2)
        throw DegenerateSpan("plane construction requires three spanning states, got dimension " +
                             std::to_string(span.dim));
    const double p = span.ball_radius;
    const double s = target.bloch.norm();
    if (s > p + detail::k_target_tol)
        throw UnachievableTarget("cipher state at distance " + std::to_string(s) +
                                 " outside reachable ball of radius " + std::to_string(p));

    if (p <= detail::k_target_tol) {
        // plane through the center: fall back to the full mixture of Paulis
        return detail::finish_report(std::move(span), maximally_mixed(),
                                     uniform_pauli_ensemble(), 0.0);
    }
    const Eigen::Vector3d normal = span.most_mixed.bloch / p;
    if (std::abs(s - p) <= detail::k_target_tol) {
        UnitaryEnsemble e = detail::one_bit_ensemble(normal, target.bloch);
        return detail::finish_report(std::move(span), target, std::move(e), 1.0);
    }
    // interior cipher state: the rank-one map sending the plane to the target
    AffineChannel c;
    c.T = (target.bloch / p) * normal.transpose();
    UnitaryEnsemble e = detail::pauli_realization(c);
    return detail::finish_report(std::move(span), target, std::move(e), s / p);
}

// Hide a two-state plaintext set with a cipher state strictly inside the
// reachable ball. Still one key bit: the line is embedded in the plane
// tangent to the sphere of cipher states, and that plane is flipped onto its
// tangency point.
inline PqcReport synth_two_state_interior(const std::vector<QubitState>& plaintexts,
                                          const QubitState& target) {
    AffineSpan span = affine_span(plaintexts);
    if (span.dim != 1)
        throw DegenerateSpan("interior construction requires a line, got dimension " +
                             std::to_string(span.dim));
    const double p = span.ball_radius;
    const double s = target.bloch.norm();
    if (s > p + detail::k_target_tol)
        throw UnachievableTarget("cipher state at distance " + std::to_string(s) +
                                 " outside reachable ball of radius " + std::to_string(p));
    if (p <= detail::k_target_tol)
        return synth_two_state_surface(plaintexts, Eigen::Vector3d::Zero());

    const Eigen::Vector3d m_hat = span.most_mixed.bloch / p;
    const Eigen::Vector3d w = m_hat.cross(span.directions[0]); // unit, orthogonal to the line
    const double cos_psi = std::min(1.0, s / p);
    const double sin_psi = std::sqrt(std::max(0.0, 1.0 - cos_psi * cos_psi));
    const Eigen::Vector3d axis = cos_psi * m_hat + sin_psi * w;
    UnitaryEnsemble e = detail::one_bit_ensemble(axis, target.bloch);
    return detail::finish_report(std::move(span), target, std::move(e), std::nullopt);
}

// omega_jk = Tr(A_j rho A_k^dag) for A_j = sqrt(p_j) U_j, plus its entropy;
// the entropy the key leaks into the environment when encrypting rho.
struct EntropyExchange {
    Eigen::MatrixXcd omega;
    double value_bits = 0.0;
};

inline EntropyExchange entropy_exchange(const UnitaryEnsemble& e, const QubitState& rho) {
    validate_ensemble(e);
    const int n = static_cast<int>(e.entries.size());
    EntropyExchange result;
    result.omega.resize(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const double scale = std::sqrt(e.entries[j].p * e.entries[k].p);
            result.omega(j, k) =
                scale * (e.entries[j].u * rho.matrix * e.entries[k].u.adjoint()).trace();
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(result.omega);
    for (int i = 0; i < n; ++i) result.value_bits -= detail::xlg(std::max(es.eigenvalues()(i), 0.0));
    return result;
}

// Key entropy needed for a plane as a function of r, tabulated on an
// equispaced grid over [0, 1]; the pairs are (r, H(r)).
inline std::vector<std::pair<double, double>> entropy_curve(int samples) {
    if (samples < 2) throw PreconditionFailed("entropy curve needs at least 2 samples");
    std::vector<std::pair<double, double>> curve;
    curve.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double r = static_cast<double>(i) / static_cast<double>(samples - 1);
        curve.emplace_back(r, plane_key_entropy(r));
    }
    return curve;
}

// Product scheme for n qubits: every combination of the per-qubit unitaries,
// with product probabilities. Hides product plaintexts and all states in
// their affine hull, including entangled ones.
inline EnsembleND tensor_pqc(const std::vector<UnitaryEnsemble>& per_qubit) {
    if (per_qubit.empty()) throw PreconditionFailed("tensor product of zero schemes");
    for (const auto& e : per_qubit) validate_ensemble(e);
    EnsembleND nd;
    nd.dim = 1;
    nd.entries.push_back({1.0, Eigen::MatrixXcd::Identity(1, 1)});
    for (const auto& e : per_qubit) {
        EnsembleND next;
        next.dim = nd.dim * 2;
        for (const auto& done : nd.entries)
            for (const auto& entry : e.entries)
                next.entries.push_back(
                    {done.p * entry.p, Eigen::kroneckerProduct(done.u, entry.u).eval()});
        nd = std::move(next);
    }
    return nd;
}

} // namespace pqc

#endif
