#ifndef PQC_CHANNEL_HPP
#define PQC_CHANNEL_HPP

// Random-unitary channels and their affine picture on the Bloch ball.
// A channel rho -> sum_i p_i U_i rho U_i^dag acts on Bloch vectors as
// r -> T r + t with t = 0; the module converts between the two views,
// brings T to diagonal form, builds the Choi matrix and decides complete
// positivity, and classifies which channels are perfect encryptors.

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>
#include <vector>

#include "pqc/bloch.hpp"
#include "pqc/errors.hpp"

namespace pqc {

namespace detail {
constexpr double k_unitary_tol = 1e-10;  // |U U^dag - I| allowed entrywise
constexpr double k_prob_tol = 1e-12;     // probability sum slack
constexpr double k_unital_tol = 1e-9;    // |t| above this is treated as non-unital
constexpr double k_vanish_tol = 1e-9;    // |lambda| below this counts as a killed axis
} // namespace detail

constexpr double k_cp_tol_default = 1e-9;

struct UnitaryEnsemble {
    struct Entry {
        double p;
        Eigen::Matrix2cd u;
    };
    std::vector<Entry> entries;
};

struct AffineChannel {
    Eigen::Matrix3d T = Eigen::Matrix3d::Identity();
    Eigen::Vector3d t = Eigen::Vector3d::Zero();
};

// T = post * diag(lambdas) * pre with both factors proper rotations; any
// reflection parts of T are pushed into the signs of the lambdas, so
// lambda_1 * lambda_2 * lambda_3 = det T. Lambdas come out ordered by
// decreasing magnitude with any sign carried by the last entry.
struct DiagonalForm {
    Eigen::Vector3d lambdas = Eigen::Vector3d::Ones();
    Eigen::Matrix3d pre = Eigen::Matrix3d::Identity();
    Eigen::Matrix3d post = Eigen::Matrix3d::Identity();
};

// (E x id) applied to the projector on (|00> + |11>)/sqrt(2); trace one.
struct ChoiMatrix {
    Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Zero();
};

inline void validate_ensemble(const UnitaryEnsemble& e) {
    if (e.entries.empty()) throw BadDistribution("ensemble has no entries");
    double sum = 0.0;
    for (const auto& entry : e.entries) {
        if (entry.p < -detail::k_prob_tol)
            throw BadDistribution("negative probability " + std::to_string(entry.p));
        sum += entry.p;
        const Eigen::Matrix2cd defect =
            entry.u * entry.u.adjoint() - Eigen::Matrix2cd::Identity();
        if (defect.cwiseAbs().maxCoeff() > detail::k_unitary_tol)
            throw InvalidState("ensemble entry is not unitary");
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw BadDistribution("probabilities sum to " + std::to_string(sum));
}

inline QubitState apply(const UnitaryEnsemble& e, const QubitState& rho) {
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (const auto& entry : e.entries) out += entry.p * entry.u * rho.matrix * entry.u.adjoint();
    out = 0.5 * (out + out.adjoint().eval());
    out /= out.trace().real(); // absorbs the slack of nearly-unitary entries
    return state_from_matrix(out);
}

inline QubitState apply(const AffineChannel& c, const QubitState& rho) {
    return state_from_bloch(c.T * rho.bloch + c.t);
}

// SU(2) element rotating the Bloch ball by `angle` about `axis`:
// cos(angle/2) I - i sin(angle/2) axis.sigma.
inline Eigen::Matrix2cd bloch_rotation_unitary(const Eigen::Vector3d& axis, double angle) {
    const Eigen::Vector3d n = axis.normalized();
    const complex ms(0.0, -std::sin(angle / 2.0));
    return std::cos(angle / 2.0) * Eigen::Matrix2cd::Identity() +
           ms * (n.x() * pauli_x() + n.y() * pauli_y() + n.z() * pauli_z());
}

// Bloch rotation matrix of a single unitary, R_jk = Tr(sigma_j U sigma_k U^dag) / 2.
inline Eigen::Matrix3d rotation_of_unitary(const Eigen::Matrix2cd& u) {
    Eigen::Matrix3d r;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            r(j, k) = 0.5 * (pauli(j + 1) * u * pauli(k + 1) * u.adjoint()).trace().real();
    return r;
}

// SU(2) element whose Bloch action is the given proper rotation.
inline Eigen::Matrix2cd unitary_of_rotation(const Eigen::Matrix3d& r) {
    const Eigen::AngleAxisd aa(r);
    return bloch_rotation_unitary(aa.axis(), aa.angle());
}

inline AffineChannel ensemble_to_affine(const UnitaryEnsemble& e) {
    validate_ensemble(e);
    AffineChannel c;
    c.T.setZero();
    for (const auto& entry : e.entries) c.T += entry.p * rotation_of_unitary(entry.u);
    Eigen::Matrix2cd image_of_identity = Eigen::Matrix2cd::Zero();
    for (const auto& entry : e.entries)
        image_of_identity += entry.p * entry.u * entry.u.adjoint();
    c.t = 0.5 * bloch_of_matrix(image_of_identity);
    return c;
}

inline bool is_unital(const AffineChannel& c) { return c.t.norm() <= detail::k_unital_tol; }

inline DiagonalForm diagonalize(const AffineChannel& c) {
    if (!is_unital(c)) throw NotUnital("diagonal form requires t = 0, got |t| = " +
                                       std::to_string(c.t.norm()));
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(c.T, Eigen::ComputeFullU | Eigen::ComputeFullV);
    DiagonalForm form;
    Eigen::Matrix3d post = svd.matrixU();
    Eigen::Matrix3d v = svd.matrixV();
    form.lambdas = svd.singularValues();
    if (post.determinant() < 0.0) {
        post.col(2) *= -1.0;
        form.lambdas(2) *= -1.0;
    }
    if (v.determinant() < 0.0) {
        v.col(2) *= -1.0;
        form.lambdas(2) *= -1.0;
    }
    form.post = post;
    form.pre = v.transpose();
    return form;
}

inline ChoiMatrix choi(const AffineChannel& c) {
    ChoiMatrix omega;
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    for (int k = 0; k < 3; ++k) {
        const Eigen::Matrix2cd lhs = c.t(k) * pauli(k + 1);
        m += Eigen::kroneckerProduct(lhs, Eigen::Matrix2cd::Identity()).eval();
    }
    for (int l = 0; l < 3; ++l) {
        Eigen::Matrix2cd image = Eigen::Matrix2cd::Zero();
        for (int k = 0; k < 3; ++k) image += c.T(k, l) * pauli(k + 1);
        m += Eigen::kroneckerProduct(image, pauli(l + 1).transpose().eval()).eval();
    }
    omega.matrix = 0.25 * m;
    return omega;
}

inline ChoiMatrix choi(const UnitaryEnsemble& e) {
    validate_ensemble(e);
    Eigen::Vector4cd psi;
    psi << 1, 0, 0, 1;
    psi /= std::sqrt(2.0);
    const Eigen::Matrix4cd bell = psi * psi.adjoint();
    ChoiMatrix omega;
    for (const auto& entry : e.entries) {
        const Eigen::Matrix4cd big =
            Eigen::kroneckerProduct(entry.u, Eigen::Matrix2cd::Identity()).eval();
        omega.matrix += entry.p * big * bell * big.adjoint();
    }
    return omega;
}

inline double min_choi_eigenvalue(const AffineChannel& c) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(choi(c).matrix);
    return es.eigenvalues().minCoeff();
}

inline bool is_cp(const AffineChannel& c, double tol = k_cp_tol_default) {
    if (!is_unital(c)) throw NotUnital("complete positivity test implemented for unital maps");
    return min_choi_eigenvalue(c) >= -tol;
}

// Probabilities (p0, px, py, pz) of the Pauli channel whose diagonal Bloch
// action is diag(lambdas); entries may be negative when no such channel
// exists. Inverse of the map lambdas_of_pauli_probabilities below.
inline Eigen::Vector4d pauli_probabilities(const Eigen::Vector3d& lam) {
    Eigen::Vector4d p;
    p(1) = 0.25 * (1.0 + lam(0) - lam(1) - lam(2));
    p(2) = 0.25 * (1.0 - lam(0) + lam(1) - lam(2));
    p(3) = 0.25 * (1.0 - lam(0) - lam(1) + lam(2));
    p(0) = 1.0 - p(1) - p(2) - p(3);
    return p;
}

inline Eigen::Vector3d lambdas_of_pauli_probabilities(const Eigen::Vector4d& p) {
    return Eigen::Vector3d(1.0 - 2.0 * (p(2) + p(3)), 1.0 - 2.0 * (p(1) + p(3)),
                           1.0 - 2.0 * (p(1) + p(2)));
}

// The four linear constraints cutting out the tetrahedron of completely
// positive diagonal unital maps; equivalent to all pauli_probabilities being
// nonnegative, and the probabilities are exactly the Choi eigenvalues of the
// diagonal map, so this test and the Choi eigenvalue route must agree.
inline bool cp_inequalities_hold(const Eigen::Vector3d& lam, double tol = k_cp_tol_default) {
    return pauli_probabilities(lam).minCoeff() >= -tol;
}

struct PqcClassification {
    bool is_pqc = false;
    std::vector<int> vanishing_axes; // indices into form.lambdas
    DiagonalForm form;
};

// A unital CP channel hides some nontrivial plaintext family iff at least one
// singular value of T vanishes; the corresponding rows of `pre` span the
// directions that get erased.
inline PqcClassification classify_pqc(const AffineChannel& c, double tol = k_cp_tol_default) {
    if (!is_unital(c)) throw NotUnital("classification defined for unital channels");
    if (!is_cp(c, tol))
        throw NotCP("map is not completely positive, min Choi eigenvalue " +
                    std::to_string(min_choi_eigenvalue(c)));
    PqcClassification result;
    result.form = diagonalize(c);
    for (int k = 0; k < 3; ++k)
        if (std::abs(result.form.lambdas(k)) < detail::k_vanish_tol)
            result.vanishing_axes.push_back(k);
    result.is_pqc = !result.vanishing_axes.empty();
    return result;
}

// Decryption side of a shared-key scheme: the receiver undoes U_i with U_i^dag.
inline UnitaryEnsemble dual_decryption(const UnitaryEnsemble& e) {
    UnitaryEnsemble dual;
    for (const auto& entry : e.entries) dual.entries.push_back({entry.p, entry.u.adjoint()});
    return dual;
}

// Gram matrix G_jk = Tr(U_j^dag U_k); diagonal is 2, and G = 2 I iff the
// ensemble is an orthogonal set in the Hilbert-Schmidt inner product.
inline Eigen::MatrixXcd orthogonality_gram(const UnitaryEnsemble& e) {
    const int n = static_cast<int>(e.entries.size());
    Eigen::MatrixXcd g(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            g(j, k) = (e.entries[j].u.adjoint() * e.entries[k].u).trace();
    return g;
}

inline UnitaryEnsemble convex_combine(const std::vector<UnitaryEnsemble>& parts,
                                      const std::vector<double>& weights) {
    if (parts.size() != weights.size() || parts.empty())
        throw BadDistribution("need matching, nonempty channel and weight lists");
    double sum = 0.0;
    for (double w : weights) {
        if (w < -detail::k_prob_tol) throw BadDistribution("negative mixing weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw BadDistribution("mixing weights sum to " + std::to_string(sum));
    UnitaryEnsemble mixed;
    for (size_t i = 0; i < parts.size(); ++i)
        for (const auto& entry : parts[i].entries)
            mixed.entries.push_back({weights[i] * entry.p, entry.u});
    return mixed;
}

inline UnitaryEnsemble uniform_pauli_ensemble() {
    UnitaryEnsemble e;
    for (int k = 0; k < 4; ++k) e.entries.push_back({0.25, pauli(k)});
    return e;
}

// Ensemble acting on a d-dimensional system, d >= 2; multi-qubit schemes and
// the verification routines work on these raw matrices directly.
struct EnsembleND {
    struct Entry {
        double p;
        Eigen::MatrixXcd u;
    };
    int dim = 2;
    std::vector<Entry> entries;
};

inline EnsembleND to_ensemble_nd(const UnitaryEnsemble& e) {
    EnsembleND nd;
    nd.dim = 2;
    for (const auto& entry : e.entries) nd.entries.push_back({entry.p, entry.u});
    return nd;
}

inline void validate_ensemble(const EnsembleND& e) {
    if (e.entries.empty()) throw BadDistribution("ensemble has no entries");
    if (e.dim < 2) throw PreconditionFailed("ensemble dimension must be at least 2");
    double sum = 0.0;
    for (const auto& entry : e.entries) {
        if (entry.p < -detail::k_prob_tol)
            throw BadDistribution("negative probability " + std::to_string(entry.p));
        sum += entry.p;
        if (entry.u.rows() != e.dim || entry.u.cols() != e.dim)
            throw PreconditionFailed("ensemble entry has wrong dimension");
        const Eigen::MatrixXcd defect =
            entry.u * entry.u.adjoint() - Eigen::MatrixXcd::Identity(e.dim, e.dim);
        if (defect.cwiseAbs().maxCoeff() > detail::k_unitary_tol)
            throw InvalidState("ensemble entry is not unitary");
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw BadDistribution("probabilities sum to " + std::to_string(sum));
}

} // namespace pqc

#endif
