#ifndef PQC_BLOCH_HPP
#define PQC_BLOCH_HPP

// Qubit states as Bloch vectors plus the affine geometry of plaintext sets:
// spans, their most mixed member, the radius of reachable cipher states and
// a canonical frame that rotates a span into a fixed reference position.
//
// Distance convention used throughout: D(rho, sigma) = Tr|rho - sigma| with
// no 1/2 in front. For qubits this equals the Euclidean distance of the
// Bloch vectors, so the Bloch ball has radius 1 and orthogonal pure states
// are at distance 2.

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "pqc/errors.hpp"

namespace pqc {

using complex = std::complex<double>;

inline Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

inline Eigen::Matrix2cd pauli_y() {
    Eigen::Matrix2cd m;
    m << 0, complex(0, -1), complex(0, 1), 0;
    return m;
}

inline Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

inline Eigen::Matrix2cd pauli(int k) {
    switch (k) {
        case 0: return Eigen::Matrix2cd::Identity();
        case 1: return pauli_x();
        case 2: return pauli_y();
        default: return pauli_z();
    }
}

// Density matrix and its Bloch vector kept side by side and in sync.
struct QubitState {
    Eigen::Matrix2cd matrix;
    Eigen::Vector3d bloch;
};

namespace detail {
constexpr double k_state_tol = 1e-12;   // trace / hermiticity slack
constexpr double k_ball_tol = 1e-9;     // |bloch| may exceed 1 by this much
constexpr double k_rank_tol = 1e-9;     // relative singular value cutoff
} // namespace detail

inline Eigen::Vector3d bloch_of_matrix(const Eigen::Matrix2cd& m) {
    Eigen::Vector3d r;
    r.x() = (m * pauli_x()).trace().real();
    r.y() = (m * pauli_y()).trace().real();
    r.z() = (m * pauli_z()).trace().real();
    return r;
}

inline QubitState state_from_bloch(const Eigen::Vector3d& r) {
    if (r.norm() > 1.0 + detail::k_ball_tol)
        throw BlochOutOfBall("Bloch vector norm " + std::to_string(r.norm()) + " exceeds 1");
    QubitState s;
    s.bloch = r;
    s.matrix = 0.5 * (Eigen::Matrix2cd::Identity() + r.x() * pauli_x() + r.y() * pauli_y() +
                      r.z() * pauli_z());
    return s;
}

inline QubitState state_from_matrix(const Eigen::Matrix2cd& m) {
    if (std::abs(m.trace().real() - 1.0) > detail::k_state_tol ||
        std::abs(m.trace().imag()) > detail::k_state_tol)
        throw InvalidState("state matrix must have unit trace");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > detail::k_state_tol)
        throw InvalidState("state matrix must be Hermitian");
    QubitState s;
    s.matrix = m;
    s.bloch = bloch_of_matrix(m);
    if (s.bloch.norm() > 1.0 + detail::k_ball_tol)
        throw InvalidState("state matrix is not positive semidefinite");
    return s;
}

inline QubitState maximally_mixed() { return state_from_bloch(Eigen::Vector3d::Zero()); }

// Tr|rho - sigma| via the eigenvalues of the (Hermitian) difference.
inline double trace_distance(const QubitState& a, const QubitState& b) {
    Eigen::Matrix2cd d = a.matrix - b.matrix;
    d = 0.5 * (d + d.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(d);
    return es.eigenvalues().cwiseAbs().sum();
}

// First unit vector from the standard basis, Gram-Schmidt reduced against v,
// that survives; used whenever an axis orthogonal to v has to be picked
// deterministically.
inline Eigen::Vector3d orthogonal_axis(const Eigen::Vector3d& v) {
    const double vn = v.norm();
    for (int k = 0; k < 3; ++k) {
        Eigen::Vector3d e = Eigen::Vector3d::Unit(k);
        if (vn > 0.0) e -= (e.dot(v) / (vn * vn)) * v;
        if (e.norm() > 1e-6) return e.normalized();
    }
    return Eigen::Vector3d::UnitX(); // unreachable: v cannot shadow all three axes
}

// Proper rotation taking unit vector a onto unit vector b. Antiparallel pairs
// get a half turn about a deterministically chosen orthogonal axis.
inline Eigen::Matrix3d rotation_aligning(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    const Eigen::Vector3d cross = a.cross(b);
    const double sin_angle = cross.norm();
    const double cos_angle = a.dot(b);
    if (sin_angle < 1e-14) {
        if (cos_angle >= 0.0) return Eigen::Matrix3d::Identity();
        return Eigen::AngleAxisd(M_PI, orthogonal_axis(a)).toRotationMatrix();
    }
    return Eigen::AngleAxisd(std::atan2(sin_angle, cos_angle), cross.normalized())
        .toRotationMatrix();
}

// Affine hull of a plaintext set in Bloch coordinates. dim counts the
// direction vectors; the hull is basepoint + span(directions). most_mixed is
// the point of the hull closest to the center of the ball and ball_radius its
// distance from the center; cipher states are exactly the states at most that
// far from the center. points keeps the ingested Bloch vectors so that later
// stages can draw affine combinations of the original plaintexts.
struct AffineSpan {
    int dim = 0;
    Eigen::Vector3d basepoint = Eigen::Vector3d::Zero();
    std::vector<Eigen::Vector3d> directions;
    QubitState most_mixed;
    double ball_radius = 0.0;
    std::vector<Eigen::Vector3d> points;
};

inline AffineSpan affine_span(const std::vector<QubitState>& plaintexts) {
    if (plaintexts.empty()) throw DegenerateSpan("affine span of an empty plaintext set");
    AffineSpan span;
    for (const QubitState& s : plaintexts) span.points.push_back(s.bloch);

    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (const Eigen::Vector3d& v : span.points) centroid += v;
    centroid /= static_cast<double>(span.points.size());
    span.basepoint = centroid;

    Eigen::MatrixXd centered(span.points.size(), 3);
    for (size_t i = 0; i < span.points.size(); ++i)
        centered.row(i) = (span.points[i] - centroid).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double cutoff = detail::k_rank_tol * std::max(sv.size() > 0 ? sv(0) : 0.0, 1.0);
    for (int k = 0; k < sv.size() && k < 3; ++k)
        if (sv(k) > cutoff) span.directions.push_back(svd.matrixV().col(k));
    span.dim = static_cast<int>(span.directions.size());

    // closest point of the hull to the center: project the basepoint onto the
    // orthogonal complement of the direction space
    Eigen::Vector3d m = centroid;
    for (const Eigen::Vector3d& d : span.directions) m -= d.dot(centroid) * d;
    span.ball_radius = m.norm();
    span.most_mixed = state_from_bloch(m);
    return span;
}

// Mixing weight that minimizes the Bloch norm along the line through r1, r2;
// the minimizer of |lam*r1 + (1-lam)*r2|.
inline double most_mixed_line_weight(const Eigen::Vector3d& r1, const Eigen::Vector3d& r2) {
    const double denom = (r1 - r2).squaredNorm();
    if (denom < 1e-24) throw DegenerateSpan("line through two coinciding states");
    return (r2.squaredNorm() - r1.dot(r2)) / denom;
}

inline QubitState most_mixed_on_line(const QubitState& a, const QubitState& b) {
    const double lam = most_mixed_line_weight(a.bloch, b.bloch);
    return state_from_bloch(lam * a.bloch + (1.0 - lam) * b.bloch);
}

// Distance of the plane through three Bloch points from the center, computed
// by the determinant route: with the plane written as a*x + b*y + c*z = d the
// distance is |d| / sqrt(a^2 + b^2 + c^2). Kept separate from affine_span so
// the two derivations can check each other.
inline double plane_distance(const QubitState& s1, const QubitState& s2, const QubitState& s3) {
    Eigen::Matrix3d points; // one Bloch point per row
    points << s1.bloch.transpose(), s2.bloch.transpose(), s3.bloch.transpose();
    const double d = points.determinant();
    Eigen::Vector3d coeff; // a, b, c of the plane a*x + b*y + c*z = d
    for (int k = 0; k < 3; ++k) {
        Eigen::Matrix3d m = points;
        m.col(k) = Eigen::Vector3d::Ones();
        coeff(k) = m.determinant();
    }
    const double normal = coeff.norm();
    const double scale = std::max(1.0, points.cwiseAbs().maxCoeff());
    if (normal <= detail::k_rank_tol * scale * scale)
        throw DegenerateSpan("plane through collinear points is not determined");
    return std::abs(d) / normal;
}

// Rotation that moves a span into the reference position. Lines land in the
// x-z plane with the most mixed point on the +z axis; alpha is then the half
// chord sqrt(1 - radius^2), the distance from the most mixed point to either
// pure state of the line, and beta is unused. Planes land on the plane through
// (alpha,0,0), (0,beta,0), (0,0,1); the distance equation fixes only a
// symmetric function of alpha and beta, and since a tilted circle has no
// preferred axis we resolve it by alpha = beta. Spans through the center of
// the ball keep radius 0; they set the degenerate flag and alpha, beta are
// not meaningful in the plane case.
struct CanonicalFrame {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    double alpha = 0.0;
    double beta = 0.0;
    bool degenerate = false;
};

inline CanonicalFrame canonical_frame(const AffineSpan& span) {
    if (span.dim != 1 && span.dim != 2)
        throw DegenerateSpan("canonical frame requires a span of dimension 1 or 2, got " +
                             std::to_string(span.dim));
    CanonicalFrame frame;
    const Eigen::Vector3d m = span.most_mixed.bloch;
    const double p = span.ball_radius;

    if (span.dim == 1) {
        Eigen::Vector3d x_axis = span.directions[0];
        // deterministic sign: largest-magnitude component made positive
        int imax = 0;
        x_axis.cwiseAbs().maxCoeff(&imax);
        if (x_axis(imax) < 0.0) x_axis = -x_axis;
        Eigen::Vector3d z_axis;
        if (p > detail::k_ball_tol) {
            z_axis = m / p;
        } else {
            frame.degenerate = true;
            z_axis = orthogonal_axis(x_axis);
        }
        const Eigen::Vector3d y_axis = z_axis.cross(x_axis);
        frame.rotation.row(0) = x_axis.transpose();
        frame.rotation.row(1) = y_axis.transpose();
        frame.rotation.row(2) = z_axis.transpose();
        frame.alpha = std::sqrt(std::max(0.0, 1.0 - p * p));
        frame.beta = 0.0;
        return frame;
    }

    Eigen::Vector3d normal = span.directions[0].cross(span.directions[1]).normalized();
    if (p > detail::k_ball_tol) {
        normal = m / p;
        const double s = p;
        const double ab = s * std::sqrt(2.0) / std::sqrt(1.0 - s * s);
        frame.alpha = ab;
        frame.beta = ab;
        Eigen::Vector3d reference(frame.beta, frame.alpha, frame.alpha * frame.beta);
        frame.rotation = rotation_aligning(normal, reference.normalized());
    } else {
        // plane through the center: no reference triple exists, just expose
        // a frame with the plane rotated onto the x-y plane
        frame.degenerate = true;
        int imax = 0;
        normal.cwiseAbs().maxCoeff(&imax);
        if (normal(imax) < 0.0) normal = -normal;
        frame.rotation = rotation_aligning(normal, Eigen::Vector3d::UnitZ());
    }
    return frame;
}

} // namespace pqc

#endif
