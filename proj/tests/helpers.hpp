#ifndef PQC_TEST_HELPERS_HPP
#define PQC_TEST_HELPERS_HPP

#include <Eigen/Dense>
#include <random>

#include "pqc/bloch.hpp"
#include "pqc/channel.hpp"

namespace pqc_test {

inline Eigen::Vector3d random_unit_vector(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Vector3d v;
    do {
        v = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
    } while (v.norm() < 1e-6);
    return v.normalized();
}

// uniform over the solid ball
inline Eigen::Vector3d random_ball_vector(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    return std::cbrt(uni(rng)) * random_unit_vector(rng);
}

inline pqc::QubitState random_state(std::mt19937_64& rng) {
    return pqc::state_from_bloch(random_ball_vector(rng));
}

inline pqc::QubitState random_pure(std::mt19937_64& rng) {
    return pqc::state_from_bloch(random_unit_vector(rng));
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    return Eigen::AngleAxisd(angle(rng), random_unit_vector(rng)).toRotationMatrix();
}

inline Eigen::Matrix2cd random_unitary(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    return pqc::bloch_rotation_unitary(random_unit_vector(rng), angle(rng));
}

// smallest Bloch norm over the affine hull of the given points, by grid
// search plus refinement; independent check for the closed-form minimizers
inline double brute_force_min_norm_on_line(const Eigen::Vector3d& r1, const Eigen::Vector3d& r2) {
    double lo = -4.0, hi = 5.0;
    double best = 1e300;
    for (int round = 0; round < 8; ++round) {
        double best_lam = lo;
        const int steps = 2000;
        for (int i = 0; i <= steps; ++i) {
            const double lam = lo + (hi - lo) * i / steps;
            const double norm = (lam * r1 + (1.0 - lam) * r2).norm();
            if (norm < best) {
                best = norm;
                best_lam = lam;
            }
        }
        const double width = (hi - lo) / steps;
        lo = best_lam - 2.0 * width;
        hi = best_lam + 2.0 * width;
    }
    return best;
}

} // namespace pqc_test

#endif
