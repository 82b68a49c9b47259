#include "iaware/motion.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace iaware {

NCVParams make_ncv(double T, double sigma_motion_sq) {
    if (!(T > 0.0)) {
        throw std::invalid_argument("make_ncv: time step must be positive");
    }
    if (sigma_motion_sq < 0.0) {
        throw std::invalid_argument("make_ncv: noise intensity must be nonnegative");
    }

    NCVParams p;
    p.T = T;
    p.sigma_motion_sq = sigma_motion_sq;

    Eigen::Matrix2d A;
    A << 1.0, T, 0.0, 1.0;
    Eigen::Matrix2d B0;
    B0 << T * T * T / 3.0, T * T / 2.0, T * T / 2.0, T;

    p.F.setZero();
    p.F.block<2, 2>(0, 0) = A;
    p.F.block<2, 2>(2, 2) = A;

    p.Q.setZero();
    p.Q.block<2, 2>(0, 0) = sigma_motion_sq * B0;
    p.Q.block<2, 2>(2, 2) = sigma_motion_sq * B0;

    // Factor the unit-intensity block (always SPD for T > 0) and scale, so a
    // zero intensity yields exactly the zero factor.
    const Eigen::Matrix2d L0 = Eigen::LLT<Eigen::Matrix2d>(B0).matrixL();
    const double sigma = std::sqrt(sigma_motion_sq);
    p.noise_chol.setZero();
    p.noise_chol.block<2, 2>(0, 0) = sigma * L0;
    p.noise_chol.block<2, 2>(2, 2) = sigma * L0;
    return p;
}

StateVector sample_transition(const StateVector& state, const NCVParams& params, RandomSource& rng) {
    Eigen::Vector4d z;
    for (int i = 0; i < 4; ++i) z(i) = rng.normal();
    const Eigen::Vector4d next = params.F * state.vec() + params.noise_chol * z;
    return StateVector::from(next);
}

StateVector noise_free_predict(const StateVector& state, const NCVParams& params) {
    return StateVector::from(params.F * state.vec());
}

}  // namespace iaware
