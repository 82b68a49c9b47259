#pragma once

#include <Eigen/Core>

#include "iaware/rfs.hpp"
#include "iaware/rng.hpp"

namespace iaware {

/// Nearly-constant-velocity model over [px vx py vy]:
///   F = blockdiag(A, A),  A = [[1, T], [0, 1]]
///   Q = blockdiag(B, B),  B = sigma_motion_sq * [[T^3/3, T^2/2], [T^2/2, T]]
struct NCVParams {
    double T = 1.0;
    double sigma_motion_sq = 0.0;
    Eigen::Matrix4d F = Eigen::Matrix4d::Identity();
    Eigen::Matrix4d Q = Eigen::Matrix4d::Zero();
    // Lower-triangular factor with Q = noise_chol * noise_chol^T; the zero
    // matrix when sigma_motion_sq == 0.
    Eigen::Matrix4d noise_chol = Eigen::Matrix4d::Zero();
};

/// Builds the NCV matrices. Rejects T <= 0 and sigma_motion_sq < 0.
NCVParams make_ncv(double T, double sigma_motion_sq);

/// One stochastic transition draw: F * state + e, e ~ N(0, Q).
StateVector sample_transition(const StateVector& state, const NCVParams& params, RandomSource& rng);

/// Deterministic prediction F * state.
StateVector noise_free_predict(const StateVector& state, const NCVParams& params);

}  // namespace iaware
