#pragma once

#include <functional>

#include <Eigen/Dense>

namespace qcb {

struct SimplexOptions {
    int max_iter = 500;
    double param_tol = 1e-6;
    double value_tol = 1e-9;
};

struct SimplexResult {
    Eigen::VectorXd x;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Deterministic Nelder-Mead maximization over a box. Points are clamped to
// [lo, hi] before evaluation; ties in the vertex ordering are broken
// lexicographically on the parameters so runs are bit-reproducible.
SimplexResult nelder_mead_max(const std::function<double(const Eigen::VectorXd&)>& f,
                              const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                              const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                              const SimplexOptions& options = {});

} // namespace qcb
