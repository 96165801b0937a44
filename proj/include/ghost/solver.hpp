#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ghost/sensing.hpp"

namespace ghost {

enum class SolverStatus { Converged, MaxIters, Infeasible, Degenerate };

const char* to_string(SolverStatus s);

struct SolverParams {
    double epsilon = -1.0;            // absolute residual target; < 0 -> epsilon_rel * ||y||
    double epsilon_rel = 0.02;        // used when epsilon < 0
    bool nonneg = true;               // x >= 0 projection
    int max_iters = 5000;             // per continuation stage
    double tol = 1e-8;                // relative objective change
    double kkt_tol = 0.0;             // > 0: also stop on the first-order residual
    double lambda_min_rel = 1e-6;     // continuation floor, relative to lambda0
    double continuation_ratio = 0.5;  // geometric schedule

    void validate() const;
};

struct LassoResult {
    Eigen::VectorXd x;
    int iterations = 0;
    SolverStatus status = SolverStatus::Converged;
    // objective recorded at restart points and at exit; non-increasing
    std::vector<double> objective_trace;
};

// min 0.5 ||Ax-y||^2 + lambda ||x||_1  (+ x >= 0 when params.nonneg), FISTA
// with function-value restarts. `lipschitz` <= 0 estimates ||A^T A||_2 by
// power iteration.
LassoResult lasso_fista(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double lambda,
                        const SolverParams& params, const Eigen::VectorXd* warm_start = nullptr,
                        double lipschitz = 0.0);

// Largest eigenvalue of A^T A by deterministic power iteration.
double operator_sqnorm(const Eigen::MatrixXd& A);

// Max component-wise violation of the lasso first-order conditions at x.
double lasso_kkt_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& x, double lambda, bool nonneg);

struct ReconResult {
    RealGrid estimate;                   // reshaped to the ROI (CS) or frame grid (GI)
    int iterations = 0;
    double final_residual = 0.0;         // ||Ax - y||_2 (CS only)
    std::vector<double> objective_trace;
    SolverStatus status = SolverStatus::Converged;
};

// Basis-pursuit-denoise recovery: approximately solves
//   min ||x||_1  s.t.  ||Ax - y||_2 <= epsilon  (+ x >= 0)
// by lasso_fista with geometric lambda-continuation from 0.5||A^T y||_inf.
// epsilon = 0 requests equality-constrained basis pursuit (continuation to
// the lambda floor). The estimate is mapped back through the system scaling.
ReconResult cs_reconstruct(const SensingSystem& system, const SolverParams& params);

// Second-order correlation reconstruction: per-pixel covariance between
// reference frames and buckets, max-normalized. Negative covariance values
// are retained; constant buckets yield a Degenerate status.
ReconResult gi_reconstruct(const MeasurementSet& measurements);

// Ground-truth oracle for small instances: over all supports of size <=
// k_max, the feasible least-squares solution of minimum l1 norm.
// Guards: n <= 60, k_max <= 4.
Eigen::VectorXd bp_oracle_enumerate(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                                    int k_max);

}  // namespace ghost
