#include "ghost/solver.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace ghost {

const char* to_string(SolverStatus s) {
    switch (s) {
        case SolverStatus::Converged: return "converged";
        case SolverStatus::MaxIters: return "max_iters";
        case SolverStatus::Infeasible: return "infeasible";
        case SolverStatus::Degenerate: return "degenerate";
    }
    return "unknown";
}

void SolverParams::validate() const {
    if (epsilon >= 0.0 && !(epsilon >= 0.0)) throw std::invalid_argument("solver: epsilon");
    if (epsilon < 0.0 && !(epsilon_rel >= 0.0))
        throw std::invalid_argument("solver: epsilon_rel must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("solver: iteration cap must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("solver: tol must be > 0");
    if (!(lambda_min_rel > 0.0 && lambda_min_rel <= 1.0))
        throw std::invalid_argument("solver: lambda_min_rel must be in (0,1]");
    if (!(continuation_ratio > 0.0 && continuation_ratio < 1.0))
        throw std::invalid_argument("solver: continuation_ratio must be in (0,1)");
}

double operator_sqnorm(const Eigen::MatrixXd& A) {
    const Eigen::Index n = A.cols();
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    double sq = 0.0;
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd w = A.transpose() * (A * v);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
        sq = nw;
    }
    return sq;
}

namespace {

double objective(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                 double lambda) {
    return 0.5 * (A * x - y).squaredNorm() + lambda * x.lpNorm<1>();
}

Eigen::VectorXd shrink(const Eigen::VectorXd& z, double thresh, bool nonneg) {
    Eigen::VectorXd out(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double v = z(i);
        if (nonneg) {
            out(i) = std::max(0.0, v - thresh);
        } else {
            out(i) = v > thresh ? v - thresh : (v < -thresh ? v + thresh : 0.0);
        }
    }
    return out;
}

}  // namespace

double lasso_kkt_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& x, double lambda, bool nonneg) {
    const Eigen::VectorXd g = A.transpose() * (A * x - y);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double v;
        if (nonneg) {
            // stationarity: g + lambda >= 0, complementarity at x > 0
            v = x(i) > 0.0 ? std::abs(g(i) + lambda) : std::max(0.0, -(g(i) + lambda));
        } else {
            v = x(i) != 0.0 ? std::abs(g(i) + lambda * (x(i) > 0.0 ? 1.0 : -1.0))
                            : std::max(0.0, std::abs(g(i)) - lambda);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

LassoResult lasso_fista(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double lambda,
                        const SolverParams& params, const Eigen::VectorXd* warm_start,
                        double lipschitz) {
    params.validate();
    if (lambda < 0.0) throw std::invalid_argument("lasso_fista: lambda must be >= 0");
    const Eigen::Index n = A.cols();

    double L = lipschitz > 0.0 ? lipschitz : operator_sqnorm(A) * 1.01;
    if (L <= 0.0) L = 1.0;

    LassoResult res;
    Eigen::VectorXd x = warm_start ? *warm_start : Eigen::VectorXd::Zero(n);
    Eigen::VectorXd x_prev = x;
    Eigen::VectorXd yk = x;
    double t = 1.0;

    double f_best = objective(A, y, x, lambda);
    Eigen::VectorXd x_best = x;
    double f_last_checked = f_best;
    res.objective_trace.push_back(f_best);
    res.status = SolverStatus::MaxIters;

    for (int it = 0; it < params.max_iters; ++it) {
        const Eigen::VectorXd g = A.transpose() * (A * yk - y);
        Eigen::VectorXd x_next = shrink(yk - g / L, lambda / L, params.nonneg);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        yk = x_next + ((t - 1.0) / t_next) * (x_next - x);
        x_prev = x;
        x = x_next;
        t = t_next;
        res.iterations = it + 1;

        if ((it + 1) % 25 == 0 || it + 1 == params.max_iters) {
            const double f = objective(A, y, x, lambda);
            if (f > f_best) {
                // function-value restart: fall back to the best iterate and
                // drop the momentum, so the restart-point trace is monotone
                x = x_best;
                yk = x;
                t = 1.0;
                res.objective_trace.push_back(f_best);
            } else {
                f_best = f;
                x_best = x;
            }
            if (params.kkt_tol > 0.0) {
                if (lasso_kkt_residual(A, y, x_best, lambda, params.nonneg) <= params.kkt_tol) {
                    res.status = SolverStatus::Converged;
                    break;
                }
            } else if (std::abs(f_last_checked - std::min(f, f_best)) <=
                       params.tol * std::max(1.0, std::abs(f_last_checked))) {
                res.status = SolverStatus::Converged;
                break;
            }
            f_last_checked = std::min(f, f_best);
        }
    }
    if (objective(A, y, x, lambda) > f_best) x = x_best;
    res.x = std::move(x);
    res.objective_trace.push_back(objective(A, y, res.x, lambda));
    return res;
}

ReconResult cs_reconstruct(const SensingSystem& system, const SolverParams& params) {
    params.validate();
    const Eigen::MatrixXd& A = system.A;
    const Eigen::VectorXd& y = system.y;
    if (!A.allFinite() || !y.allFinite())
        throw std::invalid_argument("cs_reconstruct: non-finite entries");
    if (system.roi.count() != static_cast<std::size_t>(A.cols()))
        throw std::invalid_argument("cs_reconstruct: ROI does not match the system width");

    const double eps = params.epsilon >= 0.0 ? params.epsilon : params.epsilon_rel * y.norm();
    const double lambda0 = 0.5 * (A.transpose() * y).cwiseAbs().maxCoeff();
    const double lambda_min = lambda0 * params.lambda_min_rel;
    const double L = operator_sqnorm(A) * 1.01;

    ReconResult out;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());
    double lambda = lambda0;
    double res_prev = y.norm();
    out.status = SolverStatus::MaxIters;

    while (true) {
        LassoResult stage = lasso_fista(A, y, lambda, params, &x, L);
        x = stage.x;
        out.iterations += stage.iterations;
        out.objective_trace.insert(out.objective_trace.end(), stage.objective_trace.begin(),
                                   stage.objective_trace.end());
        const double res = (A * x - y).norm();
        if (res <= eps) {
            out.status = SolverStatus::Converged;
            break;
        }
        if (lambda <= lambda_min) {
            if (eps == 0.0) {
                // equality-constrained basis pursuit realized as the
                // continuation floor
                out.status = stage.status;
            } else {
                // residual stagnation across stages signals eps below
                // dist(y, range(A))
                out.status = res > res_prev * (1.0 - 1e-6) ? SolverStatus::Infeasible
                                                           : SolverStatus::MaxIters;
            }
            break;
        }
        res_prev = res;
        lambda = std::max(lambda * params.continuation_ratio, lambda_min);
    }

    if (eps == 0.0 && x.size() > 0) {
        // equality-constrained basis pursuit: remove the lambda_min shrinkage
        // bias by least squares on the recovered support
        const double floor = 1e-9 * x.cwiseAbs().maxCoeff();
        std::vector<Eigen::Index> support;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            if (std::abs(x(i)) > floor) support.push_back(i);
        if (!support.empty() && support.size() <= static_cast<std::size_t>(A.rows())) {
            Eigen::MatrixXd As(A.rows(), static_cast<Eigen::Index>(support.size()));
            for (std::size_t j = 0; j < support.size(); ++j)
                As.col(static_cast<Eigen::Index>(j)) = A.col(support[j]);
            Eigen::VectorXd xs = As.colPivHouseholderQr().solve(y);
            Eigen::VectorXd polished = Eigen::VectorXd::Zero(x.size());
            bool sign_ok = true;
            for (std::size_t j = 0; j < support.size(); ++j) {
                if (params.nonneg && xs(static_cast<Eigen::Index>(j)) < 0.0) sign_ok = false;
                polished(support[j]) = xs(static_cast<Eigen::Index>(j));
            }
            if (sign_ok && (A * polished - y).norm() <= (A * x - y).norm()) x = polished;
        }
    }

    Eigen::VectorXd solution = unscale_solution(system, x);
    out.final_residual = (A * x - y).norm();

    RealGrid estimate(system.roi.rows, system.roi.cols,
                      system.roi_pitch > 0.0 ? system.roi_pitch : 1.0);
    for (std::size_t i = 0; i < system.roi.rows; ++i)
        for (std::size_t j = 0; j < system.roi.cols; ++j)
            estimate(i, j) = solution(static_cast<Eigen::Index>(i * system.roi.cols + j));
    out.estimate = std::move(estimate);
    return out;
}

Eigen::VectorXd bp_oracle_enumerate(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                                    int k_max) {
    const Eigen::Index n = A.cols();
    if (n > 60) throw std::invalid_argument("bp_oracle_enumerate: n must be <= 60");
    if (k_max < 0 || k_max > 4) throw std::invalid_argument("bp_oracle_enumerate: k_max must be <= 4");

    const double feas_tol = 1e-9 * std::max(1.0, y.norm());
    double best_l1 = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best = Eigen::VectorXd::Zero(n);
    bool found = false;

    if (y.norm() <= feas_tol) return best;  // x = 0 is feasible with minimal l1

    std::vector<int> support;
    auto try_support = [&](const std::vector<int>& s) {
        if (s.empty()) return;
        Eigen::MatrixXd As(A.rows(), static_cast<Eigen::Index>(s.size()));
        for (std::size_t j = 0; j < s.size(); ++j) As.col(static_cast<Eigen::Index>(j)) = A.col(s[j]);
        Eigen::VectorXd xs = As.colPivHouseholderQr().solve(y);
        if ((As * xs - y).norm() > feas_tol) return;
        const double l1 = xs.lpNorm<1>();
        if (l1 < best_l1) {
            best_l1 = l1;
            best.setZero();
            for (std::size_t j = 0; j < s.size(); ++j) best(s[j]) = xs(static_cast<Eigen::Index>(j));
            found = true;
        }
    };

    // enumerate supports of size 1..k_max
    std::function<void(int, int)> recurse = [&](int start, int remaining) {
        if (remaining == 0) {
            try_support(support);
            return;
        }
        for (int i = start; i < static_cast<int>(n); ++i) {
            support.push_back(i);
            recurse(i + 1, remaining - 1);
            support.pop_back();
        }
    };
    for (int k = 1; k <= k_max; ++k) recurse(0, k);

    if (!found)
        throw std::runtime_error("bp_oracle_enumerate: no feasible support of size <= k_max");
    return best;
}

}  // namespace ghost
