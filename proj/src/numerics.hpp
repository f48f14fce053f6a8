#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace causal {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct LinearFit {
    Vector coefficients;  // intercept first when the caller put it first
    Vector residuals;     // y - X * coefficients
    std::size_t n = 0;
};

struct LogisticFit {
    Vector coefficients;
    bool converged = false;
    int iterations = 0;
};

inline constexpr double kDefaultRidge = 1e-6;
inline constexpr double kRankTolerance = 1e-10;

// Least squares via column-pivoted Householder QR. Throws on rank
// deficiency (numerical rank < columns at kRankTolerance relative to the
// largest pivot) and on non-finite input.
LinearFit fit_ols(const Matrix& X, const Vector& y);

// Ridge-penalized Bernoulli MLE via damped Newton/IRLS. The intercept is
// penalized along with everything else; the default ridge keeps the optimum
// finite under separation. Converged means max |step| < 1e-8 within 100
// iterations.
LogisticFit fit_logistic(const Matrix& X, const Vector& y, double ridge = kDefaultRidge);

// logistic(X * beta), every output strictly inside (0, 1).
Vector predict_proba(const LogisticFit& fit, const Matrix& X);

// Numerically symmetric sigmoid: logistic(-x) == 1 - logistic(x) exactly in
// floating point, which keeps propensity-based estimators antisymmetric
// under treatment relabeling. Output clamped strictly inside (0, 1).
double logistic(double x);

// (mean, unbiased sample variance); variance is 0 for a single element.
std::pair<double, double> mean_and_variance(std::span<const double> values);

// Linear-interpolation quantile (the "type 7" rule) of an ascending-sorted
// vector, p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

}  // namespace causal
