#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace causal {

namespace {

// Keeps probabilities away from exactly 0/1; 2^-50 so that 1 - clamp is
// representable and complements round-trip exactly.
constexpr double kProbClamp = 8.881784197001252e-16;

void require_finite(const Matrix& X, const Vector& y, const char* where) {
    if (!X.allFinite() || !y.allFinite()) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(where) + ": input contains NaN or infinite values");
    }
}

double penalized_deviance(const Matrix& X, const Vector& y, const Vector& beta, double ridge) {
    // -log-likelihood computed as sum of log(1 + exp(-|s|)) + positive part,
    // which never overflows.
    double nll = 0.0;
    Vector s = X * beta;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        double si = s[i];
        nll += std::max(si, 0.0) - si * y[i] + std::log1p(std::exp(-std::abs(si)));
    }
    return nll + 0.5 * ridge * beta.squaredNorm();
}

}  // namespace

double logistic(double x) {
    double q = 1.0 / (1.0 + std::exp(-std::abs(x)));  // >= 0.5
    double p = x >= 0.0 ? q : 1.0 - q;                // exact complement (Sterbenz)
    if (p < kProbClamp) p = kProbClamp;
    if (p > 1.0 - kProbClamp) p = 1.0 - kProbClamp;
    return p;
}

LinearFit fit_ols(const Matrix& X, const Vector& y) {
    if (X.rows() != y.size()) {
        throw Error(ErrorCode::kInvalidArgument, "fit_ols: X rows and y length differ");
    }
    if (X.rows() < X.cols()) {
        throw Error(ErrorCode::kInvalidArgument, "fit_ols: fewer rows than regressors");
    }
    require_finite(X, y, "fit_ols");

    Eigen::ColPivHouseholderQR<Matrix> qr(X);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() < X.cols()) {
        std::ostringstream msg;
        msg << "fit_ols: design matrix is rank deficient (rank " << qr.rank() << " of "
            << X.cols() << ")";
        throw Error(ErrorCode::kNumeric, msg.str());
    }
    LinearFit fit;
    fit.coefficients = qr.solve(y);
    fit.residuals = y - X * fit.coefficients;
    fit.n = static_cast<std::size_t>(X.rows());
    return fit;
}

LogisticFit fit_logistic(const Matrix& X, const Vector& y, double ridge) {
    if (X.rows() != y.size()) {
        throw Error(ErrorCode::kInvalidArgument, "fit_logistic: X rows and y length differ");
    }
    if (X.rows() < X.cols()) {
        throw Error(ErrorCode::kInvalidArgument, "fit_logistic: fewer rows than regressors");
    }
    if (ridge < 0.0) {
        throw Error(ErrorCode::kInvalidArgument, "fit_logistic: ridge must be nonnegative");
    }
    require_finite(X, y, "fit_logistic");
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] != 0.0 && y[i] != 1.0) {
            throw Error(ErrorCode::kInvalidArgument,
                        "fit_logistic: response must be binary (0/1)");
        }
    }

    const Eigen::Index p = X.cols();
    Vector beta = Vector::Zero(p);
    double objective = penalized_deviance(X, y, beta, ridge);

    LogisticFit fit;
    constexpr int kMaxIterations = 100;
    for (int iter = 1; iter <= kMaxIterations; ++iter) {
        fit.iterations = iter;
        Vector s = X * beta;
        Vector prob(s.size());
        Vector w(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            prob[i] = logistic(s[i]);
            w[i] = prob[i] * (1.0 - prob[i]);
        }
        if (!prob.allFinite() || !w.allFinite()) {
            throw Error(ErrorCode::kNumeric,
                        ridge == 0.0 ? "fit_logistic: separation failure (NaN weights; "
                                       "consider a positive ridge)"
                                     : "fit_logistic: NaN appeared in IRLS weights");
        }

        Vector gradient = X.transpose() * (y - prob) - ridge * beta;
        Matrix hessian = X.transpose() * w.asDiagonal() * X;
        hessian.diagonal().array() += ridge;
        Vector step = hessian.ldlt().solve(gradient);
        if (!step.allFinite()) {
            throw Error(ErrorCode::kNumeric, "fit_logistic: Newton step is not finite");
        }

        // Damped Newton: halve until the penalized deviance stops increasing.
        double scale = 1.0;
        Vector candidate = beta + step;
        double candidate_objective = penalized_deviance(X, y, candidate, ridge);
        int halvings = 0;
        while (candidate_objective > objective && halvings < 40) {
            scale *= 0.5;
            candidate = beta + scale * step;
            candidate_objective = penalized_deviance(X, y, candidate, ridge);
            ++halvings;
        }
        double max_change = (scale * step).cwiseAbs().maxCoeff();
        beta = candidate;
        objective = candidate_objective;
        if (max_change < 1e-8) {
            fit.converged = true;
            break;
        }
    }
    fit.coefficients = beta;
    return fit;
}

Vector predict_proba(const LogisticFit& fit, const Matrix& X) {
    if (X.cols() != fit.coefficients.size()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "predict_proba: column count does not match the fit");
    }
    Vector s = X * fit.coefficients;
    Vector out(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) out[i] = logistic(s[i]);
    return out;
}

std::pair<double, double> mean_and_variance(std::span<const double> values) {
    if (values.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "mean_and_variance: empty input");
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    double mean = sum / static_cast<double>(values.size());
    if (values.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) {
        double d = v - mean;
        ss += d * d;
    }
    return {mean, ss / static_cast<double>(values.size() - 1)};
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "quantile_sorted: empty input");
    }
    if (p <= 0.0) return sorted.front();
    if (p >= 1.0) return sorted.back();
    double h = static_cast<double>(sorted.size() - 1) * p;
    auto lo = static_cast<std::size_t>(h);
    double frac = h - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace causal
