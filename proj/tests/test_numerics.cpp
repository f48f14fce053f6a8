#include <doctest.h>

#include <cmath>
#include <random>

#include "error.hpp"
#include "numerics.hpp"

using namespace causal;

TEST_CASE("fit_ols: recovers an exact line") {
    Matrix X(5, 2);
    Vector y(5);
    for (int i = 0; i < 5; ++i) {
        double x = i;
        X(i, 0) = 1.0;
        X(i, 1) = x;
        y[i] = 2.0 * x + 3.0;
    }
    LinearFit fit = fit_ols(X, y);
    CHECK(fit.coefficients[0] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(fit.coefficients[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fit.residuals.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fit_ols: constant outcome") {
    Matrix X(4, 2);
    X << 1, 0, 1, 1, 1, 2, 1, 3;
    Vector y = Vector::Constant(4, 7.5);
    LinearFit fit = fit_ols(X, y);
    CHECK(fit.coefficients[0] == doctest::Approx(7.5));
    CHECK(std::abs(fit.coefficients[1]) < 1e-12);
}

TEST_CASE("fit_ols: duplicated column is rank deficient") {
    Matrix X(6, 3);
    for (int i = 0; i < 6; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = i;
        X(i, 2) = i;  // duplicate
    }
    Vector y = Vector::Random(6);
    try {
        fit_ols(X, y);
        FAIL("expected rank-deficiency error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kNumeric);
    }
}

TEST_CASE("fit_ols: residuals orthogonal to the design, scale equivariant") {
    std::mt19937_64 engine(5);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 40;
        Matrix X(n, 3);
        Vector y(n);
        for (int i = 0; i < n; ++i) {
            X(i, 0) = 1.0;
            X(i, 1) = normal(engine);
            X(i, 2) = normal(engine);
            y[i] = 1.5 * X(i, 1) - 2.0 * X(i, 2) + normal(engine);
        }
        LinearFit fit = fit_ols(X, y);
        double scale = X.norm() * y.norm();
        CHECK((X.transpose() * fit.residuals).cwiseAbs().maxCoeff() < 1e-8 * scale);

        double c = 3.25;
        LinearFit scaled = fit_ols(X, Vector(c * y));
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(scaled.coefficients[k] - c * fit.coefficients[k]) <=
                  1e-12 * std::max(1.0, std::abs(c * fit.coefficients[k])));
        }
    }
}

TEST_CASE("fit_logistic: intercept-only model matches the sample mean") {
    int n = 200;
    Matrix X = Matrix::Ones(n, 1);
    Vector y = Vector::Zero(n);
    for (int i = 0; i < n / 4; ++i) y[i] = 1.0;  // mean 0.25
    LogisticFit fit = fit_logistic(X, y);
    CHECK(fit.converged);
    Vector p = predict_proba(fit, X);
    for (int i = 0; i < n; ++i) CHECK(p[i] == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("fit_logistic: saturated two-group model reproduces group frequencies") {
    // x=0 rows have P(y=1)=0.2, x=1 rows have P(y=1)=0.8, 10 rows each.
    int n = 20;
    Matrix X(n, 2);
    Vector y(n);
    for (int i = 0; i < n; ++i) {
        bool second = i >= 10;
        X(i, 0) = 1.0;
        X(i, 1) = second ? 1.0 : 0.0;
        int k = i % 10;
        y[i] = second ? (k < 8 ? 1.0 : 0.0) : (k < 2 ? 1.0 : 0.0);
    }
    LogisticFit fit = fit_logistic(X, y);
    REQUIRE(fit.converged);
    Vector p = predict_proba(fit, X);
    CHECK(p[0] == doctest::Approx(0.2).epsilon(1e-4));
    CHECK(p[n - 1] == doctest::Approx(0.8).epsilon(1e-4));
}

TEST_CASE("fit_logistic: separable data stays finite under the default ridge") {
    int n = 30;
    Matrix X(n, 2);
    Vector y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = i < n / 2 ? -1.0 - i * 0.1 : 1.0 + i * 0.1;
        y[i] = i < n / 2 ? 0.0 : 1.0;
    }
    LogisticFit fit = fit_logistic(X, y);
    CHECK(fit.converged);
    CHECK(std::isfinite(fit.coefficients[0]));
    CHECK(std::isfinite(fit.coefficients[1]));
    CHECK(fit.iterations <= 100);
}

TEST_CASE("fit_logistic: gradient vanishes at the solution") {
    std::mt19937_64 engine(17);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution coin;
    for (int trial = 0; trial < 20; ++trial) {
        int n = 120;
        Matrix X(n, 3);
        Vector y(n);
        for (int i = 0; i < n; ++i) {
            X(i, 0) = 1.0;
            X(i, 1) = normal(engine);
            X(i, 2) = normal(engine);
            double score = 0.3 + 0.8 * X(i, 1) - 0.5 * X(i, 2);
            y[i] = std::bernoulli_distribution(logistic(score))(engine) ? 1.0 : 0.0;
        }
        LogisticFit fit = fit_logistic(X, y);
        REQUIRE(fit.converged);
        Vector p = predict_proba(fit, X);
        Vector gradient = X.transpose() * (y - p) - kDefaultRidge * fit.coefficients;
        CHECK(gradient.cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("fit_logistic: non-binary response rejected") {
    Matrix X = Matrix::Ones(3, 1);
    Vector y(3);
    y << 0.0, 0.5, 1.0;
    CHECK_THROWS_AS(fit_logistic(X, y), Error);
}

TEST_CASE("predict_proba: zero coefficients give one half; outputs stay inside (0,1)") {
    LogisticFit fit;
    fit.coefficients = Vector::Zero(2);
    Matrix X(3, 2);
    X << 1, -1000, 1, 0, 1, 1000;
    Vector p = predict_proba(fit, X);
    for (int i = 0; i < 3; ++i) CHECK(p[i] == 0.5);

    fit.coefficients << 0.0, 1.0;
    p = predict_proba(fit, X);
    CHECK(p[0] > 0.0);
    CHECK(p[2] < 1.0);
    CHECK(p[2] > 0.999);

    Matrix wrong(2, 3);
    CHECK_THROWS_AS(predict_proba(fit, wrong), Error);
}

TEST_CASE("logistic complements exactly under negation") {
    std::mt19937_64 engine(3);
    std::uniform_real_distribution<double> uniform(-60.0, 60.0);
    for (int i = 0; i < 10000; ++i) {
        double x = uniform(engine);
        CHECK(logistic(-x) == 1.0 - logistic(x));
    }
}

TEST_CASE("mean_and_variance: hand examples") {
    std::vector<double> one{5.0};
    CHECK(mean_and_variance(one) == std::pair<double, double>{5.0, 0.0});
    std::vector<double> two{0.0, 2.0};
    CHECK(mean_and_variance(two) == std::pair<double, double>{1.0, 2.0});
    std::vector<double> flat{1.0, 1.0, 1.0, 1.0};
    CHECK(mean_and_variance(flat) == std::pair<double, double>{1.0, 0.0});
}

TEST_CASE("quantile_sorted: interpolation endpoints") {
    std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    CHECK(quantile_sorted(v, 0.0) == 1.0);
    CHECK(quantile_sorted(v, 1.0) == 4.0);
    CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
}
