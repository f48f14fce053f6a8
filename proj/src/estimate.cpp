#include "estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "error.hpp"
#include "numerics.hpp"

namespace causal {

namespace {

struct MethodEntry {
    const char* name;
    EstimandKind kind;
};

constexpr MethodEntry kMethodTable[] = {
    {"backdoor.linear_regression", EstimandKind::kBackdoor},
    {"backdoor.propensity_score_stratification", EstimandKind::kBackdoor},
    {"backdoor.propensity_score_matching", EstimandKind::kBackdoor},
    {"backdoor.propensity_score_weighting", EstimandKind::kBackdoor},
    {"iv.wald", EstimandKind::kInstrumentalVariable},
    {"iv.two_stage_least_squares", EstimandKind::kInstrumentalVariable},
    {"iv.regression_discontinuity", EstimandKind::kInstrumentalVariable},
    {"frontdoor.two_stage_regression", EstimandKind::kFrontdoor},
    {"mediation.two_stage_regression", EstimandKind::kMediation},
};

void record(EstimatorOutput* out, const std::string& key, double value) {
    if (out) out->diagnostics[key] = value;
}

void warn(EstimatorOutput* out, const std::string& message) {
    if (out) out->warnings.push_back(message);
}

Vector column_vector(const Dataset& d, const std::string& name) {
    const auto& values = d.column(name);
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// [1, cols...] design matrix.
Matrix design_matrix(const Dataset& d, const std::vector<std::string>& cols) {
    const auto n = static_cast<Eigen::Index>(d.n_rows());
    Matrix X(n, static_cast<Eigen::Index>(cols.size() + 1));
    X.col(0).setOnes();
    for (std::size_t c = 0; c < cols.size(); ++c) {
        X.col(static_cast<Eigen::Index>(c + 1)) = column_vector(d, cols[c]);
    }
    return X;
}

std::vector<std::string> with_set(const std::string& first, const NodeSet& rest) {
    std::vector<std::string> cols{first};
    cols.insert(cols.end(), rest.begin(), rest.end());
    return cols;
}

void require_kind(const Estimand& e, EstimandKind kind, const char* estimator) {
    if (e.kind != kind) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(estimator) + " requires a " + to_string(kind) + " estimand, got " +
                        to_string(e.kind));
    }
}

void require_binary_treatment(const Dataset& d, const char* estimator) {
    if (!column_is_binary(d.treatment_values())) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(estimator) + " requires a binary treatment");
    }
}

void require_columns(const Dataset& d, const NodeSet& names) {
    for (const auto& name : names) {
        if (!d.has_column(name)) {
            throw Error(ErrorCode::kUnknownVariable,
                        "estimand variable '" + name + "' is not a dataset column");
        }
    }
}

// Propensity of treatment given the adjustment set (intercept-only when the
// set is empty).
Vector propensity_scores(const Dataset& d, const NodeSet& adjustment) {
    Matrix X = design_matrix(d, std::vector<std::string>(adjustment.begin(), adjustment.end()));
    LogisticFit fit = fit_logistic(X, column_vector(d, d.treatment()));
    return predict_proba(fit, X);
}

// Nearest-neighbor lookup over one treatment group keyed by propensity
// score; equal scores collapse to the lowest row index, and distance ties
// across two scores also resolve to the lowest row index.
class NearestOutcome {
public:
    NearestOutcome(const Vector& scores, const std::vector<double>& outcome,
                   const std::vector<std::size_t>& rows) {
        std::vector<std::size_t> order(rows);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return scores[static_cast<Eigen::Index>(a)] < scores[static_cast<Eigen::Index>(b)] ||
                   (scores[static_cast<Eigen::Index>(a)] ==
                        scores[static_cast<Eigen::Index>(b)] &&
                    a < b);
        });
        for (std::size_t row : order) {
            double s = scores[static_cast<Eigen::Index>(row)];
            if (scores_.empty() || scores_.back() != s) {
                scores_.push_back(s);
                rows_.push_back(row);
                outcomes_.push_back(outcome[row]);
            }
        }
    }

    bool empty() const { return scores_.empty(); }

    double match(double score) const {
        auto it = std::lower_bound(scores_.begin(), scores_.end(), score);
        std::size_t right = static_cast<std::size_t>(it - scores_.begin());
        if (right == 0) return outcomes_.front();
        if (right == scores_.size()) return outcomes_.back();
        std::size_t left = right - 1;
        double dl = score - scores_[left];
        double dr = scores_[right] - score;
        if (dl < dr) return outcomes_[left];
        if (dr < dl) return outcomes_[right];
        return rows_[left] < rows_[right] ? outcomes_[left] : outcomes_[right];
    }

private:
    std::vector<double> scores_;
    std::vector<std::size_t> rows_;
    std::vector<double> outcomes_;
};

}  // namespace

EstimandKind required_kind_for_method(const std::string& method) {
    for (const auto& entry : kMethodTable) {
        if (method == entry.name) return entry.kind;
    }
    std::ostringstream msg;
    msg << "unknown method '" << method << "'; known methods:";
    for (const auto& entry : kMethodTable) msg << " " << entry.name;
    throw Error(ErrorCode::kInvalidArgument, msg.str());
}

const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& entry : kMethodTable) out.emplace_back(entry.name);
        return out;
    }();
    return names;
}

std::string default_method_for_kind(EstimandKind kind) {
    for (const auto& entry : kMethodTable) {
        if (entry.kind == kind) return entry.name;
    }
    throw Error(ErrorCode::kInvalidArgument, "no method for estimand kind");
}

double backdoor_linear_regression(const Dataset& d, const Estimand& e,
                                  const EstimationConfig& cfg, EstimatorOutput* out) {
    (void)cfg;
    require_kind(e, EstimandKind::kBackdoor, "backdoor.linear_regression");
    require_columns(d, e.adjustment);
    Matrix X = design_matrix(d, with_set(d.treatment(), e.adjustment));
    LinearFit fit = fit_ols(X, column_vector(d, d.outcome()));
    record(out, "effective_n", static_cast<double>(fit.n));
    return fit.coefficients[1];
}

double propensity_score_stratification(const Dataset& d, const Estimand& e,
                                       const EstimationConfig& cfg, EstimatorOutput* out) {
    require_kind(e, EstimandKind::kBackdoor, "backdoor.propensity_score_stratification");
    require_binary_treatment(d, "propensity stratification");
    require_columns(d, e.adjustment);
    if (cfg.strata < 2) {
        throw Error(ErrorCode::kInvalidArgument, "strata count must be at least 2");
    }

    Vector p = propensity_scores(d, e.adjustment);
    std::vector<double> sorted(p.data(), p.data() + p.size());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(cfg.strata) - 1);
    for (int k = 1; k < cfg.strata; ++k) {
        edges.push_back(
            quantile_sorted(sorted, static_cast<double>(k) / static_cast<double>(cfg.strata)));
    }

    struct Bin {
        double sum1 = 0.0, sum0 = 0.0;
        std::size_t n1 = 0, n0 = 0;
    };
    std::vector<Bin> bins(static_cast<std::size_t>(cfg.strata));
    const auto& t = d.treatment_values();
    const auto& y = d.outcome_values();
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        auto it = std::lower_bound(edges.begin(), edges.end(), p[static_cast<Eigen::Index>(i)]);
        auto bin = static_cast<std::size_t>(it - edges.begin());
        if (t[i] == 1.0) {
            bins[bin].sum1 += y[i];
            ++bins[bin].n1;
        } else {
            bins[bin].sum0 += y[i];
            ++bins[bin].n0;
        }
    }

    double weighted = 0.0;
    std::size_t kept_rows = 0, dropped_rows = 0, dropped_bins = 0;
    for (const auto& bin : bins) {
        std::size_t size = bin.n1 + bin.n0;
        if (size == 0) continue;
        if (bin.n1 == 0 || bin.n0 == 0) {
            ++dropped_bins;
            dropped_rows += size;
            continue;
        }
        double diff = bin.sum1 / static_cast<double>(bin.n1) -
                      bin.sum0 / static_cast<double>(bin.n0);
        weighted += static_cast<double>(size) * diff;
        kept_rows += size;
    }
    if (kept_rows == 0) {
        throw Error(ErrorCode::kNumeric,
                    "propensity stratification: no stratum contains both treated and control "
                    "rows");
    }
    record(out, "strata_dropped", static_cast<double>(dropped_bins));
    record(out, "rows_dropped", static_cast<double>(dropped_rows));
    record(out, "effective_n", static_cast<double>(kept_rows));
    return weighted / static_cast<double>(kept_rows);
}

double propensity_score_matching(const Dataset& d, const Estimand& e,
                                 const EstimationConfig& cfg, EstimatorOutput* out) {
    require_kind(e, EstimandKind::kBackdoor, "backdoor.propensity_score_matching");
    require_binary_treatment(d, "propensity matching");
    require_columns(d, e.adjustment);
    (void)cfg;

    const auto& t = d.treatment_values();
    const auto& y = d.outcome_values();
    std::vector<std::size_t> treated, control;
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        (t[i] == 1.0 ? treated : control).push_back(i);
    }
    if (treated.empty() || control.empty()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "propensity matching needs both treated and control rows");
    }

    Vector p = propensity_scores(d, e.adjustment);
    NearestOutcome in_treated(p, y, treated);
    NearestOutcome in_control(p, y, control);

    double sum = 0.0;
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        double score = p[static_cast<Eigen::Index>(i)];
        if (t[i] == 1.0) {
            sum += y[i] - in_control.match(score);
        } else {
            sum += in_treated.match(score) - y[i];
        }
    }
    record(out, "effective_n", static_cast<double>(d.n_rows()));
    return sum / static_cast<double>(d.n_rows());
}

double inverse_propensity_weighting(const Dataset& d, const Estimand& e,
                                    const EstimationConfig& cfg, EstimatorOutput* out) {
    require_kind(e, EstimandKind::kBackdoor, "backdoor.propensity_score_weighting");
    require_binary_treatment(d, "inverse propensity weighting");
    require_columns(d, e.adjustment);
    if (!(cfg.propensity_clip > 0.0) || !(cfg.propensity_clip < 0.5)) {
        throw Error(ErrorCode::kInvalidArgument, "propensity clip must be in (0, 0.5)");
    }

    Vector p = propensity_scores(d, e.adjustment);
    const auto& t = d.treatment_values();
    const auto& y = d.outcome_values();
    const double lo = cfg.propensity_clip;
    const double hi = 1.0 - cfg.propensity_clip;

    std::size_t clipped = 0, n_treated = 0;
    double term1 = 0.0, term0 = 0.0;
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        double pi = p[static_cast<Eigen::Index>(i)];
        if (pi < lo || pi > hi) {
            pi = std::clamp(pi, lo, hi);
            ++clipped;
        }
        if (t[i] == 1.0) {
            term1 += y[i] / pi;
            ++n_treated;
        } else {
            term0 += y[i] / (1.0 - pi);
        }
    }
    if (n_treated == 0 || n_treated == d.n_rows()) {
        warn(out, "inverse propensity weighting: a treatment group is empty; the estimate is "
                  "one-sided");
    }
    record(out, "rows_clipped", static_cast<double>(clipped));
    record(out, "effective_n", static_cast<double>(d.n_rows()));
    const auto n = static_cast<double>(d.n_rows());
    return term1 / n - term0 / n;
}

double iv_wald(const Dataset& d, const Estimand& e, const EstimationConfig& cfg,
               EstimatorOutput* out) {
    (void)cfg;
    require_kind(e, EstimandKind::kInstrumentalVariable, "iv.wald");
    if (e.instruments.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "iv.wald needs at least one instrument");
    }
    const std::string& instrument = *e.instruments.begin();
    require_columns(d, {instrument});
    const auto& z = d.column(instrument);
    if (!column_is_binary(z)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "iv.wald requires a binary instrument ('" + instrument + "')");
    }

    const auto& t = d.treatment_values();
    const auto& y = d.outcome_values();
    double sum_y1 = 0.0, sum_y0 = 0.0, sum_t1 = 0.0, sum_t0 = 0.0;
    std::size_t n1 = 0, n0 = 0;
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        if (z[i] == 1.0) {
            sum_y1 += y[i];
            sum_t1 += t[i];
            ++n1;
        } else {
            sum_y0 += y[i];
            sum_t0 += t[i];
            ++n0;
        }
    }
    if (n1 == 0 || n0 == 0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "iv.wald: instrument '" + instrument + "' is constant");
    }
    double dy = sum_y1 / static_cast<double>(n1) - sum_y0 / static_cast<double>(n0);
    double dt = sum_t1 / static_cast<double>(n1) - sum_t0 / static_cast<double>(n0);
    if (std::abs(dt) < 1e-12) {
        throw Error(ErrorCode::kNumeric,
                    "iv.wald: instrument does not move the treatment (denominator ~ 0)");
    }
    record(out, "first_stage_difference", dt);
    return dy / dt;
}

double iv_two_stage_least_squares(const Dataset& d, const Estimand& e,
                                  const EstimationConfig& cfg, EstimatorOutput* out) {
    (void)cfg;
    require_kind(e, EstimandKind::kInstrumentalVariable, "iv.two_stage_least_squares");
    if (e.instruments.empty()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "iv.two_stage_least_squares needs at least one instrument");
    }
    require_columns(d, e.instruments);

    Matrix X1 = design_matrix(d, std::vector<std::string>(e.instruments.begin(),
                                                          e.instruments.end()));
    LinearFit stage1 = fit_ols(X1, column_vector(d, d.treatment()));
    Vector fitted = X1 * stage1.coefficients;
    if (fitted.maxCoeff() - fitted.minCoeff() < 1e-12) {
        throw Error(ErrorCode::kNumeric,
                    "iv.two_stage_least_squares: stage-1 fitted values are constant (weak "
                    "instrument)");
    }

    Matrix X2(fitted.size(), 2);
    X2.col(0).setOnes();
    X2.col(1) = fitted;
    LinearFit stage2 = fit_ols(X2, column_vector(d, d.outcome()));
    record(out, "first_stage_range", fitted.maxCoeff() - fitted.minCoeff());
    return stage2.coefficients[1];
}

double regression_discontinuity(const Dataset& d, const Estimand& e,
                                const EstimationConfig& cfg, EstimatorOutput* out) {
    require_kind(e, EstimandKind::kInstrumentalVariable, "iv.regression_discontinuity");
    if (!cfg.rdd_cutoff || !cfg.rdd_bandwidth || !cfg.rdd_running_variable) {
        throw Error(ErrorCode::kInvalidArgument,
                    "iv.regression_discontinuity needs rdd_cutoff, rdd_bandwidth and "
                    "rdd_running_variable");
    }
    if (!(*cfg.rdd_bandwidth > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "rdd_bandwidth must be positive");
    }
    require_columns(d, {*cfg.rdd_running_variable});
    const auto& r = d.column(*cfg.rdd_running_variable);
    const auto& y = d.outcome_values();
    const double c = *cfg.rdd_cutoff;
    const double h = *cfg.rdd_bandwidth;

    std::vector<double> xl, yl, xr, yr;
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        if (r[i] >= c && r[i] <= c + h) {
            xr.push_back(r[i] - c);
            yr.push_back(y[i]);
        } else if (r[i] >= c - h && r[i] < c) {
            xl.push_back(r[i] - c);
            yl.push_back(y[i]);
        }
    }
    constexpr std::size_t kMinSideRows = 10;
    if (xl.size() < kMinSideRows || xr.size() < kMinSideRows) {
        std::ostringstream msg;
        msg << "iv.regression_discontinuity: need at least " << kMinSideRows
            << " rows on each side of the cutoff within the bandwidth (left " << xl.size()
            << ", right " << xr.size() << ")";
        throw Error(ErrorCode::kInvalidArgument, msg.str());
    }

    auto local_intercept = [](const std::vector<double>& x, const std::vector<double>& yy) {
        Matrix X(static_cast<Eigen::Index>(x.size()), 2);
        X.col(0).setOnes();
        X.col(1) = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
        LinearFit fit =
            fit_ols(X, Eigen::Map<const Vector>(yy.data(), static_cast<Eigen::Index>(yy.size())));
        return fit.coefficients[0];
    };
    record(out, "rows_left", static_cast<double>(xl.size()));
    record(out, "rows_right", static_cast<double>(xr.size()));
    return local_intercept(xr, yr) - local_intercept(xl, yl);
}

namespace {

const std::string& single_mediator(const Estimand& e, const char* estimator) {
    if (e.mediators.size() != 1) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(estimator) +
                        " supports exactly one mediator; the estimand has " +
                        std::to_string(e.mediators.size()));
    }
    return *e.mediators.begin();
}

}  // namespace

double frontdoor_two_stage(const Dataset& d, const Estimand& e, const EstimationConfig& cfg,
                           EstimatorOutput* out) {
    (void)cfg;
    require_kind(e, EstimandKind::kFrontdoor, "frontdoor.two_stage_regression");
    const std::string& m = single_mediator(e, "frontdoor.two_stage_regression");
    require_columns(d, {m});

    Matrix X1 = design_matrix(d, {d.treatment()});
    LinearFit stage1 = fit_ols(X1, column_vector(d, m));
    double a = stage1.coefficients[1];

    Matrix X2 = design_matrix(d, {m, d.treatment()});
    LinearFit stage2 = fit_ols(X2, column_vector(d, d.outcome()));
    double b = stage2.coefficients[1];

    record(out, "stage1_coefficient", a);
    record(out, "stage2_coefficient", b);
    return a * b;
}

MediationEffects mediation_two_stage(const Dataset& d, const Estimand& e,
                                     const EstimationConfig& cfg, EstimatorOutput* out) {
    (void)cfg;
    require_kind(e, EstimandKind::kMediation, "mediation.two_stage_regression");
    const std::string& m = single_mediator(e, "mediation.two_stage_regression");
    require_columns(d, {m});
    require_columns(d, e.adjustment);

    Matrix X1 = design_matrix(d, with_set(d.treatment(), e.adjustment));
    LinearFit stage1 = fit_ols(X1, column_vector(d, m));
    double a = stage1.coefficients[1];

    std::vector<std::string> cols{d.treatment(), m};
    cols.insert(cols.end(), e.adjustment.begin(), e.adjustment.end());
    Matrix X2 = design_matrix(d, cols);
    LinearFit stage2 = fit_ols(X2, column_vector(d, d.outcome()));

    MediationEffects effects;
    effects.nde = stage2.coefficients[1];          // T coefficient
    effects.nie = a * stage2.coefficients[2];      // a * (M coefficient)
    record(out, "stage1_coefficient", a);
    record(out, "stage2_mediator_coefficient", stage2.coefficients[2]);
    return effects;
}

double point_estimate(const Dataset& d, const Estimand& e, const EstimationConfig& cfg,
                      EstimatorOutput* out) {
    EstimandKind needed = required_kind_for_method(cfg.method);
    if (needed != e.kind) {
        throw Error(ErrorCode::kInvalidArgument,
                    "method '" + cfg.method + "' requires a " + to_string(needed) +
                        " estimand, but the estimand is " + to_string(e.kind));
    }
    if (cfg.method == "backdoor.linear_regression") {
        return backdoor_linear_regression(d, e, cfg, out);
    }
    if (cfg.method == "backdoor.propensity_score_stratification") {
        return propensity_score_stratification(d, e, cfg, out);
    }
    if (cfg.method == "backdoor.propensity_score_matching") {
        return propensity_score_matching(d, e, cfg, out);
    }
    if (cfg.method == "backdoor.propensity_score_weighting") {
        return inverse_propensity_weighting(d, e, cfg, out);
    }
    if (cfg.method == "iv.wald") return iv_wald(d, e, cfg, out);
    if (cfg.method == "iv.two_stage_least_squares") {
        return iv_two_stage_least_squares(d, e, cfg, out);
    }
    if (cfg.method == "iv.regression_discontinuity") {
        return regression_discontinuity(d, e, cfg, out);
    }
    if (cfg.method == "frontdoor.two_stage_regression") {
        return frontdoor_two_stage(d, e, cfg, out);
    }
    if (cfg.method == "mediation.two_stage_regression") {
        MediationEffects effects = mediation_two_stage(d, e, cfg, out);
        record(out, "nde", effects.nde);
        record(out, "nie", effects.nie);
        return effects.nie;
    }
    throw Error(ErrorCode::kInvalidArgument, "unhandled method '" + cfg.method + "'");
}

BootstrapInterval bootstrap_ci(const Dataset& d, const Estimand& e,
                               const EstimationConfig& cfg, const PointEstimator& estimator) {
    if (cfg.bootstrap_reps < 20) {
        throw Error(ErrorCode::kInvalidArgument,
                    "bootstrap interval needs at least 20 replications");
    }
    if (!(cfg.ci_level > 0.0) || !(cfg.ci_level < 1.0)) {
        throw Error(ErrorCode::kInvalidArgument, "ci_level must be in (0, 1)");
    }
    std::vector<double> estimates;
    estimates.reserve(static_cast<std::size_t>(cfg.bootstrap_reps));
    int failures = 0;
    for (int i = 0; i < cfg.bootstrap_reps; ++i) {
        Dataset resampled = bootstrap_resample(d, cfg.seed + static_cast<std::uint64_t>(i));
        try {
            estimates.push_back(estimator(resampled, e, cfg));
        } catch (const Error&) {
            ++failures;
        }
    }
    if (failures * 2 > cfg.bootstrap_reps) {
        throw Error(ErrorCode::kNumeric,
                    "bootstrap interval: more than half of the replications failed (" +
                        std::to_string(failures) + " of " + std::to_string(cfg.bootstrap_reps) +
                        ")");
    }
    std::sort(estimates.begin(), estimates.end());
    double alpha = (1.0 - cfg.ci_level) / 2.0;
    BootstrapInterval interval;
    interval.low = quantile_sorted(estimates, alpha);
    interval.high = quantile_sorted(estimates, 1.0 - alpha);
    interval.failures = failures;
    return interval;
}

double permutation_pvalue(const Dataset& d, const Estimand& e, const EstimationConfig& cfg,
                          const PointEstimator& estimator) {
    if (cfg.permutation_reps < 1) {
        throw Error(ErrorCode::kInvalidArgument, "permutation test needs at least 1 replication");
    }
    double observed = std::abs(estimator(d, e, cfg));
    std::vector<double> treatment = d.treatment_values();
    int at_least_as_extreme = 0;
    int failures = 0;
    for (int i = 0; i < cfg.permutation_reps; ++i) {
        std::mt19937_64 engine(cfg.seed + static_cast<std::uint64_t>(i));
        std::vector<double> permuted = treatment;
        std::shuffle(permuted.begin(), permuted.end(), engine);
        Dataset shuffled = d.with_column_replaced(d.treatment(), std::move(permuted));
        try {
            if (std::abs(estimator(shuffled, e, cfg)) >= observed) ++at_least_as_extreme;
        } catch (const Error&) {
            ++failures;
        }
    }
    if (failures * 2 > cfg.permutation_reps) {
        throw Error(ErrorCode::kNumeric,
                    "permutation test: more than half of the replications failed (" +
                        std::to_string(failures) + " of " + std::to_string(cfg.permutation_reps) +
                        ")");
    }
    int successes = cfg.permutation_reps - failures;
    return (1.0 + at_least_as_extreme) / (static_cast<double>(successes) + 1.0);
}

EffectEstimate estimate_effect(const Dataset& d, const Estimand& e, const EstimationConfig& cfg,
                               std::vector<std::string>* warnings) {
    if (d.treatment() != e.treatment || d.outcome() != e.outcome) {
        throw Error(ErrorCode::kInvalidArgument,
                    "dataset roles (" + d.treatment() + ", " + d.outcome() +
                        ") do not match the estimand (" + e.treatment + ", " + e.outcome + ")");
    }

    EstimatorOutput out;
    EffectEstimate estimate;
    estimate.method = cfg.method;
    estimate.estimand = e;
    estimate.ci_level = cfg.ci_level;
    estimate.value = point_estimate(d, e, cfg, &out);

    auto plain = [](const Dataset& dd, const Estimand& ee, const EstimationConfig& cc) {
        return point_estimate(dd, ee, cc, nullptr);
    };
    if (cfg.bootstrap_reps > 0) {
        BootstrapInterval interval = bootstrap_ci(d, e, cfg, plain);
        estimate.ci = {interval.low, interval.high};
        out.diagnostics["bootstrap_failures"] = static_cast<double>(interval.failures);
        if (estimate.value < interval.low || estimate.value > interval.high) {
            out.warnings.push_back(
                "bootstrap interval does not contain the point estimate (percentile method at "
                "this replication count is approximate)");
        }
    }
    if (cfg.permutation_reps > 0) {
        estimate.p_value = permutation_pvalue(d, e, cfg, plain);
    }

    estimate.diagnostics = std::move(out.diagnostics);
    if (warnings) {
        warnings->insert(warnings->end(), out.warnings.begin(), out.warnings.end());
    }
    return estimate;
}

}  // namespace causal
