#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "graph.hpp"

namespace causal {

struct Column {
    std::string name;
    std::vector<double> values;
};

// Columnar numeric table with designated treatment/outcome roles. Immutable
// after construction; the with_* helpers return modified copies.
class Dataset {
public:
    static Dataset from_columns(std::vector<Column> columns, const std::string& treatment,
                                const std::string& outcome);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_columns() const { return columns_.size(); }
    const std::vector<Column>& columns() const { return columns_; }
    const std::string& treatment() const { return treatment_; }
    const std::string& outcome() const { return outcome_; }

    bool has_column(const std::string& name) const;
    const std::vector<double>& column(const std::string& name) const;
    const std::vector<double>& treatment_values() const { return column(treatment_); }
    const std::vector<double>& outcome_values() const { return column(outcome_); }
    std::vector<std::string> column_names() const;

    Dataset with_column_replaced(const std::string& name, std::vector<double> values) const;
    Dataset with_extra_column(const std::string& name, std::vector<double> values) const;
    Dataset select_rows(const std::vector<std::size_t>& indices) const;

    bool operator==(const Dataset& other) const;

private:
    std::vector<Column> columns_;
    std::size_t n_rows_ = 0;
    std::string treatment_;
    std::string outcome_;
};

struct VariableKind {
    std::string name;
    bool binary = false;  // true iff every value is 0.0 or 1.0
};

std::vector<VariableKind> infer_variable_kinds(const Dataset& d);

bool column_is_binary(const std::vector<double>& values);

// CSV ingestion: header row required, comma delimiter, every body cell a
// decimal number. `path_or_text` is treated as inline text when it contains
// a newline, otherwise as a file path.
Dataset load_csv(const std::string& path_or_text, const std::string& treatment,
                 const std::string& outcome);
Dataset load_csv_text(const std::string& text, const std::string& treatment,
                      const std::string& outcome);
Dataset load_csv_file(const std::string& path, const std::string& treatment,
                      const std::string& outcome);

std::string to_csv(const Dataset& d);

// Synthetic linear data-generating process with unit coefficients:
//   W_j ~ N(0,1), Z_k ~ Bernoulli(0.5)
//   s   = sum_j W_j + sum_k Z_k + eps_t,        eps_t ~ N(0,1)
//   T   = 1{s > 0} if binary else s
//   Y   = beta * T + sum_j W_j + eps_y,         eps_y ~ N(0, noise_sd)
// The matching graph has W_j -> {T, Y}, Z_k -> T, and T -> Y.
struct SyntheticSpec {
    std::size_t n = 1000;
    double beta = 1.0;
    std::size_t num_common_causes = 0;
    std::size_t num_instruments = 0;
    bool treatment_is_binary = true;
    double noise_sd = 1.0;
    std::uint64_t seed = 0;
};

struct SyntheticData {
    Dataset data;
    CausalGraph graph;
    double true_ate = 0.0;
};

SyntheticData generate_linear_dataset(const SyntheticSpec& spec);

// n_rows rows drawn with replacement; deterministic per seed.
Dataset bootstrap_resample(const Dataset& d, std::uint64_t seed);

// ceil(fraction * n_rows) distinct rows, fraction in (0, 1]; deterministic
// per seed.
Dataset random_subset(const Dataset& d, double fraction, std::uint64_t seed);

}  // namespace causal
