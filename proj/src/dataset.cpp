#include "dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "error.hpp"

namespace causal {

namespace {

void validate_columns(const std::vector<Column>& columns, const std::string& treatment,
                      const std::string& outcome) {
    if (columns.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "dataset needs at least one column");
    }
    const std::size_t n = columns.front().values.size();
    if (n == 0) {
        throw Error(ErrorCode::kInvalidArgument, "dataset needs at least one row");
    }
    for (const auto& col : columns) {
        if (col.name.empty()) {
            throw Error(ErrorCode::kInvalidArgument, "column names must be nonempty");
        }
        if (col.values.size() != n) {
            throw Error(ErrorCode::kInvalidArgument,
                        "column '" + col.name + "' has a different length");
        }
        for (double v : col.values) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::kInvalidArgument,
                            "column '" + col.name + "' contains NaN or infinite values");
            }
        }
        std::size_t count = 0;
        for (const auto& other : columns) count += other.name == col.name;
        if (count != 1) {
            throw Error(ErrorCode::kInvalidArgument, "duplicate column name '" + col.name + "'");
        }
    }
    if (treatment == outcome) {
        throw Error(ErrorCode::kInvalidArgument, "treatment and outcome must differ");
    }
    auto present = [&](const std::string& name) {
        return std::any_of(columns.begin(), columns.end(),
                           [&](const Column& c) { return c.name == name; });
    };
    if (!present(treatment)) {
        throw Error(ErrorCode::kUnknownVariable, "missing treatment column '" + treatment + "'");
    }
    if (!present(outcome)) {
        throw Error(ErrorCode::kUnknownVariable, "missing outcome column '" + outcome + "'");
    }
}

double parse_cell(std::string_view cell, std::size_t row, const std::string& column) {
    // tolerate surrounding spaces
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << "non-numeric cell '" << std::string(cell) << "' at row " << row << ", column '"
            << column << "'";
        throw Error(ErrorCode::kParse, msg.str());
    }
    return value;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

std::string format_double(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

}  // namespace

Dataset Dataset::from_columns(std::vector<Column> columns, const std::string& treatment,
                              const std::string& outcome) {
    validate_columns(columns, treatment, outcome);
    Dataset d;
    d.n_rows_ = columns.front().values.size();
    d.columns_ = std::move(columns);
    d.treatment_ = treatment;
    d.outcome_ = outcome;
    return d;
}

bool Dataset::has_column(const std::string& name) const {
    return std::any_of(columns_.begin(), columns_.end(),
                       [&](const Column& c) { return c.name == name; });
}

const std::vector<double>& Dataset::column(const std::string& name) const {
    for (const auto& col : columns_) {
        if (col.name == name) return col.values;
    }
    throw Error(ErrorCode::kUnknownVariable, "no column named '" + name + "'");
}

std::vector<std::string> Dataset::column_names() const {
    std::vector<std::string> names;
    names.reserve(columns_.size());
    for (const auto& col : columns_) names.push_back(col.name);
    return names;
}

Dataset Dataset::with_column_replaced(const std::string& name,
                                      std::vector<double> values) const {
    std::vector<Column> columns = columns_;
    for (auto& col : columns) {
        if (col.name == name) {
            col.values = std::move(values);
            return from_columns(std::move(columns), treatment_, outcome_);
        }
    }
    throw Error(ErrorCode::kUnknownVariable, "no column named '" + name + "'");
}

Dataset Dataset::with_extra_column(const std::string& name, std::vector<double> values) const {
    std::vector<Column> columns = columns_;
    columns.push_back(Column{name, std::move(values)});
    return from_columns(std::move(columns), treatment_, outcome_);
}

Dataset Dataset::select_rows(const std::vector<std::size_t>& indices) const {
    std::vector<Column> columns;
    columns.reserve(columns_.size());
    for (const auto& col : columns_) {
        Column out{col.name, {}};
        out.values.reserve(indices.size());
        for (std::size_t i : indices) out.values.push_back(col.values.at(i));
        columns.push_back(std::move(out));
    }
    return from_columns(std::move(columns), treatment_, outcome_);
}

bool Dataset::operator==(const Dataset& other) const {
    if (n_rows_ != other.n_rows_ || treatment_ != other.treatment_ ||
        outcome_ != other.outcome_ || columns_.size() != other.columns_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name != other.columns_[i].name ||
            columns_[i].values != other.columns_[i].values) {
            return false;
        }
    }
    return true;
}

bool column_is_binary(const std::vector<double>& values) {
    return std::all_of(values.begin(), values.end(),
                       [](double v) { return v == 0.0 || v == 1.0; });
}

std::vector<VariableKind> infer_variable_kinds(const Dataset& d) {
    std::vector<VariableKind> kinds;
    kinds.reserve(d.n_columns());
    for (const auto& col : d.columns()) {
        kinds.push_back(VariableKind{col.name, column_is_binary(col.values)});
    }
    return kinds;
}

Dataset load_csv_text(const std::string& text, const std::string& treatment,
                      const std::string& outcome) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::kParse, "missing CSV header row");
    }
    std::vector<std::string> header = split_fields(line);
    if (header.size() == 1 && header[0].empty()) {
        throw Error(ErrorCode::kParse, "missing CSV header row");
    }
    // A fully numeric first row means the header was forgotten.
    bool all_numeric = std::all_of(header.begin(), header.end(), [](const std::string& field) {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        return ec == std::errc() && ptr == field.data() + field.size();
    });
    if (all_numeric) {
        throw Error(ErrorCode::kParse, "missing CSV header row (first row is numeric)");
    }
    std::vector<Column> columns;
    columns.reserve(header.size());
    for (auto& name : header) {
        while (!name.empty() && (name.front() == ' ' || name.front() == '\t')) name.erase(0, 1);
        while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.pop_back();
        if (name.empty()) throw Error(ErrorCode::kParse, "empty column name in CSV header");
        columns.push_back(Column{name, {}});
    }

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row;
        std::vector<std::string> fields = split_fields(line);
        if (fields.size() != columns.size()) {
            std::ostringstream msg;
            msg << "row " << row << " has " << fields.size() << " fields, expected "
                << columns.size();
            throw Error(ErrorCode::kParse, msg.str());
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            columns[c].values.push_back(parse_cell(fields[c], row, columns[c].name));
        }
    }
    if (row == 0) throw Error(ErrorCode::kParse, "CSV has a header but no data rows");
    return Dataset::from_columns(std::move(columns), treatment, outcome);
}

Dataset load_csv_file(const std::string& path, const std::string& treatment,
                      const std::string& outcome) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open CSV file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_csv_text(buffer.str(), treatment, outcome);
}

Dataset load_csv(const std::string& path_or_text, const std::string& treatment,
                 const std::string& outcome) {
    if (path_or_text.find('\n') != std::string::npos) {
        return load_csv_text(path_or_text, treatment, outcome);
    }
    return load_csv_file(path_or_text, treatment, outcome);
}

std::string to_csv(const Dataset& d) {
    std::string out;
    for (std::size_t c = 0; c < d.n_columns(); ++c) {
        if (c) out += ',';
        out += d.columns()[c].name;
    }
    out += '\n';
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        for (std::size_t c = 0; c < d.n_columns(); ++c) {
            if (c) out += ',';
            out += format_double(d.columns()[c].values[r]);
        }
        out += '\n';
    }
    return out;
}

SyntheticData generate_linear_dataset(const SyntheticSpec& spec) {
    if (spec.n == 0) throw Error(ErrorCode::kInvalidArgument, "synthetic spec needs n >= 1");
    if (spec.noise_sd < 0.0) {
        throw Error(ErrorCode::kInvalidArgument, "noise_sd must be nonnegative");
    }

    std::mt19937_64 engine(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);

    std::vector<Column> columns;
    columns.push_back(Column{"T", {}});
    columns.push_back(Column{"Y", {}});
    for (std::size_t j = 0; j < spec.num_common_causes; ++j) {
        columns.push_back(Column{"W" + std::to_string(j), {}});
    }
    for (std::size_t k = 0; k < spec.num_instruments; ++k) {
        columns.push_back(Column{"Z" + std::to_string(k), {}});
    }
    for (auto& col : columns) col.values.reserve(spec.n);

    for (std::size_t i = 0; i < spec.n; ++i) {
        double confounder_sum = 0.0;
        std::vector<double> w(spec.num_common_causes);
        for (std::size_t j = 0; j < spec.num_common_causes; ++j) {
            w[j] = normal(engine);
            confounder_sum += w[j];
        }
        std::vector<double> z(spec.num_instruments);
        double instrument_sum = 0.0;
        for (std::size_t k = 0; k < spec.num_instruments; ++k) {
            z[k] = coin(engine) ? 1.0 : 0.0;
            instrument_sum += z[k];
        }
        double index = confounder_sum + instrument_sum + normal(engine);
        double t = spec.treatment_is_binary ? (index > 0.0 ? 1.0 : 0.0) : index;
        double y = spec.beta * t + confounder_sum + spec.noise_sd * normal(engine);

        columns[0].values.push_back(t);
        columns[1].values.push_back(y);
        for (std::size_t j = 0; j < spec.num_common_causes; ++j) {
            columns[2 + j].values.push_back(w[j]);
        }
        for (std::size_t k = 0; k < spec.num_instruments; ++k) {
            columns[2 + spec.num_common_causes + k].values.push_back(z[k]);
        }
    }

    GraphBuilder builder;
    builder.node("T").node("Y").edge("T", "Y");
    for (std::size_t j = 0; j < spec.num_common_causes; ++j) {
        std::string w = "W" + std::to_string(j);
        builder.edge(w, "T").edge(w, "Y");
    }
    for (std::size_t k = 0; k < spec.num_instruments; ++k) {
        builder.edge("Z" + std::to_string(k), "T");
    }

    SyntheticData out{Dataset::from_columns(std::move(columns), "T", "Y"), builder.build(),
                      spec.beta};
    return out;
}

Dataset bootstrap_resample(const Dataset& d, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::uniform_int_distribution<std::size_t> pick(0, d.n_rows() - 1);
    std::vector<std::size_t> indices(d.n_rows());
    for (auto& index : indices) index = pick(engine);
    return d.select_rows(indices);
}

Dataset random_subset(const Dataset& d, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw Error(ErrorCode::kInvalidArgument, "subset fraction must be in (0, 1]");
    }
    auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(d.n_rows())));
    if (k == 0) throw Error(ErrorCode::kInvalidArgument, "subset would be empty");
    std::mt19937_64 engine(seed);
    std::vector<std::size_t> all(d.n_rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    std::sample(all.begin(), all.end(), std::back_inserter(chosen), k, engine);
    return d.select_rows(chosen);
}

}  // namespace causal
