#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "error.hpp"
#include "json_writer.hpp"

namespace causal {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string resolve_graph_format(const std::string& requested, const std::string& path,
                                 const std::string& text) {
    if (requested == "dot" || requested == "gml") return requested;
    if (requested != "auto") {
        throw Error(ErrorCode::kInvalidArgument,
                    "graph format must be dot, gml or auto (got '" + requested + "')");
    }
    auto ends_with = [&](const std::string& suffix) {
        return path.size() >= suffix.size() &&
               path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with(".dot") || ends_with(".gv")) return "dot";
    if (ends_with(".gml")) return "gml";
    // Sniff the first word.
    std::istringstream in(text);
    std::string word;
    in >> word;
    if (word == "digraph") return "dot";
    if (word == "graph") return "gml";
    throw Error(ErrorCode::kParse,
                "cannot determine graph format of '" + path + "'; pass --graph-format");
}

std::vector<std::string> split_csv_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void validate_config(const AnalysisConfig& cfg) {
    if (cfg.data_path.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "missing required --data path");
    }
    if (cfg.graph_path.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "missing required --graph path");
    }
    if (cfg.treatment.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "missing required --treatment name");
    }
    if (cfg.outcome.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "missing required --outcome name");
    }
    if (cfg.graph_format != "dot" && cfg.graph_format != "gml" && cfg.graph_format != "auto") {
        throw Error(ErrorCode::kInvalidArgument,
                    "graph format must be dot, gml or auto (got '" + cfg.graph_format + "')");
    }
    if (cfg.output_format != "json" && cfg.output_format != "text") {
        throw Error(ErrorCode::kInvalidArgument,
                    "output format must be json or text (got '" + cfg.output_format + "')");
    }
    if (!cfg.method.empty()) required_kind_for_method(cfg.method);  // throws on unknown
    if (cfg.refuters) {
        const auto& known = refuter_names();
        for (const auto& name : *cfg.refuters) {
            if (std::find(known.begin(), known.end(), name) == known.end()) {
                std::ostringstream msg;
                msg << "unknown refuter '" << name << "'; valid refuters:";
                for (const auto& k : known) msg << " " << k;
                throw Error(ErrorCode::kInvalidArgument, msg.str());
            }
        }
    }
}

void apply_config_file(AnalysisConfig& cfg, const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kParse,
                    "config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::kParse, "config file must hold a JSON object");
    }
    auto unknown_key = [&](const std::string& where, const std::string& key) {
        throw Error(ErrorCode::kParse,
                    "unknown key '" + key + "' in config file section '" + where + "'");
    };
    for (const auto& [key, value] : doc.items()) {
        if (key == "data_path") cfg.data_path = value.get<std::string>();
        else if (key == "graph_path") cfg.graph_path = value.get<std::string>();
        else if (key == "graph_format") cfg.graph_format = value.get<std::string>();
        else if (key == "treatment") cfg.treatment = value.get<std::string>();
        else if (key == "outcome") cfg.outcome = value.get<std::string>();
        else if (key == "method") cfg.method = value.get<std::string>();
        else if (key == "refuters") {
            if (value.is_null()) cfg.refuters.reset();
            else cfg.refuters = value.get<std::vector<std::string>>();
        } else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "output_path") cfg.output_path = value.get<std::string>();
        else if (key == "output_format") cfg.output_format = value.get<std::string>();
        else if (key == "estimation") {
            for (const auto& [ekey, evalue] : value.items()) {
                if (ekey == "bootstrap_reps") cfg.estimation.bootstrap_reps = evalue.get<int>();
                else if (ekey == "ci_level") cfg.estimation.ci_level = evalue.get<double>();
                else if (ekey == "permutation_reps") {
                    cfg.estimation.permutation_reps = evalue.get<int>();
                } else if (ekey == "strata") cfg.estimation.strata = evalue.get<int>();
                else if (ekey == "propensity_clip") {
                    cfg.estimation.propensity_clip = evalue.get<double>();
                } else if (ekey == "rdd_cutoff") {
                    if (!evalue.is_null()) cfg.estimation.rdd_cutoff = evalue.get<double>();
                } else if (ekey == "rdd_bandwidth") {
                    if (!evalue.is_null()) cfg.estimation.rdd_bandwidth = evalue.get<double>();
                } else if (ekey == "rdd_running_variable") {
                    if (!evalue.is_null()) {
                        cfg.estimation.rdd_running_variable = evalue.get<std::string>();
                    }
                } else {
                    unknown_key("estimation", ekey);
                }
            }
        } else if (key == "refutation") {
            for (const auto& [rkey, rvalue] : value.items()) {
                if (rkey == "replications") cfg.refutation.replications = rvalue.get<int>();
                else if (rkey == "subset_fraction") {
                    cfg.refutation.subset_fraction = rvalue.get<double>();
                } else if (rkey == "significance_level") {
                    cfg.refutation.significance_level = rvalue.get<double>();
                } else if (rkey == "placebo_band") {
                    cfg.refutation.placebo_band = rvalue.get<double>();
                } else if (rkey == "sensitivity_band") {
                    cfg.refutation.sensitivity_band = rvalue.get<double>();
                } else if (rkey == "sensitivity_grid") {
                    cfg.refutation.sensitivity_grid.clear();
                    for (const auto& pair : rvalue) {
                        cfg.refutation.sensitivity_grid.emplace_back(pair.at(0).get<double>(),
                                                                     pair.at(1).get<double>());
                    }
                } else if (rkey == "simulated_beta") {
                    if (!rvalue.is_null()) {
                        cfg.refutation.simulated_beta = rvalue.get<double>();
                    }
                } else {
                    unknown_key("refutation", rkey);
                }
            }
        } else {
            unknown_key("top level", key);
        }
    }
}

}  // namespace

AnalysisConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{"causal effect analysis"};
    app.allow_extras(false);

    std::string data, graph, graph_format, treatment, outcome, method, refuters_arg, out_path,
        format, config_path, rdd_running;
    std::uint64_t seed = 0;
    int bootstrap_reps = -1, permutation_reps = -1, replications = -1;
    double rdd_cutoff = 0.0, rdd_bandwidth = 0.0, ci_level = 0.0;

    app.add_option("--data", data, "CSV data file");
    app.add_option("--graph", graph, "causal graph file (DOT or GML)");
    app.add_option("--graph-format", graph_format, "dot|gml|auto");
    app.add_option("--treatment", treatment, "treatment column name");
    app.add_option("--outcome", outcome, "outcome column name");
    app.add_option("--method", method, "estimation method name");
    app.add_option("--refuters", refuters_arg, "comma-separated refuter names, or 'none'");
    auto* seed_opt = app.add_option("--seed", seed, "base random seed");
    app.add_option("--bootstrap-reps", bootstrap_reps, "bootstrap replications (0 disables CI)");
    app.add_option("--permutation-reps", permutation_reps,
                   "permutation replications (0 disables the test)");
    auto* cutoff_opt = app.add_option("--rdd-cutoff", rdd_cutoff, "RDD cutoff");
    auto* bandwidth_opt = app.add_option("--rdd-bandwidth", rdd_bandwidth, "RDD bandwidth");
    app.add_option("--rdd-running", rdd_running, "RDD running-variable column");
    app.add_option("--out", out_path, "report output path (default: stdout)");
    app.add_option("--format", format, "json|text");
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    app.add_option("--replications", replications, "refuter replications");
    auto* ci_opt = app.add_option("--ci-level", ci_level, "confidence level in (0,1)");

    std::vector<std::string> argv_storage{"causal analyze"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(argv_storage.size());
    for (const auto& s : argv_storage) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        throw Error(ErrorCode::kInvalidArgument, app.help());
    } catch (const CLI::ParseError& e) {
        throw Error(ErrorCode::kInvalidArgument, std::string("bad arguments: ") + e.what());
    }

    AnalysisConfig cfg;
    if (!config_path.empty()) apply_config_file(cfg, config_path);

    if (!data.empty()) cfg.data_path = data;
    if (!graph.empty()) cfg.graph_path = graph;
    if (!graph_format.empty()) cfg.graph_format = graph_format;
    if (!treatment.empty()) cfg.treatment = treatment;
    if (!outcome.empty()) cfg.outcome = outcome;
    if (!method.empty()) cfg.method = method;
    if (!refuters_arg.empty()) {
        if (refuters_arg == "none") cfg.refuters = std::vector<std::string>{};
        else cfg.refuters = split_csv_list(refuters_arg);
    }
    if (seed_opt->count() > 0) {
        cfg.seed = seed;
    } else if (cfg.seed == 0) {
        if (const char* env = std::getenv("CAUSAL_SEED")) {
            try {
                cfg.seed = std::stoull(env);
            } catch (const std::exception&) {
                throw Error(ErrorCode::kInvalidArgument,
                            std::string("CAUSAL_SEED is not an integer: ") + env);
            }
        }
    }
    if (bootstrap_reps >= 0) cfg.estimation.bootstrap_reps = bootstrap_reps;
    if (permutation_reps >= 0) cfg.estimation.permutation_reps = permutation_reps;
    if (replications >= 0) cfg.refutation.replications = replications;
    if (cutoff_opt->count() > 0) cfg.estimation.rdd_cutoff = rdd_cutoff;
    if (bandwidth_opt->count() > 0) cfg.estimation.rdd_bandwidth = rdd_bandwidth;
    if (!rdd_running.empty()) cfg.estimation.rdd_running_variable = rdd_running;
    if (!out_path.empty()) cfg.output_path = out_path;
    if (!format.empty()) cfg.output_format = format;
    if (ci_opt->count() > 0) cfg.estimation.ci_level = ci_level;

    validate_config(cfg);
    return cfg;
}

Report run_pipeline(const AnalysisConfig& cfg) {
    validate_config(cfg);
    Report report;
    report.config = cfg;

    // I. Model: data + graph, with unlisted columns as potential confounders.
    Dataset data = load_csv_file(cfg.data_path, cfg.treatment, cfg.outcome);
    std::string graph_text = read_file(cfg.graph_path);
    std::string format = resolve_graph_format(cfg.graph_format, cfg.graph_path, graph_text);
    CausalGraph declared = format == "dot" ? parse_dot(graph_text, &report.warnings)
                                           : parse_gml(graph_text, &report.warnings);
    if (!declared.has_node(cfg.treatment)) {
        throw Error(ErrorCode::kUnknownVariable,
                    "treatment '" + cfg.treatment + "' is not a graph node");
    }
    if (!declared.has_node(cfg.outcome)) {
        throw Error(ErrorCode::kUnknownVariable,
                    "outcome '" + cfg.outcome + "' is not a graph node");
    }
    CausalGraph graph = augment_with_dataset_columns(declared, data.column_names(),
                                                     cfg.treatment, cfg.outcome);

    // II. Identify.
    report.identification = identify_effect(graph, cfg.treatment, cfg.outcome);
    report.warnings.insert(report.warnings.end(), report.identification.warnings.begin(),
                           report.identification.warnings.end());
    if (!report.identification.identified) {
        report.warnings.push_back("effect is not identified: no supported strategy applies");
        return report;
    }

    // Estimand/method selection: first estimand compatible with the
    // configured method, or the first estimand with its default method.
    const Estimand* chosen = nullptr;
    std::string method = cfg.method;
    if (method.empty()) {
        chosen = &report.identification.estimands.front();
        method = default_method_for_kind(chosen->kind);
    } else {
        EstimandKind needed = required_kind_for_method(method);
        for (const auto& e : report.identification.estimands) {
            if (e.kind == needed) {
                chosen = &e;
                break;
            }
        }
        if (!chosen) {
            std::ostringstream msg;
            msg << "method '" << method << "' needs a " << to_string(needed)
                << " estimand, but identification produced:";
            for (const auto& e : report.identification.estimands) {
                msg << " " << to_string(e.kind);
            }
            throw Error(ErrorCode::kInvalidArgument, msg.str());
        }
    }

    // III. Estimate.
    EstimationConfig est_cfg = cfg.estimation;
    est_cfg.method = method;
    est_cfg.seed = cfg.seed;
    report.estimate = estimate_effect(data, *chosen, est_cfg, &report.warnings);

    // IV. Refute.
    std::vector<std::string> refuters;
    if (cfg.refuters) {
        refuters = *cfg.refuters;
    } else {
        for (const auto& name : refuter_names()) {
            if (name == "simulated_outcome" && chosen->kind != EstimandKind::kBackdoor) {
                continue;  // needs an adjustment-set outcome model
            }
            refuters.push_back(name);
        }
    }
    RefuterConfig ref_cfg = cfg.refutation;
    ref_cfg.seed = cfg.seed;
    ref_cfg.estimation = est_cfg;
    report.refutations = run_refuters(refuters, data, graph, *chosen, *report.estimate, ref_cfg);
    return report;
}

namespace {

void write_node_set(JsonWriter& w, const NodeSet& set) {
    w.begin_array();
    for (const auto& name : set) w.value(name);
    w.end_array();
}

void write_estimand(JsonWriter& w, const Estimand& e) {
    w.begin_object();
    w.key("kind");
    w.value(to_string(e.kind));
    w.key("treatment");
    w.value(e.treatment);
    w.key("outcome");
    w.value(e.outcome);
    w.key("adjustment");
    write_node_set(w, e.adjustment);
    w.key("mediators");
    write_node_set(w, e.mediators);
    w.key("instruments");
    write_node_set(w, e.instruments);
    w.key("expression");
    w.value(e.expression);
    w.end_object();
}

void write_config(JsonWriter& w, const AnalysisConfig& cfg) {
    w.begin_object();
    w.key("data_path");
    w.value(cfg.data_path);
    w.key("graph_path");
    w.value(cfg.graph_path);
    w.key("graph_format");
    w.value(cfg.graph_format);
    w.key("treatment");
    w.value(cfg.treatment);
    w.key("outcome");
    w.value(cfg.outcome);
    w.key("method");
    w.value(cfg.method);
    w.key("refuters");
    if (cfg.refuters) {
        w.begin_array();
        for (const auto& name : *cfg.refuters) w.value(name);
        w.end_array();
    } else {
        w.null();
    }
    w.key("seed");
    w.value(cfg.seed);
    w.key("estimation");
    w.begin_object();
    w.key("bootstrap_reps");
    w.value(cfg.estimation.bootstrap_reps);
    w.key("ci_level");
    w.value(cfg.estimation.ci_level);
    w.key("permutation_reps");
    w.value(cfg.estimation.permutation_reps);
    w.key("strata");
    w.value(cfg.estimation.strata);
    w.key("propensity_clip");
    w.value(cfg.estimation.propensity_clip);
    w.key("rdd_cutoff");
    if (cfg.estimation.rdd_cutoff) w.value(*cfg.estimation.rdd_cutoff);
    else w.null();
    w.key("rdd_bandwidth");
    if (cfg.estimation.rdd_bandwidth) w.value(*cfg.estimation.rdd_bandwidth);
    else w.null();
    w.key("rdd_running_variable");
    if (cfg.estimation.rdd_running_variable) w.value(*cfg.estimation.rdd_running_variable);
    else w.null();
    w.end_object();
    w.key("refutation");
    w.begin_object();
    w.key("replications");
    w.value(cfg.refutation.replications);
    w.key("subset_fraction");
    w.value(cfg.refutation.subset_fraction);
    w.key("significance_level");
    w.value(cfg.refutation.significance_level);
    w.key("placebo_band");
    w.value(cfg.refutation.placebo_band);
    w.key("sensitivity_band");
    w.value(cfg.refutation.sensitivity_band);
    w.key("sensitivity_grid");
    w.begin_array();
    for (const auto& [st, sy] : cfg.refutation.sensitivity_grid) {
        w.begin_array();
        w.value(st);
        w.value(sy);
        w.end_array();
    }
    w.end_array();
    w.key("simulated_beta");
    if (cfg.refutation.simulated_beta) w.value(*cfg.refutation.simulated_beta);
    else w.null();
    w.end_object();
    w.key("output_path");
    w.value(cfg.output_path);
    w.key("output_format");
    w.value(cfg.output_format);
    w.end_object();
}

std::string render_json(const Report& report) {
    JsonWriter w;
    w.begin_object();
    w.key("tool_version");
    w.value(report.tool_version);
    w.key("config");
    write_config(w, report.config);
    w.key("identification");
    w.begin_object();
    w.key("identified");
    w.value(report.identification.identified);
    w.key("estimands");
    w.begin_array();
    for (const auto& e : report.identification.estimands) write_estimand(w, e);
    w.end_array();
    w.end_object();
    w.key("estimate");
    if (report.estimate) {
        const EffectEstimate& est = *report.estimate;
        w.begin_object();
        w.key("value");
        w.value(est.value);
        w.key("method");
        w.value(est.method);
        w.key("estimand");
        write_estimand(w, est.estimand);
        w.key("ci");
        if (est.ci) {
            w.begin_array();
            w.value(est.ci->first);
            w.value(est.ci->second);
            w.end_array();
        } else {
            w.null();
        }
        w.key("ci_level");
        w.value(est.ci_level);
        w.key("p_value");
        if (est.p_value) w.value(*est.p_value);
        else w.null();
        w.key("diagnostics");
        w.begin_object();
        for (const auto& [key, value] : est.diagnostics) {
            w.key(key);
            w.value(value);
        }
        w.end_object();
        w.end_object();
    } else {
        w.null();
    }
    w.key("refutations");
    w.begin_array();
    for (const auto& r : report.refutations) {
        w.begin_object();
        w.key("refuter");
        w.value(r.refuter);
        w.key("original_effect");
        w.value(r.original_effect);
        w.key("new_effect");
        w.value(r.new_effect);
        w.key("p_value");
        if (r.p_value) w.value(*r.p_value);
        else w.null();
        w.key("passed");
        w.value(r.passed);
        w.key("replication_effects");
        w.begin_array();
        for (double v : r.replication_effects) w.value(v);
        w.end_array();
        w.key("detail");
        w.begin_object();
        for (const auto& [key, value] : r.detail) {
            w.key(key);
            w.value(value);
        }
        w.end_object();
        w.end_object();
    }
    w.end_array();
    w.key("warnings");
    w.begin_array();
    for (const auto& warning : report.warnings) w.value(warning);
    w.end_array();
    w.end_object();
    return w.str() + "\n";
}

std::string short_num(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6g", v);
    return buffer;
}

std::string render_text(const Report& report) {
    std::ostringstream out;
    const AnalysisConfig& cfg = report.config;
    out << "causal " << report.tool_version << "\n\n";
    out << "== MODEL ==\n";
    out << "data: " << cfg.data_path << "\n";
    out << "graph: " << cfg.graph_path << " (format " << cfg.graph_format << ")\n";
    out << "treatment: " << cfg.treatment << "\n";
    out << "outcome: " << cfg.outcome << "\n";
    out << "seed: " << cfg.seed << "\n\n";

    out << "== IDENTIFY ==\n";
    out << "identified: " << (report.identification.identified ? "yes" : "no") << "\n";
    std::size_t index = 1;
    for (const auto& e : report.identification.estimands) {
        out << "[" << index++ << "] " << to_string(e.kind);
        if (!e.adjustment.empty()) out << " adjustment " << format_node_set(e.adjustment);
        if (!e.mediators.empty()) out << " mediators " << format_node_set(e.mediators);
        if (!e.instruments.empty()) out << " instruments " << format_node_set(e.instruments);
        out << "\n    " << e.expression << "\n";
    }
    out << "\n== ESTIMATE ==\n";
    if (report.estimate) {
        const EffectEstimate& est = *report.estimate;
        out << "method: " << est.method << "\n";
        out << "estimand: " << to_string(est.estimand.kind) << "\n";
        out << "value: " << short_num(est.value) << "\n";
        if (est.ci) {
            out << short_num(est.ci_level * 100.0) << "% CI: [" << short_num(est.ci->first)
                << ", " << short_num(est.ci->second) << "]\n";
        }
        if (est.p_value) out << "permutation p-value: " << short_num(*est.p_value) << "\n";
        for (const auto& [key, value] : est.diagnostics) {
            out << "  " << key << " = " << short_num(value) << "\n";
        }
    } else {
        out << "skipped: effect not identified\n";
    }
    out << "\n== REFUTE ==\n";
    if (report.refutations.empty()) out << "no refuters run\n";
    for (const auto& r : report.refutations) {
        out << r.refuter << ": new effect " << short_num(r.new_effect);
        if (r.p_value) out << ", p = " << short_num(*r.p_value);
        out << (r.passed ? "  [passed]" : "  [FAILED]") << "\n";
    }
    if (!report.warnings.empty()) {
        out << "\n== WARNINGS ==\n";
        for (const auto& warning : report.warnings) out << "- " << warning << "\n";
    }
    return out.str();
}

NodeSet node_set_from(const json& array) {
    NodeSet out;
    for (const auto& v : array) out.insert(v.get<std::string>());
    return out;
}

Estimand estimand_from(const json& doc) {
    Estimand e;
    e.kind = estimand_kind_from_string(doc.at("kind").get<std::string>());
    e.treatment = doc.at("treatment").get<std::string>();
    e.outcome = doc.at("outcome").get<std::string>();
    e.adjustment = node_set_from(doc.at("adjustment"));
    e.mediators = node_set_from(doc.at("mediators"));
    e.instruments = node_set_from(doc.at("instruments"));
    e.expression = doc.at("expression").get<std::string>();
    return e;
}

}  // namespace

void run_generate(const std::vector<std::string>& args) {
    CLI::App app{"generate a synthetic dataset with a known effect"};
    std::string spec_path, prefix;
    app.add_option("--spec-json", spec_path, "synthetic spec JSON file")->required();
    app.add_option("--out-prefix", prefix, "output path prefix")->required();

    std::vector<std::string> argv_storage{"causal generate"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_storage) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        throw Error(ErrorCode::kInvalidArgument, app.help());
    } catch (const CLI::ParseError& e) {
        throw Error(ErrorCode::kInvalidArgument, std::string("bad arguments: ") + e.what());
    }

    json doc;
    try {
        doc = json::parse(read_file(spec_path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kParse,
                    "spec file '" + spec_path + "' is not valid JSON: " + e.what());
    }
    SyntheticSpec spec;
    for (const auto& [key, value] : doc.items()) {
        if (key == "n") spec.n = value.get<std::size_t>();
        else if (key == "beta") spec.beta = value.get<double>();
        else if (key == "num_common_causes") spec.num_common_causes = value.get<std::size_t>();
        else if (key == "num_instruments") spec.num_instruments = value.get<std::size_t>();
        else if (key == "treatment_is_binary") spec.treatment_is_binary = value.get<bool>();
        else if (key == "noise_sd") spec.noise_sd = value.get<double>();
        else if (key == "seed") spec.seed = value.get<std::uint64_t>();
        else {
            throw Error(ErrorCode::kParse, "unknown key '" + key + "' in synthetic spec");
        }
    }

    SyntheticData generated = generate_linear_dataset(spec);
    auto write_file = [](const std::string& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write file '" + path + "'");
        out << content;
    };
    write_file(prefix + ".csv", to_csv(generated.data));
    write_file(prefix + ".dot", render_dot(generated.graph));
    write_file(prefix + ".gml", render_gml(generated.graph));

    JsonWriter truth;
    truth.begin_object();
    truth.key("true_ate");
    truth.value(generated.true_ate);
    truth.key("treatment");
    truth.value(generated.data.treatment());
    truth.key("outcome");
    truth.value(generated.data.outcome());
    truth.key("n");
    truth.value(spec.n);
    truth.key("seed");
    truth.value(spec.seed);
    truth.end_object();
    write_file(prefix + ".truth.json", truth.str() + "\n");
}

std::string render_report(const Report& report, const std::string& format) {
    if (format == "json") return render_json(report);
    if (format == "text") return render_text(report);
    throw Error(ErrorCode::kInvalidArgument,
                "report format must be json or text (got '" + format + "')");
}

Report report_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kParse, std::string("report is not valid JSON: ") + e.what());
    }
    Report report;
    report.tool_version = doc.at("tool_version").get<std::string>();

    const json& c = doc.at("config");
    AnalysisConfig& cfg = report.config;
    cfg.data_path = c.at("data_path").get<std::string>();
    cfg.graph_path = c.at("graph_path").get<std::string>();
    cfg.graph_format = c.at("graph_format").get<std::string>();
    cfg.treatment = c.at("treatment").get<std::string>();
    cfg.outcome = c.at("outcome").get<std::string>();
    cfg.method = c.at("method").get<std::string>();
    if (!c.at("refuters").is_null()) {
        cfg.refuters = c.at("refuters").get<std::vector<std::string>>();
    }
    cfg.seed = c.at("seed").get<std::uint64_t>();
    const json& est = c.at("estimation");
    cfg.estimation.bootstrap_reps = est.at("bootstrap_reps").get<int>();
    cfg.estimation.ci_level = est.at("ci_level").get<double>();
    cfg.estimation.permutation_reps = est.at("permutation_reps").get<int>();
    cfg.estimation.strata = est.at("strata").get<int>();
    cfg.estimation.propensity_clip = est.at("propensity_clip").get<double>();
    if (!est.at("rdd_cutoff").is_null()) {
        cfg.estimation.rdd_cutoff = est.at("rdd_cutoff").get<double>();
    }
    if (!est.at("rdd_bandwidth").is_null()) {
        cfg.estimation.rdd_bandwidth = est.at("rdd_bandwidth").get<double>();
    }
    if (!est.at("rdd_running_variable").is_null()) {
        cfg.estimation.rdd_running_variable = est.at("rdd_running_variable").get<std::string>();
    }
    const json& ref = c.at("refutation");
    cfg.refutation.replications = ref.at("replications").get<int>();
    cfg.refutation.subset_fraction = ref.at("subset_fraction").get<double>();
    cfg.refutation.significance_level = ref.at("significance_level").get<double>();
    cfg.refutation.placebo_band = ref.at("placebo_band").get<double>();
    cfg.refutation.sensitivity_band = ref.at("sensitivity_band").get<double>();
    for (const auto& pair : ref.at("sensitivity_grid")) {
        cfg.refutation.sensitivity_grid.emplace_back(pair.at(0).get<double>(),
                                                     pair.at(1).get<double>());
    }
    if (!ref.at("simulated_beta").is_null()) {
        cfg.refutation.simulated_beta = ref.at("simulated_beta").get<double>();
    }
    cfg.output_path = c.at("output_path").get<std::string>();
    cfg.output_format = c.at("output_format").get<std::string>();

    const json& ident = doc.at("identification");
    report.identification.identified = ident.at("identified").get<bool>();
    for (const auto& e : ident.at("estimands")) {
        report.identification.estimands.push_back(estimand_from(e));
    }

    if (!doc.at("estimate").is_null()) {
        const json& e = doc.at("estimate");
        EffectEstimate estimate;
        estimate.value = e.at("value").get<double>();
        estimate.method = e.at("method").get<std::string>();
        estimate.estimand = estimand_from(e.at("estimand"));
        if (!e.at("ci").is_null()) {
            estimate.ci = {e.at("ci").at(0).get<double>(), e.at("ci").at(1).get<double>()};
        }
        estimate.ci_level = e.at("ci_level").get<double>();
        if (!e.at("p_value").is_null()) estimate.p_value = e.at("p_value").get<double>();
        for (const auto& [key, value] : e.at("diagnostics").items()) {
            estimate.diagnostics[key] = value.get<double>();
        }
        report.estimate = std::move(estimate);
    }

    for (const auto& r : doc.at("refutations")) {
        RefutationResult result;
        result.refuter = r.at("refuter").get<std::string>();
        result.original_effect = r.at("original_effect").get<double>();
        result.new_effect = r.at("new_effect").get<double>();
        if (!r.at("p_value").is_null()) result.p_value = r.at("p_value").get<double>();
        result.passed = r.at("passed").get<bool>();
        for (const auto& v : r.at("replication_effects")) {
            result.replication_effects.push_back(v.get<double>());
        }
        for (const auto& [key, value] : r.at("detail").items()) {
            result.detail[key] = value.get<double>();
        }
        report.refutations.push_back(std::move(result));
    }
    for (const auto& warning : doc.at("warnings")) {
        report.warnings.push_back(warning.get<std::string>());
    }
    return report;
}

}  // namespace causal
