#include "causal/causal.h"

#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "identify.hpp"
#include "json_writer.hpp"
#include "report.hpp"

struct causal_graph {
    causal::CausalGraph graph;
};

struct causal_dataset {
    causal::Dataset dataset;
};

struct causal_report {
    causal::Report report;
    std::string json;
    std::string text;
};

namespace {

thread_local std::string g_last_error;

causal_status fail(const std::exception& e) {
    g_last_error = e.what();
    return CAUSAL_ERROR;
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string identification_json(const causal::IdentificationResult& result) {
    causal::JsonWriter w;
    w.begin_object();
    w.key("identified");
    w.value(result.identified);
    w.key("estimands");
    w.begin_array();
    for (const auto& e : result.estimands) {
        w.begin_object();
        w.key("kind");
        w.value(causal::to_string(e.kind));
        w.key("treatment");
        w.value(e.treatment);
        w.key("outcome");
        w.value(e.outcome);
        auto set = [&w](const char* key, const causal::NodeSet& names) {
            w.key(key);
            w.begin_array();
            for (const auto& name : names) w.value(name);
            w.end_array();
        };
        set("adjustment", e.adjustment);
        set("mediators", e.mediators);
        set("instruments", e.instruments);
        w.key("expression");
        w.value(e.expression);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

}  // namespace

extern "C" {

const char* causal_version(void) { return causal::kToolVersion; }

const char* causal_last_error(void) { return g_last_error.c_str(); }

void causal_string_free(char* text) { delete[] text; }

causal_status causal_graph_parse(const char* text, const char* format, causal_graph** out) {
    if (!text || !format || !out) {
        g_last_error = "causal_graph_parse: null argument";
        return CAUSAL_ERROR;
    }
    try {
        std::string fmt = format;
        if (fmt == "auto") {
            std::string input = text;
            auto start = input.find_first_not_of(" \t\r\n");
            fmt = (start != std::string::npos && input.compare(start, 7, "digraph") == 0)
                      ? "dot"
                      : "gml";
        }
        causal::CausalGraph graph;
        if (fmt == "dot") {
            graph = causal::parse_dot(text);
        } else if (fmt == "gml") {
            graph = causal::parse_gml(text);
        } else {
            throw causal::Error(causal::ErrorCode::kInvalidArgument,
                                "graph format must be dot, gml or auto");
        }
        *out = new causal_graph{std::move(graph)};
        return CAUSAL_OK;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

void causal_graph_free(causal_graph* graph) { delete graph; }

size_t causal_graph_node_count(const causal_graph* graph) {
    return graph ? graph->graph.node_count() : 0;
}

size_t causal_graph_edge_count(const causal_graph* graph) {
    return graph ? graph->graph.edge_count() : 0;
}

causal_status causal_graph_render_dot(const causal_graph* graph, char** out_text) {
    if (!graph || !out_text) {
        g_last_error = "causal_graph_render_dot: null argument";
        return CAUSAL_ERROR;
    }
    try {
        *out_text = copy_string(causal::render_dot(graph->graph));
        return CAUSAL_OK;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

causal_status causal_dataset_load_csv(const char* path, const char* treatment,
                                      const char* outcome, causal_dataset** out) {
    if (!path || !treatment || !outcome || !out) {
        g_last_error = "causal_dataset_load_csv: null argument";
        return CAUSAL_ERROR;
    }
    try {
        *out = new causal_dataset{causal::load_csv_file(path, treatment, outcome)};
        return CAUSAL_OK;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

void causal_dataset_free(causal_dataset* dataset) { delete dataset; }

size_t causal_dataset_num_rows(const causal_dataset* dataset) {
    return dataset ? dataset->dataset.n_rows() : 0;
}

size_t causal_dataset_num_columns(const causal_dataset* dataset) {
    return dataset ? dataset->dataset.n_columns() : 0;
}

causal_status causal_identify(const causal_graph* graph, const char* treatment,
                              const char* outcome, char** out_json) {
    if (!graph || !treatment || !outcome || !out_json) {
        g_last_error = "causal_identify: null argument";
        return CAUSAL_ERROR;
    }
    try {
        causal::IdentificationResult result =
            causal::identify_effect(graph->graph, treatment, outcome);
        *out_json = copy_string(identification_json(result));
        return result.identified ? CAUSAL_OK : CAUSAL_NOT_IDENTIFIED;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

causal_status causal_analyze_args(int argc, const char* const* argv, causal_report** out) {
    if (!out || (argc > 0 && !argv)) {
        g_last_error = "causal_analyze_args: null argument";
        return CAUSAL_ERROR;
    }
    try {
        std::vector<std::string> args(argv, argv + argc);
        causal::AnalysisConfig cfg = causal::parse_config(args);
        causal::Report report = causal::run_pipeline(cfg);
        auto* handle = new causal_report{std::move(report), {}, {}};
        handle->json = causal::render_report(handle->report, "json");
        handle->text = causal::render_report(handle->report, "text");
        *out = handle;
        return handle->report.identification.identified ? CAUSAL_OK : CAUSAL_NOT_IDENTIFIED;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

const char* causal_report_json(const causal_report* report) {
    return report ? report->json.c_str() : "";
}

const char* causal_report_text(const causal_report* report) {
    return report ? report->text.c_str() : "";
}

const char* causal_report_rendered(const causal_report* report) {
    if (!report) return "";
    return report->report.config.output_format == "text" ? report->text.c_str()
                                                         : report->json.c_str();
}

const char* causal_report_output_path(const causal_report* report) {
    return report ? report->report.config.output_path.c_str() : "";
}

void causal_report_free(causal_report* report) { delete report; }

causal_status causal_generate_args(int argc, const char* const* argv) {
    if (argc > 0 && !argv) {
        g_last_error = "causal_generate_args: null argument";
        return CAUSAL_ERROR;
    }
    try {
        std::vector<std::string> args(argv, argv + argc);
        causal::run_generate(args);
        return CAUSAL_OK;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

}  // extern "C"
