// `causal` command-line tool. All functionality lives behind the C API in
// causal/causal.h; this binary only dispatches subcommands and moves bytes.

#include <stdio.h>
#include <string.h>

#include "causal/causal.h"

static void usage(FILE* to) {
    fprintf(to,
            "usage:\n"
            "  causal analyze --data PATH --graph PATH --treatment NAME --outcome NAME\n"
            "                 [--graph-format dot|gml|auto] [--method NAME]\n"
            "                 [--refuters a,b,c] [--seed N] [--bootstrap-reps N]\n"
            "                 [--permutation-reps N] [--rdd-cutoff X --rdd-bandwidth H\n"
            "                 --rdd-running NAME] [--out PATH] [--format json|text]\n"
            "                 [--config PATH]\n"
            "  causal generate --spec-json PATH --out-prefix PATH\n"
            "  causal version\n");
}

static int write_report(const causal_report* report) {
    const char* rendered = causal_report_rendered(report);
    const char* path = causal_report_output_path(report);
    if (path[0] == '\0') {
        fputs(rendered, stdout);
        return 0;
    }
    FILE* out = fopen(path, "wb");
    if (!out) {
        fprintf(stderr, "error: cannot write report to '%s'\n", path);
        return 1;
    }
    size_t len = strlen(rendered);
    size_t written = fwrite(rendered, 1, len, out);
    fclose(out);
    if (written != len) {
        fprintf(stderr, "error: short write to '%s'\n", path);
        return 1;
    }
    return 0;
}

int main(int argc, char** argv) {
    if (argc < 2) {
        usage(stderr);
        return 1;
    }
    const char* command = argv[1];

    if (strcmp(command, "version") == 0 || strcmp(command, "--version") == 0) {
        printf("causal %s\n", causal_version());
        return 0;
    }
    if (strcmp(command, "help") == 0 || strcmp(command, "--help") == 0) {
        usage(stdout);
        return 0;
    }
    if (strcmp(command, "analyze") == 0) {
        for (int i = 2; i < argc; ++i) {
            if (strcmp(argv[i], "--help") == 0 || strcmp(argv[i], "-h") == 0) {
                usage(stdout);
                return 0;
            }
        }
        causal_report* report = NULL;
        causal_status status =
            causal_analyze_args(argc - 2, (const char* const*)(argv + 2), &report);
        if (status == CAUSAL_ERROR) {
            fprintf(stderr, "error: %s\n", causal_last_error());
            return 1;
        }
        int io_status = write_report(report);
        causal_report_free(report);
        if (io_status != 0) return io_status;
        return status == CAUSAL_NOT_IDENTIFIED ? 2 : 0;
    }
    if (strcmp(command, "generate") == 0) {
        causal_status status = causal_generate_args(argc - 2, (const char* const*)(argv + 2));
        if (status != CAUSAL_OK) {
            fprintf(stderr, "error: %s\n", causal_last_error());
            return 1;
        }
        return 0;
    }
    fprintf(stderr, "error: unknown command '%s'\n", command);
    usage(stderr);
    return 1;
}
