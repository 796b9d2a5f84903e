// Command-line driver for the qcbus shared library. Everything numerical
// happens behind the C API in qcbus.h; this file only parses flags, applies
// the config precedence (defaults < config file < explicit flags) and moves
// bytes to disk.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcbus.h"

namespace {

struct ConfigDeleter {
    void operator()(qcb_config* c) const { qcb_config_free(c); }
};
struct ResultDeleter {
    void operator()(qcb_result* r) const { qcb_result_free(r); }
};
struct ReportDeleter {
    void operator()(qcb_report* r) const { qcb_report_free(r); }
};

using ConfigPtr = std::unique_ptr<qcb_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<qcb_result, ResultDeleter>;
using ReportPtr = std::unique_ptr<qcb_report, ReportDeleter>;

int status_to_exit(qcb_status st) {
    switch (st) {
        case QCB_OK: return 0;
        case QCB_ERROR_NUMERICAL: return 2;
        default: return 1;  // invalid config / io
    }
}

[[noreturn]] void die(qcb_status st) {
    std::fprintf(stderr, "qcbus: %s\n", qcb_last_error());
    std::exit(status_to_exit(st));
}

void check(qcb_status st) {
    if (st != QCB_OK) die(st);
}

// Flags shared by the data-producing subcommands.
struct CommonFlags {
    std::string config_file;
    double g_min = 0.05, g_max = 1.0;
    int steps = 96;
    std::string window = "rect";
    double xi = 0.0;
    std::string protocol = "p0";
    std::string stage = "full";
    bool rwa = false;
    bool q1 = false;
    int n_max = 32;
    int jobs = 0;
    std::string out;
    std::string format = "csv";

    CLI::Option* o_g_min = nullptr;
    CLI::Option* o_g_max = nullptr;
    CLI::Option* o_steps = nullptr;
    CLI::Option* o_window = nullptr;
    CLI::Option* o_xi = nullptr;
    CLI::Option* o_protocol = nullptr;
    CLI::Option* o_stage = nullptr;
    CLI::Option* o_rwa = nullptr;
    CLI::Option* o_q1 = nullptr;
    CLI::Option* o_n_max = nullptr;
    CLI::Option* o_jobs = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "JSON config file (flags override its keys)");
        o_g_min = cmd->add_option("--g-min", g_min, "smallest coupling on the grid");
        o_g_max = cmd->add_option("--g-max", g_max, "largest coupling on the grid");
        o_steps = cmd->add_option("--steps", steps, "number of grid points");
        o_window = cmd->add_option("--window", window, "coupling window: rect or hamming");
        o_xi = cmd->add_option("--xi", xi, "Hamming depth in [0,1]");
        o_protocol = cmd->add_option("--protocol", protocol, "p0, p1 (Hamming) or p2 (timing opt)");
        o_stage = cmd->add_option("--stage", stage, "full, e1 or e2");
        o_rwa = cmd->add_flag("--rwa", rwa, "drop the counter-rotating terms");
        o_q1 = cmd->add_flag("--q1", q1, "also optimize the single-shot capacity per point");
        o_n_max = cmd->add_option("--n-max", n_max, "starting Fock cutoff");
        o_jobs = cmd->add_option("--jobs", jobs, "worker threads (0: all cores)");
        cmd->add_option("--out", out, "output file path");
        cmd->add_option("--format", format, "csv or json");
    }

    // defaults, then config file, then explicit flags
    ConfigPtr build() const {
        ConfigPtr cfg(qcb_config_create());
        if (!config_file.empty()) check(qcb_config_load_file(cfg.get(), config_file.c_str()));
        auto set = [&](CLI::Option* opt, const char* key, const std::string& value) {
            if (opt && opt->count() > 0) check(qcb_config_set(cfg.get(), key, value.c_str()));
        };
        set(o_g_min, "g_min", std::to_string(g_min));
        set(o_g_max, "g_max", std::to_string(g_max));
        set(o_steps, "steps", std::to_string(steps));
        set(o_protocol, "protocol", protocol);
        set(o_window, "window", window);
        set(o_xi, "xi", std::to_string(xi));
        set(o_stage, "stage", stage);
        set(o_rwa, "rwa", rwa ? "1" : "0");
        set(o_q1, "q1", q1 ? "1" : "0");
        set(o_n_max, "n_max", std::to_string(n_max));
        set(o_jobs, "jobs", std::to_string(jobs));
        return cfg;
    }
};

void emit(const ResultPtr& result, const std::string& out, const std::string& format) {
    if (out.empty()) {
        // no --out: print a terse table to stdout
        const size_t cols = qcb_result_columns(result.get());
        for (size_t c = 0; c < cols; ++c)
            std::printf("%s%s", qcb_result_column_name(result.get(), c), c + 1 < cols ? "," : "\n");
        for (size_t r = 0; r < qcb_result_rows(result.get()); ++r) {
            for (size_t c = 0; c < cols; ++c) {
                double v = 0.0;
                check(qcb_result_value(result.get(), r, c, &v));
                std::printf("%.17g%s", v, c + 1 < cols ? "," : "\n");
            }
        }
        return;
    }
    check(qcb_result_write(result.get(), out.c_str(), format.c_str()));
    std::printf("wrote %s (%zu records)\n", out.c_str(), qcb_result_rows(result.get()));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qcbus: quantum bus channel sweeps, timing optimization and channel geometry"};
    app.require_subcommand(1);

    CommonFlags sweep_flags, opt_flags, fano_flags, dec_flags, conv_flags;
    double dec_g = 0.3, conv_g = 0.3;
    std::vector<int> conv_levels;
    std::string validate_path;

    auto* sweep = app.add_subcommand("sweep", "coupling-strength sweep of the bus channel");
    sweep_flags.attach(sweep);

    auto* optimize = app.add_subcommand("optimize", "sweep with per-point timing optimization");
    opt_flags.attach(optimize);

    auto* fano = app.add_subcommand("fano", "affine-map parameters across the coupling grid");
    fano_flags.attach(fano);

    auto* decompose = app.add_subcommand("decompose", "elementary-map + Kraus report at one g");
    dec_flags.attach(decompose);
    decompose->add_option("--g", dec_g, "coupling strength")->required();

    auto* converge = app.add_subcommand("converge", "Fock-cutoff convergence table at one g");
    conv_flags.attach(converge);
    converge->add_option("--g", conv_g, "coupling strength")->required();
    converge->add_option("--levels", conv_levels, "cutoff levels (default 8 16 32 64)");

    auto* validate = app.add_subcommand("validate", "re-check an emitted data file");
    validate->add_option("file", validate_path, "CSV or JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    if (sweep->parsed()) {
        ConfigPtr cfg = sweep_flags.build();
        qcb_result* raw = nullptr;
        check(qcb_run_sweep(cfg.get(), &raw));
        emit(ResultPtr(raw), sweep_flags.out, sweep_flags.format);
    } else if (optimize->parsed()) {
        ConfigPtr cfg = opt_flags.build();
        qcb_result* raw = nullptr;
        check(qcb_run_optimize(cfg.get(), &raw));
        emit(ResultPtr(raw), opt_flags.out, opt_flags.format);
    } else if (fano->parsed()) {
        ConfigPtr cfg = fano_flags.build();
        qcb_result* raw = nullptr;
        check(qcb_run_fano(cfg.get(), &raw));
        emit(ResultPtr(raw), fano_flags.out, fano_flags.format);
    } else if (decompose->parsed()) {
        ConfigPtr cfg = dec_flags.build();
        qcb_report* raw = nullptr;
        check(qcb_run_decompose(cfg.get(), dec_g, &raw));
        ReportPtr rep(raw);
        const char* body = (dec_flags.format == "json") ? qcb_report_json(rep.get())
                                                        : qcb_report_text(rep.get());
        if (dec_flags.out.empty()) {
            std::fputs(body, stdout);
        } else {
            std::FILE* f = std::fopen(dec_flags.out.c_str(), "wb");
            if (!f) {
                std::fprintf(stderr, "qcbus: cannot open %s\n", dec_flags.out.c_str());
                return 1;
            }
            std::fputs(body, f);
            std::fclose(f);
            std::printf("wrote %s\n", dec_flags.out.c_str());
        }
    } else if (converge->parsed()) {
        ConfigPtr cfg = conv_flags.build();
        qcb_result* raw = nullptr;
        check(qcb_run_converge(cfg.get(), conv_g,
                               conv_levels.empty() ? nullptr : conv_levels.data(),
                               conv_levels.size(), &raw));
        ResultPtr res(raw);
        if (conv_flags.out.empty()) {
            const char* rec = qcb_result_meta(res.get(), "recommended_n_max");
            emit(res, "", "");
            std::printf("recommended n_max: %s\n", rec ? rec : "none");
        } else {
            emit(res, conv_flags.out, conv_flags.format);
        }
    } else if (validate->parsed()) {
        std::vector<char> msg(8192);
        const qcb_status st = qcb_validate_file(validate_path.c_str(), msg.data(), msg.size());
        if (st == QCB_OK) {
            std::printf("%s: OK\n", validate_path.c_str());
        } else {
            std::fprintf(stderr, "%s: INVALID\n%s", validate_path.c_str(), msg.data());
            return status_to_exit(st);
        }
    }
    return 0;
}
