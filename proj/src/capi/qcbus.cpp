#include "qcbus.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include <json.hpp>

#include "core/sweep.hpp"
#include "core/version.hpp"

using namespace qcb;

namespace {

thread_local std::string g_last_error;

qcb_status set_error(ErrorKind kind, const std::string& what) {
    g_last_error = what;
    switch (kind) {
        case ErrorKind::invalid_argument: return QCB_ERROR_INVALID_ARGUMENT;
        case ErrorKind::numerical: return QCB_ERROR_NUMERICAL;
        case ErrorKind::io: return QCB_ERROR_IO;
    }
    return QCB_ERROR_INVALID_ARGUMENT;
}

template <typename F>
qcb_status guarded(F&& f) {
    try {
        f();
        return QCB_OK;
    } catch (const Error& e) {
        return set_error(e.kind(), e.what());
    } catch (const std::exception& e) {
        return set_error(ErrorKind::numerical, e.what());
    }
}

} // namespace

struct qcb_config {
    SweepConfig sweep;
};

struct qcb_result {
    DataTable table;
};

struct qcb_report {
    DecompositionReport rep;
    std::string text;
    std::string json;
};

extern "C" {

const char* qcb_version(void) { return version_string; }

const char* qcb_last_error(void) { return g_last_error.c_str(); }

qcb_config* qcb_config_create(void) { return new qcb_config(); }

void qcb_config_free(qcb_config* config) { delete config; }

qcb_status qcb_config_set(qcb_config* config, const char* key, const char* value) {
    if (!config || !key || !value) return set_error(ErrorKind::invalid_argument, "null argument");
    return guarded([&] {
        const std::string k = key, v = value;
        SweepConfig& c = config->sweep;
        auto as_double = [&] {
            char* end = nullptr;
            const double d = std::strtod(v.c_str(), &end);
            if (end == v.c_str() || *end != '\0') fail_invalid("config: bad number for " + k);
            return d;
        };
        auto as_int = [&] { return static_cast<int>(as_double()); };
        auto as_bool = [&] {
            if (v == "1" || v == "true") return true;
            if (v == "0" || v == "false") return false;
            fail_invalid("config: bad boolean for " + k);
        };
        if (k == "g_min") c.g_min = as_double();
        else if (k == "g_max") c.g_max = as_double();
        else if (k == "steps") c.steps = as_int();
        else if (k == "window") {
            if (v == "rect") c.window.family = WindowFamily::rectangular;
            else if (v == "hamming") c.window.family = WindowFamily::hamming;
            else fail_invalid("config: window must be rect or hamming");
        } else if (k == "xi") {
            c.window.xi = as_double();
            if (c.window.xi > 0.0) c.window.family = WindowFamily::hamming;
        } else if (k == "protocol") {
            if (v == "p0") { c.timing = TimingMode::standard; }
            else if (v == "p1") {
                c.timing = TimingMode::standard;
                c.window.family = WindowFamily::hamming;
            } else if (v == "p2") c.timing = TimingMode::optimized;
            else fail_invalid("config: protocol must be p0, p1 or p2");
        } else if (k == "stage") {
            if (v == "full") c.stage = Stage::full;
            else if (v == "e1") c.stage = Stage::e1_only;
            else if (v == "e2") c.stage = Stage::e2_only;
            else fail_invalid("config: stage must be full, e1 or e2");
        } else if (k == "rwa") c.rwa = as_bool();
        else if (k == "q1") c.with_q1 = as_bool();
        else if (k == "n_max") c.prop.n_max = as_int();
        else if (k == "n_max_cap") c.prop.n_max_cap = as_int();
        else if (k == "tol") c.prop.tol = as_double();
        else if (k == "jobs") c.jobs = as_int();
        else fail_invalid("config: unknown key '" + k + "'");
    });
}

qcb_status qcb_config_load_file(qcb_config* config, const char* path) {
    if (!config || !path) return set_error(ErrorKind::invalid_argument, "null argument");
    return guarded([&] {
        std::ifstream in(path);
        if (!in) fail_io(std::string("cannot open config file: ") + path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            fail_invalid(std::string("config file parse error: ") + e.what());
        }
        if (!j.is_object()) fail_invalid("config file: expected a JSON object");
        for (const auto& [k, v] : j.items()) {
            std::string sv;
            if (v.is_string()) sv = v.get<std::string>();
            else if (v.is_boolean()) sv = v.get<bool>() ? "1" : "0";
            else if (v.is_number()) sv = format_g17(v.get<double>());
            else fail_invalid("config file: unsupported value type for key '" + k + "'");
            const qcb_status st = qcb_config_set(config, k.c_str(), sv.c_str());
            if (st != QCB_OK) throw Error(static_cast<ErrorKind>(st), g_last_error);
        }
    });
}

qcb_status qcb_run_sweep(const qcb_config* config, qcb_result** out) {
    if (!config || !out) return set_error(ErrorKind::invalid_argument, "null argument");
    return guarded([&] { *out = new qcb_result{run_sweep(config->sweep)}; });
}

qcb_status qcb_run_optimize(const qcb_config* config, qcb_result** out) {
    if (!config || !out) return set_error(ErrorKind::invalid_argument, "null argument");
    return guarded([&] {
        SweepConfig c = config->sweep;
        c.timing = TimingMode::optimized;
        *out = new qcb_result{run_sweep(c)};
    });
}

qcb_status qcb_run_fano(const qcb_config* config, qcb_result** out) {
    if (!config || !out) return set_error(ErrorKind::invalid_argument, "null argument");
    return guarded([&] { *out = new qcb_result{run_fano(config->sweep)}; });
}

qcb_status qcb_run_converge(const qcb_config* config, double g, const int* levels,
                            size_t n_levels, qcb_result** out) {
    if (!config || !out) return set_error(ErrorKind::invalid_argument, "null argument");
    return guarded([&] {
        std::vector<int> lv;
        if (levels && n_levels > 0)
            lv.assign(levels, levels + n_levels);
        else
            lv = {8, 16, 32, 64};
        *out = new qcb_result{run_converge(g, config->sweep, lv)};
    });
}

size_t qcb_result_rows(const qcb_result* result) { return result ? result->table.rows.size() : 0; }

size_t qcb_result_columns(const qcb_result* result) {
    return result ? result->table.columns.size() : 0;
}

const char* qcb_result_column_name(const qcb_result* result, size_t column) {
    if (!result || column >= result->table.columns.size()) return nullptr;
    return result->table.columns[column].c_str();
}

qcb_status qcb_result_value(const qcb_result* result, size_t row, size_t column, double* out) {
    if (!result || !out || row >= result->table.rows.size() ||
        column >= result->table.columns.size())
        return set_error(ErrorKind::invalid_argument, "result index out of range");
    *out = result->table.rows[row][column];
    return QCB_OK;
}

const char* qcb_result_meta(const qcb_result* result, const char* key) {
    if (!result || !key) return nullptr;
    for (const auto& [k, v] : result->table.meta)
        if (k == key) return v.c_str();
    return nullptr;
}

qcb_status qcb_result_write(const qcb_result* result, const char* path, const char* format) {
    if (!result || !path || !format) return set_error(ErrorKind::invalid_argument, "null argument");
    return guarded([&] { write_table(result->table, path, format); });
}

void qcb_result_free(qcb_result* result) { delete result; }

qcb_status qcb_run_decompose(const qcb_config* config, double g, qcb_report** out) {
    if (!config || !out) return set_error(ErrorKind::invalid_argument, "null argument");
    return guarded([&] {
        auto* rep = new qcb_report();
        try {
            rep->rep = run_decompose(g, config->sweep);
            rep->text = decomposition_text(rep->rep);
            rep->json = decomposition_json(rep->rep);
        } catch (...) {
            delete rep;
            throw;
        }
        *out = rep;
    });
}

const char* qcb_report_text(const qcb_report* report) {
    return report ? report->text.c_str() : nullptr;
}

const char* qcb_report_json(const qcb_report* report) {
    return report ? report->json.c_str() : nullptr;
}

void qcb_report_free(qcb_report* report) { delete report; }

qcb_status qcb_validate_file(const char* path, char* message, size_t message_len) {
    if (message && message_len > 0) message[0] = '\0';
    if (!path) return set_error(ErrorKind::invalid_argument, "null path");
    std::string verdict;
    const qcb_status st = guarded([&] {
        const DataTable t = read_table(path);
        const auto bad = validate_table(t);
        if (!bad.empty()) {
            std::string all;
            for (const auto& b : bad) all += b + "\n";
            throw Error(ErrorKind::invalid_argument, all);
        }
    });
    if (st != QCB_OK && message && message_len > 0) {
        std::strncpy(message, g_last_error.c_str(), message_len - 1);
        message[message_len - 1] = '\0';
    }
    return st;
}

} // extern "C"
