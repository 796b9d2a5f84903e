#include "core/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/version.hpp"

namespace qcb {

int DataTable::column_index(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(columns.size()); ++i)
        if (columns[i] == name) return i;
    return -1;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void check_rect(const DataTable& t) {
    for (const auto& row : t.rows)
        if (row.size() != t.columns.size()) fail_invalid("DataTable: ragged rows");
}

} // namespace

void write_csv(const DataTable& table, const std::string& path) {
    check_rect(table);
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) fail_io("cannot open for writing: " + path);
    out << "# qcbus " << version_string << "\n";
    out << "# schema = " << table.schema << "\n";
    for (const auto& [k, v] : table.meta) out << "# " << k << " = " << v << "\n";
    for (size_t i = 0; i < table.columns.size(); ++i)
        out << table.columns[i] << (i + 1 < table.columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << format_g17(row[i]) << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
    if (!out) fail_io("write failed: " + path);
}

void write_json(const DataTable& table, const std::string& path) {
    check_rect(table);
    nlohmann::ordered_json meta;
    meta["qcbus"] = version_string;
    meta["schema"] = table.schema;
    nlohmann::ordered_json cfg;
    for (const auto& [k, v] : table.meta) cfg[k] = v;
    meta["config"] = cfg;

    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    arr.push_back(meta);  // metadata object first, then one object per record
    for (const auto& row : table.rows) {
        nlohmann::ordered_json rec;
        for (size_t i = 0; i < row.size(); ++i) {
            if (std::isnan(row[i]))
                rec[table.columns[i]] = nullptr;
            else
                rec[table.columns[i]] = row[i];
        }
        arr.push_back(rec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_io("cannot open for writing: " + path);
    out << arr.dump(2) << "\n";
    if (!out) fail_io("write failed: " + path);
}

void write_table(const DataTable& table, const std::string& path, const std::string& format) {
    if (format == "csv")
        write_csv(table, path);
    else if (format == "json")
        write_json(table, path);
    else
        fail_invalid("unknown output format: " + format);
}

namespace {

DataTable read_csv_stream(std::istream& in) {
    DataTable t;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            const auto eq = body.find('=');
            if (eq != std::string::npos) {
                auto trim = [](std::string s) {
                    const auto a = s.find_first_not_of(' ');
                    const auto b = s.find_last_not_of(' ');
                    return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
                };
                const std::string k = trim(body.substr(0, eq));
                const std::string v = trim(body.substr(eq + 1));
                if (k == "schema")
                    t.schema = v;
                else
                    t.meta.emplace_back(k, v);
            }
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!header_seen) {
            while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) fail_io("CSV: unparsable cell '" + cell + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (!header_seen) fail_io("CSV: no header row");
    return t;
}

DataTable read_json_stream(std::istream& in) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::parse(in);
    if (!arr.is_array() || arr.empty() || !arr.front().is_object())
        fail_io("JSON: expected an array with a leading metadata object");
    DataTable t;
    const auto& meta = arr.front();
    t.schema = meta.value("schema", "");
    if (meta.contains("config"))
        for (const auto& [k, v] : meta["config"].items())
            t.meta.emplace_back(k, v.get<std::string>());
    for (size_t i = 1; i < arr.size(); ++i) {
        const auto& rec = arr[i];
        if (t.columns.empty())
            for (const auto& [k, v] : rec.items()) t.columns.push_back(k);
        std::vector<double> row;
        for (const auto& c : t.columns) {
            const auto& v = rec.at(c);
            row.push_back(v.is_null() ? std::nan("") : v.get<double>());
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace

DataTable read_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_io("cannot open: " + path);
    const int first = in.peek();
    if (first == '[') return read_json_stream(in);
    return read_csv_stream(in);
}

namespace {

void check_nonneg(const DataTable& t, const std::string& col, std::vector<std::string>& out) {
    const int c = t.column_index(col);
    if (c < 0) return;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        const double v = t.rows[r][c];
        if (!std::isnan(v) && v < -1e-12)
            out.push_back("row " + std::to_string(r) + ": " + col + " negative (" + format_g17(v) +
                          ")");
    }
}

} // namespace

std::vector<std::string> validate_table(const DataTable& table) {
    std::vector<std::string> bad;
    if (table.schema != "sweep" && table.schema != "fano" && table.schema != "converge") {
        bad.push_back("unknown schema '" + table.schema + "'");
        return bad;
    }
    for (size_t r = 0; r < table.rows.size(); ++r)
        if (table.rows[r].size() != table.columns.size())
            bad.push_back("row " + std::to_string(r) + ": wrong cell count");
    if (!bad.empty()) return bad;

    if (table.schema == "sweep") {
        for (const char* col : {"g", "n_max", "Ic_u", "Q1", "n_end", "n_dce", "rate", "T1", "Tc",
                                "T2", "converged"})
            if (table.column_index(col) < 0) bad.push_back(std::string("missing column ") + col);
        if (!bad.empty()) return bad;
        check_nonneg(table, "Q1", bad);
        check_nonneg(table, "n_end", bad);
        check_nonneg(table, "n_dce", bad);
        const int ci = table.column_index("Ic_u"), cr = table.column_index("rate");
        const int c1 = table.column_index("T1"), cc = table.column_index("Tc"),
                  c2 = table.column_index("T2");
        for (size_t r = 0; r < table.rows.size(); ++r) {
            const auto& row = table.rows[r];
            const double total = row[c1] + row[cc] + row[c2];
            if (std::isnan(row[ci]) || std::isnan(row[cr]) || total <= 0.0) continue;
            if (std::abs(row[cr] - row[ci] / total) > 1e-12)
                bad.push_back("row " + std::to_string(r) + ": rate != Ic_u/(T1+Tc+T2)");
        }
    } else if (table.schema == "fano") {
        for (const char* col : {"g", "n_max", "m_xx", "m_xy", "m_yx", "m_yy", "m_zz", "a_z",
                                "res_mxz", "res_mzx", "res_myz", "res_mzy", "res_ax", "res_ay",
                                "converged"})
            if (table.column_index(col) < 0) bad.push_back(std::string("missing column ") + col);
        if (!bad.empty()) return bad;
        for (const char* col : {"res_mxz", "res_mzx", "res_myz", "res_mzy", "res_ax", "res_ay"})
            check_nonneg(table, col, bad);
    } else {  // converge
        for (const char* col : {"n_max", "Ic_u", "n_dce"})
            if (table.column_index(col) < 0) bad.push_back(std::string("missing column ") + col);
    }

    const int cg = table.column_index("g");
    if (cg >= 0)
        for (size_t r = 0; r < table.rows.size(); ++r)
            if (!std::isnan(table.rows[r][cg]) && table.rows[r][cg] <= 0.0)
                bad.push_back("row " + std::to_string(r) + ": g must be positive");
    const int cv = table.column_index("converged");
    if (cv >= 0)
        for (size_t r = 0; r < table.rows.size(); ++r) {
            const double v = table.rows[r][cv];
            if (v != 0.0 && v != 1.0)
                bad.push_back("row " + std::to_string(r) + ": converged flag not 0/1");
        }
    return bad;
}

} // namespace qcb
