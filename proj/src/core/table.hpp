#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace qcb {

// Flat numeric table with ordered metadata, the common currency of the sweep
// subcommands. CSV and JSON emissions of the same table carry identical
// values; numbers are printed with 17 significant digits so files round-trip
// bit-exactly and identical configurations give byte-identical files.
struct DataTable {
    std::string schema;  // "sweep", "fano" or "converge"
    std::vector<std::pair<std::string, std::string>> meta;  // effective config echo
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const;  // -1 if absent
};

std::string format_g17(double v);

void write_csv(const DataTable& table, const std::string& path);
void write_json(const DataTable& table, const std::string& path);
void write_table(const DataTable& table, const std::string& path, const std::string& format);

// Reads either emission back (format detected from the first byte).
DataTable read_table(const std::string& path);

// Re-checks the record invariants of an emitted file; returns human-readable
// violations, empty when the file is clean. NaN marks a field that was not
// computed (or a failed point) and is skipped.
std::vector<std::string> validate_table(const DataTable& table);

} // namespace qcb
