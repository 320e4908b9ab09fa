#pragma once

// CSV ingestion for benchmark datasets and optional column standardization.

#include "uncoupled/core.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace uncoupled {

/// A column referenced by zero-based index or by header name.
struct ColumnRef {
    std::string name;
    int index = -1;

    static ColumnRef by_index(int i) { return {"", i}; }
    static ColumnRef by_name(std::string n) { return {std::move(n), -1}; }
    /// Integer strings select by index, anything else by name.
    static ColumnRef parse(const std::string& text);
};

struct CsvSchema {
    ColumnRef target_column = ColumnRef::by_index(-1);
    std::vector<ColumnRef> categorical_columns;
    bool has_header = true;
    char delimiter = ',';
};

struct LoadedCsv {
    Dataset data;
    std::size_t dropped_rows = 0;
};

/// Parses numeric columns, one-hot encodes categorical columns (categories in
/// first-appearance order, named "<column>=<value>") and drops rows with a
/// missing ("", "?", "NA", "NaN") or unparseable cell. A negative target
/// index counts from the end (-1 = last column).
LoadedCsv load_csv(const std::filesystem::path& path, const CsvSchema& schema);
LoadedCsv parse_csv(const std::string& text, const CsvSchema& schema);

/// Per-column affine map to zero mean and unit standard deviation.
struct Standardizer {
    Vector mean;
    Vector std;
    /// Columns with std < 1e-12 are only centered.
    std::vector<bool> degenerate;

    Dataset apply(const Dataset& data) const;
    Matrix apply(const Matrix& features) const;
};

struct StandardizedData {
    Dataset data;
    Standardizer transform;
};

StandardizedData standardize(const Dataset& data);

} // namespace uncoupled
