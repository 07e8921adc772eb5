#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stadion/dataset.hpp"

namespace stadion {

struct CsvOptions {
    char delimiter = ',';
    bool has_header = false;
    // Zero-based column holding class labels; the column is removed from the
    // feature matrix and re-encoded in first-appearance order.
    std::optional<std::size_t> label_column;
};

struct LoadedCsv {
    Dataset data;
    std::optional<Partition> labels;
    std::vector<std::string> header;  // feature columns only
};

// RFC-4180-style reader: quoted fields, doubled-quote escapes, embedded
// delimiters/newlines inside quotes, optional UTF-8 BOM. Errors name the
// offending physical line and 1-based column.
LoadedCsv load_csv(const std::filesystem::path& file, const CsvOptions& opts = {});

// Values are written with enough digits to round-trip (1e-12 after reload).
void write_csv(const std::filesystem::path& file, const Dataset& d,
               const std::vector<std::string>& header = {},
               const std::optional<Partition>& labels = std::nullopt, char delimiter = ',');

}  // namespace stadion
