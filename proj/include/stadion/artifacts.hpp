#pragma once

#include <filesystem>
#include <string>

#include "stadion/stability.hpp"

namespace stadion {

// Everything the report needs to echo about how a run was configured.
struct RunMeta {
    std::string data_source;
    ClustererConfig clusterer;
    Aggregation aggregation = Aggregation::max;
    bool calibrated = false;
    std::vector<std::size_t> zero_variance_columns;
};

// Long rows: K ascending, epsilon ascending; %.17g so values survive reload.
std::string paths_csv(const SelectionReport& report);

std::string report_json(const SelectionReport& report, const RunMeta& meta);

// Four panels: the three stability paths (one polyline per K) and the
// aggregated trade-off against K.
std::string paths_svg(const SelectionReport& report, const RunMeta& meta);

// Writes via a temp file in the same directory plus rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace stadion
