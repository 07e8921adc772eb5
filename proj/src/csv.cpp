#include "stadion/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace stadion {

namespace {

struct RawRow {
    std::vector<std::string> fields;
    std::size_t line;  // 1-based physical line of the row start
};

std::vector<RawRow> read_rows(const std::filesystem::path& file, char delim) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open " + file.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (content.size() >= 3 && content.compare(0, 3, "\xef\xbb\xbf") == 0) content.erase(0, 3);

    std::vector<RawRow> rows;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;
    std::size_t line = 1;
    std::size_t row_line = 1;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(RawRow{std::move(fields), row_line});
        fields.clear();
        row_started = false;
    };

    for (std::size_t pos = 0; pos < content.size(); ++pos) {
        const char c = content[pos];
        if (!row_started && !in_quotes) {
            row_started = true;
            row_line = line;
        }
        if (in_quotes) {
            if (c == '"') {
                if (pos + 1 < content.size() && content[pos + 1] == '"') {
                    field.push_back('"');
                    ++pos;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
        } else if (c == delim) {
            end_field();
        } else if (c == '\r') {
            if (pos + 1 < content.size() && content[pos + 1] == '\n') ++pos;
            ++line;
            end_row();
        } else if (c == '\n') {
            ++line;
            end_row();
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) throw DataError(file.string() + ": unterminated quoted field at line " + std::to_string(row_line));
    if (row_started || !field.empty() || !fields.empty()) end_row();

    // Drop trailing rows that are entirely empty (e.g. final newline artifacts).
    while (!rows.empty() && rows.back().fields.size() == 1 && rows.back().fields[0].empty())
        rows.pop_back();
    return rows;
}

double parse_number(const std::string& s, const std::filesystem::path& file, std::size_t line,
                    std::size_t col) {
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0') || errno == ERANGE)
        throw DataError(file.string() + ": cannot parse numeric value '" + s + "' at line " +
                        std::to_string(line) + ", column " + std::to_string(col));
    return v;
}

}  // namespace

LoadedCsv load_csv(const std::filesystem::path& file, const CsvOptions& opts) {
    std::vector<RawRow> rows = read_rows(file, opts.delimiter);
    if (rows.empty()) throw DataError(file.string() + ": empty file");

    LoadedCsv out;
    std::size_t first_data = 0;
    const std::size_t width = rows[0].fields.size();
    if (opts.has_header) {
        if (rows.size() < 2) throw DataError(file.string() + ": header but no data rows");
        first_data = 1;
        for (std::size_t j = 0; j < width; ++j) {
            if (opts.label_column && *opts.label_column == j) continue;
            out.header.push_back(rows[0].fields[j]);
        }
    }
    if (opts.label_column && *opts.label_column >= width)
        throw DataError(file.string() + ": label column " + std::to_string(*opts.label_column) +
                        " out of range for " + std::to_string(width) + " columns");
    const std::size_t feature_cols = width - (opts.label_column ? 1 : 0);
    if (feature_cols == 0) throw DataError(file.string() + ": no feature columns");

    const std::size_t n = rows.size() - first_data;
    Matrix x(n, feature_cols);
    std::vector<int> raw_labels;
    std::unordered_map<std::string, int> label_codes;
    if (opts.label_column) raw_labels.reserve(n);

    for (std::size_t r = first_data; r < rows.size(); ++r) {
        const RawRow& row = rows[r];
        if (row.fields.size() != width)
            throw DataError(file.string() + ": ragged row at line " + std::to_string(row.line) +
                            " (" + std::to_string(row.fields.size()) + " fields, expected " +
                            std::to_string(width) + ")");
        std::size_t jf = 0;
        for (std::size_t j = 0; j < width; ++j) {
            if (opts.label_column && *opts.label_column == j) {
                auto [it, ignored] = label_codes.try_emplace(row.fields[j],
                                                             static_cast<int>(label_codes.size()));
                raw_labels.push_back(it->second);
            } else {
                x(r - first_data, jf) = parse_number(row.fields[j], file, row.line, j + 1);
                ++jf;
            }
        }
    }

    out.data.x = std::move(x);
    if (opts.label_column) out.labels = make_partition(std::move(raw_labels));
    return out;
}

void write_csv(const std::filesystem::path& file, const Dataset& d,
               const std::vector<std::string>& header, const std::optional<Partition>& labels,
               char delimiter) {
    if (labels && labels->n() != d.n()) throw DataError("write_csv: label count mismatch");
    std::ofstream outf(file, std::ios::binary | std::ios::trunc);
    if (!outf) throw DataError("cannot write " + file.string());
    std::ostringstream os;
    if (!header.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (j) os << delimiter;
            os << header[j];
        }
        if (labels) os << delimiter << "label";
        os << "\n";
    }
    char buf[64];
    for (std::size_t i = 0; i < d.n(); ++i) {
        for (std::size_t j = 0; j < d.p(); ++j) {
            if (j) os << delimiter;
            std::snprintf(buf, sizeof buf, "%.17g", d.x(i, j));
            os << buf;
        }
        if (labels) os << delimiter << labels->labels[i];
        os << "\n";
    }
    outf << os.str();
    if (!outf) throw DataError("failed writing " + file.string());
}

}  // namespace stadion
