#include "uncoupled/errors.hpp"
#include "uncoupled/eval.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace uncoupled {

std::string_view library_version() { return UNCOUPLED_VERSION; }

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

constexpr std::string_view kHeader = "method,n_r,mean_mse,std_mse,repeats";
constexpr std::string_view kErrorPrefix = "# error,";

std::vector<std::string> split(std::string_view line, char sep, std::size_t max_fields)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (fields.size() + 1 < max_fields) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos)
            break;
        fields.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    fields.emplace_back(line.substr(start));
    return fields;
}

template <class T>
T parse_number(const std::string& text, std::size_t line_no)
{
    T value{};
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end)
        throw SchemaError("result CSV line " + std::to_string(line_no) + ": bad number '" + text + "'");
    return value;
}

// Error messages are free text; keep them on one line.
std::string one_line(std::string s)
{
    for (char& c : s)
        if (c == '\n' || c == '\r')
            c = ' ';
    return s;
}

} // namespace

void write_result_csv(std::ostream& out, const ResultTable& table, const CsvMetadata& metadata)
{
    for (const auto& [key, value] : metadata)
        out << "# " << key << '=' << one_line(value) << '\n';
    out << kHeader << '\n';
    for (const auto& row : table.rows)
        out << row.method << ',' << row.n_r << ',' << format_double(row.mean_mse) << ','
            << format_double(row.std_mse) << ',' << row.repeats << '\n';
    for (const auto& e : table.errors)
        out << kErrorPrefix << e.method << ',' << e.n_r << ',' << e.repeat << ','
            << one_line(e.message) << '\n';
}

ResultTable read_result_csv(std::istream& in)
{
    ResultTable table;
    std::string line;
    std::size_t line_no = 0;
    bool seen_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.starts_with(kErrorPrefix)) {
            const auto f = split(std::string_view(line).substr(kErrorPrefix.size()), ',', 4);
            if (f.size() != 4)
                throw SchemaError("result CSV line " + std::to_string(line_no) + ": malformed error line");
            table.errors.push_back({f[0], parse_number<Eigen::Index>(f[1], line_no),
                                    parse_number<int>(f[2], line_no), f[3]});
            continue;
        }
        if (line.front() == '#')
            continue;
        if (!seen_header) {
            if (line != kHeader)
                throw SchemaError("result CSV: unexpected header '" + line + "'");
            seen_header = true;
            continue;
        }
        const auto f = split(line, ',', 6);
        if (f.size() != 5)
            throw SchemaError("result CSV line " + std::to_string(line_no) + ": expected 5 fields");
        table.rows.push_back({f[0], parse_number<Eigen::Index>(f[1], line_no),
                              parse_number<double>(f[2], line_no), parse_number<double>(f[3], line_no),
                              parse_number<int>(f[4], line_no)});
    }
    if (!seen_header)
        throw SchemaError("result CSV: missing header");
    return table;
}

void write_plot_data(std::ostream& out, const ResultTable& table)
{
    std::string current;
    for (const auto& row : table.rows) {
        if (row.method != current) {
            if (!current.empty())
                out << "\n\n";
            out << "# " << row.method << "\n# n_r mean_mse std_mse\n";
            current = row.method;
        }
        out << row.n_r << ' ' << format_double(row.mean_mse) << ' ' << format_double(row.std_mse)
            << '\n';
    }
}

void print_result_table(std::ostream& out, const ResultTable& table)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-6s %8s %14s %14s %8s\n", "method", "n_r", "mean_mse", "std_mse",
                  "repeats");
    out << buf;
    for (const auto& row : table.rows) {
        std::snprintf(buf, sizeof buf, "%-6s %8lld %14.6g %14.6g %8d\n", row.method.c_str(),
                      static_cast<long long>(row.n_r), row.mean_mse, row.std_mse, row.repeats);
        out << buf;
    }
    if (!table.errors.empty())
        out << table.errors.size() << " failed fit(s); see the error lines in the CSV\n";
}

} // namespace uncoupled
