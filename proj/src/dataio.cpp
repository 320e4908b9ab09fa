#include "uncoupled/dataio.hpp"

#include "uncoupled/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace uncoupled {

ColumnRef ColumnRef::parse(const std::string& text)
{
    int value = 0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec == std::errc() && ptr == end)
        return by_index(value);
    return by_name(text);
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter)
{
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delimiter) {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool is_missing(const std::string& cell)
{
    return cell.empty() || cell == "?" || cell == "NA" || cell == "NaN" || cell == "nan";
}

std::optional<double> parse_number(const std::string& cell)
{
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = cell.data() + cell.size();
    if (begin != end && *begin == '+')
        ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value))
        return std::nullopt;
    return value;
}

int resolve(const ColumnRef& ref, const std::vector<std::string>& header, std::size_t width,
            const char* role)
{
    if (!ref.name.empty()) {
        const auto it = std::find(header.begin(), header.end(), ref.name);
        if (it == header.end())
            throw SchemaError(std::string(role) + " column '" + ref.name + "' not found in header");
        return static_cast<int>(it - header.begin());
    }
    int index = ref.index;
    if (index < 0)
        index += static_cast<int>(width);
    if (index < 0 || index >= static_cast<int>(width))
        throw SchemaError(std::string(role) + " column index " + std::to_string(ref.index) +
                          " out of range for " + std::to_string(width) + " columns");
    return index;
}

} // namespace

LoadedCsv parse_csv(const std::string& text, const CsvSchema& schema)
{
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (trim(line).empty())
            continue;
        auto cells = split_line(line, schema.delimiter);
        for (auto& c : cells)
            c = trim(c);
        if (first && schema.has_header) {
            header = std::move(cells);
            first = false;
            continue;
        }
        first = false;
        rows.push_back(std::move(cells));
    }

    const std::size_t width = schema.has_header ? header.size() : (rows.empty() ? 0 : rows[0].size());
    if (width == 0)
        throw EmptyDataError("CSV input has no columns");
    if (!schema.has_header)
        for (std::size_t j = 0; j < width; ++j)
            header.push_back("col" + std::to_string(j));

    const int target = resolve(schema.target_column, header, width, "target");
    std::set<int> categorical;
    for (const auto& ref : schema.categorical_columns) {
        const int c = resolve(ref, header, width, "categorical");
        if (c == target)
            throw SchemaError("column '" + header[static_cast<std::size_t>(c)] +
                              "' cannot be both target and categorical");
        categorical.insert(c);
    }

    // Pass 1: keep complete rows.
    std::vector<const std::vector<std::string>*> kept;
    std::size_t dropped = 0;
    for (const auto& row : rows) {
        bool ok = row.size() == width;
        for (std::size_t j = 0; ok && j < width; ++j) {
            if (is_missing(row[j]))
                ok = false;
            else if (!categorical.count(static_cast<int>(j)) && !parse_number(row[j]))
                ok = false;
        }
        if (ok)
            kept.push_back(&row);
        else
            ++dropped;
    }
    if (kept.empty())
        throw EmptyDataError("no complete rows left after dropping missing values");

    // Pass 2: category levels in first-appearance order among kept rows.
    std::map<int, std::vector<std::string>> levels;
    for (int c : categorical) {
        auto& lv = levels[c];
        for (const auto* row : kept) {
            const auto& v = (*row)[static_cast<std::size_t>(c)];
            if (std::find(lv.begin(), lv.end(), v) == lv.end())
                lv.push_back(v);
        }
    }

    std::vector<std::string> names;
    for (std::size_t j = 0; j < width; ++j) {
        const int c = static_cast<int>(j);
        if (c == target)
            continue;
        if (categorical.count(c)) {
            for (const auto& level : levels[c])
                names.push_back(header[j] + "=" + level);
        } else {
            names.push_back(header[j]);
        }
    }
    if (names.empty())
        throw SchemaError("dataset has no feature columns besides the target");

    Matrix x(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(names.size()));
    Vector y(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const auto& row = *kept[static_cast<std::size_t>(i)];
        Eigen::Index col = 0;
        for (std::size_t j = 0; j < width; ++j) {
            const int c = static_cast<int>(j);
            if (c == target) {
                y(i) = *parse_number(row[j]);
            } else if (categorical.count(c)) {
                for (const auto& level : levels[c])
                    x(i, col++) = row[j] == level ? 1.0 : 0.0;
            } else {
                x(i, col++) = *parse_number(row[j]);
            }
        }
    }
    return {Dataset(std::move(x), std::move(y), std::move(names)), dropped};
}

LoadedCsv load_csv(const std::filesystem::path& path, const CsvSchema& schema)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad())
        throw IoError("error while reading '" + path.string() + "'");
    return parse_csv(buffer.str(), schema);
}

Matrix Standardizer::apply(const Matrix& features) const
{
    if (features.cols() != mean.size())
        throw ShapeError("standardizer was fitted on a different number of columns");
    Matrix out = features.rowwise() - mean.transpose();
    for (Eigen::Index j = 0; j < out.cols(); ++j)
        if (!degenerate[static_cast<std::size_t>(j)])
            out.col(j) /= std(j);
    return out;
}

Dataset Standardizer::apply(const Dataset& data) const
{
    std::optional<Vector> y;
    if (data.has_targets())
        y = data.targets();
    return Dataset(apply(data.features()), std::move(y), data.feature_names());
}

StandardizedData standardize(const Dataset& data)
{
    const Matrix& x = data.features();
    Standardizer t;
    t.mean = x.colwise().mean().transpose();
    t.std = ((x.rowwise() - t.mean.transpose()).array().square().colwise().sum() /
             static_cast<double>(x.rows()))
                .sqrt()
                .transpose();
    t.degenerate.resize(static_cast<std::size_t>(x.cols()));
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        t.degenerate[static_cast<std::size_t>(j)] = t.std(j) < 1e-12;
    Dataset out = t.apply(data);
    return {std::move(out), std::move(t)};
}

} // namespace uncoupled
