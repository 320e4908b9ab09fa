#include "generators.hpp"

#include "uncoupled/dataio.hpp"
#include "uncoupled/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace uncoupled;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path;
}

CsvSchema target_last()
{
    return CsvSchema{};
}

} // namespace

TEST_CASE("rows with a missing cell are dropped")
{
    const auto loaded = parse_csv("a,b,y\n1,2,3\n4,,6\n7,8,9\n", target_last());
    CHECK(loaded.dropped_rows == 1);
    CHECK(loaded.data.rows() == 2);
    CHECK(loaded.data.dim() == 2);
    CHECK(loaded.data.features()(1, 0) == 7.0);
    CHECK(loaded.data.targets()(1) == 9.0);
    CHECK(loaded.data.feature_names() == std::vector<std::string>{"a", "b"});

    for (const char* token : {"?", "NA", "NaN", "abc"}) {
        const auto l = parse_csv(std::string("a,y\n1,2\n") + token + ",3\n", target_last());
        CHECK(l.dropped_rows == 1);
    }
    // A short row counts as incomplete.
    CHECK(parse_csv("a,b,y\n1,2,3\n4,5\n", target_last()).dropped_rows == 1);
}

TEST_CASE("categorical columns become one-hot blocks")
{
    const std::string text = "sex,len,y\nM,0.5,1\nF,0.4,2\nI,0.3,3\nM,0.2,4\n";
    CsvSchema schema;
    schema.categorical_columns = {ColumnRef::by_name("sex")};
    const auto l = parse_csv(text, schema);
    CHECK(l.data.dim() == 4);
    CHECK(l.data.feature_names() == std::vector<std::string>{"sex=M", "sex=F", "sex=I", "len"});
    for (Eigen::Index i = 0; i < l.data.rows(); ++i)
        CHECK(l.data.features().row(i).head(3).sum() == 1.0);
    CHECK(l.data.features()(3, 0) == 1.0);
    CHECK(l.data.features()(2, 2) == 1.0);

    // Same content, same encoding.
    CHECK(parse_csv(text, schema).data.features() == l.data.features());
}

TEST_CASE("abalone-style schema has ten features")
{
    std::string text = "sex,length,diameter,height,whole,shucked,viscera,shell,rings\n";
    const char* sexes[] = {"M", "F", "I"};
    for (int i = 0; i < 12; ++i) {
        text += sexes[i % 3];
        for (int j = 0; j < 7; ++j)
            text += "," + std::to_string(0.1 * (i + j));
        text += "," + std::to_string(5 + i) + "\n";
    }
    CsvSchema schema;
    schema.target_column = ColumnRef::by_name("rings");
    schema.categorical_columns = {ColumnRef::by_index(0)};
    const auto l = parse_csv(text, schema);
    CHECK(l.data.dim() == 10);
    CHECK(l.data.rows() == 12);
}

TEST_CASE("column references")
{
    CHECK(ColumnRef::parse("3").index == 3);
    CHECK(ColumnRef::parse("-1").index == -1);
    CHECK(ColumnRef::parse("rings").name == "rings");

    CsvSchema by_index;
    by_index.target_column = ColumnRef::by_index(0);
    by_index.has_header = false;
    by_index.delimiter = ';';
    const auto l = parse_csv("10;1;2\n20;3;4\n", by_index);
    CHECK(l.data.targets()(1) == 20.0);
    CHECK(l.data.features()(0, 1) == 2.0);
    CHECK(l.data.feature_names() == std::vector<std::string>{"col1", "col2"});
}

TEST_CASE("schema and data errors")
{
    CsvSchema missing;
    missing.target_column = ColumnRef::by_name("price");
    CHECK_THROWS_AS(parse_csv("a,y\n1,2\n", missing), SchemaError);
    CsvSchema out_of_range;
    out_of_range.target_column = ColumnRef::by_index(5);
    CHECK_THROWS_AS(parse_csv("a,y\n1,2\n", out_of_range), SchemaError);
    CsvSchema overlap;
    overlap.categorical_columns = {ColumnRef::by_index(-1)};
    CHECK_THROWS_AS(parse_csv("a,y\n1,2\n", overlap), SchemaError);
    CHECK_THROWS_AS(parse_csv("y\n1\n2\n", target_last()), SchemaError);

    CHECK_THROWS_AS(parse_csv("a,y\n?,1\n2,\n", target_last()), EmptyDataError);
    CHECK_THROWS_AS(parse_csv("", target_last()), EmptyDataError);
    CHECK_THROWS_AS(load_csv("/nonexistent/dir/data.csv", target_last()), IoError);
}

TEST_CASE("loading from a file matches parsing the text")
{
    const std::string text = "a,b,y\r\n1,2,3\r\n\r\n4,5,6\r\n";
    const auto path = write_temp("uncoupled_dataio_test.csv", text);
    const auto from_file = load_csv(path, target_last());
    const auto from_text = parse_csv(text, target_last());
    CHECK(from_file.data.features() == from_text.data.features());
    CHECK(from_file.data.targets() == from_text.data.targets());
    CHECK(from_file.data.rows() == 2);
    std::filesystem::remove(path);
}

TEST_CASE("standardization")
{
    auto rng = testgen::rng_for(1, 90);
    Matrix x(50, 3);
    x.col(0) = testgen::normal_vector(50, rng, 5.0).array() + 2.0;
    x.col(1).setConstant(7.0);
    x.col(2) = testgen::normal_vector(50, rng);
    const Dataset d(x, Vector(testgen::normal_vector(50, rng)));
    const auto s = standardize(d);
    const Matrix& z = s.data.features();

    CHECK(std::abs(z.col(0).mean()) < 1e-12);
    // Population convention: divide by n.
    const double sd = std::sqrt(z.col(0).squaredNorm() / 50.0);
    CHECK(std::abs(sd - 1.0) < 1e-12);
    CHECK(z.col(1).isZero());
    CHECK(s.transform.degenerate == std::vector<bool>{false, true, false});
    CHECK(s.data.targets() == d.targets());

    // Reapplying the recorded transform reproduces the output.
    CHECK(s.transform.apply(x) == z);
    // An already standardized column is left alone.
    const auto again = standardize(s.data);
    CHECK((again.data.features().col(0) - z.col(0)).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK_THROWS_AS(s.transform.apply(Matrix(Matrix::Ones(2, 2))), ShapeError);
}
