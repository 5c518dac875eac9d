#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fuzzybeta/dataset.hpp"
#include "fuzzybeta/error.hpp"

using namespace fuzzybeta;

namespace {

CsvTable parse(const std::string& text, char delim = ',') {
  std::istringstream in(text);
  return parse_csv(in, delim);
}

}  // namespace

TEST_CASE("csv parsing") {
  const CsvTable t = parse("\xEF\xBB\xBFm,s,\"x, y\"\r\n0.5,10,1\r\n\n0.25,\"3\",\"a \"\"q\"\"\"\n");
  REQUIRE(t.header.size() == 3);
  CHECK(t.header[0] == "m");
  CHECK(t.header[2] == "x, y");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][2] == "a \"q\"");
  CHECK(t.lines[0] == 2);
  CHECK(t.lines[1] == 4);
  CHECK(t.column_index("s") == 1);
  CHECK_FALSE(t.has_column("z"));
  CHECK_THROWS_AS(t.column_index("z"), UsageError);

  const CsvTable semi = parse("a;b\n1;2\n", ';');
  CHECK(semi.rows[0][1] == "2");
}

TEST_CASE("csv errors carry line numbers") {
  try {
    parse("m,s\n0.5,1\n0.5\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  try {
    parse("m,s\n0.5,abc\n").numeric("s");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("m,s\n\"0.5,1\n"), ParseError);
  CHECK_THROWS_AS(read_csv("/nonexistent/file.csv"), ParseError);
}

TEST_CASE("numbers") {
  CHECK(is_missing(""));
  CHECK(is_missing("NA"));
  CHECK(is_missing("NaN"));
  CHECK_FALSE(is_missing("0"));
  CHECK(parse_number(" 1.5e-3 ", 1) == 1.5e-3);
  CHECK_THROWS_AS(parse_number("1.5x", 7), ParseError);
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5}) {
    CHECK(parse_number(format_full(v), 1) == v);
  }
  const std::vector<double> col = parse("m\nNA\n0.5\n").numeric("m");
  CHECK(std::isnan(col[0]));
  CHECK(col[1] == 0.5);
}

TEST_CASE("csv round trip") {
  const CsvTable t = parse("a,b\n\"x,1\",2\nplain,\"q\"\"\"\n");
  std::ostringstream out;
  write_csv(out, t);
  const CsvTable back = parse(out.str());
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
}

TEST_CASE("loading a fuzzy dataset") {
  const CsvTable t = parse(
      "m,s,x,z\n"
      "0.4,10,1.0,2\n"
      "NA,10,1.0,2\n"
      "0.0,5,2.0,1\n"
      "0.6,,2.5,1\n"
      "0.7,8,3.0,3\n"
      "0.2,8,0.5,4\n");
  ModelSpec spec;
  spec.mu_covariates = {"x"};
  spec.phi_covariates = {"z"};
  const LoadedDataset d = load_fuzzy_dataset(t, spec);
  CHECK(d.data.n() == 4);
  CHECK(d.dropped_missing == 2);
  CHECK(d.clamped_modes == 1);
  CHECK(d.kept_rows == std::vector<std::size_t>{0, 2, 4, 5});
  CHECK(d.data.modes[1] == kModeClampEpsilon);
  CHECK(d.data.design.X(3, 1) == 0.5);
  CHECK(d.data.design.Z(2, 1) == 3.0);
  CHECK(d.data.design.mean_names == std::vector<std::string>{"(Intercept)", "x"});

  spec.boundary = BoundaryPolicy::reject;
  CHECK_THROWS_WITH_AS(load_fuzzy_dataset(t, spec), doctest::Contains("line 4"), ParseError);
  spec.boundary = BoundaryPolicy::clamp;
  spec.mu_covariates = {"missing"};
  CHECK_THROWS_AS(load_fuzzy_dataset(t, spec), UsageError);

  const CsvTable neg = parse("m,s\n0.5,-1\n");
  CHECK_THROWS_WITH_AS(load_fuzzy_dataset(neg, ModelSpec{}), doctest::Contains("line 2"), ParseError);
}

TEST_CASE("digests") {
  // FNV-1a 64 reference values
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}
