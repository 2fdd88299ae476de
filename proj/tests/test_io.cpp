#include <doctest.h>

#include <cmath>
#include <sstream>

#include "precis/io.hpp"

using namespace precis;

TEST_SUITE("io") {
  TEST_CASE("config parsing") {
    std::istringstream in("# sweep\nseed = 7\n\nsigma-eps2=0.5  # trailing\nmethods = glasso, scio\n");
    const auto m = parse_config(in);
    CHECK(m.size() == 3);
    CHECK(m.at("seed") == "7");
    CHECK(m.at("sigma_eps2") == "0.5");
    CHECK(m.at("methods") == "glasso, scio");

    std::istringstream dup("k = 1\nk = 2\n");
    CHECK_THROWS_AS(parse_config(dup), ParseError);
    std::istringstream noeq("just words\n");
    CHECK_THROWS_AS(parse_config(noeq), ParseError);
    CHECK_THROWS(read_config_file("/nonexistent/precis.cfg"));
  }

  TEST_CASE("scalar parsing") {
    CHECK(parse_double("1e-3", "x") == 1e-3);
    CHECK_THROWS_AS(parse_double("1.5x", "x"), ParseError);
    CHECK(parse_integer("-42", "x") == -42);
    CHECK_THROWS_AS(parse_integer("4.2", "x"), ParseError);
    CHECK(parse_bool("yes", "x"));
    CHECK(parse_bool("1", "x"));
    CHECK_FALSE(parse_bool("false", "x"));
    CHECK_THROWS_AS(parse_bool("maybe", "x"), ParseError);
    const auto parts = split_list(" a, b ,,c ");
    REQUIRE(parts.size() == 3);
    CHECK(parts[1] == "b");
  }

  TEST_CASE("grid parsing") {
    const auto g = parse_grid("0.1,1,10");
    REQUIRE(g.size() == 3);
    CHECK(g[2] == 10.0);
    const auto lg = parse_grid("log:0.01:10:4");
    REQUIRE(lg.size() == 4);
    CHECK(lg[0] == doctest::Approx(0.01));
    CHECK(lg[1] == doctest::Approx(0.1));
    CHECK(lg[3] == doctest::Approx(10.0));
    const auto ln = parse_grid("lin:1:2:3");
    REQUIRE(ln.size() == 3);
    CHECK(ln[1] == doctest::Approx(1.5));
    CHECK_THROWS_AS(parse_grid("log:0:1:3"), ParseError);
    CHECK_THROWS_AS(parse_grid("cube:1:2:3"), ParseError);
    CHECK_THROWS_AS(parse_grid(""), ParseError);
  }

  TEST_CASE("expression with header and sample labels") {
    std::istringstream in("id\tg1\tg2\tg3\ns1\t1\t5\t2\ns2\t2\t5\t4\ns3\t3\t5\t1\n");
    const ExpressionMatrix m = read_expression(in);
    REQUIRE(m.genes.size() == 2);
    CHECK(m.genes[0] == "g1");
    CHECK(m.genes[1] == "g3");
    REQUIRE(m.dropped.size() == 1);
    CHECK(m.dropped[0] == "g2");
    CHECK(m.values.rows() == 3);
    CHECK(m.values(2, 1) == 1.0);
  }

  TEST_CASE("expression header without a corner label") {
    std::istringstream in("g1,g2\ns1,1,2\ns2,3,5\n");
    const ExpressionMatrix m = read_expression(in);
    REQUIRE(m.genes.size() == 2);
    CHECK(m.values(1, 1) == 5.0);
  }

  TEST_CASE("genes in rows") {
    std::istringstream in("gene s1 s2 s3\nA 1 2 3\nB 4 4 9\n");
    ExpressionLayout layout;
    layout.genes_in_columns = false;
    const ExpressionMatrix m = read_expression(in, layout);
    REQUIRE(m.genes.size() == 2);
    CHECK(m.values.rows() == 3);
    CHECK(m.values.cols() == 2);
    CHECK(m.values(2, 1) == 9.0);
  }

  TEST_CASE("bare numeric expression and round trip") {
    std::istringstream in("1 2\n3 4\n5 7\n");
    ExpressionLayout bare;
    bare.header = false;
    bare.row_labels = false;
    const ExpressionMatrix m = read_expression(in, bare);
    CHECK(m.genes.size() == 2);
    std::stringstream out;
    write_expression(out, m);
    const ExpressionMatrix back = read_expression(out);
    CHECK(back.genes == m.genes);
    CHECK(back.values(2, 1) == 7.0);
    std::istringstream ragged("g1 g2\ns1 1 2\ns2 3\n");
    CHECK_THROWS_AS(read_expression(ragged), ParseError);
  }

  TEST_CASE("number formatting") {
    CHECK(format_number(0.25) == "0.25");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-HUGE_VAL) == "-inf");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  }
}
