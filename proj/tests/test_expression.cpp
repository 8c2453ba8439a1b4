#include <string>

#include "doctest.h"
#include "specgap/errors.hpp"
#include "specgap/expression.hpp"

using specgap::Expression;

TEST_CASE("constants and the variable") {
  CHECK(Expression::parse("1")(7.0) == 1.0);
  CHECK(Expression::parse("i")(7.0) == 7.0);
  CHECK(Expression::parse(" 2.5 ")(0.0) == 2.5);
}

TEST_CASE("precedence and associativity") {
  CHECK(Expression::parse("1+2*3")(0.0) == 7.0);
  CHECK(Expression::parse("(1+2)*3")(0.0) == 9.0);
  CHECK(Expression::parse("2^3^2")(0.0) == 512.0);
  CHECK(Expression::parse("-i^2")(3.0) == -9.0);
  CHECK(Expression::parse("10-4-3")(0.0) == 3.0);
  CHECK(Expression::parse("(i+1)^2")(3.0) == 16.0);
  CHECK(Expression::parse("2\xC3\x97i")(4.0) == 8.0);
}

TEST_CASE("syntax errors name the offset") {
  for (const char* bad : {"", "1+", "(1", "i i", "2**3", "x", "1.2.3"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Expression::parse(bad), specgap::DomainError);
  }
  try {
    Expression::parse("1 + x");
    FAIL("expected a parse error");
  } catch (const specgap::DomainError& e) {
    CHECK(std::string(e.what()).find("offset 4") != std::string::npos);
  }
}
