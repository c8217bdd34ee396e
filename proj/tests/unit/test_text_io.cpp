#include <doctest.h>

#include <filesystem>

#include "negdim/errors.hpp"
#include "negdim/text_io.hpp"

using namespace negdim;

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(3.0) == "3");
  CHECK(format_double(-0.6931471805599453) == "-0.6931471805599453");
  for (double v : {1e-300, 123456.789, 2.0 / 3.0}) CHECK(parse_double(format_double(v)) == v);
}

TEST_CASE("split, lines and parsers") {
  CHECK(split("a,b,,c", ',') == std::vector<std::string_view>{"a", "b", "", "c"});
  CHECK(lines("x\r\ny\n") == std::vector<std::string_view>{"x", "y"});
  CHECK(lines("x\ny") == std::vector<std::string_view>{"x", "y"});
  CHECK(parse_int(" 42 ") == 42);
  CHECK_THROWS_AS(parse_int("4.2"), DomainError);
  CHECK_THROWS_AS(parse_double("abc"), DomainError);
}

TEST_CASE("write_file_atomic replaces content") {
  const auto dir = std::filesystem::temp_directory_path() / "negdim_text_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  CHECK(read_file(path) == "second");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(read_file(dir / "missing"), DomainError);
}
