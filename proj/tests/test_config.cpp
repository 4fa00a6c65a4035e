#include <catch_amalgamated.hpp>

#include "roomforge/config.hpp"

using roomforge::ConfigDoc;

TEST_CASE("config parses sections, numbers, strings, arrays") {
  auto doc = ConfigDoc::parse(R"(
# comment
version = 2

[weights]
structural = 2.0
furniture = 1   # trailing comment

[profile.against]
contact = 0.05
name = "flush"
tags = ["a", "b"]
dims = [1.5, 2.5]
flag = true
)");
  CHECK(doc.number("version") == 2.0);
  CHECK(doc.number("weights.structural") == 2.0);
  CHECK(doc.number("weights.furniture") == 1.0);
  CHECK(doc.number("profile.against.contact") == 0.05);
  CHECK(doc.str("profile.against.name") == "flush");
  CHECK(doc.str_list("profile.against.tags") == std::vector<std::string>{"a", "b"});
  CHECK(doc.num_list("profile.against.dims") == std::vector<double>{1.5, 2.5});
  CHECK(doc.boolean_or("profile.against.flag", false));
  CHECK(doc.number_or("missing.key", 7.5) == 7.5);
}

TEST_CASE("config quoted keys keep spaces") {
  auto doc = ConfigDoc::parse("[aliases]\n\"bedside cabinet\" = \"Nightstand\"\n");
  CHECK(doc.str("aliases.bedside cabinet") == "Nightstand");
}

TEST_CASE("config keys_under lists section keys in order") {
  auto doc = ConfigDoc::parse("[m]\nb = 1\na = 2\n[m.sub]\nc = 3\n");
  CHECK(doc.keys_under("m") == std::vector<std::string>{"a", "b", "sub.c"});
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS(ConfigDoc::parse("[unterminated\n"));
  CHECK_THROWS(ConfigDoc::parse("key value\n"));
  CHECK_THROWS(ConfigDoc::parse("key = \n"));
  CHECK_THROWS(ConfigDoc::parse("key = [1, \"a\"]\n"));
  CHECK_THROWS(ConfigDoc::parse("key = 1.2.3\n"));
  CHECK_THROWS(ConfigDoc::parse("key = \"open\n"));
}
