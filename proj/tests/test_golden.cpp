#include "doctest.h"

#include <fstream>
#include <sstream>
#include <string>

#include "ixt/errors.hpp"
#include "ixt/golden.hpp"

using namespace ixt;
using namespace ixt::golden;

namespace {

const std::string kCommitted = std::string(IXT_TEST_DATA) + "/golden.json";

const char* kSmall = R"({
  "schema_version": 1,
  "precision_digits": 30,
  "entries": [
    {"op": "gamma", "inputs": {"x": "0.5"}, "value": "1.77245385090551602729816748334"},
    {"op": "psi", "inputs": {"tau": "1", "x": "1"}, "value": "0.0161090469386134178283612823037"}
  ]
})";

}  // namespace

TEST_CASE("parse and serialize round trip") {
    const auto f = parse(kSmall);
    CHECK(f.schema_version == 1);
    CHECK(f.precision_digits == 30);
    REQUIRE(f.entries.size() == 2);
    CHECK(f.entries[1].inputs.at("tau") == "1");
    const auto again = parse(serialize(f));
    CHECK(serialize(again) == serialize(f));
}

TEST_CASE("schema violations") {
    CHECK_THROWS_AS(parse("{"), IoError);
    CHECK_THROWS_AS(parse(R"({"precision_digits": 30, "entries": []})"), IoError);
    CHECK_THROWS_AS(parse(R"({"schema_version": 2, "precision_digits": 30, "entries": []})"), IoError);
    // values are decimal strings, never binary floats
    CHECK_THROWS_AS(parse(R"({"schema_version": 1, "precision_digits": 30,
        "entries": [{"op": "gamma", "inputs": {"x": "0.5"}, "value": 1.77}]})"), IoError);
    CHECK_THROWS_AS(load("/nonexistent/golden.json"), IoError);
}

TEST_CASE("tolerances by op family") {
    CHECK(tolerance("gamma") == 1e-12);
    CHECK(tolerance("macdonald_imag_order") == 1e-12);
    CHECK(tolerance("psi") == 1e-10);
    CHECK(tolerance("forward_F.zero_mean") == 1e-10);
}

TEST_CASE("small file passes and a corrupted digit fails") {
    auto f = parse(kSmall);
    for (const auto& c : check(f)) CHECK(c.pass);
    f.entries[1].value = "0.0161090469386134178283612823037";
    f.entries[1].value[8] = '7';
    const auto bad = check(f);
    CHECK(bad[0].pass);
    CHECK_FALSE(bad[1].pass);
    CHECK(bad[1].error.empty());
}

TEST_CASE("unknown op is reported, not thrown") {
    GoldenFile f;
    f.entries.push_back({"laplace", {{"x", "1"}}, "1"});
    f.entries.push_back({"gamma", {{"y", "1"}}, "1"});
    const auto r = check(f);
    REQUIRE(r.size() == 2);
    for (const auto& c : r) {
        CHECK_FALSE(c.pass);
        CHECK_FALSE(c.error.empty());
    }
    CHECK_THROWS_AS(evaluate(f.entries[0]), DomainError);
}

TEST_CASE("committed golden file is reproduced") {
    const auto f = load(kCommitted);
    CHECK(f.schema_version == kSchemaVersion);
    CHECK(f.precision_digits >= 30);
    CHECK(f.entries.size() >= 40);
    for (const auto& c : check(f)) {
        INFO(c.entry.op, " ", c.abs_error, " ", c.error);
        CHECK(c.pass);
    }
}

TEST_CASE("committed file survives parse then serialize byte for byte") {
    std::ifstream in(kCommitted);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(serialize(parse(buf.str())) == buf.str());
}
