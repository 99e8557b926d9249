#include <gtest/gtest.h>

#include <cstdio>

#include "hbevent/json_io.hpp"
#include "hbevent/elements.hpp"
#include "hbevent/systems.hpp"

using namespace hbevent;

namespace {

SystemDefinition reload(const SystemDefinition& s) { return system_from_json(Json::parse(system_to_json(s).dump())); }

}  // namespace

TEST(JsonIo, ExpressionWithDotFactorRoundTrips) {
  PolynomialExpr e{Term{2.5, {Factor("x", 3), Factor("f", 1, true)}}, Term{-1.0, {}}};
  const auto j = expr_to_json(e);
  EXPECT_EQ(j.dump(), R"([[2.5,[["x",3],["f",1,true]]],[-1.0,[]]])");
  EXPECT_EQ(expr_from_json(j), e);
}

TEST(JsonIo, BuiltinElementsRoundTrip) {
  for (const auto& sys : {elements::cubic_spring(), elements::piecewise_spring(), elements::coulomb(),
                          elements::shape_memory_alloy(), elements::contact()}) {
    const auto back = reload(sys);
    EXPECT_EQ(back, sys) << sys.name;
    EXPECT_EQ(system_to_json(back).dump(), system_to_json(sys).dump()) << sys.name;
  }
}

TEST(JsonIo, AssembledSystemKeepsMechanicalMetadata) {
  auto h = two_dof_host();
  const auto sys = assemble_first_order(h, Excitation{{0.0, 1.0}, 0.02}, Attachment{elements::coulomb(), {0}});
  const auto back = reload(sys);
  EXPECT_EQ(back, sys);
  ASSERT_TRUE(back.mechanical);
  EXPECT_EQ(back.mechanical->K[0][1], -1.0);
}

TEST(JsonIo, FileRoundTrip) {
  const std::string path = ::testing::TempDir() + "hbevent_system.json";
  write_json_file(path, system_to_json(elements::contact()));
  EXPECT_EQ(system_from_json(read_json_file(path)), elements::contact());
  std::remove(path.c_str());
}

TEST(JsonIo, StructuralErrorsAreTyped) {
  auto expect_kind = [](const std::string& text, ErrorKind kind) {
    try {
      system_from_json(Json::parse(text));
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), kind) << text;
    }
  };
  expect_kind(R"({"states": []})", ErrorKind::InvalidDefinition);  // no components
  expect_kind(R"({"components": ["x"], "dimension": 2, "states": []})", ErrorKind::InvalidDefinition);
  expect_kind(R"({"components": ["x"], "states": [{"id": 1, "dynamics": [[[1.0, [["y", 1]]]]]}]})",
              ErrorKind::UnboundSymbol);
  expect_kind(R"({"components": ["x"], "states": [{"id": 1, "dynamics": [[[1.0, [["x"]]]]]}]})",
              ErrorKind::InvalidDefinition);
  expect_kind(R"({"components": ["x"], "states": [{"id": 1, "dynamics": [[]],
                  "transitions": [{"to": 1, "condition": [], "guard": {"expr": [], "op": "~"}}],
                  "successors": [1]}]})",
              ErrorKind::InvalidDefinition);
}

TEST(JsonIo, MissingFileIsIoError) {
  try {
    read_json_file("/nonexistent/dir/file.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
  }
}

TEST(JsonIo, ShippedSystemFixturesMatchBuiltins) {
  const std::string dir = std::string(HBEVENT_SOURCE_DIR) + "/systems/";
  for (const auto& [stem, sys] : elements::builtin()) {
    const auto loaded = system_from_json(read_json_file(dir + stem + ".json"));
    EXPECT_EQ(loaded, sys) << stem;
    EXPECT_EQ(reload(loaded), loaded) << stem;
  }
}
