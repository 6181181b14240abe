#include "netprof/config.hpp"

#include <vector>

#include "doctest.h"
#include "netprof/errors.hpp"
#include "testutil.hpp"

using namespace netprof;

TEST_CASE("presets validate") {
  for (const char* name : {"threshnet79", "threshnet95", "densenet121"})
    CHECK(validate(preset(name)).empty());
}

TEST_CASE("threshnet79 preset layout") {
  NetworkSpec s = preset("threshnet79");
  REQUIRE(s.blocks.size() == 5);
  std::vector<int> layers, growth;
  for (const BlockSpec& b : s.blocks) {
    layers.push_back(b.num_layers);
    growth.push_back(b.growth_rate);
  }
  CHECK(layers == std::vector<int>{6, 8, 12, 16, 4});
  CHECK(growth == std::vector<int>{32, 32, 32, 40, 160});
  CHECK(s.channel_list == std::vector<int>{128, 192, 288, 480, 960});
  CHECK(s.threshold == 320);
  CHECK(s.classifier_classes == 1000);
  for (int i = 0; i < 3; ++i) {
    CHECK(s.blocks[static_cast<size_t>(i)].mode == BlockMode::Dense);
    CHECK(s.blocks[static_cast<size_t>(i)].use_bottleneck);
  }
  for (int i = 3; i < 5; ++i) {
    CHECK(s.blocks[static_cast<size_t>(i)].mode == BlockMode::Harmonic);
    CHECK(s.blocks[static_cast<size_t>(i)].multiplier == doctest::Approx(1.7));
  }
  std::vector<bool> down;
  for (const BlockSpec& b : s.blocks) down.push_back(b.downsample_after);
  CHECK(down == std::vector<bool>{true, true, false, true, false});
  // two 3x3 stem convs, 64 then the first channel_list entry
  REQUIRE(s.stem.convs.size() == 2);
  CHECK(s.stem.convs[0].out_channels == 64);
  CHECK(s.stem.convs[1].out_channels == 128);
}

TEST_CASE("threshnet95 differs from threshnet79 only in layer counts") {
  NetworkSpec a = preset("threshnet79");
  NetworkSpec b = preset("threshnet95");
  std::vector<int> layers_b;
  for (const BlockSpec& blk : b.blocks) layers_b.push_back(blk.num_layers);
  CHECK(layers_b == std::vector<int>{6, 12, 16, 16, 4});
  // overwrite the layer counts and name; everything else must match
  for (size_t i = 0; i < a.blocks.size(); ++i)
    a.blocks[i].num_layers = b.blocks[i].num_layers;
  a.name = b.name;
  CHECK(a == b);
}

TEST_CASE("densenet121 preset layout") {
  NetworkSpec s = preset("densenet121");
  REQUIRE(s.blocks.size() == 4);
  std::vector<int> layers;
  for (const BlockSpec& b : s.blocks) {
    layers.push_back(b.num_layers);
    CHECK(b.growth_rate == 32);
    CHECK(b.mode == BlockMode::Dense);
    CHECK(b.use_bottleneck);
  }
  CHECK(layers == std::vector<int>{6, 12, 24, 16});
  CHECK(s.channel_list == std::vector<int>{64, 128, 256, 512});
  REQUIRE(s.stem.convs.size() == 1);
  CHECK(s.stem.convs[0].kernel == 7);
  CHECK(s.stem.convs[0].out_channels == 64);
}

TEST_CASE("unknown preset") {
  CHECK_THROWS_AS(preset("threshnet50"), UnknownPresetError);
  CHECK_THROWS_AS(preset(""), UnknownPresetError);
}

TEST_CASE("presets round-trip through the config format") {
  for (const char* name : {"threshnet79", "threshnet95", "densenet121"}) {
    NetworkSpec s = preset(name);
    CHECK(parse_config(serialize_config(s)) == s);
  }
}

TEST_CASE("random specs round-trip") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    NetworkSpec s = testutil::random_spec(seed, /*buildable=*/false);
    REQUIRE(validate(s).empty());
    NetworkSpec back = parse_config(serialize_config(s));
    CHECK(back == s);
  }
}

TEST_CASE("syntax errors report a position") {
  try {
    parse_config("{ \"schema_version\": 1, nope }");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.kind == ConfigError::Kind::Syntax);
    CHECK(std::string(e.what()).find("parse error") != std::string::npos);
  }
}

TEST_CASE("schema violations") {
  std::string doc = serialize_config(preset("threshnet79"));

  SUBCASE("renamed field is both missing and unexpected") {
    auto pos = doc.find("\"threshold\"");
    std::string broken = doc;
    broken.replace(pos, 11, "\"thresholdX\"");
    try {
      parse_config(broken);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.kind == ConfigError::Kind::Schema);
    }
  }

  SUBCASE("channel_list length mismatch") {
    NetworkSpec s = preset("threshnet79");
    s.channel_list.pop_back();
    try {
      parse_config(serialize_config(s));
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.kind == ConfigError::Kind::Schema);
      CHECK(std::string(e.what()).find("channel_list") != std::string::npos);
    }
  }
}

TEST_CASE("invariant violations are delegated to validate") {
  NetworkSpec s = preset("threshnet79");
  s.threshold = 0;
  try {
    parse_config(serialize_config(s));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.kind == ConfigError::Kind::Invariant);
    CHECK(std::string(e.what()).find("threshold") != std::string::npos);
  }
}

TEST_CASE("validate names field and rule") {
  SUBCASE("harmonic multiplier") {
    NetworkSpec s = preset("threshnet79");
    s.blocks[3].multiplier = 1.0;
    auto v = validate(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "blocks[3].multiplier");
    CHECK(v[0].rule == "multiplier must exceed 1");
  }
  SUBCASE("reduction range") {
    NetworkSpec s = preset("threshnet95");
    s.dense_reduction = 1.5;
    auto v = validate(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "dense_reduction");
    CHECK(v[0].rule == "reduction in (0,1]");
  }
  SUBCASE("kernel whitelist") {
    NetworkSpec s = preset("densenet121");
    s.stem.convs[0].kernel = 5;
    auto v = validate(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "stem.convs[0].kernel");
  }
  SUBCASE("several violations accumulate") {
    NetworkSpec s = preset("threshnet79");
    s.threshold = 0;
    s.harmonic_reduction = 0.0;
    s.blocks[0].num_layers = 0;
    CHECK(validate(s).size() == 3);
  }
}
