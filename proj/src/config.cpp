#include "netprof/config.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "netprof/errors.hpp"

namespace netprof {

using nlohmann::json;

const char* to_string(PoolKind k) {
  return k == PoolKind::Max ? "max" : "avg";
}

const char* to_string(BlockMode m) {
  switch (m) {
    case BlockMode::Auto: return "auto";
    case BlockMode::Dense: return "dense";
    case BlockMode::Harmonic: return "harmonic";
  }
  return "?";
}

std::vector<Violation> validate(const NetworkSpec& spec) {
  std::vector<Violation> out;
  auto bad = [&out](std::string field, std::string rule) {
    out.push_back({std::move(field), std::move(rule)});
  };

  if (spec.stem.convs.empty()) bad("stem.convs", "at least one conv");
  for (size_t i = 0; i < spec.stem.convs.size(); ++i) {
    const ConvSpec& c = spec.stem.convs[i];
    std::string f = "stem.convs[" + std::to_string(i) + "]";
    if (c.out_channels < 1) bad(f + ".out_channels", "must be positive");
    if (c.kernel != 1 && c.kernel != 3 && c.kernel != 7)
      bad(f + ".kernel", "kernel must be one of 1, 3, 7");
    if (c.stride != 1 && c.stride != 2) bad(f + ".stride", "stride must be 1 or 2");
    if (c.padding < 0) bad(f + ".padding", "must be non-negative");
  }
  if (spec.stem.pool_kernel < 1) bad("stem.pool_kernel", "must be positive");
  if (spec.stem.pool_stride < 1) bad("stem.pool_stride", "must be positive");

  if (spec.blocks.empty()) bad("blocks", "at least one block");
  for (size_t i = 0; i < spec.blocks.size(); ++i) {
    const BlockSpec& b = spec.blocks[i];
    std::string f = "blocks[" + std::to_string(i) + "]";
    if (b.num_layers < 1) bad(f + ".num_layers", "must be positive");
    if (b.growth_rate < 1) bad(f + ".growth_rate", "must be positive");
    // Auto blocks may resolve to harmonic, so they need a usable multiplier too.
    if (b.mode != BlockMode::Dense && !(b.multiplier > 1.0))
      bad(f + ".multiplier", "multiplier must exceed 1");
  }

  if (spec.channel_list.size() != spec.blocks.size())
    bad("channel_list", "length must equal block count");
  for (size_t i = 0; i < spec.channel_list.size(); ++i)
    if (spec.channel_list[i] < 1)
      bad("channel_list[" + std::to_string(i) + "]", "must be positive");

  if (spec.threshold < 1) bad("threshold", "must be positive");
  if (!(spec.dense_reduction > 0.0 && spec.dense_reduction <= 1.0))
    bad("dense_reduction", "reduction in (0,1]");
  if (!(spec.harmonic_reduction > 0.0 && spec.harmonic_reduction <= 1.0))
    bad("harmonic_reduction", "reduction in (0,1]");
  if (spec.classifier_classes < 1) bad("classifier_classes", "must be positive");
  return out;
}

namespace {

NetworkSpec threshnet(const std::string& name, const std::vector<int>& layers) {
  NetworkSpec s;
  s.name = name;
  s.stem.convs = {ConvSpec{64, 3, 2, 1, false}, ConvSpec{128, 3, 1, 1, false}};
  s.stem.pool_kernel = 3;
  s.stem.pool_stride = 2;
  s.stem.pool_kind = PoolKind::Max;

  const std::vector<int> growth = {32, 32, 32, 40, 160};
  // First three blocks dense, last two harmonic; transition 3 keeps spatial
  // size (no pool) and the final block feeds the classifier directly.
  const std::vector<bool> downsample = {true, true, false, true, false};
  for (int i = 0; i < 5; ++i) {
    BlockSpec b;
    b.num_layers = layers[static_cast<size_t>(i)];
    b.growth_rate = growth[static_cast<size_t>(i)];
    b.mode = i < 3 ? BlockMode::Dense : BlockMode::Harmonic;
    b.multiplier = i < 3 ? 1.0 : 1.7;
    b.use_bottleneck = i < 3;
    b.downsample_after = downsample[static_cast<size_t>(i)];
    s.blocks.push_back(b);
  }
  s.channel_list = {128, 192, 288, 480, 960};
  s.threshold = 320;
  s.dense_reduction = 0.5;
  s.harmonic_reduction = 0.85;
  s.classifier_classes = 1000;
  return s;
}

NetworkSpec densenet121() {
  NetworkSpec s;
  s.name = "densenet121";
  s.stem.convs = {ConvSpec{64, 7, 2, 3, false}};
  s.stem.pool_kernel = 3;
  s.stem.pool_stride = 2;
  s.stem.pool_kind = PoolKind::Max;

  const std::vector<int> layers = {6, 12, 24, 16};
  for (size_t i = 0; i < layers.size(); ++i) {
    BlockSpec b;
    b.num_layers = layers[i];
    b.growth_rate = 32;
    b.mode = BlockMode::Dense;
    b.multiplier = 1.0;
    b.use_bottleneck = true;
    b.downsample_after = i + 1 < layers.size();
    s.blocks.push_back(b);
  }
  // 64 -> +6k/2 -> 128 -> +12k/2 -> 256 -> +24k/2 -> 512 (0.5 compression)
  s.channel_list = {64, 128, 256, 512};
  s.threshold = 320;
  s.dense_reduction = 0.5;
  s.harmonic_reduction = 0.85;
  s.classifier_classes = 1000;
  return s;
}

}  // namespace

NetworkSpec preset(const std::string& name) {
  if (name == "threshnet79") return threshnet(name, {6, 8, 12, 16, 4});
  if (name == "threshnet95") return threshnet(name, {6, 12, 16, 16, 4});
  if (name == "densenet121") return densenet121();
  throw UnknownPresetError(name);
}

namespace {

constexpr int kConfigSchemaVersion = 1;

[[noreturn]] void schema_fail(const std::string& msg) {
  throw ConfigError(ConfigError::Kind::Schema, msg);
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return it.key() == k;
        }) == allowed.end())
      schema_fail(where + ": unexpected field \"" + it.key() + "\"");
  }
  for (const char* k : allowed)
    if (!j.contains(k)) schema_fail(where + ": missing field \"" + k + "\"");
}

int get_int(const json& j, const std::string& where, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer())
    schema_fail(where + "." + key + ": expected an integer");
  return v.get<int>();
}

double get_num(const json& j, const std::string& where, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) schema_fail(where + "." + key + ": expected a number");
  return v.get<double>();
}

bool get_bool(const json& j, const std::string& where, const char* key) {
  const json& v = j.at(key);
  if (!v.is_boolean()) schema_fail(where + "." + key + ": expected a boolean");
  return v.get<bool>();
}

std::string get_str(const json& j, const std::string& where, const char* key) {
  const json& v = j.at(key);
  if (!v.is_string()) schema_fail(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

ConvSpec conv_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) schema_fail(where + ": expected an object");
  check_keys(j, where, {"out_channels", "kernel", "stride", "padding", "has_bias"});
  ConvSpec c;
  c.out_channels = get_int(j, where, "out_channels");
  c.kernel = get_int(j, where, "kernel");
  c.stride = get_int(j, where, "stride");
  c.padding = get_int(j, where, "padding");
  c.has_bias = get_bool(j, where, "has_bias");
  return c;
}

json conv_to_json(const ConvSpec& c) {
  return json{{"out_channels", c.out_channels},
              {"kernel", c.kernel},
              {"stride", c.stride},
              {"padding", c.padding},
              {"has_bias", c.has_bias}};
}

BlockMode mode_from_string(const std::string& s, const std::string& where) {
  if (s == "auto") return BlockMode::Auto;
  if (s == "dense") return BlockMode::Dense;
  if (s == "harmonic") return BlockMode::Harmonic;
  schema_fail(where + ": mode must be one of auto, dense, harmonic");
}

}  // namespace

NetworkSpec parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.what() carries the byte position of the failure
    throw ConfigError(ConfigError::Kind::Syntax, e.what());
  }
  if (!j.is_object()) schema_fail("config: top level must be an object");
  check_keys(j, "config",
             {"schema_version", "name", "stem", "blocks", "channel_list",
              "threshold", "dense_reduction", "harmonic_reduction",
              "classifier_classes"});
  if (get_int(j, "config", "schema_version") != kConfigSchemaVersion)
    schema_fail("config.schema_version: unsupported version");

  NetworkSpec s;
  s.name = get_str(j, "config", "name");

  const json& stem = j.at("stem");
  if (!stem.is_object()) schema_fail("stem: expected an object");
  check_keys(stem, "stem", {"convs", "pool_kernel", "pool_stride", "pool_kind"});
  const json& convs = stem.at("convs");
  if (!convs.is_array()) schema_fail("stem.convs: expected an array");
  for (size_t i = 0; i < convs.size(); ++i)
    s.stem.convs.push_back(
        conv_from_json(convs[i], "stem.convs[" + std::to_string(i) + "]"));
  s.stem.pool_kernel = get_int(stem, "stem", "pool_kernel");
  s.stem.pool_stride = get_int(stem, "stem", "pool_stride");
  std::string pk = get_str(stem, "stem", "pool_kind");
  if (pk == "max")
    s.stem.pool_kind = PoolKind::Max;
  else if (pk == "avg")
    s.stem.pool_kind = PoolKind::Avg;
  else
    schema_fail("stem.pool_kind: must be \"max\" or \"avg\"");

  const json& blocks = j.at("blocks");
  if (!blocks.is_array()) schema_fail("blocks: expected an array");
  for (size_t i = 0; i < blocks.size(); ++i) {
    std::string where = "blocks[" + std::to_string(i) + "]";
    const json& bj = blocks[i];
    if (!bj.is_object()) schema_fail(where + ": expected an object");
    check_keys(bj, where,
               {"num_layers", "growth_rate", "mode", "multiplier",
                "use_bottleneck", "downsample_after"});
    BlockSpec b;
    b.num_layers = get_int(bj, where, "num_layers");
    b.growth_rate = get_int(bj, where, "growth_rate");
    b.mode = mode_from_string(get_str(bj, where, "mode"), where + ".mode");
    b.multiplier = get_num(bj, where, "multiplier");
    b.use_bottleneck = get_bool(bj, where, "use_bottleneck");
    b.downsample_after = get_bool(bj, where, "downsample_after");
    s.blocks.push_back(b);
  }

  const json& channels = j.at("channel_list");
  if (!channels.is_array()) schema_fail("channel_list: expected an array");
  for (size_t i = 0; i < channels.size(); ++i) {
    if (!channels[i].is_number_integer())
      schema_fail("channel_list[" + std::to_string(i) + "]: expected an integer");
    s.channel_list.push_back(channels[i].get<int>());
  }
  if (s.channel_list.size() != s.blocks.size())
    schema_fail("channel_list: length must equal block count");

  s.threshold = get_int(j, "config", "threshold");
  s.dense_reduction = get_num(j, "config", "dense_reduction");
  s.harmonic_reduction = get_num(j, "config", "harmonic_reduction");
  s.classifier_classes = get_int(j, "config", "classifier_classes");

  auto violations = validate(s);
  if (!violations.empty()) {
    std::ostringstream msg;
    for (size_t i = 0; i < violations.size(); ++i) {
      if (i) msg << "; ";
      msg << violations[i].field << ": " << violations[i].rule;
    }
    throw ConfigError(ConfigError::Kind::Invariant, msg.str());
  }
  return s;
}

std::string serialize_config(const NetworkSpec& s) {
  json stem;
  stem["convs"] = json::array();
  for (const ConvSpec& c : s.stem.convs) stem["convs"].push_back(conv_to_json(c));
  stem["pool_kernel"] = s.stem.pool_kernel;
  stem["pool_stride"] = s.stem.pool_stride;
  stem["pool_kind"] = to_string(s.stem.pool_kind);

  json blocks = json::array();
  for (const BlockSpec& b : s.blocks)
    blocks.push_back(json{{"num_layers", b.num_layers},
                          {"growth_rate", b.growth_rate},
                          {"mode", to_string(b.mode)},
                          {"multiplier", b.multiplier},
                          {"use_bottleneck", b.use_bottleneck},
                          {"downsample_after", b.downsample_after}});

  json j{{"schema_version", kConfigSchemaVersion},
         {"name", s.name},
         {"stem", stem},
         {"blocks", blocks},
         {"channel_list", s.channel_list},
         {"threshold", s.threshold},
         {"dense_reduction", s.dense_reduction},
         {"harmonic_reduction", s.harmonic_reduction},
         {"classifier_classes", s.classifier_classes}};
  return j.dump(2) + "\n";
}

}  // namespace netprof
