#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "netprof/analysis.hpp"
#include "netprof/config.hpp"
#include "netprof/errors.hpp"
#include "netprof/export.hpp"
#include "netprof/refexec.hpp"
#include "netprof/topology.hpp"
#include "netprof/version.hpp"

namespace {

using namespace netprof;

NetworkSpec load_spec(const std::string& source) {
  namespace fs = std::filesystem;
  const bool path_like = source.find('/') != std::string::npos ||
                         source.find('\\') != std::string::npos ||
                         source.ends_with(".json");
  if (fs::exists(fs::path(source))) {
    std::ifstream f(source, std::ios::binary);
    if (!f)
      throw ConfigError(ConfigError::Kind::Schema,
                        "cannot open config file: " + source);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
  }
  if (path_like)
    throw ConfigError(ConfigError::Kind::Schema,
                      "cannot open config file: " + source);
  return preset(source);
}

void require_input_size(int input) {
  if (input < 32 || input > 8192)
    throw ConfigError(ConfigError::Kind::Invariant,
                      "input size must be in [32, 8192] (got " +
                          std::to_string(input) + ")");
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write output file: " + path);
  f << content;
  if (!f) throw std::runtime_error("cannot write output file: " + path);
}

int cmd_describe(const std::string& source, int input) {
  AnalysisDocument doc = analyze(load_spec(source), input);
  std::cout << "network: " << doc.spec.name << "\n";
  std::cout << "input: " << input << "x" << input << "\n";
  char row[160];
  std::cout << "block  mode       layers     k   in_ch  in_size    out_ch\n";
  for (const BlockSummary& b : doc.blocks) {
    std::snprintf(row, sizeof(row), "%5d  %-9s  %6d  %4d  %6d  %-9s %6d\n",
                  b.index, to_string(b.mode), b.num_layers, b.growth_rate,
                  b.input_channels,
                  (std::to_string(b.input_h) + "x" + std::to_string(b.input_w)).c_str(),
                  b.output_channels);
    std::cout << row;
  }
  std::cout << "classifier: global_avgpool -> fc -> "
            << doc.spec.classifier_classes << "\n";
  return 0;
}

int cmd_analyze(const std::string& source, int input, int classes,
                bool classes_set, const std::string& format, bool zero_copy,
                const std::string& out) {
  require_input_size(input);
  NetworkSpec spec = load_spec(source);
  if (classes_set) spec.classifier_classes = classes;
  TrafficOptions opts;
  opts.materialize_concat = !zero_copy;
  AnalysisDocument doc = analyze(spec, input, opts);
  write_output(out, format == "json" ? analysis_to_json(doc) : analysis_to_text(doc));
  return 0;
}

int cmd_export(const std::string& source, const std::string& format,
               const std::string& out) {
  NetworkSpec spec = load_spec(source);
  ComputeGraph g = build_graph(spec);
  write_output(out, format == "json" ? graph_to_json(g, spec.name)
                                     : graph_to_dot(g, spec.name));
  return 0;
}

int cmd_exec(const std::string& source, int input, std::uint64_t seed,
             int classes, bool classes_set, bool verify) {
  require_input_size(input);
  NetworkSpec spec = load_spec(source);
  if (classes_set) spec.classifier_classes = classes;
  ComputeGraph g = build_graph(spec);
  TensorShape in_shape{1, 3, input, input};
  ShapeMap shapes = propagate(g, in_shape);
  WeightStore ws = init_weights(g, shapes, seed);
  Tensor x = random_tensor(in_shape, seed);
  Schedule sched = schedule(g);
  Tensor out = exec_scheduled(g, shapes, sched, ws, x);

  std::cout << "network: " << spec.name << "\n";
  std::cout << "input: " << in_shape.n << "x" << in_shape.c << "x" << in_shape.h
            << "x" << in_shape.w << "\n";
  std::cout << "seed: " << seed << "\n";
  std::cout << "output shape: " << out.shape.n << "x" << out.shape.c << "x"
            << out.shape.h << "x" << out.shape.w << "\n";
  std::cout << "checksum: " << checksum(out) << "\n";
  if (verify) {
    Tensor ref = exec_naive(g, shapes, ws, x);
    if (ref.data != out.data || !(ref.shape == out.shape))
      throw InternalError("verify: scheduled execution diverges from naive");
    std::cout << "verify: ok\n";
  }
  return 0;
}

int cmd_compare(const std::string& a, const std::string& b, int input,
                bool zero_copy) {
  require_input_size(input);
  TrafficOptions opts;
  opts.materialize_concat = !zero_copy;
  std::vector<AnalysisDocument> docs;
  docs.push_back(analyze(load_spec(a), input, opts));
  docs.push_back(analyze(load_spec(b), input, opts));
  std::cout << comparison_table(docs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analytical profiler for dense/harmonic CNN topologies"};
  app.set_version_flag("--version", std::string(netprof::kToolVersion));
  app.require_subcommand(1);

  std::string source, source_b, format = "text", out;
  int input = 224, classes = 1000;
  std::uint64_t seed = 0;
  bool verify = false, zero_copy = false;

  CLI::App* describe = app.add_subcommand("describe", "per-block architecture table");
  describe->add_option("spec", source, "preset name or config path")->required();
  describe->add_option("--input", input, "square input size (default 224)");

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "params, maccs and memory report");
  analyze_cmd->add_option("spec", source, "preset name or config path")->required();
  analyze_cmd->add_option("--input", input, "square input size (default 224)");
  auto* classes_opt = analyze_cmd->add_option("--classes", classes, "classifier classes");
  analyze_cmd->add_option("--format", format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  analyze_cmd->add_option("--out", out, "output path (default stdout)");
  analyze_cmd->add_flag("--zero-copy-concat", zero_copy,
                        "count concat nodes as views in the traffic report");

  CLI::App* export_cmd = app.add_subcommand("export", "graph export (dot or json)");
  export_cmd->add_option("spec", source, "preset name or config path")->required();
  export_cmd->add_option("--format", format, "dot|json")
      ->required()
      ->check(CLI::IsMember({"dot", "json"}));
  export_cmd->add_option("--out", out, "output path (default stdout)");

  CLI::App* exec_cmd = app.add_subcommand("exec", "run the reference executor");
  exec_cmd->add_option("spec", source, "preset name or config path")->required();
  exec_cmd->add_option("--input", input, "square input size (default 224)");
  exec_cmd->add_option("--seed", seed, "weight/input seed (default 0)");
  auto* exec_classes_opt = exec_cmd->add_option("--classes", classes, "classifier classes");
  exec_cmd->add_flag("--verify", verify, "also run the naive executor and compare bitwise");

  CLI::App* compare_cmd = app.add_subcommand("compare", "side-by-side comparison table");
  compare_cmd->add_option("spec_a", source, "first preset name or config path")->required();
  compare_cmd->add_option("spec_b", source_b, "second preset name or config path")->required();
  compare_cmd->add_option("--input", input, "square input size (default 224)");
  compare_cmd->add_flag("--zero-copy-concat", zero_copy,
                        "count concat nodes as views in the traffic report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version exit clean, usage errors exit 1
  }

  try {
    if (describe->parsed()) return cmd_describe(source, input);
    if (analyze_cmd->parsed())
      return cmd_analyze(source, input, classes, classes_opt->count() > 0, format,
                         zero_copy, out);
    if (export_cmd->parsed()) return cmd_export(source, format, out);
    if (exec_cmd->parsed())
      return cmd_exec(source, input, seed, classes, exec_classes_opt->count() > 0,
                      verify);
    if (compare_cmd->parsed()) return cmd_compare(source, source_b, input, zero_copy);
    std::cerr << "error: no command\n";
    return 1;
  } catch (const netprof::UnknownPresetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const netprof::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const netprof::ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const netprof::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
