#include "netprof/shapes.hpp"

#include "doctest.h"
#include "netprof/errors.hpp"
#include "netprof/topology.hpp"
#include "testutil.hpp"

using namespace netprof;
using namespace netprof::testutil;

TEST_CASE("conv_out_dim") {
  CHECK(conv_out_dim(224, 3, 2, 1) == 112);
  CHECK(conv_out_dim(56, 1, 1, 0) == 56);
  CHECK(conv_out_dim(28, 2, 2, 0) == 14);
  CHECK(conv_out_dim(7, 2, 2, 0) == 3);  // floor mode on odd sizes
  CHECK(conv_out_dim(112, 3, 2, 1) == 56);
  CHECK_THROWS_AS(conv_out_dim(1, 3, 1, 0), ShapeError);
  CHECK_THROWS_AS(conv_out_dim(2, 7, 2, 1), ShapeError);
}

TEST_CASE("identity graph propagates its input") {
  GraphBuilder b;
  NodeId in = b.add(OpKind::Input, std::monostate{}, {});
  b.add(OpKind::Output, std::monostate{}, {in});
  ComputeGraph g = b.finish();
  TensorShape s{2, 5, 9, 13};
  ShapeMap shapes = propagate(g, s);
  CHECK(shapes[0] == s);
  CHECK(shapes[1] == s);
}

namespace {

// block input shapes in block order, read off the block-output concats
std::vector<TensorShape> block_input_shapes(const ComputeGraph& g,
                                            const ShapeMap& shapes, int blocks) {
  std::vector<TensorShape> out;
  for (int b = 0; b < blocks; ++b) {
    NodeId concat = find_block_output_concat(g, b);
    REQUIRE(concat >= 0);
    NodeId input = g.inputs_of[static_cast<size_t>(concat)].at(0);
    out.push_back(shapes[static_cast<size_t>(input)]);
  }
  return out;
}

}  // namespace

TEST_CASE("threshnet79 shape schedule at 224") {
  ComputeGraph g = build_graph(preset("threshnet79"));
  ShapeMap shapes = propagate(g, {1, 3, 224, 224});
  auto ins = block_input_shapes(g, shapes, 5);
  std::vector<int> spatial, channels;
  for (const TensorShape& s : ins) {
    CHECK(s.h == s.w);
    spatial.push_back(s.h);
    channels.push_back(s.c);
  }
  CHECK(spatial == std::vector<int>{56, 28, 14, 14, 7});
  CHECK(channels == std::vector<int>{128, 192, 288, 480, 960});
}

TEST_CASE("threshnet79 shape schedule at 64") {
  ComputeGraph g = build_graph(preset("threshnet79"));
  ShapeMap shapes = propagate(g, {1, 3, 64, 64});
  auto ins = block_input_shapes(g, shapes, 5);
  std::vector<int> spatial;
  for (const TensorShape& s : ins) spatial.push_back(s.h);
  CHECK(spatial == std::vector<int>{16, 8, 4, 4, 2});
}

TEST_CASE("densenet121 shape schedule at 224") {
  ComputeGraph g = build_graph(preset("densenet121"));
  ShapeMap shapes = propagate(g, {1, 3, 224, 224});
  auto ins = block_input_shapes(g, shapes, 4);
  std::vector<int> spatial, channels;
  for (const TensorShape& s : ins) {
    spatial.push_back(s.h);
    channels.push_back(s.c);
  }
  CHECK(spatial == std::vector<int>{56, 28, 14, 7});
  CHECK(channels == std::vector<int>{64, 128, 256, 512});
  // classifier input: 512 + 16*32 = 1024 channels at 1x1 after global pooling
  NodeId out = g.output_node();
  CHECK(shapes[static_cast<size_t>(out)] == TensorShape{1, 1000, 1, 1});
}

TEST_CASE("dense layer entry channels follow k0 + k(l-1)") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SplitMix64 rng{seed};
    int L = pick(rng, 1, 10);
    int k = pick(rng, 1, 48);
    int k0 = pick(rng, 1, 96);
    NetworkSpec s = single_block_spec(BlockMode::Dense, L, k, 1.0, true, k0);
    ComputeGraph g = build_graph(s);
    ShapeMap shapes = propagate(g, {1, 3, 32, 32});
    for (int l = 1; l <= L; ++l) {
      // entry value: the concat for multi-input layers, the block input for l=1
      NodeId entry = -1;
      for (const OpNode& nd : g.nodes)
        if (nd.block_index == 0 && nd.layer_index == l) {
          entry = nd.id;
          break;
        }
      REQUIRE(entry >= 0);
      NodeId entry_value = g.node(entry).kind == OpKind::Concat
                               ? entry
                               : g.inputs_of[static_cast<size_t>(entry)].at(0);
      CHECK(shapes[static_cast<size_t>(entry_value)].c == k0 + k * (l - 1));
    }
  }
}

TEST_CASE("concat spatial mismatch names both edges") {
  GraphBuilder b;
  NodeId in = b.add(OpKind::Input, std::monostate{}, {});
  NodeId a = b.add(OpKind::Conv, ConvSpec{4, 1, 1, 0, false}, {in});
  NodeId c = b.add(OpKind::Conv, ConvSpec{4, 1, 2, 0, false}, {in});  // halves
  NodeId cat = b.add(OpKind::Concat, std::monostate{}, {a, c});
  b.add(OpKind::Output, std::monostate{}, {cat});
  ComputeGraph g = b.finish();
  try {
    propagate(g, {1, 3, 8, 8});
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    std::string msg = e.what();
    CHECK(msg.find("node " + std::to_string(cat)) != std::string::npos);
    CHECK(msg.find("from node " + std::to_string(a)) != std::string::npos);
    CHECK(msg.find("from node " + std::to_string(c)) != std::string::npos);
  }
}

TEST_CASE("propagate is deterministic") {
  ComputeGraph g = build_graph(preset("threshnet95"));
  CHECK(propagate(g, {1, 3, 224, 224}) == propagate(g, {1, 3, 224, 224}));
}

TEST_CASE("spatial size never increases along an edge") {
  for (const char* name : {"threshnet79", "densenet121"}) {
    ComputeGraph g = build_graph(preset(name));
    ShapeMap shapes = propagate(g, {1, 3, 224, 224});
    for (const Edge& e : g.edges) {
      CHECK(shapes[static_cast<size_t>(e.consumer)].h <=
            shapes[static_cast<size_t>(e.producer)].h);
      CHECK(shapes[static_cast<size_t>(e.consumer)].w <=
            shapes[static_cast<size_t>(e.producer)].w);
    }
  }
}

TEST_CASE("underflow propagates out of deep graphs") {
  ComputeGraph g = build_graph(preset("densenet121"));
  CHECK_THROWS_AS(propagate(g, {1, 3, 8, 8}), ShapeError);
}
