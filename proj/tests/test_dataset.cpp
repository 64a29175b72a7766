// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "appgnn/dataset.hpp"
#include "appgnn/error.hpp"
#include "appgnn/json_io.hpp"
#include "fixtures.hpp"

using namespace appgnn;
using namespace appgnn::testfix;

namespace {

AdderRef reference(FixtureFamily fam, int w, int p, uint64_t a, uint64_t b) {
  switch (fam) {
    case FixtureFamily::Exact: return ref_exact(w, a, b);
    case FixtureFamily::Lta: return ref_lta(w, p, a, b);
    case FixtureFamily::Lca: return ref_lca(w, p, a, b);
    case FixtureFamily::Loa: return ref_loa(w, p, a, b);
    case FixtureFamily::EtaI: return ref_etai(w, p, a, b);
    case FixtureFamily::Aca: return ref_aca(w, p, a, b);
  }
  throw Error("unknown family");
}

void check_family_exhaustive(FixtureFamily fam, int w, int p) {
  FixtureSpec spec;
  spec.family = fam;
  spec.width = w;
  spec.param = p;
  const Netlist n = gen_fixture(spec, default_library());
  const WordIo io(n, {{"a", w}, {"b", w}}, {{"s", w}, {"cout", 1}});
  for (uint64_t a = 0; a < (1ull << w); ++a) {
    for (uint64_t b = 0; b < (1ull << w); ++b) {
      const auto out = io.run(n, std::vector<uint64_t>{a, b});
      const AdderRef ref = reference(fam, w, p, a, b);
      REQUIRE(out[0] == ref.sum);
      REQUIRE(out[1] == static_cast<uint64_t>(ref.cout));
    }
  }
}

} // namespace

TEST_CASE("fixture families match their integer reference models (small widths)") {
  for (int w : {2, 4, 6}) {
    check_family_exhaustive(FixtureFamily::Exact, w, 0);
    for (int k = 1; k < w; ++k) {
      check_family_exhaustive(FixtureFamily::Lta, w, k);
      check_family_exhaustive(FixtureFamily::Lca, w, k);
      check_family_exhaustive(FixtureFamily::Loa, w, k);
      check_family_exhaustive(FixtureFamily::EtaI, w, k);
    }
    for (int m = 1; m <= w; ++m) check_family_exhaustive(FixtureFamily::Aca, w, m);
  }
}

TEST_CASE("exact adders add exhaustively up to width 10") {
  for (int w : {9, 10}) {
    const Netlist n = gen_fixture({FixtureFamily::Exact, w, 0, true}, default_library());
    const WordIo io(n, {{"a", w}, {"b", w}}, {{"s", w}, {"cout", 1}});
    for (uint64_t a = 0; a < (1ull << w); ++a) {
      for (uint64_t b = 0; b < (1ull << w); ++b) {
        const auto out = io.run(n, std::vector<uint64_t>{a, b});
        REQUIRE((out[0] | (out[1] << w)) == a + b);
      }
    }
  }
}

TEST_CASE("k = 0 and m = w degenerate to the exact adder") {
  const auto lib = default_library();
  const Netlist exact = gen_fixture({FixtureFamily::Exact, 5, 0, true}, lib);
  const Netlist lta0 = gen_fixture({FixtureFamily::Lta, 5, 0, true}, lib);
  const Netlist acaw = gen_fixture({FixtureFamily::Aca, 5, 5, true}, lib);
  CHECK(lta0.gates.size() == exact.gates.size());
  CHECK(acaw.gates.size() == exact.gates.size());
  check_family_exhaustive(FixtureFamily::Lta, 5, 0);
  check_family_exhaustive(FixtureFamily::Aca, 5, 5);
}

TEST_CASE("invalid fixture parameters throw") {
  const auto lib = default_library();
  CHECK_THROWS_AS(gen_fixture({FixtureFamily::Lta, 8, 8, true}, lib), Error);
  CHECK_THROWS_AS(gen_fixture({FixtureFamily::Lta, 8, -1, true}, lib), Error);
  CHECK_THROWS_AS(gen_fixture({FixtureFamily::Aca, 8, 0, true}, lib), Error);
  CHECK_THROWS_AS(gen_fixture({FixtureFamily::Aca, 8, 9, true}, lib), Error);
}

TEST_CASE("distractor generators are functionally correct") {
  const auto lib = default_library();
  SUBCASE("array multiplier") {
    for (int w : {2, 3, 4}) {
      const Netlist n = gen_multiplier(w, lib);
      const WordIo io(n, {{"a", w}, {"b", w}}, {{"s", 2 * w}});
      for (uint64_t a = 0; a < (1ull << w); ++a) {
        for (uint64_t b = 0; b < (1ull << w); ++b) {
          REQUIRE(io.run(n, std::vector<uint64_t>{a, b})[0] == a * b);
        }
      }
    }
  }
  SUBCASE("ripple-borrow subtractor") {
    const int w = 4;
    const Netlist n = gen_subtractor(w, lib);
    const WordIo io(n, {{"a", w}, {"b", w}}, {{"s", w}, {"bout", 1}});
    for (uint64_t a = 0; a < 16; ++a) {
      for (uint64_t b = 0; b < 16; ++b) {
        const auto out = io.run(n, std::vector<uint64_t>{a, b});
        REQUIRE(out[0] == ((a - b) & 0xF));
        REQUIRE(out[1] == (a < b ? 1u : 0u));
      }
    }
  }
  SUBCASE("equality comparator") {
    const int w = 5;
    const Netlist n = gen_equality_comparator(w, lib);
    for (uint64_t a = 0; a < 32; ++a) {
      for (uint64_t b = 0; b < 32; ++b) {
        std::vector<uint8_t> pis;
        for (int i = 0; i < w; ++i) pis.push_back((a >> i) & 1);
        for (int i = 0; i < w; ++i) pis.push_back((b >> i) & 1);
        REQUIRE(simulate(n, pis)[0] == (a == b ? 1 : 0));
      }
    }
  }
  SUBCASE("two-to-one mux") {
    const int w = 3;
    const Netlist n = gen_mux(w, lib);
    for (uint64_t a = 0; a < 8; ++a) {
      for (uint64_t b = 0; b < 8; ++b) {
        for (uint8_t sel : {0, 1}) {
          std::vector<uint8_t> pis;
          for (int i = 0; i < w; ++i) pis.push_back((a >> i) & 1);
          for (int i = 0; i < w; ++i) pis.push_back((b >> i) & 1);
          pis.push_back(sel);
          const auto out = simulate(n, pis);
          uint64_t got = 0;
          for (int i = 0; i < w; ++i) got |= static_cast<uint64_t>(out[static_cast<size_t>(i)]) << i;
          REQUIRE(got == (sel ? b : a));
        }
      }
    }
    // every mux bit is an isolated node in the graph view
    const CircuitGraph g = build_graph(n);
    for (int v = 0; v < g.n(); ++v) {
      CHECK(g.structural_in_degree(v) == 0);
      CHECK(g.structural_out_degree(v) == 0);
    }
  }
}

TEST_CASE("class labels carried by the generators") {
  const auto lib = default_library();
  CHECK(build_graph(gen_fixture({FixtureFamily::Lta, 6, 2, true}, lib)).nodes[0].label ==
        class_id("adder"));
  CHECK(build_graph(gen_multiplier(3, lib)).nodes[0].label == class_id("multiplier"));
  CHECK(build_graph(gen_subtractor(4, lib)).nodes[0].label == class_id("subtractor"));
  CHECK(build_graph(gen_equality_comparator(3, lib)).nodes[0].label == class_id("comparator"));
  CHECK(build_graph(gen_mux(3, lib)).nodes[0].label == class_id("mux"));
}

TEST_CASE("augmentation scheme yields 35 graphs for the four bit-widths") {
  const auto lib = default_library();
  std::vector<CircuitGraph> sources;
  for (int w : {8, 9, 12, 16}) {
    FixtureSpec spec{FixtureFamily::Exact, w, 0, /*carry_out=*/false};
    sources.push_back(build_graph(gen_fixture(spec, lib)));
  }
  std::vector<const CircuitGraph*> ptrs;
  for (const auto& g : sources) ptrs.push_back(&g);

  // default levels: 1..9 capped at the leaf count (8 for the 8-bit adder)
  const auto augmented = augment(ptrs, SamplingMode::Leaf, {}, 5);
  CHECK(augmented.size() == 35);

  for (const CircuitGraph& s : augmented) {
    // find the source by name prefix
    const CircuitGraph* src = nullptr;
    for (const auto& g : sources) {
      if (s.name.rfind(g.name + "_leaf", 0) == 0) src = &g;
    }
    REQUIRE(src != nullptr);
    CHECK(s.stored_po_count() == src->stored_po_count());
    int replacements = 0;
    for (const GraphNode& node : s.nodes) replacements += node.replacement ? 1 : 0;
    CHECK(s.n() < src->n() + replacements + 1); // strictly fewer survivors than source
    CHECK(replacements >= 1);
  }
}

TEST_CASE("augment: empty level list means defaults, oversized levels throw") {
  const auto lib = default_library();
  const CircuitGraph g = build_graph(gen_fixture({FixtureFamily::Exact, 4, 0, true}, lib));
  const std::vector<const CircuitGraph*> ptrs{&g};
  CHECK(augment(ptrs, SamplingMode::Leaf, std::vector<int>{}, 1).size() == 5); // 5 leaves
  CHECK(augment(ptrs, SamplingMode::Random, std::vector<int>{1, 2}, 1).size() == 2);
  CHECK_THROWS_AS(augment(ptrs, SamplingMode::Leaf, std::vector<int>{6}, 1), Error);
  CHECK_THROWS_AS(augment(ptrs, SamplingMode::Random, std::vector<int>{g.n() + 1}, 1), Error);
}

TEST_CASE("random-mode augmentation shrinks graphs") {
  const auto lib = default_library();
  const CircuitGraph g = build_graph(gen_fixture({FixtureFamily::Exact, 8, 0, true}, lib));
  const auto augmented = augment({&g}, SamplingMode::Random, {}, 9);
  CHECK(augmented.size() == 9);
  for (const CircuitGraph& s : augmented) CHECK(s.n() < g.n());
}

TEST_CASE("make_splits") {
  SUBCASE("twenty graphs at 65/20/15 split 13/4/3") {
    const auto split = make_splits(20, {0.65, 0.20, 0.15}, 7);
    int c[3] = {0, 0, 0};
    for (int s : split) ++c[s];
    CHECK(c[0] == 13);
    CHECK(c[1] == 4);
    CHECK(c[2] == 3);
  }
  SUBCASE("all-train fractions") {
    const auto split = make_splits(6, {1.0, 0.0, 0.0}, 7);
    for (int s : split) CHECK(s == 0);
  }
  SUBCASE("same seed, same assignment; fractions normalize") {
    CHECK(make_splits(20, {0.65, 0.20, 0.15}, 9) == make_splits(20, {65, 20, 15}, 9));
  }
  SUBCASE("a positive fraction with zero graphs is an error") {
    CHECK_THROWS_AS(make_splits(2, {0.65, 0.20, 0.15}, 1), Error);
    CHECK_THROWS_AS(make_splits(0, {1, 0, 0}, 1), Error);
  }
}

TEST_CASE("checkpoint json round trip is exact") {
  GatConfig cfg;
  cfg.in_dim = feature_dim(*default_library());
  cfg.hidden_dim = 8;
  cfg.heads = 2;
  cfg.classes = 5;
  Checkpoint c;
  c.library_text = default_library_text();
  c.class_names = default_class_names();
  c.model = init_model(cfg, 77);
  c.stats.mean = Eigen::VectorXd::LinSpaced(cfg.in_dim, 0.0, 1.0);
  c.stats.std = Eigen::VectorXd::Constant(cfg.in_dim, 0.5);

  const Checkpoint d = checkpoint_from_json(checkpoint_to_json(c));
  CHECK(d.class_names == c.class_names);
  CHECK((d.stats.mean - c.stats.mean).cwiseAbs().maxCoeff() == 0.0);
  const auto pa = c.model.params();
  const auto pb = d.model.params();
  REQUIRE(pa.size() == pb.size());
  for (size_t i = 0; i < pa.size(); ++i) {
    CHECK((*pa[i] - *pb[i]).cwiseAbs().maxCoeff() == 0.0);
  }
}
