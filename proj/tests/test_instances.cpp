#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <map>

#include "doctest.h"
#include "ostoc/instance.hpp"

using namespace ostoc;

TEST_CASE("generation is deterministic under seed") {
  GenParams p;
  p.kind = InstanceKind::kLinear;
  p.d = 3;
  p.T = 40;
  p.options_per_step = 3;
  p.seed = 99;
  const Instance a = generate(p);
  const Instance b = generate(p);
  CHECK(serialize(a) == serialize(b));
  p.seed = 100;
  CHECK(serialize(generate(p)) != serialize(a));
}

TEST_CASE("packing instances carry the zero option") {
  GenParams p;
  p.kind = InstanceKind::kPacking;
  p.d = 2;
  p.T = 25;
  p.options_per_step = 3;
  p.budget = 5.0;
  const Instance inst = generate(p);
  for (const auto& req : inst.requests) {
    bool has_zero = false;
    for (const auto& opt : req.options) {
      bool zero = opt.r.value_or(0.0) == 0.0;
      for (int j = 0; j < inst.d; ++j) zero = zero && opt.v[j] == 0.0;
      has_zero = has_zero || zero;
    }
    CHECK(has_zero);
  }
}

TEST_CASE("witness replay lands in S") {
  for (InstanceKind kind :
       {InstanceKind::kFeasibility, InstanceKind::kCovering, InstanceKind::kSmooth}) {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      GenParams p;
      p.kind = kind;
      p.d = 3;
      p.T = 57;
      p.options_per_step = 3;
      p.seed = seed;
      const Instance inst = generate(p);
      REQUIRE(static_cast<int>(inst.witness.size()) == inst.T);
      Vec sum = Vec::zeros(inst.d);
      for (int t = 0; t < inst.T; ++t)
        sum += inst.requests[static_cast<size_t>(t)]
                   .options[static_cast<size_t>(inst.witness[static_cast<size_t>(t)])]
                   .v;
      CHECK(inst.set.distance(sum * (1.0 / inst.T)) <= 1e-9);
    }
  }
}

TEST_CASE("generated options stay in the unit box (fuzz)") {
  uint64_t seed = 1;
  for (int rep = 0; rep < 1000; ++rep, ++seed) {
    GenParams p;
    p.kind = static_cast<InstanceKind>(rep % 5);
    p.d = 1 + rep % 4;
    p.T = 3 + rep % 7;
    p.options_per_step = 1 + rep % 3;
    if (p.kind == InstanceKind::kPacking) p.budget = 1.0 + (rep % 3);
    p.seed = seed;
    const Instance inst = generate(p);
    for (const auto& req : inst.requests) {
      for (const auto& opt : req.options) {
        for (int j = 0; j < inst.d; ++j) {
          CHECK(opt.v[j] >= 0.0);
          CHECK(opt.v[j] <= 1.0);
        }
        if (opt.r) {
          CHECK(*opt.r >= 0.0);
          CHECK(*opt.r <= 1.0);
        }
      }
    }
  }
}

TEST_CASE("infeasible parameter combinations are rejected") {
  GenParams p;
  p.kind = InstanceKind::kPacking;
  p.T = 10;
  p.budget = 20.0;  // B/T > 1
  CHECK_THROWS_AS(generate(p), InfeasibleError);
  GenParams q;
  q.kind = InstanceKind::kCovering;
  q.floor_vec = Vec{1.4, 0.2};
  CHECK_THROWS_AS(generate(q), InfeasibleError);
}

TEST_CASE("rp stream is a bijection and T=1 is the identity") {
  GenParams p;
  p.T = 200;
  const Instance inst = generate(p);
  const StreamOrder s = rp_stream(inst, 5);
  std::vector<int> sorted = s.order;
  std::sort(sorted.begin(), sorted.end());
  for (int t = 0; t < inst.T; ++t) CHECK(sorted[static_cast<size_t>(t)] == t);

  GenParams one;
  one.T = 1;
  const Instance single = generate(one);
  CHECK(rp_stream(single, 123).order == std::vector<int>{0});
}

TEST_CASE("rp stream order frequencies are uniform") {
  GenParams p;
  p.T = 4;
  const Instance inst = generate(p);
  std::map<std::vector<int>, int> counts;
  const int trials = 10000;
  for (int s = 0; s < trials; ++s) counts[rp_stream(inst, 1000 + s).order]++;
  CHECK(counts.size() == 24);
  for (const auto& [perm, c] : counts) {
    const double freq = static_cast<double>(c) / trials;
    CHECK(freq == doctest::Approx(1.0 / 24.0).epsilon(0.25));
    CHECK(std::abs(freq - 1.0 / 24.0) <= 0.01);
  }
}

TEST_CASE("iid stream: constant for singleton, uniform frequencies, deterministic") {
  GenParams one;
  one.T = 1;
  const Instance single = generate(one);
  const StreamOrder s = iid_stream(single, 7, 50);
  for (int idx : s.order) CHECK(idx == 0);

  GenParams p;
  p.T = 10;
  const Instance inst = generate(p);
  const int n = 10000;
  const StreamOrder big = iid_stream(inst, 11, n);
  std::vector<int> counts(10, 0);
  for (int idx : big.order) counts[static_cast<size_t>(idx)]++;
  const double sigma = std::sqrt(0.1 * 0.9 / n);
  for (int c : counts)
    CHECK(std::abs(static_cast<double>(c) / n - 0.1) <= 3.0 * sigma + 1e-12);

  CHECK(iid_stream(inst, 11, n).order == big.order);
  CHECK(iid_stream(inst, 12, n).order != big.order);
}

TEST_CASE("weighted iid stream respects weights") {
  GenParams p;
  p.T = 3;
  const Instance inst = generate(p);
  const StreamOrder s = iid_stream_weighted(inst, 3, {0.0, 1.0, 3.0}, 4000);
  std::vector<int> counts(3, 0);
  for (int idx : s.order) counts[static_cast<size_t>(idx)]++;
  CHECK(counts[0] == 0);
  CHECK(static_cast<double>(counts[2]) / 4000 == doctest::Approx(0.75).epsilon(0.05));
}

TEST_CASE("serialization round-trip is byte-identical") {
  for (int kind = 0; kind < 5; ++kind) {
    GenParams p;
    p.kind = static_cast<InstanceKind>(kind);
    p.d = 2;
    p.T = 12;
    p.options_per_step = 2;
    p.seed = 31 + static_cast<uint64_t>(kind);
    if (p.kind == InstanceKind::kPacking) p.budget = 3.0;
    const Instance inst = generate(p);
    const std::string ser = serialize(inst);
    const Instance back = parse_instance(ser);
    CHECK(serialize(back) == ser);
  }
}

TEST_CASE("separable objective round-trips") {
  GenParams p;
  p.kind = InstanceKind::kFeasibility;
  p.objective = "separable";
  p.T = 6;
  const Instance inst = generate(p);
  const Instance back = parse_instance(serialize(inst));
  CHECK(serialize(back) == serialize(inst));
  CHECK(back.objective.lipschitz() == doctest::Approx(inst.objective.lipschitz()));
}

TEST_CASE("file save/load and gzip variant") {
  GenParams p;
  p.kind = InstanceKind::kLinear;
  p.T = 9;
  p.seed = 55;
  const Instance inst = generate(p);
  const std::string plain = "/tmp/ostoc_test_instance.osp.jsonl";
  save_instance(inst, plain);
  CHECK(serialize(load_instance(plain)) == serialize(inst));

  const std::string gz = plain + ".gz";
  REQUIRE(std::system(("gzip -kf " + plain).c_str()) == 0);
  CHECK(serialize(load_instance(gz)) == serialize(inst));
  std::remove(plain.c_str());
  std::remove(gz.c_str());
}

TEST_CASE("validate rejects malformed instances") {
  GenParams p;
  p.T = 4;
  Instance inst = generate(p);
  inst.requests.pop_back();
  CHECK_THROWS(validate(inst));

  Instance inst2 = generate(p);
  inst2.requests[0].options[0].v[0] = 1.5;
  CHECK_THROWS(validate(inst2));

  CHECK_THROWS(parse_instance("not json\n"));
}
