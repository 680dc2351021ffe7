#include <doctest.h>

#include <cmath>

#include "bipmap/codelength.h"
#include "bipmap/oracle.h"
#include "networks.h"
#include "reference.h"

using namespace bipmap;

TEST_CASE("enumeration counts Bell numbers") {
  CHECK(best_partition_bruteforce(testing::complete_bipartite(2, 2), 0.5).examined == 15);
  CHECK(best_partition_bruteforce(testing::complete_bipartite(3, 2), 0.5).examined == 52);
  CHECK(best_partition_bruteforce(testing::complete_bipartite(3, 4), 0.5).examined == 877);
}

TEST_CASE("K22 optimum is one level") {
  const auto net = testing::complete_bipartite(2, 2);
  const OracleResult half = best_partition_bruteforce(net, 0.5);
  REQUIRE(half.optimal.size() == 1);
  CHECK(half.optimal[0].module_count() == 1);
  CHECK(half.bits == doctest::Approx(2.0).epsilon(1e-14));

  // With full type information several partitions tie with one level.
  for (const double a : {0.0, 0.25}) {
    const OracleResult r = best_partition_bruteforce(net, a);
    REQUIRE(!r.optimal.empty());
    CHECK(r.optimal[0].module_count() == 1);
    CHECK(r.bits == doctest::Approx(one_level_codelength(net, a).bits).epsilon(1e-12));
  }
}

namespace {

double entropy(std::initializer_list<double> ps) {
  double h = 0.0;
  for (const double p : ps) h -= plogp(p);
  return h;
}

}  // namespace

TEST_CASE("joined K22 blocks") {
  const auto net = testing::two_joined_k22();
  const std::vector<ModuleId> blocks{0, 0, 1, 1, 0, 0, 1, 1};
  for (const double a : {0.25, 0.5}) {
    const OracleResult r = best_partition_bruteforce(net, a);
    REQUIRE(r.optimal.size() == 1);
    CHECK(r.optimal[0].module_of == blocks);
    CHECK(r.bits < one_level_codelength(net, a).bits);
  }

  // With full type information the bridge's endpoint in one block does
  // better alone: {0,1,4,5} {2,3,7} {6}, or its mirror image. Hand values in
  // the doubled scale: the intact block costs 5/9 H(2/5,3/5) + 5/9
  // H(2/5,2/5,1/5), the block without 6 costs 8/9, the singleton nothing,
  // and the index 1/3 H(1/3,2/3).
  const OracleResult r = best_partition_bruteforce(net, 0.0);
  REQUIRE(r.optimal.size() == 2);
  CHECK(r.optimal[0].module_of == std::vector<ModuleId>{0, 0, 1, 1, 0, 0, 2, 1});
  CHECK(r.optimal[1].module_of == std::vector<ModuleId>{0, 1, 2, 2, 0, 0, 2, 2});
  const double block = 5.0 / 9.0 * entropy({0.4, 0.6}) + 5.0 / 9.0 * entropy({0.4, 0.4, 0.2});
  const double expected = 0.5 * (block + 8.0 / 9.0 + entropy({1.0 / 3.0, 2.0 / 3.0}) / 3.0);
  CHECK(r.bits == doctest::Approx(expected).epsilon(1e-13));
  CHECK(r.examined == 4140);
  CHECK(codelength(net, PartitionTree::two_level(Partition{blocks}), 0.0).bits ==
        doctest::Approx(block).epsilon(1e-13));
}

TEST_CASE("single edge is one level") {
  const auto net = parse_network("a x 2", InputFormat::tsv);
  for (const double a : {0.0, 0.5, 0.8}) {
    const OracleResult r = best_partition_bruteforce(net, a);
    REQUIRE(!r.optimal.empty());
    CHECK(r.optimal[0].module_count() == 1);
  }
}

TEST_CASE("too large networks are rejected") {
  CHECK_THROWS_AS(best_partition_bruteforce(testing::complete_bipartite(7, 6), 0.5),
                  std::length_error);
  CHECK_THROWS_AS(best_partition_bruteforce(testing::complete_bipartite(3, 3), 0.5, 5),
                  std::length_error);
}

TEST_CASE("flat evaluator agrees with the tree evaluator and the reference") {
  Rng rng(163);
  for (const auto& net : testing::random_corpus(167, 50, 30)) {
    const double a = testing::uniform(rng, 0.0, 1.0);
    FlatEvaluator fast(net, a);
    FlatEvaluator half(net, 0.5);
    for (int k = 0; k < 5; ++k) {
      const Partition p = testing::random_partition(rng, net.node_count(), 5);
      const double tree = codelength(net, PartitionTree::two_level(p), a).bits;
      CHECK(std::abs(fast(p.module_of, p.module_count()) - tree) <= 1e-12);
      CHECK(std::abs(half(p.module_of, p.module_count()) -
                     testing::reference_map_equation(net, p)) <= 1e-12);
    }
  }
}

TEST_CASE("every minimizer attains the optimum") {
  Rng rng(173);
  for (int i = 0; i < 3; ++i) {
    const auto planted = testing::planted_two_block(rng, 9);
    const OracleResult r = best_partition_bruteforce(planted.net, 0.25);
    REQUIRE(!r.optimal.empty());
    for (const Partition& p : r.optimal)
      CHECK(std::abs(codelength(planted.net, PartitionTree::two_level(p), 0.25).bits - r.bits) <=
            1e-12);
  }
}
