#include <doctest.h>

#include <cmath>

#include "bipmap/flow.h"
#include "networks.h"

using namespace bipmap;

namespace {

void check_pair(const RatePair& got, double left, double right) {
  CHECK(got.left == doctest::Approx(left).epsilon(1e-14));
  CHECK(got.right == doctest::Approx(right).epsilon(1e-14));
}

}  // namespace

TEST_CASE("visit rates") {
  const auto k22 = testing::complete_bipartite(2, 2);
  for (const double r : visit_rates(k22).rate) CHECK(r == 0.5);

  const auto path = testing::path_network();
  const VisitRates p = visit_rates(path);
  CHECK(p.rate[0] == 0.5);
  CHECK(p.rate[1] == 0.5);
  CHECK(p.rate[2] == 1.0);
  CHECK(p.left_sum(path) == 1.0);
  CHECK(p.right_sum(path) == 1.0);

  const auto edge = parse_network("a x 2.5", InputFormat::tsv);
  CHECK(visit_rates(edge).rate == std::vector<double>{1.0, 1.0});
}

TEST_CASE("mixed rates") {
  check_pair(mixed_rate(Side::left, 0.5, 0.0), 0.5, 0.0);
  check_pair(mixed_rate(Side::right, 1.0, 0.5), 0.5, 0.5);
  check_pair(mixed_rate(Side::left, 0.4, 0.1), 0.36, 0.04);
  check_pair(mixed_rate(Side::right, 0.4, 0.1), 0.04, 0.36);
  CHECK_THROWS_AS(mixed_rate(Side::left, 0.4, 1.1), std::domain_error);
}

TEST_CASE("flow summary of the path network at alpha 0") {
  const auto net = testing::path_network();
  // {u1, v1} / {u2}
  const auto tree = PartitionTree::two_level(Partition{{0, 1, 0}});
  const FlowSummary s = flow_summary(net, tree, 0.0);
  REQUIRE(s.codebooks.size() == 3);

  const std::size_t a = tree.leaf_of(3)[0];
  const std::size_t b = tree.leaf_of(3)[1];
  const Codebook& big = s.codebooks[a];
  const Codebook& small = s.codebooks[b];
  REQUIRE(big.entries.size() == 2);
  check_pair(big.entries[0], 0.5, 0.0);
  check_pair(big.entries[1], 0.0, 1.0);
  check_pair(big.exit, 0.5, 0.0);
  check_pair(big.usage, 1.0, 1.0);
  check_pair(small.exit, 0.0, 0.5);
  check_pair(small.usage, 0.5, 0.5);
  check_pair(s.module_entry[a], 0.0, 0.5);
  check_pair(s.module_entry[b], 0.5, 0.0);

  const Codebook& index = s.codebooks[0];
  REQUIRE(index.entries.size() == 2);
  check_pair(index.exit, 0.0, 0.0);
  check_pair(index.usage, 0.5, 0.5);
}

TEST_CASE("one-module summary") {
  const auto k22 = testing::complete_bipartite(2, 2);
  const FlowSummary s = flow_summary(k22, PartitionTree::one_level(4), 0.5);
  REQUIRE(s.codebooks.size() == 1);
  CHECK(s.codebooks[0].leaf);
  for (const RatePair& e : s.codebooks[0].entries) check_pair(e, 0.25, 0.25);
  check_pair(s.codebooks[0].exit, 0.0, 0.0);
  check_pair(s.codebooks[0].usage, 1.0, 1.0);
}

TEST_CASE("summary properties on random trees") {
  Rng rng(17);
  for (const auto& net : testing::random_corpus(23, 60)) {
    const PartitionTree tree = testing::random_tree(rng, net.node_count(), 4);
    const double a = testing::uniform(rng, 0.0, 1.0);
    const FlowSummary s = flow_summary(net, tree, a);
    const FlowSummary mirrored = flow_summary(net, tree, 1.0 - a);

    RatePair node_words;
    for (std::size_t m = 0; m < s.codebooks.size(); ++m) {
      const Codebook& cb = s.codebooks[m];
      // Balance: both usage components agree.
      CHECK(std::abs(cb.usage.left - cb.usage.right) <= 1e-12);
      if (cb.leaf)
        for (const RatePair& e : cb.entries) node_words += e;
      const Codebook& other = mirrored.codebooks[m];
      CHECK(std::abs(cb.exit.left - other.exit.right) <= 1e-12);
      CHECK(std::abs(cb.usage.left - other.usage.right) <= 1e-12);
    }
    CHECK(std::abs(node_words.left - 1.0) <= 1e-12);
    CHECK(std::abs(node_words.right - 1.0) <= 1e-12);

    // Scaling every weight leaves the summary unchanged.
    std::vector<Edge> scaled(net.edges().begin(), net.edges().end());
    for (Edge& e : scaled) e.weight *= 7.25;
    const auto big = BipartiteNetwork::from_edges(net.left_count(), net.right_count(), scaled);
    const FlowSummary t = flow_summary(big, tree, a);
    for (std::size_t m = 0; m < s.codebooks.size(); ++m) {
      CHECK(std::abs(s.codebooks[m].exit.left - t.codebooks[m].exit.left) <= 1e-12);
      CHECK(std::abs(s.codebooks[m].usage.right - t.codebooks[m].usage.right) <= 1e-12);
    }
  }
}

TEST_CASE("summary rejects trees that do not cover the network") {
  const auto net = testing::path_network();
  PartitionTree bad = PartitionTree::one_level(2);
  CHECK_THROWS_AS(flow_summary(net, bad, 0.5), std::invalid_argument);
}
