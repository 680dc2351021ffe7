#include <doctest.h>

#include <cmath>

#include "bipmap/alpha.h"
#include "bipmap/sweep.h"
#include "networks.h"

using namespace bipmap;

TEST_CASE("information grid") {
  CHECK(info_grid(0.5) == std::vector<double>{0.0, 0.5, 1.0});
  const auto fine = info_grid(0.05);
  REQUIRE(fine.size() == 21);
  CHECK(fine[3] == 0.15);
  CHECK(fine.back() == 1.0);
  CHECK(info_grid(0.3) == std::vector<double>{0.0, 0.3, 0.6, 0.9, 1.0});
  CHECK(info_grid(1.0) == std::vector<double>{0.0, 1.0});
  CHECK_THROWS_AS(info_grid(0.0), std::invalid_argument);
  CHECK_THROWS_AS(info_grid(1.5), std::invalid_argument);
}

TEST_CASE("sweep records match direct runs") {
  const auto net = testing::two_joined_k22();
  SearchParams p;
  p.num_trials = 3;
  p.seed = 4;
  const auto records = run_sweep(net, 0.5, p);
  REQUIRE(records.size() == 3);
  CHECK(records[0].alpha == 0.5);
  CHECK(records[2].alpha == 0.0);
  p.mode = SearchMode::two_level;
  CHECK(records[0].bits_two_level == run_trials(net, 0.5, p).bits.bits);
  p.mode = SearchMode::hierarchical;
  CHECK(records[0].bits_hierarchical == run_trials(net, 0.5, p).bits.bits);
  for (const SweepRecord& r : records) {
    CHECK(r.bits_hierarchical <= r.bits_two_level + 1e-12);
    CHECK(r.extra_two_level >= -1e-12);
    CHECK(r.trials == 3);
  }
  const auto again = run_sweep(net, 0.5, p);
  for (std::size_t i = 0; i < records.size(); ++i)
    CHECK(again[i].bits_hierarchical == records[i].bits_hierarchical);
}

TEST_CASE("fixed partition extra compression grows with information") {
  Rng rng(181);
  for (int i = 0; i < 10; ++i) {
    const auto planted = testing::planted_two_block(rng, 10);
    const auto records = run_fixed_sweep(planted.net, PartitionTree::two_level(planted.blocks), 0.05);
    REQUIRE(records.size() == 21);
    for (std::size_t k = 1; k < records.size(); ++k)
      CHECK(records[k].extra_compression >= records[k - 1].extra_compression - 1e-12);
    CHECK(records.back().extra_compression > records.front().extra_compression);
  }
}
