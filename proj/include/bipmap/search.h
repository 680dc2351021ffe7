#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "bipmap/codelength.h"
#include "bipmap/module_state.h"
#include "bipmap/network.h"
#include "bipmap/partition.h"

namespace bipmap {

enum class SearchMode { two_level, hierarchical };

struct SearchParams {
  std::uint64_t seed = 1;
  std::size_t num_trials = 100;
  std::size_t max_outer_loops = 50;
  double min_improvement = 1e-10;
  SearchMode mode = SearchMode::hierarchical;
  /// Worker cap for run_trials; 0 uses the hardware concurrency. Results do
  /// not depend on it.
  std::size_t threads = 0;

  /// Throws std::invalid_argument when num_trials is 0 or min_improvement
  /// is not positive.
  void validate() const;
};

struct SearchResult {
  PartitionTree tree = PartitionTree::one_level(0);
  CodeLength bits;
  std::vector<double> trial_bits;
  std::size_t best_trial = 0;
};

/// Seed of trial `trial` under master seed `master` (splitmix64 mixing).
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial);

/// Uniform draws with a fixed algorithm so runs reproduce across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// Local moving plus aggregation over a flow graph, then outer loops that
/// alternate re-searching inside modules and re-moving the original units.
/// Any gain of at least min_improvement is kept; two consecutive loops that
/// each gain less than 1e-4 of the code length end the search.
/// Returns dense module ids per unit.
std::vector<ModuleId> search_flow_graph(const FlowGraph& graph, Rng& rng,
                                        const SearchParams& params);

SearchResult optimize_two_level(const BipartiteNetwork& net, double alpha, std::uint64_t seed,
                                const SearchParams& params);

SearchResult optimize_hierarchical(const BipartiteNetwork& net, double alpha,
                                   std::uint64_t seed, const SearchParams& params);

/// Best of params.num_trials independent trials in params.mode. Ties go to
/// the lower trial index.
SearchResult run_trials(const BipartiteNetwork& net, double alpha, const SearchParams& params);

}  // namespace bipmap
