#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bipmap/metrics.h"
#include "bipmap/network.h"
#include "bipmap/oracle.h"
#include "bipmap/partition.h"
#include "bipmap/sweep.h"

namespace bipmap {

/// One node line of a tree file.
struct TreeRecord {
  std::vector<std::uint32_t> path;  // 1-based; last component is the rank in the leaf
  double flow = 0.0;                // two-step visit rate
  std::string name;
  std::uint64_t id = 0;
  Side side = Side::left;

  friend bool operator==(const TreeRecord&, const TreeRecord&) = default;
};

/// Values echoed in tree file comment lines. Absent fields are not written.
struct TreeHeader {
  std::optional<double> alpha;
  std::optional<double> info;
  std::optional<double> bits;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
};

struct ParsedTree {
  TreeHeader header;
  std::vector<TreeRecord> records;
};

/// Records of `tree` in output order. Sibling modules are ranked by flow,
/// descending, ties by smallest node id; nodes within a leaf by id. A
/// one-level tree is written as a single module. `original_ids`, when
/// nonempty, maps node ids to the ids printed in the file.
std::vector<TreeRecord> tree_records(const BipartiteNetwork& net, const PartitionTree& tree,
                                     std::span<const NodeId> original_ids = {});

/// Renders `# key value` header lines followed by `path flow "name" id side`
/// lines.
std::string write_tree(const BipartiteNetwork& net, const PartitionTree& tree,
                       const TreeHeader& header, std::span<const NodeId> original_ids = {});

/// Throws ParseError on malformed lines.
ParsedTree parse_tree(std::string_view text);

/// Rebuilds the module tree for `net`. `id_to_node` maps file ids to node
/// ids; empty means ids are node ids. Throws std::invalid_argument unless the
/// records cover every node exactly once.
PartitionTree tree_from_records(const BipartiteNetwork& net, std::span<const TreeRecord> records,
                                std::span<const std::optional<NodeId>> id_to_node = {});

/// Header plus one row per record, numbers with 6 significant digits.
/// Throws std::invalid_argument for an empty table.
std::string write_sweep_csv(std::span<const SweepRecord> records);
std::string write_fixed_sweep_csv(std::span<const FixedSweepRecord> records);

struct RunSummary {
  std::string command;
  std::string input;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t dropped_nodes = 0;  // outside the largest connected component
  double alpha = 0.5;
  double info = 0.0;
  std::string mode;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  PartitionMetrics metrics;
  std::vector<double> trial_bits;
  std::size_t best_trial = 0;
  std::optional<std::string> timestamp;
};

std::string summary_json(const RunSummary& summary);

/// Optimal partitions are listed as module member names.
std::string oracle_json(const BipartiteNetwork& net, const OracleResult& result, double alpha,
                        std::optional<std::string> timestamp);

}  // namespace bipmap
