#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bipmap/network.h"

namespace bipmap {

using ModuleId = std::uint32_t;

/// Flat module assignment; module ids are dense and 0-based.
struct Partition {
  std::vector<ModuleId> module_of;

  std::size_t module_count() const;
  /// Relabels modules in order of first appearance so ids are dense.
  static Partition normalized(std::span<const ModuleId> assignment);
};

/// Rooted module hierarchy. Entry 0 is the root. A module is a leaf when it
/// has no children; leaves hold the nodes. A root that is itself a leaf is
/// the one-level partition.
class PartitionTree {
 public:
  struct Module {
    std::size_t parent = 0;  // ignored for the root
    std::vector<std::size_t> children;
    std::vector<NodeId> members;  // leaves only
  };

  static PartitionTree one_level(std::size_t node_count);
  /// Root with one leaf per module; collapses to one level for a single module.
  static PartitionTree two_level(const Partition& partition);

  std::size_t size() const { return modules_.size(); }
  const Module& module(std::size_t i) const { return modules_[i]; }
  std::span<const Module> modules() const { return modules_; }
  bool is_leaf(std::size_t i) const { return modules_[i].children.empty(); }

  std::size_t add_child(std::size_t parent);
  void add_member(std::size_t leaf, NodeId n) { modules_[leaf].members.push_back(n); }

  /// Replaces leaf `leaf` by an internal module whose children are new
  /// leaves, one per sub-module id in `sub_module_of` (parallel to the
  /// leaf's member list).
  void split_leaf(std::size_t leaf, std::span<const ModuleId> sub_module_of);

  /// Inserts a level below `parent`: children sharing a group id in
  /// `group_of` (parallel to the child list) move under a new module.
  /// Groups of one child are left in place.
  void group_children(std::size_t parent, std::span<const ModuleId> group_of);

  std::vector<std::size_t> leaves() const;
  std::size_t leaf_count() const;
  /// Number of codebook levels: 1 for one level, 2 for modules under a root.
  std::size_t depth() const;
  /// Leaf module index of every node.
  std::vector<std::size_t> leaf_of(std::size_t node_count) const;
  /// All nodes below module `i`.
  std::vector<NodeId> nodes_below(std::size_t i) const;
  std::size_t level(std::size_t i) const;

  /// Throws std::invalid_argument unless leaves partition [0, node_count)
  /// and the structure is a tree rooted at 0.
  void validate(std::size_t node_count) const;

  /// Splices out internal modules with one child and renumbers depth-first.
  void compact();

 private:
  std::vector<Module> modules_;
};

}  // namespace bipmap
