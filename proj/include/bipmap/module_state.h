#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bipmap/flow.h"
#include "bipmap/network.h"
#include "bipmap/partition.h"

namespace bipmap {

/// Weighted undirected graph of flow units the optimizer moves between
/// modules. A unit is an original node, a merged group of nodes, or a whole
/// module when searching for super-modules. Each unit carries the code words
/// it contributes to its module codebook and its boundary flow split by the
/// side of its own endpoint; the module exit pair follows from those splits
/// alone.
struct FlowGraph {
  struct Unit {
    RatePair codewords;           // sum of the unit's code-word pairs
    double codeword_plogp = 0.0;  // sum of plogp over every code-word component
    double boundary_left = 0.0;   // flow leaving through left endpoints
    double boundary_right = 0.0;  // flow leaving through right endpoints
  };
  struct Arc {
    std::uint32_t target;
    double flow;  // one direction, doubled scale
  };
  struct Link {
    std::uint32_t a;
    std::uint32_t b;
    double flow;
  };

  double alpha = 0.5;
  /// Fixed extra code word in the index codebook: the parent module's exit
  /// when the search runs inside a module.
  RatePair fixed_index_entry;
  std::vector<Unit> units;
  std::vector<std::size_t> offsets;
  std::vector<Arc> arcs;

  std::size_t size() const { return units.size(); }
  std::span<const Arc> arcs_of(std::uint32_t u) const {
    return std::span<const Arc>(arcs).subspan(offsets[u], offsets[u + 1] - offsets[u]);
  }

  /// Builds symmetric adjacency from undirected links; parallel links merge.
  static FlowGraph build(std::vector<Unit> units, std::vector<Link> links, double alpha,
                         RatePair fixed_index_entry = {});

  static FlowGraph from_network(const BipartiteNetwork& net, double alpha);

  /// Units for `members` only, keeping each node's full boundary flow so
  /// that module exits include flow leaving the enclosing module.
  static FlowGraph induced(const BipartiteNetwork& net, std::span<const NodeId> members,
                           double alpha, RatePair fixed_index_entry);

  /// Merges units by `module_of` (dense ids < module_count).
  FlowGraph aggregate(std::span<const ModuleId> module_of, std::size_t module_count) const;
};

/// Module statistics and running code length for an assignment of flow
/// units to modules. Module ids range over [0, unit count).
class ModuleState {
 public:
  ModuleState(const FlowGraph& graph, std::span<const ModuleId> assignment);

  const FlowGraph& graph() const { return *graph_; }
  ModuleId module_of(std::uint32_t u) const { return module_of_[u]; }
  std::span<const ModuleId> assignment() const { return module_of_; }
  std::uint32_t members(ModuleId m) const { return modules_[m].members; }
  std::size_t nonempty_modules() const { return nonempty_; }
  /// Some module with no members, or `no_module` when all are in use.
  ModuleId empty_module() const;
  static constexpr ModuleId no_module = static_cast<ModuleId>(-1);

  /// Tracked code length in bits (two-step scale).
  double codelength() const;
  /// Code length rebuilt from scratch for the current assignment.
  double recompute() const;

  RatePair exit_of(ModuleId m) const;
  RatePair entry_of(ModuleId m) const { return exit_of(m).swapped(); }

  struct Terms {
    RatePair entry;
    double exit_plogp = 0.0;
    double usage_plogp = 0.0;
  };
  /// Unit `u` taken out of its module, shared by every candidate target.
  struct Removal {
    std::uint32_t unit = 0;
    ModuleId from = 0;
    Terms before;
    Terms after;
  };
  Removal removal(std::uint32_t u, double flow_to_current) const;
  /// Change in bits when the removed unit joins `target` (not its own
  /// module) with arc flow `flow_to_target` into it.
  double delta_move(const Removal& r, ModuleId target, double flow_to_target) const;

  /// Change in bits when unit `u` moves to `target`. `flow_to_current` and
  /// `flow_to_target` are the unit's arc flows into the two modules,
  /// excluding itself.
  double delta_move(std::uint32_t u, ModuleId target, double flow_to_current,
                    double flow_to_target) const;
  void apply_move(std::uint32_t u, ModuleId target, double flow_to_current,
                  double flow_to_target);

  /// Arc flow from `u` into module `m`, summed by scanning u's arcs.
  double flow_to_module(std::uint32_t u, ModuleId m) const;

  /// Bits of the index codebook (module entries plus the fixed entry).
  double index_codebook_bits() const;
  /// Bits of module `m`'s own codebook (its code words plus its exit).
  double module_codebook_bits(ModuleId m) const;

 private:
  struct Module {
    RatePair codewords;
    double codeword_plogp = 0.0;
    double boundary_left = 0.0;
    double boundary_right = 0.0;
    std::uint32_t members = 0;
    Terms terms;  // terms_of(*this), kept current
  };

  Terms terms_of(const Module& m) const;
  Module without(const Module& m, const FlowGraph::Unit& u, double flow) const;
  Module with(const Module& m, const FlowGraph::Unit& u, double flow) const;
  double total_from(const RatePair& entry_sum, double exit_plogp, double usage_plogp) const;

  const FlowGraph* graph_;
  std::vector<ModuleId> module_of_;
  std::vector<Module> modules_;
  std::size_t nonempty_ = 0;
  mutable std::vector<ModuleId> empty_ids_;
  RatePair entry_sum_;
  double exit_plogp_sum_ = 0.0;
  double usage_plogp_sum_ = 0.0;
  double codeword_plogp_sum_ = 0.0;
  double fixed_plogp_ = 0.0;  // plogp of the fixed index entry components
  double bits_ = 0.0;
};

/// Change in bits if unit `u` moves to module `target`. Throws
/// std::out_of_range for unknown units or modules.
double delta_codelength(const ModuleState& state, std::uint32_t u, ModuleId target);

}  // namespace bipmap
