#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bipmap {

/// Dense 0-based node index. Left nodes occupy [0, left_count), right nodes
/// occupy [left_count, left_count + right_count).
using NodeId = std::uint32_t;

enum class Side : std::uint8_t { left, right };

constexpr char side_marker(Side s) { return s == Side::left ? 'L' : 'R'; }

struct Edge {
  NodeId left;
  NodeId right;
  double weight;
};

struct Neighbor {
  NodeId node;
  double weight;
};

enum class InputFormat { tsv, bipartite_pajek };

/// Thrown for malformed input text. `line()` is 1-based, 0 when the error is
/// not tied to a line (e.g. an empty edge list).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Immutable weighted undirected bipartite graph.
///
/// Duplicate (left, right) pairs are merged by summing weights. Nodes without
/// edges are allowed here; largest_connected_component() drops them.
class BipartiteNetwork {
 public:
  /// Edge endpoints use the global indexing (right ids offset by
  /// left_count). Throws std::invalid_argument on non-positive weights,
  /// endpoints on the wrong side, or an empty edge list.
  static BipartiteNetwork from_edges(std::size_t left_count, std::size_t right_count,
                                     std::vector<Edge> edges,
                                     std::vector<std::string> names = {});

  std::size_t left_count() const { return left_count_; }
  std::size_t right_count() const { return right_count_; }
  std::size_t node_count() const { return left_count_ + right_count_; }
  std::size_t edge_count() const { return edges_.size(); }

  Side side(NodeId n) const { return n < left_count_ ? Side::left : Side::right; }
  bool contains(NodeId n) const { return n < node_count(); }

  std::span<const Edge> edges() const { return edges_; }
  std::span<const Neighbor> neighbors(NodeId n) const;

  /// Total edge weight (each edge counted once).
  double total_weight() const { return total_weight_; }
  double strength(NodeId n) const { return strength_[n]; }

  std::string_view name(NodeId n) const { return names_[n]; }

 private:
  BipartiteNetwork() = default;

  std::size_t left_count_ = 0;
  std::size_t right_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> names_;
  std::vector<double> strength_;
  std::vector<std::size_t> adjacency_offsets_;
  std::vector<Neighbor> adjacency_;
  double total_weight_ = 0.0;
};

BipartiteNetwork parse_network(std::string_view source, InputFormat format);

/// Reads a file; the format is taken from the extension when not given
/// (".net" / ".pajek" is bipartite Pajek, anything else TSV).
BipartiteNetwork read_network(const std::string& path,
                              std::optional<InputFormat> format = std::nullopt);

/// TSV rendering that parse_network() reads back to the same named edges.
/// Ids may be renumbered by first appearance.
std::string write_tsv(const BipartiteNetwork& net);

/// Strength of node `n`; throws std::out_of_range for unknown ids.
double node_strength(const BipartiteNetwork& net, NodeId n);

struct ComponentExtraction {
  BipartiteNetwork network;
  /// Indexed by new id.
  std::vector<NodeId> new_to_old;
  /// Indexed by old id; empty for dropped nodes.
  std::vector<std::optional<NodeId>> old_to_new;
};

/// Induced subnetwork on the largest connected component by node count.
/// Ties go to the component holding the smallest original node id.
ComponentExtraction largest_connected_component(const BipartiteNetwork& net);

}  // namespace bipmap
