#include "bipmap/network.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

namespace bipmap {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : fmt::format("line {}: {}", line, what)), line_(line) {}

BipartiteNetwork BipartiteNetwork::from_edges(std::size_t left_count, std::size_t right_count,
                                              std::vector<Edge> edges,
                                              std::vector<std::string> names) {
  if (edges.empty()) throw std::invalid_argument("network has no edges");
  const std::size_t n = left_count + right_count;
  for (const Edge& e : edges) {
    if (e.left >= left_count) throw std::invalid_argument("edge endpoint is not a left node");
    if (e.right < left_count || e.right >= n)
      throw std::invalid_argument("edge endpoint is not a right node");
    if (!(e.weight > 0.0)) throw std::invalid_argument("edge weight must be positive");
  }

  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.left != b.left ? a.left < b.left : a.right < b.right;
  });
  std::vector<Edge> merged;
  merged.reserve(edges.size());
  for (const Edge& e : edges) {
    if (!merged.empty() && merged.back().left == e.left && merged.back().right == e.right)
      merged.back().weight += e.weight;
    else
      merged.push_back(e);
  }

  BipartiteNetwork net;
  net.left_count_ = left_count;
  net.right_count_ = right_count;
  net.edges_ = std::move(merged);
  net.names_ = std::move(names);
  if (net.names_.size() != n) {
    net.names_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      if (net.names_[i].empty()) net.names_[i] = std::to_string(i + 1);
  }

  net.strength_.assign(n, 0.0);
  std::vector<std::size_t> degree(n, 0);
  for (const Edge& e : net.edges_) {
    net.strength_[e.left] += e.weight;
    net.strength_[e.right] += e.weight;
    ++degree[e.left];
    ++degree[e.right];
    net.total_weight_ += e.weight;
  }
  net.adjacency_offsets_.assign(n + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), net.adjacency_offsets_.begin() + 1);
  net.adjacency_.resize(2 * net.edges_.size());
  std::vector<std::size_t> cursor(net.adjacency_offsets_.begin(), net.adjacency_offsets_.end() - 1);
  for (const Edge& e : net.edges_) {
    net.adjacency_[cursor[e.left]++] = {e.right, e.weight};
    net.adjacency_[cursor[e.right]++] = {e.left, e.weight};
  }
  return net;
}

std::span<const Neighbor> BipartiteNetwork::neighbors(NodeId n) const {
  return std::span<const Neighbor>(adjacency_).subspan(
      adjacency_offsets_[n], adjacency_offsets_[n + 1] - adjacency_offsets_[n]);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const std::string_view line = text.substr(0, eol);
    fn(++line_no, line);
    if (eol == std::string_view::npos) break;
    text.remove_prefix(eol + 1);
  }
}

double parse_weight(std::string_view field, std::size_t line_no) {
  double w = 0.0;
  // from_chars for double is available in libstdc++ 11
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), w);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError(line_no, fmt::format("malformed weight '{}'", field));
  if (!(w > 0.0)) throw ParseError(line_no, fmt::format("non-positive weight {}", field));
  return w;
}

long parse_integer(std::string_view field, std::size_t line_no) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError(line_no, fmt::format("expected an integer, got '{}'", field));
  return v;
}

BipartiteNetwork parse_tsv(std::string_view text) {
  std::unordered_map<std::string, NodeId> left_ids, right_ids;
  std::vector<std::string> left_names, right_names;
  struct RawEdge {
    NodeId left, right;
    double weight;
  };
  std::vector<RawEdge> raw;

  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') return;
    const auto fields = split_fields(body);
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError(line_no, "expected 'left right [weight]'");
    const std::string l(fields[0]), r(fields[1]);
    if (right_ids.contains(l))
      throw ParseError(line_no, fmt::format("label '{}' appears in both columns", l));
    if (left_ids.contains(r))
      throw ParseError(line_no, fmt::format("label '{}' appears in both columns", r));
    const double w = fields.size() == 3 ? parse_weight(fields[2], line_no) : 1.0;
    auto [li, l_new] = left_ids.try_emplace(l, static_cast<NodeId>(left_names.size()));
    if (l_new) left_names.push_back(l);
    auto [ri, r_new] = right_ids.try_emplace(r, static_cast<NodeId>(right_names.size()));
    if (r_new) right_names.push_back(r);
    raw.push_back({li->second, ri->second, w});
  });
  if (raw.empty()) throw ParseError(0, "empty edge list");

  const auto offset = static_cast<NodeId>(left_names.size());
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const RawEdge& e : raw) edges.push_back({e.left, e.right + offset, e.weight});
  std::vector<std::string> names = std::move(left_names);
  names.insert(names.end(), right_names.begin(), right_names.end());
  return BipartiteNetwork::from_edges(offset, right_names.size(), std::move(edges),
                                      std::move(names));
}

bool starts_with_keyword(std::string_view line, std::string_view keyword) {
  if (line.size() < keyword.size()) return false;
  for (std::size_t i = 0; i < keyword.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(line[i])) != keyword[i]) return false;
  return true;
}

BipartiteNetwork parse_pajek(std::string_view text) {
  enum class Section { none, vertices, edges };
  Section section = Section::none;
  long vertex_count = -1;
  long first_right = -1;
  std::vector<std::string> names;
  std::vector<Edge> edges;

  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '%' || body.front() == '#') return;
    if (body.front() == '*') {
      const auto fields = split_fields(body);
      if (starts_with_keyword(body, "*vertices")) {
        if (fields.size() < 2) throw ParseError(line_no, "*Vertices needs a count");
        vertex_count = parse_integer(fields[1], line_no);
        if (vertex_count < 2) throw ParseError(line_no, "need at least two vertices");
        names.assign(static_cast<std::size_t>(vertex_count), std::string());
        section = Section::vertices;
      } else if (starts_with_keyword(body, "*bipartite")) {
        if (vertex_count < 0) throw ParseError(line_no, "*Bipartite before *Vertices");
        if (fields.size() < 2) throw ParseError(line_no, "*Bipartite needs the first right id");
        first_right = parse_integer(fields[1], line_no);
        if (first_right < 2 || first_right > vertex_count)
          throw ParseError(line_no, "first right id must lie in 2..N");
        section = Section::edges;
      } else if (starts_with_keyword(body, "*edges") || starts_with_keyword(body, "*links")) {
        if (first_right < 0) throw ParseError(line_no, "edges before *Bipartite");
        section = Section::edges;
      } else {
        throw ParseError(line_no, fmt::format("unsupported section '{}'", fields[0]));
      }
      return;
    }

    if (section == Section::vertices) {
      const auto space = body.find_first_of(" \t");
      const long id = parse_integer(body.substr(0, space), line_no);
      if (id < 1 || id > vertex_count) throw ParseError(line_no, "vertex id out of range");
      std::string_view label =
          space == std::string_view::npos ? std::string_view() : trim(body.substr(space));
      if (label.size() >= 2 && label.front() == '"') {
        const auto close = label.find('"', 1);
        if (close == std::string_view::npos) throw ParseError(line_no, "unterminated name");
        label = label.substr(1, close - 1);
      } else if (!label.empty()) {
        label = split_fields(label).front();
      }
      names[static_cast<std::size_t>(id - 1)] = std::string(label);
    } else if (section == Section::edges) {
      const auto fields = split_fields(body);
      if (fields.size() < 2 || fields.size() > 3)
        throw ParseError(line_no, "expected 'id id [weight]'");
      long a = parse_integer(fields[0], line_no);
      long b = parse_integer(fields[1], line_no);
      if (a < 1 || a > vertex_count || b < 1 || b > vertex_count)
        throw ParseError(line_no, "edge references an undeclared vertex");
      if (a > b) std::swap(a, b);
      if (a >= first_right || b < first_right)
        throw ParseError(line_no, "edge does not connect a left and a right vertex");
      const double w = fields.size() == 3 ? parse_weight(fields[2], line_no) : 1.0;
      edges.push_back({static_cast<NodeId>(a - 1), static_cast<NodeId>(b - 1), w});
    } else {
      throw ParseError(line_no, "data before *Vertices");
    }
  });
  if (first_right < 0) throw ParseError(0, "missing *Bipartite line");
  if (edges.empty()) throw ParseError(0, "empty edge list");
  const auto left = static_cast<std::size_t>(first_right - 1);
  return BipartiteNetwork::from_edges(left, static_cast<std::size_t>(vertex_count) - left,
                                      std::move(edges), std::move(names));
}

}  // namespace

BipartiteNetwork parse_network(std::string_view source, InputFormat format) {
  return format == InputFormat::tsv ? parse_tsv(source) : parse_pajek(source);
}

BipartiteNetwork read_network(const std::string& path, std::optional<InputFormat> format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!format) {
    const bool pajek = path.ends_with(".net") || path.ends_with(".pajek");
    format = pajek ? InputFormat::bipartite_pajek : InputFormat::tsv;
  }
  return parse_network(buffer.str(), *format);
}

std::string write_tsv(const BipartiteNetwork& net) {
  std::string out;
  for (const Edge& e : net.edges())
    out += fmt::format("{}\t{}\t{}\n", net.name(e.left), net.name(e.right), e.weight);
  return out;
}

double node_strength(const BipartiteNetwork& net, NodeId n) {
  if (!net.contains(n)) throw std::out_of_range(fmt::format("unknown node id {}", n));
  return net.strength(n);
}

ComponentExtraction largest_connected_component(const BipartiteNetwork& net) {
  const std::size_t n = net.node_count();
  constexpr auto unseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> component(n, unseen);
  std::vector<std::size_t> sizes;
  std::vector<NodeId> stack;
  // Scanning ids in ascending order numbers components by their smallest id,
  // so the first maximum wins ties.
  for (NodeId start = 0; start < n; ++start) {
    if (component[start] != unseen || net.neighbors(start).empty()) continue;
    const std::size_t c = sizes.size();
    sizes.push_back(0);
    component[start] = c;
    stack.push_back(start);
    while (!stack.empty()) {
      const NodeId x = stack.back();
      stack.pop_back();
      ++sizes[c];
      for (const Neighbor& nb : net.neighbors(x)) {
        if (component[nb.node] == unseen) {
          component[nb.node] = c;
          stack.push_back(nb.node);
        }
      }
    }
  }
  const std::size_t best =
      static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  ComponentExtraction out{net, {}, std::vector<std::optional<NodeId>>(n)};
  std::size_t left = 0;
  std::vector<std::string> names;
  for (NodeId x = 0; x < n; ++x) {
    if (component[x] != best) continue;
    out.old_to_new[x] = static_cast<NodeId>(out.new_to_old.size());
    out.new_to_old.push_back(x);
    names.emplace_back(net.name(x));
    if (net.side(x) == Side::left) ++left;
  }
  std::vector<Edge> edges;
  for (const Edge& e : net.edges()) {
    if (component[e.left] != best) continue;
    edges.push_back({*out.old_to_new[e.left], *out.old_to_new[e.right], e.weight});
  }
  out.network = BipartiteNetwork::from_edges(left, out.new_to_old.size() - left, std::move(edges),
                                             std::move(names));
  return out;
}

}  // namespace bipmap
