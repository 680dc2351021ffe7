#include <fmt/format.h>

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "bipmap/alpha.h"
#include "bipmap/codelength.h"
#include "bipmap/io.h"
#include "bipmap/metrics.h"
#include "bipmap/network.h"
#include "bipmap/oracle.h"
#include "bipmap/search.h"
#include "bipmap/sweep.h"

namespace fs = std::filesystem;
using namespace bipmap;

namespace {

struct Config {
  std::string input;
  std::string format;  // empty: by extension
  std::optional<double> alpha;
  std::optional<double> info;
  bool two_level = false;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string out;
  double step = 0.05;
  std::string tree;
  bool fixed_sweep = false;
  bool no_timestamp = false;
};

struct Loaded {
  ComponentExtraction lcc;
  std::size_t dropped = 0;
};

Loaded load(const Config& c) {
  std::optional<InputFormat> format;
  if (c.format == "tsv") format = InputFormat::tsv;
  if (c.format == "pajek") format = InputFormat::bipartite_pajek;
  const BipartiteNetwork raw = read_network(c.input, format);
  Loaded out{largest_connected_component(raw), 0};
  out.dropped = raw.node_count() - out.lcc.network.node_count();
  if (out.dropped > 0)
    std::cerr << fmt::format("note: kept the largest connected component, dropped {} of {} nodes\n",
                             out.dropped, raw.node_count());
  return out;
}

// Exactly one of alpha and info; info 1 when neither is given.
std::pair<double, double> alpha_and_info(const Config& c) {
  if (c.alpha) return {*c.alpha, type_information(*c.alpha)};
  const double info = c.info.value_or(1.0);
  return {info_to_alpha(info), info};
}

std::optional<std::string> timestamp(const Config& c) {
  if (c.no_timestamp) return std::nullopt;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

std::string stem(const Config& c) { return fs::path(c.input).stem().string(); }

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

// Writes to `--out/<name>` when --out is set, otherwise to stdout.
void emit(const Config& c, const std::string& name, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  const fs::path path = fs::path(c.out) / name;
  write_file(path, text);
  std::cerr << "wrote " << path.string() << "\n";
}

SearchParams search_params(const Config& c) {
  SearchParams p;
  p.seed = c.seed;
  p.num_trials = c.trials;
  p.threads = c.threads;
  p.mode = c.two_level ? SearchMode::two_level : SearchMode::hierarchical;
  p.validate();
  return p;
}

const char* mode_name(bool two_level) { return two_level ? "two-level" : "hierarchical"; }

int cmd_partition(const Config& c) {
  const Loaded data = load(c);
  const BipartiteNetwork& net = data.lcc.network;
  const auto [alpha, info] = alpha_and_info(c);
  const SearchParams params = search_params(c);
  const SearchResult result = run_trials(net, alpha, params);
  const PartitionMetrics metrics = partition_metrics(net, result.tree, alpha);

  TreeHeader header{alpha, info, result.bits.bits, c.seed, mode_name(c.two_level)};
  RunSummary s;
  s.command = "partition";
  s.input = c.input;
  s.node_count = net.node_count();
  s.edge_count = net.edge_count();
  s.dropped_nodes = data.dropped;
  s.alpha = alpha;
  s.info = info;
  s.mode = mode_name(c.two_level);
  s.seed = c.seed;
  s.trials = c.trials;
  s.metrics = metrics;
  s.trial_bits = result.trial_bits;
  s.best_trial = result.best_trial;
  s.timestamp = timestamp(c);

  const fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
  write_file(dir / (stem(c) + ".tree"), write_tree(net, result.tree, header, data.lcc.new_to_old));
  write_file(dir / (stem(c) + ".json"), summary_json(s));
  std::cout << fmt::format(
      "bits {:.6f}\nextra_compression {:.6f}\neffective_module_size {:.4f}\nleaf_modules {}\n"
      "depth {}\n",
      metrics.codelength, metrics.extra_compression, metrics.effective_module_size,
      metrics.leaf_module_count, metrics.hierarchy_depth);
  return 0;
}

int cmd_sweep(const Config& c) {
  const Loaded data = load(c);
  const std::vector<SweepRecord> records = run_sweep(data.lcc.network, c.step, search_params(c));
  emit(c, stem(c) + "_sweep.csv", write_sweep_csv(records));
  return 0;
}

PartitionTree load_tree(const Config& c, const Loaded& data) {
  std::ifstream f(c.tree, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + c.tree);
  std::stringstream buf;
  buf << f.rdbuf();
  const ParsedTree parsed = parse_tree(buf.str());
  return tree_from_records(data.lcc.network, parsed.records, data.lcc.old_to_new);
}

int cmd_eval(const Config& c) {
  const Loaded data = load(c);
  const BipartiteNetwork& net = data.lcc.network;
  const PartitionTree tree = load_tree(c, data);
  if (c.fixed_sweep) {
    emit(c, stem(c) + "_fixed_sweep.csv", write_fixed_sweep_csv(run_fixed_sweep(net, tree, c.step)));
    return 0;
  }
  const auto [alpha, info] = alpha_and_info(c);
  RunSummary s;
  s.command = "eval";
  s.input = c.input;
  s.node_count = net.node_count();
  s.edge_count = net.edge_count();
  s.dropped_nodes = data.dropped;
  s.alpha = alpha;
  s.info = info;
  s.mode = "fixed";
  s.metrics = partition_metrics(net, tree, alpha);
  s.timestamp = timestamp(c);
  emit(c, stem(c) + "_eval.json", summary_json(s));
  return 0;
}

int cmd_oracle(const Config& c) {
  const Loaded data = load(c);
  const auto [alpha, info] = alpha_and_info(c);
  const OracleResult result = best_partition_bruteforce(data.lcc.network, alpha);
  emit(c, stem(c) + "_oracle.json", oracle_json(data.lcc.network, result, alpha, timestamp(c)));
  return 0;
}

void add_input(CLI::App* cmd, Config& c) {
  cmd->add_option("input", c.input, "Edge list (.tsv) or bipartite Pajek (.net)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--format", c.format, "Input format; default by extension")
      ->check(CLI::IsMember({"tsv", "pajek"}));
}

void add_alpha(CLI::App* cmd, Config& c) {
  auto* a = cmd->add_option("--alpha", c.alpha, "Node-type flipping rate")->check(CLI::Range(0.0, 1.0));
  auto* i = cmd->add_option("--info", c.info, "Node-type information in bits (default 1)")
                ->check(CLI::Range(0.0, 1.0));
  a->excludes(i);
}

void add_search(CLI::App* cmd, Config& c) {
  cmd->add_flag("--two-level", c.two_level, "Search two-level partitions only");
  cmd->add_option("--trials", c.trials, "Independent search trials")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--threads", c.threads, "Worker cap; 0 uses all cores");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community detection in bipartite networks with tunable node-type information"};
  app.require_subcommand(1);
  Config c;

  auto* partition = app.add_subcommand("partition", "Find the best partition");
  add_input(partition, c);
  add_alpha(partition, c);
  add_search(partition, c);
  partition->add_option("--out", c.out, "Output directory (default: current)");
  partition->add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp from the summary");

  auto* sweep = app.add_subcommand("sweep", "Search across a node-type information grid");
  add_input(sweep, c);
  add_search(sweep, c);
  sweep->add_option("--step", c.step, "Grid step in bits")->check(CLI::Range(1e-6, 1.0));
  sweep->add_option("--out", c.out, "Output directory (default: stdout)");

  auto* eval = app.add_subcommand("eval", "Evaluate a given partition");
  add_input(eval, c);
  add_alpha(eval, c);
  eval->add_option("--tree", c.tree, "Tree file")->required()->check(CLI::ExistingFile);
  eval->add_flag("--sweep", c.fixed_sweep, "Evaluate across the information grid");
  eval->add_option("--step", c.step, "Grid step in bits")->check(CLI::Range(1e-6, 1.0));
  eval->add_option("--out", c.out, "Output directory (default: stdout)");
  eval->add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp");

  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum for small networks");
  add_input(oracle, c);
  add_alpha(oracle, c);
  oracle->add_option("--out", c.out, "Output directory (default: stdout)");
  oracle->add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*partition) return cmd_partition(c);
    if (*sweep) return cmd_sweep(c);
    if (*eval) return cmd_eval(c);
    if (*oracle) return cmd_oracle(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
