#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fbas/fbas.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNoIntersection = 2;
constexpr int kAborted = 3;

struct AnalysisFlags {
  bool merge_by_org = false;
  fbas::IntersectionAlgorithm intersection = fbas::IntersectionAlgorithm::Complement;
  bool no_symmetric_shortcuts = false;
  std::size_t abort_above = 40;
  fbas::OutputFormat format = fbas::OutputFormat::Json;

  fbas::AnalysisOptions options() const {
    fbas::AnalysisOptions o;
    o.intersection = intersection;
    o.symmetric_shortcuts = !no_symmetric_shortcuts;
    if (abort_above > 0) o.abort_above = abort_above;
    return o;
  }
};

void add_analysis_flags(CLI::App* cmd, AnalysisFlags& flags) {
  cmd->add_option("--intersection-algo", flags.intersection, "Quorum intersection check")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, fbas::IntersectionAlgorithm>{{"pairwise", fbas::IntersectionAlgorithm::Pairwise},
                                                              {"complement", fbas::IntersectionAlgorithm::Complement}},
          CLI::ignore_case));
  cmd->add_flag("--no-symmetric-shortcuts", flags.no_symmetric_shortcuts,
                "Always run the general enumeration");
  cmd->add_option("--abort-above", flags.abort_above,
                  "Skip blocking and splitting sets when the top tier has more nodes (0 disables)")
      ->capture_default_str();
  cmd->add_option("--format", flags.format, "Report format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, fbas::OutputFormat>{{"json", fbas::OutputFormat::Json},
                                                                                   {"csv", fbas::OutputFormat::Csv},
                                                                                   {"text", fbas::OutputFormat::Text}},
                                          CLI::ignore_case));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int report(const fbas::AnalysisResult& result, fbas::OutputFormat format) {
  std::cout << fbas::emit_result(result, format);
  if (!result.complete) return kAborted;
  return result.has_quorum_intersection ? kOk : kNoIntersection;
}

int run_analyze(const std::string& nodes_path, const std::string& orgs_path, const AnalysisFlags& flags) {
  std::vector<std::string> warnings;
  fbas::Fbas network = fbas::parse_nodes(read_file(nodes_path), &warnings);
  std::vector<fbas::Grouping> groups;
  if (!orgs_path.empty()) groups = fbas::parse_organizations(read_file(orgs_path), network);
  if (flags.merge_by_org && orgs_path.empty()) throw std::runtime_error("--merge-by-org needs --organizations");

  fbas::AnalysisResult result = fbas::analyze(network, flags.options());
  if (flags.merge_by_org && result.complete) result = fbas::merge_families_by_group(result, groups);
  result.warnings.insert(result.warnings.begin(), warnings.begin(), warnings.end());
  return report(result, flags.format);
}

int run_simulate(const std::string& graph_path, const fbas::QscPolicy& policy, fbas::AsRelDirection direction,
                 const AnalysisFlags& flags) {
  std::ifstream in(graph_path);
  if (!in) throw std::runtime_error("cannot read '" + graph_path + "'");
  fbas::TrustGraph graph = fbas::parse_as_rel(in, direction);
  return report(fbas::simulate_and_analyze(graph, policy, flags.options()), flags.format);
}

int run_generate(const std::string& topology, long long size, const std::string& out_path, std::uint64_t seed) {
  if (size < 1) throw std::invalid_argument("size must be at least 1");
  auto n = static_cast<std::size_t>(size);
  fbas::Fbas network = topology == "flat"           ? fbas::generate_flat_topology(n)
                       : topology == "stellar-like" ? fbas::generate_stellar_like_topology(n)
                                                    : fbas::generate_random_topology(n, seed);
  std::string doc = fbas::emit_nodes(network);
  if (out_path.empty() || out_path == "-") {
    std::cout << doc;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out || !(out << doc)) throw std::runtime_error("cannot write '" + out_path + "'");
  }
  return kOk;
}

int run_oracle_check(const std::string& nodes_path) {
  fbas::Fbas network = fbas::parse_nodes(read_file(nodes_path));
  fbas::oracle::BruteForce brute(network);  // throws above the size guard

  fbas::AnalysisOptions general;
  general.symmetric_shortcuts = false;
  fbas::AnalysisResult r = fbas::analyze(network, general);
  fbas::AnalysisOptions pairwise = general;
  pairwise.intersection = fbas::IntersectionAlgorithm::Pairwise;

  struct Check {
    const char* name;
    bool ok;
  };
  const Check checks[] = {
      {"minimal quorums", r.minimal_quorums == brute.minimal_quorums()},
      {"minimal blocking sets", r.minimal_blocking_sets == brute.minimal_blocking_sets()},
      {"minimal splitting sets", r.minimal_splitting_sets == brute.minimal_splitting_sets()},
      {"intersection (complement)", r.has_quorum_intersection == brute.has_quorum_intersection()},
      {"intersection (pairwise)",
       fbas::analyze(network, pairwise).has_quorum_intersection == brute.has_quorum_intersection()},
      {"symmetric shortcut", fbas::analyze(network).minimal_blocking_sets == r.minimal_blocking_sets},
  };
  bool all = true;
  for (const auto& c : checks) {
    std::cout << (c.ok ? "match    " : "MISMATCH ") << c.name << "\n";
    all = all && c.ok;
  }
  return all ? kOk : kError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated Byzantine agreement system analysis"};
  app.require_subcommand(1);

  AnalysisFlags flags;
  std::string nodes_path, orgs_path;
  auto* analyze = app.add_subcommand("analyze", "Analyze a node document");
  analyze->add_option("nodes", nodes_path, "Node document (JSON)")->required();
  analyze->add_option("--organizations", orgs_path, "Organization document (JSON)");
  analyze->add_flag("--merge-by-org", flags.merge_by_org, "Merge nodes of one organization in the results");
  add_analysis_flags(analyze, flags);

  std::string graph_path;
  fbas::QscPolicy policy;
  fbas::AsRelDirection direction = fbas::AsRelDirection::Both;
  auto* simulate = app.add_subcommand("simulate", "Configure quorum sets from a trust graph and analyze");
  simulate->add_option("graph", graph_path, "AS relationship file (A|B|rel)")->required();
  simulate->add_option("--policy", policy.kind, "Quorum set configuration policy")
      ->required()
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, fbas::QscPolicyKind>{{"super-safe", fbas::QscPolicyKind::SuperSafe},
                                                     {"ideal-open", fbas::QscPolicyKind::IdealOpen},
                                                     {"all-neighbors", fbas::QscPolicyKind::AllNeighbors},
                                                     {"higher-tier", fbas::QscPolicyKind::HigherTierNeighbors}},
          CLI::ignore_case));
  simulate->add_option("--tier-ratio", policy.tier_ratio, "Rank ratio between tiers (higher-tier)")
      ->capture_default_str();
  simulate->add_option("--direction", direction, "Which side of a customer-provider link trusts the other")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, fbas::AsRelDirection>{{"both", fbas::AsRelDirection::Both},
                                                      {"customer-to-provider",
                                                       fbas::AsRelDirection::CustomerToProvider}},
          CLI::ignore_case));
  add_analysis_flags(simulate, flags);

  std::string topology, out_path;
  long long size = 0;
  std::uint64_t seed = 0;
  auto* generate = app.add_subcommand("generate", "Write a synthetic node document");
  generate->add_option("topology", topology, "flat, stellar-like or random")
      ->required()
      ->check(CLI::IsMember({"flat", "stellar-like", "random"}));
  generate->add_option("size", size, "Nodes (flat, random) or organizations (stellar-like)")->required();
  generate->add_option("-o,--output", out_path, "Output file (default stdout)");
  generate->add_option("--seed", seed, "Seed for the random topology")->capture_default_str();

  auto* oracle = app.add_subcommand("oracle-check", "Compare the search algorithms against brute force");
  oracle->add_option("nodes", nodes_path, "Node document (JSON), at most 20 nodes")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*analyze) return run_analyze(nodes_path, orgs_path, flags);
    if (*simulate) return run_simulate(graph_path, policy, direction, flags);
    if (*generate) return run_generate(topology, size, out_path, seed);
    if (*oracle) return run_oracle_check(nodes_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
