#pragma once

#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "fbas/core.hpp"
#include "fbas/pipeline.hpp"
#include "fbas/qsc.hpp"

namespace fbas {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using nlohmann::json;

class NodeResolver {
 public:
  explicit NodeResolver(std::vector<Node>& nodes) : nodes_(nodes) {}

  void add_known(const std::string& key, NodeId id) { ids_.emplace(key, id); }

  /// Id of `key`; unknown keys become placeholder nodes that never take part in a quorum.
  NodeId resolve(const std::string& key) {
    if (auto it = ids_.find(key); it != ids_.end()) return it->second;
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({key, QuorumSet::unsatisfiable()});
    ids_.emplace(key, id);
    placeholders.push_back(key);
    return id;
  }

  std::vector<std::string> placeholders;

 private:
  std::vector<Node>& nodes_;
  std::unordered_map<std::string, NodeId> ids_;
};

inline QuorumSet parse_quorum_set(const json& j, NodeResolver& resolver, const std::string& owner,
                                  std::vector<std::string>* warnings) {
  if (!j.is_object()) throw ParseError("quorum set of '" + owner + "' is not an object");
  QuorumSet qs;
  const json& t = j.value("threshold", json());
  if (!t.is_number_integer() || t.get<long long>() < 0) {
    throw ParseError("quorum set of '" + owner + "' needs a non-negative integer threshold");
  }
  qs.threshold = static_cast<std::uint32_t>(t.get<long long>());
  if (qs.threshold == 0 && warnings) warnings->push_back("quorum set of '" + owner + "' has threshold 0");
  if (auto it = j.find("validators"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ParseError("validators of '" + owner + "' must be an array");
    for (const auto& v : *it) {
      if (!v.is_string()) throw ParseError("validator entries of '" + owner + "' must be strings");
      qs.validators.push_back(resolver.resolve(v.get<std::string>()));
    }
  }
  if (auto it = j.find("innerQuorumSets"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ParseError("innerQuorumSets of '" + owner + "' must be an array");
    for (const auto& inner : *it) qs.inner_quorum_sets.push_back(parse_quorum_set(inner, resolver, owner, warnings));
  }
  return qs;
}

inline json quorum_set_json(const QuorumSet& qs, const Fbas& fbas) {
  json validators = json::array();
  for (NodeId v : qs.validators) validators.push_back(fbas.name(v));
  json inner = json::array();
  for (const auto& i : qs.inner_quorum_sets) inner.push_back(quorum_set_json(i, fbas));
  json out = json::object();
  out["threshold"] = qs.threshold;
  out["validators"] = std::move(validators);
  out["innerQuorumSets"] = std::move(inner);
  return out;
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace detail

/// Reads a stellarbeat-style node list:
/// `[{"publicKey": ..., "quorumSet": {"threshold", "validators", "innerQuorumSets"}}, ...]`.
///
/// Ids follow document order. Unknown fields are ignored. A missing or null
/// quorum set is never satisfied. Validators that name no listed node become
/// extra nodes with a never-satisfied quorum set.
inline Fbas parse_nodes(std::string_view text, std::vector<std::string>* warnings = nullptr) {
  detail::json doc = detail::parse_json(text);
  if (!doc.is_array()) throw ParseError("node document must be a JSON array");

  std::vector<Node> nodes;
  detail::NodeResolver resolver(nodes);
  std::unordered_set<std::string> seen;
  for (const auto& record : doc) {
    if (!record.is_object() || !record.contains("publicKey") || !record["publicKey"].is_string()) {
      throw ParseError("node record #" + std::to_string(nodes.size()) + " lacks a string publicKey");
    }
    std::string key = record["publicKey"].get<std::string>();
    if (!seen.insert(key).second) throw ParseError("duplicate publicKey '" + key + "'");
    resolver.add_known(key, static_cast<NodeId>(nodes.size()));
    nodes.push_back({key, QuorumSet::unsatisfiable()});
  }
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& record = doc[i];
    auto it = record.find("quorumSet");
    if (it == record.end() || it->is_null()) {
      if (warnings) warnings->push_back("node '" + nodes[i].public_key + "' has no quorum set");
      continue;
    }
    nodes[i].quorum_set = detail::parse_quorum_set(*it, resolver, nodes[i].public_key, warnings);
  }
  if (warnings) {
    for (const auto& key : resolver.placeholders) {
      warnings->push_back("unknown validator '" + key + "' added with an unsatisfiable quorum set");
    }
  }
  return Fbas(std::move(nodes));
}

inline Fbas parse_nodes(std::istream& in, std::vector<std::string>* warnings = nullptr) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_nodes(buffer.str(), warnings);
}

/// Node list in the format read by parse_nodes.
inline std::string emit_nodes(const Fbas& fbas) {
  detail::json doc = detail::json::array();
  for (NodeId v = 0; v < fbas.size(); ++v) {
    detail::json record = detail::json::object();
    record["publicKey"] = fbas.name(v);
    record["quorumSet"] = detail::quorum_set_json(fbas.quorum_set(v), fbas);
    doc.push_back(std::move(record));
  }
  return doc.dump(2) + "\n";
}

/// Reads `[{"id", "name", "validators": [publicKey, ...]}, ...]`. Validators
/// not in the FBAS are skipped. Throws ParseError if a node is claimed twice.
inline std::vector<Grouping> parse_organizations(std::string_view text, const Fbas& fbas) {
  detail::json doc = detail::parse_json(text);
  if (!doc.is_array()) throw ParseError("organization document must be a JSON array");
  std::vector<Grouping> out;
  std::unordered_map<NodeId, std::string> owner;
  for (const auto& record : doc) {
    if (!record.is_object()) throw ParseError("organization records must be objects");
    Grouping g;
    if (record.contains("name") && record["name"].is_string()) {
      g.name = record["name"].get<std::string>();
    } else if (record.contains("id") && record["id"].is_string()) {
      g.name = record["id"].get<std::string>();
    } else {
      throw ParseError("organization record #" + std::to_string(out.size()) + " lacks a name or id");
    }
    for (const auto& v : record.value("validators", detail::json::array())) {
      if (!v.is_string()) throw ParseError("validators of organization '" + g.name + "' must be strings");
      auto id = fbas.find(v.get<std::string>());
      if (!id) continue;
      if (auto [it, inserted] = owner.emplace(*id, g.name); !inserted) {
        throw ParseError("node '" + v.get<std::string>() + "' claimed by organizations '" + it->second + "' and '" +
                         g.name + "'");
      }
      g.members.insert(*id);
    }
    out.push_back(std::move(g));
  }
  return out;
}

enum class AsRelDirection {
  /// Customer and provider trust each other.
  Both,
  /// Only the customer trusts its provider.
  CustomerToProvider,
};

/// Reads CAIDA AS relationship lines `A|B|rel[|...]`: rel -1 means A is a
/// provider of B, rel 0 means A and B peer. Lines starting with '#' and blank
/// lines are skipped.
inline TrustGraph parse_as_rel(std::istream& in, AsRelDirection direction = AsRelDirection::Both) {
  TrustGraph g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, '|');) fields.push_back(f);
    auto fail = [&](const std::string& why) {
      throw ParseError("line " + std::to_string(line_no) + ": " + why + ": '" + line + "'");
    };
    if (fields.size() < 3) fail("expected A|B|rel");
    if (fields[0].empty() || fields[1].empty()) fail("empty AS identifier");
    int rel = 0;
    try {
      std::size_t used = 0;
      rel = std::stoi(fields[2], &used);
      if (used != fields[2].size()) fail("bad relationship");
    } catch (const std::logic_error&) {
      fail("bad relationship");
    }
    NodeId a = g.node(fields[0]);
    NodeId b = g.node(fields[1]);
    if (rel == 0) {
      g.add_undirected_edge(a, b);
    } else if (rel == -1) {
      if (direction == AsRelDirection::Both) {
        g.add_undirected_edge(a, b);
      } else {
        g.add_edge(b, a);
      }
    } else {
      fail("relationship must be -1 or 0");
    }
  }
  return g;
}

inline TrustGraph parse_as_rel(std::string_view text, AsRelDirection direction = AsRelDirection::Both) {
  std::istringstream in{std::string(text)};
  return parse_as_rel(in, direction);
}

enum class OutputFormat { Json, Csv, Text };

namespace detail {

inline nlohmann::ordered_json labelled_set(const NodeIdSet& s, const std::vector<std::string>& labels) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (NodeId v : s) out.push_back(v < labels.size() ? labels[v] : std::to_string(v));
  return out;
}

inline nlohmann::ordered_json stats_json(const FamilyStats& st) {
  nlohmann::ordered_json out;
  out["count"] = st.count;
  out["min"] = st.min;
  out["max"] = st.max;
  out["mean"] = st.mean;
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (auto [k, c] : st.histogram) hist[std::to_string(k)] = c;
  out["histogram"] = std::move(hist);
  return out;
}

inline std::string text_set(const NodeIdSet& s, const std::vector<std::string>& labels) {
  std::string out = "{";
  bool first = true;
  for (NodeId v : s) {
    if (!first) out += ", ";
    out += v < labels.size() ? labels[v] : std::to_string(v);
    first = false;
  }
  return out + "}";
}

}  // namespace detail

/// Deterministic report of `result`. Members are shown by label.
inline std::string emit_result(const AnalysisResult& result, OutputFormat format) {
  const auto& labels = result.labels;
  struct Named {
    const char* json_key;
    const char* csv_key;
    const char* title;
    const NodeSetFamily& family;
    const FamilyStats& stats;
  };
  const Named families[] = {
      {"minimal_quorums", "quorums", "minimal quorums", result.minimal_quorums, result.quorum_stats},
      {"minimal_blocking_sets", "blocking", "minimal blocking sets", result.minimal_blocking_sets,
       result.blocking_stats},
      {"minimal_splitting_sets", "splitting", "minimal splitting sets", result.minimal_splitting_sets,
       result.splitting_stats},
  };

  switch (format) {
    case OutputFormat::Json: {
      nlohmann::ordered_json out;
      out["has_quorum_intersection"] = result.has_quorum_intersection;
      out["complete"] = result.complete;
      out["symmetric_shortcut"] = result.used_symmetric_shortcut;
      out["top_tier"] = detail::labelled_set(result.top_tier, labels);
      for (const auto& f : families) {
        nlohmann::ordered_json sets = nlohmann::ordered_json::array();
        for (const auto& s : f.family) sets.push_back(detail::labelled_set(s, labels));
        out[f.json_key] = std::move(sets);
      }
      nlohmann::ordered_json stats;
      for (const auto& f : families) stats[f.csv_key] = detail::stats_json(f.stats);
      out["statistics"] = std::move(stats);
      out["warnings"] = result.warnings;
      return out.dump(2) + "\n";
    }
    case OutputFormat::Csv: {
      std::string out = "family,cardinality,count\n";
      for (const auto& f : families) {
        for (auto [k, c] : f.stats.histogram) {
          out += std::string(f.csv_key) + "," + std::to_string(k) + "," + std::to_string(c) + "\n";
        }
      }
      return out;
    }
    case OutputFormat::Text: {
      std::ostringstream out;
      out << "quorum intersection: " << (result.has_quorum_intersection ? "yes" : "NO") << "\n";
      out << "top tier (" << result.top_tier.size() << "): " << detail::text_set(result.top_tier, labels) << "\n";
      for (const auto& f : families) {
        out << f.title << ": " << f.stats.count;
        if (f.stats.count > 0) {
          out << " (cardinality min " << f.stats.min << ", max " << f.stats.max << ", mean " << f.stats.mean << ")";
        }
        out << "\n";
        for (const auto& s : f.family) out << "  " << detail::text_set(s, labels) << "\n";
      }
      if (!result.complete) out << "result incomplete\n";
      for (const auto& w : result.warnings) out << "warning: " << w << "\n";
      return out.str();
    }
  }
  return {};
}

}  // namespace fbas
