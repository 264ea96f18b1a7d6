#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unistd.h>
#include <vector>

#include "json.hpp"
#include "nestmc/diagnostics.hpp"
#include "nestmc/error.hpp"
#include "nestmc/graph.hpp"

namespace nestmc::io {

using nlohmann::json;

inline constexpr std::string_view kVersion = "0.1.0";

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::Io, "cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Writes to a sibling temporary file; commit() renames it over the target.
/// An uncommitted file is removed on destruction.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path target)
      : target_(std::move(target)), temp_(target_.string() + ".tmp." + std::to_string(::getpid())) {
    out_.open(temp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error(ErrorCategory::Io, "cannot write '" + temp_.string() + "'");
  }
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  ~AtomicFile() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(temp_, ec);
    }
  }

  std::ostream& stream() { return out_; }

  void commit() {
    out_.flush();
    if (!out_) throw Error(ErrorCategory::Io, "write to '" + temp_.string() + "' failed");
    out_.close();
    std::error_code ec;
    std::filesystem::rename(temp_, target_, ec);
    if (ec) throw Error(ErrorCategory::Io, "cannot rename onto '" + target_.string() + "': " + ec.message());
    committed_ = true;
  }

 private:
  std::filesystem::path target_;
  std::filesystem::path temp_;
  std::ofstream out_;
  bool committed_ = false;
};

inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  AtomicFile file(path);
  file.stream() << contents;
  file.commit();
}

// ---------------------------------------------------------------------------
// Graph JSON
//
//   {"vertices":[{"id":"a","pop":3,"votes":{"SEN18":{"A":10,"B":7}}}, ...],
//    "edges":[["a","b"], ...]}
//
// "votes" may be omitted on every vertex; if any vertex lists an election,
// every vertex must list it.

namespace detail {

[[noreturn]] inline void schema(const std::string& where, const std::string& what) {
  throw Error(ErrorCategory::SchemaViolation, where + ": " + what);
}

inline std::int64_t count_field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema(where, std::string("missing \"") + key + "\"");
  if (!it->is_number_integer()) schema(where + "." + key, "expected an integer");
  return it->get<std::int64_t>();
}

}  // namespace detail

inline DualGraph parse_graph(std::string_view text, const std::string& source = "<graph>") {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCategory::SchemaViolation, source + ": malformed JSON (" + e.what() + ")");
  }
  if (!doc.is_object()) detail::schema(source, "top level must be an object");
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) detail::schema(source, "missing \"vertices\" array");
  if (!doc.contains("edges") || !doc["edges"].is_array()) detail::schema(source, "missing \"edges\" array");

  std::vector<std::string> ids;
  std::vector<std::int64_t> pops;
  std::map<std::string, Election> elections;
  const auto& verts = doc["vertices"];
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const std::string where = source + ": vertices[" + std::to_string(i) + "]";
    const auto& v = verts[i];
    if (!v.is_object()) detail::schema(where, "expected an object");
    if (!v.contains("id") || !v["id"].is_string()) detail::schema(where, "missing string \"id\"");
    ids.push_back(v["id"].get<std::string>());
    pops.push_back(detail::count_field(v, "pop", where));
    if (auto vt = v.find("votes"); vt != v.end()) {
      if (!vt->is_object()) detail::schema(where + ".votes", "expected an object");
      for (const auto& [name, parties] : vt->items()) {
        const std::string ew = where + ".votes." + name;
        if (!parties.is_object()) detail::schema(ew, "expected {\"A\":int,\"B\":int}");
        auto& e = elections[name];
        if (e.name.empty()) {
          e.name = name;
          e.party_a.assign(verts.size(), -1);
          e.party_b.assign(verts.size(), -1);
        }
        e.party_a[i] = detail::count_field(parties, "A", ew);
        e.party_b[i] = detail::count_field(parties, "B", ew);
        if (e.party_a[i] < 0 || e.party_b[i] < 0) detail::schema(ew, "votes must be nonnegative");
      }
    }
  }
  for (const auto& [name, e] : elections)
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (e.party_a[i] < 0)
        throw Error(ErrorCategory::IncompleteElection,
                    source + ": vertex '" + ids[i] + "' has no votes for election '" + name + "'");

  std::vector<std::pair<std::string, std::string>> edges;
  const auto& es = doc["edges"];
  for (std::size_t i = 0; i < es.size(); ++i) {
    const auto& e = es[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      detail::schema(source + ": edges[" + std::to_string(i) + "]", "expected [\"id1\",\"id2\"]");
    edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }

  std::vector<Election> elist;
  for (auto& [name, e] : elections) elist.push_back(std::move(e));
  try {
    return DualGraph::from_id_edges(std::move(ids), std::move(pops), edges, std::move(elist));
  } catch (const Error& e) {
    throw Error(e.category(), source + ": " + e.message());
  }
}

inline DualGraph load_graph(const std::filesystem::path& path) { return parse_graph(read_file(path), path.string()); }

inline json graph_to_json(const DualGraph& graph) {
  json verts = json::array();
  for (Vertex v = 0; v < graph.size(); ++v) {
    json vertex = {{"id", graph.id(v)}, {"pop", graph.population(v)}};
    if (!graph.elections().empty()) {
      json votes = json::object();
      for (const auto& e : graph.elections()) votes[e.name] = {{"A", e.party_a[v]}, {"B", e.party_b[v]}};
      vertex["votes"] = std::move(votes);
    }
    verts.push_back(std::move(vertex));
  }
  json edges = json::array();
  for (auto [u, v] : graph.edges()) edges.push_back({graph.id(u), graph.id(v)});
  return {{"vertices", std::move(verts)}, {"edges", std::move(edges)}};
}

inline void save_graph(const DualGraph& graph, const std::filesystem::path& path) {
  write_file_atomic(path, graph_to_json(graph).dump(1) + "\n");
}

// ---------------------------------------------------------------------------
// Plan CSV: header "unit_id,district", one row per vertex, districts are
// positive integers. Gaps in the labels are closed up (order preserved).

inline std::string plan_to_csv(const DualGraph& graph, const Plan& plan) {
  require_matching(graph, plan);
  std::string out = "unit_id,district\n";
  for (Vertex v = 0; v < graph.size(); ++v) out += graph.id(v) + "," + std::to_string(plan.district_of(v) + 1) + "\n";
  return out;
}

inline void save_plan(const DualGraph& graph, const Plan& plan, const std::filesystem::path& path) {
  write_file_atomic(path, plan_to_csv(graph, plan));
}

/// `warnings` receives non-fatal notes (relabeled districts).
/// If expected_districts is set, a plan using fewer labels is an EmptyDistrict error.
inline Plan parse_plan(std::string_view text, const DualGraph& graph, std::vector<std::string>* warnings = nullptr,
                       std::optional<int> expected_districts = std::nullopt,
                       const std::string& source = "<plan>") {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  std::vector<long long> labels(graph.size(), 0);
  std::vector<char> assigned(graph.size(), 0);
  bool header = false;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw Error(ErrorCategory::SchemaViolation, where + ": expected two columns 'unit_id,district'");
    const std::string id = trim(line.substr(0, comma));
    const std::string label = trim(line.substr(comma + 1));
    if (!header) {
      if (id != "unit_id" || label != "district")
        throw Error(ErrorCategory::SchemaViolation, where + ": header must be 'unit_id,district'");
      header = true;
      continue;
    }
    auto v = graph.find(id);
    if (!v) throw Error(ErrorCategory::UnknownVertex, where + ": unknown vertex '" + id + "'");
    if (assigned[*v]) throw Error(ErrorCategory::SchemaViolation, where + ": vertex '" + id + "' assigned twice");
    long long d = 0;
    try {
      std::size_t used = 0;
      d = std::stoll(label, &used);
      if (used != label.size()) throw std::invalid_argument(label);
    } catch (const std::exception&) {
      throw Error(ErrorCategory::SchemaViolation, where + ": district '" + label + "' is not an integer");
    }
    if (d < 1) throw Error(ErrorCategory::SchemaViolation, where + ": district ids must be positive");
    labels[*v] = d;
    assigned[*v] = 1;
  }
  if (!header) throw Error(ErrorCategory::SchemaViolation, source + ": empty plan file");
  for (Vertex v = 0; v < graph.size(); ++v)
    if (!assigned[v])
      throw Error(ErrorCategory::UnassignedVertex, source + ": vertex '" + graph.id(v) + "' has no district");

  Plan plan = Plan::from_labels(labels);
  const long long max_label = *std::max_element(labels.begin(), labels.end());
  if (max_label != plan.num_districts() && warnings)
    warnings->push_back(source + ": district ids are not 1.." + std::to_string(plan.num_districts()) +
                        "; relabeled densely");
  if (expected_districts && plan.num_districts() != *expected_districts)
    throw Error(ErrorCategory::EmptyDistrict, source + ": plan uses " + std::to_string(plan.num_districts()) +
                                                  " districts, expected " + std::to_string(*expected_districts));
  return plan;
}

inline Plan load_plan(const std::filesystem::path& path, const DualGraph& graph,
                      std::vector<std::string>* warnings = nullptr, std::optional<int> expected_districts = std::nullopt) {
  return parse_plan(read_file(path), graph, warnings, expected_districts, path.string());
}

// ---------------------------------------------------------------------------
// Ensemble JSONL: one object per step.

inline json record_to_json(const EnsembleRecord& r, bool with_votes = true) {
  json j = {{"step", r.step}};
  if (with_votes) {
    j["seats_a"] = r.seats_a;
    j["ranked_shares_a"] = r.ranked_shares_a;
  }
  j["plan_digest"] = digest_hex(r.plan_digest);
  return j;
}

inline std::vector<EnsembleRecord> parse_ensemble(std::string_view text, const std::string& source = "<ensemble>") {
  std::vector<EnsembleRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::string where = source + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      throw Error(ErrorCategory::SchemaViolation, where + ": malformed JSON");
    }
    try {
      EnsembleRecord r;
      r.step = j.at("step").get<std::size_t>();
      r.seats_a = j.at("seats_a").get<int>();
      r.ranked_shares_a = j.at("ranked_shares_a").get<std::vector<double>>();
      r.plan_digest = std::stoull(j.at("plan_digest").get<std::string>(), nullptr, 16);
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorCategory::SchemaViolation, where + ": " + e.what());
    } catch (const std::exception&) {
      throw Error(ErrorCategory::SchemaViolation, where + ": bad plan_digest");
    }
  }
  return out;
}

inline std::vector<EnsembleRecord> load_ensemble(const std::filesystem::path& path) {
  return parse_ensemble(read_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Run manifest, written next to every output as <out>.manifest.json.

struct RunManifest {
  std::string command;
  json config = json::object();
  std::vector<std::uint64_t> rng_seeds;
  std::map<std::string, std::string> input_digests;  // path -> fnv1a64 hex

  void add_input(const std::filesystem::path& path) {
    input_digests[path.string()] = digest_hex(fnv1a64(read_file(path)));
  }

  json to_json() const {
    return {{"command", command},
            {"config", config},
            {"rng_seeds", rng_seeds},
            {"inputs", input_digests},
            {"version", std::string(kVersion)}};
  }

  void write_for(const std::filesystem::path& output) const {
    write_file_atomic(output.string() + ".manifest.json", to_json().dump(2) + "\n");
  }
};

}  // namespace nestmc::io
