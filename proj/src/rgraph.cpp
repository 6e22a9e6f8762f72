#include "hcx/rgraph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "json.hpp"

namespace hcx {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EdgeWrongArity: return "EdgeWrongArity";
    case ErrorCode::DegenerateEdge: return "DegenerateEdge";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::EmptyPart: return "EmptyPart";
    case ErrorCode::SizeGuard: return "SizeGuard";
    case ErrorCode::OrbitCofaceClash: return "OrbitCofaceClash";
    case ErrorCode::NotFree: return "NotFree";
    case ErrorCode::WrongCodimension: return "WrongCodimension";
    case ErrorCode::OrbitNotIndependentlyFree: return "OrbitNotIndependentlyFree";
    case ErrorCode::NotInSigma: return "NotInSigma";
    case ErrorCode::MatchingInvalid: return "MatchingInvalid";
    case ErrorCode::Stuck: return "Stuck";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

RGraph::RGraph(int r, std::vector<std::string> vertices,
               const std::vector<std::vector<std::string>>& edges)
    : r_(r), names_(std::move(vertices)) {
  if (r < 1) throw Error(ErrorCode::InvalidParams, "r must be positive");
  std::map<std::string, int> ids;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!ids.emplace(names_[i], static_cast<int>(i)).second) {
      throw Error(ErrorCode::InvalidParams, "duplicate vertex '" + names_[i] + "'");
    }
  }
  for (const auto& e : edges) {
    if (static_cast<int>(e.size()) != r) {
      throw Error(ErrorCode::EdgeWrongArity,
                  "edge of size " + std::to_string(e.size()) + " in an " +
                      std::to_string(r) + "-graph");
    }
    VertexSet members;
    for (const auto& name : e) {
      auto it = ids.find(name);
      if (it == ids.end()) throw Error(ErrorCode::UnknownVertex, "'" + name + "'");
      members.push_back(it->second);
    }
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
      throw Error(ErrorCode::DegenerateEdge, "repeated vertex in edge");
    }
    if (!edge_set_.insert(members).second) {
      throw Error(ErrorCode::DuplicateEdge, "edge listed twice");
    }
  }
  edges_.assign(edge_set_.begin(), edge_set_.end());
  for (const auto& e : edges_) {
    const unsigned n = static_cast<unsigned>(e.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      VertexSet sub;
      for (unsigned k = 0; k < n; ++k) {
        if (mask & (1u << k)) sub.push_back(e[k]);
      }
      subedges_.insert(std::move(sub));
    }
  }
}

int RGraph::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error(ErrorCode::UnknownVertex, "'" + name + "'");
  return static_cast<int>(it - names_.begin());
}

bool RGraph::has_edge(std::vector<int> members) const {
  std::sort(members.begin(), members.end());
  return edge_set_.count(members) > 0;
}

bool RGraph::is_subedge(const VertexSet& sorted) const {
  return sorted.empty() || subedges_.count(sorted) > 0;
}

RGraph new_rgraph(int r, std::vector<std::string> vertices,
                  const std::vector<std::vector<std::string>>& edges) {
  return RGraph(r, std::move(vertices), edges);
}

namespace {

// Calls visit(combo) for every k-subset of items, in lexicographic order.
// Stops early when visit returns false.
bool for_each_combination(const std::vector<int>& items, int k,
                          const std::function<bool(const std::vector<int>&)>& visit) {
  const int n = static_cast<int>(items.size());
  if (k > n || k < 0) return true;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> combo(static_cast<std::size_t>(k));
  while (true) {
    for (int i = 0; i < k; ++i) combo[i] = items[idx[i]];
    if (!visit(combo)) return false;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return true;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

RGraph complete_rgraph(int m, int r) {
  if (r < 1 || m < r) throw Error(ErrorCode::InvalidParams, "need m >= r >= 1");
  std::vector<std::string> names;
  std::vector<int> ids;
  for (int v = 0; v < m; ++v) {
    names.push_back(std::to_string(v));
    ids.push_back(v);
  }
  std::vector<std::vector<std::string>> edges;
  for_each_combination(ids, r, [&](const std::vector<int>& c) {
    std::vector<std::string> e;
    for (int v : c) e.push_back(names[v]);
    edges.push_back(std::move(e));
    return true;
  });
  return RGraph(r, names, edges);
}

RGraph complete_multipartite(const std::vector<int>& part_sizes) {
  if (part_sizes.empty()) throw Error(ErrorCode::InvalidParams, "no parts");
  std::vector<std::vector<std::string>> parts;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < part_sizes.size(); ++j) {
    if (part_sizes[j] < 1) throw Error(ErrorCode::InvalidParams, "part size < 1");
    parts.emplace_back();
    for (int k = 0; k < part_sizes[j]; ++k) {
      names.push_back("p" + std::to_string(j) + "_" + std::to_string(k));
      parts.back().push_back(names.back());
    }
  }
  std::vector<std::vector<std::string>> edges{{}};
  for (const auto& part : parts) {
    std::vector<std::vector<std::string>> next;
    for (const auto& prefix : edges) {
      for (const auto& v : part) {
        next.push_back(prefix);
        next.back().push_back(v);
      }
    }
    edges = std::move(next);
  }
  return RGraph(static_cast<int>(part_sizes.size()), names, edges);
}

bool generates_complete(const RGraph& h, const std::vector<VertexSet>& parts) {
  if (static_cast<int>(parts.size()) != h.r()) {
    throw Error(ErrorCode::InvalidParams, "need exactly r parts");
  }
  for (const auto& p : parts) {
    if (p.empty()) throw Error(ErrorCode::EmptyPart, "part is empty");
    for (int v : p) {
      if (v < 0 || v >= static_cast<int>(h.num_vertices())) {
        throw Error(ErrorCode::UnknownVertex, std::to_string(v));
      }
    }
  }
  const std::size_t r = parts.size();
  std::vector<std::size_t> pos(r, 0);
  std::vector<int> pick(r);
  while (true) {
    for (std::size_t j = 0; j < r; ++j) pick[j] = parts[j][pos[j]];
    if (!h.has_edge(pick)) return false;
    std::size_t j = 0;
    while (j < r && ++pos[j] == parts[j].size()) pos[j++] = 0;
    if (j == r) return true;
  }
}

std::vector<int> obstruction_sizes(int r) {
  if (r < 2) return {};
  std::vector<int> sizes(static_cast<std::size_t>(r), 1);
  sizes[r - 2] = 2;
  sizes[r - 1] = 2;
  return sizes;
}

namespace {

struct SubSearch {
  const RGraph& h;
  std::vector<int> sizes;
  std::size_t limit;
  std::size_t tried = 0;
  std::vector<VertexSet> chosen;
  std::vector<bool> used;

  // Every selection from the chosen parts must be a subset of some edge.
  bool consistent(const VertexSet& part) const {
    std::vector<VertexSet> selections{{}};
    for (const auto& p : chosen) {
      std::vector<VertexSet> next;
      for (const auto& s : selections) {
        for (int v : p) {
          next.push_back(s);
          next.back().push_back(v);
        }
      }
      selections = std::move(next);
    }
    for (const auto& s : selections) {
      for (int v : part) {
        VertexSet t = s;
        t.push_back(v);
        std::sort(t.begin(), t.end());
        if (!h.is_subedge(t)) return false;
      }
    }
    return true;
  }

  bool search(std::size_t depth) {
    if (depth == sizes.size()) return generates_complete(h, chosen);
    std::vector<int> free;
    for (std::size_t v = 0; v < used.size(); ++v) {
      if (!used[v]) free.push_back(static_cast<int>(v));
    }
    bool found = false;
    for_each_combination(free, sizes[depth], [&](const std::vector<int>& combo) {
      guard_size(++tried, limit, "complete sub-r-graph search");
      if (!consistent(combo)) return true;
      for (int v : combo) used[v] = true;
      chosen.push_back(combo);
      found = search(depth + 1);
      chosen.pop_back();
      for (int v : combo) used[v] = false;
      return !found;
    });
    return found;
  }
};

}  // namespace

bool contains_complete_sub(const RGraph& h, const std::vector<int>& sizes,
                           const Limits& limits) {
  if (static_cast<int>(sizes.size()) != h.r()) {
    throw Error(ErrorCode::InvalidParams, "need exactly r sizes");
  }
  int total = 0;
  for (int s : sizes) {
    if (s < 1) throw Error(ErrorCode::InvalidParams, "size < 1");
    total += s;
  }
  if (total > static_cast<int>(h.num_vertices())) return false;
  SubSearch s{h, sizes, limits.max_candidates, 0, {}, std::vector<bool>(h.num_vertices(), false)};
  std::sort(s.sizes.begin(), s.sizes.end(), std::greater<>());
  return s.search(0);
}

RGraph rgraph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    if (!j.is_object() || !j.contains("r") || !j.contains("vertices") || !j.contains("edges")) {
      throw Error(ErrorCode::ParseError, "expected keys r, vertices, edges");
    }
    return RGraph(j.at("r").get<int>(), j.at("vertices").get<std::vector<std::string>>(),
                  j.at("edges").get<std::vector<std::vector<std::string>>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string rgraph_to_json(const RGraph& h) {
  nlohmann::ordered_json j;
  j["r"] = h.r();
  j["vertices"] = h.vertex_names();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : h.edges()) {
    auto row = nlohmann::ordered_json::array();
    for (int v : e) row.push_back(h.name(v));
    edges.push_back(row);
  }
  j["edges"] = edges;
  return j.dump();
}

}  // namespace hcx
