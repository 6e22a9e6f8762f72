#include "hcx/homcx.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace hcx {

std::vector<Perm> symmetric_group(int r) {
  Perm p(static_cast<std::size_t>(r));
  std::iota(p.begin(), p.end(), 0);
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::string perm_name(const Perm& p) {
  std::string s = "[";
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(p[j]);
  }
  return s + "]";
}

std::vector<EdgeTuple> edge_tuples(const RGraph& h) {
  std::vector<EdgeTuple> out;
  for (const auto& e : h.edges()) {
    EdgeTuple t = e;
    do {
      out.push_back(t);
    } while (std::next_permutation(t.begin(), t.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string tuple_name(const RGraph& h, const EdgeTuple& t) {
  std::string s = "(";
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (j) s += ",";
    s += h.name(t[j]);
  }
  return s + ")";
}

EdgeTuple act(const EdgeTuple& t, const Perm& sigma) {
  EdgeTuple out(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) out[j] = t[static_cast<std::size_t>(sigma[j])];
  return out;
}

int MultiHom::dim() const {
  int d = 0;
  for (const auto& p : parts) d += static_cast<int>(p.size()) - 1;
  return d;
}

MultiHom act(const MultiHom& f, const Perm& sigma) {
  MultiHom out;
  out.parts.resize(f.parts.size());
  for (std::size_t j = 0; j < f.parts.size(); ++j) out.parts[j] = f.parts[static_cast<std::size_t>(sigma[j])];
  return out;
}

bool leq(const MultiHom& f, const MultiHom& g) {
  if (f.parts.size() != g.parts.size()) return false;
  for (std::size_t j = 0; j < f.parts.size(); ++j) {
    if (!std::includes(g.parts[j].begin(), g.parts[j].end(), f.parts[j].begin(), f.parts[j].end())) {
      return false;
    }
  }
  return true;
}

namespace {

// Assigns each vertex to a part or leaves it unused. A vertex may join part j
// only if, together with every selection from the other nonempty parts, it
// still spans a subset of an edge; at a leaf with all parts nonempty every
// selection is therefore an edge.
struct MultiHomSearch {
  const RGraph& h;
  const Limits& limits;
  std::vector<VertexSet> parts;
  std::vector<MultiHom> found;

  bool fits(int v, std::size_t j) const {
    std::vector<VertexSet> selections{{v}};
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (k == j || parts[k].empty()) continue;
      std::vector<VertexSet> next;
      for (const auto& s : selections) {
        for (int x : parts[k]) {
          next.push_back(s);
          next.back().push_back(x);
        }
      }
      selections = std::move(next);
    }
    for (auto& s : selections) {
      std::sort(s.begin(), s.end());
      if (!h.is_subedge(s)) return false;
    }
    return true;
  }

  void run(int v) {
    if (v == static_cast<int>(h.num_vertices())) {
      if (std::all_of(parts.begin(), parts.end(), [](const VertexSet& p) { return !p.empty(); })) {
        found.push_back(MultiHom{parts});
        guard_size(found.size(), limits.max_cells, "multihomomorphism poset");
      }
      return;
    }
    run(v + 1);
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (!fits(v, j)) continue;
      parts[j].push_back(v);
      run(v + 1);
      parts[j].pop_back();
    }
  }
};

}  // namespace

std::vector<MultiHom> enumerate_multihoms(const RGraph& h, const Limits& limits) {
  MultiHomSearch search{h, limits, std::vector<VertexSet>(static_cast<std::size_t>(h.r())), {}};
  search.run(0);
  auto& out = search.found;
  std::sort(out.begin(), out.end(), [](const MultiHom& a, const MultiHom& b) {
    const int da = a.dim();
    const int db = b.dim();
    return da != db ? da < db : a.parts < b.parts;
  });
  return std::move(out);
}

std::string multihom_json(const RGraph& h, const MultiHom& f) {
  nlohmann::ordered_json parts = nlohmann::ordered_json::array();
  for (const auto& p : f.parts) {
    auto names = nlohmann::ordered_json::array();
    for (int v : p) names.push_back(h.name(v));
    parts.push_back(std::move(names));
  }
  nlohmann::ordered_json j;
  j["parts"] = std::move(parts);
  return j.dump();
}

GroupAction tuple_action(const RGraph& h, const std::vector<EdgeTuple>& tuples) {
  std::map<EdgeTuple, int> index;
  for (std::size_t i = 0; i < tuples.size(); ++i) index.emplace(tuples[i], static_cast<int>(i));
  std::vector<std::string> names;
  std::vector<std::vector<int>> maps;
  for (const auto& sigma : symmetric_group(h.r())) {
    names.push_back(perm_name(sigma));
    std::vector<int> m(tuples.size());
    for (std::size_t i = 0; i < tuples.size(); ++i) m[i] = index.at(act(tuples[i], sigma));
    maps.push_back(std::move(m));
  }
  return GroupAction(std::move(names), std::move(maps));
}

HomComplex hom_complex(const RGraph& h, const Limits& limits) {
  HomComplex out;
  out.tuples = edge_tuples(h);
  std::map<EdgeTuple, int> index;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < out.tuples.size(); ++i) {
    index.emplace(out.tuples[i], static_cast<int>(i));
    names.push_back(tuple_name(h, out.tuples[i]));
  }
  auto homs = enumerate_multihoms(h, limits);
  std::vector<std::pair<int, VertexSet>> cells;
  std::map<VertexSet, MultiHom> by_verts;
  for (const auto& f : homs) {
    VertexSet verts;
    std::vector<EdgeTuple> prefixes{{}};
    for (const auto& part : f.parts) {
      std::vector<EdgeTuple> next;
      for (const auto& pre : prefixes) {
        for (int x : part) {
          next.push_back(pre);
          next.back().push_back(x);
        }
      }
      prefixes = std::move(next);
    }
    for (const auto& t : prefixes) verts.push_back(index.at(t));
    std::sort(verts.begin(), verts.end());
    by_verts.emplace(verts, f);
    cells.emplace_back(f.dim(), std::move(verts));
  }
  out.gc.complex = CellComplex::from_cells(names, std::move(cells), limits);
  // Vertices of the Hom complex are exactly the edge tuples, all kept.
  out.gc.action = tuple_action(h, out.tuples);
  out.payload.resize(out.gc.complex.size());
  for (std::size_t id = 0; id < out.gc.complex.size(); ++id) {
    const MultiHom& f = by_verts.at(out.gc.complex.cell(static_cast<int>(id)).verts);
    out.payload[id] = f;
    out.cell_of.emplace(f, static_cast<int>(id));
  }
  return out;
}

}  // namespace hcx
