#include "hcx/cellcx.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hcx {

namespace {

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorCode::VerificationFailed, what);
}

}  // namespace

CellComplex CellComplex::from_cells(const std::vector<std::string>& vertex_names,
                                    std::vector<std::pair<int, VertexSet>> cells,
                                    const Limits& limits, std::vector<int>* kept_vertices) {
  guard_size(cells.size(), limits.max_cells, "cell complex");
  for (auto& [dim, verts] : cells) {
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    if (verts.empty() || dim < 0) fail("cell without vertices or negative dimension");
  }
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.second < b.second || (a.second == b.second && a.first < b.first); });
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (cells[i].second == cells[i - 1].second && cells[i].first != cells[i - 1].first) {
      fail("two cells share a vertex set but differ in dimension");
    }
  }
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

  std::vector<int> remap(vertex_names.size(), -1);
  std::vector<int> kept;
  for (const auto& [dim, verts] : cells) {
    if (dim == 0) {
      if (verts.size() != 1) fail("0-cell with several vertices");
      kept.push_back(verts[0]);
    }
  }
  std::sort(kept.begin(), kept.end());
  CellComplex k;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    remap.at(static_cast<std::size_t>(kept[i])) = static_cast<int>(i);
    k.names_.push_back(vertex_names[static_cast<std::size_t>(kept[i])]);
  }
  for (auto& [dim, verts] : cells) {
    for (int& v : verts) {
      v = remap.at(static_cast<std::size_t>(v));
      if (v < 0) fail("vertex of a cell is not a 0-cell");
    }
  }
  std::sort(cells.begin(), cells.end());

  k.cells_.reserve(cells.size());
  for (auto& [dim, verts] : cells) {
    Cell c;
    c.dim = dim;
    c.verts = std::move(verts);
    k.index_.emplace(c.verts, static_cast<int>(k.cells_.size()));
    k.cells_.push_back(std::move(c));
  }

  std::vector<std::vector<int>> incident(k.names_.size());
  for (std::size_t id = 0; id < k.cells_.size(); ++id) {
    for (int v : k.cells_[id].verts) incident[static_cast<std::size_t>(v)].push_back(static_cast<int>(id));
  }
  for (std::size_t id = 0; id < k.cells_.size(); ++id) {
    Cell& c = k.cells_[id];
    if (c.dim == 0) continue;
    if (c.verts.size() == static_cast<std::size_t>(c.dim) + 1) {
      VertexSet face(c.verts.size() - 1);
      for (std::size_t skip = 0; skip < c.verts.size(); ++skip) {
        std::size_t w = 0;
        for (std::size_t i = 0; i < c.verts.size(); ++i) {
          if (i != skip) face[w++] = c.verts[i];
        }
        auto it = k.index_.find(face);
        if (it != k.index_.end() && k.cells_[static_cast<std::size_t>(it->second)].dim == c.dim - 1) {
          c.facets.push_back(it->second);
        }
      }
    } else {
      std::set<int> candidates;
      for (int v : c.verts) {
        for (int other : incident[static_cast<std::size_t>(v)]) {
          const Cell& o = k.cells_[static_cast<std::size_t>(other)];
          if (o.dim == c.dim - 1 && is_subset(o.verts, c.verts)) candidates.insert(other);
        }
      }
      c.facets.assign(candidates.begin(), candidates.end());
    }
    std::sort(c.facets.begin(), c.facets.end());
  }
  for (std::size_t id = 0; id < k.cells_.size(); ++id) {
    for (int f : k.cells_[id].facets) {
      k.cells_[static_cast<std::size_t>(f)].cofacets.push_back(static_cast<int>(id));
    }
  }
  if (kept_vertices) *kept_vertices = kept;
  return k;
}

int CellComplex::max_dim() const {
  int d = -1;
  for (const auto& c : cells_) d = std::max(d, c.dim);
  return d;
}

std::optional<int> CellComplex::find(const VertexSet& sorted_verts) const {
  auto it = index_.find(sorted_verts);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool CellComplex::is_face(int a, int b) const { return is_subset(cell(a).verts, cell(b).verts); }

bool CellComplex::is_simplicial() const {
  return std::all_of(cells_.begin(), cells_.end(), [](const Cell& c) {
    return c.verts.size() == static_cast<std::size_t>(c.dim) + 1;
  });
}

namespace {

std::vector<int> closure(const std::vector<Cell>& cells, int start, bool up) {
  std::vector<int> out{start};
  std::set<int> seen{start};
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Cell& c = cells[static_cast<std::size_t>(out[i])];
    for (int n : up ? c.cofacets : c.facets) {
      if (seen.insert(n).second) out.push_back(n);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<int> CellComplex::upset(int c) const { return closure(cells_, c, true); }
std::vector<int> CellComplex::downset(int c) const { return closure(cells_, c, false); }

std::vector<int> CellComplex::facets() const {
  std::vector<int> out;
  for (std::size_t id = 0; id < cells_.size(); ++id) {
    if (cells_[id].cofacets.empty()) out.push_back(static_cast<int>(id));
  }
  return out;
}

std::vector<std::size_t> CellComplex::f_vector() const {
  std::vector<std::size_t> f(static_cast<std::size_t>(max_dim() + 1), 0);
  for (const auto& c : cells_) ++f[static_cast<std::size_t>(c.dim)];
  return f;
}

std::vector<std::string> CellComplex::label_names(int c) const {
  std::vector<std::string> out;
  for (int v : cell(c).verts) out.push_back(vertex_name(v));
  return out;
}

std::string CellComplex::label(int c) const {
  std::string s = "{";
  bool first = true;
  for (int v : cell(c).verts) {
    if (!first) s += ",";
    s += vertex_name(v);
    first = false;
  }
  return s + "}";
}

std::uint64_t CellComplex::fingerprint() const {
  std::uint64_t sum = 0;
  for (const auto& c : cells_) {
    std::vector<std::string_view> names;
    for (int v : c.verts) names.emplace_back(names_[static_cast<std::size_t>(v)]);
    std::sort(names.begin(), names.end());
    sum += cell_hash(c.dim, names);
  }
  return sum;
}

void CellComplex::check_invariants() const {
  for (std::size_t id = 0; id < cells_.size(); ++id) {
    const Cell& c = cells_[id];
    if (c.dim == 0) {
      if (c.verts.size() != 1 || c.verts[0] != static_cast<int>(id)) fail("0-cell numbering");
      continue;
    }
    if (c.facets.size() < 2) fail("cell " + label(static_cast<int>(id)) + " has fewer than two facets");
    VertexSet covered;
    for (int f : c.facets) {
      const Cell& fc = cells_[static_cast<std::size_t>(f)];
      if (fc.dim != c.dim - 1) fail("cover does not drop dimension by one");
      covered.insert(covered.end(), fc.verts.begin(), fc.verts.end());
    }
    std::sort(covered.begin(), covered.end());
    covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
    if (covered != c.verts) fail("cell " + label(static_cast<int>(id)) + " is not the union of its facets");
    if (c.verts.size() == static_cast<std::size_t>(c.dim) + 1 &&
        c.facets.size() != c.verts.size()) {
      fail("simplex " + label(static_cast<int>(id)) + " is missing a facet");
    }
  }
}

bool same_cells(const CellComplex& a, const CellComplex& b) {
  if (a.size() != b.size()) return false;
  auto table = [](const CellComplex& k) {
    std::vector<std::pair<int, std::vector<std::string>>> t;
    for (std::size_t id = 0; id < k.size(); ++id) {
      auto names = k.label_names(static_cast<int>(id));
      std::sort(names.begin(), names.end());
      t.emplace_back(k.cell(static_cast<int>(id)).dim, std::move(names));
    }
    std::sort(t.begin(), t.end());
    return t;
  };
  return table(a) == table(b);
}

bool Poset::less(int x, int y) const {
  const auto& up = above.at(static_cast<std::size_t>(x));
  return std::binary_search(up.begin(), up.end(), y);
}

std::vector<int> Poset::covers_of(int x) const {
  std::vector<int> out;
  for (int y : above.at(static_cast<std::size_t>(x))) {
    const auto& below_y = below[static_cast<std::size_t>(y)];
    if (std::find(below_y.begin(), below_y.end(), x) != below_y.end()) out.push_back(y);
  }
  return out;
}

Poset make_poset(std::vector<std::string> labels, const std::vector<std::pair<int, int>>& relations) {
  const std::size_t n = labels.size();
  std::vector<std::vector<int>> succ(n);
  std::vector<int> indegree(n, 0);
  for (auto [x, y] : relations) {
    if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= n || static_cast<std::size_t>(y) >= n) {
      throw Error(ErrorCode::InvalidParams, "relation refers to unknown element");
    }
    succ[static_cast<std::size_t>(x)].push_back(y);
    ++indegree[static_cast<std::size_t>(y)];
  }
  std::vector<int> topo;
  for (std::size_t x = 0; x < n; ++x) {
    if (indegree[x] == 0) topo.push_back(static_cast<int>(x));
  }
  for (std::size_t i = 0; i < topo.size(); ++i) {
    for (int y : succ[static_cast<std::size_t>(topo[i])]) {
      if (--indegree[static_cast<std::size_t>(y)] == 0) topo.push_back(y);
    }
  }
  if (topo.size() != n) throw Error(ErrorCode::InvalidParams, "relation is not acyclic");

  Poset p;
  p.labels = std::move(labels);
  p.above.assign(n, {});
  p.below.assign(n, {});
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    std::set<int> up;
    for (int y : succ[static_cast<std::size_t>(*it)]) {
      up.insert(y);
      up.insert(p.above[static_cast<std::size_t>(y)].begin(), p.above[static_cast<std::size_t>(y)].end());
    }
    p.above[static_cast<std::size_t>(*it)].assign(up.begin(), up.end());
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (int y : p.above[x]) {
      bool is_cover = true;
      for (int z : p.above[x]) {
        if (z != y && p.less(z, y)) {
          is_cover = false;
          break;
        }
      }
      if (is_cover) p.below[static_cast<std::size_t>(y)].push_back(static_cast<int>(x));
    }
  }
  return p;
}

Poset face_poset(const CellComplex& k) {
  Poset p;
  for (std::size_t id = 0; id < k.size(); ++id) {
    p.labels.push_back(k.label(static_cast<int>(id)));
    p.below.push_back(k.cell(static_cast<int>(id)).facets);
    auto up = k.upset(static_cast<int>(id));
    up.erase(std::find(up.begin(), up.end(), static_cast<int>(id)));
    p.above.push_back(std::move(up));
  }
  return p;
}

CellComplex order_complex(const Poset& p, const Limits& limits) {
  std::vector<std::pair<int, VertexSet>> cells;
  VertexSet chain;
  auto extend = [&](auto&& self, int last) -> void {
    guard_size(cells.size(), limits.max_cells, "order complex");
    for (int y : p.above[static_cast<std::size_t>(last)]) {
      chain.push_back(y);
      VertexSet sorted = chain;
      std::sort(sorted.begin(), sorted.end());
      cells.emplace_back(static_cast<int>(chain.size()) - 1, std::move(sorted));
      self(self, y);
      chain.pop_back();
    }
  };
  for (std::size_t x = 0; x < p.size(); ++x) {
    chain.assign(1, static_cast<int>(x));
    cells.emplace_back(0, chain);
    extend(extend, static_cast<int>(x));
  }
  return CellComplex::from_cells(p.labels, std::move(cells), limits);
}

std::string bary_name(const CellComplex& k, int c) { return "bary" + k.label(c); }

CellComplex barycentric_subdivision(const CellComplex& k, const Limits& limits) {
  Poset p = face_poset(k);
  for (std::size_t id = 0; id < k.size(); ++id) p.labels[id] = bary_name(k, static_cast<int>(id));
  return order_complex(p, limits);
}

GroupAction::GroupAction(std::vector<std::string> element_names, std::vector<std::vector<int>> vertex_maps)
    : names_(std::move(element_names)), maps_(std::move(vertex_maps)) {
  if (names_.size() != maps_.size() || maps_.empty()) {
    throw Error(ErrorCode::InvalidParams, "group needs one name per element");
  }
  const std::size_t n = maps_[0].size();
  std::map<std::vector<int>, int> lookup;
  for (std::size_t g = 0; g < maps_.size(); ++g) {
    if (maps_[g].size() != n) throw Error(ErrorCode::InvalidParams, "vertex maps differ in size");
    std::vector<int> sorted = maps_[g];
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t v = 0; v < n; ++v) {
      if (sorted[v] != static_cast<int>(v)) throw Error(ErrorCode::InvalidParams, "vertex map is not a permutation");
    }
    // An action need not be faithful; products resolve to the first element
    // acting the same way.
    lookup.emplace(maps_[g], static_cast<int>(g));
  }
  std::vector<int> id(n);
  for (std::size_t v = 0; v < n; ++v) id[v] = static_cast<int>(v);
  auto it = lookup.find(id);
  if (it == lookup.end()) throw Error(ErrorCode::InvalidParams, "group lacks the identity");
  identity_ = it->second;
  table_.assign(maps_.size(), std::vector<int>(maps_.size()));
  for (std::size_t g = 0; g < maps_.size(); ++g) {
    for (std::size_t h = 0; h < maps_.size(); ++h) {
      std::vector<int> gh(n);
      for (std::size_t v = 0; v < n; ++v) gh[v] = maps_[h][static_cast<std::size_t>(maps_[g][v])];
      auto found = lookup.find(gh);
      if (found == lookup.end()) throw Error(ErrorCode::InvalidParams, "group is not closed");
      table_[g][h] = found->second;
    }
  }
}

GroupAction GroupAction::trivial(std::size_t num_vertices) {
  std::vector<int> id(num_vertices);
  for (std::size_t v = 0; v < num_vertices; ++v) id[v] = static_cast<int>(v);
  return GroupAction({"e"}, {id});
}

int GroupAction::compose(int g, int h) const {
  return table_.at(static_cast<std::size_t>(g)).at(static_cast<std::size_t>(h));
}

std::vector<std::vector<int>> GroupAction::cell_maps(const CellComplex& k) const {
  if (num_vertices() != k.num_vertices()) fail("action and complex disagree on vertex count");
  std::vector<std::vector<int>> out(size(), std::vector<int>(k.size()));
  VertexSet image;
  for (std::size_t g = 0; g < size(); ++g) {
    for (std::size_t c = 0; c < k.size(); ++c) {
      const Cell& cell = k.cell(static_cast<int>(c));
      image.clear();
      for (int v : cell.verts) image.push_back(maps_[g][static_cast<std::size_t>(v)]);
      std::sort(image.begin(), image.end());
      auto found = k.find(image);
      if (!found || k.cell(*found).dim != cell.dim) {
        fail("element " + names_[g] + " does not map cell " + k.label(static_cast<int>(c)) + " to a cell");
      }
      out[g][c] = *found;
    }
  }
  return out;
}

GroupAction GroupAction::on_cells(const CellComplex& k) const { return GroupAction(names_, cell_maps(k)); }

GroupAction GroupAction::restrict_to(const std::vector<int>& kept) const {
  std::vector<int> position(num_vertices(), -1);
  for (std::size_t i = 0; i < kept.size(); ++i) position.at(static_cast<std::size_t>(kept[i])) = static_cast<int>(i);
  std::vector<std::vector<int>> maps(size(), std::vector<int>(kept.size()));
  for (std::size_t g = 0; g < size(); ++g) {
    for (std::size_t i = 0; i < kept.size(); ++i) {
      int image = position[static_cast<std::size_t>(maps_[g][static_cast<std::size_t>(kept[i])])];
      if (image < 0) fail("vertex subset is not invariant under the action");
      maps[g][i] = image;
    }
  }
  return GroupAction(names_, std::move(maps));
}

GroupAction GroupAction::extend(const std::vector<std::vector<int>>& extra_images) const {
  auto maps = maps_;
  for (std::size_t g = 0; g < size(); ++g) {
    maps[g].insert(maps[g].end(), extra_images.at(g).begin(), extra_images.at(g).end());
  }
  return GroupAction(names_, std::move(maps));
}

std::vector<int> orbit(const std::vector<std::vector<int>>& cell_maps, int c) {
  std::set<int> out;
  for (const auto& m : cell_maps) out.insert(m.at(static_cast<std::size_t>(c)));
  return {out.begin(), out.end()};
}

void check_action(const CellComplex& k, const GroupAction& a) {
  auto maps = a.cell_maps(k);
  for (const auto& m : maps) {
    std::vector<int> sorted = m;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t c = 0; c < sorted.size(); ++c) {
      if (sorted[c] != static_cast<int>(c)) fail("group element is not a bijection on cells");
    }
    for (std::size_t c = 0; c < k.size(); ++c) {
      for (int f : k.cell(static_cast<int>(c)).facets) {
        const auto& img = k.cell(m[c]).facets;
        if (!std::binary_search(img.begin(), img.end(), m[static_cast<std::size_t>(f)])) {
          fail("group element does not preserve covers");
        }
      }
    }
  }
}

namespace {

std::vector<std::pair<int, VertexSet>> surviving(const CellComplex& k, const std::vector<int>& s) {
  std::vector<bool> removed(k.size(), false);
  for (int x : s) {
    for (int y : k.upset(x)) removed[static_cast<std::size_t>(y)] = true;
  }
  std::vector<std::pair<int, VertexSet>> cells;
  for (std::size_t id = 0; id < k.size(); ++id) {
    if (!removed[id]) cells.emplace_back(k.cell(static_cast<int>(id)).dim, k.cell(static_cast<int>(id)).verts);
  }
  return cells;
}

}  // namespace

CellComplex deletion(const CellComplex& k, const std::vector<int>& s, const Limits& limits) {
  return CellComplex::from_cells(k.vertex_names(), surviving(k, s), limits);
}

GComplex deletion(const GComplex& k, const std::vector<int>& s, const Limits& limits) {
  std::vector<int> kept;
  CellComplex out = CellComplex::from_cells(k.complex.vertex_names(), surviving(k.complex, s), limits, &kept);
  return {std::move(out), k.action.restrict_to(kept)};
}

std::optional<int> free_facet(const CellComplex& k, int sigma) {
  std::optional<int> found;
  for (int c : k.upset(sigma)) {
    if (c == sigma || !k.cell(c).cofacets.empty()) continue;
    if (found) return std::nullopt;
    found = c;
  }
  return found;
}

bool independently_free(const CellComplex& k, const GroupAction& a, int sigma) {
  auto members = orbit(a.cell_maps(k), sigma);
  std::vector<std::vector<int>> ups;
  for (int m : members) {
    if (!free_facet(k, m)) throw Error(ErrorCode::NotFree, "orbit member " + k.label(m) + " is not free");
    ups.push_back(k.upset(m));
  }
  for (std::size_t i = 0; i < ups.size(); ++i) {
    for (std::size_t j = i + 1; j < ups.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(ups[i].begin(), ups[i].end(), ups[j].begin(), ups[j].end(),
                            std::back_inserter(common));
      if (!common.empty()) return false;
    }
  }
  return true;
}

GComplex stellar_g_subdivision(const GComplex& gk, int sigma, const Limits& limits) {
  const CellComplex& k = gk.complex;
  auto maps = gk.action.cell_maps(k);
  auto members = orbit(maps, sigma);
  std::vector<std::vector<int>> ups;
  for (int m : members) ups.push_back(k.upset(m));
  for (std::size_t i = 0; i < ups.size(); ++i) {
    for (std::size_t j = i + 1; j < ups.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(ups[i].begin(), ups[i].end(), ups[j].begin(), ups[j].end(),
                            std::back_inserter(common));
      if (!common.empty()) {
        throw Error(ErrorCode::OrbitCofaceClash,
                    k.label(members[i]) + " and " + k.label(members[j]) + " share a coface");
      }
    }
  }

  std::vector<std::string> names = k.vertex_names();
  std::map<int, int> apex;  // orbit member -> new vertex id
  for (int m : members) {
    apex[m] = static_cast<int>(names.size());
    names.push_back(bary_name(k, m));
  }
  std::vector<bool> above_orbit(k.size(), false);
  for (const auto& up : ups) {
    for (int c : up) above_orbit[static_cast<std::size_t>(c)] = true;
  }
  std::vector<std::pair<int, VertexSet>> cells;
  for (std::size_t id = 0; id < k.size(); ++id) {
    if (!above_orbit[id]) cells.emplace_back(k.cell(static_cast<int>(id)).dim, k.cell(static_cast<int>(id)).verts);
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    const int a = apex[members[i]];
    cells.emplace_back(0, VertexSet{a});
    std::set<int> star_closure;
    for (int top : ups[i]) {
      for (int f : k.downset(top)) star_closure.insert(f);
    }
    for (int f : star_closure) {
      if (above_orbit[static_cast<std::size_t>(f)]) continue;
      VertexSet verts = k.cell(f).verts;
      verts.push_back(a);
      cells.emplace_back(k.cell(f).dim + 1, std::move(verts));
    }
  }
  std::vector<std::vector<int>> extra(gk.action.size());
  for (std::size_t g = 0; g < gk.action.size(); ++g) {
    for (int m : members) extra[g].push_back(apex.at(maps[g][static_cast<std::size_t>(m)]));
  }
  GroupAction extended = gk.action.extend(extra);
  std::vector<int> kept;
  CellComplex out = CellComplex::from_cells(names, std::move(cells), limits, &kept);
  return {std::move(out), extended.restrict_to(kept)};
}

std::string to_json(const CellComplex& k) {
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (std::size_t id = 0; id < k.size(); ++id) {
    nlohmann::ordered_json c;
    c["id"] = id;
    c["dim"] = k.cell(static_cast<int>(id)).dim;
    c["label"] = k.label_names(static_cast<int>(id));
    c["covers"] = k.cell(static_cast<int>(id)).facets;
    cells.push_back(std::move(c));
  }
  nlohmann::ordered_json j;
  j["cells"] = std::move(cells);
  return j.dump();
}

std::string to_dot(const CellComplex& k) {
  std::ostringstream out;
  out << "digraph hasse {\n  rankdir=BT;\n";
  for (std::size_t id = 0; id < k.size(); ++id) {
    out << "  c" << id << " [label=" << nlohmann::json(k.label(static_cast<int>(id))).dump() << "];\n";
  }
  for (std::size_t id = 0; id < k.size(); ++id) {
    for (int f : k.cell(static_cast<int>(id)).facets) out << "  c" << f << " -> c" << id << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace hcx
