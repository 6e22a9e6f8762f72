#include "hcx/boxcx.hpp"

#include <algorithm>
#include <map>

namespace hcx {

namespace {

std::vector<EdgeTuple> product(const MultiHom& f) {
  std::vector<EdgeTuple> out{{}};
  for (const auto& part : f.parts) {
    std::vector<EdgeTuple> next;
    for (const auto& pre : out) {
      for (int x : part) {
        next.push_back(pre);
        next.back().push_back(x);
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

BoxComplex box_edge(const RGraph& h, const Limits& limits) {
  BoxComplex box;
  box.r = h.r();
  box.tuples = edge_tuples(h);
  std::map<EdgeTuple, int> index;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < box.tuples.size(); ++i) {
    index.emplace(box.tuples[i], static_cast<int>(i));
    names.push_back(tuple_name(h, box.tuples[i]));
  }

  // Every simplex F satisfies F in i(p(F)), so the nonempty subsets of the
  // products of maximal multihomomorphisms are all the simplices.
  const auto homs = enumerate_multihoms(h, limits);
  std::vector<std::pair<int, VertexSet>> cells;
  for (std::size_t a = 0; a < homs.size(); ++a) {
    bool maximal = true;
    for (std::size_t b = a + 1; b < homs.size() && maximal; ++b) {
      if (homs[b].dim() > homs[a].dim() && leq(homs[a], homs[b])) maximal = false;
    }
    if (!maximal) continue;
    VertexSet top;
    for (const auto& t : product(homs[a])) top.push_back(index.at(t));
    std::sort(top.begin(), top.end());
    if (top.size() >= 63) throw Error(ErrorCode::SizeGuard, "product simplex too large");
    const std::uint64_t subsets = (std::uint64_t{1} << top.size()) - 1;
    guard_size(cells.size() + subsets, limits.max_cells * 8, "box complex candidates");
    for (std::uint64_t mask = 1; mask <= subsets; ++mask) {
      VertexSet s;
      for (std::size_t k = 0; k < top.size(); ++k) {
        if (mask & (std::uint64_t{1} << k)) s.push_back(top[k]);
      }
      cells.emplace_back(static_cast<int>(s.size()) - 1, std::move(s));
    }
  }
  box.gc.complex = CellComplex::from_cells(names, std::move(cells), limits);
  box.gc.action = tuple_action(h, box.tuples);

  box.ip.resize(box.gc.complex.size());
  for (std::size_t c = 0; c < box.gc.complex.size(); ++c) {
    box.ip[c] = map_i(box, map_p(box, static_cast<int>(c)));
  }
  return box;
}

MultiHom map_p(const BoxComplex& box, int cell) {
  MultiHom f;
  f.parts.resize(static_cast<std::size_t>(box.r));
  for (int v : box.gc.complex.cell(cell).verts) {
    const EdgeTuple& t = box.tuples[static_cast<std::size_t>(v)];
    for (std::size_t j = 0; j < t.size(); ++j) f.parts[j].push_back(t[j]);
  }
  for (auto& part : f.parts) {
    std::sort(part.begin(), part.end());
    part.erase(std::unique(part.begin(), part.end()), part.end());
  }
  return f;
}

int map_i(const BoxComplex& box, const MultiHom& f) {
  VertexSet verts;
  for (const auto& t : product(f)) {
    auto it = std::lower_bound(box.tuples.begin(), box.tuples.end(), t);
    if (it == box.tuples.end() || *it != t) {
      throw Error(ErrorCode::InvalidParams, "selection is not an edge tuple");
    }
    verts.push_back(static_cast<int>(it - box.tuples.begin()));
  }
  std::sort(verts.begin(), verts.end());
  auto id = box.gc.complex.find(verts);
  if (!id) throw Error(ErrorCode::InvalidParams, "product is not a simplex of the box complex");
  return *id;
}

bool ip_fixed(const BoxComplex& box, int cell) {
  return box.ip.at(static_cast<std::size_t>(cell)) == cell;
}

IsoCriterion iso_criterion(const RGraph& h, const BoxComplex& box, const Limits& limits) {
  IsoCriterion out;
  out.all_ip_fixed = true;
  for (std::size_t c = 0; c < box.gc.complex.size(); ++c) {
    if (!ip_fixed(box, static_cast<int>(c))) {
      out.all_ip_fixed = false;
      break;
    }
  }
  const auto sizes = obstruction_sizes(h.r());
  out.obstruction_free = sizes.empty() || !contains_complete_sub(h, sizes, limits);
  return out;
}

IsoCriterion iso_criterion(const RGraph& h, const Limits& limits) {
  return iso_criterion(h, box_edge(h, limits), limits);
}

}  // namespace hcx
