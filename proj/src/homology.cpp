#include "hcx/homology.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "hcx/boxcx.hpp"
#include "hcx/homcx.hpp"
#include "json.hpp"

namespace hcx {

namespace {

using boost::multiprecision::cpp_int;
using Column = std::vector<std::pair<int, std::int64_t>>;

std::vector<int> dimension_offsets(const CellComplex& k) {
  std::vector<int> first(static_cast<std::size_t>(k.max_dim() + 2), static_cast<int>(k.size()));
  for (std::size_t id = k.size(); id-- > 0;) first[static_cast<std::size_t>(k.cell(static_cast<int>(id)).dim)] = static_cast<int>(id);
  for (std::size_t d = first.size() - 1; d-- > 0;) first[d] = std::min(first[d], first[d + 1]);
  return first;
}

struct Overflow {};

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw Overflow{};
  return out;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_sub_overflow(a, b, &out)) throw Overflow{};
  return out;
}

/// Invariant factors of a dense integer matrix; returns the nonzero diagonal.
std::vector<cpp_int> smith_diagonal(std::vector<std::vector<cpp_int>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::vector<cpp_int> diag;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      std::size_t pr = rows;
      std::size_t pc = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (a[i][j] != 0 && (pr == rows || abs(a[i][j]) < abs(a[pr][pc]))) {
            pr = i;
            pc = j;
          }
        }
      }
      if (pr == rows) return diag;
      std::swap(a[t], a[pr]);
      for (auto& row : a) std::swap(row[t], row[pc]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        const cpp_int q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        const cpp_int q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t c = t; c < cols; ++c) a[t][c] += a[i][c];
            divides = false;
            break;
          }
        }
      }
      if (divides) break;
    }
    diag.push_back(abs(a[t][t]));
  }
  return diag;
}

RankInfo dense_rank(const std::vector<Column>& cols, std::size_t nrows, Coeff coeff) {
  std::map<int, std::size_t> row_pos;
  std::vector<std::size_t> used;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].empty()) continue;
    used.push_back(c);
    for (const auto& [r, v] : cols[c]) row_pos.emplace(r, 0);
  }
  std::size_t i = 0;
  for (auto& [r, pos] : row_pos) pos = i++;
  guard_size(row_pos.size() * used.size(), 50'000'000, "dense elimination");
  (void)nrows;
  std::vector<std::vector<cpp_int>> a(row_pos.size(), std::vector<cpp_int>(used.size()));
  for (std::size_t j = 0; j < used.size(); ++j) {
    for (const auto& [r, v] : cols[used[j]]) a[row_pos[r]][j] = v;
  }
  RankInfo out;
  if (coeff == Coeff::Z2) {
    for (auto& row : a) {
      for (auto& x : row) x = ((x % 2) + 2) % 2;
    }
  }
  for (const auto& d : smith_diagonal(std::move(a))) {
    if (coeff == Coeff::Z2 && d % 2 == 0) continue;
    ++out.rank;
    if (coeff == Coeff::Z && d > 1) {
      if (d > std::numeric_limits<std::int64_t>::max()) throw Error(ErrorCode::SizeGuard, "torsion coefficient overflow");
      out.torsion.push_back(static_cast<std::int64_t>(d));
    }
  }
  std::sort(out.torsion.begin(), out.torsion.end());
  return out;
}

/// Sparse elimination on unit pivots; whatever has no unit entry is handed to
/// the dense Smith form.
RankInfo sparse_rank(std::vector<Column> cols, std::size_t nrows, Coeff coeff) {
  const bool mod2 = coeff == Coeff::Z2;
  std::vector<std::set<int>> rows(nrows);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    Column cleaned;
    for (auto [r, v] : cols[c]) {
      if (mod2) v = ((v % 2) + 2) % 2;
      if (v != 0) cleaned.emplace_back(r, v);
    }
    cols[c] = std::move(cleaned);
    for (const auto& [r, v] : cols[c]) rows[static_cast<std::size_t>(r)].insert(static_cast<int>(c));
  }
  RankInfo out;
  Column merged;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].empty()) continue;
    int pr = -1;
    std::int64_t pv = 0;
    for (const auto& [r, v] : cols[j]) {
      if ((v == 1 || v == -1) &&
          (pr < 0 || rows[static_cast<std::size_t>(r)].size() < rows[static_cast<std::size_t>(pr)].size())) {
        pr = r;
        pv = v;
      }
    }
    if (pr < 0) continue;
    const Column pivot = cols[j];
    const std::vector<int> others(rows[static_cast<std::size_t>(pr)].begin(), rows[static_cast<std::size_t>(pr)].end());
    for (int c : others) {
      if (static_cast<std::size_t>(c) == j) continue;
      Column& col = cols[static_cast<std::size_t>(c)];
      auto at = std::lower_bound(col.begin(), col.end(), std::make_pair(pr, std::numeric_limits<std::int64_t>::min()));
      const std::int64_t factor = at->second * pv;
      merged.clear();
      std::size_t a = 0;
      std::size_t b = 0;
      while (a < col.size() || b < pivot.size()) {
        if (b == pivot.size() || (a < col.size() && col[a].first < pivot[b].first)) {
          merged.push_back(col[a++]);
          continue;
        }
        const int r = pivot[b].first;
        std::int64_t v = -checked_mul(factor, pivot[b].second);
        if (a < col.size() && col[a].first == r) v = checked_sub(col[a++].second, checked_mul(factor, pivot[b].second));
        if (mod2) v = ((v % 2) + 2) % 2;
        ++b;
        auto& row = rows[static_cast<std::size_t>(r)];
        if (v != 0) {
          merged.emplace_back(r, v);
          row.insert(c);
        } else {
          row.erase(c);
        }
      }
      col.swap(merged);
    }
    for (const auto& [r, v] : cols[j]) rows[static_cast<std::size_t>(r)].erase(static_cast<int>(j));
    cols[j].clear();
    ++out.rank;
  }
  RankInfo rest = dense_rank(cols, nrows, coeff);
  out.rank += rest.rank;
  out.torsion = std::move(rest.torsion);
  return out;
}

}  // namespace

BoundaryMatrix boundary_matrix(const CellComplex& k, int dim, Coeff coeff) {
  if (!k.is_simplicial()) throw Error(ErrorCode::InvalidParams, "homology needs a simplicial complex; subdivide first");
  BoundaryMatrix m;
  if (dim < 0 || dim > k.max_dim()) return m;
  const auto first = dimension_offsets(k);
  if (dim == 0) {
    m.cols.resize(static_cast<std::size_t>(first[1] - first[0]));
    return m;
  }
  m.rows = static_cast<std::size_t>(first[static_cast<std::size_t>(dim)] - first[static_cast<std::size_t>(dim - 1)]);
  VertexSet face;
  for (int id = first[static_cast<std::size_t>(dim)]; id < first[static_cast<std::size_t>(dim + 1)]; ++id) {
    const auto& verts = k.cell(id).verts;
    Column col;
    for (std::size_t skip = 0; skip < verts.size(); ++skip) {
      face.clear();
      for (std::size_t i = 0; i < verts.size(); ++i) {
        if (i != skip) face.push_back(verts[i]);
      }
      const int row = *k.find(face) - first[static_cast<std::size_t>(dim - 1)];
      const std::int64_t sign = coeff == Coeff::Z2 ? 1 : (skip % 2 == 0 ? 1 : -1);
      col.emplace_back(row, sign);
    }
    std::sort(col.begin(), col.end());
    m.cols.push_back(std::move(col));
  }
  return m;
}

void check_boundary_squared(const CellComplex& k) {
  for (int dim = 2; dim <= k.max_dim(); ++dim) {
    const BoundaryMatrix hi = boundary_matrix(k, dim);
    const BoundaryMatrix lo = boundary_matrix(k, dim - 1);
    for (const auto& col : hi.cols) {
      std::map<int, std::int64_t> sum;
      for (const auto& [r, v] : col) {
        for (const auto& [r2, v2] : lo.cols[static_cast<std::size_t>(r)]) sum[r2] += v * v2;
      }
      for (const auto& [r, v] : sum) {
        if (v != 0) throw Error(ErrorCode::VerificationFailed, "boundary of a boundary is nonzero");
      }
    }
  }
}

RankInfo rank_info(BoundaryMatrix m, Coeff coeff) {
  const auto original = m.cols;
  try {
    return sparse_rank(std::move(m.cols), m.rows, coeff);
  } catch (const Overflow&) {
    return dense_rank(original, m.rows, coeff);
  }
}

HomologyReport betti(const CellComplex& k, Coeff coeff, const Limits& limits) {
  guard_size(k.size(), limits.max_cells, "homology input");
  if (!k.is_simplicial()) throw Error(ErrorCode::InvalidParams, "homology needs a simplicial complex; subdivide first");
  HomologyReport out;
  const int top = k.max_dim();
  if (top < 0) return out;
  const auto counts = k.f_vector();
  std::vector<RankInfo> ranks(static_cast<std::size_t>(top + 2));
  for (int d = 1; d <= top; ++d) ranks[static_cast<std::size_t>(d)] = rank_info(boundary_matrix(k, d, coeff), coeff);
  for (int d = 0; d <= top; ++d) {
    const auto n = static_cast<std::int64_t>(counts[static_cast<std::size_t>(d)]);
    out.betti.push_back(n - static_cast<std::int64_t>(ranks[static_cast<std::size_t>(d)].rank) -
                        static_cast<std::int64_t>(ranks[static_cast<std::size_t>(d + 1)].rank));
    out.torsion.push_back(ranks[static_cast<std::size_t>(d + 1)].torsion);
  }
  return out;
}

Agreement homology_agreement(const RGraph& h, Coeff coeff, const Limits& limits) {
  const BoxComplex box = box_edge(h, limits);
  const CellComplex sd_box = barycentric_subdivision(box.gc.complex, limits);
  const HomComplex hom = hom_complex(h, limits);
  const CellComplex sd_hom = barycentric_subdivision(hom.gc.complex, limits);
  check_boundary_squared(sd_box);
  check_boundary_squared(sd_hom);
  Agreement out;
  out.box = betti(sd_box, coeff, limits);
  out.hom = betti(sd_hom, coeff, limits);
  // Compare up to the larger dimension; missing degrees have zero homology.
  const std::size_t n = std::max(out.box.betti.size(), out.hom.betti.size());
  for (auto* r : {&out.box, &out.hom}) {
    r->betti.resize(n, 0);
    r->torsion.resize(n);
  }
  out.agree = out.box == out.hom;
  return out;
}

std::string homology_json(const HomologyReport& report) {
  nlohmann::ordered_json j;
  j["betti"] = report.betti;
  j["torsion"] = report.torsion;
  return j.dump();
}

}  // namespace hcx
