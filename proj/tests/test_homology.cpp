#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "corpus.hpp"
#include "hcx/boxcx.hpp"
#include "hcx/homology.hpp"
#include "json.hpp"
#include "oracle.hpp"

using namespace hcx;
using corpus::full_simplex;
using corpus::hollow_triangle;
using corpus::simplicial;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::VerificationFailed;
}

oracle::Simplicial as_sets(const CellComplex& k) {
  oracle::Simplicial out;
  for (const auto& c : k.cells()) out.insert(c.verts);
  return out;
}

std::vector<std::int64_t> trimmed(std::vector<std::int64_t> b) {
  while (!b.empty() && b.back() == 0) b.pop_back();
  return b;
}

/// Six-vertex triangulation of the real projective plane.
CellComplex rp2() {
  return simplicial({"0", "1", "2", "3", "4", "5"}, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
                                                      {1, 2, 4}, {2, 3, 5}, {1, 3, 4}, {1, 3, 5}, {2, 4, 5}});
}

CellComplex cycle(int n) {
  std::vector<std::string> names;
  std::vector<std::vector<int>> edges;
  for (int i = 0; i < n; ++i) {
    names.push_back("v" + std::to_string(i));
    edges.push_back({i, (i + 1) % n});
    std::sort(edges.back().begin(), edges.back().end());
  }
  return simplicial(names, edges);
}

CellComplex disjoint_union(const CellComplex& a, const CellComplex& b) {
  std::vector<std::string> names;
  for (std::size_t v = 0; v < a.num_vertices(); ++v) names.push_back("a" + a.vertex_name(static_cast<int>(v)));
  for (std::size_t v = 0; v < b.num_vertices(); ++v) names.push_back("b" + b.vertex_name(static_cast<int>(v)));
  std::vector<std::pair<int, VertexSet>> cells;
  for (const auto& c : a.cells()) cells.emplace_back(c.dim, c.verts);
  const int shift = static_cast<int>(a.num_vertices());
  for (const auto& c : b.cells()) {
    VertexSet v = c.verts;
    for (int& x : v) x += shift;
    cells.emplace_back(c.dim, v);
  }
  return CellComplex::from_cells(names, std::move(cells));
}

}  // namespace

TEST_CASE("Betti numbers of small complexes") {
  CHECK(betti(full_simplex(0)).betti == std::vector<std::int64_t>{1});
  CHECK(betti(full_simplex(3)).betti == std::vector<std::int64_t>{1, 0, 0, 0});
  CHECK(betti(cycle(6)).betti == std::vector<std::int64_t>{1, 1});
  CHECK(betti(hollow_triangle()).betti == std::vector<std::int64_t>{1, 1});
  auto sphere = deletion(full_simplex(3), {*full_simplex(3).find({0, 1, 2, 3})});
  CHECK(betti(sphere).betti == std::vector<std::int64_t>{1, 0, 1});
  CHECK(betti(simplicial({"a", "b", "c"}, {{0}, {1}, {2}})).betti == std::vector<std::int64_t>{3});
}

TEST_CASE("torsion and coefficients on RP^2") {
  auto k = rp2();
  CHECK(k.f_vector() == std::vector<std::size_t>{6, 15, 10});
  auto z = betti(k);
  CHECK(z.betti == std::vector<std::int64_t>{1, 0, 0});
  CHECK(z.torsion == std::vector<std::vector<std::int64_t>>{{}, {2}, {}});
  auto z2 = betti(k, Coeff::Z2);
  CHECK(z2.betti == std::vector<std::int64_t>{1, 1, 1});
  CHECK(trimmed(oracle::betti_mod(as_sets(k), 2)) == trimmed(z2.betti));
  CHECK(trimmed(oracle::betti_mod(as_sets(k), 3)) == trimmed(z.betti));
}

TEST_CASE("rank and invariant factors") {
  BoundaryMatrix m;
  m.rows = 2;
  m.cols = {{{0, 2}}, {{1, 3}}};
  auto info = rank_info(m, Coeff::Z);
  CHECK(info.rank == 2);
  CHECK(info.torsion == std::vector<std::int64_t>{6});
  CHECK(rank_info(m, Coeff::Z2).rank == 1);

  const std::int64_t big = std::int64_t{1} << 40;
  BoundaryMatrix wide;
  wide.rows = 2;
  wide.cols = {{{0, big}, {1, big}}, {{0, big}, {1, -big}}};
  auto w = rank_info(wide, Coeff::Z);
  CHECK(w.rank == 2);
  // det = -2 big^2, gcd of entries = big
  CHECK(w.torsion == std::vector<std::int64_t>{big, 2 * big});

  BoundaryMatrix zero;
  zero.rows = 3;
  zero.cols = {{}, {}};
  CHECK(rank_info(zero, Coeff::Z).rank == 0);
}

TEST_CASE("boundary of a boundary vanishes") {
  check_boundary_squared(full_simplex(4));
  check_boundary_squared(rp2());
  check_boundary_squared(barycentric_subdivision(full_simplex(3)));
  check_boundary_squared(box_edge(complete_multipartite({1, 2, 2})).gc.complex);
  auto d2 = boundary_matrix(full_simplex(2), 2);
  REQUIRE(d2.cols.size() == 1);
  CHECK(d2.rows == 3);
  // faces in id order: {1,2} - {0,2} + {0,1}
  std::vector<std::int64_t> coeffs(3, 0);
  for (auto [row, c] : d2.cols[0]) coeffs[static_cast<std::size_t>(row)] = c;
  CHECK(coeffs == std::vector<std::int64_t>{1, -1, 1});
}

TEST_CASE("agreement with the field oracle") {
  std::vector<CellComplex> ks{full_simplex(3), rp2(), cycle(7), hollow_triangle(),
                              barycentric_subdivision(rp2()), box_edge(complete_multipartite({1, 2, 2})).gc.complex,
                              box_edge(complete_rgraph(4, 3)).gc.complex};
  for (const auto& k : ks) {
    auto z = betti(k);
    bool torsion_free = true;
    for (const auto& t : z.torsion) torsion_free = torsion_free && t.empty();
    if (torsion_free) CHECK(trimmed(oracle::betti_mod(as_sets(k), 3)) == trimmed(z.betti));
    CHECK(trimmed(oracle::betti_mod(as_sets(k), 2)) == trimmed(betti(k, Coeff::Z2).betti));
  }
}

TEST_CASE("subdivision invariance and additivity") {
  for (const auto& k : {rp2(), cycle(5), full_simplex(2)}) {
    CHECK(betti(barycentric_subdivision(k)) == betti(k));
  }
  auto u = disjoint_union(rp2(), cycle(4));
  auto a = betti(rp2()).betti;
  auto b = betti(cycle(4)).betti;
  auto s = betti(u).betti;
  b.resize(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(s[i] == a[i] + b[i]);
}

TEST_CASE("non-simplicial complexes are rejected") {
  auto hom = hom_complex(complete_multipartite({1, 2, 2}));
  CHECK(code_of([&] { betti(hom.gc.complex); }) == ErrorCode::InvalidParams);
}

TEST_CASE("box and Hom agree on the corpus") {
  for (const auto& [name, h] : corpus::graphs()) {
    CAPTURE(name);
    auto ag = homology_agreement(h);
    CHECK(ag.agree);
    CHECK(ag.box == ag.hom);
    CHECK(homology_agreement(h, Coeff::Z2).agree);
  }
  auto k122 = homology_agreement(complete_multipartite({1, 2, 2}));
  CHECK(k122.box.betti == std::vector<std::int64_t>{6, 0, 0, 0});
  CHECK(k122.hom.betti == std::vector<std::int64_t>{6, 0, 0, 0});
  CHECK(homology_agreement(complete_rgraph(3, 2)).hom.betti == std::vector<std::int64_t>{1, 1});
  CHECK(homology_agreement(complete_rgraph(3, 3)).box.betti == std::vector<std::int64_t>{6});
  auto k43 = homology_agreement(complete_rgraph(4, 3));
  CHECK(k43.box.betti == std::vector<std::int64_t>{1, 13});
  // the box of K_4^3 is a graph with 24 vertices and 36 edges
  CHECK(trimmed(oracle::betti_mod(as_sets(box_edge(complete_rgraph(4, 3)).gc.complex), 3)) ==
        std::vector<std::int64_t>{1, 13});
}

TEST_CASE("homology JSON") {
  auto j = nlohmann::json::parse(homology_json(betti(rp2())));
  CHECK(j["betti"] == nlohmann::json::array({1, 0, 0}));
  CHECK(j["torsion"][1] == nlohmann::json::array({2}));
}
