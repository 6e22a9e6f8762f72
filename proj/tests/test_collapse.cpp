#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "corpus.hpp"
#include "hcx/collapse.hpp"
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

int id_of(const CellComplex& k, std::initializer_list<int> verts) {
  auto id = k.find(VertexSet(verts));
  REQUIRE(id);
  return *id;
}

GComplex trivial(const CellComplex& k) { return {k, GroupAction::trivial(k.num_vertices())}; }

/// Betti numbers over F_3 via the dense oracle, from the vertex-name sets.
std::vector<std::int64_t> oracle_betti(const CellComplex& k) {
  std::map<std::string, int> index;
  for (std::size_t v = 0; v < k.num_vertices(); ++v) index[k.vertex_name(static_cast<int>(v))] = static_cast<int>(v);
  oracle::Simplicial s;
  for (const auto& names : corpus::name_sets(k)) {
    std::vector<int> verts;
    for (const auto& n : names) verts.push_back(index.at(n));
    std::sort(verts.begin(), verts.end());
    s.insert(verts);
  }
  auto b = oracle::betti_mod(s, 3);
  while (!b.empty() && b.back() == 0) b.pop_back();
  return b;
}

/// Rebuilds a complex from names alone so that replay can start from it.
CellComplex rebuild(const CellComplex& k) {
  std::vector<std::string> names;
  for (std::size_t v = 0; v < k.num_vertices(); ++v) names.push_back(k.vertex_name(static_cast<int>(v)));
  std::vector<std::pair<int, VertexSet>> cells;
  for (const auto& c : k.cells()) cells.emplace_back(c.dim, c.verts);
  return CellComplex::from_cells(names, std::move(cells));
}

}  // namespace

TEST_CASE("elementary G-collapse examples") {
  auto tri = full_simplex(2);
  auto a = elementary_g_collapse(trivial(tri), id_of(tri, {0, 1}));
  CHECK(a.complex.size() == 5);
  CHECK_FALSE(a.complex.find({0, 1}));

  auto two = simplicial({"a", "b", "c", "d"}, {{0, 1}, {2, 3}});
  GComplex swapped{two, GroupAction({"e", "s"}, {{0, 1, 2, 3}, {2, 3, 0, 1}})};
  auto b = elementary_g_collapse(swapped, id_of(two, {0}));
  CHECK(b.complex.f_vector() == std::vector<std::size_t>{2});
  CHECK(corpus::name_sets(b.complex) == std::set<std::vector<std::string>>{{"b"}, {"d"}});
  check_action(b.complex, b.action);

  auto edge = full_simplex(1);
  GComplex flip{edge, GroupAction({"e", "s"}, {{0, 1}, {1, 0}})};
  CHECK(code_of([&] { elementary_g_collapse(flip, id_of(edge, {0})); }) == ErrorCode::OrbitNotIndependentlyFree);

  auto path = simplicial({"a", "b", "c"}, {{0, 1}, {1, 2}});
  CHECK(code_of([&] { elementary_g_collapse(trivial(path), id_of(path, {1})); }) == ErrorCode::NotFree);
  CHECK(code_of([&] { elementary_g_collapse(trivial(tri), id_of(tri, {0})); }) == ErrorCode::WrongCodimension);
  auto hollow = hollow_triangle();
  CHECK(code_of([&] { elementary_g_collapse(trivial(hollow), id_of(hollow, {0, 1})); }) == ErrorCode::NotFree);
}

TEST_CASE("apply_step validates every step") {
  auto tri = full_simplex(2);
  WorkingComplex w(trivial(tri));
  const std::uint64_t before = w.fingerprint();

  CollapseStep wrong_dim{StepDir::Collapse, 0, {{0}}, {{0, 1, 2}}};
  CHECK(code_of([&] { apply_step(w, wrong_dim); }) == ErrorCode::WrongCodimension);
  CollapseStep deep{StepDir::Collapse, 0, {{0}}, {{0, 1}}};
  CHECK(code_of([&] { apply_step(w, deep); }) == ErrorCode::WrongCodimension);
  CollapseStep missing{StepDir::Collapse, 1, {{0, 3}}, {{0, 1, 3}}};
  CHECK(code_of([&] { apply_step(w, missing); }) == ErrorCode::VerificationFailed);
  CHECK(w.fingerprint() == before);

  CollapseStep ok{StepDir::Collapse, 1, {{1, 2}}, {{0, 1, 2}}};
  apply_step(w, ok);
  CHECK(w.size() == 5);
  CollapseStep back{StepDir::Expand, 1, {{1, 2}}, {{0, 1, 2}}};
  apply_step(w, back);
  CHECK(w.size() == 7);
  CHECK(w.fingerprint() == before);

  auto path = simplicial({"a", "b", "c"}, {{0, 1}, {1, 2}});
  WorkingComplex wp(trivial(path));
  CollapseStep not_free{StepDir::Collapse, 0, {{1}}, {{0, 1}}};
  CHECK(code_of([&] { apply_step(wp, not_free); }) == ErrorCode::NotFree);

  // a step listing only half of an orbit
  auto two = simplicial({"a", "b", "c", "d"}, {{0, 1}, {2, 3}});
  WorkingComplex w2(GComplex{two, GroupAction({"e", "s"}, {{0, 1, 2, 3}, {2, 3, 0, 1}})});
  CollapseStep half{StepDir::Collapse, 0, {{0}}, {{0, 1}}};
  CHECK(code_of([&] { apply_step(w2, half); }) == ErrorCode::VerificationFailed);
  CollapseStep full{StepDir::Collapse, 0, {{0}, {2}}, {{0, 1}, {2, 3}}};
  apply_step(w2, full);
  CHECK(w2.size() == 2);
  // the flip on one edge pairs both endpoints with the same edge
  auto edge = full_simplex(1);
  WorkingComplex w3(GComplex{edge, GroupAction({"e", "s"}, {{0, 1}, {1, 0}})});
  CollapseStep shared{StepDir::Collapse, 0, {{0}, {1}}, {{0, 1}, {0, 1}}};
  CHECK(code_of([&] { apply_step(w3, shared); }) == ErrorCode::OrbitNotIndependentlyFree);
}

TEST_CASE("fingerprints depend only on the cell set") {
  auto tri = full_simplex(2);
  WorkingComplex a(trivial(tri));
  WorkingComplex b(trivial(simplicial({"a", "b", "c"}, {{1, 2}, {0, 1, 2}})));
  CHECK(a.fingerprint() == b.fingerprint());
  WorkingComplex c(trivial(hollow_triangle()));
  CHECK(a.fingerprint() != c.fingerprint());
  CollapseStep step{StepDir::Collapse, 1, {{0, 1}}, {{0, 1, 2}}};
  apply_step(a, step);
  CHECK(a.fingerprint() != b.fingerprint());
}

TEST_CASE("matching_to_collapse") {
  SUBCASE("empty matching") {
    auto k = hollow_triangle();
    Matching m;
    for (std::size_t c = 0; c < k.size(); ++c) m.critical.push_back(static_cast<int>(c));
    auto d = matching_to_collapse(trivial(k), m);
    CHECK(d.certificate.steps.empty());
    CHECK(same_cells(d.endpoint.complex, k));
  }
  SUBCASE("collapsing a triangle to a vertex") {
    auto k = full_simplex(2);
    Matching m;
    m.sigma = {id_of(k, {1}), id_of(k, {2}), id_of(k, {1, 2})};
    m.mu = {id_of(k, {0, 1}), id_of(k, {0, 2}), id_of(k, {0, 1, 2})};
    m.critical = {id_of(k, {0})};
    auto d = matching_to_collapse(trivial(k), m);
    CHECK(d.endpoint.complex.size() == 1);
    CHECK(d.certificate.removed_cells() == 6);
    CHECK(d.certificate.steps.size() == 3);
  }
  SUBCASE("cyclic matching gets stuck") {
    auto k = hollow_triangle();
    Matching m;
    m.sigma = {id_of(k, {0}), id_of(k, {1}), id_of(k, {2})};
    m.mu = {id_of(k, {0, 1}), id_of(k, {1, 2}), id_of(k, {0, 2})};
    CHECK(code_of([&] { matching_to_collapse(trivial(k), m); }) == ErrorCode::Stuck);
  }
  SUBCASE("a critical set that disagrees with the collapse") {
    auto k = full_simplex(1);
    Matching m;
    m.sigma = {id_of(k, {1})};
    m.mu = {id_of(k, {0, 1})};
    m.critical = {id_of(k, {1})};
    CHECK(code_of([&] { matching_to_collapse(trivial(k), m); }) == ErrorCode::VerificationFailed);
  }
}

TEST_CASE("collapse of sd B_edge onto the image on the corpus") {
  for (const auto& [name, h] : corpus::graphs()) {
    CAPTURE(name);
    auto mb = build_matching(h);
    auto d = matching_to_collapse(mb.sd, mb.matching);
    CHECK(d.certificate.removed_cells() == mb.matching.sigma.size() + mb.matching.mu.size());
    CHECK(d.endpoint.complex.size() == mb.matching.critical.size());
    std::set<std::vector<std::string>> crit;
    for (int c : mb.matching.critical) {
      auto names = mb.sd.complex.label_names(c);
      std::sort(names.begin(), names.end());
      crit.insert(names);
    }
    CHECK(corpus::name_sets(d.endpoint.complex) == crit);
    check_action(d.endpoint.complex, d.endpoint.action);
    for (const auto& s : d.certificate.steps) CHECK(s.dir == StepDir::Collapse);
    if (mb.sd.complex.size() < 3000) CHECK(oracle_betti(d.endpoint.complex) == oracle_betti(mb.sd.complex));
    auto end = replay(mb.sd, d.certificate);
    CHECK(end.fingerprint() == d.certificate.end_fingerprint);
  }
}

TEST_CASE("stellar deformation examples") {
  auto e = full_simplex(1);
  auto a = stellar_deformation_certificate(trivial(e), id_of(e, {0, 1}));
  CHECK(a.endpoint.complex.f_vector() == std::vector<std::size_t>{3, 2});
  bool expanded = false;
  for (const auto& s : a.certificate.steps) expanded = expanded || s.dir == StepDir::Expand;
  CHECK(expanded);

  auto h = hollow_triangle();
  auto b = stellar_deformation_certificate({h, corpus::rotation3()}, id_of(h, {0, 1}));
  CHECK(b.endpoint.complex.f_vector() == std::vector<std::size_t>{6, 6});
  CHECK(same_cells(b.endpoint.complex, stellar_g_subdivision({h, corpus::rotation3()}, id_of(h, {0, 1})).complex));
  CHECK(oracle_betti(b.endpoint.complex) == std::vector<std::int64_t>{1, 1});

  auto t = full_simplex(2);
  for (std::size_t c = 0; c < t.size(); ++c) {
    auto d = stellar_deformation_certificate(trivial(t), static_cast<int>(c));
    CHECK(oracle_betti(d.endpoint.complex) == std::vector<std::int64_t>{1});
    auto end = replay(trivial(t), d.certificate);
    CHECK(end.size() == d.endpoint.complex.size());
  }

  auto edge = full_simplex(1);
  GComplex flip{edge, GroupAction({"e", "s"}, {{0, 1}, {1, 0}})};
  CHECK(code_of([&] { stellar_deformation_certificate(flip, id_of(edge, {0})); }) == ErrorCode::OrbitCofaceClash);
}

TEST_CASE("subdivision deformation endpoints") {
  auto points = simplicial({"a", "b", "c"}, {{0}, {1}, {2}});
  auto p = sd_deformation(trivial(points));
  CHECK(same_cells(p.endpoint.complex, barycentric_subdivision(points)));

  auto t = full_simplex(2);
  auto a = sd_deformation(trivial(t));
  CHECK(a.endpoint.complex.f_vector() == std::vector<std::size_t>{7, 12, 6});
  CHECK(same_cells(a.endpoint.complex, barycentric_subdivision(t)));

  auto h = hollow_triangle();
  auto b = sd_deformation({h, corpus::rotation3()});
  CHECK(same_cells(b.endpoint.complex, barycentric_subdivision(h)));
  check_action(b.endpoint.complex, b.endpoint.action);
  CHECK(oracle_betti(b.endpoint.complex) == std::vector<std::int64_t>{1, 1});

  auto box = box_edge(complete_multipartite({1, 2, 2}));
  auto c = sd_deformation(box.gc);
  CHECK(same_cells(c.endpoint.complex, barycentric_subdivision(box.gc.complex)));
  check_action(c.endpoint.complex, c.endpoint.action);

  auto hom = hom_complex(complete_rgraph(3, 2));
  auto d = sd_deformation(hom.gc);
  CHECK(d.endpoint.complex.f_vector() == std::vector<std::size_t>{12, 12});
}

TEST_CASE("certificates: replay, reversal, JSON round trip") {
  auto h = hollow_triangle();
  const GComplex start{h, corpus::rotation3()};
  auto d = sd_deformation(start);
  const auto& cert = d.certificate;
  CHECK(cert.fingerprints.size() == cert.steps.size());
  CHECK(cert.start_cells == h.size());
  CHECK(cert.end_cells == d.endpoint.complex.size());

  auto end = replay(start, cert);
  CHECK(end.fingerprint() == cert.end_fingerprint);
  CHECK(end.size() == cert.end_cells);

  auto back = certificate_from_json(certificate_json(cert));
  CHECK(certificate_json(back) == certificate_json(cert));
  CHECK(replay(start, back).fingerprint() == cert.end_fingerprint);

  auto rev = reversed(cert);
  CHECK(rev.start_fingerprint == cert.end_fingerprint);
  CHECK(rev.end_fingerprint == cert.start_fingerprint);
  auto home = replay({rebuild(d.endpoint.complex), d.endpoint.action}, rev);
  CHECK(home.fingerprint() == cert.start_fingerprint);
  CHECK(home.size() == h.size());

  // deterministic output
  CHECK(certificate_json(sd_deformation(start).certificate) == certificate_json(cert));

  SUBCASE("tampered step") {
    auto bad = cert;
    REQUIRE(!bad.steps.empty());
    std::swap(bad.steps.front(), bad.steps.back());
    CHECK_THROWS_AS(replay(start, bad), Error);
  }
  SUBCASE("tampered fingerprint") {
    auto bad = cert;
    bad.fingerprints.back() ^= 1;
    CHECK(code_of([&] { replay(start, bad); }) == ErrorCode::VerificationFailed);
  }
  SUBCASE("wrong start") {
    CHECK(code_of([&] { replay(trivial(full_simplex(2)), cert); }) == ErrorCode::VerificationFailed);
  }
  SUBCASE("malformed JSON") {
    CHECK(code_of([] { certificate_from_json("{\"steps\": 3}"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { certificate_from_json("nope"); }) == ErrorCode::ParseError);
  }
}

TEST_CASE("main theorem certificate") {
  for (const auto& [name, h] : corpus::graphs()) {
    CAPTURE(name);
    auto t = main_theorem_certificate(h);
    auto homs = enumerate_multihoms(h);
    auto chains = oracle::count_chains(homs.size(), [&](std::size_t x, std::size_t y) {
      return x != y && leq(homs[x], homs[y]);
    });
    CHECK(t.iso_cells == chains);
    CHECK(t.hom_to_sd.endpoint.complex.size() == chains);
    CHECK(t.box_collapse.endpoint.complex.size() == chains);
    auto j = nlohmann::json::parse(theorem_json(h, t));
    CHECK(j["stages"].size() == 4);
    CHECK(j["r"] == h.r());
  }
  for (auto h : {complete_rgraph(3, 3), complete_multipartite({1, 1, 2})}) {
    auto t = main_theorem_certificate(h);
    CHECK(t.box_collapse.certificate.steps.empty());
    CHECK(t.matching.sigma.empty());
  }
  CHECK_FALSE(main_theorem_certificate(complete_multipartite({1, 1, 2})).hom_to_sd.certificate.steps.empty());
  auto t = main_theorem_certificate(complete_multipartite({1, 2, 2}));
  CHECK_FALSE(t.hom_to_sd.certificate.steps.empty());
  CHECK_FALSE(t.box_collapse.certificate.steps.empty());
  CHECK_FALSE(t.box_to_sd.certificate.steps.empty());
}
