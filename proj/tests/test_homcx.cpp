#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "corpus.hpp"
#include "hcx/homcx.hpp"
#include "oracle.hpp"
#include "json.hpp"

using namespace hcx;

namespace {

std::set<oracle::Parts> as_set(const std::vector<MultiHom>& homs) {
  std::set<oracle::Parts> out;
  for (const auto& f : homs) out.insert(f.parts);
  return out;
}

std::vector<MultiHom> maximal(const std::vector<MultiHom>& homs) {
  std::vector<MultiHom> out;
  for (const auto& f : homs) {
    bool top = true;
    for (const auto& g : homs) {
      if (g != f && leq(f, g)) top = false;
    }
    if (top) out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("enumeration matches brute force on the corpus and random graphs") {
  for (const auto& [name, h] : corpus::graphs()) {
    CAPTURE(name);
    const auto homs = enumerate_multihoms(h);
    CHECK(as_set(homs) == oracle::multihoms(h));
    CHECK(homs.size() == as_set(homs).size());
    // sorted by (dim, parts)
    for (std::size_t i = 1; i < homs.size(); ++i) {
      const bool ordered = homs[i - 1].dim() < homs[i].dim() ||
                           (homs[i - 1].dim() == homs[i].dim() && homs[i - 1].parts < homs[i].parts);
      CHECK(ordered);
    }
  }
  for (std::uint32_t seed = 1; seed <= 15; ++seed) {
    auto h = oracle::random_rgraph(6, 3, 0.55, seed);
    CHECK(as_set(enumerate_multihoms(h)) == oracle::multihoms(h));
    auto g = oracle::random_rgraph(6, 2, 0.5, seed);
    CHECK(as_set(enumerate_multihoms(g)) == oracle::multihoms(g));
  }
}

TEST_CASE("enumeration examples") {
  auto k33 = enumerate_multihoms(complete_rgraph(3, 3));
  CHECK(k33.size() == 6);
  for (const auto& f : k33) CHECK(f.dim() == 0);
  CHECK(maximal(k33).size() == 6);

  auto k122 = enumerate_multihoms(complete_multipartite({1, 2, 2}));
  CHECK(k122.size() == 54);
  auto tops = maximal(k122);
  CHECK(tops.size() == 6);
  for (const auto& f : tops) CHECK(f.dim() == 2);

  auto empty = new_rgraph(3, {"a", "b", "c"}, {});
  CHECK(enumerate_multihoms(empty).empty());
}

TEST_CASE("every multihom generates and has disjoint parts") {
  for (const auto& [name, h] : corpus::graphs()) {
    for (const auto& f : enumerate_multihoms(h)) {
      CHECK(generates_complete(h, f.parts));
      std::set<int> seen;
      for (const auto& p : f.parts) {
        for (int v : p) CHECK(seen.insert(v).second);
      }
    }
  }
}

TEST_CASE("Hom complex examples") {
  auto a = hom_complex(complete_rgraph(3, 3));
  CHECK(a.gc.complex.size() == 6);
  CHECK(a.gc.complex.f_vector() == std::vector<std::size_t>{6});

  auto b = hom_complex(complete_multipartite({1, 2, 2}));
  CHECK(b.gc.complex.size() == 54);
  CHECK(b.gc.complex.facets().size() == 6);
  for (int c : b.gc.complex.facets()) {
    CHECK(b.gc.complex.cell(c).dim == 2);
    CHECK(b.gc.complex.cell(c).facets.size() == 4);  // a square
  }
  b.gc.complex.check_invariants();

  auto c = hom_complex(complete_rgraph(3, 2));
  CHECK(c.gc.complex.f_vector() == std::vector<std::size_t>{6, 6});
  for (int v = 0; v < 6; ++v) CHECK(c.gc.complex.cell(v).cofacets.size() == 2);
  // connected: walk the cycle
  std::set<int> reached{0};
  std::vector<int> todo{0};
  while (!todo.empty()) {
    const int v = todo.back();
    todo.pop_back();
    for (int e : c.gc.complex.cell(v).cofacets) {
      for (int w : c.gc.complex.cell(e).facets) {
        if (reached.insert(w).second) todo.push_back(w);
      }
    }
  }
  CHECK(reached.size() == 6);
}

TEST_CASE("face relation is componentwise inclusion and covers raise dim by one") {
  for (const auto& [name, h] : corpus::small_graphs()) {
    CAPTURE(name);
    auto hc = hom_complex(h);
    const auto& k = hc.gc.complex;
    k.check_invariants();
    for (std::size_t a = 0; a < k.size(); ++a) {
      CHECK(hc.cell_of.at(hc.payload[a]) == static_cast<int>(a));
      CHECK(k.cell(static_cast<int>(a)).dim == hc.payload[a].dim());
      for (int f : k.cell(static_cast<int>(a)).facets) {
        CHECK(leq(hc.payload[static_cast<std::size_t>(f)], hc.payload[a]));
        CHECK(k.cell(f).dim + 1 == k.cell(static_cast<int>(a)).dim);
      }
    }
    if (k.size() < 400) {
      for (std::size_t a = 0; a < k.size(); ++a) {
        for (std::size_t b = 0; b < k.size(); ++b) {
          CHECK(k.is_face(static_cast<int>(a), static_cast<int>(b)) == leq(hc.payload[a], hc.payload[b]));
        }
      }
    }
  }
}

TEST_CASE("minimal elements are the edge tuples") {
  for (const auto& [name, h] : corpus::graphs()) {
    auto hc = hom_complex(h);
    std::set<oracle::Tuple> minimal;
    for (const auto& f : hc.payload) {
      if (f.dim() == 0) {
        oracle::Tuple t;
        for (const auto& p : f.parts) t.push_back(p[0]);
        minimal.insert(t);
      }
    }
    auto ts = oracle::tuples(h);
    CHECK(minimal == std::set<oracle::Tuple>(ts.begin(), ts.end()));
    CHECK(hc.tuples == ts);
  }
}

TEST_CASE("S_r action on multihoms") {
  auto h = complete_multipartite({1, 2, 2});
  auto homs = enumerate_multihoms(h);
  const auto all = as_set(homs);
  const auto group = symmetric_group(3);
  CHECK(group.size() == 6);
  CHECK(group[0] == Perm{0, 1, 2});
  for (const auto& f : homs) {
    CHECK(act(f, group[0]) == f);
    for (const auto& s : group) {
      CHECK(all.count(act(f, s).parts));
      for (const auto& t : group) {
        // right action: f(s t) = (f s) t, where (s t)(j) = s(t(j))
        Perm st(3);
        for (std::size_t j = 0; j < 3; ++j) st[j] = s[static_cast<std::size_t>(t[j])];
        CHECK(act(f, st) == act(act(f, s), t));
      }
    }
  }
  auto id = [&](const char* n) { return h.index_of(n); };
  MultiHom f{{{id("p0_0")}, {id("p1_0"), id("p1_1")}, {id("p2_0"), id("p2_1")}}};
  MultiHom swapped = act(f, Perm{0, 2, 1});
  CHECK(swapped.parts == std::vector<VertexSet>{{id("p0_0")}, {id("p2_0"), id("p2_1")}, {id("p1_0"), id("p1_1")}});
  CHECK(all.count(swapped.parts));
  // all parts equal is impossible for a multihom, but the action itself fixes such tuples
  MultiHom same{{{1}, {1}, {1}}};
  for (const auto& s : group) CHECK(act(same, s) == same);

  auto hc = hom_complex(h);
  check_action(hc.gc.complex, hc.gc.action);
  auto maps = hc.gc.action.cell_maps(hc.gc.complex);
  for (std::size_t g = 0; g < group.size(); ++g) {
    for (std::size_t c = 0; c < hc.payload.size(); ++c) {
      CHECK(hc.payload[static_cast<std::size_t>(maps[g][c])] == act(hc.payload[c], group[g]));
    }
  }
}

TEST_CASE("multihom JSON") {
  auto h = complete_multipartite({1, 1, 2});
  auto homs = enumerate_multihoms(h);
  auto j = nlohmann::json::parse(multihom_json(h, homs.back()));
  CHECK(j["parts"].size() == 3);
  CHECK(j["parts"][0][0].is_string());
}

TEST_CASE("size guard") {
  Limits tight;
  tight.max_cells = 10;
  CHECK_THROWS_AS(enumerate_multihoms(complete_multipartite({1, 2, 2}), tight), Error);
}
