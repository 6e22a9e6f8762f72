#include "hcx/morse.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace hcx {

const char* to_string(ChainTag tag) {
  switch (tag) {
    case ChainTag::Critical: return "critical";
    case ChainTag::Sigma1: return "S1";
    case ChainTag::Sigma2: return "S2";
    case ChainTag::Upper: return "upper";
  }
  return "?";
}

namespace {

int meet(const BoxComplex& box, int a, int b) {
  const auto& va = box.gc.complex.cell(a).verts;
  const auto& vb = box.gc.complex.cell(b).verts;
  VertexSet common;
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
  auto id = box.gc.complex.find(common);
  if (!id) throw Error(ErrorCode::MatchingInvalid, "intersection of simplices is not a simplex");
  return *id;
}

[[noreturn]] void invalid(const CellComplex& k, int cell, const std::string& why) {
  throw Error(ErrorCode::MatchingInvalid, why + " at " + k.label(cell));
}

}  // namespace

ChainClass classify_chain(const BoxComplex& box, const std::vector<int>& chain) {
  ChainClass out;
  const int n = static_cast<int>(chain.size());
  int l = 0;
  while (l < n && ip_fixed(box, chain[static_cast<std::size_t>(l)])) ++l;
  if (l == n) return out;
  const int top = box.ip[static_cast<std::size_t>(chain[static_cast<std::size_t>(l)])];
  int r = 0;
  while (l + r + 1 < n && box.gc.complex.is_face(chain[static_cast<std::size_t>(l + r + 1)], top)) ++r;
  out.l = l;
  out.r = r;
  const auto in_chain = [&](int c) { return std::find(chain.begin(), chain.end(), c) != chain.end(); };
  if (l + r == n - 1) {
    out.tag = in_chain(top) ? ChainTag::Upper : ChainTag::Sigma1;
  } else {
    const int inserted = meet(box, top, chain[static_cast<std::size_t>(l + r + 1)]);
    out.tag = in_chain(inserted) ? ChainTag::Upper : ChainTag::Sigma2;
  }
  return out;
}

std::vector<int> mu_chain(const BoxComplex& box, const std::vector<int>& chain) {
  const ChainClass cls = classify_chain(box, chain);
  const int top = cls.l >= 0 ? box.ip[static_cast<std::size_t>(chain[static_cast<std::size_t>(cls.l)])] : -1;
  int inserted = -1;
  if (cls.tag == ChainTag::Sigma1) {
    inserted = top;
  } else if (cls.tag == ChainTag::Sigma2) {
    inserted = meet(box, top, chain[static_cast<std::size_t>(cls.l + cls.r + 1)]);
  } else {
    throw Error(ErrorCode::NotInSigma, std::string("chain is ") + to_string(cls.tag));
  }
  std::vector<int> out = chain;
  out.push_back(inserted);
  std::sort(out.begin(), out.end());
  return out;
}

bool verify_acyclic(const CellComplex& k, const Matching& m) {
  std::vector<int> pos(k.size(), -1);
  for (std::size_t i = 0; i < m.sigma.size(); ++i) pos[static_cast<std::size_t>(m.sigma[i])] = static_cast<int>(i);
  const std::size_t n = m.sigma.size();
  std::vector<std::vector<int>> succ(n);
  std::vector<int> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int y : k.cell(m.mu[i]).facets) {
      const int j = pos[static_cast<std::size_t>(y)];
      if (j < 0 || static_cast<std::size_t>(j) == i) continue;
      succ[i].push_back(j);
      ++indegree[static_cast<std::size_t>(j)];
    }
  }
  std::vector<int> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) queue.push_back(static_cast<int>(i));
  }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    for (int j : succ[static_cast<std::size_t>(queue[q])]) {
      if (--indegree[static_cast<std::size_t>(j)] == 0) queue.push_back(j);
    }
  }
  return queue.size() == n;
}

void verify_matching(const GComplex& gk, const Matching& m,
                     const std::optional<std::vector<int>>& expected_critical) {
  const CellComplex& k = gk.complex;
  if (m.sigma.size() != m.mu.size()) {
    throw Error(ErrorCode::MatchingInvalid, "sigma and mu differ in length");
  }
  enum Role { None, InSigma, InImage, InCritical };
  std::vector<Role> role(k.size(), None);
  std::vector<int> partner(k.size(), -1);
  auto claim = [&](int c, Role r) {
    if (c < 0 || static_cast<std::size_t>(c) >= k.size()) {
      throw Error(ErrorCode::MatchingInvalid, "cell id out of range");
    }
    if (role[static_cast<std::size_t>(c)] != None) invalid(k, c, "cell used twice (partition or injectivity fails)");
    role[static_cast<std::size_t>(c)] = r;
  };
  for (std::size_t i = 0; i < m.sigma.size(); ++i) {
    claim(m.sigma[i], InSigma);
    partner[static_cast<std::size_t>(m.sigma[i])] = m.mu[i];
  }
  for (int c : m.mu) claim(c, InImage);
  for (int c : m.critical) claim(c, InCritical);
  for (std::size_t c = 0; c < k.size(); ++c) {
    if (role[c] == None) invalid(k, static_cast<int>(c), "cell neither matched nor critical");
  }
  for (std::size_t i = 0; i < m.sigma.size(); ++i) {
    const auto& facets = k.cell(m.mu[i]).facets;
    if (!std::binary_search(facets.begin(), facets.end(), m.sigma[i])) {
      invalid(k, m.sigma[i], "mu(x) does not cover x");
    }
  }
  if (expected_critical) {
    std::vector<int> got = m.critical;
    std::vector<int> want = *expected_critical;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    if (got != want) {
      std::vector<int> diff;
      std::set_symmetric_difference(got.begin(), got.end(), want.begin(), want.end(), std::back_inserter(diff));
      invalid(k, diff.front(), "critical set differs from the expected subcomplex");
    }
  }
  const auto maps = gk.action.cell_maps(k);
  for (const auto& g : maps) {
    for (int x : m.sigma) {
      const int xg = g[static_cast<std::size_t>(x)];
      if (role[static_cast<std::size_t>(xg)] != InSigma) invalid(k, x, "sigma is not closed under the group");
      if (partner[static_cast<std::size_t>(xg)] != g[static_cast<std::size_t>(partner[static_cast<std::size_t>(x)])]) {
        invalid(k, x, "mu is not equivariant");
      }
    }
  }
  if (!verify_acyclic(k, m)) throw Error(ErrorCode::MatchingInvalid, "matching has a directed cycle");
}

Matching construct_matching(const BoxComplex& box, const GComplex& sd, std::vector<ChainClass>* classes) {
  Matching m;
  if (classes) classes->assign(sd.complex.size(), {});
  for (std::size_t c = 0; c < sd.complex.size(); ++c) {
    const auto& chain = sd.complex.cell(static_cast<int>(c)).verts;
    const ChainClass cls = classify_chain(box, chain);
    if (classes) (*classes)[c] = cls;
    if (cls.tag == ChainTag::Critical) {
      m.critical.push_back(static_cast<int>(c));
    } else if (cls.tag == ChainTag::Sigma1 || cls.tag == ChainTag::Sigma2) {
      auto image = sd.complex.find(mu_chain(box, chain));
      if (!image) invalid(sd.complex, static_cast<int>(c), "mu(F) is not a chain of the subdivision");
      m.sigma.push_back(static_cast<int>(c));
      m.mu.push_back(*image);
      m.tags.push_back(cls.tag);
    }
  }
  return m;
}

std::vector<int> image_chains(const RGraph& h, const BoxComplex& box, const CellComplex& sd,
                              const Limits& limits) {
  std::set<int> images;
  for (const auto& f : enumerate_multihoms(h, limits)) images.insert(map_i(box, f));
  std::vector<int> out;
  for (std::size_t c = 0; c < sd.size(); ++c) {
    const auto& chain = sd.cell(static_cast<int>(c)).verts;
    if (std::all_of(chain.begin(), chain.end(), [&](int x) { return images.count(x) > 0; })) {
      out.push_back(static_cast<int>(c));
    }
  }
  return out;
}

MorseBuild build_matching(const RGraph& h, const Limits& limits) {
  MorseBuild out;
  out.box = box_edge(h, limits);
  out.sd.complex = barycentric_subdivision(out.box.gc.complex, limits);
  out.sd.action = out.box.gc.action.on_cells(out.box.gc.complex);
  out.matching = construct_matching(out.box, out.sd, &out.classes);
  out.image_chains = image_chains(h, out.box, out.sd.complex, limits);
  verify_matching(out.sd, out.matching, out.image_chains);
  for (std::size_t i = 0; i < out.matching.mu.size(); ++i) {
    const int image = out.matching.mu[i];
    if (out.classes[static_cast<std::size_t>(image)].tag != ChainTag::Upper) {
      invalid(out.sd.complex, image, "mu(F) is not classified as an upper chain");
    }
  }
  return out;
}

std::string matching_json(const GComplex& sd, const Matching& m) {
  nlohmann::ordered_json sigma = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.sigma.size(); ++i) {
    nlohmann::ordered_json e;
    e["chain"] = sd.complex.cell(m.sigma[i]).verts;
    e["mu"] = sd.complex.cell(m.mu[i]).verts;
    e["class"] = i < m.tags.size() ? to_string(m.tags[i]) : "S";
    sigma.push_back(std::move(e));
  }
  nlohmann::ordered_json critical = nlohmann::ordered_json::array();
  for (int c : m.critical) critical.push_back(sd.complex.cell(c).verts);
  nlohmann::ordered_json j;
  j["sigma"] = std::move(sigma);
  j["critical"] = std::move(critical);
  return j.dump();
}

}  // namespace hcx
