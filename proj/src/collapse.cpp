#include "hcx/collapse.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hcx {

namespace {

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::VerificationFailed, what); }

}  // namespace

// ---------------------------------------------------------------------------
// WorkingComplex

WorkingComplex::WorkingComplex(std::vector<std::string> names, std::vector<VertexSet> apex_of,
                               std::vector<std::string> element_names,
                               std::vector<std::vector<int>> action)
    : names_(std::move(names)),
      apex_of_(std::move(apex_of)),
      elements_(std::move(element_names)),
      action_(std::move(action)) {
  if (apex_of_.size() != names_.size()) fail("apex table and vertex pool differ in size");
  if (action_.empty() || elements_.size() != action_.size()) fail("group needs one name per element");
  for (const auto& m : action_) {
    if (m.size() != names_.size()) fail("action does not cover the vertex pool");
    std::vector<int> sorted = m;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t v = 0; v < sorted.size(); ++v) {
      if (sorted[v] != static_cast<int>(v)) fail("action is not a permutation of the pool");
    }
  }
  for (std::size_t v = 0; v < apex_of_.size(); ++v) {
    if (!apex_of_[v].empty()) apex_index_.emplace(apex_of_[v], static_cast<int>(v));
  }
  incident_.resize(names_.size());
}

WorkingComplex::WorkingComplex(const GComplex& start)
    : names_(start.complex.vertex_names()), apex_of_(start.complex.num_vertices()) {
  for (std::size_t g = 0; g < start.action.size(); ++g) {
    elements_.push_back(start.action.element_name(static_cast<int>(g)));
    action_.push_back(start.action.vertex_map(static_cast<int>(g)));
  }
  if (action_.empty()) {
    elements_.push_back("e");
    std::vector<int> id(names_.size());
    for (std::size_t v = 0; v < id.size(); ++v) id[v] = static_cast<int>(v);
    action_.push_back(std::move(id));
  }
  incident_.resize(names_.size());
  for (const auto& c : start.complex.cells()) add_cell(c.dim, c.verts);
}

int WorkingComplex::vertex_of_apex(const VertexSet& cell_verts) const {
  auto it = apex_index_.find(cell_verts);
  return it == apex_index_.end() ? -1 : it->second;
}

std::string WorkingComplex::label(const VertexSet& verts) const {
  std::string s = "{";
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (i) s += ",";
    s += names_.at(static_cast<std::size_t>(verts[i]));
  }
  return s + "}";
}

VertexSet WorkingComplex::act(int g, const VertexSet& verts) const {
  const auto& m = action_.at(static_cast<std::size_t>(g));
  VertexSet out;
  out.reserve(verts.size());
  for (int v : verts) out.push_back(m.at(static_cast<std::size_t>(v)));
  std::sort(out.begin(), out.end());
  return out;
}

int WorkingComplex::add_apex(const VertexSet& cell_verts) {
  if (int v = vertex_of_apex(cell_verts); v >= 0) return v;
  std::vector<VertexSet> images;
  for (std::size_t g = 0; g < action_.size(); ++g) images.push_back(act(static_cast<int>(g), cell_verts));
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  for (const auto& img : images) {
    if (vertex_of_apex(img) >= 0) fail("orbit partially subdivided");
  }
  const std::size_t first = names_.size();
  for (const auto& img : images) {
    apex_index_.emplace(img, static_cast<int>(names_.size()));
    names_.push_back("bary" + label(img));
    apex_of_.push_back(img);
    incident_.emplace_back();
  }
  for (std::size_t g = 0; g < action_.size(); ++g) {
    for (std::size_t v = first; v < names_.size(); ++v) {
      action_[g].push_back(vertex_of_apex(act(static_cast<int>(g), apex_of_[v])));
    }
  }
  return vertex_of_apex(cell_verts);
}

std::optional<int> WorkingComplex::find(const VertexSet& verts) const {
  auto it = index_.find(verts);
  if (it == index_.end() || !slots_[static_cast<std::size_t>(it->second)].alive) return std::nullopt;
  return it->second;
}

int WorkingComplex::add_cell(int dim, VertexSet verts) {
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  if (verts.empty() || dim < 0) fail("cell without vertices");
  for (int v : verts) {
    if (v < 0 || static_cast<std::size_t>(v) >= names_.size()) fail("cell vertex outside the pool");
  }
  if (find(verts)) fail("cell " + label(verts) + " already present");

  std::vector<int> facets;
  if (dim == 0) {
    if (verts.size() != 1) fail("0-cell with several vertices");
  } else if (verts.size() == static_cast<std::size_t>(dim) + 1) {
    VertexSet face(verts.size() - 1);
    for (std::size_t skip = 0; skip < verts.size(); ++skip) {
      std::size_t w = 0;
      for (std::size_t i = 0; i < verts.size(); ++i) {
        if (i != skip) face[w++] = verts[i];
      }
      auto f = find(face);
      if (!f || slots_[static_cast<std::size_t>(*f)].dim != dim - 1) {
        fail("boundary of " + label(verts) + " is missing " + label(face));
      }
      facets.push_back(*f);
    }
  } else {
    std::set<int> candidates;
    for (int v : verts) {
      for (int other : incident_[static_cast<std::size_t>(v)]) {
        const Slot& o = slots_[static_cast<std::size_t>(other)];
        if (o.alive && o.dim == dim - 1 && is_subset(o.verts, verts)) candidates.insert(other);
      }
    }
    facets.assign(candidates.begin(), candidates.end());
    VertexSet covered;
    for (int f : facets) {
      const auto& fv = slots_[static_cast<std::size_t>(f)].verts;
      covered.insert(covered.end(), fv.begin(), fv.end());
    }
    std::sort(covered.begin(), covered.end());
    covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
    if (facets.size() < 2 || covered != verts) fail("boundary of " + label(verts) + " is incomplete");
  }
  for (int v : verts) {
    if (dim > 0 && !find(VertexSet{v})) fail("vertex " + names_[static_cast<std::size_t>(v)] + " is not a 0-cell");
  }
  std::sort(facets.begin(), facets.end());

  int slot;
  auto it = index_.find(verts);
  if (it != index_.end()) {
    slot = it->second;
  } else {
    slot = static_cast<int>(slots_.size());
    slots_.emplace_back();
    index_.emplace(verts, slot);
    for (int v : verts) incident_[static_cast<std::size_t>(v)].push_back(slot);
  }
  Slot& s = slots_[static_cast<std::size_t>(slot)];
  std::vector<std::string_view> sorted_names;
  for (int v : verts) sorted_names.emplace_back(names_[static_cast<std::size_t>(v)]);
  std::sort(sorted_names.begin(), sorted_names.end());
  s.dim = dim;
  s.verts = std::move(verts);
  s.facets = std::move(facets);
  s.cofacets.clear();
  s.hash = cell_hash(dim, sorted_names);
  s.alive = true;
  for (int f : s.facets) slots_[static_cast<std::size_t>(f)].cofacets.push_back(slot);
  ++alive_count_;
  fingerprint_ += s.hash;
  return slot;
}

void WorkingComplex::remove_cell(int slot) {
  Slot& s = slots_.at(static_cast<std::size_t>(slot));
  if (!s.alive) fail("cell " + label(s.verts) + " already removed");
  if (!s.cofacets.empty()) fail("cell " + label(s.verts) + " still has cofacets");
  for (int f : s.facets) {
    auto& co = slots_[static_cast<std::size_t>(f)].cofacets;
    co.erase(std::find(co.begin(), co.end(), slot));
  }
  s.alive = false;
  --alive_count_;
  fingerprint_ -= s.hash;
}

std::vector<int> WorkingComplex::upset(int slot) const {
  std::vector<int> out{slot};
  std::set<int> seen{slot};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int n : cofacets(out[i])) {
      if (seen.insert(n).second) out.push_back(n);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> WorkingComplex::downset(int slot) const {
  std::vector<int> out{slot};
  std::set<int> seen{slot};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int n : facets(out[i])) {
      if (seen.insert(n).second) out.push_back(n);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> WorkingComplex::alive_slots() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].alive) out.push_back(static_cast<int>(i));
  }
  return out;
}

GComplex WorkingComplex::snapshot(const Limits& limits) const {
  std::vector<std::pair<int, VertexSet>> cells;
  for (const auto& s : slots_) {
    if (s.alive) cells.emplace_back(s.dim, s.verts);
  }
  std::vector<int> kept;
  CellComplex k = CellComplex::from_cells(names_, std::move(cells), limits, &kept);
  return {std::move(k), GroupAction(elements_, action_).restrict_to(kept)};
}

// ---------------------------------------------------------------------------
// Elementary steps

namespace {

/// Slots of the orbit members and their paired facets, checked against the
/// collapse preconditions. Returns the failure instead of throwing so that
/// schedulers can probe.
std::optional<Error> check_collapse(const WorkingComplex& w, const std::vector<int>& taus,
                                    const std::vector<int>& phis) {
  for (std::size_t k = 0; k < taus.size(); ++k) {
    const int tau = taus[k];
    const auto& co = w.cofacets(tau);
    if (co.size() == 1 && w.cofacets(co[0]).empty()) {
      if (co[0] != phis[k]) {
        return Error(ErrorCode::NotFree, w.label(w.verts(tau)) + " is not a face of the listed facet");
      }
      continue;
    }
    std::vector<int> tops;
    for (int c : w.upset(tau)) {
      if (c != tau && w.cofacets(c).empty()) tops.push_back(c);
    }
    if (tops.size() != 1) {
      return Error(ErrorCode::NotFree, w.label(w.verts(tau)) + " is a proper face of " +
                                           std::to_string(tops.size()) + " facets");
    }
    if (w.dim(tops[0]) != w.dim(tau) + 1) {
      return Error(ErrorCode::WrongCodimension,
                   w.label(w.verts(tau)) + " lies in a facet of dimension " + std::to_string(w.dim(tops[0])));
    }
    return Error(ErrorCode::NotFree, w.label(w.verts(tau)) + " is not a face of the listed facet");
  }
  // With every member free and of codimension one, the up-sets are {tau, phi}.
  std::set<int> seen;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (!seen.insert(taus[k]).second || !seen.insert(phis[k]).second) {
      return Error(ErrorCode::OrbitNotIndependentlyFree,
                   "orbit members of " + w.label(w.verts(taus[0])) + " share a coface");
    }
  }
  return std::nullopt;
}

std::vector<VertexSet> orbit_of(const WorkingComplex& w, const VertexSet& verts) {
  std::vector<VertexSet> out;
  for (std::size_t g = 0; g < w.group_size(); ++g) out.push_back(w.act(static_cast<int>(g), verts));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_step_shape(const WorkingComplex& w, const CollapseStep& step) {
  if (step.orbit.empty() || step.orbit.size() != step.facets.size()) fail("malformed step");
  for (const auto* list : {&step.orbit, &step.facets}) {
    for (const auto& cell : *list) {
      if (cell.empty() || !std::is_sorted(cell.begin(), cell.end())) fail("malformed cell in step");
      for (int v : cell) {
        if (v < 0 || static_cast<std::size_t>(v) >= w.num_vertices()) fail("step uses an unknown vertex");
      }
    }
  }
  std::vector<VertexSet> listed = step.orbit;
  std::sort(listed.begin(), listed.end());
  if (listed != orbit_of(w, step.orbit[0])) fail("step does not list a full orbit");
  for (std::size_t g = 0; g < w.group_size(); ++g) {
    for (std::size_t k = 0; k < step.orbit.size(); ++k) {
      const VertexSet img = w.act(static_cast<int>(g), step.orbit[k]);
      const VertexSet img_facet = w.act(static_cast<int>(g), step.facets[k]);
      auto pos = std::find(step.orbit.begin(), step.orbit.end(), img) - step.orbit.begin();
      if (step.facets[static_cast<std::size_t>(pos)] != img_facet) fail("step pairing is not equivariant");
    }
  }
}

std::vector<int> slots_of(const WorkingComplex& w, const std::vector<VertexSet>& cells) {
  std::vector<int> out;
  for (const auto& v : cells) {
    auto s = w.find(v);
    if (!s) fail("cell " + w.label(v) + " is not present");
    out.push_back(*s);
  }
  return out;
}

}  // namespace

void apply_step(WorkingComplex& w, const CollapseStep& step) {
  check_step_shape(w, step);
  if (step.dir == StepDir::Expand) {
    for (const auto& t : step.orbit) w.add_cell(step.dim, t);
    for (const auto& f : step.facets) w.add_cell(step.dim + 1, f);
  }
  const auto taus = slots_of(w, step.orbit);
  const auto phis = slots_of(w, step.facets);
  for (int t : taus) {
    if (w.dim(t) != step.dim) fail("step dimension mismatch at " + w.label(w.verts(t)));
  }
  for (int p : phis) {
    if (w.dim(p) != step.dim + 1) {
      throw Error(ErrorCode::WrongCodimension, "listed facet " + w.label(w.verts(p)) + " is not one dimension up");
    }
  }
  if (auto err = check_collapse(w, taus, phis)) throw *err;
  if (step.dir == StepDir::Collapse) {
    for (int p : phis) w.remove_cell(p);
    for (int t : taus) w.remove_cell(t);
  }
}

// ---------------------------------------------------------------------------
// Certificates

std::size_t Certificate::removed_cells() const {
  long long n = 0;
  for (const auto& s : steps) {
    const long long k = 2 * static_cast<long long>(s.orbit.size());
    n += s.dir == StepDir::Collapse ? k : -k;
  }
  return static_cast<std::size_t>(n < 0 ? -n : n);
}

Certificate reversed(const Certificate& cert) {
  Certificate out = cert;
  std::swap(out.start_fingerprint, out.end_fingerprint);
  std::swap(out.start_cells, out.end_cells);
  out.steps.assign(cert.steps.rbegin(), cert.steps.rend());
  for (auto& s : out.steps) s.dir = s.dir == StepDir::Collapse ? StepDir::Expand : StepDir::Collapse;
  out.fingerprints.clear();
  const std::size_t n = cert.steps.size();
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t i = n - 1 - j;
    out.fingerprints.push_back(i == 0 ? cert.start_fingerprint : cert.fingerprints[i - 1]);
  }
  return out;
}

namespace {

std::string hex(std::uint64_t x) {
  std::ostringstream s;
  s << std::hex << x;
  return s.str();
}

std::uint64_t from_hex(const std::string& s) {
  std::size_t pos = 0;
  const auto v = std::stoull(s, &pos, 16);
  if (pos != s.size()) throw std::invalid_argument("bad fingerprint");
  return v;
}

void attach_pool(Certificate& c, const WorkingComplex& w) {
  c.vertex_names = w.vertex_names();
  c.apex_of = w.apex_of();
  c.element_names = w.element_names();
  c.action = w.action();
}

}  // namespace

std::string certificate_json(const Certificate& cert) {
  using nlohmann::ordered_json;
  ordered_json vertices = ordered_json::array();
  for (std::size_t v = 0; v < cert.vertex_names.size(); ++v) {
    ordered_json e;
    e["name"] = cert.vertex_names[v];
    e["apex_of"] = cert.apex_of[v];
    vertices.push_back(std::move(e));
  }
  ordered_json group = ordered_json::array();
  for (std::size_t g = 0; g < cert.action.size(); ++g) {
    ordered_json e;
    e["name"] = cert.element_names[g];
    e["map"] = cert.action[g];
    group.push_back(std::move(e));
  }
  ordered_json steps = ordered_json::array();
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const auto& s = cert.steps[i];
    ordered_json e;
    e["direction"] = s.dir == StepDir::Collapse ? "collapse" : "expand";
    e["dim"] = s.dim;
    e["orbit"] = s.orbit;
    e["facets"] = s.facets;
    e["fingerprint"] = hex(cert.fingerprints[i]);
    steps.push_back(std::move(e));
  }
  ordered_json j;
  j["vertices"] = std::move(vertices);
  j["group"] = std::move(group);
  j["start"] = {{"fingerprint", hex(cert.start_fingerprint)}, {"cells", cert.start_cells}};
  j["end"] = {{"fingerprint", hex(cert.end_fingerprint)}, {"cells", cert.end_cells}};
  j["steps"] = std::move(steps);
  return j.dump();
}

Certificate certificate_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Certificate c;
    for (const auto& v : j.at("vertices")) {
      c.vertex_names.push_back(v.at("name").get<std::string>());
      c.apex_of.push_back(v.at("apex_of").get<VertexSet>());
    }
    for (const auto& g : j.at("group")) {
      c.element_names.push_back(g.at("name").get<std::string>());
      c.action.push_back(g.at("map").get<std::vector<int>>());
    }
    c.start_fingerprint = from_hex(j.at("start").at("fingerprint").get<std::string>());
    c.start_cells = j.at("start").at("cells").get<std::size_t>();
    c.end_fingerprint = from_hex(j.at("end").at("fingerprint").get<std::string>());
    c.end_cells = j.at("end").at("cells").get<std::size_t>();
    for (const auto& s : j.at("steps")) {
      CollapseStep step;
      const auto dir = s.at("direction").get<std::string>();
      if (dir != "collapse" && dir != "expand") throw std::invalid_argument("unknown direction " + dir);
      step.dir = dir == "collapse" ? StepDir::Collapse : StepDir::Expand;
      step.dim = s.at("dim").get<int>();
      step.orbit = s.at("orbit").get<std::vector<VertexSet>>();
      step.facets = s.at("facets").get<std::vector<VertexSet>>();
      c.steps.push_back(std::move(step));
      c.fingerprints.push_back(from_hex(s.at("fingerprint").get<std::string>()));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::ParseError, e.what());
  } catch (const std::out_of_range& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

WorkingComplex replay(const GComplex& start, const Certificate& cert) {
  WorkingComplex w(cert.vertex_names, cert.apex_of, cert.element_names, cert.action);
  std::map<std::string, int> pool;
  for (std::size_t v = 0; v < cert.vertex_names.size(); ++v) {
    if (!pool.emplace(cert.vertex_names[v], static_cast<int>(v)).second) fail("repeated vertex name in pool");
  }
  const CellComplex& k = start.complex;
  std::vector<int> to_pool(k.num_vertices());
  for (std::size_t v = 0; v < k.num_vertices(); ++v) {
    auto it = pool.find(k.vertex_name(static_cast<int>(v)));
    if (it == pool.end()) fail("vertex " + k.vertex_name(static_cast<int>(v)) + " missing from the certificate");
    to_pool[v] = it->second;
  }
  if (start.action.size() != cert.action.size()) fail("group order differs from the certificate");
  for (std::size_t g = 0; g < cert.action.size(); ++g) {
    const auto& m = start.action.vertex_map(static_cast<int>(g));
    for (std::size_t v = 0; v < k.num_vertices(); ++v) {
      if (cert.action[g][static_cast<std::size_t>(to_pool[v])] != to_pool[static_cast<std::size_t>(m[v])]) {
        fail("group action differs from the certificate");
      }
    }
  }
  for (const auto& c : k.cells()) {
    VertexSet verts;
    for (int v : c.verts) verts.push_back(to_pool[static_cast<std::size_t>(v)]);
    w.add_cell(c.dim, std::move(verts));
  }
  if (w.fingerprint() != cert.start_fingerprint || w.size() != cert.start_cells) {
    fail("start complex does not match the certificate");
  }
  if (cert.fingerprints.size() != cert.steps.size()) fail("one fingerprint per step expected");
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    apply_step(w, cert.steps[i]);
    if (w.fingerprint() != cert.fingerprints[i]) fail("fingerprint mismatch after step " + std::to_string(i));
  }
  if (w.fingerprint() != cert.end_fingerprint || w.size() != cert.end_cells) {
    fail("end complex does not match the certificate");
  }
  return w;
}

GComplex elementary_g_collapse(const GComplex& gk, int sigma, const Limits& limits) {
  const CellComplex& k = gk.complex;
  const auto members = orbit(gk.action.cell_maps(k), sigma);
  for (int m : members) {
    auto top = free_facet(k, m);
    if (!top) throw Error(ErrorCode::NotFree, k.label(m) + " is not free");
    if (k.cell(*top).dim != k.cell(m).dim + 1) {
      throw Error(ErrorCode::WrongCodimension, k.label(m) + " lies in a facet of dimension " +
                                                   std::to_string(k.cell(*top).dim));
    }
  }
  if (!independently_free(k, gk.action, sigma)) {
    throw Error(ErrorCode::OrbitNotIndependentlyFree, "orbit of " + k.label(sigma) + " shares a coface");
  }
  return deletion(gk, members, limits);
}

// ---------------------------------------------------------------------------
// Deformations

namespace {

struct Recorder {
  WorkingComplex& w;
  Certificate cert;

  explicit Recorder(WorkingComplex& wc) : w(wc) {
    cert.start_fingerprint = w.fingerprint();
    cert.start_cells = w.size();
  }

  void apply(const CollapseStep& step) {
    apply_step(w, step);
    cert.steps.push_back(step);
    cert.fingerprints.push_back(w.fingerprint());
  }

  Certificate finish() {
    cert.end_fingerprint = w.fingerprint();
    cert.end_cells = w.size();
    attach_pool(cert, w);
    return cert;
  }
};

/// Collapses away every cell flagged removable, highest dimension first. The
/// returned steps are in application order; w is left without those cells.
std::vector<CollapseStep> greedy_collapse(WorkingComplex& w, std::vector<char>& removable) {
  std::set<std::pair<int, int>> queue;  // (-dim, slot)
  auto push = [&](int s) {
    if (s < static_cast<int>(removable.size()) && removable[static_cast<std::size_t>(s)] && w.alive(s)) {
      queue.emplace(-w.dim(s), s);
    }
  };
  for (std::size_t s = 0; s < removable.size(); ++s) push(static_cast<int>(s));

  auto pairable = [&](int tau) -> std::optional<int> {
    const auto& co = w.cofacets(tau);
    if (co.size() != 1) return std::nullopt;
    const int phi = co[0];
    if (!removable[static_cast<std::size_t>(phi)] || !w.cofacets(phi).empty()) return std::nullopt;
    return phi;
  };

  std::vector<CollapseStep> steps;
  while (!queue.empty()) {
    const int tau = queue.begin()->second;
    queue.erase(queue.begin());
    if (!w.alive(tau) || !pairable(tau)) continue;
    CollapseStep step;
    step.dim = w.dim(tau);
    step.orbit = orbit_of(w, w.verts(tau));
    std::vector<int> taus;
    std::vector<int> phis;
    bool ok = true;
    for (const auto& t : step.orbit) {
      auto s = w.find(t);
      if (!s || !removable[static_cast<std::size_t>(*s)]) {
        ok = false;
        break;
      }
      auto phi = pairable(*s);
      if (!phi) {
        ok = false;
        break;
      }
      taus.push_back(*s);
      phis.push_back(*phi);
      step.facets.push_back(w.verts(*phi));
    }
    if (!ok || check_collapse(w, taus, phis)) continue;
    std::vector<int> touched;
    for (int p : phis) {
      for (int f : w.facets(p)) touched.push_back(f);
    }
    for (int t : taus) {
      for (int f : w.facets(t)) touched.push_back(f);
    }
    apply_step(w, step);
    steps.push_back(std::move(step));
    for (int t : touched) {
      push(t);
      for (int f : w.facets(t)) push(f);
    }
  }
  for (std::size_t s = 0; s < removable.size(); ++s) {
    if (removable[s] && w.alive(static_cast<int>(s))) {
      throw Error(ErrorCode::Stuck, "cone cell " + w.label(w.verts(static_cast<int>(s))) + " cannot be collapsed");
    }
  }
  return steps;
}

/// Stellar subdivision at the orbit of the cell `sigma` (a slot of w), carried
/// out as expansions onto the cones over the stars followed by collapses.
void stellar_in_place(Recorder& rec, int sigma) {
  WorkingComplex& w = rec.w;
  std::vector<int> members;
  for (const auto& v : orbit_of(w, w.verts(sigma))) members.push_back(*w.find(v));
  std::vector<std::vector<int>> ups;
  for (int m : members) ups.push_back(w.upset(m));
  for (std::size_t i = 0; i < ups.size(); ++i) {
    for (std::size_t j = i + 1; j < ups.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(ups[i].begin(), ups[i].end(), ups[j].begin(), ups[j].end(),
                            std::back_inserter(common));
      if (!common.empty()) {
        throw Error(ErrorCode::OrbitCofaceClash, w.label(w.verts(members[i])) + " and " +
                                                     w.label(w.verts(members[j])) + " share a coface");
      }
    }
  }

  // L = K plus cones over the closed stars of the orbit members.
  std::vector<int> apex;
  for (int m : members) apex.push_back(w.add_apex(w.verts(m)));
  std::vector<int> cone_slots;
  for (std::size_t i = 0; i < members.size(); ++i) {
    std::set<int> star;
    for (int top : ups[i]) {
      for (int f : w.downset(top)) star.insert(f);
    }
    std::vector<int> ordered(star.begin(), star.end());
    std::stable_sort(ordered.begin(), ordered.end(), [&](int a, int b) { return w.dim(a) < w.dim(b); });
    cone_slots.push_back(w.add_cell(0, {apex[i]}));
    for (int f : ordered) {
      VertexSet verts = w.verts(f);
      verts.push_back(apex[i]);
      cone_slots.push_back(w.add_cell(w.dim(f) + 1, std::move(verts)));
    }
  }

  // Leg one: find an order in which L collapses back to K, then record it as
  // expansions starting from K.
  std::vector<char> removable(w.num_slots(), 0);
  for (int s : cone_slots) removable[static_cast<std::size_t>(s)] = 1;
  auto back = greedy_collapse(w, removable);
  for (auto it = back.rbegin(); it != back.rend(); ++it) {
    CollapseStep step = *it;
    step.dir = StepDir::Expand;
    rec.apply(step);
  }

  // Leg two: pair each F >= sigma g with apex(sigma g) * F, top-down.
  std::vector<int> above;
  for (const auto& up : ups) above.insert(above.end(), up.begin(), up.end());
  std::sort(above.begin(), above.end(), [&](int a, int b) {
    return w.dim(a) != w.dim(b) ? w.dim(a) > w.dim(b) : a < b;
  });
  for (int f : above) {
    if (!w.alive(f)) continue;
    CollapseStep step;
    step.dim = w.dim(f);
    step.orbit = orbit_of(w, w.verts(f));
    for (const auto& t : step.orbit) {
      int a = -1;
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (is_subset(w.verts(members[i]), t)) a = apex[i];
      }
      if (a < 0) fail("orbit of a starred cell leaves the stars");
      VertexSet verts = t;
      verts.push_back(a);
      std::sort(verts.begin(), verts.end());
      step.facets.push_back(std::move(verts));
    }
    rec.apply(step);
  }
}

}  // namespace

Deformation matching_to_collapse(const GComplex& gk, const Matching& m, const Limits& limits) {
  const CellComplex& k = gk.complex;
  WorkingComplex w(gk);
  Recorder rec(w);
  const auto maps = gk.action.cell_maps(k);
  std::vector<int> pos(k.size(), -1);
  for (std::size_t i = 0; i < m.sigma.size(); ++i) pos.at(static_cast<std::size_t>(m.sigma[i])) = static_cast<int>(i);

  // Orbits of sigma, keyed by their minimal member.
  std::map<int, std::vector<int>> pending;
  std::vector<int> rep_of(k.size(), -1);  // for sigma cells and their partners
  std::vector<char> grouped(k.size(), 0);
  for (int x : m.sigma) {
    if (grouped[static_cast<std::size_t>(x)]) continue;
    auto members = orbit(maps, x);
    for (int y : members) {
      grouped[static_cast<std::size_t>(y)] = 1;
      if (pos[static_cast<std::size_t>(y)] < 0) {
        throw Error(ErrorCode::MatchingInvalid, "sigma is not closed under the group at " + k.label(x));
      }
      rep_of[static_cast<std::size_t>(y)] = members.front();
      rep_of.at(static_cast<std::size_t>(m.mu[static_cast<std::size_t>(pos[static_cast<std::size_t>(y)])])) = members.front();
    }
    pending.emplace(members.front(), std::move(members));
  }

  std::set<int> queue;
  for (const auto& [rep, members] : pending) queue.insert(rep);
  std::size_t removed = 0;
  while (!queue.empty()) {
    const int rep = *queue.begin();
    queue.erase(queue.begin());
    auto it = pending.find(rep);
    if (it == pending.end()) continue;
    const auto& members = it->second;
    std::vector<int> taus;
    std::vector<int> phis;
    CollapseStep step;
    step.dim = k.cell(rep).dim;
    for (int x : members) {
      const int y = m.mu[static_cast<std::size_t>(pos[static_cast<std::size_t>(x)])];
      auto tx = w.find(k.cell(x).verts);
      auto ty = w.find(k.cell(y).verts);
      if (!tx || !ty) fail("matched cell already removed at " + k.label(x));
      taus.push_back(*tx);
      phis.push_back(*ty);
      step.orbit.push_back(k.cell(x).verts);
      step.facets.push_back(k.cell(y).verts);
    }
    if (check_collapse(w, taus, phis)) continue;
    // An orbit can only become collapsible once one of its cells loses a
    // cofacet, so only the orbits touching the boundary of this step are
    // looked at again.
    std::vector<int> touched;
    for (int p : phis) {
      for (int f : w.facets(p)) touched.push_back(f);
    }
    for (int t : taus) {
      for (int f : w.facets(t)) touched.push_back(f);
    }
    rec.apply(step);
    removed += 2 * members.size();
    pending.erase(it);
    for (int t : touched) {
      if (!w.alive(t)) continue;
      auto id = k.find(w.verts(t));
      if (!id) continue;
      const int rep = rep_of[static_cast<std::size_t>(*id)];
      if (rep >= 0 && pending.count(rep)) queue.insert(rep);
    }
  }
  if (!pending.empty()) {
    throw Error(ErrorCode::Stuck, std::to_string(pending.size()) + " orbits cannot be collapsed, first at " +
                                      k.label(pending.begin()->first));
  }
  if (removed != m.sigma.size() + m.mu.size()) fail("removed-cell count differs from |sigma| + |mu(sigma)|");
  if (w.size() != m.critical.size()) fail("endpoint differs from the critical cells");
  for (int c : m.critical) {
    if (!w.find(k.cell(c).verts)) fail("critical cell " + k.label(c) + " was removed");
  }
  Deformation out{rec.finish(), w.snapshot(limits)};
  return out;
}

Deformation stellar_deformation_certificate(const GComplex& gk, int sigma, const Limits& limits) {
  WorkingComplex w(gk);
  Recorder rec(w);
  stellar_in_place(rec, *w.find(gk.complex.cell(sigma).verts));
  Deformation out{rec.finish(), w.snapshot(limits)};
  const GComplex direct = stellar_g_subdivision(gk, sigma, limits);
  if (!same_cells(out.endpoint.complex, direct.complex)) fail("stellar deformation endpoint differs from the subdivision");
  return out;
}

Deformation sd_deformation(const GComplex& gk, const Limits& limits) {
  const CellComplex& k = gk.complex;
  const CellComplex target = barycentric_subdivision(k, limits);
  WorkingComplex w(gk);
  Recorder rec(w);
  const auto maps = gk.action.cell_maps(k);
  std::vector<int> reps;
  std::vector<char> seen(k.size(), 0);
  for (std::size_t c = 0; c < k.size(); ++c) {
    if (seen[c]) continue;
    for (int y : orbit(maps, static_cast<int>(c))) seen[static_cast<std::size_t>(y)] = 1;
    reps.push_back(static_cast<int>(c));
  }
  std::stable_sort(reps.begin(), reps.end(), [&](int a, int b) { return k.cell(a).dim > k.cell(b).dim; });
  for (int rep : reps) {
    auto slot = w.find(k.cell(rep).verts);
    if (!slot) fail("cell " + k.label(rep) + " vanished before its subdivision");
    stellar_in_place(rec, *slot);
    guard_size(w.size(), limits.max_cells, "subdivision deformation");
  }
  Deformation out{rec.finish(), w.snapshot(limits)};
  if (!same_cells(out.endpoint.complex, target)) fail("endpoint is not the barycentric subdivision");

  // Equivariance: the barycentre of c is sent to the barycentre of c g.
  for (std::size_t v = 0; v < w.num_vertices(); ++v) {
    const auto& of = w.apex_of()[v];
    if (of.empty()) {
      if (w.find(VertexSet{static_cast<int>(v)})) fail("original vertex survives the subdivision");
      continue;
    }
    auto c = k.find(of);
    if (!c) fail("barycentre of an unknown cell");
    for (std::size_t g = 0; g < w.group_size(); ++g) {
      const int image = w.action()[g][v];
      if (w.apex_of()[static_cast<std::size_t>(image)] != k.cell(maps[g][static_cast<std::size_t>(*c)]).verts) {
        fail("subdivision deformation is not equivariant");
      }
    }
  }
  return out;
}

TheoremCertificate main_theorem_certificate(const RGraph& h, const Limits& limits) {
  TheoremCertificate t;
  const HomComplex hom = hom_complex(h, limits);
  t.hom_to_sd = sd_deformation(hom.gc, limits);

  const MorseBuild mb = build_matching(h, limits);
  t.matching = mb.matching;
  t.box_collapse = matching_to_collapse(mb.sd, mb.matching, limits);

  // sd Hom against the critical subcomplex through i.
  const CellComplex sd_hom = barycentric_subdivision(hom.gc.complex, limits);
  std::vector<int> phi(hom.gc.complex.size());
  for (std::size_t c = 0; c < phi.size(); ++c) phi[c] = map_i(mb.box, hom.payload[c]);
  const auto hom_maps = hom.gc.action.cell_maps(hom.gc.complex);
  const auto box_maps = mb.box.gc.action.cell_maps(mb.box.gc.complex);
  for (std::size_t g = 0; g < hom_maps.size(); ++g) {
    for (std::size_t c = 0; c < phi.size(); ++c) {
      if (phi[static_cast<std::size_t>(hom_maps[g][c])] != box_maps[g][static_cast<std::size_t>(phi[c])]) {
        fail("i is not equivariant at " + hom.gc.complex.label(static_cast<int>(c)));
      }
    }
  }
  std::vector<char> critical(mb.sd.complex.size(), 0);
  for (int c : mb.matching.critical) critical[static_cast<std::size_t>(c)] = 1;
  std::set<int> hit;
  for (const auto& cell : sd_hom.cells()) {
    VertexSet image;
    for (int v : cell.verts) image.push_back(phi[static_cast<std::size_t>(v)]);
    std::sort(image.begin(), image.end());
    auto id = mb.sd.complex.find(image);
    if (!id || !critical[static_cast<std::size_t>(*id)] || mb.sd.complex.cell(*id).dim != cell.dim) {
      fail("chain of sd Hom does not map to a critical chain");
    }
    hit.insert(*id);
  }
  if (hit.size() != sd_hom.size() || hit.size() != mb.matching.critical.size()) {
    fail("i does not induce a bijection onto the critical chains");
  }
  if (!same_cells(sd_hom, t.box_collapse.endpoint.complex)) fail("collapse endpoint differs from sd Hom");
  t.iso_cells = hit.size();

  t.box_to_sd = sd_deformation(mb.box.gc, limits);
  if (!same_cells(t.box_to_sd.endpoint.complex, mb.sd.complex)) fail("box subdivision endpoint mismatch");
  return t;
}

std::string theorem_json(const RGraph& h, const TheoremCertificate& t) {
  using nlohmann::ordered_json;
  auto stage = [](const char* name, const Certificate& c, bool used_reversed) {
    ordered_json e;
    e["stage"] = name;
    e["reversed"] = used_reversed;
    e["steps"] = c.steps.size();
    e["start"] = {{"fingerprint", hex(c.start_fingerprint)}, {"cells", c.start_cells}};
    e["end"] = {{"fingerprint", hex(c.end_fingerprint)}, {"cells", c.end_cells}};
    return e;
  };
  ordered_json stages = ordered_json::array();
  stages.push_back(stage("hom_to_sd_hom", t.hom_to_sd.certificate, false));
  ordered_json iso;
  iso["stage"] = "sd_hom_iso_image";
  iso["cells"] = t.iso_cells;
  stages.push_back(std::move(iso));
  stages.push_back(stage("sd_box_to_image", t.box_collapse.certificate, true));
  stages.push_back(stage("box_to_sd_box", t.box_to_sd.certificate, true));
  ordered_json j;
  j["r"] = h.r();
  j["vertices"] = h.num_vertices();
  j["edges"] = h.edges().size();
  j["sigma"] = t.matching.sigma.size();
  j["critical"] = t.matching.critical.size();
  j["stages"] = std::move(stages);
  return j.dump();
}

}  // namespace hcx
