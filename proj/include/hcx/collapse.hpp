#ifndef HCX_COLLAPSE_HPP
#define HCX_COLLAPSE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hcx/cellcx.hpp"
#include "hcx/morse.hpp"

namespace hcx {

/**
 * Mutable complex used while executing collapses and expansions.
 *
 * Cells are keyed by their vertex sets over a growing vertex pool. The group
 * acts on pool vertices; a barycentre vertex created by add_apex() is mapped
 * to the barycentre of the image cell. Removed cells keep their slot so that
 * re-adding the same vertex set reuses it.
 */
class WorkingComplex {
 public:
  WorkingComplex(std::vector<std::string> names, std::vector<VertexSet> apex_of,
                 std::vector<std::string> element_names, std::vector<std::vector<int>> action);
  explicit WorkingComplex(const GComplex& start);

  std::size_t num_vertices() const noexcept { return names_.size(); }
  const std::vector<std::string>& vertex_names() const noexcept { return names_; }
  const std::vector<VertexSet>& apex_of() const noexcept { return apex_of_; }
  const std::vector<std::vector<int>>& action() const noexcept { return action_; }
  const std::vector<std::string>& element_names() const noexcept { return elements_; }
  std::size_t group_size() const noexcept { return action_.size(); }

  /// Vertex named bary{...} standing for the cell with the given vertices;
  /// created on first use together with the barycentres of the whole orbit.
  int add_apex(const VertexSet& cell_verts);
  VertexSet act(int g, const VertexSet& verts) const;

  std::optional<int> find(const VertexSet& verts) const;
  bool alive(int slot) const { return slots_.at(static_cast<std::size_t>(slot)).alive; }
  int dim(int slot) const { return slots_.at(static_cast<std::size_t>(slot)).dim; }
  const VertexSet& verts(int slot) const { return slots_.at(static_cast<std::size_t>(slot)).verts; }
  const std::vector<int>& facets(int slot) const { return slots_.at(static_cast<std::size_t>(slot)).facets; }
  const std::vector<int>& cofacets(int slot) const { return slots_.at(static_cast<std::size_t>(slot)).cofacets; }
  std::size_t num_slots() const noexcept { return slots_.size(); }
  std::size_t size() const noexcept { return alive_count_; }
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  /// Adds a cell whose boundary is already present; returns its slot.
  int add_cell(int dim, VertexSet verts);
  /// Removes a cell with no remaining cofacets.
  void remove_cell(int slot);

  /// All alive cells >= slot, slot included.
  std::vector<int> upset(int slot) const;
  std::vector<int> downset(int slot) const;
  std::vector<int> alive_slots() const;
  std::string label(const VertexSet& verts) const;

  GComplex snapshot(const Limits& limits = {}) const;

 private:
  struct Slot {
    int dim = 0;
    VertexSet verts;
    std::vector<int> facets;
    std::vector<int> cofacets;
    std::uint64_t hash = 0;
    bool alive = false;
  };

  int vertex_of_apex(const VertexSet& cell_verts) const;

  std::vector<std::string> names_;
  std::vector<VertexSet> apex_of_;
  std::vector<std::string> elements_;
  std::vector<std::vector<int>> action_;
  std::unordered_map<VertexSet, int, VecHash> apex_index_;
  std::vector<Slot> slots_;
  std::unordered_map<VertexSet, int, VecHash> index_;
  std::vector<std::vector<int>> incident_;
  std::size_t alive_count_ = 0;
  std::uint64_t fingerprint_ = 0;
};

enum class StepDir { Collapse, Expand };

/// One elementary G-collapse (or its inverse expansion): every orbit member
/// orbit[k] is paired with facets[k], one dimension higher.
struct CollapseStep {
  StepDir dir = StepDir::Collapse;
  int dim = 0;
  std::vector<VertexSet> orbit;
  std::vector<VertexSet> facets;
};

/// Verifies the preconditions of an elementary G-collapse and, for Collapse,
/// removes the cells; for Expand, adds the cells and verifies that the result
/// collapses back. Throws NotFree, WrongCodimension, OrbitNotIndependentlyFree
/// or VerificationFailed.
void apply_step(WorkingComplex& w, const CollapseStep& step);

/// Formal G-deformation recorded against a vertex pool.
struct Certificate {
  std::vector<std::string> vertex_names;
  std::vector<VertexSet> apex_of;
  std::vector<std::string> element_names;
  std::vector<std::vector<int>> action;  // [g][pool vertex]
  std::uint64_t start_fingerprint = 0;
  std::uint64_t end_fingerprint = 0;
  std::size_t start_cells = 0;
  std::size_t end_cells = 0;
  std::vector<CollapseStep> steps;
  std::vector<std::uint64_t> fingerprints;  // after each step

  std::size_t removed_cells() const;
};

/// The same deformation run backwards: expansions become collapses.
Certificate reversed(const Certificate& cert);

std::string certificate_json(const Certificate& cert);
Certificate certificate_from_json(const std::string& text);

/// Rebuilds `start` over the certificate's vertex pool, replays every step
/// with full re-verification and checks each recorded fingerprint.
WorkingComplex replay(const GComplex& start, const Certificate& cert);

/// Deletion of the orbit of sigma after checking that sigma is free with a
/// facet one dimension up and that its orbit is independently free.
GComplex elementary_g_collapse(const GComplex& k, int sigma, const Limits& limits = {});

struct Deformation {
  Certificate certificate;
  GComplex endpoint;
};

/// Collapses k onto the critical cells of an acyclic matching, scanning the
/// sigma orbits in id order and applying every orbit whose preconditions
/// hold. Throws Stuck if no orbit applies while some remain.
Deformation matching_to_collapse(const GComplex& k, const Matching& m, const Limits& limits = {});

/// Cones over the stars of the orbit of sigma, expanded from k, then
/// collapsed onto the stellar subdivision. The endpoint equals
/// stellar_g_subdivision(k, sigma).
Deformation stellar_deformation_certificate(const GComplex& k, int sigma, const Limits& limits = {});

/// Stellar subdivisions at every orbit in order of decreasing dimension.
/// The endpoint is checked to be G-isomorphic to barycentric_subdivision(k).
Deformation sd_deformation(const GComplex& k, const Limits& limits = {});

/// Stages of the formal deformation Hom -> sd Hom = image -> sd box -> box.
struct TheoremCertificate {
  Deformation hom_to_sd;          // Hom ~> sd Hom
  std::size_t iso_cells = 0;      // cells matched by the map i between sd Hom and the image
  Deformation box_collapse;       // sd box ~> image of i (used reversed)
  Deformation box_to_sd;          // box ~> sd box (used reversed)
  Matching matching;
};

TheoremCertificate main_theorem_certificate(const RGraph& h, const Limits& limits = {});
std::string theorem_json(const RGraph& h, const TheoremCertificate& t);

}  // namespace hcx

#endif  // HCX_COLLAPSE_HPP
