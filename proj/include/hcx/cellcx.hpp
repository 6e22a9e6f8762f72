#ifndef HCX_CELLCX_HPP
#define HCX_CELLCX_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hcx/error.hpp"
#include "hcx/hash.hpp"

namespace hcx {

using VertexSet = std::vector<int>;

struct Cell {
  int dim = 0;
  VertexSet verts;             // sorted vertex (= 0-cell) ids
  std::vector<int> facets;     // cells this one covers
  std::vector<int> cofacets;   // cells covering this one
};

/**
 * Finite regular cell complex stored as its face poset.
 *
 * Every cell is identified by the set of 0-cells below it; the face relation
 * is inclusion of those sets. This covers simplicial complexes (dim equals
 * vertex count minus one) as well as polytopal complexes such as products of
 * simplices, where a face is determined by its vertices.
 *
 * Vertex i is always the 0-cell with id i. Cell ids are dense and sorted by
 * (dim, vertex set).
 */
class CellComplex {
 public:
  CellComplex() = default;

  /// Builds a complex from (dim, vertex set) pairs whose vertex ids index
  /// `vertex_names`. Vertices that never occur as a 0-cell are dropped and the
  /// rest renumbered in their original order; `kept_vertices`, if given,
  /// receives the original index of each surviving vertex.
  static CellComplex from_cells(const std::vector<std::string>& vertex_names,
                                std::vector<std::pair<int, VertexSet>> cells,
                                const Limits& limits = {},
                                std::vector<int>* kept_vertices = nullptr);

  std::size_t size() const noexcept { return cells_.size(); }
  bool empty() const noexcept { return cells_.empty(); }
  const Cell& cell(int id) const { return cells_.at(static_cast<std::size_t>(id)); }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  std::size_t num_vertices() const noexcept { return names_.size(); }
  const std::vector<std::string>& vertex_names() const noexcept { return names_; }
  const std::string& vertex_name(int v) const { return names_.at(static_cast<std::size_t>(v)); }
  int max_dim() const;

  std::optional<int> find(const VertexSet& sorted_verts) const;

  /// a is a (not necessarily proper) face of b.
  bool is_face(int a, int b) const;
  bool is_simplicial() const;

  /// All cells >= c, c included, sorted by id.
  std::vector<int> upset(int c) const;
  /// All cells <= c, c included, sorted by id.
  std::vector<int> downset(int c) const;
  /// Maximal cells.
  std::vector<int> facets() const;
  std::vector<std::size_t> f_vector() const;

  /// "{a,b,c}" with vertex names in id order.
  std::string label(int c) const;
  std::vector<std::string> label_names(int c) const;

  /// Order-independent hash of the (dim, vertex-name set) table.
  std::uint64_t fingerprint() const;

  /// Throws VerificationFailed when the grading or closure invariants fail.
  void check_invariants() const;

 private:
  std::vector<std::string> names_;
  std::vector<Cell> cells_;
  std::unordered_map<VertexSet, int, VecHash> index_;
};

/// Same cells with the same vertex names (ids may differ).
bool same_cells(const CellComplex& a, const CellComplex& b);

/// Finite poset given by labelled elements and its covering relation.
struct Poset {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> below;  // below[x]: elements covered by x
  std::vector<std::vector<int>> above;  // strict up-set of x, sorted

  std::size_t size() const noexcept { return labels.size(); }
  bool less(int x, int y) const;
  /// Elements covering x.
  std::vector<int> covers_of(int x) const;
};

/// Builds a poset from strict relations x < y (closed transitively). Throws
/// InvalidParams if the relation has a cycle.
Poset make_poset(std::vector<std::string> labels,
                 const std::vector<std::pair<int, int>>& relations);

Poset face_poset(const CellComplex& k);

/// Simplicial complex of nonempty chains. Vertex i is element i.
CellComplex order_complex(const Poset& p, const Limits& limits = {});

/// Vertex name of the barycentre of cell c.
std::string bary_name(const CellComplex& k, int c);

/// Order complex of the face poset; vertex i is the barycentre of cell i.
CellComplex barycentric_subdivision(const CellComplex& k, const Limits& limits = {});

/**
 * Right action of a finite group given by vertex permutations.
 *
 * Group element g sends vertex v to vertex_map(g)[v]. The product g*h is the
 * element acting as g followed by h, so x(gh) = (xg)h.
 */
class GroupAction {
 public:
  GroupAction() = default;
  GroupAction(std::vector<std::string> element_names, std::vector<std::vector<int>> vertex_maps);

  static GroupAction trivial(std::size_t num_vertices);

  std::size_t size() const noexcept { return maps_.size(); }
  std::size_t num_vertices() const noexcept { return maps_.empty() ? 0 : maps_[0].size(); }
  const std::string& element_name(int g) const { return names_.at(static_cast<std::size_t>(g)); }
  const std::vector<int>& vertex_map(int g) const { return maps_.at(static_cast<std::size_t>(g)); }
  int identity() const noexcept { return identity_; }
  int compose(int g, int h) const;

  /// cell_maps(k)[g][c] = id of the image of cell c under g. Throws
  /// VerificationFailed if some element does not act as a cellular
  /// automorphism.
  std::vector<std::vector<int>> cell_maps(const CellComplex& k) const;

  /// Action on the vertices of barycentric_subdivision(k).
  GroupAction on_cells(const CellComplex& k) const;

  /// Re-indexes onto a subset of vertices; new vertex i is old vertex kept[i].
  GroupAction restrict_to(const std::vector<int>& kept) const;

  /// Extends by fresh vertices; extra_images[g][i] is the image of new vertex
  /// num_vertices()+i, given as an absolute vertex id.
  GroupAction extend(const std::vector<std::vector<int>>& extra_images) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<int>> maps_;
  std::vector<std::vector<int>> table_;
  int identity_ = 0;
};

/// Distinct images of c, sorted by id.
std::vector<int> orbit(const std::vector<std::vector<int>>& cell_maps, int c);

/// Complex together with its group action.
struct GComplex {
  CellComplex complex;
  GroupAction action;
};

/// Checks that every element preserves dimension and the face relation.
void check_action(const CellComplex& k, const GroupAction& a);

/// Subcomplex of cells having no member of s as a face.
CellComplex deletion(const CellComplex& k, const std::vector<int>& s, const Limits& limits = {});
GComplex deletion(const GComplex& k, const std::vector<int>& s, const Limits& limits = {});

/// The unique facet strictly above sigma if sigma is a proper face of exactly
/// one facet. A facet itself is not free.
std::optional<int> free_facet(const CellComplex& k, int sigma);

/// Throws NotFree unless every orbit member is free; otherwise true iff no
/// two distinct orbit members share a coface.
bool independently_free(const CellComplex& k, const GroupAction& a, int sigma);

/// Stellar subdivision at the orbit of sigma. Apex of sigma*g is the fresh
/// vertex bary_name(k, sigma*g). Throws OrbitCofaceClash when two distinct
/// orbit members share a coface.
GComplex stellar_g_subdivision(const GComplex& k, int sigma, const Limits& limits = {});

std::string to_json(const CellComplex& k);
std::string to_dot(const CellComplex& k);

}  // namespace hcx

#endif  // HCX_CELLCX_HPP
