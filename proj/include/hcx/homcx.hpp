#ifndef HCX_HOMCX_HPP
#define HCX_HOMCX_HPP

#include <map>
#include <string>
#include <vector>

#include "hcx/cellcx.hpp"
#include "hcx/rgraph.hpp"

namespace hcx {

/// Permutation of {0,...,r-1}; perm[j] is the image of j.
using Perm = std::vector<int>;

/// All permutations of {0,...,r-1} in lexicographic order (identity first).
std::vector<Perm> symmetric_group(int r);
std::string perm_name(const Perm& p);

/// Ordered r-tuple of distinct vertices whose underlying set is an edge.
using EdgeTuple = std::vector<int>;

/// All edge tuples of h in lexicographic order.
std::vector<EdgeTuple> edge_tuples(const RGraph& h);
std::string tuple_name(const RGraph& h, const EdgeTuple& t);

/// Right action on tuples: (t sigma)_j = t_{sigma(j)}.
EdgeTuple act(const EdgeTuple& t, const Perm& sigma);

/// Multihomomorphism K_r^r -> h: part j is the nonempty vertex set f(j).
struct MultiHom {
  std::vector<VertexSet> parts;

  int dim() const;
  auto operator<=>(const MultiHom&) const = default;
};

/// (f sigma)(j) = f(sigma(j)).
MultiHom act(const MultiHom& f, const Perm& sigma);

/// Componentwise inclusion.
bool leq(const MultiHom& f, const MultiHom& g);

/// Every multihomomorphism of h, sorted by (dim, parts).
std::vector<MultiHom> enumerate_multihoms(const RGraph& h, const Limits& limits = {});

std::string multihom_json(const RGraph& h, const MultiHom& f);

/// Hom(K_r^r, h) as a face poset: cell vertices are the edge tuples of the
/// product of the parts, so the vertex table coincides with that of the box
/// complex.
struct HomComplex {
  GComplex gc;
  std::vector<EdgeTuple> tuples;       // vertex id -> tuple
  std::vector<MultiHom> payload;       // cell id -> multihom
  std::map<MultiHom, int> cell_of;     // multihom -> cell id
};

HomComplex hom_complex(const RGraph& h, const Limits& limits = {});

/// S_r acting on edge tuples by coordinate permutation.
GroupAction tuple_action(const RGraph& h, const std::vector<EdgeTuple>& tuples);

}  // namespace hcx

#endif  // HCX_HOMCX_HPP
