#ifndef HCX_RGRAPH_HPP
#define HCX_RGRAPH_HPP

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "hcx/error.hpp"

namespace hcx {

/// Sorted list of vertex indices.
using VertexSet = std::vector<int>;

/**
 * Simple nondegenerate r-uniform hypergraph.
 *
 * Vertices are named by strings and addressed by their index in
 * vertex_names(). Each edge is stored as a sorted list of exactly r distinct
 * vertex indices; the edge list itself is sorted, so iteration order is
 * reproducible regardless of input order.
 */
class RGraph {
 public:
  RGraph(int r, std::vector<std::string> vertices,
         const std::vector<std::vector<std::string>>& edges);

  int r() const noexcept { return r_; }
  std::size_t num_vertices() const noexcept { return names_.size(); }
  const std::vector<std::string>& vertex_names() const noexcept { return names_; }
  const std::string& name(int v) const { return names_.at(static_cast<std::size_t>(v)); }
  const std::vector<VertexSet>& edges() const noexcept { return edges_; }

  int index_of(const std::string& name) const;

  /// True iff the given set (any order, possibly with repeats) is an edge.
  bool has_edge(std::vector<int> members) const;

  /// True iff the sorted set is contained in some edge.
  bool is_subedge(const VertexSet& sorted) const;

 private:
  int r_;
  std::vector<std::string> names_;
  std::vector<VertexSet> edges_;
  std::set<VertexSet> edge_set_;
  std::set<VertexSet> subedges_;
};

RGraph new_rgraph(int r, std::vector<std::string> vertices,
                  const std::vector<std::vector<std::string>>& edges);

/// K_m^r: all r-subsets of {0,...,m-1}.
RGraph complete_rgraph(int m, int r);

/// K^r_{m_0,...,m_{r-1}}. Vertex names are "p<j>_<k>" for the k-th vertex of part j.
RGraph complete_multipartite(const std::vector<int>& part_sizes);

/// True iff every selection x_j in parts[j] is an edge of h.
bool generates_complete(const RGraph& h, const std::vector<VertexSet>& parts);

/// True iff h has pairwise disjoint vertex sets of the given sizes generating
/// a complete r-partite sub-r-graph. Throws SizeGuard past limits.max_candidates
/// candidate part assignments.
bool contains_complete_sub(const RGraph& h, const std::vector<int>& sizes,
                           const Limits& limits = {});

/// The sizes [1,...,1,2,2] of K^r_{1,...,1,2,2}; empty for r < 2.
std::vector<int> obstruction_sizes(int r);

RGraph rgraph_from_json(const std::string& text);
std::string rgraph_to_json(const RGraph& h);

}  // namespace hcx

#endif  // HCX_RGRAPH_HPP
