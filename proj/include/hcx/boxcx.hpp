#ifndef HCX_BOXCX_HPP
#define HCX_BOXCX_HPP

#include <utility>
#include <vector>

#include "hcx/homcx.hpp"

namespace hcx {

/// The box complex B_edge(h): simplicial complex on edge tuples whose
/// simplices have pairwise disjoint coordinate projections generating a
/// complete r-partite sub-r-graph.
struct BoxComplex {
  int r = 0;
  GComplex gc;
  std::vector<EdgeTuple> tuples;  // vertex id -> tuple (same order as edge_tuples)
  std::vector<int> ip;            // cell id -> cell id of i(p(cell))
};

BoxComplex box_edge(const RGraph& h, const Limits& limits = {});

/// Coordinatewise projections of a simplex.
MultiHom map_p(const BoxComplex& box, int cell);

/// The simplex of all tuples selecting one vertex per part. Throws
/// InvalidParams if f does not generate a simplex.
int map_i(const BoxComplex& box, const MultiHom& f);

bool ip_fixed(const BoxComplex& box, int cell);

struct IsoCriterion {
  bool all_ip_fixed = false;      // every simplex is fixed by i o p
  bool obstruction_free = false;  // h has no K^r_{1,...,1,2,2}
};

IsoCriterion iso_criterion(const RGraph& h, const Limits& limits = {});
IsoCriterion iso_criterion(const RGraph& h, const BoxComplex& box, const Limits& limits = {});

}  // namespace hcx

#endif  // HCX_BOXCX_HPP
