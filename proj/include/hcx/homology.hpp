#ifndef HCX_HOMOLOGY_HPP
#define HCX_HOMOLOGY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hcx/cellcx.hpp"
#include "hcx/rgraph.hpp"

namespace hcx {

enum class Coeff { Z, Z2 };

/// Column k lists the nonzero entries (row, coefficient) of the boundary of
/// k-cell number k. Rows and columns index cells of one dimension in id order.
struct BoundaryMatrix {
  std::size_t rows = 0;
  std::vector<std::vector<std::pair<int, std::int64_t>>> cols;
};

/// Boundary from dimension `dim` to dim-1. Vertices of a simplex are taken in
/// id order and the face missing position i carries sign (-1)^i. Throws
/// InvalidParams on non-simplicial complexes.
BoundaryMatrix boundary_matrix(const CellComplex& k, int dim, Coeff coeff = Coeff::Z);

/// Throws VerificationFailed unless every composite of boundaries vanishes.
void check_boundary_squared(const CellComplex& k);

struct HomologyReport {
  std::vector<std::int64_t> betti;                 // up to the top dimension
  std::vector<std::vector<std::int64_t>> torsion;  // non-unit invariant factors per degree
  bool operator==(const HomologyReport&) const = default;
};

/// Rank and invariant factors (> 1) of an integer or mod 2 matrix.
struct RankInfo {
  std::size_t rank = 0;
  std::vector<std::int64_t> torsion;
};
RankInfo rank_info(BoundaryMatrix m, Coeff coeff);

HomologyReport betti(const CellComplex& k, Coeff coeff = Coeff::Z, const Limits& limits = {});

struct Agreement {
  HomologyReport box;  // of sd B_edge(h)
  HomologyReport hom;  // of sd Hom(K_r^r, h)
  bool agree = false;
};

Agreement homology_agreement(const RGraph& h, Coeff coeff = Coeff::Z, const Limits& limits = {});

/// {"betti":[...],"torsion":[[...]...]}
std::string homology_json(const HomologyReport& report);

}  // namespace hcx

#endif  // HCX_HOMOLOGY_HPP
