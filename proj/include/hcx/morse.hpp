#ifndef HCX_MORSE_HPP
#define HCX_MORSE_HPP

#include <optional>
#include <string>
#include <vector>

#include "hcx/boxcx.hpp"

namespace hcx {

enum class ChainTag { Critical, Sigma1, Sigma2, Upper };

const char* to_string(ChainTag tag);

/// Classification of a chain F_0 < ... < F_n of box simplices. l is the first
/// index with i(p(F_l)) != F_l; r is the largest offset with
/// F_{l+r} contained in i(p(F_l)). Both are -1 for critical chains.
struct ChainClass {
  ChainTag tag = ChainTag::Critical;
  int l = -1;
  int r = -1;
};

/// `chain` lists box cell ids in increasing order.
ChainClass classify_chain(const BoxComplex& box, const std::vector<int>& chain);

/// The chain with one inserted simplex: i(p(F_l)) on top for Sigma1, or
/// i(p(F_l)) meet F_{l+r+1} just below F_{l+r+1} for Sigma2. Throws
/// NotInSigma for other chains.
std::vector<int> mu_chain(const BoxComplex& box, const std::vector<int>& chain);

/// Partial matching on the face poset of a complex: mu[k] is matched with
/// sigma[k].
struct Matching {
  std::vector<int> sigma;
  std::vector<int> mu;
  std::vector<ChainTag> tags;  // Sigma1 / Sigma2 per entry, empty for generic matchings
  std::vector<int> critical;
};

/// True iff the digraph x -> y (y in sigma, y != x, y a facet of mu(x)) has no
/// directed cycle.
bool verify_acyclic(const CellComplex& k, const Matching& m);

/// Checks that m is an acyclic partial G-matching whose critical cells are
/// exactly `expected_critical` (when given). Throws MatchingInvalid naming a
/// counterexample cell.
void verify_matching(const GComplex& k, const Matching& m,
                     const std::optional<std::vector<int>>& expected_critical = std::nullopt);

struct MorseBuild {
  BoxComplex box;
  GComplex sd;                         // sd B_edge(h); vertex i is box cell i
  std::vector<ChainClass> classes;     // per sd cell
  Matching matching;
  std::vector<int> image_chains;       // sd cells of the order complex of i(P)
};

/// Builds the matching on sd B_edge from its classification.
Matching construct_matching(const BoxComplex& box, const GComplex& sd,
                            std::vector<ChainClass>* classes = nullptr);

/// sd cells all of whose items are images of multihomomorphisms under i.
std::vector<int> image_chains(const RGraph& h, const BoxComplex& box, const CellComplex& sd,
                              const Limits& limits = {});

/// Builds and verifies the matching for h.
MorseBuild build_matching(const RGraph& h, const Limits& limits = {});

/// {"sigma":[{"chain":[...],"mu":[...],"class":"S1|S2"}...],"critical":[[...]...]}
/// with box cell ids.
std::string matching_json(const GComplex& sd, const Matching& m);

}  // namespace hcx

#endif  // HCX_MORSE_HPP
