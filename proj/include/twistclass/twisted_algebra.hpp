#pragma once
#include "clifford.hpp"
#include "cohomology.hpp"

namespace twistclass {

// The algebra with basis u_g and u_g u_h = w^{f(g,h)} u_{gh}, w = exp(2 pi i
// / f.e).  Scalars are tracked as exponents mod f.e.  Construction checks
// normalization and (sampled above order 64) the associativity identity.
struct TwistedAlgebra {
  const PcGroup* G = nullptr;
  Cocycle f;

  TwistedAlgebra(const PcGroup& g, Cocycle c);
  u32 e() const { return f.e; }
  u64 dim() const { return G->order(); }
  u32 mul_scalar(u32 g, u32 h) const { return f(g, h); }
  // u_g^{-1} = w^{inv_scalar(g)} u_{g^{-1}}; the basis is unitary in the
  // regular representation, so this is also the adjoint
  u32 inv_scalar(u32 g) const;
  // u_g u_x u_g^{-1} = w^{conj_scalar(g,x)} u_{g x g^{-1}}
  u32 conj_scalar(u32 g, u32 x) const;
};

// indices of the classes whose representatives commute with their
// centralizers up to symmetric cocycle values; these are exactly the classes
// carrying a nonzero twisted class sum, so their number is the block count
std::vector<u32> alpha_regular_classes(const PcGroup& G, const Cocycle& f);

struct WedderburnType {
  std::vector<std::pair<u32, u64>> blocks;  // (degree, multiplicity), degree ascending
  u64 mass() const;
  u64 block_count() const;
  bool operator==(const WedderburnType&) const = default;
};
WedderburnType census_to_type(const DegreeCensus& c);
DegreeCensus type_to_census(const WedderburnType& t);

struct SpectralOptions {
  u64 seed = 0x7ec7a1;
  double tol = 1e-6;
  u32 max_dim = 2048;
  bool force_numeric = false;  // skip the exact shortcut, for cross-validation
};

// Block structure of the twisted algebra.  Exact data (block count, number
// of linear blocks, p-power degrees) pins the answer for most inputs; when
// several degree partitions survive, the spectrum of a random self-adjoint
// central element decides.
WedderburnType wedderburn_type_spectral(const PcGroup& G, const Cocycle& f,
                                        const SpectralOptions& opt = {});

// Same block structure through a central extension: rewrite f to a cocycle g
// of minimal modulus d, build the extension of G by mu_d, and read the
// degrees above the faithful central character.  Independent of the spectral
// route end to end.
WedderburnType wedderburn_type_via_extension(const PcGroup& G, const Cocycle& f);

// degrees of the ordinary irreducible characters as a block multiset
WedderburnType ordinary_degree_multiset(const PcGroup& G);

// Does some class of 2-cocycles make the twisted algebra a full matrix
// algebra?  Requires square order; searches the classes of the cohomology
// group for one whose only regular class is the identity.
struct CentralTypeResult {
  bool central_type = false;
  std::vector<u32> witness;  // class coordinates when central_type
};
CentralTypeResult is_central_type(const PcGroup& G, u32 class_cap = 4096);

// cocycle on P = direct product of A and B acting factorwise: the class of
// the product is the pair of factor classes
Cocycle cocycle_product(const PcGroup& P, const PcGroup& A, const PcGroup& B, const Cocycle& fa,
                        const Cocycle& fb);

}  // namespace twistclass
