// Deciding and certifying C-twist isomorphism: G ~ H when some isomorphism
// psi of the Schur multipliers matches twisted-algebra types on every class.
// The pieces: per-class Wedderburn type maps, the generalized corank ladder,
// a pruned matrix search for psi, the commuting-square fast path from
// (delta, sigma) hom data, the representation-group route through verified
// stem covers, and the order-p^4 criterion.
#pragma once

#include <map>
#include <optional>

#include "twistclass/twisted_algebra.hpp"

namespace twistclass {

// --- type maps ---------------------------------------------------------------

// Wedderburn type of every twist class of G, indexed mixed-radix over the
// invariant chain of h2 (first chain factor most significant).
struct TypeMap {
  CohomologyGroup h2;
  std::vector<WedderburnType> types;

  u64 class_count() const { return types.size(); }
  u64 class_index(const std::vector<u32>& cls) const;
  std::vector<u32> class_at(u64 idx) const;
  const WedderburnType& type_of(const std::vector<u32>& cls) const {
    return types[class_index(cls)];
  }
  // multiset of types: block data -> number of classes carrying it
  std::map<std::vector<std::pair<u32, u64>>, u64> histogram() const;
};

struct TypeMapOptions {
  H2Options h2;
  bool cross_check = false;  // re-derive every class with the spectral backend
  TypeMapOptions() { h2.escalate = true; }
};

// Exact block data of one twisted algebra: block count = number of
// alpha-regular classes; degrees from the mass identity when at most two
// p-power degrees are possible, the central-extension backend otherwise.
WedderburnType twist_class_type(const PcGroup& G, const Cocycle& f);

TypeMap type_map(const PcGroup& G, const TypeMapOptions& opt = {});
// variant reusing an already-computed cohomology group (must carry coordinates)
TypeMap type_map(const PcGroup& G, CohomologyGroup h2, const TypeMapOptions& opt = {});

// --- generalized corank --------------------------------------------------------

// |H^2| = p^{(n-1)(n-2)/2 + 1 - s};  t = s + (n - 2).
struct CorankReport {
  u32 n = 0;
  u64 h2_order = 1;
  i64 s = 0;
  i64 t = 0;
};
CorankReport corank_from_order(u32 p, u32 n, u64 h2_order);

// Invariant chain of H^2(G, C^x) by the route ladder: abelian closed form;
// direct solver within the cap; otherwise peel central order-p direct factors
// (Kuenneth) and recurse.  Throws when no route reaches the group.
std::vector<u32> h2_invariants_routed(const PcGroup& G, const H2Options& opt = {});
CorankReport generalized_corank(const PcGroup& G, const H2Options& opt = {});

// --- pc-group isomorphism search ------------------------------------------------

// Images of the pc generators of G under some isomorphism G -> H, or nullopt.
// Descending-index DFS over candidates matched by element order and class
// size; every power/commutator relation is checked as soon as its letters are
// placed, so a completed assignment is a homomorphism, and surjectivity makes
// it an isomorphism.  Returns the lexicographically least image tuple.
std::optional<std::vector<u32>> iso_search(const PcGroup& G, const PcGroup& H,
                                           u64 budget = 50000000);

// --- commuting-square fast path -------------------------------------------------

// Hom data (delta, sigma): delta maps the echelon basis of G' into H', sigma
// maps the pc generators of G/G' into H/H'.
struct HomWitness {
  std::vector<u32> delta;
  std::vector<u32> sigma;
};

// Five-term-sequence criterion for central derived subgroups: both restriction
// sequences exact (transgression injective, inflation onto), delta and sigma
// isomorphisms, and the transgression square commutes on basis characters.
// On success the induced class map psi is materialized whenever both H^2
// coordinate systems are in reach.
struct SquareCheck {
  bool derived_central = false;
  bool delta_iso = false;
  bool sigma_iso = false;
  SequenceReport seq_g, seq_h;
  bool square_commutes = false;
  bool ok = false;
  ZMat psi;
  bool psi_ready = false;
  std::string note;
};
SquareCheck square_check(const PcGroup& G, const PcGroup& H, const HomWitness& w,
                         const H2Options& opt = {});

// --- representation-group route --------------------------------------------------

// A stem cover: central kernel generated by kernel_gens inside the derived
// subgroup, with the quotient fingerprinting the base group.
struct CoverData {
  const PcGroup* cover = nullptr;
  std::vector<u32> kernel_gens;
};

struct CoverMatch {
  bool covers_verified = false;
  bool all_match = false;
  u64 characters = 0;
  std::string mismatch;
};
// Per-central-character matching: for every chi in Hom(K_G), the degree
// census above chi in cover(G) equals the census above sigma(chi) in
// cover(H).  sigma_dual rewrites value vectors on the K_G basis to value
// vectors on the K_H basis; identity when null.  h2_order is the common
// multiplier order certifying the covers are full.
CoverMatch cover_census_match(const PcGroup& G, const CoverData& cg, const PcGroup& H,
                              const CoverData& ch, u64 h2_order,
                              const ZMat* sigma_dual = nullptr);

// --- verdicts ---------------------------------------------------------------------

enum class Obstruction { H2Mismatch, TypeHistogramMismatch, ExhaustedSearch };

struct TwistIsoVerdict {
  enum class Kind { Equivalent, NotEquivalent, Unknown };
  Kind kind = Kind::Unknown;
  // Equivalent: psi as a matrix, columns = images of the invariant-chain
  // basis of H^2(G) in the chain coordinates of H^2(H).  Data-route verdicts
  // beyond the coordinate cap leave witness_ready false.
  ZMat witness;
  bool witness_ready = false;
  Obstruction obstruction = Obstruction::ExhaustedSearch;
  u64 budget_used = 0;
  std::string note;
};

struct DecideOptions {
  u64 budget = 1000000;
  H2Options h2;
  std::optional<HomWitness> hom;              // commuting-square data
  std::optional<CoverData> cover_g, cover_h;  // stem covers
  const ZMat* cover_sigma_dual = nullptr;
  std::optional<std::vector<u32>> h2_g, h2_h;  // supplied invariant chains
  DecideOptions() { h2.escalate = true; }
};

// Obstruction ladder: equal orders, equal ordinary degree multisets, equal
// H^2 invariants (all final when violated); then the hom-data fast path, the
// cover route, and the pruned column search over type maps.
TwistIsoVerdict decide_twist_iso(const PcGroup& G, const PcGroup& H,
                                 const DecideOptions& opt = {});

// --- witness verification -----------------------------------------------------------

// Matrix form: psi respects both invariant chains, is bijective, and
// preserves the Wedderburn type of every class.
bool verify_witness(const PcGroup& G, const PcGroup& H, const ZMat& psi);
// Hom-data form: the commuting-square criterion.
bool verify_witness(const PcGroup& G, const PcGroup& H, const HomWitness& w);

// --- the order-p^4 criterion ----------------------------------------------------------

// Supplied data for groups beyond the direct-solver cap: a pinned invariant
// chain and (for the central-type check) a stem cover.
struct P4Data {
  std::vector<u32> h2_invariants;
  std::optional<CoverData> cover;
};

// Equal ordinary degree multisets + isomorphic multipliers + neither group of
// central type imply equivalence at order p^4.  Throws unless |G| = |H| = p^4.
bool p4_criterion(const PcGroup& G, const PcGroup& H);
bool p4_criterion(const PcGroup& G, const PcGroup& H, const P4Data& dg, const P4Data& dh);

}  // namespace twistclass
