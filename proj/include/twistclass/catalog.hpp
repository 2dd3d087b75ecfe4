// Named constructors for the group families used by the classification
// suites: cyclic groups, extraspecial groups and their central products with
// cyclic groups, the James phi-families at odd primes (with the alpha^(p)
// power convention, which carries a correction term at p = 3 for families of
// nilpotency class 3), the rank-4 semidirect products, the small 2-groups,
// and the two order-p^9 representation groups.
//
// Every family stores an explicit pc presentation or is assembled from one
// by direct/central products.  verify_catalog_entry recomputes each family's
// documented invariants from the built group and fails loudly on mismatch.
#pragma once

#include "twistclass/pcgroup.hpp"

namespace twistclass {

struct CatalogKey {
  std::string family;
  u32 p = 0;  // prime; 0 = family default (2 for 2-group families, 3 otherwise)
  u32 n = 0;  // total order exponent for tailed families; cyclic power for "c"
  u32 m = 0;  // extraspecial half-rank (order p^(2m+1)); 0 = family default
  u32 r = 0;  // cyclic height for "e"; residue selector for "phi3-211b"
              // (r = 1: quadratic residue form, r = 2: non-residue form)
};

// smallest positive non-quadratic-residue mod p, and smallest primitive root
u32 least_nonresidue(u32 p);
u32 least_primitive_root(u32 p);

// James power convention: alpha^(p) = alpha^p * gamma_2^C(p,2) * gamma_3^C(p,3)
// along the lower central chain of the family's series generator.  For the
// class-3 families at p = 3 the gamma_3 term survives; this returns the
// exponent C(p,3) mod p a builder has to fold into the power relation.
u32 james_gamma3_exponent(u32 p);

PcGroup catalog_build(const CatalogKey& key);

// family names in listing order, and a one-line summary (parameters,
// validity range, structure)
std::vector<std::string> catalog_names();
std::string catalog_summary(const std::string& family);

struct CatalogReport {
  CatalogKey key;
  u64 order = 0, derived = 0, center = 0, agemo = 0;
  u32 exponent = 0;
  std::vector<u32> abelianization;
  bool pass = false;
};

// recompute the family's documented fingerprint (order, |G'|, |Z|, exponent,
// abelianization, |G^p|) and compare; throws Error on mismatch
CatalogReport verify_catalog_entry(const CatalogKey& key);

// |<x^p : x in G>|
u64 agemo_order(const PcGroup& G);

// Catalogued multiplier data for the phi-families whose twist classification
// is exercised above the direct-computation cap.  `invariants` is the
// elementary divisor chain of the Schur multiplier; when a representation
// group is catalogued, `cover` carries it and `kernel_gens` lists the
// generator indices spanning the central kernel, so that the quotient
// cover / <kernel_gens> is isomorphic to the family member.
//
// Multiplier orders follow from the corank values of the families (all
// have corank-determined |H^2|); the elementary chain shape and every
// catalogued cover are recomputed from scratch in the test suite at the
// primes the suites use, and consumers re-certify covers at use time
// (is_representation_group runs before any census is trusted).
struct CatalogH2 {
  std::vector<u32> invariants;
  std::optional<PcGroup> cover;
  std::vector<u32> kernel_gens;
};

// nullopt when the family has no catalogued multiplier data
std::optional<CatalogH2> catalog_h2_data(const CatalogKey& key);

}  // namespace twistclass
