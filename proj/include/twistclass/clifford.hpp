#pragma once
#include <map>

#include "cohomology.hpp"

namespace twistclass {

// Invariant-factor decomposition of an abelian pc group: A = <gens[0]> + ...
// + <gens[k-1]> with orders[t] > 1 ascending under divisibility, plus the
// exact coordinate map.  Characters of A are coordinate vectors a with
// chi(x) = sum_t a_t (expo / orders[t]) coords(x)_t mod expo.
struct AbelianDecomp {
  const PcGroup* A = nullptr;
  std::vector<u32> gens;
  std::vector<u32> orders;
  u32 expo = 1;
  ZMat v{0, 0, 1};  // exponents(x) * v, column t taken mod orders[t]

  std::vector<u32> coords(u32 x) const;
  u32 eval(const std::vector<u32>& chr, u32 x) const;
};
AbelianDecomp abelian_decomposition(const PcGroup& A);

// Linear character of a subgroup in exponent-vector form on the subgroup's
// echelon basis: chi(x) = sum_t decompose(x)[t] * on_basis[t] mod e.  The
// normal form is unique, so this always defines a function; is_homomorphism
// certifies multiplicativity.
struct LinearCharacter {
  const Subgroup* N = nullptr;
  u32 e = 1;
  std::vector<u32> on_basis;
  u32 eval(u32 n_elem) const;
  bool is_homomorphism() const;
};

struct InertiaData {
  const PcGroup* G = nullptr;
  const Subgroup* N = nullptr;
  LinearCharacter chi;
  Subgroup I;
  u64 index = 1;  // [G : I]
};
// I = {g : chi(g^-1 n g) = chi(n) for all n in N}, for N abelian normal;
// decided on coset representatives and the basis of N only.
InertiaData inertia_group(const PcGroup& G, const Subgroup& N, const LinearCharacter& chi);

// map degree -> number of irreducibles of that degree
struct DegreeCensus {
  std::map<u32, u64> count;
  u64 mass() const;  // sum count * degree^2
  bool operator==(const DegreeCensus&) const = default;
};

// Abelian normal subgroup grown from the center by repeatedly adjoining an
// element that centralizes it and is central modulo it.  The result is
// self-centralizing, hence a maximal abelian normal subgroup.
Subgroup self_centralizing_abelian_normal(const PcGroup& G);

// Degrees of the irreducibles of G lying over chi, a character of the
// central subgroup K.  Runs over the linear characters of an abelian normal
// N >= K: each orbit contributes blocks of degree [G:I] * d where d^2 is the
// index of the radical of the commutation pairing of the section-defect
// table on I/N (d = 1 exactly when the character extends to I).  Total mass
// is |G| / |K|.
DegreeCensus degree_census_above(const PcGroup& G, const Subgroup& K,
                                 const CentralCharacter& chi);

struct BijectionReport {
  u64 inertia_index = 1;
  u64 count_g = 0, count_i = 0;
  std::map<u32, u64> degrees_g, degrees_i;
  bool counts_match = false;
  bool degrees_scale = false;
  bool ok = false;
};
// Numeric verification that induction from the inertia subgroup is a
// degree-scaling bijection above chi; needs the full spectra of both group
// algebras, so it is capped at |G| <= 512.
BijectionReport clifford_bijection_check(const PcGroup& G, const Subgroup& N,
                                         const LinearCharacter& chi);

// Ordinary irreducible degree census.  Exact route: linear count |G/G'|,
// class count, and the mass identity pin the census whenever at most two
// nonlinear degrees are possible (degree^2 <= [G : Z(G)]); otherwise the
// numeric backend resolves it.
DegreeCensus char_degree_census(const PcGroup& G);

}  // namespace twistclass
