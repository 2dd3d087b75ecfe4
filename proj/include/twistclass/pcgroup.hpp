#pragma once
#include "common.hpp"
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace twistclass {

// One factor g^e of a word, g given by generator index.
struct Letter {
  u32 gen;
  u32 exp;
};
using Word = std::vector<Letter>;

// Polycyclic presentation of a finite p-group.
//
// Generators g_0..g_{n-1}.  rel_order[i] is a power of p (p^2 and higher
// allowed).  power[i] is the normal-form word for g_i^{rel_order[i]} and may
// only mention generators with index > i.  comm[j][i] (j > i) is the
// normal-form word for [g_j, g_i] = g_j^-1 g_i^-1 g_j g_i and may only
// mention generators with index > j.  With these support conditions the
// tails <g_k, ..., g_{n-1}> form a descending central chain, so collection
// from the left terminates and |G| = prod rel_order[i].
struct PcPresentation {
  u32 p = 0;
  std::vector<std::string> names;
  std::vector<u32> rel_order;
  std::vector<Word> power;                // power[i], support > i
  std::vector<std::vector<Word>> comm;    // comm[j][i], j > i, support > j

  u32 ngens() const { return (u32)rel_order.size(); }
  void validate() const;                  // structural checks only
};

class PcGroup;

// Subgroup of a PcGroup, kept as an explicit member list plus an echelon
// basis: basis[t] has its first nonzero digit at depth[t], depths strictly
// increasing, and the leading digit is p^lead_val[t].  rel[t] is the index
// of basis[t] in the tail chain, so order() = prod rel[t].
struct Subgroup {
  const PcGroup* G = nullptr;
  std::vector<u32> basis;
  std::vector<u32> depth;
  std::vector<u32> lead_val;              // valuation v, leading digit = p^v
  std::vector<u32> rel;                   // p^{a_d - v}
  std::vector<u32> members;               // sorted
  std::vector<char> flag;                 // size |G| membership table

  u64 order() const { return members.size(); }
  bool contains(u32 x) const { return flag[x] != 0; }
  // Coefficients k_t with x = prod basis[t]^{k_t}, k_t in [0, rel[t]).
  std::optional<std::vector<u32>> decompose(u32 x) const;
  bool is_normal() const;
  bool is_central() const;
  bool is_abelian() const;
};

// Quotient G/N with canonical sifted coset representatives.  qgen[t] lists
// the ambient generator indices that survive as quotient generators.
struct Quotient {
  std::shared_ptr<PcGroup> Q;
  std::vector<u32> qgen;                  // ambient gen index per quotient gen
  std::vector<u32> proj_tab;              // ambient elem -> quotient elem
  std::vector<u32> lift_tab;              // quotient elem -> canonical rep
  u32 proj(u32 x) const { return proj_tab[x]; }
  u32 lift(u32 q) const { return lift_tab[q]; }
};

// Induced pc group on a subgroup's echelon basis.
struct InducedGroup {
  std::shared_ptr<PcGroup> H;
  std::vector<u32> to_ambient;            // H elem -> ambient elem
  std::map<u32, u32> from_ambient;        // inverse map
};

class PcGroup {
public:
  explicit PcGroup(PcPresentation pres);

  const PcPresentation& presentation() const { return pres_; }
  u32 prime() const { return pres_.p; }
  u32 ngens() const { return n_; }
  u32 order() const { return m_; }
  const std::string& name_of(u32 i) const { return pres_.names[i]; }

  // Elements are indices in [0, order): mixed radix over rel_order with
  // generator n-1 most significant.  Index 0 is the identity.
  u32 id() const { return 0; }
  u32 gen(u32 i) const { return stride_[i]; }
  u32 digit(u32 x, u32 i) const { return (x / stride_[i]) % pres_.rel_order[i]; }
  std::vector<u32> exponents(u32 x) const;
  u32 from_exponents(const std::vector<u32>& e) const;

  u32 right_mult_gen(u32 x, u32 i) const { return tab_[i][x]; }
  u32 mult(u32 a, u32 b) const;
  u32 inv(u32 a) const;
  u32 conj(u32 a, u32 b) const;           // b^-1 a b
  u32 commutator(u32 a, u32 b) const;     // a^-1 b^-1 a b
  u32 power(u32 a, i64 k) const;
  u32 element_order(u32 a) const;
  u32 word_elem(const Word& w) const;

  bool is_abelian() const;
  u32 exponent() const;
  const std::vector<u32>& center() const;
  const Subgroup& derived_subgroup() const;
  std::vector<u32> abelian_invariants() const;   // of G/G', ascending

  // Conjugacy classes; class_of is defined for every element.
  struct Classes {
    std::vector<u32> rep;
    std::vector<u32> size;
    std::vector<u32> class_of;
  };
  const Classes& classes() const;
  u32 class_count() const { return (u32)classes().rep.size(); }
  std::vector<u32> centralizer(u32 g) const;     // sorted member list

  Subgroup subgroup(const std::vector<u32>& gens) const;
  Subgroup normal_closure(const std::vector<u32>& gens) const;
  Subgroup full_subgroup() const;
  Subgroup trivial_subgroup() const;
  Quotient quotient(const Subgroup& N) const;
  InducedGroup induced(const Subgroup& H) const;

  // Basis of Hom(G, Z/e) as exponent vectors on generators; ord[k] is the
  // order of the k-th basis character.  chi(x) = sum digit_i(x) * vec[i].
  struct HomBasis {
    u32 e;
    std::vector<std::vector<u32>> vec;
    std::vector<u32> ord;
    u32 eval(const PcGroup& G, size_t k, u32 x) const;
  };
  HomBasis hom_to_cyclic(u32 e) const;

  std::string to_dsl() const;

private:
  PcPresentation pres_;
  u32 n_ = 0;
  u32 m_ = 0;
  std::vector<u32> stride_;
  std::vector<std::vector<u32>> tab_;     // tab_[i][x] = x * g_i
  std::vector<u32> inv_gen_;
  std::vector<u32> pow_elem_;             // element of power word i
  mutable std::vector<u32> center_;
  mutable std::optional<Subgroup> derived_;
  mutable std::optional<Classes> classes_;

  u32 top_support(u32 x) const;           // largest i with digit != 0, or n
  void build_tables();
  void consistency_certificate() const;
};

PcGroup direct_product(const PcGroup& A, const PcGroup& B);

// (A x B) / <(a, phi(a)^-1)> where phi is given on generators of a central
// subgroup of A by pairs (elem of A, elem of B).
PcGroup central_product(const PcGroup& A, const PcGroup& B,
                        const std::vector<std::pair<u32, u32>>& ident);

// DSL:  p=<prime>; gens x,y,z; x^9=z; [y,x]=z^2; ...
// Omitted power relation means g^p = 1.  Throws Error with a position
// annotation on bad syntax and a witness description on inconsistency.
PcPresentation parse_presentation(const std::string& text);

struct GroupInfo {
  u64 order;
  u32 exponent;
  u64 center_order;
  u64 derived_order;
  u32 class_count;
  std::vector<u32> abelianization;
};
GroupInfo group_info(const PcGroup& G);

}  // namespace twistclass
