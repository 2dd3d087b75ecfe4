#pragma once
#include <utility>

#include "twistclass/linalg.hpp"
#include "twistclass/pcgroup.hpp"

namespace twistclass {

// 2-cochain with values in Z/e; the complex cocycle is alpha(g,h) =
// zeta_e^{f(g,h)} for a fixed primitive e-th root zeta_e.  An empty table is
// the zero cochain.
struct Cocycle {
  const PcGroup* G = nullptr;
  u32 e = 1;
  std::vector<u32> f;  // row-major |G| x |G|, or empty

  u32 operator()(u32 x, u32 y) const {
    return f.empty() ? 0 : f[(size_t)x * G->order() + y];
  }
  bool is_trivial_table() const { return f.empty(); }
};

Cocycle trivial_cocycle(const PcGroup& G, u32 e);
Cocycle cocycle_add(const Cocycle& a, const Cocycle& b);
Cocycle cocycle_scale(const Cocycle& a, u32 k);
// identity + normalization; exhaustive for |G| <= 64, randomized above
bool is_cocycle(const Cocycle& f, Rng rng, u32 samples = 20000);

// t with (dt)(x,y) = t(x)+t(y)-t(xy) = f mod e2 (e2 | f.e), or nullopt.
// Propagates t over a minimal generating set and solves the residual
// system on the generator values, so the answer is exact.
std::optional<std::vector<u32>> coboundary_solve(const Cocycle& f, u32 e2);
bool is_coboundary(const Cocycle& f);

// embed mu_e into mu_e2 (e | e2): values scale by e2/e
Cocycle cocycle_change_modulus(const Cocycle& f, u32 e2);
// representative of [f] with values in mu_e2 (e2 | e), if the class order
// divides e2; returned cocycle has modulus e2
std::optional<Cocycle> cocycle_descend(const Cocycle& f, u32 e2);

// Like cocycle_descend, but allows adjusting f by coboundaries AND by the
// classes that die over the full circle group (carries of lifted
// characters).  Succeeds exactly when the circle-coefficient class order of
// f divides e2, so it can rewrite any projectively trivial table to zero
// even when the table is not a mod-e coboundary.
std::optional<Cocycle> cocycle_descend_projective(const Cocycle& f, u32 e2);
// least p-power d dividing f.e with cocycle_descend_projective(f, d) solvable:
// the order of [f] over circle coefficients
u32 projective_class_order(const Cocycle& f);

// character of a subgroup K <= G with values in Z/e
struct CentralCharacter {
  const Subgroup* K = nullptr;
  u32 e = 1;
  std::vector<u32> on_basis;  // value on K->basis[t]
  u32 eval(u32 k_elem) const;
};

enum class H2Route { Abelian, Brute, Kuenneth, Sequence, Catalog };

// H^2(G, C^x) as Z/d_1 + ... + Z/d_k (d_1 | d_2 | ...) with representative
// cocycles and an exact coordinate map.  Structural routes fill invariants
// only; representatives and coordinates come from the computational routes.
struct CohomologyGroup {
  const PcGroup* G = nullptr;
  u32 e = 1;
  H2Route route = H2Route::Brute;
  std::vector<u32> invariants;  // divisibility chain, entries > 1
  std::vector<Cocycle> reps;    // one per invariant when coords_ready

  u64 order() const {
    u64 o = 1;
    for (u32 d : invariants) o *= d;
    return o;
  }
  bool has_coordinates() const { return coords_ready; }
  // class vector in (+) Z/d_i of a cocycle on G with modulus e; the argument
  // must satisfy the cocycle identity
  std::vector<u32> coordinate_of(const Cocycle& f) const;
  // cocycle representing a class vector
  Cocycle representative(const std::vector<u32>& cls) const;

  // --- internals of the coordinate map ---
  bool coords_ready = false;
  // direct-solver route: generator slots, parent chains, cocycle-space basis
  std::vector<u32> slots;   // pc generator indices of a minimal generating set
  std::vector<u32> gelem;   // their element ids
  std::vector<u32> par_s, par_x, bfs;  // left-multiplication spanning tree
  std::vector<std::vector<u32>> kbasis;  // basis of the solution space, u-coords
  std::vector<u32> korders;
  SmithMod ksolve;          // smith form of the kbasis^T matrix
  ZMat quot_v;              // V of the quotient presentation
  std::vector<u32> quot_diag;
  std::vector<size_t> inv_pos;             // surviving factor positions
  std::vector<std::vector<u32>> rep_u;     // u-vectors of the representatives
  // abelian route: invariant-factor generators and the coordinate transform
  std::vector<u32> ab_h;    // generator elements, one per invariant factor
  std::vector<u32> ab_d;    // their orders (all factors, chain with 1s dropped)
  ZMat ab_v;                // exponent vector * ab_v = factor coordinates
  std::vector<std::pair<u32, u32>> ab_pairs;  // factor index pairs (t,s), t<s

  std::vector<u32> restrict_u(const Cocycle& f) const;
  Cocycle expand_u(const std::vector<u32>& u) const;
};

struct H2Options {
  u32 bound = 128;        // default size limit for the direct solver
  u32 hard_cap = 256;     // never exceeded
  bool escalate = false;  // allow bound -> hard_cap
  u64 seed = 0x5eedULL;
};

// closed form for abelian groups via the alternating pairing; representatives
// and coordinates are materialized for |G| <= table_limit
CohomologyGroup h2_abelian(const PcGroup& G, u32 table_limit = 2048);
// direct solver: the cocycle identity on generator slots as a sparse linear
// system over Z/|G|, randomized elimination with exact verification and
// repair, then the quotient by coboundaries and the carry classes of the
// e-th power sequence; the returned basis is certified
CohomologyGroup h2_bruteforce(const PcGroup& G, const H2Options& opt = {});
// dispatch: abelian -> closed form, otherwise the direct solver
CohomologyGroup h2(const PcGroup& G, const H2Options& opt = {});

// invariants of H^2(A x B) from factor data: H2(A) + H2(B) + A^ab (x) B^ab
std::vector<u32> h2_kuenneth_invariants(const std::vector<u32>& h2a,
                                        const std::vector<u32>& ab_a,
                                        const std::vector<u32>& h2b,
                                        const std::vector<u32>& ab_b);

// pullback along the quotient map of G (q must be a quotient of G)
Cocycle inflate(const PcGroup& G, const Quotient& q, const Cocycle& fbar);

// tra(chi)(u,v) = chi(s(u) s(v) s(uv)^-1) on Q = G/K for central K; the
// default section is the canonical lift; an override must hit each coset and
// lift the identity to the identity.  Fails if the section defect leaves K.
Cocycle transgress(const PcGroup& G, const Quotient& q, const CentralCharacter& chi,
                   const std::vector<u32>* section_override = nullptr);

// the five-term sequence 1 -> Hom(G') -> H^2(G/G') -> H^2(G) for central
// elementary abelian G', checked computationally; failure of exactness or
// surjectivity is a reported outcome, not an error
struct SequenceReport {
  u64 hom_order = 0, h2_quot_order = 0, h2_order = 0;
  u64 tra_image_order = 0, inf_image_order = 0, inf_kernel_order = 0;
  bool tra_injective = false;
  bool image_in_kernel = false;
  bool exact_at_middle = false;
  bool inf_surjective = false;
  bool exact = false;
};
SequenceReport exact_sequence_check(const PcGroup& G, const H2Options& opt = {});

// K x Q with (a,x)(b,y) = (a+b+f(x,y), xy); K = <last generator>, cyclic of
// order f.e.  The collection certificate of the result re-proves that f
// satisfies the cocycle identity.
PcGroup central_extension(const PcGroup& Q, const Cocycle& f);

// K <= Z(Gt) cap Gt', |K| = given |H^2(G)|, and Gt/K fingerprints G
// (order, abelianization, class count)
bool is_representation_group(const PcGroup& Gt, const Subgroup& K, const PcGroup& G,
                             u64 h2_order_of_G);

}  // namespace twistclass
