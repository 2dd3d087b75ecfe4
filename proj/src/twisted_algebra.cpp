#include "twistclass/twisted_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "twistclass/spectral.hpp"

namespace twistclass {

// --- the algebra -----------------------------------------------------------------

TwistedAlgebra::TwistedAlgebra(const PcGroup& g, Cocycle c) : G(&g), f(std::move(c)) {
  require(f.G == &g, "twisted algebra: cocycle lives on a different group");
  require(f.e >= 1, "twisted algebra: bad modulus");
  u32 m = g.order();
  for (u32 x = 0; x < m; ++x)
    require(f(0, x) == 0 && f(x, 0) == 0, "twisted algebra: table not normalized");
  require(is_cocycle(f, Rng(0x7a15), 20000), "twisted algebra: table not associative");
}

u32 TwistedAlgebra::inv_scalar(u32 g) const { return (f.e - f(g, G->inv(g))) % f.e; }

u32 TwistedAlgebra::conj_scalar(u32 g, u32 x) const {
  u64 s = u64(f(g, x)) + inv_scalar(g) + f(G->mult(g, x), G->inv(g));
  return u32(s % f.e);
}

// --- regular classes --------------------------------------------------------------

std::vector<u32> alpha_regular_classes(const PcGroup& G, const Cocycle& f) {
  require(f.G == &G, "regular classes: cocycle lives on a different group");
  u32 m = G.order();
  for (u32 x = 0; x < m; ++x)
    require(f(0, x) == 0 && f(x, 0) == 0, "regular classes: table not normalized");
  const auto& cls = G.classes();
  std::vector<u32> out;
  for (u32 c = 0; c < u32(cls.rep.size()); ++c) {
    u32 g = cls.rep[c];
    bool reg = true;
    for (u32 h : G.centralizer(g))
      if (f(g, h) != f(h, g)) {
        reg = false;
        break;
      }
    if (reg) out.push_back(c);
  }
  return out;
}

namespace {

// Phases of the central class sums: t with t(h x h^-1) = t(x) +
// conj_scalar(h, x) over each class, where a consistent t exists; propagated
// over generator conjugations, which span every cycle of the class graph.
struct ClassPhases {
  std::vector<char> regular;
  std::vector<std::vector<std::pair<u32, u32>>> support;  // (element, phase)
};

ClassPhases class_phases(const TwistedAlgebra& T) {
  const PcGroup& G = *T.G;
  const auto& cls = G.classes();
  u32 m = G.order(), e = T.f.e, n = G.ngens();
  ClassPhases out;
  out.regular.assign(cls.rep.size(), 0);
  out.support.resize(cls.rep.size());

  std::vector<u32> tval(m, 0), stamp(m, 0);
  for (u32 c = 0; c < u32(cls.rep.size()); ++c) {
    u32 g0 = cls.rep[c];
    std::vector<std::pair<u32, u32>> sup;
    std::vector<u32> stack{g0};
    stamp[g0] = c + 1;
    tval[g0] = 0;
    sup.push_back({g0, 0});
    bool ok = true;
    while (!stack.empty() && ok) {
      u32 x = stack.back();
      stack.pop_back();
      for (u32 i = 0; i < n && ok; ++i) {
        u32 h = G.gen(i);
        u32 y = G.conj(x, G.inv(h));  // h x h^-1
        u32 tn = u32((u64(tval[x]) + T.conj_scalar(h, x)) % e);
        if (stamp[y] != c + 1) {
          stamp[y] = c + 1;
          tval[y] = tn;
          sup.push_back({y, tn});
          stack.push_back(y);
        } else if (tval[y] != tn) {
          ok = false;
        }
      }
    }
    if (ok) {
      require(sup.size() == cls.size[c], "class phases: orbit missed part of the class");
      out.regular[c] = 1;
      out.support[c] = std::move(sup);
    }
  }
  return out;
}

std::complex<double> unit(double turns) {
  return std::polar(1.0, 2.0 * std::numbers::pi_v<double> * turns);
}

// all block-degree partitions compatible with the exact data, at most two
// collected; degrees descend through p-powers during the search
void partition_dfs(u64 mass, u64 count, u32 p, u64 deg, std::vector<std::pair<u32, u64>>& cur,
                   std::vector<std::vector<std::pair<u32, u64>>>& outs) {
  if (outs.size() >= 2) return;
  if (deg == p) {
    if (count * deg * deg == mass) {
      auto sol = cur;
      if (count) sol.push_back({u32(deg), count});
      outs.push_back(std::move(sol));
    }
    return;
  }
  u64 d2 = deg * deg, sub = deg / p;
  for (u64 t = 0; t * d2 <= mass && t <= count; ++t) {
    u64 rm = mass - t * d2, rc = count - t;
    if (rm < rc * p * p && rm != 0) continue;
    if (rm != 0 && rc == 0) continue;
    if (rm > rc * sub * sub) continue;
    if (t) cur.push_back({u32(deg), t});
    partition_dfs(rm, rc, p, sub, cur, outs);
    if (t) cur.pop_back();
    if (outs.size() >= 2) return;
  }
}

std::vector<WedderburnType> degree_partitions(u64 mass, u64 count, u64 linears, u32 p) {
  std::vector<WedderburnType> out;
  if (count < linears || mass < linears) return out;
  u64 rm = mass - linears, rc = count - linears;
  if (rm == 0) {
    if (rc == 0) {
      WedderburnType t;
      if (linears) t.blocks.push_back({1, linears});
      out.push_back(std::move(t));
    }
    return out;
  }
  u64 dmax = 1;
  while (dmax * p * dmax * p <= rm) dmax *= p;
  if (dmax == 1) return out;
  std::vector<std::pair<u32, u64>> cur;
  std::vector<std::vector<std::pair<u32, u64>>> sols;
  partition_dfs(rm, rc, p, dmax, cur, sols);
  for (auto& s : sols) {
    WedderburnType t;
    if (linears) t.blocks.push_back({1, linears});
    std::reverse(s.begin(), s.end());
    for (auto& b : s) t.blocks.push_back(b);
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

// --- block types ------------------------------------------------------------------

u64 WedderburnType::mass() const {
  u64 s = 0;
  for (auto [d, c] : blocks) s += c * u64(d) * d;
  return s;
}

u64 WedderburnType::block_count() const {
  u64 s = 0;
  for (auto [d, c] : blocks) s += c;
  return s;
}

WedderburnType census_to_type(const DegreeCensus& c) {
  WedderburnType t;
  for (auto [d, n] : c.count)
    if (n) t.blocks.push_back({d, n});
  return t;
}

DegreeCensus type_to_census(const WedderburnType& t) {
  DegreeCensus c;
  for (auto [d, n] : t.blocks)
    if (n) c.count[d] += n;
  return c;
}

// --- spectral route ---------------------------------------------------------------

WedderburnType wedderburn_type_spectral(const PcGroup& G, const Cocycle& f,
                                        const SpectralOptions& opt) {
  TwistedAlgebra T(G, f);
  u32 m = G.order(), e = T.f.e;
  if (m == 1) return WedderburnType{{{1, 1}}};
  u32 p = G.prime();

  ClassPhases ph = class_phases(T);
  std::vector<u32> reg = alpha_regular_classes(G, T.f);
  {
    std::vector<u32> reg2;
    for (u32 c = 0; c < u32(ph.regular.size()); ++c)
      if (ph.regular[c]) reg2.push_back(c);
    require(reg == reg2, "wedderburn: class-sum and commutation criteria disagree");
  }
  u64 B = reg.size();
  u64 m0 = cocycle_descend_projective(T.f, 1).has_value()
               ? G.order() / G.derived_subgroup().order()
               : 0;

  std::vector<WedderburnType> sols = degree_partitions(m, B, m0, p);
  require(!sols.empty(), "wedderburn: no degree partition fits the block data");
  if (sols.size() == 1 && !opt.force_numeric) return sols[0];

  require(m <= opt.max_dim, "wedderburn: dimension exceeds the spectral bound");
  Rng rng(opt.seed);
  auto draw = [&] { return 1.0 + double(rng.below(1u << 30)) / double(1u << 30); };

  for (u32 attempt = 0; attempt < 5; ++attempt) {
    // random self-adjoint central element z + z^* over the class sums
    std::vector<std::complex<double>> coeff(m, 0.0);
    for (u32 c : reg) {
      std::complex<double> w{draw(), draw()};
      for (auto [x, tx] : ph.support[c]) {
        std::complex<double> cx = w * unit(double(tx) / e);
        coeff[x] += cx;
        u32 xi = G.inv(x);
        coeff[xi] += std::conj(cx) * unit(-double(T.f(x, xi)) / e);
      }
    }
    std::vector<std::complex<double>> M(size_t(m) * m, 0.0);
    for (u32 x = 0; x < m; ++x) {
      if (std::abs(coeff[x]) < 1e-15) continue;
      for (u32 y = 0; y < m; ++y)
        M[size_t(G.mult(x, y)) * m + y] += coeff[x] * unit(double(T.f(x, y)) / e);
    }
    auto clusters = hermitian_eigen_clusters(M, m, opt.tol);

    if (clusters.size() != B) continue;
    std::map<u32, u64> bycount;
    u64 total = 0;
    bool good = true;
    for (auto [mean, mult] : clusters) {
      u32 d = u32(std::lround(std::sqrt(double(mult))));
      while (u64(d) * d < mult) ++d;
      if (u64(d) * d != mult) {
        good = false;
        break;
      }
      u32 q = d;
      while (q % p == 0) q /= p;
      if (q != 1) {
        good = false;
        break;
      }
      bycount[d] += 1;
      total += mult;
    }
    if (!good || total != m) continue;
    if ((bycount.count(1) ? bycount[1] : 0) != m0) continue;
    WedderburnType t;
    for (auto [d, c] : bycount) t.blocks.push_back({d, c});
    return t;
  }
  throw Error("wedderburn: spectral resolution failed");
}

// --- extension route --------------------------------------------------------------

WedderburnType wedderburn_type_via_extension(const PcGroup& G, const Cocycle& f) {
  TwistedAlgebra T(G, f);
  u32 d = projective_class_order(T.f);
  if (d == 1) {
    Subgroup K = G.trivial_subgroup();
    CentralCharacter chi{&K, 1, {}};
    WedderburnType t = census_to_type(degree_census_above(G, K, chi));
    require(t.mass() == G.order(), "extension route: mass mismatch");
    return t;
  }
  auto g = cocycle_descend_projective(T.f, d);
  require(g.has_value(), "extension route: descent at the class order failed");
  PcGroup Gt = central_extension(G, *g);
  u32 zgen = Gt.gen(Gt.ngens() - 1);
  Subgroup K = Gt.subgroup({zgen});
  require(K.order() == d && K.is_central(), "extension route: bad central fiber");
  require(K.basis.size() == 1 && K.basis[0] == zgen, "extension route: fiber basis mismatch");
  CentralCharacter chi{&K, d, {1}};
  WedderburnType t = census_to_type(degree_census_above(Gt, K, chi));
  require(t.mass() == G.order(), "extension route: mass mismatch");
  return t;
}

// --- ordinary degrees and central type ---------------------------------------------

WedderburnType ordinary_degree_multiset(const PcGroup& G) {
  WedderburnType t = census_to_type(char_degree_census(G));
  u64 ones = 0;
  for (auto [d, c] : t.blocks)
    if (d == 1) ones = c;
  require(ones == G.order() / G.derived_subgroup().order(),
          "ordinary degrees: linear count mismatch");
  return t;
}

namespace {

bool lone_regular_class(const PcGroup& G, const Cocycle& f) {
  const auto& cls = G.classes();
  for (u32 c = 0; c < u32(cls.rep.size()); ++c) {
    u32 g = cls.rep[c];
    if (g == G.id()) continue;
    bool reg = true;
    for (u32 h : G.centralizer(g))
      if (f(g, h) != f(h, g)) {
        reg = false;
        break;
      }
    if (reg) return false;
  }
  return true;
}

}  // namespace

CentralTypeResult is_central_type(const PcGroup& G, u32 class_cap) {
  u32 m = G.order();
  if (m == 1) return {true, {}};
  u64 rt = u64(std::lround(std::sqrt(double(m))));
  while (rt * rt < m) ++rt;
  if (rt * rt != m) return {false, {}};

  H2Options ho;
  ho.escalate = true;
  CohomologyGroup H = h2(G, ho);
  u64 total = 1;
  for (u32 dv : H.invariants) total *= dv;
  require(total <= class_cap, "central type: cohomology class enumeration too large");

  std::vector<u32> vec(H.invariants.size(), 0);
  for (u64 idx = 1; idx < total; ++idx) {
    u64 k = idx;
    for (size_t t = 0; t < vec.size(); ++t) {
      vec[t] = u32(k % H.invariants[t]);
      k /= H.invariants[t];
    }
    Cocycle R = H.representative(vec);
    if (lone_regular_class(G, R)) return {true, vec};
  }
  return {false, {}};
}

// --- products ----------------------------------------------------------------------

Cocycle cocycle_product(const PcGroup& P, const PcGroup& A, const PcGroup& B, const Cocycle& fa,
                        const Cocycle& fb) {
  require(fa.G == &A && fb.G == &B, "cocycle product: factor mismatch");
  require(fa.e == fb.e, "cocycle product: moduli differ");
  u64 ma = A.order(), mb = B.order(), mp = P.order();
  require(mp == ma * mb, "cocycle product: order mismatch");
  require(mp <= 2048, "cocycle product: table too large");
  // the product layout must place the first factor in the low digits
  Rng rng(0xfacade);
  for (u32 s = 0; s < 64; ++s) {
    u32 a1 = u32(rng.below(ma)), a2 = u32(rng.below(ma));
    u32 b1 = u32(rng.below(mb)), b2 = u32(rng.below(mb));
    require(P.mult(u32(a1 + ma * b1), u32(a2 + ma * b2)) ==
                A.mult(a1, a2) + ma * u64(B.mult(b1, b2)),
            "cocycle product: element layout mismatch");
  }
  Cocycle out{&P, fa.e, std::vector<u32>(size_t(mp) * mp, 0)};
  for (u64 x = 0; x < mp; ++x)
    for (u64 y = 0; y < mp; ++y)
      out.f[x * mp + y] =
          u32((u64(fa(u32(x % ma), u32(y % ma))) + fb(u32(x / ma), u32(y / ma))) % fa.e);
  return out;
}

}  // namespace twistclass
