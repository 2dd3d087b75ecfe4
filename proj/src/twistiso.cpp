#include "twistclass/twistiso.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "twistclass/clifford.hpp"

namespace twistclass {

namespace {

std::string join_u32(const std::vector<u32>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); i++) os << (i ? "," : "") << v[i];
  return os.str();
}

// degree partition from block count and total mass when at most one partition
// of |G| into b p-power squares >= p^2 exists; nullopt when ambiguous
std::optional<WedderburnType> solve_degrees(u32 p, u64 mass, u64 blocks, u32 kmax) {
  std::vector<u64> degs;  // p^1 .. p^kmax
  for (u32 k = 1; k <= kmax; k++) degs.push_back(ipow(p, k));
  std::vector<u64> counts(degs.size(), 0), found;
  bool unique = true;
  // small backtracking over multiplicities, early exit on a second solution
  auto rec = [&](auto&& self, size_t i, u64 b, u64 m) -> void {
    if (!unique) return;
    if (i + 1 == degs.size()) {
      u64 d2 = degs[i] * degs[i];
      if (m % d2 == 0 && m / d2 == b) {
        counts[i] = b;
        if (!found.empty()) {
          unique = std::equal(found.begin(), found.end(), counts.begin());
          return;
        }
        found = counts;
      }
      return;
    }
    u64 d2 = degs[i] * degs[i];
    for (u64 c = 0; c <= b && c * d2 <= m; c++) {
      counts[i] = c;
      self(self, i + 1, b - c, m - c * d2);
    }
    counts[i] = 0;
  };
  rec(rec, 0, blocks, mass);
  if (!unique || found.empty()) return std::nullopt;
  WedderburnType t;
  for (size_t i = 0; i < degs.size(); i++)
    if (found[i]) t.blocks.push_back({(u32)degs[i], found[i]});
  return t;
}

}  // namespace

// --- type maps ----------------------------------------------------------------

u64 TypeMap::class_index(const std::vector<u32>& cls) const {
  require(cls.size() == h2.invariants.size(), "TypeMap: class vector length mismatch");
  u64 idx = 0;
  for (size_t i = 0; i < cls.size(); i++) {
    require(cls[i] < h2.invariants[i], "TypeMap: class coordinate out of range");
    idx = idx * h2.invariants[i] + cls[i];
  }
  return idx;
}

std::vector<u32> TypeMap::class_at(u64 idx) const {
  std::vector<u32> cls(h2.invariants.size(), 0);
  for (size_t i = cls.size(); i-- > 0;) {
    cls[i] = (u32)(idx % h2.invariants[i]);
    idx /= h2.invariants[i];
  }
  require(idx == 0, "TypeMap: class index out of range");
  return cls;
}

std::map<std::vector<std::pair<u32, u64>>, u64> TypeMap::histogram() const {
  std::map<std::vector<std::pair<u32, u64>>, u64> h;
  for (const auto& t : types) h[t.blocks]++;
  return h;
}

WedderburnType twist_class_type(const PcGroup& G, const Cocycle& f) {
  if (projective_class_order(f) == 1) return ordinary_degree_multiset(G);
  u64 blocks = alpha_regular_classes(G, f).size();
  u64 p = 0;
  u32 n = 0;
  require(is_prime_power(G.order(), p, n), "twist_class_type: group order not a prime power");
  // a nontrivial class admits no one-dimensional blocks, so degrees start at p
  auto t = solve_degrees((u32)p, G.order(), blocks, n / 2);
  if (t) return *t;
  return wedderburn_type_via_extension(G, f);
}

TypeMap type_map(const PcGroup& G, CohomologyGroup h2g, const TypeMapOptions& opt) {
  require(h2g.has_coordinates(), "type_map: cohomology group carries no coordinate map");
  TypeMap tm;
  tm.h2 = std::move(h2g);
  u64 total = tm.h2.order();
  tm.types.resize(total);
  for (u64 idx = 0; idx < total; idx++) {
    std::vector<u32> cls = tm.class_at(idx);
    bool zero = std::all_of(cls.begin(), cls.end(), [](u32 c) { return c == 0; });
    if (zero) {
      tm.types[idx] = ordinary_degree_multiset(G);
      continue;
    }
    Cocycle f = tm.h2.representative(cls);
    tm.types[idx] = twist_class_type(G, f);
    if (opt.cross_check) {
      SpectralOptions so;
      so.force_numeric = true;
      WedderburnType w = wedderburn_type_spectral(G, f, so);
      require(w == tm.types[idx], "type_map: spectral backend disagrees with the count route");
    }
  }
  return tm;
}

TypeMap type_map(const PcGroup& G, const TypeMapOptions& opt) {
  return type_map(G, h2(G, opt.h2), opt);
}

// --- generalized corank ----------------------------------------------------------

CorankReport corank_from_order(u32 p, u32 n, u64 h2_order) {
  u32 v = valuation(h2_order, p);
  require(ipow(p, v) == h2_order, "corank: |H^2| is not a power of p");
  CorankReport r;
  r.n = n;
  r.h2_order = h2_order;
  r.s = i64((n - 1) * (n - 2) / 2) + 1 - i64(v);
  r.t = r.s + i64(n) - 2;
  return r;
}

std::vector<u32> h2_invariants_routed(const PcGroup& G, const H2Options& opt) {
  if (G.is_abelian()) return h2_abelian(G).invariants;
  H2Options o = opt;
  o.escalate = true;
  if (G.order() <= o.hard_cap) return h2(G, o).invariants;
  // peel a central order-p direct factor outside the Frattini subgroup
  std::vector<u32> fr;
  for (u32 i = 0; i < G.ngens(); i++) {
    fr.push_back(G.power(G.gen(i), (i64)G.prime()));
    for (u32 j = 0; j < i; j++) fr.push_back(G.commutator(G.gen(i), G.gen(j)));
  }
  Subgroup phi = G.subgroup(fr);
  for (u32 z : G.center()) {
    if (z == G.id() || phi.contains(z) || G.element_order(z) != G.prime()) continue;
    Quotient q = G.quotient(G.subgroup({z}));
    std::vector<u32> rest = h2_invariants_routed(*q.Q, opt);
    return h2_kuenneth_invariants(rest, q.Q->abelian_invariants(), {}, {G.prime()});
  }
  fail("h2_invariants_routed: order " + std::to_string(G.order()) +
       " exceeds the direct solver cap and no central order-p direct factor splits off");
}

CorankReport generalized_corank(const PcGroup& G, const H2Options& opt) {
  u64 p = 0;
  u32 n = 0;
  require(is_prime_power(G.order(), p, n), "generalized_corank: order not a prime power");
  u64 h2o = 1;
  for (u32 d : h2_invariants_routed(G, opt)) h2o *= d;
  return corank_from_order((u32)p, n, h2o);
}

// --- pc-group isomorphism search ---------------------------------------------------

std::optional<std::vector<u32>> iso_search(const PcGroup& G, const PcGroup& H, u64 budget) {
  if (G.order() != H.order() || G.prime() != H.prime()) return std::nullopt;
  const u32 n = G.ngens();
  const auto& clG = G.classes();
  const auto& clH = H.classes();
  if (clG.rep.size() != clH.rep.size()) return std::nullopt;

  // candidate images per generator: element order and class size must match
  std::vector<u32> ordH(H.order());
  for (u32 x = 0; x < H.order(); x++) ordH[x] = H.element_order(x);
  std::vector<std::vector<u32>> cand(n);
  for (u32 i = 0; i < n; i++) {
    u32 gi = G.gen(i);
    u32 og = G.element_order(gi);
    u64 cs = clG.size[clG.class_of[gi]];
    for (u32 x = 0; x < H.order(); x++)
      if (ordH[x] == og && clH.size[clH.class_of[x]] == cs) cand[i].push_back(x);
    if (cand[i].empty()) return std::nullopt;
  }

  // order of the tail subgroup <g_i, ..., g_{n-1}>
  std::vector<u64> tail(n + 1, 1);
  for (u32 i = n; i-- > 0;) tail[i] = tail[i + 1] * G.presentation().rel_order[i];

  std::vector<u32> im(n, 0);
  u64 used = 0;
  const auto& pres = G.presentation();

  auto eval_word = [&](const Word& w) {
    u32 r = H.id();
    for (const Letter& l : w) r = H.mult(r, H.power(im[l.gen], (i64)l.exp));
    return r;
  };

  auto dfs = [&](auto&& self, u32 level) -> bool {
    if (level == 0) {
      std::vector<u32> gens(im.begin(), im.end());
      return H.subgroup(gens).order() == H.order();
    }
    u32 i = level - 1;
    for (u32 x : cand[i]) {
      if (++used > budget) return false;
      im[i] = x;
      if (H.power(x, (i64)pres.rel_order[i]) != eval_word(pres.power[i])) continue;
      bool ok = true;
      for (u32 j = i + 1; j < n && ok; j++)
        ok = H.commutator(im[j], x) == eval_word(pres.comm[j][i]);
      if (!ok) continue;
      // relations hold on the tail presentation, so the partial map is a
      // homomorphism from <g_i, ...>; injectivity = image size check
      std::vector<u32> gens(im.begin() + i, im.end());
      if (H.subgroup(gens).order() != tail[i]) continue;
      if (self(self, i)) return true;
      if (used > budget) return false;
    }
    return false;
  };
  if (dfs(dfs, n)) return im;
  return std::nullopt;
}

// --- commuting-square fast path ------------------------------------------------------

namespace {

// full map tables for delta (on a subgroup) and sigma (on a quotient group),
// with multiplicativity and bijectivity checks
std::optional<std::vector<u32>> subgroup_map_table(const PcGroup& H, const Subgroup& DG,
                                                   const Subgroup& DH,
                                                   const std::vector<u32>& delta) {
  if (delta.size() != DG.basis.size()) return std::nullopt;
  for (u32 d : delta)
    if (!DH.contains(d)) return std::nullopt;
  std::vector<u32> tab(DG.members.size());
  for (size_t a = 0; a < DG.members.size(); a++) {
    auto co = DG.decompose(DG.members[a]);
    if (!co) return std::nullopt;
    u32 y = H.id();
    for (size_t t = 0; t < co->size(); t++) y = H.mult(y, H.power(delta[t], (i64)(*co)[t]));
    tab[a] = y;
  }
  // multiplicative + bijective onto DH
  std::set<u32> img(tab.begin(), tab.end());
  if (img.size() != DH.members.size()) return std::nullopt;
  auto pos = [&](u32 x) {
    return (size_t)(std::lower_bound(DG.members.begin(), DG.members.end(), x) -
                    DG.members.begin());
  };
  const PcGroup& G = *DG.G;
  for (u32 a : DG.members)
    for (u32 b : DG.members)
      if (tab[pos(G.mult(a, b))] != H.mult(tab[pos(a)], tab[pos(b)])) return std::nullopt;
  return tab;
}

std::optional<std::vector<u32>> quotient_map_table(const PcGroup& Q1, const PcGroup& Q2,
                                                   const std::vector<u32>& sigma) {
  if (sigma.size() != Q1.ngens()) return std::nullopt;
  for (u32 s : sigma)
    if (s >= Q2.order()) return std::nullopt;
  std::vector<u32> tab(Q1.order());
  for (u32 x = 0; x < Q1.order(); x++) {
    u32 y = Q2.id();
    for (u32 i = 0; i < Q1.ngens(); i++) y = Q2.mult(y, Q2.power(sigma[i], (i64)Q1.digit(x, i)));
    tab[x] = y;
  }
  std::set<u32> img(tab.begin(), tab.end());
  if (img.size() != Q2.order() || Q1.order() != Q2.order()) return std::nullopt;
  for (u32 a = 0; a < Q1.order(); a++)
    for (u32 b = 0; b < Q1.order(); b++)
      if (tab[Q1.mult(a, b)] != Q2.mult(tab[a], tab[b])) return std::nullopt;
  return tab;
}

Cocycle push_cocycle(const PcGroup& Q2, const std::vector<u32>& sigma_inv, const Cocycle& f) {
  Cocycle g;
  g.G = &Q2;
  g.e = f.e;
  g.f.assign((size_t)Q2.order() * Q2.order(), 0);
  for (u32 u = 0; u < Q2.order(); u++)
    for (u32 v = 0; v < Q2.order(); v++)
      g.f[(size_t)u * Q2.order() + v] = f(sigma_inv[u], sigma_inv[v]);
  return g;
}

std::vector<u32> coords_of(const CohomologyGroup& co, const Cocycle& f) {
  if (f.e == co.e) return co.coordinate_of(f);
  require(co.e % f.e == 0, "coordinate map: incompatible cocycle modulus");
  return co.coordinate_of(cocycle_change_modulus(f, co.e));
}

bool all_equal_p(const std::vector<u32>& inv, u32 p) {
  return std::all_of(inv.begin(), inv.end(), [&](u32 d) { return d == p; });
}

}  // namespace

SquareCheck square_check(const PcGroup& G, const PcGroup& H, const HomWitness& w,
                         const H2Options& opt_in) {
  H2Options opt = opt_in;
  opt.escalate = true;
  SquareCheck sc;
  const Subgroup& DG = G.derived_subgroup();
  const Subgroup& DH = H.derived_subgroup();
  sc.derived_central = DG.is_central() && DH.is_central();
  if (!sc.derived_central) {
    sc.note = "derived subgroups not central";
    return sc;
  }
  auto dtab = subgroup_map_table(H, DG, DH, w.delta);
  sc.delta_iso = dtab.has_value();
  if (!sc.delta_iso) {
    sc.note = "delta is not an isomorphism of the derived subgroups";
    return sc;
  }
  Quotient qG = G.quotient(DG);
  Quotient qH = H.quotient(DH);
  auto stab = quotient_map_table(*qG.Q, *qH.Q, w.sigma);
  sc.sigma_iso = stab.has_value();
  if (!sc.sigma_iso) {
    sc.note = "sigma is not an isomorphism of the abelianizations";
    return sc;
  }
  std::vector<u32> sigma_inv(qH.Q->order());
  for (u32 x = 0; x < qG.Q->order(); x++) sigma_inv[(*stab)[x]] = x;

  try {
    sc.seq_g = exact_sequence_check(G, opt);
    sc.seq_h = exact_sequence_check(H, opt);
  } catch (const Error& err) {
    sc.note = std::string("sequence check unavailable: ") + err.what();
    return sc;
  }
  if (!sc.seq_g.exact || !sc.seq_h.exact) {
    sc.note = "restriction sequence not exact";
    return sc;
  }

  CohomologyGroup coQ1 = h2(*qG.Q);
  CohomologyGroup coQ2 = h2(*qH.Q);
  require(coQ1.has_coordinates() && coQ2.has_coordinates(),
          "square_check: abelianization cohomology carries no coordinates");

  // exponent of the derived subgroups (they are isomorphic via delta)
  u32 e = 1;
  for (u32 b : DH.basis) e = (u32)(u64(e) / gcd_u64(e, H.element_order(b)) * H.element_order(b));

  // transgression tables must agree classwise for every basis character
  sc.square_commutes = true;
  for (size_t t = 0; t < DH.basis.size() && sc.square_commutes; t++) {
    CentralCharacter chi;
    chi.K = &DH;
    chi.e = e;
    chi.on_basis.assign(DH.basis.size(), 0);
    chi.on_basis[t] = e / H.element_order(DH.basis[t]);
    Cocycle f2 = transgress(H, qH, chi);

    CentralCharacter chi_d;
    chi_d.K = &DG;
    chi_d.e = e;
    chi_d.on_basis.resize(DG.basis.size());
    for (size_t s = 0; s < DG.basis.size(); s++) chi_d.on_basis[s] = chi.eval(w.delta[s]);
    Cocycle f1 = transgress(G, qG, chi_d);

    Cocycle f1s = push_cocycle(*qH.Q, sigma_inv, f1);
    if (coords_of(coQ2, f1s) != coords_of(coQ2, f2)) {
      sc.square_commutes = false;
      sc.note = "transgression square fails on basis character " + std::to_string(t);
      return sc;
    }
  }
  sc.ok = true;

  // induced class map in coordinates, when both multipliers are in reach and
  // every chain is elementary (the in-scope cases)
  H2Options ho = opt;
  ho.escalate = true;
  if (G.order() > ho.hard_cap || H.order() > ho.hard_cap) {
    sc.note = "criterion satisfied; multiplier coordinates beyond the solver cap";
    return sc;
  }
  CohomologyGroup hG = h2(G, ho), hH = h2(H, ho);
  const u32 p = G.prime();
  if (!all_equal_p(hG.invariants, p) || !all_equal_p(hH.invariants, p) ||
      !all_equal_p(coQ1.invariants, p) || !all_equal_p(coQ2.invariants, p)) {
    sc.note = "criterion satisfied; non-elementary chains, class map not materialized";
    return sc;
  }
  size_t rG = hG.invariants.size(), rH = hH.invariants.size(), r1 = coQ1.invariants.size(),
         r2 = coQ2.invariants.size();
  ZMat MG((size_t)rG, r1, p), MH((size_t)rH, r2, p), S(r2, r1, p);
  for (size_t t = 0; t < r1; t++) {
    std::vector<u32> unit(r1, 0);
    unit[t] = 1;
    Cocycle rep = coQ1.representative(unit);
    std::vector<u32> infc = coords_of(hG, inflate(G, qG, rep));
    for (size_t i = 0; i < rG; i++) MG.at(i, t) = infc[i];
    std::vector<u32> sc2 = coords_of(coQ2, push_cocycle(*qH.Q, sigma_inv, rep));
    for (size_t i = 0; i < r2; i++) S.at(i, t) = sc2[i];
  }
  for (size_t t = 0; t < r2; t++) {
    std::vector<u32> unit(r2, 0);
    unit[t] = 1;
    std::vector<u32> infc = coords_of(hH, inflate(H, qH, coQ2.representative(unit)));
    for (size_t i = 0; i < rH; i++) MH.at(i, t) = infc[i];
  }
  sc.psi = ZMat(rH, rG, p);
  for (size_t j = 0; j < rG; j++) {
    std::vector<u32> ej(rG, 0);
    ej[j] = 1;
    auto x = mod_solve(MG, ej);
    require(x.has_value(), "square_check: inflation preimage missing despite exact sequence");
    // psi e_j = inf_H(sigma-pushforward of the preimage)
    std::vector<u32> sx(r2, 0);
    for (size_t i = 0; i < r2; i++) {
      u64 acc = 0;
      for (size_t k = 0; k < r1; k++) acc += u64(S.at(i, k)) * (*x)[k];
      sx[i] = (u32)(acc % p);
    }
    for (size_t i = 0; i < rH; i++) {
      u64 acc = 0;
      for (size_t k = 0; k < r2; k++) acc += u64(MH.at(i, k)) * sx[k];
      sc.psi.at(i, j) = (u32)(acc % p);
    }
  }
  sc.psi_ready = true;
  return sc;
}

// --- representation-group route -------------------------------------------------------

CoverMatch cover_census_match(const PcGroup& G, const CoverData& cg, const PcGroup& H,
                              const CoverData& ch, u64 h2_order, const ZMat* sigma_dual) {
  CoverMatch cm;
  require(cg.cover && ch.cover, "cover_census_match: missing cover group");
  Subgroup KG = cg.cover->subgroup(cg.kernel_gens);
  Subgroup KH = ch.cover->subgroup(ch.kernel_gens);
  cm.covers_verified = is_representation_group(*cg.cover, KG, G, h2_order) &&
                       is_representation_group(*ch.cover, KH, H, h2_order);
  if (!cm.covers_verified) {
    cm.mismatch = "cover verification failed";
    return cm;
  }
  const u32 p = G.prime();
  for (u32 b : KG.basis)
    require(cg.cover->element_order(b) == p, "cover_census_match: kernel not elementary");
  for (u32 b : KH.basis)
    require(ch.cover->element_order(b) == p, "cover_census_match: kernel not elementary");
  require(KG.basis.size() == KH.basis.size(), "cover_census_match: kernel ranks differ");
  const size_t r = KG.basis.size();

  std::vector<u32> tuple(r, 0);
  cm.all_match = true;
  for (u64 idx = 0; idx < ipow(p, (u32)r); idx++) {
    u64 v = idx;
    for (size_t t = 0; t < r; t++) {
      tuple[t] = (u32)(v % p);
      v /= p;
    }
    CentralCharacter chiG;
    chiG.K = &KG;
    chiG.e = p;
    chiG.on_basis = tuple;
    CentralCharacter chiH;
    chiH.K = &KH;
    chiH.e = p;
    if (sigma_dual) {
      require(sigma_dual->rows == r && sigma_dual->cols == r && sigma_dual->mod == p,
              "cover_census_match: sigma matrix shape mismatch");
      chiH.on_basis.assign(r, 0);
      for (size_t i = 0; i < r; i++) {
        u64 acc = 0;
        for (size_t j = 0; j < r; j++) acc += u64(sigma_dual->at(i, j)) * tuple[j];
        chiH.on_basis[i] = (u32)(acc % p);
      }
    } else {
      chiH.on_basis = tuple;
    }
    DegreeCensus c1 = degree_census_above(*cg.cover, KG, chiG);
    DegreeCensus c2 = degree_census_above(*ch.cover, KH, chiH);
    cm.characters++;
    if (!(c1 == c2)) {
      cm.all_match = false;
      cm.mismatch = "census differs above character (" + join_u32(tuple) + ")";
      return cm;
    }
  }
  return cm;
}

// --- the psi search ---------------------------------------------------------------------

namespace {

struct BudgetHit {};

struct PsiSearch {
  const std::vector<u32>& inv;  // common chain
  const std::vector<int>& tG, tH;
  u64 budget, used = 0;
  std::vector<u64> strideG, strideH_unused;
  std::vector<std::pair<u64, u64>> span;  // (G class index, H class index)
  std::vector<char> taken;
  std::vector<std::vector<u32>> cols;
  u64 total;

  PsiSearch(const std::vector<u32>& inv_, const std::vector<int>& tg, const std::vector<int>& th,
            u64 b)
      : inv(inv_), tG(tg), tH(th), budget(b) {
    total = 1;
    for (u32 d : inv) total *= d;
    strideG.assign(inv.size(), 1);
    for (size_t i = inv.size(); i-- > 1;) strideG[i - 1] = strideG[i] * inv[i];
    span.push_back({0, 0});
    taken.assign(total, 0);
    taken[0] = 1;
  }

  // component-wise sum of two class indices
  u64 add(u64 a, u64 b) const {
    u64 r = 0;
    for (size_t i = 0; i < inv.size(); i++) {
      u64 s = strideG[i];
      r += ((a / s + b / s) % inv[i]) * s;
      a %= s;
      b %= s;
    }
    return r;
  }
  u64 scale(u64 a, u32 k) const {
    u64 r = 0;
    for (size_t i = 0; i < inv.size(); i++) {
      u64 s = strideG[i];
      r += ((a / s) * k % inv[i]) * s;
      a %= s;
    }
    return r;
  }
  u32 order_of(u64 a) const {
    u32 o = 1;
    for (size_t i = 0; i < inv.size(); i++) {
      u64 s = strideG[i];
      u32 c = (u32)((a / s) % inv[i]);
      u32 oi = inv[i] / (u32)gcd_u64(c, inv[i]);
      o = (u32)(u64(o) / gcd_u64(o, oi) * oi);
      a %= s;
    }
    return o;
  }

  bool dfs(size_t j) {
    if (j == inv.size()) return true;
    u64 ej = strideG[j];  // index of the j-th chain generator
    for (u64 w = 1; w < total; w++) {
      if (++used > budget) throw BudgetHit{};
      if (tH[w] != tG[ej]) continue;
      if (inv[j] % order_of(w) != 0) continue;
      // extend the span by the new column; all new pairs must be fresh on the
      // H side and type-matched
      size_t base = span.size();
      bool ok = true;
      std::vector<u64> marked;
      for (u32 k = 1; k < inv[j] && ok; k++) {
        u64 kej = ej * k, kw = scale(w, k);
        for (size_t t = 0; t < base && ok; t++) {
          u64 a = span[t].first + kej;  // no carries: component j is zero on the prefix span
          u64 b = add(span[t].second, kw);
          if (taken[b] || tG[a] != tH[b]) {
            ok = false;
            break;
          }
          taken[b] = 1;
          marked.push_back(b);
          span.push_back({a, b});
        }
      }
      if (ok) {
        std::vector<u32> col(inv.size());
        u64 v = w;
        for (size_t i = 0; i < inv.size(); i++) {
          col[i] = (u32)(v / strideG[i]);
          v %= strideG[i];
        }
        cols.push_back(col);
        if (dfs(j + 1)) return true;
        cols.pop_back();
      }
      for (u64 b : marked) taken[b] = 0;
      span.resize(base);
    }
    return false;
  }
};

std::vector<int> intern_types(const TypeMap& tm, std::map<std::vector<std::pair<u32, u64>>, int>& dict) {
  std::vector<int> out(tm.types.size());
  for (size_t i = 0; i < tm.types.size(); i++) {
    auto it = dict.find(tm.types[i].blocks);
    if (it == dict.end()) it = dict.insert({tm.types[i].blocks, (int)dict.size()}).first;
    out[i] = it->second;
  }
  return out;
}

ZMat identity_psi(const std::vector<u32>& inv) {
  u32 m = inv.empty() ? 1 : *std::max_element(inv.begin(), inv.end());
  ZMat w = ZMat::identity(inv.size(), m);
  return w;
}

}  // namespace

// --- decide -------------------------------------------------------------------------------

TwistIsoVerdict decide_twist_iso(const PcGroup& G, const PcGroup& H, const DecideOptions& opt) {
  TwistIsoVerdict v;
  if (G.order() != H.order()) {
    v.kind = TwistIsoVerdict::Kind::NotEquivalent;
    v.obstruction = Obstruction::TypeHistogramMismatch;
    v.note = "orders differ, so every twisted type histogram does";
    return v;
  }
  if (!(char_degree_census(G) == char_degree_census(H))) {
    v.kind = TwistIsoVerdict::Kind::NotEquivalent;
    v.obstruction = Obstruction::TypeHistogramMismatch;
    v.note = "ordinary degree multisets differ (the type at the zero class)";
    return v;
  }

  H2Options ho = opt.h2;
  ho.escalate = true;
  bool in_cap = G.order() <= ho.hard_cap;

  std::optional<std::vector<u32>> invG = opt.h2_g, invH = opt.h2_h;
  if (!invG) {
    try {
      invG = h2_invariants_routed(G, ho);
    } catch (const Error&) {
    }
  }
  if (!invH) {
    try {
      invH = h2_invariants_routed(H, ho);
    } catch (const Error&) {
    }
  }
  if (invG && invH && *invG != *invH) {
    v.kind = TwistIsoVerdict::Kind::NotEquivalent;
    v.obstruction = Obstruction::H2Mismatch;
    v.note = "multiplier invariants differ: (" + join_u32(*invG) + ") vs (" + join_u32(*invH) + ")";
    return v;
  }
  if (invG && invH && invG->empty()) {
    v.kind = TwistIsoVerdict::Kind::Equivalent;
    v.witness = ZMat(0, 0, 1);
    v.witness_ready = true;
    v.note = "trivial multipliers and equal ordinary degree multisets";
    return v;
  }

  if (opt.hom) {
    SquareCheck sq = square_check(G, H, *opt.hom, ho);
    if (sq.ok) {
      v.kind = TwistIsoVerdict::Kind::Equivalent;
      if (sq.psi_ready) {
        require(verify_witness(G, H, sq.psi),
                "decide_twist_iso: induced class map fails type verification");
        v.witness = sq.psi;
        v.witness_ready = true;
        v.note = "commuting-square witness; induced class map verified on every class";
      } else {
        v.note = "commuting-square witness; " + sq.note;
      }
      return v;
    }
    v.note = "hom data rejected (" + sq.note + "); ";
  }

  if (opt.cover_g && opt.cover_h && invG) {
    u64 h2o = 1;
    for (u32 d : *invG) h2o *= d;
    CoverMatch cm =
        cover_census_match(G, *opt.cover_g, H, *opt.cover_h, h2o, opt.cover_sigma_dual);
    if (cm.covers_verified && cm.all_match) {
      v.kind = TwistIsoVerdict::Kind::Equivalent;
      v.note += "per-character census bijection over verified stem covers (" +
                std::to_string(cm.characters) + " characters)";
      if (in_cap) {
        // transport the transgression bases through explicit isomorphisms
        // G -> cover/K and H -> cover/K to produce a checkable matrix
        Subgroup KG = opt.cover_g->cover->subgroup(opt.cover_g->kernel_gens);
        Subgroup KH = opt.cover_h->cover->subgroup(opt.cover_h->kernel_gens);
        Quotient qg = opt.cover_g->cover->quotient(KG);
        Quotient qh = opt.cover_h->cover->quotient(KH);
        auto ig = iso_search(G, *qg.Q);
        auto ih = iso_search(H, *qh.Q);
        CohomologyGroup hG = h2(G, ho), hH = h2(H, ho);
        const u32 p = G.prime();
        if (ig && ih && all_equal_p(hG.invariants, p) && all_equal_p(hH.invariants, p) &&
            KG.basis.size() == hG.invariants.size()) {
          auto full_map = [](const PcGroup& A, const PcGroup& B, const std::vector<u32>& gi) {
            std::vector<u32> tab(A.order());
            for (u32 x = 0; x < A.order(); x++) {
              u32 y = B.id();
              for (u32 i = 0; i < A.ngens(); i++)
                y = B.mult(y, B.power(gi[i], (i64)A.digit(x, i)));
              tab[x] = y;
            }
            return tab;
          };
          std::vector<u32> mg = full_map(G, *qg.Q, *ig), mh = full_map(H, *qh.Q, *ih);
          size_t r = KG.basis.size();
          ZMat CG(r, r, p), CH(r, r, p);
          for (size_t t = 0; t < r; t++) {
            CentralCharacter chi;
            chi.e = p;
            chi.on_basis.assign(r, 0);
            chi.on_basis[t] = 1;
            chi.K = &KG;
            Cocycle fg = transgress(*opt.cover_g->cover, qg, chi);
            Cocycle fgG = trivial_cocycle(G, fg.e);
            fgG.f.assign((size_t)G.order() * G.order(), 0);
            for (u32 x = 0; x < G.order(); x++)
              for (u32 y = 0; y < G.order(); y++)
                fgG.f[(size_t)x * G.order() + y] = fg(mg[x], mg[y]);
            auto cg2 = coords_of(hG, fgG);
            for (size_t i = 0; i < r; i++) CG.at(i, t) = cg2[i];
            chi.K = &KH;
            Cocycle fh = transgress(*opt.cover_h->cover, qh, chi);
            Cocycle fhH = trivial_cocycle(H, fh.e);
            fhH.f.assign((size_t)H.order() * H.order(), 0);
            for (u32 x = 0; x < H.order(); x++)
              for (u32 y = 0; y < H.order(); y++)
                fhH.f[(size_t)x * H.order() + y] = fh(mh[x], mh[y]);
            auto ch2 = coords_of(hH, fhH);
            for (size_t i = 0; i < r; i++) CH.at(i, t) = ch2[i];
          }
          // psi = CH * sigma * CG^{-1} on multiplier coordinates
          ZMat Sg = opt.cover_sigma_dual ? *opt.cover_sigma_dual : ZMat::identity(r, p);
          ZMat psi(r, r, p);
          bool solved = true;
          for (size_t j = 0; j < r && solved; j++) {
            std::vector<u32> ej(r, 0);
            ej[j] = 1;
            auto x = mod_solve(CG, ej);
            if (!x) {
              solved = false;
              break;
            }
            for (size_t i = 0; i < r; i++) {
              u64 acc = 0;
              for (size_t k = 0; k < r; k++)
                for (size_t l = 0; l < r; l++)
                  acc += u64(CH.at(i, k)) * Sg.at(k, l) % p * (*x)[l];
              psi.at(i, j) = (u32)(acc % p);
            }
          }
          if (solved && verify_witness(G, H, psi)) {
            v.witness = psi;
            v.witness_ready = true;
            v.note += "; transported class map verified on every class";
          }
        }
      }
      return v;
    }
    v.note += "cover route inconclusive (" + cm.mismatch + "); ";
  }

  // order-p^4 criterion for groups beyond the coordinate cap
  if (!in_cap && invG && invH) {
    u64 p = 0;
    u32 n = 0;
    if (is_prime_power(G.order(), p, n) && n == 4 && opt.cover_g && opt.cover_h) {
      P4Data dg{*invG, opt.cover_g}, dh{*invH, opt.cover_h};
      if (p4_criterion(G, H, dg, dh)) {
        v.kind = TwistIsoVerdict::Kind::Equivalent;
        v.note += "equal ordinary types, equal multipliers, neither group of central type";
        return v;
      }
    }
  }

  if (!in_cap || !invG || !invH) {
    v.kind = TwistIsoVerdict::Kind::Unknown;
    v.note += "multiplier classes out of reach for the remaining routes";
    return v;
  }

  TypeMapOptions tmo;
  tmo.h2 = ho;
  TypeMap tmG = type_map(G, tmo), tmH = type_map(H, tmo);
  if (tmG.histogram() != tmH.histogram()) {
    v.kind = TwistIsoVerdict::Kind::NotEquivalent;
    v.obstruction = Obstruction::TypeHistogramMismatch;
    v.note = "type histograms over the multiplier classes differ";
    return v;
  }
  if (tmG.types == tmH.types) {
    v.kind = TwistIsoVerdict::Kind::Equivalent;
    v.witness = identity_psi(tmG.h2.invariants);
    v.witness_ready = true;
    v.note += "type maps agree pointwise; identity witness";
    return v;
  }

  std::map<std::vector<std::pair<u32, u64>>, int> dict;
  std::vector<int> tg = intern_types(tmG, dict), th = intern_types(tmH, dict);
  PsiSearch ps(tmG.h2.invariants, tg, th, opt.budget);
  try {
    if (ps.dfs(0)) {
      v.kind = TwistIsoVerdict::Kind::Equivalent;
      v.witness = ZMat(ps.cols[0].size(), ps.cols.size(),
                       *std::max_element(tmG.h2.invariants.begin(), tmG.h2.invariants.end()));
      for (size_t j = 0; j < ps.cols.size(); j++)
        for (size_t i = 0; i < ps.cols[j].size(); i++) v.witness.at(i, j) = ps.cols[j][i];
      v.witness_ready = true;
      v.budget_used = ps.used;
      v.note += "lexicographically least type-preserving class isomorphism";
      return v;
    }
    v.kind = TwistIsoVerdict::Kind::NotEquivalent;
    v.obstruction = Obstruction::ExhaustedSearch;
    v.budget_used = ps.used;
    v.note = "no type-preserving class isomorphism exists (search exhausted)";
    return v;
  } catch (const BudgetHit&) {
    v.kind = TwistIsoVerdict::Kind::Unknown;
    v.budget_used = opt.budget;
    v.note += "candidate budget exhausted";
    return v;
  }
}

// --- witness verification ---------------------------------------------------------------------

bool verify_witness(const PcGroup& G, const PcGroup& H, const ZMat& psi) {
  H2Options ho;
  ho.escalate = true;
  TypeMapOptions tmo;
  tmo.h2 = ho;
  TypeMap tmG = type_map(G, tmo), tmH = type_map(H, tmo);
  const auto& dG = tmG.h2.invariants;
  const auto& dH = tmH.h2.invariants;
  if (tmG.h2.order() != tmH.h2.order()) return false;
  if (psi.rows != dH.size() || psi.cols != dG.size()) return false;
  if (dG.empty()) return true;  // trivial multipliers, ordinary types compared below anyway

  // homomorphism on the chains: column j must have order dividing dG[j]
  for (size_t j = 0; j < dG.size(); j++)
    for (size_t i = 0; i < dH.size(); i++) {
      u32 c = psi.at(i, j) % dH[i];
      u32 oi = dH[i] / (u32)gcd_u64(c, dH[i]);
      if (dG[j] % oi != 0) return false;
    }

  // bijectivity + type preservation class by class
  std::set<u64> image;
  u64 total = tmG.h2.order();
  for (u64 idx = 0; idx < total; idx++) {
    std::vector<u32> cls = tmG.class_at(idx);
    std::vector<u32> out(dH.size(), 0);
    for (size_t i = 0; i < dH.size(); i++) {
      u64 acc = 0;
      for (size_t j = 0; j < dG.size(); j++) acc += u64(psi.at(i, j)) * cls[j];
      out[i] = (u32)(acc % dH[i]);
    }
    u64 oidx = tmH.class_index(out);
    image.insert(oidx);
    if (!(tmG.types[idx] == tmH.types[oidx])) return false;
  }
  return image.size() == total;
}

bool verify_witness(const PcGroup& G, const PcGroup& H, const HomWitness& w) {
  return square_check(G, H, w).ok;
}

// --- the order-p^4 criterion --------------------------------------------------------------------

namespace {

// central-type test over a verified stem cover: the transgressed classes
// exhaust the multiplier, so it suffices that some nonzero kernel character
// leaves only the identity alpha-regular
bool central_type_via_cover(const PcGroup& G, const CoverData& cd, u64 h2_order) {
  Subgroup K = cd.cover->subgroup(cd.kernel_gens);
  require(is_representation_group(*cd.cover, K, G, h2_order),
          "p4_criterion: supplied cover fails stem verification");
  const u32 p = G.prime();
  for (u32 b : K.basis)
    require(cd.cover->element_order(b) == p, "p4_criterion: kernel not elementary");
  Quotient q = cd.cover->quotient(K);
  require(iso_search(G, *q.Q).has_value(),
          "p4_criterion: cover quotient not explicitly isomorphic to the group");
  size_t r = K.basis.size();
  std::vector<u32> tuple(r, 0);
  for (u64 idx = 1; idx < ipow(p, (u32)r); idx++) {
    u64 v = idx;
    for (size_t t = 0; t < r; t++) {
      tuple[t] = (u32)(v % p);
      v /= p;
    }
    CentralCharacter chi;
    chi.K = &K;
    chi.e = p;
    chi.on_basis = tuple;
    Cocycle f = transgress(*cd.cover, q, chi);
    if (alpha_regular_classes(*q.Q, f).size() == 1) return true;
  }
  return false;
}

}  // namespace

bool p4_criterion(const PcGroup& G, const PcGroup& H) {
  return p4_criterion(G, H, P4Data{}, P4Data{});
}

bool p4_criterion(const PcGroup& G, const PcGroup& H, const P4Data& dg, const P4Data& dh) {
  u64 pg = 0, ph = 0;
  u32 ng = 0, nh = 0;
  require(is_prime_power(G.order(), pg, ng) && ng == 4, "p4_criterion: |G| is not p^4");
  require(is_prime_power(H.order(), ph, nh) && nh == 4, "p4_criterion: |H| is not p^4");
  require(pg == ph, "p4_criterion: primes differ");

  if (!(char_degree_census(G) == char_degree_census(H))) return false;

  H2Options ho;
  ho.escalate = true;
  bool in_cap = G.order() <= ho.hard_cap;
  std::vector<u32> invG =
      dg.h2_invariants.empty() && in_cap ? h2_invariants_routed(G, ho) : dg.h2_invariants;
  std::vector<u32> invH =
      dh.h2_invariants.empty() && in_cap ? h2_invariants_routed(H, ho) : dh.h2_invariants;
  require(!invG.empty() || in_cap, "p4_criterion: no multiplier data for G");
  require(!invH.empty() || in_cap, "p4_criterion: no multiplier data for H");
  if (invG != invH) return false;

  auto not_central_type = [&](const PcGroup& X, const P4Data& d) {
    if (X.order() <= ho.hard_cap) return !is_central_type(X).central_type;
    require(d.cover.has_value(), "p4_criterion: central-type check needs a stem cover");
    u64 h2o = 1;
    for (u32 dd : (d.h2_invariants.empty() ? invG : d.h2_invariants)) h2o *= dd;
    return !central_type_via_cover(X, *d.cover, h2o);
  };
  return not_central_type(G, dg) && not_central_type(H, dh);
}

}  // namespace twistclass
