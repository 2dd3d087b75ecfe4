#include "twistclass/cohomology.hpp"

#include <algorithm>
#include <map>

namespace twistclass {

namespace {

inline u32 madd(u32 a, u32 b, u32 e) { return u32((u64(a) + b) % e); }
inline u32 msub(u32 a, u32 b, u32 e) { return u32((u64(a) + e - b % e) % e); }

// Minimal generating set plus a left-multiplication spanning tree: every
// element x != 1 has x = g_{par_s[x]} * par_x[x] with par_x closer to the
// root.  All cocycle values are recovered from the rows f(g, .) for g in the
// generating set by walking these chains.
struct SlotData {
  std::vector<u32> slots;  // pc generator indices
  std::vector<u32> gelem;  // their element ids
  std::vector<u32> par_s, par_x, depth, bfs;
};

SlotData slot_data(const PcGroup& G) {
  SlotData sd;
  u32 n = G.ngens(), m = G.order(), p = G.prime();
  std::vector<u32> fr;
  for (u32 i = 0; i < n; ++i) {
    fr.push_back(G.power(G.gen(i), p));
    for (u32 j = i + 1; j < n; ++j) fr.push_back(G.commutator(G.gen(j), G.gen(i)));
  }
  Subgroup T = G.subgroup(fr);
  for (u32 i = 0; i < n; ++i)
    if (!T.contains(G.gen(i))) {
      sd.slots.push_back(i);
      sd.gelem.push_back(G.gen(i));
      std::vector<u32> ng = T.basis;
      ng.push_back(G.gen(i));
      T = G.subgroup(ng);
    }
  require(T.order() == m, "slot_data: generating set does not generate");

  sd.par_s.assign(m, ~u32(0));
  sd.par_x.assign(m, ~u32(0));
  sd.depth.assign(m, 0);
  sd.bfs.reserve(m);
  sd.bfs.push_back(G.id());
  for (size_t h = 0; h < sd.bfs.size(); ++h) {
    u32 x = sd.bfs[h];
    for (size_t s = 0; s < sd.slots.size(); ++s) {
      u32 y = G.mult(sd.gelem[s], x);
      if (y != G.id() && sd.par_s[y] == ~u32(0)) {
        sd.par_s[y] = u32(s);
        sd.par_x[y] = x;
        sd.depth[y] = sd.depth[x] + 1;
        sd.bfs.push_back(y);
      }
    }
  }
  require(sd.bfs.size() == m, "slot_data: spanning tree incomplete");
  return sd;
}

// Echelonized row collection over Z/p^k with exact unit-part pivots.
struct Elim {
  u32 e;
  u64 p;
  u32 kpow;
  size_t dim;
  std::vector<std::vector<u32>> rows;
  std::vector<u32> pivval;  // valuation of the leading p-power
  std::vector<size_t> pivcol;
  std::vector<long> pivot_at;  // column -> row index, -1 if none

  Elim(u32 e_, u64 p_, u32 k_, size_t d_) : e(e_), p(p_), kpow(k_), dim(d_) {
    pivot_at.assign(dim, -1);
  }
  u32 val(u32 x) const { return x == 0 ? kpow : valuation(x, p); }
  void normalize(std::vector<u32>& r, size_t c) const {
    u32 v = val(r[c]);
    u32 pv = u32(ipow(p, v));
    u32 inv = unit_inverse(r[c] / pv, e);
    if (inv != 1)
      for (u32& x : r) x = u32(u64(x) * inv % e);
  }
  // returns true if the rank increased
  bool insert(std::vector<u32> r) {
    for (size_t c = 0; c < dim; ++c) {
      if (r[c] == 0) continue;
      long pi = pivot_at[c];
      if (pi < 0) {
        normalize(r, c);
        pivot_at[c] = long(rows.size());
        pivval.push_back(val(r[c]));
        pivcol.push_back(c);
        rows.push_back(std::move(r));
        return true;
      }
      if (val(r[c]) < pivval[pi]) {
        normalize(r, c);
        std::swap(rows[pi], r);
        pivval[pi] = val(rows[pi][c]);
      }
      u32 pv = u32(ipow(p, pivval[pi]));
      u32 q = r[c] / pv;  // exact: val(r[c]) >= pivot valuation
      const std::vector<u32>& P = rows[pi];
      u32 mq = u32(e - q % e) % e;
      if (mq)
        for (size_t j = c; j < dim; ++j)
          if (P[j]) r[j] = u32((r[j] + u64(mq) * P[j]) % e);
      r[c] = 0;
    }
    return false;
  }
};

// order of the subgroup of (+)_j Z/mods[j] generated by the given rows
u64 span_order(const std::vector<std::vector<u32>>& rows, const std::vector<u32>& mods) {
  if (rows.empty() || mods.empty()) return 1;
  u32 L = 1;
  for (u32 d : mods) L = std::max(L, d);
  for (u32 d : mods) require(L % d == 0, "span_order: moduli are not a chain");
  ZMat M(rows.size(), mods.size(), L);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < mods.size(); ++j)
      M.at(i, j) = u32(u64(rows[i][j] % mods[j]) * (L / mods[j]) % L);
  SmithMod sm = smith_mod(M);
  u64 out = 1;
  for (u32 d : sm.diag) out *= L / gcd_u64(d, L);
  return out;
}

}  // namespace

// --- basic cochain operations -------------------------------------------------

Cocycle trivial_cocycle(const PcGroup& G, u32 e) { return Cocycle{&G, e, {}}; }

Cocycle cocycle_add(const Cocycle& a, const Cocycle& b) {
  require(a.G == b.G && a.e == b.e, "cocycle_add: mismatched group or modulus");
  if (a.is_trivial_table()) return b;
  if (b.is_trivial_table()) return a;
  Cocycle c{a.G, a.e, a.f};
  for (size_t i = 0; i < c.f.size(); ++i) c.f[i] = madd(c.f[i], b.f[i], a.e);
  return c;
}

Cocycle cocycle_scale(const Cocycle& a, u32 k) {
  k %= a.e;
  if (k == 0 || a.is_trivial_table()) return trivial_cocycle(*a.G, a.e);
  Cocycle c{a.G, a.e, a.f};
  for (u32& v : c.f) v = u32(u64(v) * k % a.e);
  return c;
}

bool is_cocycle(const Cocycle& f, Rng rng, u32 samples) {
  const PcGroup& G = *f.G;
  u32 m = G.order();
  if (!f.is_trivial_table() && f.f.size() != size_t(m) * m) return false;
  for (u32 x = 0; x < m; ++x)
    if (f(x, 0) != 0 || f(0, x) != 0) return false;
  auto ident = [&](u32 a, u32 b, u32 c) {
    u32 lhs = madd(f(a, b), f(G.mult(a, b), c), f.e);
    u32 rhs = madd(f(b, c), f(a, G.mult(b, c)), f.e);
    return lhs == rhs;
  };
  if (m <= 64) {
    for (u32 a = 0; a < m; ++a)
      for (u32 b = 0; b < m; ++b)
        for (u32 c = 0; c < m; ++c)
          if (!ident(a, b, c)) return false;
  } else {
    for (u32 t = 0; t < samples; ++t)
      if (!ident(u32(rng.below(m)), u32(rng.below(m)), u32(rng.below(m)))) return false;
  }
  return true;
}

std::optional<std::vector<u32>> coboundary_solve(const Cocycle& f, u32 e2) {
  const PcGroup& G = *f.G;
  u32 m = G.order();
  require(e2 >= 1 && f.e % e2 == 0, "coboundary_solve: e2 must divide the modulus");
  if (e2 == 1) return std::vector<u32>(m, 0);
  SlotData sd = slot_data(G);
  size_t d = sd.slots.size();
  // t(x) = sum_s cnt[x][s] * tau_s + base[x], propagated along the tree via
  // t(g x') = t(g) + t(x') - f(g, x')
  std::vector<std::vector<u32>> cnt(m, std::vector<u32>(d, 0));
  std::vector<u32> base(m, 0);
  for (u32 x : sd.bfs) {
    if (x == G.id()) continue;
    u32 s = sd.par_s[x], xp = sd.par_x[x];
    cnt[x] = cnt[xp];
    cnt[x][s] = madd(cnt[x][s], 1, e2);
    base[x] = msub(base[xp], f(sd.gelem[s], xp) % e2, e2);
  }
  std::map<std::vector<u32>, u32> sys;
  std::vector<u32> coef(d);
  for (u32 x = 0; x < m; ++x)
    for (u32 y = 0; y < m; ++y) {
      u32 xy = G.mult(x, y);
      bool all0 = true;
      for (size_t s = 0; s < d; ++s) {
        coef[s] = msub(madd(cnt[x][s], cnt[y][s], e2), cnt[xy][s], e2);
        if (coef[s]) all0 = false;
      }
      u32 rhs = madd(msub(f(x, y) % e2, madd(base[x], base[y], e2), e2), base[xy], e2);
      if (all0) {
        if (rhs != 0) return std::nullopt;
        continue;
      }
      auto it = sys.find(coef);
      if (it == sys.end())
        sys.emplace(coef, rhs);
      else if (it->second != rhs)
        return std::nullopt;
    }
  ZMat A(sys.size(), d, e2);
  std::vector<u32> b;
  size_t i = 0;
  for (const auto& [c, rhs] : sys) {
    for (size_t s = 0; s < d; ++s) A.at(i, s) = c[s];
    b.push_back(rhs);
    ++i;
  }
  auto tau = mod_solve(A, b);
  if (!tau) return std::nullopt;
  std::vector<u32> t(m, 0);
  for (u32 x = 0; x < m; ++x) {
    u64 acc = base[x];
    for (size_t s = 0; s < d; ++s) acc += u64(cnt[x][s]) * (*tau)[s];
    t[x] = u32(acc % e2);
  }
  return t;
}

bool is_coboundary(const Cocycle& f) { return coboundary_solve(f, f.e).has_value(); }

Cocycle cocycle_change_modulus(const Cocycle& f, u32 e2) {
  require(e2 % f.e == 0, "cocycle_change_modulus: old modulus must divide the new one");
  u32 k = e2 / f.e;
  if (f.is_trivial_table()) return trivial_cocycle(*f.G, e2);
  Cocycle c{f.G, e2, f.f};
  for (u32& v : c.f) v = u32(u64(v) * k % e2);
  return c;
}

std::optional<Cocycle> cocycle_descend(const Cocycle& f, u32 e2) {
  require(e2 >= 1 && f.e % e2 == 0, "cocycle_descend: e2 must divide the modulus");
  u32 q = f.e / e2;
  if (q == 1) return f;
  auto t = coboundary_solve(cocycle_scale(f, f.e - 1), q);
  if (!t) return std::nullopt;
  const PcGroup& G = *f.G;
  u32 m = G.order();
  Cocycle out{f.G, e2, std::vector<u32>(size_t(m) * m, 0)};
  for (u32 x = 0; x < m; ++x)
    for (u32 y = 0; y < m; ++y) {
      // f + dt has values in q * Z/e by construction
      u32 v = madd(f(x, y), msub(madd((*t)[x], (*t)[y], f.e), (*t)[G.mult(x, y)], f.e), f.e);
      require(v % q == 0, "cocycle_descend: internal: value not divisible");
      out.f[size_t(x) * m + y] = (v / q) % e2;
    }
  return out;
}

std::optional<Cocycle> cocycle_descend_projective(const Cocycle& f, u32 e2) {
  require(e2 >= 1 && f.e % e2 == 0, "cocycle_descend_projective: e2 must divide the modulus");
  const PcGroup& G = *f.G;
  u32 m = G.order();
  if (f.is_trivial_table() || m == 1) return trivial_cocycle(G, e2);
  // Work at a modulus large enough to host every character of the group, so
  // that the carry family spans the whole circle-trivial kernel.
  u32 E = std::max(f.e, G.exponent());
  Cocycle fe = cocycle_change_modulus(f, E);
  u32 q = E / e2;
  if (q == 1) return fe;

  SlotData sd = slot_data(G);
  size_t d = sd.slots.size();
  PcGroup::HomBasis hb = G.hom_to_cyclic(E);
  size_t K = hb.vec.size();
  std::vector<std::vector<u32>> chi(K, std::vector<u32>(m, 0));
  for (size_t k = 0; k < K; ++k)
    for (u32 x = 0; x < m; ++x) chi[k][x] = hb.eval(G, k, x);
  // carry of the k-th character at (x, y): 0 or 1
  auto carry = [&](size_t k, u32 x, u32 y) -> u32 {
    return u32((u64(chi[k][x]) + chi[k][y] - chi[k][G.mult(x, y)]) / E);
  };

  // Solve fe(x,y) + t(x)+t(y)-t(xy) + sum_k a_k carry_k(x,y) = 0 mod q with
  // unknowns tau_s = t on a minimal generating set plus the carry weights
  // a_k.  Any solution t obeys the spanning-tree recursion below, so
  // propagating coefficient vectors along the tree loses no solutions.
  size_t D = d + K;
  std::vector<std::vector<u32>> cnt(m, std::vector<u32>(D, 0));
  std::vector<u32> base(m, 0);
  for (u32 x : sd.bfs) {
    if (x == G.id()) continue;
    u32 s = sd.par_s[x], xp = sd.par_x[x];
    u32 gs = sd.gelem[s];
    cnt[x] = cnt[xp];
    cnt[x][s] = madd(cnt[x][s], 1, q);
    for (size_t k = 0; k < K; ++k)
      cnt[x][d + k] = madd(cnt[x][d + k], carry(k, gs, xp) % q, q);
    base[x] = madd(base[xp], fe(gs, xp) % q, q);
  }
  std::map<std::vector<u32>, u32> sys;
  std::vector<u32> coef(D);
  for (u32 x = 0; x < m; ++x)
    for (u32 y = 0; y < m; ++y) {
      u32 xy = G.mult(x, y);
      bool all0 = true;
      for (size_t j = 0; j < D; ++j) {
        coef[j] = msub(madd(cnt[x][j], cnt[y][j], q), cnt[xy][j], q);
        if (j >= d) coef[j] = madd(coef[j], carry(j - d, x, y) % q, q);
        if (coef[j]) all0 = false;
      }
      u32 rhs = msub(base[xy], madd(madd(base[x], base[y], q), fe(x, y) % q, q), q);
      if (all0) {
        if (rhs != 0) return std::nullopt;
        continue;
      }
      auto it = sys.find(coef);
      if (it == sys.end())
        sys.emplace(coef, rhs);
      else if (it->second != rhs)
        return std::nullopt;
    }
  ZMat A(sys.size(), D, q);
  std::vector<u32> b;
  size_t i = 0;
  for (const auto& [c, rhs] : sys) {
    for (size_t j = 0; j < D; ++j) A.at(i, j) = c[j];
    b.push_back(rhs);
    ++i;
  }
  auto z = mod_solve(A, b);
  if (!z) return std::nullopt;
  std::vector<u32> t(m, 0);
  for (u32 x = 0; x < m; ++x) {
    u64 acc = base[x];
    for (size_t j = 0; j < D; ++j) acc += u64(cnt[x][j]) * (*z)[j];
    t[x] = u32(acc % q);
  }
  // fe + dt + sum a_k c_k is an honest cocycle mod E with values in q*Z/E
  Cocycle out{f.G, e2, std::vector<u32>(size_t(m) * m, 0)};
  for (u32 x = 0; x < m; ++x)
    for (u32 y = 0; y < m; ++y) {
      u32 xy = G.mult(x, y);
      u64 acc = fe(x, y);
      acc += u64(t[x]) + t[y] + u64(E - t[xy]);
      for (size_t k = 0; k < K; ++k) acc += u64((*z)[d + k]) * carry(k, x, y);
      u32 v = u32(acc % E);
      require(v % q == 0, "cocycle_descend_projective: internal: value not divisible");
      out.f[size_t(x) * m + y] = (v / q) % e2;
    }
  return out;
}

u32 projective_class_order(const Cocycle& f) {
  u32 p = f.G->prime();
  for (u32 d = 1; d < f.e; d *= p)
    if (f.e % d == 0 && cocycle_descend_projective(f, d).has_value()) return d;
  return f.e;
}

u32 CentralCharacter::eval(u32 k_elem) const {
  auto dec = K->decompose(k_elem);
  require(dec.has_value(), "central character: element outside the subgroup");
  u64 acc = 0;
  for (size_t t = 0; t < dec->size(); ++t) acc += u64((*dec)[t]) * on_basis[t];
  return u32(acc % e);
}

// --- coordinate machinery -------------------------------------------------------

std::vector<u32> CohomologyGroup::restrict_u(const Cocycle& f) const {
  u32 m = G->order();
  std::vector<u32> u(gelem.size() * (m - 1), 0);
  if (f.is_trivial_table()) return u;
  for (size_t s = 0; s < gelem.size(); ++s)
    for (u32 x = 1; x < m; ++x) u[s * (m - 1) + (x - 1)] = f(gelem[s], x) % e;
  return u;
}

Cocycle CohomologyGroup::expand_u(const std::vector<u32>& u) const {
  u32 m = G->order();
  Cocycle out{G, e, std::vector<u32>(size_t(m) * m, 0)};
  for (u32 x : bfs) {
    if (x == G->id()) continue;
    u32 s = par_s[x], xp = par_x[x];
    const u32* up = u.data() + size_t(s) * (m - 1);
    u32 sub = xp ? up[xp - 1] : 0;
    for (u32 y = 0; y < m; ++y) {
      u32 a = G->mult(xp, y);
      u32 v = out.f[size_t(xp) * m + y];
      if (a) v = madd(v, up[a - 1], e);
      out.f[size_t(x) * m + y] = msub(v, sub, e);
    }
  }
  return out;
}

std::vector<u32> CohomologyGroup::coordinate_of(const Cocycle& f) const {
  require(coords_ready, "this cohomology group has no coordinate map");
  require(f.G == G, "coordinate_of: cocycle lives on a different group");
  require(f.e == e, "coordinate_of: modulus mismatch");
  if (invariants.empty()) return {};

  if (route == H2Route::Abelian) {
    std::vector<u32> out(ab_pairs.size(), 0);
    for (size_t j = 0; j < ab_pairs.size(); ++j) {
      auto [t, s] = ab_pairs[j];
      u32 beta = msub(f(ab_h[s], ab_h[t]), f(ab_h[t], ab_h[s]), e);
      u32 q = e / ab_d[t];
      require(beta % q == 0, "coordinate_of: pairing value outside the lattice");
      out[j] = (beta / q) % ab_d[t];
    }
    return out;
  }

  // solve u = kbasis^T * y through the stored smith form
  std::vector<u32> u = restrict_u(f);
  size_t D = u.size(), r = kbasis.size();
  std::vector<u32> ub(D, 0);
  for (size_t i = 0; i < D; ++i) {
    u64 acc = 0;
    for (size_t j = 0; j < D; ++j) acc += u64(ksolve.U.at(i, j)) * u[j] % e;
    ub[i] = u32(acc % e);
  }
  std::vector<u32> z(r, 0);
  for (size_t i = 0; i < D; ++i) {
    u32 d = i < ksolve.diag.size() ? ksolve.diag[i] : 0;
    if (d == 0) {
      require(ub[i] == 0, "coordinate_of: not a cocycle table for this group");
      continue;
    }
    require(ub[i] % d == 0, "coordinate_of: not a cocycle table for this group");
    if (i < r) z[i] = (ub[i] / d) % e;
  }
  std::vector<u32> y(r, 0);
  for (size_t i = 0; i < r; ++i) {
    u64 acc = 0;
    for (size_t j = 0; j < r; ++j) acc += u64(ksolve.V.at(i, j)) * z[j] % e;
    y[i] = u32(acc % e);
  }
  // class coordinates: (y * quot_v) at the surviving positions
  std::vector<u32> out(inv_pos.size(), 0);
  for (size_t j = 0; j < inv_pos.size(); ++j) {
    u64 acc = 0;
    for (size_t t = 0; t < r; ++t) acc += u64(y[t]) * quot_v.at(t, inv_pos[j]) % e;
    out[j] = u32(acc % e) % invariants[j];
  }
  return out;
}

Cocycle CohomologyGroup::representative(const std::vector<u32>& cls) const {
  require(coords_ready, "this cohomology group has no representatives");
  require(cls.size() == invariants.size(), "representative: wrong coordinate length");
  Cocycle out = trivial_cocycle(*G, e);
  for (size_t j = 0; j < cls.size(); ++j)
    if (cls[j] % invariants[j])
      out = cocycle_add(out, cocycle_scale(reps[j], cls[j] % invariants[j]));
  return out;
}

// --- closed form for abelian groups ---------------------------------------------

CohomologyGroup h2_abelian(const PcGroup& G, u32 table_limit) {
  require(G.is_abelian(), "h2_abelian: group is not abelian");
  u32 n = G.ngens(), m = G.order();
  CohomologyGroup H;
  H.G = &G;
  H.e = m;
  H.route = H2Route::Abelian;
  if (m == 1) {
    H.coords_ready = true;
    return H;
  }

  // invariant factor decomposition from the integer relation matrix
  std::vector<std::vector<i64>> R(n, std::vector<i64>(n, 0));
  for (u32 i = 0; i < n; ++i) {
    R[i][i] = i64(G.presentation().rel_order[i]);
    for (const Letter& l : G.presentation().power[i]) R[i][l.gen] -= i64(l.exp);
  }
  SmithZ sz = smith_z(R);
  std::vector<size_t> fpos;
  for (size_t t = 0; t < sz.diag.size(); ++t) {
    require(sz.diag[t] > 0, "h2_abelian: relation matrix not of full rank");
    if (sz.diag[t] > 1) fpos.push_back(t);
  }
  size_t nf = fpos.size();
  H.ab_d.resize(nf);
  for (size_t t = 0; t < nf; ++t) H.ab_d[t] = u32(sz.diag[fpos[t]]);

  // coordinate transform and one generator element per factor
  H.ab_v = ZMat(n, nf, m);
  for (u32 i = 0; i < n; ++i)
    for (size_t t = 0; t < nf; ++t) H.ab_v.at(i, t) = umod(sz.V[i][fpos[t]], m);
  ZMat VT(n, n, m);
  for (u32 i = 0; i < n; ++i)
    for (u32 j = 0; j < n; ++j) VT.at(i, j) = umod(sz.V[j][i], m);
  auto coord = [&](u32 x, size_t t) {
    std::vector<u32> ex = G.exponents(x);
    u64 acc = 0;
    for (u32 i = 0; i < n; ++i) acc += u64(ex[i]) * H.ab_v.at(i, t) % m;
    return u32(acc % m) % H.ab_d[t];
  };
  for (size_t t = 0; t < nf; ++t) {
    std::vector<u32> target(n, 0);
    target[fpos[t]] = 1;
    auto x = mod_solve(VT, target);
    require(x.has_value(), "h2_abelian: factor generator solve failed");
    u32 h = G.id();
    for (u32 i = 0; i < n; ++i) h = G.mult(h, G.power(G.gen(i), i64((*x)[i])));
    require(G.element_order(h) == H.ab_d[t], "h2_abelian: factor generator order check");
    for (size_t s = 0; s < nf; ++s)
      require(coord(h, s) == (s == t ? 1u % H.ab_d[s] : 0u),
              "h2_abelian: coordinate transform check");
    H.ab_h.push_back(h);
  }

  for (size_t t = 0; t < nf; ++t)
    for (size_t s = t + 1; s < nf; ++s) {
      H.ab_pairs.emplace_back(u32(t), u32(s));
      H.invariants.push_back(H.ab_d[t]);
    }

  if (m > table_limit) return H;  // invariants only past the table budget

  // representatives f(x,y) = (e/d_t) * c_s(x) c_t(y), one per pair
  std::vector<std::vector<u32>> cx(nf, std::vector<u32>(m, 0));
  for (size_t t = 0; t < nf; ++t)
    for (u32 x = 0; x < m; ++x) cx[t][x] = coord(x, t);
  for (size_t j = 0; j < H.ab_pairs.size(); ++j) {
    auto [t, s] = H.ab_pairs[j];
    u32 scale = m / H.ab_d[t];
    Cocycle rep{&G, m, std::vector<u32>(size_t(m) * m, 0)};
    for (u32 x = 0; x < m; ++x) {
      u64 lx = u64(scale) * cx[s][x] % m;
      if (!lx) continue;
      for (u32 y = 0; y < m; ++y) rep.f[size_t(x) * m + y] = u32(lx * cx[t][y] % m);
    }
    H.reps.push_back(std::move(rep));
  }
  H.coords_ready = true;
  for (size_t j = 0; j < H.reps.size(); ++j) {
    std::vector<u32> c = H.coordinate_of(H.reps[j]);
    for (size_t i = 0; i < c.size(); ++i)
      require(c[i] == (i == j ? 1u % H.invariants[i] : 0u),
              "h2_abelian: coordinate self-test failed");
  }
  return H;
}

// --- direct solver ---------------------------------------------------------------

CohomologyGroup h2_bruteforce(const PcGroup& G, const H2Options& opt) {
  u32 m = G.order();
  u32 lim = std::min(opt.escalate ? opt.hard_cap : opt.bound, opt.hard_cap);
  require(m <= lim, "h2_bruteforce: group order " + std::to_string(m) +
                        " exceeds the direct solver limit " + std::to_string(lim));
  CohomologyGroup H;
  H.G = &G;
  H.e = m;
  H.route = H2Route::Brute;
  if (m == 1) {
    H.coords_ready = true;
    return H;
  }
  u32 e = m;
  u64 p64 = 0;
  u32 kpow = 0;
  require(is_prime_power(e, p64, kpow), "h2_bruteforce: group order not a prime power");
  u32 p = u32(p64);
  require(p == G.prime(), "h2_bruteforce: order/prime mismatch");

  SlotData sd = slot_data(G);
  size_t ns = sd.slots.size();
  size_t D = ns * (m - 1);
  H.slots = sd.slots;
  H.gelem = sd.gelem;
  H.par_s = sd.par_s;
  H.par_x = sd.par_x;
  H.bfs = sd.bfs;

  std::vector<u32> mul(size_t(m) * m, 0);
  for (u32 a = 0; a < m; ++a)
    for (u32 b = 0; b < m; ++b) mul[size_t(a) * m + b] = G.mult(a, b);

  auto uidx = [&](size_t s, u32 x) { return s * (m - 1) + (x - 1); };
  // F(x, y) expanded over the slot unknowns along the parent chain of x
  auto add_chain = [&](std::vector<u32>& row, u32 x, u32 y, bool plus) {
    while (x != 0) {
      u32 s = sd.par_s[x], xp = sd.par_x[x];
      u32 a = mul[size_t(xp) * m + y];
      if (a) {
        u32& v = row[uidx(s, a)];
        v = plus ? madd(v, 1, e) : msub(v, 1, e);
      }
      if (xp) {
        u32& v = row[uidx(s, xp)];
        v = plus ? msub(v, 1, e) : madd(v, 1, e);
      }
      x = xp;
    }
  };
  auto build_row = [&](std::vector<u32>& row, size_t s, u32 x, u32 y) {
    std::fill(row.begin(), row.end(), 0);
    u32 gsx = mul[size_t(sd.gelem[s]) * m + x];
    add_chain(row, gsx, y, true);
    add_chain(row, x, y, false);
    u32 xy = mul[size_t(x) * m + y];
    if (xy) row[uidx(s, xy)] = msub(row[uidx(s, xy)], 1, e);
    row[uidx(s, x)] = madd(row[uidx(s, x)], 1, e);
  };

  // sample identity instances until the rank stabilizes, then certify the
  // kernel exactly; any violated instance re-enters the elimination
  Elim el(e, p, kpow, D);
  Rng rng = Rng(opt.seed).fork(hash_label("h2-direct") ^ (u64(m) << 32) ^ G.ngens());
  std::vector<u32> row(D);
  u32 consec = 0;
  u64 guard = 0, guard_cap = 400000 + u64(D) * 64 * (kpow + 1);
  ModKernel ker;
  for (;;) {
    require(++guard < guard_cap, "h2_bruteforce: solver failed to stabilize");
    size_t s = size_t(rng.below(ns));
    u32 x = u32(1 + rng.below(m - 1)), y = u32(1 + rng.below(m - 1));
    u32 gsx = mul[size_t(sd.gelem[s]) * m + x];
    if (gsx != 0 && sd.par_s[gsx] == s && sd.par_x[gsx] == x) {
      ++consec;  // tree edge: the instance is the definition, identically zero
    } else {
      build_row(row, s, x, y);
      if (el.insert(row))
        consec = 0;
      else
        ++consec;
    }
    if (consec < 64) continue;
    consec = 0;

    ZMat A(el.rows.size(), D, e);
    for (size_t i = 0; i < el.rows.size(); ++i)
      for (size_t j = 0; j < D; ++j) A.at(i, j) = el.rows[i][j];
    ker = mod_kernel(A);
    bool ok = true;
    std::vector<u32> tab(size_t(m) * m, 0);
    for (const std::vector<u32>& gen : ker.gens) {
      // expand to a full table and check every slot instance
      for (u32 xe : sd.bfs) {
        if (xe == 0) continue;
        u32 s2 = sd.par_s[xe], xp = sd.par_x[xe];
        const u32* up = gen.data() + s2 * (m - 1);
        u32 sub = xp ? up[xp - 1] : 0;
        const u32* src = tab.data() + size_t(xp) * m;
        u32* dst = tab.data() + size_t(xe) * m;
        const u32* mrow = mul.data() + size_t(xp) * m;
        for (u32 y2 = 0; y2 < m; ++y2) {
          u32 v = src[y2];
          u32 a = mrow[y2];
          if (a) v = madd(v, up[a - 1], e);
          dst[y2] = msub(v, sub, e);
        }
      }
      for (size_t s2 = 0; s2 < ns && ok; ++s2) {
        const u32* up = gen.data() + s2 * (m - 1);
        u32 ge = sd.gelem[s2];
        for (u32 x2 = 1; x2 < m && ok; ++x2) {
          u32 gsx2 = mul[size_t(ge) * m + x2];
          const u32* fx = tab.data() + size_t(x2) * m;
          const u32* fgx = tab.data() + size_t(gsx2) * m;
          const u32* mrow = mul.data() + size_t(x2) * m;
          u32 ux = up[x2 - 1];
          for (u32 y2 = 1; y2 < m; ++y2) {
            u32 xy = mrow[y2];
            u32 lhs = msub(fgx[y2], fx[y2], e);
            u32 rhs = xy ? msub(up[xy - 1], ux, e) : msub(0, ux, e);
            if (lhs != rhs) {
              build_row(row, s2, x2, y2);
              require(el.insert(row), "h2_bruteforce: violated instance already in span");
              ok = false;
              break;
            }
          }
        }
      }
      if (!ok) break;
    }
    if (ok) break;
  }

  H.kbasis = ker.gens;
  H.korders = ker.orders;
  size_t r = H.kbasis.size();

  // quotient by coboundaries and by the carries of the e-th power sequence
  std::vector<std::vector<u32>> wrows;
  for (u32 z = 1; z < m; ++z) {
    std::vector<u32> w(D, 0);
    for (size_t s = 0; s < ns; ++s) {
      u32 ge = sd.gelem[s];
      for (u32 x = 1; x < m; ++x) {
        u32 v = (ge == z ? 1u : 0u) + (x == z ? 1u : 0u);
        u32 gx = mul[size_t(ge) * m + x];
        w[uidx(s, x)] = msub(v % e, gx == z ? 1u : 0u, e);
      }
    }
    wrows.push_back(std::move(w));
  }
  PcGroup::HomBasis hb = G.hom_to_cyclic(e);
  for (size_t k = 0; k < hb.vec.size(); ++k) {
    std::vector<u32> chi(m);
    for (u32 x = 0; x < m; ++x) chi[x] = hb.eval(G, k, x);
    std::vector<u32> w(D, 0);
    for (size_t s = 0; s < ns; ++s) {
      u32 cg = chi[sd.gelem[s]];
      for (u32 x = 1; x < m; ++x) {
        u32 gx = mul[size_t(sd.gelem[s]) * m + x];
        u64 lift = u64(cg) + chi[x];  // in [0, 2e); the defect is 0 or e
        w[uidx(s, x)] = u32((lift - chi[gx]) / e) % e;
      }
    }
    wrows.push_back(std::move(w));
  }

  ZMat KBT(D, r, e);
  for (size_t t = 0; t < r; ++t)
    for (size_t i = 0; i < D; ++i) KBT.at(i, t) = H.kbasis[t][i];
  H.ksolve = smith_mod(KBT);
  auto solve_k = [&](const std::vector<u32>& w) {
    std::vector<u32> ub(D, 0);
    for (size_t i = 0; i < D; ++i) {
      u64 acc = 0;
      for (size_t j = 0; j < D; ++j) acc += u64(H.ksolve.U.at(i, j)) * w[j] % e;
      ub[i] = u32(acc % e);
    }
    std::vector<u32> z(r, 0);
    for (size_t i = 0; i < D; ++i) {
      u32 d = i < H.ksolve.diag.size() ? H.ksolve.diag[i] : 0;
      if (d == 0) {
        require(ub[i] == 0, "h2_bruteforce: internal: coboundary outside the kernel");
        continue;
      }
      require(ub[i] % d == 0, "h2_bruteforce: internal: coboundary outside the kernel");
      if (i < r) z[i] = (ub[i] / d) % e;
    }
    std::vector<u32> y(r, 0);
    for (size_t i = 0; i < r; ++i) {
      u64 acc = 0;
      for (size_t j = 0; j < r; ++j) acc += u64(H.ksolve.V.at(i, j)) * z[j] % e;
      y[i] = u32(acc % e);
    }
    return y;
  };

  ZMat Rq(r + wrows.size(), r, e);
  for (size_t t = 0; t < r; ++t) Rq.at(t, t) = H.korders[t] % e;
  for (size_t i = 0; i < wrows.size(); ++i) {
    std::vector<u32> y = solve_k(wrows[i]);
    for (size_t t = 0; t < r; ++t) Rq.at(r + i, t) = y[t];
  }
  SmithMod sq = smith_mod(Rq);
  H.quot_v = sq.V;
  H.quot_diag.assign(r, 0);
  for (size_t t = 0; t < sq.diag.size() && t < r; ++t) H.quot_diag[t] = sq.diag[t];
  for (size_t t = 0; t < r; ++t) {
    u32 d = H.quot_diag[t] == 0 ? e : u32(gcd_u64(H.quot_diag[t], e));
    if (d > 1) {
      H.inv_pos.push_back(t);
      H.invariants.push_back(d);
    }
  }

  // representatives: v-coordinates e_t pulled back through quot_v
  ZMat VT(r, r, e);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) VT.at(i, j) = H.quot_v.at(j, i);
  for (size_t j = 0; j < H.inv_pos.size(); ++j) {
    std::vector<u32> target(r, 0);
    target[H.inv_pos[j]] = 1;
    auto y = mod_solve(VT, target);
    require(y.has_value(), "h2_bruteforce: representative solve failed");
    std::vector<u32> u(D, 0);
    for (size_t t = 0; t < r; ++t) {
      if (!(*y)[t]) continue;
      for (size_t i = 0; i < D; ++i)
        u[i] = u32((u[i] + u64((*y)[t]) * H.kbasis[t][i]) % e);
    }
    H.rep_u.push_back(u);
    H.reps.push_back(H.expand_u(u));
  }
  H.coords_ready = true;
  for (size_t j = 0; j < H.reps.size(); ++j) {
    std::vector<u32> c = H.coordinate_of(H.reps[j]);
    for (size_t i = 0; i < c.size(); ++i)
      require(c[i] == (i == j ? 1u % H.invariants[i] : 0u),
              "h2_bruteforce: coordinate self-test failed");
  }
  return H;
}

CohomologyGroup h2(const PcGroup& G, const H2Options& opt) {
  if (G.is_abelian()) return h2_abelian(G);
  return h2_bruteforce(G, opt);
}

std::vector<u32> h2_kuenneth_invariants(const std::vector<u32>& h2a,
                                        const std::vector<u32>& ab_a,
                                        const std::vector<u32>& h2b,
                                        const std::vector<u32>& ab_b) {
  std::vector<u32> out;
  for (u32 d : h2a)
    if (d > 1) out.push_back(d);
  for (u32 d : h2b)
    if (d > 1) out.push_back(d);
  for (u32 a : ab_a)
    for (u32 b : ab_b) {
      u32 g = u32(gcd_u64(a, b));
      if (g > 1) out.push_back(g);
    }
  std::sort(out.begin(), out.end());
  return out;
}

// --- inflation / transgression ----------------------------------------------------

Cocycle inflate(const PcGroup& G, const Quotient& q, const Cocycle& fbar) {
  require(fbar.G == q.Q.get(), "inflate: cocycle is not on the quotient group");
  u32 m = G.order(), mq = q.Q->order();
  require(q.proj_tab.size() == m, "inflate: quotient does not match the group");
  if (fbar.is_trivial_table()) return trivial_cocycle(G, fbar.e);
  Cocycle out{&G, fbar.e, std::vector<u32>(size_t(m) * m, 0)};
  for (u32 x = 0; x < m; ++x) {
    const u32* src = fbar.f.data() + size_t(q.proj(x)) * mq;
    u32* dst = out.f.data() + size_t(x) * m;
    for (u32 y = 0; y < m; ++y) dst[y] = src[q.proj(y)];
  }
  return out;
}

Cocycle transgress(const PcGroup& G, const Quotient& q, const CentralCharacter& chi,
                   const std::vector<u32>* section_override) {
  require(chi.K != nullptr && chi.K->G == &G, "transgress: character subgroup mismatch");
  require(chi.K->is_central(), "transgress: the subgroup is not central");
  const PcGroup& Q = *q.Q;
  u32 mq = Q.order();
  auto sec = [&](u32 u) { return section_override ? (*section_override)[u] : q.lift(u); };
  if (section_override) {
    require(section_override->size() == mq, "transgress: section table has wrong size");
    require(sec(0) == G.id(), "transgress: section must lift 1 to 1");
    for (u32 u = 0; u < mq; ++u)
      require(q.proj(sec(u)) == u, "transgress: section does not split the projection");
  }
  Cocycle out{q.Q.get(), chi.e, std::vector<u32>(size_t(mq) * mq, 0)};
  for (u32 u = 0; u < mq; ++u)
    for (u32 v = 0; v < mq; ++v) {
      u32 w = G.mult(G.mult(sec(u), sec(v)), G.inv(sec(Q.mult(u, v))));
      auto dec = chi.K->decompose(w);
      require(dec.has_value(), "transgress: section defect leaves the central subgroup");
      u64 acc = 0;
      for (size_t t = 0; t < dec->size(); ++t) acc += u64((*dec)[t]) * chi.on_basis[t];
      out.f[size_t(u) * mq + v] = u32(acc % chi.e);
    }
  return out;
}

// --- the five-term sequence check ---------------------------------------------------

SequenceReport exact_sequence_check(const PcGroup& G, const H2Options& opt) {
  const Subgroup& Gd = G.derived_subgroup();
  require(Gd.is_central(), "exact_sequence_check: derived subgroup is not central");
  for (u32 rel : Gd.rel)
    require(rel == G.prime(), "exact_sequence_check: derived subgroup is not elementary");

  SequenceReport rep;
  Quotient q = G.quotient(Gd);
  u32 eq = q.Q->order(), eg = G.order();
  CohomologyGroup HQ = h2_abelian(*q.Q);
  CohomologyGroup HG = h2(G, opt);
  rep.hom_order = Gd.order();
  rep.h2_quot_order = HQ.order();
  rep.h2_order = HG.order();

  u32 p = G.prime();
  size_t rk = Gd.basis.size();
  std::vector<std::vector<u32>> tra_rows, tra_g_rows, inf_rows;
  bool in_kernel = true;
  for (size_t t = 0; t < rk; ++t) {
    CentralCharacter chi;
    chi.K = &Gd;
    chi.e = p;
    chi.on_basis.assign(rk, 0);
    chi.on_basis[t] = 1;
    Cocycle tc = transgress(G, q, chi);
    Cocycle tq = cocycle_change_modulus(tc, eq);
    tra_rows.push_back(HQ.coordinate_of(tq));
    Cocycle tg = cocycle_change_modulus(inflate(G, q, tq), eg);
    std::vector<u32> cg = HG.coordinate_of(tg);
    for (u32 c : cg)
      if (c) in_kernel = false;
  }
  for (const Cocycle& rq : HQ.reps) {
    Cocycle ig = cocycle_change_modulus(inflate(G, q, rq), eg);
    inf_rows.push_back(HG.coordinate_of(ig));
  }
  rep.tra_image_order = span_order(tra_rows, HQ.invariants);
  rep.inf_image_order = span_order(inf_rows, HG.invariants);
  rep.inf_kernel_order = rep.h2_quot_order / rep.inf_image_order;
  rep.tra_injective = rep.tra_image_order == rep.hom_order;
  rep.image_in_kernel = in_kernel;
  rep.exact_at_middle = in_kernel && rep.tra_image_order == rep.inf_kernel_order;
  rep.inf_surjective = rep.inf_image_order == rep.h2_order;
  rep.exact = rep.tra_injective && rep.exact_at_middle && rep.inf_surjective;
  return rep;
}

// --- central extensions ---------------------------------------------------------------

PcGroup central_extension(const PcGroup& Q, const Cocycle& f) {
  require(f.G == &Q, "central_extension: cocycle lives on a different group");
  u32 p = Q.prime(), e = f.e;
  u64 pp = 0;
  u32 kk = 0;
  require(is_prime_power(e, pp, kk) && pp == p,
          "central_extension: modulus must be a power of the group prime");
  u32 nq = Q.ngens();

  // pair arithmetic in K x_f Q
  auto pmul = [&](std::pair<u32, u32> a, std::pair<u32, u32> b) {
    return std::pair<u32, u32>(madd(madd(a.first, b.first, e), f(a.second, b.second), e),
                               Q.mult(a.second, b.second));
  };
  auto pinv = [&](std::pair<u32, u32> a) {
    u32 xi = Q.inv(a.second);
    return std::pair<u32, u32>(msub(0, madd(a.first, f(a.second, xi), e), e), xi);
  };
  auto lift_word = [&](const Word& w) {
    std::pair<u32, u32> acc{0, Q.id()};
    for (const Letter& l : w)
      for (u32 t = 0; t < l.exp; ++t) acc = pmul(acc, {0, Q.gen(l.gen)});
    return acc;
  };

  PcPresentation pres;
  pres.p = p;
  pres.names = Q.presentation().names;
  std::string zname = "z";
  while (std::find(pres.names.begin(), pres.names.end(), zname) != pres.names.end())
    zname += "c";
  pres.names.push_back(zname);
  pres.rel_order = Q.presentation().rel_order;
  pres.rel_order.push_back(e);
  pres.power.resize(nq + 1);
  pres.comm.resize(nq + 1);
  for (u32 j = 0; j < nq + 1; ++j) pres.comm[j].resize(j);

  for (u32 i = 0; i < nq; ++i) {
    std::pair<u32, u32> acc{0, Q.gen(i)};
    for (u32 t = 1; t < Q.presentation().rel_order[i]; ++t) acc = pmul(acc, {0, Q.gen(i)});
    std::pair<u32, u32> w = lift_word(Q.presentation().power[i]);
    require(acc.second == w.second, "central_extension: power word mismatch");
    pres.power[i] = Q.presentation().power[i];
    u32 t = msub(acc.first, w.first, e);
    if (t) pres.power[i].push_back(Letter{nq, t});
  }
  for (u32 j = 1; j < nq; ++j)
    for (u32 i = 0; i < j; ++i) {
      std::pair<u32, u32> a{0, Q.gen(j)}, b{0, Q.gen(i)};
      std::pair<u32, u32> c = pmul(pmul(pmul(pinv(a), pinv(b)), a), b);
      std::pair<u32, u32> w = lift_word(Q.presentation().comm[j][i]);
      require(c.second == w.second, "central_extension: commutator word mismatch");
      pres.comm[j][i] = Q.presentation().comm[j][i];
      u32 t = msub(c.first, w.first, e);
      if (t) pres.comm[j][i].push_back(Letter{nq, t});
    }
  return PcGroup(pres);  // the collection certificate re-checks f
}

bool is_representation_group(const PcGroup& Gt, const Subgroup& K, const PcGroup& G,
                             u64 h2_order_of_G) {
  require(K.G == &Gt, "is_representation_group: subgroup of the wrong group");
  if (!K.is_central()) return false;
  const Subgroup& Dt = Gt.derived_subgroup();
  for (u32 b : K.basis)
    if (!Dt.contains(b)) return false;
  if (K.order() != h2_order_of_G) return false;
  Quotient q = Gt.quotient(K);
  if (q.Q->order() != G.order()) return false;
  if (q.Q->abelian_invariants() != G.abelian_invariants()) return false;
  if (q.Q->class_count() != G.class_count()) return false;
  return true;
}

}  // namespace twistclass
