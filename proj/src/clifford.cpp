#include "twistclass/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <set>

#include "twistclass/spectral.hpp"
#include "twistclass/twisted_algebra.hpp"

namespace twistclass {

// --- abelian decomposition -------------------------------------------------------

std::vector<u32> AbelianDecomp::coords(u32 x) const {
  u32 m = A->order();
  std::vector<u32> ex = A->exponents(x);
  std::vector<u32> out(gens.size(), 0);
  for (size_t t = 0; t < gens.size(); ++t) {
    u64 acc = 0;
    for (size_t i = 0; i < ex.size(); ++i) acc += u64(ex[i]) * v.at(i, t) % m;
    out[t] = u32(acc % m) % orders[t];
  }
  return out;
}

u32 AbelianDecomp::eval(const std::vector<u32>& chr, u32 x) const {
  require(chr.size() == orders.size(), "abelian decomposition: character length mismatch");
  std::vector<u32> c = coords(x);
  u64 acc = 0;
  for (size_t t = 0; t < orders.size(); ++t)
    acc += u64(chr[t]) * (expo / orders[t]) % expo * c[t] % expo;
  return u32(acc % expo);
}

AbelianDecomp abelian_decomposition(const PcGroup& A) {
  require(A.is_abelian(), "abelian decomposition: group is not abelian");
  AbelianDecomp D;
  D.A = &A;
  u32 n = A.ngens(), m = A.order();
  if (m == 1) {
    D.v = ZMat(n, 0, 1);
    return D;
  }

  std::vector<std::vector<i64>> R(n, std::vector<i64>(n, 0));
  for (u32 i = 0; i < n; ++i) {
    R[i][i] = i64(A.presentation().rel_order[i]);
    for (const Letter& l : A.presentation().power[i]) R[i][l.gen] -= i64(l.exp);
  }
  SmithZ sz = smith_z(R);
  std::vector<size_t> fpos;
  for (size_t t = 0; t < sz.diag.size(); ++t) {
    require(sz.diag[t] > 0, "abelian decomposition: relation matrix not of full rank");
    if (sz.diag[t] > 1) fpos.push_back(t);
  }
  size_t nf = fpos.size();
  D.orders.resize(nf);
  for (size_t t = 0; t < nf; ++t) D.orders[t] = u32(sz.diag[fpos[t]]);
  D.expo = nf ? D.orders.back() : 1;

  D.v = ZMat(n, nf, m);
  for (u32 i = 0; i < n; ++i)
    for (size_t t = 0; t < nf; ++t) D.v.at(i, t) = umod(sz.V[i][fpos[t]], m);

  ZMat VT(n, n, m);
  for (u32 i = 0; i < n; ++i)
    for (u32 j = 0; j < n; ++j) VT.at(i, j) = umod(sz.V[j][i], m);
  for (size_t t = 0; t < nf; ++t) {
    std::vector<u32> target(n, 0);
    target[fpos[t]] = 1;
    auto xs = mod_solve(VT, target);
    require(xs.has_value(), "abelian decomposition: generator solve failed");
    u32 h = A.id();
    for (u32 i = 0; i < n; ++i) h = A.mult(h, A.power(A.gen(i), i64((*xs)[i])));
    require(A.element_order(h) == D.orders[t], "abelian decomposition: generator order check");
    D.gens.push_back(h);
  }
  for (size_t t = 0; t < nf; ++t) {
    std::vector<u32> c = D.coords(D.gens[t]);
    for (size_t s = 0; s < nf; ++s)
      require(c[s] == (s == t ? 1u : 0u), "abelian decomposition: coordinate self-test failed");
  }
  u64 prod = 1;
  for (u32 d : D.orders) prod *= d;
  require(prod == m, "abelian decomposition: order mismatch");
  return D;
}

// --- linear characters and inertia -----------------------------------------------

u32 LinearCharacter::eval(u32 n_elem) const {
  auto dec = N->decompose(n_elem);
  require(dec.has_value(), "linear character: element outside the subgroup");
  u64 acc = 0;
  for (size_t t = 0; t < dec->size(); ++t) acc += u64((*dec)[t]) * (on_basis[t] % e) % e;
  return u32(acc % e);
}

bool LinearCharacter::is_homomorphism() const {
  require(N != nullptr && on_basis.size() == N->basis.size(), "linear character: malformed");
  // multiplicativity against the basis propagates to all pairs when the
  // subgroup is abelian
  require(N->is_abelian(), "linear character: need an abelian subgroup");
  const PcGroup& G = *N->G;
  for (u32 x : N->members) {
    u32 vx = eval(x);
    for (size_t t = 0; t < N->basis.size(); ++t)
      if (eval(G.mult(x, N->basis[t])) != u32((u64(vx) + on_basis[t] % e) % e)) return false;
  }
  return true;
}

InertiaData inertia_group(const PcGroup& G, const Subgroup& N, const LinearCharacter& chi) {
  require(N.G == &G, "inertia: subgroup of a different group");
  require(chi.N == &N, "inertia: character does not live on the given subgroup");
  require(N.is_normal() && N.is_abelian(), "inertia: need an abelian normal subgroup");
  require(chi.is_homomorphism(), "inertia: not a character");

  Quotient q = G.quotient(N);
  u32 uQ = u32(q.Q->order());
  std::vector<u32> gens = N.basis;
  u64 stab_count = 0;
  for (u32 u = 0; u < uQ; ++u) {
    u32 g = q.lift(u);
    bool fix = true;
    for (size_t t = 0; t < N.basis.size() && fix; ++t)
      fix = chi.eval(G.conj(N.basis[t], g)) == chi.eval(N.basis[t]);
    if (fix) {
      ++stab_count;
      if (u != 0) gens.push_back(g);
    }
  }
  InertiaData out{&G, &N, chi, G.subgroup(gens), 1};
  require(out.I.order() == stab_count * N.order(), "inertia: stabilizer closure mismatch");
  out.index = G.order() / out.I.order();
  return out;
}

// --- abelian normal climb --------------------------------------------------------

Subgroup self_centralizing_abelian_normal(const PcGroup& G) {
  u32 m = G.order();
  Subgroup N = G.subgroup(G.center());
  for (;;) {
    std::vector<u32> cent;
    for (u32 x = 0; x < m; ++x) {
      bool c = true;
      for (size_t t = 0; t < N.basis.size() && c; ++t)
        c = G.commutator(x, N.basis[t]) == G.id();
      if (c) cent.push_back(x);
    }
    if (cent.size() == N.order()) return N;

    Quotient q = G.quotient(N);
    std::vector<char> zq(q.Q->order(), 0);
    for (u32 z : q.Q->center()) zq[z] = 1;
    u32 pick = m;
    for (u32 x : cent)
      if (!N.contains(x) && zq[q.proj(x)]) {
        pick = x;
        break;
      }
    // C_G(N)/N is a nontrivial normal subgroup of G/N, so it meets the
    // center of the quotient
    require(pick < m, "abelian normal climb stalled");
    std::vector<u32> gens = N.basis;
    gens.push_back(pick);
    N = G.subgroup(gens);
    require(N.is_abelian() && N.is_normal(), "abelian normal climb produced a bad subgroup");
  }
}

// --- census of degrees above a central character ----------------------------------

u64 DegreeCensus::mass() const {
  u64 s = 0;
  for (auto [d, c] : count) s += c * u64(d) * d;
  return s;
}

DegreeCensus degree_census_above(const PcGroup& G, const Subgroup& K,
                                 const CentralCharacter& chi) {
  require(K.G == &G, "census: subgroup of a different group");
  require(chi.K == &K, "census: character does not live on the given subgroup");
  require(K.is_central(), "census: subgroup is not central");
  u32 m = G.order();
  DegreeCensus out;
  if (m == 1) {
    out.count[1] = 1;
    return out;
  }

  Subgroup N = self_centralizing_abelian_normal(G);
  for (u32 b : K.basis) require(N.contains(b), "census: normal subgroup misses the center");
  u64 nN = N.order();
  require(nN <= (1u << 21), "census: abelian normal subgroup too large");

  InducedGroup NI = G.induced(N);
  AbelianDecomp dec = abelian_decomposition(*NI.H);
  size_t r = dec.gens.size();
  u32 L = dec.expo;
  auto in_n = [&](u32 amb) {
    auto it = NI.from_ambient.find(amb);
    require(it != NI.from_ambient.end(), "census: element escaped the normal subgroup");
    return it->second;
  };

  // chi turned into mod-L targets on the basis of K
  std::vector<std::vector<u32>> kc;
  std::vector<u32> ktarget;
  for (u32 b : K.basis) {
    u32 v = chi.eval(b);
    u32 g = std::gcd(v, chi.e);
    u32 ered = chi.e / g;
    require(L % ered == 0, "census: character order exceeds the subgroup exponent");
    ktarget.push_back(u32(u64(v / g) % L * (L / ered) % L));
    kc.push_back(dec.coords(in_n(b)));
  }

  Quotient qn = G.quotient(N);
  u32 uQ = u32(qn.Q->order());
  require(uQ <= 4096, "census: quotient by the normal subgroup too large");
  std::vector<u32> lift(uQ);
  for (u32 u = 0; u < uQ; ++u) lift[u] = qn.lift(u);
  // section used for defect tables; sending the identity coset to the
  // identity keeps the tables normalized
  auto sec = [&](u32 u) { return u == 0 ? G.id() : lift[u]; };

  // coordinates of g_u^{-1} h_t g_u for the coset action on characters
  std::vector<std::vector<std::vector<u32>>> cmat(uQ);
  for (u32 u = 0; u < uQ; ++u) {
    cmat[u].resize(r);
    for (size_t t = 0; t < r; ++t)
      cmat[u][t] = dec.coords(in_n(G.conj(NI.to_ambient[dec.gens[t]], lift[u])));
  }

  auto val_coords = [&](const std::vector<u32>& a, const std::vector<u32>& c) {
    u64 acc = 0;
    for (size_t t = 0; t < r; ++t) acc += u64(a[t]) * (L / dec.orders[t]) % L * c[t] % L;
    return u32(acc % L);
  };
  auto act = [&](u32 u, const std::vector<u32>& a) {
    std::vector<u32> b(r);
    for (size_t t = 0; t < r; ++t) {
      u32 w = val_coords(a, cmat[u][t]);
      u32 q = L / dec.orders[t];
      require(w % q == 0, "census: conjugate character left the dual lattice");
      b[t] = w / q % dec.orders[t];
    }
    return b;
  };

  std::vector<u64> stride(r + 1);
  stride[0] = 1;
  for (size_t t = 0; t < r; ++t) stride[t + 1] = stride[t] * dec.orders[t];
  require(stride[r] == nN, "census: decomposition order mismatch");
  auto rank_of = [&](const std::vector<u32>& a) {
    u64 k = 0;
    for (size_t t = 0; t < r; ++t) k += stride[t] * a[t];
    return k;
  };

  std::vector<char> visited(nN, 0);
  u64 seen = 0, mass = 0;
  for (u64 k0 = 0; k0 < nN; ++k0) {
    if (visited[k0]) continue;
    std::vector<u32> a(r);
    {
      u64 k = k0;
      for (size_t t = 0; t < r; ++t) {
        a[t] = u32(k % dec.orders[t]);
        k /= dec.orders[t];
      }
    }
    bool over = true;
    for (size_t j = 0; j < kc.size() && over; ++j) over = val_coords(a, kc[j]) == ktarget[j];
    if (!over) continue;

    // orbit of the character under coset representatives; conjugation by the
    // abelian subgroup itself is trivial, so this is a group action of G/N
    std::vector<u32> stab;
    std::set<u64> orbit;
    for (u32 u = 0; u < uQ; ++u) {
      u64 rk = rank_of(act(u, a));
      orbit.insert(rk);
      visited[rk] = 1;
      if (rk == k0) stab.push_back(u);
    }
    u64 S = stab.size();
    require(S >= 1 && uQ % S == 0 && orbit.size() == uQ / S, "census: orbit-stabilizer mismatch");
    seen += orbit.size();
    u64 orbitsize = orbit.size();

    // defect table of the section on the stabilizer, pushed through the
    // character: block data of the algebra sitting above this orbit
    auto defect_val = [&](u32 s1, u32 s2) {
      u32 s12 = qn.Q->mult(s1, s2);
      u32 w = G.mult(G.mult(sec(s1), sec(s2)), G.inv(sec(s12)));
      return val_coords(a, dec.coords(in_n(w)));
    };

    bool ab = true;
    for (size_t i = 0; i < S && ab; ++i)
      for (size_t j = i + 1; j < S && ab; ++j)
        ab = qn.Q->commutator(stab[i], stab[j]) == qn.Q->id();

    if (ab) {
      // commutation radical of the defect pairing: B blocks, all of degree
      // sqrt(|S| / B)
      std::vector<u32> om(S * S);
      for (size_t i = 0; i < S; ++i)
        for (size_t j = 0; j < S; ++j) om[i * S + j] = defect_val(stab[i], stab[j]);
      u64 B = 0;
      for (size_t i = 0; i < S; ++i) {
        bool reg = true;
        for (size_t j = 0; j < S && reg; ++j) reg = om[i * S + j] == om[j * S + i];
        if (reg) ++B;
      }
      require(B >= 1 && S % B == 0, "census: radical does not divide the stabilizer");
      u64 dsq = S / B;
      u32 d = u32(std::lround(std::sqrt(double(dsq))));
      while (u64(d) * d < dsq) ++d;
      require(u64(d) * d == dsq, "census: non-square reduced stabilizer");
      bool cyclic = false;
      for (u32 s : stab)
        if (qn.Q->element_order(s) == S) cyclic = true;
      if (cyclic) require(B == S, "census: cyclic stabilizer with a degenerate table");
      u32 deg = u32(orbitsize) * d;
      out.count[deg] += B;
      mass += B * u64(deg) * deg;
    } else {
      // non-abelian stabilizer quotient: resolve the block structure of the
      // small twisted algebra directly
      Subgroup Ssub = qn.Q->subgroup(stab);
      require(Ssub.order() == S, "census: stabilizer is not closed");
      InducedGroup SI = qn.Q->induced(Ssub);
      Cocycle om{SI.H.get(), L, std::vector<u32>(S * S, 0)};
      for (size_t i = 0; i < S; ++i)
        for (size_t j = 0; j < S; ++j)
          om.f[i * S + j] = defect_val(SI.to_ambient[u32(i)], SI.to_ambient[u32(j)]);
      WedderburnType wt = wedderburn_type_spectral(*SI.H, om, {});
      for (auto [d, c] : wt.blocks) {
        u32 deg = u32(orbitsize) * d;
        out.count[deg] += c;
        mass += c * u64(deg) * deg;
      }
    }
  }
  require(seen == nN / K.order(), "census: wrong number of characters over the center");
  require(mass == m / K.order(), "census: mass check failed");
  return out;
}

// --- numeric bijection check ------------------------------------------------------

namespace {

std::complex<double> unit(double turns) {
  return std::polar(1.0, 2.0 * std::numbers::pi_v<double> * turns);
}

// Degrees of the blocks supported by the central projection eo, read off the
// spectrum of the regular representation of z + shift * eo for a random
// self-adjoint central z: eigenvalues above shift/2 carry multiplicity d^2
// per block of degree d.
std::map<u32, u64> projection_census(const PcGroup& G, const std::vector<std::complex<double>>& eo,
                                     u64 rank, Rng& rng) {
  u32 m = G.order();
  require(m <= 512, "bijection check: group too large for a dense spectrum");
  const auto& cls = G.classes();
  u32 k = u32(cls.rep.size());
  double shift = 8.0 * m + 16.0;

  for (u32 attempt = 0; attempt < 5; ++attempt) {
    std::vector<std::complex<double>> w(k);
    for (u32 c = 0; c < k; ++c)
      w[c] = {1.0 + double(rng.below(1u << 20)) / double(1u << 20),
              1.0 + double(rng.below(1u << 20)) / double(1u << 20)};
    // z + z^* + shift * eo: coefficient of y is w_{[y]} + conj(w_{[y^-1]})
    std::vector<std::complex<double>> coeff(m);
    for (u32 y = 0; y < m; ++y)
      coeff[y] = w[cls.class_of[y]] + std::conj(w[cls.class_of[G.inv(y)]]) + shift * eo[y];

    std::vector<std::complex<double>> M(size_t(m) * m, 0.0);
    for (u32 x = 0; x < m; ++x) {
      if (std::abs(coeff[x]) < 1e-15) continue;
      for (u32 y = 0; y < m; ++y) M[size_t(G.mult(x, y)) * m + y] += coeff[x];
    }
    auto clusters = hermitian_eigen_clusters(M, m, 1e-6);

    std::map<u32, u64> out;
    u64 got = 0;
    bool good = true;
    for (auto [mean, mult] : clusters) {
      if (mean < shift / 2) continue;
      u32 d = u32(std::lround(std::sqrt(double(mult))));
      if (u64(d) * d != mult) {
        good = false;
        break;
      }
      out[d] += 1;
      got += mult;
    }
    if (good && got == rank) return out;
  }
  throw Error("bijection check: spectral clustering failed");
}

}  // namespace

BijectionReport clifford_bijection_check(const PcGroup& G, const Subgroup& N,
                                         const LinearCharacter& chi) {
  u32 m = G.order();
  require(m <= 512, "bijection check: group too large");
  InertiaData ind = inertia_group(G, N, chi);
  BijectionReport rep;
  rep.inertia_index = ind.index;

  // distinct conjugates of chi, each with one conjugating representative
  Quotient q = G.quotient(N);
  std::map<std::vector<u32>, u32> orb;
  for (u32 u = 0; u < q.Q->order(); ++u) {
    u32 g = q.lift(u);
    std::vector<u32> key(N.basis.size());
    for (size_t t = 0; t < N.basis.size(); ++t) key[t] = chi.eval(G.conj(N.basis[t], g));
    orb.emplace(std::move(key), g);
  }
  require(orb.size() == ind.index, "bijection check: orbit size differs from the inertia index");

  double invn = 1.0 / double(N.order());
  std::vector<std::complex<double>> eo(m, 0.0);
  for (const auto& [key, g] : orb)
    for (u32 x : N.members) eo[x] += invn * unit(-double(chi.eval(G.conj(x, g))) / chi.e);

  Rng rng(0xb17ec + 31 * m);
  rep.degrees_g = projection_census(G, eo, ind.index * (m / N.order()), rng);
  for (auto [d, c] : rep.degrees_g) rep.count_g += c;

  // the same block data inside the inertia subgroup
  InducedGroup IG = G.induced(ind.I);
  const PcGroup& I = *IG.H;
  std::vector<u32> nb;
  for (u32 b : N.basis) nb.push_back(IG.from_ambient.at(b));
  Subgroup NI = I.subgroup(nb);
  require(NI.order() == N.order(), "bijection check: normal subgroup transport failed");
  LinearCharacter chii{&NI, chi.e, {}};
  chii.on_basis.resize(NI.basis.size());
  for (size_t t = 0; t < NI.basis.size(); ++t)
    chii.on_basis[t] = chi.eval(IG.to_ambient[NI.basis[t]]);
  require(chii.is_homomorphism(), "bijection check: character transport failed");

  Quotient qi = I.quotient(NI);
  std::set<std::vector<u32>> iorb;
  for (u32 u = 0; u < qi.Q->order(); ++u) {
    u32 g = qi.lift(u);
    std::vector<u32> key(NI.basis.size());
    for (size_t t = 0; t < NI.basis.size(); ++t) key[t] = chii.eval(I.conj(NI.basis[t], g));
    iorb.insert(std::move(key));
  }
  require(iorb.size() == 1, "bijection check: character is not inertia-invariant");

  std::vector<std::complex<double>> ei(I.order(), 0.0);
  for (u32 x : NI.members) ei[x] += invn * unit(-double(chii.eval(x)) / chi.e);
  rep.degrees_i = projection_census(I, ei, I.order() / N.order(), rng);
  for (auto [d, c] : rep.degrees_i) rep.count_i += c;

  rep.counts_match = rep.count_g == rep.count_i;
  std::map<u32, u64> scaled;
  for (auto [d, c] : rep.degrees_i) scaled[u32(d * ind.index)] += c;
  rep.degrees_scale = scaled == rep.degrees_g;
  rep.ok = rep.counts_match && rep.degrees_scale;
  return rep;
}

// --- ordinary degree census -------------------------------------------------------

DegreeCensus char_degree_census(const PcGroup& G) {
  u32 m = G.order();
  DegreeCensus out;
  if (G.is_abelian()) {
    out.count[1] = m;
    return out;
  }
  u64 p = G.prime();
  u64 ell = m / G.derived_subgroup().order();
  u64 k = G.class_count();
  u64 zi = m / G.center().size();

  std::vector<u64> cand;
  for (u64 d = p; d * d <= zi; d *= p) cand.push_back(d);
  require(!cand.empty(), "degree census: nonabelian group without degree candidates");
  out.count[1] = ell;
  if (cand.size() == 1) {
    u64 d1 = cand[0];
    u64 c1 = (m - ell) / (d1 * d1);
    require(c1 * d1 * d1 == m - ell && ell + c1 == k, "degree census: single-degree solve failed");
    out.count[u32(d1)] = c1;
    return out;
  }
  if (cand.size() == 2) {
    u64 d1 = cand[0], d2 = cand[1];
    u64 need = m - ell, cnt = k - ell;
    require(need >= cnt * d1 * d1, "degree census: class count out of range");
    u64 num = need - cnt * d1 * d1;
    u64 den = d2 * d2 - d1 * d1;
    require(num % den == 0, "degree census: two-degree solve failed");
    u64 c2 = num / den;
    require(c2 <= cnt, "degree census: two-degree solve failed");
    u64 c1 = cnt - c2;
    if (c1) out.count[u32(d1)] = c1;
    if (c2) out.count[u32(d2)] = c2;
    require(out.mass() == m, "degree census: mass check failed");
    return out;
  }
  // three or more possible degrees: hand the untwisted algebra to the
  // numeric backend
  return type_to_census(wedderburn_type_spectral(G, trivial_cocycle(G, 1), {}));
}

}  // namespace twistclass
