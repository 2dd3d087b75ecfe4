#include "twistclass/pcgroup.hpp"
#include "twistclass/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace twistclass {

void PcPresentation::validate() const {
  u32 n = ngens();
  require(p >= 2, "prime missing");
  for (u32 d = 2; d * d <= p; d++) require(p % d != 0, "p is not prime");
  require(names.size() == n && power.size() == n && comm.size() == n,
          "presentation arrays disagree");
  for (u32 i = 0; i < n; i++) {
    u32 r = rel_order[i], q = r;
    while (q % p == 0) q /= p;
    require(q == 1 && r >= p, "relative order of " + names[i] + " is not a power of p");
    u32 prev = 0;
    bool first = true;
    for (const Letter& l : power[i]) {
      require(l.gen < n, "bad generator index in power word");
      require(l.gen > i, "power relation for " + names[i] + " targets a lower or equal index");
      require(first || l.gen > prev, "power word generators must ascend");
      require(l.exp > 0 && l.exp < rel_order[l.gen], "power word letter out of range");
      prev = l.gen;
      first = false;
    }
    require(comm[i].size() == i, "commutator table shape");
    for (u32 j = 0; j < i; j++) {
      prev = 0;
      first = true;
      for (const Letter& l : comm[i][j]) {
        require(l.gen < n, "bad generator index in commutator word");
        require(l.gen > i, "commutator [" + names[i] + "," + names[j] +
                               "] targets index <= " + names[i]);
        require(first || l.gen > prev, "commutator word generators must ascend");
        require(l.exp > 0 && l.exp < rel_order[l.gen], "commutator letter out of range");
        prev = l.gen;
        first = false;
      }
    }
  }
  u64 m = 1;
  for (u32 i = 0; i < n; i++) {
    m *= rel_order[i];
    require(m <= (1u << 26), "group order exceeds supported bound");
  }
}

PcGroup::PcGroup(PcPresentation pres) : pres_(std::move(pres)) {
  pres_.validate();
  n_ = pres_.ngens();
  u64 m = 1;
  stride_.resize(n_);
  for (u32 i = 0; i < n_; i++) {
    stride_[i] = (u32)m;
    m *= pres_.rel_order[i];
  }
  m_ = (u32)m;
  build_tables();
  consistency_certificate();
}

u32 PcGroup::top_support(u32 x) const {
  for (u32 i = n_; i-- > 0;)
    if (digit(x, i) != 0) return i;
  return n_;
}

void PcGroup::build_tables() {
  // Element of the (disjoint-support) normal-form word of g_i^{r_i}.
  pow_elem_.assign(n_, 0);
  for (u32 i = 0; i < n_; i++) {
    u32 e = 0;
    for (const Letter& l : pres_.power[i]) e += l.exp * stride_[l.gen];
    pow_elem_[i] = e;
  }

  // tab_[i][x] = x * g_i, filled for i descending so that recursion on the
  // top digit only consults tables already built.
  tab_.assign(n_, {});
  for (u32 i = n_; i-- > 0;) {
    std::vector<u32>& T = tab_[i];
    T.assign(m_, 0);
    u32 ri = pres_.rel_order[i];
    for (u32 x = 0; x < m_; x++) {
      u32 mtop = top_support(x);
      if (mtop == n_ || mtop <= i) {
        // Support of x is contained in g_0..g_i: append or carry.
        u32 di = digit(x, i);
        if (di + 1 < ri) {
          T[x] = x + stride_[i];
        } else {
          // prefix * g_i^{r_i}; prefix has support < i, the power word
          // support > i, so the sum of indices is the normal form.
          T[x] = (x - di * stride_[i]) + pow_elem_[i];
        }
      } else {
        // x = x' * g_m with m > i:  x g_i = x' g_i g_m [g_m, g_i].
        u32 xp = x - stride_[mtop];
        u32 t = T[xp];
        t = tab_[mtop][t];
        for (const Letter& l : pres_.comm[mtop][i])
          for (u32 k = 0; k < l.exp; k++) t = tab_[l.gen][t];
        T[x] = t;
      }
    }
  }

  // g_i^-1 = g_i^{r_i - 1} * (g_i^{r_i})^-1, resolved bottom-up since the
  // power word lives strictly above i.
  inv_gen_.assign(n_, 0);
  for (u32 i = n_; i-- > 0;) {
    u32 w = pow_elem_[i];
    u32 winv = 0;  // inverse of w, support > i, uses inv_gen_ above i
    for (u32 j = n_; j-- > i + 1;) {
      u32 d = digit(w, j);
      for (u32 k = 0; k < d; k++) winv = mult(winv, inv_gen_[j]);
    }
    u32 t = (pres_.rel_order[i] - 1) * stride_[i];  // g_i^{r_i-1}, normal form
    inv_gen_[i] = mult(t, winv);
  }
}

u32 PcGroup::mult(u32 a, u32 b) const {
  u32 r = a;
  for (u32 j = 0; j < n_; j++) {
    u32 d = digit(b, j);
    for (u32 k = 0; k < d; k++) r = tab_[j][r];
  }
  return r;
}

u32 PcGroup::inv(u32 a) const {
  u32 r = 0;
  for (u32 j = n_; j-- > 0;) {
    u32 d = digit(a, j);
    for (u32 k = 0; k < d; k++) r = mult(r, inv_gen_[j]);
  }
  return r;
}

u32 PcGroup::conj(u32 a, u32 b) const { return mult(mult(inv(b), a), b); }

u32 PcGroup::commutator(u32 a, u32 b) const {
  return mult(mult(inv(a), inv(b)), mult(a, b));
}

u32 PcGroup::power(u32 a, i64 k) const {
  u32 base = a;
  if (k < 0) {
    base = inv(a);
    k = -k;
  }
  u32 r = 0;
  u64 e = (u64)k;
  while (e) {
    if (e & 1) r = mult(r, base);
    base = mult(base, base);
    e >>= 1;
  }
  return r;
}

u32 PcGroup::element_order(u32 a) const {
  u32 ord = 1, cur = a;
  while (cur != 0) {
    cur = power(cur, pres_.p);
    ord *= pres_.p;
  }
  // ord is now a p-power with a^ord = 1; strip excess factors.
  while (ord > 1 && power(a, ord / pres_.p) == 0) ord /= pres_.p;
  return ord;
}

u32 PcGroup::word_elem(const Word& w) const {
  u32 r = 0;
  for (const Letter& l : w) r = mult(r, power(stride_[l.gen], l.exp));
  return r;
}

std::vector<u32> PcGroup::exponents(u32 x) const {
  std::vector<u32> e(n_);
  for (u32 i = 0; i < n_; i++) e[i] = digit(x, i);
  return e;
}

u32 PcGroup::from_exponents(const std::vector<u32>& e) const {
  require(e.size() == n_, "exponent vector length");
  u32 x = 0;
  for (u32 i = 0; i < n_; i++) {
    require(e[i] < pres_.rel_order[i], "exponent out of range");
    x += e[i] * stride_[i];
  }
  return x;
}

void PcGroup::consistency_certificate() const {
  auto fail_witness = [&](const char* kind, u32 c, u32 b, u32 a) {
    std::ostringstream os;
    os << "inconsistent presentation: " << kind << " overlap fails at ("
       << pres_.names[c];
    if (b != n_) os << ", " << pres_.names[b];
    if (a != n_) os << ", " << pres_.names[a];
    os << ")";
    fail(os.str());
  };
  // Associativity overlaps g_c (g_b g_a) = (g_c g_b) g_a for c > b > a.
  for (u32 c = 0; c < n_; c++)
    for (u32 b = 0; b < c; b++)
      for (u32 a = 0; a < b; a++) {
        u32 lhs = mult(stride_[c], tab_[a][stride_[b]]);
        u32 rhs = tab_[a][tab_[b][stride_[c]]];
        if (lhs != rhs) fail_witness("associativity", c, b, a);
      }
  for (u32 b = 0; b < n_; b++)
    for (u32 a = 0; a < b; a++) {
      // g_b^{r_b} g_a = g_b^{r_b-1} (g_b g_a)
      u32 lhs = tab_[a][pow_elem_[b]];
      u32 rhs = mult((pres_.rel_order[b] - 1) * stride_[b], tab_[a][stride_[b]]);
      if (lhs != rhs) fail_witness("power-left", b, a, n_);
      // g_b g_a^{r_a} = (g_b g_a) g_a^{r_a-1}
      lhs = mult(stride_[b], pow_elem_[a]);
      rhs = tab_[a][stride_[b]];
      for (u32 k = 0; k + 1 < pres_.rel_order[a]; k++) rhs = tab_[a][rhs];
      if (lhs != rhs) fail_witness("power-right", b, a, n_);
    }
  for (u32 a = 0; a < n_; a++) {
    // g_a^{r_a} g_a = g_a g_a^{r_a}
    u32 lhs = tab_[a][pow_elem_[a]];
    u32 rhs = mult(stride_[a], pow_elem_[a]);
    if (lhs != rhs) fail_witness("power-diag", a, n_, n_);
  }
}

bool PcGroup::is_abelian() const {
  for (u32 j = 0; j < n_; j++)
    for (u32 i = 0; i < j; i++)
      if (!pres_.comm[j][i].empty()) return false;
  return true;
}

u32 PcGroup::exponent() const {
  u32 e = 1;
  const Classes& cl = classes();
  for (u32 r : cl.rep) e = std::max(e, element_order(r));
  return e;
}

const std::vector<u32>& PcGroup::center() const {
  if (center_.empty()) {
    for (u32 x = 0; x < m_; x++) {
      bool central = true;
      for (u32 j = 0; j < n_ && central; j++)
        central = (tab_[j][x] == mult(stride_[j], x));
      if (central) center_.push_back(x);
    }
  }
  return center_;
}

const PcGroup::Classes& PcGroup::classes() const {
  if (!classes_) {
    Classes cl;
    cl.class_of.assign(m_, UINT32_MAX);
    std::vector<u32> stack;
    for (u32 x = 0; x < m_; x++) {
      if (cl.class_of[x] != UINT32_MAX) continue;
      u32 id = (u32)cl.rep.size();
      cl.rep.push_back(x);
      cl.size.push_back(0);
      cl.class_of[x] = id;
      stack.assign(1, x);
      while (!stack.empty()) {
        u32 y = stack.back();
        stack.pop_back();
        cl.size[id]++;
        for (u32 j = 0; j < n_; j++) {
          u32 z = conj(y, stride_[j]);
          if (cl.class_of[z] == UINT32_MAX) {
            cl.class_of[z] = id;
            stack.push_back(z);
          }
        }
      }
    }
    classes_ = std::move(cl);
  }
  return *classes_;
}

std::vector<u32> PcGroup::centralizer(u32 g) const {
  std::vector<u32> c;
  for (u32 x = 0; x < m_; x++)
    if (mult(x, g) == mult(g, x)) c.push_back(x);
  return c;
}

// ---------------------------------------------------------------------------
// Subgroups

static void close_members(const PcGroup& G, const std::vector<u32>& gens,
                          std::vector<u32>& members, std::vector<char>& flag) {
  flag.assign(G.order(), 0);
  flag[0] = 1;
  members.assign(1, 0);
  std::vector<u32> queue{0};
  while (!queue.empty()) {
    u32 x = queue.back();
    queue.pop_back();
    for (u32 s : gens) {
      u32 y = G.mult(x, s);
      if (!flag[y]) {
        flag[y] = 1;
        members.push_back(y);
        queue.push_back(y);
      }
    }
  }
  std::sort(members.begin(), members.end());
}

static Subgroup make_subgroup(const PcGroup& G, std::vector<u32> members,
                              std::vector<char> flag) {
  Subgroup H;
  H.G = &G;
  H.members = std::move(members);
  H.flag = std::move(flag);
  u32 p = G.prime();
  // Echelon basis: ascending depth, minimal-valuation lead digit, lead
  // coefficient normalized to a pure p-power.
  for (u32 d = 0; d < G.ngens(); d++) {
    u32 rd = G.presentation().rel_order[d];
    u32 best = 0, bestval = UINT32_MAX;
    for (u32 x : H.members) {
      bool deeper = true;
      for (u32 e = 0; e < d && deeper; e++) deeper = (G.digit(x, e) == 0);
      if (!deeper) continue;
      u32 dig = G.digit(x, d);
      if (dig == 0) continue;
      u32 v = valuation(dig, p);
      if (v < bestval) {
        bestval = v;
        best = x;
      }
    }
    if (bestval == UINT32_MAX) continue;
    u32 pv = (u32)ipow(p, bestval);
    u32 unit = G.digit(best, d) / pv;  // coprime to p
    u32 rel = rd / pv;
    u32 uinv = unit_inverse(unit % rel == 0 ? 1 : unit % rel, rel);
    u32 b = G.power(best, uinv);
    require(G.digit(b, d) == pv, "echelon normalization failed");
    H.basis.push_back(b);
    H.depth.push_back(d);
    H.lead_val.push_back(bestval);
    H.rel.push_back(rel);
  }
  u64 ord = 1;
  for (u32 r : H.rel) ord *= r;
  require(ord == H.members.size(), "echelon basis does not span the subgroup");
  return H;
}

Subgroup PcGroup::subgroup(const std::vector<u32>& gens) const {
  std::vector<u32> members;
  std::vector<char> flag;
  close_members(*this, gens, members, flag);
  return make_subgroup(*this, std::move(members), std::move(flag));
}

Subgroup PcGroup::normal_closure(const std::vector<u32>& gens) const {
  std::vector<u32> work = gens;
  for (;;) {
    std::vector<u32> members;
    std::vector<char> flag;
    close_members(*this, work, members, flag);
    std::vector<u32> fresh;
    for (u32 h : members) {
      for (u32 j = 0; j < n_; j++) {
        u32 c = conj(h, stride_[j]);
        if (!flag[c]) fresh.push_back(c);
      }
    }
    if (fresh.empty())
      return make_subgroup(*this, std::move(members), std::move(flag));
    work = std::move(members);
    work.insert(work.end(), fresh.begin(), fresh.end());
  }
}

Subgroup PcGroup::full_subgroup() const {
  std::vector<u32> gens(n_);
  for (u32 i = 0; i < n_; i++) gens[i] = stride_[i];
  return subgroup(gens);
}

Subgroup PcGroup::trivial_subgroup() const { return subgroup({}); }

const Subgroup& PcGroup::derived_subgroup() const {
  if (!derived_) {
    std::vector<u32> gens;
    for (u32 j = 0; j < n_; j++)
      for (u32 i = 0; i < j; i++) {
        u32 c = word_elem(pres_.comm[j][i]);
        if (c) gens.push_back(c);
      }
    derived_ = normal_closure(gens);
  }
  return *derived_;
}

std::optional<std::vector<u32>> Subgroup::decompose(u32 x) const {
  std::vector<u32> coef(basis.size(), 0);
  for (size_t t = 0; t < basis.size(); t++) {
    u32 d = depth[t];
    u32 dig = G->digit(x, d);
    u32 pv = (u32)ipow(G->prime(), lead_val[t]);
    if (dig % pv != 0) return std::nullopt;
    u32 k = (dig / pv) % rel[t];
    coef[t] = k;
    x = G->mult(G->inv(G->power(basis[t], k)), x);
    if (G->digit(x, d) != 0) return std::nullopt;
  }
  if (x != 0) return std::nullopt;
  return coef;
}

bool Subgroup::is_normal() const {
  for (u32 b : basis)
    for (u32 j = 0; j < G->ngens(); j++)
      if (!contains(G->conj(b, G->gen(j)))) return false;
  return true;
}

bool Subgroup::is_central() const {
  for (u32 b : basis)
    for (u32 j = 0; j < G->ngens(); j++)
      if (G->mult(b, G->gen(j)) != G->mult(G->gen(j), b)) return false;
  return true;
}

bool Subgroup::is_abelian() const {
  for (u32 a : basis)
    for (u32 b : basis)
      if (G->mult(a, b) != G->mult(b, a)) return false;
  return true;
}

std::vector<u32> PcGroup::abelian_invariants() const {
  // Smith form of the abelianized relation matrix (rows: power and
  // commutator relations over the generator lattice).
  std::vector<std::vector<i64>> rows;
  for (u32 i = 0; i < n_; i++) {
    std::vector<i64> r(n_, 0);
    r[i] = (i64)pres_.rel_order[i];
    for (const Letter& l : pres_.power[i]) r[l.gen] -= (i64)l.exp;
    rows.push_back(std::move(r));
  }
  for (u32 j = 0; j < n_; j++)
    for (u32 i = 0; i < j; i++) {
      if (pres_.comm[j][i].empty()) continue;
      std::vector<i64> r(n_, 0);
      for (const Letter& l : pres_.comm[j][i]) r[l.gen] += (i64)l.exp;
      rows.push_back(std::move(r));
    }
  if (rows.empty()) return {};
  SmithZ s = smith_z(rows);
  // The power rows are triangular with positive diagonal, so the matrix has
  // full column rank and every diagonal entry is nonzero; entries 1 drop out.
  std::vector<u32> inv;
  for (i64 d : s.diag)
    if (d != 1) {
      require(d != 0, "abelianization must be finite");
      inv.push_back((u32)(d < 0 ? -d : d));
    }
  std::sort(inv.begin(), inv.end());
  return inv;
}

// ---------------------------------------------------------------------------
// Quotients and induced groups

Quotient PcGroup::quotient(const Subgroup& N) const {
  require(N.G == this, "subgroup of a different group");
  require(N.is_normal(), "quotient by a non-normal subgroup");
  // p^{vq[d]} = order of the image of g_d in the cyclic section at depth d
  // after killing N; digits of canonical representatives at depth d run
  // over [0, p^{vq[d]}).
  std::vector<u32> cap(n_);
  for (u32 d = 0; d < n_; d++) cap[d] = pres_.rel_order[d];
  for (size_t t = 0; t < N.basis.size(); t++)
    cap[N.depth[t]] = (u32)ipow(pres_.p, N.lead_val[t]);

  auto canonical = [&](u32 x) {
    for (size_t t = 0; t < N.basis.size(); t++) {
      u32 d = N.depth[t];
      u32 dig = digit(x, d);
      u32 k = dig / cap[d];
      if (k) x = mult(inv(power(N.basis[t], k)), x);
    }
    return x;
  };

  PcPresentation qp;
  qp.p = pres_.p;
  std::vector<u32> qgen;
  std::vector<u32> qindex(n_, UINT32_MAX);
  for (u32 d = 0; d < n_; d++)
    if (cap[d] > 1) {
      qindex[d] = (u32)qgen.size();
      qgen.push_back(d);
      qp.names.push_back(pres_.names[d]);
      qp.rel_order.push_back(cap[d]);
    }
  u32 qn = (u32)qgen.size();

  auto to_word = [&](u32 x) {
    // x must be a canonical representative; express it in quotient digits.
    Word w;
    for (u32 t = 0; t < qn; t++) {
      u32 dig = digit(x, qgen[t]);
      require(dig < cap[qgen[t]], "canonical representative out of range");
      if (dig) w.push_back({t, dig});
    }
    for (u32 d = 0; d < n_; d++)
      if (cap[d] == 1) require(digit(x, d) == 0, "canonical representative out of range");
    return w;
  };

  qp.power.resize(qn);
  qp.comm.resize(qn);
  for (u32 t = 0; t < qn; t++) {
    qp.power[t] = to_word(canonical(power(stride_[qgen[t]], cap[qgen[t]])));
    qp.comm[t].resize(t);
    for (u32 s = 0; s < t; s++)
      qp.comm[t][s] = to_word(canonical(commutator(stride_[qgen[t]], stride_[qgen[s]])));
  }

  Quotient q;
  q.Q = std::make_shared<PcGroup>(qp);
  q.qgen = qgen;
  q.lift_tab.assign(q.Q->order(), 0);
  q.proj_tab.assign(m_, 0);
  for (u32 x = 0; x < m_; x++) {
    u32 c = canonical(x);
    u32 idx = 0;
    for (u32 t = 0; t < qn; t++) idx += digit(c, qgen[t]) * q.Q->gen(t);
    q.proj_tab[x] = idx;
    q.lift_tab[idx] = c;
  }
  // Spot-check that projection is a homomorphism on generators.
  for (u32 t = 0; t < qn; t++)
    for (u32 s = 0; s < qn; s++) {
      u32 a = stride_[qgen[t]], b = stride_[qgen[s]];
      require(q.proj_tab[mult(a, b)] ==
                  q.Q->mult(q.proj_tab[a], q.proj_tab[b]),
              "quotient projection is not a homomorphism");
    }
  return q;
}

InducedGroup PcGroup::induced(const Subgroup& H) const {
  require(H.G == this, "subgroup of a different group");
  u32 k = (u32)H.basis.size();
  PcPresentation hp;
  hp.p = pres_.p;
  for (u32 t = 0; t < k; t++) {
    hp.names.push_back(pres_.names[H.depth[t]]);
    hp.rel_order.push_back(H.rel[t]);
  }
  auto to_word = [&](u32 x) {
    auto coef = H.decompose(x);
    require(coef.has_value(), "induced relation leaves the subgroup");
    Word w;
    for (u32 t = 0; t < k; t++)
      if ((*coef)[t]) w.push_back({t, (*coef)[t]});
    return w;
  };
  hp.power.resize(k);
  hp.comm.resize(k);
  for (u32 t = 0; t < k; t++) {
    hp.power[t] = to_word(power(H.basis[t], H.rel[t]));
    for (const Letter& l : hp.power[t])
      require(l.gen > t, "induced power word not echelon-compatible");
    hp.comm[t].resize(t);
    for (u32 s = 0; s < t; s++) {
      hp.comm[t][s] = to_word(commutator(H.basis[t], H.basis[s]));
      for (const Letter& l : hp.comm[t][s])
        require(l.gen > t, "induced commutator word not echelon-compatible");
    }
  }
  InducedGroup ind;
  ind.H = std::make_shared<PcGroup>(hp);
  ind.to_ambient.assign(ind.H->order(), 0);
  for (u32 x = 0; x < ind.H->order(); x++) {
    u32 a = 0;
    for (u32 t = 0; t < k; t++) a = mult(a, power(H.basis[t], ind.H->digit(x, t)));
    ind.to_ambient[x] = a;
    ind.from_ambient[a] = x;
  }
  require(ind.from_ambient.size() == ind.H->order(), "induced map not injective");
  return ind;
}

// ---------------------------------------------------------------------------
// Products

PcGroup direct_product(const PcGroup& A, const PcGroup& B) {
  const PcPresentation& a = A.presentation();
  const PcPresentation& b = B.presentation();
  PcPresentation c;
  require(a.p == b.p, "direct product needs equal primes");
  c.p = a.p;
  u32 na = a.ngens(), nb = b.ngens();
  for (u32 i = 0; i < na; i++) c.names.push_back(a.names[i] + "1");
  for (u32 i = 0; i < nb; i++) c.names.push_back(b.names[i] + "2");
  c.rel_order = a.rel_order;
  c.rel_order.insert(c.rel_order.end(), b.rel_order.begin(), b.rel_order.end());
  auto shift = [&](const Word& w, u32 off) {
    Word r = w;
    for (Letter& l : r) l.gen += off;
    return r;
  };
  c.power = a.power;
  for (u32 i = 0; i < nb; i++) c.power.push_back(shift(b.power[i], na));
  c.comm.resize(na + nb);
  for (u32 j = 0; j < na; j++) c.comm[j] = a.comm[j];
  for (u32 j = 0; j < nb; j++) {
    c.comm[na + j].assign(na + j, {});
    for (u32 i = 0; i < j; i++) c.comm[na + j][na + i] = shift(b.comm[j][i], na);
  }
  return PcGroup(c);
}

PcGroup central_product(const PcGroup& A, const PcGroup& B,
                        const std::vector<std::pair<u32, u32>>& ident) {
  PcGroup D = direct_product(A, B);
  u32 na = A.ngens();
  std::vector<u32> gens;
  for (auto& [ea, eb] : ident) {
    // embed ea in the first factor, eb in the second
    u32 xa = 0, xb = 0;
    for (u32 i = 0; i < A.ngens(); i++) xa += A.digit(ea, i) * D.gen(i);
    for (u32 i = 0; i < B.ngens(); i++) xb += B.digit(eb, i) * D.gen(na + i);
    gens.push_back(D.mult(xa, D.inv(xb)));
  }
  Subgroup N = D.subgroup(gens);
  require(N.is_central(), "central product identification is not central");
  Quotient q = D.quotient(N);
  return *q.Q;
}

// ---------------------------------------------------------------------------
// Characters into Z/e

PcGroup::HomBasis PcGroup::hom_to_cyclic(u32 e) const {
  ZMat M(0, n_, e);
  auto add_row = [&](const std::vector<i64>& r) {
    M.rows++;
    for (u32 j = 0; j < n_; j++) M.a.push_back(umod(r[j], e));
  };
  for (u32 i = 0; i < n_; i++) {
    std::vector<i64> r(n_, 0);
    r[i] = (i64)pres_.rel_order[i];
    for (const Letter& l : pres_.power[i]) r[l.gen] -= (i64)l.exp;
    add_row(r);
  }
  for (u32 j = 0; j < n_; j++)
    for (u32 i = 0; i < j; i++) {
      if (pres_.comm[j][i].empty()) continue;
      std::vector<i64> r(n_, 0);
      for (const Letter& l : pres_.comm[j][i]) r[l.gen] += (i64)l.exp;
      add_row(r);
    }
  ModKernel K = mod_kernel(M);
  HomBasis hb;
  hb.e = e;
  hb.vec = K.gens;
  hb.ord = K.orders;
  return hb;
}

u32 PcGroup::HomBasis::eval(const PcGroup& G, size_t k, u32 x) const {
  u64 s = 0;
  for (u32 i = 0; i < G.ngens(); i++)
    s += (u64)G.digit(x, i) * vec[k][i];
  return (u32)(s % e);
}

// ---------------------------------------------------------------------------

std::string PcGroup::to_dsl() const {
  std::ostringstream os;
  os << "p=" << pres_.p << "; gens ";
  for (u32 i = 0; i < n_; i++) os << (i ? "," : "") << pres_.names[i];
  auto word_str = [&](const Word& w) {
    if (w.empty()) return std::string("1");
    std::ostringstream ws;
    for (size_t t = 0; t < w.size(); t++) {
      if (t) ws << "*";
      ws << pres_.names[w[t].gen];
      if (w[t].exp != 1) ws << "^" << w[t].exp;
    }
    return ws.str();
  };
  for (u32 i = 0; i < n_; i++)
    os << "; " << pres_.names[i] << "^" << pres_.rel_order[i] << "="
       << word_str(pres_.power[i]);
  for (u32 j = 0; j < n_; j++)
    for (u32 i = 0; i < j; i++)
      if (!pres_.comm[j][i].empty())
        os << "; [" << pres_.names[j] << "," << pres_.names[i]
           << "]=" << word_str(pres_.comm[j][i]);
  return os.str();
}

GroupInfo group_info(const PcGroup& G) {
  GroupInfo gi;
  gi.order = G.order();
  gi.exponent = G.exponent();
  gi.center_order = G.center().size();
  gi.derived_order = G.derived_subgroup().order();
  gi.class_count = G.class_count();
  gi.abelianization = G.abelian_invariants();
  return gi;
}

}  // namespace twistclass
