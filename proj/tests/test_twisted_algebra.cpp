#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "twistclass/twisted_algebra.hpp"

using namespace twistclass;

// ---------------------------------------------------------------------------
// group builders

static PcGroup cyclic_powers(u32 p, const std::vector<u32>& ks) {
  PcPresentation pr;
  pr.p = p;
  for (size_t t = 0; t < ks.size(); ++t) {
    pr.names.push_back("g" + std::to_string(t));
    pr.rel_order.push_back(u32(ipow(p, ks[t])));
  }
  pr.power.resize(ks.size());
  pr.comm.resize(ks.size());
  for (size_t j = 0; j < ks.size(); ++j) pr.comm[j].resize(j);
  return PcGroup(pr);
}

static PcGroup quaternion8() {
  PcPresentation pr;
  pr.p = 2;
  pr.names = {"i", "j", "m"};
  pr.rel_order = {2, 2, 2};
  pr.power = {{{2, 1}}, {{2, 1}}, {}};
  pr.comm.resize(3);
  pr.comm[1].resize(1);
  pr.comm[2].resize(2);
  pr.comm[1][0] = {{2, 1}};
  return PcGroup(pr);
}

static PcGroup dihedral8() {
  return PcGroup(parse_presentation("p=2; gens s,r,u; s^2=1; r^2=u; u^2=1; [r,s]=u"));
}

static PcGroup heisenberg27() {
  return PcGroup(parse_presentation("p=3; gens x,y,z; x^3=1; y^3=1; z^3=1; [x,y]=z"));
}

static PcGroup modular27() {
  return PcGroup(parse_presentation("p=3; gens a,b,c; a^3=c; b^3=1; c^3=1; [a,b]=c"));
}

// ---------------------------------------------------------------------------
// helpers

static Cocycle coboundary_of(const PcGroup& G, u32 e, const std::vector<u32>& t) {
  u32 m = G.order();
  REQUIRE(t[0] == 0);
  Cocycle out{&G, e, std::vector<u32>(size_t(m) * m, 0)};
  for (u32 x = 0; x < m; ++x)
    for (u32 y = 0; y < m; ++y)
      out.f[size_t(x) * m + y] = u32((u64(t[x]) + t[y] + e - t[G.mult(x, y)]) % e);
  return out;
}

static std::vector<u32> random_phase(const PcGroup& G, u32 e, Rng& rng) {
  std::vector<u32> t(G.order(), 0);
  for (u32 x = 1; x < G.order(); ++x) t[x] = u32(rng.below(e));
  return t;
}

static std::vector<std::vector<u32>> all_class_vectors(const std::vector<u32>& inv) {
  u64 total = 1;
  for (u32 d : inv) total *= d;
  std::vector<std::vector<u32>> out;
  for (u64 idx = 0; idx < total; ++idx) {
    std::vector<u32> v(inv.size());
    u64 k = idx;
    for (size_t t = 0; t < inv.size(); ++t) {
      v[t] = u32(k % inv[t]);
      k /= inv[t];
    }
    out.push_back(std::move(v));
  }
  return out;
}

static WedderburnType tensor_type(const WedderburnType& a, const WedderburnType& b) {
  std::map<u32, u64> acc;
  for (auto [da, ca] : a.blocks)
    for (auto [db, cb] : b.blocks) acc[da * db] += ca * cb;
  WedderburnType t;
  for (auto [d, c] : acc) t.blocks.push_back({d, c});
  return t;
}

// ---------------------------------------------------------------------------

TEST_CASE("scalar helpers satisfy the algebra identities") {
  PcGroup d8 = dihedral8();
  CohomologyGroup H = h2(d8);
  REQUIRE(H.invariants == std::vector<u32>{2});
  Cocycle f = H.representative({1});
  TwistedAlgebra T(d8, f);
  u32 m = d8.order(), e = T.e();

  for (u32 g = 0; g < m; ++g)
    CHECK((T.inv_scalar(g) + T.f(g, d8.inv(g))) % e == 0);

  // commuting pairs: conjugation picks up exactly the commutation defect
  for (u32 g = 0; g < m; ++g)
    for (u32 x = 0; x < m; ++x)
      if (d8.mult(g, x) == d8.mult(x, g))
        CHECK(T.conj_scalar(g, x) == u32((u64(f(g, x)) + e - f(x, g)) % e));

  // conjugation is an algebra automorphism
  for (u32 g = 0; g < m; ++g)
    for (u32 x = 0; x < m; ++x)
      for (u32 y = 0; y < m; ++y) {
        u32 xg = d8.conj(x, d8.inv(g)), yg = d8.conj(y, d8.inv(g));
        u32 lhs = u32((u64(T.conj_scalar(g, x)) + T.conj_scalar(g, y) + f(xg, yg)) % e);
        u32 rhs = u32((u64(f(x, y)) + T.conj_scalar(g, d8.mult(x, y))) % e);
        CHECK(lhs == rhs);
      }

  Cocycle bad = f;
  bad.f[size_t(1) * m + 1] = (bad.f[size_t(1) * m + 1] + 1) % e;
  CHECK_THROWS_AS(TwistedAlgebra(d8, bad), Error);
  Cocycle unnorm = f;
  unnorm.f[3] = 1;  // breaks f(0, 3) = 0
  CHECK_THROWS_AS(TwistedAlgebra(d8, unnorm), Error);
}

TEST_CASE("alpha-regular classes") {
  PcGroup d8 = dihedral8();

  // trivial twist: every class is regular
  std::vector<u32> all = alpha_regular_classes(d8, trivial_cocycle(d8, 8));
  CHECK(all.size() == d8.class_count());

  // nondegenerate pairing on C3 x C3: only the identity survives
  PcGroup c33 = cyclic_powers(3, {1, 1});
  CohomologyGroup H3 = h2(c33);
  REQUIRE(H3.invariants == std::vector<u32>{3});
  Cocycle f3 = H3.representative({1});
  std::vector<u32> reg3 = alpha_regular_classes(c33, f3);
  REQUIRE(reg3.size() == 1);
  CHECK(c33.classes().class_of[c33.id()] == reg3[0]);
  u64 radical = 0;  // independent count over elements
  for (u32 g = 0; g < 9; ++g) {
    bool r = true;
    for (u32 h = 0; h < 9 && r; ++h) r = f3(g, h) == f3(h, g);
    if (r) ++radical;
  }
  CHECK(radical == 1);

  // twisted D8 keeps two regular classes
  CohomologyGroup H8 = h2(d8);
  Cocycle f8 = H8.representative({1});
  CHECK(alpha_regular_classes(d8, f8).size() == 2);

  // regularity is a class function: every member decides the same way
  const auto& cls = d8.classes();
  for (u32 c = 0; c < u32(cls.rep.size()); ++c) {
    std::set<bool> verdicts;
    for (u32 x = 0; x < d8.order(); ++x) {
      if (cls.class_of[x] != c) continue;
      bool r = true;
      for (u32 h : d8.centralizer(x))
        if (f8(x, h) != f8(h, x)) {
          r = false;
          break;
        }
      verdicts.insert(r);
    }
    CHECK(verdicts.size() == 1);
  }

  // cohomologous cocycles have the same regular classes
  Rng rng(77);
  for (u32 trial = 0; trial < 3; ++trial) {
    Cocycle g = cocycle_add(f8, coboundary_of(d8, 8, random_phase(d8, 8, rng)));
    CHECK(alpha_regular_classes(d8, g) == alpha_regular_classes(d8, f8));
  }
}

TEST_CASE("block types pin down on exact data") {
  PcGroup q8 = quaternion8(), d8 = dihedral8();
  PcGroup heis = heisenberg27(), mod = modular27();

  WedderburnType q8t;
  q8t.blocks = {{1, 4}, {2, 1}};
  CHECK(wedderburn_type_spectral(q8, trivial_cocycle(q8, 8)) == q8t);

  PcGroup c33 = cyclic_powers(3, {1, 1});
  Cocycle f3 = h2(c33).representative({1});
  WedderburnType mat3;
  mat3.blocks = {{3, 1}};
  CHECK(wedderburn_type_spectral(c33, f3) == mat3);

  Cocycle f8 = h2(d8).representative({1});
  WedderburnType twod8;
  twod8.blocks = {{2, 2}};
  CHECK(wedderburn_type_spectral(d8, f8) == twod8);

  WedderburnType p3t;
  p3t.blocks = {{1, 9}, {3, 2}};
  CHECK(wedderburn_type_spectral(heis, trivial_cocycle(heis, 27)) == p3t);
  CHECK(wedderburn_type_spectral(mod, trivial_cocycle(mod, 27)) == p3t);

  // block count equals the number of regular classes; mass is the order
  for (const PcGroup* G : {&q8, &d8, &heis, &mod}) {
    WedderburnType t = wedderburn_type_spectral(*G, trivial_cocycle(*G, G->order()));
    CHECK(t.block_count() == alpha_regular_classes(*G, trivial_cocycle(*G, 1)).size());
    CHECK(t.mass() == G->order());
  }
}

TEST_CASE("numeric route agrees with the exact shortcut") {
  SpectralOptions force;
  force.force_numeric = true;

  PcGroup q8 = quaternion8(), d8 = dihedral8(), heis = heisenberg27();
  PcGroup c33 = cyclic_powers(3, {1, 1}), c42 = cyclic_powers(2, {2, 1});

  auto both = [&](const PcGroup& G, const Cocycle& f) {
    WedderburnType a = wedderburn_type_spectral(G, f);
    WedderburnType b = wedderburn_type_spectral(G, f, force);
    CAPTURE(G.order());
    CHECK(a == b);
  };
  both(q8, trivial_cocycle(q8, 8));
  both(d8, trivial_cocycle(d8, 8));
  both(d8, h2(d8).representative({1}));
  both(c33, h2(c33).representative({1}));
  both(c42, h2(c42).representative({1}));
  both(heis, trivial_cocycle(heis, 27));
  both(heis, h2(heis).representative({1, 0}));

  SpectralOptions tiny;
  tiny.force_numeric = true;
  tiny.max_dim = 4;
  CHECK_THROWS_AS(wedderburn_type_spectral(d8, trivial_cocycle(d8, 8), tiny), Error);
}

TEST_CASE("spectral route equals extension route class by class") {
  PcGroup q8 = quaternion8(), d8 = dihedral8();
  PcGroup heis = heisenberg27(), mod = modular27();
  PcGroup c222 = cyclic_powers(2, {1, 1, 1}), c42 = cyclic_powers(2, {2, 1});
  PcGroup c44 = cyclic_powers(2, {2, 2}), c33 = cyclic_powers(3, {1, 1});

  for (const PcGroup* G : {&q8, &d8, &heis, &mod, &c222, &c42, &c44, &c33}) {
    CohomologyGroup H = h2(*G);
    for (const auto& vec : all_class_vectors(H.invariants)) {
      Cocycle f = H.representative(vec);
      WedderburnType ts = wedderburn_type_spectral(*G, f);
      WedderburnType te = wedderburn_type_via_extension(*G, f);
      CAPTURE(G->order());
      CAPTURE(vec);
      CHECK(ts == te);
      CHECK(ts.block_count() == alpha_regular_classes(*G, f).size());
      CHECK(ts.mass() == G->order());
    }
  }
}

TEST_CASE("trivial classes reproduce the ordinary degrees") {
  PcGroup q8 = quaternion8(), d8 = dihedral8(), heis = heisenberg27();
  PcGroup c42 = cyclic_powers(2, {2, 1});
  for (const PcGroup* G : {&q8, &d8, &heis, &c42}) {
    WedderburnType ord = ordinary_degree_multiset(*G);
    CHECK(wedderburn_type_via_extension(*G, trivial_cocycle(*G, G->order())) == ord);
    CHECK(census_to_type(char_degree_census(*G)) == ord);
  }
  WedderburnType q8t;
  q8t.blocks = {{1, 4}, {2, 1}};
  CHECK(ordinary_degree_multiset(q8) == q8t);
  WedderburnType heist;
  heist.blocks = {{1, 9}, {3, 2}};
  CHECK(ordinary_degree_multiset(heis) == heist);
}

TEST_CASE("circle-coefficient class orders") {
  // on C2 the square table is not a coboundary mod 2, yet dies over the circle
  PcGroup c2 = cyclic_powers(2, {1});
  Cocycle f{&c2, 2, {0, 0, 0, 1}};
  REQUIRE(is_cocycle(f, Rng(1)));
  CHECK(!coboundary_solve(f, 2).has_value());
  CHECK(projective_class_order(f) == 1);
  WedderburnType lin2;
  lin2.blocks = {{1, 2}};
  CHECK(wedderburn_type_spectral(c2, f) == lin2);
  CHECK(wedderburn_type_via_extension(c2, f) == lin2);

  // the C4 x C4 pairing keeps full order over the circle
  PcGroup c44 = cyclic_powers(2, {2, 2});
  CohomologyGroup H = h2(c44);
  REQUIRE(H.invariants == std::vector<u32>{4});
  Cocycle g = H.representative({1});
  CHECK(projective_class_order(g) == 4);
  CHECK(!cocycle_descend_projective(g, 2).has_value());
  CHECK(projective_class_order(cocycle_scale(g, 2)) == 2);
}

TEST_CASE("central type detection") {
  struct Case {
    u32 p;
    std::vector<u32> ks;
    bool expected;  // abelian rule: the group must be a square
  };
  std::vector<Case> cases = {
      {2, {4}, false},     {2, {3, 1}, false}, {2, {2, 2}, true},
      {2, {2, 1, 1}, false}, {2, {1, 1, 1, 1}, true},
      {3, {4}, false},     {3, {3, 1}, false}, {3, {2, 2}, true},
      {3, {2, 1, 1}, false}, {3, {1, 1, 1, 1}, true},
  };
  for (const auto& c : cases) {
    PcGroup A = cyclic_powers(c.p, c.ks);
    CentralTypeResult r = is_central_type(A);
    CAPTURE(c.p);
    CAPTURE(c.ks);
    CHECK(r.central_type == c.expected);
    if (r.central_type) {
      // verify the witness: its twisted algebra has a single regular element
      Cocycle f = h2(A).representative(r.witness);
      u64 radical = 0;
      for (u32 g = 0; g < A.order(); ++g) {
        bool reg = true;
        for (u32 h = 0; h < A.order() && reg; ++h) reg = f(g, h) == f(h, g);
        if (reg) ++radical;
      }
      CHECK(radical == 1);
      WedderburnType t = wedderburn_type_spectral(A, f);
      CHECK(t.block_count() == 1);
    }
  }

  // odd power orders can never carry a full matrix algebra
  CHECK(!is_central_type(quaternion8()).central_type);
  CHECK(!is_central_type(dihedral8()).central_type);
  CHECK(!is_central_type(heisenberg27()).central_type);
}

TEST_CASE("product cocycles have tensor block structure") {
  PcGroup d8 = dihedral8(), c22 = cyclic_powers(2, {1, 1});
  PcGroup P = direct_product(d8, c22);
  Cocycle fa = h2(d8).representative({1});
  Cocycle fb = cocycle_change_modulus(h2(c22).representative({1}), 8);
  Cocycle F = cocycle_product(P, d8, c22, fa, fb);

  WedderburnType ta = wedderburn_type_spectral(d8, fa);
  WedderburnType tb = wedderburn_type_spectral(c22, fb);
  WedderburnType tp = wedderburn_type_spectral(P, F);
  CHECK(tp == tensor_type(ta, tb));
  CHECK(tp == wedderburn_type_via_extension(P, F));
  CHECK(alpha_regular_classes(P, F).size() ==
        alpha_regular_classes(d8, fa).size() * alpha_regular_classes(c22, fb).size());
  WedderburnType m4;
  m4.blocks = {{4, 2}};
  CHECK(tp == m4);

  // odd prime, order 81: the twist on the first factor spreads over the product
  PcGroup heis = heisenberg27(), c3 = cyclic_powers(3, {1});
  PcGroup P3 = direct_product(heis, c3);
  Cocycle ga = h2(heis).representative({1, 0});
  Cocycle G3 = cocycle_product(P3, heis, c3, ga, trivial_cocycle(c3, 27));
  CHECK(wedderburn_type_spectral(P3, G3) ==
        tensor_type(wedderburn_type_spectral(heis, ga), ordinary_degree_multiset(c3)));
}

TEST_CASE("exact block data stays decisive at order 243") {
  PcGroup heis = heisenberg27(), c9 = cyclic_powers(3, {2});
  PcGroup G = direct_product(heis, c9);
  REQUIRE(G.order() == 243);

  WedderburnType ord = ordinary_degree_multiset(G);
  WedderburnType expect;
  expect.blocks = {{1, 81}, {3, 18}};
  CHECK(ord == expect);
  CHECK(wedderburn_type_spectral(G, trivial_cocycle(G, 243)) == ord);

  Cocycle fa = h2(heis).representative({1, 0});
  Cocycle F = cocycle_product(G, heis, c9, fa, trivial_cocycle(c9, 27));
  WedderburnType twisted = wedderburn_type_spectral(G, F);
  WedderburnType expect2;
  expect2.blocks = {{3, 27}};
  CHECK(twisted == expect2);
  CHECK(wedderburn_type_via_extension(G, F) == twisted);
}
