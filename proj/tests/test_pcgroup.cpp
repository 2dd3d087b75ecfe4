#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "twistclass/pcgroup.hpp"

using namespace twistclass;

// ---------------------------------------------------------------------------
// Independent oracles built from concrete models, not from pc machinery.

// Unitriangular 3x3 matrices over F_3: (a,b,c) is the matrix with first
// superdiagonal (a,b) and corner c.  (a1,b1,c1)(a2,b2,c2) =
// (a1+a2, b1+b2, c1+c2+a1*b2).
struct Heis3 {
  int a, b, c;
  bool operator<(const Heis3& o) const {
    return std::tie(a, b, c) < std::tie(o.a, o.b, o.c);
  }
  bool operator==(const Heis3& o) const {
    return a == o.a && b == o.b && c == o.c;
  }
};
static Heis3 heis_mul(Heis3 x, Heis3 y) {
  return {(x.a + y.a) % 3, (x.b + y.b) % 3, (x.c + y.c + x.a * y.b) % 3};
}

// Quaternion units as (sign, axis) with axis 0=1, 1=i, 2=j, 3=k.
struct Quat {
  int sign, axis;
  bool operator==(const Quat& o) const { return sign == o.sign && axis == o.axis; }
};
static Quat quat_mul(Quat x, Quat y) {
  static const int axis_tab[4][4] = {
      {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sign_tab[4][4] = {
      {1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  return {x.sign * y.sign * sign_tab[x.axis][y.axis], axis_tab[x.axis][y.axis]};
}

// Dihedral of order 8 as words s^f r^k with r s = s r^-1, so
// s^f1 r^k1 * s^f2 r^k2 = s^(f1^f2) r^(k2 + (-1)^f2 k1 mod 4).
struct Dih {
  int f, k;
  bool operator==(const Dih& o) const { return f == o.f && k == o.k; }
};
static Dih dih_mul(Dih x, Dih y) {
  int k = ((y.k + (y.f ? -x.k : x.k)) % 4 + 4) % 4;
  return {x.f ^ y.f, k};
}

// ---------------------------------------------------------------------------

static PcGroup heisenberg27() {
  return PcGroup(parse_presentation(
      "p=3; gens x,y,z; x^3=1; y^3=1; z^3=1; [x,y]=z"));
}

static PcGroup quaternion8() {
  PcPresentation q;
  q.p = 2;
  q.names = {"i", "j", "m"};
  q.rel_order = {2, 2, 2};
  q.power = {{{2, 1}}, {{2, 1}}, {}};  // i^2 = m, j^2 = m
  q.comm = {{}, {{{2, 1}}}, {{}, {}}};  // [j,i] = m
  return PcGroup(q);
}

static PcGroup dihedral8() {
  return PcGroup(parse_presentation("p=2; gens s,r,u; s^2=1; r^2=u; u^2=1; [r,s]=u"));
}

static PcGroup cyclic(u32 p, u32 k, const std::string& nm = "c") {
  PcPresentation c;
  c.p = p;
  c.names = {nm};
  c.rel_order = {(u32)ipow(p, k)};
  c.power = {{}};
  c.comm = {{}};
  return PcGroup(c);
}

TEST_CASE("heisenberg against the matrix model") {
  PcGroup G = heisenberg27();
  REQUIRE(G.order() == 27);
  // digits (ex,ey,ez) |-> x^ex y^ey z^ez in the matrix model
  auto model = [&](u32 g) {
    Heis3 x{1, 0, 0}, y{0, 1, 0}, z{0, 0, 1}, r{0, 0, 0};
    for (u32 t = 0; t < G.digit(g, 0); t++) r = heis_mul(r, x);
    for (u32 t = 0; t < G.digit(g, 1); t++) r = heis_mul(r, y);
    for (u32 t = 0; t < G.digit(g, 2); t++) r = heis_mul(r, z);
    return r;
  };
  std::map<Heis3, u32> back;
  for (u32 g = 0; g < 27; g++) back[model(g)] = g;
  REQUIRE(back.size() == 27);  // bijection
  for (u32 a = 0; a < 27; a++)
    for (u32 b = 0; b < 27; b++)
      CHECK(G.mult(a, b) == back[heis_mul(model(a), model(b))]);

  CHECK(G.exponent() == 3);
  CHECK(G.center().size() == 3);
  CHECK(G.derived_subgroup().order() == 3);
  CHECK(G.class_count() == 11);
  CHECK(G.abelian_invariants() == std::vector<u32>{3, 3});

  // collection example: y*x has normal form x y z^2
  u32 yx = G.mult(G.gen(1), G.gen(0));
  CHECK(G.exponents(yx) == std::vector<u32>{1, 1, 2});
}

TEST_CASE("quaternion group against the unit model") {
  PcGroup G = quaternion8();
  REQUIRE(G.order() == 8);
  auto model = [&](u32 g) {
    Quat i{1, 1}, j{1, 2}, m{-1, 0}, r{1, 0};
    for (u32 t = 0; t < G.digit(g, 0); t++) r = quat_mul(r, i);
    for (u32 t = 0; t < G.digit(g, 1); t++) r = quat_mul(r, j);
    for (u32 t = 0; t < G.digit(g, 2); t++) r = quat_mul(r, m);
    return r;
  };
  for (u32 a = 0; a < 8; a++)
    for (u32 b = 0; b < 8; b++) {
      Quat want = quat_mul(model(a), model(b));
      CHECK(model(G.mult(a, b)) == want);
    }
  CHECK(G.exponent() == 4);
  CHECK(G.center().size() == 2);
  CHECK(G.derived_subgroup().order() == 2);
  CHECK(G.class_count() == 5);
  CHECK(G.abelian_invariants() == std::vector<u32>{2, 2});
  CHECK(G.element_order(G.gen(0)) == 4);
  CHECK(G.element_order(G.gen(2)) == 2);
}

TEST_CASE("dihedral group against the symmetry model") {
  PcGroup G = dihedral8();
  REQUIRE(G.order() == 8);
  auto model = [&](u32 g) {
    Dih r{0, 0};
    Dih s{1, 0}, rot{0, 1}, u{0, 2};
    for (u32 t = 0; t < G.digit(g, 0); t++) r = dih_mul(r, s);
    for (u32 t = 0; t < G.digit(g, 1); t++) r = dih_mul(r, rot);
    for (u32 t = 0; t < G.digit(g, 2); t++) r = dih_mul(r, u);
    return r;
  };
  for (u32 a = 0; a < 8; a++)
    for (u32 b = 0; b < 8; b++)
      CHECK(model(G.mult(a, b)) == dih_mul(model(a), model(b)));
  CHECK(G.exponent() == 4);
  CHECK(G.center().size() == 2);
  CHECK(G.class_count() == 5);
}

TEST_CASE("group identities hold on random elements") {
  PcGroup H = heisenberg27();
  PcGroup Q = quaternion8();
  PcGroup M = PcGroup(parse_presentation("p=3; gens x,y,z; x^3=1; y^3=z; z^3=1; [x,y]=z"));
  CHECK(M.order() == 27);
  CHECK(M.exponent() == 9);
  for (const PcGroup& G : {H, Q, M}) {
    Rng rng(99);
    for (int t = 0; t < 300; t++) {
      u32 a = (u32)rng.below(G.order());
      u32 b = (u32)rng.below(G.order());
      u32 c = (u32)rng.below(G.order());
      CHECK(G.mult(G.mult(a, b), c) == G.mult(a, G.mult(b, c)));
      CHECK(G.mult(a, G.inv(a)) == G.id());
      CHECK(G.conj(G.conj(a, b), c) == G.conj(a, G.mult(b, c)));
      CHECK(G.mult(G.mult(b, a), G.commutator(a, b)) == G.mult(a, b));
      CHECK(G.inv(G.mult(a, b)) == G.mult(G.inv(b), G.inv(a)));
    }
  }
}

TEST_CASE("dsl errors") {
  // relative order not a p-power
  CHECK_THROWS_WITH_AS(parse_presentation("p=3; gens x; x^6=1"),
                       doctest::Contains("power of p"), Error);
  // power relation aimed downward
  CHECK_THROWS_WITH_AS(parse_presentation("p=3; gens x,y; x^3=1; y^3=x"),
                       doctest::Contains("lower or equal"), Error);
  // commutator aimed at the left generator
  CHECK_THROWS_WITH_AS(
      parse_presentation("p=3; gens x,y; x^3=1; y^3=1; [y,x]=x"),
      doctest::Contains("lower or equal"), Error);
  // lower-first commutator with non-invertible right-hand side
  CHECK_THROWS_WITH_AS(
      parse_presentation(
          "p=3; gens x,y,z,w; x^3=1; y^3=1; z^3=w; w^3=1; [x,y]=z"),
      doctest::Contains("cannot invert"), Error);
  // unknown generator
  CHECK_THROWS_WITH_AS(parse_presentation("p=3; gens x; x^3=q"),
                       doctest::Contains("unknown generator"), Error);
  // syntax error carries a position
  CHECK_THROWS_WITH_AS(parse_presentation("p=3; gens x,, y"),
                       doctest::Contains("column"), Error);

  // an inconsistent presentation: z = [y,x] is central, so z^3 = [y^3,x] = 1
  // and z cannot have order 9; the power overlap (y, x) must fail
  PcPresentation bad = parse_presentation(
      "p=3; gens x,y,z; x^3=1; y^3=1; z^9=1; [y,x]=z");
  CHECK_THROWS_WITH_AS(PcGroup{bad}, doctest::Contains("inconsistent"), Error);

  // generator cubes trivial does not mean exponent 3: this class-3 group of
  // order 81 is consistent and has elements of order 9
  PcPresentation ok = parse_presentation(
      "p=3; gens x,y,z,w; x^3=1; y^3=1; z^3=1; w^3=1; [y,x]=z; [z,x]=w");
  PcGroup M3(ok);
  CHECK(M3.order() == 81);
  CHECK(M3.exponent() == 9);
  PcPresentation ok5 = parse_presentation(
      "p=5; gens x,y,z,w; x^5=1; y^5=1; z^5=1; w^5=1; [y,x]=z; [z,x]=w");
  CHECK(PcGroup(ok5).order() == 625);
  CHECK(PcGroup(ok5).exponent() == 5);
}

TEST_CASE("dsl examples from the manual") {
  PcGroup G = PcGroup(parse_presentation(
      "p=3; gens x,y,z; x^3=1; y^3=1; z^3=1; [y,x]=z"));
  CHECK(G.order() == 27);
  CHECK(G.exponent() == 3);
  PcGroup C2 = PcGroup(parse_presentation("p=2; gens a; a^2=1"));
  CHECK(C2.order() == 2);
  // omitted power relation defaults to g^p = 1
  PcGroup D = PcGroup(parse_presentation("p=3; gens x,y,z; [y,x]=z"));
  CHECK(D.order() == 27);
  CHECK(D.exponent() == 3);
  // middle dot separator and multi-letter words
  PcGroup E = PcGroup(parse_presentation(
      "p=2; gens a,b,c,d; a^2=c" "\xc2\xb7" "d; b^2=1; c^2=1; d^2=1; [b,a]=c*d"));
  CHECK(E.order() == 16);
}

TEST_CASE("dsl round trip") {
  PcGroup G = heisenberg27();
  PcGroup H = PcGroup(parse_presentation(G.to_dsl()));
  CHECK(H.order() == G.order());
  for (u32 a = 0; a < G.order(); a++)
    for (u32 b = 0; b < G.order(); b++) CHECK(G.mult(a, b) == H.mult(a, b));
}

TEST_CASE("subgroups of the heisenberg group") {
  PcGroup G = heisenberg27();
  Subgroup X = G.subgroup({G.gen(0)});
  CHECK(X.order() == 3);
  CHECK(!X.is_normal());
  Subgroup XZ = G.subgroup({G.gen(0), G.gen(2)});
  CHECK(XZ.order() == 9);
  CHECK(XZ.is_normal());
  CHECK(XZ.is_abelian());
  CHECK(!XZ.is_central());
  Subgroup NC = G.normal_closure({G.gen(0)});
  CHECK(NC.order() == 9);
  CHECK(NC.members == XZ.members);

  // decompose round trip
  for (u32 x : XZ.members) {
    auto coef = XZ.decompose(x);
    REQUIRE(coef.has_value());
    u32 back = G.id();
    for (size_t t = 0; t < XZ.basis.size(); t++)
      back = G.mult(back, G.power(XZ.basis[t], (*coef)[t]));
    CHECK(back == x);
  }
  CHECK(!XZ.decompose(G.gen(1)).has_value());

  InducedGroup ind = G.induced(XZ);
  CHECK(ind.H->order() == 9);
  CHECK(ind.H->abelian_invariants() == std::vector<u32>{3, 3});
  Rng rng(5);
  for (int t = 0; t < 100; t++) {
    u32 a = (u32)rng.below(9), b = (u32)rng.below(9);
    CHECK(ind.to_ambient[ind.H->mult(a, b)] ==
          G.mult(ind.to_ambient[a], ind.to_ambient[b]));
  }
}

TEST_CASE("quotients") {
  PcGroup G = heisenberg27();
  Subgroup Z = G.subgroup({G.gen(2)});
  Quotient q = G.quotient(Z);
  CHECK(q.Q->order() == 9);
  CHECK(q.Q->is_abelian());
  CHECK(q.Q->abelian_invariants() == std::vector<u32>{3, 3});
  Rng rng(7);
  for (int t = 0; t < 200; t++) {
    u32 a = (u32)rng.below(27), b = (u32)rng.below(27);
    CHECK(q.proj(G.mult(a, b)) == q.Q->mult(q.proj(a), q.proj(b)));
  }
  // lift is a section
  for (u32 x = 0; x < 9; x++) CHECK(q.proj(q.lift(x)) == x);

  // quotient by the full group and by the trivial subgroup
  CHECK(G.quotient(G.full_subgroup()).Q->order() == 1);
  CHECK(G.quotient(G.trivial_subgroup()).Q->order() == 27);
}

TEST_CASE("products") {
  PcGroup Q = quaternion8();
  PcGroup C4 = cyclic(2, 2);
  PcGroup D = direct_product(Q, C4);
  CHECK(D.order() == 32);
  CHECK(D.center().size() == 8);

  // central product Q8 . C4 over the common C2: the extraspecial-like group
  // of order 16 with center C4
  u32 m = Q.gen(2);                 // -1 in Q8
  u32 c2 = C4.power(C4.gen(0), 2);  // c^2
  PcGroup E = central_product(Q, C4, {{m, c2}});
  CHECK(E.order() == 16);
  CHECK(E.center().size() == 4);
  CHECK(E.derived_subgroup().order() == 2);
  CHECK(E.exponent() == 4);
  CHECK(E.class_count() == 10);
  CHECK(E.abelian_invariants() == std::vector<u32>{2, 2, 2});
}

TEST_CASE("hom spaces into cyclic groups") {
  PcGroup G = heisenberg27();
  auto hb = G.hom_to_cyclic(27);
  u64 cnt = 1;
  for (u32 o : hb.ord) cnt *= o;
  CHECK(cnt == 9);  // Hom(G, Z/27) = Hom(C3 x C3, Z/27)
  Rng rng(11);
  for (size_t k = 0; k < hb.vec.size(); k++) {
    for (int t = 0; t < 100; t++) {
      u32 a = (u32)rng.below(27), b = (u32)rng.below(27);
      u32 va = hb.eval(G, k, a), vb = hb.eval(G, k, b);
      CHECK((va + vb) % 27 == hb.eval(G, k, G.mult(a, b)));
    }
    // characters kill the derived subgroup
    CHECK(hb.eval(G, k, G.gen(2)) == 0);
  }

  PcGroup Q = quaternion8();
  auto qb = Q.hom_to_cyclic(8);
  u64 qc = 1;
  for (u32 o : qb.ord) qc *= o;
  CHECK(qc == 4);
}

TEST_CASE("group info") {
  GroupInfo gi = group_info(heisenberg27());
  CHECK(gi.order == 27);
  CHECK(gi.exponent == 3);
  CHECK(gi.center_order == 3);
  CHECK(gi.derived_order == 3);
  CHECK(gi.class_count == 11);
  CHECK(gi.abelianization == std::vector<u32>{3, 3});
}
