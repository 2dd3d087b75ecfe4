#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twistclass/linalg.hpp"

using namespace twistclass;

static std::vector<std::vector<i64>> mat_of(const SmithZ& s, bool left) {
  return left ? s.U : s.V;
}

static void check_smith_z(const std::vector<std::vector<i64>>& A) {
  SmithZ s = smith_z(A);
  size_t r = A.size(), c = A[0].size();
  // U*A*V == diag
  for (size_t i = 0; i < r; i++)
    for (size_t j = 0; j < c; j++) {
      i64 v = 0;
      for (size_t k = 0; k < r; k++)
        for (size_t l = 0; l < c; l++) v += s.U[i][k] * A[k][l] * s.V[l][j];
      i64 want = (i == j && i < s.diag.size()) ? s.diag[i] : 0;
      CHECK(v == want);
    }
  for (size_t i = 0; i + 1 < s.diag.size(); i++) {
    CHECK(s.diag[i] >= 0);
    if (s.diag[i] != 0) CHECK(s.diag[i + 1] % s.diag[i] == 0);
  }
  (void)mat_of(s, true);
}

TEST_CASE("smith normal form over Z") {
  check_smith_z({{2, 4}, {6, 8}});
  SmithZ s = smith_z({{2, 4}, {6, 8}});
  CHECK(s.diag == std::vector<i64>{2, 4});

  check_smith_z({{1, 0}, {0, 1}});
  check_smith_z({{0, 0}, {0, 0}});
  check_smith_z({{6, 10, 15}});
  s = smith_z({{6, 10, 15}});
  CHECK(s.diag[0] == 1);

  Rng rng(12345);
  for (int trial = 0; trial < 200; trial++) {
    size_t r = 1 + rng.below(4), c = 1 + rng.below(4);
    std::vector<std::vector<i64>> A(r, std::vector<i64>(c));
    for (auto& row : A)
      for (auto& x : row) x = (i64)rng.below(19) - 9;
    check_smith_z(A);
  }
}

static u64 brute_kernel_count(const ZMat& A) {
  // enumerate all vectors; only for tiny mod^cols
  u64 total = 1;
  for (size_t j = 0; j < A.cols; j++) total *= A.mod;
  u64 cnt = 0;
  std::vector<u32> x(A.cols);
  for (u64 code = 0; code < total; code++) {
    u64 t = code;
    for (size_t j = 0; j < A.cols; j++) {
      x[j] = (u32)(t % A.mod);
      t /= A.mod;
    }
    bool ok = true;
    for (size_t i = 0; i < A.rows && ok; i++) {
      u64 s = 0;
      for (size_t j = 0; j < A.cols; j++) s += (u64)A.at(i, j) * x[j];
      ok = (s % A.mod == 0);
    }
    if (ok) cnt++;
  }
  return cnt;
}

TEST_CASE("kernels over prime power moduli") {
  Rng rng(777);
  for (u32 mod : {2u, 4u, 8u, 3u, 9u, 27u}) {
    for (int trial = 0; trial < 60; trial++) {
      size_t r = 1 + rng.below(3), c = 1 + rng.below(3);
      if (ipow(mod, (u32)c) > 1000000) continue;
      ZMat A(r, c, mod);
      for (size_t i = 0; i < r; i++)
        for (size_t j = 0; j < c; j++) A.at(i, j) = (u32)rng.below(mod);
      ModKernel K = mod_kernel(A);
      // every generator is in the kernel
      for (size_t g = 0; g < K.gens.size(); g++) {
        for (size_t i = 0; i < r; i++) {
          u64 s = 0;
          for (size_t j = 0; j < c; j++) s += (u64)A.at(i, j) * K.gens[g][j];
          CHECK(s % mod == 0);
        }
        CHECK(K.orders[g] > 1);
      }
      // the span size matches a brute count
      u64 span = 1;
      for (u32 o : K.orders) span *= o;
      CHECK(span == brute_kernel_count(A));
    }
  }
}

TEST_CASE("smith form mod p^k and solving") {
  Rng rng(4242);
  for (u32 mod : {4u, 8u, 9u, 27u, 16u}) {
    for (int trial = 0; trial < 80; trial++) {
      size_t r = 1 + rng.below(4), c = 1 + rng.below(4);
      ZMat A(r, c, mod);
      for (size_t i = 0; i < r; i++)
        for (size_t j = 0; j < c; j++) A.at(i, j) = (u32)rng.below(mod);
      SmithMod s = smith_mod(A);
      ZMat UA = mat_mul(s.U, A);
      ZMat UAV = mat_mul(UA, s.V);
      for (size_t i = 0; i < r; i++)
        for (size_t j = 0; j < c; j++) {
          u32 want = (i == j && i < s.diag.size()) ? s.diag[i] : 0;
          CHECK(UAV.at(i, j) == want);
        }

      // solvable system: pick x0, set b = A x0
      std::vector<u32> x0(c);
      for (auto& v : x0) v = (u32)rng.below(mod);
      std::vector<u32> b(r, 0);
      for (size_t i = 0; i < r; i++) {
        u64 acc = 0;
        for (size_t j = 0; j < c; j++) acc += (u64)A.at(i, j) * x0[j];
        b[i] = (u32)(acc % mod);
      }
      auto x = mod_solve(A, b);
      REQUIRE(x.has_value());
      for (size_t i = 0; i < r; i++) {
        u64 acc = 0;
        for (size_t j = 0; j < c; j++) acc += (u64)A.at(i, j) * (*x)[j];
        CHECK(acc % mod == b[i]);
      }
    }
  }

  // unsolvable: 2x = 1 mod 4
  ZMat A(1, 1, 4);
  A.at(0, 0) = 2;
  CHECK(!mod_solve(A, {1}).has_value());
  CHECK(mod_solve(A, {2}).has_value());
}

TEST_CASE("unit inverse") {
  CHECK(unit_inverse(3, 8) == 3);
  CHECK(unit_inverse(5, 9) == 2);
  CHECK_THROWS_AS(unit_inverse(3, 9), Error);
}
