// Integer and Z/p^k linear algebra: Smith normal form with transforms,
// kernels and solvers over prime-power moduli. Matrices here are small
// (character/relation systems); the large cocycle eliminations in
// cohomology.cpp use their own cache-tuned routines.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "twistclass/common.hpp"

namespace twistclass {

// --- Smith normal form over Z -----------------------------------------------

struct SmithZ {
    // U * A * V = diag(d), with d[0] | d[1] | ..., all d >= 0,
    // U (rows x rows) and V (cols x cols) unimodular.
    std::vector<i64> diag;
    std::vector<std::vector<i64>> U;
    std::vector<std::vector<i64>> V;
};

SmithZ smith_z(std::vector<std::vector<i64>> A);

// --- dense matrices over Z/mod ----------------------------------------------

struct ZMat {
    u32 mod = 1;
    std::size_t rows = 0, cols = 0;
    std::vector<u32> a;  // row-major, values in [0, mod)

    ZMat() = default;
    ZMat(std::size_t r, std::size_t c, u32 m) : mod(m), rows(r), cols(c), a(r * c, 0) {}

    u32& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    u32 at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static ZMat identity(std::size_t n, u32 m);
};

ZMat mat_mul(const ZMat& A, const ZMat& B);

// inverse of a unit mod m (m need not be prime); fails if not a unit
u32 unit_inverse(u32 a, u32 m);

// --- Smith form and kernels over Z/p^k ---------------------------------------

struct SmithMod {
    // U * A * V = diag(d) over Z/mod; each d is 0 or a p-power, ascending
    // by valuation. U, V invertible mod p^k.
    std::vector<u32> diag;
    ZMat U, V;
};

// requires mod to be a prime power
SmithMod smith_mod(ZMat A);

struct ModKernel {
    // generating set of {x : A x = 0 (mod m)}; gens[i] has additive order
    // orders[i] (a p-power > 1). The kernel subgroup is the span.
    std::vector<std::vector<u32>> gens;
    std::vector<u32> orders;
};

ModKernel mod_kernel(const ZMat& A);

// one solution of A x = b (mod m), if any
std::optional<std::vector<u32>> mod_solve(const ZMat& A, const std::vector<u32>& b);

}  // namespace twistclass
