#include "twistclass/linalg.hpp"

#include <algorithm>
#include <cstdlib>

namespace twistclass {

// --- Smith over Z ------------------------------------------------------------

namespace {

using Mat = std::vector<std::vector<i64>>;

void swap_rows(Mat& M, std::size_t i, std::size_t j) {
    if (i != j) std::swap(M[i], M[j]);
}

void swap_cols(Mat& M, std::size_t i, std::size_t j) {
    if (i == j) return;
    for (auto& row : M) std::swap(row[i], row[j]);
}

// row[i] += q * row[t]
void add_row(Mat& M, std::size_t i, std::size_t t, i64 q) {
    for (std::size_t j = 0; j < M[i].size(); ++j) M[i][j] += q * M[t][j];
}

void add_col(Mat& M, std::size_t j, std::size_t t, i64 q) {
    for (auto& row : M) row[j] += q * row[t];
}

void scale_row(Mat& M, std::size_t i, i64 s) {
    for (auto& v : M[i]) v *= s;
}

}  // namespace

SmithZ smith_z(Mat A) {
    std::size_t r = A.size();
    std::size_t c = r ? A[0].size() : 0;
    Mat U(r, std::vector<i64>(r, 0)), V(c, std::vector<i64>(c, 0));
    for (std::size_t i = 0; i < r; ++i) U[i][i] = 1;
    for (std::size_t j = 0; j < c; ++j) V[j][j] = 1;

    std::size_t n = std::min(r, c);
    for (std::size_t t = 0; t < n; ++t) {
        // Bring the absolutely smallest nonzero entry of the trailing block to
        // (t,t) and clear its row and column; remainders force a re-pick, and
        // the pivot magnitude strictly decreases, so this terminates.
        for (;;) {
            std::size_t pi = t, pj = t;
            i64 best = 0;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < c; ++j)
                    if (A[i][j] != 0 && (best == 0 || std::llabs(A[i][j]) < best)) {
                        best = std::llabs(A[i][j]);
                        pi = i;
                        pj = j;
                    }
            if (best == 0) goto done;  // trailing block is zero
            swap_rows(A, t, pi);
            swap_rows(U, t, pi);
            swap_cols(A, t, pj);
            swap_cols(V, t, pj);

            bool again = false;
            for (std::size_t i = t + 1; i < r; ++i)
                if (A[i][t] != 0) {
                    i64 q = A[i][t] / A[t][t];
                    add_row(A, i, t, -q);
                    add_row(U, i, t, -q);
                    if (A[i][t] != 0) again = true;
                }
            if (again) continue;
            for (std::size_t j = t + 1; j < c; ++j)
                if (A[t][j] != 0) {
                    i64 q = A[t][j] / A[t][t];
                    add_col(A, j, t, -q);
                    add_col(V, j, t, -q);
                    if (A[t][j] != 0) again = true;
                }
            if (again) continue;
            // pivot must divide the rest of the block, else fold the
            // offending row in and restart
            bool divides = true;
            for (std::size_t i = t + 1; i < r && divides; ++i)
                for (std::size_t j = t + 1; j < c && divides; ++j)
                    if (A[i][j] % A[t][t] != 0) {
                        add_row(A, t, i, 1);
                        add_row(U, t, i, 1);
                        divides = false;
                    }
            if (divides) break;
        }
        if (A[t][t] < 0) {
            scale_row(A, t, -1);
            scale_row(U, t, -1);
        }
    }
done:;

    // enforce d[i] | d[i+1] (can only be violated across a re-pick boundary);
    // 2x2 unimodular transform diag(a,b) -> diag(gcd, lcm)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            i64 a = A[i][i], b = A[j][j];
            if (a == 0 && b != 0) {  // push zeros to the end
                swap_rows(A, i, j);
                swap_rows(U, i, j);
                swap_cols(A, i, j);
                swap_cols(V, i, j);
                std::swap(a, b);
            }
            if (a == 0 || b % a == 0 || b == 0) continue;
            i64 x, y;
            i64 g = gcd_ext(a, b, x, y);
            i64 l = a / g * b;
            // rows i,j of U-side:  [x y; -b/g a/g],  cols i,j of V-side:
            // [1 -y*b/g; 1 x*a/g]; both have determinant 1.
            for (std::size_t k = 0; k < c; ++k) {
                i64 ri = A[i][k], rj = A[j][k];
                A[i][k] = x * ri + y * rj;
                A[j][k] = -(b / g) * ri + (a / g) * rj;
            }
            for (std::size_t k = 0; k < r; ++k) {
                i64 ri = U[i][k], rj = U[j][k];
                U[i][k] = x * ri + y * rj;
                U[j][k] = -(b / g) * ri + (a / g) * rj;
            }
            for (std::size_t k = 0; k < r; ++k) {
                i64 ci = A[k][i], cj = A[k][j];
                A[k][i] = ci + cj;
                A[k][j] = -(y * b / g) * ci + (x * a / g) * cj;
            }
            for (std::size_t k = 0; k < c; ++k) {
                i64 ci = V[k][i], cj = V[k][j];
                V[k][i] = ci + cj;
                V[k][j] = -(y * b / g) * ci + (x * a / g) * cj;
            }
            require(A[i][i] == g && A[j][j] == l, "smith_z: gcd step failed");
            require(A[i][j] == 0 && A[j][i] == 0, "smith_z: gcd step off-diagonal");
        }

    SmithZ out;
    out.diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.diag[i] = A[i][i];
    out.U = std::move(U);
    out.V = std::move(V);
    return out;
}

// --- Z/m helpers --------------------------------------------------------------

ZMat ZMat::identity(std::size_t n, u32 m) {
    ZMat I(n, n, m);
    for (std::size_t i = 0; i < n; ++i) I.at(i, i) = 1 % m;
    return I;
}

ZMat mat_mul(const ZMat& A, const ZMat& B) {
    require(A.cols == B.rows && A.mod == B.mod, "mat_mul: shape/mod mismatch");
    ZMat C(A.rows, B.cols, A.mod);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t k = 0; k < A.cols; ++k) {
            u64 v = A.at(i, k);
            if (!v) continue;
            for (std::size_t j = 0; j < B.cols; ++j)
                C.at(i, j) = u32((C.at(i, j) + v * B.at(k, j)) % A.mod);
        }
    return C;
}

u32 unit_inverse(u32 a, u32 m) {
    i64 x, y;
    i64 g = gcd_ext(i64(a % m), i64(m), x, y);
    require(g == 1, "unit_inverse: not a unit");
    return umod(x, m);
}

// --- Smith over Z/p^k ----------------------------------------------------------

SmithMod smith_mod(ZMat A) {
    u64 p;
    u32 k;
    require(is_prime_power(A.mod, p, k) || A.mod == 1, "smith_mod: modulus must be a prime power");
    std::size_t r = A.rows, c = A.cols;
    SmithMod out;
    out.U = ZMat::identity(r, A.mod);
    out.V = ZMat::identity(c, A.mod);
    out.diag.assign(std::min(r, c), 0);
    if (A.mod == 1) return out;

    auto val = [&](u32 x) -> u32 { return x == 0 ? k : valuation(x, p); };

    std::size_t n = std::min(r, c);
    for (std::size_t t = 0; t < n; ++t) {
        // minimum-valuation pivot; over a local ring one clearing pass
        // suffices because the pivot divides the whole trailing block
        std::size_t pi = t, pj = t;
        u32 best = k;
        for (std::size_t i = t; i < r; ++i)
            for (std::size_t j = t; j < c; ++j) {
                u32 v = val(A.at(i, j));
                if (v < best) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (best == k) break;  // all zero
        if (pi != t)
            for (std::size_t j = 0; j < c; ++j) std::swap(A.at(t, j), A.at(pi, j));
        if (pi != t)
            for (std::size_t j = 0; j < r; ++j) std::swap(out.U.at(t, j), out.U.at(pi, j));
        if (pj != t)
            for (std::size_t i = 0; i < r; ++i) std::swap(A.at(i, t), A.at(i, pj));
        if (pj != t)
            for (std::size_t i = 0; i < c; ++i) std::swap(out.V.at(i, t), out.V.at(i, pj));

        u32 piv = A.at(t, t);
        u32 pv = u32(ipow(p, best));
        u32 inv = unit_inverse(piv / pv, A.mod);  // unit part
        for (std::size_t j = 0; j < c; ++j) A.at(t, j) = u32(u64(A.at(t, j)) * inv % A.mod);
        for (std::size_t j = 0; j < r; ++j)
            out.U.at(t, j) = u32(u64(out.U.at(t, j)) * inv % A.mod);
        // A(t,t) is now exactly p^best
        for (std::size_t i = t + 1; i < r; ++i) {
            u32 e = A.at(i, t);
            if (!e) continue;
            u32 q = e / pv;  // exact: e has valuation >= best
            for (std::size_t j = 0; j < c; ++j)
                A.at(i, j) = u32((A.at(i, j) + u64(A.mod - q % A.mod) * A.at(t, j)) % A.mod);
            for (std::size_t j = 0; j < r; ++j)
                out.U.at(i, j) =
                    u32((out.U.at(i, j) + u64(A.mod - q % A.mod) * out.U.at(t, j)) % A.mod);
        }
        for (std::size_t j = t + 1; j < c; ++j) {
            u32 e = A.at(t, j);
            if (!e) continue;
            u32 q = e / pv;
            for (std::size_t i = 0; i < r; ++i)
                A.at(i, j) = u32((A.at(i, j) + u64(A.mod - q % A.mod) * A.at(i, t)) % A.mod);
            for (std::size_t i = 0; i < c; ++i)
                out.V.at(i, j) =
                    u32((out.V.at(i, j) + u64(A.mod - q % A.mod) * out.V.at(i, t)) % A.mod);
        }
        out.diag[t] = pv;
    }

    // ascending valuation (pivot choice already guarantees it, but keep the
    // invariant explicit for downstream consumers)
    for (std::size_t i = 0; i + 1 < out.diag.size(); ++i)
        if (out.diag[i + 1] != 0 && (out.diag[i] == 0 || out.diag[i + 1] % out.diag[i] != 0))
            fail("smith_mod: divisibility chain violated");
    return out;
}

ModKernel mod_kernel(const ZMat& A) {
    SmithMod s = smith_mod(A);
    ModKernel out;
    std::size_t c = A.cols;
    for (std::size_t j = 0; j < c; ++j) {
        u32 d = j < s.diag.size() ? s.diag[j] : 0;
        u64 g = gcd_u64(d, A.mod);  // y_j ranges over multiples of mod/g
        if (g <= 1) continue;
        std::vector<u32> gen(c, 0);
        u32 scale = u32(A.mod / g);
        for (std::size_t i = 0; i < c; ++i)
            gen[i] = u32(u64(s.V.at(i, j)) * scale % A.mod);
        out.gens.push_back(std::move(gen));
        out.orders.push_back(u32(g));
    }
    return out;
}

std::optional<std::vector<u32>> mod_solve(const ZMat& A, const std::vector<u32>& b) {
    require(b.size() == A.rows, "mod_solve: rhs size");
    SmithMod s = smith_mod(A);
    u32 m = A.mod;
    std::vector<u32> ub(A.rows, 0);
    for (std::size_t i = 0; i < A.rows; ++i) {
        u64 acc = 0;
        for (std::size_t j = 0; j < A.rows; ++j) acc += u64(s.U.at(i, j)) * b[j] % m;
        ub[i] = u32(acc % m);
    }
    std::vector<u32> y(A.cols, 0);
    for (std::size_t i = 0; i < A.rows; ++i) {
        u32 d = i < s.diag.size() ? s.diag[i] : 0;
        u32 rhs = ub[i];
        if (d == 0) {
            if (rhs != 0) return std::nullopt;
            continue;
        }
        // d = p^v divides m, so d*y = rhs is solvable iff d | rhs
        if (rhs % d != 0) return std::nullopt;
        if (i < A.cols) y[i] = rhs / d % m;
    }
    std::vector<u32> x(A.cols, 0);
    for (std::size_t i = 0; i < A.cols; ++i) {
        u64 acc = 0;
        for (std::size_t j = 0; j < A.cols; ++j) acc += u64(s.V.at(i, j)) * y[j] % m;
        x[i] = u32(acc % m);
    }
    return x;
}

}  // namespace twistclass
