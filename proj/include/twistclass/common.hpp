// Shared basics: error type, deterministic RNG streams, small integer helpers.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistclass {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool ok, const std::string& msg) {
    if (!ok) fail(msg);
}

// splitmix64: tiny, seedable, good enough for sampling orders and fuzz cases.
// Every randomized routine takes an explicit stream so runs are reproducible
// regardless of call interleaving or thread count.
struct Rng {
    u64 state;
    explicit Rng(u64 seed) : state(seed ^ 0x9e3779b97f4a7c15ULL) {}
    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    u64 below(u64 n) {
        if (n == 0) fail("Rng::below(0)");
        // rejection to kill modulo bias; n is tiny in practice
        u64 lim = ~u64(0) - ~u64(0) % n;
        u64 v;
        do v = next(); while (v >= lim);
        return v % n;
    }
    // derive an independent stream keyed by a label, so unrelated tasks never
    // share state even when run in different orders
    Rng fork(u64 label) const {
        u64 s = state;
        s ^= label * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
        return Rng(s);
    }
};

// FNV-1a over a string; used to key per-task RNG streams off a global seed.
inline u64 hash_label(const std::string& s) {
    u64 h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// extended gcd: returns g and x,y with a*x + b*y = g
inline i64 gcd_ext(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) {
        x = (a >= 0) ? 1 : -1;
        y = 0;
        return a >= 0 ? a : -a;
    }
    i64 x1, y1;
    i64 g = gcd_ext(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// p-adic valuation of n (n > 0): largest v with p^v | n
inline u32 valuation(u64 n, u64 p) {
    u32 v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

inline u64 ipow(u64 b, u32 e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

inline bool is_prime_power(u64 n, u64& p_out, u32& k_out) {
    if (n < 2) return false;
    u64 p = 0;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            p = d;
            break;
        }
    if (p == 0) p = n;
    u32 k = 0;
    while (n % p == 0) {
        n /= p;
        ++k;
    }
    if (n != 1) return false;
    p_out = p;
    k_out = k;
    return true;
}

// mod in [0, m) for possibly-negative a
inline u32 umod(i64 a, u32 m) {
    i64 r = a % i64(m);
    if (r < 0) r += m;
    return u32(r);
}

}  // namespace twistclass
