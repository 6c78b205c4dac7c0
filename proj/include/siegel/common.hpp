#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>
#include <thread>
#include <functional>

#include <boost/multiprecision/cpp_int.hpp>

namespace siegel {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Moduli are capped so that 4x4 products fit comfortably in 64-bit intermediates
// and matrices pack into 16-byte hash keys.
inline constexpr u32 kMaxModulus = 255;

struct LevelMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct CeilingExceededError : std::runtime_error {
    std::size_t partial_depth;
    CeilingExceededError(const std::string& what, std::size_t depth)
        : std::runtime_error(what), partial_depth(depth) {}
};

inline void check_level(u32 n) {
    if (n < 1 || n > kMaxModulus)
        throw std::invalid_argument("level must be in [1," + std::to_string(kMaxModulus) +
                                    "], got " + std::to_string(n));
}

// ---- deterministic RNG (fixed algorithm, not implementation-defined) ----

struct SplitMix64 {
    u64 state;
    explicit SplitMix64(u64 seed) : state(seed) {}
    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // unbiased uniform draw in [0, bound)
    u64 below(u64 bound) {
        if (bound == 0) throw std::invalid_argument("below(0)");
        u64 threshold = (~bound + 1) % bound;  // 2^64 mod bound
        for (;;) {
            u64 r = next();
            if (r >= threshold) return r % bound;
        }
    }
};

// stream-split: mix a seed with an index so per-item streams are independent of
// iteration order (and hence of thread count)
inline u64 mix_seed(u64 seed, u64 stream) {
    SplitMix64 s(seed ^ (0x632be59bd9b4e019ULL * (stream + 1)));
    return s.next();
}

// ---- elementary number theory on small moduli ----

inline u64 gcd_u64(u64 a, u64 b) {
    while (b) { u64 t = a % b; a = b; b = t; }
    return a;
}

// extended gcd: g = gcd(a,b), a*x + b*y = g
inline i64 egcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) { x = 1; y = 0; return a; }
    i64 x1, y1;
    i64 g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

inline u32 mod_inverse(u32 a, u32 n) {
    i64 x, y;
    i64 g = egcd(i64(a % n), i64(n), x, y);
    if (g != 1) throw std::domain_error("not a unit mod " + std::to_string(n) + ": " + std::to_string(a));
    i64 r = x % i64(n);
    if (r < 0) r += n;
    return u32(r);
}

inline bool is_unit(u32 a, u32 n) { return gcd_u64(a % n, n) == 1; }

struct PrimePower { u32 p; u32 t; u32 q; };  // q = p^t

std::vector<PrimePower> factorize(u32 n);
bool is_prime_power(u32 n, u32* p_out = nullptr, u32* t_out = nullptr);

// x ≡ r[i] mod q[i] with pairwise coprime q[i]; returns x mod prod(q)
u32 crt_combine(const std::vector<u32>& r, const std::vector<u32>& q);

// ---- deterministic parallel for ----
//
// Splits [0, count) into fixed chunks and runs body(i) on each index.  Results
// must be written into per-index slots so output does not depend on the number
// of threads.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace siegel
