#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ffdist::ntt {

// Arithmetic mod the Goldilocks prime P = 2^64 - 2^32 + 1. P - 1 is divisible
// by 2^32 and 7 generates the multiplicative group, so every power-of-two
// length up to 2^32 has a transform, and any count below P comes back exactly.
inline constexpr std::uint64_t kModulus = 0xFFFFFFFF00000001ULL;
inline constexpr std::uint64_t kEpsilon = 0xFFFFFFFFULL;  // 2^64 mod P
inline constexpr std::uint64_t kGenerator = 7;

constexpr std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  // Overflow past 2^64 wraps by 2^64 = P + kEpsilon.
  if (s < a) s += kEpsilon;
  return s >= kModulus ? s - kModulus : s;
}

constexpr std::uint64_t sub(std::uint64_t a, std::uint64_t b) {
  return a >= b ? a - b : a + (kModulus - b);
}

constexpr std::uint64_t reduce128(unsigned __int128 x) {
  const auto lo = static_cast<std::uint64_t>(x);
  const auto hi = static_cast<std::uint64_t>(x >> 64U);
  const std::uint64_t hi_hi = hi >> 32U;
  const std::uint64_t hi_lo = hi & kEpsilon;
  // x = lo + hi_lo * 2^64 + hi_hi * 2^96, with 2^64 = eps and 2^96 = -1.
  std::uint64_t t0 = lo - hi_hi;
  if (lo < hi_hi) t0 -= kEpsilon;
  const std::uint64_t t1 = hi_lo * kEpsilon;
  std::uint64_t t2 = t0 + t1;
  if (t2 < t0) t2 += kEpsilon;
  return t2 >= kModulus ? t2 - kModulus : t2;
}

constexpr std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  return reduce128(static_cast<unsigned __int128>(a) * b);
}

constexpr std::uint64_t pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  while (exp > 0) {
    if (exp & 1U) r = mul(r, base);
    base = mul(base, base);
    exp >>= 1U;
  }
  return r;
}

/// In-place radix-2 transform of a power-of-two length sequence.
/// inverse = true applies the inverse transform including the 1/n scaling.
inline void transform(std::span<std::uint64_t> a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1U;
    for (; j & bit; bit >>= 1U) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1U) {
    std::uint64_t w_len = pow(kGenerator, (kModulus - 1) / len);
    if (inverse) w_len = pow(w_len, kModulus - 2);
    const std::size_t half = len >> 1U;
    std::vector<std::uint64_t> tw(half);
    tw[0] = 1;
    for (std::size_t k = 1; k < half; ++k) tw[k] = mul(tw[k - 1], w_len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::uint64_t u = a[i + k];
        const std::uint64_t v = mul(a[i + k + half], tw[k]);
        a[i + k] = add(u, v);
        a[i + k + half] = sub(u, v);
      }
    }
  }
  if (inverse) {
    const std::uint64_t n_inv = pow(n % kModulus, kModulus - 2);
    for (auto& x : a) x = mul(x, n_inv);
  }
}

/// Row-column transform of an n x n row-major grid, n a power of two.
inline void transform_2d(std::vector<std::uint64_t>& grid, std::size_t n, bool inverse) {
  for (std::size_t r = 0; r < n; ++r) {
    transform(std::span<std::uint64_t>(grid).subspan(r * n, n), inverse);
  }
  std::vector<std::uint64_t> col(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) col[r] = grid[r * n + c];
    transform(col, inverse);
    for (std::size_t r = 0; r < n; ++r) grid[r * n + c] = col[r];
  }
}

/// Cyclic autocorrelation c(d) = sum_x a(x) a(x + d) over (Z_n)^2, computed as
/// the inverse transform of A(k) * A(-k).
inline std::vector<std::uint64_t> autocorrelate_2d(std::vector<std::uint64_t> grid,
                                                   std::size_t n) {
  transform_2d(grid, n, false);
  std::vector<std::uint64_t> prod(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t nr = (n - r) & (n - 1);
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t nc = (n - c) & (n - 1);
      prod[r * n + c] = mul(grid[r * n + c], grid[nr * n + nc]);
    }
  }
  transform_2d(prod, n, true);
  return prod;
}

}  // namespace ffdist::ntt
