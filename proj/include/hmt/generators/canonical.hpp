#pragma once

// Random moment sequences drawn uniformly from the moment space through
// their canonical moments: p_k ~ Beta(N-k+1, N-k+1) independently, then
// m_k = m_k^- + p_k (m_k^+ - m_k^-).

#include <vector>

#include "hmt/generators/rng.hpp"
#include "hmt/moment_core.hpp"

namespace hmt {

/// Builds m_0..m_N from canonical moments supplied by `next_p(k, N)`.
template <class T, class PSource>
BasicMomentSequence<T> moments_from_canonical(int n, PSource&& next_p) {
  if (n < 1) throw DomainError("generate_canonical: N must be at least 1");
  std::vector<T> m{T(1)};
  m.reserve(n + 1);
  for (int k = 1; k <= n; ++k) {
    const auto b = detail::moment_bounds_unchecked(m);
    const T p = T(next_p(k, n));
    m.push_back(b.lower + p * (b.upper - b.lower));
  }
  return BasicMomentSequence<T>(std::move(m));
}

/// The canonical moments of a uniformly random point of the moment space.
inline std::vector<double> draw_canonical_p(int n, Rng& rng) {
  std::vector<double> p(n);
  for (int k = 1; k <= n; ++k) {
    const double shape = n - k + 1;
    p[k - 1] = beta_sampler(shape, shape, rng);
  }
  return p;
}

template <class T = XReal>
BasicMomentSequence<T> generate_canonical(int n, Rng& rng) {
  const auto p = draw_canonical_p(n, rng);
  return moments_from_canonical<T>(n, [&](int k, int) { return p[k - 1]; });
}

/// Moments of length `n` that share a fixed prefix; canonical moments beyond
/// the prefix are drawn as in generate_canonical.
template <class T = XReal>
BasicMomentSequence<T> extend_canonical(const BasicMomentSequence<T>& prefix, int n, Rng& rng) {
  const int start = prefix.order();
  std::vector<T> m = prefix.values();
  for (int k = start + 1; k <= n; ++k) {
    const auto b = detail::moment_bounds_unchecked(m);
    const double shape = n - k + 1;
    const T p = T(beta_sampler(shape, shape, rng));
    m.push_back(b.lower + p * (b.upper - b.lower));
  }
  return BasicMomentSequence<T>(std::move(m));
}

}  // namespace hmt
