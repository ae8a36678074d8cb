#pragma once

// Chebyshev-Markov average: the midpoint of the CM band.

#include "hmt/cm_bounds.hpp"
#include "hmt/transforms/output.hpp"

namespace hmt {

/// (inf + sup) / 2 at every band grid point.
inline SampledCdf cm_average(const CMBand& band) {
  SampledCdf out{band.grid, {}};
  out.values.reserve(band.grid.size());
  for (std::size_t i = 0; i < band.grid.size(); ++i) out.values.push_back(0.5 * (band.inf[i] + band.sup[i]));
  return out;
}

/// CM average of order n = m.order(), sampled on U_n. A band that hit the
/// refinement cap is still used; its achieved tolerance is reported.
inline MethodOutput cm_approx(const MomentSequence& m, const CmBandOptions& opt = {}) {
  detail::Stopwatch watch;
  CMBand band;
  CmBandOptions o = opt;
  o.support_grid_size = std::max(o.support_grid_size, 10 * (m.order() + 1));
  try {
    band = cm_band(m, uniform_grid(m.order()), o);
  } catch (const NoConvergence& e) {
    band = e.band();
  }
  MethodOutput out;
  out.transform_ms = watch.ms();
  out.method = Method::CM;
  out.n = m.order();
  out.samples = cm_average(band);
  out.diagnostics["achieved_tol"] = band.achieved_tol;
  out.diagnostics["support_size"] = band.support_size;
  out.diagnostics["converged"] = band.converged;
  return out;
}

}  // namespace hmt
