// SPDX-License-Identifier: Apache-2.0
#include "flairseg/equalize.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "flairseg/volume_ops.hpp"

namespace flairseg {

namespace {

void check_inputs(const Volume& v, const BinaryMask& mask,
                  const EqualizeConfig& cfg) {
  if (v.dims != mask.dims)
    fail(errc::dim_mismatch, "volume and mask dims differ");
  if (cfg.bins < 2) fail(errc::bad_spec, "bins must be >= 2");
}

// Equalizes data[i] for masked i in [begin, end); writes scores, zeroes the
// rest. Serial; callers decide how to parallelize across ranges.
void equalize_range(const double* data, const std::uint8_t* mask,
                    std::size_t begin, std::size_t end, int bins,
                    double* scores) {
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  std::uint64_t in_mask = 0;
  for (std::size_t i = begin; i < end; ++i) {
    if (!mask[i]) continue;
    ++in_mask;
    vmin = std::min(vmin, data[i]);
    vmax = std::max(vmax, data[i]);
  }
  if (in_mask == 0) fail(errc::empty_mask, "mask has no true voxel");

  if (!(vmax > vmin)) {  // single occupied bin, CDF jumps straight to 1
    for (std::size_t i = begin; i < end; ++i)
      scores[i] = mask[i] ? 1.0 : 0.0;
    return;
  }

  const double range = vmax - vmin;
  std::vector<std::uint64_t> hist(bins, 0);
  for (std::size_t i = begin; i < end; ++i) {
    if (!mask[i]) continue;
    const int b = std::min(
        bins - 1, static_cast<int>((data[i] - vmin) / range * bins));
    ++hist[b];
  }

  std::vector<double> cdf(bins);
  std::uint64_t cum = 0;
  for (int b = 0; b < bins; ++b) {
    cum += hist[b];
    cdf[b] = static_cast<double>(cum) / static_cast<double>(in_mask);
  }

  for (std::size_t i = begin; i < end; ++i) {
    if (!mask[i]) {
      scores[i] = 0.0;
      continue;
    }
    // Position in bin-center units; center of bin j sits at u == j.
    const double u = (data[i] - vmin) / range * bins - 0.5;
    if (u <= 0.0) {
      scores[i] = cdf[0];
    } else if (u >= bins - 1) {
      scores[i] = 1.0;
    } else {
      const int j = static_cast<int>(u);
      const double f = u - j;
      scores[i] = cdf[j] + f * (cdf[j + 1] - cdf[j]);
    }
  }
}

}  // namespace

AnomalyMap equalize_hist(const Volume& v, const BinaryMask& mask,
                         const EqualizeConfig& cfg) {
  check_inputs(v, mask, cfg);

  const std::size_t n = v.data.size();
  const double* data = v.data.data();
  const std::uint8_t* mbits = mask.bits.data();

  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  std::uint64_t in_mask = 0;
#pragma omp parallel for schedule(static) \
    reduction(min : vmin) reduction(max : vmax) reduction(+ : in_mask)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    if (!mbits[i]) continue;
    ++in_mask;
    vmin = std::min(vmin, data[i]);
    vmax = std::max(vmax, data[i]);
  }
  if (in_mask == 0) fail(errc::empty_mask, "mask has no true voxel");

  AnomalyMap out;
  out.dims = v.dims;
  out.mask = mask;
  out.scores.resize(n);
  double* scores = out.scores.data();

  if (!(vmax > vmin)) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
      scores[i] = mbits[i] ? 1.0 : 0.0;
    return out;
  }

  const int bins = cfg.bins;
  const double range = vmax - vmin;

  // Per-thread histograms merged in thread order: bin counts are integers,
  // so the result is independent of scheduling.
  std::vector<std::uint64_t> hist(bins, 0);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(bins, 0);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      if (!mbits[i]) continue;
      const int b = std::min(
          bins - 1, static_cast<int>((data[i] - vmin) / range * bins));
      ++local[b];
    }
#pragma omp critical
    for (int b = 0; b < bins; ++b) hist[b] += local[b];
  }

  std::vector<double> cdf(bins);
  std::uint64_t cum = 0;
  for (int b = 0; b < bins; ++b) {
    cum += hist[b];
    cdf[b] = static_cast<double>(cum) / static_cast<double>(in_mask);
  }

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    if (!mbits[i]) {
      scores[i] = 0.0;
      continue;
    }
    const double u = (data[i] - vmin) / range * bins - 0.5;
    if (u <= 0.0) {
      scores[i] = cdf[0];
    } else if (u >= bins - 1) {
      scores[i] = 1.0;
    } else {
      const int j = static_cast<int>(u);
      const double f = u - j;
      scores[i] = cdf[j] + f * (cdf[j + 1] - cdf[j]);
    }
  }
  return out;
}

AnomalyMap equalize_volume(const Volume& v, const EqualizeConfig& cfg) {
  return equalize_hist(v, brain_mask(v), cfg);
}

AnomalyMap equalize_hist_slicewise(const Volume& v, const BinaryMask& mask,
                                   const EqualizeConfig& cfg) {
  check_inputs(v, mask, cfg);
  if (mask.count() == 0) fail(errc::empty_mask, "mask has no true voxel");

  AnomalyMap out;
  out.dims = v.dims;
  out.mask = mask;
  out.scores.assign(v.data.size(), 0.0);

  const std::size_t slice =
      static_cast<std::size_t>(v.dims.nx) * static_cast<std::size_t>(v.dims.ny);
#pragma omp parallel for schedule(dynamic)
  for (int z = 0; z < v.dims.nz; ++z) {
    const std::size_t begin = slice * z;
    const std::size_t end = begin + slice;
    bool any = false;
    for (std::size_t i = begin; i < end && !any; ++i) any = mask.bits[i] != 0;
    if (!any) continue;  // empty slice stays all-zero
    equalize_range(v.data.data(), mask.bits.data(), begin, end, cfg.bins,
                   out.scores.data());
  }
  return out;
}

}  // namespace flairseg
