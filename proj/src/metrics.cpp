// SPDX-License-Identifier: Apache-2.0
#include "flairseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace flairseg {

namespace {

void check_pool(const ScoredVoxelSet& pool) {
  if (pool.positives == 0 || pool.negatives == 0)
    fail(errc::degenerate_labels,
         "need at least one positive and one negative, have P=" +
             std::to_string(pool.positives) + " N=" +
             std::to_string(pool.negatives));
}

struct Entry {
  double score;
  std::uint8_t label;
};

std::vector<Entry> sorted_descending(const ScoredVoxelSet& pool) {
  std::vector<Entry> v(pool.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = {pool.scores[i], pool.labels[i]};
  std::sort(v.begin(), v.end(),
            [](const Entry& a, const Entry& b) { return a.score > b.score; });
  return v;
}

}  // namespace

double dice(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.dims != gt.dims)
    fail(errc::dim_mismatch, "dice: mask dims differ");
  const std::size_t n = pred.bits.size();
  std::uint64_t inter = 0, a = 0, b = 0;
#pragma omp parallel for schedule(static) reduction(+ : inter, a, b)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const bool p = pred.bits[i] != 0, g = gt.bits[i] != 0;
    inter += p && g;
    a += p;
    b += g;
  }
  if (a + b == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(a + b);
}

ScoredVoxelSet pool_dataset(std::span<const AnomalyMap> maps,
                            std::span<const BinaryMask> gts, PoolScope scope) {
  if (maps.size() != gts.size())
    fail(errc::dim_mismatch, "pool_dataset: map/gt scan counts differ");

  ScoredVoxelSet pool;
  std::size_t total = 0;
  for (std::size_t s = 0; s < maps.size(); ++s) {
    if (maps[s].dims != gts[s].dims)
      fail(errc::dim_mismatch,
           "pool_dataset: scan " + std::to_string(s) + " dims differ");
    if (scope == PoolScope::all_voxels) {
      total += maps[s].scores.size();
    } else {
      total += maps[s].mask.count();
    }
  }
  pool.scores.reserve(total);
  pool.labels.reserve(total);

  for (std::size_t s = 0; s < maps.size(); ++s) {
    const AnomalyMap& m = maps[s];
    const BinaryMask& g = gts[s];
    for (std::size_t i = 0; i < m.scores.size(); ++i) {
      if (scope == PoolScope::brain_only && !m.mask.bits[i]) continue;
      pool.append(m.scores[i], g.bits[i] != 0);
    }
  }
  return pool;
}

SweepResult sweep_pool(const ScoredVoxelSet& pool) {
  check_pool(pool);
  const std::vector<Entry> v = sorted_descending(pool);
  const std::uint64_t P = pool.positives, N = pool.negatives;

  SweepResult r;
  std::uint64_t tp = 0, fp = 0;
  unsigned __int128 u2 = 0;  // twice the Mann-Whitney U statistic
  double prev_recall = 0.0;

  std::size_t i = 0;
  while (i < v.size()) {
    const double s = v[i].score;
    std::uint64_t pos_g = 0, neg_g = 0;
    for (; i < v.size() && v[i].score == s; ++i)
      (v[i].label ? pos_g : neg_g) += 1;
    tp += pos_g;
    fp += neg_g;

    const double precision =
        static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(P);
    const double fpr = static_cast<double>(fp) / static_cast<double>(N);
    r.curve.push_back({s, precision, recall, fpr, recall});

    r.auprc += (recall - prev_recall) * precision;
    prev_recall = recall;

    // positives in this tie group beat all strictly-lower negatives and half
    // of the tied ones
    u2 += static_cast<unsigned __int128>(pos_g) * (2 * (N - fp) + neg_g);

    const double d =
        2.0 * static_cast<double>(tp) / static_cast<double>(tp + fp + P);
    if (d > r.dice_ceiling) {
      r.dice_ceiling = d;
      r.dice_ceiling_threshold = s;
    }
  }

  r.auroc = static_cast<double>(
      static_cast<long double>(u2) /
      (2.0L * static_cast<long double>(P) * static_cast<long double>(N)));
  return r;
}

PrResult pr_curve(const ScoredVoxelSet& pool) {
  SweepResult s = sweep_pool(pool);
  return {std::move(s.curve), s.auprc};
}

RocResult roc_auc(const ScoredVoxelSet& pool) {
  SweepResult s = sweep_pool(pool);
  return {std::move(s.curve), s.auroc};
}

BestDice best_dice(std::span<const AnomalyMap> maps,
                   std::span<const BinaryMask> gts, int n_thresholds,
                   const std::optional<PostFilter>& filter) {
  if (n_thresholds < 1) fail(errc::bad_spec, "n_thresholds must be >= 1");
  if (maps.size() != gts.size())
    fail(errc::dim_mismatch, "best_dice: map/gt scan counts differ");

  std::uint64_t gt_total = 0;
  for (std::size_t s = 0; s < maps.size(); ++s) {
    if (maps[s].dims != gts[s].dims)
      fail(errc::dim_mismatch,
           "best_dice: scan " + std::to_string(s) + " dims differ");
    gt_total += gts[s].count();
  }
  if (gt_total == 0)
    fail(errc::no_positives, "pooled ground truth has no positive voxel");

  const int n = n_thresholds;
  std::vector<std::uint64_t> tp(n, 0), predsum(n, 0);

  if (!filter) {
    // Binarization at t only depends on how many pooled scores exceed t:
    // sort once, then read prefix counts per grid point.
    ScoredVoxelSet pool;
    for (std::size_t s = 0; s < maps.size(); ++s) {
      const AnomalyMap& m = maps[s];
      for (std::size_t i = 0; i < m.scores.size(); ++i)
        pool.append(m.scores[i], gts[s].bits[i] != 0);
    }
    std::vector<Entry> v = sorted_descending(pool);
    std::vector<std::uint64_t> pos_prefix(v.size() + 1, 0);
    for (std::size_t i = 0; i < v.size(); ++i)
      pos_prefix[i + 1] = pos_prefix[i] + (v[i].label ? 1 : 0);

    for (int i = 1; i <= n; ++i) {
      const double t = static_cast<double>(i) / (n + 1);
      const auto it = std::partition_point(
          v.begin(), v.end(), [t](const Entry& e) { return e.score > t; });
      const std::size_t k = static_cast<std::size_t>(it - v.begin());
      tp[i - 1] = pos_prefix[k];
      predsum[i - 1] = k;
    }
  } else {
    const std::ptrdiff_t tasks =
        static_cast<std::ptrdiff_t>(n) * static_cast<std::ptrdiff_t>(maps.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t task = 0; task < tasks; ++task) {
      const int ti = static_cast<int>(task % n);
      const std::size_t s = static_cast<std::size_t>(task / n);
      const double t = static_cast<double>(ti + 1) / (n + 1);

      const AnomalyMap& m = maps[s];
      BinaryMask pred(m.dims);
      for (std::size_t i = 0; i < m.scores.size(); ++i)
        pred.bits[i] = m.scores[i] > t ? 1 : 0;
      pred = filter_small(pred, filter->connectivity, filter->min_size);

      std::uint64_t local_tp = 0, local_pred = 0;
      for (std::size_t i = 0; i < pred.bits.size(); ++i) {
        local_pred += pred.bits[i];
        local_tp += pred.bits[i] & gts[s].bits[i];
      }
#pragma omp atomic
      tp[ti] += local_tp;
#pragma omp atomic
      predsum[ti] += local_pred;
    }
  }

  BestDice best;
  best.threshold = 1.0 / (n + 1);
  for (int i = 0; i < n; ++i) {
    const double d = 2.0 * static_cast<double>(tp[i]) /
                     static_cast<double>(predsum[i] + gt_total);
    if (d > best.dice) {
      best.dice = d;
      best.threshold = static_cast<double>(i + 1) / (n + 1);
    }
  }
  return best;
}

}  // namespace flairseg
