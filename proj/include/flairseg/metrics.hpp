// SPDX-License-Identifier: Apache-2.0
//
// Dataset-wise voxel evaluation: Dice, best-Dice threshold search over an
// interior grid, precision-recall and ROC curves with their areas. All
// metrics pool (score, label) pairs across the scans of a dataset.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "flairseg/components.hpp"
#include "flairseg/equalize.hpp"
#include "flairseg/volume.hpp"

namespace flairseg {

// Pooled (score, label) pairs across a dataset. Merge is associative and
// commutative in the counts; metrics are invariant to entry order.
struct ScoredVoxelSet {
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;

  std::size_t size() const { return scores.size(); }

  void append(double score, bool label) {
    scores.push_back(score);
    labels.push_back(label ? 1 : 0);
    (label ? positives : negatives) += 1;
  }

  void merge(const ScoredVoxelSet& other) {
    scores.insert(scores.end(), other.scores.begin(), other.scores.end());
    labels.insert(labels.end(), other.labels.begin(), other.labels.end());
    positives += other.positives;
    negatives += other.negatives;
  }
};

struct CurvePoint {
  double threshold;
  double precision;
  double recall;
  double fpr;
  double tpr;  // == recall
};

enum class PoolScope { all_voxels, brain_only };

struct PostFilter {
  Connectivity connectivity = Connectivity::c26;
  std::uint64_t min_size = 20;
};

// 2|pred ∩ gt| / (|pred| + |gt|); 1.0 when both masks are empty, 0.0 when
// exactly one is.
double dice(const BinaryMask& pred, const BinaryMask& gt);

// Concatenates (score, label) pairs over the selected voxel scope across all
// scans. brain_only restricts to each map's brain mask.
ScoredVoxelSet pool_dataset(std::span<const AnomalyMap> maps,
                            std::span<const BinaryMask> gts, PoolScope scope);

struct BestDice {
  double dice = 0.0;
  double threshold = 0.0;  // lowest threshold achieving the maximum
};

// Searches thresholds t_i = i/(n+1), i = 1..n (uniform interior grid on
// [0,1]). Every scan is binarized at score > t, optionally component-filtered
// per scan, and the binarized predictions are pooled dataset-wise.
BestDice best_dice(std::span<const AnomalyMap> maps,
                   std::span<const BinaryMask> gts, int n_thresholds,
                   const std::optional<PostFilter>& filter = std::nullopt);

struct PrResult {
  std::vector<CurvePoint> curve;
  double auprc = 0.0;
};

struct RocResult {
  std::vector<CurvePoint> curve;
  double auroc = 0.0;
};

// Threshold sweep at every distinct score, descending, tie groups moving
// together. AUPRC uses step-wise average-precision integration (no linear
// interpolation of precision).
PrResult pr_curve(const ScoredVoxelSet& pool);

// AUROC by the Mann-Whitney rank statistic with midranks for ties; the
// trapezoidal area over the emitted curve equals it to floating precision.
RocResult roc_auc(const ScoredVoxelSet& pool);

// Full sweep shared by the curve metrics plus the pooled-Dice ceiling over
// every distinct-score threshold (an upper bound no finite grid can exceed).
struct SweepResult {
  std::vector<CurvePoint> curve;
  double auprc = 0.0;
  double auroc = 0.0;
  double dice_ceiling = 0.0;
  double dice_ceiling_threshold = 0.0;
};

SweepResult sweep_pool(const ScoredVoxelSet& pool);

}  // namespace flairseg
