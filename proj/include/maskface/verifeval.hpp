// Copyright 2026 the maskface authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Verification evaluation: pair generation, threshold sweeps, split
// calibration, accuracy/TPR-at-FAR reporting, cross-dataset heatmap
// grids and identity clustering. All thresholds are on the squared-L2
// scale, which spans [0, 4] for unit embeddings.

#ifndef MASKFACE_VERIFEVAL_HPP_
#define MASKFACE_VERIFEVAL_HPP_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "maskface/embed.hpp"

namespace maskface {

enum class PairLabel { Positive, Negative };

std::string to_string(PairLabel label);
PairLabel parse_pair_label(const std::string& name);

// One verification pair. Sides reference embeddings by source id plus
// the dataset tag the embedding set is registered under. POSITIVE
// means the two identities are equal (checked at scoring time).
struct VerificationPair {
  std::string id_a;
  std::string id_b;
  PairLabel label = PairLabel::Positive;
  std::string tag_a;
  std::string tag_b;

  friend bool operator==(const VerificationPair&, const VerificationPair&) = default;
};

struct TaggedEmbeddings {
  std::string tag;
  std::vector<Embedding> embeddings;
};

// Draws exactly n_pos positive and n_neg negative pairs, without
// replacement, deterministically from SplitMix64(seed): candidate
// pairs are enumerated over every set combination in input order
// (within a set only i < j; across sets every combination), pairs
// sharing a source id are excluded, and a partial Fisher-Yates pass
// selects positives first, then negatives. tag_filter, when nonempty,
// restricts and reorders the participating sets.
//
// Throws ValidationError stating the achievable maxima when the
// request cannot be met, LookupError on an unknown filter tag.
std::vector<VerificationPair> generate_pairs(std::span<const TaggedEmbeddings> sets,
                                             std::size_t n_pos, std::size_t n_neg,
                                             std::uint64_t seed,
                                             std::span<const std::string> tag_filter = {});

// Directed variant for heatmap cells: side a comes from template_set,
// side b from unknown_set. Equal tags switch to the deduplicated
// within-set enumeration so a tag paired with itself yields each
// unordered pair once.
std::vector<VerificationPair> generate_cross_pairs(const TaggedEmbeddings& template_set,
                                                   const TaggedEmbeddings& unknown_set,
                                                   std::size_t n_pos, std::size_t n_neg,
                                                   std::uint64_t seed);

// Pair-list CSV: header `id_a,id_b,label,tag_a,tag_b`, minimal RFC
// 4180 quoting, labels POSITIVE/NEGATIVE.
void write_pairs_csv(std::ostream& out, std::span<const VerificationPair> pairs);
void write_pairs_csv(const std::filesystem::path& path,
                     std::span<const VerificationPair> pairs);
std::vector<VerificationPair> read_pairs_csv(const std::filesystem::path& path);

// Non-owning (tag, source id) -> embedding lookup. Registered spans
// must outlive the index. Re-adding a tag with identical content is a
// no-op; differing content is a ValidationError. The default set, when
// present, answers for any unregistered tag.
class EmbeddingIndex {
 public:
  void add_set(const std::string& tag, std::span<const Embedding> embeddings);
  void set_default(std::span<const Embedding> embeddings);
  const Embedding& lookup(const std::string& tag, const std::string& id) const;

 private:
  using SourceMap = std::vector<std::pair<std::string, const Embedding*>>;  // sorted
  static SourceMap build(std::span<const Embedding> embeddings);
  static const Embedding* find(const SourceMap& map, const std::string& id);

  std::vector<std::pair<std::string, SourceMap>> by_tag_;  // sorted by tag
  SourceMap default_;
  bool has_default_ = false;
};

struct ScoredPair {
  VerificationPair pair;
  double distance = 0.0;
};

// Resolves both sides and attaches squared-L2 distances. Throws
// ValidationError when a pair's label disagrees with the identities.
std::vector<ScoredPair> score_pairs(std::span<const VerificationPair> pairs,
                                    const EmbeddingIndex& index);

enum class Decision { Same, Different };

// Inclusive boundary: SAME iff distance <= threshold.
Decision decide(double distance, double threshold);

// Candidate thresholds t(k) = min_value + k * step, k = 0..size()-1.
struct ThresholdGrid {
  double min_value = 0.0;
  double max_value = 4.0;
  double step = 0.01;

  std::size_t size() const;
  double at(std::size_t k) const { return min_value + static_cast<double>(k) * step; }
};

void validate(const ThresholdGrid& grid);

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  double accuracy() const;
  // true positive rate, TP / (TP + FN)
  double tpr() const;
  // false acceptance rate in the ratio-over-negatives sense,
  // FP / (FP + TN)
  double far() const;

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts counts_at_threshold(std::span<const ScoredPair> pairs, double threshold);

struct MaxAccuracyResult {
  double threshold = 0.0;
  double accuracy = 0.0;
  ConfusionCounts counts;
};

// Sweeps the grid and returns the smallest threshold achieving the
// maximum accuracy. Requires at least one positive and one negative
// pair (ArgumentError).
MaxAccuracyResult max_accuracy_threshold(std::span<const ScoredPair> pairs,
                                         const ThresholdGrid& grid = {});

// The false-rate denominator. FalseAcceptance is the ratio of wrongly
// accepted pairs over all negative pairs, FP / (FP + TN), and is the
// default. FalseDiscovery, FP / (TP + FP), is provided for comparison
// only.
enum class FarDefinition { FalseAcceptance, FalseDiscovery };

struct FarThresholdResult {
  double threshold = 0.0;
  // rate actually achieved at the returned threshold
  double far_achieved = 0.0;
  // false when even the grid minimum exceeds the target
  bool meets_target = true;
  // true when far_target < 1 / #neg, so any single false positive
  // overshoots and only zero-FP thresholds can satisfy the target
  bool target_below_resolution = false;
  ConfusionCounts counts;
};

// Largest grid threshold whose rate stays within far_target; when none
// qualifies, the grid minimum with meets_target = false. Requires at
// least one negative pair (ArgumentError); far_target must lie in
// [0, 1] (ValidationError).
FarThresholdResult threshold_at_far(std::span<const ScoredPair> pairs, double far_target,
                                    const ThresholdGrid& grid = {},
                                    FarDefinition definition = FarDefinition::FalseAcceptance);

// Round-robin stratified split: the k-th positive goes to fold
// k mod n_folds, negatives likewise. Throws StratificationError when
// any fold ends up without a positive or without a negative pair.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const ScoredPair> pairs,
                                                       int n_folds);

struct ThresholdCalibration {
  double threshold_max_acc = 0.0;
  double threshold_at_far = 0.0;
  double far_target = 0.0;
  int n_folds = 0;
  // the designated evaluation fold, n_folds - 1
  std::size_t eval_fold = 0;
  // per-rotation optima, one per held-out non-evaluation fold
  std::vector<double> fold_max_acc_thresholds;
  std::vector<double> fold_far_thresholds;
  bool far_target_below_resolution = false;
};

// Split-averaged calibration: pairs are stratified into n_folds folds;
// rotation r (r = 0..n_folds-2) computes grid optima over the union of
// all folds except fold r; the final thresholds are the means of the
// rotation optima (computed in a form that is exact when all optima
// are equal). Fold n_folds-1 takes part in every union and is the
// designated evaluation fold for reporting.
ThresholdCalibration calibrate(std::span<const ScoredPair> pairs, int n_folds,
                               double far_target, const ThresholdGrid& grid = {},
                               FarDefinition definition = FarDefinition::FalseAcceptance);

struct MetricsReport {
  double max_accuracy = 0.0;
  double acc_at_far = 0.0;
  double tpr_at_far = 0.0;
  double far_achieved = 0.0;
  double threshold_max_acc = 0.0;
  double threshold_at_far = 0.0;
  double far_target = 0.0;
  ConfusionCounts at_max_acc;
  ConfusionCounts at_far;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// Counts and metrics at the fixed calibrated thresholds.
MetricsReport evaluate(std::span<const ScoredPair> pairs,
                       const ThresholdCalibration& calibration);

struct HeatmapCell {
  std::string template_tag;
  std::string unknown_tag;
  // set when the requested pair counts cannot be drawn for this cell
  bool insufficient_pairs = false;
  MetricsReport report;
};

struct HeatmapGrid {
  // template-major order: all unknown tags for the first template tag,
  // then the next template tag
  std::vector<HeatmapCell> cells;

  // CSV `template_tag,unknown_tag,max_acc,acc_at_far,tpr_at_far,
  // far_achieved`; insufficient cells leave the metric fields empty.
  void write_csv(std::ostream& out) const;
};

// One cell per (template tag, unknown tag) combination, each drawn
// with cell seed = seed ^ fnv1a64(template_tag + "|" + unknown_tag)
// and evaluated at the fixed calibration. Duplicate tags must carry
// identical embedding sets.
HeatmapGrid heatmap(std::span<const TaggedEmbeddings> sets,
                    const ThresholdCalibration& calibration, std::size_t n_pos,
                    std::size_t n_neg, std::uint64_t seed);

// Average-linkage agglomerative clustering on squared-L2 distances:
// merges while the minimum inter-cluster average distance stays <=
// threshold, breaking ties toward the lowest member index. Returns
// clusters as ascending index lists, ordered by first member; together
// they partition the input.
std::vector<std::vector<std::size_t>> cluster_identities(
    std::span<const Embedding> embeddings, double threshold);

// Fraction of embeddings covered by their cluster's majority identity.
double clustering_purity(const std::vector<std::vector<std::size_t>>& clusters,
                         std::span<const Embedding> embeddings);

// Mean number of distinct clusters an identity is spread over.
double mean_clusters_per_identity(const std::vector<std::vector<std::size_t>>& clusters,
                                  std::span<const Embedding> embeddings);

}  // namespace maskface

#endif  // MASKFACE_VERIFEVAL_HPP_
