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

#include "maskface/verifeval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "maskface/csv.hpp"
#include "maskface/errors.hpp"
#include "maskface/rng.hpp"

namespace maskface {

std::string to_string(PairLabel label) {
  return label == PairLabel::Positive ? "POSITIVE" : "NEGATIVE";
}

PairLabel parse_pair_label(const std::string& name) {
  if (name == "POSITIVE") return PairLabel::Positive;
  if (name == "NEGATIVE") return PairLabel::Negative;
  throw LookupError("unknown pair label '" + name + "' (valid: POSITIVE, NEGATIVE)");
}

namespace {

void append_candidates(const TaggedEmbeddings& a_set, const TaggedEmbeddings& b_set,
                       bool same_set, std::vector<VerificationPair>& pos,
                       std::vector<VerificationPair>& neg) {
  const std::vector<Embedding>& ea = a_set.embeddings;
  const std::vector<Embedding>& eb = b_set.embeddings;
  for (std::size_t i = 0; i < ea.size(); ++i) {
    for (std::size_t j = same_set ? i + 1 : 0; j < eb.size(); ++j) {
      // a pair never compares an image with itself
      if (ea[i].source == eb[j].source) continue;
      VerificationPair p;
      p.id_a = ea[i].source;
      p.id_b = eb[j].source;
      p.tag_a = a_set.tag;
      p.tag_b = b_set.tag;
      p.label = ea[i].identity == eb[j].identity ? PairLabel::Positive
                                                 : PairLabel::Negative;
      (p.label == PairLabel::Positive ? pos : neg).push_back(std::move(p));
    }
  }
}

void draw_prefix(std::vector<VerificationPair>& cands, std::size_t k, SplitMix64& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.next_below(cands.size() - i));
    std::swap(cands[i], cands[j]);
  }
  cands.resize(k);
}

std::vector<VerificationPair> select_pairs(std::vector<VerificationPair> pos,
                                           std::vector<VerificationPair> neg,
                                           std::size_t n_pos, std::size_t n_neg,
                                           std::uint64_t seed) {
  if (pos.size() < n_pos || neg.size() < n_neg) {
    throw ValidationError(
        "cannot draw " + std::to_string(n_pos) + " positive and " +
        std::to_string(n_neg) + " negative pairs: only " + std::to_string(pos.size()) +
        " positive and " + std::to_string(neg.size()) + " negative are available");
  }
  SplitMix64 rng(seed);
  draw_prefix(pos, n_pos, rng);
  draw_prefix(neg, n_neg, rng);
  pos.insert(pos.end(), std::make_move_iterator(neg.begin()),
             std::make_move_iterator(neg.end()));
  return pos;
}

}  // namespace

std::vector<VerificationPair> generate_pairs(std::span<const TaggedEmbeddings> sets,
                                             std::size_t n_pos, std::size_t n_neg,
                                             std::uint64_t seed,
                                             std::span<const std::string> tag_filter) {
  std::vector<const TaggedEmbeddings*> chosen;
  if (tag_filter.empty()) {
    for (const TaggedEmbeddings& s : sets) chosen.push_back(&s);
  } else {
    for (const std::string& tag : tag_filter) {
      const auto it = std::find_if(sets.begin(), sets.end(),
                                   [&](const TaggedEmbeddings& s) { return s.tag == tag; });
      if (it == sets.end()) {
        throw LookupError("unknown dataset tag '" + tag + "' in tag filter");
      }
      chosen.push_back(&*it);
    }
  }
  {
    std::vector<std::string> tags;
    for (const TaggedEmbeddings* s : chosen) tags.push_back(s->tag);
    std::sort(tags.begin(), tags.end());
    if (std::adjacent_find(tags.begin(), tags.end()) != tags.end()) {
      throw ValidationError("duplicate dataset tag among participating sets");
    }
  }
  std::vector<VerificationPair> pos;
  std::vector<VerificationPair> neg;
  for (std::size_t a = 0; a < chosen.size(); ++a) {
    for (std::size_t b = a; b < chosen.size(); ++b) {
      append_candidates(*chosen[a], *chosen[b], a == b, pos, neg);
    }
  }
  return select_pairs(std::move(pos), std::move(neg), n_pos, n_neg, seed);
}

std::vector<VerificationPair> generate_cross_pairs(const TaggedEmbeddings& template_set,
                                                   const TaggedEmbeddings& unknown_set,
                                                   std::size_t n_pos, std::size_t n_neg,
                                                   std::uint64_t seed) {
  std::vector<VerificationPair> pos;
  std::vector<VerificationPair> neg;
  const bool same = template_set.tag == unknown_set.tag;
  append_candidates(template_set, same ? template_set : unknown_set, same, pos, neg);
  return select_pairs(std::move(pos), std::move(neg), n_pos, n_neg, seed);
}

void write_pairs_csv(std::ostream& out, std::span<const VerificationPair> pairs) {
  out << "id_a,id_b,label,tag_a,tag_b\n";
  for (const VerificationPair& p : pairs) {
    out << csv_escape(p.id_a) << ',' << csv_escape(p.id_b) << ',' << to_string(p.label)
        << ',' << csv_escape(p.tag_a) << ',' << csv_escape(p.tag_b) << '\n';
  }
}

void write_pairs_csv(const std::filesystem::path& path,
                     std::span<const VerificationPair> pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  write_pairs_csv(out, pairs);
  out.flush();
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

std::vector<VerificationPair> read_pairs_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  const auto strip_cr = [](std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("'" + path.string() + "': empty pair file");
  }
  strip_cr(line);
  if (line != "id_a,id_b,label,tag_a,tag_b") {
    throw ParseError("'" + path.string() + "': expected header id_a,id_b,label,tag_a,tag_b");
  }
  std::vector<VerificationPair> pairs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const std::string where = "'" + path.string() + "' line " + std::to_string(lineno);
    try {
      const std::vector<std::string> fields = csv_split(line);
      if (fields.size() != 5) {
        throw ParseError("expected 5 fields, got " + std::to_string(fields.size()));
      }
      VerificationPair p;
      p.id_a = fields[0];
      p.id_b = fields[1];
      p.label = parse_pair_label(fields[2]);
      p.tag_a = fields[3];
      p.tag_b = fields[4];
      pairs.push_back(std::move(p));
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return pairs;
}

EmbeddingIndex::SourceMap EmbeddingIndex::build(std::span<const Embedding> embeddings) {
  SourceMap map;
  map.reserve(embeddings.size());
  for (const Embedding& e : embeddings) {
    map.emplace_back(e.source, &e);
  }
  std::sort(map.begin(), map.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  const auto dup = std::adjacent_find(
      map.begin(), map.end(),
      [](const auto& a, const auto& b) { return a.first == b.first; });
  if (dup != map.end()) {
    throw ValidationError("duplicate source id '" + dup->first +
                          "' within one embedding set");
  }
  return map;
}

const Embedding* EmbeddingIndex::find(const SourceMap& map, const std::string& id) {
  const auto it = std::lower_bound(
      map.begin(), map.end(), id,
      [](const auto& entry, const std::string& key) { return entry.first < key; });
  if (it == map.end() || it->first != id) return nullptr;
  return it->second;
}

void EmbeddingIndex::add_set(const std::string& tag,
                             std::span<const Embedding> embeddings) {
  SourceMap map = build(embeddings);
  const auto it = std::lower_bound(
      by_tag_.begin(), by_tag_.end(), tag,
      [](const auto& entry, const std::string& key) { return entry.first < key; });
  if (it != by_tag_.end() && it->first == tag) {
    const SourceMap& present = it->second;
    const bool identical =
        present.size() == map.size() &&
        std::equal(present.begin(), present.end(), map.begin(),
                   [](const auto& a, const auto& b) {
                     return a.first == b.first && *a.second == *b.second;
                   });
    if (!identical) {
      throw ValidationError("dataset tag '" + tag +
                            "' registered twice with different embeddings");
    }
    return;
  }
  by_tag_.insert(it, {tag, std::move(map)});
}

void EmbeddingIndex::set_default(std::span<const Embedding> embeddings) {
  default_ = build(embeddings);
  has_default_ = true;
}

const Embedding& EmbeddingIndex::lookup(const std::string& tag,
                                        const std::string& id) const {
  const auto it = std::lower_bound(
      by_tag_.begin(), by_tag_.end(), tag,
      [](const auto& entry, const std::string& key) { return entry.first < key; });
  if (it != by_tag_.end() && it->first == tag) {
    if (const Embedding* e = find(it->second, id)) return *e;
    throw LookupError("no embedding with source '" + id + "' under tag '" + tag + "'");
  }
  if (has_default_) {
    if (const Embedding* e = find(default_, id)) return *e;
    throw LookupError("no embedding with source '" + id + "' in the default set");
  }
  throw LookupError("unknown dataset tag '" + tag + "'");
}

std::vector<ScoredPair> score_pairs(std::span<const VerificationPair> pairs,
                                    const EmbeddingIndex& index) {
  std::vector<ScoredPair> scored;
  scored.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const VerificationPair& p = pairs[i];
    const Embedding& a = index.lookup(p.tag_a, p.id_a);
    const Embedding& b = index.lookup(p.tag_b, p.id_b);
    const bool same_identity = a.identity == b.identity;
    if (same_identity != (p.label == PairLabel::Positive)) {
      throw ValidationError("pair " + std::to_string(i) + " ('" + p.id_a + "', '" +
                            p.id_b + "'): label " + to_string(p.label) +
                            " disagrees with the identities");
    }
    scored.push_back(ScoredPair{p, sq_l2(a, b)});
  }
  return scored;
}

Decision decide(double distance, double threshold) {
  return distance <= threshold ? Decision::Same : Decision::Different;
}

void validate(const ThresholdGrid& grid) {
  if (!(grid.step > 0.0) || !std::isfinite(grid.step) || !std::isfinite(grid.min_value) ||
      !std::isfinite(grid.max_value) || grid.max_value < grid.min_value) {
    throw ValidationError("threshold grid: need finite bounds, max >= min, step > 0");
  }
}

std::size_t ThresholdGrid::size() const {
  // the epsilon keeps integral spans from losing their last point
  return static_cast<std::size_t>(
             std::floor((max_value - min_value) / step + 1e-9)) +
         1;
}

double ConfusionCounts::accuracy() const {
  const std::uint64_t n = total();
  return n == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(n);
}

double ConfusionCounts::tpr() const {
  const std::uint64_t n = tp + fn;
  return n == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(n);
}

double ConfusionCounts::far() const {
  const std::uint64_t n = fp + tn;
  return n == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(n);
}

ConfusionCounts counts_at_threshold(std::span<const ScoredPair> pairs, double threshold) {
  ConfusionCounts c;
  for (const ScoredPair& p : pairs) {
    const bool same = decide(p.distance, threshold) == Decision::Same;
    if (p.pair.label == PairLabel::Positive) {
      (same ? c.tp : c.fn) += 1;
    } else {
      (same ? c.fp : c.tn) += 1;
    }
  }
  return c;
}

namespace {

struct SplitDistances {
  std::vector<double> pos;  // sorted ascending
  std::vector<double> neg;
};

SplitDistances split_distances(std::span<const ScoredPair> pairs) {
  SplitDistances d;
  for (const ScoredPair& p : pairs) {
    (p.pair.label == PairLabel::Positive ? d.pos : d.neg).push_back(p.distance);
  }
  std::sort(d.pos.begin(), d.pos.end());
  std::sort(d.neg.begin(), d.neg.end());
  return d;
}

std::uint64_t count_leq(const std::vector<double>& sorted, double t) {
  return static_cast<std::uint64_t>(
      std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
}

ConfusionCounts counts_from_split(const SplitDistances& d, double t) {
  ConfusionCounts c;
  c.tp = count_leq(d.pos, t);
  c.fn = d.pos.size() - c.tp;
  c.fp = count_leq(d.neg, t);
  c.tn = d.neg.size() - c.fp;
  return c;
}

// mean that is exact when all values are equal
double stable_mean(const std::vector<double>& values) {
  const double base = values.front();
  double acc = 0.0;
  for (double v : values) acc += v - base;
  return base + acc / static_cast<double>(values.size());
}

}  // namespace

MaxAccuracyResult max_accuracy_threshold(std::span<const ScoredPair> pairs,
                                         const ThresholdGrid& grid) {
  validate(grid);
  const SplitDistances d = split_distances(pairs);
  if (d.pos.empty() || d.neg.empty()) {
    throw ArgumentError(
        "max_accuracy_threshold needs at least one positive and one negative pair");
  }
  MaxAccuracyResult best;
  best.accuracy = -1.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid.at(k);
    const ConfusionCounts c = counts_from_split(d, t);
    const double acc = c.accuracy();
    // strict improvement keeps the smallest threshold at the maximum
    if (acc > best.accuracy) {
      best.threshold = t;
      best.accuracy = acc;
      best.counts = c;
    }
  }
  return best;
}

FarThresholdResult threshold_at_far(std::span<const ScoredPair> pairs, double far_target,
                                    const ThresholdGrid& grid, FarDefinition definition) {
  validate(grid);
  if (!(far_target >= 0.0 && far_target <= 1.0)) {
    throw ValidationError("far_target must be in [0, 1]");
  }
  const SplitDistances d = split_distances(pairs);
  if (d.neg.empty()) {
    throw ArgumentError("threshold_at_far needs at least one negative pair");
  }
  const auto rate_at = [&](double t) {
    const ConfusionCounts c = counts_from_split(d, t);
    if (definition == FarDefinition::FalseAcceptance) return c.far();
    const std::uint64_t accepted = c.tp + c.fp;
    return accepted == 0 ? 0.0
                         : static_cast<double>(c.fp) / static_cast<double>(accepted);
  };
  bool found = false;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (rate_at(grid.at(k)) <= far_target) {
      found = true;
      best_k = k;  // ascending scan, the last hit is the largest threshold
    }
  }
  FarThresholdResult result;
  result.threshold = grid.at(found ? best_k : 0);
  result.meets_target = found;
  result.far_achieved = rate_at(result.threshold);
  result.counts = counts_from_split(d, result.threshold);
  result.target_below_resolution =
      definition == FarDefinition::FalseAcceptance &&
      far_target < 1.0 / static_cast<double>(d.neg.size());
  return result;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const ScoredPair> pairs,
                                                       int n_folds) {
  if (n_folds < 2) {
    throw ValidationError("need at least 2 folds");
  }
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(n_folds));
  std::vector<std::size_t> pos_count(folds.size(), 0);
  std::vector<std::size_t> neg_count(folds.size(), 0);
  std::size_t next_pos = 0;
  std::size_t next_neg = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].pair.label == PairLabel::Positive) {
      const std::size_t f = next_pos++ % folds.size();
      folds[f].push_back(i);
      ++pos_count[f];
    } else {
      const std::size_t f = next_neg++ % folds.size();
      folds[f].push_back(i);
      ++neg_count[f];
    }
  }
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (pos_count[f] == 0) {
      throw StratificationError("fold " + std::to_string(f) + " has no positive pairs");
    }
    if (neg_count[f] == 0) {
      throw StratificationError("fold " + std::to_string(f) + " has no negative pairs");
    }
  }
  return folds;
}

ThresholdCalibration calibrate(std::span<const ScoredPair> pairs, int n_folds,
                               double far_target, const ThresholdGrid& grid,
                               FarDefinition definition) {
  const std::vector<std::vector<std::size_t>> folds = stratified_folds(pairs, n_folds);
  std::vector<std::size_t> fold_of(pairs.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    for (std::size_t idx : folds[f]) fold_of[idx] = f;
  }

  ThresholdCalibration cal;
  cal.far_target = far_target;
  cal.n_folds = n_folds;
  cal.eval_fold = folds.size() - 1;
  for (std::size_t r = 0; r + 1 < folds.size(); ++r) {
    std::vector<ScoredPair> training;
    training.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (fold_of[i] != r) training.push_back(pairs[i]);
    }
    cal.fold_max_acc_thresholds.push_back(
        max_accuracy_threshold(training, grid).threshold);
    const FarThresholdResult far = threshold_at_far(training, far_target, grid, definition);
    cal.fold_far_thresholds.push_back(far.threshold);
    cal.far_target_below_resolution =
        cal.far_target_below_resolution || far.target_below_resolution;
  }
  cal.threshold_max_acc = stable_mean(cal.fold_max_acc_thresholds);
  cal.threshold_at_far = stable_mean(cal.fold_far_thresholds);
  return cal;
}

MetricsReport evaluate(std::span<const ScoredPair> pairs,
                       const ThresholdCalibration& calibration) {
  MetricsReport report;
  report.threshold_max_acc = calibration.threshold_max_acc;
  report.threshold_at_far = calibration.threshold_at_far;
  report.far_target = calibration.far_target;
  report.at_max_acc = counts_at_threshold(pairs, calibration.threshold_max_acc);
  report.at_far = counts_at_threshold(pairs, calibration.threshold_at_far);
  report.max_accuracy = report.at_max_acc.accuracy();
  report.acc_at_far = report.at_far.accuracy();
  report.tpr_at_far = report.at_far.tpr();
  report.far_achieved = report.at_far.far();
  return report;
}

void HeatmapGrid::write_csv(std::ostream& out) const {
  out << "template_tag,unknown_tag,max_acc,acc_at_far,tpr_at_far,far_achieved\n";
  char buf[32];
  for (const HeatmapCell& cell : cells) {
    out << csv_escape(cell.template_tag) << ',' << csv_escape(cell.unknown_tag);
    if (cell.insufficient_pairs) {
      out << ",,,,";
    } else {
      const double values[4] = {cell.report.max_accuracy, cell.report.acc_at_far,
                                cell.report.tpr_at_far, cell.report.far_achieved};
      for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.6f", v);
        out << ',' << buf;
      }
    }
    out << '\n';
  }
}

HeatmapGrid heatmap(std::span<const TaggedEmbeddings> sets,
                    const ThresholdCalibration& calibration, std::size_t n_pos,
                    std::size_t n_neg, std::uint64_t seed) {
  if (sets.empty()) {
    throw ValidationError("heatmap needs at least one embedding set");
  }
  EmbeddingIndex index;
  for (const TaggedEmbeddings& s : sets) {
    index.add_set(s.tag, s.embeddings);
  }
  HeatmapGrid grid;
  grid.cells.reserve(sets.size() * sets.size());
  for (const TaggedEmbeddings& template_set : sets) {
    for (const TaggedEmbeddings& unknown_set : sets) {
      HeatmapCell cell;
      cell.template_tag = template_set.tag;
      cell.unknown_tag = unknown_set.tag;
      const std::uint64_t cell_seed =
          seed ^ fnv1a64(template_set.tag + "|" + unknown_set.tag);
      std::vector<VerificationPair> pairs;
      try {
        pairs = generate_cross_pairs(template_set, unknown_set, n_pos, n_neg, cell_seed);
      } catch (const ValidationError&) {
        cell.insufficient_pairs = true;
      }
      if (!cell.insufficient_pairs) {
        const std::vector<ScoredPair> scored = score_pairs(pairs, index);
        cell.report = evaluate(scored, calibration);
      }
      grid.cells.push_back(std::move(cell));
    }
  }
  return grid;
}

std::vector<std::vector<std::size_t>> cluster_identities(
    std::span<const Embedding> embeddings, double threshold) {
  const std::size_t n = embeddings.size();
  std::vector<std::vector<std::size_t>> members;
  if (n == 0) return members;

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = sq_l2(embeddings[i], embeddings[j]);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }

  // slot index == lowest member index: merges always fold the higher
  // slot into the lower one
  std::vector<bool> active(n, true);
  std::vector<std::size_t> size(n, 1);
  members.resize(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};

  for (;;) {
    bool found = false;
    std::size_t bi = 0;
    std::size_t bj = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        const double d = dist[i * n + j];
        // strict comparison breaks ties toward the lowest indices
        if (!found || d < best) {
          found = true;
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (!found || best > threshold) break;
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const double merged =
          (static_cast<double>(size[bi]) * dist[bi * n + k] +
           static_cast<double>(size[bj]) * dist[bj * n + k]) /
          static_cast<double>(size[bi] + size[bj]);
      dist[bi * n + k] = merged;
      dist[k * n + bi] = merged;
    }
    size[bi] += size[bj];
    members[bi].insert(members[bi].end(), members[bj].begin(), members[bj].end());
    members[bj].clear();
    active[bj] = false;
  }

  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    std::sort(members[i].begin(), members[i].end());
    clusters.push_back(std::move(members[i]));
  }
  return clusters;
}

double clustering_purity(const std::vector<std::vector<std::size_t>>& clusters,
                         std::span<const Embedding> embeddings) {
  if (embeddings.empty()) return 1.0;
  std::size_t correct = 0;
  for (const std::vector<std::size_t>& cluster : clusters) {
    std::vector<std::string> ids;
    ids.reserve(cluster.size());
    for (std::size_t idx : cluster) ids.push_back(embeddings[idx].identity);
    std::sort(ids.begin(), ids.end());
    std::size_t best = 0;
    std::size_t run = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      run = (i > 0 && ids[i] == ids[i - 1]) ? run + 1 : 1;
      best = std::max(best, run);
    }
    correct += best;
  }
  return static_cast<double>(correct) / static_cast<double>(embeddings.size());
}

double mean_clusters_per_identity(const std::vector<std::vector<std::size_t>>& clusters,
                                  std::span<const Embedding> embeddings) {
  if (embeddings.empty()) return 0.0;
  std::vector<std::pair<std::string, std::size_t>> hits;  // (identity, cluster)
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t idx : clusters[c]) {
      hits.emplace_back(embeddings[idx].identity, c);
    }
  }
  std::sort(hits.begin(), hits.end());
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  std::size_t identities = 0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (i == 0 || hits[i].first != hits[i - 1].first) ++identities;
  }
  return static_cast<double>(hits.size()) / static_cast<double>(identities);
}

}  // namespace maskface
