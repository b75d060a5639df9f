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

#include "maskface/embed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "maskface/errors.hpp"
#include "maskface/rng.hpp"

namespace maskface {

namespace {

constexpr double kNormEps = 1e-12;
constexpr double kUnitNormTol = 1e-6;

double norm2(std::span<const double> v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

}  // namespace

void validate(const Embedding& e, std::size_t expected_dim) {
  if (e.vector.empty()) {
    throw ValidationError("embedding '" + e.source + "': empty vector");
  }
  if (expected_dim > 0 && e.vector.size() != expected_dim) {
    throw ValidationError("embedding '" + e.source + "': dimension " +
                          std::to_string(e.vector.size()) + ", expected " +
                          std::to_string(expected_dim));
  }
  const double norm = std::sqrt(norm2(e.vector));
  if (!(std::abs(norm - 1.0) <= kUnitNormTol)) {
    throw ValidationError("embedding '" + e.source + "': norm " + std::to_string(norm) +
                          " is not unit within 1e-6");
  }
}

double sq_l2(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ArgumentError("sq_l2: dimension mismatch (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

double sq_l2(const Embedding& a, const Embedding& b) {
  return sq_l2(std::span<const double>(a.vector), std::span<const double>(b.vector));
}

void validate(const TripletLossParams& p) {
  if (!(p.alpha > 0.0)) {
    throw ValidationError("triplet loss margin must be positive");
  }
}

std::string to_string(MiningMode mode) {
  switch (mode) {
    case MiningMode::All:
      return "all";
    case MiningMode::SemiHard:
      return "semi_hard";
  }
  throw ArgumentError("unknown mining mode");
}

MiningMode parse_mining_mode(const std::string& name) {
  if (name == "all") return MiningMode::All;
  if (name == "semi_hard") return MiningMode::SemiHard;
  throw LookupError("unknown mining mode '" + name + "' (valid: all, semi_hard)");
}

double triplet_loss(double d_ap, double d_an, const TripletLossParams& p) {
  validate(p);
  return std::max(0.0, d_ap - d_an + p.alpha);
}

double triplet_loss(std::span<const Embedding> batch, const Triplet& t,
                    const TripletLossParams& p) {
  return triplet_loss(sq_l2(batch[t.anchor], batch[t.positive]),
                      sq_l2(batch[t.anchor], batch[t.negative]), p);
}

namespace {

bool valid_pair(const Embedding& a, const Embedding& p) {
  return a.identity == p.identity && a.source != p.source;
}

}  // namespace

std::vector<Triplet> mine_triplets(std::span<const Embedding> batch,
                                   const TripletLossParams& p, MiningMode mode) {
  validate(p);
  const std::size_t n = batch.size();
  std::vector<Triplet> out;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t pos = 0; pos < n; ++pos) {
      if (pos == a || !valid_pair(batch[a], batch[pos])) continue;
      if (mode == MiningMode::All) {
        for (std::size_t neg = 0; neg < n; ++neg) {
          if (batch[neg].identity == batch[a].identity) continue;
          out.push_back(Triplet{a, pos, neg});
        }
        continue;
      }
      const double d_ap = sq_l2(batch[a], batch[pos]);
      bool found_semi = false;
      bool found_fallback = false;
      double best_semi = 0.0;
      double best_fallback = 0.0;
      std::size_t pick = 0;
      for (std::size_t neg = 0; neg < n; ++neg) {
        if (batch[neg].identity == batch[a].identity) continue;
        const double d_an = sq_l2(batch[a], batch[neg]);
        if (d_an > d_ap) {
          // strict comparison keeps the lowest index on ties
          if (!found_semi || d_an < best_semi) {
            found_semi = true;
            best_semi = d_an;
            pick = neg;
          }
        } else if (!found_semi) {
          if (!found_fallback || d_an > best_fallback) {
            found_fallback = true;
            best_fallback = d_an;
            pick = neg;
          }
        }
      }
      if (found_semi || found_fallback) {
        out.push_back(Triplet{a, pos, pick});
      }
    }
  }
  return out;
}

ToyEncoder ToyEncoder::identity(int dim) {
  if (dim < 1) {
    throw ArgumentError("encoder dimension must be positive");
  }
  ToyEncoder enc;
  enc.input_dim = dim;
  enc.embed_dim = dim;
  enc.weight.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  enc.bias.assign(dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    enc.weight[static_cast<std::size_t>(i) * dim + i] = 1.0;
  }
  return enc;
}

ToyEncoder ToyEncoder::random(int input_dim, int embed_dim, std::uint64_t seed) {
  if (input_dim < 1 || embed_dim < 1) {
    throw ArgumentError("encoder dimensions must be positive");
  }
  ToyEncoder enc;
  enc.input_dim = input_dim;
  enc.embed_dim = embed_dim;
  enc.weight.resize(static_cast<std::size_t>(input_dim) * embed_dim);
  enc.bias.assign(embed_dim, 0.0);
  SplitMix64 rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(input_dim));
  for (double& w : enc.weight) {
    w = (rng.next_unit() * 2.0 - 1.0) * scale;
  }
  return enc;
}

std::vector<double> ToyEncoder::encode(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(input_dim)) {
    throw ArgumentError("encode: input dimension " + std::to_string(x.size()) +
                        ", expected " + std::to_string(input_dim));
  }
  std::vector<double> z(bias);
  for (int i = 0; i < input_dim; ++i) {
    const double xi = x[i];
    const double* row = &weight[static_cast<std::size_t>(i) * embed_dim];
    for (int j = 0; j < embed_dim; ++j) {
      z[j] += xi * row[j];
    }
  }
  const double inv = 1.0 / std::sqrt(norm2(z) + kNormEps);
  for (double& v : z) v *= inv;
  return z;
}

Gradients loss_gradient(const ToyEncoder& enc, std::span<const TrainSample> batch,
                        const TripletLossParams& p, MiningMode mode) {
  Gradients g;
  g.weight.assign(enc.weight.size(), 0.0);
  g.bias.assign(enc.bias.size(), 0.0);

  const std::size_t n = batch.size();
  const std::size_t dim = static_cast<std::size_t>(enc.embed_dim);
  std::vector<std::vector<double>> z(n);
  std::vector<Embedding> embedded(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (batch[k].input.size() != static_cast<std::size_t>(enc.input_dim)) {
      throw ArgumentError("loss_gradient: sample dimension mismatch");
    }
    // pre-normalization activations are needed for the backward pass
    std::vector<double> zk(enc.bias);
    for (int i = 0; i < enc.input_dim; ++i) {
      const double xi = batch[k].input[i];
      const double* row = &enc.weight[static_cast<std::size_t>(i) * enc.embed_dim];
      for (int j = 0; j < enc.embed_dim; ++j) zk[j] += xi * row[j];
    }
    embedded[k].vector.resize(dim);
    const double inv = 1.0 / std::sqrt(norm2(zk) + kNormEps);
    for (std::size_t j = 0; j < dim; ++j) embedded[k].vector[j] = zk[j] * inv;
    embedded[k].identity = batch[k].identity;
    embedded[k].source = batch[k].source;
    z[k] = std::move(zk);
  }

  const std::vector<Triplet> triplets = mine_triplets(embedded, p, mode);
  g.triplet_count = triplets.size();
  if (triplets.empty()) return g;

  std::vector<std::vector<double>> g_y(n, std::vector<double>(dim, 0.0));
  double total = 0.0;
  for (const Triplet& t : triplets) {
    const auto& ya = embedded[t.anchor].vector;
    const auto& yp = embedded[t.positive].vector;
    const auto& yn = embedded[t.negative].vector;
    const double hinge = sq_l2(ya, yp) - sq_l2(ya, yn) + p.alpha;
    if (hinge <= 0.0) continue;
    total += hinge;
    for (std::size_t j = 0; j < dim; ++j) {
      g_y[t.anchor][j] += 2.0 * (yn[j] - yp[j]);
      g_y[t.positive][j] += -2.0 * (ya[j] - yp[j]);
      g_y[t.negative][j] += 2.0 * (ya[j] - yn[j]);
    }
  }
  g.mean_loss = total / static_cast<double>(triplets.size());

  const double inv_m = 1.0 / static_cast<double>(triplets.size());
  for (std::size_t k = 0; k < n; ++k) {
    const double nk = std::sqrt(norm2(z[k]) + kNormEps);
    double dot = 0.0;
    for (std::size_t j = 0; j < dim; ++j) dot += z[k][j] * g_y[k][j];
    std::vector<double> g_z(dim);
    // d(z/n)/dz applied to g_y: g_y/n - z (z . g_y) / n^3
    for (std::size_t j = 0; j < dim; ++j) {
      g_z[j] = inv_m * (g_y[k][j] / nk - z[k][j] * dot / (nk * nk * nk));
    }
    for (int i = 0; i < enc.input_dim; ++i) {
      const double xi = batch[k].input[i];
      double* row = &g.weight[static_cast<std::size_t>(i) * enc.embed_dim];
      for (std::size_t j = 0; j < dim; ++j) row[j] += xi * g_z[j];
    }
    for (std::size_t j = 0; j < dim; ++j) g.bias[j] += g_z[j];
  }
  return g;
}

void validate(const TrainSchedule& s) {
  if (s.epochs < 1) throw ValidationError("epochs must be at least 1");
  if (s.batch_size < 2) throw ValidationError("batch size must be at least 2");
  validate(s.loss);
  for (double lr : s.learning_rates) {
    if (!(lr > 0.0)) throw ValidationError("learning rates must be positive");
  }
}

double learning_rate_for_epoch(const TrainSchedule& s, int epoch) {
  if (epoch < 1 || epoch > s.epochs) {
    throw ArgumentError("epoch out of range");
  }
  const int span = s.epochs / 3;
  if (epoch <= span) return s.learning_rates[0];
  if (epoch <= 2 * span) return s.learning_rates[1];
  return s.learning_rates[2];
}

TrainResult train_toy(ToyEncoder enc, std::span<const TrainSample> dataset,
                      const TrainSchedule& schedule) {
  validate(schedule);
  std::size_t identities = 0;
  {
    std::vector<std::string> names;
    for (const TrainSample& s : dataset) names.push_back(s.identity);
    std::sort(names.begin(), names.end());
    identities = static_cast<std::size_t>(
        std::unique(names.begin(), names.end()) - names.begin());
  }
  if (identities < 2) {
    throw ValidationError("training needs at least two identities");
  }

  TrainResult result;
  result.encoder = std::move(enc);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(schedule.seed);

  for (int epoch = 1; epoch <= schedule.epochs; ++epoch) {
    const double lr = learning_rate_for_epoch(schedule, epoch);
    seeded_shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(schedule.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(schedule.batch_size));
      std::vector<TrainSample> batch;
      batch.reserve(stop - start);
      for (std::size_t i = start; i < stop; ++i) batch.push_back(dataset[order[i]]);
      const Gradients g =
          loss_gradient(result.encoder, batch, schedule.loss, schedule.mode);
      total += g.mean_loss * static_cast<double>(g.triplet_count);
      count += g.triplet_count;
      for (std::size_t i = 0; i < g.weight.size(); ++i) {
        result.encoder.weight[i] -= lr * g.weight[i];
      }
      for (std::size_t i = 0; i < g.bias.size(); ++i) {
        result.encoder.bias[i] -= lr * g.bias[i];
      }
    }
    result.loss_trace.push_back(count == 0 ? 0.0 : total / static_cast<double>(count));
  }
  return result;
}

Embedding embed_sample(const ToyEncoder& enc, const TrainSample& sample, bool masked) {
  Embedding e;
  e.vector = enc.encode(sample.input);
  e.identity = sample.identity;
  e.source = sample.source;
  e.masked = masked;
  return e;
}

}  // namespace maskface
