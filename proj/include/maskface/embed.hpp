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
// Embedding-space math: squared-L2 distances, triplet loss, online
// triplet mining, and a toy trainable encoder (single affine layer plus
// L2 normalization) with a three-step learning-rate schedule. The toy
// encoder is the smallest model whose gradient path exercises every
// term of the objective; it stands in for a full convolutional backbone
// in desk-scale verification of the training machinery.

#ifndef MASKFACE_EMBED_HPP_
#define MASKFACE_EMBED_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace maskface {

// One embedded image. vector is unit L2 norm (+- 1e-6); dimension is
// fixed across an embedding set. source identifies the image; identity
// the person.
struct Embedding {
  std::vector<double> vector;
  std::string identity;
  std::string source;
  bool masked = false;

  friend bool operator==(const Embedding&, const Embedding&) = default;
};

// Throws ValidationError unless the vector is unit norm within 1e-6
// and, when expected_dim > 0, has that dimension.
void validate(const Embedding& e, std::size_t expected_dim = 0);

// Sum of squared component differences. Throws ArgumentError on
// dimension mismatch. For unit vectors the range is [0, 4].
double sq_l2(std::span<const double> a, std::span<const double> b);
double sq_l2(const Embedding& a, const Embedding& b);

struct TripletLossParams {
  // squared-L2 margin
  double alpha = 0.2;
};

// Throws ValidationError unless alpha > 0.
void validate(const TripletLossParams& p);

// Indices into the batch the triplet was mined from. anchor/positive
// share an identity but come from different source images; the
// negative has a different identity.
struct Triplet {
  std::size_t anchor = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

enum class MiningMode { All, SemiHard };

std::string to_string(MiningMode mode);
MiningMode parse_mining_mode(const std::string& name);

// Hinge form of the margin constraint:
//   max(0, sq_l2(a, p) - sq_l2(a, n) + alpha)
double triplet_loss(double d_ap, double d_an, const TripletLossParams& p);
double triplet_loss(std::span<const Embedding> batch, const Triplet& t,
                    const TripletLossParams& p);

// Enumerates triplets from one batch. A valid (anchor, positive) pair
// has equal identities and distinct sources (equal sources never pair,
// so duplicated rows add no pairs); any other-identity embedding is a
// valid negative.
//
// ALL: every valid ordered combination, in (anchor, positive, negative)
// index order. SEMI_HARD: one triplet per valid (anchor, positive)
// pair, choosing the negative that minimizes sq_l2(a, n) subject to
// sq_l2(a, n) > sq_l2(a, p); when no such negative exists, the one
// maximizing sq_l2(a, n). Ties break toward the lowest batch index.
// No valid pair at all yields an empty list.
std::vector<Triplet> mine_triplets(std::span<const Embedding> batch,
                                   const TripletLossParams& p, MiningMode mode);

// Affine map followed by L2 normalization, y = z / sqrt(|z|^2 + 1e-12),
// so the output is unit norm for any input with nonnegligible
// pre-normalization norm.
struct ToyEncoder {
  int input_dim = 0;
  int embed_dim = 0;
  std::vector<double> weight;  // input_dim x embed_dim, row-major
  std::vector<double> bias;    // embed_dim

  // weight = I, bias = 0; requires square dimensions.
  static ToyEncoder identity(int dim);
  // Uniform weights in [-s, s) with s = 1/sqrt(input_dim), zero bias,
  // drawn row-major from a SplitMix64 stream.
  static ToyEncoder random(int input_dim, int embed_dim, std::uint64_t seed);

  std::vector<double> encode(std::span<const double> x) const;
};

struct TrainSample {
  std::vector<double> input;
  std::string identity;
  std::string source;
};

struct Gradients {
  std::vector<double> weight;  // same layout as ToyEncoder::weight
  std::vector<double> bias;
  double mean_loss = 0.0;
  std::size_t triplet_count = 0;
};

// Exact analytic gradient of the mean mined-triplet loss with respect
// to the encoder parameters (subgradient 0 at hinge kinks). The mean is
// over all mined triplets, inactive ones contributing 0. An unmineable
// batch yields zero gradients.
Gradients loss_gradient(const ToyEncoder& enc, std::span<const TrainSample> batch,
                        const TripletLossParams& p, MiningMode mode);

struct TrainSchedule {
  int epochs = 100;
  int batch_size = 16;
  // three-step schedule over equal spans, remainder to the last span
  std::array<double, 3> learning_rates = {0.05, 0.005, 0.0005};
  TripletLossParams loss;
  MiningMode mode = MiningMode::SemiHard;
  std::uint64_t seed = 0;
};

void validate(const TrainSchedule& s);

// epoch is 1-based: with spans of epochs/3, epochs 1..s get rate 0,
// s+1..2s rate 1, the rest rate 2 (100 epochs: 1-33, 34-66, 67-100).
double learning_rate_for_epoch(const TrainSchedule& s, int epoch);

struct TrainResult {
  ToyEncoder encoder;
  // per-epoch mean mined loss, weighted by triplet count across batches
  std::vector<double> loss_trace;
};

// Plain SGD over shuffled batches, deterministic given the schedule
// seed. Requires at least two identities in the dataset.
TrainResult train_toy(ToyEncoder enc, std::span<const TrainSample> dataset,
                      const TrainSchedule& schedule);

// Encodes one sample into an Embedding carrying its labels.
Embedding embed_sample(const ToyEncoder& enc, const TrainSample& sample,
                       bool masked = false);

// Binary embedding-set file: header (magic "MFEB", version 1 u32, dim
// u32, count u64) then per record a length-prefixed identity, a
// length-prefixed source, a masked byte and dim float32 values. All
// integers and floats little-endian. Reading validates the header, the
// unit-norm invariant and that no trailing bytes remain.
void write_embeddings(const std::filesystem::path& path,
                      std::span<const Embedding> embeddings);
std::vector<Embedding> read_embeddings(const std::filesystem::path& path);

// Debug CSV: header `identity,source,masked,v0,...`, one row per
// embedding, values at %.9g.
void write_embeddings_csv(std::ostream& out, std::span<const Embedding> embeddings);

// Training samples as CSV: header `identity,source,x0,...`, one row
// per sample. All rows must share the header's dimension.
void write_train_samples_csv(std::ostream& out, std::span<const TrainSample> samples);
std::vector<TrainSample> read_train_samples_csv(const std::filesystem::path& path);

}  // namespace maskface

#endif  // MASKFACE_EMBED_HPP_
