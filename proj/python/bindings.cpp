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
// Python bindings for the main maskface operations. Arrays cross the
// boundary as numpy buffers; everything else as plain Python types.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "maskface/augment.hpp"
#include "maskface/embed.hpp"
#include "maskface/errors.hpp"
#include "maskface/image.hpp"
#include "maskface/landmark.hpp"
#include "maskface/maskwarp.hpp"
#include "maskface/verifeval.hpp"

namespace py = pybind11;
using namespace maskface;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ByteArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

FaceLandmarks landmarks_from_array(const DoubleArray& pts) {
  if (pts.ndim() != 2 || pts.shape(0) != kLandmarkCount || pts.shape(1) != 2) {
    throw py::value_error("landmarks must be a (68, 2) array");
  }
  FaceLandmarks lm;
  const double* p = pts.data();
  double min_x = p[0], max_x = p[0], min_y = p[1], max_y = p[1];
  for (int i = 0; i < kLandmarkCount; ++i) {
    lm.points[i] = Vec2{p[2 * i], p[2 * i + 1]};
    min_x = std::min(min_x, p[2 * i]);
    max_x = std::max(max_x, p[2 * i]);
    min_y = std::min(min_y, p[2 * i + 1]);
    max_y = std::max(max_y, p[2 * i + 1]);
  }
  lm.bbox = BBox{min_x, min_y, std::max(max_x - min_x, 1.0),
                 std::max(max_y - min_y, 1.0)};
  return lm;
}

Image image_from_array(const ByteArray& arr) {
  if (arr.ndim() != 3 || arr.shape(2) != 3) {
    throw py::value_error("image must be an (H, W, 3) uint8 array");
  }
  Image img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)), 3);
  std::memcpy(img.pixels().data(), arr.data(), img.pixels().size());
  return img;
}

py::array image_to_array(const Image& img) {
  py::array_t<std::uint8_t> out({img.height(), img.width(), img.channels()});
  std::memcpy(out.mutable_data(), img.pixels().data(), img.pixels().size());
  return out;
}

std::vector<Embedding> embeddings_from_arrays(const DoubleArray& vectors,
                                              const std::vector<std::string>& identities,
                                              const std::vector<std::string>& sources) {
  if (vectors.ndim() != 2) throw py::value_error("embeddings must be a 2-D array");
  const std::size_t n = static_cast<std::size_t>(vectors.shape(0));
  const std::size_t d = static_cast<std::size_t>(vectors.shape(1));
  if (identities.size() != n || sources.size() != n) {
    throw py::value_error("identities/sources must match the embedding row count");
  }
  std::vector<Embedding> out(n);
  const double* p = vectors.data();
  for (std::size_t i = 0; i < n; ++i) {
    out[i].vector.assign(p + i * d, p + (i + 1) * d);
    out[i].identity = identities[i];
    out[i].source = sources[i];
  }
  return out;
}

py::dict tilt(const DoubleArray& pts) {
  const TiltBin bin = estimate_tilt(landmarks_from_array(pts));
  py::dict out;
  out["bin"] = to_string(bin.bin);
  out["angle_deg"] = bin.angle_deg;
  return out;
}

py::dict apply_mask(const ByteArray& image_arr, const DoubleArray& pts,
                    const std::string& mask_type, const std::string& pattern,
                    double pattern_intensity, const std::string& color,
                    double max_residual_px) {
  static const MaskLibrary lib = MaskLibrary::builtin();
  Image image = image_from_array(image_arr);
  std::optional<Rgb> rgb;
  if (!color.empty()) rgb = lib.color(color);
  const FaceOutcome outcome =
      mask_single_face(image, landmarks_from_array(pts), lib,
                       parse_mask_type(mask_type), pattern, pattern_intensity,
                       rgb, max_residual_px);
  py::dict out;
  out["image"] = image_to_array(image);
  out["status"] = to_string(outcome.status);
  out["mask_type"] =
      outcome.mask_type ? py::cast(to_string(*outcome.mask_type)) : py::none();
  out["pattern"] = outcome.pattern.empty() ? py::none() : py::cast(outcome.pattern);
  out["tilt_bin"] = outcome.tilt ? py::cast(to_string(outcome.tilt->bin)) : py::none();
  out["fit_residual_px"] =
      outcome.fit_residual_px ? py::cast(*outcome.fit_residual_px) : py::none();
  return out;
}

py::list mine(const DoubleArray& vectors, const std::vector<std::string>& identities,
              const std::vector<std::string>& sources, double alpha,
              const std::string& mode) {
  const std::vector<Embedding> batch =
      embeddings_from_arrays(vectors, identities, sources);
  const std::vector<Triplet> triplets =
      mine_triplets(batch, TripletLossParams{alpha}, parse_mining_mode(mode));
  py::list out;
  for (const Triplet& t : triplets) {
    out.append(py::make_tuple(t.anchor, t.positive, t.negative));
  }
  return out;
}

py::dict train(const DoubleArray& inputs, const std::vector<std::string>& identities,
               const std::vector<std::string>& sources, int embed_dim, int epochs,
               int batch_size, double alpha, const std::string& mode,
               std::uint64_t seed) {
  if (inputs.ndim() != 2) throw py::value_error("inputs must be a 2-D array");
  const std::size_t n = static_cast<std::size_t>(inputs.shape(0));
  const std::size_t d = static_cast<std::size_t>(inputs.shape(1));
  if (identities.size() != n || sources.size() != n) {
    throw py::value_error("identities/sources must match the input row count");
  }
  std::vector<TrainSample> samples(n);
  const double* p = inputs.data();
  for (std::size_t i = 0; i < n; ++i) {
    samples[i].input.assign(p + i * d, p + (i + 1) * d);
    samples[i].identity = identities[i];
    samples[i].source = sources[i];
  }
  TrainSchedule schedule;
  schedule.epochs = epochs;
  schedule.batch_size = batch_size;
  schedule.loss.alpha = alpha;
  schedule.mode = parse_mining_mode(mode);
  schedule.seed = seed;
  const TrainResult result = train_toy(
      ToyEncoder::random(static_cast<int>(d), embed_dim, seed), samples, schedule);

  py::array_t<double> emb({static_cast<py::ssize_t>(n),
                           static_cast<py::ssize_t>(embed_dim)});
  double* out_p = emb.mutable_data();
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> y = result.encoder.encode(samples[i].input);
    std::copy(y.begin(), y.end(), out_p + i * static_cast<std::size_t>(embed_dim));
  }
  py::dict out;
  out["embeddings"] = emb;
  out["loss_trace"] = result.loss_trace;
  return out;
}

py::dict report_dict(const MetricsReport& r) {
  py::dict out;
  out["max_accuracy"] = r.max_accuracy;
  out["acc_at_far"] = r.acc_at_far;
  out["tpr_at_far"] = r.tpr_at_far;
  out["far_achieved"] = r.far_achieved;
  out["threshold_max_acc"] = r.threshold_max_acc;
  out["threshold_at_far"] = r.threshold_at_far;
  return out;
}

py::dict calibrate_and_evaluate(const DoubleArray& distances,
                                const std::vector<bool>& is_positive,
                                double far_target, int n_folds) {
  if (distances.ndim() != 1) throw py::value_error("distances must be a 1-D array");
  const std::size_t n = static_cast<std::size_t>(distances.shape(0));
  if (is_positive.size() != n) {
    throw py::value_error("is_positive must match the distance count");
  }
  std::vector<ScoredPair> scored(n);
  const double* p = distances.data();
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id_a = "a" + std::to_string(i);
    const std::string id_b = is_positive[i] ? id_a : "b" + std::to_string(i);
    scored[i].pair = VerificationPair{id_a, id_b,
                                      is_positive[i] ? PairLabel::Positive
                                                     : PairLabel::Negative,
                                      "py", "py"};
    scored[i].distance = p[i];
  }
  const ThresholdCalibration cal = calibrate(scored, n_folds, far_target,
                                             ThresholdGrid{},
                                             FarDefinition::FalseAcceptance);
  py::dict out;
  out["threshold_max_acc"] = cal.threshold_max_acc;
  out["threshold_at_far"] = cal.threshold_at_far;
  out["far_target_below_resolution"] = cal.far_target_below_resolution;
  out["report"] = report_dict(evaluate(scored, cal));
  return out;
}

py::dict cluster(const DoubleArray& vectors, const std::vector<std::string>& identities,
                 const std::vector<std::string>& sources, double threshold) {
  const std::vector<Embedding> embeddings =
      embeddings_from_arrays(vectors, identities, sources);
  const std::vector<std::vector<std::size_t>> clusters =
      cluster_identities(embeddings, threshold);
  py::dict out;
  out["clusters"] = clusters;
  out["purity"] = clustering_purity(clusters, embeddings);
  out["mean_clusters_per_identity"] = mean_clusters_per_identity(clusters, embeddings);
  return out;
}

}  // namespace

PYBIND11_MODULE(_maskface, m) {
  m.doc() = "maskface core operations";

  py::register_exception<Error>(m, "MaskfaceError");

  m.def("tilt", &tilt, py::arg("landmarks"),
        "Tilt bin and signed angle for a (68, 2) landmark array.");
  m.def("apply_mask", &apply_mask, py::arg("image"), py::arg("landmarks"),
        py::arg("mask_type") = "surgical_blue", py::arg("pattern") = "",
        py::arg("pattern_intensity") = 0.5, py::arg("color") = "",
        py::arg("max_residual_px") = kDefaultMaxResidualPx,
        "Mask one face in an (H, W, 3) uint8 image using the built-in library.");
  m.def("sq_l2",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          return sq_l2(std::span<const double>(a), std::span<const double>(b));
        },
        py::arg("a"), py::arg("b"), "Squared L2 distance between two vectors.");
  m.def("triplet_loss",
        [](double d_ap, double d_an, double alpha) {
          return triplet_loss(d_ap, d_an, TripletLossParams{alpha});
        },
        py::arg("d_ap"), py::arg("d_an"), py::arg("alpha") = 0.2);
  m.def("mine_triplets", &mine, py::arg("embeddings"), py::arg("identities"),
        py::arg("sources"), py::arg("alpha") = 0.2, py::arg("mode") = "semi_hard",
        "Triplets as (anchor, positive, negative) index tuples.");
  m.def("train_toy", &train, py::arg("inputs"), py::arg("identities"),
        py::arg("sources"), py::arg("embed_dim") = 8, py::arg("epochs") = 30,
        py::arg("batch_size") = 16, py::arg("alpha") = 0.2,
        py::arg("mode") = "semi_hard", py::arg("seed") = 0,
        "Train the toy encoder; returns embeddings and the loss trace.");
  m.def("calibrate_and_evaluate", &calibrate_and_evaluate, py::arg("distances"),
        py::arg("is_positive"), py::arg("far_target") = 0.001,
        py::arg("n_folds") = 10,
        "Fold-calibrated thresholds and metrics for scored pairs.");
  m.def("cluster", &cluster, py::arg("embeddings"), py::arg("identities"),
        py::arg("sources"), py::arg("threshold"),
        "Average-linkage identity clusters over unit-norm embeddings.");
}
