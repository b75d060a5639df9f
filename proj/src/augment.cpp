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

#include "maskface/augment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "maskface/csv.hpp"
#include "maskface/errors.hpp"

namespace maskface {

namespace fs = std::filesystem;

void validate(const MaskPolicy& policy) {
  if (policy.candidate_types.empty()) {
    throw ValidationError("mask policy: candidate_types must be nonempty");
  }
  if (!(policy.pattern_probability >= 0.0 && policy.pattern_probability <= 1.0)) {
    throw ValidationError("mask policy: pattern_probability must be in [0, 1]");
  }
  if (!(policy.pattern_intensity >= 0.0 && policy.pattern_intensity <= 1.0)) {
    throw ValidationError("mask policy: pattern_intensity must be in [0, 1]");
  }
  if (!(policy.max_residual_px > 0.0)) {
    throw ValidationError("mask policy: max_residual_px must be positive");
  }
}

std::string to_string(RowStatus status) {
  switch (status) {
    case RowStatus::Masked:
      return "MASKED";
    case RowStatus::OriginalKept:
      return "ORIGINAL_KEPT";
    case RowStatus::SkippedNoFace:
      return "SKIPPED_NO_FACE";
    case RowStatus::SkippedPoorFit:
      return "SKIPPED_POOR_FIT";
    case RowStatus::SkippedUnreadable:
      return "SKIPPED_UNREADABLE";
  }
  throw ArgumentError("unknown row status");
}

RowStatus parse_row_status(const std::string& name) {
  if (name == "MASKED") return RowStatus::Masked;
  if (name == "ORIGINAL_KEPT") return RowStatus::OriginalKept;
  if (name == "SKIPPED_NO_FACE") return RowStatus::SkippedNoFace;
  if (name == "SKIPPED_POOR_FIT") return RowStatus::SkippedPoorFit;
  if (name == "SKIPPED_UNREADABLE") return RowStatus::SkippedUnreadable;
  throw LookupError("unknown row status '" + name + "'");
}

namespace {

struct FaceDraw {
  MaskType type;
  std::string pattern;  // empty when none
};

FaceDraw draw_for_face(const MaskLibrary& lib, const MaskPolicy& policy, SplitMix64& rng) {
  FaceDraw draw{};
  const auto type_idx = rng.next_below(policy.candidate_types.size());
  draw.type = policy.candidate_types[type_idx];
  if (policy.pattern_probability > 0.0) {
    const bool use_pattern = rng.next_unit() < policy.pattern_probability;
    if (use_pattern) {
      const std::vector<std::string> names = lib.pattern_names();
      if (names.empty()) {
        throw LookupError("mask policy requests patterns but the library has none");
      }
      draw.pattern = names[rng.next_below(names.size())];
    }
  }
  return draw;
}

}  // namespace

FaceOutcome mask_single_face(Image& image, const FaceLandmarks& lm,
                             const MaskLibrary& lib, MaskType type,
                             const std::string& pattern, double pattern_intensity,
                             const std::optional<Rgb>& color, double max_residual_px) {
  if (!pattern.empty() && color) {
    throw ArgumentError("a mask takes a pattern or a color, not both");
  }
  FaceOutcome outcome;
  outcome.mask_type = type;
  outcome.pattern = pattern;
  try {
    const TiltBin tilt = estimate_tilt(lm);
    outcome.tilt = tilt;
    const FaceAnchors anchors = extract_anchors(lm);
    const MaskTemplate& tpl = select_template(lib, type, tilt);
    const TransformFit fit = estimate_transform(tpl.anchors, anchors, max_residual_px);
    outcome.fit_residual_px = fit.rms_residual_px;
    if (fit.poor_fit) {
      outcome.status = RowStatus::SkippedPoorFit;
      return outcome;
    }
    Image layer;
    if (!pattern.empty()) {
      const MaskTemplate patterned =
          apply_pattern(tpl, lib.pattern(pattern), pattern_intensity);
      layer = warp_mask(patterned, fit.transform, image.width(), image.height());
    } else if (color) {
      const MaskTemplate colored = apply_color(tpl, *color);
      layer = warp_mask(colored, fit.transform, image.width(), image.height());
    } else {
      layer = warp_mask(tpl, fit.transform, image.width(), image.height());
    }
    image = blend(image, layer);
    outcome.status = RowStatus::Masked;
  } catch (const GeometryError&) {
    // degenerate anchors: no transform exists for this face
    outcome.status = RowStatus::SkippedPoorFit;
  } catch (const ValidationError&) {
    outcome.status = RowStatus::SkippedPoorFit;
  }
  return outcome;
}

MaskImageResult mask_image(const Image& image, std::span<const FaceLandmarks> landmarks,
                           const MaskLibrary& lib, const MaskPolicy& policy,
                           SplitMix64& rng) {
  validate(policy);
  MaskImageResult result;
  result.image = image;
  if (landmarks.empty()) {
    result.faces.push_back(FaceOutcome{RowStatus::SkippedNoFace, {}, {}, {}, {}});
    return result;
  }
  for (const FaceLandmarks& lm : landmarks) {
    const FaceDraw draw = draw_for_face(lib, policy, rng);
    result.faces.push_back(mask_single_face(result.image, lm, lib, draw.type,
                                            draw.pattern, policy.pattern_intensity, {},
                                            policy.max_residual_px));
  }
  return result;
}

namespace {

std::string residual_field(const std::optional<double>& residual) {
  if (!residual) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *residual);
  return buf;
}

}  // namespace

void AugmentationManifest::write_csv(std::ostream& out) const {
  out << "source_path,output_path,status,mask_type,pattern,tilt_bin,"
         "fit_residual_px,seed_used\n";
  for (const ManifestRow& row : rows) {
    out << csv_escape(row.source_path) << ',' << csv_escape(row.output_path) << ','
        << to_string(row.status) << ',' << row.mask_type << ',' << csv_escape(row.pattern)
        << ',' << row.tilt_bin << ',' << residual_field(row.fit_residual_px) << ','
        << row.seed_used << '\n';
  }
}

void AugmentationManifest::write_csv_atomic(const fs::path& path) const {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) {
      throw IoError("cannot open '" + tmp.string() + "' for writing");
    }
    write_csv(out);
    out.flush();
    if (!out) {
      throw IoError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() +
                  "': " + ec.message());
  }
}

std::uint64_t per_image_seed(std::uint64_t policy_seed, std::string_view relative_path) {
  return policy_seed ^ fnv1a64(relative_path);
}

namespace {

bool is_png(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png";
}

fs::path sidecar_path(const fs::path& image_path) {
  fs::path p = image_path;
  p.replace_extension();
  p += ".landmarks.json";
  return p;
}

std::string masked_name(const fs::path& source, const FaceOutcome& face) {
  const std::string stem = source.stem().string();
  const std::string ext = source.extension().string();
  std::string name = stem + "_" + to_string(*face.mask_type);
  if (!face.pattern.empty()) name += "_" + face.pattern;
  return name + ext;
}

struct ImageJob {
  fs::path source_abs;
  std::string rel;  // generic '/'-separated relative path
};

std::vector<ManifestRow> process_image(const ImageJob& job, const fs::path& output_root,
                                       const MaskLibrary& lib, const MaskPolicy& policy) {
  const std::uint64_t stream_seed = per_image_seed(policy.seed, job.rel);
  std::vector<ManifestRow> rows;
  const auto base_row = [&]() {
    ManifestRow row;
    row.source_path = job.rel;
    row.seed_used = stream_seed;
    return row;
  };

  Image image;
  std::vector<FaceLandmarks> landmarks;
  try {
    image = load_png(job.source_abs, 3);
    const fs::path sidecar = sidecar_path(job.source_abs);
    if (fs::exists(sidecar)) {
      landmarks = load_landmarks(sidecar);
    }
  } catch (const Error&) {
    ManifestRow row = base_row();
    row.status = RowStatus::SkippedUnreadable;
    rows.push_back(row);
    return rows;
  }

  SplitMix64 rng(stream_seed);
  const MaskImageResult result = mask_image(image, landmarks, lib, policy, rng);

  const fs::path rel_path(job.rel);
  const FaceOutcome* first_masked = nullptr;
  for (const FaceOutcome& face : result.faces) {
    if (face.status == RowStatus::Masked) {
      first_masked = &face;
      break;
    }
  }

  std::string masked_rel;
  if (first_masked != nullptr) {
    masked_rel = (rel_path.parent_path() / masked_name(rel_path, *first_masked))
                     .generic_string();
    const fs::path out_abs = output_root / masked_rel;
    fs::create_directories(out_abs.parent_path());
    save_png(out_abs, result.image);
  }

  for (const FaceOutcome& face : result.faces) {
    ManifestRow row = base_row();
    row.status = face.status;
    if (face.status == RowStatus::Masked) row.output_path = masked_rel;
    if (face.mask_type) row.mask_type = to_string(*face.mask_type);
    row.pattern = face.pattern;
    if (face.tilt) row.tilt_bin = to_string(face.tilt->bin);
    row.fit_residual_px = face.fit_residual_px;
    rows.push_back(row);
  }

  if (first_masked != nullptr && policy.keep_original) {
    const fs::path out_abs = output_root / rel_path;
    fs::create_directories(out_abs.parent_path());
    fs::copy_file(job.source_abs, out_abs, fs::copy_options::overwrite_existing);
    ManifestRow row = base_row();
    row.status = RowStatus::OriginalKept;
    row.output_path = rel_path.generic_string();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

AugmentationManifest mask_dataset(const fs::path& input_root, const fs::path& output_root,
                                  const MaskLibrary& lib, const MaskPolicy& policy,
                                  int workers) {
  validate(policy);
  if (workers < 1) {
    throw ValidationError("worker count must be at least 1");
  }
  if (!fs::is_directory(input_root)) {
    throw IoError("input root '" + input_root.string() + "' is not a directory");
  }
  if (policy.pattern_probability > 0.0 && lib.pattern_names().empty()) {
    throw LookupError("mask policy requests patterns but the library has none");
  }
  std::error_code ec;
  fs::create_directories(output_root, ec);
  if (ec) {
    throw IoError("cannot create output root '" + output_root.string() +
                  "': " + ec.message());
  }
  const std::string in_canon = fs::weakly_canonical(input_root).generic_string();
  const std::string out_canon = fs::weakly_canonical(output_root).generic_string();
  if (out_canon == in_canon || out_canon.starts_with(in_canon + "/")) {
    throw ValidationError("output root must not lie inside the input tree");
  }

  std::vector<ImageJob> jobs;
  for (const auto& entry : fs::recursive_directory_iterator(input_root)) {
    if (!entry.is_regular_file() || !is_png(entry.path())) continue;
    ImageJob job;
    job.source_abs = entry.path();
    job.rel = fs::relative(entry.path(), input_root).generic_string();
    jobs.push_back(std::move(job));
  }
  std::sort(jobs.begin(), jobs.end(),
            [](const ImageJob& a, const ImageJob& b) { return a.rel < b.rel; });

  std::vector<std::vector<ManifestRow>> per_image(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  std::atomic<std::size_t> cursor{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        per_image[i] = process_image(jobs[i], output_root, lib, policy);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(jobs.size(), 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  AugmentationManifest manifest;
  for (std::vector<ManifestRow>& rows : per_image) {
    manifest.rows.insert(manifest.rows.end(), rows.begin(), rows.end());
  }
  std::stable_sort(manifest.rows.begin(), manifest.rows.end(),
                   [](const ManifestRow& a, const ManifestRow& b) {
                     return a.source_path < b.source_path;
                   });
  manifest.write_csv_atomic(output_root / "manifest.csv");
  return manifest;
}

}  // namespace maskface
