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
// Bulk dataset augmentation: walk an image tree, mask every face with a
// seeded random mask choice, keep originals, and record a manifest.

#ifndef MASKFACE_AUGMENT_HPP_
#define MASKFACE_AUGMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "maskface/image.hpp"
#include "maskface/landmark.hpp"
#include "maskface/maskwarp.hpp"
#include "maskface/rng.hpp"

namespace maskface {

// Random mask selection policy for a bulk job.
struct MaskPolicy {
  // Types drawn uniformly per face. The default set covers the common
  // community masks; gas is opt-in.
  std::vector<MaskType> candidate_types = {MaskType::Cloth, MaskType::SurgicalGreen,
                                           MaskType::SurgicalBlue, MaskType::N95};
  bool keep_original = true;
  // Chance that a drawn mask also gets a pattern from the library pool.
  double pattern_probability = 0.0;
  double pattern_intensity = 0.5;
  std::uint64_t seed = 0;
  double max_residual_px = kDefaultMaxResidualPx;
};

// Throws ValidationError unless candidate_types is nonempty and the
// probability/intensity fields are within [0, 1].
void validate(const MaskPolicy& policy);

enum class RowStatus {
  Masked,
  OriginalKept,
  SkippedNoFace,
  SkippedPoorFit,
  SkippedUnreadable,
};

std::string to_string(RowStatus status);
RowStatus parse_row_status(const std::string& name);

// Outcome of processing one face (or of an image with no faces).
struct FaceOutcome {
  RowStatus status = RowStatus::SkippedNoFace;
  std::optional<MaskType> mask_type;
  std::string pattern;  // empty when none drawn
  std::optional<TiltBin> tilt;
  std::optional<double> fit_residual_px;
};

struct MaskImageResult {
  Image image;
  std::vector<FaceOutcome> faces;
};

// Masks one face in place with explicit choices: tilt estimate,
// template selection, anchor fit, optional pattern or solid color,
// warp, source-over blend. pattern and color are mutually exclusive
// (ArgumentError). Returns the face record; on a poor or degenerate
// fit the image is left untouched and the record says so.
FaceOutcome mask_single_face(Image& image, const FaceLandmarks& lm,
                             const MaskLibrary& lib, MaskType type,
                             const std::string& pattern, double pattern_intensity,
                             const std::optional<Rgb>& color,
                             double max_residual_px = kDefaultMaxResidualPx);

// Masks every face independently: tilt estimate, template selection,
// anchor fit, warp, optional pattern, source-over blend. Faces whose
// fit residual exceeds policy.max_residual_px (or whose anchors are
// degenerate) are left unmasked and recorded SKIPPED_POOR_FIT. An empty
// landmark list yields the image unchanged plus one SKIPPED_NO_FACE
// record.
//
// Per-face draw order on rng, consumed before the fit so the stream
// advances identically whether or not the face ends up masked:
//   1. type index: rng.next_below(candidate_types.size())
//   2. pattern gate (only when pattern_probability > 0):
//      rng.next_unit() < pattern_probability
//   3. on a passed gate: pattern index over the sorted pattern names,
//      rng.next_below(n_patterns)
MaskImageResult mask_image(const Image& image, std::span<const FaceLandmarks> landmarks,
                           const MaskLibrary& lib, const MaskPolicy& policy,
                           SplitMix64& rng);

// One manifest line. Optional columns are empty strings in the CSV.
struct ManifestRow {
  std::string source_path;  // relative to the input root, '/' separators
  std::string output_path;  // relative to the output root, empty if none
  RowStatus status = RowStatus::SkippedNoFace;
  std::string mask_type;
  std::string pattern;
  std::string tilt_bin;
  std::optional<double> fit_residual_px;
  std::uint64_t seed_used = 0;

  friend bool operator==(const ManifestRow&, const ManifestRow&) = default;
};

struct AugmentationManifest {
  std::vector<ManifestRow> rows;

  // CSV with header, UTF-8, LF line endings, minimal RFC 4180 quoting.
  void write_csv(std::ostream& out) const;
  // Writes to a temp file in the target directory, then renames, so a
  // partial job never leaves a plausible manifest behind.
  void write_csv_atomic(const std::filesystem::path& path) const;
};

// Stream seed for one image: policy seed xored with the FNV-1a hash of
// the relative path ('/' separators). Independent of worker scheduling.
std::uint64_t per_image_seed(std::uint64_t policy_seed, std::string_view relative_path);

// Walks input_root recursively for .png images, masks each one using a
// per-image SplitMix64 stream, mirrors the tree under output_root and
// writes output_root/manifest.csv atomically. Landmarks come from
// `<stem>.landmarks.json` sidecars; a missing sidecar counts as no
// face. Masked outputs are named `<stem>_<masktype>[_<pattern>].<ext>`
// after the first masked face; when policy.keep_original and at least
// one face was masked the untouched original is copied alongside.
// Unreadable images or sidecars produce SKIPPED_UNREADABLE rows and the
// job continues. Rows come out sorted by source_path.
AugmentationManifest mask_dataset(const std::filesystem::path& input_root,
                                  const std::filesystem::path& output_root,
                                  const MaskLibrary& lib, const MaskPolicy& policy,
                                  int workers = 1);

}  // namespace maskface

#endif  // MASKFACE_AUGMENT_HPP_
