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
// maskface command-line entry point. Machine-readable JSON goes to
// stdout, human-readable progress to stderr. Exit codes: 0 success,
// 1 I/O failure, 2 validation failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "maskface/augment.hpp"
#include "maskface/embed.hpp"
#include "maskface/errors.hpp"
#include "maskface/image.hpp"
#include "maskface/landmark.hpp"
#include "maskface/maskwarp.hpp"
#include "maskface/rng.hpp"
#include "maskface/verifeval.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using namespace maskface;

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string out;
  std::string assets;
  int workers = 1;
  double grid_min = 0.0;
  double grid_max = 4.0;
  double grid_step = 0.01;

  ThresholdGrid grid() const { return ThresholdGrid{grid_min, grid_max, grid_step}; }
};

void log_config(const std::string& command, const GlobalOptions& g, json extra) {
  json cfg = {{"command", command},
              {"seed", g.seed},
              {"out", g.out},
              {"assets", g.assets.empty() ? "<builtin>" : g.assets},
              {"workers", g.workers},
              {"grid", {{"min", g.grid_min}, {"max", g.grid_max}, {"step", g.grid_step}}}};
  cfg.update(extra);
  std::cerr << "config: " << cfg.dump() << "\n";
}

MaskLibrary load_library(const GlobalOptions& g) {
  MaskLibrary lib = g.assets.empty() ? MaskLibrary::builtin() : MaskLibrary::load(g.assets);
  lib.require_complete();
  return lib;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> items;
  std::string item;
  for (char c : csv) {
    if (c == ',') {
      if (!item.empty()) items.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  if (!item.empty()) items.push_back(item);
  return items;
}

std::vector<MaskType> parse_type_list(const std::string& csv) {
  std::vector<MaskType> types;
  for (const std::string& name : split_list(csv)) {
    types.push_back(parse_mask_type(name));
  }
  if (types.empty()) {
    throw ValidationError("--types needs at least one mask type");
  }
  return types;
}

// Loads repeatable `tag=path` embedding-set arguments. A bare path is
// registered under the tag "default" and doubles as the fallback set
// for unregistered tags.
struct LoadedSets {
  std::vector<TaggedEmbeddings> sets;
  EmbeddingIndex index;
};

LoadedSets load_sets(const std::vector<std::string>& args) {
  if (args.empty()) {
    throw ValidationError("at least one --embeddings argument is required");
  }
  LoadedSets loaded;
  std::optional<std::size_t> default_idx;
  for (const std::string& arg : args) {
    const std::size_t eq = arg.find('=');
    TaggedEmbeddings set;
    if (eq == std::string::npos) {
      if (default_idx) {
        throw ValidationError("only one untagged --embeddings argument is allowed");
      }
      set.tag = "default";
      set.embeddings = read_embeddings(arg);
      default_idx = loaded.sets.size();
    } else {
      set.tag = arg.substr(0, eq);
      if (set.tag.empty()) {
        throw ValidationError("empty tag in --embeddings argument '" + arg + "'");
      }
      set.embeddings = read_embeddings(arg.substr(eq + 1));
    }
    loaded.sets.push_back(std::move(set));
  }
  for (const TaggedEmbeddings& set : loaded.sets) {
    loaded.index.add_set(set.tag, set.embeddings);
  }
  if (default_idx) {
    loaded.index.set_default(loaded.sets[*default_idx].embeddings);
  }
  return loaded;
}

json face_json(const FaceOutcome& face) {
  json f;
  f["status"] = to_string(face.status);
  f["mask_type"] = face.mask_type ? json(to_string(*face.mask_type)) : json(nullptr);
  f["pattern"] = face.pattern.empty() ? json(nullptr) : json(face.pattern);
  if (face.tilt) {
    f["tilt_bin"] = to_string(face.tilt->bin);
    f["tilt_angle_deg"] = face.tilt->angle_deg;
  } else {
    f["tilt_bin"] = nullptr;
    f["tilt_angle_deg"] = nullptr;
  }
  f["fit_residual_px"] =
      face.fit_residual_px ? json(*face.fit_residual_px) : json(nullptr);
  return f;
}

json counts_json(const ConfusionCounts& c) {
  return {{"tp", c.tp}, {"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn}};
}

json report_json(const MetricsReport& r) {
  return {{"max_accuracy", r.max_accuracy},
          {"acc_at_far", r.acc_at_far},
          {"tpr_at_far", r.tpr_at_far},
          {"far_achieved", r.far_achieved},
          {"threshold_max_acc", r.threshold_max_acc},
          {"threshold_at_far", r.threshold_at_far},
          {"far_target", r.far_target},
          {"counts_at_max_acc", counts_json(r.at_max_acc)},
          {"counts_at_far", counts_json(r.at_far)}};
}

json calibration_json(const ThresholdCalibration& c) {
  return {{"threshold_max_acc", c.threshold_max_acc},
          {"threshold_at_far", c.threshold_at_far},
          {"far_target", c.far_target},
          {"far_target_below_resolution", c.far_target_below_resolution},
          {"n_folds", c.n_folds},
          {"eval_fold", c.eval_fold},
          {"fold_max_acc_thresholds", c.fold_max_acc_thresholds},
          {"fold_far_thresholds", c.fold_far_thresholds}};
}

void emit(const json& out) { std::cout << out.dump(2) << "\n"; }

FarDefinition parse_far_definition(const std::string& name) {
  if (name == "prose" || name == "false_acceptance") return FarDefinition::FalseAcceptance;
  if (name == "fdr" || name == "false_discovery") return FarDefinition::FalseDiscovery;
  throw LookupError("unknown FAR definition '" + name +
                    "' (valid: false_acceptance, false_discovery)");
}

// ---------------------------------------------------------------- mask

struct MaskArgs {
  std::string image;
  std::string mask_type;
  std::string pattern;
  std::string color;
  std::string landmarks;
  double pattern_intensity = 0.5;
  double max_residual = kDefaultMaxResidualPx;
};

int cmd_mask(const GlobalOptions& g, const MaskArgs& a) {
  const MaskLibrary lib = load_library(g);
  Image image = load_png(a.image, 3);

  const fs::path image_path(a.image);
  fs::path landmark_path;
  if (!a.landmarks.empty()) {
    landmark_path = a.landmarks;
  } else {
    landmark_path = image_path;
    landmark_path.replace_extension();
    landmark_path += ".landmarks.json";
  }
  std::vector<FaceLandmarks> faces;
  if (!a.landmarks.empty() || fs::exists(landmark_path)) {
    faces = load_landmarks(landmark_path);
  }

  std::optional<MaskType> fixed_type;
  if (!a.mask_type.empty()) fixed_type = parse_mask_type(a.mask_type);
  std::optional<Rgb> color;
  if (!a.color.empty()) color = lib.color(a.color);
  if (!a.pattern.empty() && !lib.has_pattern(a.pattern)) {
    throw LookupError("unknown pattern '" + a.pattern + "'");
  }

  const std::vector<MaskType> default_types = MaskPolicy{}.candidate_types;
  SplitMix64 rng(g.seed);
  std::vector<FaceOutcome> outcomes;
  if (faces.empty()) {
    outcomes.push_back(FaceOutcome{RowStatus::SkippedNoFace, {}, {}, {}, {}});
  }
  for (const FaceLandmarks& lm : faces) {
    const MaskType type =
        fixed_type ? *fixed_type : default_types[rng.next_below(default_types.size())];
    outcomes.push_back(mask_single_face(image, lm, lib, type, a.pattern,
                                        a.pattern_intensity, color, a.max_residual));
  }

  const FaceOutcome* first_masked = nullptr;
  for (const FaceOutcome& f : outcomes) {
    if (f.status == RowStatus::Masked) {
      first_masked = &f;
      break;
    }
  }

  json out;
  out["image"] = image_path.generic_string();
  out["seed"] = g.seed;
  out["output"] = nullptr;
  if (first_masked != nullptr) {
    std::string name = image_path.stem().string() + "_" +
                       to_string(*first_masked->mask_type);
    if (!first_masked->pattern.empty()) name += "_" + first_masked->pattern;
    name += image_path.extension().string();
    const fs::path out_path =
        g.out.empty() ? image_path.parent_path() / name : fs::path(g.out) / name;
    if (!out_path.parent_path().empty()) {
      fs::create_directories(out_path.parent_path());
    }
    save_png(out_path, image);
    out["output"] = out_path.generic_string();
  }
  json face_list = json::array();
  std::size_t masked = 0;
  for (const FaceOutcome& f : outcomes) {
    face_list.push_back(face_json(f));
    if (f.status == RowStatus::Masked) ++masked;
  }
  out["faces"] = face_list;
  emit(out);
  std::cerr << "masked " << masked << " of " << faces.size() << " face(s) in '"
            << a.image << "'\n";
  return 0;
}

// ------------------------------------------------------------ mask-dir

struct MaskDirArgs {
  std::string root;
  std::string types;
  double pattern_probability = 0.0;
  double pattern_intensity = 0.5;
  double max_residual = kDefaultMaxResidualPx;
  bool keep_original = true;
};

int cmd_mask_dir(const GlobalOptions& g, const MaskDirArgs& a) {
  if (g.out.empty()) {
    throw ValidationError("mask-dir requires --out OUTPUT_DIR");
  }
  const MaskLibrary lib = load_library(g);
  MaskPolicy policy;
  if (!a.types.empty()) policy.candidate_types = parse_type_list(a.types);
  policy.keep_original = a.keep_original;
  policy.pattern_probability = a.pattern_probability;
  policy.pattern_intensity = a.pattern_intensity;
  policy.max_residual_px = a.max_residual;
  policy.seed = g.seed;

  const AugmentationManifest manifest =
      mask_dataset(a.root, g.out, lib, policy, g.workers);

  json counts = json::object();
  std::size_t sources = 0;
  std::string last_source;
  for (const ManifestRow& row : manifest.rows) {
    const std::string status = to_string(row.status);
    counts[status] = counts.value(status, 0) + 1;
    if (row.source_path != last_source) {
      ++sources;
      last_source = row.source_path;
    }
  }
  json out = {{"manifest", (fs::path(g.out) / "manifest.csv").generic_string()},
              {"output_root", fs::path(g.out).generic_string()},
              {"source_images", sources},
              {"rows", manifest.rows.size()},
              {"counts", counts}};
  emit(out);
  std::cerr << "processed " << sources << " image(s), wrote "
            << (fs::path(g.out) / "manifest.csv").string() << "\n";
  return 0;
}

// --------------------------------------------------------------- pairs

struct PairsArgs {
  std::vector<std::string> embeddings;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  std::string tags;
};

int cmd_pairs(const GlobalOptions& g, const PairsArgs& a) {
  if (g.out.empty()) {
    throw ValidationError("pairs requires --out FILE");
  }
  const LoadedSets loaded = load_sets(a.embeddings);
  const std::vector<std::string> filter = split_list(a.tags);
  const std::vector<VerificationPair> pairs =
      generate_pairs(loaded.sets, a.n_pos, a.n_neg, g.seed, filter);
  write_pairs_csv(fs::path(g.out), pairs);
  emit(json{{"output", g.out},
            {"pairs", pairs.size()},
            {"positives", a.n_pos},
            {"negatives", a.n_neg}});
  std::cerr << "wrote " << pairs.size() << " pairs to '" << g.out << "'\n";
  return 0;
}

// ----------------------------------------------------------- train-toy

struct TrainToyArgs {
  std::string data;
  int epochs = 100;
  int batch_size = 16;
  int embed_dim = 32;
  double alpha = 0.2;
  std::string mode = "semi_hard";
  std::vector<double> learning_rates = {0.05, 0.005, 0.0005};
  std::string csv_out;
};

int cmd_train_toy(const GlobalOptions& g, const TrainToyArgs& a) {
  const std::vector<TrainSample> samples = read_train_samples_csv(a.data);
  if (samples.empty()) {
    throw ValidationError("'" + a.data + "' holds no samples");
  }
  TrainSchedule schedule;
  schedule.epochs = a.epochs;
  schedule.batch_size = a.batch_size;
  schedule.loss.alpha = a.alpha;
  schedule.mode = parse_mining_mode(a.mode);
  schedule.seed = g.seed;
  if (a.learning_rates.size() != 3) {
    throw ValidationError("--lr needs exactly three values");
  }
  std::copy(a.learning_rates.begin(), a.learning_rates.end(),
            schedule.learning_rates.begin());

  const int input_dim = static_cast<int>(samples.front().input.size());
  ToyEncoder encoder = ToyEncoder::random(input_dim, a.embed_dim, g.seed);
  const TrainResult result = train_toy(std::move(encoder), samples, schedule);

  std::vector<Embedding> embeddings;
  embeddings.reserve(samples.size());
  for (const TrainSample& s : samples) {
    embeddings.push_back(embed_sample(result.encoder, s));
  }
  if (!g.out.empty()) {
    write_embeddings(fs::path(g.out), embeddings);
  }
  if (!a.csv_out.empty()) {
    std::ofstream csv(a.csv_out, std::ios::binary);
    if (!csv) throw IoError("cannot open '" + a.csv_out + "' for writing");
    write_embeddings_csv(csv, embeddings);
  }

  json out = {{"samples", samples.size()},
              {"input_dim", input_dim},
              {"embed_dim", a.embed_dim},
              {"epochs", a.epochs},
              {"mode", a.mode},
              {"initial_loss", result.loss_trace.front()},
              {"final_loss", result.loss_trace.back()},
              {"loss_trace", result.loss_trace},
              {"output", g.out.empty() ? json(nullptr) : json(g.out)}};
  emit(out);
  std::cerr << "trained " << a.epochs << " epoch(s): loss "
            << result.loss_trace.front() << " -> " << result.loss_trace.back() << "\n";
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string pairs;
  std::vector<std::string> embeddings;
  double far_target = 0.001;
  int n_folds = 10;
  std::string far_definition = "false_acceptance";
};

int cmd_eval(const GlobalOptions& g, const EvalArgs& a) {
  const LoadedSets loaded = load_sets(a.embeddings);
  const std::vector<VerificationPair> pairs = read_pairs_csv(a.pairs);
  const std::vector<ScoredPair> scored = score_pairs(pairs, loaded.index);
  const FarDefinition definition = parse_far_definition(a.far_definition);

  const ThresholdCalibration calibration =
      calibrate(scored, a.n_folds, a.far_target, g.grid(), definition);
  const std::vector<std::vector<std::size_t>> folds =
      stratified_folds(scored, a.n_folds);
  std::vector<ScoredPair> eval_pairs;
  for (std::size_t idx : folds[calibration.eval_fold]) eval_pairs.push_back(scored[idx]);

  json out = {{"pairs", scored.size()},
              {"calibration", calibration_json(calibration)},
              {"eval_fold",
               {{"index", calibration.eval_fold},
                {"pairs", eval_pairs.size()},
                {"report", report_json(evaluate(eval_pairs, calibration))}}},
              {"all_pairs", {{"report", report_json(evaluate(scored, calibration))}}}};
  emit(out);
  std::cerr << "evaluated " << scored.size() << " pairs, eval fold "
            << calibration.eval_fold << "\n";
  if (!g.out.empty()) {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw IoError("cannot open '" + g.out + "' for writing");
    f << out.dump(2) << "\n";
  }
  return 0;
}

// ------------------------------------------------------------- heatmap

struct HeatmapArgs {
  std::vector<std::string> embeddings;
  std::string tags;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  double far_target = 0.001;
  int n_folds = 10;
  std::string calibrate_tag;
  std::string far_definition = "false_acceptance";
};

int cmd_heatmap(const GlobalOptions& g, const HeatmapArgs& a) {
  if (g.out.empty()) {
    throw ValidationError("heatmap requires --out FILE");
  }
  const LoadedSets loaded = load_sets(a.embeddings);

  std::vector<TaggedEmbeddings> ordered;
  const std::vector<std::string> wanted = split_list(a.tags);
  if (wanted.empty()) {
    ordered = loaded.sets;
  } else {
    for (const std::string& tag : wanted) {
      const auto it =
          std::find_if(loaded.sets.begin(), loaded.sets.end(),
                       [&](const TaggedEmbeddings& s) { return s.tag == tag; });
      if (it == loaded.sets.end()) {
        throw LookupError("unknown dataset tag '" + tag + "' in --tags");
      }
      ordered.push_back(*it);
    }
  }

  const std::string calib_tag = a.calibrate_tag.empty() ? ordered.front().tag
                                                        : a.calibrate_tag;
  const auto calib_it =
      std::find_if(ordered.begin(), ordered.end(),
                   [&](const TaggedEmbeddings& s) { return s.tag == calib_tag; });
  if (calib_it == ordered.end()) {
    throw LookupError("calibration tag '" + calib_tag + "' is not a participating set");
  }
  const std::uint64_t calib_seed = g.seed ^ fnv1a64("calibrate|" + calib_tag);
  const std::vector<VerificationPair> calib_pairs =
      generate_cross_pairs(*calib_it, *calib_it, a.n_pos, a.n_neg, calib_seed);
  const std::vector<ScoredPair> calib_scored = score_pairs(calib_pairs, loaded.index);
  const FarDefinition definition = parse_far_definition(a.far_definition);
  const ThresholdCalibration calibration =
      calibrate(calib_scored, a.n_folds, a.far_target, g.grid(), definition);

  const HeatmapGrid grid = heatmap(ordered, calibration, a.n_pos, a.n_neg, g.seed);
  {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw IoError("cannot open '" + g.out + "' for writing");
    grid.write_csv(f);
  }
  std::size_t insufficient = 0;
  for (const HeatmapCell& cell : grid.cells) {
    if (cell.insufficient_pairs) ++insufficient;
  }
  emit(json{{"output", g.out},
            {"cells", grid.cells.size()},
            {"insufficient", insufficient},
            {"calibrate_tag", calib_tag},
            {"calibration", calibration_json(calibration)}});
  std::cerr << "wrote " << grid.cells.size() << " heatmap cells to '" << g.out << "'\n";
  return 0;
}

// ------------------------------------------------------------- cluster

struct ClusterArgs {
  std::string embeddings;
  double threshold = 1.0;
};

int cmd_cluster(const GlobalOptions& g, const ClusterArgs& a) {
  const std::vector<Embedding> embeddings = read_embeddings(a.embeddings);
  const std::vector<std::vector<std::size_t>> clusters =
      cluster_identities(embeddings, a.threshold);

  json cluster_list = json::array();
  for (const std::vector<std::size_t>& cluster : clusters) {
    json members = json::array();
    for (std::size_t idx : cluster) members.push_back(embeddings[idx].source);
    cluster_list.push_back(members);
  }
  json out = {{"embeddings", embeddings.size()},
              {"threshold", a.threshold},
              {"n_clusters", clusters.size()},
              {"purity", clustering_purity(clusters, embeddings)},
              {"mean_clusters_per_identity",
               mean_clusters_per_identity(clusters, embeddings)},
              {"clusters", cluster_list}};
  emit(out);
  std::cerr << "clustered " << embeddings.size() << " embeddings into "
            << clusters.size() << " cluster(s)\n";
  if (!g.out.empty()) {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw IoError("cannot open '" + g.out + "' for writing");
    f << out.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maskface: landmark-driven face-mask augmentation and verification toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML-style key=value config file; flags take precedence");

  GlobalOptions g;
  app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
  app.add_option("--out", g.out, "output file or directory (meaning depends on the subcommand)");
  app.add_option("--assets", g.assets, "mask asset library directory (default: built-in library)");
  app.add_option("--workers", g.workers, "worker threads for mask-dir")
      ->capture_default_str();
  app.add_option("--grid-min", g.grid_min, "threshold grid lower bound")
      ->capture_default_str();
  app.add_option("--grid-max", g.grid_max, "threshold grid upper bound")
      ->capture_default_str();
  app.add_option("--grid-step", g.grid_step, "threshold grid step")
      ->capture_default_str();

  MaskArgs mask_args;
  CLI::App* mask = app.add_subcommand("mask", "mask the faces in one image");
  mask->fallthrough();
  mask->add_option("image", mask_args.image, "input PNG")->required();
  mask->add_option("--mask-type", mask_args.mask_type,
                   "fixed mask type (default: seeded random per face)");
  mask->add_option("--pattern", mask_args.pattern, "pattern name from the library");
  mask->add_option("--color", mask_args.color, "color name or #RRGGBB");
  mask->add_option("--pattern-intensity", mask_args.pattern_intensity,
                   "pattern blend intensity in [0,1]")
      ->capture_default_str();
  mask->add_option("--landmarks", mask_args.landmarks,
                   "landmark JSON (default: <stem>.landmarks.json beside the image)");
  mask->add_option("--max-residual", mask_args.max_residual,
                   "poor-fit threshold in pixels")
      ->capture_default_str();

  MaskDirArgs dir_args;
  CLI::App* mask_dir = app.add_subcommand("mask-dir", "mask a whole image tree");
  mask_dir->fallthrough();
  mask_dir->add_option("root", dir_args.root, "input directory")->required();
  mask_dir->add_option("--types", dir_args.types,
                       "comma-separated candidate mask types (default: cloth,"
                       "surgical_green,surgical_blue,n95)");
  mask_dir->add_option("--pattern-probability", dir_args.pattern_probability,
                       "chance a mask gets a pattern")
      ->capture_default_str();
  mask_dir->add_option("--pattern-intensity", dir_args.pattern_intensity,
                       "pattern blend intensity in [0,1]")
      ->capture_default_str();
  mask_dir->add_option("--max-residual", dir_args.max_residual,
                       "poor-fit threshold in pixels")
      ->capture_default_str();
  mask_dir->add_flag("--keep-original,!--no-keep-original", dir_args.keep_original,
                     "copy originals next to masked outputs")
      ->capture_default_str();

  PairsArgs pairs_args;
  CLI::App* pairs = app.add_subcommand("pairs", "draw verification pairs");
  pairs->fallthrough();
  pairs->add_option("--embeddings", pairs_args.embeddings,
                    "embedding set, `tag=path` or a bare path (repeatable)")
      ->required();
  pairs->add_option("--pos", pairs_args.n_pos, "positive pair count")->required();
  pairs->add_option("--neg", pairs_args.n_neg, "negative pair count")->required();
  pairs->add_option("--tags", pairs_args.tags,
                    "comma-separated tag filter (default: all sets)");

  TrainToyArgs train_args;
  CLI::App* train = app.add_subcommand("train-toy", "train the toy encoder");
  train->fallthrough();
  train->add_option("--data", train_args.data, "sample CSV (identity,source,x0,...)")
      ->required();
  train->add_option("--epochs", train_args.epochs, "epoch count")->capture_default_str();
  train->add_option("--batch-size", train_args.batch_size, "batch size")
      ->capture_default_str();
  train->add_option("--embed-dim", train_args.embed_dim, "embedding dimension")
      ->capture_default_str();
  train->add_option("--alpha", train_args.alpha, "triplet margin")->capture_default_str();
  train->add_option("--mode", train_args.mode, "mining mode: all or semi_hard")
      ->capture_default_str();
  train->add_option("--lr", train_args.learning_rates,
                    "three learning rates for the three schedule steps")
      ->expected(3);
  train->add_option("--csv-out", train_args.csv_out, "also dump embeddings as debug CSV");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "calibrate thresholds and report metrics");
  eval->fallthrough();
  eval->add_option("--pairs", eval_args.pairs, "pair CSV")->required();
  eval->add_option("--embeddings", eval_args.embeddings,
                   "embedding set, `tag=path` or a bare path (repeatable)")
      ->required();
  eval->add_option("--far", eval_args.far_target, "FAR target")->capture_default_str();
  eval->add_option("--folds", eval_args.n_folds, "calibration fold count")
      ->capture_default_str();
  eval->add_option("--far-definition", eval_args.far_definition,
                   "false_acceptance (ratio over negatives) or false_discovery")
      ->capture_default_str();

  HeatmapArgs heat_args;
  CLI::App* heat = app.add_subcommand("heatmap", "cross-dataset metric grid as CSV");
  heat->fallthrough();
  heat->add_option("--embeddings", heat_args.embeddings,
                   "embedding set `tag=path` (repeatable)")
      ->required();
  heat->add_option("--tags", heat_args.tags,
                   "comma-separated tag order (default: argument order)");
  heat->add_option("--pos", heat_args.n_pos, "positive pairs per cell")->required();
  heat->add_option("--neg", heat_args.n_neg, "negative pairs per cell")->required();
  heat->add_option("--far", heat_args.far_target, "FAR target")->capture_default_str();
  heat->add_option("--folds", heat_args.n_folds, "calibration fold count")
      ->capture_default_str();
  heat->add_option("--calibrate-tag", heat_args.calibrate_tag,
                   "tag whose within-set pairs calibrate the thresholds "
                   "(default: first tag)");
  heat->add_option("--far-definition", heat_args.far_definition,
                   "false_acceptance (ratio over negatives) or false_discovery")
      ->capture_default_str();

  ClusterArgs cluster_args;
  CLI::App* cluster = app.add_subcommand("cluster", "group embeddings into identities");
  cluster->fallthrough();
  cluster->add_option("--embeddings", cluster_args.embeddings, "embedding set path")
      ->required();
  cluster->add_option("--threshold", cluster_args.threshold,
                      "merge threshold on squared-L2 average linkage")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (mask->parsed()) {
      log_config("mask", g, {{"image", mask_args.image}});
      return cmd_mask(g, mask_args);
    }
    if (mask_dir->parsed()) {
      log_config("mask-dir", g, {{"root", dir_args.root}});
      return cmd_mask_dir(g, dir_args);
    }
    if (pairs->parsed()) {
      log_config("pairs", g,
                 {{"pos", pairs_args.n_pos}, {"neg", pairs_args.n_neg}});
      return cmd_pairs(g, pairs_args);
    }
    if (train->parsed()) {
      log_config("train-toy", g,
                 {{"data", train_args.data}, {"epochs", train_args.epochs}});
      return cmd_train_toy(g, train_args);
    }
    if (eval->parsed()) {
      log_config("eval", g,
                 {{"pairs", eval_args.pairs},
                  {"far_target", eval_args.far_target},
                  {"folds", eval_args.n_folds}});
      return cmd_eval(g, eval_args);
    }
    if (heat->parsed()) {
      log_config("heatmap", g,
                 {{"far_target", heat_args.far_target},
                  {"pos", heat_args.n_pos},
                  {"neg", heat_args.n_neg}});
      return cmd_heatmap(g, heat_args);
    }
    if (cluster->parsed()) {
      log_config("cluster", g, {{"threshold", cluster_args.threshold}});
      return cmd_cluster(g, cluster_args);
    }
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
