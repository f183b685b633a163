#include "cloudgan/cli/commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>

#include "cloudgan/cli/run_config.hpp"
#include "cloudgan/data/synthetic.hpp"
#include "cloudgan/detect/tile_source.hpp"
#include "cloudgan/metrics/quality.hpp"
#include "cloudgan/train/plots.hpp"
#include "cloudgan/train/trainer.hpp"

namespace cloudgan::cli {
namespace {
namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "runs";
};

RunConfig load_config(const Globals& g) {
  RunConfig cfg = load_run_config(g.config);
  if (g.seed) apply_seed(cfg, *g.seed);
  cfg.validate();
  return cfg;
}

fs::path out_root(const Globals& g) {
  if (const char* env = std::getenv("CLOUDGAN_OUT"); env != nullptr && *env != '\0') return env;
  return g.out;
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("cannot write " + path.string());
}

fs::path open_run(const Globals& g, const RunConfig& cfg, const std::string& hash) {
  const fs::path dir = make_run_dir(out_root(g), hash);
  write_json(to_json(cfg), dir / "config.json");
  std::cout << "run directory: " << dir.string() << std::endl;
  return dir;
}

std::string hash8(const std::string& hash) { return hash.substr(0, 8); }

std::optional<fs::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

std::string safe_name(std::string s) {
  for (char& c : s) {
    if (c == ':' || c == '/' || c == '\\' || c == ' ') c = '-';
  }
  return s;
}

void print_report(const metrics::MetricReport& report) {
  std::printf("n=%zu mean_psnr_db=%s mean_ssim=%s\n", report.per_image.size(),
              metrics::format_metric(report.mean_psnr_db, 6).c_str(), metrics::format_metric(report.mean_ssim, 6).c_str());
  for (const auto& f : report.failures) std::fprintf(stderr, "warning: %s: %s\n", f.id.c_str(), f.reason.c_str());
}

std::vector<train::PlotSample> plot_samples(const networks::Generator<float>& generator,
                                            std::span<const data::ImagePair> pairs, std::size_t count) {
  std::vector<train::PlotSample> samples;
  for (std::size_t i = 0; i < pairs.size() && i < count; ++i) {
    train::InferenceResult r = train::infer(generator, pairs[i].cloudy);
    samples.push_back({pairs[i].id, pairs[i].cloudy, std::move(r.image), pairs[i].clean, std::move(r.attention_maps)});
  }
  return samples;
}

// ---------------------------------------------------------------- dataset

void cmd_dataset_synth(const Globals& g, const std::string& root, int count, int size, double max_opacity) {
  if (root.empty()) throw ConfigError("dataset synth needs --root");
  if (count < 1) throw ConfigError("--count must be >= 1");
  data::SyntheticOptions opts;
  opts.size = size;
  opts.max_opacity = max_opacity;
  data::write_synthetic_dataset(root, count, g.seed.value_or(0), opts);
  std::cout << "wrote " << count << " pairs under " << root << std::endl;
}

struct SplitArgs {
  std::string root;
  std::string manifest;
  std::optional<int> train_count;
  std::optional<int> val_count;
  std::optional<int> pool;
};

void cmd_dataset_split(const Globals& g, const SplitArgs& a) {
  const RunConfig cfg = load_config(g);
  const std::string root = a.root.empty() ? cfg.dataset.root : a.root;
  if (root.empty()) throw ConfigError("dataset split needs --root or dataset.root");
  data::SplitSpec spec;
  spec.train_count = a.train_count.value_or(cfg.dataset.train_count);
  spec.val_count = a.val_count.value_or(cfg.dataset.val_count);
  spec.pool = a.pool.value_or(cfg.dataset.pool);
  spec.seed = cfg.dataset.split_seed;
  const data::DatasetManifest m = data::split_manifest(data::build_manifest(root), spec);
  for (const auto& w : m.warnings) std::fprintf(stderr, "warning: %s: %s\n", w.id.c_str(), w.message.c_str());
  const fs::path path = a.manifest.empty() ? fs::path(root) / "manifest.json" : fs::path(a.manifest);
  data::save_manifest(m, path);
  std::cout << "manifest: " << path.string() << " (train " << m.ids(data::SplitRole::Train).size() << ", val "
            << m.ids(data::SplitRole::Val).size() << ")" << std::endl;
}

// ---------------------------------------------------------------- train

void cmd_train(const Globals& g, const std::string& manifest_path, const std::string& resume_path) {
  const RunConfig cfg = load_config(g);
  const data::DatasetManifest manifest = resolve_manifest(cfg, optional_path(manifest_path));
  std::vector<data::ImagePair> train_pairs = load_split(cfg, manifest, data::SplitRole::Train);
  std::vector<data::ImagePair> val_pairs = load_split(cfg, manifest, data::SplitRole::Val);
  const std::vector<data::ImagePair> val_copy = val_pairs;
  const std::span<const data::ImagePair> preview(val_copy.data(), std::min<std::size_t>(3, val_copy.size()));
  std::optional<train::Checkpoint> start;
  if (!resume_path.empty()) start = train::load_checkpoint(resume_path);

  const std::string hash = train::config_hash(cfg.train);
  const fs::path run = open_run(g, cfg, hash);
  data::save_manifest(manifest, run / "manifest.json");
  const fs::path log_path = run / "logs" / "train_log.csv";

  train::TrainHooks hooks;
  hooks.on_epoch = [&](const train::TrainLogRow& row) {
    train::write_train_log_csv({row}, log_path, true);
    std::fprintf(stderr, "epoch %d  g_adv %.5f  d_adv %.5f  l1 %.5f  att %.5f  val_psnr %.4f  val_ssim %.4f  (%.1fs)\n",
                 row.epoch, row.g_adv, row.d_adv, row.l1, row.att, row.val_psnr, row.val_ssim, row.wall_seconds);
  };
  const fs::path ckpt_dir = run / "checkpoints";
  train::TrainResult result =
      start ? train::resume(*start, cfg.train, std::move(train_pairs), std::move(val_pairs), ckpt_dir, hooks)
            : train::train(cfg.train, std::move(train_pairs), std::move(val_pairs), ckpt_dir, hooks);
  train::save_checkpoint(result.checkpoint, ckpt_dir / "final.ckpt");

  const networks::Generator<float> generator = train::generator_from_checkpoint(result.checkpoint);
  const metrics::MetricReport val_report = metrics::evaluate(generator, val_copy);
  metrics::write_report_csv(val_report, run / "reports" / "val_report.csv");
  metrics::write_report_summary(val_report, hash, run / "reports" / "val_summary.json");
  print_report(val_report);
  if (!result.log.empty()) train::emit_plots(result.log, plot_samples(generator, preview, 3), run / "plots", hash8(hash));
  std::cout << "checkpoint: " << (ckpt_dir / "final.ckpt").string() << std::endl;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string checkpoint;
  bool identity = false;
  std::string manifest;
  std::string split = "val";
  std::string predictions;
};

void cmd_eval(const Globals& g, const EvalArgs& a) {
  const RunConfig cfg = load_config(g);
  const data::SplitRole role = data::parse_split_role(a.split);
  const int sources = static_cast<int>(!a.checkpoint.empty()) + static_cast<int>(a.identity) +
                      static_cast<int>(!a.predictions.empty());
  if (sources != 1) throw ConfigError("eval needs exactly one of --checkpoint, --identity, --predictions");
  const std::vector<data::ImagePair> pairs = load_split(cfg, resolve_manifest(cfg, optional_path(a.manifest)), role);
  if (pairs.empty()) throw DataError("split '" + a.split + "' is empty");

  metrics::MetricReport report;
  std::string hash = train::config_hash(cfg.train);
  if (!a.checkpoint.empty()) {
    const train::Checkpoint ckpt = train::load_checkpoint(a.checkpoint);
    hash = ckpt.config_hash;
    report = metrics::evaluate(train::generator_from_checkpoint(ckpt), pairs);
  } else if (a.identity) {
    report = metrics::evaluate_identity(pairs);
  } else {
    for (const auto& p : pairs) {
      const data::Raster restored = data::load_raster(data::find_image(a.predictions, "", p.id));
      if (restored.shape() != p.clean.shape()) {
        throw ShapeError("prediction for '" + p.id + "' is " + restored.shape().str() + ", expected " + p.clean.shape().str());
      }
      report.per_image.push_back({p.id, metrics::psnr(restored, p.clean), metrics::ssim(restored, p.clean)});
    }
    report.recompute_means();
  }
  const fs::path run = open_run(g, cfg, hash);
  metrics::write_report_csv(report, run / "reports" / ("eval_" + a.split + ".csv"));
  metrics::write_report_summary(report, hash, run / "reports" / ("eval_" + a.split + ".json"));
  print_report(report);
}

// ---------------------------------------------------------------- infer

struct InferArgs {
  std::string checkpoint;
  std::string input;
  std::string split;
  std::string manifest;
  bool attention = false;
  int bit_depth = 16;
};

void cmd_infer(const Globals& g, const InferArgs& a) {
  const RunConfig cfg = load_config(g);
  if (a.input.empty() == a.split.empty()) throw ConfigError("infer needs exactly one of --input, --split");
  if (a.bit_depth != 8 && a.bit_depth != 16) throw ConfigError("--bit-depth must be 8 or 16");
  const train::Checkpoint ckpt = train::load_checkpoint(a.checkpoint);
  const networks::Generator<float> generator = train::generator_from_checkpoint(ckpt);

  std::vector<std::pair<std::string, data::Raster>> inputs;
  if (!a.split.empty()) {
    const data::DatasetManifest m = resolve_manifest(cfg, optional_path(a.manifest));
    for (auto& p : load_split(cfg, m, data::parse_split_role(a.split))) inputs.emplace_back(p.id, std::move(p.cloudy));
  } else if (fs::is_directory(a.input)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(a.input)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) inputs.emplace_back(f.stem().string(), data::load_raster(f));
  } else {
    inputs.emplace_back(fs::path(a.input).stem().string(), data::load_raster(a.input));
  }
  if (inputs.empty()) throw DataError("no input images");

  const fs::path run = open_run(g, cfg, ckpt.config_hash);
  for (const auto& [stem, raster] : inputs) {
    const train::InferenceResult r = train::infer(generator, raster);
    data::save_raster(r.image, run / "samples" / (stem + ".png"), a.bit_depth);
    if (a.attention) {
      for (std::size_t k = 0; k < r.attention_maps.size(); ++k) {
        data::save_raster(r.attention_maps[k], run / "samples" / (stem + "_att" + std::to_string(k) + ".png"), a.bit_depth);
      }
    }
  }
  std::cout << "wrote " << inputs.size() << " images to " << (run / "samples").string() << std::endl;
}

// ---------------------------------------------------------------- detect

struct DetectArgs {
  std::string input;
  bool series = false;
  std::string from;
  std::string to;
  std::vector<std::string> bands;
  std::vector<int> bbox;
  std::optional<double> threshold;
  std::optional<double> delta;
  std::string rules;
};

std::vector<detect::BandRule> rules_for(const DetectSection& d, const detect::BandStack& s) {
  if (d.rules) return *d.rules;
  std::vector<detect::BandRule> rules = detect::default_rules();
  for (const auto& r : rules) {
    if (!s.has(r.band)) return {};
  }
  return rules;
}

std::optional<data::Raster> rgb_of(const detect::BandStack& s) {
  std::array<std::string, 3> names;
  try {
    names = detect::rgb_band_names(s);
  } catch (const ConfigError&) {
    return std::nullopt;
  }
  Tensor<float> t(3, s.height(), s.width());
  for (int c = 0; c < 3; ++c) {
    const auto plane = s.band(names[c]);
    std::copy(plane.begin(), plane.end(), t.channel(c).begin());
  }
  return data::Raster::clamped(std::move(t));
}

void cmd_detect(const Globals& g, const DetectArgs& a) {
  RunConfig cfg = load_config(g);
  if (a.threshold) cfg.detect.threshold = *a.threshold;
  if (a.delta) cfg.detect.delta = *a.delta;
  if (!a.rules.empty()) {
    std::ifstream in(a.rules);
    if (!in) throw ConfigError("cannot read rules " + a.rules);
    try {
      cfg.detect.rules = detect::rules_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
      throw ConfigError("rules file is not valid JSON: " + std::string(e.what()));
    }
  }
  cfg.validate();

  std::vector<detect::BandStack> stacks;
  if (fs::is_regular_file(a.input)) {
    stacks.push_back(detect::stack_from_rgb(data::load_raster(a.input), fs::path(a.input).stem().string()));
  } else if (fs::is_directory(a.input)) {
    detect::TileRequest req;
    req.time_from = a.from;
    req.time_to = a.to;
    req.bands = a.bands;
    if (!a.bbox.empty()) {
      if (a.bbox.size() != 4) throw ConfigError("--bbox takes x0,y0,x1,y1");
      req.bbox = detect::PixelBox{a.bbox[0], a.bbox[1], a.bbox[2], a.bbox[3]};
    }
    stacks = detect::FilesystemTileSource(a.input).fetch(req);
  } else {
    throw DataError("detect input " + a.input + " does not exist");
  }
  if (stacks.empty()) throw DataError("no band stacks matched the request");

  std::vector<detect::CloudMask> masks;
  if (a.series) {
    detect::SeriesParams params{cfg.detect.threshold, cfg.detect.delta, rules_for(cfg.detect, stacks.front())};
    masks = detect::detect_series(stacks, params);
  } else {
    for (const auto& s : stacks) masks.push_back(detect::detect_multiband(s, rules_for(cfg.detect, s), cfg.detect.threshold));
  }

  const std::string hash = train::config_hash(cfg.train);
  const fs::path run = open_run(g, cfg, hash);
  json frames = json::array();
  for (std::size_t i = 0; i < stacks.size(); ++i) {
    const std::string name = safe_name(stacks[i].timestamp.value_or("frame" + std::to_string(i)));
    data::save_raster(detect::mask_raster(masks[i]), run / "samples" / (name + "_mask.png"), 8);
    if (const auto rgb = rgb_of(stacks[i])) {
      data::save_raster(detect::overlay(*rgb, masks[i]), run / "samples" / (name + "_overlay.png"), 8);
    }
    const double fraction = detect::mask_stats(masks[i]).fraction;
    frames.push_back({{"name", name}, {"fraction", fraction}});
    std::printf("%s cloud_fraction=%.6f\n", name.c_str(), fraction);
  }
  write_json({{"frames", frames},
              {"threshold", cfg.detect.threshold},
              {"delta", cfg.detect.delta},
              {"series", a.series},
              {"config_hash", hash}},
             run / "reports" / "detect.json");
}

// ---------------------------------------------------------------- compare

void cmd_compare(const Globals& g, const std::vector<std::string>& paths, const std::vector<std::string>& labels,
                 const std::string& manifest_path, const std::string& split) {
  const RunConfig cfg = load_config(g);
  if (paths.empty()) throw ConfigError("compare needs at least one --checkpoint");
  if (!labels.empty() && labels.size() != paths.size()) throw ConfigError("give one --label per --checkpoint");
  std::vector<train::LabeledCheckpoint> entries;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    train::Checkpoint ckpt = train::load_checkpoint(paths[i]);
    std::string label = labels.empty() ? train::train_config_from_json(ckpt.config).generator.label() : labels[i];
    if (!seen.insert(label).second) label += " [" + fs::path(paths[i]).stem().string() + "]";
    entries.push_back({label, std::move(ckpt)});
  }
  const std::vector<data::ImagePair> pairs =
      load_split(cfg, resolve_manifest(cfg, optional_path(manifest_path)), data::parse_split_role(split));
  const std::vector<train::ComparisonRow> rows = train::compare(entries, pairs);

  const fs::path run = open_run(g, cfg, train::config_hash(cfg.train));
  const std::string table = train::render_comparison(rows);
  std::ofstream md(run / "reports" / "comparison.md");
  md << table;
  if (!md) throw IoError("cannot write comparison table");
  train::write_comparison_csv(rows, run / "reports" / "comparison.csv");
  std::cout << table;
}

// ---------------------------------------------------------------- plot

void cmd_plot(const Globals& g, const std::string& log_path, const std::string& checkpoint,
              const std::string& manifest_path, const std::string& split, int count) {
  const RunConfig cfg = load_config(g);
  const train::TrainLog log = train::read_train_log_csv(log_path);
  std::string hash = train::config_hash(cfg.train);
  std::vector<train::PlotSample> samples;
  if (!checkpoint.empty()) {
    const train::Checkpoint ckpt = train::load_checkpoint(checkpoint);
    hash = ckpt.config_hash;
    const std::vector<data::ImagePair> pairs =
        load_split(cfg, resolve_manifest(cfg, optional_path(manifest_path)), data::parse_split_role(split));
    samples = plot_samples(train::generator_from_checkpoint(ckpt), pairs, static_cast<std::size_t>(std::max(0, count)));
  }
  const fs::path run = open_run(g, cfg, hash);
  const auto files = train::emit_plots(log, samples, run / "plots", hash8(hash));
  std::cout << "wrote " << files.size() << " plots to " << (run / "plots").string() << std::endl;
}

// ---------------------------------------------------------------- init

void cmd_init(const Globals& g, bool zero_tail) {
  const RunConfig cfg = load_config(g);
  const train::Checkpoint ckpt = train::initial_checkpoint(cfg.train, zero_tail);
  const fs::path run = open_run(g, cfg, ckpt.config_hash);
  const fs::path path = run / "checkpoints" / "init.ckpt";
  train::save_checkpoint(ckpt, path);
  std::cout << "checkpoint: " << path.string() << std::endl;
}

}  // namespace

int cli_dispatch(int argc, char** argv) {
  CLI::App app{"Cloud removal with a spatial-attention GAN: data preparation, training, evaluation and cloud detection."};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", "cloudgan 1.0.0");

  Globals g;
  app.add_option("--config", g.config, "JSON run configuration (defaults when omitted)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed for training streams, split shuffle and synthesis");
  app.add_option("--out", g.out, "Parent directory of run directories; CLOUDGAN_OUT overrides it")->capture_default_str();

  std::function<void()> action;

  auto* dataset = app.add_subcommand("dataset", "Dataset preparation");
  dataset->require_subcommand(1);

  std::string synth_root;
  int synth_count = 12;
  int synth_size = 512;
  double synth_opacity = data::SyntheticOptions{}.max_opacity;
  auto* synth = dataset->add_subcommand("synth", "Write procedurally generated cloudy/clean pairs");
  synth->add_option("--root", synth_root, "Dataset root to create")->required();
  synth->add_option("--count", synth_count, "Number of pairs")->capture_default_str();
  synth->add_option("--size", synth_size, "Image side in pixels")->capture_default_str();
  synth->add_option("--max-opacity", synth_opacity, "Peak cloud opacity in (0, 1]")->capture_default_str();
  synth->callback([&] { action = [&] { cmd_dataset_synth(g, synth_root, synth_count, synth_size, synth_opacity); }; });

  SplitArgs split_args;
  auto* split = dataset->add_subcommand("split", "Pair cloud/ and label/ files and assign TRAIN/VAL");
  split->add_option("--root", split_args.root, "Dataset root (default: dataset.root)");
  split->add_option("--manifest", split_args.manifest, "Output manifest path (default: <root>/manifest.json)");
  split->add_option("--train", split_args.train_count, "TRAIN size (default: dataset.train_count)");
  split->add_option("--val", split_args.val_count, "VAL size (default: dataset.val_count)");
  split->add_option("--pool", split_args.pool, "Leading sorted ids to draw from, 0 for all (default: dataset.pool)");
  split->callback([&] { action = [&] { cmd_dataset_split(g, split_args); }; });

  std::string train_manifest;
  std::string train_resume;
  auto* train_cmd = app.add_subcommand("train", "Adversarial training; writes checkpoints, logs, reports and plots");
  train_cmd->add_option("--manifest", train_manifest, "Pre-split manifest (default: config dataset section)");
  train_cmd->add_option("--resume", train_resume, "Continue from this checkpoint")->check(CLI::ExistingFile);
  train_cmd->callback([&] { action = [&] { cmd_train(g, train_manifest, train_resume); }; });

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "PSNR/SSIM of a checkpoint, the identity, or saved predictions on a split");
  eval->add_option("--checkpoint", eval_args.checkpoint, "Checkpoint to evaluate");
  eval->add_flag("--identity", eval_args.identity, "Score the cloudy inputs themselves");
  eval->add_option("--predictions", eval_args.predictions, "Directory of restored images named <id>.<ext>");
  eval->add_option("--manifest", eval_args.manifest, "Pre-split manifest (default: config dataset section)");
  eval->add_option("--split", eval_args.split, "train or val")->capture_default_str();
  eval->callback([&] { action = [&] { cmd_eval(g, eval_args); }; });

  InferArgs infer_args;
  auto* infer = app.add_subcommand("infer", "Restore images with a checkpoint");
  infer->add_option("--checkpoint", infer_args.checkpoint, "Checkpoint to run")->required();
  infer->add_option("--input", infer_args.input, "Image file or directory of images");
  infer->add_option("--split", infer_args.split, "Restore the cloudy images of a manifest split instead");
  infer->add_option("--manifest", infer_args.manifest, "Pre-split manifest used with --split");
  infer->add_flag("--attention", infer_args.attention, "Also write every attention map as a grayscale image");
  infer->add_option("--bit-depth", infer_args.bit_depth, "PNG bit depth of the outputs (8 or 16)")->capture_default_str();
  infer->callback([&] { action = [&] { cmd_infer(g, infer_args); }; });

  DetectArgs det;
  auto* detect_cmd = app.add_subcommand("detect", "Heuristic cloud masks for an RGB image or a band-stack tile root");
  detect_cmd->add_option("--input", det.input, "RGB image, or a directory <root>/<timestamp>/<band>.f32 + meta.json")->required();
  detect_cmd->add_flag("--series", det.series, "Temporal filtering across all fetched frames");
  detect_cmd->add_option("--from", det.from, "Earliest timestamp (inclusive)");
  detect_cmd->add_option("--to", det.to, "Latest timestamp (inclusive)");
  detect_cmd->add_option("--bands", det.bands, "Bands to fetch (default: all)")->delimiter(',');
  detect_cmd->add_option("--bbox", det.bbox, "Pixel window x0,y0,x1,y1")->delimiter(',');
  detect_cmd->add_option("--threshold", det.threshold, "Mask threshold (default: detect.threshold)");
  detect_cmd->add_option("--delta", det.delta, "Series margin over the temporal median (default: detect.delta)");
  detect_cmd->add_option("--rules", det.rules, "JSON band-rule list (default: detect.rules)");
  detect_cmd->callback([&] { action = [&] { cmd_detect(g, det); }; });

  std::vector<std::string> cmp_paths;
  std::vector<std::string> cmp_labels;
  std::string cmp_manifest;
  std::string cmp_split = "val";
  auto* compare = app.add_subcommand("compare", "PSNR/SSIM table over checkpoints plus the cloudy-input baseline");
  compare->add_option("--checkpoint", cmp_paths, "Checkpoint (repeatable)")->required();
  compare->add_option("--label", cmp_labels, "Row label per checkpoint (default: variant name)");
  compare->add_option("--manifest", cmp_manifest, "Pre-split manifest (default: config dataset section)");
  compare->add_option("--split", cmp_split, "train or val")->capture_default_str();
  compare->callback([&] { action = [&] { cmd_compare(g, cmp_paths, cmp_labels, cmp_manifest, cmp_split); }; });

  std::string plot_log;
  std::string plot_ckpt;
  std::string plot_manifest;
  std::string plot_split = "val";
  int plot_count = 3;
  auto* plot = app.add_subcommand("plot", "Loss and metric curves, triptychs and attention overlays");
  plot->add_option("--log", plot_log, "Training log CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--checkpoint", plot_ckpt, "Checkpoint for sample triptychs");
  plot->add_option("--manifest", plot_manifest, "Pre-split manifest (default: config dataset section)");
  plot->add_option("--split", plot_split, "Split the samples come from")->capture_default_str();
  plot->add_option("--samples", plot_count, "Number of sample triptychs")->capture_default_str();
  plot->callback([&] { action = [&] { cmd_plot(g, plot_log, plot_ckpt, plot_manifest, plot_split, plot_count); }; });

  bool zero_tail = false;
  auto* init = app.add_subcommand("init", "Write an untrained checkpoint");
  init->add_flag("--zero-tail", zero_tail, "Zero the output convolution so the generator is the identity");
  init->callback([&] { action = [&] { cmd_init(g, zero_tail); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    action();
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace cloudgan::cli
