#include "cloudgan/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cloudgan/core/rng.hpp"
#include "cloudgan/metrics/losses.hpp"

namespace cloudgan::train {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kGeneratorPrefix = "generator/";
constexpr const char* kDiscriminatorPrefix = "discriminator/";
constexpr const char* kGeneratorAdamPrefix = "adam.generator/";
constexpr const char* kDiscriminatorAdamPrefix = "adam.discriminator/";
constexpr const char* kLogHeader = "epoch,g_adv,d_adv,l1,att,val_psnr,val_ssim,wall_seconds";

AdamOptions adam_options(const TrainConfig& cfg) {
  return {cfg.lr, cfg.beta1, cfg.beta2, cfg.adam_epsilon, cfg.grad_clip};
}

Tensor<float> scaled(Tensor<float> t, double factor) {
  for (auto& v : t.storage()) v = static_cast<float>(v * factor);
  return t;
}

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json losses_json(const StepLosses& l) {
  const auto val = [](double v) { return std::isfinite(v) ? json(v) : json(number(v)); };
  return {{"g_adv", val(l.g_adv)}, {"d_adv", val(l.d_adv)}, {"l1", val(l.l1)}, {"att", val(l.att)}};
}

}  // namespace

bool StepLosses::finite() const {
  return std::isfinite(g_adv) && std::isfinite(d_adv) && std::isfinite(l1) && std::isfinite(att);
}

void write_train_log_csv(const TrainLog& log, const fs::path& path, bool append) {
  const bool fresh = !append || !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw IoError("cannot write training log " + path.string());
  if (fresh) out << kLogHeader << '\n';
  for (const auto& r : log) {
    out << r.epoch << ',' << number(r.g_adv) << ',' << number(r.d_adv) << ',' << number(r.l1) << ','
        << number(r.att) << ',' << number(r.val_psnr) << ',' << number(r.val_ssim) << ',' << number(r.wall_seconds)
        << '\n';
  }
  if (!out) throw IoError("cannot write training log " + path.string());
}

TrainLog read_train_log_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("missing training log " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != kLogHeader) throw ConfigError("unexpected training log header in " + path.string());
  TrainLog log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
    if (v.size() != 8) throw ConfigError("malformed training log row '" + line + "'");
    log.push_back({static_cast<int>(v[0]), v[1], v[2], v[3], v[4], v[5], v[6], v[7]});
  }
  return log;
}

Trainer::Trainer(TrainConfig cfg, std::vector<data::ImagePair> train, std::vector<data::ImagePair> val)
    : cfg_((cfg.validate(), std::move(cfg))),
      hash_(config_hash(cfg_)),
      train_(std::move(train)),
      val_(std::move(val)),
      generator_(cfg_.generator),
      discriminator_(cfg_.discriminator),
      g_opt_(generator_.params(), adam_options(cfg_)),
      d_opt_(discriminator_.params(), adam_options(cfg_)) {}

void Trainer::initialize() {
  Rng g_rng(derive_seed(cfg_.seed, "generator-init"));
  Rng d_rng(derive_seed(cfg_.seed, "discriminator-init"));
  generator_.init(g_rng);
  discriminator_.init(d_rng);
  epoch_ = 0;
}

void Trainer::restore(const Checkpoint& ckpt) {
  if (ckpt.config_hash != hash_) {
    throw ConfigError("checkpoint config hash " + ckpt.config_hash.substr(0, 8) + " does not match config " +
                      hash_.substr(0, 8));
  }
  restore_params(ckpt, kGeneratorPrefix, generator_.params());
  restore_params(ckpt, kDiscriminatorPrefix, discriminator_.params());
  try {
    g_opt_.load(ckpt, kGeneratorAdamPrefix, ckpt.optimizer.at("generator_steps").get<std::int64_t>());
    d_opt_.load(ckpt, kDiscriminatorAdamPrefix, ckpt.optimizer.at("discriminator_steps").get<std::int64_t>());
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint optimizer header is malformed: ") + e.what());
  }
  epoch_ = ckpt.epoch;
  last_metrics_ = ckpt.metrics;
}

Checkpoint Trainer::snapshot() {
  Checkpoint ckpt;
  ckpt.epoch = epoch_;
  ckpt.config_hash = hash_;
  ckpt.config = to_json(cfg_);
  ckpt.metrics = last_metrics_;
  ckpt.optimizer = {{"generator_steps", g_opt_.steps()}, {"discriminator_steps", d_opt_.steps()}};
  store_params(ckpt, kGeneratorPrefix, generator_.params());
  store_params(ckpt, kDiscriminatorPrefix, discriminator_.params());
  g_opt_.save(ckpt, kGeneratorAdamPrefix);
  d_opt_.save(ckpt, kDiscriminatorAdamPrefix);
  return ckpt;
}

StepLosses Trainer::step(const std::vector<data::ImagePair>& batch) {
  struct Sample {
    Tensor<float> real;
    Tensor<float> target;
    networks::Generator<float>::Trace trace;
    networks::GeneratorOutput<float> out;
  };
  const double inv = 1.0 / static_cast<double>(batch.size());
  std::vector<Sample> samples(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    auto& s = samples[i];
    s.real = data::to_model_range(batch[i].clean);
    s.target = metrics::attention_target(batch[i], cfg_.weights.attention_tau);
    s.out = generator_.forward(data::to_model_range(batch[i].cloudy), &s.trace);
  }

  StepLosses losses;
  zero_grads(discriminator_.params());
  for (auto& s : samples) {
    networks::Discriminator<float>::Trace real_trace;
    networks::Discriminator<float>::Trace fake_trace;
    const Tensor<float> real_scores = discriminator_.forward(s.real, &real_trace);
    const Tensor<float> fake_scores = discriminator_.forward(s.out.image, &fake_trace);
    losses.d_adv += inv * metrics::gan_losses(real_scores, fake_scores).d_adv;
    discriminator_.backward(real_trace, scaled(metrics::discriminator_real_grad(real_scores), inv), false);
    discriminator_.backward(fake_trace, scaled(metrics::discriminator_fake_grad(fake_scores), inv), false);
  }
  d_opt_.step();

  zero_grads(generator_.params());
  for (auto& s : samples) {
    networks::Discriminator<float>::Trace fake_trace;
    const Tensor<float> scores = discriminator_.forward(s.out.image, &fake_trace);
    // The real-score term of gan_losses is unused here; only g_adv matters.
    losses.g_adv += inv * metrics::gan_losses(scores, scores).g_adv;
    Tensor<float> grad_image =
        discriminator_.backward(fake_trace, scaled(metrics::generator_adv_grad(scores), inv), true);

    losses.l1 += inv * metrics::l1_loss(s.out.image, s.real);
    grad_image += scaled(metrics::l1_loss_grad(s.out.image, s.real), cfg_.weights.lambda_l1 * inv);

    losses.att += inv * metrics::attention_loss(s.out.attention_maps, s.target);
    auto att_grads = metrics::attention_loss_grads(s.out.attention_maps, s.target);
    for (auto& g : att_grads) g = scaled(std::move(g), cfg_.weights.lambda_att * inv);

    generator_.backward(s.trace, grad_image, att_grads);
  }
  return losses;
}

TrainResult Trainer::run(const std::optional<fs::path>& checkpoint_dir, const TrainHooks& hooks) {
  if (train_.empty()) throw DataError("training split is empty");
  if (val_.empty()) throw DataError("validation split is empty");
  const fs::path last = checkpoint_dir ? *checkpoint_dir / "last.ckpt" : fs::path();
  if (checkpoint_dir) {
    std::error_code ec;
    fs::create_directories(*checkpoint_dir, ec);
    if (ec) throw IoError("cannot create checkpoint directory " + checkpoint_dir->string());
    if (epoch_ == 0) save_checkpoint(snapshot(), last);
  }

  TrainLog log;
  for (int epoch = epoch_ + 1; epoch <= cfg_.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();

    std::vector<std::size_t> order(train_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng order_rng(derive_seed(cfg_.seed, "order", static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[order_rng.bounded(i)]);

    StepLosses sums;
    int steps = 0;
    for (std::size_t first = 0; first < order.size(); first += cfg_.batch_size) {
      std::vector<data::ImagePair> batch;
      for (std::size_t k = first; k < std::min(order.size(), first + cfg_.batch_size); ++k) {
        const auto& pair = train_[order[k]];
        const int crop = std::min({cfg_.crop, pair.cloudy.height(), pair.cloudy.width()});
        batch.push_back(data::augment(pair, crop, derive_seed(cfg_.seed, "augment", epoch, order[k]), cfg_.flip));
      }
      StepLosses losses = step(batch);
      if (hooks.on_step) hooks.on_step(epoch, steps, losses);
      if (!losses.finite()) {
        if (checkpoint_dir) {
          std::ofstream diag(*checkpoint_dir / "abort.json");
          diag << json{{"epoch", epoch},
                       {"step", steps},
                       {"losses", losses_json(losses)},
                       {"last_good_checkpoint", last.string()},
                       {"last_good_epoch", epoch_}}
                      .dump(2)
               << '\n';
        }
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", step " + std::to_string(steps) +
                           "; last good checkpoint is epoch " + std::to_string(epoch_));
      }
      g_opt_.step();
      sums.g_adv += losses.g_adv;
      sums.d_adv += losses.d_adv;
      sums.l1 += losses.l1;
      sums.att += losses.att;
      ++steps;
    }

    const auto report = metrics::evaluate(generator_, val_);
    TrainLogRow row{epoch,
                    sums.g_adv / steps,
                    sums.d_adv / steps,
                    sums.l1 / steps,
                    sums.att / steps,
                    report.mean_psnr_db,
                    report.mean_ssim,
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()};
    epoch_ = epoch;
    last_metrics_ = {{"val_psnr_db", std::isfinite(row.val_psnr) ? json(row.val_psnr) : json("inf")},
                     {"val_ssim", row.val_ssim}};
    if (checkpoint_dir) save_checkpoint(snapshot(), last);
    log.push_back(row);
    if (hooks.on_epoch) hooks.on_epoch(row);
  }
  return {snapshot(), log};
}

TrainResult train(const TrainConfig& cfg, std::vector<data::ImagePair> train_pairs,
                  std::vector<data::ImagePair> val_pairs, const std::optional<fs::path>& checkpoint_dir,
                  const TrainHooks& hooks) {
  Trainer trainer(cfg, std::move(train_pairs), std::move(val_pairs));
  trainer.initialize();
  return trainer.run(checkpoint_dir, hooks);
}

TrainResult resume(const Checkpoint& ckpt, const TrainConfig& cfg, std::vector<data::ImagePair> train_pairs,
                   std::vector<data::ImagePair> val_pairs, const std::optional<fs::path>& checkpoint_dir,
                   const TrainHooks& hooks) {
  Trainer trainer(cfg, std::move(train_pairs), std::move(val_pairs));
  trainer.restore(ckpt);
  if (ckpt.epoch >= cfg.epochs) return {ckpt, {}};
  return trainer.run(checkpoint_dir, hooks);
}

networks::Generator<float> generator_from_checkpoint(const Checkpoint& ckpt) {
  const TrainConfig cfg = train_config_from_json(ckpt.config);
  networks::Generator<float> generator(cfg.generator);
  restore_params(ckpt, kGeneratorPrefix, generator.params());
  return generator;
}

Checkpoint initial_checkpoint(const TrainConfig& cfg, bool zero_tail) {
  Trainer trainer(cfg, {}, {});
  trainer.initialize();
  if (zero_tail) trainer.generator().zero_tail();
  return trainer.snapshot();
}

InferenceResult infer(const networks::Generator<float>& generator, const data::Raster& raster) {
  if (raster.channels() != 3) {
    throw ShapeError("inference expects a 3-channel image, got " + std::to_string(raster.channels()) + " channels");
  }
  const auto out = generator.forward(data::to_model_range(raster));
  InferenceResult result{data::from_model_range(out.image), {}};
  for (const auto& map : out.attention_maps) result.attention_maps.push_back(data::Raster::clamped(map));
  return result;
}

InferenceResult infer(const Checkpoint& ckpt, const data::Raster& raster) {
  return infer(generator_from_checkpoint(ckpt), raster);
}

std::vector<ComparisonRow> compare(std::span<const LabeledCheckpoint> checkpoints,
                                   std::span<const data::ImagePair> pairs) {
  if (checkpoints.empty()) throw ConfigError("compare needs at least one checkpoint");
  std::vector<ComparisonRow> rows;
  const auto baseline = metrics::evaluate_identity(pairs);
  rows.push_back({kBaselineLabel, baseline.mean_psnr_db, baseline.mean_ssim, baseline.per_image.size()});
  for (const auto& entry : checkpoints) {
    const auto generator = generator_from_checkpoint(entry.checkpoint);
    const auto report = metrics::evaluate(generator, pairs);
    rows.push_back({entry.label, report.mean_psnr_db, report.mean_ssim, report.per_image.size()});
  }
  return rows;
}

std::string render_comparison(std::span<const ComparisonRow> rows) {
  std::size_t width = 1;
  for (const auto& r : rows) width = std::max(width, r.label.size());
  const auto pad = [&](const std::string& s) { return s + std::string(width - s.size(), ' '); };
  std::ostringstream out;
  out << "| " << pad("") << " | PSNR    | SSIM   |\n";
  out << "|-" << std::string(width, '-') << "-|---------|--------|\n";
  for (const auto& r : rows) {
    std::string p = metrics::format_metric(r.mean_psnr_db, 4);
    std::string s = metrics::format_metric(r.mean_ssim, 4);
    p.resize(std::max<std::size_t>(p.size(), 7), ' ');
    s.resize(std::max<std::size_t>(s.size(), 6), ' ');
    out << "| " << pad(r.label) << " | " << p << " | " << s << " |\n";
  }
  return out.str();
}

void write_comparison_csv(std::span<const ComparisonRow> rows, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write comparison " + path.string());
  out << "label,mean_psnr_db,mean_ssim,n\n";
  for (const auto& r : rows) {
    out << '"' << r.label << "\"," << metrics::format_metric(r.mean_psnr_db, 10) << ','
        << metrics::format_metric(r.mean_ssim, 10) << ',' << r.n << '\n';
  }
}

}  // namespace cloudgan::train
