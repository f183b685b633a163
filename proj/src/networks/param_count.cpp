#include "cloudgan/networks/param_count.hpp"

#include "cloudgan/attention/directional.hpp"

namespace cloudgan::networks {
namespace {

std::size_t conv(std::size_t in, std::size_t out, std::size_t k) { return out * in * k * k + out; }

}  // namespace

std::size_t count_params(const GeneratorConfig& cfg) {
  cfg.validate();
  const std::size_t f = cfg.base_channels;
  const std::size_t dirs = attention::direction_count(cfg.mode);
  const std::size_t sab_round = conv(f, f, 1) + dirs * f + conv(dirs * f, f, 1);
  const std::size_t sab = attention::Sab<float>::kDefaultRounds * sab_round + conv(f, 1, 1);
  const std::size_t sarb = 2 * conv(f, f, 3);
  const std::size_t stage = sab + cfg.sarbs_per_stage * sarb;
  return conv(3, f, 3) + cfg.stage_count() * stage + conv(f, 3, 3);
}

std::size_t count_params(const DiscriminatorConfig& cfg, int in_channels) {
  cfg.validate();
  std::size_t total = 0;
  std::size_t channels = in_channels;
  for (int i = 0; i < cfg.layers; ++i) {
    total += conv(channels, cfg.channels_at(i), 4);
    channels = cfg.channels_at(i);
  }
  return total + conv(channels, 1, 3);
}

}  // namespace cloudgan::networks
