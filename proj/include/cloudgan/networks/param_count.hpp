#pragma once

#include <cstddef>

#include "cloudgan/networks/discriminator.hpp"
#include "cloudgan/networks/generator.hpp"

namespace cloudgan::networks {

/// Learnable scalars of the generator described by cfg, derived from layer shapes.
std::size_t count_params(const GeneratorConfig& cfg);
std::size_t count_params(const DiscriminatorConfig& cfg, int in_channels = 3);

}  // namespace cloudgan::networks
