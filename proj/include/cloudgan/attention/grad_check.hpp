#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cloudgan/attention/directional.hpp"

namespace cloudgan::attention {

/// Finite-difference verification of the hand-written backward passes.
///
/// Every check runs in double precision, uses the sum of all outputs as the
/// scalar loss and perturbs each input and parameter by +/- 1e-4 (central
/// differences). The relative error of one coordinate is
/// |analytic - numeric| / max(|analytic|, |numeric|, 1e-6).
struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t coordinates = 0;
};

inline constexpr double kFiniteDifferenceStep = 1e-4;

struct GradProbe {
  std::span<double> values;              // perturbed in place
  std::span<const double> analytic;      // gradient computed by backward()
};

/// Compares analytic gradients against central differences of loss().
GradCheckResult compare_with_finite_differences(const std::function<double()>& loss,
                                                std::span<const GradProbe> probes,
                                                double step = kFiniteDifferenceStep);

/// Input and gain gradients of directional_pass on a height x width x channels input.
GradCheckResult grad_check_directional(Direction step, std::uint64_t seed, int height = 1, int width = 4,
                                       int channels = 1);

/// Input and all parameter gradients of a SAB on a 4x4x2 input.
GradCheckResult grad_check_sab(NeighborhoodMode mode, std::uint64_t seed);

/// Input, attention and conv parameter gradients of a SARB on a 4x4x2 input.
GradCheckResult grad_check_sarb(std::uint64_t seed);

/// Analytic gradient of sum(sarb_forward(x, 0, p)) with respect to conv_a
/// (weights then bias, concatenated). A closed gate makes it exactly zero.
std::vector<double> sarb_conv_a_gradient_with_closed_gate(std::uint64_t seed);

}  // namespace cloudgan::attention
