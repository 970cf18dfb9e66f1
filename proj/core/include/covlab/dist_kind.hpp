#pragma once

#include <optional>
#include <string_view>

namespace covlab {

/// Population distribution of the whitened vector driving the observations.
enum class DistKind { TruncLaplace = 0, UniformSphere = 1, Gaussian = 2 };

constexpr std::string_view dist_name(DistKind kind) {
  switch (kind) {
    case DistKind::TruncLaplace: return "trunc_laplace";
    case DistKind::UniformSphere: return "uniform_sphere";
    case DistKind::Gaussian: return "gaussian";
  }
  return "unknown";
}

std::optional<DistKind> dist_from_name(std::string_view name);

}  // namespace covlab
