/*
 * Copyright 2026 The MMC Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Synthetic benchmark families. Coordinates are generated in a unit-scale
// frame and then min-max normalized, so only relative geometry matters.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "mmc/data.hpp"
#include "mmc/error.hpp"
#include "mmc/rng.hpp"

namespace mmc::data {

namespace {

using Sampler = std::function<void(CounterRng&, Eigen::Ref<Eigen::RowVectorXd>)>;

struct Component {
  double weight;
  Sampler sample;
};

Sampler gaussian2d(double cx, double cy, double sd) {
  return [=](CounterRng& rng, Eigen::Ref<Eigen::RowVectorXd> p) {
    p(0) = cx + sd * rng.normal();
    p(1) = cy + sd * rng.normal();
  };
}

// Points uniform in angle on a circular arc, with radial Gaussian jitter.
Sampler arc2d(double cx, double cy, double radius, double jitter, double from_rad,
              double to_rad) {
  return [=](CounterRng& rng, Eigen::Ref<Eigen::RowVectorXd> p) {
    const double angle = rng.uniform(from_rad, to_rad);
    const double r = radius + jitter * rng.normal();
    p(0) = cx + r * std::cos(angle);
    p(1) = cy + r * std::sin(angle);
  };
}

// Gaussian on dims [signal_begin, signal_begin + width), uniform elsewhere.
Sampler subspace_gaussian(Index dim, Index signal_begin, Index width, double mean,
                          double sd) {
  return [=](CounterRng& rng, Eigen::Ref<Eigen::RowVectorXd> p) {
    for (Index j = 0; j < dim; ++j) {
      const bool signal = j >= signal_begin && j < signal_begin + width;
      p(j) = signal ? mean + sd * rng.normal() : rng.uniform();
    }
  };
}

constexpr double kPi = std::numbers::pi;

std::vector<Component> components_for(const SyntheticSpec& spec, Index& dim) {
  switch (spec.family) {
    case Family::two_gaussians_varied_density:
      // Touching dense/sparse pair; sparse spread 2.2x wider (4.84:1 peak
      // density, so sampled ratios stay above 4:1).
      dim = 2;
      return {{1.0, gaussian2d(0.0, 0.0, 0.05)},
              {1.0, gaussian2d(0.30, 0.0, 0.11)}};
    case Family::three_gaussians_3G:
      // Two dense blobs 5 sd apart, one distant sparse blob.
      dim = 2;
      return {{1.0, gaussian2d(0.0, 0.0, 0.01)},
              {1.0, gaussian2d(0.05, 0.0, 0.01)},
              {1.0, gaussian2d(0.70, 0.40, 0.15)}};
    case Family::ring_gaussians_RingG:
      // Overlapping dense pair at the center of two concentric sparse rings.
      dim = 2;
      return {{1.0, gaussian2d(-0.06, 0.0, 0.025)},
              {1.0, gaussian2d(0.06, 0.0, 0.025)},
              {1.0, arc2d(0.0, 0.0, 0.25, 0.015, 0.0, 2 * kPi)},
              {1.0, arc2d(0.0, 0.0, 0.42, 0.015, 0.0, 2 * kPi)}};
    case Family::subspace_gaussian: {
      if (spec.d_noise < 1) throw ConfigError("subspace_gaussian needs d_noise >= 1");
      const Index width = spec.d_noise;
      dim = 2 * width;
      return {{1.0, subspace_gaussian(dim, 0, width, 0.5, 0.11)},
              {1.0, subspace_gaussian(dim, width, width, 0.5, 0.11)}};
    }
    case Family::scaleup_arc_mix:
      dim = 2;
      return {{1.0, gaussian2d(0.30, 0.30, 0.05)},
              {1.0, gaussian2d(0.70, 0.30, 0.05)},
              {1.0, arc2d(0.50, 0.35, 0.38, 0.02, kPi * 0.1, kPi * 0.9)}};
  }
  throw ConfigError("unknown synthetic family");
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::two_gaussians_varied_density: return "two_gaussians_varied_density";
    case Family::three_gaussians_3G: return "three_gaussians_3G";
    case Family::ring_gaussians_RingG: return "ring_gaussians_RingG";
    case Family::subspace_gaussian: return "subspace_gaussian";
    case Family::scaleup_arc_mix: return "scaleup_arc_mix";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (Family f : {Family::two_gaussians_varied_density, Family::three_gaussians_3G,
                   Family::ring_gaussians_RingG, Family::subspace_gaussian,
                   Family::scaleup_arc_mix}) {
    if (family_name(f) == name) return f;
  }
  if (name == "3G") return Family::three_gaussians_3G;
  if (name == "RingG") return Family::ring_gaussians_RingG;
  if (name == "2Gaussians") return Family::two_gaussians_varied_density;
  return std::nullopt;
}

int family_cluster_count(Family family) {
  switch (family) {
    case Family::two_gaussians_varied_density: return 2;
    case Family::three_gaussians_3G: return 3;
    case Family::ring_gaussians_RingG: return 4;
    case Family::subspace_gaussian: return 2;
    case Family::scaleup_arc_mix: return 3;
  }
  return 0;
}

Dataset generate_synthetic(const SyntheticSpec& spec, Index n, std::uint64_t seed) {
  Index dim = 0;
  const auto comps = components_for(spec, dim);
  const Index k = static_cast<Index>(comps.size());
  if (n < k) {
    throw ConfigError("family " + std::string(family_name(spec.family)) + " needs n >= " +
                      std::to_string(k) + ", got " + std::to_string(n));
  }

  // Floor share per component, leftover points dealt round-robin.
  double total_weight = 0;
  for (const auto& c : comps) total_weight += c.weight;
  std::vector<Index> counts(static_cast<std::size_t>(k));
  Index assigned = 0;
  for (Index c = 0; c < k; ++c) {
    counts[c] = static_cast<Index>(std::floor(n * comps[c].weight / total_weight));
    counts[c] = std::max<Index>(counts[c], 1);
    assigned += counts[c];
  }
  for (Index c = 0; assigned < n; c = (c + 1) % k, ++assigned) ++counts[c];
  for (Index c = k - 1; assigned > n; c = (c + k - 1) % k) {
    if (counts[c] > 1) {
      --counts[c];
      --assigned;
    }
  }

  Dataset out;
  out.name = std::string(family_name(spec.family));
  if (spec.family == Family::subspace_gaussian) {
    out.name += "_d" + std::to_string(spec.d_noise);
  }
  out.points.resize(n, dim);
  std::vector<int> labels(static_cast<std::size_t>(n));
  Index row = 0;
  Eigen::RowVectorXd p(dim);
  for (Index c = 0; c < k; ++c) {
    // One stream per component keeps clusters independent of each other's sizes.
    CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    for (Index i = 0; i < counts[c]; ++i, ++row) {
      comps[c].sample(rng, p);
      out.points.row(row) = p;
      labels[row] = static_cast<int>(c);
    }
  }
  out.labels = std::move(labels);
  return normalize_minmax(std::move(out));
}

}  // namespace mmc::data
