#pragma once

#include <optional>
#include <string>

#include "arcrte/csie.hpp"
#include "arcrte/forward.hpp"
#include "arcrte/pipeline.hpp"

namespace arcrte::harness {

/// Flat key = value run configuration. Unknown keys are rejected.
struct RunConfig {
  std::string phantom = "standard";
  double rotation = 0.0;
  int K = 314;
  int T = 360;
  int N = 500;
  int S = 175;         // 0 selects S from the table decay
  int M = 0;           // 0 runs the sweep [M_lo, M_hi] and keeps the argmin
  int M_lo = 4;
  int M_hi = 20;
  std::optional<double> epsilon;  // unset: 0 for cut-off, 0.01 for ex-log
  csie::Variant variant = csie::Variant::CutOff;
  csie::RhsMode rhs = csie::RhsMode::Midpoint;
  int mesh_target = 8000;
  int hilbert_nodes = 100;
  double s_threshold = 0.01;
  int forward_triangles = 100000;
  int T_f = 360;
  forward::Scheme scheme = forward::Scheme::Gmres;
  double forward_tol = 1e-8;
  int forward_max_iter = 500;
  double noise = 0.0;  // uniform additive noise, relative to max outflow
  unsigned long long seed = 0;
  std::string out = "out";
  int threads = 0;

  double effective_epsilon() const;
  /// Throws ConfigError on any violated constraint.
  void validate() const;

  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
  std::string serialize() const;
  /// Applies one key = value assignment.
  void set(const std::string& key, const std::string& value);

  pipeline::ReconstructOptions reconstruct_options() const;
  forward::ForwardOptions forward_options() const;

  bool operator==(const RunConfig&) const = default;
};

}  // namespace arcrte::harness
