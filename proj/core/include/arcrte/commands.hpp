#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "arcrte/config.hpp"
#include "arcrte/io.hpp"
#include "arcrte/phantom.hpp"
#include "arcrte/pipeline.hpp"

namespace arcrte::harness {

struct Synthesis {
  forward::BoundaryMeasurement measurement;
  int forward_triangles = 0;
  int iterations = 0;
  int moments = 0;
  std::vector<double> history;
  double seconds = 0.0;
};

/// Forward solve on a disk mesh plus trace extraction and optional noise.
Synthesis synthesize(const RunConfig& cfg);

struct SectionStats {
  std::string name;
  double expected = 0.0;
  double mean = 0.0, min = 0.0, max = 0.0;
  int samples = 0;
  /// Largest |value / expected - 1| over the window's samples.
  double max_rel_dev = 0.0;
};

struct ReconstructReport {
  std::vector<pipeline::Reconstruction> runs;
  std::vector<std::pair<int, double>> sweep;  // (M, ||Im q||)
  std::size_t selected = 0;
  std::vector<SectionStats> section;
  std::vector<double> section_t, section_q;

  const pipeline::Reconstruction& best() const { return runs.at(selected); }
};

/// Runs the pipeline at a fixed M or over the sweep and picks the argmin of
/// ||Im q||. Section windows are evaluated for the standard phantom.
ReconstructReport reconstruct(const RunConfig& cfg, const forward::BoundaryMeasurement& meas,
                              pipeline::Reconstructor* reuse = nullptr);

std::vector<SectionStats> section_stats(const pipeline::Reconstructor& rec, const Eigen::VectorXd& q,
                                        double rotation, int samples, std::vector<double>* t_out = nullptr,
                                        std::vector<double>* q_out = nullptr);

std::vector<io::CondRow> cond_study(const std::vector<int>& Ns, const std::vector<double>& eps,
                                    const std::vector<csie::Variant>& variants);

// File-writing drivers. They log a short summary to `log` and throw
// ConfigError / NumericalError on failure.
void cmd_synthesize(const RunConfig& cfg, std::ostream& log);
void cmd_reconstruct(const RunConfig& cfg, const std::string& measurement, std::ostream& log);
void cmd_cond_study(const RunConfig& cfg, const std::vector<int>& Ns, const std::vector<double>& eps,
                    const std::vector<csie::Variant>& variants, std::ostream& log);
void cmd_select_m(const RunConfig& cfg, const std::string& measurement, std::ostream& log);
void cmd_mesh_export(const RunConfig& cfg, std::ostream& log);

}  // namespace arcrte::harness
