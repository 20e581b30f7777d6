#include "arcrte/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arcrte::pipeline {

using reconstruct::ModeTrace;
using reconstruct::P1Field;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

csie::CsieSystem make_system(const ReconstructOptions& o, double c) {
  return o.variant == csie::Variant::CutOff ? csie::CsieSystem::cutoff(o.N, o.epsilon, c)
                                            : csie::CsieSystem::exlog(o.N, o.epsilon, c);
}

}  // namespace

void StageTimes::add(const std::string& name, double seconds) {
  for (auto& e : entries)
    if (e.first == name) {
      e.second += seconds;
      return;
    }
  entries.emplace_back(name, seconds);
}

double StageTimes::get(const std::string& name) const {
  for (const auto& e : entries)
    if (e.first == name) return e.second;
  return 0.0;
}

std::string StageTimes::largest(bool include_tables) const {
  std::string best;
  double t = -1.0;
  for (const auto& e : entries) {
    if (!include_tables && e.first == "tables") continue;
    if (e.second > t) {
      t = e.second;
      best = e.first;
    }
  }
  return best;
}

Reconstructor::Reconstructor(const transforms::MediumModel& medium, const geometry::Arc& arc, int T,
                             ReconstructOptions opts)
    : geo_(geometry::normalize(medium.domain, arc, opts.N)),
      T_(T),
      opts_(opts),
      sys_(make_system(opts, geo_.chord.c)) {
  if (opts_.M_min < 1) throw ConfigError("M must be >= 1");
  if (opts_.variant == csie::Variant::ExLog && opts_.N < 3) throw ConfigError("ex-log needs N >= 3");
  medium_n_ = medium.transformed(geo_.motion);
  mesh_ = geometry::fan_mesh(geo_.arc, geo_.chord, opts_.mesh_target);
  const auto& tri = mesh_.tri;

  // Interior vertices and the near-contour flag.
  const auto diam = tri.diameters();
  std::vector<double> width(tri.num_vertices(), 0.0);
  for (int l = 0; l < tri.num_triangles(); ++l)
    for (int v : tri.triangles()[l]) width[v] = std::max(width[v], diam[l]);
  const auto& D = geo_.disk;
  for (int v = 0; v < tri.num_vertices(); ++v) {
    if (tri.kinds()[v] != geometry::VertexKind::Interior) continue;
    const cplx z = tri.vertices()[v];
    const double dist = std::min(z.imag(), D.radius - std::abs(z - D.center));
    interior_.push_back(v);
    flag_.push_back(dist < 2.0 * width[v]);
  }

  std::vector<bool> vflag(tri.num_vertices(), false);
  for (std::size_t i = 0; i < interior_.size(); ++i) vflag[interior_[i]] = flag_[i];
  exclude_.assign(tri.num_triangles(), false);
  for (int l = 0; l < tri.num_triangles(); ++l)
    for (int v : tri.triangles()[l]) exclude_[l] = exclude_[l] || vflag[v];

  const auto t0 = Clock::now();
  std::vector<cplx> chord_pts(opts_.N);
  for (int n = 0; n < opts_.N; ++n) chord_pts[n] = geo_.chord.node(n);
  const auto& arc_pts = geo_.arc.points();
  if (opts_.S > 0) {
    S_ = opts_.S;
    if (T_ < 2 * S_) throw ConfigError("T must be >= 2S");
    if (S_ < opts_.M_min + 3) throw ConfigError("S must be >= M + 3");
    tab_ = transforms::alpha_beta_tables(medium_n_, arc_pts, tri.vertices(), chord_pts, T_, S_,
                                         opts_.M_min, opts_.hilbert_nodes);
  } else {
    // Tabulate to the Nyquist mode, then truncate at the selected S.
    const int cap = T_ / 2;
    tab_.alpha = transforms::integrating_factor_modes(medium_n_, arc_pts, T_, cap, -1, opts_.hilbert_nodes);
    tab_.beta = transforms::integrating_factor_modes(medium_n_, tri.vertices(), T_, cap, +1, opts_.hilbert_nodes);
    S_ = reconstruct::select_S(tab_.alpha, tab_.beta, opts_.s_threshold, opts_.M_min);
    const int nb = S_ - opts_.M_min - 2;
    tab_.alpha.conservativeResize(Eigen::NoChange, S_ + 1);
    tab_.beta.conservativeResize(Eigen::NoChange, nb + 1);
    tab_.beta_chord = transforms::integrating_factor_modes(medium_n_, chord_pts, T_, nb, +1, opts_.hilbert_nodes);
  }
  {
    const auto na = transforms::column_max_abs(tab_.alpha);
    const auto nb = transforms::column_max_abs(tab_.beta);
    decay_.resize(na.size());
    for (std::size_t m = 0; m < na.size(); ++m) decay_[m] = std::max(na[m], m < nb.size() ? nb[m] : 0.0);
  }
  table_seconds_ = since(t0);

  beta_int_.resize(static_cast<Eigen::Index>(interior_.size()), tab_.beta.cols());
  for (std::size_t i = 0; i < interior_.size(); ++i) beta_int_.row(i) = tab_.beta.row(interior_[i]);

  fit_ = std::make_unique<reconstruct::BoundaryFit>(mesh_, geo_.arc, geo_.chord);
  const int L = tri.num_triangles();
  mu_s_c_.resize(L);
  mu_t_c_.resize(L);
  for (int l = 0; l < L; ++l) {
    const cplx r = tri.centroids()[l];
    mu_s_c_(l) = medium_n_.mu_s(r);
    mu_t_c_(l) = medium_n_.mu_t(r);
  }
}

void Reconstructor::ensure_kernels() {
  if (k_int_) return;
  std::vector<cplx> chord_pts(opts_.N), int_pts;
  for (int n = 0; n < opts_.N; ++n) chord_pts[n] = geo_.chord.node(n);
  for (int v : interior_) int_pts.push_back(mesh_.tri.vertices()[v]);
  k_chord_ = std::make_unique<reconstruct::PompeiuKernels>(mesh_.tri, geo_.arc, geo_.chord, chord_pts, false);
  k_int_ = std::make_unique<reconstruct::PompeiuKernels>(mesh_.tri, geo_.arc, geo_.chord, int_pts, true);
}

Reconstruction Reconstructor::run(const forward::BoundaryMeasurement& meas, int M) {
  return std::move(run(meas, M, M).front());
}

std::vector<Reconstruction> Reconstructor::run(const forward::BoundaryMeasurement& meas, int M_lo, int M_hi) {
  if (M_lo < opts_.M_min || M_hi < M_lo) throw ConfigError("invalid M range");
  if (M_hi > S_ - 3) throw ConfigError("M must be <= S - 3");
  if (meas.K != geo_.arc.size() || meas.T != T_)
    throw ConfigError("measurement shape does not match the reconstructor");
  const int S = S_, N = opts_.N;
  const auto& tri = mesh_.tri;
  StageTimes shared;
  shared.add("tables", table_seconds_);

  auto t = Clock::now();
  const ModeTrace I_arc = reconstruct::boundary_modes(meas, S, geo_.motion.angle);
  shared.add("boundary_modes", since(t));

  t = Clock::now();
  const ModeTrace J_arc = reconstruct::alpha_convolve(I_arc, tab_.alpha, M_lo, S);
  shared.add("alpha_convolve", since(t));

  t = Clock::now();
  const Eigen::MatrixXcd R = reconstruct::chord_rhs(J_arc, geo_.arc, geo_.chord, M_lo, S, opts_.rhs);
  shared.add("p_minus", since(t));

  t = Clock::now();
  auto J_chord = std::make_shared<ModeTrace>(reconstruct::Location::Chord, M_lo, S - 2, N);
  J_chord->values = sys_.solve(R);
  shared.add("chord_solve", since(t));

  t = Clock::now();
  std::vector<cplx> int_pts;
  for (int v : interior_) int_pts.push_back(tri.vertices()[v]);
  const ModeTrace J_int =
      reconstruct::interior_J(J_arc, *J_chord, geo_.arc, geo_.chord, int_pts, M_lo, S);
  shared.add("interior_J", since(t));

  t = Clock::now();
  ensure_kernels();
  const double kernel_time = since(t);

  const int nv = tri.num_vertices();
  const int flagged = static_cast<int>(std::count(flag_.begin(), flag_.end(), true));
  const auto& loop = fit_->loop();

  // Vertex values from interior values plus the boundary fit.
  auto assemble = [&](const Eigen::VectorXcd& interior, const Eigen::VectorXcd& arc_data,
                      const Eigen::VectorXcd& chord_data) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(nv);
    for (std::size_t i = 0; i < interior_.size(); ++i) v(interior_[i]) = interior(i);
    const Eigen::VectorXcd b = fit_->fit(arc_data, chord_data);
    for (std::size_t j = 0; j < loop.size(); ++j) v(loop[j]) = b(j);
    return P1Field(tri, std::move(v));
  };

  std::vector<Reconstruction> out;
  for (int M = M_lo; M <= M_hi; ++M) {
    Reconstruction rec;
    rec.M = M;
    rec.S = S;
    rec.flagged = flagged;
    rec.chord_J = J_chord;
    rec.times = shared;
    rec.chord_I = Eigen::MatrixXcd::Zero(N, M + 2);

    t = Clock::now();
    const Eigen::VectorXcd iM = reconstruct::beta_deconvolve(J_int, beta_int_, M, M_lo, S);
    const Eigen::VectorXcd iM1 = reconstruct::beta_deconvolve(J_int, beta_int_, M + 1, M_lo, S);
    rec.chord_I.col(M) = reconstruct::beta_deconvolve(*J_chord, tab_.beta_chord, M, M_lo, S);
    rec.chord_I.col(M + 1) = reconstruct::beta_deconvolve(*J_chord, tab_.beta_chord, M + 1, M_lo, S);
    rec.times.add("beta_deconvolve", since(t));

    t = Clock::now();
    P1Field prev2 = assemble(iM1, I_arc.mode(M + 1), rec.chord_I.col(M + 1));  // I_{-m-2}
    P1Field prev1 = assemble(iM, I_arc.mode(M), rec.chord_I.col(M));           // I_{-m-1}
    rec.times.add("boundary_fit", since(t));

    t = Clock::now();
    const int L = tri.num_triangles();
    Eigen::VectorXcd F(L);
    for (int m = M - 1; m >= 0; --m) {
      const double gm = std::pow(medium_n_.g, std::abs(m + 1));
      for (int l = 0; l < L; ++l)
        F(l) = -prev2.del(l) + (mu_s_c_(l) * gm - mu_t_c_(l)) * prev1.at_centroid(l);
      const Eigen::VectorXcd empty;
      const Eigen::VectorXcd Rm = 2.0 * k_chord_->apply(F, I_arc.mode(m), empty);
      rec.chord_I.col(m) = sys_.solve(Rm);
      const Eigen::VectorXcd vals = k_int_->apply(F, I_arc.mode(m), rec.chord_I.col(m));
      P1Field cur = assemble(vals, I_arc.mode(m), rec.chord_I.col(m));
      prev2 = std::move(prev1);
      prev1 = std::move(cur);
    }
    rec.times.add("elliptic_descent", since(t) + (M == M_lo ? kernel_time : 0.0));

    t = Clock::now();
    // After the loop prev1 = I_0 and prev2 = I_{-1}.
    rec.I0 = prev1;
    rec.Im1 = prev2;
    rec.q = reconstruct::assemble_source(rec.I0, rec.Im1, medium_n_, tri, &exclude_);
    rec.times.add("source", since(t));
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<cplx> Reconstructor::physical_centroids() const {
  std::vector<cplx> out;
  out.reserve(mesh_.tri.centroids().size());
  for (cplx r : mesh_.tri.centroids()) out.push_back(geo_.motion.inverse(r));
  return out;
}

double Reconstructor::sample(const Eigen::VectorXd& per_triangle, cplx z_physical) const {
  const auto l = mesh_.tri.locate(geo_.motion.apply(z_physical));
  return l ? per_triangle(*l) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace arcrte::pipeline
