#include "arcrte/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace arcrte::harness {

namespace fs = std::filesystem;

namespace {

std::string path_in(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out);
  return (fs::path(cfg.out) / name).string();
}

}  // namespace

Synthesis synthesize(const RunConfig& cfg) {
  cfg.validate();
  const Phantom ph = make_phantom(cfg.phantom, cfg.rotation);
  const auto t0 = std::chrono::steady_clock::now();
  forward::ForwardSolver solver(ph.medium, geometry::disk_mesh(ph.medium.domain, cfg.forward_triangles),
                                cfg.forward_options());
  const auto sol = solver.solve(ph.source);
  Synthesis s;
  s.measurement = forward::extract_measurement(solver, sol, ph.arc(cfg.K), cfg.T);
  s.forward_triangles = solver.mesh().num_triangles();
  s.iterations = sol.iterations;
  s.moments = sol.moments;
  s.history = sol.history;
  if (cfg.noise > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double amp = cfg.noise * s.measurement.values.maxCoeff();
    auto& v = s.measurement.values;
    for (int k = 0; k < v.rows(); ++k)
      for (int t = 0; t < v.cols(); ++t)
        if (v(k, t) != 0.0) v(k, t) += amp * U(rng);
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

std::vector<SectionStats> section_stats(const pipeline::Reconstructor& rec, const Eigen::VectorXd& q,
                                        double rotation, int samples, std::vector<double>* t_out,
                                        std::vector<double>* q_out) {
  const Section seg = standard_section(rotation);
  std::vector<double> ts(samples), vs(samples);
  for (int i = 0; i < samples; ++i) {
    ts[i] = (i + 0.5) / samples;
    vs[i] = rec.sample(q, seg.at(ts[i]));
  }
  std::vector<SectionStats> out;
  for (const auto& w : standard_windows()) {
    SectionStats st;
    st.name = w.name;
    st.expected = w.expected;
    st.min = INFINITY;
    st.max = -INFINITY;
    double sum = 0.0;
    for (int i = 0; i < samples; ++i) {
      if (ts[i] < w.t0 || ts[i] > w.t1 || std::isnan(vs[i])) continue;
      ++st.samples;
      sum += vs[i];
      st.min = std::min(st.min, vs[i]);
      st.max = std::max(st.max, vs[i]);
      st.max_rel_dev = std::max(st.max_rel_dev, std::abs(vs[i] / w.expected - 1.0));
    }
    st.mean = st.samples ? sum / st.samples : NAN;
    out.push_back(st);
  }
  if (t_out) *t_out = ts;
  if (q_out) *q_out = vs;
  return out;
}

ReconstructReport reconstruct(const RunConfig& cfg, const forward::BoundaryMeasurement& meas,
                              pipeline::Reconstructor* reuse) {
  cfg.validate();
  const Phantom ph = make_phantom(cfg.phantom, cfg.rotation);
  const geometry::Arc arc = forward::arc_from_id(meas.arc_id, meas.K);
  std::unique_ptr<pipeline::Reconstructor> own;
  pipeline::Reconstructor* rec = reuse;
  if (!rec) {
    own = std::make_unique<pipeline::Reconstructor>(ph.medium, arc, meas.T, cfg.reconstruct_options());
    rec = own.get();
  }
  ReconstructReport rep;
  const int lo = cfg.M > 0 ? cfg.M : cfg.M_lo, hi = cfg.M > 0 ? cfg.M : cfg.M_hi;
  rep.runs = rec->run(meas, lo, hi);
  std::vector<double> norms;
  for (const auto& r : rep.runs) {
    rep.sweep.emplace_back(r.M, r.q.im_norm);
    norms.push_back(r.q.im_norm);
  }
  rep.selected = static_cast<std::size_t>(reconstruct::argmin_first(norms));
  rep.section = section_stats(*rec, rep.best().q.re, cfg.rotation, 200, &rep.section_t, &rep.section_q);
  return rep;
}

std::vector<io::CondRow> cond_study(const std::vector<int>& Ns, const std::vector<double>& eps,
                                    const std::vector<csie::Variant>& variants) {
  std::vector<io::CondRow> rows;
  for (auto v : variants)
    for (double e : eps)
      for (int N : Ns) {
        if (N > 4000) throw ConfigError("cond-study: N above the desk bound of 4000");
        const double c =
            v == csie::Variant::CutOff ? csie::cond2(csie::cutoff_matrix(N, e), true)
                                       : csie::cond2(csie::exlog_matrix(N, e, 1.0), false);
        rows.push_back({csie::to_string(v), e, N, c});
      }
  return rows;
}

void cmd_synthesize(const RunConfig& cfg, std::ostream& log) {
  const Synthesis s = synthesize(cfg);
  const std::string mpath = path_in(cfg, "measurement.csv");
  io::write_measurement(mpath, s.measurement);
  std::ostringstream meta;
  meta << std::setprecision(17) << "phantom = " << cfg.phantom << '\n'
       << "forward_triangles = " << s.forward_triangles << '\n'
       << "directions = " << cfg.T_f << '\n'
       << "scheme = " << (cfg.scheme == forward::Scheme::Gmres ? "gmres" : "source-iteration") << '\n'
       << "iterations = " << s.iterations << '\n'
       << "moments = " << s.moments << '\n'
       << "final_residual = " << (s.history.empty() ? 0.0 : s.history.back()) << '\n'
       << "noise = " << cfg.noise << '\n'
       << "seed = " << cfg.seed << '\n';
  io::write_file(path_in(cfg, "measurement.meta"), meta.str());
  log << "wrote " << mpath << " (" << s.measurement.K << " x " << s.measurement.T << "), "
      << s.forward_triangles << " forward triangles, " << s.iterations << " iterations, "
      << std::fixed << std::setprecision(1) << s.seconds << " s\n";
}

namespace {

void write_outputs(const RunConfig& cfg, const pipeline::Reconstructor& rec, const ReconstructReport& rep,
                   std::ostream& log) {
  const auto& best = rep.best();
  {
    std::ostringstream os;
    io::write_source(os, rec.physical_centroids(), best.q);
    io::write_file(path_in(cfg, "q.csv"), os.str());
  }
  {
    std::ostringstream os;
    io::write_sweep(os, rep.sweep);
    io::write_file(path_in(cfg, "sweep.csv"), os.str());
  }
  const auto x = rec.geometry().chord.nodes();
  auto trace = [&](const std::string& name, const Eigen::VectorXcd& v) {
    std::ostringstream os;
    io::write_trace(os, x, v);
    io::write_file(path_in(cfg, name), os.str());
  };
  const int top = best.S - 2;
  trace("chord_J_" + std::to_string(top) + ".csv", best.chord_J->mode(top));
  trace("chord_I_0.csv", best.chord_I.col(0));
  trace("chord_I_1.csv", best.chord_I.col(1));
  {
    std::ostringstream os;
    os << std::setprecision(17) << "t,x,y,q\n";
    const Section seg = standard_section(cfg.rotation);
    for (std::size_t i = 0; i < rep.section_t.size(); ++i) {
      const cplx z = seg.at(rep.section_t[i]);
      os << rep.section_t[i] << ',' << z.real() << ',' << z.imag() << ',' << rep.section_q[i] << '\n';
    }
    io::write_file(path_in(cfg, "section.csv"), os.str());
  }
  std::ostringstream r;
  r << std::setprecision(6);
  r << "M = " << best.M << "\nS = " << best.S << "\nim_norm = " << best.q.im_norm
    << "\nre_norm = " << best.q.re_norm << "\nim_over_re = "
    << (best.q.re_norm > 0 ? best.q.im_norm / best.q.re_norm : 0.0) << "\nnegative_triangles = "
    << best.q.negative << "\nflagged_vertices = " << best.flagged << '\n';
  for (const auto& s : rep.section)
    r << "section_" << s.name << " = mean " << s.mean << " min " << s.min << " max " << s.max << '\n';
  for (const auto& [name, sec] : best.times.entries) r << "time_" << name << " = " << sec << '\n';
  io::write_file(path_in(cfg, "report.txt"), r.str());
  log << r.str();
}

}  // namespace

void cmd_reconstruct(const RunConfig& cfg, const std::string& measurement, std::ostream& log) {
  const auto meas = io::read_measurement(measurement);
  const Phantom ph = make_phantom(cfg.phantom, cfg.rotation);
  cfg.validate();
  pipeline::Reconstructor rec(ph.medium, forward::arc_from_id(meas.arc_id, meas.K), meas.T,
                              cfg.reconstruct_options());
  const auto rep = reconstruct(cfg, meas, &rec);
  write_outputs(cfg, rec, rep, log);
}

void cmd_cond_study(const RunConfig& cfg, const std::vector<int>& Ns, const std::vector<double>& eps,
                    const std::vector<csie::Variant>& variants, std::ostream& log) {
  const auto rows = cond_study(Ns, eps, variants);
  std::ostringstream os;
  io::write_cond(os, rows);
  const std::string p = path_in(cfg, "cond.csv");
  io::write_file(p, os.str());
  log << "wrote " << p << " (" << rows.size() << " rows)\n";
}

void cmd_select_m(const RunConfig& cfg, const std::string& measurement, std::ostream& log) {
  RunConfig c = cfg;
  c.M = 0;
  cmd_reconstruct(c, measurement, log);
}

void cmd_mesh_export(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const Phantom ph = make_phantom(cfg.phantom, cfg.rotation);
  const auto geo = geometry::normalize(ph.medium.domain, ph.arc(cfg.K), cfg.N);
  const auto fan = geometry::fan_mesh(geo.arc, geo.chord, cfg.mesh_target);
  // Export in physical coordinates.
  std::vector<cplx> v;
  for (cplx z : fan.tri.vertices()) v.push_back(geo.motion.inverse(z));
  const geometry::Triangulation phys(v, fan.tri.triangles(), fan.tri.kinds(), fan.tri.strategy());
  std::ostringstream a, b;
  phys.write(a);
  io::write_file(path_in(cfg, "reconstruction_mesh.txt"), a.str());
  const auto fwd = geometry::disk_mesh(ph.medium.domain, cfg.forward_triangles);
  fwd.write(b);
  io::write_file(path_in(cfg, "forward_mesh.txt"), b.str());
  log << "reconstruction mesh: " << phys.num_triangles() << " triangles (" << phys.strategy()
      << "), forward mesh: " << fwd.num_triangles() << " triangles (" << fwd.strategy() << ")\n";
}

}  // namespace arcrte::harness
