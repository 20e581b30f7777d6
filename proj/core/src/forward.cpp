#include "arcrte/forward.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace arcrte::forward {

using geometry::Triangulation;
using transforms::PiecewiseConstantField;

namespace {

constexpr int kChunk = 256;

/// Batched real FFTs of length T over kChunk contiguous rows.
class FftBatch {
 public:
  explicit FftBatch(int T) : T_(T), H_(T / 2 + 1) {
    in_ = fftw_alloc_real(static_cast<std::size_t>(kChunk) * T_);
    out_ = fftw_alloc_complex(static_cast<std::size_t>(kChunk) * H_);
    int n = T_;
#pragma omp critical(arcrte_fftw_plan)
    {
      r2c_ = fftw_plan_many_dft_r2c(1, &n, kChunk, in_, nullptr, 1, T_, out_, nullptr, 1, H_,
                                    FFTW_ESTIMATE);
      c2r_ = fftw_plan_many_dft_c2r(1, &n, kChunk, out_, nullptr, 1, H_, in_, nullptr, 1, T_,
                                    FFTW_ESTIMATE);
    }
  }
  ~FftBatch() {
#pragma omp critical(arcrte_fftw_plan)
    {
      fftw_destroy_plan(r2c_);
      fftw_destroy_plan(c2r_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }
  FftBatch(const FftBatch&) = delete;
  FftBatch& operator=(const FftBatch&) = delete;

  double* real() { return in_; }
  fftw_complex* spec() { return out_; }
  int half() const { return H_; }
  void forward() { fftw_execute(r2c_); }
  void backward() { fftw_execute(c2r_); }

 private:
  int T_, H_;
  double* in_;
  fftw_complex* out_;
  fftw_plan r2c_, c2r_;
};

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  return a < 0 ? a + 2.0 * kPi : a;
}

}  // namespace

ForwardSolver::ForwardSolver(const transforms::MediumModel& medium, Triangulation mesh,
                             ForwardOptions opts)
    : medium_(medium), mesh_(std::move(mesh)), opts_(opts) {
  const int nc = mesh_.num_triangles();
  const int T = opts_.directions;
  if (T < 90) throw std::invalid_argument("forward: need at least 90 directions");
  if (nc < 1000) throw std::invalid_argument("forward: mesh must have at least 1000 triangles");
  if (medium_.g < 0.0 || medium_.g >= 1.0) throw std::invalid_argument("forward: g must be in [0,1)");
  L_ = 0;
  if (medium_.g > 0.0)
    while (L_ < T / 2 - 1 && std::pow(medium_.g, L_) >= opts_.moment_tol) ++L_;

  const auto& V = mesh_.vertices();
  const auto& tris = mesh_.triangles();
  nbr_.assign(nc, {-1, -1, -1});
  nl_.resize(nc);
  std::unordered_map<std::uint64_t, std::pair<int, int>> open;
  open.reserve(static_cast<std::size_t>(3) * nc);
  for (int l = 0; l < nc; ++l)
    for (int e = 0; e < 3; ++e) {
      const int a = tris[l][e], b = tris[l][(e + 1) % 3];
      nl_[l][e] = -kI * (V[b] - V[a]);
      const auto key = edge_key(a, b);
      auto it = open.find(key);
      if (it == open.end()) {
        open.emplace(key, std::make_pair(l, e));
      } else {
        nbr_[l][e] = it->second.first;
        nbr_[it->second.first][it->second.second] = l;
        open.erase(it);
      }
    }
  for (const auto& [key, ce] : open) {
    const auto [l, e] = ce;
    const cplx a = V[tris[l][e]] - medium_.domain.center;
    const cplx b = V[tris[l][(e + 1) % 3]] - medium_.domain.center;
    double a0 = wrap_angle(std::arg(a));
    double a1 = a0 + wrap_angle(std::arg(b) - std::arg(a));
    bedges_.push_back({a0, a1, l, e});
  }
  std::sort(bedges_.begin(), bedges_.end(), [](const BEdge& x, const BEdge& y) { return x.a0 < y.a0; });

  area_ = mesh_.areas();
  mu_s_ = cell_average(medium_.mu_s);
  const auto mu_a = cell_average(medium_.mu_a);
  mu_t_.resize(nc);
  for (int l = 0; l < nc; ++l) mu_t_[l] = mu_a[l] + mu_s_[l];

  // Upwind orderings.
  order_.resize(T);
  bool cyclic = false;
#pragma omp parallel
  {
    std::vector<int> indeg(nc), queue;
    queue.reserve(nc);
#pragma omp for schedule(dynamic)
    for (int t = 0; t < T; ++t) {
      const cplx xi = std::polar(1.0, 2.0 * kPi * t / T);
      queue.clear();
      for (int l = 0; l < nc; ++l) {
        int d = 0;
        for (int e = 0; e < 3; ++e)
          if (nbr_[l][e] >= 0 && (std::conj(xi) * nl_[l][e]).real() < 0.0) ++d;
        indeg[l] = d;
        if (d == 0) queue.push_back(l);
      }
      for (std::size_t h = 0; h < queue.size(); ++h) {
        const int l = queue[h];
        for (int e = 0; e < 3; ++e) {
          const int nb = nbr_[l][e];
          if (nb >= 0 && (std::conj(xi) * nl_[l][e]).real() > 0.0 && --indeg[nb] == 0)
            queue.push_back(nb);
        }
      }
      if (static_cast<int>(queue.size()) != nc) {
#pragma omp atomic write
        cyclic = true;
      }
      order_[t] = queue;
    }
  }
  if (cyclic) throw NumericalError("forward", "upwind graph has a cycle");
}

std::vector<double> ForwardSolver::cell_average(const PiecewiseConstantField& f) const {
  const auto& V = mesh_.vertices();
  const auto& tris = mesh_.triangles();
  std::vector<double> out(tris.size());
#pragma omp parallel for schedule(static)
  for (int l = 0; l < static_cast<int>(tris.size()); ++l)
    out[l] = f.triangle_average(V[tris[l][0]], V[tris[l][1]], V[tris[l][2]], opts_.coefficient_level);
  return out;
}

void ForwardSolver::sweep(std::vector<double>& buf) const {
  const int T = opts_.directions;
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < T; ++t) {
    const cplx cxi = std::conj(std::polar(1.0, 2.0 * kPi * t / T));
    for (int l : order_[t]) {
      const std::size_t slot = static_cast<std::size_t>(l) * T + t;
      double num = area_[l] * buf[slot];
      double den = mu_t_[l] * area_[l];
      for (int e = 0; e < 3; ++e) {
        const double f = (cxi * nl_[l][e]).real();
        if (f > 0.0) {
          den += f;
        } else if (f < 0.0) {
          const int nb = nbr_[l][e];
          if (nb >= 0) num -= f * buf[static_cast<std::size_t>(nb) * T + t];
        }
      }
      buf[slot] = num / den;
    }
  }
}

void ForwardSolver::moments_of(const std::vector<double>& buf, Eigen::VectorXd& out) const {
  const int T = opts_.directions, nc = mesh_.num_triangles(), w = 2 * L_ + 1;
  out.resize(static_cast<Eigen::Index>(nc) * w);
#pragma omp parallel
  {
    FftBatch fft(T);
#pragma omp for schedule(static)
    for (int c0 = 0; c0 < nc; c0 += kChunk) {
      const int cnt = std::min(kChunk, nc - c0);
      std::copy(buf.begin() + static_cast<std::ptrdiff_t>(c0) * T,
                buf.begin() + static_cast<std::ptrdiff_t>(c0 + cnt) * T, fft.real());
      fft.forward();
      for (int i = 0; i < cnt; ++i) {
        const fftw_complex* s = fft.spec() + static_cast<std::size_t>(i) * fft.half();
        double* o = out.data() + static_cast<std::size_t>(c0 + i) * w;
        o[0] = s[0][0] / T;
        for (int m = 1; m <= L_; ++m) {
          o[2 * m - 1] = s[m][0] / T;
          o[2 * m] = s[m][1] / T;
        }
      }
    }
  }
}

void ForwardSolver::scatter_into(const Eigen::VectorXd& mom, std::vector<double>& buf) const {
  // buf enters holding the isotropic source per slot and leaves with the
  // scattering source added.
  const int T = opts_.directions, nc = mesh_.num_triangles(), w = 2 * L_ + 1;
  std::vector<double> gm(L_ + 1);
  for (int m = 0; m <= L_; ++m) gm[m] = std::pow(medium_.g, m);
#pragma omp parallel
  {
    FftBatch fft(T);
#pragma omp for schedule(static)
    for (int c0 = 0; c0 < nc; c0 += kChunk) {
      const int cnt = std::min(kChunk, nc - c0);
      for (int i = 0; i < kChunk; ++i) {
        fftw_complex* s = fft.spec() + static_cast<std::size_t>(i) * fft.half();
        for (int m = 0; m < fft.half(); ++m) s[m][0] = s[m][1] = 0.0;
        if (i >= cnt) continue;
        const int l = c0 + i;
        const double* o = mom.data() + static_cast<std::size_t>(l) * w;
        const double ms = mu_s_[l];
        s[0][0] = ms * o[0];
        for (int m = 1; m <= L_; ++m) {
          s[m][0] = ms * gm[m] * o[2 * m - 1];
          s[m][1] = ms * gm[m] * o[2 * m];
        }
      }
      fft.backward();
      for (int i = 0; i < cnt; ++i) {
        double* dst = buf.data() + static_cast<std::size_t>(c0 + i) * T;
        const double* src = fft.real() + static_cast<std::size_t>(i) * T;
        for (int t = 0; t < T; ++t) dst[t] += src[t];
      }
    }
  }
}

TransportSolution ForwardSolver::solve(const PiecewiseConstantField& source) const {
  const int T = opts_.directions, nc = mesh_.num_triangles(), w = 2 * L_ + 1;
  const std::vector<double> q = cell_average(source);
  TransportSolution sol;
  sol.directions = T;
  sol.moments = L_;
  std::vector<double> buf(static_cast<std::size_t>(nc) * T);

  auto fill_source = [&](bool with_q) {
    for (int l = 0; l < nc; ++l)
      std::fill_n(buf.begin() + static_cast<std::ptrdiff_t>(l) * T, T, with_q ? q[l] : 0.0);
  };
  // Weighted inner product: L2(Omega x S^1) restricted to the kept moments.
  Eigen::VectorXd wts(static_cast<Eigen::Index>(nc) * w);
  for (int l = 0; l < nc; ++l)
    for (int j = 0; j < w; ++j) wts(static_cast<Eigen::Index>(l) * w + j) = 2.0 * kPi * area_[l] * (j == 0 ? 1.0 : 2.0);
  auto wdot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a.array() * b.array() * wts.array()).sum();
  };
  auto wnorm = [&](const Eigen::VectorXd& a) { return std::sqrt(wdot(a, a)); };
  // x -> moments(sweep(scatter(x))).
  auto apply_K = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    fill_source(false);
    scatter_into(x, buf);
    sweep(buf);
    moments_of(buf, y);
  };

  Eigen::VectorXd b;
  fill_source(true);
  sweep(buf);
  moments_of(buf, b);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  const bool scattering = std::any_of(mu_s_.begin(), mu_s_.end(), [](double v) { return v > 0; });

  if (scattering && wnorm(b) > 0.0) {
    if (opts_.scheme == Scheme::SourceIteration) {
      x = b;
      Eigen::VectorXd y;
      bool done = false;
      for (int it = 1; it <= opts_.max_iter; ++it) {
        apply_K(x, y);
        y += b;
        const double d = wnorm(y - x);
        x.swap(y);
        sol.history.push_back(d);
        sol.iterations = it;
        if (d < opts_.tol) {
          done = true;
          break;
        }
      }
      if (!done) throw NumericalError("forward", "source iteration did not converge", sol.history);
    } else {
      // Restarted GMRES on (I - K) x = b in the weighted inner product.
      const int m = std::max(1, opts_.gmres_restart);
      const double target = opts_.tol * std::max(1.0, wnorm(b));
      std::vector<Eigen::VectorXd> Vb(m + 1);
      Eigen::MatrixXd Hh = Eigen::MatrixXd::Zero(m + 1, m);
      Eigen::VectorXd cs(m), sn(m), gvec(m + 1), Kv;
      int total = 0;
      bool done = false;
      while (!done && total < opts_.max_iter) {
        Eigen::VectorXd r;
        if (total == 0) {
          r = b;
        } else {
          apply_K(x, Kv);
          r = b - (x - Kv);
        }
        double beta = wnorm(r);
        if (beta < target) break;
        Vb[0] = r / beta;
        gvec.setZero();
        gvec(0) = beta;
        Hh.setZero();
        int j = 0;
        for (; j < m && total < opts_.max_iter; ++j) {
          apply_K(Vb[j], Kv);
          Eigen::VectorXd wv = Vb[j] - Kv;
          for (int i = 0; i <= j; ++i) {
            Hh(i, j) = wdot(wv, Vb[i]);
            wv -= Hh(i, j) * Vb[i];
          }
          Hh(j + 1, j) = wnorm(wv);
          if (Hh(j + 1, j) > 0) Vb[j + 1] = wv / Hh(j + 1, j);
          for (int i = 0; i < j; ++i) {
            const double t0 = cs(i) * Hh(i, j) + sn(i) * Hh(i + 1, j);
            Hh(i + 1, j) = -sn(i) * Hh(i, j) + cs(i) * Hh(i + 1, j);
            Hh(i, j) = t0;
          }
          const double den = std::hypot(Hh(j, j), Hh(j + 1, j));
          cs(j) = Hh(j, j) / den;
          sn(j) = Hh(j + 1, j) / den;
          Hh(j, j) = den;
          Hh(j + 1, j) = 0.0;
          gvec(j + 1) = -sn(j) * gvec(j);
          gvec(j) = cs(j) * gvec(j);
          ++total;
          sol.history.push_back(std::abs(gvec(j + 1)));
          if (std::abs(gvec(j + 1)) < target) {
            ++j;
            done = true;
            break;
          }
        }
        Eigen::VectorXd yv = Hh.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(gvec.head(j));
        for (int i = 0; i < j; ++i) x += yv(i) * Vb[i];
      }
      sol.iterations = total;
      if (!done) {
        apply_K(x, Kv);
        if (wnorm(b - (x - Kv)) >= target)
          throw NumericalError("forward", "GMRES did not converge", sol.history);
      }
    }
  }

  fill_source(true);
  if (scattering) scatter_into(x, buf);
  sweep(buf);
  sol.values = std::move(buf);
  return sol;
}

double ForwardSolver::total_outflow(const TransportSolution& sol) const {
  const int T = sol.directions, nc = mesh_.num_triangles();
  double s = 0.0;
  for (int l = 0; l < nc; ++l)
    for (int e = 0; e < 3; ++e) {
      if (nbr_[l][e] >= 0) continue;
      for (int t = 0; t < T; ++t) {
        const double f = (std::conj(std::polar(1.0, 2.0 * kPi * t / T)) * nl_[l][e]).real();
        if (f > 0.0) s += f * sol.at(l, t);
      }
    }
  return s * 2.0 * kPi / T;
}

int ForwardSolver::boundary_edge_at(cplx z) const {
  const double a = wrap_angle(std::arg(z - medium_.domain.center));
  auto it = std::upper_bound(bedges_.begin(), bedges_.end(), a,
                             [](double v, const BEdge& e) { return v < e.a0; });
  const std::size_t n = bedges_.size();
  const std::size_t i = (it == bedges_.begin()) ? n - 1 : static_cast<std::size_t>(it - bedges_.begin()) - 1;
  for (std::size_t k = 0; k < 3; ++k) {
    const BEdge& e = bedges_[(i + n - k) % n];
    for (double aa : {a, a + 2.0 * kPi})
      if (aa >= e.a0 - 1e-14 && aa <= e.a1 + 1e-14) return static_cast<int>((i + n - k) % n);
  }
  throw std::invalid_argument("forward: point is not on the mesh boundary");
}

double ForwardSolver::boundary_value(const TransportSolution& sol, cplx z, int t, bool correct) const {
  const BEdge& be = bedges_[boundary_edge_at(z)];
  const int l = be.cell, T = sol.directions;
  const double I = sol.at(l, t);
  if (!correct) return I;
  const cplx xi = std::polar(1.0, 2.0 * kPi * t / T);
  // Recover the cell source from the discrete balance, then step along the
  // characteristic from the centroid to z.
  double out = mu_t_[l] * area_[l] * I, in = 0.0;
  for (int e = 0; e < 3; ++e) {
    const double f = (std::conj(xi) * nl_[l][e]).real();
    if (f > 0.0) {
      out += f * I;
    } else if (f < 0.0 && nbr_[l][e] >= 0) {
      in -= f * sol.at(nbr_[l][e], t);
    }
  }
  const double Q = (out - in) / area_[l];
  const double d = (std::conj(xi) * (z - mesh_.centroids()[l])).real();
  return I + d * (Q - mu_t_[l] * I);
}

std::string arc_id(const geometry::Arc& arc) {
  std::ostringstream os;
  os << std::setprecision(17) << "circle:" << arc.disk().center.real() << ':' << arc.disk().center.imag()
     << ':' << arc.disk().radius << ':' << arc.omega_minus() << ':' << arc.omega_plus() << ':'
     << arc.phase();
  return os.str();
}

geometry::Arc arc_from_id(const std::string& id, int samples) {
  std::istringstream is(id);
  std::string tag;
  std::getline(is, tag, ':');
  if (tag != "circle") throw ConfigError("unknown arc parameterization '" + id + "'");
  double v[6];
  for (double& x : v) {
    std::string tok;
    if (!std::getline(is, tok, ':')) throw ConfigError("truncated arc id '" + id + "'");
    try {
      x = std::stod(tok);
    } catch (const std::exception&) {
      throw ConfigError("bad number in arc id '" + id + "'");
    }
  }
  return geometry::Arc(geometry::Disk{cplx(v[0], v[1]), v[2]}, v[3], v[4], samples, v[5]);
}

BoundaryMeasurement extract_measurement(const ForwardSolver& solver, const TransportSolution& sol,
                                        const geometry::Arc& arc, int T, bool correct) {
  if (T < 1 || sol.directions % T != 0)
    throw std::invalid_argument("extract_measurement: T must divide the solver direction count");
  const int stride = sol.directions / T;
  BoundaryMeasurement m;
  m.K = arc.size();
  m.T = T;
  const cplx pm = arc.point(arc.omega_minus()), pp = arc.point(arc.omega_plus());
  m.c = 0.5 * std::abs(pm - pp);
  m.arc_id = arc_id(arc);
  m.values = Eigen::MatrixXd::Zero(m.K, T);
  for (int k = 0; k < m.K; ++k) {
    const cplx nu = arc.normal(arc.params()[k]);
    for (int t = 0; t < T; ++t) {
      const cplx xi = std::polar(1.0, 2.0 * kPi * t / T);
      if ((std::conj(nu) * xi).real() <= 0.0) continue;
      m.values(k, t) = solver.boundary_value(sol, arc.points()[k], t * stride, correct);
    }
  }
  return m;
}

TransportSolution solve_transport(const transforms::MediumModel& medium,
                                  const PiecewiseConstantField& source, const ForwardOptions& opts) {
  ForwardSolver solver(medium, geometry::disk_mesh(medium.domain, opts.mesh_triangles), opts);
  return solver.solve(source);
}

}  // namespace arcrte::forward
