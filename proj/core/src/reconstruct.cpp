#include "arcrte/reconstruct.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arcrte::reconstruct {

using geometry::Arc;
using geometry::Chord;
using geometry::Triangulation;

namespace {
const cplx kTwoPiI(0.0, 2.0 * kPi);
}

P1Field::P1Field(const Triangulation& tri, Eigen::VectorXcd vertex_values) : v_(std::move(vertex_values)) {
  if (v_.size() != tri.num_vertices()) throw std::invalid_argument("P1Field: value count mismatch");
  const int L = tri.num_triangles();
  a_.resize(L);
  b_.resize(L);
  c_.resize(L);
  centroid_.resize(L);
  const auto& V = tri.vertices();
  for (int l = 0; l < L; ++l) {
    const auto& t = tri.triangles()[l];
    const cplx p0 = V[t[0]], p1 = V[t[1]], p2 = V[t[2]];
    const cplx f0 = v_(t[0]), f1 = v_(t[1]), f2 = v_(t[2]);
    const double x1 = p1.real() - p0.real(), y1 = p1.imag() - p0.imag();
    const double x2 = p2.real() - p0.real(), y2 = p2.imag() - p0.imag();
    const double det = x1 * y2 - x2 * y1;
    const cplx d1 = f1 - f0, d2 = f2 - f0;
    a_(l) = (d1 * y2 - d2 * y1) / det;
    b_(l) = (x1 * d2 - x2 * d1) / det;
    c_(l) = f0 - a_(l) * p0.real() - b_(l) * p0.imag();
    centroid_(l) = (f0 + f1 + f2) / 3.0;
  }
}

ModeTrace boundary_modes(const forward::BoundaryMeasurement& meas, int S, double rotation) {
  const int T = meas.T, K = meas.K;
  if (T < 2 * S) throw std::invalid_argument("boundary_modes: T < 2S aliases mode S");
  if (meas.values.rows() != K || meas.values.cols() != T)
    throw std::invalid_argument("boundary_modes: measurement shape mismatch");
  ModeTrace out(Location::Arc, 0, S, K);
  std::vector<double> in(T);
  std::vector<fftw_complex> spec(T / 2 + 1);
  fftw_plan plan;
#pragma omp critical(arcrte_fftw_plan)
  plan = fftw_plan_dft_r2c_1d(T, in.data(), spec.data(), FFTW_ESTIMATE);
  for (int k = 0; k < K; ++k) {
    for (int t = 0; t < T; ++t) in[t] = meas.values(k, t);
    fftw_execute(plan);
    for (int m = 0; m <= S; ++m) {
      // Mode -m: (1/T) sum f e^{+i m theta_t} = conj(F_m) / T for real f.
      const cplx Fm(spec[m][0], spec[m][1]);
      out.values(k, m) = std::conj(Fm) / double(T) * std::polar(1.0, -m * rotation);
    }
  }
#pragma omp critical(arcrte_fftw_plan)
  fftw_destroy_plan(plan);
  return out;
}

ModeTrace alpha_convolve(const ModeTrace& I, const Eigen::MatrixXcd& alpha, int M, int S) {
  if (I.m_lo > M || I.m_hi < S) throw std::invalid_argument("alpha_convolve: I modes do not cover [M, S]");
  if (alpha.rows() != I.nodes() || alpha.cols() < S - M + 1)
    throw std::invalid_argument("alpha_convolve: alpha table too small");
  ModeTrace J(I.location, M, S, I.nodes());
  for (int m = M; m <= S; ++m) {
    auto col = J.mode(m);
    for (int s = 0; s <= S - m; ++s) col += alpha.col(s).cwiseProduct(I.mode(m + s));
  }
  return J;
}

Eigen::MatrixXcd p_minus(const ModeTrace& J, const Arc& arc, const std::vector<cplx>& pts, int m_lo,
                         int m_hi, int S) {
  if (J.nodes() != arc.size()) throw std::invalid_argument("p_minus: trace/arc size mismatch");
  if (m_lo < J.m_lo || m_hi > J.m_hi) throw std::invalid_argument("p_minus: mode range not in trace");
  const int top = std::min(S, J.m_hi);
  const int K = arc.size(), P = static_cast<int>(pts.size()), nm = m_hi - m_lo + 1;
  const int j0 = J.m_lo;
  const Eigen::MatrixXcd Jt = J.values.transpose();  // (mode, k)
  Eigen::MatrixXcd out(P, nm);
  const auto& zeta = arc.points();
  const auto& dz = arc.derivatives();
  const auto& dw = arc.weights();
#pragma omp parallel
  {
    std::vector<cplx> acc(nm);
#pragma omp for schedule(static)
    for (int p = 0; p < P; ++p) {
      std::fill(acc.begin(), acc.end(), cplx(0.0));
      const cplx z = pts[p];
      for (int k = 0; k < K; ++k) {
        const cplx a = zeta[k] - z;
        const cplx inv = 1.0 / a;
        const cplx w = std::conj(a) * inv;
        const cplx above = dz[k] * inv;
        const cplx c1 = above * dw[k] / kTwoPiI;
        const double c2 = above.imag() * dw[k] / kPi;
        const cplx* jk = Jt.col(k).data();
        cplx t2(0.0), t1(0.0);  // T_{m+2}, T_{m+1}
        for (int m = top; m >= m_lo; --m) {
          const cplx tm = (m + 2 <= top) ? w * (jk[m + 2 - j0] + t2) : cplx(0.0);
          if (m <= m_hi) acc[m - m_lo] += c1 * jk[m - j0] + c2 * tm;
          t2 = t1;
          t1 = tm;
        }
      }
      for (int j = 0; j < nm; ++j) out(p, j) = acc[j];
    }
  }
  return out;
}

Eigen::MatrixXcd chord_rhs(const ModeTrace& J, const Arc& arc, const Chord& chord, int M, int S,
                           csie::RhsMode rhs) {
  const int N = chord.N;
  if (S - 2 < M) return Eigen::MatrixXcd(N, 0);
  if (rhs == csie::RhsMode::Midpoint) {
    std::vector<cplx> x(N);
    for (int n = 0; n < N; ++n) x[n] = chord.node(n);
    return 2.0 * p_minus(J, arc, x, M, S - 2, S);
  }
  // Three-point Gauss average over each chord cell.
  const double g = std::sqrt(0.6) * 0.5 * chord.dx();
  std::vector<cplx> x(3 * N);
  for (int n = 0; n < N; ++n) {
    x[3 * n] = chord.node(n) - g;
    x[3 * n + 1] = chord.node(n);
    x[3 * n + 2] = chord.node(n) + g;
  }
  const Eigen::MatrixXcd P = p_minus(J, arc, x, M, S - 2, S);
  Eigen::MatrixXcd R(N, P.cols());
  for (int n = 0; n < N; ++n)
    R.row(n) = (5.0 * P.row(3 * n) + 8.0 * P.row(3 * n + 1) + 5.0 * P.row(3 * n + 2)) / 9.0;
  return R;
}

ModeTrace solve_chord_modes(const ModeTrace& J, const Arc& arc, const csie::CsieSystem& sys, int M,
                            int S, csie::RhsMode rhs) {
  ModeTrace out(Location::Chord, M, S - 2, sys.chord().N);
  if (S - 2 < M) return out;
  out.values = sys.solve(chord_rhs(J, arc, sys.chord(), M, S, rhs));
  return out;
}

ModeTrace interior_J(const ModeTrace& J_arc, const ModeTrace& J_chord, const Arc& arc,
                     const Chord& chord, const std::vector<cplx>& pts, int M, int S) {
  const int P = static_cast<int>(pts.size());
  ModeTrace out(Location::Interior, M, S - 2, P);
  if (S - 2 < M) return out;
  if (J_chord.m_lo > M || J_chord.m_hi < S - 2 || J_chord.nodes() != chord.N)
    throw std::invalid_argument("interior_J: chord trace does not cover [M, S-2]");
  out.values = p_minus(J_arc, arc, pts, M, S - 2, S);
  const int N = chord.N, nm = out.modes(), j0 = J_chord.m_lo, top = S - 2;
  const double dx = chord.dx();
  const Eigen::MatrixXcd Jt = J_chord.values.transpose();
#pragma omp parallel
  {
    std::vector<cplx> acc(nm);
#pragma omp for schedule(static)
    for (int p = 0; p < P; ++p) {
      std::fill(acc.begin(), acc.end(), cplx(0.0));
      const cplx z = pts[p], zb = std::conj(z);
      for (int n = 0; n < N; ++n) {
        const double x = chord.node(n);
        const cplx inv = 1.0 / (x - z);
        const cplx invb = 1.0 / (x - zb);
        const cplx w = (x - zb) * inv;
        const cplx c1 = dx * inv / kTwoPiI;
        const cplx c2 = dx * (inv - invb) / kTwoPiI;
        const cplx* jn = Jt.col(n).data();
        cplx t2(0.0), t1(0.0);
        for (int m = top; m >= M; --m) {
          const cplx tm = (m + 2 <= top) ? w * (jn[m + 2 - j0] + t2) : cplx(0.0);
          acc[m - M] += c1 * jn[m - j0] + c2 * tm;
          t2 = t1;
          t1 = tm;
        }
      }
      for (int j = 0; j < nm; ++j) out.values(p, j) += acc[j];
    }
  }
  return out;
}

Eigen::VectorXcd beta_deconvolve(const ModeTrace& J, const Eigen::MatrixXcd& beta, int order, int M,
                                 int S) {
  const int smax = S - order - 2;
  if (order < M) throw std::invalid_argument("beta_deconvolve: order below M");
  if (smax < 0) throw std::invalid_argument("beta_deconvolve: S too small for this order");
  if (!J.has(order) || !J.has(order + smax))
    throw std::invalid_argument("beta_deconvolve: J modes do not cover the sum");
  if (beta.rows() != J.nodes() || beta.cols() < smax + 1)
    throw std::invalid_argument("beta_deconvolve: beta table too small");
  Eigen::VectorXcd I = Eigen::VectorXcd::Zero(J.nodes());
  for (int s = 0; s <= smax; ++s) I += beta.col(s).cwiseProduct(J.mode(order + s));
  return I;
}

BoundaryFit::BoundaryFit(const geometry::FanMesh& mesh, const Arc& arc, const Chord& chord)
    : loop_(mesh.boundary_loop), arc_edges_(arc.cell_edges()) {
  const auto& V = mesh.tri.vertices();
  const auto& kind = mesh.tri.kinds();
  const int nb = static_cast<int>(loop_.size());
  int n_arc = 0;
  for (int id : loop_) n_arc += kind[id] == geometry::VertexKind::Arc;
  const int corner = n_arc + 1;  // loop position of the -c corner
  chord_edges_.resize(chord.N + 1);
  for (int n = 0; n <= chord.N; ++n) chord_edges_[n] = -chord.c + n * chord.dx();
  chord_edges_[chord.N] = chord.c;
  auto param = [&](int pos, bool on_arc) {
    if (on_arc) {
      if (pos == 0) return arc.omega_minus();
      if (pos == corner) return arc.omega_plus();
      return mesh.boundary_param[loop_[pos]];
    }
    if (pos == 0) return chord.c;
    if (pos == corner) return -chord.c;
    return mesh.boundary_param[loop_[pos]];
  };
  for (int j = 0; j < nb; ++j) {
    const int a = j, b = (j + 1) % nb;
    const bool on_arc = j < corner;
    Seg s{a, b, param(a, on_arc), param(b, on_arc), 0.0, on_arc};
    const double len = std::abs(V[loop_[b]] - V[loop_[a]]);
    if (!(s.pb > s.pa)) throw std::invalid_argument("boundary fit: loop parameters not increasing");
    s.scale = len / (s.pb - s.pa);
    segs_.push_back(s);
  }
  G_ = Eigen::MatrixXd::Zero(nb, nb);
  for (const Seg& s : segs_) {
    const double len = s.scale * (s.pb - s.pa);
    G_(s.a, s.a) += len / 3.0;
    G_(s.b, s.b) += len / 3.0;
    G_(s.a, s.b) += len / 6.0;
    G_(s.b, s.a) += len / 6.0;
  }
  ldlt_.compute(G_);
  const auto d = ldlt_.vectorD();
  if (ldlt_.info() != Eigen::Success || !(d.minCoeff() > 1e-12 * d.maxCoeff()))
    throw NumericalError("boundary_fit", "normal matrix is rank deficient");
}

void BoundaryFit::loads(const Eigen::VectorXcd& arc_data, const Eigen::VectorXcd& chord_data,
                        Eigen::VectorXcd& rhs, double* dd) const {
  if (arc_data.size() + 1 != static_cast<Eigen::Index>(arc_edges_.size()) ||
      chord_data.size() + 1 != static_cast<Eigen::Index>(chord_edges_.size()))
    throw std::invalid_argument("boundary fit: data size mismatch");
  rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(loop_.size()));
  double norm2 = 0.0;
  for (const Seg& s : segs_) {
    const auto& e = s.arc ? arc_edges_ : chord_edges_;
    const Eigen::VectorXcd& d = s.arc ? arc_data : chord_data;
    const double h = s.pb - s.pa;
    auto first = std::upper_bound(e.begin(), e.end(), s.pa) - e.begin() - 1;
    for (auto k = std::max<std::ptrdiff_t>(first, 0); k + 1 < static_cast<std::ptrdiff_t>(e.size()); ++k) {
      if (e[k] >= s.pb) break;
      const double u0 = std::max(s.pa, e[k]), u1 = std::min(s.pb, e[k + 1]);
      if (u1 <= u0) continue;
      const double ib = ((u1 - s.pa) * (u1 - s.pa) - (u0 - s.pa) * (u0 - s.pa)) / (2.0 * h);
      const double ia = (u1 - u0) - ib;
      rhs(s.a) += d(k) * ia * s.scale;
      rhs(s.b) += d(k) * ib * s.scale;
      norm2 += std::norm(d(k)) * (u1 - u0) * s.scale;
    }
  }
  if (dd) *dd = norm2;
}

Eigen::VectorXcd BoundaryFit::fit(const Eigen::VectorXcd& arc_data, const Eigen::VectorXcd& chord_data) const {
  Eigen::VectorXcd rhs;
  loads(arc_data, chord_data, rhs, nullptr);
  Eigen::VectorXcd out(rhs.size());
  out.real() = ldlt_.solve(Eigen::VectorXd(rhs.real()));
  out.imag() = ldlt_.solve(Eigen::VectorXd(rhs.imag()));
  return out;
}

double BoundaryFit::misfit(const Eigen::VectorXcd& coef, const Eigen::VectorXcd& arc_data,
                           const Eigen::VectorXcd& chord_data) const {
  Eigen::VectorXcd rhs;
  double dd = 0.0;
  loads(arc_data, chord_data, rhs, &dd);
  const Eigen::VectorXcd Ga = G_.cast<cplx>() * coef;
  return (coef.dot(Ga)).real() - 2.0 * (coef.dot(rhs)).real() + dd;
}

PompeiuKernels::PompeiuKernels(const Triangulation& tri, const Arc& arc, const Chord& chord,
                               const std::vector<cplx>& pts, bool with_chord) {
  const int P = static_cast<int>(pts.size()), L = tri.num_triangles(), K = arc.size(), N = chord.N;
  area.resize(P, L);
  this->arc.resize(P, K);
  if (with_chord) this->chord.resize(P, N);
  const auto& r = tri.centroids();
  const auto& A = tri.areas();
#pragma omp parallel for schedule(static)
  for (int l = 0; l < L; ++l)
    for (int p = 0; p < P; ++p) area(p, l) = -A[l] / (kPi * (r[l] - pts[p]));
  for (int k = 0; k < K; ++k) {
    const cplx w = arc.derivatives()[k] * arc.weights()[k] / kTwoPiI;
    for (int p = 0; p < P; ++p) this->arc(p, k) = w / (arc.points()[k] - pts[p]);
  }
  if (with_chord)
    for (int n = 0; n < N; ++n)
      for (int p = 0; p < P; ++p) this->chord(p, n) = chord.dx() / (kTwoPiI * (chord.node(n) - pts[p]));
}

Eigen::VectorXcd PompeiuKernels::apply(const Eigen::VectorXcd& f, const Eigen::VectorXcd& arc_data,
                                       const Eigen::VectorXcd& chord_data) const {
  Eigen::VectorXcd out = area * f + arc * arc_data;
  if (chord.size() > 0) out += chord * chord_data;
  return out;
}

Eigen::VectorXcd cauchy_pompeiu(const Triangulation& tri, const Eigen::VectorXcd& f, const Arc& arc,
                                const Eigen::VectorXcd& arc_data, const Chord& chord,
                                const Eigen::VectorXcd& chord_data, const std::vector<cplx>& pts) {
  // Matrix-free: the kernel matrices would be P x L.
  const int P = static_cast<int>(pts.size());
  const auto& r = tri.centroids();
  const auto& A = tri.areas();
  Eigen::VectorXcd out(P);
#pragma omp parallel for schedule(static)
  for (int p = 0; p < P; ++p) {
    const cplx z = pts[p];
    cplx s = 0.0;
    for (int l = 0; l < tri.num_triangles(); ++l) s -= A[l] * f(l) / (kPi * (r[l] - z));
    for (int k = 0; k < arc.size(); ++k)
      s += arc.derivatives()[k] * arc.weights()[k] * arc_data(k) / (kTwoPiI * (arc.points()[k] - z));
    for (int n = 0; n < chord.N; ++n) s += chord.dx() * chord_data(n) / (kTwoPiI * (chord.node(n) - z));
    out(p) = s;
  }
  return out;
}

SourceField assemble_source(const P1Field& I0, const P1Field& Im1, const transforms::MediumModel& medium,
                            const Triangulation& tri, const std::vector<bool>* exclude) {
  const int L = tri.num_triangles();
  SourceField q;
  q.re.resize(L);
  q.im.resize(L);
  if (exclude && static_cast<int>(exclude->size()) != L)
    throw std::invalid_argument("assemble_source: mask size mismatch");
  double re2 = 0.0, im2 = 0.0, re2a = 0.0, im2a = 0.0;
  for (int l = 0; l < L; ++l) {
    const cplx r = tri.centroids()[l];
    const double coef = medium.mu_t(r) - 2.0 * kPi * medium.mu_s(r) * medium.p_mode(0);
    const cplx a = Im1.a()(l), b = Im1.b()(l), i0 = I0.at_centroid(l);
    q.re(l) = a.real() + b.imag() + coef * i0.real();
    q.im(l) = a.imag() - b.real() + coef * i0.imag();
    if (q.re(l) < 0.0) ++q.negative;
    const double wr = tri.areas()[l] * q.re(l) * q.re(l), wi = tri.areas()[l] * q.im(l) * q.im(l);
    re2a += wr;
    im2a += wi;
    if (exclude && (*exclude)[l]) continue;
    re2 += wr;
    im2 += wi;
  }
  q.re_norm = std::sqrt(re2);
  q.im_norm = std::sqrt(im2);
  q.re_norm_all = std::sqrt(re2a);
  q.im_norm_all = std::sqrt(im2a);
  return q;
}

int select_S(const Eigen::MatrixXcd& alpha, const Eigen::MatrixXcd& beta, double threshold, int M) {
  const auto na = transforms::column_max_abs(alpha);
  const auto nb = transforms::column_max_abs(beta);
  const int cap = static_cast<int>(std::min(na.size(), nb.size()));
  if (cap == 0) throw std::invalid_argument("select_S: empty tables");
  std::vector<double> curve(cap);
  for (int m = 0; m < cap; ++m) curve[m] = std::max(na[m], nb[m]);
  if (!(curve[cap - 1] < threshold))
    throw NumericalError("select_S", "tables do not decay below the threshold within the cap", curve);
  int S = cap - 1;
  while (S > 0 && curve[S - 1] < threshold) --S;
  return std::max(S, M + 3);
}

int argmin_first(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("argmin_first: empty");
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i)
    if (values[i] < values[best]) best = i;
  return best;
}

}  // namespace arcrte::reconstruct
