#include "arcrte/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace arcrte::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream is(line);
  while (std::getline(is, tok, ',')) out.push_back(tok);
  return out;
}

std::vector<std::string> row(std::istream& is, std::size_t n, const std::string& what) {
  std::string line;
  if (!std::getline(is, line)) return {};
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto f = split(line);
  if (f.size() != n) throw ConfigError(what + ": malformed row '" + line + "'");
  return f;
}

double num(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": bad number '" + s + "'");
  }
}

}  // namespace

void expect_header(std::istream& is, const std::string& expected, const std::string& what) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError(what + ": missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) throw ConfigError(what + ": unknown header '" + line + "'");
}

void write_measurement(std::ostream& os, const forward::BoundaryMeasurement& m) {
  os << std::setprecision(17);
  os << "K,T,c,arc_id\n" << m.K << ',' << m.T << ',' << m.c << ',' << m.arc_id << '\n';
  os << "k,t,value\n";
  for (int k = 0; k < m.K; ++k)
    for (int t = 0; t < m.T; ++t) os << k << ',' << t << ',' << m.values(k, t) << '\n';
}

forward::BoundaryMeasurement read_measurement(std::istream& is) {
  const std::string what = "measurement";
  expect_header(is, "K,T,c,arc_id", what);
  auto h = row(is, 4, what);
  if (h.empty()) throw ConfigError(what + ": missing size row");
  forward::BoundaryMeasurement m;
  m.K = static_cast<int>(num(h[0], what));
  m.T = static_cast<int>(num(h[1], what));
  m.c = num(h[2], what);
  m.arc_id = h[3];
  if (m.K < 1 || m.T < 1) throw ConfigError(what + ": bad sizes");
  expect_header(is, "k,t,value", what);
  m.values = Eigen::MatrixXd::Zero(m.K, m.T);
  long count = 0;
  for (auto r = row(is, 3, what); !r.empty(); r = row(is, 3, what)) {
    const int k = static_cast<int>(num(r[0], what)), t = static_cast<int>(num(r[1], what));
    if (k < 0 || k >= m.K || t < 0 || t >= m.T) throw ConfigError(what + ": index out of range");
    m.values(k, t) = num(r[2], what);
    ++count;
  }
  if (count != static_cast<long>(m.K) * m.T) throw ConfigError(what + ": wrong number of rows");
  return m;
}

void write_measurement(const std::string& path, const forward::BoundaryMeasurement& m) {
  std::ostringstream os;
  write_measurement(os, m);
  write_file(path, os.str());
}

forward::BoundaryMeasurement read_measurement(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open measurement '" + path + "'");
  return read_measurement(f);
}

void write_source(std::ostream& os, const std::vector<cplx>& centroids, const reconstruct::SourceField& q) {
  os << std::setprecision(17) << "triangle,cx,cy,re_q,im_q\n";
  for (std::size_t l = 0; l < centroids.size(); ++l)
    os << l << ',' << centroids[l].real() << ',' << centroids[l].imag() << ',' << q.re(l) << ','
       << q.im(l) << '\n';
}

std::vector<SourceRow> read_source(std::istream& is) {
  const std::string what = "source";
  expect_header(is, "triangle,cx,cy,re_q,im_q", what);
  std::vector<SourceRow> out;
  for (auto r = row(is, 5, what); !r.empty(); r = row(is, 5, what))
    out.push_back({static_cast<int>(num(r[0], what)), num(r[1], what), num(r[2], what), num(r[3], what),
                   num(r[4], what)});
  return out;
}

void write_cond(std::ostream& os, const std::vector<CondRow>& rows) {
  os << std::setprecision(17) << "variant,epsilon,N,cond2\n";
  for (const auto& r : rows) os << r.variant << ',' << r.epsilon << ',' << r.N << ',' << r.cond2 << '\n';
}

std::vector<CondRow> read_cond(std::istream& is) {
  const std::string what = "cond";
  expect_header(is, "variant,epsilon,N,cond2", what);
  std::vector<CondRow> out;
  for (auto r = row(is, 4, what); !r.empty(); r = row(is, 4, what))
    out.push_back({r[0], num(r[1], what), static_cast<int>(num(r[2], what)), num(r[3], what)});
  return out;
}

void write_sweep(std::ostream& os, const std::vector<std::pair<int, double>>& rows) {
  os << std::setprecision(17) << "M,im_norm\n";
  for (const auto& [M, v] : rows) os << M << ',' << v << '\n';
}

std::vector<std::pair<int, double>> read_sweep(std::istream& is) {
  const std::string what = "sweep";
  expect_header(is, "M,im_norm", what);
  std::vector<std::pair<int, double>> out;
  for (auto r = row(is, 2, what); !r.empty(); r = row(is, 2, what))
    out.emplace_back(static_cast<int>(num(r[0], what)), num(r[1], what));
  return out;
}

void write_trace(std::ostream& os, const std::vector<double>& x, const Eigen::VectorXcd& values) {
  os << std::setprecision(17) << "node,x,re,im\n";
  for (std::size_t n = 0; n < x.size(); ++n)
    os << n << ',' << x[n] << ',' << values(n).real() << ',' << values(n).imag() << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << content;
  if (!f) throw ConfigError("write failed for '" + path + "'");
}

}  // namespace arcrte::io
