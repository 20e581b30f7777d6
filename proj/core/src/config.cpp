#include "arcrte/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace arcrte::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T number(const std::string& key, const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("bad value for " + key + ": '" + v + "'");
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double RunConfig::effective_epsilon() const {
  if (epsilon) return *epsilon;
  return variant == csie::Variant::CutOff ? 0.0 : 0.01;
}

void RunConfig::validate() const {
  auto need = [](bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(K >= 1 && T >= 1 && N >= 1, "K, T and N must be positive");
  need(S >= 0, "S must be >= 0 (0 selects automatically)");
  need(M >= 0 && M_lo >= 1 && M_hi >= M_lo, "invalid M or M range");
  const int m_top = M > 0 ? M : M_hi;
  if (S > 0) {
    need(S >= m_top + 3, "S must be >= M + 3");
    need(T >= 2 * S, "T must be >= 2S");
  }
  need(variant != csie::Variant::ExLog || N >= 3, "ex-log needs N >= 3");
  need(effective_epsilon() >= 0.0, "epsilon must be >= 0");
  need(mesh_target >= 8, "mesh_target must be >= 8");
  need(hilbert_nodes >= 16, "hilbert_nodes must be >= 16");
  need(T_f >= 90 && T_f % T == 0, "T_f must be >= 90 and a multiple of T");
  need(forward_triangles >= 1000, "forward_triangles must be >= 1000");
  need(noise >= 0.0, "noise must be >= 0");
  need(threads >= 0, "threads must be >= 0");
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "phantom") phantom = v;
  else if (key == "rotation") rotation = number<double>(key, v);
  else if (key == "K") K = number<int>(key, v);
  else if (key == "T") T = number<int>(key, v);
  else if (key == "N") N = number<int>(key, v);
  else if (key == "S") S = v == "auto" ? 0 : number<int>(key, v);
  else if (key == "M") M = v == "sweep" ? 0 : number<int>(key, v);
  else if (key == "M_lo") M_lo = number<int>(key, v);
  else if (key == "M_hi") M_hi = number<int>(key, v);
  else if (key == "epsilon") {
    if (v == "default") epsilon.reset();
    else epsilon = number<double>(key, v);
  } else if (key == "variant") {
    try {
      variant = csie::parse_variant(v);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "rhs") {
    try {
      rhs = csie::parse_rhs_mode(v);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "mesh_target") mesh_target = number<int>(key, v);
  else if (key == "hilbert_nodes") hilbert_nodes = number<int>(key, v);
  else if (key == "s_threshold") s_threshold = number<double>(key, v);
  else if (key == "forward_triangles") forward_triangles = number<int>(key, v);
  else if (key == "T_f") T_f = number<int>(key, v);
  else if (key == "scheme") {
    if (v == "gmres") scheme = forward::Scheme::Gmres;
    else if (v == "source-iteration") scheme = forward::Scheme::SourceIteration;
    else throw ConfigError("unknown scheme '" + v + "'");
  } else if (key == "forward_tol") forward_tol = number<double>(key, v);
  else if (key == "forward_max_iter") forward_max_iter = number<int>(key, v);
  else if (key == "noise") noise = number<double>(key, v);
  else if (key == "seed") seed = number<unsigned long long>(key, v);
  else if (key == "out") out = v;
  else if (key == "threads") threads = number<int>(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  os << "phantom = " << phantom << '\n'
     << "rotation = " << fmt(rotation) << '\n'
     << "K = " << K << '\n'
     << "T = " << T << '\n'
     << "N = " << N << '\n'
     << "S = " << (S == 0 ? std::string("auto") : std::to_string(S)) << '\n'
     << "M = " << (M == 0 ? std::string("sweep") : std::to_string(M)) << '\n'
     << "M_lo = " << M_lo << '\n'
     << "M_hi = " << M_hi << '\n'
     << "epsilon = " << (epsilon ? fmt(*epsilon) : std::string("default")) << '\n'
     << "variant = " << csie::to_string(variant) << '\n'
     << "rhs = " << (rhs == csie::RhsMode::Midpoint ? "midpoint" : "cell-average") << '\n'
     << "mesh_target = " << mesh_target << '\n'
     << "hilbert_nodes = " << hilbert_nodes << '\n'
     << "s_threshold = " << fmt(s_threshold) << '\n'
     << "forward_triangles = " << forward_triangles << '\n'
     << "T_f = " << T_f << '\n'
     << "scheme = " << (scheme == forward::Scheme::Gmres ? "gmres" : "source-iteration") << '\n'
     << "forward_tol = " << fmt(forward_tol) << '\n'
     << "forward_max_iter = " << forward_max_iter << '\n'
     << "noise = " << fmt(noise) << '\n'
     << "seed = " << seed << '\n'
     << "out = " << out << '\n'
     << "threads = " << threads << '\n';
  return os.str();
}

pipeline::ReconstructOptions RunConfig::reconstruct_options() const {
  pipeline::ReconstructOptions o;
  o.N = N;
  o.S = S;
  o.mesh_target = mesh_target;
  o.hilbert_nodes = hilbert_nodes;
  o.variant = variant;
  o.epsilon = effective_epsilon();
  o.rhs = rhs;
  o.s_threshold = s_threshold;
  o.M_min = M > 0 ? M : M_lo;
  return o;
}

forward::ForwardOptions RunConfig::forward_options() const {
  forward::ForwardOptions o;
  o.mesh_triangles = forward_triangles;
  o.directions = T_f;
  o.tol = forward_tol;
  o.max_iter = forward_max_iter;
  o.scheme = scheme;
  return o;
}

}  // namespace arcrte::harness
