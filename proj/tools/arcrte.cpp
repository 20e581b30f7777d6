#include <omp.h>

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "arcrte/commands.hpp"

namespace {

template <class T>
std::vector<T> parse_list(const std::string& s) {
  std::vector<T> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    std::istringstream ts(tok);
    T v;
    if (!(ts >> v)) throw arcrte::ConfigError("bad list element '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace arcrte;
  CLI::App app{"Partial-arc inverse source reconstruction for 2D radiative transport"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, variant, out, measurement = "";
  std::vector<std::string> overrides;
  int threads = 0;
  double epsilon = -1.0;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--threads", threads, "OpenMP worker count (0 keeps the default)");
  app.add_option("--variant", variant, "CSIE discretization: cutoff or exlog");
  app.add_option("--epsilon", epsilon, "CSIE regularization");
  app.add_option("--out", out, "output directory");
  app.add_option("--set", overrides, "extra key=value config overrides");

  auto* syn = app.add_subcommand("synthesize", "forward-solve the phantom and write the measurement");
  auto* rec = app.add_subcommand("reconstruct", "reconstruct q from a measurement file");
  rec->add_option("measurement", measurement, "measurement CSV")->required();
  auto* sel = app.add_subcommand("select-m", "sweep M and report ||Im q||");
  sel->add_option("measurement", measurement, "measurement CSV")->required();
  auto* cond = app.add_subcommand("cond-study", "condition numbers of the discrete CSIE");
  std::string Ns = "10,20,50,100,200,500,1000,2000", eps = "0,0.01,0.1", variants = "cutoff,exlog";
  cond->add_option("--n", Ns, "comma-separated N values");
  cond->add_option("--eps", eps, "comma-separated epsilon values");
  cond->add_option("--variants", variants, "comma-separated variants");
  auto* mesh = app.add_subcommand("mesh-export", "write the reconstruction and forward meshes");

  CLI11_PARSE(app, argc, argv);

  try {
    harness::RunConfig cfg;
    if (!config_path.empty()) cfg = harness::RunConfig::load(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!variant.empty()) cfg.set("variant", variant);
    if (epsilon >= 0.0) cfg.epsilon = epsilon;
    if (!out.empty()) cfg.out = out;
    if (threads > 0) cfg.threads = threads;
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    cfg.validate();

    if (*syn) harness::cmd_synthesize(cfg, std::cout);
    else if (*rec) harness::cmd_reconstruct(cfg, measurement, std::cout);
    else if (*sel) harness::cmd_select_m(cfg, measurement, std::cout);
    else if (*mesh) harness::cmd_mesh_export(cfg, std::cout);
    else if (*cond) {
      std::vector<csie::Variant> vs;
      for (const auto& v : parse_list<std::string>(variants)) vs.push_back(csie::parse_variant(v));
      harness::cmd_cond_study(cfg, parse_list<int>(Ns), parse_list<double>(eps), vs, std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure in " << e.stage() << ": " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
