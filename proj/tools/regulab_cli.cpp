#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "regulab/approximate_units.hpp"
#include "regulab/error.hpp"
#include "regulab/euclid.hpp"
#include "regulab/fixtures.hpp"
#include "regulab/heisenberg.hpp"
#include "regulab/io.hpp"
#include "regulab/regularity.hpp"

namespace fs = std::filesystem;
using namespace regulab;

namespace {

enum Exit { kOk = 0, kValidation = 2, kIo = 3, kFloor = 4 };

struct Globals {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

ExperimentConfig load(const Globals& g) {
  ExperimentConfig c = g.config.empty() ? ExperimentConfig{} : load_config(g.config);
  if (g.seed) c.seed = *g.seed;
  if (!g.out.empty()) c.output = g.out;
  return c;
}

fs::path out_dir(const ExperimentConfig& c) {
  fs::create_directories(c.output);
  return c.output;
}

/// The fixture named in the config, truncated at K + extra.
Fixture config_fixture(const ExperimentConfig& c, int extra = 0) {
  if (c.model.manifold == Manifold::Circle) {
    const SpectralModel m = circle_model(c.model.K + extra);
    if (c.fixture == "sawtooth") return circle_sawtooth(m);
    return circle_fixture(c.fixture, m, c.seed);
  }
  return torus_fixture(c.fixture, torus_model(c.model.K + extra));
}

UnitNet config_unit(const ExperimentConfig& c) { return spectral_unit(c.plateau, c.grid, c.model); }

std::vector<NamedNet> named(const std::string& prefix, const std::vector<ScalarNet>& nets) {
  std::vector<NamedNet> out;
  for (std::size_t n = 0; n < nets.size(); ++n) out.push_back({prefix + std::to_string(n), nets[n]});
  return out;
}

void append(std::vector<NamedNet>& a, const std::vector<NamedNet>& b) { a.insert(a.end(), b.begin(), b.end()); }

std::vector<SpectralFunction> torus_windows(const SpectralModel& m, int per_axis, double sigma) {
  const int J = window_band(sigma);
  if (J > m.K) fail(Errc::unresolvable_cutoff, "window band exceeds the truncation");
  std::vector<SpectralFunction> w;
  for (int a = 0; a < per_axis; ++a)
    for (int b = 0; b < per_axis; ++b)
      w.push_back(gaussian_window(torus_model(J), 2 * M_PI * (a + 0.5) / per_axis, sigma,
                                  2 * M_PI * (b + 0.5) / per_axis));
  return w;
}

// ---- subcommands ----

int cmd_unit_build(const Globals& g) {
  const ExperimentConfig c = load(g);
  const fs::path out = out_dir(c);
  const UnitNet unit = config_unit(c);
  std::vector<NamedFunction> dist, smooth;
  if (c.model.manifold == Manifold::Circle) {
    auto suite = circle_suite(c.model, c.seed);
    if (!c.suite.empty()) {
      std::vector<Fixture> keep;
      for (const auto& f : suite)
        if (std::find(c.suite.begin(), c.suite.end(), f.name) != c.suite.end()) keep.push_back(f);
      suite = keep;
    }
    dist = singular_members(suite);
    smooth = smooth_members(suite);
  } else {
    for (const char* n : {"delta", "sawtooth", "tensor_jump"})
      dist.push_back({n, torus_fixture(n, c.model).u});
    for (const char* n : {"analytic", "trig", "bump"}) smooth.push_back({n, torus_fixture(n, c.model).u});
  }
  MauOptions opt;
  opt.thresholds = c.thresholds;
  const ValidationReport rep = validate_mau(unit, dist, smooth, c.grading, opt);
  write_unit(out / "unit", unit);
  write_json(out / "validation.json", rep);
  write_nets_csv(out / "unit_nets.csv", named("op_norm_", operator_nets(unit, c.grading.n_max)));
  if (!rep.pass()) {
    std::cerr << "validation failed: " << rep.first_failure() << '\n';
    return kValidation;
  }
  std::cout << "unit built and validated: " << (out / "unit").string() << '\n';
  return kOk;
}

int cmd_classify(const Globals& g, const std::string& input) {
  const ExperimentConfig c = load(g);
  const auto nets = read_nets_csv(fs::path(input));
  std::map<std::string, ScalarNet> m;
  json per = json::array();
  for (const auto& n : nets) {
    m[n.id] = n.net;
    const Classification k = classify_net(n.net, c.thresholds);
    const OrderEstimate e = estimate_order(n.net, c.thresholds.tail_fraction);
    json row{{"seminorm_id", n.id}};
    row.update(json(e));
    row["classification"] = to_string(k.kind);
    per.push_back(row);
  }
  const Classification all = classify_net(m, c.thresholds);
  json j{{"classification", to_string(all.kind)}, {"order", number(all.order)}, {"nets", per}};
  write_json(out_dir(c) / "classification.json", j);
  std::cout << to_string(all.kind) << '\n';
  return kOk;
}

int cmd_order(const Globals& g) {
  const ExperimentConfig c = load(g);
  const UnitNet unit = config_unit(c);
  const Fixture f = config_fixture(c);
  const auto nets = sobolev_nets(unit, f.u, c.grading.n_max);
  std::map<std::string, ScalarNet> m;
  for (std::size_t n = 0; n < nets.size(); ++n) m["sobolev_" + std::to_string(n)] = nets[n];
  const Classification k = classify_net(m, c.thresholds);
  const fs::path out = out_dir(c);
  write_nets_csv(out / "order_nets.csv", named("sobolev_", nets));
  write_json(out / "order.json", json{{"fixture", f.name}, {"model", c.model}, {"grid", c.grid}, {"result", k}});
  std::printf("%s order %.6g\n", to_string(k.kind), k.order);
  return kOk;
}

int cmd_sobolev(const Globals& g) {
  const ExperimentConfig c = load(g);
  const Fixture f = config_fixture(c);
  const SobolevEstimate s = sobolev_order_estimate(f.u);
  write_json(out_dir(c) / "sobolev.json",
             json{{"fixture", f.name}, {"model", c.model}, {"declared", number(f.sobolev_order)}, {"estimate", s}});
  std::printf("%s sobolev order %.6g\n", f.name.c_str(), s.order);
  return kOk;
}

SingularSupportReport run_singsupp(const ExperimentConfig& c, const UnitNet& unit, json& meta) {
  const int J = window_band(c.sigma);
  const Fixture f = config_fixture(c, J);
  const auto windows = c.model.manifold == Manifold::Circle ? circle_windows(c.model, c.windows, c.sigma)
                                                            : torus_windows(c.model, c.windows, c.sigma);
  meta = json{{"fixture", f.name}, {"windows", c.windows}, {"sigma", c.sigma}};
  return singular_support_map(f.u, unit, windows, c.grading, c.signature);
}

WavefrontReport run_wavefront(const ExperimentConfig& c, const UnitNet& unit) {
  if (c.model.manifold != Manifold::Torus2) fail(Errc::model_mismatch, "wavefront needs the torus model");
  const Fixture f = config_fixture(c, window_band(c.sigma));
  WavefrontOptions opt;
  opt.windows_per_axis = c.windows;
  opt.sigma = c.sigma;
  opt.bins = c.bins;
  opt.grading = c.grading;
  opt.thresholds = c.signature;
  return wavefront_estimate(f.u, unit, opt);
}

int cmd_singsupp(const Globals& g) {
  const ExperimentConfig c = load(g);
  json meta;
  const auto rep = run_singsupp(c, config_unit(c), meta);
  meta["report"] = rep;
  write_json(out_dir(c) / "singsupp.json", meta);
  std::cout << "singular windows:";
  for (int w : rep.singular_windows()) std::cout << ' ' << w;
  std::cout << '\n';
  return kOk;
}

int cmd_wavefront(const Globals& g) {
  const ExperimentConfig c = load(g);
  const auto rep = run_wavefront(c, config_unit(c));
  write_json(out_dir(c) / "wavefront.json", json{{"fixture", c.fixture}, {"report", rep}});
  std::cout << rep.singular().size() << " singular (window, bin) pairs, " << rep.undetermined().size()
            << " undetermined\n";
  return kOk;
}

int cmd_regularize(const Globals& g, const std::string& unit_path) {
  const ExperimentConfig c = load(g);
  const fs::path out = out_dir(c);
  const UnitNet unit = unit_path.empty() ? config_unit(c) : read_unit(unit_path);
  if (!(unit.model() == c.model)) fail(Errc::model_mismatch, "unit model differs from the configured model");
  const Fixture f = config_fixture(c);
  const auto phi = DistributionEvaluator::from_distribution(f.u);
  const auto ref = evaluator_nets(DistributionEvaluator::from_distribution(SpectralFunction{c.model,
                                      Eigen::VectorXcd::Ones(c.model.size())}),
                                  unit, c.grading.n_max);
  const RegSignature reg = regular_signature(phi, unit, c.grading, c.signature, &ref);
  json rep{{"fixture", f.name}, {"model", c.model}, {"reg", reg}};
  std::vector<NamedNet> csv = named("reg_", reg.nets);
  if (c.model.manifold == Manifold::Circle) {
    FamilyOptions fo;
    fo.n_random = c.n_random;
    fo.plateau = c.plateau;
    fo.unit_grid = c.grid;
    fo.seed = c.seed;
    const auto family = make_test_family(c.model, fo, f.u);
    rep["tameness"] = tameness_fit(phi, family, c.tameness);
    json meta;
    const auto ss = run_singsupp(c, unit, meta);
    meta["report"] = ss;
    rep["singsupp"] = meta;
  } else {
    rep["wavefront"] = run_wavefront(c, unit);
  }
  write_json(out / "regularity.json", rep);
  write_nets_csv(out / "regularity_nets.csv", csv);
  std::cout << f.name << ": " << to_string(reg.kind) << '\n';
  return kOk;
}

cplx bump3(const HPoint& p) {
  const double r2 = (p.x[0] * p.x[0] + p.xi[0] * p.xi[0] + p.t * p.t) / 4;
  return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
}

int cmd_heisenberg_demo(const Globals& g) {
  const ExperimentConfig c = load(g);
  const auto& h = c.heisenberg;
  const fs::path out = out_dir(c);
  const Mollifier m = gauss_hermite_mollifier(h.hermite_order, 3, h.step, h.half);
  std::vector<HPoint> pts;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j)
      for (int k = -2; k <= 2; ++k) pts.push_back({{0.4 * i}, {0.4 * j}, 0.4 * k});
  const HeisConvergence conv = heis_convergence(m, h.grid, bump3, pts);

  const auto cfg = default_transform_config(c.stft.T, c.stft.dt, c.stft.X, c.stft.dx, c.stft.dxi, c.stft.tau_max,
                                            c.stft.dtau);
  const LineGrid& t = cfg.g.grid;
  std::vector<std::pair<std::string, Sampled1D>> suite{
      {"gaussian", cfg.g}, {"bump", sample_line(t, [](double x) { return cplx(smooth_bump(x / 2)); })}};
  const Mollifier ms = gauss_hermite_mollifier(h.hermite_order, 3, h.step, h.half);
  const SchrodingerUnitReport sch = schrodinger_unit(ms, h.grid, t, suite);

  std::vector<NamedNet> csv{{"heis_sup_error", conv.error}, {"heis_floor", conv.floor}};
  for (std::size_t k = 0; k < sch.names.size(); ++k) csv.push_back({"schrodinger_" + sch.names[k], sch.errors[k]});
  write_nets_csv(out / "heisenberg_nets.csv", csv);
  write_json(out / "heisenberg.json",
             json{{"mollifier", json{{"kind", to_string(m.kind)}, {"moment_order", m.moment_order},
                                     {"step", h.step}, {"half", h.half}}},
                  {"convolution", conv},
                  {"schrodinger", sch}});
  std::printf("heis_convolve slope %.4f over %d usable eps\n", conv.fit.slope, conv.usable);
  if (conv.usable < h.grid.count) {
    std::cerr << "resolution floor reached at eps " << conv.smallest_usable_eps << '\n';
    return kFloor;
  }
  if (conv.fit.slope < h.min_slope) {
    std::cerr << "convergence slope below " << h.min_slope << '\n';
    return kValidation;
  }
  return kOk;
}

int cmd_stft_roundtrip(const Globals& g) {
  const ExperimentConfig c = load(g);
  const auto cfg = default_transform_config(c.stft.T, c.stft.dt, c.stft.X, c.stft.dx, c.stft.dxi, c.stft.tau_max,
                                            c.stft.dtau);
  cfg.validate();
  const LineGrid& t = cfg.g.grid;
  std::vector<std::pair<std::string, Sampled1D>> suite{
      {"window", cfg.g},
      {"bump", sample_line(t, [](double x) { return cplx(smooth_bump(x)); })},
      {"shifted_gaussian", sample_line(t, [](double x) { return cplx(unit_gaussian(x - 0.75)); })}};
  json rows = json::array();
  bool ok = true;
  for (const auto& [name, f] : suite) {
    const auto S = stft(cfg.g, f, cfg.x, cfg.xi);
    const double stft_err = (stft_invert(cfg.g, S).v - f.v).cwiseAbs().maxCoeff();
    const double cheap_err = (schrodinger_apply(cheap_factorize(f, cfg), cfg.g).v - f.v).cwiseAbs().maxCoeff();
    ok = ok && stft_err <= 1e-6 && cheap_err <= 1e-5;
    rows.push_back(json{{"name", name}, {"stft_error", stft_err}, {"cheap_error", cheap_err}});
  }
  write_json(out_dir(c) / "stft.json", json{{"members", rows}, {"stft_tolerance", 1e-6}, {"cheap_tolerance", 1e-5}});
  std::cout << (ok ? "roundtrip ok" : "roundtrip failed") << '\n';
  return ok ? kOk : kValidation;
}

int exit_for(Errc e) {
  switch (e) {
    case Errc::io:
    case Errc::parse:
      return kIo;
    case Errc::resolution_floor:
    case Errc::under_resolved_grid:
    case Errc::unresolvable_cutoff:
      return kFloor;
    default:
      return kValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regulab: approximate units, net asymptotics and regularity classification"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config, "experiment config (JSON)");
  app.add_option("--out", g.out, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");

  std::function<int()> run;
  std::string input, unit_path;

  auto* unit = app.add_subcommand("unit", "approximate units");
  unit->require_subcommand(1);
  unit->add_subcommand("build", "build, validate and serialize the configured unit")->callback([&] {
    run = [&] { return cmd_unit_build(g); };
  });
  auto* classify = app.add_subcommand("classify", "classify nets from a CSV file");
  classify->add_option("input", input, "CSV with epsilon,seminorm_id,value")->required();
  classify->callback([&] { run = [&] { return cmd_classify(g, input); }; });
  auto* reg = app.add_subcommand("regularize", "tameness, Reg signature, singular support or wavefront of a fixture");
  reg->add_option("--unit", unit_path, "directory written by 'unit build'");
  reg->callback([&] { run = [&] { return cmd_regularize(g, unit_path); }; });
  app.add_subcommand("order", "order of the nets ||T_eps u||_n")->callback([&] { run = [&] { return cmd_order(g); }; });
  app.add_subcommand("sobolev", "Sobolev order from dyadic shells")->callback([&] {
    run = [&] { return cmd_sobolev(g); };
  });
  app.add_subcommand("singsupp", "singular support by windows")->callback([&] {
    run = [&] { return cmd_singsupp(g); };
  });
  app.add_subcommand("wavefront", "wavefront set on the torus")->callback([&] {
    run = [&] { return cmd_wavefront(g); };
  });
  auto* heis = app.add_subcommand("heisenberg", "Heisenberg group experiments");
  heis->require_subcommand(1);
  heis->add_subcommand("demo", "heis_convolve and Schrodinger unit convergence")->callback([&] {
    run = [&] { return cmd_heisenberg_demo(g); };
  });
  auto* st = app.add_subcommand("stft", "short-time Fourier transform");
  st->require_subcommand(1);
  st->add_subcommand("roundtrip", "STFT and cheap factorization roundtrips")->callback([&] {
    run = [&] { return cmd_stft_roundtrip(g); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (*seed_opt) g.seed = seed;
  try {
    return run();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
}
