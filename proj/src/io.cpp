#include "regulab/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "regulab/error.hpp"

namespace regulab {

namespace fs = std::filesystem;

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

namespace {

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  fail(Errc::parse, "expected a number, got " + j.dump());
}

const char* manifold_key(Manifold m) { return m == Manifold::Circle ? "circle" : "torus2"; }

Manifold parse_manifold(const std::string& s) {
  if (s == "circle" || s == "Circle") return Manifold::Circle;
  if (s == "torus2" || s == "Torus2" || s == "torus") return Manifold::Torus2;
  fail(Errc::parse, "unknown manifold '" + s + "'");
}

json net_values(const ScalarNet& n) { return numbers(n.values); }

}  // namespace

void to_json(json& j, const EpsilonGrid& g) {
  j = json{{"eps0", g.eps0}, {"ratio", g.ratio}, {"count", g.count}};
}

void from_json(const json& j, EpsilonGrid& g) {
  g = make_eps_grid(j.at("eps0").get<double>(), j.at("ratio").get<double>(), j.at("count").get<int>());
}

void to_json(json& j, const SpectralModel& m) { j = json{{"manifold", manifold_key(m.manifold)}, {"K", m.K}}; }

void from_json(const json& j, SpectralModel& m) {
  const Manifold man = parse_manifold(j.at("manifold").get<std::string>());
  const int K = j.at("K").get<int>();
  m = man == Manifold::Circle ? circle_model(K) : torus_model(K);
}

void to_json(json& j, const OrderEstimate& e) {
  j = json{{"slope", number(e.slope)},         {"intercept", number(e.intercept)},
           {"r_squared", number(e.r_squared)}, {"first", e.first},
           {"last", e.last},                   {"floored", e.floored},
           {"identically_zero", e.identically_zero}};
}

void to_json(json& j, const Classification& c) {
  j = json{{"classification", to_string(c.kind)}, {"order", number(c.order)}};
  json fits = json::object();
  for (const auto& [k, v] : c.fits) fits[k] = v;
  j["fits"] = fits;
}

void to_json(json& j, const SignatureReport& r) {
  j = json{{"signature", to_string(r.kind)},
           {"spread", number(r.spread)},
           {"below_floor", r.below_floor},
           {"slopes", numbers(r.slopes)}};
}

void to_json(json& j, const ValidationReport& r) {
  j = json{{"pass", r.pass()}, {"first_failure", r.first_failure()}};
  j["item_a"] = json{{"pass", r.item_a}, {"order", number(r.item_a_order)}, {"slopes", numbers(r.item_a_slopes)}};
  json b = json::array();
  for (const auto& x : r.b_results) b.push_back(json{{"name", x.name}, {"pass", x.pass}, {"values", numbers(x.values)}});
  j["item_b"] = json{{"pass", r.item_b}, {"members", b}};
  json c = json::array();
  for (const auto& x : r.c_results)
    c.push_back(json{{"name", x.name}, {"pass", x.pass}, {"exact_zero", x.exact_zero}, {"slopes", numbers(x.slopes)}});
  j["item_c"] = json{{"pass", r.item_c}, {"members", c}};
}

void to_json(json& j, const LocalityReport& r) {
  j = json{{"delta", r.delta},
           {"pass", r.pass},
           {"remainder_class", r.remainder_class},
           {"grid", r.remainder_sup.grid},
           {"remainder_sup", net_values(r.remainder_sup)},
           {"local_sup", net_values(r.local_sup)}};
}

void to_json(json& j, const SobolevEstimate& s) {
  j = json{{"order", number(s.order)}, {"fit", s.fit}, {"shell_L", numbers(s.shell_L)},
           {"shell_energy", numbers(s.shell_energy)}};
}

void to_json(json& j, const TamenessEstimate& t) {
  j = json{{"determined", t.determined}, {"degree", number(t.degree)}, {"k", t.k}, {"b", t.b},
           {"uniform_over_r", t.uniform_over_r}};
  json C = json::object(), R = json::object();
  for (const auto& [n, v] : t.C) C[std::to_string(n)] = number(v);
  for (const auto& [n, v] : t.residuals) R[std::to_string(n)] = number(v);
  j["C_table"] = C;
  j["residuals"] = R;
  json g = json::array();
  for (const auto& [r, s] : t.worst_growth) g.push_back(json{{"r", r}, {"worst_slope", number(s)}});
  j["worst_growth"] = g;
}

void to_json(json& j, const PtBoundReport& r) {
  j = json{{"checked", r.checked},
           {"violations", r.violations},
           {"middle_violations", r.middle_violations},
           {"worst_ratio", number(r.worst_ratio)},
           {"min_slack", number(r.min_slack)}};
}

void to_json(json& j, const RegSignature& r) {
  j = json{{"class", to_string(r.kind)}, {"detail", r.detail}};
  if (!r.nets.empty()) {
    j["grid"] = r.nets.front().grid;
    json n = json::array();
    for (const auto& x : r.nets) n.push_back(net_values(x));
    j["nets"] = n;
  }
}

void to_json(json& j, const SingularSupportReport& r) {
  json w = json::array();
  for (std::size_t i = 0; i < r.windows.size(); ++i) {
    const auto& f = r.windows[i];
    w.push_back(json{{"window", i},
                     {"singular", to_string(f.singular)},
                     {"in_support", f.in_support},
                     {"spread", number(f.spread)},
                     {"below_floor", f.below_floor}});
  }
  j = json{{"singular_windows", r.singular_windows()}, {"support_windows", r.support_windows()}, {"windows", w}};
}

void to_json(json& j, const WavefrontReport& r) {
  json centers = json::array();
  for (const auto& c : r.window_centers) centers.push_back(json::array({c[0], c[1]}));
  json flags = json::array(), spreads = json::array(), slopes = json::array();
  for (std::size_t w = 0; w < r.flags.size(); ++w) {
    json row = json::array();
    for (auto f : r.flags[w]) row.push_back(to_string(f));
    flags.push_back(row);
    spreads.push_back(numbers(r.spreads[w]));
    json srow = json::array();
    for (const auto& s : r.slopes[w]) srow.push_back(numbers(s));
    slopes.push_back(srow);
  }
  json sing = json::array();
  for (auto [w, b] : r.singular()) sing.push_back(json::array({w, b}));
  json und = json::array();
  for (auto [w, b] : r.undetermined()) und.push_back(json::array({w, b}));
  j = json{{"window_centers", centers}, {"bin_centers", numbers(r.bin_centers)},
           {"bin_core", r.bin_core},     {"bin_transition", r.bin_transition},
           {"singular", sing},           {"undetermined", und},
           {"flags", flags},             {"spreads", spreads},
           {"slopes", slopes}};
}

void to_json(json& j, const PsidoShiftReport& r) {
  j = json{{"order", r.order}, {"shift", number(r.shift)}, {"pass", r.pass}, {"base", r.base}, {"shifted", r.shifted}};
}

void to_json(json& j, const EquivarianceReport& r) {
  j = json{{"max_abs", number(r.max_abs)}, {"max_rel", number(r.max_rel)}, {"aliasing", number(r.aliasing)},
           {"rotation", r.rotation},       {"pass", r.pass}};
}

void to_json(json& j, const HeisConvergence& r) {
  j = json{{"grid", r.grid},
           {"error", net_values(r.error)},
           {"floor", net_values(r.floor)},
           {"fit", r.fit},
           {"usable", r.usable},
           {"smallest_usable_eps", number(r.smallest_usable_eps)}};
}

void to_json(json& j, const SchrodingerUnitReport& r) {
  json m = json::array();
  for (std::size_t i = 0; i < r.names.size(); ++i)
    m.push_back(json{{"name", r.names[i]}, {"error", net_values(r.errors[i])}, {"fit", r.fits[i]},
                     {"usable", r.usable[i]}});
  j = json{{"grid", r.grid},
           {"floor_eps", number(r.floor_eps)},
           {"l1_norm", net_values(r.l1_norm)},
           {"kernel_norm", net_values(r.kernel_norm)},
           {"members", m}};
}

void to_json(json& j, const HPoint& p) { j = json::array({p.x[0], p.xi[0], p.t}); }

void to_json(json& j, const DistComparison& r) {
  j = json{{"direct", r.direct}, {"displayed", r.displayed}, {"relation", to_string(r.relation)}};
}

void to_json(json& j, const SpectralFunction& f) {
  j = json{{"manifold", manifold_key(f.model.manifold)}, {"K", f.model.K}};
  json c = json::array();
  for (Eigen::Index i = 0; i < f.c.size(); ++i) c.push_back(json::array({f.c[i].real(), f.c[i].imag()}));
  j["coeffs"] = c;
}

void from_json(const json& j, SpectralFunction& f) {
  from_json(j, f.model);
  const auto& c = j.at("coeffs");
  if (!c.is_array() || static_cast<Eigen::Index>(c.size()) != f.model.size())
    fail(Errc::parse, "coefficient count does not match the model");
  f.c.resize(f.model.size());
  for (Eigen::Index i = 0; i < f.c.size(); ++i) {
    const auto& e = c[static_cast<std::size_t>(i)];
    if (!e.is_array() || e.size() != 2) fail(Errc::parse, "coefficient must be [re, im]");
    f.c[i] = cplx(read_number(e[0]), read_number(e[1]));
  }
}

void write_json(const fs::path& p, const json& j) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) fail(Errc::io, "cannot open " + p.string() + " for writing");
  os << j.dump(2) << '\n';
  if (!os) fail(Errc::io, "write failed: " + p.string());
}

json read_json(const fs::path& p) {
  std::ifstream is(p);
  if (!is) fail(Errc::io, "cannot open " + p.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    fail(Errc::parse, p.string() + ": " + e.what());
  }
}

// ---- CSV ----

void write_nets_csv(std::ostream& os, const std::vector<NamedNet>& nets) {
  os << "epsilon,seminorm_id,value\n";
  char buf[64];
  for (const auto& n : nets) {
    if (n.id.find_first_of(",\n\"") != std::string::npos) fail(Errc::parse, "seminorm id must not contain , or quotes");
    for (int j = 0; j < n.net.grid.count; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", n.net.grid.at(j));
      os << buf << ',' << n.id << ',';
      std::snprintf(buf, sizeof buf, "%.17g", n.net.values[static_cast<std::size_t>(j)]);
      os << buf << '\n';
    }
  }
}

void write_nets_csv(const fs::path& p, const std::vector<NamedNet>& nets) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) fail(Errc::io, "cannot open " + p.string() + " for writing");
  write_nets_csv(os, nets);
}

EpsilonGrid infer_grid(const std::vector<double>& eps, double rel_tol) {
  if (eps.size() < 2) fail(Errc::parse, "a net needs at least two epsilon values");
  for (double e : eps)
    if (!(e > 0.0) || !std::isfinite(e)) fail(Errc::parse, "epsilon values must be positive and finite");
  const int n = static_cast<int>(eps.size());
  const double ratio = std::pow(eps.back() / eps.front(), 1.0 / (n - 1));
  if (!(ratio < 1.0)) fail(Errc::parse, "epsilon values must decrease");
  EpsilonGrid g = make_eps_grid(eps.front(), ratio, n);
  for (int j = 0; j < n; ++j)
    if (std::abs(g.at(j) - eps[static_cast<std::size_t>(j)]) > rel_tol * eps[static_cast<std::size_t>(j)])
      fail(Errc::parse, "epsilon values are not a geometric grid (row " + std::to_string(j) + ")");
  return g;
}

std::vector<NamedNet> read_nets_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail(Errc::parse, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "epsilon,seminorm_id,value") fail(Errc::parse, "header must be epsilon,seminorm_id,value");
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
      fail(Errc::parse, "line " + std::to_string(lineno) + ": expected three fields");
    const std::string id = line.substr(c1 + 1, c2 - c1 - 1);
    auto parse = [&](const std::string& s) {
      // strtod rather than stod: subnormal values set ERANGE but are still exact round trips
      char* end = nullptr;
      const double v = s.empty() ? 0.0 : std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size()) fail(Errc::parse, "line " + std::to_string(lineno) + ": bad number '" + s + "'");
      return v;
    };
    const double e = parse(line.substr(0, c1));
    const double v = parse(line.substr(c2 + 1));
    if (id.empty()) fail(Errc::parse, "line " + std::to_string(lineno) + ": empty seminorm_id");
    if (!rows.count(id)) order.push_back(id);
    rows[id].first.push_back(e);
    rows[id].second.push_back(v);
  }
  if (order.empty()) fail(Errc::parse, "CSV has no rows");
  std::vector<NamedNet> out;
  for (const auto& id : order) {
    const auto& [eps, vals] = rows[id];
    out.push_back({id, make_scalar_net(infer_grid(eps), vals)});
  }
  return out;
}

std::vector<NamedNet> read_nets_csv(const fs::path& p) {
  std::ifstream is(p);
  if (!is) fail(Errc::io, "cannot open " + p.string());
  return read_nets_csv(is);
}

// ---- binary helpers ----

namespace {

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) fail(Errc::io, "truncated binary input");
  return v;
}

void expect_magic(std::istream& is, const char* magic) {
  char m[4];
  is.read(m, 4);
  if (!is || std::memcmp(m, magic, 4) != 0) fail(Errc::parse, std::string("missing ") + magic + " header");
}

}  // namespace

void write_operator(std::ostream& os, const SmoothingOp& T) {
  os.write("RLOP", 4);
  put<std::int32_t>(os, T.model.manifold == Manifold::Circle ? 0 : 1);
  put<std::int32_t>(os, T.model.K);
  put<std::int32_t>(os, T.is_diagonal ? 1 : 0);
  const std::int64_t n = T.size();
  put<std::int64_t>(os, n);
  if (T.is_diagonal) {
    for (Eigen::Index i = 0; i < n; ++i) {
      put(os, T.diag[i].real());
      put(os, T.diag[i].imag());
    }
  } else {
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) {
        put(os, T.dense(r, c).real());
        put(os, T.dense(r, c).imag());
      }
  }
}

SmoothingOp read_operator(std::istream& is) {
  expect_magic(is, "RLOP");
  const auto man = get<std::int32_t>(is);
  const auto K = get<std::int32_t>(is);
  const auto diag = get<std::int32_t>(is);
  const auto n = get<std::int64_t>(is);
  if ((man != 0 && man != 1) || K < 0) fail(Errc::parse, "bad operator header");
  const SpectralModel m = man == 0 ? circle_model(K) : torus_model(K);
  if (n != m.size()) fail(Errc::parse, "operator size does not match its model");
  auto z = [&] {
    const double re = get<double>(is);
    const double im = get<double>(is);
    return cplx(re, im);
  };
  if (diag) {
    Eigen::VectorXcd d(n);
    for (Eigen::Index i = 0; i < n; ++i) d[i] = z();
    return SmoothingOp::diagonal(m, std::move(d));
  }
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) a(r, c) = z();
  return SmoothingOp::from_matrix(m, std::move(a));
}

namespace {

std::string blob_name(int j) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "op_%03d.bin", j);
  return buf;
}

UnitKind parse_unit_kind(const std::string& s) {
  for (auto k : {UnitKind::SpectralMultiplier, UnitKind::EuclideanMollifier, UnitKind::HeisenbergMollifier,
                 UnitKind::SchrodingerTransform, UnitKind::Pushforward, UnitKind::Custom})
    if (s == to_string(k)) return k;
  fail(Errc::parse, "unknown unit provenance '" + s + "'");
}

}  // namespace

void write_unit(const fs::path& dir, const UnitNet& unit) {
  if (unit.ops.empty()) fail(Errc::empty_input, "unit has no operators");
  fs::create_directories(dir);
  json ops = json::array();
  for (int j = 0; j < unit.grid.count; ++j) {
    const auto name = blob_name(j);
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) fail(Errc::io, "cannot write " + (dir / name).string());
    write_operator(os, unit.ops[static_cast<std::size_t>(j)]);
    ops.push_back(json{{"epsilon", unit.grid.at(j)}, {"file", name}});
  }
  json h{{"provenance", to_string(unit.kind)}, {"detail", unit.detail}, {"model", unit.model()},
         {"grid", unit.grid}, {"ops", ops}};
  write_json(dir / "unit.json", h);
}

UnitNet read_unit(const fs::path& dir) {
  const json h = read_json(dir / "unit.json");
  UnitNet u;
  try {
    u.kind = parse_unit_kind(h.at("provenance").get<std::string>());
    u.detail = h.value("detail", "");
    u.grid = h.at("grid").get<EpsilonGrid>();
    const SpectralModel m = h.at("model").get<SpectralModel>();
    const auto& ops = h.at("ops");
    if (static_cast<int>(ops.size()) != u.grid.count) fail(Errc::parse, "operator count does not match the grid");
    for (const auto& o : ops) {
      std::ifstream is(dir / o.at("file").get<std::string>(), std::ios::binary);
      if (!is) fail(Errc::io, "missing operator blob " + o.at("file").get<std::string>());
      u.ops.push_back(read_operator(is));
      if (!(u.ops.back().model == m)) fail(Errc::model_mismatch, "operator blob model differs from the header");
    }
  } catch (const json::exception& e) {
    fail(Errc::parse, std::string("unit.json: ") + e.what());
  }
  return u;
}

// ---- sampled fields ----

void write_field(const fs::path& p, const FieldFile& f) {
  std::size_t total = 1;
  for (const auto& a : f.axes) total *= static_cast<std::size_t>(a.n);
  if (f.axes.empty() || total != f.values.size()) fail(Errc::dimension_mismatch, "field values do not match the axes");
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) fail(Errc::io, "cannot open " + p.string() + " for writing");
  os.write("RLSF", 4);
  put<std::int32_t>(os, static_cast<std::int32_t>(f.axes.size()));
  for (const auto& a : f.axes) {
    put<std::int64_t>(os, a.n);
    put(os, a.lo);
    put(os, a.step);
  }
  os.write(reinterpret_cast<const char*>(f.values.data()), static_cast<std::streamsize>(total * sizeof(double)));
  if (!os) fail(Errc::io, "write failed: " + p.string());
}

FieldFile read_field(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) fail(Errc::io, "cannot open " + p.string());
  expect_magic(is, "RLSF");
  const auto d = get<std::int32_t>(is);
  if (d < 1 || d > 8) fail(Errc::parse, "bad field dimension");
  FieldFile f;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) {
    LineGrid g;
    const auto n = get<std::int64_t>(is);
    g.lo = get<double>(is);
    g.step = get<double>(is);
    if (n < 1 || n > (std::int64_t(1) << 31) || !(g.step > 0.0)) fail(Errc::parse, "bad field axis");
    g.n = static_cast<int>(n);
    total *= static_cast<std::size_t>(n);
    f.axes.push_back(g);
  }
  f.values.resize(total);
  is.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(total * sizeof(double)));
  if (!is) fail(Errc::io, "truncated field data");
  return f;
}

FieldFile to_field_file(const SampledField& f) {
  return FieldFile{std::vector<LineGrid>(static_cast<std::size_t>(f.d), f.grid), f.v};
}

SampledField to_sampled_field(const FieldFile& f) {
  for (const auto& a : f.axes)
    if (a.n != f.axes.front().n || a.lo != f.axes.front().lo || a.step != f.axes.front().step)
      fail(Errc::dimension_mismatch, "sampled fields need the same grid on every axis");
  SampledField s;
  s.d = static_cast<int>(f.axes.size());
  s.grid = f.axes.front();
  s.v = f.values;
  return s;
}

// ---- configuration ----

namespace {

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(Errc::parse, where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(Errc::parse, "unknown key '" + k + "' in " + where);
}

template <class T>
void read_opt(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(Errc::parse, where + "." + key + " has the wrong type");
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) fail(Errc::parse, msg);
}

EpsilonGrid read_grid(const json& j, const std::string& where, EpsilonGrid g) {
  check_keys(j, where, {"eps0", "ratio", "count"});
  read_opt(j, "eps0", g.eps0, where);
  read_opt(j, "ratio", g.ratio, where);
  read_opt(j, "count", g.count, where);
  require(g.eps0 > 0.0 && g.eps0 < 1.0, where + ".eps0 must lie in (0, 1)");
  require(g.ratio > 0.0 && g.ratio < 1.0, where + ".ratio must lie in (0, 1)");
  require(g.count >= 8, where + ".count must be at least 8");
  return make_eps_grid(g.eps0, g.ratio, g.count);
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  check_keys(j, "config",
             {"model", "grid", "plateau", "fixture", "suite", "thresholds", "signature", "grading", "tameness",
              "n_random", "seed", "output", "windows", "sigma", "bins", "heisenberg", "stft"});
  if (j.contains("model")) {
    const auto& m = j["model"];
    check_keys(m, "model", {"manifold", "K"});
    std::string man = manifold_key(c.model.manifold);
    int K = c.model.K;
    read_opt(m, "manifold", man, "model");
    read_opt(m, "K", K, "model");
    require(K >= 1 && K <= 4096, "model.K must lie in [1, 4096]");
    const Manifold mf = parse_manifold(man);
    require(mf == Manifold::Circle || K <= 256, "model.K must be at most 256 on the torus");
    c.model = mf == Manifold::Circle ? circle_model(K) : torus_model(K);
    if (mf == Manifold::Torus2) {
      c.sigma = 0.25;
      c.grid = torus_eps_grid();
    }
  }
  if (j.contains("grid")) c.grid = read_grid(j["grid"], "grid", c.grid);
  if (j.contains("plateau")) {
    const auto& p = j["plateau"];
    check_keys(p, "plateau", {"a", "b", "strict"});
    read_opt(p, "a", c.plateau.a, "plateau");
    read_opt(p, "b", c.plateau.b, "plateau");
    read_opt(p, "strict", c.plateau.strict, "plateau");
    require(c.plateau.a > 0.0 && c.plateau.b > c.plateau.a, "plateau needs 0 < a < b");
  }
  read_opt(j, "fixture", c.fixture, "config");
  read_opt(j, "suite", c.suite, "config");
  if (j.contains("thresholds")) {
    const auto& t = j["thresholds"];
    check_keys(t, "thresholds", {"negligible_slope", "min_r_squared", "tail_fraction"});
    read_opt(t, "negligible_slope", c.thresholds.negligible_slope, "thresholds");
    read_opt(t, "min_r_squared", c.thresholds.min_r_squared, "thresholds");
    read_opt(t, "tail_fraction", c.thresholds.tail_fraction, "thresholds");
    require(c.thresholds.tail_fraction > 0.0 && c.thresholds.tail_fraction <= 1.0,
            "thresholds.tail_fraction must lie in (0, 1]");
  }
  if (j.contains("signature")) {
    const auto& t = j["signature"];
    check_keys(t, "signature", {"regular_spread", "singular_spread", "tail_fraction", "amplitude_floor"});
    read_opt(t, "regular_spread", c.signature.regular_spread, "signature");
    read_opt(t, "singular_spread", c.signature.singular_spread, "signature");
    read_opt(t, "tail_fraction", c.signature.tail_fraction, "signature");
    read_opt(t, "amplitude_floor", c.signature.amplitude_floor, "signature");
    require(c.signature.regular_spread < c.signature.singular_spread,
            "signature.regular_spread must be below singular_spread");
  }
  if (j.contains("grading")) {
    check_keys(j["grading"], "grading", {"n_max"});
    read_opt(j["grading"], "n_max", c.grading.n_max, "grading");
    require(c.grading.n_max >= 1 && c.grading.n_max <= 8, "grading.n_max must lie in [1, 8]");
  }
  if (j.contains("tameness")) {
    const auto& t = j["tameness"];
    check_keys(t, "tameness", {"n_max", "b", "growth_tolerance", "k_max"});
    read_opt(t, "n_max", c.tameness.n_max, "tameness");
    read_opt(t, "b", c.tameness.b, "tameness");
    read_opt(t, "growth_tolerance", c.tameness.growth_tolerance, "tameness");
    read_opt(t, "k_max", c.tameness.k_max, "tameness");
    require(c.tameness.n_max >= 1 && c.tameness.b >= 0 && c.tameness.k_max >= 1, "tameness parameters out of range");
  }
  read_opt(j, "n_random", c.n_random, "config");
  require(c.n_random >= 0, "n_random must be non-negative");
  read_opt(j, "seed", c.seed, "config");
  read_opt(j, "output", c.output, "config");
  read_opt(j, "windows", c.windows, "config");
  read_opt(j, "sigma", c.sigma, "config");
  read_opt(j, "bins", c.bins, "config");
  require(c.windows >= 1 && c.sigma > 0.0 && c.bins >= 2, "windows, sigma and bins must be positive");
  if (j.contains("heisenberg")) {
    auto& h = c.heisenberg;
    const auto& t = j["heisenberg"];
    check_keys(t, "heisenberg", {"hermite_order", "step", "half", "grid", "min_slope"});
    read_opt(t, "hermite_order", h.hermite_order, "heisenberg");
    read_opt(t, "step", h.step, "heisenberg");
    read_opt(t, "half", h.half, "heisenberg");
    read_opt(t, "min_slope", h.min_slope, "heisenberg");
    if (t.contains("grid")) h.grid = read_grid(t["grid"], "heisenberg.grid", h.grid);
    require(h.hermite_order >= 0 && h.hermite_order % 2 == 0, "heisenberg.hermite_order must be even");
    require(h.step > 0.0 && h.half >= 2, "heisenberg.step and half must be positive");
    require(std::pow(2.0 * h.half + 1, 3) <= 1.5e6, "heisenberg grid exceeds the memory bound");
  }
  if (j.contains("stft")) {
    auto& s = c.stft;
    const auto& t = j["stft"];
    check_keys(t, "stft", {"T", "dt", "X", "dx", "dxi", "tau_max", "dtau"});
    read_opt(t, "T", s.T, "stft");
    read_opt(t, "dt", s.dt, "stft");
    read_opt(t, "X", s.X, "stft");
    read_opt(t, "dx", s.dx, "stft");
    read_opt(t, "dxi", s.dxi, "stft");
    read_opt(t, "tau_max", s.tau_max, "stft");
    read_opt(t, "dtau", s.dtau, "stft");
    require(s.T > 0 && s.dt > 0 && s.X > 0 && s.dx > 0 && s.dxi > 0 && s.tau_max > 0 && s.dtau > 0,
            "stft parameters must be positive");
  }
  return c;
}

ExperimentConfig load_config(const fs::path& p) { return parse_config(read_json(p)); }

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["model"] = c.model;
  j["grid"] = c.grid;
  j["plateau"] = json{{"a", c.plateau.a}, {"b", c.plateau.b}, {"strict", c.plateau.strict}};
  j["fixture"] = c.fixture;
  j["suite"] = c.suite;
  j["thresholds"] = json{{"negligible_slope", c.thresholds.negligible_slope},
                         {"min_r_squared", c.thresholds.min_r_squared},
                         {"tail_fraction", c.thresholds.tail_fraction}};
  j["signature"] = json{{"regular_spread", c.signature.regular_spread},
                        {"singular_spread", c.signature.singular_spread},
                        {"tail_fraction", c.signature.tail_fraction},
                        {"amplitude_floor", c.signature.amplitude_floor}};
  j["grading"] = json{{"n_max", c.grading.n_max}};
  j["tameness"] = json{{"n_max", c.tameness.n_max}, {"b", c.tameness.b},
                       {"growth_tolerance", c.tameness.growth_tolerance}, {"k_max", c.tameness.k_max}};
  j["n_random"] = c.n_random;
  j["seed"] = c.seed;
  j["output"] = c.output;
  j["windows"] = c.windows;
  j["sigma"] = c.sigma;
  j["bins"] = c.bins;
  j["heisenberg"] = json{{"hermite_order", c.heisenberg.hermite_order}, {"step", c.heisenberg.step},
                         {"half", c.heisenberg.half}, {"grid", c.heisenberg.grid},
                         {"min_slope", c.heisenberg.min_slope}};
  const auto& s = c.stft;
  j["stft"] = json{{"T", s.T},     {"dt", s.dt},           {"X", s.X},      {"dx", s.dx},
                   {"dxi", s.dxi}, {"tau_max", s.tau_max}, {"dtau", s.dtau}};
  return j;
}

}  // namespace regulab
