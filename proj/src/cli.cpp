#include "relqi/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "relqi/channel.hpp"
#include "relqi/entangle.hpp"
#include "relqi/parallel.hpp"
#include "relqi/photon.hpp"
#include "relqi/spin_half.hpp"

namespace relqi::cli {

namespace {

using Json = nlohmann::json;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// JSON rendering keeps typed values.
  Json json = Json::array();
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : "nan"; }

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string converged_cell(bool converged, const std::string& error) {
  if (!error.empty()) return "error";
  return converged ? "true" : "false";
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

// Parsed, typed view of the string-valued options of one subcommand.
class Params {
 public:
  explicit Params(const SweepConfig& c) : c_(c) {}

  [[nodiscard]] const std::string& text(const std::string& field) const {
    const auto it = c_.values.find(field);
    if (it == c_.values.end()) throw ConfigError(field, "missing");
    return it->second;
  }
  [[nodiscard]] double number(const std::string& field) const { return parse_number(text(field), field); }
  [[nodiscard]] std::vector<double> range(const std::string& field) const { return parse_range(text(field), field); }

  [[nodiscard]] double positive(const std::string& field) const {
    const double v = number(field);
    if (!(v > 0.0)) throw ConfigError(field, "must be positive");
    return v;
  }

  [[nodiscard]] double speed(const std::string& field) const {
    const double v = number(field);
    if (!(std::abs(v) < 1.0)) throw ConfigError(field, "speed must satisfy |v| < 1");
    return v;
  }

 private:
  const SweepConfig& c_;
};

int require_nodes(const SweepConfig& c, int minimum = 4) {
  if (c.nodes < minimum) throw ConfigError("nodes", "resolution must be >= " + std::to_string(minimum));
  return c.nodes;
}

Table spin_table(const SweepConfig& c, bool& all_converged) {
  const Params p(c);
  SpinSweepOptions o;
  o.delta_over_m = p.positive("delta-over-m");
  o.nodes_per_axis = require_nodes(c);
  o.tolerance = c.tolerance;
  o.workers = default_worker_count();
  const auto thetas = p.range("theta");
  const auto gammas = p.range("gamma");
  for (double g : gammas)
    if (g < 0.0) throw ConfigError("gamma", "must be non-negative");
  Table t;
  t.header = {"theta", "gamma", "beta", "delta_over_m", "entropy_bits", "p_error", "grid_nodes", "converged"};
  for (const SpinSweepRow& r : entropy_sweep(thetas, gammas, o)) {
    t.rows.push_back({format_number(r.theta), format_number(r.gamma), opt_number(r.beta), format_number(r.delta_over_m),
                      opt_number(r.entropy_bits), opt_number(r.p_error), std::to_string(r.grid_nodes),
                      converged_cell(r.converged, r.error)});
    Json row = {{"theta", r.theta},
                {"gamma", r.gamma},
                {"beta", opt_json(r.beta)},
                {"delta_over_m", r.delta_over_m},
                {"entropy_bits", opt_json(r.entropy_bits)},
                {"p_error", opt_json(r.p_error)},
                {"grid_nodes", r.grid_nodes},
                {"converged", r.converged}};
    if (!r.error.empty()) row["error"] = r.error;
    t.json.push_back(row);
    if (r.error.empty() && !r.converged) all_converged = false;
  }
  return t;
}

Table photon_table(const SweepConfig& c, bool& all_converged) {
  const Params p(c);
  PhotonSweepOptions o;
  o.nodes_per_axis = require_nodes(c);
  o.tolerance = c.tolerance;
  o.workers = default_worker_count();
  const double kA = p.positive("kA");
  const double dz = p.positive("dz");
  const auto drs = p.range("dr");
  for (double d : drs)
    if (!(d > 0.0)) throw ConfigError("dr", "must be positive");
  const auto vs = p.range("v");
  for (double v : vs)
    if (!(std::abs(v) < 1.0)) throw ConfigError("v", "speed must satisfy |v| < 1");
  if (!(kA > 5.0 * dz)) throw ConfigError("kA", "beam requires kA > 5 dz");
  Table t;
  t.header = {"kA", "delta_r", "delta_z", "v", "p_error", "p_error_closed_form", "grid_nodes", "converged"};
  for (const PhotonSweepRow& r : photon_sweep(kA, dz, drs, vs, o)) {
    t.rows.push_back({format_number(r.kA), format_number(r.delta_r), format_number(r.delta_z), format_number(r.v),
                      opt_number(r.p_error), format_number(r.p_error_closed_form), std::to_string(r.grid_nodes),
                      converged_cell(r.converged, r.error)});
    Json row = {{"kA", r.kA},
                {"delta_r", r.delta_r},
                {"delta_z", r.delta_z},
                {"v", r.v},
                {"p_error", opt_json(r.p_error)},
                {"p_error_closed_form", r.p_error_closed_form},
                {"grid_nodes", r.grid_nodes},
                {"converged", r.converged}};
    if (!r.error.empty()) row["error"] = r.error;
    t.json.push_back(row);
    if (r.error.empty() && !r.converged) all_converged = false;
  }
  return t;
}

Table entangle_table(const SweepConfig& c, bool& all_converged) {
  const Params p(c);
  EntangleSweepOptions o;
  o.nodes_per_axis = require_nodes(c);
  o.tolerance = c.tolerance;
  o.workers = default_worker_count();
  const auto deltas = p.range("delta-over-m");
  for (double d : deltas)
    if (!(d > 0.0)) throw ConfigError("delta-over-m", "must be positive");
  const auto betas = p.range("beta");
  for (double b : betas)
    if (!(b >= 0.0 && b < 1.0)) throw ConfigError("beta", "must satisfy 0 <= beta < 1");
  Table t;
  t.header = {"delta_over_m", "beta", "concurrence", "entropy_of_marginal_bits", "grid_nodes", "converged"};
  for (const EntangleSweepRow& r : entanglement_sweep(deltas, betas, o)) {
    t.rows.push_back({format_number(r.delta_over_m), format_number(r.beta), opt_number(r.concurrence),
                      opt_number(r.entropy_of_marginal_bits), std::to_string(r.grid_nodes),
                      converged_cell(r.converged, r.error)});
    Json row = {{"delta_over_m", r.delta_over_m},
                {"beta", r.beta},
                {"concurrence", opt_json(r.concurrence)},
                {"entropy_of_marginal_bits", opt_json(r.entropy_of_marginal_bits)},
                {"grid_nodes", r.grid_nodes},
                {"converged", r.converged}};
    if (!r.error.empty()) row["error"] = r.error;
    t.json.push_back(row);
    if (r.error.empty() && !r.converged) all_converged = false;
  }
  return t;
}

Table photon_density_table(const SweepConfig& c) {
  const Params p(c);
  const double kA = p.positive("kA");
  const double dz = p.positive("dz");
  const double dr = p.positive("dr");
  const std::string& h = p.text("helicity");
  int helicity = 0;
  if (h == "+" || h == "+1" || h == "1") helicity = 1;
  else if (h == "-" || h == "-1") helicity = -1;
  else throw ConfigError("helicity", "must be + or -");
  if (!(kA > 5.0 * dz)) throw ConfigError("kA", "beam requires kA > 5 dz");
  const PhotonPacket psi = gaussian_beam(kA, dz, dr, helicity, require_nodes(c));
  const DensityMatrix rho = effective_density(psi);
  Table t;
  t.header = {"m", "n", "re", "im"};
  Json matrix = Json::array();
  const char* axes = "xyz";
  for (int m = 0; m < 3; ++m) {
    Json row = Json::array();
    for (int n = 0; n < 3; ++n) {
      t.rows.push_back({std::string(1, axes[m]), std::string(1, axes[n]), format_number(rho(m, n).real()),
                        format_number(rho(m, n).imag())});
      row.push_back({rho(m, n).real(), rho(m, n).imag()});
    }
    matrix.push_back(row);
  }
  t.json = {{"kA", kA},
            {"delta_r", dr},
            {"delta_z", dz},
            {"helicity", helicity},
            {"rho", matrix},
            {"max_eigenvalue", rho.eigenvalues().maxCoeff()},
            {"grid_nodes", psi.grid()->size()},
            {"warnings", beam_warnings(kA, dz, dr)}};
  return t;
}

Json doppler_json(const SweepConfig& c) {
  const Params p(c);
  const double kA = p.positive("kA");
  const double dz = p.positive("dz");
  const double dr = p.positive("dr");
  const double v = p.speed("v");
  if (!(kA > 5.0 * dz)) throw ConfigError("kA", "beam requires kA > 5 dz");
  const WitnessReport w = non_cp_witness(v, GaussianSpec::beam(kA, dz, dr), require_nodes(c));
  Json j = Json::parse(witness_report_json(w));
  j["kA"] = kA;
  j["delta_r"] = dr;
  j["delta_z"] = dz;
  j["grid_nodes"] = static_cast<std::size_t>(c.nodes) * c.nodes * c.nodes;
  return j;
}

Json channel_json(const SweepConfig& c) {
  const Params p(c);
  const double theta = p.number("theta");
  const auto gammas = p.range("gamma");
  const int n = require_nodes(c);
  Json out = Json::array();
  for (double g : gammas) {
    if (g < 0.0 || g > 2.0) throw ConfigError("gamma", "must lie in [0, 2]");
    out.push_back(Json::parse(channel_report_json({g, theta}, n)));
  }
  return out.size() == 1 ? out[0] : out;
}

Table convergence_table(const SweepConfig& c, bool& all_converged) {
  Table t;
  t.header = {"observable", "nodes_per_axis", "value", "delta", "converged"};
  for (const ConvergenceRow& r : convergence_report(c)) {
    t.rows.push_back({r.observable, std::to_string(r.nodes_per_axis), format_number(r.value), format_number(r.delta),
                      r.converged ? "true" : "false"});
    t.json.push_back({{"observable", r.observable},
                      {"nodes_per_axis", r.nodes_per_axis},
                      {"value", r.value},
                      {"delta", r.delta},
                      {"converged", r.converged}});
    if (!r.converged) all_converged = false;
  }
  return t;
}

struct SubcommandSpec {
  std::string name;
  std::string description;
  std::vector<std::pair<std::string, std::string>> options;  // name, default
  int default_nodes;
  std::string default_format;
};

const std::vector<SubcommandSpec>& subcommands() {
  static const std::vector<SubcommandSpec> specs = {
      {"spin-entropy", "spin entropy of a boosted Gaussian vs (theta, gamma)",
       {{"theta", "0,0.785398163397,1.57079632679"}, {"gamma", "0,0.25,0.5"}, {"delta-over-m", "1"}},
       kDefaultNodesPerAxis, "csv"},
      {"spin-distinguish", "Helstrom error of the boosted spin-up/spin-down pair vs (theta, gamma)",
       {{"theta", "1.57079632679"}, {"gamma", "0.001,0.002,0.005"}, {"delta-over-m", "1"}},
       kDefaultNodesPerAxis, "csv"},
      {"photon-density", "effective polarization density matrix of a Gaussian beam",
       {{"kA", "100"}, {"dz", "0.1"}, {"dr", "1"}, {"helicity", "+"}},
       kDefaultNodesPerAxis, "json"},
      {"photon-distinguish", "Helstrom error of opposite-helicity beams vs (delta_r, v)",
       {{"kA", "100"}, {"dz", "0.1"}, {"dr", "0.3,1"}, {"v", "0"}},
       kDefaultNodesPerAxis, "csv"},
      {"doppler", "Doppler change of the circular-pair error and the non-CP witness",
       {{"kA", "100"}, {"dz", "0.1"}, {"dr", "1"}, {"v", "0.5"}},
       kDefaultNodesPerAxis, "json"},
      {"channel-audit", "certification of the boost decoherence channel",
       {{"gamma", "0.2"}, {"theta", "0"}},
       kDefaultNodesPerAxis, "json"},
      {"entangle-sweep", "concurrence of a boosted Gaussian singlet vs (delta/m, beta)",
       {{"delta-over-m", "0.0001,0.5"}, {"beta", "0,0.3,0.6,0.9"}},
       kDefaultPairNodesPerAxis, "csv"},
      {"convergence", "observable at n and 2n nodes per axis",
       {{"observable", "spin-entropy"},
        {"theta", "1.57079632679"},
        {"gamma", "0.5"},
        {"delta-over-m", "1"},
        {"kA", "100"},
        {"dz", "0.1"},
        {"dr", "1"},
        {"v", "0"},
        {"beta", "0.6"}},
       8, "csv"},
  };
  return specs;
}

std::string json_to_option_text(const Json& v, const std::string& field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(field, "list entries must be numbers");
      s += (s.empty() ? "" : ",") + format_number(e.get<double>());
    }
    if (s.empty()) throw ConfigError(field, "empty list");
    return s;
  }
  throw ConfigError(field, "unsupported value type");
}

void apply_config_file(const std::string& path, const SubcommandSpec& spec, SweepConfig& c) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config", e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "nodes") {
      if (!value.is_number_integer()) throw ConfigError("nodes", "must be an integer");
      c.nodes = value.get<int>();
    } else if (key == "tol") {
      if (!value.is_number()) throw ConfigError("tol", "must be a number");
      c.tolerance = value.get<double>();
    } else if (key == "out") {
      c.out = json_to_option_text(value, key);
    } else if (key == "format") {
      c.format = json_to_option_text(value, key);
    } else if (c.values.count(key)) {
      c.values[key] = json_to_option_text(value, key);
    } else {
      bool known = false;
      for (const auto& o : spec.options) known = known || o.first == key;
      if (!known) throw ConfigError(key, "unknown option for " + spec.name);
    }
  }
}

int emit(const SweepConfig& c, const std::function<void(std::ostream&)>& writer, std::ostream& out) {
  if (c.out.empty()) {
    writer(out);
    return 0;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw ConfigError("out", "cannot open '" + c.out + "' for writing");
  writer(file);
  return 0;
}

int execute(const SweepConfig& c, std::ostream& out) {
  bool converged = true;
  auto write_table = [&](const Table& t) {
    emit(
        c,
        [&](std::ostream& os) {
          if (c.format == "json")
            os << t.json.dump(2) << '\n';
          else
            write_csv(os, t);
        },
        out);
  };
  auto write_json = [&](const Json& j) { emit(c, [&](std::ostream& os) { os << j.dump(2) << '\n'; }, out); };

  const std::string& s = c.subcommand;
  if (s == "spin-entropy" || s == "spin-distinguish") {
    write_table(spin_table(c, converged));
  } else if (s == "photon-distinguish") {
    write_table(photon_table(c, converged));
  } else if (s == "entangle-sweep") {
    write_table(entangle_table(c, converged));
  } else if (s == "convergence") {
    write_table(convergence_table(c, converged));
  } else if (s == "photon-density") {
    const Table t = photon_density_table(c);
    if (c.format == "csv")
      write_table(t);
    else
      write_json(t.json);
  } else if (s == "doppler") {
    write_json(doppler_json(c));
  } else if (s == "channel-audit") {
    write_json(channel_json(c));
  }
  return converged ? 0 : 1;
}

}  // namespace

std::vector<double> parse_range(std::string_view text, const std::string& field) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(field, "empty range");
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_number(item, field));
    if (parts.size() != 3) throw ConfigError(field, "range must be min:max:step");
    const double lo = parts[0];
    const double hi = parts[1];
    const double step = parts[2];
    if (!(step > 0.0)) throw ConfigError(field, "range step must be positive");
    if (hi < lo) throw ConfigError(field, "range max is below min");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 1000000) throw ConfigError(field, "range has too many entries");
    for (std::size_t k = 0; k < count; ++k) out.push_back(lo + static_cast<double>(k) * step);
    return out;
  }
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, field));
  if (out.empty()) throw ConfigError(field, "empty range");
  return out;
}

double parse_number(std::string_view text, const std::string& field) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError(field, "not a number: '" + t + "'");
  return v;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::vector<ConvergenceRow> convergence_report(const SweepConfig& config) {
  const Params p(config);
  const std::string observable = p.text("observable");
  const int n = config.nodes;
  if (n < 1) throw ConfigError("nodes", "resolution must be >= 1");
  std::function<double(int)> eval;
  int fine = 2 * n;
  if (observable == "spin-entropy" || observable == "spin-error") {
    const double dm = p.positive("delta-over-m");
    const double theta = p.number("theta");
    const double gamma = p.number("gamma");
    double beta = 0.0;
    try {
      beta = beta_for_gamma(gamma, dm);
    } catch (const DomainError& e) {
      throw ConfigError("gamma", e.what());
    }
    if (observable == "spin-entropy")
      eval = [=](int k) { return boosted_spin_entropy(dm, 1.0, beta, theta, k); };
    else
      eval = [=](int k) { return boosted_pair_error(dm, 1.0, beta, theta, k); };
  } else if (observable == "photon-error") {
    const double kA = p.positive("kA");
    const double dz = p.positive("dz");
    const double dr = p.positive("dr");
    const double v = p.speed("v");
    if (!(kA > 5.0 * dz)) throw ConfigError("kA", "beam requires kA > 5 dz");
    eval = [=](int k) { return doppler_error(kA, dz, dr, v, k); };
  } else if (observable == "concurrence") {
    const double dm = p.positive("delta-over-m");
    const double beta = p.number("beta");
    if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("beta", "must satisfy 0 <= beta < 1");
    fine = n + 2;
    eval = [=](int k) {
      return concurrence(spin_spin_density(boost_pair(observer_boost(beta, 0.0), bell_gaussian(dm, 1.0, k))));
    };
  } else {
    throw ConfigError("observable", "unknown observable '" + observable + "'");
  }
  const double coarse = eval(n);
  const double refined = eval(fine);
  const double diff = std::abs(refined - coarse);
  const double delta = refined != 0.0 ? diff / std::abs(refined) : diff;
  const bool converged = delta < config.tolerance && n >= 4;
  return {{observable, n, coarse, std::nan(""), converged}, {observable, fine, refined, delta, converged}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"relativistic quantum information toolkit"};
  app.require_subcommand(1);
  std::vector<SweepConfig> configs;
  configs.reserve(subcommands().size());
  std::vector<std::string> config_paths(subcommands().size());
  for (std::size_t i = 0; i < subcommands().size(); ++i) {
    const SubcommandSpec& spec = subcommands()[i];
    SweepConfig& c = configs.emplace_back();
    c.subcommand = spec.name;
    c.nodes = spec.default_nodes;
    c.tolerance = 1e-6;
    c.format = spec.default_format;
    CLI::App* sub = app.add_subcommand(spec.name, spec.description);
    for (const auto& [name, def] : spec.options) {
      c.values[name] = def;
      sub->add_option("--" + name, c.values[name])->capture_default_str();
    }
    sub->add_option("--nodes", c.nodes, "nodes per axis")->capture_default_str();
    sub->add_option("--tol", c.tolerance, "convergence tolerance")->capture_default_str();
    sub->add_option("--out", c.out, "output path (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->capture_default_str();
    sub->add_option("--config", config_paths[i], "JSON file overriding flags");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (std::size_t i = 0; i < subcommands().size(); ++i) {
    if (!app.got_subcommand(subcommands()[i].name)) continue;
    SweepConfig& c = configs[i];
    try {
      if (!config_paths[i].empty()) apply_config_file(config_paths[i], subcommands()[i], c);
      if (c.format != "csv" && c.format != "json") throw ConfigError("format", "must be csv or json");
      if (!(c.tolerance > 0.0)) throw ConfigError("tol", "must be positive");
      const int code = execute(c, out);
      if (code == 1) err << "warning: numerical results did not converge to tol " << format_number(c.tolerance) << '\n';
      return code;
    } catch (const ConfigError& e) {
      err << e.what() << '\n';
      return 2;
    } catch (const DomainError& e) {
      err << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 2;
}

}  // namespace relqi::cli
