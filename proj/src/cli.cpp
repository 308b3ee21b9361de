#include "skewgp/cli.hpp"

#include <omp.h>

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skewgp/chi_squared.hpp"
#include "skewgp/error_analysis.hpp"
#include "skewgp/joint_sampler.hpp"
#include "skewgp/report_io.hpp"
#include "skewgp/rng.hpp"
#include "skewgp/validation.hpp"

namespace skewgp::cli {

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanOptions {
  double r_min = 0.05;
  double r_max = 3.0;
  int count = 60;
};

struct DimScanOptions {
  int d_min = 30;
  int d_max = 3000;
  int count = 20;
  double target_r_sq = 1.0;
  std::optional<double> pprime;
};

struct TableOptions {
  double tau_max = 4.0;
  int count = 9;
};

struct RunConfig {
  RadialKernel kernel = RadialKernel::squared_exponential(1.0);
  int dim = 2;
  std::optional<Vector> zstar;
  std::vector<Vector> points;  // flat [x1..., x2...]
  int random_points = 4;
  BoundConfig bound{0.95, 0.95, {0.05}, 2, std::nullopt};
  std::size_t samples = 20000;
  std::optional<std::uint64_t> seed;
  ScanOptions scan;
  DimScanOptions dim_scan;
  TableOptions table;
};

std::string type_name(const Json& j) { return j.type_name(); }

template <typename T>
T field(const Json& j, const std::string& path) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!j.is_number()) throw ConfigError("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!j.is_number_integer()) throw ConfigError("");
      if (std::is_unsigned_v<T> && j.is_number_integer() && !j.is_number_unsigned() &&
          j.get<long long>() < 0) {
        throw ConfigError("");
      }
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!j.is_string()) throw ConfigError("");
    }
    return j.get<T>();
  } catch (const std::exception&) {
    const char* expected = std::is_same_v<T, double>        ? "number"
                           : std::is_unsigned_v<T>           ? "nonnegative integer"
                           : std::is_integral_v<T>           ? "integer"
                           : std::is_same_v<T, std::string>  ? "string"
                                                             : "value";
    throw ConfigError("config field '" + path + "': expected " + expected + ", got " +
                      type_name(j));
  }
}

Vector number_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError("config field '" + path + "': expected array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = field<double>(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

void reject_unknown(const Json& j, const std::string& path, const std::set<std::string>& known) {
  if (!j.is_object()) {
    throw ConfigError("config field '" + (path.empty() ? "<root>" : path) +
                      "': expected object, got " + type_name(j));
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError("config field '" + (path.empty() ? "" : path + ".") + it.key() +
                        "': unknown key");
    }
  }
}

void load_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  reject_unknown(j, "", {"kernel", "dim", "zstar", "points", "random_points", "bound", "samples",
                         "seed", "scan", "dim_scan", "kernel_info"});
  if (j.contains("kernel")) {
    const Json& k = j["kernel"];
    reject_unknown(k, "kernel", {"family", "lengthscale", "alpha"});
    const std::string family = k.contains("family") ? field<std::string>(k["family"], "kernel.family")
                                                    : std::string("se");
    const double l = k.contains("lengthscale") ? field<double>(k["lengthscale"], "kernel.lengthscale")
                                               : 1.0;
    const double alpha = k.contains("alpha") ? field<double>(k["alpha"], "kernel.alpha") : 1.0;
    try {
      cfg.kernel = RadialKernel(parse_family(family), l, alpha);
    } catch (const Error& e) {
      throw ConfigError(std::string("config field 'kernel': ") + e.what());
    }
  }
  if (j.contains("dim")) cfg.dim = field<int>(j["dim"], "dim");
  if (j.contains("zstar")) cfg.zstar = number_array(j["zstar"], "zstar");
  if (j.contains("points")) {
    if (!j["points"].is_array()) throw ConfigError("config field 'points': expected array");
    for (std::size_t i = 0; i < j["points"].size(); ++i) {
      cfg.points.push_back(number_array(j["points"][i], "points[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("random_points")) cfg.random_points = field<int>(j["random_points"], "random_points");
  if (j.contains("bound")) {
    const Json& b = j["bound"];
    reject_unknown(b, "bound", {"p", "pprime", "sigma_eigs", "r_region_sq"});
    if (b.contains("p")) cfg.bound.p = field<double>(b["p"], "bound.p");
    if (b.contains("pprime")) cfg.bound.pprime = field<double>(b["pprime"], "bound.pprime");
    if (b.contains("sigma_eigs")) {
      const Vector e = number_array(b["sigma_eigs"], "bound.sigma_eigs");
      cfg.bound.sigma_eigs.assign(e.data(), e.data() + e.size());
    }
    if (b.contains("r_region_sq")) cfg.bound.r_region_sq = field<double>(b["r_region_sq"], "bound.r_region_sq");
  }
  if (j.contains("samples")) cfg.samples = field<std::size_t>(j["samples"], "samples");
  if (j.contains("seed")) cfg.seed = field<std::uint64_t>(j["seed"], "seed");
  if (j.contains("scan")) {
    const Json& s = j["scan"];
    reject_unknown(s, "scan", {"r_min", "r_max", "count"});
    if (s.contains("r_min")) cfg.scan.r_min = field<double>(s["r_min"], "scan.r_min");
    if (s.contains("r_max")) cfg.scan.r_max = field<double>(s["r_max"], "scan.r_max");
    if (s.contains("count")) cfg.scan.count = field<int>(s["count"], "scan.count");
  }
  if (j.contains("dim_scan")) {
    const Json& s = j["dim_scan"];
    reject_unknown(s, "dim_scan", {"d_min", "d_max", "count", "target_r_sq", "pprime"});
    if (s.contains("d_min")) cfg.dim_scan.d_min = field<int>(s["d_min"], "dim_scan.d_min");
    if (s.contains("d_max")) cfg.dim_scan.d_max = field<int>(s["d_max"], "dim_scan.d_max");
    if (s.contains("count")) cfg.dim_scan.count = field<int>(s["count"], "dim_scan.count");
    if (s.contains("target_r_sq")) {
      cfg.dim_scan.target_r_sq = field<double>(s["target_r_sq"], "dim_scan.target_r_sq");
    }
    if (s.contains("pprime")) cfg.dim_scan.pprime = field<double>(s["pprime"], "dim_scan.pprime");
  }
  if (j.contains("kernel_info")) {
    const Json& s = j["kernel_info"];
    reject_unknown(s, "kernel_info", {"tau_max", "count"});
    if (s.contains("tau_max")) cfg.table.tau_max = field<double>(s["tau_max"], "kernel_info.tau_max");
    if (s.contains("count")) cfg.table.count = field<int>(s["count"], "kernel_info.count");
  }
}

enum class Command { KernelInfo, ValidateCov, ValidateError, ValidateBound, Bounds, DimScan, Sample };

bool stochastic(Command c) {
  return c == Command::ValidateCov || c == Command::ValidateError || c == Command::ValidateBound ||
         c == Command::Sample;
}

bool needs_points(Command c) {
  return c == Command::ValidateCov || c == Command::ValidateError || c == Command::Sample;
}

// Module preconditions, checked before any work starts.
void validate(RunConfig& cfg, Command cmd) {
  if (cfg.dim < 1) throw ConfigError("config field 'dim': must be >= 1");
  if (cfg.zstar && cfg.zstar->size() != cfg.dim) {
    throw ConfigError("config field 'zstar': expected " + std::to_string(cfg.dim) +
                      " entries, got " + std::to_string(cfg.zstar->size()));
  }
  for (std::size_t i = 0; i < cfg.points.size(); ++i) {
    if (cfg.points[i].size() != 2 * cfg.dim) {
      throw ConfigError("config field 'points[" + std::to_string(i) + "]': expected " +
                        std::to_string(2 * cfg.dim) + " entries [x1..., x2...], got " +
                        std::to_string(cfg.points[i].size()));
    }
    if (cmd == Command::ValidateError && PairedPoint::from_flat(cfg.points[i]).matched()) {
      throw ConfigError("config field 'points[" + std::to_string(i) +
                        "]': error validation needs non-matched points");
    }
  }
  if (cfg.samples == 0) throw ConfigError("config field 'samples': must be positive");
  if (stochastic(cmd) && !cfg.seed) {
    throw ConfigError("--seed is required for stochastic commands");
  }
  if (needs_points(cmd) && cfg.points.empty() && cfg.random_points < 1) {
    throw ConfigError("config field 'random_points': must be >= 1 when no points are given");
  }
  if (cmd == Command::ValidateBound || cmd == Command::Bounds) {
    cfg.bound.dim = cfg.dim;
    try {
      cfg.bound.validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("config field 'bound': ") + e.what());
    }
  }
  if (cmd == Command::Bounds &&
      !(cfg.scan.r_min > 0.0 && cfg.scan.r_max >= cfg.scan.r_min && cfg.scan.count >= 1)) {
    throw ConfigError("config field 'scan': need 0 < r_min <= r_max and count >= 1");
  }
  if (cmd == Command::DimScan) {
    const auto& s = cfg.dim_scan;
    if (!(s.d_min >= 1 && s.d_max >= s.d_min && s.count >= 1 && s.target_r_sq > 0.0)) {
      throw ConfigError("config field 'dim_scan': need 1 <= d_min <= d_max, count >= 1, target_r_sq > 0");
    }
    const double pp = s.pprime.value_or(cfg.bound.pprime);
    if (!(pp > 0.0 && pp < 1.0)) throw ConfigError("config field 'dim_scan.pprime': must lie in (0, 1)");
  }
  if (cmd == Command::KernelInfo && !(cfg.table.tau_max > 0.0 && cfg.table.count >= 2)) {
    throw ConfigError("config field 'kernel_info': need tau_max > 0 and count >= 2");
  }
}

ExpansionPoint expansion(const RunConfig& cfg) {
  return cfg.zstar ? ExpansionPoint(*cfg.zstar) : ExpansionPoint::origin(cfg.dim);
}

// Points from the config, or standard normal draws around z* when none are given.
std::vector<PairedPoint> points(const RunConfig& cfg) {
  std::vector<PairedPoint> out;
  if (!cfg.points.empty()) {
    for (const auto& p : cfg.points) out.push_back(PairedPoint::from_flat(p));
    return out;
  }
  const ExpansionPoint z = expansion(cfg);
  Engine rng = stream_for(*cfg.seed, 0x706f696e7473ULL);
  for (int i = 0; i < cfg.random_points; ++i) {
    Vector flat(2 * cfg.dim);
    for (Eigen::Index k = 0; k < flat.size(); ++k) flat(k) = standard_normal(rng);
    flat.head(cfg.dim) += z.zstar();
    flat.tail(cfg.dim) += z.zstar();
    out.push_back(PairedPoint::from_flat(flat));
  }
  return out;
}

struct Output {
  std::string content;
  std::optional<bool> checks_passed;
};

Output emit_validation(const ValidationReport& report, const std::string& format,
                       std::ostream& err) {
  err << report.campaign << ": " << report.checks.size() - report.failures() << "/"
      << report.checks.size() << " checks passed (N=" << report.samples
      << ", seed=" << report.seed << ")\n";
  for (const auto& d : report.diagnostics) err << "warning: " << d << "\n";
  for (const auto& c : report.checks) {
    if (!c.pass) {
      err << "FAIL " << c.name << ": closed " << format_double(c.closed_form) << ", empirical "
          << format_double(c.empirical) << ", rule " << c.rule() << "\n";
    }
  }
  return {format == "csv" ? checks_csv(report) : dump_record(report_to_json(report)),
          report.all_pass()};
}

Output kernel_info(const RunConfig& cfg, const std::string& format) {
  const RadialKernel& k = cfg.kernel;
  const CriticalRadii crit = critical_radii(k);
  const MonotonicityReport mono = monotonicity_check(k, cfg.table.tau_max, 1001);
  std::vector<double> taus;
  for (int i = 0; i < cfg.table.count; ++i) {
    taus.push_back(cfg.table.tau_max * i / (cfg.table.count - 1));
  }
  if (format == "csv") {
    std::ostringstream os;
    os << "tau,h,dh,d2h\n";
    for (double t : taus) {
      os << format_double(t) << ',' << format_double(k.value(t)) << ','
         << format_double(k.d1(t)) << ',' << format_double(k.d2(t)) << "\n";
    }
    os << "# rc1_sq," << format_double(crit.rc1_sq) << "\n";
    os << "# rc2_sq," << format_double(crit.rc2_sq) << "\n";
    os << "# decay_conditions," << (mono.all_pass() ? "pass" : "fail") << "\n";
    return {os.str(), std::nullopt};
  }
  Json table = Json::array();
  for (double t : taus) {
    table.push_back({{"tau", t}, {"h", k.value(t)}, {"dh", k.d1(t)}, {"d2h", k.d2(t)}});
  }
  Json conditions = Json::object();
  for (const auto& c : mono.conditions) conditions[c.name] = c.pass;
  return {dump_record({{"kernel", kernel_to_json(k)},
                       {"table", table},
                       {"rc1_sq", crit.rc1_sq},
                       {"rc2_sq", crit.rc2_sq},
                       {"decay_conditions", conditions}}),
          std::nullopt};
}

Output bounds(const RunConfig& cfg, const std::string& format) {
  if (format == "csv") {
    std::vector<double> radii;
    const int n = cfg.scan.count;
    for (int i = 0; i < n; ++i) {
      radii.push_back(n == 1 ? cfg.scan.r_min
                             : cfg.scan.r_min + (cfg.scan.r_max - cfg.scan.r_min) * i / (n - 1));
    }
    return {bounds_scan_csv(cfg.kernel, cfg.bound.p, radii), std::nullopt};
  }
  Json j = bound_to_json(uniform_bound(cfg.kernel, cfg.bound));
  j["kernel"] = kernel_to_json(cfg.kernel);
  j["dim"] = cfg.dim;
  return {dump_record(j), std::nullopt};
}

Output dim_scan(const RunConfig& cfg, const std::string& format) {
  const auto& s = cfg.dim_scan;
  const ScalingScan scan = lambda1_scaling_scan(s.pprime.value_or(cfg.bound.pprime), s.target_r_sq,
                                                log_spaced_dims(s.d_min, s.d_max, s.count));
  return {format == "csv" ? dim_scan_csv(scan) : dump_record(dim_scan_to_json(scan)),
          std::nullopt};
}

Output sample(const RunConfig& cfg, const std::string& format) {
  const JointGram gram = build_joint_gram(cfg.kernel, expansion(cfg), points(cfg));
  const RowMatrix rows = sample_joint(gram, *cfg.seed, cfg.samples);
  if (format == "csv") return {sample_csv(gram.layout(), rows), std::nullopt};
  Json data = Json::array();
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    data.push_back(std::vector<double>(rows.row(r).data(), rows.row(r).data() + rows.cols()));
  }
  return {dump_record({{"names", gram.layout().names()},
                       {"seed", *cfg.seed},
                       {"jitter_used", gram.jitter_used()},
                       {"rows", data}}),
          std::nullopt};
}

Output dispatch(Command cmd, const RunConfig& cfg, const std::string& format, std::ostream& err) {
  switch (cmd) {
    case Command::KernelInfo:
      return kernel_info(cfg, format);
    case Command::Bounds:
      return bounds(cfg, format);
    case Command::DimScan:
      return dim_scan(cfg, format);
    case Command::Sample:
      return sample(cfg, format);
    case Command::ValidateCov:
      return emit_validation(
          run_covariance_validation(cfg.kernel, expansion(cfg), points(cfg), cfg.samples, *cfg.seed),
          format, err);
    case Command::ValidateError:
      return emit_validation(
          run_error_validation(cfg.kernel, expansion(cfg), points(cfg), cfg.samples, *cfg.seed),
          format, err);
    case Command::ValidateBound:
      return emit_validation(
          run_bound_validation(cfg.kernel, cfg.bound, expansion(cfg), cfg.samples, *cfg.seed),
          format, err);
  }
  return {};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skew-symmetric Gaussian field approximation toolkit"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path, out_path, format;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<int> threads;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "master seed (required for stochastic commands)");
  app.add_option("--samples", samples, "Monte Carlo sample count");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--threads", threads, "OpenMP worker cap")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "csv or record")->check(CLI::IsMember({"csv", "record"}));

  const std::vector<std::pair<std::string, Command>> commands = {
      {"kernel-info", Command::KernelInfo},       {"validate-cov", Command::ValidateCov},
      {"validate-error", Command::ValidateError}, {"validate-bound", Command::ValidateBound},
      {"bounds", Command::Bounds},                {"dim-scan", Command::DimScan},
      {"sample", Command::Sample}};
  const std::map<std::string, std::string> help = {
      {"kernel-info", "h, h', h'' table and critical radii"},
      {"validate-cov", "Monte Carlo check of the joint and model covariances"},
      {"validate-error", "Monte Carlo check of the error variance"},
      {"validate-bound", "coverage of the uniform error bound"},
      {"bounds", "uniform bound report, or an R-scan with --format csv"},
      {"dim-scan", "principal-axis scaling with dimension"},
      {"sample", "raw joint draws of field values and derivatives"}};
  for (const auto& [name, cmd] : commands) app.add_subcommand(name, help.at(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  Command cmd = Command::KernelInfo;
  std::string cmd_name;
  for (const auto& [name, c] : commands) {
    if (app.got_subcommand(name)) {
      cmd = c;
      cmd_name = name;
    }
  }
  if (format.empty()) {
    format = (cmd == Command::KernelInfo || cmd == Command::DimScan || cmd == Command::Sample)
                 ? "csv"
                 : "record";
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) load_file(cfg, config_path);
    if (seed) cfg.seed = seed;
    if (samples) cfg.samples = *samples;
    validate(cfg, cmd);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  if (threads) omp_set_num_threads(*threads);

  Output result;
  try {
    result = dispatch(cmd, cfg, format, err);
  } catch (const Error& e) {
    err << cmd_name << ": " << e.what() << "\n";
    return kNumericalFailure;
  }

  try {
    if (out_path.empty()) {
      out << result.content;
    } else {
      write_file(out_path, result.content);
    }
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return kIoFailure;
  }
  if (result.checks_passed && !*result.checks_passed) return kCheckFailed;
  return kOk;
}

}  // namespace skewgp::cli
