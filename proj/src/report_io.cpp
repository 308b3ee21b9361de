#include "skewgp/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace skewgp {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void emit(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        emit(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ",\n";
        out += inner;
        emit(j[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

const char* sidedness_name(Sidedness s) {
  switch (s) {
    case Sidedness::AtLeast:
      return "at_least";
    case Sidedness::AtMost:
      return "at_most";
    default:
      return "two_sided";
  }
}

Sidedness parse_sidedness(const std::string& s) {
  if (s == "at_least") return Sidedness::AtLeast;
  if (s == "at_most") return Sidedness::AtMost;
  if (s == "two_sided") return Sidedness::TwoSided;
  throw InvalidArgument("unknown sidedness '" + s + "'");
}

double number_or_nan(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

// CSV field quoting for names that carry commas, e.g. "joint[f0,g1]".
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string dump_record(const Json& record) {
  std::string out;
  emit(record, out, 0);
  out += "\n";
  return out;
}

Json kernel_to_json(const RadialKernel& kernel) {
  Json j{{"family", std::string(family_name(kernel.family()))},
         {"lengthscale", kernel.lengthscale()}};
  if (kernel.family() == KernelFamily::RationalQuadratic) j["alpha"] = kernel.alpha();
  return j;
}

RadialKernel kernel_from_json(const Json& j) {
  const KernelFamily family = parse_family(j.at("family").get<std::string>());
  const double l = j.at("lengthscale").get<double>();
  const double alpha = j.contains("alpha") ? j.at("alpha").get<double>() : 1.0;
  return RadialKernel(family, l, alpha);
}

Json report_to_json(const ValidationReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"closed_form", c.closed_form},
                      {"empirical", c.empirical},
                      {"mc_standard_error", c.mc_standard_error},
                      {"k", c.k},
                      {"abs_tol", c.abs_tol},
                      {"rel_tol", c.rel_tol},
                      {"sidedness", sidedness_name(c.sidedness)},
                      {"tolerance_rule", c.rule()},
                      {"pass", c.pass}});
  }
  Json metrics = Json::object();
  for (const auto& [k, v] : report.metrics) metrics[k] = v;
  return {{"campaign", report.campaign},
          {"samples", report.samples},
          {"seed", report.seed},
          {"all_pass", report.all_pass()},
          {"checks", checks},
          {"metrics", metrics},
          {"diagnostics", report.diagnostics}};
}

ValidationReport report_from_json(const Json& j) {
  ValidationReport r;
  r.campaign = j.at("campaign").get<std::string>();
  r.samples = j.at("samples").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& c : j.at("checks")) {
    CheckRecord rec;
    rec.name = c.at("name").get<std::string>();
    rec.closed_form = number_or_nan(c.at("closed_form"));
    rec.empirical = number_or_nan(c.at("empirical"));
    rec.mc_standard_error = number_or_nan(c.at("mc_standard_error"));
    rec.k = c.at("k").get<double>();
    rec.abs_tol = c.at("abs_tol").get<double>();
    rec.rel_tol = c.at("rel_tol").get<double>();
    rec.sidedness = parse_sidedness(c.at("sidedness").get<std::string>());
    rec.pass = c.at("pass").get<bool>();
    r.checks.push_back(std::move(rec));
  }
  for (auto it = j.at("metrics").begin(); it != j.at("metrics").end(); ++it) {
    r.metrics.emplace_back(it.key(), number_or_nan(it.value()));
  }
  r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
  return r;
}

std::string checks_csv(const ValidationReport& report) {
  std::ostringstream os;
  os << kChecksCsvHeader << "\n";
  for (const auto& c : report.checks) {
    os << csv_field(c.name) << ',' << format_double(c.closed_form) << ','
       << format_double(c.empirical) << ',' << format_double(c.mc_standard_error) << ','
       << format_double(c.k) << ',' << format_double(c.abs_tol) << ','
       << format_double(c.rel_tol) << ',' << sidedness_name(c.sidedness) << ','
       << format_double(c.tolerance()) << ',' << (c.pass ? "pass" : "fail") << "\n";
  }
  return os.str();
}

Json bound_to_json(const BoundReport& r) {
  return {{"p", r.p},
          {"pprime", r.pprime},
          {"delta", r.delta},
          {"normal_quantile_p", r.normal_quantile_p},
          {"r_region_sq", r.r_region_sq},
          {"regime", std::string(regime_name(r.regime))},
          {"variance_bound", r.variance_bound},
          {"b_uniform", r.b_uniform},
          {"paper_literal_b", r.paper_literal_b},
          {"rc1_sq", r.critical.rc1_sq},
          {"rc2_sq", r.critical.rc2_sq}};
}

std::string bounds_scan_csv(const RadialKernel& kernel, double p,
                            const std::vector<double>& radii) {
  const CriticalRadii crit = critical_radii(kernel);
  const double q = normal_quantile(p);
  std::ostringstream os;
  os << kBoundsCsvHeader << "\n";
  for (double r : radii) {
    const RegionBound b = region_bound(kernel, r * r, crit);
    os << format_double(r) << ',' << regime_name(b.regime) << ','
       << format_double(b.variance_bound) << ',' << format_double(q * std::sqrt(b.variance_bound))
       << ',' << format_double(q * b.variance_bound) << "\n";
  }
  return os.str();
}

std::string dim_scan_csv(const ScalingScan& scan) {
  std::ostringstream os;
  os << kDimScanCsvHeader << "\n";
  for (const auto& row : scan.rows) {
    os << row.dim << ',' << format_double(row.lambda1_exact) << ','
       << format_double(row.lambda1_fisher) << "\n";
  }
  os << "# slope_exact," << format_double(scan.slope_exact) << "\n";
  os << "# slope_fisher," << format_double(scan.slope_fisher) << "\n";
  os << "# max_fisher_rel_diff," << format_double(scan.max_fisher_rel_diff) << "\n";
  return os.str();
}

Json dim_scan_to_json(const ScalingScan& scan) {
  Json rows = Json::array();
  for (const auto& row : scan.rows) {
    rows.push_back({{"D", row.dim},
                    {"lambda1_exact", row.lambda1_exact},
                    {"lambda1_fisher", row.lambda1_fisher}});
  }
  return {{"pprime", scan.pprime},
          {"target_r_sq", scan.target_r_sq},
          {"rows", rows},
          {"slope_exact", scan.slope_exact},
          {"slope_fisher", scan.slope_fisher},
          {"max_fisher_rel_diff", scan.max_fisher_rel_diff}};
}

std::string sample_csv(const GramLayout& layout, const RowMatrix& rows) {
  std::ostringstream os;
  const auto names = layout.names();
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
  os << "\n";
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      os << (c ? "," : "") << format_double(rows(r, c));
    }
    os << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace skewgp
