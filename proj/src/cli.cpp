#include "odb/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "odb/errors.hpp"
#include "odb/floquet.hpp"

namespace odb::cli {

PointError::PointError(double e, const std::string& what)
    : std::runtime_error("at eps_i = " + format_double(e) + ": " + what), eps(e) {}

void ScanConfig::validate() const {
  if (!(g0 >= 0.0)) throw UsageError("g0 must be non-negative");
  if (!(eps_min > 0.0)) throw UsageError("eps_min must be positive");
  if (!(eps_min < eps_max)) throw UsageError("eps_min must be below eps_max");
  if (steps < 2) throw UsageError("steps must be at least 2");
  if (n_max < 0) throw UsageError("n_max must be non-negative");
  if (!(tol > 0.0)) throw UsageError("tol must be positive");
  if (threads < 1) throw UsageError("threads must be at least 1");
}

const std::vector<std::string>& valid_keys() {
  static const std::vector<std::string> keys = {"g0",  "eps_min", "eps_max",       "steps",       "n_max",   "method",
                                                "order", "tol",   "output_format", "output_path", "threads", "exclude"};
  return keys;
}

Method parse_method(const std::string& s) {
  if (s == "perturbative") return Method::perturbative;
  if (s == "floquet") return Method::floquet;
  if (s == "both") return Method::both;
  throw UsageError("unknown method '" + s + "' (perturbative, floquet, both)");
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw UsageError("unknown format '" + s + "' (csv, json)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::perturbative: return "perturbative";
    case Method::floquet: return "floquet";
    case Method::both: return "both";
  }
  return "?";
}

std::string to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v, int line) {
  T out{};
  const char* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || v.empty()) {
    const char* kind = std::is_integral_v<T> ? "an integer" : "a number";
    throw UsageError("line " + std::to_string(line) + ": " + key + " expects " + kind + ", got '" + v + "'");
  }
  return out;
}

}  // namespace

ScanConfig parse_config(std::istream& in, ScanConfig c) {
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError("line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key = trim(s.substr(0, eq)), v = trim(s.substr(eq + 1));
    auto wrap = [&](auto f) {
      try {
        f();
      } catch (const UsageError& e) {
        const std::string m = e.what();
        if (m.rfind("line ", 0) == 0) throw;
        throw UsageError("line " + std::to_string(line) + ": " + m);
      } catch (const DomainError& e) {
        throw UsageError("line " + std::to_string(line) + ": " + e.what());
      }
    };
    if (key == "g0") c.g0 = parse_number<double>(key, v, line);
    else if (key == "eps_min") c.eps_min = parse_number<double>(key, v, line);
    else if (key == "eps_max") c.eps_max = parse_number<double>(key, v, line);
    else if (key == "steps") c.steps = parse_number<int>(key, v, line);
    else if (key == "n_max") c.n_max = parse_number<int>(key, v, line);
    else if (key == "tol") c.tol = parse_number<double>(key, v, line);
    else if (key == "threads") c.threads = parse_number<int>(key, v, line);
    else if (key == "exclude") c.exclude = parse_number<double>(key, v, line);
    else if (key == "method") wrap([&] { c.method = parse_method(v); });
    else if (key == "order") wrap([&] { c.order = parse_order(v); });
    else if (key == "output_format") wrap([&] { c.output_format = parse_format(v); });
    else if (key == "output_path") c.output_path = v;
    else {
      std::string keys;
      for (const auto& k : valid_keys()) keys += (keys.empty() ? "" : ", ") + k;
      throw UsageError("line " + std::to_string(line) + ": unknown key '" + key + "'; valid keys: " + keys);
    }
  }
  return c;
}

ScanConfig parse_config_file(const std::string& path, ScanConfig base) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open config file '" + path + "'");
  return parse_config(f, std::move(base));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ScanRow compute_row(const ScanConfig& c, double eps) {
  ScanRow r;
  r.eps_i = eps;
  const double ki = std::sqrt(2.0 * eps);
  for (int n = -c.n_max; n <= c.n_max; ++n) r.T_n[n] = kNaN;
  if (c.method != Method::perturbative) {
    const floquet::FloquetSolution f = floquet::solve_converged(eps, c.g0);
    if (f.unitarity_defect > c.tol)
      throw SolverError("Floquet unitarity defect " + format_double(f.unitarity_defect) + " above tol");
    r.T_total_floquet = f.T_total;
    if (c.method == Method::floquet) {
      r.T_elastic = std::norm(f.t_at(0));
      r.R_elastic = std::norm(f.r_at(0));
      for (int n = -c.n_max; n <= c.n_max; ++n)
        if (f.is_open(n)) r.T_n[n] = f.k_at(n).real() / ki * std::norm(f.t_at(n));
    }
  }
  if (c.method != Method::floquet) {
    RenormTable table(eps, c.g0);
    const SMatrixDecomposition d = assemble(table, c.order, c.n_max);
    r.T_total_pert = d.T_total;
    r.T_elastic = std::norm(d.T.at(0));
    r.R_elastic = std::norm(d.R.at(0));
    for (const auto& [n, t] : d.T) r.T_n[n] = sideband_channel(ki, n).k / ki * std::norm(t);
    r.w0 = w0(table);
    r.im_gamma = table.gamma(0).im;
    r.re_gamma = table.gamma(0).re;
  }
  return r;
}

std::vector<ScanRow> run_scan(const ScanConfig& c) {
  c.validate();
  const int n = c.steps;
  std::vector<ScanRow> rows(n);
  std::vector<std::exception_ptr> errs(n);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i; (i = next.fetch_add(1)) < n;) {
      try {
        rows[i] = compute_row(c, c.eps_at(i));
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const int nt = std::min(c.threads, n);
  if (nt <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (int i = 0; i < n; ++i) {
    if (!errs[i]) continue;
    try {
      std::rethrow_exception(errs[i]);
    } catch (const std::exception& e) {
      throw PointError(c.eps_at(i), e.what());
    }
  }
  return rows;
}

std::vector<std::string> csv_header(int n_max) {
  std::vector<std::string> h = {"eps_i", "T_elastic", "R_elastic", "T_total_pert", "T_total_floquet",
                                "w0",    "im_gamma",  "re_gamma"};
  for (int n = -n_max; n <= n_max; ++n) h.push_back("T(" + std::to_string(n) + ")");
  return h;
}

namespace {

std::vector<double> row_values(const ScanRow& r, int n_max) {
  std::vector<double> v = {r.eps_i, r.T_elastic, r.R_elastic, r.T_total_pert, r.T_total_floquet,
                           r.w0,    r.im_gamma,  r.re_gamma};
  for (int n = -n_max; n <= n_max; ++n) {
    const auto it = r.T_n.find(n);
    v.push_back(it == r.T_n.end() ? kNaN : it->second);
  }
  return v;
}

void put_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

nlohmann::json config_json(const ScanConfig& c) {
  return {{"g0", c.g0},
          {"eps_min", c.eps_min},
          {"eps_max", c.eps_max},
          {"steps", c.steps},
          {"n_max", c.n_max},
          {"method", to_string(c.method)},
          {"order", to_string(c.order)},
          {"tol", c.tol},
          {"output_format", to_string(c.output_format)}};
}

// Writes to the configured file, or to `fallback` when no path is set.
template <class F>
void with_output(const ScanConfig& c, std::ostream& fallback, F body) {
  if (c.output_path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream f(c.output_path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + c.output_path + "'");
  body(f);
}

}  // namespace

void write_csv(std::ostream& out, const ScanConfig& c, const std::vector<ScanRow>& rows) {
  put_line(out, csv_header(c.n_max));
  for (const auto& r : rows) {
    std::vector<std::string> cells;
    for (double x : row_values(r, c.n_max)) cells.push_back(format_double(x));
    put_line(out, cells);
  }
}

void write_json(std::ostream& out, const ScanConfig& c, const std::vector<ScanRow>& rows) {
  const auto header = csv_header(c.n_max);
  nlohmann::ordered_json doc;
  doc["metadata"] = {{"config", config_json(c)}, {"version", kVersion}};
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    const auto v = row_values(r, c.n_max);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (std::isnan(v[i])) o[header[i]] = nullptr;
      else o[header[i]] = v[i];
    }
    doc["rows"].push_back(o);
  }
  out << doc.dump(2) << '\n';
}

CompareSummary summarize(const ScanConfig& c, const std::vector<ScanRow>& rows) {
  CompareSummary s;
  s.rows = static_cast<int>(rows.size());
  s.window = c.exclusion();
  double sum = 0.0;
  for (const auto& r : rows) {
    if (std::abs(r.eps_i - 1.0) < s.window) {
      ++s.excluded;
      continue;
    }
    const double d = std::abs(r.T_total_pert - r.T_total_floquet);
    s.max_diff = std::max(s.max_diff, d);
    sum += d;
    ++s.used;
  }
  s.mean_diff = s.used ? sum / s.used : 0.0;
  return s;
}

void write_compare(std::ostream& out, const ScanConfig& c, const std::vector<ScanRow>& rows) {
  put_line(out, {"eps_i", "T_total_pert", "T_total_floquet", "abs_diff", "excluded"});
  const double w = c.exclusion();
  for (const auto& r : rows)
    put_line(out, {format_double(r.eps_i), format_double(r.T_total_pert), format_double(r.T_total_floquet),
                   format_double(std::abs(r.T_total_pert - r.T_total_floquet)),
                   std::abs(r.eps_i - 1.0) < w ? "1" : "0"});
  const CompareSummary s = summarize(c, rows);
  out << "# rows = " << s.rows << '\n'
      << "# excluded window = |eps_i - 1| < " << format_double(s.window) << " (" << s.excluded << " rows)\n"
      << "# compared rows = " << s.used << '\n'
      << "# max_diff = " << format_double(s.max_diff) << '\n'
      << "# mean_diff = " << format_double(s.mean_diff) << '\n';
}

void cmd_scan(const ScanConfig& c, std::ostream& out) {
  const auto rows = run_scan(c);
  with_output(c, out, [&](std::ostream& o) {
    if (c.output_format == Format::csv) write_csv(o, c, rows);
    else write_json(o, c, rows);
  });
}

void cmd_compare(ScanConfig c, std::ostream& out) {
  c.method = Method::both;
  const auto rows = run_scan(c);
  if (c.output_format == Format::json) {
    with_output(c, out, [&](std::ostream& o) { write_json(o, c, rows); });
  } else {
    with_output(c, out, [&](std::ostream& o) { write_compare(o, c, rows); });
  }
  if (!c.output_path.empty() || c.output_format == Format::json) {
    const CompareSummary s = summarize(c, rows);
    out << "# rows = " << s.rows << ", excluded |eps_i - 1| < " << format_double(s.window) << " (" << s.excluded
        << "), max_diff = " << format_double(s.max_diff) << ", mean_diff = " << format_double(s.mean_diff) << '\n';
  }
}

void cmd_zero(const ScanConfig& c, std::ostream& out) {
  if (c.g0 == 0.0) {
    out << "no zero: free transmission\n";
    return;
  }
  if (!(c.g0 > 0.0) || c.g0 > 1.0) throw UsageError("zero needs 0 < g0 <= 1");
  out << "g0 = " << format_double(c.g0) << '\n' << "method = " << to_string(c.method) << '\n';
  double ep = kNaN, ef = kNaN;
  if (c.method != Method::floquet) {
    const ZeroResult z = find_transmission_zero(c.g0);
    ep = z.eps_star;
    out << "eps_star_perturbative = " << format_double(z.eps_star) << '\n'
        << "t0_sq_perturbative = " << format_double(z.t0_sq) << '\n'
        << "prediction_1_minus_g0sq_over_8_minus_alpha = " << format_double(z.prediction) << '\n'
        << "bracket = " << format_double(z.lo) << ' ' << format_double(z.hi) << '\n';
  }
  if (c.method != Method::perturbative) {
    const floquet::ZeroLocation z = floquet::zero_locate_exact(c.g0);
    ef = z.eps_star;
    out << "eps_star_floquet = " << format_double(z.eps_star) << '\n'
        << "t0_sq_floquet = " << format_double(z.t0_sq) << '\n';
  }
  if (c.method == Method::both) out << "discrepancy = " << format_double(std::abs(ep - ef)) << '\n';
}

void cmd_w0(const ScanConfig& c, std::ostream& out) {
  c.validate();
  std::vector<double> es(c.steps), ws(c.steps);
  for (int i = 0; i < c.steps; ++i) {
    es[i] = c.eps_at(i);
    try {
      ws[i] = w0(es[i], c.g0);
    } catch (const std::exception& e) {
      throw PointError(es[i], e.what());
    }
  }
  with_output(c, out, [&](std::ostream& o) {
    if (c.output_format == Format::csv) {
      put_line(o, {"eps_i", "w0"});
      for (int i = 0; i < c.steps; ++i) put_line(o, {format_double(es[i]), format_double(ws[i])});
    } else {
      nlohmann::ordered_json doc;
      doc["metadata"] = {{"config", config_json(c)}, {"version", kVersion}};
      doc["rows"] = nlohmann::ordered_json::array();
      for (int i = 0; i < c.steps; ++i) doc["rows"].push_back({{"eps_i", es[i]}, {"w0", ws[i]}});
      o << doc.dump(2) << '\n';
    }
  });
}

}  // namespace odb::cli
