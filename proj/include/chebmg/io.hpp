#ifndef CHEBMG_IO_HPP
#define CHEBMG_IO_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "beta_table.hpp"
#include "harness.hpp"

namespace chebmg {

/// Shortest decimal string that parses back to exactly the same value.
inline std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_shortest(std::size_t v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

inline std::size_t parse_size(const std::string& s) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a nonnegative integer: '" + s + "'");
  return v;
}

inline const char* kCsvHeader =
    "case_id,L_x,factor,family,k_pre,k_post,cycle,driver,iterations,fine_matvecs,"
    "rho,C_est,lambda_tilde,lambda_min_mult,converged,time_ms";

struct CsvOptions {
  /// Wall times are the one nondeterministic column; leaving them out
  /// keeps repeated sweeps byte-identical.
  bool include_timing = true;
};

inline std::optional<double> effective_lambda_min_mult(const CaseResult& r) {
  if (r.cfg.family == Family::first) return r.cfg.lambda_min_multiplier;
  if (r.cfg.family == Family::first_opt_lambda) return r.tuned_lambda_min;
  return std::nullopt;
}

inline void write_csv_row(std::ostream& os, const CaseResult& r, const CsvOptions& opts = {}) {
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_shortest(*v) : std::string();
  };
  os << r.cfg.id() << ',' << format_shortest(r.cfg.Lx) << ',' << r.cfg.factor << ','
     << to_string(r.cfg.family) << ',' << r.cfg.k_pre() << ',' << r.cfg.k_post() << ','
     << to_string(r.cfg.cycle) << ',' << to_string(r.cfg.driver) << ',' << r.report.iterations
     << ',' << r.report.fine_matvecs << ',' << format_shortest(r.report.rho) << ','
     << opt(r.C_est) << ',' << format_shortest(r.lambda_tilde) << ','
     << opt(effective_lambda_min_mult(r)) << ',' << (r.report.converged ? "true" : "false") << ',';
  if (opts.include_timing) os << format_shortest(r.report.wall_time_sec * 1e3);
  os << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<CaseResult>& rows,
                      const CsvOptions& opts = {}) {
  os << kCsvHeader << '\n';
  for (const CaseResult& r : rows) write_csv_row(os, r, opts);
}

/// One parsed CSV record; optional columns come back as nullopt.
struct CsvRow {
  std::string case_id;
  double Lx = 0.0;
  std::size_t factor = 0;
  std::string family;
  std::size_t k_pre = 0;
  std::size_t k_post = 0;
  std::string cycle;
  std::string driver;
  std::size_t iterations = 0;
  std::size_t fine_matvecs = 0;
  double rho = 0.0;
  std::optional<double> C_est;
  double lambda_tilde = 0.0;
  std::optional<double> lambda_min_mult;
  bool converged = false;
  std::optional<double> time_ms;
};

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline std::optional<double> opt_field(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

}  // namespace detail

inline std::vector<CsvRow> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("parse_csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::invalid_argument("parse_csv: unexpected header: " + line);
  std::vector<CsvRow> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 16)
      throw std::invalid_argument("parse_csv: expected 16 fields, got " +
                                  std::to_string(f.size()));
    CsvRow r;
    r.case_id = f[0];
    r.Lx = parse_double(f[1]);
    r.factor = parse_size(f[2]);
    r.family = f[3];
    r.k_pre = parse_size(f[4]);
    r.k_post = parse_size(f[5]);
    r.cycle = f[6];
    r.driver = f[7];
    r.iterations = parse_size(f[8]);
    r.fine_matvecs = parse_size(f[9]);
    r.rho = parse_double(f[10]);
    r.C_est = detail::opt_field(f[11]);
    r.lambda_tilde = parse_double(f[12]);
    r.lambda_min_mult = detail::opt_field(f[13]);
    if (f[14] == "true")
      r.converged = true;
    else if (f[14] == "false")
      r.converged = false;
    else
      throw std::invalid_argument("parse_csv: bad converged field: " + f[14]);
    r.time_ms = detail::opt_field(f[15]);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline void write_beta_table_csv(std::ostream& os) {
  os << "k,i,beta\n";
  for (std::size_t k = 1; k <= kBetaMaxOrder; ++k) {
    const auto row = beta_coefficients(k);
    for (std::size_t i = 0; i < row.size(); ++i)
      os << k << ',' << (i + 1) << ',' << format_shortest(row[i]) << '\n';
  }
}

// ---------------------------------------------------------------------------
// SVG sweep plots

namespace detail {

struct Series {
  std::string label;
  std::string color;
  bool dashed = false;
  std::vector<std::pair<double, double>> pts;  // (k, value)
};

inline std::string family_color(const std::string& family) {
  if (family == "first") return "#1f77b4";
  if (family == "first_opt_lambda") return "#17becf";
  if (family == "fourth") return "#2ca02c";
  if (family == "fourth_opt") return "#d62728";
  return "#7f7f7f";
}

inline std::string fmt_coord(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << v;
  return os.str();
}

/// One panel: polyline chart of value vs k with axis ticks and frame.
inline void write_panel(std::ostream& os, double x0, double y0, double w, double h,
                        const std::string& title, const std::vector<Series>& series) {
  double kmin = 1e300, kmax = -1e300, vmax = 0.0;
  for (const Series& s : series)
    for (const auto& [k, v] : s.pts) {
      kmin = std::min(kmin, k);
      kmax = std::max(kmax, k);
      vmax = std::max(vmax, v);
    }
  if (kmax <= kmin) kmax = kmin + 1.0;
  if (vmax <= 0.0) vmax = 1.0;
  vmax *= 1.05;
  const auto px = [&](double k) { return x0 + (k - kmin) / (kmax - kmin) * w; };
  const auto py = [&](double v) { return y0 + h - v / vmax * h; };

  os << "<rect x=\"" << fmt_coord(x0) << "\" y=\"" << fmt_coord(y0) << "\" width=\""
     << fmt_coord(w) << "\" height=\"" << fmt_coord(h)
     << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << fmt_coord(x0 + w / 2) << "\" y=\"" << fmt_coord(y0 - 10)
     << "\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";

  const int n_ticks = 5;
  for (int t = 0; t <= n_ticks; ++t) {
    const double v = vmax * t / n_ticks;
    const double y = py(v);
    os << "<line x1=\"" << fmt_coord(x0 - 4) << "\" y1=\"" << fmt_coord(y) << "\" x2=\""
       << fmt_coord(x0) << "\" y2=\"" << fmt_coord(y) << "\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << fmt_coord(x0 - 8) << "\" y=\"" << fmt_coord(y + 4)
       << "\" text-anchor=\"end\" font-size=\"11\">" << static_cast<long>(v + 0.5)
       << "</text>\n";
  }
  for (double k = kmin; k <= kmax + 1e-9; k += 1.0) {
    const double x = px(k);
    os << "<line x1=\"" << fmt_coord(x) << "\" y1=\"" << fmt_coord(y0 + h) << "\" x2=\""
       << fmt_coord(x) << "\" y2=\"" << fmt_coord(y0 + h + 4) << "\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << fmt_coord(x) << "\" y=\"" << fmt_coord(y0 + h + 16)
       << "\" text-anchor=\"middle\" font-size=\"11\">" << static_cast<long>(k) << "</text>\n";
  }
  os << "<text x=\"" << fmt_coord(x0 + w / 2) << "\" y=\"" << fmt_coord(y0 + h + 32)
     << "\" text-anchor=\"middle\" font-size=\"12\">k</text>\n";

  for (const Series& s : series) {
    if (s.pts.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (s.dashed) os << " stroke-dasharray=\"6 3\"";
    os << " points=\"";
    for (const auto& [k, v] : s.pts) os << fmt_coord(px(k)) << ',' << fmt_coord(py(v)) << ' ';
    os << "\"/>\n";
    for (const auto& [k, v] : s.pts)
      os << "<circle cx=\"" << fmt_coord(px(k)) << "\" cy=\"" << fmt_coord(py(v))
         << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
  }
}

}  // namespace detail

/// Renders one panel pair (matvecs vs k, iterations vs k) for the rows
/// of a single (L_x, factor) group. Non-converged rows are skipped.
inline void write_sweep_svg(std::ostream& os, const std::vector<const CaseResult*>& rows,
                            double Lx, std::size_t factor) {
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  std::vector<detail::Series> mv_series, it_series;
  for (const CaseResult* r : rows) {
    if (!r->report.converged) continue;
    const std::string fam = to_string(r->cfg.family);
    const std::string cyc = to_string(r->cfg.cycle);
    const auto key = std::make_pair(fam, cyc);
    if (index.find(key) == index.end()) {
      index[key] = mv_series.size();
      detail::Series s;
      s.label = fam + " " + cyc;
      s.color = detail::family_color(fam);
      s.dashed = cyc == "one_sided";
      mv_series.push_back(s);
      it_series.push_back(s);
    }
    const std::size_t i = index[key];
    const double k = static_cast<double>(r->cfg.k);
    mv_series[i].pts.emplace_back(k, static_cast<double>(r->report.fine_matvecs));
    it_series[i].pts.emplace_back(k, static_cast<double>(r->report.iterations));
  }

  const double W = 980, H = 430;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
     << "L_x = " << format_shortest(Lx) << ", coarsening factor " << factor << "</text>\n";
  detail::write_panel(os, 60, 60, 390, 290, "fine matvecs", mv_series);
  detail::write_panel(os, 540, 60, 390, 290, "iterations", it_series);
  double lx = 60, ly = H - 18;
  for (const detail::Series& s : mv_series) {
    os << "<line x1=\"" << detail::fmt_coord(lx) << "\" y1=\"" << detail::fmt_coord(ly - 4)
       << "\" x2=\"" << detail::fmt_coord(lx + 24) << "\" y2=\"" << detail::fmt_coord(ly - 4)
       << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
    if (s.dashed) os << " stroke-dasharray=\"6 3\"";
    os << "/>\n";
    os << "<text x=\"" << detail::fmt_coord(lx + 30) << "\" y=\"" << detail::fmt_coord(ly)
       << "\" font-size=\"11\">" << s.label << "</text>\n";
    lx += 30.0 + 7.0 * static_cast<double>(s.label.size()) + 24.0;
  }
  os << "</svg>\n";
}

/// Emits sweep.csv plus one SVG per (L_x, factor) group into out_dir.
/// Returns the written file names.
inline std::vector<std::string> emit_sweep(const SweepResult& sr, const std::string& out_dir,
                                           bool want_csv, bool want_svg,
                                           const CsvOptions& opts = {}) {
  std::vector<std::string> written;
  if (want_csv) {
    const std::string path = out_dir + "/sweep.csv";
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_csv(os, sr.rows, opts);
    written.push_back(path);
  }
  if (want_svg) {
    std::map<std::pair<double, std::size_t>, std::vector<const CaseResult*>> groups;
    for (const CaseResult& r : sr.rows)
      groups[{r.cfg.Lx, r.cfg.factor}].push_back(&r);
    for (const auto& [key, rows] : groups) {
      const std::string path = out_dir + "/sweep_Lx" + format_shortest(key.first) + "_f" +
                               std::to_string(key.second) + ".svg";
      std::ofstream os(path);
      if (!os) throw std::runtime_error("cannot open " + path);
      write_sweep_svg(os, rows, key.first, key.second);
      written.push_back(path);
    }
  }
  return written;
}

// ---------------------------------------------------------------------------
// Flat key/value config files

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace detail

/// Flat dotted-key configuration, e.g. `case.Lx = 64` or
/// `sweep.k = 1..10`. Lines are key = value; `#` starts a comment.
/// Accessors record which keys were read so the caller can reject
/// unknown ones.
class Config {
 public:
  Config() = default;

  static Config parse(std::istream& is) {
    Config c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
      const std::string key = detail::trim(line.substr(0, eq));
      const std::string value = detail::trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
      if (c.kv_.count(key))
        throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key " + key);
      c.kv_[key] = value;
    }
    return c;
  }

  static Config parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    return parse(is);
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& def) const {
    consumed_.insert(key);
    const auto it = kv_.find(key);
    return it == kv_.end() ? def : it->second;
  }

  double get_double(const std::string& key, double def) const {
    consumed_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    try {
      return parse_double(it->second);
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + ": not a number: " + it->second);
    }
  }

  std::size_t get_size(const std::string& key, std::size_t def) const {
    consumed_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    try {
      return parse_size(it->second);
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + ": not an integer: " + it->second);
    }
  }

  bool get_bool(const std::string& key, bool def) const {
    consumed_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    if (it->second == "true") return true;
    if (it->second == "false") return false;
    throw ConfigError("config key " + key + ": expected true or false, got " + it->second);
  }

  /// Comma list of integers where each element may be a `a..b` range.
  std::vector<std::size_t> get_size_list(const std::string& key,
                                         std::vector<std::size_t> def) const {
    consumed_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    std::vector<std::size_t> out;
    for (const std::string& tok_raw : detail::split(it->second, ',')) {
      const std::string tok = detail::trim(tok_raw);
      const std::size_t dots = tok.find("..");
      try {
        if (dots == std::string::npos) {
          out.push_back(parse_size(tok));
        } else {
          const std::size_t a = parse_size(detail::trim(tok.substr(0, dots)));
          const std::size_t b = parse_size(detail::trim(tok.substr(dots + 2)));
          if (b < a) throw std::invalid_argument("descending range");
          for (std::size_t v = a; v <= b; ++v) out.push_back(v);
        }
      } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": bad list element: " + tok);
      }
    }
    if (out.empty()) throw ConfigError("config key " + key + ": empty list");
    return out;
  }

  std::vector<double> get_double_list(const std::string& key, std::vector<double> def) const {
    consumed_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    std::vector<double> out;
    for (const std::string& tok_raw : detail::split(it->second, ',')) {
      const std::string tok = detail::trim(tok_raw);
      try {
        out.push_back(parse_double(tok));
      } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": bad list element: " + tok);
      }
    }
    if (out.empty()) throw ConfigError("config key " + key + ": empty list");
    return out;
  }

  std::vector<std::string> get_string_list(const std::string& key,
                                           std::vector<std::string> def) const {
    consumed_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    std::vector<std::string> out;
    for (const std::string& tok : detail::split(it->second, ','))
      out.push_back(detail::trim(tok));
    return out;
  }

  /// Keys present in the file that no accessor asked about.
  std::vector<std::string> unconsumed() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : kv_)
      if (!consumed_.count(k)) out.push_back(k);
    return out;
  }

  void reject_unknown() const {
    const auto extra = unconsumed();
    if (extra.empty()) return;
    std::string msg = "unknown config keys:";
    for (const std::string& k : extra) msg += " " + k;
    throw ConfigError(msg);
  }

 private:
  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> consumed_;
};

/// Reads a SweepSpec from config keys (sweep.* for the grid, case.*
/// for shared per-case settings). Unknown keys are rejected.
inline SweepSpec sweep_spec_from_config(const Config& cfg) {
  SweepSpec spec;
  spec.Lx = cfg.get_double_list("sweep.Lx", spec.Lx);
  spec.factors = cfg.get_size_list("sweep.factor", spec.factors);
  spec.ks = cfg.get_size_list("sweep.k", spec.ks);
  std::vector<std::string> fam_def;
  for (Family f : spec.families) fam_def.push_back(to_string(f));
  spec.families.clear();
  for (const std::string& s : cfg.get_string_list("sweep.family", fam_def)) {
    try {
      spec.families.push_back(family_from_string(s));
    } catch (const std::exception&) {
      throw ConfigError("config key sweep.family: unknown family " + s);
    }
  }
  std::vector<std::string> cyc_def;
  for (Cycle c : spec.cycles) cyc_def.push_back(to_string(c));
  spec.cycles.clear();
  for (const std::string& s : cfg.get_string_list("sweep.cycle", cyc_def)) {
    try {
      spec.cycles.push_back(cycle_from_string(s));
    } catch (const std::exception&) {
      throw ConfigError("config key sweep.cycle: unknown cycle " + s);
    }
  }

  CaseConfig& b = spec.base;
  b.n = cfg.get_size("case.n", b.n);
  try {
    b.driver = driver_from_string(cfg.get_string("case.driver", to_string(b.driver)));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config key case.driver: ") + e.what());
  }
  b.tol = cfg.get_double("case.tol", b.tol);
  b.restart = cfg.get_size("case.restart", b.restart);
  b.maxit = cfg.get_size("case.maxit", b.maxit);
  b.seeds.rhs = cfg.get_size("case.rhs_seed", b.seeds.rhs);
  b.seeds.eigen = cfg.get_size("case.eigen_seed", b.seeds.eigen);
  b.seeds.tuning = cfg.get_size("case.tuning_seed", b.seeds.tuning);
  b.lambda_max_multiplier = cfg.get_double("case.lambda_max_multiplier", b.lambda_max_multiplier);
  b.lambda_min_multiplier = cfg.get_double("case.lambda_min_multiplier", b.lambda_min_multiplier);
  b.eigen_iterations = cfg.get_size("case.eigen_iterations", b.eigen_iterations);
  b.estimate_c = cfg.get_bool("case.estimate_c", b.estimate_c);
  cfg.reject_unknown();
  return spec;
}

}  // namespace chebmg

#endif
