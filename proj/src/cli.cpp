#include "rodpulse/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "rodpulse/errors.hpp"
#include "rodpulse/fdtd.hpp"
#include "rodpulse/inverse_laplace.hpp"
#include "rodpulse/point_mass.hpp"
#include "rodpulse/series_solution.hpp"
#include "rodpulse/transform_domain.hpp"
#include "rodpulse/validation.hpp"

namespace rodpulse::cli {

namespace {

constexpr std::array<std::string_view, 13> kKeys = {
    "modulus_e",  "cross_section_s", "density_rho", "length_l",
    "end_mass_m", "magnitude_p",     "alpha",       "boundary_mode",
    "nx",         "courant",         "horizon_in_transit_times",
    "modal_terms_n", "output_dir",
};

// Rows written by simulate, and the grids used by invert and series.
constexpr long kTargetRows = 200;
constexpr int kTransformColumns = 41;
constexpr int kTransformRows = 201;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Setting {
  std::string value;
  int line = 0;
};

[[noreturn]] void reject(std::string_view key, int line, const std::string& why) {
  std::ostringstream msg;
  if (line > 0) msg << "line " << line << ": ";
  msg << key << ": " << why;
  throw ConfigError(msg.str(), std::string(key), line);
}

class SettingReader {
 public:
  explicit SettingReader(std::map<std::string, Setting, std::less<>> settings)
      : settings_(std::move(settings)) {}

  double number(std::string_view key, double fallback) const {
    const Setting* s = find(key);
    if (!s) return fallback;
    const auto v = parse_number(s->value);
    if (!v || !std::isfinite(*v)) reject(key, s->line, "not a finite number: '" + s->value + "'");
    return *v;
  }

  int integer(std::string_view key, int fallback) const {
    const Setting* s = find(key);
    if (!s) return fallback;
    int v = 0;
    const char* end = s->value.data() + s->value.size();
    const auto [ptr, ec] = std::from_chars(s->value.data(), end, v);
    if (ec != std::errc{} || ptr != end) reject(key, s->line, "not an integer: '" + s->value + "'");
    return v;
  }

  std::string text(std::string_view key, std::string fallback) const {
    const Setting* s = find(key);
    return s ? s->value : fallback;
  }

  int line(std::string_view key) const {
    const Setting* s = find(key);
    return s ? s->line : 0;
  }

  void require(bool ok, std::string_view key, const std::string& why) const {
    if (!ok) reject(key, line(key), why);
  }

 private:
  const Setting* find(std::string_view key) const {
    const auto it = settings_.find(key);
    return it == settings_.end() ? nullptr : &it->second;
  }

  std::map<std::string, Setting, std::less<>> settings_;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

RunConfig prepare(const CommandOptions& options, std::ostream& log) {
  RunConfig config = resolve_config(options);
  for (const auto& w : config.warnings) log << "warning: " << w << '\n';
  return config;
}

void write_field(const RunConfig& config, const std::string& name, const DisplacementField& field,
                 std::ostream& log) {
  const auto path = std::filesystem::path(config.output_dir) / name;
  write_file(path, field_csv(field));
  log << "wrote " << path.string() << " (" << field.nt() << " x " << field.nx() << ")\n";
}

Eigen::VectorXd transform_times(const RunConfig& config) {
  return Eigen::VectorXd::LinSpaced(kTransformRows, 0.0, config.horizon());
}

Eigen::VectorXd transform_positions(const RunConfig& config) {
  const int n = std::min(config.nx, kTransformColumns);
  return Eigen::VectorXd::LinSpaced(n, 0.0, config.scenario.rod.length_l);
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 40> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  if (ec != std::errc{}) throw Error("number formatting failed");
  return std::string(buf.data(), ptr);
}

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  // from_chars rejects a leading '+'; accept it for hand-written configs.
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Setting, std::less<>> settings;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected key = value, got '" << line << "'";
      throw ConfigError(msg.str(), std::string(line), line_no);
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing key", "", line_no);
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) reject(key, line_no, "unknown key");
    if (settings.contains(key)) {
      reject(key, line_no,
             "repeated key (first set on line " + std::to_string(settings.find(key)->second.line) + ")");
    }
    settings.emplace(std::string(key), Setting{std::string(value), line_no});
  }

  const SettingReader in(std::move(settings));
  RunConfig config;
  RodParams rod;
  ImpulseParams impulse;

  auto positive = [&](std::string_view key, double fallback) {
    const double v = in.number(key, fallback);
    in.require(v > 0.0, key, "must be positive (got " + format_number(v) + ")");
    return v;
  };
  rod.modulus_e = positive("modulus_e", rod.modulus_e);
  rod.cross_section_s = positive("cross_section_s", rod.cross_section_s);
  rod.density_rho = positive("density_rho", rod.density_rho);
  rod.length_l = positive("length_l", rod.length_l);
  rod.end_mass_m = positive("end_mass_m", rod.end_mass_m);
  impulse.magnitude_p = in.number("magnitude_p", impulse.magnitude_p);
  impulse.alpha = in.number("alpha", impulse.alpha);
  in.require(impulse.alpha != 0.0, "alpha", "must be nonzero");

  const std::string mode = in.text("boundary_mode", "physical");
  BoundaryKind kind = BoundaryKind::Physical;
  if (mode == "paper") {
    kind = BoundaryKind::Paper;
  } else {
    in.require(mode == "physical", "boundary_mode", "expected 'paper' or 'physical', got '" + mode + "'");
  }

  config.nx = in.integer("nx", config.nx);
  in.require(config.nx >= 16, "nx", "must be >= 16 (got " + std::to_string(config.nx) + ")");
  config.courant = in.number("courant", config.courant);
  in.require(config.courant > 0.0 && config.courant <= 1.0, "courant",
             "must lie in (0, 1] for a stable explicit scheme (got " + format_number(config.courant) + ")");
  config.horizon_in_transit_times = positive("horizon_in_transit_times", config.horizon_in_transit_times);
  config.modal_terms_n = in.integer("modal_terms_n", config.modal_terms_n);
  in.require(config.modal_terms_n >= 0, "modal_terms_n", "must be >= 0");
  config.output_dir = in.text("output_dir", config.output_dir);
  in.require(!config.output_dir.empty(), "output_dir", "must not be empty");

  try {
    config.scenario = make_scenario(rod, impulse, kind, "config");
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  if (auto w = regime_warning(rod)) config.warnings.push_back(*w);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string effective_config_text(const RunConfig& config) {
  const auto& rod = config.scenario.rod;
  const auto& imp = config.scenario.impulse;
  std::ostringstream out;
  out << "modulus_e = " << format_number(rod.modulus_e) << '\n'
      << "cross_section_s = " << format_number(rod.cross_section_s) << '\n'
      << "density_rho = " << format_number(rod.density_rho) << '\n'
      << "length_l = " << format_number(rod.length_l) << '\n'
      << "end_mass_m = " << format_number(rod.end_mass_m) << '\n'
      << "magnitude_p = " << format_number(imp.magnitude_p) << '\n'
      << "alpha = " << format_number(imp.alpha) << '\n'
      << "boundary_mode = " << to_string(config.scenario.boundary.kind) << '\n'
      << "nx = " << config.nx << '\n'
      << "courant = " << format_number(config.courant) << '\n'
      << "horizon_in_transit_times = " << format_number(config.horizon_in_transit_times) << '\n'
      << "modal_terms_n = " << config.modal_terms_n << '\n'
      << "output_dir = " << config.output_dir << '\n';
  return out.str();
}

void write_field_csv(std::ostream& out, const DisplacementField& field) {
  field.check_shape();
  if (field.quantity != "u" && field.quantity != "T") {
    throw ParameterError("field quantity must be 'u' or 'T'");
  }
  out << "x,t," << field.quantity << '\n';
  std::vector<std::string> xs(static_cast<std::size_t>(field.nx()));
  for (Eigen::Index i = 0; i < field.nx(); ++i) xs[static_cast<std::size_t>(i)] = format_number(field.x[i]);
  for (Eigen::Index j = 0; j < field.nt(); ++j) {
    const std::string t = format_number(field.t[j]);
    for (Eigen::Index i = 0; i < field.nx(); ++i) {
      out << xs[static_cast<std::size_t>(i)] << ',' << t << ',' << format_number(field.u(j, i)) << '\n';
    }
  }
}

std::string field_csv(const DisplacementField& field) {
  std::ostringstream out;
  write_field_csv(out, field);
  return out.str();
}

DisplacementField read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("empty field CSV");
  DisplacementField field;
  if (line == "x,t,u") {
    field.quantity = "u";
  } else if (line == "x,t,T") {
    field.quantity = "T";
  } else {
    throw ParameterError("unexpected field CSV header '" + line + "'");
  }

  std::vector<double> xs, ts, values;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw ParameterError("field CSV line " + std::to_string(line_no) + ": expected 3 columns");
    }
    const std::string_view view(line);
    std::array<double, 3> cells{};
    const std::array<std::string_view, 3> parts = {view.substr(0, c1), view.substr(c1 + 1, c2 - c1 - 1),
                                                   view.substr(c2 + 1)};
    for (std::size_t k = 0; k < 3; ++k) {
      const auto v = parse_number(parts[k]);
      if (!v) throw ParameterError("field CSV line " + std::to_string(line_no) + ": bad number");
      cells[k] = *v;
    }
    if (ts.empty() || cells[1] != ts.back()) {
      if (!ts.empty() && !(cells[1] > ts.back())) {
        throw ParameterError("field CSV line " + std::to_string(line_no) + ": times not ascending");
      }
      ts.push_back(cells[1]);
    }
    const std::size_t column = values.size() - (ts.size() - 1) * xs.size();
    if (ts.size() == 1) {
      xs.push_back(cells[0]);
    } else if (column >= xs.size() || xs[column] != cells[0]) {
      throw ParameterError("field CSV line " + std::to_string(line_no) + ": x grid differs between times");
    }
    values.push_back(cells[2]);
  }
  if (values.size() != xs.size() * ts.size()) throw ParameterError("field CSV has a truncated time row");

  field.x = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  field.t = Eigen::Map<const Eigen::VectorXd>(ts.data(), static_cast<Eigen::Index>(ts.size()));
  field.u = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), field.t.size(), field.x.size());
  field.method = "csv";
  field.check_shape();
  return field;
}

RunConfig resolve_config(const CommandOptions& options) {
  RunConfig config = options.config_path ? load_config(*options.config_path) : parse_config("");
  if (options.mode) config.scenario = with_boundary(config.scenario, *options.mode);
  if (options.output_dir) config.output_dir = options.output_dir->string();
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw Error("cannot create output directory " + config.output_dir + ": " + ec.message());
  write_file(std::filesystem::path(config.output_dir) / "effective_config.txt", effective_config_text(config));
  return config;
}

int cmd_simulate(const CommandOptions& options, std::ostream& log) {
  const RunConfig config = prepare(options, log);
  const auto grid =
      fdtd::SpaceTimeGrid::from_courant(config.scenario, config.nx, config.courant, config.horizon());
  const long stride = std::max(1L, grid.steps / kTargetRows);
  const auto field = fdtd::run(config.scenario, grid, stride);
  write_field(config, "simulate_u.csv", field, log);
  write_field(config, "simulate_tension.csv", fdtd::tension_field(field, config.scenario), log);
  return kExitOk;
}

int cmd_invert(const CommandOptions& options, std::ostream& log) {
  const RunConfig config = prepare(options, log);
  const auto field = inverse::invert_field(config.scenario, transform_positions(config),
                                           transform_times(config), inverse::default_config(config.scenario));
  for (const auto& note : field.notes) log << "note: " << note << '\n';
  write_field(config, "invert_u.csv", field, log);
  return kExitOk;
}

int cmd_series(const CommandOptions& options, std::ostream& log) {
  const RunConfig config = prepare(options, log);
  if (config.scenario.boundary.kind != BoundaryKind::Paper) {
    log << "note: the term-by-term series is written for the paper boundary convention\n";
  }
  const Scenario scenario = with_boundary(config.scenario, BoundaryKind::Paper);
  series::SeriesConfig sc;
  sc.modal_terms_n = config.modal_terms_n;
  const auto field =
      series::paper_series_field(scenario, transform_positions(config), transform_times(config), sc);
  log << "note: terms are evaluated exactly as written; see the paper_series section of the "
         "validation report for how far they sit from the inverted solution\n";
  write_field(config, "series_u.csv", field, log);
  return kExitOk;
}

int cmd_validate(const CommandOptions& options, std::ostream& log) {
  const RunConfig config = prepare(options, log);
  // Pole bookkeeping first, so a degenerate rod fails before the long runs.
  transform::enumerate_poles(with_boundary(config.scenario, BoundaryKind::Paper), config.modal_terms_n);

  validation::ValidationSettings settings;
  settings.nx = config.nx;
  settings.courant = config.courant;
  settings.horizon_transits = config.horizon_in_transit_times;
  settings.modal_terms_n = config.modal_terms_n;
  const auto report = validation::run_validation(config.scenario, settings);

  const std::filesystem::path dir(config.output_dir);
  write_file(dir / "validation_report.txt", report.to_text());
  write_file(dir / "validation_summary.csv", report.to_csv());
  for (const auto& c : report.criteria) {
    log << "criterion " << c.id << ' ' << (c.passed ? "PASS" : "FAIL") << (c.gating ? "" : " (diagnostic)")
        << "  " << c.title << "  measured " << format_number(c.measured) << '\n';
  }
  if (!report.gating_passed()) {
    log << "failed gating criteria:";
    for (int id : report.failed_gating()) log << ' ' << id;
    log << '\n';
    return kExitGatingFailure;
  }
  return kExitOk;
}

std::string point_mass_csv(const RunConfig& config, const PointMassOptions& pm) {
  if (pm.samples < 2) throw ParameterError("point-mass samples must be >= 2");
  if (!(pm.t_end > 0.0)) throw ParameterError("point-mass t_end must be positive");
  const double p = config.scenario.impulse.magnitude_p;
  const double alpha = config.scenario.impulse.alpha;
  const point_mass::OscillatorParams osc{pm.mass, pm.damping, pm.stiffness};

  std::ostringstream out;
  out << "t,x\n";
  for (int i = 0; i < pm.samples; ++i) {
    const double t = pm.t_end * static_cast<double>(i) / static_cast<double>(pm.samples - 1);
    const double x = pm.model == PointMassModel::Free
                         ? point_mass::free_particle_displacement(p, alpha, pm.mass, t)
                         : point_mass::oscillator_impulse_response(osc, p, alpha, t);
    out << format_number(t) << ',' << format_number(x) << '\n';
  }
  return out.str();
}

int cmd_point_mass(const CommandOptions& options, const PointMassOptions& pm, std::ostream& log) {
  const RunConfig config = prepare(options, log);
  const auto path = std::filesystem::path(config.output_dir) / "point_mass.csv";
  write_file(path, point_mass_csv(config, pm));
  log << "wrote " << path.string() << '\n';
  return kExitOk;
}

int guarded(const std::function<int()>& command, std::ostream& err) {
  try {
    return command();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ParameterError& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
}

}  // namespace rodpulse::cli
