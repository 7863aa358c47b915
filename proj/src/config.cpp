#include "levysv/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "levysv/csv.hpp"
#include "levysv/errors.hpp"
#include "levysv/theory.hpp"

namespace levysv {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& key,
                               const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (cell.empty())
      throw ConfigError("config key '" + key + "': empty list entry");
    try {
      out.push_back(parse_double(cell));
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': bad number '" + cell + "'");
    }
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

double parse_scalar(const std::string& key, const std::string& value) {
  try {
    return parse_double(value);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad number '" + value + "'");
  }
}

std::uint64_t parse_unsigned(const std::string& key,
                             const std::string& value) {
  if (value.empty() ||
      value.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("config key '" + key + "': expected a nonnegative "
                      "integer, got '" + value + "'");
  return std::stoull(value);
}

void validate(const ExperimentConfig& cfg) {
  if (!(cfg.drift >= 0.0)) throw ConfigError("drift must be >= 0");
  if (!(cfg.jump_rate >= 0.0)) throw ConfigError("jump_rate must be >= 0");
  if (!(cfg.alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(cfg.x_min > 0.0)) throw ConfigError("x_min must be > 0");
  if (cfg.epsilon && !(*cfg.epsilon > 0.0))
    throw ConfigError("epsilon must be > 0");
  if (cfg.drift_kind != "power" && cfg.drift_kind != "linear")
    throw ConfigError("drift_kind must be 'power' or 'linear'");
  if (!(cfg.coefficient > 0.0)) throw ConfigError("C must be > 0");
  if (cfg.drift_kind == "power" && !(cfg.gamma >= 1.0))
    throw ConfigError("gamma must be >= 1");
  if (cfg.lags.empty()) throw ConfigError("lags must be nonempty");
  for (std::size_t i = 0; i < cfg.lags.size(); ++i) {
    if (!(cfg.lags[i] > 0.0)) throw ConfigError("lags must be > 0");
    if (i > 0 && !(cfg.lags[i] > cfg.lags[i - 1]))
      throw ConfigError("lags must be strictly increasing");
  }
  if (cfg.q_grid.empty()) throw ConfigError("q_grid must be nonempty");
  for (const double q : cfg.q_grid)
    if (!(q >= 1.0)) throw ConfigError("q_grid entries must be >= 1");
  if (cfg.n_paths == 0) throw ConfigError("n_paths must be >= 1");
  if (!(cfg.burn_in > 0.0)) throw ConfigError("burn_in must be > 0");
  if (cfg.out_dir.empty()) throw ConfigError("out_dir must be nonempty");
  if (cfg.n_tail_samples == 0)
    throw ConfigError("n_tail_samples must be >= 1");
  if (!(cfg.tol_diffusive > 0.0)) throw ConfigError("tol_diffusive must be > 0");
  if (!(cfg.tol_multiscaling > 0.0))
    throw ConfigError("tol_multiscaling must be > 0");
  if (!(cfg.tol_tail > 0.0)) throw ConfigError("tol_tail must be > 0");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "subordinator" && section != "drift" &&
          section != "experiment")
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key or value");

    if (section == "subordinator") {
      if (key == "drift") cfg.drift = parse_scalar(key, value);
      else if (key == "jump_rate") cfg.jump_rate = parse_scalar(key, value);
      else if (key == "alpha") cfg.alpha = parse_scalar(key, value);
      else if (key == "x_min") cfg.x_min = parse_scalar(key, value);
      else if (key == "epsilon") cfg.epsilon = parse_scalar(key, value);
      else
        throw ConfigError("unknown key '" + key + "' in [subordinator]");
    } else if (section == "drift") {
      if (key == "drift_kind") cfg.drift_kind = value;
      else if (key == "C") cfg.coefficient = parse_scalar(key, value);
      else if (key == "gamma") cfg.gamma = parse_scalar(key, value);
      else
        throw ConfigError("unknown key '" + key + "' in [drift]");
    } else if (section == "experiment") {
      if (key == "lags") cfg.lags = parse_list(key, value);
      else if (key == "q_grid") cfg.q_grid = parse_list(key, value);
      else if (key == "n_paths")
        cfg.n_paths = static_cast<std::size_t>(parse_unsigned(key, value));
      else if (key == "burn_in") cfg.burn_in = parse_scalar(key, value);
      else if (key == "seed") cfg.seed = parse_unsigned(key, value);
      else if (key == "workers")
        cfg.workers = static_cast<unsigned>(parse_unsigned(key, value));
      else if (key == "out_dir") cfg.out_dir = value;
      else if (key == "n_tail_samples")
        cfg.n_tail_samples =
            static_cast<std::size_t>(parse_unsigned(key, value));
      else if (key == "hill_k")
        cfg.hill_k = static_cast<std::size_t>(parse_unsigned(key, value));
      else if (key == "tol_diffusive")
        cfg.tol_diffusive = parse_scalar(key, value);
      else if (key == "tol_multiscaling")
        cfg.tol_multiscaling = parse_scalar(key, value);
      else if (key == "tol_tail") cfg.tol_tail = parse_scalar(key, value);
      else
        throw ConfigError("unknown key '" + key + "' in [experiment]");
    } else {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": key outside any section");
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string canonical_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "[subordinator]\n";
  os << "drift = " << format17(cfg.drift) << "\n";
  os << "jump_rate = " << format17(cfg.jump_rate) << "\n";
  os << "alpha = " << format17(cfg.alpha) << "\n";
  os << "x_min = " << format17(cfg.x_min) << "\n";
  if (cfg.epsilon) os << "epsilon = " << format17(*cfg.epsilon) << "\n";
  os << "[drift]\n";
  os << "drift_kind = " << cfg.drift_kind << "\n";
  os << "C = " << format17(cfg.coefficient) << "\n";
  if (cfg.drift_kind == "power")
    os << "gamma = " << format17(cfg.gamma) << "\n";
  os << "[experiment]\n";
  os << "lags = ";
  for (std::size_t i = 0; i < cfg.lags.size(); ++i)
    os << (i ? ", " : "") << format17(cfg.lags[i]);
  os << "\nq_grid = ";
  for (std::size_t i = 0; i < cfg.q_grid.size(); ++i)
    os << (i ? ", " : "") << format17(cfg.q_grid[i]);
  os << "\nn_paths = " << format_u64(cfg.n_paths) << "\n";
  os << "burn_in = " << format17(cfg.burn_in) << "\n";
  os << "seed = " << format_u64(cfg.seed) << "\n";
  os << "workers = " << format_u64(cfg.workers) << "\n";
  os << "out_dir = " << cfg.out_dir << "\n";
  os << "n_tail_samples = " << format_u64(cfg.n_tail_samples) << "\n";
  os << "hill_k = " << format_u64(cfg.hill_k) << "\n";
  os << "tol_diffusive = " << format17(cfg.tol_diffusive) << "\n";
  os << "tol_multiscaling = " << format17(cfg.tol_multiscaling) << "\n";
  os << "tol_tail = " << format17(cfg.tol_tail) << "\n";
  return os.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  // The hash identifies the experiment that produced the data. Where the
  // artifacts land and how many threads computed them never change a byte
  // of output, so they are normalized away before hashing.
  ExperimentConfig identity = cfg;
  identity.out_dir.clear();
  identity.workers = 0;
  const std::string text = canonical_config(identity);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

BuiltModel build_model(const ExperimentConfig& cfg) {
  SubordinatorSpec spec(cfg.drift, cfg.jump_rate,
                        ParetoJumps{cfg.x_min, cfg.alpha});
  double residual = cfg.drift;
  if (cfg.epsilon) {
    auto truncated = truncate(spec, *cfg.epsilon);
    spec = truncated.spec;
    residual = truncated.residual_drift;
  }
  DriftSpec drift = cfg.drift_kind == "linear"
                        ? DriftSpec::linear(cfg.coefficient)
                        : DriftSpec::power_law(cfg.coefficient, cfg.gamma);
  return {std::move(spec), std::move(drift), residual};
}

std::vector<double> adjusted_q_grid(const ExperimentConfig& cfg,
                                    std::vector<std::string>* warnings) {
  const BuiltModel model = build_model(cfg);
  const auto thresholds =
      scaling_thresholds(model.drift, model.subordinator.tail_exponent());

  constexpr double kGap = 0.05;
  std::vector<double> adjusted;
  adjusted.reserve(cfg.q_grid.size());
  for (double q : cfg.q_grid) {
    for (const double thr : thresholds) {
      if (std::abs(q - thr) < kGap) {
        // Entries exactly at the threshold move below it.
        const double moved = q < thr ? thr - kGap : (q > thr ? thr + kGap
                                                             : thr - kGap);
        if (warnings)
          warnings->push_back("q=" + format17(q) + " is within " +
                              format17(kGap) + " of scaling threshold " +
                              format17(thr) + "; adjusted to " +
                              format17(moved));
        q = moved;
      }
    }
    if (q < 1.0) q = 1.0;
    adjusted.push_back(q);
  }
  return adjusted;
}

}  // namespace levysv
