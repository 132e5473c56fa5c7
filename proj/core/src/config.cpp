#include "foldcast/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "foldcast/preprocess.hpp"

namespace foldcast {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::uint64_t parse_u64(const std::string& v) {
  try {
    std::size_t pos = 0;
    const auto out = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("not an unsigned integer: " + v);
  }
}

int parse_int(const std::string& v) {
  try {
    std::size_t pos = 0;
    const int out = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("not an integer: " + v);
  }
}

double parse_double(const std::string& v) {
  try {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("not a number: " + v);
  }
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("not a boolean: " + v);
}

}  // namespace

RunConfig RunConfig::parse(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "seed")
      cfg.seed = parse_u64(value);
    else if (key == "pipeline") {
      if (value != "all") pipeline_from_name(value);  // validates
      cfg.pipeline = value;
    } else if (key == "out_dir")
      cfg.out_dir = value;
    else if (key == "n_per_class")
      cfg.n_per_class = parse_int(value);
    else if (key == "train_c1")
      cfg.train_c1 = parse_double(value);
    else if (key == "resample_len")
      cfg.resample_len = parse_int(value);
    else if (key == "movmean_fraction")
      cfg.movmean_fraction = parse_double(value);
    else if (key == "batch_size")
      cfg.batch_size = parse_int(value);
    else if (key == "max_epochs")
      cfg.max_epochs = parse_int(value);
    else if (key == "learning_rate")
      cfg.learning_rate = parse_double(value);
    else if (key == "val_fraction")
      cfg.val_fraction = parse_double(value);
    else if (key == "eval_c1")
      cfg.eval_c1 = parse_double(value);
    else if (key == "nld_grid_lo")
      cfg.nld_grid_lo = parse_double(value);
    else if (key == "nld_grid_hi")
      cfg.nld_grid_hi = parse_double(value);
    else if (key == "nld_grid_count")
      cfg.nld_grid_count = parse_int(value);
    else if (key == "mob_grid_lo")
      cfg.mob_grid_lo = parse_double(value);
    else if (key == "mob_grid_hi")
      cfg.mob_grid_hi = parse_double(value);
    else if (key == "mob_grid_count")
      cfg.mob_grid_count = parse_int(value);
    else if (key == "vdp_grid_lo")
      cfg.vdp_grid_lo = parse_double(value);
    else if (key == "vdp_grid_hi")
      cfg.vdp_grid_hi = parse_double(value);
    else if (key == "vdp_grid_count")
      cfg.vdp_grid_count = parse_int(value);
    else if (key == "pnp_grid_lo")
      cfg.pnp_grid_lo = parse_double(value);
    else if (key == "pnp_grid_hi")
      cfg.pnp_grid_hi = parse_double(value);
    else if (key == "pnp_grid_count")
      cfg.pnp_grid_count = parse_int(value);
    else if (key == "ics_per_value")
      cfg.ics_per_value = parse_int(value);
    else if (key == "smoke") {
      // Applied in place so later keys can still override the shrink.
      if (parse_bool(value))
        cfg.apply_smoke();
      else
        cfg.smoke = false;
    } else
      throw ConfigError("line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  return parse(in);
}

void RunConfig::apply_smoke() {
  smoke = true;
  n_per_class = 50;
  max_epochs = 5;
  nld_grid_count = 11;
  mob_grid_count = 9;
  vdp_grid_count = 9;
  pnp_grid_count = 9;
  ics_per_value = 3;
}

void RunConfig::validate() const {
  if (n_per_class < 1) throw ConfigError("n_per_class must be >= 1");
  if (resample_len < 32) throw ConfigError("resample_len must be >= 32");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(val_fraction > 0.0 && val_fraction < 1.0))
    throw ConfigError("val_fraction must be in (0, 1)");
  if (!(train_c1 > 0.0 && eval_c1 > 0.0))
    throw ConfigError("c1 values must be positive");
  if (nld_grid_count < 1 || mob_grid_count < 1 || vdp_grid_count < 1 ||
      pnp_grid_count < 1 || ics_per_value < 1)
    throw ConfigError("grid counts must be >= 1");
  if (pipeline != "all") pipeline_from_name(pipeline);
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  char buf[64];
  const auto num = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%s = %.17g\n", key, v);
    os << buf;
  };
  os << "seed = " << seed << "\n";
  os << "pipeline = " << pipeline << "\n";
  os << "n_per_class = " << n_per_class << "\n";
  num("train_c1", train_c1);
  os << "resample_len = " << resample_len << "\n";
  num("movmean_fraction", movmean_fraction);
  os << "batch_size = " << batch_size << "\n";
  os << "max_epochs = " << max_epochs << "\n";
  num("learning_rate", learning_rate);
  num("val_fraction", val_fraction);
  num("eval_c1", eval_c1);
  num("nld_grid_lo", nld_grid_lo);
  num("nld_grid_hi", nld_grid_hi);
  os << "nld_grid_count = " << nld_grid_count << "\n";
  num("mob_grid_lo", mob_grid_lo);
  num("mob_grid_hi", mob_grid_hi);
  os << "mob_grid_count = " << mob_grid_count << "\n";
  num("vdp_grid_lo", vdp_grid_lo);
  num("vdp_grid_hi", vdp_grid_hi);
  os << "vdp_grid_count = " << vdp_grid_count << "\n";
  num("pnp_grid_lo", pnp_grid_lo);
  num("pnp_grid_hi", pnp_grid_hi);
  os << "pnp_grid_count = " << pnp_grid_count << "\n";
  os << "ics_per_value = " << ics_per_value << "\n";
  return os.str();
}

std::uint64_t cell_hash(const RunConfig& config, const std::string& cell_id) {
  const std::string text = config.canonical() + "cell = " + cell_id + "\n";
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace foldcast
