#include "dgtm/driver.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dgtm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream ss(text);
  T value{};
  ss >> value;
  if (ss.fail() || !(ss >> std::ws).eof()) {
    throw Error("config: bad value '" + text + "' for '" + key + "'");
  }
  return value;
}

template <class T>
std::array<T, 2> parse_pair(const std::string& key, std::string text) {
  for (char& c : text) {
    if (c == ',') c = ' ';
  }
  std::istringstream ss(text);
  std::array<T, 2> v{};
  ss >> v[0] >> v[1];
  if (ss.fail() || !(ss >> std::ws).eof()) {
    throw Error("config: '" + key + "' expects two values, got '" + text + "'");
  }
  return v;
}

}  // namespace

void Config::set(const std::string& key_in, const std::string& value_in) {
  std::string key = trim(key_in);
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  const std::string value = trim(value_in);

  if (key == "mesh") {
    mesh_path = value;
  } else if (key == "rect") {
    const auto v = parse_pair<int>(key, value);
    rect_nx = v[0];
    rect_ny = v[1];
    mesh_path.reset();
  } else if (key == "degree") {
    degree = parse_value<int>(key, value);
  } else if (key == "alpha") {
    alpha = parse_value<double>(key, value);
  } else if (key == "epsilon") {
    epsilon = parse_value<double>(key, value);
  } else if (key == "mu") {
    mu = parse_value<double>(key, value);
  } else if (key == "cfl") {
    cfl = parse_value<double>(key, value);
  } else if (key == "final-time") {
    final_time = parse_value<double>(key, value);
  } else if (key == "align") {
    align = parse_value<int>(key, value);
  } else if (key == "waste-threshold") {
    waste_threshold = parse_value<double>(key, value);
  } else if (key == "mb") {
    if (value == "auto") {
      mb_elems.reset();
    } else {
      mb_elems = parse_value<int>(key, value);
    }
  } else if (key == "snap-every") {
    snap_every = parse_value<int>(key, value);
  } else if (key == "out") {
    out_dir = value;
  } else if (key == "mode") {
    const auto v = parse_pair<int>(key, value);
    mode_m = v[0];
    mode_n = v[1];
  } else if (key == "initial") {
    if (value == "cavity") {
      initial = InitialCondition::Cavity;
    } else if (value == "constant") {
      initial = InitialCondition::ConstantH;
    } else if (value == "pulse") {
      initial = InitialCondition::Pulse;
    } else {
      throw Error("config: initial must be cavity, constant or pulse, got '" + value + "'");
    }
  } else if (key == "variant") {
    variant = parse_variant(value);
  } else if (key == "precision") {
    if (value == "single") {
      precision = Precision::Single;
    } else if (value == "double") {
      precision = Precision::Double;
    } else {
      throw Error("config: precision must be single or double, got '" + value + "'");
    }
  } else if (key == "threads") {
    threads = parse_value<int>(key, value);
  } else if (key == "reps") {
    tune_reps = parse_value<int>(key, value);
  } else if (key == "warmup") {
    tune_warmup = parse_value<int>(key, value);
  } else {
    throw Error("config: unknown key '" + key + "'");
  }
}

void Config::validate(std::ostream* warnings) const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error("config: " + what);
  };
  require(degree >= 1 && degree <= kMaxDegree,
          "degree must be in [1, " + std::to_string(kMaxDegree) + "]");
  require(rect_nx >= 1 && rect_ny >= 1, "rect needs at least one cell per side");
  require(alpha >= 0.0, "alpha must be non-negative");
  require(epsilon > 0.0 && mu > 0.0, "epsilon and mu must be positive");
  require(cfl > 0.0, "cfl must be positive");
  require(final_time >= 0.0, "final-time must be non-negative");
  require(align >= 1, "align must be positive");
  require(waste_threshold > 0.0 && waste_threshold < 1.0, "waste-threshold must be in (0, 1)");
  require(!mb_elems || *mb_elems >= 1, "mb must be auto or positive");
  require(snap_every >= 0, "snap-every must be non-negative");
  require(mode_m >= 1 && mode_n >= 1, "mode indices must be >= 1");
  require(threads >= 0, "threads must be non-negative");
  require(tune_reps >= 1 && tune_warmup >= 0, "reps must be positive and warmup non-negative");
  if (alpha > 1.0 && warnings) {
    *warnings << "warning: alpha = " << alpha << " lies outside [0, 1]\n";
  }
}

double Config::wave_speed() const { return 1.0 / std::sqrt(epsilon * mu); }

void parse_config(std::istream& in, Config& cfg, const std::string& source) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      cfg.set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void load_config(const std::filesystem::path& path, Config& cfg) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open '" + path.string() + "'");
  parse_config(in, cfg, path.string());
}

}  // namespace dgtm
