#include "nrbridge/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "nrbridge/errors.hpp"

namespace nrbridge {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(const ConfigEntry& e, const std::string& what) {
  std::ostringstream os;
  os << "config line " << e.line << " ([" << e.section << "] " << e.key << "): " << what;
  throw ConfigError(os.str());
}

double parse_number(const ConfigEntry& e, std::string_view text) {
  text = trim(text);
  double x = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc{} || ptr != end) fail(e, "expected a number, got '" + std::string(text) + "'");
  return x;
}

int parse_int(const ConfigEntry& e) {
  const std::string_view text = trim(e.value);
  int x = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc{} || ptr != end) fail(e, "expected an integer, got '" + e.value + "'");
  return x;
}

std::vector<double> parse_list(const ConfigEntry& e) {
  std::vector<double> out;
  std::string_view rest = e.value;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_number(e, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format_double(xs[i]);
  }
  return out;
}

using Setter = std::function<void(const ConfigEntry&)>;
using Schema = std::map<std::string, std::map<std::string, Setter>, std::less<>>;

void apply_schema(std::string_view text, const Schema& schema) {
  for (const ConfigEntry& e : parse_config_entries(text)) {
    const auto sec = schema.find(e.section);
    if (sec == schema.end()) fail(e, "unknown section");
    const auto key = sec->second.find(e.key);
    if (key == sec->second.end()) fail(e, "unknown key");
    key->second(e);
  }
}

}  // namespace

std::vector<ConfigEntry> parse_config_entries(std::string_view text) {
  std::vector<ConfigEntry> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(line_no) + ": malformed section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    ConfigEntry e{section, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
                  line_no};
    if (e.key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (section.empty()) fail(e, "key outside of any section");
    if (!seen.emplace(e.section, e.key).second) fail(e, "duplicate key");
    out.push_back(std::move(e));
  }
  return out;
}

SweepConfig parse_sweep_config(std::string_view text) {
  SweepConfig cfg;
  const auto num = [](double& field) {
    return [&field](const ConfigEntry& e) { field = parse_number(e, e.value); };
  };
  Schema schema;
  schema["model"] = {
      {"eps_g", num(cfg.model.eps_g)},
      {"detuning", num(cfg.model.detuning)},
      {"t_left", num(cfg.model.t_left)},
      {"t_right", num(cfg.model.t_right)},
      {"t_e5", num(cfg.model.t_e5)},
      {"t_bath", num(cfg.model.t_bath)},
      {"temperature", num(cfg.model.temperature)},
      {"two_fermi_velocity", num(cfg.model.two_fermi_velocity)},
  };
  schema["sweep"] = {
      {"gamma_min", num(cfg.gamma.min)},
      {"gamma_max", num(cfg.gamma.max)},
      {"gamma_count", [&cfg](const ConfigEntry& e) { cfg.gamma.count = parse_int(e); }},
      {"e_nh", [&cfg](const ConfigEntry& e) { cfg.e_nh = parse_list(e); }},
      {"delta_mu", [&cfg](const ConfigEntry& e) { cfg.delta_mu = parse_list(e); }},
      {"output", [&cfg](const ConfigEntry& e) { cfg.output = e.value; }},
  };
  schema["solver"] = {
      {"tolerance", num(cfg.solver.abs_tol)},
      {"max_doublings", [&cfg](const ConfigEntry& e) { cfg.solver.max_doublings = parse_int(e); }},
  };
  apply_schema(text, schema);
  cfg.validate();
  return cfg;
}

std::string serialize_sweep_config(const SweepConfig& cfg) {
  std::ostringstream os;
  os << "[model]\n"
     << "eps_g = " << format_double(cfg.model.eps_g) << "\n"
     << "detuning = " << format_double(cfg.model.detuning) << "\n"
     << "t_left = " << format_double(cfg.model.t_left) << "\n"
     << "t_right = " << format_double(cfg.model.t_right) << "\n"
     << "t_e5 = " << format_double(cfg.model.t_e5) << "\n"
     << "t_bath = " << format_double(cfg.model.t_bath) << "\n"
     << "temperature = " << format_double(cfg.model.temperature) << "\n"
     << "two_fermi_velocity = " << format_double(cfg.model.two_fermi_velocity) << "\n"
     << "\n[sweep]\n"
     << "gamma_min = " << format_double(cfg.gamma.min) << "\n"
     << "gamma_max = " << format_double(cfg.gamma.max) << "\n"
     << "gamma_count = " << cfg.gamma.count << "\n"
     << "e_nh = " << join(cfg.e_nh) << "\n"
     << "delta_mu = " << join(cfg.delta_mu) << "\n";
  if (!cfg.output.empty()) os << "output = " << cfg.output << "\n";
  os << "\n[solver]\n"
     << "tolerance = " << format_double(cfg.solver.abs_tol) << "\n"
     << "max_doublings = " << cfg.solver.max_doublings << "\n";
  return os.str();
}

BridgeInstance parse_bridge_config(std::string_view text) {
  BridgeInstance inst;
  const auto num = [](double& field) {
    return [&field](const ConfigEntry& e) { field = parse_number(e, e.value); };
  };
  const auto real_part = [](cplx& field) {
    return [&field](const ConfigEntry& e) { field = {parse_number(e, e.value), 0.0}; };
  };
  Schema schema;
  schema["bridge"] = {
      {"regime",
       [&inst](const ConfigEntry& e) {
         if (e.value == "exact-quadratic") {
           inst.regime = BridgeRegime::kExactQuadratic;
         } else if (e.value == "adiabatic") {
           inst.regime = BridgeRegime::kAdiabatic;
         } else {
           fail(e, "regime must be exact-quadratic or adiabatic");
         }
       }},
      {"eps_g", num(inst.eps_g)},
      {"detuning", num(inst.detuning)},
      {"t_eg", real_part(inst.t_eg)},
      {"t_e5", real_part(inst.t_e5)},
      {"gamma_5", num(inst.gamma_5)},
      {"cavity_loss", num(inst.cavity_loss)},
      {"gamma_left", num(inst.left.gamma)},
      {"nbar_left", num(inst.left.nbar)},
      {"gamma_right", num(inst.right.gamma)},
      {"nbar_right", num(inst.right.nbar)},
      {"fock_cutoff", [&inst](const ConfigEntry& e) { inst.fock_cutoff = parse_int(e); }},
  };
  apply_schema(text, schema);
  try {
    inst.validate();
  } catch (const DomainError& err) {
    throw ConfigError(std::string("invalid bridge instance: ") + err.what());
  }
  return inst;
}

std::string serialize_bridge_config(const BridgeInstance& inst) {
  std::ostringstream os;
  os << "[bridge]\n"
     << "regime = " << regime_name(inst.regime) << "\n"
     << "eps_g = " << format_double(inst.eps_g) << "\n"
     << "detuning = " << format_double(inst.detuning) << "\n"
     << "t_eg = " << format_double(inst.t_eg.real()) << "\n"
     << "t_e5 = " << format_double(inst.t_e5.real()) << "\n"
     << "gamma_5 = " << format_double(inst.gamma_5) << "\n"
     << "cavity_loss = " << format_double(inst.cavity_loss) << "\n"
     << "gamma_left = " << format_double(inst.left.gamma) << "\n"
     << "nbar_left = " << format_double(inst.left.nbar) << "\n"
     << "gamma_right = " << format_double(inst.right.gamma) << "\n"
     << "nbar_right = " << format_double(inst.right.nbar) << "\n"
     << "fock_cutoff = " << inst.fock_cutoff << "\n";
  return os.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace nrbridge
