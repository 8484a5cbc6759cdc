#include "seal/config.hpp"

#include <fstream>

#include "seal/errors.hpp"

namespace seal::cfg {

const Profile& profile_by_name(const std::string& name) {
  static const Profile benchmark = {
      .name = "benchmark",
      .dims = {.in_features = 0,
               .gcn_hidden = 128,
               .gcn_out = 8,
               .att_hidden = 64,
               .att_views = 16,
               .dense_units = 256,
               .classes = 0},
      .dropout_rate = 0.5,
      .penalty_coeff = 0.15,
      .hc_hidden = 16,
  };
  static const Profile synthetic = {
      .name = "synthetic",
      .dims = {.in_features = 0,
               .gcn_hidden = 32,
               .gcn_out = 4,
               .att_hidden = 32,
               .att_views = 10,
               .dense_units = 48,
               .classes = 0},
      .dropout_rate = 0.3,
      .penalty_coeff = 0.15,
      .hc_hidden = 16,
  };
  if (name == "benchmark") return benchmark;
  if (name == "synthetic") return synthetic;
  throw config_error("unknown profile '" + name + "' (expected benchmark or synthetic)");
}

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path.string() + ":" + std::to_string(line_no) +
                         ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw config_error(path.string() + ":" + std::to_string(line_no) +
                         ": expected 'key = value'");
    if (kv.count(key))
      throw config_error(path.string() + ":" + std::to_string(line_no) +
                         ": duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

}  // namespace seal::cfg
