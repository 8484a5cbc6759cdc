#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "seal/sage.hpp"

namespace seal::cfg {

// Built-in hyperparameter profiles. in_features and classes are filled in
// from the dataset at run time.
struct Profile {
  std::string name;
  SageDims dims;
  double dropout_rate = 0.5;
  double penalty_coeff = 0.15;
  int hc_hidden = 16;
};

// "benchmark": the wide architecture used on the protein benchmarks.
// "synthetic": the narrow architecture used on the generated hierarchy.
const Profile& profile_by_name(const std::string& name);

// Flat "key = value" lines, '#' comments, blank lines ignored.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

}  // namespace seal::cfg
