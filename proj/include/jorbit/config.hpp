#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "jorbit/quadrature.hpp"

namespace jorbit {

/// Sectioned key=value settings. A key is looked up in the named section first, then in
/// [global].
class Config {
 public:
  Config() = default;
  static Config parse(std::string_view text);
  /// Throws Error{parse} when the file is missing or malformed.
  static Config load(const std::string& path);

  std::optional<std::string> lookup(std::string_view section, std::string_view key) const;

  double get_double(std::string_view section, std::string_view key, double fallback) const;
  std::int64_t get_int(std::string_view section, std::string_view key, std::int64_t fallback) const;
  std::string get_string(std::string_view section, std::string_view key, std::string fallback) const;

 private:
  boost::property_tree::ptree tree_;
};

std::vector<double> parse_double_list(std::string_view text);

/// `base` with every quadrature key present in the config (section, then [global]) applied:
/// quad_points, truncation_radii, mc_samples, seed, mode, angle_points,
/// workers.
QuadratureSpec apply_config(const Config& config, std::string_view section, QuadratureSpec base);

}  // namespace jorbit
