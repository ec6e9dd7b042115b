#include "jorbit/config.hpp"

#include <fstream>
#include <sstream>

#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>

#include "jorbit/errors.hpp"

namespace jorbit {

namespace {

template <class T>
T convert(const std::string& text, std::string_view key) {
  try {
    return boost::lexical_cast<T>(text);
  } catch (const boost::bad_lexical_cast&) {
    throw Error(ErrorKind::parse, "config key '" + std::string(key) + "': cannot read '" + text + "'");
  }
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config c;
  std::istringstream is{std::string(text)};
  try {
    boost::property_tree::read_ini(is, c.tree_);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorKind::parse, std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot open config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

std::optional<std::string> Config::lookup(std::string_view section, std::string_view key) const {
  for (std::string_view s : {section, std::string_view("global")}) {
    if (s.empty()) continue;
    const auto sec = tree_.get_child_optional(boost::property_tree::ptree::path_type(std::string(s), '\0'));
    if (!sec) continue;
    const auto v = sec->get_optional<std::string>(boost::property_tree::ptree::path_type(std::string(key), '\0'));
    if (v) return *v;
  }
  return std::nullopt;
}

double Config::get_double(std::string_view section, std::string_view key, double fallback) const {
  const auto v = lookup(section, key);
  return v ? convert<double>(*v, key) : fallback;
}

std::int64_t Config::get_int(std::string_view section, std::string_view key, std::int64_t fallback) const {
  const auto v = lookup(section, key);
  return v ? convert<std::int64_t>(*v, key) : fallback;
}

std::string Config::get_string(std::string_view section, std::string_view key, std::string fallback) const {
  const auto v = lookup(section, key);
  return v ? *v : fallback;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream is{std::string(text)};
  while (std::getline(is, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(convert<double>(item.substr(b, e - b + 1), "list"));
  }
  return out;
}

QuadratureSpec apply_config(const Config& config, std::string_view section, QuadratureSpec base) {
  base.points_per_axis = static_cast<int>(config.get_int(section, "quad_points", base.points_per_axis));
  if (const auto v = config.lookup(section, "truncation_radii")) base.truncation_radii = parse_double_list(*v);
  base.mc_samples = config.get_int(section, "mc_samples", base.mc_samples);
  if (const auto v = config.lookup(section, "seed")) base.seed = convert<std::uint64_t>(*v, "seed");
  if (const auto v = config.lookup(section, "mode")) base.mode = parse_quad_mode(*v);
  base.angle_points = static_cast<int>(config.get_int(section, "angle_points", base.angle_points));
  base.workers = static_cast<int>(config.get_int(section, "workers", base.workers));
  return base;
}

}  // namespace jorbit
