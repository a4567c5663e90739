#include <fstream>

#include <CLI11.hpp>

#include "rivergraph/cli.hpp"
#include "rivergraph/error.hpp"

namespace rivergraph::cli {

std::vector<std::pair<std::string, std::string>> read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open config file " + path.string());
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw Error(Errc::parse_error, path.string() + ": " + e.what());
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const CLI::ConfigItem& item : items) {
    // Section enter/leave markers.
    if (item.name == "++" || item.name == "--") continue;
    std::string value;
    for (std::size_t k = 0; k < item.inputs.size(); ++k) value += (k ? "," : "") + item.inputs[k];
    out.emplace_back(item.fullname(), value);
  }
  return out;
}

}  // namespace rivergraph::cli
