#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace rivergraph::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCompute = 3;
inline constexpr int kExitUsage = 64;

// Runs one `rivergraph` invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

// Flattened key/value pairs from a TOML/INI-style file. Section names are
// joined to keys with '.', so `[column_map] timestamp = "t"` yields
// ("column_map.timestamp", "t"). Array values are joined with ','.
std::vector<std::pair<std::string, std::string>> read_config(const std::filesystem::path& path);

}  // namespace rivergraph::cli
