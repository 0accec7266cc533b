#pragma once

#include <cstdint>
#include <string>

namespace CLI {
class App;
}

namespace rfdeauth::cli {

struct GlobalOptions {
  std::string config;  // empty: reference configuration
  std::uint64_t seed{1};
  std::string out_dir{"."};
};

// Adds simulate, detect, train, run, evaluate and analyze to `app`. Each
// subcommand does its work from its parse callback and throws on failure.
void register_commands(CLI::App& app, GlobalOptions& globals);

}  // namespace rfdeauth::cli
