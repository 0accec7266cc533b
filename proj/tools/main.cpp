#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "rfdeauth/error.hpp"

// Exit codes: 0 success, 2 bad input (arguments, files, parsing), 3 failed
// validation, 4 anything unexpected.
int main(int argc, char** argv) {
  rfdeauth::cli::GlobalOptions globals;
  CLI::App app{"rfdeauth: device-free deauthentication from wireless signal strength"};
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  app.require_subcommand(1);
  app.add_option("--config", globals.config, "Pipeline configuration file (default: reference configuration)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", globals.seed, "Random seed")->capture_default_str();
  app.add_option("--out-dir", globals.out_dir, "Directory for output files")->capture_default_str();
  rfdeauth::cli::register_commands(app, globals);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const rfdeauth::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const rfdeauth::ValidationError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
