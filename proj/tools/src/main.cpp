#include "commands.hpp"

#include "gramentropy/ceml.hpp"
#include "gramentropy/errors.hpp"

#include <iostream>

int main(int argc, char** argv) {
  using namespace gramentropy;
  namespace cli = gramentropy::cli;

  CLI::App app{"Matrix-based Renyi entropy and conditional-entropy metric learning"};
  app.set_version_flag("--version", GRAMENTROPY_VERSION);
  app.require_subcommand(1);
  std::function<int()> run;
  cli::register_commands(app, run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitInput;
  }

  try {
    return run();
  } catch (const DivergenceError& e) {
    std::cerr << "gramentropy: divergence: " << e.what() << '\n';
    return cli::kExitDivergence;
  } catch (const InputError& e) {
    std::cerr << "gramentropy: input error: " << e.what() << '\n';
    return cli::kExitInput;
  } catch (const Error& e) {
    std::cerr << "gramentropy: numerical error: " << e.what() << '\n';
    return cli::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "gramentropy: error: " << e.what() << '\n';
    return cli::kExitInput;
  }
}
