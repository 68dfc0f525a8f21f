// SPDX-License-Identifier: Apache-2.0
//
// rangeseg: range-image LiDAR segmentation pipeline tools.
// Exit codes: 0 success, 1 usage error, 2 data or format error.

#include <iostream>
#include <stdexcept>

#include "commands.hpp"
#include "rangeseg/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Range-image LiDAR segmentation tools"};
  app.require_subcommand(1);
  // "--h" is the image height, so help keeps only its long form.
  app.set_help_flag("--help", "print this help and exit");
  int exit_code = 0;
  rangeseg::cli::register_commands(app, exit_code);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "\n" << app.help();
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const rangeseg::FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 2;
  } catch (const rangeseg::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
