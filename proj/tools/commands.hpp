// SPDX-License-Identifier: Apache-2.0

#ifndef RANGESEG_TOOLS_COMMANDS_HPP
#define RANGESEG_TOOLS_COMMANDS_HPP

#include <CLI11.hpp>

namespace rangeseg::cli {

/// Adds every subcommand to `app`. Subcommands run from their CLI11
/// callbacks; a failed selftest sets `exit_code` to 2.
void register_commands(CLI::App& app, int& exit_code);

}  // namespace rangeseg::cli

#endif  // RANGESEG_TOOLS_COMMANDS_HPP
