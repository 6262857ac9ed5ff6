#pragma once

#include <string>
#include <vector>

namespace ultraposet {

/// Outcome of one command-line invocation. Lines starting with "#? " are the
/// machine-readable report (stable key=value fields); the rest is
/// human-oriented commentary such as witnesses, always rendered with element
/// labels. Exit code contract: 0 = every checked property holds, 1 = a
/// checked property failed (a witness is in the lines), 2 = usage or input
/// error.
struct RunReport {
  std::string commandEcho;
  std::vector<std::string> lines;
  int exitCode = 0;
};

/// Executes one command (args excludes the program name) and collects the
/// report instead of printing, so runs can be driven in-process.
RunReport dispatch(const std::vector<std::string>& args);

/// dispatch + print every line to stdout; returns the exit code.
int run_cli(const std::vector<std::string>& args);

}  // namespace ultraposet
