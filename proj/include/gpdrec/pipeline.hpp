#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpdrec/io.hpp"

namespace gpdrec {

inline constexpr char const* kVersion = "0.1.0";

enum class ExitCode : int { ok = 0, property_failed = 1, invalid_input = 2, capacity = 3, internal = 4 };

// One command invocation.  Inputs are parsed JSON documents (instance,
// presentation, graph, semigroup, action, or a report for verify-witness).
// Options: cap, seed, seeds, format ("text" | "machine"), ring, group,
// engine ("brute" | "generated" | "both"), and the leavitt switches
// build-groupoid, verify-ck, hypothesis.
struct Request {
  std::string command;
  std::vector<io::Json> inputs;
  io::Json options = io::Json::object();

  io::Json to_json() const;
  static Request from_json(io::Json const& j);
};

struct Report {
  std::string command;
  std::string digest;  // FNV-1a 64 of command, inputs, options (minus format) and version
  ExitCode exit_code = ExitCode::ok;
  io::Json result = io::Json::object();
  std::optional<std::string> error;
  std::optional<io::Json> witness;
  std::map<std::string, std::string> artifacts;  // "presentation", "groupoid"

  io::Json to_json() const;
  std::string render(bool machine) const;
};

std::vector<std::string> const& command_names();

std::string fnv1a_hex(std::string const& bytes);

// Never throws: failures become exit codes, with the error text and (for
// exit 1) a witness that verify-witness can re-validate.
Report run_command(Request const& request);

}  // namespace gpdrec
