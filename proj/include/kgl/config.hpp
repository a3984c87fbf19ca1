#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "kgl/experiments.hpp"

namespace kgl {

/// Parse a sectioned key/value config and apply dotted-key overrides
/// ("run.h0=0.01"). All errors are ConfigError.
SweepConfig parse_config(const std::filesystem::path& path,
                         const std::vector<std::string>& overrides = {});
SweepConfig parse_config_text(const std::string& text,
                              const std::vector<std::string>& overrides = {});

/// Every materialized key as "section.key" = value, in a stable order.
std::vector<std::pair<std::string, std::string>> config_echo(const SweepConfig& config);

Study parse_study(const std::string& name);
EquationKind parse_equation(const std::string& name);
Scheme parse_scheme(const std::string& name);
Dealias parse_dealias(const std::string& name);
DataFamily parse_family(const std::string& name);
Pairing parse_pairing(const std::string& name);

}  // namespace kgl
