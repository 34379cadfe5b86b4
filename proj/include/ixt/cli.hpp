#pragma once

// Command-line front end: kernel, transform, invert, pde, verify and
// golden-check subcommands.
//
// Exit codes: 0 ok, 2 domain or usage error, 3 tolerance failure, 4 I/O error.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ixt::cli {

enum ExitCode : int { kOk = 0, kDomain = 2, kTolerance = 3, kIo = 4 };

enum class Format { csv, json };

struct RunConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-15;
    /// Pass/fail tolerance of the subcommand (route agreement, round trip).
    /// Zero selects the subcommand's default.
    double tol = 0.0;
    double gamma = 0.25;
    double height = 0.0;
    double nodes_per_unit = 8.0;
    Format format = Format::csv;
    std::string out;
    std::string golden;
    int jobs = 1;

    std::vector<double> taus;
    std::vector<double> xs;
    std::string route = "direct";

    std::string kind = "F";
    std::string function;
    std::string mode;

    std::vector<double> rs;
    std::vector<double> thetas;
    double beta = 1.4;
    double h = 1e-2;

    std::vector<std::string> only;
    unsigned long long seed = 20170101;

    void validate() const;
};

/// Applies key = value settings (config-file keys equal flag names without
/// the leading dashes). Throws DomainError on unknown keys or bad values.
void apply_settings(RunConfig& config, const std::map<std::string, std::string>& settings);

/// Flat INI-style text: `key = value` lines, `#` or `;` comments, [section]
/// headers ignored.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ixt::cli
