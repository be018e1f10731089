#pragma once

// Command-line front end: key=value configuration with flag overrides, field
// validation and the seven commands.

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "csim/dynamics.hpp"
#include "csim/errors.hpp"

namespace csim {

enum class Command {
    find_misiurewicz,
    verify_similarity,
    render_julia,
    render_locus,
    trace_ray,
    landing_check,
    transversality,
};

const char* to_string(Command c) noexcept;
Command command_from_string(const std::string& name);

struct RunConfig {
    Command command = Command::find_misiurewicz;
    int p = 1;
    int ell = 1;
    int m = 1;
    std::optional<Complex> seed_a;
    std::optional<Complex> seed_v;
    /// Map for render-julia and trace-ray when no certificate is given.
    std::optional<Complex> a;
    std::optional<Complex> v;
    double r = 2.0;
    std::size_t resolution = 512;
    int k_min = 1;
    int k_max = 6;
    std::size_t max_iter = 500;
    int mu = 1;
    std::optional<double> theta;
    std::filesystem::path output_dir = ".";
    std::optional<std::filesystem::path> certificate;
    double s_start = 1.0;
    double s_end = 1e-5;
    int steps = 40;
    std::vector<double> s_ladder{1e-1, 1e-2, 1e-3, 1e-4};
    double radius = 1e-3;
    std::size_t samples = 64;
};

using KeyValues = std::map<std::string, std::string>;

/// Every key accepted in configuration files and as --key flags.
const std::vector<std::string>& config_keys();

/// Flat key=value lines; '#' starts a comment. Throws Config on syntax errors
/// and unknown keys.
KeyValues parse_key_values(const std::string& text);

/// Builds and validates a RunConfig. Errors are Config and name the field.
RunConfig build_config(const std::string& command, const KeyValues& values);

/// Runs one command, printing a summary to `out`. Library errors propagate.
void run_command(const RunConfig& config, std::ostream& out);

/// 0 success, 2 solver failure, 3 precision or domain guard, 4 configuration.
int exit_code_for(ErrorKind kind) noexcept;

/// Full entry point: parses argv, merges the config file and flags, runs the
/// command and maps failures to exit codes.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace csim
