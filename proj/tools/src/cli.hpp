#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "loglap/quadrature.hpp"

namespace loglap::cli {

enum class Command { constants, eval, assemble, eig, slimit, faberkrahn, maxprin, poisson, hardy, barrier };
enum class Format { json, csv };

const char* command_name(Command c);

struct RunConfig {
    Command command = Command::constants;
    std::vector<std::string> domains;
    int dim = 1;
    int cells = 64;  // cells per unit length
    std::vector<double> s_list;
    double tau = 0.4;
    int count = 4;
    double R = 0.25;
    std::vector<double> rho;
    std::vector<double> shells;
    std::string field = "bump";
    std::vector<double> x;
    std::string kind = "potential";
    std::optional<double> lambda1_classical;
    std::string dump;
    Format format = Format::json;
    std::string output;
    QuadratureConfig quad;
    int threads = 1;
};

// Raised for malformed command lines; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& what, bool help = false) : std::runtime_error(what), help_(help) {}
    bool help() const { return help_; }

private:
    bool help_;
};

RunConfig parse_args(const std::vector<std::string>& args);

// Writes the report (or an error object) and returns the exit code.
int run_command(const RunConfig& cfg, std::ostream& out);

// parse_args + run_command with usage errors reported on err.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace loglap::cli
