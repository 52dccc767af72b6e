#pragma once

// Run configuration: flat "dotted.key = value" text, one entry per line,
// '#' starts a comment.  Every key is declared in a fixed schema; a key not in
// the schema, a repeated key or a malformed value is a ParseError.  The model
// parameters and the command have no defaults.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "rabilab/dynamics.hpp"
#include "rabilab/errors.hpp"
#include "rabilab/limits.hpp"
#include "rabilab/params.hpp"

namespace rabilab::cli {

/// Syntax problem: unknown or repeated key, malformed value, missing required key.
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, std::string key);
    int line() const { return line_; }
    const std::string& key() const { return key_; }

private:
    int line_;
    std::string key_;
};

/// Well-formed input that violates an invariant; what() names the invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

enum class Command { check_identities, sweep, fock_limit, transform_limit, evolve, compare, diagram };

std::string command_name(Command c);
/// Throws ParseError(line 0) for an unknown name.
Command command_from_name(const std::string& name);

enum class EvolveModel { quantum, semiclassical, displaced };

struct FockLimitSettings {
    double amplitude = 0.5;
    std::vector<int> orders{0, 1, 2};
    std::vector<int> levels{10, 100, 1000};
};

struct DiagramSettings {
    std::vector<double> amplitudes{0.0, 0.25, 0.5};
    double lambda_small = 0.1;
    std::vector<double> times{0.0, 0.7, 2.1, 4.0};
    int level = 0;
};

struct EvolveSettings {
    EvolveModel model = EvolveModel::quantum;
    /// Displaced-basis levels kept by the displaced model.
    int levels = 12;
    /// Number of leading amplitudes written as re/im columns.
    int amplitude_columns = 0;
};

struct CompareSettings {
    double amplitude = 0.25;
    std::vector<double> lambdas{0.1, 0.05, 0.025};
    double alpha_phase = 0.0;
};

struct RunConfig {
    Command command = Command::check_identities;
    ModelParams params;
    DriveParams drive;
    Complex alpha{0.0, 0.0};
    std::string spin = "up";
    int n0 = 0;
    limits::SweepConfig sweep;
    FockLimitSettings fock;
    limits::TransformLimitConfig transform;
    DiagramSettings diagram;
    dyn::PropagationConfig propagation;
    EvolveSettings evolve;
    CompareSettings compare;
    int identity_samples = 40;

    std::filesystem::path output_dir = "rabilab-out";
    std::uint64_t seed = 1;
    double tolerance_scale = 1.0;

    /// Every schema key with its resolved value, in schema order.
    std::vector<std::pair<std::string, std::string>> resolved;

    /// The initial spin state named by spin: up, down, plus or minus.
    Eigen::Vector2cd spin_state() const;

    /// Throws ValidationError naming the first violated invariant.
    void validate() const;
};

/// Key/value pairs that replace file entries (command-line options).
using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Parses and validates.  Throws ParseError or ValidationError.
RunConfig parse_config(std::istream& in, const Overrides& overrides = {});
RunConfig parse_config_file(const std::filesystem::path& path, const Overrides& overrides = {});

/// Documented schema: key, default ("" for required), description.
struct SchemaEntry {
    std::string key;
    std::string default_value;
    std::string description;
};
std::vector<SchemaEntry> config_schema();

}  // namespace rabilab::cli
