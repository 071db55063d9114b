#pragma once

// Job parsing, the six subcommands and the command line driver. Every command
// returns a JSON report with a stable key order and a pass/fail verdict.

#include "logflat/liecore.hpp"
#include "logflat/moduli.hpp"
#include "logflat/wpoly.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace logflat::cli {

using Json = nlohmann::ordered_json;

/// A validated job. `payload` keeps the command-specific members.
struct JobSpec {
    CurveParams params{2, 3};
    std::size_t n = 1;
    std::vector<Rational> S;
    LieMatrix N0;
    std::int64_t w_max = 300;
    Json payload;

    DglaContext context() const { return {params, SemisimpleData(S), w_max}; }
    ResidueDatum residue_datum() const { return ResidueDatum::make(SemisimpleData(S), N0); }
};

/// Throws InputError on any schema violation.
JobSpec parse_job(const Json& job, std::optional<std::int64_t> w_max_override = std::nullopt);

struct CommandResult {
    Json report;
    bool pass = true;
};

struct RunOptions {
    std::uint64_t seed = 0;
    bool inject_side_condition_failure = false;
};

CommandResult cmd_basis(const JobSpec& job);
CommandResult cmd_mc(const JobSpec& job, const RunOptions& opts = {});
CommandResult cmd_normalize(const JobSpec& job);
CommandResult cmd_tangent(const JobSpec& job);
CommandResult cmd_hpt(const JobSpec& job, const RunOptions& opts = {});
CommandResult cmd_manin(const JobSpec& job);

/// Exit codes: 0 success, 1 verification failure, 2 input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace logflat::cli
