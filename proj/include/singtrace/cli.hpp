#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "singtrace/ideals.hpp"
#include "singtrace/limits.hpp"
#include "singtrace/sequence.hpp"

namespace singtrace::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUsage = 2, kPrecondition = 3 };

/// harmonic | power:<beta> | geometric:<r> | psi-inc:<psi spec> |
/// oscillating | file:<csv> | values:<v0,v1,...>
DecreasingSequence parse_sequence(const std::string& spec);

/// log | power:<alpha> | linear | dpss | file:<csv of increments>
PsiFunction parse_psi(const std::string& spec);

/// cesaro:<k> | logmean | dilavg:<d1,d2,...>[@<order>] | tail:<fraction>
LimitProcedure parse_limit(const std::string& spec, Index horizon);

/// Comma-separated reals.
std::vector<double> parse_reals(const std::string& text);

/// Runs one subcommand; args excludes the program name. The JSON record
/// goes to `out`, usage text, errors and wall time to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace singtrace::cli
