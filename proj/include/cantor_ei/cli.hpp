#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cantor_ei::cli {

inline constexpr const char* version = "0.1.0";

enum exit_code : int { ok = 0, config = 2, resource = 3, nonconvergence = 4, io = 5 };

/// Flat key=value file; '#' starts a comment. config_error on malformed lines.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Appends "--key=value" for every key of the --config file that is not
/// already given as a flag, so flags win over the file.
std::vector<std::string> merge_config_file(std::vector<std::string> args);

std::uint64_t fnv1a64(std::string_view text);

struct Header {
    std::string command;
    std::string canonical_config; ///< hashed into config_hash
    std::string seed;             ///< empty when the command draws no random numbers
    std::vector<std::string> notes;
};

/// '#' comment block: tool and version, command, config hash, seed, notes.
void write_header(std::ostream& out, const Header& h);

/// Whole command-line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cantor_ei::cli
