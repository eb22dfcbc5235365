#include "cantor_ei/cli.hpp"

#include "cantor_ei/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace cantor_ei::cli {

namespace {

std::string trim(std::string s)
{
    const char* ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key)
{
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

} // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        if (key.empty()) throw config_error(path + ":" + std::to_string(lineno) + ": empty key");
        if (key == "config") throw config_error(path + ":" + std::to_string(lineno) + ": nested config files are not supported");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

std::vector<std::string> merge_config_file(std::vector<std::string> args)
{
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw config_error("--config needs a file name");
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty()) return args;
    const auto original = args;
    for (auto& [key, value] : read_config_file(path))
        if (!given_on_command_line(original, key)) args.push_back("--" + key + "=" + value);
    return args;
}

std::uint64_t fnv1a64(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_header(std::ostream& out, const Header& h)
{
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(h.canonical_config)));
    out << "# cantor-ei " << version << '\n';
    out << "# command: " << h.command << '\n';
    out << "# config_hash: " << hash << '\n';
    out << "# config: " << h.canonical_config << '\n';
    if (!h.seed.empty()) out << "# seed: " << h.seed << '\n';
    for (const auto& note : h.notes) out << "# " << note << '\n';
}

} // namespace cantor_ei::cli
