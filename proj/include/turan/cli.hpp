#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace turan::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_assertion = 1,
    exit_usage = 2,
    exit_resource = 3,
};

enum class Engine { naive, dft, both };
enum class Format { json, csv };

struct RunConfig {
    std::string command;
    std::uint64_t q = 0;
    unsigned h = 2;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> range;
    std::uint64_t seed = 0;
    std::uint64_t budget_table = std::uint64_t{1} << 24;
    std::uint64_t budget_ops = std::uint64_t{1} << 32;
    std::uint64_t budget_transform = std::uint64_t{1} << 26;
    std::uint64_t trim_budget = 2000;
    double epsilon = 0.25;
    unsigned threads = 1;
    unsigned trials = 100;
    std::string kind = "roots-of-unity";
    std::string input;
    std::string out;
    Format format = Format::json;
    Engine engine = Engine::dft;
};

// Parses "a:b" (inclusive). Throws DomainError on malformed input.
std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text);

// Runs the tool on argv-style arguments (args[0] is the program name).
// Output goes to `out` unless --out names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace turan::cli
