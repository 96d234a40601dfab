#pragma once

#include <stdexcept>
#include <string>

namespace dumpscrub {

// Exit codes surfaced by the command line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_config = 1,
    exit_parse = 2,
    exit_runtime = 3,
};

// Bad or inconsistent configuration (unknown keys, invalid ranges, missing files
// named by the config, policy violations such as AES on a dump input).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data: dump pages, manifests, reports, augment sources.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Failures while executing an otherwise valid run (I/O, worker faults).
class RunError : public std::runtime_error {
public:
    explicit RunError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dumpscrub
