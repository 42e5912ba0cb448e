#pragma once

#include <stdexcept>
#include <string>

namespace splatsim {

// Process exit codes used by the CLI. Library code throws the typed
// exceptions below; the CLI maps them to these codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 2,
    kExitPerception = 3,
    kExitSimulation = 4,
    kExitIo = 5,
};

class Error : public std::runtime_error {
public:
    Error(std::string message, int exit_code)
        : std::runtime_error(std::move(message)), exit_code_(exit_code) {}
    int exit_code() const { return exit_code_; }

private:
    int exit_code_;
};

// Schema/invariant violations in user-supplied inputs.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message)
        : Error(message, kExitValidation) {}
};

// Malformed files (PLY headers, corrupt payloads). Treated as validation
// failures for exit-code purposes but kept distinct for tests.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& message)
        : Error(message, kExitValidation) {}
};

// Failures in the property-perception chain. Carries the stage that failed.
class PerceptionError : public Error {
public:
    PerceptionError(std::string stage, const std::string& message)
        : Error("[" + stage + "] " + message, kExitPerception),
          stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

class SimulationError : public Error {
public:
    explicit SimulationError(const std::string& message)
        : Error(message, kExitSimulation) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error(message, kExitIo) {}
};

}  // namespace splatsim
