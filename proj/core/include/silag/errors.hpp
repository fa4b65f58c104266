#ifndef SILAG_ERRORS_HPP
#define SILAG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace silag {

// Bad user input: invalid cell counts, misaligned material boundaries, ...
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid thermodynamic input to an EOS call (nonpositive V, p + Pi <= 0).
class EosDomainError : public std::domain_error {
public:
    explicit EosDomainError(const std::string& what) : std::domain_error(what) {}
};

// Positivity loss during time integration; carries the offending cell.
class StepFailure : public std::runtime_error {
public:
    StepFailure(const std::string& what, int cell)
        : std::runtime_error(what + " (cell " + std::to_string(cell) + ")"),
          cell_index(cell) {}
    int cell_index;
};

// Riemann problem admits no positive-pressure solution.
class VacuumError : public std::runtime_error {
public:
    explicit VacuumError(const std::string& what) : std::runtime_error(what) {}
};

// Graded-mesh parameter search could not reach the quality threshold.
class MeshTuningError : public std::runtime_error {
public:
    MeshTuningError(const std::string& what, double best_q)
        : std::runtime_error(what + " (best q = " + std::to_string(best_q) + ")"),
          best_quality(best_q) {}
    double best_quality;
};

} // namespace silag

#endif
