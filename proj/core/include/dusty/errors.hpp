#pragma once

#include <stdexcept>
#include <string>

namespace dusty {

/// Invalid or inconsistent configuration input.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A time step or setup operation failed (non-physical state, bad geometry, ...).
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

/// A drag cell contains gas but no particles of some dust fraction.
/// The cell-averaged drag solve is undefined there, so the step is aborted.
class EmptyFractionCell : public SimulationError {
public:
    EmptyFractionCell(int cell, int fraction)
        : SimulationError("cell " + std::to_string(cell) +
                          " contains gas but no particles of dust fraction " +
                          std::to_string(fraction)),
          cell_index(cell), fraction_index(fraction) {}

    int cell_index;
    int fraction_index;
};

/// Reference-solution (oracle) failure: root bracketing, star-pressure
/// iteration, vacuum formation, degenerate parameters.
class OracleError : public std::runtime_error {
public:
    explicit OracleError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dusty
