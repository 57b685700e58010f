#ifndef GVFNAV_ERRORS_HPP
#define GVFNAV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gvfnav {

// Query or geometry outside the metric bounds of a grid or field.
class OutOfBoundsError : public std::runtime_error {
public:
  explicit OutOfBoundsError(const std::string& what) : std::runtime_error(what) {}
};

// Distance transform requested on a grid with no occupied cell; the caller
// decides the fallback (typically "no obstacles in window").
class AllFreeError : public std::runtime_error {
public:
  explicit AllFreeError(const std::string& what) : std::runtime_error(what) {}
};

// Least-squares system lost rank (cannot happen on a full box window).
class NumericalDegeneracyError : public std::runtime_error {
public:
  explicit NumericalDegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

// Grid search exhausted without reaching the goal.
class NoPathError : public std::runtime_error {
public:
  explicit NoPathError(const std::string& what) : std::runtime_error(what) {}
};

// Local path neighborhood collapsed (near-reversing or coincident points).
class DegenerateTangentError : public std::runtime_error {
public:
  explicit DegenerateTangentError(const std::string& what) : std::runtime_error(what) {}
};

// Scene synthesis could not reach the requested obstacle density.
class SceneGenerationError : public std::runtime_error {
public:
  explicit SceneGenerationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gvfnav

#endif  // GVFNAV_ERRORS_HPP
