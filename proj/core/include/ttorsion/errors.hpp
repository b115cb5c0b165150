#pragma once

#include <stdexcept>
#include <string>

namespace ttorsion {

// Base class for all library errors.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Mathematically invalid input (bad dimension, non-positive curvature, ...).
class domain_error : public error {
public:
  explicit domain_error(const std::string& what) : error(what) {}
};

// Malformed or inconsistent run configuration.
class config_error : public error {
public:
  explicit config_error(const std::string& what) : error(what) {}
};

// A computation could not certify its own accuracy claim.
class certification_error : public error {
public:
  explicit certification_error(const std::string& what) : error(what) {}
};

}  // namespace ttorsion
