#pragma once

#include <stdexcept>
#include <string>

namespace rdsbench {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Masks fed to a metric must agree in width and height.
struct DimensionMismatchError : Error {
  using Error::Error;
};

// Unreadable or structurally invalid input file.
struct IoError : Error {
  using Error::Error;
};

// Manifest / prediction / RLE payload violates its documented format.
struct FormatError : Error {
  using Error::Error;
};

} // namespace rdsbench
