#pragma once

#include <iosfwd>
#include <string>

#include "pfspec/resolvent.hpp"

// Columnar state file, the CLI-facing exchange format:
//   optional leading '#' comment lines (provenance)
//   header  kx,ky,kz,weight,lambda,re,im
//   exactly one lambda = 0 row carrying the vacuum amplitude in (re, im);
//   lambda = 1 and lambda = 2 blocks list the same nodes in the same order.
// Floats are written with 17 significant digits so a round trip is exact.

namespace pfspec {

void write_state_csv(std::ostream& os, const StateVector& u,
                     const std::string& comment = "");
void write_state_csv(const std::string& path, const StateVector& u,
                     const std::string& comment = "");

StateVector read_state_csv(std::istream& is);
StateVector read_state_csv(const std::string& path);

// Locale-independent float formatting, 17 significant digits.
std::string format_double(double x);

}  // namespace pfspec
